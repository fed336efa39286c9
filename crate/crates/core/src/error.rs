use thiserror::Error;

use crate::model::Slot;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("job set is infeasible")]
    InfeasibleJobSet,
    #[error("event of length {length} does not fit in a timeline of {timeline} slots")]
    NoValidPlacement { length: Slot, timeline: Slot },
    #[error("total event length {total} exceeds the timeline length {timeline}")]
    TotalEventLengthExceedsTimeline { total: i128, timeline: Slot },
    #[error("timeline enumeration needs {required} placement evaluations, cap is {cap}")]
    TimelineTooLarge { required: u128, cap: u64 },
    #[error("{what} needs {required} states, budget is {cap}")]
    BudgetExceeded { what: &'static str, required: u128, cap: u64 },
    #[error("event {event} is placed more than once")]
    DuplicatePlacement { event: usize },
    #[error("unknown event index {event}")]
    UnknownEvent { event: usize },
    #[error("placement of event {event} at {start} leaves the timeline")]
    PlacementOutOfBounds { event: usize, start: Slot },
    #[error("one-event requires exactly one event, found {events}")]
    OneEventRequired { events: usize },
    #[error("pivot job {job} does not contain slot {slot}")]
    InvalidPivot { job: usize, slot: Slot },
    #[error("matroid has {required} unit jobs or slots, cap is {cap}")]
    MatroidTooLarge { required: u128, cap: u64 },
    #[error("no exchange element exists")]
    NoWitness,
    #[error("oracle returned an element outside group {group}")]
    OracleContractViolation { group: usize },
    #[error("multiset sum {sum} is odd")]
    OddSum { sum: u64 },
    #[error("instance generation failed: {reason}")]
    GenerationFailed { reason: &'static str },
}
