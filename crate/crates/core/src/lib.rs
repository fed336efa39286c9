//! # psba-core
//!
//! Solvers for public event scheduling with busy agents: every agent owns a set
//! of preemptible jobs with release times, deadlines and processing times on a
//! discrete timeline, and a set of fixed-length public events has to be placed
//! on the same timeline. An agent *agrees* with a slot when some event covers it
//! and none of the agent's jobs is processed there. The goal is to place every
//! event so that the total agreement over all agents is maximal.
//!
//! The crate is `no_std` (it needs `alloc`) and contains:
//!
//!  * [`model`] - instances, schedules, validation, EDF feasibility and the
//!    overlap-elimination shift,
//!  * [`flow`] - exact agreement of any partial event schedule via a segment
//!    decomposition and min-cost max-flow,
//!  * [`matroid`] - the scheduling matroid on time slots (verification aid),
//!  * [`smgc`] - greedy for submodular maximization under group constraints
//!    with an approximate marginal oracle,
//!  * [`pwl`] and [`one_event`] - the exact single-event placement solver
//!    built from piecewise-linear agreement curves and bidirectional EDF,
//!  * [`solvers`] - the enumeration greedy (polynomial timelines) and the
//!    general framework that never enumerates the timeline,
//!  * [`brute`] and [`generators`] - exhaustive oracles and instance families.
//!
//! Slots are 1-based and every interval is an inclusive slot range.
//!
//! ```
//! use psba_core::model::{Agent, Event, Instance, Job};
//! use psba_core::solvers::{solve_general, SolveOptions};
//!
//! let instance = Instance::new(
//!     11,
//!     vec![Event::new("e1", 2), Event::new("e2", 3)],
//!     vec![
//!         Agent::new("1", vec![Job::new(1, 3, 2), Job::new(2, 7, 3)]),
//!         Agent::new("2", vec![Job::new(7, 11, 3), Job::new(5, 8, 2)]),
//!     ],
//! );
//! let report = solve_general(&instance, &SolveOptions::default()).unwrap();
//! assert!(report.total >= 5);
//! ```
#![no_std]

extern crate alloc;

pub mod brute;
mod edf;
mod error;
pub mod flow;
pub mod generators;
pub mod matroid;
pub mod model;
pub mod one_event;
pub mod pwl;
pub mod smgc;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{Agent, Event, EventSchedule, Instance, Job, JobSchedule, Placement, Slot, SlotRange};
