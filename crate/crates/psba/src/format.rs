//! JSON instance and solution files.
//!
//! Slots are 1-based in files, as in the library. Parse errors name the JSON
//! path of the offending value, e.g. `agents[0].jobs[1].release`.

use std::fmt;

use psba_core::flow::max_agreement;
use psba_core::{Agent, Event, EventSchedule, Instance, Job};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub timeline_length: i64,
    pub events: Vec<EventEntry>,
    pub agents: Vec<AgentEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventEntry {
    pub id: String,
    pub length: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub id: String,
    pub jobs: Vec<JobEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobEntry {
    pub release: i64,
    pub deadline: i64,
    pub processing: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub placements: Vec<PlacementEntry>,
    pub total_agreement: i64,
    pub per_agent: Vec<AgentAgreement>,
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementEntry {
    pub event: String,
    pub start: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentAgreement {
    pub agent: String,
    pub agreement: i64,
}

/// A parse or lookup failure located by its JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| FormatError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Ok(value)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn to_instance(&self) -> Instance {
        Instance::new(
            self.timeline_length,
            self.events.iter().map(|e| Event::new(e.id.clone(), e.length)).collect(),
            self.agents
                .iter()
                .map(|a| {
                    Agent::new(
                        a.id.clone(),
                        a.jobs.iter().map(|j| Job::new(j.release, j.deadline, j.processing)).collect(),
                    )
                })
                .collect(),
        )
    }
}

impl From<&Instance> for InstanceFile {
    fn from(instance: &Instance) -> Self {
        InstanceFile {
            timeline_length: instance.timeline_length,
            events: instance
                .events
                .iter()
                .map(|e| EventEntry {
                    id: e.id.clone(),
                    length: e.length,
                })
                .collect(),
            agents: instance
                .agents
                .iter()
                .map(|a| AgentEntry {
                    id: a.id.clone(),
                    jobs: a
                        .jobs
                        .iter()
                        .map(|j| JobEntry {
                            release: j.release,
                            deadline: j.deadline,
                            processing: j.processing,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl SolutionFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// Builds the solution record for `schedule`, recomputing every agent's
    /// agreement.
    pub fn new(
        instance: &Instance,
        schedule: &EventSchedule,
        algorithm: &str,
        seed: Option<u64>,
    ) -> psba_core::Result<Self> {
        let per_agent = instance
            .agents
            .iter()
            .map(|a| {
                Ok(AgentAgreement {
                    agent: a.id.clone(),
                    agreement: max_agreement(a, schedule, instance.timeline_length)?.agreement,
                })
            })
            .collect::<psba_core::Result<Vec<_>>>()?;
        Ok(SolutionFile {
            placements: schedule
                .placements()
                .iter()
                .map(|p| PlacementEntry {
                    event: instance.events[p.event].id.clone(),
                    start: p.start,
                })
                .collect(),
            total_agreement: per_agent.iter().map(|a| a.agreement).sum(),
            per_agent,
            algorithm: algorithm.to_string(),
            seed,
        })
    }

    /// Resolves event ids against `instance`.
    pub fn schedule(&self, instance: &Instance) -> Result<EventSchedule, FormatError> {
        let mut schedule = EventSchedule::new();
        for (i, p) in self.placements.iter().enumerate() {
            let located = |message: String| FormatError {
                path: format!("placements[{i}]"),
                message,
            };
            let event = instance
                .events
                .iter()
                .position(|e| e.id == p.event)
                .ok_or_else(|| located(format!("unknown event {:?}", p.event)))?;
            let placement = instance.placement(event, p.start).map_err(|e| located(e.to_string()))?;
            schedule.insert(placement).map_err(|e| located(e.to_string()))?;
        }
        Ok(schedule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_name_the_offending_path() {
        let text = r#"{"timeline_length": 5, "events": [], "agents": [{"id": "a", "jobs": [{"release": 1, "deadline": "x", "processing": 1}]}]}"#;
        let err = InstanceFile::parse(text).unwrap_err();
        assert_eq!(err.path, "agents[0].jobs[0].deadline");
        let err = InstanceFile::parse(r#"{"timeline_length": 5, "events": [], "agents": [], "extra": 1}"#).unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn instance_round_trip() {
        let instance = Instance::new(
            6,
            vec![Event::new("e", 2)],
            vec![Agent::new("a", vec![Job::new(1, 4, 2)])],
        );
        let file = InstanceFile::from(&instance);
        assert_eq!(file.to_instance(), instance);
        assert_eq!(InstanceFile::parse(&file.to_json()).unwrap(), file);
    }

    #[test]
    fn solution_lookup_errors() {
        let instance = Instance::new(6, vec![Event::new("e", 2)], vec![]);
        let sol = SolutionFile {
            placements: vec![PlacementEntry {
                event: "nope".into(),
                start: 1,
            }],
            total_agreement: 0,
            per_agent: vec![],
            algorithm: "manual".into(),
            seed: None,
        };
        assert_eq!(sol.schedule(&instance).unwrap_err().path, "placements[0]");
        let sol = SolutionFile {
            placements: vec![PlacementEntry {
                event: "e".into(),
                start: 6,
            }],
            ..sol
        };
        assert!(sol.schedule(&instance).unwrap_err().message.contains("leaves the timeline"));
    }
}
