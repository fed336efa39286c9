//! # psba
//!
//! File formats, command-line driver, SVG charts and a benchmark harness for
//! [`psba_core`].
//!
//! ```
//! use psba::format::InstanceFile;
//!
//! let file = InstanceFile::parse(
//!     r#"{"timeline_length": 6, "events": [{"id": "talk", "length": 2}],
//!         "agents": [{"id": "ann", "jobs": [{"release": 1, "deadline": 4, "processing": 2}]}]}"#,
//! )
//! .unwrap();
//! let instance = file.to_instance();
//! assert_eq!(psba_core::one_event::best_placement(&instance).unwrap(), (1, 2));
//! ```

pub mod bench;
pub mod cli;
pub mod format;
pub mod svg;
