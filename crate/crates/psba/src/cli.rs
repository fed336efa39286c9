//! Command-line interface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input (unparsable or
//! invalid instance, inconsistent parameters, failed verification), 3 budget
//! exceeded, 4 an event longer than the timeline.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use psba_core::brute::{brute_optimum_with, OracleBudget};
use psba_core::generators::{gen_partition, gen_random, FlexibilityMix, GenSpec};
use psba_core::one_event::best_placement;
use psba_core::solvers::{greedy_poly_t, solve_general, SolveOptions};
use psba_core::{Error, EventSchedule, Instance};

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::format::{InstanceFile, SolutionFile};
use crate::svg::render_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    General,
    GreedyPoly,
    OneEvent,
    Brute,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::General => "general",
            Algorithm::GreedyPoly => "greedy-poly",
            Algorithm::OneEvent => "one-event",
            Algorithm::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Random,
    Partition,
}

#[derive(Parser)]
#[command(name = "psba", version, about = "Place public events so that busy agents can attend")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct BudgetArgs {
    /// Most placement evaluations of the enumeration greedy
    #[arg(long, default_value_t = SolveOptions::default().enumeration_cap)]
    enumeration_cap: u64,
    /// Most partial schedules the exhaustive search may evaluate
    #[arg(long, default_value_t = OracleBudget::default().max_search_nodes)]
    search_nodes: u64,
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_search_nodes: self.search_nodes,
            ..OracleBudget::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the solution as JSON
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        algorithm: Algorithm,
        /// Remove overlaps between events at the end when they fit side by side
        #[arg(long, value_enum, default_value = "on")]
        shift: Toggle,
        /// Also write an SVG chart of the solution
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Seed recorded in the solution file
        #[arg(long)]
        seed: Option<u64>,
        /// Print solver counters to stderr
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Recompute the total agreement of a solution file
    Agreement {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Fail when the recomputed values differ from the recorded ones
        #[arg(long)]
        verify: bool,
    },
    /// Generate an instance and print it as JSON
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        agents: usize,
        #[arg(long, default_value_t = 2)]
        events: usize,
        #[arg(long, default_value_t = 12)]
        timeline: i64,
        #[arg(long, default_value_t = 0)]
        jobs_min: usize,
        #[arg(long, default_value_t = 4)]
        jobs_max: usize,
        #[arg(long, default_value_t = 1)]
        length_min: i64,
        #[arg(long, default_value_t = 4)]
        length_max: i64,
        /// Relative weights of rigid, unit and general jobs
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1u32, 1, 2])]
        mix: Vec<u32>,
        /// Numbers of the partition family
        #[arg(long, value_delimiter = ',')]
        set: Vec<u64>,
    },
    /// Run algorithms over a directory of instances and print CSV
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long = "algorithm", value_enum, default_values_t = [Algorithm::General, Algorithm::GreedyPoly])]
        algorithms: Vec<Algorithm>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn io(e: impl std::fmt::Display) -> Self {
        Failure::new(1, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::TimelineTooLarge { .. } | Error::MatroidTooLarge { .. } => 3,
        Error::NoValidPlacement { .. } => 4,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub schedule: EventSchedule,
    pub total: i64,
    pub rounds: usize,
    pub flow_calls: u64,
    pub oracle_calls: u64,
    pub objective_evaluations: u64,
    pub slot_evaluations: u64,
}

pub fn run_algorithm(
    instance: &Instance,
    algorithm: Algorithm,
    options: &SolveOptions,
    budget: &OracleBudget,
) -> psba_core::Result<RunOutcome> {
    match algorithm {
        Algorithm::General | Algorithm::GreedyPoly => {
            let report = if algorithm == Algorithm::General {
                solve_general(instance, options)?
            } else {
                greedy_poly_t(instance, options)?
            };
            Ok(RunOutcome {
                schedule: report.schedule,
                total: report.total,
                rounds: report.rounds.len(),
                flow_calls: report.flow_calls,
                oracle_calls: report.oracle_calls,
                objective_evaluations: report.objective_evaluations,
                slot_evaluations: report.slot_evaluations,
            })
        }
        Algorithm::OneEvent => {
            let (start, total) = best_placement(instance)?;
            Ok(RunOutcome {
                schedule: instance.schedule(&[(0, start)])?,
                total,
                rounds: 1,
                flow_calls: 0,
                oracle_calls: 1,
                objective_evaluations: 0,
                slot_evaluations: 0,
            })
        }
        Algorithm::Brute => {
            let (schedule, total) = brute_optimum_with(instance, budget)?;
            Ok(RunOutcome {
                schedule,
                total,
                rounds: 0,
                flow_calls: 0,
                oracle_calls: 0,
                objective_evaluations: 0,
                slot_evaluations: 0,
            })
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let file = InstanceFile::parse(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok(file.to_instance())
}

/// Rejects instances whose events cannot be placed (exit 4) or that fail
/// validation (exit 2, one violation per line).
fn check_instance(instance: &Instance) -> Result<(), Failure> {
    if instance.timeline_length >= 1 {
        if let Some(e) = instance.events.iter().find(|e| e.length > instance.timeline_length) {
            return Err(Error::NoValidPlacement {
                length: e.length,
                timeline: instance.timeline_length,
            }
            .into());
        }
    }
    let report = instance.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::new(2, report.to_string().trim_end()))
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve {
            input,
            algorithm,
            shift,
            svg,
            seed,
            stats,
            budget,
        } => {
            let instance = read_instance(&input)?;
            check_instance(&instance)?;
            let options = SolveOptions {
                shift: shift == Toggle::On,
                enumeration_cap: budget.enumeration_cap,
            };
            let clock = Instant::now();
            let run = run_algorithm(&instance, algorithm, &options, &budget.budget())?;
            let elapsed = clock.elapsed();
            let solution = SolutionFile::new(&instance, &run.schedule, algorithm.name(), seed)?;
            if let Some(path) = svg {
                let chart = render_svg(&instance, &run.schedule)?;
                std::fs::write(&path, chart).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            }
            if stats {
                let _ = writeln!(
                    stderr,
                    "{}: total {}, {} rounds, {} flow calls, {} oracle calls, {} objective evaluations, {} slot evaluations, {:.3} ms",
                    algorithm.name(),
                    run.total,
                    run.rounds,
                    run.flow_calls,
                    run.oracle_calls,
                    run.objective_evaluations,
                    run.slot_evaluations,
                    elapsed.as_secs_f64() * 1e3
                );
            }
            stdout.write_all(solution.to_json().as_bytes()).map_err(Failure::io)
        }
        Command::Agreement {
            input,
            solution,
            verify,
        } => {
            let instance = read_instance(&input)?;
            check_instance(&instance)?;
            let text =
                std::fs::read_to_string(&solution).map_err(|e| Failure::io(format!("{}: {e}", solution.display())))?;
            let recorded =
                SolutionFile::parse(&text).map_err(|e| Failure::new(2, format!("{}: {e}", solution.display())))?;
            let schedule = recorded
                .schedule(&instance)
                .map_err(|e| Failure::new(2, format!("{}: {e}", solution.display())))?;
            let recomputed = SolutionFile::new(&instance, &schedule, &recorded.algorithm, recorded.seed)?;
            if verify {
                if recomputed.total_agreement != recorded.total_agreement {
                    return Err(Failure::new(
                        2,
                        format!(
                            "recorded total agreement {} differs from recomputed {}",
                            recorded.total_agreement, recomputed.total_agreement
                        ),
                    ));
                }
                if !recorded.per_agent.is_empty() && recorded.per_agent != recomputed.per_agent {
                    return Err(Failure::new(2, "recorded per-agent agreement differs from recomputed"));
                }
            }
            writeln!(stdout, "{}", recomputed.total_agreement).map_err(Failure::io)
        }
        Command::Gen {
            family,
            seed,
            agents,
            events,
            timeline,
            jobs_min,
            jobs_max,
            length_min,
            length_max,
            mix,
            set,
        } => {
            let instance = match family {
                Family::Partition => {
                    if set.is_empty() {
                        return Err(Failure::new(2, "the partition family needs --set"));
                    }
                    gen_partition(&set)?
                }
                Family::Random => gen_random(&GenSpec {
                    seed,
                    agents,
                    events,
                    timeline_length: timeline,
                    jobs_per_agent: (jobs_min, jobs_max),
                    event_length: (length_min, length_max),
                    mix: FlexibilityMix {
                        rigid: mix[0],
                        unit: mix[1],
                        general: mix[2],
                    },
                })
                .map_err(|e| Failure::new(2, e.to_string()))?,
            };
            stdout
                .write_all(InstanceFile::from(&instance).to_json().as_bytes())
                .map_err(Failure::io)
        }
        Command::Bench {
            dir,
            algorithms,
            output,
            threads,
            budget,
        } => {
            let config = BenchConfig {
                algorithms,
                options: SolveOptions {
                    enumeration_cap: budget.enumeration_cap,
                    ..SolveOptions::default()
                },
                budget: budget.budget(),
                threads,
            };
            let rows = run_bench(&dir, &config).map_err(|e| Failure::io(format!("{e:#}")))?;
            match output {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                    write_csv(&rows, file)
                }
                None => write_csv(&rows, &mut *stdout),
            }
            .map_err(|e| Failure::io(format!("{e:#}")))
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
