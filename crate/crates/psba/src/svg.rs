//! Gantt-style SVG of an event schedule: one row of event spans, then one row
//! per agent with its job processing and agreement slots.
//!
//! The horizontal axis is compressed by segment. The timeline is cut at every
//! job and event endpoint, and a segment is drawn at most [`MAX_SEGMENT_SLOTS`]
//! slots wide no matter how long it is, so drawing cost depends on the number
//! of jobs and events only.

use std::fmt::Write;

use psba_core::flow::{decompose, max_agreement};
use psba_core::model::subtract_ranges;
use psba_core::{EventSchedule, Instance, Job, Slot, SlotRange};

pub const SLOT_WIDTH: f64 = 16.0;
pub const MAX_SEGMENT_SLOTS: i64 = 4;
const LABEL_WIDTH: f64 = 80.0;
const ROW_HEIGHT: f64 = 24.0;
const AXIS_HEIGHT: f64 = 28.0;
const PAD: f64 = 4.0;

const STYLE: &str = "text{font-family:monospace;font-size:11px}\
.event{fill:#4c78a8}.job{fill:#bab0ac}.agree{fill:#59a14f}\
.row{fill:none;stroke:#ddd}.gap{stroke:#e45756;stroke-dasharray:2,2}";

/// Maps slots to horizontal positions through the compressed segments.
struct Axis {
    segments: Vec<(SlotRange, f64, f64)>,
}

impl Axis {
    fn new(segments: impl Iterator<Item = SlotRange>) -> Self {
        let mut x = LABEL_WIDTH;
        let segments = segments
            .map(|r| {
                let w = SLOT_WIDTH * r.len().min(MAX_SEGMENT_SLOTS) as f64;
                let out = (r, x, w);
                x += w;
                out
            })
            .collect();
        Axis { segments }
    }

    fn right(&self) -> f64 {
        self.segments.last().map_or(LABEL_WIDTH, |&(_, x, w)| x + w)
    }

    /// Left edge of slot `t`; `t` may be one past the last slot.
    fn x(&self, t: Slot) -> f64 {
        let i = self.segments.partition_point(|(r, _, _)| r.hi < t);
        match self.segments.get(i) {
            Some(&(r, x, w)) => x + (t - r.lo) as f64 * w / r.len() as f64,
            None => self.right(),
        }
    }
}

fn rect(out: &mut String, class: &str, axis: &Axis, range: SlotRange, y: f64, title: &str) {
    let (x0, x1) = (axis.x(range.lo), axis.x(range.hi + 1));
    let _ = writeln!(
        out,
        r#"<rect class="{class}" x="{x0:.1}" y="{:.1}" width="{:.1}" height="{:.1}"><title>{}</title></rect>"#,
        y + PAD,
        x1 - x0,
        ROW_HEIGHT - 2.0 * PAD,
        escape(title)
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(instance: &Instance, schedule: &EventSchedule) -> psba_core::Result<String> {
    let rows = 1 + instance.agents.len();
    let empty = instance.agents.is_empty() && instance.events.is_empty();
    let all_jobs: Vec<Job> = instance.agents.iter().flat_map(|a| a.jobs.iter().copied()).collect();
    let axis = if empty || instance.timeline_length < 1 {
        Axis { segments: Vec::new() }
    } else {
        Axis::new(
            decompose(&all_jobs, schedule, instance.timeline_length)
                .segments
                .into_iter()
                .map(|s| s.range),
        )
    };
    let width = axis.right() + PAD;
    let height = if empty { AXIS_HEIGHT } else { AXIS_HEIGHT + rows as f64 * ROW_HEIGHT };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, "<style>{STYLE}</style>");
    if empty {
        out.push_str("</svg>\n");
        return Ok(out);
    }

    for &(r, x, w) in &axis.segments {
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{:.1}">{}</text>"#, AXIS_HEIGHT - 8.0, r.lo);
        if r.len() > MAX_SEGMENT_SLOTS {
            let mid = x + w / 2.0;
            let _ = writeln!(
                out,
                r#"<line class="gap" x1="{mid:.1}" y1="{AXIS_HEIGHT:.1}" x2="{mid:.1}" y2="{height:.1}"/>"#
            );
        }
    }

    let mut y = AXIS_HEIGHT;
    let _ = writeln!(out, r#"<text x="{PAD:.1}" y="{:.1}">events</text>"#, y + ROW_HEIGHT - 8.0);
    for p in schedule.placements() {
        let id = &instance.events[p.event].id;
        rect(&mut out, "event", &axis, p.span(), y, &format!("{id} [{}, {}]", p.start, p.span().hi));
    }

    let covered = schedule.covered();
    for agent in &instance.agents {
        y += ROW_HEIGHT;
        let _ = writeln!(
            out,
            r#"<rect class="row" x="{LABEL_WIDTH:.1}" y="{y:.1}" width="{:.1}" height="{ROW_HEIGHT:.1}"/>"#,
            axis.right() - LABEL_WIDTH
        );
        let _ = writeln!(out, r#"<text x="{PAD:.1}" y="{:.1}">{}</text>"#, y + ROW_HEIGHT - 8.0, escape(&agent.id));
        let jobs = max_agreement(agent, schedule, instance.timeline_length)?.job_schedule();
        for run in jobs.runs() {
            rect(&mut out, "job", &axis, run.range, y, &format!("job {} [{}, {}]", run.job, run.range.lo, run.range.hi));
        }
        let busy = jobs.busy();
        for c in &covered {
            for free in subtract_ranges(*c, &busy) {
                rect(&mut out, "agree", &axis, free, y, &format!("agreement [{}, {}]", free.lo, free.hi));
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
