//! Integer-domain piecewise-linear functions.
//!
//! A function is a list of breakpoints `(x, y)` with strictly increasing `x`;
//! between consecutive breakpoints it is the straight line through them. The
//! domain is `[first x, last x]`. All functions built in this crate have
//! integer slopes on every piece, so evaluation at integer arguments is exact.

use alloc::vec::Vec;

use crate::model::{Slot, SlotRange};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    points: Vec<(Slot, i64)>,
}

impl PiecewiseLinearFn {
    /// Builds from breakpoints, which must be strictly increasing in `x` and nonempty.
    pub fn from_points(points: Vec<(Slot, i64)>) -> Self {
        assert!(!points.is_empty(), "piecewise-linear function needs a breakpoint");
        assert!(points.windows(2).all(|w| w[0].0 < w[1].0), "breakpoints must increase");
        PiecewiseLinearFn { points }
    }

    pub fn constant(domain: SlotRange, value: i64) -> Self {
        assert!(!domain.is_empty());
        let mut points = alloc::vec![(domain.lo, value)];
        if domain.hi > domain.lo {
            points.push((domain.hi, value));
        }
        PiecewiseLinearFn { points }
    }

    /// `constant + sum of weight * max(x - knot, 0)` over `domain`. Knots may
    /// lie outside the domain.
    pub fn from_ramps(domain: SlotRange, constant: i64, ramps: &[(i128, i64)]) -> Self {
        assert!(!domain.is_empty());
        let lo = domain.lo as i128;
        let hi = domain.hi as i128;
        let mut value: i128 = constant as i128;
        let mut slope: i128 = 0;
        let mut inner: Vec<(i128, i128)> = Vec::new();
        for &(knot, w) in ramps {
            if knot < lo {
                value += w as i128 * (lo - knot);
                slope += w as i128;
            } else if knot < hi {
                inner.push((knot, w as i128));
            }
        }
        inner.sort_unstable();
        let mut points = alloc::vec![(domain.lo, value as i64)];
        let mut x = lo;
        let mut i = 0;
        while i < inner.len() {
            let knot = inner[i].0;
            value += slope * (knot - x);
            x = knot;
            while i < inner.len() && inner[i].0 == knot {
                slope += inner[i].1;
                i += 1;
            }
            if knot > lo {
                points.push((knot as Slot, value as i64));
            }
        }
        if hi > lo {
            value += slope * (hi - x);
            points.push((domain.hi, value as i64));
        }
        let mut f = PiecewiseLinearFn { points };
        f.simplify();
        f
    }

    pub fn domain(&self) -> SlotRange {
        SlotRange::new(self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn breakpoints(&self) -> &[(Slot, i64)] {
        &self.points
    }

    pub fn breakpoint_count(&self) -> usize {
        self.points.len()
    }

    /// Value at `x`, `None` outside the domain.
    pub fn eval(&self, x: Slot) -> Option<i64> {
        if !self.domain().contains(x) {
            return None;
        }
        let i = self.points.partition_point(|p| p.0 < x);
        let (x1, y1) = self.points[i];
        if x1 == x {
            return Some(y1);
        }
        let (x0, y0) = self.points[i - 1];
        let num = (y1 as i128 - y0 as i128) * (x as i128 - x0 as i128);
        Some((y0 as i128 + num.div_euclid(x1 as i128 - x0 as i128)) as i64)
    }

    /// Drops breakpoints lying on the line through their neighbours.
    pub fn simplify(&mut self) {
        if self.points.len() < 3 {
            return;
        }
        let mut out: Vec<(Slot, i64)> = Vec::with_capacity(self.points.len());
        for &p in &self.points {
            while out.len() >= 2 {
                let (ax, ay) = out[out.len() - 2];
                let (bx, by) = out[out.len() - 1];
                let lhs = (by as i128 - ay as i128) * (p.0 as i128 - bx as i128);
                let rhs = (p.1 as i128 - by as i128) * (bx as i128 - ax as i128);
                if lhs == rhs {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        self.points = out;
    }

    /// Pointwise combination on the common domain; the breakpoint set of the
    /// result is contained in the union of the operands' breakpoints.
    pub fn combine(&self, other: &Self, op: impl Fn(i64, i64) -> i64) -> Option<Self> {
        let domain = self.domain().intersect(&other.domain());
        if domain.is_empty() {
            return None;
        }
        let mut xs: Vec<Slot> = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| p.0)
            .filter(|&x| domain.contains(x))
            .collect();
        xs.push(domain.lo);
        xs.push(domain.hi);
        xs.sort_unstable();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| (x, op(self.eval(x).unwrap(), other.eval(x).unwrap())))
            .collect();
        let mut f = PiecewiseLinearFn { points };
        f.simplify();
        Some(f)
    }

    pub fn add(&self, other: &Self) -> Option<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn map_linear(&self, scale: i64, offset: i64) -> Self {
        PiecewiseLinearFn {
            points: self.points.iter().map(|&(x, y)| (x, scale * y + offset)).collect(),
        }
    }

    /// `max(f, 0)`. A piece crossing zero strictly between two integers gets
    /// breakpoints at both neighbouring integers so the result stays exact on
    /// the integer domain.
    pub fn clamp_nonnegative(&self) -> Self {
        let mut points: Vec<(Slot, i64)> = Vec::with_capacity(self.points.len() + 4);
        for (i, &(x1, y1)) in self.points.iter().enumerate() {
            if i > 0 {
                let (x0, y0) = self.points[i - 1];
                if (y0 < 0 && y1 > 0) || (y0 > 0 && y1 < 0) {
                    // zero crossing at x0 + num / den, num / den > 0
                    let (mut num, mut den) = (-(y0 as i128) * (x1 as i128 - x0 as i128), y1 as i128 - y0 as i128);
                    if den < 0 {
                        num = -num;
                        den = -den;
                    }
                    let floor = x0 as i128 + num / den;
                    let ceil = floor + i128::from(num % den != 0);
                    for c in [floor, ceil] {
                        let c = c as Slot;
                        if c > x0 && c < x1 && points.last().is_none_or(|p| p.0 < c) {
                            points.push((c, self.eval(c).unwrap()));
                        }
                    }
                }
            }
            points.push((x1, y1));
        }
        let mut f = PiecewiseLinearFn {
            points: points.into_iter().map(|(x, y)| (x, y.max(0))).collect(),
        };
        f.simplify();
        f
    }

    pub fn restrict(&self, domain: SlotRange) -> Option<Self> {
        let domain = domain.intersect(&self.domain());
        if domain.is_empty() {
            return None;
        }
        let mut points = alloc::vec![(domain.lo, self.eval(domain.lo).unwrap())];
        points.extend(self.points.iter().copied().filter(|&(x, _)| domain.lo < x && x < domain.hi));
        if domain.hi > domain.lo {
            points.push((domain.hi, self.eval(domain.hi).unwrap()));
        }
        Some(PiecewiseLinearFn { points })
    }

    /// Concatenates pieces on consecutive, non-overlapping domains. Only the
    /// integer points matter between the end of one piece and the start of the
    /// next.
    pub fn glue(pieces: Vec<Self>) -> Option<Self> {
        let mut points: Vec<(Slot, i64)> = Vec::new();
        for piece in pieces {
            if let Some(last) = points.last() {
                assert!(last.0 < piece.points[0].0, "glued pieces must not overlap");
            }
            points.extend(piece.points);
        }
        if points.is_empty() {
            return None;
        }
        let mut f = PiecewiseLinearFn { points };
        f.simplify();
        Some(f)
    }

    /// Largest value over the integer domain and the smallest argument reaching it.
    pub fn argmax(&self) -> (Slot, i64) {
        let mut best = self.points[0];
        for &(x, y) in &self.points[1..] {
            if y > best.1 {
                best = (x, y);
            }
        }
        best
    }
}

/// `|interval ∩ {t, ..., t + len - 1}|` as a function of `t` over `domain`.
/// Its slope changes only at `r - len`, `r`, `d + 1 - len` and `d + 1`.
pub fn overlap_fn(interval: SlotRange, event_length: i64, domain: SlotRange) -> PiecewiseLinearFn {
    PiecewiseLinearFn::from_ramps(domain, 0, &overlap_ramps(interval, event_length))
}

pub(crate) fn overlap_ramps(interval: SlotRange, event_length: i64) -> [(i128, i64); 4] {
    let r = interval.lo as i128;
    let end = interval.hi as i128 + 1;
    let l = event_length as i128;
    [(r - l, 1), (r, -1), (end - l, -1), (end, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn direct_overlap(iv: SlotRange, l: i64, t: Slot) -> i64 {
        iv.overlap_len(&SlotRange::new(t, t + l - 1))
    }

    #[test]
    fn overlap_of_three_slot_interval_with_length_two() {
        let iv = SlotRange::new(3, 5);
        let f = overlap_fn(iv, 2, SlotRange::new(1, 10));
        let xs: Vec<Slot> = f.breakpoints().iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![1, 3, 4, 6, 10]);
        assert_eq!([2, 3, 4, 5].map(|t| f.eval(t).unwrap()), [1, 2, 2, 1]);
        for t in 1..=10 {
            assert_eq!(f.eval(t).unwrap(), direct_overlap(iv, 2, t));
        }
    }

    #[test]
    fn exact_cover_is_a_single_peak() {
        let iv = SlotRange::new(4, 7);
        let f = overlap_fn(iv, 4, SlotRange::new(1, 12));
        assert_eq!(f.argmax(), (4, 4));
        for t in 1..=12 {
            assert_eq!(f.eval(t).unwrap(), direct_overlap(iv, 4, t));
        }
    }

    #[test]
    fn far_interval_gives_zero() {
        let f = overlap_fn(SlotRange::new(50, 60), 3, SlotRange::new(1, 20));
        assert_eq!(f.breakpoints(), &[(1, 0), (20, 0)]);
    }

    #[test]
    fn clamp_on_integer_crossing() {
        let g = PiecewiseLinearFn::from_points(vec![(0, 5), (2, 1), (3, -1), (6, -7)]).clamp_nonnegative();
        for (x, y) in [(0, 5), (1, 3), (2, 1), (3, 0), (4, 0), (6, 0)] {
            assert_eq!(g.eval(x), Some(y));
        }
        let h = PiecewiseLinearFn::from_points(vec![(0, -4), (4, 4)]).clamp_nonnegative();
        assert_eq!([0, 1, 2, 3, 4].map(|x| h.eval(x).unwrap()), [0, 0, 0, 2, 4]);
    }

    #[test]
    fn clamp_crossing_between_integers() {
        // slope -2 from (0, 3): zero at 1.5
        let f = PiecewiseLinearFn::from_points(vec![(0, 3), (3, -3)]);
        let g = f.clamp_nonnegative();
        assert_eq!(g.eval(1), Some(1));
        assert_eq!(g.eval(2), Some(0));
        assert_eq!(g.eval(3), Some(0));
    }

    #[test]
    fn combine_and_glue() {
        let a = overlap_fn(SlotRange::new(3, 5), 2, SlotRange::new(1, 10));
        let b = overlap_fn(SlotRange::new(7, 9), 2, SlotRange::new(1, 10));
        let s = a.add(&b).unwrap();
        for t in 1..=10 {
            assert_eq!(s.eval(t), Some(a.eval(t).unwrap() + b.eval(t).unwrap()));
        }
        let left = s.restrict(SlotRange::new(1, 4)).unwrap();
        let right = s.restrict(SlotRange::new(5, 10)).unwrap();
        let glued = PiecewiseLinearFn::glue(vec![left, right]).unwrap();
        for t in 1..=10 {
            assert_eq!(glued.eval(t), s.eval(t));
        }
    }

    #[test]
    fn huge_domain_is_cheap() {
        let f = overlap_fn(SlotRange::new(500_000_000, 500_000_010), 4, SlotRange::new(1, 999_999_997));
        assert!(f.breakpoint_count() <= 6);
        assert_eq!(f.argmax().1, 4);
    }
}
