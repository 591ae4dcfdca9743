//! Window shifts on a finite Toeplitz prefix: the central block around an
//! anchor recurs with some period p of the scale; the recurrences at
//! anchor + m p with m ≡ c (mod q), c ≠ 0, become windows whose contents are
//! rotated one cell to the left. The central occurrence is never selected.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odometer::Scale;
use crate::sequence::SymbolSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPlan {
    pub k: usize,
    /// Central block radius: windows have 2r + 1 cells.
    pub r: usize,
    pub p: u64,
    pub q: u64,
    /// c: windows sit at m ≡ c (mod q) recurrences of the central block.
    pub offset: u64,
    /// 1-based center of the central block.
    pub anchor: usize,
    /// 1-based first cells of the windows, increasing.
    pub starts: Vec<usize>,
}

impl WindowPlan {
    pub fn window_len(&self) -> usize {
        2 * self.r + 1
    }

    /// (2r + 1) / (p q).
    pub fn rho(&self) -> Ratio<u64> {
        Ratio::new(self.window_len() as u64, self.p * self.q)
    }

    /// Inclusive 1-based window bounds.
    pub fn windows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.window_len();
        self.starts.iter().map(move |&s| (s, s + len - 1))
    }
}

/// Least period of `scale` under which the block `x[start, start + len)`
/// (1-based start) recurs at every shift that keeps it inside `x`; at least
/// one recurrence must be visible.
pub fn detect_period(x: &[i8], start: usize, len: usize, scale: &Scale) -> Result<u64> {
    if start == 0 || len == 0 || start + len - 1 > x.len() {
        return Err(Error::InvalidArgument(format!(
            "block [{start}, {}] is not inside a prefix of {}",
            start + len - 1,
            x.len()
        )));
    }
    let s = start - 1;
    let block = &x[s..s + len];
    let last_start = x.len() - len;
    for &p in scale.periods() {
        let p = p as usize;
        if p > last_start {
            break;
        }
        let copies = (s % p..=last_start).step_by(p).filter(|&t| t != s);
        let mut seen = false;
        let mut ok = true;
        for t in copies {
            seen = true;
            if &x[t..t + len] != block {
                ok = false;
                break;
            }
        }
        if ok && seen {
            return Ok(p as u64);
        }
    }
    Err(Error::NoPeriod(format!(
        "no period of the scale repeats the block at [{start}, {}]",
        start + len - 1
    )))
}

fn check_windows(len: usize, plan: &WindowPlan) -> Result<()> {
    let w = plan.window_len();
    let mut end = 0;
    for &s in &plan.starts {
        if s == 0 || s + w - 1 > len {
            return Err(Error::IndexOutOfRange {
                index: s + w - 1,
                len,
            });
        }
        if s <= end {
            return Err(Error::OverlappingWindows(s));
        }
        end = s + w - 1;
    }
    Ok(())
}

/// Rotates each window of `plan` one cell to the left.
pub fn apply_window_shift(x: &SymbolSequence, plan: &WindowPlan) -> Result<SymbolSequence> {
    check_windows(x.len(), plan)?;
    let mut out = x.to_vec();
    for (a, b) in plan.windows() {
        out[a - 1..b].rotate_left(1);
    }
    Ok(SymbolSequence::new(out))
}

/// Undoes [`apply_window_shift`] by rotating each window right.
pub fn invert_window_shift(x: &SymbolSequence, plan: &WindowPlan) -> Result<SymbolSequence> {
    check_windows(x.len(), plan)?;
    let mut out = x.to_vec();
    for (a, b) in plan.windows() {
        out[a - 1..b].rotate_right(1);
    }
    Ok(SymbolSequence::new(out))
}

/// Radius, thinning factor and window offset of one step. The offset
/// defaults to ⌊q/2⌋.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepParams {
    pub r: usize,
    pub q: u64,
    #[serde(default)]
    pub offset: Option<u64>,
}

impl StepParams {
    pub fn new(r: usize, q: u64) -> Self {
        StepParams { r, q, offset: None }
    }
}

/// Plans step `k` on `x`: detects p for the central block `[anchor − r,
/// anchor + r]`, checks p·q is in the scale and the invertibility margin
/// p q − (2r + 1) ≥ 2p, places windows at anchor − r + m p for m ≡ c
/// (mod q), and requires every window end to lie at least ⌊p' q' / 4⌋ cells
/// from each end of an earlier plan's windows. For k > 1 the central block
/// must contain at least two windows of the previous plan.
pub fn plan_step(
    x: &[i8],
    k: usize,
    params: StepParams,
    anchor: usize,
    scale: &Scale,
    previous: &[WindowPlan],
) -> Result<WindowPlan> {
    let StepParams { r, q, .. } = params;
    let offset = params.offset.unwrap_or(q / 2);
    if offset == 0 || offset >= q {
        return Err(Error::Unsatisfiable(format!(
            "offset {offset} must lie in 1..{q} so the central block is not a window"
        )));
    }
    if anchor <= r {
        return Err(Error::Unsatisfiable(format!(
            "central block radius {r} reaches before position 1 from anchor {anchor}"
        )));
    }
    let start = anchor - r;
    let len = 2 * r + 1;
    let p = detect_period(x, start, len, scale)?;
    let pq = p
        .checked_mul(q)
        .ok_or_else(|| Error::Overflow("p·q".into()))?;
    if !scale.contains(pq) {
        return Err(Error::Unsatisfiable(format!("p·q = {pq} is not in the scale")));
    }
    if pq < len as u64 + 2 * p {
        return Err(Error::Unsatisfiable(format!(
            "q = {q} too small: p q − (2r + 1) = {} is below 2p = {}",
            pq as i128 - len as i128,
            2 * p
        )));
    }
    if let Some(prev) = previous.last() {
        let inside = prev
            .windows()
            .filter(|&(a, b)| a >= start && b < start + len)
            .count();
        if inside < 2 {
            return Err(Error::Unsatisfiable(format!(
                "central block of step {k} holds {inside} windows of step {}, need 2",
                prev.k
            )));
        }
    }

    let pq = pq as usize;
    let last = x.len() - len + 1;
    let first = start + offset as usize * p as usize;
    let mut s = first % pq;
    if s == 0 {
        s = pq;
    }
    let starts: Vec<usize> = (s..=last).step_by(pq).collect();
    if starts.is_empty() {
        return Err(Error::Unsatisfiable(format!(
            "no window of period {pq} fits in a prefix of {}",
            x.len()
        )));
    }

    for prev in previous {
        let margin = (prev.p * prev.q / 4) as usize;
        let mut ends: Vec<usize> = prev.windows().flat_map(|(a, b)| [a, b]).collect();
        ends.sort_unstable();
        for &a in &starts {
            for e in [a, a + len - 1] {
                let i = ends.partition_point(|&v| v < e);
                let near = [i.checked_sub(1), Some(i)]
                    .into_iter()
                    .flatten()
                    .filter_map(|j| ends.get(j))
                    .map(|&v| v.abs_diff(e))
                    .min();
                if near.is_some_and(|d| d < margin) {
                    return Err(Error::Unsatisfiable(format!(
                        "window end {e} of step {k} lies within {margin} cells of a step-{} window end",
                        prev.k
                    )));
                }
            }
        }
    }

    Ok(WindowPlan {
        k,
        r,
        p,
        q,
        offset,
        anchor,
        starts,
    })
}

/// Plans and applies steps 1, 2, …, each step on the output of the previous one.
pub fn plan_and_apply(
    x: &SymbolSequence,
    anchor: usize,
    params: &[StepParams],
    scale: &Scale,
) -> Result<(Vec<WindowPlan>, SymbolSequence)> {
    let mut plans: Vec<WindowPlan> = Vec::with_capacity(params.len());
    let mut current = x.clone();
    for (i, &step) in params.iter().enumerate() {
        let plan = plan_step(&current, i + 1, step, anchor, scale, &plans)?;
        current = apply_window_shift(&current, &plan)?;
        plans.push(plan);
    }
    Ok((plans, current))
}

/// Cells where `a` and `b` differ.
pub fn changed_cells(a: &[i8], b: &[i8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
