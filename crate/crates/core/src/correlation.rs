//! Cesàro correlations A_n = (1/n) Σ_{i≤n} ξ(i)·η(i) over small integer
//! alphabets. Partial sums are exact integers, so every sampled average is
//! also available as an exact rational.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::builder::{Cell, PartialFilling, ReadoutSource, Scheme};
use crate::error::{invalid, Error, Result};
use crate::mobius::MobiusTable;
use crate::odometer::RhoInterval;
use crate::sequence::SymbolSequence;

/// Where along the sequence averages are recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleSchedule {
    /// start, start·ratio, start·ratio², … and the final length.
    Geometric { start: usize, ratio: usize },
    /// Strictly increasing sample points.
    Explicit(Vec<usize>),
    /// Every `s`-th index.
    Every(usize),
    /// Only the final length.
    Final,
}

impl Default for SampleSchedule {
    fn default() -> Self {
        SampleSchedule::Geometric { start: 1, ratio: 2 }
    }
}

impl SampleSchedule {
    /// Sample points for a sequence pair of common length `len`.
    pub fn points(&self, len: usize) -> Result<Vec<usize>> {
        let mut pts = match self {
            SampleSchedule::Final => vec![len],
            &SampleSchedule::Every(s) => {
                if s == 0 {
                    return Err(invalid("sample spacing must be positive"));
                }
                (1..=len / s).map(|i| i * s).collect()
            }
            &SampleSchedule::Geometric { start, ratio } => {
                if start == 0 || ratio < 2 {
                    return Err(invalid("geometric schedule needs start ≥ 1 and ratio ≥ 2"));
                }
                let mut v = Vec::new();
                let mut n = start;
                while n <= len {
                    v.push(n);
                    n = match n.checked_mul(ratio) {
                        Some(m) => m,
                        None => break,
                    };
                }
                if v.last() != Some(&len) {
                    v.push(len);
                }
                v
            }
            SampleSchedule::Explicit(v) => {
                if v.windows(2).any(|w| w[0] >= w[1]) || v.first() == Some(&0) {
                    return Err(invalid("explicit sample points must be positive and increasing"));
                }
                if let Some(&last) = v.last() {
                    if last > len {
                        return Err(Error::IndexOutOfRange { index: last, len });
                    }
                }
                v.clone()
            }
        };
        pts.retain(|&n| n > 0);
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub n: usize,
    /// Σ_{i≤n} ξ(i)η(i).
    pub sum: i64,
    pub exact: Ratio<i64>,
    pub average: f64,
}

impl Sample {
    fn new(n: usize, sum: i64) -> Self {
        Sample {
            n,
            sum,
            exact: Ratio::new(sum, n as i64),
            average: sum as f64 / n as f64,
        }
    }
}

/// Spread of the averages over the last part of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSummary {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrelationSeries {
    samples: Vec<Sample>,
}

impl CorrelationSeries {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Min and max of A_n over the last `fraction` of the samples (at least one).
    pub fn tail_summary(&self, fraction: f64) -> Option<TailSummary> {
        if self.samples.is_empty() {
            return None;
        }
        let keep = ((self.samples.len() as f64 * fraction).ceil() as usize).clamp(1, self.samples.len());
        let tail = &self.samples[self.samples.len() - keep..];
        Some(TailSummary {
            min: tail.iter().map(|s| s.average).fold(f64::INFINITY, f64::min),
            max: tail.iter().map(|s| s.average).fold(f64::NEG_INFINITY, f64::max),
            samples: keep,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,A_n\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{}", s.n, s.average);
        }
        out
    }
}

/// Streams Σ ξ(i)η(i) once over the common prefix and records A_n at the
/// schedule's points.
pub fn correlate(
    xi: &SymbolSequence,
    eta: &SymbolSequence,
    schedule: &SampleSchedule,
) -> Result<CorrelationSeries> {
    let len = xi.len().min(eta.len());
    if len == 0 {
        return Err(invalid("cannot correlate empty sequences"));
    }
    let points = schedule.points(len)?;
    let mut samples = Vec::with_capacity(points.len());
    let mut sum: i64 = 0;
    let mut i = 0;
    for n in points {
        sum += xi[i..n]
            .iter()
            .zip(&eta[i..n])
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum::<i64>();
        i = n;
        samples.push(Sample::new(n, sum));
    }
    Ok(CorrelationSeries { samples })
}

/// `xi` against each of `etas`, one series per entry, computed in parallel.
pub fn correlate_each(
    xi: &SymbolSequence,
    etas: &[SymbolSequence],
    schedule: &SampleSchedule,
) -> Result<Vec<CorrelationSeries>> {
    etas.par_iter().map(|eta| correlate(xi, eta, schedule)).collect()
}

/// Verdict of the strong-correlation test for a Möbius readout filling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongCorrelation {
    pub n: usize,
    pub exact: Ratio<i64>,
    pub average: f64,
    /// 6/π² − 2ρ, using the upper end of the ρ enclosure.
    pub bound: f64,
    pub rho: RhoInterval,
    pub holds: bool,
}

/// Correlates x_y from [`mobius_fill`](crate::builder::mobius_fill) with μ up
/// to `n` and compares against 6/π² − 2ρ. Refuses scales with ρ ≥ 3/π².
pub fn strong_correlation_check(
    filling: &PartialFilling,
    table: &MobiusTable,
    n: usize,
    tolerance: f64,
) -> Result<StrongCorrelation> {
    let scale = match filling.scheme() {
        Scheme::Readout {
            scale,
            source: ReadoutSource::Mobius,
        } => scale,
        _ => return Err(invalid("strong correlation needs a Möbius readout filling")),
    };
    let rho = scale.rho_interval();
    let threshold = 3.0 / (PI * PI);
    if rho.hi >= threshold {
        return Err(Error::Hypothesis(format!(
            "ρ ≤ {:.6} is not below 3/π² ≈ {threshold:.6}",
            rho.hi
        )));
    }
    if n == 0 || n > filling.window() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: filling.window(),
        });
    }
    table.check_range(n)?;
    let x = filling.to_sequence()?.prefix(n);
    let mu = SymbolSequence::new(table.values()[..n].to_vec());
    let s = *correlate(&x, &mu, &SampleSchedule::Final)?.last().expect("one sample");
    let bound = 6.0 / (PI * PI) - 2.0 * rho.hi;
    Ok(StrongCorrelation {
        n,
        exact: s.exact,
        average: s.average,
        bound,
        rho,
        holds: s.average >= bound - tolerance,
    })
}

/// n·A_n split by initial and repeated cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub initial_sum: i64,
    /// Σ |μ(i)| over initial cells i ≤ n.
    pub initial_abs_mu: i64,
    pub repeated_sum: i64,
}

impl Decomposition {
    pub fn total(&self) -> i64 {
        self.initial_sum + self.repeated_sum
    }
}

pub fn decompose(filling: &PartialFilling, table: &MobiusTable, n: usize) -> Result<Decomposition> {
    table.check_range(n)?;
    if n > filling.window() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: filling.window(),
        });
    }
    let mut d = Decomposition {
        initial_sum: 0,
        initial_abs_mu: 0,
        repeated_sum: 0,
    };
    for (i, (cell, &mu)) in filling.cells()[..n].iter().zip(table.values()).enumerate() {
        let (symbol, initial) = match *cell {
            Cell::Filled { symbol, initial, .. } => (symbol, initial),
            Cell::Unfilled => return Err(Error::Unfilled(i + 1)),
        };
        let term = symbol as i64 * mu as i64;
        if initial {
            d.initial_sum += term;
            d.initial_abs_mu += mu.abs() as i64;
        } else {
            d.repeated_sum += term;
        }
    }
    Ok(d)
}
