//! Scales (divisibility chains of periods) and truncated adding-machine points.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// How a scale is described on the command line: an explicit list such as
/// `3,9,27`, a power rule `b^k` (b, b², b³, …) or a scaled rule `c*b^k`
/// (c, cb, cb², …).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleSpec {
    Explicit(Vec<u64>),
    Geometric { first: u64, ratio: u64 },
}

impl ScaleSpec {
    /// Materializes the scale far enough that its last period exceeds
    /// `window` (geometric rules); explicit lists are taken as given.
    pub fn materialize(&self, window: usize) -> Result<Scale> {
        match self {
            ScaleSpec::Explicit(periods) => Scale::explicit(periods.clone()),
            &ScaleSpec::Geometric { first, ratio } => Scale::geometric(first, ratio, window as u64),
        }
    }
}

impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleSpec::Explicit(p) => {
                let parts: Vec<String> = p.iter().map(u64::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
            ScaleSpec::Geometric { first, ratio } if first == ratio => write!(f, "{ratio}^k"),
            ScaleSpec::Geometric { first, ratio } => write!(f, "{first}*{ratio}^k"),
        }
    }
}

impl FromStr for ScaleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = |reason: &str| Error::MalformedScaleSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let number = |x: &str| x.parse::<u64>().map_err(|_| malformed("expected an integer"));
        if let Some(rule) = t.strip_suffix("^k") {
            let (first, ratio) = match rule.split_once('*') {
                Some((c, b)) => (number(c)?, number(b)?),
                None => {
                    let b = number(rule)?;
                    (b, b)
                }
            };
            if first < 2 || ratio < 2 {
                return Err(malformed("base and leading factor must be at least 2"));
            }
            return Ok(ScaleSpec::Geometric { first, ratio });
        }
        let periods = t
            .split(',')
            .map(number)
            .collect::<Result<Vec<_>>>()?;
        Scale::validate(&periods).map_err(|e| malformed(&e.to_string()))?;
        Ok(ScaleSpec::Explicit(periods))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Continuation {
    /// Nothing is known past the last period beyond p_{k+1} ≥ 2 p_k.
    Unknown,
    Geometric { ratio: u64 },
}

/// A finite, increasing divisibility chain p_1 | p_2 | … | p_K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scale {
    periods: Vec<u64>,
    continuation: Continuation,
}

/// Certified enclosure of ρ = Σ_k 1/p_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoInterval {
    pub lo: f64,
    pub hi: f64,
}

impl Scale {
    pub fn explicit(periods: Vec<u64>) -> Result<Self> {
        Self::validate(&periods)?;
        Ok(Scale {
            periods,
            continuation: Continuation::Unknown,
        })
    }

    /// first, first·ratio, first·ratio², … up to and including the first
    /// period exceeding `bound`.
    pub fn geometric(first: u64, ratio: u64, bound: u64) -> Result<Self> {
        if first < 2 || ratio < 2 {
            return Err(Error::InvalidScale(
                "geometric scales need first ≥ 2 and ratio ≥ 2".into(),
            ));
        }
        let mut periods = vec![first];
        let mut p = first;
        while p <= bound {
            p = p
                .checked_mul(ratio)
                .ok_or_else(|| Error::Overflow(format!("scale period past {p}")))?;
            periods.push(p);
        }
        Ok(Scale {
            periods,
            continuation: Continuation::Geometric { ratio },
        })
    }

    /// The scale p_k = q_1⋯q_k.
    pub fn from_ratios(qs: &[u64]) -> Result<Self> {
        let mut periods = Vec::with_capacity(qs.len());
        let mut p: u64 = 1;
        for &q in qs {
            p = p
                .checked_mul(q)
                .ok_or_else(|| Error::Overflow("product of q_k".into()))?;
            periods.push(p);
        }
        Self::explicit(periods)
    }

    fn validate(periods: &[u64]) -> Result<()> {
        let first = *periods
            .first()
            .ok_or_else(|| Error::InvalidScale("empty scale".into()))?;
        if first < 2 {
            return Err(Error::InvalidScale(format!("p_1 = {first} < 2")));
        }
        for w in periods.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(Error::InvalidScale(format!(
                    "{} does not properly divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// p_k for 1-based `k`.
    pub fn period(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.periods.get(i)).copied()
    }

    pub fn last(&self) -> u64 {
        *self.periods.last().expect("scales are nonempty")
    }

    pub fn contains(&self, p: u64) -> bool {
        self.periods.binary_search(&p).is_ok()
    }

    /// Periods not exceeding `window`.
    pub fn within(&self, window: usize) -> &[u64] {
        let end = self.periods.partition_point(|&p| p <= window as u64);
        &self.periods[..end]
    }

    pub fn spec(&self) -> ScaleSpec {
        match self.continuation {
            Continuation::Geometric { ratio } => ScaleSpec::Geometric {
                first: self.periods[0],
                ratio,
            },
            Continuation::Unknown => ScaleSpec::Explicit(self.periods.clone()),
        }
    }

    /// Σ 1/p_k over the listed periods with p_k ≤ `window`, exactly.
    pub fn rho_within(&self, window: usize) -> Ratio<u128> {
        self.within(window)
            .iter()
            .map(|&p| Ratio::new(1, p as u128))
            .sum()
    }

    /// Σ 1/p_k over the listed periods plus a bound on the unlisted tail:
    /// exact for geometric rules, 1/p_K otherwise (since p_{k+1} ≥ 2 p_k).
    pub fn rho_interval(&self) -> RhoInterval {
        let listed: f64 = self.periods.iter().map(|&p| 1.0 / p as f64).sum();
        let last = self.last() as f64;
        match self.continuation {
            Continuation::Geometric { ratio } => {
                let tail = 1.0 / (last * (ratio as f64 - 1.0));
                RhoInterval {
                    lo: listed + tail,
                    hi: listed + tail,
                }
            }
            Continuation::Unknown => RhoInterval {
                lo: listed,
                hi: listed + 1.0 / last,
            },
        }
    }
}

/// A point of the adding machine truncated to its first K coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OdometerPoint {
    residues: Vec<u64>,
}

impl OdometerPoint {
    pub fn new(residues: Vec<u64>, scale: &Scale) -> Result<Self> {
        if residues.is_empty() || residues.len() > scale.len() {
            return Err(Error::InvalidPoint(format!(
                "need 1..={} coordinates, got {}",
                scale.len(),
                residues.len()
            )));
        }
        for (k, (&g, &p)) in residues.iter().zip(scale.periods()).enumerate() {
            if g >= p {
                return Err(Error::InvalidPoint(format!("g_{} = {g} not below {p}", k + 1)));
            }
        }
        for (k, w) in residues.windows(2).enumerate() {
            let p = scale.periods()[k];
            if w[1] % p != w[0] {
                return Err(Error::InvalidPoint(format!(
                    "g_{} = {} is not ≡ g_{} = {} mod {p}",
                    k + 2,
                    w[1],
                    k + 1,
                    w[0]
                )));
            }
        }
        Ok(OdometerPoint { residues })
    }

    pub fn zero(scale: &Scale) -> Self {
        OdometerPoint {
            residues: vec![0; scale.len()],
        }
    }

    /// The image of the integer `n` in the first K coordinates.
    pub fn from_integer(n: u64, scale: &Scale) -> Self {
        OdometerPoint {
            residues: scale.periods().iter().map(|&p| n % p).collect(),
        }
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn depth(&self) -> usize {
        self.residues.len()
    }

    /// g ↦ g + 1.
    pub fn successor(&self, scale: &Scale) -> Result<Self> {
        if self.depth() > scale.len() {
            return Err(Error::InvalidPoint("point deeper than scale".into()));
        }
        let residues = self
            .residues
            .iter()
            .zip(scale.periods())
            .map(|(&g, &p)| {
                if g >= p {
                    Err(Error::InvalidPoint(format!("residue {g} not below {p}")))
                } else {
                    Ok((g + 1) % p)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OdometerPoint { residues })
    }

    /// g_k for 1-based `k`.
    pub fn project(&self, k: usize) -> Result<u64> {
        k.checked_sub(1)
            .and_then(|i| self.residues.get(i))
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: k,
                len: self.residues.len(),
            })
    }
}
