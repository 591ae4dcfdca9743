use num_integer::Integer;
use toeplitz_core::builder::{build_readout, initial_indicator, PartialFilling};
use toeplitz_core::complexity::{find_claim_indices, sparse_pattern_search, verify_replacement, verify_zero_frequency};
use toeplitz_core::mobius::{
    density_independence_check, intersection_density, progression_hit_density, seeded_progressions, Progression,
    TailProducts, DEFAULT_PRIME_CUTOFF,
};
use toeplitz_core::{Error, Scale, SymbolSequence};

use crate::args::{Lemma, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::files::{join, parse_scale, ratio_f64};

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("this lemma needs {flag}")))
}

fn verdict(holds: bool, what: &str) -> CliResult<()> {
    println!("verdict={}", if holds { "holds" } else { "fails" });
    if holds {
        Ok(())
    } else {
        Err(CliError::Verdict(what.to_string()))
    }
}

/// The readout of an all-zero y: z and the step structure do not depend on y.
fn zero_readout(a: &VerifyArgs) -> CliResult<(Scale, PartialFilling)> {
    let spec = a.scale.as_deref().ok_or_else(|| CliError::Usage("this lemma needs --scale".into()))?;
    let window = need(a.window, "--window")?;
    let scale = parse_scale(spec, window)?;
    let filling = build_readout(&SymbolSequence::zeros(window), &scale, window)?;
    Ok((scale, filling))
}

/// Levels to check: `--k`, or every k with p_k inside the window.
fn levels(a: &VerifyArgs, scale: &Scale, window: usize, min_blocks: usize) -> Vec<usize> {
    match a.k {
        Some(k) => vec![k],
        None => scale
            .periods()
            .iter()
            .take_while(|&&p| (p as usize).saturating_mul(min_blocks) <= window)
            .enumerate()
            .map(|(i, _)| i + 1)
            .collect(),
    }
}

fn shiftz1(a: &VerifyArgs) -> CliResult<()> {
    let (scale, filling) = zero_readout(a)?;
    let mut all = true;
    for k in levels(a, &scale, filling.window(), 1) {
        let r = verify_zero_frequency(&filling, k)?;
        println!(
            "k={} p_k={} measured={} formula={} equal={}",
            k,
            scale.periods()[k - 1],
            r.measured,
            r.formula,
            r.equal
        );
        all &= r.equal;
    }
    verdict(all, "zero frequency differs from the formula")
}

fn shiftz2(a: &VerifyArgs) -> CliResult<()> {
    let (scale, filling) = zero_readout(a)?;
    let mut all = true;
    for k in levels(a, &scale, filling.window(), 2) {
        let p = scale.periods()[k - 1] as usize;
        let j_max = a.j_max.unwrap_or(filling.window() / p - 1);
        let ok = verify_replacement(&filling, k, j_max)?;
        println!("k={k} p_k={p} j_max={j_max} replacement={ok}");
        all &= ok;
    }
    verdict(all, "a zero of B_{k,0} is a one in some B_{k,j}")
}

fn shiftz5(a: &VerifyArgs) -> CliResult<()> {
    let (_, filling) = zero_readout(a)?;
    let m = need(a.m, "--m")?;
    let z = initial_indicator(&filling)?;
    let found = sparse_pattern_search(&z, m);
    match found {
        Some(pos) => println!("m={m} position={pos}"),
        None => println!("m={m} position=none"),
    }
    verdict(found.is_some(), "pattern not found inside the window")
}

fn staszek1(a: &VerifyArgs) -> CliResult<()> {
    if let Some(limit) = a.product_max {
        let mut pairs = 0u64;
        let mut failures = Vec::new();
        for p in 2..=limit {
            for q in p + 1..=limit / p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                pairs += 1;
                for residues in [[0, 0], [p - 1, q - 1]] {
                    if !density_independence_check(&[p, q], &residues)? {
                        failures.push(format!("({p},{q})"));
                    }
                }
            }
        }
        println!("pairs={pairs} residue_choices=2 failures={}", failures.len());
        for f in failures.iter().take(10) {
            println!("failure={f}");
        }
        return verdict(failures.is_empty(), "intersection density differs from the product");
    }
    if a.periods.is_empty() {
        return Err(CliError::Usage("staszek1 needs --product-max or --periods".into()));
    }
    let residues = if a.residues.is_empty() { vec![0; a.periods.len()] } else { a.residues.clone() };
    let d = intersection_density(&a.periods, &residues)?;
    let product: num_rational::Ratio<u64> = a.periods.iter().map(|&p| num_rational::Ratio::new(1, p)).product();
    println!("periods={} residues={} density={d} product={product}", join(&a.periods), join(&residues));
    verdict(d == product, "intersection density differs from the product")
}

fn staszek2(a: &VerifyArgs) -> CliResult<()> {
    let tails = match a.n_partial {
        Some(n) => TailProducts::new(n)?,
        None => TailProducts::up_to(DEFAULT_PRIME_CUTOFF)?,
    };
    let ks: Vec<usize> = match (a.k, a.k_max) {
        (Some(k), None) => vec![k],
        (None, Some(m)) => (1..=m).collect(),
        (None, None) => vec![1],
        (Some(_), Some(_)) => return Err(CliError::Usage("give --k or --k-max, not both".into())),
    };
    let mut all = true;
    let mut worst = f64::INFINITY;
    for &k in &ks {
        let b = tails.bound(k)?;
        if ks.len() == 1 {
            println!("k={k} lower_estimate={:.12} bound={:.12} holds={}", b.lower_estimate, b.bound, b.holds);
        }
        worst = worst.min(b.lower_estimate - b.bound);
        all &= b.holds;
    }
    if ks.len() > 1 {
        println!("k=1..{} n_partial={} min_margin={worst:.3e}", ks.len(), tails.n_partial());
    }
    verdict(all, "tail product below 1 − 1/q_k")
}

fn parse_progression(s: &str) -> CliResult<Progression> {
    let bad = || CliError::Usage(format!("expected step:offset, got {s:?}"));
    let (p, r) = s.split_once(':').ok_or_else(bad)?;
    Ok(Progression {
        step: p.trim().parse().map_err(|_| bad())?,
        offset: r.trim().parse().map_err(|_| bad())?,
    })
}

fn nowy(a: &VerifyArgs) -> CliResult<()> {
    let n = a.n.unwrap_or(100_000) as u64;
    let mut families = Vec::new();
    if !a.progressions.is_empty() {
        let progs = a.progressions.iter().map(|s| parse_progression(s)).collect::<CliResult<Vec<_>>>()?;
        families.push((need(a.modulus, "--modulus")?, a.offset.unwrap_or(0), progs));
    } else {
        for i in 0..a.sets.unwrap_or(1) as u64 {
            let f = seeded_progressions(a.seed + i);
            families.push((f.modulus, f.offset, f.progressions));
        }
    }
    let mut all = true;
    for (i, (m, r, progs)) in families.iter().enumerate() {
        let h = progression_hit_density(*m, *r, progs, n)?;
        let ok = ratio_f64(h.empirical) <= h.bound + a.slack;
        println!(
            "set={i} M={m} r={r} progressions={} empirical={:.6} bound={:.6} holds={ok}",
            progs.len(),
            ratio_f64(h.empirical),
            h.bound
        );
        all &= ok;
    }
    verdict(all, "empirical density exceeds the bound plus slack")
}

fn claim(a: &VerifyArgs) -> CliResult<()> {
    let spec = a.scale.as_deref().ok_or_else(|| CliError::Usage("claim needs --scale".into()))?;
    let window = need(a.window, "--window")?;
    let m_max = need(a.m_max.or(a.m), "--m-max")?;
    let scale = parse_scale(spec, window)?;
    let c = find_claim_indices(&scale, m_max, window)?;
    println!("k={}", join(&c.k));
    println!("steps_simulated={}", c.steps_simulated);
    if let Some(d) = &c.diagnostic {
        println!("diagnostic={d}");
    }
    let first = c.k.first() == Some(&1);
    let gaps = c.k.windows(2).enumerate().all(|(i, w)| w[1] > w[0] + i + 1);
    println!("k_1_is_1={first} gaps_exceed_m={gaps}");
    if c.k.len() < m_max {
        return Err(Error::WindowTooSmall(format!("only {} of {m_max} indices inside the window", c.k.len())).into());
    }
    verdict(first && gaps, "claim indices violate k_1 = 1 or k_{m+1} > k_m + m")
}

pub fn run(a: VerifyArgs) -> CliResult<()> {
    match a.lemma {
        Lemma::Shiftz1 => shiftz1(&a),
        Lemma::Shiftz2 => shiftz2(&a),
        Lemma::Shiftz5 => shiftz5(&a),
        Lemma::Staszek1 => staszek1(&a),
        Lemma::Staszek2 => staszek2(&a),
        Lemma::Nowy => nowy(&a),
        Lemma::Claim => claim(&a),
    }
}
