use std::fs;

use num_rational::Ratio;
use toeplitz_core::mixing::{apply_window_shift, changed_cells, plan_and_apply, StepParams, WindowPlan};
use toeplitz_core::Error;

use crate::args::MixingArgs;
use crate::error::{CliError, CliResult};
use crate::files::{parse_scale, ratio_f64, read_sequence, write_json, write_sequence};

/// `r,q` or `r,q,offset` separated by `;`.
fn parse_steps(s: &str) -> CliResult<Vec<StepParams>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let bad = || CliError::Usage(format!("expected r,q or r,q,offset, got {t:?}"));
            let parts: Vec<u64> = t
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| bad()))
                .collect::<CliResult<_>>()?;
            match parts[..] {
                [r, q] => Ok(StepParams::new(r as usize, q)),
                [r, q, c] => Ok(StepParams { r: r as usize, q, offset: Some(c) }),
                _ => Err(bad()),
            }
        })
        .collect()
}

pub fn run(a: MixingArgs) -> CliResult<()> {
    let file = read_sequence(&a.input)?;
    let x = file.sequence;
    let (plans, out) = match (&a.plan, &a.auto) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let plans: Vec<WindowPlan> =
                serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            let mut current = x.clone();
            for p in &plans {
                current = apply_window_shift(&current, p)?;
            }
            (plans, current)
        }
        (None, Some(steps)) => {
            let spec = a
                .scale
                .clone()
                .or_else(|| file.header.metadata.get("scale").cloned())
                .ok_or_else(|| CliError::Usage("no scale recorded; pass --scale".into()))?;
            let scale = parse_scale(&spec, x.len().saturating_mul(64))?;
            let anchor = a.anchor.unwrap_or(x.len() / 2);
            plan_and_apply(&x, anchor, &parse_steps(steps)?, &scale)?
        }
        _ => return Err(CliError::Usage("give exactly one of --plan and --auto".into())),
    };

    let mut rho = Ratio::from_integer(0u64);
    for p in &plans {
        rho += p.rho();
        println!(
            "step={} r={} p={} q={} offset={} windows={} rho={}",
            p.k,
            p.r,
            p.p,
            p.q,
            p.offset,
            p.starts.len(),
            p.rho()
        );
    }
    let changed = changed_cells(&x, &out);
    println!("rho_sum={rho} rho_sum_approx={:.6}", ratio_f64(rho));
    println!("changed={changed} changed_fraction={:.6}", changed as f64 / x.len().max(1) as f64);

    let mut metadata = file.header.metadata;
    let base = metadata.insert("construction".into(), "mixing".into());
    metadata.insert("base_construction".into(), base.unwrap_or_default());
    metadata.insert("mixing_steps".into(), plans.len().to_string());
    let mut alphabet = file.header.alphabet;
    alphabet.extend(out.alphabet());
    alphabet.sort_unstable();
    alphabet.dedup();
    write_sequence(&a.out, out, Some(alphabet), metadata)?;
    if let Some(p) = &a.plan_out {
        write_json(p, &plans)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_lists() {
        let s = parse_steps("1,32; 169,16,3").unwrap();
        assert_eq!(s[0], StepParams::new(1, 32));
        assert_eq!(s[1].offset, Some(3));
        assert!(parse_steps("1").is_err());
    }
}
