use toeplitz_core::builder::mobius_fill;
use toeplitz_core::correlation::{correlate, strong_correlation_check, SampleSchedule};
use toeplitz_core::mobius::mobius_sieve;

use crate::args::CorrelateArgs;
use crate::error::{CliError, CliResult};
use crate::files::{emit, parse_list, parse_scale, read_sequence};

fn parse_schedule(s: &str) -> CliResult<SampleSchedule> {
    Ok(match s {
        "geometric" => SampleSchedule::default(),
        "final" => SampleSchedule::Final,
        _ => match s.strip_prefix("every:") {
            Some(n) => SampleSchedule::Every(
                n.parse()
                    .map_err(|_| CliError::Usage(format!("bad spacing in schedule {s:?}")))?,
            ),
            None => SampleSchedule::Explicit(parse_list(s)?.into_iter().map(|n| n as usize).collect()),
        },
    })
}

pub fn run(a: CorrelateArgs) -> CliResult<()> {
    let schedule = parse_schedule(&a.schedule)?;
    if a.sarnak {
        let (Some(spec), Some(n)) = (&a.scale, a.n) else {
            return Err(CliError::Usage("--sarnak needs --scale and --n".into()));
        };
        let window = a.window.unwrap_or(n);
        let scale = parse_scale(spec, window)?;
        let table = mobius_sieve(window, 1 << 18)?;
        let filling = mobius_fill(&scale, window, &table)?;
        let check = strong_correlation_check(&filling, &table, n, a.tolerance)?;
        if let Some(out) = &a.out {
            let x = filling.to_sequence()?.prefix(n);
            let series = correlate(&x, &table.to_sequence().prefix(n), &schedule)?;
            emit(Some(out), &series.to_csv())?;
        }
        println!("n={}", check.n);
        println!("A_n={}", check.exact);
        println!("A_n_approx={:.9}", check.average);
        println!("rho_lo={:.9}", check.rho.lo);
        println!("rho_hi={:.9}", check.rho.hi);
        println!("bound={:.9}", check.bound);
        println!("holds={}", check.holds);
        if !check.holds {
            return Err(CliError::Verdict(format!(
                "A_n = {:.6} is below 6/π² − 2ρ = {:.6}",
                check.average, check.bound
            )));
        }
        return Ok(());
    }
    let (Some(pa), Some(pb)) = (&a.a, &a.b) else {
        return Err(CliError::Usage("--a and --b are required".into()));
    };
    let xa = read_sequence(pa)?.sequence;
    let xb = read_sequence(pb)?.sequence;
    let series = correlate(&xa, &xb, &schedule)?;
    emit(a.out.as_deref(), &series.to_csv())
}
