use toeplitz_core::mobius::mobius_sieve;

use crate::args::SieveArgs;
use crate::error::CliResult;
use crate::files::{meta, write_sequence};

pub fn run(a: SieveArgs) -> CliResult<()> {
    let table = mobius_sieve(a.n_max, a.segment)?;
    write_sequence(
        &a.out,
        table.to_sequence(),
        Some(vec![-1, 0, 1]),
        meta([("construction", "mobius".into()), ("n_max", a.n_max.to_string())]),
    )?;
    println!("n_max={} mertens={}", a.n_max, table.mertens(a.n_max)?);
    Ok(())
}
