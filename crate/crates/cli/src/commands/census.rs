use toeplitz_core::complexity::{block_census, CensusReport};

use crate::args::CensusArgs;
use crate::error::{CliError, CliResult};
use crate::files::{emit, parse_ratio, read_sequence};

pub fn run(a: CensusArgs) -> CliResult<()> {
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(CliError::Usage("need 1 ≤ --n-min ≤ --n-max".into()));
    }
    let cap = a.zero_cap.as_deref().map(parse_ratio).transpose()?;
    let mut x = read_sequence(&a.input)?.sequence;
    if let Some(len) = a.prefix {
        x = x.prefix(len);
    }
    if a.abs {
        x = x.abs();
    }
    let mut csv = format!("{}\n", CensusReport::csv_header());
    for n in a.n_min..=a.n_max {
        csv.push_str(&block_census(&x, n, cap)?.csv_row());
        csv.push('\n');
    }
    emit(a.out.as_deref(), &csv)
}
