use std::fmt::Write as _;

use num_rational::Ratio;
use toeplitz_core::builder::{build_block_scheme, PartialFilling, ReadoutBuilder, ReadoutSource};
use toeplitz_core::seqfile::SequenceFile;
use toeplitz_core::structure::{empirical_periodic_part, regularity_defect, regularity_defect_at};
use toeplitz_core::{Error, SymbolSequence};

use crate::args::AnalyzeArgs;
use crate::error::{CliError, CliResult};
use crate::files::{emit, parse_list, parse_scale, ratio_f64, read_sequence, write_text};

fn field<'a>(file: &'a SequenceFile, key: &str) -> CliResult<&'a str> {
    file.header
        .metadata
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Format(format!("metadata lacks {key:?}")).into())
}

/// Replays the readout scheme, taking y_k = x(n_k), and checks every repeat.
fn replay_readout(file: &SequenceFile, spec: &str) -> CliResult<PartialFilling> {
    let x = &file.sequence;
    let scale = parse_scale(spec, x.len())?;
    let mut b = ReadoutBuilder::new(scale, x.len())?;
    while let Some(pos) = b.next_position() {
        b.place(x[pos - 1])?;
    }
    let source = match file.header.metadata.get("y").map(String::as_str) {
        Some("mobius") => ReadoutSource::Mobius,
        _ => ReadoutSource::Sequence,
    };
    let filling = b.finish(source);
    if filling.to_sequence()? != *x {
        return Err(Error::Hypothesis(format!("the sequence is not a readout on the scale {spec}")).into());
    }
    Ok(filling)
}

/// Rebuilds the cell structure of the block scheme and checks that every
/// filled cell repeats with its step's period.
fn replay_block(file: &SequenceFile) -> CliResult<PartialFilling> {
    let x = &file.sequence;
    let q = parse_list(field(file, "q")?)?;
    let r = parse_list(field(file, "r")?)?;
    if q.len() != r.len() {
        return Err(Error::Format("metadata q and r differ in length".into()).into());
    }
    let mut unfilled = 1u64;
    let mut blocks = Vec::with_capacity(q.len());
    for (&qk, &rk) in q.iter().zip(&r) {
        blocks.push(SymbolSequence::zeros((rk * unfilled) as usize));
        unfilled *= qk.checked_sub(rk).ok_or_else(|| Error::Format("r_k exceeds q_k".into()))?;
    }
    let filling = build_block_scheme(&q, &blocks, x.len())?;
    for (i, c) in filling.cells().iter().enumerate() {
        let Some(p) = c.step().and_then(|k| filling.step(k)).and_then(|s| s.period.within()) else {
            continue;
        };
        let p = p as usize;
        if i >= p && x[i] != x[i - p] {
            return Err(Error::Hypothesis(format!(
                "position {} differs from position {} although its step has period {p}",
                i + 1,
                i + 1 - p
            ))
            .into());
        }
    }
    Ok(filling)
}

fn empirical(x: &SymbolSequence, spec: &str) -> CliResult<(String, String)> {
    let scale = parse_scale(spec, x.len())?;
    let mut text = String::new();
    let mut csv = String::from("k,p_k,density\n");
    let _ = writeln!(text, "subject=empirical scale={spec}");
    let _ = writeln!(text, "window={}", x.len());
    let mut best = Ratio::from_integer(0u64);
    for (i, &p) in scale.periods().iter().enumerate() {
        let p = p as usize;
        if p >= x.len() {
            break;
        }
        let aligned = x.len() / p * p;
        let d = empirical_periodic_part(x, p)?.density_on(aligned);
        best = best.max(d);
        let _ = writeln!(text, "level.{}.p={p}", i + 1);
        let _ = writeln!(text, "level.{}.measured={d}", i + 1);
        let _ = writeln!(csv, "{},{p},{}", i + 1, ratio_f64(d));
    }
    let defect = Ratio::from_integer(1) - best;
    let _ = writeln!(text, "defect={defect}");
    let _ = writeln!(text, "defect_approx={:.12}", ratio_f64(defect));
    Ok((text, csv))
}

pub fn run(a: AnalyzeArgs) -> CliResult<()> {
    let file = read_sequence(&a.input)?;
    let construction = file.header.metadata.get("construction").cloned().unwrap_or_default();
    let spec = a.scale.clone().or_else(|| file.header.metadata.get("scale").cloned());
    let filling = match construction.as_str() {
        "readout" => {
            let spec = spec.as_deref().ok_or_else(|| CliError::Usage("no scale recorded; pass --scale".into()))?;
            Some(replay_readout(&file, spec)?)
        }
        "block" if a.scale.is_none() => Some(replay_block(&file)?),
        _ => None,
    };
    let (text, csv) = match filling {
        Some(f) => {
            let report = match a.banach {
                Some(h) => regularity_defect_at(&f, h),
                None => regularity_defect(&f),
            };
            (report.to_text(), report.to_csv())
        }
        None => {
            let spec = spec.ok_or_else(|| CliError::Usage("no scale recorded; pass --scale".into()))?;
            empirical(&file.sequence, &spec)?
        }
    };
    write_text(&a.report, &text)?;
    if let Some(p) = &a.csv {
        emit(Some(p), &csv)?;
    }
    print!("{}", text.lines().filter(|l| l.starts_with("defect")).map(|l| format!("{l}\n")).collect::<String>());
    Ok(())
}
