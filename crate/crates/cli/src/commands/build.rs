use std::fs;

use toeplitz_core::builder::{
    build_block_scheme, build_example_7_2, build_readout, initial_indicator, mobius_fill, residual_density,
    schedule_ones, BlockSource, BlockStep, PartialFilling, Scheme,
};
use toeplitz_core::mobius::mobius_sieve;
use toeplitz_core::{Error, Scale, SymbolSequence};

use crate::args::{BlockArgs, ReadoutArgs};
use crate::error::{CliError, CliResult};
use crate::files::{join, meta, parse_scale, read_sequence, write_json, write_sequence};

const SIEVE_SEGMENT: usize = 1 << 18;

fn read_blocks(path: &str) -> CliResult<Vec<SymbolSequence>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.as_ref(), e))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| SymbolSequence::from_digits(l).map_err(|_| Error::Format(format!("{path}: not a digit block: {l:?}")).into()))
        .collect()
}

fn symbols(filling: &PartialFilling, unfilled: Option<i8>) -> CliResult<SymbolSequence> {
    match unfilled {
        Some(u) => Ok(filling.cells().iter().map(|c| c.symbol().unwrap_or(u)).collect()),
        None => Ok(filling.to_sequence()?),
    }
}

pub fn block(a: BlockArgs) -> CliResult<()> {
    let blocks = if a.blocks == "auto" {
        let r = if a.r.is_empty() { vec![1; a.q.len()] } else { a.r.clone() };
        if r.len() != a.q.len() {
            return Err(CliError::Usage("--r needs one entry per --q entry".into()));
        }
        let levels: Vec<BlockStep> = a.q.iter().zip(&r).map(|(&q, &r)| BlockStep { q, r }).collect();
        schedule_ones(&levels)?
    } else {
        if !a.r.is_empty() {
            return Err(CliError::Usage("--r is only used with --blocks auto".into()));
        }
        read_blocks(&a.blocks)?
    };
    let filling = build_block_scheme(&a.q, &blocks, a.window)?;
    let x = symbols(&filling, a.unfilled)?;
    let r = match filling.scheme() {
        Scheme::Block { r, .. } => r.clone(),
        Scheme::Readout { .. } => unreachable!("block scheme"),
    };
    let scale = Scale::from_ratios(&a.q)?;
    let mut metadata = meta([
        ("construction", "block".into()),
        ("q", join(&a.q[..r.len()])),
        ("r", join(&r)),
        ("scale", join(scale.periods())),
        ("window", a.window.to_string()),
    ]);
    if !filling.is_complete() {
        if let Some(u) = a.unfilled {
            metadata.insert("unfilled".into(), u.to_string());
        }
    }
    write_sequence(&a.out, x, None, metadata)?;
    if let Some(p) = &a.steps_out {
        write_json(p, &filling.steps())?;
    }
    let levels: Vec<BlockStep> = a.q.iter().zip(&r).map(|(&q, &r)| BlockStep { q, r }).collect();
    println!(
        "steps={} unfilled={} residual_density={}",
        filling.steps().len(),
        filling.unfilled_count(),
        residual_density(&levels)
    );
    Ok(())
}

pub fn readout(a: ReadoutArgs) -> CliResult<()> {
    let scale = parse_scale(&a.scale, a.window)?;
    let mut metadata = meta([
        ("construction", "readout".into()),
        ("scale", a.scale.clone()),
        ("window", a.window.to_string()),
    ]);
    let mut y_seq = None;
    let filling = match (a.y[0].as_str(), a.y.get(1)) {
        ("mobius", None) => {
            let table = mobius_sieve(a.window, SIEVE_SEGMENT)?;
            metadata.insert("y".into(), "mobius".into());
            mobius_fill(&scale, a.window, &table)?
        }
        ("file", Some(path)) => {
            let y = read_sequence(path.as_ref())?.sequence;
            metadata.insert("y".into(), format!("file {path}"));
            build_readout(&y, &scale, a.window)?
        }
        ("example72", None) => {
            let source = match a.seed {
                Some(s) => BlockSource::Seeded(s),
                None => BlockSource::Champernowne,
            };
            let ex = build_example_7_2(&scale, a.window, &source, a.m_max)?;
            metadata.insert("y".into(), "example72".into());
            metadata.insert(
                "blocks".into(),
                a.seed.map_or("champernowne".into(), |s| format!("seeded {s}")),
            );
            metadata.insert("k_indices".into(), join(&ex.k_indices));
            println!("k_indices={}", join(&ex.k_indices));
            y_seq = Some(ex.y);
            ex.filling
        }
        _ => {
            return Err(CliError::Usage(
                "--y takes `mobius`, `file PATH` or `example72`".into(),
            ))
        }
    };
    if a.y_out.is_some() && y_seq.is_none() {
        return Err(CliError::Usage("--y-out is only available with --y example72".into()));
    }
    let x = filling.to_sequence()?;
    write_sequence(&a.out, x, None, metadata.clone())?;
    if let Some(p) = &a.z_out {
        let mut m = metadata.clone();
        m.insert("content".into(), "initial indicator".into());
        write_sequence(p, initial_indicator(&filling)?, Some(vec![0, 1]), m)?;
    }
    if let (Some(p), Some(y)) = (&a.y_out, y_seq) {
        let mut m = metadata;
        m.insert("content".into(), "generating sequence".into());
        write_sequence(p, y, Some(vec![0, 1]), m)?;
    }
    if let Some(p) = &a.steps_out {
        write_json(p, &filling.steps())?;
    }
    let rho = scale.rho_interval();
    println!(
        "steps={} rho_lo={:.9} rho_hi={:.9}",
        filling.steps().len(),
        rho.lo,
        rho.hi
    );
    Ok(())
}
