use std::fs;
use std::time::Instant;

use toeplitz_core::builder::{build_block_scheme, build_readout};
use toeplitz_core::{Scale, SymbolSequence};

use crate::args::FiguresArgs;
use crate::error::{CliError, CliResult};
use crate::files::write_text;

const FIGURE1: &str = include_str!("../../fixtures/figure1.txt");
const FIGURE2: &str = include_str!("../../fixtures/figure2.txt");
const DIAGRAM: &str = include_str!("../../fixtures/readout-diagram.txt");

fn digits(s: &str) -> SymbolSequence {
    SymbolSequence::from_digits(s).expect("digit literal")
}

/// B_1 = 0100 with period 7; the remaining cells stay unfilled.
fn figure1() -> CliResult<String> {
    let f = build_block_scheme(&[7], &[digits("0100")], 74)?;
    Ok(f.render(74, '*') + "\n")
}

/// B_2 = 000100000 merged into the unfilled cells of [1, 42].
fn figure2() -> CliResult<String> {
    let f = build_block_scheme(&[7, 6], &[digits("0100"), digits("000100000")], 67)?;
    Ok(f.render(67, '*') + "\n")
}

/// Step labels of the readout on the scale 3^k, initial placements upper case.
fn diagram() -> CliResult<String> {
    let scale = Scale::geometric(3, 3, 81)?;
    let f = build_readout(&SymbolSequence::zeros(81), &scale, 81)?;
    Ok(f.render_steps(35) + "\n")
}

fn first_difference(a: &str, b: &str) -> Option<usize> {
    a.chars().zip(b.chars()).position(|(x, y)| x != y).or_else(|| {
        let (la, lb) = (a.chars().count(), b.chars().count());
        (la != lb).then_some(la.min(lb))
    })
}

pub fn run(a: FiguresArgs) -> CliResult<()> {
    let start = Instant::now();
    let figures = [
        ("figure1.txt", figure1()?, FIGURE1),
        ("figure2.txt", figure2()?, FIGURE2),
        ("readout-diagram.txt", diagram()?, DIAGRAM),
    ];
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, got, _) in &figures {
            write_text(&dir.join(name), got)?;
        }
    }
    let mut diffs = 0;
    for (name, got, want) in &figures {
        match first_difference(got, want) {
            None => println!("{name}: identical ({} bytes)", got.len()),
            Some(i) => {
                diffs += 1;
                println!("{name}: differs at character {i}");
                println!("  expected {}", want.trim_end());
                println!("  got      {}", got.trim_end());
            }
        }
    }
    println!("diffs={diffs} elapsed_ms={}", start.elapsed().as_millis());
    if diffs > 0 {
        return Err(CliError::Verdict(format!("{diffs} figure(s) differ from the fixtures")));
    }
    Ok(())
}
