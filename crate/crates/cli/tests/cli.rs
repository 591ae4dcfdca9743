use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use toeplitz_core::seqfile::SequenceFile;

fn toeplitz(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toeplitz"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn figures_match_fixtures() {
    let dir = TempDir::new().unwrap();
    let o = toeplitz(&["reproduce-figures", "--out-dir", "figs"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("diffs=0"));
    let f1 = std::fs::read_to_string(dir.path().join("figs/figure1.txt")).unwrap();
    assert!(f1.starts_with("0100***0100***"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&toeplitz(&["sieve", "--n-max", "0", "--out", "mu.seq"], d)), 2);
    assert_eq!(code(&toeplitz(&["sieve", "--bogus"], d)), 2);
    let bad_scale = ["build", "readout", "--scale", "3^q", "--y", "mobius", "--window", "50", "--out", "x.seq"];
    assert_eq!(code(&toeplitz(&bad_scale, d)), 3);
    let short = ["build", "readout", "--scale", "3,9", "--y", "mobius", "--window", "50", "--out", "x.seq"];
    assert_eq!(code(&toeplitz(&short, d)), 3);
    std::fs::write(d.join("bad.seq"), b"{\"format\":\"other\"}\n").unwrap();
    assert_eq!(code(&toeplitz(&["census", "--in", "bad.seq", "--n-min", "1", "--n-max", "2"], d)), 4);
    assert_eq!(code(&toeplitz(&["census", "--in", "missing.seq", "--n-min", "1", "--n-max", "2"], d)), 5);
    let unfilled = ["build", "block", "--q", "7", "--blocks", "auto", "--r", "4", "--window", "70", "--out", "x.seq"];
    assert_eq!(code(&toeplitz(&unfilled, d)), 6);
    let miss = ["verify", "--lemma", "shiftz5", "--scale", "3^k", "--window", "30", "--m", "3"];
    assert_eq!(code(&toeplitz(&miss, d)), 1);
}

#[test]
fn sieve_writes_mobius() {
    let dir = TempDir::new().unwrap();
    let o = toeplitz(&["--threads", "2", "sieve", "--n-max", "30", "--out", "mu.seq"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("mertens=-3"));
    let f = SequenceFile::read(dir.path().join("mu.seq")).unwrap();
    assert_eq!(f.header.alphabet, vec![-1, 0, 1]);
    assert_eq!(f.sequence[..12], [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    assert_eq!(f.sequence[29], -1);
}

#[test]
fn block_build_and_analyze() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("b.txt"), "0100\n000100000\n").unwrap();
    let o = toeplitz(
        &["build", "block", "--q", "7,6", "--blocks", "b.txt", "--window", "420", "--out", "x.seq", "--unfilled", "9", "--steps-out", "steps.json"],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let f = SequenceFile::read(d.join("x.seq")).unwrap();
    assert_eq!(f.header.metadata["construction"], "block");
    assert_eq!(f.header.metadata["r"], "4,3");
    let steps: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("steps.json")).unwrap()).unwrap();
    assert_eq!(steps.as_array().unwrap().len(), 2);

    let o = toeplitz(&["analyze", "--in", "x.seq", "--report", "r.txt", "--csv", "r.csv"], d);
    assert_eq!(code(&o), 0);
    let report = std::fs::read_to_string(d.join("r.txt")).unwrap();
    assert!(report.contains("defect=3/14\n"), "{report}");
    let csv = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert!(csv.starts_with("k,p_k,density\n1,7,"));
}

#[test]
fn analyze_rejects_tampered_block_prefix() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = toeplitz(&["build", "block", "--q", "7,2,2,2,2,2", "--blocks", "auto", "--r", "4,1,1,1,1,1", "--window", "56", "--out", "x.seq"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut f = SequenceFile::read(d.join("x.seq")).unwrap();
    let mut v = f.sequence.to_vec();
    v[7] = 1 - v[7];
    f.sequence = toeplitz_core::SymbolSequence::new(v);
    f.write(d.join("x.seq")).unwrap();
    assert_eq!(code(&toeplitz(&["analyze", "--in", "x.seq", "--report", "r.txt"], d)), 6);
}

#[test]
fn readout_analyze_and_empirical_report() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = toeplitz(
        &["build", "readout", "--scale", "3^k", "--y", "mobius", "--window", "729", "--out", "x.seq", "--z-out", "z.seq"],
        d,
    );
    assert_eq!(code(&o), 0);
    let z = SequenceFile::read(d.join("z.seq")).unwrap();
    assert_eq!(z.sequence[..12], [1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 0, 1]);
    let o = toeplitz(&["analyze", "--in", "x.seq", "--report", "r.txt"], d);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(d.join("r.txt")).unwrap().starts_with("subject=readout scale=3^k y=mobius"));

    toeplitz(&["sieve", "--n-max", "729", "--out", "mu.seq"], d);
    let o = toeplitz(&["analyze", "--in", "mu.seq", "--scale", "3^k", "--report", "e.txt"], d);
    assert_eq!(code(&o), 0);
    let e = std::fs::read_to_string(d.join("e.txt")).unwrap();
    assert!(e.starts_with("subject=empirical"));
    // multiples of 9 are the only residue class mod 9 on which μ is constant
    assert!(e.contains("level.2.measured=1/9\n"), "{e}");
    assert!(e.contains("level.1.measured=0\n"), "{e}");
}

#[test]
fn readout_from_file_and_example72() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let y = SequenceFile::new(toeplitz_core::SymbolSequence::new(vec![1; 200]), None, Default::default()).unwrap();
    y.write(d.join("y.seq")).unwrap();
    let o = toeplitz(&["build", "readout", "--scale", "3^k", "--y", "file", "y.seq", "--window", "100", "--out", "x.seq"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(SequenceFile::read(d.join("x.seq")).unwrap().sequence.iter().all(|&s| s == 1));

    let o = toeplitz(
        &["build", "readout", "--scale", "3*2^k", "--y", "example72", "--window", "20000", "--m-max", "3", "--seed", "5", "--out", "e.seq", "--y-out", "ey.seq"],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("k_indices=1,4,9"));
    let ey = SequenceFile::read(d.join("ey.seq")).unwrap();
    assert_eq!(ey.header.metadata["blocks"], "seeded 5");
    assert_eq!(code(&toeplitz(&["analyze", "--in", "e.seq", "--report", "r.txt"], d)), 0);
}

#[test]
fn correlate_and_census() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    toeplitz(&["sieve", "--n-max", "10", "--out", "mu.seq"], d);
    let one = SequenceFile::new(toeplitz_core::SymbolSequence::new(vec![1; 10]), None, Default::default()).unwrap();
    one.write(d.join("one.seq")).unwrap();
    let o = toeplitz(&["correlate", "--a", "mu.seq", "--b", "one.seq", "--schedule", "final"], d);
    assert_eq!(stdout(&o), "n,A_n\n10,-0.1\n");
    let o = toeplitz(&["correlate", "--a", "mu.seq", "--b", "one.seq", "--schedule", "every:5", "--out", "c.csv"], d);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(d.join("c.csv")).unwrap(), "n,A_n\n5,-0.4\n10,-0.1\n");

    let o = toeplitz(&["census", "--in", "one.seq", "--n-min", "1", "--n-max", "3"], d);
    assert_eq!(stdout(&o), "n,count,entropy_estimate\n1,1,0\n2,1,0\n3,1,0\n");
    let o = toeplitz(&["census", "--in", "mu.seq", "--n-min", "2", "--n-max", "2", "--abs", "--zero-cap", "0/1"], d);
    assert_eq!(stdout(&o), "n,count,entropy_estimate\n2,1,0\n");
}

#[test]
fn sarnak_check() {
    let dir = TempDir::new().unwrap();
    let o = toeplitz(&["correlate", "--sarnak", "--scale", "10^k", "--n", "10000", "--out", "s.csv"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("holds=true"));
    let o = toeplitz(&["correlate", "--sarnak", "--scale", "3^k", "--n", "1000"], dir.path());
    assert_eq!(code(&o), 6);
}

#[test]
fn lemma_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let cases: [&[&str]; 9] = [
        &["verify", "--lemma", "staszek2", "--k", "1"],
        &["verify", "--lemma", "staszek2", "--k-max", "50"],
        &["verify", "--lemma", "staszek1", "--periods", "3,5", "--residues", "1,2"],
        &["verify", "--lemma", "staszek1", "--product-max", "300"],
        &["verify", "--lemma", "nowy", "--sets", "3", "--n", "5000"],
        &["verify", "--lemma", "nowy", "--modulus", "2", "--progressions", "3:1", "--n", "3000"],
        &["verify", "--lemma", "shiftz1", "--scale", "3^k", "--window", "729"],
        &["verify", "--lemma", "shiftz2", "--scale", "3^k", "--window", "729"],
        &["verify", "--lemma", "claim", "--scale", "3^k", "--window", "20000", "--m-max", "3"],
    ];
    for args in cases {
        let o = toeplitz(args, d);
        assert_eq!(code(&o), 0, "{args:?}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).ends_with("verdict=holds\n"));
    }
    let o = toeplitz(&["verify", "--lemma", "staszek1", "--periods", "2,4"], d);
    assert_eq!(code(&o), 6);
    let o = toeplitz(&["verify", "--lemma", "claim", "--scale", "3^k", "--window", "2000", "--m-max", "5"], d);
    assert_eq!(code(&o), 6);
    let o = toeplitz(&["verify", "--lemma", "shiftz1", "--scale", "3^k"], d);
    assert_eq!(code(&o), 2);
}

#[test]
fn mixing_plans_roundtrip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let q = format!("7{}", ",2".repeat(14));
    let r = format!("4{}", ",1".repeat(14));
    let o = toeplitz(&["build", "block", "--q", &q, "--r", &r, "--blocks", "auto", "--window", "14336", "--out", "x.seq"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = toeplitz(
        &["mixing", "--in", "x.seq", "--auto", "1,32;169,16", "--anchor", "4000", "--out", "m.seq", "--plan-out", "plan.json"],
        d,
    );
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("step=2 r=169 p=896 q=16"));
    let o = toeplitz(&["mixing", "--in", "x.seq", "--plan", "plan.json", "--out", "m2.seq"], d);
    assert_eq!(code(&o), 0);
    let a = SequenceFile::read(d.join("m.seq")).unwrap();
    let b = SequenceFile::read(d.join("m2.seq")).unwrap();
    assert_eq!(a.sequence, b.sequence);
    assert_eq!(a.header.metadata["base_construction"], "block");
    let o = toeplitz(&["mixing", "--in", "x.seq", "--auto", "1,3", "--anchor", "4000", "--out", "m3.seq"], d);
    assert_eq!(code(&o), 6);
}
