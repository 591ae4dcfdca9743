use num_rational::Ratio;
use proptest::prelude::*;
use std::collections::BTreeMap;
use toeplitz_core::builder::{build_block_scheme, build_readout, residual_density, BlockStep, Cell, Period};
use toeplitz_core::complexity::block_census;
use toeplitz_core::correlation::{correlate, SampleSchedule};
use toeplitz_core::mixing::{apply_window_shift, invert_window_shift, WindowPlan};
use toeplitz_core::seqfile::SequenceFile;
use toeplitz_core::structure::{declared_periodic_part, empirical_periodic_part};
use toeplitz_core::{OdometerPoint, Scale, SymbolSequence};

fn naive_census(x: &[i8], n: usize) -> u64 {
    let mut seen: Vec<&[i8]> = Vec::new();
    for w in x.windows(n) {
        if !seen.contains(&w) {
            seen.push(w);
        }
    }
    seen.len() as u64
}

fn ratios() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..6, 1..5)
}

proptest! {
    #[test]
    fn odometer_orbit_has_period_p_k(qs in ratios(), start in 0u64..1000) {
        let scale = Scale::from_ratios(&qs).unwrap();
        let p = scale.last();
        let g0 = OdometerPoint::from_integer(start, &scale);
        let mut g = g0.clone();
        for i in 1..=p {
            g = g.successor(&scale).unwrap();
            prop_assert_eq!(g == g0, i == p);
        }
    }

    #[test]
    fn census_matches_quadratic_scan(
        x in prop::collection::vec(-1i8..=2, 1..300),
        n in 1usize..14,
    ) {
        prop_assume!(n <= x.len());
        prop_assert_eq!(block_census(&x, n, None).unwrap().count, naive_census(&x, n));
    }

    #[test]
    fn correlation_is_linear(
        pairs in prop::collection::vec((-1i8..=1, -1i8..=1, -1i8..=1), 1..200),
        a in -2i8..=2,
        b in -2i8..=2,
    ) {
        let x1: SymbolSequence = pairs.iter().map(|t| t.0).collect();
        let x2: SymbolSequence = pairs.iter().map(|t| t.1).collect();
        let eta: SymbolSequence = pairs.iter().map(|t| t.2).collect();
        let mix: SymbolSequence = pairs.iter().map(|t| a * t.0 + b * t.1).collect();
        let sched = SampleSchedule::Every(7);
        let s = correlate(&mix, &eta, &sched).unwrap();
        let s1 = correlate(&x1, &eta, &sched).unwrap();
        let s2 = correlate(&x2, &eta, &sched).unwrap();
        for ((m, u), v) in s.samples().iter().zip(s1.samples()).zip(s2.samples()) {
            prop_assert_eq!(m.exact, u.exact * Ratio::from_integer(a as i64) + v.exact * Ratio::from_integer(b as i64));
        }
    }

    #[test]
    fn averages_are_bounded(
        x in prop::collection::vec(-3i8..=3, 1..200),
        y in prop::collection::vec(-2i8..=2, 1..200),
    ) {
        let (x, y) = (SymbolSequence::new(x), SymbolSequence::new(y));
        let bound = 9.0 * 4.0;
        let mx = x.iter().map(|s| s.abs() as f64).fold(0.0, f64::max);
        let my = y.iter().map(|s| s.abs() as f64).fold(0.0, f64::max);
        for s in correlate(&x, &y, &SampleSchedule::Every(1)).unwrap().samples() {
            prop_assert!(s.average.abs() <= mx * my && s.average.abs() <= bound);
        }
    }

    #[test]
    fn sequence_file_roundtrip(
        x in prop::collection::vec(-5i8..=5, 0..500),
        key in "[a-z]{1,8}",
        value in "[ -~]{0,20}",
    ) {
        let mut meta = BTreeMap::new();
        meta.insert(key, value);
        let f = SequenceFile::new(SymbolSequence::new(x), None, meta).unwrap();
        let back = SequenceFile::from_bytes(&f.to_bytes().unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn window_shift_inverts(
        x in prop::collection::vec(0i8..3, 50..400),
        r in 0usize..5,
        gaps in prop::collection::vec(0usize..20, 0..10),
    ) {
        let w = 2 * r + 1;
        let mut starts = Vec::new();
        let mut s = 1;
        for g in gaps {
            s += g;
            if s + w - 1 > x.len() { break; }
            starts.push(s);
            s += w;
        }
        let plan = WindowPlan { k: 1, r, p: 7, q: 4, offset: 2, anchor: 1, starts };
        let x = SymbolSequence::new(x);
        let y = apply_window_shift(&x, &plan).unwrap();
        prop_assert_eq!(invert_window_shift(&y, &plan).unwrap(), x.clone());
        let changed = x.iter().zip(y.iter()).filter(|(a, b)| a != b).count();
        prop_assert!(changed <= plan.starts.len() * w);
    }

    #[test]
    fn readout_reconstructs_from_steps(
        first in 3u64..8,
        ratio in 2u64..5,
        window in 10usize..600,
        seed in any::<u64>(),
    ) {
        let scale = Scale::geometric(first, ratio, window as u64).unwrap();
        let y: SymbolSequence = (0..window as u64).map(|i| ((i.wrapping_mul(seed | 1) >> 7) % 3) as i8).collect();
        let f = build_readout(&y, &scale, window).unwrap();
        for (i, c) in f.cells().iter().enumerate() {
            let Cell::Filled { symbol, step, initial } = *c else { panic!("unfilled") };
            let rec = f.step(step as usize).unwrap();
            prop_assert_eq!(symbol, y[step as usize - 1]);
            prop_assert_eq!(initial, rec.first_position == i + 1);
            if let Period::Within(p) = rec.period {
                prop_assert_eq!((i + 1) % p as usize, rec.first_position % p as usize);
            }
        }
        // the first k cells are filled after k steps
        for rec in f.steps() {
            prop_assert!(rec.first_position >= rec.step);
        }
        let x = f.to_sequence().unwrap();
        for &p in scale.within(window - 1) {
            let emp = empirical_periodic_part(&x, p as usize).unwrap();
            prop_assert!(declared_periodic_part(&f, p).is_subset(&emp));
        }
    }

    #[test]
    fn block_scheme_residual_density(levels in prop::collection::vec((2u64..6, 1u64..5), 1..4)) {
        let levels: Vec<BlockStep> = levels
            .into_iter()
            .map(|(q, r)| BlockStep { q, r: r.min(q - 1) })
            .collect();
        let mut unfilled = 1u64;
        let mut blocks = Vec::new();
        for l in &levels {
            blocks.push(SymbolSequence::zeros((l.r * unfilled) as usize));
            unfilled *= l.q - l.r;
        }
        let qs: Vec<u64> = levels.iter().map(|l| l.q).collect();
        let p: u64 = qs.iter().product();
        let f = build_block_scheme(&qs, &blocks, 2 * p as usize).unwrap();
        let got = Ratio::new(f.unfilled_count() as u128, 2 * p as u128);
        prop_assert_eq!(got, residual_density(&levels));
    }
}
