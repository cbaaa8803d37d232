use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use sclab::experiments::*;
use sclab::{Mode, Number};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sclab-exp-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn phase_transition_shape() {
    let r = phase(&PhaseConfig::default()).unwrap();
    assert!((r.m - 8.3836).abs() < 5e-5, "m = {}", r.m);
    let a1 = &r.rows[0];
    assert_eq!((a1.min, a1.max), (0.0, 0.0));
    assert!(r.rows[1].mean < 0.2, "A_2 = {}", r.rows[1].mean);
    assert!(r.rows[10].mean > 0.8, "A_11 = {}", r.rows[10].mean);
    for w in r.rows.windows(2) {
        assert!(w[0].min <= w[0].mean && w[0].mean <= w[0].max);
    }
}

#[test]
fn phase_rejects_odd_conditioned_length() {
    let cfg = PhaseConfig { n: 101, seeds: vec![1], ..PhaseConfig::default() };
    assert!(matches!(phase(&cfg), Err(sclab::Error::Parity(101))));
}

#[test]
fn degenerate_slice() {
    let cfg = SliceConfig { rank: 2, words: vec!["abAB".into(), "baBA".into()], grid: 2, mode: Mode::Exact };
    let r = slice(&cfg).unwrap();
    assert_eq!(r.points.len(), 24);
    for p in &r.points {
        let expect = (&p.t[0] - &p.t[1]).abs() / q(2, 1);
        assert_eq!(p.scl, Number::Exact(expect), "t = {:?}", p.t);
    }
    assert_eq!(r.scl_at(&[q(1, 1), q(0, 1)]), Some(&Number::Exact(q(1, 2))));
    assert_eq!(r.additivity_defect, Number::Exact(q(1, 1)));
    assert!(r.symmetric() && r.convex());
}

#[test]
fn slice_rejects_non_boundary() {
    let cfg = SliceConfig { rank: 2, words: vec!["abAB".into(), "ab".into()], grid: 1, mode: Mode::Exact };
    assert!(matches!(slice(&cfg), Err(sclab::Error::NotABoundary(_))));
}

#[test]
fn small_rigidity_run_sandwiches_and_replays() {
    let cfg = RigidityConfig {
        n_min: 12,
        n_max: 20,
        step: 4,
        seeds: vec![1, 2, 3],
        mode: Mode::Exact,
        ..RigidityConfig::default()
    };
    let r = rigidity(&cfg).unwrap();
    assert_eq!(r.rows.len(), 9);
    for row in &r.rows {
        assert!(row.scl.is_some(), "{row:?}");
        assert!(row.sandwich_holds(), "{row:?}");
    }
    for s in &r.summary {
        assert!(matches!(s.mean_scl, Some(Number::Exact(_))));
    }
    let dir = scratch("rigidity");
    let m = run(&ExperimentConfig::Rigidity(cfg), &dir).unwrap();
    assert_eq!(m.outputs.len(), 2);
    let loaded = RunManifest::load(&dir.join("manifest.json")).unwrap();
    assert_eq!(loaded, m);
    let again = replay(&loaded, &scratch("rigidity-replay")).unwrap();
    assert!(again.identical(), "{:?}", again.files);
}

#[test]
fn rigidity_rejects_bad_ranges() {
    let bad = RigidityConfig { n_min: 13, n_max: 13, ..RigidityConfig::default() };
    assert!(matches!(rigidity(&bad), Err(sclab::Error::Parity(13))));
    let bad = RigidityConfig { step: 0, ..RigidityConfig::default() };
    assert!(matches!(rigidity(&bad), Err(sclab::Error::Range(_))));
}

#[test]
fn long_word_slice_is_symmetric_and_convex() {
    let cfg = SliceConfig {
        rank: 2,
        words: vec!["AbaBAbaBBAbaabaaBAAA".into(), "baaabAAbaabABAABBABa".into()],
        grid: 1,
        mode: Mode::Inexact,
    };
    let r = slice(&cfg).unwrap();
    assert_eq!(r.points.len(), 8);
    assert!(r.symmetric(), "symmetry defect {}", r.symmetry_defect);
    assert!(r.convex(), "convexity defect {}", r.convexity_defect);
    assert!(r.points.iter().all(|p| p.boundary().is_some()));
    assert!(r.svg().contains("<polygon"));
}
