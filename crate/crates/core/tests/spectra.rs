use num_rational::Ratio;
use sclab::group::Alphabet;
use sclab::sampling::{random_reduced_word_with, rng};
use sclab::spectra::*;

fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

#[test]
fn level_one_spectrum() {
    let g = build_digraph(&f2(), 1).unwrap();
    let r = spectral_report(&g, 12).unwrap();
    let mut re: Vec<f64> = r.eigenvalues.iter().map(|e| e.0).collect();
    re.sort_by(f64::total_cmp);
    for (got, want) in re.iter().zip([-1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0]) {
        assert!((got - want).abs() < 1e-10, "{re:?}");
    }
    assert!(r.eigenvalues.iter().all(|e| e.1.abs() < 1e-10));
    assert!((r.lambda1 - 2.0 / 3.0).abs() < 1e-10);
    assert!((r.moduli()[0] - 1.0).abs() < 1e-10);
}

#[test]
fn level_two_spectrum_pads_level_one() {
    let g1 = build_digraph(&f2(), 1).unwrap();
    let g2 = build_digraph(&f2(), 2).unwrap();
    let r1 = spectral_report(&g1, 12).unwrap();
    let r2 = spectral_report(&g2, 12).unwrap();
    assert_eq!(r1.traces, r2.traces);
    let nonzero = r2.moduli().iter().filter(|&&m| m > 1e-6).count();
    assert_eq!(nonzero, 4);
    // P_2 is not normal: its symmetrization has a smaller gap than level 1.
    assert!((r2.lambda1 - 1.0 / 3.0).abs() < 1e-10, "{}", r2.lambda1);
}

#[test]
fn traces_agree_across_levels() {
    let base = build_digraph(&f2(), 1).unwrap().closed_walks(12).unwrap();
    for level in 2..=4 {
        let g = build_digraph(&f2(), level).unwrap();
        assert_eq!(g.closed_walks(12).unwrap(), base, "level {level}");
    }
    let f3 = Alphabet::new(3).unwrap();
    let base = build_digraph(&f3, 1).unwrap().closed_walks(8).unwrap();
    assert_eq!(build_digraph(&f3, 2).unwrap().closed_walks(8).unwrap(), base);
}

#[test]
fn transition_rows_are_stochastic() {
    for level in 1..=3 {
        let g = build_digraph(&f2(), level).unwrap();
        let p = g.transition_exact();
        let n = p.len();
        for row in &p {
            assert_eq!(row.iter().sum::<Ratio<i64>>(), Ratio::from_integer(1));
        }
        // Uniform distribution is stationary.
        for j in 0..n {
            let col: Ratio<i64> = (0..n).map(|i| p[i][j]).sum();
            assert_eq!(col, Ratio::from_integer(1));
        }
        if level == 1 {
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(p[i][j], p[j][i]);
                }
            }
        }
    }
}

#[test]
fn cheeger_constants() {
    let g1 = build_digraph(&f2(), 1).unwrap();
    let c1 = cheeger_constant(&g1, 0);
    assert_eq!(c1.method, SearchMethod::Exhaustive);
    assert_eq!(c1.ratio(), Ratio::from_integer(1));
    assert_eq!(c1.witness, vec!["a", "A"]);
    assert_eq!(c1.boundary, vec!["b", "B"]);
    let g2 = build_digraph(&f2(), 2).unwrap();
    let c2 = cheeger_constant(&g2, 0);
    assert_eq!(c2.method, SearchMethod::Exhaustive);
    // Exhaustive search finds a six-vertex set with three out-neighbours.
    assert_eq!(c2.ratio(), Ratio::new(1, 3));
    assert_eq!(c2.witness.len(), 6);
    assert_eq!(c2.boundary.len(), 2);
    for (g, c) in [(&g1, &c1), (&g2, &c2)] {
        let l = spectral_report(g, 1).unwrap().lambda1;
        let h = c.h_value;
        assert!(2.0 * h >= l && l >= h * h / 2.0, "h={h} lambda1={l}");
    }
}

#[test]
fn sampled_cheeger_bounds_level_three() {
    let g = build_digraph(&f2(), 3).unwrap();
    let c = cheeger_constant(&g, 7);
    assert_eq!(c.method, SearchMethod::Sampled);
    assert!(c.witness.len() <= g.vertex_count() / 2);
    let l = spectral_report(&g, 1).unwrap().lambda1;
    assert!(l > 0.0);
    // Sampling only bounds h from above; 2h >= lambda1 must still hold.
    assert!(2.0 * c.h_value >= l);
}

#[test]
fn edge_frequencies_within_lezaud_band() {
    // Length-2 subwords of a random word walk on X_2, so the band uses its
    // gap: 2·exp(-(1/3)·2e5·0.04²/8) is about 3e-6 per edge.
    let g = build_digraph(&f2(), 1).unwrap();
    let lambda1 = spectral_report(&build_digraph(&f2(), 2).unwrap(), 1).unwrap().lambda1;
    let n = 200_000;
    let gamma = 0.04;
    let bound = tail_bound(TailBoundQuery::Lezaud { lambda1, n: n as f64, gamma, n_q: 2.0 }).unwrap();
    assert!(bound < 1e-5);
    for seed in 0..3 {
        let v = random_reduced_word_with(&mut rng(seed), f2(), n);
        for f in edge_frequencies(&g, &v) {
            assert!((f - 1.0 / 12.0).abs() < gamma, "frequency {f}");
        }
    }
}
