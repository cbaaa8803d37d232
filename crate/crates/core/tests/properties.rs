use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use sclab::experiments::{phase, PhaseConfig};
use sclab::quasimorphism::{count_disjoint, rigidity_certificate, CountingSet};
use sclab::sampling::subword_stats;
use sclab::tripods::{assemble_upper_bound, TripodMeasure};
use sclab::group::cyclic_core;
use sclab::{cyclic_reduce, reduce, scl, Chain, Letter, Mode, Word};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| reduce(&ls.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect::<Vec<_>>()))
}

/// Cyclically reduced words in the commutator subgroup of F₂.
fn boundary_word(max_len: usize) -> impl Strategy<Value = Word> {
    word(2, max_len)
        .prop_map(|w| {
            let ab = w.abelianization(2);
            let mut letters = w.letters().to_vec();
            for (g, &e) in ab.iter().enumerate() {
                letters.extend(std::iter::repeat_n(Letter::new(g, e > 0), e.unsigned_abs() as usize));
            }
            cyclic_reduce(&reduce(&letters)).0.word().clone()
        })
        .prop_filter("nontrivial", |w| !w.is_empty())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact(c: &Chain) -> BigRational {
    let r = scl(c, Mode::Exact).unwrap();
    assert!(r.strong_duality_holds());
    r.value.exact().unwrap().clone()
}

proptest! {
    #[test]
    fn inverse_is_an_anti_involution(u in word(3, 20), v in word(3, 20)) {
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        prop_assert!(u.mul(&u.inverse()).is_empty());
    }

    #[test]
    fn cyclic_core_is_conjugate(u in word(3, 20)) {
        let (canonical, conj) = cyclic_reduce(&u);
        let core = cyclic_core(&u);
        prop_assert_eq!(conj.mul(&core).mul(&conj.inverse()), u.clone());
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(sclab::CyclicWord::new(&core).unwrap(), canonical);
    }

    #[test]
    fn subword_counts_have_the_right_mass(u in word(2, 40), len in 1usize..6) {
        prop_assume!(len <= u.len());
        let m = subword_stats(&u, len, false).unwrap();
        prop_assert_eq!(m.total_mass(), (u.len() - len + 1) as u64);
        let core = cyclic_reduce(&u).0.word().clone();
        prop_assume!(len <= core.len());
        prop_assert_eq!(subword_stats(&core, len, true).unwrap().total_mass(), core.len() as u64);
    }

    #[test]
    fn asymmetry_is_inverse_invariant(u in word(2, 60), len in 1usize..6) {
        prop_assume!(len <= u.len());
        let a = subword_stats(&u, len, false).unwrap().inverse_asymmetry();
        let b = subword_stats(&u.inverse(), len, false).unwrap().inverse_asymmetry();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn first_letter_asymmetry_vanishes_on_commutators(v in boundary_word(40)) {
        prop_assert_eq!(subword_stats(&v, 1, true).unwrap().inverse_asymmetry(), 0.0);
    }

    #[test]
    fn counting_is_antisymmetric_with_small_defect(
        s in prop::collection::vec(word(2, 3), 1..4),
        g in word(2, 10),
        h in word(2, 10),
    ) {
        let s: Vec<Word> = s.into_iter().filter(|w| !w.is_empty()).collect();
        prop_assume!(!s.is_empty());
        let s = CountingSet::new(s).unwrap();
        let inv = s.inverse();
        let qm = |w: &Word| count_disjoint(&s, w) as i64 - count_disjoint(&inv, w) as i64;
        prop_assert_eq!(qm(&g.inverse()), -qm(&g));
        prop_assert!((qm(&g.mul(&h)) - qm(&g) - qm(&h)).abs() <= 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scl_is_a_seminorm(u in boundary_word(8), v in boundary_word(8)) {
        let cu = Chain::single(2, &u);
        let cv = Chain::single(2, &v);
        let su = exact(&cu);
        prop_assert_eq!(exact(&cu.negate()), su.clone());
        prop_assert_eq!(exact(&cu.scale(&q(3, 2))), &su * q(3, 2));
        prop_assert!(exact(&cu.add(&cv)) <= &su + exact(&cv));
    }

    #[test]
    fn scl_of_powers(u in boundary_word(6)) {
        let c = Chain::single(2, &u);
        prop_assert_eq!(exact(&Chain::single(2, &u.pow(2))), exact(&c) * q(2, 1));
    }

    #[test]
    fn bounds_sandwich_scl(u in boundary_word(14)) {
        prop_assume!(u.len() >= 4);
        let s = exact(&Chain::single(2, &u));
        let lower = rigidity_certificate(&u, 2, 0.25).unwrap().lower_bound_value().unwrap();
        let upper = assemble_upper_bound(&u, 1, 1 << 12).unwrap().upper_bound;
        prop_assert!(lower <= s && s <= upper, "{} <= {} <= {}", lower, s, upper);
    }

    #[test]
    fn tripod_boundary_is_linear(u in boundary_word(30)) {
        prop_assume!(u.len() >= 2);
        let v = sclab::CyclicWord::new(&u).unwrap();
        let m = TripodMeasure::uniform(&v, 1).unwrap();
        let doubled = m.add(&m);
        let b1 = m.boundary(&v);
        let b2 = doubled.boundary(&v);
        for (k, x) in &b1 {
            prop_assert_eq!(b2.get(k).cloned().unwrap_or_default(), x * q(2, 1));
        }
        prop_assert_eq!(doubled.imbalance(&v), m.imbalance(&v) * q(2, 1));
    }
}

#[test]
fn phase_csv_is_deterministic() {
    let cfg = PhaseConfig { n: 2000, seeds: vec![3, 4], ell_max: 5, ..PhaseConfig::default() };
    let a = phase(&cfg).unwrap().csv().unwrap();
    let b = phase(&cfg).unwrap().csv().unwrap();
    assert_eq!(a, b);
}
