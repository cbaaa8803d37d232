use num_bigint::BigInt;
use num_rational::BigRational;
use sclab::lp::pieces::PieceSystem;
use sclab::{extract_fatgraph, parse_chain, scl, verify_fatgraph, Alphabet, Chain, Mode, Number};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn chain(s: &str) -> Chain {
    parse_chain(s, &Alphabet::new(2).unwrap()).unwrap()
}

fn exact(s: &str) -> BigRational {
    let r = scl(&chain(s), Mode::Exact).unwrap();
    assert!(r.strong_duality_holds());
    r.value.exact().unwrap().clone()
}

#[test]
fn hand_values() {
    assert_eq!(exact("abAB"), q(1, 2));
    assert_eq!(exact("baBA"), q(1, 2));
    assert_eq!(exact("abABabAB"), q(1, 1));
    assert_eq!(exact("abAB + baBA"), q(0, 1));
    assert_eq!(exact("1/2*abAB"), q(1, 4));
}

#[test]
fn hand_primal_extracts_expected_fatgraph() {
    let c = chain("abAB").normalize();
    let sys = PieceSystem::new(&c).unwrap();
    let mut x = vec![q(0, 1); sys.squares().len() + sys.triangles().len()];
    for v in x.iter_mut().take(2) {
        *v = q(1, 1);
    }
    let s = sys.squares().len();
    for t in [[1, 0, 3], [3, 2, 1]] {
        let canon = sclab::lp::pieces::canonical_triangle(t);
        let k = sys.triangles().iter().position(|&u| u == canon).unwrap();
        x[s + k] = q(1, 1);
    }
    let y = sclab::lp::fatgraph_from_point(&sys, &x).unwrap();
    assert_eq!(y.vertex_count(), 2);
    assert_eq!(y.edge_count(), 3);
    assert_eq!(y.multiplicity, 1);
    assert_eq!(y.euler_characteristic, -1);
    assert_eq!(y.edges.iter().filter(|e| e.label.is_empty()).count(), 1);
    let report = verify_fatgraph(&y, &c);
    assert!(report.passed(), "{:?}", report.failures());
}

#[test]
fn extracted_optimum_verifies() {
    for s in ["abAB", "abABabAB", "aabAAB + abAB", "abaBAB"] {
        let c = chain(s);
        if !c.homologically_trivial() {
            continue;
        }
        let r = scl(&c, Mode::Exact).unwrap();
        let y = extract_fatgraph(&r, &c).unwrap();
        let report = verify_fatgraph(&y, &c);
        assert!(report.passed(), "{s}: {:?}", report.failures());
        assert_eq!(&y.scl_value(), r.value.exact().unwrap(), "{s}");
    }
}

#[test]
fn inexact_matches() {
    let r = scl(&chain("abAB"), Mode::Inexact).unwrap();
    match r.value {
        Number::Float(x) => assert!((x - 0.5).abs() < 1e-9),
        _ => panic!(),
    }
}
