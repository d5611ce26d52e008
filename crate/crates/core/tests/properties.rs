use std::f64::consts::PI;

use coxlimits::format::sig17;
use coxlimits::*;
use proptest::prelude::*;

fn f2() -> CoxeterDatum {
    parse_coxeter_matrix("3\n1 3 4\n3 1 3\n4 3 1", -1.0, &[]).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Rank 2..=4 data mixing finite and infinite bonds.
fn datum_strategy() -> impl Strategy<Value = CoxeterDatum> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let bonds = proptest::collection::vec(
                prop_oneof![
                    (2u32..8).prop_map(|m| -(PI / m as f64).cos()),
                    (-2.0f64..=-1.0),
                ],
                n * (n - 1) / 2,
            );
            (Just(n), bonds)
        })
        .prop_map(|(n, bonds)| {
            let mut g = vec![vec![1.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    g[i][j] = bonds[k];
                    g[j][i] = bonds[k];
                    k += 1;
                }
            }
            CoxeterDatum::from_gram(g).unwrap()
        })
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, 3)
}

proptest! {
    #[test]
    fn form_is_symmetric_and_bilinear(x in vec3(), y in vec3(), z in vec3(), k in -5.0f64..5.0) {
        let d = f2();
        let lhs = d.bilinear(&x.iter().zip(&y).map(|(a, b)| a + k * b).collect::<Vec<_>>(), &z).unwrap();
        let rhs = d.bilinear(&x, &z).unwrap() + k * d.bilinear(&y, &z).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
        prop_assert!(close(d.bilinear(&x, &y).unwrap(), d.bilinear(&y, &x).unwrap(), 1e-12));
    }

    #[test]
    fn reflections_are_form_preserving_involutions(d in datum_strategy(), seed in proptest::collection::vec(-3.0f64..3.0, 4), s in 0usize..4) {
        let n = d.rank();
        let s = s % n;
        let v = &seed[..n];
        let w: Vec<f64> = seed.iter().rev().take(n).copied().collect();
        let rv = d.reflect(s, v).unwrap();
        let rrv = d.reflect(s, &rv).unwrap();
        for (a, b) in rrv.iter().zip(v) {
            prop_assert!(close(*a, *b, 1e-12));
        }
        let rw = d.reflect(s, &w).unwrap();
        prop_assert!(close(d.bilinear(&rv, &rw).unwrap(), d.bilinear(v, &w).unwrap(), 1e-10));
        // r_s a_s = -a_s
        let a = Vector::basis(n, s);
        prop_assert_eq!(d.reflect(s, &a).unwrap().0, a.scaled(-1.0).0);
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant(v in vec3(), k in 0.1f64..100.0) {
        prop_assume!(v.iter().sum::<f64>().abs() > 1e-3);
        let p = normalize(&v).unwrap();
        let pp = normalize(&p).unwrap();
        let pk = normalize(&v.iter().map(|x| x * k).collect::<Vec<_>>()).unwrap();
        for i in 0..3 {
            prop_assert!(close(p[i], pp[i], 1e-12));
            prop_assert!(close(p[i], pk[i], 1e-12));
        }
        prop_assert!(close(p.iter().sum::<f64>(), 1.0, 1e-12));
    }

    #[test]
    fn generated_roots_are_positive_unit_roots(d in datum_strategy()) {
        let t = match generate_positive_roots_capped_checked(&d, 4) {
            Some(t) => t,
            None => return Ok(()),
        };
        let mut prev: Option<&Root> = None;
        for r in t.roots() {
            prop_assert!(r.coords.iter().all(|&c| c >= -1e-9));
            prop_assert!(close(d.bilinear(&r.coords, &r.coords).unwrap(), 1.0, 1e-8));
            let w = apply_word(&d, &r.word, &Vector::basis(d.rank(), r.base)).unwrap();
            for (a, b) in w.iter().zip(r.coords.iter()) {
                prop_assert!(close(*a, *b, 1e-9));
            }
            if let Some(p) = prev {
                prop_assert!(p.depth <= r.depth);
            }
            prev = Some(r);
        }
    }

    #[test]
    fn shallower_tables_are_prefixes(depth in 0usize..6) {
        let d = f2();
        let small = generate_positive_roots(&d, depth).unwrap();
        let big = generate_positive_roots(&d, depth + 1).unwrap();
        prop_assert!(small.len() <= big.len());
        prop_assert_eq!(small.roots(), &big.roots()[..small.len()]);
    }

    #[test]
    fn chebyshev_matches_sinh(theta in 0.05f64..2.0, i in 0usize..40) {
        let c = chebyshev_c(theta, i);
        let exact = (i as f64 * theta).sinh() / theta.sinh();
        prop_assert!(close(c, exact, 1e-9));
    }

    #[test]
    fn sig17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn dot_action_generator_is_involution(k in 0usize..348, s in 0usize..3) {
        let d = f2();
        let t = generate_positive_roots(&d, 10).unwrap();
        let e2 = sample_e2(&d, &t, 200, 4).unwrap();
        let p = &e2.points[k % e2.len()];
        let once = dot_action(&d, &[s], p).unwrap();
        let twice = dot_action(&d, &[s], &once).unwrap();
        for i in 0..3 {
            prop_assert!((twice[i] - p[i]).abs() <= 1e-12);
        }
        prop_assert!(d.bilinear(&once, &once).unwrap().abs() <= 1e-9);
    }
}

fn generate_positive_roots_capped_checked(d: &CoxeterDatum, depth: usize) -> Option<RootTable> {
    coxlimits::rootgen::generate_positive_roots_capped(d, depth, 20_000).ok()
}

fn verdict(d: &CoxeterDatum, x: &Root, y: &Root) -> Direction {
    dominance_verdict(d, &x.coords, &y.coords, 8).unwrap().direction
}

fn dominates(dir: Direction) -> bool {
    matches!(dir, Direction::XdomY | Direction::Equal)
}

#[test]
fn dominance_is_antisymmetric_and_transitive() {
    for d in [f2(), parse_gram_matrix("3\n1 -1.01 -1.01\n-1.01 1 -1.01\n-1.01 -1.01 1").unwrap()] {
        let t = generate_positive_roots(&d, 3).unwrap();
        let roots = t.roots();
        let n = roots.len();
        let dom: Vec<Vec<bool>> = roots
            .iter()
            .map(|x| roots.iter().map(|y| dominates(verdict(&d, x, y))).collect())
            .collect();
        for i in 0..n {
            assert!(dom[i][i]);
            for j in 0..n {
                if i != j {
                    assert!(!(dom[i][j] && dom[j][i]), "antisymmetry fails for {i},{j}");
                }
                for k in 0..n {
                    if dom[i][j] && dom[j][k] {
                        assert!(dom[i][k], "transitivity fails for {i},{j},{k}");
                    }
                }
            }
        }
    }
}

#[test]
fn dominance_presence_is_w_invariant() {
    let d = f2();
    let t = generate_positive_roots(&d, 3).unwrap();
    for x in t.roots() {
        for y in t.roots() {
            let before = dominance_present(&d, &x.coords, &y.coords).unwrap();
            for s in 0..3 {
                let wx = d.reflect(s, &x.coords).unwrap();
                let wy = d.reflect(s, &y.coords).unwrap();
                assert_eq!(dominance_present(&d, &wx, &wy).unwrap(), before);
            }
        }
    }
}

#[test]
fn dominance_direction_is_w_equivariant() {
    // w preserves dominance as long as both images stay positive
    let d = f2();
    let t = generate_positive_roots(&d, 3).unwrap();
    for x in t.roots() {
        for y in t.roots() {
            let v = dominance_verdict(&d, &x.coords, &y.coords, 8).unwrap();
            for s in 0..3 {
                let wx = d.reflect(s, &x.coords).unwrap();
                let wy = d.reflect(s, &y.coords).unwrap();
                if wx.iter().chain(wy.iter()).any(|&c| c < -1e-9) {
                    continue;
                }
                assert_eq!(dominance_verdict(&d, &wx, &wy, 8).unwrap().direction, v.direction);
            }
        }
    }
}

#[test]
fn neighborhood_certificates_are_nested() {
    let d = f2();
    let t = generate_positive_roots(&d, 12).unwrap();
    let e2 = sample_e2(&d, &t, 200, 4).unwrap();
    let roots = t.roots();
    let (x, y) = (0..roots.len())
        .flat_map(|i| ((i + 1)..roots.len()).map(move |j| (i, j)))
        .map(|(i, j)| (&roots[i].coords, &roots[j].coords))
        .find(|(x, y)| d.bilinear(x, y).unwrap() < -1.0 - 1e-12)
        .unwrap();
    let pair = make_dihedral_pair(&d, x, y).unwrap();
    for eta in &e2.points {
        let mut failed = false;
        for i in 0..30 {
            let mut probe = NeighborhoodProbe::new(&pair, i).unwrap();
            let ok = probe.certify(eta).unwrap();
            assert!(!(failed && ok), "certificate recovers at i = {i}");
            failed |= !ok;
        }
    }
}

#[test]
fn neighborhood_membership_is_nested() {
    let d = parse_gram_matrix("2\n1 -1.25\n-1.25 1").unwrap();
    let pair = make_dihedral_pair(&d, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
    let t = generate_positive_roots(&d, 20).unwrap();
    for eta in [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0], [0.6, 0.4]] {
        for i in 0..4 {
            let inner = neighborhood_membership(&pair, i + 1, &t, &eta, 1e-3).unwrap();
            let outer = neighborhood_membership(&pair, i, &t, &eta, 1e-3).unwrap();
            assert!(!inner || outer, "N_{} ⊄ N_{i} at {eta:?}", i + 1);
        }
    }
}

#[test]
fn limit_points_pair_non_positively_with_imaginary_cone_samples() {
    let d = f2();
    let t = generate_positive_roots(&d, 12).unwrap();
    let e2 = sample_e2(&d, &t, 200, 4).unwrap();
    // W-images of a fundamental cone point
    let k = [1.0, 1.0, 1.0];
    assert!(fundamental_cone_contains(&d, &k).unwrap());
    for w in [vec![], vec![0], vec![1, 2], vec![0, 1, 2], vec![2, 1, 0, 1]] {
        let z = apply_word(&d, &w, &k).unwrap();
        for eta in &e2.points {
            assert!(d.bilinear(&z, eta).unwrap() <= 1e-8);
        }
    }
}
