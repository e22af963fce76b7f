//! Cross-checks of the fast algorithms against slow, independent ones.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankgeo::linalg::{self, gaussian_binomial, SubspaceIter};
use rankgeo::verify::{brute_force_min_distance, random_code};
use rankgeo::{constructions, rank_weight, Budget, Elem, FieldTower, Mat, QSystem, RankMetricCode};

fn b() -> Budget {
    Budget::default()
}

#[test]
fn table_arithmetic_matches_polynomial_arithmetic() {
    for (p, e, m) in [(2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2), (5, 1, 2), (3, 2, 1), (2, 3, 2)] {
        let t = FieldTower::new(p, e, m).unwrap();
        for a in t.elements() {
            for c in t.elements() {
                assert_eq!(t.mul(a, c), t.mul_reference(a, c), "{p},{e},{m}: {a} * {c}");
            }
            // a^q by repeated reference multiplication
            let aq = (1..t.q()).fold(a, |y, _| t.mul_reference(y, a));
            assert_eq!(t.frobenius(a, 1), aq);
        }
    }
}

#[test]
fn frobenius_is_a_power_map() {
    let t = FieldTower::new(3, 1, 3).unwrap();
    for a in t.elements() {
        for i in 0..4 {
            assert_eq!(t.frobenius(a, i), t.pow(a, 3i64.pow(i as u32)).unwrap());
        }
        assert!(t.in_base_field(t.trace(a)));
    }
}

#[test]
fn enumeration_matches_gaussian_binomials() {
    for (n, k, s) in [(4, 2, 2), (5, 2, 2), (3, 1, 8), (4, 2, 3), (6, 3, 2), (3, 2, 4), (5, 0, 2), (5, 5, 3)] {
        let all: Vec<Mat> = SubspaceIter::new(n, k, s).collect();
        assert_eq!(all.len() as u128, gaussian_binomial(n, k, s as u64));
        // Every element is an RREF matrix of full rank, and no two span the same space.
        let t = FieldTower::for_order(s, 1).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for m in &all {
            let r = linalg::rref(&t, m);
            assert_eq!(r.rank, k);
            assert_eq!(&r.basis(), m);
            assert!(seen.insert(m.entries().iter().map(|x| x.0).collect::<Vec<_>>()));
        }
    }
}

#[test]
fn distance_by_hyperplanes_matches_codeword_enumeration() {
    let t = tower(2, 1, 3);
    for k in 1..=2 {
        for n in k..=4 {
            for g in SubspaceIter::new(n, k, 8) {
                let c = RankMetricCode::new(t.clone(), g).unwrap();
                assert_eq!(c.min_rank_distance(b()).unwrap(), brute_force_min_distance(&c), "{c:?}");
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, e, m, k, n) in [(3, 1, 2, 2, 4), (3, 1, 2, 3, 5), (2, 2, 2, 2, 3), (2, 1, 4, 2, 5), (5, 1, 2, 2, 3)] {
        let t = tower(p, e, m);
        for _ in 0..10 {
            let c = random_code(&t, k, n, false, &mut rng).unwrap();
            assert_eq!(c.min_rank_distance(b()).unwrap(), brute_force_min_distance(&c), "{c:?}");
        }
    }
}

/// Members of U, listed by enumerating all F_q-combinations of the basis.
fn elements(u: &QSystem) -> Vec<Vec<Elem>> {
    let t = u.tower();
    let n = u.n();
    let q = t.q();
    let mut out = Vec::new();
    let mut coeffs = vec![0u32; n];
    loop {
        let mut v = vec![Elem::ZERO; u.k()];
        for (i, &c) in coeffs.iter().enumerate() {
            for (x, &y) in v.iter_mut().zip(u.basis().row(i)) {
                *x = t.add(*x, t.mul(Elem(c), y));
            }
        }
        out.push(v);
        let mut i = 0;
        while i < n {
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

#[test]
fn intersections_agree_across_three_methods() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, e, m, k, n) in [(2, 1, 3, 2, 4), (2, 1, 3, 3, 5), (3, 1, 2, 2, 3), (2, 1, 4, 2, 5), (2, 2, 2, 2, 3)] {
        let t = tower(p, e, m);
        for _ in 0..6 {
            let u = random_code(&t, k, n, true, &mut rng).unwrap().system().unwrap();
            let members = elements(&u);
            for h in 0..=k {
                for w in SubspaceIter::new(k, h, t.order()).take(40) {
                    let fast = u.intersection_dim(&w).unwrap();
                    let explicit = u.intersection_dim_explicit(&w).unwrap();
                    let inside = members
                        .iter()
                        .filter(|v| linalg::rank(&t, &w.stack(&Mat::from_rows(vec![v.to_vec()]).unwrap()).unwrap()) == h)
                        .count();
                    let mut dim = 0;
                    while (t.q() as usize).pow(dim) < inside {
                        dim += 1;
                    }
                    assert_eq!((t.q() as usize).pow(dim), inside);
                    assert_eq!(fast, explicit);
                    assert_eq!(fast, dim as usize);
                }
            }
        }
    }
}

#[test]
fn geometric_and_galois_weights_agree() {
    let t = tower(2, 1, 3);
    for k in 1..=2 {
        for n in k..=4 {
            for g in SubspaceIter::new(n, k, 8) {
                let c = RankMetricCode::new(t.clone(), g).unwrap();
                if c.is_nondegenerate() {
                    assert_eq!(c.generalized_weights_geometric(b()).unwrap(), c.generalized_weights_galois(b()).unwrap(), "{c:?}");
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let (p, m) = [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)][rng.gen_range(0..5)];
        let t = tower(p, 1, m);
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(k..=(k * m as usize).min(6));
        let c = random_code(&t, k, n, true, &mut rng).unwrap();
        assert_eq!(c.generalized_weights_geometric(b()).unwrap(), c.generalized_weights_galois(b()).unwrap(), "{c:?}");
    }
}

#[test]
fn single_row_weight_is_rank_of_entries() {
    let t = tower(3, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let row: Vec<Elem> = (0..n).map(|_| Elem(rng.gen_range(0..27))).collect();
        let Ok(c) = RankMetricCode::new(t.clone(), Mat::from_rows(vec![row.clone()]).unwrap()) else { continue };
        let w = rank_weight(&t, &row);
        assert_eq!(c.min_rank_distance(b()).unwrap(), w);
        if c.is_nondegenerate() {
            assert_eq!(c.weights(b()).unwrap().0, vec![n]);
        }
    }
}

#[test]
fn gabidulin_spectrum_matches_mrd_weight_distribution() {
    // An MRD [4,2,3]_{16/2} code has [4 choose 3]_2 (16-1) = 225 codewords of
    // rank 3, i.e. 15 projective classes, leaving 2 of the 17 classes at rank 4.
    let t = tower(2, 1, 4);
    let c = constructions::gabidulin(t.clone(), 4, 2, None).unwrap();
    let s = c.system().unwrap().hyperplane_spectrum(b()).unwrap();
    assert_eq!(s.values.len(), 17);
    assert_eq!(s.histogram, BTreeMap::from([(0, 2), (1, 15)]));
    let mut weights = BTreeMap::new();
    for a in t.elements() {
        for x in t.elements() {
            let w = rank_weight(&t, &c.codeword(&[a, x]).unwrap());
            *weights.entry(w).or_insert(0) += 1;
        }
    }
    assert_eq!(weights, BTreeMap::from([(0, 1), (3, 225), (4, 30)]));
}

#[test]
fn hyperplane_counts() {
    for (q, m, k, expected) in [(2, 3, 2, 9), (2, 4, 2, 17), (2, 3, 3, 73), (3, 2, 2, 10)] {
        let t = Arc::new(FieldTower::for_order(q, m).unwrap());
        let u = constructions::pseudoregulus_system(t, k, b()).unwrap();
        assert_eq!(u.hyperplane_spectrum(b()).unwrap().values.len(), expected);
    }
}
