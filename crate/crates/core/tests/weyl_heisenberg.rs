use std::f64::consts::PI;

use twodesign::matrix::{ComplexMatrix, C64, TOL_RANK};
use twodesign::weyl::{
    displacement, displacement_vectors, enumerate_wh, f_of, index_closure, multi_displacement_matrix,
    multi_projective_order, projective_order_of, WHIndex,
};

/// Independent construction of `τ^k τ^{p₁p₂} S^{p₁} T^{p₂}` from explicit
/// shift and clock matrices.
fn oracle(d: usize, k: usize, p: [usize; 2]) -> ComplexMatrix {
    let tau = C64::from_polar(1.0, PI * (d as f64 + 1.0) / d as f64);
    let omega = tau * tau;
    let mut s = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        s[((r + 1) % d, r)] = C64::new(1.0, 0.0);
    }
    let t = ComplexMatrix::diagonal(&(0..d).map(|r| omega.powu(r as u32)).collect::<Vec<_>>());
    let mut m = ComplexMatrix::identity(d);
    for _ in 0..p[0] {
        m = &m * &s;
    }
    for _ in 0..p[1] {
        m = &m * &t;
    }
    m.scale(tau.powu((k + p[0] * p[1]) as u32))
}

#[test]
fn displacements_match_explicit_construction() {
    for d in 2..=8 {
        for p1 in 0..d {
            for p2 in 0..d {
                let diff = displacement(d, [p1, p2]).frobenius_distance(&oracle(d, 0, [p1, p2]));
                assert!(diff < 1e-12, "d={d} p=({p1},{p2}) diff={diff}");
            }
        }
    }
}

#[test]
fn exhaustive_composition_small_dimensions() {
    for d in 2..=4 {
        let all = enumerate_wh(d).unwrap();
        for a in &all {
            for b in &all {
                let product = &oracle(d, a.k, a.p) * &oracle(d, b.k, b.p);
                let c = a.compose(b).unwrap();
                assert!(product.frobenius_distance(&oracle(d, c.k, c.p)) < 1e-10, "d={d} {a:?}·{b:?}");
            }
        }
    }
}

#[test]
fn group_sizes_by_closure() {
    for (d, expected) in [(2, 16), (3, 27), (4, 128), (5, 125), (6, 432)] {
        assert_eq!(d * d * f_of(d).unwrap(), expected);
        let all_displacements: Vec<WHIndex> = (0..d * d).map(|i| WHIndex::displacement(d, [i / d, i % d])).collect();
        let closure = index_closure(&all_displacements).unwrap();
        assert_eq!(closure.len(), expected, "d={d}");
        let mut all = enumerate_wh(d).unwrap();
        all.sort();
        assert_eq!(closure, all);
    }
}

#[test]
fn step_generators_miss_the_sign_for_even_d() {
    for d in 2..=7 {
        let steps = [WHIndex::displacement(d, [1, 0]), WHIndex::displacement(d, [0, 1])];
        let closure = index_closure(&steps).unwrap();
        // τ^{p₁p₂} only reaches the ω-powers, so even d gets half the group
        assert_eq!(closure.len(), d * d * d, "d={d}");
        assert_eq!(closure.len() == d * d * f_of(d).unwrap(), d % 2 == 1);
    }
}

#[test]
fn gram_matrix_has_full_rank() {
    for d in 2..=8 {
        let ds: Vec<ComplexMatrix> = (0..d * d).map(|i| displacement(d, [i / d, i % d])).collect();
        let gram = ComplexMatrix::from_fn(d * d, d * d, |i, j| ds[i].hs_inner(&ds[j]));
        assert_eq!(gram.rank(TOL_RANK), d * d, "d={d}");
        assert!(gram.frobenius_distance(&ComplexMatrix::identity(d * d).scale(C64::new(d as f64, 0.0))) < 1e-9);
    }
}

fn proportional_to_identity(m: &ComplexMatrix) -> bool {
    let c = m[(0, 0)];
    c.norm() > 0.5 && m.frobenius_distance(&ComplexMatrix::identity(m.rows()).scale(c)) < 1e-9
}

#[test]
fn projective_orders_match_matrix_powers() {
    for d in 2..=8 {
        for p1 in 0..d {
            for p2 in 0..d {
                let m = oracle(d, 0, [p1, p2]);
                let mut acc = m.clone();
                let mut r = 1;
                while !proportional_to_identity(&acc) {
                    acc = &acc * &m;
                    r += 1;
                }
                assert_eq!(projective_order_of(d, [p1, p2]), r, "d={d} p=({p1},{p2})");
            }
        }
    }
}

#[test]
fn multipartite_orders_match_matrix_powers() {
    for dims in [vec![2, 3], vec![2, 2], vec![3, 4], vec![2, 2, 3]] {
        for ps in displacement_vectors(&dims) {
            let m = multi_displacement_matrix(&dims, &ps);
            let mut acc = m.clone();
            let mut r = 1;
            while !proportional_to_identity(&acc) {
                acc = &acc * &m;
                r += 1;
            }
            assert_eq!(multi_projective_order(&dims, &ps), r, "{dims:?} {ps:?}");
        }
    }
}

#[test]
fn unitary_order_matches_matrix_powers() {
    for d in 2..=6 {
        for x in enumerate_wh(d).unwrap() {
            let m = oracle(d, x.k, x.p);
            let mut acc = m.clone();
            let mut r = 1;
            while acc.frobenius_distance(&ComplexMatrix::identity(d)) > 1e-9 {
                acc = &acc * &m;
                r += 1;
            }
            assert_eq!(x.unitary_order(), r, "{x:?}");
        }
    }
}
