use gns_core::channel::{self, choi, kraus_from_choi, CpMap};
use gns_core::compose::{
    gram_two_step, quad_label, two_step_entry_closed_form, verify_factorization,
};
use gns_core::gns::{gram_corner, gram_f, morita_witness, verify_theorem1};
use gns_core::numerics::{
    hermitian_eig, kronecker, numerical_rank, permute_conjugate, ComplexMatrix, ComplexSampler,
    RankPolicy,
};
use proptest::prelude::*;

const POLICY: RankPolicy = RankPolicy { absolute: None };

/// Random Hermitian matrix `(M + M*)/2`.
fn hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let m = ComplexSampler::new(seed).matrix(dim, dim);
    (&m + &m.adjoint()).scale_real(0.5)
}

/// Random PSD matrix `B B*` with `B` of shape `dim × rank`.
fn psd(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    let b = ComplexSampler::new(seed).matrix(dim, rank);
    &b * &b.adjoint()
}

fn units_agree(p: &CpMap, q: &CpMap, tol: f64) -> bool {
    let n = p.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            p.apply_unit(i, j)
                .max_abs_diff(&q.apply_unit(i, j))
                .unwrap()
                <= tol
        })
    })
}

fn permutation(len: usize, seed: u64) -> Vec<usize> {
    let mut s = ComplexSampler::new(seed);
    let mut v: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        v.swap(i, s.next_index(i + 1));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_reconstructs(dim in 1usize..9, seed in any::<u64>()) {
        let h = hermitian(dim, seed);
        let tol = 1e-12;
        let eig = hermitian_eig(&h, tol).unwrap();
        let err = eig.reconstruct().max_abs_diff(&h).unwrap();
        prop_assert!(err <= 10.0 * tol * h.max_abs().max(1.0), "err {err:e}");
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let gram = &eig.vectors.adjoint() * &eig.vectors;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() <= 1e-12);
    }

    #[test]
    fn kronecker_rank_is_multiplicative(
        da in 1usize..5, ra in 0usize..5, db in 1usize..5, rb in 0usize..5, seed in any::<u64>()
    ) {
        let ra = ra.min(da);
        let rb = rb.min(db);
        let a = psd(da, ra, seed);
        let b = psd(db, rb, seed.wrapping_add(1));
        let rank_a = numerical_rank(&a, POLICY).unwrap();
        let rank_b = numerical_rank(&b, POLICY).unwrap();
        prop_assert_eq!(rank_a, ra);
        prop_assert_eq!(rank_b, rb);
        prop_assert_eq!(numerical_rank(&kronecker(&a, &b), POLICY).unwrap(), rank_a * rank_b);
    }

    #[test]
    fn permutation_preserves_rank(dim in 1usize..10, rank in 0usize..10, seed in any::<u64>()) {
        let h = psd(dim, rank.min(dim), seed);
        let sigma = permutation(dim, seed ^ 0x5555);
        let p = permute_conjugate(&h, &sigma).unwrap();
        prop_assert_eq!(numerical_rank(&p, POLICY).unwrap(), numerical_rank(&h, POLICY).unwrap());
        for i in 0..dim {
            for j in 0..dim {
                prop_assert_eq!(p[(sigma[i], sigma[j])], h[(i, j)]);
            }
        }
    }

    #[test]
    fn rank_invariant_under_unitary_conjugation(dim in 1usize..9, rank in 0usize..9, seed in any::<u64>()) {
        let h = psd(dim, rank.min(dim), seed);
        let u = ComplexSampler::new(seed ^ 0xabcdef).unitary(dim);
        let conj = &(&u * &h) * &u.adjoint();
        prop_assert_eq!(numerical_rank(&conj, POLICY).unwrap(), rank.min(dim));
    }

    #[test]
    fn kraus_mixing_changes_nothing(n in 1usize..4, count in 1usize..6, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let v = ComplexSampler::new(!seed).unitary(count);
        let q = p.mix(&v).unwrap();
        prop_assert!(units_agree(&p, &q, 1e-12));
        prop_assert_eq!(channel::index(&p, POLICY).unwrap(), channel::index(&q, POLICY).unwrap());
        let diff = gram_f(&p).matrix().max_abs_diff(gram_f(&q).matrix()).unwrap();
        prop_assert!(diff <= 1e-10);
    }

    #[test]
    fn choi_round_trip(n in 1usize..5, count in 0usize..7, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let q = kraus_from_choi(&choi(&p), POLICY).unwrap();
        prop_assert!(units_agree(&p, &q, 1e-10));
        prop_assert_eq!(q.kraus_count(), channel::span_rank(&p, POLICY).unwrap());
    }

    #[test]
    fn positivity_preserved(n in 1usize..5, count in 1usize..5, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let probe = psd(n, 1 + (seed as usize % n), seed.rotate_left(7));
        let image = p.apply(&probe).unwrap();
        let eig = hermitian_eig(&image, 1e-10).unwrap();
        let floor = -1e-12 * image.max_abs().max(1.0);
        prop_assert!(eig.min_eigenvalue().unwrap() >= floor);
    }

    #[test]
    fn index_three_ways_agree(n in 1usize..4, count in 0usize..12, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let r = channel::index(&p, POLICY).unwrap();
        prop_assert!(r.agree, "{r:?}");
        // generic rank of count vectors in an n²-dimensional space
        prop_assert_eq!(r.d_span, count.min(n * n));
    }

    #[test]
    fn gram_equals_corner(n in 1usize..5, count in 0usize..8, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let diff = gram_f(&p).matrix().max_abs_diff(gram_corner(&p).matrix()).unwrap();
        prop_assert!(diff <= 1e-10);
        prop_assert!(verify_theorem1(&p, POLICY).unwrap().pass);
    }

    #[test]
    fn gram_scales_linearly(n in 1usize..4, count in 1usize..5, seed in any::<u64>(), c in 0.01f64..100.0) {
        let p = CpMap::random(n, count, seed);
        let g = gram_f(&p);
        let gc = gram_f(&p.scaled(c).unwrap());
        let diff = gc.matrix().max_abs_diff(&g.matrix().scale_real(c)).unwrap();
        prop_assert!(diff <= 1e-12 * g.matrix().max_abs().max(1.0) * c.max(1.0));
        prop_assert_eq!(gc.rank(POLICY).unwrap(), g.rank(POLICY).unwrap());
    }

    #[test]
    fn witness_contract(n in 1usize..4, count in 0usize..10, seed in any::<u64>()) {
        let p = CpMap::random(n, count, seed);
        let g = gram_f(&p);
        let w = morita_witness(&p, POLICY).unwrap();
        prop_assert_eq!(w.d, count.min(n * n));
        prop_assert!(w.residual <= 1e-10, "residual {:e}", w.residual);

        // project a random vector off the span of V's columns
        let dim = n * n;
        let mut x = ComplexSampler::new(seed ^ 1).matrix(dim, 1);
        for k in 0..w.d {
            let col = w.isometry.column(k);
            let len: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let unit = ComplexMatrix::column_vector(&col).scale_real(1.0 / len);
            let coeff = (&unit.adjoint() * &x)[(0, 0)];
            x = &x - &unit.scale(coeff);
        }
        let gx = (g.matrix() * &x).frobenius_norm();
        let g_norm = g.matrix().frobenius_norm();
        prop_assert!(gx <= 1e-10 * g_norm.max(1.0) * x.frobenius_norm().max(1.0), "leak {gx:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn factorization_is_symmetric(c1 in 0usize..5, c2 in 0usize..5, seed in any::<u64>()) {
        let p1 = CpMap::random(2, c1, seed);
        let p2 = CpMap::random(2, c2, seed.wrapping_mul(3));
        let a = verify_factorization(&p1, &p2, POLICY).unwrap();
        let b = verify_factorization(&p2, &p1, POLICY).unwrap();
        prop_assert!(a.pass && b.pass, "{a:?} {b:?}");
        prop_assert_eq!(a.rank_12, a.d1 * a.d2);
        prop_assert_eq!(a.rank_12, c1.min(4) * c2.min(4));
    }
}

#[test]
fn closed_form_matches_literal_everywhere_at_n2() {
    let p1 = CpMap::random(2, 3, 1001);
    let p2 = CpMap::random(2, 2, 1002);
    let g = gram_two_step(&p1, &p2).unwrap();
    for x in 0..16 {
        for y in 0..16 {
            let (r, c) = (quad_label(2, x), quad_label(2, y));
            let closed = two_step_entry_closed_form(&p1, &p2, r, c).unwrap();
            assert!((closed - g.entry(r, c)).norm() <= 1e-12);
        }
    }
}

#[test]
fn two_step_gram_is_hermitian_psd() {
    let p1 = CpMap::random(3, 2, 7);
    let p2 = CpMap::random(3, 3, 8);
    let g = gram_two_step(&p1, &p2).unwrap();
    assert!(g.matrix().hermitian_defect() <= 1e-12);
    assert_eq!(numerical_rank(g.matrix(), POLICY).unwrap(), 6);
}

#[test]
fn printed_entry_order_is_a_relabeling() {
    // Σ_r t_r[i,j]·conj(t_r[k,l]) at ((i,j),(k,l)) is gram_F with ε_ij ↔ ε_ji.
    let n = 3;
    let p = CpMap::random(n, 4, 2718);
    let printed = ComplexMatrix::from_fn(n * n, n * n, |x, y| {
        let (i, j, k, l) = (x / n, x % n, y / n, y % n);
        p.kraus().iter().map(|t| t[(i, j)] * t[(k, l)].conj()).sum()
    });
    let swap: Vec<usize> = (0..n * n).map(|x| (x % n) * n + x / n).collect();
    let relabeled = permute_conjugate(gram_f(&p).matrix(), &swap).unwrap();
    assert!(printed.max_abs_diff(&relabeled).unwrap() <= 1e-14);
    assert_eq!(numerical_rank(&printed, POLICY).unwrap(), 4);
}

#[test]
fn public_types_are_thread_safe() {
    fn check<T: Send + Sync>() {}
    check::<CpMap>();
    check::<ComplexMatrix>();
    check::<gns_core::GramMatrix>();
    check::<gns_core::TwoStepGram>();
    check::<gns_core::Error>();
}
