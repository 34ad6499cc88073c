use std::collections::HashMap;

use fermisep::oracle::{densify, oracle_rdm, sparsify, DEFAULT_ORACLE_CAP};
use fermisep::{
    analyze, compute_rdm, diagonal_decomposition, max_abs_diff, Complex64, DMatrix, FermionState,
    LocalUnitary, OrbitalBasisIndex, DEFAULT_TOLERANCE,
};
use proptest::prelude::*;

/// ⟨i|ρ|j⟩ = (1/N) Σ_R (a_i ψ)_R conj((a_j ψ)_R), built from the ladder operators.
fn ladder_rdm(state: &FermionState) -> DMatrix<Complex64> {
    let basis = state.basis();
    let d = state.d();
    let mut reduced: Vec<HashMap<Vec<usize>, Complex64>> = vec![HashMap::new(); d];
    for (tuple, c) in state.entries() {
        for (i, slot) in reduced.iter_mut().enumerate() {
            if let Some((rest, sign)) = basis.annihilate(&tuple, i).unwrap() {
                *slot.entry(rest).or_default() += c * sign as f64;
            }
        }
    }
    let n = state.n() as f64;
    DMatrix::from_fn(d, d, |i, j| {
        reduced[i]
            .iter()
            .filter_map(|(r, ci)| reduced[j].get(r).map(|cj| ci * cj.conj()))
            .sum::<Complex64>()
            / n
    })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=7).prop_flat_map(|d| (Just(d), 1usize..=d))
}

fn small_shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|d| (Just(d), 1usize..=d.min(4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_unrank_round_trip((d, n) in shape(), pick in any::<prop::sample::Index>()) {
        let basis = OrbitalBasisIndex::new(d, n).unwrap();
        let k = pick.index(basis.size());
        let t = basis.unrank(k).unwrap();
        prop_assert_eq!(basis.rank(&t).unwrap(), k);
        prop_assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ladder_operators_anticommute((d, n) in shape(), pick in any::<prop::sample::Index>(), i in 0usize..7, j in 0usize..7) {
        prop_assume!(i < d && j < d && n >= 2);
        let basis = OrbitalBasisIndex::new(d, n).unwrap();
        let t = basis.unrank(pick.index(basis.size())).unwrap();
        let lower = OrbitalBasisIndex::new(d, n - 1).unwrap();
        let two = |a: usize, b: usize| -> HashMap<Vec<usize>, i32> {
            let mut out = HashMap::new();
            if let Some((t1, s1)) = basis.annihilate(&t, a).unwrap() {
                if let Some((t2, s2)) = lower.annihilate(&t1, b).unwrap() {
                    out.insert(t2, s1 * s2);
                }
            }
            out
        };
        let ij = two(i, j);
        let ji = two(j, i);
        for (k, v) in &ij {
            prop_assert_eq!(ji.get(k).copied().unwrap_or(0), -v);
        }
        prop_assert_eq!(ij.len(), ji.len());
    }

    #[test]
    fn states_are_normalized((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        prop_assert!((st.norm() - 1.0).abs() < 1e-12);
        let sl = FermionState::random_slater(d, n, seed).unwrap();
        prop_assert!((sl.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rdm_matches_ladder_oracle((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let rho = compute_rdm(&st);
        prop_assert!(max_abs_diff(rho.matrix(), &ladder_rdm(&st)) <= 1e-12);
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rdm_matches_dense_oracle((d, n) in small_shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let dense = densify(&st, DEFAULT_ORACLE_CAP).unwrap();
        prop_assert!(dense.antisymmetry_defect() <= 1e-14);
        let rho = compute_rdm(&st);
        prop_assert!(max_abs_diff(rho.matrix(), oracle_rdm(&dense).unwrap().matrix()) <= 1e-12);
        let back = sparsify(&dense).unwrap();
        for (a, b) in back.amplitudes().iter().zip(st.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-14);
        }
    }

    #[test]
    fn purity_and_entropy_bounds((d, n) in shape(), seed in any::<u64>()) {
        let r = analyze(&FermionState::random_state(d, n, seed).unwrap(), DEFAULT_TOLERANCE).unwrap();
        let nf = n as f64;
        prop_assert!(r.purity <= 1.0 / nf + 1e-12);
        prop_assert!(r.purity >= 1.0 / d as f64 - 1e-12);
        prop_assert!(r.entropy >= nf.ln() - 1e-8);
        prop_assert!(r.entropy <= (d as f64).ln() + 1e-8);
    }

    #[test]
    fn slater_determinants_saturate_bounds((d, n) in shape(), seed in any::<u64>()) {
        let r = analyze(&FermionState::random_slater(d, n, seed).unwrap(), DEFAULT_TOLERANCE).unwrap();
        prop_assert!(r.e_l.abs() <= 1e-10);
        prop_assert!(r.e_vn.abs() <= 1e-8);
        prop_assert!(r.idempotency_defect <= 1e-10);
        prop_assert!(r.separable() && r.verdicts_agree());
    }

    #[test]
    fn unitaries_preserve_norm_and_measures((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let u = LocalUnitary::random(d, seed ^ 0x5eed).unwrap();
        let moved = st.apply_local_unitary(&u).unwrap();
        prop_assert!((moved.norm() - 1.0).abs() <= 1e-12);
        let a = analyze(&st, DEFAULT_TOLERANCE).unwrap();
        let b = analyze(&moved, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((a.e_l - b.e_l).abs() <= 1e-9);
        prop_assert!((a.e_vn - b.e_vn).abs() <= 1e-9);
    }

    #[test]
    fn exterior_power_is_a_homomorphism((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let u = LocalUnitary::random(d, seed.wrapping_add(1)).unwrap();
        let v = LocalUnitary::random(d, seed.wrapping_add(2)).unwrap();
        let stepwise = st.apply_local_unitary(&u).unwrap().apply_local_unitary(&v).unwrap();
        let composed = st.apply_local_unitary(&u.then(&v).unwrap()).unwrap();
        for (a, b) in stepwise.amplitudes().iter().zip(composed.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn compound_matches_dense_unitary((d, n) in small_shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let u = LocalUnitary::random(d, seed.wrapping_mul(3)).unwrap();
        let dense = densify(&st, DEFAULT_ORACLE_CAP).unwrap().apply_local_unitary(&u).unwrap();
        let via_dense = sparsify(&dense).unwrap();
        let via_compound = st.apply_local_unitary(&u).unwrap();
        for (a, b) in via_dense.amplitudes().iter().zip(via_compound.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn rdm_transforms_by_conjugation((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let u = LocalUnitary::random(d, !seed).unwrap();
        let rho = compute_rdm(&st);
        let moved = compute_rdm(&st.apply_local_unitary(&u).unwrap());
        let m = u.matrix();
        let expected = m * rho.matrix() * m.adjoint();
        prop_assert!(max_abs_diff(moved.matrix(), &expected) <= 1e-12);
    }

    #[test]
    fn decomposition_identity((d, n) in shape(), seed in any::<u64>()) {
        let st = FermionState::random_state(d, n, seed).unwrap();
        let dec = diagonal_decomposition(&st);
        let rho = compute_rdm(&st);
        for (a, b) in dec.diagonal().iter().zip(rho.diagonal()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let lhs = dec.diagonal_sum_of_squares();
        let rhs = 1.0 / n as f64 - dec.spread();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
        prop_assert!((dec.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
