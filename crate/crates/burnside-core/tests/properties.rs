//! Property tests for the field, linear algebra and ring invariants.

use std::sync::{Arc, OnceLock};

use burnside_core::monoburn::MonomialBurnside;
use burnside_core::verify;
use burnside_core::{Cyc, QMatrix, Q};
use num_traits::{One, Zero};
use proptest::prelude::*;

const CONDUCTORS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn cyc() -> impl Strategy<Value = Cyc> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n as usize).prop_map(move |c| Cyc::from_exponent_counts(n, &c))
    })
}

fn qmatrix() -> impl Strategy<Value = QMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, c), r).prop_map(move |rows| {
            let data = rows.into_iter().map(|row| row.into_iter().map(|v| Q::from_integer(v.into())).collect()).collect();
            QMatrix::from_rows(c, data)
        })
    })
}

fn ring(label: &str) -> Arc<MonomialBurnside> {
    static C4XC2: OnceLock<Arc<MonomialBurnside>> = OnceLock::new();
    static C3XC3: OnceLock<Arc<MonomialBurnside>> = OnceLock::new();
    let cell = if label == "C4xC2" { &C4XC2 } else { &C3XC3 };
    cell.get_or_init(|| verify::ring(label).unwrap()).clone()
}

fn coords(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], len)
}

/// Repeats `a` to length `n`.
fn lift(a: &[i64], n: usize) -> Vec<Cyc> {
    a.iter().cycle().take(n).map(|&v| Cyc::from_int(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyc_ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert!((a.clone() - a.clone()).is_zero());
    }

    #[test]
    fn cyc_inverse(a in cyc()) {
        match a.inv() {
            Some(i) => prop_assert_eq!(a.mul_ref(&i), Cyc::one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn cyc_conjugation(a in cyc(), b in cyc()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul_ref(&b).conj(), a.conj().mul_ref(&b.conj()));
        let (re, im) = a.to_complex();
        let (cre, cim) = a.conj().to_complex();
        prop_assert!((re - cre).abs() < 1e-9 && (im + cim).abs() < 1e-9);
    }

    #[test]
    fn cyc_display_is_conductor_independent(a in cyc(), k in 1u32..4) {
        let lifted = a.mul_ref(&Cyc::root_of_unity(24 * k, 0));
        prop_assert_eq!(&lifted, &a);
        prop_assert_eq!(lifted.to_string(), a.to_string());
        prop_assert_eq!(a.minimal_form(), a.clone());
        prop_assert!(a.minimal_form().conductor() <= a.conductor());
    }

    #[test]
    fn cyc_complex_embedding_is_multiplicative(a in cyc(), b in cyc()) {
        let (ar, ai) = a.to_complex();
        let (br, bi) = b.to_complex();
        let (pr, pi) = a.mul_ref(&b).to_complex();
        prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-6);
        prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-6);
    }

    #[test]
    fn rank_nullity(m in qmatrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        for v in k.row_vecs() {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        let (r, pivots, rank) = m.rref();
        prop_assert_eq!(rank, pivots.len());
        prop_assert_eq!(r.rank(), rank);
    }

    #[test]
    fn inverse_when_square_and_full_rank(m in qmatrix()) {
        if m.rows() == m.cols() && m.rank() == m.rows() {
            let i = m.invert().unwrap();
            prop_assert_eq!(m.mul(&i).unwrap(), QMatrix::identity(m.rows()));
        } else if m.rows() == m.cols() {
            prop_assert!(m.invert().is_err());
        }
    }

    #[test]
    fn species_are_ring_homomorphisms(a in coords(64), b in coords(64)) {
        let r = ring("C4xC2");
        let x = r.standard(lift(&a, r.rank()));
        let y = r.standard(lift(&b, r.rank()));
        let xy = r.mackey_product(&x, &y).unwrap();
        let sx = r.species_vector(&x.coeffs);
        let sy = r.species_vector(&y.coeffs);
        let expect: Vec<Cyc> = sx.iter().zip(&sy).map(|(u, v)| u.mul_ref(v)).collect();
        prop_assert_eq!(r.species_vector(&xy.coeffs), expect);
    }

    #[test]
    fn basis_round_trip(a in coords(64)) {
        let r = ring("C4xC2");
        let x = r.standard(lift(&a, r.rank()));
        let back = r.to_standard(&r.to_idempotent(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn lin_is_multiplicative(a in coords(64), b in coords(64)) {
        let r = ring("C3xC3");
        let x = r.standard(lift(&a, r.rank()));
        let y = r.standard(lift(&b, r.rank()));
        let xy = r.mackey_product(&x, &y).unwrap();
        prop_assert_eq!(r.lin(&xy).unwrap(), r.lin(&x).unwrap().mul(&r.lin(&y).unwrap()));
    }
}
