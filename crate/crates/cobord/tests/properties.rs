//! Property-based invariants for the series substrate and the q-series
//! exponent laws.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use cobord::dt::{macmahon, qpow};
use cobord::rat::{qr, Q};
use cobord::series::{MultiSeries, VariableTable};

const TRUNC: u32 = 5;

fn uv_table() -> Arc<VariableTable> {
    VariableTable::new(&[("u", -1), ("v", -1)], &[]).unwrap()
}

/// A random series in `u, v` with small rational coefficients.
fn arb_series() -> impl Strategy<Value = MultiSeries> {
    let term = (0u32..=3, 0u32..=3, -6i64..=6, 1i64..=4);
    proptest::collection::vec(term, 0..8).prop_map(|terms| {
        let table = uv_table();
        let mut acc = MultiSeries::zero(&table, TRUNC);
        for (i, j, num, den) in terms {
            let m = MultiSeries::monomial(&table, TRUNC, vec![i, j], qr(num, den));
            acc = acc.add(&m).unwrap();
        }
        acc
    })
}

/// A random univariate series `t + c2 t^2 + ...` (reversible shape).
fn arb_reversible() -> impl Strategy<Value = MultiSeries> {
    proptest::collection::vec((-5i64..=5, 1i64..=3), 3)
        .prop_map(|coeffs| {
            let table = VariableTable::univariate("t", -1);
            let mut acc = MultiSeries::var(&table, TRUNC, "t").unwrap();
            for (k, (num, den)) in coeffs.iter().enumerate() {
                let m = MultiSeries::monomial(
                    &table,
                    TRUNC,
                    vec![k as u32 + 2],
                    qr(*num, *den),
                );
                acc = acc.add(&m).unwrap();
            }
            acc
        })
}

/// A random series with zero constant term (composable shape).
fn arb_composable() -> impl Strategy<Value = MultiSeries> {
    proptest::collection::vec((-4i64..=4, 1i64..=3), 4).prop_map(|coeffs| {
        let table = VariableTable::univariate("t", -1);
        let mut acc = MultiSeries::zero(&table, TRUNC);
        for (k, (num, den)) in coeffs.iter().enumerate() {
            let m =
                MultiSeries::monomial(&table, TRUNC, vec![k as u32 + 1], qr(*num, *den));
            acc = acc.add(&m).unwrap();
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        // associativity and commutativity of + and *
        let ab = a.add(&b).unwrap();
        prop_assert_eq!(ab.add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        // distributivity
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn no_zero_coefficients_stored(a in arb_series(), b in arb_series()) {
        for s in [
            a.add(&b).unwrap(),
            a.sub(&b).unwrap(),
            a.mul(&b).unwrap(),
            a.sub(&a).unwrap(),
        ] {
            prop_assert!(s.terms().all(|(_, c)| !num::Zero::is_zero(c)));
        }
    }

    #[test]
    fn substitution_is_associative(
        f in arb_composable(),
        g in arb_composable(),
        h in arb_composable(),
    ) {
        // (f о g) о h = f о (g о h) at the common truncation
        let table = f.table().clone();
        let sub = |a: &MultiSeries, b: &MultiSeries| {
            let mut m = BTreeMap::new();
            m.insert("t".to_string(), b.clone());
            a.substitute(&table, &m).unwrap()
        };
        let lhs = sub(&sub(&f, &g), &h);
        let rhs = sub(&f, &sub(&g, &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversion_round_trip(f in arb_reversible()) {
        let g = f.reversion().unwrap();
        let table = f.table().clone();
        let t = MultiSeries::var(&table, TRUNC, "t").unwrap();
        let mut m = BTreeMap::new();
        m.insert("t".to_string(), g.clone());
        // f(g(t)) = t
        prop_assert_eq!(f.substitute(&table, &m).unwrap(), t.clone());
        // g(f(t)) = t
        let mut m2 = BTreeMap::new();
        m2.insert("t".to_string(), f.clone());
        prop_assert_eq!(g.substitute(&table, &m2).unwrap(), t);
        // reversion is an involution
        prop_assert_eq!(g.reversion().unwrap(), f);
    }

    #[test]
    fn exp_log_inverse(s in arb_composable()) {
        prop_assert_eq!(s.expm1().unwrap().log1p().unwrap(), s.clone());
        prop_assert_eq!(s.log1p().unwrap().expm1().unwrap(), s);
    }

    #[test]
    fn qpow_is_a_homomorphism(
        an in -8i64..=8, ad in 1i64..=4,
        bn in -8i64..=8, bd in 1i64..=4,
    ) {
        let a = qr(an, ad);
        let b = qr(bn, bd);
        let m = macmahon(5).negate_q();
        let lhs = qpow(&m, &(a.clone() + b.clone())).unwrap();
        let rhs = qpow(&m, &a).unwrap().mul(&qpow(&m, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn qpow_integer_exponent_matches_repeated_multiplication(e in 0u32..=5) {
        let m = macmahon(5).negate_q();
        let via_log = qpow(&m, &Q::from_integer(e.into())).unwrap();
        let mut direct = cobord::dt::QSeries::one(5);
        for _ in 0..e {
            direct = direct.mul(&m).unwrap();
        }
        prop_assert_eq!(via_log, direct);
    }
}
