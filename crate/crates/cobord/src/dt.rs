//! Degree-0 Donaldson-Thomas partition functions as exact q-series.
//!
//! The MacMahon function `M(q) = prod_{n>=1} (1 - q^n)^{-n}` generates
//! 3-dimensional partitions; the absolute partition function of a 3-fold is
//! `Z(X, q) = M(-q)^{n(X)}` with exponent `n(X) = c3(T_X (x) K_X)` integrated
//! over `X`, and the relative one replaces the exponent by its logarithmic
//! variant. Identities of the shape `M(-q)^{linear combination} = 1` are
//! checked at the exponent level (exact rationals); full series are
//! materialized for display and for the cross-check against the localization
//! oracle in [`crate::vertex`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Zero};

use crate::chern::{ChernError, CohClass, Space};
use crate::cobordism::DoublePointDatum;
use crate::rat::Q;
use crate::series::{MultiSeries, SeriesError, VariableTable};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DtError {
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("partition functions must have constant term 1")]
    NotUnitConstantTerm,
    #[error("cannot build P(O + O(S)) for this divisor: {0}")]
    UnsupportedDivisor(String),
}

/// A truncated univariate series in `q` over `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    series: MultiSeries,
}

impl QSeries {
    pub fn table() -> Arc<VariableTable> {
        VariableTable::univariate("q", 1)
    }

    pub fn one(order: u32) -> Self {
        QSeries { series: MultiSeries::one(&Self::table(), order) }
    }

    pub fn from_series(series: MultiSeries) -> Self {
        QSeries { series }
    }

    pub fn order(&self) -> u32 {
        self.series.trunc()
    }

    pub fn series(&self) -> &MultiSeries {
        &self.series
    }

    pub fn coeff(&self, k: u32) -> Q {
        self.series.coeff(&[k])
    }

    pub fn coefficients(&self) -> Vec<Q> {
        (0..=self.order()).map(|k| self.coeff(k)).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, DtError> {
        Ok(QSeries { series: self.series.mul(&other.series)? })
    }

    /// Substitutes `q -> -q`.
    pub fn negate_q(&self) -> Self {
        let table = self.series.table().clone();
        let trunc = self.series.trunc();
        let mut out = MultiSeries::zero(&table, trunc);
        for (e, c) in self.series.terms() {
            let c = if e[0] % 2 == 1 { -c.clone() } else { c.clone() };
            out = out
                .add(&MultiSeries::monomial(&table, trunc, e.clone(), c))
                .expect("same table");
        }
        QSeries { series: out }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.series.to_canonical_string())
    }
}

/// `M(q)` expanded exactly to the given order, using
/// `(1 - q^n)^{-n} = sum_k C(n+k-1, k) q^{nk}`.
pub fn macmahon(order: u32) -> QSeries {
    let table = QSeries::table();
    let mut acc = MultiSeries::one(&table, order);
    for n in 1..=order {
        let mut factor = MultiSeries::zero(&table, order);
        let mut k = 0u32;
        while n * k <= order {
            let c = binomial(n + k - 1, k);
            factor = factor
                .add(&MultiSeries::monomial(&table, order, vec![n * k], c))
                .expect("same table");
            k += 1;
        }
        acc = acc.mul(&factor).expect("same table");
    }
    QSeries { series: acc }
}

fn binomial(n: u32, k: u32) -> Q {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// `f^e` for a series with constant term 1 and a rational exponent, via
/// `exp(e log f)`.
pub fn qpow(f: &QSeries, e: &Q) -> Result<QSeries, DtError> {
    let one = MultiSeries::one(f.series.table(), f.order());
    if f.series.coeff(&[0]) != Q::one() {
        return Err(DtError::NotUnitConstantTerm);
    }
    let s = f.series.sub(&one)?;
    if e.is_zero() {
        return Ok(QSeries::one(f.order()));
    }
    let log = s.log1p()?;
    let exp = log.scale(e).expm1()?;
    Ok(QSeries { series: exp.add(&one)? })
}

/// `Z(X, q) = M(-q)^{n(X)}` to the given order.
pub fn z_absolute(x: &Space, order: u32) -> Result<QSeries, DtError> {
    let exponent = x.dt_exponent()?;
    qpow(&macmahon(order).negate_q(), &exponent)
}

/// `Z(X/S, q) = M(-q)^{n(X/S)}` for the divisor class `s` on `X`.
pub fn z_relative(x: &Space, s: &CohClass, order: u32) -> Result<QSeries, DtError> {
    let exponent = x.log_dt_exponent(s)?;
    qpow(&macmahon(order).negate_q(), &exponent)
}

/// Splits a divisor class on a product of projective spaces into the
/// sub-space `S` it cuts out and the class of `O_S(S)` on `S`.
///
/// Supported shape: `s` is a single hyperplane generator of one projective
/// factor. Then `S` replaces that `P^n` by `P^{n-1}` (dropping it when
/// `n = 1`) and `O_S(S)` is the same hyperplane class on `S` (zero when
/// dropped).
fn divisor_subspace(x: &Space, s: &CohClass) -> Result<(Space, CohClass), DtError> {
    let gen_name = {
        let mut terms = s.terms();
        let (exps, c) = terms
            .next()
            .ok_or_else(|| DtError::UnsupportedDivisor("zero divisor".into()))?;
        if terms.next().is_some() || !c.is_one() || exps.iter().sum::<u32>() != 1 {
            return Err(DtError::UnsupportedDivisor(
                "only a single hyperplane generator with coefficient 1 is supported".into(),
            ));
        }
        let idx = exps.iter().position(|&e| e == 1).expect("degree-1 monomial");
        s.ring().generators()[idx].name.clone()
    };

    fn leaves<'a>(x: &'a Space, out: &mut Vec<&'a Space>) -> bool {
        if let Some((a, b)) = x.as_product() {
            return leaves(a, out) && leaves(b, out);
        }
        if x.as_proj().is_some() {
            out.push(x);
            return true;
        }
        false
    }
    let mut factors = Vec::new();
    if !leaves(x, &mut factors) {
        return Err(DtError::UnsupportedDivisor(
            "base space must be a product of projective spaces".into(),
        ));
    }

    let mut kept: Vec<(u32, String)> = Vec::new();
    let mut shrunk: Option<(u32, String)> = None;
    for f in &factors {
        let n = f.as_proj().unwrap();
        let g = f.proj_generator().unwrap().to_string();
        if g == gen_name {
            shrunk = Some((n, g));
        } else {
            kept.push((n, g));
        }
    }
    let (n, g) = shrunk.ok_or_else(|| {
        DtError::UnsupportedDivisor(format!("generator `{gen_name}` is not a product factor"))
    })?;

    let mut parts: Vec<(u32, String)> = Vec::new();
    if n >= 2 {
        parts.push((n - 1, g.clone()));
    }
    parts.extend(kept);
    let mut acc: Option<Space> = None;
    for (dim, name) in &parts {
        let factor = Space::proj(*dim, name);
        acc = Some(match acc {
            None => factor,
            Some(sp) => Space::product(sp, factor).map_err(DtError::Chern)?,
        });
    }
    let sub = acc.unwrap_or_else(Space::point);
    let ring = sub.geometry()?.ring;
    let class = if n >= 2 {
        CohClass::generator(&ring, &g).map_err(ChernError::Ring)?
    } else {
        CohClass::zero(&ring)
    };
    Ok((sub, class))
}

/// Degeneration-formula consistency at the exponent level: the residual
/// `n(X/S) - n(X) + n(P/S_-)` with `P = P(O_S + O_S(S))` and `S_-` the
/// section with normal bundle `O_S(-S)` (class `xi` in our convention).
/// Zero for every divisor in the supported family; `s = 0` returns 0 by
/// construction.
pub fn check_degeneration(x: &Space, s: &CohClass) -> Result<Q, DtError> {
    if s.is_zero() {
        return Ok(Q::zero());
    }
    let relative = x.log_dt_exponent(s)?;
    let absolute = x.dt_exponent()?;
    let (sub, o_s_s) = divisor_subspace(x, s)?;
    let ring = sub.geometry()?.ring;
    let bundle = Space::proj_bundle(sub, vec![CohClass::zero(&ring), o_s_s], "xi")?;
    let xi = {
        let ring = bundle.geometry()?.ring;
        CohClass::generator(&ring, "xi").map_err(ChernError::Ring)?
    };
    let cap = bundle.log_dt_exponent(&xi)?;
    Ok(relative - absolute + cap)
}

/// Multiplicativity of `Z` across a double point degeneration, at the
/// exponent level: `n(Y_zeta) - n(A) - n(B) + n(P(pi))`; zero for genuine
/// data. Empty components contribute 0.
pub fn check_dp_multiplicativity(datum: &DoublePointDatum) -> Result<Q, DtError> {
    let mut acc = datum.y_zeta.dt_exponent()?;
    acc -= datum.a.dt_exponent()?;
    if let Some(b) = &datum.b {
        acc -= b.dt_exponent()?;
    }
    if let Some(p) = &datum.p_pi {
        acc += p.dt_exponent()?;
    }
    Ok(acc)
}

/// Renders coefficients as a JSON-friendly map `{"0": "1", "1": "20", ...}`.
pub fn coefficients_as_strings(z: &QSeries) -> BTreeMap<String, String> {
    (0..=z.order())
        .map(|k| (k.to_string(), z.coeff(k).to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::spaces;
    use crate::cobordism::blowup_relation;
    use crate::rat::{qi, qr};
    use crate::vertex;

    #[test]
    fn macmahon_counts_plane_partitions() {
        // two independent implementations of the same generating function
        let m = macmahon(6);
        for n in 0..=6u32 {
            let count = vertex::enumerate(n, 6).unwrap().len() as i64;
            assert_eq!(m.coeff(n), qi(count), "n = {n}");
        }
        assert_eq!(m.coefficients()[..6], [qi(1), qi(1), qi(3), qi(6), qi(13), qi(24)]);
        assert_eq!(macmahon(0).coefficients(), vec![qi(1)]);
        assert_eq!(macmahon(2).coeff(2), qi(3));
    }

    #[test]
    fn qpow_basics() {
        let m = macmahon(6);
        assert_eq!(qpow(&m, &Q::zero()).unwrap(), QSeries::one(6));
        assert_eq!(qpow(&m, &qi(1)).unwrap(), m);
        let inv = qpow(&m, &qi(-1)).unwrap();
        assert_eq!(inv.mul(&m).unwrap(), QSeries::one(6));
        // rational exponents compose: (f^{1/2})^2 = f
        let root = qpow(&m, &qr(1, 2)).unwrap();
        assert_eq!(qpow(&root, &qi(2)).unwrap(), m);
    }

    #[test]
    fn qpow_requires_unit_constant_term() {
        let q = QSeries::from_series(
            crate::series::MultiSeries::var(&QSeries::table(), 3, "q").unwrap(),
        );
        assert_eq!(qpow(&q, &qi(2)).unwrap_err(), DtError::NotUnitConstantTerm);
    }

    /// Independent route: `M(-q)^e` as a plain power of the series or its
    /// inverse, with no exp/log involved.
    fn m_neg_q_power(exponent: i64, order: u32) -> Vec<Q> {
        let m = macmahon(order).negate_q();
        let base = if exponent < 0 {
            QSeries::from_series(m.series().invert_unit().unwrap())
        } else {
            m
        };
        let mut acc = QSeries::one(order);
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.mul(&base).unwrap();
        }
        acc.coefficients()
    }

    #[test]
    fn z_absolute_p3() {
        let z = z_absolute(&spaces::p3(), 3).unwrap();
        assert_eq!(z.coefficients(), m_neg_q_power(-20, 3));
        assert_eq!(z.coefficients(), vec![qi(1), qi(20), qi(150), qi(400)]);
        assert_eq!(z.to_string(), "1 + 20 q + 150 q^2 + 400 q^3");
    }

    #[test]
    fn z_absolute_examples() {
        // the exponent-0 law
        assert_eq!(qpow(&macmahon(4).negate_q(), &Q::zero()).unwrap(), QSeries::one(4));
        let z = z_absolute(&spaces::p1_cubed(), 2).unwrap();
        assert_eq!(z.coeff(1), qi(16));
        assert_eq!(z.coefficients(), m_neg_q_power(-16, 2));
        let z = z_absolute(&spaces::p2_x_p1(), 2).unwrap();
        assert_eq!(z.coefficients(), m_neg_q_power(-18, 2));
    }

    #[test]
    fn z_relative_examples() {
        let x = spaces::p3();
        let ring = x.geometry().unwrap().ring;
        let zero = CohClass::zero(&ring);
        let h = CohClass::generator(&ring, "h").unwrap();
        // s = 0 reduces to the absolute function
        assert_eq!(z_relative(&x, &zero, 3).unwrap(), z_absolute(&x, 3).unwrap());
        // Z(P^3/P^2) has exponent -8
        assert_eq!(x.log_dt_exponent(&h).unwrap(), qi(-8));
        let z = z_relative(&x, &h, 2).unwrap();
        assert_eq!(z.coeff(1), qi(8));
        assert_eq!(z.coefficients(), m_neg_q_power(-8, 2));
    }

    #[test]
    fn degeneration_checks() {
        // P^3 relative to a plane: -8 - (-20) + (-12) = 0
        let x = spaces::p3();
        let ring = x.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        assert_eq!(check_degeneration(&x, &h).unwrap(), Q::zero());
        // s = 0
        assert_eq!(check_degeneration(&x, &CohClass::zero(&ring)).unwrap(), Q::zero());
        // coordinate divisors of products (trivial normal bundle on (P^1)^3)
        let y = spaces::p1_cubed();
        let ring = y.geometry().unwrap().ring;
        for g in ["a", "b", "c"] {
            let s = CohClass::generator(&ring, g).unwrap();
            assert_eq!(check_degeneration(&y, &s).unwrap(), Q::zero(), "divisor {g}");
        }
        // both divisor types on P^2 x P^1
        let y = spaces::p2_x_p1();
        let ring = y.geometry().unwrap().ring;
        for g in ["a", "b"] {
            let s = CohClass::generator(&ring, g).unwrap();
            assert_eq!(check_degeneration(&y, &s).unwrap(), Q::zero(), "divisor {g}");
        }
    }

    #[test]
    fn degeneration_rejects_unsupported_divisors() {
        let x = spaces::p3();
        let ring = x.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        let two_h = h.scale(&qi(2));
        assert!(matches!(
            check_degeneration(&x, &two_h),
            Err(DtError::UnsupportedDivisor(_))
        ));
    }

    #[test]
    fn dp_multiplicativity_on_blowup_data() {
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let datum = blowup_relation(&x).unwrap();
            assert_eq!(check_dp_multiplicativity(&datum).unwrap(), Q::zero());
        }
        // naive datum: B and P(pi) empty
        let x = spaces::p3();
        let datum = DoublePointDatum::new(x.clone(), x, None, None).unwrap();
        assert_eq!(check_dp_multiplicativity(&datum).unwrap(), Q::zero());
    }

    #[test]
    fn vertex_cross_check_small() {
        // q^0..q^2 coefficients of M(-q)^{n(X)} match the localization
        // oracle (n = 3 runs in the acceptance suite)
        let opts = vertex::VertexOptions::default();
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let z = z_absolute(&x, 2).unwrap();
            for n in 0..=2 {
                let ndt = vertex::n_dt(&x, n, &opts).unwrap();
                assert_eq!(z.coeff(n), Q::from_integer(ndt), "{x:?} at n = {n}");
            }
        }
    }
}
