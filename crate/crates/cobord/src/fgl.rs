//! Formal group laws over `Q[p1..pD]`, the parameter `p_i` standing for the
//! class of `i`-dimensional projective space.
//!
//! The universal law is built rationally from the logarithm
//! `l(t) = t + sum_{i>=1} p_i t^{i+1}/(i+1)` and its compositional inverse
//! `e`, as `F(u, v) = e(l(u) + l(v))`. Identity, commutativity and
//! associativity then hold as exact truncated series identities, which
//! [`FormalGroupLaw::check_axioms`] verifies term by term. The inverse series
//! `chi` with `F(u, chi(u)) = 0` and the difference
//! `F^-(u, v) = F(u, chi(v))` are solved degree by degree; both steps are
//! linear in the unknown coefficient because the linear part of `F` is
//! `u + v`.
//!
//! Grading: `u`, `v` carry weight -1 and `p_i` weight `i`, so the whole law
//! is homogeneous of weight -1 and the coefficient of `u^i v^j` is a
//! `Q`-polynomial in the `p`'s of degree `i + j - 1`.

use std::collections::BTreeMap;
use std::sync::Arc;



use crate::rat::{qi, qr};
use crate::series::{MultiSeries, SeriesError, VariableTable};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FglError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("F - u - v is not divisible by uv (term u^{0} v^{1})")]
    NotDivisibleByUv(u32, u32),
}

/// Names of the parameter variables `p1..p_{d-1}` with weights `1..d-1`.
fn param_list(degree_bound: u32) -> Vec<(String, i64)> {
    (1..degree_bound.max(1))
        .map(|i| (format!("p{i}"), i as i64))
        .collect()
}

/// The cobordism logarithm `l(t) = t + sum p_i t^{i+1}/(i+1)` truncated at
/// total degree `degree_bound` in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Logarithm {
    series: MultiSeries,
    degree_bound: u32,
}

impl Logarithm {
    pub fn universal(degree_bound: u32) -> Self {
        let params = param_list(degree_bound);
        let table = VariableTable::new(&[("t", -1)], &params).expect("valid table");
        let mut s = MultiSeries::var(&table, degree_bound, "t").expect("t exists");
        for i in 1..degree_bound {
            let mut exps = vec![0u32; table.len()];
            exps[0] = i + 1;
            exps[table.index_of(&format!("p{i}")).unwrap()] = 1;
            let term =
                MultiSeries::monomial(&table, degree_bound, exps, qr(1, (i + 1) as i64));
            s = s.add(&term).expect("same table");
        }
        Logarithm { series: s, degree_bound }
    }

    pub fn series(&self) -> &MultiSeries {
        &self.series
    }

    /// Compositional inverse `e` with `l(e(t)) = t`.
    pub fn exponential(&self) -> MultiSeries {
        self.series.reversion().expect("logarithm has unit linear term")
    }
}

/// Coefficient tables `(i, j) -> polynomial in the parameters`.
pub type CoefficientTable = Vec<((u32, u32), MultiSeries)>;

/// A bivariate formal group law `F(u, v)` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalGroupLaw {
    series: MultiSeries,
    degree_bound: u32,
}

/// Per-axiom outcome of [`FormalGroupLaw::check_axioms`]. Failures are
/// reported, not thrown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomReport {
    pub identity: bool,
    pub commutativity: bool,
    pub associativity: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.identity && self.commutativity && self.associativity
    }
}

/// Outcome of [`FormalGroupLaw::check_difference_identities`]:
/// `F^-(F(u,w), F(v,w)) = F^-(u,v)` (differences are translation invariant)
/// and `F(F^-(u1,v1), F^-(u2,v2)) = F^-(F(u1,u2), F(v1,v2))` (the difference
/// of sums is the sum of differences).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferenceReport {
    pub translation_invariance: bool,
    pub sum_compatibility: bool,
}

impl DifferenceReport {
    pub fn all_pass(&self) -> bool {
        self.translation_invariance && self.sum_compatibility
    }
}

impl FormalGroupLaw {
    /// Wraps an existing bivariate series in `u, v`. No axiom is checked;
    /// use [`Self::check_axioms`].
    pub fn from_series(series: MultiSeries, degree_bound: u32) -> Self {
        assert!(series.table().index_of("u").is_some());
        assert!(series.table().index_of("v").is_some());
        FormalGroupLaw { series, degree_bound }
    }

    /// The universal formal group law over `Q[p1..p_{D-1}]`, built as
    /// `e(l(u) + l(v))` from the logarithm.
    pub fn universal(degree_bound: u32) -> Self {
        let log = Logarithm::universal(degree_bound);
        let e = log.exponential();
        let params = param_list(degree_bound);
        let uv = VariableTable::new(&[("u", -1), ("v", -1)], &params).expect("valid table");
        let lu = log
            .series()
            .rename_variable("t", "u")
            .and_then(|s| s.transport(&uv))
            .expect("transport l(u)");
        let lv = log
            .series()
            .rename_variable("t", "v")
            .and_then(|s| s.transport(&uv))
            .expect("transport l(v)");
        let sum = lu.add(&lv).expect("same table");
        let mut assign = BTreeMap::new();
        assign.insert("t".to_string(), sum);
        let f = e.substitute(&uv, &assign).expect("compose e with l(u)+l(v)");
        FormalGroupLaw { series: f, degree_bound }
    }

    /// The additive law `u + v`.
    pub fn additive(degree_bound: u32) -> Self {
        let uv = VariableTable::new(&[("u", -1), ("v", -1)], &[]).expect("valid table");
        let u = MultiSeries::var(&uv, degree_bound, "u").unwrap();
        let v = MultiSeries::var(&uv, degree_bound, "v").unwrap();
        FormalGroupLaw { series: u.add(&v).unwrap(), degree_bound }
    }

    /// The multiplicative law `u + v - b uv` with a formal parameter `b`
    /// (weight 1, so the law stays homogeneous).
    pub fn multiplicative_formal(degree_bound: u32) -> Self {
        let uv = VariableTable::new(&[("u", -1), ("v", -1)], &[("b".to_string(), 1)])
            .expect("valid table");
        let u = MultiSeries::var(&uv, degree_bound, "u").unwrap();
        let v = MultiSeries::var(&uv, degree_bound, "v").unwrap();
        let buv = MultiSeries::monomial(&uv, degree_bound, vec![1, 1, 1], qi(1));
        FormalGroupLaw {
            series: u.add(&v).unwrap().sub(&buv).unwrap(),
            degree_bound,
        }
    }

    /// The multiplicative law `u + v - uv`.
    pub fn multiplicative(degree_bound: u32) -> Self {
        let uv = VariableTable::new(&[("u", -1), ("v", -1)], &[]).expect("valid table");
        let u = MultiSeries::var(&uv, degree_bound, "u").unwrap();
        let v = MultiSeries::var(&uv, degree_bound, "v").unwrap();
        let uvp = u.mul(&v).unwrap();
        FormalGroupLaw {
            series: u.add(&v).unwrap().sub(&uvp).unwrap(),
            degree_bound,
        }
    }

    pub fn series(&self) -> &MultiSeries {
        &self.series
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    fn params(&self) -> Vec<(String, i64)> {
        self.series
            .table()
            .vars()
            .iter()
            .filter(|v| !v.truncating)
            .map(|v| (v.name.clone(), v.weight))
            .collect()
    }

    /// The coefficient `a_{ij}` of `u^i v^j` as a polynomial in the
    /// parameters.
    pub fn coefficient(&self, i: u32, j: u32) -> MultiSeries {
        self.series
            .coeff_of(&[("u", i), ("v", j)])
            .expect("u, v exist")
    }

    /// All `a_{ij}` with `1 <= i + j <= degree_bound`, `i, j >= 0`, in
    /// lexicographic order.
    pub fn coefficients(&self) -> CoefficientTable {
        let mut out = Vec::new();
        for i in 0..=self.degree_bound {
            for j in 0..=self.degree_bound.saturating_sub(i) {
                if i + j == 0 {
                    continue;
                }
                let c = self.coefficient(i, j);
                if !c.is_zero() {
                    out.push(((i, j), c));
                }
            }
        }
        out
    }

    /// Checks the three formal group law axioms as exact series identities
    /// up to the degree bound.
    pub fn check_axioms(&self) -> Result<AxiomReport, FglError> {
        let table = self.series.table();
        let d = self.degree_bound;
        let zero = MultiSeries::zero(table, d);
        let u = MultiSeries::var(table, d, "u")?;
        let v = MultiSeries::var(table, d, "v")?;

        let mut at_v0 = BTreeMap::new();
        at_v0.insert("v".to_string(), zero.clone());
        let f_u0 = self.series.substitute(table, &at_v0)?;
        let mut at_u0 = BTreeMap::new();
        at_u0.insert("u".to_string(), zero);
        let f_0v = self.series.substitute(table, &at_u0)?;
        let identity = f_u0 == u && f_0v == v;

        let mut swap = BTreeMap::new();
        swap.insert("u".to_string(), v.clone());
        swap.insert("v".to_string(), u.clone());
        let commutativity = self.series.substitute(table, &swap)? == self.series;

        // associativity in three variables
        let uvw = VariableTable::new(&[("u", -1), ("v", -1), ("w", -1)], &self.params())?;
        let fuv = self.compose2(&uvw, "u", "v")?;
        let fvw = self.compose2(&uvw, "v", "w")?;
        let w = MultiSeries::var(&uvw, d, "w")?;
        let uu = MultiSeries::var(&uvw, d, "u")?;
        let mut a1 = BTreeMap::new();
        a1.insert("u".to_string(), fuv);
        a1.insert("v".to_string(), w);
        let lhs = self.series.substitute(&uvw, &a1)?;
        let mut a2 = BTreeMap::new();
        a2.insert("u".to_string(), uu);
        a2.insert("v".to_string(), fvw);
        let rhs = self.series.substitute(&uvw, &a2)?;
        let associativity = lhs == rhs;

        Ok(AxiomReport { identity, commutativity, associativity })
    }

    /// `F` with its two slots filled by the named variables of `target`.
    fn compose2(
        &self,
        target: &Arc<VariableTable>,
        x: &str,
        y: &str,
    ) -> Result<MultiSeries, SeriesError> {
        let d = self.degree_bound;
        let mut assign = BTreeMap::new();
        assign.insert("u".to_string(), MultiSeries::var(target, d, x)?);
        assign.insert("v".to_string(), MultiSeries::var(target, d, y)?);
        self.series.substitute(target, &assign)
    }

    /// The series `F^{1,1}` with `F = u + v + uv * F^{1,1}(u, v)`.
    pub fn f11(&self) -> Result<MultiSeries, FglError> {
        let table = self.series.table();
        let d = self.degree_bound;
        let u = MultiSeries::var(table, d, "u")?;
        let v = MultiSeries::var(table, d, "v")?;
        let resid = self.series.sub(&u)?.sub(&v)?;
        let ui = table.index_of("u").unwrap();
        let vi = table.index_of("v").unwrap();
        let table = table.clone();
        let trunc = d.saturating_sub(2);
        let mut out = MultiSeries::zero(&table, trunc);
        for (exps, c) in resid.terms() {
            if exps[ui] < 1 || exps[vi] < 1 {
                return Err(FglError::NotDivisibleByUv(exps[ui], exps[vi]));
            }
            let mut e = exps.clone();
            e[ui] -= 1;
            e[vi] -= 1;
            out = out
                .add(&MultiSeries::monomial(&table, trunc, e, c.clone()))
                .map_err(FglError::Series)?;
        }
        Ok(out)
    }

    /// The inverse series `chi(u) = -u + O(u^2)` with `F(u, chi(u)) = 0`,
    /// solved degree by degree.
    pub fn chi(&self) -> Result<MultiSeries, FglError> {
        let d = self.degree_bound;
        let u_table = VariableTable::new(&[("u", -1)], &self.params())?;
        let uv = self.series.table().clone();
        let u = MultiSeries::var(&u_table, d, "u")?;
        let mut chi = u.neg();
        for k in 2..=d {
            let chi_uv = chi.transport(&uv)?;
            let mut assign = BTreeMap::new();
            assign.insert("v".to_string(), chi_uv);
            let r = self.series.substitute(&uv, &assign)?;
            let eps = r.coeff_of(&[("u", k), ("v", 0)])?.transport(&u_table)?;
            if eps.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; u_table.len()];
            exps[u_table.index_of("u").unwrap()] = k;
            let uk = MultiSeries::monomial(&u_table, d, exps, qi(1));
            chi = chi.sub(&eps.mul(&uk)?)?;
        }
        Ok(chi)
    }

    /// The difference series `F^-(u, v) = F(u, chi(v))`.
    pub fn difference(&self) -> Result<MultiSeries, FglError> {
        let uv = self.series.table().clone();
        let chi_v = self.chi()?.rename_variable("u", "v")?.transport(&uv)?;
        let mut assign = BTreeMap::new();
        assign.insert("v".to_string(), chi_v);
        Ok(self.series.substitute(&uv, &assign)?)
    }

    /// Coefficients `b_{ij}` of the difference series, `i + j <= degree_bound`.
    pub fn difference_coefficients(&self) -> Result<CoefficientTable, FglError> {
        let diff = self.difference()?;
        let mut out = Vec::new();
        for i in 0..=self.degree_bound {
            for j in 0..=self.degree_bound - i {
                let c = diff.coeff_of(&[("u", i), ("v", j)])?;
                if !c.is_zero() {
                    out.push(((i, j), c));
                }
            }
        }
        Ok(out)
    }

    /// Verifies the two difference-series identities used to extend first
    /// Chern class operators, as exact truncated identities in 3 and 4
    /// variables.
    pub fn check_difference_identities(&self) -> Result<DifferenceReport, FglError> {
        let d = self.degree_bound;
        let diff = self.difference()?;
        let params = self.params();

        // F^-(F(u,w), F(v,w)) = F^-(u,v) in u, v, w
        let uvw = VariableTable::new(&[("u", -1), ("v", -1), ("w", -1)], &params)?;
        let fuw = self.compose2(&uvw, "u", "w")?;
        let fvw = self.compose2(&uvw, "v", "w")?;
        let mut a = BTreeMap::new();
        a.insert("u".to_string(), fuw);
        a.insert("v".to_string(), fvw);
        let lhs = diff.substitute(&uvw, &a)?;
        let rhs = diff.transport(&uvw)?;
        let translation_invariance = lhs == rhs;

        // F(F^-(u1,v1), F^-(u2,v2)) = F^-(F(u1,u2), F(v1,v2))
        let t4 = VariableTable::new(
            &[("u1", -1), ("v1", -1), ("u2", -1), ("v2", -1)],
            &params,
        )?;
        let sub2 = |f: &MultiSeries, x: &str, y: &str| -> Result<MultiSeries, SeriesError> {
            let mut m = BTreeMap::new();
            m.insert("u".to_string(), MultiSeries::var(&t4, d, x)?);
            m.insert("v".to_string(), MultiSeries::var(&t4, d, y)?);
            f.substitute(&t4, &m)
        };
        let d11 = sub2(&diff, "u1", "v1")?;
        let d22 = sub2(&diff, "u2", "v2")?;
        let mut a1 = BTreeMap::new();
        a1.insert("u".to_string(), d11);
        a1.insert("v".to_string(), d22);
        let lhs = self.series.substitute(&t4, &a1)?;
        let s_u = sub2(&self.series, "u1", "u2")?;
        let s_v = sub2(&self.series, "v1", "v2")?;
        let mut a2 = BTreeMap::new();
        a2.insert("u".to_string(), s_u);
        a2.insert("v".to_string(), s_v);
        let rhs = diff.substitute(&t4, &a2)?;
        let sum_compatibility = lhs == rhs;

        Ok(DifferenceReport { translation_invariance, sum_compatibility })
    }

    /// `F(u, chi(u))`, which must vanish identically.
    pub fn plug_chi(&self) -> Result<MultiSeries, FglError> {
        let uv = self.series.table().clone();
        let chi_u = self.chi()?.transport(&uv)?;
        let mut assign = BTreeMap::new();
        assign.insert("v".to_string(), chi_u);
        Ok(self.series.substitute(&uv, &assign)?)
    }

    /// True if every coefficient `a_{ij}` is homogeneous of weight
    /// `i + j - 1` under `weight(p_k) = k`; equivalently the whole series is
    /// homogeneous of weight -1.
    pub fn is_homogeneous(&self) -> bool {
        matches!(self.series.homogeneous_weight(), Some(None) | Some(Some(-1)))
    }
}

/// Renders a coefficient table like `a_{ij}` as sorted lines `a[i,j] = poly`.
pub fn render_coefficient_table(
    label: &str,
    coeffs: &[((u32, u32), MultiSeries)],
) -> String {
    let mut lines = Vec::new();
    let mut sorted: Vec<_> = coeffs.to_vec();
    sorted.sort_by_key(|((i, j), _)| (i + j, *i, *j));
    for ((i, j), c) in sorted {
        lines.push(format!("{label}[{i},{j}] = {}", c.to_canonical_string()));
    }
    lines.join("\n")
}
