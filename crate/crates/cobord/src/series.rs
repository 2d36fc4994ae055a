//! Sparse truncated multivariate power series over exact rationals.
//!
//! A [`VariableTable`] names the variables of a series and carries an integer
//! grading weight per variable. Variables come in two kinds:
//!
//! - *truncating* variables (`u`, `v`, `q`, ...): the series is cut off at a
//!   total degree bound in these variables;
//! - *parameter* variables (`p1`, `p2`, ...): polynomial coefficients, never
//!   truncated. Their degree stays bounded implicitly through the grading.
//!
//! The truncation bound is inclusive: a [`MultiSeries`] with `trunc = d` keeps
//! every term of total truncating degree `<= d`. Binary operations use the
//! minimum of the two bounds, so results are always exact to their stated
//! order. No zero coefficient is ever stored; structural equality of the term
//! maps is mathematical equality at the truncation order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::rat::Q;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable tables do not match")]
    TableMismatch,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("truncating variable `{0}` must have nonzero weight")]
    ZeroWeight(String),
    #[error("no variable named `{0}` in the target table")]
    UnknownVariable(String),
    #[error("series substituted into truncating variable `{0}` has a constant term")]
    ConstantTermInSubstitution(String),
    #[error("operation requires a series univariate in a single truncating variable")]
    NotUnivariate,
    #[error("reversion requires zero constant term and unit linear coefficient")]
    NotReversible,
    #[error("operation requires zero constant term")]
    NonzeroConstantTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub weight: i64,
    pub truncating: bool,
}

/// Ordered list of named, graded variables shared by a family of series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTable {
    vars: Vec<Variable>,
}

impl VariableTable {
    /// Builds a table from `(name, weight)` lists of truncating variables and
    /// parameter variables, in that order.
    pub fn new(
        truncating: &[(&str, i64)],
        params: &[(String, i64)],
    ) -> Result<Arc<Self>, SeriesError> {
        let mut vars = Vec::new();
        for &(name, weight) in truncating {
            if weight == 0 {
                return Err(SeriesError::ZeroWeight(name.to_string()));
            }
            vars.push(Variable { name: name.to_string(), weight, truncating: true });
        }
        for (name, weight) in params {
            vars.push(Variable { name: name.clone(), weight: *weight, truncating: false });
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(SeriesError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(VariableTable { vars }))
    }

    /// Single truncating variable, no parameters.
    pub fn univariate(name: &str, weight: i64) -> Arc<Self> {
        Self::new(&[(name, weight)], &[]).expect("valid univariate table")
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Total degree of an exponent vector in the truncating variables.
    pub fn trunc_degree(&self, exps: &[u32]) -> u32 {
        self.vars
            .iter()
            .zip(exps)
            .filter(|(v, _)| v.truncating)
            .map(|(_, &e)| e)
            .sum()
    }

    /// Grading weight of a monomial.
    pub fn weight_of(&self, exps: &[u32]) -> i64 {
        self.vars
            .iter()
            .zip(exps)
            .map(|(v, &e)| v.weight * e as i64)
            .sum()
    }
}

/// A truncated power series: sparse map from exponent vectors to rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    table: Arc<VariableTable>,
    terms: BTreeMap<Vec<u32>, Q>,
    trunc: u32,
}

impl MultiSeries {
    pub fn zero(table: &Arc<VariableTable>, trunc: u32) -> Self {
        MultiSeries { table: table.clone(), terms: BTreeMap::new(), trunc }
    }

    pub fn constant(table: &Arc<VariableTable>, trunc: u32, c: Q) -> Self {
        let mut s = Self::zero(table, trunc);
        if !c.is_zero() {
            s.terms.insert(vec![0; table.len()], c);
        }
        s
    }

    pub fn one(table: &Arc<VariableTable>, trunc: u32) -> Self {
        Self::constant(table, trunc, Q::one())
    }

    /// The variable `name` as a series.
    pub fn var(table: &Arc<VariableTable>, trunc: u32, name: &str) -> Result<Self, SeriesError> {
        let i = table
            .index_of(name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; table.len()];
        exps[i] = 1;
        Ok(Self::monomial(table, trunc, exps, Q::one()))
    }

    /// Single term `c * x^exps`; silently zero if beyond the bound.
    pub fn monomial(table: &Arc<VariableTable>, trunc: u32, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), table.len(), "exponent vector length mismatch");
        let mut s = Self::zero(table, trunc);
        if !c.is_zero() && table.trunc_degree(&exps) <= trunc {
            s.terms.insert(exps, c);
        }
        s
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the exact monomial `exps`.
    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of a power product of truncating variables, as a series in
    /// the remaining (parameter) variables.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> Result<MultiSeries, SeriesError> {
        let mut want: Vec<Option<u32>> = vec![None; self.table.len()];
        for &(name, e) in powers {
            let i = self
                .table
                .index_of(name)
                .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
            want[i] = Some(e);
        }
        for (i, v) in self.table.vars().iter().enumerate() {
            if v.truncating && want[i].is_none() {
                want[i] = Some(0);
            }
        }
        let mut out = Self::zero(&self.table, self.trunc);
        'term: for (exps, c) in &self.terms {
            let mut rest = exps.clone();
            for (i, w) in want.iter().enumerate() {
                if let Some(e) = w {
                    if exps[i] != *e {
                        continue 'term;
                    }
                    rest[i] = 0;
                }
            }
            out.terms.insert(rest, c.clone());
        }
        Ok(out)
    }

    fn check_table(&self, other: &Self) -> Result<(), SeriesError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(SeriesError::TableMismatch)
        }
    }

    /// Coefficient-wise sum; the result is truncated at the smaller bound.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_table(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if self.table.trunc_degree(e) > trunc {
                continue;
            }
            let entry = terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += c;
        }
        terms.retain(|_, c: &mut Q| !c.is_zero());
        Ok(MultiSeries { table: self.table.clone(), terms, trunc })
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        MultiSeries { table: self.table.clone(), terms, trunc: self.trunc }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table, self.trunc);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect();
        MultiSeries { table: self.table.clone(), terms, trunc: self.trunc }
    }

    /// Convolution product; terms beyond the smaller bound are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_table(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut terms: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = self.table.trunc_degree(ea);
            if da > trunc {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + self.table.trunc_degree(eb) > trunc {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(Q::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c: &mut Q| !c.is_zero());
        Ok(MultiSeries { table: self.table.clone(), terms, trunc })
    }

    pub fn pow(&self, n: u32) -> Result<Self, SeriesError> {
        let mut acc = Self::one(&self.table, self.trunc);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Least total truncating degree among stored terms; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.table.trunc_degree(e)).min()
    }

    /// Lowers the truncation bound, dropping terms beyond it.
    pub fn truncate(&self, to: u32) -> MultiSeries {
        let trunc = self.trunc.min(to);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.table.trunc_degree(e) <= trunc)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiSeries { table: self.table.clone(), terms, trunc }
    }

    /// Re-expresses the series over `target`, matching variables by name.
    /// Source variables that never occur with a positive exponent may be
    /// absent from the target.
    pub fn transport(&self, target: &Arc<VariableTable>) -> Result<MultiSeries, SeriesError> {
        let map: Vec<Option<usize>> = self
            .table
            .vars()
            .iter()
            .map(|v| target.index_of(&v.name))
            .collect();
        let mut out = Self::zero(target, self.trunc);
        for (exps, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &x) in exps.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += x,
                    None => {
                        return Err(SeriesError::UnknownVariable(
                            self.table.vars()[i].name.clone(),
                        ))
                    }
                }
            }
            if target.trunc_degree(&e) <= self.trunc {
                out.terms.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    /// Renames a single variable; positions and exponents are unchanged.
    pub fn rename_variable(&self, from: &str, to: &str) -> Result<MultiSeries, SeriesError> {
        let renamed: Vec<Variable> = self
            .table
            .vars()
            .iter()
            .map(|v| Variable {
                name: if v.name == from { to.to_string() } else { v.name.clone() },
                ..v.clone()
            })
            .collect();
        let trunc_list: Vec<(&str, i64)> = renamed
            .iter()
            .filter(|v| v.truncating)
            .map(|v| (v.name.as_str(), v.weight))
            .collect();
        let params: Vec<(String, i64)> = renamed
            .iter()
            .filter(|v| !v.truncating)
            .map(|v| (v.name.clone(), v.weight))
            .collect();
        // tables are always laid out truncating-first, so positions carry over
        let target = VariableTable::new(&trunc_list, &params)?;
        debug_assert!(target
            .vars()
            .iter()
            .zip(renamed.iter())
            .all(|(a, b)| a == b));
        let mut out = Self::zero(&target, self.trunc);
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Composition: substitutes series for variables of `self`.
    ///
    /// Every assigned series must live over `target`. Variables without an
    /// assignment are transported to `target` by name. A series substituted
    /// into a truncating variable must have zero constant term in the
    /// truncating variables, otherwise the truncated composition would not be
    /// well defined.
    pub fn substitute(
        &self,
        target: &Arc<VariableTable>,
        assign: &BTreeMap<String, MultiSeries>,
    ) -> Result<MultiSeries, SeriesError> {
        let mut trunc = self.trunc;
        for (name, g) in assign {
            if g.table != *target {
                return Err(SeriesError::TableMismatch);
            }
            trunc = trunc.min(g.trunc);
            if let Some(i) = self.table.index_of(name) {
                if self.table.vars()[i].truncating && g.valuation() == Some(0) {
                    return Err(SeriesError::ConstantTermInSubstitution(name.clone()));
                }
            }
        }
        // factor for each variable of self: assigned series, or the variable
        // itself transported by name
        let mut factors: Vec<MultiSeries> = Vec::with_capacity(self.table.len());
        for v in self.table.vars() {
            match assign.get(&v.name) {
                Some(g) => factors.push(g.clone()),
                None => factors.push(MultiSeries::var(target, trunc, &v.name)?),
            }
        }
        let mut pow_cache: Vec<Vec<MultiSeries>> = factors
            .iter()
            .map(|f| vec![MultiSeries::one(target, trunc), f.clone()])
            .collect();
        let power = |var: usize, e: u32, cache: &mut Vec<Vec<MultiSeries>>| -> Result<MultiSeries, SeriesError> {
            while cache[var].len() <= e as usize {
                let last = cache[var].last().unwrap().clone();
                let next = last.mul(&factors[var])?;
                cache[var].push(next);
            }
            Ok(cache[var][e as usize].clone())
        };
        let mut out = MultiSeries::zero(target, trunc);
        for (exps, c) in &self.terms {
            let mut term = MultiSeries::constant(target, trunc, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&power(i, e, &mut pow_cache)?)?;
                    if term.is_zero() {
                        break;
                    }
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Compositional inverse of a univariate series `f = t + O(t^2)`:
    /// returns `g` with `f(g(t)) = t + O(t^{trunc+1})`.
    ///
    /// Solved degree by degree; each new coefficient enters linearly because
    /// the linear coefficient of `f` is 1.
    pub fn reversion(&self) -> Result<MultiSeries, SeriesError> {
        let t = self.sole_truncating_variable()?;
        let tname = self.table.vars()[t].name.clone();
        // precondition: no constant term, linear coefficient exactly 1
        let lin = self.coeff_of(&[(&tname, 1)])?;
        if self.valuation().is_none_or(|v| v == 0)
            || lin != MultiSeries::one(&self.table, self.trunc)
        {
            return Err(SeriesError::NotReversible);
        }
        let mut g = MultiSeries::var(&self.table, self.trunc, &tname)?;
        for k in 2..=self.trunc {
            let mut assign = BTreeMap::new();
            assign.insert(tname.clone(), g.clone());
            let r = self.substitute(&self.table, &assign)?;
            let eps = r.coeff_of(&[(&tname, k)])?;
            if eps.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; self.table.len()];
            exps[t] = k;
            let tk = MultiSeries::monomial(&self.table, self.trunc, exps, Q::one());
            g = g.sub(&eps.mul(&tk)?)?;
        }
        Ok(g)
    }

    fn sole_truncating_variable(&self) -> Result<usize, SeriesError> {
        let mut found = None;
        for (i, v) in self.table.vars().iter().enumerate() {
            if v.truncating {
                if found.is_some() {
                    return Err(SeriesError::NotUnivariate);
                }
                found = Some(i);
            }
        }
        found.ok_or(SeriesError::NotUnivariate)
    }

    fn require_positive_valuation(&self) -> Result<(), SeriesError> {
        if self.valuation() == Some(0) {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        Ok(())
    }

    /// `log(1 + s)` for `s` with zero constant term.
    pub fn log1p(&self) -> Result<MultiSeries, SeriesError> {
        self.require_positive_valuation()?;
        let mut acc = MultiSeries::zero(&self.table, self.trunc);
        let mut pw = MultiSeries::one(&self.table, self.trunc);
        for k in 1..=self.trunc as i64 {
            pw = pw.mul(self)?;
            if pw.is_zero() {
                break;
            }
            let c = Q::new(
                if k % 2 == 1 { 1.into() } else { (-1).into() },
                k.into(),
            );
            acc = acc.add(&pw.scale(&c))?;
        }
        Ok(acc)
    }

    /// `exp(s) - 1` for `s` with zero constant term.
    pub fn expm1(&self) -> Result<MultiSeries, SeriesError> {
        self.require_positive_valuation()?;
        let mut acc = MultiSeries::zero(&self.table, self.trunc);
        let mut pw = MultiSeries::one(&self.table, self.trunc);
        let mut factorial = Q::one();
        for k in 1..=self.trunc as i64 {
            pw = pw.mul(self)?;
            if pw.is_zero() {
                break;
            }
            factorial *= Q::from_integer(k.into());
            acc = acc.add(&pw.scale(&factorial.recip()))?;
        }
        Ok(acc)
    }

    /// `1 / f` for `f` with constant term 1, by the geometric series.
    pub fn invert_unit(&self) -> Result<MultiSeries, SeriesError> {
        let one = MultiSeries::one(&self.table, self.trunc);
        let s = self.sub(&one)?;
        s.require_positive_valuation()?;
        // 1/(1+s) = 1 - s + s^2 - ...
        let mut acc = one.clone();
        let mut pw = one;
        for k in 1..=self.trunc {
            pw = pw.mul(&s)?;
            if pw.is_zero() {
                break;
            }
            acc = if k % 2 == 1 { acc.sub(&pw)? } else { acc.add(&pw)? };
        }
        Ok(acc)
    }

    /// Grading weight if the series is homogeneous, `None` otherwise.
    /// The zero series is homogeneous of every weight.
    pub fn homogeneous_weight(&self) -> Option<Option<i64>> {
        let mut it = self.terms.keys().map(|e| self.table.weight_of(e));
        match it.next() {
            None => Some(None),
            Some(w) => {
                if it.all(|x| x == w) {
                    Some(Some(w))
                } else {
                    None
                }
            }
        }
    }

    /// Canonical rendering: terms sorted by total degree, then lexicographic
    /// exponent; rationals as `a/b` with positive denominator.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            // within a degree, earlier variables first (descending lex)
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (n, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut vars = String::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push(' ');
                }
                vars.push_str(&self.table.vars()[i].name);
                if x > 1 {
                    vars.push_str(&format!("^{x}"));
                }
            }
            if vars.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&vars);
            } else {
                out.push_str(&format!("{mag} {vars}"));
            }
        }
        out
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    fn uv() -> Arc<VariableTable> {
        VariableTable::new(&[("u", -1), ("v", -1)], &[]).unwrap()
    }

    fn var(t: &Arc<VariableTable>, trunc: u32, n: &str) -> MultiSeries {
        MultiSeries::var(t, trunc, n).unwrap()
    }

    #[test]
    fn add_examples() {
        let t = uv();
        let u = var(&t, 4, "u");
        let v = var(&t, 4, "v");
        // (u + v) + (-u) = v
        assert_eq!(u.add(&v).unwrap().add(&u.neg()).unwrap(), v);
        // (1 + q) + (1 - q) = 2 in a q-table
        let tq = VariableTable::univariate("q", 1);
        let one = MultiSeries::one(&tq, 4);
        let q = var(&tq, 4, "q");
        let s = one.add(&q).unwrap().add(&one.sub(&q).unwrap()).unwrap();
        assert_eq!(s, MultiSeries::constant(&tq, 4, qi(2)));
        // rational coefficient merge: (u + 1/2 uv) + (1/2 uv) = u + uv
        let uvh = u.mul(&v).unwrap().scale(&qr(1, 2));
        let lhs = u.add(&uvh).unwrap().add(&uvh).unwrap();
        assert_eq!(lhs, u.add(&u.mul(&v).unwrap()).unwrap());
    }

    #[test]
    fn mul_examples() {
        let tq = VariableTable::univariate("t", 1);
        let one = MultiSeries::one(&tq, 2);
        let t = var(&tq, 2, "t");
        // (1+t)(1-t) = 1 - t^2 at trunc >= 2
        let p = one.add(&t).unwrap().mul(&one.sub(&t).unwrap()).unwrap();
        assert_eq!(p, one.sub(&t.mul(&t).unwrap()).unwrap());
        // (u+v)^2 = u^2 + 2uv + v^2
        let tuv = uv();
        let u = var(&tuv, 3, "u");
        let v = var(&tuv, 3, "v");
        let sq = u.add(&v).unwrap().pow(2).unwrap();
        let expect = u
            .pow(2)
            .unwrap()
            .add(&u.mul(&v).unwrap().scale(&qi(2)))
            .unwrap()
            .add(&v.pow(2).unwrap())
            .unwrap();
        assert_eq!(sq, expect);
        // truncation contract: u*v at trunc 1 is dropped
        let t1 = uv();
        let u1 = var(&t1, 1, "u");
        let v1 = var(&t1, 1, "v");
        assert!(u1.mul(&v1).unwrap().is_zero());
    }

    #[test]
    fn mul_table_mismatch() {
        let a = MultiSeries::one(&VariableTable::univariate("q", 1), 3);
        let b = MultiSeries::one(&VariableTable::univariate("t", 1), 3);
        assert_eq!(a.mul(&b).unwrap_err(), SeriesError::TableMismatch);
    }

    #[test]
    fn substitute_examples() {
        // f = u^2, u -> v + w
        let tu = VariableTable::univariate("u", -1);
        let tvw = VariableTable::new(&[("v", -1), ("w", -1)], &[]).unwrap();
        let f = var(&tu, 4, "u").pow(2).unwrap();
        let v = var(&tvw, 4, "v");
        let w = var(&tvw, 4, "w");
        let mut assign = BTreeMap::new();
        assign.insert("u".to_string(), v.add(&w).unwrap());
        let got = f.substitute(&tvw, &assign).unwrap();
        let expect = v
            .pow(2)
            .unwrap()
            .add(&v.mul(&w).unwrap().scale(&qi(2)))
            .unwrap()
            .add(&w.pow(2).unwrap())
            .unwrap();
        assert_eq!(got, expect);

        // identity assignment is a no-op
        let t = uv();
        let g = var(&t, 5, "u")
            .add(&var(&t, 5, "v").pow(3).unwrap().scale(&qr(7, 3)))
            .unwrap();
        let got = g.substitute(&t, &BTreeMap::new()).unwrap();
        assert_eq!(got, g);
    }

    #[test]
    fn substitute_rejects_constant_term() {
        let tu = VariableTable::univariate("u", -1);
        let f = var(&tu, 3, "u");
        let g = MultiSeries::one(&tu, 3).add(&var(&tu, 3, "u")).unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("u".to_string(), g);
        assert_eq!(
            f.substitute(&tu, &assign).unwrap_err(),
            SeriesError::ConstantTermInSubstitution("u".to_string())
        );
    }

    /// Independent Lagrange-inversion oracle:
    /// `[t^n] g = (1/n) [t^{n-1}] (t/f)^n`.
    fn reversion_by_lagrange(f: &MultiSeries, tname: &str) -> MultiSeries {
        let table = f.table().clone();
        let trunc = f.trunc();
        // t/f = 1/(f/t); f/t computed by shifting exponents down by one
        let ti = table.index_of(tname).unwrap();
        let mut shifted = MultiSeries::zero(&table, trunc);
        for (e, c) in f.terms() {
            let mut e2 = e.clone();
            assert!(e2[ti] >= 1);
            e2[ti] -= 1;
            shifted = shifted
                .add(&MultiSeries::monomial(&table, trunc, e2, c.clone()))
                .unwrap();
        }
        let t_over_f = shifted.invert_unit().unwrap();
        let mut g = MultiSeries::zero(&table, trunc);
        let mut pw = MultiSeries::one(&table, trunc);
        for n in 1..=trunc {
            pw = pw.mul(&t_over_f).unwrap();
            let c = pw.coeff(&{
                let mut e = vec![0u32; table.len()];
                e[ti] = n - 1;
                e
            }) / qi(n as i64);
            let mut e = vec![0u32; table.len()];
            e[ti] = n;
            g = g.add(&MultiSeries::monomial(&table, trunc, e, c)).unwrap();
        }
        g
    }

    #[test]
    fn reversion_examples() {
        let tt = VariableTable::univariate("t", -1);
        let t = var(&tt, 4, "t");
        assert_eq!(t.reversion().unwrap(), t);

        // reversion(t + t^2) = t - t^2 + 2t^3 - 5t^4 (signed Catalan numbers)
        let f = t.add(&t.pow(2).unwrap()).unwrap();
        let g = f.reversion().unwrap();
        let expect = reversion_by_lagrange(&f, "t");
        assert_eq!(g, expect);
        assert_eq!(g.coeff(&[1]), qi(1));
        assert_eq!(g.coeff(&[2]), qi(-1));
        assert_eq!(g.coeff(&[3]), qi(2));
        assert_eq!(g.coeff(&[4]), qi(-5));

        // involution
        assert_eq!(g.reversion().unwrap(), f);
    }

    #[test]
    fn reversion_requires_unit_linear_term() {
        let tt = VariableTable::univariate("t", -1);
        let t = var(&tt, 4, "t");
        assert_eq!(t.scale(&qi(2)).reversion().unwrap_err(), SeriesError::NotReversible);
        assert_eq!(
            MultiSeries::one(&tt, 4).add(&t).unwrap().reversion().unwrap_err(),
            SeriesError::NotReversible
        );
    }

    #[test]
    fn substitute_of_reversion_gives_t() {
        // l(u) = u + u^2 composed with its reversion e(t) = t - t^2 + 2t^3 - 5t^4
        let tt = VariableTable::univariate("t", -1);
        let t = var(&tt, 4, "t");
        let l = t.add(&t.pow(2).unwrap()).unwrap();
        let e = l.reversion().unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("t".to_string(), e);
        assert_eq!(l.substitute(&tt, &assign).unwrap(), t);
    }

    #[test]
    fn exp_log_examples() {
        let tq = VariableTable::univariate("q", 1);
        let q = var(&tq, 3, "q");
        // expm1(0) = 0
        assert!(MultiSeries::zero(&tq, 3).expm1().unwrap().is_zero());
        // log1p(q + q^2) to order 3, against a direct expansion
        let s = q.add(&q.pow(2).unwrap()).unwrap();
        let direct = {
            // sum_{k<=3} (-1)^{k+1} s^k / k computed with fresh arithmetic
            let s1 = s.clone();
            let s2 = s.mul(&s).unwrap();
            let s3 = s2.mul(&s).unwrap();
            s1.sub(&s2.scale(&qr(1, 2)))
                .unwrap()
                .add(&s3.scale(&qr(1, 3)))
                .unwrap()
        };
        let got = s.log1p().unwrap();
        assert_eq!(got, direct);
        assert_eq!(got.coeff(&[1]), qi(1));
        assert_eq!(got.coeff(&[2]), qr(1, 2));
        assert_eq!(got.coeff(&[3]), qr(-2, 3));
        // log1p(expm1(s)) = s
        assert_eq!(s.expm1().unwrap().log1p().unwrap(), s);
    }

    #[test]
    fn canonical_rendering() {
        let t = uv();
        let u = var(&t, 3, "u");
        let v = var(&t, 3, "v");
        let s = u
            .add(&v)
            .unwrap()
            .sub(&u.mul(&v).unwrap().scale(&qr(3, 2)))
            .unwrap();
        assert_eq!(s.to_canonical_string(), "u + v - 3/2 u v");
        assert_eq!(MultiSeries::zero(&t, 3).to_canonical_string(), "0");
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<VariableTable>();
        assert_send_sync::<MultiSeries>();
    }

    #[test]
    fn homogeneity_bookkeeping() {
        let t = VariableTable::new(&[("u", -1)], &[("p1".into(), 1)]).unwrap();
        let u = var(&t, 3, "u");
        let p1 = var(&t, 3, "p1");
        // p1 u^2 has weight -2 + 1 = -1, same as u
        let s = u.add(&p1.mul(&u.pow(2).unwrap()).unwrap()).unwrap();
        assert_eq!(s.homogeneous_weight(), Some(Some(-1)));
        let bad = u.add(&p1).unwrap();
        assert_eq!(bad.homogeneous_weight(), None);
    }
}
