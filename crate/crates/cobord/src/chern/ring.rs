//! Finitely presented graded cohomology rings and their normal form.
//!
//! Every generator has degree 1 and carries a power cap together with a
//! rewrite polynomial: `g^cap = rewrite`, where the rewrite only involves
//! generators of smaller index and powers of `g` below the cap. Projective
//! spaces contribute `h^{n+1} = 0`; a projective bundle `P(O(l_1) + ... +
//! O(l_r))` contributes the Grothendieck relation `prod_j (xi + l_j) = 0`
//! solved for `xi^r`. Rewriting by these rules terminates and yields a unique
//! normal form per degree, with monomial basis `{prod g_k^{e_k} : e_k <
//! cap_k}` and top monomial `prod g_k^{cap_k - 1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::rat::Q;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RingError {
    #[error("classes live in different rings")]
    RingMismatch,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
    #[error("expected a class homogeneous of degree {expected}, got degree {got:?}")]
    DegreeMismatch { expected: u32, got: Option<u32> },
    #[error("expected a divisor class (homogeneous of degree 1 or zero)")]
    NotADivisor,
}

type Poly = BTreeMap<Vec<u32>, Q>;

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: String,
    /// `g^cap` rewrites to [`Generator::rewrite`].
    pub cap: u32,
    /// In normal form over the generators of index `<=` this one.
    pub rewrite: Poly,
}

/// An immutable graded ring presentation.
#[derive(Debug, PartialEq)]
pub struct Ring {
    gens: Vec<Generator>,
}

impl Ring {
    pub fn empty() -> Arc<Self> {
        Arc::new(Ring { gens: vec![] })
    }

    /// Ring of a projective space: one generator `name` with `h^{n+1} = 0`.
    pub fn projective(name: &str, n: u32) -> Arc<Self> {
        Arc::new(Ring {
            gens: vec![Generator { name: name.to_string(), cap: n + 1, rewrite: Poly::new() }],
        })
    }

    /// Concatenates two presentations side by side.
    pub fn join(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<Arc<Self>, RingError> {
        let offset = a.gens.len();
        let width = offset + b.gens.len();
        let mut gens: Vec<Generator> = a
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                cap: g.cap,
                rewrite: g
                    .rewrite
                    .iter()
                    .map(|(e, c)| {
                        let mut e2 = e.clone();
                        e2.resize(width, 0);
                        (e2, c.clone())
                    })
                    .collect(),
            })
            .collect();
        for g in &b.gens {
            let name = g.name.clone();
            if gens.iter().any(|x| x.name == name) {
                return Err(RingError::DuplicateGenerator(name));
            }
            let rewrite = g
                .rewrite
                .iter()
                .map(|(e, c)| {
                    let mut e2 = vec![0u32; offset];
                    e2.extend_from_slice(e);
                    e2.resize(width, 0);
                    (e2, c.clone())
                })
                .collect();
            gens.push(Generator { name, cap: g.cap, rewrite });
        }
        Ok(Arc::new(Ring { gens }))
    }

    /// Extends the ring by a projective-bundle generator `name` of rank `r`
    /// with relation `prod_j (xi + l_j) = 0`; the `l_j` are divisor classes of
    /// `self`.
    pub fn extend_bundle(
        self: &Arc<Self>,
        name: &str,
        classes: &[CohClass],
    ) -> Result<Arc<Self>, RingError> {
        if self.gens.iter().any(|g| g.name == name) {
            return Err(RingError::DuplicateGenerator(name.to_string()));
        }
        for c in classes {
            if c.ring != *self {
                return Err(RingError::RingMismatch);
            }
            if !c.is_divisor() {
                return Err(RingError::NotADivisor);
            }
        }
        let r = classes.len() as u32;
        let old_width = self.gens.len();
        let width = old_width + 1;

        // expand prod_j (xi + l_j) = sum_i e_i(l) xi^{r-i} in the small ring,
        // then move everything but xi^r to the right-hand side
        let mut elem = vec![CohClass::one(self)]; // elementary symmetric functions
        for c in classes {
            let mut next = vec![CohClass::zero(self); elem.len() + 1];
            for (i, e) in elem.iter().enumerate() {
                next[i] = next[i].add(e).unwrap();
                next[i + 1] = next[i + 1].add(&e.mul(c).unwrap()).unwrap();
            }
            elem = next;
        }
        let mut rewrite = Poly::new();
        for (i, e) in elem.iter().enumerate().skip(1) {
            // coefficient of xi^{r-i} is e_i(l); negate onto the RHS
            for (exps, c) in &e.terms {
                let mut e2 = exps.clone();
                e2.resize(width, 0);
                e2[old_width] = r - i as u32;
                rewrite.insert(e2, -c.clone());
            }
        }
        rewrite.retain(|_, c| !c.is_zero());

        let mut gens: Vec<Generator> = self
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                cap: g.cap,
                rewrite: g
                    .rewrite
                    .iter()
                    .map(|(e, c)| {
                        let mut e2 = e.clone();
                        e2.resize(width, 0);
                        (e2, c.clone())
                    })
                    .collect(),
            })
            .collect();
        gens.push(Generator { name: name.to_string(), cap: r, rewrite });
        Ok(Arc::new(Ring { gens }))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Top degree of the ring: `sum (cap_k - 1)`.
    pub fn top_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.cap - 1).sum()
    }

    /// The distinguished integration monomial `prod g_k^{cap_k - 1}`.
    pub fn top_monomial(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.cap - 1).collect()
    }

    /// Rewrites a polynomial to normal form.
    fn reduce(&self, terms: Poly) -> Poly {
        let mut out = Poly::new();
        let mut stack: Vec<(Vec<u32>, Q)> = terms.into_iter().collect();
        while let Some((e, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            match (0..self.gens.len()).find(|&k| e[k] >= self.gens[k].cap) {
                None => {
                    let entry = out.entry(e).or_insert_with(Q::zero);
                    *entry += c;
                }
                Some(k) => {
                    let g = &self.gens[k];
                    if g.rewrite.is_empty() {
                        continue; // g^cap = 0
                    }
                    let mut base = e;
                    base[k] -= g.cap;
                    for (re, rc) in &g.rewrite {
                        let e2: Vec<u32> = base.iter().zip(re).map(|(a, b)| a + b).collect();
                        stack.push((e2, &c * rc));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// All normal-form monomials of the given degree; earlier generators
    /// carry the higher powers first, matching the rendering order.
    pub fn monomial_basis(&self, degree: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.gens.len()];
        self.basis_rec(0, degree, &mut current, &mut out);
        out
    }

    fn basis_rec(&self, k: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == self.gens.len() {
            if left == 0 {
                out.push(current.clone());
            }
            return;
        }
        let cap = self.gens[k].cap;
        for e in (0..cap.min(left + 1)).rev() {
            current[k] = e;
            self.basis_rec(k + 1, left - e, current, out);
        }
        current[k] = 0;
    }

    /// Human-readable presentation: generators and relations.
    pub fn describe(&self) -> String {
        if self.gens.is_empty() {
            return "Q (no generators)".to_string();
        }
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        let mut rels = Vec::new();
        for (k, g) in self.gens.iter().enumerate() {
            let mut lhs_exp = vec![0u32; self.gens.len()];
            lhs_exp[k] = g.cap;
            let lhs = render_monomial(&names, &lhs_exp);
            if g.rewrite.is_empty() {
                rels.push(format!("{lhs} = 0"));
            } else {
                let rhs = CohClass {
                    ring: Arc::new(Ring { gens: self.gens.clone() }),
                    terms: g.rewrite.clone(),
                };
                rels.push(format!("{lhs} = {rhs}"));
            }
        }
        format!(
            "Q[{}] / ({}), integral of {} = 1",
            names.join(", "),
            rels.join(", "),
            render_monomial(&names, &self.top_monomial()),
        )
    }
}

fn render_monomial(names: &[&str], exps: &[u32]) -> String {
    let mut out = String::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(names[i]);
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// A cohomology class in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct CohClass {
    ring: Arc<Ring>,
    terms: Poly,
}

impl CohClass {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        CohClass { ring: ring.clone(), terms: Poly::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Q) -> Self {
        let mut terms = Poly::new();
        if !c.is_zero() {
            terms.insert(vec![0; ring.gens.len()], c);
        }
        CohClass { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn generator(ring: &Arc<Ring>, name: &str) -> Result<Self, RingError> {
        let k = ring
            .index_of(name)
            .ok_or_else(|| RingError::UnknownGenerator(name.to_string()))?;
        let mut e = vec![0u32; ring.gens.len()];
        e[k] = 1;
        Ok(Self::from_terms(ring, [(e, Q::one())]))
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Vec<u32>, Q)>,
    ) -> Self {
        let mut map = Poly::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.gens.len(), "exponent width mismatch");
            let entry = map.entry(e).or_insert_with(Q::zero);
            *entry += c;
        }
        CohClass { ring: ring.clone(), terms: ring.reduce(map) }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(CohClass { ring: self.ring.clone(), terms })
    }

    pub fn neg(&self) -> Self {
        CohClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        CohClass {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut terms = Poly::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(Q::zero);
                *entry += ca * cb;
            }
        }
        Ok(CohClass { ring: self.ring.clone(), terms: self.ring.reduce(terms) })
    }

    pub fn pow(&self, n: u32) -> Result<Self, RingError> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of `1 + n` with `n` of positive degree, by the geometric
    /// series; exact because the ring is graded Artinian.
    pub fn invert_unit(&self) -> Result<Self, RingError> {
        let one = Self::one(&self.ring);
        let n = self.sub(&one)?;
        if n.terms.keys().any(|e| e.iter().all(|&x| x == 0)) {
            return Err(RingError::NotADivisor);
        }
        let mut acc = one.clone();
        let mut pw = one;
        for k in 1..=self.ring.top_degree() {
            pw = pw.mul(&n)?;
            if pw.is_zero() {
                break;
            }
            acc = if k % 2 == 1 { acc.sub(&pw)? } else { acc.add(&pw)? };
        }
        Ok(acc)
    }

    /// The part of total degree `k`.
    pub fn degree_part(&self, k: u32) -> Self {
        CohClass {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree if homogeneous (`None` for the zero class).
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, RingError> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Ok(None),
            Some(d) => {
                if degs.all(|x| x == d) {
                    Ok(Some(d))
                } else {
                    Err(RingError::DegreeMismatch { expected: 0, got: None })
                }
            }
        }
    }

    /// True for classes usable as `O(l)` twists: zero or homogeneous degree 1.
    pub fn is_divisor(&self) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == 1)
    }

    /// Coefficient of the ring's top monomial. The class must be homogeneous
    /// of top degree (or zero).
    pub fn top_coefficient(&self) -> Result<Q, RingError> {
        let top = self.ring.top_degree();
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            if d != top {
                return Err(RingError::DegreeMismatch { expected: top, got: Some(d) });
            }
        }
        Ok(self.terms.get(&self.ring.top_monomial()).cloned().unwrap_or_else(Q::zero))
    }

    /// Re-embeds the class into a ring that contains this ring's generators
    /// as a contiguous block starting at `offset`.
    pub fn embed(&self, target: &Arc<Ring>, offset: usize) -> Self {
        let width = target.gens.len();
        debug_assert!(offset + self.ring.gens.len() <= width);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u32; width];
                e2[offset..offset + e.len()].copy_from_slice(e);
                (e2, c.clone())
            })
            .collect();
        CohClass { ring: target.clone(), terms }
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names: Vec<&str> = self.ring.gens.iter().map(|g| g.name.as_str()).collect();
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            // within a degree, earlier generators first (descending lex)
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
            let mono = render_monomial(&names, e);
            if mono == "1" {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag} {mono}"));
            }
        }
        f.write_str(&out)
    }
}
