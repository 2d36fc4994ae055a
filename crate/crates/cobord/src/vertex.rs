//! Brute-force oracle for degree-0 Donaldson-Thomas invariants of toric
//! 3-folds, by equivariant localization over monomial ideals.
//!
//! The torus-fixed points of `Hilb(X, n)` supported at a fixed point of `X`
//! are monomial ideals, i.e. 3-dimensional partitions. For a partition with
//! box generating function `F(t) = sum_boxes t1^i t2^j t3^k`, the virtual
//! tangent character is
//!
//! ```text
//! V = F - Fbar/(t1 t2 t3) + F Fbar (1-t1)(1-t2)(1-t3)/(t1 t2 t3)
//! ```
//!
//! with `Fbar(t) = F(1/t)`. Dividing by the monomial `t1 t2 t3` is exact in
//! Laurent-polynomial arithmetic, so `V` is always a genuine Laurent
//! polynomial with integer coefficients and zero coefficient sum. Specializing
//! the chart weights at generic integers, each fixed-point assignment
//! contributes `prod_w w^{-m_w}` over the weights `w` of `V` with
//! multiplicity `m_w`, and the invariant is the sum over all assignments of
//! total size `n`.
//!
//! The sign convention is calibrated once against `N_{1,0} = -c3(T_X (x) K_X)
//! integrated over X` (forced by `M(-q)^m = 1 - m q + O(q^2)`) and then
//! frozen; bump [`CONVENTION_VERSION`] if it ever changes.

use std::collections::BTreeMap;

use num::{BigInt, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chern::Space;
use crate::rat::Q;

/// Bump when the localization sign convention changes; cache entries carry it.
pub const CONVENTION_VERSION: u32 = 1;

/// Default bound on the number of boxes.
pub const DEFAULT_BOX_BOUND: u32 = 6;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum VertexError {
    #[error("box count {0} exceeds the configured bound {1}")]
    BoundExceeded(u32, u32),
    #[error("space is not one of the toric targets P3, P2xP1, P1xP1xP1")]
    NotToric,
    #[error("localization sum is not an integer; convention bug")]
    NonIntegral,
    #[error("localization sum depends on the specialization; convention bug")]
    WeightDependent,
}

/// A 3-dimensional partition: a finite box set closed under coordinate-wise
/// decrease, stored as sorted `(i, j, k)` triples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanePartition {
    boxes: Vec<(u32, u32, u32)>,
}

impl PlanePartition {
    pub fn size(&self) -> u32 {
        self.boxes.len() as u32
    }

    pub fn boxes(&self) -> &[(u32, u32, u32)] {
        &self.boxes
    }

    /// Applies a permutation of the three coordinate axes.
    pub fn permute(&self, sigma: [usize; 3]) -> PlanePartition {
        let mut boxes: Vec<(u32, u32, u32)> = self
            .boxes
            .iter()
            .map(|&(i, j, k)| {
                let c = [i, j, k];
                (c[sigma[0]], c[sigma[1]], c[sigma[2]])
            })
            .collect();
        boxes.sort_unstable();
        PlanePartition { boxes }
    }
}

/// Complete, duplicate-free list of plane partitions with `n` boxes.
///
/// Generated as height matrices `h[i][j]` weakly decreasing along rows and
/// columns: row `i` is an ordinary partition bounded cell-wise by row `i-1`.
pub fn enumerate(n: u32, bound: u32) -> Result<Vec<PlanePartition>, VertexError> {
    if n > bound {
        return Err(VertexError::BoundExceeded(n, bound));
    }
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    gen_rows(n, None, &mut rows, &mut out);
    Ok(out)
}

fn gen_rows(
    left: u32,
    prev: Option<&[u32]>,
    rows: &mut Vec<Vec<u32>>,
    out: &mut Vec<PlanePartition>,
) {
    if left == 0 {
        let mut boxes = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &h) in row.iter().enumerate() {
                for k in 0..h {
                    boxes.push((i as u32, j as u32, k));
                }
            }
        }
        boxes.sort_unstable();
        out.push(PlanePartition { boxes });
        return;
    }
    let mut row = Vec::new();
    gen_row(left, prev, u32::MAX, &mut row, rows, out);
}

fn gen_row(
    left: u32,
    prev: Option<&[u32]>,
    max_part: u32,
    row: &mut Vec<u32>,
    rows: &mut Vec<Vec<u32>>,
    out: &mut Vec<PlanePartition>,
) {
    if !row.is_empty() {
        // close the row here and recurse into the next one
        let closed = row.clone();
        rows.push(closed);
        let prev_row = rows.last().unwrap().clone();
        gen_rows(left, Some(&prev_row), rows, out);
        rows.pop();
    }
    let pos = row.len();
    let cap = match prev {
        Some(p) => {
            if pos >= p.len() {
                return; // row may not be longer than the previous one
            }
            p[pos].min(max_part)
        }
        None => max_part,
    };
    for part in 1..=cap.min(left) {
        row.push(part);
        gen_row(left - part, prev, part, row, rows, out);
        row.pop();
    }
}

/// An exact Laurent polynomial in `t1, t2, t3` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Character {
    terms: BTreeMap<[i32; 3], i64>,
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    pub fn monomial(e: [i32; 3], c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Character { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32; 3], &i64)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert(0);
            *entry += c;
        }
        terms.retain(|_, c| *c != 0);
        Character { terms }
    }

    pub fn neg(&self) -> Self {
        Character { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<[i32; 3], i64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let entry = terms.entry(e).or_insert(0);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0);
        Character { terms }
    }

    /// `t -> 1/t` on all three variables.
    pub fn bar(&self) -> Self {
        Character {
            terms: self.terms.iter().map(|(e, c)| ([-e[0], -e[1], -e[2]], *c)).collect(),
        }
    }

    /// Sum of coefficients, i.e. the value at `t = (1, 1, 1)`.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Applies a permutation of the variables.
    pub fn permute(&self, sigma: [usize; 3]) -> Self {
        Character {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[sigma[0]], e[sigma[1]], e[sigma[2]]], *c))
                .collect(),
        }
    }
}

/// The virtual tangent character of a monomial ideal.
pub fn vertex_character(pi: &PlanePartition) -> Character {
    let mut f = Character::zero();
    for &(i, j, k) in &pi.boxes {
        f = f.add(&Character::monomial([i as i32, j as i32, k as i32], 1));
    }
    let fbar = f.bar();
    let inv_t123 = Character::monomial([-1, -1, -1], 1);
    let mut poisson = Character::monomial([0, 0, 0], 1);
    for d in 0..3 {
        let mut e = [0i32; 3];
        e[d] = 1;
        let factor = Character::monomial([0, 0, 0], 1).sub(&Character::monomial(e, 1));
        poisson = poisson.mul(&factor);
    }
    let v = f
        .sub(&fbar.mul(&inv_t123))
        .add(&f.mul(&fbar).mul(&poisson).mul(&inv_t123));
    debug_assert_eq!(v.coefficient_sum(), 0, "virtual dimension must vanish");
    v
}

/// The tangent weights at a torus-fixed point of the target, as integer
/// linear forms in the global parameters `s1, s2, s3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricChart {
    pub weights: [[i64; 3]; 3],
}

/// Charts of `P^n` using parameter slots `offset..offset+n`: at the fixed
/// point `f` the tangent weights are `s_j - s_f` for `j != f`, with `s_0 = 0`.
fn proj_charts(n: usize, offset: usize) -> Vec<Vec<[i64; 3]>> {
    let param = |k: usize| -> [i64; 3] {
        let mut v = [0i64; 3];
        if k > 0 {
            v[offset + k - 1] = 1;
        }
        v
    };
    (0..=n)
        .map(|f| {
            (0..=n)
                .filter(|&j| j != f)
                .map(|j| {
                    let a = param(j);
                    let b = param(f);
                    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
                })
                .collect()
        })
        .collect()
}

/// Recognizes the hard-coded toric corpus (`P^3`, `P^2 x P^1`, `(P^1)^3` in
/// any association order) and returns its charts.
pub fn toric_charts(x: &Space) -> Result<Vec<ToricChart>, VertexError> {
    let dims = proj_factor_dims(x).ok_or(VertexError::NotToric)?;
    let mut sorted = dims.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if !(sorted == vec![3] || sorted == vec![2, 1] || sorted == vec![1, 1, 1]) {
        return Err(VertexError::NotToric);
    }
    let mut factor_charts: Vec<Vec<Vec<[i64; 3]>>> = Vec::new();
    let mut offset = 0usize;
    for &n in &dims {
        factor_charts.push(proj_charts(n as usize, offset));
        offset += n as usize;
    }
    // cartesian product of the per-factor fixed points
    let mut combos: Vec<Vec<[i64; 3]>> = vec![vec![]];
    for fc in &factor_charts {
        let mut next = Vec::new();
        for prefix in &combos {
            for chart in fc {
                let mut w = prefix.clone();
                w.extend_from_slice(chart);
                next.push(w);
            }
        }
        combos = next;
    }
    Ok(combos
        .into_iter()
        .map(|w| ToricChart { weights: [w[0], w[1], w[2]] })
        .collect())
}

fn proj_factor_dims(x: &Space) -> Option<Vec<u32>> {
    fn walk(x: &Space, out: &mut Vec<u32>) -> bool {
        if let Some((a, b)) = x.as_product() {
            return walk(a, out) && walk(b, out);
        }
        if let Some(n) = x.as_proj() {
            out.push(n);
            return true;
        }
        false
    }
    let mut dims = Vec::new();
    if walk(x, &mut dims) {
        Some(dims)
    } else {
        None
    }
}

/// One fixed point's contribution: `prod_w w^{-m_w}` with the character
/// specialized at `s`. `Err(())` signals a zero weight (redraw).
fn contribution(v: &Character, chart: &ToricChart, s: [i64; 3]) -> Result<Q, ()> {
    let wval: Vec<i64> = chart
        .weights
        .iter()
        .map(|w| w[0] * s[0] + w[1] * s[1] + w[2] * s[2])
        .collect();
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for (e, &m) in v.terms() {
        let weight = e[0] as i64 * wval[0] + e[1] as i64 * wval[1] + e[2] as i64 * wval[2];
        if weight == 0 {
            return Err(());
        }
        let w = BigInt::from(weight);
        if m > 0 {
            denom *= w.pow(m as u32);
        } else {
            numer *= w.pow((-m) as u32);
        }
    }
    Ok(Q::new(numer, denom))
}

/// Options for the localization sum.
#[derive(Debug, Clone, Copy)]
pub struct VertexOptions {
    pub seed: u64,
    pub box_bound: u32,
    pub jobs: usize,
    /// Number of independent specializations that must agree.
    pub draws: u32,
}

impl Default for VertexOptions {
    fn default() -> Self {
        VertexOptions { seed: 1, box_bound: DEFAULT_BOX_BOUND, jobs: 1, draws: 3 }
    }
}

/// The degree-0 Donaldson-Thomas invariant `N_{n,0}` of a toric target,
/// computed as a localization sum over assignments of plane partitions to
/// the torus-fixed points. The result must be an integer and independent of
/// the generic specialization; both are checked.
pub fn n_dt(x: &Space, n: u32, opts: &VertexOptions) -> Result<BigInt, VertexError> {
    if n > opts.box_bound {
        return Err(VertexError::BoundExceeded(n, opts.box_bound));
    }
    let charts = toric_charts(x)?;
    let by_size: Vec<Vec<Character>> = (0..=n)
        .map(|m| enumerate(m, opts.box_bound).map(|ps| ps.iter().map(vertex_character).collect()))
        .collect::<Result<_, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut values: Vec<Q> = Vec::new();
    for _ in 0..opts.draws.max(1) {
        let value = loop {
            let s = [
                rng.random_range(1..=997i64),
                rng.random_range(1..=997i64),
                rng.random_range(1..=997i64),
            ];
            match localization_sum(&charts, &by_size, n, s, opts.jobs) {
                Some(v) => break v,
                None => continue, // zero weight: redraw
            }
        };
        values.push(value);
    }
    if values.windows(2).any(|w| w[0] != w[1]) {
        return Err(VertexError::WeightDependent);
    }
    let v = values.pop().expect("at least one draw");
    if !v.is_integer() {
        return Err(VertexError::NonIntegral);
    }
    Ok(v.to_integer())
}

/// `[q^n] prod_charts (sum_m W_chart(m) q^m)`; `None` on a zero weight.
fn localization_sum(
    charts: &[ToricChart],
    by_size: &[Vec<Character>],
    n: u32,
    s: [i64; 3],
    jobs: usize,
) -> Option<Q> {
    let chart_poly = |chart: &ToricChart| -> Option<Vec<Q>> {
        let mut poly = Vec::with_capacity(n as usize + 1);
        for chars in by_size.iter() {
            let mut acc = Q::zero();
            for v in chars {
                match contribution(v, chart, s) {
                    Ok(c) => acc += c,
                    Err(()) => return None,
                }
            }
            poly.push(acc);
        }
        Some(poly)
    };
    let polys: Vec<Vec<Q>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| charts.par_iter().map(chart_poly).collect::<Option<Vec<_>>>())?
    } else {
        charts.iter().map(chart_poly).collect::<Option<Vec<_>>>()?
    };
    // truncated product of the per-chart generating polynomials
    let mut acc = vec![Q::zero(); n as usize + 1];
    acc[0] = Q::one();
    for p in polys {
        let mut next = vec![Q::zero(); n as usize + 1];
        for i in 0..=n as usize {
            if acc[i].is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                if i + j > n as usize {
                    break;
                }
                next[i + j] += &acc[i] * pj;
            }
        }
        acc = next;
    }
    Some(acc.pop().expect("coefficient n present"))
}

/// Convenience wrapper returning the invariant as an `i64`.
pub fn n_dt_i64(x: &Space, n: u32, opts: &VertexOptions) -> Result<i64, VertexError> {
    let v = n_dt(x, n, opts)?;
    v.to_i64().ok_or(VertexError::NonIntegral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::spaces;

    #[test]
    fn enumerate_counts_match_macmahon() {
        let want = [1u32, 1, 3, 6, 13, 24, 48];
        for (n, &w) in want.iter().enumerate() {
            let ps = enumerate(n as u32, 6).unwrap();
            assert_eq!(ps.len() as u32, w, "n = {n}");
            let mut sorted = ps.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), ps.len(), "duplicates at n = {n}");
        }
        assert_eq!(enumerate(7, 6).unwrap_err(), VertexError::BoundExceeded(7, 6));
    }

    #[test]
    fn enumerate_two_boxes_explicitly() {
        let ps = enumerate(2, 6).unwrap();
        let mut got: Vec<Vec<(u32, u32, u32)>> = ps.iter().map(|p| p.boxes.clone()).collect();
        got.sort();
        let want = vec![
            vec![(0, 0, 0), (0, 0, 1)],
            vec![(0, 0, 0), (0, 1, 0)],
            vec![(0, 0, 0), (1, 0, 0)],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn single_box_character() {
        let pi = &enumerate(1, 6).unwrap()[0];
        let v = vertex_character(pi);
        let mut want = Character::zero();
        for e in [[-1, 0, 0], [0, -1, 0], [0, 0, -1]] {
            want = want.add(&Character::monomial(e, 1));
        }
        for e in [[-1, -1, 0], [-1, 0, -1], [0, -1, -1]] {
            want = want.add(&Character::monomial(e, -1));
        }
        assert_eq!(v, want);
        assert_eq!(v.coefficient_sum(), 0);
    }

    #[test]
    fn empty_partition_character_is_zero() {
        let pi = &enumerate(0, 6).unwrap()[0];
        assert!(vertex_character(pi).is_zero());
    }

    #[test]
    fn character_has_no_weight_zero_monomial() {
        for n in 0..=4 {
            for pi in enumerate(n, 6).unwrap() {
                let v = vertex_character(&pi);
                assert!(
                    !v.terms().any(|(e, _)| *e == [0, 0, 0]),
                    "constant monomial in character of {pi:?}"
                );
            }
        }
    }

    #[test]
    fn character_s3_equivariance() {
        let sigmas = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for n in 1..=3 {
            for pi in enumerate(n, 6).unwrap() {
                let v = vertex_character(&pi);
                for sigma in sigmas {
                    let lhs = vertex_character(&pi.permute(sigma));
                    let rhs = v.permute(sigma);
                    assert_eq!(lhs, rhs, "sigma = {sigma:?}, pi = {pi:?}");
                }
            }
        }
    }

    #[test]
    fn charts_of_the_corpus() {
        assert_eq!(toric_charts(&spaces::p3()).unwrap().len(), 4);
        assert_eq!(toric_charts(&spaces::p2_x_p1()).unwrap().len(), 6);
        assert_eq!(toric_charts(&spaces::p1_cubed()).unwrap().len(), 8);
        assert_eq!(toric_charts(&spaces::bl_p3()).unwrap_err(), VertexError::NotToric);
    }

    #[test]
    fn n_zero_is_one() {
        let opts = VertexOptions::default();
        assert_eq!(n_dt(&spaces::p3(), 0, &opts).unwrap(), 1.into());
    }

    #[test]
    fn calibration_n1_equals_minus_dt_exponent() {
        let opts = VertexOptions::default();
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let n1 = n_dt(&x, 1, &opts).unwrap();
            let expo = x.dt_exponent().unwrap();
            assert_eq!(Q::from_integer(n1), -expo, "calibration for {x:?}");
        }
    }

    #[test]
    fn seeds_agree() {
        let a = n_dt(&spaces::p3(), 2, &VertexOptions { seed: 1, ..Default::default() }).unwrap();
        let b = n_dt(&spaces::p3(), 2, &VertexOptions { seed: 99, ..Default::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_reduction_matches_serial() {
        let serial =
            n_dt(&spaces::p2_x_p1(), 2, &VertexOptions { jobs: 1, ..Default::default() }).unwrap();
        let parallel =
            n_dt(&spaces::p2_x_p1(), 2, &VertexOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn p3_low_invariants() {
        let opts = VertexOptions::default();
        assert_eq!(n_dt_i64(&spaces::p3(), 1, &opts).unwrap(), 20);
        // [q^2] M(-q)^{-20} = 150, from M(-q)^{-1} = 1 + q - 2q^2 + ...:
        // C(20,2) * 1^2 + 20 * (-2) = 190 - 40
        assert_eq!(n_dt_i64(&spaces::p3(), 2, &opts).unwrap(), 150);
    }

    #[test]
    fn bound_violation() {
        let opts = VertexOptions { box_bound: 2, ..Default::default() };
        assert_eq!(n_dt(&spaces::p3(), 3, &opts).unwrap_err(), VertexError::BoundExceeded(3, 2));
    }
}
