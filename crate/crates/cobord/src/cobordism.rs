//! The rational cobordism ring of a point in the basis of products of
//! projective spaces.
//!
//! A class of dimension `d` is a `Q`-linear combination of partition-indexed
//! monomials `[P^{l_1} x ... x P^{l_k}]` with `l` a partition of `d`. Chern
//! numbers are a complete invariant here, so [`decompose`] is defined by
//! Chern-number matching: the matrix of all Chern numbers of the basis spaces
//! is invertible in every dimension we use (asserted, not assumed), and the
//! coefficients of a space are the unique solution of the linear system.
//!
//! On top of the decomposition sit the double point relation checks and the
//! formal-group-law coefficients: `[H_{n,m}] = sum a_{ij} [P^{n-i}][P^{m-j}]`
//! over Milnor hypersurfaces, solved triangularly, which cross-validates the
//! logarithm construction in [`crate::fgl`] coefficient by coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::chern::{spaces, ChernError, Space};
use crate::partition::{chern_order, partitions_of, render, Partition};
use crate::rat::Q;
use crate::series::MultiSeries;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CobordismError {
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("Chern-number matrix is singular in dimension {dim}")]
    SingularMatrix { dim: u32 },
    #[error("dimensions do not match: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("coefficient solve produced an asymmetric table at ({0},{1}); convention bug")]
    InconsistentSystem(u32, u32),
    #[error("series is not a homogeneous polynomial in the p-parameters")]
    NotAParameterPolynomial,
}

/// A graded rational cobordism class: coefficients on `[P^l]` basis monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CobordismClass {
    dim: u32,
    coeffs: BTreeMap<Partition, Q>,
}

impl CobordismClass {
    pub fn zero(dim: u32) -> Self {
        CobordismClass { dim, coeffs: BTreeMap::new() }
    }

    /// The basis monomial `[P^{l_1} x ... x P^{l_k}]`.
    pub fn basis_element(partition: &[u32]) -> Self {
        let mut p: Partition = partition.iter().copied().filter(|&x| x > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        let dim = p.iter().sum();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(p, Q::one());
        CobordismClass { dim, coeffs }
    }

    /// The class of a point, `[P^0]` (empty partition, dimension 0).
    pub fn point() -> Self {
        Self::basis_element(&[])
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Partition, &Q)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, partition: &[u32]) -> Q {
        self.coeffs.get(partition).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, CobordismError> {
        if self.dim != other.dim {
            return Err(CobordismError::DimensionMismatch(self.dim, other.dim));
        }
        let mut coeffs = self.coeffs.clone();
        for (p, c) in &other.coeffs {
            let entry = coeffs.entry(p.clone()).or_insert_with(Q::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(CobordismClass { dim: self.dim, coeffs })
    }

    pub fn neg(&self) -> Self {
        CobordismClass {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CobordismError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        CobordismClass {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(p, k)| (p.clone(), k * c)).collect(),
        }
    }

    /// External product: basis monomials multiply by partition concatenation.
    pub fn product(&self, other: &Self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (pa, ca) in &self.coeffs {
            for (pb, cb) in &other.coeffs {
                let mut p: Partition = pa.iter().chain(pb.iter()).copied().collect();
                p.sort_unstable_by(|a, b| b.cmp(a));
                let entry = coeffs.entry(p).or_insert_with(Q::zero);
                *entry += ca * cb;
            }
        }
        coeffs.retain(|_, c: &mut Q| !c.is_zero());
        CobordismClass { dim: self.dim + other.dim, coeffs }
    }
}

impl fmt::Display for CobordismClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (p, c)) in self.coeffs.iter().enumerate() {
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
            if mag.is_one() {
                out.push_str(&format!("[{}]", render(p)));
            } else {
                out.push_str(&format!("{mag} [{}]", render(p)));
            }
        }
        f.write_str(&out)
    }
}

/// Basis partitions of dimension `d` in the canonical reverse-lexicographic
/// order, `(d)` first.
pub fn basis(d: u32) -> Vec<Partition> {
    partitions_of(d)
}

/// The product of projective spaces attached to a basis partition.
pub fn basis_space(partition: &[u32]) -> Space {
    spaces::product_of_projectives(partition)
}

/// Chern numbers of a space as a vector in the canonical column order.
pub fn chern_vector(x: &Space, dim_bound: u32) -> Result<Vec<Q>, CobordismError> {
    let nums = x.chern_numbers(dim_bound)?;
    Ok(chern_order(x.dimension())
        .into_iter()
        .map(|l| nums[&l].clone())
        .collect())
}

/// The square matrix of Chern numbers: rows follow [`basis`] order, columns
/// the Chern-number partition order.
pub fn chern_matrix(d: u32, dim_bound: u32) -> Result<Vec<Vec<Q>>, CobordismError> {
    basis(d)
        .iter()
        .map(|l| chern_vector(&basis_space(l), dim_bound))
        .collect()
}

/// Exact determinant by Gaussian elimination over `Q`.
#[allow(clippy::needless_range_loop)] // row/column indices mirror the math
pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
#[allow(clippy::needless_range_loop)]
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Expresses a space in the basis of products of projective spaces by
/// matching all of its Chern numbers.
pub fn decompose(x: &Space, dim_bound: u32) -> Result<CobordismClass, CobordismError> {
    let d = x.dimension();
    let v = chern_vector(x, dim_bound)?;
    let m = chern_matrix(d, dim_bound)?;
    // solve M^T c = v so that sum_l c_l * chern(P^l) = chern(x)
    let n = m.len();
    let mt: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| m[j][i].clone()).collect())
        .collect();
    let c = solve(&mt, &v).ok_or(CobordismError::SingularMatrix { dim: d })?;
    let mut coeffs = BTreeMap::new();
    for (l, coeff) in basis(d).into_iter().zip(c) {
        if !coeff.is_zero() {
            coeffs.insert(l, coeff);
        }
    }
    Ok(CobordismClass { dim: d, coeffs })
}

/// The four spaces of a double point degeneration: the regular fiber, the two
/// components of the special fiber, and the bundle `P(pi)` over their
/// intersection. `None` encodes an empty component (the zero class).
#[derive(Debug, Clone)]
pub struct DoublePointDatum {
    pub y_zeta: Space,
    pub a: Space,
    pub b: Option<Space>,
    pub p_pi: Option<Space>,
}

impl DoublePointDatum {
    pub fn new(
        y_zeta: Space,
        a: Space,
        b: Option<Space>,
        p_pi: Option<Space>,
    ) -> Result<Self, CobordismError> {
        let d = y_zeta.dimension();
        for s in [Some(&a), b.as_ref(), p_pi.as_ref()].into_iter().flatten() {
            if s.dimension() != d {
                return Err(CobordismError::DimensionMismatch(d, s.dimension()));
            }
        }
        Ok(DoublePointDatum { y_zeta, a, b, p_pi })
    }
}

/// The residual class `[Y_zeta] - [A] - [B] + [P(pi)]`; zero for a genuine
/// double point degeneration.
pub fn verify_relation(
    datum: &DoublePointDatum,
    dim_bound: u32,
) -> Result<CobordismClass, CobordismError> {
    let mut acc = decompose(&datum.y_zeta, dim_bound)?;
    acc = acc.sub(&decompose(&datum.a, dim_bound)?)?;
    if let Some(b) = &datum.b {
        acc = acc.sub(&decompose(b, dim_bound)?)?;
    }
    if let Some(p) = &datum.p_pi {
        acc = acc.add(&decompose(p, dim_bound)?)?;
    }
    Ok(acc)
}

/// The double point datum of the blow-up relation at a point of a 3-fold:
/// deforming to the normal cone of the point degenerates `X` into
/// `Bl_pt(X) U P^3` glued along the exceptional `P^2`, with
/// `P(pi) = P(O + O(1))` over `P^2`. The relation reads
/// `[X] - [Bl_pt X] - [P^3] + [P(O + O(1))] = 0`.
pub fn blowup_relation(x: &Space) -> Result<DoublePointDatum, CobordismError> {
    if x.dimension() != 3 {
        return Err(CobordismError::Chern(ChernError::DimensionMismatch {
            expected: 3,
            got: x.dimension(),
        }));
    }
    let bl = Space::blowup_point(x.clone())?;
    DoublePointDatum::new(
        x.clone(),
        bl,
        Some(spaces::p3()),
        Some(spaces::pb_p2_o_o1()),
    )
}

/// Formal-group-law coefficients from Milnor hypersurfaces: solves
/// `[H_{n,m}] = sum_{(i,j) != (0,0)} a_{ij} [P^{n-i}] [P^{m-j}]` triangularly
/// in increasing `i + j`, using the stabilization `a_{ij}^{N,M} = a_{ij}^{n,m}`.
/// Returns the map `(i, j) -> a_{ij}` for `1 <= i + j <= max`.
pub fn milnor_fgl_coefficients(
    max: u32,
    dim_bound: u32,
) -> Result<BTreeMap<(u32, u32), CobordismClass>, CobordismError> {
    let mut a: BTreeMap<(u32, u32), CobordismClass> = BTreeMap::new();
    for total in 1..=max {
        for i in 0..=total {
            let (n, m) = (i, total - i);
            let h = decompose(&spaces::milnor(n, m), dim_bound)?;
            let mut rest = CobordismClass::zero(n + m - 1);
            for k in 0..=n {
                for l in 0..=m {
                    if (k, l) == (0, 0) || (k, l) == (n, m) {
                        continue;
                    }
                    let coeff = &a[&(k, l)];
                    let term = coeff
                        .product(&CobordismClass::basis_element(&[n - k]))
                        .product(&CobordismClass::basis_element(&[m - l]));
                    rest = rest.add(&term)?;
                }
            }
            a.insert((n, m), h.sub(&rest)?);
        }
        // symmetry a_{ij} = a_{ji} must come out of the solve; a violation
        // means the projective-bundle conventions drifted
        for i in 0..=total {
            let j = total - i;
            if a[&(i, j)] != a[&(j, i)] {
                return Err(CobordismError::InconsistentSystem(i, j));
            }
        }
    }
    Ok(a)
}

/// Reads a polynomial in the `p_k` parameters (a formal-group-law
/// coefficient) as a cobordism class of the given dimension under
/// `p_k <-> [P^k]`.
pub fn class_from_parameter_polynomial(
    poly: &MultiSeries,
    dim: u32,
) -> Result<CobordismClass, CobordismError> {
    let table = poly.table().clone();
    let mut acc = CobordismClass::zero(dim);
    for (exps, c) in poly.terms() {
        let mut partition: Partition = Vec::new();
        for (idx, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let var = &table.vars()[idx];
            let k: u32 = match var.name.strip_prefix('p').and_then(|s| s.parse().ok()) {
                Some(k) => k,
                None => return Err(CobordismError::NotAParameterPolynomial),
            };
            for _ in 0..e {
                partition.push(k);
            }
        }
        partition.sort_unstable_by(|a, b| b.cmp(a));
        if partition.iter().sum::<u32>() != dim {
            return Err(CobordismError::NotAParameterPolynomial);
        }
        acc = acc.add(&CobordismClass::basis_element(&partition).scale(c))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::CohClass;
    use crate::fgl::FormalGroupLaw;
    use crate::rat::qi;

    #[test]
    fn basis_order() {
        assert_eq!(basis(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(basis(0), vec![Partition::new()]);
        assert_eq!(basis(4).len(), 5);
    }

    #[test]
    fn chern_matrix_dimension_three() {
        let m = chern_matrix(3, 4).unwrap();
        let want: Vec<Vec<Q>> = vec![
            vec![qi(64), qi(24), qi(4)],
            vec![qi(54), qi(24), qi(6)],
            vec![qi(48), qi(24), qi(8)],
        ];
        assert_eq!(m, want);
        assert!(!determinant(&m).is_zero());
    }

    #[test]
    fn chern_matrix_dimension_one() {
        assert_eq!(chern_matrix(1, 4).unwrap(), vec![vec![qi(2)]]);
    }

    #[test]
    fn chern_matrices_invertible_up_to_four() {
        for d in 0..=4 {
            let m = chern_matrix(d, 4).unwrap();
            assert!(!determinant(&m).is_zero(), "dimension {d}");
        }
    }

    #[test]
    fn decompose_examples() {
        // a basis element decomposes to itself
        let c = decompose(&spaces::p2_x_p1(), 4).unwrap();
        assert_eq!(c, CobordismClass::basis_element(&[2, 1]));

        // Bl_pt(P^3) and P(O + O(1)) over P^2 share all Chern numbers
        let bl = decompose(&spaces::bl_p3(), 4).unwrap();
        let pb = decompose(&spaces::pb_p2_o_o1(), 4).unwrap();
        assert_eq!(bl, pb);

        // H_{1,1} is a rational curve: [P^1]
        let h11 = decompose(&spaces::milnor(1, 1), 4).unwrap();
        assert_eq!(h11, CobordismClass::basis_element(&[1]));
    }

    #[test]
    fn decompose_is_a_ring_map_on_products() {
        let x = spaces::milnor(2, 1); // dimension 2
        let y = Space::proj(1, "z");
        let xy = Space::product(x.clone(), y.clone()).unwrap();
        let got = decompose(&xy, 4).unwrap();
        let want = decompose(&x, 4).unwrap().product(&decompose(&y, 4).unwrap());
        assert_eq!(got, want);

        let f1 = {
            // Hirzebruch surface P(O + O(1)) over P^1
            let base = Space::proj(1, "s");
            let ring = base.geometry().unwrap().ring;
            let s = CohClass::generator(&ring, "s").unwrap();
            Space::proj_bundle(base, vec![CohClass::zero(&ring), s], "xi").unwrap()
        };
        let f1p1 = Space::product(f1.clone(), Space::proj(1, "w")).unwrap();
        let got = decompose(&f1p1, 4).unwrap();
        let want = decompose(&f1, 4)
            .unwrap()
            .product(&decompose(&Space::proj(1, "w"), 4).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn ring_ops() {
        let p2 = CobordismClass::basis_element(&[2]);
        let p1 = CobordismClass::basis_element(&[1]);
        assert_eq!(p2.product(&p1), CobordismClass::basis_element(&[2, 1]));
        assert_eq!(p1.product(&p1), CobordismClass::basis_element(&[1, 1]));
        let zero = CobordismClass::zero(1);
        assert!(p1.product(&zero).is_zero());
    }

    #[test]
    fn naive_datum_residual_zero() {
        let x = spaces::p3();
        let datum = DoublePointDatum::new(x.clone(), x, None, None).unwrap();
        assert!(verify_relation(&datum, 4).unwrap().is_zero());
    }

    #[test]
    fn blowup_relation_residual_zero() {
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let datum = blowup_relation(&x).unwrap();
            let residual = verify_relation(&datum, 4).unwrap();
            assert!(residual.is_zero(), "residual: {residual}");
        }
    }

    #[test]
    fn blowup_forces_equal_decompositions() {
        // the relation for X = P^3 pins [Bl P^3] = [P(O + O(1))]
        let datum = blowup_relation(&spaces::p3()).unwrap();
        let bl = decompose(&datum.a, 4).unwrap();
        let pb = decompose(datum.p_pi.as_ref().unwrap(), 4).unwrap();
        assert_eq!(bl, pb);
    }

    #[test]
    fn milnor_low_coefficients() {
        let a = milnor_fgl_coefficients(2, 4).unwrap();
        assert_eq!(a[&(0, 1)], CobordismClass::point());
        assert_eq!(a[&(1, 0)], CobordismClass::point());
        assert_eq!(a[&(1, 1)], CobordismClass::basis_element(&[1]).neg());
        assert!(a[&(0, 2)].is_zero());
        assert!(a[&(2, 0)].is_zero());
    }

    #[test]
    fn milnor_matches_universal_law() {
        let max = 4;
        let a = milnor_fgl_coefficients(max, 4).unwrap();
        let f = FormalGroupLaw::universal(max + 1);
        for (&(i, j), class) in &a {
            let from_series =
                class_from_parameter_polynomial(&f.coefficient(i, j), i + j - 1).unwrap();
            assert_eq!(class, &from_series, "a_({i},{j})");
        }
    }

    #[test]
    fn solve_and_determinant() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(1)]];
        assert_eq!(determinant(&m), qi(1));
        let x = solve(&m, &[qi(3), qi(2)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
        let sing = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(determinant(&sing).is_zero());
        assert!(solve(&sing, &[qi(1), qi(1)]).is_none());
    }
}
