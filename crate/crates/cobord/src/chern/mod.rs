//! Symbolic geometry: iterated projective-bundle towers, products, Milnor-type
//! hypersurfaces and point blow-ups of 3-folds, with their cohomology rings,
//! Chern classes, Chern numbers and degree-0 Donaldson-Thomas exponents.
//!
//! Conventions, fixed once and checked downstream by the formal-group-law
//! coefficient cross-check:
//!
//! - `ProjBundle` is the bundle of rank-one quotients with tautological class
//!   `xi`, Grothendieck relation `prod_j (xi + l_j) = 0`, relative tangent
//!   class `prod_j (1 + xi + l_j)` and fiber integral `xi^{r-1} = 1`.
//! - `Hypersurface` never gets its own presentation: its classes live in the
//!   ambient ring, integrals push forward by multiplying with the divisor
//!   class, and its tangent class is `c(T_amb) / (1 + d)` by adjunction.
//! - `BlowupPoint` of a 3-fold only tracks Chern data, by the closed formulas
//!   `c1^3 -> c1^3 - 8`, `c1c2 -> c1c2`, `c3 -> c3 + 2`.

pub mod ring;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::partition::{partitions_of, Partition};
use crate::rat::{qi, Q};

pub use ring::{CohClass, Ring, RingError};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ChernError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("expected a space of dimension {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },
    #[error("point blow-ups carry no ring presentation; only Chern data is available")]
    NoRingPresentation,
    #[error("dimension {dim} exceeds the configured bound {bound}")]
    BoundExceeded { dim: u32, bound: u32 },
    #[error("hypersurface class must be nonzero")]
    EmptyDivisor,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Point,
    Proj { n: u32, gen: String },
    Product(Box<Space>, Box<Space>),
    ProjBundle { base: Box<Space>, classes: Vec<CohClass>, gen: String },
    Hypersurface { ambient: Box<Space>, class: CohClass },
    BlowupPoint(Box<Space>),
}

/// A symbolic space: a constructor tree with cached dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Space {
    node: Node,
    dim: u32,
}

/// Everything needed to compute with a space that has a ring presentation:
/// the ring, the total tangent Chern class, the push-forward multiplier for
/// integration (a product of divisor classes when the space is an iterated
/// hypersurface), and the dimension.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub ring: Arc<Ring>,
    pub tangent: CohClass,
    pub push: CohClass,
    pub dim: u32,
}

impl Space {
    pub fn point() -> Self {
        Space { node: Node::Point, dim: 0 }
    }

    pub fn proj(n: u32, gen: &str) -> Self {
        Space { node: Node::Proj { n, gen: gen.to_string() }, dim: n }
    }

    pub fn product(a: Space, b: Space) -> Result<Self, ChernError> {
        let dim = a.dim + b.dim;
        let s = Space { node: Node::Product(Box::new(a), Box::new(b)), dim };
        s.geometry_or_dim_check()?;
        Ok(s)
    }

    /// `P(O(l_1) + ... + O(l_r))` over `base`; the classes live in the ring
    /// of `base` and must be zero or homogeneous of degree 1.
    pub fn proj_bundle(
        base: Space,
        classes: Vec<CohClass>,
        gen: &str,
    ) -> Result<Self, ChernError> {
        assert!(!classes.is_empty(), "projective bundle needs at least one summand");
        let geo = base.geometry()?;
        for c in &classes {
            if c.ring() != &geo.ring {
                return Err(ChernError::Ring(RingError::RingMismatch));
            }
            if !c.is_divisor() {
                return Err(ChernError::Ring(RingError::NotADivisor));
            }
        }
        let dim = base.dim + classes.len() as u32 - 1;
        let s = Space {
            node: Node::ProjBundle { base: Box::new(base), classes, gen: gen.to_string() },
            dim,
        };
        s.geometry_or_dim_check()?;
        Ok(s)
    }

    /// A smooth divisor of class `class` in `ambient`.
    pub fn hypersurface(ambient: Space, class: CohClass) -> Result<Self, ChernError> {
        let geo = ambient.geometry()?;
        if class.ring() != &geo.ring {
            return Err(ChernError::Ring(RingError::RingMismatch));
        }
        if class.is_zero() {
            return Err(ChernError::EmptyDivisor);
        }
        if !class.is_divisor() {
            return Err(ChernError::Ring(RingError::NotADivisor));
        }
        if ambient.dim == 0 {
            return Err(ChernError::DimensionMismatch { expected: 1, got: 0 });
        }
        let dim = ambient.dim - 1;
        Ok(Space { node: Node::Hypersurface { ambient: Box::new(ambient), class }, dim })
    }

    /// Blow-up of a 3-fold at a point.
    pub fn blowup_point(x: Space) -> Result<Self, ChernError> {
        if x.dim != 3 {
            return Err(ChernError::DimensionMismatch { expected: 3, got: x.dim });
        }
        Ok(Space { node: Node::BlowupPoint(Box::new(x)), dim: 3 })
    }

    pub fn dimension(&self) -> u32 {
        self.dim
    }

    /// The two factors when this space is a product.
    pub fn as_product(&self) -> Option<(&Space, &Space)> {
        match &self.node {
            Node::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The dimension when this space is a bare projective space.
    pub fn as_proj(&self) -> Option<u32> {
        match &self.node {
            Node::Proj { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// The generator name when this space is a bare projective space.
    pub fn proj_generator(&self) -> Option<&str> {
        match &self.node {
            Node::Proj { gen, .. } => Some(gen),
            _ => None,
        }
    }

    fn geometry_or_dim_check(&self) -> Result<(), ChernError> {
        match self.geometry() {
            Ok(_) | Err(ChernError::NoRingPresentation) => Ok(()),
            Err(e) => Err(e),
        }
    }

    /// The presented cohomology ring, tangent class and push-forward data.
    /// Point blow-ups have no presentation and return an error.
    pub fn geometry(&self) -> Result<Geometry, ChernError> {
        match &self.node {
            Node::Point => {
                let ring = Ring::empty();
                Ok(Geometry {
                    tangent: CohClass::one(&ring),
                    push: CohClass::one(&ring),
                    ring,
                    dim: 0,
                })
            }
            Node::Proj { n, gen } => {
                let ring = Ring::projective(gen, *n);
                let h = CohClass::generator(&ring, gen)?;
                let tangent = CohClass::one(&ring).add(&h)?.pow(n + 1)?;
                Ok(Geometry { tangent, push: CohClass::one(&ring), ring, dim: *n })
            }
            Node::Product(a, b) => {
                let ga = a.geometry()?;
                let gb = b.geometry()?;
                let ring = Ring::join(&ga.ring, &gb.ring)?;
                let off = ga.ring.generators().len();
                let tangent = ga.tangent.embed(&ring, 0).mul(&gb.tangent.embed(&ring, off))?;
                let push = ga.push.embed(&ring, 0).mul(&gb.push.embed(&ring, off))?;
                Ok(Geometry { ring, tangent, push, dim: ga.dim + gb.dim })
            }
            Node::ProjBundle { base, classes, gen } => {
                let gb = base.geometry()?;
                let ring = gb.ring.extend_bundle(gen, classes)?;
                let xi = CohClass::generator(&ring, gen)?;
                let one = CohClass::one(&ring);
                let mut rel_tangent = one.clone();
                for c in classes {
                    let f = one.add(&xi)?.add(&c.embed(&ring, 0))?;
                    rel_tangent = rel_tangent.mul(&f)?;
                }
                let tangent = gb.tangent.embed(&ring, 0).mul(&rel_tangent)?;
                let push = gb.push.embed(&ring, 0);
                Ok(Geometry { ring, tangent, push, dim: gb.dim + classes.len() as u32 - 1 })
            }
            Node::Hypersurface { ambient, class } => {
                let ga = ambient.geometry()?;
                let one_plus_d = CohClass::one(&ga.ring).add(class)?;
                let tangent = ga.tangent.mul(&one_plus_d.invert_unit()?)?;
                let push = ga.push.mul(class)?;
                Ok(Geometry { ring: ga.ring, tangent, push, dim: ga.dim - 1 })
            }
            Node::BlowupPoint(_) => Err(ChernError::NoRingPresentation),
        }
    }

    /// Total Chern class of the tangent bundle, expressed in the ring of
    /// [`Space::geometry`].
    pub fn tangent_chern(&self) -> Result<CohClass, ChernError> {
        Ok(self.geometry()?.tangent)
    }

    /// Integrates a class of top degree (`deg = dim`) over the space.
    pub fn integrate(&self, class: &CohClass) -> Result<Q, ChernError> {
        let geo = self.geometry()?;
        if class.ring() != &geo.ring {
            return Err(ChernError::Ring(RingError::RingMismatch));
        }
        match class.homogeneous_degree()? {
            None => return Ok(Q::zero()),
            Some(d) if d == geo.dim => {}
            Some(d) => {
                return Err(ChernError::Ring(RingError::DegreeMismatch {
                    expected: geo.dim,
                    got: Some(d),
                }))
            }
        }
        Ok(class.mul(&geo.push)?.top_coefficient()?)
    }

    /// All Chern numbers: for every partition `l` of the dimension, the
    /// integral of `c_{l_1} ... c_{l_k}(T_X)`.
    pub fn chern_numbers(&self, dim_bound: u32) -> Result<BTreeMap<Partition, Q>, ChernError> {
        if self.dim > dim_bound {
            return Err(ChernError::BoundExceeded { dim: self.dim, bound: dim_bound });
        }
        if let Node::BlowupPoint(base) = &self.node {
            let b = base.chern_numbers(dim_bound)?;
            let mut out = BTreeMap::new();
            out.insert(vec![3], b[&vec![3u32]].clone() + qi(2));
            out.insert(vec![2, 1], b[&vec![2u32, 1]].clone());
            out.insert(vec![1, 1, 1], b[&vec![1u32, 1, 1]].clone() - qi(8));
            return Ok(out);
        }
        let geo = self.geometry()?;
        let cs: Vec<CohClass> =
            (0..=self.dim).map(|k| geo.tangent.degree_part(k)).collect();
        let mut out = BTreeMap::new();
        for lambda in partitions_of(self.dim) {
            let mut prod = CohClass::one(&geo.ring);
            for &part in &lambda {
                prod = prod.mul(&cs[part as usize])?;
            }
            out.insert(lambda, self.integrate(&prod)?);
        }
        Ok(out)
    }

    /// The topological Euler characteristic `integral of c_top`.
    pub fn euler_number(&self) -> Result<Q, ChernError> {
        if let Node::BlowupPoint(base) = &self.node {
            return Ok(base.euler_number()? + qi(2));
        }
        let geo = self.geometry()?;
        self.integrate(&geo.tangent.degree_part(self.dim))
    }

    /// The degree-0 Donaldson-Thomas exponent `integral of c3(T_X ⊗ K_X)`,
    /// computed through the rank-3 twist expansion
    /// `c3(T ⊗ L) = c3 + c2 l + c1 l^2 + l^3` at `l = -c1`.
    pub fn dt_exponent(&self) -> Result<Q, ChernError> {
        if self.dim != 3 {
            return Err(ChernError::DimensionMismatch { expected: 3, got: self.dim });
        }
        if matches!(self.node, Node::BlowupPoint(_)) {
            let nums = self.chern_numbers(3.max(self.dim))?;
            return Ok(nums[&vec![3u32]].clone() - nums[&vec![2u32, 1]].clone());
        }
        let geo = self.geometry()?;
        let c1 = geo.tangent.degree_part(1);
        self.twisted_c3(&geo.tangent, &c1.neg())
    }

    /// The relative exponent `integral of c3(T_X[-S] ⊗ K_X[S])` for a divisor
    /// class `s`. The virtual bundle `T_X[-S] = T_X - O(S) + O` has total
    /// Chern class `c(T_X)/(1+s)` of virtual rank 3, and the twisting line
    /// bundle is `K_X[S] = K_X + S`, so `l = s - c1(T_X)`.
    pub fn log_dt_exponent(&self, s: &CohClass) -> Result<Q, ChernError> {
        if self.dim != 3 {
            return Err(ChernError::DimensionMismatch { expected: 3, got: self.dim });
        }
        let geo = self.geometry()?;
        if s.ring() != &geo.ring {
            return Err(ChernError::Ring(RingError::RingMismatch));
        }
        if !s.is_divisor() {
            return Err(ChernError::Ring(RingError::NotADivisor));
        }
        let one_plus_s = CohClass::one(&geo.ring).add(s)?;
        let v = geo.tangent.mul(&one_plus_s.invert_unit()?)?;
        let ell = s.sub(&geo.tangent.degree_part(1))?;
        self.twisted_c3(&v, &ell)
    }

    /// `integral of [c3(V) + c2(V) l + c1(V) l^2 + l^3]` for a (virtual)
    /// rank-3 bundle with total class `v` and a degree-1 twist `l`.
    fn twisted_c3(&self, v: &CohClass, ell: &CohClass) -> Result<Q, ChernError> {
        let c1 = v.degree_part(1);
        let c2 = v.degree_part(2);
        let c3 = v.degree_part(3);
        let l2 = ell.mul(ell)?;
        let l3 = l2.mul(ell)?;
        let total = c3
            .add(&c2.mul(ell)?)?
            .add(&c1.mul(&l2)?)?
            .add(&l3)?;
        self.integrate(&total)
    }
}

/// Renders a space in the CLI expression grammar: `P3`, `P2*P1`,
/// `PB(P2; 0, h)`, `Hyp(P1*P1; a+b)`, `Bl(P3)`.
pub fn render_expr(space: &Space) -> String {
    fn class_compact(c: &CohClass) -> String {
        // like CohClass::Display but without spaces, matching the grammar
        c.to_string().replace(" + ", "+").replace(" - ", "-").replace(' ', "*")
    }
    fn walk(space: &Space, parenthesize_product: bool) -> String {
        match &space.node {
            Node::Point => "Pt".to_string(),
            Node::Proj { n, .. } => format!("P{n}"),
            Node::Product(a, b) => {
                let s = format!("{}*{}", walk(a, false), walk(b, true));
                if parenthesize_product {
                    format!("({s})")
                } else {
                    s
                }
            }
            Node::ProjBundle { base, classes, .. } => {
                let cl: Vec<String> = classes.iter().map(class_compact).collect();
                format!("PB({}; {})", walk(base, false), cl.join(", "))
            }
            Node::Hypersurface { ambient, class } => {
                format!("Hyp({}; {})", walk(ambient, false), class_compact(class))
            }
            Node::BlowupPoint(x) => format!("Bl({})", walk(x, false)),
        }
    }
    walk(space, false)
}

/// Constructors for the standard corpus used throughout the tests and the
/// verification suite. Generator names match the CLI grammar.
pub mod spaces {
    use super::*;

    /// `P^3` with hyperplane class `h`.
    pub fn p3() -> Space {
        Space::proj(3, "h")
    }

    /// `P^2 x P^1` with hyperplane classes `a`, `b`.
    pub fn p2_x_p1() -> Space {
        Space::product(Space::proj(2, "a"), Space::proj(1, "b")).unwrap()
    }

    /// `P^1 x P^1 x P^1` with classes `a`, `b`, `c`.
    pub fn p1_cubed() -> Space {
        let ab = Space::product(Space::proj(1, "a"), Space::proj(1, "b")).unwrap();
        Space::product(ab, Space::proj(1, "c")).unwrap()
    }

    /// `P(O + O(1))` over `P^2`, generators `h`, `xi`.
    pub fn pb_p2_o_o1() -> Space {
        let base = Space::proj(2, "h");
        let ring = base.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        Space::proj_bundle(base, vec![CohClass::zero(&ring), h], "xi").unwrap()
    }

    /// Blow-up of `P^3` at a point.
    pub fn bl_p3() -> Space {
        Space::blowup_point(p3()).unwrap()
    }

    /// The Milnor hypersurface `H_{n,m}`: a smooth `(1,1)` divisor in
    /// `P^n x P^m`, with ambient classes `a`, `b`.
    pub fn milnor(n: u32, m: u32) -> Space {
        let amb = Space::product(Space::proj(n, "a"), Space::proj(m, "b")).unwrap();
        let ring = amb.geometry().unwrap().ring;
        let a = CohClass::generator(&ring, "a").unwrap();
        let b = CohClass::generator(&ring, "b").unwrap();
        Space::hypersurface(amb, a.add(&b).unwrap()).unwrap()
    }

    /// A product of projective spaces `P^{l_1} x ... x P^{l_k}` with
    /// generators `a, b, c, ...`; the empty product is the point.
    pub fn product_of_projectives(parts: &[u32]) -> Space {
        const NAMES: [&str; 8] = ["a", "b", "c", "d", "f", "g", "x", "y"];
        assert!(parts.len() <= NAMES.len(), "too many factors");
        let mut acc: Option<Space> = None;
        for (i, &n) in parts.iter().enumerate() {
            let factor = Space::proj(n, NAMES[i]);
            acc = Some(match acc {
                None => factor,
                Some(s) => Space::product(s, factor).unwrap(),
            });
        }
        acc.unwrap_or_else(Space::point)
    }
}

#[cfg(test)]
mod tests {
    use super::spaces::*;
    use super::*;
    use crate::rat::qi;

    fn nums3(x: &Space) -> (Q, Q, Q) {
        let n = x.chern_numbers(4).unwrap();
        (
            n[&vec![1u32, 1, 1]].clone(),
            n[&vec![2u32, 1]].clone(),
            n[&vec![3u32]].clone(),
        )
    }

    #[test]
    fn presentations() {
        let g = p3().geometry().unwrap();
        assert_eq!(g.ring.describe(), "Q[h] / (h^4 = 0), integral of h^3 = 1");
        let g = Space::product(Space::proj(1, "a"), Space::proj(1, "b"))
            .unwrap()
            .geometry()
            .unwrap();
        assert_eq!(
            g.ring.describe(),
            "Q[a, b] / (a^2 = 0, b^2 = 0), integral of a b = 1"
        );
        // P(O + O(1)) over P^2: relation xi(xi + h) = 0 stored as xi^2 = -h xi
        let g = pb_p2_o_o1().geometry().unwrap();
        assert_eq!(
            g.ring.describe(),
            "Q[h, xi] / (h^3 = 0, xi^2 = -h xi), integral of h^2 xi = 1"
        );
    }

    #[test]
    fn integrate_examples() {
        let p3 = p3();
        let ring = p3.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        assert_eq!(p3.integrate(&h.pow(3).unwrap()).unwrap(), qi(1));

        // push-forward: a point class a restricted to H_{1,1} integrates via
        // the ambient as (a+b) * a
        let h11 = milnor(1, 1);
        let ring = h11.geometry().unwrap().ring;
        let a = CohClass::generator(&ring, "a").unwrap();
        assert_eq!(h11.integrate(&a).unwrap(), qi(1));

        // fiber integration on the bundle
        let pb = pb_p2_o_o1();
        let ring = pb.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        let xi = CohClass::generator(&ring, "xi").unwrap();
        let top = xi.mul(&h.pow(2).unwrap()).unwrap();
        assert_eq!(pb.integrate(&top).unwrap(), qi(1));
    }

    #[test]
    fn integrate_degree_mismatch() {
        let p3 = p3();
        let ring = p3.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        assert!(matches!(
            p3.integrate(&h),
            Err(ChernError::Ring(RingError::DegreeMismatch { .. }))
        ));
    }

    #[test]
    fn tangent_examples() {
        // c(T_P3) = (1+h)^4
        let p3 = p3();
        let c = p3.tangent_chern().unwrap();
        let ring = c.ring().clone();
        let h = CohClass::generator(&ring, "h").unwrap();
        assert_eq!(c.degree_part(1), h.scale(&qi(4)));
        assert_eq!(c.degree_part(2), h.pow(2).unwrap().scale(&qi(6)));
        assert_eq!(c.degree_part(3), h.pow(3).unwrap().scale(&qi(4)));

        // Euler number of (P^1)^3 is 8
        assert_eq!(p1_cubed().euler_number().unwrap(), qi(8));

        // c1^3 of P(O + O(1)) over P^2 is 56
        let pb = pb_p2_o_o1();
        let c1 = pb.tangent_chern().unwrap().degree_part(1);
        assert_eq!(pb.integrate(&c1.pow(3).unwrap()).unwrap(), qi(56));
    }

    #[test]
    fn golden_chern_numbers() {
        assert_eq!(nums3(&p3()), (qi(64), qi(24), qi(4)));
        assert_eq!(nums3(&p2_x_p1()), (qi(54), qi(24), qi(6)));
        assert_eq!(nums3(&p1_cubed()), (qi(48), qi(24), qi(8)));
        assert_eq!(nums3(&bl_p3()), (qi(56), qi(24), qi(6)));
        assert_eq!(nums3(&pb_p2_o_o1()), (qi(56), qi(24), qi(6)));
    }

    #[test]
    fn golden_chern_numbers_alternate_presentations() {
        // product factors in the opposite order
        let p1_x_p2 =
            Space::product(Space::proj(1, "a"), Space::proj(2, "b")).unwrap();
        assert_eq!(nums3(&p1_x_p2), (qi(54), qi(24), qi(6)));
        let c = Space::product(
            Space::proj(1, "a"),
            Space::product(Space::proj(1, "b"), Space::proj(1, "c")).unwrap(),
        )
        .unwrap();
        assert_eq!(nums3(&c), (qi(48), qi(24), qi(8)));
        // P^3 presented as P(O^4) over the point
        let pt = Space::point();
        let ring = pt.geometry().unwrap().ring;
        let z = CohClass::zero(&ring);
        let p3_tower =
            Space::proj_bundle(pt, vec![z.clone(), z.clone(), z.clone(), z], "xi").unwrap();
        assert_eq!(nums3(&p3_tower), (qi(64), qi(24), qi(4)));
        // P(O + O(1)) = P(O + O(-1)) as a variety: twisting shifts xi
        let base = Space::proj(2, "h");
        let ring = base.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        let tw =
            Space::proj_bundle(base, vec![CohClass::zero(&ring), h.neg()], "xi").unwrap();
        assert_eq!(nums3(&tw), (qi(56), qi(24), qi(6)));
        // blow-up over the tower presentation of P^3
        let pt = Space::point();
        let ring = pt.geometry().unwrap().ring;
        let z = CohClass::zero(&ring);
        let p3_tower =
            Space::proj_bundle(pt, vec![z.clone(), z.clone(), z.clone(), z], "xi").unwrap();
        assert_eq!(
            nums3(&Space::blowup_point(p3_tower).unwrap()),
            (qi(56), qi(24), qi(6))
        );
    }

    #[test]
    fn dt_exponents() {
        assert_eq!(p3().dt_exponent().unwrap(), qi(-20));
        assert_eq!(p1_cubed().dt_exponent().unwrap(), qi(-16));
        assert_eq!(p2_x_p1().dt_exponent().unwrap(), qi(-18));
        assert_eq!(bl_p3().dt_exponent().unwrap(), qi(-18));
        assert_eq!(pb_p2_o_o1().dt_exponent().unwrap(), qi(-18));
        assert!(matches!(
            Space::proj(2, "h").dt_exponent(),
            Err(ChernError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn log_dt_exponents() {
        // s = 0 reduces to the absolute exponent
        let x = p3();
        let ring = x.geometry().unwrap().ring;
        let zero = CohClass::zero(&ring);
        assert_eq!(x.log_dt_exponent(&zero).unwrap(), x.dt_exponent().unwrap());

        // P^3 relative to a plane
        let h = CohClass::generator(&ring, "h").unwrap();
        assert_eq!(x.log_dt_exponent(&h).unwrap(), qi(-8));

        // the section of P(O + O(1)) with normal bundle O(-1) has class xi
        let pb = pb_p2_o_o1();
        let ring = pb.geometry().unwrap().ring;
        let xi = CohClass::generator(&ring, "xi").unwrap();
        assert_eq!(pb.log_dt_exponent(&xi).unwrap(), qi(-12));
    }

    #[test]
    fn euler_matches_combinatorial_count() {
        // products multiply
        assert_eq!(p2_x_p1().euler_number().unwrap(), qi(6));
        // a bundle of rank r multiplies the base count by r
        assert_eq!(pb_p2_o_o1().euler_number().unwrap(), qi(6));
        // blow-up at a point adds 2
        assert_eq!(bl_p3().euler_number().unwrap(), qi(6));
        // H_{n,m} with n >= m is a P^{n-1}-bundle over P^m: e = n (m+1)
        for (n, m) in [(1u32, 1u32), (2, 1), (2, 2), (3, 1), (3, 2)] {
            assert_eq!(
                milnor(n, m).euler_number().unwrap(),
                qi((n * (m + 1)) as i64),
                "H_{n},{m}"
            );
        }
    }

    #[test]
    fn hypersurface_euler_two_presentation_orders() {
        // same H_{n,m} with the ambient factors swapped
        for (n, m) in [(2u32, 1u32), (3, 2), (2, 2)] {
            let swapped = {
                let amb =
                    Space::product(Space::proj(m, "a"), Space::proj(n, "b")).unwrap();
                let ring = amb.geometry().unwrap().ring;
                let a = CohClass::generator(&ring, "a").unwrap();
                let b = CohClass::generator(&ring, "b").unwrap();
                Space::hypersurface(amb, a.add(&b).unwrap()).unwrap()
            };
            assert_eq!(
                milnor(n, m).euler_number().unwrap(),
                swapped.euler_number().unwrap()
            );
        }
    }

    #[test]
    fn c1c2_is_24_for_rational_threefolds() {
        let towers = [p3(), p2_x_p1(), p1_cubed(), bl_p3(), pb_p2_o_o1()];
        for x in towers {
            let n = x.chern_numbers(4).unwrap();
            assert_eq!(n[&vec![2u32, 1]], qi(24));
        }
        // also for a rank-2 bundle over P^1 x P^1 with a nontrivial twist
        let base = Space::product(Space::proj(1, "a"), Space::proj(1, "b")).unwrap();
        let ring = base.geometry().unwrap().ring;
        let a = CohClass::generator(&ring, "a").unwrap();
        let pb = Space::proj_bundle(base, vec![CohClass::zero(&ring), a], "xi").unwrap();
        let n = pb.chern_numbers(4).unwrap();
        assert_eq!(n[&vec![2u32, 1]], qi(24));
    }

    #[test]
    fn chern_numbers_respect_bound() {
        let p5 = Space::proj(5, "h");
        assert!(matches!(
            p5.chern_numbers(4),
            Err(ChernError::BoundExceeded { dim: 5, bound: 4 })
        ));
    }

    #[test]
    fn product_rejects_generator_collision() {
        let e = Space::product(Space::proj(1, "a"), Space::proj(1, "a"));
        assert!(matches!(
            e,
            Err(ChernError::Ring(RingError::DuplicateGenerator(_)))
        ));
    }

    #[test]
    fn geometry_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Space>();
        assert_send_sync::<Geometry>();
        assert_send_sync::<CohClass>();
    }
}
