//! The acceptance suite behind `cobord verify-all` and the `acceptance`
//! integration test: every check is exact (no tolerances beyond the stated
//! wall-clock limits), and each criterion reports one pass/fail line.

use std::time::Instant;

use num::Zero;

use crate::chern::{spaces, CohClass, Space};
use crate::cobordism::{
    blowup_relation, chern_matrix, class_from_parameter_polynomial, determinant,
    milnor_fgl_coefficients, verify_relation, CobordismClass,
};
use crate::dt;
use crate::fgl::FormalGroupLaw;
use crate::rat::{qi, Q};
use crate::vertex;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} - {} ({:.2}s){}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            if self.detail.is_empty() { String::new() } else { format!(" [{}]", self.detail) },
        )
    }
}

/// Knobs shared with the CLI configuration.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub fgl_degree: u32,
    pub qseries_order: u32,
    pub vertex_n_bound: u32,
    pub dim_bound: u32,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            fgl_degree: 6,
            qseries_order: 6,
            vertex_n_bound: 3,
            dim_bound: 4,
            seed: 1,
            jobs: 1,
        }
    }
}

fn run_criterion(
    id: u32,
    name: &'static str,
    limit_seconds: f64,
    body: impl FnOnce() -> Result<(), String>,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = body();
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) if seconds <= limit_seconds => {
            CriterionResult { id, name, passed: true, detail: String::new(), seconds }
        }
        Ok(()) => CriterionResult {
            id,
            name,
            passed: false,
            detail: format!("exceeded the {limit_seconds}s limit"),
            seconds,
        },
        Err(detail) => CriterionResult { id, name, passed: false, detail, seconds },
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

/// Criterion 1: formal group law axioms for the universal law at degree 6,
/// plus the boundary coefficients and full symmetry.
pub fn criterion_1(cfg: &VerifyConfig) -> CriterionResult {
    let d = cfg.fgl_degree;
    run_criterion(1, "universal formal group law axioms", 5.0, || {
        let f = FormalGroupLaw::universal(d);
        let report = f.check_axioms().map_err(|e| e.to_string())?;
        ensure(report.identity, "identity axiom failed")?;
        ensure(report.commutativity, "commutativity axiom failed")?;
        ensure(report.associativity, "associativity axiom failed")?;
        let one = f.coefficient(0, 1);
        ensure(one.num_terms() == 1 && one.coeff(&vec![0; one.table().len()]) == qi(1),
            "a_{0,1} != 1")?;
        for j in 2..=d {
            ensure(f.coefficient(0, j).is_zero(), "a_{0,j} != 0 for j > 1")?;
        }
        for i in 0..=d {
            for j in 0..=d - i {
                ensure(f.coefficient(i, j) == f.coefficient(j, i), "a_{ij} != a_{ji}")?;
            }
        }
        ensure(f.is_homogeneous(), "law is not homogeneous of weight -1")
    })
}

/// Criterion 2: dual-oracle agreement, Milnor-hypersurface coefficients
/// equal the logarithm-route coefficients under `p_k <-> [P^k]`.
pub fn criterion_2(cfg: &VerifyConfig) -> CriterionResult {
    let max = 4u32.min(cfg.dim_bound);
    let dim_bound = cfg.dim_bound;
    run_criterion(2, "Milnor hypersurfaces match the universal law", 10.0, || {
        let a = milnor_fgl_coefficients(max, dim_bound).map_err(|e| e.to_string())?;
        let f = FormalGroupLaw::universal(max + 1);
        for (&(i, j), class) in &a {
            let from_series = class_from_parameter_polynomial(&f.coefficient(i, j), i + j - 1)
                .map_err(|e| e.to_string())?;
            ensure(class == &from_series, &format!("a_({i},{j}) disagrees"))?;
        }
        let minus_p1 = CobordismClass::basis_element(&[1]).neg();
        ensure(a[&(1, 1)] == minus_p1, "a_(1,1) != -[P^1]")
    })
}

/// Criterion 3: difference-series suite. `F(u, chi(u)) = 0`, the leading
/// shape of `F^-`, the boundary `b` coefficients, and the two proof
/// identities.
pub fn criterion_3(cfg: &VerifyConfig) -> CriterionResult {
    let d = cfg.fgl_degree;
    run_criterion(3, "inverse and difference series identities", 5.0, || {
        let f = FormalGroupLaw::universal(d);
        ensure(f.plug_chi().map_err(|e| e.to_string())?.is_zero(), "F(u, chi(u)) != 0")?;
        let diff = f.difference().map_err(|e| e.to_string())?;
        let c = |i: u32, j: u32| diff.coeff_of(&[("u", i), ("v", j)]).unwrap();
        ensure(c(0, 0).is_zero(), "b_{0,0} != 0")?;
        let one_poly = crate::series::MultiSeries::one(diff.table(), diff.trunc());
        ensure(c(1, 0) == one_poly, "b_{1,0} != 1")?;
        ensure(c(0, 1) == one_poly.neg(), "b_{0,1} != -1")?;
        // F^- = u - v mod (u,v)^2 means no other coefficients in degree <= 1
        for (e, _) in diff.terms() {
            let udeg = e[diff.table().index_of("u").unwrap()];
            let vdeg = e[diff.table().index_of("v").unwrap()];
            if udeg + vdeg <= 1 {
                ensure((udeg, vdeg) == (1, 0) || (udeg, vdeg) == (0, 1),
                    "F^- has an unexpected term below degree 2")?;
            }
        }
        let report = f.check_difference_identities().map_err(|e| e.to_string())?;
        ensure(report.translation_invariance, "F^-(F(u,w),F(v,w)) != F^-(u,v)")?;
        ensure(report.sum_compatibility,
            "F(F^-(u1,v1),F^-(u2,v2)) != F^-(F(u1,u2),F(v1,v2))")
    })
}

/// Criterion 4: the golden Chern-number table, each space through two
/// presentations.
pub fn criterion_4(cfg: &VerifyConfig) -> CriterionResult {
    let bound = cfg.dim_bound;
    run_criterion(4, "Chern-number golden table", 5.0, || {
        let golden: Vec<(Space, Space, (i64, i64, i64))> = vec![
            (spaces::p3(), tower_p3(), (64, 24, 4)),
            (spaces::p2_x_p1(), swap_p2_x_p1(), (54, 24, 6)),
            (spaces::p1_cubed(), reassoc_p1_cubed(), (48, 24, 8)),
            (spaces::bl_p3(), Space::blowup_point(tower_p3()).unwrap(), (56, 24, 6)),
            (spaces::pb_p2_o_o1(), twisted_pb(), (56, 24, 6)),
        ];
        for (first, second, (c111, c21, c3)) in golden {
            for x in [&first, &second] {
                let n = x.chern_numbers(bound).map_err(|e| e.to_string())?;
                ensure(n[&vec![1u32, 1, 1]] == qi(c111), "c1^3 mismatch")?;
                ensure(n[&vec![2u32, 1]] == qi(c21), "c1c2 mismatch")?;
                ensure(n[&vec![3u32]] == qi(c3), "c3 mismatch")?;
            }
        }
        Ok(())
    })
}

fn tower_p3() -> Space {
    let pt = Space::point();
    let ring = pt.geometry().unwrap().ring;
    let z = CohClass::zero(&ring);
    Space::proj_bundle(pt, vec![z.clone(), z.clone(), z.clone(), z], "xi").unwrap()
}

fn swap_p2_x_p1() -> Space {
    Space::product(Space::proj(1, "a"), Space::proj(2, "b")).unwrap()
}

fn reassoc_p1_cubed() -> Space {
    Space::product(
        Space::proj(1, "a"),
        Space::product(Space::proj(1, "b"), Space::proj(1, "c")).unwrap(),
    )
    .unwrap()
}

fn twisted_pb() -> Space {
    // P(O + O(-1)) over P^2 is the same variety as P(O + O(1))
    let base = Space::proj(2, "h");
    let ring = base.geometry().unwrap().ring;
    let h = CohClass::generator(&ring, "h").unwrap();
    Space::proj_bundle(base, vec![CohClass::zero(&ring), h.neg()], "xi").unwrap()
}

/// Criterion 5: double point / blow-up relation residuals and the
/// invertibility of the Chern-number matrices.
pub fn criterion_5(cfg: &VerifyConfig) -> CriterionResult {
    let bound = cfg.dim_bound;
    run_criterion(5, "blow-up double point relations", 5.0, || {
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let datum = blowup_relation(&x).map_err(|e| e.to_string())?;
            let residual = verify_relation(&datum, bound).map_err(|e| e.to_string())?;
            ensure(residual.is_zero(), &format!("nonzero residual {residual}"))?;
        }
        for d in [3u32, 4] {
            let m = chern_matrix(d, bound).map_err(|e| e.to_string())?;
            ensure(!determinant(&m).is_zero(), "singular Chern-number matrix")?;
        }
        Ok(())
    })
}

/// Criterion 6: absolute degree-0 DT theory at desk scale. The three
/// exponents, and the localization oracle against `M(-q)^{n(X)}` for
/// `n <= 3` with integrality and 3-way weight-independence.
pub fn criterion_6(cfg: &VerifyConfig) -> CriterionResult {
    let order = cfg.vertex_n_bound;
    let opts = vertex::VertexOptions {
        seed: cfg.seed,
        jobs: cfg.jobs,
        draws: 3,
        ..Default::default()
    };
    run_criterion(6, "absolute DT partition functions vs the vertex", 120.0, || {
        let want: Vec<(Space, i64)> = vec![
            (spaces::p3(), -20),
            (spaces::p1_cubed(), -16),
            (spaces::p2_x_p1(), -18),
        ];
        for (x, e) in &want {
            let expo = x.dt_exponent().map_err(|e| e.to_string())?;
            ensure(expo == qi(*e), &format!("dt exponent of {} != {e}", crate::parse::space_expr(x)))?;
            let z = dt::z_absolute(x, order).map_err(|e| e.to_string())?;
            for n in 0..=order {
                let ndt = vertex::n_dt(x, n, &opts).map_err(|e| e.to_string())?;
                ensure(
                    z.coeff(n) == Q::from_integer(ndt.clone()),
                    &format!(
                        "vertex N_{n} = {ndt} != [q^{n}] M(-q)^{e} = {}",
                        z.coeff(n)
                    ),
                )?;
            }
        }
        Ok(())
    })
}

/// Criterion 7: relative theory. The logarithmic exponent of `P^3/P^2`,
/// the degeneration residual with `n(P/S_-) = -12`, and multiplicativity
/// across every blow-up datum.
pub fn criterion_7(_cfg: &VerifyConfig) -> CriterionResult {
    run_criterion(7, "relative exponents and degeneration formula", 5.0, || {
        let x = spaces::p3();
        let ring = x.geometry().unwrap().ring;
        let h = CohClass::generator(&ring, "h").unwrap();
        ensure(x.log_dt_exponent(&h).map_err(|e| e.to_string())? == qi(-8),
            "n(P^3/P^2) != -8")?;
        // the cap contribution is P(O + O(1)) relative to its negative section
        let pb = spaces::pb_p2_o_o1();
        let ring = pb.geometry().unwrap().ring;
        let xi = CohClass::generator(&ring, "xi").unwrap();
        ensure(pb.log_dt_exponent(&xi).map_err(|e| e.to_string())? == qi(-12),
            "n(P/S_-) != -12")?;
        ensure(dt::check_degeneration(&x, &h).map_err(|e| e.to_string())?.is_zero(),
            "degeneration residual for P^3/P^2 != 0")?;
        for x in [spaces::p3(), spaces::p2_x_p1(), spaces::p1_cubed()] {
            let datum = blowup_relation(&x).map_err(|e| e.to_string())?;
            let r = dt::check_dp_multiplicativity(&datum).map_err(|e| e.to_string())?;
            ensure(r.is_zero(), "DT multiplicativity residual != 0")?;
        }
        Ok(())
    })
}

/// Criterion 8: MacMahon coefficients against the independent
/// plane-partition enumeration.
pub fn criterion_8(_cfg: &VerifyConfig) -> CriterionResult {
    run_criterion(8, "MacMahon series vs plane-partition counts", 5.0, || {
        let m = dt::macmahon(5);
        let want = [1i64, 1, 3, 6, 13, 24];
        for n in 0..=5u32 {
            ensure(m.coeff(n) == qi(want[n as usize]), "MacMahon coefficient mismatch")?;
            let count = vertex::enumerate(n, 6).map_err(|e| e.to_string())?.len() as i64;
            ensure(m.coeff(n) == qi(count), "enumeration disagrees with MacMahon")?;
        }
        Ok(())
    })
}

/// Runs the whole acceptance suite in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_values() {
        let cfg = VerifyConfig::default();
        assert_eq!(cfg.fgl_degree, 6);
        assert_eq!(cfg.qseries_order, 6);
        assert_eq!(cfg.vertex_n_bound, 3);
        assert_eq!(cfg.dim_bound, 4);
    }
}
