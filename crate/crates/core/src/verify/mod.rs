//! Grid sampling, constancy checks and cross-checks, with deterministic reports.
//!
//! Grids are evaluated in parallel but always collected in row-major order
//! (first coordinate outer, second inner); every reduction walks that order,
//! so a report depends only on its inputs.

pub mod oracle;
pub mod probe;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, Params};
use crate::error::{Error, Result};
use crate::factorable::{AffineFactorable, FactorableKind};
use crate::geometry::{parametric_curvatures, CurvaturePair, Motion, ParametricSurface, Rect, SurfaceChart};
use crate::rng::SplitMix64;

pub use oracle::{finite_difference_check, ode_crosscheck, FdDiscrepancy, OdeKind};
pub use probe::{probe_instances, probe_nonexistence, ProbeKind, ProbeReport};

/// Default tolerance for constancy checks.
pub const TOL_CONST: f64 = 1e-9;
/// Default tolerance for specialised-vs-generic formula comparison.
pub const TOL_CROSS: f64 = 1e-10;
/// Cross-validation skips type-2 points whose regularity value is below this.
pub const CROSS_REGULARITY: f64 = 1e-3;
const MIN_SAMPLES: usize = 4;

/// Anything whose curvature can be sampled over a rectangle.
pub trait Surface: Sync {
    fn curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair>;
    fn position(&self, p: [f64; 2]) -> Result<[f64; 3]>;
    fn domain(&self) -> Rect;
}

impl Surface for SurfaceChart {
    fn curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair> {
        SurfaceChart::curvatures(self, p)
    }
    fn position(&self, p: [f64; 2]) -> Result<[f64; 3]> {
        SurfaceChart::position(self, p)
    }
    fn domain(&self) -> Rect {
        self.domain
    }
}

impl Surface for ParametricSurface {
    fn curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair> {
        parametric_curvatures(self, p)
    }
    fn position(&self, p: [f64; 2]) -> Result<[f64; 3]> {
        ParametricSurface::position(self, p)
    }
    fn domain(&self) -> Rect {
        self.domain
    }
}

/// Uses the generic chart route, not the specialised formulas.
impl Surface for AffineFactorable {
    fn curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair> {
        self.chart().curvatures(p)
    }
    fn position(&self, p: [f64; 2]) -> Result<[f64; 3]> {
        self.chart().position(p)
    }
    fn domain(&self) -> Rect {
        self.domain
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantity {
    K,
    H,
    #[serde(rename = "discrepancy")]
    Discrepancy,
}

impl Quantity {
    pub fn of(&self, c: CurvaturePair) -> f64 {
        match self {
            Quantity::K => c.k,
            Quantity::H => c.h,
            Quantity::Discrepancy => f64::NAN,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub point: [f64; 2],
    pub curvatures: CurvaturePair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Excluded {
    pub point: [f64; 2],
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub domain: Rect,
    pub n: usize,
    pub samples: Vec<Sample>,
    pub excluded: Vec<Excluded>,
}

impl Grid {
    pub fn values(&self, q: Quantity) -> Vec<f64> {
        self.samples.iter().map(|s| q.of(s.curvatures)).collect()
    }

    pub fn max_abs(&self, q: Quantity) -> f64 {
        self.values(q).into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Row-major `n × n` grid points of `domain`.
pub fn grid_points(domain: Rect, n: usize) -> Vec<[f64; 2]> {
    let us: Vec<f64> = domain.u.nodes(n).collect();
    let vs: Vec<f64> = domain.v.nodes(n).collect();
    us.iter().flat_map(|&u| vs.iter().map(move |&v| [u, v])).collect()
}

pub fn sample_grid<S: Surface + ?Sized>(s: &S, domain: Rect, n: usize) -> Result<Grid> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {n}")));
    }
    let evaluated: Vec<_> = grid_points(domain, n)
        .into_par_iter()
        .map(|p| (p, s.curvatures(p)))
        .collect();
    let mut samples = Vec::with_capacity(evaluated.len());
    let mut excluded = Vec::new();
    for (point, r) in evaluated {
        match r {
            Ok(c) if c.k.is_finite() && c.h.is_finite() => samples.push(Sample { point, curvatures: c }),
            Ok(_) => excluded.push(Excluded {
                point,
                reason: "non-finite curvature".into(),
            }),
            Err(e) => excluded.push(Excluded {
                point,
                reason: e.to_string(),
            }),
        }
    }
    Ok(Grid {
        domain,
        n,
        samples,
        excluded,
    })
}

/// Serialised as a JSON object with exactly these fields, in this order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub domain: Rect,
    pub grid: usize,
    pub quantity: Quantity,
    pub target: Option<f64>,
    pub max_abs_deviation: f64,
    pub mean: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub excluded_points: usize,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are serialisable")
    }
}

/// `(max |v - reference|, mean)` with the reference being `target` or the mean.
pub fn deviation(values: &[f64], target: Option<f64>) -> Result<(f64, f64)> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: values.len(),
        });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let reference = target.unwrap_or(mean);
    // NaN must not be swallowed by f64::max
    let max = values.iter().fold(0.0f64, |m, v| {
        let d = (v - reference).abs();
        if d.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(d)
        }
    });
    Ok((max, mean))
}

pub fn check_constancy(
    subject: &str,
    grid: &Grid,
    quantity: Quantity,
    target: Option<f64>,
    tol: f64,
) -> Result<VerificationReport> {
    let (max, mean) = deviation(&grid.values(quantity), target)?;
    let mut notes = Vec::new();
    if !grid.excluded.is_empty() {
        notes.push(format!(
            "{} grid points excluded, first at ({}, {}): {}",
            grid.excluded.len(),
            grid.excluded[0].point[0],
            grid.excluded[0].point[1],
            grid.excluded[0].reason
        ));
    }
    Ok(VerificationReport {
        subject: subject.to_string(),
        domain: grid.domain,
        grid: grid.n,
        quantity,
        target,
        max_abs_deviation: max,
        mean,
        tolerance: tol,
        pass: max <= tol,
        excluded_points: grid.excluded.len(),
        notes,
    })
}

/// Builds a catalog family, samples it on `domain` (default: the family's
/// own) and checks the claimed quantity against the derived constant.
pub fn verify_family(
    id: &str,
    params: &Params,
    domain: Option<Rect>,
    n: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let family = catalog::instantiate(id, params)?;
    let domain = domain.unwrap_or(family.surface.domain);
    let grid = sample_grid(&family.surface, domain, n)?;
    let claim = family.profile.claim;
    let target = family.profile.derived_value;
    let mut report = check_constancy(&family.subject(), &grid, claim.quantity(), target, tol)?;

    let mut notes = Vec::new();
    notes.push(format!("claim: {}", claim.name()));
    if let (Some(c), Some(d)) = (family.profile.claimed_value, target) {
        notes.push(format!("claimed value {c}, derived value {d}"));
        if (c - d).abs() > tol {
            notes.push(format!(
                "discrepancy: derived constant {d} differs from claimed {c} by {:e}",
                (c - d).abs()
            ));
        }
    }
    if !report.pass {
        let q = claim.quantity();
        notes.push(format!(
            "discrepancy: {q:?} is not constant on the domain (max |{q:?}| = {:e})",
            grid.max_abs(q)
        ));
    }
    if family.def.as_printed {
        notes.push("as_printed: formula reproduced verbatim; see discrepancy notes".into());
    }
    notes.append(&mut report.notes);
    report.notes = notes;
    Ok(report)
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / 1f64.max(a.abs()).max(b.abs())
    }
}

/// Specialised formulas against the generic chart route at `n_points`
/// seeded random points of the surface's domain.
pub fn cross_validate(s: &AffineFactorable, n_points: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let kind = match s.kind {
        FactorableKind::Type1 => "type-1",
        FactorableKind::Type2 => "type-2",
    };
    cross_validate_as(&format!("cross-validate({kind}, seed={seed})"), s, n_points, seed, tol)
}

pub fn cross_validate_as(
    subject: &str,
    s: &AffineFactorable,
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = SplitMix64::new(seed);
    let d = s.domain;
    let chart = s.chart();
    let mut diffs = Vec::with_capacity(n_points);
    let mut excluded = 0;
    let mut first_reason = None;
    let max_attempts = 50 * n_points.max(1);
    let mut attempts = 0;
    while diffs.len() < n_points && attempts < max_attempts {
        attempts += 1;
        let p = [rng.uniform(d.u.lo, d.u.hi), rng.uniform(d.v.lo, d.v.hi)];
        if s.kind == FactorableKind::Type2 {
            match s.regularity(p) {
                Ok(r) if r.abs() >= CROSS_REGULARITY => {}
                _ => {
                    excluded += 1;
                    continue;
                }
            }
        }
        match (s.specialized_curvatures(p), chart.curvatures(p)) {
            (Ok(a), Ok(b)) => diffs.push(relative_difference(a.k, b.k).max(relative_difference(a.h, b.h))),
            (Err(e), _) | (_, Err(e)) => {
                excluded += 1;
                first_reason.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let (max, mean) = deviation(&diffs, Some(0.0))?;
    let mut notes = vec!["relative difference |a - b| / max(1, |a|, |b|) over K and H".to_string()];
    if excluded > 0 {
        notes.push(format!("{excluded} drawn points skipped (regularity below {CROSS_REGULARITY:e} or evaluation error)"));
    }
    if let Some(r) = first_reason {
        notes.push(format!("first evaluation error: {r}"));
    }
    Ok(VerificationReport {
        subject: subject.to_string(),
        domain: d,
        grid: diffs.len(),
        quantity: Quantity::Discrepancy,
        target: Some(0.0),
        max_abs_deviation: max,
        mean,
        tolerance: tol,
        pass: max <= tol,
        excluded_points: excluded,
        notes,
    })
}

/// Largest `|ΔK|` and `|ΔH|` between `r` and `m ∘ r` at identical parameters.
pub fn motion_invariance_check(
    r: &ParametricSurface,
    m: &Motion,
    domain: Rect,
    n: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid size must be at least 2, got {n}")));
    }
    let moved = r.moved(m);
    let diffs: Vec<f64> = grid_points(domain, n)
        .into_par_iter()
        .map(|p| {
            let a = parametric_curvatures(r, p)?;
            let b = parametric_curvatures(&moved, p)?;
            Ok((a.k - b.k).abs().max((a.h - b.h).abs()))
        })
        .collect::<Result<_>>()?;
    let (max, mean) = deviation(&diffs, Some(0.0))?;
    Ok(VerificationReport {
        subject: format!(
            "motion(theta={}, t=({}, {}, {}), s=({}, {}))",
            m.theta, m.t1, m.t2, m.t3, m.s4, m.s5
        ),
        domain,
        grid: n,
        quantity: Quantity::Discrepancy,
        target: Some(0.0),
        max_abs_deviation: max,
        mean,
        tolerance: tol,
        pass: max <= tol,
        excluded_points: 0,
        notes: vec!["max(|dK|, |dH|) per point".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorable::generator::RandomInstance;
    use crate::geometry::Orientation;
    use crate::jets::Field2;

    fn plane() -> SurfaceChart {
        SurfaceChart::new(
            Orientation::ZOverXy,
            Field2::new(|x, y| Ok(x * 3.0 + y * 2.0)),
            Rect::new((0.0, 1.0), (0.0, 1.0)),
        )
    }

    #[test]
    fn plane_grid_is_flat_and_minimal() {
        let g = sample_grid(&plane(), plane().domain, 3).unwrap();
        assert_eq!(g.samples.len(), 9);
        assert!(g.samples.iter().all(|s| s.curvatures == CurvaturePair::new(0.0, 0.0)));
        assert!(sample_grid(&plane(), plane().domain, 1).is_err());
    }

    #[test]
    fn grid_is_row_major() {
        let pts = grid_points(Rect::new((0.0, 1.0), (10.0, 11.0)), 2);
        assert_eq!(pts, vec![[0.0, 10.0], [0.0, 11.0], [1.0, 10.0], [1.0, 11.0]]);
    }

    #[test]
    fn saddle_on_unit_square() {
        let s = catalog::build_family("AFS1.K.saddle", &Params::new()).unwrap();
        let g = sample_grid(&s, Rect::new((0.0, 1.0), (0.0, 1.0)), 21).unwrap();
        assert_eq!(g.samples.len(), 441);
        assert!(g.samples.iter().all(|s| (s.curvatures.k + 1.0).abs() < 1e-12));
    }

    #[test]
    fn tan_pole_is_excluded() {
        let s = catalog::build_family("FS2.min.tan", &Params::new()).unwrap();
        let d = Rect::new((0.5, 1.5), (0.0, std::f64::consts::FRAC_PI_2));
        let g = sample_grid(&s, d, 5).unwrap();
        assert_eq!(g.excluded.len(), 5);
        assert!(g.excluded.iter().all(|e| e.point[1] == std::f64::consts::FRAC_PI_2));
    }

    #[test]
    fn constancy_arithmetic() {
        let (max, mean) = deviation(&[2.0; 5], Some(2.0)).unwrap();
        assert_eq!((max, mean), (0.0, 2.0));
        let (max, mean) = deviation(&[1.0, 1.1, 1.0, 1.1], None).unwrap();
        assert!((mean - 1.05).abs() < 1e-15);
        assert!((max - 0.05).abs() < 1e-15);
        assert!(max > 1e-3);
        assert!(matches!(deviation(&[1.0; 3], None), Err(Error::TooFewSamples { needed: 4, got: 3 })));
        let (max, _) = deviation(&[1.0, f64::NAN, 1.0, 1.0], Some(1.0)).unwrap();
        assert!(max.is_nan());
    }

    #[test]
    fn sqrt_family_passes_against_derived_constant() {
        let r = verify_family("AFS2.cmc.sqrt", &Params::new(), None, 21, TOL_CONST).unwrap();
        assert!(r.pass);
        assert!((r.target.unwrap() + 1.0).abs() < 1e-12);
        assert!(r.notes.iter().any(|n| n.starts_with("discrepancy")));
        assert!(r.notes.iter().any(|n| n.starts_with("as_printed")));
    }

    #[test]
    fn plane_cross_validation_is_exact() {
        let s = catalog::build_family("AFS2.min.plane", &Params::new()).unwrap();
        let r = cross_validate(&s, 20, 3, TOL_CROSS).unwrap();
        assert_eq!(r.max_abs_deviation, 0.0);
    }

    #[test]
    fn random_type2_cross_validation() {
        let mut rng = SplitMix64::new(7);
        let inst = RandomInstance::draw(FactorableKind::Type2, &mut rng);
        let r = cross_validate(&inst.surface, 100, 7, TOL_CROSS).unwrap();
        assert!(r.pass, "{}: {}", inst.describe(), r.max_abs_deviation);
    }

    #[test]
    fn motion_examples() {
        let chart = SurfaceChart::new(
            Orientation::ZOverXy,
            Field2::new(|x, y| Ok(x * y)),
            Rect::new((-1.0, 1.0), (-1.0, 1.0)),
        );
        let r = chart.to_parametric();
        let id = motion_invariance_check(&r, &Motion::identity(), chart.domain, 7, 0.0).unwrap();
        assert!(id.pass);
        let m = Motion {
            theta: std::f64::consts::FRAC_PI_3,
            t1: 1.0,
            t2: -2.0,
            t3: 5.0,
            s4: 0.7,
            s5: -0.3,
        };
        let rep = motion_invariance_check(&r, &m, chart.domain, 11, 1e-9).unwrap();
        assert!(rep.pass, "{}", rep.max_abs_deviation);
    }

    #[test]
    fn report_json_has_exact_fields() {
        let r = verify_family("FS1.min.xy", &Params::new(), None, 5, TOL_CONST).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut want = vec![
            "subject",
            "domain",
            "grid",
            "quantity",
            "target",
            "max_abs_deviation",
            "mean",
            "tolerance",
            "pass",
            "excluded_points",
            "notes",
        ];
        want.sort_unstable();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, want);
    }
}
