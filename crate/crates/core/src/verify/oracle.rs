//! Independent oracles: central finite differences for jets and classical
//! Runge–Kutta integration for the closed-form ODE profiles.

use serde::Serialize;

use crate::catalog::ode::{CmcProfile, OscVariant, OscillatoryProfile};
use crate::error::{Error, Result};
use crate::geometry::{Interval, Rect};
use crate::jets::{Field1, Field2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdDiscrepancy {
    /// Largest `|fd - jet|` over the five derivative components.
    pub max_abs: f64,
    /// Largest `|fd - jet| / (1 + |jet|)`.
    pub max_scaled: f64,
}

/// Compares `dx, dy, dxx, dxy, dyy` of the jet at `p` with central
/// differences of step `h`. `p` must be at least `2h` inside `domain`.
pub fn finite_difference_check(field: &Field2, domain: Rect, p: [f64; 2], h: f64) -> Result<FdDiscrepancy> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if domain.margin(p) < 2.0 * h {
        return Err(Error::BoundaryProximity { u: p[0], v: p[1] });
    }
    let f = |du: f64, dv: f64| field.value([p[0] + du, p[1] + dv]);
    let jet = field.jet(p)?;
    let f0 = f(0.0, 0.0)?;
    let (fpx, fmx) = (f(h, 0.0)?, f(-h, 0.0)?);
    let (fpy, fmy) = (f(0.0, h)?, f(0.0, -h)?);
    let (fpp, fpm, fmp, fmm) = (f(h, h)?, f(h, -h)?, f(-h, h)?, f(-h, -h)?);
    let h2 = h * h;
    let fd = [
        (fpx - fmx) / (2.0 * h),
        (fpy - fmy) / (2.0 * h),
        (fpx - 2.0 * f0 + fmx) / h2,
        (fpp - fpm - fmp + fmm) / (4.0 * h2),
        (fpy - 2.0 * f0 + fmy) / h2,
    ];
    let exact = [jet.dx, jet.dy, jet.dxx, jet.dxy, jet.dyy];
    let mut out = FdDiscrepancy {
        max_abs: 0.0,
        max_scaled: 0.0,
    };
    for (a, b) in fd.iter().zip(exact) {
        let d = (a - b).abs();
        out.max_abs = out.max_abs.max(d);
        out.max_scaled = out.max_scaled.max(d / (1.0 + b.abs()));
    }
    Ok(out)
}

/// The two second-order ODEs with closed-form solutions in the catalog.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OdeKind {
    /// `(1 + a^2) f'' + 2 a c1 f' + c1^2 f = 0`.
    Type1Minimal { c1: f64, a: f64, c2: f64, c3: f64 },
    /// `f'' = 2 H0 c1^2 f'^3`.
    Type2Cmc { h0: f64, c1: f64, c2: f64, c3: f64 },
}

impl OdeKind {
    pub fn name(&self) -> &'static str {
        match self {
            OdeKind::Type1Minimal { .. } => "afs1-minimal",
            OdeKind::Type2Cmc { .. } => "afs2-cmc",
        }
    }
}

/// Integrates the ODE with classical RK4 from the closed form's value and
/// slope at `range.lo`; returns the largest `|numeric - closed form|` over
/// the `steps + 1` nodes.
pub fn ode_crosscheck(ode: OdeKind, range: Interval, steps: usize) -> Result<f64> {
    if steps == 0 || !(range.lo < range.hi) {
        return Err(Error::InvalidArgument("need steps >= 1 and lo < hi".into()));
    }
    let (closed, rhs): (Field1, Box<dyn Fn(f64, f64) -> f64>) = match ode {
        OdeKind::Type1Minimal { c1, a, c2, c3 } => {
            let p = OscillatoryProfile::new(c1, a, (c2, c3), OscVariant::Corrected)?;
            (p.field(), Box::new(move |f, df| p.second_derivative(f, df)))
        }
        OdeKind::Type2Cmc { h0, c1, c2, c3 } => {
            let p = CmcProfile::new(h0, c1, c2, c3)?;
            // the radicand is affine in u, so the ends bound it
            for u in [range.lo, range.hi] {
                if !(p.radicand(u) > 0.0) {
                    return Err(Error::BranchDomain {
                        function: "sqrt",
                        value: p.radicand(u),
                    });
                }
            }
            (p.field(), Box::new(move |_, df| p.second_derivative(df)))
        }
    };
    let h = range.width() / steps as f64;
    let (f0, d0, _) = closed.derivatives(range.lo)?;
    let mut y = [f0, d0];
    let deriv = |s: [f64; 2]| [s[1], rhs(s[0], s[1])];
    let mut worst: f64 = 0.0;
    for i in 1..=steps {
        let k1 = deriv(y);
        let k2 = deriv([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = deriv([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = deriv([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = if i == steps { range.hi } else { range.lo + h * i as f64 };
        worst = worst.max((y[0] - closed.value(t)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Rect {
        Rect::new((-1.0, 2.0), (-1.0, 2.0))
    }

    #[test]
    fn quadratic_has_tiny_discrepancy() {
        let w = Field2::new(|x, y| Ok(x * x + y * y));
        let d = finite_difference_check(&w, square(), [0.4, 0.9], 1e-4).unwrap();
        assert!(d.max_abs <= 1e-7, "{d:?}");
    }

    #[test]
    fn exp_sin_within_oracle_tolerance() {
        let w = Field2::new(|x, y| Ok(x.exp() * y.sin()));
        let d = finite_difference_check(&w, square(), [0.3, 0.7], 1e-4).unwrap();
        assert!(d.max_scaled <= 1e-5, "{d:?}");
    }

    #[test]
    fn plane_second_differences_cancel() {
        let w = Field2::new(|x, y| Ok(x * 3.0 - y * 2.0 + 1.0));
        let d = finite_difference_check(&w, square(), [0.5, 0.5], 1e-4).unwrap();
        assert!(d.max_abs <= 1e-10, "{d:?}");
    }

    #[test]
    fn boundary_is_rejected() {
        let w = Field2::new(|x, _| Ok(x));
        let err = finite_difference_check(&w, square(), [-1.0 + 1e-4, 0.0], 1e-4).unwrap_err();
        assert!(matches!(err, Error::BoundaryProximity { .. }));
    }

    #[test]
    fn rk4_matches_closed_forms() {
        let e = ode_crosscheck(
            OdeKind::Type1Minimal {
                c1: 1.0,
                a: 1.0,
                c2: 1.0,
                c3: 0.0,
            },
            Interval::new(0.0, 1.0),
            1000,
        )
        .unwrap();
        assert!(e <= 1e-6, "{e}");
        let e = ode_crosscheck(
            OdeKind::Type2Cmc {
                h0: 1.0,
                c1: 1.0,
                c2: 1.0,
                c3: 0.0,
            },
            Interval::new(-1.0, 0.0),
            1000,
        )
        .unwrap();
        assert!(e <= 1e-6, "{e}");
    }

    #[test]
    fn radicand_violation_is_an_error() {
        let r = ode_crosscheck(
            OdeKind::Type2Cmc {
                h0: 1.0,
                c1: 1.0,
                c2: 1.0,
                c3: 0.0,
            },
            Interval::new(0.0, 1.0),
            10,
        );
        assert!(r.is_err());
    }
}
