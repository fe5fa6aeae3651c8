//! Affine factorable surfaces.
//!
//! Type 1 is the graph `z = f1(x) f2(y + a x)`, type 2 the graph
//! `x = f1(y + a z) f2(z)`. With `a = 0` both reduce to ordinary factorable
//! surfaces. The specialised curvature formulas here are written in terms of
//! the one-variable derivatives of `f1` and `f2`; [`as_chart`] gives the same
//! surface as a generic Monge chart so the two routes can be compared.

pub mod generator;

use crate::error::{Error, Result};
use crate::geometry::{CurvaturePair, Orientation, Rect, SurfaceChart, EPS_ADM};
use crate::jets::{Field1, Field2, Jet2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorableKind {
    Type1,
    Type2,
}

impl FactorableKind {
    pub fn orientation(&self) -> Orientation {
        match self {
            FactorableKind::Type1 => Orientation::ZOverXy,
            FactorableKind::Type2 => Orientation::XOverYz,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AffineFactorable {
    pub kind: FactorableKind,
    pub f1: Field1,
    pub f2: Field1,
    pub a: f64,
    /// Rectangle in chart coordinates: `(x, y)` for type 1, `(y, z)` for type 2.
    pub domain: Rect,
}

/// `f`, `f'`, `f''` at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

impl AffineFactorable {
    pub fn type1(f1: Field1, f2: Field1, a: f64, domain: Rect) -> Self {
        Self {
            kind: FactorableKind::Type1,
            f1,
            f2,
            a,
            domain,
        }
    }

    pub fn type2(f1: Field1, f2: Field1, a: f64, domain: Rect) -> Self {
        Self {
            kind: FactorableKind::Type2,
            f1,
            f2,
            a,
            domain,
        }
    }

    /// Chart point to `(u1, u2)`.
    pub fn substitute(&self, p: [f64; 2]) -> (f64, f64) {
        match self.kind {
            FactorableKind::Type1 => (p[0], p[1] + self.a * p[0]),
            FactorableKind::Type2 => (p[0] + self.a * p[1], p[1]),
        }
    }

    pub fn factors(&self, p: [f64; 2]) -> Result<(Taylor, Taylor)> {
        let (u1, u2) = self.substitute(p);
        let (f, d1, d2) = self.f1.derivatives(u1)?;
        let t1 = Taylor { f, d1, d2 };
        let (f, d1, d2) = self.f2.derivatives(u2)?;
        let t2 = Taylor { f, d1, d2 };
        Ok((t1, t2))
    }

    /// `a f1' f2 + f1 f2'`; for type 2 this equals `w_z`.
    pub fn regularity(&self, p: [f64; 2]) -> Result<f64> {
        let (g, h) = self.factors(p)?;
        Ok(self.a * g.d1 * h.f + g.f * h.d1)
    }

    /// Regularity reaches `floor` at every node of an `n × n` grid over `d`
    /// and keeps one sign, so no zero hides between nodes.
    pub fn regular_on(&self, d: Rect, floor: f64, n: usize) -> bool {
        let mut sign = 0.0;
        d.u.nodes(n).all(|u| {
            d.v.nodes(n).all(|v| match self.regularity([u, v]) {
                Ok(r) if r.abs() >= floor => {
                    if sign == 0.0 {
                        sign = r.signum();
                    }
                    r.signum() == sign
                }
                _ => false,
            })
        })
    }

    pub fn height(&self) -> Field2 {
        let (f1, f2, a) = (self.f1.clone(), self.f2.clone(), self.a);
        match self.kind {
            FactorableKind::Type1 => Field2::new(move |x, y| {
                let u2 = y + x * a;
                Ok(f1.eval(x)? * f2.eval(u2)?)
            }),
            FactorableKind::Type2 => Field2::new(move |y, z| {
                let u1 = y + z * a;
                Ok(f1.eval(u1)? * f2.eval(z)?)
            }),
        }
    }

    pub fn chart(&self) -> SurfaceChart {
        as_chart(self)
    }

    /// Curvatures via the specialised formula of the surface's type.
    pub fn specialized_curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair> {
        match self.kind {
            FactorableKind::Type1 => afs1_curvatures(self, p),
            FactorableKind::Type2 => afs2_curvatures(self, p),
        }
    }
}

pub fn as_chart(s: &AffineFactorable) -> SurfaceChart {
    SurfaceChart::new(s.kind.orientation(), s.height(), s.domain)
}

/// Type 1, with `u1 = x`, `u2 = y + a x`:
/// `K = f1 f2 f1'' f2'' - (f1' f2')^2`,
/// `2H = (1 + a^2) f1 f2'' + 2a f1' f2' + f1'' f2`.
pub fn afs1_curvatures(s: &AffineFactorable, p: [f64; 2]) -> Result<CurvaturePair> {
    if s.kind != FactorableKind::Type1 {
        return Err(Error::KindMismatch { expected: "type-1" });
    }
    let (g, h) = s.factors(p)?;
    let a = s.a;
    let k = g.f * h.f * g.d2 * h.d2 - (g.d1 * h.d1).powi(2);
    let two_h = (1.0 + a * a) * g.f * h.d2 + 2.0 * a * g.d1 * h.d1 + g.d2 * h.f;
    Ok(CurvaturePair::new(k, 0.5 * two_h))
}

/// Type 2, with `u1 = y + a z`, `u2 = z` and `R = a f1' f2 + f1 f2'`:
/// `K = (f1 f2 f1'' f2'' - (f1' f2')^2) / R^4`,
/// `2H = [(f1' f2)^2 f1 f2'' - 2 (f1' f2')^2 f1 f2 + (f1 f2')^2 f2 f1''
///        + f1 f2'' + 2a f1' f2' + a^2 f1'' f2] / R^3`.
pub fn afs2_curvatures(s: &AffineFactorable, p: [f64; 2]) -> Result<CurvaturePair> {
    if s.kind != FactorableKind::Type2 {
        return Err(Error::KindMismatch { expected: "type-2" });
    }
    let (g, h) = s.factors(p)?;
    let a = s.a;
    let r = a * g.d1 * h.f + g.f * h.d1;
    if r.abs() < EPS_ADM {
        return Err(Error::Regularity {
            u: p[0],
            v: p[1],
            value: r,
            threshold: EPS_ADM,
        });
    }
    let r2 = r * r;
    let k = (g.f * h.f * g.d2 * h.d2 - (g.d1 * h.d1).powi(2)) / (r2 * r2);
    let num = (g.d1 * h.f).powi(2) * g.f * h.d2 - 2.0 * (g.d1 * h.d1).powi(2) * g.f * h.f
        + (g.f * h.d1).powi(2) * h.f * g.d2
        + g.f * h.d2
        + 2.0 * a * g.d1 * h.d1
        + a * a * g.d2 * h.f;
    Ok(CurvaturePair::new(k, num / (2.0 * r2 * r)))
}

/// One-variable field `t ↦ c0 + c1 t + c2 t^2 + c3 t^3`.
pub fn polynomial(coeffs: [f64; 4]) -> Field1 {
    Field1::new(move |t: Jet2| {
        // Horner
        let mut acc = Jet2::constant(coeffs[3]);
        for c in coeffs[..3].iter().rev() {
            acc = acc * t + *c;
        }
        Ok(acc)
    })
}

/// Identity profile `t ↦ t`.
pub fn linear() -> Field1 {
    Field1::new(Ok)
}
