//! Reproducible random factor profiles for property checks and probes.
//!
//! Each profile is one of: a polynomial of degree at most 3 with
//! coefficients in `[-1, 1]`, `s * exp(c t)`, `s * sin(c t) + o` or
//! `s * cos(c t) + o`, with `c ∈ [0.5, 1.5]`, `s ∈ ±[0.5, 1.5]` and offset
//! `o ∈ [-1, 1]`. All are entire, so every point of every domain is inside
//! the profile's domain. Instances whose height jet leaves a fixed bound, or
//! whose type-2 regularity comes near zero, are redrawn.

use std::fmt;

use crate::factorable::{polynomial, AffineFactorable, FactorableKind};
use crate::geometry::Rect;
use crate::jets::{Field1, Jet2};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomProfile {
    Poly([f64; 4]),
    Exp { c: f64, s: f64 },
    Sin { c: f64, s: f64, o: f64 },
    Cos { c: f64, s: f64, o: f64 },
}

impl RandomProfile {
    pub fn draw(rng: &mut SplitMix64) -> Self {
        match rng.below(4) {
            0 => {
                let degree = rng.below(4) as usize;
                let mut c = [0.0; 4];
                for coeff in c.iter_mut().take(degree + 1) {
                    *coeff = rng.uniform(-1.0, 1.0);
                }
                RandomProfile::Poly(c)
            }
            1 => RandomProfile::Exp {
                c: rng.uniform(0.5, 1.5),
                s: rng.signed_magnitude(0.5, 1.5),
            },
            2 => RandomProfile::Sin {
                c: rng.uniform(0.5, 1.5),
                s: rng.signed_magnitude(0.5, 1.5),
                o: rng.uniform(-1.0, 1.0),
            },
            _ => RandomProfile::Cos {
                c: rng.uniform(0.5, 1.5),
                s: rng.signed_magnitude(0.5, 1.5),
                o: rng.uniform(-1.0, 1.0),
            },
        }
    }

    pub fn field(&self) -> Field1 {
        match *self {
            RandomProfile::Poly(c) => polynomial(c),
            RandomProfile::Exp { c, s } => Field1::new(move |t: Jet2| Ok((t * c).exp() * s)),
            RandomProfile::Sin { c, s, o } => Field1::new(move |t: Jet2| Ok((t * c).sin() * s + o)),
            RandomProfile::Cos { c, s, o } => Field1::new(move |t: Jet2| Ok((t * c).cos() * s + o)),
        }
    }
}

impl fmt::Display for RandomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomProfile::Poly(c) => write!(f, "{} + {} t + {} t^2 + {} t^3", c[0], c[1], c[2], c[3]),
            RandomProfile::Exp { c, s } => write!(f, "{s} exp({c} t)"),
            RandomProfile::Sin { c, s, o } => write!(f, "{s} sin({c} t) + {o}"),
            RandomProfile::Cos { c, s, o } => write!(f, "{s} cos({c} t) + {o}"),
        }
    }
}

/// Lower bound on `|a f1' f2 + f1 f2'|` for generated type-2 instances.
/// Curvature of an x-chart carries roundoff of order `ε / w_z⁴`.
pub const GEN_REGULARITY: f64 = 0.1;

/// Bound on the height jet of generated instances; curvature is a difference
/// of products of second derivatives, so roundoff grows with their square.
pub const GEN_BOUND: f64 = 20.0;

const GEN_GRID: usize = 41;

/// A randomly drawn affine factorable surface together with its recipe.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub kind: FactorableKind,
    pub f1: RandomProfile,
    pub f2: RandomProfile,
    pub a: f64,
    pub surface: AffineFactorable,
}

impl RandomInstance {
    pub fn new(kind: FactorableKind, f1: RandomProfile, f2: RandomProfile, a: f64, domain: Rect) -> Self {
        let surface = AffineFactorable {
            kind,
            f1: f1.field(),
            f2: f2.field(),
            a,
            domain,
        };
        Self {
            kind,
            f1,
            f2,
            a,
            surface,
        }
    }

    /// Draws profiles and a shear `a ∈ ±[0.2, 2]` on the unit square.
    ///
    /// Draws are repeated until the height and its first and second
    /// derivatives stay within [`GEN_BOUND`] on a 41×41 grid and, for type 2,
    /// the regularity value keeps one sign with magnitude at least
    /// [`GEN_REGULARITY`].
    pub fn draw(kind: FactorableKind, rng: &mut SplitMix64) -> Self {
        loop {
            let f1 = RandomProfile::draw(rng);
            let f2 = RandomProfile::draw(rng);
            let a = rng.signed_magnitude(0.2, 2.0);
            let inst = Self::new(kind, f1, f2, a, Rect::new((0.0, 1.0), (0.0, 1.0)));
            let d = inst.surface.domain;
            let regular = kind == FactorableKind::Type1 || inst.surface.regular_on(d, GEN_REGULARITY, GEN_GRID);
            if regular && inst.bounded() {
                return inst;
            }
        }
    }

    fn bounded(&self) -> bool {
        let w = self.surface.height();
        let d = self.surface.domain;
        let ok = d.u.nodes(GEN_GRID).all(|u| {
            d.v.nodes(GEN_GRID).all(|v| match w.jet([u, v]) {
                Ok(j) => [j.v, j.dx, j.dy, j.dxx, j.dxy, j.dyy].iter().all(|c| c.abs() <= GEN_BOUND),
                Err(_) => false,
            })
        });
        ok
    }

    pub fn describe(&self) -> String {
        format!("f1(t) = {}; f2(t) = {}; a = {}", self.f1, self.f2, self.a)
    }
}
