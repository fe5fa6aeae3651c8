//! Registry of the classified surface families.
//!
//! Every family is built as an [`AffineFactorable`] surface: type 1 for the
//! `z`-graphs, type 2 for the `x`-graphs, and `a = 0` for plain factorable
//! surfaces. Each entry has a parameter schema with defaults, a default
//! rectangle free of branch points and admissibility failures, the claimed
//! curvature behaviour and the claimed constant. The constant obtained by
//! direct differentiation is computed when the family is instantiated; that
//! is the value verification targets.

pub mod integral;
pub mod ode;
pub mod params;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorable::{linear, AffineFactorable};
use crate::geometry::{Interval, Rect};
use crate::jets::{Field1, Jet2};
use crate::verify::Quantity;

pub use params::{Params, Resolved, Shape};

use ode::{CmcProfile, OscVariant, OscillatoryProfile};

/// Type-2 default domains are shrunk until `|a f1' f2 + f1 f2'|` stays at least this.
pub const REGULARITY_FLOOR: f64 = 1e-3;
const CLIP_GRID: usize = 41;
const CLIP_ROUNDS: usize = 6;
/// Clipping stops early once `|R|` reaches this; x-chart curvature carries
/// roundoff of order `ε / R⁴`.
const CLIP_TARGET: f64 = 0.05;

const SQUARE: Rect = Rect::new((0.5, 1.5), (0.5, 1.5));
const UNIT: Rect = Rect::new((0.0, 1.0), (0.0, 1.0));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Claim {
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "minimal")]
    Minimal,
    #[serde(rename = "K-const")]
    KConst,
    #[serde(rename = "H-const")]
    HConst,
    #[serde(rename = "non-constant")]
    NonConstant,
}

impl Claim {
    /// The curvature the claim is about.
    pub fn quantity(&self) -> Quantity {
        match self {
            Claim::Flat | Claim::KConst => Quantity::K,
            Claim::Minimal | Claim::HConst | Claim::NonConstant => Quantity::H,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Claim::Flat => "flat",
            Claim::Minimal => "minimal",
            Claim::KConst => "K-const",
            Claim::HConst => "H-const",
            Claim::NonConstant => "non-constant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub claim: Claim,
    pub claimed_value: Option<f64>,
    pub derived_value: Option<f64>,
}

type Builder = fn(&Resolved) -> Result<AffineFactorable>;
type Claimed = fn(&Resolved) -> Option<f64>;

pub struct FamilyDef {
    pub id: &'static str,
    pub formula: &'static str,
    pub params: &'static [(&'static str, f64)],
    pub claim: Claim,
    pub anchor: &'static str,
    /// Reproduced verbatim even though direct computation disagrees with the claim.
    pub as_printed: bool,
    /// Accepts `shape=` or a caller-supplied profile.
    pub takes_profile: bool,
    build: Builder,
    claimed: Claimed,
}

impl FamilyDef {
    pub fn resolve(&'static self, params: &Params) -> Result<Resolved> {
        Resolved::new(self.id, self.params, self.takes_profile, params)
    }

    /// Surface on its default domain.
    pub fn build(&'static self, params: &Params) -> Result<AffineFactorable> {
        let r = self.resolve(params)?;
        self.build_resolved(&r)
    }

    fn build_resolved(&self, r: &Resolved) -> Result<AffineFactorable> {
        let s = (self.build)(r)?;
        match s.kind {
            crate::factorable::FactorableKind::Type1 => Ok(s),
            crate::factorable::FactorableKind::Type2 => clip_regular(s, self.id),
        }
    }
}

impl std::fmt::Debug for FamilyDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilyDef").field("id", &self.id).finish_non_exhaustive()
    }
}

/// A family bound to concrete parameters.
#[derive(Clone, Debug)]
pub struct Family {
    pub def: &'static FamilyDef,
    pub params: Resolved,
    pub surface: AffineFactorable,
    pub profile: CurvatureProfile,
}

impl Family {
    pub fn subject(&self) -> String {
        self.params.subject()
    }
}

pub fn registry() -> &'static [FamilyDef] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static FamilyDef> {
    REGISTRY
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

pub fn instantiate(id: &str, params: &Params) -> Result<Family> {
    let def = lookup(id)?;
    let resolved = def.resolve(params)?;
    let surface = def.build_resolved(&resolved)?;
    let derived = match def.claim {
        Claim::NonConstant => None,
        claim => {
            let c = surface.chart().curvatures(surface.domain.center())?;
            Some(match claim.quantity() {
                Quantity::K => c.k,
                _ => c.h,
            })
        }
    };
    let profile = CurvatureProfile {
        claim: def.claim,
        claimed_value: (def.claimed)(&resolved),
        derived_value: derived,
    };
    Ok(Family {
        def,
        params: resolved,
        surface,
        profile,
    })
}

pub fn build_family(id: &str, params: &Params) -> Result<AffineFactorable> {
    lookup(id)?.build(params)
}

pub fn expected_profile(id: &str, params: &Params) -> Result<CurvatureProfile> {
    Ok(instantiate(id, params)?.profile)
}

/// Smallest `|R|` on a 41×41 grid over `d`; zero when `R` changes sign or
/// fails to evaluate.
fn min_regularity(s: &AffineFactorable, d: Rect) -> f64 {
    let mut sign = 0.0;
    let mut min = f64::INFINITY;
    for u in d.u.nodes(CLIP_GRID) {
        for v in d.v.nodes(CLIP_GRID) {
            match s.regularity([u, v]) {
                Ok(r) if r.is_finite() && r != 0.0 && (sign == 0.0 || r.signum() == sign) => {
                    sign = r.signum();
                    min = min.min(r.abs());
                }
                _ => return 0.0,
            }
        }
    }
    min
}

fn quadrants(d: Rect) -> [Rect; 4] {
    let (um, vm) = (d.u.lo + 0.5 * d.u.width(), d.v.lo + 0.5 * d.v.width());
    [
        Rect::new((d.u.lo, um), (d.v.lo, vm)),
        Rect::new((um, d.u.hi), (d.v.lo, vm)),
        Rect::new((d.u.lo, um), (vm, d.v.hi)),
        Rect::new((um, d.u.hi), (vm, d.v.hi)),
    ]
}

/// Descends into the quadrant with the largest minimum `|R|` until `|R|`
/// clears [`CLIP_TARGET`]; otherwise keeps the best visited domain that
/// clears [`REGULARITY_FLOOR`].
fn clip_regular(mut s: AffineFactorable, id: &str) -> Result<AffineFactorable> {
    let mut d = s.domain;
    let mut m = min_regularity(&s, d);
    let mut best = (m >= REGULARITY_FLOOR).then_some((m, d));
    for _ in 0..CLIP_ROUNDS {
        if m >= CLIP_TARGET {
            break;
        }
        let mut next = (f64::NEG_INFINITY, d);
        for q in quadrants(d) {
            let mq = min_regularity(&s, q);
            if mq > next.0 {
                next = (mq, q);
            }
        }
        (m, d) = next;
        if m >= REGULARITY_FLOOR && best.is_none_or(|(bm, _)| m > bm) {
            best = Some((m, d));
        }
    }
    match best {
        Some((_, d)) => {
            s.domain = d;
            Ok(s)
        }
        None => Err(Error::InvalidParameter {
            family: id.to_string(),
            constraint: format!("regularity value stays below {REGULARITY_FLOOR:e} on every clipped default domain"),
        }),
    }
}

/// `[0.5, 1.5]` for the first coordinate and a unit interval for the second,
/// raised until `second + a * first >= 0.5`.
fn sheared(a: f64) -> Rect {
    let min_shift = (0.5 * a).min(1.5 * a);
    let lo = 0.5f64.max(0.5 - min_shift);
    Rect::new((0.5, 1.5), (lo, lo + 1.0))
}

/// Same as [`sheared`] with the coordinate roles of a type-2 chart, `(y, z)`
/// where `y + a z >= 0.5`.
fn sheared2(a: f64) -> Rect {
    let min_shift = (0.5 * a).min(1.5 * a);
    let lo = 0.5f64.max(0.5 - min_shift);
    Rect::new((lo, lo + 1.0), (0.5, 1.5))
}

fn constant(c: f64) -> Field1 {
    Field1::constant(c)
}

fn scaled_linear(k: f64) -> Field1 {
    Field1::new(move |t: Jet2| Ok(t * k))
}

fn exp_of(k: f64) -> Field1 {
    Field1::new(move |t: Jet2| Ok((t * k).exp()))
}

fn power(e: f64) -> Field1 {
    Field1::new(move |t: Jet2| t.powf(e))
}

fn nonzero_a(r: &Resolved) -> Result<f64> {
    let a = r.get("a");
    r.require(a != 0.0, "a != 0")?;
    Ok(a)
}

fn pow_exponents(r: &Resolved) -> Result<(f64, f64)> {
    let c2 = r.get("c2");
    r.require(c2 != 1.0, "c2 != 1")?;
    Ok((1.0 / (1.0 - c2), c2 / (c2 - 1.0)))
}

fn claims_zero(_: &Resolved) -> Option<f64> {
    Some(0.0)
}

fn claims_k0(r: &Resolved) -> Option<f64> {
    Some(r.get("K0"))
}

fn claims_h0(r: &Resolved) -> Option<f64> {
    Some(r.get("H0"))
}

fn nonzero(r: &Resolved, name: &str) -> Result<f64> {
    let v = r.get(name);
    r.require(v != 0.0, &format!("{name} != 0"))?;
    Ok(v)
}

fn unit_sign(r: &Resolved) -> Result<f64> {
    let s = r.get("sign");
    r.require(s == 1.0 || s == -1.0, "sign is 1 or -1")?;
    Ok(s)
}

static REGISTRY: &[FamilyDef] = &[
    // type 1, z = f1(x) f2(y + a x)
    FamilyDef {
        id: "AFS1.flat.scale",
        formula: "z = c1 f(y + a x)",
        params: &[("c1", 1.0), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-1 constant K: arbitrary profile of u2",
        as_printed: false,
        takes_profile: true,
        build: |r| {
            let a = nonzero_a(r)?;
            Ok(AffineFactorable::type1(constant(r.get("c1")), r.profile_field(), a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.flat.exp",
        formula: "z = c1 exp(c2 x + c3 (y + a x))",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-1 constant K: exponential case",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let (c1, c2) = (r.get("c1"), r.get("c2"));
            let f1 = Field1::new(move |x: Jet2| Ok((x * c2).exp() * c1));
            Ok(AffineFactorable::type1(f1, exp_of(r.get("c3")), a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.flat.pow",
        formula: "z = c1 x^(1/(1-c2)) (y + a x)^(c2/(c2-1))",
        params: &[("c1", 1.0), ("c2", 2.0), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-1 constant K: power case, c2 != 1",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let (e1, e2) = pow_exponents(r)?;
            let c1 = r.get("c1");
            let f1 = Field1::new(move |x: Jet2| Ok(x.powf(e1)? * c1));
            Ok(AffineFactorable::type1(f1, power(e2), a, sheared(a)))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.K.saddle",
        formula: "z = sqrt|K0| x (y + a x)",
        params: &[("K0", -1.0), ("a", 1.0)],
        claim: Claim::KConst,
        anchor: "type-1 constant K: nonzero case",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let k0 = nonzero(r, "K0")?;
            Ok(AffineFactorable::type1(scaled_linear(k0.abs().sqrt()), linear(), a, SQUARE))
        },
        claimed: claims_k0,
    },
    FamilyDef {
        id: "AFS1.min.plane",
        formula: "z = c1 (c2 (y + a x) + c3)",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5), ("a", 1.0)],
        claim: Claim::Minimal,
        anchor: "type-1 minimal: non-isotropic plane",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let (c2, c3) = (r.get("c2"), r.get("c3"));
            let f2 = Field1::new(move |t: Jet2| Ok(t * c2 + c3));
            Ok(AffineFactorable::type1(constant(r.get("c1")), f2, a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.min.osc",
        formula: "z = exp(c1 x) exp(-a c1 u/(1+a^2)) [c2 cos(c1 u/(1+a^2)) + c3 sin(c1 u/(1+a^2))], u = y + a x",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.0), ("a", 1.0)],
        claim: Claim::Minimal,
        anchor: "type-1 minimal: general solution of the linear second-order ODE for f2",
        as_printed: false,
        takes_profile: false,
        build: |r| oscillatory(r, OscVariant::Corrected),
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.min.osc.printed",
        formula: "z = exp(c1 x) [c2 sin(c1 u/(1+a^2)) + c3 cos(c1 u/(1+a^2))], u = y + a x",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.0), ("a", 1.0)],
        claim: Claim::Minimal,
        anchor: "type-1 minimal: oscillatory solution as printed, without the exponential envelope",
        as_printed: true,
        takes_profile: false,
        build: |r| oscillatory(r, OscVariant::Printed),
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS1.cmc.parabolic",
        formula: "z = H0/(1+a^2) (y + a x)^2",
        params: &[("H0", 1.0), ("a", 1.0)],
        claim: Claim::HConst,
        anchor: "type-1 nonzero constant H: f1 constant",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c = nonzero(r, "H0")? / (1.0 + a * a);
            let f2 = Field1::new(move |t: Jet2| Ok(t * t * c));
            Ok(AffineFactorable::type1(constant(1.0), f2, a, SQUARE))
        },
        claimed: claims_h0,
    },
    FamilyDef {
        id: "AFS1.cmc.shear",
        formula: "z = H0/a x (y + a x)",
        params: &[("H0", 1.0), ("a", 1.0)],
        claim: Claim::HConst,
        anchor: "type-1 nonzero constant H: f1 linear",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let h0 = nonzero(r, "H0")?;
            Ok(AffineFactorable::type1(scaled_linear(h0 / a), linear(), a, SQUARE))
        },
        claimed: claims_h0,
    },
    // type 2, x = f1(y + a z) f2(z)
    FamilyDef {
        id: "AFS2.flat.scale",
        formula: "x = c1 f(y + a z)",
        params: &[("c1", 1.0), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-2 constant K (necessarily zero): arbitrary profile of u1",
        as_printed: false,
        takes_profile: true,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            Ok(AffineFactorable::type2(r.profile_field(), constant(c1), a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS2.flat.exp",
        formula: "x = c1 exp(c2 (y + a z) + c3 z)",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-2 constant K (necessarily zero): exponential case",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            let (c2, c3) = (r.get("c2"), r.get("c3"));
            r.require(a * c2 + c3 != 0.0, "a c2 + c3 != 0")?;
            let f1 = Field1::new(move |t: Jet2| Ok((t * c2).exp() * c1));
            Ok(AffineFactorable::type2(f1, exp_of(c3), a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS2.flat.pow",
        formula: "x = c1 (y + a z)^(1/(1-c2)) z^(c2/(c2-1))",
        params: &[("c1", 1.0), ("c2", 2.0), ("a", 1.0)],
        claim: Claim::Flat,
        anchor: "type-2 constant K (necessarily zero): power case, c2 != 1",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            let (e1, e2) = pow_exponents(r)?;
            let f1 = Field1::new(move |t: Jet2| Ok(t.powf(e1)? * c1));
            Ok(AffineFactorable::type2(f1, power(e2), a, sheared2(a)))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS2.min.plane",
        formula: "x = c1 (c2 (y + a z) + c3)",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5), ("a", 1.0)],
        claim: Claim::Minimal,
        anchor: "type-2 minimal: only non-isotropic planes",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            let c2 = nonzero(r, "c2")?;
            let c3 = r.get("c3");
            let f1 = Field1::new(move |t: Jet2| Ok(t * c2 + c3));
            Ok(AffineFactorable::type2(f1, constant(c1), a, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "AFS2.cmc.sqrt",
        formula: "x = c1/sqrt|H0| sqrt(y + a z)",
        params: &[("c1", 1.0), ("H0", 1.0), ("a", 1.0)],
        claim: Claim::HConst,
        anchor: "type-2 nonzero constant H with a linear factor, as printed",
        as_printed: true,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            let k = c1 / nonzero(r, "H0")?.abs().sqrt();
            let f1 = Field1::new(move |t: Jet2| Ok(t.sqrt()? * k));
            Ok(AffineFactorable::type2(f1, constant(1.0), a, sheared2(a)))
        },
        claimed: claims_h0,
    },
    FamilyDef {
        id: "AFS2.cmc.f1const",
        formula: "x = c1 f2(z), f2(z) = -1/(2 H0 c1^2) sqrt(c2 - 4 H0 c1^2 z) + c3",
        params: &[("c1", 1.0), ("H0", 1.0), ("c2", 1.0), ("c3", 0.0), ("a", 1.0)],
        claim: Claim::HConst,
        anchor: "type-2 nonzero constant H with constant f1: solution of f2''/f2'^3 = 2 H0 c1^2",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let a = nonzero_a(r)?;
            let c1 = nonzero(r, "c1")?;
            let h0 = nonzero(r, "H0")?;
            let p = CmcProfile::new(h0, c1, r.get("c2"), r.get("c3"))?;
            let domain = Rect::new((0.5, 1.5), (-1.0, 0.0));
            let ok = [domain.v.lo, domain.v.hi]
                .iter()
                .all(|&z| p.radicand(z) >= integral::EPS_RAD);
            r.require(ok, "c2 - 4 H0 c1^2 z >= 1e-6 for z in [-1, 0]")?;
            Ok(AffineFactorable::type2(constant(c1), p.field(), a, domain))
        },
        claimed: claims_h0,
    },
    // factorable type 1, z = f1(x) f2(y)
    FamilyDef {
        id: "FS1.flat.scale",
        formula: "z = c1 f(y)",
        params: &[("c1", 1.0)],
        claim: Claim::Flat,
        anchor: "factorable type 1, K = 0: arbitrary profile",
        as_printed: false,
        takes_profile: true,
        build: |r| Ok(AffineFactorable::type1(constant(r.get("c1")), r.profile_field(), 0.0, SQUARE)),
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS1.flat.exp",
        formula: "z = c1 exp(c2 x + c3 y)",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5)],
        claim: Claim::Flat,
        anchor: "factorable type 1, K = 0: exponential",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let (c1, c2) = (r.get("c1"), r.get("c2"));
            let f1 = Field1::new(move |x: Jet2| Ok((x * c2).exp() * c1));
            Ok(AffineFactorable::type1(f1, exp_of(r.get("c3")), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS1.flat.pow",
        formula: "z = c1 x^(1/(1-c2)) y^(c2/(c2-1))",
        params: &[("c1", 1.0), ("c2", 2.0)],
        claim: Claim::Flat,
        anchor: "factorable type 1, K = 0: power, c2 != 1",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let (e1, e2) = pow_exponents(r)?;
            let c1 = r.get("c1");
            let f1 = Field1::new(move |x: Jet2| Ok(x.powf(e1)? * c1));
            Ok(AffineFactorable::type1(f1, power(e2), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS1.min.xy",
        formula: "z = c1 x y",
        params: &[("c1", 1.0)],
        claim: Claim::Minimal,
        anchor: "factorable type 1, H = 0: hyperbolic paraboloid",
        as_printed: false,
        takes_profile: false,
        build: |r| Ok(AffineFactorable::type1(scaled_linear(r.get("c1")), linear(), 0.0, SQUARE)),
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS1.min.exp-trig",
        formula: "z = (c1 exp(c2 x) + c3 exp(-c2 x)) (c4 cos(c2 y) + c5 sin(c2 y))",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5), ("c4", 1.0), ("c5", 0.5)],
        claim: Claim::Minimal,
        anchor: "factorable type 1, H = 0: exponential times trigonometric",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let (c1, c2, c3, c4, c5) = (r.get("c1"), r.get("c2"), r.get("c3"), r.get("c4"), r.get("c5"));
            let f1 = Field1::new(move |x: Jet2| Ok((x * c2).exp() * c1 + (x * -c2).exp() * c3));
            let f2 = Field1::new(move |y: Jet2| Ok((y * c2).cos() * c4 + (y * c2).sin() * c5));
            Ok(AffineFactorable::type1(f1, f2, 0.0, UNIT))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS1.K.saddle",
        formula: "z = sqrt|K0| x y",
        params: &[("K0", -1.0)],
        claim: Claim::KConst,
        anchor: "factorable type 1, nonzero constant K",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let k0 = nonzero(r, "K0")?;
            Ok(AffineFactorable::type1(scaled_linear(k0.abs().sqrt()), linear(), 0.0, SQUARE))
        },
        claimed: claims_k0,
    },
    FamilyDef {
        id: "FS1.cmc.parab",
        formula: "z = H0/c1 y^2",
        params: &[("H0", 1.0), ("c1", 1.0)],
        claim: Claim::HConst,
        anchor: "factorable type 1, nonzero constant H",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let h0 = nonzero(r, "H0")?;
            let c1 = nonzero(r, "c1")?;
            Ok(AffineFactorable::type1(constant(h0 / c1), power(2.0), 0.0, SQUARE))
        },
        claimed: claims_h0,
    },
    // factorable type 2, x = f1(y) f2(z)
    FamilyDef {
        id: "FS2.flat.scale",
        formula: "x = c1 f(z)",
        params: &[("c1", 1.0)],
        claim: Claim::Flat,
        anchor: "factorable type 2, K = 0: arbitrary profile",
        as_printed: false,
        takes_profile: true,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            Ok(AffineFactorable::type2(constant(c1), r.profile_field(), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.flat.exp",
        formula: "x = c1 exp(c2 y + c3 z)",
        params: &[("c1", 1.0), ("c2", 1.0), ("c3", 0.5)],
        claim: Claim::Flat,
        anchor: "factorable type 2, K = 0: exponential",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            let c2 = r.get("c2");
            let c3 = nonzero(r, "c3")?;
            let f1 = Field1::new(move |y: Jet2| Ok((y * c2).exp() * c1));
            Ok(AffineFactorable::type2(f1, exp_of(c3), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.flat.pow",
        formula: "x = c1 y^(1/(1-c2)) z^(c2/(c2-1))",
        params: &[("c1", 1.0), ("c2", 2.0)],
        claim: Claim::Flat,
        anchor: "factorable type 2, K = 0: power, c2 != 1",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            nonzero(r, "c2")?;
            let (e1, e2) = pow_exponents(r)?;
            let f1 = Field1::new(move |y: Jet2| Ok(y.powf(e1)? * c1));
            Ok(AffineFactorable::type2(f1, power(e2), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.min.tan",
        formula: "x = y tan(c1 z)",
        params: &[("c1", 1.0)],
        claim: Claim::Minimal,
        anchor: "factorable type 2, H = 0: tangent",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            let zmax = 1.2 / c1.abs();
            let f2 = Field1::new(move |z: Jet2| (z * c1).tan());
            Ok(AffineFactorable::type2(linear(), f2, 0.0, Rect::new((0.5, 1.5), (-zmax, zmax))))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.min.ratio",
        formula: "x = c1 z / y",
        params: &[("c1", 1.0)],
        claim: Claim::Minimal,
        anchor: "factorable type 2, H = 0: ratio, orientation that is minimal",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            let f1 = Field1::new(move |y: Jet2| Ok(y.recip()? * c1));
            Ok(AffineFactorable::type2(f1, linear(), 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.min.ratio.printed",
        formula: "x = c1 y / z",
        params: &[("c1", 1.0)],
        claim: Claim::Minimal,
        anchor: "factorable type 2, H = 0: ratio as printed",
        as_printed: true,
        takes_profile: false,
        build: |r| {
            let c1 = nonzero(r, "c1")?;
            let f2 = Field1::new(|z: Jet2| z.recip());
            Ok(AffineFactorable::type2(scaled_linear(c1), f2, 0.0, SQUARE))
        },
        claimed: claims_zero,
    },
    FamilyDef {
        id: "FS2.K.hyperbolic",
        formula: "x = sign z / (sqrt|K0| y)",
        params: &[("K0", -1.0), ("sign", 1.0)],
        claim: Claim::KConst,
        anchor: "factorable type 2, nonzero constant K: closed form",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let k0 = nonzero(r, "K0")?;
            let s = unit_sign(r)?;
            let f1 = Field1::new(|y: Jet2| y.recip());
            Ok(AffineFactorable::type2(f1, scaled_linear(s / k0.abs().sqrt()), 0.0, SQUARE))
        },
        claimed: claims_k0,
    },
    FamilyDef {
        id: "FS2.K.integral",
        formula: "x = c1 f2(z) / y, z = integral of sqrt(c2/f2 - K0/c1^2) df2",
        params: &[("K0", -1.0), ("c1", 1.0), ("c2", 0.5), ("f2_lo", 0.5), ("f2_hi", 1.5)],
        claim: Claim::KConst,
        anchor: "factorable type 2, nonzero constant K: quadrature-defined profile",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let k0 = nonzero(r, "K0")?;
            let c1 = nonzero(r, "c1")?;
            let (lo, hi) = (r.get("f2_lo"), r.get("f2_hi"));
            r.require(lo < hi, "f2_lo < f2_hi")?;
            integral::integral_factorable(k0, c1, r.get("c2"), Interval::new(lo, hi)).map_err(|e| match e {
                Error::InvalidArgument(c) => Error::InvalidParameter {
                    family: r.family.to_string(),
                    constraint: c,
                },
                other => other,
            })
        },
        claimed: claims_k0,
    },
    FamilyDef {
        id: "FS2.cmc.sqrt",
        formula: "x = sign sqrt(-z / H0)",
        params: &[("H0", 1.0), ("sign", 1.0)],
        claim: Claim::HConst,
        anchor: "factorable type 2, nonzero constant H",
        as_printed: false,
        takes_profile: false,
        build: |r| {
            let h0 = nonzero(r, "H0")?;
            let s = unit_sign(r)?;
            let f2 = Field1::new(move |z: Jet2| Ok((z * (-1.0 / h0)).sqrt()? * s));
            // -z / H0 in [0.5, 1.5]
            let (z1, z2) = (-0.5 * h0, -1.5 * h0);
            let domain = Rect::new((0.5, 1.5), (z1.min(z2), z1.max(z2)));
            Ok(AffineFactorable::type2(constant(1.0), f2, 0.0, domain))
        },
        claimed: claims_h0,
    },
];

fn oscillatory(r: &Resolved, variant: OscVariant) -> Result<AffineFactorable> {
    let a = nonzero_a(r)?;
    let c1 = nonzero(r, "c1")?;
    let f2 = OscillatoryProfile::new(c1, a, (r.get("c2"), r.get("c3")), variant)?.field();
    Ok(AffineFactorable::type1(exp_of(c1), f2, a, UNIT))
}
