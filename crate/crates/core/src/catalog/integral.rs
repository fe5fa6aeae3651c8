//! The constant-K factorable family `x = c1 f2(z) / y`, where `f2` is the
//! inverse of `z(t) = ∫ sqrt(c2 / t - K0 / c1^2) dt`.
//!
//! `z(t)` is tabulated with composite Simpson quadrature and inverted by
//! bisection on the table, a local cubic interpolant and a Newton polish on
//! the exact panel integral. Derivatives of `f2` are closed form:
//! `f2' = 1 / S(f2)` and `f2'' = c2 / (2 f2^2 S(f2)^4)` with `S` the integrand.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factorable::AffineFactorable;
use crate::geometry::{Interval, Rect, SurfaceChart};
use crate::jets::{Field1, Jet2};

/// Lower bound for the integrand's radicand on the tabulated range.
pub const EPS_RAD: f64 = 1e-6;
/// Successive table refinements must agree to this before the table is used.
pub const QUAD_TOL: f64 = 1e-10;
/// Simpson sub-panels per table panel.
const SUB_PANELS: usize = 16;
const MAX_PANELS: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct QuadratureTable {
    k0: f64,
    c1: f64,
    c2: f64,
    t: Vec<f64>,
    z: Vec<f64>,
}

impl QuadratureTable {
    pub fn new(k0: f64, c1: f64, c2: f64, range: Interval) -> Result<Self> {
        if k0 == 0.0 {
            return Err(Error::InvalidArgument("K0 must be nonzero".into()));
        }
        if c1 == 0.0 {
            return Err(Error::InvalidArgument("c1 must be nonzero".into()));
        }
        if !(range.lo < range.hi) {
            return Err(Error::InvalidArgument("f2 range must satisfy lo < hi".into()));
        }
        if c2 != 0.0 && range.lo <= 0.0 && range.hi >= 0.0 {
            return Err(Error::InvalidArgument(
                "f2 range must not contain 0 when c2 != 0".into(),
            ));
        }
        let probe = Self {
            k0,
            c1,
            c2,
            t: Vec::new(),
            z: Vec::new(),
        };
        // c2 / t is monotone on a range of fixed sign, so the ends bound it
        for at in [range.lo, range.hi] {
            let value = probe.radicand(at);
            if !(value >= EPS_RAD) {
                return Err(Error::RadicandNonPositive {
                    at,
                    value,
                    floor: EPS_RAD,
                });
            }
        }

        let mut panels = 8;
        let mut total = probe.composite(range, panels);
        loop {
            let refined = probe.composite(range, 2 * panels);
            panels *= 2;
            let converged = (refined - total).abs() < QUAD_TOL;
            total = refined;
            if converged || panels >= MAX_PANELS {
                break;
            }
        }

        let step = range.width() / panels as f64;
        let t: Vec<f64> = (0..=panels)
            .map(|i| if i == panels { range.hi } else { range.lo + step * i as f64 })
            .collect();
        let z0 = if k0 < 0.0 {
            range.lo * (-k0).sqrt() / c1.abs()
        } else {
            0.0
        };
        let mut z = Vec::with_capacity(t.len());
        z.push(z0);
        for w in t.windows(2) {
            let next = z.last().unwrap() + probe.panel_integral(w[0], w[1]);
            z.push(next);
        }
        assert!(
            z.windows(2).all(|w| w[1] > w[0]),
            "quadrature table must be strictly increasing"
        );
        Ok(Self { t, z, ..probe })
    }

    /// `c2 / t - K0 / c1^2`.
    pub fn radicand(&self, t: f64) -> f64 {
        let base = -self.k0 / (self.c1 * self.c1);
        if self.c2 == 0.0 {
            base
        } else {
            self.c2 / t + base
        }
    }

    pub fn integrand(&self, t: f64) -> f64 {
        self.radicand(t).sqrt()
    }

    fn panel_integral(&self, a: f64, b: f64) -> f64 {
        let h = (b - a) / SUB_PANELS as f64;
        let mut acc = self.integrand(a) + self.integrand(b);
        for j in 1..SUB_PANELS {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.integrand(a + h * j as f64);
        }
        acc * h / 3.0
    }

    fn composite(&self, range: Interval, panels: usize) -> f64 {
        let step = range.width() / panels as f64;
        (0..panels)
            .map(|i| {
                let a = range.lo + step * i as f64;
                let b = if i + 1 == panels { range.hi } else { a + step };
                self.panel_integral(a, b)
            })
            .sum()
    }

    pub fn panels(&self) -> usize {
        self.t.len() - 1
    }

    pub fn f2_range(&self) -> Interval {
        Interval::new(self.t[0], *self.t.last().unwrap())
    }

    pub fn z_range(&self) -> Interval {
        Interval::new(self.z[0], *self.z.last().unwrap())
    }

    /// `z(t)` for `t` in the tabulated range.
    pub fn z_of(&self, t: f64) -> f64 {
        let i = self.t.partition_point(|&node| node <= t).clamp(1, self.panels()) - 1;
        self.z[i] + self.panel_integral(self.t[i], t)
    }

    /// Inverse of the table: `f2(z)`.
    pub fn f2_of(&self, z: f64) -> Result<f64> {
        let range = self.z_range();
        let slack = 1e-12 * (1.0 + range.lo.abs().max(range.hi.abs()));
        if !(z >= range.lo - slack && z <= range.hi + slack) {
            return Err(Error::BranchDomain {
                function: "integral profile",
                value: z,
            });
        }
        // bisection on the monotone table
        let (mut lo, mut hi) = (0usize, self.panels());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.z[mid] <= z {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let i = lo;

        // cubic Lagrange interpolation of t(z) on four nearby nodes
        let start = i.saturating_sub(1).min(self.panels().saturating_sub(3));
        let idx = start..(start + 4).min(self.t.len());
        let nodes: Vec<(f64, f64)> = idx.map(|j| (self.z[j], self.t[j])).collect();
        let mut t = 0.0;
        for (j, &(zj, tj)) in nodes.iter().enumerate() {
            let mut basis = 1.0;
            for (m, &(zm, _)) in nodes.iter().enumerate() {
                if m != j {
                    basis *= (z - zm) / (zj - zm);
                }
            }
            t += basis * tj;
        }
        let (a, b) = (self.t[i], self.t[i + 1]);
        t = t.clamp(a, b);

        // Newton on the exact panel integral; dz/dt = S(t) > 0
        for _ in 0..20 {
            let residual = self.z[i] + self.panel_integral(a, t) - z;
            let next = (t - residual / self.integrand(t)).clamp(a, b);
            let done = (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1e-300);
            t = next;
            if done {
                break;
            }
        }
        Ok(t)
    }

    /// One-variable field `z ↦ f2(z)` with closed-form derivatives.
    pub fn profile(self: &Arc<Self>) -> Field1 {
        let table = Arc::clone(self);
        Field1::new(move |u: Jet2| {
            let f = table.f2_of(u.v)?;
            let s = table.integrand(f);
            let d1 = 1.0 / s;
            let s2 = s * s;
            let d2 = table.c2 / (2.0 * f * f * s2 * s2);
            Ok(u.compose(f, d1, d2))
        })
    }
}

/// The family as a type-2 factorable surface with `a = 0`:
/// `f1(y) = c1 / y`, `f2` from the quadrature table; `y ∈ [0.5, 1.5]`.
pub fn integral_factorable(k0: f64, c1: f64, c2: f64, f2_range: Interval) -> Result<AffineFactorable> {
    let table = Arc::new(QuadratureTable::new(k0, c1, c2, f2_range)?);
    let z = table.z_range();
    let f1 = Field1::new(move |y: Jet2| Ok(y.recip()? * c1));
    Ok(AffineFactorable::type2(
        f1,
        table.profile(),
        0.0,
        Rect::new((0.5, 1.5), (z.lo, z.hi)),
    ))
}

/// Chart `x = c1 f2(z) / y` over its induced `z`-domain.
pub fn build_integral_family(k0: f64, c1: f64, c2: f64, f2_range: Interval) -> Result<SurfaceChart> {
    Ok(integral_factorable(k0, c1, c2, f2_range)?.chart())
}
