//! Isotropic 3-space: the motion group, Monge charts of both orientations,
//! admissible parametric surfaces and their curvatures.
//!
//! The metric is `ds^2 = dx^2 + dy^2`; the z-direction is isotropic. A motion
//! rotates and translates the `(x, y)` plane and shears `z` by an affine
//! function of `x` and `y`. Curvatures are invariant under these motions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{Field2, Jet2};

/// Admissibility threshold for `|w_z|` and `|x_u y_v - x_v y_u|`.
pub const EPS_ADM: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    /// `n` equispaced nodes including both ends.
    pub fn nodes(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.width() / (n.max(2) - 1) as f64;
        (0..n).map(move |i| {
            if i + 1 == n {
                self.hi
            } else {
                self.lo + step * i as f64
            }
        })
    }
}

/// Closed rectangle in the chart's two parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u: Interval,
    pub v: Interval,
}

impl Rect {
    pub const fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self {
            u: Interval::new(u.0, u.1),
            v: Interval::new(v.0, v.1),
        }
    }

    pub fn center(&self) -> [f64; 2] {
        [self.u.mid(), self.v.mid()]
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.u.contains(p[0]) && self.v.contains(p[1])
    }

    /// Distance from `p` to the nearest edge (negative outside).
    pub fn margin(&self, p: [f64; 2]) -> f64 {
        (p[0] - self.u.lo)
            .min(self.u.hi - p[0])
            .min(p[1] - self.v.lo)
            .min(self.v.hi - p[1])
    }
}

/// `(K, H)`: isotropic Gaussian (relative) and mean curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePair {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl CurvaturePair {
    pub const fn new(k: f64, h: f64) -> Self {
        Self { k, h }
    }
}

/// An element of the six-parameter motion group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub theta: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub s4: f64,
    pub s5: f64,
}

impl Motion {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            theta,
            ..Self::default()
        }
    }

    fn map<T>(&self, x: T, y: T, z: T) -> [T; 3]
    where
        T: Copy
            + std::ops::Add<Output = T>
            + std::ops::Sub<Output = T>
            + std::ops::Mul<f64, Output = T>
            + std::ops::Add<f64, Output = T>,
    {
        let (s, c) = self.theta.sin_cos();
        [
            x * c - y * s + self.t1,
            x * s + y * c + self.t2,
            x * self.s4 + y * self.s5 + z + self.t3,
        ]
    }
}

pub fn apply_motion(m: &Motion, p: [f64; 3]) -> [f64; 3] {
    m.map(p[0], p[1], p[2])
}

/// Isotropic squared distance `dx^2 + dy^2`.
pub fn isotropic_distance_sq(p: [f64; 3], q: [f64; 3]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `z = w(x, y)`.
    #[serde(rename = "z-over-xy")]
    ZOverXy,
    /// `x = w(y, z)`.
    #[serde(rename = "x-over-yz")]
    XOverYz,
}

impl Orientation {
    /// Names of the two chart parameters.
    pub fn axes(&self) -> [&'static str; 2] {
        match self {
            Orientation::ZOverXy => ["x", "y"],
            Orientation::XOverYz => ["y", "z"],
        }
    }
}

/// A graph surface over a rectangle.
#[derive(Clone, Debug)]
pub struct SurfaceChart {
    pub orientation: Orientation,
    pub height: Field2,
    pub domain: Rect,
}

impl SurfaceChart {
    pub fn new(orientation: Orientation, height: Field2, domain: Rect) -> Self {
        Self {
            orientation,
            height,
            domain,
        }
    }

    pub fn curvatures(&self, p: [f64; 2]) -> Result<CurvaturePair> {
        match self.orientation {
            Orientation::ZOverXy => monge_z_curvatures(&self.height, p),
            Orientation::XOverYz => monge_x_curvatures(&self.height, p),
        }
    }

    /// Point of the surface in `(x, y, z)` coordinates.
    pub fn position(&self, p: [f64; 2]) -> Result<[f64; 3]> {
        let w = self.height.value(p)?;
        Ok(match self.orientation {
            Orientation::ZOverXy => [p[0], p[1], w],
            Orientation::XOverYz => [w, p[0], p[1]],
        })
    }

    pub fn to_parametric(&self) -> ParametricSurface {
        let w = self.height.clone();
        let (x, y, z) = match self.orientation {
            Orientation::ZOverXy => (
                Field2::new(|u, _| Ok(u)),
                Field2::new(|_, v| Ok(v)),
                w,
            ),
            Orientation::XOverYz => (
                w,
                Field2::new(|u, _| Ok(u)),
                Field2::new(|_, v| Ok(v)),
            ),
        };
        ParametricSurface::new(x, y, z, self.domain)
    }
}

/// Curvatures of `z = w(x, y)` at `p = (x, y)`:
/// `K = w_xx w_yy - w_xy^2`, `H = (w_xx + w_yy) / 2`.
pub fn monge_z_curvatures(w: &Field2, p: [f64; 2]) -> Result<CurvaturePair> {
    let j = w.jet(p)?;
    Ok(CurvaturePair::new(
        j.dxx * j.dyy - j.dxy * j.dxy,
        0.5 * (j.dxx + j.dyy),
    ))
}

/// Curvatures of `x = w(y, z)` at `p = (y, z)`.
///
/// `H` keeps the sign of `w_z^3`; no orientation normalisation is applied.
pub fn monge_x_curvatures(w: &Field2, p: [f64; 2]) -> Result<CurvaturePair> {
    let j = w.jet(p)?;
    // jet slot x is y, slot y is z
    let (wy, wz) = (j.dx, j.dy);
    let (wyy, wyz, wzz) = (j.dxx, j.dxy, j.dyy);
    if wz.abs() < EPS_ADM {
        return Err(Error::Admissibility {
            u: p[0],
            v: p[1],
            quantity: "w_z",
            value: wz,
            threshold: EPS_ADM,
        });
    }
    let wz2 = wz * wz;
    let k = (wyy * wzz - wyz * wyz) / (wz2 * wz2);
    let h = (wz2 * wyy - 2.0 * wy * wz * wyz + (1.0 + wy * wy) * wzz) / (2.0 * wz2 * wz);
    Ok(CurvaturePair::new(k, h))
}

/// `r(u, v) = (x(u, v), y(u, v), z(u, v))`.
#[derive(Clone, Debug)]
pub struct ParametricSurface {
    pub x: Field2,
    pub y: Field2,
    pub z: Field2,
    pub domain: Rect,
}

impl ParametricSurface {
    pub fn new(x: Field2, y: Field2, z: Field2, domain: Rect) -> Self {
        Self { x, y, z, domain }
    }

    pub fn position(&self, p: [f64; 2]) -> Result<[f64; 3]> {
        Ok([self.x.value(p)?, self.y.value(p)?, self.z.value(p)?])
    }

    /// The image surface `m ∘ r`, parametrised over the same `(u, v)`.
    pub fn moved(&self, m: &Motion) -> Self {
        let (x, y, z) = (self.x.clone(), self.y.clone(), self.z.clone());
        let m = *m;
        let coord = move |i: usize| {
            let (x, y, z) = (x.clone(), y.clone(), z.clone());
            Field2::new(move |u, v| {
                let p = [x.eval_jets(u, v)?, y.eval_jets(u, v)?, z.eval_jets(u, v)?];
                Ok(m.map(p[0], p[1], p[2])[i])
            })
        };
        Self::new(coord(0), coord(1), coord(2), self.domain)
    }

    pub fn jets(&self, p: [f64; 2]) -> Result<[Jet2; 3]> {
        Ok([self.x.jet(p)?, self.y.jet(p)?, self.z.jet(p)?])
    }
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Curvatures of an admissible parametric surface via the isotropic first
/// and second fundamental forms. `sqrt(det g)` is taken as the positive root
/// `|x_u y_v - x_v y_u|`.
pub fn parametric_curvatures(r: &ParametricSurface, p: [f64; 2]) -> Result<CurvaturePair> {
    let [x, y, z] = r.jets(p)?;
    let ru = [x.dx, y.dx, z.dx];
    let rv = [x.dy, y.dy, z.dy];
    let ruu = [x.dxx, y.dxx, z.dxx];
    let ruv = [x.dxy, y.dxy, z.dxy];
    let rvv = [x.dyy, y.dyy, z.dyy];

    let jac = x.dx * y.dy - x.dy * y.dx;
    if jac.abs() < EPS_ADM {
        return Err(Error::Admissibility {
            u: p[0],
            v: p[1],
            quantity: "x_u y_v - x_v y_u",
            value: jac,
            threshold: EPS_ADM,
        });
    }
    let g11 = x.dx * x.dx + y.dx * y.dx;
    let g12 = x.dx * x.dy + y.dx * y.dy;
    let g22 = x.dy * x.dy + y.dy * y.dy;
    // Lagrange identity: g11 g22 - g12^2 = jac^2
    let det_g = jac * jac;
    let root = jac.abs();

    let h11 = det3(ruu, ru, rv) / root;
    let h12 = det3(ruv, ru, rv) / root;
    let h22 = det3(rvv, ru, rv) / root;

    let k = (h11 * h22 - h12 * h12) / det_g;
    let h = (g11 * h22 - 2.0 * g12 * h12 + g22 * h11) / (2.0 * det_g);
    Ok(CurvaturePair::new(k, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn assert_pair(got: CurvaturePair, k: f64, h: f64, tol: f64) {
        assert!(
            close(got.k, k, tol) && close(got.h, h, tol),
            "got {got:?}, want ({k}, {h})"
        );
    }

    fn paraboloid() -> Field2 {
        Field2::new(|x, y| Ok((x * x + y * y) * 0.5))
    }

    fn saddle() -> Field2 {
        Field2::new(|x, y| Ok(x * y))
    }

    #[test]
    fn monge_z_examples() {
        for p in [[0.0, 0.0], [1.3, -0.7]] {
            assert_pair(monge_z_curvatures(&paraboloid(), p).unwrap(), 1.0, 1.0, 0.0);
            let plane = Field2::new(|x, y| Ok(x * 3.0 + y * 2.0));
            assert_pair(monge_z_curvatures(&plane, p).unwrap(), 0.0, 0.0, 0.0);
            assert_pair(monge_z_curvatures(&saddle(), p).unwrap(), -1.0, 0.0, 0.0);
        }
    }

    #[test]
    fn monge_x_examples() {
        let w = Field2::new(|_, z| Ok(z * z));
        assert_pair(monge_x_curvatures(&w, [0.0, 1.0]).unwrap(), 0.0, 0.125, 1e-15);
        let w = Field2::new(|y, z| Ok(y + z));
        assert_pair(monge_x_curvatures(&w, [0.3, 0.4]).unwrap(), 0.0, 0.0, 0.0);
        let w = Field2::new(|y, z| z.checked_div(y));
        assert_pair(monge_x_curvatures(&w, [1.0, 1.0]).unwrap(), -1.0, 0.0, 1e-15);
    }

    #[test]
    fn monge_x_rejects_isotropic_tangent() {
        let w = Field2::new(|_, z| Ok(z * z));
        let err = monge_x_curvatures(&w, [0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Admissibility { .. }));
    }

    #[test]
    fn parametric_examples() {
        let chart = SurfaceChart::new(Orientation::ZOverXy, paraboloid(), Rect::new((-1., 1.), (-1., 1.)));
        let r = chart.to_parametric();
        assert_pair(parametric_curvatures(&r, [0.4, -0.2]).unwrap(), 1.0, 1.0, 1e-15);

        let flat = SurfaceChart::new(
            Orientation::ZOverXy,
            Field2::new(|_, _| Ok(Jet2::constant(0.0))),
            Rect::new((-1., 1.), (-1., 1.)),
        );
        assert_pair(parametric_curvatures(&flat.to_parametric(), [0.1, 0.2]).unwrap(), 0.0, 0.0, 0.0);

        // graph z = uv rotated by pi/4, evaluated at the pre-image of (1, 1)
        let chart = SurfaceChart::new(Orientation::ZOverXy, saddle(), Rect::new((-2., 2.), (-2., 2.)));
        let moved = chart.to_parametric().moved(&Motion::rotation(FRAC_PI_4));
        let (s, c) = FRAC_PI_4.sin_cos();
        let pre = [c * 1.0 + s * 1.0, -s * 1.0 + c * 1.0];
        let img = moved.position(pre).unwrap();
        assert!((img[0] - 1.0).abs() < 1e-15 && (img[1] - 1.0).abs() < 1e-15);
        assert_pair(parametric_curvatures(&moved, pre).unwrap(), -1.0, 0.0, 1e-14);
    }

    #[test]
    fn motion_examples() {
        assert_eq!(apply_motion(&Motion::identity(), [1., 2., 3.]), [1., 2., 3.]);
        let q = apply_motion(&Motion::rotation(FRAC_PI_2), [1., 0., 0.]);
        assert!((q[0]).abs() < 1e-16 && (q[1] - 1.0).abs() < 1e-16 && q[2] == 0.0);
        let shear = Motion {
            s4: 1.0,
            ..Motion::default()
        };
        assert_eq!(apply_motion(&shear, [1., 2., 3.]), [1., 2., 4.]);
    }

    #[test]
    fn parametric_rejects_isotropic_tangent_plane() {
        // r = (u, u, v): planar projection degenerate
        let r = ParametricSurface::new(
            Field2::new(|u, _| Ok(u)),
            Field2::new(|u, _| Ok(u)),
            Field2::new(|_, v| Ok(v)),
            Rect::new((0., 1.), (0., 1.)),
        );
        assert!(matches!(
            parametric_curvatures(&r, [0.5, 0.5]),
            Err(Error::Admissibility { .. })
        ));
    }

    // Random smooth height field: polynomial plus trig terms.
    fn height(c: [f64; 6]) -> Field2 {
        Field2::new(move |x, y| {
            Ok(x * x * c[0] + x * y * c[1] + y * y * y * c[2] + (x * c[3]).sin() * (y * c[4]).exp() + y * c[5] + x * 0.5)
        })
    }

    fn motion() -> impl Strategy<Value = Motion> {
        (
            -3.2f64..3.2,
            prop::array::uniform3(-5.0f64..5.0),
            prop::array::uniform2(-2.0f64..2.0),
        )
            .prop_map(|(theta, t, s)| Motion {
                theta,
                t1: t[0],
                t2: t[1],
                t3: t[2],
                s4: s[0],
                s5: s[1],
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn chart_and_parametric_agree_z(c in prop::array::uniform6(-1.0f64..1.0), u in -1.0f64..1.0, v in -1.0f64..1.0) {
            let chart = SurfaceChart::new(Orientation::ZOverXy, height(c), Rect::new((-1., 1.), (-1., 1.)));
            let a = chart.curvatures([u, v]).unwrap();
            let b = parametric_curvatures(&chart.to_parametric(), [u, v]).unwrap();
            prop_assert!(close(a.k, b.k, 1e-12) && close(a.h, b.h, 1e-12));
        }

        // x-over-yz: the parametric route uses |w_z|, the chart keeps w_z^3,
        // so the two agree for w_z > 0 and differ by the sign of H otherwise.
        #[test]
        fn chart_and_parametric_agree_x(c in prop::array::uniform6(-1.0f64..1.0), u in -1.0f64..1.0, v in -1.0f64..1.0) {
            let chart = SurfaceChart::new(Orientation::XOverYz, height(c), Rect::new((-1., 1.), (-1., 1.)));
            let wz = chart.height.jet([u, v]).unwrap().dy;
            prop_assume!(wz.abs() > 1e-2);
            let a = chart.curvatures([u, v]).unwrap();
            let b = parametric_curvatures(&chart.to_parametric(), [u, v]).unwrap();
            prop_assert!(close(a.k, b.k, 1e-12));
            prop_assert!(close(a.h, wz.signum() * b.h, 1e-12));
        }

        #[test]
        fn curvatures_are_motion_invariant(c in prop::array::uniform6(-1.0f64..1.0), m in motion(), u in -1.0f64..1.0, v in -1.0f64..1.0) {
            let r = SurfaceChart::new(Orientation::ZOverXy, height(c), Rect::new((-1., 1.), (-1., 1.))).to_parametric();
            let a = parametric_curvatures(&r, [u, v]).unwrap();
            let b = parametric_curvatures(&r.moved(&m), [u, v]).unwrap();
            prop_assert!((a.k - b.k).abs() <= 1e-9 && (a.h - b.h).abs() <= 1e-9);
        }

        #[test]
        fn height_scaling(c in prop::array::uniform6(-1.0f64..1.0), lambda in -3.0f64..3.0, u in -1.0f64..1.0, v in -1.0f64..1.0) {
            let w = height(c);
            let a = monge_z_curvatures(&w, [u, v]).unwrap();
            let b = monge_z_curvatures(&w.scaled(lambda), [u, v]).unwrap();
            prop_assert!(close(b.k, lambda * lambda * a.k, 1e-12));
            prop_assert!(close(b.h, lambda * a.h, 1e-12));
        }

        #[test]
        fn motions_preserve_isotropic_distance(m in motion(), p in prop::array::uniform3(-10.0f64..10.0), q in prop::array::uniform3(-10.0f64..10.0)) {
            let d0 = isotropic_distance_sq(p, q);
            let d1 = isotropic_distance_sq(apply_motion(&m, p), apply_motion(&m, q));
            prop_assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
        }
    }
}
