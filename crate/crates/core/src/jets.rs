//! Second-order forward-mode differentiation over two variables.
//!
//! A [`Jet2`] carries the value of a scalar field together with its gradient
//! and Hessian at one point. Arithmetic on jets applies the exact Leibniz,
//! quotient and chain rules, so curvature formulas built on top of them carry
//! no truncation error.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Divisors with magnitude below this are rejected.
pub const DIV_EPS: f64 = 1e-300;
/// `tan` is refused when `|cos|` falls to or below this.
pub const TAN_POLE_GUARD: f64 = 1e-8;

/// Value, first partials and second partials of a field of two variables.
///
/// The mixed partial is stored once, so `f_xy = f_yx` holds by construction.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

/// What a lifted scalar stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seed {
    Coordinate1,
    Coordinate2,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnaryFn {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Pow(f64),
    Neg,
}

pub fn lift(kind: Seed, value: f64) -> Jet2 {
    match kind {
        Seed::Coordinate1 => Jet2::x(value),
        Seed::Coordinate2 => Jet2::y(value),
        Seed::Constant => Jet2::constant(value),
    }
}

pub fn combine(op: BinaryOp, a: Jet2, b: Jet2) -> Result<Jet2> {
    Ok(match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => a.checked_div(b)?,
    })
}

pub fn apply(f: UnaryFn, a: Jet2) -> Result<Jet2> {
    match f {
        UnaryFn::Exp => Ok(a.exp()),
        UnaryFn::Ln => a.ln(),
        UnaryFn::Sin => Ok(a.sin()),
        UnaryFn::Cos => Ok(a.cos()),
        UnaryFn::Tan => a.tan(),
        UnaryFn::Sqrt => a.sqrt(),
        UnaryFn::Pow(e) => a.powf(e),
        UnaryFn::Neg => Ok(-a),
    }
}

impl Jet2 {
    pub const fn new(v: f64, dx: f64, dy: f64, dxx: f64, dxy: f64, dyy: f64) -> Self {
        Self {
            v,
            dx,
            dy,
            dxx,
            dxy,
            dyy,
        }
    }

    /// The first coordinate, seeded with `d/dx = 1`.
    pub const fn x(v: f64) -> Self {
        Self::new(v, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The second coordinate, seeded with `d/dy = 1`.
    pub const fn y(v: f64) -> Self {
        Self::new(v, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    pub const fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn components(&self) -> [f64; 6] {
        [self.v, self.dx, self.dy, self.dxx, self.dxy, self.dyy]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Pushes the jet through a univariate function `g` given `g(v)`, `g'(v)`
    /// and `g''(v)`.
    pub fn compose(self, g: f64, dg: f64, d2g: f64) -> Self {
        Self {
            v: g,
            dx: dg * self.dx,
            dy: dg * self.dy,
            dxx: d2g * self.dx * self.dx + dg * self.dxx,
            dxy: d2g * self.dx * self.dy + dg * self.dxy,
            dyy: d2g * self.dy * self.dy + dg * self.dyy,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(
            k * self.v,
            k * self.dx,
            k * self.dy,
            k * self.dxx,
            k * self.dxy,
            k * self.dyy,
        )
    }

    pub fn recip(self) -> Result<Self> {
        if self.v.abs() < DIV_EPS {
            return Err(Error::DivideByZero(self.v));
        }
        let r = 1.0 / self.v;
        Ok(self.compose(r, -r * r, 2.0 * r * r * r))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Result<Self> {
        if !(self.v > 0.0) {
            return Err(Error::BranchDomain {
                function: "ln",
                value: self.v,
            });
        }
        let r = 1.0 / self.v;
        Ok(self.compose(self.v.ln(), r, -r * r))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn tan(self) -> Result<Self> {
        let c = self.v.cos();
        if c.abs() <= TAN_POLE_GUARD {
            return Err(Error::BranchDomain {
                function: "tan",
                value: self.v,
            });
        }
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        Ok(self.compose(t, sec2, 2.0 * t * sec2))
    }

    pub fn sqrt(self) -> Result<Self> {
        if !(self.v > 0.0) {
            return Err(Error::BranchDomain {
                function: "sqrt",
                value: self.v,
            });
        }
        let s = self.v.sqrt();
        let d = 0.5 / s;
        Ok(self.compose(s, d, -0.5 * d / self.v))
    }

    /// Real power. Integer exponents accept any base (except zero with a
    /// negative exponent); other exponents need a positive base.
    pub fn powf(self, e: f64) -> Result<Self> {
        let x = self.v;
        if e == 0.0 {
            return Ok(Self::constant(1.0));
        }
        if e.fract() == 0.0 && e.abs() < 2f64.powi(31) {
            if x == 0.0 && e < 0.0 {
                return Err(Error::BranchDomain {
                    function: "pow",
                    value: x,
                });
            }
            let n = e as i32;
            let d1 = if n == 0 { 0.0 } else { e * x.powi(n - 1) };
            let d2 = if n == 0 || n == 1 {
                0.0
            } else {
                e * (e - 1.0) * x.powi(n - 2)
            };
            return Ok(self.compose(x.powi(n), d1, d2));
        }
        if !(x > 0.0) {
            return Err(Error::BranchDomain {
                function: "pow",
                value: x,
            });
        }
        let p = x.powf(e);
        Ok(self.compose(p, e * p / x, e * (e - 1.0) * p / (x * x)))
    }
}

impl fmt::Display for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {})",
            self.v, self.dx, self.dy, self.dxx, self.dxy, self.dyy
        )
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, b: Jet2) -> Jet2 {
        Jet2::new(
            self.v + b.v,
            self.dx + b.dx,
            self.dy + b.dy,
            self.dxx + b.dxx,
            self.dxy + b.dxy,
            self.dyy + b.dyy,
        )
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, b: Jet2) -> Jet2 {
        Jet2::new(
            self.v - b.v,
            self.dx - b.dx,
            self.dy - b.dy,
            self.dxx - b.dxx,
            self.dxy - b.dxy,
            self.dyy - b.dyy,
        )
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, b: Jet2) -> Jet2 {
        let a = self;
        Jet2 {
            v: a.v * b.v,
            dx: a.dx * b.v + a.v * b.dx,
            dy: a.dy * b.v + a.v * b.dy,
            dxx: a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx,
            dxy: a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy,
            dyy: a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, k: f64) -> Jet2 {
        self.v += k;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, k: f64) -> Jet2 {
        self.v -= k;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, j: Jet2) -> Jet2 {
        j + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, j: Jet2) -> Jet2 {
        -j + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j.scale(self)
    }
}

type Fn1 = dyn Fn(Jet2) -> Result<Jet2> + Send + Sync;
type Fn2 = dyn Fn(Jet2, Jet2) -> Result<Jet2> + Send + Sync;

/// A twice-differentiable scalar field of one variable, evaluated on jets.
///
/// Feeding it a coordinate jet gives `f`, `f'`, `f''` in the `dx` slots;
/// feeding it a composite jet (say `y + a*x`) applies the chain rule.
#[derive(Clone)]
pub struct Field1(Arc<Fn1>);

impl Field1 {
    pub fn new(f: impl Fn(Jet2) -> Result<Jet2> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| Ok(Jet2::constant(c)))
    }

    pub fn eval(&self, t: Jet2) -> Result<Jet2> {
        (self.0)(t)
    }

    /// `(f(t), f'(t), f''(t))`.
    pub fn derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        let j = self.eval(Jet2::x(t))?;
        Ok((j.v, j.dx, j.dxx))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.eval(Jet2::constant(t))?.v)
    }
}

impl fmt::Debug for Field1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Field1(..)")
    }
}

/// A twice-differentiable scalar field of two variables, evaluated on jets.
#[derive(Clone)]
pub struct Field2(Arc<Fn2>);

impl Field2 {
    pub fn new(f: impl Fn(Jet2, Jet2) -> Result<Jet2> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// Evaluates on arbitrary input jets (used for composition).
    pub fn eval_jets(&self, u: Jet2, v: Jet2) -> Result<Jet2> {
        (self.0)(u, v)
    }

    /// Full jet of the field at `p`.
    pub fn jet(&self, p: [f64; 2]) -> Result<Jet2> {
        self.eval_jets(Jet2::x(p[0]), Jet2::y(p[1]))
    }

    /// Field value only; derivative slots are never seeded.
    pub fn value(&self, p: [f64; 2]) -> Result<f64> {
        Ok(self
            .eval_jets(Jet2::constant(p[0]), Jet2::constant(p[1]))?
            .v)
    }

    /// `lambda * self`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let f = self.clone();
        Self::new(move |u, v| Ok(f.eval_jets(u, v)?.scale(lambda)))
    }
}

impl fmt::Debug for Field2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Field2(..)")
    }
}
