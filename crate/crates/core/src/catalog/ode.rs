//! Closed-form profiles that solve the classification ODEs.

use crate::error::{Error, Result};
use crate::jets::{Field1, Jet2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscVariant {
    /// Built from the characteristic roots `c1 (-a ± i) / (1 + a^2)`.
    Corrected,
    /// `c2 sin(c1 t / (1 + a^2)) + c3 cos(c1 t / (1 + a^2))`, without the
    /// exponential envelope.
    Printed,
}

/// General solution of `(1 + a^2) f'' + 2 a c1 f' + c1^2 f = 0`, the
/// condition for `z = e^{c1 x} f2(y + a x)` to be minimal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryProfile {
    pub c1: f64,
    pub a: f64,
    pub c2: f64,
    pub c3: f64,
    pub variant: OscVariant,
}

impl OscillatoryProfile {
    pub fn new(c1: f64, a: f64, amplitudes: (f64, f64), variant: OscVariant) -> Result<Self> {
        if c1 == 0.0 {
            return Err(Error::InvalidArgument("c1 must be nonzero".into()));
        }
        if a == 0.0 {
            return Err(Error::InvalidArgument("a must be nonzero".into()));
        }
        Ok(Self {
            c1,
            a,
            c2: amplitudes.0,
            c3: amplitudes.1,
            variant,
        })
    }

    /// Real part of the characteristic roots (zero for the printed variant).
    pub fn decay(&self) -> f64 {
        match self.variant {
            OscVariant::Corrected => -self.a * self.c1 / (1.0 + self.a * self.a),
            OscVariant::Printed => 0.0,
        }
    }

    pub fn frequency(&self) -> f64 {
        self.c1 / (1.0 + self.a * self.a)
    }

    pub fn field(&self) -> Field1 {
        let (alpha, beta, c2, c3) = (self.decay(), self.frequency(), self.c2, self.c3);
        match self.variant {
            OscVariant::Corrected => Field1::new(move |t: Jet2| {
                let phase = t * beta;
                Ok((t * alpha).exp() * (phase.cos() * c2 + phase.sin() * c3))
            }),
            OscVariant::Printed => Field1::new(move |t: Jet2| {
                let phase = t * beta;
                Ok(phase.sin() * c2 + phase.cos() * c3)
            }),
        }
    }

    /// Right-hand side `f'' = -(2 a c1 f' + c1^2 f) / (1 + a^2)`.
    pub fn second_derivative(&self, f: f64, df: f64) -> f64 {
        -(2.0 * self.a * self.c1 * df + self.c1 * self.c1 * f) / (1.0 + self.a * self.a)
    }
}

pub fn solve_type1_minimal_ode(
    c1: f64,
    a: f64,
    amplitudes: (f64, f64),
    variant: OscVariant,
) -> Result<Field1> {
    Ok(OscillatoryProfile::new(c1, a, amplitudes, variant)?.field())
}

/// `f2(u) = -1/(2 H0 c1^2) sqrt(c2 - 4 H0 c1^2 u) + c3`, solving
/// `f2'' / f2'^3 = 2 H0 c1^2` (type 2 with constant `f1 = c1` and `H = H0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CmcProfile {
    pub h0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CmcProfile {
    pub fn new(h0: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if h0 == 0.0 {
            return Err(Error::InvalidArgument("H0 must be nonzero".into()));
        }
        if c1 == 0.0 {
            return Err(Error::InvalidArgument("c1 must be nonzero".into()));
        }
        Ok(Self { h0, c1, c2, c3 })
    }

    /// `2 H0 c1^2`.
    pub fn k(&self) -> f64 {
        2.0 * self.h0 * self.c1 * self.c1
    }

    pub fn radicand(&self, u: f64) -> f64 {
        self.c2 - 2.0 * self.k() * u
    }

    pub fn field(&self) -> Field1 {
        let (k, c2, c3) = (self.k(), self.c2, self.c3);
        Field1::new(move |u: Jet2| {
            let root = (c2 - u * (2.0 * k)).sqrt()?;
            Ok(root * (-1.0 / k) + c3)
        })
    }

    /// Right-hand side `f'' = 2 H0 c1^2 f'^3`.
    pub fn second_derivative(&self, df: f64) -> f64 {
        self.k() * df * df * df
    }
}
