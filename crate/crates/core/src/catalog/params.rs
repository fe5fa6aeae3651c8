use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jets::{Field1, Jet2};

/// Default profiles offered for the arbitrary-function families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Shape {
    /// `t^2`
    #[default]
    Quadratic,
    /// `e^t`
    Exp,
    /// `sin t`
    Sin,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Quadratic, Shape::Exp, Shape::Sin];

    pub fn field(&self) -> Field1 {
        match self {
            Shape::Quadratic => Field1::new(|t: Jet2| Ok(t * t)),
            Shape::Exp => Field1::new(|t: Jet2| Ok(t.exp())),
            Shape::Sin => Field1::new(|t: Jet2| Ok(t.sin())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Quadratic => "quadratic",
            Shape::Exp => "exp",
            Shape::Sin => "sin",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(Shape::Quadratic),
            "exp" => Ok(Shape::Exp),
            "sin" => Ok(Shape::Sin),
            other => Err(Error::InvalidArgument(format!(
                "unknown shape '{other}' (expected quadratic, exp or sin)"
            ))),
        }
    }
}

/// Caller-supplied parameter bindings. Unbound parameters take the family's
/// defaults; names outside the family's schema are rejected at build time.
#[derive(Clone, Debug, Default)]
pub struct Params {
    values: BTreeMap<String, f64>,
    shape: Option<Shape>,
    profile: Option<Field1>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn with_shape(mut self, shape: Shape) -> Self {
        self.shape = Some(shape);
        self
    }

    /// Arbitrary one-variable profile for the families that quantify over one.
    pub fn with_profile(mut self, f: Field1) -> Self {
        self.profile = Some(f);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn set_shape(&mut self, shape: Shape) {
        self.shape = Some(shape);
    }

    /// Parses one `name=value` binding. `shape=<name>` selects a profile.
    pub fn bind(&mut self, binding: &str) -> Result<()> {
        let (name, value) = binding
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got '{binding}'")))?;
        let name = name.trim();
        let value = value.trim();
        if name == "shape" {
            self.shape = Some(value.parse()?);
            return Ok(());
        }
        let v: f64 = value
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("parameter {name}: '{value}' is not a number")))?;
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!("parameter {name} must be finite")));
        }
        self.values.insert(name.to_string(), v);
        Ok(())
    }

    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    pub fn shape(&self) -> Option<Shape> {
        self.shape
    }

    pub fn profile(&self) -> Option<&Field1> {
        self.profile.as_ref()
    }
}

/// Parameters after defaults and schema checks.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub family: &'static str,
    values: BTreeMap<&'static str, f64>,
    pub shape: Shape,
    pub profile: Option<Field1>,
    takes_profile: bool,
}

impl Resolved {
    pub(crate) fn new(
        family: &'static str,
        schema: &'static [(&'static str, f64)],
        takes_profile: bool,
        params: &Params,
    ) -> Result<Self> {
        for name in params.values.keys() {
            if !schema.iter().any(|(n, _)| n == name) {
                return Err(Error::UnknownParameter {
                    family: family.to_string(),
                    name: name.clone(),
                });
            }
        }
        if !takes_profile && (params.shape.is_some() || params.profile.is_some()) {
            return Err(Error::UnknownParameter {
                family: family.to_string(),
                name: "shape".into(),
            });
        }
        let values = schema
            .iter()
            .map(|&(n, d)| (n, params.values.get(n).copied().unwrap_or(d)))
            .collect();
        Ok(Self {
            family,
            values,
            shape: params.shape.unwrap_or_default(),
            profile: params.profile.clone(),
            takes_profile,
        })
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values[name]
    }

    /// The caller's profile, or the selected default shape.
    pub fn profile_field(&self) -> Field1 {
        self.profile.clone().unwrap_or_else(|| self.shape.field())
    }

    pub fn require(&self, ok: bool, constraint: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                family: self.family.to_string(),
                constraint: constraint.to_string(),
            })
        }
    }

    /// `FAMILY(name=value,...)`, used as a report subject.
    pub fn subject(&self) -> String {
        let mut parts: Vec<String> = self.values.iter().map(|(n, v)| format!("{n}={v}")).collect();
        if self.takes_profile {
            match self.profile {
                Some(_) => parts.push("profile=custom".into()),
                None => parts.push(format!("shape={}", self.shape)),
            }
        }
        format!("{}({})", self.family, parts.join(","))
    }
}
