//! Coefficient functions `a(x)` on `[0, 1]` and generating functions `f(theta)`
//! on `[-pi, pi]`.

pub mod expr;
mod fourier;

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use expr::Expr;
pub use fourier::{fourier_coeffs_torus, fourier_coeffs_unit, FourierTable};

/// Slack allowed when checking that an argument lies in the domain.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("argument {at} outside the domain {domain}")]
    Domain { at: f64, domain: Domain },
    #[error("singular evaluation at {at} (value {value})")]
    Singular { at: f64, value: f64 },
    #[error("quadrature with {points} points is too coarse, need at least {needed}")]
    TooFewPoints { points: usize, needed: usize },
    #[error("function on {found} used where a function on {expected} is required")]
    WrongDomain { expected: Domain, found: Domain },
    #[error("malformed Fourier coefficient list: {0}")]
    BadCoefficients(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `[0, 1]`, Fourier basis `exp(2 pi i j x)`.
    UnitInterval,
    /// `[-pi, pi]`, Fourier basis `exp(i k theta)`.
    Torus,
}

impl Domain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Domain::UnitInterval => (0.0, 1.0),
            Domain::Torus => (-PI, PI),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitInterval => f.write_str("[0, 1]"),
            Domain::Torus => f.write_str("[-pi, pi]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    Builtin {
        name: &'static str,
        expr: Expr,
    },
    Expression {
        text: String,
        expr: Expr,
    },
    /// Finite list of `(index, coefficient)` pairs.
    Fourier(Vec<(i64, Complex64)>),
}

/// Builtin registry: name, expression text, domain.
const BUILTINS: &[(&str, &str, Domain)] = &[
    (
        "smooth-diffusion",
        "2*sin(x)+cos(2*x)",
        Domain::UnitInterval,
    ),
    ("inverse-quartic-root", "x^(-1/4)", Domain::UnitInterval),
    ("identity", "x", Domain::UnitInterval),
    ("one", "1", Domain::UnitInterval),
    ("zero", "0", Domain::UnitInterval),
    ("laplacian", "2-2*cos(t)", Domain::Torus),
    ("constant-one", "1", Domain::Torus),
];

/// A scalar function of one variable with its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    kind: FunctionKind,
    domain: Domain,
    singular: bool,
}

/// Parses an expression as a function on `[0, 1]`.
pub fn parse_expr(text: &str) -> Result<FunctionSpec, FunctionError> {
    FunctionSpec::expression(text, Domain::UnitInterval)
}

impl FunctionSpec {
    pub fn expression(text: &str, domain: Domain) -> Result<Self, FunctionError> {
        let expr = expr::parse(text)?;
        Ok(Self::with_flag(
            FunctionKind::Expression {
                text: text.to_string(),
                expr,
            },
            domain,
        ))
    }

    /// Builtin function by name, on its registered domain.
    pub fn builtin(name: &str) -> Option<Self> {
        BUILTINS
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(n, text, domain)| {
                let expr = expr::parse(text).expect("builtin expressions parse");
                Self::with_flag(FunctionKind::Builtin { name: n, expr }, domain)
            })
    }

    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTINS.iter().map(|(n, _, _)| *n)
    }

    /// Builtin name if `text` is one, otherwise a parsed expression.
    pub fn from_text(text: &str, domain: Domain) -> Result<Self, FunctionError> {
        match Self::builtin(text.trim()) {
            Some(b) => Ok(b.on(domain)),
            None => Self::expression(text, domain),
        }
    }

    pub fn fourier(coeffs: Vec<(i64, Complex64)>, domain: Domain) -> Result<Self, FunctionError> {
        if let Some((k, _)) = coeffs
            .iter()
            .find(|(_, c)| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(FunctionError::BadCoefficients(format!(
                "non-finite value at index {k}"
            )));
        }
        Ok(Self {
            kind: FunctionKind::Fourier(coeffs),
            domain,
            singular: false,
        })
    }

    /// Same function, reinterpreted on another domain.
    pub fn on(mut self, domain: Domain) -> Self {
        if self.domain != domain {
            self.domain = domain;
            self.singular = Self::probe_singular(&self.kind, domain);
        }
        self
    }

    fn with_flag(kind: FunctionKind, domain: Domain) -> Self {
        let singular = Self::probe_singular(&kind, domain);
        Self {
            kind,
            domain,
            singular,
        }
    }

    /// Non-finite values at either end of the domain flag an (integrable)
    /// endpoint singularity.
    fn probe_singular(kind: &FunctionKind, domain: Domain) -> bool {
        let expr = match kind {
            FunctionKind::Builtin { expr, .. } | FunctionKind::Expression { expr, .. } => expr,
            FunctionKind::Fourier(_) => return false,
        };
        let (lo, hi) = domain.bounds();
        !expr.eval(lo).is_finite() || !expr.eval(hi).is_finite()
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// True when the function blows up at an endpoint of its domain.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Default quadrature resolution: 4096 points, or 2^20 for singular functions.
    pub fn default_points(&self) -> usize {
        if self.singular {
            1 << 20
        } else {
            4096
        }
    }

    /// Human-readable description (builtin name, expression text or coefficient list).
    pub fn describe(&self) -> String {
        match &self.kind {
            FunctionKind::Builtin { name, .. } => (*name).to_string(),
            FunctionKind::Expression { text, .. } => text.clone(),
            FunctionKind::Fourier(c) => c
                .iter()
                .map(|(k, v)| format!("{k}:{}{:+}i", v.re, v.im))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }

    /// Point value; `t` must lie in the domain.
    pub fn eval(&self, t: f64) -> Result<Complex64, FunctionError> {
        let (lo, hi) = self.domain.bounds();
        if !(t >= lo - DOMAIN_SLACK && t <= hi + DOMAIN_SLACK) {
            return Err(FunctionError::Domain {
                at: t,
                domain: self.domain,
            });
        }
        self.eval_unchecked(t)
    }

    /// Point value with periodic wrap onto the domain.
    pub fn eval_periodic(&self, t: f64) -> Result<Complex64, FunctionError> {
        let (lo, hi) = self.domain.bounds();
        let period = hi - lo;
        let wrapped = if t < lo || t > hi {
            lo + (t - lo).rem_euclid(period)
        } else {
            t
        };
        self.eval_unchecked(wrapped)
    }

    fn eval_unchecked(&self, t: f64) -> Result<Complex64, FunctionError> {
        let value = match &self.kind {
            FunctionKind::Builtin { expr, .. } | FunctionKind::Expression { expr, .. } => {
                let v = expr.eval(t);
                if !v.is_finite() {
                    return Err(FunctionError::Singular { at: t, value: v });
                }
                Complex64::new(v, 0.0)
            }
            FunctionKind::Fourier(coeffs) => {
                let freq = match self.domain {
                    Domain::Torus => t,
                    Domain::UnitInterval => TAU * t,
                };
                coeffs
                    .iter()
                    .map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * freq))
                    .sum()
            }
        };
        Ok(value)
    }

    /// Real part; errors if the imaginary part is not negligible.
    pub fn eval_real(&self, t: f64) -> Result<f64, FunctionError> {
        let z = self.eval(t)?;
        if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
            return Err(FunctionError::Singular {
                at: t,
                value: f64::NAN,
            });
        }
        Ok(z.re)
    }
}

/// Parses `"k:value, k:value"` with complex values `re`, `re+imi`, `imi`.
pub fn parse_coefficient_list(text: &str) -> Result<Vec<(i64, Complex64)>, FunctionError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item.split_once(':').ok_or_else(|| {
                FunctionError::BadCoefficients(format!("missing ':' in '{}'", item.trim()))
            })?;
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| FunctionError::BadCoefficients(format!("bad index '{}'", k.trim())))?;
            let v = parse_complex(v.trim()).ok_or_else(|| {
                FunctionError::BadCoefficients(format!("bad value '{}'", v.trim()))
            })?;
            Ok((k, v))
        })
        .collect()
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` (also accepts `j` for the unit).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        let re: f64 = s.parse().ok()?;
        return re.is_finite().then(|| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not the leading sign or part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re, im) = match split {
        Some(idx) => (body[..idx].trim(), body[idx..].trim()),
        None => ("0", body.trim()),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().ok()?,
    };
    let re: f64 = re.parse().ok()?;
    let z = Complex64::new(re, im);
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}
