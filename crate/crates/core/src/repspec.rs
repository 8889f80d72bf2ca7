//! The rep-spec mini-language shared by the library and the command line.
//!
//! ```text
//! spec  := "triv" | "st"
//!        | "ind(" exp "," exp ")"      Ind_B(|·|^a ⊗ |·|^b), non-normalized
//!        | "ps(" exp "," exp ")"       Ind_B((|·|^a ⊗ |·|^b)·δ_T^{-1/2})
//!        | "char(" int "," int ")"     normalized induction from Λ-unit values at π
//!        | "absdet^" exp               |det|^k
//!        | "nrd^" exp                  |Nrd|^k on D^×, half slope only
//!        | "cusp:" (path | "gl2f2-sign")
//! exp   := ["-"] digits ["/" digits]
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::chars::unram::{check_half_integer, format_exp};
use crate::error::{Error, Result};

pub const BUILTIN_SIGN: &str = "gl2f2-sign";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CuspSource {
    Builtin(String),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepSpec {
    Triv,
    St,
    Ind(Rational64, Rational64),
    Ps(Rational64, Rational64),
    Char(u64, u64),
    AbsDet(Rational64),
    Nrd(Rational64),
    Cusp(CuspSource),
}

fn perr(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse { input: input.to_string(), reason: reason.into() }
}

fn parse_exp(input: &str, s: &str) -> Result<Rational64> {
    let s = s.trim();
    let r = if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| perr(input, format!("bad numerator {a:?}")))?;
        let b: i64 = b.trim().parse().map_err(|_| perr(input, format!("bad denominator {b:?}")))?;
        if b == 0 {
            return Err(perr(input, "zero denominator"));
        }
        Rational64::new(a, b)
    } else {
        Rational64::from_integer(s.parse().map_err(|_| perr(input, format!("bad exponent {s:?}")))?)
    };
    check_half_integer(r)?;
    Ok(r)
}

fn args<'a>(input: &str, body: &'a str) -> Result<(&'a str, &'a str)> {
    let inner = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| perr(input, "expected a parenthesized argument pair"))?;
    inner.split_once(',').ok_or_else(|| perr(input, "expected two comma-separated arguments"))
}

impl FromStr for RepSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "triv" {
            return Ok(Self::Triv);
        }
        if s == "st" {
            return Ok(Self::St);
        }
        if let Some(rest) = s.strip_prefix("cusp:") {
            if rest.is_empty() {
                return Err(perr(input, "missing cuspidal table"));
            }
            return Ok(Self::Cusp(if rest == BUILTIN_SIGN {
                CuspSource::Builtin(rest.to_string())
            } else {
                CuspSource::Path(rest.to_string())
            }));
        }
        if let Some(rest) = s.strip_prefix("absdet^") {
            return Ok(Self::AbsDet(parse_exp(input, rest)?));
        }
        if let Some(rest) = s.strip_prefix("nrd^") {
            return Ok(Self::Nrd(parse_exp(input, rest)?));
        }
        if let Some(rest) = s.strip_prefix("ind") {
            let (a, b) = args(input, rest)?;
            return Ok(Self::Ind(parse_exp(input, a)?, parse_exp(input, b)?));
        }
        if let Some(rest) = s.strip_prefix("ps") {
            let (a, b) = args(input, rest)?;
            return Ok(Self::Ps(parse_exp(input, a)?, parse_exp(input, b)?));
        }
        if let Some(rest) = s.strip_prefix("char") {
            let (a, b) = args(input, rest)?;
            let a = a.parse().map_err(|_| perr(input, format!("bad character value {a:?}")))?;
            let b = b.parse().map_err(|_| perr(input, format!("bad character value {b:?}")))?;
            return Ok(Self::Char(a, b));
        }
        Err(perr(input, "unknown representation"))
    }
}

impl RepSpec {
    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    /// ps(a,b) = ind(a+1/2, b-1/2); other specs are returned unchanged.
    pub fn unnormalized(&self) -> Self {
        let h = Rational64::new(1, 2);
        match self {
            Self::Ps(a, b) => Self::Ind(a + h, b - h),
            other => other.clone(),
        }
    }

    /// The contragredient, where one is available symbolically.
    pub fn dual(&self) -> Result<Self> {
        let one = Rational64::from_integer(1);
        Ok(match self {
            Self::Triv => Self::Triv,
            Self::St => Self::St,
            Self::Ind(a, b) => Self::Ind(-a + one, -b - one),
            Self::Ps(a, b) => Self::Ps(-a, -b),
            Self::AbsDet(k) => Self::AbsDet(-k),
            Self::Nrd(k) => Self::Nrd(-k),
            other => return Err(Error::DualNotAvailable(other.to_string())),
        })
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Triv => write!(f, "triv"),
            Self::St => write!(f, "st"),
            Self::Ind(a, b) => write!(f, "ind({},{})", format_exp(*a), format_exp(*b)),
            Self::Ps(a, b) => write!(f, "ps({},{})", format_exp(*a), format_exp(*b)),
            Self::Char(a, b) => write!(f, "char({a},{b})"),
            Self::AbsDet(k) => write!(f, "absdet^{}", format_exp(*k)),
            Self::Nrd(k) => write!(f, "nrd^{}", format_exp(*k)),
            Self::Cusp(CuspSource::Builtin(s)) | Self::Cusp(CuspSource::Path(s)) => write!(f, "cusp:{s}"),
        }
    }
}
