//! Coefficient scalars for the two arithmetic modes.
//!
//! Certificates from the literature are stored and re-expanded over exact
//! rationals so their residuals are exactly zero; everything that touches a
//! numerical solver runs over `f64`. The two modes never mix: a polynomial is
//! generic over its scalar type and conversions are explicit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Float,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float => "float",
        }
    }
}

/// Operations every coefficient scalar must support.
///
/// Arithmetic goes through `num_traits`; this trait adds the conversions,
/// parsing, and rendering the polynomial layer needs.
pub trait Coeff:
    Clone
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Signed
    + std::fmt::Debug
    + Send
    + Sync
    + 'static
{
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Parses either an integer, a `p/q` fraction, or a decimal literal.
    fn parse_str(s: &str) -> Result<Self, String>;
    /// Round-trippable textual form for serialization.
    fn render(&self) -> String;
}

impl Coeff for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            if d == 0.0 {
                return Err("zero denominator".into());
            }
            return Ok(n / d);
        }
        s.parse().map_err(|e| format!("bad float literal `{s}`: {e}"))
    }

    fn render(&self) -> String {
        // `Display` for f64 is shortest round-trip.
        format!("{self}")
    }
}

impl Coeff for Rat {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // BigRational has no direct conversion; go through the parts.
        let num = self.numer();
        let den = self.denom();
        bigint_to_f64(num) / bigint_to_f64(den)
    }

    fn parse_str(s: &str) -> Result<Self, String> {
        parse_rat(s)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `p/q`, or a decimal like `-26.5` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty scalar".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator `{n}`: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator `{d}`: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|e| format!("bad decimal `{s}`: {e}"))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal `{s}`"));
        }
        let digits: BigInt = frac_part.parse().map_err(|e| format!("bad decimal `{s}`: {e}"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(digits, scale);
        let int = Rat::from_integer(int_part);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = s.parse().map_err(|e| format!("bad integer `{s}`: {e}"))?;
    Ok(Rat::from_integer(n))
}

/// Exact rational from a small decimal as printed in tables (e.g. `0.9044`).
pub fn rat_decimal(s: &str) -> Rat {
    parse_rat(s).expect("literal decimal")
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rat("0.9044").unwrap(), rat(9044, 10000));
        assert_eq!(parse_rat("-26.5").unwrap(), rat(-53, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn render_round_trips() {
        let v = rat(-22, 7);
        assert_eq!(Rat::parse_str(&v.render()).unwrap(), v);
        let f = -0.125f64;
        assert_eq!(f64::parse_str(&f.render()).unwrap(), f);
    }
}
