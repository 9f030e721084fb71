//! JSON form of polynomials:
//! `{"nvars": n, "mode": "rational"|"float", "terms": [{"exp": [...], "coef": "..."}]}`

use super::{MultiIndex, PolyError, Polynomial};
use crate::scalar::{Coeff, Rat, ScalarMode};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub mode: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

/// Mode-tagged polynomial for I/O boundaries.
#[derive(Debug, Clone)]
pub enum AnyPolynomial {
    Rational(Polynomial<Rat>),
    Float(Polynomial<f64>),
}

impl AnyPolynomial {
    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyPolynomial::Rational(_) => ScalarMode::Rational,
            AnyPolynomial::Float(_) => ScalarMode::Float,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            AnyPolynomial::Rational(p) => p.nvars(),
            AnyPolynomial::Float(p) => p.nvars(),
        }
    }

    pub fn as_float(&self) -> Polynomial<f64> {
        match self {
            AnyPolynomial::Rational(p) => p.to_float(),
            AnyPolynomial::Float(p) => p.clone(),
        }
    }

    pub fn to_json(&self) -> PolyJson {
        match self {
            AnyPolynomial::Rational(p) => poly_to_json(p),
            AnyPolynomial::Float(p) => poly_to_json(p),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, PolyError> {
        match j.mode.as_str() {
            "rational" => Ok(AnyPolynomial::Rational(poly_from_json(j)?)),
            "float" => Ok(AnyPolynomial::Float(poly_from_json(j)?)),
            other => Err(PolyError::Parse {
                line: 1,
                col: 1,
                msg: format!("unknown scalar mode `{other}`"),
            }),
        }
    }
}

pub fn poly_to_json<T: Coeff>(p: &Polynomial<T>) -> PolyJson {
    PolyJson {
        nvars: p.nvars(),
        mode: T::MODE.as_str().to_string(),
        terms: p
            .terms()
            .map(|(exp, c)| TermJson { exp: exp.0.clone(), coef: c.render() })
            .collect(),
    }
}

pub fn poly_from_json<T: Coeff>(j: &PolyJson) -> Result<Polynomial<T>, PolyError> {
    let mut p = Polynomial::zero(j.nvars);
    for t in &j.terms {
        if t.exp.len() != j.nvars {
            return Err(PolyError::DimensionMismatch { expected: j.nvars, got: t.exp.len() });
        }
        let c = T::parse_str(&t.coef)
            .map_err(|m| PolyError::Parse { line: 1, col: 1, msg: m })?;
        p.add_term(MultiIndex(t.exp.clone()), c);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn json_round_trip_exact() {
        let p = parse_polynomial::<Rat>("x1^2 - 1/3*x2 + 7", Some(2)).unwrap();
        let j = poly_to_json(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        let q: Polynomial<Rat> = poly_from_json(&back).unwrap();
        assert_eq!(p, q);
        assert_eq!(back.mode, "rational");
    }

    #[test]
    fn json_round_trip_float() {
        let p = parse_polynomial::<f64>("0.1*x1^3 - 2.5", Some(1)).unwrap();
        let j = poly_to_json(&p);
        let q: Polynomial<f64> = poly_from_json(&j).unwrap();
        assert_eq!(p, q);
    }
}
