//! Disjunctive sos certificates: per-region multipliers plus a Gram-encoded
//! or explicit-squares sos part, with verification by re-expansion.
//!
//! Every region `k` of a certificate asserts the identity
//! `p(x) − γ·N(x) = s_{k,0}(x) + Σ_j s_{k,j}(x)·q_{k,j}(x)`
//! with each `s` a sum of squares. Verification re-expands both sides; in
//! rational mode the residual of a correct certificate is exactly zero.

use crate::poly::{LinearMap, Polynomial};
use crate::scalar::{Coeff, Rat};
use crate::symmat::{symmatrix_from_json, symmatrix_to_json, SymMatrix, SymMatrixJson};
use serde::{Deserialize, Serialize};

/// The normalizing polynomial `N` multiplying the bound γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalizer {
    One,
    SphereNorm { degree: u32 },
}

impl Normalizer {
    pub fn polynomial<T: Coeff>(&self, nvars: usize) -> Polynomial<T> {
        match self {
            Normalizer::One => Polynomial::one(nvars),
            Normalizer::SphereNorm { degree } => crate::poly::sphere_norm_pow(nvars, *degree),
        }
    }
}

/// Provenance of one region of a disjunction.
#[derive(Debug, Clone)]
pub enum RegionDesc<T: Coeff> {
    /// Trivial region covering everything (plain sos).
    WholeSpace,
    /// Simplicial cone spanned by the columns of a generator matrix.
    Generator(LinearMap<T>),
    /// Spherical cap around a net point.
    Cap { xstar: Vec<T>, dprime: u32, t: T },
    /// Raw inequality list.
    Inequalities(Vec<Polynomial<T>>),
}

/// A sum of squares, either as a PSD Gram factor over a basis of
/// polynomials or as an explicit weighted list of squares `Σ w_i·g_i²`.
#[derive(Debug, Clone)]
pub enum SosPart<T: Coeff> {
    Gram { basis: Vec<Polynomial<T>>, matrix: SymMatrix<T> },
    Squares { terms: Vec<(T, Polynomial<T>)> },
}

impl<T: Coeff> SosPart<T> {
    pub fn zero(nvars: usize) -> Self {
        SosPart::Squares { terms: vec![(T::zero(), Polynomial::zero(nvars))] }
    }

    pub fn expand(&self) -> Polynomial<T> {
        match self {
            SosPart::Gram { basis, matrix } => {
                let n = basis.len();
                assert_eq!(matrix.n(), n);
                let nvars = basis.first().map_or(0, |b| b.nvars());
                let mut acc = Polynomial::zero(nvars);
                for i in 0..n {
                    for j in i..n {
                        let g = matrix.get(i, j);
                        if g.is_zero() {
                            continue;
                        }
                        let prod = basis[i].mul(&basis[j]);
                        let w = if i == j { g } else { g * T::from_i64(2) };
                        acc = acc.add(&prod.scale(&w));
                    }
                }
                acc
            }
            SosPart::Squares { terms } => {
                let nvars = terms.first().map_or(0, |(_, p)| p.nvars());
                let mut acc = Polynomial::zero(nvars);
                for (w, p) in terms {
                    if w.is_zero() {
                        continue;
                    }
                    acc = acc.add(&p.mul(p).scale(w));
                }
                acc
            }
        }
    }

    /// Is this part certifiably a sum of squares? Gram factors pass on exact
    /// row diagonal dominance (checked in the scalar mode itself) or a float
    /// eigenvalue bound `λ_min ≥ −1e−8·(1+trace)`; explicit squares need
    /// nonnegative weights.
    pub fn psd_check(&self) -> Result<(), String> {
        match self {
            SosPart::Gram { matrix, .. } => {
                if matrix.is_diagonally_dominant() {
                    return Ok(());
                }
                let tol = -1e-8 * (1.0 + matrix.trace_f64().abs());
                let lam = matrix.min_eigenvalue();
                if lam >= tol {
                    Ok(())
                } else {
                    Err(format!("Gram factor has min eigenvalue {lam:.3e} (tolerance {tol:.3e})"))
                }
            }
            SosPart::Squares { terms } => {
                for (w, _) in terms {
                    if *w < T::zero() {
                        return Err(format!("negative square weight {:?}", w.to_f64()));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertRegion<T: Coeff> {
    pub descriptor: RegionDesc<T>,
    /// `(q_{k,j}, s_{k,j})` pairs.
    pub multipliers: Vec<(Polynomial<T>, SosPart<T>)>,
    /// The base sos `s_{k,0}`, possibly split into several parts.
    pub base: Vec<SosPart<T>>,
}

#[derive(Debug, Clone)]
pub struct SosCertificate<T: Coeff> {
    pub nvars: usize,
    pub bound: f64,
    pub normalizer: Normalizer,
    pub regions: Vec<CertRegion<T>>,
    pub solver_status: String,
    /// Verification residual, filled in by [`verify_certificate`].
    pub residual: Option<f64>,
}

#[derive(Debug)]
pub struct VerifyReport<T: Coeff> {
    /// max coefficientwise |defect| over all region identities
    pub residual: T,
    pub psd_ok: bool,
    pub psd_violations: Vec<String>,
}

impl<T: Coeff> VerifyReport<T> {
    pub fn residual_f64(&self) -> f64 {
        self.residual.to_f64()
    }
}

/// Re-expands every region identity of `cert` against `p` and checks the
/// multiplier parts are certifiably sos.
pub fn verify_certificate<T: Coeff>(p: &Polynomial<T>, cert: &SosCertificate<T>) -> VerifyReport<T> {
    verify_with_bound(p, cert, &bound_as_scalar::<T>(cert.bound))
}

/// Same as [`verify_certificate`] with the bound supplied exactly (rational
/// certificates store γ in the scalar mode of the polynomial).
pub fn verify_with_bound<T: Coeff>(
    p: &Polynomial<T>,
    cert: &SosCertificate<T>,
    gamma: &T,
) -> VerifyReport<T> {
    let n_poly: Polynomial<T> = cert.normalizer.polynomial(cert.nvars);
    let target = p.sub(&n_poly.scale(gamma));
    let mut residual = T::zero();
    let mut psd_ok = true;
    let mut psd_violations = Vec::new();
    for (k, region) in cert.regions.iter().enumerate() {
        let mut rhs = Polynomial::zero(cert.nvars);
        for part in &region.base {
            rhs = rhs.add(&part.expand());
            if let Err(e) = part.psd_check() {
                psd_ok = false;
                psd_violations.push(format!("region {k} base: {e}"));
            }
        }
        for (q, s) in &region.multipliers {
            rhs = rhs.add(&s.expand().mul(q));
            if let Err(e) = s.psd_check() {
                psd_ok = false;
                psd_violations.push(format!("region {k} multiplier: {e}"));
            }
        }
        let defect = target.sub(&rhs);
        for (_, c) in defect.terms() {
            let a = c.abs();
            if a > residual {
                residual = a;
            }
        }
    }
    VerifyReport { residual, psd_ok, psd_violations }
}

fn bound_as_scalar<T: Coeff>(bound: f64) -> T {
    match T::MODE {
        crate::scalar::ScalarMode::Float => T::parse_str(&format!("{bound}")).unwrap(),
        crate::scalar::ScalarMode::Rational => {
            if bound == 0.0 {
                T::zero()
            } else {
                // exact binary expansion of the float bound
                T::parse_str(&rat_from_f64_string(bound)).unwrap()
            }
        }
    }
}

fn rat_from_f64_string(v: f64) -> String {
    let r = Rat::from_float(v).expect("finite bound");
    format!("{}/{}", r.numer(), r.denom())
}

// --- JSON -----------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct SosCertificateJson {
    pub nvars: usize,
    pub bound: f64,
    pub normalizer: String,
    pub regions: Vec<RegionJson>,
    pub solver_status: String,
    pub residual: Option<f64>,
}

#[derive(Serialize, Deserialize)]
pub struct RegionJson {
    pub descriptor: DescriptorJson,
    pub multipliers: Vec<MultiplierJson>,
    pub base: Vec<SosPartJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum DescriptorJson {
    #[serde(rename = "whole_space")]
    WholeSpace,
    #[serde(rename = "generator")]
    Generator { n: usize, rows: Vec<String> },
    #[serde(rename = "cap")]
    Cap { xstar: Vec<String>, dprime: u32, t: String },
    #[serde(rename = "inequalities")]
    Inequalities { polys: Vec<crate::poly::serial::PolyJson> },
}

#[derive(Serialize, Deserialize)]
pub struct MultiplierJson {
    pub q: crate::poly::serial::PolyJson,
    pub s: SosPartJson,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SosPartJson {
    #[serde(rename = "gram")]
    Gram { basis: Vec<crate::poly::serial::PolyJson>, matrix: SymMatrixJson },
    #[serde(rename = "squares")]
    Squares { terms: Vec<(String, crate::poly::serial::PolyJson)> },
}

pub fn certificate_to_json<T: Coeff>(cert: &SosCertificate<T>) -> SosCertificateJson {
    use crate::poly::serial::poly_to_json;
    let part = |p: &SosPart<T>| match p {
        SosPart::Gram { basis, matrix } => SosPartJson::Gram {
            basis: basis.iter().map(poly_to_json).collect(),
            matrix: symmatrix_to_json(matrix),
        },
        SosPart::Squares { terms } => SosPartJson::Squares {
            terms: terms.iter().map(|(w, p)| (w.render(), poly_to_json(p))).collect(),
        },
    };
    SosCertificateJson {
        nvars: cert.nvars,
        bound: cert.bound,
        normalizer: match cert.normalizer {
            Normalizer::One => "one".to_string(),
            Normalizer::SphereNorm { degree } => format!("sphere_norm_{degree}"),
        },
        regions: cert
            .regions
            .iter()
            .map(|r| RegionJson {
                descriptor: match &r.descriptor {
                    RegionDesc::WholeSpace => DescriptorJson::WholeSpace,
                    RegionDesc::Generator(v) => DescriptorJson::Generator {
                        n: v.n(),
                        rows: (0..v.n())
                            .flat_map(|i| (0..v.n()).map(move |j| (i, j)))
                            .map(|(i, j)| v.get(i, j).render())
                            .collect(),
                    },
                    RegionDesc::Cap { xstar, dprime, t } => DescriptorJson::Cap {
                        xstar: xstar.iter().map(|v| v.render()).collect(),
                        dprime: *dprime,
                        t: t.render(),
                    },
                    RegionDesc::Inequalities(polys) => DescriptorJson::Inequalities {
                        polys: polys.iter().map(poly_to_json).collect(),
                    },
                },
                multipliers: r
                    .multipliers
                    .iter()
                    .map(|(q, s)| MultiplierJson { q: poly_to_json(q), s: part(s) })
                    .collect(),
                base: r.base.iter().map(&part).collect(),
            })
            .collect(),
        solver_status: cert.solver_status.clone(),
        residual: cert.residual,
    }
}

pub fn certificate_from_json<T: Coeff>(j: &SosCertificateJson) -> Result<SosCertificate<T>, String> {
    use crate::poly::serial::poly_from_json;
    let part = |p: &SosPartJson| -> Result<SosPart<T>, String> {
        Ok(match p {
            SosPartJson::Gram { basis, matrix } => SosPart::Gram {
                basis: basis
                    .iter()
                    .map(|b| poly_from_json(b).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
                matrix: symmatrix_from_json(matrix)?,
            },
            SosPartJson::Squares { terms } => SosPart::Squares {
                terms: terms
                    .iter()
                    .map(|(w, p)| {
                        Ok((
                            T::parse_str(w)?,
                            poly_from_json(p).map_err(|e: crate::poly::PolyError| e.to_string())?,
                        ))
                    })
                    .collect::<Result<_, String>>()?,
            },
        })
    };
    let normalizer = if j.normalizer == "one" {
        Normalizer::One
    } else if let Some(d) = j.normalizer.strip_prefix("sphere_norm_") {
        Normalizer::SphereNorm { degree: d.parse().map_err(|_| "bad normalizer degree")? }
    } else {
        return Err(format!("unknown normalizer `{}`", j.normalizer));
    };
    let mut regions = Vec::new();
    for r in &j.regions {
        let descriptor = match &r.descriptor {
            DescriptorJson::WholeSpace => RegionDesc::WholeSpace,
            DescriptorJson::Generator { n, rows } => {
                let vals: Result<Vec<T>, String> = rows.iter().map(|s| T::parse_str(s)).collect();
                RegionDesc::Generator(LinearMap::from_rows(*n, vals?))
            }
            DescriptorJson::Cap { xstar, dprime, t } => RegionDesc::Cap {
                xstar: xstar.iter().map(|s| T::parse_str(s)).collect::<Result<_, _>>()?,
                dprime: *dprime,
                t: T::parse_str(t)?,
            },
            DescriptorJson::Inequalities { polys } => RegionDesc::Inequalities(
                polys
                    .iter()
                    .map(|p| poly_from_json(p).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
            ),
        };
        let multipliers = r
            .multipliers
            .iter()
            .map(|m| {
                Ok((
                    poly_from_json(&m.q).map_err(|e: crate::poly::PolyError| e.to_string())?,
                    part(&m.s)?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let base = r.base.iter().map(&part).collect::<Result<Vec<_>, String>>()?;
        regions.push(CertRegion { descriptor, multipliers, base });
    }
    Ok(SosCertificate {
        nvars: j.nvars,
        bound: j.bound,
        normalizer,
        regions,
        solver_status: j.solver_status.clone(),
        residual: j.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::scalar::{rat_int, Rat};
    use num_traits::Zero;

    fn rp(text: &str, n: usize) -> Polynomial<Rat> {
        parse_polynomial::<Rat>(text, Some(n)).unwrap()
    }

    #[test]
    fn motzkin_disjunctive_identity_verifies_exactly() {
        // M = (1−x1x2)² + (x1²x2−x1x2²)² + 2x1x2(1−x1x2)²
        //   = (1+x1x2)² + (x1²x2+x1x2²)² − 2x1x2(1+x1x2)²
        let m = rp("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
        let h = rp("x1*x2", 2);
        let cert = SosCertificate {
            nvars: 2,
            bound: 0.0,
            normalizer: Normalizer::One,
            regions: vec![
                CertRegion {
                    descriptor: RegionDesc::Inequalities(vec![h.clone()]),
                    multipliers: vec![(
                        h.clone(),
                        SosPart::Squares {
                            terms: vec![(rat_int(2), rp("1 - x1*x2", 2))],
                        },
                    )],
                    base: vec![SosPart::Squares {
                        terms: vec![
                            (rat_int(1), rp("1 - x1*x2", 2)),
                            (rat_int(1), rp("x1^2*x2 - x1*x2^2", 2)),
                        ],
                    }],
                },
                CertRegion {
                    descriptor: RegionDesc::Inequalities(vec![h.neg()]),
                    multipliers: vec![(
                        h.neg(),
                        SosPart::Squares {
                            terms: vec![(rat_int(2), rp("1 + x1*x2", 2))],
                        },
                    )],
                    base: vec![SosPart::Squares {
                        terms: vec![
                            (rat_int(1), rp("1 + x1*x2", 2)),
                            (rat_int(1), rp("x1^2*x2 + x1*x2^2", 2)),
                        ],
                    }],
                },
            ],
            solver_status: "stored".to_string(),
            residual: None,
        };
        let report = verify_certificate(&m, &cert);
        assert!(report.residual.is_zero(), "residual = {:?}", report.residual);
        assert!(report.psd_ok);
    }

    #[test]
    fn corrupted_coefficient_gives_unit_residual() {
        let p = rp("x1^2", 1);
        let cert = SosCertificate {
            nvars: 1,
            bound: 0.0,
            normalizer: Normalizer::One,
            regions: vec![CertRegion {
                descriptor: RegionDesc::WholeSpace,
                multipliers: vec![],
                base: vec![SosPart::Squares {
                    terms: vec![(rat_int(1), rp("x1", 1))],
                }],
            }],
            solver_status: "stored".to_string(),
            residual: None,
        };
        let good = verify_certificate(&p, &cert);
        assert!(good.residual.is_zero());

        let corrupted = rp("x1^2 + 1", 1);
        let bad = verify_certificate(&corrupted, &cert);
        assert_eq!(bad.residual, rat_int(1));
    }

    #[test]
    fn gram_part_expands_and_checks() {
        // z = (x1, x2), G = [[1,1],[1,1]] -> (x1+x2)^2
        let basis = vec![rp("x1", 2), rp("x2", 2)];
        let mut g = SymMatrix::<Rat>::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                g.set(i, j, rat_int(1));
            }
        }
        let part = SosPart::Gram { basis, matrix: g };
        assert_eq!(part.expand(), rp("(x1 + x2)^2", 2));
        assert!(part.psd_check().is_ok());
    }

    #[test]
    fn negative_square_weight_fails_psd_check() {
        let part = SosPart::Squares { terms: vec![(rat_int(-1), rp("x1", 1))] };
        assert!(part.psd_check().is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = rp("x1^2 + 2*x1 + 1", 1);
        let cert = SosCertificate {
            nvars: 1,
            bound: 0.0,
            normalizer: Normalizer::One,
            regions: vec![CertRegion {
                descriptor: RegionDesc::WholeSpace,
                multipliers: vec![],
                base: vec![SosPart::Squares { terms: vec![(rat_int(1), rp("x1 + 1", 1))] }],
            }],
            solver_status: "stored".into(),
            residual: Some(0.0),
        };
        let j = certificate_to_json(&cert);
        let text = serde_json::to_string_pretty(&j).unwrap();
        let back: SosCertificateJson = serde_json::from_str(&text).unwrap();
        let cert2: SosCertificate<Rat> = certificate_from_json(&back).unwrap();
        let report = verify_certificate(&m, &cert2);
        assert!(report.residual.is_zero());
    }
}
