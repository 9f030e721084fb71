//! Instance library and oracles: the classical non-sos forms, the nonconvex
//! QP matrices, the Horn matrix with its two-region split, stored rational
//! certificates, random graphs, and solver-independent brute-force minima.

use crate::copositive::{Graph, PnCertificate, PnRegion};
use crate::poly::{parse_polynomial, LinearMap, Polynomial};
use crate::scalar::{rat, rat_decimal, rat_int, Rat};
use crate::sos::{CertRegion, Normalizer, RegionDesc, SosCertificate, SosPart};
use crate::symmat::SymMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("oracle size limit exceeded: {0}")]
    SizeLimit(String),
}

/// A named form with its dimensions.
#[derive(Debug, Clone)]
pub struct FormInstance {
    pub name: String,
    pub nvars: usize,
    pub degree: u32,
    pub poly: Polynomial<Rat>,
}

fn rp(text: &str, n: usize) -> Polynomial<Rat> {
    parse_polynomial::<Rat>(text, Some(n)).expect("literal polynomial")
}

/// Names accepted by [`classic_form`], in table order.
pub fn classic_form_names() -> Vec<String> {
    let mut names: Vec<String> = [
        "motzkin",
        "robinson-1",
        "robinson-2",
        "choi-lam-1",
        "choi-lam-2",
        "lax",
        "schmudgen",
        "partition",
        "delzell",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for k in 1..=5 {
        names.push(format!("stengle-{k}"));
    }
    names
}

/// The classical forms used throughout: each is nonnegative but not sos.
pub fn classic_form(name: &str) -> Result<FormInstance, BenchError> {
    let inst = |nvars: usize, degree: u32, poly: Polynomial<Rat>| FormInstance {
        name: name.to_string(),
        nvars,
        degree,
        poly,
    };
    let lower = name.to_ascii_lowercase();
    Ok(match lower.as_str() {
        "motzkin" => inst(3, 6, rp("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2*x3^2 + x3^6", 3)),
        "robinson-1" => inst(
            3,
            6,
            rp(
                "x1^6 + x2^6 + x3^6 - (x1^4*x2^2 + x1^2*x2^4 + x1^4*x3^2 + x1^2*x3^4 + x2^4*x3^2 + x2^2*x3^4) + 3*x1^2*x2^2*x3^2",
                3,
            ),
        ),
        "robinson-2" => inst(
            4,
            4,
            rp(
                "x1^2*(x1 - x4)^2 + x2^2*(x2 - x4)^2 + x3^2*(x3 - x4)^2 + 2*x1*x2*x3*(x1 + x2 + x3 - 2*x4)",
                4,
            ),
        ),
        "choi-lam-1" => inst(4, 4, rp("x1^2*x2^2 + x1^2*x3^2 + x2^2*x3^2 + x4^4 - 4*x4*x1*x2*x3", 4)),
        "choi-lam-2" => inst(3, 6, rp("x1^4*x2^2 + x2^4*x3^2 + x3^4*x1^2 - 3*x1^2*x2^2*x3^2", 3)),
        "lax" => {
            // Σ_i Π_{j≠i} (x_i − x_j) over five variables
            let n = 5;
            let mut acc = Polynomial::<Rat>::zero(n);
            for i in 0..n {
                let mut prod = Polynomial::<Rat>::one(n);
                for j in 0..n {
                    if j != i {
                        let term = Polynomial::variable(n, i).sub(&Polynomial::variable(n, j));
                        prod = prod.mul(&term);
                    }
                }
                acc = acc.add(&prod);
            }
            inst(5, 4, acc)
        }
        "schmudgen" => inst(
            3,
            6,
            rp(
                "200*(x1^3 - 4*x1*x3^2)^2 + 200*(x2^3 - 4*x2*x3^2)^2 + (x2^2 - x1^2)*x1*(x1 + 2*x3)*(x1^2 - 2*x1*x3 + 2*x2^2 - 8*x3^2)",
                3,
            ),
        ),
        "partition" => inst(
            6,
            4,
            rp(
                "(x1 + x2 + x3 + x4 + x5)^2*x6^2 + (x1^2 - x6^2)^2 + (x2^2 - x6^2)^2 + (x3^2 - x6^2)^2 + (x4^2 - x6^2)^2 + (x5^2 - x6^2)^2",
                6,
            ),
        ),
        "delzell" => inst(
            4,
            8,
            rp(
                "x1^4*x2^2*x4^2 + x2^4*x3^2*x4^2 + x1^2*x3^4*x4^2 - 3*x1^2*x2^2*x3^2*x4^2 + x3^8",
                4,
            ),
        ),
        other => {
            if let Some(ks) = other.strip_prefix("stengle-") {
                let k: u32 = ks.parse().map_err(|_| BenchError::UnknownInstance(name.into()))?;
                if k == 0 || k > 12 {
                    return Err(BenchError::UnknownInstance(name.into()));
                }
                let text = format!(
                    "x1^{a}*x3^{a} + (x2^2*x3^{b} - x1^{a} - x1*x3^{c})^2",
                    a = 2 * k + 1,
                    b = 2 * k - 1,
                    c = 2 * k
                );
                inst(3, 4 * k + 2, rp(&text, 3))
            } else {
                return Err(BenchError::UnknownInstance(name.into()));
            }
        }
    })
}

/// The four nonconvex QP matrices (minimize `x^T Q x` over the simplex).
pub fn qp_instance(k: usize) -> Result<SymMatrix<Rat>, BenchError> {
    match k {
        1 => Ok(SymMatrix::from_i64_rows(
            5,
            &[
                1, 0, 1, 1, 0, //
                0, 1, 0, 1, 1, //
                1, 0, 1, 0, 1, //
                1, 1, 0, 1, 0, //
                0, 1, 1, 0, 1,
            ],
        )),
        2 => Ok(SymMatrix::from_i64_rows(
            12,
            &[
                1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, //
                0, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, //
                0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, //
                0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, //
                0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, //
                0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, //
                1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, //
                1, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, //
                1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, //
                1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 0, //
                1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 1, 0, //
                1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 1,
            ],
        )),
        3 => {
            let rows = [
                ["-14", "-15", "-16", "0", "0"],
                ["-15", "-14", "-12.5", "-22.5", "-15"],
                ["-16", "-12.5", "-10", "-26.5", "-16"],
                ["0", "-22.5", "-26.5", "0", "0"],
                ["0", "-15", "-16", "0", "-14"],
            ];
            Ok(SymMatrix::from_dense_rows(
                5,
                rows.iter().flatten().map(|s| rat_decimal(s)).collect(),
            ))
        }
        4 => {
            let rows = [
                ["0.9044", "0.1054", "0.5140", "0.3322", "0"],
                ["0.1054", "0.8715", "0.7385", "0.5866", "0.9751"],
                ["0.5140", "0.7385", "0.6936", "0.5368", "0.8086"],
                ["0.3322", "0.5866", "0.5368", "0.5633", "0.7478"],
                ["0", "0.9751", "0.8086", "0.7478", "1.2932"],
            ];
            Ok(SymMatrix::from_dense_rows(
                5,
                rows.iter().flatten().map(|s| rat_decimal(s)).collect(),
            ))
        }
        _ => Err(BenchError::UnknownInstance(format!("Q{k}"))),
    }
}

/// The 5×5 Horn matrix: copositive but admitting no P+N decomposition.
pub fn horn_matrix() -> SymMatrix<Rat> {
    SymMatrix::from_i64_rows(
        5,
        &[
            1, -1, 1, 1, -1, //
            -1, 1, -1, 1, 1, //
            1, -1, 1, -1, 1, //
            1, 1, -1, 1, -1, //
            -1, 1, 1, -1, 1,
        ],
    )
}

/// The two-generator simplicial disjunction splitting the (4,5) edge of the
/// simplex, over which the Horn matrix is disjunctive P+N.
pub fn horn_disjunction() -> (LinearMap<Rat>, LinearMap<Rat>) {
    let half = rat(1, 2);
    let mut v1 = LinearMap::<Rat>::identity(5);
    v1.set(3, 4, half.clone());
    v1.set(4, 4, half.clone());
    let mut v2 = LinearMap::<Rat>::identity(5);
    v2.set(3, 3, half.clone());
    v2.set(4, 3, half.clone());
    v2.set(3, 4, rat_int(0));
    v2.set(4, 4, rat_int(1));
    (v1, v2)
}

/// The transformed Horn matrix `V_1^T H V_1` in its published form.
pub fn horn_transformed_v1() -> SymMatrix<Rat> {
    SymMatrix::from_i64_rows(
        5,
        &[
            1, -1, 1, 1, 0, //
            -1, 1, -1, 1, 1, //
            1, -1, 1, -1, 0, //
            1, 1, -1, 1, 0, //
            0, 1, 0, 0, 0,
        ],
    )
}

/// A stored certificate from the literature, exact in rational arithmetic.
pub enum PaperCertificate {
    Sos { name: &'static str, target: Polynomial<Rat>, cert: SosCertificate<Rat> },
    Pn { name: &'static str, matrix: SymMatrix<Rat>, cert: PnCertificate<Rat> },
}

impl PaperCertificate {
    pub fn name(&self) -> &'static str {
        match self {
            PaperCertificate::Sos { name, .. } => name,
            PaperCertificate::Pn { name, .. } => name,
        }
    }
}

fn squares(terms: Vec<(Rat, Polynomial<Rat>)>) -> SosPart<Rat> {
    SosPart::Squares { terms }
}

fn sign_regions(
    h: &Polynomial<Rat>,
    plus_base: Vec<(Rat, Polynomial<Rat>)>,
    plus_mult: Vec<(Rat, Polynomial<Rat>)>,
    minus_base: Vec<(Rat, Polynomial<Rat>)>,
    minus_mult: Vec<(Rat, Polynomial<Rat>)>,
) -> Vec<CertRegion<Rat>> {
    vec![
        CertRegion {
            descriptor: RegionDesc::Inequalities(vec![h.clone()]),
            multipliers: vec![(h.clone(), squares(plus_mult))],
            base: vec![squares(plus_base)],
        },
        CertRegion {
            descriptor: RegionDesc::Inequalities(vec![h.neg()]),
            multipliers: vec![(h.neg(), squares(minus_mult))],
            base: vec![squares(minus_base)],
        },
    ]
}

fn sos_cert(nvars: usize, regions: Vec<CertRegion<Rat>>) -> SosCertificate<Rat> {
    SosCertificate {
        nvars,
        bound: 0.0,
        normalizer: Normalizer::One,
        regions,
        solver_status: "stored".to_string(),
        residual: None,
    }
}

/// All stored rational-mode certificates.
pub fn paper_certificates() -> Vec<PaperCertificate> {
    let one = rat_int(1);
    let two = rat_int(2);
    let mut out = Vec::new();

    // Motzkin, two degree-6 identities over the sign of x1x2
    {
        let m = classic_form("motzkin").unwrap();
        let m2 = m.poly.dehomogenize(2).unwrap(); // nonhomogeneous Motzkin
        let h = rp("x1*x2", 2);
        out.push(PaperCertificate::Sos {
            name: "motzkin-sign-split",
            target: m2,
            cert: sos_cert(
                2,
                sign_regions(
                    &h,
                    vec![(one.clone(), rp("1 - x1*x2", 2)), (one.clone(), rp("x1^2*x2 - x1*x2^2", 2))],
                    vec![(two.clone(), rp("1 - x1*x2", 2))],
                    vec![(one.clone(), rp("1 + x1*x2", 2)), (one.clone(), rp("x1^2*x2 + x1*x2^2", 2))],
                    vec![(two.clone(), rp("1 + x1*x2", 2))],
                ),
            ),
        });
    }

    // Motzkin with the degree-8 multiplier identity: (x1²+x2²)·M is sos
    {
        let m2 = classic_form("motzkin").unwrap().poly.dehomogenize(2).unwrap();
        let target = rp("x1^2 + x2^2", 2).mul(&m2);
        out.push(PaperCertificate::Sos {
            name: "motzkin-multiplier",
            target,
            cert: sos_cert(
                2,
                vec![CertRegion {
                    descriptor: RegionDesc::WholeSpace,
                    multipliers: vec![],
                    base: vec![squares(vec![
                        (one.clone(), rp("x1*(1 - x2^2)", 2)),
                        (one.clone(), rp("x2*(1 - x1^2)", 2)),
                        (one.clone(), rp("x1*x2*(x1^2 + x2^2 - 2)", 2)),
                    ])],
                }],
            ),
        });
    }

    // Motzkin, alternating maximization with degree-1 seed: regions ±x1
    {
        let m2 = classic_form("motzkin").unwrap().poly.dehomogenize(2).unwrap();
        let h = rp("x1", 2);
        out.push(PaperCertificate::Sos {
            name: "motzkin-altmax-deg1",
            target: m2,
            cert: sos_cert(
                2,
                sign_regions(
                    &h,
                    vec![(one.clone(), rp("1 - x1*x2^2", 2)), (one.clone(), rp("x1^2*x2 - x1*x2", 2))],
                    vec![(two.clone(), rp("x1*x2 - x2", 2))],
                    vec![(one.clone(), rp("1 + x1*x2^2", 2)), (one.clone(), rp("x1^2*x2 + x1*x2", 2))],
                    vec![(two.clone(), rp("x1*x2 + x2", 2))],
                ),
            ),
        });
    }

    // Motzkin, alternating maximization with degree-4 seed
    {
        let m2 = classic_form("motzkin").unwrap().poly.dehomogenize(2).unwrap();
        let h = rp("x1^4 - x2^4 - 2*x1^2 + 2*x2^2", 2);
        let half = rat(1, 2);
        out.push(PaperCertificate::Sos {
            name: "motzkin-altmax-deg4",
            target: m2,
            cert: sos_cert(
                2,
                sign_regions(
                    &h,
                    vec![
                        (half.clone(), rp("x1^2*x2 + x2^3 - 2*x2", 2)),
                        (one.clone(), rp("x2^2 - 1", 2)),
                    ],
                    vec![(half.clone(), rp("x2", 2))],
                    vec![
                        (half.clone(), rp("x1^3 + x1*x2^2 - 2*x1", 2)),
                        (one.clone(), rp("x1^2 - 1", 2)),
                    ],
                    vec![(half.clone(), rp("x1", 2))],
                ),
            ),
        });
    }

    // Choi-Lam-1 over the sign of x1x2
    {
        let cl1 = classic_form("choi-lam-1").unwrap().poly;
        let h = rp("x1*x2", 4);
        out.push(PaperCertificate::Sos {
            name: "choi-lam-1",
            target: cl1,
            cert: sos_cert(
                4,
                sign_regions(
                    &h,
                    vec![
                        (one.clone(), rp("x1*x3 - x2*x3", 4)),
                        (one.clone(), rp("x1*x2 - x4^2", 4)),
                    ],
                    vec![(two.clone(), rp("x4 - x3", 4))],
                    vec![
                        (one.clone(), rp("x1*x3 + x2*x3", 4)),
                        (one.clone(), rp("x1*x2 + x4^2", 4)),
                    ],
                    vec![(two.clone(), rp("x3 + x4", 4))],
                ),
            ),
        });
    }

    // Choi-Lam-2 over the sign of x1x2
    {
        let cl2 = rp("-3*x1^2*x2^2*x3^2 + x1^2*x3^4 + x1^4*x2^2 + x2^4*x3^2", 3);
        let h = rp("x1*x2", 3);
        out.push(PaperCertificate::Sos {
            name: "choi-lam-2",
            target: cl2,
            cert: sos_cert(
                3,
                sign_regions(
                    &h,
                    vec![
                        (one.clone(), rp("x1^2*x2 - x1*x3^2", 3)),
                        (one.clone(), rp("x2^2*x3 - x1*x2*x3", 3)),
                    ],
                    vec![(two.clone(), rp("x2*x3 - x1*x3", 3))],
                    vec![
                        (one.clone(), rp("x1*x3^2 + x1^2*x2", 3)),
                        (one.clone(), rp("x1*x2*x3 + x2^2*x3", 3)),
                    ],
                    vec![(two.clone(), rp("x1*x3 + x2*x3", 3))],
                ),
            ),
        });
    }

    // Stengle over the sign of x1x3
    {
        let s1 = rp(
            "-2*x1*x2^2*x3^3 + x1^2*x3^4 - 2*x1^3*x2^2*x3 + x1^3*x3^3 + 2*x1^4*x3^2 + x1^6 + x2^4*x3^2",
            3,
        );
        let h = rp("x1*x3", 3);
        out.push(PaperCertificate::Sos {
            name: "stengle",
            target: s1,
            cert: sos_cert(
                3,
                sign_regions(
                    &h,
                    vec![(one.clone(), rp("x2^2*x3 - x1*x3^2 - x1^3", 3))],
                    vec![(one.clone(), rp("x1*x3", 3))],
                    vec![
                        (one.clone(), rp("x1*x3^2 + 1/2*x1^2*x3 + 7/10*x1^3 - 6/7*x2^2*x3", 3)),
                        (rat(1, 14), rp("x1*x2*x3", 3)),
                        (rat(7, 20), rp("x1^2*x3 - x1^3 + 5/7*x2^2*x3", 3)),
                        (rat(4, 25), rp("x1^3 - 5/7*x2^2*x3", 3)),
                        (rat(1, 196), rp("x2^2*x3", 3)),
                    ],
                    vec![(rat(2, 7), rp("x2*x3 - 1/2*x1*x2", 3))],
                ),
            ),
        });
    }

    // Delzell over the sign of x1x2
    {
        let d = classic_form("delzell").unwrap().poly;
        let h = rp("x1*x2", 4);
        out.push(PaperCertificate::Sos {
            name: "delzell",
            target: d,
            cert: sos_cert(
                4,
                sign_regions(
                    &h,
                    vec![
                        (one.clone(), rp("x1^2*x2*x4 - x1*x3^2*x4", 4)),
                        (one.clone(), rp("x2^2*x3*x4 - x1*x2*x3*x4", 4)),
                        (one.clone(), rp("x3^4", 4)),
                    ],
                    vec![(two.clone(), rp("x1*x3*x4 - x2*x3*x4", 4))],
                    vec![
                        (one.clone(), rp("x1^2*x2*x4 + x1*x3^2*x4", 4)),
                        (one.clone(), rp("x2^2*x3*x4 + x1*x2*x3*x4", 4)),
                        (one.clone(), rp("x3^4", 4)),
                    ],
                    vec![(two.clone(), rp("x1*x3*x4 + x2*x3*x4", 4))],
                ),
            ),
        });
    }

    // Horn: the published two-region P+N decomposition
    {
        let (v1, v2) = horn_disjunction();
        let p1 = SymMatrix::from_fn(5, |i, j| {
            let v = [1i64, -1, 1, -1, 0];
            rat_int(v[i] * v[j])
        });
        let n1 = SymMatrix::from_i64_rows(
            5,
            &[
                0, 0, 0, 2, 0, //
                0, 0, 0, 0, 1, //
                0, 0, 0, 0, 0, //
                2, 0, 0, 0, 0, //
                0, 1, 0, 0, 0,
            ],
        );
        let p2 = SymMatrix::from_fn(5, |i, j| {
            let v = [1i64, -1, 1, 0, -1];
            rat_int(v[i] * v[j])
        });
        let n2 = SymMatrix::from_i64_rows(
            5,
            &[
                0, 0, 0, 0, 0, //
                0, 0, 0, 1, 0, //
                0, 0, 0, 0, 2, //
                0, 1, 0, 0, 0, //
                0, 0, 2, 0, 0,
            ],
        );
        out.push(PaperCertificate::Pn {
            name: "horn-pn-split",
            matrix: horn_matrix(),
            cert: PnCertificate {
                regions: vec![
                    PnRegion { v: v1, p: p1, n: n1 },
                    PnRegion { v: v2, p: p2, n: n2 },
                ],
                residual: 0.0,
            },
        });
    }

    out
}

/// Deterministic Erdős–Rényi graph: each pair connected with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    assert!(p > 0.0 && p < 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Exhaustive barycentric-grid minimum of `x^T Q x` over the unit simplex at
/// resolution `1/denominator`. Limited to small dimensions.
pub fn oracle_grid_min_simplex(
    q: &SymMatrix<f64>,
    denominator: u32,
) -> Result<(f64, Vec<f64>), BenchError> {
    let n = q.n();
    if n > 6 {
        return Err(BenchError::SizeLimit(format!("simplex grid limited to n ≤ 6, got {n}")));
    }
    let mut best = f64::INFINITY;
    let mut arg = vec![0.0; n];
    let mut alpha = vec![0u32; n];
    grid_rec(&mut alpha, 0, denominator, &mut |a| {
        let x: Vec<f64> = a.iter().map(|&v| v as f64 / denominator as f64).collect();
        let val = q.quad_form(&x);
        if val < best {
            best = val;
            arg = x;
        }
    });
    Ok((best, arg))
}

fn grid_rec(alpha: &mut Vec<u32>, pos: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if pos + 1 == alpha.len() {
        alpha[pos] = remaining;
        f(alpha);
        alpha[pos] = 0;
        return;
    }
    for v in 0..=remaining {
        alpha[pos] = v;
        grid_rec(alpha, pos + 1, remaining - v, f);
    }
    alpha[pos] = 0;
}

/// Normalized-grid minimum of a form over the unit sphere: barycentric grid
/// points in every orthant, normalized to unit length.
pub fn oracle_grid_min_sphere(
    p: &Polynomial<f64>,
    denominator: u32,
) -> Result<(f64, Vec<f64>), BenchError> {
    let n = p.nvars();
    if n > 6 {
        return Err(BenchError::SizeLimit(format!("sphere grid limited to n ≤ 6, got {n}")));
    }
    let mut best = f64::INFINITY;
    let mut arg = vec![0.0; n];
    let mut alpha = vec![0u32; n];
    grid_rec(&mut alpha, 0, denominator, &mut |a| {
        for signs in 0..(1u32 << n) {
            let mut x: Vec<f64> = a
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let s = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
                    s * v as f64
                })
                .collect();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            for v in x.iter_mut() {
                *v /= norm;
            }
            let val = p.evaluate(&x).unwrap();
            if val < best {
                best = val;
                arg = x.clone();
            }
        }
    });
    Ok((best, arg))
}

/// Sorting-based Euclidean projection onto the unit simplex, the standard
/// O(n log n) oracle for checking active-set projections.
pub fn oracle_simplex_projection(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    let _ = n;
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Exact maximum clique by recursive expansion with a greedy-coloring bound.
pub fn oracle_clique(g: &Graph) -> usize {
    let n = g.n;
    // order vertices by descending degree for better early bounds
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && g.has_edge(i, j)).count())
        .collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));

    let mut best = 0usize;
    let mut current = Vec::new();
    expand(g, &order, &mut current, &mut best);
    best
}

fn expand(g: &Graph, candidates: &[usize], current: &mut Vec<usize>, best: &mut usize) {
    if candidates.is_empty() {
        if current.len() > *best {
            *best = current.len();
        }
        return;
    }
    // greedy coloring bound: clique size within candidates ≤ color count
    let colors = greedy_color_count(g, candidates);
    if current.len() + colors <= *best {
        return;
    }
    let mut cands = candidates.to_vec();
    while let Some(v) = cands.pop() {
        if current.len() + cands.len() + 1 <= *best {
            return;
        }
        current.push(v);
        let next: Vec<usize> = cands.iter().cloned().filter(|&u| g.has_edge(u, v)).collect();
        if current.len() + next.len() > *best {
            expand(g, &next, current, best);
        }
        if current.len() > *best {
            *best = current.len();
        }
        current.pop();
    }
}

fn greedy_color_count(g: &Graph, vertices: &[usize]) -> usize {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vertices {
        let mut placed = false;
        for class in classes.iter_mut() {
            if class.iter().all(|&u| !g.has_edge(u, v)) {
                class.push(v);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![v]);
        }
    }
    classes.len()
}

/// Seeded random symmetric matrix with entries in `[-1, 1]`.
pub fn random_symmetric(n: usize, seed: u64) -> SymMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Seeded random P+N matrix: `P P^T` plus an entrywise-nonnegative part.
pub fn random_pn_matrix(n: usize, seed: u64) -> SymMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let psd = SymMatrix::from_fn(n, |i, j| (0..n).map(|k| f[i * n + k] * f[j * n + k]).sum());
    let nonneg = SymMatrix::from_fn(n, |_, _| rng.gen_range(0.0..1.0));
    psd.add(&nonneg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use crate::sos::verify_certificate;
    use num_traits::Zero;

    #[test]
    fn table_instances_have_declared_shapes() {
        for name in classic_form_names() {
            let inst = classic_form(&name).unwrap();
            assert_eq!(inst.poly.nvars(), inst.nvars, "{name}");
            assert_eq!(inst.poly.degree(), inst.degree, "{name}");
            assert!(inst.poly.is_homogeneous(), "{name} must be a form");
        }
        assert_eq!(classic_form("lax").unwrap().degree, 4);
        assert_eq!(classic_form("stengle-2").unwrap().degree, 10);
        assert!(classic_form("unknown").is_err());
    }

    #[test]
    fn qp_matrices_match_published_entries() {
        let q1 = qp_instance(1).unwrap();
        assert_eq!(q1.n(), 5);
        for i in 0..5 {
            assert_eq!(q1.get(i, i), rat_int(1));
        }
        let q2 = qp_instance(2).unwrap();
        assert_eq!(q2.n(), 12);
        for i in 0..12 {
            assert_eq!(q2.get(i, i), rat_int(1));
        }
        let q3 = qp_instance(3).unwrap();
        assert_eq!(q3.get(1, 3), rat(-45, 2));
        let q4 = qp_instance(4).unwrap();
        assert_eq!(q4.get(0, 0), rat(9044, 10000));
        assert!(qp_instance(5).is_err());
    }

    #[test]
    fn horn_transform_matches_published_matrix() {
        let h = horn_matrix();
        let (v1, _) = horn_disjunction();
        assert_eq!(h.congruence(&v1), horn_transformed_v1());
    }

    #[test]
    fn all_paper_certificates_verify_exactly() {
        let certs = paper_certificates();
        assert!(certs.len() >= 8, "count = {}", certs.len());
        for c in &certs {
            match c {
                PaperCertificate::Sos { name, target, cert } => {
                    let report = verify_certificate(target, cert);
                    assert!(
                        report.residual.is_zero(),
                        "{name}: residual {:?}",
                        report.residual
                    );
                    assert!(report.psd_ok, "{name}: {:?}", report.psd_violations);
                }
                PaperCertificate::Pn { name, matrix, cert } => {
                    assert!(cert.verify_exact(matrix), "{name} failed exact verification");
                    assert_eq!(cert.regions.len(), 2, "{name}");
                }
            }
        }
    }

    #[test]
    fn motzkin_zero_and_horn_diagonal() {
        let m = classic_form("motzkin").unwrap().poly;
        let third: Vec<Rat> = vec![rat_int(1), rat_int(1), rat_int(1)];
        assert_eq!(m.evaluate(&third).unwrap(), rat_int(0));
        let h = horn_matrix();
        let e1: Vec<Rat> = vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0), rat_int(0)];
        assert_eq!(h.quad_form(&e1), rat_int(1));
    }

    #[test]
    fn erdos_renyi_deterministic_and_balanced() {
        let a = erdos_renyi(75, 0.5, 42);
        let b = erdos_renyi(75, 0.5, 42);
        for i in 0..75 {
            for j in 0..75 {
                assert_eq!(a.has_edge(i, j), b.has_edge(i, j));
            }
        }
        // edge count within 4σ of C(75,2)/2
        let pairs: f64 = 75.0 * 74.0 / 2.0;
        let mean = pairs / 2.0;
        let sigma = (pairs * 0.25).sqrt();
        let count = a.edge_count() as f64;
        assert!((count - mean).abs() < 4.0 * sigma, "count {count}");
    }

    #[test]
    fn grid_oracle_simplex_identity() {
        let q = SymMatrix::<f64>::identity(3);
        let (min, arg) = oracle_grid_min_simplex(&q, 60).unwrap();
        assert!((min - 1.0 / 3.0).abs() < 2e-3, "min {min}");
        assert!((arg.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let big = SymMatrix::<f64>::identity(8);
        assert!(oracle_grid_min_simplex(&big, 10).is_err());
    }

    #[test]
    fn grid_oracle_q1_value() {
        let q1 = qp_instance(1).unwrap().to_f64();
        let (min, _) = oracle_grid_min_simplex(&q1, 120).unwrap();
        assert!((min - 0.5).abs() < 2e-3, "min {min}");
    }

    #[test]
    fn sphere_oracle_on_motzkin() {
        let m = classic_form("motzkin").unwrap().poly.to_float();
        let (min, _) = oracle_grid_min_sphere(&m, 30).unwrap();
        // minimum of the homogenized Motzkin form on the sphere is 0
        assert!(min >= -1e-9 && min < 5e-3, "min {min}");
    }

    #[test]
    fn clique_oracle_basics() {
        assert_eq!(oracle_clique(&Graph::complete(5)), 5);
        assert_eq!(oracle_clique(&Graph::cycle(5)), 2);
        assert_eq!(oracle_clique(&Graph::empty(4)), 1);
        let mut g = Graph::empty(6);
        for i in 0..4 {
            for j in i + 1..4 {
                g.add_edge(i, j);
            }
        }
        g.add_edge(4, 5);
        assert_eq!(oracle_clique(&g), 4);
    }

    #[test]
    fn clique_oracle_random_instance() {
        let g = erdos_renyi(20, 0.5, 7);
        let w = oracle_clique(&g);
        assert!(w >= 3 && w <= 12, "omega {w}");
    }
}
