//! Global nonnegativity engines: the spherical-cap hierarchy, the
//! optimization-free coefficient-sign certifier, the constructive local
//! certificate around a point of positivity, and the alternating
//! maximization search for disjunctive identities.

use crate::conic::{ConicBackend, ConicProblem, SolveStatus, VarRef};
use crate::disjunction::{
    cap_polynomial, generate_net_dprime, h_poly, h_poly_squares, nc_generators, t_param,
};
use crate::poly::{monomials_up_to_degree, LinearMap, MultiIndex, Polynomial};
use crate::scalar::{Coeff, Rat, ScalarMode};
use crate::sos::{
    encode_sos_blocks, BoundOptions, CertRegion, GramBasis, Normalizer, PolyFamily, RegionDesc,
    RegionSpec, SosCertificate, SosError, SosPart,
};
use crate::symmat::SymMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("input must be a homogeneous form of even degree")]
    NotEvenForm,
    #[error("d' must be even with 2 ≤ d' ≤ d, got {0}")]
    BadDprime(u32),
    #[error("p(x*) = {0} is not positive")]
    NotPositiveAtCenter(f64),
    #[error("alternating maximization step {step} infeasible at iteration {iteration}")]
    AltMaxInfeasible { step: usize, iteration: usize },
    #[error(transparent)]
    Sos(#[from] SosError),
    #[error(transparent)]
    Disjunction(#[from] crate::disjunction::DisjunctionError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

// --- Algorithm 1: spherical-cap hierarchy ------------------------------------

#[derive(Debug, Clone)]
pub struct LevelRecord {
    pub m: u32,
    pub r_m: usize,
    pub l_m: f64,
    pub u_m: f64,
    pub lower: f64,
    pub upper: f64,
    pub infeasible_caps: usize,
    pub wall_ms: f64,
}

#[derive(Debug)]
pub struct HierarchyResult {
    pub levels: Vec<LevelRecord>,
    pub lower: f64,
    pub upper: f64,
    pub xbar: Vec<f64>,
    pub converged: bool,
}

impl HierarchyResult {
    /// CSV rows `(m, r_m, L^m, U^m, L, U, wall_ms)`.
    pub fn csv(&self) -> String {
        let mut out = String::from("# disjsos hierarchy log v1\nm,r_m,Lm,Um,L,U,wall_ms\n");
        for r in &self.levels {
            out.push_str(&format!(
                "{},{},{},{},{},{},{:.3}\n",
                r.m, r.r_m, r.l_m, r.u_m, r.lower, r.upper, r.wall_ms
            ));
        }
        out
    }
}

/// Level-by-level lower/upper bounds on the minimum of a form over the unit
/// sphere. Level `m` solves one small SDP per net cap (independently, in
/// parallel) and evaluates `p` on the net for the upper bound; the loop stops
/// at the absolute tolerance `eps` or after `max_m` levels.
pub fn algorithm1(
    p: &Polynomial<f64>,
    dprime: u32,
    eps: f64,
    max_m: u32,
    backend: &dyn ConicBackend,
) -> Result<HierarchyResult, CertifyError> {
    let d = p.degree();
    if d == 0 || d % 2 != 0 || !p.is_homogeneous() {
        return Err(CertifyError::NotEvenForm);
    }
    if dprime < 2 || dprime % 2 != 0 || dprime > d {
        return Err(CertifyError::BadDprime(dprime));
    }
    let t0 = Instant::now();
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let mut xbar = vec![0.0; p.nvars()];
    let mut levels = Vec::new();
    let mut m = 1u32;
    let mut converged = false;
    while m <= max_m {
        let net = generate_net_dprime(p.nvars(), m, dprime)?;
        let t_m: f64 = t_param::<f64>(m, dprime);
        let regions: Vec<RegionSpec> = net
            .net
            .iter()
            .map(|x| {
                let cap = cap_polynomial(x, dprime, &t_m).expect("net points are unit");
                RegionSpec {
                    polys: vec![cap],
                    descriptor: RegionDesc::Cap { xstar: x.clone(), dprime, t: t_m },
                }
            })
            .collect();
        let opts = BoundOptions {
            normalizer: Normalizer::SphereNorm { degree: d },
            symmetry: false,
            prune: false,
            backend,
        };
        let res = crate::sos::solve_sos_bound(p, &regions, d, &opts)?;
        let l_m = res.gamma;
        let infeasible = res
            .per_region
            .iter()
            .filter(|(_, s)| *s != SolveStatus::Optimal)
            .count();

        let mut u_m = f64::INFINITY;
        let mut witness = None;
        for x in &net.net {
            let val = p.evaluate(x).expect("dimension");
            if val < u_m {
                u_m = val;
                witness = Some(x.clone());
            }
        }
        if l_m > lower {
            lower = l_m;
        }
        if u_m < upper {
            upper = u_m;
            if let Some(w) = witness {
                xbar = w;
            }
        }
        levels.push(LevelRecord {
            m,
            r_m: net.net.len(),
            l_m,
            u_m,
            lower,
            upper,
            infeasible_caps: infeasible,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
        if upper - lower <= eps {
            converged = true;
            break;
        }
        m += 1;
    }
    Ok(HierarchyResult { levels, lower, upper, xbar, converged })
}

// --- optimization-free certifier ----------------------------------------------

/// Does `p(Vx)` have only nonnegative coefficients? Exact in rational mode;
/// float mode tolerates `−1e−12·‖p∘V‖_∞`.
pub fn nc_check<T: Coeff>(p: &Polynomial<T>, v: &LinearMap<T>) -> Result<bool, CertifyError> {
    let composed = p.compose_linear(v)?;
    Ok(min_coefficient_ok(&composed))
}

fn min_coefficient_ok<T: Coeff>(composed: &Polynomial<T>) -> bool {
    match T::MODE {
        ScalarMode::Rational => composed.terms().all(|(_, c)| *c >= T::zero()),
        ScalarMode::Float => {
            let (inf, _) = composed.norms();
            let tol = 1e-12 * inf.to_f64();
            composed.terms().all(|(_, c)| c.to_f64() >= -tol)
        }
    }
}

#[derive(Debug)]
pub struct NcCertificate<T: Coeff> {
    pub level: u32,
    pub generators: Vec<LinearMap<T>>,
    /// `p(V_k x)` for each generator, all with nonnegative coefficients.
    pub transformed: Vec<Polynomial<T>>,
}

#[derive(Debug)]
pub struct NcFailure {
    pub max_level: u32,
    /// worst generator at the last level and its most negative coefficient
    pub worst_generator: usize,
    pub worst_coefficient: f64,
}

/// Certifies nonnegativity of a form by coefficient signs alone: level `m`
/// checks `p(V x)` over the orthant sign patterns composed with the level-`m`
/// edgewise subdivision of the simplex. Columns stay unnormalized: positive
/// column scaling multiplies each coefficient by a positive monomial factor,
/// so the sign test is unchanged and stays exact over the rationals.
pub fn nc_certify(
    p: &Polynomial<Rat>,
    max_level: u32,
) -> Result<Result<NcCertificate<Rat>, NcFailure>, CertifyError> {
    if !p.is_homogeneous() {
        return Err(CertifyError::NotEvenForm);
    }
    let n = p.nvars();
    let mut worst_gen = 0usize;
    let mut worst_coef = 0.0f64;
    for m in 1..=max_level {
        let generators = nc_generators(n, m);
        let mut transformed = Vec::with_capacity(generators.len());
        let mut ok = true;
        worst_gen = 0;
        worst_coef = 0.0;
        for (k, v) in generators.iter().enumerate() {
            let composed = p.compose_linear(v)?;
            let min_c = composed
                .terms()
                .map(|(_, c)| c.to_f64())
                .fold(f64::INFINITY, f64::min);
            if !min_coefficient_ok(&composed) {
                ok = false;
                if min_c < worst_coef {
                    worst_coef = min_c;
                    worst_gen = k;
                }
            }
            transformed.push(composed);
        }
        if ok {
            return Ok(Ok(NcCertificate { level: m, generators, transformed }));
        }
    }
    Ok(Err(NcFailure {
        max_level,
        worst_generator: worst_gen,
        worst_coefficient: worst_coef,
    }))
}

// --- constructive local certificate -------------------------------------------

/// Householder reflection `U` with `U e_1 = x*` (symmetric, orthogonal,
/// exact for rational unit `x*`).
fn householder_to_e1<T: Coeff>(xstar: &[T]) -> LinearMap<T> {
    let n = xstar.len();
    let mut v: Vec<T> = xstar.to_vec();
    v[0] = v[0].clone() - T::one();
    let vtv = v.iter().fold(T::zero(), |acc, t| acc + t.clone() * t.clone());
    if vtv.is_zero() {
        return LinearMap::identity(n);
    }
    let mut u = LinearMap::identity(n);
    let two = T::from_i64(2);
    for i in 0..n {
        for j in 0..n {
            let cur = u.get(i, j);
            u.set(i, j, cur - two.clone() * v[i].clone() * v[j].clone() / vtv.clone());
        }
    }
    u
}

/// Constructive single-cap certificate: an explicit identity
/// `p(x) = (p(x*)/2·(x^T x*)^{d'} − t·h_{d'}(x;x*))·s(x) + σ(x)`
/// built without any SDP. For `d' = d` the multiplier is 1; for smaller `d'`
/// the multiplier is `(x^T x*)^{d−d'} + h_{d−d'}(x;x*)`. The sos part σ
/// carries a diagonally dominant Gram factor over a rotated monomial basis,
/// so the identity is exact in rational mode.
pub fn local_certificate<T: Coeff>(
    p: &Polynomial<T>,
    xstar: &[T],
    dprime: u32,
) -> Result<SosCertificate<T>, CertifyError> {
    let d = p.degree();
    if d == 0 || d % 2 != 0 || !p.is_homogeneous() || p.nvars() < 2 {
        return Err(CertifyError::NotEvenForm);
    }
    if dprime < 2 || dprime % 2 != 0 || dprime > d {
        return Err(CertifyError::BadDprime(dprime));
    }
    let n = p.nvars();
    let value = p.evaluate(&xstar.to_vec())?;
    if value.to_f64() <= 0.0 {
        return Err(CertifyError::NotPositiveAtCenter(value.to_f64()));
    }

    let u = householder_to_e1(xstar);
    let p_u = p.compose_linear(&u)?;
    // dehomogenize along x1
    let p_tilde = p_u.dehomogenize(0)?;
    let nu = n - 1;
    let a = value.clone(); // p̃(0) = p(x*)
    let q = p_tilde.sub(&Polynomial::constant(nu, a.clone()));
    let (q_inf, q_one) = q.norms();
    let two = T::from_i64(2);
    let t_base = T::from_i64(nu as i64) * q_inf.clone() * q_inf.clone() / (two.clone() * a.clone())
        + q_one.clone();
    // for d' < d the region parameter grows by p(x*)/2
    let t_region = if dprime == d {
        t_base.clone()
    } else {
        t_base.clone() + a.clone() / two.clone()
    };

    // Gram basis over z-monomials of degree ≤ d/2 in ν variables
    let basis_z = monomials_up_to_degree(nu, d / 2);
    let pos_of = |mono: &MultiIndex| basis_z.binary_search(mono).expect("basis member");
    let bdim = basis_z.len();
    let mut gram = SymMatrix::<T>::zeros(bdim);

    // distribute q's monomials of degree ≥ 2 over nonzero index pairs
    let mut q1 = vec![T::zero(); nu]; // linear coefficients of q
    for (mono, c) in q.terms() {
        let deg = mono.total();
        if deg == 0 {
            unreachable!("q(0) = 0 by construction");
        } else if deg == 1 {
            let var = mono.0.iter().position(|&e| e > 0).unwrap();
            q1[var] = c.clone();
        } else {
            // split μ = β + γ with |β| = ⌈|μ|/2⌉, both nonzero
            let mut beta = vec![0u32; nu];
            let mut remaining = deg.div_ceil(2);
            for (i, &e) in mono.0.iter().enumerate() {
                let take = e.min(remaining);
                beta[i] = take;
                remaining -= take;
                if remaining == 0 {
                    break;
                }
            }
            let gamma: Vec<u32> = mono.0.iter().zip(&beta).map(|(e, b)| e - b).collect();
            let bi = pos_of(&MultiIndex(beta));
            let gi = pos_of(&MultiIndex(gamma.clone()));
            if bi == gi {
                let cur = gram.get(bi, bi);
                gram.set(bi, bi, cur + c.clone());
            } else {
                let cur = gram.get(bi, gi);
                gram.set(bi, gi, cur + c.clone() / two.clone());
            }
        }
    }
    // diagonal correction −ν q_i²/(2A) at (e_i, e_i), then +t·D
    for i in 0..nu {
        let pos = pos_of(&MultiIndex::unit(nu, i));
        let cur = gram.get(pos, pos);
        gram.set(
            pos,
            pos,
            cur - T::from_i64(nu as i64) * q1[i].clone() * q1[i].clone() / (two.clone() * a.clone()),
        );
    }
    for (pos, mono) in basis_z.iter().enumerate() {
        let k = mono.total();
        if k == 0 {
            continue;
        }
        let w = crate::disjunction::multinomial_scalar::<T>(k, &mono.0);
        let cur = gram.get(pos, pos);
        gram.set(pos, pos, cur + t_base.clone() * w);
    }

    // homogenize the z-basis to degree d/2 with x1 and rotate back by U^T
    let ut = u.transpose();
    let homog_rotate = |poly_z: &Polynomial<T>| -> Polynomial<T> {
        // z_j ↦ x_{j+1}, pad with x1 powers to exact degree d/2
        let mut lifted = Polynomial::zero(n);
        for (mono, c) in poly_z.terms() {
            let mut e = vec![0u32; n];
            e[0] = d / 2 - mono.total();
            for (j, &v) in mono.0.iter().enumerate() {
                e[j + 1] = v;
            }
            lifted.add_term(MultiIndex(e), c.clone());
        }
        lifted.compose_linear(&ut).expect("square map")
    };

    let basis_polys: Vec<Polynomial<T>> = basis_z
        .iter()
        .map(|mono| homog_rotate(&Polynomial::monomial(mono.clone(), T::one())))
        .collect();

    // explicit squares A/(2ν)·(1 + ν q_i/A · z_i)², homogenized and rotated
    let mut square_terms: Vec<(T, Polynomial<T>)> = Vec::new();
    let nu_t = T::from_i64(nu as i64);
    for i in 0..nu {
        let mut g = Polynomial::<T>::monomial(
            MultiIndex(
                (0..nu).map(|j| if j == i { 1 } else { 0 }).collect(),
            ),
            nu_t.clone() * q1[i].clone() / a.clone(),
        );
        g.add_term(MultiIndex::zeros(nu), T::one());
        square_terms.push((a.clone() / (two.clone() * nu_t.clone()), homog_rotate(&g)));
    }

    // region polynomial and multiplier
    let ip = {
        let mut f = Polynomial::<T>::zero(n);
        for (i, c) in xstar.iter().enumerate() {
            if !c.is_zero() {
                f.add_term(MultiIndex::unit(n, i), c.clone());
            }
        }
        f
    };
    let h_dp = h_poly(xstar, dprime)?;
    let region_poly = ip
        .pow(dprime)
        .scale(&(a.clone() / two.clone()))
        .sub(&h_dp.scale(&t_region));

    let (multiplier_part, extra_squares): (SosPart<T>, Vec<(T, Polynomial<T>)>) = if dprime == d {
        (SosPart::Squares { terms: vec![(T::one(), Polynomial::one(n))] }, Vec::new())
    } else {
        // multiplier (x^T x*)^{d−d'} + h_{d−d'}
        let mut mult_squares = vec![(T::one(), ip.pow((d - dprime) / 2))];
        mult_squares.extend(h_poly_squares(xstar, d - dprime)?);
        // the sos remainder gains (p(x*)/2)·(g_d − g_{d−d'}) plus
        // t̂·g_{d'−2}·g_{d−d'}, all expanded over z
        let half_a = a.clone() / two.clone();
        let mut extra: Vec<(T, Polynomial<T>)> = Vec::new();
        let mut add_norm_power = |weight: T, k: u32| {
            // ‖z‖^{2k} = Σ_{|α|=k} multinomial·(z^α)²
            for alpha in crate::poly::monomials_exact_degree(nu, k) {
                let w = crate::disjunction::multinomial_scalar::<T>(k, &alpha.0);
                extra.push((
                    weight.clone() * w,
                    homog_rotate(&Polynomial::monomial(alpha.clone(), T::one())),
                ));
            }
        };
        for k in (d - dprime) / 2 + 1..=d / 2 {
            add_norm_power(half_a.clone(), k);
        }
        // t̂ = t + p(x*)/2 is exactly the region parameter
        for j in 1..=(dprime - 2) / 2 {
            for k in 1..=(d - dprime) / 2 {
                add_norm_power(t_region.clone(), j + k);
            }
        }
        (SosPart::Squares { terms: mult_squares }, extra)
    };

    let mut base_parts = vec![
        SosPart::Squares { terms: square_terms },
        SosPart::Gram { basis: basis_polys, matrix: gram },
    ];
    if !extra_squares.is_empty() {
        base_parts.push(SosPart::Squares { terms: extra_squares });
    }

    Ok(SosCertificate {
        nvars: n,
        bound: 0.0,
        normalizer: Normalizer::One,
        regions: vec![CertRegion {
            descriptor: RegionDesc::Cap {
                xstar: xstar.to_vec(),
                dprime,
                t: t_region,
            },
            multipliers: vec![(region_poly, multiplier_part)],
            base: base_parts,
        }],
        solver_status: "constructive".to_string(),
        residual: None,
    })
}

// --- alternating maximization ---------------------------------------------------

#[derive(Debug)]
pub struct AltMaxResult {
    pub gamma: f64,
    /// γ after every SDP step (step 1 and step 2 alternating)
    pub history: Vec<f64>,
    pub certificate: SosCertificate<f64>,
    pub regions_h: Vec<Polynomial<f64>>,
}

/// Alternating maximization over disjunctions built from sign patterns of
/// `ell` polynomials `h_j`. Step 1 fixes the `h_j` and optimizes the sos
/// multipliers region by region; step 2 fixes the multipliers and re-optimizes
/// the `h_j` jointly. The bound γ never decreases.
pub fn alternating_max(
    p: &Polynomial<f64>,
    ell: usize,
    dbar: u32,
    h_degree: u32,
    seed: u64,
    rounds: usize,
    backend: &dyn ConicBackend,
) -> Result<AltMaxResult, CertifyError> {
    assert!(ell >= 1 && ell <= 8);
    let n = p.nvars();
    let patterns: Vec<Vec<f64>> = (0..(1usize << ell))
        .map(|bits| {
            (0..ell)
                .map(|j| if bits >> j & 1 == 1 { -1.0 } else { 1.0 })
                .collect()
        })
        .collect();

    // random initial h_j
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_monomials = monomials_up_to_degree(n, h_degree);
    let mut hs: Vec<Polynomial<f64>> = (0..ell)
        .map(|_| {
            let mut h = Polynomial::zero(n);
            for mono in &h_monomials {
                h.add_term(mono.clone(), rng.gen_range(-1.0..1.0));
            }
            h
        })
        .collect();

    let mut history = Vec::new();
    let mut best_cert: Option<SosCertificate<f64>> = None;
    let mut gamma = f64::NEG_INFINITY;

    for round in 0..rounds {
        // Step 1: optimize multipliers with h fixed; one SDP per sign pattern
        let regions: Vec<RegionSpec> = patterns
            .iter()
            .map(|eps| {
                let polys: Vec<Polynomial<f64>> = hs
                    .iter()
                    .zip(eps)
                    .map(|(h, &s)| h.scale(&s))
                    .collect();
                RegionSpec::from_polys(polys)
            })
            .collect();
        let opts = BoundOptions {
            normalizer: Normalizer::One,
            symmetry: false,
            prune: false,
            backend,
        };
        let step1 = crate::sos::solve_sos_bound(p, &regions, dbar, &opts)?;
        if !step1.gamma.is_finite() {
            if round == 0 {
                return Err(CertifyError::AltMaxInfeasible { step: 1, iteration: round });
            }
            break;
        }
        gamma = step1.gamma;
        history.push(gamma);
        let cert = step1.certificate.expect("feasible step has a certificate");
        // expanded multipliers feed step 2
        let multipliers: Vec<Vec<Polynomial<f64>>> = cert
            .regions
            .iter()
            .map(|r| r.multipliers.iter().map(|(_, s)| s.expand()).collect())
            .collect();
        best_cert = Some(cert);

        if round + 1 == rounds {
            break;
        }

        // Step 2: optimize γ, h_j, s_{k,0} jointly with multipliers fixed
        match altmax_step2(p, &patterns, &multipliers, dbar, h_degree, &h_monomials, backend)? {
            Some((g2, new_hs)) => {
                gamma = g2.max(gamma);
                history.push(g2);
                hs = new_hs;
            }
            None => {
                if round == 0 {
                    return Err(CertifyError::AltMaxInfeasible { step: 2, iteration: round });
                }
                break;
            }
        }
    }

    Ok(AltMaxResult {
        gamma,
        history,
        certificate: best_cert.expect("at least one feasible step"),
        regions_h: hs,
    })
}

fn altmax_step2(
    p: &Polynomial<f64>,
    patterns: &[Vec<f64>],
    multipliers: &[Vec<Polynomial<f64>>],
    dbar: u32,
    _h_degree: u32,
    h_monomials: &[MultiIndex],
    backend: &dyn ConicBackend,
) -> Result<Option<(f64, Vec<Polynomial<f64>>)>, CertifyError> {
    let n = p.nvars();
    let ell = patterns[0].len();
    let mut prob = ConicProblem::new();
    let gamma = prob.add_free_var();
    // free coefficients for each h_j
    let h_vars: Vec<Vec<usize>> = (0..ell)
        .map(|_| h_monomials.iter().map(|_| prob.add_free_var()).collect())
        .collect();

    let base_basis = GramBasis::affine(n, dbar / 2);
    let mut base_blocks = Vec::new();
    for (k, eps) in patterns.iter().enumerate() {
        // p − γ − Σ_j ε_{k,j} h_j s*_{k,j} must be sos
        let mut linear: Vec<(usize, Polynomial<f64>)> =
            vec![(gamma, Polynomial::constant(n, -1.0))];
        for j in 0..ell {
            let s_fixed = &multipliers[k][j];
            for (mi, mono) in h_monomials.iter().enumerate() {
                let coef_poly = Polynomial::monomial(mono.clone(), -eps[j])
                    .mul(s_fixed);
                linear.push((h_vars[j][mi], coef_poly));
            }
        }
        let family = PolyFamily { base: p.clone(), linear };
        let blocks = encode_sos_blocks(&mut prob, &family, &base_basis, false)?;
        base_blocks.push(blocks);
    }
    prob.set_objective(vec![(VarRef::Free(gamma), 1.0)], true);
    let sol = backend.solve(&prob).map_err(SosError::Solver)?;
    if sol.status != SolveStatus::Optimal {
        return Ok(None);
    }
    let g = sol.free_values[gamma];
    let new_hs: Vec<Polynomial<f64>> = (0..ell)
        .map(|j| {
            let mut h = Polynomial::zero(n);
            for (mi, mono) in h_monomials.iter().enumerate() {
                h.add_term(mono.clone(), sol.free_values[h_vars[j][mi]]);
            }
            h
        })
        .collect();
    Ok(Some((g, new_hs)))
}
