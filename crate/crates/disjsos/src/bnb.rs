//! Spatial branch-and-bound: form minimization over the unit sphere via the
//! φ bound and quadratic minimization over the unit simplex via the ψ bound,
//! with projected-gradient upper bounds and exact active-set projections.

use crate::conic::{ConicBackend, ConicProblem, SolveStatus, VarRef};
use crate::copositive::{psi, PsiOptions};
use crate::disjunction::{bisect_longest_edge, SimplexMode, SimplicialDisjunction};
use crate::poly::{LinearMap, Polynomial};
use crate::sos::{
    encode_sos_blocks, CertRegion, GramBasis, Normalizer, PolyFamily, RegionDesc, SosCertificate,
    SosError, SosPart,
};
use crate::symmat::SymMatrix;
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BnbError {
    #[error("projection active-set did not converge within {0} iterations")]
    ProjectionStall(usize),
    #[error("projection KKT residual {0} exceeds tolerance")]
    ProjectionInaccurate(f64),
    #[error("input must be a form of even degree")]
    NotEvenForm,
    #[error(transparent)]
    Sos(#[from] SosError),
    #[error(transparent)]
    Copositive(#[from] crate::copositive::CopositiveError),
    #[error(transparent)]
    Disjunction(#[from] crate::disjunction::DisjunctionError),
}

// --- projections -----------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Projection {
    pub point: Vec<f64>,
    /// coefficients `z ≥ 0` with `point = V z`
    pub coeffs: Vec<f64>,
    pub kkt_residual: f64,
}

/// Euclidean projection of `y` onto `cone{V}` by Lawson–Hanson nonnegative
/// least squares over `x = Vz`, `z ≥ 0`.
pub fn project_cone(v: &LinearMap<f64>, y: &[f64]) -> Result<Projection, BnbError> {
    let n = v.n();
    assert_eq!(y.len(), n);
    let a = v.to_nalgebra();
    let yv = nalgebra::DVector::from_column_slice(y);
    let ata = a.transpose() * &a;
    let aty = a.transpose() * &yv;

    let mut passive = vec![false; n];
    let mut z = nalgebra::DVector::<f64>::zeros(n);
    let max_iter = 30 * n * n + 100;
    let mut iter = 0usize;
    loop {
        iter += 1;
        if iter > max_iter {
            return Err(BnbError::ProjectionStall(max_iter));
        }
        // dual w = Aᵀ(y − Az); only a strictly positive multiplier admits
        let w = &aty - &ata * &z;
        let mut best = 1e-11 * (1.0 + yv.norm());
        let mut pick = None;
        for i in 0..n {
            if !passive[i] && w[i] > best {
                best = w[i];
                pick = Some(i);
            }
        }
        let Some(i_star) = pick else { break };
        passive[i_star] = true;

        loop {
            iter += 1;
            if iter > max_iter {
                return Err(BnbError::ProjectionStall(max_iter));
            }
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let zp = solve_normal_subset(&ata, &aty, &idx, None);
            if zp.iter().all(|&v| v > 1e-13) {
                z.fill(0.0);
                for (k, &i) in idx.iter().enumerate() {
                    z[i] = zp[k];
                }
                break;
            }
            // step toward zp until the first passive coordinate hits zero
            let mut alpha = 1.0f64;
            for (k, &i) in idx.iter().enumerate() {
                if zp[k] <= 1e-13 {
                    let denom = z[i] - zp[k];
                    if denom > 0.0 {
                        alpha = alpha.min(z[i] / denom);
                    }
                }
            }
            let mut znew = z.clone();
            for (k, &i) in idx.iter().enumerate() {
                znew[i] = z[i] + alpha * (zp[k] - z[i]);
            }
            z = znew;
            for i in 0..n {
                if passive[i] && z[i] <= 1e-13 {
                    z[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }

    let point = &a * &z;
    // KKT: g = Aᵀ(Az − y) ≥ 0, complementary with z ≥ 0
    let g = &ata * &z - &aty;
    let mut kkt: f64 = 0.0;
    for i in 0..n {
        kkt = kkt.max((-g[i]).max(0.0));
        kkt = kkt.max((g[i] * z[i]).abs());
    }
    let scale = 1.0 + yv.norm();
    let res = Projection {
        point: point.iter().cloned().collect(),
        coeffs: z.iter().cloned().collect(),
        kkt_residual: kkt / scale,
    };
    if res.kkt_residual > 1e-9 {
        return Err(BnbError::ProjectionInaccurate(res.kkt_residual));
    }
    Ok(res)
}

/// Euclidean projection of `y` onto `conv{V}`: active-set least squares over
/// `x = Vz`, `z ≥ 0`, `Σz = 1`.
pub fn project_hull(v: &LinearMap<f64>, y: &[f64]) -> Result<Projection, BnbError> {
    let n = v.n();
    assert_eq!(y.len(), n);
    let a = v.to_nalgebra();
    let yv = nalgebra::DVector::from_column_slice(y);
    let ata = a.transpose() * &a;
    let aty = a.transpose() * &yv;

    // start feasible at the barycenter
    let mut z = nalgebra::DVector::<f64>::from_element(n, 1.0 / n as f64);
    let mut passive = vec![true; n];
    let max_iter = 30 * n * n + 100;
    let mut iter = 0usize;
    loop {
        iter += 1;
        if iter > max_iter {
            return Err(BnbError::ProjectionStall(max_iter));
        }
        let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
        let (zp, lambda) = solve_normal_subset_eq(&ata, &aty, &idx);
        if zp.iter().all(|&v| v >= -1e-13) {
            z.fill(0.0);
            for (k, &i) in idx.iter().enumerate() {
                z[i] = zp[k].max(0.0);
            }
            // duals of the active bounds: μ_i = g_i − λ must be ≥ 0
            let g = &ata * &z - &aty;
            let mut worst = None;
            let mut worst_mu = -1e-11 * (1.0 + yv.norm());
            for i in 0..n {
                if !passive[i] {
                    let mu = g[i] - lambda;
                    if mu < worst_mu {
                        worst_mu = mu;
                        worst = Some(i);
                    }
                }
            }
            match worst {
                Some(i) => passive[i] = true,
                None => break,
            }
        } else {
            // line step to the first blocking bound
            let mut alpha = 1.0f64;
            let mut block = None;
            for (k, &i) in idx.iter().enumerate() {
                if zp[k] < -1e-15 {
                    let denom = z[i] - zp[k];
                    if denom > 0.0 {
                        let a_i = z[i] / denom;
                        if a_i < alpha {
                            alpha = a_i;
                            block = Some(i);
                        }
                    }
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                z[i] += alpha * (zp[k] - z[i]);
            }
            if let Some(i) = block {
                z[i] = 0.0;
                passive[i] = false;
            }
        }
    }

    let point = &a * &z;
    // KKT with the equality multiplier λ estimated from the passive set
    let g = &ata * &z - &aty;
    let mut lam_est = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        if z[i] > 1e-12 {
            lam_est += g[i];
            count += 1;
        }
    }
    if count > 0 {
        lam_est /= count as f64;
    }
    let mut kkt: f64 = (z.iter().sum::<f64>() - 1.0).abs();
    for i in 0..n {
        if z[i] > 1e-12 {
            kkt = kkt.max((g[i] - lam_est).abs());
        } else {
            kkt = kkt.max(-(g[i] - lam_est).min(0.0));
        }
        kkt = kkt.max(-z[i].min(0.0));
    }
    let scale = 1.0 + yv.norm() + ata.norm();
    let res = Projection {
        point: point.iter().cloned().collect(),
        coeffs: z.iter().cloned().collect(),
        kkt_residual: kkt / scale,
    };
    if res.kkt_residual > 1e-9 {
        return Err(BnbError::ProjectionInaccurate(res.kkt_residual));
    }
    Ok(res)
}

fn solve_normal_subset(
    ata: &nalgebra::DMatrix<f64>,
    aty: &nalgebra::DVector<f64>,
    idx: &[usize],
    _unused: Option<()>,
) -> Vec<f64> {
    let k = idx.len();
    let mut m = nalgebra::DMatrix::<f64>::zeros(k, k);
    let mut b = nalgebra::DVector::<f64>::zeros(k);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(r, c)] = ata[(i, j)];
        }
        b[r] = aty[i];
    }
    // tiny Tikhonov guard for near-singular subsets
    for d in 0..k {
        m[(d, d)] += 1e-13;
    }
    match m.clone().cholesky() {
        Some(ch) => ch.solve(&b).iter().cloned().collect(),
        None => m.lu().solve(&b).map(|s| s.iter().cloned().collect()).unwrap_or(vec![0.0; k]),
    }
}

fn solve_normal_subset_eq(
    ata: &nalgebra::DMatrix<f64>,
    aty: &nalgebra::DVector<f64>,
    idx: &[usize],
) -> (Vec<f64>, f64) {
    let k = idx.len();
    let mut m = nalgebra::DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut b = nalgebra::DVector::<f64>::zeros(k + 1);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[(r, c)] = ata[(i, j)];
        }
        m[(r, k)] = 1.0;
        m[(k, r)] = 1.0;
        b[r] = aty[i];
    }
    for d in 0..k {
        m[(d, d)] += 1e-13;
    }
    b[k] = 1.0;
    let sol = m.lu().solve(&b).unwrap_or_else(|| nalgebra::DVector::zeros(k + 1));
    let z = sol.rows(0, k).iter().cloned().collect();
    // λ is the negated multiplier in this arrangement
    (z, -sol[k])
}

// --- projected gradient descent ---------------------------------------------

/// PGD for a form on `cone{V} ∩ S^{n−1}`:
/// `y = Π_cone(x − β∇p)`, `x⁺ = y/‖y‖`. The stepsize halves (up to 10
/// times) when a step increases the objective; a step that still increases
/// it leaves the iterate unchanged. Only feasibility of the output is
/// guaranteed.
pub fn pgd_sphere(
    p: &Polynomial<f64>,
    v: &LinearMap<f64>,
    x0: &[f64],
    k: usize,
    beta: f64,
) -> Result<Vec<f64>, BnbError> {
    let mut x = x0.to_vec();
    let mut fx = p.evaluate(&x).expect("dimension checked by caller");
    for _ in 0..k {
        let grad = p.gradient(&x).expect("dimension checked");
        let mut step = beta;
        let mut accepted = false;
        for _ in 0..=10 {
            let y: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - step * gi).collect();
            let proj = project_cone(v, &y)?;
            let norm = proj.point.iter().map(|t| t * t).sum::<f64>().sqrt();
            if norm < 1e-12 {
                // projection collapsed; keep the current iterate
                return Ok(x);
            }
            let cand: Vec<f64> = proj.point.iter().map(|t| t / norm).collect();
            let fc = p.evaluate(&cand).expect("dimension checked");
            if fc <= fx {
                x = cand;
                fx = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

/// PGD for a quadratic on `conv{V}`: `x⁺ = Π_hull(x − 2βQx)`.
pub fn pgd_simplex(
    q: &SymMatrix<f64>,
    v: &LinearMap<f64>,
    x0: &[f64],
    k: usize,
    beta: f64,
) -> Result<Vec<f64>, BnbError> {
    let mut x = x0.to_vec();
    let mut fx = q.quad_form(&x);
    for _ in 0..k {
        let qx = q.apply(&x);
        let mut step = beta;
        let mut accepted = false;
        for _ in 0..=10 {
            let y: Vec<f64> = x.iter().zip(&qx).map(|(xi, gi)| xi - 2.0 * step * gi).collect();
            let proj = project_hull(v, &y)?;
            let fc = q.quad_form(&proj.point);
            if fc <= fx {
                x = proj.point;
                fx = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

// --- the φ bound -------------------------------------------------------------

/// `φ(V) = max γ : p(V(x.²)) − γ·‖V(x.²)‖^d ∈ Σ̂_{n,2d}` — a lower bound on
/// `p` over `cone{V} ∩ S^{n−1}`.
pub fn phi(
    v: &LinearMap<f64>,
    p: &Polynomial<f64>,
    backend: &dyn ConicBackend,
) -> Result<(f64, Option<SosCertificate<f64>>), BnbError> {
    let d = p.degree();
    if d % 2 != 0 || !p.is_homogeneous() {
        return Err(BnbError::NotEvenForm);
    }
    let n = p.nvars();
    let composed = p.compose_linear(v).map_err(|_| BnbError::NotEvenForm)?.substitute_squares();

    // ‖V(x.²)‖² = Σ_i ((V x.²)_i)²
    let mut norm_sq = Polynomial::<f64>::zero(n);
    for i in 0..n {
        let mut row = Polynomial::<f64>::zero(n);
        for j in 0..n {
            let c = v.get(i, j);
            if c != 0.0 {
                row.add_term(crate::poly::MultiIndex::unit(n, j), c);
            }
        }
        let row_sq = row.substitute_squares();
        norm_sq = norm_sq.add(&row_sq.mul(&row_sq));
    }
    let norm_pow = norm_sq.pow(d / 2);

    let mut prob = ConicProblem::new();
    let gamma = prob.add_free_var();
    let family = PolyFamily { base: composed.clone(), linear: vec![(gamma, norm_pow.neg())] };
    let mut basis = GramBasis::homogeneous(n, d);
    let support: Vec<crate::poly::MultiIndex> = {
        let mut s: std::collections::BTreeSet<crate::poly::MultiIndex> = Default::default();
        for (m, _) in composed.terms() {
            s.insert(m.clone());
        }
        for (m, _) in norm_pow.terms() {
            s.insert(m.clone());
        }
        s.into_iter().collect()
    };
    basis = basis.pruned_to_support(support.iter());
    let blocks = encode_sos_blocks(&mut prob, &family, &basis, true)?;
    prob.set_objective(vec![(VarRef::Free(gamma), 1.0)], true);

    let sol = backend.solve(&prob).map_err(SosError::Solver)?;
    match sol.status {
        SolveStatus::Optimal => {
            let value = sol.free_values[gamma];
            let parts: Vec<SosPart<f64>> = blocks
                .iter()
                .map(|b| SosPart::Gram {
                    basis: b
                        .monomials
                        .iter()
                        .map(|m| Polynomial::monomial(m.clone(), 1.0))
                        .collect(),
                    matrix: sol.psd_values[b.psd_block].clone(),
                })
                .collect();
            let cert = SosCertificate {
                nvars: n,
                bound: value,
                normalizer: Normalizer::One,
                regions: vec![CertRegion {
                    descriptor: RegionDesc::Generator(v.clone()),
                    multipliers: vec![],
                    base: parts,
                }],
                solver_status: "optimal".to_string(),
                residual: None,
            };
            Ok((value, Some(cert)))
        }
        _ => Ok((f64::NEG_INFINITY, None)),
    }
}

// --- branch-and-bound ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// `2^{n−1}` sign-pattern generators with the last column fixed to `+e_n`.
    Orthants,
    /// `n+1` generators from the vertices of a regular simplex.
    RegularSimplex,
}

#[derive(Debug, Clone)]
pub struct BnbConfig {
    pub eps: f64,
    pub pgd_steps: usize,
    pub beta: Option<f64>,
    pub node_cap: usize,
    pub workers: usize,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig { eps: 1e-4, pgd_steps: 1, beta: None, node_cap: 10_000, workers: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GapReached,
    NodeCap,
}

#[derive(Debug, Clone)]
pub struct NodeLogRow {
    pub iter: usize,
    pub node_id: usize,
    pub parent_id: i64,
    pub bound: f64,
    pub local_upper: f64,
    pub global_l: f64,
    pub global_u: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct BnbNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub v: LinearMap<f64>,
    pub lower: f64,
    pub upper: f64,
    pub witness: Vec<f64>,
    pub depth: usize,
}

#[derive(Debug)]
pub struct BnbResult {
    pub lower: f64,
    pub upper: f64,
    pub xbar: Vec<f64>,
    pub subregion_count: usize,
    pub log: Vec<NodeLogRow>,
    pub termination: Termination,
}

impl BnbResult {
    pub fn gap_closed(&self, eps: f64) -> bool {
        self.upper - self.lower <= eps * (1.0 + self.lower.abs() + self.upper.abs())
    }

    /// Node log CSV with a versioned header comment.
    pub fn log_csv(&self) -> String {
        let mut out = String::from(
            "# disjsos bnb node log v1\niter,node_id,parent_id,bound,local_upper,global_L,global_U,wall_ms\n",
        );
        for r in &self.log {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.3}\n",
                r.iter, r.node_id, r.parent_id, r.bound, r.local_upper, r.global_l, r.global_u,
                r.wall_ms
            ));
        }
        out
    }

    /// The deterministic columns of the node log (everything but wall time).
    pub fn log_signature(&self) -> Vec<(usize, usize, i64, f64, f64, f64, f64)> {
        self.log
            .iter()
            .map(|r| (r.iter, r.node_id, r.parent_id, r.bound, r.local_upper, r.global_l, r.global_u))
            .collect()
    }
}

/// Minimizes a form over the unit sphere by branch-and-bound on simplicial
/// cones with the φ bound and projected-gradient upper bounds.
pub fn algorithm2(
    p: &Polynomial<f64>,
    init: InitKind,
    cfg: &BnbConfig,
    backend: &dyn ConicBackend,
) -> Result<BnbResult, BnbError> {
    let d = p.degree();
    if d == 0 || d % 2 != 0 || !p.is_homogeneous() {
        return Err(BnbError::NotEvenForm);
    }
    let n = p.nvars();
    let beta = cfg.beta.unwrap_or_else(|| {
        let (_, one_norm) = p.norms();
        1.0 / (d as f64 * one_norm.max(1e-12))
    });

    let disj: SimplicialDisjunction<f64> = match init {
        InitKind::Orthants => crate::disjunction::initial_orthants(n, true),
        InitKind::RegularSimplex => crate::disjunction::initial_regular_simplex(n),
    };

    let t0 = Instant::now();
    let bound_of = |v: &LinearMap<f64>| -> Result<f64, BnbError> { Ok(phi(v, p, backend)?.0) };

    // initial bounds and column-evaluation upper bounds
    let initial: Result<Vec<(f64, f64, Vec<f64>)>, BnbError> = maybe_par(
        cfg.workers,
        &disj.generators,
        |v| {
            let lower = bound_of(v)?;
            let mut upper = f64::INFINITY;
            let mut witness = v.column(0);
            for j in 0..n {
                let col = v.column(j);
                let val = p.evaluate(&col).expect("dimension");
                if val < upper {
                    upper = val;
                    witness = col;
                }
            }
            Ok((lower, upper, witness))
        },
    );
    let initial = initial?;

    let mut nodes: Vec<BnbNode> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut log: Vec<NodeLogRow> = Vec::new();
    let mut global_u = f64::INFINITY;
    let mut xbar = vec![0.0; n];
    for (v, (lower, upper, witness)) in disj.generators.iter().zip(initial) {
        let id = nodes.len();
        if upper < global_u {
            global_u = upper;
            xbar = witness.clone();
        }
        nodes.push(BnbNode {
            id,
            parent: None,
            v: v.clone(),
            lower,
            upper,
            witness,
            depth: 0,
        });
        frontier.push(id);
    }
    let mut global_l = frontier.iter().map(|&i| nodes[i].lower).fold(f64::INFINITY, f64::min);
    for &i in &frontier {
        log.push(NodeLogRow {
            iter: 0,
            node_id: i,
            parent_id: -1,
            bound: nodes[i].lower,
            local_upper: nodes[i].upper,
            global_l,
            global_u,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        });
    }

    let mut subregions = frontier.len();
    let mut iter = 0usize;
    let mut termination = Termination::GapReached;
    while global_u - global_l > cfg.eps * (1.0 + global_l.abs() + global_u.abs()) {
        if subregions >= cfg.node_cap {
            termination = Termination::NodeCap;
            break;
        }
        iter += 1;
        // best-first: smallest bound, ties by node id
        let pos = frontier
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                nodes[a]
                    .lower
                    .partial_cmp(&nodes[b].lower)
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .map(|(k, _)| k)
            .expect("frontier nonempty");
        let node_idx = frontier.swap_remove(pos);
        let parent_lower = nodes[node_idx].lower;
        let parent_depth = nodes[node_idx].depth;
        let (vplus, vminus) = bisect_longest_edge(&nodes[node_idx].v, SimplexMode::SphereCone)?;
        let w = vplus.column(n - 1);

        let children = [vplus, vminus];
        let results: Result<Vec<(f64, Vec<f64>, f64)>, BnbError> =
            maybe_par(cfg.workers, &children, |v| {
                let raw = bound_of(v)?;
                let xk = pgd_sphere(p, v, &w, cfg.pgd_steps, beta)?;
                let u = p.evaluate(&xk).expect("dimension");
                Ok((raw, xk, u))
            });
        let results = results?;

        for (v, (raw, xk, u)) in children.into_iter().zip(results) {
            let id = nodes.len();
            let lower = raw.max(parent_lower); // child region ⊆ parent region
            if u < global_u {
                global_u = u;
                xbar = xk.clone();
            }
            nodes.push(BnbNode {
                id,
                parent: Some(nodes[node_idx].id),
                v,
                lower,
                upper: u,
                witness: xk,
                depth: parent_depth + 1,
            });
            frontier.push(id);
        }
        subregions += 1; // one region replaced by two
        global_l = frontier.iter().map(|&i| nodes[i].lower).fold(f64::INFINITY, f64::min);
        for id in [nodes.len() - 2, nodes.len() - 1] {
            log.push(NodeLogRow {
                iter,
                node_id: id,
                parent_id: nodes[id].parent.unwrap() as i64,
                bound: nodes[id].lower,
                local_upper: nodes[id].upper,
                global_l,
                global_u,
                wall_ms: t0.elapsed().as_secs_f64() * 1e3,
            });
        }
    }

    Ok(BnbResult {
        lower: global_l,
        upper: global_u,
        xbar,
        subregion_count: subregions,
        log,
        termination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopositivityVerdict {
    Copositive,
    NotCopositive,
    Inconclusive,
}

impl CopositivityVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CopositivityVerdict::Copositive => "copositive",
            CopositivityVerdict::NotCopositive => "not_copositive",
            CopositivityVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Minimizes `x^T Q x` over the unit simplex by branch-and-bound with the ψ
/// bound; the sign of the certified bound decides copositivity.
pub fn algorithm3(
    q: &SymMatrix<f64>,
    cfg: &BnbConfig,
    backend: &dyn ConicBackend,
) -> Result<(BnbResult, CopositivityVerdict), BnbError> {
    let stop = |l: f64, u: f64| u - l <= cfg.eps * (1.0 + l.abs() + u.abs());
    let result = simplex_bnb(q, cfg, backend, &stop)?;
    let verdict = if result.lower >= -1e-8 {
        CopositivityVerdict::Copositive
    } else if result.upper < 0.0 {
        CopositivityVerdict::NotCopositive
    } else {
        CopositivityVerdict::Inconclusive
    };
    Ok((result, verdict))
}

/// Simplex branch-and-bound with a custom stopping predicate on `(L, U)`.
pub fn simplex_bnb(
    q: &SymMatrix<f64>,
    cfg: &BnbConfig,
    backend: &dyn ConicBackend,
    stop: &dyn Fn(f64, f64) -> bool,
) -> Result<BnbResult, BnbError> {
    let n = q.n();
    let beta = cfg.beta.unwrap_or_else(|| {
        let mut fro = 0.0;
        for i in 0..n {
            for j in 0..n {
                fro += q.get(i, j) * q.get(i, j);
            }
        }
        1.0 / (2.0 * fro.sqrt().max(1e-12))
    });
    let t0 = Instant::now();

    let psi_opts = PsiOptions::new(backend);
    let bound_of = |v: &LinearMap<f64>| -> Result<f64, BnbError> {
        Ok(psi(v, q, &psi_opts)?.value)
    };

    let root = LinearMap::<f64>::identity(n);
    let root_lower = bound_of(&root)?;
    let mut global_u = f64::INFINITY;
    let mut xbar = vec![0.0; n];
    for i in 0..n {
        let val = q.get(i, i);
        if val < global_u {
            global_u = val;
            xbar = root.column(i);
        }
    }
    let mut nodes = vec![BnbNode {
        id: 0,
        parent: None,
        v: root,
        lower: root_lower,
        upper: global_u,
        witness: xbar.clone(),
        depth: 0,
    }];
    let mut frontier = vec![0usize];
    let mut global_l = root_lower;
    let mut log = vec![NodeLogRow {
        iter: 0,
        node_id: 0,
        parent_id: -1,
        bound: root_lower,
        local_upper: global_u,
        global_l,
        global_u,
        wall_ms: t0.elapsed().as_secs_f64() * 1e3,
    }];

    let mut subregions = 1usize;
    let mut iter = 0usize;
    let mut termination = Termination::GapReached;
    while !stop(global_l, global_u) {
        if subregions >= cfg.node_cap {
            termination = Termination::NodeCap;
            break;
        }
        iter += 1;
        let pos = frontier
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| {
                nodes[a]
                    .lower
                    .partial_cmp(&nodes[b].lower)
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .map(|(k, _)| k)
            .expect("frontier nonempty");
        let node_idx = frontier.swap_remove(pos);
        let parent_lower = nodes[node_idx].lower;
        let parent_depth = nodes[node_idx].depth;
        let (vplus, vminus) = bisect_longest_edge(&nodes[node_idx].v, SimplexMode::SimplexHull)?;
        let w = vplus.column(n - 1);

        let children = [vplus, vminus];
        let results: Result<Vec<(f64, Vec<f64>, f64)>, BnbError> =
            maybe_par(cfg.workers, &children, |v| {
                let raw = bound_of(v)?;
                let xk = pgd_simplex(q, v, &w, cfg.pgd_steps, beta)?;
                let u = q.quad_form(&xk);
                Ok((raw, xk, u))
            });
        let results = results?;

        for (v, (raw, xk, u)) in children.into_iter().zip(results) {
            let id = nodes.len();
            let lower = raw.max(parent_lower);
            if u < global_u {
                global_u = u;
                xbar = xk.clone();
            }
            nodes.push(BnbNode {
                id,
                parent: Some(nodes[node_idx].id),
                v,
                lower,
                upper: u,
                witness: xk,
                depth: parent_depth + 1,
            });
            frontier.push(id);
        }
        subregions += 1;
        global_l = frontier.iter().map(|&i| nodes[i].lower).fold(f64::INFINITY, f64::min);
        for id in [nodes.len() - 2, nodes.len() - 1] {
            log.push(NodeLogRow {
                iter,
                node_id: id,
                parent_id: nodes[id].parent.unwrap() as i64,
                bound: nodes[id].lower,
                local_upper: nodes[id].upper,
                global_l,
                global_u,
                wall_ms: t0.elapsed().as_secs_f64() * 1e3,
            });
        }
    }

    Ok(BnbResult {
        lower: global_l,
        upper: global_u,
        xbar,
        subregion_count: subregions,
        log,
        termination,
    })
}

#[derive(Debug)]
pub struct CliqueResult {
    pub omega_lower: usize,
    pub omega_upper: Option<usize>,
    pub bnb: BnbResult,
}

/// Clique bounds through the Motzkin–Straus program: branch-and-bound stops
/// once the ceiled lower and floored upper clique bounds coincide.
pub fn bnb_clique(
    graph: &crate::copositive::Graph,
    cfg: &BnbConfig,
    backend: &dyn ConicBackend,
) -> Result<CliqueResult, BnbError> {
    let program = crate::copositive::clique_program(graph)?;
    let stop = |l: f64, u: f64| {
        let (lo, hi) = crate::copositive::clique_bounds(l, u);
        matches!(hi, Some(h) if h == lo)
    };
    let bnb = simplex_bnb(&program.q, cfg, backend, &stop)?;
    let (omega_lower, omega_upper) = crate::copositive::clique_bounds(bnb.lower, bnb.upper);
    Ok(CliqueResult { omega_lower, omega_upper, bnb })
}

fn maybe_par<I: Sync, O: Send>(
    workers: usize,
    items: &[I],
    f: impl Fn(&I) -> Result<O, BnbError> + Sync + Send,
) -> Result<Vec<O>, BnbError> {
    if workers > 1 {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::solver_clarabel::ClarabelBackend;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn backend() -> ClarabelBackend {
        ClarabelBackend::default()
    }

    #[test]
    fn cone_projection_identity_cone() {
        let v = LinearMap::<f64>::identity(3);
        // interior point projects to itself
        let y = [1.0, 2.0, 3.0];
        let p = project_cone(&v, &y).unwrap();
        for i in 0..3 {
            assert!((p.point[i] - y[i]).abs() < 1e-10);
        }
        // mixed signs clamp at zero
        let y2 = [1.0, -2.0, 3.0];
        let p2 = project_cone(&v, &y2).unwrap();
        assert!((p2.point[0] - 1.0).abs() < 1e-10);
        assert!(p2.point[1].abs() < 1e-12);
        assert!((p2.point[2] - 3.0).abs() < 1e-10);
        // all-negative goes to the origin
        let p3 = project_cone(&v, &[-1.0, -1.0, -1.0]).unwrap();
        assert!(p3.point.iter().all(|&t| t.abs() < 1e-12));
        assert!(p3.kkt_residual <= 1e-9);
    }

    #[test]
    fn hull_projection_matches_sorting_oracle() {
        let v = LinearMap::<f64>::identity(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let p = project_hull(&v, &y).unwrap();
            let oracle = crate::bench::oracle_simplex_projection(&y);
            for i in 0..4 {
                assert!(
                    (p.point[i] - oracle[i]).abs() < 1e-8,
                    "y {y:?} got {:?} expect {oracle:?}",
                    p.point
                );
            }
            assert!(p.kkt_residual <= 1e-9);
        }
    }

    #[test]
    fn pgd_sphere_descends_on_quadratic() {
        let p = parse_polynomial::<f64>("x1^2 + 2*x2^2", Some(2)).unwrap();
        let v = LinearMap::<f64>::identity(2);
        // e2 itself is a critical point of p on the circle (radial gradient),
        // so descent starts from a slightly rotated point
        let x0 = [0.1, (1.0f64 - 0.01).sqrt()];
        let x = pgd_sphere(&p, &v, &x0, 10, 0.1).unwrap();
        let norm: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
        assert!(p.evaluate(&x).unwrap() < p.evaluate(&x0.to_vec()).unwrap());
        assert!(x[0] > x0[0], "iterates move toward e1: {x:?}");
        // radial gradient at e2 keeps the iterate fixed
        let stay = pgd_sphere(&p, &v, &[0.0, 1.0], 10, 0.1).unwrap();
        assert!((stay[1] - 1.0).abs() < 1e-12);
        // zero tangential gradient at e1 is a fixed point
        let fixed = pgd_sphere(&p, &v, &[1.0, 0.0], 5, 0.1).unwrap();
        assert!((fixed[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pgd_sphere_feasibility_random_starts() {
        let p = parse_polynomial::<f64>("x1^4 + x2^4 + x3^4 - x1^2*x2^2", Some(3)).unwrap();
        let v = crate::disjunction::initial_orthants(3, true).generators[0].clone();
        let vinv = v.inverse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let raw: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
            let norm: f64 = raw.iter().map(|t| t * t).sum::<f64>().sqrt();
            let x0: Vec<f64> = raw.iter().map(|t| t / norm).collect();
            let x = pgd_sphere(&p, &v, &x0, 3, 0.05).unwrap();
            let norm: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
            assert!(vinv.apply(&x).iter().all(|&z| z >= -1e-9));
        }
    }

    #[test]
    fn pgd_simplex_finds_uniform_minimum() {
        let q = SymMatrix::<f64>::identity(3);
        let v = LinearMap::<f64>::identity(3);
        let x = pgd_simplex(&q, &v, &[1.0, 0.0, 0.0], 50, 0.25).unwrap();
        for t in &x {
            assert!((t - 1.0 / 3.0).abs() < 1e-6, "x {x:?}");
        }
    }

    #[test]
    fn phi_on_psd_quadratic() {
        // p = x^T diag(1,2) x: φ >= λ_min − tol for any generator
        let p = parse_polynomial::<f64>("x1^2 + 2*x2^2", Some(2)).unwrap();
        let b = backend();
        let (v0, _) = phi(&LinearMap::identity(2), &p, &b).unwrap();
        assert!(v0 >= 1.0 - 1e-6, "phi = {v0}");
        assert!(v0 <= 1.0 + 1e-6);

        // ‖x‖² composed: φ = 1 exactly
        let norm2 = parse_polynomial::<f64>("x1^2 + x2^2", Some(2)).unwrap();
        let (v1, cert) = phi(&LinearMap::identity(2), &norm2, &b).unwrap();
        assert!((v1 - 1.0).abs() < 1e-6);
        assert!(cert.is_some());
    }

    #[test]
    fn phi_motzkin_positive_orthant() {
        let m = crate::bench::classic_form("motzkin").unwrap().poly.to_float();
        let b = backend();
        let (val, _) = phi(&LinearMap::identity(3), &m, &b).unwrap();
        assert!(val <= 1e-6, "phi = {val}");
        assert!(val >= -0.1, "phi = {val}");
    }

    #[test]
    fn algorithm2_psd_quadratic_terminates_at_init() {
        let p = parse_polynomial::<f64>("2*x1^2 + 3*x2^2 + 4*x3^2", Some(3)).unwrap();
        let cfg = BnbConfig { eps: 1e-4, pgd_steps: 5, ..Default::default() };
        let b = backend();
        let res = algorithm2(&p, InitKind::Orthants, &cfg, &b).unwrap();
        assert!(res.gap_closed(cfg.eps));
        assert!((res.lower - 2.0).abs() < 2e-4 * 3.0, "L = {}", res.lower);
        assert!((res.upper - 2.0).abs() < 2e-4 * 3.0, "U = {}", res.upper);
    }

    #[test]
    fn algorithm2_motzkin_small_tree() {
        let m = crate::bench::classic_form("motzkin").unwrap().poly.to_float();
        let cfg = BnbConfig { eps: 1e-4, pgd_steps: 1, ..Default::default() };
        let b = backend();
        let res = algorithm2(&m, InitKind::Orthants, &cfg, &b).unwrap();
        assert_eq!(res.termination, Termination::GapReached);
        assert!(res.lower >= -1e-3, "L = {}", res.lower);
        assert!(res.upper >= 0.0 && res.upper < 1e-3, "U = {}", res.upper);
        assert!(res.subregion_count <= 16, "count = {}", res.subregion_count);
    }

    #[test]
    fn algorithm3_identity_root() {
        let q = SymMatrix::<f64>::identity(4);
        let cfg = BnbConfig { eps: 1e-6, pgd_steps: 5, ..Default::default() };
        let b = backend();
        let (res, verdict) = algorithm3(&q, &cfg, &b).unwrap();
        assert_eq!(verdict, CopositivityVerdict::Copositive);
        assert!((res.lower - 0.25).abs() < 1e-5, "L = {}", res.lower);
        assert!(res.gap_closed(cfg.eps));
        assert!((res.upper - 0.25).abs() < 1e-4, "U = {}", res.upper);
    }

    #[test]
    fn algorithm3_detects_negative() {
        let mut q = SymMatrix::<f64>::identity(2);
        q.set(0, 1, -3.0);
        let cfg = BnbConfig { eps: 1e-6, pgd_steps: 10, ..Default::default() };
        let b = backend();
        let (res, verdict) = algorithm3(&q, &cfg, &b).unwrap();
        assert_eq!(verdict, CopositivityVerdict::NotCopositive);
        assert!(res.upper < -0.4);
    }

    #[test]
    fn bnb_determinism() {
        let q = crate::bench::qp_instance(1).unwrap().to_f64();
        let cfg = BnbConfig { eps: 1e-6, pgd_steps: 5, ..Default::default() };
        let b = backend();
        let (r1, _) = algorithm3(&q, &cfg, &b).unwrap();
        let (r2, _) = algorithm3(&q, &cfg, &b).unwrap();
        assert_eq!(r1.log_signature(), r2.log_signature());
    }

    #[test]
    fn clique_on_k5() {
        let g = crate::copositive::Graph::complete(5);
        let cfg = BnbConfig { eps: 1e-6, pgd_steps: 10, ..Default::default() };
        let b = backend();
        let res = bnb_clique(&g, &cfg, &b).unwrap();
        assert_eq!(res.omega_lower, 5);
        assert_eq!(res.omega_upper, Some(5));
    }
}
