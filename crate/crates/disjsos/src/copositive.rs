//! Copositivity machinery: the P+N criterion, disjunctive P+N certificates
//! over simplicial disjunctions of the nonnegative orthant, the ψ lower
//! bound for quadratics on a simplicial hull, and the Motzkin–Straus clique
//! formulation.

use crate::conic::{ConicBackend, ConicProblem, SolveStatus, VarRef};
use crate::disjunction::{SimplexMode, SimplicialDisjunction};
use crate::poly::LinearMap;
use crate::scalar::{Coeff, Rat};
use crate::symmat::SymMatrix;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CopositiveError {
    #[error("generator {k} is numerically singular")]
    SingularGenerator { k: usize },
    #[error("disjunction does not cover the nonnegative orthant: witness {witness:?}")]
    CoverageFailure { witness: Vec<f64> },
    #[error("solver failure: {0:?}")]
    Solver(SolveStatus),
    #[error(transparent)]
    Backend(#[from] crate::conic::SolverError),
    #[error("adjacency matrix must be symmetric 0/1 with zero diagonal")]
    BadAdjacency,
}

/// One region of a disjunctive P+N certificate: `V^T Q V = P + N`.
#[derive(Debug, Clone)]
pub struct PnRegion<T: Coeff> {
    pub v: LinearMap<T>,
    pub p: SymMatrix<T>,
    pub n: SymMatrix<T>,
}

#[derive(Debug, Clone)]
pub struct PnCertificate<T: Coeff> {
    pub regions: Vec<PnRegion<T>>,
    /// max_k ‖V_k^T Q V_k − P_k − N_k‖_∞, recomputed on assembly
    pub residual: f64,
}

impl<T: Coeff> PnCertificate<T> {
    /// Reconstruction defect of every region against `q`.
    pub fn reconstruction_residual(&self, q: &SymMatrix<T>) -> f64 {
        self.regions
            .iter()
            .map(|r| {
                let target = q.congruence(&r.v);
                target.sub(&r.p.add(&r.n)).max_abs_f64()
            })
            .fold(0.0, f64::max)
    }
}

impl PnCertificate<Rat> {
    /// Exact verification: reconstruction identity, P PSD, N entrywise ≥ 0.
    pub fn verify_exact(&self, q: &SymMatrix<Rat>) -> bool {
        self.regions.iter().all(|r| {
            let target = q.congruence(&r.v);
            let recon = r.p.add(&r.n);
            let nn = (0..r.n.n()).all(|i| (i..r.n.n()).all(|j| r.n.get(i, j) >= Rat::zero()));
            target == recon && nn && r.p.is_psd_exact()
        })
    }
}

/// Outcome of the single-region P+N feasibility SDP.
#[derive(Debug)]
pub enum PnOutcome {
    Certificate(PnCertificate<f64>),
    Infeasible,
}

/// Solves the feasibility SDP `Q = P + N`, `P ⪰ 0`, `N ≥ 0`.
pub fn pn_test(
    q: &SymMatrix<f64>,
    backend: &dyn ConicBackend,
) -> Result<PnOutcome, CopositiveError> {
    pn_test_region(q, &LinearMap::identity(q.n()), backend)
}

/// P+N feasibility for `V^T Q V`.
pub fn pn_test_region(
    q: &SymMatrix<f64>,
    v: &LinearMap<f64>,
    backend: &dyn ConicBackend,
) -> Result<PnOutcome, CopositiveError> {
    let n = q.n();
    let target = q.congruence(v);
    let mut prob = ConicProblem::new();
    let pb = prob.add_psd_block(n);
    let nb = prob.add_nonneg_block(n * (n + 1) / 2);
    let mut idx = 0usize;
    for i in 0..n {
        for j in i..n {
            prob.add_equality(
                vec![
                    (VarRef::Psd { block: pb, row: i, col: j }, 1.0),
                    (VarRef::Nonneg { block: nb, idx }, 1.0),
                ],
                target.get(i, j),
            );
            idx += 1;
        }
    }
    let sol = backend.solve(&prob)?;
    match sol.status {
        SolveStatus::Optimal => {
            let p = sol.psd_values[pb].clone();
            let mut nmat = SymMatrix::<f64>::zeros(n);
            let mut k = 0usize;
            for i in 0..n {
                for j in i..n {
                    nmat.set(i, j, sol.nonneg_values[nb][k]);
                    k += 1;
                }
            }
            let region = PnRegion { v: v.clone(), p, n: nmat };
            let mut cert = PnCertificate { regions: vec![region], residual: 0.0 };
            cert.residual = cert.reconstruction_residual(q);
            Ok(PnOutcome::Certificate(cert))
        }
        SolveStatus::Infeasible => Ok(PnOutcome::Infeasible),
        status => Err(CopositiveError::Solver(status)),
    }
}

/// Variants of the per-region membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnMode {
    /// `V^T Q V = P + N` with `P ⪰ 0`, `N ≥ 0` (dominates the plain P+N test).
    PsdPlusNonneg,
    /// `V^T Q V ≥ 0` entrywise only.
    NonnegOnly,
}

#[derive(Debug, Clone)]
pub struct PsiResult {
    pub value: f64,
    pub status: SolveStatus,
    /// Interior-point solves report the solver gap; the first-order path
    /// reports the PSD repair margin that was subtracted.
    pub repair: f64,
}

/// Configuration for [`psi`]. The first-order path activates for matrices of
/// side at least `admm_threshold` and requires generator columns on the unit
/// simplex (true for every branch-and-bound cell).
pub struct PsiOptions<'a> {
    pub backend: &'a dyn ConicBackend,
    pub mode: PnMode,
    pub admm_threshold: usize,
}

impl<'a> PsiOptions<'a> {
    pub fn new(backend: &'a dyn ConicBackend) -> Self {
        PsiOptions { backend, mode: PnMode::PsdPlusNonneg, admm_threshold: 25 }
    }
}

/// `ψ(V) = max t : V^T (Q − t J) V − N ⪰ 0, N ≥ 0`, a lower bound on
/// `min_{x ∈ conv{V}} x^T Q x`.
pub fn psi(
    v: &LinearMap<f64>,
    q: &SymMatrix<f64>,
    opts: &PsiOptions,
) -> Result<PsiResult, CopositiveError> {
    let n = q.n();
    let m = q.congruence(v);
    let ones = vec![1.0; n];
    let jv = SymMatrix::<f64>::from_fn(n, |i, j| {
        // V^T J V = (V^T 1)(1^T V)
        let ci: f64 = v.column(i).iter().sum();
        let cj: f64 = v.column(j).iter().sum();
        let _ = &ones;
        ci * cj
    });

    if opts.mode == PnMode::NonnegOnly {
        // max t with M − t·J' ≥ 0 entrywise; J' has positive entries for
        // simplex-hull generators
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i..n {
                let denom = jv.get(i, j);
                if denom <= 0.0 {
                    return Err(CopositiveError::SingularGenerator { k: 0 });
                }
                best = best.min(m.get(i, j) / denom);
            }
        }
        return Ok(PsiResult { value: best, status: SolveStatus::Optimal, repair: 0.0 });
    }

    if n >= opts.admm_threshold {
        return Ok(psi_admm(&m, &jv));
    }

    let mut prob = ConicProblem::new();
    let t = prob.add_free_var();
    let sb = prob.add_psd_block(n);
    let nb = prob.add_nonneg_block(n * (n + 1) / 2);
    let mut idx = 0usize;
    for i in 0..n {
        for j in i..n {
            // S_ij + N_ij + t·J'_ij = M_ij
            prob.add_equality(
                vec![
                    (VarRef::Psd { block: sb, row: i, col: j }, 1.0),
                    (VarRef::Nonneg { block: nb, idx }, 1.0),
                    (VarRef::Free(t), jv.get(i, j)),
                ],
                m.get(i, j),
            );
            idx += 1;
        }
    }
    prob.set_objective(vec![(VarRef::Free(t), 1.0)], true);
    let sol = opts.backend.solve(&prob)?;
    match sol.status {
        SolveStatus::Optimal => {
            Ok(PsiResult { value: sol.free_values[t], status: SolveStatus::Optimal, repair: sol.gap })
        }
        status => Ok(PsiResult { value: f64::NEG_INFINITY, status, repair: 0.0 }),
    }
}

/// First-order solver for `max t : M − t·J' = P + N, P ⪰ 0, N ≥ 0`, used for
/// large matrices where an interior-point PSD block is too expensive. The
/// returned value is made rigorous by subtracting the final PSD defect:
/// with `N ≥ 0` exact and `S = M − tJ' − N`, every `z` in the simplex gives
/// `z^T M z ≥ t + min(λ_min(S), 0)`.
fn psi_admm(m: &SymMatrix<f64>, jv: &SymMatrix<f64>) -> PsiResult {
    let n = m.n();
    let scale = m.max_abs_f64().max(1.0);
    let j_norm2: f64 = {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += jv.get(i, j) * jv.get(i, j);
            }
        }
        acc
    };

    // consensus variables
    let mut p_hat = SymMatrix::<f64>::zeros(n);
    let mut n_hat = SymMatrix::<f64>::zeros(n);
    let mut t_hat = 0.0f64;
    let mut u_p = SymMatrix::<f64>::zeros(n);
    let mut u_n = SymMatrix::<f64>::zeros(n);
    let mut u_t = 0.0f64;
    let mu = 1.0 * scale; // objective weight relative to the quadratic penalty

    let inner = |a: &SymMatrix<f64>, b: &SymMatrix<f64>| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += a.get(i, j) * b.get(i, j);
            }
        }
        acc
    };

    let mut p;
    let mut nn;
    let mut t;
    let max_iter = 4000usize;
    let tol = 1e-9 * scale;
    let mut converged = false;
    for iter in 0..max_iter {
        // affine projection of (p_hat − u_p, n_hat − u_n, t_hat − u_t)
        let p0 = p_hat.sub(&u_p);
        let n0 = n_hat.sub(&u_n);
        let t0 = t_hat - u_t;
        let r = p0.add(&n0).add(&jv.scale(&t0)).sub(m);
        let lam_j = inner(&r, jv) / (2.0 + j_norm2);
        let lam = r.sub(&jv.scale(&lam_j)).scale(&0.5);
        p = p0.sub(&lam);
        nn = n0.sub(&lam);
        t = t0 - lam_j;

        // cone projections with the linear objective on t
        let p_prev = p_hat.clone();
        let eig = p.add(&u_p).to_nalgebra().symmetric_eigen();
        let mut proj = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (k, &lamk) in eig.eigenvalues.iter().enumerate() {
            if lamk > 0.0 {
                let col = eig.eigenvectors.column(k);
                proj += lamk * &col * col.transpose();
            }
        }
        p_hat = SymMatrix::from_fn(n, |i, j| proj[(i, j)]);
        n_hat = SymMatrix::from_fn(n, |i, j| (nn.get(i, j) + u_n.get(i, j)).max(0.0));
        t_hat = t + u_t + mu;

        u_p = u_p.add(&p).sub(&p_hat);
        u_n = u_n.add(&nn).sub(&n_hat);
        u_t += t - t_hat;

        if iter % 25 == 24 {
            let prim = p.sub(&p_hat).max_abs_f64().max(nn.sub(&n_hat).max_abs_f64());
            let dual = p_hat.sub(&p_prev).max_abs_f64();
            if prim < tol && dual < tol {
                converged = true;
                break;
            }
        }
    }

    // rigorous repair: N clamped nonnegative, then subtract the PSD defect
    let n_final = SymMatrix::from_fn(n, |i, j| n_hat.get(i, j).max(0.0));
    let s = m.sub(&jv.scale(&t_hat)).sub(&n_final);
    let lam_min = s.min_eigenvalue().min(0.0);
    let value = t_hat + lam_min;
    PsiResult {
        value,
        status: if converged || lam_min > -1e-5 * scale {
            SolveStatus::Optimal
        } else {
            SolveStatus::NumericalFailure
        },
        repair: -lam_min,
    }
}

/// Sampled coverage check: `count` simplex points must each lie in some
/// `cone{V_k}` (membership by solving `V z = x` and checking `z ≥ −1e−9`).
pub fn check_orthant_coverage(
    disj: &SimplicialDisjunction<f64>,
    count: usize,
    seed: u64,
) -> Result<(), CopositiveError> {
    let n = disj.generators.first().map_or(0, |v| v.n());
    let inverses: Vec<LinearMap<f64>> = disj
        .generators
        .iter()
        .enumerate()
        .map(|(k, v)| v.inverse().ok_or(CopositiveError::SingularGenerator { k }))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        // uniform on the simplex via normalized exponentials
        let mut x: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
        let s: f64 = x.iter().sum();
        for v in x.iter_mut() {
            *v /= s;
        }
        let covered = inverses.iter().any(|vinv| {
            vinv.apply(&x).iter().all(|&z| z >= -1e-9)
        });
        if !covered {
            return Err(CopositiveError::CoverageFailure { witness: x });
        }
    }
    Ok(())
}

/// Runs the P+N test on every `V_k^T Q V_k`; succeeds iff all regions do.
pub fn disjunctive_pn(
    q: &SymMatrix<f64>,
    disj: &SimplicialDisjunction<f64>,
    backend: &dyn ConicBackend,
) -> Result<PnOutcome, CopositiveError> {
    assert_eq!(disj.mode, SimplexMode::SimplexHull);
    check_orthant_coverage(disj, 2000, 0x636f706f)?;
    let mut regions = Vec::new();
    for (k, v) in disj.generators.iter().enumerate() {
        match pn_test_region(q, v, backend)? {
            PnOutcome::Certificate(c) => {
                let mut region = c.regions.into_iter().next().unwrap();
                region.v = v.clone();
                regions.push(region);
            }
            PnOutcome::Infeasible => {
                let _ = k;
                return Ok(PnOutcome::Infeasible);
            }
        }
    }
    let mut cert = PnCertificate { regions, residual: 0.0 };
    cert.residual = cert.reconstruction_residual(q);
    Ok(PnOutcome::Certificate(cert))
}

/// Simple undirected graph on `n` vertices.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n: usize,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    g.adj[i * n + j] = true;
                }
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n);
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    g.adj[i * self.n + j] = !self.adj[i * self.n + j];
                }
            }
        }
        g
    }

    pub fn edge_count(&self) -> usize {
        let mut c = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn adjacency(&self) -> SymMatrix<f64> {
        SymMatrix::from_fn(self.n, |i, j| if i != j && self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Parses an edge-list text: one `i j` pair per line (1-based), `#`
    /// comments allowed; the first line may be `n <count>`.
    pub fn from_edge_list(text: &str) -> Result<Graph, String> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut declared_n = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() == 2 && parts[0] == "n" {
                declared_n = Some(parts[1].parse::<usize>().map_err(|e| e.to_string())?);
                continue;
            }
            if parts.len() != 2 {
                return Err(format!("bad edge line `{line}`"));
            }
            let i: usize = parts[0].parse().map_err(|e| format!("{e}"))?;
            let j: usize = parts[1].parse().map_err(|e| format!("{e}"))?;
            if i == 0 || j == 0 {
                return Err("vertices are 1-based".to_string());
            }
            edges.push((i - 1, j - 1));
        }
        let n = declared_n
            .unwrap_or_else(|| edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0));
        let mut g = Graph::empty(n);
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(format!("edge ({},{}) out of range", i + 1, j + 1));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push_str(&format!("{} {}\n", i + 1, j + 1));
                }
            }
        }
        out
    }
}

/// The Motzkin–Straus objective: `1/ω(G) = min_{Δ} x^T (I + Ā) x` with `Ā`
/// the complement adjacency.
pub struct CliqueProgram {
    pub graph: Graph,
    pub q: SymMatrix<f64>,
}

pub fn clique_program(graph: &Graph) -> Result<CliqueProgram, CopositiveError> {
    let n = graph.n;
    for i in 0..n {
        if graph.has_edge(i, i) {
            return Err(CopositiveError::BadAdjacency);
        }
    }
    let abar = graph.complement().adjacency();
    let q = SymMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { abar.get(i, j) });
    Ok(CliqueProgram { graph: graph.clone(), q })
}

/// Integer clique bounds from simplex bounds `L ≤ min x^T Q x ≤ U`:
/// `ω ≤ ⌊1/L⌋` and `ω ≥ ⌈1/U⌉`, with a 1e−9 guard band against solver noise.
pub fn clique_bounds(l: f64, u: f64) -> (usize, Option<usize>) {
    let guard = 1e-9;
    let lower = if u > 0.0 { (1.0 / u - guard).ceil().max(1.0) as usize } else { 1 };
    let upper = if l > 0.0 { Some(((1.0 / l) + guard).floor() as usize) } else { None };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver_clarabel::ClarabelBackend;

    fn backend() -> ClarabelBackend {
        ClarabelBackend::default()
    }

    fn horn() -> SymMatrix<f64> {
        crate::bench::horn_matrix().to_f64()
    }

    #[test]
    fn identity_is_pn() {
        let q = SymMatrix::<f64>::identity(3);
        match pn_test(&q, &backend()).unwrap() {
            PnOutcome::Certificate(c) => {
                assert!(c.residual < 1e-7);
                assert!(c.regions[0].p.min_eigenvalue() > -1e-8);
            }
            PnOutcome::Infeasible => panic!("identity must be P+N"),
        }
    }

    #[test]
    fn negative_identity_is_not_pn() {
        let q = SymMatrix::<f64>::identity(2).scale(&-1.0);
        match pn_test(&q, &backend()).unwrap() {
            PnOutcome::Infeasible => {}
            _ => panic!("-I cannot be P+N"),
        }
    }

    #[test]
    fn horn_is_not_pn_but_disjunctive_pn() {
        let h = horn();
        match pn_test(&h, &backend()).unwrap() {
            PnOutcome::Infeasible => {}
            _ => panic!("Horn must fail the plain P+N test"),
        }

        let (v1, v2) = crate::bench::horn_disjunction();
        let disj = SimplicialDisjunction {
            mode: SimplexMode::SimplexHull,
            generators: vec![v1.to_f64(), v2.to_f64()],
        };
        match disjunctive_pn(&h, &disj, &backend()).unwrap() {
            PnOutcome::Certificate(c) => {
                assert!(c.residual < 1e-7, "residual {}", c.residual);
                assert_eq!(c.regions.len(), 2);
            }
            PnOutcome::Infeasible => panic!("Horn is disjunctive P+N over the split"),
        }

        // single-region identity disjunction must fail
        let trivial = SimplicialDisjunction {
            mode: SimplexMode::SimplexHull,
            generators: vec![LinearMap::identity(5)],
        };
        match disjunctive_pn(&h, &trivial, &backend()).unwrap() {
            PnOutcome::Infeasible => {}
            _ => panic!("Horn over {{I}} must fail"),
        }
    }

    #[test]
    fn psi_of_all_ones_is_one() {
        // x^T J x = 1 on the simplex
        let q = SymMatrix::<f64>::ones(4);
        let b = backend();
        let opts = PsiOptions::new(&b);
        let r = psi(&LinearMap::identity(4), &q, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.value - 1.0).abs() < 1e-6, "psi = {}", r.value);
    }

    #[test]
    fn psi_horn_negative_at_root_nonnegative_after_split() {
        let h = horn();
        let b = backend();
        let opts = PsiOptions::new(&b);
        let root = psi(&LinearMap::identity(5), &h, &opts).unwrap();
        assert!(root.value < 0.0, "root psi = {}", root.value);

        let (v1, v2) = crate::bench::horn_disjunction();
        for v in [v1.to_f64(), v2.to_f64()] {
            let r = psi(&v, &h, &opts).unwrap();
            assert!(r.value >= -1e-7, "split psi = {}", r.value);
        }
    }

    #[test]
    fn psi_admm_matches_interior_point() {
        // random PSD + nonneg mix at n below/above the threshold boundary
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let mut q = SymMatrix::<f64>::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.gen_range(-1.0..1.0);
                q.set(i, j, if i == j { v.abs() + 1.0 } else { v });
            }
        }
        let b = backend();
        let ip = psi(&LinearMap::identity(n), &q, &PsiOptions::new(&b)).unwrap();
        let m = q.congruence(&LinearMap::identity(n));
        let jv = SymMatrix::<f64>::ones(n);
        let admm = psi_admm(&m, &jv);
        assert!(
            (ip.value - admm.value).abs() < 2e-4,
            "ip {} vs admm {}",
            ip.value,
            admm.value
        );
        // first-order value must stay a valid lower bound
        assert!(admm.value <= ip.value + 1e-5);
    }

    #[test]
    fn nonneg_only_mode_is_weaker() {
        let q = SymMatrix::<f64>::identity(3);
        let b = backend();
        let mut opts = PsiOptions::new(&b);
        opts.mode = PnMode::NonnegOnly;
        let weak = psi(&LinearMap::identity(3), &q, &opts).unwrap();
        // off-diagonal zeros force t <= 0 in N-only mode
        assert!(weak.value <= 1e-12);
        let full = psi(&LinearMap::identity(3), &q, &PsiOptions::new(&b)).unwrap();
        assert!(full.value >= weak.value - 1e-9);
    }

    #[test]
    fn clique_program_shapes() {
        let k5 = Graph::complete(5);
        let cp = clique_program(&k5).unwrap();
        // complete graph: complement empty, Q = I
        assert!((cp.q.get(0, 0) - 1.0).abs() < 1e-12);
        assert!(cp.q.get(0, 1).abs() < 1e-12);

        let c5 = Graph::cycle(5);
        let cp5 = clique_program(&c5).unwrap();
        assert!((cp5.q.get(0, 2) - 1.0).abs() < 1e-12);
        assert!(cp5.q.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn clique_bound_rounding() {
        let (lo, hi) = clique_bounds(1.0 / 5.0 - 1e-12, 1.0 / 5.0 + 1e-12);
        assert_eq!(lo, 5);
        assert_eq!(hi, Some(5));
        let (lo2, hi2) = clique_bounds(0.11, 0.2);
        assert_eq!(lo2, 5);
        assert_eq!(hi2, Some(9));
    }

    #[test]
    fn edge_list_round_trip() {
        let mut g = Graph::empty(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        let text = g.to_edge_list();
        let g2 = Graph::from_edge_list(&text).unwrap();
        assert_eq!(g2.n, 4);
        assert!(g2.has_edge(0, 1) && g2.has_edge(2, 3) && !g2.has_edge(0, 2));
    }
}
