//! Gram-matrix encodings of sum-of-squares constraints and the SDPs built
//! from them.
//!
//! A polynomial `p` of degree `2k` is sos iff `p = z(x)^T G z(x)` for some
//! PSD matrix `G` over the monomial vector `z`. The encoder emits one PSD
//! block plus one linear equality per monomial; the bound solver assembles
//! the per-region problems `max γ : p − γ·N − Σ_j s_j q_j sos` and extracts
//! certificates from the solved Gram matrices.

mod certificate;

pub use certificate::{
    certificate_from_json, certificate_to_json, verify_certificate, verify_with_bound,
    CertRegion, Normalizer, RegionDesc, SosCertificate, SosCertificateJson, SosPart,
    VerifyReport,
};

use crate::conic::{ConicBackend, ConicProblem, SolveStatus, VarRef};
use crate::poly::{monomials_exact_degree, monomials_up_to_degree, MultiIndex, Polynomial};
use crate::scalar::Coeff;
use crate::symmat::SymMatrix;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SosError {
    #[error("target degree {target} exceeds Gram capacity {capacity}")]
    DegreeOverflow { target: u32, capacity: u32 },
    #[error("inhomogeneous target in homogeneous mode")]
    InhomogeneousTarget,
    #[error("region polynomial degree {q} exceeds budget {dbar}")]
    RegionDegreeOverflow { q: u32, dbar: u32 },
    #[error("Gram matrix indefinite beyond tolerance: min eigenvalue {0}")]
    Indefinite(f64),
    #[error("solver failure in region {region}: {status:?}")]
    Backend { region: usize, status: SolveStatus },
    #[error(transparent)]
    Solver(#[from] crate::conic::SolverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// Monomials of exact degree `half_degree` (for forms).
    Homogeneous,
    /// All monomials of degree at most `half_degree`.
    Affine,
}

/// Ordered monomial vector `z(x)` for a Gram encoding.
#[derive(Debug, Clone)]
pub struct GramBasis {
    pub nvars: usize,
    pub half_degree: u32,
    pub mode: BasisMode,
    pub monomials: Vec<MultiIndex>,
}

impl GramBasis {
    pub fn homogeneous(nvars: usize, half_degree: u32) -> Self {
        GramBasis {
            nvars,
            half_degree,
            mode: BasisMode::Homogeneous,
            monomials: monomials_exact_degree(nvars, half_degree),
        }
    }

    pub fn affine(nvars: usize, half_degree: u32) -> Self {
        GramBasis {
            nvars,
            half_degree,
            mode: BasisMode::Affine,
            monomials: monomials_up_to_degree(nvars, half_degree),
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Drops basis monomials `β` with `2β` outside the per-variable exponent
    /// box of the target support. Safe: Newton polytopes of sos factors lie
    /// in half the target's Newton polytope.
    pub fn pruned_to_support<'a>(mut self, support: impl Iterator<Item = &'a MultiIndex>) -> Self {
        let mut lo = vec![u32::MAX; self.nvars];
        let mut hi = vec![0u32; self.nvars];
        let mut any = false;
        for m in support {
            any = true;
            for (i, &e) in m.0.iter().enumerate() {
                lo[i] = lo[i].min(e);
                hi[i] = hi[i].max(e);
            }
        }
        if !any {
            return self;
        }
        self.monomials.retain(|b| {
            b.0.iter().enumerate().all(|(i, &e)| 2 * e >= lo[i] && 2 * e <= hi[i])
        });
        self
    }
}

/// Target of a Gram encoding: a polynomial family affine in the problem's
/// free scalars, `base(x) + Σ_v free_v · poly_v(x)`.
#[derive(Debug, Clone)]
pub struct PolyFamily {
    pub base: Polynomial<f64>,
    pub linear: Vec<(usize, Polynomial<f64>)>,
}

impl PolyFamily {
    pub fn fixed(base: Polynomial<f64>) -> Self {
        PolyFamily { base, linear: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }

    pub fn max_degree(&self) -> u32 {
        self.linear
            .iter()
            .map(|(_, p)| p.degree())
            .fold(self.base.degree(), u32::max)
    }

    fn support(&self) -> Vec<MultiIndex> {
        let mut set: std::collections::BTreeSet<MultiIndex> = Default::default();
        for (m, _) in self.base.terms() {
            set.insert(m.clone());
        }
        for (_, p) in &self.linear {
            for (m, _) in p.terms() {
                set.insert(m.clone());
            }
        }
        set.into_iter().collect()
    }

    fn is_all_even(&self) -> bool {
        self.base.terms().all(|(m, _)| m.is_all_even())
            && self.linear.iter().all(|(_, p)| p.terms().all(|(m, _)| m.is_all_even()))
    }

    fn is_homogeneous_of(&self, d: u32) -> bool {
        self.base.terms().all(|(m, _)| m.total() == d)
            && self.linear.iter().all(|(_, p)| p.terms().all(|(m, _)| m.total() == d))
    }
}

/// One emitted PSD block together with its slice of the basis.
#[derive(Debug, Clone)]
pub struct GramBlock {
    pub psd_block: usize,
    pub monomials: Vec<MultiIndex>,
}

/// Encodes `z(x)^T G z(x) = target(x)` into `prob`: one PSD block of size
/// `|basis|` plus one equality per monomial.
pub fn gram_encode(
    prob: &mut ConicProblem,
    target: &PolyFamily,
    basis: &GramBasis,
) -> Result<GramBlock, SosError> {
    let blocks = encode_sos_blocks(prob, target, basis, false)?;
    Ok(blocks.into_iter().next().expect("one block"))
}

/// Like [`gram_encode`] but optionally splits the basis into parity classes
/// when the target family is invariant under per-variable sign flips (all
/// exponents even). Feasibility is unchanged for invariant targets: a Gram
/// matrix can always be symmetrized to be block-diagonal across classes.
pub fn encode_sos_blocks(
    prob: &mut ConicProblem,
    target: &PolyFamily,
    basis: &GramBasis,
    symmetry: bool,
) -> Result<Vec<GramBlock>, SosError> {
    let capacity = 2 * basis.half_degree;
    if target.max_degree() > capacity {
        return Err(SosError::DegreeOverflow { target: target.max_degree(), capacity });
    }
    if basis.mode == BasisMode::Homogeneous
        && !target.is_homogeneous_of(capacity)
        && !(target.base.is_zero() && target.linear.is_empty())
    {
        return Err(SosError::InhomogeneousTarget);
    }
    encode_with_multipliers(prob, target, basis, symmetry, &[])
}

/// Eigen-factorizes a PSD Gram matrix into explicit square polynomials.
/// Negative eigenvalues within `-1e-8 * (1 + ‖G‖)` are clipped to zero.
pub fn extract_squares(
    g: &SymMatrix<f64>,
    basis: &[MultiIndex],
) -> Result<Vec<Polynomial<f64>>, SosError> {
    assert_eq!(g.n(), basis.len());
    let norm = g.max_abs_f64();
    let eig = g.to_nalgebra().symmetric_eigen();
    let tol = 1e-8 * (1.0 + norm);
    let mut out = Vec::new();
    let nvars = basis.first().map_or(0, |m| m.len());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -tol {
            return Err(SosError::Indefinite(lambda));
        }
        if lambda <= 0.0 {
            continue;
        }
        let w = lambda.sqrt();
        let mut q = Polynomial::zero(nvars);
        for (b, mono) in basis.iter().enumerate() {
            let coef = w * eig.eigenvectors[(b, k)];
            if coef != 0.0 {
                q.add_term(mono.clone(), coef);
            }
        }
        if !q.is_zero() {
            out.push(q);
        }
    }
    Ok(out)
}

/// Options for [`solve_sos_bound`].
pub struct BoundOptions<'a> {
    pub normalizer: Normalizer,
    /// Parity-class splitting of the Gram bases where sound.
    pub symmetry: bool,
    /// Box-prune the base Gram basis to the target support.
    pub prune: bool,
    pub backend: &'a dyn ConicBackend,
}

/// One subset of an algebraic disjunction: the constraint polynomials and a
/// descriptor recording where they came from.
#[derive(Debug, Clone)]
pub struct RegionSpec {
    pub polys: Vec<Polynomial<f64>>,
    pub descriptor: RegionDesc<f64>,
}

impl RegionSpec {
    pub fn from_polys(polys: Vec<Polynomial<f64>>) -> Self {
        RegionSpec { descriptor: RegionDesc::Inequalities(polys.clone()), polys }
    }
}

#[derive(Debug)]
pub struct SosBoundResult {
    /// min over regions of the per-region optimal γ; `-inf` when some region
    /// is infeasible.
    pub gamma: f64,
    pub per_region: Vec<(f64, SolveStatus)>,
    pub certificate: Option<SosCertificate<f64>>,
}

/// Maximizes γ such that `p − γ·N − Σ_j s_{k,j} q_{k,j}` is sos in every
/// region `k`, each region solved as an independent SDP.
pub fn solve_sos_bound(
    p: &Polynomial<f64>,
    regions: &[RegionSpec],
    dbar: u32,
    opts: &BoundOptions,
) -> Result<SosBoundResult, SosError> {
    let regions_owned: Vec<RegionSpec> = if regions.is_empty() {
        vec![RegionSpec { polys: Vec::new(), descriptor: RegionDesc::WholeSpace }]
    } else {
        regions.to_vec()
    };

    let solved: Result<Vec<RegionSolve>, SosError> = regions_owned
        .par_iter()
        .map(|region| solve_region(p, region, dbar, opts))
        .collect();
    let solved = solved?;

    let mut gamma = f64::INFINITY;
    let mut per_region = Vec::new();
    let mut all_ok = true;
    for s in &solved {
        per_region.push((s.gamma, s.status));
        if s.status != SolveStatus::Optimal {
            all_ok = false;
        }
        gamma = gamma.min(s.gamma);
    }
    if !all_ok {
        return Ok(SosBoundResult { gamma: f64::NEG_INFINITY, per_region, certificate: None });
    }

    // Assemble the joint certificate at the common bound: regions solved at a
    // larger γ_k re-admit γ by absorbing (γ_k − γ)·N into the base Gram.
    let nvars = p.nvars();
    let mut cert_regions = Vec::new();
    for s in solved {
        let mut base_parts = s.base_parts;
        let excess = s.gamma - gamma;
        if excess > 0.0 {
            absorb_normalizer(&mut base_parts, &opts.normalizer, excess);
        }
        cert_regions.push(CertRegion {
            descriptor: s.descriptor,
            multipliers: s.multipliers,
            base: base_parts,
        });
    }
    let cert = SosCertificate {
        nvars,
        bound: gamma,
        normalizer: opts.normalizer.clone(),
        regions: cert_regions,
        solver_status: "optimal".to_string(),
        residual: None,
    };
    Ok(SosBoundResult { gamma, per_region, certificate: Some(cert) })
}

struct RegionSolve {
    gamma: f64,
    status: SolveStatus,
    descriptor: RegionDesc<f64>,
    multipliers: Vec<(Polynomial<f64>, SosPart<f64>)>,
    base_parts: Vec<SosPart<f64>>,
}

fn solve_region(
    p: &Polynomial<f64>,
    region: &RegionSpec,
    dbar: u32,
    opts: &BoundOptions,
) -> Result<RegionSolve, SosError> {
    let nvars = p.nvars();
    let homogeneous = matches!(opts.normalizer, Normalizer::SphereNorm { .. });
    let normalizer_poly: Polynomial<f64> = opts.normalizer.polynomial(nvars);

    let mut prob = ConicProblem::new();
    let gamma_var = prob.add_free_var();

    // target = p - γ·N, to be matched by base sos + Σ_j s_j·q_j
    let family = PolyFamily {
        base: p.clone(),
        linear: vec![(gamma_var, normalizer_poly.neg())],
    };

    // multiplier blocks
    let mut mult_blocks: Vec<(Polynomial<f64>, Vec<GramBlock>)> = Vec::new();
    for q in &region.polys {
        let dq = q.degree();
        if dq > dbar {
            return Err(SosError::RegionDegreeOverflow { q: dq, dbar });
        }
        let mult_basis = if homogeneous {
            if (dbar - dq) % 2 != 0 {
                return Err(SosError::InhomogeneousTarget);
            }
            GramBasis::homogeneous(nvars, (dbar - dq) / 2)
        } else {
            GramBasis::affine(nvars, (dbar - dq) / 2)
        };
        let block = GramBlock {
            psd_block: prob.add_psd_block(mult_basis.len()),
            monomials: mult_basis.monomials,
        };
        mult_blocks.push((q.clone(), vec![block]));
    }

    // base sos block(s)
    let mut base_basis = if homogeneous {
        GramBasis::homogeneous(nvars, dbar / 2)
    } else {
        GramBasis::affine(nvars, dbar / 2)
    };
    if opts.prune && region.polys.is_empty() {
        let support: Vec<MultiIndex> = family.support();
        base_basis = base_basis.pruned_to_support(support.iter());
    }
    let symmetry = opts.symmetry && region.polys.is_empty();
    let base_blocks =
        encode_with_multipliers(&mut prob, &family, &base_basis, symmetry, &mult_blocks)?;

    prob.set_objective(vec![(VarRef::Free(gamma_var), 1.0)], true);
    let sol = opts.backend.solve(&prob)?;

    match sol.status {
        SolveStatus::Optimal => {}
        status => {
            return Ok(RegionSolve {
                gamma: f64::NEG_INFINITY,
                status,
                descriptor: region.descriptor.clone(),
                multipliers: Vec::new(),
                base_parts: Vec::new(),
            })
        }
    }

    let gamma = sol.free_values[gamma_var];
    let multipliers = mult_blocks
        .into_iter()
        .map(|(q, blocks)| {
            let b = &blocks[0];
            let part = SosPart::Gram {
                basis: b.monomials.iter().map(|m| Polynomial::monomial(m.clone(), 1.0)).collect(),
                matrix: sol.psd_values[b.psd_block].clone(),
            };
            (q, part)
        })
        .collect();
    let base_parts = base_blocks
        .iter()
        .map(|b| SosPart::Gram {
            basis: b.monomials.iter().map(|m| Polynomial::monomial(m.clone(), 1.0)).collect(),
            matrix: sol.psd_values[b.psd_block].clone(),
        })
        .collect();

    Ok(RegionSolve {
        gamma,
        status: SolveStatus::Optimal,
        descriptor: region.descriptor.clone(),
        multipliers,
        base_parts,
    })
}

/// Writes the combined coefficient rows for
/// `z_0^T G z_0 + Σ_j (z_j^T S_j z_j)·q_j = base + Σ_v free_v·poly_v`.
fn encode_with_multipliers(
    prob: &mut ConicProblem,
    family: &PolyFamily,
    base_basis: &GramBasis,
    symmetry: bool,
    mult_blocks: &[(Polynomial<f64>, Vec<GramBlock>)],
) -> Result<Vec<GramBlock>, SosError> {
    let classes: Vec<Vec<MultiIndex>> = if symmetry && family.is_all_even() {
        let mut by_parity: BTreeMap<u64, Vec<MultiIndex>> = BTreeMap::new();
        for m in &base_basis.monomials {
            by_parity.entry(m.parity()).or_default().push(m.clone());
        }
        by_parity.into_values().collect()
    } else {
        vec![base_basis.monomials.clone()]
    };
    let base_blocks: Vec<GramBlock> = classes
        .into_iter()
        .map(|monomials| GramBlock { psd_block: prob.add_psd_block(monomials.len()), monomials })
        .collect();

    let mut rows: BTreeMap<MultiIndex, Vec<(VarRef, f64)>> = BTreeMap::new();
    for b in &base_blocks {
        for i in 0..b.monomials.len() {
            for j in i..b.monomials.len() {
                let mono = b.monomials[i].add(&b.monomials[j]);
                let mult = if i == j { 1.0 } else { 2.0 };
                rows.entry(mono)
                    .or_default()
                    .push((VarRef::Psd { block: b.psd_block, row: i, col: j }, mult));
            }
        }
    }
    // multiplier contributions: entry (i,j) of S scales q·x^{β_i+β_j}
    for (q, blocks) in mult_blocks {
        for b in blocks {
            for i in 0..b.monomials.len() {
                for j in i..b.monomials.len() {
                    let mono = b.monomials[i].add(&b.monomials[j]);
                    let mult = if i == j { 1.0 } else { 2.0 };
                    for (qm, qc) in q.terms() {
                        rows.entry(mono.add(qm)).or_default().push((
                            VarRef::Psd { block: b.psd_block, row: i, col: j },
                            mult * qc.to_f64(),
                        ));
                    }
                }
            }
        }
    }
    for m in family.support() {
        rows.entry(m).or_default();
    }

    for (mono, mut terms) in rows {
        let rhs = family.base.coefficient(&mono).to_f64();
        for (v, p) in &family.linear {
            let c = p.coefficient(&mono);
            if c != 0.0 {
                terms.push((VarRef::Free(*v), -c));
            }
        }
        prob.add_equality(terms, rhs);
    }
    Ok(base_blocks)
}

fn absorb_normalizer(base_parts: &mut [SosPart<f64>], normalizer: &Normalizer, excess: f64) {
    match normalizer {
        Normalizer::One => {
            for part in base_parts.iter_mut() {
                if let SosPart::Gram { basis, matrix } = part {
                    if let Some(pos) = basis.iter().position(|b| b.degree() == 0 && !b.is_zero()) {
                        let v = matrix.get(pos, pos) + excess;
                        matrix.set(pos, pos, v);
                        return;
                    }
                }
            }
        }
        Normalizer::SphereNorm { degree } => {
            // ‖x‖^d = Σ_{|β|=d/2} multinomial(d/2; β)·(x^β)²
            let half = degree / 2;
            for part in base_parts.iter_mut() {
                if let SosPart::Gram { basis, matrix } = part {
                    for (pos, b) in basis.iter().enumerate() {
                        if b.num_terms() != 1 {
                            continue;
                        }
                        let (mono, coef) = b.terms().next().unwrap();
                        if *coef == 1.0 && mono.total() == half {
                            let w = multinomial_f64(half, &mono.0);
                            let v = matrix.get(pos, pos) + excess * w;
                            matrix.set(pos, pos, v);
                        }
                    }
                }
            }
        }
    }
}

pub(crate) fn multinomial_f64(total: u32, parts: &[u32]) -> f64 {
    debug_assert_eq!(parts.iter().sum::<u32>(), total);
    let mut num = 1.0f64;
    let mut k = 0u32;
    for &p in parts {
        for i in 1..=p {
            k += 1;
            num *= k as f64 / i as f64;
        }
    }
    num.round()
}

/// Feasibility: is `p` a sum of squares over the given basis?
pub fn sos_feasibility(
    p: &Polynomial<f64>,
    basis: &GramBasis,
    backend: &dyn ConicBackend,
) -> Result<(SolveStatus, Option<SymMatrix<f64>>), SosError> {
    let mut prob = ConicProblem::new();
    let block = gram_encode(&mut prob, &PolyFamily::fixed(p.clone()), basis)?;
    let sol = backend.solve(&prob)?;
    let g = if sol.status == SolveStatus::Optimal {
        Some(sol.psd_values[block.psd_block].clone())
    } else {
        None
    };
    Ok((sol.status, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::solver_clarabel::ClarabelBackend;

    fn backend() -> ClarabelBackend {
        ClarabelBackend::default()
    }

    #[test]
    fn sum_of_two_squares_is_feasible() {
        let p = parse_polynomial::<f64>("x1^2 + x2^2", Some(2)).unwrap();
        let basis = GramBasis::homogeneous(2, 1);
        let (status, g) = sos_feasibility(&p, &basis, &backend()).unwrap();
        assert_eq!(status, SolveStatus::Optimal);
        let g = g.unwrap();
        assert!((g.get(0, 0) - 1.0).abs() < 1e-6);
        assert!((g.get(1, 1) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_cross_term_is_infeasible() {
        let p = parse_polynomial::<f64>("x1*x2", Some(2)).unwrap();
        let basis = GramBasis::homogeneous(2, 1);
        let (status, _) = sos_feasibility(&p, &basis, &backend()).unwrap();
        assert_eq!(status, SolveStatus::Infeasible);
    }

    #[test]
    fn motzkin_form_is_not_sos() {
        let mh = parse_polynomial::<f64>("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2*x3^2 + x3^6", Some(3))
            .unwrap();
        let basis = GramBasis::homogeneous(3, 3);
        assert_eq!(basis.len(), 10);
        let (status, _) = sos_feasibility(&mh, &basis, &backend()).unwrap();
        assert_eq!(status, SolveStatus::Infeasible);
    }

    #[test]
    fn quadratic_bound_matches_min_eigenvalue() {
        // p = x^T diag(2, 5) x over ‖x‖² normalizer: bound = 2
        let p = parse_polynomial::<f64>("2*x1^2 + 5*x2^2", Some(2)).unwrap();
        let b = backend();
        let opts = BoundOptions {
            normalizer: Normalizer::SphereNorm { degree: 2 },
            symmetry: false,
            prune: false,
            backend: &b,
        };
        let res = solve_sos_bound(&p, &[], 2, &opts).unwrap();
        assert!((res.gamma - 2.0).abs() < 1e-6);
        let cert = res.certificate.unwrap();
        let report = verify_certificate(&p, &cert);
        assert!(report.residual_f64() < 1e-7);
        assert!(report.psd_ok);
    }

    #[test]
    fn motzkin_bound_with_sign_disjunction() {
        // M is nonnegative; with regions {x1x2 >= 0} and {-x1x2 >= 0} at
        // degree budget 6 the bound reaches 0
        let m = parse_polynomial::<f64>("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", Some(2)).unwrap();
        let h = parse_polynomial::<f64>("x1*x2", Some(2)).unwrap();
        let b = backend();
        let opts = BoundOptions {
            normalizer: Normalizer::One,
            symmetry: false,
            prune: false,
            backend: &b,
        };
        let regions = vec![
            RegionSpec::from_polys(vec![h.clone()]),
            RegionSpec::from_polys(vec![h.neg()]),
        ];
        let res = solve_sos_bound(&m, &regions, 6, &opts).unwrap();
        assert!(res.gamma >= -1e-6, "gamma = {}", res.gamma);
        assert!(res.gamma <= 1e-5);
        let cert = res.certificate.unwrap();
        let report = verify_certificate(&m, &cert);
        assert!(report.residual_f64() < 1e-6);
        assert!(report.psd_ok);
    }

    #[test]
    fn plain_sos_polynomial_has_nonnegative_bound() {
        let p = parse_polynomial::<f64>("(x1 - x2)^2 + 1", Some(2)).unwrap();
        let b = backend();
        let opts = BoundOptions {
            normalizer: Normalizer::One,
            symmetry: false,
            prune: false,
            backend: &b,
        };
        let res = solve_sos_bound(&p, &[], 2, &opts).unwrap();
        assert!(res.gamma >= -1e-8);
    }

    #[test]
    fn extract_squares_identity_gram() {
        let basis = monomials_exact_degree(2, 1);
        let g = SymMatrix::<f64>::identity(2);
        let sq = extract_squares(&g, &basis).unwrap();
        assert_eq!(sq.len(), 2);
        // rank-1 case
        let mut g1 = SymMatrix::<f64>::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                g1.set(i, j, 1.0);
            }
        }
        let sq1 = extract_squares(&g1, &basis).unwrap();
        assert_eq!(sq1.len(), 1);
        let expect = parse_polynomial::<f64>("x1^2 + 2*x1*x2 + x2^2", Some(2)).unwrap();
        let expanded = sq1[0].mul(&sq1[0]);
        let diff = expanded.sub(&expect);
        assert!(diff.max_abs_coeff_f64() < 1e-9);
    }

    #[test]
    fn extract_squares_rejects_indefinite() {
        let basis = monomials_exact_degree(2, 1);
        let mut g = SymMatrix::<f64>::zeros(2);
        g.set(0, 0, 1.0);
        g.set(1, 1, -1.0);
        assert!(extract_squares(&g, &basis).is_err());
    }

    #[test]
    fn parity_symmetry_preserves_feasibility() {
        // (x1^2+x2^2)^2 is sos; its parity-blocked encoding must stay feasible
        let p = parse_polynomial::<f64>("(x1^2 + x2^2)^2", Some(2)).unwrap();
        let b = backend();
        let opts = BoundOptions {
            normalizer: Normalizer::SphereNorm { degree: 4 },
            symmetry: true,
            prune: true,
            backend: &b,
        };
        let res = solve_sos_bound(&p, &[], 4, &opts).unwrap();
        assert!((res.gamma - 1.0).abs() < 1e-6);
        let report = verify_certificate(&p, &res.certificate.unwrap());
        assert!(report.residual_f64() < 1e-7);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial_f64(3, &[1, 1, 1]), 6.0);
        assert_eq!(multinomial_f64(4, &[2, 2]), 6.0);
        assert_eq!(multinomial_f64(5, &[5]), 1.0);
    }
}
