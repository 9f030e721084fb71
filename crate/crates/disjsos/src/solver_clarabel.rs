//! Clarabel interior-point backend for [`ConicProblem`].
//!
//! Decision vector layout: `[free scalars | nonneg entries | svec(PSD blocks)]`,
//! where svec stacks the upper triangle column-major with off-diagonal
//! entries scaled by sqrt(2). Conic membership is imposed through identity
//! rows (`-x + s = 0`) on the matching slack cones.

use crate::conic::{ConicBackend, ConicProblem, ConicSolution, SolveStatus, SolverError, VarRef};
use crate::symmat::SymMatrix;
use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

pub struct ClarabelBackend {
    pub eps: f64,
    pub max_iter: u32,
}

impl Default for ClarabelBackend {
    fn default() -> Self {
        ClarabelBackend { eps: 1e-8, max_iter: 200 }
    }
}

impl ClarabelBackend {
    pub fn with_eps(eps: f64) -> Self {
        ClarabelBackend { eps, ..Default::default() }
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

struct Layout {
    free_off: usize,
    nonneg_off: Vec<usize>,
    psd_off: Vec<usize>,
    nvar: usize,
}

impl Layout {
    fn new(p: &ConicProblem) -> Self {
        let free_off = 0;
        let mut cursor = p.num_free;
        let mut nonneg_off = Vec::with_capacity(p.nonneg_blocks.len());
        for &sz in &p.nonneg_blocks {
            nonneg_off.push(cursor);
            cursor += sz;
        }
        let mut psd_off = Vec::with_capacity(p.psd_blocks.len());
        for &k in &p.psd_blocks {
            psd_off.push(cursor);
            cursor += k * (k + 1) / 2;
        }
        Layout { free_off, nonneg_off, psd_off, nvar: cursor }
    }

    /// (column index, multiplier applied to the natural-coordinate coefficient)
    fn column(&self, v: VarRef) -> (usize, f64) {
        match v {
            VarRef::Free(i) => (self.free_off + i, 1.0),
            VarRef::Nonneg { block, idx } => (self.nonneg_off[block] + idx, 1.0),
            VarRef::Psd { block, row, col } => {
                let (i, j) = if row <= col { (row, col) } else { (col, row) };
                // svec index for column-major upper triangle: j*(j+1)/2 + i
                let idx = j * (j + 1) / 2 + i;
                let scale = if i == j { 1.0 } else { 1.0 / SQRT2 };
                (self.psd_off[block] + idx, scale)
            }
        }
    }
}

impl ConicBackend for ClarabelBackend {
    fn name(&self) -> &'static str {
        "clarabel"
    }

    fn solve(&self, problem: &ConicProblem) -> Result<ConicSolution, SolverError> {
        let layout = Layout::new(problem);
        let n = layout.nvar;

        let mut rows: Vec<(usize, usize, f64)> = Vec::new();
        let mut b: Vec<f64> = Vec::new();
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        let mut m = 0usize;

        // equality rows -> Zero cone
        if !problem.equalities.is_empty() {
            for row in &problem.equalities {
                let mut acc: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
                for &(v, c) in &row.terms {
                    let (col, scale) = layout.column(v);
                    *acc.entry(col).or_insert(0.0) += c * scale;
                }
                for (col, coef) in acc {
                    if coef != 0.0 {
                        rows.push((m, col, coef));
                    }
                }
                b.push(row.rhs);
                m += 1;
            }
            cones.push(SupportedConeT::ZeroConeT(problem.equalities.len()));
        }

        // nonneg membership: -x + s = 0, s >= 0
        let total_nn: usize = problem.nonneg_blocks.iter().sum();
        if total_nn > 0 {
            for (bi, &sz) in problem.nonneg_blocks.iter().enumerate() {
                for k in 0..sz {
                    rows.push((m, layout.nonneg_off[bi] + k, -1.0));
                    b.push(0.0);
                    m += 1;
                }
            }
            cones.push(SupportedConeT::NonnegativeConeT(total_nn));
        }

        // psd membership per block: -x + s = 0, s in PSD triangle
        for (bi, &k) in problem.psd_blocks.iter().enumerate() {
            let sv = k * (k + 1) / 2;
            for t in 0..sv {
                rows.push((m, layout.psd_off[bi] + t, -1.0));
                b.push(0.0);
                m += 1;
            }
            cones.push(SupportedConeT::PSDTriangleConeT(k));
        }

        let a = csc_from_triplets(m, n, &rows);
        let p_mat = CscMatrix::zeros((n, n));
        let mut q = vec![0.0; n];
        let sign = if problem.maximize { -1.0 } else { 1.0 };
        for &(v, c) in &problem.objective {
            let (col, scale) = layout.column(v);
            q[col] += sign * c * scale;
        }

        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(self.max_iter)
            .tol_gap_abs(self.eps)
            .tol_gap_rel(self.eps)
            .tol_feas(self.eps)
            .build()
            .map_err(|e| SolverError::Setup(format!("{e:?}")))?;

        let mut solver = DefaultSolver::new(&p_mat, &q, &a, &b, &cones, settings)
            .map_err(|e| SolverError::Setup(format!("{e:?}")))?;
        solver.solve();

        let status = match solver.solution.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => SolveStatus::Optimal,
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                SolveStatus::Infeasible
            }
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
                SolveStatus::Unbounded
            }
            _ => SolveStatus::NumericalFailure,
        };

        let x = &solver.solution.x;
        let free_values = (0..problem.num_free).map(|i| x[layout.free_off + i]).collect();
        let nonneg_values = problem
            .nonneg_blocks
            .iter()
            .enumerate()
            .map(|(bi, &sz)| (0..sz).map(|k| x[layout.nonneg_off[bi] + k]).collect())
            .collect();
        let psd_values: Vec<SymMatrix<f64>> = problem
            .psd_blocks
            .iter()
            .enumerate()
            .map(|(bi, &k)| {
                SymMatrix::from_fn(k, |i, j| {
                    let (i, j) = if i <= j { (i, j) } else { (j, i) };
                    let idx = j * (j + 1) / 2 + i;
                    let v = x[layout.psd_off[bi] + idx];
                    if i == j {
                        v
                    } else {
                        v / SQRT2
                    }
                })
            })
            .collect();

        let objective = if problem.maximize {
            -solver.solution.obj_val
        } else {
            solver.solution.obj_val
        };

        let mut sol = ConicSolution {
            status,
            objective,
            psd_values,
            nonneg_values,
            free_values,
            primal_residual: 0.0,
            gap: solver.info.gap_abs.abs(),
        };
        sol.primal_residual = crate::conic::equality_residual(problem, &sol);
        Ok(sol)
    }
}

fn csc_from_triplets(m: usize, n: usize, triplets: &[(usize, usize, f64)]) -> CscMatrix<f64> {
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(r, c, v) in triplets {
        by_col[c].push((r, v));
    }
    let mut colptr = Vec::with_capacity(n + 1);
    let mut rowval = Vec::with_capacity(triplets.len());
    let mut nzval = Vec::with_capacity(triplets.len());
    colptr.push(0);
    for col in by_col.iter_mut() {
        col.sort_by_key(|e| e.0);
        for &(r, v) in col.iter() {
            rowval.push(r);
            nzval.push(v);
        }
        colptr.push(rowval.len());
    }
    CscMatrix::new(m, n, colptr, rowval, nzval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::{ConicProblem, SolveStatus, VarRef};

    #[test]
    fn max_offdiag_of_unit_diagonal_psd() {
        // max X12 s.t. X psd 2x2, X11 = X22 = 1  ->  X12 = 1
        let mut p = ConicProblem::new();
        let b = p.add_psd_block(2);
        p.add_equality(vec![(VarRef::Psd { block: b, row: 0, col: 0 }, 1.0)], 1.0);
        p.add_equality(vec![(VarRef::Psd { block: b, row: 1, col: 1 }, 1.0)], 1.0);
        p.set_objective(vec![(VarRef::Psd { block: b, row: 0, col: 1 }, 1.0)], true);
        let sol = ClarabelBackend::default().solve(&p).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-6);
        assert!((sol.psd_values[0].get(0, 1) - 1.0).abs() < 1e-6);
        assert!(sol.primal_residual < 1e-7);
    }

    #[test]
    fn detects_infeasibility() {
        // X psd 1x1 with X11 = -1
        let mut p = ConicProblem::new();
        let b = p.add_psd_block(1);
        p.add_equality(vec![(VarRef::Psd { block: b, row: 0, col: 0 }, 1.0)], -1.0);
        let sol = ClarabelBackend::default().solve(&p).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn mixes_nonneg_and_free() {
        // max t s.t. n0 >= 0, n0 + t = 1, n0 - t = 0  -> t = 1/2
        let mut p = ConicProblem::new();
        let nb = p.add_nonneg_block(1);
        let t = p.add_free_var();
        p.add_equality(
            vec![(VarRef::Nonneg { block: nb, idx: 0 }, 1.0), (VarRef::Free(t), 1.0)],
            1.0,
        );
        p.add_equality(
            vec![(VarRef::Nonneg { block: nb, idx: 0 }, 1.0), (VarRef::Free(t), -1.0)],
            0.0,
        );
        p.set_objective(vec![(VarRef::Free(t), 1.0)], true);
        let sol = ClarabelBackend::default().solve(&p).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 0.5).abs() < 1e-7);
        assert!((sol.free_values[t] - 0.5).abs() < 1e-7);
    }
}
