//! Linear programs in maximization form with non-negative variables.
//!
//! Two solvers are provided: a floating-point two-phase primal simplex
//! ([`solve`]) and an exact rational simplex ([`solve_exact`]) meant as a
//! reference on small problems.
//!
//! Dual values follow the Lagrangian sign convention for maximization:
//! `<=` rows have non-positive duals, `>=` rows non-negative ones, and the
//! reduced costs `c + A^T y` are non-positive at an optimum. The dual
//! objective is `-b^T y`.

mod exact;
mod lpformat;
mod simplex;

pub use exact::{solve_exact, ExactLimits, ExactSolution};
pub use lpformat::{parse_lp, write_lp, ParsedLp};
pub use simplex::solve;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("simplex iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error("problem too large for exact solve: {vars} variables, {rows} rows (limits {max_vars}, {max_rows})")]
    SizeLimit { vars: usize, rows: usize, max_vars: usize, max_rows: usize },
    #[error("LP file parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `max c^T x` subject to sparse rows and `x >= 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, objective: f64) -> usize {
        self.var_names.push(name.into());
        self.objective.push(objective);
        self.objective.len() - 1
    }

    /// Append a row; zero coefficients are dropped and repeated variables
    /// are summed.
    pub fn add_row(&mut self, name: impl Into<String>, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|&(j, _)| j);
        for (j, a) in sorted {
            match merged.last_mut() {
                Some((k, v)) if *k == j => *v += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.rows.push(Row { name: name.into(), coeffs: merged, relation, rhs });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.var_names.len() != self.objective.len() {
            return Err(LpError::Malformed("variable names and objective differ in length".into()));
        }
        if let Some(j) = self.objective.iter().position(|c| !c.is_finite()) {
            return Err(LpError::Malformed(format!("non-finite objective coefficient on `{}`", self.var_names[j])));
        }
        for row in &self.rows {
            if !row.rhs.is_finite() {
                return Err(LpError::Malformed(format!("non-finite right-hand side in row `{}`", row.name)));
            }
            for &(j, a) in &row.coeffs {
                if j >= self.num_vars() {
                    return Err(LpError::Malformed(format!("row `{}` references variable {j}", row.name)));
                }
                if !a.is_finite() {
                    return Err(LpError::Malformed(format!("non-finite coefficient in row `{}`", row.name)));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Residuals of a primal/dual pair (see the module docs for signs).
    pub fn certificate(&self, x: &[f64], y: &[f64]) -> Certificate {
        let mut primal: f64 = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        let mut dual: f64 = 0.0;
        let mut comp: f64 = 0.0;
        let mut reduced = self.objective.clone();
        let mut dual_obj = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let act = self.row_activity(i, x);
            let slack = row.rhs - act;
            let viol = match row.relation {
                Relation::Le => (-slack).max(0.0),
                Relation::Ge => slack.max(0.0),
                Relation::Eq => slack.abs(),
            };
            primal = primal.max(viol);
            let sign_viol = match row.relation {
                Relation::Le => y[i].max(0.0),
                Relation::Ge => (-y[i]).max(0.0),
                Relation::Eq => 0.0,
            };
            dual = dual.max(sign_viol);
            if row.relation != Relation::Eq {
                comp = comp.max((y[i] * slack).abs());
            }
            for &(j, a) in &row.coeffs {
                reduced[j] += a * y[i];
            }
            dual_obj -= row.rhs * y[i];
        }
        for (j, &d) in reduced.iter().enumerate() {
            dual = dual.max(d.max(0.0));
            comp = comp.max((d * x[j]).abs());
        }
        let primal_obj = self.objective_value(x);
        Certificate {
            primal_objective: primal_obj,
            dual_objective: dual_obj,
            primal_residual: primal,
            dual_residual: dual,
            gap: (primal_obj - dual_obj).abs(),
            complementarity: comp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub complementarity: f64,
}

impl Certificate {
    /// All residuals within `tol * (1 + |objective|)`.
    pub fn passes(&self, tol: f64) -> bool {
        let bound = tol * (1.0 + self.primal_objective.abs());
        self.worst() <= bound
    }

    pub fn worst(&self) -> f64 {
        self.primal_residual.max(self.dual_residual).max(self.gap).max(self.complementarity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// Present for optimal solutions.
    pub certificate: Option<Certificate>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub(crate) fn non_optimal(status: LpStatus, lp: &LinearProgram, iterations: usize) -> Self {
        LpSolution {
            status,
            x: vec![0.0; lp.num_vars()],
            objective: f64::NAN,
            duals: vec![0.0; lp.num_rows()],
            iterations,
            certificate: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Phase-one infeasibility threshold, relative to `1 + max |b|`.
    pub feasibility: f64,
    /// Reduced-cost threshold for optimality.
    pub optimality: f64,
    /// Smallest acceptable pivot magnitude.
    pub pivot: f64,
    /// Certification bound, relative to `1 + |objective|`.
    pub certify: f64,
    pub max_iterations: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degeneracy_window: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            feasibility: 1e-9,
            optimality: 1e-10,
            pivot: 1e-10,
            certify: 1e-8,
            max_iterations: 1_000_000,
            degeneracy_window: 50,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_row_merges_and_drops_zeros() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        let y = lp.add_var("y", 1.0);
        lp.add_row("r", vec![(y, 1.0), (x, 2.0), (y, -1.0), (x, 0.5)], Relation::Le, 3.0);
        assert_eq!(lp.rows[0].coeffs, vec![(x, 2.5)]);
    }

    #[test]
    fn validate_rejects_bad_index() {
        let mut lp = LinearProgram::new();
        lp.add_var("x", 1.0);
        lp.rows.push(Row { name: "r".into(), coeffs: vec![(3, 1.0)], relation: Relation::Le, rhs: 1.0 });
        assert!(lp.validate().is_err());
    }

    #[test]
    fn certificate_of_known_pair() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        lp.add_row("cap", vec![(x, 1.0)], Relation::Le, 5.0);
        let c = lp.certificate(&[5.0], &[-1.0]);
        assert_eq!(c.gap, 0.0);
        assert!(c.passes(1e-12));
        let bad = lp.certificate(&[5.0], &[1.0]);
        assert!(!bad.passes(1e-6));
    }
}
