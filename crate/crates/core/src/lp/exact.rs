//! Exact rational simplex (Bland's rule throughout).
//!
//! Slow but free of rounding; inputs are converted exactly from their
//! binary floating-point values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LinearProgram, LpError, LpSolution, LpStatus, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_vars: usize,
    pub max_rows: usize,
    pub max_iterations: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_vars: 2000, max_rows: 1000, max_iterations: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub status: LpStatus,
    pub x: Vec<BigRational>,
    pub objective: BigRational,
    /// Same sign convention as the floating-point solver.
    pub duals: Vec<BigRational>,
    pub iterations: usize,
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl ExactSolution {
    pub fn objective_f64(&self) -> f64 {
        to_f64(&self.objective)
    }

    pub fn to_solution(&self, lp: &LinearProgram) -> LpSolution {
        if self.status != LpStatus::Optimal {
            return LpSolution::non_optimal(self.status, lp, self.iterations);
        }
        let x: Vec<f64> = self.x.iter().map(to_f64).collect();
        let duals: Vec<f64> = self.duals.iter().map(to_f64).collect();
        let certificate = Some(lp.certificate(&x, &duals));
        LpSolution { status: self.status, objective: self.objective_f64(), x, duals, iterations: self.iterations, certificate }
    }
}

fn rational(v: f64) -> Result<BigRational, LpError> {
    BigRational::from_float(v).ok_or_else(|| LpError::Malformed(format!("cannot represent {v} exactly")))
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    reduced: Vec<BigRational>,
    iterations: usize,
}

impl Tableau {
    fn set_costs(&mut self, costs: &[BigRational]) {
        let mut d = costs.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    d[j] -= cb * a;
                }
            }
        }
        self.reduced = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q].clone();
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        for &j in &nz {
            self.rows[r][j] /= &p;
        }
        self.rhs[r] /= &p;
        let prow: Vec<(usize, BigRational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            for (j, a) in &prow {
                let delta = &f * a;
                self.rows[i][*j] -= delta;
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.reduced[q].clone();
        if !f.is_zero() {
            for (j, a) in &prow {
                let delta = &f * a;
                self.reduced[*j] -= delta;
            }
        }
        self.basis[r] = q;
        self.iterations += 1;
    }

    /// Returns `false` when the phase is unbounded.
    fn run(&mut self, allowed: &[bool], limit: usize) -> Result<bool, LpError> {
        loop {
            if self.iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            let Some(q) = (0..self.reduced.len()).find(|&j| allowed[j] && self.reduced[j].is_positive()) else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(r, q);
        }
    }
}

/// Solve `lp` exactly. Fails with [`LpError::SizeLimit`] above `limits`.
pub fn solve_exact(lp: &LinearProgram, limits: &ExactLimits) -> Result<ExactSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_rows();
    if n > limits.max_vars || m > limits.max_rows {
        return Err(LpError::SizeLimit { vars: n, rows: m, max_vars: limits.max_vars, max_rows: limits.max_rows });
    }
    let zero = BigRational::zero;
    let mut sign = vec![1i32; m];
    let mut rel = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let flip = row.rhs < 0.0;
        if flip {
            sign[i] = -1;
        }
        rel.push(match (row.relation, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        });
    }
    let surplus_rows: Vec<usize> = (0..m).filter(|&i| rel[i] == Relation::Ge).collect();
    let cols = n + m + surplus_rows.len();
    let mut artificial = vec![false; cols];
    for i in 0..m {
        artificial[n + i] = rel[i] != Relation::Le;
    }
    let mut rows = vec![vec![zero(); cols]; m];
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let s = BigRational::from_integer(BigInt::from(sign[i]));
        for &(j, a) in &row.coeffs {
            rows[i][j] += &s * rational(a)?;
        }
        rows[i][n + i] = BigRational::one();
        rhs.push(&s * rational(row.rhs)?);
    }
    for (k, &i) in surplus_rows.iter().enumerate() {
        rows[i][n + m + k] = -BigRational::one();
    }
    let mut tab = Tableau { rows, rhs, basis: (n..n + m).collect(), reduced: vec![], iterations: 0 };

    let fail = |status, tab: &Tableau| ExactSolution {
        status,
        x: vec![zero(); n],
        objective: zero(),
        duals: vec![zero(); m],
        iterations: tab.iterations,
    };

    if artificial.iter().any(|&a| a) {
        let costs: Vec<BigRational> =
            artificial.iter().map(|&a| if a { -BigRational::one() } else { zero() }).collect();
        tab.set_costs(&costs);
        tab.run(&vec![true; cols], limits.max_iterations)?;
        if (0..m).any(|i| artificial[tab.basis[i]] && !tab.rhs[i].is_zero()) {
            return Ok(fail(LpStatus::Infeasible, &tab));
        }
        for i in 0..m {
            if !artificial[tab.basis[i]] {
                continue;
            }
            if let Some(j) = (0..cols).find(|&j| !artificial[j] && !tab.rows[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }

    let mut costs = vec![zero(); cols];
    for (j, &c) in lp.objective.iter().enumerate() {
        costs[j] = rational(c)?;
    }
    tab.set_costs(&costs);
    let allowed: Vec<bool> = artificial.iter().map(|&a| !a).collect();
    if !tab.run(&allowed, limits.max_iterations)? {
        return Ok(fail(LpStatus::Unbounded, &tab));
    }
    let mut x = vec![zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs[i].clone();
        }
    }
    let objective = x.iter().zip(&costs).fold(zero(), |acc, (v, c)| acc + v * c);
    let duals = (0..m)
        .map(|i| BigRational::from_integer(BigInt::from(sign[i])) * &tab.reduced[n + i])
        .collect();
    Ok(ExactSolution { status: LpStatus::Optimal, x, objective, duals, iterations: tab.iterations })
}
