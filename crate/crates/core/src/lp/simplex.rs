//! Dense-tableau two-phase primal simplex.
//!
//! Every row owns an identity column (its slack, or its artificial for `=`
//! and `>=` rows). Artificial columns are never dropped, only barred from
//! re-entering, so the final reduced-cost row yields the row duals directly.

use super::{Certificate, LinearProgram, LpError, LpSolution, LpStatus, Relation, Tolerances};

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    // reduced costs d_j = c_j - c_B^T B^-1 A_j, one per column
    reduced: Vec<f64>,
    iterations: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.width - 1]
    }

    fn cols(&self) -> usize {
        self.width - 1
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let n = self.cols();
        let mut d = costs.to_vec();
        for i in 0..self.rows {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * self.width..i * self.width + n];
                for (dj, a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            d[b] = 0.0;
        }
        self.reduced = d;
    }

    fn pivot(&mut self, r: usize, q: usize, feas: f64) {
        let w = self.width;
        let p = self.data[r * w + q];
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = 1.0;
        }
        let nz: Vec<usize> = (0..w).filter(|&j| self.data[r * w + j] != 0.0).collect();
        let pivot_row: Vec<f64> = nz.iter().map(|&j| self.data[r * w + j]).collect();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + q];
            if f == 0.0 {
                continue;
            }
            let base = i * w;
            for (&j, &a) in nz.iter().zip(&pivot_row) {
                self.data[base + j] -= f * a;
            }
            self.data[base + q] = 0.0;
            let rhs = &mut self.data[base + w - 1];
            if *rhs < 0.0 && *rhs > -feas {
                *rhs = 0.0;
            }
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for (&j, &a) in nz.iter().zip(&pivot_row) {
                if j < w - 1 {
                    self.reduced[j] -= f * a;
                }
            }
        }
        self.reduced[q] = 0.0;
        self.basis[r] = q;
        self.iterations += 1;
    }

    fn run(&mut self, allowed: &[bool], tol: &Tolerances) -> Result<Phase, LpError> {
        let mut bland = false;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= tol.max_iterations {
                return Err(LpError::IterationLimit(tol.max_iterations));
            }
            let mut entering = None;
            let mut best = tol.optimality;
            for (j, &d) in self.reduced.iter().enumerate() {
                if !allowed[j] || d <= tol.optimality {
                    continue;
                }
                if bland {
                    entering = Some(j);
                    break;
                }
                if d > best {
                    best = d;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(Phase::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, q);
                if a <= tol.pivot {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[k]
                            } else {
                                a > self.at(k, q)
                            }
                        } else {
                            ratio < best
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leaving else {
                return Ok(Phase::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > tol.degeneracy_window {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q, tol.feasibility);
        }
    }
}

/// Solve `lp` with the two-phase primal simplex.
///
/// Dantzig pricing switches to Bland's rule once more than
/// `tol.degeneracy_window` consecutive degenerate pivots occur, which
/// guarantees termination.
pub fn solve(lp: &LinearProgram, tol: &Tolerances) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_rows();

    let mut sign = vec![1.0; m];
    let mut rel = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let flip = row.rhs < 0.0;
        if flip {
            sign[i] = -1.0;
        }
        rel.push(match (row.relation, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (r, _) => r,
        });
    }
    let surplus_rows: Vec<usize> = (0..m).filter(|&i| rel[i] == Relation::Ge).collect();
    let cols = n + m + surplus_rows.len();
    let width = cols + 1;
    let id_col = |i: usize| n + i;
    let mut artificial = vec![false; cols];
    for i in 0..m {
        artificial[id_col(i)] = rel[i] != Relation::Le;
    }

    let mut data = vec![0.0; m * width];
    for (i, row) in lp.rows.iter().enumerate() {
        let base = i * width;
        for &(j, a) in &row.coeffs {
            data[base + j] += sign[i] * a;
        }
        data[base + id_col(i)] = 1.0;
        data[base + cols] = sign[i] * row.rhs;
    }
    for (k, &i) in surplus_rows.iter().enumerate() {
        data[i * width + n + m + k] = -1.0;
    }

    let mut tab = Tableau { rows: m, width, data, basis: (0..m).map(id_col).collect(), reduced: vec![], iterations: 0 };
    let scale_b = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);

    if artificial.iter().any(|&a| a) {
        let costs: Vec<f64> = artificial.iter().map(|&a| if a { -1.0 } else { 0.0 }).collect();
        tab.set_costs(&costs);
        let all = vec![true; cols];
        tab.run(&all, tol)?;
        let infeas: f64 = (0..m).filter(|&i| artificial[tab.basis[i]]).map(|i| tab.rhs(i).abs()).sum();
        if infeas > tol.feasibility * scale_b {
            return Ok(LpSolution::non_optimal(LpStatus::Infeasible, lp, tab.iterations));
        }
        for i in 0..m {
            if !artificial[tab.basis[i]] {
                continue;
            }
            tab.data[i * width + cols] = 0.0;
            let mut best: Option<(usize, f64)> = None;
            for j in (0..cols).filter(|&j| !artificial[j]) {
                let a = tab.at(i, j).abs();
                if a > tol.pivot && best.map_or(true, |(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            if let Some((j, _)) = best {
                tab.pivot(i, j, tol.feasibility);
            }
        }
    }

    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&lp.objective);
    tab.set_costs(&costs);
    let allowed: Vec<bool> = artificial.iter().map(|&a| !a).collect();
    if let Phase::Unbounded = tab.run(&allowed, tol)? {
        return Ok(LpSolution::non_optimal(LpStatus::Unbounded, lp, tab.iterations));
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        let b = tab.basis[i];
        if b < n {
            x[b] = tab.rhs(i).max(0.0);
        }
    }
    let duals: Vec<f64> = (0..m).map(|i| sign[i] * tab.reduced[id_col(i)]).collect();
    let cert: Certificate = lp.certificate(&x, &duals);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: lp.objective_value(&x),
        x,
        duals,
        iterations: tab.iterations,
        certificate: Some(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        lp.add_row("cap", vec![(x, 1.0)], Relation::Le, 5.0);
        let s = solve(&lp, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, 5.0);
        assert_eq!(s.duals, vec![-1.0]);
        assert!(s.certificate.unwrap().passes(1e-12));
    }

    #[test]
    fn degenerate_optimum_set() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        let y = lp.add_var("y", 1.0);
        lp.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.0);
        let s = solve(&lp, &tol()).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        lp.add_row("neg", vec![(x, 1.0)], Relation::Le, -1.0);
        assert_eq!(solve(&lp, &tol()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        let y = lp.add_var("y", 0.0);
        lp.add_row("d", vec![(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
        assert_eq!(solve(&lp, &tol()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max 2x + 3y  s.t. x + y = 4, x >= 1, y <= 2
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 2.0);
        let y = lp.add_var("y", 3.0);
        lp.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 4.0);
        lp.add_row("lo", vec![(x, 1.0)], Relation::Ge, 1.0);
        lp.add_row("hi", vec![(y, 1.0)], Relation::Le, 2.0);
        let s = solve(&lp, &tol()).unwrap();
        assert!((s.objective - 10.0).abs() < 1e-12);
        let c = s.certificate.unwrap();
        assert!(c.passes(1e-10), "{c:?}");
        assert!(s.duals[2] <= 0.0 && s.duals[1] >= 0.0);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        let y = lp.add_var("y", 1.0);
        lp.add_row("a", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 2.0);
        lp.add_row("b", vec![(x, 2.0), (y, 2.0)], Relation::Eq, 4.0);
        lp.add_row("c", vec![(x, 1.0)], Relation::Le, 1.5);
        let s = solve(&lp, &tol()).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
        assert!(s.certificate.unwrap().passes(1e-10));
    }

    #[test]
    fn cycling_example_terminates() {
        // Beale's example, which cycles under textbook Dantzig pricing
        let mut lp = LinearProgram::new();
        let v: Vec<usize> = [0.75, -150.0, 0.02, -6.0].iter().enumerate().map(|(k, &c)| lp.add_var(format!("x{k}"), c)).collect();
        lp.add_row("r1", vec![(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)], Relation::Le, 0.0);
        lp.add_row("r2", vec![(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)], Relation::Le, 0.0);
        lp.add_row("r3", vec![(v[2], 1.0)], Relation::Le, 1.0);
        let t = Tolerances { degeneracy_window: 2, ..tol() };
        let s = solve(&lp, &t).unwrap();
        assert!((s.objective - 0.05).abs() < 1e-12);
        assert!(s.certificate.unwrap().passes(1e-10));
    }

    #[test]
    fn iteration_limit_is_distinct() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x", 1.0);
        let y = lp.add_var("y", 1.0);
        lp.add_row("a", vec![(x, 1.0)], Relation::Le, 1.0);
        lp.add_row("b", vec![(y, 1.0)], Relation::Le, 1.0);
        let t = Tolerances { max_iterations: 1, ..tol() };
        assert_eq!(solve(&lp, &t), Err(LpError::IterationLimit(1)));
    }

    #[test]
    fn empty_program() {
        let lp = LinearProgram::new();
        let s = solve(&lp, &tol()).unwrap();
        assert_eq!(s.objective, 0.0);
    }
}
