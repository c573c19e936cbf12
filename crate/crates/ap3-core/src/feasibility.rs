//! Exact linear feasibility over the rationals.
//!
//! Small systems of linear equalities and `>=` inequalities are decided by
//! Gaussian elimination on the equalities followed by Fourier-Motzkin
//! elimination on the remaining variables.  Fourier-Motzkin is doubly
//! exponential in the worst case, but the systems built here (one equality
//! per progression constraint, one gap inequality per adjacent pair, under a
//! dozen variables) stay tiny, and in exchange the answer is exact: no
//! floating point, no tolerance.  A feasible system yields an explicit
//! rational point, so callers can re-check the certificate independently.

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};

/// `coeffs . x = rhs` or `coeffs . x >= rhs`, depending on which list the
/// row sits in.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Row {
    fn from_int(coeffs: &[i64], rhs: i64, vars: usize) -> Row {
        assert_eq!(coeffs.len(), vars, "coefficient row has wrong length");
        Row {
            coeffs: coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect(),
            rhs: BigRational::from(BigInt::from(rhs)),
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Evaluates `rhs - sum(coeffs[v] * x[v])` over the assigned entries of
    /// `x`; unassigned variables must have zero coefficient.
    fn residual(&self, x: &[Option<BigRational>]) -> BigRational {
        let mut r = self.rhs.clone();
        for (c, xv) in self.coeffs.iter().zip(x) {
            if !c.is_zero() {
                r -= c * xv.as_ref().expect("residual over unassigned variable");
            }
        }
        r
    }
}

/// A conjunction of linear equalities and `>=` inequalities.
pub struct LinearSystem {
    vars: usize,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    /// Adds `coeffs . x = rhs`.
    pub fn push_eq(&mut self, coeffs: &[i64], rhs: i64) {
        self.equalities.push(Row::from_int(coeffs, rhs, self.vars));
    }

    /// Adds `coeffs . x >= rhs`.
    pub fn push_geq(&mut self, coeffs: &[i64], rhs: i64) {
        self.inequalities.push(Row::from_int(coeffs, rhs, self.vars));
    }

    /// Returns a satisfying rational point, or `None` if the system is
    /// infeasible.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let mut eqs = self.equalities.clone();
        let mut ineqs = self.inequalities.clone();
        let mut is_pivot = vec![false; self.vars];

        // Gaussian elimination: turn each equality into a pivot definition
        // and remove the pivot variable from every other row.
        let mut pivots: Vec<(usize, Row)> = Vec::new();
        for r in 0..eqs.len() {
            let row = eqs[r].clone();
            let pivot_var = row.coeffs.iter().position(|c| !c.is_zero());
            let v = match pivot_var {
                None => {
                    if !row.rhs.is_zero() {
                        return None; // 0 = nonzero
                    }
                    continue;
                }
                Some(v) => v,
            };
            let lead = row.coeffs[v].clone();
            let norm = Row {
                coeffs: row.coeffs.iter().map(|c| c / &lead).collect(),
                rhs: &row.rhs / &lead,
            };
            for other in eqs.iter_mut().skip(r + 1) {
                eliminate(other, v, &norm);
            }
            for other in ineqs.iter_mut() {
                eliminate(other, v, &norm);
            }
            for (_, prev) in pivots.iter_mut() {
                eliminate(prev, v, &norm);
            }
            is_pivot[v] = true;
            pivots.push((v, norm));
        }

        // Fourier-Motzkin on the free variables.
        let free: Vec<usize> = (0..self.vars).filter(|&v| !is_pivot[v]).collect();
        let mut stages: Vec<(usize, Vec<Row>, Vec<Row>)> = Vec::new();
        for &v in free.iter().rev() {
            let mut lowers = Vec::new(); // rows with positive coefficient on v
            let mut uppers = Vec::new(); // negative coefficient
            let mut rest = Vec::new();
            for row in ineqs.drain(..) {
                let c = &row.coeffs[v];
                if c.is_positive() {
                    lowers.push(row);
                } else if c.is_negative() {
                    uppers.push(row);
                } else {
                    rest.push(row);
                }
            }
            // every (lower, upper) pair combines into a v-free consequence
            for lo in &lowers {
                for up in &uppers {
                    let a = lo.coeffs[v].clone(); // > 0
                    let c = -up.coeffs[v].clone(); // > 0
                    let coeffs: Vec<BigRational> = lo
                        .coeffs
                        .iter()
                        .zip(&up.coeffs)
                        .map(|(l, u)| l * &c + u * &a)
                        .collect();
                    let rhs = &lo.rhs * &c + &up.rhs * &a;
                    rest.push(Row { coeffs, rhs });
                }
            }
            ineqs = rest;
            stages.push((v, lowers, uppers));
        }

        // all variables gone: surviving rows are pure constants `0 >= rhs`
        for row in &ineqs {
            debug_assert!(row.is_constant());
            if row.rhs.is_positive() {
                return None;
            }
        }

        // back-substitute the free variables, innermost elimination first
        let mut x: Vec<Option<BigRational>> = vec![None; self.vars];
        for (v, lowers, uppers) in stages.iter().rev() {
            let lo = lowers
                .iter()
                .map(|r| r.residual(&assigned_except(&x, *v)) / &r.coeffs[*v])
                .max();
            let hi = uppers
                .iter()
                .map(|r| r.residual(&assigned_except(&x, *v)) / &r.coeffs[*v])
                .min();
            let value = match (lo, hi) {
                (Some(lo), Some(hi)) => {
                    debug_assert!(lo <= hi, "Fourier-Motzkin left an empty interval");
                    lo
                }
                (Some(lo), None) => lo,
                (None, Some(hi)) => hi,
                (None, None) => BigRational::zero(),
            };
            x[*v] = Some(value);
        }
        // pivot variables from their defining rows (free variables only)
        for (v, row) in pivots.iter().rev() {
            let mut value = row.rhs.clone();
            for (u, c) in row.coeffs.iter().enumerate() {
                if u != *v && !c.is_zero() {
                    value -= c * x[u].as_ref().expect("pivot depends on unassigned variable");
                }
            }
            x[*v] = Some(value);
        }

        let point: Vec<BigRational> = x.into_iter().map(|v| v.expect("unassigned variable")).collect();
        debug_assert!(self.check(&point));
        Some(point)
    }

    /// Verifies a candidate point against every constraint.
    pub fn check(&self, x: &[BigRational]) -> bool {
        if x.len() != self.vars {
            return false;
        }
        let dot = |row: &Row| -> BigRational {
            row.coeffs
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .fold(BigRational::zero(), |a, b| a + b)
        };
        self.equalities.iter().all(|r| dot(r) == r.rhs)
            && self.inequalities.iter().all(|r| dot(r) >= r.rhs)
    }
}

fn eliminate(row: &mut Row, v: usize, pivot: &Row) {
    let c = row.coeffs[v].clone();
    if c.is_zero() {
        return;
    }
    for (rc, pc) in row.coeffs.iter_mut().zip(&pivot.coeffs) {
        *rc -= &c * pc;
    }
    row.rhs -= &c * &pivot.rhs;
}

/// View of the assignment where variable `v` is treated as coefficient-free;
/// the rows passed to `residual` at stage `v` contain `v`, whose coefficient
/// must be skipped.
fn assigned_except(x: &[Option<BigRational>], v: usize) -> Vec<Option<BigRational>> {
    let mut y = x.to_vec();
    y[v] = Some(BigRational::zero());
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn unconstrained_system_is_feasible() {
        let sys = LinearSystem::new(3);
        let x = sys.solve().unwrap();
        assert_eq!(x.len(), 3);
        assert!(sys.check(&x));
    }

    #[test]
    fn simple_equality_chain() {
        // x0 = 1, x1 = x0 + 2
        let mut sys = LinearSystem::new(2);
        sys.push_eq(&[1, 0], 1);
        sys.push_eq(&[-1, 1], 2);
        let x = sys.solve().unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
    }

    #[test]
    fn contradictory_equalities() {
        let mut sys = LinearSystem::new(1);
        sys.push_eq(&[1], 0);
        sys.push_eq(&[1], 1);
        assert!(sys.solve().is_none());
    }

    #[test]
    fn squeezed_inequalities() {
        // 1 <= x <= 1 is feasible, 2 <= x <= 1 is not
        let mut sys = LinearSystem::new(1);
        sys.push_geq(&[1], 1);
        sys.push_geq(&[-1], -1);
        let x = sys.solve().unwrap();
        assert_eq!(x[0], rat(1));

        let mut sys = LinearSystem::new(1);
        sys.push_geq(&[1], 2);
        sys.push_geq(&[-1], -1);
        assert!(sys.solve().is_none());
    }

    #[test]
    fn mixed_system_with_fractional_point() {
        // 2x = 1; y >= x; -y >= -x  forces y = x = 1/2
        let mut sys = LinearSystem::new(2);
        sys.push_eq(&[2, 0], 1);
        sys.push_geq(&[-1, 1], 0);
        sys.push_geq(&[1, -1], 0);
        let x = sys.solve().unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(x, vec![half.clone(), half]);
    }

    #[test]
    fn infeasible_through_combination() {
        // x + y >= 3, -x >= -1, -y >= -1
        let mut sys = LinearSystem::new(2);
        sys.push_geq(&[1, 1], 3);
        sys.push_geq(&[-1, 0], -1);
        sys.push_geq(&[0, -1], -1);
        assert!(sys.solve().is_none());
    }

    #[test]
    fn redundant_equalities_are_harmless() {
        let mut sys = LinearSystem::new(2);
        sys.push_eq(&[1, 1], 2);
        sys.push_eq(&[2, 2], 4);
        sys.push_geq(&[1, 0], 0);
        let x = sys.solve().unwrap();
        assert!(sys.check(&x));
    }
}
