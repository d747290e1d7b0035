//! Exact linear programming: dense two-phase simplex over `BigRational`
//! with Bland's anti-cycling rule.
//!
//! Problems are stated as `maximize c·x` subject to linear rows with
//! relation `<=`, `>=` or `=`, and `x >= 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// `maximize objective·x` subject to `constraints`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    // reduced-cost row for maximization: entering columns have positive cost
    cost: Vec<BigRational>,
    value: BigRational,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for x in self.rows[row].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for (x, y) in self.cost.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.value += &f * &pivot_row[self.width];
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Runs the simplex loop over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Solves the program exactly.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    // artificial variables for rows whose slack cannot start in the basis
    let needs_artificial = |c: &Constraint| -> bool {
        let flipped = c.rhs.is_negative();
        match c.relation {
            Relation::Eq => true,
            Relation::Le => flipped,
            Relation::Ge => !flipped || c.rhs.is_zero(),
        }
    };
    let n_art = lp
        .constraints
        .iter()
        .filter(|c| needs_artificial(c))
        .count();
    let width = n + n_slack + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_col = n;
    let mut art_col = n + n_slack;
    for c in &lp.constraints {
        assert_eq!(c.coeffs.len(), n, "constraint width must match objective");
        let mut row = vec![BigRational::zero(); width + 1];
        let sign = if c.rhs.is_negative() {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a * &sign;
        }
        row[width] = &c.rhs * &sign;
        let artificial = needs_artificial(c);
        match c.relation {
            Relation::Eq => {}
            Relation::Le => {
                row[slack_col] = sign.clone();
                if !artificial {
                    basis.push(slack_col);
                }
                slack_col += 1;
            }
            Relation::Ge => {
                row[slack_col] = -sign.clone();
                if !artificial {
                    basis.push(slack_col);
                }
                slack_col += 1;
            }
        }
        if artificial {
            row[art_col] = BigRational::one();
            basis.push(art_col);
            art_col += 1;
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        cost: vec![BigRational::zero(); width],
        value: BigRational::zero(),
        basis,
        width,
    };

    if n_art > 0 {
        // phase 1: maximize -Σ artificials, expressed in reduced costs
        for i in 0..m {
            if t.basis[i] >= n + n_slack {
                for j in 0..n + n_slack {
                    let a = t.rows[i][j].clone();
                    t.cost[j] += a;
                }
                let b = t.rows[i][width].clone();
                t.value -= b;
            }
        }
        t.optimize(width);
        if t.value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n + n_slack {
                match (0..n + n_slack).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // phase 2
    t.cost = vec![BigRational::zero(); width];
    t.value = BigRational::zero();
    for (j, c) in lp.objective.iter().enumerate() {
        t.cost[j] = c.clone();
    }
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        let f = t.cost[b].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..width {
            let a = &t.rows[i][j];
            if !a.is_zero() {
                t.cost[j] -= &f * a;
            }
        }
        t.value += &f * &t.rows[i][width];
    }
    if !t.optimize(n + n_slack) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[i][width].clone();
        }
    }
    LpOutcome::Optimal { value: t.value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qq(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn row(v: &[i64], rel: Relation, b: i64) -> Constraint {
        Constraint::new(v.iter().map(|&x| q(x)).collect(), rel, q(b))
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let lp = LinearProgram {
            objective: vec![q(3), q(5)],
            constraints: vec![
                row(&[1, 0], Relation::Le, 4),
                row(&[0, 2], Relation::Le, 12),
                row(&[3, 2], Relation::Le, 18),
            ],
        };
        match solve(&lp) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(36));
                assert_eq!(x, vec![q(2), q(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x - y, x + y = 1, x >= 1/3 (as 3x >= 1), y >= 1/4 (as 4y >= 1)
        let lp = LinearProgram {
            objective: vec![q(1), q(-1)],
            constraints: vec![
                row(&[1, 1], Relation::Eq, 1),
                row(&[3, 0], Relation::Ge, 1),
                row(&[0, 4], Relation::Ge, 1),
            ],
        };
        assert_eq!(solve(&lp).value(), Some(&qq(1, 2)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![q(1)],
            constraints: vec![row(&[1], Relation::Le, 1), row(&[1], Relation::Ge, 2)],
        };
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
        let lp = LinearProgram {
            objective: vec![q(1), q(0)],
            constraints: vec![row(&[1, -1], Relation::Le, 1)],
        };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        // -x <= -2 means x >= 2; duplicated equality row is redundant
        let lp = LinearProgram {
            objective: vec![q(-1), q(-1)],
            constraints: vec![
                row(&[-1, 0], Relation::Le, -2),
                row(&[1, 1], Relation::Eq, 5),
                row(&[2, 2], Relation::Eq, 10),
            ],
        };
        assert_eq!(solve(&lp).value(), Some(&q(-5)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule
        let lp = LinearProgram {
            objective: vec![qq(3, 4), q(-20), qq(1, 2), q(-6)],
            constraints: vec![
                Constraint::new(vec![qq(1, 4), q(-8), q(-1), q(9)], Relation::Le, q(0)),
                Constraint::new(vec![qq(1, 2), q(-12), qq(-1, 2), q(3)], Relation::Le, q(0)),
                Constraint::new(vec![q(0), q(0), q(1), q(0)], Relation::Le, q(1)),
            ],
        };
        assert_eq!(solve(&lp).value(), Some(&qq(5, 4)));
    }
}
