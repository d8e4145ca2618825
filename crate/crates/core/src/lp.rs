//! Exact linear programming over arbitrary-precision rationals.
//!
//! A dense two-phase simplex method with Bland's anti-cycling pivot rule. Problem sizes
//! here are tiny (a handful of rows over at most a few hundred columns), so a dense
//! rational tableau is both simple and fast enough. Returned optimal points are
//! re-checked against every constraint before being handed back.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dilation::StrictInequality;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// Maximize `objective . x` subject to the constraints and `x >= lower_bounds`
/// (componentwise; zero when omitted).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Option<Vec<BigRational>>,
}

impl LpProblem {
    pub fn new(objective: Vec<BigRational>, constraints: Vec<Constraint>) -> Self {
        LpProblem {
            objective,
            constraints,
            lower_bounds: None,
        }
    }

    fn satisfied_by(&self, point: &[BigRational]) -> bool {
        if let Some(lb) = &self.lower_bounds {
            if point.iter().zip(lb).any(|(x, l)| x < l) {
                return false;
            }
        } else if point.iter().any(|x| x.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

/// Internal relation after sign normalization.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Le,
    Ge,
    Eq,
}

/// Solves the problem exactly; deterministic for identical input.
pub fn solve(problem: &LpProblem) -> LpOutcome {
    let nvars = problem.objective.len();
    let zero = BigRational::zero();
    let lb = problem
        .lower_bounds
        .clone()
        .unwrap_or_else(|| vec![zero.clone(); nvars]);

    // Shift to y = x - lb >= 0 and normalize right-hand sides to be nonnegative.
    let mut rows: Vec<(Vec<BigRational>, Rel, BigRational)> = Vec::new();
    for c in &problem.constraints {
        debug_assert_eq!(c.coeffs.len(), nvars);
        let shift: BigRational = c.coeffs.iter().zip(&lb).map(|(a, l)| a * l).sum();
        let mut coeffs = c.coeffs.clone();
        let mut rhs = &c.rhs - shift;
        let mut rel = match c.relation {
            Relation::Le => Rel::Le,
            Relation::Eq => Rel::Eq,
        };
        if rhs.is_negative() {
            for a in &mut coeffs {
                *a = -&*a;
            }
            rhs = -rhs;
            rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
        rows.push((coeffs, rel, rhs));
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Rel::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Rel::Le).count();
    let total = nvars + n_slack + n_art;

    // Tableau rows with the right-hand side in the last column.
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack_idx = nvars;
    let mut art_idx = nvars + n_slack;
    let mut artificials: Vec<usize> = Vec::new();
    for (coeffs, rel, rhs) in &rows {
        let mut row = vec![zero.clone(); total + 1];
        row[..nvars].clone_from_slice(coeffs);
        row[total] = rhs.clone();
        match rel {
            Rel::Le => {
                row[slack_idx] = BigRational::one();
                basis.push(slack_idx);
                slack_idx += 1;
            }
            Rel::Ge => {
                row[slack_idx] = -BigRational::one();
                slack_idx += 1;
                row[art_idx] = BigRational::one();
                basis.push(art_idx);
                artificials.push(art_idx);
                art_idx += 1;
            }
            Rel::Eq => {
                row[art_idx] = BigRational::one();
                basis.push(art_idx);
                artificials.push(art_idx);
                art_idx += 1;
            }
        }
        tab.push(row);
    }

    // Phase 1: maximize minus the sum of artificial variables.
    if !artificials.is_empty() {
        let mut obj = vec![zero.clone(); total + 1];
        for &a in &artificials {
            obj[a] = -BigRational::one();
        }
        // Make reduced costs consistent with the starting basis.
        for (r, &b) in basis.iter().enumerate() {
            if artificials.contains(&b) {
                let row = tab[r].clone();
                for (o, v) in obj.iter_mut().zip(&row) {
                    *o += v;
                }
            }
        }
        if run_simplex(&mut tab, &mut basis, &mut obj, total).is_none() {
            unreachable!("phase-1 objective is bounded");
        }
        // The last objective entry stores the negated value, so a positive entry
        // means some artificial variable is stuck above zero.
        if obj[total].is_positive() {
            return LpOutcome::Infeasible;
        }
        // Pivot remaining artificials out of the basis or drop redundant rows.
        let mut r = 0;
        while r < tab.len() {
            if artificials.contains(&basis[r]) {
                let col = (0..nvars + n_slack).find(|&c| !tab[r][c].is_zero());
                match col {
                    Some(c) => pivot(
                        &mut tab,
                        &mut basis,
                        &mut vec![zero.clone(); total + 1],
                        r,
                        c,
                    ),
                    None => {
                        tab.remove(r);
                        basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // Clear artificial columns so they can never re-enter.
        for row in &mut tab {
            for &a in &artificials {
                row[a] = zero.clone();
            }
        }
    }

    // Phase 2: the real objective over y.
    let mut obj = vec![zero.clone(); total + 1];
    obj[..nvars].clone_from_slice(&problem.objective);
    for (r, &b) in basis.iter().enumerate() {
        if !obj[b].is_zero() {
            let factor = obj[b].clone();
            let row = tab[r].clone();
            for (o, v) in obj.iter_mut().zip(&row) {
                *o -= &factor * v;
            }
        }
    }
    if run_simplex(&mut tab, &mut basis, &mut obj, total).is_none() {
        return LpOutcome::Unbounded;
    }

    let mut point = lb;
    for (r, &b) in basis.iter().enumerate() {
        if b < nvars {
            let total_col = tab[r].last().unwrap().clone();
            point[b] += total_col;
        }
    }
    let value: BigRational = problem
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    assert!(
        problem.satisfied_by(&point),
        "optimal point violates a constraint"
    );
    LpOutcome::Optimal { value, point }
}

/// Bland's rule iterations on the tableau; `None` signals an unbounded direction.
/// `obj` holds reduced costs in columns `0..total` and the negated objective value in
/// `total`.
fn run_simplex(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    obj: &mut [BigRational],
    total: usize,
) -> Option<()> {
    loop {
        let entering = (0..total).find(|&j| obj[j].is_positive());
        let entering = match entering {
            Some(j) => j,
            None => return Some(()),
        };
        // Ratio test; ties broken by the smallest basic variable index (Bland).
        let mut leaving: Option<(usize, BigRational)> = None;
        for r in 0..tab.len() {
            if !tab[r][entering].is_positive() {
                continue;
            }
            let ratio = &tab[r][total] / &tab[r][entering];
            match &leaving {
                None => leaving = Some((r, ratio)),
                Some((best_r, best)) => {
                    if ratio < *best || (ratio == *best && basis[r] < basis[*best_r]) {
                        leaving = Some((r, ratio));
                    }
                }
            }
        }
        let (row, _) = leaving?;
        pivot(tab, basis, obj, row, entering);
    }
}

fn pivot(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    obj: &mut [BigRational],
    row: usize,
    col: usize,
) {
    let inv = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &inv;
    }
    for r in 0..tab.len() {
        if r == row || tab[r][col].is_zero() {
            continue;
        }
        let factor = tab[r][col].clone();
        let (pivot_row, other_row) = if r < row {
            let (a, b) = tab.split_at_mut(row);
            (&b[0], &mut a[r])
        } else {
            let (a, b) = tab.split_at_mut(r);
            (&a[row], &mut b[0])
        };
        for (o, p) in other_row.iter_mut().zip(pivot_row) {
            *o -= &factor * p;
        }
    }
    if !obj[col].is_zero() {
        let factor = obj[col].clone();
        for (o, p) in obj.iter_mut().zip(&tab[row]) {
            *o -= &factor * p;
        }
    }
    basis[row] = col;
}

/// Outcome of the max-slack feasibility test for a system of strict inequalities over
/// the standard simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictFeasibility {
    /// The open system has a solution: `witness` satisfies every row with slack at
    /// least `slack > 0`.
    Feasible {
        slack: BigRational,
        witness: Vec<BigRational>,
    },
    /// The open system is empty. `max_slack` is zero when the closed relaxation still
    /// has a solution, `None` when even the closed system is empty.
    Infeasible { max_slack: Option<BigRational> },
}

impl StrictFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, StrictFeasibility::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[BigRational]> {
        match self {
            StrictFeasibility::Feasible { witness, .. } => Some(witness),
            StrictFeasibility::Infeasible { .. } => None,
        }
    }
}

/// Decides whether all strict rows `a . lambda < c` can hold simultaneously for some
/// `lambda` in the standard simplex of dimension `simplex_dim`.
///
/// Solves `max eps` subject to `a . lambda + eps <= c` for every row,
/// `sum lambda = 1`, `lambda >= 0`, `0 <= eps <= 1`; the open system is feasible iff
/// the optimum is positive. Adding a row can never increase the optimal slack.
pub fn strict_feasibility(rows: &[StrictInequality], simplex_dim: usize) -> StrictFeasibility {
    let nl = simplex_dim + 1;

    let zero = BigRational::zero();
    let one = BigRational::one();

    let mut constraints = Vec::with_capacity(rows.len() + 2);
    for row in rows {
        debug_assert_eq!(row.coeffs.len(), nl);
        let mut coeffs = row.coeffs.clone();
        coeffs.push(one.clone());
        constraints.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: row.rhs.clone(),
        });
    }
    let mut sum_row = vec![one.clone(); nl];
    sum_row.push(zero.clone());
    constraints.push(Constraint {
        coeffs: sum_row,
        relation: Relation::Eq,
        rhs: one.clone(),
    });
    let mut eps_cap = vec![zero.clone(); nl];
    eps_cap.push(one.clone());
    constraints.push(Constraint {
        coeffs: eps_cap,
        relation: Relation::Le,
        rhs: one.clone(),
    });

    let mut objective = vec![zero.clone(); nl];
    objective.push(one);

    match solve(&LpProblem::new(objective, constraints)) {
        LpOutcome::Infeasible => StrictFeasibility::Infeasible { max_slack: None },
        LpOutcome::Unbounded => unreachable!("slack is capped at one"),
        LpOutcome::Optimal { value, point } => {
            if value.is_positive() {
                let witness = point[..nl].to_vec();
                debug_assert!(rows.iter().all(|r| r.holds_at(&witness)));
                StrictFeasibility::Feasible {
                    slack: value,
                    witness,
                }
            } else {
                StrictFeasibility::Infeasible {
                    max_slack: Some(value),
                }
            }
        }
    }
}
