//! Exact rational linear programming.
//!
//! A dense two-phase simplex over [`Rational`] with Bland's smallest-index
//! rule, so it always terminates and gives the same answer for the same
//! program. Sizes are desk scale: tens of variables, hundreds of rows.
//! Variables are free unless [`Bounds`] say otherwise.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Le,
    Eq,
    Ge,
}

impl Comparator {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Comparator::Le => lhs <= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ge => lhs >= rhs,
        }
    }

    fn flipped(self) -> Self {
        match self {
            Comparator::Le => Comparator::Ge,
            Comparator::Eq => Comparator::Eq,
            Comparator::Ge => Comparator::Le,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Comparator,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, cmp: Comparator, rhs: Rational) -> Self {
        Self { coeffs, cmp, rhs }
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        self.cmp.holds(&dot(&self.coeffs, point), &self.rhs)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn nonnegative() -> Self {
        Self {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    fn contains(&self, x: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| x >= l) && self.upper.as_ref().is_none_or(|u| x <= u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("{what} has {found} entries, program has {expected} variables")]
    Dimension {
        what: String,
        expected: usize,
        found: usize,
    },
}

/// `maximize objective·x` subject to `constraints` and per-variable `bounds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<Bounds>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<Rational>,
        constraints: Vec<Constraint>,
        bounds: Vec<Bounds>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        if bounds.len() != n {
            return Err(LpError::Dimension {
                what: "bounds".into(),
                expected: n,
                found: bounds.len(),
            });
        }
        for (i, c) in constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Dimension {
                    what: format!("constraint {i}"),
                    expected: n,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(Self {
            num_vars: n,
            objective,
            constraints,
            bounds,
        })
    }

    /// A program whose variables are all free.
    pub fn with_free_vars(objective: Vec<Rational>, constraints: Vec<Constraint>) -> Result<Self, LpError> {
        let n = objective.len();
        Self::new(objective, constraints, vec![Bounds::free(); n])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && self.constraints.iter().all(|c| c.is_satisfied(point))
            && self.bounds.iter().zip(point).all(|(b, x)| b.contains(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x_j = offset_j + Σ (coef · y_col)` with every `y ≥ 0`.
struct Substitution {
    offset: Vec<Rational>,
    terms: Vec<Vec<(usize, Rational)>>,
    num_cols: usize,
    extra_rows: Vec<(usize, Rational)>,
}

impl Substitution {
    fn build(bounds: &[Bounds]) -> Self {
        let mut offset = Vec::with_capacity(bounds.len());
        let mut terms = Vec::with_capacity(bounds.len());
        let mut extra_rows = Vec::new();
        let mut col = 0;
        for b in bounds {
            match (&b.lower, &b.upper) {
                (Some(l), upper) => {
                    offset.push(l.clone());
                    terms.push(vec![(col, Rational::one())]);
                    if let Some(u) = upper {
                        extra_rows.push((col, u - l));
                    }
                    col += 1;
                }
                (None, Some(u)) => {
                    offset.push(u.clone());
                    terms.push(vec![(col, -Rational::one())]);
                    col += 1;
                }
                (None, None) => {
                    offset.push(Rational::zero());
                    terms.push(vec![(col, Rational::one()), (col + 1, -Rational::one())]);
                    col += 2;
                }
            }
        }
        Self {
            offset,
            terms,
            num_cols: col,
            extra_rows,
        }
    }

    /// Rewrites `coeffs·x` as `const + row·y`.
    fn row(&self, coeffs: &[Rational]) -> (Rational, Vec<Rational>) {
        let mut row = vec![Rational::zero(); self.num_cols];
        let mut constant = Rational::zero();
        for (j, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            constant += a * &self.offset[j];
            for (col, k) in &self.terms[j] {
                row[*col] += a * k;
            }
        }
        (constant, row)
    }

    fn recover(&self, y: &[Rational]) -> Vec<Rational> {
        self.offset
            .iter()
            .zip(&self.terms)
            .map(|(o, ts)| o + ts.iter().map(|(c, k)| k * &y[*c]).sum::<Rational>())
            .collect()
    }
}

/// Dense simplex tableau in canonical form: `rows[i]` has `cols + 1`
/// entries, the last being the right-hand side.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    num_real: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_B B⁻¹ A_j − c_j` for a maximization objective.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| {
                let mut z = -cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        z += &cost[b] * &self.rows[i][j];
                    }
                }
                z
            })
            .collect()
    }

    /// Maximizes `cost·y` over columns `< limit` using Bland's rule.
    fn run(&mut self, cost: &[Rational], limit: usize) -> Step {
        loop {
            let reduced = self.reduced_costs(cost);
            let Some(enter) = (0..limit).find(|&j| reduced[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

enum Phase1 {
    Infeasible,
    Feasible(Tableau, Substitution),
}

fn phase_one(lp: &LinearProgram) -> Phase1 {
    let sub = Substitution::build(&lp.bounds);
    let n = sub.num_cols;

    let mut rows: Vec<(Vec<Rational>, Comparator, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            let (constant, row) = sub.row(&c.coeffs);
            (row, c.cmp, &c.rhs - constant)
        })
        .collect();
    for (col, cap) in &sub.extra_rows {
        let mut row = vec![Rational::zero(); n];
        row[*col] = Rational::one();
        rows.push((row, Comparator::Le, cap.clone()));
    }
    for (row, cmp, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            row.iter_mut().for_each(|v| *v = -v.clone());
            *rhs = -rhs.clone();
            *cmp = cmp.flipped();
        }
    }

    let num_slack = rows.iter().filter(|r| r.1 != Comparator::Eq).count();
    let num_art = rows.iter().filter(|r| r.1 != Comparator::Le).count();
    let cols = n + num_slack + num_art;
    let mut tableau_rows = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    let (mut slack, mut art) = (n, n + num_slack);
    for (row, cmp, rhs) in rows {
        let mut full = row;
        full.resize(cols + 1, Rational::zero());
        full[cols] = rhs;
        match cmp {
            Comparator::Le => {
                full[slack] = Rational::one();
                basis.push(slack);
                slack += 1;
            }
            Comparator::Ge => {
                full[slack] = -Rational::one();
                slack += 1;
                full[art] = Rational::one();
                basis.push(art);
                art += 1;
            }
            Comparator::Eq => {
                full[art] = Rational::one();
                basis.push(art);
                art += 1;
            }
        }
        tableau_rows.push(full);
    }
    let num_real = n + num_slack;
    let mut t = Tableau {
        rows: tableau_rows,
        basis,
        cols,
        num_real,
    };

    if num_art > 0 {
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(num_real) {
            *c = -Rational::one();
        }
        // bounded below by zero, so phase one never reports unbounded
        let _ = t.run(&cost, cols);
        let infeasibility: Rational = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= num_real)
            .map(|(i, _)| t.rhs(i).clone())
            .sum();
        if infeasibility.is_positive() {
            return Phase1::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= num_real {
                match (0..num_real).find(|&j| !t.rows[i][j].is_zero()) {
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
    Phase1::Feasible(t, sub)
}

fn basic_solution(t: &Tableau, sub: &Substitution) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); sub.num_cols];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < sub.num_cols {
            y[b] = t.rhs(i).clone();
        }
    }
    sub.recover(&y)
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let (mut t, sub) = match phase_one(lp) {
        Phase1::Infeasible => return LpOutcome::Infeasible,
        Phase1::Feasible(t, sub) => (t, sub),
    };
    let (_, obj_row) = sub.row(&lp.objective);
    let mut cost = obj_row;
    cost.resize(t.cols, Rational::zero());
    let limit = t.num_real;
    match t.run(&cost, limit) {
        Step::Unbounded => LpOutcome::Unbounded,
        Step::Optimal => {
            let point = basic_solution(&t, &sub);
            assert!(
                lp.is_feasible_point(&point),
                "simplex produced a point violating its own program"
            );
            let value = dot(&lp.objective, &point);
            LpOutcome::Optimal { value, point }
        }
    }
}

/// Phase one only: any exact point satisfying `constraints` and `bounds`.
pub fn feasible_point(
    num_vars: usize,
    constraints: Vec<Constraint>,
    bounds: Vec<Bounds>,
) -> Result<Option<Vec<Rational>>, LpError> {
    let lp = LinearProgram::new(vec![Rational::zero(); num_vars], constraints, bounds)?;
    Ok(match phase_one(&lp) {
        Phase1::Infeasible => None,
        Phase1::Feasible(t, sub) => {
            let point = basic_solution(&t, &sub);
            assert!(lp.is_feasible_point(&point), "phase one produced an infeasible point");
            Some(point)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn c(coeffs: &[i64], cmp: Comparator, rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&v| int(v)).collect(), cmp, int(rhs))
    }

    #[test]
    fn bounded_maximum() {
        let lp = LinearProgram::with_free_vars(
            vec![int(1)],
            vec![c(&[1], Comparator::Le, 3), c(&[1], Comparator::Ge, 0)],
        )
        .unwrap();
        assert_eq!(
            solve(&lp),
            LpOutcome::Optimal {
                value: int(3),
                point: vec![int(3)]
            }
        );
    }

    #[test]
    fn infeasible_program() {
        let lp = LinearProgram::with_free_vars(
            vec![int(1)],
            vec![c(&[1], Comparator::Ge, 1), c(&[1], Comparator::Le, 0)],
        )
        .unwrap();
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_program() {
        let lp = LinearProgram::with_free_vars(vec![int(1)], vec![c(&[1], Comparator::Ge, 0)]).unwrap();
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn respects_bounds() {
        // max x + y, x in [-1, 1/2], y <= 2, x + y <= 2
        let lp = LinearProgram::new(
            vec![int(1), int(1)],
            vec![c(&[1, 1], Comparator::Le, 2)],
            vec![
                Bounds::between(int(-1), ratio(1, 2)),
                Bounds {
                    lower: None,
                    upper: Some(int(2)),
                },
            ],
        )
        .unwrap();
        assert_eq!(solve(&lp).optimal_value(), Some(&int(2)));
        let lp = LinearProgram::new(
            vec![int(-1), int(0)],
            vec![],
            vec![Bounds::between(int(-1), ratio(1, 2)), Bounds::free()],
        )
        .unwrap();
        assert_eq!(
            solve(&lp),
            LpOutcome::Optimal {
                value: int(1),
                point: vec![int(-1), int(0)]
            }
        );
    }

    #[test]
    fn inverted_bounds_are_infeasible() {
        let lp = LinearProgram::new(vec![int(1)], vec![], vec![Bounds::between(int(2), int(1))]).unwrap();
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn feasible_point_examples() {
        let nonneg = vec![Bounds::nonnegative(); 2];
        let p = feasible_point(2, vec![c(&[1, 1], Comparator::Eq, 1)], nonneg).unwrap().unwrap();
        assert_eq!(&p[0] + &p[1], int(1));
        assert!(p.iter().all(|x| !x.is_negative()));
        assert_eq!(
            feasible_point(1, vec![c(&[1], Comparator::Ge, 1), c(&[1], Comparator::Le, 0)], vec![Bounds::free()])
                .unwrap(),
            None
        );
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        // x + y = 1 twice, 2x + 2y = 2; maximize x with x, y >= 0
        let lp = LinearProgram::new(
            vec![int(1), int(0)],
            vec![
                c(&[1, 1], Comparator::Eq, 1),
                c(&[1, 1], Comparator::Eq, 1),
                c(&[2, 2], Comparator::Eq, 2),
            ],
            vec![Bounds::nonnegative(); 2],
        )
        .unwrap();
        assert_eq!(
            solve(&lp),
            LpOutcome::Optimal {
                value: int(1),
                point: vec![int(1), int(0)]
            }
        );
    }

    #[test]
    fn degenerate_program_terminates() {
        // classic cycling example for the largest-coefficient rule (Beale)
        let q = |n, d| ratio(n, d);
        let lp = LinearProgram::new(
            vec![q(3, 4), q(-150, 1), q(1, 50), q(-6, 1)],
            vec![
                Constraint::new(vec![q(1, 4), q(-60, 1), q(-1, 25), q(9, 1)], Comparator::Le, int(0)),
                Constraint::new(vec![q(1, 2), q(-90, 1), q(-1, 50), q(3, 1)], Comparator::Le, int(0)),
                Constraint::new(vec![int(0), int(0), int(1), int(0)], Comparator::Le, int(1)),
            ],
            vec![Bounds::nonnegative(); 4],
        )
        .unwrap();
        assert_eq!(solve(&lp).optimal_value(), Some(&q(1, 20)));
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        assert!(LinearProgram::with_free_vars(vec![int(1)], vec![c(&[1, 2], Comparator::Le, 0)]).is_err());
        assert!(LinearProgram::new(vec![int(1)], vec![], vec![]).is_err());
    }

    #[test]
    fn deterministic_outcomes() {
        let lp = LinearProgram::new(
            vec![int(1), int(1), int(1)],
            vec![c(&[1, 1, 0], Comparator::Le, 1), c(&[0, 1, 1], Comparator::Le, 1)],
            vec![Bounds::nonnegative(); 3],
        )
        .unwrap();
        let first = solve(&lp);
        for _ in 0..5 {
            assert_eq!(solve(&lp), first);
        }
    }
}
