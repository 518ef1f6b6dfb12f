//! Exact linear programming over polyhedra `{v : A v <= rhs}`.
//!
//! Equalities are always written as a pair of opposite inequalities.

pub mod audit;
mod simplex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{dot, neg_vec, Matrix, NumericError, Rational, Vector};
use simplex::RawOutcome;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("polyhedron needs at least one row and one column (got {rows}x{cols})")]
    Degenerate { rows: usize, cols: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Max,
    Min,
}

impl Sense {
    fn sign(self) -> Rational {
        match self {
            Sense::Max => Rational::one(),
            Sense::Min => -Rational::one(),
        }
    }
}

/// Feasible set `{v : A v <= rhs}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    a: Matrix,
    rhs: Vector,
}

impl Polyhedron {
    pub fn new(a: Matrix, rhs: Vector) -> Result<Self, LpError> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(LpError::Degenerate { rows: a.rows(), cols: a.cols() });
        }
        if rhs.len() != a.rows() {
            return Err(NumericError::DimensionMismatch {
                context: "polyhedron right-hand side".into(),
                expected: a.rows(),
                found: rhs.len(),
            }
            .into());
        }
        Ok(Polyhedron { a, rhs })
    }

    /// Axis-aligned box `lo <= v <= hi`.
    pub fn boxed(lo: &[Rational], hi: &[Rational]) -> Result<Self, LpError> {
        let n = lo.len();
        let mut rows = Vec::with_capacity(2 * n);
        let mut rhs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut up = vec![Rational::zero(); n];
            up[i] = Rational::one();
            rows.push(up);
            rhs.push(hi[i].clone());
            let mut down = vec![Rational::zero(); n];
            down[i] = -Rational::one();
            rows.push(down);
            rhs.push(-&lo[i]);
        }
        Polyhedron::new(Matrix::from_rows(rows, n)?, rhs)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.dim() && (0..self.num_rows()).all(|i| dot(self.a.row(i), v) <= self.rhs[i])
    }

    /// Rows satisfied with equality at `v`.
    pub fn tight_rows(&self, v: &[Rational]) -> Vec<usize> {
        (0..self.num_rows()).filter(|&i| dot(self.a.row(i), v) == self.rhs[i]).collect()
    }

    /// Copy with `row·v <= bound` appended.
    pub fn with_row(&self, row: Vector, bound: Rational) -> Result<Self, LpError> {
        let mut a = self.a.clone();
        a.push_row(row)?;
        let mut rhs = self.rhs.clone();
        rhs.push(bound);
        Ok(Polyhedron { a, rhs })
    }

    /// Copy with `row·v = value` appended as two inequalities.
    pub fn with_equality(&self, row: &[Rational], value: &Rational) -> Result<Self, LpError> {
        self.with_row(row.to_vec(), value.clone())?.with_row(neg_vec(row), -value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of a single LP solve.
///
/// For an optimal solve, `dual` holds multipliers `mu >= 0` (one per row)
/// with `mu^T A = s·obj` and `mu^T rhs = s·value`, where `s` is `+1` for
/// maximization and `-1` for minimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub point: Option<Vector>,
    pub value: Option<Rational>,
    pub dual: Option<Vector>,
}

impl LpOutcome {
    fn without_solution(status: LpStatus) -> Self {
        LpOutcome { status, point: None, value: None, dual: None }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn check_objective(p: &Polyhedron, obj: &[Rational]) -> Result<(), LpError> {
    if obj.len() != p.dim() {
        return Err(NumericError::DimensionMismatch {
            context: "objective".into(),
            expected: p.dim(),
            found: obj.len(),
        }
        .into());
    }
    Ok(())
}

/// Optimizes `obj·v` over `p` with the exact simplex method.
pub fn solve_lp(p: &Polyhedron, obj: &[Rational], sense: Sense) -> Result<LpOutcome, LpError> {
    check_objective(p, obj)?;
    let directed: Vector = match sense {
        Sense::Max => obj.to_vec(),
        Sense::Min => neg_vec(obj),
    };
    let out = match simplex::maximize(&p.a, &p.rhs, &directed) {
        RawOutcome::Infeasible => LpOutcome::without_solution(LpStatus::Infeasible),
        RawOutcome::Unbounded => LpOutcome::without_solution(LpStatus::Unbounded),
        RawOutcome::Optimal { point, value, dual } => {
            let value = match sense {
                Sense::Max => value,
                Sense::Min => -value,
            };
            LpOutcome { status: LpStatus::Optimal, point: Some(point), value: Some(value), dual: Some(dual) }
        }
    };
    if out.is_optimal() && audit::is_enabled() {
        audit::record_certificate(verify_certificate(p, obj, sense, &out));
    }
    Ok(out)
}

/// Checks an optimal outcome's dual certificate exactly.
pub fn verify_certificate(p: &Polyhedron, obj: &[Rational], sense: Sense, out: &LpOutcome) -> bool {
    let (Some(point), Some(value), Some(mu)) = (&out.point, &out.value, &out.dual) else {
        return false;
    };
    if mu.len() != p.num_rows() || mu.iter().any(Rational::is_negative) {
        return false;
    }
    if !p.contains(point) || dot(obj, point) != *value {
        return false;
    }
    let s = sense.sign();
    let combined = p.a.transpose().mul_vec(mu).expect("dimensions agree");
    combined.iter().zip(obj).all(|(c, o)| *c == &s * o) && dot(mu, &p.rhs) == &s * value
}

/// Outcome of a lexicographic solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexOutcome {
    pub point: Vector,
    /// Optimal value of the first objective.
    pub primary_value: Rational,
    /// Value of the last objective at `point`.
    pub value: Rational,
    /// Every stage's outcome, each on the polyhedron restricted by the earlier stages.
    pub stages: Vec<LpOutcome>,
}

/// Optimizes a chain of objectives lexicographically: each stage fixes the
/// previous optimum with an equality pair before solving the next one.
pub fn solve_lex_chain(p: &Polyhedron, objectives: &[(&[Rational], Sense)]) -> Result<LexOutcome, LpError> {
    assert!(!objectives.is_empty(), "lexicographic solve needs an objective");
    let mut current = p.clone();
    let mut stages = Vec::with_capacity(objectives.len());
    for (i, (obj, sense)) in objectives.iter().enumerate() {
        let out = solve_lp(&current, obj, *sense)?;
        match out.status {
            LpStatus::Infeasible => return Err(LpError::Infeasible),
            LpStatus::Unbounded => return Err(LpError::Unbounded),
            LpStatus::Optimal => {}
        }
        if i + 1 < objectives.len() {
            current = current.with_equality(obj, out.value.as_ref().expect("optimal value"))?;
        }
        stages.push(out);
    }
    let last = stages.last().expect("at least one stage");
    if audit::is_enabled() {
        let reached = dot(objectives[0].0, last.point.as_ref().expect("optimal point"));
        audit::record_lex(Some(reached) == stages[0].value);
    }
    Ok(LexOutcome {
        point: last.point.clone().expect("optimal point"),
        primary_value: stages[0].value.clone().expect("optimal value"),
        value: last.value.clone().expect("optimal value"),
        stages,
    })
}

/// Optimizes `secondary` over the optimal face of `primary`.
pub fn solve_lex_lp(
    p: &Polyhedron,
    primary: &[Rational],
    primary_sense: Sense,
    secondary: &[Rational],
    secondary_sense: Sense,
) -> Result<LexOutcome, LpError> {
    check_objective(p, secondary)?;
    solve_lex_chain(p, &[(primary, primary_sense), (secondary, secondary_sense)])
}

/// Emptiness and boundedness of a polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extent {
    pub nonempty: bool,
    /// `None` when the polyhedron is empty.
    pub bounded: Option<bool>,
}

/// Nonemptiness by phase one; boundedness by maximizing and minimizing every coordinate.
pub fn check_bounded_nonempty(p: &Polyhedron) -> Extent {
    let n = p.dim();
    let zero = vec![Rational::zero(); n];
    let feasible = solve_lp(p, &zero, Sense::Max).expect("dimensions agree");
    if feasible.status == LpStatus::Infeasible {
        return Extent { nonempty: false, bounded: None };
    }
    let bounded = (0..n).all(|j| {
        let e = crate::numeric::unit_vector(n, j);
        [Sense::Max, Sense::Min]
            .iter()
            .all(|&s| solve_lp(p, &e, s).expect("dimensions agree").status == LpStatus::Optimal)
    });
    Extent { nonempty: true, bounded: Some(bounded) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};

    pub(crate) fn poly(rows: &[&[i64]], rhs: &[i64]) -> Polyhedron {
        let cols = rows[0].len();
        Polyhedron::new(
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cols)
                .unwrap(),
            rhs.iter().map(|&x| int(x)).collect(),
        )
        .unwrap()
    }

    fn unit_square() -> Polyhedron {
        poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[1, 0, 1, 0])
    }

    fn triangle() -> Polyhedron {
        poly(&[&[1, 1], &[-1, 0], &[0, -1]], &[1, 0, 0])
    }

    fn ints(v: &[i64]) -> Vector {
        v.iter().map(|&x| int(x)).collect()
    }

    fn solve_checked(p: &Polyhedron, obj: &[i64], sense: Sense) -> LpOutcome {
        let obj = ints(obj);
        let out = solve_lp(p, &obj, sense).unwrap();
        if out.is_optimal() {
            assert!(verify_certificate(p, &obj, sense, &out), "bad certificate {out:?}");
        }
        out
    }

    #[test]
    fn square_max_first_coordinate() {
        let out = solve_checked(&unit_square(), &[1, 0], Sense::Max);
        assert_eq!(out.value, Some(int(1)));
        assert_eq!(out.point.as_ref().unwrap()[0], int(1));
    }

    #[test]
    fn infeasible_interval() {
        let p = poly(&[&[1], &[-1]], &[0, -1]);
        for obj in [[1], [0], [-3]] {
            assert_eq!(solve_checked(&p, &obj, Sense::Max).status, LpStatus::Infeasible);
        }
    }

    #[test]
    fn triangle_sum() {
        let out = solve_checked(&triangle(), &[1, 1], Sense::Max);
        assert_eq!(out.value, Some(int(1)));
        let out = solve_checked(&triangle(), &[1, 1], Sense::Min);
        assert_eq!(out.value, Some(int(0)));
    }

    #[test]
    fn unbounded_ray() {
        let p = poly(&[&[-1]], &[0]);
        assert_eq!(solve_checked(&p, &[1], Sense::Max).status, LpStatus::Unbounded);
        assert_eq!(solve_checked(&p, &[1], Sense::Min).value, Some(int(0)));
    }

    #[test]
    fn rank_deficient_polyhedron() {
        // a slab in the plane: bounded in v1, a line in v2
        let p = poly(&[&[1, 0], &[-1, 0]], &[2, 1]);
        assert_eq!(solve_checked(&p, &[1, 0], Sense::Max).value, Some(int(2)));
        assert_eq!(solve_checked(&p, &[0, 1], Sense::Max).status, LpStatus::Unbounded);
        assert_eq!(solve_checked(&p, &[-1, 0], Sense::Max).value, Some(int(1)));
    }

    #[test]
    fn fractional_vertex() {
        // 2a + b <= 2, a + 3b <= 3, a, b >= 0; max a + b at (3/5, 4/5)
        let p = poly(&[&[2, 1], &[1, 3], &[-1, 0], &[0, -1]], &[2, 3, 0, 0]);
        let out = solve_checked(&p, &[1, 1], Sense::Max);
        assert_eq!(out.point.unwrap(), vec![frac(3, 5), frac(4, 5)]);
        assert_eq!(out.value, Some(frac(7, 5)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut rows = vec![
            vec![frac(1, 4), int(-8), int(-1), int(9)],
            vec![frac(1, 2), int(-12), frac(-1, 2), int(3)],
            ints(&[0, 0, 1, 0]),
        ];
        for j in 0..4 {
            let mut r = ints(&[0, 0, 0, 0]);
            r[j] = int(-1);
            rows.push(r);
        }
        let p = Polyhedron::new(Matrix::from_rows(rows, 4).unwrap(), ints(&[0, 0, 1, 0, 0, 0, 0])).unwrap();
        let obj = vec![frac(3, 4), int(-20), frac(1, 2), int(-6)];
        let out = solve_lp(&p, &obj, Sense::Max).unwrap();
        assert_eq!(out.value, Some(frac(5, 4)));
        assert!(verify_certificate(&p, &obj, Sense::Max, &out));
    }

    #[test]
    fn infeasible_requires_phase_one() {
        // v1 + v2 >= 3 with the unit square
        let p = unit_square().with_row(ints(&[-1, -1]), int(-3)).unwrap();
        assert_eq!(solve_checked(&p, &[1, 0], Sense::Max).status, LpStatus::Infeasible);
        let p = unit_square().with_row(ints(&[-1, -1]), int(-2)).unwrap();
        let out = solve_checked(&p, &[1, -1], Sense::Max);
        assert_eq!(out.point.unwrap(), ints(&[1, 1]));
    }

    #[test]
    fn lex_on_interval() {
        let p = poly(&[&[1], &[-1]], &[1, 0]);
        let out = solve_lex_lp(&p, &ints(&[0]), Sense::Max, &ints(&[1]), Sense::Min).unwrap();
        assert_eq!(out.point, ints(&[0]));
        assert_eq!(out.value, int(0));
        let out = solve_lex_lp(&p, &ints(&[0]), Sense::Max, &ints(&[1]), Sense::Max).unwrap();
        assert_eq!(out.point, ints(&[1]));
        assert_eq!(out.value, int(1));
    }

    #[test]
    fn lex_selects_vertex() {
        let out = solve_lex_lp(&triangle(), &ints(&[1, 1]), Sense::Max, &ints(&[1, 0]), Sense::Max).unwrap();
        assert_eq!(out.point, ints(&[1, 0]));
        assert_eq!(out.primary_value, int(1));
        let plain = solve_lp(&triangle(), &ints(&[1, 1]), Sense::Max).unwrap();
        assert_eq!(plain.value.unwrap(), out.primary_value);
    }

    #[test]
    fn lex_errors() {
        let empty = poly(&[&[1], &[-1]], &[0, -1]);
        assert_eq!(
            solve_lex_lp(&empty, &ints(&[1]), Sense::Max, &ints(&[1]), Sense::Max),
            Err(LpError::Infeasible)
        );
        let ray = poly(&[&[-1]], &[0]);
        assert_eq!(
            solve_lex_lp(&ray, &ints(&[1]), Sense::Max, &ints(&[1]), Sense::Max),
            Err(LpError::Unbounded)
        );
    }

    #[test]
    fn extent_checks() {
        assert_eq!(check_bounded_nonempty(&unit_square()), Extent { nonempty: true, bounded: Some(true) });
        assert_eq!(
            check_bounded_nonempty(&poly(&[&[-1]], &[0])),
            Extent { nonempty: true, bounded: Some(false) }
        );
        assert_eq!(
            check_bounded_nonempty(&poly(&[&[1], &[-1]], &[0, -1])),
            Extent { nonempty: false, bounded: None }
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(solve_lp(&unit_square(), &ints(&[1]), Sense::Max), Err(LpError::Numeric(_))));
        assert!(Polyhedron::new(Matrix::zeros(0, 2), vec![]).is_err());
    }

    #[test]
    fn deterministic_points() {
        let p = unit_square();
        let a = solve_lp(&p, &ints(&[0, 0]), Sense::Max).unwrap();
        let b = solve_lp(&p, &ints(&[0, 0]), Sense::Max).unwrap();
        assert_eq!(a, b);
    }
}
