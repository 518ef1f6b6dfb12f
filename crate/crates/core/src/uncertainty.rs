//! Uncertainty sets for the follower's objective vector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{solve_lp, LpError, Polyhedron, Sense};
use crate::numeric::{unit_vector, Matrix, Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UncertaintyError {
    #[error("uncertainty set is empty")]
    Empty,
    #[error("uncertainty vector {index} has dimension {found}, expected {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("interval coordinate {0} has lower bound above upper bound")]
    Inverted(usize),
    #[error("{what} has {count} points, over the cap of {cap}")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },
}

/// Set of scenarios the follower's objective `c` may take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UncertaintySet {
    /// Box `[lower, upper]`.
    Interval { lower: Vector, upper: Vector },
    /// Explicit finite scenario list.
    Discrete { scenarios: Vec<Vector> },
    /// Convex hull of the listed points.
    ConvexHull { points: Vec<Vector> },
    /// Coordinatewise product of finite value lists.
    ProductFinite { values: Vec<Vec<Rational>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UncertaintyKind {
    Interval,
    Discrete,
    ConvexHull,
    ProductFinite,
}

impl UncertaintySet {
    pub fn kind(&self) -> UncertaintyKind {
        match self {
            UncertaintySet::Interval { .. } => UncertaintyKind::Interval,
            UncertaintySet::Discrete { .. } => UncertaintyKind::Discrete,
            UncertaintySet::ConvexHull { .. } => UncertaintyKind::ConvexHull,
            UncertaintySet::ProductFinite { .. } => UncertaintyKind::ProductFinite,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            UncertaintySet::Interval { lower, .. } => lower.len(),
            UncertaintySet::Discrete { scenarios: v } | UncertaintySet::ConvexHull { points: v } => {
                v.first().map_or(0, Vec::len)
            }
            UncertaintySet::ProductFinite { values } => values.len(),
        }
    }

    /// Checks the structural invariants against the expected dimension.
    pub fn validate(&self, n: usize) -> Result<(), UncertaintyError> {
        match self {
            UncertaintySet::Interval { lower, upper } => {
                for (index, v) in [lower, upper].into_iter().enumerate() {
                    if v.len() != n {
                        return Err(UncertaintyError::Dimension { index, expected: n, found: v.len() });
                    }
                }
                if let Some(i) = (0..n).find(|&i| lower[i] > upper[i]) {
                    return Err(UncertaintyError::Inverted(i));
                }
            }
            UncertaintySet::Discrete { scenarios: v } | UncertaintySet::ConvexHull { points: v } => {
                if v.is_empty() {
                    return Err(UncertaintyError::Empty);
                }
                if let Some((index, bad)) = v.iter().enumerate().find(|(_, c)| c.len() != n) {
                    return Err(UncertaintyError::Dimension { index, expected: n, found: bad.len() });
                }
            }
            UncertaintySet::ProductFinite { values } => {
                if values.len() != n {
                    return Err(UncertaintyError::Dimension { index: 0, expected: n, found: values.len() });
                }
                if values.iter().any(Vec::is_empty) {
                    return Err(UncertaintyError::Empty);
                }
            }
        }
        Ok(())
    }

    /// Every point of a product grid, in lexicographic index order.
    pub fn grid_points(values: &[Vec<Rational>], cap: u128) -> Result<Vec<Vector>, UncertaintyError> {
        let count = values.iter().try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128));
        match count {
            Some(c) if c <= cap => {}
            _ => {
                return Err(UncertaintyError::CapExceeded {
                    what: "product grid",
                    count: count.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let mut out = vec![Vec::with_capacity(values.len())];
        for coordinate in values {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    coordinate.iter().map(move |x| {
                        let mut next = prefix.clone();
                        next.push(x.clone());
                        next
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Vertices `{lower_i, upper_i}^n` of a box, deduplicated per coordinate.
    pub fn box_vertices(lower: &[Rational], upper: &[Rational], cap: u128) -> Result<Vec<Vector>, UncertaintyError> {
        let values: Vec<Vec<Rational>> = lower
            .iter()
            .zip(upper)
            .map(|(l, u)| if l == u { vec![l.clone()] } else { vec![l.clone(), u.clone()] })
            .collect();
        Self::grid_points(&values, cap)
    }

    /// Whether `c` is a scenario of the set; hull membership is decided by an LP.
    pub fn contains(&self, c: &[Rational]) -> bool {
        if c.len() != self.dim() {
            return false;
        }
        match self {
            UncertaintySet::Interval { lower, upper } => (0..c.len()).all(|i| lower[i] <= c[i] && c[i] <= upper[i]),
            UncertaintySet::Discrete { scenarios } => scenarios.iter().any(|s| s.as_slice() == c),
            UncertaintySet::ProductFinite { values } => values.iter().zip(c).all(|(vals, v)| vals.contains(v)),
            UncertaintySet::ConvexHull { points } => in_hull(points, c),
        }
    }
}

fn in_hull(points: &[Vector], c: &[Rational]) -> bool {
    let k = points.len();
    let rows = (0..k).map(|i| unit_vector(k, i).iter().map(|v| -v).collect()).collect();
    let Ok(mut poly) = Matrix::from_rows(rows, k).map_err(LpError::from).and_then(|a| Polyhedron::new(a, vec![Rational::zero(); k]))
    else {
        return false;
    };
    let mut equalities = vec![(vec![Rational::one(); k], Rational::one())];
    equalities.extend((0..c.len()).map(|j| (points.iter().map(|h| h[j].clone()).collect(), c[j].clone())));
    for (row, value) in &equalities {
        match poly.with_equality(row, value) {
            Ok(next) => poly = next,
            Err(_) => return false,
        }
    }
    solve_lp(&poly, &vec![Rational::zero(); k], Sense::Max).is_ok_and(|out| out.is_optimal())
}
