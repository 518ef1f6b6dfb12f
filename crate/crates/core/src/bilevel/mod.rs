//! Robust bilevel programs with an uncertain follower objective.
//!
//! The leader picks `x`, an adversary picks `c ∈ U`, and the follower solves
//! `max c·y` over `Y(x) = {y : A y <= B x + b}`, breaking ties for or against
//! the leader's objective `d·y`.

mod adversary;
mod io;
mod solve;

pub use adversary::{adversary, adversary_discrete, adversary_geometric, adversary_geometric_direct, AdversaryOutcome};
pub use io::{load_instance, save_instance};
pub use solve::{fractional_leader_samples, solve_certain, solve_robust, SolveReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lp::{check_bounded_nonempty, solve_lex_lp, LpError, Polyhedron, Sense};
use crate::numeric::{dot, Matrix, NumericError, Rational, Vector};
use crate::uncertainty::{UncertaintyError, UncertaintyKind, UncertaintySet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilevelError {
    #[error("follower feasible set is empty at x = {0}")]
    EmptyFollower(String),
    #[error("follower feasible set is unbounded at x = {0}")]
    UnboundedFollower(String),
    #[error("{0:?} uncertainty is not supported here")]
    WrongUncertainty(UncertaintyKind),
    #[error("{what}: {needed} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
}

impl BilevelError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            BilevelError::CapExceeded { .. }
                | BilevelError::Geometry(GeometryError::CapExceeded { .. })
                | BilevelError::Geometry(GeometryError::Uncertainty(UncertaintyError::CapExceeded { .. }))
                | BilevelError::Uncertainty(UncertaintyError::CapExceeded { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Optimistic,
    Pessimistic,
}

impl Mode {
    pub fn tie_sense(self) -> Sense {
        match self {
            Mode::Optimistic => Sense::Max,
            Mode::Pessimistic => Sense::Min,
        }
    }
}

/// Feasible leader decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeaderSet {
    /// `{0,1}^p`.
    AllBinary,
    Explicit { points: Vec<Vector> },
    /// `[0,1]^p`; solved over its binary points.
    RelaxedBox,
}

/// Limits that keep the exhaustive solvers at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_leader_bits: u32,
    pub vertex_cap: u64,
    pub face_cap: u64,
    pub grid_cap: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_leader_bits: 20,
            vertex_cap: crate::geometry::DEFAULT_VERTEX_CAP,
            face_cap: crate::geometry::DEFAULT_FACE_CAP,
            grid_cap: 1 << 20,
        }
    }
}

/// The full datum of a robust bilevel program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustBilevelInstance {
    pub p: usize,
    pub n: usize,
    pub a: Matrix,
    pub b_mat: Matrix,
    pub b: Vector,
    pub d: Vector,
    pub leader_set: LeaderSet,
    pub uncertainty: UncertaintySet,
    pub mode_default: Mode,
    pub var_map: Option<Vec<String>>,
    pub big_m: Option<Rational>,
}

pub(crate) fn fmt_vec(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", items.join(", "))
}

impl RobustBilevelInstance {
    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    /// Checks dimensions of every component.
    pub fn check_shape(&self) -> Result<(), BilevelError> {
        let m = self.a.rows();
        let bad = |msg: String| Err(BilevelError::Invalid(msg));
        if self.n == 0 || m == 0 {
            return bad("follower system needs at least one row and one column".into());
        }
        if self.a.cols() != self.n {
            return bad(format!("A has {} columns, expected n = {}", self.a.cols(), self.n));
        }
        if self.b_mat.rows() != m || self.b_mat.cols() != self.p {
            return bad(format!("B is {}x{}, expected {}x{}", self.b_mat.rows(), self.b_mat.cols(), m, self.p));
        }
        if self.b.len() != m {
            return bad(format!("b has length {}, expected {m}", self.b.len()));
        }
        if self.d.len() != self.n {
            return bad(format!("d has length {}, expected {}", self.d.len(), self.n));
        }
        if let LeaderSet::Explicit { points } = &self.leader_set {
            if points.is_empty() {
                return bad("explicit leader set is empty".into());
            }
            if let Some(x) = points.iter().find(|x| x.len() != self.p) {
                return bad(format!("leader point {} has dimension {}, expected {}", fmt_vec(x), x.len(), self.p));
            }
        }
        if let Some(names) = &self.var_map {
            if names.len() != self.n {
                return bad(format!("var_map names {} columns, expected {}", names.len(), self.n));
            }
        }
        self.uncertainty.validate(self.n)?;
        Ok(())
    }

    /// Shape checks plus nonemptiness and boundedness of `Y(x)` for every
    /// enumerated leader decision.
    pub fn validate(&self, caps: &Caps) -> Result<(), BilevelError> {
        self.check_shape()?;
        for x in self.leader_points(caps)? {
            let extent = check_bounded_nonempty(&self.follower_polyhedron(&x)?);
            if !extent.nonempty {
                return Err(BilevelError::EmptyFollower(fmt_vec(&x)));
            }
            if extent.bounded != Some(true) {
                return Err(BilevelError::UnboundedFollower(fmt_vec(&x)));
            }
        }
        Ok(())
    }

    /// `Y(x)` as a polyhedron.
    pub fn follower_polyhedron(&self, x: &[Rational]) -> Result<Polyhedron, BilevelError> {
        let shift = self.b_mat.mul_vec(x)?;
        let rhs: Vector = shift.iter().zip(&self.b).map(|(s, b)| s + b).collect();
        Ok(Polyhedron::new(self.a.clone(), rhs)?)
    }

    /// Leader decisions in enumeration order; binary vectors count up with
    /// `x_1` as the most significant bit.
    pub fn leader_points(&self, caps: &Caps) -> Result<Vec<Vector>, BilevelError> {
        match &self.leader_set {
            LeaderSet::Explicit { points } => Ok(points.clone()),
            LeaderSet::AllBinary | LeaderSet::RelaxedBox => {
                if self.p > caps.max_leader_bits as usize {
                    return Err(BilevelError::CapExceeded {
                        what: "leader bits",
                        needed: self.p as u128,
                        cap: caps.max_leader_bits as u128,
                    });
                }
                Ok(binary_vectors(self.p))
            }
        }
    }
}

/// `{0,1}^p` in lexicographic order.
pub fn binary_vectors(p: usize) -> Vec<Vector> {
    (0u64..1 << p)
        .map(|k| (0..p).map(|i| Rational::from_int((k >> (p - 1 - i) & 1) as i64)).collect())
        .collect()
}

/// The follower's optimal response to `c` at `x`, with ties broken by `mode`,
/// and the resulting leader value `d·y`.
pub fn follower_response(
    inst: &RobustBilevelInstance,
    x: &[Rational],
    c: &[Rational],
    mode: Mode,
) -> Result<(Vector, Rational), BilevelError> {
    if c.len() != inst.n {
        return Err(NumericError::DimensionMismatch { context: "scenario".into(), expected: inst.n, found: c.len() }.into());
    }
    if x.len() != inst.p {
        return Err(NumericError::DimensionMismatch { context: "leader decision".into(), expected: inst.p, found: x.len() }.into());
    }
    let poly = inst.follower_polyhedron(x)?;
    match solve_lex_lp(&poly, c, Sense::Max, &inst.d, mode.tie_sense()) {
        Ok(out) => {
            let value = dot(&inst.d, &out.point);
            Ok((out.point, value))
        }
        Err(LpError::Infeasible) => Err(BilevelError::EmptyFollower(fmt_vec(x))),
        Err(LpError::Unbounded) => Err(BilevelError::UnboundedFollower(fmt_vec(x))),
        Err(e) => Err(e.into()),
    }
}
