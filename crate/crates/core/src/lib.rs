//! Exact solvers and reductions for robust bilevel linear programs whose
//! follower objective is uncertain.
//!
//! All arithmetic is over exact rationals. The leader maximizes `d·y`, an
//! adversary picks the follower objective `c` from an uncertainty set, and
//! the follower solves an LP over `Y(x) = {y : A y <= B x + b}`.

pub mod bilevel;
pub mod compiler;
pub mod geometry;
pub mod lp;
pub mod numeric;
pub mod oracle;
pub mod uncertainty;
pub mod verify;

pub use bilevel::{Caps, LeaderSet, Mode, RobustBilevelInstance, SolveReport};
pub use compiler::{CompilationArtifacts, Formula};
pub use lp::{LpOutcome, LpStatus, Polyhedron, Sense};
pub use numeric::{Matrix, Rational, Vector};
pub use uncertainty::{UncertaintyKind, UncertaintySet};
