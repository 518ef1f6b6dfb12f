//! Leader enumeration for the certain and robust problems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{adversary, follower_response, BilevelError, Caps, LeaderSet, Mode, RobustBilevelInstance};
use crate::numeric::{Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub leader_x: Vector,
    pub value: Rational,
    /// Scenario the follower faced at `leader_x`.
    pub worst_scenario: Vector,
    pub follower_y: Vector,
    /// Every enumerated `x` with its value.
    pub trace: Vec<(Vector, Rational)>,
}

fn better(value: &Rational, x: &[Rational], best: &SolveReport) -> bool {
    *value > best.value || (*value == best.value && x < best.leader_x.as_slice())
}

fn leader_loop(
    inst: &RobustBilevelInstance,
    caps: &Caps,
    mut evaluate: impl FnMut(&[Rational]) -> Result<(Vector, Rational, Vector), BilevelError>,
) -> Result<SolveReport, BilevelError> {
    let mut best: Option<SolveReport> = None;
    let mut trace = Vec::new();
    for x in inst.leader_points(caps)? {
        let (scenario, value, y) = evaluate(&x)?;
        trace.push((x.clone(), value.clone()));
        if best.as_ref().is_none_or(|b| better(&value, &x, b)) {
            best = Some(SolveReport { leader_x: x, value, worst_scenario: scenario, follower_y: y, trace: Vec::new() });
        }
    }
    let mut report = best.expect("leader sets are nonempty");
    report.trace = trace;
    Ok(report)
}

/// The leader's problem for a known follower objective `c`.
pub fn solve_certain(inst: &RobustBilevelInstance, c: &[Rational], mode: Mode, caps: &Caps) -> Result<SolveReport, BilevelError> {
    leader_loop(inst, caps, |x| {
        let (y, value) = follower_response(inst, x, c, mode)?;
        Ok((c.to_vec(), value, y))
    })
}

/// The robust counterpart: the best `x` against the worst scenario.
/// Relaxed leader sets are enumerated over their binary points.
pub fn solve_robust(inst: &RobustBilevelInstance, mode: Mode, caps: &Caps) -> Result<SolveReport, BilevelError> {
    leader_loop(inst, caps, |x| {
        let out = adversary(inst, x, mode, caps)?;
        Ok((out.scenario, out.value, out.follower_y))
    })
}

/// Seeded fractional points of `[0,1]^p` with denominators in `2..=64`;
/// every sample has at least one non-integral coordinate.
pub fn fractional_leader_samples(p: usize, count: usize, seed: u64) -> Vec<Vector> {
    if p == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut x: Vector = (0..p)
                .map(|_| {
                    let den: i64 = rng.gen_range(2..=64);
                    Rational::new(rng.gen_range(0..=den), den).expect("nonzero denominator")
                })
                .collect();
            if x.iter().all(Rational::is_integer) {
                let i = rng.gen_range(0..p);
                let den: i64 = rng.gen_range(2..=64);
                x[i] = Rational::new(rng.gen_range(1..den), den).expect("nonzero denominator");
            }
            x
        })
        .collect()
}

impl RobustBilevelInstance {
    /// Whether `x` lies in the leader set.
    pub fn admits(&self, x: &[Rational]) -> bool {
        if x.len() != self.p {
            return false;
        }
        let unit = |v: &Rational| !v.is_negative() && *v <= Rational::one();
        match &self.leader_set {
            LeaderSet::AllBinary => x.iter().all(|v| v.is_zero() || *v == Rational::one()),
            LeaderSet::RelaxedBox => x.iter().all(unit),
            LeaderSet::Explicit { points } => points.iter().any(|pt| pt == x),
        }
    }
}
