//! Brute-force references for formulas, robust single-level problems and
//! robust bilevel instances.
//!
//! Nothing here calls into the LP, geometry or bilevel solvers except to
//! fetch the value being checked.

pub mod reference_lp;

use thiserror::Error;

use crate::bilevel::{solve_robust, BilevelError, Caps, LeaderSet, Mode, RobustBilevelInstance};
use crate::compiler::{Expr, Formula};
use crate::numeric::{Rational, Vector};
use crate::uncertainty::UncertaintySet;
use reference_lp::{maximize, RefOutcome};

/// Default limit on variables in a truth-table enumeration.
pub const DEFAULT_VARIABLE_CAP: usize = 22;
/// Default limit on `|X| · |scenarios|` for the single-level oracle.
pub const DEFAULT_PAIR_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what}: {needed} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },
    #[error("reference {0} does not apply to this uncertainty set")]
    Inapplicable(&'static str),
    #[error("follower problem at x = {0} is infeasible or unbounded")]
    BadFollower(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("solver under test failed: {0}")]
    Solver(#[from] BilevelError),
}

fn truth(e: &Expr, x: &[bool], y: &[bool]) -> bool {
    match e {
        Expr::X(i) => x[*i],
        Expr::Y(j) => y[*j],
        Expr::Not(a) => !truth(a, x, y),
        Expr::And(a, b) => truth(a, x, y) & truth(b, x, y),
        Expr::Or(a, b) => truth(a, x, y) | truth(b, x, y),
    }
}

fn assignment(bits: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> (len - 1 - i) & 1 == 1).collect()
}

fn check_vars(count: usize, cap: usize) -> Result<(), OracleError> {
    if count > cap {
        return Err(OracleError::CapExceeded { what: "formula variables", needed: count as u128, cap: cap as u128 });
    }
    Ok(())
}

/// Whether some assignment to all variables satisfies `f`.
pub fn sat_oracle(f: &Formula, cap: usize) -> Result<bool, OracleError> {
    check_vars(f.p + f.n, cap)?;
    Ok((0u64..1 << (f.p + f.n)).any(|k| {
        let all = assignment(k, f.p + f.n);
        truth(&f.root, &all[..f.p], &all[f.p..])
    }))
}

/// `∃x ∀y f(x, y)`.
pub fn qsat_oracle(f: &Formula, cap: usize) -> Result<bool, OracleError> {
    check_vars(f.p + f.n, cap)?;
    Ok((0u64..1 << f.p).any(|kx| {
        let x = assignment(kx, f.p);
        (0u64..1 << f.n).all(|ky| truth(&f.root, &x, &assignment(ky, f.n)))
    }))
}

/// Whether `f(x, ·)` holds for every `y`.
pub fn tautology_at(f: &Formula, x: &[bool], cap: usize) -> Result<bool, OracleError> {
    check_vars(f.n, cap)?;
    Ok((0u64..1 << f.n).all(|ky| truth(&f.root, x, &assignment(ky, f.n))))
}

/// `max_{x∈X} min_{c} c·x`.
pub fn robust_single_level_oracle(x_set: &[Vector], scenarios: &[Vector], cap: u128) -> Result<Rational, OracleError> {
    let pairs = x_set.len() as u128 * scenarios.len() as u128;
    if pairs > cap {
        return Err(OracleError::CapExceeded { what: "leader-scenario pairs", needed: pairs, cap });
    }
    if x_set.is_empty() || scenarios.is_empty() {
        return Err(OracleError::Dimension("empty leader set or scenario list".into()));
    }
    let mut best: Option<Rational> = None;
    for x in x_set {
        let mut worst: Option<Rational> = None;
        for c in scenarios {
            if c.len() != x.len() {
                return Err(OracleError::Dimension(format!("scenario length {} vs leader length {}", c.len(), x.len())));
            }
            let v: Rational = c.iter().zip(x).map(|(a, b)| a * b).sum();
            if worst.as_ref().is_none_or(|w| v < *w) {
                worst = Some(v);
            }
        }
        let worst = worst.expect("nonempty scenarios");
        if best.as_ref().is_none_or(|b| worst > *b) {
            best = Some(worst);
        }
    }
    Ok(best.expect("nonempty leader set"))
}

/// What `cross_validate` compares the solver against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Plain scenario-by-scenario enumeration of a discrete set; must match exactly.
    DiscreteEnumeration,
    /// Box vertices of an interval set, or the listed points of a hull; an upper bound.
    VertexSample,
    /// `k` evenly spaced values per free interval coordinate, or hull points
    /// with all pairwise midpoints; an upper bound.
    GridSample(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub expected: Rational,
    pub actual: Rational,
    /// `expected == actual` exactly.
    pub agree: bool,
    /// Whether the required relation holds: equality for exact references,
    /// `actual <= expected` for samples of the uncertainty set.
    pub consistent: bool,
    /// First leader decision where the relation fails, if any.
    pub witness: Option<String>,
}

fn describe(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn leader_decisions(inst: &RobustBilevelInstance, caps: &Caps) -> Result<Vec<Vector>, OracleError> {
    match &inst.leader_set {
        LeaderSet::Explicit { points } => Ok(points.clone()),
        LeaderSet::AllBinary | LeaderSet::RelaxedBox => {
            if inst.p > caps.max_leader_bits as usize {
                return Err(OracleError::CapExceeded {
                    what: "leader bits",
                    needed: inst.p as u128,
                    cap: caps.max_leader_bits as u128,
                });
            }
            Ok((0u64..1 << inst.p)
                .map(|k| assignment(k, inst.p).into_iter().map(|b| Rational::from_int(b as i64)).collect())
                .collect())
        }
    }
}

/// Leader value of the follower's tie-broken optimum, from scratch.
fn follower_value(inst: &RobustBilevelInstance, x: &[Rational], c: &[Rational], mode: Mode) -> Result<Rational, OracleError> {
    let mut rows: Vec<Vector> = (0..inst.a.rows()).map(|i| inst.a.row(i).to_vec()).collect();
    let mut rhs: Vector = (0..inst.a.rows())
        .map(|i| {
            let shift: Rational = inst.b_mat.row(i).iter().zip(x).map(|(b, xv)| b * xv).sum();
            &shift + &inst.b[i]
        })
        .collect();
    let bad = || OracleError::BadFollower(describe(x));
    let RefOutcome::Optimal { value: best, .. } = maximize(&rows, &rhs, c) else {
        return Err(bad());
    };
    rows.push(c.to_vec());
    rhs.push(best.clone());
    rows.push(c.iter().map(|v| -v).collect());
    rhs.push(-&best);
    let d: Vector = match mode {
        Mode::Optimistic => inst.d.clone(),
        Mode::Pessimistic => inst.d.iter().map(|v| -v).collect(),
    };
    let RefOutcome::Optimal { value, .. } = maximize(&rows, &rhs, &d) else {
        return Err(bad());
    };
    Ok(match mode {
        Mode::Optimistic => value,
        Mode::Pessimistic => -value,
    })
}

fn sample_scenarios(u: &UncertaintySet, reference: Reference, cap: u128) -> Result<Vec<Vector>, OracleError> {
    let too_many = |needed: u128| OracleError::CapExceeded { what: "sampled scenarios", needed, cap };
    let product = |values: &[Vec<Rational>]| -> Result<Vec<Vector>, OracleError> {
        let count = values.iter().try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128)).unwrap_or(u128::MAX);
        if count > cap {
            return Err(too_many(count));
        }
        let mut out: Vec<Vector> = vec![Vec::new()];
        for vals in values {
            out = out.iter().flat_map(|pre| vals.iter().map(move |v| [pre.as_slice(), std::slice::from_ref(v)].concat())).collect();
        }
        Ok(out)
    };
    match (u, reference) {
        (UncertaintySet::Discrete { scenarios }, Reference::DiscreteEnumeration) => Ok(scenarios.clone()),
        (UncertaintySet::ProductFinite { values }, Reference::DiscreteEnumeration) => product(values),
        (_, Reference::DiscreteEnumeration) => Err(OracleError::Inapplicable("discrete enumeration")),
        (UncertaintySet::Interval { lower, upper }, Reference::VertexSample) => {
            let values: Vec<Vec<Rational>> = lower
                .iter()
                .zip(upper)
                .map(|(l, h)| if l == h { vec![l.clone()] } else { vec![l.clone(), h.clone()] })
                .collect();
            product(&values)
        }
        (UncertaintySet::Interval { lower, upper }, Reference::GridSample(k)) => {
            let k = k.max(2);
            let values: Vec<Vec<Rational>> = lower
                .iter()
                .zip(upper)
                .map(|(l, h)| {
                    if l == h {
                        return vec![l.clone()];
                    }
                    let step = &(h - l) / &Rational::from_int(k as i64 - 1);
                    (0..k).map(|i| l + &(&step * &Rational::from_int(i as i64))).collect()
                })
                .collect();
            product(&values)
        }
        (UncertaintySet::ConvexHull { points }, Reference::VertexSample) => Ok(points.clone()),
        (UncertaintySet::ConvexHull { points }, Reference::GridSample(_)) => {
            let half = Rational::new(1, 2).expect("nonzero");
            let mut out = points.clone();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    out.push(points[i].iter().zip(&points[j]).map(|(a, b)| &(a + b) * &half).collect());
                }
            }
            Ok(out)
        }
        (UncertaintySet::Discrete { .. } | UncertaintySet::ProductFinite { .. }, _) => {
            Err(OracleError::Inapplicable("sampling of a finite set"))
        }
    }
}

/// Compares `solve_robust` against an independent enumeration over the
/// scenarios chosen by `reference`.
pub fn cross_validate(
    inst: &RobustBilevelInstance,
    mode: Mode,
    reference: Reference,
    caps: &Caps,
) -> Result<OracleVerdict, OracleError> {
    let scenarios = sample_scenarios(&inst.uncertainty, reference, caps.grid_cap)?;
    let exact = reference == Reference::DiscreteEnumeration;
    let report = solve_robust(inst, mode, caps)?;
    let mut expected: Option<Rational> = None;
    let mut witness = None;
    for x in leader_decisions(inst, caps)? {
        let mut worst: Option<Rational> = None;
        for c in &scenarios {
            let v = follower_value(inst, &x, c, mode)?;
            if worst.as_ref().is_none_or(|w| v < *w) {
                worst = Some(v);
            }
        }
        let worst = worst.ok_or(OracleError::Inapplicable("empty scenario list"))?;
        let solver_at_x = report.trace.iter().find(|(tx, _)| *tx == x).map(|(_, v)| v.clone());
        let fine = match &solver_at_x {
            Some(v) if exact => *v == worst,
            Some(v) => *v <= worst,
            None => false,
        };
        if !fine && witness.is_none() {
            witness = Some(format!(
                "x = {}: solver {}, reference {}",
                describe(&x),
                solver_at_x.map_or("missing".into(), |v| v.to_string()),
                worst
            ));
        }
        if expected.as_ref().is_none_or(|e| worst > *e) {
            expected = Some(worst);
        }
    }
    let expected = expected.ok_or(OracleError::Dimension("empty leader set".into()))?;
    let actual = report.value;
    let agree = expected == actual;
    let consistent = witness.is_none() && if exact { agree } else { actual <= expected };
    Ok(OracleVerdict { expected, actual, agree, consistent, witness })
}
