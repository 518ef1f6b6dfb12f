//! Oracle-equivalence sweeps over compiled instances, shared by the command
//! line and the test suites. Each check returns an [`Outcome`] instead of
//! panicking so callers can report every case.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bilevel::{
    adversary, adversary_discrete, binary_vectors, follower_response, fractional_leader_samples, solve_robust,
    BilevelError, Caps, LeaderSet, Mode, RobustBilevelInstance,
};
use crate::compiler::{
    box_to_simplex, compile_qsat_optimistic, compile_qsat_pessimistic, compile_single_level_robust, exhaustive_family,
    random_formula, relax_leader, Formula,
};
use crate::numeric::{int, Matrix, Rational, Vector};
use crate::oracle::{
    cross_validate, qsat_oracle, robust_single_level_oracle, tautology_at, OracleError, Reference, DEFAULT_PAIR_CAP,
    DEFAULT_VARIABLE_CAP,
};
use crate::uncertainty::UncertaintySet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    fn from_bilevel(e: BilevelError) -> Outcome {
        if e.is_cap() {
            Outcome::Skip(e.to_string())
        } else {
            Outcome::Fail(e.to_string())
        }
    }

    fn from_oracle(e: OracleError) -> Outcome {
        match e {
            OracleError::CapExceeded { .. } => Outcome::Skip(e.to_string()),
            OracleError::Solver(b) => Outcome::from_bilevel(b),
            other => Outcome::Fail(other.to_string()),
        }
    }

    /// The first non-passing outcome, or `Pass`.
    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut skip = None;
        for o in outcomes {
            match o {
                Outcome::Pass => {}
                Outcome::Fail(_) => return o,
                Outcome::Skip(_) => skip = skip.or(Some(o)),
            }
        }
        skip.unwrap_or(Outcome::Pass)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => write!(f, "pass"),
            Outcome::Fail(why) => write!(f, "FAIL: {why}"),
            Outcome::Skip(why) => write!(f, "skipped: {why}"),
        }
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Outcome::from_bilevel(err),
        }
    };
}

macro_rules! oracle {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Outcome::from_oracle(err),
        }
    };
}

/// Which formulas a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyConfig {
    pub max_p: usize,
    pub max_n: usize,
    /// Every expression up to this many leaves is included.
    pub exhaustive_leaves: usize,
    pub random_count: usize,
    pub random_max_leaves: usize,
    pub seed: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig { max_p: 2, max_n: 2, exhaustive_leaves: 2, random_count: 100, random_max_leaves: 9, seed: 2024 }
    }
}

/// The exhaustive family for every `p <= max_p`, `n <= max_n`, followed by
/// seeded random formulas with `1..=random_max_leaves` leaves.
pub fn qsat_family(cfg: &FamilyConfig) -> Vec<Formula> {
    let mut out = Vec::new();
    for p in 0..=cfg.max_p {
        for n in 0..=cfg.max_n {
            if p + n > 0 {
                out.extend(exhaustive_family(p, n, cfg.exhaustive_leaves));
            }
        }
    }
    if cfg.max_p + cfg.max_n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.random_count {
            let (p, n) = loop {
                let p = rng.gen_range(0..=cfg.max_p);
                let n = rng.gen_range(0..=cfg.max_n);
                if p + n > 0 {
                    break (p, n);
                }
            };
            let leaves = rng.gen_range(1..=cfg.random_max_leaves.max(1));
            out.push(random_formula(&mut rng, p, n, leaves));
        }
    }
    out
}

fn expected_value(f: &Formula) -> Result<Rational, Outcome> {
    qsat_oracle(f, DEFAULT_VARIABLE_CAP).map(|yes| int(yes as i64)).map_err(Outcome::from_oracle)
}

fn compare(what: &str, got: &Rational, want: &Rational) -> Outcome {
    if got == want {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{what}: got {got}, expected {want}"))
    }
}

/// Robust value of the optimistic compilation is 1 exactly for yes-instances, else 0.
pub fn check_optimistic(f: &Formula, caps: &Caps) -> Outcome {
    let want = match expected_value(f) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let art = compile_qsat_optimistic(f);
    let report = attempt!(solve_robust(&art.instance, Mode::Optimistic, caps));
    compare("optimistic robust value", &report.value, &want)
}

/// Same as [`check_optimistic`] for the pessimistic compilation.
pub fn check_pessimistic(f: &Formula, caps: &Caps) -> Outcome {
    let want = match expected_value(f) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let art = compile_qsat_pessimistic(f);
    let report = attempt!(solve_robust(&art.instance, Mode::Pessimistic, caps));
    compare("pessimistic robust value", &report.value, &want)
}

fn bools(x: &[Rational]) -> Vec<bool> {
    x.iter().map(|v| !v.is_zero()).collect()
}

/// For every binary `x`, the adversary's value on the optimistic
/// compilation is 1 exactly when `f(x, ·)` is a tautology.
pub fn check_cosat(f: &Formula, caps: &Caps) -> Outcome {
    let art = compile_qsat_optimistic(f);
    for x in binary_vectors(f.p) {
        let taut = oracle!(tautology_at(f, &bools(&x), DEFAULT_VARIABLE_CAP));
        let got = attempt!(adversary(&art.instance, &x, Mode::Optimistic, caps)).value;
        let want = int(taut as i64);
        if got != want {
            return Outcome::Fail(format!("adversary at x = {x:?}: got {got}, expected {want}"));
        }
    }
    Outcome::Pass
}

/// The relaxed-leader compilation has the same binary optimum, and no
/// sampled fractional leader decision does better.
pub fn check_relaxation(f: &Formula, caps: &Caps, samples: usize, seed: u64) -> Outcome {
    let art = compile_qsat_optimistic(f);
    let plain = attempt!(solve_robust(&art.instance, Mode::Optimistic, caps)).value;
    let relaxed = relax_leader(&art);
    let binary = attempt!(solve_robust(&relaxed.instance, Mode::Optimistic, caps)).value;
    if binary != plain {
        return Outcome::Fail(format!("relaxed binary value {binary} differs from {plain}"));
    }
    for x in fractional_leader_samples(f.p, samples, seed) {
        let v = attempt!(adversary(&relaxed.instance, &x, Mode::Optimistic, caps)).value;
        if v > binary {
            return Outcome::Fail(format!("fractional x = {x:?} reaches {v} > {binary}"));
        }
    }
    Outcome::Pass
}

/// With some `c_i` strictly inside `(-1, 1)`, the pessimistic follower sets
/// `(y_i, ȳ_i) = (1/2, 1/2)` and the leader gets at least `M/2`.
pub fn check_gadget(f: &Formula, rng: &mut impl Rng) -> Outcome {
    if f.n == 0 {
        return Outcome::Skip("no follower variables".into());
    }
    let art = compile_qsat_pessimistic(f);
    let inst = &art.instance;
    let big_m = art.big_m.clone().expect("qsat compilations carry M");
    let UncertaintySet::Interval { lower, .. } = &inst.uncertainty else {
        return Outcome::Fail("pessimistic compilation lost its interval set".into());
    };
    let half = Rational::new(1, 2).expect("nonzero");
    let ybar = |i: usize| art.var_map.iter().position(|s| *s == format!("ybar{}", i + 1)).expect("gadget column");
    for x in binary_vectors(f.p) {
        let mut c = lower.clone();
        let mut inner = Vec::new();
        for (i, ci) in c.iter_mut().enumerate().take(f.n) {
            if i == 0 || rng.gen_bool(0.5) {
                let den: i64 = rng.gen_range(1..=8);
                *ci = Rational::new(rng.gen_range(-den + 1..den), den).expect("nonzero");
                inner.push(i);
            } else {
                *ci = int(if rng.gen_bool(0.5) { 1 } else { -1 });
            }
        }
        let (y, value) = attempt!(follower_response(inst, &x, &c, Mode::Pessimistic));
        for &i in &inner {
            if y[i] != half || y[ybar(i)] != half {
                return Outcome::Fail(format!("c = {c:?}: (y{0}, ybar{0}) = ({1}, {2})", i + 1, y[i], y[ybar(i)]));
            }
        }
        if value < &big_m * &half {
            return Outcome::Fail(format!("c = {c:?}: leader value {value} below M/2"));
        }
    }
    Outcome::Pass
}

/// Replacing the `[-1,1]^n` box by the covering simplex leaves the robust value unchanged.
pub fn check_simplex(f: &Formula, caps: &Caps) -> Outcome {
    let art = compile_qsat_optimistic(f);
    let boxed = attempt!(solve_robust(&art.instance, Mode::Optimistic, caps)).value;
    let simplex = match box_to_simplex(&art) {
        Ok(s) => s,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let hull = attempt!(solve_robust(&simplex.instance, Mode::Optimistic, caps)).value;
    compare("simplex robust value", &hull, &boxed)
}

fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let den: i64 = rng.gen_range(1..=4);
    Rational::new(rng.gen_range(-bound * den..=bound * den), den).expect("nonzero")
}

/// A seeded robust single-level problem: `X ⊆ {0,1}^p` with `p <= 4`
/// and at most three scenarios with entries in `[-3, 3]`.
pub fn random_single_level(rng: &mut impl Rng) -> (Vec<Vector>, Vec<Vector>) {
    let p = rng.gen_range(1..=4usize);
    let mut xs: Vec<Vector> = binary_vectors(p).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    if xs.is_empty() {
        xs.push(binary_vectors(p).swap_remove(rng.gen_range(0..1 << p)));
    }
    let m = rng.gen_range(1..=3);
    let scenarios = (0..m).map(|_| (0..p).map(|_| random_rational(rng, 3)).collect()).collect();
    (xs, scenarios)
}

/// The single-level compilation matches the brute-force oracle in both
/// modes, and the follower's optimum at each scenario is `z = e_j`.
pub fn check_single_level(xs: &[Vector], scenarios: &[Vector], caps: &Caps) -> Outcome {
    let want = oracle!(robust_single_level_oracle(xs, scenarios, DEFAULT_PAIR_CAP));
    let art = match compile_single_level_robust(xs, scenarios) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let inst = &art.instance;
    let opt = attempt!(solve_robust(inst, Mode::Optimistic, caps)).value;
    let pes = attempt!(solve_robust(inst, Mode::Pessimistic, caps)).value;
    if opt != want || pes != want {
        return Outcome::Fail(format!("optimistic {opt}, pessimistic {pes}, oracle {want}"));
    }
    let UncertaintySet::Discrete { scenarios: units } = &inst.uncertainty else {
        return Outcome::Fail("single-level compilation lost its scenario list".into());
    };
    for x in xs {
        for (j, c) in units.iter().enumerate() {
            let (y_opt, _) = attempt!(follower_response(inst, x, c, Mode::Optimistic));
            let (y_pes, _) = attempt!(follower_response(inst, x, c, Mode::Pessimistic));
            if y_opt != y_pes {
                return Outcome::Fail(format!("follower optimum at x = {x:?}, scenario {j} is not unique"));
            }
            let z = &y_opt[1..=units.len()];
            if z.iter().enumerate().any(|(k, v)| *v != int((k == j) as i64)) {
                return Outcome::Fail(format!("z = {z:?} at scenario {j}"));
            }
        }
    }
    Outcome::Pass
}

/// A seeded discrete-uncertainty instance with `p, n <= 3`, at most six
/// rows and at most `max_scenarios` scenarios. `y = 0` is always feasible and
/// a row `Σ y <= s + B x` with nonnegative data keeps every `Y(x)` bounded.
pub fn random_discrete_instance(rng: &mut impl Rng, max_scenarios: usize) -> RobustBilevelInstance {
    let p = rng.gen_range(0..=3usize);
    let n = rng.gen_range(1..=3usize);
    let extra = rng.gen_range(0..=6 - (n + 1));
    let mut a = Vec::new();
    let mut b_mat = Vec::new();
    let mut b = Vec::new();
    for j in 0..n {
        let mut row = vec![Rational::zero(); n];
        row[j] = int(-1);
        a.push(row);
        b_mat.push(vec![Rational::zero(); p]);
        b.push(Rational::zero());
    }
    a.push((0..n).map(|_| int(rng.gen_range(1..=3))).collect());
    b_mat.push((0..p).map(|_| int(rng.gen_range(0..=2))).collect());
    b.push(int(rng.gen_range(1..=4)));
    for _ in 0..extra {
        a.push((0..n).map(|_| int(rng.gen_range(-3..=3))).collect());
        b_mat.push((0..p).map(|_| int(rng.gen_range(0..=2))).collect());
        b.push(int(rng.gen_range(0..=4)));
    }
    let m = a.len();
    let k = rng.gen_range(1..=max_scenarios.max(1));
    RobustBilevelInstance {
        p,
        n,
        a: Matrix::from_rows(a, n).expect("row widths agree"),
        b_mat: if p == 0 { Matrix::zeros(m, 0) } else { Matrix::from_rows(b_mat, p).expect("row widths agree") },
        b,
        d: (0..n).map(|_| int(rng.gen_range(-3..=3))).collect(),
        leader_set: LeaderSet::AllBinary,
        uncertainty: UncertaintySet::Discrete {
            scenarios: (0..k).map(|_| (0..n).map(|_| int(rng.gen_range(-3..=3))).collect()).collect(),
        },
        mode_default: Mode::Optimistic,
        var_map: None,
        big_m: None,
    }
}

/// `solve_robust` agrees with the independent scenario enumeration in both modes.
pub fn check_discrete(inst: &RobustBilevelInstance, caps: &Caps) -> Outcome {
    let mut outcomes = Vec::new();
    for mode in [Mode::Optimistic, Mode::Pessimistic] {
        let verdict = oracle!(cross_validate(inst, mode, Reference::DiscreteEnumeration, caps));
        outcomes.push(if verdict.agree && verdict.consistent {
            Outcome::Pass
        } else {
            Outcome::Fail(format!(
                "{mode:?}: solver {}, reference {}{}",
                verdict.actual,
                verdict.expected,
                verdict.witness.map_or(String::new(), |w| format!(" ({w})"))
            ))
        });
    }
    Outcome::all(outcomes)
}

/// Runs the discrete adversary `reps` times at the first leader decision.
pub fn time_discrete_adversary(inst: &RobustBilevelInstance, reps: usize) -> Result<std::time::Duration, BilevelError> {
    let x = inst.leader_points(&Caps::default())?.swap_remove(0);
    let start = std::time::Instant::now();
    for _ in 0..reps {
        adversary_discrete(inst, &x, Mode::Optimistic)?;
    }
    Ok(start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::parse_formula;

    #[test]
    fn family_is_deterministic() {
        let cfg = FamilyConfig { random_count: 5, ..FamilyConfig::default() };
        assert_eq!(qsat_family(&cfg), qsat_family(&cfg));
        assert_eq!(qsat_family(&cfg).len(), 492 + 5);
    }

    #[test]
    fn checks_on_small_formulas() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for text in ["(or x1 y1)", "y1", "(and x1 (not y1))", "(or y1 (not y1))"] {
            let f = parse_formula(text, 1, 1).unwrap();
            assert_eq!(check_optimistic(&f, &caps), Outcome::Pass, "{text}");
            assert_eq!(check_pessimistic(&f, &caps), Outcome::Pass, "{text}");
            assert_eq!(check_cosat(&f, &caps), Outcome::Pass, "{text}");
            assert_eq!(check_relaxation(&f, &caps, 5, 3), Outcome::Pass, "{text}");
            assert_eq!(check_gadget(&f, &mut rng), Outcome::Pass, "{text}");
            assert_eq!(check_simplex(&f, &caps), Outcome::Pass, "{text}");
        }
    }

    #[test]
    fn random_cases_pass() {
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let (xs, cs) = random_single_level(&mut rng);
            assert_eq!(check_single_level(&xs, &cs, &caps), Outcome::Pass);
            let inst = random_discrete_instance(&mut rng, 4);
            inst.validate(&caps).unwrap();
            assert_eq!(check_discrete(&inst, &caps), Outcome::Pass);
        }
    }

    #[test]
    fn outcome_merge() {
        assert_eq!(Outcome::all([Outcome::Pass, Outcome::Skip("a".into())]), Outcome::Skip("a".into()));
        assert!(Outcome::all([Outcome::Skip("a".into()), Outcome::Fail("b".into())]).is_fail());
    }
}
