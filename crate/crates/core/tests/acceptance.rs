//! End-to-end acceptance: every reduction and solver checked against the
//! brute-force oracles with exact rational comparisons.
//!
//! One test runs all criteria in order, prints a PASS/FAIL line for each,
//! and fails at the end if any criterion failed.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use robilevel::bilevel::Caps;
use robilevel::compiler::Formula;
use robilevel::geometry::{enumerate_faces, enumerate_vertices, exposure_check};
use robilevel::lp::{audit, solve_lp, Polyhedron, Sense};
use robilevel::numeric::{dot, int, Matrix};
use robilevel::uncertainty::UncertaintySet;
use robilevel::verify::{self, FamilyConfig, Outcome};

const SEED: u64 = 2024;
const FRACTIONAL_SAMPLES: usize = 100;
const GADGET_INSTANCES: usize = 20;
const RANDOM_CASES: usize = 100;

struct Criterion {
    id: usize,
    title: &'static str,
    cases: usize,
    skipped: usize,
    failures: Vec<String>,
    elapsed: Duration,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{verdict}] criterion {}: {} ({} cases, {} skipped, {:.1}s)",
            self.id,
            self.title,
            self.cases,
            self.skipped,
            self.elapsed.as_secs_f64()
        );
        for f in self.failures.iter().take(5) {
            s.push_str(&format!("\n    {f}"));
        }
        s
    }
}

fn run<T: Sync>(id: usize, title: &'static str, items: &[T], check: impl Fn(&T) -> (String, Outcome) + Sync) -> Criterion {
    let start = Instant::now();
    let results: Vec<(String, Outcome)> = items.par_iter().map(&check).collect();
    let mut crit = Criterion { id, title, cases: results.len(), skipped: 0, failures: Vec::new(), elapsed: Duration::ZERO };
    for (name, outcome) in results {
        match outcome {
            Outcome::Pass => {}
            Outcome::Skip(_) => crit.skipped += 1,
            Outcome::Fail(why) => crit.failures.push(format!("{name}: {why}")),
        }
    }
    if crit.skipped > 0 {
        crit.failures.push(format!("{} cases skipped on caps", crit.skipped));
    }
    crit.elapsed = start.elapsed();
    crit
}

/// Straight to the process's stderr, so the report shows even when the harness captures output.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

fn named(f: &Formula) -> String {
    format!("p={} n={} {}", f.p, f.n, f)
}

fn poly(rows: &[&[i64]], rhs: &[i64]) -> Polyhedron {
    Polyhedron::new(
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), rows[0].len()).unwrap(),
        rhs.iter().map(|&x| int(x)).collect(),
    )
    .unwrap()
}

fn geometry_fixtures() -> (String, Outcome) {
    let fixtures = [
        ("interval", poly(&[&[1], &[-1]], &[1, 0]), 3),
        ("square", poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[1, 0, 1, 0]), 9),
        ("triangle", poly(&[&[1, 1], &[-1, 0], &[0, -1]], &[1, 0, 0]), 7),
    ];
    let sets = [
        UncertaintySet::Interval { lower: vec![int(-1), int(-1)], upper: vec![int(1), int(1)] },
        UncertaintySet::ConvexHull { points: vec![vec![int(1), int(-2)], vec![int(-1), int(1)], vec![int(0), int(3)]] },
    ];
    let mut outcomes = Vec::new();
    for (name, p, expected) in fixtures {
        let vs = enumerate_vertices(&p, 1000).unwrap();
        let faces = enumerate_faces(&p, &vs, 1 << 12).unwrap();
        if faces.len() != expected {
            outcomes.push(Outcome::Fail(format!("{name}: {} faces, expected {expected}", faces.len())));
        }
        let dim = p.dim();
        let mut exposed = 0;
        for u in &sets {
            let u = match u {
                UncertaintySet::Interval { lower, upper } => {
                    UncertaintySet::Interval { lower: lower[..dim].to_vec(), upper: upper[..dim].to_vec() }
                }
                UncertaintySet::ConvexHull { points } => {
                    UncertaintySet::ConvexHull { points: points.iter().map(|h| h[..dim].to_vec()).collect() }
                }
                other => other.clone(),
            };
            for face in &faces {
                let Some(cert) = exposure_check(face, &vs, &u, 1000).unwrap() else { continue };
                exposed += 1;
                let best = solve_lp(&p, &cert.c, Sense::Max).unwrap().value.unwrap();
                let argmax: Vec<usize> = (0..vs.len()).filter(|&i| dot(&cert.c, &vs.vertices[i]) == best).collect();
                if argmax != face.vertex_indices {
                    outcomes.push(Outcome::Fail(format!("{name}: certificate {:?} exposes {argmax:?}, not {:?}", cert.c, face.vertex_indices)));
                }
            }
        }
        if exposed == 0 {
            outcomes.push(Outcome::Fail(format!("{name}: no face exposed")));
        }
    }
    ("fixtures".into(), Outcome::all(outcomes))
}

/// Best of several timings of the discrete adversary with `|U|` and `2|U|` scenarios.
fn scaling_ratio() -> (f64, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let base = verify::random_discrete_instance(&mut rng, 1);
    let mut inst = base.clone();
    let UncertaintySet::Discrete { scenarios } = &base.uncertainty else { unreachable!() };
    let small: Vec<_> = (0..8).map(|k| scenarios[0].iter().map(|v| v + &int(k % 3 - 1)).collect()).collect();
    let large: Vec<_> = small.iter().chain(small.iter()).cloned().collect();
    let best = |inst: &robilevel::RobustBilevelInstance| {
        (0..7).map(|_| verify::time_discrete_adversary(inst, 40).unwrap()).min().unwrap()
    };
    inst.uncertainty = UncertaintySet::Discrete { scenarios: small };
    let t_small = best(&inst);
    inst.uncertainty = UncertaintySet::Discrete { scenarios: large };
    let t_large = best(&inst);
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64();
    (ratio, format!("|U| 8 -> 16: {:?} -> {:?}, ratio {ratio:.2}", t_small, t_large))
}

#[test]
fn acceptance_criteria() {
    let caps = Caps::default();
    audit::enable(true);
    let family = verify::qsat_family(&FamilyConfig { seed: SEED, ..FamilyConfig::default() });
    let mut criteria = Vec::new();

    criteria.push(run(1, "optimistic QSAT compilation equals the QSAT oracle", &family, |f| {
        (named(f), verify::check_optimistic(f, &caps))
    }));

    let gadget_family: Vec<(usize, &Formula)> = family.iter().filter(|f| f.n > 0).step_by(7).take(GADGET_INSTANCES).enumerate().collect();
    let mut c2 = run(2, "pessimistic QSAT compilation equals the QSAT oracle; gadget forced to (1/2, 1/2)", &family, |f| {
        (named(f), verify::check_pessimistic(f, &caps))
    });
    let gadget = run(2, "", &gadget_family, |(k, f)| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + *k as u64);
        (format!("gadget {}", named(f)), verify::check_gadget(f, &mut rng))
    });
    c2.cases += gadget.cases;
    c2.failures.extend(gadget.failures);
    if gadget_family.len() < GADGET_INSTANCES {
        c2.failures.push(format!("only {} gadget instances", gadget_family.len()));
    }
    c2.elapsed += gadget.elapsed;
    criteria.push(c2);

    let indexed: Vec<(usize, &Formula)> = family.iter().enumerate().collect();
    criteria.push(run(3, "relaxed leader: same binary value, no better fractional sample", &indexed, |(k, f)| {
        (named(f), verify::check_relaxation(f, &caps, FRACTIONAL_SAMPLES, SEED + *k as u64))
    }));

    criteria.push(run(4, "adversary value is 1 iff the negated formula is unsatisfiable", &family, |f| {
        (named(f), verify::check_cosat(f, &caps))
    }));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let single_level: Vec<_> = (0..RANDOM_CASES).map(|_| verify::random_single_level(&mut rng)).collect();
    criteria.push(run(5, "single-level compilation equals the robust single-level oracle in both modes", &single_level, |(xs, cs)| {
        (format!("X = {xs:?}, C = {cs:?}"), verify::check_single_level(xs, cs, &caps))
    }));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let discrete: Vec<_> = (0..RANDOM_CASES).map(|_| verify::random_discrete_instance(&mut rng, 4)).collect();
    let mut c6 = run(6, "discrete robust solve equals independent enumeration; adversary linear in |U|", &discrete, |inst| {
        let valid = inst.validate(&caps).map(|_| Outcome::Pass).unwrap_or_else(|e| Outcome::Fail(e.to_string()));
        (format!("{inst:?}"), Outcome::all([valid, verify::check_discrete(inst, &caps)]))
    });
    let (ratio, timing) = scaling_ratio();
    report(&format!("    scenario scaling: {timing}"));
    if ratio >= 2.5 {
        c6.failures.push(format!("scaling ratio {ratio:.2} is not below 2.5"));
    }
    criteria.push(c6);

    let small_n: Vec<&Formula> = family.iter().filter(|f| f.n <= 2).collect();
    criteria.push(run(7, "box-to-simplex transform preserves the robust value", &small_n, |f| {
        (named(f), verify::check_simplex(f, &caps))
    }));

    let counts = audit::counts();
    let lp_ok = counts.certificate_failures == 0 && counts.lex_mismatches == 0 && counts.certified > 0 && counts.lex_checked > 0;
    criteria.push(Criterion {
        id: 8,
        title: "every LP above carries a verified dual certificate; lexicographic optima attain the plain optimum",
        cases: (counts.certified + counts.certificate_failures) as usize,
        skipped: 0,
        failures: if lp_ok { Vec::new() } else { vec![format!("{counts:?}")] },
        elapsed: Duration::ZERO,
    });
    report(&format!(
        "    LP audit: {} certificates verified, {} failed; {} lexicographic solves checked, {} mismatched",
        counts.certified, counts.certificate_failures, counts.lex_checked, counts.lex_mismatches
    ));

    criteria.push(run(9, "face counts 3/9/7 and exposure certificates round-trip through the LP", &[()], |_| geometry_fixtures()));

    for c in &criteria {
        report(&c.line());
    }
    let failed: Vec<usize> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
