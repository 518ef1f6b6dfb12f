//! The adversary's problem: the worst follower objective for a fixed `x`.

use super::{follower_response, BilevelError, Caps, Mode, RobustBilevelInstance};
use crate::geometry::{enumerate_faces, enumerate_vertices, exposure_check, project};
use crate::numeric::{dot, unit_vector, Matrix, Rational, Vector};
use crate::uncertainty::UncertaintySet;

/// Maps a parameter of the reduced set back to a scenario.
type Lift = Box<dyn Fn(&[Rational]) -> Vector>;

/// A minimizing scenario, its leader value and the follower's response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub scenario: Vector,
    pub value: Rational,
    pub follower_y: Vector,
}

fn keep_min(best: &mut Option<AdversaryOutcome>, scenario: Vector, (follower_y, value): (Vector, Rational)) {
    if best.as_ref().is_none_or(|b| value < b.value) {
        *best = Some(AdversaryOutcome { scenario, value, follower_y });
    }
}

fn scan(
    inst: &RobustBilevelInstance,
    x: &[Rational],
    mode: Mode,
    scenarios: impl IntoIterator<Item = Vector>,
) -> Result<AdversaryOutcome, BilevelError> {
    let mut best = None;
    for c in scenarios {
        let response = follower_response(inst, x, &c, mode)?;
        keep_min(&mut best, c, response);
    }
    Ok(best.expect("validated uncertainty sets are nonempty"))
}

/// Scenario enumeration over a discrete uncertainty set; the first
/// minimizing scenario in list order wins.
pub fn adversary_discrete(inst: &RobustBilevelInstance, x: &[Rational], mode: Mode) -> Result<AdversaryOutcome, BilevelError> {
    match &inst.uncertainty {
        UncertaintySet::Discrete { scenarios } => {
            inst.uncertainty.validate(inst.n)?;
            scan(inst, x, mode, scenarios.iter().cloned())
        }
        other => Err(BilevelError::WrongUncertainty(other.kind())),
    }
}

/// The adversary over an interval, hull or product-grid uncertainty set.
///
/// Interval and hull sets act on `Y(x)` only through a few linear maps
/// `y ↦ Π y` (the certain part of `c` and the directions along which `c`
/// varies). The faces of the image `Π·Y(x)` exposable by the parameter set
/// are exactly the argmax sets the adversary can induce, so the search runs
/// over that low-dimensional image. Grids are scanned point by point.
pub fn adversary_geometric(
    inst: &RobustBilevelInstance,
    x: &[Rational],
    mode: Mode,
    caps: &Caps,
) -> Result<AdversaryOutcome, BilevelError> {
    inst.uncertainty.validate(inst.n)?;
    let n = inst.n;
    let (pi, params, lift): (Vec<Vector>, UncertaintySet, Lift) = match &inst.uncertainty {
        UncertaintySet::Discrete { .. } => return Err(BilevelError::WrongUncertainty(inst.uncertainty.kind())),
        UncertaintySet::ProductFinite { values } => {
            return scan(inst, x, mode, UncertaintySet::grid_points(values, caps.grid_cap)?);
        }
        UncertaintySet::Interval { lower, upper } => {
            let free: Vec<usize> = (0..n).filter(|&j| lower[j] != upper[j]).collect();
            let fixed: Vector = (0..n).map(|j| if lower[j] == upper[j] { lower[j].clone() } else { Rational::zero() }).collect();
            let mut pi = vec![fixed.clone()];
            pi.extend(free.iter().map(|&j| unit_vector(n, j)));
            let mut lo = vec![Rational::one()];
            let mut hi = vec![Rational::one()];
            lo.extend(free.iter().map(|&j| lower[j].clone()));
            hi.extend(free.iter().map(|&j| upper[j].clone()));
            let lift = move |t: &[Rational]| {
                let mut c = fixed.clone();
                for (k, &j) in free.iter().enumerate() {
                    c[j] = t[k + 1].clone();
                }
                c
            };
            (pi, UncertaintySet::Interval { lower: lo, upper: hi }, Box::new(lift))
        }
        UncertaintySet::ConvexHull { points } => {
            let k = points.len();
            let hull = points.clone();
            let lift = move |lambda: &[Rational]| {
                let mut c = vec![Rational::zero(); n];
                for (l, h) in lambda.iter().zip(&hull) {
                    if !l.is_zero() {
                        for (cj, hj) in c.iter_mut().zip(h) {
                            *cj += &(l * hj);
                        }
                    }
                }
                c
            };
            (points.clone(), UncertaintySet::ConvexHull { points: (0..k).map(|j| unit_vector(k, j)).collect() }, Box::new(lift))
        }
    };
    let image = project(&inst.follower_polyhedron(x)?, &Matrix::from_rows(pi, n)?, caps.face_cap)?;
    let mut best = None;
    for face in &image.faces {
        if let Some(cert) = exposure_check(face, &image.vertices, &params, caps.grid_cap)? {
            let c = lift(&cert.c);
            let response = follower_response(inst, x, &c, mode)?;
            keep_min(&mut best, c, response);
        }
    }
    Ok(best.expect("some face is exposed by every direction"))
}

/// The adversary by enumerating the vertices and faces of `Y(x)` itself.
/// Exponential in the number of rows; meant for small instances.
pub fn adversary_geometric_direct(
    inst: &RobustBilevelInstance,
    x: &[Rational],
    mode: Mode,
    caps: &Caps,
) -> Result<AdversaryOutcome, BilevelError> {
    inst.uncertainty.validate(inst.n)?;
    match &inst.uncertainty {
        UncertaintySet::Discrete { .. } => return Err(BilevelError::WrongUncertainty(inst.uncertainty.kind())),
        UncertaintySet::ProductFinite { values } => {
            return scan(inst, x, mode, UncertaintySet::grid_points(values, caps.grid_cap)?);
        }
        _ => {}
    }
    let poly = inst.follower_polyhedron(x)?;
    let vs = enumerate_vertices(&poly, caps.vertex_cap)?;
    let faces = enumerate_faces(&poly, &vs, caps.face_cap)?;
    let mut best: Option<AdversaryOutcome> = None;
    for face in &faces {
        let Some(cert) = exposure_check(face, &vs, &inst.uncertainty, caps.grid_cap)? else {
            continue;
        };
        let values = face.vertex_indices.iter().map(|&v| (v, dot(&inst.d, &vs.vertices[v])));
        let (v, value) = match mode {
            Mode::Optimistic => values.max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))),
            Mode::Pessimistic => values.min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))),
        }
        .expect("faces are nonempty");
        keep_min(&mut best, cert.c, (vs.vertices[v].clone(), value));
    }
    Ok(best.expect("some face is exposed by every direction"))
}

/// Dispatches on the kind of uncertainty set.
pub fn adversary(inst: &RobustBilevelInstance, x: &[Rational], mode: Mode, caps: &Caps) -> Result<AdversaryOutcome, BilevelError> {
    match inst.uncertainty {
        UncertaintySet::Discrete { .. } => adversary_discrete(inst, x, mode),
        _ => adversary_geometric(inst, x, mode, caps),
    }
}
