//! Vertices, faces and exposing directions of bounded polyhedra.

mod projection;

pub use projection::{project, Projection};

use std::collections::HashSet;

use thiserror::Error;

use crate::lp::{check_bounded_nonempty, solve_lp, LpError, LpStatus, Polyhedron, Sense};
use crate::numeric::{dot, gauss_solve, Matrix, NumericError, Rational, Vector};
use crate::uncertainty::{UncertaintyError, UncertaintySet};

/// Default limit on row subsets visited during face enumeration.
pub const DEFAULT_FACE_CAP: u64 = 1 << 22;
/// Default limit on row bases tried during vertex enumeration.
pub const DEFAULT_VERTEX_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("{what}: {needed} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },
    #[error("polyhedron is empty or unbounded")]
    NotPolytope,
    #[error("exposure check is not defined for discrete uncertainty")]
    DiscreteUncertainty,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
}

/// Distinct vertices of a polytope with the rows tight at each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<Vector>,
    pub tight: Vec<Vec<usize>>,
}

impl VertexSet {
    /// Vertex list for `p`, computing tight rows.
    pub fn from_points(p: &Polyhedron, vertices: Vec<Vector>) -> Self {
        let tight = vertices.iter().map(|v| p.tight_rows(v)).collect();
        VertexSet { vertices, tight }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A nonempty face, identified by its vertices and its common tight rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
    pub tight_rows: Vec<usize>,
}

/// A scenario that makes a face the exact argmax set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExposureCertificate {
    pub c: Vector,
    pub margin: Rational,
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All vertices of a bounded nonempty polyhedron, by solving every
/// `n`-row equality system and keeping the feasible solutions.
pub fn enumerate_vertices(p: &Polyhedron, cap: u64) -> Result<VertexSet, GeometryError> {
    let (m, n) = (p.num_rows(), p.dim());
    let needed = binomial(m as u64, n as u64);
    if needed > cap as u128 {
        return Err(GeometryError::CapExceeded { what: "row bases", needed, cap: cap as u128 });
    }
    let extent = check_bounded_nonempty(p);
    if extent.bounded != Some(true) {
        return Err(GeometryError::NotPolytope);
    }
    let mut seen = HashSet::new();
    let mut vertices = Vec::new();
    if n <= m {
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let sub = p.matrix().select_rows(&idx);
            let rhs: Vector = idx.iter().map(|&i| p.rhs()[i].clone()).collect();
            if let Some(v) = gauss_solve(&sub, &rhs)? {
                if p.contains(&v) && seen.insert(v.clone()) {
                    vertices.push(v);
                }
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Ok(VertexSet::from_points(p, vertices))
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Mask(Vec<u64>);

impl Mask {
    fn empty(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            m.set(i);
        }
        m
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn members(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// All nonempty faces, found by walking row subsets `S` and collecting the
/// vertices tight on all of `S`. Subsets that add no new restriction are
/// skipped, and `cap` bounds the number of subsets visited.
///
/// Faces come back ordered by vertex count, then by vertex indices.
pub fn enumerate_faces(p: &Polyhedron, vs: &VertexSet, cap: u64) -> Result<Vec<Face>, GeometryError> {
    let nv = vs.len();
    if nv == 0 {
        return Ok(Vec::new());
    }
    let m = p.num_rows();
    let mut row_masks = vec![Mask::empty(nv); m];
    for (v, rows) in vs.tight.iter().enumerate() {
        for &r in rows {
            row_masks[r].set(v);
        }
    }
    let mut found: HashSet<Mask> = HashSet::new();
    let mut visited: u64 = 0;
    let mut stack = vec![(0usize, Mask::full(nv))];
    while let Some((start, mask)) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(GeometryError::CapExceeded {
                what: "face subsets",
                needed: visited as u128,
                cap: cap as u128,
            });
        }
        for r in (start..m).rev() {
            let next = mask.and(&row_masks[r]);
            if next.is_empty() || next == mask {
                continue;
            }
            stack.push((r + 1, next));
        }
        found.insert(mask);
    }
    let mut faces: Vec<Face> = found
        .into_iter()
        .map(|mask| {
            let vertex_indices = mask.members();
            let tight_rows = (0..m)
                .filter(|&r| vertex_indices.iter().all(|&v| vs.tight[v].binary_search(&r).is_ok()))
                .collect();
            Face { vertex_indices, tight_rows }
        })
        .collect();
    faces.sort_by(|a, b| {
        a.vertex_indices.len().cmp(&b.vertex_indices.len()).then_with(|| a.vertex_indices.cmp(&b.vertex_indices))
    });
    Ok(faces)
}

fn split_face<'a>(face: &Face, vs: &'a [Vector]) -> (Vec<&'a Vector>, Vec<&'a Vector>) {
    let mut inside = vec![false; vs.len()];
    for &i in &face.vertex_indices {
        inside[i] = true;
    }
    let on: Vec<&Vector> = face.vertex_indices.iter().map(|&i| &vs[i]).collect();
    let off: Vec<&Vector> = (0..vs.len()).filter(|&i| !inside[i]).map(|i| &vs[i]).collect();
    (on, off)
}

/// Searches `u` for a scenario whose argmax over the vertex set is exactly
/// `face`, maximizing the separation margin.
pub fn exposure_check(
    face: &Face,
    vs: &VertexSet,
    u: &UncertaintySet,
    grid_cap: u128,
) -> Result<Option<ExposureCertificate>, GeometryError> {
    let dim = vs.vertices.first().map_or(0, Vec::len);
    u.validate(dim)?;
    let (on, off) = split_face(face, &vs.vertices);
    match u {
        UncertaintySet::Discrete { .. } => Err(GeometryError::DiscreteUncertainty),
        UncertaintySet::ProductFinite { values } => {
            for c in UncertaintySet::grid_points(values, grid_cap)? {
                let t = dot(&c, on[0]);
                if on.iter().any(|v| dot(&c, v) != t) {
                    continue;
                }
                let margin = match off.iter().map(|v| dot(&c, v)).max() {
                    Some(best_off) => &t - &best_off,
                    None => Rational::one(),
                };
                if margin.is_positive() {
                    return Ok(Some(ExposureCertificate { c, margin }));
                }
            }
            Ok(None)
        }
        UncertaintySet::Interval { lower, upper } => {
            // variables: c (dim), t, eps
            let width = dim + 2;
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for j in 0..dim {
                let mut up = vec![Rational::zero(); width];
                up[j] = Rational::one();
                rows.push(up);
                rhs.push(upper[j].clone());
                let mut down = vec![Rational::zero(); width];
                down[j] = -Rational::one();
                rows.push(down);
                rhs.push(-&lower[j]);
            }
            push_separation(&mut rows, &mut rhs, width, dim, &on, &off, |v| v.to_vec());
            let Some((point, margin)) = max_margin(rows, rhs, width)? else {
                return Ok(None);
            };
            Ok(Some(ExposureCertificate { c: point[..dim].to_vec(), margin }))
        }
        UncertaintySet::ConvexHull { points } => {
            // variables: lambda (one per hull point), t, eps
            let r = points.len();
            let width = r + 2;
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for j in 0..r {
                let mut nonneg = vec![Rational::zero(); width];
                nonneg[j] = -Rational::one();
                rows.push(nonneg);
                rhs.push(Rational::zero());
            }
            let mut sum = vec![Rational::zero(); width];
            sum[..r].fill(Rational::one());
            rows.push(sum.clone());
            rhs.push(Rational::one());
            rows.push(sum.iter().map(|x| -x).collect());
            rhs.push(-Rational::one());
            push_separation(&mut rows, &mut rhs, width, r, &on, &off, |v| {
                points.iter().map(|h| dot(h, v)).collect()
            });
            let Some((point, margin)) = max_margin(rows, rhs, width)? else {
                return Ok(None);
            };
            let mut c = vec![Rational::zero(); dim];
            for (lambda, h) in point[..r].iter().zip(points) {
                if lambda.is_zero() {
                    continue;
                }
                for (cj, hj) in c.iter_mut().zip(h) {
                    *cj += &(lambda * hj);
                }
            }
            Ok(Some(ExposureCertificate { c, margin }))
        }
    }
}

/// Adds `w(v)·x = t` for face vertices and `w(u)·x <= t - eps` for the rest,
/// where `x` is the first `k` variables, `t` is variable `k` and `eps` is `k+1`.
fn push_separation(
    rows: &mut Vec<Vector>,
    rhs: &mut Vec<Rational>,
    width: usize,
    k: usize,
    on: &[&Vector],
    off: &[&Vector],
    weights: impl Fn(&Vector) -> Vector,
) {
    for v in on {
        let mut row = vec![Rational::zero(); width];
        row[..k].clone_from_slice(&weights(v));
        row[k] = -Rational::one();
        rows.push(row.iter().map(|x| -x).collect());
        rows.push(row);
        rhs.push(Rational::zero());
        rhs.push(Rational::zero());
    }
    for u in off {
        let mut row = vec![Rational::zero(); width];
        row[..k].clone_from_slice(&weights(u));
        row[k] = -Rational::one();
        row[k + 1] = Rational::one();
        rows.push(row);
        rhs.push(Rational::zero());
    }
    if off.is_empty() {
        // nothing to separate from; keep the margin finite
        let mut row = vec![Rational::zero(); width];
        row[k + 1] = Rational::one();
        rows.push(row);
        rhs.push(Rational::one());
    }
}

fn max_margin(rows: Vec<Vector>, rhs: Vec<Rational>, width: usize) -> Result<Option<(Vector, Rational)>, GeometryError> {
    let p = Polyhedron::new(Matrix::from_rows(rows, width)?, rhs)?;
    let mut obj = vec![Rational::zero(); width];
    obj[width - 1] = Rational::one();
    let out = solve_lp(&p, &obj, Sense::Max)?;
    match out.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => unreachable!("margin is bounded by construction"),
        LpStatus::Optimal => {
            let margin = out.value.expect("optimal value");
            if margin.is_positive() {
                Ok(Some((out.point.expect("optimal point"), margin)))
            } else {
                Ok(None)
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lp::solve_lp;
    use crate::numeric::int;

    pub(crate) fn poly(rows: &[&[i64]], rhs: &[i64]) -> Polyhedron {
        let cols = rows[0].len();
        Polyhedron::new(
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cols)
                .unwrap(),
            rhs.iter().map(|&x| int(x)).collect(),
        )
        .unwrap()
    }

    pub(crate) fn unit_interval() -> Polyhedron {
        poly(&[&[1], &[-1]], &[1, 0])
    }

    pub(crate) fn unit_square() -> Polyhedron {
        poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[1, 0, 1, 0])
    }

    pub(crate) fn triangle() -> Polyhedron {
        poly(&[&[1, 1], &[-1, 0], &[0, -1]], &[1, 0, 0])
    }

    fn interval(lo: i64, hi: i64) -> UncertaintySet {
        UncertaintySet::Interval { lower: vec![int(lo)], upper: vec![int(hi)] }
    }

    fn face_with(vs: &VertexSet, faces: &[Face], pts: &[&[i64]]) -> Face {
        let want: Vec<Vector> = pts.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect();
        faces
            .iter()
            .find(|f| {
                f.vertex_indices.len() == want.len()
                    && f.vertex_indices.iter().all(|&i| want.contains(&vs.vertices[i]))
            })
            .cloned()
            .expect("face present")
    }

    /// Independent face oracle: every subset of vertices whose common tight
    /// rows select exactly that subset.
    fn faces_by_vertex_subsets(vs: &VertexSet) -> HashSet<Vec<usize>> {
        let n = vs.len();
        let mut out = HashSet::new();
        for bits in 1u64..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| bits >> i & 1 == 1).collect();
            let common: Vec<usize> = vs.tight[subset[0]]
                .iter()
                .copied()
                .filter(|r| subset.iter().all(|&v| vs.tight[v].contains(r)))
                .collect();
            let closure: Vec<usize> =
                (0..n).filter(|&v| common.iter().all(|r| vs.tight[v].contains(r))).collect();
            if closure == subset {
                out.insert(subset);
            }
        }
        out
    }

    #[test]
    fn vertices_of_fixtures() {
        assert_eq!(enumerate_vertices(&unit_square(), 100).unwrap().len(), 4);
        assert_eq!(enumerate_vertices(&triangle(), 100).unwrap().len(), 3);
    }

    #[test]
    fn duplicated_row_keeps_four_vertices() {
        let p = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 0]], &[1, 0, 1, 0, 1]);
        let vs = enumerate_vertices(&p, 100).unwrap();
        assert_eq!(vs.len(), 4);
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                assert_ne!(vs.vertices[i], vs.vertices[j]);
            }
        }
        assert!(vs.tight.iter().all(|t| t.len() >= 2));
    }

    #[test]
    fn hypercube_vertex_counts() {
        for k in 1..=4usize {
            let lo = vec![int(0); k];
            let hi = vec![int(1); k];
            let p = Polyhedron::boxed(&lo, &hi).unwrap();
            assert_eq!(enumerate_vertices(&p, 1 << 20).unwrap().len(), 1 << k);
        }
    }

    #[test]
    fn vertex_errors() {
        assert!(matches!(enumerate_vertices(&unit_square(), 5), Err(GeometryError::CapExceeded { .. })));
        let ray = poly(&[&[-1]], &[0]);
        assert_eq!(enumerate_vertices(&ray, 10), Err(GeometryError::NotPolytope));
        let empty = poly(&[&[1], &[-1]], &[0, -1]);
        assert_eq!(enumerate_vertices(&empty, 10), Err(GeometryError::NotPolytope));
    }

    #[test]
    fn face_counts() {
        for (p, expected) in [(unit_interval(), 3), (unit_square(), 9), (triangle(), 7)] {
            let vs = enumerate_vertices(&p, 100).unwrap();
            let faces = enumerate_faces(&p, &vs, 1 << 10).unwrap();
            assert_eq!(faces.len(), expected);
            let oracle = faces_by_vertex_subsets(&vs);
            let ours: HashSet<Vec<usize>> = faces.iter().map(|f| f.vertex_indices.clone()).collect();
            assert_eq!(ours, oracle);
        }
    }

    #[test]
    fn face_closure_property() {
        let p = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1]], &[1, 0, 1, 0, 2]);
        let vs = enumerate_vertices(&p, 100).unwrap();
        let faces = enumerate_faces(&p, &vs, 1 << 10).unwrap();
        for f in &faces {
            let closure: Vec<usize> = (0..vs.len())
                .filter(|&v| f.tight_rows.iter().all(|r| vs.tight[v].contains(r)))
                .collect();
            assert_eq!(closure, f.vertex_indices);
        }
        // (1,1) is degenerate: three tight rows
        assert_eq!(faces.len(), 9);
    }

    #[test]
    fn face_cap() {
        let vs = enumerate_vertices(&unit_square(), 100).unwrap();
        assert!(matches!(enumerate_faces(&unit_square(), &vs, 3), Err(GeometryError::CapExceeded { .. })));
    }

    #[test]
    fn exposure_examples() {
        let p = unit_interval();
        let vs = enumerate_vertices(&p, 10).unwrap();
        let faces = enumerate_faces(&p, &vs, 100).unwrap();
        let top = face_with(&vs, &faces, &[&[1]]);
        let cert = exposure_check(&top, &vs, &interval(-1, 1), 100).unwrap().unwrap();
        assert_eq!(cert.c, vec![int(1)]);
        assert_eq!(cert.margin, int(1));

        let bottom = face_with(&vs, &faces, &[&[0]]);
        assert_eq!(exposure_check(&bottom, &vs, &interval(1, 2), 100).unwrap(), None);

        let whole = face_with(&vs, &faces, &[&[0], &[1]]);
        let cert = exposure_check(&whole, &vs, &interval(-1, 1), 100).unwrap().unwrap();
        assert_eq!(cert.c, vec![int(0)]);
    }

    #[test]
    fn exposure_hull_and_grid() {
        let p = unit_square();
        let vs = enumerate_vertices(&p, 100).unwrap();
        let faces = enumerate_faces(&p, &vs, 100).unwrap();
        let hull = UncertaintySet::ConvexHull { points: vec![vec![int(1), int(1)], vec![int(1), int(-1)]] };
        let grid = UncertaintySet::ProductFinite { values: vec![vec![int(1)], vec![int(-1), int(0), int(1)]] };
        let mut exposed_hull = 0;
        let mut exposed_grid = 0;
        for f in &faces {
            if exposure_check(f, &vs, &hull, 100).unwrap().is_some() {
                exposed_hull += 1;
            }
            if exposure_check(f, &vs, &grid, 100).unwrap().is_some() {
                exposed_grid += 1;
            }
        }
        // hull: (1,1), edge x=1, (1,0); grid: the same three via c2 in {1,0,-1}
        assert_eq!(exposed_hull, 3);
        assert_eq!(exposed_grid, 3);
        let discrete = UncertaintySet::Discrete { scenarios: vec![vec![int(1), int(0)]] };
        assert_eq!(exposure_check(&faces[0], &vs, &discrete, 100), Err(GeometryError::DiscreteUncertainty));
    }

    #[test]
    fn exposure_round_trip() {
        let u = UncertaintySet::Interval { lower: vec![int(-1), int(-2)], upper: vec![int(2), int(1)] };
        for p in [unit_square(), triangle()] {
            let vs = enumerate_vertices(&p, 100).unwrap();
            for f in enumerate_faces(&p, &vs, 100).unwrap() {
                let Some(cert) = exposure_check(&f, &vs, &u, 100).unwrap() else { continue };
                let out = solve_lp(&p, &cert.c, Sense::Max).unwrap();
                let best = out.value.unwrap();
                let argmax: Vec<usize> = (0..vs.len()).filter(|&i| dot(&cert.c, &vs.vertices[i]) == best).collect();
                assert_eq!(argmax, f.vertex_indices);
            }
        }
    }
}
