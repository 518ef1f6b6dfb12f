//! Exact convex hull of a linear image `Q = Π·P` of a polytope, built from
//! an LP oracle over `P` without enumerating the vertices of `P`.
//!
//! The hull grows by adding oracle maximizers outside the current candidate
//! facets until every facet is confirmed against `Q`.

use std::collections::HashSet;

use super::{enumerate_faces, next_combination, Face, GeometryError, VertexSet};
use crate::lp::{solve_lp, LpError, LpStatus, Polyhedron, Sense};
use crate::numeric::{dot, sub_vec, Matrix, Rational, Vector};

/// Vertices and faces of `Π·P`.
#[derive(Debug, Clone)]
pub struct Projection {
    /// Vertices of the image, in image coordinates.
    pub vertices: VertexSet,
    /// Faces in canonical order; `tight_rows` index into `facets`.
    pub faces: Vec<Face>,
    /// Facet inequalities `a·s <= b` on the `coordinates` of the image.
    pub facets: Vec<(Vector, Rational)>,
    /// Image coordinates that parametrize the affine hull.
    pub coordinates: Vec<usize>,
}

struct Oracle<'a> {
    p: &'a Polyhedron,
    pi: &'a Matrix,
    calls: u64,
}

impl Oracle<'_> {
    fn image(&self, y: &[Rational]) -> Vector {
        self.pi.mul_vec(y).expect("dimensions agree")
    }

    /// A maximizer of `dir·q` over the image and its value.
    fn argmax(&mut self, dir: &[Rational], sense: Sense) -> Result<(Vector, Rational), GeometryError> {
        self.calls += 1;
        let obj = self.pi.transpose().mul_vec(dir)?;
        let out = solve_lp(self.p, &obj, sense)?;
        match out.status {
            LpStatus::Optimal => {
                let q = self.image(out.point.as_ref().expect("optimal point"));
                let v = dot(dir, &q);
                Ok((q, v))
            }
            LpStatus::Infeasible => Err(LpError::Infeasible.into()),
            LpStatus::Unbounded => Err(GeometryError::NotPolytope),
        }
    }
}

fn normalize(a: Vector, b: Rational) -> (Vector, Rational) {
    let lead = a.iter().find(|x| !x.is_zero()).expect("nonzero normal").abs();
    let inv = lead.recip().expect("nonzero");
    (a.iter().map(|x| x * &inv).collect(), &b * &inv)
}

fn restrict(q: &[Rational], coords: &[usize]) -> Vector {
    coords.iter().map(|&j| q[j].clone()).collect()
}

/// Facets of the hull of full-dimensional points in `R^r`, by testing every
/// hyperplane through `r` of them.
fn hull_facets(points: &[Vector], r: usize) -> Vec<(Vector, Rational)> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    if r == 1 {
        let lo = points.iter().map(|s| &s[0]).min().expect("points").clone();
        let hi = points.iter().map(|s| &s[0]).max().expect("points").clone();
        return vec![(vec![-Rational::one()], -lo), (vec![Rational::one()], hi)];
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let base = &points[idx[0]];
        let diffs: Vec<Vector> = idx[1..].iter().map(|&i| sub_vec(&points[i], base)).collect();
        let null = Matrix::from_rows(diffs, r).expect("dimensions agree").nullspace();
        if null.len() == 1 {
            let a = null.into_iter().next().expect("one vector");
            let b = dot(&a, base);
            let sides: Vec<std::cmp::Ordering> = points.iter().map(|s| dot(&a, s).cmp(&b)).collect();
            let candidate = if sides.iter().all(|o| o.is_le()) {
                Some((a, b))
            } else if sides.iter().all(|o| o.is_ge()) {
                Some((a.iter().map(|x| -x).collect(), -b))
            } else {
                None
            };
            if let Some((a, b)) = candidate {
                let key = normalize(a, b);
                if seen.insert(key.clone()) {
                    out.push(key);
                }
            }
        }
        if !next_combination(&mut idx, points.len()) {
            break;
        }
    }
    out
}

/// Computes `Q = {Π·y : y ∈ P}` exactly for a bounded nonempty `P`, where
/// the rows of `pi` are the linear maps defining the image coordinates.
pub fn project(p: &Polyhedron, pi: &Matrix, face_cap: u64) -> Result<Projection, GeometryError> {
    let d = pi.rows();
    let mut oracle = Oracle { p, pi, calls: 0 };
    let (q0, _) = oracle.argmax(&vec![Rational::zero(); d], Sense::Max)?;
    let mut points = vec![q0];

    // affine hull: probe every direction orthogonal to the current span
    let coords = loop {
        let diffs: Vec<Vector> = points[1..].iter().map(|q| sub_vec(q, &points[0])).collect();
        let span = Matrix::from_rows(diffs, d)?;
        let normals = if points.len() == 1 {
            (0..d).map(|j| crate::numeric::unit_vector(d, j)).collect()
        } else {
            span.nullspace()
        };
        let mut grown = false;
        for u in &normals {
            let level = dot(u, &points[0]);
            let (hi, v_hi) = oracle.argmax(u, Sense::Max)?;
            if v_hi != level {
                points.push(hi);
                grown = true;
                break;
            }
            let (lo, v_lo) = oracle.argmax(u, Sense::Min)?;
            if v_lo != level {
                points.push(lo);
                grown = true;
                break;
            }
        }
        if !grown {
            break if points.len() == 1 { Vec::new() } else { span.pivot_columns() };
        }
    };
    let r = coords.len();

    let mut facets = Vec::new();
    if r > 0 {
        let mut confirmed: HashSet<(Vector, Rational)> = HashSet::new();
        'grow: loop {
            let reduced: Vec<Vector> = points.iter().map(|q| restrict(q, &coords)).collect();
            facets = hull_facets(&reduced, r);
            for (a, b) in &facets {
                if confirmed.contains(&(a.clone(), b.clone())) {
                    continue;
                }
                let mut dir = vec![Rational::zero(); d];
                for (k, &j) in coords.iter().enumerate() {
                    dir[j] = a[k].clone();
                }
                let (q, v) = oracle.argmax(&dir, Sense::Max)?;
                if v > *b {
                    points.push(q);
                    continue 'grow;
                }
                confirmed.insert((a.clone(), b.clone()));
            }
            break;
        }
    }

    // keep only the points pinned down by their tight facets
    let tight_of = |s: &Vector| -> Vec<usize> {
        (0..facets.len()).filter(|&f| dot(&facets[f].0, s) == facets[f].1).collect()
    };
    let mut vertices = Vec::new();
    let mut tight = Vec::new();
    let mut seen = HashSet::new();
    for q in &points {
        let s = restrict(q, &coords);
        let rows = tight_of(&s);
        let pinned = r == 0
            || Matrix::from_rows(rows.iter().map(|&f| facets[f].0.clone()).collect(), r)?.rank() == r;
        if pinned && seen.insert(q.clone()) {
            vertices.push(q.clone());
            tight.push(rows);
        }
    }
    // canonical vertex order makes face order independent of discovery order
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&i, &j| vertices[i].cmp(&vertices[j]));
    let vertices = VertexSet {
        vertices: order.iter().map(|&i| vertices[i].clone()).collect(),
        tight: order.iter().map(|&i| tight[i].clone()).collect(),
    };

    let faces = if r == 0 {
        vec![Face { vertex_indices: vec![0], tight_rows: Vec::new() }]
    } else {
        let rows: Vec<Vector> = facets.iter().map(|(a, _)| a.clone()).collect();
        let rhs: Vector = facets.iter().map(|(_, b)| b.clone()).collect();
        let reduced = Polyhedron::new(Matrix::from_rows(rows, r)?, rhs)?;
        enumerate_faces(&reduced, &vertices, face_cap)?
    };
    Ok(Projection { vertices, faces, facets, coordinates: coords })
}
