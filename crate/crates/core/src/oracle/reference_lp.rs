//! Textbook two-phase tableau simplex on standard form, written separately
//! from the solver it checks.
//!
//! `max c·v  s.t.  A v <= r` with `v` free becomes
//! `max c·(v⁺ - v⁻)  s.t.  A v⁺ - A v⁻ + s = r,  v⁺, v⁻, s >= 0`,
//! with one artificial variable per row in phase one.

use crate::numeric::{Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vector },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, k: usize) {
        let inv = self.rows[r][k].recip().expect("nonzero pivot");
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][k].is_zero() {
                continue;
            }
            let f = self.rows[i][k].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let t = &f * &self.rows[r][j];
                    self.rows[i][j] = &self.rows[i][j] - &t;
                }
            }
            let t = &f * &self.rhs[r];
            self.rhs[i] = &self.rhs[i] - &t;
        }
        self.basis[r] = k;
    }

    /// Maximizes `cost` over columns `0..usable`; returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], usable: usize) -> bool {
        loop {
            // reduced cost of column j: cost_j - cost_B · column_j
            let reduced = |t: &Tableau, j: usize| {
                let mut z = cost[j].clone();
                for (i, &b) in t.basis.iter().enumerate() {
                    if !t.rows[i][j].is_zero() && !cost[b].is_zero() {
                        z = &z - &(&cost[b] * &t.rows[i][j]);
                    }
                }
                z
            };
            let Some(k) = (0..usable).find(|&j| !self.basis.contains(&j) && reduced(self, j).is_positive()) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][k].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][k];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let best = &self.rhs[l] / &self.rows[l][k];
                        if ratio < best || (ratio == best && self.basis[i] < self.basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
            match leave {
                Some(r) => self.pivot(r, k),
                None => return false,
            }
        }
    }
}

/// Maximizes `obj·v` over `{v : a v <= rhs}`.
pub fn maximize(a: &[Vector], rhs: &[Rational], obj: &[Rational]) -> RefOutcome {
    let m = a.len();
    let n = obj.len();
    // columns: v+ (n), v- (n), slack (m), artificial (m)
    let width = 2 * n + 2 * m;
    let mut rows = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let flip = rhs[i].is_negative();
        let sign = |x: &Rational| if flip { -x } else { x.clone() };
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = sign(&a[i][j]);
            row[n + j] = -sign(&a[i][j]);
        }
        row[2 * n + i] = sign(&Rational::one());
        row[2 * n + m + i] = Rational::one();
        rows.push(row);
        b.push(sign(&rhs[i]));
    }
    let mut t = Tableau { rows, rhs: b, basis: (2 * n + m..width).collect() };

    let mut phase1 = vec![Rational::zero(); width];
    for c in &mut phase1[2 * n + m..] {
        *c = -Rational::one();
    }
    t.optimize(&phase1, width);
    let infeasibility: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&v, _)| v >= 2 * n + m)
        .map(|(_, r)| r.clone())
        .sum();
    if infeasibility.is_positive() {
        return RefOutcome::Infeasible;
    }
    // drive zero-level artificials out of the basis where possible
    for i in 0..m {
        if t.basis[i] >= 2 * n + m {
            if let Some(k) = (0..2 * n + m).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, k);
            }
        }
    }
    // rows still holding an artificial are redundant; drop them
    let keep: Vec<usize> = (0..m).filter(|&i| t.basis[i] < 2 * n + m).collect();
    t.rows = keep.iter().map(|&i| t.rows[i].clone()).collect();
    t.rhs = keep.iter().map(|&i| t.rhs[i].clone()).collect();
    t.basis = keep.iter().map(|&i| t.basis[i]).collect();

    let mut cost = vec![Rational::zero(); width];
    for j in 0..n {
        cost[j] = obj[j].clone();
        cost[n + j] = -&obj[j];
    }
    if !t.optimize(&cost, 2 * n + m) {
        return RefOutcome::Unbounded;
    }
    let mut vals = vec![Rational::zero(); width];
    for (i, &v) in t.basis.iter().enumerate() {
        vals[v] = t.rhs[i].clone();
    }
    let point: Vector = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    let value = obj.iter().zip(&point).map(|(c, v)| c * v).sum();
    RefOutcome::Optimal { value, point }
}
