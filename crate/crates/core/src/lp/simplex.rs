//! Dictionary simplex for `max obj·v  s.t.  A v <= rhs`, `v` free.
//!
//! Every row gets a slack `s_i = rhs_i - A_i v >= 0`. Free variables are
//! pivoted into the basis first and never leave it; the remaining rows are
//! handled by the textbook two-phase method with a single auxiliary
//! variable and Bland's smallest-index rule.

use crate::numeric::{Matrix, Rational, Vector};

pub(crate) enum RawOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vector, value: Rational, dual: Vector },
}

struct Dictionary {
    n: usize,
    m: usize,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    cst: Vec<Rational>,
    coef: Vec<Vec<Rational>>,
    obj_cst: Rational,
    obj_coef: Vec<Rational>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Dictionary {
    fn new(a: &Matrix, rhs: &[Rational]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let coef = (0..m).map(|i| a.row(i).iter().map(|x| -x).collect()).collect();
        Dictionary {
            n,
            m,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            cst: rhs.to_vec(),
            coef,
            obj_cst: Rational::zero(),
            obj_coef: vec![Rational::zero(); n],
        }
    }

    fn is_free(&self, var: usize) -> bool {
        var < self.n
    }

    fn aux(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let a = self.coef[r][k].clone();
        let inv = a.recip().expect("pivot on a zero entry");
        let neg_inv = -&inv;
        let cst_r = &self.cst[r] * &neg_inv;
        let mut row_r: Vec<Rational> = self.coef[r].iter().map(|x| x * &neg_inv).collect();
        row_r[k] = inv;
        self.cst[r] = cst_r;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[k]);

        let cst_r_zero = self.cst[r].is_zero();
        let nz: Vec<usize> = (0..row_r.len()).filter(|&l| l != k && !row_r[l].is_zero()).collect();
        for i in 0..self.coef.len() {
            if i == r || self.coef[i][k].is_zero() {
                continue;
            }
            let alpha = self.coef[i][k].clone();
            if !cst_r_zero {
                let delta = &alpha * &self.cst[r];
                self.cst[i] += &delta;
            }
            let row = &mut self.coef[i];
            for &l in &nz {
                row[l] += &(&alpha * &row_r[l]);
            }
            row[k] = &alpha * &row_r[k];
        }
        if !self.obj_coef[k].is_zero() {
            let alpha = self.obj_coef[k].clone();
            let delta = &alpha * &self.cst[r];
            self.obj_cst += &delta;
            for &l in &nz {
                self.obj_coef[l] += &(&alpha * &row_r[l]);
            }
            self.obj_coef[k] = &alpha * &row_r[k];
        }
        self.coef[r] = row_r;
    }

    fn run(&mut self) -> Step {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&k| !self.is_free(self.nonbasic[k]) && self.obj_coef[k].is_positive())
                .min_by_key(|&k| self.nonbasic[k]);
            let Some(k) = entering else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.basic.len() {
                if self.is_free(self.basic[r]) || !self.coef[r][k].is_negative() {
                    continue;
                }
                let ratio = &self.cst[r] / &(-&self.coef[r][k]);
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basic[r] < self.basic[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, k),
                None => return Step::Unbounded,
            }
        }
    }

    /// Phase one; returns false when the constraints are infeasible.
    fn make_feasible(&mut self) -> bool {
        let constrained = |d: &Self, r: usize| !d.is_free(d.basic[r]);
        let worst = (0..self.basic.len())
            .filter(|&r| constrained(self, r) && self.cst[r].is_negative())
            .min_by(|&a, &b| self.cst[a].cmp(&self.cst[b]).then(self.basic[a].cmp(&self.basic[b])));
        let Some(r0) = worst else {
            return true;
        };
        let aux = self.aux();
        for r in 0..self.basic.len() {
            let c = if constrained(self, r) { Rational::one() } else { Rational::zero() };
            self.coef[r].push(c);
        }
        self.nonbasic.push(aux);
        let k_aux = self.nonbasic.len() - 1;
        self.obj_cst = Rational::zero();
        self.obj_coef = vec![Rational::zero(); self.nonbasic.len()];
        self.obj_coef[k_aux] = -Rational::one();
        self.pivot(r0, k_aux);
        // Phase one is bounded above by zero.
        let _ = self.run();
        if self.obj_cst.is_negative() {
            return false;
        }
        if let Some(r) = self.basic.iter().position(|&v| v == aux) {
            let k = (0..self.nonbasic.len())
                .find(|&k| !self.is_free(self.nonbasic[k]) && !self.coef[r][k].is_zero());
            match k {
                Some(k) => self.pivot(r, k),
                None => {
                    // aux is identically zero here; the row carries no constraint
                    self.basic.remove(r);
                    self.cst.remove(r);
                    self.coef.remove(r);
                    return true;
                }
            }
        }
        let k = self.nonbasic.iter().position(|&v| v == aux).expect("aux is nonbasic");
        self.nonbasic.remove(k);
        for row in &mut self.coef {
            row.remove(k);
        }
        true
    }

    fn load_objective(&mut self, obj: &[Rational]) {
        let width = self.nonbasic.len();
        self.obj_cst = Rational::zero();
        self.obj_coef = vec![Rational::zero(); width];
        for r in 0..self.basic.len() {
            let v = self.basic[r];
            if !self.is_free(v) || obj[v].is_zero() {
                continue;
            }
            self.obj_cst += &(&obj[v] * &self.cst[r]);
            for k in 0..width {
                if !self.coef[r][k].is_zero() {
                    self.obj_coef[k] += &(&obj[v] * &self.coef[r][k]);
                }
            }
        }
        for k in 0..width {
            let v = self.nonbasic[k];
            if self.is_free(v) {
                self.obj_coef[k] += &obj[v];
            }
        }
    }
}

pub(crate) fn maximize(a: &Matrix, rhs: &[Rational], obj: &[Rational]) -> RawOutcome {
    let mut d = Dictionary::new(a, rhs);
    for k in 0..d.n {
        let pivot_row = (0..d.m).find(|&r| !d.is_free(d.basic[r]) && !d.coef[r][k].is_zero());
        if let Some(r) = pivot_row {
            d.pivot(r, k);
        }
    }
    if !d.make_feasible() {
        return RawOutcome::Infeasible;
    }
    d.load_objective(obj);
    let free_direction =
        (0..d.nonbasic.len()).any(|k| d.is_free(d.nonbasic[k]) && !d.obj_coef[k].is_zero());
    if free_direction {
        return RawOutcome::Unbounded;
    }
    if let Step::Unbounded = d.run() {
        return RawOutcome::Unbounded;
    }
    let mut point = vec![Rational::zero(); d.n];
    for r in 0..d.basic.len() {
        if d.is_free(d.basic[r]) {
            point[d.basic[r]] = d.cst[r].clone();
        }
    }
    let mut dual = vec![Rational::zero(); d.m];
    for k in 0..d.nonbasic.len() {
        let v = d.nonbasic[k];
        if !d.is_free(v) {
            dual[v - d.n] = -&d.obj_coef[k];
        }
    }
    RawOutcome::Optimal { point, value: d.obj_cst, dual }
}
