//! Reductions from Boolean formulas and robust single-level problems to
//! robust bilevel instances.

mod formula;

pub use formula::{exhaustive_family, parse_formula, parse_formula_file, random_formula, Expr, Formula, FormulaError};

use thiserror::Error;

use crate::bilevel::{LeaderSet, Mode, RobustBilevelInstance};
use crate::numeric::{int, Matrix, Rational, Vector};
use crate::uncertainty::UncertaintySet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("uncertainty set does not have the required shape: {0}")]
    Shape(String),
    #[error("leader set is empty")]
    EmptyLeaderSet,
}

/// A variable of a linearized system: leader `x_i` or follower column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X(usize),
    Col(usize),
}

/// Sparse row `Σ coef·var <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub terms: Vec<(Var, Rational)>,
    pub rhs: Rational,
}

/// The circuit of a formula as linear rows over `x`, `y` and one gate
/// column per internal node (columns `n..n + gates.len()`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pub p: usize,
    pub n: usize,
    /// Subterm computed by each gate, in post-order.
    pub gates: Vec<Expr>,
    pub rows: Vec<LinearRow>,
    /// Follower column holding the value of the whole formula.
    pub output: usize,
}

impl Linearization {
    pub fn num_columns(&self) -> usize {
        self.n + self.gates.len()
    }
}

fn row(terms: &[(Var, i64)], rhs: i64) -> LinearRow {
    LinearRow { terms: terms.iter().map(|&(v, c)| (v, int(c))).collect(), rhs: int(rhs) }
}

struct Linearizer {
    n: usize,
    gates: Vec<Expr>,
    rows: Vec<LinearRow>,
}

impl Linearizer {
    fn new_gate(&mut self, e: &Expr) -> Var {
        let g = Var::Col(self.n + self.gates.len());
        self.gates.push(e.clone());
        self.rows.push(row(&[(g, 1)], 1));
        self.rows.push(row(&[(g, -1)], 0));
        g
    }

    fn equal(&mut self, g: Var, a: Var, shift: i64, sign: i64) {
        // g = shift + sign·a
        self.rows.push(row(&[(g, 1), (a, -sign)], shift));
        self.rows.push(row(&[(g, -1), (a, sign)], -shift));
    }

    fn visit(&mut self, e: &Expr) -> Var {
        match e {
            Expr::X(i) => Var::X(*i),
            Expr::Y(j) => Var::Col(*j),
            Expr::Not(a) => {
                let a = self.visit(a);
                let g = self.new_gate(e);
                self.equal(g, a, 1, -1);
                g
            }
            Expr::And(a, b) => {
                let (a, b) = (self.visit(a), self.visit(b));
                let g = self.new_gate(e);
                self.rows.push(row(&[(g, 1), (a, -1)], 0));
                self.rows.push(row(&[(g, 1), (b, -1)], 0));
                self.rows.push(row(&[(g, -1), (a, 1), (b, 1)], 1));
                g
            }
            Expr::Or(a, b) => {
                let (a, b) = (self.visit(a), self.visit(b));
                let g = self.new_gate(e);
                self.rows.push(row(&[(g, -1), (a, 1)], 0));
                self.rows.push(row(&[(g, -1), (b, 1)], 0));
                self.rows.push(row(&[(g, 1), (a, -1), (b, -1)], 0));
                g
            }
        }
    }
}

/// Standard linearization: each internal node gets a gate column in
/// `[0, 1]` whose rows force it to the node's Boolean value whenever the
/// inputs are binary. A bare `x_i` formula gets a copy gate `g = x_i`.
pub fn linearize(f: &Formula) -> Linearization {
    let mut lin = Linearizer { n: f.n, gates: Vec::new(), rows: Vec::new() };
    let out = match lin.visit(&f.root) {
        Var::Col(j) => j,
        x @ Var::X(_) => {
            let g = lin.new_gate(&f.root);
            lin.equal(g, x, 0, 1);
            match g {
                Var::Col(j) => j,
                Var::X(_) => unreachable!(),
            }
        }
    };
    Linearization { p: f.p, n: f.n, gates: lin.gates, rows: lin.rows, output: out }
}

/// A compiled instance with the bookkeeping needed by later transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationArtifacts {
    pub instance: RobustBilevelInstance,
    /// One name per follower column.
    pub var_map: Vec<String>,
    pub big_m: Option<Rational>,
    /// Columns of the original follower variables `y`.
    pub y_columns: Vec<usize>,
    /// Column of the formula's output gate.
    pub output_column: Option<usize>,
}

/// Accumulates rows `A·v - B·x <= b` from sparse terms.
struct System {
    p: usize,
    cols: usize,
    rows: Vec<LinearRow>,
}

impl System {
    fn push(&mut self, r: LinearRow) {
        self.rows.push(r);
    }

    fn build(&self) -> (Matrix, Matrix, Vector) {
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b_mat = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut ar = vec![Rational::zero(); self.cols];
            let mut br = vec![Rational::zero(); self.p];
            for (var, c) in &r.terms {
                match var {
                    Var::Col(j) => ar[*j] += c,
                    Var::X(i) => br[*i] -= c,
                }
            }
            a.push(ar);
            b_mat.push(br);
            b.push(r.rhs.clone());
        }
        let rows = self.rows.len();
        (
            Matrix::from_rows(a, self.cols).expect("row widths agree"),
            if self.p == 0 { Matrix::zeros(rows, 0) } else { Matrix::from_rows(b_mat, self.p).expect("row widths agree") },
            b,
        )
    }
}

/// `M = max(3, number of leaf occurrences)`.
pub fn penalty_constant(f: &Formula) -> Rational {
    int(f.atomic_term_count().max(3) as i64)
}

fn qsat_system(f: &Formula) -> (System, Linearization, Vec<String>) {
    let lin = linearize(f);
    let mut sys = System { p: f.p, cols: lin.num_columns(), rows: Vec::new() };
    for j in 0..f.n {
        sys.push(row(&[(Var::Col(j), 1)], 1));
        sys.push(row(&[(Var::Col(j), -1)], 0));
    }
    for r in &lin.rows {
        sys.push(r.clone());
    }
    let mut names: Vec<String> = (1..=f.n).map(|j| format!("y{j}")).collect();
    names.extend(lin.gates.iter().enumerate().map(|(k, e)| format!("g{}={}", k + 1, e)));
    (sys, lin, names)
}

/// The optimistic reduction: the follower's `y` objective ranges over
/// `[-1, 1]^n`, gates carry a zero objective, and the leader maximizes the
/// output gate.
pub fn compile_qsat_optimistic(f: &Formula) -> CompilationArtifacts {
    let (sys, lin, names) = qsat_system(f);
    let (a, b_mat, b) = sys.build();
    let cols = sys.cols;
    let mut d = vec![Rational::zero(); cols];
    d[lin.output] = Rational::one();
    let lower = (0..cols).map(|j| if j < f.n { int(-1) } else { int(0) }).collect();
    let upper = (0..cols).map(|j| if j < f.n { int(1) } else { int(0) }).collect();
    let big_m = penalty_constant(f);
    CompilationArtifacts {
        instance: RobustBilevelInstance {
            p: f.p,
            n: cols,
            a,
            b_mat,
            b,
            d,
            leader_set: LeaderSet::AllBinary,
            uncertainty: UncertaintySet::Interval { lower, upper },
            mode_default: Mode::Optimistic,
            var_map: Some(names.clone()),
            big_m: Some(big_m.clone()),
        },
        var_map: names,
        big_m: Some(big_m),
        y_columns: (0..f.n).collect(),
        output_column: Some(lin.output),
    }
}

/// Appends follower columns to an instance: each new column gets the rows
/// in `rows(col)`, leader weight `weight`, and a certain follower
/// coefficient of 1.
fn append_columns(
    art: &mut CompilationArtifacts,
    names: Vec<String>,
    weight: &Rational,
    rows: impl Fn(usize, usize) -> Vec<LinearRow>,
) {
    let inst = &mut art.instance;
    let old = inst.n;
    let added = names.len();
    let cols = old + added;
    let mut sys = System { p: inst.p, cols, rows: Vec::new() };
    for (k, _) in names.iter().enumerate() {
        for r in rows(k, old + k) {
            sys.push(r);
        }
    }
    let (extra_a, extra_b, extra_rhs) = sys.build();
    let mut a_rows: Vec<Vector> = inst
        .a
        .row_vecs()
        .into_iter()
        .map(|mut r| {
            r.resize(cols, Rational::zero());
            r
        })
        .collect();
    a_rows.extend(extra_a.row_vecs());
    let mut b_rows = inst.b_mat.row_vecs();
    b_rows.extend(extra_b.row_vecs());
    let m = a_rows.len();
    inst.a = Matrix::from_rows(a_rows, cols).expect("row widths agree");
    inst.b_mat = if inst.p == 0 { Matrix::zeros(m, 0) } else { Matrix::from_rows(b_rows, inst.p).expect("row widths agree") };
    inst.b.extend(extra_rhs);
    inst.d.extend(std::iter::repeat_n(weight.clone(), added));
    inst.n = cols;
    let one = Rational::one();
    inst.uncertainty = match std::mem::replace(&mut inst.uncertainty, UncertaintySet::Discrete { scenarios: Vec::new() }) {
        UncertaintySet::Interval { mut lower, mut upper } => {
            lower.extend(std::iter::repeat_n(one.clone(), added));
            upper.extend(std::iter::repeat_n(one.clone(), added));
            UncertaintySet::Interval { lower, upper }
        }
        UncertaintySet::Discrete { scenarios } => UncertaintySet::Discrete {
            scenarios: scenarios.into_iter().map(|mut c| { c.extend(std::iter::repeat_n(one.clone(), added)); c }).collect(),
        },
        UncertaintySet::ConvexHull { points } => UncertaintySet::ConvexHull {
            points: points.into_iter().map(|mut c| { c.extend(std::iter::repeat_n(one.clone(), added)); c }).collect(),
        },
        UncertaintySet::ProductFinite { mut values } => {
            values.extend(std::iter::repeat_n(vec![one.clone()], added));
            UncertaintySet::ProductFinite { values }
        }
    };
    art.var_map.extend(names);
    inst.var_map = Some(art.var_map.clone());
}

/// The pessimistic reduction: the optimistic system plus, for each `y_i`,
/// a column `ȳ_i <= min(y_i, 1 - y_i)` with certain follower coefficient 1
/// and leader weight `M`.
pub fn compile_qsat_pessimistic(f: &Formula) -> CompilationArtifacts {
    let mut art = compile_qsat_optimistic(f);
    let big_m = art.big_m.clone().expect("qsat compilations carry M");
    let names = (1..=f.n).map(|i| format!("ybar{i}")).collect();
    append_columns(&mut art, names, &big_m, |k, col| {
        let (g, y) = (Var::Col(col), Var::Col(k));
        vec![row(&[(g, -1)], 0), row(&[(g, 1), (y, -1)], 0), row(&[(g, 1), (y, 1)], 1)]
    });
    art.instance.mode_default = Mode::Pessimistic;
    art
}

/// Relaxes the leader to `[0,1]^p`, adding for each `x_i` a follower column
/// `x̄_i <= min(x_i, 1 - x_i)` with certain follower coefficient 1 and
/// leader weight `-M`.
pub fn relax_leader(art: &CompilationArtifacts) -> CompilationArtifacts {
    let mut out = art.clone();
    let big_m = out.big_m.clone().unwrap_or_else(|| int(3));
    let p = out.instance.p;
    let names = (1..=p).map(|i| format!("xbar{i}")).collect();
    append_columns(&mut out, names, &-&big_m, |k, col| {
        let (g, x) = (Var::Col(col), Var::X(k));
        vec![row(&[(g, -1)], 0), row(&[(g, 1), (x, -1)], 0), row(&[(g, 1), (x, 1)], 1)]
    });
    out.instance.leader_set = LeaderSet::RelaxedBox;
    out
}

/// Replaces the box `[-1,1]^n` on the original `y` columns by the simplex
/// `conv{-e, -e + 2n·e_1, ..., -e + 2n·e_n}`; every other column keeps its
/// certain coefficient.
pub fn box_to_simplex(art: &CompilationArtifacts) -> Result<CompilationArtifacts, CompileError> {
    let UncertaintySet::Interval { lower, upper } = &art.instance.uncertainty else {
        return Err(CompileError::Shape("expected interval uncertainty".into()));
    };
    let cols = art.instance.n;
    for j in 0..cols {
        if art.y_columns.contains(&j) {
            if lower[j] != int(-1) || upper[j] != int(1) {
                return Err(CompileError::Shape(format!("column {j} is not [-1, 1]")));
            }
        } else if lower[j] != upper[j] {
            return Err(CompileError::Shape(format!("column {j} is not a point interval")));
        }
    }
    let n = art.y_columns.len() as i64;
    let base: Vector = lower.clone();
    let mut points = vec![base.clone()];
    for &j in &art.y_columns {
        let mut pt = base.clone();
        pt[j] = int(2 * n - 1);
        points.push(pt);
    }
    let mut out = art.clone();
    out.instance.uncertainty = UncertaintySet::ConvexHull { points };
    Ok(out)
}

/// The robust single-level problem `max_{x∈X} min_j c_j·x` as a bilevel
/// instance: the adversary picks `z = e_j`, products `u_ji = x_i z_j` are
/// linearized, and `y = Σ c_ji u_ji` is the leader's value.
pub fn compile_single_level_robust(x_set: &[Vector], scenarios: &[Vector]) -> Result<CompilationArtifacts, CompileError> {
    let Some(first) = x_set.first() else {
        return Err(CompileError::EmptyLeaderSet);
    };
    let p = first.len();
    let m = scenarios.len();
    if m == 0 {
        return Err(CompileError::Dimension("no scenarios".into()));
    }
    if let Some(x) = x_set.iter().find(|x| x.len() != p) {
        return Err(CompileError::Dimension(format!("leader point of length {}, expected {p}", x.len())));
    }
    if let Some(c) = scenarios.iter().find(|c| c.len() != p) {
        return Err(CompileError::Dimension(format!("scenario of length {}, expected {p}", c.len())));
    }
    let cols = 1 + m + m * p;
    let y = Var::Col(0);
    let z = |j: usize| Var::Col(1 + j);
    let u = |j: usize, i: usize| Var::Col(1 + m + j * p + i);
    let mut sys = System { p, cols, rows: Vec::new() };
    for j in 0..m {
        sys.push(row(&[(z(j), -1)], 0));
    }
    let sum: Vec<(Var, i64)> = (0..m).map(|j| (z(j), 1)).collect();
    let neg_sum: Vec<(Var, i64)> = (0..m).map(|j| (z(j), -1)).collect();
    sys.push(row(&sum, 1));
    sys.push(row(&neg_sum, -1));
    for j in 0..m {
        for i in 0..p {
            let x = Var::X(i);
            sys.push(row(&[(u(j, i), -1)], 0));
            sys.push(row(&[(z(j), 1), (x, 1), (u(j, i), -1)], 1));
            sys.push(row(&[(u(j, i), 1), (x, -1)], 0));
            sys.push(row(&[(u(j, i), 1), (z(j), -1)], 0));
        }
    }
    let mut up = LinearRow { terms: vec![(y, int(1))], rhs: int(0) };
    let mut down = LinearRow { terms: vec![(y, int(-1))], rhs: int(0) };
    for (j, c) in scenarios.iter().enumerate() {
        for (i, cji) in c.iter().enumerate() {
            if !cji.is_zero() {
                up.terms.push((u(j, i), -cji));
                down.terms.push((u(j, i), cji.clone()));
            }
        }
    }
    sys.push(up);
    sys.push(down);
    let (a, b_mat, b) = sys.build();
    let mut d = vec![Rational::zero(); cols];
    d[0] = Rational::one();
    let unit_scenarios = (0..m)
        .map(|j| {
            let mut c = vec![Rational::zero(); cols];
            c[1 + j] = Rational::one();
            c
        })
        .collect();
    let mut names = vec!["y".to_string()];
    names.extend((1..=m).map(|j| format!("z{j}")));
    for j in 1..=m {
        names.extend((1..=p).map(|i| format!("u{j}_{i}")));
    }
    Ok(CompilationArtifacts {
        instance: RobustBilevelInstance {
            p,
            n: cols,
            a,
            b_mat,
            b,
            d,
            leader_set: LeaderSet::Explicit { points: x_set.to_vec() },
            uncertainty: UncertaintySet::Discrete { scenarios: unit_scenarios },
            mode_default: Mode::Optimistic,
            var_map: Some(names.clone()),
            big_m: None,
        },
        var_map: names,
        big_m: None,
        y_columns: vec![0],
        output_column: Some(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilevel::{follower_response, solve_robust, Caps};
    use crate::lp::{solve_lp, Polyhedron, Sense};
    use crate::numeric::{frac, unit_vector};

    fn parse(text: &str, p: usize, n: usize) -> Formula {
        parse_formula(text, p, n).unwrap()
    }

    fn bits(k: usize, len: usize) -> Vec<bool> {
        (0..len).map(|i| k >> (len - 1 - i) & 1 == 1).collect()
    }

    /// Gate values forced by the linearization at binary inputs, via min and max LPs.
    fn forced_gates(f: &Formula, x: &[bool], y: &[bool]) -> Vec<Option<Rational>> {
        let art = compile_qsat_optimistic(f);
        let inst = &art.instance;
        let xv: Vector = x.iter().map(|&b| int(b as i64)).collect();
        let mut poly = inst.follower_polyhedron(&xv).unwrap();
        for (j, &bit) in y.iter().enumerate() {
            poly = poly.with_equality(&unit_vector(inst.n, j), &int(bit as i64)).unwrap();
        }
        (f.n..inst.n)
            .map(|g| {
                let e = unit_vector(inst.n, g);
                let hi = solve_lp(&poly, &e, Sense::Max).unwrap().value;
                let lo = solve_lp(&poly, &e, Sense::Min).unwrap().value;
                if hi.is_some() && hi == lo { hi } else { None }
            })
            .collect()
    }

    #[test]
    fn linearization_soundness() {
        let formulas = [
            parse("(and (or x1 y1) (not y1))", 1, 1),
            parse("(or (and x1 (not x2)) (and (not (or y1 y2)) (or x3 y3)))", 3, 3),
            parse("(not (and (or x1 x2) (or (not y1) (and y2 y1))))", 2, 2),
            parse("x2", 2, 0),
        ];
        for f in &formulas {
            let lin = linearize(f);
            for k in 0..1usize << (f.p + f.n) {
                let all = bits(k, f.p + f.n);
                let (x, y) = all.split_at(f.p);
                let forced = forced_gates(f, x, y);
                for (g, e) in lin.gates.iter().enumerate() {
                    assert_eq!(forced[g], Some(int(e.eval(x, y) as i64)), "{f} gate {e} at {all:?}");
                }
            }
        }
    }

    #[test]
    fn single_gates() {
        let and = parse("(and y1 y2)", 0, 2);
        assert_eq!(forced_gates(&and, &[], &[true, true]), vec![Some(int(1))]);
        let not = parse("(not y1)", 0, 1);
        assert_eq!(forced_gates(&not, &[], &[false]), vec![Some(int(1))]);
        let f = parse("(and (or x1 y1) (not y1))", 1, 1);
        let lin = linearize(&f);
        let out = lin.output - f.n;
        assert_eq!(forced_gates(&f, &[true], &[true])[out], Some(int(0)));
    }

    #[test]
    fn column_order_is_post_order() {
        let f = parse("(and (or x1 y1) (not y1))", 1, 1);
        let art = compile_qsat_pessimistic(&f);
        assert_eq!(art.var_map, vec!["y1", "g1=(or x1 y1)", "g2=(not y1)", "g3=(and (or x1 y1) (not y1))", "ybar1"]);
        assert_eq!(art.output_column, Some(3));
        assert_eq!(art.big_m, Some(int(3)));
        let UncertaintySet::Interval { lower, upper } = &art.instance.uncertainty else { panic!() };
        assert_eq!(lower, &vec![int(-1), int(0), int(0), int(0), int(1)]);
        assert_eq!(upper, &vec![int(1), int(0), int(0), int(0), int(1)]);
        assert_eq!(art.instance.d, vec![int(0), int(0), int(0), int(1), int(3)]);
    }

    #[test]
    fn big_m_floor() {
        let f = parse("(or (and y1 y2) (and (not y1) (or y2 y1)))", 0, 2);
        assert_eq!(compile_qsat_pessimistic(&f).big_m, Some(int(5)));
        assert_eq!(compile_qsat_pessimistic(&parse("y1", 0, 1)).big_m, Some(int(3)));
    }

    #[test]
    fn qsat_examples() {
        let caps = Caps::default();
        let value = |art: &CompilationArtifacts, mode| solve_robust(&art.instance, mode, &caps).unwrap().value;
        let y1 = parse("y1", 0, 1);
        let taut = parse("(or y1 (not y1))", 0, 1);
        assert_eq!(value(&compile_qsat_optimistic(&y1), Mode::Optimistic), int(0));
        assert_eq!(value(&compile_qsat_optimistic(&taut), Mode::Optimistic), int(1));
        assert_eq!(value(&compile_qsat_pessimistic(&y1), Mode::Pessimistic), int(0));
        assert_eq!(value(&compile_qsat_pessimistic(&taut), Mode::Pessimistic), int(1));
        assert_eq!(value(&compile_qsat_optimistic(&parse("(or x1 y1)", 1, 1)), Mode::Optimistic), int(1));
        let sat = parse("(and x1 (not x2))", 2, 0);
        assert_eq!(value(&compile_qsat_optimistic(&sat), Mode::Optimistic), int(1));
    }

    #[test]
    fn pessimistic_gadget_at_zero_scenario() {
        let f = parse("(or y1 (not y1))", 0, 1);
        let art = compile_qsat_pessimistic(&f);
        let mut c = vec![Rational::zero(); art.instance.n];
        let ybar = art.var_map.iter().position(|s| s == "ybar1").unwrap();
        c[ybar] = int(1);
        let (y, value) = follower_response(&art.instance, &[], &c, Mode::Pessimistic).unwrap();
        assert_eq!((y[0].clone(), y[ybar].clone()), (frac(1, 2), frac(1, 2)));
        assert!(value >= frac(3, 2));
    }

    #[test]
    fn relaxation_shape() {
        let f = parse("(or x1 y1)", 1, 1);
        let art = relax_leader(&compile_qsat_optimistic(&f));
        assert_eq!(art.instance.leader_set, LeaderSet::RelaxedBox);
        assert_eq!(art.var_map.last().unwrap(), "xbar1");
        let xbar = art.instance.n - 1;
        assert_eq!(art.instance.d[xbar], int(-3));
        let caps = Caps::default();
        assert_eq!(solve_robust(&art.instance, Mode::Optimistic, &caps).unwrap().value, int(1));
        // at binary x the gadget column is pinned to 0
        for x in [int(0), int(1)] {
            let poly: Polyhedron = art.instance.follower_polyhedron(&[x]).unwrap();
            let e = unit_vector(art.instance.n, xbar);
            assert_eq!(solve_lp(&poly, &e, Sense::Max).unwrap().value, Some(int(0)));
        }
    }

    #[test]
    fn simplex_points() {
        let art = compile_qsat_optimistic(&parse("(and y1 y2)", 0, 2));
        let simplex = box_to_simplex(&art).unwrap();
        let UncertaintySet::ConvexHull { points } = &simplex.instance.uncertainty else { panic!() };
        let on_y: Vec<Vector> = points.iter().map(|p| p[..2].to_vec()).collect();
        assert_eq!(on_y, vec![vec![int(-1), int(-1)], vec![int(3), int(-1)], vec![int(-1), int(3)]]);
        assert!(points.iter().all(|p| p[2] == int(0)));
        let one = box_to_simplex(&compile_qsat_optimistic(&parse("y1", 0, 1))).unwrap();
        let UncertaintySet::ConvexHull { points } = &one.instance.uncertainty else { panic!() };
        assert_eq!(points, &vec![vec![int(-1)], vec![int(1)]]);
        assert!(box_to_simplex(&simplex).is_err());
        let caps = Caps::default();
        assert_eq!(solve_robust(&one.instance, Mode::Optimistic, &caps).unwrap().value, int(0));
    }

    #[test]
    fn single_level_examples() {
        let caps = Caps::default();
        let v = |xs: &[&[i64]], cs: &[&[i64]]| {
            let xs: Vec<Vector> = xs.iter().map(|x| x.iter().map(|&a| int(a)).collect()).collect();
            let cs: Vec<Vector> = cs.iter().map(|x| x.iter().map(|&a| int(a)).collect()).collect();
            let art = compile_single_level_robust(&xs, &cs).unwrap();
            solve_robust(&art.instance, Mode::Optimistic, &caps).unwrap().value
        };
        assert_eq!(v(&[&[0], &[1]], &[&[1], &[-1]]), int(0));
        assert_eq!(v(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]), int(0));
        assert_eq!(v(&[&[0], &[1]], &[&[1]]), int(1));
        assert!(compile_single_level_robust(&[vec![int(1)]], &[vec![int(1), int(2)]]).is_err());
        assert_eq!(compile_single_level_robust(&[], &[vec![int(1)]]), Err(CompileError::EmptyLeaderSet));
    }
}
