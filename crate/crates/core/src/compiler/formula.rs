//! Boolean circuits over leader variables `x1..xp` and follower variables `y1..yn`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: {var} is out of range (p = {p}, n = {n})")]
    OutOfRange { line: usize, column: usize, var: String, p: usize, n: usize },
    #[error("line {line}: expected a header `p=<int> n=<int>`")]
    Header { line: usize },
}

/// Formula node; variable indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    X(usize),
    Y(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub p: usize,
    pub n: usize,
    pub root: Expr,
}

impl Expr {
    pub fn negate(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, x: &[bool], y: &[bool]) -> bool {
        match self {
            Expr::X(i) => x[*i],
            Expr::Y(j) => y[*j],
            Expr::Not(a) => !a.eval(x, y),
            Expr::And(a, b) => a.eval(x, y) && b.eval(x, y),
            Expr::Or(a, b) => a.eval(x, y) || b.eval(x, y),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            Expr::X(_) | Expr::Y(_) => 1,
            Expr::Not(a) => a.leaves(),
            Expr::And(a, b) | Expr::Or(a, b) => a.leaves() + b.leaves(),
        }
    }

    fn max_index(&self) -> (Option<usize>, Option<usize>) {
        let join = |a: (Option<usize>, Option<usize>), b: (Option<usize>, Option<usize>)| (a.0.max(b.0), a.1.max(b.1));
        match self {
            Expr::X(i) => (Some(*i), None),
            Expr::Y(j) => (None, Some(*j)),
            Expr::Not(a) => a.max_index(),
            Expr::And(a, b) | Expr::Or(a, b) => join(a.max_index(), b.max_index()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::X(i) => write!(f, "x{}", i + 1),
            Expr::Y(j) => write!(f, "y{}", j + 1),
            Expr::Not(a) => write!(f, "(not {a})"),
            Expr::And(a, b) => write!(f, "(and {a} {b})"),
            Expr::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl Formula {
    /// Wraps an expression, checking its indices against `p` and `n`.
    pub fn new(p: usize, n: usize, root: Expr) -> Option<Self> {
        let (xi, yj) = root.max_index();
        (xi.is_none_or(|i| i < p) && yj.is_none_or(|j| j < n)).then_some(Formula { p, n, root })
    }

    pub fn eval(&self, x: &[bool], y: &[bool]) -> bool {
        self.root.eval(x, y)
    }

    /// Number of leaf occurrences.
    pub fn atomic_term_count(&self) -> usize {
        self.root.leaves()
    }

    /// Header line plus expression, as read by [`parse_formula_file`].
    pub fn to_file(&self) -> String {
        format!("p={} n={}\n{}\n", self.p, self.n, self.root)
    }
}

struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, first_line: usize) -> Vec<Token> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch == ';' {
                break;
            }
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            if ch == '(' || ch == ')' {
                i += 1;
            } else {
                while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' && chars[i] != ')' && chars[i] != ';' {
                    i += 1;
                }
            }
            out.push(Token { text: chars[start..i].iter().collect(), line: first_line + l, column: start + 1 });
        }
    }
    out
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    p: usize,
    n: usize,
    end: (usize, usize),
}

impl Parser {
    fn err(&self, tok: Option<&Token>, message: impl Into<String>) -> FormulaError {
        let (line, column) = tok.map_or(self.end, |t| (t.line, t.column));
        FormulaError::Syntax { line, column, message: message.into() }
    }

    fn expr(&mut self) -> Result<Expr, FormulaError> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return Err(self.err(None, "unexpected end of input"));
        };
        self.pos += 1;
        match tok.text.as_str() {
            "(" => {
                let Some(op) = self.tokens.get(self.pos) else {
                    return Err(self.err(None, "expected an operator"));
                };
                let (op_text, op_pos) = (op.text.clone(), self.pos);
                self.pos += 1;
                let node = match op_text.as_str() {
                    "not" => Expr::negate(self.expr()?),
                    "and" => {
                        let a = self.expr()?;
                        Expr::and(a, self.expr()?)
                    }
                    "or" => {
                        let a = self.expr()?;
                        Expr::or(a, self.expr()?)
                    }
                    other => {
                        return Err(self.err(self.tokens.get(op_pos), format!("unknown operator `{other}`")));
                    }
                };
                match self.tokens.get(self.pos) {
                    Some(t) if t.text == ")" => {
                        self.pos += 1;
                        Ok(node)
                    }
                    t => Err(self.err(t, format!("expected `)` to close `{op_text}`"))),
                }
            }
            ")" => Err(self.err(Some(tok), "unexpected `)`")),
            text => {
                let mut chars = text.chars();
                let kind = chars.next();
                let digits = chars.as_str();
                let index: Option<usize> = digits.parse().ok().filter(|&k| k >= 1 && !digits.starts_with('+'));
                let (Some(k), Some('x' | 'y')) = (index, kind) else {
                    return Err(self.err(Some(tok), format!("expected xI, yJ or `(`, found `{text}`")));
                };
                let (limit, node) = if kind == Some('x') { (self.p, Expr::X(k - 1)) } else { (self.n, Expr::Y(k - 1)) };
                if k > limit {
                    return Err(FormulaError::OutOfRange {
                        line: tok.line,
                        column: tok.column,
                        var: text.to_string(),
                        p: self.p,
                        n: self.n,
                    });
                }
                Ok(node)
            }
        }
    }
}

fn parse_at(text: &str, p: usize, n: usize, first_line: usize) -> Result<Formula, FormulaError> {
    let tokens = tokenize(text, first_line);
    let lines: Vec<&str> = text.lines().collect();
    let end = (first_line + lines.len().saturating_sub(1), lines.last().map_or(0, |l| l.chars().count()) + 1);
    let mut parser = Parser { tokens, pos: 0, p, n, end };
    let root = parser.expr()?;
    if let Some(extra) = parser.tokens.get(parser.pos) {
        return Err(parser.err(Some(extra), format!("trailing input `{}`", extra.text)));
    }
    Ok(Formula { p, n, root })
}

/// Parses an s-expression `(and e e) | (or e e) | (not e) | xI | yJ`.
/// Text after `;` on a line is ignored.
pub fn parse_formula(text: &str, p: usize, n: usize) -> Result<Formula, FormulaError> {
    parse_at(text, p, n, 1)
}

/// Parses a formula file: a header line `p=<int> n=<int>` followed by the expression.
pub fn parse_formula_file(text: &str) -> Result<Formula, FormulaError> {
    let mut offset = 0;
    for (idx, raw) in text.split_inclusive('\n').enumerate() {
        let content = raw.split(';').next().unwrap_or("").trim();
        offset += raw.len();
        if content.is_empty() {
            continue;
        }
        let mut p = None;
        let mut n = None;
        for field in content.split_whitespace() {
            match field.split_once('=') {
                Some(("p", v)) => p = v.parse().ok(),
                Some(("n", v)) => n = v.parse().ok(),
                _ => return Err(FormulaError::Header { line: idx + 1 }),
            }
        }
        let (Some(p), Some(n)) = (p, n) else {
            return Err(FormulaError::Header { line: idx + 1 });
        };
        return parse_at(&text[offset..], p, n, idx + 2);
    }
    Err(FormulaError::Header { line: 1 })
}

/// Every expression with at most `max_leaves` leaves over the given
/// variables, up to the order of `and`/`or` operands. Negation is applied to
/// leaves and binary nodes but never doubled.
pub fn exhaustive_family(p: usize, n: usize, max_leaves: usize) -> Vec<Formula> {
    let vars: Vec<Expr> = (0..p).map(Expr::X).chain((0..n).map(Expr::Y)).collect();
    // by_size[k] holds the positive (unnegated) expressions with k leaves
    let mut by_size: Vec<Vec<Expr>> = vec![Vec::new(), vars];
    let signed = |e: &Expr| [e.clone(), Expr::negate(e.clone())];
    for k in 2..=max_leaves {
        let mut level = Vec::new();
        for a_size in 1..=k / 2 {
            let b_size = k - a_size;
            let left: Vec<Expr> = by_size[a_size].iter().flat_map(signed).collect();
            let right: Vec<Expr> = by_size[b_size].iter().flat_map(signed).collect();
            for (i, a) in left.iter().enumerate() {
                let start = if a_size == b_size { i } else { 0 };
                for b in &right[start..] {
                    level.push(Expr::and(a.clone(), b.clone()));
                    level.push(Expr::or(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size
        .iter()
        .flat_map(|level| level.iter().flat_map(signed))
        .map(|root| Formula { p, n, root })
        .collect()
}

/// A random expression with exactly `leaves` leaves.
pub fn random_formula<R: Rng>(rng: &mut R, p: usize, n: usize, leaves: usize) -> Formula {
    assert!(p + n > 0 && leaves > 0, "need a variable and a leaf");
    fn build<R: Rng>(rng: &mut R, p: usize, n: usize, leaves: usize) -> Expr {
        let node = if leaves == 1 {
            let k = rng.gen_range(0..p + n);
            if k < p {
                Expr::X(k)
            } else {
                Expr::Y(k - p)
            }
        } else {
            let left = rng.gen_range(1..leaves);
            let a = build(rng, p, n, left);
            let b = build(rng, p, n, leaves - left);
            if rng.gen_bool(0.5) {
                Expr::and(a, b)
            } else {
                Expr::or(a, b)
            }
        };
        if rng.gen_bool(0.3) {
            Expr::negate(node)
        } else {
            node
        }
    }
    Formula { p, n, root: build(rng, p, n, leaves) }
}
