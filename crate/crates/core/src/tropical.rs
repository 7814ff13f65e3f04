//! Tropical points, naive tropicalization and the DT degree criterion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cluster::{chart_var, separate, ChartKind, ClusterError, ClusterTransformation, Step};
use crate::seed::VertexId;
use crate::symfun::{RationalFunction, SymError, Var};

#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("negative constant in presentation: {0}")]
    NegativeConstant(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Point of the tropical X-torus, indexed like the unfrozen vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lamination {
    pub coords: Vec<BigInt>,
}

impl Lamination {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Lamination { coords }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Lamination { coords: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// `l_i^+` (or `l_i^- = -l_i^+` when `positive` is false).
    pub fn basic(i: usize, n: usize, positive: bool) -> Self {
        let mut coords = vec![BigInt::zero(); n];
        coords[i] = BigInt::from(if positive { 1 } else { -1 });
        Lamination { coords }
    }
}

/// Subtraction-free presentation of a rational function.
#[derive(Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigInt),
    Var(Var),
    Add(Vec<Rc<Expr>>),
    Mul(Vec<Rc<Expr>>),
    Div(Rc<Expr>, Rc<Expr>),
    Pow(Rc<Expr>, i64),
}

impl Expr {
    pub fn constant(c: i64) -> Rc<Expr> {
        Rc::new(Expr::Const(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Rc<Expr> {
        Rc::new(Expr::Var(v))
    }

    pub fn plus(a: Rc<Expr>, b: Rc<Expr>) -> Rc<Expr> {
        Rc::new(Expr::Add(vec![a, b]))
    }

    pub fn times(a: Rc<Expr>, b: Rc<Expr>) -> Rc<Expr> {
        Rc::new(Expr::Mul(vec![a, b]))
    }

    pub fn over(a: Rc<Expr>, b: Rc<Expr>) -> Rc<Expr> {
        Rc::new(Expr::Div(a, b))
    }

    pub fn pow(a: Rc<Expr>, k: i64) -> Rc<Expr> {
        match k {
            1 => a,
            _ => Rc::new(Expr::Pow(a, k)),
        }
    }

    /// Expanded presentation `num / den`; fails if a coefficient is negative.
    pub fn from_rational(f: &RationalFunction) -> Result<Rc<Expr>, TropicalError> {
        let poly = |p: &crate::symfun::Poly| -> Result<Rc<Expr>, TropicalError> {
            let mut terms = Vec::new();
            for (m, c) in p.terms() {
                if c.is_negative() {
                    return Err(TropicalError::NegativeConstant(f.to_string()));
                }
                let mut factors = vec![Rc::new(Expr::Const(c.clone()))];
                for v in m.vars() {
                    factors.push(Expr::pow(Expr::var(v), i64::from(m.exp(v))));
                }
                terms.push(Rc::new(Expr::Mul(factors)));
            }
            Ok(Rc::new(Expr::Add(terms)))
        };
        Ok(Expr::over(poly(f.numer())?, poly(f.denom())?))
    }

    /// Parse a presentation using `+ * / ^ ( )`, integers and identifiers.
    /// Any `-` outside an exponent is reported as a negative constant.
    pub fn parse(src: &str) -> Result<Rc<Expr>, TropicalError> {
        let mut p = ExprParser { s: src.as_bytes(), pos: 0 };
        let e = p.sum()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    /// Exact value as a rational function.
    pub fn evaluate(self: &Rc<Expr>) -> Result<RationalFunction, TropicalError> {
        let mut memo: HashMap<*const Expr, RationalFunction> = HashMap::new();
        eval_rf(self, &mut memo)
    }
}

fn eval_rf(
    e: &Rc<Expr>,
    memo: &mut HashMap<*const Expr, RationalFunction>,
) -> Result<RationalFunction, TropicalError> {
    let key = Rc::as_ptr(e);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let v = match e.as_ref() {
        Expr::Const(c) => RationalFunction::from_bigint(c.clone()),
        Expr::Var(v) => RationalFunction::var(*v),
        Expr::Add(xs) => {
            let mut acc = RationalFunction::zero();
            for x in xs {
                acc = acc.add(&eval_rf(x, memo)?);
            }
            acc
        }
        Expr::Mul(xs) => {
            let mut acc = RationalFunction::one();
            for x in xs {
                acc = acc.mul(&eval_rf(x, memo)?);
            }
            acc
        }
        Expr::Div(a, b) => eval_rf(a, memo)?.div(&eval_rf(b, memo)?)?,
        Expr::Pow(a, k) => eval_rf(a, memo)?.pow(*k)?,
    };
    memo.insert(key, v.clone());
    Ok(v)
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> TropicalError {
        TropicalError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Rc<Expr>, TropicalError> {
        let mut terms = vec![self.product()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.product()?);
                }
                Some(b'-') => {
                    return Err(TropicalError::NegativeConstant(String::from_utf8_lossy(self.s).into_owned()))
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { Rc::new(Expr::Add(terms)) })
    }

    fn product(&mut self) -> Result<Rc<Expr>, TropicalError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::times(acc, self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::over(acc, self.power()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Rc<Expr>, TropicalError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let k: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("expected integer exponent"))?;
        Ok(Expr::pow(base, if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Rc<Expr>, TropicalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => Err(TropicalError::NegativeConstant(String::from_utf8_lossy(self.s).into_owned())),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt =
                    std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().expect("digits");
                Ok(Rc::new(Expr::Const(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Expr::var(crate::symfun::intern(
                    std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"),
                )))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Max-plus expression over integer coordinates.
#[derive(Debug, PartialEq, Eq)]
pub enum TExpr {
    Zero,
    Coord(usize),
    Max(Vec<Rc<TExpr>>),
    Sum(Vec<Rc<TExpr>>),
    Diff(Rc<TExpr>, Rc<TExpr>),
    Scale(i64, Rc<TExpr>),
}

impl fmt::Display for TExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join =
            |xs: &[Rc<TExpr>], sep: &str| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep);
        match self {
            TExpr::Zero => write!(f, "0"),
            TExpr::Coord(i) => write!(f, "x{i}"),
            TExpr::Max(xs) => write!(f, "max({})", join(xs, ", ")),
            TExpr::Sum(xs) => write!(f, "({})", join(xs, " + ")),
            TExpr::Diff(a, b) => write!(f, "({a} - {b})"),
            TExpr::Scale(k, a) => write!(f, "{k}*{a}"),
        }
    }
}

/// Naive tropicalization: sums become max, products sums, quotients
/// differences, powers integer multiples, and constants zero.
pub fn naive_tropicalize(e: &Rc<Expr>, coords: &[Var]) -> Result<Rc<TExpr>, TropicalError> {
    let index: HashMap<Var, usize> = coords.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut memo = HashMap::new();
    trop(e, &index, &mut memo)
}

fn trop(
    e: &Rc<Expr>,
    index: &HashMap<Var, usize>,
    memo: &mut HashMap<*const Expr, Rc<TExpr>>,
) -> Result<Rc<TExpr>, TropicalError> {
    let key = Rc::as_ptr(e);
    if let Some(t) = memo.get(&key) {
        return Ok(t.clone());
    }
    let t = match e.as_ref() {
        Expr::Const(c) => {
            if !c.is_positive() {
                return Err(TropicalError::NegativeConstant(c.to_string()));
            }
            Rc::new(TExpr::Zero)
        }
        Expr::Var(v) => {
            Rc::new(TExpr::Coord(*index.get(v).ok_or_else(|| TropicalError::UnknownVariable(v.name()))?))
        }
        Expr::Add(xs) => {
            Rc::new(TExpr::Max(xs.iter().map(|x| trop(x, index, memo)).collect::<Result<_, _>>()?))
        }
        Expr::Mul(xs) => {
            Rc::new(TExpr::Sum(xs.iter().map(|x| trop(x, index, memo)).collect::<Result<_, _>>()?))
        }
        Expr::Div(a, b) => Rc::new(TExpr::Diff(trop(a, index, memo)?, trop(b, index, memo)?)),
        Expr::Pow(a, k) => Rc::new(TExpr::Scale(*k, trop(a, index, memo)?)),
    };
    memo.insert(key, t.clone());
    Ok(t)
}

/// Evaluate a max-plus expression; shared subexpressions are computed once.
pub fn eval_texpr(t: &Rc<TExpr>, x: &[BigInt], memo: &mut HashMap<*const TExpr, BigInt>) -> BigInt {
    let key = Rc::as_ptr(t);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let v = match t.as_ref() {
        TExpr::Zero => BigInt::zero(),
        TExpr::Coord(i) => x[*i].clone(),
        TExpr::Max(xs) => xs.iter().map(|y| eval_texpr(y, x, memo)).max().expect("max of an empty list"),
        TExpr::Sum(xs) => xs.iter().map(|y| eval_texpr(y, x, memo)).sum(),
        TExpr::Diff(a, b) => eval_texpr(a, x, memo) - eval_texpr(b, x, memo),
        TExpr::Scale(k, a) => eval_texpr(a, x, memo) * k,
    };
    memo.insert(key, v.clone());
    v
}

/// Tropicalized reduced X-pullback: one max-plus component per target vertex.
#[derive(Debug)]
pub struct TropicalMap {
    pub source_vertices: Vec<VertexId>,
    pub components: BTreeMap<VertexId, Rc<TExpr>>,
}

impl TropicalMap {
    /// Image of a lamination, in the order of `components`.
    pub fn eval(&self, l: &Lamination) -> Lamination {
        let mut memo = HashMap::new();
        Lamination { coords: self.components.values().map(|t| eval_texpr(t, &l.coords, &mut memo)).collect() }
    }

    pub fn component(&self, v: &VertexId, l: &Lamination) -> Option<BigInt> {
        let mut memo = HashMap::new();
        self.components.get(v).map(|t| eval_texpr(t, &l.coords, &mut memo))
    }
}

/// Subtraction-free trees of the reduced X-pullback of `t`, built by pushing
/// the mutation formulas forward with shared subtrees.
pub fn pullback_trees(t: &ClusterTransformation) -> Result<BTreeMap<VertexId, Rc<Expr>>, TropicalError> {
    let mut cur: BTreeMap<VertexId, Rc<Expr>> = t
        .source
        .unfrozen()
        .into_iter()
        .map(|v| {
            let x = Expr::var(chart_var(ChartKind::X, &v));
            (v, x)
        })
        .collect();
    let mut seed = t.source.clone();
    for st in &t.steps {
        match st {
            Step::Mutate(c) => {
                let k = seed.index_of(c).map_err(ClusterError::from)?;
                let xc = cur[c].clone();
                let plus = Expr::plus(Expr::constant(1), xc.clone());
                let plus_inv = Expr::over(plus.clone(), xc.clone());
                let mut next = BTreeMap::new();
                for (a, xa) in &cur {
                    if a == c {
                        next.insert(a.clone(), Expr::pow(xc.clone(), -1));
                        continue;
                    }
                    let e = seed.eps_at(seed.index_of(a).map_err(ClusterError::from)?, k);
                    if e.is_zero() {
                        next.insert(a.clone(), xa.clone());
                        continue;
                    }
                    if !e.is_integer() {
                        return Err(ClusterError::NonIntegerExponent {
                            row: a.clone(),
                            col: c.clone(),
                            value: e.to_string(),
                        }
                        .into());
                    }
                    let e = e.to_integer();
                    let factor =
                        if e > 0 { Expr::pow(plus_inv.clone(), -e) } else { Expr::pow(plus.clone(), -e) };
                    next.insert(a.clone(), Expr::times(xa.clone(), factor));
                }
                cur = next;
            }
            Step::Iso(m) => {
                cur = cur.into_iter().map(|(v, e)| (m.get(&v).cloned().unwrap_or(v), e)).collect();
            }
        }
        seed = st.apply(&seed).map_err(ClusterError::from)?;
    }
    Ok(cur)
}

pub fn tropicalize_transformation(t: &ClusterTransformation) -> Result<TropicalMap, TropicalError> {
    let source_vertices = t.source.unfrozen();
    let coords: Vec<Var> = source_vertices.iter().map(|v| chart_var(ChartKind::X, v)).collect();
    let index: HashMap<Var, usize> = coords.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut memo = HashMap::new();
    let mut components = BTreeMap::new();
    for (v, e) in pullback_trees(t)? {
        components.insert(v, trop(&e, &index, &mut memo)?);
    }
    Ok(TropicalMap { source_vertices, components })
}

/// `M[i][j] = deg_{X_i} t*(X_j)`, read from canonical forms of the images.
pub fn dt_degree_matrix(t: &ClusterTransformation) -> Result<Vec<Vec<i64>>, TropicalError> {
    let sep = separate(t)?;
    let rows = t.source.unfrozen();
    let cols = t.target.unfrozen();
    let vars: Vec<Var> = rows.iter().map(|v| chart_var(ChartKind::X, v)).collect();
    let columns: Vec<Vec<i64>> = cols
        .par_iter()
        .map(|a| -> Result<Vec<i64>, TropicalError> {
            let f = sep.image(a)?;
            vars.iter().map(|&v| Ok(f.variable_degree(v)?)).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((0..rows.len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
}

/// The same matrix from the tropical map at the basic laminations `l_i^+`.
pub fn lamination_degree_matrix(t: &ClusterTransformation) -> Result<Vec<Vec<i64>>, TropicalError> {
    let map = tropicalize_transformation(t)?;
    let n = map.source_vertices.len();
    let mut m = vec![Vec::new(); n];
    for (i, row) in m.iter_mut().enumerate() {
        let img = map.eval(&Lamination::basic(i, n, true));
        *row = img.coords.iter().map(|x| i64::try_from(x).expect("degree fits in i64")).collect();
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct DtCheck {
    pub verdict: bool,
    pub entries: Vec<Vec<i64>>,
    /// `(row, column, value)` entries that differ from `-I`.
    pub offending: Vec<(String, String, i64)>,
    /// Whether the lamination evaluation reproduced the same matrix.
    pub laminations_agree: bool,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

impl DtCheck {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("rows (variables): {}\n", self.rows.join(" ")));
        s.push_str(&format!("cols (images):    {}\n", self.cols.join(" ")));
        for r in &self.entries {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        for (i, j, v) in &self.offending {
            s.push_str(&format!("offending: deg_X[{i}] image[{j}] = {v}\n"));
        }
        s.push_str(&format!("laminations agree: {}\n", self.laminations_agree));
        s.push_str(&format!("verdict: {}\n", if self.verdict { "PASS" } else { "FAIL" }));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "entries": self.entries, "verdict": self.verdict })
    }
}

/// Degree criterion: the matrix must be exactly `-I`.
pub fn check_dt(t: &ClusterTransformation) -> Result<DtCheck, TropicalError> {
    let m = dt_degree_matrix(t)?;
    let lam = lamination_degree_matrix(t)?;
    let rows: Vec<String> = t.source.unfrozen().iter().map(|v| v.to_string()).collect();
    let cols: Vec<String> = t.target.unfrozen().iter().map(|v| v.to_string()).collect();
    let mut offending = Vec::new();
    for (i, r) in m.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            let want = if rows[i] == cols[j] { -1 } else { 0 };
            if x != want {
                offending.push((rows[i].clone(), cols[j].clone(), x));
            }
        }
    }
    let square = rows.len() == cols.len();
    Ok(DtCheck {
        verdict: square && offending.is_empty(),
        laminations_agree: lam == m,
        entries: m,
        offending,
        rows,
        cols,
    })
}
