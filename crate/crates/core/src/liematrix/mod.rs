//! Exact type-A matrix model: one-parameter subgroups, lifted Weyl
//! elements, Gaussian decomposition, principal minors, the twist map and
//! the maps between the group and the cluster charts.
//!
//! Coweights `t^{H^a}` are represented by `diag(t,..,t,1,..,1)` with `a`
//! copies of `t`; these are only meaningful up to the torus, so comparisons
//! of group elements go through [`TorusCoset`].

mod matrix;
mod suite;

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cluster::{chart_var, ChartKind, PullbackMap};
use crate::rootdata::{CartanMatrix, PairWord, RootDataError, WeylWord};
use crate::seed::{amalgamate, StringDiagram, VertexId};
use crate::symfun::RationalFunction;

pub use matrix::{parse_rational, GroupElement, Matrix, Scalar};
pub use suite::{identity_suite, y1_at_one, IdentityReport, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("torus parameter must be nonzero")]
    ZeroTorusValue,
    #[error("root index {index} out of range for SL_{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("no Gaussian decomposition: leading minor {minor} vanishes")]
    NotGaussianDecomposable { minor: usize },
    #[error("element is not in the double Bruhat cell: {0}")]
    NotInCell(String),
    #[error("word has Cartan type {got}, expected A{expected}")]
    RankMismatch { expected: usize, got: String },
    #[error("minor {0} vanishes")]
    VanishingMinor(String),
    #[error("string {vertex} receives two values: {left} and {right}")]
    GluingMismatch { vertex: VertexId, left: String, right: String },
    #[error("pivot entry ({0}, {1}) is zero")]
    DegeneratePattern(usize, usize),
    #[error("identity {identity} failed: {counterexample}")]
    IdentityFailed { identity: String, counterexample: String },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    EPlus,
    EMinus,
    Coroot,
    Coweight,
}

fn check_index(n: usize, alpha: usize) -> Result<(), LieError> {
    if alpha == 0 || alpha >= n {
        return Err(LieError::IndexOutOfRange { index: alpha, n });
    }
    Ok(())
}

/// Generator of `GL_n`; `alpha` is 1-based.
pub fn gen<F: Scalar>(n: usize, kind: GenKind, alpha: usize, t: &F) -> Result<Matrix<F>, LieError> {
    check_index(n, alpha)?;
    let a = alpha - 1;
    let mut m = Matrix::identity(n);
    match kind {
        GenKind::EPlus => m.set(a, a + 1, t.clone()),
        GenKind::EMinus => m.set(a + 1, a, t.clone()),
        GenKind::Coroot => {
            let inv = t.inv().ok_or(LieError::ZeroTorusValue)?;
            m.set(a, a, t.clone());
            m.set(a + 1, a + 1, inv);
        }
        GenKind::Coweight => {
            if t.is_zero() {
                return Err(LieError::ZeroTorusValue);
            }
            for i in 0..alpha {
                m.set(i, i, t.clone());
            }
        }
    }
    Ok(m)
}

pub fn e_plus<F: Scalar>(n: usize, alpha: usize, t: &F) -> Result<Matrix<F>, LieError> {
    gen(n, GenKind::EPlus, alpha, t)
}

pub fn e_minus<F: Scalar>(n: usize, alpha: usize, t: &F) -> Result<Matrix<F>, LieError> {
    gen(n, GenKind::EMinus, alpha, t)
}

pub fn coroot<F: Scalar>(n: usize, alpha: usize, t: &F) -> Result<Matrix<F>, LieError> {
    gen(n, GenKind::Coroot, alpha, t)
}

pub fn coweight<F: Scalar>(n: usize, alpha: usize, t: &F) -> Result<Matrix<F>, LieError> {
    gen(n, GenKind::Coweight, alpha, t)
}

/// `s̄_a = e_a(-1) e_{-a}(1) e_a(-1)`, i.e. the block `[[0,-1],[1,0]]`.
pub fn s_bar<F: Scalar>(n: usize, alpha: usize) -> Result<Matrix<F>, LieError> {
    check_index(n, alpha)?;
    let a = alpha - 1;
    let mut m = Matrix::identity(n);
    m.set(a, a, F::zero());
    m.set(a + 1, a + 1, F::zero());
    m.set(a, a + 1, F::from_i64(-1));
    m.set(a + 1, a, F::one());
    Ok(m)
}

fn type_a(n: usize) -> Result<CartanMatrix, LieError> {
    if n < 2 {
        return Err(LieError::IndexOutOfRange { index: 1, n });
    }
    Ok(CartanMatrix::from_label(&format!("A{}", n - 1))?)
}

/// Lift of a reduced word.
pub fn lift<F: Scalar>(n: usize, w: &WeylWord) -> Result<Matrix<F>, LieError> {
    let c = type_a(n)?;
    if !c.is_reduced(w)? {
        return Err(LieError::NotReduced(w.letters.clone()));
    }
    Ok(lift_unchecked(n, &w.letters))
}

fn lift_unchecked<F: Scalar>(n: usize, letters: &[usize]) -> Matrix<F> {
    let mut m = Matrix::identity(n);
    for &a in letters {
        m = m.mul(&s_bar(n, a).expect("letter in range"));
    }
    m
}

/// `([x]_-, [x]_0, [x]_+)`.
pub type Ldu<F> = (Matrix<F>, Matrix<F>, Matrix<F>);

pub fn gauss<F: Scalar>(x: &Matrix<F>) -> Result<Ldu<F>, LieError> {
    let n = x.size();
    let mut u = x.rows();
    let mut l = Matrix::identity(n);
    for k in 0..n {
        let inv = u[k][k].inv().ok_or(LieError::NotGaussianDecomposable { minor: k + 1 })?;
        for i in k + 1..n {
            if u[i][k].is_zero() {
                continue;
            }
            let f = u[i][k].mul(&inv);
            for j in k..n {
                u[i][j] = u[i][j].sub(&f.mul(&u[k][j]));
            }
            l.set(i, k, f);
        }
    }
    let d: Vec<F> = (0..n).map(|i| u[i][i].clone()).collect();
    let mut up = Matrix::identity(n);
    for i in 0..n {
        let inv = d[i].inv().expect("pivot checked");
        for j in i + 1..n {
            up.set(i, j, u[i][j].mul(&inv));
        }
    }
    Ok((l, Matrix::diag(d), up))
}

/// `Δ_alpha`: the leading `alpha x alpha` minor.
pub fn minor<F: Scalar>(alpha: usize, x: &Matrix<F>) -> F {
    x.leading_minor(alpha)
}

/// Rescale the first row so that the determinant is one.
pub fn sl_section<F: Scalar>(x: &Matrix<F>) -> Result<Matrix<F>, LieError> {
    let n = x.size();
    let inv = x.det().inv().ok_or(LieError::Singular)?;
    let mut d = vec![F::one(); n];
    d[0] = inv;
    Ok(Matrix::diag(d).mul(x))
}

fn cell_ranks<F: Scalar>(x: &Matrix<F>, w: &Matrix<F>, lower_left: bool) -> Option<(usize, usize)> {
    let n = x.size();
    for i in 0..n {
        for j in 0..n {
            let (rows, cols): (Vec<usize>, Vec<usize>) = if lower_left {
                ((i..n).collect(), (0..=j).collect())
            } else {
                ((0..=i).collect(), (j..n).collect())
            };
            if x.sub_rank(&rows, &cols) != w.sub_rank(&rows, &cols) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Membership in `B+ u B+ ∩ B- v B-`, by comparing ranks of corner
/// submatrices with those of the permutation matrices.
pub fn in_double_cell<F: Scalar>(x: &Matrix<F>, u: &WeylWord, v: &WeylWord) -> Result<(), LieError> {
    let n = x.size();
    let ub: Matrix<F> = lift(n, u)?;
    let vb: Matrix<F> = lift(n, v)?;
    if let Some((i, j)) = cell_ranks(x, &ub, true) {
        return Err(LieError::NotInCell(format!("B+uB+ rank test fails at ({}, {})", i + 1, j + 1)));
    }
    if let Some((i, j)) = cell_ranks(x, &vb, false) {
        return Err(LieError::NotInCell(format!("B-vB- rank test fails at ({}, {})", i + 1, j + 1)));
    }
    Ok(())
}

/// `η(x) = ([ū⁻¹x]₋⁻¹ ū⁻¹ x v̄' [x v̄']₊⁻¹)ᵗ` with `v̄'` the lift of `v⁻¹`.
pub fn twist<F: Scalar>(x: &Matrix<F>, u: &WeylWord, v: &WeylWord) -> Result<Matrix<F>, LieError> {
    let n = x.size();
    in_double_cell(x, u, v)?;
    let ubar_inv = lift::<F>(n, u)?.transpose();
    let vbar = lift::<F>(n, &v.inverse())?;
    let ux = ubar_inv.mul(x);
    let xv = x.mul(&vbar);
    let (l, _, _) = gauss(&ux)?;
    let (_, _, up) = gauss(&xv)?;
    let linv = l.inverse().ok_or(LieError::Singular)?;
    let uinv = up.inverse().ok_or(LieError::Singular)?;
    Ok(linv.mul(&ux).mul(&vbar).mul(&uinv).transpose())
}

fn check_type_a(word: &PairWord) -> Result<usize, LieError> {
    let rank = word.cartan().rank();
    let expected = type_a(rank + 1)?;
    if word.cartan().entries() != expected.entries() {
        return Err(LieError::RankMismatch { expected: rank, got: word.cartan().describe() });
    }
    Ok(rank + 1)
}

/// Amalgamated χ: the ordered product of letters with a coweight for every
/// string; strings missing from `x` are taken to be 1.
pub fn chi_eval<F: Scalar>(word: &PairWord, x: &BTreeMap<VertexId, F>) -> Result<Matrix<F>, LieError> {
    let n = check_type_a(word)?;
    let diagram = StringDiagram::new(word);
    let cw = |v: VertexId| -> Result<Matrix<F>, LieError> {
        let a = v.level().expect("string vertex");
        match x.get(&v) {
            Some(t) => coweight(n, a + 1, t),
            None => Ok(Matrix::identity(n)),
        }
    };
    let mut m = Matrix::identity(n);
    for a in 0..n - 1 {
        m = m.mul(&cw(VertexId::new(a, 0))?);
    }
    for (k, &l) in word.letters().iter().enumerate() {
        let a = word.level(k);
        let e = if l < 0 { e_minus(n, a + 1, &F::one())? } else { e_plus(n, a + 1, &F::one())? };
        m = m.mul(&e);
        let (_, right) = diagram.letter_strings(k);
        m = m.mul(&cw(right)?);
    }
    Ok(m)
}

fn glue<F: Scalar>(out: &mut BTreeMap<VertexId, F>, v: VertexId, val: F) -> Result<(), LieError> {
    if val.is_zero() {
        return Err(LieError::VanishingMinor(format!("for string {v}")));
    }
    if let Some(old) = out.get(&v) {
        if *old != val {
            return Err(LieError::GluingMismatch {
                vertex: v,
                left: old.to_string(),
                right: val.to_string(),
            });
        }
        return Ok(());
    }
    out.insert(v, val);
    Ok(())
}

/// A-coordinates of `x` (expected in `SL_n`): each letter `k` reads minors
/// of `ū_{<k}⁻¹ x v̄_{>k}'`, and shared strings must agree.
pub fn psi_eval<F: Scalar>(word: &PairWord, x: &Matrix<F>) -> Result<BTreeMap<VertexId, F>, LieError> {
    let n = check_type_a(word)?;
    let diagram = StringDiagram::new(word);
    let letters = word.letters();
    let mut out = BTreeMap::new();
    if letters.is_empty() {
        for b in 0..n - 1 {
            glue(&mut out, VertexId::new(b, 0), minor(b + 1, x))?;
        }
        return Ok(out);
    }
    for k in 0..letters.len() {
        let u_before: Vec<usize> =
            letters[..k].iter().filter(|&&l| l < 0).map(|l| l.unsigned_abs() as usize).collect();
        // lift of (v_{>k})⁻¹: the positive letters after k, reversed
        let v_after_inv: Vec<usize> =
            letters[k + 1..].iter().rev().filter(|&&l| l > 0).map(|&l| l as usize).collect();
        let ubar_inv = lift_unchecked::<F>(n, &u_before).transpose();
        let xk = ubar_inv.mul(x).mul(&lift_unchecked(n, &v_after_inv));
        let a = word.level(k);
        let (left, right) = diagram.letter_strings(k);
        let sa: Matrix<F> = s_bar(n, a + 1)?;
        let (lv, rv) = if letters[k] < 0 {
            (minor(a + 1, &xk), minor(a + 1, &sa.transpose().mul(&xk)))
        } else {
            (minor(a + 1, &xk.mul(&sa)), minor(a + 1, &xk))
        };
        glue(&mut out, left, lv)?;
        glue(&mut out, right, rv)?;
        for b in (0..n - 1).filter(|&b| b != a) {
            glue(&mut out, diagram.crossing_string(k, b), minor(b + 1, &xk))?;
        }
    }
    Ok(out)
}

/// Reduced p-map on values: `X_a = prod_b A_b^{eps_ab}` for unfrozen `a`.
pub fn p_route<F: Scalar>(
    word: &PairWord,
    a: &BTreeMap<VertexId, F>,
) -> Result<BTreeMap<VertexId, F>, LieError> {
    let (seed, _) = amalgamate(word);
    let mut out = BTreeMap::new();
    for v in seed.unfrozen() {
        let mut acc = F::one();
        for b in seed.vertices() {
            let e = seed.eps(&v, b).expect("vertex of the seed");
            if e.numer() == &0 {
                continue;
            }
            assert_eq!(*e.denom(), 1, "unfrozen rows are integral");
            let base = a.get(b).ok_or_else(|| LieError::VanishingMinor(format!("missing value for {b}")))?;
            acc = acc.mul(&base.powi(*e.numer()).ok_or_else(|| LieError::VanishingMinor(b.to_string()))?);
        }
        out.insert(v, acc);
    }
    Ok(out)
}

/// `χ ∘ p ∘ ψ` applied to the `SL_n` representative of `x`.
pub fn cluster_twist<F: Scalar>(word: &PairWord, x: &Matrix<F>) -> Result<Matrix<F>, LieError> {
    let a = psi_eval(word, &sl_section(x)?)?;
    chi_eval(word, &p_route(word, &a)?)
}

/// Symbolic `p ∘ ψ ∘ χ` on the reduced X-chart, as a pullback keyed by
/// unfrozen vertices with values in the chart variables `X_v`.
pub fn dt_oracle(word: &PairWord) -> Result<PullbackMap, LieError> {
    let (seed, _) = amalgamate(word);
    let xs: BTreeMap<VertexId, RationalFunction> = seed
        .unfrozen()
        .into_iter()
        .map(|v| {
            let var = chart_var(ChartKind::X, &v);
            (v, RationalFunction::var(var))
        })
        .collect();
    let g = chi_eval(word, &xs)?;
    let a = psi_eval(word, &sl_section(&g)?)?;
    Ok(PullbackMap { kind: ChartKind::X, images: p_route(word, &a)? })
}

/// Class of a matrix in `H\GL_n/H`, stored as a canonical representative.
///
/// Rows and columns are the two sides of a bipartite graph with an edge per
/// nonzero entry; scalings are fixed by making the entries on a BFS forest
/// equal to 1.  When the first row and column have no zeros this is the
/// usual normal form with ones in the first row and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCoset {
    pub normal: GroupElement,
}

impl TorusCoset {
    pub fn of(x: &GroupElement) -> Self {
        let n = x.size();
        let one = <BigRational as Scalar>::one();
        let mut row: Vec<Option<BigRational>> = vec![None; n];
        let mut col: Vec<Option<BigRational>> = vec![None; n];
        // node ids: rows 0..n, columns n..2n
        for start in 0..2 * n {
            let seen = if start < n { row[start].is_some() } else { col[start - n].is_some() };
            if seen {
                continue;
            }
            if start < n {
                row[start] = Some(one.clone());
            } else {
                col[start - n] = Some(one.clone());
            }
            let mut queue = VecDeque::from([start]);
            while let Some(node) = queue.pop_front() {
                if node < n {
                    let r = row[node].clone().expect("visited");
                    for j in 0..n {
                        let e = x.get(node, j);
                        if col[j].is_none() && !Scalar::is_zero(e) {
                            col[j] = Some((&r * e).recip());
                            queue.push_back(n + j);
                        }
                    }
                } else {
                    let j = node - n;
                    let c = col[j].clone().expect("visited");
                    for i in 0..n {
                        let e = x.get(i, j);
                        if row[i].is_none() && !Scalar::is_zero(e) {
                            row[i] = Some((&c * e).recip());
                            queue.push_back(i);
                        }
                    }
                }
            }
        }
        let mut m = x.clone();
        for i in 0..n {
            for j in 0..n {
                let r = row[i].as_ref().expect("all nodes visited");
                let c = col[j].as_ref().expect("all nodes visited");
                m.set(i, j, x.get(i, j) * r * c);
            }
        }
        TorusCoset { normal: m }
    }
}

/// Normal form with ones in the first row and column; fails if any of
/// those entries vanish (use [`TorusCoset::of`] then).
pub fn normalize_coset(x: &GroupElement) -> Result<TorusCoset, LieError> {
    for k in 0..x.size() {
        if Scalar::is_zero(x.get(0, k)) {
            return Err(LieError::DegeneratePattern(1, k + 1));
        }
        if Scalar::is_zero(x.get(k, 0)) {
            return Err(LieError::DegeneratePattern(k + 1, 1));
        }
    }
    Ok(TorusCoset::of(x))
}

pub fn same_coset(a: &GroupElement, b: &GroupElement) -> bool {
    TorusCoset::of(a) == TorusCoset::of(b)
}

/// Positive rational `p/q` with `1 <= p <= 9`, `1 <= q <= 5`.
pub fn random_positive<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=5i64).into())
}

/// Nonzero rational of either sign.
pub fn random_nonzero<R: Rng>(rng: &mut R) -> BigRational {
    let q = random_positive(rng);
    if rng.gen_bool(0.5) {
        -q
    } else {
        q
    }
}

/// A point of the cell: `χ` of positive random values on every string.
pub fn random_cell_point<R: Rng>(word: &PairWord, rng: &mut R) -> Result<GroupElement, LieError> {
    let (seed, _) = amalgamate(word);
    let xs: BTreeMap<VertexId, BigRational> =
        seed.vertices().iter().map(|v| (v.clone(), random_positive(rng))).collect();
    chi_eval(word, &xs)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistTrial {
    pub x: serde_json::Value,
    pub twist: serde_json::Value,
    pub cluster: serde_json::Value,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub word: String,
    pub trials: Vec<TwistTrial>,
    pub verdict: Verdict,
}

/// Compare `η` with `χ ∘ p ∘ ψ` on random points of the cell.
pub fn twist_check<R: Rng>(word: &PairWord, trials: usize, rng: &mut R) -> Result<TwistReport, LieError> {
    let n = check_type_a(word)?;
    let (u, v) = (word.u(), word.v());
    let mut out = Vec::new();
    for _ in 0..trials {
        // random torus translates keep the frozen directions generic
        let h1: Vec<BigRational> = (0..n).map(|_| random_positive(rng)).collect();
        let h2: Vec<BigRational> = (0..n).map(|_| random_positive(rng)).collect();
        let x = Matrix::diag(h1).mul(&random_cell_point(word, rng)?).mul(&Matrix::diag(h2));
        let x = sl_section(&x)?;
        let t = twist(&x, &u, &v)?;
        let c = cluster_twist(word, &x)?;
        out.push(TwistTrial {
            x: x.to_json(),
            agree: same_coset(&t, &c),
            twist: TorusCoset::of(&t).normal.to_json(),
            cluster: TorusCoset::of(&c).normal.to_json(),
        });
    }
    let verdict = if out.iter().all(|t| t.agree) { Verdict::Pass } else { Verdict::Fail };
    Ok(TwistReport {
        word: word.letters().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
        trials: out,
        verdict,
    })
}
