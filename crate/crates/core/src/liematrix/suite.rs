//! Exact checks of the rank-one and rank-two group identities.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cluster::{chart_var, compose, ChartKind};
use crate::dtengine::{apply_move, Move};
use crate::rootdata::{CartanMatrix, PairWord, WeylWord};
use crate::seed::VertexId;
use crate::symfun::RationalFunction;

use super::{
    coweight, e_minus, e_plus, lift, minor, random_nonzero, random_positive, s_bar, sl_section, GroupElement,
    LieError, Matrix, Scalar,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub trials: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl IdentityReport {
    pub fn into_result(self) -> Result<(), LieError> {
        match self.verdict {
            Verdict::Pass => Ok(()),
            Verdict::Fail => Err(LieError::IdentityFailed {
                identity: self.identity,
                counterexample: self.counterexample.unwrap_or_default(),
            }),
        }
    }
}

type Trial<'a> = dyn FnMut(&mut ChaCha8Rng) -> Result<Option<String>, LieError> + 'a;

fn run(name: &str, trials: usize, rng: &mut ChaCha8Rng, f: &mut Trial<'_>) -> IdentityReport {
    for _ in 0..trials {
        let bad = match f(rng) {
            Ok(None) => continue,
            Ok(Some(c)) => c,
            Err(e) => e.to_string(),
        };
        return IdentityReport {
            identity: name.into(),
            trials,
            verdict: Verdict::Fail,
            counterexample: Some(bad),
        };
    }
    IdentityReport { identity: name.into(), trials, verdict: Verdict::Pass, counterexample: None }
}

fn q1() -> BigRational {
    BigRational::from_i64(1)
}

fn differ(lhs: &GroupElement, rhs: &GroupElement) -> Option<String> {
    (lhs != rhs).then(|| format!("lhs {lhs} != rhs {rhs}"))
}

/// Equality in PGL: `lhs = c * rhs` for a nonzero scalar `c`.
fn differ_projectively(lhs: &GroupElement, rhs: &GroupElement) -> Option<String> {
    let n = lhs.size();
    let pivot = (0..n * n).map(|k| (k / n, k % n)).find(|&(i, j)| !Scalar::is_zero(rhs.get(i, j)));
    let same = match pivot {
        Some((i, j)) => {
            let c = lhs.get(i, j) / rhs.get(i, j);
            !Scalar::is_zero(&c) && *lhs == rhs.scale(&c)
        }
        None => false,
    };
    (!same).then(|| format!("lhs {lhs} is not a multiple of rhs {rhs}"))
}

fn random_sl(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
    loop {
        let rows =
            (0..n).map(|_| (0..n).map(|_| BigRational::from_i64(rng.gen_range(-6..=6))).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if let Ok(s) = sl_section(&m) {
            return s;
        }
    }
}

fn random_gl(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| random_nonzero(rng)).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if !Scalar::is_zero(&m.det()) {
            return m;
        }
    }
}

fn prod(n: usize, fs: &[GroupElement]) -> GroupElement {
    Matrix::product(n, fs)
}

/// `e_a(p) e_{-a}(q) = e_{-a}(q/(1+pq)) (1+pq)^{H_a} e_a(p/(1+pq))`.
fn e_plus_e_minus(p: &BigRational, q: &BigRational) -> Result<Option<String>, LieError> {
    let r = q1() + p * q;
    let lhs = e_plus(2, 1, p)?.mul(&e_minus(2, 1, q)?);
    let rhs = prod(2, &[e_minus(2, 1, &(q / &r))?, super::coroot(2, 1, &r)?, e_plus(2, 1, &(p / &r))?]);
    Ok(differ(&lhs, &rhs))
}

fn y_check() -> Result<Option<String>, LieError> {
    // alpha is the level with C[alpha][beta] = -2; move (a,b,a,b) -> (b,a,b,a)
    let c = CartanMatrix::from_label("B2")?;
    let (alpha, beta) = (1usize, 0usize);
    let letters = vec![alpha as i64 + 1, beta as i64 + 1, alpha as i64 + 1, beta as i64 + 1];
    let w = PairWord::new(letters, &c)?;
    let (_, t) = apply_move(&w, &Move::braid(&w, 0, 4))
        .map_err(|e| LieError::IdentityFailed { identity: "y".into(), counterexample: e.to_string() })?;
    let pb = compose(&t, ChartKind::X, false).map_err(|e| LieError::Parse(e.to_string()))?;
    let ta = RationalFunction::named("t_a");
    let tb = RationalFunction::named("t_b");
    let mut subst = HashMap::new();
    for v in t.source.vertices() {
        let val = if *v == VertexId::new(alpha, 1) {
            ta.clone()
        } else if *v == VertexId::new(beta, 1) {
            tb.clone()
        } else {
            RationalFunction::one()
        };
        subst.insert(chart_var(ChartKind::X, v), val);
    }
    let one = RationalFunction::one();
    let s = one.add(&tb).add(&ta.mul(&tb));
    let big = s.add(&ta.mul(&tb)).add(&ta.mul(&ta).mul(&tb));
    let div = |a: &RationalFunction, b: &RationalFunction| a.div(b).expect("nonzero");
    let ta2tb = ta.mul(&ta).mul(&tb);
    let expected = [
        (VertexId::new(alpha, 0), div(&big, &s)),
        (VertexId::new(beta, 0), div(&ta2tb, &big)),
        (VertexId::new(alpha, 1), div(&ta, &big)),
        (VertexId::new(beta, 1), div(&s.mul(&s), &ta2tb)),
        (VertexId::new(alpha, 2), s.clone()),
        (VertexId::new(beta, 2), div(&tb.mul(&big), &s.mul(&s))),
    ];
    for (k, (v, want)) in expected.iter().enumerate() {
        let got = pb.images[v].substitute(&subst).map_err(|e| LieError::Parse(e.to_string()))?;
        if got != *want {
            return Ok(Some(format!("y{}: got {got}, expected {want}", k + 1)));
        }
    }
    Ok(None)
}

/// Every identity with its verdict.  `trials` random parameters are used
/// for the one-parameter identities and twice that many for the minor ones.
pub fn identity_suite(seed: u64, trials: usize) -> Vec<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    out.push(run("e+e- at p=q=1", 1, &mut rng, &mut |_| {
        let lhs = e_plus(2, 1, &q1())?.mul(&e_minus(2, 1, &q1())?);
        let want = GroupElement::from_i64_rows(&[&[2, 1], &[1, 1]])?;
        Ok(differ(&lhs, &want).or(e_plus_e_minus(&q1(), &q1())?))
    }));
    out.push(run("e+e-", trials, &mut rng, &mut |r| {
        e_plus_e_minus(&random_positive(r), &random_positive(r))
    }));
    out.push(run("e+s", trials, &mut rng, &mut |r| {
        let t = random_nonzero(r);
        let ti = t.recip();
        let lhs = e_plus(2, 1, &t)?.mul(&s_bar(2, 1)?);
        let rhs = prod(2, &[e_minus(2, 1, &ti)?, super::coroot(2, 1, &t)?, e_plus(2, 1, &-&ti)?]);
        Ok(differ(&lhs, &rhs))
    }));
    out.push(run("se-", trials, &mut rng, &mut |r| {
        let t = random_nonzero(r);
        let ti = t.recip();
        let lhs = s_bar::<BigRational>(2, 1)?.transpose().mul(&e_minus(2, 1, &t)?);
        let rhs = prod(2, &[e_minus(2, 1, &-&ti)?, super::coroot(2, 1, &t)?, e_plus(2, 1, &ti)?]);
        Ok(differ(&lhs, &rhs))
    }));
    out.push(run("braid lifts in SL3 and SL4", 1, &mut rng, &mut |_| {
        let a: GroupElement = lift(3, &WeylWord::new(vec![1, 2, 1]))?;
        let b: GroupElement = lift(3, &WeylWord::new(vec![2, 1, 2]))?;
        let c: GroupElement = lift(4, &WeylWord::new(vec![1, 3]))?;
        let d: GroupElement = lift(4, &WeylWord::new(vec![3, 1]))?;
        Ok(differ(&a, &b).or(differ(&c, &d)))
    }));
    out.push(run("minor transpose", 2 * trials, &mut rng, &mut |r| {
        let x = random_gl(3, r);
        let xt = x.transpose();
        Ok((1..3).find(|&a| minor(a, &x) != minor(a, &xt)).map(|a| format!("alpha {a}, x = {x}")))
    }));
    out.push(run("minor s-bar translation", 2 * trials, &mut rng, &mut |r| {
        let x = random_gl(3, r);
        for a in 1..3 {
            for b in (1..3).filter(|&b| b != a) {
                let s: GroupElement = s_bar(3, b)?;
                let m = minor(a, &x);
                if minor(a, &s.transpose().mul(&x)) != m || minor(a, &x.mul(&s)) != m {
                    return Ok(Some(format!("alpha {a}, beta {b}, x = {x}")));
                }
            }
        }
        Ok(None)
    }));
    out.push(run("minor unipotent invariance", 2 * trials, &mut rng, &mut |r| {
        let x = random_gl(3, r);
        let t = random_nonzero(r);
        for a in 1..3 {
            for b in 1..3 {
                let m = minor(a, &x);
                if minor(a, &x.mul(&e_plus(3, b, &t)?)) != m || minor(a, &e_minus(3, b, &t)?.mul(&x)) != m {
                    return Ok(Some(format!("alpha {a}, beta {b}, t = {t}, x = {x}")));
                }
            }
        }
        Ok(None)
    }));
    // A-side exchange for (a,-a) -> (-a,a), in SL2 and through both
    // embeddings of SL2 in SL3
    for n in [2usize, 3] {
        out.push(run(&format!("A-side (a,-a) exchange in SL{n}"), trials, &mut rng, &mut |r| {
            let x = random_sl(n, r);
            for a in 1..n {
                let s: GroupElement = s_bar(n, a)?;
                let si = s.transpose();
                let lhs = minor(a, &si.mul(&x).mul(&s));
                let mut other = q1();
                for b in (1..n).filter(|&b| b != a) {
                    // -C_ba is 1 for neighbours in type A
                    if b.abs_diff(a) == 1 {
                        other *= minor(b, &x);
                    }
                }
                let num = minor(a, &si.mul(&x)) * minor(a, &x.mul(&s)) + other;
                let d = minor(a, &x);
                if Scalar::is_zero(&d) {
                    continue;
                }
                if lhs != num / d {
                    return Ok(Some(format!("alpha {a}, x = {x}")));
                }
            }
            Ok(None)
        }));
    }
    out.push(run("A-side (a,b,a) -> (b,a,b) in SL3", trials, &mut rng, &mut |r| {
        let x = random_sl(3, r);
        for (a, b) in [(1, 2), (2, 1)] {
            let sa: GroupElement = s_bar(3, a)?;
            let sb: GroupElement = s_bar(3, b)?;
            let lhs = minor(b, &x.mul(&sb));
            let den = minor(a, &x.mul(&sa));
            if Scalar::is_zero(&den) {
                continue;
            }
            let num = minor(a, &x) * minor(b, &x.mul(&sa).mul(&sb))
                + minor(a, &x.mul(&sa).mul(&sb).mul(&sa)) * minor(b, &x);
            if lhs != num / den {
                return Ok(Some(format!("alpha {a}, beta {b}, x = {x}")));
            }
        }
        Ok(None)
    }));
    out.push(run("X-side (a,-a) -> (-a,a) in PGL3", trials, &mut rng, &mut |r| {
        let t = random_positive(r);
        let one = q1();
        let tp = &one + &t;
        let ti = t.recip();
        let rest = (&one + &ti).recip();
        for a in 1..3 {
            let lhs = prod(3, &[e_plus(3, a, &one)?, coweight(3, a, &t)?, e_minus(3, a, &one)?]);
            let mut fs = vec![
                coweight(3, a, &tp)?,
                e_minus(3, a, &one)?,
                coweight(3, a, &ti)?,
                e_plus(3, a, &one)?,
                coweight(3, a, &tp)?,
            ];
            for b in (1..3).filter(|&b| b != a) {
                fs.push(coweight(3, b, &rest)?);
            }
            if let Some(c) = differ_projectively(&lhs, &prod(3, &fs)) {
                return Ok(Some(format!("alpha {a}, t = {t}: {c}")));
            }
        }
        Ok(None)
    }));
    out.push(run("X-side (a,b,a) -> (b,a,b) in PGL3", trials, &mut rng, &mut |r| {
        let t = random_positive(r);
        let one = q1();
        let tp = &one + &t;
        let ti = t.recip();
        let rest = (&one + &ti).recip();
        for (a, b) in [(1, 2), (2, 1)] {
            let lhs = prod(
                3,
                &[e_plus(3, a, &one)?, coweight(3, a, &t)?, e_plus(3, b, &one)?, e_plus(3, a, &one)?],
            );
            let rhs = prod(
                3,
                &[
                    coweight(3, a, &tp)?,
                    coweight(3, b, &rest)?,
                    e_plus(3, b, &one)?,
                    coweight(3, b, &ti)?,
                    e_plus(3, a, &one)?,
                    e_plus(3, b, &one)?,
                    coweight(3, b, &tp)?,
                    coweight(3, a, &rest)?,
                ],
            );
            if let Some(c) = differ_projectively(&lhs, &rhs) {
                return Ok(Some(format!("alpha {a}, beta {b}, t = {t}: {c}")));
            }
        }
        Ok(None)
    }));
    out.push(run("X-side (a,b,a,b) -> (b,a,b,a), y1..y6 from mutations", 1, &mut rng, &mut |_| y_check()));
    out
}

/// Value of `y1` at `t_a = t_b = 1` computed from the mutation pullback.
pub fn y1_at_one() -> Result<BigRational, LieError> {
    let c = CartanMatrix::from_label("B2")?;
    let w = PairWord::parse("2 1 2 1", &c)?;
    let (_, t) = apply_move(&w, &Move::braid(&w, 0, 4)).map_err(|e| LieError::Parse(e.to_string()))?;
    let pb = compose(&t, ChartKind::X, false).map_err(|e| LieError::Parse(e.to_string()))?;
    let vals: HashMap<_, _> =
        t.source.vertices().iter().map(|v| (chart_var(ChartKind::X, v), q1())).collect();
    pb.images[&VertexId::new(1, 0)].eval(&vals).map_err(|e| LieError::Parse(e.to_string()))
}
