//! Exact multivariate rational functions over Q.
//!
//! A [`RationalFunction`] is stored as `num / den` with integer polynomials,
//! `gcd(num, den) = 1` in Q[x], coprime integer contents, and a positive
//! leading coefficient of `den` (grlex). That form is unique, so derived
//! equality is mathematical equality.

mod gcd;
mod parse;
mod poly;
mod var;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use gcd::gcd as poly_gcd;
pub use parse::parse;
pub use poly::{grlex, Mono, Poly};
pub use var::{intern, lookup, var_name, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} has no assigned value")]
    UndefinedVariable(String),
    #[error("substitution produces a pole")]
    PoleAtSubstitution,
    #[error("the zero function has no degree")]
    ZeroFunction,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Three-valued answer of [`RationalFunction::is_positive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    True,
    False,
    /// The canonical form has mixed signs and no sample point was negative.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_bigint(BigInt::from(k))
    }

    pub fn from_bigint(k: BigInt) -> Self {
        RationalFunction { num: Poly::constant(k), den: Poly::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::canonical(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction { num: Poly::var(v), den: Poly::one() }
    }

    /// Shorthand: intern `name` and return it as a function.
    pub fn named(name: &str) -> Self {
        Self::var(intern(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::canonical(p, Poly::one())
    }

    /// Laurent monomial `prod v^e`.
    pub fn monomial(exps: &[(Var, i64)]) -> Self {
        let mut n = Vec::new();
        let mut d = Vec::new();
        for &(v, e) in exps {
            let idx = v.index();
            let slot = if e >= 0 { &mut n } else { &mut d };
            if slot.len() <= idx {
                slot.resize(idx + 1, 0);
            }
            slot[idx] += e.unsigned_abs() as u32;
        }
        Self::canonical(
            Poly::monomial(Mono::from_exponents(n), BigInt::one()),
            Poly::monomial(Mono::from_exponents(d), BigInt::one()),
        )
    }

    /// Build `num / den` and bring it to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = gcd::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::fix_content(num, den)
    }

    fn fix_content(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut c = gcd::int_gcd(&num.content(), &den.content());
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        if c.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction { num: num.div_int(&c), den: den.div_int(&c) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Constant value, if the function does not depend on any variable.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(BigRational::new(
                self.num.constant_value().unwrap_or_default(),
                self.den.constant_value().unwrap_or_else(BigInt::one),
            ))
        } else {
            None
        }
    }

    /// Exponents if the function is `c * prod v^e`.
    pub fn as_laurent_monomial(&self) -> Option<(BigRational, Vec<(Var, i64)>)> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let (nm, nc) = &self.num.terms()[0];
        let (dm, dc) = &self.den.terms()[0];
        let len = nm.exponents().len().max(dm.exponents().len());
        let mut out = Vec::new();
        for i in 0..len {
            let e = nm.exponents().get(i).copied().unwrap_or(0) as i64
                - dm.exponents().get(i).copied().unwrap_or(0) as i64;
            if e != 0 {
                out.push((Var::from_index(i), e));
            }
        }
        Some((BigRational::new(nc.clone(), dc.clone()), out))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::canonical(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_constant() && o.den.is_constant() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return Self::fix_content(n, self.den.mul(&o.den));
        }
        let g = if self.den.is_constant() || o.den.is_constant() {
            Poly::one()
        } else {
            gcd::gcd(&self.den, &o.den)
        };
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            // Coprime denominators: gcd(n, d1*d2) = 1 automatically.
            return Self::fix_content(n, self.den.mul(&o.den));
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul(&d2).add(&o.num.mul(&d1));
        Self::canonical(n, d1.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        Self::fix_content(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::fix_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SymError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<Self, SymError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        if e == 0 {
            return Ok(Self::one());
        }
        // A power of a canonical pair stays coprime.
        Ok(Self::fix_content(base.num.pow(e), base.den.pow(e)))
    }

    /// Max exponent of `v` in the numerator minus that in the denominator.
    pub fn variable_degree(&self, v: Var) -> Result<i64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        Ok(self.num.degree_in(v) as i64 - self.den.degree_in(v) as i64)
    }

    /// Min exponent of `v` in the numerator minus that in the denominator.
    pub fn variable_low_degree(&self, v: Var) -> Result<i64, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        Ok(self.num.min_degree_in(v) as i64 - self.den.min_degree_in(v) as i64)
    }

    /// Substitute every variable of `self` by the assigned function.
    pub fn substitute(&self, assignment: &HashMap<Var, RationalFunction>) -> Result<Self, SymError> {
        self.substitute_with(|v| assignment.get(&v).cloned())
    }

    /// As [`Self::substitute`], resolving variables through a closure.
    pub fn substitute_with(
        &self,
        lookup: impl Fn(Var) -> Option<RationalFunction>,
    ) -> Result<Self, SymError> {
        let vars = self.vars();
        let mut images = Vec::with_capacity(vars.len());
        for &v in &vars {
            let img = lookup(v).ok_or_else(|| SymError::UndefinedVariable(v.name()))?;
            let top = self.num.degree_in(v).max(self.den.degree_in(v));
            images.push((v, PowerCache::new(img, top)));
        }
        let n = eval_homogenized(&self.num, &mut images);
        let d = eval_homogenized(&self.den, &mut images);
        if d.is_zero() {
            return Err(SymError::PoleAtSubstitution);
        }
        Ok(Self::canonical(n, d))
    }

    /// Exact numeric evaluation.
    pub fn eval(&self, values: &HashMap<Var, BigRational>) -> Result<BigRational, SymError> {
        let n = eval_poly_q(&self.num, values)?;
        let d = eval_poly_q(&self.den, values)?;
        if d.is_zero() {
            return Err(SymError::PoleAtSubstitution);
        }
        Ok(n / d)
    }

    /// Sufficient positivity test; see [`Positivity`].
    pub fn is_positive(&self) -> Result<Positivity, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroFunction);
        }
        if self.den.all_coefficients_positive() {
            if self.num.all_coefficients_positive() {
                return Ok(Positivity::True);
            }
            if self.num.all_coefficients_negative() {
                return Ok(Positivity::False);
            }
        }
        let vars = self.vars();
        let samples: [(i64, i64); 4] = [(1, 1), (2, 1), (1, 2), (3, 1)];
        for k in 0..samples.len() {
            let values: HashMap<Var, BigRational> = vars
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let (p, q) = samples[(i + k) % samples.len()];
                    (v, BigRational::new(BigInt::from(p), BigInt::from(q)))
                })
                .collect();
            if let Ok(x) = self.eval(&values) {
                if !x.is_positive() {
                    return Ok(Positivity::False);
                }
            }
        }
        Ok(Positivity::Inconclusive)
    }

    /// Rename variables; unmapped variables are kept.
    pub fn rename(&self, map: &HashMap<Var, Var>) -> Self {
        let ren = |p: &Poly| {
            Poly::from_terms(p.terms().iter().map(|(m, c)| {
                let mut e: Vec<u32> = Vec::new();
                for (i, &k) in m.exponents().iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let v = Var::from_index(i);
                    let t = map.get(&v).copied().unwrap_or(v).index();
                    if e.len() <= t {
                        e.resize(t + 1, 0);
                    }
                    e[t] += k;
                }
                (Mono::from_exponents(e), c.clone())
            }))
        };
        Self::canonical(ren(&self.num), ren(&self.den))
    }
}

fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if a.is_constant() || b.is_constant() {
        return (a.clone(), b.clone());
    }
    let g = gcd::gcd(a, b);
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).expect("gcd divides"), b.div_exact(&g).expect("gcd divides"))
    }
}

struct PowerCache {
    num: Vec<Poly>,
    den: Vec<Poly>,
    top: u32,
}

impl PowerCache {
    fn new(f: RationalFunction, top: u32) -> Self {
        PowerCache { num: vec![Poly::one(), f.num], den: vec![Poly::one(), f.den], top }
    }

    fn get(v: &mut Vec<Poly>, k: u32) -> Poly {
        while v.len() <= k as usize {
            let next = v[v.len() - 1].mul(&v[1]);
            v.push(next);
        }
        v[k as usize].clone()
    }
}

/// `p(n_v/d_v) * prod d_v^top_v` as a polynomial.
fn eval_homogenized(p: &Poly, images: &mut [(Var, PowerCache)]) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = Poly::constant(c.clone());
        for (v, cache) in images.iter_mut() {
            let e = m.exp(*v);
            let top = cache.top;
            if e > 0 {
                t = t.mul(&PowerCache::get(&mut cache.num, e));
            }
            if top > e {
                t = t.mul(&PowerCache::get(&mut cache.den, top - e));
            }
        }
        out = out.add(&t);
    }
    out
}

fn eval_poly_q(p: &Poly, values: &HashMap<Var, BigRational>) -> Result<BigRational, SymError> {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = BigRational::from_integer(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = Var::from_index(i);
            let x = values.get(&v).ok_or_else(|| SymError::UndefinedVariable(v.name()))?;
            t *= num_traits::pow(x.clone(), e as usize);
        }
        acc += t;
    }
    Ok(acc)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.is_constant() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        parse(s)
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: &RationalFunction) -> RationalFunction {
                RationalFunction::$m(self, o)
            }
        }
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                RationalFunction::$m(&self, &o)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RationalFunction {
        RationalFunction::named("X")
    }
    fn y() -> RationalFunction {
        RationalFunction::named("Y")
    }
    fn k(n: i64) -> RationalFunction {
        RationalFunction::from_int(n)
    }

    #[test]
    fn arithmetic_examples() {
        let one = k(1);
        let lhs = &(&one + &x()) * &(&one - &x()) + x().pow(2).unwrap();
        assert!(lhs.is_one());
        let q = (x().pow(2).unwrap() - one.clone()).div(&(x() - one.clone())).unwrap();
        assert_eq!(q, x() + one.clone());
        assert!((&x().pow(-1).unwrap() * &x()).is_one());
        assert_eq!(x().div(&k(0)), Err(SymError::DivisionByZero));
        assert_eq!(k(0).pow(-1), Err(SymError::DivisionByZero));
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = (x() + y()).div(&(x() - y())).unwrap();
        let b = (k(2) * x() + k(2) * y()).div(&(k(2) * x() - k(2) * y())).unwrap();
        let c = (-x() - y()).div(&(y() - x())).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.denom().leading_coeff().is_positive());
        let half = k(1).div(&k(2)).unwrap();
        assert_eq!(half.as_constant(), Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn substitution_examples() {
        let xv = intern("X");
        let inv: HashMap<_, _> = [(xv, x().pow(-1).unwrap())].into();
        assert_eq!(x().substitute(&inv).unwrap().substitute(&inv).unwrap(), x());
        let yv = intern("Y");
        let m: HashMap<_, _> = [(xv, (y() + k(1)).div(&y()).unwrap())].into();
        let got = (k(1) + x()).substitute(&m).unwrap();
        assert_eq!(got, (k(2) * y() + k(1)).div(&y()).unwrap());
        assert_eq!(got.substitute(&HashMap::new()), Err(SymError::UndefinedVariable("Y".into())));
        let pole: HashMap<_, _> = [(xv, k(0))].into();
        assert_eq!(x().pow(-1).unwrap().substitute(&pole), Err(SymError::PoleAtSubstitution));
        let _ = yv;
    }

    #[test]
    fn degree_examples() {
        let xv = intern("X");
        let f = (k(1) + x()).pow(2).unwrap().div(&x()).unwrap();
        assert_eq!(f.variable_degree(xv), Ok(1));
        assert_eq!(x().pow(-1).unwrap().variable_degree(xv), Ok(-1));
        assert_eq!(y().variable_degree(xv), Ok(0));
        assert_eq!(k(0).variable_degree(xv), Err(SymError::ZeroFunction));
    }

    #[test]
    fn positivity_examples() {
        assert_eq!((k(1) + x()).is_positive(), Ok(Positivity::True));
        assert_eq!((-x()).is_positive(), Ok(Positivity::False));
        // Positive coefficients after canonicalization: decided directly.
        let f = (k(1) + x().pow(2).unwrap()).div(&(k(1) + x())).unwrap();
        assert_eq!(f.is_positive(), Ok(Positivity::True));
        // (1+X^3)/(1+X) cancels to 1 - X + X^2, which is positive but has a
        // negative coefficient.
        let g = (k(1) + x().pow(3).unwrap()).div(&(k(1) + x())).unwrap();
        assert_eq!(g, k(1) - x() + x().pow(2).unwrap());
        assert_eq!(g.is_positive(), Ok(Positivity::Inconclusive));
        assert_eq!((x() - k(3)).is_positive(), Ok(Positivity::False));
    }

    #[test]
    fn laurent_monomial_view() {
        let (xv, yv) = (intern("X"), intern("Y"));
        let m = RationalFunction::monomial(&[(xv, 2), (yv, -1)]);
        let (c, e) = m.as_laurent_monomial().unwrap();
        assert!(c.is_one());
        let mut want = vec![(xv, 2), (yv, -1)];
        want.sort();
        assert_eq!(e, want);
    }
}
