//! Dense square matrices over an exact field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::symfun::RationalFunction;

use super::LieError;

/// Exact field operations needed by the matrix model.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Some(acc)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_i64(k: i64) -> Self {
        RationalFunction::from_int(k)
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFunction::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RationalFunction::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFunction::mul(self, o)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        RationalFunction::inv(self).ok()
    }
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F> {
    n: usize,
    a: Vec<F>,
}

pub type GroupElement = Matrix<BigRational>;

impl<F: Scalar> Matrix<F> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, a: vec![F::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn diag(d: Vec<F>) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LieError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LieError::NotSquare);
        }
        Ok(Matrix { n, a: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.a[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "size mismatch");
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = F::zero();
                for k in 0..n {
                    let x = self.get(i, k);
                    if x.is_zero() {
                        continue;
                    }
                    let y = o.get(k, j);
                    if !y.is_zero() {
                        s = s.add(&x.mul(y));
                    }
                }
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a Self>) -> Self
    where
        F: 'a,
    {
        factors.into_iter().fold(Self::identity(n), |acc, m| acc.mul(m))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { n: self.n, a: self.a.iter().map(|x| x.mul(c)).collect() }
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.rows();
        let mut b = Self::identity(n).rows();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            b.swap(col, p);
            let inv = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = a[col][j].mul(&inv);
                b[col][j] = b[col][j].mul(&inv);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    b[r][j] = b[r][j].sub(&f.mul(&b[col][j]));
                }
            }
        }
        Some(Matrix { n, a: b.into_iter().flatten().collect() })
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn sub_det(&self, rows: &[usize], cols: &[usize]) -> F {
        let k = rows.len();
        match k {
            0 => F::one(),
            1 => self.get(rows[0], cols[0]).clone(),
            _ if k <= 4 => {
                // cofactor expansion along the first row, division free
                let mut s = F::zero();
                for (t, &c) in cols.iter().enumerate() {
                    let x = self.get(rows[0], c);
                    if x.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
                    let term = x.mul(&self.sub_det(&rows[1..], &rest));
                    s = if t % 2 == 0 { s.add(&term) } else { s.sub(&term) };
                }
                s
            }
            _ => {
                let mut a: Vec<Vec<F>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect()).collect();
                let mut det = F::one();
                for col in 0..k {
                    let Some(p) = (col..k).find(|&r| !a[r][col].is_zero()) else {
                        return F::zero();
                    };
                    if p != col {
                        a.swap(col, p);
                        det = det.neg();
                    }
                    det = det.mul(&a[col][col]);
                    let inv = a[col][col].inv().expect("nonzero pivot");
                    for r in col + 1..k {
                        if a[r][col].is_zero() {
                            continue;
                        }
                        let f = a[r][col].mul(&inv);
                        for j in col..k {
                            a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                        }
                    }
                }
                det
            }
        }
    }

    pub fn det(&self) -> F {
        let all: Vec<usize> = (0..self.n).collect();
        self.sub_det(&all, &all)
    }

    /// Leading principal `k x k` minor.
    pub fn leading_minor(&self, k: usize) -> F {
        let idx: Vec<usize> = (0..k).collect();
        self.sub_det(&idx, &idx)
    }

    /// Rank of the submatrix on the given rows and columns.
    pub fn sub_rank(&self, rows: &[usize], cols: &[usize]) -> usize {
        let mut a: Vec<Vec<F>> =
            rows.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect()).collect();
        let mut rank = 0;
        for col in 0..cols.len() {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][col].inv().expect("nonzero pivot");
            for r in rank + 1..a.len() {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].mul(&inv);
                for j in col..cols.len() {
                    a[r][j] = a[r][j].sub(&f.mul(&a[rank][j]));
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.a.chunks(self.n).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix<BigRational> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LieError> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| <BigRational as Scalar>::from_i64(x)).collect()).collect(),
        )
    }

    /// Rows of `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows()
                .into_iter()
                .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, LieError> {
        let rows = v.as_array().ok_or_else(|| LieError::Parse("expected an array of rows".into()))?;
        let mut out = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| LieError::Parse("expected a row array".into()))?;
            let mut row = Vec::new();
            for x in r {
                let s = x.as_str().ok_or_else(|| LieError::Parse("entries must be strings".into()))?;
                row.push(parse_rational(s)?);
            }
            out.push(row);
        }
        Self::from_rows(out)
    }

    pub fn is_positive(&self) -> bool {
        self.a.iter().all(|x| x.is_positive())
    }

    /// Lift to rational-function entries.
    pub fn to_symbolic(&self) -> Matrix<RationalFunction> {
        Matrix { n: self.n, a: self.a.iter().map(RationalFunction::from_rational).collect() }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, LieError> {
    let s = s.trim();
    let bad = || LieError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&q) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
