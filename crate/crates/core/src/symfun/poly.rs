//! Sparse multivariate polynomials over the integers.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::var::{var_name, Var};

/// Exponent vector indexed by interned variable id, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = vec![0; v.index() + 1];
        m[v.index()] = e;
        Mono(m).trimmed()
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Mono(e)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.get(v.index()).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut e = long.0.clone();
        for (a, b) in e.iter_mut().zip(&short.0) {
            *a += b;
        }
        Mono(e)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.len() <= o.0.len() && self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut e = o.0.clone();
        for (a, b) in e.iter_mut().zip(&self.0) {
            *a -= b;
        }
        Mono(e).trimmed()
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect()).trimmed()
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        Mono(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0).max(o.0.get(i).copied().unwrap_or(0)))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono(self.0.iter().map(|e| e * k).collect()).trimmed()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| Var::from_index(i))
    }

    fn without(&self, v: Var) -> Mono {
        let mut e = self.0.clone();
        if let Some(x) = e.get_mut(v.index()) {
            *x = 0;
        }
        Mono(e).trimmed()
    }
}

/// Graded lexicographic order: total degree first, then the larger exponent
/// of the lowest-indexed variable wins.
pub fn grlex(a: &Mono, b: &Mono) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let n = a.0.len().max(b.0.len());
        for i in 0..n {
            let x = a.0.get(i).copied().unwrap_or(0);
            let y = b.0.get(i).copied().unwrap_or(0);
            if x != y {
                return x.cmp(&y);
            }
        }
        Ordering::Equal
    })
}

#[derive(Clone, PartialEq, Eq)]
struct GrlexKey(Mono);

impl PartialOrd for GrlexKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for GrlexKey {
    fn cmp(&self, o: &Self) -> Ordering {
        grlex(&self.0, &o.0)
    }
}

/// Polynomial with integer coefficients; terms sorted by descending grlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Mono::var(v, 1), BigInt::one())
    }

    pub fn monomial(m: Mono, c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut acc: HashMap<Mono, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: HashMap<Mono, BigInt>) -> Self {
        let mut terms: Vec<(Mono, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mono, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match grlex(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_monomial() {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.is_monomial() {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: HashMap<Mono, BigInt> = HashMap::with_capacity(self.terms.len() * o.terms.len() / 2 + 1);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        Poly::from_map(acc)
    }

    /// Multiplication by a single term keeps the order of terms.
    pub fn mul_term(&self, m: &Mono, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m2, c2)| (m2.mul(m), c2 * c)).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        self.mul_term(&Mono::one(), c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return Poly::monomial(m.pow(k), num_traits::pow(c.clone(), k as usize));
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact division; `None` if `d` does not divide `self` in Z[x].
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.is_monomial() {
            let (dm, dc) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((dm.quotient_of(m), q));
            }
            return Some(Poly { terms });
        }
        if self.terms.len() < d.terms.len() || !d.terms[0].0.divides(&self.terms[0].0) {
            return None;
        }
        let (lm, lc) = d.terms[0].clone();
        let mut rem: BTreeMap<GrlexKey, BigInt> =
            self.terms.iter().map(|(m, c)| (GrlexKey(m.clone()), c.clone())).collect();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((GrlexKey(m), c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let qm = lm.quotient_of(&m);
            for (dm, dc) in &d.terms[1..] {
                match rem.entry(GrlexKey(dm.mul(&qm))) {
                    Entry::Occupied(mut e) => {
                        *e.get_mut() -= dc * &qc;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(-(dc * &qc));
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Integer content (positive gcd of the coefficients).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some(t) => t.0.clone(),
            None => return Mono::one(),
        };
        it.fold(first, |acc, t| acc.gcd(&t.0))
    }

    pub fn div_int(&self, c: &BigInt) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x / c)).collect() }
    }

    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(x, c)| (m.quotient_of(x), c.clone())).collect() }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    /// Variables occurring in the polynomial, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let mut n = 0;
        for (m, _) in &self.terms {
            n = n.max(m.exponents().len());
        }
        (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponents().get(i).copied().unwrap_or(0) > 0))
            .map(Var::from_index)
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Coefficients in `v`, index = power of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, BigInt)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| {
                let mut p = Poly { terms: t };
                p.terms.sort_by(|a, b| grlex(&b.0, &a.0));
                p
            })
            .collect()
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients(v: Var, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            let vm = Mono::var(v, k as u32);
            for (m, c) in &p.terms {
                terms.push((m.mul(&vm), c.clone()));
            }
        }
        let mut p = Poly { terms };
        p.terms.sort_by(|a, b| grlex(&b.0, &a.0));
        p
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_positive())
    }

    pub fn all_coefficients_negative(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_negative())
    }

    pub fn map_coefficients(&self, f: impl Fn(&BigInt) -> BigInt) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub(crate) fn write_mono(f: &mut fmt::Formatter<'_>, m: &Mono) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", var_name(Var::from_index(i)))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_mono(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::var::intern;

    fn x() -> Poly {
        Poly::var(intern("px"))
    }
    fn y() -> Poly {
        Poly::var(intern("py"))
    }

    #[test]
    fn arithmetic() {
        let one = Poly::one();
        let p = x().add(&one);
        let q = x().sub(&one);
        assert_eq!(p.mul(&q), x().mul(&x()).sub(&one));
        assert_eq!(p.pow(3), p.mul(&p).mul(&p));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = x().add(&y());
        let q = x().sub(&y().scale(&BigInt::from(2)));
        let prod = p.mul(&q);
        assert_eq!(prod.div_exact(&p), Some(q.clone()));
        assert_eq!(prod.div_exact(&x()), None);
        assert_eq!(prod.add(&Poly::one()).div_exact(&q), None);
    }

    #[test]
    fn coefficient_view_round_trips() {
        let v = intern("px");
        let p = x().add(&y()).pow(3).add(&Poly::constant(BigInt::from(5)));
        let cs = p.coefficients_in(v);
        assert_eq!(cs.len(), 4);
        assert_eq!(Poly::from_coefficients(v, &cs), p);
    }
}
