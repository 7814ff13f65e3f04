//! Multivariate gcd over Z via content / primitive-part recursion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::var::Var;

/// Primitive integer content and positive leading coefficient.
pub fn normalize(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut c = p.content();
    if p.leading_coeff().is_negative() {
        c = -c;
    }
    if c.is_one() {
        p.clone()
    } else {
        p.div_int(&c)
    }
}

/// gcd in Q[x], returned as a primitive integer polynomial with positive
/// leading coefficient. gcd(0, 0) = 0.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let gm = ma.gcd(&mb);
    let a1 = normalize(&a.div_mono(&ma));
    let b1 = normalize(&b.div_mono(&mb));
    let g = gcd_stripped(&a1, &b1);
    if gm.is_one() {
        g
    } else {
        g.mul_term(&gm, &BigInt::one())
    }
}

/// Both inputs normalized and free of monomial content.
fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return a.clone();
        }
    } else if a.div_exact(b).is_some() {
        return b.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        let c = content_in(a, v);
        return gcd(&c, b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        let c = content_in(b, v);
        return gcd(a, &c);
    }
    if certainly_coprime(a, b, &va) {
        return Poly::one();
    }
    let v = *va
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonconstant polynomial has a variable");
    gcd_in(a, b, v)
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(c: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = c.mod_floor(&m);
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Image of `p` in F_P[v] after substituting `point` for the other variables.
fn univariate_image(p: &Poly, v: Var, point: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = reduce(c);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 && i != v.index() {
                t = mulmod(t, powmod(point[i], u64::from(e)));
            }
        }
        let k = m.exp(v) as usize;
        out[k] = (out[k] + t) % P;
    }
    out
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of gcd in F_P[x] (dense coefficient vectors, low degree first).
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().expect("nonzero"), P - 2);
        while a.len() >= b.len() {
            let q = mulmod(*a.last().expect("nonzero"), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mulmod(q, bc)) % P;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True only when `a` and `b` provably share no factor of positive degree:
/// for every variable, the univariate images modulo a prime at a point where
/// both leading coefficients survive are coprime.
fn certainly_coprime(a: &Poly, b: &Poly, vars: &[Var]) -> bool {
    let width = vars.iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = || {
        // splitmix64
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z ^ (z >> 31)) % P
    };
    'vars: for &v in vars {
        let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
        for _ in 0..3 {
            let point: Vec<u64> = (0..width).map(|_| next()).collect();
            let ia = univariate_image(a, v, &point);
            let ib = univariate_image(b, v, &point);
            if ia[da] == 0 || ib[db] == 0 {
                continue;
            }
            if gcd_degree_mod(ia, ib) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: Var) -> Poly {
    let mut g = Poly::zero();
    let mut cs = p.coefficients_in(v);
    cs.retain(|c| !c.is_zero());
    cs.sort_by_key(|c| c.len());
    for c in &cs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Poly, v: Var) -> (Poly, Poly) {
    let c = content_in(p, v);
    if c.is_one() {
        (c, p.clone())
    } else {
        let q = p.div_exact(&c).expect("content divides polynomial");
        (c, q)
    }
}

fn gcd_in(a: &Poly, b: &Poly, v: Var) -> Poly {
    let (ca, pa) = primitive_in(a, v);
    let (cb, pb) = primitive_in(b, v);
    let c = gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    let h = loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        if r.degree_in(v) == 0 {
            break Poly::one();
        }
        f = g;
        g = primitive_in(&r, v).1;
    };
    let h = normalize(&primitive_in(&h, v).1);
    normalize(&c.mul(&h))
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
pub fn prem(a: &Poly, b: &Poly, v: Var) -> Poly {
    let bs = b.coefficients_in(v);
    let n = bs.len() - 1;
    let lc = &bs[n];
    let mut r = a.coefficients_in(v);
    while r.len() > n && !r.is_empty() {
        let d = r.len() - 1;
        let t = r[d].clone();
        for x in r.iter_mut() {
            *x = x.mul(lc);
        }
        for (j, bj) in bs.iter().enumerate() {
            r[j + d - n] = r[j + d - n].sub(&t.mul(bj));
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    Poly::from_coefficients(v, &r)
}

/// Integer gcd helper that treats zero as neutral.
pub fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() {
        b.abs()
    } else {
        a.gcd(b)
    }
}
