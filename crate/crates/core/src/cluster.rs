//! Cluster charts, mutation pullbacks, the p-map and cluster transformations.
//!
//! Orientation: a transformation lists its steps from source to target.
//! A [`PullbackMap`] is keyed by target vertices and its values are
//! functions in the source chart's variables.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{Seed, SeedError, VertexId, Q};
use crate::symfun::{intern, Poly, RationalFunction, SymError, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("exponent eps[{row}][{col}] = {value} is not an integer")]
    NonIntegerExponent { row: VertexId, col: VertexId, value: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("bad transformation json: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartKind {
    A,
    X,
}

/// Variable attached to vertex `v` in a chart of the given kind.
pub fn chart_var(kind: ChartKind, v: &VertexId) -> Var {
    let p = match kind {
        ChartKind::A => "A",
        ChartKind::X => "X",
    };
    intern(&format!("{p}_{}", v.var_suffix()))
}

/// A seed torus with named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterChart {
    pub seed: Seed,
    pub kind: ChartKind,
    /// Only meaningful for X charts: frozen coordinates are dropped.
    pub reduced: bool,
}

impl ClusterChart {
    pub fn new(seed: Seed, kind: ChartKind, reduced: bool) -> Self {
        ClusterChart { seed, kind, reduced: reduced && kind == ChartKind::X }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        if self.reduced {
            self.seed.unfrozen()
        } else {
            self.seed.vertices().to_vec()
        }
    }

    pub fn variables(&self) -> Vec<(VertexId, Var)> {
        self.vertices()
            .into_iter()
            .map(|v| {
                let x = chart_var(self.kind, &v);
                (v, x)
            })
            .collect()
    }
}

/// Target coordinate -> function of source coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackMap {
    pub kind: ChartKind,
    pub images: BTreeMap<VertexId, RationalFunction>,
}

impl PullbackMap {
    pub fn identity(chart: &ClusterChart) -> Self {
        PullbackMap {
            kind: chart.kind,
            images: chart.variables().into_iter().map(|(v, x)| (v, RationalFunction::var(x))).collect(),
        }
    }

    pub fn get(&self, v: &VertexId) -> Option<&RationalFunction> {
        self.images.get(v)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(v, f)| *f == RationalFunction::var(chart_var(self.kind, v)))
    }

    /// Pull `f` (in this map's target variables) back to source variables.
    pub fn pull(&self, f: &RationalFunction) -> Result<RationalFunction, ClusterError> {
        let lookup: HashMap<Var, &RationalFunction> =
            self.images.iter().map(|(v, g)| (chart_var(self.kind, v), g)).collect();
        Ok(f.substitute_with(|x| lookup.get(&x).map(|g| (*g).clone()))?)
    }

    /// `(self after earlier)`: images of `self` with the intermediate
    /// variables replaced by `earlier`'s images.
    pub fn precompose(&self, earlier: &PullbackMap) -> Result<PullbackMap, ClusterError> {
        let mut images = BTreeMap::new();
        for (v, f) in &self.images {
            images.insert(v.clone(), earlier.pull(f)?);
        }
        Ok(PullbackMap { kind: self.kind, images })
    }

    /// Text dump, one `target = image` line per coordinate.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, f) in &self.images {
            s.push_str(&format!("{} = {}\n", chart_var(self.kind, v), f));
        }
        s
    }
}

fn integer_exponent(seed: &Seed, a: usize, b: usize) -> Result<i64, ClusterError> {
    let e = seed.eps_at(a, b);
    if e.is_integer() {
        Ok(e.to_integer())
    } else {
        Err(ClusterError::NonIntegerExponent {
            row: seed.vertices()[a].clone(),
            col: seed.vertices()[b].clone(),
            value: e.to_string(),
        })
    }
}

fn pow_i(f: &RationalFunction, e: i64) -> Result<RationalFunction, ClusterError> {
    Ok(f.pow(e)?)
}

/// One X-mutation applied to coordinate images `cur` (keyed by vertex).
fn x_mutation_step(
    seed: &Seed,
    c: &VertexId,
    cur: &BTreeMap<VertexId, RationalFunction>,
) -> Result<BTreeMap<VertexId, RationalFunction>, ClusterError> {
    let k = seed.index_of(c)?;
    if seed.frozen_mask()[k] {
        return Err(SeedError::FrozenVertex(c.clone()).into());
    }
    let xc = cur.get(c).ok_or_else(|| ClusterError::UnknownVariable(c.to_string()))?;
    let one = RationalFunction::one();
    // 1 + X_c and 1 + X_c^{-1} = (1 + X_c) / X_c.
    let plus = one.add(xc);
    let plus_inv = plus.div(xc)?;
    let mut out = BTreeMap::new();
    for (a, xa) in cur {
        if a == c {
            out.insert(a.clone(), xc.inv()?);
            continue;
        }
        let i = seed.index_of(a)?;
        let e = seed.eps_at(i, k);
        if e.is_zero() {
            out.insert(a.clone(), xa.clone());
            continue;
        }
        let e = integer_exponent(seed, i, k)?;
        let factor = if e > 0 { pow_i(&plus_inv, -e)? } else { pow_i(&plus, -e)? };
        out.insert(a.clone(), xa.mul(&factor));
    }
    Ok(out)
}

/// One A-mutation applied to coordinate images `cur`.
fn a_mutation_step(
    seed: &Seed,
    c: &VertexId,
    cur: &BTreeMap<VertexId, RationalFunction>,
) -> Result<BTreeMap<VertexId, RationalFunction>, ClusterError> {
    let k = seed.index_of(c)?;
    if seed.frozen_mask()[k] {
        return Err(SeedError::FrozenVertex(c.clone()).into());
    }
    let mut pos = RationalFunction::one();
    let mut neg = RationalFunction::one();
    for (j, b) in seed.vertices().iter().enumerate() {
        let e = seed.eps_at(k, j);
        if e.is_zero() {
            continue;
        }
        let e = integer_exponent(seed, k, j)?;
        let ab = cur.get(b).ok_or_else(|| ClusterError::UnknownVariable(b.to_string()))?;
        if e > 0 {
            pos = pos.mul(&pow_i(ab, e)?);
        } else {
            neg = neg.mul(&pow_i(ab, -e)?);
        }
    }
    let ac = cur.get(c).ok_or_else(|| ClusterError::UnknownVariable(c.to_string()))?;
    let mut out = cur.clone();
    out.insert(c.clone(), pos.add(&neg).div(ac)?);
    Ok(out)
}

/// Pullback of the X-mutation at `c`: `X'_c -> X_c^{-1}`,
/// `X'_a -> X_a (1 + X_c^{-sgn eps_ac})^{-eps_ac}`.
pub fn x_mutation_pullback(seed: &Seed, c: &VertexId, reduced: bool) -> Result<PullbackMap, ClusterError> {
    let chart = ClusterChart::new(seed.clone(), ChartKind::X, reduced);
    let id = PullbackMap::identity(&chart);
    Ok(PullbackMap { kind: ChartKind::X, images: x_mutation_step(seed, c, &id.images)? })
}

/// Pullback of the A-mutation (exchange relation) at `c`.
pub fn a_mutation_pullback(seed: &Seed, c: &VertexId) -> Result<PullbackMap, ClusterError> {
    let chart = ClusterChart::new(seed.clone(), ChartKind::A, false);
    let id = PullbackMap::identity(&chart);
    Ok(PullbackMap { kind: ChartKind::A, images: a_mutation_step(seed, c, &id.images)? })
}

/// `p*(X_a) = prod_b A_b^{eps_ab}`; keys are X-vertices, values in A variables.
pub fn p_pullback(seed: &Seed, reduced: bool) -> Result<PullbackMap, ClusterError> {
    let mut images = BTreeMap::new();
    for (i, a) in seed.vertices().iter().enumerate() {
        if reduced && seed.frozen_mask()[i] {
            continue;
        }
        let mut exps = Vec::new();
        for (j, b) in seed.vertices().iter().enumerate() {
            if seed.eps_at(i, j).is_zero() {
                continue;
            }
            exps.push((chart_var(ChartKind::A, b), integer_exponent(seed, i, j)?));
        }
        images.insert(a.clone(), RationalFunction::monomial(&exps));
    }
    Ok(PullbackMap { kind: ChartKind::X, images })
}

/// `{X_a, X_b} = eps-hat_ab X_a X_b`.
pub fn poisson_bracket(seed: &Seed, a: &VertexId, b: &VertexId) -> Result<RationalFunction, ClusterError> {
    let e = seed.eps_hat(a, b).map_err(|_| {
        let missing = if seed.contains(a) { b } else { a };
        ClusterError::UnknownVariable(chart_var(ChartKind::X, missing).name())
    })?;
    let c = RationalFunction::from_rational(&q_to_big(e));
    let xa = RationalFunction::var(chart_var(ChartKind::X, a));
    let xb = RationalFunction::var(chart_var(ChartKind::X, b));
    Ok(c.mul(&xa).mul(&xb))
}

pub(crate) fn q_to_big(q: Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Mutate(VertexId),
    /// Vertex bijection; the new seed carries `eps'[s(a)][s(b)] = eps[a][b]`.
    Iso(BTreeMap<VertexId, VertexId>),
}

impl Step {
    pub fn apply(&self, seed: &Seed) -> Result<Seed, SeedError> {
        match self {
            Step::Mutate(c) => seed.mutate(c),
            Step::Iso(m) => {
                // vertices not listed are fixed
                let mut full: HashMap<VertexId, VertexId> =
                    seed.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
                full.extend(m.iter().map(|(a, b)| (a.clone(), b.clone())));
                seed.apply_isomorphism(&full)
            }
        }
    }
}

/// Ordered mutations and isomorphisms with the seeds at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTransformation {
    pub source: Seed,
    pub steps: Vec<Step>,
    pub target: Seed,
}

impl ClusterTransformation {
    pub fn identity(seed: Seed) -> Self {
        ClusterTransformation { source: seed.clone(), steps: Vec::new(), target: seed }
    }

    /// Replay `steps` from `source` to obtain the target.
    pub fn new(source: Seed, steps: Vec<Step>) -> Result<Self, ClusterError> {
        let mut s = source.clone();
        for st in &steps {
            s = st.apply(&s)?;
        }
        Ok(ClusterTransformation { source, steps, target: s })
    }

    pub fn mutation_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Mutate(_))).count()
    }

    /// Seeds before each step and after the last one.
    pub fn seeds(&self) -> Result<Vec<Seed>, ClusterError> {
        let mut out = vec![self.source.clone()];
        for st in &self.steps {
            let next = st.apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Check that replay reproduces the stored target exactly.
    pub fn validate(&self) -> Result<(), ClusterError> {
        let last = self.seeds()?.pop().expect("nonempty");
        if last == self.target {
            Ok(())
        } else {
            Err(ClusterError::ReplayMismatch("replayed seed differs from stored target".into()))
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ClusterTransformation) -> Result<Self, ClusterError> {
        if !self.target.principal_eq(&next.source) {
            return Err(ClusterError::ReplayMismatch("cannot chain: seeds differ".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        ClusterTransformation::new(self.source.clone(), steps)
    }

    /// Steps reversed; isomorphisms inverted.
    pub fn inverse(&self) -> Result<Self, ClusterError> {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                Step::Mutate(c) => Step::Mutate(c.clone()),
                Step::Iso(m) => Step::Iso(m.iter().map(|(a, b)| (b.clone(), a.clone())).collect()),
            })
            .collect();
        ClusterTransformation::new(self.target.clone(), steps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Mutate(c) => serde_json::json!({ "mutate": c.to_string() }),
                Step::Iso(m) => {
                    let map: serde_json::Map<String, serde_json::Value> = m
                        .iter()
                        .map(|(a, b)| (a.to_string(), serde_json::Value::String(b.to_string())))
                        .collect();
                    serde_json::json!({ "iso": map })
                }
            })
            .collect();
        serde_json::Value::Array(steps)
    }

    pub fn steps_from_json(v: &serde_json::Value) -> Result<Vec<Step>, ClusterError> {
        let arr = v.as_array().ok_or_else(|| ClusterError::Json("expected an array".into()))?;
        arr.iter()
            .map(|e| {
                if let Some(m) = e.get("mutate").and_then(|m| m.as_str()) {
                    Ok(Step::Mutate(m.parse()?))
                } else if let Some(obj) = e.get("iso").and_then(|m| m.as_object()) {
                    let mut map = BTreeMap::new();
                    for (k, val) in obj {
                        let t = val
                            .as_str()
                            .ok_or_else(|| ClusterError::Json("iso target must be a string".into()))?;
                        map.insert(k.parse()?, t.parse()?);
                    }
                    Ok(Step::Iso(map))
                } else {
                    Err(ClusterError::Json(format!("unrecognised step {e}")))
                }
            })
            .collect()
    }
}

/// Total pullback of `t` on a chart of the given kind.
///
/// Computed source-to-target: the running images are pushed through each
/// step's formula, which equals the right-to-left composition of pullbacks.
pub fn compose(
    t: &ClusterTransformation,
    kind: ChartKind,
    reduced: bool,
) -> Result<PullbackMap, ClusterError> {
    let chart = ClusterChart::new(t.source.clone(), kind, reduced);
    let mut cur = PullbackMap::identity(&chart).images;
    let mut seed = t.source.clone();
    for st in &t.steps {
        cur = match st {
            Step::Mutate(c) => match kind {
                ChartKind::X => x_mutation_step(&seed, c, &cur)?,
                ChartKind::A => a_mutation_step(&seed, c, &cur)?,
            },
            Step::Iso(m) => cur
                .into_iter()
                .map(|(v, f)| {
                    let img = m.get(&v).cloned().unwrap_or(v);
                    (img, f)
                })
                .collect(),
        };
        seed = st.apply(&seed)?;
    }
    Ok(PullbackMap { kind, images: cur })
}

/// Per-step pullbacks composed literally right to left via substitution.
/// Slower than [`compose`]; kept as a cross-check.
pub fn compose_by_substitution(
    t: &ClusterTransformation,
    kind: ChartKind,
    reduced: bool,
) -> Result<PullbackMap, ClusterError> {
    let seeds = t.seeds()?;
    let target_chart = ClusterChart::new(t.target.clone(), kind, reduced);
    let mut total = PullbackMap::identity(&target_chart);
    for (st, seed) in t.steps.iter().zip(&seeds).rev() {
        let step_map = match st {
            Step::Mutate(c) => match kind {
                ChartKind::X => x_mutation_pullback(seed, c, reduced)?,
                ChartKind::A => a_mutation_pullback(seed, c)?,
            },
            Step::Iso(m) => {
                let chart = ClusterChart::new(seed.clone(), kind, reduced);
                PullbackMap {
                    kind,
                    images: chart
                        .variables()
                        .into_iter()
                        .map(|(v, x)| (m.get(&v).cloned().unwrap_or(v), RationalFunction::var(x)))
                        .collect(),
                }
            }
        };
        total = total.precompose(&step_map)?;
    }
    Ok(total)
}

/// Reduced X-pullback of a transformation in separated form,
/// `X_a ↦ X^{c_a} ∏_j F_j^{ε_aj}` over the unfrozen vertices `j` of the
/// target seed. The F-polynomials come from exact divisions only, so large
/// transformations stay cheap; degrees read off this form are exact.
#[derive(Clone, Debug)]
pub struct SeparatedPullback {
    /// Unfrozen source vertices; position `i` is the variable of `c[..][i]`.
    pub source_vertices: Vec<VertexId>,
    pub target: Seed,
    pub f: BTreeMap<VertexId, Poly>,
    pub c: BTreeMap<VertexId, Vec<i64>>,
}

impl SeparatedPullback {
    fn var(&self, i: usize) -> Var {
        chart_var(ChartKind::X, &self.source_vertices[i])
    }

    /// Integer exponents `ε_aj` of the F-polynomials in the image of `a`.
    pub fn f_exponents(&self, a: &VertexId) -> Result<Vec<(VertexId, i64)>, ClusterError> {
        let i = self.target.index_of(a)?;
        let mut out = Vec::new();
        for j in self.target.unfrozen() {
            let k = self.target.index_of(&j)?;
            let e = integer_exponent(&self.target, i, k)?;
            if e != 0 {
                out.push((j, e));
            }
        }
        Ok(out)
    }

    /// `deg_{X_b}` of the image of `a`, with `b` a source vertex.
    pub fn degree(&self, a: &VertexId, b: &VertexId) -> Result<i64, ClusterError> {
        let bi = self
            .source_vertices
            .iter()
            .position(|v| v == b)
            .ok_or_else(|| ClusterError::UnknownVariable(b.to_string()))?;
        let c = self.c.get(a).ok_or_else(|| ClusterError::UnknownVariable(a.to_string()))?;
        let v = self.var(bi);
        let mut d = c[bi];
        for (j, e) in self.f_exponents(a)? {
            d += e * i64::from(self.f[&j].degree_in(v));
        }
        Ok(d)
    }

    /// Canonical rational function of the image of `a`.
    pub fn image(&self, a: &VertexId) -> Result<RationalFunction, ClusterError> {
        let c = self.c.get(a).ok_or_else(|| ClusterError::UnknownVariable(a.to_string()))?;
        let mono: Vec<(Var, i64)> = c.iter().enumerate().map(|(i, &e)| (self.var(i), e)).collect();
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (j, e) in self.f_exponents(a)? {
            let p = self.f[&j].pow(e.unsigned_abs() as u32);
            if e > 0 {
                num = num.mul(&p);
            } else {
                den = den.mul(&p);
            }
        }
        Ok(RationalFunction::monomial(&mono).mul(&RationalFunction::from_parts(num, den)?))
    }

    pub fn to_pullback(&self) -> Result<PullbackMap, ClusterError> {
        let mut images = BTreeMap::new();
        for a in self.target.unfrozen() {
            images.insert(a.clone(), self.image(&a)?);
        }
        Ok(PullbackMap { kind: ChartKind::X, images })
    }
}

fn monomial_poly(vars: &[Var], e: &[i64]) -> Poly {
    let mut m = Poly::one();
    for (&v, &k) in vars.iter().zip(e) {
        if k > 0 {
            m = m.mul(&Poly::var(v).pow(k as u32));
        }
    }
    m
}

/// Separated form of the reduced X-pullback of `t`.
pub fn separate(t: &ClusterTransformation) -> Result<SeparatedPullback, ClusterError> {
    let source_vertices = t.source.unfrozen();
    let n = source_vertices.len();
    let vars: Vec<Var> = source_vertices.iter().map(|v| chart_var(ChartKind::X, v)).collect();
    let mut f: BTreeMap<VertexId, Poly> = source_vertices.iter().map(|v| (v.clone(), Poly::one())).collect();
    let mut c: BTreeMap<VertexId, Vec<i64>> = source_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (v.clone(), e)
        })
        .collect();
    let mut seed = t.source.clone();
    for st in &t.steps {
        match st {
            Step::Mutate(k) => {
                let ki = seed.index_of(k)?;
                if seed.frozen_mask()[ki] {
                    return Err(SeedError::FrozenVertex(k.clone()).into());
                }
                let ck = c[k].clone();
                let pos: Vec<i64> = ck.iter().map(|&x| x.max(0)).collect();
                let neg: Vec<i64> = ck.iter().map(|&x| (-x).max(0)).collect();
                let mut up = monomial_poly(&vars, &pos);
                let mut down = monomial_poly(&vars, &neg);
                let unfrozen = seed.unfrozen();
                for j in &unfrozen {
                    let e = integer_exponent(&seed, ki, seed.index_of(j)?)?;
                    if e > 0 {
                        up = up.mul(&f[j].pow(e as u32));
                    } else if e < 0 {
                        down = down.mul(&f[j].pow((-e) as u32));
                    }
                }
                let fk = up.add(&down).div_exact(&f[k]).ok_or_else(|| {
                    ClusterError::ReplayMismatch(format!("F-polynomial at {k} is not exact"))
                })?;
                let nonneg = ck.iter().all(|&x| x >= 0);
                if !nonneg && !ck.iter().all(|&x| x <= 0) {
                    return Err(ClusterError::ReplayMismatch(format!(
                        "c-vector at {k} is not sign-coherent"
                    )));
                }
                for j in &unfrozen {
                    if j == k {
                        continue;
                    }
                    let e = integer_exponent(&seed, seed.index_of(j)?, ki)?;
                    let w = if nonneg { e.max(0) } else { (-e).max(0) };
                    if w != 0 {
                        let cj = c.get_mut(j).expect("unfrozen vertex");
                        for (x, y) in cj.iter_mut().zip(&ck) {
                            *x += w * y;
                        }
                    }
                }
                c.insert(k.clone(), ck.iter().map(|x| -x).collect());
                f.insert(k.clone(), fk);
            }
            Step::Iso(m) => {
                let relabel = |v: VertexId| m.get(&v).cloned().unwrap_or(v);
                f = f.into_iter().map(|(v, p)| (relabel(v), p)).collect();
                c = c.into_iter().map(|(v, e)| (relabel(v), e)).collect();
            }
        }
        seed = st.apply(&seed)?;
    }
    Ok(SeparatedPullback { source_vertices, target: seed, f, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanMatrix, PairWord};
    use crate::seed::amalgamate;

    fn seed_of(label: &str, w: &[i64]) -> Seed {
        amalgamate(&PairWord::new(w.to_vec(), &CartanMatrix::from_label(label).unwrap()).unwrap()).0
    }
    fn v(l: usize, p: usize) -> VertexId {
        VertexId::new(l, p)
    }
    fn xv(vert: &VertexId) -> RationalFunction {
        RationalFunction::var(chart_var(ChartKind::X, vert))
    }
    fn av(vert: &VertexId) -> RationalFunction {
        RationalFunction::var(chart_var(ChartKind::A, vert))
    }
    fn one() -> RationalFunction {
        RationalFunction::one()
    }

    #[test]
    fn x_mutation_formulas() {
        let s = seed_of("A2", &[-1, -2, -1, 1, 2, 1]);
        let c = v(0, 1);
        let full = x_mutation_pullback(&s, &c, false).unwrap();
        assert_eq!(full.images.len(), s.len());
        let m = x_mutation_pullback(&s, &c, true).unwrap();
        assert_eq!(m.get(&c).unwrap(), &xv(&c).inv().unwrap());
        for b in s.unfrozen() {
            if b == c {
                continue;
            }
            let e = s.eps(&b, &c).unwrap();
            let want = if e == Q::from_integer(1) {
                xv(&b).mul(&one().add(&xv(&c).inv().unwrap()).inv().unwrap())
            } else if e == Q::from_integer(-1) {
                xv(&b).mul(&one().add(&xv(&c)))
            } else {
                assert!(e.is_zero());
                xv(&b)
            };
            assert_eq!(m.get(&b).unwrap(), &want);
        }
        assert!(matches!(
            x_mutation_pullback(&s, &v(0, 0), true),
            Err(ClusterError::Seed(SeedError::FrozenVertex(_)))
        ));
    }

    #[test]
    fn a_mutation_formulas() {
        let s = seed_of("A1", &[-1, 1]);
        let c = v(0, 1);
        let m = a_mutation_pullback(&s, &c).unwrap();
        // eps_{c,(0,0)} = eps_{c,(0,2)} = -1: both factors in the negative product.
        let want = one().add(&av(&v(0, 0)).mul(&av(&v(0, 2)))).div(&av(&c)).unwrap();
        assert_eq!(m.get(&c).unwrap(), &want);
        let back = m.precompose(&m).unwrap();
        assert!(back.is_identity());
    }

    #[test]
    fn isolated_vertex_a_mutation() {
        let s = Seed::new(vec![VertexId::Label("c".into())], vec![false], vec![vec![Q::zero()]], vec![1])
            .unwrap();
        let m = a_mutation_pullback(&s, &VertexId::Label("c".into())).unwrap();
        let c = RationalFunction::var(chart_var(ChartKind::A, &VertexId::Label("c".into())));
        assert_eq!(m.images.values().next().unwrap(), &RationalFunction::from_int(2).div(&c).unwrap());
    }

    #[test]
    fn p_map_example() {
        let s = seed_of("A1", &[-1, 1]);
        let p = p_pullback(&s, true).unwrap();
        let want = av(&v(0, 0)).mul(&av(&v(0, 2))).inv().unwrap();
        assert_eq!(p.get(&v(0, 1)).unwrap(), &want);
        assert!(p_pullback(&seed_of("A2", &[-1, 1]), false).is_err());
    }

    #[test]
    fn p_map_commutes_with_mutation_a2() {
        let s = seed_of("A2", &[-1, -2, -1, 1, 2, 1]);
        for c in s.unfrozen() {
            let mutated = s.mutate(&c).unwrap();
            let lhs = p_pullback(&mutated, true)
                .unwrap()
                .precompose(&a_mutation_pullback(&s, &c).unwrap())
                .unwrap();
            let rhs = x_mutation_pullback(&s, &c, true)
                .unwrap()
                .precompose(&p_pullback(&s, true).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn composition_examples() {
        let s = seed_of("A1", &[-1, 1]);
        let c = v(0, 1);
        assert!(compose(&ClusterTransformation::identity(s.clone()), ChartKind::X, true)
            .unwrap()
            .is_identity());
        let twice =
            ClusterTransformation::new(s.clone(), vec![Step::Mutate(c.clone()), Step::Mutate(c.clone())])
                .unwrap();
        assert!(compose(&twice, ChartKind::X, true).unwrap().is_identity());
        let flip: BTreeMap<_, _> = (0..3).map(|i| (v(0, i), v(0, 2 - i))).collect();
        let t = ClusterTransformation::new(s, vec![Step::Mutate(c.clone()), Step::Iso(flip)]).unwrap();
        let m = compose(&t, ChartKind::X, true).unwrap();
        assert_eq!(m.get(&c).unwrap(), &xv(&c).inv().unwrap());
        assert_eq!(m, compose_by_substitution(&t, ChartKind::X, true).unwrap());
    }

    #[test]
    fn substitution_and_forward_composition_agree() {
        let s = seed_of("B2", &[-1, -2, 1, 2]);
        let steps: Vec<Step> = [v(0, 1), v(1, 1), v(0, 1)].into_iter().map(Step::Mutate).collect();
        let t = ClusterTransformation::new(s, steps).unwrap();
        for kind in [ChartKind::X, ChartKind::A] {
            let red = kind == ChartKind::X;
            assert_eq!(compose(&t, kind, red).unwrap(), compose_by_substitution(&t, kind, red).unwrap());
        }
    }

    #[test]
    fn poisson_examples() {
        let s = seed_of("A1", &[-1, 1]);
        let (a, b) = (v(0, 1), v(0, 0));
        let br = poisson_bracket(&s, &a, &b).unwrap();
        assert_eq!(br, xv(&a).mul(&xv(&b)).neg());
        assert_eq!(br, poisson_bracket(&s, &b, &a).unwrap().neg());
        assert!(poisson_bracket(&s, &a, &a).unwrap().is_zero());
        assert!(poisson_bracket(&s, &v(0, 0), &v(0, 2)).unwrap().is_zero());
        assert!(matches!(poisson_bracket(&s, &a, &v(3, 3)), Err(ClusterError::UnknownVariable(_))));
    }

    #[test]
    fn transformation_json_round_trip() {
        let s = seed_of("A1", &[-1, 1]);
        let flip: BTreeMap<_, _> = (0..3).map(|i| (v(0, i), v(0, 2 - i))).collect();
        let t = ClusterTransformation::new(s.clone(), vec![Step::Mutate(v(0, 1)), Step::Iso(flip)]).unwrap();
        let j = t.to_json();
        assert_eq!(j[0]["mutate"], "1:1");
        let steps = ClusterTransformation::steps_from_json(&j).unwrap();
        assert_eq!(ClusterTransformation::new(s, steps).unwrap(), t);
        t.validate().unwrap();
        assert_eq!(t.inverse().unwrap().inverse().unwrap(), t);
    }
}
