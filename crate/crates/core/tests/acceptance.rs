//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic only.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bruhat_dt::cluster::{
    a_mutation_pullback, chart_var, compose, p_pullback, x_mutation_pullback, ChartKind, Step,
};
use bruhat_dt::dtengine::{
    apply_move, apply_moves, build_dt, d_x_squared, dt_pullback, reflected_state, word_path, Move,
};
use bruhat_dt::liematrix::{
    chi_eval, dt_oracle, identity_suite, lift, minor, twist_check, y1_at_one, Matrix, Verdict,
};
use bruhat_dt::seed::{amalgamate, Seed, VertexId};
use bruhat_dt::symfun::RationalFunction;
use bruhat_dt::tropical::check_dt;
use bruhat_dt::{CartanMatrix, PairWord, WeylWord};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn word(label: &str, s: &str) -> PairWord {
    PairWord::parse(s, &CartanMatrix::from_label(label).expect("label")).expect("word")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- 1

/// Seed with at most 12 vertices on at most 4 levels, entries in
/// {-3,..,3}/2, integral on rows/columns touching an unfrozen vertex.
fn random_seed(rng: &mut ChaCha8Rng) -> Seed {
    let n = rng.gen_range(2..=12usize);
    let mut per_level = [0usize; 4];
    let vertices: Vec<VertexId> = (0..n)
        .map(|_| {
            let l = rng.gen_range(0..4);
            per_level[l] += 1;
            VertexId::new(l, per_level[l] - 1)
        })
        .collect();
    let frozen: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut eps = vec![vec![Ratio::from_integer(0i64); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let both_frozen = frozen[a] && frozen[b];
            let e = Ratio::new(rng.gen_range(-6..=6i64), 2);
            // skew-symmetrizable: eps_ab d_b = -eps_ba d_a
            let back = -e * Ratio::from_integer(d[b]) / Ratio::from_integer(d[a]);
            let in_range = |x: &Ratio<i64>| (x * 2).is_integer() && (x * 2).to_integer().abs() <= 6;
            let ok =
                in_range(&e) && in_range(&back) && (both_frozen || (e.is_integer() && back.is_integer()));
            if ok {
                eps[a][b] = e;
                eps[b][a] = back;
            }
        }
    }
    Seed::new(vertices, frozen, eps, d).expect("generated seed is valid")
}

fn c1_involutivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checks = 0;
    for _ in 0..100 {
        let s = random_seed(&mut rng);
        for c in s.unfrozen() {
            let back = s.mutate(&c).and_then(|m| m.mutate(&c)).map_err(err)?;
            if back != s {
                return Err(format!("mu_{c} twice changed a seed"));
            }
            checks += 1;
        }
    }
    Ok(format!("100 seeds, {checks} double mutations"))
}

// ---------------------------------------------------------------- 2

fn c2_replays() -> Outcome {
    let mut parts = Vec::new();
    for (label, w, target, count) in [
        ("A2", "1 2 1", "2 1 2", 1),
        ("B2", "1 2 1 2", "2 1 2 1", 3),
        ("G2", "1 2 1 2 1 2", "2 1 2 1 2 1", 10),
    ] {
        let w = word(label, w);
        let (next, t) = apply_move(&w, &Move::braid(&w, 0, w.len())).map_err(err)?;
        let expected = word(label, target);
        if next.letters() != expected.letters() {
            return Err(format!("{label}: move produced {:?}", next.letters()));
        }
        if t.mutation_count() != count {
            return Err(format!("{label}: {} mutations, expected {count}", t.mutation_count()));
        }
        // replay step by step with the seed operations themselves
        let mut s = amalgamate(&w).0;
        for st in &t.steps {
            s = match st {
                Step::Mutate(c) => s.mutate(c).map_err(err)?,
                Step::Iso(m) => {
                    let mut full: HashMap<VertexId, VertexId> =
                        s.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
                    full.extend(m.iter().map(|(a, b)| (a.clone(), b.clone())));
                    s.apply_isomorphism(&full).map_err(err)?
                }
            };
        }
        if s != amalgamate(&expected).0 {
            return Err(format!("{label}: replay does not reach the amalgamated target"));
        }
        parts.push(format!("{label} {count}"));
    }
    Ok(format!("mutation counts {}", parts.join(", ")))
}

// ---------------------------------------------------------------- 3

fn reduced_words(c: &CartanMatrix, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 1..=c.rank() {
                let mut x = w.clone();
                x.push(a);
                if c.is_reduced(&WeylWord::new(x.clone())).expect("valid letters") {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All interleavings of `u` (negated) and `v`.
fn shuffles(u: &[usize], v: &[usize], out: &mut Vec<Vec<i64>>) {
    fn go(u: &[usize], v: &[usize], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if u.is_empty() && v.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            cur.push(-(a as i64));
            go(rest, v, cur, out);
            cur.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            cur.push(b as i64);
            go(u, rest, cur, out);
            cur.pop();
        }
    }
    go(u, v, &mut Vec::new(), out);
}

fn c3_p_commutation() -> Outcome {
    let mut words = 0usize;
    let mut checks = 0usize;
    for label in ["A1", "A2", "B2", "G2", "A3", "B3", "C3"] {
        let c = CartanMatrix::from_label(label).map_err(err)?;
        let rw = reduced_words(&c, 8);
        for u in &rw {
            for v in rw.iter().filter(|v| u.len() + v.len() <= 8) {
                let mut ws = Vec::new();
                shuffles(u, v, &mut ws);
                for letters in ws {
                    let w = PairWord::new(letters, &c).map_err(err)?;
                    let s = amalgamate(&w).0;
                    let p = p_pullback(&s, true).map_err(err)?;
                    for k in s.unfrozen() {
                        let lhs =
                            x_mutation_pullback(&s, &k, true).and_then(|x| x.precompose(&p)).map_err(err)?;
                        let m = s.mutate(&k).map_err(err)?;
                        let rhs = p_pullback(&m, true)
                            .and_then(|pm| pm.precompose(&a_mutation_pullback(&s, &k)?))
                            .map_err(err)?;
                        if lhs.images != rhs.images {
                            return Err(format!("{label} {:?} at {k}", w.letters()));
                        }
                        checks += 1;
                    }
                    words += 1;
                }
            }
        }
    }
    Ok(format!("{words} words, {checks} vertices"))
}

// ---------------------------------------------------------------- 4

fn c4_degree_matrix() -> Outcome {
    let mut parts = Vec::new();
    for (label, w) in [
        ("A1", "-1 1"),
        ("A2", "-1 -2 1 2"),
        ("A2", "-1 -2 -1 1 2 1"),
        ("B2", "-1 -2 -1 -2 1 2 1 2"),
        ("G2", "-1 -2 -1 -2 -1 -2 1 2 1 2 1 2"),
    ] {
        let t0 = Instant::now();
        let b = build_dt(&word(label, w)).map_err(err)?;
        let chk = check_dt(&b.transformation).map_err(err)?;
        let n = chk.entries.len();
        let minus_id = (0..n).all(|i| (0..n).all(|j| chk.entries[i][j] == if i == j { -1 } else { 0 }));
        if !minus_id || !chk.verdict {
            return Err(format!("{label} [{w}]: {:?}", chk.entries));
        }
        parts.push(format!(
            "{label}[{n}x{n}, {} mutations, {:.1}s]",
            b.transformation.mutation_count(),
            t0.elapsed().as_secs_f64()
        ));
    }
    Ok(format!("-I for {}", parts.join(" ")))
}

// ---------------------------------------------------------------- 5

fn c5_twist() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (label, w) in [("A1", "-1 1"), ("A2", "-1 -2 -1 1 2 1")] {
        let r = twist_check(&word(label, w), 20, &mut rng).map_err(err)?;
        if r.verdict != Verdict::Pass || r.trials.len() != 20 {
            let bad = r.trials.iter().find(|t| !t.agree).map(|t| t.x.to_string());
            return Err(format!("[{w}] disagrees at {bad:?}"));
        }
    }
    Ok("normalized cosets agree on 20 + 20 samples".into())
}

// ---------------------------------------------------------------- 6

fn c6_oracle() -> Outcome {
    for (label, w) in [("A1", "-1 1"), ("A2", "-1 -2 1 2")] {
        let w = word(label, w);
        let b = build_dt(&w).map_err(err)?;
        let cluster = compose(&b.transformation, ChartKind::X, true).map_err(err)?;
        let group = dt_oracle(&w).map_err(err)?;
        if cluster.images != group.images {
            return Err(format!("{:?}:\n{}\nvs\n{}", w.letters(), cluster.to_text(), group.to_text()));
        }
    }
    Ok("A1 and A2 images identical as reduced rational functions".into())
}

// ---------------------------------------------------------------- 7

fn c7_identities() -> Outcome {
    let reports = identity_suite(7, 50);
    if let Some(r) = reports.iter().find(|r| r.verdict != Verdict::Pass) {
        return Err(format!("{}: {:?}", r.identity, r.counterexample));
    }
    let y1 = y1_at_one().map_err(err)?;
    if y1 != BigRational::new(5.into(), 3.into()) {
        return Err(format!("y1(1,1) = {y1}"));
    }
    Ok(format!("{} identities, y1(1,1) = {y1}", reports.len()))
}

// ---------------------------------------------------------------- 8

fn c8_involution() -> Outcome {
    for (label, w) in [("A1", "-1 1"), ("A2", "-1 -2 1 2")] {
        let sq = d_x_squared(&word(label, w)).map_err(err)?;
        if !sq.is_identity() {
            return Err(format!("[{w}]: {}", sq.to_text()));
        }
    }
    Ok("instance check on A1 and A2".into())
}

// ---------------------------------------------------------------- 9

fn c9_covariance() -> Outcome {
    let mut moves = Vec::new();
    for (a, b) in [
        ("-1 -2 1 2", "1 -1 2 -2"),
        ("-1 -2 -1 1 2 1", "-2 -1 -2 2 1 2"),
        ("-1 -2 -1 1 2 1", "1 -2 2 -1 -2 1"),
    ] {
        let (w1, w2) = (word("A2", a), word("A2", b));
        let path = word_path(&w1, &w2).map_err(err)?;
        let (end, t) = apply_moves(&w1, &path).map_err(err)?;
        if end.letters() != w2.letters() {
            return Err(format!("path from [{a}] ends at {:?}", end.letters()));
        }
        let mu = compose(&t, ChartKind::X, true).map_err(err)?;
        let lhs = dt_pullback(&w2).map_err(err)?.precompose(&mu).map_err(err)?;
        let rhs = mu.precompose(&dt_pullback(&w1).map_err(err)?).map_err(err)?;
        if lhs.images != rhs.images {
            return Err(format!("[{a}] vs [{b}]"));
        }
        moves.push(path.len().to_string());
    }
    Ok(format!("3 word pairs, paths of {} moves", moves.join("/")))
}

// ---------------------------------------------------------------- 10

fn c10_leading_exponents() -> Outcome {
    let w = word("A2", "-1 -2 -1 1 2 1");
    let n = 3;
    let (seed, _) = amalgamate(&w);
    let xs: BTreeMap<VertexId, RationalFunction> = seed
        .vertices()
        .iter()
        .map(|v| (v.clone(), RationalFunction::var(chart_var(ChartKind::X, v))))
        .collect();
    let g = chi_eval(&w, &xs).map_err(err)?;
    let (u, v) = (w.u().letters, w.v().letters);
    let mut cases = 0;
    for up in 0..=u.len() {
        for vs in 0..=v.len() {
            let ub: Matrix<RationalFunction> = lift(n, &WeylWord::new(u[..up].to_vec())).map_err(err)?;
            let vb: Matrix<RationalFunction> =
                lift(n, &WeylWord::new(v.iter().rev().take(vs).copied().collect())).map_err(err)?;
            let m = ub.transpose().mul(&g).mul(&vb);
            for x in seed.vertices() {
                let pred =
                    reflected_state(&w, x, up, vs).map_err(err)?.gl_minor_degrees().ok_or("not type A")?;
                for beta in 1..n {
                    let got = minor(beta, &m).variable_degree(chart_var(ChartKind::X, x)).map_err(err)?;
                    if got != pred[beta - 1] {
                        return Err(format!(
                            "u-prefix {up}, v-suffix {vs}, {x}, minor {beta}: {} vs {got}",
                            pred[beta - 1]
                        ));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (prefix, variable, minor) cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("mutation involutivity", c1_involutivity),
        ("braid-move replays", c2_replays),
        ("p-map commutes with mutation", c3_p_commutation),
        ("DT degree matrix is -I", c4_degree_matrix),
        ("twist equals cluster route", c5_twist),
        ("DT equals group oracle", c6_oracle),
        ("group identity suite", c7_identities),
        ("(i_X o DT)^2 = id", c8_involution),
        ("conjugation covariance", c9_covariance),
        ("leading exponents vs minors", c10_leading_exponents),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let r = f();
        let secs = t0.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
