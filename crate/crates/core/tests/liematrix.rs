use std::collections::BTreeMap;

use bruhat_dt::cluster::{chart_var, ChartKind};
use bruhat_dt::liematrix::{
    chi_eval, coroot, coweight, e_minus, e_plus, gauss, in_double_cell, lift, minor, normalize_coset,
    psi_eval, random_cell_point, random_positive, s_bar, same_coset, twist, GroupElement, LieError, Matrix,
    TorusCoset,
};
use bruhat_dt::seed::{amalgamate, VertexId};
use bruhat_dt::symfun::RationalFunction;
use bruhat_dt::{CartanMatrix, PairWord, WeylWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn m(rows: &[&[i64]]) -> GroupElement {
    Matrix::from_i64_rows(rows).unwrap()
}

fn word(label: &str, s: &str) -> PairWord {
    PairWord::parse(s, &CartanMatrix::from_label(label).unwrap()).unwrap()
}

#[test]
fn generator_identities() {
    let e: GroupElement = e_plus(2, 1, &q(2, 1)).unwrap();
    assert_eq!(e.mul(&e_plus(2, 1, &q(3, 1)).unwrap()), e_plus(2, 1, &q(5, 1)).unwrap());
    assert_eq!(coroot(2, 1, &q(3, 1)).unwrap(), Matrix::diag(vec![q(3, 1), q(1, 3)]));
    assert_eq!(s_bar::<BigRational>(2, 1).unwrap(), m(&[&[0, -1], &[1, 0]]));
    // e+(b,t) commutes with the coweight of a different level
    let a: GroupElement = coweight(3, 1, &q(7, 2)).unwrap();
    let x: GroupElement = e_plus(3, 2, &q(5, 3)).unwrap();
    assert_eq!(x.mul(&a), a.mul(&x));
    let t = q(4, 3);
    let lhs = e_plus(2, 1, &t).unwrap().mul(&s_bar(2, 1).unwrap());
    let ti = q(3, 4);
    let rhs = e_minus(2, 1, &ti).unwrap().mul(&coroot(2, 1, &t).unwrap()).mul(&e_plus(2, 1, &-ti).unwrap());
    assert_eq!(lhs, rhs);
    let a: GroupElement = lift(3, &WeylWord::new(vec![1, 2, 1])).unwrap();
    assert_eq!(a, lift(3, &WeylWord::new(vec![2, 1, 2])).unwrap());
}

#[test]
fn gaussian_decomposition() {
    let (l, d, u) = gauss(&m(&[&[1, 1], &[1, 2]])).unwrap();
    assert_eq!(l, m(&[&[1, 0], &[1, 1]]));
    assert_eq!(d, Matrix::identity(2));
    assert_eq!(u, m(&[&[1, 1], &[0, 1]]));
    let x = Matrix::diag(vec![q(2, 1), q(1, 2)]);
    assert_eq!(gauss(&x).unwrap(), (Matrix::identity(2), x.clone(), Matrix::identity(2)));
    assert!(matches!(gauss(&m(&[&[0, 1], &[1, 0]])), Err(LieError::NotGaussianDecomposable { minor: 1 })));
    assert_eq!(minor(1, &m(&[&[1, 1], &[1, 2]])), q(1, 1));
}

#[test]
fn coset_normal_form() {
    let n = normalize_coset(&m(&[&[2, 4], &[6, 14]])).unwrap();
    assert_eq!(n.normal, Matrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(7, 6)]]).unwrap());
    // degenerate pattern: fall back to the forest normalization
    let x = m(&[&[0, 2], &[3, 5]]);
    let h = Matrix::diag(vec![q(3, 1), q(1, 5)]);
    let y = h.mul(&x).mul(&Matrix::diag(vec![q(2, 7), q(4, 1)]));
    assert!(normalize_coset(&x).is_err());
    assert_eq!(TorusCoset::of(&x), TorusCoset::of(&y));
    assert!(same_coset(&x, &y));
}

#[test]
fn chi_of_a1() {
    let w = word("A1", "-1 1");
    let (s, _) = amalgamate(&w);
    let vals: BTreeMap<VertexId, RationalFunction> = s
        .vertices()
        .iter()
        .map(|v| {
            let f = if s.is_frozen(v).unwrap() {
                RationalFunction::one()
            } else {
                RationalFunction::var(chart_var(ChartKind::X, v))
            };
            (v.clone(), f)
        })
        .collect();
    let g = chi_eval(&w, &vals).unwrap();
    let x = RationalFunction::var(chart_var(ChartKind::X, &VertexId::new(0, 1)));
    let want =
        Matrix::from_rows(vec![vec![x.clone(), x.clone()], vec![x.clone(), x.add(&RationalFunction::one())]])
            .unwrap();
    assert!(same_symbolic_coset(&g, &want));
}

/// 2x2 cosets under left and right torus scaling are determined by the
/// cross-ratio.
fn same_symbolic_coset(a: &Matrix<RationalFunction>, b: &Matrix<RationalFunction>) -> bool {
    let r = |x: &Matrix<RationalFunction>| {
        x.get(0, 0).mul(x.get(1, 1)).div(&x.get(0, 1).mul(x.get(1, 0))).unwrap()
    };
    r(a) == r(b)
}

#[test]
fn chi_image_lies_in_the_cell() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (l, w) in [("A1", "-1 1"), ("A2", "-1 -2 1 2"), ("A2", "-1 -2 -1 1 2 1"), ("A3", "-1 -2 -3 1 2")] {
        let w = word(l, w);
        let (s, _) = amalgamate(&w);
        for _ in 0..5 {
            let vals: BTreeMap<VertexId, BigRational> =
                s.vertices().iter().map(|v| (v.clone(), random_positive(&mut rng))).collect();
            let g = chi_eval(&w, &vals).unwrap();
            in_double_cell(&g, &w.u(), &w.v()).unwrap();
        }
    }
}

#[test]
fn frozen_values_only_move_the_coset_by_the_torus() {
    let w = word("A2", "-1 -2 -1 1 2 1");
    let (s, _) = amalgamate(&w);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let base: BTreeMap<VertexId, BigRational> =
        s.vertices().iter().map(|v| (v.clone(), random_positive(&mut rng))).collect();
    let mut other = base.clone();
    for f in s.frozen() {
        other.insert(f, random_positive(&mut rng));
    }
    assert!(same_coset(&chi_eval(&w, &base).unwrap(), &chi_eval(&w, &other).unwrap()));
}

#[test]
fn psi_glues_on_random_cell_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for w in ["-1 -2 1 2", "-1 -2 -1 1 2 1", "1 -2 -1 2"] {
        let w = word("A2", w);
        for _ in 0..5 {
            let x = random_cell_point(&w, &mut rng).unwrap();
            let vals = psi_eval(&w, &x).unwrap();
            assert_eq!(vals.len(), amalgamate(&w).0.len());
        }
    }
}

#[test]
fn twist_is_torus_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = word("A2", "-1 -2 -1 1 2 1");
    for _ in 0..5 {
        let x = random_cell_point(&w, &mut rng).unwrap();
        let h: Vec<BigRational> = (0..3).map(|_| random_positive(&mut rng)).collect();
        let k: Vec<BigRational> = (0..3).map(|_| random_positive(&mut rng)).collect();
        let y = Matrix::diag(h).mul(&x).mul(&Matrix::diag(k));
        assert!(same_coset(&twist(&x, &w.u(), &w.v()).unwrap(), &twist(&y, &w.u(), &w.v()).unwrap()));
    }
}

fn matrix(n: usize) -> impl Strategy<Value = GroupElement> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), n * n).prop_map(move |e| {
        Matrix::from_rows(e.chunks(n).map(|r| r.iter().map(|&(p, d)| q(p, d)).collect()).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gauss_recomposes(x in matrix(3)) {
        if let Ok((l, d, u)) = gauss(&x) {
            prop_assert_eq!(l.mul(&d).mul(&u), x);
        }
    }

    #[test]
    fn minor_invariances(x in matrix(4), t in -5i64..=5, a in 1usize..4, b in 1usize..4) {
        let t = q(t, 1);
        prop_assert_eq!(minor(a, &x.transpose()), minor(a, &x));
        let ep: GroupElement = e_plus(4, b, &t).unwrap();
        let em: GroupElement = e_minus(4, b, &t).unwrap();
        prop_assert_eq!(minor(a, &x.mul(&ep)), minor(a, &x));
        prop_assert_eq!(minor(a, &em.mul(&x)), minor(a, &x));
        if a != b {
            let s: GroupElement = s_bar(4, b).unwrap();
            prop_assert_eq!(minor(a, &s.inverse().unwrap().mul(&x)), minor(a, &x));
        }
    }

    #[test]
    fn coset_normal_form_ignores_the_torus(x in matrix(3), h in proptest::collection::vec(1i64..=7, 6)) {
        let l = Matrix::diag(h[..3].iter().map(|&p| q(p, 1)).collect());
        let r = Matrix::diag(h[3..].iter().map(|&p| q(1, p)).collect());
        prop_assert_eq!(TorusCoset::of(&l.mul(&x).mul(&r)), TorusCoset::of(&x));
    }
}
