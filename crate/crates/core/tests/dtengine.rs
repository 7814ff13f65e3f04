use bruhat_dt::cluster::{compose, ChartKind, Step};
use bruhat_dt::dtengine::{
    apply_move, apply_moves, build_dt, d_x_squared, dt_pullback, i_x, leading_exponents, word_path, Move,
    MoveKind,
};
use bruhat_dt::seed::{amalgamate, VertexId};
use bruhat_dt::{CartanMatrix, PairWord};
use num_rational::Ratio;
use proptest::prelude::*;

fn word(label: &str, s: &str) -> PairWord {
    PairWord::parse(s, &CartanMatrix::from_label(label).unwrap()).unwrap()
}

fn replays(w: &PairWord, moves: &[Move]) -> PairWord {
    let (end, t) = apply_moves(w, moves).unwrap();
    t.validate().unwrap();
    assert_eq!(t.source, amalgamate(w).0);
    assert_eq!(t.target, amalgamate(&end).0);
    end
}

#[test]
fn move_one_between_levels_is_trivial() {
    let w = word("A2", "1 -2");
    let (next, t) = apply_move(&w, &Move::swap(&w, 0)).unwrap();
    assert_eq!(next.letters(), [-2, 1]);
    assert_eq!(t.mutation_count(), 0);
    assert_eq!(t.source.epsilon(), t.target.epsilon());
}

#[test]
fn move_one_on_one_level_is_one_mutation() {
    let w = word("A2", "1 -1 2");
    let (next, t) = apply_move(&w, &Move::swap(&w, 0)).unwrap();
    assert_eq!(next.letters(), [-1, 1, 2]);
    assert_eq!(t.mutation_count(), 1);
    assert!(t.steps.contains(&Step::Mutate(VertexId::new(0, 1))));
    t.validate().unwrap();
}

#[test]
fn g2_braid_move_replays() {
    let w = word("G2", "1 2 1 2 1 2");
    let (next, t) = apply_move(&w, &Move::braid(&w, 0, 6)).unwrap();
    assert_eq!(next.letters(), [2, 1, 2, 1, 2, 1]);
    assert_eq!(t.mutation_count(), 10);
    t.validate().unwrap();
    assert_eq!(t.target, amalgamate(&next).0);
}

#[test]
fn word_paths() {
    let a2 = word("A2", "-1 -2 1 2");
    assert!(word_path(&a2, &a2).unwrap().is_empty());
    let (s, t) = (word("A2", "1 2 1"), word("A2", "2 1 2"));
    let p = word_path(&s, &t).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].kind, MoveKind::Move2);
    assert_eq!(replays(&s, &p).letters(), t.letters());
    let (s, t) = (word("A2", "-1 1 -2 2"), word("A2", "-1 -2 1 2"));
    let p = word_path(&s, &t).unwrap();
    assert!(p.iter().all(|m| m.kind == MoveKind::Move1));
    assert_eq!(replays(&s, &p).letters(), t.letters());
    assert!(word_path(&word("A2", "1 2"), &word("A2", "2 1")).is_err());
}

#[test]
fn a1_dt() {
    let w = word("A1", "-1 1");
    let b = build_dt(&w).unwrap();
    let m = compose(&b.transformation, ChartKind::X, true).unwrap();
    let x = VertexId::new(0, 1);
    let img = m.get(&x).unwrap();
    let var = bruhat_dt::cluster::chart_var(ChartKind::X, &x);
    assert_eq!(img.variable_degree(var).unwrap(), -1);
    assert_eq!(dt_pullback(&w).unwrap().images, m.images);
}

#[test]
fn dt_of_words_not_in_u_before_v_form() {
    for (l, w) in [("A2", "1 -1 2 -2"), ("B2", "-1 1 -2 2")] {
        let b = build_dt(&word(l, w)).unwrap();
        assert!(b.conjugation_moves > 0);
        assert!(bruhat_dt::tropical::check_dt(&b.transformation).unwrap().verdict, "{w}");
    }
}

#[test]
fn i_x_properties() {
    for (l, w) in [("A1", "-1 1"), ("A2", "-1 -2 1 2"), ("B2", "-1 -2 1 2")] {
        let w = word(l, w);
        let i = i_x(&w).unwrap();
        assert_eq!(i.target, amalgamate(&w.reversed()).0);
        let back = i_x(&i.target_word).unwrap();
        let twice = back.pullback(true).precompose(&i.pullback(true)).unwrap();
        assert!(twice.is_identity());
    }
    assert!(d_x_squared(&word("A1", "-1 1")).unwrap().is_identity());
}

#[test]
fn leading_exponents_start_at_own_level() {
    let w = word("A2", "-1 -2 -1 1 2 1");
    let (s, _) = amalgamate(&w);
    for x in s.unfrozen() {
        let p = leading_exponents(&w, &x, 0, 0).unwrap();
        let lvl = x.level().unwrap();
        for (b, e) in p.iter().enumerate() {
            assert_eq!(*e, i64::from(b == lvl), "{x}");
        }
    }
    assert!(leading_exponents(&w, &VertexId::new(0, 1), 9, 0).is_err());
}

const CONSERVATION: [(&str, &str); 4] = [
    ("A2", "-1 -2 -1 1 2 1"),
    ("B2", "-1 -2 -1 -2 1 2 1 2"),
    ("G2", "-1 -2 -1 1 2 1"),
    ("A3", "-1 -2 -3 1 2 3"),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exponent_pairing_is_conserved_off_the_reflected_level(i in 0..CONSERVATION.len(), pick in 0usize..64, k in 0usize..8) {
        let (l, w) = CONSERVATION[i];
        let w = word(l, w);
        let c = w.cartan().clone();
        let inv = c.inverse();
        let (s, _) = amalgamate(&w);
        let verts = s.vertices();
        let x = &verts[pick % verts.len()];
        let v = w.v().letters;
        let k = k % v.len();
        let gamma = v[v.len() - 1 - k] - 1;
        let before = leading_exponents(&w, x, 0, k).unwrap();
        let after = leading_exponents(&w, x, 0, k + 1).unwrap();
        for a in (0..c.rank()).filter(|&a| a != gamma) {
            let pair = |p: &[i64]| -> Ratio<i64> { (0..c.rank()).map(|b| inv[b][a] * p[b]).sum() };
            prop_assert_eq!(pair(&before), pair(&after));
        }
    }

    #[test]
    fn braid_moves_replay_to_amalgamated_targets(i in 0..3usize, pos in 0usize..8) {
        let (l, w, len) = [("A2", "-1 1 2 1", 3), ("B2", "-1 1 2 1 2", 4), ("A3", "1 2 1 3 -3", 3)][i];
        let w = word(l, w);
        let letters = w.letters();
        let starts: Vec<usize> = (0..=letters.len() - len)
            .filter(|&p| {
                let b = &letters[p..p + len];
                b.iter().all(|&x| x > 0) && b.windows(2).all(|q| q[0] != q[1]) && b.iter().step_by(2).all(|&x| x == b[0])
            })
            .collect();
        prop_assume!(!starts.is_empty());
        let m = Move::braid(&w, starts[pos % starts.len()], len);
        let (next, t) = apply_move(&w, &m).unwrap();
        t.validate().unwrap();
        prop_assert_eq!(&t.target, &amalgamate(&next).0);
    }
}
