use std::sync::Arc;

use baire::names::{
    cantor_pair, cantor_unpair, interleave_pair, prepend, project, split_pair, tuple_infinite,
    unprepend, FiniteGen, GuessStream, Name, NameStream, Outcome, Rows,
};
use proptest::prelude::*;

fn name(head: Vec<u64>, cycle: Vec<u64>) -> (FiniteGen<u64>, Name) {
    let gen = FiniteGen::cycle(head, cycle).expect("non-empty cycle");
    (gen.clone(), Arc::new(gen))
}

fn read(n: &dyn NameStream, len: u64) -> Vec<u64> {
    (0..len)
        .map(|i| n.query(i, 0).value().expect("finite names answer"))
        .collect()
}

fn stream() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (
        prop::collection::vec(any::<u64>(), 0..6),
        prop::collection::vec(any::<u64>(), 1..5),
    )
}

proptest! {
    #[test]
    fn pair_then_unpair(n in 0u64..1 << 31, k in 0u64..1 << 31) {
        prop_assert_eq!(cantor_unpair(cantor_pair(n, k)), (n, k));
    }

    #[test]
    fn unpair_then_pair(code in 0u64..1 << 60) {
        let (n, k) = cantor_unpair(code);
        prop_assert_eq!(cantor_pair(n, k), code);
    }

    #[test]
    fn pairing_is_monotone_in_each_argument(n in 0u64..1 << 20, k in 0u64..1 << 20) {
        prop_assert!(cantor_pair(n, k) < cantor_pair(n + 1, k));
        prop_assert!(cantor_pair(n, k) < cantor_pair(n, k + 1));
    }

    #[test]
    fn interleave_splits_back((h1, c1) in stream(), (h2, c2) in stream()) {
        let (a, p) = name(h1, c1);
        let (b, q) = name(h2, c2);
        let joined = interleave_pair(p, q);
        let (left, right) = split_pair(joined.clone());
        prop_assert_eq!(read(left.as_ref(), 64), a.prefix(64));
        prop_assert_eq!(read(right.as_ref(), 64), b.prefix(64));
        let raw = read(joined.as_ref(), 32);
        for i in 0..16 {
            prop_assert_eq!(raw[2 * i], *a.at(i as u64));
            prop_assert_eq!(raw[2 * i + 1], *b.at(i as u64));
        }
    }

    #[test]
    fn prepend_is_undone((h, c) in stream(), first in any::<u64>()) {
        let (a, p) = name(h, c);
        let (got, rest) = unprepend(prepend(first, p), 0);
        prop_assert_eq!(got, Outcome::Value(first));
        prop_assert_eq!(read(rest.as_ref(), 64), a.prefix(64));
    }

    #[test]
    fn tuple_rows_project_back(rows in prop::collection::vec(stream(), 1..5)) {
        let gens: Vec<(FiniteGen<u64>, Name)> = rows.into_iter().map(|(h, c)| name(h, c)).collect();
        let tuple = tuple_infinite(Rows::Listed(gens.iter().map(|g| g.1.clone()).collect())).unwrap();
        for (i, (gen, _)) in gens.iter().enumerate() {
            prop_assert_eq!(read(project(tuple.clone(), i as u64).as_ref(), 64), gen.prefix(64));
        }
    }

    #[test]
    fn finite_gen_is_eventually_periodic((h, c) in stream(), i in 0u64..10_000) {
        let (gen, _) = name(h.clone(), c.clone());
        let j = i + h.len() as u64;
        prop_assert_eq!(gen.at(j), gen.at(j + c.len() as u64));
    }

    #[test]
    fn settled_from_marks_the_last_revision(stages in prop::collection::vec(0u8..3, 1..40)) {
        let g = GuessStream::new(stages.clone());
        let from = g.settled_from().unwrap();
        prop_assert!(stages[from..].iter().all(|x| *x == stages[stages.len() - 1]));
        prop_assert!(from == 0 || stages[from - 1] != stages[from]);
        prop_assert_eq!(g.revisions(), stages.windows(2).filter(|w| w[0] != w[1]).count());
    }
}

#[test]
fn diagonal_order_of_small_codes() {
    let listed: Vec<(u64, u64)> = (0..6).map(cantor_unpair).collect();
    assert_eq!(listed, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
}

#[test]
fn empty_guess_stream_has_no_settling_point() {
    assert_eq!(GuessStream::<u8>::new(Vec::new()).settled_from(), None);
}
