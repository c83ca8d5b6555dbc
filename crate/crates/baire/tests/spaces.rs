mod common;

use baire::names::{FiniteGen, Outcome};
use baire::random::{random_baire_set, random_word, seeded_rng};
use baire::solvers::certify_nowhere_dense;
use baire::spaces::{
    covers, iota_embed, iota_image_set, iota_inverse, iota_inverse_exact, iota_word,
    uncovered_words, BaireNegClosedSet, BairePoint, BaireWord, CantorPoint, Token, Word,
};
use proptest::prelude::*;

use common::{ball_covered, complement_truncation};

fn baire_point() -> impl Strategy<Value = BairePoint> {
    (
        prop::collection::vec(0u64..50, 0..6),
        prop::collection::vec(0u64..50, 1..4),
    )
        .prop_map(|(head, cycle)| FiniteGen::cycle(head, cycle).unwrap())
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..10).prop_map(|bits| Word::from_bits(&bits).unwrap())
}

proptest! {
    #[test]
    fn word_numbering_is_a_bijection(n in 0u64..1 << 40) {
        prop_assert_eq!(Word::from_number(n).number(), n);
    }

    #[test]
    fn word_numbering_is_length_lexicographic(n in 0u64..1 << 30) {
        let (a, b) = (Word::from_number(n), Word::from_number(n + 1));
        prop_assert!(a.len() < b.len() || (a.len() == b.len() && a.bits() < b.bits()));
    }

    #[test]
    fn token_codes_round_trip(code in 0u64..1 << 40) {
        prop_assert_eq!(Token::from_code(code).code(), code);
    }

    #[test]
    fn baire_word_numbering_round_trips(n in 0u64..1 << 30, bound in 1u64..6) {
        let u = BaireWord::from_number(n, bound);
        prop_assert_eq!(u.number(bound), Some(n));
    }

    #[test]
    fn embedding_inverts(p in baire_point()) {
        let q = iota_embed(&p).unwrap();
        prop_assert_eq!(iota_inverse(&q, 32), Outcome::Value(p.prefix(32)));
        let exact = iota_inverse_exact(&q).value().unwrap();
        prop_assert_eq!(exact.prefix(64), p.prefix(64));
    }

    #[test]
    fn embedded_words_are_unary_blocks(symbols in prop::collection::vec(0u64..20, 0..8)) {
        let u = BaireWord(symbols.clone());
        let mut bits = Vec::new();
        for a in symbols {
            bits.extend(std::iter::repeat_n(1u8, a as usize));
            bits.push(0);
        }
        prop_assert_eq!(iota_word(&u), Word::from_bits(&bits).unwrap());
    }

    #[test]
    fn covers_agrees_with_enumeration(words in prop::collection::vec(word(), 0..6), x in word()) {
        prop_assert_eq!(covers(&words, &x), ball_covered(&words, &x));
    }

    #[test]
    fn uncovered_words_agree_with_enumeration(words in prop::collection::vec(word(), 0..6), depth in 0usize..9) {
        let got: std::collections::BTreeSet<Word> = uncovered_words(&words, depth).into_iter().collect();
        prop_assert_eq!(got, complement_truncation(&words, depth));
    }

    #[test]
    fn prefix_laws(w in word(), v in word()) {
        let joined = w.concat(&v);
        prop_assert!(w.is_prefix_of(&joined));
        prop_assert!(w.compatible(&joined) && joined.compatible(&w));
        prop_assert_eq!(joined.prefix(w.len()), w.clone());
        prop_assert!(joined.common_prefix_len(&w) == w.len());
    }
}

#[test]
fn padded_points_extend_their_prefix() {
    let mut rng = seeded_rng(1);
    for len in 0..12 {
        let w = random_word(&mut rng, len);
        let p = CantorPoint::padded(&w, 1);
        assert!(p.extends(&w));
        assert_eq!(p.bit(len as u64 + 5), 1);
    }
}

#[test]
fn image_of_a_baire_set_is_nowhere_dense_and_contains_the_image() {
    let mut rng = seeded_rng(2);
    for _ in 0..20 {
        let spec = random_baire_set(&mut rng, 2, 3);
        let set = BaireNegClosedSet::from_spec(spec);
        let image = iota_image_set(&set);
        assert!(certify_nowhere_dense(&image, 6, 1 << 12));
        let truncation = image.depth_truncate(6, 1 << 12);
        for u in set.depth_truncate(3, 1 << 12) {
            let w = iota_word(&u);
            if w.len() <= 6 {
                assert!(
                    truncation.iter().any(|x| w.is_prefix_of(x)),
                    "image of {u:?} removed"
                );
            }
        }
    }
}
