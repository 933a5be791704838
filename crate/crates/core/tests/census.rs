mod common;

use common::*;
use spherecurve::enumerate::{CurveCensus, GENERATOR_VERSION};
use spherecurve::{enumerate_maps, enumerate_words, inverse_splice, Convention};

const COUNTS: [usize; 7] = [1, 2, 6, 19, 76, 376, 2194];

#[test]
fn counts_match_known_sequence() {
    for (k, &expected) in COUNTS.iter().enumerate() {
        assert_eq!(census(k + 1).len(), expected, "n = {}", k + 1);
    }
}

#[test]
fn words_agree_with_maps() {
    for n in 1..=5 {
        for convention in [Convention::default(), Convention::with_mirror(false)] {
            let by_words = enumerate_words(n, convention).unwrap();
            let by_maps = enumerate_maps(n, convention).unwrap();
            assert_eq!(by_words.curves, by_maps.curves, "n = {n}, {convention:?}");
        }
    }
}

#[test]
fn mirror_identification_never_adds_curves() {
    for n in 1..=6 {
        let identified = enumerate_words(n, Convention::default()).unwrap().len();
        let distinct = enumerate_words(n, Convention::with_mirror(false)).unwrap().len();
        assert!(identified <= distinct);
        assert!(distinct <= 2 * identified);
    }
}

#[test]
fn closed_under_inverse_splice() {
    for n in 2..=6 {
        let below = census(n - 1).words();
        for word in census(n).words() {
            for p in word.labels() {
                let out = inverse_splice(&word, p).unwrap().canonical();
                assert!(below.contains(&out), "{word} at {p} gives {out}");
            }
        }
    }
}

#[test]
fn keys_are_canonical_and_round_trip() {
    for c in curves_up_to(5) {
        let key = c.key(Convention::default());
        assert_eq!(key.to_curve().key(Convention::default()), key);
        for shift in 0..c.word().len() {
            assert_eq!(c.rotated(shift).key(Convention::default()), key);
        }
        let text = key.to_string();
        assert_eq!(text.parse::<spherecurve::EmbeddingKey>().unwrap(), key);
    }
}

#[test]
fn census_file_round_trip() {
    let c = census(4);
    let text = c.to_file_string();
    assert!(text.contains("n=4"));
    let (back, generator): (CurveCensus, String) = CurveCensus::from_file_str(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(generator, GENERATOR_VERSION);
}

#[test]
fn bounds_are_enforced() {
    assert!(enumerate_words(0, Convention::default()).is_err());
    assert!(enumerate_words(11, Convention::default()).is_err());
}
