mod common;

use common::*;
use spherecurve::embedding::spherical_sign_vectors;
use spherecurve::{is_realizable, realize_all, Chirality, PlaneCurve};

#[test]
fn rosenstiehl_agrees_with_sign_search() {
    for n in 1..=6 {
        for word in all_words(n) {
            let oracle = rosenstiehl(&word);
            assert_eq!(is_realizable(&word), oracle, "{word}");
            if !word.satisfies_parity() {
                assert!(!oracle, "parity failed but {word} is planar");
            }
        }
    }
}

#[test]
fn known_non_realizable() {
    assert!(!is_realizable(&w("1 2 3 4 1 2 3 4")));
    assert!(!rosenstiehl(&w("1 2 3 4 1 2 3 4")));
    assert!(!is_realizable(&w("1 2 1 2")));
}

#[test]
fn walked_faces_match_library() {
    for n in 1..=5 {
        for word in all_words(n).into_iter().filter(|w| w.satisfies_parity()) {
            for signs in spherical_sign_vectors(&word) {
                let mut walked = walk_faces(&word, &signs);
                walked.sort();
                let curve = PlaneCurve::new(word.clone(), signs).unwrap();
                let mut lib: Vec<(usize, bool)> = curve.faces().iter().map(|f| (f.size, f.coherent)).collect();
                lib.sort();
                assert_eq!(lib, walked, "{}", curve);
            }
        }
    }
}

#[test]
fn frozen_face_sizes() {
    let kink = realize_all(&w("1 1"), true);
    assert_eq!(kink.len(), 1);
    assert_eq!(sorted_sizes(&kink[0]), vec![1, 1, 2]);
    let mut walked = walk_faces(&w("1 1"), &[Chirality::Positive]);
    walked.sort();
    assert_eq!(walked, vec![(1, true), (1, true), (2, false)]);

    let trefoil = realize_all(&w("1 2 3 1 2 3"), true);
    assert_eq!(trefoil.len(), 1);
    assert_eq!(sorted_sizes(&trefoil[0]), vec![2, 2, 2, 3, 3]);
    assert_eq!(trefoil[0].to_string(), "1 2 3 1 2 3 [+,-,+]");
}

#[test]
fn sphere_face_count() {
    for c in curves_up_to(6) {
        let faces = c.faces();
        assert_eq!(faces.len(), c.crossing_count() + 2);
        assert_eq!(faces.iter().map(|f| f.size).sum::<usize>(), 4 * c.crossing_count());
    }
}
