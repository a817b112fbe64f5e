use gschnyder::canon::canonical_form;
use gschnyder::codec::{decode, deserialize, encode, labeled_code, CodeWords, SpecialRecord};
use gschnyder::generators::{grid_torus, handle_sum, planar_random};
use gschnyder::io::{parse_gsw, parse_off, parse_tri, write_gsw, write_off, write_tri};
use gschnyder::{compute_schnyder, TraversalOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_root_face_roundtrips(n in 4usize..80, seed in 0u64..1000, pick in 0usize..1000) {
        let m = planar_random(n, seed).unwrap();
        let f = pick % m.face_count();
        let (w, log) = compute_schnyder(&m, f, TraversalOptions { check_invariants: true }).unwrap();
        prop_assert_eq!(log.merges() + log.splits(), 0);
        let (m2, w2) = decode(&encode(&m, &w).unwrap()).unwrap();
        prop_assert_eq!(labeled_code(&m, &w), labeled_code(&m2, &w2));
    }

    #[test]
    fn genus_two_any_root(seed in 0u64..50, pick in 0usize..1000) {
        let m = handle_sum(&grid_torus(5, 4).unwrap(), 1, seed).unwrap();
        let f = pick % m.face_count();
        let (w, log) = compute_schnyder(&m, f, TraversalOptions::default()).unwrap();
        prop_assert_eq!((log.merges(), log.splits()), (2, 2));
        let (m2, w2) = decode(&encode(&m, &w).unwrap()).unwrap();
        prop_assert_eq!(labeled_code(&m, &w), labeled_code(&m2, &w2));
    }

    #[test]
    fn text_formats_roundtrip(n in 4usize..40, seed in 0u64..1000) {
        let m = planar_random(n, seed).unwrap();
        let form = canonical_form(&m);
        prop_assert_eq!(canonical_form(&parse_tri(&write_tri(&m)).unwrap()), form.clone());
        prop_assert_eq!(canonical_form(&parse_off(&write_off(&m)).unwrap()), form);
        let (w, _) = compute_schnyder(&m, 0, TraversalOptions::default()).unwrap();
        prop_assert_eq!(parse_gsw(&m, &write_gsw(&m, &w)).unwrap(), w);
    }

    #[test]
    fn parsers_reject_without_panicking(text in "[0-9 #\\n-]{0,80}", bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
        let _ = parse_tri(&text);
        let _ = parse_off(&format!("OFF\n{text}"));
        let mut stream = b"GSC1".to_vec();
        stream.extend_from_slice(&bytes);
        if let Ok(code) = deserialize(&stream) {
            let _ = decode(&code);
        }
    }

    #[test]
    fn arbitrary_code_words_never_panic(
        n in 4usize..12,
        mut w in proptest::collection::vec(any::<bool>(), 22),
        mut wp in proptest::collection::vec(any::<bool>(), 30),
        rec in proptest::collection::vec((0u64..24, 0u64..3, 0u64..24, 0u64..3, any::<u8>()), 0..5),
    ) {
        let specials: Vec<SpecialRecord> = rec
            .into_iter()
            .map(|(corner_a, rank_a, corner_b, rank_b, flags)| SpecialRecord { corner_a, rank_a, corner_b, rank_b, flags })
            .collect();
        let g = specials.len() / 2;
        // exact lengths, so decoding gets past the length checks
        w.truncate(2 * n - 2);
        wp.truncate(2 * n - 6 + 4 * g);
        let _ = decode(&CodeWords { n, g, w, specials, wp });
    }
}
