use gschnyder::codec::{check_red_encode, decode, deserialize, encode, labeled_code, serialize, CodeWords};
use gschnyder::generators::{grid_torus, handle_sum, planar_random, refine};
use gschnyder::{compute_schnyder, CodecError, Map, TraversalOptions};

fn roundtrip(m: &Map, root_face: usize) -> Vec<u8> {
    let (w, _) = compute_schnyder(m, root_face, TraversalOptions::default()).unwrap();
    let rep = check_red_encode(m, &w).unwrap();
    assert!(rep.violations.is_empty());
    let code = encode(m, &w).unwrap();
    let bytes = serialize(&code);
    let back = deserialize(&bytes).unwrap();
    assert_eq!(back, code);
    let (m2, w2) = decode(&back).unwrap_or_else(|e| panic!("n={} g={}: {e}", code.n, code.g));
    assert_eq!(labeled_code(m, &w), labeled_code(&m2, &w2));
    bytes
}

#[test]
fn word_of_the_tetrahedron() {
    // v2 with the three children v0, x, v1
    let code = CodeWords {
        n: 4,
        g: 0,
        w: [true, false, true, false, true, false].to_vec(),
        specials: vec![],
        wp: vec![false, true],
    };
    let (m, wood) = decode(&code).unwrap();
    assert_eq!(m.vertex_count(), 4);
    assert_eq!(m.edge_count(), 6);
    assert!(gschnyder::wood::validate(&m, &wood).pass());
    let again = encode(&m, &wood).unwrap();
    assert_eq!(again, code);

    // rooted at v2 the tree is a star; a path below v0 would put an ingoing
    // color-2 edge in the root sector of v0
    let path = CodeWords { w: [true, true, false, false, true, false].to_vec(), ..code };
    assert!(decode(&path).is_err());
}

#[test]
fn golden_streams() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let tetra = gschnyder::io::read_mesh(&dir.join("tetrahedron.tri")).unwrap();
    let (w, _) = compute_schnyder(&tetra, 0, TraversalOptions::default()).unwrap();
    // magic, n = 4, g = 0, W = 101010.., W' = 01..
    assert_eq!(serialize(&encode(&tetra, &w).unwrap()), b"GSC1\x04\x00\xa8\x40");
    for name in ["tetrahedron", "torus_3x3", "genus2_5x5"] {
        let m = gschnyder::io::read_mesh(&dir.join(format!("{name}.tri"))).unwrap();
        let (w, _) = compute_schnyder(&m, 0, TraversalOptions::default()).unwrap();
        let golden = std::fs::read(dir.join(format!("{name}.gsc"))).unwrap();
        assert_eq!(serialize(&encode(&m, &w).unwrap()), golden, "{name}");
    }
}

#[test]
fn all_genera_roundtrip() {
    for seed in 0..6 {
        roundtrip(&planar_random(60, seed).unwrap(), seed as usize);
    }
    for (p, q) in [(3, 3), (4, 4), (5, 3)] {
        let m = grid_torus(p, q).unwrap();
        for f in 0..m.face_count() {
            roundtrip(&m, f);
        }
    }
    for h in 1..=3 {
        for seed in 0..5 {
            let m = handle_sum(&grid_torus(5, 5).unwrap(), h, seed).unwrap();
            roundtrip(&m, 0);
            roundtrip(&m, m.face_count() - 1);
        }
    }
    roundtrip(&refine(&handle_sum(&grid_torus(4, 4).unwrap(), 1, 2).unwrap(), 1), 5);
}

#[test]
fn corrupted_streams_never_decode_silently() {
    let m = handle_sum(&grid_torus(5, 5).unwrap(), 1, 3).unwrap();
    let bytes = roundtrip(&m, 0);
    let (w, _) = compute_schnyder(&m, 0, TraversalOptions::default()).unwrap();
    let reference = labeled_code(&m, &w);
    for i in 0..bytes.len() * 8 {
        let mut c = bytes.clone();
        c[i / 8] ^= 1 << (i % 8);
        match deserialize(&c).and_then(|code| decode(&code)) {
            Err(_) => {}
            Ok((m2, w2)) => {
                assert!(gschnyder::wood::validate(&m2, &w2).pass(), "bit {i}: decoded wood invalid");
                assert_ne!(labeled_code(&m2, &w2), reference, "bit {i}: flip went unnoticed");
            }
        }
    }
    for len in 0..bytes.len() {
        assert!(deserialize(&bytes[..len]).is_err());
    }
    assert_eq!(deserialize(b"GSC2\x04\x00"), Err(CodecError::BadMagic));
}
