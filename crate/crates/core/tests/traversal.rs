use gschnyder::generators::{grid_torus, handle_sum, planar_random, planar_stacked, refine};
use gschnyder::wood::{color_class_is_tree, validate};
use gschnyder::{compute_schnyder, Color, Map, TraversalOptions};

fn checked() -> TraversalOptions {
    TraversalOptions { check_invariants: true }
}

fn run_and_validate(m: &Map, root_face: usize) {
    let g = m.genus().unwrap();
    let (wood, log) = compute_schnyder(m, root_face, checked())
        .unwrap_or_else(|e| panic!("traversal failed (n={}, g={g}, root {root_face}): {e}", m.vertex_count()));
    assert_eq!(log.merges(), g);
    assert_eq!(log.splits(), g);
    assert_eq!(wood.special_edges().len(), 2 * g);
    let rep = validate(m, &wood);
    assert!(rep.pass(), "n={} g={g} root {root_face}\n{rep}", m.vertex_count());
    assert!(rep.g0_cellular.pass() && rep.g1_cellular.pass(), "{rep}");
    assert_eq!(rep.g2.faces, 1);
    assert_eq!(rep.g2.edges, m.vertex_count() - 1 + 2 * g);
}

#[test]
fn planar_instances() {
    for n in [4, 5, 6, 10, 37, 120] {
        for seed in 0..4 {
            let m = planar_random(n, seed).unwrap();
            run_and_validate(&m, (seed as usize * 7) % m.face_count());
            let s = planar_stacked(n, seed).unwrap();
            let (w, _) = compute_schnyder(&s, 0, checked()).unwrap();
            for c in Color::ALL {
                assert!(color_class_is_tree(&s, &w, c));
            }
        }
    }
}

#[test]
fn torus_grids_every_root() {
    for (p, q) in [(3, 3), (3, 4), (4, 5), (6, 3)] {
        let m = grid_torus(p, q).unwrap();
        for f in 0..m.face_count() {
            run_and_validate(&m, f);
        }
    }
}

#[test]
fn higher_genus() {
    for h in 1..=3 {
        for seed in 0..4 {
            let m = handle_sum(&grid_torus(5, 5).unwrap(), h, seed).unwrap();
            run_and_validate(&m, 0);
            run_and_validate(&m, m.face_count() / 2);
        }
    }
    let m = refine(&handle_sum(&grid_torus(4, 4).unwrap(), 1, 9).unwrap(), 1);
    run_and_validate(&m, 3);
}
