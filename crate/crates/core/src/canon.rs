//! Canonical forms for map isomorphism tests.
//!
//! A rooted map is rigid: once one brin is mapped, `follower` and `opposite`
//! determine the rest. The rooted code relabels brins in breadth-first order
//! from the root; the unrooted canonical form is the minimum over all roots.

use std::collections::VecDeque;

use crate::map::{BrinId, Map};

/// Breadth-first code of `map` rooted at `root`, with a per-brin attribute.
pub fn rooted_code<F>(map: &Map, root: BrinId, attr: F) -> Vec<u64>
where
    F: Fn(BrinId) -> u64,
{
    let nb = map.brin_count();
    let mut label = vec![u32::MAX; nb];
    let mut order = Vec::with_capacity(nb);
    let mut queue = VecDeque::new();
    label[root.index()] = 0;
    queue.push_back(root);
    while let Some(b) = queue.pop_front() {
        order.push(b);
        for next in [map.follower(b), b.opposite()] {
            if label[next.index()] == u32::MAX {
                label[next.index()] = order.len() as u32 + queue.len() as u32;
                queue.push_back(next);
            }
        }
    }
    let mut code = Vec::with_capacity(3 * nb + 1);
    code.push(nb as u64);
    for b in order {
        code.push(label[map.follower(b).index()] as u64);
        code.push(label[b.opposite().index()] as u64);
        code.push(attr(b));
    }
    code
}

/// Lexicographically minimal rooted code over all roots. Quadratic; meant
/// for small maps.
pub fn canonical_form(map: &Map) -> Vec<u64> {
    map.brins()
        .map(|r| rooted_code(map, r, |_| 0))
        .min()
        .unwrap_or_default()
}

/// Searches for an isomorphism by trying every image of brin 0 and propagating
/// along `follower` and `opposite`. Returns the brin mapping when one exists.
pub fn find_isomorphism(a: &Map, b: &Map) -> Option<Vec<BrinId>> {
    if a.brin_count() != b.brin_count()
        || a.vertex_count() != b.vertex_count()
        || a.face_count() != b.face_count()
    {
        return None;
    }
    if a.brin_count() == 0 {
        return Some(Vec::new());
    }
    'candidates: for image in b.brins() {
        let mut phi = vec![u32::MAX; a.brin_count()];
        let mut stack = vec![(BrinId(0), image)];
        phi[0] = image.0;
        while let Some((x, y)) = stack.pop() {
            for (nx, ny) in [
                (a.follower(x), b.follower(y)),
                (x.opposite(), y.opposite()),
            ] {
                let slot = &mut phi[nx.index()];
                if *slot == u32::MAX {
                    *slot = ny.0;
                    stack.push((nx, ny));
                } else if *slot != ny.0 {
                    continue 'candidates;
                }
            }
        }
        let mut hit = vec![false; b.brin_count()];
        for &p in &phi {
            if hit[p as usize] {
                continue 'candidates;
            }
            hit[p as usize] = true;
        }
        return Some(phi.into_iter().map(BrinId).collect());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> Map {
        Map::from_triangles(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    #[test]
    fn relabeled_tetrahedron_is_isomorphic() {
        let a = tetra();
        let b = Map::from_triangles(4, &[[3, 2, 1], [3, 1, 0], [3, 0, 2], [2, 0, 1]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert!(find_isomorphism(&a, &b).is_some());
    }

    #[test]
    fn different_maps_differ() {
        let a = tetra();
        let b = Map::from_glued_faces(2, &[vec![(0, 'a'), (1, 'b')], vec![(1, 'a'), (0, 'b')]])
            .unwrap();
        assert_ne!(canonical_form(&a), canonical_form(&b));
        assert!(find_isomorphism(&a, &b).is_none());
    }
}
