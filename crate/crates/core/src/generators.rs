//! Seeded generators of simple triangulations with prescribed genus.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::map::{Map, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    PlanarStacked { n: usize },
    PlanarRandom { n: usize },
    GridTorus { p: usize, q: usize },
    HandleSum { base: Box<GenSpec>, handles: usize },
    Refine { base: Box<GenSpec>, rounds: usize },
}

impl GenSpec {
    pub fn build(&self, seed: u64) -> Result<Map, GenError> {
        match self {
            GenSpec::PlanarStacked { n } => planar_stacked(*n, seed),
            GenSpec::PlanarRandom { n } => planar_random(*n, seed),
            GenSpec::GridTorus { p, q } => grid_torus(*p, *q),
            GenSpec::HandleSum { base, handles } => {
                handle_sum(&base.build(seed)?, *handles, seed.wrapping_add(0x9e37_79b9))
            }
            GenSpec::Refine { base, rounds } => Ok(refine(&base.build(seed)?, *rounds)),
        }
    }

    /// Genus of the generated surface.
    pub fn genus(&self) -> usize {
        match self {
            GenSpec::PlanarStacked { .. } | GenSpec::PlanarRandom { .. } => 0,
            GenSpec::GridTorus { .. } => 1,
            GenSpec::HandleSum { base, handles } => base.genus() + handles,
            GenSpec::Refine { base, .. } => base.genus(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The `p x q` grid torus with every quad split along the same diagonal,
/// without the size check (small grids produce loops or parallel edges).
pub fn grid_torus_unchecked(p: usize, q: usize) -> Result<Map, GenError> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum Key {
        Across(usize, usize),
        Along(usize, usize),
        Diagonal(usize, usize),
    }
    let id = |i: usize, j: usize| (i % p) * q + (j % q);
    let mut faces = Vec::with_capacity(2 * p * q);
    for i in 0..p {
        for j in 0..q {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push(vec![
                (a, Key::Across(i, j)),
                (b, Key::Along((i + 1) % p, j)),
                (c, Key::Diagonal(i, j)),
            ]);
            faces.push(vec![
                (a, Key::Diagonal(i, j)),
                (c, Key::Across(i, (j + 1) % q)),
                (d, Key::Along(i, j)),
            ]);
        }
    }
    Ok(Map::from_glued_faces(p * q, &faces)?)
}

pub fn grid_torus(p: usize, q: usize) -> Result<Map, GenError> {
    if p < 3 || q < 3 {
        return Err(GenError::TooSmall { p, q });
    }
    grid_torus_unchecked(p, q)
}

const TETRAHEDRON: [[VertexId; 3]; 4] = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];

fn stacked_faces(n: usize, rng: &mut ChaCha8Rng) -> Vec<[VertexId; 3]> {
    let mut faces = TETRAHEDRON.to_vec();
    for x in 4..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[fi];
        faces[fi] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    faces
}

pub fn planar_stacked(n: usize, seed: u64) -> Result<Map, GenError> {
    if n < 4 {
        return Err(GenError::TooFewVertices(n));
    }
    let faces = stacked_faces(n, &mut rng(seed));
    Ok(Map::from_triangles(n, &faces)?)
}

/// Stacked triangulation followed by `10 * E` attempted diagonal flips; flips
/// that would create a loop or a multiple edge are rejected.
pub fn planar_random(n: usize, seed: u64) -> Result<Map, GenError> {
    if n < 4 {
        return Err(GenError::TooFewVertices(n));
    }
    let mut rng = rng(seed);
    let mut faces = stacked_faces(n, &mut rng);
    let mut side_face: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut adjacent: HashSet<(VertexId, VertexId)> = HashSet::new();
    for (fi, t) in faces.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            side_face.insert((a, b), fi);
            adjacent.insert((a.min(b), a.max(b)));
        }
    }
    let attempts = 10 * (3 * n - 6);
    for _ in 0..attempts {
        let fi = rng.gen_range(0..faces.len());
        let k = rng.gen_range(0..3);
        let t = faces[fi];
        let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
        let gi = side_face[&(b, a)];
        let g = faces[gi];
        let d = g.iter().copied().find(|&v| v != a && v != b).unwrap();
        if c == d || adjacent.contains(&(c.min(d), c.max(d))) {
            continue;
        }
        for tri in [t, g] {
            for i in 0..3 {
                side_face.remove(&(tri[i], tri[(i + 1) % 3]));
            }
        }
        adjacent.remove(&(a.min(b), a.max(b)));
        adjacent.insert((c.min(d), c.max(d)));
        faces[fi] = [a, d, c];
        faces[gi] = [d, b, c];
        for (idx, tri) in [(fi, faces[fi]), (gi, faces[gi])] {
            for i in 0..3 {
                side_face.insert((tri[i], tri[(i + 1) % 3]), idx);
            }
        }
    }
    Ok(Map::from_triangles(n, &faces)?)
}

/// Removes two vertex-disjoint faces and joins their boundaries with an
/// antiprism tube of six triangles, raising the genus by one.
pub fn add_handle<R: Rng>(map: &Map, rng: &mut R) -> Result<Map, GenError> {
    let faces = map.triangles().ok_or(GenError::NoDisjointFaces)?;
    let mut adjacent: HashSet<(VertexId, VertexId)> = HashSet::new();
    for t in &faces {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            adjacent.insert((a.min(b), a.max(b)));
        }
    }
    let tube = |fa: [VertexId; 3], fb: [VertexId; 3]| -> Option<Vec<[VertexId; 3]>> {
        if fa.iter().any(|v| fb.contains(v)) {
            return None;
        }
        let c = [fb[0], fb[2], fb[1]];
        let mut out = Vec::with_capacity(6);
        for i in 0..3 {
            let (a0, a1) = (fa[i], fa[(i + 1) % 3]);
            let (c0, c1) = (c[i], c[(i + 1) % 3]);
            for (x, y) in [(a1, c0), (a0, c0)] {
                if adjacent.contains(&(x.min(y), x.max(y))) {
                    return None;
                }
            }
            out.push([a0, a1, c0]);
            out.push([c1, c0, a1]);
        }
        Some(out)
    };
    let f = faces.len();
    let mut chosen = None;
    for _ in 0..1000 {
        let (i, j) = (rng.gen_range(0..f), rng.gen_range(0..f));
        if i != j {
            if let Some(t) = tube(faces[i], faces[j]) {
                chosen = Some((i, j, t));
                break;
            }
        }
    }
    if chosen.is_none() {
        let mut order: Vec<usize> = (0..f).collect();
        order.shuffle(rng);
        'outer: for &i in &order {
            for &j in &order {
                if i != j {
                    if let Some(t) = tube(faces[i], faces[j]) {
                        chosen = Some((i, j, t));
                        break 'outer;
                    }
                }
            }
        }
    }
    let (i, j, tube_faces) = chosen.ok_or(GenError::NoDisjointFaces)?;
    let mut out: Vec<[VertexId; 3]> = faces
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, t)| *t)
        .collect();
    out.extend(tube_faces);
    Ok(Map::from_triangles(map.vertex_count(), &out)?)
}

pub fn handle_sum(base: &Map, handles: usize, seed: u64) -> Result<Map, GenError> {
    let mut rng = rng(seed);
    let mut map = base.clone();
    for _ in 0..handles {
        map = add_handle(&map, &mut rng)?;
    }
    Ok(map)
}

/// Edge-midpoint subdivision, applied `rounds` times. Midpoint of edge `e` gets
/// vertex id `n + e`.
pub fn refine(map: &Map, rounds: usize) -> Map {
    let mut current = map.clone();
    for _ in 0..rounds {
        let n = current.vertex_count();
        let mut faces = Vec::with_capacity(4 * current.face_count());
        for f in 0..current.face_count() {
            let w = current.facial_walk(current.face_brin(f));
            assert_eq!(w.len(), 3, "refine expects a triangulation");
            let [a, b, c] = [current.origin(w[0]), current.origin(w[1]), current.origin(w[2])];
            let mid = |k: usize| n + current.follower(w[k]).edge();
            let (ab, bc, ca) = (mid(0), mid(1), mid(2));
            faces.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        current = Map::from_triangles(n + current.edge_count(), &faces)
            .expect("subdivision of a valid map is valid");
    }
    current
}
