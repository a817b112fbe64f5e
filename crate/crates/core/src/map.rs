//! Orientable combinatorial maps in half-edge ("brin") form.
//!
//! The two brins of edge `e` are `2e` and `2e + 1`, so `opposite` is `b ^ 1`.
//! `follower(b)` is the next brin in clockwise order around `origin(b)`; the
//! face of `b` is the face lying in the corner `(b, follower(b))`, and facial
//! walks are the cycles of `opposite ∘ follower` (counterclockwise, face on the
//! left).

use std::collections::HashMap;
use std::fmt;

use crate::error::MapError;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// A half-edge of a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrinId(pub u32);

impl BrinId {
    #[inline]
    pub fn new(index: usize) -> Self {
        BrinId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn opposite(self) -> BrinId {
        BrinId(self.0 ^ 1)
    }

    #[inline]
    pub fn edge(self) -> EdgeId {
        (self.0 >> 1) as usize
    }

    /// The brin of `edge` with the given parity.
    #[inline]
    pub fn of_edge(edge: EdgeId, side: usize) -> BrinId {
        BrinId((2 * edge + side) as u32)
    }
}

impl fmt::Display for BrinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An immutable, connected, orientable combinatorial map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map {
    origin: Vec<u32>,
    follower: Vec<u32>,
    predecessor: Vec<u32>,
    face: Vec<u32>,
    vertex_brin: Vec<u32>,
    face_brin: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Loop,
    MultiEdge,
    NonTriangleFace,
    Disconnected,
    NonOrientable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witnesses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationCheck {
    pub is_triangulation: bool,
    pub violations: Vec<Violation>,
}

impl Map {
    /// Builds a map from a rotation system. `origin[b]` is the vertex of brin `b`
    /// and `follower` must be a permutation preserving origins.
    pub fn from_rotation(
        vertex_count: usize,
        origin: Vec<u32>,
        follower: Vec<u32>,
    ) -> Result<Map, MapError> {
        let nb = origin.len();
        if nb % 2 != 0 || follower.len() != nb {
            return Err(MapError::Corrupt("brin arrays have inconsistent lengths".into()));
        }
        let mut predecessor = vec![u32::MAX; nb];
        for (b, &f) in follower.iter().enumerate() {
            let f = f as usize;
            if f >= nb || predecessor[f] != u32::MAX {
                return Err(MapError::Corrupt("follower is not a permutation".into()));
            }
            if origin[f] != origin[b] {
                return Err(MapError::Corrupt(format!("follower of brin {b} changes origin")));
            }
            predecessor[f] = b as u32;
        }
        let mut vertex_brin = vec![u32::MAX; vertex_count];
        for (b, &v) in origin.iter().enumerate() {
            let v = v as usize;
            if v >= vertex_count {
                return Err(MapError::VertexOutOfRange(v));
            }
            if vertex_brin[v] == u32::MAX {
                vertex_brin[v] = b as u32;
            }
        }
        if let Some(v) = vertex_brin.iter().position(|&b| b == u32::MAX) {
            return Err(MapError::IsolatedVertex(v));
        }
        // Each vertex must be a single follower orbit.
        let mut seen = vec![false; nb];
        for &start in &vertex_brin {
            let mut b = start as usize;
            loop {
                seen[b] = true;
                b = follower[b] as usize;
                if b == start as usize {
                    break;
                }
            }
        }
        if let Some(b) = seen.iter().position(|&s| !s) {
            return Err(MapError::Corrupt(format!(
                "vertex {} has more than one rotation cycle",
                origin[b]
            )));
        }

        let mut face = vec![u32::MAX; nb];
        let mut face_brin = Vec::new();
        for start in 0..nb {
            if face[start] != u32::MAX {
                continue;
            }
            let id = face_brin.len() as u32;
            face_brin.push(start as u32);
            let mut b = start;
            loop {
                face[b] = id;
                b = (follower[b] ^ 1) as usize;
                if b == start {
                    break;
                }
            }
        }

        let map = Map { origin, follower, predecessor, face, vertex_brin, face_brin };
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        map.genus()?;
        Ok(map)
    }

    /// Builds a map from polygons whose sides carry explicit gluing keys.
    ///
    /// Each face is a cyclic list of `(vertex, key)`: the side running from that
    /// vertex to the next one belongs to the edge named `key`. Every key must be
    /// used by exactly two sides running in opposite directions.
    pub fn from_glued_faces<K: Eq + std::hash::Hash + Clone>(
        vertex_count: usize,
        faces: &[Vec<(VertexId, K)>],
    ) -> Result<Map, MapError> {
        // side id -> (tail, head)
        let mut sides: Vec<(VertexId, VertexId)> = Vec::new();
        let mut side_of_face: Vec<Vec<usize>> = Vec::with_capacity(faces.len());
        let mut key_sides: HashMap<K, Vec<usize>> = HashMap::new();
        let mut key_order: Vec<K> = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 2 {
                return Err(MapError::DegenerateFace(fi));
            }
            let mut ids = Vec::with_capacity(face.len());
            for (i, (v, key)) in face.iter().enumerate() {
                let w = face[(i + 1) % face.len()].0;
                if *v >= vertex_count || w >= vertex_count {
                    return Err(MapError::VertexOutOfRange((*v).max(w)));
                }
                let sid = sides.len();
                sides.push((*v, w));
                ids.push(sid);
                let entry = key_sides.entry(key.clone()).or_insert_with(|| {
                    key_order.push(key.clone());
                    Vec::new()
                });
                entry.push(sid);
            }
            side_of_face.push(ids);
        }

        // Edge numbering follows first appearance of the key.
        let mut brin_of_side = vec![u32::MAX; sides.len()];
        let mut edge_count = 0usize;
        for key in &key_order {
            let list = &key_sides[key];
            if list.len() != 2 {
                let (a, b) = sides[list[0]];
                return Err(MapError::OpenSurface { u: a, v: b, incidences: list.len() });
            }
            let (s0, s1) = (list[0], list[1]);
            let (a0, b0) = sides[s0];
            let (a1, b1) = sides[s1];
            if !(a0 == b1 && b0 == a1) {
                return Err(MapError::NonOrientable { u: a0, v: b0 });
            }
            // brin 2e originates at the tail of the first side.
            brin_of_side[s0] = (2 * edge_count) as u32;
            brin_of_side[s1] = (2 * edge_count + 1) as u32;
            edge_count += 1;
        }

        // A side u->v of face (.., w, u, v, ..) gives follower(brin u->w) = brin u->v,
        // where brin u->v is the brin at u of the edge of that side.
        let nb = 2 * edge_count;
        let mut origin = vec![0u32; nb];
        let mut follower = vec![u32::MAX; nb];
        for ids in &side_of_face {
            let k = ids.len();
            for i in 0..k {
                let side = ids[i];
                let prev_side = ids[(i + k - 1) % k];
                let (u, _) = sides[side];
                let b_out = brin_of_side[side];
                // The previous side runs w -> u; its brin at u is the opposite one.
                let b_in = brin_of_side[prev_side] ^ 1;
                origin[b_out as usize] = u as u32;
                if follower[b_in as usize] != u32::MAX {
                    return Err(MapError::NonOrientable { u, v: sides[side].1 });
                }
                follower[b_in as usize] = b_out;
            }
        }
        if follower.contains(&u32::MAX) {
            return Err(MapError::Corrupt("incomplete rotation".into()));
        }
        Map::from_rotation(vertex_count, origin, follower)
    }

    /// Builds a map from oriented triangles listed counterclockwise.
    pub fn from_triangles(vertex_count: usize, faces: &[[VertexId; 3]]) -> Result<Map, MapError> {
        let glued: Vec<Vec<(VertexId, (VertexId, VertexId))>> = faces
            .iter()
            .map(|t| {
                (0..3)
                    .map(|i| {
                        let (a, b) = (t[i], t[(i + 1) % 3]);
                        (a, (a.min(b), a.max(b)))
                    })
                    .collect()
            })
            .collect();
        Map::from_glued_faces(vertex_count, &glued)
    }

    #[inline]
    pub fn brin_count(&self) -> usize {
        self.origin.len()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_brin.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    #[inline]
    pub fn face_count(&self) -> usize {
        self.face_brin.len()
    }

    #[inline]
    pub fn origin(&self, b: BrinId) -> VertexId {
        self.origin[b.index()] as usize
    }

    /// Next brin clockwise around the origin.
    #[inline]
    pub fn follower(&self, b: BrinId) -> BrinId {
        BrinId(self.follower[b.index()])
    }

    /// Next brin counterclockwise around the origin.
    #[inline]
    pub fn predecessor(&self, b: BrinId) -> BrinId {
        BrinId(self.predecessor[b.index()])
    }

    /// Face lying in the corner `(b, follower(b))`.
    #[inline]
    pub fn face(&self, b: BrinId) -> FaceId {
        self.face[b.index()] as usize
    }

    /// Next brin along the facial walk of `face(b)`.
    #[inline]
    pub fn walk_next(&self, b: BrinId) -> BrinId {
        self.follower(b).opposite()
    }

    #[inline]
    pub fn walk_prev(&self, b: BrinId) -> BrinId {
        self.predecessor(b.opposite())
    }

    #[inline]
    pub fn target(&self, b: BrinId) -> VertexId {
        self.origin(b.opposite())
    }

    pub fn vertex_brin(&self, v: VertexId) -> BrinId {
        BrinId(self.vertex_brin[v])
    }

    pub fn face_brin(&self, f: FaceId) -> BrinId {
        BrinId(self.face_brin[f])
    }

    pub fn brins(&self) -> impl Iterator<Item = BrinId> + '_ {
        (0..self.brin_count()).map(BrinId::new)
    }

    /// Brins around `v` in clockwise order, starting at `vertex_brin(v)`.
    pub fn rotation(&self, v: VertexId) -> Vec<BrinId> {
        let start = self.vertex_brin(v);
        let mut out = vec![start];
        let mut b = self.follower(start);
        while b != start {
            out.push(b);
            b = self.follower(b);
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    /// The cyclic brin sequence of the face of `b`, starting at `b`.
    pub fn facial_walk(&self, b: BrinId) -> Vec<BrinId> {
        let mut out = vec![b];
        let mut c = self.walk_next(b);
        while c != b {
            out.push(c);
            c = self.walk_next(c);
        }
        out
    }

    pub fn face_degree(&self, f: FaceId) -> usize {
        self.facial_walk(self.face_brin(f)).len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn genus(&self) -> Result<usize, MapError> {
        let chi = self.euler_characteristic();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(MapError::OddEuler(chi));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for b in self.rotation(v) {
                let w = self.target(b);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// The dual map. Brin ids are shared: dual brin `h` belongs to the dual of
    /// `edge(h)` and originates at the dual vertex `face(h)`.
    ///
    /// Around a dual vertex, clockwise order is the reverse of the facial walk, so
    /// the dual of the dual is this map relabeled by `opposite`.
    pub fn dual(&self) -> Map {
        let nb = self.brin_count();
        let origin: Vec<u32> = self.face.clone();
        let follower: Vec<u32> = (0..nb)
            .map(|h| self.predecessor[h ^ 1])
            .collect();
        Map::from_rotation(self.face_count(), origin, follower)
            .expect("dual of a valid map is valid")
    }

    /// Triangles as vertex triples in facial-walk order, indexed by face id.
    pub fn triangles(&self) -> Option<Vec<[VertexId; 3]>> {
        (0..self.face_count())
            .map(|f| {
                let w = self.facial_walk(self.face_brin(f));
                (w.len() == 3).then(|| [self.origin(w[0]), self.origin(w[1]), self.origin(w[2])])
            })
            .collect()
    }

    /// Brin of the edge `u -> v`, if any. Linear in `deg(u)`.
    pub fn find_brin(&self, u: VertexId, v: VertexId) -> Option<BrinId> {
        self.rotation(u).into_iter().find(|&b| self.target(b) == v)
    }

    /// Checks that the map is a simple triangulation. Witness lists are sorted,
    /// and violations appear in a fixed kind order.
    pub fn validate_triangulation(&self) -> TriangulationCheck {
        let mut violations = Vec::new();
        let mut loops: Vec<usize> = (0..self.edge_count())
            .filter(|&e| {
                let b = BrinId::of_edge(e, 0);
                self.origin(b) == self.target(b)
            })
            .collect();
        loops.sort_unstable();
        if !loops.is_empty() {
            violations.push(Violation { kind: ViolationKind::Loop, witnesses: loops });
        }

        let mut first: HashMap<(usize, usize), EdgeId> = HashMap::new();
        let mut multi = Vec::new();
        for e in 0..self.edge_count() {
            let b = BrinId::of_edge(e, 0);
            let (u, v) = (self.origin(b), self.target(b));
            if u == v {
                continue;
            }
            match first.entry((u.min(v), u.max(v))) {
                std::collections::hash_map::Entry::Occupied(_) => multi.push(e),
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(e);
                }
            }
        }
        multi.sort_unstable();
        if !multi.is_empty() {
            violations.push(Violation { kind: ViolationKind::MultiEdge, witnesses: multi });
        }

        let bad_faces: Vec<usize> =
            (0..self.face_count()).filter(|&f| self.face_degree(f) != 3).collect();
        if !bad_faces.is_empty() {
            violations
                .push(Violation { kind: ViolationKind::NonTriangleFace, witnesses: bad_faces });
        }
        TriangulationCheck { is_triangulation: violations.is_empty(), violations }
    }
}

/// Checks a raw face list without building a map; reports orientation and
/// connectivity problems that `Map` construction would reject.
pub fn check_face_list(vertex_count: usize, faces: &[[VertexId; 3]]) -> TriangulationCheck {
    let mut violations = Vec::new();
    let mut directed: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut loops = Vec::new();
    let mut bad = Vec::new();
    for (fi, t) in faces.iter().enumerate() {
        if t.iter().any(|&v| v >= vertex_count) {
            bad.push(fi);
            continue;
        }
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            if a == b {
                loops.push(fi);
            }
            directed.entry((a, b)).or_default().push(fi);
        }
    }
    loops.dedup();
    if !loops.is_empty() {
        violations.push(Violation { kind: ViolationKind::Loop, witnesses: loops });
    }
    let mut non_orientable: Vec<usize> = directed
        .iter()
        .filter(|(_, fs)| fs.len() > 1)
        .flat_map(|(_, fs)| fs.iter().copied())
        .collect();
    non_orientable.sort_unstable();
    non_orientable.dedup();
    if !non_orientable.is_empty() {
        violations.push(Violation { kind: ViolationKind::NonOrientable, witnesses: non_orientable });
    }
    let mut open: Vec<usize> = directed
        .keys()
        .filter(|(a, b)| !directed.contains_key(&(*b, *a)))
        .flat_map(|k| directed[k].iter().copied())
        .collect();
    open.sort_unstable();
    open.dedup();
    bad.extend(open);
    bad.sort_unstable();
    bad.dedup();
    if !bad.is_empty() {
        violations.push(Violation { kind: ViolationKind::NonTriangleFace, witnesses: bad });
    }
    // connectivity over vertices that appear in faces
    let mut parent: Vec<usize> = (0..vertex_count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for t in faces.iter().filter(|t| t.iter().all(|&v| v < vertex_count)) {
        for i in 0..3 {
            let (a, b) = (find(&mut parent, t[i]), find(&mut parent, t[(i + 1) % 3]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut stray: Vec<usize> =
        (0..vertex_count).filter(|&v| find(&mut parent, v) != find(&mut parent, 0)).collect();
    stray.sort_unstable();
    if vertex_count > 0 && !stray.is_empty() {
        violations.push(Violation { kind: ViolationKind::Disconnected, witnesses: stray });
    }
    TriangulationCheck { is_triangulation: violations.is_empty(), violations }
}
