//! The conquered region C of a traversal and its boundary corners.
//!
//! A boundary corner at a vertex `v` of C is a pair `(start, end)` of C-brins at
//! `v` with `end` the next C-brin clockwise after `start` and the face after
//! `start` outside C. The brins strictly between them are its exterior brins.
//! Corners are stored in an append-only arena; dead corners stay in place.

use std::fmt::Write as _;

use crate::map::{BrinId, EdgeId, FaceId, Map, VertexId};
use crate::wood::Root;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: VertexId,
    pub start: BrinId,
    pub end: BrinId,
    pub chords: u32,
    pub alive: bool,
    pub walk: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BrinTag {
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordClass {
    NotChordal,
    Separating,
    Split,
    Merge,
}

#[derive(Debug, Clone)]
pub struct Subcomplex<'a> {
    pub map: &'a Map,
    pub root: Root,
    pub vertex_in: Vec<bool>,
    pub edge_in: Vec<bool>,
    pub face_in: Vec<bool>,
    pub special: Vec<bool>,
    pub corners: Vec<Corner>,
    pub(crate) corner_at_start: Vec<u32>,
    pub(crate) corner_at_end: Vec<u32>,
    pub(crate) corner_of_ext: Vec<u32>,
    pub vertices_in: usize,
    pub edges_in: usize,
    pub faces_in: usize,
    pub walk_count: usize,
    pub splits: usize,
    pub merges: usize,
}

impl<'a> Subcomplex<'a> {
    /// C = the root face with its three edges and vertices.
    pub fn init_root(map: &'a Map, root_face: FaceId) -> Subcomplex<'a> {
        let root = Root::new(map, root_face);
        let nb = map.brin_count();
        let mut sc = Subcomplex {
            map,
            root,
            vertex_in: vec![false; map.vertex_count()],
            edge_in: vec![false; map.edge_count()],
            face_in: vec![false; map.face_count()],
            special: vec![false; map.edge_count()],
            corners: Vec::new(),
            corner_at_start: vec![NONE; nb],
            corner_at_end: vec![NONE; nb],
            corner_of_ext: vec![NONE; nb],
            vertices_in: 0,
            edges_in: 0,
            faces_in: 0,
            walk_count: 1,
            splits: 0,
            merges: 0,
        };
        sc.add_face(root_face);
        for b in map.facial_walk(map.face_brin(root_face)) {
            let v = map.origin(b);
            // the corner outside the root face at v starts after the root corner
            let start = map.follower(b);
            let end = b;
            sc.new_corner(v, start, end, 0);
        }
        sc
    }

    pub fn is_complete(&self) -> bool {
        self.faces_in == self.map.face_count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        // a doubled edge adds one more edge and its 2-gon, which cancel
        self.vertices_in as i64 - self.edges_in as i64 + self.faces_in as i64
    }

    pub(crate) fn add_face(&mut self, f: FaceId) -> Vec<EdgeId> {
        let mut added = Vec::new();
        if !self.face_in[f] {
            self.face_in[f] = true;
            self.faces_in += 1;
        }
        for b in self.map.facial_walk(self.map.face_brin(f)) {
            let v = self.map.origin(b);
            if !self.vertex_in[v] {
                self.vertex_in[v] = true;
                self.vertices_in += 1;
            }
            let e = b.edge();
            if !self.edge_in[e] {
                self.edge_in[e] = true;
                self.edges_in += 1;
                added.push(e);
            }
        }
        added
    }

    pub(crate) fn new_corner(&mut self, v: VertexId, start: BrinId, end: BrinId, walk: u32) -> usize {
        let id = self.corners.len();
        self.corners.push(Corner { vertex: v, start, end, chords: 0, alive: true, walk });
        self.corner_at_start[start.index()] = id as u32;
        self.corner_at_end[end.index()] = id as u32;
        for x in self.exterior(id) {
            self.corner_of_ext[x.index()] = id as u32;
        }
        self.corners[id].chords = self.count_chords(id);
        id
    }

    pub(crate) fn kill_corner(&mut self, c: usize) {
        let Corner { start, end, .. } = self.corners[c];
        for x in self.exterior(c) {
            if self.corner_of_ext[x.index()] == c as u32 {
                self.corner_of_ext[x.index()] = NONE;
            }
        }
        if self.corner_at_start[start.index()] == c as u32 {
            self.corner_at_start[start.index()] = NONE;
        }
        if self.corner_at_end[end.index()] == c as u32 {
            self.corner_at_end[end.index()] = NONE;
        }
        self.corners[c].alive = false;
    }

    /// Moves the end of a corner counterclockwise onto a brin that just entered C.
    pub(crate) fn set_end(&mut self, c: usize, end: BrinId) {
        let old = self.corners[c].end;
        if self.corner_at_end[old.index()] == c as u32 {
            self.corner_at_end[old.index()] = NONE;
        }
        self.corner_at_end[end.index()] = c as u32;
        self.corner_of_ext[end.index()] = NONE;
        self.corners[c].end = end;
    }

    /// Moves the start of a corner clockwise onto a brin that just entered C.
    pub(crate) fn set_start(&mut self, c: usize, start: BrinId) {
        let old = self.corners[c].start;
        if self.corner_at_start[old.index()] == c as u32 {
            self.corner_at_start[old.index()] = NONE;
        }
        self.corner_at_start[start.index()] = c as u32;
        self.corner_of_ext[start.index()] = NONE;
        self.corners[c].start = start;
    }

    /// Exterior brins of a corner, clockwise.
    pub fn exterior(&self, c: usize) -> Vec<BrinId> {
        let Corner { start, end, .. } = self.corners[c];
        let mut out = Vec::new();
        let mut y = self.map.follower(start);
        while y != end {
            out.push(y);
            y = self.map.follower(y);
        }
        out
    }

    /// Faces outside C covered by a corner, clockwise.
    pub fn corner_faces(&self, c: usize) -> Vec<FaceId> {
        let mut faces = vec![self.map.face(self.corners[c].start)];
        faces.extend(self.exterior(c).into_iter().map(|x| self.map.face(x)));
        faces
    }

    pub fn is_chordal(&self, e: EdgeId) -> bool {
        let b = BrinId::of_edge(e, 0);
        !self.edge_in[e]
            && self.vertex_in[self.map.origin(b)]
            && self.vertex_in[self.map.target(b)]
    }

    pub(crate) fn count_chords(&self, c: usize) -> u32 {
        self.exterior(c).into_iter().filter(|x| self.is_chordal(x.edge())).count() as u32
    }

    pub fn corner_of_exterior(&self, b: BrinId) -> Option<usize> {
        let c = self.corner_of_ext[b.index()];
        (c != NONE).then_some(c as usize)
    }

    pub fn corner_starting_at(&self, b: BrinId) -> Option<usize> {
        let c = self.corner_at_start[b.index()];
        (c != NONE).then_some(c as usize)
    }

    pub fn corner_ending_at(&self, b: BrinId) -> Option<usize> {
        let c = self.corner_at_end[b.index()];
        (c != NONE).then_some(c as usize)
    }

    /// Next corner along the boundary walk.
    pub fn next_corner(&self, c: usize) -> Option<usize> {
        self.corner_starting_at(self.corners[c].end.opposite())
    }

    /// The corner at `v0` that contains the non-root face at `{v0, v1}`.
    pub fn base_corner_v0(&self) -> Option<usize> {
        self.corner_ending_at(self.root.base)
    }

    /// Corners at `v0` and `v1` adjacent to `{v0, v1}` may not be conquered.
    pub fn is_excluded(&self, c: usize) -> bool {
        let Corner { vertex, start, end, .. } = self.corners[c];
        (vertex == self.root.v[0] && end == self.root.base)
            || (vertex == self.root.v[1] && start == self.root.base.opposite())
    }

    pub fn is_free(&self, c: usize) -> bool {
        self.corners[c].alive && self.corners[c].chords == 0 && !self.is_excluded(c)
    }

    pub fn alive_corners(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.corners.len()).filter(move |&c| self.corners[c].alive)
    }

    /// Relabels boundary walks; the walk through `{v0, v1}` gets id 0.
    pub fn recompute_walks(&mut self) {
        for c in 0..self.corners.len() {
            self.corners[c].walk = NONE;
        }
        let mut order: Vec<usize> = self.base_corner_v0().into_iter().collect();
        order.extend(self.alive_corners());
        let mut next_id = 0u32;
        for c0 in order {
            if !self.corners[c0].alive || self.corners[c0].walk != NONE {
                continue;
            }
            let mut c = c0;
            loop {
                self.corners[c].walk = next_id;
                match self.next_corner(c) {
                    Some(n) if self.corners[n].walk == NONE => c = n,
                    _ => break,
                }
            }
            next_id += 1;
        }
        self.walk_count = next_id as usize;
    }

    /// Corners of the walk through `c`, in walk order starting at `c`.
    pub fn walk_from(&self, c: usize) -> Vec<usize> {
        let mut out = vec![c];
        let mut x = c;
        while let Some(n) = self.next_corner(x) {
            if n == c || out.len() > self.corners.len() {
                break;
            }
            out.push(n);
            x = n;
        }
        out
    }

    /// Boundary brins interleaved with the exterior brins of their corner.
    pub fn boundary_complete_list(&self, walk: u32) -> Vec<(BrinId, BrinTag)> {
        let Some(first) = self.alive_corners().find(|&c| self.corners[c].walk == walk) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for c in self.walk_from(first) {
            out.push((self.corners[c].start, BrinTag::Boundary));
            out.extend(self.exterior(c).into_iter().map(|x| (x, BrinTag::Exterior)));
        }
        out
    }

    /// Classifies an edge outside C. `bridges` flags the bridges of the complementary dual.
    pub fn classify_chord(&self, e: EdgeId, bridges: &[bool]) -> ChordClass {
        if !self.is_chordal(e) {
            return ChordClass::NotChordal;
        }
        let (Some(ca), Some(cb)) = (
            self.corner_of_exterior(BrinId::of_edge(e, 0)),
            self.corner_of_exterior(BrinId::of_edge(e, 1)),
        ) else {
            return ChordClass::NotChordal;
        };
        if self.corners[ca].walk != self.corners[cb].walk {
            ChordClass::Merge
        } else if bridges[e] {
            ChordClass::Separating
        } else {
            ChordClass::Split
        }
    }

    /// Edges of the complementary dual D as `(edge id, face, face)`.
    pub fn dual_edges(&self) -> Vec<(EdgeId, FaceId, FaceId)> {
        (0..self.map.edge_count())
            .filter(|&e| !self.edge_in[e])
            .map(|e| (e, self.map.face(BrinId::of_edge(e, 0)), self.map.face(BrinId::of_edge(e, 1))))
            .collect()
    }

    pub fn dual_is_connected(&self) -> bool {
        let nf = self.map.face_count();
        let mut uf: Vec<usize> = (0..nf).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (_, a, b) in self.dual_edges() {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
        let mut roots = (0..nf).filter(|&f| !self.face_in[f]).map(|f| find(&mut uf, f));
        match roots.next() {
            None => true,
            Some(r) => roots.all(|x| x == r),
        }
    }

    /// Rebuilds all corners from the membership flags and compares them with
    /// the incremental structure.
    pub fn check_corners(&self) -> Result<(), String> {
        let mut expected: Vec<(BrinId, BrinId, u32)> = Vec::new();
        for v in (0..self.map.vertex_count()).filter(|&v| self.vertex_in[v]) {
            let rot = self.map.rotation(v);
            let in_c: Vec<BrinId> = rot.iter().copied().filter(|b| self.edge_in[b.edge()]).collect();
            for (i, &s) in in_c.iter().enumerate() {
                if self.face_in[self.map.face(s)] {
                    continue;
                }
                let t = in_c[(i + 1) % in_c.len()];
                let mut chords = 0;
                let mut y = self.map.follower(s);
                while y != t {
                    chords += self.is_chordal(y.edge()) as u32;
                    y = self.map.follower(y);
                }
                expected.push((s, t, chords));
            }
        }
        let mut actual: Vec<(BrinId, BrinId, u32)> = self
            .alive_corners()
            .map(|c| (self.corners[c].start, self.corners[c].end, self.corners[c].chords))
            .collect();
        expected.sort();
        actual.sort();
        if expected != actual {
            return Err(format!(
                "corner structure differs from recomputation ({} expected, {} stored)",
                expected.len(),
                actual.len()
            ));
        }
        for c in self.alive_corners() {
            if self.corner_at_start[self.corners[c].start.index()] != c as u32
                || self.corner_at_end[self.corners[c].end.index()] != c as u32
            {
                return Err(format!("corner {c} index out of sync"));
            }
            for x in self.exterior(c) {
                if self.corner_of_ext[x.index()] != c as u32 {
                    return Err(format!("exterior brin {x} not linked to corner {c}"));
                }
            }
        }
        Ok(())
    }

    /// C and D as a DOT graph: conquered parts solid, the rest dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph C {\n");
        for v in 0..self.map.vertex_count() {
            let style = if self.vertex_in[v] { "filled" } else { "dashed" };
            let _ = writeln!(s, "  {v} [style={style}];");
        }
        for e in 0..self.map.edge_count() {
            let b = BrinId::of_edge(e, 0);
            let style = if self.special[e] {
                "bold"
            } else if self.edge_in[e] {
                "solid"
            } else if self.is_chordal(e) {
                "dotted"
            } else {
                "dashed"
            };
            let _ = writeln!(s, "  {} -- {} [style={style}];", self.map.origin(b), self.map.target(b));
        }
        s.push_str("}\n");
        s
    }
}

/// Boundary lists of an arbitrary closed sub-collection of a map, computed from
/// scratch: one cyclic list per boundary walk.
pub fn boundary_lists(
    map: &Map,
    vertex_in: &dyn Fn(VertexId) -> bool,
    edge_in: &dyn Fn(EdgeId) -> bool,
    face_in: &dyn Fn(BrinId) -> bool,
) -> Vec<Vec<(BrinId, BrinTag)>> {
    let nb = map.brin_count();
    let mut corner_end = vec![NONE; nb];
    let mut starts = Vec::new();
    for v in (0..map.vertex_count()).filter(|&v| vertex_in(v)) {
        let in_c: Vec<BrinId> = map.rotation(v).into_iter().filter(|b| edge_in(b.edge())).collect();
        for (i, &s) in in_c.iter().enumerate() {
            if !face_in(s) {
                corner_end[s.index()] = in_c[(i + 1) % in_c.len()].0;
                starts.push(s);
            }
        }
    }
    let mut seen = vec![false; nb];
    let mut lists = Vec::new();
    for s0 in starts {
        if seen[s0.index()] {
            continue;
        }
        let mut list = Vec::new();
        let mut s = s0;
        while !seen[s.index()] {
            seen[s.index()] = true;
            list.push((s, BrinTag::Boundary));
            let end = BrinId(corner_end[s.index()]);
            let mut y = map.follower(s);
            while y != end {
                list.push((y, BrinTag::Exterior));
                y = map.follower(y);
            }
            s = end.opposite();
            if corner_end[s.index()] == NONE {
                break;
            }
        }
        lists.push(list);
    }
    lists
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_torus;

    fn tetra() -> Map {
        Map::from_triangles(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    #[test]
    fn init_root_shape() {
        let m = tetra();
        for f in 0..4 {
            let sc = Subcomplex::init_root(&m, f);
            assert_eq!((sc.vertices_in, sc.edges_in, sc.faces_in), (3, 3, 1));
            assert_eq!(sc.euler_characteristic(), 1);
            let list = sc.boundary_complete_list(0);
            assert_eq!(list.len(), 6);
            for (i, (_, tag)) in list.iter().enumerate() {
                assert_eq!(*tag, if i % 2 == 0 { BrinTag::Boundary } else { BrinTag::Exterior });
            }
            sc.check_corners().unwrap();
        }
    }

    #[test]
    fn torus_init_has_one_walk() {
        let m = grid_torus(3, 3).unwrap();
        let mut sc = Subcomplex::init_root(&m, 0);
        sc.recompute_walks();
        assert_eq!(sc.walk_count, 1);
        assert_eq!(sc.alive_corners().count(), 3);
        sc.check_corners().unwrap();
    }

    #[test]
    fn tetra_init_has_no_chordal_edges() {
        let m = tetra();
        let sc = Subcomplex::init_root(&m, 0);
        let bridges = vec![false; m.edge_count()];
        for e in (0..m.edge_count()).filter(|&e| !sc.edge_in[e]) {
            assert_eq!(sc.classify_chord(e, &bridges), ChordClass::NotChordal);
        }
    }

    #[test]
    fn v2_corner_is_the_only_free_one_at_start() {
        let m = grid_torus(4, 3).unwrap();
        let sc = Subcomplex::init_root(&m, 5);
        let free: Vec<usize> = sc.alive_corners().filter(|&c| sc.is_free(c)).collect();
        assert_eq!(free.len(), 1);
        assert_eq!(sc.corners[free[0]].vertex, sc.root.v[2]);
    }
}
