//! Greedy traversal computing a g-Schnyder wood.
//!
//! Conquests of free corners on the walk through `{v0, v1}` are served first
//! (FIFO); when none is left, a merge edge is doubled, else a split edge. Both
//! are picked with the smallest edge id.

use std::collections::VecDeque;
use std::fmt;

use crate::error::TraversalError;
use crate::map::{BrinId, EdgeId, FaceId, Map, VertexId};
use crate::subcomplex::{Corner, Subcomplex};
use crate::wood::{subgraph_stats, Color, EdgeLabel, EdgeRole, GSchnyderWood};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraversalOptions {
    /// Recheck the mid-traversal invariants after every operation (slow).
    pub check_invariants: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Conquest { vertex: VertexId, start: BrinId, faces: usize },
    Merge(EdgeId),
    Split(EdgeId),
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Conquest { vertex, start, faces } => {
                write!(f, "conquer vertex {vertex} corner {start} faces {faces}")
            }
            Operation::Merge(e) => write!(f, "merge edge {e}"),
            Operation::Split(e) => write!(f, "split edge {e}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraversalLog {
    pub operations: Vec<Operation>,
}

impl TraversalLog {
    pub fn merges(&self) -> usize {
        self.operations.iter().filter(|o| matches!(o, Operation::Merge(_))).count()
    }

    pub fn splits(&self) -> usize {
        self.operations.iter().filter(|o| matches!(o, Operation::Split(_))).count()
    }

    pub fn conquests(&self) -> usize {
        self.operations.len() - self.merges() - self.splits()
    }

    /// Operation index ranges; each period ends with a merge or split, except the last.
    pub fn periods(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, op) in self.operations.iter().enumerate() {
            if !matches!(op, Operation::Conquest { .. }) {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..self.operations.len());
        out
    }
}

impl fmt::Display for TraversalLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.operations {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateCandidate {
    FreeCorner(usize),
    MergeEdge(EdgeId),
    SplitEdge(EdgeId),
}

pub struct TraversalState<'a> {
    pub sc: Subcomplex<'a>,
    pub wood: GSchnyderWood,
    pub log: TraversalLog,
    fifo: VecDeque<usize>,
    scratch: Vec<bool>,
}

impl<'a> TraversalState<'a> {
    pub fn new(map: &'a Map, root_face: FaceId) -> TraversalState<'a> {
        let mut sc = Subcomplex::init_root(map, root_face);
        sc.recompute_walks();
        let wood = GSchnyderWood::unlabeled(map, root_face);
        let mut st = TraversalState { sc, wood, log: TraversalLog::default(), fifo: VecDeque::new(), scratch: vec![false; map.vertex_count()] };
        st.rebuild_fifo();
        st
    }

    fn map(&self) -> &'a Map {
        self.sc.map
    }

    fn rebuild_fifo(&mut self) {
        self.fifo.clear();
        if let Some(c0) = self.sc.base_corner_v0() {
            for c in self.sc.walk_from(c0) {
                if self.sc.is_free(c) {
                    self.fifo.push_back(c);
                }
            }
        }
    }

    fn push_if_free(&mut self, c: usize) {
        if self.sc.is_free(c) && self.sc.corners[c].walk == 0 {
            self.fifo.push_back(c);
        }
    }

    /// Next operation: a free corner of walk 0, else a merge edge, else a split edge.
    pub fn find_update_candidate(&mut self) -> Result<UpdateCandidate, TraversalError> {
        while let Some(c) = self.fifo.pop_front() {
            if self.sc.is_free(c) && self.sc.corners[c].walk == 0 {
                return Ok(UpdateCandidate::FreeCorner(c));
            }
        }
        let stale: Vec<usize> = self
            .sc
            .alive_corners()
            .filter(|&c| self.sc.corners[c].walk == 0 && self.sc.is_free(c))
            .collect();
        if let Some(&c) = stale.first() {
            return Err(TraversalError::Invariant(format!("free corner {c} missing from the queue")));
        }
        let remaining = self.map().face_count() - self.sc.faces_in;
        let chords: Vec<(EdgeId, usize, usize)> = (0..self.map().edge_count())
            .filter(|&e| self.sc.is_chordal(e))
            .filter_map(|e| {
                let ca = self.sc.corner_of_exterior(BrinId::of_edge(e, 0))?;
                let cb = self.sc.corner_of_exterior(BrinId::of_edge(e, 1))?;
                Some((e, self.sc.corners[ca].walk as usize, self.sc.corners[cb].walk as usize))
            })
            .collect();
        if let Some(&(e, _, _)) = chords.iter().find(|&&(_, wa, wb)| wa != wb && (wa == 0 || wb == 0)) {
            return Ok(UpdateCandidate::MergeEdge(e));
        }
        let bridges = self.dual_bridges();
        chords
            .iter()
            .find(|&&(e, wa, wb)| wa == 0 && wb == 0 && !bridges[e])
            .map(|&(e, _, _)| UpdateCandidate::SplitEdge(e))
            .ok_or(TraversalError::InternalStuck { remaining })
    }

    /// Bridges of the complementary dual, indexed by edge id.
    pub fn dual_bridges(&self) -> Vec<bool> {
        let edges = self.sc.dual_edges();
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(_, a, b)| (a, b)).collect();
        let flags = find_bridges(self.map().face_count(), &pairs);
        let mut out = vec![false; self.map().edge_count()];
        for (i, &(e, _, _)) in edges.iter().enumerate() {
            out[e] = flags[i];
        }
        out
    }

    fn set_label(&mut self, side: BrinId, label: EdgeLabel) -> Result<(), TraversalError> {
        let e = side.edge();
        let slot = match &mut self.wood.roles[e] {
            EdgeRole::Outer => {
                return Err(TraversalError::Invariant(format!("outer edge {e} would be labeled")))
            }
            EdgeRole::Normal(l) => l,
            EdgeRole::Special(s) => &mut s[side.index() & 1],
        };
        if slot.is_some() {
            return Err(TraversalError::Invariant(format!("edge {e} labeled twice")));
        }
        *slot = Some(label);
        Ok(())
    }

    /// Colors the corner's edges, then moves its faces into C.
    pub fn conquer(&mut self, c: usize) -> Result<(), TraversalError> {
        if !self.sc.is_free(c) {
            return Err(TraversalError::NotFree(self.sc.corners[c].start.0));
        }
        let map = self.map();
        let Corner { vertex: v, start: s, end: t, walk, .. } = self.sc.corners[c];
        let xs = self.sc.exterior(c);
        let faces = self.sc.corner_faces(c);

        // colorient
        if v != self.wood.root.v[2] {
            self.set_label(s, EdgeLabel { color: Color::One, out: s })?;
            self.set_label(t.opposite(), EdgeLabel { color: Color::Zero, out: t })?;
        }
        for &x in &xs {
            self.set_label(x, EdgeLabel { color: Color::Two, out: x.opposite() })?;
        }

        let ca = self.sc.corner_ending_at(s.opposite());
        let cb = self.sc.corner_starting_at(t.opposite());
        // the edge closing a single-face corner may have been chordal
        if xs.is_empty() {
            let ab = map.predecessor(s.opposite());
            if self.sc.is_chordal(ab.edge()) {
                for side in [ab, ab.opposite()] {
                    if let Some(k) = self.sc.corner_of_exterior(side) {
                        self.sc.corners[k].chords -= 1;
                    }
                }
            }
        }
        self.sc.kill_corner(c);
        let was_in: Vec<bool> = xs.iter().map(|x| self.sc.vertex_in[map.target(*x)]).collect();
        if was_in.iter().any(|&b| b) {
            return Err(TraversalError::Invariant("free corner reaches a conquered vertex".into()));
        }
        for &f in &faces {
            self.sc.add_face(f);
        }

        let mut touched = Vec::new();
        if let Some(ca) = ca {
            let new_end = map.predecessor(s.opposite());
            if self.sc.corners[ca].start == new_end {
                self.sc.kill_corner(ca);
            } else {
                self.sc.set_end(ca, new_end);
                touched.push(ca);
            }
        }
        if let Some(cb) = cb {
            let new_start = map.follower(t.opposite());
            if self.sc.corners[cb].end == new_start {
                self.sc.kill_corner(cb);
            } else {
                self.sc.set_start(cb, new_start);
                touched.push(cb);
            }
        }
        let mut fresh = Vec::with_capacity(xs.len());
        for &x in &xs {
            self.scratch[map.target(x)] = true;
        }
        for &x in &xs {
            let back = x.opposite();
            fresh.push(self.sc.new_corner(map.target(x), map.follower(back), map.predecessor(back), walk));
        }
        // edges from the new vertices to older C vertices become chordal; the
        // new corners already counted theirs
        for &k in &fresh {
            for y in self.sc.exterior(k) {
                let w = map.target(y);
                if self.sc.vertex_in[w] && !self.scratch[w] {
                    if let Some(o) = self.sc.corner_of_exterior(y.opposite()) {
                        self.sc.corners[o].chords += 1;
                    }
                }
            }
        }
        for &x in &xs {
            self.scratch[map.target(x)] = false;
        }
        for k in touched.into_iter().chain(fresh) {
            self.push_if_free(k);
        }
        self.log.operations.push(Operation::Conquest { vertex: v, start: s, faces: faces.len() });
        if self.sc.is_complete() {
            self.sc.walk_count = 0;
        }
        Ok(())
    }

    /// Doubles a chordal edge: a split when both corners lie on walk 0, a merge
    /// when they lie on different walks.
    pub fn double_edge(&mut self, e: EdgeId, merge: bool) -> Result<(), TraversalError> {
        let ya = BrinId::of_edge(e, 0);
        let yb = ya.opposite();
        let (Some(ca), Some(cb)) = (self.sc.corner_of_exterior(ya), self.sc.corner_of_exterior(yb)) else {
            return Err(TraversalError::WrongKind(e));
        };
        if !self.sc.is_chordal(e) || (self.sc.corners[ca].walk != self.sc.corners[cb].walk) != merge {
            return Err(TraversalError::WrongKind(e));
        }
        if !merge && self.dual_bridges()[e] {
            return Err(TraversalError::WrongKind(e));
        }
        self.sc.special[e] = true;
        self.sc.edge_in[e] = true;
        self.sc.edges_in += 1;
        self.wood.roles[e] = EdgeRole::Special([None, None]);
        for (c, y) in [(ca, ya), (cb, yb)] {
            let Corner { vertex, start, end, walk, .. } = self.sc.corners[c];
            self.sc.kill_corner(c);
            self.sc.new_corner(vertex, start, y, walk);
            self.sc.new_corner(vertex, y, end, walk);
        }
        self.sc.recompute_walks();
        if merge {
            self.sc.merges += 1;
            self.log.operations.push(Operation::Merge(e));
        } else {
            self.sc.splits += 1;
            self.log.operations.push(Operation::Split(e));
        }
        self.rebuild_fifo();
        Ok(())
    }

    pub fn step(&mut self) -> Result<(), TraversalError> {
        match self.find_update_candidate()? {
            UpdateCandidate::FreeCorner(c) => self.conquer(c),
            UpdateCandidate::MergeEdge(e) => self.double_edge(e, true),
            UpdateCandidate::SplitEdge(e) => self.double_edge(e, false),
        }
    }

    /// Mid-traversal invariants; returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let map = self.map();
        let sc = &self.sc;
        sc.check_corners()?;
        if !sc.dual_is_connected() {
            return Err("complementary dual is disconnected".into());
        }
        let expected_chi = 1 - (sc.splits + sc.merges) as i64;
        if !sc.is_complete() && sc.euler_characteristic() != expected_chi {
            return Err(format!("chi(C) = {} expected {}", sc.euler_characteristic(), expected_chi));
        }
        if !sc.is_complete() && sc.walk_count != 1 + sc.splits - sc.merges {
            return Err(format!("{} boundary walks after {} splits and {} merges", sc.walk_count, sc.splits, sc.merges));
        }
        if !sc.is_complete() && sc.face_in[self.wood.root.base_face(map)] {
            return Err("face at {v0, v1} conquered early".into());
        }
        for e in 0..map.edge_count() {
            let fin = |k: usize| sc.face_in[map.face(BrinId::of_edge(e, k))];
            match self.wood.roles[e] {
                EdgeRole::Outer => {}
                EdgeRole::Normal(l) => {
                    if l.is_some() != (fin(0) && fin(1)) {
                        return Err(format!("edge {e}: labeled {} but faces in C {}/{}", l.is_some(), fin(0), fin(1)));
                    }
                }
                EdgeRole::Special(sides) => {
                    for k in 0..2 {
                        if sides[k].is_some() != fin(k) {
                            return Err(format!("special edge {e} side {k} label out of sync"));
                        }
                    }
                }
            }
        }
        let mut out2 = vec![0usize; map.vertex_count()];
        for e in 0..map.edge_count() {
            for k in 0..2 {
                if let Some(l) = self.wood.side_label(BrinId::of_edge(e, k)) {
                    if l.color == Color::Two && (k == 0 || self.wood.is_special(e)) {
                        out2[map.origin(l.out)] += 1;
                    }
                }
            }
        }
        for v in 0..map.vertex_count() {
            let want = usize::from(sc.vertex_in[v] && !self.wood.root.v.contains(&v));
            if out2[v] != want {
                return Err(format!("vertex {v} has {} outgoing color-2 edges", out2[v]));
            }
        }
        if !sc.is_complete() {
            // G2' faces correspond to boundary walks
            let [_, _, v2] = self.wood.root.v;
            let stats = subgraph_stats(map, &|e| match self.wood.roles[e] {
                EdgeRole::Outer => {
                    let b = BrinId::of_edge(e, 0);
                    (map.origin(b) == v2 || map.target(b) == v2) && sc.edge_in[e]
                }
                EdgeRole::Normal(l) => l.is_some_and(|l| l.color == Color::Two),
                EdgeRole::Special(_) => true,
            });
            if stats.faces != sc.walk_count || stats.components != 1 || stats.covered_vertices != sc.vertices_in {
                return Err(format!(
                    "G2' has {} faces, {} components for {} walks",
                    stats.faces, stats.components, sc.walk_count
                ));
            }
        }
        Ok(())
    }
}

/// Runs the traversal from `root_face`.
pub fn compute_schnyder(
    map: &Map,
    root_face: FaceId,
    options: TraversalOptions,
) -> Result<(GSchnyderWood, TraversalLog), TraversalError> {
    if map.vertex_count() < 4 {
        return Err(TraversalError::TooSmall);
    }
    if !map.validate_triangulation().is_triangulation {
        return Err(TraversalError::NotTriangulation);
    }
    if root_face >= map.face_count() {
        return Err(TraversalError::BadRootFace(root_face));
    }
    let mut st = TraversalState::new(map, root_face);
    if options.check_invariants {
        st.check_invariants().map_err(TraversalError::Invariant)?;
    }
    while !st.sc.is_complete() {
        st.step()?;
        if options.check_invariants {
            st.check_invariants().map_err(TraversalError::Invariant)?;
        }
    }
    Ok((st.wood, st.log))
}

/// Bridges of an undirected multigraph, by Tarjan's lowpoint method
/// (iterative). Parallel edges are never bridges; loops never are.
pub fn find_bridges(vertex_count: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut deg = vec![0usize; vertex_count + 1];
    for &(a, b) in edges {
        deg[a + 1] += 1;
        deg[b + 1] += 1;
    }
    for i in 0..vertex_count {
        deg[i + 1] += deg[i];
    }
    let mut adj = vec![(0usize, 0usize); deg[vertex_count]];
    let mut fill = deg.clone();
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[fill[a]] = (b, i);
        fill[a] += 1;
        adj[fill[b]] = (a, i);
        fill[b] += 1;
    }
    let mut disc = vec![usize::MAX; vertex_count];
    let mut low = vec![0usize; vertex_count];
    let mut bridge = vec![false; edges.len()];
    let mut time = 0;
    // (vertex, edge used to enter it, next adjacency index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..vertex_count {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, deg[root]));
        while let Some(top) = stack.last_mut() {
            let (v, via, i) = *top;
            if i < deg[v + 1] {
                top.2 += 1;
                let (w, e) = adj[i];
                if e == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, deg[w]));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridge[via] = true;
                    }
                }
            }
        }
    }
    bridge
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid_torus, planar_random};
    use crate::wood::validate;

    #[test]
    fn bridges_of_tree_and_cycle() {
        let tree = [(0, 1), (1, 2), (1, 3), (3, 4)];
        assert!(find_bridges(5, &tree).iter().all(|&b| b));
        let cycle = [(0, 1), (1, 2), (2, 3), (3, 0)];
        assert!(find_bridges(4, &cycle).iter().all(|&b| !b));
        let parallel = [(0, 1), (0, 1), (1, 2)];
        assert_eq!(find_bridges(3, &parallel), vec![false, false, true]);
    }

    #[test]
    fn first_conquest_is_at_v2() {
        let m = grid_torus(3, 3).unwrap();
        let mut st = TraversalState::new(&m, 0);
        match st.find_update_candidate().unwrap() {
            UpdateCandidate::FreeCorner(c) => assert_eq!(st.sc.corners[c].vertex, st.wood.root.v[2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tetrahedron_traversal() {
        let m = Map::from_triangles(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap();
        let (w, log) = compute_schnyder(&m, 0, TraversalOptions { check_invariants: true }).unwrap();
        assert_eq!(log.conquests(), 2);
        assert!(validate(&m, &w).pass(), "{}", validate(&m, &w));
    }

    #[test]
    fn torus_has_one_merge_one_split() {
        let m = grid_torus(3, 3).unwrap();
        let (w, log) = compute_schnyder(&m, 0, TraversalOptions { check_invariants: true }).unwrap();
        assert_eq!((log.merges(), log.splits()), (1, 1));
        assert_eq!(w.special_edges().len(), 2);
        let rep = validate(&m, &w);
        assert!(rep.pass(), "{rep}");
    }

    #[test]
    fn planar_random_validates() {
        for seed in 0..5 {
            let m = planar_random(30, seed).unwrap();
            let (w, log) = compute_schnyder(&m, 0, TraversalOptions { check_invariants: true }).unwrap();
            assert_eq!(log.merges() + log.splits(), 0);
            assert!(validate(&m, &w).pass());
        }
    }
}
