//! g-Schnyder woods and a validator written directly from the definition.
//!
//! The validator never looks at traversal state: it rebuilds the local
//! orders from the map, the labels, and the doubled special edges.

use std::fmt;

use crate::map::{BrinId, EdgeId, FaceId, Map, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Zero,
    One,
    Two,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Zero, Color::One, Color::Two];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Color::ALL.get(i).copied()
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Color plus direction: `out` is the brin (of the labeled edge) leaving the tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub color: Color,
    pub out: BrinId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    /// Edge of the root face; never labeled.
    Outer,
    Normal(Option<EdgeLabel>),
    /// Doubled edge. `sides[k]` labels the copy bordering `face(2e + k)`.
    Special([Option<EdgeLabel>; 2]),
}

/// Root face with its vertices ordered `v0, v1, v2` along a walk that keeps the
/// face on the right, starting from the lowest brin of the face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Root {
    pub face: FaceId,
    pub v: [VertexId; 3],
    /// Brin `v0 -> v1`; its face is the root face.
    pub base: BrinId,
    /// Brin `v2 -> v0`; the corner `(theta, follower(theta))` is the root corner at `v2`.
    pub theta: BrinId,
}

impl Root {
    pub fn new(map: &Map, face: FaceId) -> Root {
        let walk = map.facial_walk(map.face_brin(face));
        let base = *walk.iter().min().expect("faces are non-empty");
        let v0 = map.origin(base);
        let v1 = map.origin(map.walk_prev(base));
        let theta = map.walk_next(base);
        let v2 = map.origin(theta);
        Root { face, v: [v0, v1, v2], base, theta }
    }

    /// The non-root face incident to `{v0, v1}`.
    pub fn base_face(&self, map: &Map) -> FaceId {
        map.face(self.base.opposite())
    }

    pub fn is_outer_edge(&self, map: &Map, e: EdgeId) -> bool {
        map.face(BrinId::of_edge(e, 0)) == self.face || map.face(BrinId::of_edge(e, 1)) == self.face
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSchnyderWood {
    pub root: Root,
    pub roles: Vec<EdgeRole>,
}

impl GSchnyderWood {
    /// Empty wood: outer edges marked, everything else unlabeled and normal.
    pub fn unlabeled(map: &Map, root_face: FaceId) -> GSchnyderWood {
        let root = Root::new(map, root_face);
        let roles = (0..map.edge_count())
            .map(|e| if root.is_outer_edge(map, e) { EdgeRole::Outer } else { EdgeRole::Normal(None) })
            .collect();
        GSchnyderWood { root, roles }
    }

    pub fn special_edges(&self) -> Vec<EdgeId> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, EdgeRole::Special(_)))
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_special(&self, e: EdgeId) -> bool {
        matches!(self.roles[e], EdgeRole::Special(_))
    }

    /// Label of the copy of `edge(side)` bordering `face(side)`; for normal
    /// edges both sides share one label.
    pub fn side_label(&self, side: BrinId) -> Option<EdgeLabel> {
        match self.roles[side.edge()] {
            EdgeRole::Outer => None,
            EdgeRole::Normal(l) => l,
            EdgeRole::Special(s) => s[side.index() & 1],
        }
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.roles
            .iter()
            .map(|r| match r {
                EdgeRole::Outer => 0,
                EdgeRole::Normal(l) => l.map_or(0, |l| (l.color == c) as usize),
                EdgeRole::Special(s) => s.iter().flatten().filter(|l| l.color == c).count(),
            })
            .sum()
    }
}

/// The host map with every special edge doubled around a 2-gon.
///
/// Original brins keep their ids and represent the copy of side `2e`. The copy
/// of side `2e + 1` of the `j`-th special edge gets brins `2(E + j)` (at the
/// origin of `2e`) and `2(E + j) + 1`.
#[derive(Debug, Clone)]
pub struct DoubledMap {
    pub map: Map,
    pub host_edges: usize,
    pub specials: Vec<EdgeId>,
    pub special_faces: Vec<FaceId>,
}

impl DoubledMap {
    pub fn new(host: &Map, specials: &[EdgeId]) -> DoubledMap {
        let e_host = host.edge_count();
        let mut slot = vec![usize::MAX; e_host];
        for (j, &e) in specials.iter().enumerate() {
            slot[e] = j;
        }
        let nb = 2 * (e_host + specials.len());
        let mut origin = vec![0u32; nb];
        let mut follower = vec![0u32; nb];
        for v in 0..host.vertex_count() {
            let mut cw: Vec<u32> = Vec::new();
            for b in host.rotation(v) {
                let j = slot[b.edge()];
                if j == usize::MAX {
                    cw.push(b.0);
                } else {
                    let twin = (2 * (e_host + j) + (b.index() & 1)) as u32;
                    if b.index() & 1 == 0 {
                        cw.extend([twin, b.0]);
                    } else {
                        cw.extend([b.0, twin]);
                    }
                }
            }
            for i in 0..cw.len() {
                origin[cw[i] as usize] = v as u32;
                follower[cw[i] as usize] = cw[(i + 1) % cw.len()];
            }
        }
        let map = Map::from_rotation(host.vertex_count(), origin, follower)
            .expect("doubling special edges keeps the map valid");
        let special_faces =
            (0..specials.len()).map(|j| map.face(BrinId::new(2 * (e_host + j)))).collect();
        DoubledMap { map, host_edges: e_host, specials: specials.to_vec(), special_faces }
    }

    /// Host brin with the same origin, and the side it stands for.
    pub fn host_brin(&self, b: BrinId) -> (BrinId, BrinId) {
        if b.edge() < self.host_edges {
            (b, BrinId::of_edge(b.edge(), 0))
        } else {
            let e = self.specials[b.edge() - self.host_edges];
            (BrinId::of_edge(e, b.index() & 1), BrinId::of_edge(e, 1))
        }
    }

    pub fn is_special_face(&self, f: FaceId) -> bool {
        self.special_faces.contains(&f)
    }

    /// Label seen from the origin of doubled brin `b`: `(color, outgoing)`.
    pub fn label_at(&self, wood: &GSchnyderWood, b: BrinId) -> Option<(Color, bool)> {
        let (hb, side) = self.host_brin(b);
        wood.side_label(side).map(|l| (l.color, l.out == hb))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub vertex: VertexId,
    /// Doubled-map brins in counterclockwise order.
    pub brins: Vec<BrinId>,
    pub is_root_sector: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectorError {
    MissingOut2(VertexId),
    MultipleOut2(VertexId),
}

/// Sectors of `v` in the doubled map: maximal counterclockwise intervals free of
/// special faces and of the outgoing color-2 edge (root face at `v0`, `v1`, `v2`).
pub fn sectors_of(
    wood: &GSchnyderWood,
    doubled: &DoubledMap,
    v: VertexId,
) -> Result<Vec<Sector>, SectorError> {
    let m = &doubled.map;
    let root_face = m.face(wood.root.base);
    let is_root_vertex = wood.root.v.contains(&v);
    let mut ccw: Vec<BrinId> = m.rotation(v);
    ccw.reverse();
    let out2: Vec<usize> = (0..ccw.len())
        .filter(|&i| doubled.label_at(wood, ccw[i]) == Some((Color::Two, true)))
        .collect();
    if !is_root_vertex {
        match out2.len() {
            0 => return Err(SectorError::MissingOut2(v)),
            1 => {}
            _ => return Err(SectorError::MultipleOut2(v)),
        }
    }
    // Element 2i is edge ccw[i]; element 2i+1 is the face between ccw[i] and ccw[i+1],
    // which is the face of the corner (ccw[i+1], ccw[i]).
    let k = ccw.len();
    let face_after = |i: usize| m.face(ccw[(i + 1) % k]);
    let is_cut = |el: usize| -> bool {
        let i = el / 2;
        if el % 2 == 0 {
            !is_root_vertex && out2.first() == Some(&i)
        } else {
            let f = face_after(i);
            doubled.is_special_face(f) || (is_root_vertex && f == root_face)
        }
    };
    let total = 2 * k;
    let Some(first_cut) = (0..total).find(|&el| is_cut(el)) else {
        return Ok(vec![Sector { vertex: v, brins: ccw, is_root_sector: false }]);
    };
    let base_edge = wood.root.base.edge();
    let mut sectors = Vec::new();
    let mut current: Vec<BrinId> = Vec::new();
    let mut open = false;
    for step in 1..=total {
        let el = (first_cut + step) % total;
        if is_cut(el) {
            if open {
                let is_root_sector = (v == wood.root.v[0] || v == wood.root.v[1])
                    && current.iter().any(|&b| b.edge() < doubled.host_edges && b.edge() == base_edge);
                sectors.push(Sector { vertex: v, brins: std::mem::take(&mut current), is_root_sector });
            }
            open = false;
        } else {
            open = true;
            if el % 2 == 0 {
                current.push(ccw[el / 2]);
            }
        }
    }
    Ok(sectors)
}

/// Position of a label in the counterclockwise pattern
/// `Seq(In1), Out0, Seq(In2), Out1, Seq(In0)`.
fn pattern_rank(label: (Color, bool)) -> Option<u8> {
    match label {
        (Color::One, false) => Some(0),
        (Color::Zero, true) => Some(1),
        (Color::Two, false) => Some(2),
        (Color::One, true) => Some(3),
        (Color::Zero, false) => Some(4),
        _ => None,
    }
}

fn sector_pattern_ok(labels: &[(Color, bool)]) -> Result<(), String> {
    let mut last = 0u8;
    let (mut out0, mut out1) = (0, 0);
    for &l in labels {
        let r = pattern_rank(l).ok_or_else(|| format!("label {:?} not allowed in a sector", l))?;
        if r < last {
            return Err("labels out of ccw order In1* Out0 In2* Out1 In0*".into());
        }
        last = r;
        out0 += (r == 1) as usize;
        out1 += (r == 3) as usize;
    }
    if out0 != 1 || out1 != 1 {
        return Err(format!("sector has {out0} Out0 and {out1} Out1 (expected one each)"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Vertex(VertexId, String),
    Edge(EdgeId, String),
    Global(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Vertex(v, m) => write!(f, "vertex {v}: {m}"),
            Witness::Edge(e, m) => write!(f, "edge {e}: {m}"),
            Witness::Global(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionResult {
    pub witnesses: Vec<Witness>,
}

impl ConditionResult {
    pub fn pass(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Statistics of an embedded spanning subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgraphStats {
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
    pub covered_vertices: usize,
    pub vertex_count: usize,
    pub host_genus: usize,
}

impl SubgraphStats {
    pub fn spanning(&self) -> bool {
        self.covered_vertices == self.vertex_count
    }

    /// Spanning, connected, and every face a disk (its own genus equals the host's).
    pub fn cellular(&self) -> bool {
        self.spanning()
            && self.components == 1
            && self.vertex_count as i64 - self.edges as i64 + self.faces as i64
                == 2 - 2 * self.host_genus as i64
    }
}

/// Faces, edges and components of the submap of `map` on the edges kept by `keep`.
pub fn subgraph_stats(map: &Map, keep: &dyn Fn(EdgeId) -> bool) -> SubgraphStats {
    let nb = map.brin_count();
    let mut next = vec![u32::MAX; nb];
    let mut covered = 0;
    let mut parent: Vec<usize> = (0..map.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for v in 0..map.vertex_count() {
        let kept: Vec<BrinId> = map.rotation(v).into_iter().filter(|b| keep(b.edge())).collect();
        if !kept.is_empty() {
            covered += 1;
        }
        for i in 0..kept.len() {
            next[kept[i].index()] = kept[(i + 1) % kept.len()].0;
            let (a, b) = (find(&mut parent, v), find(&mut parent, map.target(kept[i])));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut edges = 0;
    let mut faces = 0;
    let mut seen = vec![false; nb];
    for b in 0..nb {
        if next[b] == u32::MAX {
            continue;
        }
        if b % 2 == 0 {
            edges += 1;
        }
        if seen[b] {
            continue;
        }
        faces += 1;
        let mut c = b;
        while !seen[c] {
            seen[c] = true;
            c = (next[c] ^ 1) as usize;
        }
    }
    let components = (0..map.vertex_count())
        .filter(|&v| next_exists(map, &next, v))
        .filter(|&v| find(&mut parent, v) == v)
        .count();
    SubgraphStats {
        edges,
        faces,
        components,
        covered_vertices: covered,
        vertex_count: map.vertex_count(),
        host_genus: map.genus().unwrap_or(0),
    }
}

fn next_exists(map: &Map, next: &[u32], v: VertexId) -> bool {
    map.rotation(v).iter().any(|b| next[b.index()] != u32::MAX)
}

/// `G_i` on the doubled map for colors 0 and 1 (color-`i` copies plus the outer
/// edges at `v_i`); for color 2 the cut-graph on the host map (color-2 edges,
/// the outer edges at `v2`, and the undoubled special edges).
pub fn color_subgraph(map: &Map, wood: &GSchnyderWood, color: Color) -> SubgraphStats {
    let [v0, v1, v2] = wood.root.v;
    let vi = [v0, v1, v2][color.index()];
    let touches = |e: EdgeId, m: &Map, v: VertexId| {
        let b = BrinId::of_edge(e, 0);
        m.origin(b) == v || m.target(b) == v
    };
    if color == Color::Two {
        return subgraph_stats(map, &|e| match wood.roles[e] {
            EdgeRole::Outer => touches(e, map, v2),
            EdgeRole::Normal(l) => l.is_some_and(|l| l.color == Color::Two),
            EdgeRole::Special(_) => true,
        });
    }
    let doubled = DoubledMap::new(map, &wood.special_edges());
    subgraph_stats(&doubled.map, &|de| {
        let (hb, side) = doubled.host_brin(BrinId::of_edge(de, 0));
        match wood.roles[hb.edge()] {
            EdgeRole::Outer => touches(hb.edge(), map, vi),
            _ => wood.side_label(side).is_some_and(|l| l.color == color),
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub genus: usize,
    pub special_count: usize,
    pub root_face_condition: ConditionResult,
    pub inner_local_condition: ConditionResult,
    pub cut_graph_condition: ConditionResult,
    pub g0_cellular: ConditionResult,
    pub g1_cellular: ConditionResult,
    pub g0: SubgraphStats,
    pub g1: SubgraphStats,
    pub g2: SubgraphStats,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.root_face_condition.pass()
            && self.inner_local_condition.pass()
            && self.cut_graph_condition.pass()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "genus {} special_edges {}", self.genus, self.special_count)?;
        let rows = [
            ("root_face_condition", &self.root_face_condition),
            ("inner_local_condition", &self.inner_local_condition),
            ("cut_graph_condition", &self.cut_graph_condition),
            ("g0_cellular", &self.g0_cellular),
            ("g1_cellular", &self.g1_cellular),
        ];
        for (name, c) in rows {
            writeln!(f, "{name}: {}", if c.pass() { "pass" } else { "FAIL" })?;
            for w in c.witnesses.iter().take(20) {
                writeln!(f, "  {w}")?;
            }
            if c.witnesses.len() > 20 {
                writeln!(f, "  ... {} more", c.witnesses.len() - 20)?;
            }
        }
        writeln!(
            f,
            "G0: {} edges {} faces; G1: {} edges {} faces; G2: {} edges {} faces",
            self.g0.edges, self.g0.faces, self.g1.edges, self.g1.faces, self.g2.edges, self.g2.faces
        )?;
        write!(f, "overall: {}", if self.pass() { "pass" } else { "FAIL" })
    }
}

/// Checks every condition of a g-Schnyder wood on a simple triangulation.
pub fn validate(map: &Map, wood: &GSchnyderWood) -> ValidationReport {
    let genus = map.genus().unwrap_or(0);
    let n = map.vertex_count();
    let [v0, v1, v2] = wood.root.v;
    let specials = wood.special_edges();
    let mut root_cond = ConditionResult::default();
    let mut local_cond = ConditionResult::default();
    let mut cut_cond = ConditionResult::default();

    // Labels exist exactly on inner edges and point along their edge.
    for (e, role) in wood.roles.iter().enumerate() {
        let outer = wood.root.is_outer_edge(map, e);
        let labels: Vec<Option<EdgeLabel>> = match role {
            EdgeRole::Outer => vec![],
            EdgeRole::Normal(l) => vec![*l],
            EdgeRole::Special(s) => s.to_vec(),
        };
        if outer != matches!(role, EdgeRole::Outer) {
            root_cond.witnesses.push(Witness::Edge(e, "outer edges must be exactly the unlabeled root-face edges".into()));
        }
        for l in labels {
            match l {
                None => local_cond.witnesses.push(Witness::Edge(e, "inner edge without label".into())),
                Some(l) if l.out.edge() != e => {
                    local_cond.witnesses.push(Witness::Edge(e, "direction brin belongs to another edge".into()))
                }
                _ => {}
            }
        }
    }
    if !local_cond.pass() || !root_cond.pass() {
        let stats = SubgraphStats { edges: 0, faces: 0, components: 0, covered_vertices: 0, vertex_count: n, host_genus: genus };
        return ValidationReport {
            genus,
            special_count: specials.len(),
            root_face_condition: root_cond,
            inner_local_condition: local_cond,
            cut_graph_condition: cut_cond,
            g0_cellular: ConditionResult::default(),
            g1_cellular: ConditionResult::default(),
            g0: stats,
            g1: stats,
            g2: stats,
        };
    }

    let doubled = DoubledMap::new(map, &specials);
    let dm = &doubled.map;

    // root-face condition at v2
    for b in dm.rotation(v2) {
        let (hb, _) = doubled.host_brin(b);
        if wood.is_special(hb.edge()) {
            root_cond.witnesses.push(Witness::Vertex(v2, format!("special edge {} at v2", hb.edge())));
        }
        if let Some(l) = doubled.label_at(wood, b) {
            if l != (Color::Two, false) {
                root_cond.witnesses.push(Witness::Edge(hb.edge(), "inner edge at v2 is not ingoing color 2".into()));
            }
        }
    }
    for (vi, root_color) in [(v0, Color::Zero), (v1, Color::One)] {
        match sectors_of(wood, &doubled, vi) {
            Err(e) => root_cond.witnesses.push(Witness::Vertex(vi, format!("{e:?}"))),
            Ok(sectors) => {
                let roots = sectors.iter().filter(|s| s.is_root_sector).count();
                if roots != 1 {
                    root_cond.witnesses.push(Witness::Vertex(vi, format!("{roots} root sectors")));
                }
                for s in sectors {
                    let labels: Vec<(Color, bool)> =
                        s.brins.iter().filter_map(|&b| doubled.label_at(wood, b)).collect();
                    if s.is_root_sector {
                        if labels.iter().any(|&l| l != (root_color, false)) {
                            root_cond.witnesses.push(Witness::Vertex(
                                vi,
                                format!("root sector edge not ingoing color {root_color}"),
                            ));
                        }
                    } else if let Err(msg) = sector_pattern_ok(&labels) {
                        root_cond.witnesses.push(Witness::Vertex(vi, msg));
                    }
                }
            }
        }
    }

    // local condition for inner vertices
    for v in 0..n {
        if v == v0 || v == v1 || v == v2 {
            continue;
        }
        match sectors_of(wood, &doubled, v) {
            Err(e) => local_cond.witnesses.push(Witness::Vertex(v, format!("{e:?}"))),
            Ok(sectors) => {
                let k = dm
                    .rotation(v)
                    .iter()
                    .filter(|&&b| b.edge() >= doubled.host_edges)
                    .count();
                if sectors.len() != k + 1 {
                    local_cond.witnesses.push(Witness::Vertex(v, format!("{} sectors for {k} special edges", sectors.len())));
                }
                for s in sectors {
                    let labels: Vec<(Color, bool)> =
                        s.brins.iter().filter_map(|&b| doubled.label_at(wood, b)).collect();
                    if let Err(msg) = sector_pattern_ok(&labels) {
                        local_cond.witnesses.push(Witness::Vertex(v, msg));
                    }
                }
            }
        }
    }

    // cut-graph condition
    if specials.len() != 2 * genus {
        cut_cond.witnesses.push(Witness::Global(format!(
            "{} special edges, expected {}",
            specials.len(),
            2 * genus
        )));
    }
    // Color-2 parent pointers, extended by v0 -> v2 and v1 -> v2, must form a tree rooted at v2.
    let mut parent = vec![usize::MAX; n];
    let mut color2 = 0usize;
    for e in 0..map.edge_count() {
        let sides: &[usize] = if wood.is_special(e) { &[0, 1] } else { &[0] };
        for &k in sides {
            if let Some(l) = wood.side_label(BrinId::of_edge(e, k)) {
                if l.color == Color::Two {
                    color2 += 1;
                    let tail = map.origin(l.out);
                    if parent[tail] != usize::MAX {
                        cut_cond.witnesses.push(Witness::Vertex(tail, "two outgoing color-2 edges".into()));
                    }
                    parent[tail] = map.target(l.out);
                }
            }
        }
    }
    for v in [v0, v1] {
        if parent[v] != usize::MAX {
            cut_cond.witnesses.push(Witness::Vertex(v, "outer vertex has an outgoing color-2 edge".into()));
        }
        parent[v] = v2;
    }
    if parent[v2] != usize::MAX {
        cut_cond.witnesses.push(Witness::Vertex(v2, "v2 has an outgoing color-2 edge".into()));
    }
    if color2 + 3 != n {
        cut_cond.witnesses.push(Witness::Global(format!("{color2} color-2 edges, expected {}", n.saturating_sub(3))));
    }
    // every vertex reaches v2
    let mut state = vec![0u8; n]; // 0 unknown, 1 on path, 2 reaches root
    state[v2] = 2;
    for start in 0..n {
        let mut path = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = parent[v];
            if v == usize::MAX {
                break;
            }
        }
        let ok = v != usize::MAX && state[v] == 2;
        if !ok {
            cut_cond.witnesses.push(Witness::Vertex(start, "color-2 path does not reach v2".into()));
        }
        for p in path {
            state[p] = if ok { 2 } else { 3 };
        }
    }
    let g2 = color_subgraph(map, wood, Color::Two);
    if !g2.spanning() || g2.components != 1 {
        cut_cond.witnesses.push(Witness::Global("G2 is not spanning and connected".into()));
    }
    // Complementary dual of G2 must be a spanning tree of the dual.
    {
        let in_g2 = |e: EdgeId| match wood.roles[e] {
            EdgeRole::Outer => {
                let b = BrinId::of_edge(e, 0);
                map.origin(b) == v2 || map.target(b) == v2
            }
            EdgeRole::Normal(l) => l.is_some_and(|l| l.color == Color::Two),
            EdgeRole::Special(_) => true,
        };
        let mut uf: Vec<usize> = (0..map.face_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut dual_edges = 0usize;
        let mut cyclic = false;
        for e in (0..map.edge_count()).filter(|&e| !in_g2(e)) {
            dual_edges += 1;
            let (a, b) = (
                find(&mut uf, map.face(BrinId::of_edge(e, 0))),
                find(&mut uf, map.face(BrinId::of_edge(e, 1))),
            );
            if a == b {
                cyclic = true;
            } else {
                uf[a] = b;
            }
        }
        if cyclic || dual_edges + 1 != map.face_count() {
            cut_cond.witnesses.push(Witness::Global(format!(
                "complementary dual of G2 is not a spanning tree ({} dual edges, {} faces{})",
                dual_edges,
                map.face_count(),
                if cyclic { ", has a cycle" } else { "" }
            )));
        }
    }

    let g0 = color_subgraph(map, wood, Color::Zero);
    let g1 = color_subgraph(map, wood, Color::One);
    let cell = |s: SubgraphStats| {
        let mut c = ConditionResult::default();
        if !s.cellular() {
            c.witnesses.push(Witness::Global("not a spanning cellular subgraph".into()));
        }
        if s.faces != 1 + 2 * genus {
            c.witnesses.push(Witness::Global(format!("{} faces, expected {}", s.faces, 1 + 2 * genus)));
        }
        if s.edges != n + 4 * genus - 1 {
            c.witnesses.push(Witness::Global(format!("{} edges, expected {}", s.edges, n + 4 * genus - 1)));
        }
        c
    };
    ValidationReport {
        genus,
        special_count: specials.len(),
        root_face_condition: root_cond,
        inner_local_condition: local_cond,
        cut_graph_condition: cut_cond,
        g0_cellular: cell(g0),
        g1_cellular: cell(g1),
        g0,
        g1,
        g2,
    }
}

/// For planar woods: the color-`i` edges form a tree on the inner vertices plus `v_i`.
pub fn color_class_is_tree(map: &Map, wood: &GSchnyderWood, color: Color) -> bool {
    let n = map.vertex_count();
    let root = wood.root.v[color.index()];
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut edges = 0;
    for e in 0..map.edge_count() {
        if let EdgeRole::Normal(Some(l)) = wood.roles[e] {
            if l.color != color {
                continue;
            }
            edges += 1;
            let (a, b) = (find(&mut uf, map.origin(l.out)), find(&mut uf, map.target(l.out)));
            if a == b {
                return false;
            }
            uf[a] = b;
        } else if wood.is_special(e) {
            return false;
        }
    }
    let r = find(&mut uf, root);
    let spans = (0..n)
        .filter(|v| !wood.root.v.contains(v))
        .all(|v| find(&mut uf, v) == r);
    spans && edges == n - 3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> Map {
        Map::from_triangles(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
    }

    #[test]
    fn root_ordering_follows_walk_with_face_on_right() {
        let m = tetra();
        let r = Root::new(&m, 0);
        assert_eq!(m.face(r.base), 0);
        assert_eq!(m.origin(r.base), r.v[0]);
        assert_eq!(m.target(r.base), r.v[1]);
        assert_eq!(m.origin(r.theta), r.v[2]);
        assert_eq!(m.target(r.theta), r.v[0]);
        assert_eq!(m.face(r.theta), 0);
    }

    /// The unique planar wood of the tetrahedron, built by hand.
    fn tetra_wood() -> (Map, GSchnyderWood) {
        let m = tetra();
        let mut w = GSchnyderWood::unlabeled(&m, 0);
        let [v0, v1, v2] = w.root.v;
        let x = (0..4).find(|v| !w.root.v.contains(v)).unwrap();
        for (to, c) in [(v2, Color::Two), (v0, Color::Zero), (v1, Color::One)] {
            let b = m.find_brin(x, to).unwrap();
            w.roles[b.edge()] = EdgeRole::Normal(Some(EdgeLabel { color: c, out: b }));
        }
        (m, w)
    }

    #[test]
    fn tetrahedron_wood_validates() {
        let (m, w) = tetra_wood();
        let rep = validate(&m, &w);
        assert!(rep.pass(), "{rep}");
        assert!(rep.g0_cellular.pass() && rep.g1_cellular.pass());
        for c in Color::ALL {
            assert!(color_class_is_tree(&m, &w, c));
        }
    }

    #[test]
    fn swapped_colors_fail_local_condition() {
        let (m, mut w) = tetra_wood();
        for r in w.roles.iter_mut() {
            if let EdgeRole::Normal(Some(l)) = r {
                l.color = match l.color {
                    Color::Zero => Color::One,
                    Color::One => Color::Zero,
                    c => c,
                };
            }
        }
        assert!(!validate(&m, &w).pass());
    }

    #[test]
    fn inner_vertex_sector_is_everything_but_out2() {
        let (m, w) = tetra_wood();
        let d = DoubledMap::new(&m, &[]);
        let x = (0..4).find(|v| !w.root.v.contains(v)).unwrap();
        let s = sectors_of(&w, &d, x).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].brins.len(), 2);
        let v0 = w.root.v[0];
        let s0 = sectors_of(&w, &d, v0).unwrap();
        assert_eq!(s0.len(), 1);
        assert!(s0[0].is_root_sector);
    }

    #[test]
    fn missing_out2_is_reported() {
        let (m, mut w) = tetra_wood();
        let x = (0..4).find(|v| !w.root.v.contains(v)).unwrap();
        let b = m.find_brin(x, w.root.v[2]).unwrap();
        w.roles[b.edge()] = EdgeRole::Normal(Some(EdgeLabel { color: Color::Two, out: b.opposite() }));
        let d = DoubledMap::new(&m, &[]);
        assert_eq!(sectors_of(&w, &d, x), Err(SectorError::MissingOut2(x)));
    }

    #[test]
    fn doubled_map_adds_bigons() {
        let m = tetra();
        let d = DoubledMap::new(&m, &[0]);
        assert_eq!(d.map.edge_count(), 7);
        assert_eq!(d.map.face_count(), 5);
        assert_eq!(d.map.face_degree(d.special_faces[0]), 2);
        // the copy of side 2e borders face(2e), the new copy borders face(2e+1)
        let f0 = m.face(BrinId(0));
        assert_eq!(d.map.face(BrinId(0)), d.map.face(m.face_brin(f0)));
        let twin = BrinId::new(2 * 6);
        assert_eq!(d.host_brin(twin), (BrinId(0), BrinId(1)));
    }
}
