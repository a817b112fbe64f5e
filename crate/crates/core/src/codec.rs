//! Encoding of a triangulation through a traversal-produced g-Schnyder wood.
//!
//! `W` is the parenthesis word of the color-2 tree (plus the two outer edges at
//! `v2`) read along its contour from the root corner at `v2`. Each special edge
//! gets a record locating its two ends in that contour. `W'` is read along the
//! single face of the cut-graph: 0 for each crossed outgoing color-0 brin, 1 for
//! each crossed ingoing color-1 brin. Color-0 edges are then implied.

use crate::error::CodecError;
use crate::map::{BrinId, EdgeId, Map};
use crate::wood::{Color, EdgeLabel, EdgeRole, GSchnyderWood};

const MAGIC: &[u8; 4] = b"GSC1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialRecord {
    pub corner_a: u64,
    pub rank_a: u64,
    pub corner_b: u64,
    pub rank_b: u64,
    /// bits 0-1 color of side a, bit 2 direction of side a (0: out of its own
    /// end), bits 3-4 and 5 the same for side b.
    pub flags: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeWords {
    pub n: usize,
    pub g: usize,
    pub w: Vec<bool>,
    pub specials: Vec<SpecialRecord>,
    pub wp: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeStats {
    pub n: usize,
    pub g: usize,
    pub w_bits: usize,
    pub special_bits: usize,
    pub wp_bits: usize,
    pub total_bits: usize,
    pub bits_per_vertex: f64,
}

fn flag_bits(l: EdgeLabel, own: BrinId) -> u8 {
    l.color.index() as u8 | (((l.out != own) as u8) << 2)
}

fn outer_at_v2(map: &Map, wood: &GSchnyderWood, e: EdgeId) -> bool {
    let b = BrinId::of_edge(e, 0);
    let v2 = wood.root.v[2];
    map.origin(b) == v2 || map.target(b) == v2
}

/// Contour walk of a subgraph from the root corner at `v2`. At each arrival the
/// walker sweeps counterclockwise to the next subgraph brin, crossing the brins
/// in between; `visit(step, brin)` sees every crossed brin.
fn contour_walk(
    map: &Map,
    theta: BrinId,
    steps: usize,
    in_sub: &dyn Fn(EdgeId) -> bool,
    visit: &mut dyn FnMut(usize, BrinId),
    on_step: &mut dyn FnMut(BrinId),
) -> BrinId {
    let mut d = theta;
    let mut arrival = theta;
    for step in 0..steps {
        on_step(d);
        arrival = d.opposite();
        let mut y = map.predecessor(arrival);
        while !in_sub(y.edge()) {
            visit(step, y);
            y = map.predecessor(y);
        }
        d = y;
    }
    arrival
}

pub struct RedEncodeReport {
    pub checked: usize,
    pub violations: Vec<EdgeId>,
}

/// Reads `W'` along the cut-graph and records, for every non-special color-1
/// edge, whether its outgoing brin was crossed first.
fn cut_graph_word(map: &Map, wood: &GSchnyderWood) -> Result<(Vec<bool>, RedEncodeReport), CodecError> {
    let n = map.vertex_count();
    let g = map.genus().map_err(|e| CodecError::NotTraversalWood(e.to_string()))?;
    let in_g2 = |e: EdgeId| match wood.roles[e] {
        EdgeRole::Outer => outer_at_v2(map, wood, e),
        EdgeRole::Normal(l) => l.is_some_and(|l| l.color == Color::Two),
        EdgeRole::Special(_) => true,
    };
    let mut wp = Vec::with_capacity(2 * n + 4 * g);
    let mut out_seen = vec![false; map.edge_count()];
    let mut report = RedEncodeReport { checked: 0, violations: Vec::new() };
    let end = contour_walk(
        map,
        wood.root.theta,
        2 * (n - 1 + 2 * g),
        &in_g2,
        &mut |_, y| {
            if let EdgeRole::Normal(Some(l)) = wood.roles[y.edge()] {
                match (l.color, l.out == y) {
                    (Color::Zero, true) => wp.push(false),
                    (Color::One, true) => out_seen[y.edge()] = true,
                    (Color::One, false) => {
                        wp.push(true);
                        report.checked += 1;
                        if !out_seen[y.edge()] {
                            report.violations.push(y.edge());
                        }
                    }
                    _ => {}
                }
            }
        },
        &mut |_| {},
    );
    if end != map.follower(wood.root.theta) {
        return Err(CodecError::NotTraversalWood("cut-graph walk does not close at the root corner".into()));
    }
    Ok((wp, report))
}

/// Checks that along the cut-graph walk every non-special color-1 edge is met
/// at its outgoing brin first.
pub fn check_red_encode(map: &Map, wood: &GSchnyderWood) -> Result<RedEncodeReport, CodecError> {
    cut_graph_word(map, wood).map(|(_, r)| r)
}

pub fn encode(map: &Map, wood: &GSchnyderWood) -> Result<CodeWords, CodecError> {
    let n = map.vertex_count();
    let g = map.genus().map_err(|e| CodecError::NotTraversalWood(e.to_string()))?;
    let ne = map.edge_count();
    let mut tree = vec![false; ne];
    for (e, role) in wood.roles.iter().enumerate() {
        tree[e] = match role {
            EdgeRole::Outer => outer_at_v2(map, wood, e),
            EdgeRole::Normal(None) => {
                return Err(CodecError::NotTraversalWood(format!("inner edge {e} is unlabeled")))
            }
            EdgeRole::Normal(Some(l)) => l.color == Color::Two,
            EdgeRole::Special(sides) => {
                if sides.iter().any(|l| l.is_none_or(|l| l.color == Color::Two)) {
                    return Err(CodecError::NotTraversalWood(format!("special edge {e} has a missing or color-2 side")));
                }
                false
            }
        };
    }
    let specials = wood.special_edges();
    if specials.len() != 2 * g {
        return Err(CodecError::NotTraversalWood(format!("{} special edges for genus {g}", specials.len())));
    }

    // contour of the tree
    let mut w = Vec::with_capacity(2 * n - 2);
    let mut seen = vec![false; ne];
    let mut corner_of = vec![u32::MAX; map.brin_count()];
    let mut crossing = vec![0u32; map.brin_count()];
    let mut per_corner = vec![0u32; 2 * n - 2];
    let end = contour_walk(
        map,
        wood.root.theta,
        2 * n - 2,
        &|e| tree[e],
        &mut |step, y| {
            if wood.is_special(y.edge()) {
                corner_of[y.index()] = step as u32;
                crossing[y.index()] = per_corner[step];
                per_corner[step] += 1;
            }
        },
        &mut |d| {
            w.push(!seen[d.edge()]);
            seen[d.edge()] = true;
        },
    );
    let opening = w.iter().filter(|&&b| b).count();
    if end != map.follower(wood.root.theta) || opening != n - 1 {
        return Err(CodecError::NotTraversalWood("color-2 edges do not form a spanning tree toward v2".into()));
    }

    let mut records = Vec::with_capacity(specials.len());
    for &e in &specials {
        let (mut a, mut b) = (BrinId::of_edge(e, 0), BrinId::of_edge(e, 1));
        if corner_of[a.index()] > corner_of[b.index()] {
            std::mem::swap(&mut a, &mut b);
        }
        let rank = |y: BrinId| {
            let c = corner_of[y.index()] as usize;
            (per_corner[c] - 1 - crossing[y.index()]) as u64
        };
        let la = wood.side_label(a).expect("checked above");
        let lb = wood.side_label(b).expect("checked above");
        records.push(SpecialRecord {
            corner_a: corner_of[a.index()] as u64,
            rank_a: rank(a),
            corner_b: corner_of[b.index()] as u64,
            rank_b: rank(b),
            flags: flag_bits(la, a) | (flag_bits(lb, b) << 3),
        });
    }
    records.sort_by_key(|r| (r.corner_a, r.rank_a));

    let (wp, report) = cut_graph_word(map, wood)?;
    if let Some(&e) = report.violations.first() {
        return Err(CodecError::NotTraversalWood(format!("color-1 edge {e} is met at its ingoing brin first")));
    }
    if wp.len() != 2 * n - 6 + 4 * g {
        return Err(CodecError::NotTraversalWood(format!("W' has {} bits, expected {}", wp.len(), 2 * n - 6 + 4 * g)));
    }
    Ok(CodeWords { n, g, w, specials: records, wp })
}

// ---------------------------------------------------------------- decoding

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// tree brin toward the parent (outgoing color 2, or outer at v0, v1)
    Up,
    Down,
    Special,
    Base,
    Out0,
    Out1,
    In1,
    In0,
}

/// Label of one copy of a special edge as seen from a stub's vertex.
type SideView = (Color, bool);

/// Half-edges with circular clockwise lists per vertex.
struct Stubs {
    vertex: Vec<u32>,
    kind: Vec<Kind>,
    partner: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    /// for special stubs: (record, is end a), copy cw-after, copy cw-before
    special: Vec<Option<(usize, bool, SideView, SideView)>>,
}

impl Stubs {
    fn new() -> Stubs {
        Stubs { vertex: vec![], kind: vec![], partner: vec![], next: vec![], prev: vec![], special: vec![] }
    }

    fn add(&mut self, v: usize, kind: Kind) -> u32 {
        let id = self.vertex.len() as u32;
        self.vertex.push(v as u32);
        self.kind.push(kind);
        self.partner.push(NIL);
        self.next.push(id);
        self.prev.push(id);
        self.special.push(None);
        id
    }

    fn insert_after(&mut self, at: u32, s: u32) {
        let nx = self.next[at as usize];
        self.next[at as usize] = s;
        self.prev[s as usize] = at;
        self.next[s as usize] = nx;
        self.prev[nx as usize] = s;
    }

    fn insert_before(&mut self, at: u32, s: u32) {
        let pv = self.prev[at as usize];
        self.insert_after(pv, s);
    }

    fn link(&mut self, a: u32, b: u32) {
        self.partner[a as usize] = b;
        self.partner[b as usize] = a;
    }

    fn in_g2(&self, s: u32) -> bool {
        matches!(self.kind[s as usize], Kind::Up | Kind::Down | Kind::Special)
    }

    /// Same walk as `contour_walk`, on stubs; returns the final arrival stub.
    fn g2_walk(&self, theta: u32, steps: usize, visit: &mut dyn FnMut(u32)) -> Result<u32, CodecError> {
        let mut d = theta;
        let mut arrival = theta;
        let limit = self.vertex.len();
        for _ in 0..steps {
            arrival = self.partner[d as usize];
            if arrival == NIL {
                return Err(CodecError::NonTriangulable("dangling cut-graph stub".into()));
            }
            let mut y = self.prev[arrival as usize];
            let mut guard = 0;
            while !self.in_g2(y) {
                visit(y);
                y = self.prev[y as usize];
                guard += 1;
                if guard > limit {
                    return Err(CodecError::NonTriangulable("cut-graph walk does not close".into()));
                }
            }
            d = y;
        }
        Ok(arrival)
    }
}

fn side_views(flags: u8) -> Result<[(Color, bool); 2], ()> {
    let mut out = [(Color::Zero, false); 2];
    for (k, shift) in [(0, 0), (1, 3)] {
        let bits = flags >> shift;
        let color = match bits & 3 {
            0 => Color::Zero,
            1 => Color::One,
            _ => return Err(()),
        };
        // true: outgoing from the side's own end
        out[k] = (color, bits & 4 == 0);
    }
    if flags & 0xC0 != 0 {
        return Err(());
    }
    Ok(out)
}

fn bad(msg: impl Into<String>) -> CodecError {
    CodecError::NonTriangulable(msg.into())
}

pub fn decode(code: &CodeWords) -> Result<(Map, GSchnyderWood), CodecError> {
    let (n, g) = (code.n, code.g);
    if n < 4 {
        return Err(CodecError::LengthMismatch(format!("n = {n} is below 4")));
    }
    if code.w.len() != 2 * n - 2 {
        return Err(CodecError::LengthMismatch(format!("W has {} bits, expected {}", code.w.len(), 2 * n - 2)));
    }
    let wp_len = (2 * n - 6).checked_add(4 * g).ok_or_else(|| CodecError::LengthMismatch("genus too large".into()))?;
    if code.wp.len() != wp_len || code.specials.len() != 2 * g {
        return Err(CodecError::LengthMismatch("W' or special-record count does not match n and g".into()));
    }

    // (1) the tree, vertices numbered in preorder from v2 = 0
    let mut st = Stubs::new();
    let mut last_item: Vec<u32> = vec![NIL; n];
    let mut up_stub: Vec<u32> = vec![NIL; n];
    let mut stack: Vec<usize> = vec![0];
    let mut next_vertex = 1;
    let mut root_children: Vec<usize> = Vec::new();
    for &bit in &code.w {
        if bit {
            let p = *stack.last().ok_or(CodecError::MalformedW)?;
            if next_vertex >= n {
                return Err(CodecError::MalformedW);
            }
            let c = next_vertex;
            next_vertex += 1;
            let down = st.add(p, Kind::Down);
            let up = st.add(c, Kind::Up);
            st.link(down, up);
            if last_item[p] != NIL {
                st.insert_before(last_item[p], down);
            }
            last_item[p] = down;
            last_item[c] = up;
            up_stub[c] = up;
            if p == 0 {
                root_children.push(c);
            }
            stack.push(c);
        } else {
            stack.pop();
            if stack.is_empty() {
                return Err(CodecError::MalformedW);
            }
        }
    }
    if stack.len() != 1 || next_vertex != n || root_children.len() < 2 {
        return Err(CodecError::MalformedW);
    }
    let (v2, v0, v1) = (0usize, root_children[0], *root_children.last().unwrap());
    let theta = st.partner[up_stub[v0] as usize];
    let last = st.partner[up_stub[v1] as usize];

    // corners of the contour: departure stub of each step's corner
    let corner_count = 2 * n - 2;
    let mut corner_dep = Vec::with_capacity(corner_count);
    let mut corner_vertex = Vec::with_capacity(corner_count);
    let end = st.g2_walk(theta, corner_count, &mut |_| {})?;
    {
        let mut d = theta;
        for _ in 0..corner_count {
            let a = st.partner[d as usize];
            d = st.prev[a as usize];
            corner_dep.push(d);
            corner_vertex.push(st.vertex[a as usize] as usize);
        }
    }
    if end != last {
        return Err(CodecError::MalformedW);
    }

    // (2) special edges
    let mut entries: Vec<(u64, u64, u32)> = Vec::with_capacity(4 * g);
    let mut prev_key = None;
    for (i, r) in code.specials.iter().enumerate() {
        let malformed = || CodecError::MalformedSpecial(i);
        if r.corner_a >= corner_count as u64 || r.corner_b >= corner_count as u64 || r.corner_a >= r.corner_b {
            return Err(malformed());
        }
        if prev_key.is_some_and(|k| k >= (r.corner_a, r.rank_a)) {
            return Err(malformed());
        }
        prev_key = Some((r.corner_a, r.rank_a));
        let (va, vb) = (corner_vertex[r.corner_a as usize], corner_vertex[r.corner_b as usize]);
        if va == vb || va == v2 || vb == v2 {
            return Err(malformed());
        }
        let [la, lb] = side_views(r.flags).map_err(|_| malformed())?;
        let sa = st.add(va, Kind::Special);
        let sb = st.add(vb, Kind::Special);
        st.link(sa, sb);
        // at end a the copy of side a follows clockwise; at end b the copy of side b does
        st.special[sa as usize] = Some((i, true, la, (lb.0, !lb.1)));
        st.special[sb as usize] = Some((i, false, lb, (la.0, !la.1)));
        entries.push((r.corner_a, r.rank_a, sa));
        entries.push((r.corner_b, r.rank_b, sb));
    }
    entries.sort_unstable();
    let mut i = 0;
    while i < entries.len() {
        let c = entries[i].0;
        let mut at = corner_dep[c as usize];
        let mut expect = 0;
        while i < entries.len() && entries[i].0 == c {
            if entries[i].1 != expect {
                let rec = st.special[entries[i].2 as usize].map_or(0, |s| s.0);
                return Err(CodecError::MalformedSpecial(rec));
            }
            st.insert_after(at, entries[i].2);
            at = entries[i].2;
            expect += 1;
            i += 1;
        }
    }

    // the outer edge {v0, v1}
    let base = st.add(v0, Kind::Base);
    let base_opp = st.add(v1, Kind::Base);
    st.link(base, base_opp);
    st.insert_before(up_stub[v0], base);
    st.insert_after(up_stub[v1], base_opp);

    // (3) one outgoing color-0 and color-1 brin per sector
    let mut out0_count = 0usize;
    for v in 0..n {
        if v == v2 {
            continue;
        }
        let up = up_stub[v];
        // cw sequence of stubs after the leading anchor
        let (first, stop) = if v == v0 {
            (up, st.next[base as usize])
        } else if v == v1 {
            (base_opp, st.next[up as usize])
        } else {
            (st.next[up as usize], up)
        };
        let mut seq = Vec::new();
        let mut s = first;
        if v == v0 || v == v1 {
            // the lists are circular and start right at `stop`
            loop {
                seq.push(s);
                s = st.next[s as usize];
                if s == stop {
                    break;
                }
            }
        } else {
            while s != stop {
                seq.push(s);
                s = st.next[s as usize];
            }
        }
        // segments between special stubs; each has a start stub to insert after
        let mut seg_start = if v == v0 || v == v1 { NIL } else { up };
        let mut seg: Vec<u32> = Vec::new();
        let mut segments: Vec<(u32, Vec<u32>, Option<u32>)> = Vec::new();
        for &s in &seq {
            if st.kind[s as usize] == Kind::Special {
                segments.push((seg_start, std::mem::take(&mut seg), Some(s)));
                seg_start = s;
            } else {
                seg.push(s);
            }
        }
        segments.push((seg_start, seg, None));
        for (start, items, closer) in segments {
            let first_copy = (start != NIL && st.kind[start as usize] == Kind::Special)
                .then(|| st.special[start as usize].unwrap().2);
            let last_copy = closer.map(|c| st.special[c as usize].unwrap().3);
            let is_root = items.iter().any(|&s| st.kind[s as usize] == Kind::Base);
            let children: Vec<u32> = items.iter().copied().filter(|&s| st.kind[s as usize] == Kind::Down).collect();
            if is_root {
                let want = if v == v0 { (Color::Zero, false) } else { (Color::One, false) };
                if !children.is_empty() || first_copy.is_some_and(|c| c != want) || last_copy.is_some_and(|c| c != want) {
                    return Err(bad(format!("root sector of vertex {v} is not uniform")));
                }
                continue;
            }
            let first_ok = matches!(first_copy, None | Some((Color::Zero, false)) | Some((Color::One, true)));
            let last_ok = matches!(last_copy, None | Some((Color::Zero, true)) | Some((Color::One, false)));
            if !first_ok || !last_ok {
                return Err(bad(format!("sector pattern broken at vertex {v}")));
            }
            let need_out1 = first_copy != Some((Color::One, true));
            let need_out0 = last_copy != Some((Color::Zero, true));
            // at v0 the sector opened by the root face starts with the edge to v2
            let anchor = if start == NIL { items[0] } else { start };
            if let (Some(&fc), Some(&lc)) = (children.first(), children.last()) {
                if need_out1 {
                    let o = st.add(v, Kind::Out1);
                    st.insert_before(fc, o);
                }
                if need_out0 {
                    let o = st.add(v, Kind::Out0);
                    st.insert_after(lc, o);
                    out0_count += 1;
                }
            } else {
                let mut at = anchor;
                if need_out1 {
                    let o = st.add(v, Kind::Out1);
                    st.insert_after(at, o);
                    at = o;
                }
                if need_out0 {
                    let o = st.add(v, Kind::Out0);
                    st.insert_after(at, o);
                    out0_count += 1;
                }
            }
        }
    }

    // (4) ingoing color-1 brins from the factorization of W'
    let g2_steps = 2 * (n - 1 + 2 * g);
    let mut out0_order = Vec::with_capacity(out0_count);
    let end = st.g2_walk(theta, g2_steps, &mut |y| {
        if st.kind[y as usize] == Kind::Out0 {
            out0_order.push(y);
        }
    })?;
    if end != last || out0_order.len() != out0_count {
        return Err(bad("cut-graph walk does not cover the outgoing color-0 brins"));
    }
    let zeros = code.wp.iter().filter(|&&b| !b).count();
    if zeros != out0_count {
        return Err(CodecError::LengthMismatch(format!("W' has {zeros} zeros for {out0_count} outgoing color-0 brins")));
    }
    let mut run = 0usize;
    let mut k = 0usize;
    for &bit in &code.wp {
        if bit {
            run += 1;
        } else {
            for _ in 0..run {
                let s = st.add(st.vertex[out0_order[k] as usize] as usize, Kind::In1);
                st.insert_after(out0_order[k], s);
            }
            run = 0;
            k += 1;
        }
    }
    for _ in 0..run {
        let s = st.add(v1, Kind::In1);
        st.insert_after(base_opp, s);
    }

    // (5) color-1 edges by parenthesis matching along the walk
    let mut open: Vec<u32> = Vec::new();
    let mut unmatched = false;
    let mut pairs = Vec::new();
    st.g2_walk(theta, g2_steps, &mut |y| match st.kind[y as usize] {
        Kind::Out1 => open.push(y),
        Kind::In1 => match open.pop() {
            Some(o) => pairs.push((o, y)),
            None => unmatched = true,
        },
        _ => {}
    })?;
    if unmatched || !open.is_empty() {
        return Err(CodecError::UnmatchedColor1);
    }
    for (o, i) in pairs {
        if st.vertex[o as usize] == st.vertex[i as usize] {
            return Err(bad("color-1 edge would be a loop"));
        }
        st.link(o, i);
    }

    // (6) color-0 edges: each face of the map without them is fanned from the
    // corner whose clockwise edge is outgoing color 1
    let total = st.vertex.len();
    let skip_out0 = |st: &Stubs, s: u32| -> u32 {
        let mut y = st.next[s as usize];
        let mut guard = 0;
        while st.kind[y as usize] == Kind::Out0 && guard <= total {
            y = st.next[y as usize];
            guard += 1;
        }
        y
    };
    let out1_like = |st: &Stubs, s: u32| -> bool {
        match st.kind[s as usize] {
            Kind::Out1 => true,
            Kind::Base => st.vertex[s as usize] as usize == v0,
            Kind::Special => st.special[s as usize].is_some_and(|x| x.3 == (Color::One, true)),
            _ => false,
        }
    };
    let mut seen = vec![false; total];
    let mut fans: Vec<(u32, Vec<u32>)> = Vec::new();
    for s0 in 0..total as u32 {
        if seen[s0 as usize] || st.kind[s0 as usize] == Kind::Out0 {
            continue;
        }
        let mut corners = Vec::new();
        let mut s = s0;
        while !seen[s as usize] {
            seen[s as usize] = true;
            corners.push(s);
            let f = skip_out0(&st, s);
            s = st.partner[f as usize];
            if s == NIL || corners.len() > total {
                return Err(bad("open face while completing color-0 edges"));
            }
        }
        if s != s0 {
            return Err(bad("inconsistent face walk"));
        }
        let stubs_in = |st: &Stubs, h: u32| -> Vec<u32> {
            let mut out = Vec::new();
            let mut y = st.next[h as usize];
            while st.kind[y as usize] == Kind::Out0 && out.len() <= total {
                out.push(y);
                y = st.next[y as usize];
            }
            out
        };
        let count: usize = corners.iter().map(|&h| stubs_in(&st, h).len()).sum();
        if corners.contains(&theta) {
            if corners.len() != 3 || count != 0 {
                return Err(bad("root face is not a triangle"));
            }
            continue;
        }
        if count == 0 {
            if corners.len() != 3 {
                return Err(bad("face without color-0 stubs is not a triangle"));
            }
            continue;
        }
        let apex: Vec<usize> = (0..corners.len()).filter(|&i| out1_like(&st, skip_out0(&st, corners[i]))).collect();
        if apex.len() != 1 {
            return Err(bad(format!("face has {} candidate apex corners", apex.len())));
        }
        let z = apex[0];
        if !stubs_in(&st, corners[z]).is_empty() {
            return Err(bad("color-0 edge would be a loop"));
        }
        let mut order = Vec::with_capacity(count);
        for j in 1..corners.len() {
            order.extend(stubs_in(&st, corners[(z + j) % corners.len()]));
        }
        fans.push((corners[z], order));
    }
    for (h, order) in fans {
        let z = st.vertex[h as usize] as usize;
        for p in order {
            let q = st.add(z, Kind::In0);
            st.insert_after(h, q);
            st.link(p, q);
        }
    }

    // assemble the map: edge 0 is {v0, v1} with brin 0 at v0
    let total = st.vertex.len();
    let mut brin_of = vec![NIL; total];
    brin_of[base as usize] = 0;
    brin_of[base_opp as usize] = 1;
    let mut next_edge = 1u32;
    for s in 0..total {
        if brin_of[s] != NIL {
            continue;
        }
        let p = st.partner[s];
        if p == NIL {
            return Err(bad("unmatched outgoing brin"));
        }
        brin_of[s] = 2 * next_edge;
        brin_of[p as usize] = 2 * next_edge + 1;
        next_edge += 1;
    }
    let mut origin = vec![0u32; total];
    let mut follower = vec![0u32; total];
    for s in 0..total {
        let b = brin_of[s] as usize;
        origin[b] = st.vertex[s];
        follower[b] = brin_of[st.next[s] as usize];
    }
    let map = Map::from_rotation(n, origin, follower).map_err(|e| bad(e.to_string()))?;
    let check = map.validate_triangulation();
    if !check.is_triangulation {
        return Err(bad(format!("result is not a simple triangulation ({} violations)", check.violations.len())));
    }
    if map.genus().ok() != Some(g) {
        return Err(bad("result has the wrong genus"));
    }
    let theta_brin = BrinId(brin_of[theta as usize]);
    let mut wood = GSchnyderWood::unlabeled(&map, map.face(theta_brin));
    if wood.root.v != [v0, v1, v2] || wood.root.theta != theta_brin {
        return Err(bad("root face vertices out of order"));
    }
    for s in 0..total {
        let b = BrinId(brin_of[s]);
        let e = b.edge();
        let outer = matches!(wood.roles[e], EdgeRole::Outer);
        let label = |color| Some(EdgeLabel { color, out: b });
        let role = match st.kind[s] {
            Kind::Up if !outer => EdgeRole::Normal(label(Color::Two)),
            Kind::Out1 => EdgeRole::Normal(label(Color::One)),
            Kind::Out0 => EdgeRole::Normal(label(Color::Zero)),
            Kind::Special => {
                let (i, is_a, after, _) = st.special[s].unwrap();
                if !is_a {
                    continue;
                }
                let [la, lb] = side_views(code.specials[i].flags).expect("checked above");
                let mut sides = [None, None];
                sides[b.index() & 1] = Some(EdgeLabel { color: after.0, out: if la.1 { b } else { b.opposite() } });
                let ob = b.opposite();
                sides[ob.index() & 1] = Some(EdgeLabel { color: lb.0, out: if lb.1 { ob } else { b } });
                EdgeRole::Special(sides)
            }
            _ => continue,
        };
        if outer {
            return Err(bad(format!("outer edge {e} received a label")));
        }
        wood.roles[e] = role;
    }
    Ok((map, wood))
}

// ---------------------------------------------------------------- bytes

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn push_bits(out: &mut Vec<u8>, bits: &[bool]) {
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b as u8) << (7 - i);
        }
        out.push(byte);
    }
}

pub fn serialize(code: &CodeWords) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + code.w.len() / 4);
    out.extend_from_slice(MAGIC);
    push_varint(&mut out, code.n as u64);
    push_varint(&mut out, code.g as u64);
    push_bits(&mut out, &code.w);
    for r in &code.specials {
        for x in [r.corner_a, r.rank_a, r.corner_b, r.rank_b] {
            push_varint(&mut out, x);
        }
        out.push(r.flags);
    }
    push_bits(&mut out, &code.wp);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn byte(&mut self) -> Result<u8, CodecError> {
        let b = *self.bytes.get(self.pos).ok_or(CodecError::TruncatedStream)?;
        self.pos += 1;
        Ok(b)
    }

    fn varint(&mut self) -> Result<u64, CodecError> {
        let mut x = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            let part = (b & 0x7f) as u64;
            if shift == 63 && part > 1 {
                return Err(CodecError::LengthMismatch("varint overflows 64 bits".into()));
            }
            x |= part << shift;
            if b & 0x80 == 0 {
                // overlong forms would give one value several encodings
                if b == 0 && shift > 0 {
                    return Err(CodecError::LengthMismatch("overlong varint".into()));
                }
                return Ok(x);
            }
        }
        Err(CodecError::LengthMismatch("varint longer than 10 bytes".into()))
    }

    fn bits(&mut self, count: usize) -> Result<Vec<bool>, CodecError> {
        let nbytes = count.div_ceil(8);
        if self.bytes.len() - self.pos < nbytes {
            return Err(CodecError::TruncatedStream);
        }
        let chunk = &self.bytes[self.pos..self.pos + nbytes];
        self.pos += nbytes;
        let bits: Vec<bool> = (0..count).map(|i| chunk[i / 8] >> (7 - i % 8) & 1 == 1).collect();
        if count % 8 != 0 && chunk[nbytes - 1] & (0xff >> (count % 8)) != 0 {
            return Err(CodecError::LengthMismatch("nonzero padding bits".into()));
        }
        Ok(bits)
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<CodeWords, CodecError> {
    if bytes.len() < 4 {
        return Err(if MAGIC.starts_with(bytes) { CodecError::TruncatedStream } else { CodecError::BadMagic });
    }
    if &bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    let mut r = Reader { bytes, pos: 4 };
    let n = r.varint()?;
    let g = r.varint()?;
    if n < 4 {
        return Err(CodecError::LengthMismatch(format!("n = {n} is below 4")));
    }
    // every field is at least a bit per unit, so anything larger cannot fit
    let budget = 8 * bytes.len() as u64;
    if n > budget || g > budget {
        return Err(CodecError::TruncatedStream);
    }
    let (n, g) = (n as usize, g as usize);
    let w = r.bits(2 * n - 2)?;
    let mut specials = Vec::with_capacity((2 * g).min(bytes.len()));
    for _ in 0..2 * g {
        let corner_a = r.varint()?;
        let rank_a = r.varint()?;
        let corner_b = r.varint()?;
        let rank_b = r.varint()?;
        let flags = r.byte()?;
        specials.push(SpecialRecord { corner_a, rank_a, corner_b, rank_b, flags });
    }
    let wp = r.bits(2 * n - 6 + 4 * g)?;
    if r.pos != bytes.len() {
        return Err(CodecError::LengthMismatch(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(CodeWords { n, g, w, specials, wp })
}

pub fn stats(code: &CodeWords) -> CodeStats {
    let total_bits = 8 * serialize(code).len();
    let special_bits = code
        .specials
        .iter()
        .map(|r| {
            let mut v = Vec::new();
            for x in [r.corner_a, r.rank_a, r.corner_b, r.rank_b] {
                push_varint(&mut v, x);
            }
            8 * (v.len() + 1)
        })
        .sum();
    CodeStats {
        n: code.n,
        g: code.g,
        w_bits: code.w.len(),
        special_bits,
        wp_bits: code.wp.len(),
        total_bits,
        bits_per_vertex: total_bits as f64 / code.n as f64,
    }
}

/// Rooted code of a map with its wood labels, rooted at the corner `theta`.
/// Equal codes mean an isomorphism carrying one wood onto the other.
pub fn labeled_code(map: &Map, wood: &GSchnyderWood) -> Vec<u64> {
    let view = |l: Option<EdgeLabel>, b: BrinId| -> u64 {
        l.map_or(7, |l| 2 * l.color.index() as u64 + (l.out == b) as u64)
    };
    crate::canon::rooted_code(map, wood.root.theta, |b| {
        let kind = match wood.roles[b.edge()] {
            EdgeRole::Outer => 0,
            EdgeRole::Normal(_) => 1,
            EdgeRole::Special(_) => 2,
        };
        kind * 64 + view(wood.side_label(b), b) * 8 + view(wood.side_label(b.opposite()), b)
    })
}
