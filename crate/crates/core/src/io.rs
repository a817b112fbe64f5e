//! Text formats: OFF and `.tri` meshes, `.gsw` woods, DOT export.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::ParseError;
use crate::map::{BrinId, Map, VertexId};
use crate::wood::{Color, EdgeLabel, EdgeRole, GSchnyderWood, Root};

/// Non-empty lines with comments (`#`) stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = l.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a number, got {tok:?}")))
}

fn build(n: usize, faces: &[[VertexId; 3]]) -> Result<Map, ParseError> {
    // every vertex lies on some face, so larger counts are bogus
    if n > 3 * faces.len() {
        return Err(ParseError::Map(crate::error::MapError::IsolatedVertex(3 * faces.len())));
    }
    Ok(Map::from_triangles(n, faces)?)
}

/// Face-list format: `n f`, then `f` lines of three vertex ids.
pub fn parse_tri(text: &str) -> Result<Map, ParseError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    if head.len() != 2 {
        return Err(syntax(ln, "header must be `n f`"));
    }
    let n: usize = num(ln, head[0])?;
    let f: usize = num(ln, head[1])?;
    let mut faces = Vec::new();
    for (ln, tokens) in lines {
        if tokens.len() != 3 {
            return Err(syntax(ln, "face line needs exactly 3 vertex ids"));
        }
        faces.push([num(ln, tokens[0])?, num(ln, tokens[1])?, num(ln, tokens[2])?]);
        if faces.len() > f {
            return Err(syntax(ln, format!("more than {f} faces")));
        }
    }
    if faces.len() != f {
        return Err(ParseError::UnexpectedEof);
    }
    build(n, &faces)
}

/// OFF mesh; coordinates are skipped, faces must be triangles.
pub fn parse_off(text: &str) -> Result<Map, ParseError> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    if first[0] != "OFF" {
        return Err(syntax(ln, "missing OFF header"));
    }
    let counts: Vec<&str> = if first.len() > 1 {
        first[1..].to_vec()
    } else {
        lines.next().ok_or(ParseError::UnexpectedEof)?.1
    };
    if counts.len() < 2 {
        return Err(syntax(ln, "counts line needs vertex and face counts"));
    }
    let n: usize = num(ln, counts[0])?;
    let f: usize = num(ln, counts[1])?;
    for _ in 0..n {
        lines.next().ok_or(ParseError::UnexpectedEof)?;
    }
    let mut faces = Vec::new();
    for _ in 0..f {
        let (ln, t) = lines.next().ok_or(ParseError::UnexpectedEof)?;
        let k: usize = num(ln, t[0])?;
        if k != 3 || t.len() < 4 {
            return Err(syntax(ln, "only triangular faces are supported"));
        }
        faces.push([num(ln, t[1])?, num(ln, t[2])?, num(ln, t[3])?]);
    }
    build(n, &faces)
}

/// Reads a mesh, picking the parser from the extension (`.off` or `.tri`).
pub fn read_mesh(path: &Path) -> Result<Map, ParseError> {
    let text = std::fs::read_to_string(path)?;
    let is_off = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("off"));
    if is_off {
        parse_off(&text)
    } else {
        parse_tri(&text)
    }
}

pub fn write_tri(map: &Map) -> String {
    tri_text(map.vertex_count(), &face_triples(map))
}

/// Face triples with the root face first, arranged so that a re-read mesh has
/// brin 1 as the lowest root-face brin and keeps the same root labeling.
fn rooted_triples(map: &Map, root: &Root) -> Vec<[VertexId; 3]> {
    let mut faces = face_triples(map);
    faces.swap(0, root.face);
    // the first side v1 -> v0 puts brin 1 at v0
    let t = &mut faces[0];
    while t[0] != root.v[1] {
        t.rotate_left(1);
    }
    faces
}

fn tri_text(n: usize, faces: &[[VertexId; 3]]) -> String {
    let mut s = format!("{n} {}\n", faces.len());
    for [a, b, c] in faces {
        let _ = writeln!(s, "{a} {b} {c}");
    }
    s
}

fn off_text(n: usize, edges: usize, faces: &[[VertexId; 3]]) -> String {
    let mut s = format!("OFF\n{n} {} {edges}\n", faces.len());
    for _ in 0..n {
        s.push_str("0 0 0\n");
    }
    for [a, b, c] in faces {
        let _ = writeln!(s, "3 {a} {b} {c}");
    }
    s
}

pub fn write_tri_rooted(map: &Map, root: &Root) -> String {
    tri_text(map.vertex_count(), &rooted_triples(map, root))
}

pub fn write_off_rooted(map: &Map, root: &Root) -> String {
    off_text(map.vertex_count(), map.edge_count(), &rooted_triples(map, root))
}

pub fn write_off(map: &Map) -> String {
    off_text(map.vertex_count(), map.edge_count(), &face_triples(map))
}

/// Face triples in the orientation accepted by `Map::from_triangles`.
fn face_triples(map: &Map) -> Vec<[VertexId; 3]> {
    map.triangles().expect("export needs a triangulation")
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Zero => "red",
        Color::One => "blue",
        Color::Two => "darkgreen",
    }
}

/// DOT graph; with a wood, labeled edges become colored arcs and special edges
/// are drawn once per side.
pub fn to_dot(map: &Map, wood: Option<&GSchnyderWood>) -> String {
    let mut s = String::from("digraph map {\n  node [shape=circle];\n");
    if let Some(w) = wood {
        for (i, v) in w.root.v.iter().enumerate() {
            let _ = writeln!(s, "  {v} [label=\"{v} (v{i})\", style=filled];");
        }
    }
    for e in 0..map.edge_count() {
        let b = BrinId::of_edge(e, 0);
        let (u, v) = (map.origin(b), map.target(b));
        let role = wood.map(|w| w.roles[e]);
        let arc = |s: &mut String, l: EdgeLabel, extra: &str| {
            let _ = writeln!(
                s,
                "  {} -> {} [color={}, label=\"{e}\"{extra}];",
                map.origin(l.out),
                map.target(l.out),
                color_name(l.color)
            );
        };
        match role {
            None | Some(EdgeRole::Outer) | Some(EdgeRole::Normal(None)) => {
                let _ = writeln!(s, "  {u} -> {v} [dir=none, label=\"{e}\"];");
            }
            Some(EdgeRole::Normal(Some(l))) => arc(&mut s, l, ""),
            Some(EdgeRole::Special(sides)) => {
                for l in sides.iter().flatten() {
                    arc(&mut s, *l, ", style=bold");
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn write_gsw(map: &Map, wood: &GSchnyderWood) -> String {
    let g = map.genus().unwrap_or(0);
    let mut s = format!("GSW {} {} {}\n", map.vertex_count(), g, wood.root.face);
    for (e, role) in wood.roles.iter().enumerate() {
        match role {
            EdgeRole::Outer | EdgeRole::Normal(None) => {}
            EdgeRole::Normal(Some(l)) => {
                let _ = writeln!(s, "edge {e} color {} out {}", l.color, l.out);
            }
            EdgeRole::Special(sides) => {
                let _ = write!(s, "special {e}");
                for (k, l) in sides.iter().enumerate() {
                    let side = BrinId::of_edge(e, k);
                    match l {
                        Some(l) => {
                            let _ = write!(s, " side {side} color {} out {}", l.color, l.out);
                        }
                        None => {
                            let _ = write!(s, " side {side} color - out -");
                        }
                    }
                }
                s.push('\n');
            }
        }
    }
    s
}

fn parse_label(ln: usize, map: &Map, e: usize, color: &str, out: &str) -> Result<Option<EdgeLabel>, ParseError> {
    if color == "-" && out == "-" {
        return Ok(None);
    }
    let c: usize = num(ln, color)?;
    let color = Color::from_index(c).ok_or_else(|| syntax(ln, format!("bad color {c}")))?;
    let out: u32 = num(ln, out)?;
    if out as usize >= map.brin_count() || BrinId(out).edge() != e {
        return Err(syntax(ln, format!("brin {out} is not a brin of edge {e}")));
    }
    Ok(Some(EdgeLabel { color, out: BrinId(out) }))
}

/// Parses a `.gsw` wood for `map`.
pub fn parse_gsw(map: &Map, text: &str) -> Result<GSchnyderWood, ParseError> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or(ParseError::UnexpectedEof)?;
    if head.len() != 4 || head[0] != "GSW" {
        return Err(syntax(ln, "header must be `GSW <n> <g> <root-face>`"));
    }
    let n: usize = num(ln, head[1])?;
    let g: usize = num(ln, head[2])?;
    let root_face: usize = num(ln, head[3])?;
    if n != map.vertex_count() || Some(g) != map.genus().ok() {
        return Err(syntax(ln, "vertex count or genus does not match the mesh"));
    }
    if root_face >= map.face_count() {
        return Err(syntax(ln, format!("root face {root_face} out of range")));
    }
    let mut wood = GSchnyderWood::unlabeled(map, root_face);
    let mut seen = vec![false; map.edge_count()];
    for (ln, t) in lines {
        let e: usize = match t.get(1) {
            Some(tok) => num(ln, tok)?,
            None => return Err(syntax(ln, "missing edge id")),
        };
        if e >= map.edge_count() {
            return Err(syntax(ln, format!("edge {e} out of range")));
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(syntax(ln, format!("edge {e} listed twice")));
        }
        if matches!(wood.roles[e], EdgeRole::Outer) {
            return Err(syntax(ln, format!("edge {e} is on the root face")));
        }
        match t[0] {
            "edge" => {
                if t.len() != 6 || t[2] != "color" || t[4] != "out" {
                    return Err(syntax(ln, "expected `edge <id> color <c> out <brin>`"));
                }
                wood.roles[e] = EdgeRole::Normal(parse_label(ln, map, e, t[3], t[5])?);
            }
            "special" => {
                if t.len() != 14 {
                    return Err(syntax(ln, "special line needs two `side <brin> color <c> out <brin>` groups"));
                }
                let mut sides = [None, None];
                let mut filled = [false, false];
                for group in [&t[2..8], &t[8..14]] {
                    if group[0] != "side" || group[2] != "color" || group[4] != "out" {
                        return Err(syntax(ln, "expected `side <brin> color <c> out <brin>`"));
                    }
                    let side: u32 = num(ln, group[1])?;
                    if side as usize >= map.brin_count() || BrinId(side).edge() != e {
                        return Err(syntax(ln, format!("side brin {side} is not a brin of edge {e}")));
                    }
                    let k = side as usize & 1;
                    if std::mem::replace(&mut filled[k], true) {
                        return Err(syntax(ln, "the same side given twice"));
                    }
                    sides[k] = parse_label(ln, map, e, group[3], group[5])?;
                }
                wood.roles[e] = EdgeRole::Special(sides);
            }
            other => return Err(syntax(ln, format!("unknown record {other:?}"))),
        }
    }
    Ok(wood)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::find_isomorphism;

    const TETRA: &str = "4 4\n0 1 2\n0 2 3\n0 3 1\n1 3 2\n";

    #[test]
    fn rooted_tri_keeps_root_labels() {
        let m = crate::generators::grid_torus(3, 4).unwrap();
        for f in 0..m.face_count() {
            let root = Root::new(&m, f);
            let again = parse_tri(&write_tri_rooted(&m, &root)).unwrap();
            assert_eq!(Root::new(&again, again.face(BrinId(1))).v, root.v, "root face {f}");
            let again = parse_off(&write_off_rooted(&m, &root)).unwrap();
            assert_eq!(Root::new(&again, again.face(BrinId(1))).v, root.v, "root face {f}");
        }
    }

    #[test]
    fn tri_roundtrip() {
        let m = parse_tri(TETRA).unwrap();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (4, 6, 4));
        let again = parse_tri(&write_tri(&m)).unwrap();
        assert!(find_isomorphism(&m, &again).is_some());
    }

    #[test]
    fn off_parses_and_matches_tri() {
        let off = "OFF\n# comment\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 2 3\n3 0 3 1\n3 1 3 2\n";
        let m = parse_off(off).unwrap();
        assert!(find_isomorphism(&m, &parse_tri(TETRA).unwrap()).is_some());
        let again = parse_off(&write_off(&m)).unwrap();
        assert!(find_isomorphism(&m, &again).is_some());
    }

    #[test]
    fn rejects_quads_and_truncation() {
        assert!(parse_off("OFF\n4 1 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n4 0 1 2 3\n").is_err());
        assert!(matches!(parse_tri("4 4\n0 1 2\n"), Err(ParseError::UnexpectedEof)));
        assert!(parse_tri("").is_err());
        assert!(parse_tri("1000000000000 1\n0 1 2\n").is_err());
    }

    #[test]
    fn duplicate_face_is_non_orientable() {
        let err = parse_tri("3 2\n0 1 2\n0 1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Map(crate::error::MapError::NonOrientable { .. })));
    }

    #[test]
    fn gsw_rejects_foreign_brins() {
        let m = parse_tri(TETRA).unwrap();
        let w = GSchnyderWood::unlabeled(&m, 0);
        let inner = (0..6).find(|&e| !matches!(w.roles[e], EdgeRole::Outer)).unwrap();
        let bad = format!("GSW 4 0 0\nedge {inner} color 1 out {}\n", 2 * ((inner + 1) % 6));
        assert!(parse_gsw(&m, &bad).is_err());
        let good = format!("GSW 4 0 0\nedge {inner} color 1 out {}\n", 2 * inner + 1);
        let parsed = parse_gsw(&m, &good).unwrap();
        assert_eq!(parsed.roles[inner], EdgeRole::Normal(Some(EdgeLabel { color: Color::One, out: BrinId(2 * inner as u32 + 1) })));
    }
}
