use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gschnyder::codec::{self, labeled_code};
use gschnyder::generators::GenSpec;
use gschnyder::io::{
    parse_gsw, read_mesh, to_dot, write_gsw, write_off, write_off_rooted, write_tri, write_tri_rooted,
};
use gschnyder::wood::{self, EdgeLabel, EdgeRole};
use gschnyder::{compute_schnyder, BrinId, GSchnyderWood, Map, TraversalOptions};

#[derive(Parser)]
#[command(name = "gschnyder", version, about = "Schnyder woods and compact encodings for triangulations of any genus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Output file; standard output when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Overwrite an existing output file; for `encode`, also accept a wood
    /// read from a file
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a wood with the traversal and write it as .gsw
    Compute {
        mesh: PathBuf,
        #[arg(long, default_value_t = 0)]
        root_face: usize,
        /// Check the traversal invariants after every step (slow)
        #[arg(long)]
        check_invariants: bool,
        /// Print the operation log to standard error
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check a .gsw wood against its mesh
    Validate {
        wood: PathBuf,
        #[arg(long)]
        mesh: PathBuf,
    },
    /// Encode a mesh to .gsc
    Encode {
        mesh: PathBuf,
        #[arg(long, default_value_t = 0)]
        root_face: usize,
        /// Encode this wood instead of computing one (needs --force)
        #[arg(long)]
        wood: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Decode a .gsc stream to a mesh
    Decode {
        code: PathBuf,
        /// Also write the decoded wood
        #[arg(long)]
        wood: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MeshFormat::Tri)]
        format: MeshFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Encode, decode and compare; exit status 0 iff the result is isomorphic
    Roundtrip {
        mesh: PathBuf,
        #[arg(long, default_value_t = 0)]
        root_face: usize,
    },
    /// Generate a triangulation
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Vertex count for planar kinds
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        p: usize,
        #[arg(long, default_value_t = 6)]
        q: usize,
        /// Target genus for `handles`
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Subdivision rounds applied afterwards
        #[arg(long, default_value_t = 0)]
        rounds: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = MeshFormat::Tri)]
        format: MeshFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Length breakdown of a .gsc stream
    Stats { code: PathBuf },
    /// Write a mesh, optionally with a wood, as DOT
    ExportDot {
        mesh: PathBuf,
        #[arg(long)]
        wood: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Timing table
    Bench {
        #[arg(long, value_enum, default_value_t = BenchKind::RefineScaling)]
        kind: BenchKind,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4])]
        genus: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        max_rounds: usize,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshFormat {
    Tri,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Planar,
    Stacked,
    Torus,
    Handles,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKind {
    RefineScaling,
}

/// A failure of the input itself (invalid wood, failed round-trip, corrupt
/// stream), as opposed to a usage or I/O error.
#[derive(Debug)]
struct Domain(String);

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Domain {}

fn domain(e: impl std::fmt::Display) -> anyhow::Error {
    Domain(e.to_string()).into()
}

fn seed_or_env(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("GSCHNYDER_SEED") {
        Ok(v) => v.trim().parse().with_context(|| format!("GSCHNYDER_SEED={v} is not an integer")),
        Err(_) => Ok(0),
    }
}

fn load(path: &Path) -> Result<Map> {
    read_mesh(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Output, data: &[u8]) -> Result<()> {
    match &out.output {
        Some(p) => {
            if p.exists() && !out.force {
                bail!("{} exists; pass --force to overwrite", p.display());
            }
            fs::write(p, data).with_context(|| format!("writing {}", p.display()))
        }
        None => std::io::stdout().write_all(data).context("writing to standard output"),
    }
}

fn traverse(map: &Map, root_face: usize, check: bool) -> Result<(GSchnyderWood, gschnyder::TraversalLog)> {
    if root_face >= map.face_count() {
        bail!("root face {root_face} out of range (the mesh has {} faces)", map.face_count());
    }
    compute_schnyder(map, root_face, TraversalOptions { check_invariants: check }).map_err(domain)
}

/// Moves a wood onto an equal map with different edge numbering, matching
/// brins by their endpoints.
fn transfer(map: &Map, wood: &GSchnyderWood, target: &Map) -> Result<GSchnyderWood> {
    let image = |b: BrinId| {
        target
            .find_brin(map.origin(b), map.target(b))
            .ok_or_else(|| anyhow::anyhow!("re-read mesh lost an edge"))
    };
    let mut out = GSchnyderWood::unlabeled(target, target.face(image(wood.root.theta)?));
    if out.root.v != wood.root.v {
        bail!("re-read mesh labels the root face differently");
    }
    let moved = |l: Option<EdgeLabel>| -> Result<Option<EdgeLabel>> {
        l.map(|l| Ok(EdgeLabel { color: l.color, out: image(l.out)? })).transpose()
    };
    for (e, role) in wood.roles.iter().enumerate() {
        let b = BrinId::of_edge(e, 0);
        let nb = image(b)?;
        out.roles[nb.edge()] = match *role {
            EdgeRole::Outer => continue,
            EdgeRole::Normal(l) => EdgeRole::Normal(moved(l)?),
            EdgeRole::Special(_) => {
                let mut sides = [None, None];
                for side in [b, b.opposite()] {
                    let ns = image(side)?;
                    sides[ns.index() & 1] = moved(wood.side_label(side))?;
                }
                EdgeRole::Special(sides)
            }
        };
    }
    Ok(out)
}

fn mesh_text(map: &Map, format: MeshFormat) -> String {
    match format {
        MeshFormat::Tri => write_tri(map),
        MeshFormat::Off => write_off(map),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { mesh, root_face, check_invariants, log, out } => {
            let map = load(&mesh)?;
            let (wood, ops) = traverse(&map, root_face, check_invariants)?;
            if log {
                eprint!("{ops}");
            }
            eprintln!(
                "n={} g={} conquests={} merges={} splits={}",
                map.vertex_count(),
                map.genus().map_err(domain)?,
                ops.conquests(),
                ops.merges(),
                ops.splits()
            );
            emit(&out, write_gsw(&map, &wood).as_bytes())
        }
        Command::Validate { wood, mesh } => {
            let map = load(&mesh)?;
            let text = fs::read_to_string(&wood).with_context(|| format!("reading {}", wood.display()))?;
            let w = parse_gsw(&map, &text).with_context(|| format!("parsing {}", wood.display()))?;
            let report = wood::validate(&map, &w);
            println!("{report}");
            if !report.pass() {
                return Err(domain("wood is not valid"));
            }
            Ok(())
        }
        Command::Encode { mesh, root_face, wood, out } => {
            let map = load(&mesh)?;
            let wood = match wood {
                Some(path) => {
                    if !out.force {
                        bail!("only woods computed by the traversal are encoded; pass --force to try {}", path.display());
                    }
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    // the encoder still checks the color-1 order along the way
                    parse_gsw(&map, &text).with_context(|| format!("parsing {}", path.display()))?
                }
                None => traverse(&map, root_face, false)?.0,
            };
            let code = codec::encode(&map, &wood).map_err(domain)?;
            emit(&out, &codec::serialize(&code))
        }
        Command::Decode { code, wood, format, out } => {
            let bytes = fs::read(&code).with_context(|| format!("reading {}", code.display()))?;
            let words = codec::deserialize(&bytes).map_err(domain)?;
            let (map, w) = codec::decode(&words).map_err(domain)?;
            let text = match format {
                MeshFormat::Tri => write_tri_rooted(&map, &w.root),
                MeshFormat::Off => write_off_rooted(&map, &w.root),
            };
            emit(&out, text.as_bytes())?;
            if let Some(path) = wood {
                // edge ids of the written mesh are those of a fresh parse
                let reread = match format {
                    MeshFormat::Tri => gschnyder::io::parse_tri(&text),
                    MeshFormat::Off => gschnyder::io::parse_off(&text),
                }?;
                let moved = transfer(&map, &w, &reread)?;
                emit(&Output { output: Some(path), force: out.force }, write_gsw(&reread, &moved).as_bytes())?;
            }
            Ok(())
        }
        Command::Roundtrip { mesh, root_face } => {
            let map = load(&mesh)?;
            let (wood, _) = traverse(&map, root_face, false)?;
            let code = codec::encode(&map, &wood).map_err(domain)?;
            let bytes = codec::serialize(&code);
            let (m2, w2) = codec::deserialize(&bytes).and_then(|c| codec::decode(&c)).map_err(domain)?;
            if labeled_code(&map, &wood) != labeled_code(&m2, &w2) {
                return Err(domain("decoded map or wood differs from the input"));
            }
            eprintln!("ok: {} bits for n={} ({:.3} bits/vertex)", 8 * bytes.len(), code.n, 8.0 * bytes.len() as f64 / code.n as f64);
            Ok(())
        }
        Command::Gen { kind, n, p, q, genus, rounds, seed, format, out } => {
            let seed = seed_or_env(seed)?;
            let mut spec = match kind {
                GenKind::Planar => GenSpec::PlanarRandom { n },
                GenKind::Stacked => GenSpec::PlanarStacked { n },
                GenKind::Torus => GenSpec::GridTorus { p, q },
                GenKind::Handles => {
                    if genus < 1 {
                        bail!("--genus must be at least 1 for `handles`");
                    }
                    GenSpec::HandleSum { base: Box::new(GenSpec::GridTorus { p, q }), handles: genus - 1 }
                }
            };
            if rounds > 0 {
                spec = GenSpec::Refine { base: Box::new(spec), rounds };
            }
            let map = spec.build(seed)?;
            emit(&out, mesh_text(&map, format).as_bytes())
        }
        Command::Stats { code } => {
            let bytes = fs::read(&code).with_context(|| format!("reading {}", code.display()))?;
            let words = codec::deserialize(&bytes).map_err(domain)?;
            let s = codec::stats(&words);
            println!("n\tg\tW\tspecials\tW'\ttotal\tbits/vertex");
            println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.4}",
                s.n, s.g, s.w_bits, s.special_bits, s.wp_bits, s.total_bits, s.bits_per_vertex
            );
            Ok(())
        }
        Command::ExportDot { mesh, wood, out } => {
            let map = load(&mesh)?;
            let w = match wood {
                Some(p) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    Some(parse_gsw(&map, &text).with_context(|| format!("parsing {}", p.display()))?)
                }
                None => None,
            };
            emit(&out, to_dot(&map, w.as_ref()).as_bytes())
        }
        Command::Bench { kind: BenchKind::RefineScaling, genus, max_rounds, runs, seed } => {
            let seed = seed_or_env(seed)?;
            if runs == 0 {
                bail!("--runs must be positive");
            }
            println!("n\tg\tseconds\tbits/vertex");
            for g in genus {
                if g == 0 {
                    bail!("refine-scaling needs genus >= 1");
                }
                let base = GenSpec::HandleSum { base: Box::new(GenSpec::GridTorus { p: 20, q: 20 }), handles: g - 1 };
                let base = base.build(seed)?;
                for rounds in 0..=max_rounds {
                    let map = if rounds == 0 { base.clone() } else { gschnyder::generators::refine(&base, rounds) };
                    let mut times: Vec<Duration> = Vec::with_capacity(runs);
                    let mut bits = 0;
                    for _ in 0..runs {
                        let t = Instant::now();
                        let (wood, _) = traverse(&map, 0, false)?;
                        let code = codec::encode(&map, &wood).map_err(domain)?;
                        codec::decode(&code).map_err(domain)?;
                        times.push(t.elapsed());
                        bits = codec::stats(&code).total_bits;
                    }
                    times.sort();
                    let n = map.vertex_count();
                    println!("{n}\t{g}\t{:.4}\t{:.4}", times[runs / 2].as_secs_f64(), bits as f64 / n as f64);
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Domain>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
