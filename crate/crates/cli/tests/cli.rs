use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gschnyder"))
}

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gschnyder-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn gschnyder")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn roundtrip_corpus_files() {
    for f in ["torus_3x3.tri", "tetrahedron.tri", "planar_40.tri", "genus2_5x5.tri", "genus3_6x6.off"] {
        let out = run(bin().args(["roundtrip", p(&corpus(f))]));
        assert_eq!(code(&out), 0, "{f}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn encode_decode_validate() {
    let dir = scratch("codec");
    let (gsc, tri, gsw) = (dir.join("m.gsc"), dir.join("m.tri"), dir.join("m.gsw"));
    let mesh = corpus("genus2_5x5.tri");
    assert_eq!(code(&run(bin().args(["encode", p(&mesh), "-o", p(&gsc)]))), 0);
    let out = run(bin().args(["decode", p(&gsc), "-o", p(&tri), "--wood", p(&gsw)]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(bin().args(["validate", p(&gsw), "--mesh", p(&tri)]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: pass"));

    let out = run(bin().args(["stats", p(&gsc)]));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "25");
    assert_eq!(row[1], "2");
    // |W| = 2n - 2 and |W'| = 2n - 6 + 4g
    assert_eq!(row[2], "48");
    assert_eq!(row[4], "52");
    assert_eq!(row[5].parse::<u64>().unwrap(), 8 * fs::metadata(&gsc).unwrap().len());

    // a wood from a file is encoded only on request, and then gives the same stream
    let wood = dir.join("w.gsw");
    let again = dir.join("again.gsc");
    assert_eq!(code(&run(bin().args(["compute", p(&mesh), "-o", p(&wood)]))), 0);
    assert_eq!(code(&run(bin().args(["encode", p(&mesh), "--wood", p(&wood), "-o", p(&again)]))), 2);
    assert_eq!(code(&run(bin().args(["encode", p(&mesh), "--wood", p(&wood), "-o", p(&again), "--force"]))), 0);
    assert_eq!(fs::read(&again).unwrap(), fs::read(&gsc).unwrap());

    // existing outputs are kept unless forced
    assert_eq!(code(&run(bin().args(["encode", p(&mesh), "-o", p(&gsc)]))), 2);
    assert_eq!(code(&run(bin().args(["encode", p(&mesh), "-o", p(&gsc), "--force"]))), 0);
}

#[test]
fn circular_color_two_is_rejected() {
    let dir = scratch("bad");
    let mesh = corpus("torus_3x3.tri");
    let good = dir.join("good.gsw");
    assert_eq!(code(&run(bin().args(["compute", p(&mesh), "-o", p(&good)]))), 0);
    // turning every color-1 edge into color 2 closes circuits in the color-2 graph
    let bad: String = fs::read_to_string(&good)
        .unwrap()
        .lines()
        .map(|l| if l.starts_with("edge") { l.replace("color 1", "color 2") } else { l.to_string() } + "\n")
        .collect();
    let bad_path = dir.join("bad.gsw");
    fs::write(&bad_path, bad).unwrap();
    let out = run(bin().args(["validate", p(&bad_path), "--mesh", p(&mesh)]));
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("cut_graph_condition: FAIL"));
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = scratch("codes");
    assert_eq!(code(&run(bin().args(["frobnicate"]))), 2);
    assert_eq!(code(&run(bin().args(["roundtrip", p(&dir.join("missing.tri"))]))), 2);
    let junk = dir.join("junk.gsc");
    fs::write(&junk, b"NOPE").unwrap();
    assert_eq!(code(&run(bin().args(["decode", p(&junk)]))), 1);
    let truncated = dir.join("short.gsc");
    fs::write(&truncated, b"GSC1\x09").unwrap();
    let out = run(bin().args(["stats", p(&truncated)]));
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));
    assert_eq!(code(&run(bin().args(["compute", p(&corpus("tetrahedron.tri")), "--root-face", "9"]))), 2);
}

#[test]
fn seed_from_environment() {
    let gen = |env: Option<&str>, extra: &[&str]| {
        let mut c = bin();
        c.args(["gen", "--kind", "planar", "--n", "30"]).args(extra);
        match env {
            Some(s) => c.env("GSCHNYDER_SEED", s),
            None => c.env_remove("GSCHNYDER_SEED"),
        };
        run(&mut c).stdout
    };
    assert_eq!(gen(Some("5"), &[]), gen(None, &["--seed", "5"]));
    assert_ne!(gen(Some("5"), &[]), gen(Some("6"), &[]));
    assert_eq!(gen(Some("6"), &["--seed", "5"]), gen(None, &["--seed", "5"]));
}

#[test]
fn dot_and_bench_output() {
    let dir = scratch("dot");
    let mesh = corpus("tetrahedron.tri");
    let wood = dir.join("t.gsw");
    assert_eq!(code(&run(bin().args(["compute", p(&mesh), "-o", p(&wood), "--check-invariants"]))), 0);
    let out = run(bin().args(["export-dot", p(&mesh), "--wood", p(&wood)]));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));

    let out = run(bin().args(["bench", "--genus", "1", "--max-rounds", "1", "--runs", "1"]));
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("n\tg\tseconds\tbits/vertex"));
}
