use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use graphgen_core::code::fixtures;
use graphgen_core::data::{parse_dataset, read_dataset};

fn graphgen(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphgen"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRAPHGEN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

#[test]
fn help_exists_for_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["dataset", "search", "run", "render", "eval"] {
        let out = graphgen(&[sub, "--help"], dir.path());
        assert!(ok(&out).contains("Usage"), "{sub}");
    }
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["search", "--bogus"][..], &["render", "x", "--nope"], &["frobnicate"]] {
        assert_eq!(graphgen(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dataset_grid_with_width_has_28_records_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&graphgen(&["dataset", "grid", "--with-width", "-o", "g.txt"], dir.path()));
    assert!(stdout.starts_with("28 records"));
    let ds = read_dataset(&dir.path().join("g.txt")).unwrap();
    assert_eq!(ds.len(), 28);
    assert!(dir.path().join("g.txt.split").exists());
    assert!(ds.records.iter().all(|r| r.aux.len() == 1));
}

#[test]
fn dataset_lobster_count_and_bad_bounds() {
    let dir = tempfile::tempdir().unwrap();
    ok(&graphgen(&["dataset", "lobster", "--count", "100", "-o", "l.txt"], dir.path()));
    assert_eq!(read_dataset(&dir.path().join("l.txt")).unwrap().len(), 100);
    let out = graphgen(&["dataset", "grid", "--min-side", "6", "--max-side", "4"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn dataset_default_path_uses_out_dir_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_graphgen"))
        .args(["dataset", "path", "--count", "4"])
        .current_dir(dir.path())
        .env("GRAPHGEN_OUT_DIR", dir.path().join("data"))
        .output()
        .unwrap();
    // The directory does not exist yet, so the write fails as an I/O error.
    assert_eq!(out.status.code(), Some(1));
    fs::create_dir(dir.path().join("data")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_graphgen"))
        .args(["dataset", "path", "--count", "4"])
        .current_dir(dir.path())
        .env("GRAPHGEN_OUT_DIR", dir.path().join("data"))
        .output()
        .unwrap();
    ok(&out);
    assert_eq!(read_dataset(&dir.path().join("data/path.txt")).unwrap().len(), 4);
}

#[test]
fn run_grid_with_width_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let prog = fixture("grid_with_width.prog");
    ok(&graphgen(
        &["run", prog.to_str().unwrap(), "-n", "12", "--aux", "3", "-o", "out.txt"],
        dir.path(),
    ));
    let recs = parse_dataset(&fs::read_to_string(dir.path().join("out.txt")).unwrap()).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].aux, vec![3]);
    let g = &recs[0].graph;
    assert_eq!(g.node_count(), 12);
    // int05 is never written, so the program links each i to i-1 and to
    // i-3: a path plus stride-3 edges, which includes the wrap edges
    // (2,3), (5,6), (8,9) that a 3 x 4 grid lacks.
    let mut expected: Vec<(usize, usize)> = (1..12).map(|k| (k - 1, k)).collect();
    expected.extend((3..12).map(|k| (k - 3, k)));
    expected.sort();
    let mut got = g.edges();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn run_empty_program_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.prog"), "graphgen-program 1\nmain\ncall\n").unwrap();
    let stdout = ok(&graphgen(&["run", "e.prog", "-n", "5"], dir.path()));
    assert_eq!(stdout, "g 5 0\n");
    assert_eq!(graphgen(&["run", "missing.prog", "-n", "5"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.prog"), "graphgen-program 1\nmain\n  FOO\ncall\n").unwrap();
    assert_eq!(graphgen(&["run", "bad.prog", "-n", "5"], dir.path()).status.code(), Some(2));
}

#[test]
fn render_transition_fixture_matches_listing() {
    let dir = tempfile::tempdir().unwrap();
    let prog = fixture("transition.prog");
    let first = ok(&graphgen(&["render", prog.to_str().unwrap()], dir.path()));
    let expected = "\
def main():
  for i in range(N):
def call():
  for j in range(i):
    int05 = i - j
    if bool01:
      pass
    bool01 = int05 == int03
    if bool01:
      int06 = i
      add_edge(j, int06)
    else:
      bool01 = int04 != 0
      if bool01:
        add_edge(i, j)
      int05 = 4
";
    assert_eq!(first, expected);
    assert_eq!(first, ok(&graphgen(&["render", prog.to_str().unwrap()], dir.path())));
}

#[test]
fn render_empty_program_prints_skeleton() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.prog"), "graphgen-program 1\nmain\ncall\n").unwrap();
    let out = ok(&graphgen(&["render", "e.prog"], dir.path()));
    assert_eq!(out, "def main():\n  for i in range(N):\ndef call():\n  for j in range(i):\n");
}

#[test]
fn eval_same_file_is_zero_and_families_differ() {
    let dir = tempfile::tempdir().unwrap();
    ok(&graphgen(&["dataset", "grid", "-o", "g.txt"], dir.path()));
    ok(&graphgen(&["dataset", "lobster", "--count", "40", "-o", "l.txt"], dir.path()));
    ok(&graphgen(&["eval", "g.txt", "g.txt", "--kv", "same.kv"], dir.path()));
    let same = graphgen_core::metrics::MetricReport::from_kv(&fs::read_to_string(dir.path().join("same.kv")).unwrap())
        .unwrap();
    assert!(same.values().iter().all(|(_, v)| v.abs() < 1e-12), "{same:?}");
    ok(&graphgen(&["eval", "g.txt", "l.txt", "--kv", "diff.kv"], dir.path()));
    let diff = graphgen_core::metrics::MetricReport::from_kv(&fs::read_to_string(dir.path().join("diff.kv")).unwrap())
        .unwrap();
    assert!(diff.degree_mmd > 0.0 && diff.spectral_mmd > 0.0, "{diff:?}");
    // Grids and lobsters are both triangle-free: every clustering
    // coefficient is 0, so the clustering statistic cannot tell them apart.
    assert_eq!(diff.clustering_mmd, 0.0);
    fs::write(dir.path().join("empty.txt"), "").unwrap();
    assert_eq!(graphgen(&["eval", "g.txt", "empty.txt"], dir.path()).status.code(), Some(2));
}

fn search_args<'a>(out: &'a str, gens: &'a str) -> Vec<&'a str> {
    vec![
        "search",
        "--builtin",
        "path",
        "--population-size",
        "24",
        "--elite-count",
        "2",
        "--batch-size",
        "4",
        "--seed",
        "5",
        "--max-generations",
        gens,
        "--out-dir",
        out,
        "-q",
    ]
}

#[test]
fn search_zero_generations_emits_empty_program() {
    let dir = tempfile::tempdir().unwrap();
    ok(&graphgen(&search_args("s", "0"), dir.path()));
    let best = fs::read_to_string(dir.path().join("s/best.prog")).unwrap();
    assert_eq!(best, "graphgen-program 1\nmain\ncall\n");
    let history = fs::read_to_string(dir.path().join("s/history.tsv")).unwrap();
    assert_eq!(history.lines().count(), 1);
    for f in ["best.py", "checkpoint.json", "config.toml"] {
        assert!(dir.path().join("s").join(f).exists(), "{f}");
    }
}

#[test]
fn search_is_deterministic_and_resume_matches_straight_run() {
    let dir = tempfile::tempdir().unwrap();
    ok(&graphgen(&search_args("a", "8"), dir.path()));
    ok(&graphgen(&search_args("b", "8"), dir.path()));
    let read = |p: &str| fs::read_to_string(dir.path().join(p)).unwrap();
    assert_eq!(read("a/best.prog"), read("b/best.prog"));
    assert_eq!(read("a/history.tsv"), read("b/history.tsv"));
    assert_eq!(read("a/history.tsv").lines().count(), 9);

    ok(&graphgen(&search_args("c", "3"), dir.path()));
    let mut resume = search_args("c", "8");
    resume.push("--resume");
    ok(&graphgen(&resume, dir.path()));
    assert_eq!(read("a/history.tsv"), read("c/history.tsv"));
    assert_eq!(read("a/best.prog"), read("c/best.prog"));

    // Thread count does not change results.
    let mut one = search_args("d", "8");
    one.extend(["--threads", "1"]);
    ok(&graphgen(&one, dir.path()));
    assert_eq!(read("a/history.tsv"), read("d/history.tsv"));
}

#[test]
fn search_config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "builtin = \"path\"\nout_dir = \"cfg\"\nextractor = \"degree_hist\"\n\n[search]\npopulation_size = 16\nelite_count = 2\nmax_generations = 2\nseed = 1\n",
    )
    .unwrap();
    ok(&graphgen(&["search", "-c", "run.toml", "--max-generations", "4", "-q"], dir.path()));
    let history = fs::read_to_string(dir.path().join("cfg/history.tsv")).unwrap();
    assert_eq!(history.lines().count(), 5);
    let resolved = fs::read_to_string(dir.path().join("cfg/config.toml")).unwrap();
    assert!(resolved.contains("max_generations = 4"));
    assert!(resolved.contains("population_size = 16"));
    assert!(resolved.contains("extractor = \"degree_hist\""));
}

#[test]
fn search_rejects_bad_config_and_mismatched_resume() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "builtin = \"path\"\nnonsense = 3\n").unwrap();
    assert_eq!(graphgen(&["search", "-c", "bad.toml"], dir.path()).status.code(), Some(2));
    let out = graphgen(&["search", "--builtin", "path", "--elite-count", "5000"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(graphgen(&["search", "--max-generations", "1"], dir.path()).status.code(), Some(2));

    ok(&graphgen(&search_args("r", "2"), dir.path()));
    let mut other = search_args("r", "4");
    other[10] = "6";
    other.push("--resume");
    let out = graphgen(&other, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("different configuration"));
}

#[test]
fn fixture_files_are_the_core_fixtures() {
    let text = fs::read_to_string(fixture("grid_with_width.prog")).unwrap();
    assert_eq!(text, fixtures::GRID_WITH_WIDTH_TEXT);
}
