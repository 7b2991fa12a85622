//! End-to-end acceptance gates, one test per criterion. Each prints an
//! `acceptance N (<name>): PASS|FAIL` line (visible with --nocapture), then
//! asserts, so the suite doubles as a checklist.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use scgen::graph::Graph;
use scgen::matrix::{
    find_forbidden_submatrix, generate_matrix, BitMatrix, GenMode, GenerationConfig,
};
use scgen::pipeline::{run_from_matrix, run_stages};
use scgen::recognition::{brute_force_strong_elimination, is_chordal, is_strongly_chordal};

fn report(n: u32, name: &str, issues: &[String]) {
    let pass = issues.is_empty();
    println!(
        "acceptance {n} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(
        pass,
        "criterion {n} ({name}) failed with {} issue(s):\n{}",
        issues.len(),
        issues.join("\n")
    );
}

fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The shared survey: 1000 exhaustive-mode runs with n = k sweeping 4..=32.
fn survey_configs() -> Vec<GenerationConfig> {
    (0..1000u64)
        .map(|i| {
            let n = 4 + (i % 29) as usize;
            GenerationConfig::new(n, n, 10_000 + i)
        })
        .collect()
}

#[test]
fn acceptance_1_golden_example() {
    let start = Instant::now();
    let mut issues = Vec::new();
    let matrix: BitMatrix = fixture("golden_12x12.txt").parse().unwrap();
    let expected_pruned: BitMatrix = fixture("golden_12x12_pruned.txt").parse().unwrap();

    let run = run_from_matrix(matrix);
    if run.pruned.removed_zero != vec![4, 6, 8, 9, 10, 11] {
        issues.push(format!(
            "zero rows removed: {:?}, expected [4, 6, 8, 9, 10, 11]",
            run.pruned.removed_zero
        ));
    }
    if !run.pruned.removed_duplicate.is_empty() {
        issues.push(format!(
            "unexpected duplicate removals: {:?}",
            run.pruned.removed_duplicate
        ));
    }
    if run.pruned.pruned != expected_pruned {
        issues.push(format!(
            "pruned matrix mismatch:\n{:?}\nexpected:\n{:?}",
            run.pruned.pruned, expected_pruned
        ));
    }
    let g = &run.graph;
    if g.vertex_count() != 6 {
        issues.push(format!("vertex count {}, expected 6", g.vertex_count()));
    }
    if g.edge_count() != 15 {
        issues.push(format!("edge count {}, expected 15", g.edge_count()));
    }
    for u in 0..6 {
        for v in u + 1..6 {
            if !g.has_edge(u, v) {
                issues.push(format!(
                    "missing edge ({u}, {v}); the graph must be complete"
                ));
            }
        }
    }
    if !run.report.recognition.strongly_chordal {
        issues.push("recognition failed on the golden graph".into());
    }
    if !run.report.pass {
        issues.push("golden run did not pass overall".into());
    }
    // frozen hand-derived realization of the pruned matrix
    let tree = run.tree.as_ref().expect("tree built");
    let parents: Vec<usize> = (1..tree.node_count())
        .map(|j| tree.parent(j).unwrap())
        .collect();
    if parents != vec![0, 0, 1, 0, 3, 5, 2, 4, 7, 9, 8] {
        issues.push(format!(
            "tree parents {parents:?} diverged from the frozen values"
        ));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        issues.push(format!("took {elapsed:?}, budget is 1 s"));
    }
    report(1, "golden 12x12 example", &issues);
}

#[test]
fn acceptance_2_exhaustive_generation_is_pattern_free() {
    let issues: Vec<String> = survey_configs()
        .par_iter()
        .filter_map(|cfg| {
            let m = generate_matrix(cfg).unwrap();
            // the quartic reference scanner, not the word-parallel one
            find_forbidden_submatrix(&m)
                .map(|w| format!("seed {} n=k={}: {w}", cfg.seed, cfg.nodes))
        })
        .collect();
    report(2, "1000 exhaustive runs scan clean", &issues);
}

#[test]
fn acceptance_3_pipeline_property() {
    let issues: Vec<String> = survey_configs()
        .par_iter()
        .filter_map(|cfg| {
            let run = run_stages(cfg).unwrap();
            let r = &run.report;
            let family_ok = r
                .family
                .as_ref()
                .is_some_and(|f| f.all_connected && f.compatible);
            let ok = r.tree.as_ref().is_some_and(|t| t.built)
                && family_ok
                && r.recognition.strongly_chordal
                && r.pass;
            (!ok).then(|| format!("seed {} n=k={}: {r:?}", cfg.seed, cfg.nodes))
        })
        .collect();
    report(
        3,
        "1000 runs: connected, compatible, strongly chordal",
        &issues,
    );
}

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut g = Graph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask & (1 << bit) != 0 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn three_sun() -> Graph {
    Graph::from_edges(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 0),
            (3, 1),
            (4, 1),
            (4, 2),
            (5, 2),
            (5, 0),
        ],
    )
}

#[test]
fn acceptance_4_oracle_equivalence() {
    let mut issues = Vec::new();

    // every labeled graph on up to 6 vertices (2^15 on exactly 6)
    let mut cases: Vec<(usize, u32)> = Vec::new();
    for n in 0..=6usize {
        let bits = n * n.saturating_sub(1) / 2;
        cases.extend((0..1u32 << bits).map(|mask| (n, mask)));
    }
    issues.par_extend(cases.par_iter().filter_map(|&(n, mask)| {
        let g = graph_from_mask(n, mask);
        let recognizer = is_strongly_chordal(&g).is_some();
        let oracle = brute_force_strong_elimination(&g).is_some();
        (recognizer != oracle)
            .then(|| format!("n={n} mask={mask:#06x}: recognizer={recognizer} oracle={oracle}"))
    }));

    // 10^4 random graphs on 7..=9 vertices across three densities
    issues.par_extend((0..10_000u64).into_par_iter().filter_map(|i| {
        let n = 7 + (i % 3) as usize;
        let p = [0.2, 0.5, 0.8][((i / 3) % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_5500 + i);
        let g = gnp(n, p, &mut rng);
        let recognizer = is_strongly_chordal(&g).is_some();
        let oracle = brute_force_strong_elimination(&g).is_some();
        (recognizer != oracle)
            .then(|| format!("random {i} (n={n} p={p}): recognizer={recognizer} oracle={oracle}"))
    }));

    let sun = three_sun();
    if !is_chordal(&sun) {
        issues.push("3-sun must be chordal".into());
    }
    if is_strongly_chordal(&sun).is_some() || brute_force_strong_elimination(&sun).is_some() {
        issues.push("3-sun must not be strongly chordal".into());
    }

    report(
        4,
        "recognizer agrees with the ordering-search oracle",
        &issues,
    );
}

#[test]
fn acceptance_5_literal_mode_regression() {
    let mut issues = Vec::new();
    // recorded during development: the adjacent-cell guard leaks a delta2
    // formed by non-adjacent rows at this config
    let cfg = GenerationConfig {
        mode: GenMode::Literal,
        ..GenerationConfig::new(8, 8, 0)
    };
    let m = generate_matrix(&cfg).unwrap();
    let frozen: BitMatrix = fixture("literal_8x8_seed0.txt").parse().unwrap();
    if m != frozen {
        issues.push(format!(
            "literal-mode output drifted from the recorded matrix:\n{m:?}\nexpected:\n{frozen:?}"
        ));
    }
    match find_forbidden_submatrix(&m) {
        Some(w) if w.holds_in(&m) => {}
        Some(w) => issues.push(format!("witness {w} does not hold in the matrix")),
        None => issues.push("no witness found; literal mode unexpectedly clean".into()),
    }
    // the same seed under the exhaustive guard is clean
    let exhaustive = generate_matrix(&GenerationConfig::new(8, 8, 0)).unwrap();
    if let Some(w) = find_forbidden_submatrix(&exhaustive) {
        issues.push(format!("exhaustive mode leaked {w}"));
    }
    report(
        5,
        "literal pseudocode mode leaks a recorded witness",
        &issues,
    );
}

#[test]
fn acceptance_6_complexity_scaling() {
    let sizes = [64usize, 128, 256];
    let mut best = [Duration::MAX; 3];
    // interleave sizes within each rep and keep the minimum, so a noisy
    // neighbor inflates at most one rep
    for _rep in 0..3 {
        for (slot, &n) in sizes.iter().enumerate() {
            let cfg = GenerationConfig::new(n, n, 42);
            let start = Instant::now();
            let m = generate_matrix(&cfg).unwrap();
            let dt = start.elapsed();
            std::hint::black_box(&m);
            best[slot] = best[slot].min(dt);
        }
    }
    let mut issues = Vec::new();
    if best[2] >= Duration::from_secs(30) {
        issues.push(format!("n=k=256 took {:?}, budget is 30 s", best[2]));
    }
    // doubling n in an ~n^4 algorithm is a 16x step; allow 4x fudge
    for w in 0..2 {
        let (small, large) = (best[w], best[w + 1]);
        let floor = small.max(Duration::from_micros(50)); // avoid noise ratios
        if large > floor * 64 {
            issues.push(format!(
                "{} -> {}: {small:?} -> {large:?} grows faster than n^4 allows",
                sizes[w],
                sizes[w + 1]
            ));
        }
    }
    println!("generation times (min of 3): {sizes:?} -> {best:?}");
    report(
        6,
        "generation scales no worse than ~n^4 and fits 30 s",
        &issues,
    );
}

#[test]
fn acceptance_7_byte_identical_artifacts() {
    let bin = env!("CARGO_BIN_EXE_scgen");
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for dir in &dirs {
        let out = Command::new(bin)
            .args([
                "generate",
                "--nodes",
                "24",
                "--subtrees",
                "24",
                "--seed",
                "9",
                "--out",
            ])
            .arg(dir)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "generate failed in {}: {}",
            dir.display(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let mut issues = Vec::new();
    for file in [
        "matrix.txt",
        "pruned.txt",
        "tree.txt",
        "tree.dot",
        "graph.edgelist",
    ] {
        let a = std::fs::read(dirs[0].join(file)).unwrap();
        let b = std::fs::read(dirs[1].join(file)).unwrap();
        if a != b {
            issues.push(format!("{file} differs between identical runs"));
        }
    }
    report(
        7,
        "identical flags and seed give byte-identical files",
        &issues,
    );
}
