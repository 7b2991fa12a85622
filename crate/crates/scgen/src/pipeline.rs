//! The end-to-end pipeline: generate, scan, prune, build the tree, build
//! the intersection graph, recognize — then emit artifacts and a report.
//!
//! A run *passes* when the generated matrix scanned clean, the tree was
//! built, every family member is connected, the family is compatible, and
//! the graph is strongly chordal. Anything else is a pipeline bug by
//! construction and is reported as a failure. Runs restricted to
//! `PatternSet::Delta1Only` are experiments: only the scan verdict is
//! asserted and the rest is observational.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    graph_to_adjacency, graph_to_dot, graph_to_edge_list, intersection_graph, parse_edge_list,
    Graph, ParseGraphError,
};
use crate::matrix::{
    generate_matrix, matrix_to_text, scan_forbidden, BitMatrix, ConfigError, GenerationConfig,
    PatternSet, PatternWitness,
};
use crate::prune::{prune, PruneResult};
use crate::recognition::{is_chordal, is_strongly_chordal};
use crate::tree::{
    build_tree, is_compatible_family, is_connected_in_tree, tree_to_dot, tree_to_edge_list,
    SubtreeFamily, WeightedTree,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub rows: usize,
    pub cols: usize,
    /// No forbidden pattern found (with respect to the run's pattern set).
    pub clean: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PatternWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruneReport {
    pub zero_rows_removed: usize,
    pub duplicate_rows_removed: usize,
    pub rows_kept: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeReport {
    pub built: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub members: usize,
    pub members_connected: Vec<bool>,
    pub all_connected: bool,
    pub compatible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecognitionReport {
    pub chordal: bool,
    pub strongly_chordal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elimination_order: Option<Vec<usize>>,
}

/// Wall-clock stage times. Excluded from determinism comparisons.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub generate_ms: f64,
    pub scan_ms: f64,
    pub prune_ms: f64,
    pub tree_ms: f64,
    pub family_ms: f64,
    pub graph_ms: f64,
    pub recognize_ms: f64,
    pub total_ms: f64,
}

/// Everything a run learned, in emission order. Field order is the stable
/// key order of the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<GenerationConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prune: Option<PruneReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphReport>,
    pub recognition: RecognitionReport,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<StageTimings>,
}

/// Report serialized as pretty JSON with a trailing newline.
pub fn report_to_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// In-memory results of one pipeline run.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub matrix: BitMatrix,
    pub pruned: PruneResult,
    /// `None` only when the matrix held a forbidden pattern (possible in
    /// literal-mode and delta1-only runs).
    pub tree: Option<WeightedTree>,
    pub graph: Graph,
    pub report: VerificationReport,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Generate from the config and push the matrix through every stage.
pub fn run_stages(config: &GenerationConfig) -> Result<RunArtifacts, ConfigError> {
    let start = Instant::now();
    let matrix = generate_matrix(config)?;
    let generate_ms = ms(start);
    Ok(stages(matrix, Some(*config), config.forbid, generate_ms))
}

/// Push an existing matrix through scan, prune, tree, graph, recognition;
/// used when the matrix stage is replaced by a fixture.
pub fn run_from_matrix(matrix: BitMatrix) -> RunArtifacts {
    stages(matrix, None, PatternSet::Both, 0.0)
}

fn stages(
    matrix: BitMatrix,
    config: Option<GenerationConfig>,
    forbid: PatternSet,
    generate_ms: f64,
) -> RunArtifacts {
    let run_start = Instant::now();

    let t = Instant::now();
    let witness = scan_forbidden(&matrix, forbid);
    let scan_ms = ms(t);
    let matrix_report = MatrixReport {
        rows: matrix.rows(),
        cols: matrix.cols(),
        clean: witness.is_none(),
        witness,
    };

    let t = Instant::now();
    let pruned = prune(&matrix);
    let prune_ms = ms(t);
    let prune_report = PruneReport {
        zero_rows_removed: pruned.removed_zero.len(),
        duplicate_rows_removed: pruned.removed_duplicate.len(),
        rows_kept: pruned.kept_rows.len(),
    };

    let t = Instant::now();
    let tree = build_tree(&pruned.pruned);
    let tree_ms = ms(t);
    let (tree, tree_report) = match tree {
        Ok(tree) => {
            let nodes = tree.node_count();
            (
                Some(tree),
                TreeReport {
                    built: true,
                    nodes: Some(nodes),
                    error: None,
                },
            )
        }
        Err(e) => (
            None,
            TreeReport {
                built: false,
                nodes: None,
                error: Some(e.to_string()),
            },
        ),
    };

    let t = Instant::now();
    let family_report = tree.as_ref().map(|tree| {
        let family = SubtreeFamily::from_pruned(tree.clone(), &pruned.pruned);
        let members_connected: Vec<bool> = family
            .members
            .iter()
            .map(|nodes| is_connected_in_tree(&family.tree, nodes))
            .collect();
        let all_connected = members_connected.iter().all(|&c| c);
        FamilyReport {
            members: family.members.len(),
            all_connected,
            compatible: is_compatible_family(&family),
            members_connected,
        }
    });
    let family_ms = ms(t);

    let t = Instant::now();
    let graph = intersection_graph(&pruned.pruned).expect("pruned matrix has no zero rows");
    let graph_ms = ms(t);
    let graph_report = GraphReport {
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
    };

    let t = Instant::now();
    let chordal = is_chordal(&graph);
    let strong = is_strongly_chordal(&graph);
    let recognize_ms = ms(t);
    let recognition = RecognitionReport {
        chordal,
        strongly_chordal: strong.is_some(),
        elimination_order: strong.map(|e| e.order),
    };

    let pass = match forbid {
        PatternSet::Both => {
            matrix_report.clean
                && tree_report.built
                && family_report
                    .as_ref()
                    .is_some_and(|f| f.all_connected && f.compatible)
                && recognition.strongly_chordal
        }
        // experiment: only the delta1 scan is asserted, the rest is tallied
        PatternSet::Delta1Only => matrix_report.clean,
    };

    let report = VerificationReport {
        config,
        matrix: Some(matrix_report),
        prune: Some(prune_report),
        tree: Some(tree_report),
        family: family_report,
        graph: Some(graph_report),
        recognition,
        pass,
        timings_ms: Some(StageTimings {
            generate_ms,
            scan_ms,
            prune_ms,
            tree_ms,
            family_ms,
            graph_ms,
            recognize_ms,
            total_ms: generate_ms + ms(run_start),
        }),
    };

    RunArtifacts {
        matrix,
        pruned,
        tree,
        graph,
        report,
    }
}

/// Which artifact files a run writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArtifactSet {
    pub matrix: bool,
    pub pruned: bool,
    pub tree: bool,
    pub graph: bool,
    pub report: bool,
}

impl ArtifactSet {
    pub fn all() -> Self {
        ArtifactSet {
            matrix: true,
            pruned: true,
            tree: true,
            graph: true,
            report: true,
        }
    }

    /// Parse a comma-separated selection, e.g. `"matrix,graph,report"`.
    pub fn from_list(list: &str) -> Result<Self, String> {
        let mut set = ArtifactSet {
            matrix: false,
            pruned: false,
            tree: false,
            graph: false,
            report: false,
        };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "matrix" => set.matrix = true,
                "pruned" => set.pruned = true,
                "tree" => set.tree = true,
                "graph" => set.graph = true,
                "report" => set.report = true,
                other => return Err(format!("unknown artifact {other:?}")),
            }
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dot,
    Adjacency,
}

impl GraphFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            GraphFormat::EdgeList => "graph.edgelist",
            GraphFormat::Dot => "graph.dot",
            GraphFormat::Adjacency => "graph.adj",
        }
    }

    pub fn render(self, g: &Graph) -> String {
        match self {
            GraphFormat::EdgeList => graph_to_edge_list(g),
            GraphFormat::Dot => graph_to_dot(g),
            GraphFormat::Adjacency => graph_to_adjacency(g),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EmitOptions {
    pub dir: PathBuf,
    pub artifacts: ArtifactSet,
    pub graph_format: GraphFormat,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    // the io::Error rides along as source(); printing it here too would
    // duplicate it in rendered error chains
    #[error("writing {}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), PipelineError> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|source| PipelineError::Io { path, source })
}

/// Write the selected artifact files for a finished run.
pub fn write_artifacts(run: &RunArtifacts, emit: &EmitOptions) -> Result<(), PipelineError> {
    fs::create_dir_all(&emit.dir).map_err(|source| PipelineError::Io {
        path: emit.dir.clone(),
        source,
    })?;
    let a = emit.artifacts;
    if a.matrix {
        write_file(&emit.dir, "matrix.txt", &matrix_to_text(&run.matrix))?;
    }
    if a.pruned {
        write_file(&emit.dir, "pruned.txt", &matrix_to_text(&run.pruned.pruned))?;
    }
    if a.tree {
        // skipped when the tree could not be built; the report says why
        if let Some(tree) = &run.tree {
            write_file(&emit.dir, "tree.txt", &tree_to_edge_list(tree))?;
            write_file(&emit.dir, "tree.dot", &tree_to_dot(tree))?;
        }
    }
    if a.graph {
        write_file(
            &emit.dir,
            emit.graph_format.file_name(),
            &emit.graph_format.render(&run.graph),
        )?;
    }
    if a.report {
        write_file(&emit.dir, "report.json", &report_to_json(&run.report))?;
    }
    Ok(())
}

/// Run one config end to end, writing artifacts.
pub fn run_pipeline(
    config: &GenerationConfig,
    emit: &EmitOptions,
) -> Result<RunArtifacts, PipelineError> {
    let run = run_stages(config)?;
    write_artifacts(&run, emit)?;
    Ok(run)
}

/// Per-instance configs for a batch: seeds `seed + 0..count`, wrapping.
pub fn batch_configs(base: &GenerationConfig, count: u64) -> Vec<GenerationConfig> {
    (0..count)
        .map(|i| GenerationConfig {
            seed: base.seed.wrapping_add(i),
            ..*base
        })
        .collect()
}

/// Run many configs through the stages (no file output).
pub fn run_batch(configs: &[GenerationConfig]) -> Result<Vec<RunArtifacts>, ConfigError> {
    #[cfg(feature = "parallel")]
    {
        run_batch_par(configs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_seq(configs)
    }
}

pub fn run_batch_seq(configs: &[GenerationConfig]) -> Result<Vec<RunArtifacts>, ConfigError> {
    configs.iter().map(run_stages).collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_par(configs: &[GenerationConfig]) -> Result<Vec<RunArtifacts>, ConfigError> {
    use rayon::prelude::*;
    configs.par_iter().map(run_stages).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchSummary {
    pub total: usize,
    pub passed: usize,
    pub strongly_chordal: usize,
}

/// Run a batch and write one `instance-NNNN/` directory per run plus a
/// `manifest.txt` with one line per instance. Instances are computed in
/// parallel (feature permitting) and written sequentially, so the manifest
/// order is the instance order.
pub fn run_batch_to_dir(
    base: &GenerationConfig,
    count: u64,
    emit: &EmitOptions,
) -> Result<(BatchSummary, Vec<RunArtifacts>), PipelineError> {
    let configs = batch_configs(base, count);
    let runs = run_batch(&configs)?;
    fs::create_dir_all(&emit.dir).map_err(|source| PipelineError::Io {
        path: emit.dir.clone(),
        source,
    })?;
    let mut manifest = String::new();
    let mut summary = BatchSummary {
        total: runs.len(),
        passed: 0,
        strongly_chordal: 0,
    };
    for (i, (run, config)) in runs.iter().zip(&configs).enumerate() {
        let sub = EmitOptions {
            dir: emit.dir.join(format!("instance-{i:04}")),
            ..emit.clone()
        };
        write_artifacts(run, &sub)?;
        let report = &run.report;
        if report.pass {
            summary.passed += 1;
        }
        if report.recognition.strongly_chordal {
            summary.strongly_chordal += 1;
        }
        manifest.push_str(&format!(
            "instance={i} seed={} nodes={} subtrees={} density={} mode={} forbid={} pass={} strongly_chordal={}\n",
            config.seed,
            config.nodes,
            config.subtrees,
            config.density,
            config.mode,
            config.forbid,
            report.pass,
            report.recognition.strongly_chordal,
        ));
    }
    write_file(&emit.dir, "manifest.txt", &manifest)?;
    Ok((summary, runs))
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("reading {}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Parse(#[from] ParseGraphError),
}

/// Recognition-only report for an external graph in edge-list format.
pub fn verify_graph_text(text: &str) -> Result<VerificationReport, ParseGraphError> {
    let graph = parse_edge_list(text)?;
    Ok(recognition_report(&graph))
}

pub fn verify_graph_file(path: &Path) -> Result<VerificationReport, VerifyError> {
    let text = fs::read_to_string(path).map_err(|source| VerifyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(verify_graph_text(&text)?)
}

fn recognition_report(graph: &Graph) -> VerificationReport {
    let chordal = is_chordal(graph);
    let strong = is_strongly_chordal(graph);
    let strongly_chordal = strong.is_some();
    VerificationReport {
        config: None,
        matrix: None,
        prune: None,
        tree: None,
        family: None,
        graph: Some(GraphReport {
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
        }),
        recognition: RecognitionReport {
            chordal,
            strongly_chordal,
            elimination_order: strong.map(|e| e.order),
        },
        pass: strongly_chordal,
        timings_ms: None,
    }
}
