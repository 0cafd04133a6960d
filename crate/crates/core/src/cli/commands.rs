use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::io::{read_point, to_json};
use super::{Cli, Command, Emit, Format, Layout, OutputArgs, TestMode};
use crate::geometry::{
    all_pairs_shortest_paths, build_visibility_graph, classify_from, classify_from_reduced, find_dominating_set,
    maximal_convex_clusters, minimum_generators, svd_layout, verify_generator_set, CoverageReport, StatusCounts,
};
use crate::manifold::{normalized_score, project, ProjectOptions, ProjectionResult};
use crate::quantum::{
    behaviour_bound_check, behaviour_from_state, collapse, fidelity_bounds_check, no_signalling_check, qkd_scenario,
    sample_point, BoundReport, DensityMatrix, DensityMatrixJson, FidelityBounds, FullDistribution, MeasurementSet,
    NoSignallingReport, ScenarioKind, NORMALIZATION_TOL,
};
use crate::stats::{
    distance_sigma_with, gaussian_separability, perturb, read_samples_file, two_sample_ks, two_sample_t, NoiseMode,
    NoiseSpec, TestReport, TwoSampleResult,
};
use crate::strategy::{
    enumerate_reduced, enumerate_strategies, hamming_histogram, vertex_from_strategy, vertices_csv, vertices_json,
    BehaviourPoint, Representation, ScenarioShape,
};
use crate::{Error, Result};

fn unsupported(command: &str, format: Format) -> Error {
    Error::InvalidArgument(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn json_only(command: &str, out: &OutputArgs) -> Result<()> {
    match out.format {
        Format::Json => Ok(()),
        f => Err(unsupported(command, f)),
    }
}

/// Runs a command and returns the text it would write.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Vertices { rep, out } => match out.format {
            Format::Csv => vertices_csv(rep.rep),
            Format::Json => vertices_json(rep.rep),
            f => Err(unsupported("vertices", f)),
        },
        Command::Graph { rep, layout, out } => graph(rep.rep, *layout, out.format),
        Command::Analyze { rep, out } => {
            json_only("analyze", out)?;
            to_json(&analyze(rep.rep)?)
        }
        Command::Simulate { kind, noise, shots, seed, emit, perturb, out } => {
            json_only("simulate", out)?;
            simulate(*kind, *noise, *shots, *seed, *emit, *perturb)
        }
        Command::Project { input, reference, starts, max_iter, grad_tol, out } => {
            json_only("project", out)?;
            let opts = ProjectOptions { starts: *starts, max_iter: *max_iter, grad_tol: *grad_tol };
            to_json(&project_cmd(input, reference.as_deref(), &opts)?)
        }
        Command::Test { expected, observed, mode, noise, noise_mode, alpha, seed, out } => {
            json_only("test", out)?;
            let seed = seed.ok_or_else(|| Error::InvalidArgument("test requires an explicit --seed".into()))?;
            match mode {
                TestMode::Point => to_json(&test_points(expected, observed, *noise, *noise_mode, *alpha, seed)?),
                TestMode::Samples => to_json(&test_samples(expected, observed, *alpha, seed)?),
            }
        }
        Command::Bound { rho, sigma, out } => {
            json_only("bound", out)?;
            to_json(&bound(rho, sigma)?)
        }
    }
}

fn graph(rep: Representation, layout: Option<Layout>, format: Format) -> Result<String> {
    let g = build_visibility_graph(rep);
    let positions = layout.map(|Layout::Svd| svd_layout(rep));
    match format {
        Format::Dot => Ok(g.to_dot(positions.as_deref())),
        Format::Json => {
            let mut j = g.to_json();
            j.layout = positions;
            to_json(&j)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match positions {
                Some(pos) => {
                    w.write_record(["node", "x", "y", "z"])?;
                    for (i, p) in pos.iter().enumerate() {
                        w.write_record([i.to_string(), p[0].to_string(), p[1].to_string(), p[2].to_string()])?;
                    }
                }
                None => {
                    w.write_record(["source", "target"])?;
                    for (u, v) in g.edges() {
                        w.write_record([u.to_string(), v.to_string()])?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is ascii"))
        }
    }
}

#[derive(Debug, Serialize)]
struct GeneratorSummary {
    size: usize,
    witness: Vec<usize>,
    coverage: CoverageReport,
    /// Whether a dominating set one smaller exists (exhaustive search).
    smaller_exists: bool,
}

#[derive(Debug, Serialize)]
struct CliqueSummary {
    count: usize,
    sizes: Vec<usize>,
    members: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    representation: Representation,
    node_count: usize,
    edge_count: usize,
    degrees: Vec<usize>,
    apsp_max: u32,
    min_generators: usize,
    generators: GeneratorSummary,
    cliques: CliqueSummary,
    hamming_histogram: BTreeMap<usize, usize>,
    /// Counts shared by every vertex, if they agree.
    uniform_classification: Option<StatusCounts>,
    classification: Vec<StatusCounts>,
}

fn analyze(rep: Representation) -> Result<AnalyzeReport> {
    let g = build_visibility_graph(rep);
    let apsp = all_pairs_shortest_paths(&g)?;
    let gens = minimum_generators(&g);
    let coverage = verify_generator_set(&g, &gens.members)?;
    let smaller_exists = gens.len() > 1 && find_dominating_set(&g, gens.len() - 1).is_some();
    let cliques = maximal_convex_clusters(&g);
    let (histogram, classification) = match rep {
        Representation::Full26 => {
            let strategies = enumerate_strategies();
            let vertices: Vec<_> = strategies.iter().map(|&s| vertex_from_strategy(s)).collect();
            (hamming_histogram(&vertices)?, strategies.into_iter().map(classify_from).collect::<Vec<_>>())
        }
        Representation::Reduced8 => {
            let vertices = enumerate_reduced();
            let counts = vertices.iter().map(classify_from_reduced).collect();
            (hamming_histogram(&vertices)?, counts)
        }
    };
    let uniform = classification
        .iter()
        .all(|c| *c == classification[0])
        .then(|| classification[0]);
    Ok(AnalyzeReport {
        representation: rep,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        degrees: (0..g.node_count()).map(|v| g.degree(v)).collect(),
        apsp_max: apsp.max,
        min_generators: gens.len(),
        generators: GeneratorSummary { size: gens.len(), witness: gens.members.clone(), coverage, smaller_exists },
        cliques: CliqueSummary {
            count: cliques.len(),
            sizes: cliques.iter().map(Vec::len).collect(),
            members: cliques,
        },
        hamming_histogram: histogram,
        uniform_classification: uniform,
        classification,
    })
}

#[derive(Debug, Serialize)]
struct SampledPoint {
    shots: usize,
    seed: u64,
    point: BehaviourPoint,
    standard_errors: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct PerturbedPoint {
    noise: NoiseSpec,
    point: BehaviourPoint,
}

#[derive(Debug, Serialize)]
struct SimulationReport {
    kind: ScenarioKind,
    noise: f64,
    exact: BehaviourPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampled: Option<SampledPoint>,
    distribution: FullDistribution,
    no_signalling: NoSignallingReport,
}

fn simulate(kind: ScenarioKind, noise: f64, shots: usize, seed: u64, emit: Emit, sigma: f64) -> Result<String> {
    let (rho, meas, shape) = qkd_scenario(kind, noise)?;
    let fd = behaviour_from_state(&rho, &meas, shape)?;
    let exact = collapse(&fd)?;
    let sampled = || -> Result<SampledPoint> {
        let (point, standard_errors) = sample_point(&fd, shots, seed)?;
        Ok(SampledPoint { shots, seed, point, standard_errors })
    };
    match emit {
        Emit::Exact => to_json(&exact),
        Emit::Full => to_json(&fd),
        Emit::Sampled => {
            if shots == 0 {
                return Err(Error::InvalidArgument("--emit sampled needs --shots > 0".into()));
            }
            to_json(&sampled()?)
        }
        Emit::Perturbed => {
            let spec = NoiseSpec::new(sigma, seed)?;
            to_json(&PerturbedPoint { noise: spec, point: perturb(&exact, &spec)? })
        }
        Emit::All => to_json(&SimulationReport {
            kind,
            noise,
            sampled: if shots > 0 { Some(sampled()?) } else { None },
            no_signalling: no_signalling_check(&fd, NORMALIZATION_TOL),
            exact,
            distribution: fd,
        }),
    }
}

#[derive(Debug, Serialize)]
struct ProjectOutput {
    #[serde(flatten)]
    result: ProjectionResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized_score: Option<f64>,
}

fn project_cmd(input: &Path, reference: Option<&Path>, opts: &ProjectOptions) -> Result<ProjectOutput> {
    let q = read_point(input)?;
    let result = project(&q, opts)?;
    let normalized_score = match reference {
        Some(r) => Some(normalized_score(&q, &read_point(r)?, opts)?),
        None => None,
    };
    Ok(ProjectOutput { result, normalized_score })
}

/// Manifold distances reported next to every test.
#[derive(Debug, Serialize)]
struct ManifoldSummary {
    expected_distance: f64,
    observed_distance: f64,
    /// Absent when the expected point lies on the manifold.
    normalized_score: Option<f64>,
}

fn manifold_summary(expected: &BehaviourPoint, observed: &BehaviourPoint) -> Result<ManifoldSummary> {
    let opts = ProjectOptions::default();
    let observed_distance = project(observed, &opts)?.distance;
    let expected_distance = project(expected, &opts)?.distance;
    let normalized_score = match normalized_score(observed, expected, &opts) {
        Ok(s) => Some(s),
        Err(Error::DegenerateReference(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ManifoldSummary { expected_distance, observed_distance, normalized_score })
}

#[derive(Debug, Serialize)]
struct PointTestOutput {
    mode: &'static str,
    seed: u64,
    noise: f64,
    noise_mode: NoiseMode,
    #[serde(flatten)]
    report: TestReport,
    manifold: ManifoldSummary,
}

fn test_points(
    expected: &Path,
    observed: &Path,
    noise: f64,
    noise_mode: NoiseMode,
    alpha: f64,
    seed: u64,
) -> Result<PointTestOutput> {
    let p = read_point(expected)?;
    let q = read_point(observed)?;
    p.ensure_representation(Representation::Reduced8)?;
    p.ensure_same_kind(&q)?;
    NoiseSpec { relative_sigma: noise, seed, mode: noise_mode }.validate()?;
    let sigma_d = distance_sigma_with(&p, noise, noise_mode);
    if sigma_d <= 0.0 {
        return Err(Error::InvalidArgument("noise level gives a zero distance deviation".into()));
    }
    Ok(PointTestOutput {
        mode: "point",
        seed,
        noise,
        noise_mode,
        report: gaussian_separability(&p, &q, sigma_d, alpha)?,
        manifold: manifold_summary(&p, &q)?,
    })
}

#[derive(Debug, Serialize)]
struct TwoSampleEntry {
    t: Option<TwoSampleResult>,
    ks: TwoSampleResult,
    /// Set when the t-test is undefined for this column.
    t_error: Option<String>,
    reject: bool,
}

fn two_sample_entry(xs: &[f64], ys: &[f64], alpha: f64) -> Result<TwoSampleEntry> {
    let ks = two_sample_ks(xs, ys)?;
    let (t, t_error) = match two_sample_t(xs, ys) {
        Ok(t) => (Some(t), None),
        Err(Error::InvalidSample(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let reject = ks.p_value < alpha || t.is_some_and(|t| t.p_value < alpha);
    Ok(TwoSampleEntry { t, ks, t_error, reject })
}

#[derive(Debug, Serialize)]
struct SampleTestOutput {
    mode: &'static str,
    seed: u64,
    alpha: f64,
    alternative: &'static str,
    expected_count: usize,
    observed_count: usize,
    expected_mean: BehaviourPoint,
    observed_mean: BehaviourPoint,
    coordinates: Vec<TwoSampleEntry>,
    /// Tests on each row's distance from the expected mean.
    distance: TwoSampleEntry,
    reject: bool,
    manifold: ManifoldSummary,
}

fn mean_point(rows: &[Vec<f64>]) -> Result<BehaviourPoint> {
    let dim = rows[0].len();
    let mean = (0..dim).map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64).collect();
    BehaviourPoint::new(Representation::Reduced8, mean)
}

fn test_samples(expected: &Path, observed: &Path, alpha: f64, seed: u64) -> Result<SampleTestOutput> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let xs = read_samples_file(expected)?;
    let ys = read_samples_file(observed)?;
    for (rows, path) in [(&xs, expected), (&ys, observed)] {
        if rows[0].len() != Representation::Reduced8.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}: sample rows need 8 values, found {}",
                path.display(),
                rows[0].len()
            )));
        }
    }
    let expected_mean = mean_point(&xs)?;
    let observed_mean = mean_point(&ys)?;
    let column = |rows: &[Vec<f64>], k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let coordinates = (0..8)
        .map(|k| two_sample_entry(&column(&xs, k), &column(&ys, k), alpha))
        .collect::<Result<Vec<_>>>()?;
    let dist = |r: &Vec<f64>| r.iter().zip(&expected_mean.coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let dx: Vec<f64> = xs.iter().map(dist).collect();
    let dy: Vec<f64> = ys.iter().map(dist).collect();
    let distance = two_sample_entry(&dx, &dy, alpha)?;
    Ok(SampleTestOutput {
        mode: "samples",
        seed,
        alpha,
        alternative: "two-sided",
        expected_count: xs.len(),
        observed_count: ys.len(),
        reject: distance.reject,
        manifold: manifold_summary(&expected_mean, &observed_mean)?,
        expected_mean,
        observed_mean,
        coordinates,
        distance,
    })
}

#[derive(Debug, Serialize)]
struct BoundOutput {
    behaviour: BoundReport,
    fidelity: FidelityBounds,
    holds: bool,
}

fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let j: DensityMatrixJson = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: not a density matrix ({e})", path.display())))?;
    DensityMatrix::try_from(j)
}

fn bound(rho: &Path, sigma: &Path) -> Result<BoundOutput> {
    let rho = read_state(rho)?;
    let sigma = read_state(sigma)?;
    if rho.dim() != 4 || sigma.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "bound needs two-qubit states, found dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let behaviour = behaviour_bound_check(&rho, &sigma, &MeasurementSet::bb84(2), ScenarioShape::REDUCED)?;
    let fidelity = fidelity_bounds_check(&rho, &sigma)?;
    Ok(BoundOutput { holds: behaviour.holds && fidelity.holds, behaviour, fidelity })
}
