//! Experiment orchestration: a flat key-value config format, seeded m/k
//! sweeps with paired baselines, and a diffable CSV output.
//!
//! Every cell of a sweep runs the centralized reference, the distributed
//! protocol, and the requested baselines on the same dataset and the same
//! partition. Ratios are reported against the centralized value for the
//! same `k`, which stays computable at sizes where the true optimum is not.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use crate::constraints::Cardinality;
use crate::data::{
    gen_gaussian_mixture, gen_random_graph, gen_random_sets, load_graph, load_sets, load_vectors,
    GraphDataset, SetSystemDataset, VectorDataset, VectorFormat,
};
use crate::engines::{lazy_greedy_cardinality, random_greedy, EngineKind};
use crate::error::{Error, Result};
use crate::greedi::{
    baseline, greedi_decomposable_with_partition, greedi_general_with_partition,
    greedi_with_partition, partition_uniform, BaselineKind, GreediConfig,
};
use crate::objective::Objective;
use crate::objectives::{Coverage, Decomposable, DppLogDet, Exemplar, GraphCut, InfoGain, SeKernel};
use crate::rng;
use crate::set::ElementId;

const S_CENTRALIZED: u64 = 0x3000;

/// Which objective family to instantiate over the dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind {
    Exemplar { alpha: f64 },
    InfoGain { h: f64, sigma: f64 },
    Cut,
    Coverage,
    Dpp { h: f64, quality: f64 },
}

impl ObjectiveKind {
    pub fn parse(kind: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str, default: f64| -> Result<f64> {
            params.get(key).map_or(Ok(default), |v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad numeric value for {key}: {v:?}")))
            })
        };
        match kind {
            "exemplar" => Ok(ObjectiveKind::Exemplar { alpha: get("alpha", 2.0)? }),
            "infogain" => Ok(ObjectiveKind::InfoGain {
                h: get("h", 0.75)?,
                sigma: get("sigma", 1.0)?,
            }),
            "cut" => Ok(ObjectiveKind::Cut),
            "coverage" => Ok(ObjectiveKind::Coverage),
            "dpp" => Ok(ObjectiveKind::Dpp {
                h: get("h", 0.75)?,
                quality: get("quality", 2.0)?,
            }),
            other => Err(Error::UnknownKind(format!("objective {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveKind::Exemplar { .. } => "exemplar",
            ObjectiveKind::InfoGain { .. } => "infogain",
            ObjectiveKind::Cut => "cut",
            ObjectiveKind::Coverage => "coverage",
            ObjectiveKind::Dpp { .. } => "dpp",
        }
    }
}

/// Where the ground set comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    VectorsFile { path: PathBuf, format: VectorFormat },
    GraphFile { path: PathBuf, undirected: bool },
    SetsFile { path: PathBuf },
    Generator { kind: String, params: BTreeMap<String, String> },
}

impl DataSpec {
    /// Generated datasets vary with the experiment seed; files do not.
    pub fn seed_dependent(&self) -> bool {
        matches!(self, DataSpec::Generator { .. })
    }
}

/// A loaded ground-set payload.
pub enum Dataset {
    Vectors(Arc<VectorDataset>),
    Graph(GraphDataset),
    Sets(SetSystemDataset),
}

pub fn parse_params(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part.split_once('=').ok_or_else(|| {
            Error::Config(format!("expected key=value, got {part:?}"))
        })?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn param_f64(params: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("bad numeric value for {key}: {v:?}"))),
        None => default.ok_or_else(|| Error::Config(format!("missing generator parameter {key}"))),
    }
}

fn param_usize(params: &BTreeMap<String, String>, key: &str, default: Option<usize>) -> Result<usize> {
    match params.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("bad integer value for {key}: {v:?}"))),
        None => default.ok_or_else(|| Error::Config(format!("missing generator parameter {key}"))),
    }
}

/// Materialize the dataset; `seed` only matters for generators.
pub fn load_dataset(spec: &DataSpec, seed: u64) -> Result<Dataset> {
    match spec {
        DataSpec::VectorsFile { path, format } => {
            Ok(Dataset::Vectors(Arc::new(load_vectors(path, *format)?)))
        }
        DataSpec::GraphFile { path, undirected } => {
            Ok(Dataset::Graph(load_graph(path, *undirected)?))
        }
        DataSpec::SetsFile { path } => Ok(Dataset::Sets(load_sets(path)?)),
        DataSpec::Generator { kind, params } => generate_dataset(kind, params, seed),
    }
}

pub fn generate_dataset(
    kind: &str,
    params: &BTreeMap<String, String>,
    seed: u64,
) -> Result<Dataset> {
    match kind {
        "gaussian_mixture" => {
            let clusters = param_usize(params, "clusters", Some(10))?;
            let n = param_usize(params, "n", None)?;
            let d = param_usize(params, "d", None)?;
            let spread = param_f64(params, "spread", Some(0.2))?;
            Ok(Dataset::Vectors(Arc::new(gen_gaussian_mixture(
                clusters, n, d, spread, seed,
            )?)))
        }
        "random_graph" => {
            let n = param_usize(params, "n", None)?;
            let p = param_f64(params, "p", None)?;
            let wmin = param_f64(params, "wmin", Some(1.0))?;
            let wmax = param_f64(params, "wmax", Some(wmin))?;
            Ok(Dataset::Graph(gen_random_graph(n, p, wmin, wmax, seed)?))
        }
        "random_sets" => {
            let sets = param_usize(params, "sets", None)?;
            let universe = param_usize(params, "universe", None)?;
            let density = param_f64(params, "density", Some(0.1))?;
            Ok(Dataset::Sets(gen_random_sets(sets, universe, density, seed)?))
        }
        other => Err(Error::UnknownKind(format!("generator {other:?}"))),
    }
}

/// An objective bound to its data, with the concrete type retained so the
/// decomposable path can reach the component interface.
pub enum BuiltObjective {
    Exemplar(Exemplar),
    InfoGain(InfoGain),
    Cut(GraphCut),
    Coverage(Coverage),
    Dpp(DppLogDet),
}

impl BuiltObjective {
    pub fn as_objective(&self) -> &dyn Objective {
        match self {
            BuiltObjective::Exemplar(f) => f,
            BuiltObjective::InfoGain(f) => f,
            BuiltObjective::Cut(f) => f,
            BuiltObjective::Coverage(f) => f,
            BuiltObjective::Dpp(f) => f,
        }
    }

    pub fn as_decomposable(&self) -> Option<&dyn Decomposable> {
        match self {
            BuiltObjective::Exemplar(f) => Some(f),
            _ => None,
        }
    }
}

pub fn build_objective(
    kind: &ObjectiveKind,
    dataset: &Dataset,
    normalize: bool,
) -> Result<BuiltObjective> {
    let vectors = |ds: &Dataset| -> Result<Arc<VectorDataset>> {
        match ds {
            Dataset::Vectors(v) => {
                if normalize {
                    let mut owned = (**v).clone();
                    owned.normalize()?;
                    Ok(Arc::new(owned))
                } else {
                    Ok(Arc::clone(v))
                }
            }
            _ => Err(Error::Config(format!(
                "objective {} needs vector data",
                kind.name()
            ))),
        }
    };
    match kind {
        ObjectiveKind::Exemplar { alpha } => {
            Ok(BuiltObjective::Exemplar(Exemplar::new(vectors(dataset)?, *alpha)?))
        }
        ObjectiveKind::InfoGain { h, sigma } => Ok(BuiltObjective::InfoGain(InfoGain::new(
            vectors(dataset)?,
            SeKernel::new(*h, *sigma)?,
        ))),
        ObjectiveKind::Dpp { h, quality } => Ok(BuiltObjective::Dpp(DppLogDet::from_se(
            &vectors(dataset)?,
            SeKernel::new(*h, 1.0)?,
            *quality,
        )?)),
        ObjectiveKind::Cut => match dataset {
            Dataset::Graph(g) => Ok(BuiltObjective::Cut(GraphCut::from_dataset(g))),
            _ => Err(Error::Config("the cut objective needs graph data".into())),
        },
        ObjectiveKind::Coverage => match dataset {
            Dataset::Sets(ss) => Ok(BuiltObjective::Coverage(Coverage::from_dataset(ss))),
            _ => Err(Error::Config("the coverage objective needs set data".into())),
        },
    }
}

/// One (m, k, kappa_factor) cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub m: usize,
    pub k: usize,
    pub kappa_factor: f64,
}

/// Full description of an experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub objective: ObjectiveKind,
    pub data: DataSpec,
    pub normalize: bool,
    pub sweep: Vec<SweepPoint>,
    pub baselines: Vec<BaselineKind>,
    pub engine: EngineKind,
    pub seeds: Vec<u64>,
    pub decomposable: bool,
    /// Machine-stage local evaluation for objectives that restrict (cut).
    pub local_evaluation: bool,
    pub workers: Option<usize>,
    /// Trials averaged for the centralized reference when the engine is
    /// randomized.
    pub centralized_trials: usize,
    /// Merge-stage scope-size override in decomposable mode.
    pub eval_subset_size: Option<usize>,
    /// Record wall time; off by default so outputs are byte-stable.
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut objective_kind: Option<String> = None;
        let mut objective_params: BTreeMap<String, String> = BTreeMap::new();
        let mut data_file: Option<PathBuf> = None;
        let mut data_format: Option<String> = None;
        let mut generator: Option<String> = None;
        let mut generator_params: BTreeMap<String, String> = BTreeMap::new();
        let mut normalize = false;
        let mut sweep = Vec::new();
        let mut baselines = Vec::new();
        let mut engine = EngineKind::Lazy;
        let mut seeds: Vec<u64> = Vec::new();
        let mut decomposable = false;
        let mut local_evaluation: Option<bool> = None;
        let mut workers = None;
        let mut centralized_trials: Option<usize> = None;
        let mut eval_subset_size = None;
        let mut timing = false;
        let mut out = None;

        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Parse { line: line_no, msg };
            match (section.as_str(), key) {
                ("objective", "kind") => objective_kind = Some(value.to_string()),
                ("objective", other) => {
                    objective_params.insert(other.to_string(), value.to_string());
                }
                ("data", "file") => data_file = Some(PathBuf::from(value)),
                ("data", "format") => data_format = Some(value.to_string()),
                ("data", "generator") => generator = Some(value.to_string()),
                ("data", "normalize") => {
                    normalize = value
                        .parse()
                        .map_err(|_| bad(format!("bad bool {value:?}")))?
                }
                ("data", other) => {
                    generator_params.insert(other.to_string(), value.to_string());
                }
                ("sweep", "point") => {
                    let toks: Vec<&str> = value.split_whitespace().collect();
                    if toks.len() < 2 || toks.len() > 3 {
                        return Err(bad(format!("expected 'm k [kappa_factor]', got {value:?}")));
                    }
                    let m = toks[0].parse().map_err(|_| bad(format!("bad m {:?}", toks[0])))?;
                    let k = toks[1].parse().map_err(|_| bad(format!("bad k {:?}", toks[1])))?;
                    let kappa_factor: f64 = if toks.len() == 3 {
                        toks[2]
                            .parse()
                            .map_err(|_| bad(format!("bad kappa_factor {:?}", toks[2])))?
                    } else {
                        1.0
                    };
                    if !kappa_factor.is_finite() || kappa_factor <= 0.0 {
                        return Err(bad("kappa_factor must be > 0".into()));
                    }
                    sweep.push(SweepPoint { m, k, kappa_factor });
                }
                ("run", "engine") => engine = EngineKind::parse(value).map_err(|e| bad(e.to_string()))?,
                ("run", "baselines") => {
                    if value == "all" {
                        baselines = BaselineKind::all().to_vec();
                    } else if value != "none" {
                        for tok in value.split(',') {
                            baselines.push(
                                BaselineKind::parse(tok.trim()).map_err(|e| bad(e.to_string()))?,
                            );
                        }
                    }
                }
                ("run", "seeds") => {
                    seeds = parse_seed_list(value).map_err(|e| bad(e.to_string()))?;
                }
                ("run", "decomposable") => {
                    decomposable = value.parse().map_err(|_| bad(format!("bad bool {value:?}")))?
                }
                ("run", "local") => {
                    local_evaluation =
                        Some(value.parse().map_err(|_| bad(format!("bad bool {value:?}")))?)
                }
                ("run", "workers") => {
                    workers = Some(value.parse().map_err(|_| bad(format!("bad int {value:?}")))?)
                }
                ("run", "centralized-trials") => {
                    centralized_trials =
                        Some(value.parse().map_err(|_| bad(format!("bad int {value:?}")))?)
                }
                ("run", "eval-subset-size") => {
                    eval_subset_size =
                        Some(value.parse().map_err(|_| bad(format!("bad int {value:?}")))?)
                }
                ("run", "timing") => {
                    timing = value.parse().map_err(|_| bad(format!("bad bool {value:?}")))?
                }
                ("run", "out") => out = Some(PathBuf::from(value)),
                (sec, other) => {
                    return Err(bad(format!("unknown key {other:?} in section [{sec}]")));
                }
            }
        }

        let objective_kind =
            objective_kind.ok_or_else(|| Error::Config("missing [objective] kind".into()))?;
        let objective = ObjectiveKind::parse(&objective_kind, &objective_params)?;
        let data = match (data_file, generator) {
            (Some(path), None) => {
                let format = data_format.as_deref().unwrap_or("csv");
                data_spec_for_file(path, format)?
            }
            (None, Some(kind)) => DataSpec::Generator {
                kind,
                params: generator_params,
            },
            (Some(_), Some(_)) => {
                return Err(Error::Config("give either a data file or a generator, not both".into()))
            }
            (None, None) => return Err(Error::Config("missing [data] file or generator".into())),
        };
        if sweep.is_empty() {
            return Err(Error::Config("need at least one sweep point".into()));
        }
        if seeds.is_empty() {
            return Err(Error::Config("need at least one seed".into()));
        }
        let local_evaluation =
            local_evaluation.unwrap_or(matches!(objective, ObjectiveKind::Cut));
        let centralized_trials = centralized_trials.unwrap_or(if engine.randomized() {
            10
        } else {
            1
        });
        Ok(ExperimentConfig {
            objective,
            data,
            normalize,
            sweep,
            baselines,
            engine,
            seeds,
            decomposable,
            local_evaluation,
            workers,
            centralized_trials,
            eval_subset_size,
            timing,
            out,
        })
    }
}

pub fn data_spec_for_file(path: PathBuf, format: &str) -> Result<DataSpec> {
    match format {
        "csv" => Ok(DataSpec::VectorsFile { path, format: VectorFormat::Csv }),
        "binary-f32" => Ok(DataSpec::VectorsFile { path, format: VectorFormat::BinaryF32 }),
        "edges" => Ok(DataSpec::GraphFile { path, undirected: false }),
        "edges-undirected" => Ok(DataSpec::GraphFile { path, undirected: true }),
        "sets" => Ok(DataSpec::SetsFile { path }),
        other => Err(Error::UnknownKind(format!("data format {other:?}"))),
    }
}

/// "1,2,5" or "0..9" (inclusive).
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| Error::Config(format!("bad seed {a:?}")))?;
        let hi: u64 = b.trim().parse().map_err(|_| Error::Config(format!("bad seed {b:?}")))?;
        if hi < lo {
            return Err(Error::Config(format!("empty seed range {text:?}")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad seed {tok:?}")))
        })
        .collect()
}

/// One CSV row: a (method, sweep point, seed) measurement. A failed cell is
/// recorded with NaN value and ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: String,
    pub m: usize,
    pub k: usize,
    pub kappa: usize,
    pub seed: u64,
    pub value: f64,
    pub ratio: f64,
    pub oracle_calls: u64,
    pub ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<Row>,
}

impl ExperimentResult {
    pub fn mean_ratio(&self, method: &str, m: usize, k: usize) -> Option<f64> {
        let ratios: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.m == m && r.k == k && r.ratio.is_finite())
            .map(|r| r.ratio)
            .collect();
        if ratios.is_empty() {
            None
        } else {
            Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
        }
    }
}

struct CentralizedRun {
    value: f64,
    oracle_calls: u64,
    ms: u64,
}

fn centralized_value(
    f: &dyn Objective,
    engine: EngineKind,
    k: usize,
    seed: u64,
    trials: usize,
    timing: bool,
) -> Result<CentralizedRun> {
    let candidates: Vec<ElementId> = (0..f.n() as ElementId).collect();
    let start = Instant::now();
    let (value, calls) = if engine.randomized() {
        let constraint = Cardinality::new(k)?;
        let mut total = 0.0;
        let mut calls = 0;
        for t in 0..trials.max(1) {
            let mut rng = rng::stream(seed, S_CENTRALIZED + t as u64);
            let sol = random_greedy(f, &constraint, &candidates, &mut rng);
            total += sol.value;
            calls += sol.oracle_calls;
        }
        (total / trials.max(1) as f64, calls)
    } else {
        let sol = lazy_greedy_cardinality(f, &candidates, k)?;
        (sol.value, sol.oracle_calls)
    };
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(CentralizedRun {
        value,
        oracle_calls: calls,
        ms,
    })
}

/// Run the full sweep. Any failing cell is recorded as a NaN row and the
/// sweep continues.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    // objectives are reused across sweep points; generated data differs by
    // seed, file data does not
    let mut built: BTreeMap<u64, BuiltObjective> = BTreeMap::new();
    let build_seed = |seed: u64| -> u64 {
        if config.data.seed_dependent() {
            seed
        } else {
            0
        }
    };
    for &seed in &config.seeds {
        let key = build_seed(seed);
        if let std::collections::btree_map::Entry::Vacant(slot) = built.entry(key) {
            let dataset = load_dataset(&config.data, key)?;
            slot.insert(build_objective(&config.objective, &dataset, config.normalize)?);
        }
    }

    let mut centralized: BTreeMap<(u64, usize), CentralizedRun> = BTreeMap::new();
    let mut rows = Vec::new();

    for point in &config.sweep {
        let kappa = ((point.kappa_factor * point.k as f64).ceil() as usize).max(1);
        for &seed in &config.seeds {
            let f = built[&build_seed(seed)].as_objective();
            let central_key = (build_seed(seed), point.k);
            if let std::collections::btree_map::Entry::Vacant(slot) = centralized.entry(central_key)
            {
                slot.insert(centralized_value(
                    f,
                    config.engine,
                    point.k,
                    seed,
                    config.centralized_trials,
                    config.timing,
                )?);
            }
            let central = &centralized[&central_key];
            rows.push(Row {
                method: "centralized".to_string(),
                m: point.m,
                k: point.k,
                kappa,
                seed,
                value: central.value,
                ratio: 1.0,
                oracle_calls: central.oracle_calls,
                ms: central.ms,
            });

            let partition = partition_uniform(f.n(), point.m, seed)?;

            // the distributed run
            let start = Instant::now();
            let dist = run_distributed_cell(config, &built[&build_seed(seed)], point, kappa, seed);
            let ms = if config.timing { start.elapsed().as_millis() as u64 } else { 0 };
            match dist {
                Ok((value, oracle_calls)) => rows.push(Row {
                    method: "greedi".to_string(),
                    m: point.m,
                    k: point.k,
                    kappa,
                    seed,
                    value,
                    ratio: value / central.value,
                    oracle_calls,
                    ms,
                }),
                Err(_) => rows.push(Row {
                    method: "greedi".to_string(),
                    m: point.m,
                    k: point.k,
                    kappa,
                    seed,
                    value: f64::NAN,
                    ratio: f64::NAN,
                    oracle_calls: 0,
                    ms,
                }),
            }

            for &kind in &config.baselines {
                let start = Instant::now();
                let result = baseline(kind, f, &partition, point.k, seed, config.workers);
                let ms = if config.timing { start.elapsed().as_millis() as u64 } else { 0 };
                match result {
                    Ok(sol) => rows.push(Row {
                        method: kind.name().to_string(),
                        m: point.m,
                        k: point.k,
                        kappa,
                        seed,
                        value: sol.value,
                        ratio: sol.value / central.value,
                        oracle_calls: sol.oracle_calls,
                        ms,
                    }),
                    Err(_) => rows.push(Row {
                        method: kind.name().to_string(),
                        m: point.m,
                        k: point.k,
                        kappa,
                        seed,
                        value: f64::NAN,
                        ratio: f64::NAN,
                        oracle_calls: 0,
                        ms,
                    }),
                }
            }
        }
    }
    Ok(ExperimentResult { rows })
}

/// Run the distributed protocol for one cell, returning the size-k value
/// under the global objective plus total oracle calls.
fn run_distributed_cell(
    config: &ExperimentConfig,
    built: &BuiltObjective,
    point: &SweepPoint,
    kappa: usize,
    seed: u64,
) -> Result<(f64, u64)> {
    let f = built.as_objective();
    let partition = partition_uniform(f.n(), point.m, seed)?;
    if config.decomposable {
        let decomposable = built.as_decomposable().ok_or_else(|| {
            Error::Config(format!(
                "objective {} has no decomposable form",
                config.objective.name()
            ))
        })?;
        let mut gc = GreediConfig::new(point.m, point.k, seed);
        gc.kappa = kappa;
        gc.engine = config.engine;
        gc.workers = config.workers;
        gc.eval_subset_size = config.eval_subset_size;
        gc.decomposable = true;
        let (_, trace) = greedi_decomposable_with_partition(decomposable, &gc, &partition)?;
        // selection happened under the merge-stage scope; report globally
        let value = f.value(&trace.final_k.element_set());
        Ok((value, trace.oracle_calls + 1))
    } else if config.engine.randomized() || config.local_evaluation {
        let constraint = Cardinality::new(point.k)?;
        let (sol, trace) = greedi_general_with_partition(
            f,
            &constraint,
            config.engine,
            &partition,
            config.workers,
            config.local_evaluation,
        )?;
        Ok((sol.value, trace.oracle_calls))
    } else {
        let mut gc = GreediConfig::new(point.m, point.k, seed);
        gc.kappa = kappa;
        gc.engine = config.engine;
        gc.workers = config.workers;
        let (_, trace) = greedi_with_partition(f, &gc, &partition)?;
        Ok((trace.final_k.value, trace.oracle_calls))
    }
}

pub const CSV_HEADER: &str = "method,m,k,kappa,seed,value,ratio,oracle_calls,ms";

/// Render rows plus per-(method, m, k) mean and standard deviation rows
/// (seed column `mean` / `std`).
pub fn to_csv(result: &ExperimentResult) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.method, row.m, row.k, row.kappa, row.seed, row.value, row.ratio, row.oracle_calls, row.ms
        );
    }
    // aggregates, in first-appearance order of (method, m, k, kappa)
    let mut groups: Vec<(String, usize, usize, usize)> = Vec::new();
    for row in &result.rows {
        let key = (row.method.clone(), row.m, row.k, row.kappa);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (method, m, k, kappa) in groups {
        let values: Vec<&Row> = result
            .rows
            .iter()
            .filter(|r| r.method == method && r.m == m && r.k == k && r.kappa == kappa)
            .collect();
        let finite: Vec<f64> = values.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
        if finite.is_empty() {
            continue;
        }
        let mean = finite.iter().sum::<f64>() / finite.len() as f64;
        let var = finite.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / finite.len() as f64;
        let mean_value = values.iter().map(|r| r.value).filter(|v| v.is_finite()).sum::<f64>()
            / finite.len() as f64;
        let _ = writeln!(out, "{method},{m},{k},{kappa},mean,{mean_value},{mean},0,0");
        let _ = writeln!(out, "{method},{m},{k},{kappa},std,0,{},0,0", var.sqrt());
    }
    out
}

/// Parse a CSV produced by [`to_csv`]; aggregate rows are skipped, so the
/// result round-trips the measured rows exactly.
pub fn parse_csv(text: &str) -> Result<ExperimentResult> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        if fields[4] == "mean" || fields[4] == "std" {
            continue;
        }
        let bad = |what: &str| Error::Parse {
            line: idx + 1,
            msg: format!("bad {what}"),
        };
        rows.push(Row {
            method: fields[0].to_string(),
            m: fields[1].parse().map_err(|_| bad("m"))?,
            k: fields[2].parse().map_err(|_| bad("k"))?,
            kappa: fields[3].parse().map_err(|_| bad("kappa"))?,
            seed: fields[4].parse().map_err(|_| bad("seed"))?,
            value: fields[5].parse().map_err(|_| bad("value"))?,
            ratio: fields[6].parse().map_err(|_| bad("ratio"))?,
            oracle_calls: fields[7].parse().map_err(|_| bad("oracle_calls"))?,
            ms: fields[8].parse().map_err(|_| bad("ms"))?,
        });
    }
    Ok(ExperimentResult { rows })
}
