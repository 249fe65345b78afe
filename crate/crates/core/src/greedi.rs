//! The distributed layer: seeded partitioning, the two-round greedy
//! protocol (machines solve locally, solutions merge, a second solve picks
//! the final set), its black-box-engine generalization, the
//! machine-local-evaluation mode for decomposable objectives, the four
//! naive reference protocols, and the synchronized k-round protocol.
//!
//! Machines are simulated by a worker pool over shared immutable data;
//! machine-locality is enforced logically through the [`Partition`]. Every
//! random decision derives from `hash(seed, stream)` so results are
//! identical no matter how many workers execute the machine stage.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use rand::RngCore as _;

use crate::constraints::{Cardinality, Constraint};
use crate::engines::EngineKind;
use crate::error::{Error, Result};
use crate::objective::{Objective, Solution};
use crate::objectives::{Decomposable, Restricted};
use crate::rng;
use crate::set::{ElementId, ElementSet};

// rng stream labels; machine-indexed streams are offset by the index
const S_PARTITION: u64 = 0x50;
const S_MERGE: u64 = 0x51;
const S_EVAL_SUBSET: u64 = 0x52;
const S_BASELINE_FINAL: u64 = 0x53;
const S_MACHINE: u64 = 0x1000;
const S_BASELINE: u64 = 0x2000;

/// A seeded assignment of ground-set elements to `m` machines.
#[derive(Debug, Clone)]
pub struct Partition {
    m: usize,
    seed: u64,
    assignment: Vec<usize>,
    blocks: Vec<Vec<ElementId>>,
}

/// Assign each of `n` elements to one of `m` machines independently and
/// uniformly at random. The same `(n, m, seed)` triple produces the same
/// assignment on any platform.
pub fn partition_uniform(n: usize, m: usize, seed: u64) -> Result<Partition> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidParameter(format!(
            "partition needs n >= 1 and m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = rng::stream(seed, S_PARTITION);
    let assignment: Vec<usize> = (0..n).map(|_| (rng.next_u64() % m as u64) as usize).collect();
    Ok(Partition::from_assignment(assignment, m, seed))
}

impl Partition {
    pub fn from_assignment(assignment: Vec<usize>, m: usize, seed: u64) -> Partition {
        let mut blocks = vec![Vec::new(); m];
        for (e, &machine) in assignment.iter().enumerate() {
            blocks[machine].push(e as ElementId);
        }
        Partition {
            m,
            seed,
            assignment,
            blocks,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn machine_of(&self, e: ElementId) -> usize {
        self.assignment[e as usize]
    }

    pub fn block(&self, machine: usize) -> &[ElementId] {
        &self.blocks[machine]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// Parameters of a distributed run.
#[derive(Debug, Clone)]
pub struct GreediConfig {
    pub m: usize,
    /// Final solution size.
    pub k: usize,
    /// Per-machine (and merge-stage) budget; `>= k` in the guarantee
    /// regime, but smaller values are allowed for experiments.
    pub kappa: usize,
    pub engine: EngineKind,
    /// Evaluate machine stages against machine-local scopes (decomposable
    /// objectives) instead of the global oracle.
    pub decomposable: bool,
    pub seed: u64,
    /// Worker pool cap; `None` uses the available parallelism.
    pub workers: Option<usize>,
    /// Override for the merge-stage evaluation scope size in decomposable
    /// mode (defaults to `ceil(n / m)`).
    pub eval_subset_size: Option<usize>,
}

impl GreediConfig {
    pub fn new(m: usize, k: usize, seed: u64) -> Self {
        GreediConfig {
            m,
            k,
            kappa: k,
            engine: EngineKind::Lazy,
            decomposable: false,
            seed,
            workers: None,
            eval_subset_size: None,
        }
    }

    /// Set `kappa = ceil(alpha * k)`.
    pub fn kappa_factor(mut self, alpha: f64) -> Self {
        self.kappa = ((alpha * self.k as f64).ceil() as usize).max(1);
        self
    }

    fn worker_count(&self) -> usize {
        self.workers.unwrap_or_else(default_workers)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Everything observable about one distributed run. `final_kappa` is the
/// protocol's own output (budget `kappa` throughout); `final_k` is the
/// size-`k` surface used for paired comparisons, obtained by truncating
/// selection prefixes and re-evaluating.
#[derive(Debug, Clone)]
pub struct GreediTrace {
    pub m: usize,
    pub k: usize,
    pub kappa: usize,
    pub seed: u64,
    /// Per-machine solutions, values as reported by the machines (these are
    /// machine-local values when running in a local-evaluation mode).
    pub machine_solutions: Vec<Solution>,
    /// Index of the best-reporting machine.
    pub best_machine: usize,
    /// Best single-machine solution, valued under the merge-stage
    /// comparison objective.
    pub best_single: Solution,
    /// Union of the machine solutions, in machine-major selection order.
    pub merged: Vec<ElementId>,
    /// Merge-stage solution truncated to `kappa`.
    pub merge_kappa: Solution,
    /// Merge-stage solution truncated to `k`.
    pub merge_k: Solution,
    pub final_kappa: Solution,
    pub final_k: Solution,
    /// Elements shipped to the merge stage: sum of machine solution sizes.
    pub shipped_elements: usize,
    /// Total oracle calls across machines, merge, and re-evaluations.
    pub oracle_calls: u64,
}

impl GreediTrace {
    /// Line-oriented rendering with a stable field order, for diff-based
    /// comparisons.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "run m={} k={} kappa={} seed={}",
            self.m, self.k, self.kappa, self.seed
        );
        for (i, sol) in self.machine_solutions.iter().enumerate() {
            let _ = writeln!(
                out,
                "machine {} value={} calls={} elements={}",
                i,
                sol.value,
                sol.oracle_calls,
                join_ids(&sol.elements)
            );
        }
        let _ = writeln!(out, "best_machine {}", self.best_machine);
        let _ = writeln!(out, "merged count={} elements={}", self.merged.len(), join_ids(&self.merged));
        let _ = writeln!(
            out,
            "merge value={} calls={} elements={}",
            self.merge_kappa.value,
            self.merge_kappa.oracle_calls,
            join_ids(&self.merge_kappa.elements)
        );
        let _ = writeln!(
            out,
            "merge_k value={} elements={}",
            self.merge_k.value,
            join_ids(&self.merge_k.elements)
        );
        let _ = writeln!(
            out,
            "final value={} elements={}",
            self.final_kappa.value,
            join_ids(&self.final_kappa.elements)
        );
        let _ = writeln!(
            out,
            "final_k value={} elements={}",
            self.final_k.value,
            join_ids(&self.final_k.elements)
        );
        let _ = writeln!(out, "shipped {}", self.shipped_elements);
        let _ = writeln!(out, "calls {}", self.oracle_calls);
        out
    }
}

fn join_ids(ids: &[ElementId]) -> String {
    let toks: Vec<String> = ids.iter().map(|e| e.to_string()).collect();
    toks.join(",")
}

/// Fan `count` index-addressed jobs over at most `workers` threads; the
/// result order is by index, so worker scheduling cannot leak into output.
pub(crate) fn run_indexed<T: Send>(
    count: usize,
    workers: usize,
    job: &(dyn Fn(usize) -> T + Sync),
) -> Vec<T> {
    let workers = workers.max(1).min(count.max(1));
    if workers <= 1 || count <= 1 {
        return (0..count).map(job).collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= count {
                    break;
                }
                if tx.send((i, job(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
        for (i, value) in rx {
            slots[i] = Some(value);
        }
        slots.into_iter().map(|s| s.expect("job completed")).collect()
    })
}

/// Prefer `b` only when strictly better; ties keep the best-single-machine
/// candidate stable.
fn better(a: Solution, b: Solution) -> Solution {
    if b.value > a.value {
        b
    } else {
        a
    }
}

fn best_index(solutions: &[Solution]) -> usize {
    let mut best = 0;
    for (i, s) in solutions.iter().enumerate().skip(1) {
        if s.value > solutions[best].value {
            best = i;
        }
    }
    best
}

/// Two-round distributed maximization under a cardinality budget: each
/// machine runs the configured engine up to `kappa` elements on its block,
/// the union of the machine solutions is solved again with the same budget,
/// and the better of the best machine solution and the merge solution wins.
pub fn greedi(f: &dyn Objective, config: &GreediConfig) -> Result<(Solution, GreediTrace)> {
    let partition = partition_uniform(f.n(), config.m, config.seed)?;
    greedi_with_partition(f, config, &partition)
}

pub fn greedi_with_partition(
    f: &dyn Objective,
    config: &GreediConfig,
    partition: &Partition,
) -> Result<(Solution, GreediTrace)> {
    if config.kappa < 1 {
        return Err(Error::InvalidParameter("kappa must be >= 1".into()));
    }
    if partition.m() != config.m || partition.n() != f.n() {
        return Err(Error::InvalidParameter(
            "partition does not match the configuration".into(),
        ));
    }
    let kappa = config.kappa;
    let engine = config.engine;
    let seed = config.seed;

    let machine_results: Vec<Result<Solution>> =
        run_indexed(config.m, config.worker_count(), &|i| {
            let block = partition.block(i);
            if block.is_empty() {
                return Ok(Solution::empty(f, engine.name()));
            }
            let constraint = Cardinality::new(kappa)?;
            let mut machine_rng = rng::stream(seed, S_MACHINE + i as u64);
            engine.solve(f, &constraint, block, &mut machine_rng)
        });
    let machine_solutions: Vec<Solution> =
        machine_results.into_iter().collect::<Result<Vec<_>>>()?;

    let best_machine = best_index(&machine_solutions);
    let merged: Vec<ElementId> = machine_solutions
        .iter()
        .flat_map(|s| s.elements.iter().copied())
        .collect();
    let shipped_elements = merged.len();

    // one merge run at the larger budget; both reported surfaces are
    // selection prefixes of it
    let merge_budget = kappa.max(config.k).max(1);
    let constraint = Cardinality::new(merge_budget)?;
    let mut merge_rng = rng::stream(seed, S_MERGE);
    let merge_full = engine.solve(f, &constraint, &merged, &mut merge_rng)?;
    let merge_kappa = merge_full.truncated(kappa, f);
    let merge_k = merge_full.truncated(config.k, f);

    let best_single = machine_solutions[best_machine].clone();
    let final_kappa = better(best_single.clone(), merge_kappa.clone());
    let final_k = better(best_single.truncated(config.k, f), merge_k.clone());

    let oracle_calls = machine_solutions
        .iter()
        .map(|s| s.oracle_calls)
        .sum::<u64>()
        + merge_full.oracle_calls
        + (merge_kappa.oracle_calls - merge_full.oracle_calls)
        + (merge_k.oracle_calls - merge_full.oracle_calls);

    let trace = GreediTrace {
        m: config.m,
        k: config.k,
        kappa,
        seed,
        machine_solutions,
        best_machine,
        best_single,
        merged,
        merge_kappa,
        merge_k,
        final_kappa: final_kappa.clone(),
        final_k,
        shipped_elements,
        oracle_calls,
    };
    Ok((final_kappa, trace))
}

/// Two-round distributed maximization with an arbitrary constraint and a
/// black-box engine: machines produce feasible sets, the merge stage solves
/// over their union, and the better of best-machine and merge wins.
///
/// With `local_evaluation`, round one scores candidates against each
/// machine's local restriction of the objective (when it has one); the
/// final comparison is always under the global objective.
pub fn greedi_general(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    engine: EngineKind,
    m: usize,
    seed: u64,
    workers: Option<usize>,
    local_evaluation: bool,
) -> Result<(Solution, GreediTrace)> {
    let partition = partition_uniform(f.n(), m, seed)?;
    greedi_general_with_partition(f, constraint, engine, &partition, workers, local_evaluation)
}

pub fn greedi_general_with_partition(
    f: &dyn Objective,
    constraint: &dyn Constraint,
    engine: EngineKind,
    partition: &Partition,
    workers: Option<usize>,
    local_evaluation: bool,
) -> Result<(Solution, GreediTrace)> {
    let m = partition.m();
    let seed = partition.seed();
    let workers = workers.unwrap_or_else(default_workers);

    let machine_results: Vec<Result<Solution>> = run_indexed(m, workers, &|i| {
        let block = partition.block(i);
        if block.is_empty() {
            return Ok(Solution::empty(f, engine.name()));
        }
        let mut machine_rng = rng::stream(seed, S_MACHINE + i as u64);
        let local = if local_evaluation {
            f.local_restriction(block)
        } else {
            None
        };
        let view: &dyn Objective = local.as_deref().unwrap_or(f);
        engine.solve(view, constraint, block, &mut machine_rng)
    });
    let machine_solutions: Vec<Solution> =
        machine_results.into_iter().collect::<Result<Vec<_>>>()?;

    let best_machine = best_index(&machine_solutions);
    let merged: Vec<ElementId> = machine_solutions
        .iter()
        .flat_map(|s| s.elements.iter().copied())
        .collect();
    let shipped_elements = merged.len();

    let mut merge_rng = rng::stream(seed, S_MERGE);
    let merge = engine.solve(f, constraint, &merged, &mut merge_rng)?;

    // the best machine set re-valued globally for the final comparison
    let mut best_single = machine_solutions[best_machine].clone();
    best_single.value = f.value(&best_single.element_set());
    best_single.oracle_calls += 1;

    let final_sol = better(best_single.clone(), merge.clone());
    let oracle_calls = machine_solutions
        .iter()
        .map(|s| s.oracle_calls)
        .sum::<u64>()
        + merge.oracle_calls
        + 1;

    let rho = constraint.rho();
    let trace = GreediTrace {
        m,
        k: rho,
        kappa: rho,
        seed,
        machine_solutions,
        best_machine,
        best_single,
        merged,
        merge_kappa: merge.clone(),
        merge_k: merge,
        final_kappa: final_sol.clone(),
        final_k: final_sol.clone(),
        shipped_elements,
        oracle_calls,
    };
    Ok((final_sol, trace))
}

/// Two-round distributed maximization with machine-local evaluation of a
/// decomposable objective: machine `i` greedily optimizes the mean of the
/// components it holds, and the merge stage optimizes the mean over a
/// uniformly sampled scope of `ceil(n/m)` elements. Both final candidates
/// are compared under that merge-stage scope.
pub fn greedi_decomposable(
    f: &dyn Decomposable,
    config: &GreediConfig,
) -> Result<(Solution, GreediTrace)> {
    let partition = partition_uniform(f.n(), config.m, config.seed)?;
    greedi_decomposable_with_partition(f, config, &partition)
}

pub fn greedi_decomposable_with_partition(
    f: &dyn Decomposable,
    config: &GreediConfig,
    partition: &Partition,
) -> Result<(Solution, GreediTrace)> {
    if config.kappa < 1 {
        return Err(Error::InvalidParameter("kappa must be >= 1".into()));
    }
    if partition.m() != config.m || partition.n() != f.n() {
        return Err(Error::InvalidParameter(
            "partition does not match the configuration".into(),
        ));
    }
    let kappa = config.kappa;
    let engine = config.engine;
    let seed = config.seed;
    let n = f.n();

    let machine_results: Vec<Result<Solution>> =
        run_indexed(config.m, config.worker_count(), &|i| {
            let block = partition.block(i);
            if block.is_empty() {
                return Ok(Solution {
                    elements: Vec::new(),
                    value: 0.0,
                    oracle_calls: 0,
                    provenance: engine.name().to_string(),
                });
            }
            let view = Restricted::new(f, block.to_vec())?;
            let constraint = Cardinality::new(kappa)?;
            let mut machine_rng = rng::stream(seed, S_MACHINE + i as u64);
            engine.solve(&view, &constraint, block, &mut machine_rng)
        });
    let machine_solutions: Vec<Solution> =
        machine_results.into_iter().collect::<Result<Vec<_>>>()?;

    let best_machine = best_index(&machine_solutions);
    let merged: Vec<ElementId> = machine_solutions
        .iter()
        .flat_map(|s| s.elements.iter().copied())
        .collect();
    let shipped_elements = merged.len();

    // merge-stage evaluation scope: a fresh uniform sample of the ground set
    let scope_size = config.eval_subset_size.unwrap_or(n.div_ceil(config.m)).clamp(1, n);
    let mut subset_rng = rng::stream(seed, S_EVAL_SUBSET);
    let mut scope: Vec<ElementId> = rand::seq::index::sample(&mut subset_rng, n, scope_size)
        .iter()
        .map(|i| i as ElementId)
        .collect();
    scope.sort_unstable();
    let merge_view = Restricted::new(f, scope)?;

    let merge_budget = kappa.max(config.k).max(1);
    let constraint = Cardinality::new(merge_budget)?;
    let mut merge_rng = rng::stream(seed, S_MERGE);
    let merge_full = engine.solve(&merge_view, &constraint, &merged, &mut merge_rng)?;
    let merge_kappa = merge_full.truncated(kappa, &merge_view);
    let merge_k = merge_full.truncated(config.k, &merge_view);

    // the best machine set must be re-valued under the merge-stage scope;
    // machine-local values are not comparable across machines
    let mut best_single = machine_solutions[best_machine].clone();
    best_single.value = merge_view.value(&best_single.element_set());
    best_single.oracle_calls += 1;

    let final_kappa = better(best_single.clone(), merge_kappa.clone());
    let final_k = better(
        best_single.truncated(config.k, &merge_view),
        merge_k.clone(),
    );

    let oracle_calls = machine_solutions
        .iter()
        .map(|s| s.oracle_calls)
        .sum::<u64>()
        + merge_full.oracle_calls
        + 1
        + (merge_kappa.oracle_calls - merge_full.oracle_calls)
        + (merge_k.oracle_calls - merge_full.oracle_calls);

    let trace = GreediTrace {
        m: config.m,
        k: config.k,
        kappa,
        seed,
        machine_solutions,
        best_machine,
        best_single,
        merged,
        merge_kappa,
        merge_k,
        final_kappa: final_kappa.clone(),
        final_k: final_k.clone(),
        shipped_elements,
        oracle_calls,
    };
    Ok((final_k, trace))
}

/// The four reference two-round protocols, run over the same partition as
/// the main protocol for paired comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Machines pick k random elements; the final k are random again.
    RandomRandom,
    /// Machines pick k random elements; greedy runs over the merged pool.
    RandomGreedy,
    /// Machines greedily pick k/m elements; the union is the output.
    GreedyMerge,
    /// Machines greedily pick k elements; the best single machine wins.
    GreedyMax,
}

impl BaselineKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineKind::RandomRandom => "random_random",
            BaselineKind::RandomGreedy => "random_greedy",
            BaselineKind::GreedyMerge => "greedy_merge",
            BaselineKind::GreedyMax => "greedy_max",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "random_random" => Ok(BaselineKind::RandomRandom),
            "random_greedy" => Ok(BaselineKind::RandomGreedy),
            "greedy_merge" => Ok(BaselineKind::GreedyMerge),
            "greedy_max" => Ok(BaselineKind::GreedyMax),
            other => Err(Error::UnknownKind(format!("baseline {other:?}"))),
        }
    }

    pub fn all() -> [BaselineKind; 4] {
        [
            BaselineKind::RandomRandom,
            BaselineKind::RandomGreedy,
            BaselineKind::GreedyMerge,
            BaselineKind::GreedyMax,
        ]
    }
}

/// Run one reference protocol. `seed` drives the random picks; the
/// partition is shared with the paired main-protocol run.
pub fn baseline(
    kind: BaselineKind,
    f: &dyn Objective,
    partition: &Partition,
    k: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<Solution> {
    if k < 1 {
        return Err(Error::InvalidParameter("baseline budget must be >= 1".into()));
    }
    let m = partition.m();
    let workers = workers.unwrap_or_else(default_workers);
    match kind {
        BaselineKind::RandomRandom => {
            let merged = random_machine_picks(partition, k, seed);
            let mut rng = rng::stream(seed, S_BASELINE_FINAL);
            let take = k.min(merged.len());
            let chosen: Vec<ElementId> = rand::seq::index::sample(&mut rng, merged.len(), take)
                .iter()
                .map(|i| merged[i])
                .collect();
            let value = f.value(&ElementSet::from_slice(&chosen));
            Ok(Solution {
                elements: chosen,
                value,
                oracle_calls: 1,
                provenance: kind.name().to_string(),
            })
        }
        BaselineKind::RandomGreedy => {
            let merged = random_machine_picks(partition, k, seed);
            let constraint = Cardinality::new(k)?;
            let mut sol = crate::engines::lazy_greedy(f, &constraint, &merged, k)?;
            sol.provenance = kind.name().to_string();
            Ok(sol)
        }
        BaselineKind::GreedyMerge => {
            let per_machine = (k / m).max(1);
            let machine_solutions = greedy_machine_runs(f, partition, per_machine, workers)?;
            let mut elements: Vec<ElementId> = machine_solutions
                .iter()
                .flat_map(|s| s.elements.iter().copied())
                .collect();
            elements.truncate(k);
            let value = f.value(&ElementSet::from_slice(&elements));
            let oracle_calls =
                machine_solutions.iter().map(|s| s.oracle_calls).sum::<u64>() + 1;
            Ok(Solution {
                elements,
                value,
                oracle_calls,
                provenance: kind.name().to_string(),
            })
        }
        BaselineKind::GreedyMax => {
            let machine_solutions = greedy_machine_runs(f, partition, k, workers)?;
            let best = best_index(&machine_solutions);
            let total_calls = machine_solutions.iter().map(|s| s.oracle_calls).sum::<u64>();
            let mut sol = machine_solutions[best].clone();
            sol.oracle_calls = total_calls;
            sol.provenance = kind.name().to_string();
            Ok(sol)
        }
    }
}

fn random_machine_picks(partition: &Partition, k: usize, seed: u64) -> Vec<ElementId> {
    let mut merged = Vec::new();
    for i in 0..partition.m() {
        let block = partition.block(i);
        if block.is_empty() {
            continue;
        }
        let take = k.min(block.len());
        let mut rng = rng::stream(seed, S_BASELINE + i as u64);
        merged.extend(
            rand::seq::index::sample(&mut rng, block.len(), take)
                .iter()
                .map(|j| block[j]),
        );
    }
    merged
}

fn greedy_machine_runs(
    f: &dyn Objective,
    partition: &Partition,
    budget: usize,
    workers: usize,
) -> Result<Vec<Solution>> {
    let results: Vec<Result<Solution>> = run_indexed(partition.m(), workers, &|i| {
        let block = partition.block(i);
        if block.is_empty() {
            return Ok(Solution::empty(f, "lazy_greedy"));
        }
        let constraint = Cardinality::new(budget)?;
        crate::engines::lazy_greedy(f, &constraint, block, budget)
    });
    results.into_iter().collect()
}

/// The synchronized k-round protocol: every round each machine proposes its
/// best local candidate and the coordinator admits the global best. Output
/// is bit-identical to centralized greedy; the returned counts are the
/// rounds executed and the candidate messages exchanged (`m` per round).
pub fn naive_kround_greedy(
    f: &dyn Objective,
    partition: &Partition,
    k: usize,
) -> Result<(Solution, usize, usize)> {
    let mut ev = f.evaluator();
    let mut chosen: Vec<ElementId> = Vec::new();
    let monotone = f.monotone();
    let mut rounds = 0usize;
    let mut messages = 0usize;
    while chosen.len() < k {
        rounds += 1;
        // every machine sends one proposal per round (possibly "none"),
        // which is exactly the synchronization cost the two-round protocol
        // avoids: k rounds of m messages
        messages += partition.m();
        let mut global_best: Option<(f64, ElementId)> = None;
        for i in 0..partition.m() {
            let mut machine_best: Option<(f64, ElementId)> = None;
            for &e in partition.block(i) {
                if ev.selection().contains(e) {
                    continue;
                }
                let g = ev.gain(e);
                if machine_best.is_none_or(|(bg, be)| crate::engines::beats(g, e, bg, be)) {
                    machine_best = Some((g, e));
                }
            }
            if let Some((g, e)) = machine_best {
                if global_best.is_none_or(|(bg, be)| crate::engines::beats(g, e, bg, be)) {
                    global_best = Some((g, e));
                }
            }
        }
        match global_best {
            None => {
                rounds -= 1;
                messages -= partition.m();
                break;
            }
            Some((g, e)) => {
                if g < 0.0 && !monotone {
                    rounds -= 1;
                    messages -= partition.m();
                    break;
                }
                ev.accept(e);
                chosen.push(e);
            }
        }
    }
    let calls = ev.calls();
    drop(ev);
    let value = f.value(&ElementSet::from_slice(&chosen));
    Ok((
        Solution {
            elements: chosen,
            value,
            oracle_calls: calls + 1,
            provenance: "naive_kround".to_string(),
        },
        rounds,
        messages,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::greedy_cardinality;
    use crate::objectives::{ConstantComponents, Coverage, Exemplar, Modular};
    use std::sync::Arc;

    #[test]
    fn partition_is_deterministic_and_covering() {
        let a = partition_uniform(10, 3, 7).unwrap();
        let b = partition_uniform(10, 3, 7).unwrap();
        assert_eq!(a.assignment(), b.assignment());
        let total: usize = (0..3).map(|i| a.block(i).len()).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn single_machine_gets_everything() {
        let p = partition_uniform(5, 1, 0).unwrap();
        assert_eq!(p.block(0).len(), 5);
    }

    #[test]
    fn partition_rejects_zero_machines() {
        assert!(partition_uniform(5, 0, 0).is_err());
    }

    #[test]
    fn single_machine_run_equals_centralized() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4, 5], vec![2]]);
        let config = GreediConfig::new(1, 3, 11);
        let (sol, trace) = greedi(&f, &config).unwrap();
        let central = greedy_cardinality(&f, &(0..5).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(sol.elements, central.elements);
        assert_eq!(trace.final_k.value, central.value);
    }

    #[test]
    fn modular_objective_recovers_the_optimum() {
        let weights = vec![9.0, 1.0, 7.0, 3.0, 8.0, 2.0, 6.0, 4.0];
        let f = Modular::new(weights.clone());
        for m in [2, 3] {
            let config = GreediConfig::new(m, 3, 5);
            let (sol, _) = greedi(&f, &config).unwrap();
            assert_eq!(sol.value, 9.0 + 8.0 + 7.0);
        }
    }

    #[test]
    fn final_value_dominates_both_candidates() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4, 5], vec![2], vec![5]]);
        let config = GreediConfig::new(3, 2, 2);
        let (_, trace) = greedi(&f, &config).unwrap();
        assert!(trace.final_kappa.value >= trace.best_single.value);
        assert!(trace.final_kappa.value >= trace.merge_kappa.value);
        assert!(trace.shipped_elements <= 3 * 2);
    }

    #[test]
    fn trace_is_identical_across_worker_counts() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4, 5], vec![2], vec![5]]);
        let mut base = GreediConfig::new(4, 2, 9);
        base.workers = Some(1);
        let (_, t1) = greedi(&f, &base).unwrap();
        base.workers = Some(8);
        let (_, t8) = greedi(&f, &base).unwrap();
        assert_eq!(t1.render(), t8.render());
    }

    #[test]
    fn decomposable_single_machine_matches_global_greedy() {
        let data = crate::data::gen_gaussian_mixture(2, 60, 2, 0.3, 21).unwrap();
        let f = Exemplar::new(Arc::new(data), 2.0).unwrap();
        let mut config = GreediConfig::new(1, 3, 21);
        config.decomposable = true;
        let (sol, _) = greedi_decomposable(&f, &config).unwrap();
        let central = greedy_cardinality(&f, &(0..60).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(sol.elements, central.elements);
    }

    #[test]
    fn decomposable_flat_components_stay_flat() {
        let f = ConstantComponents::new(12, 0.5).unwrap();
        let config = GreediConfig::new(3, 2, 2);
        let (sol, _) = greedi_decomposable(&f, &config).unwrap();
        assert_eq!(sol.value, 0.5);
    }

    #[test]
    fn baselines_run_and_respect_k() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4, 5], vec![2], vec![5]]);
        let p = partition_uniform(6, 2, 3).unwrap();
        for kind in BaselineKind::all() {
            let sol = baseline(kind, &f, &p, 2, 3, Some(1)).unwrap();
            assert!(sol.len() <= 2, "{} overshot the budget", kind.name());
            let direct = f.value(&sol.element_set());
            assert!((sol.value - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn greedy_max_single_machine_is_centralized() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4]]);
        let p = partition_uniform(4, 1, 0).unwrap();
        let sol = baseline(BaselineKind::GreedyMax, &f, &p, 2, 0, None).unwrap();
        let central = greedy_cardinality(&f, &(0..4).collect::<Vec<_>>(), 2).unwrap();
        assert_eq!(sol.elements, central.elements);
    }

    #[test]
    fn random_random_with_full_budget_takes_everything() {
        let f = Coverage::new(vec![vec![0], vec![1], vec![2], vec![3]]);
        let p = partition_uniform(4, 2, 5).unwrap();
        let sol = baseline(BaselineKind::RandomRandom, &f, &p, 4, 5, None).unwrap();
        assert_eq!(sol.value, f.value(&ElementSet::from_slice(&[0, 1, 2, 3])));
    }

    #[test]
    fn kround_protocol_matches_centralized_greedy() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3], vec![4, 5], vec![2], vec![5]]);
        let p = partition_uniform(6, 3, 13).unwrap();
        let k = 3;
        let (sol, rounds, messages) = naive_kround_greedy(&f, &p, k).unwrap();
        let central = greedy_cardinality(&f, &(0..6).collect::<Vec<_>>(), k).unwrap();
        assert_eq!(sol.elements, central.elements);
        assert_eq!(rounds, k);
        assert_eq!(messages, k * p.m());
    }

    #[test]
    fn render_is_stable() {
        let f = Coverage::new(vec![vec![0, 1], vec![1, 2], vec![3]]);
        let config = GreediConfig::new(2, 2, 4);
        let (_, t) = greedi(&f, &config).unwrap();
        let text = t.render();
        assert!(text.starts_with("run m=2 k=2 kappa=2 seed=4\n"));
        assert!(text.contains("best_machine "));
        assert!(text.ends_with(&format!("calls {}\n", t.oracle_calls)));
    }
}
