//! Seeded check suites behind the `verify` CLI subcommand: structural
//! soundness of every shipped objective, approximation bounds on
//! brute-forceable instances, smoothness probes, and the two-round
//! tightness grid. Each check yields one printable line.

use std::sync::Arc;

use rand::Rng as _;

use crate::constraints::Cardinality;
use crate::data::{gen_gaussian_mixture, VectorDataset};
use crate::engines::{greedy_cardinality, tau, EngineKind};
use crate::error::Result;
use crate::greedi::{greedi_general, greedi_with_partition, partition_uniform, GreediConfig};
use crate::objective::Objective;
use crate::objectives::{
    exemplar_lambda, info_gain_lambda, lipschitz_probe, Coverage, DppLogDet, EuclideanMetric,
    Exemplar, GraphCut, InfoGain, Modular, SeKernel,
};
use crate::rng::{stream, Rng};
use crate::set::ElementId;
use crate::structure::{verify_monotone, verify_submodular};
use crate::verify::{brute_force_opt, check_bound, exact_two_round, worst_case_instance, Bound};

/// One suite check, printable as a single line.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn line(&self) -> String {
        format!(
            "{} {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Objective families available to the random-instance pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Coverage,
    Modular,
    Exemplar,
    InfoGain,
    Cut,
    Dpp,
}

impl InstanceKind {
    pub fn monotone_pool() -> [InstanceKind; 4] {
        [
            InstanceKind::Coverage,
            InstanceKind::Modular,
            InstanceKind::Exemplar,
            InstanceKind::InfoGain,
        ]
    }

    pub fn all() -> [InstanceKind; 6] {
        [
            InstanceKind::Coverage,
            InstanceKind::Modular,
            InstanceKind::Exemplar,
            InstanceKind::InfoGain,
            InstanceKind::Cut,
            InstanceKind::Dpp,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::Coverage => "coverage",
            InstanceKind::Modular => "modular",
            InstanceKind::Exemplar => "exemplar",
            InstanceKind::InfoGain => "infogain",
            InstanceKind::Cut => "cut",
            InstanceKind::Dpp => "dpp",
        }
    }
}

/// A random small instance of the given family over `n` elements.
pub fn random_objective(kind: InstanceKind, n: usize, rng: &mut Rng) -> Box<dyn Objective> {
    match kind {
        InstanceKind::Coverage => {
            let universe = rng.random_range(n..2 * n + 2);
            let sets: Vec<Vec<u32>> = (0..n)
                .map(|_| {
                    let size = rng.random_range(1..=3.min(universe));
                    (0..size)
                        .map(|_| rng.random_range(0..universe as u32))
                        .collect()
                })
                .collect();
            Box::new(Coverage::new(sets))
        }
        InstanceKind::Modular => {
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
            Box::new(Modular::new(weights))
        }
        InstanceKind::Exemplar => {
            let data = random_points(n, 2, rng);
            Box::new(Exemplar::new(Arc::new(data), if rng.random::<bool>() { 1.0 } else { 2.0 }).expect("valid exemplar instance"))
        }
        InstanceKind::InfoGain => {
            let data = random_points(n, 2, rng);
            let h = rng.random_range(0.5..2.0);
            let sigma = rng.random_range(0.5..1.5);
            Box::new(InfoGain::new(
                Arc::new(data),
                SeKernel::new(h, sigma).expect("valid kernel"),
            ))
        }
        InstanceKind::Cut => {
            let mut arcs = Vec::new();
            for u in 0..n as u32 {
                for v in 0..n as u32 {
                    if u != v && rng.random::<f64>() < 0.4 {
                        arcs.push((u, v, rng.random_range(0.5..2.0)));
                    }
                }
            }
            Box::new(GraphCut::new(n, &arcs).expect("valid graph"))
        }
        InstanceKind::Dpp => {
            // A * A^T + c I is symmetric positive definite
            let d = n + 1;
            let a: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut kernel = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let mut dot = 0.0;
                    for t in 0..d {
                        dot += a[i * d + t] * a[j * d + t];
                    }
                    if i == j {
                        dot += 1.5;
                    }
                    kernel[i * n + j] = dot;
                    kernel[j * n + i] = dot;
                }
            }
            Box::new(DppLogDet::new(kernel, n).expect("kernel is PD by construction"))
        }
    }
}

fn random_points(n: usize, d: usize, rng: &mut Rng) -> VectorDataset {
    let data: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    VectorDataset::new(n, d, data).expect("finite points")
}

/// Structural suite: every shipped objective family is spot-checked for
/// submodularity on random small instances, monotone-flagged families for
/// monotonicity, and the cut function must produce a monotonicity
/// counterexample.
pub fn structure_suite(instances_per_kind: usize, seed: u64) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    for kind in InstanceKind::all() {
        let mut submodular_ok = true;
        let mut monotone_ok = true;
        let mut detail = String::new();
        for i in 0..instances_per_kind {
            let mut rng = stream(seed, 0x57_0000 + i as u64);
            let n = rng.random_range(4..=8);
            let f = random_objective(kind, n, &mut rng);
            if let Some(w) = verify_submodular(f.as_ref()).expect("n is small") {
                submodular_ok = false;
                detail = format!(
                    "instance {i}: gain({:?},{}) < gain({:?},{})",
                    w.a.as_sorted_slice(),
                    w.element,
                    w.b.as_sorted_slice(),
                    w.element
                );
                break;
            }
            if f.monotone() {
                if let Some(w) = verify_monotone(f.as_ref()).expect("n is small") {
                    monotone_ok = false;
                    detail = format!(
                        "instance {i}: f({:?}) > f({:?})",
                        w.a.as_sorted_slice(),
                        w.b.as_sorted_slice()
                    );
                    break;
                }
            }
        }
        lines.push(CheckLine {
            name: format!("structure-submodular-{}", kind.name()),
            passed: submodular_ok,
            detail: if submodular_ok {
                format!("{instances_per_kind} random instances")
            } else {
                detail.clone()
            },
        });
        if matches!(
            kind,
            InstanceKind::Coverage | InstanceKind::Modular | InstanceKind::Exemplar | InstanceKind::InfoGain
        ) {
            lines.push(CheckLine {
                name: format!("structure-monotone-{}", kind.name()),
                passed: monotone_ok,
                detail: if monotone_ok {
                    format!("{instances_per_kind} random instances")
                } else {
                    detail.clone()
                },
            });
        }
    }

    // the cut function must fail monotonicity with a concrete witness
    let cut = GraphCut::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).expect("valid graph");
    let witness = verify_monotone(&cut).expect("n is small");
    lines.push(CheckLine {
        name: "structure-cut-counterexample".to_string(),
        passed: witness.is_some(),
        detail: match &witness {
            Some(w) => format!(
                "f({:?})={} > f({:?})={}",
                w.a.as_sorted_slice(),
                w.value_a,
                w.b.as_sorted_slice(),
                w.value_b
            ),
            None => "no counterexample found".to_string(),
        },
    });
    lines
}

/// Bound suite: on brute-forceable monotone instances, check the greedy
/// factor, the budget-generalized greedy factor, and the two-round factors
/// (plain and black-box). `distributed_runs` total distributed executions
/// are performed, half through each protocol entry point.
pub fn bounds_suite(distributed_runs: usize, seed: u64) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let instances = (distributed_runs / 2).max(1);
    for i in 0..instances {
        let mut rng = stream(seed, 0xB0_0000 + i as u64);
        let kinds = InstanceKind::monotone_pool();
        let kind = kinds[rng.random_range(0..kinds.len())];
        let n = rng.random_range(8..=12);
        let k = rng.random_range(1..=4.min(n));
        let m = rng.random_range(1..=4);
        let kappa = match rng.random_range(0..3) {
            0 => k,
            1 => k + 1,
            _ => 2 * k,
        };
        let f = random_objective(kind, n, &mut rng);
        let candidates: Vec<ElementId> = (0..n as ElementId).collect();
        let constraint = Cardinality::new(k)?;
        let opt = brute_force_opt(f.as_ref(), &constraint, &candidates)?;
        let fingerprint = format!("{} n={n} k={k} m={m} kappa={kappa} i={i}", kind.name());

        let g = greedy_cardinality(f.as_ref(), &candidates, k)?;
        lines.push(
            check_bound(Bound::GreedyCardinality, opt.value, g.value, &fingerprint).into(),
        );

        let q = rng.random_range(1..=2 * k);
        let gq = greedy_cardinality(f.as_ref(), &candidates, q)?;
        lines.push(
            check_bound(Bound::GreedyBudget { q, k }, opt.value, gq.value, &fingerprint).into(),
        );

        // two-round run with per-machine budget kappa
        let mut config = GreediConfig::new(m, k, seed.wrapping_add(i as u64));
        config.kappa = kappa;
        config.engine = EngineKind::Lazy;
        config.workers = Some(1);
        let partition = partition_uniform(n, m, config.seed)?;
        let (dist, _) = greedi_with_partition(f.as_ref(), &config, &partition)?;
        lines.push(
            check_bound(
                Bound::TwoRound { kappa, k, m },
                opt.value,
                dist.value,
                &fingerprint,
            )
            .into(),
        );

        // black-box form with the greedy engine under the same constraint
        let (general, _) = greedi_general(
            f.as_ref(),
            &constraint,
            EngineKind::Greedy,
            m,
            seed.wrapping_add(0x9999 + i as u64),
            Some(1),
            false,
        )?;
        lines.push(
            check_bound(
                Bound::TwoRoundGeneral {
                    tau: tau::CARDINALITY_GREEDY,
                    m,
                    rho: k,
                },
                opt.value,
                general.value,
                &fingerprint,
            )
            .into(),
        );
    }
    Ok(lines)
}

impl From<crate::verify::BoundReport> for CheckLine {
    fn from(report: crate::verify::BoundReport) -> Self {
        CheckLine {
            name: report.name.clone(),
            passed: report.satisfied,
            detail: format!(
                "bound={} achieved={} [{}]",
                report.bound_value, report.achieved, report.fingerprint
            ),
        }
    }
}

/// Smoothness suite: random swap trials never exceed the analytic
/// constants (1 for linear dissimilarity, 2R for squared, L*k^3 for the
/// information gain).
pub fn lipschitz_suite(trials: usize, seed: u64) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    let k = 4;

    let data = Arc::new(gen_gaussian_mixture(3, 60, 2, 0.4, seed)?);
    let metric_data = Arc::clone(&data);

    let f1 = Exemplar::new(Arc::clone(&data), 1.0)?;
    let mut rng = stream(seed, 0x11_0001);
    let r1 = lipschitz_probe(&f1, &EuclideanMetric(&metric_data), k, trials, &mut rng)?;
    lines.push(CheckLine {
        name: "lipschitz-exemplar-linear".to_string(),
        passed: r1 <= 1.0 + 1e-9,
        detail: format!("max_ratio={r1} lambda=1"),
    });

    let f2 = Exemplar::new(Arc::clone(&data), 2.0)?;
    let lambda2 = exemplar_lambda(2.0, data.diameter());
    let mut rng = stream(seed, 0x11_0002);
    let r2 = lipschitz_probe(&f2, &EuclideanMetric(&metric_data), k, trials, &mut rng)?;
    lines.push(CheckLine {
        name: "lipschitz-exemplar-squared".to_string(),
        passed: r2 <= lambda2 + 1e-9,
        detail: format!("max_ratio={r2} lambda={lambda2}"),
    });

    let kernel = SeKernel::new(1.0, 1.0)?;
    let f3 = InfoGain::new(Arc::clone(&data), kernel);
    let lambda3 = info_gain_lambda(&kernel, k);
    let mut rng = stream(seed, 0x11_0003);
    let r3 = lipschitz_probe(&f3, &EuclideanMetric(&metric_data), k, trials, &mut rng)?;
    lines.push(CheckLine {
        name: "lipschitz-infogain".to_string(),
        passed: r3 <= lambda3 + 1e-9,
        detail: format!("max_ratio={r3} lambda={lambda3}"),
    });

    Ok(lines)
}

/// Tightness grid: the exact two-round protocol on the adversarial
/// instance loses exactly a `min(m, k)` factor for every m, k in {2,3,4}.
pub fn worstcase_suite() -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    for m in 2..=4 {
        for k in 2..=4 {
            let inst = worst_case_instance(m, k)?;
            let (dist, _) = exact_two_round(&inst.objective, &inst.partition, k)?;
            let ratio = inst.optimal_value() / dist.value;
            let expected = m.min(k) as f64;
            lines.push(CheckLine {
                name: format!("worstcase-m{m}-k{k}"),
                passed: ratio == expected,
                detail: format!("opt/dist={ratio} expected={expected}"),
            });
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_suite_passes() {
        for line in structure_suite(5, 1) {
            assert!(line.passed, "{}", line.line());
        }
    }

    #[test]
    fn bounds_suite_passes() {
        for line in bounds_suite(10, 2).unwrap() {
            assert!(line.passed, "{}", line.line());
        }
    }

    #[test]
    fn lipschitz_suite_passes() {
        for line in lipschitz_suite(100, 3).unwrap() {
            assert!(line.passed, "{}", line.line());
        }
    }

    #[test]
    fn worstcase_suite_is_exact() {
        for line in worstcase_suite().unwrap() {
            assert!(line.passed, "{}", line.line());
        }
    }
}
