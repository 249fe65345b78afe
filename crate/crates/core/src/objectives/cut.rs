use crate::data::GraphDataset;
use crate::error::Result;
use crate::objective::{Evaluator, Objective};
use crate::set::{ElementId, ElementSet, GroundSet, PayloadKind};

/// The directed cut function: `f(S) = total weight of arcs from S to V\S`.
/// Nonnegative and submodular, but not monotone.
#[derive(Debug, Clone)]
pub struct GraphCut {
    out: Vec<Vec<(ElementId, f64)>>,
    incoming: Vec<Vec<(ElementId, f64)>>,
    ground: GroundSet,
}

impl GraphCut {
    pub fn new(n: usize, arcs: &[(ElementId, ElementId, f64)]) -> Result<Self> {
        // GraphDataset::new performs all validation (self-loops, weights, range)
        let ds = GraphDataset::new(n, arcs.to_vec())?;
        Ok(GraphCut::from_dataset(&ds))
    }

    pub fn from_dataset(g: &GraphDataset) -> Self {
        let n = g.len();
        let mut out = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for &(u, v, w) in g.arcs() {
            out[u as usize].push((v, w));
            incoming[v as usize].push((u, w));
        }
        GraphCut {
            out,
            incoming,
            ground: GroundSet::new(n, PayloadKind::Graph),
        }
    }
}

impl Objective for GraphCut {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn value(&self, s: &ElementSet) -> f64 {
        let mut total = 0.0;
        for u in s.iter() {
            for &(v, w) in &self.out[u as usize] {
                if !s.contains(v) {
                    total += w;
                }
            }
        }
        total
    }

    fn monotone(&self) -> bool {
        false
    }

    fn nonnegative(&self) -> bool {
        true
    }

    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        Box::new(CutEvaluator {
            f: self,
            set: ElementSet::new(),
            value: 0.0,
            calls: 1,
        })
    }

    /// The machine-local cut: only arcs with both endpoints inside `block`
    /// are retained, so the partitions are disconnected from each other.
    /// Ids stay global.
    fn local_restriction(&self, block: &[ElementId]) -> Option<Box<dyn Objective>> {
        let members = ElementSet::from_slice(block);
        let mut arcs = Vec::new();
        for u in members.iter() {
            for &(v, w) in &self.out[u as usize] {
                if members.contains(v) {
                    arcs.push((u, v, w));
                }
            }
        }
        let n = self.ground.len();
        Some(Box::new(GraphCut::new(n, &arcs).expect("induced arcs are valid")))
    }
}

/// Gain of toggling `e` into the cut side: new outgoing crossings minus
/// incoming arcs that stop crossing.
struct CutEvaluator<'a> {
    f: &'a GraphCut,
    set: ElementSet,
    value: f64,
    calls: u64,
}

impl Evaluator for CutEvaluator<'_> {
    fn value(&self) -> f64 {
        self.value
    }

    fn selection(&self) -> &ElementSet {
        &self.set
    }

    fn gain(&mut self, e: ElementId) -> f64 {
        self.calls += 1;
        let mut g = 0.0;
        for &(v, w) in &self.f.out[e as usize] {
            if !self.set.contains(v) {
                g += w;
            }
        }
        for &(u, w) in &self.f.incoming[e as usize] {
            if self.set.contains(u) {
                g -= w;
            }
        }
        g
    }

    fn accept(&mut self, e: ElementId) {
        for &(v, w) in &self.f.out[e as usize] {
            if !self.set.contains(v) {
                self.value += w;
            }
        }
        for &(u, w) in &self.f.incoming[e as usize] {
            if self.set.contains(u) {
                self.value -= w;
            }
        }
        self.set.insert(e);
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}
