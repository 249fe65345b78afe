//! Datasets, file loaders, and seeded synthetic generators.
//!
//! Three payload families cover every objective in the crate: point clouds
//! (`VectorDataset`), weighted directed graphs (`GraphDataset`), and set
//! systems (`SetSystemDataset`). Loaders re-index external labels to dense
//! ids and keep the label maps; generators are reproducible from their seed.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;
use crate::set::ElementId;

/// An n x d row-major matrix of points.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorDataset {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl VectorDataset {
    pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter(
                "vector dataset must have n >= 1 and d >= 1".into(),
            ));
        }
        if data.len() != n * d {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for a {}x{} dataset, got {}",
                n * d,
                n,
                d,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite value at row {}, column {}",
                bad / d,
                bad % d
            )));
        }
        Ok(VectorDataset { n, d, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(n * d);
        for row in &rows {
            if row.len() != d {
                return Err(Error::InvalidParameter("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        VectorDataset::new(n, d, data)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    /// Row-major backing storage.
    pub fn flat(&self) -> &[f64] {
        &self.data
    }

    /// Subtract the per-column dataset mean, then scale each row to unit
    /// Euclidean norm. Errors if any centered row has zero norm (e.g. a
    /// single-row dataset, which centers to the zero vector).
    pub fn normalize(&mut self) -> Result<()> {
        let mut mean = vec![0.0; self.d];
        for i in 0..self.n {
            for (m, v) in mean.iter_mut().zip(self.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        for i in 0..self.n {
            let row = &mut self.data[i * self.d..(i + 1) * self.d];
            for (v, m) in row.iter_mut().zip(&mean) {
                *v -= m;
            }
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "row {i} has zero norm after mean subtraction"
                )));
            }
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
        Ok(())
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        squared_distance(self.row(i), self.row(j))
    }

    /// Largest pairwise squared Euclidean distance.
    pub fn max_squared_distance(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let s = self.squared_distance(i, j);
                if s > max {
                    max = s;
                }
            }
        }
        max
    }

    /// Diameter of the point set under the Euclidean metric.
    pub fn diameter(&self) -> f64 {
        self.max_squared_distance().sqrt()
    }
}

#[inline]
pub(crate) fn dot_product(a: &[f64], b: &[f64]) -> f64 {
    let chunks_a = a.chunks_exact(8);
    let chunks_b = b.chunks_exact(8);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    let mut acc = [0.0f64; 8];
    for (x, y) in chunks_a.zip(chunks_b) {
        for lane in 0..8 {
            acc[lane] += x[lane] * y[lane];
        }
    }
    let half = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    half + (acc[4] + acc[5]) + (acc[6] + acc[7]) + tail
}

// eight independent accumulator lanes keep the reduction out of a serial
// dependency chain; this loop is the hot path of every exemplar sweep
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let chunks_a = a.chunks_exact(8);
    let chunks_b = b.chunks_exact(8);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum();
    let mut acc = [0.0f64; 8];
    for (x, y) in chunks_a.zip(chunks_b) {
        for lane in 0..8 {
            let t = x[lane] - y[lane];
            acc[lane] += t * t;
        }
    }
    let half = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    half + (acc[4] + acc[5]) + (acc[6] + acc[7]) + tail
}

/// A weighted directed graph without self-loops.
#[derive(Debug, Clone)]
pub struct GraphDataset {
    n: usize,
    arcs: Vec<(ElementId, ElementId, f64)>,
    /// Original node labels when loaded from a file.
    labels: Option<Vec<String>>,
}

impl GraphDataset {
    pub fn new(n: usize, arcs: Vec<(ElementId, ElementId, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph must have n >= 1".into()));
        }
        for &(u, v, w) in &arcs {
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "arc ({u}, {v}) out of range for n={n}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "arc ({u}, {v}) has invalid weight {w}"
                )));
            }
        }
        Ok(GraphDataset {
            n,
            arcs,
            labels: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arcs(&self) -> &[(ElementId, ElementId, f64)] {
        &self.arcs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// A family of candidate item sets over a dense item universe.
#[derive(Debug, Clone)]
pub struct SetSystemDataset {
    sets: Vec<Vec<u32>>,
    universe: usize,
    /// Original item labels when loaded from a file.
    item_labels: Option<Vec<String>>,
}

impl SetSystemDataset {
    /// Re-indexes items so that every item id in `[0, universe)` appears in
    /// at least one candidate set.
    pub fn new(raw_sets: Vec<Vec<u32>>) -> Result<Self> {
        if raw_sets.is_empty() {
            return Err(Error::InvalidParameter("no candidate sets".into()));
        }
        let mut remap = std::collections::BTreeMap::new();
        for s in &raw_sets {
            for &item in s {
                let next = remap.len() as u32;
                remap.entry(item).or_insert(next);
            }
        }
        let sets = raw_sets
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|i| remap[i]).collect();
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        Ok(SetSystemDataset {
            sets,
            universe: remap.len(),
            item_labels: None,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn set(&self, i: usize) -> &[u32] {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn item_labels(&self) -> Option<&[String]> {
        self.item_labels.as_deref()
    }
}

// ---------------------------------------------------------------------------
// loaders

/// On-disk vector formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorFormat {
    /// One comma-separated row per line.
    Csv,
    /// Little-endian `u32 n`, `u32 d`, then `n*d` `f32` values.
    BinaryF32,
}

pub fn load_vectors(path: &Path, format: VectorFormat) -> Result<VectorDataset> {
    match format {
        VectorFormat::Csv => {
            let text = std::fs::read_to_string(path)?;
            parse_vectors_csv(&text)
        }
        VectorFormat::BinaryF32 => {
            let bytes = std::fs::read(path)?;
            parse_vectors_binary(&bytes)
        }
    }
}

pub fn parse_vectors_csv(text: &str) -> Result<VectorDataset> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad number {tok:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("non-finite value in column {}", bad + 1),
            });
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("ragged row: expected {w} columns, got {}", row.len()),
                });
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty vector file".into(),
        });
    }
    VectorDataset::from_rows(rows)
}

fn parse_vectors_binary(bytes: &[u8]) -> Result<VectorDataset> {
    let header_err = || Error::Parse {
        line: 0,
        msg: "truncated binary-f32 header".into(),
    };
    if bytes.len() < 8 {
        return Err(header_err());
    }
    let n = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let want = 8 + n * d * 4;
    if bytes.len() != want {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {} bytes for {}x{} f32 payload, got {}", want, n, d, bytes.len()),
        });
    }
    let data: Vec<f64> = bytes[8..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    VectorDataset::new(n, d, data)
}

pub fn write_vectors_csv(data: &VectorDataset) -> String {
    let mut out = String::new();
    for i in 0..data.len() {
        let row = data.row(i);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

/// Parse an edge list: one `u v [w]` per line, weight defaulting to 1.
/// Node labels are re-indexed to dense ids; `undirected` duplicates each
/// edge in both directions.
pub fn load_graph(path: &Path, undirected: bool) -> Result<GraphDataset> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text, undirected)
}

pub fn parse_graph(text: &str, undirected: bool) -> Result<GraphDataset> {
    let mut remap: std::collections::BTreeMap<String, u32> = std::collections::BTreeMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut arcs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected 'u v [w]', got {line:?}"),
            });
        }
        let mut id_of = |tok: &str| -> u32 {
            *remap.entry(tok.to_string()).or_insert_with(|| {
                labels.push(tok.to_string());
                (labels.len() - 1) as u32
            })
        };
        let u = id_of(toks[0]);
        let v = id_of(toks[1]);
        let w = if toks.len() == 3 {
            toks[2].parse::<f64>().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("bad weight {:?}", toks[2]),
            })?
        } else {
            1.0
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("negative or non-finite weight {w}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("self-loop at {:?}", toks[0]),
            });
        }
        arcs.push((u, v, w));
        if undirected {
            arcs.push((v, u, w));
        }
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty graph file".into(),
        });
    }
    let mut g = GraphDataset::new(labels.len(), arcs)?;
    g.labels = Some(labels);
    Ok(g)
}

pub fn write_graph(g: &GraphDataset) -> String {
    let mut out = String::new();
    for &(u, v, w) in g.arcs() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// Parse a transaction file: each line is one candidate set of
/// whitespace-separated item tokens; the line number is the set id.
pub fn load_sets(path: &Path) -> Result<SetSystemDataset> {
    let text = std::fs::read_to_string(path)?;
    parse_sets(&text)
}

pub fn parse_sets(text: &str) -> Result<SetSystemDataset> {
    let mut remap: std::collections::BTreeMap<String, u32> = std::collections::BTreeMap::new();
    let mut item_labels = Vec::new();
    let mut sets = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut set = Vec::new();
        for tok in line.split_whitespace() {
            let id = *remap.entry(tok.to_string()).or_insert_with(|| {
                item_labels.push(tok.to_string());
                (item_labels.len() - 1) as u32
            });
            set.push(id);
        }
        if set.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "empty candidate set".into(),
            });
        }
        set.sort_unstable();
        set.dedup();
        sets.push(set);
    }
    if sets.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty set file".into(),
        });
    }
    let universe = item_labels.len();
    Ok(SetSystemDataset {
        sets,
        universe,
        item_labels: Some(item_labels),
    })
}

pub fn write_sets(ss: &SetSystemDataset) -> String {
    let mut out = String::new();
    for s in ss.sets() {
        let toks: Vec<String> = s.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{}", toks.join(" "));
    }
    out
}

// ---------------------------------------------------------------------------
// generators

/// `n` points in `d` dimensions drawn from `clusters` Gaussian blobs.
/// Centers are standard normal; points scatter around their (uniformly
/// chosen) center with the given spread.
pub fn gen_gaussian_mixture(
    clusters: usize,
    n: usize,
    d: usize,
    spread: f64,
    seed: u64,
) -> Result<VectorDataset> {
    if clusters == 0 || n == 0 || d == 0 || !spread.is_finite() || spread <= 0.0 {
        return Err(Error::InvalidParameter(
            "gaussian_mixture needs clusters, n, d >= 1 and spread > 0".into(),
        ));
    }
    let mut rng = rng::stream(seed, 0xDA7A);
    let centers: Vec<f64> = (0..clusters * d)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let c = rng.random_range(0..clusters);
        for j in 0..d {
            let noise: f64 = StandardNormal.sample(&mut rng);
            data.push(centers[c * d + j] + spread * noise);
        }
    }
    VectorDataset::new(n, d, data)
}

/// Directed Erdős–Rényi graph: each ordered pair `(u, v)`, `u != v`, gets an
/// arc with probability `p` and a weight uniform in `[wmin, wmax]`.
pub fn gen_random_graph(
    n: usize,
    p: f64,
    wmin: f64,
    wmax: f64,
    seed: u64,
) -> Result<GraphDataset> {
    if n == 0 || !(0.0..=1.0).contains(&p) || wmin < 0.0 || wmax < wmin {
        return Err(Error::InvalidParameter(
            "random_graph needs n >= 1, p in [0,1], 0 <= wmin <= wmax".into(),
        ));
    }
    let mut rng = rng::stream(seed, 0xDA7B);
    let mut arcs = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u == v {
                continue;
            }
            if rng.random::<f64>() < p {
                let w = if wmax > wmin {
                    rng.random_range(wmin..=wmax)
                } else {
                    wmin
                };
                arcs.push((u, v, w));
            }
        }
    }
    GraphDataset::new(n, arcs)
}

/// `n_sets` candidate sets over a `universe`-item ground universe; each
/// (set, item) pair is included independently with probability `density`.
/// Items that end up uncovered are dropped by re-indexing.
pub fn gen_random_sets(
    n_sets: usize,
    universe: usize,
    density: f64,
    seed: u64,
) -> Result<SetSystemDataset> {
    if n_sets == 0 || universe == 0 || !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(
            "random_sets needs n_sets, universe >= 1 and density in [0,1]".into(),
        ));
    }
    let mut rng = rng::stream(seed, 0xDA7C);
    let mut sets = Vec::with_capacity(n_sets);
    for _ in 0..n_sets {
        let mut s = Vec::new();
        for item in 0..universe as u32 {
            if rng.random::<f64>() < density {
                s.push(item);
            }
        }
        if s.is_empty() {
            // keep every candidate set nonempty so line ids stay meaningful
            s.push(rng.random_range(0..universe as u32));
        }
        sets.push(s);
    }
    SetSystemDataset::new(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let text = "1.0,2.0\n3.5,-4.25\n0.125,9\n";
        let d = parse_vectors_csv(text).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.dim(), 2);
        assert_eq!(d.row(1), &[3.5, -4.25]);
        let d2 = parse_vectors_csv(&write_vectors_csv(&d)).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn ragged_csv_reports_line() {
        let err = parse_vectors_csv("1,2\n3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_vector_file_is_an_error() {
        assert!(parse_vectors_csv("").is_err());
    }

    #[test]
    fn normalize_centers_then_scales() {
        let mut d = VectorDataset::from_rows(vec![vec![3.0, 4.0], vec![-3.0, -4.0]]).unwrap();
        d.normalize().unwrap();
        // mean is zero, so rows are just scaled to unit norm
        assert!((d.row(0)[0] - 0.6).abs() < 1e-12);
        assert!((d.row(0)[1] - 0.8).abs() < 1e-12);
        let norm: f64 = d.row(1).iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_single_row_fails() {
        let mut d = VectorDataset::from_rows(vec![vec![3.0, 4.0]]).unwrap();
        assert!(d.normalize().is_err());
    }

    #[test]
    fn graph_parse_defaults_weight() {
        let g = parse_graph("a b\nb c 2.5\n", false).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.arcs(), &[(0, 1, 1.0), (1, 2, 2.5)]);
        assert_eq!(g.labels().unwrap(), &["a", "b", "c"]);
    }

    #[test]
    fn undirected_duplicates_arcs() {
        let g = parse_graph("0 1\n", true).unwrap();
        assert_eq!(g.arcs().len(), 2);
    }

    #[test]
    fn graph_rejects_negative_weight_with_line() {
        let err = parse_graph("0 1 1\n1 2 -3\n", false).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sets_parse_and_reindex() {
        let ss = parse_sets("10 20\n20 30\n40\n").unwrap();
        assert_eq!(ss.len(), 3);
        assert_eq!(ss.universe(), 4);
        assert_eq!(ss.set(0), &[0, 1]);
        assert_eq!(ss.set(1), &[1, 2]);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_gaussian_mixture(3, 50, 4, 0.2, 9).unwrap();
        let b = gen_gaussian_mixture(3, 50, 4, 0.2, 9).unwrap();
        assert_eq!(a, b);
        let g1 = gen_random_graph(20, 0.3, 1.0, 1.0, 5).unwrap();
        let g2 = gen_random_graph(20, 0.3, 1.0, 1.0, 5).unwrap();
        assert_eq!(g1.arcs(), g2.arcs());
        let s1 = gen_random_sets(10, 15, 0.3, 3).unwrap();
        let s2 = gen_random_sets(10, 15, 0.3, 3).unwrap();
        assert_eq!(s1.sets(), s2.sets());
    }

    #[test]
    fn zero_probability_graph_is_empty() {
        let g = gen_random_graph(10, 0.0, 1.0, 1.0, 1).unwrap();
        assert!(g.arcs().is_empty());
    }

    #[test]
    fn binary_round_trip() {
        let d = VectorDataset::from_rows(vec![vec![1.5, -2.0], vec![0.25, 4.0]]).unwrap();
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&2u32.to_le_bytes());
        for i in 0..2 {
            for v in d.row(i) {
                bytes.extend_from_slice(&(*v as f32).to_le_bytes());
            }
        }
        let d2 = parse_vectors_binary(&bytes).unwrap();
        assert_eq!(d, d2);
    }
}
