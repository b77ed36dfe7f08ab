//! The finite p-table data model and the validators for Axioms I, III,
//! and IV, plus the derived structures: the d-metric, frames, subspaces,
//! and frame equivalence.
//!
//! A p-table records pass probabilities between a finite family of
//! filters. Checks distinguish true violations from artifacts of finite
//! sampling: a frame sum can only undershoot 1 when the table is a finite
//! slice of a larger system, so only overshoot is a hard failure, and the
//! Axiom IV scan reports three-valued outcomes (witness found / no
//! candidate / candidate contradicted).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{VerificationReport, Witness};

/// Default tolerance for analytic tables.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Hard cap on table size for the exhaustive frame search.
pub const MAX_ELEMENTS: usize = 1024;

/// Loader symmetry gate.
pub const LOAD_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PTableError {
    #[error("table is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("{labels} labels but {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("entry ({0},{1}) = {2} outside [0,1]")]
    OutOfRange(usize, usize, f64),
    #[error("table asymmetric at ({0},{1}): |{2}| exceeds {LOAD_SYMMETRY_TOL:e} (load with tolerate to accept)")]
    Asymmetric(usize, usize, f64),
    #[error("table has {0} elements, exhaustive search capped at {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("index {0} out of range for {1} elements")]
    BadIndex(usize, usize),
    #[error("frame {0:?} is not a frame of the subspace declared by {1:?}")]
    NotSameSubspace(Vec<usize>, Vec<usize>),
    #[error("empty table")]
    Empty,
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Finite symmetric table of pass probabilities with element labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PTable {
    labels: Vec<String>,
    p: Vec<f64>,
    n: usize,
}

/// On-disk shape of a p-table: labels plus the row-major matrix.
#[derive(Serialize, Deserialize)]
struct PTableFile {
    labels: Vec<String>,
    p: Vec<Vec<f64>>,
}

impl PTable {
    /// Builds a table from rows, validating shape and `[0,1]` range.
    /// Symmetry is not forced here; it is what `check_axiom_one` checks
    /// (Monte-Carlo tables are symmetric only up to sampling error).
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, PTableError> {
        let n = rows.len();
        if n == 0 {
            return Err(PTableError::Empty);
        }
        if labels.len() != n {
            return Err(PTableError::LabelCount {
                labels: labels.len(),
                rows: n,
            });
        }
        let mut p = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(PTableError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    return Err(PTableError::OutOfRange(i, j, v));
                }
                p.push(v);
            }
        }
        Ok(PTable { labels, p, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    /// Sets both (i,j) and (j,i); handy for perturbation experiments.
    pub fn set_symmetric(&mut self, i: usize, j: usize, v: f64) {
        self.p[i * self.n + j] = v;
        self.p[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.n..(i + 1) * self.n]
    }

    /// Reorders elements by the given permutation (`perm[new] = old`).
    pub fn permuted(&self, perm: &[usize]) -> PTable {
        assert_eq!(perm.len(), self.n);
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let mut p = vec![0.0; self.n * self.n];
        for (ni, &oi) in perm.iter().enumerate() {
            for (nj, &oj) in perm.iter().enumerate() {
                p[ni * self.n + nj] = self.get(oi, oj);
            }
        }
        PTable {
            labels,
            p,
            n: self.n,
        }
    }

    /// Serializes to the table file format (JSON object with `labels`
    /// and row-major `p`).
    pub fn to_json(&self) -> String {
        let file = PTableFile {
            labels: self.labels.clone(),
            p: (0..self.n).map(|i| self.row(i).to_vec()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    /// Parses the table file format. Asymmetry beyond 1e-12 is rejected
    /// unless `tolerate` is set.
    pub fn from_json(text: &str, tolerate: bool) -> Result<Self, PTableError> {
        let file: PTableFile = serde_json::from_str(text)?;
        let table = PTable::new(file.labels, file.p)?;
        if !tolerate {
            for i in 0..table.n {
                for j in (i + 1)..table.n {
                    let gap = table.get(i, j) - table.get(j, i);
                    if gap.abs() > LOAD_SYMMETRY_TOL {
                        return Err(PTableError::Asymmetric(i, j, gap));
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<(), PTableError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(
        path: impl AsRef<std::path::Path>,
        tolerate: bool,
    ) -> Result<Self, PTableError> {
        let text = std::fs::read_to_string(path)?;
        PTable::from_json(&text, tolerate)
    }
}

/// Index set of mutually orthogonal table elements, maximal in the table
/// or in a declared subspace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Frame {
    indices: Vec<usize>,
}

impl Frame {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Frame { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Verifies Axiom I: unit diagonal, symmetry, and no off-diagonal entry
/// within `eps` of 1.
pub fn check_axiom_one(t: &PTable, eps: f64) -> VerificationReport {
    let mut report = VerificationReport::new("axiom-one", eps);
    let n = t.len();
    for i in 0..n {
        let d = (t.get(i, i) - 1.0).abs();
        if d > eps {
            report.fail(Witness::new(vec![i, i], d, "diagonal entry differs from 1"));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let asym = (t.get(i, j) - t.get(j, i)).abs();
            if asym > eps {
                report.fail(Witness::new(vec![i, j], asym, "asymmetric entry"));
            }
            let near_one = 1.0 - t.get(i, j).min(t.get(j, i));
            if near_one < eps {
                report.fail(Witness::new(
                    vec![i, j],
                    near_one,
                    "off-diagonal entry at 1: distinct labels denote one element",
                ));
            }
        }
    }
    report.note(format!(
        "axiom II (compactness) holds trivially: finite table of {n} elements"
    ));
    report
}

/// Sup-difference of rows: max over z of `|p[i][z] − p[j][z]|`.
///
/// On a finite table this is a lower bound on the continuum distance;
/// model-aware comparisons live in [`metric_consistency`].
pub fn d_metric(t: &PTable, i: usize, j: usize) -> f64 {
    t.row(i)
        .iter()
        .zip(t.row(j))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// All maximal sets of mutually orthogonal elements (p < eps), by
/// exhaustive branch-and-bound. Exact; errors beyond [`MAX_ELEMENTS`].
pub fn enumerate_frames(t: &PTable, eps: f64) -> Result<Vec<Frame>, PTableError> {
    let cliques = maximal_cliques(t.len(), |i, j| t.get(i, j) < eps && t.get(j, i) < eps)?;
    let mut frames: Vec<Frame> = cliques.into_iter().map(Frame::new).collect();
    frames.sort();
    Ok(frames)
}

/// Largest set of elements pairwise satisfying `edge`, by the same
/// branch-and-bound. Used for frames and for equatorial rank detection.
pub fn max_clique_size(
    n: usize,
    edge: impl Fn(usize, usize) -> bool,
) -> Result<usize, PTableError> {
    Ok(maximal_cliques(n, edge)?
        .into_iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0))
}

/// Bron–Kerbosch with pivoting on a bitset adjacency.
fn maximal_cliques(
    n: usize,
    edge: impl Fn(usize, usize) -> bool,
) -> Result<Vec<Vec<usize>>, PTableError> {
    if n > MAX_ELEMENTS {
        return Err(PTableError::TooLarge(n));
    }
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && edge(i, j) {
                adj[i][j / 64] |= 1 << (j % 64);
            }
        }
    }

    struct Search<'a> {
        adj: &'a [Vec<u64>],
        words: usize,
        out: Vec<Vec<usize>>,
    }

    fn bits(set: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in set.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    fn popcount(set: &[u64]) -> u32 {
        set.iter().map(|w| w.count_ones()).sum()
    }

    impl Search<'_> {
        fn recurse(&mut self, r: &mut Vec<usize>, p: Vec<u64>, x: Vec<u64>) {
            if popcount(&p) == 0 && popcount(&x) == 0 {
                self.out.push(r.clone());
                return;
            }
            // Pivot: vertex of P ∪ X with most neighbours in P.
            let pivot = bits(&p)
                .into_iter()
                .chain(bits(&x))
                .max_by_key(|&u| {
                    (0..self.words)
                        .map(|w| (p[w] & self.adj[u][w]).count_ones())
                        .sum::<u32>()
                })
                .expect("nonempty P or X");
            let candidates: Vec<usize> = bits(&p)
                .into_iter()
                .filter(|&v| self.adj[pivot][v / 64] & (1 << (v % 64)) == 0)
                .collect();
            let mut p = p;
            let mut x = x;
            for v in candidates {
                let np: Vec<u64> = (0..self.words).map(|w| p[w] & self.adj[v][w]).collect();
                let nx: Vec<u64> = (0..self.words).map(|w| x[w] & self.adj[v][w]).collect();
                r.push(v);
                self.recurse(r, np, nx);
                r.pop();
                p[v / 64] &= !(1 << (v % 64));
                x[v / 64] |= 1 << (v % 64);
            }
        }
    }

    let mut p = vec![0u64; words];
    for i in 0..n {
        p[i / 64] |= 1 << (i % 64);
    }
    let mut search = Search {
        adj: &adj,
        words,
        out: Vec::new(),
    };
    search.recurse(&mut Vec::new(), p, vec![0u64; words]);
    Ok(search.out)
}

/// How a frame's sums relate to 1 across all elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    /// Every sum within eps of 1.
    Complete,
    /// Some sums fall short: the table lacks part of this frame. Not a
    /// violation — sums over a subset of a frame can only undershoot.
    Incomplete,
    /// Some sum exceeds 1: a genuine Axiom III violation, incurable by
    /// adding elements.
    Violating,
}

/// Classifies each frame by its row sums.
pub fn classify_frames(t: &PTable, frames: &[Frame], eps: f64) -> Vec<FrameClass> {
    frames
        .iter()
        .map(|f| {
            let mut class = FrameClass::Complete;
            for a in 0..t.len() {
                let sum: f64 = f.indices().iter().map(|&j| t.get(a, j)).sum();
                if sum > 1.0 + eps {
                    return FrameClass::Violating;
                }
                if sum < 1.0 - eps {
                    class = FrameClass::Incomplete;
                }
            }
            class
        })
        .collect()
}

/// Verifies Axiom III: for every frame F and element a, the sum of
/// `p[a][j]` over j in F must not exceed 1; frames that undershoot are
/// reported as incomplete finite samples rather than failed.
pub fn check_axiom_three(t: &PTable, eps: f64) -> Result<VerificationReport, PTableError> {
    let frames = enumerate_frames(t, eps)?;
    let mut report = VerificationReport::new("axiom-three", eps);
    let mut incomplete = 0usize;
    for frame in &frames {
        let mut frame_violated = false;
        let mut frame_incomplete = false;
        for a in 0..t.len() {
            let sum: f64 = frame.indices().iter().map(|&j| t.get(a, j)).sum();
            if sum > 1.0 + eps {
                frame_violated = true;
                let mut indices = vec![a];
                indices.extend_from_slice(frame.indices());
                report.fail(Witness::new(
                    indices,
                    sum - 1.0,
                    "frame sum exceeds 1 (element, frame...)",
                ));
            } else if sum < 1.0 - eps {
                frame_incomplete = true;
            }
        }
        if frame_incomplete && !frame_violated {
            incomplete += 1;
        }
    }
    if incomplete > 0 {
        report.note(format!(
            "{incomplete} of {} frames undershoot 1 for some element: partial frames of a larger system",
            frames.len()
        ));
    }
    Ok(report)
}

/// Verifies that F1 and F2 are equivalent frames of the same subspace:
/// equal size and identical sums of `p[w][j]` for every table element w.
pub fn check_frame_equivalence(
    t: &PTable,
    f1: &Frame,
    f2: &Frame,
    eps: f64,
) -> Result<VerificationReport, PTableError> {
    for f in [f1, f2] {
        for &i in f.indices() {
            if i >= t.len() {
                return Err(PTableError::BadIndex(i, t.len()));
            }
        }
    }
    // F2 must consist of elements of the subspace declared by F1 and be
    // pairwise orthogonal there.
    for &z in f2.indices() {
        let sum: f64 = f1.indices().iter().map(|&j| t.get(z, j)).sum();
        if (sum - 1.0).abs() > eps {
            return Err(PTableError::NotSameSubspace(
                f2.indices().to_vec(),
                f1.indices().to_vec(),
            ));
        }
    }
    for (a, &i) in f2.indices().iter().enumerate() {
        for &j in f2.indices()[a + 1..].iter() {
            if t.get(i, j) >= eps {
                return Err(PTableError::NotSameSubspace(
                    f2.indices().to_vec(),
                    f1.indices().to_vec(),
                ));
            }
        }
    }

    let mut report = VerificationReport::new("frame-equivalence", eps);
    if f1.len() != f2.len() {
        report.fail(Witness::new(
            vec![f1.len(), f2.len()],
            (f1.len() as f64 - f2.len() as f64).abs(),
            "frames of one subspace must have equal size",
        ));
    }
    for w in 0..t.len() {
        let s1: f64 = f1.indices().iter().map(|&j| t.get(w, j)).sum();
        let s2: f64 = f2.indices().iter().map(|&j| t.get(w, j)).sum();
        if (s1 - s2).abs() > eps {
            report.fail(Witness::new(
                vec![w],
                (s1 - s2).abs(),
                "frame sums disagree at element",
            ));
        }
    }
    Ok(report)
}

/// Outcome of the Axiom IV witness search for one non-compatible pair.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomFourOutcome {
    /// An orthogonal pair (c, c′) matches λ and satisfies the midpoint
    /// identity everywhere.
    WitnessFound {
        c: usize,
        c_prime: usize,
        lambda: f64,
        residual: f64,
    },
    /// No orthogonal pair matches λ within eps — expected when the table
    /// is a finite sample of a continuum.
    NoCandidate { lambda: f64 },
    /// A candidate matched λ but breaks the midpoint identity: a true
    /// violation.
    Contradicted {
        c: usize,
        c_prime: usize,
        residual: f64,
    },
}

/// Per-pair Axiom IV outcomes over all ordered non-compatible pairs.
pub fn axiom_four_outcomes(t: &PTable, eps: f64) -> Vec<((usize, usize), AxiomFourOutcome)> {
    let n = t.len();
    // Unordered orthogonal pairs, both orderings tried as (c, c′).
    let mut orthogonal: Vec<(usize, usize)> = Vec::new();
    for c in 0..n {
        for cp in (c + 1)..n {
            if t.get(c, cp) < eps && t.get(cp, c) < eps {
                orthogonal.push((c, cp));
                orthogonal.push((cp, c));
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let p = t.get(a, b);
            if p >= eps && p <= 1.0 - eps {
                pairs.push((a, b));
            }
        }
    }

    let scan_one = |&(a, b): &(usize, usize)| -> AxiomFourOutcome {
        let lambda = 0.5 * (1.0 + t.get(a, b).sqrt());
        let mut best_contradiction: Option<(usize, usize, f64)> = None;
        for &(c, cp) in &orthogonal {
            if (t.get(a, c) - lambda).abs() >= eps || (t.get(b, c) - lambda).abs() >= eps {
                continue;
            }
            // Midpoint identity over every element of the table.
            let mut residual: f64 = 0.0;
            for z in 0..n {
                let lhs = 0.5 * (t.get(a, z) + t.get(b, z));
                let rhs = lambda * t.get(c, z) + (1.0 - lambda) * t.get(cp, z);
                residual = residual.max((lhs - rhs).abs());
            }
            if residual < eps {
                return AxiomFourOutcome::WitnessFound {
                    c,
                    c_prime: cp,
                    lambda,
                    residual,
                };
            }
            let better = best_contradiction.map_or(true, |(_, _, r)| residual < r);
            if better {
                best_contradiction = Some((c, cp, residual));
            }
        }
        match best_contradiction {
            Some((c, cp, residual)) => AxiomFourOutcome::Contradicted {
                c,
                c_prime: cp,
                residual,
            },
            None => AxiomFourOutcome::NoCandidate { lambda },
        }
    };

    #[cfg(feature = "parallel")]
    let half: Vec<AxiomFourOutcome> = {
        use rayon::prelude::*;
        pairs.par_iter().map(scan_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let half: Vec<AxiomFourOutcome> = pairs.iter().map(scan_one).collect();

    // The search is symmetric in (a,b); mirror to ordered pairs.
    let mut out = Vec::with_capacity(2 * half.len());
    for (&(a, b), outcome) in pairs.iter().zip(half) {
        out.push(((a, b), outcome.clone()));
        out.push(((b, a), outcome));
    }
    out.sort_by_key(|&((a, b), _)| (a, b));
    out
}

/// Verifies Axiom IV: every non-compatible pair needs an orthogonal pair
/// (c, c′) with `p[a][c] = p[b][c]` = λ = ½(1+√p) satisfying the
/// midpoint identity. Fails only on contradicted candidates; missing
/// candidates are reported as expected finite-sample gaps.
pub fn check_axiom_four(t: &PTable, eps: f64) -> VerificationReport {
    let outcomes = axiom_four_outcomes(t, eps);
    let mut report = VerificationReport::new("axiom-four", eps);
    let mut found = 0usize;
    let mut missing = 0usize;
    for ((a, b), outcome) in &outcomes {
        match outcome {
            AxiomFourOutcome::WitnessFound { .. } => found += 1,
            AxiomFourOutcome::NoCandidate { .. } => missing += 1,
            AxiomFourOutcome::Contradicted { c, c_prime, residual } => {
                report.fail(Witness::new(
                    vec![*a, *b, *c, *c_prime],
                    *residual,
                    "candidate matches lambda but breaks the midpoint identity",
                ));
            }
        }
    }
    report.note(format!(
        "{} ordered non-compatible pairs: {found} witnessed, {missing} without candidate (finite sample), {} contradicted",
        outcomes.len(),
        report.witnesses.len()
    ));
    report
}

/// Model whose distance law a table is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelLaw {
    /// d(a,b) = √(1 − p)
    Crqm,
    /// d(a,b) = 1 − p
    HiddenVariable,
}

impl ModelLaw {
    pub fn distance(self, p: f64) -> f64 {
        match self {
            ModelLaw::Crqm => (1.0 - p).max(0.0).sqrt(),
            ModelLaw::HiddenVariable => 1.0 - p,
        }
    }
}

/// Compares the table d-metric against the model's distance law with
/// lower-bound semantics: requires d ≤ law + eps for every pair and
/// reports the worst gap below the law.
pub fn metric_consistency(t: &PTable, model: ModelLaw, eps: f64) -> VerificationReport {
    let name = match model {
        ModelLaw::Crqm => "metric-consistency-crqm",
        ModelLaw::HiddenVariable => "metric-consistency-hv",
    };
    let mut report = VerificationReport::new(name, eps);
    let n = t.len();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let eval = |&(i, j): &(usize, usize)| -> (f64, f64) {
        let d = d_metric(t, i, j);
        let law = model.distance(0.5 * (t.get(i, j) + t.get(j, i)));
        (d - law, law - d)
    };
    #[cfg(feature = "parallel")]
    let gaps: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        pairs.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let gaps: Vec<(f64, f64)> = pairs.iter().map(eval).collect();

    let mut worst_below: f64 = 0.0;
    for (&(i, j), &(excess, below)) in pairs.iter().zip(&gaps) {
        if excess > eps {
            report.fail(Witness::new(
                vec![i, j],
                excess,
                "table d-metric exceeds the model distance law",
            ));
        }
        worst_below = worst_below.max(below);
    }
    report.note(format!(
        "worst gap below the law (finite-sample slack): {worst_below:.6e}"
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so_table() -> PTable {
        // x, x', y, y'
        PTable::new(
            vec!["x".into(), "x'".into(), "y".into(), "y'".into()],
            vec![
                vec![1.0, 0.0, 0.5, 0.5],
                vec![0.0, 1.0, 0.5, 0.5],
                vec![0.5, 0.5, 1.0, 0.0],
                vec![0.5, 0.5, 0.0, 1.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn axiom_one_passes_on_skeleton() {
        assert!(check_axiom_one(&so_table(), DEFAULT_EPS).pass);
    }

    #[test]
    fn axiom_one_catches_duplicate_element() {
        let mut t = so_table();
        t.set_symmetric(0, 1, 1.0);
        let report = check_axiom_one(&t, DEFAULT_EPS);
        assert!(!report.pass);
        assert!(report.witnesses.iter().any(|w| w.indices == vec![0, 1]));
    }

    #[test]
    fn d_metric_values_on_skeleton() {
        let t = so_table();
        assert_eq!(d_metric(&t, 0, 1), 1.0); // orthogonal pair
        assert_eq!(d_metric(&t, 0, 0), 0.0);
        assert_eq!(d_metric(&t, 0, 2), 0.5); // max over the four columns
    }

    #[test]
    fn d_metric_triangle_inequality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = 5;
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                rows[i][i] = 1.0;
                for j in (i + 1)..n {
                    let v: f64 = rng.random::<f64>() * 0.98;
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let t = PTable::new((0..n).map(|i| i.to_string()).collect(), rows).unwrap();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = d_metric(&t, i, k);
                        let rhs = d_metric(&t, i, j) + d_metric(&t, j, k);
                        assert!(lhs <= rhs + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn frames_of_skeleton() {
        let frames = enumerate_frames(&so_table(), DEFAULT_EPS).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[0].indices(), &[0, 1]);
        assert_eq!(frames[1].indices(), &[2, 3]);
    }

    #[test]
    fn frames_of_identity_table() {
        let n = 6;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        let t = PTable::new((0..n).map(|i| i.to_string()).collect(), rows).unwrap();
        let frames = enumerate_frames(&t, DEFAULT_EPS).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].len(), n);
        assert!(check_axiom_three(&t, DEFAULT_EPS).unwrap().pass);
    }

    #[test]
    fn frame_enumeration_is_order_independent() {
        let t = so_table();
        let perm = vec![2, 0, 3, 1];
        let tp = t.permuted(&perm);
        let frames = enumerate_frames(&tp, DEFAULT_EPS).unwrap();
        // Map back through the permutation and compare as sets of sets.
        let mut mapped: Vec<Vec<usize>> = frames
            .iter()
            .map(|f| {
                let mut v: Vec<usize> = f.indices().iter().map(|&i| perm[i]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        mapped.sort();
        assert_eq!(mapped, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn axiom_three_passes_on_skeleton() {
        assert!(check_axiom_three(&so_table(), DEFAULT_EPS).unwrap().pass);
    }

    #[test]
    fn axiom_three_residual_on_perturbed_skeleton() {
        let mut t = so_table();
        t.set_symmetric(0, 2, 0.6);
        let report = check_axiom_three(&t, DEFAULT_EPS).unwrap();
        assert!(!report.pass);
        let worst = report.worst_residual();
        assert!((worst - 0.1).abs() < 1e-12, "residual {worst}");
    }

    #[test]
    fn frame_equivalence_on_skeleton() {
        let t = so_table();
        let fx = Frame::new(vec![0, 1]);
        let fy = Frame::new(vec![2, 3]);
        let report = check_frame_equivalence(&t, &fx, &fy, DEFAULT_EPS).unwrap();
        assert!(report.pass);
        let same = check_frame_equivalence(&t, &fx, &fx, DEFAULT_EPS).unwrap();
        assert!(same.pass);
    }

    #[test]
    fn axiom_four_no_candidate_on_skeleton() {
        let outcomes = axiom_four_outcomes(&so_table(), DEFAULT_EPS);
        // 8 ordered non-compatible pairs, none witnessed: the skeleton's
        // only orthogonal pairs give p-values in {0, 1/2, 1}, never
        // lambda = (1+sqrt(1/2))/2.
        assert_eq!(outcomes.len(), 8);
        for ((_, _), outcome) in &outcomes {
            match outcome {
                AxiomFourOutcome::NoCandidate { lambda } => {
                    assert!((lambda - 0.8535533905932737).abs() < 1e-12);
                }
                other => panic!("expected NoCandidate, got {other:?}"),
            }
        }
        assert!(check_axiom_four(&so_table(), DEFAULT_EPS).pass);
    }

    #[test]
    fn metric_consistency_hv_exact_on_skeleton() {
        let t = so_table();
        let report = metric_consistency(&t, ModelLaw::HiddenVariable, DEFAULT_EPS);
        assert!(report.pass);
        // Equality d = 1 - p on every pair of the exact skeleton.
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!((d_metric(&t, i, j) - (1.0 - t.get(i, j))).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn loader_round_trip_and_asymmetry_gate() {
        let t = so_table();
        let text = t.to_json();
        let back = PTable::from_json(&text, false).unwrap();
        assert_eq!(t, back);

        let mut bad = so_table();
        bad.p[1] = 1e-3; // p[0][1] only
        let bad_text = bad.to_json();
        assert!(matches!(
            PTable::from_json(&bad_text, false),
            Err(PTableError::Asymmetric(0, 1, _))
        ));
        assert!(PTable::from_json(&bad_text, true).is_ok());
    }

    #[test]
    fn loader_rejects_shape_and_range_errors() {
        assert!(matches!(
            PTable::from_json("{\"labels\":[\"a\"],\"p\":[[1.0,0.0]]}", false),
            Err(PTableError::NotSquare { .. })
        ));
        assert!(matches!(
            PTable::from_json("{\"labels\":[\"a\"],\"p\":[[1.5]]}", false),
            Err(PTableError::OutOfRange(0, 0, _))
        ));
        assert!(matches!(
            PTable::from_json("not json", false),
            Err(PTableError::Parse(_))
        ));
    }

    #[test]
    fn clique_cap_enforced() {
        let n = MAX_ELEMENTS + 1;
        let result = maximal_cliques(n, |_, _| false);
        assert!(matches!(result, Err(PTableError::TooLarge(_))));
    }
}
