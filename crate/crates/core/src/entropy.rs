//! Shannon, von Neumann, and information entropy; the rank-weighted
//! purity average; and the purity-uniformity (Axiom V) test.
//!
//! The information entropy of a pure qubit averages the Shannon entropy
//! of measurement outcomes over all frames. Over a rank-R state space the
//! purity δ of the outcome mixture carries density ∝ (1−δ²)^{(R−2)/2}, so
//! the average reduces to a one-dimensional integral evaluated here by
//! Gauss–Legendre quadrature (after δ = sin u, which absorbs the R = 1
//! endpoint singularity) or by Monte-Carlo sampling.
//!
//! All entropies are in nats; displays may convert to bits.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::algebra::{born_probability, sample_uniform_state, RingTag, StateVector};
use crate::dynamics::MixedState;
use crate::mc::{self, MeanAccumulator};
use crate::models::skeleton_table;
use crate::numeric::{gauss_legendre, ks_statistic, KS_CRITICAL_ALPHA_01};
use crate::ptable::enumerate_frames;

/// Default Gauss–Legendre node count for purity averages.
pub const QUADRATURE_NODES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("probabilities sum to {0}, not 1 (within 1e-12)")]
    NotNormalized(f64),
    #[error("probability {1} at index {0} is negative")]
    NegativeWeight(usize, f64),
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
    #[error("need at least {1} samples, got {0}")]
    TooFewSamples(u64, u64),
}

/// Shannon entropy −Σ qⱼ ln qⱼ in nats, with 0·ln 0 = 0.
pub fn shannon(q: &[f64]) -> Result<f64, EntropyError> {
    let mut sum = 0.0;
    for (i, &w) in q.iter().enumerate() {
        if w < -1e-12 {
            return Err(EntropyError::NegativeWeight(i, w));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(EntropyError::NotNormalized(sum));
    }
    Ok(q.iter()
        .map(|&w| if w > 0.0 { -w * w.ln() } else { 0.0 })
        .sum())
}

/// Shannon entropy of (p, 1−p).
pub fn binary_shannon(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.ln();
    }
    if q > 0.0 {
        h -= q * q.ln();
    }
    h
}

/// Von Neumann entropy of a mixed state: Shannon entropy of its frame
/// weights. The `MixedState` type already guarantees an orthogonal frame
/// and normalized weights; residual collapse rounding is divided out.
pub fn von_neumann(m: &MixedState) -> f64 {
    let total: f64 = m.weights().iter().sum();
    m.weights()
        .iter()
        .map(|&w| {
            let p = (w / total).max(0.0);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// Purity of a qubit mixture: δ = |2p − 1| for larger outcome weight p;
/// 0 when maximally mixed, 1 when pure.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Purity(f64);

impl Purity {
    pub fn from_weight(p: f64) -> Self {
        Purity((2.0 * p - 1.0).abs().clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Shannon entropy of the qubit mixture with purity δ: the weights are
/// (1+δ)/2 and (1−δ)/2.
pub fn shannon_of_purity(delta: f64) -> f64 {
    binary_shannon(0.5 * (1.0 + delta))
}

/// How an average over measurement frames is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AverageMethod {
    Quadrature { nodes: usize },
    MonteCarlo { samples: u64, seed: u64 },
}

impl Default for AverageMethod {
    fn default() -> Self {
        AverageMethod::Quadrature {
            nodes: QUADRATURE_NODES,
        }
    }
}

/// Which route produced an entropy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactFrames,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExactFrames => "exact-frames",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

/// Entropy value with its evaluation route and error estimate (half-rule
/// difference for quadrature, standard error for Monte-Carlo).
#[derive(Debug, Clone, Copy)]
pub struct EntropyResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
}

/// Average of g(δ) under the purity density (1−δ²)^{(R−2)/2} on `[0,1]`.
pub fn purity_average<G: Fn(f64) -> f64 + Sync>(
    rank: usize,
    g: G,
    method: AverageMethod,
) -> Result<EntropyResult, EntropyError> {
    if rank < 1 {
        return Err(EntropyError::BadRank(rank));
    }
    match method {
        AverageMethod::Quadrature { nodes } => {
            let value = purity_quadrature(rank, &g, nodes);
            let coarse = purity_quadrature(rank, &g, (nodes / 2).max(1));
            Ok(EntropyResult {
                value,
                method: Method::Quadrature,
                error_estimate: (value - coarse).abs(),
            })
        }
        AverageMethod::MonteCarlo { samples, seed } => {
            if samples < 1 {
                return Err(EntropyError::TooFewSamples(samples, 1));
            }
            let acc = mc::run_streams(samples, seed, |n, rng| {
                let mut acc = MeanAccumulator::default();
                for _ in 0..n {
                    acc.push(g(sample_purity(rank, rng)));
                }
                acc
            })
            .into_iter()
            .fold(MeanAccumulator::default(), MeanAccumulator::merge);
            Ok(EntropyResult {
                value: acc.mean(),
                method: Method::MonteCarlo,
                error_estimate: acc.standard_error(),
            })
        }
    }
}

/// ∫ g(sin u) cos^{R−1} u du / ∫ cos^{R−1} u du over [0, π/2]; the sin
/// substitution of the δ-integral.
fn purity_quadrature<G: Fn(f64) -> f64>(rank: usize, g: &G, nodes: usize) -> f64 {
    let (xs, ws) = gauss_legendre(nodes);
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let u = quarter * (x + 1.0);
        let weight = w * quarter * u.cos().powi(rank as i32 - 1);
        num += weight * g(u.sin());
        den += weight;
    }
    num / den
}

/// Purity of the outcome of one uniformly random frame on a pure state:
/// δ = |cos θ| of a uniform point on the R-sphere.
fn sample_purity(rank: usize, rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let pole: f64 = rng.sample(StandardNormal);
        let mut norm_sq = pole * pole;
        for _ in 0..rank {
            let x: f64 = rng.sample(StandardNormal);
            norm_sq += x * x;
        }
        if norm_sq > 0.0 {
            return (pole.abs() / norm_sq.sqrt()).clamp(0.0, 1.0);
        }
    }
}

/// Information entropy of a pure qubit over the given ring: the purity
/// average of the outcome Shannon entropy, with R the ring's rank.
pub fn info_entropy_qubit(ring: RingTag, method: AverageMethod) -> EntropyResult {
    purity_average(ring.rank(), shannon_of_purity, method).expect("ring ranks are valid")
}

fn info_entropy_worker(ring: RingTag) -> impl Fn(u64, &mut ChaCha8Rng) -> MeanAccumulator + Sync {
    move |n, rng| {
        let e1 = StateVector::basis(ring, 2, 0);
        let mut acc = MeanAccumulator::default();
        for _ in 0..n {
            let y = sample_uniform_state(ring, 2, rng);
            let p = born_probability(&e1, &y).expect("same ring and dim");
            acc.push(binary_shannon(p));
        }
        acc
    }
}

fn result_from_streams(streams: Vec<MeanAccumulator>) -> EntropyResult {
    let acc = streams
        .into_iter()
        .fold(MeanAccumulator::default(), MeanAccumulator::merge);
    EntropyResult {
        value: acc.mean(),
        method: Method::MonteCarlo,
        error_estimate: acc.standard_error(),
    }
}

/// Monte-Carlo cross-check through actual measurements: fixes the pure
/// state e₁ in ring², samples frames {y, y⊥} with y uniform, and averages
/// the outcome entropy. Independent of the purity-density route.
pub fn info_entropy_mc(ring: RingTag, samples: u64, seed: u64) -> EntropyResult {
    assert!(samples >= 1);
    result_from_streams(mc::run_streams(samples, seed, info_entropy_worker(ring)))
}

/// Sequential reference of [`info_entropy_mc`]: same sub-streams on the
/// calling thread, bit-identical output.
pub fn info_entropy_mc_seq(ring: RingTag, samples: u64, seed: u64) -> EntropyResult {
    assert!(samples >= 1);
    result_from_streams(mc::run_streams_seq(
        samples,
        seed,
        info_entropy_worker(ring),
    ))
}

/// Exact information entropy of a pure skeleton element: the average of
/// the outcome entropy over the R+1 frames of the rank-R skeleton. One
/// frame leaves the state pure, the rest mix it evenly, so the value is
/// (R/(R+1))·ln 2.
pub fn info_entropy_skeleton(rank: usize) -> Result<EntropyResult, EntropyError> {
    if rank < 1 {
        return Err(EntropyError::BadRank(rank));
    }
    let table = skeleton_table(rank);
    let frames = enumerate_frames(&table, 1e-9).expect("skeleton is small");
    let element = 0;
    let mut total = 0.0;
    for frame in &frames {
        let weights: Vec<f64> = frame.indices().iter().map(|&j| table.get(element, j)).collect();
        total += shannon(&weights)?;
    }
    Ok(EntropyResult {
        value: total / frames.len() as f64,
        method: Method::ExactFrames,
        error_estimate: 0.0,
    })
}

/// CDF of the purity density (1−δ²)^{(R−2)/2} on `[0,1]`.
pub fn purity_cdf(rank: usize, delta: f64) -> f64 {
    let d = delta.clamp(0.0, 1.0);
    match rank {
        1 => d.asin() / std::f64::consts::FRAC_PI_2,
        2 => d,
        4 => 0.5 * d * (3.0 - d * d),
        r => {
            // General rank via the sin substitution.
            let total = crate::numeric::integrate(QUADRATURE_NODES, 0.0, std::f64::consts::FRAC_PI_2, |u| {
                u.cos().powi(r as i32 - 1)
            });
            let part = crate::numeric::integrate(QUADRATURE_NODES, 0.0, d.asin(), |u| {
                u.cos().powi(r as i32 - 1)
            });
            part / total
        }
    }
}

/// Verdict of the purity-distribution test for one ring.
#[derive(Debug, Clone)]
pub struct AxiomFiveReport {
    pub ring: RingTag,
    pub samples: u64,
    /// KS statistic against the uniform law, scaled by √n.
    pub uniform_scaled: f64,
    /// KS statistic against the ring's own density, scaled by √n.
    pub density_scaled: f64,
    /// Critical value: scaled statistics below this pass at α ≈ 0.01.
    pub threshold: f64,
    pub uniform_pass: bool,
    pub density_pass: bool,
}

/// Draws purities δ = |2p−1| from uniformly random frames applied to a
/// pure qubit state and tests them against the uniform law and against
/// the ring's density (1−δ²)^{(R−2)/2}. Uniformity holds only over ℂ.
pub fn axiom_five_test(
    ring: RingTag,
    samples: u64,
    seed: u64,
) -> Result<AxiomFiveReport, EntropyError> {
    if samples < 1000 {
        return Err(EntropyError::TooFewSamples(samples, 1000));
    }
    let chunks = mc::run_streams(samples, seed, |n, rng| {
        let e1 = StateVector::basis(ring, 2, 0);
        let mut out = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let y = sample_uniform_state(ring, 2, rng);
            let p = born_probability(&e1, &y).expect("same ring and dim");
            out.push(Purity::from_weight(p).value());
        }
        out
    });
    let deltas: Vec<f64> = chunks.into_iter().flatten().collect();

    let sqrt_n = (deltas.len() as f64).sqrt();
    let uniform_scaled = ks_statistic(&deltas, |d| d.clamp(0.0, 1.0)) * sqrt_n;
    let density_scaled = ks_statistic(&deltas, |d| purity_cdf(ring.rank(), d)) * sqrt_n;
    Ok(AxiomFiveReport {
        ring,
        samples,
        uniform_scaled,
        density_scaled,
        threshold: KS_CRITICAL_ALPHA_01,
        uniform_pass: uniform_scaled < KS_CRITICAL_ALPHA_01,
        density_pass: density_scaled < KS_CRITICAL_ALPHA_01,
    })
}

/// Closed-form information entropy of a pure qubit per ring, used as the
/// reference column in the rendered tables.
pub fn reference_info_entropy(ring: RingTag) -> f64 {
    match ring {
        RingTag::R => 2.0 * std::f64::consts::LN_2 - 1.0,
        RingTag::C => 0.5,
        RingTag::H => 7.0 / 12.0,
    }
}

/// Closed-form skeleton information entropy (R/(R+1))·ln 2.
pub fn reference_skeleton_entropy(rank: usize) -> f64 {
    (rank as f64 / (rank + 1) as f64) * std::f64::consts::LN_2
}

/// One row of the rendered entropy tables.
#[derive(Debug, Clone)]
pub struct EntropyTableRow {
    pub rank: usize,
    pub model: String,
    pub value: f64,
    pub method: &'static str,
    pub residual: f64,
}

/// Rows of both entropy tables: pure-state von Neumann and information
/// entropy, then the skeleton comparison with the difference row.
pub fn entropy_table_rows() -> Vec<EntropyTableRow> {
    let mut rows = Vec::new();
    for ring in RingTag::ALL {
        rows.push(EntropyTableRow {
            rank: ring.rank(),
            model: "von-neumann-pure".into(),
            value: 0.0,
            method: Method::ExactFrames.name(),
            residual: 0.0,
        });
    }
    for ring in RingTag::ALL {
        let qm = info_entropy_qubit(ring, AverageMethod::default());
        rows.push(EntropyTableRow {
            rank: ring.rank(),
            model: "qm".into(),
            value: qm.value,
            method: qm.method.name(),
            residual: (qm.value - reference_info_entropy(ring)).abs(),
        });
    }
    for ring in RingTag::ALL {
        let skel = info_entropy_skeleton(ring.rank()).expect("ring ranks valid");
        rows.push(EntropyTableRow {
            rank: ring.rank(),
            model: "skeleton".into(),
            value: skel.value,
            method: skel.method.name(),
            residual: (skel.value - reference_skeleton_entropy(ring.rank())).abs(),
        });
    }
    for ring in RingTag::ALL {
        let qm = info_entropy_qubit(ring, AverageMethod::default());
        let skel = info_entropy_skeleton(ring.rank()).expect("ring ranks valid");
        let exact = reference_info_entropy(ring) - reference_skeleton_entropy(ring.rank());
        rows.push(EntropyTableRow {
            rank: ring.rank(),
            model: "qm-minus-skeleton".into(),
            value: qm.value - skel.value,
            method: "quadrature",
            residual: (qm.value - skel.value - exact).abs(),
        });
    }
    rows
}

/// Text block with both tables side by side per ring.
pub fn render_entropy_tables(bits: bool) -> String {
    let unit = if bits { "bits" } else { "nats" };
    let conv = if bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let rows = entropy_table_rows();
    let value = |model: &str, rank: usize| {
        rows.iter()
            .find(|r| r.model == model && r.rank == rank)
            .map(|r| r.value * conv)
            .expect("row exists")
    };
    let mut out = String::new();
    out.push_str(&format!("Pure state entropy for N=2 ({unit})\n"));
    out.push_str("                          R           C           H\n");
    out.push_str(&format!(
        "  von Neumann entropy     {:<12.6}{:<12.6}{:<12.6}\n",
        0.0, 0.0, 0.0
    ));
    out.push_str(&format!(
        "  information entropy     {:<12.6}{:<12.6}{:<12.6}\n\n",
        value("qm", 1),
        value("qm", 2),
        value("qm", 4)
    ));
    out.push_str(&format!("Information entropy for N=2 pure states ({unit})\n"));
    out.push_str("                          R           C           H\n");
    out.push_str(&format!(
        "  skeleton                {:<12.6}{:<12.6}{:<12.6}\n",
        value("skeleton", 1),
        value("skeleton", 2),
        value("skeleton", 4)
    ));
    out.push_str(&format!(
        "  qm                      {:<12.6}{:<12.6}{:<12.6}\n",
        value("qm", 1),
        value("qm", 2),
        value("qm", 4)
    ));
    out.push_str(&format!(
        "  qm - skeleton           {:<12.6}{:<12.6}{:<12.6}\n",
        value("qm-minus-skeleton", 1),
        value("qm-minus-skeleton", 2),
        value("qm-minus-skeleton", 4)
    ));
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    out.push_str(&format!(
        "\nmethods: quadrature ({QUADRATURE_NODES}-node) for qm rows, exact-frames for skeleton rows\n\
         max residual vs closed forms: {worst:.2e}\n"
    ));
    out
}

/// CSV form `rank,model,value` with full-precision values.
pub fn entropy_tables_csv(bits: bool) -> String {
    let conv = if bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let mut out = String::from("rank,model,value\n");
    for row in entropy_table_rows() {
        out.push_str(&format!("{},{},{}\n", row.rank, row.model, row.value * conv));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn shannon_closed_cases() {
        assert_abs_diff_eq!(shannon(&[0.5, 0.5]).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(shannon(&[1.0, 0.0]).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            shannon(&[0.75, 0.25]).unwrap(),
            0.5623351446188083,
            epsilon = 1e-12
        );
    }

    #[test]
    fn shannon_rejects_bad_input() {
        assert_eq!(
            shannon(&[0.5, 0.4]),
            Err(EntropyError::NotNormalized(0.9))
        );
        assert!(matches!(
            shannon(&[1.5, -0.5]),
            Err(EntropyError::NegativeWeight(1, _))
        ));
    }

    #[test]
    fn shannon_is_concave() {
        use rand::Rng;
        let mut rng = mc::stream_rng(4, 0);
        for _ in 0..500 {
            let lam: f64 = rng.random();
            let q: Vec<f64> = {
                let a: f64 = rng.random();
                vec![a, 1.0 - a]
            };
            let r: Vec<f64> = {
                let a: f64 = rng.random();
                vec![a, 1.0 - a]
            };
            let mix: Vec<f64> = q
                .iter()
                .zip(&r)
                .map(|(&x, &y)| lam * x + (1.0 - lam) * y)
                .collect();
            let lhs = shannon(&mix).unwrap();
            let rhs = lam * shannon(&q).unwrap() + (1.0 - lam) * shannon(&r).unwrap();
            assert!(lhs >= rhs - 1e-12);
        }
    }

    #[test]
    fn von_neumann_closed_cases() {
        use crate::algebra::orthogonal_complement;
        let b = StateVector::basis(RingTag::C, 2, 0);
        let bp = orthogonal_complement(&b).unwrap();
        let pure = MixedState::new(vec![b.clone(), bp.clone()], vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(von_neumann(&pure), 0.0, epsilon = 1e-15);
        let mixed = MixedState::new(vec![b.clone(), bp.clone()], vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(von_neumann(&mixed), LN_2, epsilon = 1e-15);
        let weighted = MixedState::new(vec![b, bp], vec![0.875, 0.125]).unwrap();
        assert_abs_diff_eq!(von_neumann(&weighted), 0.37677016125643675, epsilon = 1e-12);
    }

    #[test]
    fn von_neumann_requires_verified_frame() {
        let b = StateVector::basis(RingTag::C, 2, 0);
        let s = 0.5_f64.sqrt();
        let not_orthogonal = StateVector::from_complexes(&[(s, 0.0), (s, 0.0)]);
        assert!(MixedState::new(vec![b, not_orthogonal], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn purity_average_uniform_identity_is_half() {
        let res = purity_average(2, |d| d, AverageMethod::default()).unwrap();
        assert_abs_diff_eq!(res.value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn purity_average_matches_beta_moments() {
        // E[δ^m] under (1−δ²)^{(R−2)/2}: closed forms per rank.
        let cases: [(usize, usize, f64); 6] = [
            (1, 1, 2.0 / std::f64::consts::PI),
            (1, 2, 0.5),
            (1, 4, 3.0 / 8.0),
            (2, 3, 0.25),
            (4, 2, 0.2),
            (4, 4, 3.0 / 35.0),
        ];
        for (rank, m, expected) in cases {
            let res = purity_average(rank, |d| d.powi(m as i32), AverageMethod::default()).unwrap();
            assert_abs_diff_eq!(res.value, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn info_entropy_closed_values_by_quadrature() {
        let expected = [
            (RingTag::R, 2.0 * LN_2 - 1.0),
            (RingTag::C, 0.5),
            (RingTag::H, 7.0 / 12.0),
        ];
        for (ring, value) in expected {
            let res = info_entropy_qubit(ring, AverageMethod::default());
            assert_abs_diff_eq!(res.value, value, epsilon = 1e-9);
            assert!(res.error_estimate < 1e-6);
        }
    }

    #[test]
    fn quadrature_and_density_mc_agree() {
        for ring in RingTag::ALL {
            let quad = info_entropy_qubit(ring, AverageMethod::default());
            let mc = info_entropy_qubit(
                ring,
                AverageMethod::MonteCarlo {
                    samples: 200_000,
                    seed: 12,
                },
            );
            assert!(
                (quad.value - mc.value).abs() < 3.0 * mc.error_estimate,
                "{ring}: quad {} vs mc {} ± {}",
                quad.value,
                mc.value,
                mc.error_estimate
            );
        }
    }

    #[test]
    fn frame_sampling_mc_agrees_with_quadrature() {
        for ring in RingTag::ALL {
            let quad = info_entropy_qubit(ring, AverageMethod::default());
            let mc = info_entropy_mc(ring, 200_000, 34);
            assert!(
                (quad.value - mc.value).abs() < 3.0 * mc.error_estimate,
                "{ring}: {} vs {} ± {}",
                quad.value,
                mc.value,
                mc.error_estimate
            );
        }
    }

    #[test]
    fn mc_agreement_holds_across_twenty_seeds() {
        for seed in 200..220 {
            for ring in RingTag::ALL {
                let quad = info_entropy_qubit(ring, AverageMethod::default());
                let mc = info_entropy_mc(ring, 100_000, seed);
                assert!(
                    (quad.value - mc.value).abs() < 3.0 * mc.error_estimate,
                    "seed {seed} {ring}: {} vs {} ± {}",
                    quad.value,
                    mc.value,
                    mc.error_estimate
                );
            }
        }
    }

    #[test]
    fn mc_sequential_reference_is_bit_identical() {
        let a = info_entropy_mc(RingTag::H, 50_000, 77);
        let b = info_entropy_mc_seq(RingTag::H, 50_000, 77);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn skeleton_entropy_is_rank_weighted_ln_two() {
        for rank in 1..=6 {
            let res = info_entropy_skeleton(rank).unwrap();
            assert_abs_diff_eq!(
                res.value,
                reference_skeleton_entropy(rank),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn purity_cdf_closed_forms() {
        let half: f64 = 0.5;
        assert_abs_diff_eq!(
            purity_cdf(1, 0.5),
            half.asin() * 2.0 / std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(purity_cdf(2, 0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(purity_cdf(4, 1.0), 1.0, epsilon = 1e-15);
        // The general-rank fallback agrees with the closed forms.
        for (rank, d) in [(1usize, 0.7f64), (2, 0.4), (4, 0.9)] {
            let general = match rank {
                1 => d.asin() / std::f64::consts::FRAC_PI_2,
                2 => d,
                _ => 0.5 * d * (3.0 - d * d),
            };
            assert_abs_diff_eq!(purity_cdf(rank, d), general, epsilon = 1e-12);
            let _ = purity_cdf(3, d); // rank without a division ring still evaluates
        }
    }

    #[test]
    fn axiom_five_discriminates_the_rings() {
        let seed = 2;
        let samples = 100_000;
        let c = axiom_five_test(RingTag::C, samples, seed).unwrap();
        assert!(c.uniform_pass, "C uniform KS = {}", c.uniform_scaled);
        assert!(c.density_pass);
        let r = axiom_five_test(RingTag::R, samples, seed).unwrap();
        assert!(!r.uniform_pass, "R uniform KS = {}", r.uniform_scaled);
        assert!(r.density_pass, "R density KS = {}", r.density_scaled);
        let h = axiom_five_test(RingTag::H, samples, seed).unwrap();
        assert!(!h.uniform_pass, "H uniform KS = {}", h.uniform_scaled);
        assert!(h.density_pass, "H density KS = {}", h.density_scaled);
    }

    #[test]
    fn axiom_five_requires_enough_samples() {
        assert!(matches!(
            axiom_five_test(RingTag::C, 10, 1),
            Err(EntropyError::TooFewSamples(10, 1000))
        ));
    }

    #[test]
    fn rendered_tables_show_reference_values() {
        let text = render_entropy_tables(false);
        assert!(text.contains("0.500000"), "{text}");
        assert!(text.contains("0.386294"), "{text}");
        assert!(text.contains("0.583333"), "{text}");
        assert!(text.contains("0.346574"), "{text}");
        assert!(text.contains("0.462098"), "{text}");
        assert!(text.contains("0.554518"), "{text}");
        let bits = render_entropy_tables(true);
        // ln 2 nats = 1 bit: the C skeleton row reads 2/3.
        assert!(bits.contains("0.666667"), "{bits}");
        let csv = entropy_tables_csv(false);
        assert!(csv.starts_with("rank,model,value\n"));
        assert!(csv.lines().count() > 10);
    }
}
