//! Measurement collapse, the Turing–von Neumann entropy-reduction effect,
//! the distance law of the Born-rule model, and the Zeno coaxing chain.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{
    born_probability, inner_product, orthogonal_complement, AlgebraError, RingTag, StateVector,
};
use crate::entropy::shannon;
use crate::report::{VerificationReport, Witness};

/// Orthonormality/completeness tolerance for frames of state vectors.
pub const FRAME_TOL: f64 = 1e-9;

type C64 = Complex<f64>;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("frame elements {0} and {1} not orthogonal: p = {2:e}")]
    FrameNotOrthogonal(usize, usize, f64),
    #[error("frame incomplete: weights sum to {0}, deficit beyond {FRAME_TOL:e}")]
    IncompleteFrame(f64),
    #[error("weights sum to {0}, not 1")]
    BadWeights(f64),
    #[error("states are orthogonal: the midpoint pair degenerates (lambda = 1/2)")]
    OrthogonalPair,
    #[error("states coincide projectively")]
    IdenticalPair,
    #[error("expected a qubit (dimension 2), got dimension {0}")]
    NotQubit(usize),
    #[error("operator not Hermitian: max |H - H†| entry = {0:e}")]
    NotHermitian(f64),
    #[error("operator is {rows}x{cols}, expected square of dimension {dim}")]
    OperatorShape { rows: usize, cols: usize, dim: usize },
    #[error("zeno chain needs tau > 0 and at least one step")]
    BadZenoParameters,
    #[error("complex coordinates required, got ring {0}")]
    ComplexRequired(RingTag),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Probability weights over a frame of mutually orthogonal states; the
/// result of a measurement collapse. Construction verifies the frame and
/// the weight normalization, so a value of this type is always a valid
/// mixed state.
#[derive(Debug, Clone)]
pub struct MixedState {
    frame: Vec<StateVector>,
    weights: Vec<f64>,
}

impl MixedState {
    pub fn new(frame: Vec<StateVector>, weights: Vec<f64>) -> Result<Self, DynamicsError> {
        if frame.len() != weights.len() {
            return Err(AlgebraError::DimensionMismatch(frame.len(), weights.len()).into());
        }
        for (i, a) in frame.iter().enumerate() {
            for (j, b) in frame.iter().enumerate().skip(i + 1) {
                let p = born_probability(a, b)?;
                if p >= FRAME_TOL {
                    return Err(DynamicsError::FrameNotOrthogonal(i, j, p));
                }
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FRAME_TOL || weights.iter().any(|&w| w < -FRAME_TOL) {
            return Err(DynamicsError::BadWeights(sum));
        }
        Ok(MixedState { frame, weights })
    }

    pub fn frame(&self) -> &[StateVector] {
        &self.frame
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Collapse of a pure state onto a frame: weights b_j(a) over the frame
/// elements. The frame must be complete for the subspace containing `a`
/// (weights must reach 1 within tolerance).
pub fn collapse(a: &StateVector, frame: &[StateVector]) -> Result<MixedState, DynamicsError> {
    let mut weights = Vec::with_capacity(frame.len());
    for b in frame {
        weights.push(born_probability(a, b)?);
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > FRAME_TOL {
        return Err(DynamicsError::IncompleteFrame(sum));
    }
    MixedState::new(frame.to_vec(), weights)
}

/// Measurement of a mixed state by another frame: each component
/// collapses independently and the outcome weights mix.
pub fn measure_mixed(m: &MixedState, frame: &[StateVector]) -> Result<MixedState, DynamicsError> {
    let mut weights = vec![0.0; frame.len()];
    for (component, &w) in m.frame().iter().zip(m.weights()) {
        let collapsed = collapse(component, frame)?;
        for (acc, &p) in weights.iter_mut().zip(collapsed.weights()) {
            *acc += w * p;
        }
    }
    MixedState::new(frame.to_vec(), weights)
}

/// The unique orthogonal pair (c, c′) splitting the equal mixture of two
/// distinct non-orthogonal qubit states, with λ = a(c) = b(c).
#[derive(Debug, Clone)]
pub struct TvnMidpoint {
    pub c: StateVector,
    pub c_prime: StateVector,
    pub lambda: f64,
}

/// Geodesic midpoint construction: with the relative phase chosen so the
/// overlap ⟨â·φ, b̂⟩ is real positive, c = normalized(â·φ + b̂) satisfies
/// a(c) = b(c) = λ = ½(1+√a(b)), and c′ is the antipode of c.
pub fn tvn_midpoint(a: &StateVector, b: &StateVector) -> Result<TvnMidpoint, DynamicsError> {
    if a.dim() != 2 {
        return Err(DynamicsError::NotQubit(a.dim()));
    }
    let p = born_probability(a, b)?;
    if p <= FRAME_TOL {
        return Err(DynamicsError::OrthogonalPair);
    }
    if p >= 1.0 - FRAME_TOL {
        return Err(DynamicsError::IdenticalPair);
    }
    let a_hat = a.normalized()?;
    let b_hat = b.normalized()?;
    let overlap = inner_product(&a_hat, &b_hat)?;
    let phase = overlap.scale(1.0 / overlap.norm());
    let c = a_hat.scaled_right(phase).add(&b_hat)?.normalized()?;
    let c_prime = orthogonal_complement(&c)?;
    let lambda = 0.5 * (1.0 + p.sqrt());

    let pc = born_probability(a, &c)?;
    let qc = born_probability(b, &c)?;
    debug_assert!((pc - lambda).abs() < FRAME_TOL && (qc - lambda).abs() < FRAME_TOL);
    Ok(TvnMidpoint { c, c_prime, lambda })
}

/// Result of the intermediate-measurement comparison
/// H(F_b F_x a) vs H(F_b a).
#[derive(Debug, Clone)]
pub struct TvnComparison {
    pub h_direct: f64,
    pub h_intermediate: f64,
    pub intermediate_frame: TvnMidpoint,
    pub report: VerificationReport,
}

/// Compares the entropy of measuring `a` by the frame of `b` directly
/// against inserting the midpoint measurement first. The intermediate
/// frame uses c(a,b) when a(b) ≥ ½ and c(a,b′) otherwise; the report
/// passes when the intermediate route is strictly less entropic.
pub fn tvn_compare(a: &StateVector, b: &StateVector) -> Result<TvnComparison, DynamicsError> {
    let p = born_probability(a, b)?;
    if p >= 1.0 - FRAME_TOL {
        return Err(DynamicsError::IdenticalPair);
    }
    let b_hat = b.normalized()?;
    let b_perp = orthogonal_complement(&b_hat)?;
    let frame_b = vec![b_hat.clone(), b_perp.clone()];

    let direct = collapse(a, &frame_b)?;
    let h_direct = shannon(direct.weights()).expect("collapse weights normalized");

    let midpoint = if p >= 0.5 {
        tvn_midpoint(a, &b_hat)?
    } else {
        tvn_midpoint(a, &b_perp)?
    };
    let frame_x = vec![midpoint.c.clone(), midpoint.c_prime.clone()];
    let after_x = collapse(a, &frame_x)?;
    let after_b = measure_mixed(&after_x, &frame_b)?;
    let h_intermediate = shannon(after_b.weights()).expect("mixed weights normalized");

    let mut report = VerificationReport::new("turing-von-neumann", 0.0);
    if h_intermediate >= h_direct {
        report.fail(Witness::new(
            vec![],
            h_intermediate - h_direct,
            "intermediate measurement failed to reduce the entropy increase",
        ));
    }
    Ok(TvnComparison {
        h_direct,
        h_intermediate,
        intermediate_frame: midpoint,
        report,
    })
}

/// Distance law of the Born-rule model: d(x,y) = √(1 − x(y)).
pub fn crqm_distance(x: &StateVector, y: &StateVector) -> Result<f64, DynamicsError> {
    let p = born_probability(x, y)?;
    Ok((1.0 - p).max(0.0).sqrt())
}

/// Checks (π(x) − π(y))³ = (1 − |⟨x,y⟩|²)(π(x) − π(y)) on the projector
/// difference and reads the distance off its largest eigenvalue.
/// Returns (identity residual, |largest eigenvalue|).
pub fn cubic_identity_check(x: &StateVector, y: &StateVector) -> Result<(f64, f64), DynamicsError> {
    let d = projector(x)? - projector(y)?;
    let p = born_probability(x, y)?;
    let cubic = &d * &d * &d;
    let scaled = d.map(|z| z * C64::new(1.0 - p, 0.0));
    let residual = (&cubic - &scaled).map(|z| z.norm()).max();
    let eig = d.symmetric_eigen();
    let largest = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    Ok((residual, largest))
}

/// Rank-1 projector of a real or complex state vector as a complex matrix.
fn projector(x: &StateVector) -> Result<DMatrix<C64>, DynamicsError> {
    let v = to_complex(x)?;
    let v = &v / C64::new(v.norm(), 0.0);
    Ok(&v * v.adjoint())
}

fn to_complex(x: &StateVector) -> Result<DVector<C64>, DynamicsError> {
    if x.ring() == RingTag::H {
        return Err(DynamicsError::ComplexRequired(x.ring()));
    }
    Ok(DVector::from_iterator(
        x.dim(),
        x.components().iter().map(|q| C64::new(q.w, q.x)),
    ))
}

/// Hermitian operator on a complex N-dimensional space.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: DMatrix<C64>,
}

/// File shape: complex matrix as row-major pairs of doubles.
#[derive(Deserialize)]
struct HermitianFile {
    h: Vec<Vec<[f64; 2]>>,
}

impl HermitianOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self, DynamicsError> {
        if !matrix.is_square() {
            return Err(DynamicsError::OperatorShape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                dim: matrix.nrows(),
            });
        }
        let gap = (&matrix - matrix.adjoint()).map(|z| z.norm()).max();
        if gap > 1e-12 {
            return Err(DynamicsError::NotHermitian(gap));
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self, DynamicsError> {
        let n = rows.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            let (re, im) = rows[i][j];
            C64::new(re, im)
        });
        HermitianOperator::new(matrix)
    }

    /// Loads the object file with a complex matrix field `h` (pairs of
    /// doubles, row-major).
    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, DynamicsError> {
        let text = std::fs::read_to_string(path)?;
        let file: HermitianFile = serde_json::from_str(&text)?;
        let n = file.h.len();
        for row in &file.h {
            if row.len() != n {
                return Err(DynamicsError::OperatorShape {
                    rows: n,
                    cols: row.len(),
                    dim: n,
                });
            }
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| C64::new(file.h[i][j][0], file.h[i][j][1]));
        HermitianOperator::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Dispersion √(⟨ψ|H²|ψ⟩ − ⟨ψ|H|ψ⟩²) in the given unit state.
    pub fn dispersion(&self, psi: &DVector<C64>) -> f64 {
        let h_psi = &self.matrix * psi;
        let mean = psi.dotc(&h_psi).re;
        let mean_sq = h_psi.dotc(&h_psi).re;
        (mean_sq - mean * mean).max(0.0).sqrt()
    }

    /// exp(−iτH) through the eigendecomposition (exact at this scale).
    pub fn evolution(&self, tau: f64) -> DMatrix<C64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| {
            let angle = -tau * e;
            C64::new(angle.cos(), angle.sin())
        }));
        &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
    }
}

/// Survival record of a measurement chain along |k⟩ = exp(−iτH)|k−1⟩.
#[derive(Debug, Clone)]
pub struct ZenoRun {
    pub tau: f64,
    pub steps: usize,
    pub dispersion: f64,
    /// `survival[k]` = p_k, with p_0 = 1.
    pub survival: Vec<f64>,
    /// `bound[k]` = (1 − (τΔ)²)^k.
    pub bound: Vec<f64>,
    /// e^{−τTΔ²} with T = nτ: limit of the bound at fixed T.
    pub asymptote: f64,
    /// Steps whose exact one-step survival fell below the second-order
    /// bound; only expected when τΔ is large.
    pub flagged_steps: Vec<usize>,
}

impl ZenoRun {
    /// Final survival probability p_n.
    pub fn final_survival(&self) -> f64 {
        *self.survival.last().expect("at least p_0")
    }

    /// CSV rows `k,p_k,bound_k` with full-precision floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p_k,bound_k\n");
        for (k, (p, b)) in self.survival.iter().zip(&self.bound).enumerate() {
            out.push_str(&format!("{k},{p},{b}\n"));
        }
        out
    }
}

/// Runs the deterministic coaxing chain: survival p_k as the product of
/// conditional one-step survivals |⟨k|k−1⟩|², against the lower bound
/// (1 − (τΔ)²)^k.
pub fn zeno_chain(
    h: &HermitianOperator,
    initial: &StateVector,
    tau: f64,
    steps: usize,
) -> Result<ZenoRun, DynamicsError> {
    if tau <= 0.0 || steps == 0 {
        return Err(DynamicsError::BadZenoParameters);
    }
    if initial.ring() != RingTag::C {
        return Err(DynamicsError::ComplexRequired(initial.ring()));
    }
    if initial.dim() != h.dim() {
        return Err(DynamicsError::OperatorShape {
            rows: h.dim(),
            cols: h.dim(),
            dim: initial.dim(),
        });
    }
    let mut psi = to_complex(&initial.normalized()?)?;
    let u = h.evolution(tau);
    let dispersion = h.dispersion(&psi);
    let per_step_bound = 1.0 - (tau * dispersion).powi(2);

    let mut survival = Vec::with_capacity(steps + 1);
    let mut bound = Vec::with_capacity(steps + 1);
    let mut flagged_steps = Vec::new();
    survival.push(1.0);
    bound.push(1.0);
    let mut p = 1.0;
    for k in 1..=steps {
        let next = &u * &psi;
        let one_step = next.dotc(&psi).norm_sqr();
        if one_step < per_step_bound {
            flagged_steps.push(k);
        }
        p *= one_step;
        survival.push(p);
        bound.push(per_step_bound.max(0.0).powi(k as i32));
        psi = next;
    }
    let total_time = steps as f64 * tau;
    Ok(ZenoRun {
        tau,
        steps,
        dispersion,
        survival,
        bound,
        asymptote: (-tau * total_time * dispersion * dispersion).exp(),
        flagged_steps,
    })
}

/// Stochastic companion to [`zeno_chain`]: samples whether each collapse
/// lands on the coaxed state and reports the surviving fraction per step.
pub fn zeno_survival_sample(
    h: &HermitianOperator,
    initial: &StateVector,
    tau: f64,
    steps: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>, DynamicsError> {
    use rand::Rng;
    zeno_chain(h, initial, tau, steps)?;
    let psi = to_complex(&initial.normalized()?)?;
    let u = h.evolution(tau);
    let one_step = (&u * &psi).dotc(&psi).norm_sqr();

    let counts = crate::mc::run_streams(trials, seed, |n, rng| {
        let mut alive_per_step = vec![0u64; steps];
        for _ in 0..n {
            let mut alive = true;
            for count in alive_per_step.iter_mut() {
                if alive && rng.random::<f64>() >= one_step {
                    alive = false;
                }
                if alive {
                    *count += 1;
                }
            }
        }
        alive_per_step
    });
    let mut totals = vec![0u64; steps];
    for stream in counts {
        for (t, c) in totals.iter_mut().zip(stream) {
            *t += c;
        }
    }
    Ok(totals.iter().map(|&c| c as f64 / trials as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sample_uniform_state;
    use crate::mc::stream_rng;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn qubit_pair_with_p(p: f64) -> (StateVector, StateVector) {
        // Real representatives at angle acos(sqrt(p)).
        let angle = p.sqrt().acos();
        (
            StateVector::from_reals(&[1.0, 0.0]),
            StateVector::from_reals(&[angle.cos(), angle.sin()]),
        )
    }

    #[test]
    fn collapse_onto_own_frame_is_pure() {
        let b1 = StateVector::basis(RingTag::C, 3, 0);
        let frame: Vec<StateVector> = (0..3).map(|k| StateVector::basis(RingTag::C, 3, k)).collect();
        let m = collapse(&b1, &frame).unwrap();
        assert_eq!(m.weights()[0], 1.0);
        assert_eq!(m.weights()[1], 0.0);
    }

    #[test]
    fn collapse_weights_match_born_rule() {
        let (a, b) = qubit_pair_with_p(0.75);
        let b_perp = orthogonal_complement(&b).unwrap();
        let m = collapse(&a, &[b.clone(), b_perp]).unwrap();
        assert_abs_diff_eq!(m.weights()[0], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(m.weights()[1], 0.25, epsilon = 1e-12);
    }

    #[test]
    fn collapse_rejects_incomplete_frame() {
        let a = StateVector::basis(RingTag::C, 3, 0);
        let partial = vec![
            StateVector::basis(RingTag::C, 3, 1),
            StateVector::basis(RingTag::C, 3, 2),
        ];
        assert!(matches!(
            collapse(&a, &partial),
            Err(DynamicsError::IncompleteFrame(_))
        ));
    }

    #[test]
    fn collapse_weights_sum_to_one_across_rings() {
        let mut rng = stream_rng(31, 0);
        for ring in RingTag::ALL {
            for _ in 0..200 {
                let a = sample_uniform_state(ring, 2, &mut rng);
                let frame = crate::algebra::random_orthonormal_basis(ring, 2, &mut rng);
                let m = collapse(&a, &frame).unwrap();
                let sum: f64 = m.weights().iter().sum();
                assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn maximally_mixed_state_is_frame_independent() {
        // Collapsing each frame element and averaging returns the same
        // uniform weights in any other frame.
        let mut rng = stream_rng(77, 0);
        for ring in RingTag::ALL {
            let f1 = crate::algebra::random_orthonormal_basis(ring, 2, &mut rng);
            let f2 = crate::algebra::random_orthonormal_basis(ring, 2, &mut rng);
            let mixed = MixedState::new(f1.clone(), vec![0.5, 0.5]).unwrap();
            let measured = measure_mixed(&mixed, &f2).unwrap();
            assert_abs_diff_eq!(measured.weights()[0], 0.5, epsilon = 1e-9);
            assert_abs_diff_eq!(measured.weights()[1], 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn midpoint_lambda_for_three_quarters() {
        let (a, b) = qubit_pair_with_p(0.75);
        let mid = tvn_midpoint(&a, &b).unwrap();
        assert_abs_diff_eq!(mid.lambda, 0.9330127018922193, epsilon = 1e-12);
        assert_abs_diff_eq!(
            born_probability(&a, &mid.c).unwrap(),
            mid.lambda,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            born_probability(&b, &mid.c).unwrap(),
            mid.lambda,
            epsilon = 1e-12
        );
    }

    #[test]
    fn midpoint_of_real_qubits_bisects_the_angle() {
        let a = StateVector::from_reals(&[1.0, 0.0]);
        let third = std::f64::consts::FRAC_PI_3;
        let b = StateVector::from_reals(&[third.cos(), third.sin()]);
        let mid = tvn_midpoint(&a, &b).unwrap();
        let c = mid.c.components();
        let angle = c[1].w.atan2(c[0].w);
        assert_abs_diff_eq!(angle.abs(), third / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_rejects_degenerate_pairs() {
        let a = StateVector::basis(RingTag::C, 2, 0);
        let b = StateVector::basis(RingTag::C, 2, 1);
        assert!(matches!(
            tvn_midpoint(&a, &b),
            Err(DynamicsError::OrthogonalPair)
        ));
        assert!(matches!(
            tvn_midpoint(&a, &a),
            Err(DynamicsError::IdenticalPair)
        ));
    }

    #[test]
    fn midpoint_identity_on_random_probes() {
        // ½(a(z)+b(z)) = λ c(z) + (1−λ) c′(z) for arbitrary probes z.
        let mut rng = stream_rng(13, 0);
        for ring in RingTag::ALL {
            let a = sample_uniform_state(ring, 2, &mut rng);
            let mut b = sample_uniform_state(ring, 2, &mut rng);
            while born_probability(&a, &b).unwrap() < 1e-3 {
                b = sample_uniform_state(ring, 2, &mut rng);
            }
            let mid = tvn_midpoint(&a, &b).unwrap();
            for _ in 0..100 {
                let z = sample_uniform_state(ring, 2, &mut rng);
                let lhs = 0.5
                    * (born_probability(&a, &z).unwrap() + born_probability(&b, &z).unwrap());
                let rhs = mid.lambda * born_probability(&mid.c, &z).unwrap()
                    + (1.0 - mid.lambda) * born_probability(&mid.c_prime, &z).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn tvn_values_for_three_quarters() {
        let (a, b) = qubit_pair_with_p(0.75);
        let cmp = tvn_compare(&a, &b).unwrap();
        assert_abs_diff_eq!(cmp.h_direct, 0.5623351446188083, epsilon = 1e-9);
        // mu = (1 + a(b))/2 = 7/8 per the intermediate route.
        assert_abs_diff_eq!(cmp.h_intermediate, 0.37677016125643675, epsilon = 1e-9);
        assert!(cmp.report.pass);
    }

    #[test]
    fn tvn_low_overlap_branch_uses_the_antipode() {
        let (a, b) = qubit_pair_with_p(0.25);
        let cmp = tvn_compare(&a, &b).unwrap();
        // Weights over F_b become (a(b)/2, 1 - a(b)/2) = (1/8, 7/8).
        assert_abs_diff_eq!(cmp.h_intermediate, 0.37677016125643675, epsilon = 1e-9);
        assert!(cmp.report.pass);
        assert!(cmp.h_intermediate < cmp.h_direct);
    }

    #[test]
    fn tvn_identical_pair_is_an_error() {
        let a = StateVector::basis(RingTag::C, 2, 0);
        assert!(matches!(
            tvn_compare(&a, &a),
            Err(DynamicsError::IdenticalPair)
        ));
    }

    #[test]
    fn tvn_strict_inequality_across_rings() {
        let mut rng = stream_rng(55, 0);
        for ring in RingTag::ALL {
            for _ in 0..300 {
                let a = sample_uniform_state(ring, 2, &mut rng);
                let b = sample_uniform_state(ring, 2, &mut rng);
                let p = born_probability(&a, &b).unwrap();
                if p < 1e-6 || p > 1.0 - 1e-6 {
                    continue;
                }
                let cmp = tvn_compare(&a, &b).unwrap();
                assert!(
                    cmp.h_intermediate < cmp.h_direct,
                    "ring {ring}: {} !< {}",
                    cmp.h_intermediate,
                    cmp.h_direct
                );
            }
        }
    }

    #[test]
    fn crqm_distance_closed_cases() {
        let (a, b) = qubit_pair_with_p(0.75);
        assert_abs_diff_eq!(crqm_distance(&a, &b).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(crqm_distance(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
        let perp = orthogonal_complement(&a).unwrap();
        assert_abs_diff_eq!(crqm_distance(&a, &perp).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cubic_identity_matches_distance() {
        let mut rng = stream_rng(8, 0);
        for _ in 0..200 {
            let dim = 2 + (rng.random::<u32>() % 3) as usize;
            let x = sample_uniform_state(RingTag::C, dim, &mut rng);
            let y = sample_uniform_state(RingTag::C, dim, &mut rng);
            let (residual, largest) = cubic_identity_check(&x, &y).unwrap();
            assert!(residual < 1e-12, "cubic identity residual {residual}");
            let d = crqm_distance(&x, &y).unwrap();
            assert_abs_diff_eq!(largest, d, epsilon = 1e-12);
        }
    }

    #[test]
    fn hermitian_constructor_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.5, 0.1),
                C64::new(0.5, 0.1),
                C64::new(2.0, 0.0),
            ],
        );
        assert!(matches!(
            HermitianOperator::new(m),
            Err(DynamicsError::NotHermitian(_))
        ));
    }

    fn sigma_x(scale: f64) -> HermitianOperator {
        HermitianOperator::from_rows(&[
            vec![(0.0, 0.0), (scale, 0.0)],
            vec![(scale, 0.0), (0.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn zeno_chain_matches_closed_form_for_sigma_x() {
        // H = (E/2)σ_x from e₁: Δ = E/2 and p_n = cos^{2n}(τE/2).
        let half_e = 1.0;
        let h = sigma_x(half_e);
        let e1 = StateVector::basis(RingTag::C, 2, 0);
        let tau = 0.01;
        let run = zeno_chain(&h, &e1, tau, 100).unwrap();
        assert_abs_diff_eq!(run.dispersion, half_e, epsilon = 1e-12);
        let expected = (tau * half_e).cos().powi(200);
        // Accumulated eigendecomposition rounding over 100 steps.
        assert_abs_diff_eq!(run.final_survival(), expected, epsilon = 1e-10);
        let bound = (1.0 - (tau * half_e).powi(2)).powi(100);
        assert!(run.final_survival() >= bound - 1e-15);
        assert!(run.flagged_steps.is_empty());
    }

    #[test]
    fn zeno_bound_holds_for_random_hermitians() {
        let mut rng = stream_rng(2718, 0);
        for trial in 0..50 {
            let n = 2 + (rng.random::<u32>() % 5) as usize; // up to 6
            let a = DMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let h = HermitianOperator::new((&a + a.adjoint()).scale(0.5)).unwrap();
            let psi = sample_uniform_state(RingTag::C, n, &mut rng);
            let psi_c = to_complex(&psi).unwrap();
            let disp = h.dispersion(&psi_c);
            if disp < 1e-6 {
                continue;
            }
            let tau = 0.1 / disp * rng.random::<f64>().max(0.05);
            let steps = 1 + (rng.random::<u32>() % 1000) as usize;
            let run = zeno_chain(&h, &psi, tau, steps).unwrap();
            for (p, b) in run.survival.iter().zip(&run.bound) {
                assert!(*p <= 1.0 + 1e-9, "trial {trial}");
                assert!(*p >= *b - 1e-9, "trial {trial}: p={p} < bound={b}");
            }
            assert!(run.flagged_steps.is_empty(), "trial {trial}");
        }
    }

    #[test]
    fn zeno_survival_approaches_one_as_tau_shrinks() {
        // Fixed total time T = 1, shrinking tau: watchdog regime.
        let h = sigma_x(1.0);
        let e1 = StateVector::basis(RingTag::C, 2, 0);
        let mut last = 0.0;
        for steps in [10usize, 100, 1000] {
            let tau = 1.0 / steps as f64;
            let run = zeno_chain(&h, &e1, tau, steps).unwrap();
            let p = run.final_survival();
            assert!(p > last);
            last = p;
        }
        assert!(last > 0.99);
    }

    #[test]
    fn zeno_asymptote_close_to_bound_for_small_tau_delta() {
        let h = sigma_x(1.0);
        let e1 = StateVector::basis(RingTag::C, 2, 0);
        let tau = 0.01; // tau * dispersion = 0.01
        let steps = 1000;
        let run = zeno_chain(&h, &e1, tau, steps).unwrap();
        let bound_n = *run.bound.last().unwrap();
        assert!((bound_n / run.asymptote - 1.0).abs() < 0.01);
    }

    #[test]
    fn stochastic_zeno_tracks_the_deterministic_chain() {
        let h = sigma_x(1.0);
        let e1 = StateVector::basis(RingTag::C, 2, 0);
        let run = zeno_chain(&h, &e1, 0.05, 20).unwrap();
        let sampled = zeno_survival_sample(&h, &e1, 0.05, 20, 200_000, 4).unwrap();
        for (k, (&emp, det)) in sampled.iter().zip(&run.survival[1..]).enumerate() {
            // Binomial error at 2e5 trials stays under 0.005.
            assert!((emp - det).abs() < 0.005, "step {k}: {emp} vs {det}");
        }
    }

    #[test]
    fn zeno_rejects_bad_parameters() {
        let h = sigma_x(1.0);
        let e1 = StateVector::basis(RingTag::C, 2, 0);
        assert!(matches!(
            zeno_chain(&h, &e1, 0.0, 10),
            Err(DynamicsError::BadZenoParameters)
        ));
        let real = StateVector::from_reals(&[1.0, 0.0]);
        assert!(matches!(
            zeno_chain(&h, &real, 0.1, 10),
            Err(DynamicsError::ComplexRequired(RingTag::R))
        ));
    }

    #[test]
    fn hermitian_file_round_trip() {
        let dir = std::env::temp_dir().join("crqm_dynamics_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h.json");
        std::fs::write(
            &path,
            "{\"h\": [[[0.0,0.0],[0.5,-0.25]],[[0.5,0.25],[1.0,0.0]]]}",
        )
        .unwrap();
        let h = HermitianOperator::load(&path).unwrap();
        assert_eq!(h.dim(), 2);
        assert_abs_diff_eq!(h.matrix()[(0, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h.matrix()[(0, 1)].im, -0.25, epsilon = 1e-15);
    }
}
