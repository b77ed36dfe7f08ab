//! Generators for the concrete models: skeleton tables, Born-rule sampled
//! tables over ℝ/ℂ/ℍ, and the hidden-variable simulator that reproduces
//! the skeletons.
//!
//! Skeleton tables are generated analytically, never by simulation, so the
//! simulator always has an exact oracle to converge against.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{born_probability, sample_uniform_state, AlgebraError, RingTag, StateVector};
use crate::mc;
use crate::ptable::PTable;

/// Rank-R skeleton: 2(R+1) elements x_1..x_{R+1}, x_1'..x_{R+1}' with
/// p(x_j, x_j') = 0 and p = 1/2 across distinct coordinates. Elements are
/// interleaved (x_1, x_1', x_2, x_2', ...).
pub fn skeleton_table(rank: usize) -> PTable {
    assert!(rank >= 1);
    let m = 2 * (rank + 1);
    let mut labels = Vec::with_capacity(m);
    for j in 1..=(rank + 1) {
        labels.push(format!("x{j}"));
        labels.push(format!("x{j}'"));
    }
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if i / 2 == j / 2 {
                        0.0
                    } else {
                        0.5
                    }
                })
                .collect()
        })
        .collect();
    PTable::new(labels, rows).expect("skeleton table is valid")
}

/// Born-probability table over a family of states; the returned table
/// shares the slice order.
pub fn born_table_from_states(
    labels: Vec<String>,
    states: &[StateVector],
) -> Result<PTable, AlgebraError> {
    let mut rows = Vec::with_capacity(states.len());
    for a in states {
        let mut row = Vec::with_capacity(states.len());
        for b in states {
            row.push(born_probability(a, b)?.clamp(0.0, 1.0));
        }
        rows.push(row);
    }
    Ok(PTable::new(labels, rows).expect("born table is valid"))
}

/// Table over the standard basis of ring^dim plus `count` uniformly
/// sampled states, with the underlying vectors returned for oracle
/// checks.
pub fn crqm_table(
    ring: RingTag,
    dim: usize,
    count: usize,
    seed: u64,
) -> (PTable, Vec<StateVector>) {
    let mut rng = mc::stream_rng(seed, 0);
    let mut labels = Vec::with_capacity(dim + count);
    let mut states = Vec::with_capacity(dim + count);
    for k in 0..dim {
        labels.push(format!("e{}", k + 1));
        states.push(StateVector::basis(ring, dim, k));
    }
    for k in 0..count {
        labels.push(format!("s{}", k + 1));
        states.push(sample_uniform_state(ring, dim, &mut rng));
    }
    let table = born_table_from_states(labels, &states).expect("uniform family");
    (table, states)
}

/// The sign-of-coordinate hidden-variable model behind the rank-R
/// skeleton: a particle with hidden state ξ on the unit R-sphere passes
/// filter x_j when ξ_j ≥ 0 and x_j' when ξ_j < 0.
#[derive(Debug, Clone, Copy)]
pub struct HiddenVariableModel {
    rank: usize,
}

impl HiddenVariableModel {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1);
        HiddenVariableModel { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn element_count(&self) -> usize {
        2 * (self.rank + 1)
    }

    /// Uniform point on the R-sphere (normalized Gaussian draw).
    pub fn sample_xi<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let xi: Vec<f64> = (0..=self.rank).map(|_| rng.sample(StandardNormal)).collect();
            let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                return xi.iter().map(|x| x / norm).collect();
            }
        }
    }

    /// Filter acceptance: element 2j is the positive filter for
    /// coordinate j, element 2j+1 the negative one. The measure-zero
    /// boundary ξ_j = 0 goes to the positive filter.
    pub fn passes(&self, element: usize, xi: &[f64]) -> bool {
        let coord = element / 2;
        if element % 2 == 0 {
            xi[coord] >= 0.0
        } else {
            xi[coord] < 0.0
        }
    }
}

fn hv_stream_worker(
    model: HiddenVariableModel,
) -> impl Fn(u64, &mut ChaCha8Rng) -> Vec<u64> + Sync {
    let rank = model.rank();
    let m = model.element_count();
    move |n, rng| {
        let mut joint = vec![0u64; m * m];
        let mut passing = Vec::with_capacity(rank + 1);
        for _ in 0..n {
            let xi = model.sample_xi(rng);
            passing.clear();
            // Exactly one filter per coordinate passes.
            for (coord, &x) in xi.iter().enumerate() {
                passing.push(2 * coord + usize::from(x < 0.0));
            }
            for &a in &passing {
                for &b in &passing {
                    joint[a * m + b] += 1;
                }
            }
        }
        joint
    }
}

fn hv_table_from_counts(rank: usize, streams: Vec<Vec<u64>>) -> PTable {
    let m = 2 * (rank + 1);
    let mut joint = vec![0u64; m * m];
    for stream in streams {
        for (acc, v) in joint.iter_mut().zip(stream) {
            *acc += v;
        }
    }
    let labels = skeleton_table(rank).labels().to_vec();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        let n_j = joint[j * m + j];
                        if n_j == 0 {
                            0.0
                        } else {
                            joint[i * m + j] as f64 / n_j as f64
                        }
                    }
                })
                .collect()
        })
        .collect();
    PTable::new(labels, rows).expect("conditional frequencies are in [0,1]")
}

/// Monte-Carlo estimate of the skeleton's conditional pass probabilities
/// p(a,b) = μ(pass a ∧ pass b) / μ(pass b).
///
/// Work splits across RNG sub-streams (see [`crate::mc`]); counts merge
/// exactly, so the result for a seed is identical in sequential and
/// parallel builds. Converges to [`skeleton_table`].
pub fn hv_skeleton_simulate(rank: usize, samples: u64, seed: u64) -> PTable {
    assert!(samples >= 1);
    let model = HiddenVariableModel::new(rank);
    hv_table_from_counts(rank, mc::run_streams(samples, seed, hv_stream_worker(model)))
}

/// Sequential reference of [`hv_skeleton_simulate`]: same sub-streams on
/// the calling thread, byte-identical output.
pub fn hv_skeleton_simulate_seq(rank: usize, samples: u64, seed: u64) -> PTable {
    assert!(samples >= 1);
    let model = HiddenVariableModel::new(rank);
    hv_table_from_counts(
        rank,
        mc::run_streams_seq(samples, seed, hv_stream_worker(model)),
    )
}

/// Exact overlap measure of two coordinate half-spheres: 1 for the same
/// filter, 0 for its antipode, 1/2 across distinct coordinates. This is
/// the analytic limit of [`hv_skeleton_simulate`] and feeds the
/// hidden-variable distance law d = 1 − p without sampling.
pub fn hv_exact_overlap(rank: usize, i: usize, j: usize) -> f64 {
    let m = 2 * (rank + 1);
    assert!(i < m && j < m);
    if i == j {
        1.0
    } else if i / 2 == j / 2 {
        0.0
    } else {
        0.5
    }
}

/// The exact hidden-variable table assembled from [`hv_exact_overlap`].
pub fn hv_exact_table(rank: usize) -> PTable {
    let m = 2 * (rank + 1);
    let labels = skeleton_table(rank).labels().to_vec();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| hv_exact_overlap(rank, i, j)).collect())
        .collect();
    PTable::new(labels, rows).expect("exact overlaps are probabilities")
}
