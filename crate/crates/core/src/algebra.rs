//! Scalar arithmetic over the three coordinate rings (real, complex,
//! quaternionic), state vectors, inner products, Born probabilities, and
//! uniform sampling of pure states.
//!
//! A single [`Quaternion`] scalar backs all three rings: real scalars use
//! only `w`, complex scalars use `w + xi`, quaternions use all four
//! components. Because ℝ ⊂ ℂ ⊂ ℍ are closed under the Hamilton product,
//! every operation stays inside the tagged ring automatically.
//!
//! Conventions: projective equivalence multiplies vectors by scalars on the
//! RIGHT; the inner product conjugates its LEFT argument. Together these
//! make |⟨u, v⟩|² well defined on the quaternionic projective line.

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from vector-space operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(RingTag, RingTag),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("component {index} has parts outside {ring:?}")]
    NotInRing { ring: RingTag, index: usize },
    #[error("dimension must be at least 1")]
    EmptyVector,
}

/// Coordinate ring of a state space: real, complex, or quaternionic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    R,
    C,
    H,
}

impl RingTag {
    /// Real dimension of the ring: 1, 2, or 4.
    pub fn real_dim(self) -> usize {
        match self {
            RingTag::R => 1,
            RingTag::C => 2,
            RingTag::H => 4,
        }
    }

    /// Rank of the qubit model over this ring (equals the real dimension).
    pub fn rank(self) -> usize {
        self.real_dim()
    }

    pub const ALL: [RingTag; 3] = [RingTag::R, RingTag::C, RingTag::H];
}

impl std::fmt::Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingTag::R => write!(f, "R"),
            RingTag::C => write!(f, "C"),
            RingTag::H => write!(f, "H"),
        }
    }
}

/// Quaternion over the units 1, i, j, k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Multiplicative inverse; None for (numerically) zero.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return None;
        }
        Some(self.conj().scale(1.0 / n))
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// True if all components beyond those allowed by `ring` vanish.
    pub fn lies_in(self, ring: RingTag) -> bool {
        match ring {
            RingTag::R => self.x == 0.0 && self.y == 0.0 && self.z == 0.0,
            RingTag::C => self.y == 0.0 && self.z == 0.0,
            RingTag::H => true,
        }
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    /// Hamilton product; non-commutative in general.
    fn mul(self, rhs: Self) -> Self {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        let (e, f, g, h) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Quaternion::new(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )
    }
}

/// Hamilton product of two quaternions.
pub fn quaternion_multiply(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// Coordinate vector over ℝ/ℂ/ℍ representing a pure state up to a right
/// scalar factor.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    ring: RingTag,
    components: Vec<Quaternion>,
}

impl StateVector {
    /// Builds a vector, checking every component lies in the tagged ring.
    pub fn new(ring: RingTag, components: Vec<Quaternion>) -> Result<Self, AlgebraError> {
        if components.is_empty() {
            return Err(AlgebraError::EmptyVector);
        }
        for (index, c) in components.iter().enumerate() {
            if !c.lies_in(ring) {
                return Err(AlgebraError::NotInRing { ring, index });
            }
        }
        Ok(StateVector { ring, components })
    }

    /// Real vector from f64 components.
    pub fn from_reals(components: &[f64]) -> Self {
        StateVector {
            ring: RingTag::R,
            components: components.iter().map(|&w| Quaternion::real(w)).collect(),
        }
    }

    /// Complex vector from (re, im) pairs.
    pub fn from_complexes(components: &[(f64, f64)]) -> Self {
        StateVector {
            ring: RingTag::C,
            components: components
                .iter()
                .map(|&(re, im)| Quaternion::complex(re, im))
                .collect(),
        }
    }

    /// Standard basis vector e_k of the given ring and dimension.
    pub fn basis(ring: RingTag, dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut components = vec![ZERO; dim];
        components[k] = ONE;
        StateVector { ring, components }
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Quaternion] {
        &self.components
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit-norm representative of the same projective point.
    pub fn normalized(&self) -> Result<Self, AlgebraError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(AlgebraError::ZeroVector);
        }
        Ok(StateVector {
            ring: self.ring,
            components: self.components.iter().map(|c| c.scale(1.0 / n)).collect(),
        })
    }

    /// Right scalar multiple v·s (projectively the same point for s ≠ 0).
    pub fn scaled_right(&self, s: Quaternion) -> Self {
        StateVector {
            ring: self.ring,
            components: self.components.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        check_compatible(self, other)?;
        Ok(StateVector {
            ring: self.ring,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }
}

fn check_compatible(u: &StateVector, v: &StateVector) -> Result<(), AlgebraError> {
    if u.ring != v.ring {
        return Err(AlgebraError::RingMismatch(u.ring, v.ring));
    }
    if u.dim() != v.dim() {
        return Err(AlgebraError::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(())
}

/// Inner product Σᵢ conj(uᵢ)·vᵢ, conjugating the left argument.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Result<Quaternion, AlgebraError> {
    check_compatible(u, v)?;
    let mut acc = ZERO;
    for (&a, &b) in u.components.iter().zip(&v.components) {
        acc = acc + a.conj() * b;
    }
    Ok(acc)
}

/// Born probability |⟨u, v⟩|² / (|u|²|v|²).
///
/// Symmetric in its arguments, invariant under right scalar multiplication
/// of either, equal to 1 exactly when both represent the same projective
/// point.
pub fn born_probability(u: &StateVector, v: &StateVector) -> Result<f64, AlgebraError> {
    let nu = u.norm_sq();
    let nv = v.norm_sq();
    if nu == 0.0 || nv == 0.0 {
        return Err(AlgebraError::ZeroVector);
    }
    let ip = inner_product(u, v)?;
    Ok(ip.norm_sq() / (nu * nv))
}

/// Draws a pure state from the unique rotation-invariant measure: each of
/// the r·N real coordinates standard normal, then normalized.
pub fn sample_uniform_state<R: Rng + ?Sized>(ring: RingTag, dim: usize, rng: &mut R) -> StateVector {
    assert!(dim >= 1);
    loop {
        let components: Vec<Quaternion> = (0..dim)
            .map(|_| {
                let mut q = ZERO;
                q.w = rng.sample(StandardNormal);
                if ring.real_dim() >= 2 {
                    q.x = rng.sample(StandardNormal);
                }
                if ring.real_dim() == 4 {
                    q.y = rng.sample(StandardNormal);
                    q.z = rng.sample(StandardNormal);
                }
                q
            })
            .collect();
        let v = StateVector { ring, components };
        // Norm is zero with probability zero; retry guards degenerate draws.
        if let Ok(unit) = v.normalized() {
            return unit;
        }
    }
}

/// Unique orthogonal partner (the antipode) of a nonzero vector in a
/// two-dimensional space, unit-normalized.
pub fn orthogonal_complement(v: &StateVector) -> Result<StateVector, AlgebraError> {
    if v.dim() != 2 {
        return Err(AlgebraError::DimensionMismatch(v.dim(), 2));
    }
    let c0 = v.components[0];
    let c1 = v.components[1];
    // With |c| the larger component this is orthogonal in all three rings:
    // ⟨v, w⟩ = conj(c0)(−c0·conj(c1)) + conj(c1)|c0|² = 0 because |c0|² is
    // real and commutes.
    let w = if c0.norm_sq() >= c1.norm_sq() {
        vec![-(c0 * c1.conj()), Quaternion::real(c0.norm_sq())]
    } else {
        vec![Quaternion::real(c1.norm_sq()), -(c1 * c0.conj())]
    };
    StateVector::new(v.ring, w)?.normalized()
}

/// Random orthonormal basis by Gram–Schmidt on rotation-invariant draws.
///
/// Re-orthogonalizes once, which keeps residuals at machine precision for
/// the desk-scale dimensions used here.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(
    ring: RingTag,
    dim: usize,
    rng: &mut R,
) -> Vec<StateVector> {
    let mut basis: Vec<StateVector> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = sample_uniform_state(ring, dim, rng);
        for _ in 0..2 {
            for u in &basis {
                // v ← v − u·⟨u, v⟩ (coefficient on the right).
                let coeff = inner_product(u, &v).expect("same ring and dim");
                let proj = u.scaled_right(coeff);
                v = StateVector {
                    ring,
                    components: v
                        .components
                        .iter()
                        .zip(&proj.components)
                        .map(|(&a, &b)| a - b)
                        .collect(),
                };
            }
        }
        // Reject near-degenerate draws instead of amplifying noise.
        if v.norm() > 1e-6 {
            basis.push(v.normalized().unwrap());
        }
    }
    basis
}
