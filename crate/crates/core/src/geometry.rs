//! Sphere machinery behind the Born rule: the θ-parametrization
//! p = cos²(θ/2), the spherical midpoint identity, antipode/midpoint
//! adjunction building properly mapped circular sets, the stereographic
//! correspondence with the complex projective line, normal-line
//! factorization, change-of-basis unitarity, and rank detection.

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::algebra::{
    born_probability, inner_product, random_orthonormal_basis, AlgebraError, Quaternion, RingTag,
    StateVector,
};
use crate::ptable::{max_clique_size, PTable, PTableError};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("probability {0} outside [0,1]")]
    BadProbability(f64),
    #[error("initial separation must lie strictly between 0 and pi, got {0}")]
    DegenerateSeparation(f64),
    #[error("adjunction depth must be at least 1")]
    BadDepth,
    #[error("vector of dimension {0} is not a sphere point (need >= 2)")]
    BadDimension(usize),
    #[error("|v| = {0}, not a unit vector")]
    NotUnit(f64),
    #[error("sphere points of dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("no equatorial pairs at this tolerance")]
    NoEquatorialPairs,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Table(#[from] PTableError),
}

/// Point on a unit sphere of any dimension (stored as the unit vector in
/// the ambient space).
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::BadDimension(coords.len()));
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(GeometryError::NotUnit(norm));
        }
        Ok(SpherePoint(coords))
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn from_direction(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::BadDimension(coords.len()));
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(GeometryError::NotUnit(0.0));
        }
        Ok(SpherePoint(coords.into_iter().map(|x| x / norm).collect()))
    }

    /// Uniform point via a normalized Gaussian draw.
    pub fn sample<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        assert!(dim >= 2);
        loop {
            let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(point) = SpherePoint::from_direction(coords) {
                return point;
            }
        }
    }

    /// Point on the xy great circle of the 2-sphere at the given angle.
    pub fn on_equator(angle: f64) -> Self {
        SpherePoint(vec![angle.cos(), angle.sin(), 0.0])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Self) -> Result<f64, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// Great-circle angle to another point, in [0, π].
    pub fn arc(&self, other: &Self) -> Result<f64, GeometryError> {
        Ok(self.dot(other)?.clamp(-1.0, 1.0).acos())
    }

    pub fn antipode(&self) -> Self {
        SpherePoint(self.0.iter().map(|x| -x).collect())
    }
}

/// θ = 2·arccos(√p), the inverse of p = cos²(θ/2).
pub fn theta_from_p(p: f64) -> Result<f64, GeometryError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(GeometryError::BadProbability(p));
    }
    Ok(2.0 * p.clamp(0.0, 1.0).sqrt().acos())
}

/// Residual of the exact midpoint identity
/// cos(AZ) + cos(BZ) = 2 cos(½AB) cos(CZ) with C the arc midpoint of A, B.
/// For antipodal A, B both sides vanish and the degenerate residual
/// |cos(AZ) + cos(BZ)| is returned.
pub fn spherical_midpoint_check(
    a: &SpherePoint,
    b: &SpherePoint,
    z: &SpherePoint,
) -> Result<f64, GeometryError> {
    let lhs = a.dot(z)? + b.dot(z)?;
    let chord: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect();
    let chord_norm = chord.iter().map(|x| x * x).sum::<f64>().sqrt();
    // cos(½AB) = |A+B|/2; zero exactly when A, B are antipodes.
    let cos_half = chord_norm / 2.0;
    if cos_half < 1e-12 {
        return Ok(lhs.abs());
    }
    let midpoint = SpherePoint::from_direction(chord)?;
    Ok((lhs - 2.0 * cos_half * midpoint.dot(z)?).abs())
}

/// Correspondence between table elements and points of a great circle,
/// generated by antipode and midpoint adjunction. Angles are produced in
/// closed form (θ₀ offsets plus multiples of π/2ᵏ), never by accumulated
/// averaging, so deep constructions stay exact.
#[derive(Debug, Clone)]
pub struct ProperMapping {
    labels: Vec<String>,
    angles: Vec<f64>,
}

impl ProperMapping {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Sphere images on the xy great circle of the 2-sphere.
    pub fn points(&self) -> Vec<SpherePoint> {
        self.angles.iter().map(|&a| SpherePoint::on_equator(a)).collect()
    }

    /// The abstract p-table p(u,v) = cos²(½(angle(u) − angle(v))).
    pub fn to_ptable(&self) -> PTable {
        let rows: Vec<Vec<f64>> = self
            .angles
            .iter()
            .map(|&ai| {
                self.angles
                    .iter()
                    .map(|&aj| {
                        let c = (0.5 * (ai - aj)).cos();
                        (c * c).clamp(0.0, 1.0)
                    })
                    .collect()
            })
            .collect();
        PTable::new(self.labels.clone(), rows).expect("cos^2 entries are probabilities")
    }

    /// Worst deviation between the table angles and the sphere-image
    /// arcs: max |p(u,v) − cos²(½ arc(U,V))|.
    pub fn proper_residual(&self) -> f64 {
        let table = self.to_ptable();
        let points = self.points();
        let mut worst: f64 = 0.0;
        for (i, u) in points.iter().enumerate() {
            for (j, v) in points.iter().enumerate() {
                let arc = u.arc(v).expect("equal dims");
                let expected = 0.5 * (1.0 + arc.cos());
                worst = worst.max((table.get(i, j) - expected).abs());
            }
        }
        worst
    }

    /// CSV rows `label,angle,x,y,z` with full-precision values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,angle,x,y,z\n");
        for ((label, &angle), point) in
            self.labels.iter().zip(&self.angles).zip(self.points())
        {
            let c = point.coords();
            out.push_str(&format!("{label},{angle},{},{},{}\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// Builds a circular properly mapped set by antipode and midpoint
/// adjunction: seeds at 0 and θ₀ with their antipodes, then k midpoint
/// rounds refining the midpoint coset to spacing π/2ᵏ. The point set
/// includes separations at every multiple of π/2ᵏ.
pub fn build_circle_by_adjunction(
    theta0: f64,
    depth: u32,
) -> Result<ProperMapping, GeometryError> {
    if !(theta0 > 1e-12 && theta0 < std::f64::consts::PI - 1e-12) {
        return Err(GeometryError::DegenerateSeparation(theta0));
    }
    if depth < 1 {
        return Err(GeometryError::BadDepth);
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut labels: Vec<String> = Vec::new();
    let mut angles: Vec<f64> = Vec::new();
    let push = |label: String, angle: f64, labels: &mut Vec<String>, angles: &mut Vec<f64>| {
        let wrapped = angle.rem_euclid(tau);
        for &existing in angles.iter() {
            let gap = (existing - wrapped).abs();
            if gap < 1e-12 || (tau - gap) < 1e-12 {
                return;
            }
        }
        labels.push(label);
        angles.push(wrapped);
    };

    // Seeds a, b and their adjoined antipodes.
    push("a".into(), 0.0, &mut labels, &mut angles);
    push("b".into(), theta0, &mut labels, &mut angles);
    push("a'".into(), std::f64::consts::PI, &mut labels, &mut angles);
    push("b'".into(), theta0 + std::f64::consts::PI, &mut labels, &mut angles);

    // Midpoint rounds: the first yields the quarter coset e₁ = c(a,b),
    // e₂ = c(a,b′) and antipodes at spacing π/2; round k halves to π/2ᵏ.
    let spacing = std::f64::consts::PI / f64::from(1u32 << depth);
    let count = 1u64 << (depth + 1);
    for m in 0..count {
        push(
            format!("c{m}"),
            0.5 * theta0 + m as f64 * spacing,
            &mut labels,
            &mut angles,
        );
    }

    // Sort by angle for stable, readable output.
    let mut order: Vec<usize> = (0..angles.len()).collect();
    order.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]));
    Ok(ProperMapping {
        labels: order.iter().map(|&i| labels[i].clone()).collect(),
        angles: order.iter().map(|&i| angles[i]).collect(),
    })
}

/// Number of equatorial partners (p within eps of ½) of each element.
pub fn equator_partner_counts(t: &PTable, eps: f64) -> Vec<usize> {
    (0..t.len())
        .map(|i| {
            (0..t.len())
                .filter(|&j| j != i && (t.get(i, j) - 0.5).abs() < eps)
                .count()
        })
        .collect()
}

/// Rank of a qubit-like table: one less than the largest mutually
/// equatorial set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rank(usize);

impl Rank {
    pub fn value(self) -> usize {
        self.0
    }
}

/// Detects the rank as the size of the largest clique of the mutual
/// equatoriality graph (|p − ½| < eps) minus one.
///
/// Any rank can come back; only 1, 2, and 4 are backed by a coordinate
/// ring (ℝ, ℂ, ℍ).
pub fn rank_detect(t: &PTable, eps: f64) -> Result<Rank, GeometryError> {
    let size = max_clique_size(t.len(), |i, j| {
        (t.get(i, j) - 0.5).abs() < eps && (t.get(j, i) - 0.5).abs() < eps
    })?;
    if size < 2 {
        return Err(GeometryError::NoEquatorialPairs);
    }
    Ok(Rank(size - 1))
}

/// The complex-projective-line representative of the sphere point with
/// zenith θ and azimuth φ: (cos ½θ, e^{iφ} sin ½θ).
pub fn stereographic(theta: f64, phi: f64) -> StateVector {
    let half = 0.5 * theta;
    StateVector::from_complexes(&[
        (half.cos(), 0.0),
        (phi.cos() * half.sin(), phi.sin() * half.sin()),
    ])
}

/// Embeds (θ, φ) as a unit vector of the 2-sphere.
pub fn sphere_point_from_zenith_azimuth(theta: f64, phi: f64) -> SpherePoint {
    SpherePoint::from_direction(vec![
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ])
    .expect("nonzero for all angles")
}

/// Residual of |x̂₁*·x̂₂|² = ½(1 + ξ₁·ξ₂) = cos²(½ arc) between the
/// projective representatives and the embedded sphere points.
pub fn born_vs_arc_check(pt1: (f64, f64), pt2: (f64, f64)) -> f64 {
    let born = born_probability(&stereographic(pt1.0, pt1.1), &stereographic(pt2.0, pt2.1))
        .expect("stereographic states are nonzero");
    let dot = sphere_point_from_zenith_azimuth(pt1.0, pt1.1)
        .dot(&sphere_point_from_zenith_azimuth(pt2.0, pt2.1))
        .expect("both on the 2-sphere");
    (born - 0.5 * (1.0 + dot)).abs()
}

/// Quaternionic analogue of [`stereographic`] mapping the 4-sphere to the
/// quaternionic projective line; an extension beyond the complex case,
/// labeled as such in reports. The point (cos θ, sin θ·n) with n a unit
/// quaternion maps to (cos ½θ, n sin ½θ).
pub fn stereographic_quaternionic(xi: &SpherePoint) -> Result<StateVector, GeometryError> {
    if xi.dim() != 5 {
        return Err(GeometryError::BadDimension(xi.dim()));
    }
    let c = xi.coords();
    let cos_theta = c[0].clamp(-1.0, 1.0);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let n = if sin_theta > 1e-15 {
        Quaternion::new(
            c[1] / sin_theta,
            c[2] / sin_theta,
            c[3] / sin_theta,
            c[4] / sin_theta,
        )
    } else {
        Quaternion::real(1.0)
    };
    let half = 0.5 * cos_theta.acos();
    Ok(StateVector::new(
        RingTag::H,
        vec![Quaternion::real(half.cos()), n.scale(half.sin())],
    )?)
}

/// Residual of the Born-vs-arc law for two points of the 4-sphere under
/// the quaternionic stereographic correspondence.
pub fn born_vs_arc_check_quaternionic(
    xi1: &SpherePoint,
    xi2: &SpherePoint,
) -> Result<f64, GeometryError> {
    let born = born_probability(
        &stereographic_quaternionic(xi1)?,
        &stereographic_quaternionic(xi2)?,
    )?;
    Ok((born - 0.5 * (1.0 + xi1.dot(xi2)?)).abs())
}

/// Residual of the normal-line factorization a(z) = a(c)·c(z) for
/// a = αe₁ + βe₂ on one line and z = γe₁ + δe₃ on a normal line through
/// the intersection c = e₁, over ℂ³.
pub fn normal_factorization_check(
    alpha: (f64, f64),
    beta: (f64, f64),
    gamma: (f64, f64),
    delta: (f64, f64),
) -> Result<f64, GeometryError> {
    let zero = (0.0, 0.0);
    let a = StateVector::from_complexes(&[alpha, beta, zero]);
    let z = StateVector::from_complexes(&[gamma, zero, delta]);
    let c = StateVector::basis(RingTag::C, 3, 0);
    let lhs = born_probability(&a, &z)?;
    let rhs = born_probability(&a, &c)? * born_probability(&c, &z)?;
    Ok((lhs - rhs).abs())
}

/// Draws two random orthonormal bases of ℂ^N, forms M with entries
/// â_k*·b̂_j, and returns the worst entry of |MM† − I|.
pub fn basis_unitarity_check(n: usize, seed: u64) -> f64 {
    let mut rng = crate::mc::stream_rng(seed, 0);
    let a = random_orthonormal_basis(RingTag::C, n, &mut rng);
    let b = random_orthonormal_basis(RingTag::C, n, &mut rng);
    basis_overlap_unitarity_residual(&a, &b)
}

/// Worst entry of |MM† − I| for M_kj = ⟨a_k, b_j⟩ over ℂ.
pub fn basis_overlap_unitarity_residual(a: &[StateVector], b: &[StateVector]) -> f64 {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |k, j| {
        let ip = inner_product(&a[k], &b[j]).expect("same ring and dim");
        Complex::new(ip.w, ip.x)
    });
    let gram = &m * m.adjoint();
    let identity = DMatrix::<Complex<f64>>::identity(n, n);
    (gram - identity).map(|z| z.norm()).max()
}
