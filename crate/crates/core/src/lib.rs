//! Numerical verification toolkit for the p-table axioms of quantum
//! mechanics: axiom validators, skeleton and hidden-variable simulators,
//! information entropy over real/complex/quaternionic qubits, measurement
//! collapse dynamics, and the sphere geometry behind the Born rule.

pub mod algebra;
pub mod dynamics;
pub mod entropy;
pub mod geometry;
pub mod mc;
pub mod models;
pub mod numeric;
pub mod ptable;
pub mod report;

pub use algebra::{Quaternion, RingTag, StateVector};
pub use ptable::{Frame, PTable};
pub use report::{VerificationReport, Witness};
