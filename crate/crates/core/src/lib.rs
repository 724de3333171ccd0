//! Simulator and verification suite for single-qubit teleportation through
//! three-particle entangled resources.
//!
//! The crate executes the two teleportation protocols as explicit
//! density-operator computations and cross-checks every probability and
//! fidelity against independently coded closed forms:
//!
//! * `P0`: the sender Bell-measures the input qubit together with her half of
//!   a GHZ or W resource, the accomplice measures her qubit in a tunable
//!   one-parameter basis, and the receiver applies an outcome-conditioned
//!   Pauli correction.
//! * `P1`: the accomplice skips her measurement and instead acts as a second
//!   receiver; the W-resource variant generalizes to N parties.
//!
//! White-noise admixtures of the resource (parameterized by a visibility in
//! `[0, 1]`) and sphere-averaged fidelities (Gauss-Legendre quadrature or
//! seeded Monte Carlo) round out the toolbox. The `verify` module bundles the
//! whole battery of invariant and closed-form checks behind named results.

pub mod analysis;
pub mod error;
pub mod measurement;
pub mod protocols;
pub mod qmat;
pub mod states;
pub mod statevector;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, DensityOperator};
pub use states::{BlochAngles, MeasurementAngle, Pauli, Visibility};
pub use statevector::StateVector;
