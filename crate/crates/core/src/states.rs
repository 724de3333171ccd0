//! Validated parameter types and constructors for the states and projector
//! families used by the teleportation protocols.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::ProjectorSet;
use crate::qmat::{ComplexMatrix, DensityOperator};
use crate::statevector::StateVector;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Polar and azimuthal angles of a pure qubit state on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Requires `0 <= theta <= pi` and `0 <= phi < 2*pi`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta {theta} outside [0, pi]")));
        }
        if !phi.is_finite() || !(0.0..TAU).contains(&phi) {
            return Err(Error::Domain(format!("phi {phi} outside [0, 2*pi)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// White-noise visibility: mixing weight of the intended resource against
/// the maximally mixed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility(f64);

impl Visibility {
    /// Requires `0 <= w <= 1`.
    pub fn new(w: f64) -> Result<Self> {
        if !w.is_finite() || !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("visibility {w} outside [0, 1]")));
        }
        Ok(Self(w))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Angle of the accomplice's one-parameter measurement basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngle(f64);

impl MeasurementAngle {
    /// Requires `0 <= nu <= pi/2`.
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || !(0.0..=FRAC_PI_2).contains(&nu) {
            return Err(Error::Domain(format!("nu {nu} outside [0, pi/2]")));
        }
        Ok(Self(nu))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The identity and the three Pauli matrices, the receiver's correction
/// alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// The standard 2x2 matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let (a, b, c, d) = match self {
            Pauli::I => (re(1.0), re(0.0), re(0.0), re(1.0)),
            Pauli::X => (re(0.0), re(1.0), re(1.0), re(0.0)),
            Pauli::Y => (re(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), re(0.0)),
            Pauli::Z => (re(1.0), re(0.0), re(0.0), re(-1.0)),
        };
        ComplexMatrix::new(2, 2, vec![a, b, c, d]).expect("finite literals")
    }
}

/// The standard 2x2 matrix for a correction label.
pub fn pauli(which: Pauli) -> ComplexMatrix {
    which.matrix()
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" => Ok(Pauli::I),
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::Config(format!("unknown correction label {other:?}"))),
        }
    }
}

/// Pure input qubit `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>` on label 1.
pub fn input_vector(a: BlochAngles) -> StateVector {
    let half = a.theta() / 2.0;
    let amp0 = re(half.cos());
    let amp1 = Complex64::from_polar(half.sin(), a.phi());
    StateVector::new(vec![amp0, amp1], vec![1]).expect("two finite amplitudes")
}

/// Density operator of the input qubit on label 1.
pub fn input_state(a: BlochAngles) -> DensityOperator {
    input_vector(a).to_density().expect("normalized by construction")
}

/// `(|000> + |111>)/sqrt(2)` on labels `[2, 3, 4]`.
pub fn ghz_vector() -> StateVector {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    let mut amps = vec![re(0.0); 8];
    amps[0] = s;
    amps[7] = s;
    StateVector::new(amps, vec![2, 3, 4]).expect("finite amplitudes")
}

/// GHZ resource as a density operator on labels `[2, 3, 4]`.
pub fn ghz_state() -> DensityOperator {
    ghz_vector().to_density().expect("normalized by construction")
}

/// Equal superposition of the `n` single-excitation basis states, labels
/// `[1..=n]`. Requires `n >= 2`.
pub fn w_vector(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::Domain(format!("a W state needs at least 2 qubits, got {n}")));
    }
    if n > 24 {
        return Err(Error::Domain(format!("W state size {n} exceeds the dense-storage cap of 24")));
    }
    let dim = 1usize << n;
    let amp = re(1.0 / (n as f64).sqrt());
    let mut amps = vec![re(0.0); dim];
    for q in 0..n {
        amps[1usize << q] = amp;
    }
    StateVector::new(amps, (1..=n as u32).collect())
}

/// W resource as a density operator on labels `[1..=n]`. Requires
/// `2 <= n <= 12` (the matrix is dense).
pub fn w_state(n: usize) -> Result<DensityOperator> {
    if n > 12 {
        return Err(Error::Domain(format!(
            "dense density operator for a {n}-qubit W state is out of scope; use the vector form"
        )));
    }
    w_vector(n)?.to_density()
}

/// The four Bell projectors on two qubits, outcomes 1..4 in the order
/// Phi+, Phi-, Psi+, Psi-.
pub fn bell_projectors() -> ProjectorSet {
    let vecs = bell_vectors();
    let projectors = vecs
        .iter()
        .map(|v| {
            ComplexMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj())
        })
        .collect();
    ProjectorSet::new(projectors, 2).expect("Bell projectors are complete and orthogonal")
}

/// Amplitudes of the four Bell states in the computational basis, outcome
/// order Phi+, Phi-, Psi+, Psi-.
pub(crate) fn bell_vectors() -> [[Complex64; 4]; 4] {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    let z = re(0.0);
    [
        [s, z, z, s],
        [s, z, z, -s],
        [z, s, s, z],
        [z, s, -s, z],
    ]
}

/// The two projectors of the tunable one-qubit basis, outcomes 1..2:
/// `|mu+> = sin(nu)|0> + cos(nu)|1>`, `|mu-> = cos(nu)|0> - sin(nu)|1>`.
pub fn nu_projectors(m: MeasurementAngle) -> ProjectorSet {
    let vecs = nu_vectors(m);
    let projectors = vecs
        .iter()
        .map(|v| ComplexMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj()))
        .collect();
    ProjectorSet::new(projectors, 1).expect("basis projectors are complete and orthogonal")
}

/// Amplitudes of the tunable basis states, outcome order mu+, mu-.
pub(crate) fn nu_vectors(m: MeasurementAngle) -> [[Complex64; 2]; 2] {
    let nu = m.value();
    [
        [re(nu.sin()), re(nu.cos())],
        [re(nu.cos()), re(-nu.sin())],
    ]
}

/// White-noise admixture `w*chi + (1-w)*I/dim` of a 3-qubit resource.
pub fn noisy_state(chi: &DensityOperator, v: Visibility) -> Result<DensityOperator> {
    if chi.num_qubits() != 3 {
        return Err(Error::Shape(format!(
            "noise model is defined for 3-qubit resources, got {} qubits",
            chi.num_qubits()
        )));
    }
    let w = v.value();
    let dim = chi.dim();
    let mixed = ComplexMatrix::identity(dim).scale(re((1.0 - w) / dim as f64));
    let matrix = chi.matrix().scale(re(w)).add(&mixed);
    DensityOperator::new(matrix, chi.labels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angle_domains_enforced() {
        assert!(BlochAngles::new(-0.1, 0.0).is_err());
        assert!(BlochAngles::new(PI + 0.1, 0.0).is_err());
        assert!(BlochAngles::new(1.0, TAU).is_err());
        assert!(BlochAngles::new(PI, 0.0).is_ok());
        assert!(Visibility::new(1.0 + 1e-9).is_err());
        assert!(Visibility::new(0.0).is_ok());
        assert!(MeasurementAngle::new(FRAC_PI_2 + 1e-9).is_err());
        assert!(MeasurementAngle::new(FRAC_PI_2).is_ok());
        assert!(BlochAngles::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn input_state_poles_and_equator() {
        let zero = input_state(BlochAngles::new(0.0, 1.23).unwrap());
        assert_abs_diff_eq!(zero.matrix().get(0, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero.matrix().get(1, 1).re, 0.0, epsilon = 1e-15);

        let one = input_state(BlochAngles::new(PI, 0.0).unwrap());
        assert_abs_diff_eq!(one.matrix().get(1, 1).re, 1.0, epsilon = 1e-15);

        // theta = pi/2, phi = pi/2 gives (|0> + i|1>)/sqrt(2).
        let eq = input_state(BlochAngles::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_abs_diff_eq!(eq.matrix().get(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.matrix().get(0, 1).im, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.matrix().get(1, 0).im, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.matrix().get(1, 1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eq.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_entries_and_reduction() {
        let g = ghz_state();
        assert_eq!(g.labels(), &[2, 3, 4]);
        assert_abs_diff_eq!(g.matrix().get(0, 7).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.matrix().get(7, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.purity(), 1.0, epsilon = 1e-12);

        // Tracing out either end qubit leaves the classically correlated
        // mixture (|00><00| + |11><11|)/2.
        let r = g.partial_trace(&[3, 4]).unwrap();
        assert_abs_diff_eq!(r.matrix().get(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(3, 3).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(0, 3).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(1, 1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn w_state_three_qubits() {
        let w = w_state(3).unwrap();
        assert_eq!(w.labels(), &[1, 2, 3]);
        let third = 1.0 / 3.0;
        for &i in &[1usize, 2, 4] {
            for &j in &[1usize, 2, 4] {
                assert_abs_diff_eq!(w.matrix().get(i, j).re, third, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(w.matrix().get(0, 0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.purity(), 1.0, epsilon = 1e-12);

        // Reduced two-qubit state: (|01>+|10>)(<01|+<10|)/3 + |00><00|/3.
        let r = w.partial_trace(&[2, 3]).unwrap();
        assert_abs_diff_eq!(r.matrix().get(0, 0).re, third, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(1, 1).re, third, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(1, 2).re, third, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(2, 1).re, third, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(2, 2).re, third, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix().get(3, 3).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn w_state_two_qubits_is_symmetric_bell_state() {
        let w = w_state(2).unwrap();
        for (i, j, want) in [(1, 1, 0.5), (1, 2, 0.5), (2, 1, 0.5), (2, 2, 0.5)] {
            assert_abs_diff_eq!(w.matrix().get(i, j).re, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn w_state_rejects_tiny_and_huge() {
        assert!(w_state(1).is_err());
        assert!(w_vector(1).is_err());
        assert!(w_state(13).is_err());
        assert!(w_vector(25).is_err());
        assert!(w_vector(16).is_ok());
    }

    #[test]
    fn pauli_algebra() {
        let x = Pauli::X.matrix();
        let xx = x.matmul(&x).unwrap();
        assert!(xx.max_abs_diff(&ComplexMatrix::identity(2)) == 0.0);
        let y = Pauli::Y.matrix();
        assert_abs_diff_eq!(y.get(0, 1).im, -1.0, epsilon = 0.0);
        assert_abs_diff_eq!(y.get(1, 0).im, 1.0, epsilon = 0.0);
        let z = Pauli::Z.matrix();
        assert_abs_diff_eq!(z.get(1, 1).re, -1.0, epsilon = 0.0);
        assert_eq!("X".parse::<Pauli>().unwrap(), Pauli::X);
        assert_eq!("i".parse::<Pauli>().unwrap(), Pauli::I);
        assert!("Q".parse::<Pauli>().is_err());
        assert_eq!(Pauli::Z.to_string(), "Z");
        assert!(pauli(Pauli::I).max_abs_diff(&ComplexMatrix::identity(2)) == 0.0);
    }

    #[test]
    fn noisy_state_endpoints_and_midpoint() {
        let g = ghz_state();
        let full = noisy_state(&g, Visibility::new(1.0).unwrap()).unwrap();
        assert!(full.matrix().max_abs_diff(g.matrix()) <= 1e-15);

        let none = noisy_state(&g, Visibility::new(0.0).unwrap()).unwrap();
        assert!(none.matrix().max_abs_diff(&ComplexMatrix::identity(8).scale(re(0.125))) <= 1e-15);

        let half = noisy_state(&g, Visibility::new(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(half.matrix().get(0, 0).re, 0.3125, epsilon = 1e-15);
        assert_abs_diff_eq!(half.matrix().get(0, 7).re, 0.25, epsilon = 1e-15);

        // Affine in w: chi(w) = w*chi(1) + (1-w)*chi(0).
        let w = 0.37;
        let mix = noisy_state(&g, Visibility::new(w).unwrap()).unwrap();
        let recon = full.matrix().scale(re(w)).add(&none.matrix().scale(re(1.0 - w)));
        assert!(mix.matrix().max_abs_diff(&recon) <= 1e-14);
    }

    #[test]
    fn noisy_state_rejects_wrong_size() {
        let q = input_state(BlochAngles::new(0.3, 0.4).unwrap());
        assert!(matches!(
            noisy_state(&q, Visibility::new(0.5).unwrap()),
            Err(Error::Shape(_))
        ));
    }
}
