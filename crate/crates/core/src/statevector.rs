//! Labeled pure-state amplitude vectors.
//!
//! Protocols over pure resources run on these vectors and only form density
//! operators at the single-qubit outputs; the dense density-operator path in
//! [`crate::protocols`] remains the reference the vector path is checked
//! against. Vectors are allowed to be unnormalized: projecting onto a
//! measurement branch keeps the branch weight in the norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{gather_bits, scatter_bits, ComplexMatrix, DensityOperator};
use crate::tol;

/// Amplitudes over the computational basis of an ordered list of labeled
/// qubits; the first label is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    labels: Vec<u32>,
}

impl StateVector {
    /// Wraps amplitudes over the labeled qubits. Every amplitude must be
    /// finite and the length must be `2^labels.len()`.
    pub fn new(amps: Vec<Complex64>, labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Label("a state vector needs at least one subsystem".into()));
        }
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::Label(format!("duplicate subsystem labels in {labels:?}")));
        }
        if amps.len() != 1 << labels.len() {
            return Err(Error::Shape(format!(
                "expected {} amplitudes for {} qubit(s), got {}",
                1 << labels.len(),
                labels.len(),
                amps.len()
            )));
        }
        if let Some(z) = amps.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape(format!("non-finite amplitude {z}")));
        }
        Ok(Self { amps, labels })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    /// Squared norm; equals the branch weight for projected vectors.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::Shape(format!(
                "inner product of {}-amp and {}-amp vectors",
                self.amps.len(),
                other.amps.len()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; label sets must be disjoint.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        for l in &other.labels {
            if self.labels.contains(l) {
                return Err(Error::Label(format!("label {l} present on both factors")));
            }
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::new(amps, labels)
    }

    /// Renames the subsystems without touching the amplitudes.
    pub fn relabel(&self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::Label(format!(
                "expected {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        Self::new(self.amps.clone(), labels)
    }

    fn positions_of(&self, subset: &[u32]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(subset.len());
        for &label in subset {
            let pos = self
                .labels
                .iter()
                .position(|&l| l == label)
                .ok_or_else(|| Error::Label(format!("label {label} is not part of the system")))?;
            if out.contains(&pos) {
                return Err(Error::Label(format!("label {label} repeated")));
            }
            out.push(pos);
        }
        Ok(out)
    }

    /// Contracts `<bra|` against the subsystems `on` (bra amplitudes are
    /// given as a ket and conjugated here), removing those subsystems. The
    /// result is unnormalized: its squared norm is the branch probability
    /// when `self` is normalized.
    pub fn project(&self, bra: &[Complex64], on: &[u32]) -> Result<Self> {
        let on_pos = self.positions_of(on)?;
        let m = on_pos.len();
        if bra.len() != 1 << m {
            return Err(Error::Shape(format!(
                "bra over {} qubit(s) needs {} amplitudes, got {}",
                m,
                1 << m,
                bra.len()
            )));
        }
        let n = self.labels.len();
        if m == n {
            return Err(Error::Label("projection must leave at least one subsystem".into()));
        }
        let rest_pos: Vec<usize> = (0..n).filter(|p| !on_pos.contains(p)).collect();
        let rest_labels: Vec<u32> = rest_pos.iter().map(|&p| self.labels[p]).collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << rest_pos.len()];
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let on_bits = gather_bits(idx, &on_pos, n);
            let rest_bits = gather_bits(idx, &rest_pos, n);
            amps[rest_bits] += bra[on_bits].conj() * amp;
        }
        Self::new(amps, rest_labels)
    }

    /// Applies a 2x2 operator to the labeled qubit.
    pub fn apply_one(&self, op: &ComplexMatrix, label: u32) -> Result<Self> {
        if !op.is_square() || op.rows() != 2 {
            return Err(Error::Shape(format!(
                "single-qubit operator must be 2x2, got {}x{}",
                op.rows(),
                op.cols()
            )));
        }
        let pos = self.positions_of(&[label])?[0];
        let n = self.labels.len();
        let stride = 1usize << (n - 1 - pos);
        let mut amps = self.amps.clone();
        for base in 0..self.amps.len() {
            if base & stride != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | stride];
            amps[base] = op.get(0, 0) * a0 + op.get(0, 1) * a1;
            amps[base | stride] = op.get(1, 0) * a0 + op.get(1, 1) * a1;
        }
        Self::new(amps, self.labels.clone())
    }

    /// Unnormalized reduced density matrix on the kept subsystems (original
    /// relative order), tracing out everything else.
    pub fn reduced_matrix(&self, keep: &[u32]) -> Result<ComplexMatrix> {
        let keep_arg_pos = self.positions_of(keep)?;
        let mut keep_pos = keep_arg_pos.clone();
        keep_pos.sort_unstable();
        let n = self.labels.len();
        let rest_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
        let k = keep_pos.len();
        let mut out = ComplexMatrix::zeros(1 << k, 1 << k);
        for rest in 0..(1usize << rest_pos.len()) {
            let rest_scattered = scatter_bits(rest, &rest_pos, n);
            for a in 0..(1usize << k) {
                let ia = scatter_bits(a, &keep_pos, n) | rest_scattered;
                let va = self.amps[ia];
                if va.norm_sqr() == 0.0 {
                    continue;
                }
                for b in 0..(1usize << k) {
                    let ib = scatter_bits(b, &keep_pos, n) | rest_scattered;
                    let add = va * self.amps[ib].conj();
                    out.set(a, b, out.get(a, b) + add);
                }
            }
        }
        Ok(out)
    }

    /// Outer product as a validated density operator; requires unit norm.
    pub fn to_density(&self) -> Result<DensityOperator> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidState(format!(
                "cannot form a density operator from a vector with squared norm {norm}"
            )));
        }
        let dim = self.amps.len();
        let matrix = ComplexMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        DensityOperator::new(matrix, self.labels.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_phi_plus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)], vec![1, 2]).unwrap()
    }

    #[test]
    fn kron_and_norm() {
        let zero = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![1]).unwrap();
        let one = StateVector::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![2]).unwrap();
        let both = zero.kron(&one).unwrap();
        assert_eq!(both.labels(), &[1, 2]);
        assert_abs_diff_eq!(both.amps()[1].re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(both.norm_sqr(), 1.0, epsilon = 0.0);
    }

    #[test]
    fn project_bell_component() {
        // <0| on qubit 1 of the Bell state leaves |0>/sqrt(2) on qubit 2.
        let bell = bell_phi_plus();
        let rem = bell.project(&[c(1.0, 0.0), c(0.0, 0.0)], &[1]).unwrap();
        assert_eq!(rem.labels(), &[2]);
        assert_abs_diff_eq!(rem.norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rem.amps()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(rem.amps()[1].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn project_respects_bra_conjugation() {
        // <psi| with psi = (|0> + i|1>)/sqrt(2) applied to |1> gives
        // conj(i)/sqrt(2) = -i/sqrt(2).
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let two = StateVector::new(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![7, 8],
        )
        .unwrap(); // |10> on labels [7, 8]
        let rem = two.project(&[c(s, 0.0), c(0.0, s)], &[7]).unwrap();
        assert_eq!(rem.labels(), &[8]);
        assert_abs_diff_eq!(rem.amps()[0].im, -s, epsilon = 1e-15);
    }

    #[test]
    fn reduced_matrix_of_bell_pair_is_maximally_mixed() {
        let bell = bell_phi_plus();
        let red = bell.reduced_matrix(&[2]).unwrap();
        assert_abs_diff_eq!(red.get(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(red.get(1, 1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(red.get(0, 1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_one_flips_the_right_qubit() {
        let zero2 = StateVector::new(
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![4, 9],
        )
        .unwrap();
        let x = crate::states::Pauli::X.matrix();
        let flipped = zero2.apply_one(&x, 9).unwrap();
        assert_abs_diff_eq!(flipped.amps()[1].re, 1.0, epsilon = 0.0);
        let flipped_other = zero2.apply_one(&x, 4).unwrap();
        assert_abs_diff_eq!(flipped_other.amps()[2].re, 1.0, epsilon = 0.0);
    }

    #[test]
    fn to_density_requires_normalization() {
        let unnorm = StateVector::new(vec![c(2.0, 0.0), c(0.0, 0.0)], vec![1]).unwrap();
        assert!(unnorm.to_density().is_err());
        let bell = bell_phi_plus();
        let rho = bell.to_density().unwrap();
        assert_abs_diff_eq!(rho.matrix().get(0, 3).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_the_bra() {
        let a = StateVector::new(vec![c(0.0, 1.0), c(0.0, 0.0)], vec![1]).unwrap();
        let b = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![1]).unwrap();
        let ip = a.inner(&b).unwrap();
        assert_abs_diff_eq!(ip.im, -1.0, epsilon = 0.0);
    }

    #[test]
    fn projection_must_leave_a_subsystem() {
        let bell = bell_phi_plus();
        let full_bra = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(bell.project(&full_bra, &[1, 2]).is_err());
    }
}
