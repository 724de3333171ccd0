//! Dense complex matrices and labeled density operators.
//!
//! Multi-qubit systems carry an ordered list of subsystem labels; the first
//! label is the most significant bit of the computational-basis index. All
//! storage is row-major `Vec<Complex64>`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Every entry must be finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if let Some(z) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape(format!("non-finite entry {z}")));
        }
        Ok(Self { rows, cols, entries })
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f` at each position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at row `i`, column `j`.
    ///
    /// # Panics
    /// Panics if the position is out of bounds.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j]
    }

    /// Overwrites the entry at row `i`, column `j`.
    ///
    /// # Panics
    /// Panics if the position is out of bounds.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = value;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.entries[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    ///
    /// # Panics
    /// Panics if the shapes differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// Entrywise difference.
    ///
    /// # Panics
    /// Panics if the shapes differ.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// Kronecker product; the left factor supplies the high-order bits.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.entries[i1 * self.cols + j1];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.entries[(i1 * other.rows + i2) * cols + (j1 * other.cols + j2)] =
                            a * other.entries[i2 * other.cols + j2];
                    }
                }
            }
        }
        out
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Shape(format!("trace of non-square {}x{}", self.rows, self.cols)));
        }
        Ok((0..self.rows).map(|i| self.entries[i * self.cols + i]).sum())
    }

    /// Largest entrywise absolute difference between two equally shaped
    /// matrices.
    ///
    /// # Panics
    /// Panics if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi
    /// rotations on the complex entries.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "eigenvalues of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        if self.hermiticity_defect() > tol::HERMITICITY {
            return Err(Error::Shape("eigenvalue input is not Hermitian".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        // Symmetrize so rotations act on an exactly Hermitian copy.
        for i in 0..n {
            for j in 0..n {
                let avg = (a.get(i, j) + a.get(j, i).conj()) * Complex64::new(0.5, 0.0);
                a.set(i, j, avg);
            }
        }
        let scale: f64 = a
            .entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1.0);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off.sqrt() <= 1e-14 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let r = apq.norm();
                    if r <= 1e-300 {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let tau = (aqq - app) / (2.0 * r);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Row update: a <- g^dagger a with g the (p, q) rotation.
                    for i in 0..n {
                        let apip = a.get(p, i);
                        let aqi = a.get(q, i);
                        a.set(p, i, apip * c - aqi * (phase * s));
                        a.set(q, i, apip * (phase.conj() * s) + aqi * c);
                    }
                    // Column update: a <- a g.
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * c - aiq * (phase.conj() * s));
                        a.set(i, q, aip * (phase * s) + aiq * c);
                    }
                    // Re-pin the rotated entries to their exact targets.
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Ok(eigs)
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }
}

/// Scatters the bits of `value` (most significant first, one per position in
/// `positions`) into a full index over `n` bit positions, where position 0 is
/// the most significant.
pub(crate) fn scatter_bits(value: usize, positions: &[usize], n: usize) -> usize {
    let mut out = 0usize;
    for (b, &pos) in positions.iter().enumerate() {
        let bit = (value >> (positions.len() - 1 - b)) & 1;
        out |= bit << (n - 1 - pos);
    }
    out
}

/// Inverse of [`scatter_bits`]: collects the bits of `index` at `positions`
/// into a compact value, most significant first.
pub(crate) fn gather_bits(index: usize, positions: &[usize], n: usize) -> usize {
    let mut out = 0usize;
    for (b, &pos) in positions.iter().enumerate() {
        out |= ((index >> (n - 1 - pos)) & 1) << (positions.len() - 1 - b);
    }
    out
}

/// Embeds an operator acting on the subsystems `on` into the full system
/// `system`, tensoring identity on every other subsystem. Bit order inside
/// `op` follows the order of `on`.
pub fn embed(op: &ComplexMatrix, on: &[u32], system: &[u32]) -> Result<ComplexMatrix> {
    if on.is_empty() {
        return Err(Error::Label("embed target must name at least one subsystem".into()));
    }
    let n = system.len();
    let m = on.len();
    if !op.is_square() || op.rows() != 1 << m {
        return Err(Error::Shape(format!(
            "operator is {}x{} but {} subsystem(s) need {}x{}",
            op.rows(),
            op.cols(),
            m,
            1 << m,
            1 << m
        )));
    }
    let mut on_pos = Vec::with_capacity(m);
    for &label in on {
        let pos = system
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Label(format!("label {label} is not part of the system")))?;
        if on_pos.contains(&pos) {
            return Err(Error::Label(format!("label {label} repeated in embed target")));
        }
        on_pos.push(pos);
    }
    let mut on_mask = 0usize;
    for &pos in &on_pos {
        on_mask |= 1 << (n - 1 - pos);
    }
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for row in 0..dim {
        let i_on = gather_bits(row, &on_pos, n);
        let rest = row & !on_mask;
        for j_on in 0..(1 << m) {
            let col = scatter_bits(j_on, &on_pos, n) | rest;
            let v = op.get(i_on, j_on);
            if v.norm_sqr() != 0.0 {
                out.set(row, col, v);
            }
        }
    }
    Ok(out)
}

/// Partial trace of a square matrix over the complement of `keep_pos`
/// (ascending bit positions within an `n`-qubit system).
pub(crate) fn ptrace_matrix(m: &ComplexMatrix, n: usize, keep_pos: &[usize]) -> ComplexMatrix {
    let k = keep_pos.len();
    let traced_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
    let out_dim = 1usize << k;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for io in 0..out_dim {
        let base_i = scatter_bits(io, keep_pos, n);
        for jo in 0..out_dim {
            let base_j = scatter_bits(jo, keep_pos, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..(1usize << traced_pos.len()) {
                let tr = scatter_bits(t, &traced_pos, n);
                acc += m.get(base_i | tr, base_j | tr);
            }
            out.set(io, jo, acc);
        }
    }
    out
}

/// Density operator over an ordered set of labeled qubit subsystems.
///
/// Construction validates the full contract: square shape matching the label
/// count, unit trace, Hermiticity, and positive semidefiniteness (within the
/// tolerances in [`crate::tol`]).
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    labels: Vec<u32>,
}

impl DensityOperator {
    /// Validates and wraps a matrix as a density operator on `labels`.
    pub fn new(matrix: ComplexMatrix, labels: Vec<u32>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Label("a density operator needs at least one subsystem".into()));
        }
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::Label(format!("duplicate subsystem labels in {labels:?}")));
        }
        let dim = 1usize << labels.len();
        if !matrix.is_square() || matrix.rows() != dim {
            return Err(Error::Shape(format!(
                "matrix is {}x{} but {} label(s) need {}x{}",
                matrix.rows(),
                matrix.cols(),
                labels.len(),
                dim,
                dim
            )));
        }
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e} exceeds tolerance"
            )));
        }
        let min_eig = matrix.min_eigenvalue()?;
        if min_eig < -tol::PSD_SLACK {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e} outside tolerance"
            )));
        }
        Ok(Self { matrix, labels })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
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
        Self::new(self.matrix.kron(&other.matrix), labels)
    }

    /// Traces out every subsystem not named in `keep`. Kept subsystems retain
    /// their original relative order regardless of the order of `keep`.
    pub fn partial_trace(&self, keep: &[u32]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Label("must keep at least one subsystem".into()));
        }
        let mut seen = keep.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != keep.len() {
            return Err(Error::Label(format!("duplicate labels in keep list {keep:?}")));
        }
        for &label in keep {
            if !self.labels.contains(&label) {
                return Err(Error::Label(format!("label {label} is not part of the system")));
            }
        }
        let keep_pos: Vec<usize> = (0..self.labels.len())
            .filter(|&p| keep.contains(&self.labels[p]))
            .collect();
        let kept_labels: Vec<u32> = keep_pos.iter().map(|&p| self.labels[p]).collect();
        let reduced = ptrace_matrix(&self.matrix, self.labels.len(), &keep_pos);
        Self::new(reduced, kept_labels)
    }

    /// Renames the subsystems without touching the matrix.
    pub fn relabel(&self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::Label(format!(
                "expected {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        Self::new(self.matrix.clone(), labels)
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix
            .matmul(&self.matrix)
            .and_then(|sq| sq.trace())
            .map(|t| t.re)
            .expect("square matrix")
    }

    /// Conjugates the state by a unitary acting on the named subsystems:
    /// `U rho U^dagger` with `U` embedded over the full system.
    pub fn conjugate_by(&self, u: &ComplexMatrix, on: &[u32]) -> Result<Self> {
        let full = embed(u, on, &self.labels)?;
        let rotated = full.matmul(&self.matrix)?.matmul(&full.dagger())?;
        Self::new(rotated, self.labels.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn proj0() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    fn proj1() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn kron_of_basis_projectors() {
        let k = proj0().kron(&proj1());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(k.get(i, j).re, want, epsilon = 0.0);
                assert_abs_diff_eq!(k.get(i, j).im, 0.0, epsilon = 0.0);
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, (i as f64) - 0.5));
        let b = ComplexMatrix::from_fn(2, 2, |i, j| c(1.0 - i as f64, j as f64));
        let d = ComplexMatrix::from_fn(2, 2, |i, j| c(0.25 * i as f64, 1.0 + j as f64));
        let left = a.kron(&b).kron(&d);
        let right = a.kron(&b.kron(&d));
        assert!(left.max_abs_diff(&right) <= 1e-14);
    }

    #[test]
    fn dagger_involution_and_trace() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        assert!(m.dagger().dagger().max_abs_diff(&m) == 0.0);
        let tr = m.trace().unwrap();
        assert_abs_diff_eq!(tr.re, 0.0 + 1.0 + 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(tr.im, 0.0 + 1.0 + 2.0, epsilon = 0.0);
    }

    #[test]
    fn trace_rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(m.trace(), Err(Error::Shape(_))));
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let bad = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(bad, Err(Error::Shape(_))));
    }

    #[test]
    fn jacobi_eigenvalues_of_pauli_y() {
        let y = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        )
        .unwrap();
        let eigs = y.hermitian_eigenvalues().unwrap();
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eigs[1], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn jacobi_eigenvalues_of_rank_one_projector() {
        // |psi><psi| for |psi| = (|0> + i|1>)/sqrt(2) has eigenvalues {0, 1}.
        let h = ComplexMatrix::new(
            2,
            2,
            vec![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)],
        )
        .unwrap();
        let eigs = h.hermitian_eigenvalues().unwrap();
        assert_abs_diff_eq!(eigs[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eigs[1], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn jacobi_handles_larger_random_hermitian() {
        // Deterministic pseudo-random Hermitian 8x8; eigenvalue sum must equal
        // the trace and the spectrum must reproduce the matrix Frobenius norm.
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed as f64 / u64::MAX as f64) - 0.5
        };
        let n = 8;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if i == j {
                    m.set(i, j, c(next(), 0.0));
                } else {
                    let v = c(next(), next());
                    m.set(i, j, v);
                    m.set(j, i, v.conj());
                }
            }
        }
        let eigs = m.hermitian_eigenvalues().unwrap();
        let tr: f64 = (0..n).map(|i| m.get(i, i).re).sum();
        assert_abs_diff_eq!(eigs.iter().sum::<f64>(), tr, epsilon = 1e-10);
        let frob_sq: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum();
        assert_abs_diff_eq!(eigs.iter().map(|e| e * e).sum::<f64>(), frob_sq, epsilon = 1e-10);
    }

    #[test]
    fn embed_on_second_of_two() {
        let sys = [1u32, 2u32];
        let full = embed(&proj0(), &[2], &sys).unwrap();
        let want = ComplexMatrix::identity(2).kron(&proj0());
        assert!(full.max_abs_diff(&want) == 0.0);
        for (i, d) in [1.0, 0.0, 1.0, 0.0].iter().enumerate() {
            assert_abs_diff_eq!(full.get(i, i).re, *d, epsilon = 0.0);
        }
    }

    #[test]
    fn embed_respects_target_order() {
        // A two-qubit operator embedded on [2, 1] must appear bit-swapped
        // relative to embedding on [1, 2].
        let op = proj0().kron(&proj1()); // |0><0| on first slot, |1><1| on second
        let sys = [1u32, 2u32];
        let direct = embed(&op, &[1, 2], &sys).unwrap();
        let swapped = embed(&op, &[2, 1], &sys).unwrap();
        let want_direct = proj0().kron(&proj1());
        let want_swapped = proj1().kron(&proj0());
        assert!(direct.max_abs_diff(&want_direct) == 0.0);
        assert!(swapped.max_abs_diff(&want_swapped) == 0.0);
    }

    #[test]
    fn embed_rejects_unknown_label() {
        assert!(matches!(embed(&proj0(), &[7], &[1, 2]), Err(Error::Label(_))));
    }

    #[test]
    fn embed_rejects_wrong_dimension() {
        assert!(matches!(embed(&proj0(), &[1, 2], &[1, 2]), Err(Error::Shape(_))));
    }

    #[test]
    fn density_operator_validates() {
        let ok = DensityOperator::new(proj0(), vec![1]).unwrap();
        assert_eq!(ok.labels(), &[1]);
        assert_abs_diff_eq!(ok.purity(), 1.0, epsilon = 1e-15);

        let not_unit_trace = DensityOperator::new(ComplexMatrix::identity(2), vec![1]);
        assert!(matches!(not_unit_trace, Err(Error::InvalidState(_))));

        let not_hermitian = ComplexMatrix::new(
            2,
            2,
            vec![c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            DensityOperator::new(not_hermitian, vec![1]),
            Err(Error::InvalidState(_))
        ));

        let not_psd = ComplexMatrix::new(
            2,
            2,
            vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(DensityOperator::new(not_psd, vec![1]), Err(Error::InvalidState(_))));

        let dup_labels = DensityOperator::new(ComplexMatrix::identity(4).scale(c(0.25, 0.0)), vec![3, 3]);
        assert!(matches!(dup_labels, Err(Error::Label(_))));
    }

    #[test]
    fn partial_trace_keeps_original_order() {
        // rho = |01><01| on labels [5, 9]; keeping [9, 5] must return the
        // same two-qubit state with labels still ordered [5, 9].
        let rho = DensityOperator::new(proj0().kron(&proj1()), vec![5, 9]).unwrap();
        let kept = rho.partial_trace(&[9, 5]).unwrap();
        assert_eq!(kept.labels(), &[5, 9]);
        assert!(kept.matrix().max_abs_diff(rho.matrix()) == 0.0);

        let only_9 = rho.partial_trace(&[9]).unwrap();
        assert_eq!(only_9.labels(), &[9]);
        assert!(only_9.matrix().max_abs_diff(&proj1()) == 0.0);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let rho = DensityOperator::new(half.kron(&proj0()), vec![1, 2]).unwrap();
        let left = rho.partial_trace(&[1]).unwrap();
        assert!(left.matrix().max_abs_diff(&half) <= 1e-15);
        let right = rho.partial_trace(&[2]).unwrap();
        assert!(right.matrix().max_abs_diff(&proj0()) <= 1e-15);
    }

    #[test]
    fn partial_trace_rejects_unknown_label() {
        let rho = DensityOperator::new(proj0(), vec![1]).unwrap();
        assert!(matches!(rho.partial_trace(&[2]), Err(Error::Label(_))));
    }

    #[test]
    fn kron_rejects_label_collision() {
        let a = DensityOperator::new(proj0(), vec![1]).unwrap();
        let b = DensityOperator::new(proj1(), vec![1]).unwrap();
        assert!(matches!(a.kron(&b), Err(Error::Label(_))));
    }
}
