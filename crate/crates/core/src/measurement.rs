//! Projective measurement: branch probabilities, conditional states, and
//! seeded sampling of outcomes.

use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::qmat::{embed, ptrace_matrix, ComplexMatrix, DensityOperator};
use crate::tol;

/// A complete set of pairwise orthogonal projectors on a fixed number of
/// qubits; outcomes are the 1-based indices into the set.
#[derive(Debug, Clone)]
pub struct ProjectorSet {
    projectors: Vec<ComplexMatrix>,
    num_qubits: usize,
}

impl ProjectorSet {
    /// Validates completeness (sum is the identity), Hermiticity,
    /// idempotence, and pairwise orthogonality.
    pub fn new(projectors: Vec<ComplexMatrix>, num_qubits: usize) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::Shape("a projector set needs at least one projector".into()));
        }
        let dim = 1usize << num_qubits;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (idx, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != dim {
                return Err(Error::Shape(format!(
                    "projector {} is {}x{}, expected {}x{}",
                    idx + 1,
                    p.rows(),
                    p.cols(),
                    dim,
                    dim
                )));
            }
            if p.hermiticity_defect() > tol::HERMITICITY {
                return Err(Error::InvalidState(format!("projector {} is not Hermitian", idx + 1)));
            }
            let sq = p.matmul(p)?;
            if sq.max_abs_diff(p) > tol::EQUALITY {
                return Err(Error::InvalidState(format!("projector {} is not idempotent", idx + 1)));
            }
            sum = sum.add(p);
        }
        for a in 0..projectors.len() {
            for b in (a + 1)..projectors.len() {
                let prod = projectors[a].matmul(&projectors[b])?;
                if prod.max_abs_diff(&ComplexMatrix::zeros(dim, dim)) > tol::EQUALITY {
                    return Err(Error::InvalidState(format!(
                        "projectors {} and {} are not orthogonal",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > tol::EQUALITY {
            return Err(Error::InvalidState("projector set does not sum to the identity".into()));
        }
        Ok(Self { projectors, num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// Projector for a 1-based outcome label.
    pub fn projector(&self, outcome: usize) -> Result<&ComplexMatrix> {
        self.projectors
            .get(outcome.checked_sub(1).ok_or_else(|| {
                Error::Config("outcome labels start at 1".into())
            })?)
            .ok_or_else(|| Error::Config(format!("outcome {outcome} out of range")))
    }

    /// Outcome labels `1..=len`.
    pub fn outcomes(&self) -> impl Iterator<Item = usize> {
        1..=self.projectors.len()
    }
}

/// One branch of a projective measurement.
///
/// `unnormalized` is the probability-weighted conditional state on the kept
/// subsystems; averaging pipelines consume it so that degenerate branches
/// contribute zero without a 0/0 division.
#[derive(Debug, Clone)]
pub struct MeasurementBranch {
    pub outcome: usize,
    pub probability: f64,
    pub conditional: Option<DensityOperator>,
    pub unnormalized: ComplexMatrix,
    pub kept_labels: Vec<u32>,
}

impl MeasurementBranch {
    /// True when the probability sits below the degenerate threshold and no
    /// conditional state exists.
    pub fn is_degenerate(&self) -> bool {
        self.conditional.is_none()
    }
}

/// Measures the labeled subsystems with a complete projector set. Measured
/// subsystems are removed from the returned branches; kept subsystems retain
/// their original relative order.
pub fn measure(
    rho: &DensityOperator,
    set: &ProjectorSet,
    on: &[u32],
) -> Result<Vec<MeasurementBranch>> {
    if on.len() != set.num_qubits() {
        return Err(Error::Shape(format!(
            "projector set covers {} qubit(s) but {} label(s) were given",
            set.num_qubits(),
            on.len()
        )));
    }
    if on.len() >= rho.num_qubits() {
        return Err(Error::Label("measurement must leave at least one subsystem".into()));
    }
    let labels = rho.labels();
    let keep_pos: Vec<usize> = (0..labels.len())
        .filter(|&p| !on.contains(&labels[p]))
        .collect();
    if keep_pos.len() + on.len() != labels.len() {
        return Err(Error::Label(format!("labels {on:?} are not distinct members of {labels:?}")));
    }
    let kept_labels: Vec<u32> = keep_pos.iter().map(|&p| labels[p]).collect();
    let mut branches = Vec::with_capacity(set.len());
    for outcome in set.outcomes() {
        let full = embed(set.projector(outcome)?, on, labels)?;
        // Pi rho Pi; the projector is Hermitian so no adjoint is needed.
        let collapsed = full.matmul(rho.matrix())?.matmul(&full)?;
        let probability = {
            let tr = collapsed.trace()?;
            tr.re
        };
        let unnormalized = ptrace_matrix(&collapsed, labels.len(), &keep_pos);
        let conditional = if probability > tol::DEGENERATE_PROB {
            let inv = Complex64::new(1.0 / probability, 0.0);
            Some(DensityOperator::new(unnormalized.scale(inv), kept_labels.clone())?)
        } else {
            None
        };
        branches.push(MeasurementBranch {
            outcome,
            probability: probability.max(0.0),
            conditional,
            unnormalized,
            kept_labels: kept_labels.clone(),
        });
    }
    Ok(branches)
}

/// Draws a uniform double in `[0, 1)` from the top 53 bits of the generator.
pub(crate) fn uniform_f64(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Samples an outcome label according to the branch probabilities.
/// Deterministic for a given generator state.
pub fn sample_outcome(branches: &[MeasurementBranch], rng: &mut dyn RngCore) -> Result<usize> {
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    if branches.is_empty() || total <= tol::DEGENERATE_PROB {
        return Err(Error::Sampling("no branch carries probability".into()));
    }
    if (total - 1.0).abs() > tol::PROB_CLOSURE {
        return Err(Error::Sampling(format!("branch probabilities sum to {total}, not 1")));
    }
    let draw = uniform_f64(rng);
    let mut acc = 0.0;
    let mut last_live = None;
    for b in branches {
        if b.probability > tol::DEGENERATE_PROB {
            last_live = Some(b.outcome);
        }
        acc += b.probability;
        if draw < acc && b.probability > tol::DEGENERATE_PROB {
            return Ok(b.outcome);
        }
    }
    // Rounding pushed the cumulative sum fractionally below the draw; the
    // last live branch absorbs the remainder.
    last_live.ok_or_else(|| Error::Sampling("no branch carries probability".into()))
}
