//! The teleportation protocols as explicit state machines.
//!
//! `P0`: the sender Bell-measures the input qubit (label 1) and her half of
//! the three-qubit resource (label 2); the accomplice measures her qubit
//! (label 3) in the tunable basis; the receiver (label 4) applies a
//! correction keyed by both outcomes.
//!
//! `P1`: the sender Bell-measures as before, the accomplice measures
//! nothing, and each remaining party (labels 3 and up) recovers the input by
//! applying a correction keyed by the Bell outcome alone. Over an n-qubit
//! single-excitation resource there are n-1 such co-receivers.
//!
//! Both protocols exist twice: a dense density-operator path built on
//! [`crate::measurement`] (the reference) and a pure-state fast path on
//! [`crate::statevector`] used by Monte Carlo loops; the two must agree to
//! within `tol::EQUALITY` and a test enforces that.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::measurement::{measure, uniform_f64};
use crate::qmat::{ComplexMatrix, DensityOperator};
use crate::states::{
    bell_projectors, bell_vectors, ghz_vector, input_state, input_vector, nu_projectors,
    nu_vectors, w_vector, BlochAngles, MeasurementAngle, Pauli,
};
use crate::statevector::StateVector;
use crate::tol;

/// Largest supported single-excitation resource for the multi-party
/// protocol; the joint vector with the input qubit then has 2^17 amplitudes.
pub const MAX_W_PARTIES: usize = 16;

/// Outcome-keyed Pauli corrections, loaded from plain text: one line per
/// entry, `j k pauli`, with `k = -` for tables keyed by `j` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionTable {
    entries: BTreeMap<(u8, Option<u8>), Pauli>,
}

impl CorrectionTable {
    /// Parses the text format. Lines starting with `#` and blank lines are
    /// ignored. All rows must agree on whether a second outcome is present;
    /// joint tables need all 8 `(j, k)` pairs, marginal tables all 4 `j`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut arity: Option<bool> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Config(format!(
                    "table line {}: expected `j k pauli`, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let j: u8 = fields[0]
                .parse()
                .map_err(|_| Error::Config(format!("table line {}: bad outcome {:?}", lineno + 1, fields[0])))?;
            if !(1..=4).contains(&j) {
                return Err(Error::Config(format!(
                    "table line {}: outcome j must be 1..4, got {j}",
                    lineno + 1
                )));
            }
            let k: Option<u8> = if fields[1] == "-" {
                None
            } else {
                let k: u8 = fields[1].parse().map_err(|_| {
                    Error::Config(format!("table line {}: bad outcome {:?}", lineno + 1, fields[1]))
                })?;
                if !(1..=2).contains(&k) {
                    return Err(Error::Config(format!(
                        "table line {}: outcome k must be 1..2 or `-`, got {k}",
                        lineno + 1
                    )));
                }
                Some(k)
            };
            let joint = k.is_some();
            if *arity.get_or_insert(joint) != joint {
                return Err(Error::Config(format!(
                    "table line {}: mixes joint and marginal rows",
                    lineno + 1
                )));
            }
            let pauli: Pauli = fields[2].parse()?;
            if entries.insert((j, k), pauli).is_some() {
                return Err(Error::Config(format!(
                    "table line {}: duplicate entry for ({j}, {})",
                    lineno + 1,
                    fields[1]
                )));
            }
        }
        let joint = arity.ok_or_else(|| Error::Config("table has no entries".into()))?;
        let expected = if joint { 8 } else { 4 };
        if entries.len() != expected {
            return Err(Error::Config(format!(
                "table has {} entries, expected {expected}",
                entries.len()
            )));
        }
        Ok(Self { entries })
    }

    /// Serializes back to the text format (rows sorted by outcome).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((j, k), pauli) in &self.entries {
            let k_str = k.map_or("-".to_string(), |k| k.to_string());
            out.push_str(&format!("{j} {k_str} {pauli}\n"));
        }
        out
    }

    /// True when entries are keyed by both outcomes.
    pub fn is_joint(&self) -> bool {
        self.entries.keys().next().map(|(_, k)| k.is_some()).unwrap_or(false)
    }

    /// The correction for an outcome pair.
    pub fn correction(&self, j: u8, k: Option<u8>) -> Result<Pauli> {
        self.entries.get(&(j, k)).copied().ok_or_else(|| {
            Error::Config(format!("correction table has no entry for ({j}, {k:?})"))
        })
    }

    /// Rows in sorted outcome order.
    pub fn rows(&self) -> Vec<((u8, Option<u8>), Pauli)> {
        self.entries.iter().map(|(&k, &v)| (k, v)).collect()
    }

    /// Copy with one row's correction replaced.
    pub fn with_row(&self, key: (u8, Option<u8>), pauli: Pauli) -> Result<Self> {
        if !self.entries.contains_key(&key) {
            return Err(Error::Config(format!("correction table has no entry for {key:?}")));
        }
        let mut entries = self.entries.clone();
        entries.insert(key, pauli);
        Ok(Self { entries })
    }

    /// Shipped table for the GHZ resource with a measured accomplice.
    pub fn ghz_p0() -> Self {
        Self::parse(include_str!("../tables/ghz_p0.txt")).expect("shipped table is well-formed")
    }

    /// Shipped table for the W resource with a measured accomplice.
    pub fn w_p0() -> Self {
        Self::parse(include_str!("../tables/w_p0.txt")).expect("shipped table is well-formed")
    }

    /// Shipped table for the W resource with co-receivers.
    pub fn w_p1() -> Self {
        Self::parse(include_str!("../tables/w_p1.txt")).expect("shipped table is well-formed")
    }

    /// Shipped table for the GHZ resource with co-receivers. Keyed by the
    /// Bell outcome alone; chosen so that every branch fidelity is
    /// cos^4(theta/2) + sin^4(theta/2), which maximizes the sphere average
    /// over Pauli assignments for this resource.
    pub fn ghz_p1() -> Self {
        Self::parse(include_str!("../tables/ghz_p1.txt")).expect("shipped table is well-formed")
    }
}

/// One protocol branch: outcomes, joint weight, and what the receiver ends
/// up holding.
///
/// `weighted_fidelity` is computed division-free from the unnormalized
/// branch state, so it is exactly the branch's contribution to the average;
/// `fidelity` and `output_state` are absent when the branch is degenerate
/// (and on the pure fast path, which reports weights and fidelities only).
#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    pub j: u8,
    pub k: Option<u8>,
    pub receiver: u32,
    pub branch_probability: f64,
    pub output_state: Option<DensityOperator>,
    pub fidelity: Option<f64>,
    pub weighted_fidelity: f64,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Overlap `tr(out * pi_in)` between a 1-qubit state and the pure input.
pub fn fidelity(out: &DensityOperator, in_angles: BlochAngles) -> Result<f64> {
    if out.num_qubits() != 1 {
        return Err(Error::Shape(format!(
            "fidelity is defined for 1-qubit outputs, got {} qubits",
            out.num_qubits()
        )));
    }
    let pi_in = input_state(in_angles);
    let prod = out.matrix().matmul(pi_in.matrix())?;
    Ok(prod.trace()?.re)
}

/// Weighted overlap of an unnormalized 1-qubit matrix with the pure input.
fn weighted_overlap(unnorm: &ComplexMatrix, in_angles: BlochAngles) -> Result<f64> {
    let pi_in = input_state(in_angles);
    Ok(unnorm.matmul(pi_in.matrix())?.trace()?.re)
}

fn finish_branch(
    j: u8,
    k: Option<u8>,
    receiver: u32,
    weight: f64,
    unnorm: &ComplexMatrix,
    correction: Pauli,
    in_angles: BlochAngles,
) -> Result<OutcomeRecord> {
    let u = correction.matrix();
    let corrected = u.matmul(unnorm)?.matmul(&u.dagger())?;
    let weighted_fidelity = weighted_overlap(&corrected, in_angles)?;
    let (output_state, fid) = if weight > tol::DEGENERATE_PROB {
        let state = DensityOperator::new(corrected.scale(real(1.0 / weight)), vec![receiver])?;
        let f = weighted_fidelity / weight;
        (Some(state), Some(f))
    } else {
        (None, None)
    };
    Ok(OutcomeRecord {
        j,
        k,
        receiver,
        branch_probability: weight.max(0.0),
        output_state,
        fidelity: fid,
        weighted_fidelity,
    })
}

fn check_resource_3q(resource: &DensityOperator) -> Result<DensityOperator> {
    if resource.num_qubits() != 3 {
        return Err(Error::Shape(format!(
            "protocol resource must have 3 qubits, got {}",
            resource.num_qubits()
        )));
    }
    resource.relabel(vec![2, 3, 4])
}

/// Runs the measured-accomplice protocol on a (possibly mixed) 3-qubit
/// resource: Bell measurement on `[1, 2]`, tunable measurement on `[3]`,
/// correction on `[4]`. Returns the 8 `(j, k)` branches in outcome order.
/// This is the dense reference path; every intermediate state is validated.
pub fn run_p0(
    resource: &DensityOperator,
    input: BlochAngles,
    nu: MeasurementAngle,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    if !table.is_joint() {
        return Err(Error::Config(
            "this protocol needs a table keyed by both outcomes (j and k)".into(),
        ));
    }
    let resource = check_resource_3q(resource)?;
    let sigma = input_state(input).kron(&resource)?;
    let bell_branches = measure(&sigma, &bell_projectors(), &[1, 2])?;
    let nu_set = nu_projectors(nu);
    let mut records = Vec::with_capacity(8);
    for bell in &bell_branches {
        let j = bell.outcome as u8;
        match &bell.conditional {
            Some(cond) => {
                let sub = measure(cond, &nu_set, &[3])?;
                for branch in &sub {
                    let k = branch.outcome as u8;
                    let weight = bell.probability * branch.probability;
                    let unnorm = branch.unnormalized.scale(real(bell.probability));
                    records.push(finish_branch(
                        j,
                        Some(k),
                        4,
                        weight,
                        &unnorm,
                        table.correction(j, Some(k))?,
                        input,
                    )?);
                }
            }
            None => {
                // The whole Bell branch is degenerate; both sub-branches
                // carry zero weight exactly.
                let zero = ComplexMatrix::zeros(2, 2);
                for k in 1..=2u8 {
                    records.push(finish_branch(
                        j,
                        Some(k),
                        4,
                        0.0,
                        &zero,
                        table.correction(j, Some(k))?,
                        input,
                    )?);
                }
            }
        }
    }
    Ok(records)
}

/// Pure-state fast path of [`run_p0`] for rank-1 resources. Branch weights
/// and fidelities agree with the dense path to within `tol::EQUALITY`;
/// `output_state` is left empty.
pub fn run_p0_pure(
    resource: &StateVector,
    input: BlochAngles,
    nu: MeasurementAngle,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    if !table.is_joint() {
        return Err(Error::Config(
            "this protocol needs a table keyed by both outcomes (j and k)".into(),
        ));
    }
    if resource.num_qubits() != 3 {
        return Err(Error::Shape(format!(
            "protocol resource must have 3 qubits, got {}",
            resource.num_qubits()
        )));
    }
    let resource = resource.relabel(vec![2, 3, 4])?;
    let psi_in = input_vector(input);
    let full = psi_in.kron(&resource)?;
    let bells = bell_vectors();
    let mus = nu_vectors(nu);
    let mut records = Vec::with_capacity(8);
    for j in 1..=4u8 {
        let after_bell = full.project(&bells[(j - 1) as usize], &[1, 2])?;
        for k in 1..=2u8 {
            let after_mu = after_bell.project(&mus[(k - 1) as usize], &[3])?;
            let weight = after_mu.norm_sqr();
            let correction = table.correction(j, Some(k))?;
            let corrected = after_mu.apply_one(&correction.matrix(), 4)?;
            // |<psi_in|v>|^2 for the unnormalized branch vector v equals
            // weight * fidelity.
            let overlap = psi_in.relabel(vec![4])?.inner(&corrected)?;
            let weighted_fidelity = overlap.norm_sqr();
            let fid = if weight > tol::DEGENERATE_PROB {
                Some(weighted_fidelity / weight)
            } else {
                None
            };
            records.push(OutcomeRecord {
                j,
                k: Some(k),
                receiver: 4,
                branch_probability: weight,
                output_state: None,
                fidelity: fid,
                weighted_fidelity,
            });
        }
    }
    Ok(records)
}

fn check_receiver(receiver: u32, n: usize) -> Result<()> {
    if !(3..=(n as u32 + 1)).contains(&receiver) {
        return Err(Error::Config(format!(
            "receiver {receiver} out of range 3..={} for an {n}-party resource",
            n + 1
        )));
    }
    Ok(())
}

/// Shared engine for the co-receiver protocol over any pure resource on
/// labels `[2..=n+1]`: Bell measurement on `[1, 2]`, partial trace down to
/// the receiver, correction keyed by the Bell outcome. Returns the 4
/// branches in outcome order.
fn run_p1_over(
    resource: &StateVector,
    input: BlochAngles,
    receiver: u32,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    if table.is_joint() {
        return Err(Error::Config(
            "this protocol needs a table keyed by the Bell outcome alone".into(),
        ));
    }
    let n = resource.num_qubits();
    check_receiver(receiver, n)?;
    let psi_in = input_vector(input);
    let full = psi_in.kron(resource)?;
    let bells = bell_vectors();
    let mut records = Vec::with_capacity(4);
    for j in 1..=4u8 {
        let after_bell = full.project(&bells[(j - 1) as usize], &[1, 2])?;
        let weight = after_bell.norm_sqr();
        let unnorm = after_bell.reduced_matrix(&[receiver])?;
        records.push(finish_branch(
            j,
            None,
            receiver,
            weight,
            &unnorm,
            table.correction(j, None)?,
            input,
        )?);
    }
    Ok(records)
}

/// Co-receiver protocol over the n-party single-excitation resource
/// (`3 <= n <= MAX_W_PARTIES`), with the shipped Bell-outcome-keyed table.
pub fn run_p1_w(n: usize, input: BlochAngles, receiver: u32) -> Result<Vec<OutcomeRecord>> {
    run_p1_w_with_table(n, input, receiver, &CorrectionTable::w_p1())
}

/// [`run_p1_w`] with an explicit correction table.
pub fn run_p1_w_with_table(
    n: usize,
    input: BlochAngles,
    receiver: u32,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    if !(3..=MAX_W_PARTIES).contains(&n) {
        return Err(Error::Config(format!(
            "party count {n} outside the supported range 3..={MAX_W_PARTIES}"
        )));
    }
    let resource = w_vector(n)?.relabel((2..=(n as u32 + 1)).collect())?;
    run_p1_over(&resource, input, receiver, table)
}

/// Co-receiver protocol over the GHZ resource (receiver 3 or 4), with the
/// shipped Bell-outcome-keyed table.
pub fn run_p1_ghz(input: BlochAngles, receiver: u32) -> Result<Vec<OutcomeRecord>> {
    run_p1_ghz_with_table(input, receiver, &CorrectionTable::ghz_p1())
}

/// [`run_p1_ghz`] with an explicit correction table.
pub fn run_p1_ghz_with_table(
    input: BlochAngles,
    receiver: u32,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    run_p1_over(&ghz_vector(), input, receiver, table)
}

/// Dense reference for the co-receiver protocol, built entirely on density
/// operators and [`measure`]; used to cross-check the vector path.
pub fn run_p1_dense(
    resource: &DensityOperator,
    input: BlochAngles,
    receiver: u32,
    table: &CorrectionTable,
) -> Result<Vec<OutcomeRecord>> {
    if table.is_joint() {
        return Err(Error::Config(
            "this protocol needs a table keyed by the Bell outcome alone".into(),
        ));
    }
    let n = resource.num_qubits();
    let labels: Vec<u32> = (2..=(n as u32 + 1)).collect();
    let resource = resource.relabel(labels)?;
    check_receiver(receiver, n)?;
    let sigma = input_state(input).kron(&resource)?;
    let bell_branches = measure(&sigma, &bell_projectors(), &[1, 2])?;
    let mut records = Vec::with_capacity(4);
    for bell in &bell_branches {
        let j = bell.outcome as u8;
        let keep_pos: Vec<usize> = bell
            .kept_labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == receiver)
            .map(|(p, _)| p)
            .collect();
        let unnorm = crate::qmat::ptrace_matrix(&bell.unnormalized, bell.kept_labels.len(), &keep_pos);
        records.push(finish_branch(
            j,
            None,
            receiver,
            bell.probability,
            &unnorm,
            table.correction(j, None)?,
            input,
        )?);
    }
    Ok(records)
}

/// Samples one branch index according to the joint probabilities.
/// Deterministic for a given generator state.
pub fn sample_index(records: &[OutcomeRecord], rng: &mut dyn RngCore) -> Result<usize> {
    let total: f64 = records.iter().map(|r| r.branch_probability).sum();
    if records.is_empty() || total <= tol::DEGENERATE_PROB {
        return Err(Error::Sampling("no branch carries probability".into()));
    }
    if (total - 1.0).abs() > tol::PROB_CLOSURE {
        return Err(Error::Sampling(format!("branch probabilities sum to {total}, not 1")));
    }
    let draw = uniform_f64(rng);
    let mut acc = 0.0;
    let mut last_live: Option<usize> = None;
    for (i, r) in records.iter().enumerate() {
        if r.branch_probability > tol::DEGENERATE_PROB {
            last_live = Some(i);
        }
        acc += r.branch_probability;
        if draw < acc && r.branch_probability > tol::DEGENERATE_PROB {
            return Ok(i);
        }
    }
    last_live.ok_or_else(|| Error::Sampling("no branch carries probability".into()))
}

/// Samples one branch and returns its fidelity.
pub fn sample_fidelity(records: &[OutcomeRecord], rng: &mut dyn RngCore) -> Result<f64> {
    records[sample_index(records, rng)?]
        .fidelity
        .ok_or_else(|| Error::Sampling("sampled branch has no fidelity".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz_state, noisy_state, w_state, Visibility};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn angles(theta: f64, phi: f64) -> BlochAngles {
        BlochAngles::new(theta, phi).unwrap()
    }

    fn nu(v: f64) -> MeasurementAngle {
        MeasurementAngle::new(v).unwrap()
    }

    #[test]
    fn shipped_tables_parse_and_round_trip() {
        for table in [
            CorrectionTable::ghz_p0(),
            CorrectionTable::w_p0(),
            CorrectionTable::w_p1(),
            CorrectionTable::ghz_p1(),
        ] {
            let text = table.to_text();
            let reparsed = CorrectionTable::parse(&text).unwrap();
            assert_eq!(table, reparsed);
        }
        assert_eq!(CorrectionTable::ghz_p0().correction(3, Some(2)).unwrap(), Pauli::Y);
        assert_eq!(CorrectionTable::w_p0().correction(2, Some(1)).unwrap(), Pauli::Y);
        assert_eq!(CorrectionTable::w_p1().correction(4, None).unwrap(), Pauli::Z);
    }

    #[test]
    fn table_parser_rejects_malformed_input() {
        assert!(CorrectionTable::parse("").is_err());
        assert!(CorrectionTable::parse("1 1 Q\n").is_err());
        assert!(CorrectionTable::parse("5 1 X\n").is_err());
        assert!(CorrectionTable::parse("1 3 X\n").is_err());
        // Duplicate row.
        assert!(CorrectionTable::parse("1 1 X\n1 1 Y\n").is_err());
        // Mixed arity.
        assert!(CorrectionTable::parse("1 1 X\n2 - Y\n").is_err());
        // Incomplete.
        assert!(CorrectionTable::parse("1 1 X\n1 2 X\n").is_err());
    }

    #[test]
    fn ghz_perfect_teleportation_at_quarter_turn() {
        let records = run_p0(
            &ghz_state(),
            angles(1.234, 2.345),
            nu(FRAC_PI_4),
            &CorrectionTable::ghz_p0(),
        )
        .unwrap();
        assert_eq!(records.len(), 8);
        let mut total = 0.0;
        for r in &records {
            assert_abs_diff_eq!(r.fidelity.unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.branch_probability, 0.125, epsilon = 1e-12);
            total += r.branch_probability;
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn ghz_pole_input_teleports_exactly() {
        let records = run_p0(
            &ghz_state(),
            angles(0.0, 0.0),
            nu(FRAC_PI_4),
            &CorrectionTable::ghz_p0(),
        )
        .unwrap();
        for r in &records {
            let out = r.output_state.as_ref().unwrap();
            assert_abs_diff_eq!(out.matrix().get(0, 0).re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn w_perfect_copy_branch() {
        // At nu = pi/2 the (j=1, k=1) branch teleports perfectly, with
        // conditional weight 1/(1 + cos^2(theta/2)) and joint weight 1/6.
        for theta in [0.4, 1.1, 2.0, 2.9] {
            let records = run_p0(
                &w_state(3).unwrap(),
                angles(theta, 0.77),
                nu(FRAC_PI_2),
                &CorrectionTable::w_p0(),
            )
            .unwrap();
            let r = &records[0];
            assert_eq!((r.j, r.k), (1, Some(1)));
            assert_abs_diff_eq!(r.fidelity.unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.branch_probability, 1.0 / 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pure_path_matches_dense_path() {
        let table = CorrectionTable::w_p0();
        for (theta, phi, nv) in [
            (0.3, 0.9, 0.2),
            (1.2, 4.4, 1.0),
            (2.8, 5.9, FRAC_PI_2),
            (0.0, 0.0, 0.0),
        ] {
            let a = angles(theta, phi);
            let dense = run_p0(&w_state(3).unwrap(), a, nu(nv), &table).unwrap();
            let pure = run_p0_pure(&w_vector(3).unwrap(), a, nu(nv), &table).unwrap();
            assert_eq!(dense.len(), pure.len());
            for (d, p) in dense.iter().zip(&pure) {
                assert_eq!((d.j, d.k), (p.j, p.k));
                assert_abs_diff_eq!(d.branch_probability, p.branch_probability, epsilon = 1e-12);
                assert_abs_diff_eq!(d.weighted_fidelity, p.weighted_fidelity, epsilon = 1e-12);
                match (d.fidelity, p.fidelity) {
                    (Some(df), Some(pf)) => assert_abs_diff_eq!(df, pf, epsilon = 1e-12),
                    (None, None) => {}
                    other => panic!("degeneracy mismatch {other:?}"),
                }
            }
        }
    }

    #[test]
    fn p1_dense_matches_vector_path() {
        let table = CorrectionTable::w_p1();
        for receiver in [3u32, 4u32] {
            let a = angles(0.9, 1.8);
            let dense = run_p1_dense(&w_state(3).unwrap(), a, receiver, &table).unwrap();
            let fast = run_p1_w(3, a, receiver).unwrap();
            for (d, f) in dense.iter().zip(&fast) {
                assert_abs_diff_eq!(d.branch_probability, f.branch_probability, epsilon = 1e-12);
                assert_abs_diff_eq!(d.weighted_fidelity, f.weighted_fidelity, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn p1_receiver_symmetry() {
        let a = angles(1.3, 0.4);
        let r3 = run_p1_w(3, a, 3).unwrap();
        let r4 = run_p1_w(3, a, 4).unwrap();
        for (x, y) in r3.iter().zip(&r4) {
            assert_abs_diff_eq!(x.fidelity.unwrap(), y.fidelity.unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(x.branch_probability, y.branch_probability, epsilon = 1e-12);
        }
    }

    #[test]
    fn p1_rejects_bad_receiver_and_party_count() {
        let a = angles(1.0, 1.0);
        assert!(matches!(run_p1_w(3, a, 2), Err(Error::Config(_))));
        assert!(matches!(run_p1_w(3, a, 5), Err(Error::Config(_))));
        assert!(matches!(run_p1_w(2, a, 3), Err(Error::Config(_))));
        assert!(matches!(run_p1_w(17, a, 3), Err(Error::Config(_))));
        assert!(matches!(run_p1_ghz(a, 5), Err(Error::Config(_))));
    }

    #[test]
    fn p0_accepts_noisy_resource() {
        let chi = noisy_state(&ghz_state(), Visibility::new(0.6).unwrap()).unwrap();
        let records =
            run_p0(&chi, angles(1.0, 2.0), nu(FRAC_PI_4), &CorrectionTable::ghz_p0()).unwrap();
        let total: f64 = records.iter().map(|r| r.branch_probability).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        for r in &records {
            let f = r.fidelity.unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&f));
        }
    }

    #[test]
    fn table_arity_is_enforced() {
        assert!(run_p0(
            &ghz_state(),
            angles(1.0, 1.0),
            nu(0.5),
            &CorrectionTable::w_p1()
        )
        .is_err());
        assert!(run_p1_w_with_table(3, angles(1.0, 1.0), 3, &CorrectionTable::w_p0()).is_err());
    }

    #[test]
    fn sample_fidelity_is_deterministic() {
        use rand_core::SeedableRng;
        let records = run_p0(
            &ghz_state(),
            angles(1.9, 0.3),
            nu(0.9),
            &CorrectionTable::ghz_p0(),
        )
        .unwrap();
        let mut a = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let mut b = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..40 {
            let fa = sample_fidelity(&records, &mut a).unwrap();
            let fb = sample_fidelity(&records, &mut b).unwrap();
            assert_eq!(fa, fb);
        }
    }
}
