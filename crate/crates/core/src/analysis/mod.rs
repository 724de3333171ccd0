//! Sphere-averaging engines (deterministic quadrature and seeded Monte
//! Carlo), sweep drivers, and the closed-form oracle they are compared
//! against.

pub mod oracle;

use std::f64::consts::TAU;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::measurement::uniform_f64;
use crate::protocols::{
    run_p0, run_p1_ghz_with_table, run_p1_w_with_table, sample_fidelity, CorrectionTable,
    OutcomeRecord,
};
use crate::qmat::DensityOperator;
use crate::states::{ghz_state, noisy_state, w_state, BlochAngles, MeasurementAngle, Visibility};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence. Weights sum to 2.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Normalized quadrature over the unit sphere: Gauss-Legendre in
/// `cos(theta)` crossed with uniform (trapezoidal) azimuth nodes; weights
/// sum to one, so averaging a constant returns it exactly. Exact for
/// integrands that are low-degree polynomials in `cos(theta)` and low
/// harmonics in `phi`, which covers every fidelity curve in this crate.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<(BlochAngles, f64)>,
}

impl SphereQuadrature {
    /// Requires at least 2 nodes on each axis.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return Err(Error::Config(format!(
                "quadrature needs at least 2x2 nodes, got {n_theta}x{n_phi}"
            )));
        }
        let (us, ws) = gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        for (u, w) in us.iter().zip(&ws) {
            let theta = u.clamp(-1.0, 1.0).acos();
            for p in 0..n_phi {
                let phi = TAU * p as f64 / n_phi as f64;
                let angles = BlochAngles::new(theta, phi)?;
                nodes.push((angles, w / 2.0 / n_phi as f64));
            }
        }
        Ok(Self { n_theta, n_phi, nodes })
    }

    /// The default 32x32 grid.
    pub fn default_grid() -> Self {
        Self::new(32, 32).expect("static sizes are valid")
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// Weighted average of `f` over the sphere, summed in fixed node order.
    pub fn average(&self, mut f: impl FnMut(BlochAngles) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for &(angles, weight) in &self.nodes {
            acc += weight * f(angles)?;
        }
        Ok(acc)
    }
}

/// Sphere average of a per-point branch-summed weighted fidelity.
pub fn average_fidelity(
    quad: &SphereQuadrature,
    mut run: impl FnMut(BlochAngles) -> Result<f64>,
) -> Result<f64> {
    quad.average(&mut run)
}

/// Sums the division-free weighted fidelities of a branch list.
pub fn summed_weighted_fidelity(records: &[OutcomeRecord]) -> f64 {
    records.iter().map(|r| r.weighted_fidelity).sum()
}

/// Sphere-averaged fidelity of the measured-accomplice protocol on an
/// arbitrary 3-qubit resource (dense reference path).
pub fn p0_average(
    resource: &DensityOperator,
    nu: MeasurementAngle,
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<f64> {
    quad.average(|angles| Ok(summed_weighted_fidelity(&run_p0(resource, angles, nu, table)?)))
}

/// Sphere-averaged fidelity of the co-receiver protocol over the n-party
/// single-excitation resource.
pub fn p1_w_average(
    n: usize,
    receiver: u32,
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<f64> {
    quad.average(|angles| {
        Ok(summed_weighted_fidelity(&run_p1_w_with_table(n, angles, receiver, table)?))
    })
}

/// Sphere-averaged fidelity of the co-receiver protocol over the GHZ
/// resource.
pub fn p1_ghz_average(
    receiver: u32,
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<f64> {
    quad.average(|angles| {
        Ok(summed_weighted_fidelity(&run_p1_ghz_with_table(angles, receiver, table)?))
    })
}

/// How a report's simulated value was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Deterministic sphere quadrature of the given size.
    Quadrature { n_theta: usize, n_phi: usize },
    /// Seeded Monte Carlo with the given shot count.
    MonteCarlo { shots: u64, seed: u64, std_error: f64 },
    /// A single-point (no averaging) evaluation.
    Pointwise,
}

/// Compact branch view carried by single-point reports.
#[derive(Debug, Clone, Copy)]
pub struct BranchSummary {
    pub j: u8,
    pub k: Option<u8>,
    pub probability: f64,
    pub fidelity: Option<f64>,
}

impl From<&OutcomeRecord> for BranchSummary {
    fn from(r: &OutcomeRecord) -> Self {
        Self { j: r.j, k: r.k, probability: r.branch_probability, fidelity: r.fidelity }
    }
}

/// One simulated average paired with its closed-form counterpart.
#[derive(Debug, Clone)]
pub struct FidelityReport {
    /// Protocol id, e.g. `ghz-p0`, `w-p0`, `w-p1`, `ghz-p1`.
    pub protocol: String,
    /// Swept parameter name: `nu`, `w`, `n`, or `theta`.
    pub param_name: String,
    pub param_value: f64,
    pub simulated: f64,
    pub oracle: Option<f64>,
    pub method: Method,
    pub per_branch: Vec<BranchSummary>,
}

impl FidelityReport {
    /// `|simulated - oracle|` when an oracle value is present.
    pub fn deviation(&self) -> Option<f64> {
        self.oracle.map(|o| (self.simulated - o).abs())
    }
}

/// Which entangled resource the measured-accomplice protocol runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResourceKind {
    Ghz,
    W,
}

impl ResourceKind {
    pub fn id(&self) -> &'static str {
        match self {
            ResourceKind::Ghz => "ghz",
            ResourceKind::W => "w",
        }
    }

    /// The pure 3-qubit resource on labels `[2, 3, 4]`.
    pub fn pure_state(&self) -> DensityOperator {
        match self {
            ResourceKind::Ghz => ghz_state(),
            ResourceKind::W => w_state(3)
                .expect("3 is in range")
                .relabel(vec![2, 3, 4])
                .expect("fresh labels"),
        }
    }

    /// The shipped correction table for the measured-accomplice protocol.
    pub fn p0_table(&self) -> CorrectionTable {
        match self {
            ResourceKind::Ghz => CorrectionTable::ghz_p0(),
            ResourceKind::W => CorrectionTable::w_p0(),
        }
    }
}

/// Measurement-angle sweep of the measured-accomplice protocol, paired with
/// the closed-form averages.
pub fn nu_sweep(
    kind: ResourceKind,
    nus: &[f64],
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<Vec<FidelityReport>> {
    let resource = kind.pure_state();
    let mut out = Vec::with_capacity(nus.len());
    for &nu_val in nus {
        let nu = MeasurementAngle::new(nu_val)?;
        let simulated = p0_average(&resource, nu, table, quad)?;
        let oracle_val = match kind {
            ResourceKind::Ghz => oracle::ghz_average(nu_val)?,
            ResourceKind::W => oracle::w_average(),
        };
        out.push(FidelityReport {
            protocol: format!("{}-p0", kind.id()),
            param_name: "nu".into(),
            param_value: nu_val,
            simulated,
            oracle: Some(oracle_val),
            method: Method::Quadrature { n_theta: quad.n_theta(), n_phi: quad.n_phi() },
            per_branch: Vec::new(),
        });
    }
    Ok(out)
}

/// Visibility sweep of the measured-accomplice protocol over white-noise
/// resources, paired with the closed-form noisy averages.
pub fn noise_sweep(
    kind: ResourceKind,
    nu: MeasurementAngle,
    ws: &[f64],
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<Vec<FidelityReport>> {
    let pure = kind.pure_state();
    let mut out = Vec::with_capacity(ws.len());
    for &w in ws {
        let resource = noisy_state(&pure, Visibility::new(w)?)?;
        let simulated = p0_average(&resource, nu, table, quad)?;
        let oracle_val = match kind {
            ResourceKind::Ghz => oracle::ghz_noisy_average(nu.value(), w)?,
            ResourceKind::W => oracle::w_noisy_average(w)?,
        };
        out.push(FidelityReport {
            protocol: format!("{}-p0", kind.id()),
            param_name: "w".into(),
            param_value: w,
            simulated,
            oracle: Some(oracle_val),
            method: Method::Quadrature { n_theta: quad.n_theta(), n_phi: quad.n_phi() },
            per_branch: Vec::new(),
        });
    }
    Ok(out)
}

/// Party-count sweep of the co-receiver protocol, paired with the
/// closed-form `(n + 4)/(3 n)` averages. Receiver 3 stands in for all
/// receivers, which the receiver-symmetry checks justify.
pub fn n_sweep(
    ns: &[usize],
    table: &CorrectionTable,
    quad: &SphereQuadrature,
) -> Result<Vec<FidelityReport>> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let simulated = p1_w_average(n, 3, table, quad)?;
        out.push(FidelityReport {
            protocol: "w-p1".into(),
            param_name: "n".into(),
            param_value: n as f64,
            simulated,
            oracle: Some(oracle::party_split_average(n)?),
            method: Method::Quadrature { n_theta: quad.n_theta(), n_phi: quad.n_phi() },
            per_branch: Vec::new(),
        });
    }
    Ok(out)
}

/// Polar-angle sweep of the branch-summed fidelity at a single input
/// (azimuth 0), paired with the closed-form summed integrands.
pub fn theta_sweep(
    kind: ResourceKind,
    nu: MeasurementAngle,
    thetas: &[f64],
    table: &CorrectionTable,
) -> Result<Vec<FidelityReport>> {
    let resource = kind.pure_state();
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let angles = BlochAngles::new(theta, 0.0)?;
        let records = run_p0(&resource, angles, nu, table)?;
        let simulated = summed_weighted_fidelity(&records);
        let oracle_val = match kind {
            ResourceKind::Ghz => oracle::ghz_summed_fidelity(theta, nu.value())?,
            ResourceKind::W => oracle::w_summed_fidelity(theta)?,
        };
        out.push(FidelityReport {
            protocol: format!("{}-p0", kind.id()),
            param_name: "theta".into(),
            param_value: theta,
            simulated,
            oracle: Some(oracle_val),
            method: Method::Pointwise,
            per_branch: records.iter().map(BranchSummary::from).collect(),
        });
    }
    Ok(out)
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots: u64,
    pub seed: u64,
}

/// Averages a sampled fidelity over isotropic inputs: per shot, draws
/// `cos(theta)` uniform in `[-1, 1]` and `phi` uniform in `[0, 2 pi)`, then
/// lets `shot` sample one protocol outcome. Deterministic for a given seed.
pub fn monte_carlo_average(
    shots: u64,
    seed: u64,
    mut shot: impl FnMut(BlochAngles, &mut dyn RngCore) -> Result<f64>,
) -> Result<McEstimate> {
    if shots < 1 {
        return Err(Error::Config("Monte Carlo needs at least one shot".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Welford accumulation keeps the variance stable over millions of shots.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..shots {
        let u = 2.0 * uniform_f64(&mut rng) - 1.0;
        let theta = u.clamp(-1.0, 1.0).acos();
        let phi = TAU * uniform_f64(&mut rng);
        let angles = BlochAngles::new(theta, phi)?;
        let value = shot(angles, &mut rng)?;
        let delta = value - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (value - mean);
    }
    let std_error = if shots > 1 {
        (m2 / (shots as f64 - 1.0) / shots as f64).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { mean, std_error, shots, seed })
}

/// Monte Carlo estimate of the measured-accomplice average on a pure
/// resource, via the statevector fast path.
pub fn mc_p0_pure(
    kind: ResourceKind,
    nu: MeasurementAngle,
    table: &CorrectionTable,
    shots: u64,
    seed: u64,
) -> Result<McEstimate> {
    let resource = match kind {
        ResourceKind::Ghz => crate::states::ghz_vector(),
        ResourceKind::W => crate::states::w_vector(3)?,
    };
    monte_carlo_average(shots, seed, |angles, rng| {
        let records = crate::protocols::run_p0_pure(&resource, angles, nu, table)?;
        sample_fidelity(&records, rng)
    })
}

/// Monte Carlo estimate of the measured-accomplice average on an arbitrary
/// (possibly noisy) resource, via the dense path.
pub fn mc_p0_dense(
    resource: &DensityOperator,
    nu: MeasurementAngle,
    table: &CorrectionTable,
    shots: u64,
    seed: u64,
) -> Result<McEstimate> {
    monte_carlo_average(shots, seed, |angles, rng| {
        let records = run_p0(resource, angles, nu, table)?;
        sample_fidelity(&records, rng)
    })
}

/// Monte Carlo estimate of the co-receiver average over the GHZ resource.
pub fn mc_p1_ghz(
    receiver: u32,
    table: &CorrectionTable,
    shots: u64,
    seed: u64,
) -> Result<McEstimate> {
    monte_carlo_average(shots, seed, |angles, rng| {
        let records = run_p1_ghz_with_table(angles, receiver, table)?;
        sample_fidelity(&records, rng)
    })
}

/// Monte Carlo estimate of the co-receiver average over the n-party
/// single-excitation resource.
pub fn mc_p1_w(
    n: usize,
    receiver: u32,
    table: &CorrectionTable,
    shots: u64,
    seed: u64,
) -> Result<McEstimate> {
    monte_carlo_average(shots, seed, |angles, rng| {
        let records = run_p1_w_with_table(n, angles, receiver, table)?;
        sample_fidelity(&records, rng)
    })
}
