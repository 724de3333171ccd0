//! Closed-form expressions for every analytic quantity the simulator
//! reproduces, coded directly from the algebra rather than through the
//! density-operator pipeline, so the two paths check each other.
//!
//! Naming: "conditional probability" is the accomplice-outcome weight given
//! the Bell outcome; "branch fidelity" is the receiver overlap conditioned
//! on both outcomes; "split" refers to the co-receiver protocol where the
//! input is shared among parties; "party" variants generalize to n-qubit
//! single-excitation resources.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tol;

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta {theta} outside [0, pi]")));
    }
    Ok(())
}

fn check_phi(phi: f64) -> Result<()> {
    if !phi.is_finite() || !(0.0..TAU).contains(&phi) {
        return Err(Error::Domain(format!("phi {phi} outside [0, 2*pi)")));
    }
    Ok(())
}

fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() || !(0.0..=FRAC_PI_2).contains(&nu) {
        return Err(Error::Domain(format!("nu {nu} outside [0, pi/2]")));
    }
    Ok(())
}

fn check_w(w: f64) -> Result<()> {
    if !w.is_finite() || !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("visibility {w} outside [0, 1]")));
    }
    Ok(())
}

fn check_j(j: u8) -> Result<()> {
    if !(1..=4).contains(&j) {
        return Err(Error::Domain(format!("Bell outcome j must be 1..4, got {j}")));
    }
    Ok(())
}

fn check_k(k: u8) -> Result<()> {
    if !(1..=2).contains(&k) {
        return Err(Error::Domain(format!("basis outcome k must be 1..2, got {k}")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("party count must be at least 2, got {n}")));
    }
    Ok(())
}

fn halves(theta: f64) -> (f64, f64) {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    (c * c, s * s)
}

/// Bell-outcome probability over the GHZ resource: flat 1/4.
pub fn ghz_bell_probability(j: u8) -> Result<f64> {
    check_j(j)?;
    Ok(0.25)
}

/// Accomplice-outcome weight over the GHZ resource, given Bell outcome `j`.
pub fn ghz_conditional_probability(j: u8, k: u8, theta: f64, nu: f64) -> Result<f64> {
    check_j(j)?;
    check_k(k)?;
    check_theta(theta)?;
    check_nu(nu)?;
    let (c2, s2) = halves(theta);
    let sn2 = nu.sin() * nu.sin();
    let cn2 = nu.cos() * nu.cos();
    // Outcomes pair up: (1,1), (2,1), (3,2), (4,2) share one expression and
    // the complementary four the other.
    let first = matches!((j, k), (1, 1) | (2, 1) | (3, 2) | (4, 2));
    Ok(if first { c2 * sn2 + s2 * cn2 } else { c2 * cn2 + s2 * sn2 })
}

/// Receiver fidelity over the GHZ resource, conditioned on both outcomes.
pub fn ghz_branch_fidelity(j: u8, k: u8, theta: f64, nu: f64) -> Result<f64> {
    check_j(j)?;
    check_k(k)?;
    check_theta(theta)?;
    check_nu(nu)?;
    let (c2, s2) = halves(theta);
    let sn = nu.sin();
    let cn = nu.cos();
    let first = matches!((j, k), (1, 1) | (2, 1) | (3, 2) | (4, 2));
    let num = if first { c2 * sn + s2 * cn } else { c2 * cn + s2 * sn };
    let den = ghz_conditional_probability(j, k, theta, nu)?;
    if den <= tol::DEGENERATE_PROB {
        return Err(Error::Domain(
            "branch fidelity undefined where the branch probability vanishes".into(),
        ));
    }
    Ok(num * num / den)
}

/// Branch-summed fidelity at fixed input angles over the GHZ resource
/// (independent of the azimuth).
pub fn ghz_summed_fidelity(theta: f64, nu: f64) -> Result<f64> {
    check_theta(theta)?;
    check_nu(nu)?;
    let (c2, s2) = halves(theta);
    let sn = nu.sin();
    let cn = nu.cos();
    let a = c2 * sn + s2 * cn;
    let b = c2 * cn + s2 * sn;
    Ok(a * a + b * b)
}

/// Sphere-averaged fidelity over the GHZ resource with a measured
/// accomplice: `2/3 + sin(2 nu)/3`.
pub fn ghz_average(nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(2.0 / 3.0 + (2.0 * nu).sin() / 3.0)
}

/// Bell-outcome probability over the three-party single-excitation
/// resource.
pub fn w_bell_probability(j: u8, theta: f64) -> Result<f64> {
    party_bell_probability(j, theta, 3)
}

/// Accomplice-outcome weight over the three-party single-excitation
/// resource, given Bell outcome `j`.
pub fn w_conditional_probability(j: u8, k: u8, theta: f64, phi: f64, nu: f64) -> Result<f64> {
    check_j(j)?;
    check_k(k)?;
    check_theta(theta)?;
    check_phi(phi)?;
    check_nu(nu)?;
    let (c2, s2) = halves(theta);
    let cross = theta.sin() * phi.cos() * (2.0 * nu).sin();
    let tilt = (2.0 * nu).cos();
    // Numerators follow one pattern; j in {1, 2} carries cos^2(theta/2) in
    // the shared term and sin^2(theta/2) on the tilt, j in {3, 4} swaps
    // them. The two signs depend on (j, k) as laid out below.
    let (shared, tilted) = if j <= 2 { (c2, s2) } else { (s2, c2) };
    let tilt_sign = if k == 1 { -1.0 } else { 1.0 };
    let cross_sign = if (j % 2 == 1) == (k == 1) { 1.0 } else { -1.0 };
    let num = 1.0 + shared + tilt_sign * tilted * tilt + cross_sign * cross;
    Ok(num / (2.0 * (1.0 + shared)))
}

/// Receiver fidelity over the three-party single-excitation resource,
/// conditioned on both outcomes.
pub fn w_branch_fidelity(j: u8, k: u8, theta: f64, phi: f64, nu: f64) -> Result<f64> {
    check_j(j)?;
    check_k(k)?;
    check_theta(theta)?;
    check_phi(phi)?;
    check_nu(nu)?;
    let st = theta.sin();
    let cross = st * phi.cos() * (2.0 * nu).sin();
    let sn2 = nu.sin() * nu.sin();
    let cn2 = nu.cos() * nu.cos();
    // Positive cross term for odd j with k=1 and even j with k=2, matching
    // the sign pattern of the conditional weights.
    let cross_sign = if (j % 2 == 1) == (k == 1) { 1.0 } else { -1.0 };
    let num = if k == 1 {
        0.5 * st * st * cn2 + cross_sign * cross + 2.0 * sn2
    } else {
        2.0 * cn2 + cross_sign * cross + 0.5 * st * st * sn2
    };
    let (c2, s2) = halves(theta);
    let shared = if j <= 2 { c2 } else { s2 };
    let den = 2.0 * (1.0 + shared) * w_conditional_probability(j, k, theta, phi, nu)?;
    if den <= tol::DEGENERATE_PROB {
        return Err(Error::Domain(
            "branch fidelity undefined where the branch probability vanishes".into(),
        ));
    }
    Ok(num / den)
}

/// Branch-summed fidelity at fixed input angles over the three-party
/// single-excitation resource: `(2/3)(1 + cos^2(theta/2) sin^2(theta/2))`,
/// independent of azimuth and measurement angle.
pub fn w_summed_fidelity(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let (c2, s2) = halves(theta);
    Ok(2.0 / 3.0 * (1.0 + c2 * s2))
}

/// Sphere-averaged fidelity over the three-party single-excitation resource
/// with a measured accomplice: 7/9 for every measurement angle.
pub fn w_average() -> f64 {
    7.0 / 9.0
}

/// Co-receiver fidelity over the three-party single-excitation resource,
/// conditioned on the Bell outcome (same value for either receiver).
pub fn w_split_fidelity(j: u8, theta: f64) -> Result<f64> {
    party_split_fidelity(j, theta, 3)
}

/// Sphere-averaged co-receiver fidelity over the three-party
/// single-excitation resource: 7/9.
pub fn w_split_average() -> f64 {
    7.0 / 9.0
}

/// Sphere-averaged co-receiver fidelity over the GHZ resource: 2/3.
pub fn ghz_split_average() -> f64 {
    2.0 / 3.0
}

/// Bell-outcome probability over the n-party single-excitation resource.
pub fn party_bell_probability(j: u8, theta: f64, n: usize) -> Result<f64> {
    check_j(j)?;
    check_theta(theta)?;
    check_n(n)?;
    let (c2, s2) = halves(theta);
    let lead = if j <= 2 { c2 } else { s2 };
    Ok((1.0 + (n as f64 - 2.0) * lead) / (2.0 * n as f64))
}

/// Co-receiver fidelity over the n-party single-excitation resource,
/// conditioned on the Bell outcome.
pub fn party_split_fidelity(j: u8, theta: f64, n: usize) -> Result<f64> {
    check_j(j)?;
    check_theta(theta)?;
    check_n(n)?;
    let (c2, s2) = halves(theta);
    let lead = if j <= 2 { c2 } else { s2 };
    let m = n as f64 - 2.0;
    Ok((1.0 + m * c2 * s2) / (1.0 + m * lead))
}

/// Sphere-averaged co-receiver fidelity over the n-party single-excitation
/// resource: `(n + 4)/(3 n)`.
pub fn party_split_average(n: usize) -> Result<f64> {
    check_n(n)?;
    Ok((n as f64 + 4.0) / (3.0 * n as f64))
}

/// Sphere-averaged fidelity over the white-noise GHZ resource, as the
/// three-term affine expression in `(1 - w)`.
pub fn ghz_noisy_average(nu: f64, w: f64) -> Result<f64> {
    check_nu(nu)?;
    check_w(w)?;
    let lift = (1.0 + 2.0 * (2.0 * nu).sin()) / 6.0;
    Ok(0.5 + lift - lift * (1.0 - w))
}

/// Sphere-averaged fidelity over the white-noise three-party
/// single-excitation resource: `7/9 - (5/18)(1 - w)`.
pub fn w_noisy_average(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(7.0 / 9.0 - 5.0 / 18.0 * (1.0 - w))
}

/// String-keyed access to every closed form, for interfaces that take a
/// formula id at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    GhzBellProbability,
    GhzConditionalProbability,
    GhzBranchFidelity,
    GhzSummedFidelity,
    GhzAverage,
    WBellProbability,
    WConditionalProbability,
    WBranchFidelity,
    WSummedFidelity,
    WAverage,
    WSplitFidelity,
    WSplitAverage,
    GhzSplitAverage,
    PartyBellProbability,
    PartySplitFidelity,
    PartySplitAverage,
    GhzNoisyAverage,
    WNoisyAverage,
}

impl Formula {
    pub const ALL: [Formula; 18] = [
        Formula::GhzBellProbability,
        Formula::GhzConditionalProbability,
        Formula::GhzBranchFidelity,
        Formula::GhzSummedFidelity,
        Formula::GhzAverage,
        Formula::WBellProbability,
        Formula::WConditionalProbability,
        Formula::WBranchFidelity,
        Formula::WSummedFidelity,
        Formula::WAverage,
        Formula::WSplitFidelity,
        Formula::WSplitAverage,
        Formula::GhzSplitAverage,
        Formula::PartyBellProbability,
        Formula::PartySplitFidelity,
        Formula::PartySplitAverage,
        Formula::GhzNoisyAverage,
        Formula::WNoisyAverage,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Formula::GhzBellProbability => "ghz-bell-probability",
            Formula::GhzConditionalProbability => "ghz-conditional-probability",
            Formula::GhzBranchFidelity => "ghz-branch-fidelity",
            Formula::GhzSummedFidelity => "ghz-summed-fidelity",
            Formula::GhzAverage => "ghz-average",
            Formula::WBellProbability => "w-bell-probability",
            Formula::WConditionalProbability => "w-conditional-probability",
            Formula::WBranchFidelity => "w-branch-fidelity",
            Formula::WSummedFidelity => "w-summed-fidelity",
            Formula::WAverage => "w-average",
            Formula::WSplitFidelity => "w-split-fidelity",
            Formula::WSplitAverage => "w-split-average",
            Formula::GhzSplitAverage => "ghz-split-average",
            Formula::PartyBellProbability => "party-bell-probability",
            Formula::PartySplitFidelity => "party-split-fidelity",
            Formula::PartySplitAverage => "party-split-average",
            Formula::GhzNoisyAverage => "ghz-noisy-average",
            Formula::WNoisyAverage => "w-noisy-average",
        }
    }

    /// Evaluates the formula; missing or out-of-domain parameters are
    /// configuration/domain errors.
    pub fn evaluate(&self, p: &FormulaParams) -> Result<f64> {
        match self {
            Formula::GhzBellProbability => ghz_bell_probability(p.j()?),
            Formula::GhzConditionalProbability => {
                ghz_conditional_probability(p.j()?, p.k()?, p.theta()?, p.nu()?)
            }
            Formula::GhzBranchFidelity => ghz_branch_fidelity(p.j()?, p.k()?, p.theta()?, p.nu()?),
            Formula::GhzSummedFidelity => ghz_summed_fidelity(p.theta()?, p.nu()?),
            Formula::GhzAverage => ghz_average(p.nu()?),
            Formula::WBellProbability => w_bell_probability(p.j()?, p.theta()?),
            Formula::WConditionalProbability => {
                w_conditional_probability(p.j()?, p.k()?, p.theta()?, p.phi()?, p.nu()?)
            }
            Formula::WBranchFidelity => {
                w_branch_fidelity(p.j()?, p.k()?, p.theta()?, p.phi()?, p.nu()?)
            }
            Formula::WSummedFidelity => w_summed_fidelity(p.theta()?),
            Formula::WAverage => Ok(w_average()),
            Formula::WSplitFidelity => w_split_fidelity(p.j()?, p.theta()?),
            Formula::WSplitAverage => Ok(w_split_average()),
            Formula::GhzSplitAverage => Ok(ghz_split_average()),
            Formula::PartyBellProbability => party_bell_probability(p.j()?, p.theta()?, p.n()?),
            Formula::PartySplitFidelity => party_split_fidelity(p.j()?, p.theta()?, p.n()?),
            Formula::PartySplitAverage => party_split_average(p.n()?),
            Formula::GhzNoisyAverage => ghz_noisy_average(p.nu()?, p.w()?),
            Formula::WNoisyAverage => w_noisy_average(p.w()?),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL
            .iter()
            .find(|f| f.id() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown formula id {s:?}")))
    }
}

/// Optional parameter bag for [`Formula::evaluate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct FormulaParams {
    pub j: Option<u8>,
    pub k: Option<u8>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub nu: Option<f64>,
    pub w: Option<f64>,
    pub n: Option<usize>,
}

macro_rules! required {
    ($name:ident, $ty:ty) => {
        fn $name(&self) -> Result<$ty> {
            self.$name
                .ok_or_else(|| Error::Config(concat!("formula needs parameter `", stringify!($name), "`").into()))
        }
    };
}

impl FormulaParams {
    required!(j, u8);
    required!(k, u8);
    required!(theta, f64);
    required!(phi, f64);
    required!(nu, f64);
    required!(w, f64);
    required!(n, usize);
}
