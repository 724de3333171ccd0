//! Named verification battery: structural invariants, probability closure,
//! closed-form equivalence on parameter grids, noise curves, path
//! cross-checks, a correction-table dominance spot check, and seeded Monte
//! Carlo consistency. Every check reports pass/fail with a numeric detail
//! line; the battery never aborts early.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::analysis::{
    gauss_legendre, mc_p0_pure, n_sweep, noise_sweep, oracle, p0_average, p1_ghz_average,
    p1_w_average, summed_weighted_fidelity, ResourceKind, SphereQuadrature,
};
use crate::error::Result;
use crate::measurement::measure;
use crate::protocols::{
    run_p0, run_p0_pure, run_p1_dense, run_p1_ghz_with_table, run_p1_w_with_table,
    CorrectionTable,
};
use crate::qmat::{embed, ComplexMatrix, DensityOperator};
use crate::states::{
    bell_projectors, ghz_state, input_state, noisy_state, nu_projectors, w_state, w_vector,
    BlochAngles, MeasurementAngle, Pauli, Visibility,
};
use crate::tol;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The four correction tables a battery run validates.
#[derive(Debug, Clone)]
pub struct TableSet {
    pub ghz_p0: CorrectionTable,
    pub w_p0: CorrectionTable,
    pub w_p1: CorrectionTable,
    pub ghz_p1: CorrectionTable,
}

impl Default for TableSet {
    fn default() -> Self {
        Self {
            ghz_p0: CorrectionTable::ghz_p0(),
            w_p0: CorrectionTable::w_p0(),
            w_p1: CorrectionTable::w_p1(),
            ghz_p1: CorrectionTable::ghz_p1(),
        }
    }
}

/// Battery configuration. Defaults keep the full run fast while leaving all
/// tolerances at their hard-wired values.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tables: TableSet,
    /// Quadrature used by every averaged check; the 8x8 default is already
    /// exact for these integrands.
    pub quad: SphereQuadrature,
    /// Points per parameter axis for branch-level equivalence grids.
    pub grid: usize,
    /// Seeds for the Monte Carlo consistency checks (one check per seed).
    pub mc_seeds: Vec<u64>,
    pub mc_shots: u64,
    /// Number of random alternative correction tables in the dominance
    /// spot check.
    pub dominance_tables: usize,
    pub dominance_seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tables: TableSet::default(),
            quad: SphereQuadrature::new(8, 8).expect("static sizes are valid"),
            grid: 5,
            mc_seeds: vec![42, 43],
            mc_shots: 20_000,
            dominance_tables: 256,
            dominance_seed: 2718,
        }
    }
}

/// True when every check in the list passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// The next Pauli in the `I -> X -> Y -> Z -> I` cycle; used to corrupt
/// single table rows in mutation tests.
pub fn cycled(p: Pauli) -> Pauli {
    match p {
        Pauli::I => Pauli::X,
        Pauli::X => Pauli::Y,
        Pauli::Y => Pauli::Z,
        Pauli::Z => Pauli::I,
    }
}

fn run_check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match f() {
        Ok((passed, detail)) => CheckResult { name: name.into(), passed, detail },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn within(max_dev: f64, tolerance: f64) -> (bool, String) {
    (
        max_dev <= tolerance,
        format!("max deviation {max_dev:.3e} (tolerance {tolerance:.0e})"),
    )
}

/// Midpoints of `n` equal subdivisions of `[lo, hi]`; stays off both
/// endpoints so no branch degenerates.
fn interior(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Runs the complete battery and returns one result per named check.
pub fn run_battery(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.extend(structural_checks());
    out.extend(closure_checks(&opts.tables));
    out.extend(oracle_battery(&opts.tables, &opts.quad, opts.grid));
    out.extend(party_checks(&opts.tables, &opts.quad, opts.grid));
    out.extend(noise_checks(&opts.tables, &opts.quad));
    out.extend(consistency_checks(&opts.tables, &opts.quad, opts.grid));
    out.push(dominance_check(opts));
    for &seed in &opts.mc_seeds {
        out.push(mc_check(opts, seed));
    }
    out
}

fn structural_checks() -> Vec<CheckResult> {
    vec![
        run_check("bell-projectors-complete", || {
            let set = bell_projectors();
            let mut sum = ComplexMatrix::zeros(4, 4);
            for m in set.outcomes() {
                sum = sum.add(set.projector(m)?);
            }
            Ok(within(sum.max_abs_diff(&ComplexMatrix::identity(4)), tol::EQUALITY))
        }),
        run_check("bell-projectors-orthogonal", || {
            let set = bell_projectors();
            let mut worst: f64 = 0.0;
            for a in set.outcomes() {
                for b in set.outcomes() {
                    let prod = set.projector(a)?.matmul(set.projector(b)?)?;
                    let expect = if a == b {
                        set.projector(a)?.clone()
                    } else {
                        ComplexMatrix::zeros(4, 4)
                    };
                    worst = worst.max(prod.max_abs_diff(&expect));
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("nu-projectors-complete", || {
            let mut worst: f64 = 0.0;
            for nu in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
                let set = nu_projectors(MeasurementAngle::new(nu)?);
                let mut sum = ComplexMatrix::zeros(2, 2);
                for m in set.outcomes() {
                    let p = set.projector(m)?;
                    sum = sum.add(p);
                    worst = worst.max(p.matmul(p)?.max_abs_diff(p));
                }
                worst = worst.max(sum.max_abs_diff(&ComplexMatrix::identity(2)));
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("projector-embedding-idempotent", || {
            let set = bell_projectors();
            let system = [1u32, 2, 3, 4];
            let mut worst: f64 = 0.0;
            for m in set.outcomes() {
                let e = embed(set.projector(m)?, &[1, 2], &system)?;
                worst = worst.max(e.matmul(&e)?.max_abs_diff(&e));
                worst = worst.max(e.hermiticity_defect());
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("constructor-purity", || {
            let mut worst: f64 = 0.0;
            for state in [
                input_state(BlochAngles::new(1.1, 2.2)?),
                ghz_state(),
                w_state(3)?,
                w_state(6)?,
            ] {
                worst = worst.max((state.purity() - 1.0).abs());
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("ghz-reduced-pair", || {
            let reduced = ghz_state().partial_trace(&[3, 4])?;
            let mut expect = ComplexMatrix::zeros(4, 4);
            expect.set(0, 0, real(0.5));
            expect.set(3, 3, real(0.5));
            Ok(within(reduced.matrix().max_abs_diff(&expect), tol::EQUALITY))
        }),
        run_check("w-reduced-pair", || {
            let reduced = w_state(3)?.partial_trace(&[1, 2])?;
            let third = real(1.0 / 3.0);
            let mut expect = ComplexMatrix::zeros(4, 4);
            expect.set(0, 0, third);
            expect.set(1, 1, third);
            expect.set(2, 2, third);
            expect.set(1, 2, third);
            expect.set(2, 1, third);
            Ok(within(reduced.matrix().max_abs_diff(&expect), tol::EQUALITY))
        }),
        run_check("measurement-linearity", || {
            let rho_a = input_state(BlochAngles::new(1.0, 0.5)?)
                .kron(&input_state(BlochAngles::new(2.1, 4.0)?).relabel(vec![2])?)?;
            let rho_b = input_state(BlochAngles::new(0.4, 2.8)?)
                .kron(&input_state(BlochAngles::new(2.9, 1.3)?).relabel(vec![2])?)?;
            let mixed = DensityOperator::new(
                rho_a.matrix().scale(real(0.3)).add(&rho_b.matrix().scale(real(0.7))),
                vec![1, 2],
            )?;
            let set = nu_projectors(MeasurementAngle::new(0.7)?);
            let ma = measure(&rho_a, &set, &[1])?;
            let mb = measure(&rho_b, &set, &[1])?;
            let mm = measure(&mixed, &set, &[1])?;
            let mut worst: f64 = 0.0;
            for i in 0..mm.len() {
                worst = worst.max(
                    (mm[i].probability - 0.3 * ma[i].probability - 0.7 * mb[i].probability).abs(),
                );
                let blend = ma[i]
                    .unnormalized
                    .scale(real(0.3))
                    .add(&mb[i].unnormalized.scale(real(0.7)));
                worst = worst.max(mm[i].unnormalized.max_abs_diff(&blend));
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("measurement-unnormalized-sum", || {
            let w3 = w_state(3)?.relabel(vec![2, 3, 4])?;
            let rho = noisy_state(&w3, Visibility::new(0.7)?)?;
            let branches = measure(&rho, &bell_projectors(), &[2, 3])?;
            let mut sum = ComplexMatrix::zeros(2, 2);
            for b in &branches {
                sum = sum.add(&b.unnormalized);
            }
            let reduced = rho.partial_trace(&[4])?;
            Ok(within(sum.max_abs_diff(reduced.matrix()), tol::EQUALITY))
        }),
        run_check("output-states-valid", || {
            let resource = noisy_state(&ghz_state(), Visibility::new(0.6)?)?;
            let records = run_p0(
                &resource,
                BlochAngles::new(1.3, 2.1)?,
                MeasurementAngle::new(0.9)?,
                &CorrectionTable::ghz_p0(),
            )?;
            let mut worst: f64 = 0.0;
            let mut live = 0usize;
            for r in &records {
                let Some(state) = &r.output_state else { continue };
                live += 1;
                let trace = state.matrix().trace()?;
                worst = worst.max((trace.re - 1.0).abs()).max(trace.im.abs());
                worst = worst.max(state.matrix().hermiticity_defect());
                worst = worst.max((-state.matrix().min_eigenvalue()?).max(0.0));
                let f = r.fidelity.unwrap_or(0.0);
                worst = worst.max((-f).max(f - 1.0).max(0.0));
            }
            let (ok, detail) = within(worst, tol::PSD_SLACK);
            Ok((ok && live == 8, format!("{live} live branches; {detail}")))
        }),
    ]
}

fn closure_checks(tables: &TableSet) -> Vec<CheckResult> {
    let thetas = [0.7, 2.0];
    let phis = [0.9, 5.1];
    let nus = [0.35, 1.1];
    vec![
        run_check("probability-closure-ghz-p0", || {
            let pure = ghz_state();
            let noisy = noisy_state(&pure, Visibility::new(0.5)?)?;
            let mut worst: f64 = 0.0;
            for resource in [&pure, &noisy] {
                for &t in &thetas {
                    for &p in &phis {
                        for &nu in &nus {
                            let records = run_p0(
                                resource,
                                BlochAngles::new(t, p)?,
                                MeasurementAngle::new(nu)?,
                                &tables.ghz_p0,
                            )?;
                            let total: f64 =
                                records.iter().map(|r| r.branch_probability).sum();
                            worst = worst.max((total - 1.0).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::PROB_CLOSURE))
        }),
        run_check("probability-closure-w-p0", || {
            let pure = w_state(3)?.relabel(vec![2, 3, 4])?;
            let noisy = noisy_state(&pure, Visibility::new(0.5)?)?;
            let mut worst: f64 = 0.0;
            for resource in [&pure, &noisy] {
                for &t in &thetas {
                    for &p in &phis {
                        for &nu in &nus {
                            let records = run_p0(
                                resource,
                                BlochAngles::new(t, p)?,
                                MeasurementAngle::new(nu)?,
                                &tables.w_p0,
                            )?;
                            let total: f64 =
                                records.iter().map(|r| r.branch_probability).sum();
                            worst = worst.max((total - 1.0).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::PROB_CLOSURE))
        }),
        run_check("probability-closure-w-p1", || {
            let mut worst: f64 = 0.0;
            for n in [3usize, 7] {
                for receiver in [3u32, n as u32 + 1] {
                    for &t in &thetas {
                        let records = run_p1_w_with_table(
                            n,
                            BlochAngles::new(t, 0.9)?,
                            receiver,
                            &tables.w_p1,
                        )?;
                        let total: f64 = records.iter().map(|r| r.branch_probability).sum();
                        worst = worst.max((total - 1.0).abs());
                    }
                }
            }
            Ok(within(worst, tol::PROB_CLOSURE))
        }),
        run_check("probability-closure-ghz-p1", || {
            let mut worst: f64 = 0.0;
            for receiver in [3u32, 4] {
                for &t in &thetas {
                    let records = run_p1_ghz_with_table(
                        BlochAngles::new(t, 0.9)?,
                        receiver,
                        &tables.ghz_p1,
                    )?;
                    let total: f64 = records.iter().map(|r| r.branch_probability).sum();
                    worst = worst.max((total - 1.0).abs());
                }
            }
            Ok(within(worst, tol::PROB_CLOSURE))
        }),
    ]
}

/// The closed-form equivalence subset: every check here compares the
/// simulation, run with the given tables, against the independent closed
/// forms. This is the battery slice that single-row table corruption must
/// trip.
pub fn oracle_battery(
    tables: &TableSet,
    quad: &SphereQuadrature,
    grid: usize,
) -> Vec<CheckResult> {
    let thetas = interior(grid, 0.0, PI);
    let phis = interior(grid, 0.0, TAU);
    let nus = interior(grid, 0.0, FRAC_PI_2);
    let nu_grid = [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2];

    let ghz = ghz_state();
    let w3 = w_state(3).expect("3 is in range").relabel(vec![2, 3, 4]).expect("fresh labels");

    vec![
        run_check("ghz-bell-probabilities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &ghz,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.ghz_p0,
                        )?;
                        for j in 1..=4u8 {
                            let sum: f64 = records
                                .iter()
                                .filter(|r| r.j == j)
                                .map(|r| r.branch_probability)
                                .sum();
                            worst = worst.max((sum - oracle::ghz_bell_probability(j)?).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("ghz-conditional-probabilities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &ghz,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.ghz_p0,
                        )?;
                        for r in &records {
                            let expect = oracle::ghz_bell_probability(r.j)?
                                * oracle::ghz_conditional_probability(
                                    r.j,
                                    r.k.expect("joint protocol"),
                                    t,
                                    nu,
                                )?;
                            worst = worst.max((r.branch_probability - expect).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("ghz-branch-fidelities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &ghz,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.ghz_p0,
                        )?;
                        for r in &records {
                            let Some(f) = r.fidelity else { continue };
                            let expect = oracle::ghz_branch_fidelity(
                                r.j,
                                r.k.expect("joint protocol"),
                                t,
                                nu,
                            )?;
                            worst = worst.max((f - expect).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("ghz-average-closed-form", || {
            let mut worst: f64 = 0.0;
            for &nu in &nu_grid {
                let avg = p0_average(&ghz, MeasurementAngle::new(nu)?, &tables.ghz_p0, quad)?;
                worst = worst.max((avg - oracle::ghz_average(nu)?).abs());
            }
            Ok(within(worst, tol::AVERAGE))
        }),
        run_check("ghz-perfect-at-balanced-basis", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    let records = run_p0(
                        &ghz,
                        BlochAngles::new(t, p)?,
                        MeasurementAngle::new(FRAC_PI_4)?,
                        &tables.ghz_p0,
                    )?;
                    for r in &records {
                        worst = worst.max((r.fidelity.unwrap_or(0.0) - 1.0).abs());
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("w-bell-probabilities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &w3,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.w_p0,
                        )?;
                        for j in 1..=4u8 {
                            let sum: f64 = records
                                .iter()
                                .filter(|r| r.j == j)
                                .map(|r| r.branch_probability)
                                .sum();
                            worst = worst.max((sum - oracle::w_bell_probability(j, t)?).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("w-conditional-probabilities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &w3,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.w_p0,
                        )?;
                        for r in &records {
                            let k = r.k.expect("joint protocol");
                            let expect = oracle::w_bell_probability(r.j, t)?
                                * oracle::w_conditional_probability(r.j, k, t, p, nu)?;
                            worst = worst.max((r.branch_probability - expect).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("w-branch-fidelities", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for &p in &phis {
                    for &nu in &nus {
                        let records = run_p0(
                            &w3,
                            BlochAngles::new(t, p)?,
                            MeasurementAngle::new(nu)?,
                            &tables.w_p0,
                        )?;
                        for r in &records {
                            let Some(f) = r.fidelity else { continue };
                            let k = r.k.expect("joint protocol");
                            let expect = oracle::w_branch_fidelity(r.j, k, t, p, nu)?;
                            worst = worst.max((f - expect).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("w-average-nu-independent", || {
            let mut values = Vec::new();
            let mut worst: f64 = 0.0;
            for &nu in &nu_grid {
                let avg = p0_average(&w3, MeasurementAngle::new(nu)?, &tables.w_p0, quad)?;
                worst = worst.max((avg - oracle::w_average()).abs());
                values.push(avg);
            }
            let spread = values.iter().cloned().fold(f64::MIN, f64::max)
                - values.iter().cloned().fold(f64::MAX, f64::min);
            let (ok, detail) = within(worst.max(spread), tol::AVERAGE);
            Ok((ok, format!("nu spread {spread:.3e}; {detail}")))
        }),
        run_check("w-split-fidelities", || {
            let mut worst: f64 = 0.0;
            for receiver in [3u32, 4] {
                for &t in &thetas {
                    for &p in &phis {
                        let records = run_p1_w_with_table(
                            3,
                            BlochAngles::new(t, p)?,
                            receiver,
                            &tables.w_p1,
                        )?;
                        for r in &records {
                            worst = worst.max(
                                (r.branch_probability - oracle::w_bell_probability(r.j, t)?)
                                    .abs(),
                            );
                            let Some(f) = r.fidelity else { continue };
                            worst =
                                worst.max((f - oracle::w_split_fidelity(r.j, t)?).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("w-split-average", || {
            let mut worst: f64 = 0.0;
            for receiver in [3u32, 4] {
                let avg = p1_w_average(3, receiver, &tables.w_p1, quad)?;
                worst = worst.max((avg - oracle::w_split_average()).abs());
            }
            Ok(within(worst, tol::AVERAGE))
        }),
        run_check("ghz-split-average", || {
            let mut worst: f64 = 0.0;
            for receiver in [3u32, 4] {
                let avg = p1_ghz_average(receiver, &tables.ghz_p1, quad)?;
                worst = worst.max((avg - oracle::ghz_split_average()).abs());
            }
            Ok(within(worst, tol::AVERAGE))
        }),
    ]
}

fn party_checks(tables: &TableSet, quad: &SphereQuadrature, grid: usize) -> Vec<CheckResult> {
    let thetas = interior(grid, 0.0, PI);
    let all_n: Vec<usize> = (3..=10).collect();
    vec![
        run_check("n-party-probabilities", || {
            let mut worst: f64 = 0.0;
            for n in [3usize, 5, 9] {
                for &t in &thetas {
                    let records =
                        run_p1_w_with_table(n, BlochAngles::new(t, 1.1)?, 3, &tables.w_p1)?;
                    for r in &records {
                        let expect = oracle::party_bell_probability(r.j, t, n)?;
                        worst = worst.max((r.branch_probability - expect).abs());
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("n-party-fidelities", || {
            let mut worst: f64 = 0.0;
            for n in [3usize, 5, 9] {
                for &t in &thetas {
                    let records =
                        run_p1_w_with_table(n, BlochAngles::new(t, 1.1)?, 3, &tables.w_p1)?;
                    for r in &records {
                        let Some(f) = r.fidelity else { continue };
                        worst =
                            worst.max((f - oracle::party_split_fidelity(r.j, t, n)?).abs());
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("n-sweep-closed-form", || {
            let reports = n_sweep(&all_n, &tables.w_p1, quad)?;
            let worst = reports
                .iter()
                .filter_map(|r| r.deviation())
                .fold(0.0f64, f64::max);
            Ok(within(worst, tol::AVERAGE))
        }),
        run_check("n-sweep-classical-crossover", || {
            let reports = n_sweep(&all_n, &tables.w_p1, quad)?;
            let values: Vec<f64> = reports.iter().map(|r| r.simulated).collect();
            let above_at_3 = values[0] > 2.0 / 3.0 + 1e-3;
            let below_from_4 = values[1..].iter().all(|&v| v <= 2.0 / 3.0 + tol::EQUALITY);
            let decreasing = values.windows(2).all(|w| w[1] < w[0]);
            Ok((
                above_at_3 && below_from_4 && decreasing,
                format!(
                    "3 parties {:.6}, 4 parties {:.6}, 10 parties {:.6}",
                    values[0], values[1], values[7]
                ),
            ))
        }),
    ]
}

fn noise_checks(tables: &TableSet, quad: &SphereQuadrature) -> Vec<CheckResult> {
    let ws = [0.0, 0.25, 0.5, 0.75, 1.0];
    vec![
        run_check("w-noise-curve", || {
            let reports = noise_sweep(
                ResourceKind::W,
                MeasurementAngle::new(0.6)?,
                &ws,
                &tables.w_p0,
                quad,
            )?;
            let worst = reports
                .iter()
                .filter_map(|r| r.deviation())
                .fold(0.0f64, f64::max);
            Ok(within(worst, tol::AVERAGE))
        }),
        run_check("ghz-noise-curve", || {
            let mut worst: f64 = 0.0;
            for nu in [0.0, FRAC_PI_8, FRAC_PI_4] {
                let reports = noise_sweep(
                    ResourceKind::Ghz,
                    MeasurementAngle::new(nu)?,
                    &ws,
                    &tables.ghz_p0,
                    quad,
                )?;
                worst = reports
                    .iter()
                    .filter_map(|r| r.deviation())
                    .fold(worst, f64::max);
            }
            Ok(within(worst, tol::AVERAGE))
        }),
        run_check("noise-affine", || {
            let mut worst: f64 = 0.0;
            for (kind, nu, table) in [
                (ResourceKind::W, 0.6, &tables.w_p0),
                (ResourceKind::Ghz, FRAC_PI_4, &tables.ghz_p0),
            ] {
                let reports =
                    noise_sweep(kind, MeasurementAngle::new(nu)?, &ws, table, quad)?;
                let f0 = reports[0].simulated;
                let f1 = reports[4].simulated;
                for r in &reports {
                    let affine = f0 + (f1 - f0) * r.param_value;
                    worst = worst.max((r.simulated - affine).abs());
                }
            }
            Ok(within(worst, 1e-10))
        }),
        run_check("noise-slope-ordering", || {
            let slope = |nu: f64| -> Result<f64> {
                let reports = noise_sweep(
                    ResourceKind::Ghz,
                    MeasurementAngle::new(nu)?,
                    &[0.0, 1.0],
                    &tables.ghz_p0,
                    quad,
                )?;
                Ok(reports[1].simulated - reports[0].simulated)
            };
            let steep = slope(FRAC_PI_4)?;
            let shallow = slope(0.0)?;
            Ok((
                steep.abs() > shallow.abs() + 0.1,
                format!("slope {steep:.6} at the balanced angle vs {shallow:.6} at zero"),
            ))
        }),
    ]
}

fn consistency_checks(
    tables: &TableSet,
    quad: &SphereQuadrature,
    grid: usize,
) -> Vec<CheckResult> {
    let thetas = interior(grid, 0.0, PI);
    vec![
        run_check("perfect-copy-branch", || {
            let w3 = w_state(3)?.relabel(vec![2, 3, 4])?;
            let nu = MeasurementAngle::new(FRAC_PI_2)?;
            let mut worst: f64 = 0.0;
            for &t in &interior(10, 0.0, PI) {
                let records = run_p0(&w3, BlochAngles::new(t, 0.8)?, nu, &tables.w_p0)?;
                let first = records
                    .iter()
                    .find(|r| r.j == 1 && r.k == Some(1))
                    .expect("branch (1, 1) is always present");
                worst = worst.max((first.fidelity.unwrap_or(0.0) - 1.0).abs());
                let c2 = (t / 2.0).cos().powi(2);
                let expect = (1.0 + c2) / 6.0 / (1.0 + c2);
                worst = worst.max((first.branch_probability - expect).abs());
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("quadrature-convergence", || {
            let coarse = SphereQuadrature::new(8, 8)?;
            let fine = SphereQuadrature::new(16, 16)?;
            let ghz = ghz_state();
            let w3 = w_state(3)?.relabel(vec![2, 3, 4])?;
            let nu_g = MeasurementAngle::new(FRAC_PI_8)?;
            let nu_w = MeasurementAngle::new(0.45)?;
            let dg = (p0_average(&ghz, nu_g, &tables.ghz_p0, &coarse)?
                - p0_average(&ghz, nu_g, &tables.ghz_p0, &fine)?)
            .abs();
            let dw = (p0_average(&w3, nu_w, &tables.w_p0, &coarse)?
                - p0_average(&w3, nu_w, &tables.w_p0, &fine)?)
            .abs();
            Ok(within(dg.max(dw), 1e-10))
        }),
        run_check("phi-independence", || {
            let ghz = ghz_state();
            let nu = MeasurementAngle::new(0.55)?;
            let full = p0_average(&ghz, nu, &tables.ghz_p0, quad)?;
            let (us, gws) = gauss_legendre(16);
            let mut fixed = 0.0;
            for (u, gw) in us.iter().zip(&gws) {
                let angles = BlochAngles::new(u.clamp(-1.0, 1.0).acos(), 0.0)?;
                let records = run_p0(&ghz, angles, nu, &tables.ghz_p0)?;
                fixed += gw / 2.0 * summed_weighted_fidelity(&records);
            }
            let mut worst = (full - fixed).abs();

            let w3 = w_state(3)?.relabel(vec![2, 3, 4])?;
            let nu_w = MeasurementAngle::new(0.7)?;
            for t in [0.9, 2.1] {
                let mut values = Vec::new();
                for p in [0.0, 1.0, 2.5, 4.0, 5.5] {
                    let records = run_p0(&w3, BlochAngles::new(t, p)?, nu_w, &tables.w_p0)?;
                    values.push(summed_weighted_fidelity(&records));
                }
                let spread = values.iter().cloned().fold(f64::MIN, f64::max)
                    - values.iter().cloned().fold(f64::MAX, f64::min);
                worst = worst.max(spread);
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("statevector-matches-dense", || {
            let mut worst: f64 = 0.0;
            let cases = [
                (0.6, 1.2, 0.4),
                (1.8, 4.9, 1.25),
                (2.8, 0.1, 0.02),
                (0.0, 0.0, 0.0),
            ];
            for (kind, table) in
                [(ResourceKind::Ghz, &tables.ghz_p0), (ResourceKind::W, &tables.w_p0)]
            {
                let dense_res = kind.pure_state();
                let vec_res = match kind {
                    ResourceKind::Ghz => crate::states::ghz_vector(),
                    ResourceKind::W => w_vector(3)?,
                };
                for &(t, p, nu) in &cases {
                    let angles = BlochAngles::new(t, p)?;
                    let m = MeasurementAngle::new(nu)?;
                    let dense = run_p0(&dense_res, angles, m, table)?;
                    let pure = run_p0_pure(&vec_res, angles, m, table)?;
                    for (d, v) in dense.iter().zip(&pure) {
                        worst = worst.max((d.branch_probability - v.branch_probability).abs());
                        worst = worst.max((d.weighted_fidelity - v.weighted_fidelity).abs());
                        if let (Some(a), Some(b)) = (d.fidelity, v.fidelity) {
                            worst = worst.max((a - b).abs());
                        }
                    }
                }
            }
            for &t in &thetas {
                let angles = BlochAngles::new(t, 2.3)?;
                let dense = run_p1_dense(&w_state(3)?, angles, 3, &tables.w_p1)?;
                let fast = run_p1_w_with_table(3, angles, 3, &tables.w_p1)?;
                for (d, v) in dense.iter().zip(&fast) {
                    worst = worst.max((d.branch_probability - v.branch_probability).abs());
                    worst = worst.max((d.weighted_fidelity - v.weighted_fidelity).abs());
                }
                let dense_g = run_p1_dense(&ghz_state(), angles, 4, &tables.ghz_p1)?;
                let fast_g = run_p1_ghz_with_table(angles, 4, &tables.ghz_p1)?;
                for (d, v) in dense_g.iter().zip(&fast_g) {
                    worst = worst.max((d.branch_probability - v.branch_probability).abs());
                    worst = worst.max((d.weighted_fidelity - v.weighted_fidelity).abs());
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
        run_check("receiver-symmetry", || {
            let mut worst: f64 = 0.0;
            for &t in &thetas {
                for p in [0.4, 3.6] {
                    let angles = BlochAngles::new(t, p)?;
                    let base = run_p1_w_with_table(3, angles, 3, &tables.w_p1)?;
                    let other = run_p1_w_with_table(3, angles, 4, &tables.w_p1)?;
                    for (a, b) in base.iter().zip(&other) {
                        worst = worst.max((a.branch_probability - b.branch_probability).abs());
                        worst = worst.max((a.weighted_fidelity - b.weighted_fidelity).abs());
                    }
                    let five = run_p1_w_with_table(5, angles, 3, &tables.w_p1)?;
                    for receiver in 4u32..=6 {
                        let alt = run_p1_w_with_table(5, angles, receiver, &tables.w_p1)?;
                        for (a, b) in five.iter().zip(&alt) {
                            worst =
                                worst.max((a.weighted_fidelity - b.weighted_fidelity).abs());
                        }
                    }
                }
            }
            Ok(within(worst, tol::EQUALITY))
        }),
    ]
}

fn dominance_check(opts: &VerifyOptions) -> CheckResult {
    run_check("table-dominance", || {
        let resource = w_vector(3)?;
        let nu = MeasurementAngle::new(0.63)?;
        let average = |table: &CorrectionTable| -> Result<f64> {
            opts.quad.average(|angles| {
                Ok(summed_weighted_fidelity(&run_p0_pure(&resource, angles, nu, table)?))
            })
        };
        let shipped = average(&opts.tables.w_p0)?;
        let mut rng = ChaCha12Rng::seed_from_u64(opts.dominance_seed);
        let mut best_rival = f64::MIN;
        for _ in 0..opts.dominance_tables {
            let mut candidate = opts.tables.w_p0.clone();
            for j in 1..=4u8 {
                for k in 1..=2u8 {
                    let pauli = Pauli::ALL[(rng.next_u64() % 4) as usize];
                    candidate = candidate.with_row((j, Some(k)), pauli)?;
                }
            }
            best_rival = best_rival.max(average(&candidate)?);
        }
        Ok((
            shipped + tol::EQUALITY >= best_rival,
            format!(
                "shipped average {shipped:.9}, best of {} random tables {best_rival:.9}",
                opts.dominance_tables
            ),
        ))
    })
}

fn mc_check(opts: &VerifyOptions, seed: u64) -> CheckResult {
    run_check(&format!("mc-consistency-seed-{seed}"), || {
        let nu_g = MeasurementAngle::new(FRAC_PI_8)?;
        let nu_w = MeasurementAngle::new(0.9)?;
        let ghz_target =
            p0_average(&ghz_state(), nu_g, &opts.tables.ghz_p0, &opts.quad)?;
        let w3 = w_state(3)?.relabel(vec![2, 3, 4])?;
        let w_target = p0_average(&w3, nu_w, &opts.tables.w_p0, &opts.quad)?;
        let ge = mc_p0_pure(ResourceKind::Ghz, nu_g, &opts.tables.ghz_p0, opts.mc_shots, seed)?;
        let we = mc_p0_pure(ResourceKind::W, nu_w, &opts.tables.w_p0, opts.mc_shots, seed)?;
        let g_ok = (ge.mean - ghz_target).abs() <= 4.0 * ge.std_error + tol::EQUALITY;
        let w_ok = (we.mean - w_target).abs() <= 4.0 * we.std_error + tol::EQUALITY;
        Ok((
            g_ok && w_ok,
            format!(
                "ghz |{:.6} - {:.6}| vs 4se {:.6}; w |{:.6} - {:.6}| vs 4se {:.6}",
                ge.mean,
                ghz_target,
                4.0 * ge.std_error,
                we.mean,
                w_target,
                4.0 * we.std_error
            ),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_options() -> VerifyOptions {
        VerifyOptions {
            quad: SphereQuadrature::new(8, 4).unwrap(),
            grid: 3,
            mc_seeds: vec![42],
            mc_shots: 4000,
            dominance_tables: 24,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn battery_passes_on_shipped_tables() {
        let results = run_battery(&small_options());
        assert!(results.len() >= 25, "only {} checks", results.len());
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert!(
            failed.is_empty(),
            "failing checks: {:?}",
            failed.iter().map(|r| (&r.name, &r.detail)).collect::<Vec<_>>()
        );
        assert!(all_passed(&results));
    }

    #[test]
    fn check_names_are_unique() {
        let results = run_battery(&small_options());
        let mut names: Vec<&str> = results.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
    }

    #[test]
    fn corrupting_two_rows_drops_the_w_average() {
        let mut tables = TableSet::default();
        tables.w_p0 = tables
            .w_p0
            .with_row((1, Some(1)), Pauli::I)
            .unwrap()
            .with_row((1, Some(2)), Pauli::I)
            .unwrap();
        let quad = SphereQuadrature::new(8, 4).unwrap();
        let results = oracle_battery(&tables, &quad, 3);
        let avg_check = results.iter().find(|r| r.name == "w-average-nu-independent").unwrap();
        assert!(!avg_check.passed, "corrupted table must fail: {}", avg_check.detail);
        let fid_check = results.iter().find(|r| r.name == "w-branch-fidelities").unwrap();
        assert!(!fid_check.passed);
    }

    #[test]
    fn single_row_mutations_are_detected() {
        // One representative row per table; the exhaustive 20-row sweep
        // lives in the acceptance suite.
        let quad = SphereQuadrature::new(8, 4).unwrap();
        let shipped = TableSet::default();
        for (which, key) in [(0usize, (2u8, Some(1u8))), (1, (3, Some(2))), (2, (4, None))] {
            let mut tables = shipped.clone();
            let target = match which {
                0 => &mut tables.ghz_p0,
                1 => &mut tables.w_p0,
                _ => &mut tables.w_p1,
            };
            let old = target
                .rows()
                .into_iter()
                .find(|(k, _)| *k == key)
                .expect("row exists")
                .1;
            *target = target.with_row(key, cycled(old)).unwrap();
            let results = oracle_battery(&tables, &quad, 3);
            assert!(
                results.iter().any(|r| !r.passed),
                "mutation at {key:?} in table {which} went undetected"
            );
        }
    }

    #[test]
    fn cycled_visits_all_paulis() {
        let mut p = Pauli::I;
        let mut seen = vec![p];
        for _ in 0..3 {
            p = cycled(p);
            seen.push(p);
        }
        seen.sort_by_key(|p| format!("{p:?}"));
        seen.dedup();
        assert_eq!(seen.len(), 4);
        assert_eq!(cycled(Pauli::Z), Pauli::I);
    }
}
