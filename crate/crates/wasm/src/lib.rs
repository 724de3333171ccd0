//! Browser bindings for the teleportation demo page. The `api` module is
//! plain Rust returning JSON strings, so it runs and tests on any host;
//! the wasm-bindgen exports at the bottom compile only for wasm32 and
//! forward to it, folding errors into an `{"error": ...}` payload.

pub mod api {
    use std::f64::consts::FRAC_PI_2;
    use std::fmt::Write;

    use qteleport::analysis::{oracle, p0_average, summed_weighted_fidelity, ResourceKind, SphereQuadrature};
    use qteleport::protocols::{run_p0, sample_index, OutcomeRecord};
    use qteleport::states::noisy_state;
    use qteleport::{BlochAngles, Error, MeasurementAngle, Result, Visibility};
    use rand_chacha::ChaCha12Rng;
    use rand_core::SeedableRng;

    const MAX_CURVE_STEPS: usize = 513;
    const MAX_SHOTS: u32 = 200_000;

    fn parse_resource(resource: &str) -> Result<ResourceKind> {
        match resource {
            "ghz" => Ok(ResourceKind::Ghz),
            "w" => Ok(ResourceKind::W),
            other => Err(Error::Config(format!("unknown resource `{other}`"))),
        }
    }

    /// Finite f64 as a JSON number; Display is shortest round-trip.
    fn num(x: f64) -> String {
        format!("{x}")
    }

    /// JSON error payload with the message as an escaped string.
    pub fn error_json(message: &str) -> String {
        let mut escaped = String::with_capacity(message.len());
        for ch in message.chars() {
            match ch {
                '"' => escaped.push_str("\\\""),
                '\\' => escaped.push_str("\\\\"),
                c if (c as u32) < 0x20 => {
                    let _ = write!(escaped, "\\u{:04x}", c as u32);
                }
                c => escaped.push(c),
            }
        }
        format!("{{\"error\":\"{escaped}\"}}")
    }

    fn branch_json(r: &OutcomeRecord) -> String {
        let k = r.k.map_or("null".to_string(), |k| k.to_string());
        let fid = r.fidelity.map_or("null".to_string(), num);
        format!(
            "{{\"j\":{},\"k\":{},\"probability\":{},\"fidelity\":{}}}",
            r.j,
            k,
            num(r.branch_probability),
            fid
        )
    }

    /// Sphere-averaged fidelity of the direct protocol against the
    /// accomplice angle, swept over `[0, pi/2]`, at the given channel
    /// visibility. Each point carries the simulated quadrature value and
    /// the closed-form prediction.
    pub fn fidelity_curve(resource: &str, steps: usize, visibility: f64) -> Result<String> {
        let kind = parse_resource(resource)?;
        if !(2..=MAX_CURVE_STEPS).contains(&steps) {
            return Err(Error::Config(format!("steps must sit inside 2..={MAX_CURVE_STEPS}")));
        }
        let vis = Visibility::new(visibility)?;
        let state = noisy_state(&kind.pure_state(), vis)?;
        let table = kind.p0_table();
        let quad = SphereQuadrature::new(8, 8)?;

        let mut points = Vec::with_capacity(steps);
        for i in 0..steps {
            let nu_val = FRAC_PI_2 * i as f64 / (steps - 1) as f64;
            let nu = MeasurementAngle::new(nu_val)?;
            let simulated = p0_average(&state, nu, &table, &quad)?;
            let oracle_value = match kind {
                ResourceKind::Ghz => oracle::ghz_noisy_average(nu_val, visibility)?,
                ResourceKind::W => oracle::w_noisy_average(visibility)?,
            };
            points.push(format!(
                "{{\"nu\":{},\"simulated\":{},\"oracle\":{}}}",
                num(nu_val),
                num(simulated),
                num(oracle_value)
            ));
        }
        Ok(format!(
            "{{\"resource\":\"{}\",\"visibility\":{},\"classical_bound\":{},\"points\":[{}]}}",
            kind.id(),
            num(visibility),
            num(2.0 / 3.0),
            points.join(",")
        ))
    }

    /// Exact per-outcome table of the direct protocol on the pure
    /// resource: joint probability and conditional fidelity for every
    /// (Bell outcome, accomplice outcome) pair, plus the input-state
    /// average over outcomes.
    pub fn branch_table(resource: &str, theta: f64, phi: f64, nu: f64) -> Result<String> {
        let kind = parse_resource(resource)?;
        let angles = BlochAngles::new(theta, phi)?;
        let nu = MeasurementAngle::new(nu)?;
        let records = run_p0(&kind.pure_state(), angles, nu, &kind.p0_table())?;
        let summed = summed_weighted_fidelity(&records);
        let rows: Vec<String> = records.iter().map(branch_json).collect();
        Ok(format!(
            "{{\"resource\":\"{}\",\"branches\":[{}],\"summed_fidelity\":{}}}",
            kind.id(),
            rows.join(","),
            num(summed)
        ))
    }

    /// Seeded shot-by-shot simulation of the direct protocol. Counts per
    /// outcome pair sit next to the exact probabilities, and the sampled
    /// mean fidelity next to the exact outcome average.
    pub fn sample_histogram(
        resource: &str,
        theta: f64,
        phi: f64,
        nu: f64,
        shots: u32,
        seed: u32,
    ) -> Result<String> {
        let kind = parse_resource(resource)?;
        if shots == 0 || shots > MAX_SHOTS {
            return Err(Error::Config(format!("shots must sit inside 1..={MAX_SHOTS}")));
        }
        let angles = BlochAngles::new(theta, phi)?;
        let nu = MeasurementAngle::new(nu)?;
        let records = run_p0(&kind.pure_state(), angles, nu, &kind.p0_table())?;

        let mut rng = ChaCha12Rng::seed_from_u64(u64::from(seed));
        let mut counts = vec![0u32; records.len()];
        let mut fidelity_sum = 0.0;
        for _ in 0..shots {
            let i = sample_index(&records, &mut rng)?;
            counts[i] += 1;
            fidelity_sum += records[i]
                .fidelity
                .ok_or_else(|| Error::Sampling("sampled branch has no fidelity".into()))?;
        }

        let rows: Vec<String> = records
            .iter()
            .zip(&counts)
            .map(|(r, &count)| {
                let k = r.k.map_or("null".to_string(), |k| k.to_string());
                format!(
                    "{{\"j\":{},\"k\":{},\"count\":{},\"observed\":{},\"expected\":{}}}",
                    r.j,
                    k,
                    count,
                    num(f64::from(count) / f64::from(shots)),
                    num(r.branch_probability)
                )
            })
            .collect();
        Ok(format!(
            "{{\"resource\":\"{}\",\"shots\":{},\"seed\":{},\"mean_fidelity\":{},\"expected_mean\":{},\"counts\":[{}]}}",
            kind.id(),
            shots,
            seed,
            num(fidelity_sum / f64::from(shots)),
            num(summed_weighted_fidelity(&records)),
            rows.join(",")
        ))
    }
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::wasm_bindgen;

    fn or_error(result: qteleport::Result<String>) -> String {
        result.unwrap_or_else(|e| crate::api::error_json(&e.to_string()))
    }

    #[wasm_bindgen]
    pub fn fidelity_curve(resource: &str, steps: u32, visibility: f64) -> String {
        or_error(crate::api::fidelity_curve(resource, steps as usize, visibility))
    }

    #[wasm_bindgen]
    pub fn branch_table(resource: &str, theta: f64, phi: f64, nu: f64) -> String {
        or_error(crate::api::branch_table(resource, theta, phi, nu))
    }

    #[wasm_bindgen]
    pub fn sample_histogram(
        resource: &str,
        theta: f64,
        phi: f64,
        nu: f64,
        shots: u32,
        seed: u32,
    ) -> String {
        or_error(crate::api::sample_histogram(resource, theta, phi, nu, shots, seed))
    }
}
