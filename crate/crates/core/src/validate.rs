//! Built-in oracle and invariant suite behind `sim validate`: each check
//! reruns one of the cross-validation arguments (composition against the
//! direct integrator, Bessel diffraction, Dirac-limit agreement, preset
//! structure) and reports pass/fail.

use num_complex::Complex64;

use crate::config::{resolve_config, ConfigPair};
use crate::error::Result;
use crate::fields::{gaussian_spinor, GridSpec, LatticeField, SpinorField};
use crate::lattice::{
    build_binary_lattice, decode_lattice_intensity, encode_spinor_to_lattice, lattice_evolve,
    lattice_evolve_many, GradientSign, LatticeMethod, SublatticeOrdering,
};
use crate::observables::{
    evolve_component_intensities, first_minimum, oscillation_amplitude,
    pseudo_energy_of_intensities, total_variation, Evolver, EvolverParams,
};
use crate::relativistic::{
    decomposed_norm, dirac_evolve, majorana_evolve_composed, majorana_evolve_reference,
    DimensionlessParams, MassSign,
};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// J_n(4) for n = 0..=14; the β = 0 single-site diffraction pattern at
/// κZ = 2 is J_{k−k0}(4)² on the infinite lattice.
#[allow(clippy::excessive_precision)]
const BESSEL_J4: [f64; 15] = [
    -0.39714980986384737,
    -0.066043328023549136,
    0.3641281458520728,
    0.43017147387562194,
    0.28112906496136011,
    0.13208665604709827,
    0.049087575156385574,
    0.015176069422058451,
    0.0040286678208190037,
    0.00093860186121756405,
    0.00019504055466003451,
    3.6600912082608494e-5,
    6.2644617943122075e-6,
    9.8585868326475082e-7,
    1.4361964690867287e-7,
];

fn random_state(n: usize, seed: u64) -> SpinorField {
    // Small deterministic LCG; good enough to produce generic states.
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let comp1: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
    let comp2: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
    SpinorField::new(comp1, comp2)
        .expect("finite")
        .normalize()
        .expect("nonzero")
}

fn max_amplitude_dev(a: &SpinorField, b: &SpinorField) -> f64 {
    a.comp1()
        .iter()
        .zip(b.comp1())
        .chain(a.comp2().iter().zip(b.comp2()))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn preset_cfg(name: &str) -> crate::config::ExperimentConfig {
    resolve_config(&[ConfigPair::flag("preset", name)])
        .expect("preset resolves")
        .0
}

fn preset_packet(cfg: &crate::config::ExperimentConfig) -> (SpinorField, GridSpec) {
    let grid = cfg.grid().expect("valid");
    let psi = gaussian_spinor(
        grid,
        cfg.n0,
        cfg.sigma,
        0.0,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
    .expect("valid packet");
    (psi, grid)
}

fn composition_theorem() -> Result<CheckResult> {
    let grid = GridSpec::periodic(64)?;
    let mut worst = 0.0f64;
    for (i, &mu) in [0.0, 0.65, 1.2].iter().enumerate() {
        for (j, &zeta) in [0.5, 2.0, 5.0].iter().enumerate() {
            for s in 0..3u64 {
                let psi = random_state(64, 1 + s + 10 * (i as u64 * 3 + j as u64));
                let params = DimensionlessParams::new(mu, zeta)?;
                let composed = majorana_evolve_composed(&psi, params, grid)?;
                let reference = majorana_evolve_reference(&psi, params, grid, 1e-3)?;
                worst = worst.max(max_amplitude_dev(&composed, &reference));
            }
        }
    }
    Ok(check(
        "composition vs direct integration",
        worst <= 1e-8,
        format!("max amplitude deviation {worst:.3e} (bound 1e-8)"),
    ))
}

fn rest_state_laws() -> Result<CheckResult> {
    let n = 16;
    let grid = GridSpec::periodic(n)?;
    let amp = 1.0 / (n as f64).sqrt();
    let psi = SpinorField::new(
        vec![Complex64::new(amp, 0.0); n],
        vec![Complex64::new(0.0, 0.0); n],
    )?;
    let mu = 0.65;
    let mut worst_maj = 0.0f64;
    let mut worst_dir = 0.0f64;
    for i in 0..=100 {
        let zeta = i as f64 * 0.05;
        let params = DimensionlessParams::new(mu, zeta)?;
        let maj = majorana_evolve_composed(&psi, params, grid)?;
        let (i1, i2) = maj.component_intensities();
        let pe = pseudo_energy_of_intensities(&i1, &i2);
        worst_maj = worst_maj.max((pe - (2.0 * mu * zeta).cos()).abs());
        let dir = dirac_evolve(&psi, MassSign::Plus, params, grid)?;
        let (i1, i2) = dir.component_intensities();
        worst_dir = worst_dir.max((pseudo_energy_of_intensities(&i1, &i2) - 1.0).abs());
    }
    Ok(check(
        "rest-state pseudo-energy laws",
        worst_maj <= 1e-9 && worst_dir <= 1e-10,
        format!("majoranon dev {worst_maj:.3e} (1e-9), dirac dev {worst_dir:.3e} (1e-10)"),
    ))
}

fn unitarity() -> Result<CheckResult> {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["lowmass", "highmass"] {
        let cfg = preset_cfg(name);
        let (psi, grid) = preset_packet(&cfg);
        let zeta = *cfg.measurement_zetas.last().expect("preset has zetas");
        let params = DimensionlessParams::new(cfg.mu, zeta)?;

        let dir = dirac_evolve(&psi, MassSign::Plus, params, grid)?;
        let drift_dirac = (dir.total_intensity() - 1.0).abs();
        let composed = majorana_evolve_composed(&psi, params, grid)?;
        let drift_comp = (decomposed_norm(&composed) - decomposed_norm(&psi)).abs();
        let reference = majorana_evolve_reference(&psi, params, grid, 1e-3)?;
        let drift_ref = (decomposed_norm(&reference) - decomposed_norm(&psi)).abs();

        let lat = build_binary_lattice(
            2 * cfg.n_cells,
            cfg.kappa_per_mm,
            cfg.mu * cfg.kappa_per_mm,
            SublatticeOrdering::Ab,
        )?;
        let enc = encode_spinor_to_lattice(&psi, GradientSign::Plus);
        let z = zeta / cfg.kappa_per_mm;
        let eig = lattice_evolve(&lat, &enc, z, LatticeMethod::Eigen)?;
        let drift_eig = (eig.total_intensity() - 1.0).abs();
        let rk4 = lattice_evolve(&lat, &enc, z, LatticeMethod::Rk4)?;
        let drift_rk4 = (rk4.total_intensity() - 1.0).abs();

        ok &= drift_dirac <= 1e-10
            && drift_comp <= 1e-10
            && drift_eig <= 1e-10
            && drift_ref <= 1e-6
            && drift_rk4 <= 1e-6;
        details.push(format!(
            "{name}: dirac {drift_dirac:.1e}, composed {drift_comp:.1e}, eigen {drift_eig:.1e} \
             (1e-10); reference {drift_ref:.1e}, rk4 {drift_rk4:.1e} (1e-6)"
        ));
    }
    Ok(check("norm conservation", ok, details.join("; ")))
}

fn lattice_oracle() -> Result<CheckResult> {
    // Two-site coupler against cos².
    let kappa = 0.064;
    let lat2 = build_binary_lattice(2, kappa, 0.0, SublatticeOrdering::Ab)?;
    let f0 = LatticeField::single_site(2, 1)?;
    let mut worst_cos = 0.0f64;
    for i in 0..=20 {
        let z = i as f64 * 4.0;
        let out = lattice_evolve(&lat2, &f0, z, LatticeMethod::Eigen)?;
        worst_cos = worst_cos.max((out.amps()[0].norm_sqr() - (kappa * z).cos().powi(2)).abs());
    }

    // Single-site diffraction against the frozen Bessel values and a wide
    // reference array.
    let z = 2.0 / kappa;
    let small = lattice_evolve(
        &build_binary_lattice(41, kappa, 0.0, SublatticeOrdering::Ab)?,
        &LatticeField::single_site(41, 21)?,
        z,
        LatticeMethod::Eigen,
    )?;
    let wide = lattice_evolve(
        &build_binary_lattice(401, kappa, 0.0, SublatticeOrdering::Ab)?,
        &LatticeField::single_site(401, 201)?,
        z,
        LatticeMethod::Eigen,
    )?;
    let mut worst_bessel = 0.0f64;
    let mut worst_wide = 0.0f64;
    for k in 1..=41usize {
        let measured = small.amps()[k - 1].norm_sqr();
        let order = (k as i64 - 21).unsigned_abs() as usize;
        let expected = if order < BESSEL_J4.len() {
            BESSEL_J4[order] * BESSEL_J4[order]
        } else {
            0.0
        };
        worst_bessel = worst_bessel.max((measured - expected).abs());
        worst_wide = worst_wide.max((measured - wide.amps()[k + 179].norm_sqr()).abs());
    }
    Ok(check(
        "lattice oracle (coupler, Bessel diffraction)",
        worst_cos <= 1e-10 && worst_bessel <= 1e-6 && worst_wide <= 1e-6,
        format!(
            "cos² dev {worst_cos:.3e} (1e-10), Bessel dev {worst_bessel:.3e}, wide-array dev \
             {worst_wide:.3e} (1e-6)"
        ),
    ))
}

fn dirac_limit() -> Result<CheckResult> {
    let n = 32;
    let grid = GridSpec::periodic(n)?;
    let psi = gaussian_spinor(
        grid,
        n as f64 / 2.0 + 0.5,
        4.0,
        0.0,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )?;
    let kappa = 0.064;
    let mu = 0.65;
    let lat = build_binary_lattice(2 * n, kappa, mu * kappa, SublatticeOrdering::Ab)?;
    let enc = encode_spinor_to_lattice(&psi, GradientSign::Plus);
    let zetas = [0.55, 1.1, 2.2, 3.3, 4.4];
    let z_mm: Vec<f64> = zetas.iter().map(|z| z / kappa).collect();
    let fields = lattice_evolve_many(&lat, &enc, &z_mm, LatticeMethod::Eigen)?;
    let mut worst = 0.0f64;
    for (&zeta, field) in zetas.iter().zip(&fields) {
        let (i1, i2) = decode_lattice_intensity(field)?;
        let lattice_side: Vec<f64> = i1.into_iter().chain(i2).collect();
        let params = DimensionlessParams::new(mu, zeta)?;
        let dir = dirac_evolve(&psi, MassSign::Plus, params, grid)?;
        let (d1, d2) = dir.component_intensities();
        let dirac_side: Vec<f64> = d1.into_iter().chain(d2).collect();
        worst = worst.max(total_variation(&lattice_side, &dirac_side));
    }
    Ok(check(
        "lattice simulates the Dirac equation",
        worst <= 0.05,
        format!("worst total variation {worst:.4} (bound 0.05)"),
    ))
}

fn preset_structure() -> Result<CheckResult> {
    let mut ok = true;
    let mut details = Vec::new();
    let mut widths = Vec::new();
    for name in ["lowmass", "highmass"] {
        let cfg = preset_cfg(name);
        let (psi, grid) = preset_packet(&cfg);
        let params = EvolverParams::new(cfg.mu, cfg.kappa_per_mm);
        let intensities = evolve_component_intensities(
            Evolver::MajoranaComposed,
            params,
            &psi,
            grid,
            &cfg.measurement_zetas,
        )?;
        let pes: Vec<f64> = intensities
            .iter()
            .map(|(i1, i2)| pseudo_energy_of_intensities(i1, i2))
            .collect();
        let rms: Vec<f64> = intensities
            .iter()
            .map(|(i1, i2)| {
                let total: Vec<f64> = i1.iter().zip(i2).map(|(a, b)| a + b).collect();
                weighted_rms(&total)
            })
            .collect();
        match name {
            "lowmass" => {
                ok &= pes.iter().all(|&p| p > 0.0) && rms[1] > rms[0];
                details.push(format!(
                    "lowmass pe {:+.3}/{:+.3} (>0), rms {:.2}->{:.2} (spreading)",
                    pes[0], pes[1], rms[0], rms[1]
                ));
            }
            _ => {
                ok &= pes.iter().all(|&p| p < 0.0);
                details.push(format!("highmass pe {:+.3}/{:+.3} (<0)", pes[0], pes[1]));
            }
        }
        widths.push(rms[1]);
    }
    ok &= widths[0] > widths[1];
    details.push(format!(
        "late-length spreading {:.2} (lowmass) > {:.2} (highmass)",
        widths[0], widths[1]
    ));
    Ok(check(
        "preset measurement structure",
        ok,
        details.join("; "),
    ))
}

fn weighted_rms(w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    let mean: f64 = w
        .iter()
        .enumerate()
        .map(|(i, wi)| (i + 1) as f64 * wi)
        .sum::<f64>()
        / total;
    (w.iter()
        .enumerate()
        .map(|(i, wi)| {
            let d = (i + 1) as f64 - mean;
            d * d * wi
        })
        .sum::<f64>()
        / total)
        .sqrt()
}

fn pseudo_energy_curve(
    cfg: &crate::config::ExperimentConfig,
    evolver: Evolver,
) -> Result<Vec<f64>> {
    let (psi, grid) = preset_packet(cfg);
    let zetas: Vec<f64> = (0..=500).map(|i| i as f64 * 0.01).collect();
    let params = EvolverParams::new(cfg.mu, cfg.kappa_per_mm);
    let intensities = evolve_component_intensities(evolver, params, &psi, grid, &zetas)?;
    Ok(intensities
        .iter()
        .map(|(i1, i2)| pseudo_energy_of_intensities(i1, i2))
        .collect())
}

fn mass_comparison() -> Result<Vec<CheckResult>> {
    let low = preset_cfg("lowmass");
    let high = preset_cfg("highmass");
    let dirac_low = pseudo_energy_curve(&low, Evolver::Dirac(MassSign::Plus))?;
    let dirac_high = pseudo_energy_curve(&high, Evolver::Dirac(MassSign::Plus))?;
    let maj_low = pseudo_energy_curve(&low, Evolver::MajoranaComposed)?;
    let maj_high = pseudo_energy_curve(&high, Evolver::MajoranaComposed)?;

    let da_low = oscillation_amplitude(&dirac_low);
    let da_high = oscillation_amplitude(&dirac_high);
    let ma_low = oscillation_amplitude(&maj_low);
    let ma_high = oscillation_amplitude(&maj_high);
    let rel = (ma_high - ma_low).abs() / ma_low;

    let zetas: Vec<f64> = (0..=500).map(|i| i as f64 * 0.01).collect();
    let min_low = first_minimum(&zetas, &maj_low);
    let min_high = first_minimum(&zetas, &maj_high);
    let minima_ok = matches!((min_low, min_high), (Some(a), Some(b)) if b < a);

    Ok(vec![
        check(
            "dirac oscillation shrinks with mass",
            da_high < da_low,
            format!("amplitude {da_low:.4} -> {da_high:.4}"),
        ),
        check(
            "majoranon amplitude within 10% between presets",
            rel < 0.10,
            format!("amplitude {ma_low:.4} vs {ma_high:.4}, relative difference {rel:.4}"),
        ),
        check(
            "majoranon first minimum moves earlier",
            minima_ok,
            format!("first minimum {min_low:?} -> {min_high:?}"),
        ),
    ])
}

fn device_end_to_end() -> Result<CheckResult> {
    let mut ok = true;
    let mut details = Vec::new();
    for (name, zeta) in [("lowmass", 0.55), ("highmass", 0.9)] {
        let cfg = preset_cfg(name);
        let (psi, grid) = preset_packet(&cfg);
        let kappa = cfg.kappa_per_mm;
        let beta = cfg.mu * kappa;
        let upper = build_binary_lattice(2 * cfg.n_cells, kappa, beta, SublatticeOrdering::Ab)?;
        let lower = build_binary_lattice(2 * cfg.n_cells, kappa, beta, SublatticeOrdering::Ba)?;
        let spec = crate::device::DeviceSpec::new(
            upper,
            lower,
            zeta / kappa,
            0.0,
            std::f64::consts::FRAC_PI_4,
            cfg.segmentation_step_mm,
            cfg.sigma,
        )?;
        let out = crate::device::simulate_device(&spec, &psi)?;
        let device_side: Vec<f64> = out
            .decoded_comp1
            .iter()
            .chain(&out.decoded_comp2)
            .cloned()
            .collect();
        let params = DimensionlessParams::new(cfg.mu, zeta)?;
        let composed = majorana_evolve_composed(&psi, params, grid)?;
        let (i1, i2) = composed.component_intensities();
        let spinor_side: Vec<f64> = i1.into_iter().chain(i2).collect();
        let tv = total_variation(&device_side, &spinor_side);

        let in_total =
            out.plane_input_upper.total_intensity() + out.plane_input_lower.total_intensity();
        let out_total: f64 = out.upper_site_intensities.iter().sum::<f64>()
            + out.lower_site_intensities.iter().sum::<f64>();
        let drift = (out_total - in_total).abs();

        ok &= tv <= 0.08 && drift <= 1e-10;
        details.push(format!(
            "{name}: TV {tv:.4} (0.08), conservation drift {drift:.1e}"
        ));
    }
    Ok(check("device end to end", ok, details.join("; ")))
}

fn convergence_order() -> Result<CheckResult> {
    let grid = GridSpec::periodic(32)?;
    let psi = random_state(32, 99);
    let params = DimensionlessParams::new(0.65, 1.0)?;
    let h = 0.02;
    let fine = majorana_evolve_reference(&psi, params, grid, h / 4.0)?;
    let coarse = majorana_evolve_reference(&psi, params, grid, h)?;
    let half = majorana_evolve_reference(&psi, params, grid, h / 2.0)?;
    let e_coarse = max_amplitude_dev(&coarse, &fine);
    let e_half = max_amplitude_dev(&half, &fine);
    let ratio = e_coarse / e_half;
    Ok(check(
        "4th-order step convergence",
        ratio >= 12.0,
        format!("error ratio {ratio:.1} per step halving (bound 12)"),
    ))
}

fn determinism() -> Result<CheckResult> {
    let cfg = preset_cfg("lowmass");
    let dir = std::env::temp_dir().join("majsim-validate-determinism");
    let _ = std::fs::remove_dir_all(&dir);
    crate::run::run_experiment(&cfg, &dir.join("a"))?;
    crate::run::run_experiment(&cfg, &dir.join("b"))?;
    let a = std::fs::read(dir.join("a").join("pseudo_energy.csv"))?;
    let b = std::fs::read(dir.join("b").join("pseudo_energy.csv"))?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(check(
        "repeated runs are bit-identical",
        a == b,
        format!("{} bytes compared", a.len()),
    ))
}

/// Run every check; the returned list is stable in order and content.
pub fn run_all_checks() -> Result<Vec<CheckResult>> {
    let mut results = vec![
        composition_theorem()?,
        rest_state_laws()?,
        unitarity()?,
        lattice_oracle()?,
        dirac_limit()?,
        preset_structure()?,
    ];
    results.extend(mass_comparison()?);
    results.push(device_end_to_end()?);
    results.push(convergence_order()?);
    results.push(determinism()?);
    Ok(results)
}
