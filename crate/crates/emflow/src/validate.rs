//! Self-consistency checks bundling the independent formulations:
//! spectral vs closed-form propagation, the first-order Maxwell system on
//! the assembled fields, the vorticity form of the out-of-plane flux, and
//! the Riemann-Silberstein identities.

use serde::Serialize;

use crate::config::Config;
use crate::emfield::{
    assemble_free, energy_from_fields, poynting_free, poynting_from_fields, vorticity_sz_residual,
};
use crate::polarization::PolarizationSpec;
use crate::propagator::{Propagator, PropagatorVariant};
use crate::riemann_silberstein::{build_rs, maxwell_residual, rs_energy, rs_poynting};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Worst relative deviation observed.
    pub metric: f64,
    pub threshold: f64,
    pub passed: bool,
}

fn check(name: &str, metric: f64, threshold: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        metric,
        threshold,
        passed: metric.is_finite() && metric <= threshold,
    }
}

/// Probe points spread over the near and mid field of the given setup.
fn probes(cfg: &Config) -> Vec<(f64, f64)> {
    let l = cfg.screen_distance;
    // Kept inside the paraxial cone |x|/y <= 0.02 so all backends are
    // comparable.
    vec![
        (0.0, 0.3 * l),
        (0.004 * l, 0.4 * l),
        (-0.012 * l, 0.7 * l),
        (0.018 * l, 0.95 * l),
        (-0.006 * l, l),
    ]
}

/// Run every check for a configuration; the list is non-empty and each
/// entry reports its metric against its threshold.
pub fn run_checks(cfg: &Config) -> Vec<CheckResult> {
    let k = cfg.wavenumber();
    let lambda = cfg.wavelength;
    let exact = Propagator::new(cfg.grating.clone(), k, PropagatorVariant::ModeExact);
    let fresnel = Propagator::new(cfg.grating.clone(), k, PropagatorVariant::FresnelKirchhoff);
    let pol_circ = PolarizationSpec::circular();
    let mut out = Vec::new();

    // Spectral vs closed-form propagation, relative to the incident
    // field scale.
    let mut worst = 0.0f64;
    for &(x, y) in &probes(cfg) {
        let a = exact.propagate(x, y).unwrap();
        let b = fresnel.propagate(x, y).unwrap();
        worst = worst
            .max((a.psi - b.psi).norm())
            .max((a.dpsi_dy - b.dpsi_dy).norm() / k)
            .max((a.dpsi_dx - b.dpsi_dx).norm() / k);
    }
    out.push(check("backend_agreement", worst, 1e-3));

    // Closed-form S and U against the Re[E x H*]/2 definition.
    let mut worst = 0.0f64;
    for &(x, y) in &probes(cfg) {
        let f = fresnel.propagate(x, y).unwrap();
        let st = poynting_free(&f, &pol_circ, k).unwrap();
        let em = assemble_free(&f, &pol_circ, k);
        let s_def = poynting_from_fields(&em);
        let scale = crate::vec3::rnorm(&s_def);
        for c in 0..3 {
            worst = worst.max((st.s[c] - s_def[c]).abs() / scale);
        }
        worst = worst.max((st.u - energy_from_fields(&em)).abs() / energy_from_fields(&em));
    }
    out.push(check("poynting_closed_form", worst, 1e-12));

    // First-order Maxwell system on the exact-mode field.
    let stats = maxwell_residual(
        |x, y| assemble_free(&exact.propagate(x, y).unwrap(), &pol_circ, k),
        (-0.5 * cfg.grating.pitch(), 0.5 * cfg.grating.pitch()),
        (0.04 * cfg.screen_distance, 0.05 * cfg.screen_distance),
        3,
        3,
        k,
        lambda / 400.0,
    );
    out.push(check("maxwell_curl", stats.curl_max, 1e-4));
    out.push(check("maxwell_div", stats.div_max, 1e-4));

    // Out-of-plane flux vs the in-plane vorticity.
    let mut worst = 0.0f64;
    for &(x, y) in &probes(cfg)[..3] {
        let (res, s_norm) = vorticity_sz_residual(
            |x, y| fresnel.propagate(x, y).unwrap(),
            x,
            y,
            &pol_circ,
            k,
            lambda / 200.0,
        );
        worst = worst.max(res / s_norm);
    }
    out.push(check("vorticity_identity", worst, 1e-5));

    // Riemann-Silberstein energy and flux against the field definitions.
    let mut worst = 0.0f64;
    for &(x, y) in &probes(cfg) {
        let em = assemble_free(&fresnel.propagate(x, y).unwrap(), &pol_circ, k);
        let rs = build_rs(&em);
        let u_def = energy_from_fields(&em);
        let s_def = poynting_from_fields(&em);
        worst = worst.max((rs_energy(&rs) - u_def).abs() / u_def);
        let s_rs = rs_poynting(&rs);
        let scale = crate::vec3::rnorm(&s_def);
        for c in 0..3 {
            worst = worst.max((s_rs[c] - s_def[c]).abs() / scale);
        }
    }
    out.push(check("riemann_silberstein", worst, 1e-12));

    out
}
