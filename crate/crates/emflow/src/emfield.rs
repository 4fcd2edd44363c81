//! Vector EM field assembly, time-averaged Poynting vector and EME density.
//!
//! Two scenarios share this module. In the free scenario both slits pass
//! the full polarized wave and the whole field is proportional to one
//! scalar Psi, so the closed-form S and U factorize into a polarization
//! prefactor times a spatial part. In the orthogonal-polarizer scenario
//! slit 1 (at +d/2) feeds the z-axis polarizer (alpha part) and slit 2
//! (at -d/2) the x-axis polarizer (beta part); the energy density then
//! carries no cross term.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{C, EPS_0, MU_0};
use crate::polarization::PolarizationSpec;
use crate::propagator::FieldSample;
use crate::vec3::{cross, re, CVec3, RVec3};

/// Relative nodal threshold: a point counts as nodal when U drops below
/// this fraction of the incident energy density.
pub const NODAL_THRESHOLD_REL: f64 = 1e-14;

/// Phasor E and H at a point, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EMSample {
    pub e: CVec3,
    pub h: CVec3,
}

/// Time-averaged flux, energy density and ray velocity at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    /// Poynting vector, W/m^2.
    pub s: RVec3,
    /// EME density, J/m^3.
    pub u: f64,
    /// Ray velocity ratio S/(cU), dimensionless.
    pub v: RVec3,
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("nodal point: U = {u} below threshold {threshold}")]
    NodalPoint { u: f64, threshold: f64 },
}

/// Incident-region energy density eps0 (alpha^2 + beta^2)/2, the scale for
/// the nodal guard.
pub fn incident_energy_density(pol: &PolarizationSpec) -> f64 {
    0.5 * EPS_0 * pol.amplitude_sqr()
}

fn omega(k: f64) -> f64 {
    C * k
}

/// Free-scenario vector field from one scalar sample:
/// E = (i b/k dPsi/dy, -i b/k dPsi/dx, a Psi),
/// H = (-i a/(w mu0) dPsi/dy, i a/(w mu0) dPsi/dx, k b/(w mu0) Psi),
/// with a = alpha, b = beta e^{i phi}.
pub fn assemble_free(f: &FieldSample, pol: &PolarizationSpec, k: f64) -> EMSample {
    let a = Complex64::new(pol.alpha(), 0.0);
    let b = pol.beta() * pol.phase_factor();
    let i = Complex64::new(0.0, 1.0);
    let wm = omega(k) * MU_0;

    let e = [i * b / k * f.dpsi_dy, -i * b / k * f.dpsi_dx, a * f.psi];
    let h = [
        -i * a / wm * f.dpsi_dy,
        i * a / wm * f.dpsi_dx,
        k * b / wm * f.psi,
    ];
    EMSample { e, h }
}

/// Orthogonal-polarizer field: the alpha part rides psi1, the beta part
/// psi2.
pub fn assemble_polarized(
    f1: &FieldSample,
    f2: &FieldSample,
    pol: &PolarizationSpec,
    k: f64,
) -> EMSample {
    let a = Complex64::new(pol.alpha(), 0.0);
    let b = pol.beta() * pol.phase_factor();
    let i = Complex64::new(0.0, 1.0);
    let wm = omega(k) * MU_0;

    let e = [i * b / k * f2.dpsi_dy, -i * b / k * f2.dpsi_dx, a * f1.psi];
    let h = [
        -i * a / wm * f1.dpsi_dy,
        i * a / wm * f1.dpsi_dx,
        k * b / wm * f2.psi,
    ];
    EMSample { e, h }
}

/// Definition-level Poynting vector Re[E x H*]/2, the oracle for the
/// closed forms below.
pub fn poynting_from_fields(em: &EMSample) -> RVec3 {
    let c = cross(&em.e, &crate::vec3::conj(&em.h));
    let r = re(&c);
    [0.5 * r[0], 0.5 * r[1], 0.5 * r[2]]
}

/// Definition-level EME density (eps0 |E|^2 + mu0 |H|^2)/4.
pub fn energy_from_fields(em: &EMSample) -> f64 {
    0.25 * (EPS_0 * crate::vec3::norm_sqr(&em.e) + MU_0 * crate::vec3::norm_sqr(&em.h))
}

fn flow_state(s: RVec3, u: f64, u0: f64) -> Result<FlowState, FlowError> {
    let threshold = NODAL_THRESHOLD_REL * u0;
    if u < threshold {
        return Err(FlowError::NodalPoint { u, threshold });
    }
    let cu = C * u;
    Ok(FlowState {
        s,
        u,
        v: [s[0] / cu, s[1] / cu, s[2] / cu],
    })
}

/// Closed-form free-scenario flow state. The in-plane flux is
/// (a^2+b^2)/(2 w mu0) Im[Psi* dPsi], the out-of-plane flux carries the
/// a b sin(phi) prefactor, and U is the factorized energy density.
pub fn poynting_free(
    f: &FieldSample,
    pol: &PolarizationSpec,
    k: f64,
) -> Result<FlowState, FlowError> {
    let w = omega(k);
    let amp = pol.amplitude_sqr();
    let a_inplane = amp / (2.0 * w * MU_0);

    let sx = a_inplane * (f.psi.conj() * f.dpsi_dx).im;
    let sy = a_inplane * (f.psi.conj() * f.dpsi_dy).im;
    let sz = pol.alpha() * pol.beta() * pol.phi().sin() / (k * w * MU_0)
        * (f.dpsi_dx * f.dpsi_dy.conj()).im;
    let u = amp / (4.0 * w * w * MU_0)
        * (f.dpsi_dx.norm_sqr() + f.dpsi_dy.norm_sqr() + k * k * f.psi.norm_sqr());

    flow_state([sx, sy, sz], u, incident_energy_density(pol))
}

/// Closed-form polarizer-scenario flow state: per-slit in-plane fluxes add
/// with weights alpha^2 and beta^2; the z flux keeps only cross terms.
pub fn poynting_polarized(
    f1: &FieldSample,
    f2: &FieldSample,
    pol: &PolarizationSpec,
    k: f64,
) -> Result<FlowState, FlowError> {
    let w = omega(k);
    let a2 = pol.alpha() * pol.alpha();
    let b2 = pol.beta() * pol.beta();
    let norm = 1.0 / (2.0 * w * MU_0);

    let sx = norm
        * (a2 * (f1.psi.conj() * f1.dpsi_dx).im + b2 * (f2.psi.conj() * f2.dpsi_dx).im);
    let sy = norm
        * (a2 * (f1.psi.conj() * f1.dpsi_dy).im + b2 * (f2.psi.conj() * f2.dpsi_dy).im);

    let cross_term = f2.dpsi_dy * f1.dpsi_dx.conj() - f2.dpsi_dx * f1.dpsi_dy.conj();
    let sz = pol.alpha() * pol.beta() / (2.0 * k * w * MU_0)
        * (pol.phase_factor() * cross_term).re;

    let u_norm = 1.0 / (4.0 * w * w * MU_0);
    let u1 = a2
        * u_norm
        * (f1.dpsi_dx.norm_sqr() + f1.dpsi_dy.norm_sqr() + k * k * f1.psi.norm_sqr());
    let u2 = b2
        * u_norm
        * (f2.dpsi_dx.norm_sqr() + f2.dpsi_dy.norm_sqr() + k * k * f2.psi.norm_sqr());

    flow_state([sx, sy, sz], u1 + u2, incident_energy_density(pol))
}

/// Split the free-scenario energy density into per-slit and interference
/// parts: U = U1 + U2 + U12.
pub fn decompose_energy(
    f1: &FieldSample,
    f2: &FieldSample,
    pol: &PolarizationSpec,
    k: f64,
) -> (f64, f64, f64) {
    let w = omega(k);
    let norm = pol.amplitude_sqr() / (4.0 * w * w * MU_0);
    let single = |f: &FieldSample| {
        norm * (f.dpsi_dx.norm_sqr() + f.dpsi_dy.norm_sqr() + k * k * f.psi.norm_sqr())
    };
    let u1 = single(f1);
    let u2 = single(f2);
    let u12 = norm
        * 2.0
        * (f1.dpsi_dx * f2.dpsi_dx.conj()
            + f1.dpsi_dy * f2.dpsi_dy.conj()
            + k * k * f1.psi * f2.psi.conj())
            .re;
    (u1, u2, u12)
}

/// Residual of the vorticity identity
/// S_z = -[ab sin(phi) / ((a^2+b^2) k)] (dS_y/dx - dS_x/dy)
/// with the in-plane curl evaluated by central differences of step h.
/// Returns (residual, |S|) at the probe point.
pub fn vorticity_sz_residual<F>(field: F, x: f64, y: f64, pol: &PolarizationSpec, k: f64, h: f64) -> (f64, f64)
where
    F: Fn(f64, f64) -> FieldSample,
{
    let s_at = |x: f64, y: f64| poynting_free(&field(x, y), pol, k).expect("probe off nodal").s;
    let s0 = s_at(x, y);
    let dsy_dx = (s_at(x + h, y)[1] - s_at(x - h, y)[1]) / (2.0 * h);
    let dsx_dy = (s_at(x, y + h)[0] - s_at(x, y - h)[0]) / (2.0 * h);
    let pref = pol.alpha() * pol.beta() * pol.phi().sin() / (pol.amplitude_sqr() * k);
    let residual = (s0[2] + pref * (dsy_dx - dsx_dy)).abs();
    (residual, crate::vec3::rnorm(&s0))
}
