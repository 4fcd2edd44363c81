//! Incident polarized plane wave: state classification, handedness and
//! ideal linear polarizers.
//!
//! The incident field superposes a z-polarized electric component of
//! amplitude `alpha` and an x-polarized one of amplitude `beta`, with a
//! phase shift `phi` between them. Handedness follows the convention of an
//! observer toward whom the wave is moving: with alpha, beta > 0 the state
//! is right-handed for -pi < phi < 0 and left-handed for 0 < phi < pi.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::admittance;
use crate::vec3::CVec3;

#[derive(Debug, Error, PartialEq)]
pub enum PolarizationError {
    #[error("amplitudes must satisfy alpha^2 + beta^2 > 0")]
    ZeroAmplitude,
    #[error("amplitudes must be non-negative (alpha = {alpha}, beta = {beta})")]
    NegativeAmplitude { alpha: f64, beta: f64 },
}

/// Amplitudes and relative phase of the incident plane wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationSpec {
    alpha: f64,
    beta: f64,
    phi: f64,
}

impl PolarizationSpec {
    pub fn new(alpha: f64, beta: f64, phi: f64) -> Result<Self, PolarizationError> {
        if alpha < 0.0 || beta < 0.0 {
            return Err(PolarizationError::NegativeAmplitude { alpha, beta });
        }
        if alpha * alpha + beta * beta <= 0.0 {
            return Err(PolarizationError::ZeroAmplitude);
        }
        Ok(Self {
            alpha,
            beta,
            phi: normalize_phase(phi),
        })
    }

    /// alpha = beta, phi = 0.
    pub fn linear() -> Self {
        Self::new(1.0, 1.0, 0.0).unwrap()
    }

    /// alpha = beta, phi = pi/2 (left-handed circular).
    pub fn circular() -> Self {
        Self::new(1.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// exp(i phi)
    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }

    /// alpha^2 + beta^2
    pub fn amplitude_sqr(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    /// The prefactor 2*alpha*beta*sin(phi)/(alpha^2 + beta^2) carrying all
    /// polarization dependence of the out-of-plane flow. Bounded by 1 in
    /// magnitude for every valid spec.
    pub fn out_of_plane_prefactor(&self) -> f64 {
        2.0 * self.alpha * self.beta * self.phi.sin() / self.amplitude_sqr()
    }
}

/// Wrap into (-pi, pi].
fn normalize_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut p = phi % two_pi;
    if p <= -std::f64::consts::PI {
        p += two_pi;
    } else if p > std::f64::consts::PI {
        p -= two_pi;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizationKind {
    Linear,
    Circular,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Right,
    Left,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarizationClass {
    pub kind: PolarizationKind,
    pub handedness: Handedness,
}

/// Classify the polarization state. A vanishing alpha or beta collapses the
/// ellipse to a segment, so those states are linear regardless of phi.
pub fn classify(pol: &PolarizationSpec, tol: f64) -> PolarizationClass {
    debug_assert!(tol > 0.0);
    let (a, b, phi) = (pol.alpha, pol.beta, pol.phi);
    if phi.sin().abs() <= tol || a * b == 0.0 {
        return PolarizationClass {
            kind: PolarizationKind::Linear,
            handedness: Handedness::None,
        };
    }
    let handedness = if phi < 0.0 {
        Handedness::Right
    } else {
        Handedness::Left
    };
    let kind = if (phi.abs() - std::f64::consts::FRAC_PI_2).abs() <= tol
        && (a - b).abs() <= tol * (a + b)
    {
        PolarizationKind::Circular
    } else {
        PolarizationKind::Elliptic
    };
    PolarizationClass { kind, handedness }
}

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;

/// Incident-region phasor fields at height y:
/// E = (-beta e^{i(ky+phi)}, 0, alpha e^{iky}),
/// H = sqrt(eps0/mu0) (alpha e^{iky}, 0, beta e^{i(ky+phi)}).
pub fn incident_fields(y: f64, pol: &PolarizationSpec, k: f64) -> (CVec3, CVec3) {
    let eiky = Complex64::from_polar(1.0, k * y);
    let shifted = Complex64::from_polar(1.0, k * y + pol.phi);
    let zero = Complex64::default();
    let e = [-pol.beta * shifted, zero, pol.alpha * eiky];
    let h = [
        admittance() * pol.alpha * eiky,
        zero,
        admittance() * pol.beta * shifted,
    ];
    (e, h)
}

/// Real time-domain components of the incident electric field (x and z),
/// used by the ellipse-identity checks.
pub fn incident_real_components(y: f64, t: f64, pol: &PolarizationSpec, k: f64, omega: f64) -> (f64, f64) {
    let theta = k * y - omega * t;
    let ex = -pol.beta * (theta + pol.phi).cos();
    let ez = pol.alpha * theta.cos();
    (ex, ez)
}

/// Orientation of an ideal linear polarizer in the grating plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizerAxis {
    /// Keeps the beta (E_x / H_z) part; produces H-polarization.
    X,
    /// Keeps the alpha (E_z / H_x) part; produces E-polarization.
    Z,
}

/// The plane wave transmitted by an ideal polarizer: the surviving scalar
/// amplitude and which 2D polarization family it feeds. This is the
/// per-slit prescription consumed by the polarized field assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmittedWave {
    pub axis: PolarizerAxis,
    /// Complex amplitude multiplying the scalar field: alpha for the Z
    /// axis, beta e^{i phi} for the X axis.
    pub amplitude: Complex64,
}

impl TransmittedWave {
    /// Transmitted phasor fields for the incident plane wave at height y.
    pub fn incident_fields(&self, y: f64, k: f64) -> (CVec3, CVec3) {
        let carrier = Complex64::from_polar(1.0, k * y) * self.amplitude;
        let zero = Complex64::default();
        match self.axis {
            PolarizerAxis::Z => (
                [zero, zero, carrier],
                [admittance() * carrier, zero, zero],
            ),
            PolarizerAxis::X => (
                [-carrier, zero, zero],
                [zero, zero, admittance() * carrier],
            ),
        }
    }
}

/// Ideal lossless projection of the incident wave onto a polarizer axis.
pub fn polarizer_transmit(pol: &PolarizationSpec, axis: PolarizerAxis) -> TransmittedWave {
    let amplitude = match axis {
        PolarizerAxis::Z => Complex64::new(pol.alpha, 0.0),
        PolarizerAxis::X => pol.beta * pol.phase_factor(),
    };
    TransmittedWave { axis, amplitude }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn classification_cases() {
        let lin = PolarizationSpec::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            classify(&lin, DEFAULT_CLASSIFY_TOL),
            PolarizationClass {
                kind: PolarizationKind::Linear,
                handedness: Handedness::None
            }
        );

        let circ = PolarizationSpec::new(1.0, 1.0, FRAC_PI_2).unwrap();
        assert_eq!(
            classify(&circ, DEFAULT_CLASSIFY_TOL),
            PolarizationClass {
                kind: PolarizationKind::Circular,
                handedness: Handedness::Left
            }
        );

        let ell = PolarizationSpec::new(1.0, 2.0, FRAC_PI_4).unwrap();
        assert_eq!(
            classify(&ell, DEFAULT_CLASSIFY_TOL),
            PolarizationClass {
                kind: PolarizationKind::Elliptic,
                handedness: Handedness::Left
            }
        );
    }

    #[test]
    fn degenerate_amplitudes_are_linear() {
        let p = PolarizationSpec::new(1.0, 0.0, FRAC_PI_2).unwrap();
        assert_eq!(classify(&p, 1e-12).kind, PolarizationKind::Linear);
        let p = PolarizationSpec::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(classify(&p, 1e-12).kind, PolarizationKind::Linear);
    }

    #[test]
    fn rejects_zero_spec() {
        assert_eq!(
            PolarizationSpec::new(0.0, 0.0, 0.0),
            Err(PolarizationError::ZeroAmplitude)
        );
    }

    #[test]
    fn phase_is_normalized() {
        let p = PolarizationSpec::new(1.0, 1.0, 3.0 * PI).unwrap();
        assert_relative_eq!(p.phi(), PI, max_relative = 1e-12);
        let p = PolarizationSpec::new(1.0, 1.0, -1.5 * PI).unwrap();
        assert_relative_eq!(p.phi(), 0.5 * PI, max_relative = 1e-12);
    }

    #[test]
    fn incident_field_components() {
        let k = 2.0 * PI / 500e-9;
        let p = PolarizationSpec::new(0.7, 0.0, 0.3).unwrap();
        let (e, _h) = incident_fields(1e-6, &p, k);
        // beta = 0: only a z-component.
        assert_eq!(e[0], Complex64::default());
        assert_relative_eq!(e[2].norm(), 0.7, max_relative = 1e-14);

        let p = PolarizationSpec::new(2.0, 1.0, 0.3).unwrap();
        for &y in &[0.0, 1e-7, 3e-6] {
            let (e, _) = incident_fields(y, &p, k);
            assert_relative_eq!(e[0].norm() / e[2].norm(), 0.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn e_dot_h_conjugate_is_pure_imaginary() {
        // E . H* ~ 2i alpha beta sin(phi): vanishing real part.
        let k = 2.0 * PI / 500e-9;
        for &phi in &[0.0, 0.4, FRAC_PI_2, 2.9] {
            let p = PolarizationSpec::new(1.3, 0.8, phi).unwrap();
            let (e, h) = incident_fields(2e-7, &p, k);
            let dot = crate::vec3::dot_conj(&e, &h);
            assert!(dot.re.abs() < 1e-12 * admittance());
            let expect = -2.0 * 1.3 * 0.8 * phi.sin() * admittance();
            assert_relative_eq!(dot.im, expect, epsilon = 1e-12 * admittance());
        }
    }

    #[test]
    fn polarizer_projections() {
        let k = 2.0 * PI / 500e-9;
        let p = PolarizationSpec::new(1.0, 1.0, FRAC_PI_2).unwrap();

        let z = polarizer_transmit(&p, PolarizerAxis::Z);
        let (e, _) = z.incident_fields(0.0, k);
        assert_eq!(e[0], Complex64::default());
        assert_relative_eq!(e[2].re, 1.0, max_relative = 1e-14);

        let x = polarizer_transmit(&p, PolarizerAxis::X);
        let (e, _) = x.incident_fields(0.0, k);
        assert_eq!(e[2], Complex64::default());
        // -beta e^{i phi} with phi = pi/2: -i
        assert_relative_eq!(e[0].im, -1.0, max_relative = 1e-14);

        // Z-axis polarizer on an already z-polarized wave is the identity.
        let p = PolarizationSpec::new(0.9, 0.0, 0.0).unwrap();
        let z = polarizer_transmit(&p, PolarizerAxis::Z);
        let (e, h) = z.incident_fields(1e-6, k);
        let (e0, h0) = incident_fields(1e-6, &p, k);
        for i in 0..3 {
            assert!((e[i] - e0[i]).norm() < 1e-15);
            assert!((h[i] - h0[i]).norm() < 1e-12 * admittance());
        }
    }

    proptest! {
        #[test]
        fn classify_is_scale_invariant(
            a in 1e-3f64..1e3,
            b in 1e-3f64..1e3,
            phi in -3.1f64..3.1,
            c in 1e-3f64..1e3,
        ) {
            let p = PolarizationSpec::new(a, b, phi).unwrap();
            let q = PolarizationSpec::new(c * a, c * b, phi).unwrap();
            prop_assert_eq!(classify(&p, 1e-9), classify(&q, 1e-9));
        }

        #[test]
        fn handedness_flips_under_phase_negation(
            a in 1e-3f64..1e3,
            b in 1e-3f64..1e3,
            phi in 0.01f64..3.1,
        ) {
            let p = PolarizationSpec::new(a, b, phi).unwrap();
            let q = PolarizationSpec::new(a, b, -phi).unwrap();
            let cp = classify(&p, 1e-12);
            let cq = classify(&q, 1e-12);
            prop_assert_eq!(cp.kind, cq.kind);
            match cp.handedness {
                Handedness::Left => prop_assert_eq!(cq.handedness, Handedness::Right),
                Handedness::Right => prop_assert_eq!(cq.handedness, Handedness::Left),
                Handedness::None => prop_assert_eq!(cq.handedness, Handedness::None),
            }
        }

        #[test]
        fn ellipse_identity_holds(
            y in 0.0f64..1e-5,
            t in 0.0f64..1e-14,
            phi in -3.1f64..3.1,
        ) {
            let k = 2.0 * PI / 500e-9;
            let omega = k * crate::constants::C;
            let p = PolarizationSpec::new(1.2, 0.7, phi).unwrap();
            let (ex, ez) = incident_real_components(y, t, &p, k, omega);
            let (u, v) = (ex / p.beta(), ez / p.alpha());
            let lhs = u * u + v * v + 2.0 * u * v * phi.cos();
            prop_assert!((lhs - phi.sin() * phi.sin()).abs() < 1e-12);
        }

        #[test]
        fn out_of_plane_prefactor_is_bounded(
            a in 0.0f64..1e3,
            b in 1e-6f64..1e3,
            phi in -3.1f64..3.1,
        ) {
            if let Ok(p) = PolarizationSpec::new(a, b, phi) {
                prop_assert!(p.out_of_plane_prefactor().abs() <= 1.0 + 1e-12);
            }
        }
    }
}
