//! Scalar field behind the grating and its first derivatives.
//!
//! Three interchangeable backends evaluate the same boundary-value problem:
//!
//! * `ModeParaxial` - superposition of transverse modes with the paraxial
//!   longitudinal phase k - kx^2/(2k), integrated adaptively over kx.
//! * `ModeExact` - the same superposition with the exact Helmholtz phase
//!   sqrt(k^2 - kx^2) (decaying exponential on the evanescent branch).
//!   Used as the oracle for Helmholtz-residual checks.
//! * `FresnelKirchhoff` - the Fresnel-Kirchhoff integral over the slit
//!   apertures. For a unit plane wave on top-hat slits the aperture
//!   integral reduces exactly to Fresnel integrals, so this backend is
//!   closed-form and fast; it is the production path for trajectories.
//!
//! Derivatives are obtained by differentiation under the integral (or of
//! the closed form), never by finite differences; FD appears only in test
//! oracles.

use num_complex::Complex64;
use thiserror::Error;

use crate::grating::GratingSpec;
use crate::quadrature::{integrate_adaptive, QuadratureError};
use crate::special::fresnel_complex;
use crate::spectrum::{slit_coefficient, spectrum_cn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorVariant {
    ModeParaxial,
    ModeExact,
    FresnelKirchhoff,
}

/// Complex scalar field and its in-plane derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub psi: Complex64,
    pub dpsi_dx: Complex64,
    pub dpsi_dy: Complex64,
}

impl FieldSample {
    pub fn is_finite(&self) -> bool {
        [self.psi, self.dpsi_dx, self.dpsi_dy]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn zero() -> Self {
        Self {
            psi: Complex64::default(),
            dpsi_dx: Complex64::default(),
            dpsi_dy: Complex64::default(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            psi: self.psi + other.psi,
            dpsi_dx: self.dpsi_dx + other.dpsi_dx,
            dpsi_dy: self.dpsi_dy + other.dpsi_dy,
        }
    }
}

#[derive(Debug, Error)]
pub enum PropagateError {
    #[error("spectral quadrature failed at (x={x} m, y={y} m): {source}")]
    QuadratureNotConverged {
        x: f64,
        y: f64,
        source: QuadratureError,
    },
}

/// Field evaluator for one grating, wavenumber and backend. Pure and
/// immutable after construction, safe to share across workers.
#[derive(Debug, Clone)]
pub struct Propagator {
    grating: GratingSpec,
    k: f64,
    variant: PropagatorVariant,
    rel_tol: f64,
    max_panels: usize,
    k_max: f64,
}

impl Propagator {
    pub fn new(grating: GratingSpec, k: f64, variant: PropagatorVariant) -> Self {
        assert!(k > 0.0, "wavenumber must be positive");
        // Truncate the spectrum where the paraxial form loses validity and
        // the sinc envelope has decayed over >= 20 lobes.
        let k_max = k.min(40.0 * std::f64::consts::PI / grating.slit_width());
        Self {
            grating,
            k,
            variant,
            rel_tol: 1e-9,
            max_panels: 400_000,
            k_max,
        }
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn grating(&self) -> &GratingSpec {
        &self.grating
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn variant(&self) -> PropagatorVariant {
        self.variant
    }

    /// Total field behind the grating at (x, y), y > 0.
    pub fn propagate(&self, x: f64, y: f64) -> Result<FieldSample, PropagateError> {
        assert!(y > 0.0, "field is defined behind the grating (y > 0)");
        match self.variant {
            PropagatorVariant::FresnelKirchhoff => {
                let mut total = FieldSample::zero();
                for i in 0..self.grating.n_slits() {
                    total = total.add(&self.fk_slit(i, x, y));
                }
                Ok(total)
            }
            _ => {
                let n = self.grating.n_slits();
                let d = self.grating.pitch();
                let w = self.grating.slit_width();
                // The unit-norm spectrum carries 1/sqrt(area); undo it so
                // the boundary value inside the slits is unity.
                self.mode_integral_even(x, y, (n as f64 * w).sqrt(), |kx| {
                    spectrum_cn(kx, n, d, w)
                })
            }
        }
    }

    /// Field contributed by slit `slit_index` alone.
    pub fn slit_field(
        &self,
        slit_index: usize,
        x: f64,
        y: f64,
    ) -> Result<FieldSample, PropagateError> {
        assert!(slit_index < self.grating.n_slits(), "slit index in range");
        assert!(y > 0.0, "field is defined behind the grating (y > 0)");
        match self.variant {
            PropagatorVariant::FresnelKirchhoff => Ok(self.fk_slit(slit_index, x, y)),
            _ => {
                let c = self.grating.slit_center(slit_index);
                let w = self.grating.slit_width();
                self.mode_integral(x, y, w.sqrt(), |kx| slit_coefficient(kx, c, w))
            }
        }
    }

    /// Longitudinal phase phi(kx): exp(i(kx x + phi y)) is the propagated
    /// mode. Complex on the evanescent branch of the exact variant.
    fn longitudinal_phase(&self, kx: f64) -> Complex64 {
        match self.variant {
            PropagatorVariant::ModeParaxial => {
                Complex64::new(self.k - kx * kx / (2.0 * self.k), 0.0)
            }
            PropagatorVariant::ModeExact => {
                let disc = self.k * self.k - kx * kx;
                if disc >= 0.0 {
                    Complex64::new(disc.sqrt(), 0.0)
                } else {
                    // Bounded branch for y > 0.
                    Complex64::new(0.0, (-disc).sqrt())
                }
            }
            PropagatorVariant::FresnelKirchhoff => unreachable!(),
        }
    }

    /// Spectral integral for a general (complex) spectrum over the full
    /// truncated range.
    fn mode_integral<F: Fn(f64) -> Complex64>(
        &self,
        x: f64,
        y: f64,
        boundary_norm: f64,
        spectrum: F,
    ) -> Result<FieldSample, PropagateError> {
        let integrand = |kx: f64| {
            let phi = self.longitudinal_phase(kx);
            let exponent = Complex64::new(0.0, kx * x) + Complex64::new(0.0, y) * phi;
            let base = spectrum(kx) * exponent.exp();
            [
                base,
                Complex64::new(0.0, kx) * base,
                Complex64::new(0.0, 1.0) * phi * base,
            ]
        };

        let breakpoints = self.initial_breakpoints(x, y, -self.k_max, self.k_max);
        let values = integrate_adaptive(&integrand, &breakpoints, self.rel_tol, self.max_panels)
            .map_err(|source| PropagateError::QuadratureNotConverged { x, y, source })?;

        let norm = boundary_norm / (2.0 * std::f64::consts::PI).sqrt();
        Ok(FieldSample {
            psi: values[0] * norm,
            dpsi_dx: values[1] * norm,
            dpsi_dy: values[2] * norm,
        })
    }

    /// Spectral integral for a real, even spectrum, folded onto [0, k_max]
    /// with cosine/sine kernels. Evaluating at -x reuses bit-identical
    /// cosine values, so the x-mirror symmetry of the symmetric grating
    /// holds to machine precision by construction.
    fn mode_integral_even<F: Fn(f64) -> f64>(
        &self,
        x: f64,
        y: f64,
        boundary_norm: f64,
        spectrum: F,
    ) -> Result<FieldSample, PropagateError> {
        let integrand = |kx: f64| {
            let phi = self.longitudinal_phase(kx);
            let propagated = (Complex64::new(0.0, y) * phi).exp();
            let base = 2.0 * spectrum(kx) * propagated;
            let (sin_x, cos_x) = (kx * x).sin_cos();
            [
                cos_x * base,
                -kx * sin_x * base,
                Complex64::new(0.0, 1.0) * phi * cos_x * base,
            ]
        };

        let breakpoints = self.initial_breakpoints(x, y, 0.0, self.k_max);
        let values = integrate_adaptive(&integrand, &breakpoints, self.rel_tol, self.max_panels)
            .map_err(|source| PropagateError::QuadratureNotConverged { x, y, source })?;

        let norm = boundary_norm / (2.0 * std::f64::consts::PI).sqrt();
        Ok(FieldSample {
            psi: values[0] * norm,
            dpsi_dx: values[1] * norm,
            dpsi_dy: values[2] * norm,
        })
    }

    /// Initial panel layout over [lo, hi]. The panel width resolves the
    /// fastest oscillation of the integrand: exp(i kx x), the longitudinal
    /// phase (slope up to y*k_max/k) and the spectrum's own oscillation on
    /// the scale of the outermost slit edge.
    fn initial_breakpoints(&self, x: f64, y: f64, lo: f64, hi: f64) -> Vec<f64> {
        let edge = self.grating.slit_center(self.grating.n_slits() - 1).abs()
            + 0.5 * self.grating.slit_width();
        let rate = x.abs() + edge + y * self.k_max / self.k;
        let budget = 8.0; // radians of phase per initial panel
        let cap = std::f64::consts::PI / (x.abs() + self.grating.pitch());
        let width = (budget / rate).min(cap);
        let n = (((hi - lo) / width).ceil() as usize).clamp(8, 60_000);
        let step = (hi - lo) / n as f64;
        (0..=n).map(|i| lo + step * i as f64).collect()
    }

    /// Closed-form Fresnel-Kirchhoff field of one top-hat slit.
    ///
    /// With a unit incident wave, the aperture integral over [a, b] is
    /// sqrt(pi y / k) [F(u_b) - F(u_a)] with u = (x' - x) sqrt(k/(pi y)),
    /// F = C + iS. Differentiating the kernel in x gives endpoint terms;
    /// the y derivative follows from the product rule plus one integration
    /// by parts, leaving only endpoint kernels as well.
    fn fk_slit(&self, slit_index: usize, x: f64, y: f64) -> FieldSample {
        let k = self.k;
        let (a, b) = self.grating.slit_support(slit_index);
        let scale = (k / (std::f64::consts::PI * y)).sqrt();
        let ua = (a - x) * scale;
        let ub = (b - x) * scale;

        let f_diff = fresnel_complex(ub) - fresnel_complex(ua);
        let eiky = Complex64::new(0.0, k * y).exp();
        let quarter = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        let psi = quarter * eiky * f_diff / 2.0f64.sqrt();

        // Kernel e^{ik(x - x')^2 / 2y} at the aperture edges.
        let kernel = |xp: f64| {
            let dxp = x - xp;
            Complex64::new(0.0, 0.5 * k * dxp * dxp / y).exp()
        };
        let ka = kernel(a);
        let kb = kernel(b);
        let prefactor = (k / (2.0 * std::f64::consts::PI * y)).sqrt() * quarter * eiky;

        let dpsi_dx = prefactor * (ka - kb);
        let dpsi_dy = Complex64::new(0.0, k) * psi
            - prefactor / (2.0 * y) * ((b - x) * kb - (a - x) * ka);

        FieldSample {
            psi,
            dpsi_dx,
            dpsi_dy,
        }
    }
}
