//! Riemann-Silberstein reformulation, used as an independent cross-check
//! on the Poynting/energy pipeline.
//!
//! From the real field pair (E1, H1) = (Re E, Re H) and its quadrature
//! partner (E2, H2) = (Im E, Im H) build
//!   F_n = (sqrt(eps0) E_n + i sqrt(mu0) H_n) / sqrt(2),  n = 1, 2.
//! Then the cycle-averaged EME density and Poynting vector are
//!   U = (|F1|^2 + |F2|^2) / 2,
//!   S = c Re[ i (F1 x F1* + F2 x F2*) ] / 2,
//! identical to the standard phasor expressions; the factor 1/2 is the
//! usual cycle average. The complex combination G = F1 + i F2 satisfies
//! the first-order monochromatic Maxwell system
//!   omega G = c curl G,   div G = 0,
//! which we verify on grids by central differences.

use num_complex::Complex64;

use crate::constants::{C, EPS_0, MU_0};
use crate::emfield::EMSample;
use crate::vec3::{add, conj, cross, czero, from_re_im, im, re, scale, CVec3, RVec3};

/// The two RS vectors of a monochromatic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSPair {
    pub f1: CVec3,
    pub f2: CVec3,
}

/// Build the RS pair from phasor fields.
pub fn build_rs(em: &EMSample) -> RSPair {
    let s = 1.0 / 2.0_f64.sqrt();
    let mk = |e: &RVec3, h: &RVec3| -> CVec3 {
        let er = [s * EPS_0.sqrt() * e[0], s * EPS_0.sqrt() * e[1], s * EPS_0.sqrt() * e[2]];
        let hr = [s * MU_0.sqrt() * h[0], s * MU_0.sqrt() * h[1], s * MU_0.sqrt() * h[2]];
        from_re_im(&er, &hr)
    };
    RSPair {
        f1: mk(&re(&em.e), &re(&em.h)),
        f2: mk(&im(&em.e), &im(&em.h)),
    }
}

/// Recover the phasor E and H from an RS pair; exact inverse of
/// `build_rs`.
pub fn invert(p: &RSPair) -> EMSample {
    let s = 2.0_f64.sqrt();
    let e1 = re(&p.f1);
    let h1 = im(&p.f1);
    let e2 = re(&p.f2);
    let h2 = im(&p.f2);
    let e = from_re_im(
        &[s * e1[0] / EPS_0.sqrt(), s * e1[1] / EPS_0.sqrt(), s * e1[2] / EPS_0.sqrt()],
        &[s * e2[0] / EPS_0.sqrt(), s * e2[1] / EPS_0.sqrt(), s * e2[2] / EPS_0.sqrt()],
    );
    let h = from_re_im(
        &[s * h1[0] / MU_0.sqrt(), s * h1[1] / MU_0.sqrt(), s * h1[2] / MU_0.sqrt()],
        &[s * h2[0] / MU_0.sqrt(), s * h2[1] / MU_0.sqrt(), s * h2[2] / MU_0.sqrt()],
    );
    EMSample { e, h }
}

/// Cycle-averaged EME density (|F1|^2 + |F2|^2)/2.
pub fn rs_energy(p: &RSPair) -> f64 {
    0.5 * (crate::vec3::norm_sqr(&p.f1) + crate::vec3::norm_sqr(&p.f2))
}

/// Cycle-averaged Poynting vector c Re[i (F1 x F1* + F2 x F2*)]/2.
pub fn rs_poynting(p: &RSPair) -> RVec3 {
    let i = Complex64::new(0.0, 1.0);
    let sum = add(&cross(&p.f1, &conj(&p.f1)), &cross(&p.f2, &conj(&p.f2)));
    let v = scale(&sum, i * Complex64::new(0.5 * C, 0.0));
    re(&v)
}

/// Ray velocity S/(cU) from the RS pair; `u_floor` guards nodal points.
pub fn rs_velocity(p: &RSPair, u_floor: f64) -> Result<RVec3, crate::emfield::FlowError> {
    let u = rs_energy(p);
    if u < u_floor {
        return Err(crate::emfield::FlowError::NodalPoint {
            u,
            threshold: u_floor,
        });
    }
    let s = rs_poynting(p);
    Ok([s[0] / (C * u), s[1] / (C * u), s[2] / (C * u)])
}

/// Complex RS vector G = F1 + i F2 = (sqrt(eps0) E + i sqrt(mu0) H)/sqrt(2)
/// built straight from the phasors. Beware: this combination projects
/// onto one helicity and vanishes identically for circularly polarized
/// light of the other handedness, so residual checks use the (F1, F2)
/// pair instead.
pub fn rs_complex(em: &EMSample) -> CVec3 {
    let s = 1.0 / 2.0_f64.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let mut g = czero();
    for c in 0..3 {
        g[c] = s * (EPS_0.sqrt() * em.e[c] + i * MU_0.sqrt() * em.h[c]);
    }
    g
}

/// Residual statistics of the first-order Maxwell system on a grid,
/// scaled by the largest field magnitude on the grid (a pointwise scale
/// would blow up at interference nodes where the field vanishes).
#[derive(Debug, Clone, Copy)]
pub struct ResidualStats {
    /// max over grid of the curl-pair residual over omega * max field
    pub curl_max: f64,
    pub curl_mean: f64,
    /// max over grid of the divergence over k * max field
    pub div_max: f64,
    pub div_mean: f64,
}

/// Evaluate the Maxwell residuals of a z-invariant field over an
/// nx-by-ny grid spanning `x_range` x `y_range`, using central
/// differences of step `h`.
///
/// The monochromatic system couples the pair: c curl F1 = i omega F2 and
/// c curl F2 = -i omega F1. Checking the pair (rather than the combined
/// G = F1 + i F2, which satisfies omega G = c curl G but is identically
/// zero for one circular handedness) keeps the test meaningful for every
/// polarization.
pub fn maxwell_residual<F>(
    field: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
    k: f64,
    h: f64,
) -> ResidualStats
where
    F: Fn(f64, f64) -> EMSample,
{
    let omega = C * k;
    let i = Complex64::new(0.0, 1.0);
    let pair = |x: f64, y: f64| build_rs(&field(x, y));
    let mut curl_res = Vec::with_capacity(nx * ny);
    let mut div_res = Vec::with_capacity(nx * ny);
    let mut scale: f64 = 0.0;

    // In-plane curl of a z-invariant field: (dFz/dy, -dFz/dx, dFy/dx - dFx/dy)
    let curl_of = |fxp: &CVec3, fxm: &CVec3, fyp: &CVec3, fym: &CVec3| -> CVec3 {
        let ddx = |p: &CVec3, m: &CVec3, c: usize| (p[c] - m[c]) / (2.0 * h);
        [
            ddx(fyp, fym, 2),
            -ddx(fxp, fxm, 2),
            ddx(fxp, fxm, 1) - ddx(fyp, fym, 0),
        ]
    };
    let div_of = |fxp: &CVec3, fxm: &CVec3, fyp: &CVec3, fym: &CVec3| -> Complex64 {
        (fxp[0] - fxm[0] + fyp[1] - fym[1]) / (2.0 * h)
    };

    for iy in 0..ny {
        let y = y_range.0 + (y_range.1 - y_range.0) * (iy as f64 + 0.5) / ny as f64;
        for ix in 0..nx {
            let x = x_range.0 + (x_range.1 - x_range.0) * (ix as f64 + 0.5) / nx as f64;
            let p0 = pair(x, y);
            let pxp = pair(x + h, y);
            let pxm = pair(x - h, y);
            let pyp = pair(x, y + h);
            let pym = pair(x, y - h);

            let curl1 = curl_of(&pxp.f1, &pxm.f1, &pyp.f1, &pym.f1);
            let curl2 = curl_of(&pxp.f2, &pxm.f2, &pyp.f2, &pym.f2);
            scale = scale
                .max((crate::vec3::norm_sqr(&p0.f1) + crate::vec3::norm_sqr(&p0.f2)).sqrt());
            let mut res = 0.0;
            for c in 0..3 {
                res += (C * curl1[c] - i * omega * p0.f2[c]).norm_sqr();
                res += (C * curl2[c] + i * omega * p0.f1[c]).norm_sqr();
            }
            curl_res.push(res.sqrt() / omega);
            let d1 = div_of(&pxp.f1, &pxm.f1, &pyp.f1, &pym.f1);
            let d2 = div_of(&pxp.f2, &pxm.f2, &pyp.f2, &pym.f2);
            div_res.push((d1.norm_sqr() + d2.norm_sqr()).sqrt() / k);
        }
    }
    scale = scale.max(1e-300);
    let n = curl_res.len() as f64;
    ResidualStats {
        curl_max: curl_res.iter().fold(0.0f64, |a, &b| a.max(b)) / scale,
        curl_mean: curl_res.iter().sum::<f64>() / (n * scale),
        div_max: div_res.iter().fold(0.0f64, |a, &b| a.max(b)) / scale,
        div_mean: div_res.iter().sum::<f64>() / (n * scale),
    }
}
