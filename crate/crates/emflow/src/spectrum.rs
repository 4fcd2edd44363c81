//! Analytic transverse-mode spectra of the slit array.
//!
//! For a grating that transmits a unit plane wave inside the slits and
//! absorbs everything outside, the mode amplitude of a single slit and of
//! the N-slit array have closed forms built from a sinc envelope and a
//! Dirichlet kernel.

use num_complex::Complex64;

/// sin(u)/u with the removable singularity handled by series expansion.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Mode amplitude of one slit of width `width` centred at `center`:
/// sqrt(2/(pi*width)) * sin(kx*width/2)/kx * exp(-i kx center).
pub fn slit_coefficient(kx: f64, center: f64, width: f64) -> Complex64 {
    debug_assert!(width > 0.0);
    // sin(kx w/2)/kx = (w/2) sinc(kx w/2): removable singularity at kx = 0.
    let envelope = (2.0 / (std::f64::consts::PI * width)).sqrt()
        * 0.5
        * width
        * sinc(0.5 * kx * width);
    let phase = Complex64::new(0.0, -kx * center).exp();
    envelope * phase
}

/// Two-slit spectrum: sqrt(width/pi) * sinc(kx*width/2) * cos(kx*pitch/2).
pub fn spectrum_c2(kx: f64, pitch: f64, width: f64) -> f64 {
    debug_assert!(pitch > width && width > 0.0);
    (width / std::f64::consts::PI).sqrt() * sinc(0.5 * kx * width) * (0.5 * kx * pitch).cos()
}

/// Dirichlet kernel sin(N u)/sin(u) with the signed limit N*(-1)^(m(N-1))
/// at u = m*pi.
fn dirichlet(u: f64, n: usize) -> f64 {
    let nf = n as f64;
    let m = (u / std::f64::consts::PI).round();
    let eps = u - m * std::f64::consts::PI;
    // Reduce both sines to the offset from the nearest singularity; the
    // sign bookkeeping keeps the expression exact away from it too.
    let sign = if ((m as i64) * (n as i64 - 1)).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    if eps.abs() < 1e-8 {
        sign * nf * (1.0 - (nf * nf - 1.0) * eps * eps / 6.0)
    } else {
        sign * (nf * eps).sin() / eps.sin()
    }
}

/// N-slit spectrum:
/// sqrt(width/(2 pi N)) * sinc(kx*width/2) * sin(N kx pitch/2)/sin(kx pitch/2).
pub fn spectrum_cn(kx: f64, n_slits: usize, pitch: f64, width: f64) -> f64 {
    debug_assert!(n_slits >= 1);
    (width / (2.0 * std::f64::consts::PI * n_slits as f64)).sqrt()
        * sinc(0.5 * kx * width)
        * dirichlet(0.5 * kx * pitch, n_slits)
}
