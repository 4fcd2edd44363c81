//! Fresnel integrals C(u) and S(u).
//!
//! C(u) = int_0^u cos(pi t^2 / 2) dt, S(u) = int_0^u sin(pi t^2 / 2) dt.
//!
//! Power series for small arguments, modified-Lentz continued fraction for
//! large ones. Both branches converge to close to machine precision; the
//! quadrature oracle in the tests pins the accuracy.

use num_complex::Complex64;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 1000;
const FP_MIN: f64 = 1e-290;
/// Series/continued-fraction crossover. The series loses ~2 digits here
/// from alternating cancellation; the continued fraction converges quickly
/// for pi*u^2 above ~12.
const X_SWITCH: f64 = 2.0;

/// Fresnel integrals (C(u), S(u)). Odd in u.
pub fn fresnel(u: f64) -> (f64, f64) {
    let ax = u.abs();
    let (mut c, mut s);

    if ax < FP_MIN.sqrt() {
        c = ax;
        s = 0.0;
    } else if ax <= X_SWITCH {
        (c, s) = fresnel_series(ax);
    } else {
        (c, s) = fresnel_cf(ax);
    }

    if u < 0.0 {
        c = -c;
        s = -s;
    }
    (c, s)
}

/// F(u) = C(u) + i S(u), the form used by the diffraction kernels.
pub fn fresnel_complex(u: f64) -> Complex64 {
    let (c, s) = fresnel(u);
    Complex64::new(c, s)
}

fn fresnel_series(ax: f64) -> (f64, f64) {
    let fact = std::f64::consts::FRAC_PI_2 * ax * ax;
    let mut sum_s = 0.0;
    let mut sum_c = ax;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut term = ax;
    let mut odd = true;
    let mut n = 3.0;
    for k in 1..=MAX_ITER {
        term *= fact / k as f64;
        sum += sign * term / n;
        let test = sum.abs() * EPS;
        if odd {
            sign = -sign;
            sum_s = sum;
            sum = sum_c;
        } else {
            sum_c = sum;
            sum = sum_s;
        }
        if term < test {
            break;
        }
        odd = !odd;
        n += 2.0;
    }
    (sum_c, sum_s)
}

fn fresnel_cf(ax: f64) -> (f64, f64) {
    let pix2 = std::f64::consts::PI * ax * ax;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / FP_MIN, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..=MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = one / (a * d + b);
        cc = b + a / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    h *= Complex64::new(ax, -ax);
    let phase = Complex64::new((0.5 * pix2).cos(), (0.5 * pix2).sin());
    let cs = Complex64::new(0.5, 0.5) * (one - phase * h);
    (cs.re, cs.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Brute-force oracle: composite Simpson on int_0^u exp(i pi t^2/2) dt
    // with enough panels to resolve the oscillation.
    fn fresnel_quadrature(u: f64) -> (f64, f64) {
        let n = 40_000 + (4_000.0 * u.abs().powi(2)) as usize;
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = u / n as f64;
        let f = |t: f64| {
            let p = std::f64::consts::FRAC_PI_2 * t * t;
            (p.cos(), p.sin())
        };
        let (mut c, mut s) = (f(0.0).0 + f(u).0, f(0.0).1 + f(u).1);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            let (fc, fs) = f(i as f64 * h);
            c += w * fc;
            s += w * fs;
        }
        (c * h / 3.0, s * h / 3.0)
    }

    #[test]
    fn matches_quadrature_oracle() {
        for &u in &[0.1, 0.5, 1.0, 1.5, 1.9, 2.0, 2.1, 3.0, 5.0, 8.0] {
            let (c, s) = fresnel(u);
            let (co, so) = fresnel_quadrature(u);
            assert_relative_eq!(c, co, max_relative = 1e-11);
            assert_relative_eq!(s, so, max_relative = 1e-11);
        }
    }

    #[test]
    fn odd_symmetry_is_exact() {
        for &u in &[0.3, 1.2, 2.5, 17.0] {
            let (c, s) = fresnel(u);
            let (cm, sm) = fresnel(-u);
            assert_eq!(c, -cm);
            assert_eq!(s, -sm);
        }
    }

    #[test]
    fn limits() {
        let (c0, s0) = fresnel(0.0);
        assert_eq!(c0, 0.0);
        assert_eq!(s0, 0.0);
        // C, S -> 1/2 as u -> inf.
        let (c, s) = fresnel(1e4);
        assert_relative_eq!(c, 0.5, max_relative = 1e-4);
        assert_relative_eq!(s, 0.5, max_relative = 1e-4);
    }
}
