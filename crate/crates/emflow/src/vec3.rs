//! Minimal complex 3-vector helpers for the field assembly code.

use num_complex::Complex64;

pub type CVec3 = [Complex64; 3];
pub type RVec3 = [f64; 3];

pub fn czero() -> CVec3 {
    [Complex64::default(); 3]
}

pub fn cross(a: &CVec3, b: &CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn conj(a: &CVec3) -> CVec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// sum_i a_i * conj(b_i)
pub fn dot_conj(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

pub fn norm_sqr(a: &CVec3) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}

pub fn re(a: &CVec3) -> RVec3 {
    [a[0].re, a[1].re, a[2].re]
}

pub fn im(a: &CVec3) -> RVec3 {
    [a[0].im, a[1].im, a[2].im]
}

pub fn scale(a: &CVec3, s: Complex64) -> CVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn from_re_im(re: &RVec3, im: &RVec3) -> CVec3 {
    [
        Complex64::new(re[0], im[0]),
        Complex64::new(re[1], im[1]),
        Complex64::new(re[2], im[2]),
    ]
}

pub fn rnorm(a: &RVec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}
