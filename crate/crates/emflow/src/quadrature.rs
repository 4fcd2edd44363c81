//! Adaptive Gauss-Kronrod quadrature for oscillatory spectral integrals.
//!
//! Integrates a complex-valued integrand together with up to two derived
//! integrands (the derivative insertions) in a single pass, so the three
//! field components share every integrand evaluation. A G7/K15 pair gives
//! the per-panel error estimate; the panel with the worst scaled error is
//! bisected until every component meets the relative tolerance.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod-15 abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// Gauss-7 weights, matching XGK indices 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureError {
    /// Relative error reached when the evaluation budget ran out.
    pub achieved: f64,
    pub requested: f64,
}

impl std::fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "adaptive quadrature did not converge: reached {:.3e}, requested {:.3e}",
            self.achieved, self.requested
        )
    }
}

impl std::error::Error for QuadratureError {}

struct Panel {
    a: f64,
    b: f64,
    values: [Complex64; 3],
    errors: [f64; 3],
    key: f64,
}

impl Panel {
    fn score(&self) -> f64 {
        self.key
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.score() == other.score()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score().total_cmp(&other.score())
    }
}

fn gk15<F: Fn(f64) -> [Complex64; 3]>(f: &F, a: f64, b: f64) -> ([Complex64; 3], [f64; 3]) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = [Complex64::default(); 3];
    let mut gauss = [Complex64::default(); 3];

    let centre = f(mid);
    for c in 0..3 {
        kronrod[c] += WGK[7] * centre[c];
        gauss[c] += WG[3] * centre[c];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(mid - dx);
        let hi = f(mid + dx);
        for c in 0..3 {
            kronrod[c] += WGK[j] * (lo[c] + hi[c]);
        }
        if j % 2 == 1 {
            for c in 0..3 {
                gauss[c] += WG[j / 2] * (lo[c] + hi[c]);
            }
        }
    }

    let mut values = [Complex64::default(); 3];
    let mut errors = [0.0f64; 3];
    for c in 0..3 {
        values[c] = kronrod[c] * half;
        errors[c] = ((kronrod[c] - gauss[c]) * half).norm();
    }
    (values, errors)
}

/// Adaptive integration over an initial partition given by `breakpoints`
/// (strictly increasing, at least two entries). Returns the three component
/// integrals once every component's total error estimate drops below
/// `rel_tol` times its accumulated magnitude.
pub fn integrate_adaptive<F: Fn(f64) -> [Complex64; 3]>(
    f: &F,
    breakpoints: &[f64],
    rel_tol: f64,
    max_panels: usize,
) -> Result<[Complex64; 3], QuadratureError> {
    assert!(breakpoints.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut totals = [Complex64::default(); 3];
    let mut errs = [0.0f64; 3];
    // Accumulated per-panel magnitudes: the error scale. Unlike |total|,
    // this stays finite when cancellation drives a component's integral
    // to zero.
    let mut mags = [0.0f64; 3];
    let mut n_panels = 0usize;

    let push = |heap: &mut BinaryHeap<Panel>, a: f64, b: f64| {
        let (values, errors) = gk15(f, a, b);
        let key = errors.iter().sum();
        heap.push(Panel {
            a,
            b,
            values,
            errors,
            key,
        });
        (values, errors)
    };

    for w in breakpoints.windows(2) {
        let (v, e) = push(&mut heap, w[0], w[1]);
        for c in 0..3 {
            totals[c] += v[c];
            errs[c] += e[c];
            mags[c] += v[c].norm();
        }
        n_panels += 1;
    }

    let floor = 1e-300;
    loop {
        let worst_rel = (0..3)
            .map(|c| errs[c] / (mags[c] + floor))
            .fold(0.0f64, f64::max);
        if worst_rel <= rel_tol {
            return Ok(totals);
        }
        if n_panels >= max_panels {
            return Err(QuadratureError {
                achieved: worst_rel,
                requested: rel_tol,
            });
        }
        let panel = heap.pop().expect("non-empty panel heap");
        for c in 0..3 {
            totals[c] -= panel.values[c];
            errs[c] -= panel.errors[c];
            mags[c] -= panel.values[c].norm();
        }
        let mid = 0.5 * (panel.a + panel.b);
        for (a, b) in [(panel.a, mid), (mid, panel.b)] {
            let (v, e) = push(&mut heap, a, b);
            for c in 0..3 {
                totals[c] += v[c];
                errs[c] += e[c];
                mags[c] += v[c].norm();
            }
        }
        n_panels += 1;
    }
}

/// Convenience wrapper for scalar complex integrands.
pub fn integrate_scalar<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    max_panels: usize,
) -> Result<Complex64, QuadratureError> {
    let g = |x: f64| [f(x), Complex64::default(), Complex64::default()];
    integrate_adaptive(&g, breakpoints, rel_tol, max_panels).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomial_exactly() {
        // x^5 over [0, 2] = 32/3; degree 5 is inside the G7 exactness range.
        let v = integrate_scalar(
            |x| Complex64::new(x.powi(5), 0.0),
            &[0.0, 2.0],
            1e-12,
            100,
        )
        .unwrap();
        assert_relative_eq!(v.re, 32.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn integrates_oscillatory_exponential() {
        // int_0^1 e^{i a x} dx = (e^{ia} - 1)/(ia)
        let a = 400.0;
        let v = integrate_scalar(
            |x| Complex64::new(0.0, a * x).exp(),
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            1e-11,
            10_000,
        )
        .unwrap();
        let expect = (Complex64::new(0.0, a).exp() - 1.0) / Complex64::new(0.0, a);
        assert_relative_eq!(v.re, expect.re, epsilon = 1e-11);
        assert_relative_eq!(v.im, expect.im, epsilon = 1e-11);
    }

    #[test]
    fn shared_components_integrate_together() {
        // f, f', and x*f for f = sin(pi x) over [0, 1].
        let g = |x: f64| {
            [
                Complex64::new((PI * x).sin(), 0.0),
                Complex64::new(PI * (PI * x).cos(), 0.0),
                Complex64::new(x * (PI * x).sin(), 0.0),
            ]
        };
        let v = integrate_adaptive(&g, &[0.0, 1.0], 1e-12, 1000).unwrap();
        assert_relative_eq!(v[0].re, 2.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(v[1].re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(v[2].re, 1.0 / PI, max_relative = 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate_scalar(
            |x| Complex64::new(0.0, 1e7 * x).exp(),
            &[0.0, 1.0],
            1e-12,
            8,
        )
        .unwrap_err();
        assert!(err.achieved > err.requested);
    }
}
