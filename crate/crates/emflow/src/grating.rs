//! Slit grating geometry: transparent inside the slits, absorbing outside.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GratingError {
    #[error("slit width must be positive, got {0} m")]
    NonPositiveWidth(f64),
    #[error("pitch ({pitch} m) must exceed the slit width ({width} m)")]
    PitchNotLargerThanWidth { pitch: f64, width: f64 },
    #[error("slit count must be at least 1")]
    NoSlits,
}

/// An array of `n_slits` identical slits of width `slit_width`, centres on
/// an arithmetic progression of step `pitch` symmetric about x = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GratingSpec {
    n_slits: usize,
    slit_width: f64,
    pitch: f64,
}

impl GratingSpec {
    pub fn new(n_slits: usize, slit_width: f64, pitch: f64) -> Result<Self, GratingError> {
        if n_slits == 0 {
            return Err(GratingError::NoSlits);
        }
        if !(slit_width > 0.0) {
            return Err(GratingError::NonPositiveWidth(slit_width));
        }
        // pitch > width keeps the slit supports pairwise disjoint; a single
        // slit has no neighbour but the same constraint is kept for
        // uniformity of the configuration surface.
        if !(pitch > slit_width) {
            return Err(GratingError::PitchNotLargerThanWidth {
                pitch,
                width: slit_width,
            });
        }
        Ok(Self {
            n_slits,
            slit_width,
            pitch,
        })
    }

    /// Double slit with centres at +-pitch/2, the configuration of the
    /// reference experiment.
    pub fn double_slit(slit_width: f64, pitch: f64) -> Result<Self, GratingError> {
        Self::new(2, slit_width, pitch)
    }

    pub fn n_slits(&self) -> usize {
        self.n_slits
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Centre of slit `i`, counted from the most negative x.
    pub fn slit_center(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_slits);
        (i as f64 - 0.5 * (self.n_slits as f64 - 1.0)) * self.pitch
    }

    pub fn slit_centers(&self) -> Vec<f64> {
        (0..self.n_slits).map(|i| self.slit_center(i)).collect()
    }

    /// Support interval [lo, hi] of slit `i`.
    pub fn slit_support(&self, i: usize) -> (f64, f64) {
        let c = self.slit_center(i);
        (c - 0.5 * self.slit_width, c + 0.5 * self.slit_width)
    }

    /// Index of the slit whose support contains `x`, if any.
    pub fn slit_containing(&self, x: f64) -> Option<usize> {
        (0..self.n_slits).find(|&i| {
            let (lo, hi) = self.slit_support(i);
            x >= lo && x <= hi
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_slit_centers_are_symmetric() {
        let g = GratingSpec::double_slit(5e-6, 10e-6).unwrap();
        assert_eq!(g.slit_centers(), vec![-5e-6, 5e-6]);
    }

    #[test]
    fn odd_count_has_a_central_slit() {
        let g = GratingSpec::new(3, 1e-6, 4e-6).unwrap();
        assert_eq!(g.slit_centers(), vec![-4e-6, 0.0, 4e-6]);
    }

    #[test]
    fn supports_are_disjoint() {
        let g = GratingSpec::new(5, 2e-6, 3e-6).unwrap();
        for i in 0..4 {
            assert!(g.slit_support(i).1 < g.slit_support(i + 1).0);
        }
    }

    #[test]
    fn rejects_degenerate_geometry() {
        assert_eq!(GratingSpec::new(0, 1e-6, 2e-6), Err(GratingError::NoSlits));
        assert!(matches!(
            GratingSpec::new(2, -1e-6, 2e-6),
            Err(GratingError::NonPositiveWidth(_))
        ));
        assert!(matches!(
            GratingSpec::new(2, 2e-6, 2e-6),
            Err(GratingError::PitchNotLargerThanWidth { .. })
        ));
    }

    #[test]
    fn slit_lookup() {
        let g = GratingSpec::double_slit(5e-6, 10e-6).unwrap();
        assert_eq!(g.slit_containing(-5e-6), Some(0));
        assert_eq!(g.slit_containing(6e-6), Some(1));
        assert_eq!(g.slit_containing(0.0), None);
    }
}
