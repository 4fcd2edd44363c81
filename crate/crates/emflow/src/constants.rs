//! Physical constants (CODATA 2018, SI units).
//!
//! The streamline velocity is always the ratio `S / (c U)`, so overall
//! prefactors built from these constants cancel out of the trajectories.
//! They are fixed here so a unit-system change cannot alter results.

/// Vacuum permeability, H/m.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m. Derived from mu0 and c rather than quoted
/// independently so eps0 mu0 c^2 = 1 holds to the last bit; the quoted
/// CODATA value agrees to within its stated uncertainty.
pub const EPS_0: f64 = 1.0 / (MU_0 * C * C);

/// Vacuum impedance ratio sqrt(eps0/mu0), used by the incident-field
/// expressions.
pub fn admittance() -> f64 {
    (EPS_0 / MU_0).sqrt()
}
