//! Wave-optics simulator for electromagnetic energy flow behind slit
//! gratings.
//!
//! A monochromatic polarized plane wave hits an absorbing screen with
//! one or more slits; the crate propagates the transmitted field,
//! assembles the full vector E and H, and integrates the streamlines of
//! the time-averaged Poynting vector out to a detection plane. Ensembles
//! of such flow lines reproduce the interference pattern, including the
//! polarization dependence when the two slits of a double slit are
//! covered by orthogonal polarizers (the Arago-Fresnel laws) and the
//! out-of-plane drift of circularly polarized light.
//!
//! Modules, roughly bottom-up:
//! - [`special`], [`quadrature`]: Fresnel integrals and adaptive
//!   Gauss-Kronrod quadrature.
//! - [`grating`], [`spectrum`], [`propagator`]: geometry, analytic mode
//!   spectra, and three interchangeable scalar propagation backends.
//! - [`polarization`], [`emfield`], [`riemann_silberstein`]: vector
//!   field assembly, flux/energy closed forms, and an independent
//!   Riemann-Silberstein cross-check.
//! - [`flowlines`], [`ensemble`]: streamline integration, ensembles,
//!   histograms, visibility.
//! - [`config`], [`export`], [`validate`]: run configuration, CSV/JSON
//!   output, self-checks.

pub mod config;
pub mod constants;
pub mod emfield;
pub mod ensemble;
pub mod export;
pub mod flowlines;
pub mod grating;
pub mod polarization;
pub mod propagator;
pub mod quadrature;
pub mod riemann_silberstein;
pub mod special;
pub mod spectrum;
pub mod validate;
pub mod vec3;

pub use config::{parse_config, Config, ScenarioMode};
pub use emfield::{EMSample, FlowState};
pub use flowlines::{FlowScenario, IntegratorConfig, Trajectory};
pub use grating::GratingSpec;
pub use polarization::PolarizationSpec;
pub use propagator::{Propagator, PropagatorVariant};
