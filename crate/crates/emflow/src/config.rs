//! Plain-text run configuration.
//!
//! The format is a small INI dialect: `[section]` headers, `key = value`
//! pairs, `#` or `;` comments, blank lines ignored. Every key has a
//! default (the classic 500 nm / 5 um / 10 um / 1 mm double-slit setup),
//! so the empty string is a valid config. Unknown sections or keys,
//! duplicate keys, malformed numbers and physically invalid values are
//! all rejected with the offending line number.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ensemble::{EnsembleSpec, HistogramAxis, Sampling};
use crate::grating::{GratingError, GratingSpec};
use crate::polarization::{PolarizationError, PolarizationSpec};
use crate::propagator::PropagatorVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioMode {
    Free,
    /// Orthogonal polarizers on the two slits; `swap` exchanges which
    /// slit carries which axis.
    Polarized { swap: bool },
}

#[derive(Debug, Clone)]
pub struct Config {
    /// Vacuum wavelength, metres.
    pub wavelength: f64,
    /// Screen plane distance, metres.
    pub screen_distance: f64,
    pub mode: ScenarioMode,
    pub backend: PropagatorVariant,
    pub grating: GratingSpec,
    pub polarization: PolarizationSpec,
    pub ensemble: EnsembleSpec,
    pub axis: HistogramAxis,
    pub bins: usize,
    /// Histogram range on the screen, metres.
    pub range: (f64, f64),
    /// Window for the visibility readout, metres.
    pub visibility_window: (f64, f64),
    /// Integrator base step as a fraction of the wavelength.
    pub step_fraction: f64,
}

impl Config {
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    pub fn integrator(&self) -> crate::flowlines::IntegratorConfig {
        let mut cfg = crate::flowlines::IntegratorConfig::for_wavelength(self.wavelength);
        cfg.step = self.wavelength / self.step_fraction;
        cfg.step_cap = cfg.step_cap.max(cfg.step);
        cfg
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            wavelength: 500e-9,
            screen_distance: 1e-3,
            mode: ScenarioMode::Free,
            backend: PropagatorVariant::FresnelKirchhoff,
            grating: GratingSpec::double_slit(5e-6, 10e-6).expect("default grating is valid"),
            polarization: PolarizationSpec::linear(),
            ensemble: EnsembleSpec {
                n_per_slit: 100,
                sampling: Sampling::UniformStratified,
                screen_distance: 1e-3,
            },
            axis: HistogramAxis::X,
            // 2 um bins over +-250 um: at least 25 bins per 50 um fringe.
            bins: 250,
            range: (-250e-6, 250e-6),
            visibility_window: (-40e-6, 40e-6),
            step_fraction: 20.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid grating: {0}")]
    Grating(#[from] GratingError),
    #[error("invalid polarization: {0}")]
    Polarization(#[from] PolarizationError),
    #[error("{0}")]
    Invalid(String),
}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        msg: msg.into(),
    }
}

const SECTIONS: &[&str] = &[
    "grating",
    "polarization",
    "scenario",
    "ensemble",
    "integrator",
    "output",
];

/// Raw pass: section/key -> (value, line).
fn tokenize(text: &str) -> Result<BTreeMap<(String, String), (String, usize)>, ConfigError> {
    let mut map = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = match raw.find(['#', ';']) {
            Some(p) => &raw[..p],
            None => raw,
        };
        let s = stripped.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim()
                .to_ascii_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            section = Some(name);
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        let sect = section
            .clone()
            .ok_or_else(|| err(line, "key before any [section] header"))?;
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(err(line, "empty key"));
        }
        let prev = map.insert((sect.clone(), key.clone()), (value.trim().to_string(), line));
        if prev.is_some() {
            return Err(err(line, format!("duplicate key `{key}` in [{sect}]")));
        }
    }
    Ok(map)
}

struct Fields {
    map: BTreeMap<(String, String), (String, usize)>,
}

impl Fields {
    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        self.map.remove(&(section.to_string(), key.to_string()))
    }

    fn f64(&mut self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.take(section, key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line, format!("`{key}` expects a finite number, got `{v}`"))),
        }
    }

    fn usize(&mut self, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.take(section, key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse::<usize>()
                .map_err(|_| err(line, format!("`{key}` expects a non-negative integer, got `{v}`"))),
        }
    }

    fn u64(&mut self, section: &str, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.take(section, key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse::<u64>()
                .map_err(|_| err(line, format!("`{key}` expects an unsigned integer, got `{v}`"))),
        }
    }

    fn choice(
        &mut self,
        section: &str,
        key: &str,
        options: &[&str],
        default: &str,
    ) -> Result<(String, usize), ConfigError> {
        match self.take(section, key) {
            None => Ok((default.to_string(), 0)),
            Some((v, line)) => {
                let v = v.to_ascii_lowercase();
                if options.contains(&v.as_str()) {
                    Ok((v, line))
                } else {
                    Err(err(
                        line,
                        format!("`{key}` must be one of {}", options.join("|")),
                    ))
                }
            }
        }
    }

    fn bool(&mut self, section: &str, key: &str, default: bool) -> Result<bool, ConfigError> {
        let (v, _) = self.choice(
            section,
            key,
            &["true", "false"],
            if default { "true" } else { "false" },
        )?;
        Ok(v == "true")
    }
}

const UM: f64 = 1e-6;

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut f = Fields {
        map: tokenize(text)?,
    };
    let d = Config::default();

    let wavelength = f.f64("scenario", "wavelength_nm", d.wavelength / 1e-9)? * 1e-9;
    let screen_distance = f.f64("scenario", "screen_distance_um", d.screen_distance / UM)? * UM;
    let (mode_s, _) = f.choice("scenario", "mode", &["free", "polarized"], "free")?;
    let swap = f.bool("scenario", "swap_polarizers", false)?;
    let mode = match mode_s.as_str() {
        "free" => ScenarioMode::Free,
        _ => ScenarioMode::Polarized { swap },
    };
    let (backend_s, _) = f.choice(
        "scenario",
        "backend",
        &["fresnel", "exact", "paraxial"],
        "fresnel",
    )?;
    let backend = match backend_s.as_str() {
        "fresnel" => PropagatorVariant::FresnelKirchhoff,
        "exact" => PropagatorVariant::ModeExact,
        _ => PropagatorVariant::ModeParaxial,
    };

    let slits = f.usize("grating", "slits", d.grating.n_slits())?;
    let slit_width = f.f64("grating", "slit_width_um", d.grating.slit_width() / UM)? * UM;
    let pitch = f.f64("grating", "pitch_um", d.grating.pitch() / UM)? * UM;
    let grating = GratingSpec::new(slits, slit_width, pitch)?;

    let alpha = f.f64("polarization", "alpha", 1.0)?;
    let beta = f.f64("polarization", "beta", 0.0)?;
    let phi = f.f64("polarization", "phi_degrees", 0.0)?.to_radians();
    let polarization = PolarizationSpec::new(alpha, beta, phi)?;

    let per_slit = f.usize("ensemble", "per_slit", d.ensemble.n_per_slit)?;
    let (sampling_s, _) = f.choice("ensemble", "sampling", &["stratified", "random"], "stratified")?;
    let seed = f.u64("ensemble", "seed", 0)?;
    let sampling = match sampling_s.as_str() {
        "stratified" => Sampling::UniformStratified,
        _ => Sampling::UniformRandom { seed },
    };
    let (axis_s, _) = f.choice("output", "axis", &["x", "z"], "x")?;
    let axis = if axis_s == "x" {
        HistogramAxis::X
    } else {
        HistogramAxis::Z
    };
    let bins = f.usize("output", "bins", d.bins)?;
    let range = (
        f.f64("output", "range_min_um", d.range.0 / UM)? * UM,
        f.f64("output", "range_max_um", d.range.1 / UM)? * UM,
    );
    let visibility_window = (
        f.f64("output", "visibility_min_um", d.visibility_window.0 / UM)? * UM,
        f.f64("output", "visibility_max_um", d.visibility_window.1 / UM)? * UM,
    );
    let step_fraction = f.f64("integrator", "step_fraction", d.step_fraction)?;

    if let Some(((sect, key), (_, line))) = f.map.into_iter().next() {
        return Err(err(line, format!("unknown key `{key}` in [{sect}]")));
    }

    let invalid = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
    if !(wavelength > 0.0) {
        return invalid("wavelength must be positive");
    }
    if !(screen_distance > 0.0) {
        return invalid("screen distance must be positive");
    }
    if matches!(mode, ScenarioMode::Polarized { .. }) && grating.n_slits() != 2 {
        return invalid("polarized mode needs exactly two slits");
    }
    if per_slit == 0 {
        return invalid("per_slit must be at least 1");
    }
    if bins == 0 {
        return invalid("bins must be at least 1");
    }
    if !(range.1 > range.0) {
        return invalid("histogram range must satisfy min < max");
    }
    if !(visibility_window.1 > visibility_window.0) {
        return invalid("visibility window must satisfy min < max");
    }
    if !(step_fraction >= 1.0 && step_fraction.is_finite()) {
        return invalid("step_fraction must be >= 1");
    }
    if matches!(sampling, Sampling::UniformStratified)
        && grating.slit_width() <= 4.0 * wavelength
    {
        return invalid("slit too narrow for stratified sampling margins");
    }

    Ok(Config {
        wavelength,
        screen_distance,
        mode,
        backend,
        grating,
        polarization,
        ensemble: EnsembleSpec {
            n_per_slit: per_slit,
            sampling,
            screen_distance,
        },
        axis,
        bins,
        range,
        visibility_window,
        step_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_config_is_the_default_setup() {
        let c = parse_config("").unwrap();
        assert_relative_eq!(c.wavelength, 500e-9);
        assert_relative_eq!(c.screen_distance, 1e-3);
        assert_eq!(c.grating.n_slits(), 2);
        assert_eq!(c.mode, ScenarioMode::Free);
        assert_eq!(c.backend, PropagatorVariant::FresnelKirchhoff);
    }

    #[test]
    fn full_config_round_trip() {
        let text = "
            # paper figure 3 setup
            [scenario]
            wavelength_nm = 632.8
            screen_distance_um = 500 ; half a millimetre
            mode = polarized
            swap_polarizers = true
            backend = exact

            [grating]
            slits = 2
            slit_width_um = 4
            pitch_um = 12

            [polarization]
            alpha = 0.6
            beta = 0.8
            phi_degrees = 90

            [ensemble]
            per_slit = 250
            sampling = random
            seed = 42

            [integrator]
            step_fraction = 40

            [output]
            axis = z
            bins = 80
            range_min_um = -30
            range_max_um = 30
            visibility_min_um = -20
            visibility_max_um = 20
        ";
        let c = parse_config(text).unwrap();
        assert_relative_eq!(c.wavelength, 632.8e-9, max_relative = 1e-12);
        assert_relative_eq!(c.screen_distance, 500e-6, max_relative = 1e-12);
        assert_eq!(c.mode, ScenarioMode::Polarized { swap: true });
        assert_eq!(c.backend, PropagatorVariant::ModeExact);
        assert_relative_eq!(c.grating.slit_width(), 4e-6, max_relative = 1e-12);
        assert_relative_eq!(c.polarization.phi(), std::f64::consts::FRAC_PI_2);
        assert_eq!(c.ensemble.n_per_slit, 250);
        assert_eq!(c.ensemble.sampling, Sampling::UniformRandom { seed: 42 });
        assert_eq!(c.axis, HistogramAxis::Z);
        assert_eq!(c.bins, 80);
        assert_relative_eq!(c.range.0, -30e-6, max_relative = 1e-12);
        assert_relative_eq!(c.integrator().step, 632.8e-9 / 40.0, max_relative = 1e-12);
    }

    fn parse_line_err(text: &str) -> usize {
        match parse_config(text) {
            Err(ConfigError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_line_err("[grating]\nslits 2"), 2);
        assert_eq!(parse_line_err("[grating\nslits = 2"), 1);
        assert_eq!(parse_line_err("slits = 2"), 1);
        assert_eq!(parse_line_err("[nope]"), 1);
        assert_eq!(parse_line_err("[grating]\nslits = 2\nslits = 3"), 3);
        assert_eq!(parse_line_err("[grating]\nslits = two"), 2);
        assert_eq!(parse_line_err("[scenario]\nwavelength_nm = inf"), 2);
        assert_eq!(parse_line_err("[grating]\nwidth_um = 4"), 2);
        assert_eq!(parse_line_err("[scenario]\nmode = maybe"), 2);
        assert_eq!(parse_line_err("[grating]\n= 4"), 2);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            parse_config("[grating]\nslits = 0"),
            Err(ConfigError::Grating(_))
        ));
        assert!(matches!(
            parse_config("[grating]\nslit_width_um = 20\npitch_um = 10"),
            Err(ConfigError::Grating(_))
        ));
        assert!(matches!(
            parse_config("[polarization]\nalpha = 0\nbeta = 0"),
            Err(ConfigError::Polarization(_))
        ));
        assert!(matches!(
            parse_config("[scenario]\nmode = polarized\n[grating]\nslits = 3"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config("[output]\nrange_min_um = 10\nrange_max_um = -10"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config("[integrator]\nstep_fraction = 0.5"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_config("[scenario]\nwavelength_nm = 2000"),
            Err(ConfigError::Invalid(_))
        ));
    }

    #[test]
    fn comments_and_case_are_tolerated() {
        let c = parse_config("[GRATING]\nSLITS = 3 # three of them\n; done").unwrap();
        assert_eq!(c.grating.n_slits(), 3);
    }

    #[test]
    fn parser_never_panics_on_junk() {
        for junk in [
            "\u{0}\u{1}[", "[]", "=", "[grating]]", "a=b=c", "[grating]\n = ",
            "[output]\nbins = 99999999999999999999999",
        ] {
            let _ = parse_config(junk);
        }
    }
}
