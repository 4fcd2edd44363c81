//! Fuzzes the configuration parser: any byte input must either parse
//! into a validated Config or return a structured error, never panic.
//! A successfully parsed config must survive the derived invariants
//! (positive wavelength, ordered ranges, usable integrator step).

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = emflow::parse_config(text) {
            assert!(cfg.wavelength > 0.0);
            assert!(cfg.screen_distance > 0.0);
            assert!(cfg.range.1 > cfg.range.0);
            assert!(cfg.visibility_window.1 > cfg.visibility_window.0);
            assert!(cfg.bins >= 1);
            let integ = cfg.integrator();
            assert!(integ.step > 0.0 && integ.step.is_finite());
            assert!(cfg.grating.slit_width() < cfg.grating.pitch());
        }
    }
});
