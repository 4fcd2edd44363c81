use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use emflow::config::{parse_config, Config, ScenarioMode};
use emflow::emfield::{poynting_free, poynting_polarized};
use emflow::ensemble::{histogram_arrivals, run_ensemble, sample_initials, HistogramAxis};
use emflow::export::{
    write_field_map, write_histogram, write_summary, write_trajectories, FieldMapRow, Summary,
};
use emflow::flowlines::{count_crossings, FlowScenario};
use emflow::propagator::Propagator;

#[derive(Parser)]
#[command(name = "emflow", version, about = "Energy flow lines behind slit gratings")]
struct Cli {
    /// Configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (CSV); stdout when omitted. A `.summary.json` sidecar
    /// is written next to it where applicable.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the ensemble RNG seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample S and U on a grid between the grating and the screen.
    Fieldmap {
        #[arg(long, default_value_t = 201)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        ny: usize,
    },
    /// Integrate an ensemble of flow lines and dump the paths.
    Trajectories,
    /// Integrate an ensemble and histogram the screen arrivals.
    Histogram,
    /// Run the internal cross-formulation checks.
    Validate,
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.config {
        None => Config::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
    };
    if let Some(seed) = cli.seed {
        cfg.ensemble.sampling = match cfg.ensemble.sampling {
            emflow::ensemble::Sampling::UniformStratified => {
                emflow::ensemble::Sampling::UniformRandom { seed }
            }
            emflow::ensemble::Sampling::UniformRandom { .. } => {
                emflow::ensemble::Sampling::UniformRandom { seed }
            }
        };
    }
    Ok(cfg)
}

fn scenario<'a>(cfg: &Config, prop: &'a Propagator) -> FlowScenario<'a> {
    match cfg.mode {
        ScenarioMode::Free => FlowScenario::Free {
            prop,
            pol: cfg.polarization.clone(),
        },
        ScenarioMode::Polarized { swap } => FlowScenario::Polarized {
            prop,
            pol: cfg.polarization.clone(),
            swap,
        },
    }
}

fn open_out(cli: &Cli) -> io::Result<Box<dyn Write>> {
    match &cli.out {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => Ok(Box::new(io::BufWriter::new(fs::File::create(p)?))),
    }
}

fn emit_summary(cli: &Cli, summary: &Summary) -> io::Result<()> {
    match &cli.out {
        None => {
            write_summary(io::stderr().lock(), summary)?;
            eprintln!();
            Ok(())
        }
        Some(p) => {
            let side = p.with_extension("summary.json");
            write_summary(io::BufWriter::new(fs::File::create(side)?), summary)
        }
    }
}

fn base_summary(cfg: &Config) -> Summary {
    Summary {
        mode: match cfg.mode {
            ScenarioMode::Free => "free".into(),
            ScenarioMode::Polarized { swap: false } => "polarized".into(),
            ScenarioMode::Polarized { swap: true } => "polarized-swapped".into(),
        },
        backend: format!("{:?}", cfg.backend),
        wavelength_nm: cfg.wavelength / 1e-9,
        screen_distance_um: cfg.screen_distance / 1e-6,
        n_trajectories: 0,
        reached_screen: 0,
        nodal_stalls: 0,
        l2_distance: None,
        visibility: None,
        crossings: None,
    }
}

/// Theory density on the screen: the energy density of the full wave
/// field at y = L, which the arrival statistics must reproduce.
fn theory_density<'a>(cfg: &'a Config, prop: &'a Propagator) -> impl Fn(f64) -> f64 + 'a {
    let pol = cfg.polarization.clone();
    let mode = cfg.mode;
    let l = cfg.screen_distance;
    let k = cfg.wavenumber();
    move |x: f64| {
        let u = match mode {
            ScenarioMode::Free => prop
                .propagate(x, l)
                .ok()
                .and_then(|f| poynting_free(&f, &pol, k).ok().map(|s| s.u)),
            ScenarioMode::Polarized { swap } => {
                let (i1, i2) = if swap { (0, 1) } else { (1, 0) };
                match (prop.slit_field(i1, x, l), prop.slit_field(i2, x, l)) {
                    (Ok(f1), Ok(f2)) => poynting_polarized(&f1, &f2, &pol, k).ok().map(|s| s.u),
                    _ => None,
                }
            }
        };
        u.unwrap_or(0.0)
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let cfg = load_config(cli)?;
    let prop = Propagator::new(cfg.grating.clone(), cfg.wavenumber(), cfg.backend);
    let io_err = |e: io::Error| format!("write failed: {e}");

    match cli.command {
        Command::Fieldmap { nx, ny } => {
            if nx < 2 || ny < 1 {
                return Err("fieldmap needs nx >= 2 and ny >= 1".into());
            }
            let sc = scenario(&cfg, &prop);
            let mut rows = Vec::with_capacity(nx * ny);
            for iy in 0..ny {
                let y = cfg.screen_distance * (iy as f64 + 1.0) / ny as f64;
                for ix in 0..nx {
                    let x = cfg.range.0
                        + (cfg.range.1 - cfg.range.0) * ix as f64 / (nx - 1) as f64;
                    match sc.flow_state(x, y) {
                        Ok(state) => rows.push(FieldMapRow { x, y, state }),
                        // Nodal points carry no flow; leave them out.
                        Err(emflow::flowlines::FlowLineError::Flow(_)) => {}
                        Err(e) => return Err(format!("field evaluation failed: {e}")),
                    }
                }
            }
            write_field_map(open_out(cli).map_err(io_err)?, &rows).map_err(io_err)?;
            Ok(true)
        }
        Command::Trajectories | Command::Histogram => {
            let sc = scenario(&cfg, &prop);
            let starts = sample_initials(&cfg.grating, &cfg.ensemble, cfg.wavelength);
            let trajs = run_ensemble(&starts, &sc, &cfg.integrator(), cfg.screen_distance)
                .map_err(|e| format!("flow line integration failed: {e}"))?;
            let (reached, stalled) = Summary::count_terminations(&trajs);
            let mut summary = base_summary(&cfg);
            summary.n_trajectories = trajs.len();
            summary.reached_screen = reached;
            summary.nodal_stalls = stalled;

            match cli.command {
                Command::Trajectories => {
                    if trajs.len() <= 200 {
                        summary.crossings = Some(count_crossings(&trajs, 200));
                    }
                    write_trajectories(open_out(cli).map_err(io_err)?, &trajs)
                        .map_err(io_err)?;
                }
                _ => {
                    let theory = theory_density(&cfg, &prop);
                    let theory_ref: Option<&dyn Fn(f64) -> f64> = match cfg.axis {
                        HistogramAxis::X => Some(&theory),
                        HistogramAxis::Z => None,
                    };
                    let hist =
                        histogram_arrivals(&trajs, cfg.axis, cfg.range, cfg.bins, theory_ref)
                            .map_err(|e| format!("histogram failed: {e}"))?;
                    summary.l2_distance = hist.l2_distance;
                    if cfg.axis == HistogramAxis::X {
                        // Visibility from a finely sampled theory curve.
                        let n = 2000;
                        let xs: Vec<f64> = (0..=n)
                            .map(|i| {
                                cfg.visibility_window.0
                                    + (cfg.visibility_window.1 - cfg.visibility_window.0)
                                        * i as f64
                                        / n as f64
                            })
                            .collect();
                        let ys: Vec<f64> = xs.iter().map(|&x| theory(x)).collect();
                        summary.visibility =
                            emflow::ensemble::visibility(&xs, &ys, cfg.visibility_window).ok();
                    }
                    write_histogram(open_out(cli).map_err(io_err)?, &hist).map_err(io_err)?;
                }
            }
            emit_summary(cli, &summary).map_err(io_err)?;
            Ok(true)
        }
        Command::Validate => {
            let results = emflow::validate::run_checks(&cfg);
            let mut out = open_out(cli).map_err(io_err)?;
            let mut all_passed = true;
            for r in &results {
                all_passed &= r.passed;
                writeln!(
                    out,
                    "{:<24} {:<4} metric {:.3e} threshold {:.1e}",
                    r.name,
                    if r.passed { "ok" } else { "FAIL" },
                    r.metric,
                    r.threshold
                )
                .map_err(io_err)?;
            }
            Ok(all_passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.workers {
            b = b.num_threads(w.max(1));
        }
        match b.build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                return ExitCode::from(2);
            }
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
