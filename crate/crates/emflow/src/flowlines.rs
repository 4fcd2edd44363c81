//! Energy flow lines: streamlines of the time-averaged Poynting field.
//!
//! The flux behind the grating never points backwards (S_y > 0 everywhere
//! we probe), so the lines are single-valued in y and we integrate
//! x(y), z(y) with classic RK4 using y as the independent variable. Near
//! nodal points the slopes blow up; the stepper halves the step a few
//! times and gives up with a `NodalStall` tag rather than integrating
//! garbage.

use thiserror::Error;

use crate::emfield::{poynting_free, poynting_polarized, FlowError, FlowState};
use crate::polarization::PolarizationSpec;
use crate::propagator::{PropagateError, Propagator};

/// Which field drives the streamlines.
pub enum FlowScenario<'a> {
    /// Both slits open, no polarizers: the full field is one scalar mode
    /// sum dressed with the incident polarization.
    Free {
        prop: &'a Propagator,
        pol: PolarizationSpec,
    },
    /// Orthogonal polarizers: the slit at +d/2 feeds the z-axis (alpha)
    /// component, the slit at -d/2 the x-axis (beta) one. `swap`
    /// exchanges the two.
    Polarized {
        prop: &'a Propagator,
        pol: PolarizationSpec,
        swap: bool,
    },
}

#[derive(Debug, Error)]
pub enum FlowLineError {
    #[error(transparent)]
    Propagate(#[from] PropagateError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("backflow at ({x}, {y}): S_y = {sy} <= 0")]
    Backflow { x: f64, y: f64, sy: f64 },
}

impl FlowScenario<'_> {
    pub fn propagator(&self) -> &Propagator {
        match self {
            FlowScenario::Free { prop, .. } | FlowScenario::Polarized { prop, .. } => prop,
        }
    }

    pub fn flow_state(&self, x: f64, y: f64) -> Result<FlowState, FlowLineError> {
        match self {
            FlowScenario::Free { prop, pol } => {
                let f = prop.propagate(x, y)?;
                Ok(poynting_free(&f, pol, prop.k())?)
            }
            FlowScenario::Polarized { prop, pol, swap } => {
                let (i1, i2) = if *swap { (0, 1) } else { (1, 0) };
                let f1 = prop.slit_field(i1, x, y)?;
                let f2 = prop.slit_field(i2, x, y)?;
                Ok(poynting_polarized(&f1, &f2, pol, prop.k())?)
            }
        }
    }
}

/// Slopes (dx/dy, dz/dy) = (S_x/S_y, S_z/S_y) of the streamline through
/// a point.
pub fn velocity_slopes(scenario: &FlowScenario, x: f64, y: f64) -> Result<(f64, f64), FlowLineError> {
    let st = scenario.flow_state(x, y)?;
    if st.s[1] <= 0.0 {
        return Err(FlowLineError::Backflow { x, y, sy: st.s[1] });
    }
    Ok((st.s[0] / st.s[1], st.s[2] / st.s[1]))
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    /// Base step in y, metres.
    pub step: f64,
    /// Cap on the ramped step, metres. The flow field varies on the slit
    /// scale near the grating but only on the (much coarser) fringe
    /// scale downstream, so the step grows linearly with y up to this
    /// cap.
    pub step_cap: f64,
    /// Dimensionless ramp divisor: the scheduled step is
    /// clamp(y / step_ramp, step, step_cap).
    pub step_ramp: f64,
    /// Launch plane y0 for ensemble starts. Within a few wavelengths of
    /// the grating the Kirchhoff boundary terms dominate the flux and
    /// S_y can point backwards; five wavelengths clears that layer.
    pub launch_offset: f64,
    /// Hard cap on accepted steps per trajectory.
    pub max_steps: usize,
    /// Step halvings attempted when a nodal point blocks a step.
    pub max_halvings: u32,
}

impl IntegratorConfig {
    /// Default resolution: one twentieth of a wavelength, launched five
    /// wavelengths behind the grating.
    pub fn for_wavelength(lambda: f64) -> Self {
        IntegratorConfig {
            step: lambda / 20.0,
            step_cap: 2.0 * lambda,
            step_ramp: 100.0,
            launch_offset: 5.0 * lambda,
            max_steps: 400_000,
            max_halvings: 8,
        }
    }
}

/// Why integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedScreen,
    /// Step halving exhausted against a nodal region.
    NodalStall,
    /// The line ran into a region of reversed axial flux (a near-field
    /// vortex), where y can no longer serve as the independent variable.
    BackflowStall,
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sampled points (x, y, z), strictly increasing in y.
    pub points: Vec<[f64; 3]>,
    /// Slit the line started in, if it started at the grating.
    pub slit: Option<usize>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn arrival(&self) -> [f64; 3] {
        *self.points.last().expect("trajectory has at least the start point")
    }

    /// Linear interpolation of x at a given y inside the sampled range.
    pub fn x_at(&self, y: f64) -> f64 {
        interp(&self.points, y, 0)
    }

    pub fn z_at(&self, y: f64) -> f64 {
        interp(&self.points, y, 2)
    }
}

fn interp(points: &[[f64; 3]], y: f64, comp: usize) -> f64 {
    let i = points.partition_point(|p| p[1] < y);
    if i == 0 {
        return points[0][comp];
    }
    if i == points.len() {
        return points[points.len() - 1][comp];
    }
    let (a, b) = (points[i - 1], points[i]);
    let t = (y - a[1]) / (b[1] - a[1]);
    a[comp] + t * (b[comp] - a[comp])
}

/// One RK4 step of size h from (x, z) at y.
fn rk4_step(
    scenario: &FlowScenario,
    x: f64,
    y: f64,
    z: f64,
    h: f64,
) -> Result<(f64, f64), FlowLineError> {
    let (k1x, k1z) = velocity_slopes(scenario, x, y)?;
    let (k2x, k2z) = velocity_slopes(scenario, x + 0.5 * h * k1x, y + 0.5 * h)?;
    let (k3x, k3z) = velocity_slopes(scenario, x + 0.5 * h * k2x, y + 0.5 * h)?;
    let (k4x, k4z) = velocity_slopes(scenario, x + h * k3x, y + h)?;
    Ok((
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        z + h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
    ))
}

/// Integrate the streamline from `start` up to the screen plane
/// y = `screen_y`. Nodal points trigger local step halving; propagation
/// and backflow failures abort with an error.
pub fn integrate(
    start: [f64; 3],
    scenario: &FlowScenario,
    screen_y: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, FlowLineError> {
    assert!(start[1] < screen_y, "start must lie before the screen");
    let slit = scenario.propagator().grating().slit_containing(start[0]);
    let mut points = vec![start];
    let (mut x, mut y, mut z) = (start[0], start[1], start[2]);

    for _ in 0..cfg.max_steps {
        if y >= screen_y {
            return Ok(Trajectory {
                points,
                slit,
                termination: Termination::ReachedScreen,
            });
        }
        let mut h = (y / cfg.step_ramp)
            .clamp(cfg.step, cfg.step_cap.max(cfg.step))
            .min(screen_y - y);
        let mut halvings = 0;
        let (nx, nz) = loop {
            match rk4_step(scenario, x, y, z, h) {
                Ok(next) => break next,
                Err(
                    FlowLineError::Flow(FlowError::NodalPoint { .. })
                    | FlowLineError::Backflow { .. },
                ) if halvings < cfg.max_halvings => {
                    h *= 0.5;
                    halvings += 1;
                }
                Err(FlowLineError::Flow(FlowError::NodalPoint { .. })) => {
                    return Ok(Trajectory {
                        points,
                        slit,
                        termination: Termination::NodalStall,
                    });
                }
                Err(FlowLineError::Backflow { .. }) => {
                    return Ok(Trajectory {
                        points,
                        slit,
                        termination: Termination::BackflowStall,
                    });
                }
                Err(e) => return Err(e),
            }
        };
        x = nx;
        z = nz;
        y += h;
        points.push([x, y, z]);
    }

    if y >= screen_y {
        Ok(Trajectory {
            points,
            slit,
            termination: Termination::ReachedScreen,
        })
    } else {
        Ok(Trajectory {
            points,
            slit,
            termination: Termination::StepLimit,
        })
    }
}

/// Straight segment travelled by the incident plane wave in front of the
/// grating, and its traversal time: upstream of the slits the flow is
/// exactly along +y at speed c.
pub struct IncidentSegment {
    pub points: [[f64; 3]; 2],
    /// Traversal time, seconds.
    pub duration: f64,
}

pub fn incident_path(x: f64, z: f64, upstream_length: f64) -> IncidentSegment {
    assert!(upstream_length > 0.0);
    IncidentSegment {
        points: [[x, -upstream_length, z], [x, 0.0, z]],
        duration: upstream_length / crate::constants::C,
    }
}

/// Total pairwise order inversions of the x-coordinate across a bundle of
/// trajectories, sampled on `n_samples` common y planes. Zero means the
/// lines never cross in the XY projection.
pub fn count_crossings(trajs: &[Trajectory], n_samples: usize) -> usize {
    if trajs.len() < 2 {
        return 0;
    }
    let y_lo = trajs
        .iter()
        .map(|t| t.points[0][1])
        .fold(f64::NEG_INFINITY, f64::max);
    let y_hi = trajs
        .iter()
        .map(|t| t.arrival()[1])
        .fold(f64::INFINITY, f64::min);
    assert!(y_hi > y_lo, "trajectories share no y range");

    let order_at = |y: f64| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..trajs.len()).collect();
        idx.sort_by(|&a, &b| {
            trajs[a]
                .x_at(y)
                .partial_cmp(&trajs[b].x_at(y))
                .expect("finite coordinates")
        });
        idx
    };

    let base = order_at(y_lo);
    let mut rank0 = vec![0usize; trajs.len()];
    for (r, &t) in base.iter().enumerate() {
        rank0[t] = r;
    }

    let mut total = 0;
    for i in 1..=n_samples {
        let y = y_lo + (y_hi - y_lo) * i as f64 / n_samples as f64;
        let seq: Vec<usize> = order_at(y).iter().map(|&t| rank0[t]).collect();
        total += count_inversions(&seq);
    }
    total
}

/// Inversion count by merge sort, O(n log n).
fn count_inversions(seq: &[usize]) -> usize {
    fn go(buf: &mut [usize], tmp: &mut Vec<usize>) -> usize {
        let n = buf.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = {
            let (l, r) = buf.split_at_mut(mid);
            go(l, tmp) + go(r, tmp)
        };
        tmp.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if buf[i] <= buf[j] {
                tmp.push(buf[i]);
                i += 1;
            } else {
                tmp.push(buf[j]);
                j += 1;
                inv += mid - i;
            }
        }
        tmp.extend_from_slice(&buf[i..mid]);
        tmp.extend_from_slice(&buf[j..n]);
        buf.copy_from_slice(tmp);
        inv
    }
    let mut buf = seq.to_vec();
    let mut tmp = Vec::with_capacity(buf.len());
    go(&mut buf, &mut tmp)
}
