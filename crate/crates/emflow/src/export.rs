//! CSV and JSON output. Numbers are written with 12 significant digits
//! so repeated runs can be compared byte for byte.

use std::io::{self, Write};

use serde::Serialize;

use crate::emfield::FlowState;
use crate::ensemble::Histogram;
use crate::flowlines::{Termination, Trajectory};

fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// One row of a field map: flow state sampled at (x, y).
pub struct FieldMapRow {
    pub x: f64,
    pub y: f64,
    pub state: FlowState,
}

pub fn write_field_map<W: Write>(mut w: W, rows: &[FieldMapRow]) -> io::Result<()> {
    writeln!(w, "x,y,Sx,Sy,Sz,U")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            num(r.x),
            num(r.y),
            num(r.state.s[0]),
            num(r.state.s[1]),
            num(r.state.s[2]),
            num(r.state.u)
        )?;
    }
    Ok(())
}

pub fn write_trajectories<W: Write>(mut w: W, trajs: &[Trajectory]) -> io::Result<()> {
    writeln!(w, "traj_id,slit,x,y,z")?;
    for (id, t) in trajs.iter().enumerate() {
        let slit = t
            .slit
            .map_or_else(|| "-".to_string(), |s| s.to_string());
        for p in &t.points {
            writeln!(w, "{id},{slit},{},{},{}", num(p[0]), num(p[1]), num(p[2]))?;
        }
    }
    Ok(())
}

pub fn write_histogram<W: Write>(mut w: W, h: &Histogram) -> io::Result<()> {
    writeln!(w, "bin_center,count_density,theory_density")?;
    let centers = h.bin_centers();
    for (i, c) in centers.iter().enumerate() {
        let theory = h
            .theory
            .as_ref()
            .map_or_else(String::new, |t| num(t[i]));
        writeln!(w, "{},{},{}", num(*c), num(h.counts[i]), theory)?;
    }
    Ok(())
}

/// Machine-readable run summary.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub mode: String,
    pub backend: String,
    pub wavelength_nm: f64,
    pub screen_distance_um: f64,
    pub n_trajectories: usize,
    pub reached_screen: usize,
    pub nodal_stalls: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossings: Option<usize>,
}

impl Summary {
    pub fn count_terminations(trajs: &[Trajectory]) -> (usize, usize) {
        let reached = trajs
            .iter()
            .filter(|t| t.termination == Termination::ReachedScreen)
            .count();
        let stalled = trajs
            .iter()
            .filter(|t| {
                matches!(
                    t.termination,
                    Termination::NodalStall | Termination::BackflowStall
                )
            })
            .count();
        (reached, stalled)
    }
}

pub fn write_summary<W: Write>(w: W, s: &Summary) -> io::Result<()> {
    serde_json::to_writer_pretty(w, s).map_err(io::Error::from)
}
