//! Single-pixel step traces: the internal waveforms behind the events.
//!
//! The trace replays exactly what the array simulator computes for one
//! pixel, same random stream and same mismatch factors, so the emitted
//! events line up one-for-one with that pixel's slice of a full run.

use std::io::{self, Write};

use evpix_core::array::{ArrayConfig, ArrayError, MismatchField, SimPlan};
use evpix_core::pixel::{leak_rate, Event, PixelState};
use evpix_core::rng::{pixel_rng, StreamKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("{0}")]
    Array(#[from] ArrayError),
    #[error("pixel ({x}, {y}) outside the {width}x{height} array")]
    OutOfBounds { x: u32, y: u32, width: u32, height: u32 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// What a finished trace did, for the CLI footer.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSummary {
    pub dt_s: f64,
    pub steps: u64,
    pub events: Vec<Event>,
    /// Effective thresholds at this pixel, after mismatch.
    pub theta_on: f64,
    pub theta_off: f64,
    pub diagnostics: Vec<String>,
}

/// Steps pixel `(x, y)` of the configured array and writes one CSV row
/// per step: time, illuminance, the log target, both filter stages, the
/// synthetic differencing-amp output and the contrast delta, plus the
/// event polarity (0 when the step emitted nothing).
pub fn write_trace_csv<W: Write>(
    mut w: W,
    cfg: &ArrayConfig,
    x: u32,
    y: u32,
) -> Result<TraceSummary, TraceError> {
    if x >= cfg.width || y >= cfg.height {
        return Err(TraceError::OutOfBounds { x, y, width: cfg.width, height: cfg.height });
    }
    let plan = SimPlan::new(cfg)?;
    let profile = plan.profile();
    let mismatch = if cfg.mismatch {
        MismatchField::generate(cfg.seed, cfg.width, cfg.height, &cfg.params)
    } else {
        MismatchField::uniform(cfg.width, cfg.height)
    };
    let (f_on, f_off, f_leak) = mismatch.at(x, y);
    let theta_on = profile.derived.theta_on * f_on;
    let theta_off = profile.derived.theta_off * f_off;

    let rng = pixel_rng(cfg.seed, x, y, StreamKind::Step);
    let lux0 = cfg.stimulus.lux(x, y, 0.0);
    let mut state = PixelState::settled(lux0, 0.0, &cfg.params, rng);

    writeln!(w, "# pixel ({x}, {y}) of {}x{}, seed {}", cfg.width, cfg.height, cfg.seed)?;
    writeln!(
        w,
        "# dt_s {:.9}, theta_on {:.6}, theta_off {:.6}, refractory_s {:.6}",
        plan.dt(),
        theta_on,
        theta_off,
        profile.refractory_s
    )?;
    writeln!(w, "t_s,lux,v_log,v_pr,v_sf,v_diff,delta,event")?;

    let mut events = Vec::new();
    let amp_gain = cfg.params.amp_gain;
    for i in 0..plan.steps() {
        let t_start = i as f64 * plan.dt();
        let t_end = (i + 1) as f64 * plan.dt();
        let lux = cfg.stimulus.lux(x, y, t_start);
        let drive = profile.drive(lux);
        let leak =
            if cfg.leak { leak_rate(lux, &cfg.params) * f_leak } else { 0.0 };
        let ev = state.step(
            profile,
            &drive,
            theta_on,
            theta_off,
            leak,
            cfg.noise,
            t_end,
            x as u16,
            y as u16,
        );
        let v_diff = amp_gain * (state.v_sf - state.v_ref);
        let delta = state.contrast(profile);
        writeln!(
            w,
            "{t_end:.6},{lux:.6e},{:.6},{:.6},{:.6},{:.6},{delta:.6},{}",
            drive.v_log,
            state.v_pr,
            state.v_sf,
            v_diff,
            ev.map_or(0, |e| e.polarity.sign()),
        )?;
        if let Some(e) = ev {
            events.push(e);
        }
    }

    Ok(TraceSummary {
        dt_s: plan.dt(),
        steps: plan.steps(),
        events,
        theta_on,
        theta_off,
        diagnostics: plan.diagnostics().to_vec(),
    })
}
