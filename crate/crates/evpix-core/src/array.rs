//! Whole-array simulation.
//!
//! A run is described by [`ArrayConfig`], validated once into a [`SimPlan`],
//! then advanced step by step. Every pixel owns an independent random
//! stream keyed by (seed, x, y), so the event stream is a pure function of
//! the config and any subset of rows can be simulated in isolation:
//! [`SimPlan::run_rows`] on disjoint bands, concatenated and sorted by
//! [`Event::order_key`], reproduces the serial run bit for bit. The std
//! companion crate uses that to fan rows out across threads.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::bias::{diagnostics, BiasConfig, BiasError};
use crate::params::PixelParams;
use crate::pixel::{leak_rate, Event, PixelState, Polarity, StepProfile};
use crate::rng::{pixel_rng, Gaussian, StreamKind};
use crate::stimulus::{Stimulus, StimulusError};

/// Full description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    pub width: u32,
    pub height: u32,
    /// Master seed; combined with pixel coordinates per stream.
    pub seed: u64,
    pub duration_s: f64,
    /// Step size in seconds; `None` picks the largest step the sampling
    /// guard allows for this stimulus and bias point.
    pub dt_s: Option<f64>,
    /// Temporal noise injection on or off.
    pub noise: bool,
    /// Leak events on or off.
    pub leak: bool,
    /// Fixed-pattern parameter spread on or off.
    pub mismatch: bool,
    pub bias: BiasConfig,
    pub params: PixelParams,
    pub stimulus: Stimulus,
}

impl ArrayConfig {
    /// A quiet single-setting baseline: all non-determinism off, nominal
    /// biases, constant illuminance. Tests and sweeps override fields.
    pub fn baseline(width: u32, height: u32, lux: f64, duration_s: f64) -> ArrayConfig {
        let params = PixelParams::default();
        ArrayConfig {
            width,
            height,
            seed: 0,
            duration_s,
            dt_s: None,
            noise: false,
            leak: false,
            mismatch: false,
            bias: BiasConfig::nominal(&params),
            params,
            stimulus: Stimulus::Constant { lux },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArrayError {
    Bias(BiasError),
    Stimulus(StimulusError),
    /// A physical model parameter is out of range.
    Params(&'static str),
    /// Array dimensions must both be at least one pixel.
    ZeroSize,
    /// Event coordinates are 16-bit; larger arrays cannot be addressed.
    TooLarge { dim: u32 },
    DurationNonPositive { value: f64 },
    StepNonPositive { value: f64 },
    /// The requested step undersamples the fastest pole reachable under
    /// this stimulus; results would alias.
    SamplingTooCoarse { dt: f64, limit: f64 },
    /// A frame stimulus must cover the whole array.
    FrameTooSmall { frame_w: u32, frame_h: u32, array_w: u32, array_h: u32 },
}

impl fmt::Display for ArrayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayError::Bias(e) => write!(f, "bias: {e}"),
            ArrayError::Stimulus(e) => write!(f, "stimulus: {e}"),
            ArrayError::Params(msg) => write!(f, "params: {msg}"),
            ArrayError::ZeroSize => write!(f, "array dimensions must be nonzero"),
            ArrayError::TooLarge { dim } => {
                write!(f, "array dimension {dim} exceeds the 65535-pixel coordinate range")
            }
            ArrayError::DurationNonPositive { value } => {
                write!(f, "duration_s must be positive, got {value}")
            }
            ArrayError::StepNonPositive { value } => {
                write!(f, "dt_s must be positive, got {value}")
            }
            ArrayError::SamplingTooCoarse { dt, limit } => {
                write!(f, "dt_s = {dt} undersamples the signal chain; need at most {limit}")
            }
            ArrayError::FrameTooSmall { frame_w, frame_h, array_w, array_h } => {
                write!(
                    f,
                    "frames are {frame_w}x{frame_h} but the array is {array_w}x{array_h}"
                )
            }
        }
    }
}

impl core::error::Error for ArrayError {}

impl From<BiasError> for ArrayError {
    fn from(e: BiasError) -> ArrayError {
        ArrayError::Bias(e)
    }
}

impl From<StimulusError> for ArrayError {
    fn from(e: StimulusError) -> ArrayError {
        ArrayError::Stimulus(e)
    }
}

/// Per-pixel fixed-pattern factors. Thresholds and leak rates are scaled
/// by lognormal draws (median 1) from each pixel's dedicated mismatch
/// stream, so the field depends only on (seed, x, y), never on sim length.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchField {
    width: u32,
    theta_on: Vec<f64>,
    theta_off: Vec<f64>,
    leak: Vec<f64>,
}

impl MismatchField {
    /// All factors exactly one; used when mismatch is disabled.
    pub fn uniform(width: u32, height: u32) -> MismatchField {
        let n = (width as usize) * (height as usize);
        MismatchField {
            width,
            theta_on: alloc::vec![1.0; n],
            theta_off: alloc::vec![1.0; n],
            leak: alloc::vec![1.0; n],
        }
    }

    pub fn generate(seed: u64, width: u32, height: u32, params: &PixelParams) -> MismatchField {
        let n = (width as usize) * (height as usize);
        let mut theta_on = Vec::with_capacity(n);
        let mut theta_off = Vec::with_capacity(n);
        let mut leak = Vec::with_capacity(n);
        for y in 0..height {
            for x in 0..width {
                let mut rng = pixel_rng(seed, x, y, StreamKind::Mismatch);
                let mut gauss = Gaussian::new();
                theta_on.push(libm::exp(params.mismatch_sigma_theta * gauss.sample(&mut rng)));
                theta_off.push(libm::exp(params.mismatch_sigma_theta * gauss.sample(&mut rng)));
                leak.push(libm::exp(params.mismatch_sigma_leak * gauss.sample(&mut rng)));
            }
        }
        MismatchField { width, theta_on, theta_off, leak }
    }

    /// (ON-threshold, OFF-threshold, leak-rate) factors for one pixel.
    pub fn at(&self, x: u32, y: u32) -> (f64, f64, f64) {
        let i = (y as usize) * (self.width as usize) + x as usize;
        (self.theta_on[i], self.theta_off[i], self.leak[i])
    }
}

/// Result of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    /// Events in total order (time, row, column, polarity).
    pub events: Vec<Event>,
    /// Step size actually used.
    pub dt_s: f64,
    pub steps: u64,
    /// Human-readable warnings about the operating point.
    pub diagnostics: Vec<String>,
}

/// A validated, ready-to-run simulation: operating point derived, step
/// size fixed, mismatch field drawn.
#[derive(Debug, Clone)]
pub struct SimPlan {
    width: u32,
    height: u32,
    seed: u64,
    noise: bool,
    leak: bool,
    uniform: bool,
    stimulus: Stimulus,
    params: PixelParams,
    profile: StepProfile,
    mismatch: MismatchField,
    dt: f64,
    steps: u64,
    diagnostics: Vec<String>,
}

impl SimPlan {
    pub fn new(cfg: &ArrayConfig) -> Result<SimPlan, ArrayError> {
        if cfg.width == 0 || cfg.height == 0 {
            return Err(ArrayError::ZeroSize);
        }
        for dim in [cfg.width, cfg.height] {
            if dim > u16::MAX as u32 {
                return Err(ArrayError::TooLarge { dim });
            }
        }
        if !(cfg.duration_s > 0.0 && cfg.duration_s.is_finite()) {
            return Err(ArrayError::DurationNonPositive { value: cfg.duration_s });
        }
        cfg.params.validate().map_err(ArrayError::Params)?;
        cfg.bias.validate()?;
        cfg.stimulus.validate()?;
        if let Stimulus::Frames(fs) = &cfg.stimulus {
            if fs.width < cfg.width || fs.height < cfg.height {
                return Err(ArrayError::FrameTooSmall {
                    frame_w: fs.width,
                    frame_h: fs.height,
                    array_w: cfg.width,
                    array_h: cfg.height,
                });
            }
        }

        let derived = crate::bias::derive(&cfg.bias, &cfg.params)?;
        // fastest pole reachable anywhere during the run bounds the step
        let max_lux = cfg.stimulus.max_lux(cfg.duration_s);
        let i_p_max = cfg.params.k_lux_to_amps * (max_lux + cfg.params.e_dark);
        let f1_max = (cfg.params.f_pr_per_amp * i_p_max).min(derived.f_pr_max);
        let limit = 0.1 / f1_max.max(derived.f_sf);
        let dt = match cfg.dt_s {
            Some(dt) => {
                if !(dt > 0.0 && dt.is_finite()) {
                    return Err(ArrayError::StepNonPositive { value: dt });
                }
                if dt > limit * (1.0 + 1e-9) {
                    return Err(ArrayError::SamplingTooCoarse { dt, limit });
                }
                dt
            }
            None => limit,
        };
        let steps = libm::ceil(cfg.duration_s / dt) as u64;

        let profile = StepProfile::new(&cfg.bias, &cfg.params, dt)?;
        let diagnostics: Vec<String> =
            diagnostics(&profile.derived).into_iter().map(|s| s.to_string()).collect();
        let mismatch = if cfg.mismatch {
            MismatchField::generate(cfg.seed, cfg.width, cfg.height, &cfg.params)
        } else {
            MismatchField::uniform(cfg.width, cfg.height)
        };
        Ok(SimPlan {
            width: cfg.width,
            height: cfg.height,
            seed: cfg.seed,
            noise: cfg.noise,
            leak: cfg.leak,
            uniform: cfg.stimulus.is_uniform(),
            stimulus: cfg.stimulus.clone(),
            params: cfg.params.clone(),
            profile,
            mismatch,
            dt,
            steps,
            diagnostics,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    pub fn profile(&self) -> &StepProfile {
        &self.profile
    }

    /// Simulates a band of rows over the whole duration. Events come out
    /// already ordered because steps advance in lockstep across the band.
    pub fn run_rows(&self, rows: Range<u32>) -> Vec<Event> {
        let band = rows.end.saturating_sub(rows.start) as usize;
        let n = band * self.width as usize;
        let mut states = Vec::with_capacity(n);
        let mut pixels = Vec::with_capacity(n);
        for y in rows.clone() {
            for x in 0..self.width {
                let rng = pixel_rng(self.seed, x, y, StreamKind::Step);
                let lux0 = self.stimulus.lux(x, y, 0.0);
                states.push(PixelState::settled(lux0, 0.0, &self.params, rng));
                let (f_on, f_off, f_leak) = self.mismatch.at(x, y);
                pixels.push(PixelSetup {
                    theta_on: self.profile.derived.theta_on * f_on,
                    theta_off: self.profile.derived.theta_off * f_off,
                    leak_factor: f_leak,
                });
            }
        }

        let mut events = Vec::new();
        for i in 0..self.steps {
            let t_start = i as f64 * self.dt;
            let t_end = (i + 1) as f64 * self.dt;
            if self.uniform {
                // one drive for every pixel this step
                let lux = self.stimulus.lux(0, 0, t_start);
                let drive = self.profile.drive(lux);
                let leak_base =
                    if self.leak { leak_rate(lux, &self.params) } else { 0.0 };
                let mut p = 0;
                for y in rows.clone() {
                    for x in 0..self.width {
                        let px = &pixels[p];
                        if let Some(ev) = states[p].step(
                            &self.profile,
                            &drive,
                            px.theta_on,
                            px.theta_off,
                            leak_base * px.leak_factor,
                            self.noise,
                            t_end,
                            x as u16,
                            y as u16,
                        ) {
                            events.push(ev);
                        }
                        p += 1;
                    }
                }
            } else {
                let mut p = 0;
                for y in rows.clone() {
                    for x in 0..self.width {
                        let lux = self.stimulus.lux(x, y, t_start);
                        let drive = self.profile.drive(lux);
                        let px = &pixels[p];
                        let leak_base =
                            if self.leak { leak_rate(lux, &self.params) } else { 0.0 };
                        if let Some(ev) = states[p].step(
                            &self.profile,
                            &drive,
                            px.theta_on,
                            px.theta_off,
                            leak_base * px.leak_factor,
                            self.noise,
                            t_end,
                            x as u16,
                            y as u16,
                        ) {
                            events.push(ev);
                        }
                        p += 1;
                    }
                }
            }
        }
        events
    }
}

struct PixelSetup {
    theta_on: f64,
    theta_off: f64,
    leak_factor: f64,
}

/// Runs the whole array serially.
pub fn simulate(cfg: &ArrayConfig) -> Result<SimOutput, ArrayError> {
    let plan = SimPlan::new(cfg)?;
    let mut events = plan.run_rows(0..plan.height);
    events.sort_unstable_by_key(Event::order_key);
    Ok(SimOutput {
        events,
        dt_s: plan.dt,
        steps: plan.steps,
        diagnostics: plan.diagnostics,
    })
}

/// Per-pixel event counts, row-major, optionally restricted to one
/// polarity.
pub fn per_pixel_counts(
    events: &[Event],
    width: u32,
    height: u32,
    polarity: Option<Polarity>,
) -> Vec<u32> {
    let mut counts = alloc::vec![0u32; (width as usize) * (height as usize)];
    for ev in events {
        if polarity.is_none() || polarity == Some(ev.polarity) {
            counts[(ev.y as usize) * (width as usize) + ev.x as usize] += 1;
        }
    }
    counts
}

/// Per-pixel event rates in Hz.
pub fn per_pixel_rates(
    events: &[Event],
    width: u32,
    height: u32,
    duration_s: f64,
    polarity: Option<Polarity>,
) -> Vec<f64> {
    per_pixel_counts(events, width, height, polarity)
        .into_iter()
        .map(|c| c as f64 / duration_s)
        .collect()
}

/// Quantile with linear interpolation between order statistics, `q` in
/// [0, 1]. Sorts in place. NaN on empty input.
pub fn quantile(xs: &mut [f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("quantile input must not contain NaN"));
    let pos = q.clamp(0.0, 1.0) * (xs.len() - 1) as f64;
    let lo = pos as usize;
    let frac = pos - lo as f64;
    if frac == 0.0 || lo + 1 == xs.len() {
        xs[lo]
    } else {
        xs[lo] + frac * (xs[lo + 1] - xs[lo])
    }
}

/// Median; sorts in place.
pub fn median(xs: &mut [f64]) -> f64 {
    quantile(xs, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pixel;
    use approx::assert_relative_eq;

    #[test]
    fn quiet_array_emits_nothing() {
        let cfg = ArrayConfig::baseline(8, 8, 10.0, 1.0);
        let out = simulate(&cfg).unwrap();
        assert!(out.events.is_empty());
        assert!(out.steps > 0);
        assert!(out.dt_s > 0.0);
    }

    #[test]
    fn auto_step_sits_on_the_sampling_guard() {
        let cfg = ArrayConfig::baseline(2, 2, 10.0, 0.5);
        let plan = SimPlan::new(&cfg).unwrap();
        let (f1, f2) = pixel::bandwidth_poles(10.0, &cfg.bias, &cfg.params);
        assert_relative_eq!(plan.dt(), 0.1 / f1.max(f2), max_relative = 1e-12);
        // the guard pole follows the stimulus maximum, not the start level
        let mut stepped = cfg.clone();
        stepped.stimulus = Stimulus::LogStep { before_lux: 10.0, after_lux: 1000.0, t_step_s: 0.2 };
        let plan2 = SimPlan::new(&stepped).unwrap();
        let (f1b, f2b) = pixel::bandwidth_poles(1000.0, &cfg.bias, &cfg.params);
        assert_relative_eq!(plan2.dt(), 0.1 / f1b.max(f2b), max_relative = 1e-12);
    }

    #[test]
    fn coarse_step_rejected_exact_limit_accepted() {
        let mut cfg = ArrayConfig::baseline(2, 2, 10.0, 0.5);
        let limit = SimPlan::new(&cfg).unwrap().dt();
        cfg.dt_s = Some(limit * 1.5);
        match SimPlan::new(&cfg) {
            Err(ArrayError::SamplingTooCoarse { .. }) => {}
            other => panic!("expected SamplingTooCoarse, got {other:?}"),
        }
        cfg.dt_s = Some(limit);
        assert!(SimPlan::new(&cfg).is_ok());
    }

    #[test]
    fn config_validation_errors() {
        let cfg = ArrayConfig::baseline(0, 4, 10.0, 1.0);
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::ZeroSize)));

        let cfg = ArrayConfig::baseline(70_000, 4, 10.0, 1.0);
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::TooLarge { dim: 70_000 })));

        let mut cfg = ArrayConfig::baseline(4, 4, 10.0, 1.0);
        cfg.duration_s = 0.0;
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::DurationNonPositive { .. })));

        let mut cfg = ArrayConfig::baseline(4, 4, 10.0, 1.0);
        cfg.dt_s = Some(-1e-6);
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::StepNonPositive { .. })));

        let mut cfg = ArrayConfig::baseline(4, 4, 10.0, 1.0);
        cfg.bias.i_pr = -1.0;
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::Bias(_))));

        let mut cfg = ArrayConfig::baseline(4, 4, 10.0, 1.0);
        cfg.stimulus = Stimulus::Constant { lux: -2.0 };
        assert!(matches!(SimPlan::new(&cfg), Err(ArrayError::Stimulus(_))));
    }

    #[test]
    fn frames_must_cover_array() {
        use crate::stimulus::{FrameInterp, FrameSequence};
        let mut cfg = ArrayConfig::baseline(4, 4, 10.0, 0.1);
        cfg.stimulus = Stimulus::Frames(FrameSequence {
            width: 2,
            height: 2,
            frame_period_s: 0.05,
            interp: FrameInterp::Hold,
            frames: alloc::vec![alloc::vec![10.0; 4]],
        });
        match SimPlan::new(&cfg) {
            Err(ArrayError::FrameTooSmall { .. }) => {}
            other => panic!("expected FrameTooSmall, got {other:?}"),
        }
    }

    /// Dark noisy config reused by the determinism tests.
    fn noisy_cfg(seed: u64) -> ArrayConfig {
        let mut cfg = ArrayConfig::baseline(8, 8, 0.04, 20.0);
        cfg.seed = seed;
        cfg.noise = true;
        cfg.leak = true;
        cfg.mismatch = true;
        cfg
    }

    #[test]
    fn same_seed_reproduces_exactly() {
        let a = simulate(&noisy_cfg(7)).unwrap();
        let b = simulate(&noisy_cfg(7)).unwrap();
        assert!(!a.events.is_empty());
        assert_eq!(a.events, b.events);
    }

    #[test]
    fn different_seed_differs() {
        let a = simulate(&noisy_cfg(7)).unwrap();
        let b = simulate(&noisy_cfg(8)).unwrap();
        assert_ne!(a.events, b.events);
    }

    #[test]
    fn row_bands_match_serial_run() {
        let cfg = noisy_cfg(3);
        let serial = simulate(&cfg).unwrap();
        let plan = SimPlan::new(&cfg).unwrap();
        let mut banded = Vec::new();
        for band in [0..3u32, 3..4, 4..8] {
            banded.extend(plan.run_rows(band));
        }
        banded.sort_unstable_by_key(Event::order_key);
        assert_eq!(serial.events, banded);
    }

    #[test]
    fn events_are_totally_ordered_and_in_range() {
        let out = simulate(&noisy_cfg(11)).unwrap();
        let end_us = (out.steps as f64 * out.dt_s * 1e6) as u64;
        for w in out.events.windows(2) {
            assert!(w[0].order_key() < w[1].order_key());
        }
        for ev in &out.events {
            assert!(ev.x < 8 && ev.y < 8);
            assert!(ev.t_us <= end_us);
        }
    }

    #[test]
    fn mismatch_field_statistics_and_reproducibility() {
        let params = PixelParams::default();
        let a = MismatchField::generate(42, 64, 64, &params);
        let b = MismatchField::generate(42, 64, 64, &params);
        assert_eq!(a, b);
        let c = MismatchField::generate(43, 64, 64, &params);
        assert_ne!(a, c);

        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let n = 64 * 64;
        for y in 0..64u32 {
            for x in 0..64u32 {
                let (f_on, _, _) = a.at(x, y);
                let l = libm::log(f_on);
                sum += l;
                sum_sq += l * l;
            }
        }
        let mean = sum / n as f64;
        let std = libm::sqrt(sum_sq / n as f64 - mean * mean);
        assert!(mean.abs() < 3.0 * params.mismatch_sigma_theta / 64.0);
        assert_relative_eq!(std, params.mismatch_sigma_theta, max_relative = 0.1);

        let off = MismatchField::uniform(4, 4);
        assert_eq!(off.at(3, 2), (1.0, 1.0, 1.0));
    }

    #[test]
    fn median_leak_rate_matches_single_pixel_law() {
        // leak-only run: per-pixel intervals are 1/leak_px + refractory,
        // and the median mismatch factor is 1, so the median per-pixel
        // rate recovers the nominal law
        let mut cfg = ArrayConfig::baseline(32, 32, 19.0, 30.0);
        cfg.leak = true;
        cfg.mismatch = true;
        cfg.seed = 5;
        let out = simulate(&cfg).unwrap();
        let mut rates =
            per_pixel_rates(&out.events, 32, 32, cfg.duration_s, Some(Polarity::On));
        let med = median(&mut rates);
        let leak = pixel::leak_rate(19.0, &cfg.params);
        let refr = crate::bias::derive(&cfg.bias, &cfg.params).unwrap().refractory_s;
        let expect = 1.0 / (1.0 / leak + refr);
        assert_relative_eq!(med, expect, max_relative = 0.05);
        // leak events are all ON
        assert!(out.events.iter().all(|e| e.polarity == Polarity::On));
    }

    #[test]
    fn constant_frames_match_constant_stimulus() {
        use crate::stimulus::{FrameInterp, FrameSequence};
        // a frame sequence that happens to be flat takes the per-pixel
        // path; it must agree exactly with the uniform fast path
        let mut uni = ArrayConfig::baseline(6, 6, 0.04, 10.0);
        uni.noise = true;
        uni.seed = 9;
        let mut framed = uni.clone();
        framed.stimulus = Stimulus::Frames(FrameSequence {
            width: 6,
            height: 6,
            frame_period_s: 1.0,
            interp: FrameInterp::Hold,
            frames: alloc::vec![alloc::vec![0.04; 36]; 2],
        });
        // pin dt: the two configs derive the same guard, but keep it explicit
        let dt = SimPlan::new(&uni).unwrap().dt();
        uni.dt_s = Some(dt);
        framed.dt_s = Some(dt);
        let a = simulate(&uni).unwrap();
        let b = simulate(&framed).unwrap();
        assert!(!a.events.is_empty());
        assert_eq!(a.events, b.events);
    }

    #[test]
    fn rotating_disk_drives_both_polarities() {
        let mut cfg = ArrayConfig::baseline(16, 16, 50.0, 0.5);
        cfg.stimulus = Stimulus::RotatingDisk {
            rpm: 600.0,
            bright_lux: 50.0,
            dark_lux: 5.0,
            center: (7.5, 7.5),
            edge_width_px: 1.0,
        };
        let out = simulate(&cfg).unwrap();
        let on = out.events.iter().filter(|e| e.polarity == Polarity::On).count();
        let off = out.events.len() - on;
        assert!(on > 100 && off > 100, "on {on} off {off}");
    }

    #[test]
    fn quantile_and_median_basics() {
        let mut xs = [3.0, 1.0, 2.0];
        assert_eq!(median(&mut xs), 2.0);
        let mut ys = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median(&mut ys), 2.5);
        assert_eq!(quantile(&mut ys.clone(), 0.0), 1.0);
        assert_eq!(quantile(&mut ys.clone(), 1.0), 4.0);
        assert_relative_eq!(quantile(&mut ys.clone(), 0.25), 1.75);
        let mut empty: [f64; 0] = [];
        assert!(quantile(&mut empty, 0.5).is_nan());
    }
}
