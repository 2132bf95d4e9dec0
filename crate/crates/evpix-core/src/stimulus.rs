//! Illuminance patterns driven onto the array.
//!
//! A stimulus maps (x, y, t) to illuminance in lux. The analytic kinds are
//! spatially uniform; `RotatingDisk` and `Frames` vary across the array.
//! All kinds are pure functions of their parameters, so two evaluations at
//! the same point always agree.

use alloc::vec::Vec;
use core::fmt;

/// Frame-sequence playback mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameInterp {
    /// Hold each frame until the next one starts.
    Hold,
    /// Interpolate linearly in lux between consecutive frames.
    Linear,
}

/// A discrete sequence of illuminance maps played at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    pub width: u32,
    pub height: u32,
    pub frame_period_s: f64,
    pub interp: FrameInterp,
    /// Row-major lux values, one Vec per frame.
    pub frames: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stimulus {
    /// Steady uniform illuminance.
    Constant { lux: f64 },
    /// Sinusoid in log illuminance:
    /// `lux = base_lux * exp(amplitude_log_e * sin(2 pi freq t + phase))`.
    LogSine { base_lux: f64, amplitude_log_e: f64, freq_hz: f64, phase_rad: f64 },
    /// Constant-rate sweep in log illuminance. With `extent_log_e` set the
    /// sweep folds into a triangle between the start level and
    /// `start_lux * exp(extent)`, repeating forever; without it the ramp
    /// runs unbounded.
    LogRamp { start_lux: f64, slew_log_e_per_s: f64, extent_log_e: Option<f64> },
    /// Uniform step from one level to another at `t_step_s`.
    LogStep { before_lux: f64, after_lux: f64, t_step_s: f64 },
    /// Half-plane edge through `center` rotating at `rpm`; each pixel sees
    /// a square-ish wave with one bright and one dark phase per revolution.
    /// `edge_width_px > 0` smooths the edge over that many pixels.
    RotatingDisk {
        rpm: f64,
        bright_lux: f64,
        dark_lux: f64,
        center: (f64, f64),
        edge_width_px: f64,
    },
    /// Recorded or synthesized frames.
    Frames(FrameSequence),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StimulusError {
    NonPositiveLux { name: &'static str, value: f64 },
    NegativeLux { name: &'static str, value: f64 },
    NonPositiveRate { name: &'static str, value: f64 },
    NonPositiveExtent { value: f64 },
    NotFinite { name: &'static str },
    EmptyFrames,
    FrameSizeMismatch { frame: usize, expected: usize, got: usize },
}

impl fmt::Display for StimulusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StimulusError::NonPositiveLux { name, value } => {
                write!(f, "{name} must be positive, got {value}")
            }
            StimulusError::NegativeLux { name, value } => {
                write!(f, "{name} must be non-negative, got {value}")
            }
            StimulusError::NonPositiveRate { name, value } => {
                write!(f, "{name} must be positive, got {value}")
            }
            StimulusError::NonPositiveExtent { value } => {
                write!(f, "extent_log_e must be positive, got {value}")
            }
            StimulusError::NotFinite { name } => write!(f, "{name} must be finite"),
            StimulusError::EmptyFrames => write!(f, "frame sequence has no frames"),
            StimulusError::FrameSizeMismatch { frame, expected, got } => {
                write!(f, "frame {frame} has {got} samples, expected {expected}")
            }
        }
    }
}

impl core::error::Error for StimulusError {}

fn require_finite(name: &'static str, v: f64) -> Result<(), StimulusError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(StimulusError::NotFinite { name })
    }
}

fn require_positive(name: &'static str, v: f64) -> Result<(), StimulusError> {
    require_finite(name, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(StimulusError::NonPositiveLux { name, value: v })
    }
}

impl Stimulus {
    pub fn validate(&self) -> Result<(), StimulusError> {
        match self {
            Stimulus::Constant { lux } => require_positive("lux", *lux),
            Stimulus::LogSine { base_lux, amplitude_log_e, freq_hz, phase_rad } => {
                require_positive("base_lux", *base_lux)?;
                require_finite("amplitude_log_e", *amplitude_log_e)?;
                require_finite("phase_rad", *phase_rad)?;
                if !(freq_hz.is_finite() && *freq_hz > 0.0) {
                    return Err(StimulusError::NonPositiveRate {
                        name: "freq_hz",
                        value: *freq_hz,
                    });
                }
                Ok(())
            }
            Stimulus::LogRamp { start_lux, slew_log_e_per_s, extent_log_e } => {
                require_positive("start_lux", *start_lux)?;
                require_finite("slew_log_e_per_s", *slew_log_e_per_s)?;
                if let Some(extent) = extent_log_e {
                    if !(extent.is_finite() && *extent > 0.0) {
                        return Err(StimulusError::NonPositiveExtent { value: *extent });
                    }
                }
                Ok(())
            }
            Stimulus::LogStep { before_lux, after_lux, t_step_s } => {
                require_positive("before_lux", *before_lux)?;
                require_positive("after_lux", *after_lux)?;
                require_finite("t_step_s", *t_step_s)
            }
            Stimulus::RotatingDisk { rpm, bright_lux, dark_lux, center, edge_width_px } => {
                if !(rpm.is_finite() && *rpm > 0.0) {
                    return Err(StimulusError::NonPositiveRate { name: "rpm", value: *rpm });
                }
                require_positive("bright_lux", *bright_lux)?;
                require_finite("dark_lux", *dark_lux)?;
                if *dark_lux < 0.0 {
                    return Err(StimulusError::NegativeLux {
                        name: "dark_lux",
                        value: *dark_lux,
                    });
                }
                require_finite("center.0", center.0)?;
                require_finite("center.1", center.1)?;
                require_finite("edge_width_px", *edge_width_px)?;
                if *edge_width_px < 0.0 {
                    return Err(StimulusError::NegativeLux {
                        name: "edge_width_px",
                        value: *edge_width_px,
                    });
                }
                Ok(())
            }
            Stimulus::Frames(seq) => {
                if seq.frames.is_empty() {
                    return Err(StimulusError::EmptyFrames);
                }
                if !(seq.frame_period_s.is_finite() && seq.frame_period_s > 0.0) {
                    return Err(StimulusError::NonPositiveRate {
                        name: "frame_period_s",
                        value: seq.frame_period_s,
                    });
                }
                let expected = seq.width as usize * seq.height as usize;
                for (i, frame) in seq.frames.iter().enumerate() {
                    if frame.len() != expected {
                        return Err(StimulusError::FrameSizeMismatch {
                            frame: i,
                            expected,
                            got: frame.len(),
                        });
                    }
                    for v in frame {
                        if !(v.is_finite() && *v >= 0.0) {
                            return Err(StimulusError::NegativeLux {
                                name: "frame sample",
                                value: *v,
                            });
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// True when every pixel sees the same illuminance; lets the array
    /// simulator evaluate once per step instead of once per pixel.
    pub fn is_uniform(&self) -> bool {
        !matches!(self, Stimulus::RotatingDisk { .. } | Stimulus::Frames(_))
    }

    /// Illuminance in lux at pixel (x, y) and time `t_s`.
    pub fn lux(&self, x: u32, y: u32, t_s: f64) -> f64 {
        match self {
            Stimulus::Constant { lux } => *lux,
            Stimulus::LogSine { base_lux, amplitude_log_e, freq_hz, phase_rad } => {
                let arg = 2.0 * core::f64::consts::PI * freq_hz * t_s + phase_rad;
                base_lux * libm::exp(amplitude_log_e * libm::sin(arg))
            }
            Stimulus::LogRamp { start_lux, slew_log_e_per_s, extent_log_e } => {
                let offset = match extent_log_e {
                    None => slew_log_e_per_s * t_s,
                    Some(extent) => {
                        let span = 2.0 * extent;
                        let u = (slew_log_e_per_s.abs() * t_s) % span;
                        let tri = if u < *extent { u } else { span - u };
                        tri * slew_log_e_per_s.signum()
                    }
                };
                start_lux * libm::exp(offset)
            }
            Stimulus::LogStep { before_lux, after_lux, t_step_s } => {
                if t_s < *t_step_s {
                    *before_lux
                } else {
                    *after_lux
                }
            }
            Stimulus::RotatingDisk { rpm, bright_lux, dark_lux, center, edge_width_px } => {
                let psi = 2.0 * core::f64::consts::PI * (rpm / 60.0) * t_s;
                let dx = x as f64 - center.0;
                let dy = y as f64 - center.1;
                // signed distance from the dividing diameter, in pixels
                let p = dy * libm::cos(psi) - dx * libm::sin(psi);
                let b = if *edge_width_px > 0.0 {
                    smoothstep(p / edge_width_px + 0.5)
                } else if p >= 0.0 {
                    1.0
                } else {
                    0.0
                };
                dark_lux + (bright_lux - dark_lux) * b
            }
            Stimulus::Frames(seq) => {
                let x = (x.min(seq.width.saturating_sub(1))) as usize;
                let y = (y.min(seq.height.saturating_sub(1))) as usize;
                let idx = y * seq.width as usize + x;
                let pos = (t_s / seq.frame_period_s).max(0.0);
                let last = seq.frames.len() - 1;
                let lo = (pos as usize).min(last);
                match seq.interp {
                    FrameInterp::Hold => seq.frames[lo][idx],
                    FrameInterp::Linear => {
                        let hi = (lo + 1).min(last);
                        let w = (pos - lo as f64).clamp(0.0, 1.0);
                        seq.frames[lo][idx] * (1.0 - w) + seq.frames[hi][idx] * w
                    }
                }
            }
        }
    }

    /// Upper bound on illuminance over `[0, duration_s]`; used to pick the
    /// simulation step so the fastest filter pole stays well resolved.
    pub fn max_lux(&self, duration_s: f64) -> f64 {
        match self {
            Stimulus::Constant { lux } => *lux,
            Stimulus::LogSine { base_lux, amplitude_log_e, .. } => {
                base_lux * libm::exp(amplitude_log_e.abs())
            }
            Stimulus::LogRamp { start_lux, slew_log_e_per_s, extent_log_e } => {
                let peak = match extent_log_e {
                    Some(extent) => {
                        if *slew_log_e_per_s >= 0.0 {
                            *extent
                        } else {
                            0.0
                        }
                    }
                    None => (slew_log_e_per_s * duration_s).max(0.0),
                };
                start_lux * libm::exp(peak)
            }
            Stimulus::LogStep { before_lux, after_lux, .. } => before_lux.max(*after_lux),
            Stimulus::RotatingDisk { bright_lux, dark_lux, .. } => bright_lux.max(*dark_lux),
            Stimulus::Frames(seq) => {
                let mut peak = 0.0_f64;
                for frame in &seq.frames {
                    for v in frame {
                        peak = peak.max(*v);
                    }
                }
                peak
            }
        }
    }
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_sine_hits_extremes_at_quarter_periods() {
        let s = Stimulus::LogSine {
            base_lux: 100.0,
            amplitude_log_e: 0.5,
            freq_hz: 10.0,
            phase_rad: 0.0,
        };
        assert_relative_eq!(s.lux(0, 0, 0.0), 100.0, max_relative = 1e-12);
        assert_relative_eq!(s.lux(0, 0, 0.025), 100.0 * libm::exp(0.5), max_relative = 1e-9);
        assert_relative_eq!(s.lux(0, 0, 0.075), 100.0 * libm::exp(-0.5), max_relative = 1e-9);
        assert_relative_eq!(s.max_lux(1.0), 100.0 * libm::exp(0.5), max_relative = 1e-12);
    }

    #[test]
    fn log_sine_phase_shifts_the_waveform() {
        let s0 = Stimulus::LogSine {
            base_lux: 10.0,
            amplitude_log_e: 0.3,
            freq_hz: 5.0,
            phase_rad: 0.0,
        };
        let s1 = Stimulus::LogSine {
            base_lux: 10.0,
            amplitude_log_e: 0.3,
            freq_hz: 5.0,
            phase_rad: core::f64::consts::FRAC_PI_2,
        };
        assert_relative_eq!(s1.lux(0, 0, 0.0), s0.lux(0, 0, 0.05), max_relative = 1e-9);
    }

    #[test]
    fn unbounded_ramp_is_exponential_in_time() {
        let s = Stimulus::LogRamp { start_lux: 1.0, slew_log_e_per_s: 2.0, extent_log_e: None };
        assert_relative_eq!(s.lux(0, 0, 0.0), 1.0);
        assert_relative_eq!(s.lux(0, 0, 1.0), libm::exp(2.0), max_relative = 1e-12);
        assert_relative_eq!(s.lux(0, 0, 2.5), libm::exp(5.0), max_relative = 1e-12);
    }

    #[test]
    fn bounded_ramp_folds_into_a_triangle() {
        let s = Stimulus::LogRamp {
            start_lux: 1.0,
            slew_log_e_per_s: 1.0,
            extent_log_e: Some(2.0),
        };
        assert_relative_eq!(s.lux(0, 0, 1.0), libm::exp(1.0), max_relative = 1e-12);
        assert_relative_eq!(s.lux(0, 0, 2.0), libm::exp(2.0), max_relative = 1e-12);
        // past the apex the level comes back down at the same rate
        assert_relative_eq!(s.lux(0, 0, 3.0), libm::exp(1.0), max_relative = 1e-12);
        assert_relative_eq!(s.lux(0, 0, 4.0), 1.0, max_relative = 1e-9);
        assert_relative_eq!(s.lux(0, 0, 5.0), libm::exp(1.0), max_relative = 1e-9);
        assert_relative_eq!(s.max_lux(10.0), libm::exp(2.0), max_relative = 1e-12);
    }

    #[test]
    fn falling_triangle_mirrors_rising_one() {
        let down = Stimulus::LogRamp {
            start_lux: 100.0,
            slew_log_e_per_s: -1.0,
            extent_log_e: Some(2.0),
        };
        assert_relative_eq!(down.lux(0, 0, 1.5), 100.0 * libm::exp(-1.5), max_relative = 1e-12);
        assert_relative_eq!(down.max_lux(10.0), 100.0, max_relative = 1e-12);
    }

    #[test]
    fn step_switches_at_the_step_time() {
        let s = Stimulus::LogStep { before_lux: 10.0, after_lux: 1000.0, t_step_s: 0.5 };
        assert_relative_eq!(s.lux(0, 0, 0.499_999), 10.0);
        assert_relative_eq!(s.lux(0, 0, 0.5), 1000.0);
    }

    #[test]
    fn disk_alternates_once_per_revolution() {
        let s = Stimulus::RotatingDisk {
            rpm: 60.0, // one revolution per second
            bright_lux: 500.0,
            dark_lux: 5.0,
            center: (8.0, 8.0),
            edge_width_px: 0.0,
        };
        // pixel above center starts bright, is dark half a turn later
        let probe = |t: f64| s.lux(8, 12, t);
        assert_relative_eq!(probe(0.0), 500.0);
        assert_relative_eq!(probe(0.5), 5.0);
        assert_relative_eq!(probe(1.0), 500.0);
        // bright and dark phases each last half the period
        let mut bright_frac = 0.0;
        let n = 1000;
        for i in 0..n {
            if probe(i as f64 / n as f64) > 250.0 {
                bright_frac += 1.0 / n as f64;
            }
        }
        assert!((bright_frac - 0.5).abs() < 0.01, "bright fraction {bright_frac}");
    }

    #[test]
    fn disk_smooth_edge_blends_between_levels() {
        let hard = Stimulus::RotatingDisk {
            rpm: 30.0,
            bright_lux: 100.0,
            dark_lux: 0.0,
            center: (10.0, 10.0),
            edge_width_px: 0.0,
        };
        let soft = Stimulus::RotatingDisk {
            rpm: 30.0,
            bright_lux: 100.0,
            dark_lux: 0.0,
            center: (10.0, 10.0),
            edge_width_px: 4.0,
        };
        // at t = 0 the edge is the horizontal line y = 10
        assert_relative_eq!(hard.lux(3, 10, 0.0), 100.0);
        let mid = soft.lux(3, 10, 0.0);
        assert_relative_eq!(mid, 50.0, max_relative = 1e-9);
        let above = soft.lux(3, 11, 0.0);
        let below = soft.lux(3, 9, 0.0);
        assert!(above > mid && mid > below);
    }

    #[test]
    fn frames_hold_and_lerp() {
        let seq = FrameSequence {
            width: 2,
            height: 1,
            frame_period_s: 0.1,
            interp: FrameInterp::Hold,
            frames: alloc::vec![alloc::vec![10.0, 20.0], alloc::vec![30.0, 40.0]],
        };
        let hold = Stimulus::Frames(seq.clone());
        assert_relative_eq!(hold.lux(0, 0, 0.05), 10.0);
        assert_relative_eq!(hold.lux(1, 0, 0.15), 40.0);
        assert_relative_eq!(hold.lux(1, 0, 5.0), 40.0); // clamps at the last frame
        let lerp = Stimulus::Frames(FrameSequence { interp: FrameInterp::Linear, ..seq });
        assert_relative_eq!(lerp.lux(0, 0, 0.05), 20.0, max_relative = 1e-12);
        assert_relative_eq!(lerp.lux(0, 0, 0.1), 30.0, max_relative = 1e-12);
        assert_relative_eq!(lerp.max_lux(1.0), 40.0);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(Stimulus::Constant { lux: 0.0 }.validate().is_err());
        assert!(Stimulus::LogSine {
            base_lux: 1.0,
            amplitude_log_e: 0.1,
            freq_hz: 0.0,
            phase_rad: 0.0
        }
        .validate()
        .is_err());
        assert!(Stimulus::LogRamp {
            start_lux: 1.0,
            slew_log_e_per_s: 1.0,
            extent_log_e: Some(-1.0)
        }
        .validate()
        .is_err());
        assert!(Stimulus::Frames(FrameSequence {
            width: 2,
            height: 2,
            frame_period_s: 0.1,
            interp: FrameInterp::Hold,
            frames: alloc::vec![alloc::vec![1.0; 3]],
        })
        .validate()
        .is_err());
        assert!(Stimulus::Frames(FrameSequence {
            width: 1,
            height: 1,
            frame_period_s: 0.1,
            interp: FrameInterp::Hold,
            frames: alloc::vec![],
        })
        .validate()
        .is_err());
    }

    #[test]
    fn uniformity_flag_matches_kind() {
        assert!(Stimulus::Constant { lux: 1.0 }.is_uniform());
        assert!(!Stimulus::RotatingDisk {
            rpm: 60.0,
            bright_lux: 1.0,
            dark_lux: 0.0,
            center: (0.0, 0.0),
            edge_width_px: 0.0
        }
        .is_uniform());
    }
}
