//! Characterization sweeps.
//!
//! Each sweep runs the array simulator across a grid of one variable
//! (illuminance, photoreceptor bias, threshold tweak) and tabulates
//! per-pixel rate quantiles, or tabulates a closed-form curve where no
//! simulation is needed (refractory and threshold vs tweak). Sweeps take
//! the simulation entry point as a parameter so a multi-threaded runner
//! can be substituted without changing results: every grid point is keyed
//! by the same master seed, so tables are reproducible bit for bit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::array::{per_pixel_rates, quantile, ArrayConfig, ArrayError, SimOutput};
use crate::bias::{
    apply_threshold_tweak, refractory_from_tweak, thresholds_from_biases, BiasConfig, BiasError,
    REFR_WARN_S,
};
use crate::params::PixelParams;
use crate::pixel::{leak_rate, Polarity};
use crate::stimulus::Stimulus;

/// Shared sweep settings: array size, seed and per-point duration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    pub duration_s: f64,
    pub params: PixelParams,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            width: 64,
            height: 64,
            seed: 1,
            duration_s: 30.0,
            params: PixelParams::default(),
        }
    }
}

/// Per-point duration that keeps Poisson error near 10%: long enough for
/// about 100 events at the anticipated median rate, never under 30 s.
pub fn duration_for_rate(anticipated_rate_hz: f64) -> f64 {
    if anticipated_rate_hz > 0.0 {
        (100.0 / anticipated_rate_hz).max(30.0)
    } else {
        30.0
    }
}

/// One grid point: the swept value plus per-pixel rate quantiles in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRow {
    pub swept: f64,
    pub on_q25: f64,
    pub on_median: f64,
    pub on_q75: f64,
    pub off_q25: f64,
    pub off_median: f64,
    pub off_q75: f64,
    pub total_median: f64,
}

/// A completed noise sweep with enough metadata to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweep {
    /// Column name of the swept variable.
    pub swept_name: &'static str,
    pub rows: Vec<NoiseRow>,
    /// Bias point shared by the grid, as `key = value` lines.
    pub bias_kv: String,
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    pub duration_s: f64,
}

impl NoiseSweep {
    /// Comma-separated table; metadata rides in `#` comment lines.
    pub fn to_csv(&self) -> String {
        self.render(",")
    }

    /// Whitespace-separated variant that gnuplot reads without setup.
    pub fn to_gnuplot(&self) -> String {
        self.render(" ")
    }

    fn render(&self, sep: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {}x{} pixels, seed {}, {} s per point\n",
            self.width, self.height, self.seed, self.duration_s
        ));
        for line in self.bias_kv.lines() {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str(&format!(
            "{}{sep}on_q25{sep}on_median{sep}on_q75{sep}off_q25{sep}off_median{sep}off_q75{sep}total_median\n",
            self.swept_name
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}{sep}{}\n",
                r.swept, r.on_q25, r.on_median, r.on_q75, r.off_q25, r.off_median, r.off_q75,
                r.total_median
            ));
        }
        out
    }
}

fn rate_row(swept: f64, out: &SimOutput, cfg: &SweepConfig, duration_s: f64) -> NoiseRow {
    let mut on = per_pixel_rates(&out.events, cfg.width, cfg.height, duration_s, Some(Polarity::On));
    let mut off =
        per_pixel_rates(&out.events, cfg.width, cfg.height, duration_s, Some(Polarity::Off));
    let mut total = per_pixel_rates(&out.events, cfg.width, cfg.height, duration_s, None);
    NoiseRow {
        swept,
        on_q25: quantile(&mut on, 0.25),
        on_median: quantile(&mut on, 0.5),
        on_q75: quantile(&mut on, 0.75),
        off_q25: quantile(&mut off, 0.25),
        off_median: quantile(&mut off, 0.5),
        off_q75: quantile(&mut off, 0.75),
        total_median: quantile(&mut total, 0.5),
    }
}

fn noise_point(cfg: &SweepConfig, bias: &BiasConfig, lux: f64) -> ArrayConfig {
    ArrayConfig {
        width: cfg.width,
        height: cfg.height,
        seed: cfg.seed,
        duration_s: cfg.duration_s,
        dt_s: None,
        noise: true,
        leak: true,
        mismatch: true,
        bias: bias.clone(),
        params: cfg.params.clone(),
        stimulus: Stimulus::Constant { lux },
    }
}

/// Noise rates across an illuminance grid at a fixed bias point.
pub fn sweep_noise_vs_illuminance<F>(
    cfg: &SweepConfig,
    bias: &BiasConfig,
    lux_grid: &[f64],
    sim: F,
) -> Result<NoiseSweep, ArrayError>
where
    F: Fn(&ArrayConfig) -> Result<SimOutput, ArrayError>,
{
    let mut rows = Vec::with_capacity(lux_grid.len());
    for &lux in lux_grid {
        let out = sim(&noise_point(cfg, bias, lux))?;
        rows.push(rate_row(lux, &out, cfg, cfg.duration_s));
    }
    Ok(NoiseSweep {
        swept_name: "lux",
        rows,
        bias_kv: bias.to_kv_string(),
        width: cfg.width,
        height: cfg.height,
        seed: cfg.seed,
        duration_s: cfg.duration_s,
    })
}

/// Noise-vs-photoreceptor-bias sweep, with the rate peak and high-end
/// plateau pulled out of the table.
#[derive(Debug, Clone, PartialEq)]
pub struct IprSweep {
    pub table: NoiseSweep,
    /// i_pr with the highest median total rate.
    pub argmax_ipr: f64,
    /// Median total rate at the top of the grid.
    pub plateau_rate_hz: f64,
}

/// Noise rates across an `i_pr` grid at fixed illuminance.
pub fn sweep_noise_vs_ipr<F>(
    cfg: &SweepConfig,
    bias_base: &BiasConfig,
    ipr_grid: &[f64],
    fixed_lux: f64,
    sim: F,
) -> Result<IprSweep, ArrayError>
where
    F: Fn(&ArrayConfig) -> Result<SimOutput, ArrayError>,
{
    let mut rows = Vec::with_capacity(ipr_grid.len());
    for &i_pr in ipr_grid {
        let bias = BiasConfig { i_pr, ..bias_base.clone() };
        let out = sim(&noise_point(cfg, &bias, fixed_lux))?;
        rows.push(rate_row(i_pr, &out, cfg, cfg.duration_s));
    }
    let argmax_ipr = rows
        .iter()
        .max_by(|a, b| a.total_median.partial_cmp(&b.total_median).expect("rates are finite"))
        .map(|r| r.swept)
        .unwrap_or(f64::NAN);
    let plateau_rate_hz = rows.last().map(|r| r.total_median).unwrap_or(f64::NAN);
    Ok(IprSweep {
        table: NoiseSweep {
            swept_name: "i_pr_amps",
            rows,
            bias_kv: bias_base.to_kv_string(),
            width: cfg.width,
            height: cfg.height,
            seed: cfg.seed,
            duration_s: cfg.duration_s,
        },
        argmax_ipr,
        plateau_rate_hz,
    })
}

/// Threshold-tweak noise sweep plus the derived tail-shape report.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdNoiseSweep {
    pub table: NoiseSweep,
    /// ON thresholds at each tweak, same order as the rows.
    pub theta_on: Vec<f64>,
    pub theta_off: Vec<f64>,
    /// ln(rate_i / rate_{i+1}) between consecutive positive OFF medians.
    pub off_log_decrements: Vec<f64>,
    /// True when the decrements grow with tweak, the signature of a
    /// Gaussian (faster-than-exponential) tail.
    pub tail_concave_down: bool,
    /// Leak rate at the sweep illuminance, the ON-rate floor.
    pub leak_rate_hz: f64,
}

/// Noise rates across a threshold-tweak grid at fixed illuminance.
pub fn sweep_noise_vs_threshold<F>(
    cfg: &SweepConfig,
    bias_base: &BiasConfig,
    tweak_grid: &[f64],
    fixed_lux: f64,
    sim: F,
) -> Result<ThresholdNoiseSweep, ArrayError>
where
    F: Fn(&ArrayConfig) -> Result<SimOutput, ArrayError>,
{
    let mut rows = Vec::with_capacity(tweak_grid.len());
    let mut theta_on = Vec::with_capacity(tweak_grid.len());
    let mut theta_off = Vec::with_capacity(tweak_grid.len());
    for &tweak in tweak_grid {
        let bias = apply_threshold_tweak(tweak, bias_base, &cfg.params)?;
        let (t_on, t_off) = thresholds_from_biases(&bias, &cfg.params)?;
        theta_on.push(t_on);
        theta_off.push(t_off);
        let out = sim(&noise_point(cfg, &bias, fixed_lux))?;
        rows.push(rate_row(tweak, &out, cfg, cfg.duration_s));
    }
    let positive: Vec<f64> =
        rows.iter().map(|r| r.off_median).take_while(|&r| r > 0.0).collect();
    let off_log_decrements: Vec<f64> =
        positive.windows(2).map(|w| libm::log(w[0] / w[1])).collect();
    let tail_concave_down = off_log_decrements.len() >= 2
        && off_log_decrements.windows(2).all(|w| w[1] > w[0]);
    Ok(ThresholdNoiseSweep {
        table: NoiseSweep {
            swept_name: "threshold_tweak",
            rows,
            bias_kv: bias_base.to_kv_string(),
            width: cfg.width,
            height: cfg.height,
            seed: cfg.seed,
            duration_s: cfg.duration_s,
        },
        theta_on,
        theta_off,
        off_log_decrements,
        tail_concave_down,
        leak_rate_hz: leak_rate(fixed_lux, &cfg.params),
    })
}

/// One refractory-curve point; closed form, no simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RefractoryRow {
    pub tweak: f64,
    /// None when the tweak leaves the pixel unable to fire.
    pub refractory_s: Option<f64>,
    pub inoperative: bool,
    /// Refractory under 100 us: consecutive-event timing unreliable.
    pub short_warning: bool,
}

/// Refractory period across a max-firing-rate tweak grid. Out-of-range
/// tweaks are flagged rather than rejected so the table can show the
/// inoperative region.
pub fn sweep_refractory(tweak_grid: &[f64], params: &PixelParams) -> Vec<RefractoryRow> {
    tweak_grid
        .iter()
        .map(|&tweak| match refractory_from_tweak(tweak, params) {
            Ok(r) => RefractoryRow {
                tweak,
                refractory_s: Some(r),
                inoperative: false,
                short_warning: r < REFR_WARN_S,
            },
            Err(BiasError::PixelInoperative { .. }) => RefractoryRow {
                tweak,
                refractory_s: None,
                inoperative: true,
                short_warning: false,
            },
            Err(_) => RefractoryRow {
                tweak,
                refractory_s: None,
                inoperative: false,
                short_warning: false,
            },
        })
        .collect()
}

/// One threshold-curve point; closed form, no simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub tweak: f64,
    pub theta_on: f64,
    pub theta_off: f64,
}

/// Thresholds across a threshold-tweak grid, showing the OFF saturation
/// where the current floor engages.
pub fn sweep_threshold(
    tweak_grid: &[f64],
    bias: &BiasConfig,
    params: &PixelParams,
) -> Result<Vec<ThresholdRow>, BiasError> {
    tweak_grid
        .iter()
        .map(|&tweak| {
            let tweaked = apply_threshold_tweak(tweak, bias, params)?;
            let (theta_on, theta_off) = thresholds_from_biases(&tweaked, params)?;
            Ok(ThresholdRow { tweak, theta_on, theta_off })
        })
        .collect()
}
