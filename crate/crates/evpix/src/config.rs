//! JSON config documents: array/bias setup and stimulus descriptions.
//!
//! Both document kinds carry `"evpix_config_version": 1` and reject
//! unknown keys, so a typo in a bias name fails loudly instead of
//! silently running at the nominal value.

use std::fs;
use std::path::Path;

use evpix_core::array::ArrayConfig;
use evpix_core::bias::BiasConfig;
use evpix_core::params::PixelParams;
use evpix_core::stimulus::{FrameInterp, FrameSequence, Stimulus};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: evpix_config_version {found} unsupported (expected {CONFIG_VERSION})")]
    Version { path: String, found: u32 },
}

/// On-disk simulation config; every field beyond the version is optional
/// and falls back to the nominal operating point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimConfigFile {
    evpix_config_version: u32,
    #[serde(default = "default_width")]
    width: u32,
    #[serde(default = "default_height")]
    height: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_duration")]
    duration_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dt_s: Option<f64>,
    #[serde(default = "default_true")]
    noise: bool,
    #[serde(default = "default_true")]
    leak: bool,
    #[serde(default = "default_true")]
    mismatch: bool,
    #[serde(default)]
    bias: BiasFile,
    #[serde(default)]
    params: ParamsFile,
}

fn default_width() -> u32 {
    346
}

fn default_height() -> u32 {
    260
}

fn default_duration() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

/// Bias overrides; unset currents stay at the nominal point.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiasFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_pr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_sf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_on: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_off: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i_refr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold_tweak: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    onoff_balance_tweak: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_firing_rate_tweak: Option<f64>,
}

impl BiasFile {
    fn resolve(&self, params: &PixelParams) -> BiasConfig {
        let n = BiasConfig::nominal(params);
        BiasConfig {
            i_pr: self.i_pr.unwrap_or(n.i_pr),
            i_sf: self.i_sf.unwrap_or(n.i_sf),
            i_d: self.i_d.unwrap_or(n.i_d),
            i_on: self.i_on.unwrap_or(n.i_on),
            i_off: self.i_off.unwrap_or(n.i_off),
            i_refr: self.i_refr.unwrap_or(n.i_refr),
            threshold_tweak: self.threshold_tweak.unwrap_or(0.0),
            onoff_balance_tweak: self.onoff_balance_tweak.unwrap_or(0.0),
            max_firing_rate_tweak: self.max_firing_rate_tweak.unwrap_or(0.0),
        }
    }

    fn from_bias(bias: &BiasConfig) -> BiasFile {
        BiasFile {
            i_pr: Some(bias.i_pr),
            i_sf: Some(bias.i_sf),
            i_d: Some(bias.i_d),
            i_on: Some(bias.i_on),
            i_off: Some(bias.i_off),
            i_refr: Some(bias.i_refr),
            threshold_tweak: Some(bias.threshold_tweak),
            onoff_balance_tweak: Some(bias.onoff_balance_tweak),
            max_firing_rate_tweak: Some(bias.max_firing_rate_tweak),
        }
    }
}

macro_rules! params_file {
    ($($field:ident),* $(,)?) => {
        /// Physical-parameter overrides; unset fields keep their defaults.
        #[derive(Debug, Clone, Default, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ParamsFile {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                $field: Option<f64>,
            )*
        }

        impl ParamsFile {
            fn resolve(&self) -> PixelParams {
                let mut p = PixelParams::default();
                $(
                    if let Some(v) = self.$field {
                        p.$field = v;
                    }
                )*
                p
            }
        }
    };
}

params_file!(
    u_t,
    kappa,
    v_p0,
    amp_gain,
    e_dark,
    k_lux_to_amps,
    c_th,
    k_tw,
    k_bal,
    k_refr,
    refr_nominal_s,
    i_d_nominal,
    i_refr_nominal,
    i_min_off,
    f_pr_per_amp,
    f_pr_cap_per_amp,
    f_sf_per_amp,
    pr_noise_rms,
    leak_rate_dark,
    leak_lux_scale,
    mismatch_sigma_theta,
    mismatch_sigma_leak,
);

/// A loaded and resolved simulation config, still missing a stimulus.
#[derive(Debug, Clone)]
pub struct ResolvedSimConfig {
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    pub duration_s: f64,
    pub dt_s: Option<f64>,
    pub noise: bool,
    pub leak: bool,
    pub mismatch: bool,
    pub bias: BiasConfig,
    pub params: PixelParams,
}

impl ResolvedSimConfig {
    pub fn into_array_config(self, stimulus: Stimulus) -> ArrayConfig {
        ArrayConfig {
            width: self.width,
            height: self.height,
            seed: self.seed,
            duration_s: self.duration_s,
            dt_s: self.dt_s,
            noise: self.noise,
            leak: self.leak,
            mismatch: self.mismatch,
            bias: self.bias,
            params: self.params,
            stimulus,
        }
    }
}

/// Stimulus description document. Externally tagged: exactly one variant
/// object under the `stimulus` key.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StimulusFile {
    evpix_config_version: u32,
    stimulus: StimulusKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum StimulusKind {
    Constant(ConstantKind),
    LogSine(LogSineKind),
    LogRamp(LogRampKind),
    LogStep(LogStepKind),
    RotatingDisk(RotatingDiskKind),
    Frames(FramesKind),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantKind {
    lux: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogSineKind {
    base_lux: f64,
    amplitude_log_e: f64,
    freq_hz: f64,
    #[serde(default)]
    phase_rad: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogRampKind {
    start_lux: f64,
    slew_log_e_per_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extent_log_e: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogStepKind {
    before_lux: f64,
    after_lux: f64,
    t_step_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RotatingDiskKind {
    rpm: f64,
    bright_lux: f64,
    dark_lux: f64,
    center: [f64; 2],
    #[serde(default)]
    edge_width_px: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FramesKind {
    width: u32,
    height: u32,
    frame_period_s: f64,
    interp: InterpKind,
    /// Row-major lux values, one inner list per frame.
    frames: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum InterpKind {
    Hold,
    Linear,
}

impl StimulusKind {
    fn into_stimulus(self) -> Stimulus {
        match self {
            StimulusKind::Constant(k) => Stimulus::Constant { lux: k.lux },
            StimulusKind::LogSine(k) => Stimulus::LogSine {
                base_lux: k.base_lux,
                amplitude_log_e: k.amplitude_log_e,
                freq_hz: k.freq_hz,
                phase_rad: k.phase_rad,
            },
            StimulusKind::LogRamp(k) => Stimulus::LogRamp {
                start_lux: k.start_lux,
                slew_log_e_per_s: k.slew_log_e_per_s,
                extent_log_e: k.extent_log_e,
            },
            StimulusKind::LogStep(k) => Stimulus::LogStep {
                before_lux: k.before_lux,
                after_lux: k.after_lux,
                t_step_s: k.t_step_s,
            },
            StimulusKind::RotatingDisk(k) => Stimulus::RotatingDisk {
                rpm: k.rpm,
                bright_lux: k.bright_lux,
                dark_lux: k.dark_lux,
                center: (k.center[0], k.center[1]),
                edge_width_px: k.edge_width_px,
            },
            StimulusKind::Frames(k) => Stimulus::Frames(FrameSequence {
                width: k.width,
                height: k.height,
                frame_period_s: k.frame_period_s,
                interp: match k.interp {
                    InterpKind::Hold => FrameInterp::Hold,
                    InterpKind::Linear => FrameInterp::Linear,
                },
                frames: k.frames,
            }),
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })
}

fn check_version(path: &Path, found: u32) -> Result<(), ConfigError> {
    if found == CONFIG_VERSION {
        Ok(())
    } else {
        Err(ConfigError::Version { path: path.display().to_string(), found })
    }
}

/// Loads and resolves a simulation config document.
pub fn load_sim_config(path: &Path) -> Result<ResolvedSimConfig, ConfigError> {
    let text = read_to_string(path)?;
    let file: SimConfigFile = serde_json::from_str(&text)
        .map_err(|source| ConfigError::Json { path: path.display().to_string(), source })?;
    check_version(path, file.evpix_config_version)?;
    let params = file.params.resolve();
    let bias = file.bias.resolve(&params);
    Ok(ResolvedSimConfig {
        width: file.width,
        height: file.height,
        seed: file.seed,
        duration_s: file.duration_s,
        dt_s: file.dt_s,
        noise: file.noise,
        leak: file.leak,
        mismatch: file.mismatch,
        bias,
        params,
    })
}

/// Loads a stimulus document. Shape validation happens when the stimulus
/// enters a simulation plan.
pub fn load_stimulus(path: &Path) -> Result<Stimulus, ConfigError> {
    let text = read_to_string(path)?;
    let file: StimulusFile = serde_json::from_str(&text)
        .map_err(|source| ConfigError::Json { path: path.display().to_string(), source })?;
    check_version(path, file.evpix_config_version)?;
    Ok(file.stimulus.into_stimulus())
}

/// Writes a config document pinning the given bias point at default
/// geometry, the companion to `recommend --emit-config`.
pub fn write_bias_config(path: &Path, bias: &BiasConfig) -> Result<(), ConfigError> {
    let file = SimConfigFile {
        evpix_config_version: CONFIG_VERSION,
        width: default_width(),
        height: default_height(),
        seed: 0,
        duration_s: default_duration(),
        dt_s: None,
        noise: true,
        leak: true,
        mismatch: true,
        bias: BiasFile::from_bias(bias),
        params: ParamsFile::default(),
    };
    let text = serde_json::to_string_pretty(&file).expect("config serializes");
    fs::write(path, text + "\n")
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(name: &str, text: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("evpix-config-tests");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn minimal_config_resolves_to_nominal() {
        let path = write_tmp("minimal.json", r#"{"evpix_config_version": 1}"#);
        let cfg = load_sim_config(&path).unwrap();
        let nominal = BiasConfig::nominal(&PixelParams::default());
        assert_eq!(cfg.width, 346);
        assert_eq!(cfg.height, 260);
        assert_eq!(cfg.bias, nominal);
        assert!(cfg.noise && cfg.leak && cfg.mismatch);
    }

    #[test]
    fn bias_and_params_overrides_apply() {
        let path = write_tmp(
            "override.json",
            r#"{
                "evpix_config_version": 1,
                "width": 8, "height": 4, "seed": 7, "duration_s": 0.5,
                "noise": false,
                "bias": {"i_pr": 3e-11, "threshold_tweak": 0.25},
                "params": {"leak_rate_dark": 0.5}
            }"#,
        );
        let cfg = load_sim_config(&path).unwrap();
        assert_eq!(cfg.bias.i_pr, 3e-11);
        assert_eq!(cfg.bias.threshold_tweak, 0.25);
        assert_eq!(cfg.params.leak_rate_dark, 0.5);
        assert!(!cfg.noise);
        // untouched fields stay nominal
        let nominal = BiasConfig::nominal(&cfg.params);
        assert_eq!(cfg.bias.i_sf, nominal.i_sf);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let path = write_tmp(
            "typo.json",
            r#"{"evpix_config_version": 1, "bias": {"i_pf": 1e-9}}"#,
        );
        let err = load_sim_config(&path).unwrap_err();
        assert!(matches!(err, ConfigError::Json { .. }), "{err}");
        assert!(err.to_string().contains("i_pf"));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let path = write_tmp("v2.json", r#"{"evpix_config_version": 2}"#);
        let err = load_sim_config(&path).unwrap_err();
        assert!(matches!(err, ConfigError::Version { found: 2, .. }), "{err}");
    }

    #[test]
    fn stimulus_variants_round_trip() {
        let path = write_tmp(
            "sine.json",
            r#"{
                "evpix_config_version": 1,
                "stimulus": {"log_sine": {
                    "base_lux": 1.0, "amplitude_log_e": 0.62, "freq_hz": 5.0
                }}
            }"#,
        );
        match load_stimulus(&path).unwrap() {
            Stimulus::LogSine { base_lux, amplitude_log_e, freq_hz, phase_rad } => {
                assert_eq!(base_lux, 1.0);
                assert_eq!(amplitude_log_e, 0.62);
                assert_eq!(freq_hz, 5.0);
                assert_eq!(phase_rad, 0.0);
            }
            other => panic!("wrong variant: {other:?}"),
        }

        let path = write_tmp(
            "disk.json",
            r#"{
                "evpix_config_version": 1,
                "stimulus": {"rotating_disk": {
                    "rpm": 600.0, "bright_lux": 100.0, "dark_lux": 10.0,
                    "center": [32.0, 32.0]
                }}
            }"#,
        );
        match load_stimulus(&path).unwrap() {
            Stimulus::RotatingDisk { center, edge_width_px, .. } => {
                assert_eq!(center, (32.0, 32.0));
                assert_eq!(edge_width_px, 0.0);
            }
            other => panic!("wrong variant: {other:?}"),
        }
    }

    #[test]
    fn emitted_bias_config_reloads_identically() {
        let params = PixelParams::default();
        let mut bias = BiasConfig::nominal(&params);
        bias.i_sf *= 4.0;
        bias.threshold_tweak = -0.5;
        let dir = std::env::temp_dir().join("evpix-config-tests");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("emitted.json");
        write_bias_config(&path, &bias).unwrap();
        let cfg = load_sim_config(&path).unwrap();
        assert_eq!(cfg.bias, bias);
    }
}
