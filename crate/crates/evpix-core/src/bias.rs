//! Bias currents and the mapping from biases to pixel behavior.
//!
//! Six currents control a pixel: photoreceptor (`i_pr`), source follower
//! (`i_sf`), differencing branch (`i_d`), ON/OFF comparators (`i_on`,
//! `i_off`) and refractory (`i_refr`). Three high-level tweaks move groups
//! of currents along exponential tracks: `threshold_tweak` raises or lowers
//! both event thresholds, `onoff_balance_tweak` shifts sensitivity between
//! polarities without changing their sum, and `max_firing_rate_tweak`
//! shortens or stretches the refractory period.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::params::{PixelParams, NOMINAL_THETA};

/// Allowed range for threshold and balance tweaks.
pub const TWEAK_RANGE: (f64, f64) = (-1.0, 1.0);
/// Allowed range for the max-firing-rate tweak; below the floor the reset
/// transistor no longer releases and the pixel stops firing entirely.
pub const MFR_TWEAK_RANGE: (f64, f64) = (-0.8, 1.0);
/// Refractory periods shorter than this leave the comparator reset region
/// before the differencing node settles; flagged as a diagnostic.
pub const REFR_WARN_S: f64 = 100e-6;

/// A full bias point: six currents plus the three tweaks layered on top.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasConfig {
    pub i_pr: f64,
    pub i_sf: f64,
    pub i_d: f64,
    pub i_on: f64,
    pub i_off: f64,
    pub i_refr: f64,
    pub threshold_tweak: f64,
    pub onoff_balance_tweak: f64,
    pub max_firing_rate_tweak: f64,
}

/// Quantities the simulator consumes, derived from one bias point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedPixelParams {
    /// ON threshold, log-e units of contrast.
    pub theta_on: f64,
    /// OFF threshold, log-e units of contrast.
    pub theta_off: f64,
    /// Ceiling on the photoreceptor pole set by i_pr, Hz.
    pub f_pr_max: f64,
    /// Source-follower pole, Hz.
    pub f_sf: f64,
    /// Refractory period, seconds.
    pub refractory_s: f64,
    /// Differencing-node reset level in normalized v_diff units;
    /// zero at the nominal i_d, moves linearly with the balance tweak.
    pub reset_level: f64,
}

impl DerivedPixelParams {
    /// True when the refractory period is short enough to distort
    /// consecutive-event spacing on real arrays.
    pub fn short_refractory_warning(&self) -> bool {
        self.refractory_s < REFR_WARN_S
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BiasError {
    NonPositiveCurrent { name: &'static str, value: f64 },
    TweakOutOfRange { name: &'static str, value: f64, min: f64, max: f64 },
    DegenerateThreshold { theta_on: f64, theta_off: f64 },
    PixelInoperative { tweak: f64 },
    BadKeyValue { line: usize, reason: &'static str },
}

impl fmt::Display for BiasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiasError::NonPositiveCurrent { name, value } => {
                write!(f, "bias current {name} must be positive, got {value:e}")
            }
            BiasError::TweakOutOfRange { name, value, min, max } => {
                write!(f, "{name} = {value} outside [{min}, {max}]")
            }
            BiasError::DegenerateThreshold { theta_on, theta_off } => {
                write!(
                    f,
                    "comparator currents give non-positive thresholds \
                     (theta_on = {theta_on:.4}, theta_off = {theta_off:.4})"
                )
            }
            BiasError::PixelInoperative { tweak } => {
                write!(
                    f,
                    "max_firing_rate_tweak = {tweak} is below -0.8; the reset \
                     transistor never releases and the pixel cannot fire"
                )
            }
            BiasError::BadKeyValue { line, reason } => {
                write!(f, "bias document line {line}: {reason}")
            }
        }
    }
}

impl core::error::Error for BiasError {}

impl BiasConfig {
    /// Mid-range bias point: symmetric 0.25/0.25 thresholds, strong
    /// photoreceptor bias, 150 Hz source-follower pole, 500 us refractory.
    pub fn nominal(params: &PixelParams) -> BiasConfig {
        let split = NOMINAL_THETA / params.c_th;
        BiasConfig {
            i_pr: 3e-9,
            i_sf: 15e-12,
            i_d: params.i_d_nominal,
            i_on: params.i_d_nominal * libm::exp(split),
            i_off: params.i_d_nominal * libm::exp(-split),
            i_refr: params.i_refr_nominal,
            threshold_tweak: 0.0,
            onoff_balance_tweak: 0.0,
            max_firing_rate_tweak: 0.0,
        }
    }

    /// Checks currents are positive and tweaks are inside their ranges.
    pub fn validate(&self) -> Result<(), BiasError> {
        let currents = [
            (self.i_pr, "i_pr"),
            (self.i_sf, "i_sf"),
            (self.i_d, "i_d"),
            (self.i_on, "i_on"),
            (self.i_off, "i_off"),
            (self.i_refr, "i_refr"),
        ];
        for (value, name) in currents {
            if !(value.is_finite() && value > 0.0) {
                return Err(BiasError::NonPositiveCurrent { name, value });
            }
        }
        check_tweak("threshold_tweak", self.threshold_tweak, TWEAK_RANGE)?;
        check_tweak("onoff_balance_tweak", self.onoff_balance_tweak, TWEAK_RANGE)?;
        let t = self.max_firing_rate_tweak;
        if !t.is_finite() || t < MFR_TWEAK_RANGE.0 {
            return Err(BiasError::PixelInoperative { tweak: t });
        }
        if t > MFR_TWEAK_RANGE.1 {
            return Err(BiasError::TweakOutOfRange {
                name: "max_firing_rate_tweak",
                value: t,
                min: MFR_TWEAK_RANGE.0,
                max: MFR_TWEAK_RANGE.1,
            });
        }
        Ok(())
    }

    /// Comparator and differencing currents with the tweaks folded in.
    /// The OFF current is clamped at the circuit floor, which is what makes
    /// theta_off saturate under large positive tweaks.
    pub fn effective_currents(&self, params: &PixelParams) -> (f64, f64, f64) {
        let i_on = self.i_on * libm::exp(self.threshold_tweak * params.k_tw);
        let i_off_raw = self.i_off * libm::exp(-self.threshold_tweak * params.k_tw);
        let i_off = if i_off_raw < params.i_min_off { params.i_min_off } else { i_off_raw };
        let i_d = self.i_d * libm::exp(self.onoff_balance_tweak * params.k_bal);
        (i_on, i_off, i_d)
    }

    /// Serializes to a flat `key = value` document, one field per line.
    pub fn to_kv_string(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let fields = self.field_values();
        for (name, value) in fields {
            let _ = writeln!(out, "{name} = {value:e}");
        }
        out
    }

    /// Parses the flat key-value format written by [`to_kv_string`].
    /// All six currents are required; tweaks default to zero. Unknown keys
    /// and duplicates are rejected.
    ///
    /// [`to_kv_string`]: BiasConfig::to_kv_string
    pub fn from_kv_str(doc: &str) -> Result<BiasConfig, BiasError> {
        let names = FIELD_NAMES;
        let mut values: [Option<f64>; 9] = [None; 9];
        for (idx, raw) in doc.lines().enumerate() {
            let line = idx + 1;
            let text = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if text.is_empty() {
                continue;
            }
            let (key, value) = text
                .split_once('=')
                .ok_or(BiasError::BadKeyValue { line, reason: "expected `key = value`" })?;
            let key = key.trim();
            let slot = names
                .iter()
                .position(|n| *n == key)
                .ok_or(BiasError::BadKeyValue { line, reason: "unknown key" })?;
            if values[slot].is_some() {
                return Err(BiasError::BadKeyValue { line, reason: "duplicate key" });
            }
            let parsed: f64 = value
                .trim()
                .parse()
                .map_err(|_| BiasError::BadKeyValue { line, reason: "not a number" })?;
            values[slot] = Some(parsed);
        }
        for i in 0..6 {
            if values[i].is_none() {
                return Err(BiasError::BadKeyValue { line: 0, reason: "missing current" });
            }
        }
        let cfg = BiasConfig {
            i_pr: values[0].unwrap(),
            i_sf: values[1].unwrap(),
            i_d: values[2].unwrap(),
            i_on: values[3].unwrap(),
            i_off: values[4].unwrap(),
            i_refr: values[5].unwrap(),
            threshold_tweak: values[6].unwrap_or(0.0),
            onoff_balance_tweak: values[7].unwrap_or(0.0),
            max_firing_rate_tweak: values[8].unwrap_or(0.0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn field_values(&self) -> [(&'static str, f64); 9] {
        [
            ("i_pr", self.i_pr),
            ("i_sf", self.i_sf),
            ("i_d", self.i_d),
            ("i_on", self.i_on),
            ("i_off", self.i_off),
            ("i_refr", self.i_refr),
            ("threshold_tweak", self.threshold_tweak),
            ("onoff_balance_tweak", self.onoff_balance_tweak),
            ("max_firing_rate_tweak", self.max_firing_rate_tweak),
        ]
    }
}

const FIELD_NAMES: [&str; 9] = [
    "i_pr",
    "i_sf",
    "i_d",
    "i_on",
    "i_off",
    "i_refr",
    "threshold_tweak",
    "onoff_balance_tweak",
    "max_firing_rate_tweak",
];

fn check_tweak(name: &'static str, value: f64, range: (f64, f64)) -> Result<(), BiasError> {
    if !value.is_finite() || value < range.0 || value > range.1 {
        return Err(BiasError::TweakOutOfRange { name, value, min: range.0, max: range.1 });
    }
    Ok(())
}

/// Event thresholds in log-e contrast units from a bias point.
///
/// theta_on = c_th * ln(i_on / i_d), theta_off = c_th * ln(i_d / i_off),
/// computed after folding the config's tweaks into the currents. Scaling
/// i_on, i_off and i_d together leaves both thresholds unchanged.
pub fn thresholds_from_biases(
    bias: &BiasConfig,
    params: &PixelParams,
) -> Result<(f64, f64), BiasError> {
    bias.validate()?;
    let (i_on, i_off, i_d) = bias.effective_currents(params);
    let theta_on = params.c_th * libm::log(i_on / i_d);
    let theta_off = params.c_th * libm::log(i_d / i_off);
    if theta_on <= 0.0 || theta_off <= 0.0 {
        return Err(BiasError::DegenerateThreshold { theta_on, theta_off });
    }
    Ok((theta_on, theta_off))
}

/// Scales both comparator currents so the thresholds move together:
/// i_on up and i_off down by `exp(tweak * k_tw)`, i_off clamped at the
/// circuit floor. The tweak is folded into the currents and the returned
/// config carries `threshold_tweak = 0`.
pub fn apply_threshold_tweak(
    tweak: f64,
    nominal: &BiasConfig,
    params: &PixelParams,
) -> Result<BiasConfig, BiasError> {
    check_tweak("threshold_tweak", tweak, TWEAK_RANGE)?;
    let staged = BiasConfig { threshold_tweak: tweak, ..nominal.clone() };
    let (i_on, i_off, _) = staged.effective_currents(params);
    Ok(BiasConfig { i_on, i_off, threshold_tweak: 0.0, ..nominal.clone() })
}

/// Moves the differencing current `i_d` by `exp(tweak * k_bal)`, shifting
/// sensitivity between ON and OFF while conserving theta_on + theta_off.
pub fn apply_onoff_balance_tweak(
    tweak: f64,
    nominal: &BiasConfig,
    params: &PixelParams,
) -> Result<BiasConfig, BiasError> {
    check_tweak("onoff_balance_tweak", tweak, TWEAK_RANGE)?;
    let i_d = nominal.i_d * libm::exp(tweak * params.k_bal);
    Ok(BiasConfig { i_d, onoff_balance_tweak: 0.0, ..nominal.clone() })
}

/// Refractory period for a max-firing-rate tweak at the nominal i_refr:
/// `refr_nominal_s * exp(-tweak * k_refr)`. Tweaks below -0.8 leave the
/// pixel unable to fire at all.
pub fn refractory_from_tweak(tweak: f64, params: &PixelParams) -> Result<f64, BiasError> {
    if !tweak.is_finite() || tweak < MFR_TWEAK_RANGE.0 {
        return Err(BiasError::PixelInoperative { tweak });
    }
    if tweak > MFR_TWEAK_RANGE.1 {
        return Err(BiasError::TweakOutOfRange {
            name: "max_firing_rate_tweak",
            value: tweak,
            min: MFR_TWEAK_RANGE.0,
            max: MFR_TWEAK_RANGE.1,
        });
    }
    Ok(params.refr_nominal_s * libm::exp(-tweak * params.k_refr))
}

/// Everything the pixel simulator needs from one bias point.
///
/// The refractory period scales inversely with `i_refr` and exponentially
/// with the max-firing-rate tweak; the two views agree when the tweak is
/// folded into the current.
pub fn derive(bias: &BiasConfig, params: &PixelParams) -> Result<DerivedPixelParams, BiasError> {
    let (theta_on, theta_off) = thresholds_from_biases(bias, params)?;
    let (_, _, i_d_eff) = bias.effective_currents(params);
    let refractory_s = params.refr_nominal_s * (params.i_refr_nominal / bias.i_refr)
        * libm::exp(-bias.max_firing_rate_tweak * params.k_refr);
    Ok(DerivedPixelParams {
        theta_on,
        theta_off,
        f_pr_max: params.f_pr_cap_per_amp * bias.i_pr,
        f_sf: params.f_sf_per_amp * bias.i_sf,
        refractory_s,
        reset_level: -params.c_th * libm::log(i_d_eff / params.i_d_nominal),
    })
}

/// Diagnostics for a bias point that are worth surfacing but not fatal.
pub fn diagnostics(derived: &DerivedPixelParams) -> Vec<&'static str> {
    let mut out = Vec::new();
    if derived.short_refractory_warning() {
        out.push("refractory period below 100 us: consecutive-event timing becomes unreliable");
    }
    out
}
