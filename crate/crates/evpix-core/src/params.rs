//! Physical and calibration constants shared by every pixel in an array.

/// Elementary charge in coulombs.
pub const Q_ELECTRON: f64 = 1.602_176_634e-19;

/// Nominal comparator threshold at zero tweak, log-e units.
pub const NOMINAL_THETA: f64 = 0.25;

/// Fixed model constants. Currents in amperes, voltages in volts,
/// illuminance in lux, frequencies in hertz.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelParams {
    /// Thermal voltage U_T.
    pub u_t: f64,
    /// Subthreshold slope factor of the feedback transistor.
    pub kappa: f64,
    /// Photoreceptor output offset.
    pub v_p0: f64,
    /// Change-amplifier gain; used only for the synthetic v_diff trace.
    pub amp_gain: f64,
    /// Dark-equivalent illuminance floor, lux.
    pub e_dark: f64,
    /// Photocurrent per lux of illuminance, A/lux.
    pub k_lux_to_amps: f64,
    /// Threshold scale: theta = c_th * ln(current ratio).
    pub c_th: f64,
    /// Comparator-current e-folds per unit of threshold tweak.
    pub k_tw: f64,
    /// Differencing-current e-folds per unit of ON/OFF balance tweak.
    pub k_bal: f64,
    /// Refractory e-folds per unit of max-firing-rate tweak.
    pub k_refr: f64,
    /// Refractory period at zero tweak and nominal i_refr, seconds.
    pub refr_nominal_s: f64,
    /// Reference differencing-branch current, amperes.
    pub i_d_nominal: f64,
    /// Reference refractory bias current, amperes.
    pub i_refr_nominal: f64,
    /// Smallest OFF comparator current the circuit supports, amperes.
    pub i_min_off: f64,
    /// Photoreceptor pole per ampere of photocurrent, Hz/A.
    pub f_pr_per_amp: f64,
    /// Ceiling on the photoreceptor pole per ampere of i_pr, Hz/A.
    pub f_pr_cap_per_amp: f64,
    /// Source-follower pole per ampere of i_sf, Hz/A.
    pub f_sf_per_amp: f64,
    /// Total photoreceptor bias-branch noise, RMS volts at v_pr.
    pub pr_noise_rms: f64,
    /// Leak event rate in darkness, Hz.
    pub leak_rate_dark: f64,
    /// Illuminance that doubles the leak rate over dark, lux.
    pub leak_lux_scale: f64,
    /// Log-normal sigma of per-pixel threshold mismatch.
    pub mismatch_sigma_theta: f64,
    /// Log-normal sigma of per-pixel leak-rate mismatch.
    pub mismatch_sigma_leak: f64,
}

impl Default for PixelParams {
    fn default() -> Self {
        PixelParams {
            u_t: 0.025,
            kappa: 0.75,
            v_p0: 1.0,
            amp_gain: 20.0,
            e_dark: 0.002,
            k_lux_to_amps: 25e-15,
            c_th: 1.0,
            k_tw: 0.2,
            k_bal: 0.2,
            k_refr: 4.605_170_185_988_091, // ln(100)
            refr_nominal_s: 500e-6,
            i_d_nominal: 1e-9,
            i_refr_nominal: 5e-12,
            // e^{-0.35} nA: the OFF comparator current floor engages once the
            // threshold tweak exceeds +0.5 at the nominal split.
            i_min_off: 7.046_880_897_187_134e-10,
            f_pr_per_amp: 2.5e16,
            f_pr_cap_per_amp: 1e13,
            f_sf_per_amp: 1e13,
            pr_noise_rms: 3.0e-3,
            leak_rate_dark: 0.25,
            leak_lux_scale: 1.0,
            mismatch_sigma_theta: 0.03,
            mismatch_sigma_leak: 0.30,
        }
    }
}

impl PixelParams {
    /// Checks that every constant is finite and in a usable range.
    pub fn validate(&self) -> Result<(), &'static str> {
        let positive = [
            (self.u_t, "u_t"),
            (self.kappa, "kappa"),
            (self.e_dark, "e_dark"),
            (self.k_lux_to_amps, "k_lux_to_amps"),
            (self.c_th, "c_th"),
            (self.k_tw, "k_tw"),
            (self.k_bal, "k_bal"),
            (self.k_refr, "k_refr"),
            (self.refr_nominal_s, "refr_nominal_s"),
            (self.i_d_nominal, "i_d_nominal"),
            (self.i_refr_nominal, "i_refr_nominal"),
            (self.i_min_off, "i_min_off"),
            (self.f_pr_per_amp, "f_pr_per_amp"),
            (self.f_pr_cap_per_amp, "f_pr_cap_per_amp"),
            (self.f_sf_per_amp, "f_sf_per_amp"),
            (self.leak_lux_scale, "leak_lux_scale"),
        ];
        for (v, name) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(name);
            }
        }
        let non_negative = [
            (self.amp_gain, "amp_gain"),
            (self.pr_noise_rms, "pr_noise_rms"),
            (self.leak_rate_dark, "leak_rate_dark"),
            (self.mismatch_sigma_theta, "mismatch_sigma_theta"),
            (self.mismatch_sigma_leak, "mismatch_sigma_leak"),
        ];
        for (v, name) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(name);
            }
        }
        if !self.v_p0.is_finite() {
            return Err("v_p0");
        }
        if self.kappa > 1.0 {
            return Err("kappa");
        }
        Ok(())
    }
}
