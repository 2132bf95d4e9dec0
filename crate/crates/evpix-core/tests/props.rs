//! Property tests for the bias algebra, stimulus bounds and the sweep
//! statistics helpers.

use evpix_core::array::{median, quantile, simulate, ArrayConfig};
use evpix_core::bias::{
    apply_onoff_balance_tweak, apply_threshold_tweak, refractory_from_tweak,
    thresholds_from_biases, BiasConfig,
};
use evpix_core::params::PixelParams;
use evpix_core::pixel::Event;
use evpix_core::stimulus::Stimulus;
use proptest::prelude::*;

fn params() -> PixelParams {
    PixelParams::default()
}

proptest! {
    /// Thresholds depend on current ratios only: scaling every
    /// differencing-branch current together changes nothing, as long as
    /// the scaled `i_off` stays above the comparator current floor.
    #[test]
    fn thresholds_invariant_under_common_current_scale(
        (split, log_scale) in (0.05f64..0.3).prop_flat_map(|split| {
            // floor engages at i_off * scale < i_min_off
            let lo = split - 0.35 + 1e-6;
            (Just(split), lo..1e3f64.ln())
        }),
    ) {
        let scale = log_scale.exp();
        let p = params();
        let mut bias = BiasConfig::nominal(&p);
        bias.i_on = bias.i_d * (split / p.c_th).exp();
        bias.i_off = bias.i_d * (-split / p.c_th).exp();
        let (on_a, off_a) = thresholds_from_biases(&bias, &p).unwrap();
        let scaled = BiasConfig {
            i_d: bias.i_d * scale,
            i_on: bias.i_on * scale,
            i_off: bias.i_off * scale,
            ..bias
        };
        let (on_b, off_b) = thresholds_from_biases(&scaled, &p).unwrap();
        prop_assert!((on_a - on_b).abs() < 1e-9 * on_a.abs().max(1.0));
        prop_assert!((off_a - off_b).abs() < 1e-9 * off_a.abs().max(1.0));
    }

    /// A larger threshold tweak never lowers either threshold.
    #[test]
    fn threshold_tweak_is_monotone(
        lo in -1.0f64..1.0,
        step in 0.0f64..0.5,
    ) {
        let hi = (lo + step).min(1.0);
        let p = params();
        let nominal = BiasConfig::nominal(&p);
        let a = apply_threshold_tweak(lo, &nominal, &p).unwrap();
        let b = apply_threshold_tweak(hi, &nominal, &p).unwrap();
        let (on_a, off_a) = thresholds_from_biases(&a, &p).unwrap();
        let (on_b, off_b) = thresholds_from_biases(&b, &p).unwrap();
        prop_assert!(on_b >= on_a - 1e-12, "ON {on_a} -> {on_b}");
        prop_assert!(off_b >= off_a - 1e-12, "OFF {off_a} -> {off_b}");
    }

    /// The balance tweak trades sensitivity between polarities without
    /// moving the threshold sum.
    #[test]
    fn balance_tweak_conserves_threshold_sum(tweak in -1.0f64..1.0) {
        let p = params();
        let nominal = BiasConfig::nominal(&p);
        let (on_0, off_0) = thresholds_from_biases(&nominal, &p).unwrap();
        let shifted = apply_onoff_balance_tweak(tweak, &nominal, &p).unwrap();
        let (on_t, off_t) = thresholds_from_biases(&shifted, &p).unwrap();
        let sum_0 = on_0 + off_0;
        let sum_t = on_t + off_t;
        prop_assert!(
            ((sum_t - sum_0) / sum_0).abs() < 1e-9,
            "sum moved from {sum_0} to {sum_t}"
        );
        if tweak > 1e-6 {
            // positive tweak raises i_d, pulling the ON threshold down
            prop_assert!(on_t < on_0 && off_t > off_0, "positive tweak favors ON");
        }
    }

    /// More max-firing-rate tweak always means a shorter refractory hold.
    #[test]
    fn refractory_decreases_with_tweak(
        lo in -0.8f64..1.0,
        step in 1e-6f64..0.5,
    ) {
        let hi = (lo + step).min(1.0);
        let p = params();
        let a = refractory_from_tweak(lo, &p).unwrap();
        let b = refractory_from_tweak(hi, &p).unwrap();
        prop_assert!(b < a, "refractory {a} at {lo} vs {b} at {hi}");
    }

    /// `max_lux` really bounds the pointwise illuminance over the run.
    #[test]
    fn max_lux_bounds_every_sample(
        kind in 0u8..4,
        a in 0.1f64..100.0,
        b in 0.1f64..100.0,
        freq in 0.5f64..50.0,
        duration in 0.05f64..2.0,
        xs in proptest::collection::vec((0u32..32, 0u32..32, 0.0f64..1.0), 16),
    ) {
        let stim = match kind {
            0 => Stimulus::Constant { lux: a },
            1 => Stimulus::LogSine {
                base_lux: a,
                amplitude_log_e: 1.2,
                freq_hz: freq,
                phase_rad: b,
            },
            2 => Stimulus::LogRamp {
                start_lux: a,
                slew_log_e_per_s: 3.0,
                extent_log_e: Some(2.0),
            },
            _ => Stimulus::LogStep { before_lux: a, after_lux: b, t_step_s: duration / 2.0 },
        };
        let bound = stim.max_lux(duration);
        for (x, y, frac) in xs {
            let lux = stim.lux(x, y, frac * duration);
            prop_assert!(
                lux <= bound * (1.0 + 1e-12),
                "lux {lux} above bound {bound} for {stim:?}"
            );
        }
    }

    /// Quantiles stay inside the sample range and grow with q.
    #[test]
    fn quantiles_are_bounded_and_monotone(
        mut xs in proptest::collection::vec(-1e6f64..1e6, 1..200),
        q1 in 0.0f64..1.0,
        q2 in 0.0f64..1.0,
    ) {
        let (lo, hi) = (q1.min(q2), q1.max(q2));
        let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let v_lo = quantile(&mut xs, lo);
        let v_hi = quantile(&mut xs, hi);
        let v_med = median(&mut xs);
        prop_assert!(v_lo >= min && v_hi <= max);
        prop_assert!(v_lo <= v_hi);
        prop_assert!(v_med >= min && v_med <= max);
    }
}

proptest! {
    // simulation cases are costly; a handful of random draws is plenty
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Output events arrive in canonical order and inside array bounds,
    /// whatever the operating point.
    #[test]
    fn events_ordered_and_in_bounds(
        seed in 0u64..1000,
        lux in 0.01f64..50.0,
        tweak in -0.5f64..0.5,
    ) {
        let p = params();
        let mut cfg = ArrayConfig::baseline(9, 7, lux, 0.3);
        cfg.seed = seed;
        cfg.noise = true;
        cfg.leak = true;
        cfg.mismatch = true;
        cfg.bias = apply_threshold_tweak(tweak, &cfg.bias, &p).unwrap();
        cfg.bias.i_sf = 15e-12;
        let out = simulate(&cfg).unwrap();
        for pair in out.events.windows(2) {
            prop_assert!(Event::order_key(&pair[0]) < Event::order_key(&pair[1]));
        }
        for e in &out.events {
            prop_assert!((e.x as u32) < 9 && (e.y as u32) < 7);
        }
    }

    /// Same seed, same stream; different seed, different stream.
    #[test]
    fn seed_determinism(seed in 0u64..500) {
        let mut cfg = ArrayConfig::baseline(6, 6, 0.04, 0.4);
        cfg.seed = seed;
        cfg.noise = true;
        cfg.leak = true;
        cfg.mismatch = true;
        cfg.bias.i_sf = 15e-12;
        let a = simulate(&cfg).unwrap();
        let b = simulate(&cfg).unwrap();
        prop_assert_eq!(&a, &b);
        let mut other = cfg.clone();
        other.seed = seed ^ 0x9e37_79b9;
        let c = simulate(&other).unwrap();
        // identical outputs across different seeds would be suspicious;
        // with noise on the streams practically always diverge
        prop_assert!(a.events != c.events || a.events.is_empty());
    }
}
