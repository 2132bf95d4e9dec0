//! Prints the three noise characterization curves at reduced scale so
//! model constants can be sanity-checked quickly:
//!
//!   cargo run --release --example noise_shapes [ipr|lux|tweak]
//!
//! With no argument all three run. Grid points run on their own threads.

use evpix_core::array::{median, per_pixel_rates, simulate, ArrayConfig};
use evpix_core::bias::{apply_threshold_tweak, derive, BiasConfig};
use evpix_core::params::PixelParams;
use evpix_core::pixel::{leak_rate, Polarity};
use evpix_core::stimulus::Stimulus;

const SIDE: u32 = 24;

fn point(bias: &BiasConfig, lux: f64, duration_s: f64) -> ArrayConfig {
    let params = PixelParams::default();
    ArrayConfig {
        width: SIDE,
        height: SIDE,
        seed: 1,
        duration_s,
        dt_s: None,
        noise: true,
        leak: true,
        mismatch: true,
        bias: bias.clone(),
        params,
        stimulus: Stimulus::Constant { lux },
    }
}

/// (on_median, off_median, total_median) in Hz.
fn run_point(cfg: &ArrayConfig) -> (f64, f64, f64) {
    let out = simulate(cfg).expect("probe config valid");
    let d = cfg.duration_s;
    let mut on = per_pixel_rates(&out.events, SIDE, SIDE, d, Some(Polarity::On));
    let mut off = per_pixel_rates(&out.events, SIDE, SIDE, d, Some(Polarity::Off));
    let mut tot = per_pixel_rates(&out.events, SIDE, SIDE, d, None);
    (median(&mut on), median(&mut off), median(&mut tot))
}

fn run_grid(configs: Vec<ArrayConfig>) -> Vec<(f64, f64, f64)> {
    std::thread::scope(|s| {
        let handles: Vec<_> =
            configs.iter().map(|c| s.spawn(move || run_point(c))).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn probe_ipr() {
    println!("== noise rate vs i_pr (0.04 lux, i_sf 30 pA, nominal thresholds) ==");
    let params = PixelParams::default();
    let base = BiasConfig { i_sf: 30e-12, ..BiasConfig::nominal(&params) };
    let n = 10;
    let (lo, hi) = (4.64e-12f64, 4.64e-9f64);
    let grid: Vec<f64> = (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect();
    let cfgs: Vec<ArrayConfig> = grid
        .iter()
        .map(|&i_pr| point(&BiasConfig { i_pr, ..base.clone() }, 0.04, 120.0))
        .collect();
    for (i_pr, (on, off, tot)) in grid.iter().zip(run_grid(cfgs)) {
        println!("i_pr {i_pr:10.3e}  on {on:8.4}  off {off:8.4}  total {tot:8.4}");
    }
}

fn probe_lux() {
    println!("== noise rate vs illuminance (i_pr 30 pA, i_sf 15 pA) ==");
    let params = PixelParams::default();
    let base = BiasConfig { i_pr: 30e-12, ..BiasConfig::nominal(&params) };
    let grid: Vec<f64> = (0..15).map(|i| 1e-3 * 10f64.powf(i as f64 * 0.5)).collect();
    let cfgs: Vec<ArrayConfig> = grid
        .iter()
        .map(|&lux| {
            let t = if lux < 0.1 { 240.0 } else { 60.0 };
            point(&base, lux, t)
        })
        .collect();
    for (lux, (on, off, tot)) in grid.iter().zip(run_grid(cfgs)) {
        let leak = leak_rate(*lux, &params);
        println!(
            "lux {lux:10.3e}  on {on:9.4}  off {off:9.4}  total {tot:9.4}  leak {leak:8.4}"
        );
    }
}

fn probe_tweak() {
    println!("== noise rate vs threshold tweak (0.04 lux, i_pr 3 nA, i_sf 15 pA) ==");
    let params = PixelParams::default();
    let base = BiasConfig::nominal(&params);
    let grid: Vec<f64> = (0..7).map(|i| -0.5 + i as f64 / 6.0).collect();
    let durations = [30.0, 30.0, 60.0, 120.0, 240.0, 480.0, 960.0];
    let cfgs: Vec<ArrayConfig> = grid
        .iter()
        .zip(durations)
        .map(|(&t, d)| point(&apply_threshold_tweak(t, &base, &params).unwrap(), 0.04, d))
        .collect();
    let thetas: Vec<(f64, f64)> = cfgs
        .iter()
        .map(|c| {
            let d = derive(&c.bias, &c.params).unwrap();
            (d.theta_on, d.theta_off)
        })
        .collect();
    let rows = run_grid(cfgs);
    let leak = leak_rate(0.04, &params);
    let mut prev_off: Option<f64> = None;
    for ((tweak, (on, off, _)), (t_on, t_off)) in grid.iter().zip(&rows).zip(&thetas) {
        let dec = match prev_off {
            Some(p) if *off > 0.0 && p > 0.0 => format!("  dec {:6.3}", (p / off).ln()),
            _ => String::new(),
        };
        println!(
            "tweak {tweak:6.3}  th ({t_on:.3},{t_off:.3})  on {on:9.5}  off {off:9.5}{dec}"
        );
        prev_off = Some(*off);
    }
    println!("leak at 0.04 lux: {leak:.5} Hz; top-tweak ON/leak = {:.3}", rows[6].0 / leak);
}

fn probe_trace() {
    use evpix_core::pixel::{PixelState, StepProfile};
    use evpix_core::rng::{pixel_rng, StreamKind};
    println!("== single dark pixel event structure (0.04 lux, i_sf 15 pA) ==");
    let p = PixelParams::default();
    let bias = BiasConfig::nominal(&p);
    let dt = 5e-4;
    for theta in [0.22, 0.37] {
        let profile = StepProfile::new(&bias, &p, dt).unwrap();
        let drive = profile.drive(0.04);
        let mut state = PixelState::settled(0.04, 0.0, &p, pixel_rng(3, 1, 1, StreamKind::Step));
        let mut events: Vec<(f64, Polarity)> = Vec::new();
        for i in 0..400_000u64 {
            let t_end = (i + 1) as f64 * dt;
            if let Some(ev) = state.step(&profile, &drive, theta, theta, 0.0, true, t_end, 0, 0)
            {
                events.push((t_end, ev.polarity));
            }
        }
        // split into chains at gaps above 50 ms and histogram the lengths
        let mut lens: Vec<usize> = Vec::new();
        let mut cur = 0usize;
        let mut prev_t = f64::NEG_INFINITY;
        let mut alternating = 0usize;
        let mut pairs = 0usize;
        let mut prev_pol: Option<Polarity> = None;
        for &(t, pol) in &events {
            if t - prev_t > 0.05 {
                if cur > 0 {
                    lens.push(cur);
                }
                cur = 0;
                prev_pol = None;
            }
            if let Some(pp) = prev_pol {
                pairs += 1;
                if pp != pol {
                    alternating += 1;
                }
            }
            cur += 1;
            prev_t = t;
            prev_pol = Some(pol);
        }
        if cur > 0 {
            lens.push(cur);
        }
        lens.sort_unstable();
        let n = lens.len();
        let show = |q: f64| lens[((n - 1) as f64 * q) as usize];
        println!(
            "theta {theta}: {} events in {} chains; chain len p50 {} p90 {} max {}; \
             alternation {:.2}",
            events.len(),
            n,
            show(0.5),
            show(0.9),
            lens[n - 1],
            alternating as f64 / pairs.max(1) as f64
        );
        let head: Vec<String> = events
            .iter()
            .take(24)
            .map(|(t, pol)| {
                format!("{:.3}{}", t, if *pol == Polarity::On { "+" } else { "-" })
            })
            .collect();
        println!("  head: {}", head.join(" "));
    }
}

fn main() {
    let which = std::env::args().nth(1);
    match which.as_deref() {
        Some("ipr") => probe_ipr(),
        Some("lux") => probe_lux(),
        Some("tweak") => probe_tweak(),
        Some("trace") => probe_trace(),
        _ => {
            probe_ipr();
            probe_lux();
            probe_tweak();
        }
    }
}
