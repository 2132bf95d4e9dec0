use evpix_core::array::{simulate, ArrayConfig};
use evpix_core::stimulus::Stimulus;
use std::time::Instant;

fn main() {
    let mut cfg = ArrayConfig::baseline(64, 64, 0.04, 60.0);
    cfg.noise = true;
    cfg.leak = true;
    cfg.mismatch = true;
    cfg.stimulus = Stimulus::Constant { lux: 0.04 };
    let t0 = Instant::now();
    let out = simulate(&cfg).unwrap();
    let dt = out.dt_s;
    let steps = out.steps;
    let wall = t0.elapsed().as_secs_f64();
    let px_steps = steps as f64 * 4096.0;
    println!(
        "dt {dt:.3e} steps {steps} events {} wall {wall:.2}s -> {:.2e} px-steps/s",
        out.events.len(),
        px_steps / wall
    );
}
