//! Parallel simulation driver. Row bands run on worker threads; since
//! every pixel owns its own random stream and events are re-sorted into
//! the canonical order afterwards, the output is bit-identical to the
//! serial path for any worker count.

use evpix_core::array::{ArrayConfig, ArrayError, SimOutput, SimPlan};
use evpix_core::pixel::Event;
use rayon::prelude::*;

/// Runs the array across `threads` workers (default: rayon's global
/// pool). `threads = Some(1)` matches `evpix_core::array::simulate`
/// byte for byte, as does any other worker count.
pub fn simulate_parallel(
    cfg: &ArrayConfig,
    threads: Option<usize>,
) -> Result<SimOutput, ArrayError> {
    let plan = SimPlan::new(cfg)?;
    let height = plan.height();
    let workers = threads.unwrap_or_else(rayon::current_num_threads).max(1);

    let run = |plan: &SimPlan| -> Vec<Event> {
        // a few bands per worker so an uneven row doesn't straggle
        let band_rows = (height as usize).div_ceil(workers * 4).max(1) as u32;
        let bands: Vec<_> = (0..height.div_ceil(band_rows))
            .map(|i| (i * band_rows)..((i + 1) * band_rows).min(height))
            .collect();
        let mut events: Vec<Event> =
            bands.into_par_iter().flat_map_iter(|band| plan.run_rows(band)).collect();
        events.sort_unstable_by_key(Event::order_key);
        events
    };

    let events = match threads {
        None => run(&plan),
        Some(_) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("worker pool");
            pool.install(|| run(&plan))
        }
    };

    Ok(SimOutput {
        events,
        dt_s: plan.dt(),
        steps: plan.steps(),
        diagnostics: plan.diagnostics().to_vec(),
    })
}
