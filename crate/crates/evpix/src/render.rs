//! Accumulation-image rendering: signed per-pixel event sums over a time
//! window mapped onto gray levels, ON brightening and OFF darkening.

use evpix_core::pixel::Event;

/// Rendered frame plus a flag for windows that caught no events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOutcome {
    /// Row-major gray image, `width * height` bytes.
    pub pixels: Vec<u8>,
    /// True when no event fell inside the window; the image is then
    /// uniform mid-gray.
    pub empty: bool,
}

/// Accumulates events with `t0_us <= t < t0_us + window_us` into a gray
/// image: mid-gray 128 plus the signed event sum clamped to
/// `±full_scale` and scaled to `±127`.
pub fn render_accumulation(
    events: &[Event],
    width: u32,
    height: u32,
    t0_us: u64,
    window_us: u64,
    full_scale: u32,
) -> RenderOutcome {
    assert!(window_us > 0, "window must be positive");
    assert!(full_scale >= 1, "full scale must be at least 1");
    let mut sums = vec![0i64; (width as usize) * (height as usize)];
    let mut empty = true;
    // events arrive time-sorted, so the window is one contiguous slice
    let start = events.partition_point(|e| e.t_us < t0_us);
    let end = events.partition_point(|e| e.t_us < t0_us.saturating_add(window_us));
    for e in &events[start..end] {
        if e.x as u32 >= width || e.y as u32 >= height {
            continue;
        }
        sums[(e.y as usize) * (width as usize) + (e.x as usize)] += e.polarity.sign() as i64;
        empty = false;
    }
    let fs = full_scale as i64;
    let pixels = sums
        .iter()
        .map(|&s| {
            let clamped = s.clamp(-fs, fs) as f64;
            (128.0 + clamped * 127.0 / fs as f64).round() as u8
        })
        .collect();
    RenderOutcome { pixels, empty }
}
