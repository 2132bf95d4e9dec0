//! Command-line front end: simulate scenes into event files, run the
//! characterization sweeps, recommend biases, render accumulation
//! images, preview stimuli and dump single-pixel traces.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors; all
//! failures put one `error: ...` line on stderr.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use evpix::config::{load_sim_config, load_stimulus, write_bias_config, ResolvedSimConfig};
use evpix::events_io::{
    read_events_bin, read_events_csv, write_events_bin, write_events_csv, BIN_MAGIC,
};
use evpix::pgm::write_pgm;
use evpix::render::render_accumulation;
use evpix::simulate_parallel;
use evpix::trace::write_trace_csv;
use evpix_core::bias::BiasConfig;
use evpix_core::characterize::{
    sweep_noise_vs_illuminance, sweep_noise_vs_ipr, sweep_noise_vs_threshold, sweep_refractory,
    sweep_threshold, SweepConfig,
};
use evpix_core::pixel::Event;
use evpix_core::recommend::{
    self, BackgroundIllumination, DataPriority, ObjectContrast, ObjectSize, ObjectSpeed,
    ScenarioCriteria, SensorMotion, TweakMapping,
};
use evpix_core::stimulus::Stimulus;

#[derive(Parser)]
#[command(
    name = "evpix",
    version,
    about = "Event-camera pixel array simulator",
    after_help = "Set EVPIX_SEED to override the config seed for any run."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a stimulus into an event file.
    Simulate(SimulateArgs),
    /// Run a characterization sweep and write its table.
    Sweep(SweepArgs),
    /// Recommend bias settings for a scenario.
    Recommend(RecommendArgs),
    /// Render an event file into accumulation images.
    Render(RenderArgs),
    /// Write preview frames of a stimulus.
    Stimulus(StimulusArgs),
    /// Dump one pixel's internal waveforms step by step.
    Trace(TraceArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Simulation config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Stimulus description JSON.
    #[arg(long)]
    stimulus: PathBuf,
    /// Output event file.
    #[arg(long)]
    out: PathBuf,
    /// Event file format; `auto` picks csv for .csv paths, bin otherwise.
    #[arg(long, value_enum, default_value_t = EventFormat::Auto)]
    format: EventFormat,
    /// Worker thread count; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EventFormat {
    Auto,
    Bin,
    Csv,
}

#[derive(Args)]
struct SweepArgs {
    /// Which curve to sweep.
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Simulation config JSON; array size, seed, per-point duration and
    /// the base bias point come from here.
    #[arg(long)]
    config: PathBuf,
    /// Output table path.
    #[arg(long)]
    out: PathBuf,
    /// Table layout: comma-separated or gnuplot-style whitespace.
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Grid start; defaults depend on the sweep kind.
    #[arg(long)]
    lo: Option<f64>,
    /// Grid end.
    #[arg(long)]
    hi: Option<f64>,
    /// Grid size.
    #[arg(long)]
    points: Option<usize>,
    /// Worker thread count; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// Noise rates vs illuminance (log grid).
    Lux,
    /// Noise rates vs photoreceptor bias (log grid).
    Ipr,
    /// Noise rates vs threshold tweak (linear grid).
    Tweak,
    /// Refractory period vs max-firing-rate tweak; closed form.
    Refractory,
    /// Thresholds vs threshold tweak; closed form.
    Threshold,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Gnuplot,
}

#[derive(Args)]
struct RecommendArgs {
    #[arg(long, value_enum)]
    data_priority: DataPriorityArg,
    #[arg(long, value_enum)]
    sensor_motion: SensorMotionArg,
    #[arg(long, value_enum)]
    background_illumination: BackgroundArg,
    #[arg(long, value_enum)]
    object_size: ObjectSizeArg,
    #[arg(long, value_enum)]
    object_contrast: ObjectContrastArg,
    #[arg(long, value_enum)]
    object_speed: ObjectSpeedArg,
    /// Also write a simulation config realizing the recommendation.
    #[arg(long)]
    emit_config: Option<PathBuf>,
}

// clap-side mirrors of the scenario vocabulary
#[derive(Clone, Copy, ValueEnum)]
enum DataPriorityArg {
    HighFidelity,
    Sparse,
}

#[derive(Clone, Copy, ValueEnum)]
enum SensorMotionArg {
    Static,
    Moving,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackgroundArg {
    Bright,
    Dim,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectSizeArg {
    Large,
    Small,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectContrastArg {
    High,
    Low,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectSpeedArg {
    Fast,
    Slow,
}

#[derive(Args)]
struct RenderArgs {
    /// Input event file, binary or CSV.
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory for the numbered PGM frames.
    #[arg(long)]
    out_dir: PathBuf,
    /// Accumulation window length.
    #[arg(long, default_value_t = 10.0)]
    window_ms: f64,
    /// Event count mapped to full white/black.
    #[arg(long, default_value_t = 3)]
    full_scale: u32,
    /// Start of the first window.
    #[arg(long, default_value_t = 0.0)]
    t0_ms: f64,
    /// Stop after this many frames; default runs to the last event.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Array width; required for CSV inputs, ignored for binary.
    #[arg(long)]
    width: Option<u32>,
    /// Array height; required for CSV inputs, ignored for binary.
    #[arg(long)]
    height: Option<u32>,
}

#[derive(Args)]
struct StimulusArgs {
    /// Stimulus description JSON.
    #[arg(long)]
    stimulus: PathBuf,
    /// Directory for the preview frames.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    width: u32,
    #[arg(long)]
    height: u32,
    /// Time span the frames cover.
    #[arg(long)]
    duration_s: f64,
    /// Number of evenly spaced frames.
    #[arg(long, default_value_t = 10)]
    frames: u32,
}

#[derive(Args)]
struct TraceArgs {
    /// Simulation config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Stimulus description JSON.
    #[arg(long)]
    stimulus: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Pixel column to trace.
    #[arg(long, default_value_t = 0)]
    x: u32,
    /// Pixel row to trace.
    #[arg(long, default_value_t = 0)]
    y: u32,
}

/// Errors that are the caller's fault; they exit 2 instead of 1.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Recommend(a) => cmd_recommend(a),
        Command::Render(a) => cmd_render(a),
        Command::Stimulus(a) => cmd_stimulus(a),
        Command::Trace(a) => cmd_trace(a),
    }
}

/// EVPIX_SEED beats the config seed when set.
fn apply_seed_override(cfg: &mut ResolvedSimConfig) -> Result<()> {
    if let Ok(text) = std::env::var("EVPIX_SEED") {
        let seed = text
            .parse::<u64>()
            .map_err(|_| UsageError(format!("EVPIX_SEED must be a u64, got `{text}`")))?;
        cfg.seed = seed;
    }
    Ok(())
}

fn print_diagnostics(diagnostics: &[String]) {
    for d in diagnostics {
        eprintln!("warning: {d}");
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = load_sim_config(&args.config).context("config")?;
    apply_seed_override(&mut cfg)?;
    let stimulus = load_stimulus(&args.stimulus).context("stimulus")?;
    let (width, height) = (cfg.width, cfg.height);
    let array_cfg = cfg.into_array_config(stimulus);
    let out = simulate_parallel(&array_cfg, args.threads).context("simulate")?;
    print_diagnostics(&out.diagnostics);

    let format = match args.format {
        EventFormat::Auto if has_extension(&args.out, "csv") => EventFormat::Csv,
        EventFormat::Auto => EventFormat::Bin,
        chosen => chosen,
    };
    let file = File::create(&args.out)
        .with_context(|| format!("create {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    match format {
        EventFormat::Csv => write_events_csv(&mut w, &out.events).context("write events")?,
        _ => write_events_bin(&mut w, width, height, &out.events).context("write events")?,
    }
    w.flush().context("write events")?;
    println!(
        "{} events over {} steps (dt {:.3e} s) -> {}",
        out.events.len(),
        out.steps,
        out.dt_s,
        args.out.display()
    );
    Ok(())
}

fn grid(lo: f64, hi: f64, points: usize, log: bool) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| {
            let s = i as f64 / (points - 1) as f64;
            if log {
                lo * (hi / lo).powf(s)
            } else {
                lo + (hi - lo) * s
            }
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = load_sim_config(&args.config).context("config")?;
    apply_seed_override(&mut cfg)?;
    let sweep_cfg = SweepConfig {
        width: cfg.width,
        height: cfg.height,
        seed: cfg.seed,
        duration_s: cfg.duration_s,
        params: cfg.params.clone(),
    };
    let bias = cfg.bias.clone();
    let points = |default: usize| args.points.unwrap_or(default);
    let span = |d_lo: f64, d_hi: f64| (args.lo.unwrap_or(d_lo), args.hi.unwrap_or(d_hi));
    let sim = |c: &evpix_core::array::ArrayConfig| simulate_parallel(c, args.threads);

    let table = match args.kind {
        SweepKind::Lux => {
            let (lo, hi) = span(1e-4, 1e3);
            let g = grid(lo, hi, points(15), true);
            let sweep = sweep_noise_vs_illuminance(&sweep_cfg, &bias, &g, sim)
                .context("sweep")?;
            render_table(&sweep, args.format)
        }
        SweepKind::Ipr => {
            let (lo, hi) = span(4.64e-12, 4.64e-9);
            let g = grid(lo, hi, points(10), true);
            let sweep = sweep_noise_vs_ipr(&sweep_cfg, &bias, &g, 0.04, sim)
                .context("sweep")?;
            println!(
                "rate peak at i_pr = {:.3e} A, high-end plateau {:.3} Hz",
                sweep.argmax_ipr, sweep.plateau_rate_hz
            );
            render_table(&sweep.table, args.format)
        }
        SweepKind::Tweak => {
            let (lo, hi) = span(-0.5, 0.5);
            let g = grid(lo, hi, points(7), false);
            let sweep = sweep_noise_vs_threshold(&sweep_cfg, &bias, &g, 0.04, sim)
                .context("sweep")?;
            println!(
                "gaussian-tail signature (growing decrements): {}",
                sweep.tail_concave_down
            );
            render_table(&sweep.table, args.format)
        }
        SweepKind::Refractory => {
            let (lo, hi) = span(-0.75, 1.0);
            let g = grid(lo, hi, points(8), false);
            let rows = sweep_refractory(&g, &sweep_cfg.params);
            let sep = sep_for(args.format);
            let mut out = format!("tweak{sep}refractory_s{sep}inoperative{sep}short_warning\n");
            for r in rows {
                let refr = r.refractory_s.map_or("-".to_string(), |v| format!("{v:.6e}"));
                out.push_str(&format!(
                    "{}{sep}{refr}{sep}{}{sep}{}\n",
                    r.tweak, r.inoperative, r.short_warning
                ));
            }
            out
        }
        SweepKind::Threshold => {
            let (lo, hi) = span(-0.5, 0.5);
            let g = grid(lo, hi, points(11), false);
            let rows = sweep_threshold(&g, &bias, &sweep_cfg.params).context("sweep")?;
            let sep = sep_for(args.format);
            let mut out = format!("tweak{sep}theta_on{sep}theta_off\n");
            for r in rows {
                out.push_str(&format!("{}{sep}{:.6}{sep}{:.6}\n", r.tweak, r.theta_on, r.theta_off));
            }
            out
        }
    };
    fs::write(&args.out, table)
        .with_context(|| format!("write {}", args.out.display()))?;
    println!("sweep table -> {}", args.out.display());
    Ok(())
}

fn sep_for(format: TableFormat) -> &'static str {
    match format {
        TableFormat::Csv => ",",
        TableFormat::Gnuplot => " ",
    }
}

fn render_table(sweep: &evpix_core::characterize::NoiseSweep, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => sweep.to_csv(),
        TableFormat::Gnuplot => sweep.to_gnuplot(),
    }
}

fn cmd_recommend(args: RecommendArgs) -> Result<()> {
    let criteria = ScenarioCriteria {
        data_priority: match args.data_priority {
            DataPriorityArg::HighFidelity => DataPriority::HighFidelity,
            DataPriorityArg::Sparse => DataPriority::Sparse,
        },
        sensor_motion: match args.sensor_motion {
            SensorMotionArg::Static => SensorMotion::Static,
            SensorMotionArg::Moving => SensorMotion::Moving,
        },
        background_illumination: match args.background_illumination {
            BackgroundArg::Bright => BackgroundIllumination::Bright,
            BackgroundArg::Dim => BackgroundIllumination::Dim,
        },
        object_size: match args.object_size {
            ObjectSizeArg::Large => ObjectSize::Large,
            ObjectSizeArg::Small => ObjectSize::Small,
        },
        object_contrast: match args.object_contrast {
            ObjectContrastArg::High => ObjectContrast::High,
            ObjectContrastArg::Low => ObjectContrast::Low,
        },
        object_speed: match args.object_speed {
            ObjectSpeedArg::Fast => ObjectSpeed::Fast,
            ObjectSpeedArg::Slow => ObjectSpeed::Slow,
        },
    };
    let rec = recommend::recommend(&criteria);
    println!("bandwidth:   {}", rec.bandwidth.name());
    println!("sensitivity: {}", rec.sensitivity.name());
    println!("refractory:  {}", rec.refractory.name());
    for line in &rec.rationale {
        println!("  - {line}");
    }
    let tweaks = recommend::to_tweaks(&rec, &TweakMapping::default())
        .context("recommend")?;
    println!(
        "tweaks: threshold {:+.2}, bandwidth scale x{:.2}, max firing rate {:+.2}",
        tweaks.threshold_tweak, tweaks.bandwidth_scale, tweaks.max_firing_rate_tweak
    );
    if let Some(path) = &args.emit_config {
        let params = evpix_core::params::PixelParams::default();
        let bias: BiasConfig = recommend::to_bias_config(&tweaks, &params);
        write_bias_config(path, &bias).context("emit config")?;
        println!("config -> {}", path.display());
    }
    Ok(())
}

fn read_event_file(args: &RenderArgs) -> Result<(u32, u32, Vec<Event>)> {
    let mut file = File::open(&args.input)
        .with_context(|| format!("open {}", args.input.display()))?;
    let mut magic = [0u8; 8];
    let n = file.read(&mut magic).context("read input")?;
    let is_bin = n == 8 && &magic == BIN_MAGIC;
    drop(file);
    let file = File::open(&args.input).context("reopen input")?;
    if is_bin {
        let (w, h, events) = read_events_bin(file).context("read events")?;
        Ok((w, h, events))
    } else {
        let events = read_events_csv(file).context("read events")?;
        let (Some(w), Some(h)) = (args.width, args.height) else {
            bail!(UsageError(
                "CSV event files carry no geometry; pass --width and --height".into()
            ));
        };
        Ok((w, h, events))
    }
}

fn cmd_render(args: RenderArgs) -> Result<()> {
    if args.window_ms <= 0.0 {
        bail!(UsageError("--window-ms must be positive".into()));
    }
    if args.full_scale < 1 {
        bail!(UsageError("--full-scale must be at least 1".into()));
    }
    let (width, height, events) = read_event_file(&args)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("create {}", args.out_dir.display()))?;

    let window_us = (args.window_ms * 1e3).round() as u64;
    let t0_us = (args.t0_ms * 1e3).round() as u64;
    let t_last = events.last().map_or(t0_us, |e| e.t_us);
    let mut frame = 0u64;
    let mut empty_windows = 0u64;
    loop {
        let start = t0_us + frame * window_us;
        let done = start > t_last && frame > 0;
        if done || args.max_frames.is_some_and(|m| frame >= m) {
            break;
        }
        let out = render_accumulation(&events, width, height, start, window_us, args.full_scale);
        if out.empty {
            empty_windows += 1;
        }
        let path = args.out_dir.join(format!("frame_{frame:05}.pgm"));
        let file = File::create(&path)
            .with_context(|| format!("create {}", path.display()))?;
        write_pgm(BufWriter::new(file), width, height, &out.pixels).context("write pgm")?;
        frame += 1;
    }
    if empty_windows > 0 {
        eprintln!("warning: {empty_windows} of {frame} windows had no events");
    }
    println!("{frame} frames -> {}", args.out_dir.display());
    Ok(())
}

fn cmd_stimulus(args: StimulusArgs) -> Result<()> {
    if args.width == 0 || args.height == 0 || args.frames == 0 {
        bail!(UsageError("--width, --height and --frames must be positive".into()));
    }
    if args.duration_s <= 0.0 {
        bail!(UsageError("--duration-s must be positive".into()));
    }
    let stimulus = load_stimulus(&args.stimulus).context("stimulus")?;
    stimulus.validate().context("stimulus")?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("create {}", args.out_dir.display()))?;

    // sample every frame first so one log-lux scale covers the sequence
    let times: Vec<f64> = (0..args.frames)
        .map(|i| args.duration_s * i as f64 / args.frames as f64)
        .collect();
    let mut fields = Vec::with_capacity(times.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in &times {
        let mut field = Vec::with_capacity((args.width * args.height) as usize);
        for y in 0..args.height {
            for x in 0..args.width {
                let lux = stimulus.lux(x, y, t).max(1e-12);
                let log = lux.ln();
                lo = lo.min(log);
                hi = hi.max(log);
                field.push(log);
            }
        }
        fields.push(field);
    }
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    for (i, field) in fields.iter().enumerate() {
        let pixels: Vec<u8> = field
            .iter()
            .map(|&log| if scale == 0.0 { 128 } else { ((log - lo) * scale).round() as u8 })
            .collect();
        let path = args.out_dir.join(format!("stim_{i:05}.pgm"));
        let file = File::create(&path)
            .with_context(|| format!("create {}", path.display()))?;
        write_pgm(BufWriter::new(file), args.width, args.height, &pixels)
            .context("write pgm")?;
    }
    println!("{} frames -> {}", fields.len(), args.out_dir.display());
    Ok(())
}

fn cmd_trace(args: TraceArgs) -> Result<()> {
    let mut cfg = load_sim_config(&args.config).context("config")?;
    apply_seed_override(&mut cfg)?;
    let stimulus: Stimulus = load_stimulus(&args.stimulus).context("stimulus")?;
    let (x, y) = (args.x, args.y);
    let array_cfg = cfg.into_array_config(stimulus);
    let file = File::create(&args.out)
        .with_context(|| format!("create {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    let summary = write_trace_csv(&mut w, &array_cfg, x, y).context("trace")?;
    w.flush().context("trace")?;
    print_diagnostics(&summary.diagnostics);
    println!(
        "{} steps (dt {:.3e} s), {} events, thresholds ({:.4}, {:.4}) -> {}",
        summary.steps,
        summary.dt_s,
        summary.events.len(),
        summary.theta_on,
        summary.theta_off,
        args.out.display()
    );
    Ok(())
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext))
}
