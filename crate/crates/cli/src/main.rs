//! Command-line front end: encode audio to event rasters, build and
//! quantize networks, run inference and dataset evaluation, benchmark the
//! simulator and evaluate the training loss on dumped traces.

mod config;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use config::FileConfig;
use spikeline_core::energy::calibrate_energy_per_synop;
use spikeline_core::loss::TraceMatrix;
use spikeline_core::qnet::{load_qnet, save_qnet};
use spikeline_core::quant::{quantize_network_with, QuantParams};
use spikeline_core::wav::read_wav_mono;
use spikeline_core::{
    build_synnet, encode_audio, estimate_energy, evaluate, load_manifest, peak_loss,
    simulate_latency, EvalOptions, EventRaster, FloatNetwork, InferenceReport, LatencyMode,
    PeakLossParams, QuantNetwork, Split,
};

#[derive(Parser)]
#[command(name = "spikeline", version, about = "Event-driven audio classification simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a mono WAV file into an evt-csv event raster.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Pipeline configuration (TOML); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Build a float network from the configured hyperparameters.
    BuildNet {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Weight initialization seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the float network (JSON).
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Quantize a float network into a deployable qnet file.
    Quantize {
        /// Float network JSON produced by build-net.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Optional quantization report destination.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Threshold headroom factor.
        #[arg(long, default_value_t = 1.0)]
        headroom: f64,
    },
    /// Run one raster through a network and report the decision.
    Infer {
        #[arg(long)]
        net: PathBuf,
        /// Input raster (evt-csv).
        #[arg(long)]
        raster: PathBuf,
        /// Dump readout membrane traces to CSV (step,channel,v_mem).
        #[arg(long)]
        traces: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report accelerated-mode latency instead of realtime pacing.
        #[arg(long)]
        accelerated: bool,
    },
    /// Evaluate a network over a manifest of labelled WAV files.
    Eval {
        #[arg(long)]
        net: PathBuf,
        /// Manifest CSV (path,label,split).
        #[arg(long)]
        manifest: PathBuf,
        /// Pipeline configuration (TOML).
        #[arg(long)]
        afe: Option<PathBuf>,
        /// Restrict to one split (train/val/test); all entries otherwise.
        #[arg(long)]
        split: Option<Split>,
        /// Write the confusion matrix (rows = truth) to CSV.
        #[arg(long)]
        confusion: Option<PathBuf>,
        /// Carry encoder and network state across samples (streaming mode).
        #[arg(long)]
        carry_state: bool,
        #[arg(long)]
        accelerated: bool,
    },
    /// Measure simulator throughput on the configured network scale.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of timed inferences.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Raster length per inference.
        #[arg(long, default_value_t = 100)]
        bins: usize,
        /// Calibrate the per-SynOp energy constant against a target
        /// dynamic energy per inference (joules) and print it.
        #[arg(long)]
        calibrate_dynamic_j: Option<f64>,
    },
    /// Evaluate the peak-window loss on a dumped trace CSV.
    LossEval {
        /// Trace CSV (step,channel,v_mem).
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        target_class: usize,
        #[arg(long, default_value_t = 100.0)]
        window_ms: f64,
        #[arg(long, default_value_t = 1.5)]
        target_peak: f64,
        #[arg(long, default_value_t = 1.0)]
        off_weight: f64,
        /// Step width of the trace rows.
        #[arg(long, default_value_t = 10.0)]
        dt_ms: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Encode { input, output, config } => {
            let config = FileConfig::load(config.as_deref())?;
            let audio = read_wav_mono(&input, config.afe.sample_rate_hz)?;
            let raster = encode_audio(&audio, &config.afe)?;
            raster.save(&output)?;
            println!(
                "wrote {} ({} bins, {} events)",
                output.display(),
                raster.num_bins(),
                raster.total_events()
            );
            Ok(())
        }
        Command::BuildNet { config, seed, output } => {
            let config = FileConfig::load(config.as_deref())?;
            let net = build_synnet(&config.synnet, seed)?;
            let json = serde_json::to_string_pretty(&net)?;
            std::fs::write(&output, json)
                .with_context(|| format!("writing {}", output.display()))?;
            let shapes: Vec<String> =
                net.layers().map(|l| format!("{}x{}", l.rows, l.cols)).collect();
            println!("wrote {} (layers {})", output.display(), shapes.join(" "));
            Ok(())
        }
        Command::Quantize { input, output, report, headroom } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let float: FloatNetwork = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", input.display()))?;
            let params = QuantParams {
                threshold_headroom: headroom,
                ..QuantParams::default()
            };
            let (net, quant_report) = quantize_network_with(&float, &params)?;
            save_qnet(&net, &output)?;
            if let Some(report_path) = report {
                std::fs::write(&report_path, quant_report.to_text())
                    .with_context(|| format!("writing {}", report_path.display()))?;
            }
            for (i, stats) in quant_report.layers.iter().enumerate() {
                println!(
                    "layer {i}: scale={:.4} max_abs={:.6} mse={:.3e}",
                    stats.scale, stats.max_abs_weight, stats.mse
                );
            }
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::Infer { net, raster, traces, config, accelerated } => {
            let config = FileConfig::load(config.as_deref())?;
            let net = load_qnet(&net)?;
            let raster = EventRaster::load(&raster)?;
            let report = net.run_raster(&raster, traces.is_some())?;
            let report = attach_energy(report, &net, &config, accelerated);
            print_report(&report);
            if let Some(path) = traces {
                let matrix = report.readout_traces.as_ref().expect("traces were recorded");
                write_trace_csv(path.as_path(), matrix)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Eval { net, manifest, afe, split, confusion, carry_state, accelerated } => {
            let config = FileConfig::load(afe.as_deref())?;
            let net = load_qnet(&net)?;
            let manifest = load_manifest(&manifest, net.num_classes())?;
            let options = EvalOptions { split, carry_state };
            let summary = evaluate(&net, &manifest, &config.afe, &options)?;

            match summary.accuracy {
                Some(acc) => println!("accuracy={acc}"),
                None => println!("accuracy=NaN"),
            }
            println!("samples={} correct={}", summary.num_samples, summary.num_correct);
            println!(
                "syn_ops={} neuron_updates={} spikes={}",
                summary.telemetry.syn_ops,
                summary.telemetry.neuron_updates,
                summary.telemetry.spikes_emitted
            );
            let mode = latency_mode(accelerated);
            let wall = simulate_latency(
                summary.total_bins,
                mode,
                net.dt_s(),
                &config.energy,
                config.per_step_cost_cycles,
            );
            let energy = estimate_energy(&summary.telemetry, &config.energy, wall);
            println!(
                "wall_time_s={wall} idle_j={} dynamic_j={} active_j={}",
                energy.idle_j, energy.dynamic_j, energy.active_j
            );
            if let Some(path) = confusion {
                std::fs::write(&path, summary.confusion_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Bench { config, seed, samples, bins, calibrate_dynamic_j } => {
            let config = FileConfig::load(config.as_deref())?;
            let float = build_synnet(&config.synnet, seed)?;
            let (net, _) = spikeline_core::quantize_network(&float)?;
            let raster = bench_raster(seed ^ 0x5EED, bins, net.input_width());

            for _ in 0..10.min(samples) {
                net.run_raster(&raster, false)?;
            }
            let start = Instant::now();
            let mut syn_ops_total = 0u64;
            for _ in 0..samples {
                let report = net.run_raster(&raster, false)?;
                syn_ops_total += report.telemetry.syn_ops;
            }
            let elapsed = start.elapsed().as_secs_f64();
            let rate = samples as f64 / elapsed;
            let audio_seconds = bins as f64 * net.dt_s();
            println!(
                "samples_per_s={rate:.1} realtime_factor={:.1} mean_syn_ops={:.1}",
                rate * audio_seconds,
                syn_ops_total as f64 / samples as f64
            );
            if let Some(target) = calibrate_dynamic_j {
                let mean = syn_ops_total as f64 / samples as f64;
                let per_synop = calibrate_energy_per_synop(target, mean)?;
                println!("energy_per_synop_j={per_synop:e}");
            }
            Ok(())
        }
        Command::LossEval { traces, target_class, window_ms, target_peak, off_weight, dt_ms } => {
            let matrix = read_trace_csv(&traces, dt_ms / 1000.0)?;
            let params = PeakLossParams {
                window_s: window_ms / 1000.0,
                target_peak,
                off_target_weight: off_weight,
            };
            let loss = peak_loss(&matrix, target_class, &params)?;
            println!("loss={loss}");
            Ok(())
        }
    }
}

/// Deterministic sparse raster for benchmarking (counts 0..=3, about a
/// quarter of the cells active).
fn bench_raster(seed: u64, num_bins: usize, num_channels: usize) -> EventRaster {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x5851f42d4c957f2d);
    let mut counts = Vec::with_capacity(num_bins * num_channels);
    for _ in 0..num_bins * num_channels {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        let cell = (z ^ (z >> 31)) % 16;
        counts.push(if cell < 4 { (cell % 3 + 1) as u32 } else { 0 });
    }
    EventRaster::from_counts(num_channels, num_bins, counts, 0.010).expect("sized correctly")
}

fn latency_mode(accelerated: bool) -> LatencyMode {
    if accelerated {
        LatencyMode::Accelerated
    } else {
        LatencyMode::Realtime
    }
}

fn attach_energy(
    mut report: InferenceReport,
    net: &QuantNetwork,
    config: &FileConfig,
    accelerated: bool,
) -> InferenceReport {
    let wall = simulate_latency(
        report.simulated_steps,
        latency_mode(accelerated),
        net.dt_s(),
        &config.energy,
        config.per_step_cost_cycles,
    );
    report.energy = Some(estimate_energy(&report.telemetry, &config.energy, wall));
    report
}

fn print_report(report: &InferenceReport) {
    println!("decision={}", report.decision);
    let counts: Vec<String> =
        report.class_spike_counts.iter().map(u64::to_string).collect();
    println!("class_spike_counts={}", counts.join(","));
    println!(
        "steps={} syn_ops={} neuron_updates={} spikes={}",
        report.simulated_steps,
        report.telemetry.syn_ops,
        report.telemetry.neuron_updates,
        report.telemetry.spikes_emitted
    );
    if let Some(energy) = &report.energy {
        println!(
            "idle_j={} dynamic_j={} active_j={}",
            energy.idle_j, energy.dynamic_j, energy.active_j
        );
    }
}

fn write_trace_csv(path: &Path, traces: &TraceMatrix) -> anyhow::Result<()> {
    use std::io::Write;
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "step,channel,v_mem")?;
    for step in 0..traces.num_steps() {
        for channel in 0..traces.num_channels() {
            writeln!(w, "{step},{channel},{}", traces.value(step, channel))?;
        }
    }
    Ok(())
}

fn read_trace_csv(path: &Path, dt_s: f64) -> anyhow::Result<TraceMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("step,channel,v_mem") => {}
        other => bail!("expected header `step,channel,v_mem`, got {other:?}"),
    }
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    let mut num_steps = 0;
    let mut num_channels = 0;
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            bail!("line {}: expected 3 fields", idx + 2);
        }
        let step: usize = parts[0].trim().parse().context("step")?;
        let channel: usize = parts[1].trim().parse().context("channel")?;
        let value: f64 = parts[2].trim().parse().context("v_mem")?;
        num_steps = num_steps.max(step + 1);
        num_channels = num_channels.max(channel + 1);
        cells.push((step, channel, value));
    }
    if cells.is_empty() {
        bail!("trace file has no data rows");
    }
    let mut rows = vec![vec![0.0; num_channels]; num_steps];
    for (step, channel, value) in cells {
        rows[step][channel] = value;
    }
    Ok(TraceMatrix::from_rows(rows, dt_s)?)
}
