//! Dataset manifests and batch evaluation.
//!
//! A manifest is a CSV of `path,label,split` rows. Evaluation encodes each
//! referenced WAV, runs the network from zeroed state (or carries state
//! across samples in streaming mode) and aggregates accuracy, a confusion
//! matrix and activity telemetry.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::afe::{AfeConfig, AfeProcessor};
use crate::error::{Error, Result};
use crate::snn::{argmax_lowest, QuantNetwork, StepTelemetry};
use crate::wav::read_wav_mono;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split `{other}` (expected train/val/test)")),
        }
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: usize,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
    num_classes: usize,
}

impl Manifest {
    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }
}

/// Load and validate a manifest CSV (`path,label,split` with header).
pub fn load_manifest(path: &Path, num_classes: usize) -> Result<Manifest> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    {
        let headers = reader.headers().map_err(|e| csv_error(path, e))?;
        let expected = ["path", "label", "split"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::Parse {
                line: 1,
                msg: format!("manifest header must be `path,label,split`, got `{}`", got.join(",")),
            });
        }
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2; // header is line 1
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let entry_path = PathBuf::from(&record[0]);
        let label: usize = record[1].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("label `{}` is not an integer", &record[1]),
        })?;
        let split: Split = record[2].parse().map_err(|msg| Error::Parse { line, msg })?;
        if label >= num_classes {
            return Err(Error::Validation(format!(
                "line {line}: label {label} out of range for {num_classes} classes"
            )));
        }
        if !seen.insert(entry_path.clone()) {
            return Err(Error::Validation(format!(
                "duplicate path `{}`",
                entry_path.display()
            )));
        }
        entries.push(ManifestEntry { path: entry_path, label, split });
    }

    Ok(Manifest { entries, num_classes })
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = match e.position() {
        Some(pos) => pos.line() as usize,
        None => 0,
    };
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse { line, msg: format!("{other:?}") },
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    /// Restrict evaluation to one split (all entries otherwise).
    pub split: Option<Split>,
    /// Keep encoder and network state across samples (streaming mode)
    /// instead of resetting per sample.
    pub carry_state: bool,
}

/// Aggregate outcome. `accuracy` is None for an empty selection rather
/// than a misleading zero.
#[derive(Debug, Clone)]
pub struct EvalSummary {
    pub num_samples: usize,
    pub num_correct: usize,
    pub accuracy: Option<f64>,
    /// Rows = true label, columns = prediction.
    pub confusion: Vec<Vec<u64>>,
    pub telemetry: StepTelemetry,
    pub total_bins: usize,
}

impl EvalSummary {
    pub fn confusion_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.confusion {
            let line = row.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Encode and classify every selected manifest entry.
pub fn evaluate(
    net: &QuantNetwork,
    manifest: &Manifest,
    afe: &AfeConfig,
    options: &EvalOptions,
) -> Result<EvalSummary> {
    if manifest.num_classes() != net.num_classes() {
        return Err(Error::Shape(format!(
            "manifest has {} classes but the network outputs {}",
            manifest.num_classes(),
            net.num_classes()
        )));
    }
    let num_classes = net.num_classes();
    let mut summary = EvalSummary {
        num_samples: 0,
        num_correct: 0,
        accuracy: None,
        confusion: vec![vec![0; num_classes]; num_classes],
        telemetry: StepTelemetry::default(),
        total_bins: 0,
    };

    let mut processor = AfeProcessor::new(afe)?;
    let mut net_state = net.new_state();

    for entry in manifest.entries() {
        if let Some(split) = options.split {
            if entry.split != split {
                continue;
            }
        }
        let audio = read_wav_mono(&entry.path, afe.sample_rate_hz)?;

        if !options.carry_state {
            processor.reset();
            net_state.reset();
        }
        let mut raster = processor.new_raster();
        processor.process(&audio.samples, &mut raster)?;

        let mut counts = vec![0u64; num_classes];
        for t in 0..raster.num_bins() {
            let (spikes, telemetry) = net.step(&mut net_state, raster.bin(t))?;
            summary.telemetry += telemetry;
            for (c, s) in counts.iter_mut().zip(&spikes) {
                *c += *s as u64;
            }
        }
        let prediction = argmax_lowest(&counts);

        summary.num_samples += 1;
        summary.total_bins += raster.num_bins();
        summary.confusion[entry.label][prediction] += 1;
        if prediction == entry.label {
            summary.num_correct += 1;
        }
    }

    if summary.num_samples > 0 {
        summary.accuracy = Some(summary.num_correct as f64 / summary.num_samples as f64);
    }
    Ok(summary)
}
