//! Time-binned event counts per channel -- the interchange format between
//! the audio front-end and the network engine.
//!
//! The on-disk form is "evt-csv": a header line `# channels=<N> dt_ms=<D>`
//! followed by one `<bin>,<channel>,<count>` line per nonzero cell, sorted
//! by bin then channel, LF line endings.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EventRaster {
    num_channels: usize,
    num_bins: usize,
    /// Row-major `[bin][channel]`.
    counts: Vec<u32>,
    bin_dt_s: f64,
}

impl EventRaster {
    /// An empty raster ready to receive bins.
    pub fn new(num_channels: usize, bin_dt_s: f64) -> Self {
        Self {
            num_channels,
            num_bins: 0,
            counts: Vec::new(),
            bin_dt_s,
        }
    }

    pub fn from_counts(
        num_channels: usize,
        num_bins: usize,
        counts: Vec<u32>,
        bin_dt_s: f64,
    ) -> Result<Self> {
        if counts.len() != num_channels * num_bins {
            return Err(Error::Shape(format!(
                "count grid {} does not match {num_bins} bins x {num_channels} channels",
                counts.len()
            )));
        }
        Ok(Self {
            num_channels,
            num_bins,
            counts,
            bin_dt_s,
        })
    }

    pub fn num_channels(&self) -> usize {
        self.num_channels
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn bin_dt_s(&self) -> f64 {
        self.bin_dt_s
    }

    pub fn bin(&self, t: usize) -> &[u32] {
        &self.counts[t * self.num_channels..(t + 1) * self.num_channels]
    }

    pub fn count(&self, t: usize, channel: usize) -> u32 {
        self.counts[t * self.num_channels + channel]
    }

    pub fn push_bin(&mut self, bin: &[u32]) {
        debug_assert_eq!(bin.len(), self.num_channels);
        self.counts.extend_from_slice(bin);
        self.num_bins += 1;
    }

    pub fn total_events(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn channel_totals(&self) -> Vec<u64> {
        let mut totals = vec![0u64; self.num_channels];
        for bin in 0..self.num_bins {
            for (tot, &c) in totals.iter_mut().zip(self.bin(bin)) {
                *tot += c as u64;
            }
        }
        totals
    }

    pub fn write_evt_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let dt_ms = self.bin_dt_s * 1000.0;
        if (dt_ms - dt_ms.round()).abs() < 1e-9 {
            writeln!(w, "# channels={} dt_ms={}", self.num_channels, dt_ms.round() as u64)?;
        } else {
            writeln!(w, "# channels={} dt_ms={}", self.num_channels, dt_ms)?;
        }
        for bin in 0..self.num_bins {
            for (ch, &c) in self.bin(bin).iter().enumerate() {
                if c != 0 {
                    writeln!(w, "{bin},{ch},{c}")?;
                }
            }
        }
        Ok(())
    }

    pub fn to_evt_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_evt_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("evt-csv is ASCII")
    }

    /// Parse evt-csv. Trailing all-zero bins are not representable in the
    /// format, so the bin count is inferred from the last nonzero cell.
    pub fn read_evt_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "empty file".into() })?;
        let header = header.map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
        let (num_channels, bin_dt_s) = parse_header(&header)?;

        let mut raster = EventRaster::new(num_channels, bin_dt_s);
        let mut last: Option<(usize, usize)> = None;
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let bin = parse_field::<usize>(parts.next(), line_no, "bin index")?;
            let channel = parse_field::<usize>(parts.next(), line_no, "channel")?;
            let count = parse_field::<u32>(parts.next(), line_no, "count")?;
            if parts.next().is_some() {
                return Err(Error::Parse { line: line_no, msg: "too many fields".into() });
            }
            if channel >= num_channels {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("channel {channel} out of range 0..{num_channels}"),
                });
            }
            if let Some(prev) = last {
                if (bin, channel) <= prev {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "cells must be sorted by bin then channel".into(),
                    });
                }
            }
            last = Some((bin, channel));
            while raster.num_bins <= bin {
                raster.push_bin(&vec![0; num_channels]);
            }
            raster.counts[bin * num_channels + channel] = count;
        }
        Ok(raster)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_evt_csv(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_evt_csv(std::io::BufReader::new(file))
    }
}

fn parse_header(header: &str) -> Result<(usize, f64)> {
    let err = |msg: &str| Error::Parse { line: 1, msg: msg.into() };
    let rest = header
        .strip_prefix("# channels=")
        .ok_or_else(|| err("expected header `# channels=<N> dt_ms=<D>`"))?;
    let (channels, dt) = rest
        .split_once(" dt_ms=")
        .ok_or_else(|| err("expected ` dt_ms=<D>` in header"))?;
    let num_channels: usize = channels
        .parse()
        .map_err(|_| err("channel count is not an integer"))?;
    let dt_ms: f64 = dt.trim().parse().map_err(|_| err("dt_ms is not a number"))?;
    if num_channels == 0 || !(dt_ms > 0.0) {
        return Err(err("channels and dt_ms must be positive"));
    }
    Ok((num_channels, dt_ms / 1000.0))
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("invalid {what}") })
}
