//! Plain-text serialization of quantized networks ("qnet" format).
//!
//! The document is whitespace-separated and integer-only:
//!
//! ```text
//! qnet 1
//! dt_ms 10
//! layers 4
//! layer 31 16
//! syn_dash <31 values>
//! mem_dash <31 values>
//! threshold <31 values>
//! max_spikes_per_step 15
//! weights
//! <31 rows of 16 values>
//! ...
//! ```
//!
//! Layers appear in feed order; the last layer is the readout. Integer
//! fields round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::snn::{QuantLayer, QuantNetwork};

pub fn to_qnet_string(net: &QuantNetwork) -> Result<String> {
    let dt_ms = net.dt_s() * 1000.0;
    if (dt_ms - dt_ms.round()).abs() > 1e-6 {
        return Err(Error::Validation(format!(
            "qnet stores dt in whole milliseconds; {dt_ms} ms is not representable"
        )));
    }
    let mut out = String::new();
    writeln!(out, "qnet 1").unwrap();
    writeln!(out, "dt_ms {}", dt_ms.round() as u64).unwrap();
    writeln!(out, "layers {}", net.hidden_layers().len() + 1).unwrap();
    for layer in net.layers() {
        writeln!(out, "layer {} {}", layer.rows(), layer.cols()).unwrap();
        write_ints(&mut out, "syn_dash", layer.syn_dash().iter().map(|&v| v as i64));
        write_ints(&mut out, "mem_dash", layer.mem_dash().iter().map(|&v| v as i64));
        write_ints(&mut out, "threshold", layer.threshold().iter().map(|&v| v as i64));
        writeln!(out, "max_spikes_per_step {}", layer.max_spikes_per_step()).unwrap();
        writeln!(out, "weights").unwrap();
        for row in 0..layer.rows() {
            let line = (0..layer.cols())
                .map(|col| layer.weight(row, col).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{line}").unwrap();
        }
    }
    Ok(out)
}

fn write_ints(out: &mut String, name: &str, values: impl Iterator<Item = i64>) {
    out.push_str(name);
    for v in values {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
}

pub fn from_qnet_str(text: &str) -> Result<QuantNetwork> {
    let mut tokens = Tokens::new(text);
    tokens.expect_word("qnet")?;
    let version: u32 = tokens.number("format version")?;
    if version != 1 {
        return Err(tokens.error(format!("unsupported qnet version {version}")));
    }
    tokens.expect_word("dt_ms")?;
    let dt_ms: u64 = tokens.number("dt_ms")?;
    if dt_ms == 0 {
        return Err(tokens.error("dt_ms must be positive".into()));
    }
    tokens.expect_word("layers")?;
    let num_layers: usize = tokens.number("layer count")?;
    if num_layers == 0 {
        return Err(tokens.error("a network needs at least one layer".into()));
    }

    let mut layers = Vec::with_capacity(num_layers);
    for _ in 0..num_layers {
        tokens.expect_word("layer")?;
        let rows: usize = tokens.number("rows")?;
        let cols: usize = tokens.number("cols")?;
        tokens.expect_word("syn_dash")?;
        let syn_dash: Vec<u8> = tokens.numbers(rows, "syn_dash")?;
        tokens.expect_word("mem_dash")?;
        let mem_dash: Vec<u8> = tokens.numbers(rows, "mem_dash")?;
        tokens.expect_word("threshold")?;
        let threshold: Vec<i16> = tokens.numbers(rows, "threshold")?;
        tokens.expect_word("max_spikes_per_step")?;
        let max_spikes: u32 = tokens.number("max_spikes_per_step")?;
        tokens.expect_word("weights")?;
        let weights: Vec<i8> = tokens.numbers(rows * cols, "weights")?;
        layers.push(QuantLayer::new(
            rows, cols, weights, syn_dash, mem_dash, threshold, max_spikes,
        )?);
    }
    if tokens.next_token().is_some() {
        return Err(tokens.error("trailing content after last layer".into()));
    }

    let readout = layers.pop().expect("at least one layer");
    QuantNetwork::new(layers, readout, dt_ms as f64 / 1000.0)
}

pub fn save_qnet(net: &QuantNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, to_qnet_string(net)?).map_err(|e| Error::io(path, e))
}

pub fn load_qnet(path: &Path) -> Result<QuantNetwork> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_qnet_str(&text)
}

/// Whitespace tokenizer that tracks line numbers for error reporting.
struct Tokens<'a> {
    iter: std::iter::Peekable<std::str::SplitWhitespace<'a>>,
    text: &'a str,
    consumed: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            iter: text.split_whitespace().peekable(),
            text,
            consumed: 0,
        }
    }

    fn next_token(&mut self) -> Option<&'a str> {
        let tok = self.iter.next()?;
        // Track position for line-number reporting.
        if let Some(pos) = self.text[self.consumed..].find(tok) {
            self.consumed += pos + tok.len();
        }
        Some(tok)
    }

    fn line(&self) -> usize {
        self.text[..self.consumed].matches('\n').count() + 1
    }

    fn error(&self, msg: String) -> Error {
        Error::Parse { line: self.line(), msg }
    }

    fn expect_word(&mut self, word: &str) -> Result<()> {
        match self.next_token() {
            Some(t) if t == word => Ok(()),
            Some(t) => Err(self.error(format!("expected `{word}`, found `{t}`"))),
            None => Err(self.error(format!("expected `{word}`, found end of file"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        match self.next_token() {
            Some(t) => t
                .parse()
                .map_err(|_| self.error(format!("invalid {what}: `{t}`"))),
            None => Err(self.error(format!("missing {what}"))),
        }
    }

    fn numbers<T: std::str::FromStr>(&mut self, n: usize, what: &str) -> Result<Vec<T>> {
        (0..n).map(|_| self.number(what)).collect()
    }
}
