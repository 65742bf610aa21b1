use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::SweepResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "sweep_param",
    "sweep_value",
    "scheme",
    "processing",
    "rate_bits",
    "oracle_mean",
    "oracle_stderr",
    "per_active_user_rate",
];

/// Twelve significant digits, `%.12g` style.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// One CSV line, numbers already rounded to twelve significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub sweep_param: String,
    pub sweep_value: f64,
    pub scheme: String,
    pub processing: String,
    pub rate_bits: Option<f64>,
    pub oracle_mean: Option<f64>,
    pub oracle_stderr: Option<f64>,
    pub per_active_user_rate: Option<f64>,
}

impl CsvRecord {
    fn fields(&self) -> [String; 8] {
        [
            self.sweep_param.clone(),
            format_number(self.sweep_value),
            self.scheme.clone(),
            self.processing.clone(),
            optional(self.rate_bits),
            optional(self.oracle_mean),
            optional(self.oracle_stderr),
            optional(self.per_active_user_rate),
        ]
    }

    /// Records as they appear in the CSV for `result`.
    pub fn from_result(result: &SweepResult) -> Vec<CsvRecord> {
        let round = |x: f64| {
            format_number(x)
                .parse::<f64>()
                .expect("formatted number parses")
        };
        result
            .rows
            .iter()
            .map(|r| CsvRecord {
                sweep_param: r.param.to_string(),
                sweep_value: round(r.value),
                scheme: r.scheme.to_string(),
                processing: r.processing.to_string(),
                rate_bits: r.rate.map(round),
                oracle_mean: r.oracle.map(|o| round(o.0)),
                oracle_stderr: r.oracle.map(|o| round(o.1)),
                per_active_user_rate: r.per_active_user.map(round),
            })
            .collect()
    }
}

fn csv_error(context: &str, e: csv::Error) -> Error {
    Error::Io {
        path: context.to_string(),
        message: e.to_string(),
    }
}

/// Writes the header and one line per row.
pub fn emit_csv<W: Write>(result: &SweepResult, destination: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(destination);
    w.write_record(CSV_HEADER)
        .map_err(|e| csv_error("<csv>", e))?;
    for record in CsvRecord::from_result(result) {
        w.write_record(record.fields())
            .map_err(|e| csv_error("<csv>", e))?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    emit_csv(result, file).map_err(|e| match e {
        Error::Io { message, .. } => Error::Io {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

/// Parses a file produced by [`emit_csv`].
pub fn read_csv<R: Read>(source: R) -> Result<Vec<CsvRecord>> {
    let mut r = csv::Reader::from_reader(source);
    let header = r.headers().map_err(|e| csv_error("<csv>", e))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::InvalidArgument(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(Some)
                .map_err(|_| Error::InvalidArgument(format!("'{s}' is not a number")))
        }
    };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error("<csv>", e))?;
        out.push(CsvRecord {
            sweep_param: rec[0].to_string(),
            sweep_value: num(&rec[1])?
                .ok_or_else(|| Error::InvalidArgument("missing sweep_value".into()))?,
            scheme: rec[2].to_string(),
            processing: rec[3].to_string(),
            rate_bits: num(&rec[4])?,
            oracle_mean: num(&rec[5])?,
            oracle_stderr: num(&rec[6])?,
            per_active_user_rate: num(&rec[7])?,
        });
    }
    Ok(out)
}

/// Gnuplot data: one indexed block per curve (`# SCHEME-PROCESSING` comment,
/// columns `x rate [oracle_mean oracle_stderr] [per_active_user]`), blocks
/// separated by two blank lines.
pub fn emit_gnuplot<W: Write>(result: &SweepResult, mut destination: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: "<gnuplot>".into(),
        message: e.to_string(),
    };
    let mut curves: Vec<(String, String)> = Vec::new();
    for r in &result.rows {
        let key = (r.scheme.to_string(), r.processing.to_string());
        if !curves.contains(&key) {
            curves.push(key);
        }
    }
    for (i, (scheme, processing)) in curves.iter().enumerate() {
        if i > 0 {
            writeln!(destination, "\n").map_err(io)?;
        }
        writeln!(destination, "# {processing}-{scheme}").map_err(io)?;
        for r in result
            .rows
            .iter()
            .filter(|r| r.scheme.as_str() == scheme && r.processing.as_str() == processing)
        {
            let Some(rate) = r.rate else { continue };
            let mut line = format!("{} {}", format_number(r.value), format_number(rate));
            if let Some((m, s)) = r.oracle {
                line.push_str(&format!(" {} {}", format_number(m), format_number(s)));
            }
            if let Some(p) = r.per_active_user {
                line.push_str(&format!(" {}", format_number(p)));
            }
            writeln!(destination, "{line}").map_err(io)?;
        }
    }
    Ok(())
}
