//! CSV and JSON persistence for result tables, trajectories and filter traces.
//!
//! CSV output is comma-separated with a header row and LF line endings. Floats
//! are written with 17 significant digits so they read back exactly.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{MseRow, MseTable, SnrCurve, SnrRow};
use crate::error::{Error, Result};
use crate::filters::FilterTrace;
use crate::sim::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str, column: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| format_err(format!("column `{column}`: cannot parse `{field}`")))
}

fn format_err(message: impl Into<String>) -> Error {
    Error::Format {
        path: PathBuf::from("<input>"),
        message: message.into(),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stream>"),
        source: e,
    }
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io_err(io),
            _ => unreachable!(),
        }
    } else {
        format_err(e.to_string())
    }
}

/// A table with a fixed CSV layout.
pub trait Tabular: Sized {
    const HEADER: &'static [&'static str];

    fn records(&self) -> Vec<Vec<String>>;

    fn from_records(records: &[csv::StringRecord]) -> Result<Self>;
}

impl Tabular for MseTable {
    const HEADER: &'static [&'static str] = &[
        "scenario",
        "kf_mse",
        "garch_mse",
        "nnh_mse",
        "kf_se",
        "garch_se",
        "nnh_se",
    ];

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let nums = [
                    r.kf_mse,
                    r.garch_mse,
                    r.nnh_mse,
                    r.kf_se,
                    r.garch_se,
                    r.nnh_se,
                ];
                std::iter::once(r.scenario.clone())
                    .chain(nums.map(fmt_f64))
                    .collect()
            })
            .collect()
    }

    fn from_records(records: &[csv::StringRecord]) -> Result<Self> {
        let rows = records
            .iter()
            .map(|rec| {
                let f = |i: usize| parse_f64(&rec[i], Self::HEADER[i]);
                Ok(MseRow {
                    scenario: rec[0].to_string(),
                    kf_mse: f(1)?,
                    garch_mse: f(2)?,
                    nnh_mse: f(3)?,
                    kf_se: f(4)?,
                    garch_se: f(5)?,
                    nnh_se: f(6)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(MseTable { rows })
    }
}

impl Tabular for SnrCurve {
    const HEADER: &'static [&'static str] = &[
        "input_snr_db",
        "kf_improvement_db",
        "garch_improvement_db",
        "nnh_improvement_db",
    ];

    fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.input_snr_db,
                    r.kf_improvement_db,
                    r.garch_improvement_db,
                    r.nnh_improvement_db,
                ]
                .map(fmt_f64)
                .to_vec()
            })
            .collect()
    }

    fn from_records(records: &[csv::StringRecord]) -> Result<Self> {
        let rows = records
            .iter()
            .map(|rec| {
                let f = |i: usize| parse_f64(&rec[i], Self::HEADER[i]);
                Ok(SnrRow {
                    input_snr_db: f(0)?,
                    kf_improvement_db: f(1)?,
                    garch_improvement_db: f(2)?,
                    nnh_improvement_db: f(3)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SnrCurve { rows })
    }
}

fn write_csv<W: Write>(header: &[&str], rows: &[Vec<String>], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for row in rows {
        out.write_record(row).map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

fn read_csv<R: Read>(header: &[&str], r: R) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(r);
    let found = rdr.headers().map_err(csv_err)?;
    if found.iter().ne(header.iter().copied()) {
        return Err(format_err(format!(
            "unexpected header `{}`, expected `{}`",
            found.iter().collect::<Vec<_>>().join(","),
            header.join(",")
        )));
    }
    rdr.records()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err)
}

/// Writes a result table. An empty table yields a header-only CSV.
pub fn write_results<T, W>(table: &T, format: OutputFormat, mut w: W) -> Result<()>
where
    T: Tabular + Serialize,
    W: Write,
{
    match format {
        OutputFormat::Csv => write_csv(T::HEADER, &table.records(), w),
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, table).map_err(|e| format_err(e.to_string()))?;
            w.write_all(b"\n").map_err(io_err)
        }
    }
}

pub fn read_results<T, R>(format: OutputFormat, r: R) -> Result<T>
where
    T: Tabular + DeserializeOwned,
    R: Read,
{
    match format {
        OutputFormat::Csv => T::from_records(&read_csv(T::HEADER, r)?),
        OutputFormat::Json => serde_json::from_reader(r).map_err(|e| format_err(e.to_string())),
    }
}

const TRAJECTORY_HEADER: &[&str] = &["t", "x_true", "y", "jump_count"];

/// Writes a trajectory as CSV. The `y` column is empty when there are no measurements.
pub fn write_trajectory<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let ys = traj.measurements.as_deref();
    let rows: Vec<Vec<String>> = (0..traj.len())
        .map(|k| {
            vec![
                fmt_f64(traj.times[k]),
                fmt_f64(traj.states[k]),
                ys.map_or(String::new(), |y| fmt_f64(y[k])),
                traj.jump_counts[k].to_string(),
            ]
        })
        .collect();
    write_csv(TRAJECTORY_HEADER, &rows, w)
}

/// Reads a trajectory written by [`write_trajectory`]. Noise metadata is not stored.
pub fn read_trajectory<R: Read>(r: R) -> Result<Trajectory> {
    let records = read_csv(TRAJECTORY_HEADER, r)?;
    let n = records.len();
    let mut traj = Trajectory {
        times: Vec::with_capacity(n),
        states: Vec::with_capacity(n),
        measurements: None,
        jump_counts: Vec::with_capacity(n),
        noise: None,
    };
    let mut ys = Vec::with_capacity(n);
    for (i, rec) in records.iter().enumerate() {
        traj.times.push(parse_f64(&rec[0], "t")?);
        traj.states.push(parse_f64(&rec[1], "x_true")?);
        if !rec[2].is_empty() {
            ys.push(parse_f64(&rec[2], "y")?);
        }
        let count = rec[3]
            .trim()
            .parse()
            .map_err(|_| format_err(format!("row {i}: bad jump_count `{}`", &rec[3])))?;
        traj.jump_counts.push(count);
    }
    match ys.len() {
        0 => {}
        m if m == n => traj.measurements = Some(ys),
        m => return Err(format_err(format!("{m} of {n} rows carry a measurement"))),
    }
    Ok(traj)
}

pub const TRACE_HEADER: &[&str] = &[
    "t",
    "x_true",
    "y",
    "xhat_kf",
    "xhat_garch",
    "xhat_nnh",
    "sigma2_garch",
    "sigma2_nnh",
    "gain_kf",
    "gain_nnh",
];

/// Writes the per-step traces of the three trackers alongside the truth.
/// `traces` is in `[kf, garch, nnh]` order.
pub fn export_trace<W: Write>(traj: &Trajectory, traces: &[FilterTrace; 3], w: W) -> Result<()> {
    let ys = traj.measurements()?;
    let n = traj.len();
    for len in [traj.times.len(), ys.len()]
        .into_iter()
        .chain(traces.iter().map(FilterTrace::len))
    {
        if len != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: len,
            });
        }
    }
    let [kf, garch, nnh] = traces;
    let rows: Vec<Vec<String>> = (0..n)
        .map(|k| {
            [
                traj.times[k],
                traj.states[k],
                ys[k],
                kf.x_hat[k],
                garch.x_hat[k],
                nnh.x_hat[k],
                garch.sigma2[k],
                nnh.sigma2[k],
                kf.k_gain[k],
                nnh.k_gain[k],
            ]
            .map(fmt_f64)
            .to_vec()
        })
        .collect();
    write_csv(TRACE_HEADER, &rows, w)
}
