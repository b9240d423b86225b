//! CSV and JSON rendering of result tables.
//!
//! CSV numbers carry 9 significant digits; JSON keeps full precision.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::bounds::BoundsResult;
use crate::error::{Error, Result};
use crate::experiments::{Fig1Row, StreamOptimum, SweepRow};
use crate::simulator::{SimConfig, SimEstimate};

pub const SWEEP_HEADER: [&str; 7] = ["alpha", "n", "m", "upper", "lower", "sim_mean", "sim_ci95"];
pub const FIG1_HEADER: [&str; 5] = ["n", "i", "approx", "empirical", "ci95"];
pub const OPTIMA_HEADER: [&str; 4] = ["alpha", "n", "m_star", "se_at_m_star"];
pub const BOUNDS_HEADER: [&str; 7] = ["n", "m", "alpha", "upper", "lower", "upper_err", "lower_err"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `x` rounded to 9 significant digits, printed in shortest form.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    rounded.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

fn csv_table<H, R>(header: H, rows: R) -> Result<String>
where
    H: IntoIterator,
    H::Item: AsRef<[u8]>,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    csv_table(
        SWEEP_HEADER,
        rows.iter().map(|r| {
            vec![
                sig9(r.alpha),
                r.n.to_string(),
                r.m.to_string(),
                sig9(r.upper),
                sig9(r.lower),
                opt(r.sim_mean),
                opt(r.sim_ci95),
            ]
        }),
    )
}

pub fn fig1_csv(rows: &[Fig1Row]) -> Result<String> {
    csv_table(
        FIG1_HEADER,
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.i.to_string(),
                sig9(r.approx),
                sig9(r.empirical),
                opt(r.ci95),
            ]
        }),
    )
}

pub fn optima_csv(optima: &[StreamOptimum]) -> Result<String> {
    csv_table(
        OPTIMA_HEADER,
        optima.iter().map(|o| {
            vec![
                sig9(o.alpha),
                o.n.to_string(),
                o.m_star.to_string(),
                sig9(o.se_at_m_star),
            ]
        }),
    )
}

pub fn bounds_csv(r: &BoundsResult) -> Result<String> {
    csv_table(
        BOUNDS_HEADER,
        [vec![
            r.model.n().to_string(),
            r.model.m().to_string(),
            sig9(r.model.alpha()),
            sig9(r.upper),
            sig9(r.lower),
            sig9(r.upper_err),
            sig9(r.lower_err),
        ]],
    )
}

/// One row; per-stream mean SIRs go in `sir_db_1 .. sir_db_m`.
pub fn simulate_csv(config: &SimConfig, est: &SimEstimate) -> Result<String> {
    let mut header: Vec<String> = ["n", "m", "alpha", "lambda", "interferers", "drops", "seed", "se_mean", "ci95"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=est.per_stream_sir_db_mean.len()).map(|k| format!("sir_db_{k}")));
    let mut row = vec![
        config.model.n().to_string(),
        config.model.m().to_string(),
        sig9(config.model.alpha()),
        sig9(config.lambda),
        config.interferer_count.to_string(),
        est.drops.to_string(),
        est.seed.to_string(),
        sig9(est.se_mean),
        opt(est.ci95),
    ];
    row.extend(est.per_stream_sir_db_mean.iter().map(|&v| sig9(v)));
    csv_table(header, [row])
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `content` to `path`, or to `stdout` when no path is given.
pub fn emit(content: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(content.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source: io::Error| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(0.1), "0.1");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(123456.789012), "123456.789");
        assert_eq!(sig9(-2.0e-7 / 3.0), "-0.0000000666666667");
        assert_eq!(sig9(f64::NAN), "NaN");
    }

    #[test]
    fn empty_tables_keep_header() {
        assert_eq!(sweep_csv(&[]).unwrap(), "alpha,n,m,upper,lower,sim_mean,sim_ci95\n");
        assert_eq!(fig1_csv(&[]).unwrap(), "n,i,approx,empirical,ci95\n");
    }

    #[test]
    fn missing_simulation_leaves_blank_cells() {
        let r = SweepRow {
            alpha: 4.0,
            n: 2,
            m: 2,
            upper: 4.123456789123,
            lower: 3.9,
            sim_mean: None,
            sim_ci95: None,
        };
        assert_eq!(sweep_csv(&[r]).unwrap().lines().nth(1).unwrap(), "4,2,2,4.12345679,3.9,,");
    }

    #[test]
    fn json_round_trip() {
        let r = SweepRow {
            alpha: 3.0,
            n: 4,
            m: 4,
            upper: 6.123456789012345,
            lower: 5.9,
            sim_mean: Some(6.0),
            sim_ci95: Some(0.0314),
        };
        let s = to_json(&[r]).unwrap();
        let back: Vec<SweepRow> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![r]);
    }

    #[test]
    fn io_errors_name_the_path() {
        let err = emit("x", Some(Path::new("/nonexistent-dir/out.csv")), &mut Vec::new()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"), "{err}");
    }
}
