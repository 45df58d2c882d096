//! Serialization helpers: 17-significant-digit floats everywhere, so every
//! emitted value round-trips to the exact f64.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use nn_extremal::{SliceSample, SweepRow};

/// JSON formatter printing every float with 17 significant digits.
struct SigFig17;

impl serde_json::ser::Formatter for SigFig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to JSON with exact float formatting, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFig17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serializer emits utf-8"))
}

pub fn closed_form_csv(rows: &[(f64, f64, u8, f64)]) -> String {
    let mut out = String::from("ratio,value,piece,ratio_bound\n");
    for &(ratio, value, piece, ratio_bound) in rows {
        out.push_str(&format!("{ratio:.16e},{value:.16e},{piece},{ratio_bound:.16e}\n"));
    }
    out
}

pub fn compare_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("ratio,found,closed_form,rel_err\n");
    for row in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            row.ratio, row.found, row.closed_form, row.rel_err
        ));
    }
    out
}

pub fn slice_csv(rows: &[SliceSample]) -> String {
    let mut out = String::from("s,sigma\n");
    for row in rows {
        out.push_str(&format!("{:.16e},{:.16e}\n", row.s, row.sigma));
    }
    out
}

/// Record of one CLI run, written next to the outputs on request.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub seed: u64,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

pub fn utc_timestamp() -> String {
    let unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .unwrap_or_default()
        .as_secs();
    format_utc(unix)
}

/// Civil-from-days conversion for a UTC RFC 3339 stamp.
fn format_utc(unix: u64) -> String {
    let days = (unix / 86_400) as i64;
    let rem = unix % 86_400;
    let (hh, mm, ss) = (rem / 3600, rem % 3600 / 60, rem % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097) as u64;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let year = yoe as i64 + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { year + 1 } else { year };
    format!("{year:04}-{month:02}-{day:02}T{hh:02}:{mm:02}:{ss:02}Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_17_digits() {
        #[derive(Serialize)]
        struct Sample {
            x: f64,
        }
        for x in [0.1, 1.0 / 3.0, 12.0 * (2.0 - 3f64.sqrt()), 1e-300, 4.0] {
            let json = to_json(&Sample { x }).unwrap();
            let back: serde_json::Value = serde_json::from_str(&json).unwrap();
            assert_eq!(back["x"].as_f64().unwrap().to_bits(), x.to_bits(), "{json}");
        }
    }

    #[test]
    fn timestamps() {
        assert_eq!(format_utc(0), "1970-01-01T00:00:00Z");
        assert_eq!(format_utc(951_782_400), "2000-02-29T00:00:00Z");
        assert_eq!(format_utc(1_700_000_000), "2023-11-14T22:13:20Z");
    }
}
