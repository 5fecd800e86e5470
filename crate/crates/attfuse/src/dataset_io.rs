//! Dataset CSV reading and writing.
//!
//! Format contract: a header line
//! `t,gx,gy,gz,ax,ay,az,mx,my,mz[,ref_roll,ref_pitch,ref_yaw]`
//! followed by one row per sample. Units: seconds, rad/s, one consistent
//! accelerometer unit, one consistent magnetometer unit, radians. Lines
//! starting with `#` are comments; blank lines are skipped. Values use a
//! decimal point and no thousands separators. Floats are written in
//! shortest round-trip form, so write-then-read reproduces a dataset
//! exactly.

use std::fs;
use std::path::Path;

use attitude_fusion::{Attitude, BodyRates, Dataset, SensorSample, Vec3};

use crate::error::{CliError, Result};

const COLUMNS: [&str; 10] = ["t", "gx", "gy", "gz", "ax", "ay", "az", "mx", "my", "mz"];
const REF_COLUMNS: [&str; 3] = ["ref_roll", "ref_pitch", "ref_yaw"];

pub fn parse_dataset(path: &Path) -> Result<Dataset> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_dataset_str(&text, &path.display().to_string())
}

pub fn parse_dataset_str(text: &str, source: &str) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{source}: no header line")))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let with_reference = match names.len() {
        10 => false,
        13 => true,
        n => {
            return Err(CliError::Data(format!(
                "{source}:{header_line}: expected 10 or 13 columns, found {n}"
            )))
        }
    };
    for (i, expected) in COLUMNS
        .iter()
        .chain(
            with_reference
                .then_some(&REF_COLUMNS[..])
                .into_iter()
                .flatten(),
        )
        .enumerate()
    {
        if names[i] != *expected {
            return Err(CliError::Data(format!(
                "{source}:{header_line}: missing column '{expected}' (found '{}' at position {})",
                names[i],
                i + 1
            )));
        }
    }

    let mut samples = Vec::new();
    let mut reference = with_reference.then(Vec::new);
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let want = if with_reference { 13 } else { 10 };
        if fields.len() != want {
            return Err(CliError::Data(format!(
                "{source}:{line_no}: expected {want} fields, found {}",
                fields.len()
            )));
        }
        let mut values = [0.0f64; 13];
        for (col, field) in fields.iter().enumerate() {
            values[col] = field.parse().map_err(|_| {
                CliError::Data(format!(
                    "{source}:{line_no}: column {}: cannot parse '{field}' as a number",
                    col + 1
                ))
            })?;
        }
        if let Some(last) = samples.last() {
            let last: &SensorSample = last;
            if values[0] <= last.t {
                return Err(CliError::Data(format!(
                    "{source}:{line_no}: non-monotonic time {} after {}",
                    values[0], last.t
                )));
            }
        }
        samples.push(SensorSample {
            t: values[0],
            gyro: BodyRates::new(values[1], values[2], values[3]),
            accel: Vec3::new(values[4], values[5], values[6]),
            mag: Vec3::new(values[7], values[8], values[9]),
        });
        if let Some(reference) = reference.as_mut() {
            reference.push(Attitude::new(values[10], values[11], values[12]));
        }
    }
    if samples.is_empty() {
        return Err(CliError::Data(format!("{source}: no data rows")));
    }

    let rate = if samples.len() >= 2 {
        (samples.len() - 1) as f64 / (samples.last().unwrap().t - samples[0].t)
    } else {
        1.0
    };
    Ok(Dataset {
        samples,
        reference,
        rate,
    })
}

pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(&COLUMNS.join(","));
    if dataset.reference.is_some() {
        out.push(',');
        out.push_str(&REF_COLUMNS.join(","));
    }
    out.push('\n');
    for (i, s) in dataset.samples.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}",
            s.t,
            s.gyro.p,
            s.gyro.q,
            s.gyro.r,
            s.accel.x,
            s.accel.y,
            s.accel.z,
            s.mag.x,
            s.mag.y,
            s.mag.z
        ));
        if let Some(reference) = &dataset.reference {
            let r = reference[i];
            out.push_str(&format!(",{},{},{}", r.roll, r.pitch, r.yaw));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(())
}
