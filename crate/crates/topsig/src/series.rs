use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled real signal. The persistence diagram of its
/// piecewise-linear interpolation depends only on the ordered values,
/// never on `dt`; `dt` matters for windows expressed in seconds and for
/// the CSV time column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("time series must be nonempty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("time series values must be finite"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        Ok(TimeSeries { values, dt })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Contiguous slice `[start, start+len)` as a series with the same dt.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.values.len() || len == 0 {
            return Err(Error::invalid(format!(
                "window [{start}, {}) out of range for series of length {}",
                start + len,
                self.values.len()
            )));
        }
        Ok(TimeSeries {
            values: self.values[start..start + len].to_vec(),
            dt: self.dt,
        })
    }

    /// Writes the `t,value` CSV form, one row per sample at `t = n*dt`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,value")?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", n as f64 * self.dt, v)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// Reads the `t,value` CSV form. `dt` is recovered from the first two
    /// time stamps (1.0 for a single-row file).
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let reader = BufReader::new(input);
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if idx == 0 {
                if trimmed != "t,value" {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected header `t,value`, got `{trimmed}`"),
                    });
                }
                continue;
            }
            let mut fields = trimmed.split(',');
            let (t, v) = match (fields.next(), fields.next(), fields.next()) {
                (Some(t), Some(v), None) => (t, v),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected exactly two comma-separated fields".into(),
                    })
                }
            };
            let t: f64 = t.trim().parse().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad time value `{t}`: {e}"),
            })?;
            let v: f64 = v.trim().parse().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad sample value `{v}`: {e}"),
            })?;
            times.push(t);
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "no data rows".into(),
            });
        }
        let dt = if times.len() >= 2 { times[1] - times[0] } else { 1.0 };
        TimeSeries::new(values, dt)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file)
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(file)
    }
}
