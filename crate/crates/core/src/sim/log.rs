//! Per-step time-series log and its CSV serialization.
//!
//! The CSV schema is fixed: one header row naming every column in declared
//! order, then one row per sample with floats printed to 17 significant
//! digits so values round-trip bit-exactly. The two Lyapunov columns are
//! empty when the true plant parameters are unknown (nonlinear plants).

use std::io::{self, BufRead, Write};

use crate::error::LogError;

/// Column header, in declared order.
pub const CSV_HEADER: &str =
    "t,r,x,y,x_m,x_hat,e1,e2_innov,e2_true,P,L,k_hat,l_hat,w_hat,theta,u,V,Vdot_analytic";

/// One logged sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub r: f64,
    /// Ground-truth state.
    pub x: f64,
    pub y: f64,
    pub x_m: f64,
    pub x_hat: f64,
    /// `x_hat - x_m`.
    pub e1: f64,
    /// Innovation `y - x_hat`; what the controller acts on.
    pub e2_innov: f64,
    /// True observer error `x - x_hat`; diagnostics only.
    pub e2_true: f64,
    pub p: f64,
    pub l: f64,
    pub k_hat: f64,
    pub l_hat: f64,
    pub w_hat: f64,
    pub theta: f64,
    pub u: f64,
    /// Lyapunov value, present when the true plant is linear.
    pub v_lyap: Option<f64>,
    /// Analytic `V' = -e' U2 e`, present when the true plant is linear.
    pub vdot_analytic: Option<f64>,
}

/// Column-oriented log with a fixed sample interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeriesLog {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_m: Vec<f64>,
    pub x_hat: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2_innov: Vec<f64>,
    pub e2_true: Vec<f64>,
    pub p: Vec<f64>,
    pub l: Vec<f64>,
    pub k_hat: Vec<f64>,
    pub l_hat: Vec<f64>,
    pub w_hat: Vec<f64>,
    pub theta: Vec<f64>,
    pub u: Vec<f64>,
    pub v_lyap: Vec<Option<f64>>,
    pub vdot_analytic: Vec<Option<f64>>,
}

impl TimeSeriesLog {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            x: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            x_m: Vec::with_capacity(n),
            x_hat: Vec::with_capacity(n),
            e1: Vec::with_capacity(n),
            e2_innov: Vec::with_capacity(n),
            e2_true: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            l: Vec::with_capacity(n),
            k_hat: Vec::with_capacity(n),
            l_hat: Vec::with_capacity(n),
            w_hat: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            v_lyap: Vec::with_capacity(n),
            vdot_analytic: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, row: LogRow) {
        self.t.push(row.t);
        self.r.push(row.r);
        self.x.push(row.x);
        self.y.push(row.y);
        self.x_m.push(row.x_m);
        self.x_hat.push(row.x_hat);
        self.e1.push(row.e1);
        self.e2_innov.push(row.e2_innov);
        self.e2_true.push(row.e2_true);
        self.p.push(row.p);
        self.l.push(row.l);
        self.k_hat.push(row.k_hat);
        self.l_hat.push(row.l_hat);
        self.w_hat.push(row.w_hat);
        self.theta.push(row.theta);
        self.u.push(row.u);
        self.v_lyap.push(row.v_lyap);
        self.vdot_analytic.push(row.vdot_analytic);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn row(&self, i: usize) -> LogRow {
        LogRow {
            t: self.t[i],
            r: self.r[i],
            x: self.x[i],
            y: self.y[i],
            x_m: self.x_m[i],
            x_hat: self.x_hat[i],
            e1: self.e1[i],
            e2_innov: self.e2_innov[i],
            e2_true: self.e2_true[i],
            p: self.p[i],
            l: self.l[i],
            k_hat: self.k_hat[i],
            l_hat: self.l_hat[i],
            w_hat: self.w_hat[i],
            theta: self.theta[i],
            u: self.u[i],
            v_lyap: self.v_lyap[i],
            vdot_analytic: self.vdot_analytic[i],
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        let mut line = String::with_capacity(512);
        for i in 0..self.len() {
            line.clear();
            for (j, v) in [
                self.t[i],
                self.r[i],
                self.x[i],
                self.y[i],
                self.x_m[i],
                self.x_hat[i],
                self.e1[i],
                self.e2_innov[i],
                self.e2_true[i],
                self.p[i],
                self.l[i],
                self.k_hat[i],
                self.l_hat[i],
                self.w_hat[i],
                self.theta[i],
                self.u[i],
            ]
            .into_iter()
            .enumerate()
            {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&fmt_f64(v));
            }
            for opt in [self.v_lyap[i], self.vdot_analytic[i]] {
                line.push(',');
                if let Some(v) = opt {
                    line.push_str(&fmt_f64(v));
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, LogError> {
        let mut lines = reader.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim_end() != CSV_HEADER {
            return Err(LogError::Header {
                expected: CSV_HEADER.to_string(),
                found: header,
            });
        }
        let mut log = TimeSeriesLog::default();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 18 {
                return Err(LogError::Malformed {
                    line: lineno + 2,
                    message: format!("expected 18 fields, found {}", fields.len()),
                });
            }
            let num = |idx: usize| -> Result<f64, LogError> {
                fields[idx].parse().map_err(|e| LogError::Malformed {
                    line: lineno + 2,
                    message: format!("field {} (`{}`): {e}", idx + 1, fields[idx]),
                })
            };
            let opt = |idx: usize| -> Result<Option<f64>, LogError> {
                if fields[idx].is_empty() {
                    Ok(None)
                } else {
                    num(idx).map(Some)
                }
            };
            log.push(LogRow {
                t: num(0)?,
                r: num(1)?,
                x: num(2)?,
                y: num(3)?,
                x_m: num(4)?,
                x_hat: num(5)?,
                e1: num(6)?,
                e2_innov: num(7)?,
                e2_true: num(8)?,
                p: num(9)?,
                l: num(10)?,
                k_hat: num(11)?,
                l_hat: num(12)?,
                w_hat: num(13)?,
                theta: num(14)?,
                u: num(15)?,
                v_lyap: opt(16)?,
                vdot_analytic: opt(17)?,
            });
        }
        Ok(log)
    }

    pub fn from_csv_str(s: &str) -> Result<Self, LogError> {
        Self::read_csv(s.as_bytes())
    }
}

/// 17 significant digits, enough for exact f64 round-trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_row(t: f64) -> LogRow {
        LogRow {
            t,
            r: 0.2,
            x: 0.1 * t,
            y: 0.1 * t + 1e-3,
            x_m: 0.19,
            x_hat: 0.1 * t - 1e-4,
            e1: 0.01,
            e2_innov: 1.1e-3,
            e2_true: 1e-4,
            p: 3e-4,
            l: 1.0,
            k_hat: 0.5,
            l_hat: 0.9,
            w_hat: -0.1,
            theta: 0.8,
            u: -0.04,
            v_lyap: if t > 0.0 { Some(0.011) } else { None },
            vdot_analytic: if t > 0.0 { Some(-1e-5) } else { None },
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut log = TimeSeriesLog::default();
        log.push(sample_row(0.0));
        log.push(sample_row(0.01));
        let text = log.to_csv_string();
        let back = TimeSeriesLog::from_csv_str(&text).unwrap();
        assert_eq!(log, back);
    }

    #[test]
    fn header_mismatch_is_detected() {
        let err = TimeSeriesLog::from_csv_str("a,b,c\n1,2,3\n").unwrap_err();
        assert!(matches!(err, LogError::Header { .. }));
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = format!("{CSV_HEADER}\n1,2,3\n");
        match TimeSeriesLog::from_csv_str(&text).unwrap_err() {
            LogError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn float_format_round_trips(bits in any::<i64>()) {
            let v = f64::from_bits(bits as u64);
            prop_assume!(v.is_finite());
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            prop_assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }
}
