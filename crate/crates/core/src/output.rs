//! Plain-text result formats. Numbers are written like C's `%.12e` so files
//! diff byte-for-byte across runs and implementations.

use std::fmt::Write as _;

use crate::experiments::DecaySeries;
use crate::omega::ShockMapTable;
use crate::solver::ValueEvolution;

/// `%.12e`: twelve fractional digits, signed exponent of at least two digits.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// `sample,horizon,diameter`
pub fn decay_csv(series: &DecaySeries) -> String {
    let mut out = String::from("sample,horizon,diameter\n");
    for (k, row) in series.per_sample.iter().enumerate() {
        for (h, d) in series.horizons.iter().zip(row) {
            let _ = writeln!(out, "{k},{h},{}", sci(*d));
        }
    }
    out
}

/// Parses `decay_csv` output back into `(horizons, per_sample)`.
pub fn parse_decay_csv(text: &str) -> Result<(Vec<i64>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("sample,horizon,diameter") {
        return Err("missing `sample,horizon,diameter` header".into());
    }
    let mut horizons: Vec<i64> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let bad = || format!("line {}: `{line}`", n + 2);
        if f.len() != 3 {
            return Err(bad());
        }
        let sample: usize = f[0].trim().parse().map_err(|_| bad())?;
        let h: i64 = f[1].trim().parse().map_err(|_| bad())?;
        let d: f64 = f[2].trim().parse().map_err(|_| bad())?;
        if sample == rows.len() {
            rows.push(Vec::new());
        } else if sample + 1 != rows.len() {
            return Err(bad());
        }
        let row = rows.last_mut().unwrap();
        if sample == 0 {
            horizons.push(h);
        } else if horizons.get(row.len()) != Some(&h) {
            return Err(bad());
        }
        row.push(d);
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != horizons.len()) {
        return Err("ragged or empty table".into());
    }
    Ok((horizons, rows))
}

/// `time,index,value`
pub fn values_csv(ev: &ValueEvolution) -> String {
    let mut out = String::from("time,index,value\n");
    for (n, row) in ev.phi.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let _ = writeln!(out, "{},{i},{}", ev.start + n as i64, sci(*v));
        }
    }
    out
}

/// `t_minus_s,point_index,terminal_index,kind`
pub fn omega_csv(tables: &[ShockMapTable]) -> String {
    let mut out = String::from("t_minus_s,point_index,terminal_index,kind\n");
    for table in tables {
        for (y, (x, k)) in table.map.iter().zip(&table.kind).enumerate() {
            let _ = writeln!(out, "{},{y},{x},{}", table.t - table.s, k.as_str());
        }
    }
    out
}
