//! Rendering of exact values, CSV series and plotting scripts, plus the
//! small text formats accepted on the command line.

use std::io::Write;

use serde_json::{json, Value};
use toeplitz_core::orbitstats::{CylinderFunction, IntervalValue, Rational};

/// Version stamped into every structured report.
pub const REPORT_VERSION: u32 = 1;

/// `"p/q"` (always with a denominator).
pub fn ratio_text(numer: i128, denom: i128) -> String {
    format!("{numer}/{denom}")
}

pub fn ratio_decimal(numer: i128, denom: i128) -> String {
    format!("{:.9}", numer as f64 / denom as f64)
}

pub fn rational_text(r: &Rational) -> String {
    ratio_text(*r.numer(), *r.denom())
}

pub fn rational_decimal(r: &Rational) -> String {
    ratio_decimal(*r.numer(), *r.denom())
}

/// `{"exact": "p/q", "decimal": "…"}`.
pub fn rational_json(r: &Rational) -> Value {
    json!({ "exact": rational_text(r), "decimal": rational_decimal(r) })
}

pub fn ratio_u64_json(numer: u64, denom: u64) -> Value {
    json!({ "exact": ratio_text(numer as i128, denom as i128), "decimal": ratio_decimal(numer as i128, denom as i128) })
}

pub fn interval_json(v: &IntervalValue) -> Value {
    json!({
        "low": rational_json(&v.low),
        "high": rational_json(&v.high),
        "resolved": v.resolved,
        "unresolved": v.unresolved,
    })
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.05"`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let bad = || format!("'{text}' is not a rational number");
    if let Some((p, q)) = t.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(format!("'{text}' has a zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_val: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i128.pow(frac.len() as u32);
        let frac_val: i128 = frac.parse().map_err(|_| bad())?;
        let mag = int_val.abs() * scale + frac_val;
        return Ok(Rational::new(if negative { -mag } else { mag }, scale));
    }
    t.parse::<i128>().map(Rational::from_integer).map_err(|_| bad())
}

/// `G`, `ind:0`, `ind:1`, or `block:<odd-length 0/1 word>`.
pub fn parse_cylinder(text: &str) -> Result<CylinderFunction, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("g") {
        return Ok(CylinderFunction::g());
    }
    if let Some(bit) = t.strip_prefix("ind:") {
        return match bit {
            "0" => Ok(CylinderFunction::indicator(0)),
            "1" => Ok(CylinderFunction::indicator(1)),
            _ => Err(format!("indicator needs 0 or 1, got '{bit}'")),
        };
    }
    if let Some(word) = t.strip_prefix("block:") {
        let bits = parse_bits(word)?;
        return CylinderFunction::block_indicator(&bits).map_err(|e| e.to_string());
    }
    Err(format!("unknown cylinder '{text}' (expected G, ind:0, ind:1 or block:<bits>)"))
}

pub fn parse_bits(word: &str) -> Result<Vec<u8>, String> {
    word.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("'{word}' is not a 0/1 word")),
        })
        .collect()
}

/// One row of a series: `(shift, N, value)`.
pub struct SeriesRow<'a> {
    pub shift: i128,
    pub n: u64,
    pub value: &'a IntervalValue,
    /// Extra trailing cells (already rendered).
    pub extra: Vec<String>,
}

/// Writes `N,low,high,resolved,unresolved,shift,low_decimal,high_decimal[,extra…]`.
pub fn write_series_csv<W: Write>(out: W, rows: &[SeriesRow], extra_headers: &[&str]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["N", "low", "high", "resolved", "unresolved", "shift", "low_decimal", "high_decimal"];
    header.extend_from_slice(extra_headers);
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.n.to_string(),
            rational_text(&r.value.low),
            rational_text(&r.value.high),
            r.value.resolved.to_string(),
            r.value.unresolved.to_string(),
            r.shift.to_string(),
            rational_decimal(&r.value.low),
            rational_decimal(&r.value.high),
        ];
        rec.extend(r.extra.iter().cloned());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Self-contained gnuplot script (data inlined) plotting the interval
/// bounds against N, one pair of curves per shift.
pub fn gnuplot_script(title: &str, rows: &[SeriesRow]) -> String {
    let mut shifts: Vec<i128> = rows.iter().map(|r| r.shift).collect();
    shifts.dedup();
    shifts.sort_unstable();
    shifts.dedup();
    let mut s = String::new();
    s.push_str(&format!("set title \"{}\"\n", title.replace('"', "'")));
    s.push_str("set xlabel \"N\"\nset ylabel \"average\"\nset logscale x\nset key outside\n");
    for (i, shift) in shifts.iter().enumerate() {
        s.push_str(&format!("$shift{i} << EOD\n"));
        for r in rows.iter().filter(|r| r.shift == *shift) {
            s.push_str(&format!("{} {} {}\n", r.n, rational_decimal(&r.value.low), rational_decimal(&r.value.high)));
        }
        s.push_str("EOD\n");
    }
    let plots: Vec<String> = shifts
        .iter()
        .enumerate()
        .map(|(i, shift)| {
            format!(
                "$shift{i} using 1:2 with linespoints title \"low r={shift}\", $shift{i} using 1:3 with linespoints title \"high r={shift}\""
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", ")));
    s
}
