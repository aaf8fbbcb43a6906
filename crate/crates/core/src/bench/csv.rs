use std::fmt::Write as _;

use super::BenchRecord;
use crate::error::{Error, Result};
use crate::grid::LevelVector;
use crate::kernels::VariantTag;

pub const CSV_HEADER: &str = "variant,d,levels,points,bytes,reps,seconds_med,cycles,flops_model,flops_per_cycle,gflops,intensity,checksum";

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Nine significant digits in the style of C's `%.9g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn write_rows(out: &mut String, records: &[BenchRecord]) {
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.variant,
            r.levels.dim(),
            r.levels,
            r.points,
            r.bytes,
            r.reps,
            opt(r.seconds),
            opt(r.cycles),
            r.flops_model,
            opt(r.flops_per_cycle),
            opt(r.gflops),
            format_float(r.intensity),
            r.checksum.map(|c| format!("{c:016x}")).unwrap_or_default(),
        );
    }
}

/// Header plus one row per record, in the given order.
pub fn emit_csv(records: &[BenchRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Parameter("no records to write".into()));
    }
    let mut out = String::new();
    write_rows(&mut out, records);
    Ok(out)
}

/// [`emit_csv`] preceded by `# key: value` comment lines.
pub fn emit_csv_with_metadata(records: &[BenchRecord], metadata: &[(&str, String)]) -> Result<String> {
    let body = emit_csv(records)?;
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out.push_str(&body);
    Ok(out)
}

/// Parses CSV produced by [`emit_csv`]; `#` lines are ignored.
pub fn read_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let bad = |line: usize, what: &str| Error::Parameter(format!("csv record {line}: {what}"));
    let mut reader = ::csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parameter(format!("csv header: {e}")))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(Error::Parameter(format!("unexpected csv header {header:?}")));
    }
    let mut records = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| bad(line, &e.to_string()))?;
        let field = |k: usize| row.get(k).unwrap_or("");
        let num = |k: usize| -> Result<Option<f64>> {
            match field(k) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(line, &format!("bad number {s:?}"))),
            }
        };
        let int = |k: usize| -> Result<u64> {
            field(k).parse().map_err(|_| bad(line, &format!("bad integer {:?}", field(k))))
        };
        records.push(BenchRecord {
            variant: field(0).parse::<VariantTag>()?,
            levels: field(2).parse::<LevelVector>()?,
            points: int(3)? as usize,
            bytes: int(4)? as usize,
            reps: int(5)? as usize,
            seconds: num(6)?,
            cycles: num(7)?,
            flops_model: int(8)?,
            flops_per_cycle: num(9)?,
            gflops: num(10)?,
            intensity: num(11)?.ok_or_else(|| bad(line, "missing intensity"))?,
            checksum: match field(12) {
                "" => None,
                s => Some(u64::from_str_radix(s, 16).map_err(|_| bad(line, "bad checksum"))?),
            },
        });
    }
    Ok(records)
}
