//! Curve tables: CSV with columns label, N and optional overrides.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::request::{factor_n, parse_override, AnalyzeOutput, AnalyzeRequest};
use super::{BatchArgs, EXIT_ERROR, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub line: u64,
    pub label: String,
    pub n: String,
    pub overrides: String,
}

#[derive(Serialize)]
struct RowOutput<'a> {
    label: &'a str,
    #[serde(flatten)]
    output: AnalyzeOutput,
}

pub fn read_rows<R: std::io::Read>(r: R) -> Result<Vec<Result<Row, String>>, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = rdr
        .headers()
        .map_err(|e| format!("cannot read header: {e}"))?
        .clone();
    if headers.len() < 2 {
        return Err("header must name at least the columns label and N".into());
    }
    Ok(rdr
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() < 2 {
                return Err(format!("line {line}: expected label and N"));
            }
            Ok(Row {
                line,
                label: rec[0].to_string(),
                n: rec[1].to_string(),
                overrides: rec.get(2).unwrap_or("").to_string(),
            })
        })
        .collect())
}

pub fn row_request(row: &Row, a: &BatchArgs) -> Result<AnalyzeRequest, String> {
    let n: u64 = row
        .n
        .parse()
        .map_err(|_| format!("N = {:?} is not a positive integer", row.n))?;
    let mut req = AnalyzeRequest::new(factor_n(n)?, a.disc, a.c);
    req.mode = a.mode.into();
    req.flags.two_minimal = a.two_minimal;
    for piece in row.overrides.split(';').filter(|t| !t.trim().is_empty()) {
        req.apply_override(parse_override(piece)?)?;
    }
    Ok(req)
}

pub fn cmd_batch(a: BatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let file = match std::fs::File::open(&a.table) {
        Ok(f) => f,
        Err(e) => return super::emit_error(out, err, &format!("{}: {e}", a.table.display())),
    };
    let rows = match read_rows(file) {
        Ok(r) => r,
        Err(e) => return super::emit_error(out, err, &e),
    };
    let results: Vec<Result<String, String>> = rows
        .par_iter()
        .map(|row| {
            let row = row.as_ref().map_err(Clone::clone)?;
            let ctx = |e: String| format!("line {} ({}): {e}", row.line, row.label);
            let req = row_request(row, &a).map_err(ctx)?;
            let output = req.run().map_err(|e| ctx(e.to_string()))?;
            Ok(serde_json::to_string(&RowOutput {
                label: &row.label,
                output,
            })
            .unwrap())
        })
        .collect();
    let mut malformed = 0usize;
    for r in results {
        match r {
            Ok(line) => {
                let _ = writeln!(out, "{line}");
            }
            Err(e) => {
                malformed += 1;
                let _ = writeln!(err, "skipped {e}");
            }
        }
    }
    let _ = writeln!(err, "{} rows, {malformed} malformed", rows.len());
    if malformed == 0 {
        EXIT_OK
    } else {
        EXIT_ERROR
    }
}
