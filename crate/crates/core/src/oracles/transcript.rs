use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ledger::QueryLedger;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallKind {
    Draw,
    Label,
    Search,
}

/// One oracle call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptRecord {
    pub kind: CallKind,
    pub input: Value,
    pub output: Value,
    pub ledger: QueryLedger,
}

impl TranscriptRecord {
    pub fn parse_line(line: &str) -> Result<Self> {
        let rec: TranscriptRecord = serde_json::from_str(line)?;
        if !(rec.ledger.tau >= 1.0) {
            return Err(domain("transcript ledger has tau < 1"));
        }
        Ok(rec)
    }
}

pub fn write_jsonl<W: Write>(records: &[TranscriptRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Any serializable trace, one JSON object per line.
pub fn write_rows_jsonl<T: Serialize, W: Write>(rows: &[T], mut w: W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<TranscriptRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(TranscriptRecord::parse_line(&line)?);
    }
    Ok(out)
}
