//! Restart-safe tallies backed by a newline-delimited JSON checkpoint file.
//!
//! One record is appended per completed block:
//! `{"prefix":[row0,row1],"plus":"…","minus":"…"}` with rows written 1-based.
//! Blocks that can produce more than one pattern also carry a `patterns`
//! array in the tally-export shape. On restart every prefix already present
//! is skipped; duplicate records for the same prefix are ignored.

use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::enumerate::{expand_first_row_reduction, tally_blocks, Prefix, Reduction, TallyOptions};
use super::pattern::Pattern;
use super::tally::{parse_count, BlockTally, PatternCountJson, SignedTally};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub prefix: Vec<Vec<usize>>,
    pub plus: String,
    pub minus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patterns: Option<Vec<PatternCountJson>>,
}

fn record_for(i: usize, prefix: &Prefix, block: &BlockTally, with_patterns: bool) -> CheckpointRecord {
    let (plus, minus) = block.plus_minus();
    let patterns = with_patterns.then(|| {
        let mut entries: Vec<PatternCountJson> = block
            .counts
            .iter()
            .map(|(masks, &(p, n))| PatternCountJson {
                pattern: Pattern::from_masks(i, masks).one_based(),
                plus: p.to_string(),
                minus: n.to_string(),
            })
            .collect();
        entries.sort_by(|a, b| a.pattern.cmp(&b.pattern));
        entries
    });
    CheckpointRecord {
        prefix: prefix
            .iter()
            .map(|r| r.iter().map(|&s| s as usize + 1).collect())
            .collect(),
        plus: plus.to_string(),
        minus: minus.to_string(),
        patterns,
    }
}

fn prefix_from_record(record: &CheckpointRecord) -> Result<Prefix> {
    record
        .prefix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&s| {
                    if s == 0 || s > 64 {
                        Err(Error::Parse(format!("bad symbol {s} in checkpoint prefix")))
                    } else {
                        Ok((s - 1) as u8)
                    }
                })
                .collect()
        })
        .collect()
}

/// Reads the completed records of a checkpoint file, keyed by prefix.
/// A truncated final line (from an interrupted write) is ignored.
pub fn read_checkpoint(path: &Path) -> Result<HashMap<Prefix, CheckpointRecord>> {
    let mut out = HashMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let reader = BufReader::new(File::open(path)?);
    let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let last = lines.len().saturating_sub(1);
    for (n, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CheckpointRecord>(line) {
            Ok(record) => {
                let prefix = prefix_from_record(&record)?;
                out.entry(prefix).or_insert(record);
            }
            Err(_) if n == last => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Drops a partial last line so appended records start on a fresh line.
fn trim_torn_tail(path: &Path) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let bytes = std::fs::read(path)?;
    if bytes.last().is_none_or(|&b| b == b'\n') {
        return Ok(());
    }
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
    OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
    Ok(())
}

fn add_record(tally: &mut SignedTally, record: &CheckpointRecord, single: Option<&Pattern>) -> Result<()> {
    match (&record.patterns, single) {
        (Some(entries), _) => {
            for e in entries {
                let pattern = Pattern::from_one_based(tally.i, &e.pattern)?;
                let slot = tally.entries.entry(pattern).or_default();
                slot.plus += parse_count(&e.plus)?;
                slot.minus += parse_count(&e.minus)?;
            }
        }
        (None, Some(pattern)) => {
            let plus = parse_count(&record.plus)?;
            let minus = parse_count(&record.minus)?;
            if plus != 0u32.into() || minus != 0u32.into() {
                let slot = tally.entries.entry(pattern.clone()).or_default();
                slot.plus += plus;
                slot.minus += minus;
            }
        }
        (None, None) => {
            return Err(Error::Parse(
                "checkpoint record lacks per-pattern counts".into(),
            ))
        }
    }
    Ok(())
}

/// Row-order tally that records each finished block in `path` and skips
/// blocks already recorded there. The final tally is identical to an
/// uninterrupted run.
pub fn signed_tally_checkpointed(
    i: usize,
    m: usize,
    options: &TallyOptions,
    path: &Path,
) -> Result<SignedTally> {
    let single = if i == m {
        Some(Pattern::from_masks(
            i,
            &vec![if m == 64 { u64::MAX } else { (1u64 << m) - 1 }; m],
        ))
    } else {
        options.filter.clone()
    };
    let with_patterns = single.is_none();
    let done = read_checkpoint(path)?;
    let skip: HashSet<Prefix> = done.keys().cloned().collect();

    trim_torn_tail(path)?;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let writer = Mutex::new(file);
    tally_blocks(i, m, options, &skip, |prefix, block| {
        let record = record_for(i, prefix, block, with_patterns);
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        let mut f = writer.lock().expect("checkpoint writer poisoned");
        f.write_all(line.as_bytes())?;
        f.flush()?;
        Ok(())
    })?;

    // Rebuild from the file so resumed and fresh runs share one code path.
    let all = read_checkpoint(path)?;
    let mut prefixes: Vec<&Prefix> = all.keys().collect();
    prefixes.sort();
    let mut tally = SignedTally::empty(i, m);
    for p in prefixes {
        add_record(&mut tally, &all[p], single.as_ref())?;
    }
    if options.reduction == Reduction::FirstRowFixed {
        expand_first_row_reduction(&mut tally);
    }
    Ok(tally)
}
