//! Parallel campaign driver with per-chunk checkpoints.
//!
//! A checkpoint is a two-line text file. The first line is
//! `campaign-id, chunk-cursor, digest`, the second the JSON state (the
//! partial aggregate and the length of the record stream written so far);
//! the digest is the SHA-256 of the second line. Checkpoints are replaced by
//! writing a temporary file and renaming it, so a crash leaves either the old
//! or the new state. On resume the record stream is truncated to the length
//! the checkpoint vouches for.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::campaign::CampaignSpec;
use super::result::CampaignResult;

#[derive(Clone, Debug, Default)]
pub struct DriverConfig {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Where per-automaton JSONL records go.
    pub jsonl: Option<PathBuf>,
    /// Stop after this many chunks in this invocation, as if interrupted.
    pub stop_after_chunks: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub result: CampaignResult,
    pub complete: bool,
    /// Chunks done so far, including earlier invocations.
    pub cursor: usize,
    pub total_chunks: usize,
    /// Whether an existing checkpoint was picked up.
    pub resumed: bool,
}

#[derive(Serialize, Deserialize)]
struct State {
    jsonl_len: u64,
    result: CampaignResult,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_checkpoint(path: &Path, id: &str, cursor: usize, state: &State) -> Result<()> {
    let body = serde_json::to_string(state)?;
    let digest = hex(&Sha256::digest(body.as_bytes()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = File::create(&tmp)?;
        writeln!(f, "{id}, {cursor}, {digest}")?;
        writeln!(f, "{body}")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_checkpoint(path: &Path, id: &str) -> Result<(usize, State)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| Error::Checkpoint("empty checkpoint".into()))?;
    let body = lines.next().ok_or_else(|| Error::Checkpoint("checkpoint has no state".into()))?;
    let parts: Vec<&str> = head.split(", ").collect();
    let [found_id, cursor, digest] = parts[..] else {
        return Err(Error::Checkpoint(format!("malformed checkpoint header `{head}`")));
    };
    if found_id != id {
        return Err(Error::Checkpoint(format!(
            "checkpoint belongs to campaign `{found_id}`, not `{id}`"
        )));
    }
    if hex(&Sha256::digest(body.as_bytes())) != digest {
        return Err(Error::Checkpoint("checkpoint digest mismatch".into()));
    }
    let cursor = cursor
        .parse()
        .map_err(|_| Error::Checkpoint(format!("bad chunk cursor `{cursor}`")))?;
    Ok((cursor, serde_json::from_str(body)?))
}

/// Runs (or resumes) a campaign. Chunks are evaluated in parallel waves and
/// folded in chunk order, so the results never depend on the worker count.
pub fn run_campaign(spec: &CampaignSpec, cfg: &DriverConfig) -> Result<RunOutcome> {
    let id = spec.id();
    let seeds = spec.plan.seeds()?;
    let total = spec.plan.chunk_count(seeds.len());

    let mut cursor = 0;
    let mut state = State { jsonl_len: 0, result: spec.empty_result() };
    let mut resumed = false;
    if let Some(path) = cfg.checkpoint.as_deref().filter(|p| p.exists()) {
        let (c, s) = read_checkpoint(path, &id)?;
        if c > total {
            return Err(Error::Checkpoint(format!("cursor {c} beyond {total} chunks")));
        }
        cursor = c;
        state = s;
        resumed = true;
    }

    let mut jsonl = match &cfg.jsonl {
        Some(path) => {
            let f = OpenOptions::new().create(true).append(true).open(path)?;
            let len = f.metadata()?.len();
            if len < state.jsonl_len {
                return Err(Error::Checkpoint(format!(
                    "record stream is {len} bytes, checkpoint expects {}",
                    state.jsonl_len
                )));
            }
            f.set_len(state.jsonl_len)?;
            Some(f)
        }
        None => None,
    };

    let pool = if cfg.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?,
        )
    } else {
        None
    };
    let wave = cfg.workers.max(rayon::current_num_threads()).max(1) * 2;
    let stop_at = cfg.stop_after_chunks.map(|s| (cursor + s).min(total)).unwrap_or(total);

    while cursor < stop_at {
        let end = (cursor + wave).min(stop_at);
        let want_jsonl = jsonl.is_some();
        let work = || -> Vec<(CampaignResult, String)> {
            (cursor..end).into_par_iter().map(|i| spec.run_chunk(&seeds, i, want_jsonl)).collect()
        };
        let parts = match &pool {
            Some(p) => p.install(work),
            None => work(),
        };
        for (part, records) in parts {
            if let Some(f) = jsonl.as_mut() {
                f.write_all(records.as_bytes())?;
                f.flush()?;
                state.jsonl_len += records.len() as u64;
            }
            state.result.merge(&part);
            cursor += 1;
            if let Some(path) = &cfg.checkpoint {
                write_checkpoint(path, &id, cursor, &state)?;
            }
        }
    }
    Ok(RunOutcome { result: state.result, complete: cursor == total, cursor, total_chunks: total, resumed })
}
