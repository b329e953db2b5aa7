//! Benchmark runs fanned out over threads.
//!
//! Records are split into contiguous chunks, one per thread, and results
//! are put back in input order before aggregation, so the thread count
//! never changes the output.

use std::num::NonZeroUsize;
use std::thread;

use anyhow::Result;
use kspell_core::evalbench::{
    self, AccuracyTable, DatasetARecord, DatasetBRecord, FlagTable, RecordResultA,
};
use kspell_core::{CheckerConfig, Engine};

fn fan_out<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("benchmark worker panicked"))
            .collect()
    })
}

/// Threads to use when none are requested.
pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

pub fn run_a(
    records: &[DatasetARecord],
    engine: &Engine,
    cfg: &CheckerConfig,
    threads: usize,
) -> Result<AccuracyTable> {
    let results: Vec<RecordResultA> = fan_out(records, threads, |r| evalbench::score_a(r, engine, cfg))
        .into_iter()
        .collect::<kspell_core::Result<_>>()?;
    Ok(evalbench::aggregate_a(&results, cfg.top_n)?)
}

pub fn run_b(
    records: &[DatasetBRecord],
    engine: &Engine,
    cfg: &CheckerConfig,
    threads: usize,
) -> Result<FlagTable> {
    let flags = fan_out(records, threads, |r| evalbench::score_b(r, engine, cfg));
    Ok(evalbench::aggregate_b(&flags)?)
}
