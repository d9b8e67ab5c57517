//! Worker-pool drivers for the core reductions. Results do not depend on the
//! number of workers: baselines merge integer sums and score rows are sorted.

use mnrs_core::{
    score_paper, BaselineAccumulator, BaselineTable, CountingMode, KeyScope, PaperRecord, ScoreRun,
    TargetGroup,
};
use rayon::prelude::*;

use crate::error::{Error, Result};

const CHUNK: usize = 16 * 1024;

/// Runs `f` on a pool with `workers` threads (0 = one per core).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

pub fn compute_baselines(
    records: &[PaperRecord],
    group: &TargetGroup,
    scope: KeyScope,
) -> Result<BaselineTable> {
    let acc = records
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = BaselineAccumulator::new(group.clone(), scope);
            for r in chunk {
                acc.add(r);
            }
            Ok(acc)
        })
        .try_reduce(
            || BaselineAccumulator::new(group.clone(), scope),
            |a, b| a.merge(b),
        )?;
    Ok(acc.finish()?)
}

pub fn score_corpus(
    records: &[PaperRecord],
    baselines: &BaselineTable,
    mode: CountingMode,
) -> ScoreRun {
    let parts: Vec<_> = records
        .par_iter()
        .map(|r| score_paper(r, baselines, mode))
        .collect();
    ScoreRun::assemble(&baselines.group, mode, parts)
}
