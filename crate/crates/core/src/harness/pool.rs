use std::sync::atomic::{AtomicUsize, Ordering};

use super::{run_nog, run_single_shot, NogConfig, NogMode, NogTrace, QueryOptions, Segmentor};
use crate::metrics::{EvalRecord, FailedRecord};
use crate::sample::Sample;

/// Maps `f` over `items` on `jobs` threads, each owning a worker built by
/// `make_worker`. Output order follows input order.
pub fn parallel_map<T, O, W>(
    items: &[T],
    jobs: usize,
    make_worker: impl Fn() -> W + Sync,
    f: impl Fn(&mut W, &T) -> O + Sync,
) -> Vec<O>
where
    T: Sync,
    O: Send,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        let mut w = make_worker();
        return items.iter().map(|it| f(&mut w, it)).collect();
    }
    let next = AtomicUsize::new(0);
    let mut indexed: Vec<(usize, O)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|_| {
                scope.spawn(|| {
                    let mut w = make_worker();
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(item) = items.get(i) else { break };
                        out.push((i, f(&mut w, item)));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, o)| o).collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchOutput {
    pub records: Vec<EvalRecord>,
    pub failures: Vec<FailedRecord>,
}

/// Single-shot evaluation of every gesture of every sample.
pub fn run_benchmark(
    make_segmentor: impl Fn() -> Box<dyn Segmentor> + Sync,
    samples: &[Sample],
    options: &QueryOptions,
    jobs: usize,
) -> BenchOutput {
    let items: Vec<(usize, usize)> = samples
        .iter()
        .enumerate()
        .flat_map(|(s, sample)| (0..sample.gestures.len()).map(move |g| (s, g)))
        .collect();
    let results = parallel_map(&items, jobs, &make_segmentor, |seg, &(s, g)| {
        run_single_shot(seg.as_mut(), &samples[s], g, options)
    });
    let mut out = BenchOutput::default();
    for r in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(f) => out.failures.push(f),
        }
    }
    out
}

pub fn run_nog_batch(
    make_segmentor: impl Fn() -> Box<dyn Segmentor> + Sync,
    samples: &[Sample],
    mode: NogMode,
    config: &NogConfig,
    jobs: usize,
) -> (Vec<NogTrace>, Vec<FailedRecord>) {
    let results = parallel_map(samples, jobs, &make_segmentor, |seg, sample| {
        run_nog(seg.as_mut(), sample, mode, config)
    });
    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(t) => traces.push(t),
            Err(f) => failures.push(f),
        }
    }
    (traces, failures)
}
