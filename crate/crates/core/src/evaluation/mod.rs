//! Stratified splitting, classification metrics and the model benchmark.

mod benchmark;
mod metrics;
mod split;

pub use benchmark::{
    run_benchmark, run_benchmark_detailed, BenchmarkData, BenchmarkEntry, BenchmarkRow, BenchmarkScores,
    BenchmarkTable, ModelSpec,
};
pub use metrics::{confusion, evaluate, report, ClassMetrics, ConfusionMatrix, EvalReport};
pub use split::{stratified_split, test_counts, SplitIndex};
