//! Held-out-gap benchmarking: synthetic wells, gap injection, the normalized
//! error metric, and CSV/SVG reports.

pub mod benchmark;
pub mod inject;
pub mod metric;
pub mod report;
pub mod synth;

pub use benchmark::{run_benchmark, BenchmarkConfig, EvalReport, ReportEntry, DEFAULT_LENGTHS, METRIC_NAME};
pub use inject::{inject_gaps, mask_cases, EvalCase, INJECT_FLANK};
pub use metric::{normalized_mae, percentile, MetricReference};
pub use report::{parse_report_csv, render_csv, render_report, render_svg, RenderedReport, SvgOptions, CSV_HEADER};
pub use synth::{synthesize_well, SyntheticConfig, CHANNELS};
