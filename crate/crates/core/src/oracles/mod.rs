//! Oracles around a hidden target, with query accounting.

pub mod bundle;
pub mod gamma;
pub mod ledger;
pub mod noise;
pub mod sal;
pub mod search;
pub mod transcript;

pub use bundle::OracleBundle;
pub use gamma::GammaOracle;
pub use ledger::QueryLedger;
pub use noise::{true_error, NoiseModel, NoiseSegment};
pub use sal::{sal_draw, sal_step, SalDraw};
pub use search::{check_counterexample, find_counterexample, is_counterexample, SearchPolicy};
pub use transcript::{read_jsonl, write_jsonl, write_rows_jsonl, CallKind, TranscriptRecord};
