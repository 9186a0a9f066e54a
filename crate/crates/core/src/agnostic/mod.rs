//! Learning under label noise: the AL subroutine and A-LARCH.

pub mod al;
pub mod alarch;

pub use al::{al_epoch_cap, run_al, AlEpochRow, AlOutcome, AlReason};
pub use alarch::{alarch_delta, run_alarch, AlarchRound, AlarchRun};
