//! Complexity profiles, window estimates of effective dimension, and the
//! interleaving and sum constructions.

mod constructions;
mod logbound;
mod profile;

pub use constructions::{square_extract, square_interleave, sum_machine, SumMachine, UnmetWait};
pub use logbound::{ce_log_bound_check, ce_prefix_table, delta_encode, log_bound, LogBoundCheck};
pub use profile::{dim_gap_rate, dim_window, profile, ComplexityProfile, DimEstimate, ProfileRow};
