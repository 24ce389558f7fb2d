//! Both directions between reordered computable names and strong Kurtz
//! tests over left-computable approximations.

mod lc;
mod roc;

pub use lc::{
    carry_counter, lc_to_roc, tail_bound_check, CarryReport, LcToRoc, SearchStatus, TailCheck,
};
pub use roc::{
    count_bound_check, interval_exponent, roc_to_skt, CountCheck, RocToSkt, StageInterval,
    StageTrace,
};
