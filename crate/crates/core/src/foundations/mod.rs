//! Exact arithmetic, binary strings and sequences, set encodings and the
//! combinatorial bijections everything else is built on.

mod bitstring;
mod dyadic;
mod interval;
mod pairing;
mod sets;
mod stream;

pub use bitstring::{bs, BitString};
pub use dyadic::Dyadic;
pub use interval::{interval_of, DyadicInterval};
pub use pairing::{
    ceil_log2, ceil_log2_log2, floor_log2, gamma_decode, gamma_encode, gamma_len, pair, unpair,
};
pub use sets::{charseq, join, NatSetView, SetSpec};
pub use stream::BitStream;

/// `ν(n)`: the `n`-th binary string in length-lexicographic order.
pub fn lenlex(n: u64) -> BitString {
    BitString::from_lenlex(n)
}

/// Inverse of [`lenlex`].
pub fn lenlex_inv(tau: &BitString) -> u64 {
    tau.lenlex_index()
}
