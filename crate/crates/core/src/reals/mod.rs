//! Names of reals, multiplicity counts, convergence moduli, and the
//! constructors for left-computable, strongly left-computable and regular
//! reals.

mod increasing;
mod modulus;
mod name;

pub use increasing::{
    digit_exponents, name_from_increasing, regular_sum, strongly_lc, BlockName,
    IncreasingDyadicStream, IncreasingSpec,
};
pub use modulus::{Modulus, RateSpec};
pub use name::{
    multiplicities, partial_sum, roc_certificate_check, tail_weight, CertificateCheck, Extent,
    MultiplicityTable, NameSpec, NameStream,
};
