//! Real-valued special-function kernel: gamma, confluent hypergeometric and
//! modified Bessel functions.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::bessel_k;
pub use gamma::{gamma, gamma_ratio_sym, ln_gamma_signed, recip_gamma, LogGammaValue};
pub use hypergeometric::{kummer_m, tricomi_u, SeriesControl};
