//! Harmonic analysis on `Z_p` and the law of `X_H` at finite places.

mod charfn;
mod distribution;
mod sb;

pub use charfn::{
    charfn_estimate, charfn_estimate_grid, charfn_estimate_table, charfn_solve, e_q,
    selfsim_residual, CharArg, CharFnTable,
};
pub use distribution::{
    b_constant, b_constant_of, prob_empirical, prob_inversion, total_variation, Distribution,
};
pub use sb::{
    fourier_sb, haar_integral_riemann, haar_integral_sb, inverse_fourier_sb, orthogonality_sum,
    FourierTable, SBFunction,
};
