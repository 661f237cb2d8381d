//! Hydra maps over the rationals.
//!
//! A Hydra map `H` on `Z` picks one of `p` affine branches `z -> r_j z + c_j`
//! according to `z mod p`. This crate evaluates the associated numen `X_H`
//! (the offset of composed branch strings, reindexed by base-`p` digit sums)
//! on `N_0`, on truncations, and exactly on eventually periodic `p`-adic
//! integers, runs cycle censuses, and computes the characteristic function
//! and residue distribution of `X_H` by `q`-adic Fourier analysis.
//!
//! Everything is exact ([`Rational`]) except the complex values of
//! characters and characteristic functions, which are `f64` pairs.

pub mod arith;
pub mod dynamics;
mod error;
pub mod fourier;
pub mod map;
pub mod mapspec;
pub mod numen;
pub mod strings;

pub use arith::{
    abs_at_place, character_eval, character_eval_trunc, crt_join, crt_split, digit_expansion,
    frac_part, is_prime, mu_u_factor, residue_mod, shift_theta, u_p_part, vp_val, AbsValue,
    Frequency, PAdicTrunc, Place, Rational, RationalDigitExpansion, RootOfUnity, ShiftTheta,
    Valuation,
};
pub use error::{Error, ErrorKind, Result};
pub use map::{Branch, Classification, HydraMap};
pub use strings::{AffineMap, DigitString};
