//! Exact rational and `p`-adic digit arithmetic over `Q`.

mod character;
mod padic;
mod place;
mod rational;

pub use character::{character_eval, character_eval_trunc, frac_part, Frequency, RootOfUnity};
pub(crate) use character::{checked_pow, unit};
pub use padic::{
    crt_join, crt_split, digit_expansion, residue_mod, shift_theta, shift_theta_rational,
    PAdicTrunc, RationalDigitExpansion, ShiftTheta,
};
pub(crate) use padic::reduce_mod_u64;
pub use place::{
    abs_at_place, is_prime, mu_u_factor, prime_factors, u_p_part, vp_val, AbsValue, Place,
    Valuation,
};
pub(crate) use place::small_prime_factors;
pub use rational::Rational;
