//! Root extraction in finite fields F_{p^n}.
//!
//! The centerpiece is a trace-based reduction of t-th root extraction in a
//! degree-n extension to root extraction in the subfield F_{p^s}, where s is
//! the order of p mod t — for square roots (s = 1) the problem collapses to
//! F_p itself. The classical algorithms (Cipolla, Tonelli-Shanks, the
//! special-exponent square roots, and Kaltofen-Shoup-style equal-degree
//! factorization) are implemented alongside it as baselines, together with
//! an m-th root driver for arbitrary composite m.
//!
//! Layers:
//! - [`natural`] / [`fp`]: unbounded integers, prime moduli, F_p scalars and
//!   the F_p base-case root extractors.
//! - [`poly`]: dense polynomials over F_p (Karatsuba above a threshold).
//! - [`modcomp`]: modular composition, Frobenius chains, minimal polynomials.
//! - [`fq`]: extension-field contexts F_p[X]/(f) and element arithmetic.
//! - [`roots`]: the root-extraction algorithms themselves.
//! - [`oracles`]: independent brute-force reference implementations used by
//!   the test suites.
//! - [`sweep`]: data-parallel helpers for the exhaustive verification sweeps
//!   (rayon when the `parallel` feature is on, sequential otherwise).

pub mod error;
pub mod fp;
pub mod fq;
mod kernel;
pub mod modcomp;
pub mod natural;
pub mod oracles;
pub mod poly;
pub mod roots;
pub mod sweep;

pub use error::{Error, Result};
pub use fp::{amm_root_fp, fp_pow, tonelli_shanks_fp, FpElement, PrimeModulus};
pub use fq::{FieldCtx, FqElement, SubfieldImage};
pub use natural::{invmod, is_prime, order_mod, Natural};
pub use poly::{is_irreducible, random_irreducible, resultant, Poly};
pub use roots::{
    alpha, cipolla_sqrt, is_tth_power, ks_edf_root, mth_root, primitive_root_of_unity,
    sqrt_special, tonelli_shanks_fq, tth_root, xi_zeta_delta, BaseCase, FrobChainState,
    RootResult,
};
