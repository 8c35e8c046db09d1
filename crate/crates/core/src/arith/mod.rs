//! Exact arithmetic: factorization of `k`, the ring `Z[1/k]`, valuations and
//! base-`k` expansions.

mod base_k;
mod factor;
mod zk;

pub use base_k::{from_base_k, to_base_k, BaseKExpansion, Sign, DEFAULT_DELIMITER};
pub use factor::{factorize, full_divisors, KFactorization, PrimePower};
pub use zk::{den_exponent, in_zk, valuation, zk_add, zk_mul, zk_neg, Valuation, ZkRational};

pub(crate) use zk::divides;
