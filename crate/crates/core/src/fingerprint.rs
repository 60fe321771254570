//! Rolling fingerprints for grammar-defined words.
//!
//! A word `w = a_1 ... a_n` hashes to `sum code(a_k) * base^(n-k)` modulo the
//! Mersenne prime `2^61 - 1`. Fingerprints compose under concatenation,
//! `fp(uv) = fp(u) * base^|v| + fp(v)`, which is what makes them usable on
//! words given only by a grammar: the hash of a variable is assembled from
//! the hashes of its right-hand side without expanding anything.
//!
//! Lengths are arbitrary precision, so `base^|v|` is computed with the
//! exponent reduced mod `2^61 - 2` (the modulus is prime, the base nonzero).
//!
//! Equality checking through fingerprints has one-sided error: equal words
//! always agree, distinct words of length at most `maxlen` collide with
//! probability at most `maxlen / (2^61 - 1)` over the choice of base.

#[cfg(test)]
use num_bigint::BigUint;
#[cfg(test)]
use num_traits::ToPrimitive;

use crate::alphabet::Letter;

/// The fingerprint modulus, `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Session-wide fingerprint parameters: the random base.
///
/// Two grammars can only be compared when they were built with the same
/// parameters; the `GeneratorAlphabet` owns a copy so that "same alphabet"
/// implies "comparable fingerprints".
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct FingerprintParams {
    base: u64,
}

impl FingerprintParams {
    /// Derives a base in `[2, MODULUS - 2]` from a seed.
    pub fn from_seed(seed: u64) -> Self {
        let mut x = seed;
        loop {
            x = splitmix64(x);
            let base = 2 + x % (MODULUS - 3);
            if (2..=MODULUS - 2).contains(&base) {
                return FingerprintParams { base };
            }
        }
    }

    pub fn base(self) -> u64 {
        self.base
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    let t = u128::from(a) * u128::from(b);
    let mut s = (t & u128::from(MODULUS)) as u64 + (t >> 61) as u64;
    if s >= MODULUS {
        s -= MODULUS;
    }
    if s >= MODULUS {
        s -= MODULUS;
    }
    s
}

#[cfg(test)]
pub(crate) fn pow_mod(base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    let mut sq = base % MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, sq);
        }
        sq = mul_mod(sq, sq);
        exp >>= 1;
    }
    acc
}

/// `base^len mod MODULUS` for an arbitrary-precision length, exploiting
/// Fermat: exponents reduce mod `MODULUS - 1`.
#[cfg(test)]
pub(crate) fn pow_mod_big(base: u64, len: &BigUint) -> u64 {
    let reduced = (len % (MODULUS - 1))
        .to_u64()
        .expect("reduced exponent fits u64");
    pow_mod(base, reduced)
}

/// Fingerprint data of one word piece: forward hash, hash of the inverse
/// word, and `base^len`. Everything needed to splice pieces together.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct PieceFp {
    pub fp: u64,
    pub fp_inv: u64,
    pub bpow: u64,
}

impl PieceFp {
    pub const EMPTY: PieceFp = PieceFp { fp: 0, fp_inv: 0, bpow: 1 };

    pub fn letter(params: FingerprintParams, l: Letter) -> Self {
        PieceFp {
            fp: l.code(),
            fp_inv: l.inverse().code(),
            bpow: params.base(),
        }
    }

    /// Fingerprints of `uv` from the fingerprints of `u` and `v`.
    pub fn concat(u: PieceFp, v: PieceFp) -> Self {
        PieceFp {
            fp: add_mod(mul_mod(u.fp, v.bpow), v.fp),
            // (uv)^-1 = v^-1 u^-1
            fp_inv: add_mod(mul_mod(v.fp_inv, u.bpow), u.fp_inv),
            bpow: mul_mod(u.bpow, v.bpow),
        }
    }

    /// Fingerprint of an explicit word.
    pub fn of_word(params: FingerprintParams, w: &[Letter]) -> Self {
        let mut acc = PieceFp::EMPTY;
        for &l in w {
            acc = PieceFp::concat(acc, PieceFp::letter(params, l));
        }
        acc
    }
}
