//! The compressed power problem: given an explicit word `w` and a
//! compressed word `g`, find an integer `z` with `w^z = val(g)` in the free
//! group, or report that none exists.
//!
//! Write `nf(w) = p s p^-1` with `s` cyclically reduced. For `z != 0` the
//! reduced form of `w^z` is exactly `p s^z p^-1` of length
//! `2|p| + |z| * |s|`: powers of a cyclically reduced word stack without
//! cancellation at the junctions, in either direction. So at most one
//! candidate magnitude for `z` exists, read off from the reduced length of
//! `g` by one division; both signs are then checked with compressed
//! equality.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::alphabet::Letter;
use crate::free_group::{cyclic_decompose, free_reduce, reduced_system};
use crate::grammar::CompositionSystem;
use crate::SolverConfig;

/// Outcome of [`compressed_power`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PowerAnswer {
    /// `w^exponent = val(g)`. `exact` tells whether the final equality was
    /// established by explicit comparison or by fingerprints.
    Found { exponent: BigInt, exact: bool },
    NoSolution,
}

impl PowerAnswer {
    pub fn exponent(&self) -> Option<&BigInt> {
        match self {
            PowerAnswer::Found { exponent, .. } => Some(exponent),
            PowerAnswer::NoSolution => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowerError {
    #[error("the word uses letters outside the grammar's alphabet")]
    AlphabetMismatch,
}

pub fn compressed_power(
    w: &[Letter],
    g: &CompositionSystem,
    cfg: &SolverConfig,
) -> Result<PowerAnswer, PowerError> {
    if w.iter().any(|&l| !g.alphabet().contains(l)) {
        return Err(PowerError::AlphabetMismatch);
    }
    let r = free_reduce(w);
    let nf = reduced_system(g);
    let len = nf.length().clone();
    if r.is_empty() || len.is_zero() {
        // 1^z = val(g) iff val(g) = 1; w^0 = 1 always.
        return Ok(if len.is_zero() {
            PowerAnswer::Found {
                exponent: BigInt::zero(),
                exact: true,
            }
        } else {
            PowerAnswer::NoSolution
        });
    }

    let dec = cyclic_decompose(&r);
    let p = dec.conjugator.as_letters();
    let s = dec.core.as_letters();
    let two_p = BigUint::from(2 * p.len());
    if len <= two_p {
        return Ok(PowerAnswer::NoSolution);
    }
    let diff = &len - &two_p;
    let slen = BigUint::from(s.len());
    if !(&diff % &slen).is_zero() {
        return Ok(PowerAnswer::NoSolution);
    }
    let magnitude = BigInt::from(diff / slen);

    let alphabet = g.alphabet();
    let p_sys = CompositionSystem::from_word(alphabet, p);
    let s_sys = CompositionSystem::from_word(alphabet, s);
    let p_inv = p_sys.invert();
    for cand in [magnitude.clone(), -magnitude] {
        let target = p_sys.concat(&s_sys.power(&cand)).concat(&p_inv);
        let verdict = target.equal_detail(&nf, cfg.exact_check_bound);
        if verdict.holds() {
            return Ok(PowerAnswer::Found {
                exponent: cand,
                exact: verdict.is_exact(),
            });
        }
    }
    Ok(PowerAnswer::NoSolution)
}
