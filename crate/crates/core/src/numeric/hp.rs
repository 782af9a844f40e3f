//! High-precision summation for alternating binomial sums.
//!
//! Sums such as `Σ (-1)^i C(n,i) x_i` lose roughly `log2(max|term| / |sum|)`
//! bits to cancellation. [`alternating_sum`] evaluates the terms at a working
//! precision, measures that loss, and doubles the precision until at least
//! [`GUARD_BITS`] bits survive or [`MAX_BITS`] is reached.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use thiserror::Error;

pub type HpFloat = FBig<HalfEven, 2>;

pub const DEFAULT_BITS: usize = 256;
pub const MAX_BITS: usize = 1024;
/// Bits that must survive cancellation for a result to be accepted.
pub const GUARD_BITS: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HpError {
    #[error("cancellation unresolved at {bits} bits ({lost_bits:.0} bits lost)")]
    Cancellation { bits: usize, lost_bits: f64 },
    #[error("input moments are only known to {input_error:e}; propagated error bound {bound:e} exceeds {limit:e}")]
    InputPrecision {
        input_error: f64,
        bound: f64,
        limit: f64,
    },
}

/// Result of a precision-escalated sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpSum {
    pub value: f64,
    /// Working precision at which the value was accepted.
    pub bits: usize,
    pub lost_bits: f64,
    /// Largest term magnitude; scales any error carried by the inputs.
    pub max_term: f64,
    /// Sum of term magnitudes.
    pub abs_sum: f64,
}

pub fn hp(x: f64, bits: usize) -> HpFloat {
    HpFloat::try_from(x)
        .expect("finite f64 converts exactly")
        .with_precision(bits)
        .value()
}

pub fn hp_int(x: u64, bits: usize) -> HpFloat {
    HpFloat::from(x).with_precision(bits).value()
}

pub fn to_f64(x: &HpFloat) -> f64 {
    x.to_f64().value()
}

/// `C(n, 0), ..., C(n, n)`; exact as long as `bits` exceeds `n`.
pub fn binomial_row(n: usize, bits: usize) -> Vec<HpFloat> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = hp_int(1, bits);
    row.push(c.clone());
    for k in 0..n {
        c = c * hp_int((n - k) as u64, bits) / hp_int(k as u64 + 1, bits);
        row.push(c.clone());
    }
    row
}

fn log2_abs(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.abs().log2()
    }
}

/// Sum terms produced at a given working precision, escalating from
/// `start_bits` by doubling while cancellation eats into the guard bits.
///
/// The closure receives the working precision and must build its terms at
/// that precision (inputs computed in high precision are rebuilt each
/// round). A result whose absolute error is already below `1e-30` is
/// accepted even when its relative accuracy is poor, since exact zeros and
/// vanishing tails would otherwise never converge.
pub fn alternating_sum<F>(start_bits: usize, mut terms: F) -> Result<HpSum, HpError>
where
    F: FnMut(usize) -> Vec<HpFloat>,
{
    let mut bits = start_bits.max(64);
    loop {
        let ts = terms(bits);
        let mut acc = hp(0.0, bits);
        let mut max_term: f64 = 0.0;
        let mut abs_sum = 0.0;
        for t in &ts {
            let m = to_f64(t).abs();
            max_term = max_term.max(m);
            abs_sum += m;
            acc += t;
        }
        let value = to_f64(&acc);
        let lost = (log2_abs(max_term) - log2_abs(value)).max(0.0);
        let abs_err = abs_sum * (-(bits as f64)).exp2() * ts.len().max(1) as f64;
        if bits as f64 - lost >= GUARD_BITS || abs_err < 1e-30 {
            return Ok(HpSum {
                value,
                bits,
                lost_bits: lost,
                max_term,
                abs_sum,
            });
        }
        if bits >= MAX_BITS {
            return Err(HpError::Cancellation {
                bits,
                lost_bits: lost,
            });
        }
        bits = (bits * 2).min(MAX_BITS);
    }
}
