//! Truncated integer convolution.
//!
//! Three paths, picked per call: an `i128` accumulator when the product
//! coefficients provably fit, a schoolbook loop over the nonzero entries of
//! the sparser operand, and Kronecker substitution (pack both operands into
//! one big integer, multiply once, unpack) for long dense operands.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

/// Below this many multiply-adds the schoolbook loop wins.
const KRONECKER_MIN_WORK: usize = 1 << 14;

/// `c[k] = sum_{i+j=k} a[i] b[j]` for `k < len`.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![BigInt::zero(); len];
    }
    let nz_a = a.iter().filter(|c| !c.is_zero()).count();
    let nz_b = b.iter().filter(|c| !c.is_zero()).count();
    let (sparse, dense, nz) = if nz_a <= nz_b { (a, b, nz_a) } else { (b, a, nz_b) };
    if nz == 0 {
        return vec![BigInt::zero(); len];
    }

    let bits_s = max_bits(sparse);
    let bits_d = max_bits(dense);
    let log_terms = bit_length(nz.min(dense.len()) as u64);
    if bits_s + bits_d + log_terms < 126 {
        return schoolbook_i128(sparse, dense, len);
    }
    let is_sparse = nz * 4 < sparse.len();
    if is_sparse || nz.saturating_mul(dense.len()) < KRONECKER_MIN_WORK {
        schoolbook(sparse, dense, len)
    } else {
        kronecker(a, b, len)
    }
}

/// Reference path, also used by tests to cross-check the other two.
pub(crate) fn schoolbook(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i >= len {
            continue;
        }
        let end = b.len().min(len - i);
        for (j, bj) in b[..end].iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn schoolbook_i128(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let a: Vec<i128> = a.iter().map(|c| c.to_i128().expect("bounded")).collect();
    let b: Vec<i128> = b.iter().map(|c| c.to_i128().expect("bounded")).collect();
    let mut out = vec![0i128; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 || i >= len {
            continue;
        }
        let end = b.len().min(len - i);
        for (j, &bj) in b[..end].iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out.into_iter().map(BigInt::from).collect()
}

pub(crate) fn kronecker(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let terms = a.len().min(b.len()) as u64;
    let bound = max_bits(a) + max_bits(b) + bit_length(terms) + 2;
    let words = bound.div_ceil(32) as usize;

    let pa = pack(a, words);
    let pb = pack(b, words);
    let product = pa * pb;

    let n_out = (a.len() + b.len() - 1).min(len);
    // Offsetting every slot by 2^(32w-1) makes all base-2^(32w) digits
    // nonnegative, so the slots can be read off directly.
    let top_bit = 32 * words - 1;
    let mut offset_words = vec![0u32; words * (a.len() + b.len())];
    for k in 0..(a.len() + b.len() - 1) {
        offset_words[k * words + words - 1] = 1 << 31;
    }
    let shifted = product + BigInt::from_biguint(Sign::Plus, BigUint::new(offset_words));
    let (sign, digits) = shifted.to_u32_digits();
    debug_assert_ne!(sign, Sign::Minus);

    let half = BigInt::one() << top_bit;
    let mut out = Vec::with_capacity(len);
    for k in 0..n_out {
        let start = k * words;
        let slot = if start >= digits.len() {
            BigUint::zero()
        } else {
            let end = (start + words).min(digits.len());
            BigUint::new(digits[start..end].to_vec())
        };
        out.push(BigInt::from_biguint(Sign::Plus, slot) - &half);
    }
    out.resize(len, BigInt::zero());
    out
}

fn pack(coeffs: &[BigInt], words: usize) -> BigInt {
    let mut pos = vec![0u32; words * coeffs.len()];
    let mut neg = vec![0u32; words * coeffs.len()];
    let mut any_neg = false;
    for (i, c) in coeffs.iter().enumerate() {
        let (sign, digits) = c.to_u32_digits();
        let target = match sign {
            Sign::Minus => {
                any_neg = true;
                &mut neg
            }
            Sign::NoSign => continue,
            Sign::Plus => &mut pos,
        };
        target[i * words..i * words + digits.len()].copy_from_slice(&digits);
    }
    let p = BigInt::from_biguint(Sign::Plus, BigUint::new(pos));
    if any_neg {
        p - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
    } else {
        p
    }
}

fn max_bits(coeffs: &[BigInt]) -> u64 {
    coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn bit_length(n: u64) -> u64 {
    64 - n.leading_zeros() as u64
}
