//! Rigorous fixed-point enclosures of `log p`.
//!
//! A value `v` with error `e` at scale `w` encloses the real number in
//! `[(v - e) / 2^w, (v + e) / 2^w]`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub(crate) struct Enclosure {
    pub value: BigInt,
    pub error: BigInt,
}

thread_local! {
    static LOG_CACHE: RefCell<HashMap<(u64, u32), Enclosure>> = RefCell::new(HashMap::new());
}

/// `atanh(a/b)` for `0 <= a/b <= 1/2`, truncated towards zero.
fn atanh_fixed(a: &BigInt, b: &BigInt, bits: u32) -> Enclosure {
    let scale = BigInt::one() << bits;
    let a2 = a * a;
    let b2 = b * b;
    let mut power = (&scale * a).div_floor(b);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = (&power * &a2).div_floor(&b2);
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    // Per-term truncation is at most 2 units, the omitted tail at most
    // 2 (k + 1) units.
    Enclosure {
        value: sum,
        error: BigInt::from(4 * k + 8),
    }
}

fn ln2_fixed(bits: u32) -> Enclosure {
    let e = atanh_fixed(&BigInt::from(1), &BigInt::from(3), bits);
    Enclosure {
        value: e.value * 2,
        error: e.error * 2,
    }
}

fn compute_ln(p: u64, bits: u32) -> Enclosure {
    debug_assert!(p >= 2);
    let pb = BigInt::from(p);
    let mut k = 63 - p.leading_zeros();
    // Move p / 2^k into [1/sqrt 2, sqrt 2).
    if (&pb * &pb) >= (BigInt::one() << (2 * k + 1)) {
        k += 1;
    }
    let two_k = BigInt::one() << k;
    let num = &pb - &two_k;
    let den = &pb + &two_k;
    let ln2 = ln2_fixed(bits);
    let mut value = &ln2.value * BigInt::from(k);
    let mut error = &ln2.error * BigInt::from(k);
    if !num.is_zero() {
        let t = atanh_fixed(&num.abs(), &den, bits);
        let signed = if num.is_negative() { -t.value } else { t.value };
        value += signed * 2;
        error += t.error * 2;
    }
    Enclosure { value, error }
}

/// Enclosure of `ln p` at `bits` fractional bits; cached per thread.
pub(crate) fn ln_prime(p: u64, bits: u32) -> Enclosure {
    LOG_CACHE.with(|cache| {
        if let Some(e) = cache.borrow().get(&(p, bits)) {
            return e.clone();
        }
        let e = compute_ln(p, bits);
        cache.borrow_mut().insert((p, bits), e.clone());
        e
    })
}
