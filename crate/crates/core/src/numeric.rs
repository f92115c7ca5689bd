//! Floating-point helpers: compensated summation and an extended-precision
//! natural logarithm used to settle comparisons that double precision
//! cannot decide.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Fractional bits carried by the extended-precision path.
pub const EXT_PRECISION_BITS: u32 = 160;

/// Extra bits kept during evaluation and dropped on return.
const GUARD_BITS: u32 = 32;

/// Results within this many units of the last place are treated as
/// undecided.
const TOLERANCE_ULPS: u32 = 64;

fn work_bits() -> u32 {
    EXT_PRECISION_BITS + GUARD_BITS
}

/// atanh(z) for a fixed-point `0 <= z < 1/2` with `bits` fractional bits.
fn atanh_fixed(z: &BigInt, bits: u32) -> BigInt {
    let z2 = (z * z) >> bits;
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term / k;
        term = (&term * &z2) >> bits;
        k += 2;
    }
    sum
}

fn ln2_fixed() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| {
        let bits = work_bits();
        let third = (BigInt::one() << bits) / 3;
        atanh_fixed(&third, bits) << 1
    })
}

/// `ln(num / den)` in fixed point with [`EXT_PRECISION_BITS`] fractional
/// bits. The error is a few units in the last place.
///
/// # Panics
/// If either argument is zero.
pub fn ln_fixed(num: &BigUint, den: &BigUint) -> BigInt {
    assert!(
        !num.is_zero() && !den.is_zero(),
        "logarithm of a non-positive ratio"
    );
    let bits = work_bits();
    // num/den = 2^e * y with y in [1, 2)
    let mut e = num.bits() as i64 - den.bits() as i64;
    let scaled = |e: i64| -> BigInt {
        let n = BigInt::from(num.clone());
        let d = BigInt::from(den.clone());
        if e >= 0 {
            (n << bits) / (d << e as u64)
        } else {
            (n << (bits as u64 + (-e) as u64)) / d
        }
    };
    let one = BigInt::one() << bits;
    let mut y = scaled(e);
    if y < one {
        e -= 1;
        y = scaled(e);
    }
    // ln y = 2 atanh((y - 1) / (y + 1)), with the argument in [0, 1/3)
    let z = ((&y - &one) << bits) / (&y + &one);
    let ln_y = atanh_fixed(&z, bits) << 1;
    let total = ln_y + ln2_fixed() * e;
    total >> GUARD_BITS
}

fn ln_u64(x: u64) -> BigInt {
    ln_fixed(&BigUint::from(x), &BigUint::one())
}

fn tolerance() -> BigInt {
    BigInt::from(TOLERANCE_ULPS)
}

/// `ceil(scale_num / scale_den * ln(num / den))` when the value is not
/// within the extended-precision tolerance of an integer.
pub fn ceil_scaled_ln(scale_num: u64, scale_den: u64, num: u128, den: u128) -> Option<i64> {
    let l = ln_fixed(&BigUint::from(num), &BigUint::from(den));
    let v = l * BigInt::from(scale_num) / BigInt::from(scale_den);
    let unit = BigInt::one() << EXT_PRECISION_BITS;
    // floor division toward negative infinity
    let (mut q, mut r) = (&v / &unit, &v % &unit);
    if r.sign() == Sign::Minus {
        q -= 1;
        r += &unit;
    }
    let tol = tolerance();
    if r <= tol || &unit - &r <= tol {
        return None;
    }
    i64::try_from(q + 1).ok()
}

/// Compares `a * ln(x)` with `b * ln(y)`; `None` when the difference is
/// within the extended-precision tolerance.
pub fn cmp_weighted_ln(a: u64, x: u64, b: u64, y: u64) -> Option<Ordering> {
    let diff = ln_u64(x) * BigInt::from(a) - ln_u64(y) * BigInt::from(b);
    let slop = tolerance() * BigInt::from(a.max(b).max(1));
    if diff.abs() <= slop {
        return None;
    }
    Some(if diff.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    })
}

/// Fixed-point value scaled to `digits` decimal places, for display and
/// testing.
pub fn to_decimal_scaled(v: &BigInt, digits: u32) -> BigInt {
    (v * BigInt::from(10u32).pow(digits)) >> EXT_PRECISION_BITS
}
