//! Configurable-precision reals backed by `dashu-float`.

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

pub type Real = FBig<HalfEven, 2>;

pub const DEFAULT_DIGITS: usize = 64;
const GUARD_BITS: usize = 16;

/// Binary precision for `digits` significant decimal digits.
pub fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

fn ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn from_int(n: &BigInt, bits: usize) -> Real {
    Real::from(ibig(n)).with_precision(bits).value()
}

pub fn from_i64(n: i64, bits: usize) -> Real {
    Real::from(n).with_precision(bits).value()
}

/// Correctly rounded conversion of an exact rational.
pub fn from_rational(q: &BigRational, bits: usize) -> Real {
    from_int(q.numer(), bits) / from_int(q.denom(), bits)
}

pub fn from_f64(x: f64, bits: usize) -> Real {
    Real::try_from(x)
        .expect("finite float")
        .with_precision(bits)
        .value()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn sqrt(x: &Real) -> Real {
    x.sqrt()
}

pub fn ln(x: &Real) -> Real {
    x.ln()
}

pub fn exp(x: &Real) -> Real {
    x.exp()
}

/// `asinh(x) = ln(x + sqrt(x^2 + 1))` for `x >= 0`.
pub fn asinh(x: &Real) -> Real {
    let one = Real::ONE.with_precision(x.precision()).value();
    let s = (x * x + &one).sqrt();
    (x + s).ln()
}

/// `log` of an exact positive rational.
pub fn ln_rational(q: &BigRational, bits: usize) -> Real {
    ln(&from_rational(q, bits))
}

/// Decimal rendering with `digits` significant digits, trailing zeros
/// removed.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    if *x == Real::ZERO {
        return "0".to_string();
    }
    let bits = x.precision().max(bits_for_digits(digits));
    let x = x.clone().with_precision(bits).value();
    let e10 = to_f64(&x).abs().log10().floor() as i64;
    let shift = digits as i64 - 1 - e10;
    let p10 = Real::from(IBig::from(10u8).pow(shift.unsigned_abs() as usize))
        .with_precision(bits)
        .value();
    let scaled = if shift >= 0 { &x * &p10 } else { &x / &p10 };
    let n = scaled.round().to_int().value();
    let neg = n < IBig::ZERO;
    let mag = if neg { -n } else { n }.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if shift <= 0 {
        out.push_str(&mag);
        out.push_str(&"0".repeat((-shift) as usize));
        return out;
    }
    let shift = shift as usize;
    let padded = if mag.len() <= shift {
        format!("{}{mag}", "0".repeat(shift + 1 - mag.len()))
    } else {
        mag
    };
    let (int, frac) = padded.split_at(padded.len() - shift);
    out.push_str(int);
    let frac = frac.trim_end_matches('0');
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Parses a decimal string such as `-1.25e3` or `0.5`.
pub fn parse_decimal(s: &str, bits: usize) -> Option<Real> {
    let d: dashu_float::DBig = s.trim().parse().ok()?;
    let (sig, exp) = (d.repr().significand().clone(), d.repr().exponent());
    let m = Real::from(sig).with_precision(bits).value();
    let p10 = Real::from(IBig::from(10u8).pow(exp.unsigned_abs()))
        .with_precision(bits)
        .value();
    Some(if exp >= 0 { m * p10 } else { m / p10 })
}
