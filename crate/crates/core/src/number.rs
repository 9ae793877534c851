//! Exact rational numbers and integer direction vectors.
//!
//! All sign tests in the library run on exact values. Decimal input such as
//! `0.7` is parsed to the rational `7/10`, not to the nearest binary float.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer vector used for directions, where only the ray matters.
pub type IVec = Vec<BigInt>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `-12`, `3.25`, `1e-3`, `-2.5E+2` or `7/10` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact conversion of a finite float (its binary value).
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number {x}")))
}

/// Rationalizes a float after rounding it to a fixed number of decimals.
/// Used where the float is itself approximate (rotations, user sliders).
pub fn from_f64_rounded(x: f64, decimals: u32) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x}")));
    }
    let scale = 10f64.powi(decimals as i32);
    let scaled = (x * scale).round();
    let numer = BigInt::from(scaled as i128);
    Ok(Rational::new(numer, num_traits::pow(BigInt::from(10), decimals as usize)))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator pairs can overflow the naive conversion.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `"num/den"` for non-integers, `"num"` for integers.
pub fn format_exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Divides out the gcd of the entries so equal rays get equal representatives.
pub fn primitive(mut v: IVec) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Positive integer multiple of a rational vector, reduced to primitive form.
pub fn scale_to_integers(v: &[Rational]) -> IVec {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    primitive(ints)
}

/// Primitive representative of the line through `v`: first nonzero entry positive.
pub fn line_key(v: &[BigInt]) -> (IVec, bool) {
    let p = primitive(v.to_vec());
    match p.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => (p.into_iter().map(|x| -x).collect(), false),
        _ => (p, true),
    }
}

pub fn ivec_to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub fn ivec_from_i64(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.7").unwrap(), rat(7, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E+2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_rational("+4").unwrap(), int(4));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1.2.3", "1/0", "-", "1e", "0x10", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn exact_format_round_trips() {
        for s in ["7/10", "-3", "22/7", "0"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(format_exact(&x), s);
            assert_eq!(parse_rational(&format_exact(&x)).unwrap(), x);
        }
    }

    #[test]
    fn integer_scaling_keeps_direction() {
        let v = vec![rat(7, 10), rat(3, 10)];
        assert_eq!(scale_to_integers(&v), ivec_from_i64(&[7, 3]));
        let v = vec![rat(-1, 2), rat(0, 1), rat(3, 4)];
        assert_eq!(scale_to_integers(&v), ivec_from_i64(&[-2, 0, 3]));
        let (key, same) = line_key(&ivec_from_i64(&[-2, 4]));
        assert_eq!(key, ivec_from_i64(&[1, -2]));
        assert!(!same);
    }
}
