//! Exact rational scalars and their text forms.
//!
//! Decimal input strings parse exactly (`0.1` becomes 1/10), so the numeric
//! literals in mesh and data files survive round trips bit-for-bit.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or an exact decimal literal like `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole
                .parse()
                .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        if frac.is_empty() {
            return Ok(Rat::from(w));
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let f: BigInt = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let abs = Rat::from(w.abs()) + Rat::new(f, scale);
        return Ok(if negative { -abs } else { abs });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    Ok(Rat::from(n))
}

/// Converts a finite f64 to the exact rational it represents.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back through a reduced-precision path for huge numerators
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical text form: `3`, `-1/2`.
pub fn render_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact decimal form when the denominator is of the shape 2^a 5^b,
/// otherwise the `p/q` form.
pub fn render_rat_decimal(x: &Rat) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut d = x.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut a = 0u32;
    let mut b = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return render_rat(x);
    }
    let digits = a.max(b);
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (x * Rat::from(scale)).numer().clone();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        while s.len() <= digits as usize {
            s.insert(0, '0');
        }
        s.insert(s.len() - digits as usize, '.');
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rat("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert_eq!(parse_rat("7/3").unwrap(), rat(7, 3));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("2.").unwrap(), int(2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a.b").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_rat_decimal(&rat(-3, 20)), "-0.15");
        assert_eq!(render_rat_decimal(&rat(1, 100)), "0.01");
        assert_eq!(render_rat_decimal(&rat(16, 25)), "0.64");
        assert_eq!(render_rat_decimal(&int(0)), "0");
        assert_eq!(render_rat_decimal(&int(4)), "4");
        assert_eq!(render_rat_decimal(&rat(1, 3)), "1/3");
    }

    #[test]
    fn round_trips_render() {
        for x in [rat(22, 7), int(-5), rat(-3, 1000)] {
            assert_eq!(parse_rat(&render_rat(&x)).unwrap(), x);
        }
    }
}
