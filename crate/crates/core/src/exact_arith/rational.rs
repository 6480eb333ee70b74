//! Helpers around [`Rational`]: parsing, exact square roots, term rendering.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Square root in Q, if one exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Writes `c*m` terms in the conventional `3/2*x^2 - x + 7` style.
///
/// `terms` yields coefficients with the (possibly empty) monomial text; zero
/// coefficients must already be filtered out.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a Rational, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        let a = c.abs();
        if mono.is_empty() {
            write!(f, "{a}")?;
        } else if a.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{a}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn power_text(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares_and_non_squares() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(0)), Some(rat(0)));
        assert_eq!(rational_sqrt(&rat(2)), None);
        assert_eq!(rational_sqrt(&rat(-4)), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
