//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn render(x: &Q) -> String {
    x.to_string()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse_round_trip() {
        for (s, v) in [("3", q(3)), ("-1/2", qf(-1, 2)), ("4/6", qf(2, 3))] {
            assert_eq!(parse_q(s), Some(v.clone()));
            assert_eq!(parse_q(&render(&v)), Some(v));
        }
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
    }
}
