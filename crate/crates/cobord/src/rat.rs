//! Short-hand constructors for exact rationals.

use num::{BigInt, BigRational};

/// The coefficient type used everywhere: arbitrary-precision rationals.
pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Fraction `n/d`, normalized.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `a` or `a/b` with `b > 0` and `gcd(a, b) = 1`.
/// `BigRational` keeps that normal form internally, so this is plain display.
pub fn render(q: &Q) -> String {
    q.to_string()
}

/// Parses the output of [`render`].
pub fn parse(s: &str) -> Option<Q> {
    s.parse().ok()
}
