//! Exact integer combinatorics shared by every engine.
//!
//! Everything here is generic over [`Scalar`], which is satisfied by
//! [`num_bigint::BigInt`] (the crate default, see [`crate::Int`]) as well as
//! by the fixed-width signed integers. Fixed-width instantiations are only
//! sound while values fit; the public engines always use `BigInt`.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every scalar")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}

/// `(-1)^e` as a scalar.
pub fn sign<T: Scalar>(e: i64) -> T {
    if e.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Combinatorial binomial coefficient with zero extension: 0 whenever
/// `b < 0`, `a < 0` or `b > a`.
pub fn binom<T: Scalar>(a: i64, b: i64) -> T {
    if a < 0 || b < 0 || b > a {
        return T::zero();
    }
    let b = b.min(a - b);
    let mut acc = T::one();
    for i in 1..=b {
        // acc * (a - b + i) is divisible by i after the previous step
        acc = acc * T::of(a - b + i) / T::of(i);
    }
    acc
}

/// Euler characteristic of `O(k)` on `P^n`, i.e. the Hilbert polynomial
/// `(k+1)(k+2)...(k+n)/n!` evaluated at `k`.
pub fn chi_line<T: Scalar>(n: usize, k: i64) -> T {
    let n = n as i64;
    if k >= 0 {
        binom(n + k, n)
    } else if k < -n {
        sign::<T>(n) * binom::<T>(-k - 1, n)
    } else {
        T::zero()
    }
}

/// Number of monomials of degree `d` in `vars` variables (zero for `d < 0`).
pub fn monomials<T: Scalar>(vars: usize, d: i64) -> T {
    if vars == 0 {
        return if d == 0 { T::one() } else { T::zero() };
    }
    binom(d + vars as i64 - 1, vars as i64 - 1)
}

/// `m^e` for small exponents.
pub fn pow<T: Scalar>(m: u64, e: usize) -> T {
    let base = T::from_u64(m).expect("u64 fits every scalar");
    (0..e).fold(T::one(), |acc, _| acc * base.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;
    use num_traits::ToPrimitive;

    fn b(a: i64, k: i64) -> i64 {
        binom::<Int>(a, k).to_i64().unwrap()
    }

    #[test]
    fn binom_values() {
        assert_eq!(b(5, 3), 10);
        assert_eq!(b(-1, 1), 0);
        assert_eq!(b(7, 2), 21);
        assert_eq!(b(4, 5), 0);
        assert_eq!(b(4, -1), 0);
        assert_eq!(b(0, 0), 1);
    }

    #[test]
    fn binom_is_big() {
        let v: Int = binom(100, 49);
        assert_eq!(v.to_string(), "98913082887808032681188722800");
    }

    #[test]
    fn pascal() {
        for a in 1..=60 {
            for k in 0..=a {
                assert_eq!(
                    binom::<Int>(a, k),
                    binom::<Int>(a - 1, k - 1) + binom::<Int>(a - 1, k)
                );
            }
        }
    }

    #[test]
    fn chi_line_values() {
        assert_eq!(chi_line::<i64>(2, 2), 6);
        assert_eq!(chi_line::<i64>(2, -1), 0);
        assert_eq!(chi_line::<i64>(2, -3), 1);
        assert_eq!(chi_line::<i64>(3, -5), -4);
    }

    #[test]
    fn chi_line_serre_and_restriction() {
        for n in 1..=6usize {
            for k in -50..=50 {
                let lhs: Int = chi_line(n, k);
                let rhs: Int = sign::<Int>(n as i64) * chi_line::<Int>(n, -k - n as i64 - 1);
                assert_eq!(lhs, rhs, "serre n={n} k={k}");
                if n >= 2 {
                    assert_eq!(
                        chi_line::<Int>(n, k) - chi_line::<Int>(n, k - 1),
                        chi_line::<Int>(n - 1, k),
                        "restriction n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn chi_line_is_the_hilbert_polynomial() {
        // (k+1)...(k+n)/n! evaluated directly
        for n in 1..=5usize {
            for k in -20i64..=20 {
                let mut num = Int::from(1);
                let mut den = Int::from(1);
                for i in 1..=n as i64 {
                    num *= Int::from(k + i);
                    den *= Int::from(i);
                }
                assert_eq!(chi_line::<Int>(n, k), num / den);
            }
        }
    }

    #[test]
    fn fixed_width_agrees_with_bigint() {
        for a in -3..=40 {
            for k in -3..=40 {
                assert_eq!(Int::from(binom::<i128>(a, k)), binom::<Int>(a, k));
            }
        }
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials::<i64>(3, 2), 6);
        assert_eq!(monomials::<i64>(3, -1), 0);
        assert_eq!(monomials::<i64>(1, 7), 1);
        assert_eq!(pow::<i64>(2, 5), 32);
    }
}
