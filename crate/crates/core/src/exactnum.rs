//! Exact number kernel: big rationals, Bernoulli numbers and the factorial
//! family used throughout the crate.
//!
//! Note on double factorials: [`odd_double_factorial`] follows the convention
//! `(2l)!! = (2l)! / (2^l l!) = (2l-1)(2l-3)...1`, i.e. the product of the
//! *odd* numbers below `2l`. This is not the usual even double factorial.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: impl Into<Integer>) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `top! / (prod parts_i! * (top - sum parts)!)`.
///
/// Panics if the parts sum to more than `top`.
pub fn multinomial(top: u64, parts: &[u64]) -> Integer {
    let used: u64 = parts.iter().sum();
    assert!(used <= top, "multinomial parts exceed the top index");
    let mut acc = BigInt::one();
    let mut remaining = top;
    for &p in parts {
        acc *= binomial(remaining, p);
        remaining -= p;
    }
    acc
}

/// `(2l)! / (2^l l!)`, the product of odd numbers `(2l-1)(2l-3)...1`.
pub fn odd_double_factorial(l: u64) -> Integer {
    (1..=l).fold(BigInt::one(), |acc, k| acc * (2 * k - 1))
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli number `B_m` with `B_1 = -1/2`.
///
/// Computed from `sum_{k=0}^{m} C(m+1, k) B_k = 0` and memoized.
pub fn bernoulli(m: usize) -> Rational {
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::one());
    }
    while table.len() <= m {
        let n = table.len();
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            acc += rat_int(binomial(n as u64 + 1, k as u64)) * b;
        }
        table.push(-acc / rat_int(BigInt::from(n + 1)));
    }
    table[m].clone()
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s}")))
    }

    pub mod vec {
        use super::super::format_rational;
        use super::Rational;
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&format_rational(x))?;
            }
            seq.end()
        }
    }

    pub mod matrix {
        use super::super::format_rational;
        use super::Rational;
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for row in rows {
                let row: Vec<String> = row.iter().map(format_rational).collect();
                seq.serialize_element(&row)?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for m in (3..60).step_by(2) {
            assert!(bernoulli(m).is_zero(), "B_{m}");
        }
    }

    #[test]
    fn odd_double_factorial_values() {
        let expected = [1, 1, 3, 15, 105, 945];
        for (l, e) in expected.iter().enumerate() {
            assert_eq!(odd_double_factorial(l as u64), int(*e));
        }
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(3, &[3]), int(1));
        assert_eq!(multinomial(3, &[2, 1]), int(3));
        assert_eq!(multinomial(4, &[2, 2]), int(6));
        assert_eq!(multinomial(5, &[2]), int(10));
        assert_eq!(multinomial(0, &[]), int(1));
    }

    #[test]
    fn rational_formatting_round_trips() {
        for x in [rat(-18, 1), rat(7, 5760), rat(0, 3), rat(-3, 4)] {
            let s = format_rational(&x);
            assert_eq!(parse_rational(&s), Some(x));
        }
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(parse_rational("1/0"), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn multinomial_times_factorials_is_top_factorial(
                parts in proptest::collection::vec(0u64..6, 0..4),
                slack in 0u64..5,
            ) {
                let top = parts.iter().sum::<u64>() + slack;
                let mut lhs = multinomial(top, &parts) * factorial(slack);
                for &p in &parts {
                    lhs *= factorial(p);
                }
                prop_assert_eq!(lhs, factorial(top));
            }

            #[test]
            fn odd_double_factorial_identity(l in 0u64..40) {
                let lhs = odd_double_factorial(l) * BigInt::from(2).pow(l as u32) * factorial(l);
                prop_assert_eq!(lhs, factorial(2 * l));
            }
        }
    }
}
