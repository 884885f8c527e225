//! Exact rational helpers: canonical `p/q` text, a surjective enumeration of
//! ℚ and the pairing function used to enumerate product carriers.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms with positive denominator; integers keep the `/1`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let (p, d) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("rational `{s}` is not of the form p/q")))?;
    let numer: BigInt = p
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
    if d.starts_with('-') || d.starts_with('+') {
        return Err(Error::Parse(format!("denominator of `{s}` must be a positive integer")));
    }
    let denom: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(numer, denom))
}

/// 2^-k.
pub fn half_pow(k: usize) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k)
}

pub fn pow_int(base: u32, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..k {
        acc *= base;
    }
    acc
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / q_int(2)
}

/// Stern's diatomic sequence; `fusc(n) / fusc(n + 1)` walks the Calkin–Wilf tree.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// Index → rational: 0 ↦ 0, 2k−1 ↦ cw(k), 2k ↦ −cw(k). Total and surjective.
pub fn rational_at(index: usize) -> Q {
    if index == 0 {
        return Q::zero();
    }
    let k = index.div_ceil(2) as u64;
    let positive = Q::new(BigInt::from(fusc(k)), BigInt::from(fusc(k + 1)));
    if index % 2 == 1 {
        positive
    } else {
        -positive
    }
}

/// Cantor unpairing ℕ → ℕ × ℕ.
pub fn unpair(n: usize) -> (usize, usize) {
    let w = ((8 * n + 1).sqrt() - 1) / 2;
    let y = n - w * (w + 1) / 2;
    (w - y, y)
}

pub fn pair(x: usize, y: usize) -> usize {
    (x + y) * (x + y + 1) / 2 + y
}

/// ⌊√n · base^k⌋ / base^k, an under-approximation within base^-k.
pub fn sqrt_floor_scaled(n: u64, base: u32, k: usize) -> Q {
    let scale = pow_int(base, k);
    let radicand = BigInt::from(n) * &scale * &scale;
    let root = radicand
        .to_biguint()
        .map(|u: BigUint| BigInt::from(u.sqrt()))
        .unwrap_or_else(BigInt::zero);
    Q::new(root, scale)
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Sign of x² − n for rational x ≥ 0, compared exactly.
pub fn cmp_square(x: &Q, n: u64) -> std::cmp::Ordering {
    if x.is_negative() {
        return std::cmp::Ordering::Less;
    }
    (x * x).cmp(&Q::from_integer(BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn canonical_text() {
        assert_eq!(fmt_q(&q(2, 4)), "1/2");
        assert_eq!(fmt_q(&q(3, -6)), "-1/2");
        assert_eq!(fmt_q(&q_int(3)), "3/1");
        assert_eq!(parse_q("6/4").unwrap(), q(3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("1/-2").is_err());
        assert!(parse_q("3").is_err());
    }

    #[test]
    fn enumeration_hits_small_rationals() {
        let seen: HashSet<String> = (0..4000).map(|i| fmt_q(&rational_at(i))).collect();
        for p in -6i64..=6 {
            for d in 1i64..=6 {
                assert!(seen.contains(&fmt_q(&q(p, d))), "{p}/{d} not enumerated");
            }
        }
    }

    #[test]
    fn pairing_roundtrip() {
        for n in 0..5000 {
            let (x, y) = unpair(n);
            assert_eq!(pair(x, y), n);
        }
    }

    #[test]
    fn sqrt_under_approximation() {
        for k in 0..30 {
            let r = sqrt_floor_scaled(2, 2, k);
            assert_eq!(cmp_square(&r, 2), std::cmp::Ordering::Less);
            let up = &r + half_pow(k);
            assert_eq!(cmp_square(&up, 2), std::cmp::Ordering::Greater);
        }
    }
}
