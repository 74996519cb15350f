//! Big integer / rational kernels and the combinatorial numbers used throughout.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

/// Converts an integer-valued rational to an integer, or `None` if it has a denominator.
pub fn to_integer(q: &Rational) -> Option<Integer> {
    q.is_integer().then(|| q.to_integer())
}

fn factorial_table() -> &'static RwLock<Vec<Integer>> {
    static TABLE: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Integer::one()]))
}

/// `n!`, memoized in a process-wide table that only grows.
pub fn factorial(n: usize) -> Integer {
    {
        let table = factorial_table().read().unwrap();
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().unwrap();
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * Integer::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// `1/n!` with the convention `1/n! = 0` for negative `n` (the Gamma-function pole).
pub fn inv_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(Integer::one(), factorial(n as usize))
    }
}

/// Binomial coefficient for a nonnegative top argument; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<Integer> {
    if n < 0 {
        return Err(invalid!("binomial: negative top argument {n}"));
    }
    Ok(binomial_ext(n, k))
}

/// Binomial coefficient read as the polynomial `x(x-1)...(x-k+1)/k!` in its top argument.
///
/// Agrees with [`binomial`] for `n >= 0`; for negative `n` it gives the generalized
/// value (so `binomial_ext(-1, 0) = 1`). Zero for `k < 0`.
pub fn binomial_ext(n: i64, k: i64) -> Integer {
    if k < 0 {
        return Integer::zero();
    }
    if n >= 0 {
        if k > n {
            return Integer::zero();
        }
        let k = k.min(n - k);
        let mut acc = Integer::one();
        for j in 0..k {
            acc *= Integer::from(n - j);
            acc /= Integer::from(j + 1);
        }
        return acc;
    }
    // C(n, k) = (-1)^k C(k - n - 1, k) for n < 0
    let v = binomial_ext(k - n - 1, k);
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `n! / prod(parts!)`; the parts must sum to `n`.
pub fn multinomial(n: i64, parts: &[i64]) -> Result<Integer> {
    if n < 0 || parts.iter().any(|&p| p < 0) {
        return Err(invalid!("multinomial: negative argument in ({n}; {parts:?})"));
    }
    let total: i64 = parts.iter().sum();
    if total != n {
        return Err(invalid!("multinomial: parts {parts:?} sum to {total}, expected {n}"));
    }
    let mut acc = Integer::one();
    let mut running = 0i64;
    for &p in parts {
        running += p;
        acc *= binomial_ext(running, p);
    }
    Ok(acc)
}

/// Falling factorial `x (x-1) ... (x-k+1)`.
pub fn falling_factorial(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc *= x - rat(j as i64);
    }
    acc
}

/// Stirling numbers of the second kind via the triangle `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let mut row = vec![Integer::zero(); k + 1];
    row[0] = Integer::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = Integer::from(j) * &row[j] + &row[j - 1];
        }
        row[0] = Integer::zero();
    }
    row[k].clone()
}

/// Signed `(-1)^e` as an integer.
pub fn sign_pow(e: i64) -> Integer {
    if e.rem_euclid(2) == 0 {
        Integer::one()
    } else {
        -Integer::one()
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn render_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| invalid!("cannot parse rational {s:?}: {e}"))
}

pub fn is_nonneg_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact_brute(n: i64) -> Integer {
        (1..=n).fold(Integer::one(), |a, j| a * Integer::from(j))
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2).unwrap(), int(10));
        assert_eq!(binomial(7, 9).unwrap(), int(0));
        assert_eq!(binomial(7, -1).unwrap(), int(0));
        let brute = fact_brute(6) / (fact_brute(3) * fact_brute(3));
        assert_eq!(binomial(6, 3).unwrap(), brute);
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(binomial_ext(-1, 0), int(1));
        assert_eq!(binomial_ext(-1, 3), int(-1));
        assert_eq!(binomial_ext(-2, 2), int(3));
        assert_eq!(binomial_ext(-3, -1), int(0));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=64 {
            for k in 0..=n {
                assert_eq!(
                    binomial(n, k).unwrap(),
                    binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        let brute = fact_brute(4) / (fact_brute(2) * fact_brute(0) * fact_brute(2));
        assert_eq!(multinomial(4, &[2, 0, 2]).unwrap(), brute);
        assert_eq!(multinomial(9, &[9]).unwrap(), int(1));
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), int(6));
        assert!(multinomial(4, &[1, 1]).is_err());
    }

    #[test]
    fn multinomial_matches_factorials() {
        for n in 0..=20i64 {
            for a in 0..=n {
                for b in 0..=(n - a) {
                    let c = n - a - b;
                    let expect =
                        fact_brute(n) / (fact_brute(a) * fact_brute(b) * fact_brute(c));
                    assert_eq!(multinomial(n, &[a, b, c]).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&rat(5), 2), rat(20));
        assert_eq!(falling_factorial(&frac(7, 3), 0), rat(1));
        assert_eq!(falling_factorial(&rat(3), 5), rat(0));
    }

    /// Counts set partitions of {0..n} into exactly k blocks by restricted growth strings.
    fn set_partitions(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, k: usize, max: usize) -> u64 {
            if pos == n {
                return u64::from(max == k);
            }
            (0..=max.min(k - 1))
                .map(|b| go(pos + 1, n, k, max.max(b + 1)))
                .sum()
        }
        if n == 0 {
            return u64::from(k == 0);
        }
        if k == 0 {
            return 0;
        }
        go(0, n, k, 0)
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(3, 2), int(3));
        assert_eq!(stirling2(7, 7), int(1));
        assert_eq!(stirling2(4, 2), int(set_partitions(4, 2) as i64));
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(stirling2(n, k), int(set_partitions(n, k) as i64), "S({n},{k})");
            }
        }
    }

    #[test]
    fn stirling_basis_change() {
        for x in -5..=10i64 {
            for n in 0..=10usize {
                let xr = rat(x);
                let sum: Rational = (0..=n)
                    .map(|k| Rational::from_integer(stirling2(n, k)) * falling_factorial(&xr, k as u32))
                    .sum();
                assert_eq!(sum, rat(x.pow(n as u32)));
            }
        }
    }

    #[test]
    fn factorial_table_grows() {
        assert_eq!(factorial(20), fact_brute(20));
        assert_eq!(factorial(3), int(6));
        assert_eq!(inv_factorial(-2), rat(0));
    }

    #[test]
    fn rational_text_roundtrip() {
        let q = frac(-6, 4);
        assert_eq!(render_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(render_rational(&rat(7)), "7");
    }
}
