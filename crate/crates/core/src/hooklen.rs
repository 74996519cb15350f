//! Partitions, hook lengths, and irreducible symmetric-group dimensions via the
//! hook-length formula.

use num_integer::Integer as _;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{factorial, render_rational, Integer, Rational};
use crate::certificate::{grid_certificate, Certificate, Method};
use crate::error::{integrity, invalid, Result};
use crate::klcoeff::{hook_term, top_index};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Accepts trailing zero parts and drops them.
    pub fn new(parts: &[i64]) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) {
            return Err(invalid!("partition has a negative part: {parts:?}"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid!("partition parts are not weakly decreasing: {parts:?}"));
        }
        Ok(Partition {
            parts: parts.iter().filter(|&&p| p > 0).map(|&p| p as usize).collect(),
        })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The size `n` being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn conjugate(&self) -> Vec<usize> {
        let width = self.parts.first().copied().unwrap_or(0);
        (0..width)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect()
    }
}

/// Shape `(d+m-2i-h+1, h+1, 2^(i-1))` indexing the summands of the equivariant formula.
pub fn kl_shape(m: i64, d: i64, i: i64, h: i64) -> Result<Partition> {
    let mut parts = vec![d + m - 2 * i - h + 1, h + 1];
    parts.extend(std::iter::repeat_n(2, (i - 1).max(0) as usize));
    Partition::new(&parts)
}

/// Hook lengths row by row: `arm + leg + 1`.
pub fn hook_lengths(lambda: &Partition) -> Vec<Vec<u64>> {
    let conj = lambda.conjugate();
    lambda
        .parts
        .iter()
        .enumerate()
        .map(|(r, &len)| {
            (0..len)
                .map(|c| ((len - c - 1) + (conj[c] - r - 1) + 1) as u64)
                .collect()
        })
        .collect()
}

/// `n! / prod(hooks)`.
pub fn dim_irrep(lambda: &Partition) -> Result<Integer> {
    let product = hook_lengths(lambda)
        .iter()
        .flatten()
        .fold(Integer::from(1), |acc, &h| acc * Integer::from(h));
    let (q, r) = factorial(lambda.size()).div_rem(&product);
    if !r.is_zero() {
        return Err(integrity!("hook product {product} does not divide {}!", lambda.size()));
    }
    Ok(q)
}

/// `c_{m,d}^i` as a sum of irreducible dimensions over `h = 1..=min(m, d-2i)`.
pub fn c_equivariant_sum(m: i64, d: i64, i: i64) -> Result<Integer> {
    if m < 1 || d < 1 || i < 1 || d - 2 * i < 1 {
        return Err(invalid!("need m, d, i >= 1 and d - 2i >= 1, got ({m}, {d}, {i})"));
    }
    (1..=m.min(d - 2 * i)).try_fold(Integer::zero(), |acc, h| {
        Ok(acc + dim_irrep(&kl_shape(m, d, i, h)?)?)
    })
}

/// Closed-form hook length of cell `(row, col)` (1-based) of the shape for `(m, d, i, h)`.
pub fn piecewise_hook(m: i64, d: i64, i: i64, h: i64, row: i64, col: i64) -> i64 {
    match row {
        1 if col <= 2 => m + d - i - h + 2 - col,
        1 if col <= h + 1 => m + d - 2 * i - h + 3 - col,
        1 => m + d - 2 * i - h + 2 - col,
        2 if col <= 2 => h + i - col + 1,
        2 => h + 2 - col,
        _ => i - row - col + 4,
    }
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as usize))
}

fn q(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

fn hook_failure(m: i64, d: i64, i: i64, h: i64) -> Result<Option<serde_json::Value>> {
    let shape = kl_shape(m, d, i, h)?;
    let hooks = hook_lengths(&shape);
    let ctx = json!({"m": m, "d": d, "i": i, "h": h, "shape": shape.parts()});
    for (r, row) in hooks.iter().enumerate() {
        for (c, &hv) in row.iter().enumerate() {
            let closed = piecewise_hook(m, d, i, h, r as i64 + 1, c as i64 + 1);
            if closed != hv as i64 {
                return Ok(Some(json!({"check": "piecewise hook", "at": ctx,
                    "row": r + 1, "col": c + 1, "hook": hv, "closed_form": closed})));
            }
        }
    }
    let row_product = |r: usize| -> Rational {
        hooks.get(r).map_or(q(1), |row| row.iter().map(|&x| q(x as i64)).product())
    };
    let tail: Rational = (2..hooks.len()).map(row_product).product();
    let expected = [
        (
            "first row product",
            row_product(0),
            q(m + d - i - h) * q(m + d - i - h + 1) * fact(m + d - 2 * i - h)
                / q(m + d - 2 * i - 2 * h + 1),
        ),
        (
            "second row product",
            row_product(1),
            q(i + h) * q(i + h - 1) * fact(h - 1),
        ),
        ("tail product", tail, fact(i) * fact(i - 1)),
        (
            "dimension equals hook-form summand",
            Rational::from_integer(dim_irrep(&shape)?),
            hook_term(m, d, i, h),
        ),
    ];
    Ok(expected
        .into_iter()
        .find(|(_, got, want)| got != want)
        .map(|(name, got, want)| {
            json!({"check": name, "at": ctx,
                "lhs": render_rational(&got), "rhs": render_rational(&want)})
        }))
}

/// Checks the closed-form hook lengths, row products and per-term dimensions on every
/// in-range `(m, d, i, h)`.
pub fn verify_hook_factorizations(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let mut cells = Vec::new();
    for m in 1..=m_max {
        for d in 1..=d_max {
            for i in 1..=top_index(d) {
                for h in 1..=m.min(d - 2 * i) {
                    cells.push((m, d, i, h));
                }
            }
        }
    }
    let results = cells
        .par_iter()
        .map(|&(m, d, i, h)| hook_failure(m, d, i, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(grid_certificate(
        format!("hook-length factorizations m<={m_max} d<={d_max}"),
        Method::Identity,
        cells.len(),
        results.into_iter().flatten().next(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[i64]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn hook_examples() {
        assert_eq!(hook_lengths(&p(&[2, 1])), vec![vec![3, 1], vec![1]]);
        assert_eq!(hook_lengths(&p(&[5])), vec![vec![5, 4, 3, 2, 1]]);
        assert_eq!(hook_lengths(&p(&[3, 2])), vec![vec![4, 3, 1], vec![2, 1]]);
        assert_eq!(kl_shape(2, 3, 1, 1).unwrap(), p(&[3, 2]));
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim_irrep(&p(&[2, 2])).unwrap(), Integer::from(2));
        assert_eq!(dim_irrep(&p(&[3, 2])).unwrap(), Integer::from(5));
        assert_eq!(dim_irrep(&p(&[6])).unwrap(), Integer::from(1));
        assert_eq!(dim_irrep(&p(&[])).unwrap(), Integer::from(1));
    }

    #[test]
    fn equivariant_examples() {
        assert_eq!(c_equivariant_sum(2, 3, 1).unwrap(), Integer::from(5));
        assert_eq!(c_equivariant_sum(1, 3, 1).unwrap(), Integer::from(2));
        assert_eq!(c_equivariant_sum(1, 5, 2).unwrap(), Integer::from(5));
        assert!(c_equivariant_sum(1, 4, 2).is_err());
    }

    #[test]
    fn invalid_partitions() {
        assert!(Partition::new(&[1, 2]).is_err());
        assert!(Partition::new(&[2, -1]).is_err());
        assert_eq!(p(&[3, 1, 0, 0]).parts(), &[3, 1]);
    }

    #[test]
    fn factorizations_small_grid() {
        let cert = verify_hook_factorizations(4, 10).unwrap();
        assert!(cert.passed(), "{cert:?}");
        // i = 1: empty tail, product 1! 0! = 1
        assert_eq!(fact(1) * fact(0), q(1));
    }
}
