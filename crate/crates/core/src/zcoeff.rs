//! Z-polynomial coefficients `z_{m,d}^i` by three routes and the Narayana specialization.

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{binomial_ext, frac, rat, render_rational, sign_pow, to_integer, Integer, Rational};
use crate::certificate::{grid_certificate, Certificate, Method};
use crate::error::{invalid, Result};
use crate::klcoeff::{kl_poly, Route};
use crate::polyring::{expand_binomial_affine, AffineForm, Poly};
use crate::seqfactor::{symbolic_sequence, Family};

fn b(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial_ext(n, k))
}

fn check_md(m: i64, d: i64) -> Result<()> {
    if m < 1 || d < 1 {
        return Err(invalid!("need m >= 1 and d >= 1, got m={m}, d={d}"));
    }
    Ok(())
}

/// `Z_{U_{m,d}}(t) = t^d + sum_k binom(d+m, k+m) t^(d-k) P_{U_{m,k}}(t)`, using the given
/// route for each KL polynomial.
pub fn z_from_kl_route(m: i64, d: i64, route: Route) -> Result<Poly> {
    check_md(m, d)?;
    let mut z = Poly::monomial(Rational::one(), d as usize);
    for k in 1..=d {
        let p = kl_poly(m, k, route)?;
        z += &p.shift_up((d - k) as usize).scale(&b(d + m, k + m));
    }
    Ok(z)
}

pub fn z_from_kl(m: i64, d: i64) -> Result<Poly> {
    z_from_kl_route(m, d, Route::Positive)
}

/// Alternating closed form, valid for `0 <= i <= d-1` (`z^d = 1` by convention).
pub fn z_alternating(m: i64, d: i64, i: i64) -> Result<Rational> {
    check_md(m, d)?;
    if i == d {
        return Err(invalid!("z_alternating: i = d is fixed to 1 by convention, not by the formula"));
    }
    if i < 0 || i > d {
        return Err(invalid!("z index {i} outside 0..={d}"));
    }
    let pre = b(d + 2 * m, i + m) * b(d, i) / b(d + 2 * m, m);
    let sum: Rational = (1..=m)
        .map(|h| {
            Rational::from_integer(sign_pow(h + 1)) * frac(h, m)
                * b(i + m, m - h)
                * b(d - i - h + m - 1, m - 1)
        })
        .sum();
    Ok(pre * sum)
}

/// Positive closed form, valid on all of `0 <= i <= d`.
pub fn z_positive(m: i64, d: i64, i: i64) -> Result<Rational> {
    check_md(m, d)?;
    if i < 0 || i > d {
        return Err(invalid!("z index {i} outside 0..={d}"));
    }
    let pre = b(d + m, i + m) * b(d + m, i) / b(d + m, m);
    let sum: Rational = (0..m)
        .map(|h| {
            frac(i * (h - m + 1) + m, (h + 1) * m) * b(i - 1 + h, h) * b(d - i + h, h)
        })
        .sum();
    Ok(pre * sum)
}

/// `z_positive(m, d, d)` as a polynomial in `d`; identically `1`.
pub fn diagonal_symbolic(m: i64) -> Poly {
    symbolic_sequence(Family::B, m).outer_at_inner()
}

/// The telescoped form `(d/m) binom(d+m-1, m-1) - (binom(d+m-1, m) - 1)` as a polynomial in `d`.
pub fn diagonal_telescoped(m: i64) -> Poly {
    let lower = expand_binomial_affine(AffineForm::new(0, 1, m - 1), (m - 1) as usize).coeff(0);
    let upper = expand_binomial_affine(AffineForm::new(0, 1, m - 1), m as usize).coeff(0);
    &(&(&Poly::x() * &lower).scale(&frac(1, m)) - &upper) + &Poly::one()
}

/// Narayana number `N(n, k)` (Dyck paths of semilength `n` with `k` peaks) by the ratio formula.
pub fn narayana_ratio(n: i64, k: i64) -> Integer {
    if n == 0 {
        return Integer::from(i64::from(k == 0));
    }
    binomial_ext(n, k) * binomial_ext(n, k - 1) / Integer::from(n)
}

/// Peak-count distribution of all Dyck paths of semilength `n`, by exhaustive enumeration.
pub fn dyck_peak_counts(n: usize) -> Vec<u64> {
    fn walk(ups: usize, downs: usize, n: usize, last_up: bool, peaks: usize, out: &mut [u64]) {
        if downs == n {
            out[peaks] += 1;
            return;
        }
        if ups < n {
            walk(ups + 1, downs, n, true, peaks, out);
        }
        if downs < ups {
            walk(ups, downs + 1, n, false, peaks + usize::from(last_up), out);
        }
    }
    let mut out = vec![0u64; n + 1];
    walk(0, 0, n, false, 0, &mut out);
    out
}

/// Checks `z_{1,d}^i = N(d+1, i+1)`: by path enumeration for `d <= 12`, by the ratio formula
/// for all `d <= d_max`.
pub fn narayana_check(d_max: i64) -> Result<Certificate> {
    if d_max < 1 {
        return Err(invalid!("d_max must be >= 1"));
    }
    let rows: Vec<(i64, Poly)> = (1..=d_max)
        .into_par_iter()
        .map(|d| Ok((d, z_from_kl(1, d)?)))
        .collect::<Result<_>>()?;
    let mut checked = 0usize;
    for (d, z) in rows {
        let enumerated = (d <= 12).then(|| dyck_peak_counts((d + 1) as usize));
        for i in 0..=d {
            checked += 1;
            let got = z.coeff(i as usize);
            let ratio = Rational::from_integer(narayana_ratio(d + 1, i + 1));
            let brute = enumerated
                .as_ref()
                .map(|c| Rational::from_integer(Integer::from(c[(i + 1) as usize])));
            if got != ratio || brute.as_ref().is_some_and(|v| *v != got) {
                return Ok(Certificate::fail(
                    format!("narayana d<={d_max}"),
                    Method::Identity,
                    json!({"d": d, "i": i, "z": render_rational(&got),
                        "ratio": render_rational(&ratio),
                        "enumerated": brute.as_ref().map(render_rational)}),
                ));
            }
        }
    }
    Ok(grid_certificate(format!("narayana d<={d_max}"), Method::Identity, checked, None))
}

/// Three-route comparison of one Z-polynomial, with boundary and positivity checks.
fn z_failure(m: i64, d: i64) -> Result<Option<serde_json::Value>> {
    let z = z_from_kl(m, d)?;
    if z.coeff(0) != rat(1) || z.coeff(d as usize) != rat(1) {
        return Ok(Some(json!({"m": m, "d": d, "check": "boundary z^0 = z^d = 1", "z": z.to_string()})));
    }
    for i in 0..=d {
        let from_kl = z.coeff(i as usize);
        let positive = z_positive(m, d, i)?;
        let alternating = if i < d { Some(z_alternating(m, d, i)?) } else { None };
        let integral = to_integer(&from_kl).is_some_and(|v| v.is_positive());
        if !integral || positive != from_kl || alternating.as_ref().is_some_and(|a| *a != from_kl) {
            return Ok(Some(json!({
                "m": m, "d": d, "i": i,
                "from_kl": render_rational(&from_kl),
                "positive": render_rational(&positive),
                "alternating": alternating.as_ref().map(render_rational),
            })));
        }
    }
    Ok(None)
}

/// True when the coefficient list reads the same backwards.
pub fn is_palindromic(p: &Poly, degree: usize) -> bool {
    (0..=degree).all(|k| p.coeff(k) == p.coeff(degree - k))
}

/// Three-route agreement over the grid. Palindromicity is reported as an observation.
pub fn verify_z_routes(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let cells: Vec<(i64, i64)> = (1..=m_max)
        .flat_map(|m| (1..=d_max).map(move |d| (m, d)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(m, d)| Ok((z_failure(m, d)?, is_palindromic(&z_from_kl(m, d)?, d as usize))))
        .collect::<Result<Vec<_>>>()?;
    let palindromic = results.iter().filter(|(_, p)| *p).count();
    let failure = results.into_iter().find_map(|(f, _)| f);
    let subject = format!("z three-route agreement m<={m_max} d<={d_max}");
    Ok(match failure {
        Some(w) => Certificate::fail(subject, Method::Identity, w),
        None => Certificate::pass(
            subject,
            Method::Identity,
            Some(json!({"instances_checked": cells.len(), "palindromic": palindromic})),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_kl_examples() {
        assert_eq!(z_from_kl(1, 2).unwrap(), Poly::from_ints(&[1, 3, 1]));
        assert_eq!(z_from_kl(2, 3).unwrap(), Poly::from_ints(&[1, 10, 10, 1]));
        assert_eq!(z_from_kl(1, 3).unwrap(), Poly::from_ints(&[1, 6, 6, 1]));
        assert_eq!(z_from_kl(3, 1).unwrap(), Poly::from_ints(&[1, 1]));
    }

    #[test]
    fn alternating_examples() {
        assert_eq!(z_alternating(2, 3, 1).unwrap(), rat(10));
        assert_eq!(z_alternating(1, 3, 1).unwrap(), rat(6));
        assert_eq!(z_alternating(3, 4, 0).unwrap(), rat(1));
        assert!(z_alternating(2, 3, 3).is_err());
    }

    #[test]
    fn positive_examples() {
        for m in 1..=6 {
            for d in 1..=8 {
                assert_eq!(z_positive(m, d, d).unwrap(), rat(1));
                assert_eq!(z_positive(m, d, 0).unwrap(), rat(1));
            }
        }
        assert_eq!(z_positive(2, 3, 1).unwrap(), rat(10));
    }

    #[test]
    fn diagonal_is_one() {
        for m in 1..=8 {
            assert_eq!(diagonal_symbolic(m), Poly::one(), "m={m}");
            assert_eq!(diagonal_telescoped(m), Poly::one(), "m={m}");
        }
    }

    #[test]
    fn narayana_examples() {
        assert_eq!(dyck_peak_counts(4), vec![0, 1, 6, 6, 1]);
        assert_eq!(dyck_peak_counts(3), vec![0, 1, 3, 1]);
        assert_eq!(z_from_kl(1, 1).unwrap(), Poly::from_ints(&[1, 1]));
        assert!(narayana_check(9).unwrap().passed());
    }

    #[test]
    fn small_grid_agrees() {
        let cert = verify_z_routes(4, 9).unwrap();
        assert!(cert.passed(), "{cert:?}");
    }
}
