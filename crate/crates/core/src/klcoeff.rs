//! Coefficients `c_{m,d}^i` of the Kazhdan-Lusztig polynomial of the uniform matroid
//! `U_{m,d}` by four independent routes, and the finite checks of the identities that
//! tie the routes together.
//!
//! Every route computes in exact rationals and integrality is asserted at the end.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{
    binomial_ext, factorial, inv_factorial, multinomial, rat, sign_pow, to_integer, Integer,
    Rational,
};
use crate::certificate::{grid_certificate, Certificate, Method};
use crate::error::{integrity, invalid, Result};
use crate::polyring::Poly;

/// Which closed form (or the recursion) produced a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    Recursive,
    Hook,
    Alternating,
    Positive,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::Recursive,
        Route::Hook,
        Route::Alternating,
        Route::Positive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Recursive => "recursive",
            Route::Hook => "hook",
            Route::Alternating => "alternating",
            Route::Positive => "positive",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| invalid!("unknown route {s:?}"))
    }
}

fn r(n: i64) -> Rational {
    rat(n)
}

fn ri(n: Integer) -> Rational {
    Rational::from_integer(n)
}

fn b(n: i64, k: i64) -> Rational {
    ri(binomial_ext(n, k))
}

fn fact(n: i64) -> Rational {
    ri(factorial(n as usize))
}

/// Largest index `i` with a possibly nonzero coefficient, `floor((d-1)/2)`.
pub fn top_index(d: i64) -> i64 {
    (d - 1).div_euclid(2)
}

fn check_range(m: i64, d: i64, i: i64) -> Result<()> {
    if m < 1 || d < 1 {
        return Err(invalid!("need m >= 1 and d >= 1, got m={m}, d={d}"));
    }
    if i < 0 || i > top_index(d) {
        return Err(invalid!(
            "coefficient index {i} outside 0..={} for d={d}",
            top_index(d)
        ));
    }
    Ok(())
}

type Triangle = Vec<Vec<Integer>>;

fn recursion_memo() -> &'static RwLock<HashMap<i64, Triangle>> {
    static MEMO: OnceLock<RwLock<HashMap<i64, Triangle>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// One coefficient of the recursion, given all rows `c_{m,k}` with `k < d`.
fn recursion_step(m: i64, d: i64, i: i64, rows: &Triangle) -> Integer {
    let mut acc = sign_pow(i) * binomial_ext(m + d, i);
    for j in 0..i {
        for k in (2 * j + 1)..=(i + j) {
            let coeff = multinomial(m + d, &[m + k, i + j - k, d - i - j])
                .expect("multinomial parts are nonnegative in range");
            acc += sign_pow(i + j + k) * coeff * &rows[k as usize][j as usize];
        }
    }
    acc
}

/// Row `c_{m,d}^0 ..` computed bottom-up from the recursion, memoized per `m` over all `k <= d`.
pub fn recursive_row(m: i64, d: i64) -> Result<Vec<Integer>> {
    check_range(m, d, 0)?;
    if let Some(rows) = recursion_memo().read().unwrap().get(&m) {
        if let Some(row) = rows.get(d as usize) {
            return Ok(row.clone());
        }
    }
    let mut memo = recursion_memo().write().unwrap();
    let rows = memo.entry(m).or_insert_with(|| vec![Vec::new()]);
    while rows.len() <= d as usize {
        let k = rows.len() as i64;
        let row = (0..=top_index(k))
            .map(|i| recursion_step(m, k, i, rows))
            .collect();
        rows.push(row);
    }
    Ok(rows[d as usize].clone())
}

/// Coefficient from the defining recursion over smaller ranks.
pub fn c_recursive(m: i64, d: i64, i: i64) -> Result<Rational> {
    check_range(m, d, i)?;
    Ok(ri(recursive_row(m, d)?[i as usize].clone()))
}

/// Summand `h` of the hook-length closed form (`e = m + d - i - h`).
pub fn hook_term(m: i64, d: i64, i: i64, h: i64) -> Rational {
    let e = m + d - i - h;
    let num = r(e - i - h + 1) * fact(m + d);
    let den = r(e) * r(e + 1) * r(i + h) * r(i + h - 1);
    num / den * inv_factorial(e - i) * inv_factorial(h - 1) * inv_factorial(i) * inv_factorial(i - 1)
}

/// Closed form as a sum of hook-length dimensions; `extended_bound` sums `h` up to `m`
/// instead of `min(m, d - 2i)`, which must not change the value.
pub fn c_hook_form(m: i64, d: i64, i: i64, extended_bound: bool) -> Result<Rational> {
    check_range(m, d, i)?;
    if i == 0 {
        return Err(invalid!("hook-length form is stated for i >= 1"));
    }
    let upper = if extended_bound { m } else { m.min(d - 2 * i) };
    Ok((1..=upper).map(|h| hook_term(m, d, i, h)).sum())
}

/// Inner alternating sum of the alternating closed form (without the `binom(d+m, i)` prefactor).
pub fn alternating_inner(m: i64, d: i64, i: i64) -> Rational {
    (1..=m)
        .map(|h| {
            let n = d - h - i + m;
            ri(sign_pow(h + 1)) * r(h) / r(n) * b(n, d - 2 * i - h) * b(m + i, m - h)
        })
        .sum()
}

/// Alternating closed form.
pub fn c_alternating(m: i64, d: i64, i: i64) -> Result<Rational> {
    check_range(m, d, i)?;
    Ok(b(d + m, i) * alternating_inner(m, d, i))
}

/// Inner sum of the positive closed form (without the `binom(d+m, i)` prefactor).
pub fn positive_inner(m: i64, d: i64, i: i64) -> Rational {
    let s: Rational = (0..m)
        .map(|h| b(d - i + h, h + i + 1) * b(i - 1 + h, h))
        .sum();
    s / r(d - i)
}

/// Manifestly positive closed form.
pub fn c_positive(m: i64, d: i64, i: i64) -> Result<Rational> {
    check_range(m, d, i)?;
    Ok(b(d + m, i) * positive_inner(m, d, i))
}

/// Coefficient `c_{m,d}^i` by the given route. The hook route sends `i = 0` to the
/// positive form, since the hook-length sum is not defined there.
pub fn coefficient(m: i64, d: i64, i: i64, route: Route) -> Result<Rational> {
    match route {
        Route::Recursive => c_recursive(m, d, i),
        Route::Hook if i == 0 => c_positive(m, d, i),
        Route::Hook => c_hook_form(m, d, i, false),
        Route::Alternating => c_alternating(m, d, i),
        Route::Positive => c_positive(m, d, i),
    }
}

fn integral_coefficient(m: i64, d: i64, i: i64, route: Route) -> Result<Integer> {
    let q = coefficient(m, d, i, route)?;
    match to_integer(&q) {
        Some(z) if !z.is_negative() => Ok(z),
        _ => Err(integrity!(
            "{route} route gave non-integral or negative c({m},{d},{i}) = {q}"
        )),
    }
}

/// `P_{U_{m,d}}(t)` assembled from one route.
pub fn kl_poly(m: i64, d: i64, route: Route) -> Result<Poly> {
    check_range(m, d, 0)?;
    let coeffs = (0..=top_index(d))
        .map(|i| integral_coefficient(m, d, i, route))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_integers(&coeffs))
}

type Entries = HashMap<(i64, i64, i64), (Integer, Route)>;

/// Concurrent-read cache of computed coefficients with the route that first produced each.
///
/// Any later computation by a different route that disagrees is an integrity failure.
#[derive(Debug, Default)]
pub struct KlTable {
    entries: RwLock<Entries>,
}

impl KlTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, m: i64, d: i64, i: i64) -> Option<(Integer, Route)> {
        self.entries.read().unwrap().get(&(m, d, i)).cloned()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Records `value` for `(m, d, i)`, failing if a different value is already stored.
    pub fn record(&self, m: i64, d: i64, i: i64, value: Integer, route: Route) -> Result<()> {
        let mut entries = self.entries.write().unwrap();
        match entries.get(&(m, d, i)) {
            Some((v, first)) if *v != value => Err(integrity!(
                "c({m},{d},{i}): {route} route gave {value}, {first} route gave {v}"
            )),
            Some(_) => Ok(()),
            None => {
                entries.insert((m, d, i), (value, route));
                Ok(())
            }
        }
    }

    pub fn coefficient(&self, m: i64, d: i64, i: i64, route: Route) -> Result<Integer> {
        let v = integral_coefficient(m, d, i, route)?;
        self.record(m, d, i, v.clone(), route)?;
        Ok(v)
    }

    pub fn kl_poly(&self, m: i64, d: i64, route: Route) -> Result<Poly> {
        check_range(m, d, 0)?;
        let coeffs = (0..=top_index(d))
            .map(|i| self.coefficient(m, d, i, route))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_integers(&coeffs))
    }
}

/// Per-instance result of the four-route comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteRow {
    pub m: i64,
    pub d: i64,
    pub i: i64,
    pub recursive: Rational,
    pub hook: Option<Rational>,
    pub hook_extended: Option<Rational>,
    pub alternating: Rational,
    pub positive: Rational,
}

impl RouteRow {
    pub fn compute(m: i64, d: i64, i: i64) -> Result<Self> {
        let (hook, hook_extended) = if i >= 1 {
            (
                Some(c_hook_form(m, d, i, false)?),
                Some(c_hook_form(m, d, i, true)?),
            )
        } else {
            (None, None)
        };
        Ok(RouteRow {
            m,
            d,
            i,
            recursive: c_recursive(m, d, i)?,
            hook,
            hook_extended,
            alternating: c_alternating(m, d, i)?,
            positive: c_positive(m, d, i)?,
        })
    }

    /// All routes equal and the common value a nonnegative integer.
    pub fn agrees(&self) -> bool {
        let v = &self.recursive;
        v.is_integer()
            && !v.is_negative()
            && self.hook.as_ref().is_none_or(|h| h == v)
            && self.hook_extended.as_ref().is_none_or(|h| h == v)
            && &self.alternating == v
            && &self.positive == v
    }

    pub fn witness(&self) -> serde_json::Value {
        let s = |q: &Rational| crate::arith::render_rational(q);
        json!({
            "m": self.m, "d": self.d, "i": self.i,
            "recursive": s(&self.recursive),
            "hook": self.hook.as_ref().map(s),
            "hook_extended": self.hook_extended.as_ref().map(s),
            "alternating": s(&self.alternating),
            "positive": s(&self.positive),
        })
    }
}

/// All `(m, d, i)` with `1 <= m <= m_max`, `1 <= d <= d_max` and `i` in range, in key order.
pub fn grid(m_max: i64, d_max: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for d in 1..=d_max {
            for i in 0..=top_index(d) {
                out.push((m, d, i));
            }
        }
    }
    out
}

/// Computes every route on the grid (parallel over `m` columns), in key order.
pub fn route_table(m_max: i64, d_max: i64) -> Result<Vec<RouteRow>> {
    let cols: Vec<Vec<RouteRow>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut col = Vec::new();
            for d in 1..=d_max {
                for i in 0..=top_index(d) {
                    col.push(RouteRow::compute(m, d, i)?);
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    Ok(cols.into_iter().flatten().collect())
}

/// Four-route agreement over the grid.
pub fn verify_routes(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let rows = route_table(m_max, d_max)?;
    let failure = rows.iter().find(|row| !row.agrees()).map(RouteRow::witness);
    Ok(grid_certificate(
        format!("kl four-route agreement m<={m_max} d<={d_max}"),
        Method::Identity,
        rows.len(),
        failure,
    ))
}

/// First auxiliary sum of the alternating-form proof.
pub fn proof_p(m: i64, d: i64, i: i64) -> Rational {
    (1..=m)
        .map(|h| {
            ri(sign_pow(i + h + 1)) * r(h) * fact(d - h - i + m - 1)
                * inv_factorial(h + i)
                * inv_factorial(m - h)
                * inv_factorial(d - 2 * i - h)
        })
        .sum()
}

/// Second auxiliary sum of the alternating-form proof.
pub fn proof_q(m: i64, d: i64, i: i64) -> Rational {
    (0..=i)
        .map(|j| {
            ri(sign_pow(j + 1)) * r(i - j) * fact(m + d - i)
                / (r(i + m) * r(j + m))
                * inv_factorial(j)
                * inv_factorial(d - i - j)
                * inv_factorial(m - 1)
        })
        .sum()
}

/// The difference `p_{m+1} - p_m` (equivalently `q_{m+1} - q_m`) as produced by the
/// creative-telescoping certificates; only meaningful for `i >= 1`.
pub fn proof_pq_step(m: i64, d: i64, i: i64) -> Rational {
    ri(sign_pow(i)) * fact(d - i + m)
        / (r(d - i) * r(i + m) * r(i + m + 1))
        * inv_factorial(i - 1)
        * inv_factorial(m)
        * inv_factorial(d - 2 * i - 1)
}

/// Inner sum of the hook-length form after pulling out `binom(d+m, i)`, summed to `h = m`.
pub fn hook_inner(m: i64, d: i64, i: i64) -> Rational {
    (1..=m)
        .map(|h| {
            let e = m + d - i - h;
            r(e - i - h + 1) * fact(m + d - i) / (r(e) * r(e + 1) * r(i + h) * r(i + h - 1))
                * inv_factorial(e - i)
                * inv_factorial(h - 1)
                * inv_factorial(i - 1)
        })
        .sum()
}

/// Common increment `f_{m+1} - f_m` of the inner sums.
pub fn inner_step(m: i64, d: i64, i: i64) -> Rational {
    b(d - i + m, m + i + 1) * b(i - 1 + m, m) / r(d - i)
}

/// Common value of the inner sums at `m = 1`.
pub fn inner_base(d: i64, i: i64) -> Rational {
    b(d - i, i + 1) / r(d - i)
}

fn identity_failures(m: i64, d: i64, i: i64) -> Option<serde_json::Value> {
    let s = crate::arith::render_rational;
    let mut checks: Vec<(&str, Rational, Rational)> = Vec::new();
    checks.push(("p_m - q_m = 1", proof_p(m, d, i) - proof_q(m, d, i), Rational::one()));
    if i >= 1 {
        checks.push((
            "p_{m+1} - p_m",
            proof_p(m + 1, d, i) - proof_p(m, d, i),
            proof_pq_step(m, d, i),
        ));
        checks.push((
            "q_{m+1} - q_m",
            proof_q(m + 1, d, i) - proof_q(m, d, i),
            proof_pq_step(m, d, i),
        ));
    }
    let step = inner_step(m, d, i);
    checks.push((
        "alternating inner step",
        alternating_inner(m + 1, d, i) - alternating_inner(m, d, i),
        step.clone(),
    ));
    checks.push((
        "positive inner step",
        positive_inner(m + 1, d, i) - positive_inner(m, d, i),
        step.clone(),
    ));
    if i >= 1 {
        checks.push((
            "hook inner step",
            hook_inner(m + 1, d, i) - hook_inner(m, d, i),
            step,
        ));
    }
    if m == 1 {
        let base = inner_base(d, i);
        checks.push(("alternating inner base", alternating_inner(1, d, i), base.clone()));
        checks.push(("positive inner base", positive_inner(1, d, i), base.clone()));
        if i >= 1 {
            checks.push(("hook inner base", hook_inner(1, d, i), base));
        }
    }
    checks
        .into_iter()
        .find(|(_, lhs, rhs)| lhs != rhs)
        .map(|(name, lhs, rhs)| {
            json!({"check": name, "m": m, "d": d, "i": i, "lhs": s(&lhs), "rhs": s(&rhs)})
        })
}

/// Exhaustive exact check of the proof-internal identities on the grid.
pub fn verify_proof_identities(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let cells = grid(m_max, d_max);
    let failure = cells
        .par_iter()
        .find_map_first(|&(m, d, i)| identity_failures(m, d, i));
    Ok(grid_certificate(
        format!("kl proof identities m<={m_max} d<={d_max}"),
        Method::Identity,
        cells.len(),
        failure,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    #[test]
    fn recursive_examples() {
        assert_eq!(c_recursive(1, 1, 0).unwrap(), r(1));
        for m in 1..=10 {
            for d in 1..=10 {
                assert_eq!(c_recursive(m, d, 0).unwrap(), r(1));
            }
        }
        assert_eq!(c_recursive(1, 3, 1).unwrap(), r(2));
        assert!(c_recursive(1, 3, 2).is_err());
        assert!(c_recursive(0, 3, 0).is_err());
    }

    #[test]
    fn hook_examples() {
        // single term h=1, e=3: 2 * 120 / 48
        assert_eq!(c_hook_form(2, 3, 1, false).unwrap(), r(5));
        assert_eq!(c_hook_form(1, 3, 1, false).unwrap(), r(2));
        assert_eq!(
            c_hook_form(4, 4, 1, false).unwrap(),
            c_hook_form(4, 4, 1, true).unwrap()
        );
        assert!(c_hook_form(2, 3, 0, false).is_err());
    }

    #[test]
    fn alternating_examples() {
        assert_eq!(c_alternating(1, 1, 0).unwrap(), r(1));
        assert_eq!(c_alternating(2, 3, 1).unwrap(), r(5));
        assert_eq!(c_alternating(3, 7, 2).unwrap(), c_recursive(3, 7, 2).unwrap());
    }

    #[test]
    fn positive_examples() {
        assert_eq!(c_positive(1, 5, 2).unwrap(), r(5));
        assert_eq!(c_positive(2, 3, 1).unwrap(), r(5));
        for m in 1..=6 {
            for d in 1..=9 {
                assert_eq!(c_positive(m, d, 0).unwrap(), r(1));
            }
        }
    }

    #[test]
    fn kl_poly_examples() {
        assert_eq!(kl_poly(1, 3, Route::Recursive).unwrap(), Poly::from_ints(&[1, 2]));
        for route in [Route::Hook, Route::Alternating, Route::Positive] {
            assert_eq!(kl_poly(2, 3, route).unwrap(), Poly::from_ints(&[1, 5]));
        }
        assert_eq!(kl_poly(1, 5, Route::Positive).unwrap(), Poly::from_ints(&[1, 9, 5]));
    }

    #[test]
    fn table_detects_disagreement() {
        let table = KlTable::new();
        table.kl_poly(2, 5, Route::Recursive).unwrap();
        table.kl_poly(2, 5, Route::Hook).unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.get(2, 5, 1).unwrap().1, Route::Recursive);
        let err = table.record(2, 5, 1, Integer::from(1), Route::Positive);
        assert!(matches!(err, Err(crate::error::Error::Integrity(_))));
    }

    #[test]
    fn proof_sum_examples() {
        assert_eq!(proof_p(1, 5, 2) - proof_q(1, 5, 2), r(1));
        // m=1, d=7, i=3 base case: (1/4) binom(4,4)
        assert_eq!(inner_base(7, 3), frac(1, 4));
        assert_eq!(alternating_inner(1, 7, 3), frac(1, 4));
        assert_eq!(positive_inner(1, 7, 3), frac(1, 4));
        assert_eq!(hook_inner(1, 7, 3), frac(1, 4));
    }

    #[test]
    fn identities_small_grid() {
        let cert = verify_proof_identities(3, 9).unwrap();
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn route_names_roundtrip() {
        for route in Route::ALL {
            assert_eq!(route.name().parse::<Route>().unwrap(), route);
        }
        assert!("fast".parse::<Route>().is_err());
    }
}
