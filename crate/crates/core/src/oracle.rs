//! Ground truth straight from the lattice of flats: Möbius values, characteristic
//! polynomials, and the KL and Z-polynomials solved from their defining identities.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{binomial, Integer, Rational};
use crate::certificate::{grid_certificate, Certificate, Method};
use crate::error::{invalid, Result};
use crate::klcoeff::{kl_poly, Route};
use crate::polyring::Poly;
use crate::zcoeff::z_from_kl;

/// Largest ground set the explicit path will enumerate subsets of.
pub const EXPLICIT_MAX_GROUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitLattice {
    ground: usize,
    /// Sorted by rank, then mask. `flats[0]` is the bottom, the last one is the top.
    flats: Vec<(u32, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankedLattice {
    /// Lattice of flats of `U_{m,d}`, grouped by rank.
    Uniform { m: usize, d: usize },
    Explicit(ExplicitLattice),
}

impl ExplicitLattice {
    /// Closure of every subset under `rank`, deduplicated.
    pub fn from_rank_fn(ground: usize, rank: impl Fn(u32) -> usize + Sync) -> Result<Self> {
        if ground > EXPLICIT_MAX_GROUND {
            return Err(invalid!("ground set of size {ground} is too large to enumerate"));
        }
        let closure = |s: u32| {
            let r = rank(s);
            (0..ground)
                .map(|e| 1u32 << e)
                .filter(|&b| s & b != 0 || rank(s | b) == r)
                .fold(0u32, |acc, b| acc | b)
        };
        let set: HashSet<u32> = (0..1u32 << ground).into_par_iter().map(closure).collect();
        let flats = set.into_iter().map(|f| (f, rank(f))).collect();
        Self::from_flats(ground, flats)
    }

    pub fn from_flats(ground: usize, mut flats: Vec<(u32, usize)>) -> Result<Self> {
        if ground > EXPLICIT_MAX_GROUND {
            return Err(invalid!("ground set of size {ground} is too large"));
        }
        flats.sort_by_key(|&(f, r)| (r, f));
        flats.dedup();
        let (Some(&(bottom, r0)), Some(&(top, rtop))) = (flats.first(), flats.last()) else {
            return Err(invalid!("lattice has no flats"));
        };
        if r0 != 0 {
            return Err(invalid!("bottom flat has rank {r0}"));
        }
        if flats.iter().any(|&(f, _)| f & bottom != bottom || f & top != f) {
            return Err(invalid!("flats do not have a unique bottom and top"));
        }
        if flats.iter().filter(|&&(_, r)| r == rtop).count() != 1 {
            return Err(invalid!("top rank {rtop} is shared by several flats"));
        }
        for (a, &(fa, ra)) in flats.iter().enumerate() {
            for &(fb, rb) in &flats[a + 1..] {
                if fa != fb && fa & fb == fa && ra >= rb {
                    return Err(invalid!("rank does not increase from {fa:#b} to {fb:#b}"));
                }
            }
        }
        Ok(ExplicitLattice { ground, flats })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn flats(&self) -> &[(u32, usize)] {
        &self.flats
    }

    pub fn rank(&self) -> usize {
        self.flats.last().map_or(0, |&(_, r)| r)
    }

    /// `μ(bottom, F)` for every flat, in lattice order.
    pub fn mobius(&self) -> Vec<Integer> {
        let mut mu: Vec<Integer> = Vec::with_capacity(self.flats.len());
        for (a, &(fa, _)) in self.flats.iter().enumerate() {
            if a == 0 {
                mu.push(Integer::one());
                continue;
            }
            let below: Integer = self.flats[..a]
                .iter()
                .zip(&mu)
                .filter(|&(&(fb, _), _)| fb & fa == fb)
                .map(|(_, v)| v)
                .sum();
            mu.push(-below);
        }
        mu
    }

    /// Upper interval above `flat`, relabelled onto a smaller ground set with ranks shifted.
    pub fn interval_above(&self, flat: u32) -> Result<ExplicitLattice> {
        let base = self
            .flats
            .iter()
            .find(|&&(f, _)| f == flat)
            .map(|&(_, r)| r)
            .ok_or_else(|| invalid!("{flat:#b} is not a flat"))?;
        let rest: Vec<usize> = (0..self.ground).filter(|e| flat >> e & 1 == 0).collect();
        let squash = |f: u32| {
            rest.iter()
                .enumerate()
                .filter(|&(_, &e)| f >> e & 1 == 1)
                .fold(0u32, |acc, (k, _)| acc | 1 << k)
        };
        let flats = self
            .flats
            .iter()
            .filter(|&&(f, _)| f & flat == flat)
            .map(|&(f, r)| (squash(f), r - base))
            .collect();
        ExplicitLattice::from_flats(rest.len(), flats)
    }
}

/// `μ_k` shared by every rank-`k` proper flat of a uniform matroid (each is Boolean below).
fn uniform_proper_mobius(d: usize) -> Vec<Integer> {
    let mut mu: Vec<Integer> = Vec::with_capacity(d);
    for k in 0..d {
        if k == 0 {
            mu.push(Integer::one());
            continue;
        }
        let below: Integer = (0..k)
            .map(|j| binomial(k as i64, j as i64).expect("k >= 0") * &mu[j])
            .sum();
        mu.push(-below);
    }
    mu
}

/// `Σ_F μ(0, F) t^(r - rk F)`.
pub fn char_poly(lattice: &RankedLattice) -> Poly {
    match lattice {
        RankedLattice::Uniform { m, d } => {
            let (n, d) = ((m + d) as i64, *d);
            if d == 0 {
                return Poly::one();
            }
            let mu = uniform_proper_mobius(d);
            let mut coeffs = vec![Rational::zero(); d + 1];
            let mut top = Integer::zero();
            for (k, mk) in mu.iter().enumerate() {
                let weighted = binomial(n, k as i64).expect("n >= 0") * mk;
                top -= &weighted;
                coeffs[d - k] = Rational::from_integer(weighted);
            }
            coeffs[0] = Rational::from_integer(top);
            Poly::from_coeffs(coeffs)
        }
        RankedLattice::Explicit(l) => {
            let r = l.rank();
            let mut coeffs = vec![Rational::zero(); r + 1];
            for (&(_, rk), mu) in l.flats.iter().zip(l.mobius()) {
                coeffs[r - rk] += Rational::from_integer(mu);
            }
            Poly::from_coeffs(coeffs)
        }
    }
}

type Memo = Mutex<HashMap<(usize, usize), (Poly, bool)>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn uniform_char(m: usize, d: usize) -> Poly {
    char_poly(&RankedLattice::Uniform { m, d })
}

/// Solves for `P_{U_{m,d}}` given `P` for every contraction `U_{m,d-k}`, `k >= 1`.
fn solve_kl(m: usize, d: usize) -> (Poly, bool) {
    if d == 0 {
        return (Poly::one(), true);
    }
    let n = (m + d) as i64;
    let contractions: Vec<Poly> = {
        let table = memo().lock().expect("memo poisoned");
        (1..d).map(|k| table[&(m, d - k)].0.clone()).collect()
    };
    let r = (1..d)
        .into_par_iter()
        .map(|k| {
            let mult = Rational::from_integer(binomial(n, k as i64).expect("n >= 0"));
            (&uniform_char(0, k) * &contractions[k - 1]).scale(&mult)
        })
        .reduce(Poly::zero, |a, b| a + b)
        + uniform_char(m, d);
    let p = Poly::from_coeffs((0..d.div_ceil(2)).map(|j| r.coeff(d - j)).collect());
    let consistent = p.reverse(d).map(|rev| &rev - &p == r).unwrap_or(false);
    (p, consistent)
}

/// `P_{U_{m,d}}` from the defining identity, plus whether the low half of the identity
/// also closed.
pub fn kl_defining(m: i64, d: i64) -> Result<(Poly, bool)> {
    if m < 1 || d < 1 {
        return Err(invalid!("need m, d >= 1, got ({m}, {d})"));
    }
    let (m, d) = (m as usize, d as usize);
    for dd in 0..=d {
        if memo().lock().expect("memo poisoned").contains_key(&(m, dd)) {
            continue;
        }
        let solved = solve_kl(m, dd);
        memo().lock().expect("memo poisoned").entry((m, dd)).or_insert(solved);
    }
    Ok(memo().lock().expect("memo poisoned")[&(m, d)].clone())
}

/// `Σ_F t^(rk F) P_{M^F}(t)` grouped by rank.
pub fn z_defining(m: i64, d: i64) -> Result<Poly> {
    kl_defining(m, d)?;
    let n = m + d;
    let table = memo().lock().expect("memo poisoned");
    let mut z = Poly::monomial(Rational::one(), d as usize);
    for k in 0..d {
        let p = &table[&(m as usize, (d - k) as usize)].0;
        z += &p.shift_up(k as usize).scale(&Rational::from_integer(binomial(n, k)?));
    }
    Ok(z)
}

/// Compares the lattice-derived `P` and `Z` with every formula route on `cells`.
pub fn oracle_agreement(cells: &[(i64, i64)]) -> Result<Certificate> {
    // fill the memo per m in increasing d so parallel cells only read
    let mut ms: Vec<i64> = cells.iter().map(|&(m, _)| m).collect();
    ms.sort_unstable();
    ms.dedup();
    ms.par_iter()
        .map(|&m| {
            let d_max = cells.iter().filter(|c| c.0 == m).map(|c| c.1).max().unwrap_or(1);
            kl_defining(m, d_max).map(|_| ())
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = cells
        .par_iter()
        .map(|&(m, d)| -> Result<Option<serde_json::Value>> {
            let (p, consistent) = kl_defining(m, d)?;
            if !consistent {
                return Ok(Some(json!({"check": "defining identity low half", "m": m, "d": d})));
            }
            for route in Route::ALL {
                let q = kl_poly(m, d, route)?;
                if q != p {
                    return Ok(Some(json!({"check": "kl", "m": m, "d": d, "route": route.name(),
                        "oracle": p.render("t"), "formula": q.render("t")})));
                }
            }
            let z = z_defining(m, d)?;
            let zf = z_from_kl(m, d)?;
            Ok((z != zf).then(|| {
                json!({"check": "z", "m": m, "d": d,
                    "oracle": z.render("t"), "formula": zf.render("t")})
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(grid_certificate(
        format!("lattice oracle agreement on {} cells", cells.len()),
        Method::Identity,
        cells.len(),
        failures.into_iter().flatten().next(),
    ))
}

/// Lattice of flats of `U_{m,d}` from its rank function by explicit closure.
pub fn uniform_by_closure(m: usize, d: usize) -> Result<ExplicitLattice> {
    ExplicitLattice::from_rank_fn(m + d, |s| (s.count_ones() as usize).min(d))
}

fn rank_profile(l: &ExplicitLattice) -> Vec<usize> {
    let mut counts = vec![0; l.rank() + 1];
    for &(_, r) in l.flats() {
        counts[r] += 1;
    }
    counts
}

fn audit_one(m: usize, d: usize) -> Result<Option<serde_json::Value>> {
    let n = m + d;
    let at = json!({"m": m, "d": d});
    let l = uniform_by_closure(m, d)?;
    let all = (1u32 << n) - 1;
    let flat_set: HashSet<u32> = l.flats().iter().map(|&(f, _)| f).collect();
    let proper: Vec<(u32, usize)> = l.flats().iter().copied().filter(|&(f, _)| f != all).collect();
    let expected_proper: usize = (0..d).map(|k| binomial(n as i64, k as i64).unwrap()).sum::<Integer>().try_into().unwrap_or(usize::MAX);
    if l.flats().last() != Some(&(all, d))
        || proper.len() != expected_proper
        || proper.iter().any(|&(f, r)| f.count_ones() as usize != r || r >= d)
    {
        return Ok(Some(json!({"check": "proper flats are the subsets of size < d", "at": at,
            "flats": l.flats().len()})));
    }
    if char_poly(&RankedLattice::Explicit(l.clone())) != uniform_char(m, d) {
        return Ok(Some(json!({"check": "explicit and rank-grouped characteristic polynomials", "at": at})));
    }
    for &(f, k) in l.flats() {
        let boolean = if f == all {
            true
        } else {
            let mut sub = f;
            loop {
                if !flat_set.contains(&sub) {
                    break false;
                }
                if sub == 0 {
                    break true;
                }
                sub = (sub - 1) & f;
            }
        };
        if !boolean {
            return Ok(Some(json!({"check": "restriction is Boolean", "at": at, "flat": f, "rank": k})));
        }
        let contraction = l.interval_above(f)?;
        let target = uniform_by_closure(m, d - k)?;
        if rank_profile(&contraction) != rank_profile(&target)
            || char_poly(&RankedLattice::Explicit(contraction)) != uniform_char(m, d - k)
        {
            return Ok(Some(json!({"check": "contraction matches U_{m,d-k}", "at": at, "flat": f, "rank": k})));
        }
    }
    Ok(None)
}

/// Rebuilds every `U_{m,d}` with `m + d <= n_max` by explicit closure and checks the
/// structural facts the rank-grouped path relies on.
pub fn restriction_contraction_audit(n_max: usize) -> Result<Certificate> {
    if n_max > 12 {
        return Err(invalid!("n_max must be at most 12, got {n_max}"));
    }
    let cases: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|d| (0..=n_max - d).map(move |m| (m, d)))
        .collect();
    let results = cases
        .par_iter()
        .map(|&(m, d)| audit_one(m, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(grid_certificate(
        format!("restriction/contraction audit m+d<={n_max}"),
        Method::Identity,
        cases.len(),
        results.into_iter().flatten().next(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(uniform_char(1, 2), poly(&[2, -3, 1]));
        let free = poly(&[-1, 1]);
        for k in 0..6 {
            assert_eq!(uniform_char(0, k), free.pow(k as u32));
        }
        for m in 0..4 {
            for d in 1..6 {
                assert!(uniform_char(m, d).eval(&Rational::one()).is_zero());
            }
        }
    }

    #[test]
    fn explicit_matches_uniform() {
        for n in 1..=8 {
            for d in 1..=n {
                let l = uniform_by_closure(n - d, d).unwrap();
                assert_eq!(char_poly(&RankedLattice::Explicit(l)), uniform_char(n - d, d));
            }
        }
    }

    #[test]
    fn closure_examples() {
        let l = uniform_by_closure(1, 2).unwrap();
        let proper: Vec<u32> = l.flats().iter().filter(|&&(_, r)| r < 2).map(|&(f, _)| f).collect();
        assert_eq!(proper, vec![0, 1, 2, 4]);
        assert_eq!(uniform_by_closure(0, 3).unwrap().flats().len(), 8);
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_defining(1, 2).unwrap(), (Poly::one(), true));
        assert_eq!(kl_defining(2, 3).unwrap(), (poly(&[1, 5]), true));
        for m in 1..=10 {
            assert_eq!(kl_defining(m, 1).unwrap(), (Poly::one(), true));
        }
        assert!(kl_defining(0, 2).is_err());
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_defining(1, 2).unwrap(), poly(&[1, 3, 1]));
        assert_eq!(z_defining(2, 3).unwrap(), poly(&[1, 10, 10, 1]));
        assert_eq!(z_defining(3, 1).unwrap(), poly(&[1, 1]));
    }

    #[test]
    fn invalid_lattices() {
        assert!(ExplicitLattice::from_flats(2, vec![(0, 0), (1, 1), (2, 1)]).is_err());
        assert!(ExplicitLattice::from_flats(1, vec![(0, 0), (1, 0)]).is_err());
        assert!(restriction_contraction_audit(13).is_err());
    }

    #[test]
    fn agreement_small() {
        let cells: Vec<(i64, i64)> = (1..=4).flat_map(|m| (1..=10).map(move |d| (m, d))).collect();
        assert!(oracle_agreement(&cells).unwrap().passed());
    }

    #[test]
    fn audit_small() {
        assert!(restriction_contraction_audit(8).unwrap().passed());
    }
}
