//! Exact real-root counting and real-rootedness certificates: Sturm chains, Hurwitz
//! determinants, the n-sequence test, and multiplier-sequence spot checks.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{binomial, binomial_ext, frac, rat, render_rational, Rational};
use crate::certificate::{Certificate, Method};
use crate::error::{integrity, invalid, Result};
use crate::polyring::{det_parametric, det_rational, row_degree_bound, ParamPoly, Poly};
use crate::seqfactor::{gy_poly, gy_poly_symbolic, Family, SeqSpec};

/// Endpoint on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInf => 0,
            Bound::Finite(_) => 1,
            Bound::PosInf => 2,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        })
    }
}

impl From<Rational> for Bound {
    fn from(q: Rational) -> Self {
        Bound::Finite(q)
    }
}

fn sign_at(p: &Poly, x: &Bound) -> i8 {
    let s = match x {
        Bound::Finite(q) => p.eval(q),
        Bound::PosInf => p.leading().cloned().unwrap_or_default(),
        Bound::NegInf => {
            let l = p.leading().cloned().unwrap_or_default();
            if p.degree().unwrap_or(0) % 2 == 1 { -l } else { l }
        }
    };
    if s.is_positive() {
        1
    } else if s.is_negative() {
        -1
    } else {
        0
    }
}

/// `p / gcd(p, p')`, made primitive.
pub fn squarefree_part(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).expect("gcd of a nonzero polynomial is nonzero").0.primitive()
}

/// Sturm chain of the squarefree part of `p`.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let s = squarefree_part(p);
    let mut chain = vec![s.clone(), s.derivative().primitive()];
    while let Some(last) = chain.last().filter(|q| !q.is_zero()) {
        let prev = &chain[chain.len() - 2];
        let r = prev.div_rem(last).expect("nonzero divisor").1;
        chain.push((-r).primitive());
    }
    chain.pop();
    chain
}

fn variations(chain: &[Poly], x: &Bound) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]`.
///
/// `V(-inf) - V(x)` counts the roots `<= x` even when `x` is itself a root, so endpoints
/// need no perturbation.
pub fn sturm_count(p: &Poly, a: &Bound, b: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(invalid!("Sturm count of the zero polynomial"));
    }
    if a >= b {
        return Err(invalid!("empty interval ({a:?}, {b:?}]"));
    }
    let chain = sturm_chain(p);
    Ok(variations(&chain, a) - variations(&chain, b))
}

/// `p = prod q_j^j` with squarefree, pairwise coprime, monic `q_j` (constants omitted).
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if p.is_zero() {
        return Err(invalid!("squarefree decomposition of the zero polynomial"));
    }
    // layers[j] = product of the factors of multiplicity > j
    let mut layers = Vec::new();
    let mut g = p.monic();
    while g.degree().unwrap_or(0) > 0 {
        let next = g.gcd(&g.derivative());
        layers.push(g.div_rem(&next).expect("nonzero").0);
        g = next;
    }
    layers.push(Poly::one());
    Ok(layers
        .windows(2)
        .enumerate()
        .map(|(j, w)| (w[0].div_rem(&w[1]).expect("nonzero").0, j + 1))
        .filter(|(q, _)| q.degree().unwrap_or(0) > 0)
        .collect())
}

/// Real roots in `(a, b]` counted with multiplicity.
pub fn count_with_multiplicity(p: &Poly, a: &Bound, b: &Bound) -> Result<usize> {
    squarefree_decomposition(p)?
        .iter()
        .try_fold(0, |acc, (q, j)| Ok(acc + j * sturm_count(q, a, b)?))
}

fn zero() -> Bound {
    Bound::Finite(Rational::zero())
}

/// Passes iff every complex zero of `p` is real and negative.
pub fn all_zeros_real_negative(p: &Poly) -> Result<Certificate> {
    certify_negative_zeros(p.render("t"), p)
}

/// [`all_zeros_real_negative`] with a caller-chosen subject.
pub fn certify_negative_zeros(subject: impl Into<String>, p: &Poly) -> Result<Certificate> {
    if p.is_zero() {
        return Err(invalid!("the zero polynomial has no well-defined zeros"));
    }
    if p.coeff(0).is_zero() {
        return Err(invalid!("p(0) = 0: zero is a root"));
    }
    let degree = p.degree().unwrap_or(0);
    let negative = count_with_multiplicity(p, &Bound::NegInf, &zero())?;
    let distinct = sturm_count(p, &Bound::NegInf, &zero())?;
    let witness = json!({
        "degree": degree,
        "negative_roots": negative,
        "distinct_negative_roots": distinct,
        "polynomial": p.render("t"),
    });
    Ok(if negative == degree {
        Certificate::pass(subject, Method::Sturm, Some(witness))
    } else {
        Certificate::fail(subject, Method::Sturm, witness)
    })
}

/// The `2k x 2k` staircase matrix: row `2r` holds `a_{c-r}`, row `2r+1` holds `b_{c-r}`,
/// with `a`, `b` listed by descending power and missing entries zero.
pub fn hurwitz_matrix<T: Clone>(a: &[T], b: &[T], k: usize, zero: &T) -> Vec<Vec<T>> {
    let at = |v: &[T], j: isize| {
        if j < 0 { zero.clone() } else { v.get(j as usize).cloned().unwrap_or_else(|| zero.clone()) }
    };
    (0..2 * k)
        .map(|row| {
            let (src, r) = if row % 2 == 0 { (a, row / 2) } else { (b, row / 2) };
            (0..2 * k).map(|c| at(src, c as isize - r as isize)).collect()
        })
        .collect()
}

/// Descending coefficient lists of `a` and `b`, both indexed from `deg a`.
fn descending<P, T>(coeff: impl Fn(&P, usize) -> T, a: &P, b: &P, n: usize) -> (Vec<T>, Vec<T>) {
    (
        (0..=n).map(|j| coeff(a, n - j)).collect(),
        (0..=n).map(|j| coeff(b, n - j)).collect(),
    )
}

/// `Δ_{2k}(A, B)` for numeric polynomials.
pub fn hurwitz_delta(a: &Poly, b: &Poly, k: usize) -> Result<Rational> {
    let n = a.degree().ok_or_else(|| invalid!("Hurwitz determinant of the zero polynomial"))?;
    if k == 0 {
        return Err(invalid!("Hurwitz determinants are indexed from k = 1"));
    }
    let (ad, bd) = descending(|p: &Poly, j| p.coeff(j), a, b, n);
    det_rational(&hurwitz_matrix(&ad, &bd, k, &Rational::zero()))
}

/// `Δ_{2k}(A, B)` for polynomials whose coefficients are polynomials in `d`.
pub fn hurwitz_delta_param(a: &ParamPoly, b: &ParamPoly, k: usize) -> Result<Poly> {
    let n = a.degree().ok_or_else(|| invalid!("Hurwitz determinant of the zero polynomial"))?;
    if k == 0 {
        return Err(invalid!("Hurwitz determinants are indexed from k = 1"));
    }
    let (ad, bd) = descending(|p: &ParamPoly, j| p.coeff(j), a, b, n);
    let m = hurwitz_matrix(&ad, &bd, k, &Poly::zero());
    det_parametric(&m, row_degree_bound(&m))
}

/// Passes iff `Δ_{2k}(A, A') > 0` for `k = 1..=deg A`; the verdict is cross-checked
/// against a Sturm count of distinct real roots.
pub fn distinct_real_certificate(a: &Poly) -> Result<Certificate> {
    let n = match a.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(invalid!("need a polynomial of degree >= 1")),
    };
    let da = a.derivative();
    let deltas = (1..=n)
        .map(|k| hurwitz_delta(a, &da, k))
        .collect::<Result<Vec<_>>>()?;
    let positive = deltas.iter().all(Rational::is_positive);
    let distinct_real = sturm_count(a, &Bound::NegInf, &Bound::PosInf)?;
    let sturm_says = distinct_real == n;
    if positive != sturm_says {
        return Err(integrity!(
            "Hurwitz and Sturm disagree on {}: deltas positive = {positive}, distinct real roots = {distinct_real}",
            a.render("t")
        ));
    }
    let witness = json!({
        "deltas": deltas.iter().map(render_rational).collect::<Vec<_>>(),
        "distinct_real_roots": distinct_real,
    });
    let subject = format!("distinct real zeros of {}", a.render("t"));
    Ok(if positive {
        Certificate::pass(subject, Method::Hurwitz, Some(witness))
    } else {
        Certificate::fail(subject, Method::Hurwitz, witness)
    })
}

fn is_real_rooted(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    Ok(count_with_multiplicity(p, &Bound::NegInf, &Bound::PosInf)? == p.degree().unwrap_or(0))
}

/// `Δ_{2k}(P, P')` of the symbolic `G`/`Y` polynomial, in `d`, for `k = 1..=2(m-1)`.
pub fn symbolic_deltas(family: Family, m: i64) -> Result<Vec<Poly>> {
    if m < 2 {
        return Err(invalid!("need m >= 2, got {m}"));
    }
    let g = gy_poly_symbolic(family, m);
    let dg = g.derivative();
    let n = g.degree().unwrap_or(0);
    (1..=n)
        .into_par_iter()
        .map(|k| hurwitz_delta_param(&g, &dg, k))
        .collect()
}

/// Passes iff every `Δ_{2k}` of the `G`/`Y` polynomial, written in `d' = d - 2(m-1)`, has
/// strictly positive coefficients, and every small case `d < 2(m-1)` is real-rooted.
pub fn hurwitz_positivity_symbolic(family: Family, m: i64) -> Result<Certificate> {
    let shift = rat(2 * (m - 1));
    let deltas: Vec<Poly> = symbolic_deltas(family, m)?
        .iter()
        .map(|p| p.taylor_shift(&shift))
        .collect();
    let subject = format!("Hurwitz positivity of {} for m={m}", family.reduced_name());
    for (k, delta) in deltas.iter().enumerate() {
        let deg = delta.degree().unwrap_or(0);
        if let Some(j) = (0..=deg).find(|&j| !delta.coeff(j).is_positive()) {
            return Ok(Certificate::fail(
                subject,
                Method::Hurwitz,
                json!({"k": k + 1, "coefficient_index": j, "value": render_rational(&delta.coeff(j))}),
            ));
        }
    }
    for d in 1..2 * (m - 1) {
        let p = gy_poly(SeqSpec::new(family, m, d)?);
        if !is_real_rooted(&p)? {
            return Ok(Certificate::fail(
                subject,
                Method::Hurwitz,
                json!({"small_case_d": d, "polynomial": p.render("t")}),
            ));
        }
    }
    Ok(Certificate::pass(
        subject,
        Method::Hurwitz,
        Some(json!({
            "variable": "d' = d - 2(m-1)",
            "deltas": deltas.iter().map(|p| p.render_descending("d'")).collect::<Vec<_>>(),
            "small_cases_checked": (2 * (m - 1) - 1).max(0),
        })),
    ))
}

/// Passes iff `Σ Γ_i binom(d,i) t^i` has only real zeros, all of one sign. A zero root
/// fails and is flagged in the witness.
pub fn n_sequence_test(gamma: &[Rational], d: usize) -> Result<Certificate> {
    if gamma.len() != d + 1 {
        return Err(invalid!("sequence has length {}, expected {}", gamma.len(), d + 1));
    }
    let p = Poly::from_coeffs(
        gamma
            .iter()
            .enumerate()
            .map(|(i, g)| g * Rational::from_integer(binomial(d as i64, i as i64).expect("d >= 0")))
            .collect(),
    );
    let subject = format!("{d}-sequence test");
    if p.is_zero() {
        return Ok(Certificate::fail(subject, Method::Nseq, json!({"polynomial": "0"})));
    }
    let zero_roots = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly::from_coeffs(p.coeffs()[zero_roots..].to_vec());
    let degree = reduced.degree().unwrap_or(0);
    let negative = count_with_multiplicity(&reduced, &Bound::NegInf, &zero())?;
    let positive = count_with_multiplicity(&reduced, &zero(), &Bound::PosInf)?;
    let witness = json!({
        "polynomial": p.render("t"),
        "negative_roots": negative,
        "positive_roots": positive,
        "zero_roots": zero_roots,
        "degree": degree + zero_roots,
    });
    let pass = zero_roots == 0 && (negative == degree || positive == degree);
    Ok(if pass {
        Certificate::pass(subject, Method::Nseq, Some(witness))
    } else {
        Certificate::fail(subject, Method::Nseq, witness)
    })
}

/// Applies `binom(d+2m, i+m)` coefficientwise.
pub fn apply_multiplier(m: i64, d: i64, p: &Poly) -> Poly {
    Poly::from_coeffs(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer(binomial_ext(d + 2 * m, i as i64 + m)))
            .collect(),
    )
}

/// Random real-rooted inputs through the multiplier sequence; seeded by `(m, d)`.
pub fn multiplier_spot_check(m: i64, d: i64, trials: usize) -> Result<Certificate> {
    if trials == 0 || m < 1 || d < 1 {
        return Err(invalid!("need m, d, trials >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(((m as u64) << 32) ^ d as u64);
    let subject = format!("multiplier sequence binom(d+2m, i+m) at m={m} d={d}");
    let max_degree = (d + m).min(8) as usize;
    for trial in 0..trials {
        let j = rng.gen_range(0..=max_degree);
        let roots: Vec<Rational> = (0..j)
            .map(|_| frac(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            .collect();
        let input = roots.iter().fold(Poly::one(), |acc, r| {
            &acc * &Poly::from_coeffs(vec![-r.clone(), Rational::one()])
        });
        let image = apply_multiplier(m, d, &input);
        if !is_real_rooted(&image)? {
            return Ok(Certificate::fail(
                subject,
                Method::Multiplier,
                json!({
                    "trial": trial,
                    "roots": roots.iter().map(render_rational).collect::<Vec<_>>(),
                    "image": image.render("t"),
                }),
            ));
        }
    }
    Ok(Certificate::pass(subject, Method::Multiplier, Some(json!({"trials": trials}))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn q(c: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    #[test]
    fn sturm_examples() {
        let z = zero();
        assert_eq!(sturm_count(&poly(&[1, 5]), &Bound::NegInf, &z).unwrap(), 1);
        assert_eq!(sturm_count(&poly(&[1, 9, 5]), &Bound::NegInf, &z).unwrap(), 2);
        assert_eq!(sturm_count(&poly(&[1, 0, 1]), &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
        assert!(sturm_count(&Poly::zero(), &Bound::NegInf, &z).is_err());
        assert!(sturm_count(&poly(&[1, 1]), &z, &z).is_err());
    }

    #[test]
    fn sturm_endpoint_roots() {
        // (t-1)(t-2)(t-3)
        let p = poly(&[-6, 11, -6, 1]);
        let b = |n| Bound::Finite(rat(n));
        assert_eq!(sturm_count(&p, &b(1), &b(3)).unwrap(), 2);
        assert_eq!(sturm_count(&p, &b(0), &b(1)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &b(1), &b(2)).unwrap(), 1);
        // double root only counted once without multiplicity
        let sq = &poly(&[-1, 1]) * &poly(&[-1, 1]);
        assert_eq!(sturm_count(&sq, &Bound::NegInf, &Bound::PosInf).unwrap(), 1);
        assert_eq!(count_with_multiplicity(&sq, &Bound::NegInf, &Bound::PosInf).unwrap(), 2);
    }

    #[test]
    fn decomposition() {
        // (t+1)^3 (t-2)^2 (t^2+1)
        let p = &(&poly(&[1, 1]).pow(3) * &poly(&[-2, 1]).pow(2)) * &poly(&[1, 0, 1]);
        let dec = squarefree_decomposition(&p).unwrap();
        assert_eq!(
            dec,
            vec![(poly(&[1, 0, 1]), 1), (poly(&[-2, 1]), 2), (poly(&[1, 1]), 3)]
        );
    }

    #[test]
    fn negative_zero_examples() {
        assert!(all_zeros_real_negative(&poly(&[1, 5])).unwrap().passed());
        assert!(all_zeros_real_negative(&poly(&[1, 10, 10, 1])).unwrap().passed());
        let c = all_zeros_real_negative(&poly(&[1, 0, 1])).unwrap();
        assert!(!c.passed() && c.witness.is_some());
        assert!(all_zeros_real_negative(&poly(&[0, 1])).is_err());
        assert!(all_zeros_real_negative(&poly(&[1, 2, 1])).unwrap().passed());
    }

    #[test]
    fn hurwitz_numeric_examples() {
        assert!(distinct_real_certificate(&poly(&[2, -3, 1])).unwrap().passed());
        assert!(!distinct_real_certificate(&poly(&[1, 0, 1])).unwrap().passed());
        assert!(distinct_real_certificate(&poly(&[1, 6, -3])).unwrap().passed());
        assert!(!distinct_real_certificate(&poly(&[1, 2, 1])).unwrap().passed());
        assert!(hurwitz_delta(&Poly::zero(), &Poly::zero(), 1).is_err());
    }

    #[test]
    fn hurwitz_symbolic_in_d() {
        let g = symbolic_deltas(Family::F, 2).unwrap();
        let y = symbolic_deltas(Family::B, 2).unwrap();
        let dm1sq_d2 = &poly(&[-1, 1]).pow(2) * &poly(&[0, 0, 1]);
        assert_eq!(g[0], dm1sq_d2.scale(&frac(1, 2)));
        let g4 = &(&dm1sq_d2 * &Poly::x()) * &poly(&[-8, 9, 2, 1]);
        assert_eq!(g[1], g4.scale(&frac(1, 16)));
        let y4 = &dm1sq_d2 * &poly(&[0, -8, 9, -2, 1]);
        assert_eq!(y[1], y4.scale(&frac(1, 16)));
    }

    #[test]
    fn hurwitz_symbolic_in_d_prime() {
        let cert = hurwitz_positivity_symbolic(Family::F, 2).unwrap();
        assert!(cert.passed());
        let shift = rat(2);
        let g = symbolic_deltas(Family::F, 2).unwrap();
        assert_eq!(g[0].taylor_shift(&shift), q(&[(2, 1), (6, 1), (13, 2), (3, 1), (1, 2)]));
        assert_eq!(
            g[1].taylor_shift(&shift),
            q(&[(13, 1), (60, 1), (233, 2), (124, 1), (1265, 16), (31, 1), (59, 8), (1, 1), (1, 16)])
        );
        let y = symbolic_deltas(Family::B, 2).unwrap();
        assert_eq!(
            y[1].taylor_shift(&shift),
            q(&[(5, 1), (24, 1), (97, 2), (54, 1), (585, 16), (63, 4), (35, 8), (3, 4), (1, 16)])
        );
        assert!(hurwitz_positivity_symbolic(Family::B, 3).unwrap().passed());
        assert!(hurwitz_positivity_symbolic(Family::F, 1).is_err());
    }

    #[test]
    fn symbolic_matches_numeric() {
        let g = gy_poly_symbolic(Family::F, 3);
        let deltas = symbolic_deltas(Family::F, 3).unwrap();
        for d in 1..8 {
            let p = g.eval_inner(&rat(d));
            if p.degree() != g.degree() {
                continue;
            }
            for (k, delta) in deltas.iter().enumerate() {
                assert_eq!(delta.eval(&rat(d)), hurwitz_delta(&p, &p.derivative(), k + 1).unwrap());
            }
        }
    }

    #[test]
    fn n_sequence_examples() {
        let literal = n_sequence_test(&[rat(1), rat(2), rat(2)], 2).unwrap();
        assert_eq!(literal.witness.unwrap()["polynomial"], "1 + 4*t + 2*t^2");
        let f22 = [rat(1), frac(5, 2), rat(3)];
        let c = n_sequence_test(&f22, 2).unwrap();
        assert!(c.passed());
        assert_eq!(c.witness.unwrap()["polynomial"], "1 + 5*t + 3*t^2");
        assert!(n_sequence_test(&vec![rat(1); 6], 5).unwrap().passed());
        assert!(!n_sequence_test(&[rat(1), rat(0), rat(1)], 2).unwrap().passed());
        let zr = n_sequence_test(&[rat(0), rat(1), rat(1)], 2).unwrap();
        assert!(!zr.passed());
        assert_eq!(zr.witness.unwrap()["zero_roots"], 1);
        assert!(n_sequence_test(&[rat(1)], 2).is_err());
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(apply_multiplier(1, 2, &poly(&[1, 2, 1])), poly(&[4, 12, 4]));
        assert_eq!(apply_multiplier(1, 2, &Poly::one()), poly(&[4]));
        assert!(multiplier_spot_check(2, 4, 100).unwrap().passed());
        assert!(multiplier_spot_check(2, 4, 0).is_err());
    }
}
