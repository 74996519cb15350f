//! The sequences `f_m(d, i)` and `b_m(d, i)` whose coefficientwise action turns the
//! base polynomials into `P_{U_{m,d}}` and `Z_{U_{m,d}}`, their falling-factorial
//! expansions in `i`, and the derived polynomials `G`, `Y`, `Q`, `R`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{binomial_ext, falling_factorial, frac, rat, render_rational, Rational};
use crate::certificate::{grid_certificate, Certificate, Method};
use crate::error::{integrity, invalid, Result};
use crate::klcoeff::{c_recursive, top_index};
use crate::polyring::{
    expand_binomial_affine, falling_factorial_poly, to_falling_basis, AffineForm, ParamPoly, Poly,
};

/// Which sequence: `f` feeds the KL polynomial, `b` the Z-polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    F,
    B,
}

impl Family {
    /// Name of the reduced polynomial (`G` for `f`, `Y` for `b`).
    pub fn reduced_name(self) -> &'static str {
        match self {
            Family::F => "G",
            Family::B => "Y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeqSpec {
    pub family: Family,
    pub m: i64,
    pub d: i64,
}

impl SeqSpec {
    pub fn new(family: Family, m: i64, d: i64) -> Result<Self> {
        if m < 1 || d < 1 {
            return Err(invalid!("need m >= 1 and d >= 1, got m={m}, d={d}"));
        }
        Ok(SeqSpec { family, m, d })
    }
}

fn b(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial_ext(n, k))
}

/// Rational weight of summand `h` in the defining sum, as an affine function of `i`
/// returned as `(constant, i-coefficient)`.
fn weight(family: Family, m: i64, h: i64) -> (Rational, Rational) {
    match family {
        Family::F => (
            Rational::one() / (rat(m - h) * b(m, h)),
            Rational::zero(),
        ),
        Family::B => (frac(m, (h + 1) * m), frac(h - m + 1, (h + 1) * m)),
    }
}

/// `f_m(d, i)` or `b_m(d, i)` for `0 <= i <= d`.
pub fn seq_value(s: SeqSpec, i: i64) -> Result<Rational> {
    if i < 0 || i > s.d {
        return Err(invalid!("sequence index {i} outside 0..={}", s.d));
    }
    let (m, d) = (s.m, s.d);
    Ok((0..m)
        .map(|h| {
            let (w0, w1) = weight(s.family, m, h);
            let w = w0 + w1 * rat(i);
            let first = match s.family {
                Family::F => b(i + m, m - h - 1),
                Family::B => Rational::one(),
            };
            w * first * b(i - 1 + h, h) * b(d - i + h, h)
        })
        .sum())
}

/// The whole sequence `[s(0), ..., s(d)]`.
pub fn sequence(s: SeqSpec) -> Vec<Rational> {
    (0..=s.d)
        .map(|i| seq_value(s, i).expect("index in range"))
        .collect()
}

/// The defining sum expanded as a polynomial in `i` with coefficients in `d`.
pub fn symbolic_sequence(family: Family, m: i64) -> ParamPoly {
    (0..m).fold(ParamPoly::zero(), |acc, h| {
        let (w0, w1) = weight(family, m, h);
        let w = ParamPoly::from_coeffs(vec![Poly::constant(w0), Poly::constant(w1)]);
        let mut term = &w * &expand_binomial_affine(AffineForm::new(1, 0, h - 1), h as usize);
        term = &term * &expand_binomial_affine(AffineForm::new(-1, 1, h), h as usize);
        if family == Family::F {
            term = &term
                * &expand_binomial_affine(AffineForm::new(1, 0, m), (m - h - 1) as usize);
        }
        &acc + &term
    })
}

/// Coefficients `g_{m,k}(d)` (family `f`) or `y_{m,k}(d)` (family `b`), `k = 0..=2(m-1)`,
/// of the falling-factorial expansion in `i`.
pub fn expand_falling(family: Family, m: i64) -> Vec<Poly> {
    to_falling_basis(&symbolic_sequence(family, m))
}

/// `G_{m,d}(t)` / `Y_{m,d}(t)` with `d` left symbolic.
pub fn gy_poly_symbolic(family: Family, m: i64) -> ParamPoly {
    ParamPoly::from_coeffs(
        expand_falling(family, m)
            .iter()
            .enumerate()
            .map(|(k, g)| g * &falling_factorial_poly(k))
            .collect(),
    )
}

/// `G_{m,d}(t)` / `Y_{m,d}(t)` in the shifted parameter `d' = d - 2(m-1)`.
pub fn gy_poly_shifted(family: Family, m: i64) -> ParamPoly {
    gy_poly_symbolic(family, m).shift_inner(&rat(2 * (m - 1)))
}

/// `G_{m,d}(t)` / `Y_{m,d}(t)` at a concrete `d`.
pub fn gy_poly(s: SeqSpec) -> Poly {
    let d = rat(s.d);
    Poly::from_coeffs(
        expand_falling(s.family, s.m)
            .iter()
            .enumerate()
            .map(|(k, g)| g.eval(&d) * falling_factorial(&d, k as u32))
            .collect(),
    )
}

/// `Q_d(t)` (family `f`) or `R_d(t)` (family `b`): `sum_i s(i) binom(d,i) t^i`.
///
/// Also checks `Q_d(t) = sum_k g_k(d) (d)_k t^k (1+t)^(d-k)`, the identity that reduces
/// real-rootedness of `Q_d` to that of `G_{m,d}`.
pub fn qr_poly(s: SeqSpec) -> Result<Poly> {
    let q = Poly::from_coeffs(
        sequence(s)
            .into_iter()
            .enumerate()
            .map(|(i, v)| v * b(s.d, i as i64))
            .collect(),
    );
    let g = gy_poly(s);
    let one_plus_t = Poly::from_ints(&[1, 1]);
    let mut rebuilt = Poly::zero();
    for (k, c) in g.coeffs().iter().enumerate() {
        if k as i64 > s.d || c.is_zero() {
            continue;
        }
        let term = one_plus_t.pow((s.d - k as i64) as u32).shift_up(k).scale(c);
        rebuilt += &term;
    }
    if rebuilt != q {
        return Err(integrity!(
            "factorization identity failed for {:?}: {q} vs {rebuilt}",
            s
        ));
    }
    Ok(q)
}

/// Base polynomials whose real-rootedness the sequence argument starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePolys {
    /// `sum_i binom(d+2m, i+m) binom(d-i-1, i) t^i`, `i <= floor((d-1)/2)`.
    pub kl_base: Poly,
    /// Fibonacci polynomial `F_d(t) = sum_i binom(d-i-1, i) t^(d-2i-1)`.
    pub fibonacci: Poly,
    /// `sum_i binom(d+2m, i+m) binom(d, i) t^i`, `i <= d`.
    pub z_base: Poly,
}

/// The normalizing factor `1/binom(d+2m, m)` is dropped; it does not move zeros.
pub fn base_real_rooted_polys(m: i64, d: i64) -> Result<BasePolys> {
    if m < 1 || d < 1 {
        return Err(invalid!("need m >= 1 and d >= 1, got m={m}, d={d}"));
    }
    let top = top_index(d);
    let kl_base = Poly::from_coeffs(
        (0..=top)
            .map(|i| b(d + 2 * m, i + m) * b(d - i - 1, i))
            .collect(),
    );
    let mut fib = vec![Rational::zero(); d as usize];
    for i in 0..=top {
        fib[(d - 2 * i - 1) as usize] = b(d - i - 1, i);
    }
    let z_base = Poly::from_coeffs(
        (0..=d)
            .map(|i| b(d + 2 * m, i + m) * b(d, i))
            .collect(),
    );
    Ok(BasePolys {
        kl_base,
        fibonacci: Poly::from_coeffs(fib),
        z_base,
    })
}

/// `sum_i binom(d-i-1, i) t^i`, the Fibonacci polynomial read in `t^2 -> t`.
pub fn fibonacci_coefficient_poly(d: i64) -> Poly {
    Poly::from_coeffs((0..=top_index(d)).map(|i| b(d - i - 1, i)).collect())
}

/// Checks `g_{m,0} = 1` and the leading coefficient `(-1)^(m-1)/((m-1)! m!)` of the
/// falling-factorial expansion for both families, `m <= m_max`.
pub fn falling_basis_check(m_max: i64) -> Result<Certificate> {
    if m_max < 1 {
        return Err(invalid!("m_max must be >= 1"));
    }
    let cases: Vec<(Family, i64)> = (1..=m_max)
        .flat_map(|m| [(Family::F, m), (Family::B, m)])
        .collect();
    let failure = cases
        .par_iter()
        .map(|&(family, m)| {
            let g = expand_falling(family, m);
            let lead = Rational::new(
                crate::arith::sign_pow(m - 1),
                crate::arith::factorial((m - 1) as usize) * crate::arith::factorial(m as usize),
            );
            let ok = g.len() as i64 == 2 * m - 1
                && g[0] == Poly::one()
                && g.last() == Some(&Poly::constant(lead.clone()));
            (!ok).then(|| {
                json!({"family": family.reduced_name(), "m": m,
                    "constant_term": g[0].render_descending("d"),
                    "leading": g.last().map(|p| p.render_descending("d")),
                    "expected_leading": render_rational(&lead)})
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    Ok(grid_certificate(
        format!("falling-basis ends m<={m_max}"),
        Method::Identity,
        cases.len(),
        failure,
    ))
}

/// Checks `f_m(d,d) = binom(m+d-1, m-1)` and `G_{m,d}(1) = f_m(d,d)`.
pub fn diagonal_check(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let cells: Vec<(i64, i64)> = (1..=m_max)
        .flat_map(|m| (1..=d_max).map(move |d| (m, d)))
        .collect();
    let failure = cells
        .par_iter()
        .map(|&(m, d)| -> Result<Option<serde_json::Value>> {
            let s = SeqSpec::new(Family::F, m, d)?;
            let fdd = seq_value(s, d)?;
            let g1 = gy_poly(s).eval(&Rational::one());
            let want = b(m + d - 1, m - 1);
            Ok((fdd != want || g1 != want).then(|| {
                json!({"m": m, "d": d, "f_dd": render_rational(&fdd),
                    "g_at_1": render_rational(&g1), "binomial": render_rational(&want)})
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(grid_certificate(
        format!("f_m(d,d) and G(1) m<={m_max} d<={d_max}"),
        Method::Identity,
        cells.len(),
        failure,
    ))
}

/// Checks that the KL and Z coefficients factor as base coefficient times sequence value.
pub fn kl_reformulation_check(m_max: i64, d_max: i64) -> Result<Certificate> {
    if m_max < 1 || d_max < 1 {
        return Err(invalid!("bounds must be >= 1"));
    }
    let cells: Vec<(i64, i64)> = (1..=m_max)
        .flat_map(|m| (1..=d_max).map(move |d| (m, d)))
        .collect();
    let failure = cells
        .par_iter()
        .map(|&(m, d)| reformulation_failure(m, d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(grid_certificate(
        format!("kl/z reformulation m<={m_max} d<={d_max}"),
        Method::Identity,
        cells.len(),
        failure,
    ))
}

fn reformulation_failure(m: i64, d: i64) -> Result<Option<serde_json::Value>> {
    let norm = b(d + 2 * m, m);
    let f = SeqSpec::new(Family::F, m, d)?;
    for i in 0..=top_index(d) {
        let lhs = c_recursive(m, d, i)?;
        let rhs = b(d + 2 * m, i + m) * b(d - i - 1, i) * seq_value(f, i)? / &norm;
        if lhs != rhs {
            return Ok(Some(json!({"side": "kl", "m": m, "d": d, "i": i,
                "lhs": render_rational(&lhs), "rhs": render_rational(&rhs)})));
        }
    }
    let z = crate::zcoeff::z_from_kl(m, d)?;
    let bs = SeqSpec::new(Family::B, m, d)?;
    for i in 0..=d {
        let lhs = z.coeff(i as usize);
        let rhs = b(d + 2 * m, i + m) * b(d, i) * seq_value(bs, i)? / &norm;
        if lhs != rhs {
            return Ok(Some(json!({"side": "z", "m": m, "d": d, "i": i,
                "lhs": render_rational(&lhs), "rhs": render_rational(&rhs)})));
        }
    }
    Ok(None)
}
