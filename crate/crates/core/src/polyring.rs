//! Dense exact polynomials in one variable, polynomials whose coefficients are
//! themselves polynomials in a parameter, and determinants over the parameter ring.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{factorial, rat, render_rational, stirling2, Integer, Rational};
use crate::error::{invalid, Result};

/// Dense univariate polynomial over the rationals, coefficients in ascending degree.
///
/// The highest stored coefficient is never zero; the zero polynomial stores nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_integers(coeffs: &[Integer]) -> Self {
        Poly::from_coeffs(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x^n p(1/x)`: coefficient `j` of the result is coefficient `n - j` of `p`.
    pub fn reverse(&self, n: usize) -> Result<Poly> {
        if self.coeffs.len() > n + 1 {
            return Err(invalid!(
                "reverse: degree {} exceeds bound {n}",
                self.coeffs.len() - 1
            ));
        }
        let mut out = vec![Rational::zero(); n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[n - j] = c.clone();
        }
        Ok(Poly::from_coeffs(out))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// `p(x + c)` via repeated synthetic division (Taylor shift).
    pub fn taylor_shift(&self, c: &Rational) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Poly::from_coeffs(a)
    }

    /// `p(q(x))` by Horner's rule.
    pub fn compose(&self, q: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * q) + &Poly::constant(c.clone()))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dl = divisor
            .leading()
            .ok_or_else(|| invalid!("division by the zero polynomial"))?
            .clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Rescales by a positive rational so that all coefficients are coprime integers.
    /// Signs are preserved, so sign-sensitive algorithms may use it freely.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = Integer::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = Integer::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        Poly::from_coeffs(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &g))
                .collect(),
        )
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Canonical text in ascending powers of `var`, e.g. `1 + 6*t - 3*t^2`.
    pub fn render(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let body = render_rational(&c.abs());
                let body = match k {
                    0 => body,
                    1 => format!("{body}*{var}"),
                    _ => format!("{body}*{var}^{k}"),
                };
                (c.is_negative(), body)
            });
        join_signed(terms)
    }

    /// Text in descending powers with implicit unit coefficients, e.g. `-d^2/2 + d/2`.
    pub fn render_descending(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let a = c.abs();
                let body = if k == 0 {
                    render_rational(&a)
                } else {
                    let power = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    let num = if a.numer().is_one() {
                        power
                    } else {
                        format!("{}*{power}", a.numer())
                    };
                    if a.denom().is_one() {
                        num
                    } else {
                        format!("{num}/{}", a.denom())
                    }
                };
                (c.is_negative(), body)
            });
        join_signed(terms)
    }
}

fn join_signed(terms: impl Iterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.enumerate() {
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// `x (x-1) ... (x-k+1)` as a polynomial in `x`.
pub fn falling_factorial_poly(k: usize) -> Poly {
    (0..k).fold(Poly::one(), |acc, j| {
        &acc * &Poly::from_coeffs(vec![rat(-(j as i64)), Rational::one()])
    })
}

/// Polynomial in an outer variable (`t` or `i`) whose coefficients are polynomials in a
/// parameter `d`. Coefficients ascend in the outer variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    coeffs: Vec<Poly>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ParamPoly::from_coeffs(vec![Poly::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    /// Lifts a plain polynomial in the outer variable (constant in `d`).
    pub fn from_outer(p: &Poly) -> Self {
        ParamPoly::from_coeffs(p.coeffs().iter().cloned().map(Poly::constant).collect())
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in the outer variable.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest degree in `d` over all coefficients.
    pub fn inner_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Substitutes a value for `d`.
    pub fn eval_inner(&self, d: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.eval(d)).collect())
    }

    /// Substitutes a value for the outer variable, leaving a polynomial in `d`.
    pub fn eval_outer(&self, x: &Rational) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &acc.scale(x) + c)
    }

    /// Substitutes `d` itself for the outer variable.
    pub fn outer_at_inner(&self) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * &Poly::x()) + c)
    }

    /// Derivative with respect to the outer variable.
    pub fn derivative(&self) -> ParamPoly {
        ParamPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&rat(k as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        ParamPoly::from_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_inner(&self, q: &Poly) -> ParamPoly {
        ParamPoly::from_coeffs(self.coeffs.iter().map(|p| p * q).collect())
    }

    /// Applies `d -> d + c` to every coefficient.
    pub fn shift_inner(&self, c: &Rational) -> ParamPoly {
        ParamPoly::from_coeffs(self.coeffs.iter().map(|p| p.taylor_shift(c)).collect())
    }

    /// Canonical text, e.g. `1 + (d^2/2 + d/2)*t + (-d^2/2 + d/2)*t^2`.
    pub fn render(&self, outer: &str, inner: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let power = match k {
                    0 => String::new(),
                    1 => format!("*{outer}"),
                    _ => format!("*{outer}^{k}"),
                };
                if c.term_count() > 1 {
                    (false, format!("({}){power}", c.render_descending(inner)))
                } else {
                    let neg = c.leading().is_some_and(Signed::is_negative);
                    let body = if neg {
                        (-c).render_descending(inner)
                    } else {
                        c.render_descending(inner)
                    };
                    (neg, format!("{body}{power}"))
                }
            });
        join_signed(terms)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t", "d"))
    }
}

impl<'a> Add<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        ParamPoly::from_coeffs(out)
    }
}

/// Affine integer form `i_coef * i + d_coef * d + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub i_coef: i64,
    pub d_coef: i64,
    pub constant: i64,
}

impl AffineForm {
    pub fn new(i_coef: i64, d_coef: i64, constant: i64) -> Self {
        AffineForm {
            i_coef,
            d_coef,
            constant,
        }
    }

    fn minus(self, j: i64) -> ParamPoly {
        ParamPoly::from_coeffs(vec![
            Poly::from_ints(&[self.constant - j, self.d_coef]),
            Poly::from_ints(&[self.i_coef]),
        ])
    }
}

/// `binom(a, k) = a (a-1) ... (a-k+1) / k!` expanded in powers of `i` with coefficients in `d`.
pub fn expand_binomial_affine(a: AffineForm, k: usize) -> ParamPoly {
    let prod = (0..k as i64).fold(ParamPoly::one(), |acc, j| &acc * &a.minus(j));
    prod.scale(&Rational::new(Integer::one(), factorial(k)))
}

/// Rewrites `sum_n a_n(d) i^n` as `sum_k g_k(d) (i)_k`, returning `[g_0, g_1, ...]`.
pub fn to_falling_basis(p: &ParamPoly) -> Vec<Poly> {
    let n = p.coeffs().len();
    let mut out = vec![Poly::zero(); n];
    for (deg, a) in p.coeffs().iter().enumerate() {
        for (k, slot) in out.iter_mut().enumerate().take(deg + 1) {
            let s = stirling2(deg, k);
            if !s.is_zero() {
                *slot += &a.scale(&Rational::from_integer(s));
            }
        }
    }
    while out.last().is_some_and(Poly::is_zero) {
        out.pop();
    }
    out
}

/// Inverse of [`to_falling_basis`].
pub fn from_falling_basis(g: &[Poly]) -> ParamPoly {
    g.iter().enumerate().fold(ParamPoly::zero(), |acc, (k, gk)| {
        &acc + &ParamPoly::from_outer(&falling_factorial_poly(k)).scale_inner(gk)
    })
}

/// Exact determinant of a rational matrix by fraction-free (Bareiss) elimination after
/// clearing row denominators.
pub fn det_rational(m: &[Vec<Rational>]) -> Result<Rational> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(invalid!("determinant of a non-square matrix"));
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = Integer::one();
    let mut a: Vec<Vec<Integer>> = m
        .iter()
        .map(|row| {
            let den = row
                .iter()
                .fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &den;
            row.iter()
                .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

/// Newton divided-difference interpolation through `(xs[j], ys[j])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Result<Poly> {
    if xs.len() != ys.len() {
        return Err(invalid!("interpolate: {} points but {} values", xs.len(), ys.len()));
    }
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for j in (level..n).rev() {
            let den = &xs[j] - &xs[j - level];
            if den.is_zero() {
                return Err(invalid!("interpolate: repeated node {}", xs[j]));
            }
            dd[j] = (&dd[j] - &dd[j - 1]) / den;
        }
    }
    let mut acc = Poly::zero();
    for j in (0..n).rev() {
        acc = &(&acc * &Poly::from_coeffs(vec![-xs[j].clone(), Rational::one()]))
            + &Poly::constant(dd[j].clone());
    }
    Ok(acc)
}

/// Determinant of a square matrix over `Q[d]`, by evaluating at `d = 0, 1, ..., degree_bound`
/// and interpolating. `degree_bound` must be at least the true degree.
pub fn det_parametric(m: &[Vec<Poly>], degree_bound: usize) -> Result<Poly> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(invalid!("determinant of a non-square matrix"));
    }
    let xs: Vec<Rational> = (0..=degree_bound as i64).map(rat).collect();
    let ys = xs
        .par_iter()
        .map(|x| {
            let numeric: Vec<Vec<Rational>> = m
                .iter()
                .map(|row| row.iter().map(|p| p.eval(x)).collect())
                .collect();
            det_rational(&numeric)
        })
        .collect::<Result<Vec<_>>>()?;
    interpolate(&xs, &ys)
}

/// Sum over rows of the largest entry degree: an upper bound on the determinant's degree.
pub fn row_degree_bound(m: &[Vec<Poly>]) -> usize {
    m.iter()
        .map(|row| row.iter().filter_map(Poly::degree).max().unwrap_or(0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{falling_factorial, frac};

    fn d() -> Poly {
        Poly::x()
    }

    #[test]
    fn ring_op_examples() {
        assert_eq!(Poly::from_ints(&[1, 5]).eval(&frac(-1, 5)), rat(0));
        assert_eq!(
            Poly::from_ints(&[1, 3, 0, 1]).derivative(),
            Poly::from_ints(&[3, 0, 3])
        );
        assert_eq!(
            &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 1]),
            Poly::from_ints(&[-1, 0, 1])
        );
        assert!(Poly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(
            Poly::from_ints(&[1, 2]).reverse(3).unwrap(),
            Poly::from_ints(&[0, 0, 2, 1])
        );
        assert_eq!(
            Poly::from_ints(&[1, 9, 5]).reverse(5).unwrap(),
            Poly::from_ints(&[0, 0, 0, 5, 9, 1])
        );
        let p = Poly::from_ints(&[3, 0, 7]);
        assert_eq!(p.reverse(2).unwrap().reverse(2).unwrap(), p);
        assert!(Poly::from_ints(&[1, 1, 1]).reverse(1).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = Poly::from_ints(&[2, 4, 2]).gcd(&Poly::from_ints(&[3, 3]));
        assert_eq!(g, Poly::from_ints(&[1, 1]));
        assert!(a.div_rem(&Poly::zero()).is_err());
    }

    #[test]
    fn taylor_shift_matches_compose() {
        let p = Poly::from_ints(&[1, -2, 0, 5]);
        let c = frac(3, 2);
        let via_compose = p.compose(&Poly::from_coeffs(vec![c.clone(), rat(1)]));
        assert_eq!(p.taylor_shift(&c), via_compose);
    }

    #[test]
    fn rendering() {
        assert_eq!(Poly::from_ints(&[1, 5]).to_string(), "1 + 5*t");
        assert_eq!(Poly::from_ints(&[1, 6, 6, 1]).to_string(), "1 + 6*t + 6*t^2 + 1*t^3");
        assert_eq!(Poly::from_ints(&[1, 6, -3]).to_string(), "1 + 6*t - 3*t^2");
        assert_eq!(Poly::zero().to_string(), "0");
        let g = ParamPoly::from_coeffs(vec![
            Poly::one(),
            Poly::from_coeffs(vec![rat(0), frac(1, 2), frac(1, 2)]),
            Poly::from_coeffs(vec![rat(0), frac(1, 2), frac(-1, 2)]),
        ]);
        assert_eq!(
            g.to_string(),
            "1 + (d^2/2 + d/2)*t + (-d^2/2 + d/2)*t^2"
        );
        let single = ParamPoly::from_coeffs(vec![Poly::one(), Poly::from_ints(&[0, 0, -3])]);
        assert_eq!(single.to_string(), "1 - 3*d^2*t");
    }

    #[test]
    fn affine_binomial_examples() {
        // a = i - 1 + h with h = 1, k = 1
        assert_eq!(
            expand_binomial_affine(AffineForm::new(1, 0, 0), 1),
            ParamPoly::from_coeffs(vec![Poly::zero(), Poly::one()])
        );
        assert_eq!(
            expand_binomial_affine(AffineForm::new(-1, 1, 0), 1),
            ParamPoly::from_coeffs(vec![d(), Poly::from_ints(&[-1])])
        );
        // (d - i + 1)(d - i)/2 expanded by hand: (d^2 + d)/2 + (-d - 1/2) i + i^2/2
        let expect = ParamPoly::from_coeffs(vec![
            Poly::from_coeffs(vec![rat(0), frac(1, 2), frac(1, 2)]),
            Poly::from_coeffs(vec![frac(-1, 2), rat(-1)]),
            Poly::constant(frac(1, 2)),
        ]);
        assert_eq!(expand_binomial_affine(AffineForm::new(-1, 1, 1), 2), expect);
    }

    #[test]
    fn falling_basis_examples() {
        // f_2(d, i) = 1 + (d+2) i/2 - i^2/2
        let f2 = ParamPoly::from_coeffs(vec![
            Poly::one(),
            Poly::from_coeffs(vec![rat(1), frac(1, 2)]),
            Poly::constant(frac(-1, 2)),
        ]);
        assert_eq!(
            to_falling_basis(&f2),
            vec![
                Poly::one(),
                Poly::from_coeffs(vec![frac(1, 2), frac(1, 2)]),
                Poly::constant(frac(-1, 2)),
            ]
        );
        assert_eq!(to_falling_basis(&ParamPoly::one()), vec![Poly::one()]);
        let i2 = ParamPoly::from_coeffs(vec![Poly::zero(), Poly::zero(), Poly::one()]);
        assert_eq!(
            to_falling_basis(&i2),
            vec![Poly::zero(), Poly::one(), Poly::one()]
        );
        assert_eq!(from_falling_basis(&to_falling_basis(&f2)), f2);
    }

    #[test]
    fn falling_poly_matches_scalar() {
        for k in 0..6 {
            let p = falling_factorial_poly(k);
            for x in -3..8 {
                assert_eq!(p.eval(&rat(x)), falling_factorial(&rat(x), k as u32));
            }
        }
    }

    #[test]
    fn parametric_det_examples() {
        let m = vec![vec![d(), Poly::one()], vec![Poly::zero(), d()]];
        assert_eq!(det_parametric(&m, 2).unwrap(), Poly::from_ints(&[0, 0, 1]));
        let tri = Poly::from_coeffs(vec![rat(0), frac(-1, 2), frac(1, 2)]);
        assert_eq!(det_parametric(&[vec![tri.clone()]], 2).unwrap(), tri);
        assert!(det_parametric(&[vec![d(), d()]], 2).is_err());
    }

    #[test]
    fn rational_det_small() {
        let m = vec![
            vec![rat(2), rat(-3), rat(1)],
            vec![rat(2), rat(0), rat(-1)],
            vec![rat(1), rat(4), rat(5)],
        ];
        assert_eq!(det_rational(&m).unwrap(), rat(49));
        let swap = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(det_rational(&swap).unwrap(), rat(-1));
        let halves = vec![vec![frac(1, 2), rat(0)], vec![rat(0), frac(1, 3)]];
        assert_eq!(det_rational(&halves).unwrap(), frac(1, 6));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Poly::from_coeffs(vec![frac(1, 3), rat(-2), rat(0), frac(7, 5)]);
        let xs: Vec<Rational> = (0..6).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys).unwrap(), p);
    }
}
