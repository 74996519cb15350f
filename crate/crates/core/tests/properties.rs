use klm_core::arith::{frac, rat, Rational};
use klm_core::hooklen::{dim_irrep, Partition};
use klm_core::klcoeff::{kl_poly, Route};
use klm_core::oracle::kl_defining;
use klm_core::polyring::{det_parametric, det_rational, row_degree_bound, Poly};
use klm_core::realroot::{
    distinct_real_certificate, hurwitz_delta, hurwitz_delta_param, sturm_count, Bound,
};
use klm_core::seqfactor::{gy_poly_symbolic, Family};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| frac(n, d))
}

fn poly_strategy(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 0..=max_len).prop_map(Poly::from_coeffs)
}

fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    if m.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (c, entry) in m[0].iter().enumerate() {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = entry * &cofactor_det(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

proptest! {
    #[test]
    fn eval_is_multiplicative(a in poly_strategy(6), b in poly_strategy(6), x in small_rational()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
    }

    #[test]
    fn reverse_is_an_involution(a in poly_strategy(7), extra in 0usize..3) {
        let n = a.degree().unwrap_or(0) + extra;
        prop_assert_eq!(a.reverse(n).unwrap().reverse(n).unwrap(), a);
    }

    #[test]
    fn division_identity(a in poly_strategy(8), b in poly_strategy(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn parametric_det_matches_cofactor(entries in prop::collection::vec(poly_strategy(3), 9)) {
        let m: Vec<Vec<Poly>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let det = det_parametric(&m, row_degree_bound(&m)).unwrap();
        prop_assert_eq!(det, cofactor_det(&m));
    }

    #[test]
    fn numeric_det_matches_cofactor(entries in prop::collection::vec(small_rational(), 16)) {
        let m: Vec<Vec<Rational>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let pm: Vec<Vec<Poly>> = m.iter().map(|r| r.iter().cloned().map(Poly::constant).collect()).collect();
        prop_assert_eq!(Poly::constant(det_rational(&m).unwrap()), cofactor_det(&pm));
    }

    #[test]
    fn sturm_counts_distinct_linear_factors(roots in prop::collection::btree_set((-20i64..=20, 1i64..=3), 0..=8)) {
        let mut distinct: Vec<Rational> = roots.iter().map(|&(n, d)| frac(n, d)).collect();
        distinct.sort();
        distinct.dedup();
        let p = distinct.iter().fold(Poly::one(), |acc, r| &acc * &Poly::from_coeffs(vec![-r.clone(), rat(1)]));
        prop_assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::PosInf).unwrap(), distinct.len());
        let neg = distinct.iter().filter(|r| **r <= rat(0)).count();
        prop_assert_eq!(sturm_count(&p, &Bound::NegInf, &Bound::Finite(rat(0))).unwrap(), neg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // the certificate itself raises an integrity error when Hurwitz and Sturm disagree
    #[test]
    fn hurwitz_agrees_with_sturm(a in poly_strategy(7)) {
        prop_assume!(a.degree().unwrap_or(0) >= 1);
        let cert = distinct_real_certificate(&a);
        prop_assert!(cert.is_ok(), "{:?}", cert);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_rooted_products_pass_hurwitz(roots in prop::collection::btree_set(-12i64..=12, 1..=6)) {
        let p = roots.iter().fold(Poly::one(), |acc, &r| &acc * &Poly::from_ints(&[-r, 1]));
        prop_assert!(distinct_real_certificate(&p).unwrap().passed());
    }

    #[test]
    fn symbolic_hurwitz_specializes(m in 2i64..=3, d in 5i64..=14, y in any::<bool>()) {
        let family = if y { Family::B } else { Family::F };
        let g = gy_poly_symbolic(family, m);
        let dg = g.derivative();
        let p = g.eval_inner(&rat(d));
        prop_assume!(p.degree() == g.degree());
        for k in 1..=g.degree().unwrap() {
            let sym = hurwitz_delta_param(&g, &dg, k).unwrap();
            prop_assert_eq!(sym.eval(&rat(d)), hurwitz_delta(&p, &p.derivative(), k).unwrap());
        }
    }

    #[test]
    fn oracle_matches_every_route(m in 1i64..=6, d in 1i64..=14) {
        let (p, consistent) = kl_defining(m, d).unwrap();
        prop_assert!(consistent);
        for route in Route::ALL {
            prop_assert_eq!(&kl_poly(m, d, route).unwrap(), &p);
        }
    }
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Counts standard Young tableaux by placing 1..n one cell at a time.
fn count_syt(shape: &[usize], filled: &mut Vec<usize>, left: usize) -> u64 {
    if left == 0 {
        return 1;
    }
    let mut total = 0;
    for r in 0..shape.len() {
        let addable = filled[r] < shape[r] && (r == 0 || filled[r - 1] > filled[r]);
        if addable {
            filled[r] += 1;
            total += count_syt(shape, filled, left - 1);
            filled[r] -= 1;
        }
    }
    total
}

pub fn syt_count(shape: &[usize]) -> u64 {
    let n = shape.iter().sum();
    count_syt(shape, &mut vec![0; shape.len()], n)
}

#[test]
fn hook_formula_matches_tableaux_enumeration() {
    for n in 0..=8 {
        let mut sum_sq = 0u64;
        for shape in partitions(n, n) {
            let parts: Vec<i64> = shape.iter().map(|&p| p as i64).collect();
            let dim = dim_irrep(&Partition::new(&parts).unwrap()).unwrap();
            let count = syt_count(&shape);
            assert_eq!(dim, count.into(), "shape {shape:?}");
            sum_sq += count * count;
        }
        // sum of squared dimensions is n!
        assert_eq!(sum_sq, (1..=n as u64).product::<u64>());
    }
}
