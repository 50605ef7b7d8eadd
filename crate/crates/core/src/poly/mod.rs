//! Sparse multivariate polynomials with exact rational coefficients.

pub(crate) mod order;
mod parse;
mod vars;

pub use order::{MonomialOrder, OrderKind};
pub use parse::{parse_polynomial, ParseError};
pub use vars::{Axis, VarKind, VarTable};

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    // Scale down huge operands so the division stays in range.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Power product of variables, stored as `(variable, exponent)` pairs sorted
/// by variable index with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(v, &e)| (v, e))
                .collect(),
        )
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(x, _)| x)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut d = vec![0; nvars];
        for &(v, e) in &self.0 {
            d[v] = e;
        }
        d
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<usize, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            let x = map.entry(v).or_insert(0);
            *x = (*x).max(e);
        }
        Monomial(map.into_iter().collect())
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0
                .iter()
                .map(|&(v, e)| (v, e - other.exponent(v)))
                .filter(|&(_, e)| e > 0)
                .collect(),
        ))
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.0.iter().map(|&(v, e)| point[v].powi(e as i32)).product()
    }
}

/// Exact polynomial; zero coefficients are never stored, so the zero
/// polynomial is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for a nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Leading `(monomial, coefficient)` under `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| order.cmp(b.0, a.0));
        t
    }

    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => Polynomial::zero(),
        }
    }

    /// Integer multiple with coprime coefficients and positive leading
    /// coefficient.
    pub fn primitive(&self, order: &MonomialOrder) -> Polynomial {
        let Some((_, lc)) = self.leading(order) else {
            return Polynomial::zero();
        };
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &den / c.denom())));
        let mut s = Rational::new(den, num);
        if lc.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Substitutes `value` for variable `v`.
    pub fn substitute(&self, v: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
            } else {
                let rest = Monomial(m.0.iter().copied().filter(|&(x, _)| x != v).collect());
                out.add_term(rest, c * num_traits::pow(value.clone(), e as usize));
            }
        }
        out
    }

    /// Renames variables through `map` (old index → new index).
    pub fn remap_vars(&self, map: &[usize]) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_pairs(m.0.iter().map(|&(v, e)| (map[v], e))),
                c.clone(),
            )
        }))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| rat_to_f64(c) * m.eval_f64(point))
            .sum()
    }

    pub fn eval_exact(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().fold(c.clone(), |acc, &(v, e)| {
                    acc * num_traits::pow(point[v].clone(), e as usize)
                })
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Polynomial {
    p + q
}

pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Polynomial {
    p * q
}

pub fn poly_scale(p: &Polynomial, c: &Rational) -> Polynomial {
    p.scale(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Polynomial {
        Polynomial::var(0)
    }
    fn y() -> Polynomial {
        Polynomial::var(1)
    }
    fn c(n: i64) -> Polynomial {
        Polynomial::constant(rat(n, 1))
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let want = &x().pow(2) - &y().pow(2);
        assert_eq!(p, want);
    }

    #[test]
    fn canonical_zero() {
        let p = &(&x().pow(3) + &c(7)) - &y();
        let z = &p + &poly_scale(&p, &rat(-1, 1));
        assert!(z.is_zero());
        assert_eq!(z, Polynomial::zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn pinned_edge_expansion() {
        // (x - 1)^2 + y^2 - 1 = x^2 - 2x + y^2
        let p = &(&(&x() - &c(1)).pow(2) + &y().pow(2)) - &c(1);
        let want = &(&x().pow(2) - &c(2).mul(x())) + &y().pow(2);
        assert_eq!(p, want);
        assert_eq!(p.coeff(&Monomial::one()), rat(0, 1));
    }

    #[test]
    fn monomial_ops() {
        let a = Monomial::from_pairs([(0, 2), (2, 1)]);
        let b = Monomial::from_pairs([(0, 1), (1, 3)]);
        assert_eq!(a.lcm(&b), Monomial::from_pairs([(0, 2), (1, 3), (2, 1)]));
        assert_eq!(a.div(&Monomial::var(0)), Some(Monomial::from_pairs([(0, 1), (2, 1)])));
        assert_eq!(a.div(&b), None);
        assert_eq!(Monomial::from_pairs([(3, 0)]), Monomial::one());
        assert_eq!(a.degree(), 3);
    }

    #[test]
    fn primitive_clears_denominators() {
        let ord = MonomialOrder::lex(2);
        let p = &x().scale(&rat(-1, 2)) + &c(3).scale(&rat(1, 4));
        assert_eq!(p.primitive(&ord), &c(2).mul(x()) - &c(3));
    }

    #[test]
    fn substitution() {
        let p = &(&x().pow(2) + &(&x() * &y())) - &c(1);
        let q = p.substitute(0, &rat(2, 1));
        assert_eq!(q, &(&c(2) * &y()) + &c(3));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0u32..=3, 4), -5i64..=5, 1i64..=3),
            0..5,
        )
        .prop_map(|terms| {
            Polynomial::from_terms(terms.into_iter().map(|(e, n, d)| {
                // keep total degree ≤ 3
                let mut left = 3u32;
                let e: Vec<u32> = e
                    .into_iter()
                    .map(|x| {
                        let t = x.min(left);
                        left -= t;
                        t
                    })
                    .collect();
                (Monomial::from_dense(&e), rat(n, d))
            }))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
            prop_assert_eq!(&p * &Polynomial::one(), p.clone());
        }

        #[test]
        fn evaluation_is_a_homomorphism(p in arb_poly(), q in arb_poly(),
                                        pt in prop::collection::vec(-3i64..=3, 4)) {
            let pt: Vec<Rational> = pt.into_iter().map(|v| rat(v, 2)).collect();
            prop_assert_eq!((&p * &q).eval_exact(&pt), p.eval_exact(&pt) * q.eval_exact(&pt));
            prop_assert_eq!((&p + &q).eval_exact(&pt), p.eval_exact(&pt) + q.eval_exact(&pt));
        }
    }
}
