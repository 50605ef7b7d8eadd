use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grevlex,
}

/// Monomial order over a fixed variable count. `precedence[0]` is the
/// largest variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    precedence: Vec<usize>,
    rank: Vec<usize>,
}

impl MonomialOrder {
    /// Returns `None` unless `precedence` is a permutation of `0..len`.
    pub fn new(kind: OrderKind, precedence: Vec<usize>) -> Option<Self> {
        let n = precedence.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &v) in precedence.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return None;
            }
            rank[v] = r;
        }
        Some(MonomialOrder { kind, precedence, rank })
    }

    /// Lex with variable 0 largest.
    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, (0..nvars).collect()).unwrap()
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, (0..nvars).collect()).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    /// Position of variable `v` in the precedence list (0 = largest).
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Exponent vector of `m` listed in precedence order.
    pub fn ranked_exponents(&self, m: &Monomial) -> Vec<u32> {
        let mut e = vec![0; self.nvars()];
        for &(v, x) in m.pairs() {
            e[self.rank[v]] = x;
        }
        e
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (self.ranked_exponents(a), self.ranked_exponents(b));
        cmp_ranked(self.kind, &ea, &eb)
    }
}

/// Compares exponent vectors already permuted into precedence order.
pub(crate) fn cmp_ranked(kind: OrderKind, a: &[u32], b: &[u32]) -> Ordering {
    match kind {
        OrderKind::Lex => a.cmp(b),
        OrderKind::Grevlex => {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_dense(e)
    }

    #[test]
    fn lex_basics() {
        let o = MonomialOrder::lex(2);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[1, 0])), Ordering::Greater);
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::grevlex(3);
        // x*z < y^2 in grevlex x > y > z
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn precedence_permutes() {
        let o = MonomialOrder::new(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(o.cmp(&m(&[5, 0]), &m(&[0, 1])), Ordering::Less);
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 0]).is_none());
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 2]).is_none());
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, 4).prop_map(|e| Monomial::from_dense(&e))
    }

    proptest! {
        #[test]
        fn orders_are_admissible(a in arb_mono(), b in arb_mono(), t in arb_mono(),
                                 perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
                                 lex in any::<bool>()) {
            let kind = if lex { OrderKind::Lex } else { OrderKind::Grevlex };
            let o = MonomialOrder::new(kind, perm).unwrap();
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&t), &b.mul(&t)));
            prop_assert_ne!(o.cmp(&Monomial::one(), &a), Ordering::Greater);
            if o.cmp(&a, &b) == Ordering::Equal {
                prop_assert_eq!(a, b);
            }
        }
    }
}
