//! Buchberger completion over the rationals.
//!
//! Internally polynomials are kept as term vectors sorted in ascending
//! monomial order (leading term last) with exponents permuted into
//! precedence order, so lex comparison is plain slice comparison.

mod extract;

pub use extract::{check_distinct, extract_solutions, DistinctReport, Extraction, Solution};

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::order::cmp_ranked;
use crate::poly::{Monomial, MonomialOrder, OrderKind, Polynomial, Rational};
use crate::system::ConstraintSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("S-polynomial of a zero polynomial")]
    ZeroInput,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Feasible,
    Infeasible,
    LimitExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_pairs: u64,
    pub max_degree: u32,
    pub max_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_pairs: 1_000_000, max_degree: 40, max_work: 200_000_000 }
    }
}

/// How ties between S-pairs of equal lcm degree are broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Smallest lcm degree, then smallest lcm, then creation order.
    Normal,
    /// Smallest lcm degree, then a seeded random order.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub pairs_processed: u64,
    pub pairs_pruned: u64,
    pub zero_reductions: u64,
    pub max_degree: u32,
    pub work: u64,
}

#[derive(Clone, Debug)]
pub struct GroebnerResult {
    pub basis: Vec<Polynomial>,
    pub status: Status,
    pub stats: Stats,
    pub order: MonomialOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    exp: Vec<u32>,
    coef: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct OPoly {
    /// Ascending; leading term last.
    terms: Vec<Term>,
}

struct Ctx<'a> {
    kind: OrderKind,
    order: &'a MonomialOrder,
}

impl Ctx<'_> {
    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        cmp_ranked(self.kind, a, b)
    }

    fn to_internal(&self, p: &Polynomial) -> OPoly {
        let mut terms: Vec<Term> = p
            .terms()
            .map(|(m, c)| Term { exp: self.order.ranked_exponents(m), coef: c.clone() })
            .collect();
        terms.sort_by(|a, b| self.cmp(&a.exp, &b.exp));
        OPoly { terms }
    }

    fn to_external(&self, p: &OPoly) -> Polynomial {
        let prec = self.order.precedence();
        Polynomial::from_terms(p.terms.iter().map(|t| {
            (
                Monomial::from_pairs(t.exp.iter().enumerate().map(|(r, &e)| (prec[r], e))),
                t.coef.clone(),
            )
        }))
    }

    /// `p - c * x^shift * g`
    fn sub_scaled(&self, p: &OPoly, c: &Rational, shift: &[u32], g: &OPoly) -> OPoly {
        let mut out = Vec::with_capacity(p.terms.len() + g.terms.len());
        let shifted = g.terms.iter().map(|t| Term {
            exp: t.exp.iter().zip(shift).map(|(a, b)| a + b).collect(),
            coef: -(c * &t.coef),
        });
        let mut a = p.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match self.cmp(&x.exp, &y.exp) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = b.next().unwrap();
                        let s = x.coef + y.coef;
                        if !s.is_zero() {
                            out.push(Term { exp: x.exp, coef: s });
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (None, None) => break,
            }
        }
        OPoly { terms: out }
    }

    fn normal_form(&self, p: &OPoly, basis: &[&OPoly], work: &mut u64) -> OPoly {
        let mut p = p.clone();
        let mut rem: Vec<Term> = Vec::new();
        while let Some(lead) = p.terms.last() {
            let hit = basis
                .iter()
                .find(|g| divides(&g.terms.last().unwrap().exp, &lead.exp));
            match hit {
                Some(g) => {
                    let gl = g.terms.last().unwrap();
                    let shift: Vec<u32> = lead.exp.iter().zip(&gl.exp).map(|(a, b)| a - b).collect();
                    let c = &lead.coef / &gl.coef;
                    p = self.sub_scaled(&p, &c, &shift, g);
                    *work += 1;
                }
                None => rem.push(p.terms.pop().unwrap()),
            }
        }
        rem.reverse();
        OPoly { terms: rem }
    }

    fn s_poly(&self, f: &OPoly, g: &OPoly) -> OPoly {
        let (lf, lg) = (f.terms.last().unwrap(), g.terms.last().unwrap());
        let l = lcm(&lf.exp, &lg.exp);
        let sf: Vec<u32> = l.iter().zip(&lf.exp).map(|(a, b)| a - b).collect();
        let sg: Vec<u32> = l.iter().zip(&lg.exp).map(|(a, b)| a - b).collect();
        let scaled_f = self.sub_scaled(&OPoly { terms: vec![] }, &(-lf.coef.recip()), &sf, f);
        self.sub_scaled(&scaled_f, &lg.coef.recip(), &sg, g)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn monic(mut p: OPoly) -> OPoly {
    if let Some(l) = p.terms.last() {
        let inv = l.coef.recip();
        for t in &mut p.terms {
            t.coef = &t.coef * &inv;
        }
    }
    p
}

fn is_constant(p: &OPoly) -> bool {
    p.terms.len() == 1 && p.terms[0].exp.iter().all(|&e| e == 0)
}

fn degree(p: &OPoly) -> u32 {
    p.terms.iter().map(|t| t.exp.iter().sum::<u32>()).max().unwrap_or(0)
}

/// `lcm/lt(p) * p - lcm/lt(q) * q` where `lcm` is the lcm of the leading
/// monomials and `lt` includes the coefficient.
pub fn s_polynomial(
    p: &Polynomial,
    q: &Polynomial,
    order: &MonomialOrder,
) -> Result<Polynomial, GroebnerError> {
    if p.is_zero() || q.is_zero() {
        return Err(GroebnerError::ZeroInput);
    }
    let ctx = Ctx { kind: order.kind, order };
    let s = ctx.s_poly(&ctx.to_internal(p), &ctx.to_internal(q));
    Ok(ctx.to_external(&s))
}

/// Fully reduced remainder of `p` modulo `basis` (first divisor wins).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let ctx = Ctx { kind: order.kind, order };
    let b: Vec<OPoly> = basis.iter().filter(|g| !g.is_zero()).map(|g| ctx.to_internal(g)).collect();
    let refs: Vec<&OPoly> = b.iter().collect();
    let mut work = 0;
    ctx.to_external(&ctx.normal_form(&ctx.to_internal(p), &refs, &mut work))
}

/// True iff every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], order: &MonomialOrder) -> bool {
    let nz: Vec<&Polynomial> = basis.iter().filter(|p| !p.is_zero()).collect();
    for i in 0..nz.len() {
        for j in i + 1..nz.len() {
            let s = s_polynomial(nz[i], nz[j], order).unwrap();
            if !normal_form(&s, basis, order).is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<u32>,
    deg: u32,
    tie: u64,
}

/// Reduced Gröbner basis of the ideal generated by `polys`.
pub fn groebner_basis(
    polys: &[Polynomial],
    order: &MonomialOrder,
    limits: &Limits,
    selection: Selection,
) -> GroebnerResult {
    let ctx = Ctx { kind: order.kind, order };
    let mut stats = Stats::default();
    let mut rng = match selection {
        Selection::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Selection::Normal => None,
    };
    let finish = |basis: Vec<Polynomial>, status, stats| GroebnerResult {
        basis,
        status,
        stats,
        order: order.clone(),
    };
    let unit = || vec![Polynomial::one()];

    let mut inputs: Vec<OPoly> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| monic(ctx.to_internal(p)))
        .collect();
    if let Some(rng) = rng.as_mut() {
        inputs.shuffle(rng);
    }
    if inputs.iter().any(is_constant) {
        return finish(unit(), Status::Infeasible, stats);
    }
    let mut g: Vec<OPoly> = Vec::new();
    let mut pending: Vec<Pair> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let mut counter = 0u64;

    let mut add = |g: &mut Vec<OPoly>,
                   pending: &mut Vec<Pair>,
                   pending_set: &mut HashSet<(usize, usize)>,
                   rng: &mut Option<ChaCha8Rng>,
                   h: OPoly| {
        let j = g.len();
        let lh = h.terms.last().unwrap().exp.clone();
        g.push(h);
        for i in 0..j {
            let li = &g[i].terms.last().unwrap().exp;
            let l = lcm(li, &lh);
            let tie = match rng.as_mut() {
                Some(r) => rand::Rng::gen(r),
                None => {
                    counter += 1;
                    counter
                }
            };
            pending.push(Pair { i, j, deg: l.iter().sum(), lcm: l, tie });
            pending_set.insert((i, j));
        }
    };

    for p in inputs {
        stats.max_degree = stats.max_degree.max(degree(&p));
        add(&mut g, &mut pending, &mut pending_set, &mut rng, p);
    }
    if stats.max_degree > limits.max_degree {
        return finish(g.iter().map(|p| ctx.to_external(p)).collect(), Status::LimitExceeded, stats);
    }

    while !pending.is_empty() {
        let best = (0..pending.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pending[a], &pending[b]);
                pa.deg.cmp(&pb.deg).then_with(|| match selection {
                    Selection::Normal => ctx.cmp(&pa.lcm, &pb.lcm).then(pa.tie.cmp(&pb.tie)),
                    Selection::Shuffled(_) => pa.tie.cmp(&pb.tie),
                })
            })
            .unwrap();
        let pair = pending.swap_remove(best);
        pending_set.remove(&(pair.i, pair.j));

        let (li, lj) = (&g[pair.i].terms.last().unwrap().exp, &g[pair.j].terms.last().unwrap().exp);
        let coprime = li.iter().zip(lj.iter()).all(|(a, b)| *a == 0 || *b == 0);
        let chain = || {
            (0..g.len()).any(|k| {
                k != pair.i
                    && k != pair.j
                    && divides(&g[k].terms.last().unwrap().exp, &pair.lcm)
                    && !pending_set.contains(&(pair.i.min(k), pair.i.max(k)))
                    && !pending_set.contains(&(pair.j.min(k), pair.j.max(k)))
            })
        };
        if coprime || chain() {
            stats.pairs_pruned += 1;
            continue;
        }

        stats.pairs_processed += 1;
        if stats.pairs_processed > limits.max_pairs {
            return finish(g.iter().map(|p| ctx.to_external(p)).collect(), Status::LimitExceeded, stats);
        }
        let s = ctx.s_poly(&g[pair.i], &g[pair.j]);
        let refs: Vec<&OPoly> = g.iter().collect();
        let h = ctx.normal_form(&s, &refs, &mut stats.work);
        if stats.work > limits.max_work {
            return finish(g.iter().map(|p| ctx.to_external(p)).collect(), Status::LimitExceeded, stats);
        }
        if h.terms.is_empty() {
            stats.zero_reductions += 1;
            continue;
        }
        if is_constant(&h) {
            return finish(unit(), Status::Infeasible, stats);
        }
        let d = degree(&h);
        stats.max_degree = stats.max_degree.max(d);
        if d > limits.max_degree {
            return finish(g.iter().map(|p| ctx.to_external(p)).collect(), Status::LimitExceeded, stats);
        }
        add(&mut g, &mut pending, &mut pending_set, &mut rng, monic(h));
    }

    // Minimal basis: drop elements whose leading monomial is a multiple of
    // another's (ties resolved toward the lower index).
    let leads: Vec<Vec<u32>> = g.iter().map(|p| p.terms.last().unwrap().exp.clone()).collect();
    let keep: Vec<usize> = (0..g.len())
        .filter(|&i| {
            !(0..g.len()).any(|j| {
                j != i && divides(&leads[j], &leads[i]) && (leads[j] != leads[i] || j < i)
            })
        })
        .collect();
    let minimal: Vec<OPoly> = keep.iter().map(|&i| g[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, p) in minimal.iter().enumerate() {
        let others: Vec<&OPoly> = minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        let mut tail = p.clone();
        let lead = tail.terms.pop().unwrap();
        let mut r = ctx.normal_form(&tail, &others, &mut stats.work);
        r.terms.push(lead);
        reduced.push(monic(r));
    }
    reduced.sort_by(|a, b| ctx.cmp(&b.terms.last().unwrap().exp, &a.terms.last().unwrap().exp));
    let basis = reduced.iter().map(|p| ctx.to_external(p)).collect();
    finish(basis, Status::Feasible, stats)
}

/// Completion of a constraint system's nonzero polynomials.
pub fn buchberger(sys: &ConstraintSystem, order: &MonomialOrder, limits: &Limits) -> GroebnerResult {
    groebner_basis(&sys.nonzero_polys(), order, limits, Selection::Normal)
}

impl GroebnerResult {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0] == Polynomial::one()
    }
}
