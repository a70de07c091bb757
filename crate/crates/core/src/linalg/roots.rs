//! Real-root isolation with Sturm sequences.


use serde::Serialize;

use super::poly::{count_sign_changes, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::ExactField;

/// A rational interval known to contain exactly one real root.
///
/// Either `lo == hi` and the root is that rational number, or `lo < hi`
/// and the root lies strictly inside; in the latter case neither endpoint
/// is a root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: ExactField> RootInterval<T> {
    pub fn exact(root: T) -> Self {
        Self { lo: root.clone(), hi: root }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// `lo <= x <= hi`.
    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatedRoot<T> {
    pub interval: RootInterval<T>,
    pub multiplicity: usize,
}

/// Sturm sequence `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)` of a
/// square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain<T> {
    chain: Vec<Polynomial<T>>,
}

impl<T: ExactField> SturmChain<T> {
    /// Builds the chain of the square-free part of `p`. Panics on zero.
    pub fn new(p: &Polynomial<T>) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = p.square_free();
        let p1 = p0.derivative();
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        Self { chain }
    }

    pub fn square_free_part(&self) -> &Polynomial<T> {
        &self.chain[0]
    }

    fn variations(&self, x: &T) -> usize {
        let values: Vec<T> = self.chain.iter().map(|p| p.eval(x)).collect();
        count_sign_changes(values.iter())
    }

    /// Number of distinct roots in the open interval `(a, b)`, `a < b`.
    ///
    /// `V(a) - V(b)` counts roots in `(a, b]` for a square-free chain, so a
    /// root sitting at `b` is subtracted.
    pub fn count_open(&self, a: &T, b: &T) -> usize {
        let at_b = usize::from(self.chain[0].eval(b).is_zero());
        self.variations(a) - self.variations(b) - at_b
    }
}

/// Isolates every real root of `p` in the open interval `(lo, hi)`.
///
/// Roots are returned in increasing order; each interval contains exactly
/// one distinct root. Multiplicities come from the square-free
/// decomposition of `p`.
pub fn isolate_real_roots<T: ExactField>(
    p: &Polynomial<T>,
    lo: &T,
    hi: &T,
) -> Result<Vec<IsolatedRoot<T>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::EmptyInterval);
    }
    let sturm = SturmChain::new(p);
    let sqfree = sturm.square_free_part().clone();
    let mut found = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count_open(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push(shrink_off_roots(&sturm, a, b));
            continue;
        }
        let mid = T::midpoint(&a, &b);
        if sqfree.eval(&mid).is_zero() {
            found.push(RootInterval::exact(mid.clone()));
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));

    let parts = p.square_free_decomposition();
    Ok(found
        .into_iter()
        .map(|interval| {
            let multiplicity = multiplicity_in(&parts, &interval);
            IsolatedRoot { interval, multiplicity }
        })
        .collect())
}

/// Narrows `(a, b)`, holding one root, until neither end is a root of `p`.
fn shrink_off_roots<T: ExactField>(sturm: &SturmChain<T>, mut a: T, mut b: T) -> RootInterval<T> {
    let p = sturm.square_free_part();
    while p.eval(&a).is_zero() || p.eval(&b).is_zero() {
        let mid = T::midpoint(&a, &b);
        if p.eval(&mid).is_zero() {
            return RootInterval::exact(mid);
        }
        if sturm.count_open(&a, &mid) == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    RootInterval { lo: a, hi: b }
}

fn multiplicity_in<T: ExactField>(parts: &[Polynomial<T>], iv: &RootInterval<T>) -> usize {
    for (k, q) in parts.iter().enumerate() {
        if q.degree().unwrap_or(0) == 0 {
            continue;
        }
        let hit = if iv.is_exact() {
            q.eval(&iv.lo).is_zero()
        } else {
            SturmChain::new(q).count_open(&iv.lo, &iv.hi) > 0
        };
        if hit {
            return k + 1;
        }
    }
    unreachable!("isolated root not found in square-free decomposition")
}

/// Halves an isolating interval of a root of `p`, keeping the half that
/// still contains the root. Exact intervals are returned unchanged.
pub fn refine_root<T: ExactField>(p: &Polynomial<T>, iv: &RootInterval<T>) -> RootInterval<T> {
    if iv.is_exact() {
        return iv.clone();
    }
    let sq = p.square_free();
    let mid = T::midpoint(&iv.lo, &iv.hi);
    let fm = sq.eval(&mid);
    if fm.is_zero() {
        return RootInterval::exact(mid);
    }
    // A simple root of the square-free part is a sign change.
    let flo = sq.eval(&iv.lo);
    if flo.is_negative() != fm.is_negative() {
        RootInterval { lo: iv.lo.clone(), hi: mid }
    } else {
        RootInterval { lo: mid, hi: iv.hi.clone() }
    }
}

/// Refines `iv` until its width is at most `tol`.
pub fn refine_to<T: ExactField>(p: &Polynomial<T>, iv: &RootInterval<T>, tol: &T) -> RootInterval<T> {
    let mut cur = iv.clone();
    while !cur.is_exact() && &cur.width() > tol {
        cur = refine_root(p, &cur);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = Polynomial<Q>;

    fn q(p: i64, d: i64) -> Q {
        Q::from_frac(p, d)
    }

    #[test]
    fn two_simple_roots() {
        let roots = isolate_real_roots(&P::from_ints(&[-1, 0, 1]), &q(-2, 1), &q(2, 1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].interval.contains(&q(-1, 1)) && !roots[0].interval.contains(&q(1, 1)));
        assert!(roots[1].interval.contains(&q(1, 1)) && !roots[1].interval.contains(&q(-1, 1)));
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn double_root_at_zero() {
        let roots = isolate_real_roots(&P::from_ints(&[0, 0, 1]), &q(-1, 1), &q(1, 1)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].interval.contains(&q(0, 1)));
        assert_eq!(roots[0].multiplicity, 2);
    }

    #[test]
    fn cubic_with_irrational_roots() {
        // x^3 - 2x = x(x - √2)(x + √2)
        let p = P::from_ints(&[0, -2, 0, 1]);
        let roots = isolate_real_roots(&p, &q(-2, 1), &q(2, 1)).unwrap();
        assert_eq!(roots.len(), 3);
        // √2 ∈ (7/5, 3/2): check with exact squares.
        let r = refine_to(&p, &roots[2].interval, &q(1, 100));
        assert!(r.lo.clone() * r.lo.clone() < q(2, 1) && r.hi.clone() * r.hi.clone() > q(2, 1));
        let r = refine_to(&p, &roots[0].interval, &q(1, 100));
        assert!(r.hi < q(-7, 5) && r.lo > q(-3, 2));
        assert!(roots[1].interval.contains(&q(0, 1)));
    }

    #[test]
    fn endpoints_are_excluded() {
        let roots = isolate_real_roots(&P::from_ints(&[-1, 0, 1]), &q(-1, 1), &q(1, 1)).unwrap();
        assert!(roots.is_empty());
        let roots = isolate_real_roots(&P::from_ints(&[-1, 0, 1]), &q(-1, 1), &q(3, 1)).unwrap();
        assert_eq!(roots.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(isolate_real_roots(&P::zero(), &q(0, 1), &q(1, 1)), Err(Error::ZeroPolynomial));
        assert_eq!(
            isolate_real_roots(&P::from_ints(&[1, 1]), &q(1, 1), &q(1, 1)),
            Err(Error::EmptyInterval)
        );
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(isolate_real_roots(&P::from_ints(&[3]), &q(-5, 1), &q(5, 1)).unwrap().is_empty());
    }
}
