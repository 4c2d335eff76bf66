//! Real quadratic towers Q(√d₁)(√d₂)… with exact sign determination.
//!
//! An element of level `L` is `a + b·√d_L` where `a`, `b` live at lower
//! levels and `d_L` is the `L`-th radicand (itself an element of level
//! `< L`, positive, and not a square one level down). The square root is
//! always the positive real one, so every tower embeds into ℝ and carries
//! the induced order.
//!
//! Elements are kept sparse: an element only mentions the levels it uses,
//! and `b` is never zero in an `Ext` node. With every level a genuine
//! quadratic extension this makes the representation unique, so structural
//! equality is field equality.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TowerElem {
    Base(BigRational),
    Ext {
        level: usize,
        a: Box<TowerElem>,
        b: Box<TowerElem>,
    },
}

impl TowerElem {
    pub fn zero() -> Self {
        TowerElem::Base(BigRational::zero())
    }

    pub fn one() -> Self {
        TowerElem::Base(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        TowerElem::Base(q)
    }

    pub fn level(&self) -> usize {
        match self {
            TowerElem::Base(_) => 0,
            TowerElem::Ext { level, .. } => *level,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TowerElem::Base(q) if q.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            TowerElem::Base(q) => Some(q),
            TowerElem::Ext { .. } => None,
        }
    }

    /// `a + b·√d_level`, collapsing when `b = 0`.
    fn ext(level: usize, a: TowerElem, b: TowerElem) -> TowerElem {
        if b.is_zero() {
            a
        } else {
            TowerElem::Ext {
                level,
                a: Box::new(a),
                b: Box::new(b),
            }
        }
    }

    /// Coordinates over level `level` (which must be ≥ `self.level()`).
    fn split(&self, level: usize) -> (TowerElem, TowerElem) {
        match self {
            TowerElem::Ext { level: l, a, b } if *l == level => ((**a).clone(), (**b).clone()),
            _ => (self.clone(), TowerElem::zero()),
        }
    }
}

pub(crate) fn add(x: &TowerElem, y: &TowerElem) -> TowerElem {
    match (x, y) {
        (TowerElem::Base(p), TowerElem::Base(q)) => TowerElem::Base(p + q),
        _ => {
            let l = x.level().max(y.level());
            let (xa, xb) = x.split(l);
            let (ya, yb) = y.split(l);
            TowerElem::ext(l, add(&xa, &ya), add(&xb, &yb))
        }
    }
}

pub(crate) fn neg(x: &TowerElem) -> TowerElem {
    match x {
        TowerElem::Base(p) => TowerElem::Base(-p),
        TowerElem::Ext { level, a, b } => TowerElem::Ext {
            level: *level,
            a: Box::new(neg(a)),
            b: Box::new(neg(b)),
        },
    }
}

pub(crate) fn sub(x: &TowerElem, y: &TowerElem) -> TowerElem {
    add(x, &neg(y))
}

pub(crate) fn mul(rads: &[TowerElem], x: &TowerElem, y: &TowerElem) -> TowerElem {
    match (x, y) {
        (TowerElem::Base(p), TowerElem::Base(q)) => TowerElem::Base(p * q),
        _ => {
            let (lx, ly) = (x.level(), y.level());
            if lx < ly {
                let (ya, yb) = y.split(ly);
                return TowerElem::ext(ly, mul(rads, x, &ya), mul(rads, x, &yb));
            }
            if ly < lx {
                let (xa, xb) = x.split(lx);
                return TowerElem::ext(lx, mul(rads, &xa, y), mul(rads, &xb, y));
            }
            let l = lx;
            let d = &rads[l - 1];
            let (xa, xb) = x.split(l);
            let (ya, yb) = y.split(l);
            let a = add(&mul(rads, &xa, &ya), &mul(rads, &mul(rads, &xb, &yb), d));
            let b = add(&mul(rads, &xa, &yb), &mul(rads, &xb, &ya));
            TowerElem::ext(l, a, b)
        }
    }
}

/// `None` for zero.
pub(crate) fn inv(rads: &[TowerElem], x: &TowerElem) -> Option<TowerElem> {
    match x {
        TowerElem::Base(p) => {
            if p.is_zero() {
                None
            } else {
                Some(TowerElem::Base(p.recip()))
            }
        }
        TowerElem::Ext { level, a, b } => {
            let d = &rads[*level - 1];
            // (a + b√d)(a - b√d) = a² - b²d, nonzero since d is not a square below.
            let n = sub(&mul(rads, a, a), &mul(rads, &mul(rads, b, b), d));
            let ninv = inv(rads, &n)?;
            Some(TowerElem::ext(
                *level,
                mul(rads, a, &ninv),
                neg(&mul(rads, b, &ninv)),
            ))
        }
    }
}

pub(crate) fn sign(rads: &[TowerElem], x: &TowerElem) -> Ordering {
    match x {
        TowerElem::Base(p) => p.cmp(&BigRational::zero()),
        TowerElem::Ext { level, a, b } => {
            let sa = sign(rads, a);
            let sb = sign(rads, b);
            if sa == Ordering::Equal {
                return sb;
            }
            if sa == sb {
                return sa;
            }
            // opposite signs: compare a² with b²d
            let d = &rads[*level - 1];
            let t = sub(&mul(rads, a, a), &mul(rads, &mul(rads, b, b), d));
            match sa {
                Ordering::Greater => sign(rads, &t),
                _ => sign(rads, &t).reverse(),
            }
        }
    }
}

pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Some square root of `x` inside the first `top` levels, if one exists.
/// Not normalized for sign.
pub(crate) fn sqrt_within(rads: &[TowerElem], x: &TowerElem, top: usize) -> Option<TowerElem> {
    debug_assert!(x.level() <= top);
    if top == 0 {
        return rational_sqrt(x.as_rational()?).map(TowerElem::Base);
    }
    let d = &rads[top - 1];
    let (a, b) = x.split(top);
    if b.is_zero() {
        if let Some(r) = sqrt_within(rads, &a, top - 1) {
            return Some(r);
        }
        // (s·√d)² = s²d = a
        let a_over_d = mul(rads, &a, &inv(rads, d)?);
        return sqrt_within(rads, &a_over_d, top - 1).map(|s| TowerElem::ext(top, TowerElem::zero(), s));
    }
    // (p + q√d)² = (p² + q²d) + 2pq√d; p² = (a ± √(a² - b²d)) / 2
    let norm = sub(&mul(rads, &a, &a), &mul(rads, &mul(rads, &b, &b), d));
    let n_root = sqrt_within(rads, &norm, top - 1)?;
    let half = TowerElem::Base(BigRational::new(BigInt::one(), BigInt::from(2)));
    for cand in [add(&a, &n_root), sub(&a, &n_root)] {
        let p_sq = mul(rads, &cand, &half);
        if let Some(p) = sqrt_within(rads, &p_sq, top - 1) {
            if p.is_zero() {
                continue;
            }
            let two_p_inv = inv(rads, &add(&p, &p))?;
            let q = mul(rads, &b, &two_p_inv);
            return Some(TowerElem::ext(top, p, q));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> TowerElem {
        TowerElem::Base(BigRational::from_integer(n.into()))
    }

    #[test]
    fn sqrt2_squared() {
        let rads = vec![q(2)];
        let r2 = TowerElem::ext(1, q(0), q(1));
        assert_eq!(mul(&rads, &r2, &r2), q(2));
    }

    #[test]
    fn sign_of_one_minus_sqrt2() {
        let rads = vec![q(2)];
        let x = TowerElem::ext(1, q(1), q(-1));
        assert_eq!(sign(&rads, &x), Ordering::Less);
        let y = TowerElem::ext(1, q(2), q(-1));
        assert_eq!(sign(&rads, &y), Ordering::Greater);
    }

    #[test]
    fn denests_three_plus_two_sqrt2() {
        // 3 + 2√2 = (1 + √2)²
        let rads = vec![q(2)];
        let x = TowerElem::ext(1, q(3), q(2));
        let r = sqrt_within(&rads, &x, 1).unwrap();
        assert_eq!(mul(&rads, &r, &r), x);
    }

    #[test]
    fn inverse_roundtrip() {
        let rads = vec![q(2), q(3)];
        let x = TowerElem::ext(2, TowerElem::ext(1, q(1), q(1)), q(5));
        let xi = inv(&rads, &x).unwrap();
        assert_eq!(mul(&rads, &x, &xi), q(1));
    }
}
