//! Multilinear polynomials `Σ_σ λ_σ x_{σ(1)}···x_{σ(m)}`.
//!
//! A polynomial of arity `m` stores one coefficient per permutation of
//! `0..m`, indexed by the lexicographic rank of the permutation written in
//! one-line notation. A permutation doubles as the monomial it names.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::fields::{FieldDescriptor, FieldElement, FieldError};
use crate::linalg;
use crate::quaternion::{AlgebraSpec, Quaternion};

pub const MAX_ARITY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("arguments or coefficients do not belong to the algebra's field")]
    SpecMismatch,
    #[error("arity {0} outside 2..=8")]
    ArityTooLarge(usize),
    #[error("polynomial is not of the requested form (system rank {rank})")]
    NotRepresentable { rank: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, used: u32, m: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for v in 0..m as u8 {
            if used & (1 << v) == 0 {
                prefix.push(v);
                go(prefix, used | (1 << v), m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::with_capacity(factorial(m));
    go(&mut Vec::with_capacity(m), 0, m, &mut out);
    out
}

/// Lexicographic rank; `None` if `perm` is not a permutation of `0..len`.
pub fn perm_rank(perm: &[u8]) -> Option<usize> {
    let m = perm.len();
    let mut used = 0u32;
    let mut rank = 0;
    for (d, &v) in perm.iter().enumerate() {
        if v as usize >= m || used & (1 << v) != 0 {
            return None;
        }
        let smaller_free = (0..v).filter(|&w| used & (1 << w) == 0).count();
        rank += smaller_free * factorial(m - 1 - d);
        used |= 1 << v;
    }
    Some(rank)
}

pub fn perm_sign(perm: &[u8]) -> i64 {
    let mut inversions = 0;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    m: usize,
    field: FieldDescriptor,
    coeffs: Vec<FieldElement>,
}

impl MultilinearPoly {
    pub fn zero(field: &FieldDescriptor, m: usize) -> Result<Self, PolyError> {
        if !(2..=MAX_ARITY).contains(&m) {
            return Err(PolyError::ArityTooLarge(m));
        }
        Ok(MultilinearPoly {
            m,
            field: field.clone(),
            coeffs: vec![field.zero(); factorial(m)],
        })
    }

    /// Coefficients in lexicographic permutation order.
    pub fn from_coeffs(field: &FieldDescriptor, m: usize, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, m)?;
        if coeffs.len() != p.coeffs.len() || !coeffs.iter().all(|c| field.contains(c)) {
            return Err(PolyError::SpecMismatch);
        }
        p.coeffs = coeffs;
        Ok(p)
    }

    /// The single monomial `x_{w(1)}···x_{w(m)}` (0-based word).
    pub fn monomial(field: &FieldDescriptor, word: &[u8]) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, word.len())?;
        let r = perm_rank(word).ok_or_else(|| PolyError::Parse(format!("{word:?} is not a permutation")))?;
        p.coeffs[r] = field.one();
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, word: &[u8]) -> Option<&FieldElement> {
        perm_rank(word).filter(|_| word.len() == self.m).map(|r| &self.coeffs[r])
    }

    pub fn set_coeff(&mut self, word: &[u8], c: FieldElement) -> Result<(), PolyError> {
        if word.len() != self.m || !self.field.contains(&c) {
            return Err(PolyError::SpecMismatch);
        }
        let r = perm_rank(word).ok_or(PolyError::SpecMismatch)?;
        self.coeffs[r] = c;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn coefficient_sum(&self) -> FieldElement {
        self.coeffs.iter().fold(self.field.zero(), |acc, c| self.field.add(&acc, c))
    }

    /// Membership in the T-ideal generated by `s₂`: the coefficients sum to zero.
    pub fn in_s2_tideal(&self) -> bool {
        self.field.is_zero(&self.coefficient_sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.m != other.m || self.field != other.field {
            return Err(PolyError::SpecMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(MultilinearPoly { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        MultilinearPoly { coeffs, ..self.clone() }
    }

    /// `q(x₁,…,x_m) = p(x_{τ(1)},…,x_{τ(m)})`: the monomial `w` of `p`
    /// becomes `τ∘w` in `q`.
    pub fn substitute(&self, tau: &[u8]) -> Result<Self, PolyError> {
        if tau.len() != self.m || perm_rank(tau).is_none() {
            return Err(PolyError::SpecMismatch);
        }
        let mut out = Self::zero(&self.field, self.m)?;
        for (w, c) in permutations(self.m).iter().zip(&self.coeffs) {
            let image: Vec<u8> = w.iter().map(|&v| tau[v as usize]).collect();
            out.coeffs[perm_rank(&image).unwrap()] = c.clone();
        }
        Ok(out)
    }

    /// Same coefficients read in a larger field.
    pub fn over(&self, field: &FieldDescriptor) -> Result<Self, PolyError> {
        if !self.field.compatible(field) {
            return Err(PolyError::SpecMismatch);
        }
        Ok(MultilinearPoly {
            field: field.clone(),
            ..self.clone()
        })
    }

    pub fn evaluate(&self, spec: &AlgebraSpec, args: &[Quaternion]) -> Result<Quaternion, PolyError> {
        if args.len() != self.m {
            return Err(PolyError::ArityMismatch {
                expected: self.m,
                got: args.len(),
            });
        }
        if !self.field.compatible(spec.field()) || !args.iter().all(|a| spec.contains(a)) {
            return Err(PolyError::SpecMismatch);
        }
        Ok(self.evaluate_unchecked(spec, args))
    }

    /// Depth-first over permutation prefixes, sharing prefix products and
    /// skipping blocks whose coefficients all vanish.
    pub fn evaluate_unchecked(&self, spec: &AlgebraSpec, args: &[Quaternion]) -> Quaternion {
        let f = &self.field;
        let mut nonzero = Vec::with_capacity(self.coeffs.len() + 1);
        nonzero.push(0usize);
        for c in &self.coeffs {
            nonzero.push(nonzero.last().unwrap() + usize::from(!f.is_zero(c)));
        }
        let arg_zero: Vec<bool> = args.iter().map(|a| spec.is_zero(a)).collect();
        let mut acc = spec.zero();
        struct Ctx<'a> {
            p: &'a MultilinearPoly,
            spec: &'a AlgebraSpec,
            args: &'a [Quaternion],
            arg_zero: &'a [bool],
            nonzero: &'a [usize],
        }
        fn dfs(cx: &Ctx, depth: usize, used: u32, offset: usize, prefix: Option<&Quaternion>, acc: &mut Quaternion) {
            let m = cx.p.m;
            if depth == m {
                let term = cx.spec.scale(&cx.p.coeffs[offset], prefix.expect("m ≥ 1"));
                *acc = cx.spec.add(acc, &term);
                return;
            }
            let block = factorial(m - 1 - depth);
            let mut slot = 0;
            for v in 0..m {
                if used & (1 << v) != 0 {
                    continue;
                }
                let start = offset + slot * block;
                slot += 1;
                if cx.nonzero[start + block] == cx.nonzero[start] || cx.arg_zero[v] {
                    continue;
                }
                let next = match prefix {
                    None => cx.args[v].clone(),
                    Some(q) => cx.spec.mul(q, &cx.args[v]),
                };
                if cx.spec.is_zero(&next) {
                    continue;
                }
                dfs(cx, depth + 1, used | (1 << v), start, Some(&next), acc);
            }
        }
        let cx = Ctx {
            p: self,
            spec,
            args,
            arg_zero: &arg_zero,
            nonzero: &nonzero,
        };
        dfs(&cx, 0, 0, 0, None, &mut acc);
        acc
    }

    /// `{"m": .., "coeffs": [{"perm": [..1-based..], "c": ".."}]}` listing nonzero coefficients.
    pub fn to_json(&self) -> PolyJson {
        let coeffs = permutations(self.m)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(w, c)| PolyTerm {
                perm: w.iter().map(|&v| v as usize + 1).collect(),
                c: self.field.format_element(c),
            })
            .collect();
        PolyJson { m: self.m, coeffs }
    }

    pub fn from_json(field: &FieldDescriptor, j: &PolyJson) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, j.m)?;
        for t in &j.coeffs {
            let word: Vec<u8> = t
                .perm
                .iter()
                .map(|&v| u8::try_from(v).ok().and_then(|v| v.checked_sub(1)))
                .collect::<Option<_>>()
                .ok_or_else(|| PolyError::Parse(format!("bad permutation {:?}", t.perm)))?;
            if word.len() != j.m || perm_rank(&word).is_none() {
                return Err(PolyError::Parse(format!("bad permutation {:?}", t.perm)));
            }
            let c = field.parse_element(&t.c)?;
            let r = perm_rank(&word).unwrap();
            p.coeffs[r] = field.add(&p.coeffs[r], &c);
        }
        Ok(p)
    }

    /// Human-readable sum of monomials, e.g. `x1x2 - x2x1`.
    pub fn display(&self) -> String {
        let f = &self.field;
        let mut out = String::new();
        for (w, c) in permutations(self.m).iter().zip(&self.coeffs) {
            if f.is_zero(c) {
                continue;
            }
            let word: String = w.iter().map(|v| format!("x{}", v + 1)).collect();
            let (neg, mag) = match f.sign(c) {
                Some(std::cmp::Ordering::Less) => (true, f.neg(c)),
                _ => (false, c.clone()),
            };
            let coef = if f.is_one(&mag) {
                String::new()
            } else {
                format!("{}*", f.format_element(&mag))
            };
            let sep = match (out.is_empty(), neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            out.push_str(sep);
            out.push_str(&coef);
            out.push_str(&word);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Random coefficients drawn from `choices`, every slot independent.
    pub fn sample<R: Rng + ?Sized>(
        field: &FieldDescriptor,
        m: usize,
        choices: &[FieldElement],
        rng: &mut R,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, m)?;
        for c in p.coeffs.iter_mut() {
            *c = choices[rng.gen_range(0..choices.len())].clone();
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub perm: Vec<usize>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub m: usize,
    pub coeffs: Vec<PolyTerm>,
}

/// Element of the free algebra on `x₀, x₁, …`, used to expand nested
/// commutator expressions into monomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeExpansion {
    field: FieldDescriptor,
    terms: BTreeMap<Vec<u8>, FieldElement>,
}

impl FreeExpansion {
    pub fn var(field: &FieldDescriptor, v: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![v], field.one());
        FreeExpansion {
            field: field.clone(),
            terms,
        }
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        FreeExpansion {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn insert(&mut self, w: Vec<u8>, c: FieldElement) {
        let f = &self.field;
        let e = self.terms.entry(w).or_insert_with(|| f.zero());
        *e = f.add(e, &c);
        if f.is_zero(e) {
            self.terms.retain(|_, c| !f.is_zero(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(&self.field);
        for (w, a) in &self.terms {
            out.insert(w.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (w1, a) in &self.terms {
            for (w2, b) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.insert(w, self.field.mul(a, b));
            }
        }
        out
    }

    pub fn s2(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn to_poly(&self, m: usize) -> Result<MultilinearPoly, PolyError> {
        let mut p = MultilinearPoly::zero(&self.field, m)?;
        for (w, c) in &self.terms {
            if w.len() != m {
                return Err(PolyError::Parse("expansion is not multilinear of the given arity".into()));
            }
            let r = perm_rank(w).ok_or_else(|| PolyError::Parse("expansion is not multilinear".into()))?;
            p.coeffs[r] = c.clone();
        }
        Ok(p)
    }
}

pub fn make_s2(field: &FieldDescriptor) -> MultilinearPoly {
    make_standard(field, 2).expect("arity 2")
}

/// `s_m = Σ sgn(σ) x_{σ(1)}···x_{σ(m)}`.
pub fn make_standard(field: &FieldDescriptor, m: usize) -> Result<MultilinearPoly, PolyError> {
    let mut p = MultilinearPoly::zero(field, m)?;
    for (w, c) in permutations(m).iter().zip(p.coeffs.iter_mut()) {
        *c = field.from_i64(perm_sign(w));
    }
    Ok(p)
}

fn vk_expansion(field: &FieldDescriptor, k: u32, first: u8) -> FreeExpansion {
    if k == 0 {
        return FreeExpansion::var(field, first);
    }
    let half = 1u8 << (k - 1);
    vk_expansion(field, k - 1, first).s2(&vk_expansion(field, k - 1, first + half))
}

/// `v₁ = s₂`, `v_k = v₁(v_{k−1}, v_{k−1})` on disjoint variable blocks.
pub fn make_vk(field: &FieldDescriptor, k: u32) -> Result<MultilinearPoly, PolyError> {
    if k == 0 || k > 3 {
        return Err(PolyError::ArityTooLarge(1usize << k.min(31)));
    }
    vk_expansion(field, k, 0).to_poly(1 << k)
}

/// `x₁x₂···x_m`.
pub fn make_monomial(field: &FieldDescriptor, m: usize) -> Result<MultilinearPoly, PolyError> {
    let w: Vec<u8> = (0..m as u8).collect();
    MultilinearPoly::monomial(field, &w)
}

fn deg3_basis(field: &FieldDescriptor) -> [FreeExpansion; 2] {
    let x = |i: u8| FreeExpansion::var(field, i - 1);
    [
        x(1).s2(&x(3).s2(&x(2))),
        x(3).s2(&x(1).s2(&x(2))),
    ]
}

fn deg4_basis(field: &FieldDescriptor) -> [FreeExpansion; 9] {
    let x = |i: u8| FreeExpansion::var(field, i - 1);
    let c = |a: u8, b: u8| x(a).s2(&x(b));
    [
        c(2, 1).s2(&x(3)).s2(&x(4)),
        c(3, 1).s2(&x(2)).s2(&x(4)),
        c(4, 1).s2(&x(2)).s2(&x(3)),
        c(1, 2).mul(&c(3, 4)),
        c(1, 3).mul(&c(2, 4)),
        c(1, 4).mul(&c(2, 3)),
        c(2, 3).mul(&c(1, 4)),
        c(2, 4).mul(&c(1, 3)),
        c(3, 4).mul(&c(1, 2)),
    ]
}

fn combine(field: &FieldDescriptor, basis: &[FreeExpansion], lambdas: &[FieldElement], m: usize) -> MultilinearPoly {
    let mut acc = FreeExpansion::zero(field);
    for (b, l) in basis.iter().zip(lambdas) {
        acc = acc.add(&b.scale(l));
    }
    acc.to_poly(m).expect("forms are multilinear")
}

/// `λ₁ s₂(x₁, s₂(x₃, x₂)) + λ₂ s₂(x₃, s₂(x₁, x₂))`.
pub fn make_deg3_form(field: &FieldDescriptor, l1: &FieldElement, l2: &FieldElement) -> MultilinearPoly {
    combine(field, &deg3_basis(field), &[l1.clone(), l2.clone()], 3)
}

/// The nine-term degree-4 form; `lambdas[0]` multiplies
/// `s₂(s₂(s₂(x₂,x₁),x₃),x₄)` and `lambdas[8]` multiplies `s₂(x₃,x₄)s₂(x₁,x₂)`.
pub fn make_deg4_form(field: &FieldDescriptor, lambdas: &[FieldElement; 9]) -> MultilinearPoly {
    combine(field, &deg4_basis(field), lambdas, 4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormFit {
    pub lambdas: Vec<FieldElement>,
    /// Rank of the expansion map; less than the number of λ's means the
    /// representation is not unique.
    pub rank: usize,
}

fn fit(p: &MultilinearPoly, basis: &[FreeExpansion], m: usize) -> Result<FormFit, PolyError> {
    if p.arity() != m {
        return Err(PolyError::ArityMismatch {
            expected: m,
            got: p.arity(),
        });
    }
    let f = p.field();
    let cols: Vec<MultilinearPoly> = basis.iter().map(|b| b.to_poly(m)).collect::<Result<_, _>>()?;
    let rows: Vec<linalg::Row> = (0..factorial(m))
        .map(|r| cols.iter().map(|c| c.coeffs[r].clone()).collect())
        .collect();
    let rank = linalg::rref(f, rows.clone(), basis.len()).rank();
    match linalg::solve(f, &rows, p.coeffs(), basis.len()) {
        Some(lambdas) => Ok(FormFit { lambdas, rank }),
        None => Err(PolyError::NotRepresentable { rank }),
    }
}

pub fn fit_deg3_form(p: &MultilinearPoly) -> Result<FormFit, PolyError> {
    fit(p, &deg3_basis(p.field()), 3)
}

/// Free λ's are set to zero, so the result is deterministic.
pub fn fit_deg4_form(p: &MultilinearPoly) -> Result<FormFit, PolyError> {
    fit(p, &deg4_basis(p.field()), 4)
}

fn parse_list(field: &FieldDescriptor, s: &str) -> Result<Vec<FieldElement>, PolyError> {
    s.split(',').map(|x| field.parse_element(x).map_err(PolyError::from)).collect()
}

/// Named shortcuts: `s2`, `standard:m`, `vk:k`, `deg3:λ1,λ2`,
/// `deg4:λ1,…,λ9`, `mono:m`, `zero:m`; anything else is read as JSON.
pub fn parse_poly(field: &FieldDescriptor, s: &str) -> Result<MultilinearPoly, PolyError> {
    let t = s.trim();
    let bad = || PolyError::Parse(format!("unrecognised polynomial {t:?}"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    if t == "s2" {
        return Ok(make_s2(field));
    }
    if let Some(rest) = t.strip_prefix("standard:") {
        return make_standard(field, num(rest)?);
    }
    if let Some(rest) = t.strip_prefix("vk:") {
        return make_vk(field, num(rest)? as u32);
    }
    if let Some(rest) = t.strip_prefix("mono:") {
        return make_monomial(field, num(rest)?);
    }
    if let Some(rest) = t.strip_prefix("zero:") {
        return MultilinearPoly::zero(field, num(rest)?);
    }
    if let Some(rest) = t.strip_prefix("deg3:") {
        let l = parse_list(field, rest)?;
        if l.len() != 2 {
            return Err(bad());
        }
        return Ok(make_deg3_form(field, &l[0], &l[1]));
    }
    if let Some(rest) = t.strip_prefix("deg4:") {
        let l: [FieldElement; 9] = parse_list(field, rest)?.try_into().map_err(|_| bad())?;
        return Ok(make_deg4_form(field, &l));
    }
    if t.starts_with('{') {
        let j: PolyJson = serde_json::from_str(t).map_err(|e| PolyError::Parse(e.to_string()))?;
        return MultilinearPoly::from_json(field, &j);
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    #[test]
    fn permutation_ranks() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        for (r, p) in ps.iter().enumerate() {
            assert_eq!(perm_rank(p), Some(r));
        }
        assert_eq!(perm_rank(&[0, 0]), None);
    }

    #[test]
    fn s2_coefficients() {
        let s = make_s2(&q());
        assert_eq!(s.coeff(&[0, 1]), Some(&q().one()));
        assert_eq!(s.coeff(&[1, 0]), Some(&q().from_i64(-1)));
        assert_eq!(make_vk(&q(), 1).unwrap(), s);
        assert_eq!(s.display(), "x1x2 - x2x1");
    }

    #[test]
    fn standard_four_transposition() {
        let s4 = make_standard(&q(), 4).unwrap();
        assert_eq!(s4.coeff(&[1, 0, 2, 3]), Some(&q().from_i64(-1)));
        assert!(make_standard(&q(), 3).unwrap().in_s2_tideal());
    }

    #[test]
    fn coefficient_sums() {
        assert!(make_s2(&q()).in_s2_tideal());
        let m = make_monomial(&q(), 2).unwrap();
        assert_eq!(m.coefficient_sum(), q().one());
        assert!(!m.in_s2_tideal());
    }

    #[test]
    fn deg3_expansion() {
        let p = make_deg3_form(&q(), &q().one(), &q().zero());
        assert_eq!(p.coeff(&[0, 2, 1]), Some(&q().one()));
        assert_eq!(p.coeff(&[0, 1, 2]), Some(&q().from_i64(-1)));
        assert_eq!(p.coeff(&[2, 1, 0]), Some(&q().from_i64(-1)));
        assert_eq!(p.coeff(&[1, 2, 0]), Some(&q().one()));
    }

    #[test]
    fn deg3_fit_roundtrip_gf7() {
        let f = FieldDescriptor::prime(7).unwrap();
        let p = make_deg3_form(&f, &f.from_i64(2), &f.from_i64(5));
        let fit = fit_deg3_form(&p).unwrap();
        assert_eq!(fit.lambdas, vec![f.from_i64(2), f.from_i64(5)]);
        assert_eq!(fit.rank, 2);
        let mono = make_monomial(&f, 3).unwrap();
        assert!(matches!(fit_deg3_form(&mono), Err(PolyError::NotRepresentable { .. })));
    }

    #[test]
    fn deg4_product_term() {
        let f = q();
        let mut l: [FieldElement; 9] = std::array::from_fn(|_| f.zero());
        l[3] = f.one();
        let p = make_deg4_form(&f, &l);
        assert_eq!(p.coeff(&[0, 1, 2, 3]), Some(&f.one()));
        assert_eq!(p.coeff(&[1, 0, 2, 3]), Some(&f.from_i64(-1)));
        let mono = make_monomial(&f, 4).unwrap();
        assert!(matches!(fit_deg4_form(&mono), Err(PolyError::NotRepresentable { .. })));
    }

    #[test]
    fn evaluate_s2_on_basis() {
        let h = AlgebraSpec::hamilton(q()).unwrap();
        let s = make_s2(&q());
        let v = s.evaluate(&h, &[h.basis(1), h.basis(2)]).unwrap();
        assert_eq!(v, h.from_i64s([0, 0, 0, 2]));
        let h2 = AlgebraSpec::char_two(
            FieldDescriptor::binary_default(1).unwrap(),
            FieldElement::Binary(1),
            FieldElement::Binary(1),
        )
        .unwrap();
        let s = make_s2(h2.field());
        assert_eq!(s.evaluate(&h2, &[h2.basis(1), h2.basis(2)]).unwrap(), h2.basis(2));
        assert!(matches!(s.evaluate(&h2, &[h2.basis(1)]), Err(PolyError::ArityMismatch { .. })));
    }

    #[test]
    fn evaluate_with_zero_argument() {
        let h = AlgebraSpec::hamilton(q()).unwrap();
        let p = make_standard(&q(), 3).unwrap();
        let v = p.evaluate(&h, &[h.zero(), h.basis(1), h.basis(2)]).unwrap();
        assert!(h.is_zero(&v));
    }

    #[test]
    fn json_and_shortcuts() {
        let f = FieldDescriptor::prime(5).unwrap();
        let p = parse_poly(&f, r#"{"m":3,"coeffs":[{"perm":[2,1,3],"c":"1"},{"perm":[1,2,3],"c":"-1"}]}"#).unwrap();
        assert_eq!(p.coeff(&[1, 0, 2]), Some(&f.one()));
        assert_eq!(p.coeff(&[0, 1, 2]), Some(&f.from_i64(4)));
        let again = MultilinearPoly::from_json(&f, &p.to_json()).unwrap();
        assert_eq!(again, p);
        assert_eq!(parse_poly(&f, "standard:3").unwrap(), make_standard(&f, 3).unwrap());
        assert_eq!(parse_poly(&f, "vk:2").unwrap().arity(), 4);
        assert_eq!(parse_poly(&f, "deg3:1,0").unwrap(), make_deg3_form(&f, &f.one(), &f.zero()));
        assert!(parse_poly(&f, "deg4:1,2").is_err());
        assert!(parse_poly(&f, "vk:4").is_err());
        assert!(parse_poly(&f, r#"{"m":2,"coeffs":[{"perm":[1,1],"c":"1"}]}"#).is_err());
        assert!(parse_poly(&f, "standard:9").is_err());
    }
}
