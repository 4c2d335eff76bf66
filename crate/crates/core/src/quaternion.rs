//! Generalized quaternion algebras over the exact fields.
//!
//! Odd characteristic: `i² = qi`, `j² = qj`, `k = ij = −ji`.
//! Characteristic 2: `i² = i + u`, `j² = v`, `k = ij = j(i + 1)`.
//!
//! Elements are coordinate vectors over the basis `(1, i, j, k)`; the
//! products of basis elements are tabulated once per algebra.

use std::fmt;

use rand::Rng;

use crate::fields::{FieldDescriptor, FieldElement, FieldError};

pub const ONE: usize = 0;
pub const I: usize = 1;
pub const J: usize = 2;
pub const K: usize = 3;

const BASIS_NAMES: [&str; 4] = ["1", "i", "j", "k"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuatError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("quaternion spec mismatch")]
    SpecMismatch,
    #[error("element has norm zero and is not invertible")]
    NotInvertible,
    #[error("invalid algebra: {0}")]
    InvalidSpec(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

fn parse_err(what: &'static str, input: &str) -> QuatError {
    QuatError::Parse {
        what,
        input: input.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Presentation {
    OddChar { qi: FieldElement, qj: FieldElement },
    CharTwo { u: FieldElement, v: FieldElement },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub c: [FieldElement; 4],
}

impl Quaternion {
    pub fn new(c0: FieldElement, c1: FieldElement, c2: FieldElement, c3: FieldElement) -> Self {
        Quaternion { c: [c0, c1, c2, c3] }
    }
}

/// Sparse product of two basis elements.
type BasisProduct = Vec<(usize, FieldElement)>;

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    field: FieldDescriptor,
    presentation: Presentation,
    division_asserted: bool,
    table: Vec<BasisProduct>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.presentation == other.presentation
            && self.division_asserted == other.division_asserted
    }
}

impl Eq for AlgebraSpec {}

impl AlgebraSpec {
    pub fn odd(field: FieldDescriptor, qi: FieldElement, qj: FieldElement) -> Result<Self, QuatError> {
        if field.characteristic() == 2 {
            return Err(QuatError::InvalidSpec("odd-characteristic presentation over a field of characteristic 2".into()));
        }
        if !field.contains(&qi) || !field.contains(&qj) {
            return Err(QuatError::SpecMismatch);
        }
        if field.is_zero(&qi) || field.is_zero(&qj) {
            return Err(QuatError::InvalidSpec("i² and j² must be nonzero".into()));
        }
        let hamilton = field.is_one(&field.neg(&qi)) && field.is_one(&field.neg(&qj));
        let division = matches!(field, FieldDescriptor::Tower(_)) && hamilton;
        Ok(Self::build(field, Presentation::OddChar { qi, qj }, division))
    }

    /// The `H(a, b)` convention: `i² = −a`, `j² = −b`.
    pub fn hamilton_ab(field: FieldDescriptor, a: FieldElement, b: FieldElement) -> Result<Self, QuatError> {
        let qi = field.neg(&a);
        let qj = field.neg(&b);
        Self::odd(field, qi, qj)
    }

    /// `i² = j² = −1`.
    pub fn hamilton(field: FieldDescriptor) -> Result<Self, QuatError> {
        let m1 = field.from_i64(-1);
        Self::odd(field, m1.clone(), m1)
    }

    pub fn char_two(field: FieldDescriptor, u: FieldElement, v: FieldElement) -> Result<Self, QuatError> {
        if field.characteristic() != 2 {
            return Err(QuatError::InvalidSpec("characteristic-2 presentation over a field of odd characteristic".into()));
        }
        if !field.contains(&u) || !field.contains(&v) {
            return Err(QuatError::SpecMismatch);
        }
        if field.is_zero(&v) {
            return Err(QuatError::InvalidSpec("j² must be nonzero".into()));
        }
        Ok(Self::build(field, Presentation::CharTwo { u, v }, false))
    }

    fn build(field: FieldDescriptor, presentation: Presentation, division_asserted: bool) -> Self {
        let f = &field;
        let one = f.one();
        let neg = |x: &FieldElement| f.neg(x);
        let mut table: Vec<BasisProduct> = vec![Vec::new(); 16];
        for x in 0..4 {
            table[x] = vec![(x, one.clone())];
            table[x * 4] = vec![(x, one.clone())];
        }
        let mut set = |a: usize, b: usize, terms: Vec<(usize, FieldElement)>| {
            table[a * 4 + b] = terms.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        };
        match &presentation {
            Presentation::OddChar { qi, qj } => {
                set(I, I, vec![(ONE, qi.clone())]);
                set(I, J, vec![(K, one.clone())]);
                set(I, K, vec![(J, qi.clone())]);
                set(J, I, vec![(K, neg(&one))]);
                set(J, J, vec![(ONE, qj.clone())]);
                set(J, K, vec![(I, neg(qj))]);
                set(K, I, vec![(J, neg(qi))]);
                set(K, J, vec![(I, qj.clone())]);
                set(K, K, vec![(ONE, neg(&f.mul(qi, qj)))]);
            }
            Presentation::CharTwo { u, v } => {
                set(I, I, vec![(ONE, u.clone()), (I, one.clone())]);
                set(I, J, vec![(K, one.clone())]);
                set(I, K, vec![(J, u.clone()), (K, one.clone())]);
                set(J, I, vec![(J, one.clone()), (K, one.clone())]);
                set(J, J, vec![(ONE, v.clone())]);
                set(J, K, vec![(ONE, v.clone()), (I, v.clone())]);
                set(K, I, vec![(J, u.clone())]);
                set(K, J, vec![(I, v.clone())]);
                set(K, K, vec![(ONE, f.mul(u, v))]);
            }
        }
        AlgebraSpec {
            field,
            presentation,
            division_asserted,
            table,
        }
    }

    pub fn with_division_asserted(mut self, asserted: bool) -> Self {
        self.division_asserted = asserted && !self.field.is_finite();
        self
    }

    /// Same algebra over a larger (compatible) field.
    pub fn with_field(&self, field: FieldDescriptor) -> Result<Self, QuatError> {
        if !self.field.compatible(&field) {
            return Err(QuatError::SpecMismatch);
        }
        let mut out = Self::build(field, self.presentation.clone(), false);
        out.division_asserted = self.division_asserted;
        Ok(out)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn division_asserted(&self) -> bool {
        self.division_asserted
    }

    pub fn is_char_two(&self) -> bool {
        matches!(self.presentation, Presentation::CharTwo { .. })
    }

    /// `(i², j²)` in odd characteristic.
    pub fn odd_params(&self) -> Option<(&FieldElement, &FieldElement)> {
        match &self.presentation {
            Presentation::OddChar { qi, qj } => Some((qi, qj)),
            _ => None,
        }
    }

    pub fn char_two_params(&self) -> Option<(&FieldElement, &FieldElement)> {
        match &self.presentation {
            Presentation::CharTwo { u, v } => Some((u, v)),
            _ => None,
        }
    }

    pub fn zero(&self) -> Quaternion {
        let z = self.field.zero();
        Quaternion::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn one(&self) -> Quaternion {
        self.basis(ONE)
    }

    pub fn basis(&self, idx: usize) -> Quaternion {
        self.scaled_basis(idx, self.field.one())
    }

    pub fn scaled_basis(&self, idx: usize, c: FieldElement) -> Quaternion {
        let mut q = self.zero();
        q.c[idx] = c;
        q
    }

    pub fn scalar(&self, c: FieldElement) -> Quaternion {
        self.scaled_basis(ONE, c)
    }

    pub fn from_i64s(&self, c: [i64; 4]) -> Quaternion {
        Quaternion {
            c: c.map(|x| self.field.from_i64(x)),
        }
    }

    pub fn contains(&self, x: &Quaternion) -> bool {
        x.c.iter().all(|c| self.field.contains(c))
    }

    fn check(&self, x: &Quaternion) -> Result<(), QuatError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(QuatError::SpecMismatch)
        }
    }

    pub fn basis_product(&self, a: usize, b: usize) -> Quaternion {
        let mut q = self.zero();
        for (idx, c) in &self.table[a * 4 + b] {
            q.c[*idx] = c.clone();
        }
        q
    }

    pub fn add(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let f = &self.field;
        Quaternion {
            c: std::array::from_fn(|t| f.add(&x.c[t], &y.c[t])),
        }
    }

    pub fn sub(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let f = &self.field;
        Quaternion {
            c: std::array::from_fn(|t| f.sub(&x.c[t], &y.c[t])),
        }
    }

    pub fn neg(&self, x: &Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| self.field.neg(&x.c[t])),
        }
    }

    pub fn scale(&self, a: &FieldElement, x: &Quaternion) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|t| self.field.mul(a, &x.c[t])),
        }
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let f = &self.field;
        let mut out = self.zero();
        for a in 0..4 {
            if f.is_zero(&x.c[a]) {
                continue;
            }
            for b in 0..4 {
                if f.is_zero(&y.c[b]) {
                    continue;
                }
                let xy = f.mul(&x.c[a], &y.c[b]);
                for (idx, c) in &self.table[a * 4 + b] {
                    out.c[*idx] = f.add(&out.c[*idx], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Checked product.
    pub fn qmul(&self, x: &Quaternion, y: &Quaternion) -> Result<Quaternion, QuatError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// `xy − yx`.
    pub fn s2(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    pub fn trace(&self, x: &Quaternion) -> FieldElement {
        match self.presentation {
            Presentation::OddChar { .. } => self.field.add(&x.c[0], &x.c[0]),
            Presentation::CharTwo { .. } => x.c[1].clone(),
        }
    }

    pub fn in_h0(&self, x: &Quaternion) -> bool {
        self.field.is_zero(&self.trace(x))
    }

    /// `{αi + βj + γk}` in odd characteristic, `span{1, j, k}` in characteristic 2.
    pub fn in_s2_target_set(&self, x: &Quaternion) -> bool {
        match self.presentation {
            Presentation::OddChar { .. } => self.field.is_zero(&x.c[0]),
            Presentation::CharTwo { .. } => self.field.is_zero(&x.c[1]),
        }
    }

    pub fn is_central(&self, x: &Quaternion) -> bool {
        x.c[1..].iter().all(|c| self.field.is_zero(c))
    }

    pub fn is_zero(&self, x: &Quaternion) -> bool {
        x.c.iter().all(|c| self.field.is_zero(c))
    }

    pub fn conj(&self, x: &Quaternion) -> Quaternion {
        let f = &self.field;
        match self.presentation {
            Presentation::OddChar { .. } => Quaternion::new(
                x.c[0].clone(),
                f.neg(&x.c[1]),
                f.neg(&x.c[2]),
                f.neg(&x.c[3]),
            ),
            Presentation::CharTwo { .. } => Quaternion::new(
                f.add(&x.c[0], &x.c[1]),
                x.c[1].clone(),
                x.c[2].clone(),
                x.c[3].clone(),
            ),
        }
    }

    /// Reduced norm, `x·x̄` as a scalar.
    pub fn norm(&self, x: &Quaternion) -> FieldElement {
        let f = &self.field;
        let [c0, c1, c2, c3] = &x.c;
        match &self.presentation {
            Presentation::OddChar { qi, qj } => {
                let t0 = f.square(c0);
                let t1 = f.mul(qi, &f.square(c1));
                let t2 = f.mul(qj, &f.square(c2));
                let t3 = f.mul(&f.mul(qi, qj), &f.square(c3));
                f.add(&f.sub(&f.sub(&t0, &t1), &t2), &t3)
            }
            Presentation::CharTwo { u, v } => {
                let a = f.add(&f.add(&f.square(c0), &f.mul(c0, c1)), &f.mul(u, &f.square(c1)));
                let b = f.add(&f.add(&f.square(c2), &f.mul(c2, c3)), &f.mul(u, &f.square(c3)));
                f.add(&a, &f.mul(v, &b))
            }
        }
    }

    pub fn inv(&self, x: &Quaternion) -> Result<Quaternion, QuatError> {
        self.check(x)?;
        let n = self.norm(x);
        let ninv = self.field.inv(&n).map_err(|_| QuatError::NotInvertible)?;
        Ok(self.scale(&ninv, &self.conj(x)))
    }

    /// `g·x·g⁻¹`.
    pub fn conjugate_by(&self, g: &Quaternion, x: &Quaternion) -> Result<Quaternion, QuatError> {
        let gi = self.inv(g)?;
        Ok(self.mul(&self.mul(g, x), &gi))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|_| self.field.sample_element(rng, height)),
        }
    }

    /// Every element, lexicographic in `(c0, c1, c2, c3)` over the field order.
    pub fn enumerate(&self) -> Result<Vec<Quaternion>, QuatError> {
        let els = self.field.enumerate_elements()?;
        let mut out = Vec::with_capacity(els.len().pow(4));
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        out.push(Quaternion::new(a.clone(), b.clone(), c.clone(), d.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn enumerate_s2_target_set(&self) -> Result<Vec<Quaternion>, QuatError> {
        Ok(self
            .enumerate()?
            .into_iter()
            .filter(|x| self.in_s2_target_set(x))
            .collect())
    }

    /// Literal such as `1+2i-j+1/2*k`, `(1/3)j`, `0b10 i`.
    pub fn parse_quaternion(&self, s: &str) -> Result<Quaternion, QuatError> {
        let mut out = self.zero();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_err("quaternion", s));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut negative = false;
        for ch in compact.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if (ch == '+' || ch == '-') && depth == 0 {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if ch == '-' {
                    negative = !negative;
                    continue;
                }
                negative = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if cur.is_empty() || depth != 0 {
            return Err(parse_err("quaternion", s));
        }
        terms.push((negative, cur));
        for (negative, term) in terms {
            let (coeff, idx) = match term.chars().last() {
                Some('i') => (&term[..term.len() - 1], I),
                Some('j') => (&term[..term.len() - 1], J),
                Some('k') => (&term[..term.len() - 1], K),
                _ => (term.as_str(), ONE),
            };
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let coeff = coeff
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .unwrap_or(coeff);
            let mut c = if coeff.is_empty() {
                if idx == ONE {
                    return Err(parse_err("quaternion", s));
                }
                self.field.one()
            } else {
                self.field.parse_element(coeff).map_err(|_| parse_err("quaternion", s))?
            };
            if negative {
                c = self.field.neg(&c);
            }
            out.c[idx] = self.field.add(&out.c[idx], &c);
        }
        Ok(out)
    }

    pub fn format_quaternion(&self, x: &Quaternion) -> String {
        let f = &self.field;
        let mut out = String::new();
        for (idx, c) in x.c.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let mut negative = false;
            let mut text = f.format_element(c);
            if matches!(f, FieldDescriptor::Rational | FieldDescriptor::Tower(_))
                && f.sign(c) == Some(std::cmp::Ordering::Less)
            {
                negative = true;
                text = f.format_element(&f.neg(c));
            }
            let compound = text.contains(' ');
            let body = if idx == ONE {
                text
            } else if text == "1" {
                BASIS_NAMES[idx].to_string()
            } else if compound {
                format!("({text})*{}", BASIS_NAMES[idx])
            } else {
                format!("{text}*{}", BASIS_NAMES[idx])
            };
            match (out.is_empty(), negative) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (false, true) => {
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

    /// `H(a,b)`, `Hq(qi,qj)`, or `H2[u,v]` over the given field.
    pub fn parse(field: FieldDescriptor, s: &str) -> Result<Self, QuatError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let args = |prefix: &str| -> Option<(String, String)> {
            let rest = t.strip_prefix(prefix)?;
            let inner = rest.strip_prefix(['(', '['])?.strip_suffix([')', ']'])?;
            let (a, b) = inner.split_once(',')?;
            Some((a.to_string(), b.to_string()))
        };
        let el = |x: &str| field.parse_element(x).map_err(|_| parse_err("algebra parameter", s));
        if let Some((a, b)) = args("Hq") {
            return Self::odd(field.clone(), el(&a)?, el(&b)?);
        }
        if let Some((u, v)) = args("H2") {
            return Self::char_two(field.clone(), el(&u)?, el(&v)?);
        }
        if let Some((a, b)) = args("H") {
            return Self::hamilton_ab(field.clone(), el(&a)?, el(&b)?);
        }
        Err(parse_err("algebra spec", s))
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fe = |x: &FieldElement| self.field.format_element(x);
        match &self.presentation {
            Presentation::OddChar { qi, qj } => write!(f, "Hq({},{})", fe(qi), fe(qj)),
            Presentation::CharTwo { u, v } => write!(f, "H2[{},{}]", fe(u), fe(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn h2(k: u32) -> AlgebraSpec {
        let f = FieldDescriptor::binary_default(k).unwrap();
        AlgebraSpec::char_two(f.clone(), f.one(), f.one()).unwrap()
    }

    #[test]
    fn odd_char_basis_products() {
        let h = AlgebraSpec::hamilton(gf(5)).unwrap();
        assert_eq!(h.basis_product(I, J), h.basis(K));
        assert_eq!(h.basis_product(J, I), h.neg(&h.basis(K)));
        // k² = −qi·qj = −1
        assert_eq!(h.basis_product(K, K), h.from_i64s([-1, 0, 0, 0]));
        let g = AlgebraSpec::odd(gf(7), gf(7).from_i64(2), gf(7).from_i64(3)).unwrap();
        assert_eq!(g.basis_product(K, K), g.from_i64s([-6, 0, 0, 0]));
    }

    #[test]
    fn char_two_basis_products() {
        let h = h2(1);
        assert_eq!(h.basis_product(K, I), h.basis(J));
        assert_eq!(h.basis_product(J, K), h.from_i64s([1, 1, 0, 0]));
        assert_eq!(h.basis_product(J, I), h.from_i64s([0, 0, 1, 1]));
    }

    #[test]
    fn hamilton_example_products() {
        let q = AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap();
        let x = q.parse_quaternion("1+i").unwrap();
        let y = q.parse_quaternion("1-i").unwrap();
        assert_eq!(q.mul(&x, &y), q.from_i64s([2, 0, 0, 0]));
        let inv_i = q.inv(&q.basis(I)).unwrap();
        assert_eq!(inv_i, q.neg(&q.basis(I)));
        assert_eq!(q.norm(&q.from_i64s([1, 1, 1, 1])), q.field().from_i64(4));
    }

    #[test]
    fn trace_and_subsets() {
        let h = AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap();
        assert_eq!(h.trace(&h.from_i64s([1, 1, 1, 1])), h.field().from_i64(2));
        assert!(h.in_h0(&h.from_i64s([0, 1, 1, 0])));
        assert!(h.in_s2_target_set(&h.from_i64s([0, 1, 0, 1])));
        let h5 = AlgebraSpec::hamilton(gf(5)).unwrap();
        assert!(!h5.in_h0(&h5.one()));
        let c2 = h2(1);
        assert!(c2.in_h0(&c2.from_i64s([1, 0, 1, 0])));
        assert!(c2.in_s2_target_set(&c2.from_i64s([1, 0, 1, 0])));
        assert!(!c2.in_s2_target_set(&c2.basis(I)));
        assert_eq!(c2.trace(&c2.from_i64s([1, 1, 0, 1])), c2.field().one());
        assert!(h.is_central(&h.from_i64s([5, 0, 0, 0])));
        assert!(!h.is_central(&h.basis(I)));
        assert!(h.is_central(&h.zero()));
    }

    #[test]
    fn char_two_inverse_of_one_plus_i() {
        // N(1 + i) = 1 + 1 + u = u = 1 over GF(2)
        let h = h2(1);
        let x = h.from_i64s([1, 1, 0, 0]);
        assert_eq!(h.norm(&x), h.field().one());
        let xi = h.inv(&x).unwrap();
        assert_eq!(h.mul(&x, &xi), h.one());
        // N(j + k) = v(1 + 1 + u) = 1, N(1 + j) = 1 + v = 0
        assert_eq!(h.inv(&h.from_i64s([1, 0, 1, 0])), Err(QuatError::NotInvertible));
    }

    #[test]
    fn exhaustive_associativity_gf2() {
        let h = h2(1);
        let all = h.enumerate().unwrap();
        assert_eq!(all.len(), 16);
        for x in &all {
            for y in &all {
                let xy = h.mul(x, y);
                for z in &all {
                    assert_eq!(h.mul(&xy, z), h.mul(x, &h.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn associativity_gf3_hamilton() {
        let h = AlgebraSpec::hamilton(gf(3)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let (x, y, z) = (h.basis(a), h.basis(b), h.basis(c));
                    assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let (x, y, z) = (h.sample(&mut rng, 1), h.sample(&mut rng, 1), h.sample(&mut rng, 1));
            assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        }
    }

    #[test]
    fn commutator_constants_hamilton() {
        let h = AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap();
        let b = |i| h.basis(i);
        let c = |s: [i64; 4]| h.from_i64s(s);
        assert_eq!(h.s2(&b(I), &b(K)), c([0, 0, -2, 0]));
        assert_eq!(h.s2(&b(K), &b(I)), c([0, 0, 2, 0]));
        assert_eq!(h.s2(&b(J), &b(I)), c([0, 0, 0, -2]));
        assert_eq!(h.s2(&b(I), &b(J)), c([0, 0, 0, 2]));
        assert_eq!(h.s2(&b(J), &b(K)), c([0, 2, 0, 0]));
        assert_eq!(h.s2(&b(K), &b(J)), c([0, -2, 0, 0]));
    }

    #[test]
    fn commutator_constants_general_params() {
        let f = gf(11);
        let (qi, qj) = (f.from_i64(3), f.from_i64(7));
        let h = AlgebraSpec::odd(f.clone(), qi.clone(), qj.clone()).unwrap();
        let two = f.from_i64(2);
        assert_eq!(h.s2(&h.basis(I), &h.basis(J)), h.scaled_basis(K, two.clone()));
        assert_eq!(h.s2(&h.basis(I), &h.basis(K)), h.scaled_basis(J, f.mul(&two, &qi)));
        assert_eq!(h.s2(&h.basis(J), &h.basis(K)), h.scaled_basis(I, f.neg(&f.mul(&two, &qj))));
    }

    #[test]
    fn commutator_constants_char_two() {
        let h = h2(1);
        assert_eq!(h.s2(&h.basis(I), &h.basis(K)), h.basis(K));
        assert_eq!(h.s2(&h.basis(I), &h.basis(J)), h.basis(J));
        // s₂(j, k) = j² = v
        assert_eq!(h.s2(&h.basis(J), &h.basis(K)), h.one());
    }

    #[test]
    fn finite_algebras_split() {
        for h in [AlgebraSpec::hamilton(gf(3)).unwrap(), h2(1), h2(2)] {
            let found = h
                .enumerate()
                .unwrap()
                .into_iter()
                .any(|x| !h.is_zero(&x) && h.field().is_zero(&h.norm(&x)));
            assert!(found, "{h}");
        }
    }

    #[test]
    fn norm_is_x_times_conjugate_exhaustive_char_two() {
        for h in [h2(1), h2(2)] {
            for x in h.enumerate().unwrap() {
                let n = h.norm(&x);
                assert_eq!(h.mul(&x, &h.conj(&x)), h.scalar(n.clone()));
                assert_eq!(h.mul(&h.conj(&x), &x), h.scalar(n));
                assert_eq!(h.add(&x, &h.conj(&x)), h.scalar(h.trace(&x)));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let h = AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap();
        let x = h.parse_quaternion("1 + 2i - j + 1/2*k").unwrap();
        assert_eq!(x.c[3], h.field().parse_element("1/2").unwrap());
        assert_eq!(h.format_quaternion(&x), "1 + 2*i - j + 1/2*k");
        assert_eq!(h.parse_quaternion(&h.format_quaternion(&x)).unwrap(), x);
        assert_eq!(h.parse_quaternion("-k").unwrap(), h.from_i64s([0, 0, 0, -1]));
        assert_eq!(h.parse_quaternion("(2/3)j").unwrap().c[2], h.field().parse_element("2/3").unwrap());
        assert_eq!(h.format_quaternion(&h.zero()), "0");
        assert!(h.parse_quaternion("1 + q").is_err());
        assert!(h.parse_quaternion("").is_err());

        let gf4 = FieldDescriptor::binary_default(2).unwrap();
        let a = AlgebraSpec::parse(gf4.clone(), "H2[1,0b10)").unwrap();
        assert_eq!(a.char_two_params().unwrap().1, &FieldElement::Binary(2));
        let x = a.parse_quaternion("0b11 + 0b10 j").unwrap();
        assert_eq!(a.parse_quaternion(&a.format_quaternion(&x)).unwrap(), x);

        let h11 = AlgebraSpec::parse(FieldDescriptor::Rational, "H(1,1)").unwrap();
        assert_eq!(h11, h);
        assert_eq!(h11.to_string(), "Hq(-1,-1)");
        assert!(AlgebraSpec::parse(gf4, "H(1,1)").is_err());
        assert!(AlgebraSpec::parse(gf(3), "H2[1,1]").is_err());
        assert!(AlgebraSpec::parse(gf(3), "Hq(0,1)").is_err());
    }

    #[test]
    fn division_flag_defaults() {
        assert!(!AlgebraSpec::hamilton(gf(3)).unwrap().division_asserted());
        assert!(AlgebraSpec::hamilton(FieldDescriptor::tower_base()).unwrap().division_asserted());
        assert!(!AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap().division_asserted());
        assert!(AlgebraSpec::hamilton(FieldDescriptor::Rational)
            .unwrap()
            .with_division_asserted(true)
            .division_asserted());
        assert!(!AlgebraSpec::hamilton(gf(3)).unwrap().with_division_asserted(true).division_asserted());
    }
}
