//! Exact scalar fields.
//!
//! Four families are supported behind a single runtime [`FieldDescriptor`]:
//! the rationals, prime fields GF(p), binary fields GF(2^k) in a polynomial
//! basis, and real quadratic towers over Q (the constructible reals used as
//! a concrete Pythagorean field). Elements are plain values; every operation
//! goes through the descriptor.

pub mod gf2;
pub mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use tower::TowerElem;

/// Largest supported prime; products stay inside `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

pub const DEFAULT_SAMPLE_HEIGHT: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("binary extension degree {0} outside 1..=16")]
    BadDegree(u32),
    #[error("modulus {modulus:#b} is not an irreducible polynomial of degree {k}")]
    Reducible { k: u32, modulus: u64 },
    #[error("radicand must be positive")]
    NonPositiveRadicand,
    #[error("field is infinite")]
    InfiniteField,
    #[error("operation needs a tower field")]
    NotATower,
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

fn parse_err(what: &'static str, input: &str) -> FieldError {
    FieldError::Parse {
        what,
        input: input.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryField {
    k: u32,
    modulus: u64,
}

impl BinaryField {
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn size(&self) -> u64 {
        1u64 << self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
    Binary(BinaryField),
    /// Radicands in adjunction order; radicand `L` lives at level `< L`.
    Tower(Arc<Vec<TowerElem>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime(u64),
    Binary(u64),
    Tower(TowerElem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks; `None` for non-residues.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

fn binary_pow(f: &BinaryField, mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = gf2::mulmod(acc, b, f.modulus);
        }
        b = gf2::mulmod(b, b, f.modulus);
        e >>= 1;
    }
    acc
}

impl FieldDescriptor {
    pub fn rational() -> Self {
        FieldDescriptor::Rational
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    pub fn binary(k: u32, modulus: u64) -> Result<Self, FieldError> {
        if k == 0 || k > gf2::MAX_DEGREE {
            return Err(FieldError::BadDegree(k));
        }
        if gf2::degree(modulus) != Some(k) || !gf2::is_irreducible(modulus) {
            return Err(FieldError::Reducible { k, modulus });
        }
        Ok(FieldDescriptor::Binary(BinaryField { k, modulus }))
    }

    /// GF(2^k) with the shipped modulus (k ≤ 8).
    pub fn binary_default(k: u32) -> Result<Self, FieldError> {
        if k == 0 || k as usize > gf2::DEFAULT_MODULI.len() {
            return Err(FieldError::BadDegree(k));
        }
        Self::binary(k, gf2::DEFAULT_MODULI[k as usize - 1] as u64)
    }

    /// The rationals as the ground level of a tower.
    pub fn tower_base() -> Self {
        FieldDescriptor::Tower(Arc::new(Vec::new()))
    }

    /// Builds a tower by adjoining the given rationals in order.
    pub fn tower_of(radicands: &[BigRational]) -> Result<Self, FieldError> {
        let mut t = Self::tower_base();
        for d in radicands {
            t = t.tower_adjoin(&FieldElement::Tower(TowerElem::Base(d.clone())))?;
        }
        Ok(t)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rational | FieldDescriptor::Tower(_) => 0,
            FieldDescriptor::Prime(p) => *p,
            FieldDescriptor::Binary(_) => 2,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::Prime(_) | FieldDescriptor::Binary(_))
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Prime(p) => Some(*p),
            FieldDescriptor::Binary(b) => Some(b.size()),
            _ => None,
        }
    }

    pub fn tower_radicands(&self) -> Option<&[TowerElem]> {
        match self {
            FieldDescriptor::Tower(r) => Some(r.as_slice()),
            _ => None,
        }
    }

    /// Same family and parameters; towers are compatible when one radicand
    /// list extends the other (elements of the smaller tower embed).
    pub fn compatible(&self, other: &FieldDescriptor) -> bool {
        match (self, other) {
            (FieldDescriptor::Tower(a), FieldDescriptor::Tower(b)) => {
                let n = a.len().min(b.len());
                a[..n] == b[..n]
            }
            _ => self == other,
        }
    }

    /// The larger of two compatible descriptors.
    pub fn join(&self, other: &FieldDescriptor) -> Option<FieldDescriptor> {
        if !self.compatible(other) {
            return None;
        }
        match (self, other) {
            (FieldDescriptor::Tower(a), FieldDescriptor::Tower(b)) if b.len() > a.len() => {
                Some(other.clone())
            }
            _ => Some(self.clone()),
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        match (self, x) {
            (FieldDescriptor::Rational, FieldElement::Rational(_)) => true,
            (FieldDescriptor::Prime(p), FieldElement::Prime(v)) => v < p,
            (FieldDescriptor::Binary(b), FieldElement::Binary(v)) => *v < b.size(),
            (FieldDescriptor::Tower(r), FieldElement::Tower(t)) => t.level() <= r.len(),
            _ => false,
        }
    }

    fn mismatch(&self, x: &FieldElement) -> FieldError {
        FieldError::DescriptorMismatch(format!("{x:?} is not an element of {self}"))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self {
            FieldDescriptor::Rational => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldDescriptor::Prime(p) => FieldElement::Prime(n.rem_euclid(*p as i64) as u64),
            FieldDescriptor::Binary(_) => FieldElement::Binary(n.rem_euclid(2) as u64),
            FieldDescriptor::Tower(_) => {
                FieldElement::Tower(TowerElem::Base(BigRational::from_integer(n.into())))
            }
        }
    }

    /// Image of a rational under the prime-field map; `None` when the
    /// denominator vanishes in this characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Option<FieldElement> {
        match self {
            FieldDescriptor::Rational => Some(FieldElement::Rational(q.clone())),
            FieldDescriptor::Tower(_) => Some(FieldElement::Tower(TowerElem::Base(q.clone()))),
            _ => {
                let c = self.characteristic() as i64;
                let reduce = |n: &BigInt| -> i64 {
                    (n % BigInt::from(c)).to_i64().expect("small residue")
                };
                let num = self.from_i64(reduce(q.numer()));
                let den = self.from_i64(reduce(q.denom()));
                self.div(&num, &den).ok()
            }
        }
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime(v) | FieldElement::Binary(v) => *v == 0,
            FieldElement::Tower(t) => t.is_zero(),
        }
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        *x == self.one()
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (self, x, y) {
            (FieldDescriptor::Rational, FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a + b)
            }
            (FieldDescriptor::Prime(p), FieldElement::Prime(a), FieldElement::Prime(b)) => {
                FieldElement::Prime((a + b) % p)
            }
            (FieldDescriptor::Binary(_), FieldElement::Binary(a), FieldElement::Binary(b)) => {
                FieldElement::Binary(a ^ b)
            }
            (FieldDescriptor::Tower(_), FieldElement::Tower(a), FieldElement::Tower(b)) => {
                FieldElement::Tower(tower::add(a, b))
            }
            _ => panic!("field descriptor mismatch in add over {self}"),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        match (self, x) {
            (FieldDescriptor::Rational, FieldElement::Rational(a)) => FieldElement::Rational(-a),
            (FieldDescriptor::Prime(p), FieldElement::Prime(a)) => FieldElement::Prime((p - a) % p),
            (FieldDescriptor::Binary(_), FieldElement::Binary(a)) => FieldElement::Binary(*a),
            (FieldDescriptor::Tower(_), FieldElement::Tower(a)) => FieldElement::Tower(tower::neg(a)),
            _ => panic!("field descriptor mismatch in neg over {self}"),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (self, x, y) {
            (FieldDescriptor::Rational, FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a * b)
            }
            (FieldDescriptor::Prime(p), FieldElement::Prime(a), FieldElement::Prime(b)) => {
                FieldElement::Prime(a * b % p)
            }
            (FieldDescriptor::Binary(f), FieldElement::Binary(a), FieldElement::Binary(b)) => {
                FieldElement::Binary(gf2::mulmod(*a, *b, f.modulus))
            }
            (FieldDescriptor::Tower(r), FieldElement::Tower(a), FieldElement::Tower(b)) => {
                FieldElement::Tower(tower::mul(r, a, b))
            }
            _ => panic!("field descriptor mismatch in mul over {self}"),
        }
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (self, x) {
            (FieldDescriptor::Rational, FieldElement::Rational(a)) => FieldElement::Rational(a.recip()),
            (FieldDescriptor::Prime(p), FieldElement::Prime(a)) => FieldElement::Prime(pow_mod(*a, p - 2, *p)),
            (FieldDescriptor::Binary(f), FieldElement::Binary(a)) => {
                FieldElement::Binary(binary_pow(f, *a, f.size() - 2))
            }
            (FieldDescriptor::Tower(r), FieldElement::Tower(a)) => {
                FieldElement::Tower(tower::inv(r, a).ok_or(FieldError::DivisionByZero)?)
            }
            _ => return Err(self.mismatch(x)),
        })
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Checked entry point: validates membership before dispatching.
    pub fn arith(
        &self,
        op: ArithOp,
        x: &FieldElement,
        y: Option<&FieldElement>,
    ) -> Result<FieldElement, FieldError> {
        if !self.contains(x) {
            return Err(self.mismatch(x));
        }
        let binary = |y: Option<&FieldElement>| -> Result<FieldElement, FieldError> {
            let y = y.ok_or_else(|| FieldError::DescriptorMismatch("missing operand".into()))?;
            if !self.contains(y) {
                return Err(self.mismatch(y));
            }
            Ok(y.clone())
        };
        match op {
            ArithOp::Add => Ok(self.add(x, &binary(y)?)),
            ArithOp::Sub => Ok(self.sub(x, &binary(y)?)),
            ArithOp::Mul => Ok(self.mul(x, &binary(y)?)),
            ArithOp::Div => self.div(x, &binary(y)?),
            ArithOp::Neg => Ok(self.neg(x)),
            ArithOp::Inv => self.inv(x),
        }
    }

    /// Exact sign for ordered fields (rationals and towers).
    pub fn sign(&self, x: &FieldElement) -> Option<Ordering> {
        match (self, x) {
            (FieldDescriptor::Rational, FieldElement::Rational(a)) => Some(a.cmp(&BigRational::zero())),
            (FieldDescriptor::Tower(r), FieldElement::Tower(a)) => Some(tower::sign(r, a)),
            _ => None,
        }
    }

    /// Canonical square root inside the field as currently represented:
    /// the root in `[0, p/2]` for GF(p), the Frobenius root in GF(2^k), the
    /// nonnegative root for ordered fields. Never extends a tower.
    pub fn sqrt_if_square(&self, x: &FieldElement) -> Option<FieldElement> {
        match (self, x) {
            (FieldDescriptor::Rational, FieldElement::Rational(a)) => {
                tower::rational_sqrt(a).map(FieldElement::Rational)
            }
            (FieldDescriptor::Prime(p), FieldElement::Prime(a)) => {
                sqrt_mod(*a, *p).map(|r| FieldElement::Prime(r.min((p - r) % p)))
            }
            (FieldDescriptor::Binary(f), FieldElement::Binary(a)) => {
                Some(FieldElement::Binary(binary_pow(f, *a, 1u64 << (f.k - 1))))
            }
            (FieldDescriptor::Tower(r), FieldElement::Tower(a)) => {
                if tower::sign(r, a) == Ordering::Less {
                    return None;
                }
                let root = tower::sqrt_within(r, a, r.len())?;
                let root = if tower::sign(r, &root) == Ordering::Less {
                    tower::neg(&root)
                } else {
                    root
                };
                Some(FieldElement::Tower(root))
            }
            _ => None,
        }
    }

    /// Extends a tower so that `x` has a square root. Unchanged when the
    /// root already exists.
    pub fn tower_adjoin(&self, x: &FieldElement) -> Result<FieldDescriptor, FieldError> {
        let FieldDescriptor::Tower(rads) = self else {
            return Err(FieldError::NotATower);
        };
        let FieldElement::Tower(t) = x else {
            return Err(self.mismatch(x));
        };
        if !self.contains(x) {
            return Err(self.mismatch(x));
        }
        if tower::sign(rads, t) != Ordering::Greater {
            return Err(FieldError::NonPositiveRadicand);
        }
        if self.sqrt_if_square(x).is_some() {
            return Ok(self.clone());
        }
        let mut next = (**rads).clone();
        next.push(t.clone());
        Ok(FieldDescriptor::Tower(Arc::new(next)))
    }

    pub fn enumerate_elements(&self) -> Result<Vec<FieldElement>, FieldError> {
        match self {
            FieldDescriptor::Prime(p) => Ok((0..*p).map(FieldElement::Prime).collect()),
            FieldDescriptor::Binary(b) => Ok((0..b.size()).map(FieldElement::Binary).collect()),
            _ => Err(FieldError::InfiniteField),
        }
    }

    /// Uniform for finite fields; small-height fractions otherwise, with
    /// every tower level populated.
    pub fn sample_element<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> FieldElement {
        let h = height.max(1) as i64;
        let small = |rng: &mut R| -> BigRational {
            let n = rng.gen_range(-h..=h);
            let d = rng.gen_range(1..=h);
            BigRational::new(n.into(), d.into())
        };
        match self {
            FieldDescriptor::Rational => FieldElement::Rational(small(rng)),
            FieldDescriptor::Prime(p) => FieldElement::Prime(rng.gen_range(0..*p)),
            FieldDescriptor::Binary(b) => FieldElement::Binary(rng.gen_range(0..b.size())),
            FieldDescriptor::Tower(r) => {
                fn level<R: Rng + ?Sized>(
                    l: usize,
                    rng: &mut R,
                    small: &dyn Fn(&mut R) -> BigRational,
                ) -> TowerElem {
                    if l == 0 {
                        TowerElem::Base(small(rng))
                    } else {
                        let a = level(l - 1, rng, small);
                        let b = level(l - 1, rng, small);
                        tower::add(&a, &tower_scale_sqrt(l, b))
                    }
                }
                FieldElement::Tower(level(r.len(), rng, &small))
            }
        }
    }

    /// Deterministic single sample from a seed.
    pub fn sample_seeded(&self, seed: u64, height: u64) -> FieldElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_element(&mut rng, height)
    }

    /// `√d_L` for the given level.
    pub fn tower_generator(&self, level: usize) -> Option<FieldElement> {
        let rads = self.tower_radicands()?;
        if level == 0 || level > rads.len() {
            return None;
        }
        Some(FieldElement::Tower(tower_scale_sqrt(level, TowerElem::one())))
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let t = s.trim();
        match self {
            FieldDescriptor::Binary(b) => {
                let v = if let Some(bits) = t.strip_prefix("0b") {
                    u64::from_str_radix(bits, 2).map_err(|_| parse_err("binary field element", s))?
                } else {
                    t.parse::<u64>().map_err(|_| parse_err("binary field element", s))?
                };
                if v >= b.size() {
                    return Err(parse_err("binary field element", s));
                }
                Ok(FieldElement::Binary(v))
            }
            _ => {
                let q = parse_rational(t).ok_or_else(|| parse_err("field element", s))?;
                self.from_rational(&q).ok_or_else(|| parse_err("field element", s))
            }
        }
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        match (self, x) {
            (_, FieldElement::Rational(q)) => q.to_string(),
            (_, FieldElement::Prime(v)) => v.to_string(),
            (FieldDescriptor::Binary(b), FieldElement::Binary(v)) => {
                format!("0b{:0width$b}", v, width = b.k as usize)
            }
            (_, FieldElement::Binary(v)) => format!("0b{v:b}"),
            (FieldDescriptor::Tower(r), FieldElement::Tower(t)) => format_tower(r, t),
            (_, FieldElement::Tower(t)) => format_tower(&[], t),
        }
    }
}

fn tower_scale_sqrt(level: usize, b: TowerElem) -> TowerElem {
    if b.is_zero() {
        return b;
    }
    TowerElem::Ext {
        level,
        a: Box::new(TowerElem::zero()),
        b: Box::new(b),
    }
}

fn format_tower(rads: &[TowerElem], t: &TowerElem) -> String {
    match t {
        TowerElem::Base(q) => q.to_string(),
        TowerElem::Ext { level, a, b } => {
            let d = rads
                .get(*level - 1)
                .map(|d| format_tower(rads, d))
                .unwrap_or_else(|| format!("d{level}"));
            let root = format!("sqrt({d})");
            let bpart = match b.as_rational() {
                Some(q) if q.is_one() => root,
                Some(q) if *q == -BigRational::one() => format!("-{root}"),
                Some(q) => format!("{q}*{root}"),
                None => format!("({})*{root}", format_tower(rads, b)),
            };
            if a.is_zero() {
                bpart
            } else if let Some(rest) = bpart.strip_prefix('-') {
                format!("{} - {}", format_tower(rads, a), rest)
            } else {
                format!("{} + {}", format_tower(rads, a), bpart)
            }
        }
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
            FieldDescriptor::Binary(b) => write!(f, "GF(2^{}:{:b})", b.k, b.modulus),
            FieldDescriptor::Tower(r) => {
                let parts: Vec<String> = (0..r.len()).map(|i| format_tower(&r[..i], &r[i])).collect();
                write!(f, "QTower[{}]", parts.join(","))
            }
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = FieldError;

    /// `Q`, `GF(p)`, `GF(2^k)`, `GF(2^k:bits)`, `QTower[d1,d2,...]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" {
            return Ok(FieldDescriptor::Rational);
        }
        if let Some(inner) = t.strip_prefix("QTower[").and_then(|r| r.strip_suffix(']')) {
            let mut rads = Vec::new();
            for part in inner.split(',').filter(|p| !p.is_empty()) {
                rads.push(parse_rational(part).ok_or_else(|| parse_err("tower radicand", part))?);
            }
            return FieldDescriptor::tower_of(&rads);
        }
        if let Some(inner) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            if let Some(rest) = inner.strip_prefix("2^") {
                let (k, bits) = match rest.split_once(':') {
                    Some((k, bits)) => (k, Some(bits)),
                    None => (rest, None),
                };
                let k: u32 = k.parse().map_err(|_| parse_err("extension degree", s))?;
                return match bits {
                    Some(bits) => {
                        let m = u64::from_str_radix(bits, 2).map_err(|_| parse_err("modulus bits", s))?;
                        FieldDescriptor::binary(k, m)
                    }
                    None => FieldDescriptor::binary_default(k),
                };
            }
            let q: u64 = inner.parse().map_err(|_| parse_err("field order", s))?;
            if q > 2 && q.is_power_of_two() {
                return FieldDescriptor::binary_default(q.trailing_zeros());
            }
            return FieldDescriptor::prime(q);
        }
        Err(parse_err("field spec", s))
    }
}
