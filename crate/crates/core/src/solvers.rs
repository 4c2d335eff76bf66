//! Witness-producing constructions.
//!
//! Every public solver re-checks its defining equations with exact
//! arithmetic before returning; a failed check is reported as
//! [`SolveError::PostCheck`] rather than handed back as an answer.
//!
//! Solvers run inside a [`SolveCtx`], which owns the algebra. Over a quadratic
//! tower the context may grow the field when a square root is needed; every
//! adjunction is logged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fields::{FieldDescriptor, FieldElement, FieldError, DEFAULT_SAMPLE_HEIGHT};
use crate::linalg;
use crate::multilinear::{MultilinearPoly, PolyError};
use crate::quaternion::{AlgebraSpec, QuatError, Quaternion, J, K, ONE};

pub const DEFAULT_MAX_DEPTH: u32 = 10;
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("degenerate case: {0}")]
    DegenerateCase(String),
    #[error("target is not in the s2 target set")]
    TargetNotPure,
    #[error("depth {0} exceeds the configured maximum")]
    DepthTooLarge(u32),
    #[error("a·x = x·b has only the zero solution")]
    NoNonzeroSolution,
    #[error("not canonicalizable: {s} has no square root in the field")]
    NotCanonicalizable { s: String },
    #[error("the intertwiner found has norm zero")]
    NotInvertible,
    #[error("polynomial takes no non-central value on basis tuples")]
    PolynomialCentralOrZero,
    #[error("search budget exhausted after {evaluations} evaluations: {detail}")]
    SearchBudgetExhausted { evaluations: u64, detail: String },
    #[error("no pair in the s2 set with invertible commutator")]
    NoInvertibleCommutator,
    #[error("operation requires {0}")]
    WrongCharacteristic(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: post-check failed in {0}")]
    PostCheck(String),
}

impl SolveError {
    /// Outcomes that are legitimate answers ("no witness here") rather
    /// than malfunctions.
    pub fn is_negative_result(&self) -> bool {
        matches!(
            self,
            SolveError::NoSolution(_)
                | SolveError::DegenerateCase(_)
                | SolveError::NoNonzeroSolution
                | SolveError::NotCanonicalizable { .. }
                | SolveError::NotInvertible
                | SolveError::PolynomialCentralOrZero
                | SolveError::SearchBudgetExhausted { .. }
                | SolveError::NoInvertibleCommutator
                | SolveError::Precondition(_)
        )
    }
}

pub type SolveResult<T> = Result<T, SolveError>;

fn post_check(ok: bool, what: &str) -> SolveResult<()> {
    if ok {
        Ok(())
    } else {
        Err(SolveError::PostCheck(what.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub sphere_routes: u64,
    pub linear_routes: u64,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
pub struct SolveCtx {
    spec: AlgebraSpec,
    /// Extend a tower when a square root is missing.
    pub adjoin: bool,
    /// Let `solve_cross` fall back to a direct linear solve when the
    /// sphere system has no solution in the field.
    pub cross_fallback: bool,
    pub max_depth: u32,
    pub budget: u64,
    pub seed: u64,
    pub height: u64,
    adjunctions: Vec<String>,
    pub stats: SolveStats,
}

impl SolveCtx {
    pub fn new(spec: AlgebraSpec) -> Self {
        SolveCtx {
            spec,
            adjoin: true,
            cross_fallback: true,
            max_depth: DEFAULT_MAX_DEPTH,
            budget: DEFAULT_SEARCH_BUDGET,
            seed: 0,
            height: DEFAULT_SAMPLE_HEIGHT,
            adjunctions: Vec::new(),
            stats: SolveStats::default(),
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.spec.field()
    }

    /// Radicands adjoined so far, formatted.
    pub fn adjunctions(&self) -> &[String] {
        &self.adjunctions
    }

    /// A square root of `x`, extending a tower if allowed.
    pub fn sqrt(&mut self, x: &FieldElement) -> Option<FieldElement> {
        if let Some(r) = self.field().sqrt_if_square(x) {
            return Some(r);
        }
        if !self.adjoin || !matches!(self.field(), FieldDescriptor::Tower(_)) {
            return None;
        }
        let bigger = self.field().tower_adjoin(x).ok()?;
        self.adjunctions.push(bigger.format_element(x));
        self.spec = self.spec.with_field(bigger).ok()?;
        self.field().sqrt_if_square(x)
    }
}

fn fe_string(ctx: &SolveCtx, x: &FieldElement) -> String {
    ctx.field().format_element(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSolution {
    pub x: [FieldElement; 3],
}

impl SphereSolution {
    /// `x₁² + x₂² + x₃² = 1` and `a·x₁ + b·x₂ + c·x₃ = 0`.
    pub fn satisfies(&self, f: &FieldDescriptor, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> bool {
        let [x1, x2, x3] = &self.x;
        let sq = f.add(&f.add(&f.square(x1), &f.square(x2)), &f.square(x3));
        let dot = f.add(&f.add(&f.mul(a, x1), &f.mul(b, x2)), &f.mul(c, x3));
        f.is_one(&sq) && f.is_zero(&dot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossRoute {
    Sphere,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSolution {
    pub x: [FieldElement; 6],
    pub route: CrossRoute,
}

impl CrossSolution {
    /// `x₂x₆ − x₃x₅ = a`, `x₃x₄ − x₁x₆ = b`, `x₁x₅ − x₂x₄ = c`.
    pub fn satisfies(&self, f: &FieldDescriptor, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> bool {
        let [x1, x2, x3, x4, x5, x6] = &self.x;
        let e1 = f.sub(&f.mul(x2, x6), &f.mul(x3, x5));
        let e2 = f.sub(&f.mul(x3, x4), &f.mul(x1, x6));
        let e3 = f.sub(&f.mul(x1, x5), &f.mul(x2, x4));
        e1 == *a && e2 == *b && e3 == *c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageWitness {
    pub args: Vec<Quaternion>,
    pub value: Quaternion,
}

/// Unit vector orthogonal to `(a, b, c)`, following the case analysis of
/// the classical proof. Over a tower the context may adjoin `√(a² + b²)`.
pub fn solve_sphere_orthogonal(
    ctx: &mut SolveCtx,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
) -> SolveResult<SphereSolution> {
    let sol = sphere_cases(ctx, a, b, c)?;
    post_check(sol.satisfies(ctx.field(), a, b, c), "solve_sphere_orthogonal")?;
    Ok(sol)
}

fn sphere_cases(ctx: &mut SolveCtx, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> SolveResult<SphereSolution> {
    let f = ctx.field().clone();
    let (zero, one) = (f.zero(), f.one());
    let done = |x1: FieldElement, x2: FieldElement, x3: FieldElement| Ok(SphereSolution { x: [x1, x2, x3] });
    if f.is_zero(a) {
        if f.is_zero(b) {
            // a = b = 0: (1, 0, 0) is orthogonal whatever c is.
            return done(one, zero.clone(), zero);
        }
        let s = sphere_cases(ctx, b, a, c)?;
        let [y1, y2, y3] = s.x;
        return done(y2, y1, y3);
    }
    let two_char = f.characteristic() == 2;
    let a2b2 = f.add(&f.square(a), &f.square(b));
    if f.is_zero(&a2b2) {
        if f.is_zero(c) {
            return done(f.neg(&f.div(b, a)?), one.clone(), one);
        }
        if !two_char {
            let two = f.from_i64(2);
            let x1 = f.neg(&f.div(c, &f.mul(&two, a))?);
            let x2 = f.neg(&f.div(c, &f.mul(&two, b))?);
            return done(x1, x2, one);
        }
        let apc = f.add(a, c);
        if f.is_zero(&apc) {
            return Err(SolveError::DegenerateCase(format!(
                "characteristic 2 with a = b = c = {}: x1+x2+x3 would have to be 1 and 0",
                f.format_element(a)
            )));
        }
        return done(zero, f.div(c, &apc)?, f.div(a, &apc)?);
    }
    if two_char {
        let apb = f.add(a, b);
        return done(f.neg(&f.div(b, &apb)?), f.div(a, &apb)?, zero);
    }
    let Some(d) = ctx.sqrt(&a2b2) else {
        return Err(SolveError::NoSolution(format!(
            "a²+b² = {} is not a square",
            f.format_element(&a2b2)
        )));
    };
    let f = ctx.field().clone();
    done(f.neg(&f.div(b, &d)?), f.div(a, &d)?, f.zero())
}

/// `(x₁, x₂, x₃) × (x₄, x₅, x₆) = (a, b, c)`.
pub fn solve_cross(
    ctx: &mut SolveCtx,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
) -> SolveResult<CrossSolution> {
    let sol = match solve_sphere_orthogonal(ctx, a, b, c) {
        Ok(s) => {
            let f = ctx.field();
            let [x1, x2, x3] = s.x;
            let x4 = f.sub(&f.mul(b, &x3), &f.mul(&x2, c));
            let x5 = f.sub(&f.mul(&x1, c), &f.mul(a, &x3));
            let x6 = f.sub(&f.mul(a, &x2), &f.mul(&x1, b));
            ctx.stats.sphere_routes += 1;
            CrossSolution {
                x: [x1, x2, x3, x4, x5, x6],
                route: CrossRoute::Sphere,
            }
        }
        Err(e @ (SolveError::NoSolution(_) | SolveError::DegenerateCase(_))) => {
            if !ctx.cross_fallback {
                return Err(e);
            }
            ctx.stats.linear_routes += 1;
            cross_linear(ctx.field(), a, b, c)
        }
        Err(e) => return Err(e),
    };
    post_check(sol.satisfies(ctx.field(), a, b, c), "solve_cross")?;
    Ok(sol)
}

/// Any nonzero `X ⊥ t` works: `Y ↦ X × Y` maps onto `X^⊥`.
fn cross_linear(f: &FieldDescriptor, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> CrossSolution {
    let t = [a.clone(), b.clone(), c.clone()];
    if t.iter().all(|x| f.is_zero(x)) {
        return CrossSolution {
            x: std::array::from_fn(|_| f.zero()),
            route: CrossRoute::Linear,
        };
    }
    let xv = linalg::kernel(f, vec![t.to_vec()], 3).remove(0);
    let (x1, x2, x3) = (&xv[0], &xv[1], &xv[2]);
    let z = f.zero();
    let n = |x: &FieldElement| f.neg(x);
    let m = vec![
        vec![z.clone(), n(x3), x2.clone()],
        vec![x3.clone(), z.clone(), n(x1)],
        vec![n(x2), x1.clone(), z],
    ];
    let y = linalg::solve(f, &m, &t, 3).expect("t lies in the image of X × ·");
    CrossSolution {
        x: [
            x1.clone(),
            x2.clone(),
            x3.clone(),
            y[0].clone(),
            y[1].clone(),
            y[2].clone(),
        ],
        route: CrossRoute::Linear,
    }
}

fn pure(spec: &AlgebraSpec, x: &[FieldElement]) -> Quaternion {
    Quaternion::new(spec.field().zero(), x[0].clone(), x[1].clone(), x[2].clone())
}

/// A pair `(x, y)` with `xy − yx = target`.
pub fn commutator_decompose(ctx: &mut SolveCtx, target: &Quaternion) -> SolveResult<(Quaternion, Quaternion)> {
    if !ctx.spec().contains(target) {
        return Err(QuatError::SpecMismatch.into());
    }
    if !ctx.spec().in_s2_target_set(target) {
        return Err(SolveError::TargetNotPure);
    }
    if ctx.spec().is_zero(target) {
        let z = ctx.spec().zero();
        return Ok((z.clone(), z));
    }
    let f = ctx.field().clone();
    // Coordinates of s₂(X·(i,j,k), Y·(i,j,k)) in terms of (A, B, C) = X × Y:
    //   odd char: i: −2qj·A, j: −2qi·B, k: 2C
    //   char 2:   1: v·A,    k: B,      j: C
    let (ta, tb, tc) = if let Some((qi, qj)) = ctx.spec().odd_params() {
        let two = f.from_i64(2);
        let [_, al, be, ga] = &target.c;
        (
            f.neg(&f.div(al, &f.mul(&two, qj))?),
            f.neg(&f.div(be, &f.mul(&two, qi))?),
            f.div(ga, &two)?,
        )
    } else {
        let (_, v) = ctx.spec().char_two_params().expect("char 2");
        let [c0, _, c2, c3] = &target.c;
        let alpha = f.div(c0, v)?;
        (f.neg(&alpha), f.neg(c3), c2.clone())
    };
    let sol = solve_cross(ctx, &ta, &tb, &tc)?;
    let spec = ctx.spec();
    let x = pure(spec, &sol.x[0..3]);
    let y = pure(spec, &sol.x[3..6]);
    post_check(spec.s2(&x, &y) == *target, "commutator_decompose")?;
    Ok((x, y))
}

/// `v₁(a, b) = ab − ba`, `v_k` on the two halves of the argument list.
pub fn nested_commutator(spec: &AlgebraSpec, args: &[Quaternion]) -> Quaternion {
    if args.len() == 1 {
        return args[0].clone();
    }
    let (l, r) = args.split_at(args.len() / 2);
    spec.s2(&nested_commutator(spec, l), &nested_commutator(spec, r))
}

/// Splits a target of `v_k` into two values of `v_{k−1}`.
fn vk_split(ctx: &mut SolveCtx, target: &Quaternion, k: u32) -> SolveResult<(Quaternion, Quaternion)> {
    if !ctx.spec().is_char_two() {
        // Pure quaternions decompose into pure pairs.
        return commutator_decompose(ctx, target);
    }
    let spec = ctx.spec().clone();
    if spec.is_zero(target) {
        return Ok((spec.zero(), spec.zero()));
    }
    // In characteristic 2 the commutator of two elements of span{1, j, k}
    // is central, so v_k(H) = F for k = 2 and {0} beyond.
    if k == 2 && spec.is_central(target) {
        let (_, v) = spec.char_two_params().unwrap();
        let f = spec.field();
        let scaled = f.div(&target.c[0], v)?;
        return Ok((spec.basis(J), spec.scaled_basis(K, scaled)));
    }
    Err(SolveError::NoSolution(format!(
        "characteristic 2: v_{k} only takes {} values",
        if k == 2 { "central" } else { "zero" }
    )))
}

/// `2^k` arguments whose iterated commutator `v_k` equals `target`.
pub fn vk_decompose(ctx: &mut SolveCtx, target: &Quaternion, k: u32) -> SolveResult<ImageWitness> {
    if k == 0 {
        return Err(SolveError::Precondition("k must be at least 1".into()));
    }
    if k > ctx.max_depth {
        return Err(SolveError::DepthTooLarge(k));
    }
    if !ctx.spec().in_s2_target_set(target) {
        return Err(SolveError::TargetNotPure);
    }
    fn go(ctx: &mut SolveCtx, target: &Quaternion, k: u32, out: &mut Vec<Quaternion>) -> SolveResult<()> {
        if k == 1 {
            let (x, y) = commutator_decompose(ctx, target)?;
            out.push(x);
            out.push(y);
            return Ok(());
        }
        let (b1, b2) = vk_split(ctx, target, k)?;
        go(ctx, &b1, k - 1, out)?;
        go(ctx, &b2, k - 1, out)
    }
    let mut args = Vec::with_capacity(1 << k);
    go(ctx, target, k, &mut args)?;
    let value = nested_commutator(ctx.spec(), &args);
    post_check(value == *target, "vk_decompose")?;
    Ok(ImageWitness { args, value })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intertwiner {
    pub x: Quaternion,
    pub kernel_dim: usize,
    /// Equal scalar parts and equal norms of the pure parts (odd char only).
    pub norm_condition: Option<bool>,
}

/// A nonzero `x` with `α·x = x·β`.
pub fn solve_intertwiner(spec: &AlgebraSpec, alpha: &Quaternion, beta: &Quaternion) -> SolveResult<Intertwiner> {
    if !spec.contains(alpha) || !spec.contains(beta) {
        return Err(QuatError::SpecMismatch.into());
    }
    let f = spec.field();
    let cols: Vec<Quaternion> = (0..4)
        .map(|t| {
            let e = spec.basis(t);
            spec.sub(&spec.mul(alpha, &e), &spec.mul(&e, beta))
        })
        .collect();
    let rows: Vec<linalg::Row> = (0..4).map(|r| cols.iter().map(|c| c.c[r].clone()).collect()).collect();
    let kernel = linalg::kernel(f, rows, 4);
    let Some(first) = kernel.first() else {
        return Err(SolveError::NoNonzeroSolution);
    };
    let x = Quaternion {
        c: std::array::from_fn(|t| first[t].clone()),
    };
    post_check(
        spec.mul(alpha, &x) == spec.mul(&x, beta) && !spec.is_zero(&x),
        "solve_intertwiner",
    )?;
    let norm_condition = spec.odd_params().map(|_| {
        let pure_norm = |q: &Quaternion| {
            let mut p = q.clone();
            p.c[0] = f.zero();
            spec.norm(&p)
        };
        alpha.c[0] == beta.c[0] && pure_norm(alpha) == pure_norm(beta)
    });
    Ok(Intertwiner {
        x,
        kernel_dim: kernel.len(),
        norm_condition,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    /// `g⁻¹·α·g = a0 + r·i`.
    pub g: Quaternion,
    pub a0: FieldElement,
    pub r: FieldElement,
    pub canonical: Quaternion,
}

/// Conjugates `α` to the form `a0 + r·i` (odd characteristic).
pub fn conjugate_to_canonical(ctx: &mut SolveCtx, alpha: &Quaternion) -> SolveResult<Canonical> {
    let Some((qi, qj)) = ctx.spec().odd_params().map(|(a, b)| (a.clone(), b.clone())) else {
        return Err(SolveError::WrongCharacteristic("odd characteristic"));
    };
    if !ctx.spec().contains(alpha) {
        return Err(QuatError::SpecMismatch.into());
    }
    let f = ctx.field().clone();
    let [a0, a1, a2, a3] = &alpha.c;
    let s = f.sub(
        &f.add(&f.square(a1), &f.mul(&f.div(&qj, &qi)?, &f.square(a2))),
        &f.mul(&qj, &f.square(a3)),
    );
    let Some(r) = ctx.sqrt(&s) else {
        return Err(SolveError::NotCanonicalizable { s: fe_string(ctx, &s) });
    };
    let spec = ctx.spec().clone();
    let canonical = Quaternion::new(a0.clone(), r.clone(), spec.field().zero(), spec.field().zero());
    let g = solve_intertwiner(&spec, alpha, &canonical)?.x;
    let g_inv = spec.inv(&g).map_err(|_| SolveError::NotInvertible)?;
    post_check(
        spec.mul(&spec.mul(&g_inv, alpha), &g) == canonical,
        "conjugate_to_canonical",
    )?;
    Ok(Canonical {
        g,
        a0: a0.clone(),
        r,
        canonical,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisHit {
    /// Basis indices (0 = 1, 1 = i, 2 = j, 3 = k), one per slot.
    pub tuple: Vec<usize>,
    pub c: FieldElement,
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSearch {
    pub hit: Option<BasisHit>,
    pub evaluations: u64,
    /// First value with two or more nonzero coordinates, if any was seen.
    pub multi_term: Option<(Vec<usize>, Quaternion)>,
    pub saw_nonzero_central: bool,
}

fn basis_tuple(m: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; m];
    for slot in (0..m).rev() {
        t[slot] = idx % 4;
        idx /= 4;
    }
    t
}

fn single_term(spec: &AlgebraSpec, v: &Quaternion) -> Option<usize> {
    let nz: Vec<usize> = (0..4).filter(|&t| !spec.field().is_zero(&v.c[t])).collect();
    (nz.len() == 1).then(|| nz[0])
}

/// First basis tuple (lexicographic in `{1, i, j, k}^m`) on which `p` takes a
/// value `c·q` with `c ≠ 0` and `q ∈ {i, j, k}`.
pub fn basis_value_search(spec: &AlgebraSpec, p: &MultilinearPoly) -> SolveResult<BasisSearch> {
    let m = p.arity();
    let mut out = BasisSearch {
        hit: None,
        evaluations: 0,
        multi_term: None,
        saw_nonzero_central: false,
    };
    for idx in 0..4usize.pow(m as u32) {
        let tuple = basis_tuple(m, idx);
        let args: Vec<Quaternion> = tuple.iter().map(|&t| spec.basis(t)).collect();
        let v = p.evaluate(spec, &args)?;
        out.evaluations += 1;
        if spec.is_zero(&v) {
            continue;
        }
        match single_term(spec, &v) {
            Some(ONE) => out.saw_nonzero_central = true,
            Some(q) => {
                out.hit = Some(BasisHit {
                    tuple,
                    c: v.c[q].clone(),
                    q,
                });
                return Ok(out);
            }
            None => {
                if spec.is_central(&v) {
                    out.saw_nonzero_central = true;
                }
                if out.multi_term.is_none() {
                    out.multi_term = Some((tuple, v));
                }
            }
        }
    }
    Ok(out)
}

/// Every basis-tuple value that is not a multiple of a single basis element.
pub fn basis_lemma_violations(spec: &AlgebraSpec, p: &MultilinearPoly) -> SolveResult<Vec<(Vec<usize>, Quaternion)>> {
    let m = p.arity();
    let mut bad = Vec::new();
    for idx in 0..4usize.pow(m as u32) {
        let tuple = basis_tuple(m, idx);
        let args: Vec<Quaternion> = tuple.iter().map(|&t| spec.basis(t)).collect();
        let v = p.evaluate(spec, &args)?;
        if !spec.is_zero(&v) && single_term(spec, &v).is_none() {
            bad.push((tuple, v));
        }
    }
    Ok(bad)
}

fn conj_all(spec: &AlgebraSpec, g: &Quaternion, xs: &[Quaternion]) -> SolveResult<Vec<Quaternion>> {
    xs.iter().map(|x| spec.conjugate_by(g, x).map_err(SolveError::from)).collect()
}

/// Arguments on which `p` evaluates to the pure `target`.
pub fn express_pure_in_image(ctx: &mut SolveCtx, p: &MultilinearPoly, target: &Quaternion) -> SolveResult<ImageWitness> {
    if ctx.spec().odd_params().is_none() {
        return Err(SolveError::WrongCharacteristic("odd characteristic"));
    }
    if !ctx.spec().in_s2_target_set(target) {
        return Err(SolveError::TargetNotPure);
    }
    let m = p.arity();
    if ctx.spec().is_zero(target) {
        let args = vec![ctx.spec().zero(); m];
        let value = p.evaluate(ctx.spec(), &args)?;
        post_check(value == *target, "express_pure_in_image")?;
        return Ok(ImageWitness { args, value });
    }
    // target = g·(r i)·g⁻¹
    let canon_t = conjugate_to_canonical(ctx, target)?;
    let search = basis_value_search(ctx.spec(), &p.over(ctx.field())?)?;
    ctx.stats.evaluations += search.evaluations;
    let hit = search.hit.ok_or(SolveError::PolynomialCentralOrZero)?;
    // p(z) = r'·x' with x' ∈ {i, j, k}; h⁻¹ x' h = s·i
    let x_prime = ctx.spec().basis(hit.q);
    let canon_x = conjugate_to_canonical(ctx, &x_prime)?;
    let spec = ctx.spec().clone();
    let f = spec.field().clone();
    let h_inv = spec.inv(&canon_x.g).map_err(|_| SolveError::NotInvertible)?;
    let z: Vec<Quaternion> = hit.tuple.iter().map(|&t| spec.basis(t)).collect();
    let mut z_conj = conj_all(&spec, &h_inv, &z)?;
    let denom = f.mul(&hit.c, &canon_x.r);
    let scale = f.div(&canon_t.r, &denom).map_err(|_| SolveError::NotInvertible)?;
    z_conj[0] = spec.scale(&scale, &z_conj[0]);
    let args = conj_all(&spec, &canon_t.g, &z_conj)?;
    let value = p.evaluate(&spec, &args)?;
    post_check(value == *target, "express_pure_in_image")?;
    Ok(ImageWitness { args, value })
}

struct CentralTuple {
    args: Vec<Quaternion>,
    alpha: FieldElement,
    slot: usize,
    replacement: Quaternion,
    beta: Quaternion,
}

/// Looks for `r` with `p(r) = α ∈ F \ {0}` and a single-slot replacement
/// making the value non-central.
fn find_central_tuple(ctx: &mut SolveCtx, p: &MultilinearPoly) -> SolveResult<CentralTuple> {
    let spec = ctx.spec().clone();
    let m = p.arity();
    let budget = ctx.budget;
    let mut evals = 0u64;
    let mut central_seen = 0u64;
    let mut try_tuple = |args: Vec<Quaternion>, evals: &mut u64| -> SolveResult<Option<CentralTuple>> {
        *evals += 1;
        let v = p.evaluate(&spec, &args)?;
        if spec.is_zero(&v) || !spec.is_central(&v) {
            return Ok(None);
        }
        central_seen += 1;
        for slot in 0..m {
            for e in 1..4 {
                if *evals >= budget {
                    return Ok(None);
                }
                let mut alt = args.clone();
                alt[slot] = spec.basis(e);
                *evals += 1;
                let beta = p.evaluate(&spec, &alt)?;
                if !spec.is_central(&beta) {
                    return Ok(Some(CentralTuple {
                        alpha: v.c[0].clone(),
                        args,
                        slot,
                        replacement: alt[slot].clone(),
                        beta,
                    }));
                }
            }
        }
        Ok(None)
    };
    for idx in 0..4usize.pow(m as u32) {
        if evals >= budget {
            break;
        }
        let args = basis_tuple(m, idx).into_iter().map(|t| spec.basis(t)).collect();
        if let Some(found) = try_tuple(args, &mut evals)? {
            ctx.stats.evaluations += evals;
            return Ok(found);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    while evals < budget {
        let args = (0..m).map(|_| spec.sample(&mut rng, ctx.height)).collect();
        if let Some(found) = try_tuple(args, &mut evals)? {
            ctx.stats.evaluations += evals;
            return Ok(found);
        }
    }
    ctx.stats.evaluations += evals;
    Err(SolveError::SearchBudgetExhausted {
        evaluations: evals,
        detail: format!("{central_seen} nonzero central values found, none with a non-central single-slot variation"),
    })
}

/// Arguments on which `p` evaluates to `target`, for `p` whose image is not
/// contained in the s₂ set.
pub fn realize_element(ctx: &mut SolveCtx, p: &MultilinearPoly, target: &Quaternion) -> SolveResult<ImageWitness> {
    if ctx.spec().odd_params().is_none() {
        return Err(SolveError::WrongCharacteristic("odd characteristic"));
    }
    let ct = find_central_tuple(ctx, &p.over(ctx.field())?)?;
    // g⁻¹ β g = a' + r' i
    let cb = conjugate_to_canonical(ctx, &ct.beta)?;
    // g_t⁻¹ x g_t = a + r i, h = g_t⁻¹
    let cx = conjugate_to_canonical(ctx, target)?;
    let spec = ctx.spec().clone();
    let f = spec.field().clone();
    if f.is_zero(&cb.r) {
        return Err(SolveError::NotInvertible);
    }
    let g = &cb.g;
    let g_inv = spec.inv(g).map_err(|_| SolveError::NotInvertible)?;
    let h = spec.inv(&cx.g).map_err(|_| SolveError::NotInvertible)?;
    let h_inv = cx.g.clone();
    let conj = |x: &Quaternion| spec.mul(&spec.mul(&g_inv, x), g);
    let outer = |x: &Quaternion| spec.mul(&spec.mul(&h_inv, x), &h);
    let alpha_inv = f.inv(&ct.alpha)?;
    let r_i = &ct.args[ct.slot];
    // r_i** = r_i* − a'α⁻¹ r_i
    let r_ss = spec.sub(&ct.replacement, &spec.scale(&f.mul(&cb.a0, &alpha_inv), r_i));
    let left = spec.scale(&f.mul(&cx.a0, &alpha_inv), &conj(r_i));
    let right = spec.scale(&f.div(&cx.r, &cb.r)?, &conj(&r_ss));
    let mut args: Vec<Quaternion> = ct.args.iter().map(|x| outer(&conj(x))).collect();
    args[ct.slot] = outer(&spec.add(&left, &right));
    let value = p.evaluate(&spec, &args)?;
    post_check(value == *target, "realize_element")?;
    Ok(ImageWitness { args, value })
}

/// `target = value₁·value₂` with `value₁ ∈ p₁(H)`, `value₂ ∈ p₂(H)`.
pub fn waring_decompose(
    ctx: &mut SolveCtx,
    target: &Quaternion,
    p1: &MultilinearPoly,
    p2: &MultilinearPoly,
) -> SolveResult<(ImageWitness, ImageWitness)> {
    if ctx.spec().odd_params().is_none() {
        return Err(SolveError::WrongCharacteristic("odd characteristic"));
    }
    let ct = conjugate_to_canonical(ctx, target)?;
    let spec = ctx.spec().clone();
    let f = spec.field().clone();
    let qj = spec.odd_params().unwrap().1.clone();
    // j · ((x/qj)·j − (r/qj)·k) = x + r·i
    let u = spec.basis(J);
    let w = Quaternion::new(f.zero(), f.zero(), f.div(&ct.a0, &qj)?, f.neg(&f.div(&ct.r, &qj)?));
    let g_inv = spec.inv(&ct.g).map_err(|_| SolveError::NotInvertible)?;
    let back = |x: &Quaternion| spec.mul(&spec.mul(&ct.g, x), &g_inv);
    let (u, w) = (back(&u), back(&w));
    let w1 = express_pure_in_image(ctx, p1, &u)?;
    let w2 = express_pure_in_image(ctx, p2, &w)?;
    let spec = ctx.spec();
    post_check(spec.mul(&w1.value, &w2.value) == *target, "waring_decompose")?;
    Ok((w1, w2))
}

fn s2_pair_candidates(spec: &AlgebraSpec) -> SolveResult<Vec<Quaternion>> {
    let mut c = vec![spec.basis(J), spec.basis(K)];
    for x in spec.enumerate_s2_target_set()? {
        if !c.contains(&x) {
            c.push(x);
        }
    }
    Ok(c)
}

/// First `(y, z)` in the s₂ set with `s₂(y, z)` invertible (and `z`
/// invertible when asked).
fn invertible_commutator_pair(
    spec: &AlgebraSpec,
    need_z_invertible: bool,
) -> SolveResult<(Quaternion, Quaternion, Quaternion)> {
    let cands = s2_pair_candidates(spec)?;
    for y in &cands {
        for z in &cands {
            let c = spec.s2(y, z);
            if spec.inv(&c).is_err() {
                continue;
            }
            if need_z_invertible && spec.inv(z).is_err() {
                continue;
            }
            return Ok((y.clone(), z.clone(), c));
        }
    }
    Err(SolveError::NoInvertibleCommutator)
}

/// `s₂(x₁,x₂) + s₂(x₃,x₄)·s₂(x₅,x₆)`.
pub fn char2_sum_value(spec: &AlgebraSpec, x: &[Quaternion]) -> Quaternion {
    spec.add(&spec.s2(&x[0], &x[1]), &spec.mul(&spec.s2(&x[2], &x[3]), &spec.s2(&x[4], &x[5])))
}

/// `s₂(x₁,x₂)·s₂(x₃,x₄) + s₂(x₅,x₆)·s₂(x₇,x₈)`.
pub fn char2_product_sum_value(spec: &AlgebraSpec, x: &[Quaternion]) -> Quaternion {
    spec.add(
        &spec.mul(&spec.s2(&x[0], &x[1]), &spec.s2(&x[2], &x[3])),
        &spec.mul(&spec.s2(&x[4], &x[5]), &spec.s2(&x[6], &x[7])),
    )
}

/// Six arguments of `s₂(x₁,x₂) + s₂(x₃,x₄)s₂(x₅,x₆)` evaluating to `target`,
/// from `α = s₂(αc⁻¹y, z) + s₂(z, αc⁻¹)·y` with `c = s₂(y, z)`.
pub fn char2_sum_decompose(ctx: &mut SolveCtx, target: &Quaternion) -> SolveResult<ImageWitness> {
    if !ctx.spec().is_char_two() {
        return Err(SolveError::WrongCharacteristic("characteristic 2"));
    }
    let spec = ctx.spec().clone();
    if spec.is_zero(target) {
        let args = vec![spec.zero(); 6];
        return Ok(ImageWitness { value: char2_sum_value(&spec, &args), args });
    }
    let (y, z, c) = invertible_commutator_pair(&spec, false)?;
    let ac = spec.mul(target, &spec.inv(&c)?);
    let (y1, y2) = commutator_decompose(ctx, &y)?;
    let args = vec![spec.mul(&ac, &y), z.clone(), z, ac, y1, y2];
    let value = char2_sum_value(&spec, &args);
    post_check(value == *target, "char2_sum_decompose")?;
    Ok(ImageWitness { args, value })
}

/// Eight arguments of `s₂(x₁,x₂)s₂(x₃,x₄) + s₂(x₅,x₆)s₂(x₇,x₈)`, rewriting
/// `s₂(w, z) = s₂(w z⁻¹, z)·z`.
pub fn char2_product_sum_decompose(ctx: &mut SolveCtx, target: &Quaternion) -> SolveResult<ImageWitness> {
    if !ctx.spec().is_char_two() {
        return Err(SolveError::WrongCharacteristic("characteristic 2"));
    }
    let spec = ctx.spec().clone();
    if spec.is_zero(target) {
        let args = vec![spec.zero(); 8];
        return Ok(ImageWitness { value: char2_product_sum_value(&spec, &args), args });
    }
    let (y, z, c) = invertible_commutator_pair(&spec, true)?;
    let ac = spec.mul(target, &spec.inv(&c)?);
    let z_inv = spec.inv(&z)?;
    let (z1, z2) = commutator_decompose(ctx, &z)?;
    let (y1, y2) = commutator_decompose(ctx, &y)?;
    let args = vec![
        spec.mul(&spec.mul(&ac, &y), &z_inv),
        z.clone(),
        z1,
        z2,
        z,
        ac,
        y1,
        y2,
    ];
    let value = char2_product_sum_value(&spec, &args);
    post_check(value == *target, "char2_product_sum_decompose")?;
    Ok(ImageWitness { args, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{make_deg3_form, make_monomial, make_s2};
    use crate::quaternion::I;
    use num_rational::BigRational;

    fn gf(p: u64) -> FieldDescriptor {
        FieldDescriptor::prime(p).unwrap()
    }

    fn tower_h() -> SolveCtx {
        SolveCtx::new(AlgebraSpec::hamilton(FieldDescriptor::tower_base()).unwrap())
    }

    fn h2(k: u32) -> AlgebraSpec {
        let f = FieldDescriptor::binary_default(k).unwrap();
        AlgebraSpec::char_two(f.clone(), f.one(), f.one()).unwrap()
    }

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Tower(crate::fields::TowerElem::Base(BigRational::new(n.into(), d.into())))
    }

    #[test]
    fn sphere_examples() {
        let mut ctx = SolveCtx::new(AlgebraSpec::hamilton(gf(5)).unwrap());
        let f = gf(5);
        let s = solve_sphere_orthogonal(&mut ctx, &f.zero(), &f.zero(), &f.zero()).unwrap();
        assert_eq!(s.x, [f.one(), f.zero(), f.zero()]);
        let s = solve_sphere_orthogonal(&mut ctx, &f.one(), &f.from_i64(2), &f.zero()).unwrap();
        assert_eq!(s.x, [f.from_i64(3), f.one(), f.one()]);

        let mut t = tower_h();
        let s = solve_sphere_orthogonal(&mut t, &q(3, 1), &q(4, 1), &q(0, 1)).unwrap();
        assert_eq!(s.x, [q(-4, 5), q(3, 5), q(0, 1)]);
        assert!(t.adjunctions().is_empty());
    }

    #[test]
    fn sphere_char_two_degenerate() {
        let spec = h2(1);
        let mut ctx = SolveCtx::new(spec.clone());
        let one = spec.field().one();
        assert!(matches!(
            solve_sphere_orthogonal(&mut ctx, &one, &one, &one),
            Err(SolveError::DegenerateCase(_))
        ));
        let c = solve_cross(&mut ctx, &one, &one, &one).unwrap();
        assert_eq!(c.route, CrossRoute::Linear);
        ctx.cross_fallback = false;
        assert!(solve_cross(&mut ctx, &one, &one, &one).is_err());
    }

    #[test]
    fn sphere_needs_square_root_over_gf3() {
        // (1,1,1) over GF(3): a²+b² = 2 is not a square.
        let f = gf(3);
        let mut ctx = SolveCtx::new(AlgebraSpec::hamilton(f.clone()).unwrap());
        let one = f.one();
        assert!(matches!(
            solve_sphere_orthogonal(&mut ctx, &one, &one, &one),
            Err(SolveError::NoSolution(_))
        ));
        let c = solve_cross(&mut ctx, &one, &one, &one).unwrap();
        assert_eq!(c.route, CrossRoute::Linear);
    }

    #[test]
    fn cross_examples() {
        let mut ctx = SolveCtx::new(AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap());
        let f = FieldDescriptor::Rational;
        let c = solve_cross(&mut ctx, &f.zero(), &f.zero(), &f.one()).unwrap();
        assert_eq!(&c.x[3..], &[f.zero(), f.one(), f.zero()]);
        let mut t = tower_h();
        let c = solve_cross(&mut t, &q(3, 1), &q(4, 1), &q(0, 1)).unwrap();
        assert_eq!(c.x[5], q(5, 1));
    }

    #[test]
    fn commutator_examples() {
        let spec = AlgebraSpec::hamilton(gf(5)).unwrap();
        let mut ctx = SolveCtx::new(spec.clone());
        let (x, y) = commutator_decompose(&mut ctx, &spec.basis(K)).unwrap();
        assert_eq!(x, spec.basis(I));
        assert_eq!(y, spec.scaled_basis(J, gf(5).from_i64(3)));

        let c2 = h2(1);
        let mut ctx = SolveCtx::new(c2.clone());
        let (x, y) = commutator_decompose(&mut ctx, &c2.basis(J)).unwrap();
        assert_eq!((x, y), (c2.basis(I), c2.basis(J)));
        assert_eq!(commutator_decompose(&mut ctx, &c2.basis(I)), Err(SolveError::TargetNotPure));
    }

    #[test]
    fn vk_char_two_collapse() {
        let c2 = h2(1);
        let mut ctx = SolveCtx::new(c2.clone());
        let w = vk_decompose(&mut ctx, &c2.one(), 2).unwrap();
        assert_eq!(w.args.len(), 4);
        assert!(vk_decompose(&mut ctx, &c2.basis(J), 2).is_err());
        assert!(vk_decompose(&mut ctx, &c2.one(), 3).is_err());
        assert_eq!(vk_decompose(&mut ctx, &c2.zero(), 5).unwrap().args.len(), 32);
    }

    #[test]
    fn vk_tower_k3() {
        let mut ctx = tower_h();
        let spec = ctx.spec().clone();
        let target = spec.scaled_basis(I, spec.field().from_i64(2));
        let w = vk_decompose(&mut ctx, &target, 3).unwrap();
        assert_eq!(w.args.len(), 8);
        assert_eq!(w.value, target);
        assert!(matches!(vk_decompose(&mut ctx, &target, 11), Err(SolveError::DepthTooLarge(11))));
    }

    #[test]
    fn intertwiner_examples() {
        let spec = AlgebraSpec::hamilton(FieldDescriptor::tower_base()).unwrap();
        let x = solve_intertwiner(&spec, &spec.basis(I), &spec.basis(I)).unwrap();
        assert_eq!(x.x, spec.one());
        let x = solve_intertwiner(&spec, &spec.basis(J), &spec.basis(I)).unwrap();
        assert_eq!(x.x, spec.from_i64s([0, 1, 1, 0]));
        assert_eq!(x.norm_condition, Some(true));
        let one_i = spec.from_i64s([1, 1, 0, 0]);
        assert_eq!(
            solve_intertwiner(&spec, &spec.basis(I), &one_i),
            Err(SolveError::NoNonzeroSolution)
        );
    }

    #[test]
    fn canonical_examples() {
        let mut ctx = tower_h();
        let spec = ctx.spec().clone();
        let c = conjugate_to_canonical(&mut ctx, &spec.from_i64s([5, 0, 0, 0])).unwrap();
        assert_eq!(c.g, spec.one());
        let c = conjugate_to_canonical(&mut ctx, &spec.from_i64s([2, 3, 0, 0])).unwrap();
        assert_eq!((c.g, c.r), (spec.one(), spec.field().from_i64(3)));
        assert!(ctx.adjunctions().is_empty());
        let c = conjugate_to_canonical(&mut ctx, &spec.from_i64s([1, 1, 1, 1])).unwrap();
        assert_eq!(ctx.adjunctions(), ["3"]);
        let f = ctx.field();
        assert_eq!(f.square(&c.r), f.from_i64(3));
    }

    #[test]
    fn canonical_without_adjoin_fails() {
        let mut ctx = tower_h();
        ctx.adjoin = false;
        let spec = ctx.spec().clone();
        assert!(matches!(
            conjugate_to_canonical(&mut ctx, &spec.from_i64s([1, 1, 1, 1])),
            Err(SolveError::NotCanonicalizable { .. })
        ));
    }

    #[test]
    fn basis_search_examples() {
        let spec = AlgebraSpec::hamilton(FieldDescriptor::Rational).unwrap();
        let f = spec.field();
        let s = basis_value_search(&spec, &make_s2(f)).unwrap();
        let hit = s.hit.unwrap();
        assert_eq!((hit.tuple, hit.q), (vec![1, 2], K));
        assert_eq!(hit.c, f.from_i64(2));
        let zero = MultilinearPoly::zero(f, 2).unwrap();
        assert!(basis_value_search(&spec, &zero).unwrap().hit.is_none());
        let sym = make_monomial(f, 2).unwrap().add(&MultilinearPoly::monomial(f, &[1, 0]).unwrap()).unwrap();
        let hit = basis_value_search(&spec, &sym).unwrap().hit.unwrap();
        assert_eq!((hit.tuple, hit.q), (vec![0, 1], I));
        assert_eq!(hit.c, f.from_i64(2));
    }

    #[test]
    fn express_examples() {
        let mut ctx = tower_h();
        let spec = ctx.spec().clone();
        let f = spec.field().clone();
        let w = express_pure_in_image(&mut ctx, &make_s2(&f), &spec.basis(I)).unwrap();
        assert_eq!(w.value, spec.basis(I));
        let w = express_pure_in_image(&mut ctx, &make_s2(&f), &spec.zero()).unwrap();
        assert!(w.args.iter().all(|a| spec.is_zero(a)));
        let p = make_deg3_form(&f, &f.one(), &f.zero());
        let target = spec.from_i64s([0, 0, -4, 0]);
        let w = express_pure_in_image(&mut ctx, &p, &target).unwrap();
        assert_eq!(w.value, target);
        // the evaluation named in the construction: s₂(i, s₂(i, j)) = −4j
        let direct = p.evaluate(&spec, &[spec.basis(I), spec.basis(J), spec.basis(I)]).unwrap();
        assert_eq!(direct, target);
    }

    #[test]
    fn realize_examples() {
        let mut ctx = tower_h();
        let spec = ctx.spec().clone();
        let f = spec.field().clone();
        let p = make_monomial(&f, 2).unwrap();
        for t in [spec.from_i64s([2, 0, 0, 0]), spec.basis(I), spec.from_i64s([1, 2, -1, 3]), spec.zero()] {
            let w = realize_element(&mut ctx, &p, &t).unwrap();
            assert_eq!(w.value, t);
        }
        ctx.budget = 500;
        assert!(matches!(
            realize_element(&mut ctx, &make_s2(&f), &spec.from_i64s([2, 0, 0, 0])),
            Err(SolveError::SearchBudgetExhausted { .. })
        ));
    }

    #[test]
    fn waring_examples() {
        let mut ctx = tower_h();
        let spec = ctx.spec().clone();
        let s2 = make_s2(spec.field());
        let (a, b) = waring_decompose(&mut ctx, &spec.from_i64s([1, 2, 0, 0]), &s2, &s2).unwrap();
        assert_eq!(a.value, spec.basis(J));
        assert_eq!(b.value, spec.from_i64s([0, 0, -1, 2]));
        let (a, b) = waring_decompose(&mut ctx, &spec.basis(I), &s2, &s2).unwrap();
        assert_eq!((a.value, b.value), (spec.basis(J), spec.basis(K)));
        let (a, b) = waring_decompose(&mut ctx, &spec.zero(), &s2, &s2).unwrap();
        assert_eq!(a.value, spec.basis(J));
        assert!(spec.is_zero(&b.value));
    }

    #[test]
    fn char_two_identities() {
        let spec = h2(1);
        let mut ctx = SolveCtx::new(spec.clone());
        let w = char2_sum_decompose(&mut ctx, &spec.basis(I)).unwrap();
        assert_eq!(w.args[1], spec.basis(K));
        assert_eq!(w.value, spec.basis(I));
        let w = char2_product_sum_decompose(&mut ctx, &spec.basis(I)).unwrap();
        assert_eq!(w.args.len(), 8);
        let w = char2_sum_decompose(&mut ctx, &spec.zero()).unwrap();
        assert!(w.args.iter().all(|a| spec.is_zero(a)));
        let odd = AlgebraSpec::hamilton(gf(3)).unwrap();
        let mut ctx = SolveCtx::new(odd.clone());
        assert!(matches!(
            char2_sum_decompose(&mut ctx, &odd.one()),
            Err(SolveError::WrongCharacteristic(_))
        ));
    }
}
