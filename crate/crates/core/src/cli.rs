//! Job configuration, dispatch and JSON reports for the command-line tool.
//!
//! A [`JobConfig`] fully determines a run: reports embed it, and feeding a
//! report back through `--config` reproduces the report byte-for-byte when
//! timing is disabled.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::fields::FieldDescriptor;
use crate::multilinear::{fit_deg3_form, fit_deg4_form, parse_poly, MultilinearPoly};
use crate::oracle::{
    enumerate_image, is_trace_vanishing, matrix_units_check, sample_image, trace_witness, verify_center_theorem,
    verify_trichotomy, verify_vk_collapse, CenterVerdict, FiniteRing, OracleError, QuaternionImage, Trichotomy,
};
use crate::quaternion::{AlgebraSpec, Quaternion};
use crate::solvers::{
    char2_product_sum_decompose, char2_sum_decompose, commutator_decompose, conjugate_to_canonical,
    express_pure_in_image, realize_element, solve_intertwiner, vk_decompose, waring_decompose, ImageWitness,
    SolveCtx, SolveError,
};
use crate::suite::{self, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

/// Values of `p` listed in a classify report.
const MAX_WITNESSES: usize = 8;
/// Sample count for infinite fields, where the budget is not a tuple count.
const MAX_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Trichotomy,
    DecomposeCommutator,
    Vk,
    Canonicalize,
    Intertwine,
    Express,
    Realize,
    Waring,
    Char2Sum,
    Char2Prodsum,
    FitForm,
    MatrixCenter,
    Suite,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::Classify,
        Command::Trichotomy,
        Command::DecomposeCommutator,
        Command::Vk,
        Command::Canonicalize,
        Command::Intertwine,
        Command::Express,
        Command::Realize,
        Command::Waring,
        Command::Char2Sum,
        Command::Char2Prodsum,
        Command::FitForm,
        Command::MatrixCenter,
        Command::Suite,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Trichotomy => "trichotomy",
            Command::DecomposeCommutator => "decompose-commutator",
            Command::Vk => "vk",
            Command::Canonicalize => "canonicalize",
            Command::Intertwine => "intertwine",
            Command::Express => "express",
            Command::Realize => "realize",
            Command::Waring => "waring",
            Command::Char2Sum => "char2-sum",
            Command::Char2Prodsum => "char2-prodsum",
            Command::FitForm => "fit-form",
            Command::MatrixCenter => "matrix-center",
            Command::Suite => "suite",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    pub field: String,
    pub algebra: String,
    pub poly: String,
    pub poly2: Option<String>,
    pub target: Option<String>,
    pub beta: Option<String>,
    pub k: u32,
    pub ring: String,
    pub n: usize,
    pub seed: u64,
    pub budget: u64,
    pub adjoin: bool,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            command: Command::Classify,
            field: "GF(3)".into(),
            algebra: "H(1,1)".into(),
            poly: "s2".into(),
            poly2: None,
            target: None,
            beta: None,
            k: 2,
            ring: "GF(2)".into(),
            n: 2,
            seed: 0,
            budget: crate::oracle::DEFAULT_EVAL_BUDGET,
            adjoin: true,
        }
    }
}

impl JobConfig {
    /// A bare config, or the `config` member of a report.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let v = match v.get("config") {
            Some(c) => c.clone(),
            None => v,
        };
        serde_json::from_value(v).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Command,
    pub status: &'static str,
    pub field: String,
    pub algebra: String,
    pub poly: Option<String>,
    pub image_size: Option<usize>,
    pub class: Option<String>,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<Check>,
    pub adjoined_roots: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<suite::CriterionOutcome>,
    pub notes: Vec<String>,
    pub error: Option<String>,
    pub seed: u64,
    pub eval_count: u64,
    pub wall_ms: Option<u64>,
    pub config: JobConfig,
}

impl Report {
    fn new(config: &JobConfig) -> Self {
        Report {
            command: config.command,
            status: "ok",
            field: config.field.clone(),
            algebra: config.algebra.clone(),
            poly: None,
            image_size: None,
            class: None,
            witnesses: Vec::new(),
            checks: Vec::new(),
            adjoined_roots: Vec::new(),
            criteria: Vec::new(),
            notes: Vec::new(),
            error: None,
            seed: config.seed,
            eval_count: 0,
            wall_ms: None,
            config: config.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            "ok" => EXIT_OK,
            "negative" => EXIT_NEGATIVE,
            _ => EXIT_ERROR,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut lines = vec![format!("{} [{}] over {} {}", self.command, self.status, self.field, self.algebra)];
        if let Some(p) = &self.poly {
            lines.push(format!("  poly: {p}"));
        }
        if let (Some(n), Some(c)) = (self.image_size, &self.class) {
            lines.push(format!("  image: {n} values, class {c}"));
        }
        for w in &self.witnesses {
            lines.push(format!("  {}: {} <- ({})", w.label, w.value, w.args.join(", ")));
        }
        for c in &self.criteria {
            lines.push(format!("  {}", c.summary()));
        }
        for c in &self.checks {
            lines.push(format!("  [{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail));
        }
        if !self.adjoined_roots.is_empty() {
            lines.push(format!("  adjoined square roots of: {}", self.adjoined_roots.join(", ")));
        }
        for n in &self.notes {
            lines.push(format!("  note: {n}"));
        }
        if let Some(e) = &self.error {
            lines.push(format!("  error: {e}"));
        }
        lines.join("\n")
    }
}

/// Failure of a job: `negative` results are legitimate answers (no
/// solution exists, hypothesis vacuous), everything else is an error.
#[derive(Debug)]
struct Failure {
    negative: bool,
    message: String,
}

impl Failure {
    fn error(message: impl fmt::Display) -> Self {
        Failure {
            negative: false,
            message: message.to_string(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure {
            negative: e.is_negative_result(),
            message: e.to_string(),
        }
    }
}

macro_rules! plain_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::error(e)
            }
        }
    )*};
}

plain_failure!(crate::fields::FieldError, crate::quaternion::QuatError, OracleError, String);

impl From<crate::multilinear::PolyError> for Failure {
    fn from(e: crate::multilinear::PolyError) -> Self {
        Failure {
            negative: matches!(e, crate::multilinear::PolyError::NotRepresentable { .. }),
            message: e.to_string(),
        }
    }
}

struct Job<'a> {
    config: &'a JobConfig,
    report: Report,
}

impl Job<'_> {
    fn field(&self) -> Result<FieldDescriptor, Failure> {
        self.config
            .field
            .parse::<FieldDescriptor>()
            .map_err(|e| Failure::error(format!("--field: {e}")))
    }

    fn spec(&self) -> Result<AlgebraSpec, Failure> {
        AlgebraSpec::parse(self.field()?, &self.config.algebra).map_err(|e| Failure::error(format!("--algebra: {e}")))
    }

    fn poly_named(&mut self, f: &FieldDescriptor, text: &str, flag: &str) -> Result<MultilinearPoly, Failure> {
        parse_poly(f, text).map_err(|e| Failure::error(format!("{flag}: {e}")))
    }

    fn poly(&mut self, f: &FieldDescriptor) -> Result<MultilinearPoly, Failure> {
        let text = self.config.poly.clone();
        let p = self.poly_named(f, &text, "--poly")?;
        self.report.poly = Some(p.display());
        Ok(p)
    }

    fn quaternion(&self, spec: &AlgebraSpec, text: Option<&String>, flag: &str) -> Result<Quaternion, Failure> {
        let t = text.ok_or_else(|| Failure::error(format!("{flag} is required")))?;
        spec.parse_quaternion(t).map_err(|e| Failure::error(format!("{flag}: {e}")))
    }

    fn target(&self, spec: &AlgebraSpec) -> Result<Quaternion, Failure> {
        self.quaternion(spec, self.config.target.as_ref(), "--target")
    }

    fn ctx(&self, spec: &AlgebraSpec) -> SolveCtx {
        let mut ctx = SolveCtx::new(spec.clone());
        ctx.adjoin = self.config.adjoin;
        ctx.seed = self.config.seed;
        ctx
    }

    fn finish_ctx(&mut self, ctx: &SolveCtx) {
        self.report.adjoined_roots = ctx.adjunctions().to_vec();
        self.report.eval_count += ctx.stats.evaluations;
        if ctx.stats.linear_routes > 0 {
            self.report.notes.push(format!(
                "{} cross-product systems solved by the linear fallback",
                ctx.stats.linear_routes
            ));
        }
    }

    fn witness(&mut self, ctx: &SolveCtx, label: &str, w: &ImageWitness) {
        let s = ctx.spec();
        self.report.witnesses.push(Witness {
            label: label.into(),
            args: w.args.iter().map(|a| s.format_quaternion(a)).collect(),
            value: s.format_quaternion(&w.value),
        });
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.report.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn enumerate(&mut self, p: &MultilinearPoly, spec: &AlgebraSpec) -> Result<QuaternionImage, Failure> {
        let img = enumerate_image(p, spec, self.config.budget)?;
        self.report.eval_count += img.set.eval_count;
        self.report.image_size = Some(img.cardinality());
        self.report.class = Some(img.class().name().into());
        Ok(img)
    }

    fn run(&mut self) -> Result<(), Failure> {
        match self.config.command {
            Command::Classify => self.classify(),
            Command::Trichotomy => self.trichotomy(),
            Command::DecomposeCommutator => self.decompose_commutator(),
            Command::Vk => self.vk(),
            Command::Canonicalize => self.canonicalize(),
            Command::Intertwine => self.intertwine(),
            Command::Express | Command::Realize => self.express_or_realize(),
            Command::Waring => self.waring(),
            Command::Char2Sum | Command::Char2Prodsum => self.char2(),
            Command::FitForm => self.fit_form(),
            Command::MatrixCenter => self.matrix_center(),
            Command::Suite => self.suite(),
        }
    }

    fn classify(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let p = self.poly(spec.field())?;
        if !spec.field().is_finite() {
            let samples = self.config.budget.min(MAX_SAMPLES);
            let s = sample_image(&p, &spec, samples, self.config.seed, crate::fields::DEFAULT_SAMPLE_HEIGHT)
                .map_err(Failure::error)?;
            self.report.eval_count = s.samples;
            self.report.image_size = Some(s.distinct);
            self.report.class = Some(s.class.name().into());
            self.report
                .notes
                .push("sampling mode: image size is a lower bound and the class is not a classification".into());
            for (v, args) in s.witnesses {
                self.report.witnesses.push(Witness {
                    label: "sampled value".into(),
                    args: args.iter().map(|a| spec.format_quaternion(a)).collect(),
                    value: spec.format_quaternion(&v),
                });
            }
            return Ok(());
        }
        let img = self.enumerate(&p, &spec)?;
        for v in img.set.values().into_iter().take(MAX_WITNESSES) {
            let args = img.witness(v).unwrap_or_default();
            self.report.witnesses.push(Witness {
                label: "value".into(),
                args: args.iter().map(|a| spec.format_quaternion(a)).collect(),
                value: spec.format_quaternion(&img.value(v)),
            });
        }
        let tv = trace_witness(&img);
        let detail = match &tv {
            None => "every value has trace 0".to_string(),
            Some((v, args)) => format!(
                "{} at ({})",
                spec.format_quaternion(v),
                args.iter().map(|a| spec.format_quaternion(a)).collect::<Vec<_>>().join(", ")
            ),
        };
        self.check("trace vanishing", is_trace_vanishing(&img), detail);
        let full = img.alg.size();
        self.check(
            "s2 set contained in image",
            img.contains_s2_set(),
            format!("|s2 set| = {}, |H| = {full}", img.s2_set_size()),
        );
        Ok(())
    }

    fn trichotomy(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let p = self.poly(spec.field())?;
        let img = self.enumerate(&p, &spec)?;
        let (pass, detail) = match verify_trichotomy(&img) {
            Trichotomy::Zero => (true, "image is {0}".to_string()),
            Trichotomy::Central => (true, "image is central and nonzero".to_string()),
            Trichotomy::ContainsS2Set => (true, "image contains the s2 set".to_string()),
            Trichotomy::Fails { missing } => (false, format!("misses {}", spec.format_quaternion(&missing))),
        };
        self.check("trichotomy", pass, detail);
        Ok(())
    }

    fn decompose_commutator(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let target = self.target(&spec)?;
        let mut ctx = self.ctx(&spec);
        let res = commutator_decompose(&mut ctx, &target);
        self.finish_ctx(&ctx);
        let (x, y) = res?;
        let s = ctx.spec();
        let value = s.s2(&x, &y);
        self.witness(&ctx, "s2(x, y)", &ImageWitness { args: vec![x, y], value: value.clone() });
        self.check("xy - yx = target", value == target, ctx.spec().format_quaternion(&value));
        Ok(())
    }

    fn vk(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let k = self.config.k;
        let Some(t) = self.config.target.as_ref() else {
            let r = verify_vk_collapse(&spec, k, 10_000, self.config.seed, self.config.budget)?;
            self.check(
                "v2(H) = s2(H)",
                r.v2_equals_s2,
                format!("|v2(H)| = {}, |s2(H)| = {}", r.v2_size, r.s2_size),
            );
            for (k, ok, total) in r.constructive {
                self.check(format!("vk_decompose covers the s2 set, k={k}"), ok == total, format!("{ok}/{total}"));
            }
            for (k, bad) in r.sampled_outside {
                self.check(format!("sampled v{k} values in the s2 set"), bad == 0, format!("{bad} outside"));
            }
            return Ok(());
        };
        let target = spec.parse_quaternion(t).map_err(|e| Failure::error(format!("--target: {e}")))?;
        let mut ctx = self.ctx(&spec);
        let res = vk_decompose(&mut ctx, &target, k);
        self.finish_ctx(&ctx);
        let w = res?;
        self.witness(&ctx, &format!("v{k}"), &w);
        self.check(format!("v{k}(args) = target"), w.value == target, "");
        Ok(())
    }

    fn canonicalize(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let target = self.target(&spec)?;
        let mut ctx = self.ctx(&spec);
        let res = conjugate_to_canonical(&mut ctx, &target);
        self.finish_ctx(&ctx);
        let c = res?;
        let s = ctx.spec();
        let ok = s
            .inv(&c.g)
            .map(|gi| s.mul(&s.mul(&gi, &target), &c.g) == c.canonical)
            .unwrap_or(false);
        self.report.witnesses.push(Witness {
            label: "g".into(),
            args: vec![s.format_quaternion(&target)],
            value: s.format_quaternion(&c.g),
        });
        let canon = s.format_quaternion(&c.canonical);
        self.check("g^-1 target g = a0 + r i", ok, canon);
        Ok(())
    }

    fn intertwine(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let alpha = self.target(&spec)?;
        let beta = self.quaternion(&spec, self.config.beta.as_ref(), "--beta")?;
        let r = solve_intertwiner(&spec, &alpha, &beta)?;
        self.report.witnesses.push(Witness {
            label: "x with alpha x = x beta".into(),
            args: vec![spec.format_quaternion(&alpha), spec.format_quaternion(&beta)],
            value: spec.format_quaternion(&r.x),
        });
        let ok = spec.mul(&alpha, &r.x) == spec.mul(&r.x, &beta);
        self.check("alpha x = x beta", ok, format!("kernel dimension {}", r.kernel_dim));
        if let Some(c) = r.norm_condition {
            self.report.notes.push(format!("norm condition {}", if c { "holds" } else { "fails" }));
        }
        Ok(())
    }

    fn express_or_realize(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let p = self.poly(spec.field())?;
        let target = self.target(&spec)?;
        let mut ctx = self.ctx(&spec);
        let res = if self.config.command == Command::Express {
            express_pure_in_image(&mut ctx, &p, &target)
        } else {
            realize_element(&mut ctx, &p, &target)
        };
        self.finish_ctx(&ctx);
        let w = res?;
        self.witness(&ctx, "p(args)", &w);
        let s = ctx.spec();
        let value = p.over(s.field())?.evaluate(s, &w.args)?;
        self.check("p(args) = target", value == target, s.format_quaternion(&value));
        Ok(())
    }

    fn waring(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let p1 = self.poly(spec.field())?;
        let p2 = match self.config.poly2.clone() {
            Some(t) => self.poly_named(spec.field(), &t, "--poly2")?,
            None => p1.clone(),
        };
        let target = self.target(&spec)?;
        let mut ctx = self.ctx(&spec);
        let res = waring_decompose(&mut ctx, &target, &p1, &p2);
        self.finish_ctx(&ctx);
        let (w1, w2) = res?;
        self.witness(&ctx, "p1 factor", &w1);
        self.witness(&ctx, "p2 factor", &w2);
        let s = ctx.spec();
        let prod = s.mul(&w1.value, &w2.value);
        self.check("factor product = target", prod == target, s.format_quaternion(&prod));
        Ok(())
    }

    fn char2(&mut self) -> Result<(), Failure> {
        let spec = self.spec()?;
        let target = self.target(&spec)?;
        let mut ctx = self.ctx(&spec);
        let sum = self.config.command == Command::Char2Sum;
        let res = if sum {
            char2_sum_decompose(&mut ctx, &target)
        } else {
            char2_product_sum_decompose(&mut ctx, &target)
        };
        self.finish_ctx(&ctx);
        let w = res?;
        let label = if sum {
            "s2(x1,x2) + s2(x3,x4) s2(x5,x6)"
        } else {
            "s2(x1,x2) s2(x3,x4) + s2(x5,x6) s2(x7,x8)"
        };
        self.witness(&ctx, label, &w);
        self.check("value = target", w.value == target, "");
        Ok(())
    }

    fn fit_form(&mut self) -> Result<(), Failure> {
        let f = self.field()?;
        let p = self.poly(&f)?;
        let fit = match p.arity() {
            3 => fit_deg3_form(&p)?,
            4 => fit_deg4_form(&p)?,
            m => return Err(Failure::error(format!("fit-form needs arity 3 or 4, got {m}"))),
        };
        let lambdas: Vec<String> = fit.lambdas.iter().map(|l| f.format_element(l)).collect();
        self.check(
            "p is a combination of the canonical terms",
            true,
            format!("lambdas [{}], rank {}", lambdas.join(", "), fit.rank),
        );
        Ok(())
    }

    fn matrix_center(&mut self) -> Result<(), Failure> {
        let ring = FiniteRing::parse(&self.config.ring)?;
        let f = match ring.element(0) {
            Some(_) => self.config.ring.parse::<FieldDescriptor>()?,
            None => FieldDescriptor::rational(),
        };
        let p = self.poly(&f)?;
        let n = self.config.n;
        self.report.field = ring.name().to_string();
        self.report.algebra = format!("M{n}({})", ring.name());
        let r = verify_center_theorem(&p, n, &ring, self.config.budget)?;
        self.report.eval_count += r.eval_count;
        self.report.image_size = Some(r.image_size);
        let units = matrix_units_check(&p, n, &ring, self.config.budget)?;
        self.check(
            "matrix units give diagonal or single-cell values",
            units.pass,
            match &units.counterexample {
                None => format!("{} tuples", units.tuples),
                Some((_, v)) => format!("value {}", v.display()),
            },
        );
        match r.verdict {
            CenterVerdict::Pass => {
                self.report.class = Some("Central".into());
                self.check("center theorem", true, "image consists of scalar matrices");
            }
            CenterVerdict::Vacuous { reason, witness } => {
                self.report.class = Some("Vacuous".into());
                let w = witness.map(|m| format!(": {}", m.display())).unwrap_or_default();
                self.report.notes.push(format!("hypothesis fails, {reason}{w}"));
                if units.pass {
                    self.report.status = "negative";
                }
            }
            CenterVerdict::Fail { witness } => {
                self.check("center theorem", false, format!("non-scalar value {}", witness.display()));
            }
        }
        Ok(())
    }

    fn suite(&mut self) -> Result<(), Failure> {
        self.report.field = "various".into();
        self.report.algebra = "various".into();
        let timing = self.report.wall_ms.is_some();
        self.report.criteria = suite::run_all(self.config.seed, timing);
        Ok(())
    }
}

/// Runs one job. Reports are produced for failures too; `timing` controls
/// whether wall-clock fields are filled in.
pub fn run(config: &JobConfig, timing: bool) -> Report {
    let start = Instant::now();
    let mut job = Job {
        config,
        report: Report::new(config),
    };
    if timing {
        job.report.wall_ms = Some(0);
    }
    match job.run() {
        Ok(()) => {
            let failed = job.report.checks.iter().any(|c| !c.pass) || job.report.criteria.iter().any(|c| !c.pass);
            if failed {
                job.report.status = "fail";
            }
        }
        Err(f) => {
            job.report.status = if f.negative { "negative" } else { "error" };
            job.report.error = Some(f.message);
        }
    }
    if timing {
        job.report.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    job.report
}

/// Runs a job and writes its report; returns the exit code.
pub fn run_to_file(config: &JobConfig, out: &Path, timing: bool) -> std::io::Result<(i32, Report)> {
    let report = run(config, timing);
    std::fs::write(out, report.to_json())?;
    Ok((report.exit_code(), report))
}
