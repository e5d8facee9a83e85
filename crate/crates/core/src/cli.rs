//! Command-line front end: argument parsing, fixture lookup and the `repro` suite.
//!
//! File arguments are read from disk when the path exists and otherwise looked
//! up among the shipped fixtures by file name, so `bs_system.calc` works from
//! any directory.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{
    check_proof, closure_bounded, is_theorem_bounded, translate_calculus, Calculus, ClosureConfig, Proof, TheoremSearch,
};
use crate::error::{Error, Result};
use crate::fixtures::{self, golden};
use crate::independence::{
    audit_axiom_tables, diff_lines, evaluation_chain, search_generalized_model, search_matrix, verify_independence, ImpStrategy,
    MatrixSearch, ModelStrategy, Report, Semantics, VerifyConfig,
};
use crate::semantics::{find_countermodel, monadic_bound, true_star, Algebra, GeneralizedModel, Matrix, StarAlgebra, Subset};
use crate::syntax::{parse, Formula, Signature};
use crate::translation::{injective_up_to, surjective_up_to, ImageConfig, Translation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "axtrans",
    version,
    about = "Axiom systems, definitional translations and independence models"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized search strategies.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and print its normal form.
    Parse {
        formula: String,
        /// Parse against this calculus's signature.
        #[arg(long)]
        calc: Option<String>,
    },
    /// Translate a formula or a whole calculus.
    Translate {
        translation: String,
        formula: Option<String>,
        /// Translate this calculus instead of a formula.
        #[arg(long)]
        calculus: Option<String>,
        /// Also test surjectivity and injectivity up to this depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check a proof file against a calculus.
    CheckProof { calc: String, proof: String },
    /// Print the bounded closure of a calculus.
    Closure {
        calc: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Search the bounded closure for a formula.
    Prove {
        calc: String,
        formula: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Evaluate a formula in a model.
    Eval {
        #[arg(value_enum)]
        mode: EvalMode,
        model: String,
        formula: String,
    },
    /// Decide classical validity of a monadic formula.
    Valid {
        formula: String,
        /// Largest domain to search (default: 2^predicates).
        #[arg(long)]
        max_domain: Option<usize>,
    },
    /// Certify that a model or matrix separates a target from a calculus.
    VerifyIndependence {
        calc: String,
        model: String,
        target: String,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Values)]
        semantics: SemanticsArg,
        /// Filler depth for axiom instances.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Individual variables in the filler pool (star semantics).
        #[arg(long, default_value_t = 3)]
        vars: u32,
    },
    /// Print the A4/A5 value tables of a two-element model.
    AuditTables {
        model: String,
        /// Compare with `a4_table.golden` and `a5_tables.golden` in this directory.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Search for a finite matrix separating a target from a propositional calculus.
    SearchMatrix {
        calc: String,
        target: String,
        /// Translate the calculus first.
        #[arg(long)]
        translate: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 50_000_000)]
        max_candidates: u64,
    },
    /// Search for a two-element generalized model separating a target.
    SearchModel {
        calc: String,
        target: String,
        /// Model supplying the seed table, designated set and predicate.
        #[arg(long, default_value = "prop1_model.gmodel")]
        seed_model: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Neighbourhood)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Tables drawn by the random strategy.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 50_000_000)]
        max_candidates: u64,
    },
    /// Reproduce the reference results and compare with the golden files.
    Repro {
        #[arg(value_enum, default_value_t = ReproTarget::All)]
        which: ReproTarget,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Bounds {
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub steps: usize,
    #[arg(long, default_value_t = 2)]
    pub vars: u32,
}

impl Bounds {
    fn config(self) -> ClosureConfig {
        ClosureConfig::new(self.depth, self.steps).vars(self.vars)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum EvalMode {
    Standard,
    Generalized,
    Star,
    Matrix,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum SemanticsArg {
    Values,
    Star,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum StrategyArg {
    Neighbourhood,
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReproTarget {
    Prop1,
    Prop2,
    Frank,
    Hiz,
    Replacement,
    All,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = match cfg.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cfg)),
            Err(e) => Err(Error::Unsupported(e.to_string())),
        },
        None => dispatch(&cfg),
    };
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ResourceCap(_) => EXIT_RESOURCE_CAP,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Reads `arg` from disk, falling back to the shipped fixture of that file name.
pub fn load(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(std::fs::read_to_string(path)?);
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or(arg);
    fixtures::by_name(name).map(str::to_owned).ok_or_else(|| {
        Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no such file or fixture: {arg}"),
        ))
    })
}

fn load_calculus(arg: &str) -> Result<Calculus> {
    Calculus::from_text(arg, &load(arg)?)
}

fn load_translation(arg: &str) -> Result<Translation> {
    Translation::from_text(arg, &load(arg)?)
}

fn load_model(arg: &str) -> Result<GeneralizedModel> {
    GeneralizedModel::from_text(arg, &load(arg)?)
}

fn is_matrix_file(arg: &str) -> bool {
    arg.ends_with(".matrix")
}

/// A formula given inline, or a `.fml` file holding one.
fn formula_arg(arg: &str, sig: &Signature) -> Result<Formula> {
    let text = if arg.ends_with(".fml") { load(arg)? } else { arg.to_owned() };
    let body: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    Ok(parse(&body.join(" "), sig)?)
}

struct Emit {
    format: Format,
    text: String,
}

impl Emit {
    fn new(format: Format) -> Self {
        Emit {
            format,
            text: String::new(),
        }
    }

    /// Text or pretty JSON, depending on the format.
    fn put(mut self, code: i32, text: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<(i32, String)> {
        self.text = match self.format {
            Format::Text => text(),
            Format::Json => serde_json::to_string_pretty(&json())? + "\n",
        };
        Ok((code, self.text))
    }
}

fn dispatch(cfg: &RunConfig) -> Result<(i32, String)> {
    let emit = Emit::new(cfg.format);
    match &cfg.command {
        Command::Parse { formula, calc } => {
            let sig = match calc {
                Some(c) => load_calculus(c)?.sig,
                None => Signature::permissive(),
            };
            let f = formula_arg(formula, &sig)?;
            let free: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
            emit.put(
                EXIT_OK,
                || format!("{f}\ndepth {}, size {}, free [{}]\n", f.depth(), f.size(), free.join(" ")),
                || json!({"formula": f.to_string(), "depth": f.depth(), "size": f.size(), "free": free, "ast": format!("{f:?}")}),
            )
        }
        Command::Translate {
            translation,
            formula,
            calculus,
            depth,
        } => {
            let t = load_translation(translation)?;
            let mut text = String::new();
            let mut doc = json!({"translation": t.name});
            if let Some(c) = calculus {
                let tc = translate_calculus(&t, &load_calculus(c)?)?;
                text += &tc.to_text();
                doc["calculus"] = json!(tc.to_text());
            }
            if let Some(f) = formula {
                let g = t.translate(&formula_arg(f, &t.source)?)?;
                text += &format!("{g}\n");
                doc["formula"] = json!(g.to_string());
            }
            if let Some(d) = depth {
                let image = ImageConfig::default();
                let s = surjective_up_to(&t, *d, &image)?;
                let i = injective_up_to(&t, *d, &image)?;
                text += &match s.witness() {
                    None => format!("surjective up to depth {d}\n"),
                    Some(w) => format!("not surjective: {w} (depth {}) is not an image\n", w.depth()),
                };
                text += &match i.witness() {
                    None => format!("injective up to depth {d}\n"),
                    Some((a, b)) => format!("not injective: {a} and {b} have the same image\n"),
                };
                doc["surjectivity"] = serde_json::to_value(&s)?;
                doc["injectivity"] = serde_json::to_value(&i)?;
            }
            emit.put(EXIT_OK, || text, || doc)
        }
        Command::CheckProof { calc, proof } => {
            let c = load_calculus(calc)?;
            let p = Proof::from_text(proof, &load(proof)?, &c)?;
            let v = check_proof(&c, &p);
            let code = if v.is_accepted() { EXIT_OK } else { EXIT_REFUTED };
            emit.put(code, || format!("{v}\n"), || json!(v))
        }
        Command::Closure { calc, bounds } => {
            let c = load_calculus(calc)?;
            let cl = closure_bounded(&c, &bounds.config())?;
            let shown: Vec<String> = cl.sorted().iter().map(|f| f.to_string()).collect();
            emit.put(
                EXIT_OK,
                || {
                    let mut s = format!(
                        "{} theorems after {} rounds{}\n",
                        cl.len(),
                        cl.rounds,
                        if cl.saturated { " (saturated)" } else { "" }
                    );
                    for f in &shown {
                        s += &format!("{f}\n");
                    }
                    s
                },
                || json!({"theorems": shown, "rounds": cl.rounds, "saturated": cl.saturated}),
            )
        }
        Command::Prove { calc, formula, bounds } => {
            let c = load_calculus(calc)?;
            let f = formula_arg(formula, &c.sig)?;
            match is_theorem_bounded(&c, &f, &bounds.config())? {
                TheoremSearch::Yes(p) => emit.put(EXIT_OK, || format!("YES\n{p}"), || json!({"result": "yes", "proof": p.to_string()})),
                TheoremSearch::Unknown {
                    rounds,
                    theorems,
                    saturated,
                } => emit.put(
                    EXIT_REFUTED,
                    || {
                        format!(
                            "UNKNOWN ({theorems} theorems, {rounds} rounds{})\n",
                            if saturated { ", saturated" } else { "" }
                        )
                    },
                    || json!({"result": "unknown", "rounds": rounds, "theorems": theorems, "saturated": saturated}),
                ),
            }
        }
        Command::Eval { mode, model, formula } => eval(emit, *mode, model, formula),
        Command::Valid { formula, max_domain } => {
            let f = formula_arg(formula, &Signature::permissive())?;
            let bound = max_domain.unwrap_or_else(|| monadic_bound(&f));
            match find_countermodel(&f, bound)? {
                None => emit.put(EXIT_OK, || "valid\n".into(), || json!({"valid": true, "max_domain": bound})),
                Some(cm) => emit.put(
                    EXIT_REFUTED,
                    || format!("not valid\ncountermodel: {cm}\n"),
                    || json!({"valid": false, "max_domain": bound, "countermodel": cm.to_string()}),
                ),
            }
        }
        Command::VerifyIndependence {
            calc,
            model,
            target,
            semantics,
            depth,
            vars,
        } => {
            let c = load_calculus(calc)?;
            let t = formula_arg(target, &c.sig)?;
            let cfg = VerifyConfig {
                instance_depth: *depth,
                vars: *vars,
                ..VerifyConfig::default()
            };
            let report = if is_matrix_file(model) {
                let m = Matrix::from_text(model, &load(model)?)?;
                verify_independence(&c, Semantics::Matrix(&m), &t, &cfg)?
            } else {
                let m = load_model(model)?;
                let sem = match semantics {
                    SemanticsArg::Values => Semantics::Values(&m),
                    SemanticsArg::Star => Semantics::Star(&m),
                };
                verify_independence(&c, sem, &t, &cfg)?
            };
            report_out(emit, &report)
        }
        Command::AuditTables { model, golden } => {
            let m = load_model(model)?;
            let tables = audit_axiom_tables(&m)?;
            let (a4, a5) = (tables.a4_text(), tables.a5_text());
            let mut diffs = Vec::new();
            if let Some(dir) = golden {
                for (file, found) in [("a4_table.golden", &a4), ("a5_tables.golden", &a5)] {
                    let expected = std::fs::read_to_string(dir.join(file))?;
                    diffs.extend(diff_lines(&expected, found).into_iter().map(|d| format!("{file} {d}")));
                }
            }
            let code = if diffs.is_empty() { EXIT_OK } else { EXIT_REFUTED };
            emit.put(
                code,
                || {
                    let mut s = format!("{a4}\n{a5}");
                    for d in &diffs {
                        s += &format!("DIFF {d}\n");
                    }
                    s
                },
                || json!({"a4": a4, "a5": a5, "diffs": diffs}),
            )
        }
        Command::SearchMatrix {
            calc,
            target,
            translate,
            max_size,
            max_candidates,
        } => {
            let mut c = load_calculus(calc)?;
            if let Some(t) = translate {
                c = translate_calculus(&load_translation(t)?, &c)?;
            }
            let t = formula_arg(target, &c.sig)?;
            let out = search_matrix(
                &c,
                &t,
                &MatrixSearch {
                    max_size: *max_size,
                    max_candidates: *max_candidates,
                },
            )?;
            let code = if out.found.is_some() { EXIT_OK } else { EXIT_REFUTED };
            emit.put(
                code,
                || match &out.found {
                    Some(m) => format!("FOUND after {} candidates ({})\n{}", out.examined, out.space, m.to_text()),
                    None => format!("NOT FOUND after {} candidates ({})\n", out.examined, out.space),
                },
                || json!({"found": out.found.as_ref().map(Matrix::to_json), "examined": out.examined, "space": out.space}),
            )
        }
        Command::SearchModel {
            calc,
            target,
            seed_model,
            strategy,
            radius,
            samples,
            depth,
            max_candidates,
        } => {
            let c = load_calculus(calc)?;
            let t = formula_arg(target, &c.sig)?;
            let mut s = ModelStrategy::seeded(&load_model(seed_model)?)?;
            s.instance_depth = *depth;
            s.max_candidates = *max_candidates;
            s.imp = match (strategy, s.imp) {
                (StrategyArg::Neighbourhood, ImpStrategy::Neighbourhood { seed, .. }) => {
                    ImpStrategy::Neighbourhood { seed, radius: *radius }
                }
                (StrategyArg::Random, _) => ImpStrategy::Random {
                    samples: *samples,
                    seed: cfg.seed,
                },
                (_, _) => ImpStrategy::Exhaustive,
            };
            let out = search_generalized_model(&c, &t, &s)?;
            let code = if out.found.is_some() { EXIT_OK } else { EXIT_REFUTED };
            emit.put(
                code,
                || match &out.found {
                    Some(m) => format!("FOUND after {} candidates ({})\n{}", out.examined, out.space, m.to_text()),
                    None => format!("NOT FOUND after {} candidates ({})\n", out.examined, out.space),
                },
                || json!({"found": out.found.as_ref().map(GeneralizedModel::to_json), "examined": out.examined, "space": out.space}),
            )
        }
        Command::Repro { which } => {
            let sections = repro(*which)?;
            let ok = sections.iter().all(Section::passed);
            let code = if ok { EXIT_OK } else { EXIT_REFUTED };
            emit.put(code, || sections.iter().map(Section::render).collect(), || json!(sections))
        }
    }
}

fn report_out(emit: Emit, report: &Report) -> Result<(i32, String)> {
    let code = if report.is_independent() { EXIT_OK } else { EXIT_REFUTED };
    match emit.format {
        Format::Text => Ok((code, report.to_string())),
        Format::Json => Ok((code, report.to_json() + "\n")),
    }
}

fn eval(emit: Emit, mode: EvalMode, model: &str, formula: &str) -> Result<(i32, String)> {
    let sig = Signature::permissive();
    let f = formula_arg(formula, &sig)?;
    match mode {
        EvalMode::Matrix => {
            let m = Matrix::from_text(model, &load(model)?)?;
            let refuted = m.refuting_valuation(&f)?;
            let shown = refuted
                .as_ref()
                .map(|v| v.iter().map(|(p, x)| format!("{p}={x}")).collect::<Vec<_>>().join(" "));
            emit.put(
                EXIT_OK,
                || match &shown {
                    None => format!("{f}: designated under every valuation\n"),
                    Some(v) => format!("{f}: undesignated at {v}\n"),
                },
                || json!({"formula": f.to_string(), "always_designated": shown.is_none(), "refuting_valuation": shown}),
            )
        }
        EvalMode::Star => {
            let m = load_model(model)?;
            let alg = StarAlgebra::new(&m);
            let value = alg.show(alg.eval_value(&f)?);
            let holds = true_star(&m, &f)?;
            emit.put(
                EXIT_OK,
                || format!("{value}\n{}\n", if holds { "true*" } else { "not true*" }),
                || json!({"formula": f.to_string(), "value": value, "true_star": holds}),
            )
        }
        EvalMode::Standard | EvalMode::Generalized => {
            let mut m = load_model(model)?;
            if mode == EvalMode::Standard {
                let prims: Vec<_> = m.tables.keys().cloned().collect();
                m = GeneralizedModel::standard(m.domain.clone(), m.predicates.clone(), &prims)?;
            } else {
                m = m.with_defined_forall()?;
            }
            let v = m.value_1var(&f)?;
            let designated = m.is_designated(v);
            emit.put(
                EXIT_OK,
                || format!("{}{}\n", m.show(v), if designated { " (designated)" } else { "" }),
                || json!({"formula": f.to_string(), "value": m.show(v), "designated": designated}),
            )
        }
    }
}

/// One checked claim of a reproduction section.
#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Criterion {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: ReproTarget,
    pub output: String,
    pub criteria: Vec<Criterion>,
}

impl Section {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let name = serde_json::to_value(self.name)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let mut s = format!("== {name} ==\n{}", self.output);
        for c in &self.criteria {
            s += &format!("[{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        s += "\n";
        s
    }
}

/// Runs one reproduction section, or all of them in order.
pub fn repro(which: ReproTarget) -> Result<Vec<Section>> {
    Ok(match which {
        ReproTarget::Prop1 => vec![repro_prop1()?],
        ReproTarget::Prop2 => vec![repro_prop2()?],
        ReproTarget::Frank => vec![repro_frank()?],
        ReproTarget::Hiz => vec![repro_hiz()?],
        ReproTarget::Replacement => vec![repro_replacement()?],
        ReproTarget::All => vec![repro_prop1()?, repro_prop2()?, repro_frank()?, repro_hiz()?, repro_replacement()?],
    })
}

fn golden_check(name: &str, expected: &str, found: &str) -> Criterion {
    let diffs = diff_lines(expected, found);
    if diffs.is_empty() {
        Criterion::new(name, true, "matches golden")
    } else {
        Criterion::new(name, false, diffs.join("; "))
    }
}

fn checks_pass(report: &Report, rules: bool) -> (bool, String) {
    let checks = if rules { &report.rules } else { &report.axioms };
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
    let instances: u128 = checks.iter().map(|c| c.instances).sum();
    if failed.is_empty() {
        (true, format!("{} checks, {instances} instances", checks.len()))
    } else {
        (false, format!("failing: {}", failed.join(", ")))
    }
}

fn repro_prop1() -> Result<Section> {
    let (c, m, t) = (fixtures::bs_system(), fixtures::prop1_model(), fixtures::target());
    let report = verify_independence(&c, Semantics::Values(&m), &t, &VerifyConfig::default())?;
    let tables = audit_axiom_tables(&m)?;
    let chain = evaluation_chain(&m, &t)?.join("\n") + "\n";
    let forall = m.compose_forall()?;
    let expected_forall = ["{u}", "{u}", "{}", "{}"];
    let args = ["{u,v}", "{u}", "{v}", "{}"];
    let forall_ok = args
        .iter()
        .zip(expected_forall)
        .map(|(a, e)| Ok(forall.get(&[m.domain.parse_subset(a)?]) == m.domain.parse_subset(e)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let (axioms_ok, axioms_detail) = checks_pass(&report, false);
    let (rules_ok, rules_detail) = checks_pass(&report, true);
    let output = format!("{report}\n{}\n{}\n{chain}\n", tables.a4_text(), tables.a5_text());
    Ok(Section {
        name: ReproTarget::Prop1,
        output,
        criteria: vec![
            Criterion::new("axiom instances designated", axioms_ok, axioms_detail),
            Criterion::new("rules preserve designation", rules_ok, rules_detail),
            Criterion::new(
                "composed forall table",
                forall_ok,
                format!(
                    "{} {} {} {}",
                    m.show(forall.get(&[m.domain.full()])),
                    m.show(forall.get(&[Subset(1)])),
                    m.show(forall.get(&[Subset(2)])),
                    m.show(forall.get(&[Subset(0)]))
                ),
            ),
            golden_check("A4 table", golden::A4_TABLE, &tables.a4_text()),
            golden_check("A5 tables", golden::A5_TABLES, &tables.a5_text()),
            golden_check("evaluation chain", golden::PROP1_CHAIN, &chain),
            Criterion::new(
                "target undesignated",
                !report.target_designated,
                format!("value {}", report.target_value),
            ),
        ],
    })
}

fn repro_prop2() -> Result<Section> {
    let (c, m, t) = (fixtures::bs_system(), fixtures::prop1_model(), fixtures::target());
    let report = verify_independence(&c, Semantics::Star(&m), &t, &VerifyConfig::default())?;
    let (axioms_ok, axioms_detail) = checks_pass(&report, false);
    let (rules_ok, rules_detail) = checks_pass(&report, true);
    let holds = true_star(&m, &t)?;
    Ok(Section {
        name: ReproTarget::Prop2,
        output: report.to_string(),
        criteria: vec![
            Criterion::new("axiom instances true*", axioms_ok, axioms_detail),
            Criterion::new("rules preserve true*", rules_ok, rules_detail),
            Criterion::new(
                "target not true*",
                !holds && !report.target_designated,
                format!("value {}", report.target_value),
            ),
        ],
    })
}

fn repro_frank() -> Result<Section> {
    let image = ImageConfig::default();
    let s = surjective_up_to(&fixtures::identity_bot(), 3, &image)?;
    let bot = Formula::constant("bot");
    let surj = Criterion::new(
        "identity into {or, not, bot} misses bot",
        s.witness() == Some(&bot),
        s.witness()
            .map_or("surjective".to_owned(), |w| format!("witness {w} of depth {}", w.depth())),
    );
    let cl = closure_bounded(&fixtures::top_only_calculus(), &ClosureConfig::new(3, 5))?;
    let thms: Vec<String> = cl.sorted().iter().map(|f| f.to_string()).collect();
    let top = Criterion::new(
        "top-only closure is {top}",
        cl.theorems() == [Formula::constant("top")],
        format!("{{{}}}", thms.join(", ")),
    );
    let i = injective_up_to(&fixtures::merge_constants(), 1, &image)?;
    let inj = Criterion::new(
        "merging two constants is not injective",
        !i.holds(),
        i.witness().map_or("injective".to_owned(), |(a, b)| format!("{a} and {b} collide")),
    );
    Ok(Section {
        name: ReproTarget::Frank,
        output: String::new(),
        criteria: vec![surj, top, inj],
    })
}

fn repro_hiz() -> Result<Section> {
    let c = translate_calculus(&fixtures::halmos(), &fixtures::hilbert_ackermann())?;
    let t = parse("~(p1 /\\ ~p1)", &c.sig)?;
    let out = search_matrix(&c, &t, &MatrixSearch::default())?;
    let mut output = format!("searched {} candidates ({})\n", out.examined, out.space);
    let found = match &out.found {
        Some(m) => {
            let again = Matrix::from_text("found", &m.to_text())?;
            let report = verify_independence(&c, Semantics::Matrix(&again), &t, &VerifyConfig::default())?;
            output += &m.to_text();
            output += &report.to_string();
            Criterion::new("separating matrix re-verifies", report.is_independent(), format!("size {}", m.size))
        }
        None => Criterion::new("separating matrix re-verifies", false, "no matrix found"),
    };
    let boolean = Matrix::boolean(c.sig.connectives.iter().cloned())?;
    let b = verify_independence(&c, Semantics::Matrix(&boolean), &t, &VerifyConfig::default())?;
    let rejected = Criterion::new(
        "Boolean matrix rejected",
        b.target_designated && !b.is_independent(),
        format!("target {}", if b.target_designated { "designated" } else { "undesignated" }),
    );
    Ok(Section {
        name: ReproTarget::Hiz,
        output,
        criteria: vec![found, rejected],
    })
}

fn repro_replacement() -> Result<Section> {
    let m = fixtures::prop1_model();
    let sig = Signature::permissive();
    let p = parse("P(x1)", &sig)?;
    let nnp = parse("~~P(x1)", &sig)?;
    let (vp, vn) = (m.value_1var(&p)?, m.value_1var(&nnp)?);
    let values = Criterion::new(
        "P(x1) and ~~P(x1) differ",
        vp == m.domain.parse_subset("{v}")? && vn == Subset::EMPTY,
        format!("{} vs {}", m.show(vp), m.show(vn)),
    );
    let there = Formula::imp(p.clone(), nnp.clone());
    let back = Formula::imp(nnp, p);
    let both = find_countermodel(&there, monadic_bound(&there))?.is_none() && find_countermodel(&back, monadic_bound(&back))?.is_none();
    let valid = Criterion::new("both directions classically valid", both, format!("{there} ; {back}"));
    Ok(Section {
        name: ReproTarget::Replacement,
        output: String::new(),
        criteria: vec![values, valid],
    })
}
