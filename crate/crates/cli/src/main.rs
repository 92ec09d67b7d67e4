use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use proofbench::corpus::{run_corpus, DEFAULT_DEPTH};
use proofbench::fixedpoint::{fp_axiom, gl_fixedpoint_obligation, make_fp_operator, mu_closure_instance, nu_expand};
use proofbench::kernel::{check_derivation, load_derivation, load_spec_file, Derivation, SpecSource};
use proofbench::registry::{get_logic, logic_ids, schema, Specification};
use proofbench::semantics::{check_evidence_conditions, check_strong, force, is_valid, parse_model, MModel, Valuation};
use proofbench::syntax::{parse, parse_formula, parse_term, Formula, OccurrenceMode};
use proofbench::transforms;

#[derive(Parser)]
#[command(name = "proofbench", version, about = "Checks and transforms Hilbert-style derivations in modal, justification and related logics")]
struct Cli {
    /// Suppress per-step and per-entry output; only the verdict line is printed.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file.
    Check {
        file: PathBuf,
        /// Check in this logic instead of the file's.
        #[arg(long)]
        logic: Option<String>,
        /// Override the specification: `tcs`, `empty` or a spec file.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Parse a formula and print it canonically.
    Parse {
        formula: String,
        /// Also check that the formula is in this logic's language.
        #[arg(long)]
        logic: Option<String>,
    },
    /// Parse a derivation file and print it canonically.
    Print { file: PathBuf },
    /// Proof transformations; each prints the resulting derivation.
    Transform {
        #[command(subcommand)]
        verb: TransformVerb,
    },
    /// Fixed-point operator utilities.
    Fp {
        #[command(subcommand)]
        verb: FpVerb,
    },
    /// Evaluate M-models.
    Model {
        #[command(subcommand)]
        verb: ModelVerb,
    },
    /// Run the corpus.
    Corpus {
        #[command(subcommand)]
        verb: CorpusVerb,
    },
    /// List the registered logics and axiom schemas.
    Logics {
        #[command(subcommand)]
        verb: LogicsVerb,
    },
}

#[derive(Subcommand)]
enum TransformVerb {
    /// Discharge a premise (deduction theorem).
    Deduce { file: PathBuf, premise: String },
    /// Substitute a term for a justification variable throughout.
    Subst { file: PathBuf, var: String, term: String },
    /// Lift a justification-logic derivation to `t:F`.
    Lift { file: PathBuf },
    /// Internalize a QLP derivation to `t:F`.
    Internalize { file: PathBuf },
    /// Justified universal generalization on a derivation ending in `t:A`.
    Jug { file: PathBuf, var: String },
    /// Forgetful projection into the corresponding modal logic.
    Project { file: PathBuf },
    /// Replace inline steps by the derivations they stand for.
    Expand { file: PathBuf },
    /// Erase agent annotations of a multi-agent QLP derivation.
    Collapse { file: PathBuf },
    /// Print the existential translation of a modal formula.
    Translate { formula: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Modalized,
    Justified,
    ExistsJustified,
}

#[derive(Subcommand)]
enum FpVerb {
    /// Print the fixed-point axiom of an operator at the given arguments.
    Axiom {
        /// Diagonal variable.
        p: String,
        body: String,
        args: Vec<String>,
        /// Parameters, in order, comma-separated.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, value_enum, default_value = "modalized")]
        mode: Mode,
    },
    /// Print the mu closure instance `A(mu p.A) <-> mu p.A`.
    Closure { p: String, body: String },
    /// Print the expansion of `nu p.A`.
    Nu { p: String, body: String },
    /// Print the GL obligation `D <-> A(D)` for a candidate fixed point `D`.
    Obligation { p: String, body: String, candidate: String },
}

#[derive(Subcommand)]
enum ModelVerb {
    /// Check the evidence closure conditions relative to the given formulas.
    CheckConditions {
        file: PathBuf,
        formulas: Vec<String>,
        /// Closure depth for the term conditions.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Also check the strong-model condition.
        #[arg(long)]
        strong: bool,
    },
    /// Force a formula under a valuation such as `x=r1,y=r2`.
    Force {
        file: PathBuf,
        formula: String,
        #[arg(long, default_value = "")]
        valuation: String,
    },
    /// Decide validity of a formula in the model.
    Valid { file: PathBuf, formula: String },
}

#[derive(Subcommand)]
enum CorpusVerb {
    /// Check every entry whose id matches the glob pattern.
    Run {
        #[arg(default_value = "*")]
        pattern: String,
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum LogicsVerb {
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_arg(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse `{text}`"))
}

fn load(file: &Path) -> Result<Derivation> {
    Ok(load_derivation(file)?)
}

fn run(cli: Cli) -> Result<bool> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Check { file, logic, spec } => {
            let mut d = load(&file)?;
            if let Some(l) = logic {
                d = d.retarget(&l)?;
            }
            if let Some(s) = spec {
                (d.spec, d.spec_source) = match s.as_str() {
                    "tcs" => (Specification::Total, SpecSource::Tcs),
                    "empty" => (Specification::Empty, SpecSource::Empty),
                    path => (Specification::Explicit(load_spec_file(Path::new(path))?), SpecSource::File(path.into())),
                };
            }
            check(&d, quiet)
        }
        Command::Parse { formula, logic } => {
            let f = match logic {
                Some(l) => parse_formula(&formula, &get_logic(&l)?.profile)?,
                None => parse_arg(&formula)?,
            };
            println!("{f}");
            Ok(true)
        }
        Command::Print { file } => {
            print!("{}", load(&file)?);
            Ok(true)
        }
        Command::Transform { verb } => transform(verb),
        Command::Fp { verb } => fp(verb),
        Command::Model { verb } => model(verb),
        Command::Corpus { verb: CorpusVerb::Run { pattern, dir } } => {
            let results = run_corpus(&dir, &pattern)?;
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                if !quiet || !r.passed {
                    println!("{r}");
                }
            }
            println!("{passed}/{} entries passed", results.len());
            Ok(passed == results.len())
        }
        Command::Logics { verb: LogicsVerb::List } => {
            for id in logic_ids() {
                let l = get_logic(&id)?;
                let rules: Vec<String> = l.rules.iter().map(|r| format!("{r:?}")).collect();
                println!("{id}: axioms {}; rules {}", l.axioms.join(" "), rules.join(" "));
            }
            if !quiet {
                println!();
                let mut ids: Vec<&str> = Vec::new();
                for id in logic_ids() {
                    for a in get_logic(&id)?.axioms {
                        if !ids.contains(&a) {
                            ids.push(a);
                        }
                    }
                }
                for a in ids {
                    if let Some(s) = schema(a) {
                        println!("{a}: {}", s.shape);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn check(d: &Derivation, quiet: bool) -> Result<bool> {
    let report = check_derivation(d);
    if !quiet {
        for v in &report.steps {
            match &v.message {
                None => println!("step {}: ok", v.index),
                Some(m) => println!("step {}: REJECTED: {m}", v.index),
            }
        }
        for flag in &report.flags {
            println!("note: {flag}");
        }
    }
    match &report.first_failure {
        None => {
            let f = report.final_formula.as_ref().ok_or_else(|| anyhow!("no steps"))?;
            let deps: Vec<&str> = report.final_deps.iter().map(String::as_str).collect();
            if deps.is_empty() {
                println!("OK: final = {f}");
            } else {
                println!("OK: final = {f} (from {})", deps.join(", "));
            }
            Ok(true)
        }
        Some((step, msg)) => {
            println!("FAIL: step {step}: {msg}");
            Ok(false)
        }
    }
}

fn transform(verb: TransformVerb) -> Result<bool> {
    let out = match verb {
        TransformVerb::Deduce { file, premise } => transforms::deduction(&load(&file)?, &premise)?,
        TransformVerb::Subst { file, var, term } => {
            let t = parse_term(&term).with_context(|| format!("cannot parse term `{term}`"))?;
            transforms::substitute_proof(&load(&file)?, &var, &t)?
        }
        TransformVerb::Lift { file } => {
            let l = transforms::lift(&load(&file)?)?;
            println!("# term: {}", l.term);
            l.derivation
        }
        TransformVerb::Internalize { file } => {
            let l = transforms::internalize_qlp(&load(&file)?)?;
            println!("# term: {}", l.term);
            l.derivation
        }
        TransformVerb::Jug { file, var } => transforms::jug(&load(&file)?, &var)?,
        TransformVerb::Project { file } => transforms::project_derivation(&load(&file)?)?,
        TransformVerb::Expand { file } => transforms::expand_inlines(&load(&file)?)?,
        TransformVerb::Collapse { file } => transforms::collapse_derivation(&load(&file)?)?,
        TransformVerb::Translate { formula } => {
            println!("{}", transforms::exists_translate(&parse_arg(&formula)?));
            return Ok(true);
        }
    };
    print!("{out}");
    Ok(true)
}

fn fp(verb: FpVerb) -> Result<bool> {
    let f = match verb {
        FpVerb::Axiom { p, body, args, params, mode } => {
            let mode = match mode {
                Mode::Modalized => OccurrenceMode::Modalized,
                Mode::Justified => OccurrenceMode::Justified,
                Mode::ExistsJustified => OccurrenceMode::ExistsJustified,
            };
            let params: Vec<String> = params.split(',').map(|q| q.trim().to_string()).filter(|q| !q.is_empty()).collect();
            let op = make_fp_operator("d", &p, &params, parse_arg(&body)?, mode)?;
            let args = args.iter().map(|a| parse_arg(a)).collect::<Result<Vec<_>>>()?;
            fp_axiom(&op, &args)?
        }
        FpVerb::Closure { p, body } => mu_closure_instance(&p, &parse_arg(&body)?)?,
        FpVerb::Nu { p, body } => nu_expand(&p, &parse_arg(&body)?)?,
        FpVerb::Obligation { p, body, candidate } => {
            gl_fixedpoint_obligation(&p, &parse_arg(&body)?, &parse_arg(&candidate)?)?
        }
    };
    println!("{f}");
    Ok(true)
}

fn load_model(file: &Path) -> Result<MModel> {
    let text = std::fs::read_to_string(file).with_context(|| format!("cannot read `{}`", file.display()))?;
    Ok(parse_model(&text)?)
}

fn parse_valuation(m: &MModel, text: &str) -> Result<Valuation> {
    let mut v = Valuation::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, r) = pair.split_once('=').ok_or_else(|| anyhow!("expected `x=r`, found `{pair}`"))?;
        let r = m.reason(r.trim()).ok_or_else(|| anyhow!("unknown reason `{}`", r.trim()))?;
        v.insert(x.trim().to_string(), r);
    }
    Ok(v)
}

fn model(verb: ModelVerb) -> Result<bool> {
    match verb {
        ModelVerb::CheckConditions { file, formulas, depth, strong } => {
            let m = load_model(&file)?;
            let universe = formulas.iter().map(|f| parse_arg(f)).collect::<Result<Vec<_>>>()?;
            let mut report = check_evidence_conditions(&m, &universe, depth)?;
            if strong {
                let s = check_strong(&m, &universe)?;
                report.checked.extend(s.checked);
                report.violations.extend(s.violations);
            }
            for v in &report.violations {
                println!("violation: {v}");
            }
            if report.ok() {
                println!("conditions hold: {}", report.checked.join(", "));
            }
            Ok(report.ok())
        }
        ModelVerb::Force { file, formula, valuation } => {
            let m = load_model(&file)?;
            let v = parse_valuation(&m, &valuation)?;
            let forced = force(&m, &v, &parse_arg(&formula)?)?;
            println!("{}", if forced { "forced" } else { "not forced" });
            Ok(forced)
        }
        ModelVerb::Valid { file, formula } => {
            let m = load_model(&file)?;
            let valid = is_valid(&m, &parse_arg(&formula)?)?;
            println!("{}", if valid { "valid" } else { "not valid" });
            Ok(valid)
        }
    }
}
