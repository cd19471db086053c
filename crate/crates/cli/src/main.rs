use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use subkern::calculus::{LogicSpec, SearchBudget};
use subkern::corpus::{corpus_entries, run_corpus, Filter};
use subkern::formula::{parse_formula, Style};
use subkern::proof::{check_derivation, read_derivation, render_derivation, write_derivation, ProofFile, ProofStyle};
use subkern::sequent::{parse_hypersequent, Hypersequent, Sequent};
use subkern::transform::{eliminate_cuts, translate_kmall_to_mall};
use subkern::{prove, Verdict};

const GRAMMAR: &str = "\
input grammar (loosest binding first):
  A -> B        linear implication, right associative
  A \\/ B        plus (additive disjunction)
  A /\\ B        with (additive conjunction)
  A + B         par (multiplicative disjunction)
  A * B         tensor (multiplicative conjunction)
  ~A  <.>A  [.]A  []A  <>A
                negation, Tarskian diamond and box, primitive box and diamond
  0  1  bot  top  and identifiers starting with a letter
sequents:       A, B => C, D
hypersequents:  A => B | C => D
Unicode and LaTeX renderings are accepted as well.";

#[derive(Parser)]
#[command(name = "subkern", version, about = "Prover and proof checker for MALL with Tarskian modalities", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Ascii,
    Unicode,
    Latex,
}

impl StyleArg {
    fn formula(self) -> Style {
        match self {
            StyleArg::Ascii => Style::Ascii,
            StyleArg::Unicode => Style::Unicode,
            StyleArg::Latex => Style::Latex,
        }
    }

    fn proof(self) -> ProofStyle {
        match self {
            StyleArg::Ascii => ProofStyle::Text,
            StyleArg::Unicode => ProofStyle::Unicode,
            StyleArg::Latex => ProofStyle::Latex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Derivable,
    NotDerivable,
    Unknown,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Maximum proof height explored.
    #[arg(long)]
    depth: Option<usize>,
    /// Contraction steps allowed per branch.
    #[arg(long)]
    contraction_budget: Option<u32>,
    /// External contraction steps allowed per branch.
    #[arg(long)]
    ec_budget: Option<u32>,
    /// Communication steps allowed per branch.
    #[arg(long)]
    com_budget: Option<u32>,
    /// Rule applications before the search gives up.
    #[arg(long)]
    node_limit: Option<usize>,
}

impl BudgetArgs {
    fn apply(&self, mut b: SearchBudget) -> SearchBudget {
        if let Some(v) = self.depth {
            b.max_depth = v;
        }
        if let Some(v) = self.contraction_budget {
            b.contraction_budget = v;
        }
        if let Some(v) = self.ec_budget {
            b.ec_budget = v;
        }
        if let Some(v) = self.com_budget {
            b.com_budget = v;
        }
        if let Some(v) = self.node_limit {
            b.node_limit = v;
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search for a cut-free proof of a sequent or hypersequent.
    Prove {
        /// The goal sequent or formula, or @PATH to read it from a file.
        goal: String,
        #[arg(long, env = "SUBKERN_DEFAULT_LOGIC")]
        logic: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Extra leaf sequent usable as a hypothesis (repeatable).
        #[arg(long)]
        axiom: Vec<String>,
        /// Expected verdict; the exit status reports whether it was met.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        /// Write the proof file here when a proof is found.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        /// Print the proof tree after the verdict.
        #[arg(long)]
        print_proof: bool,
        #[arg(long, value_enum, default_value = "unicode")]
        style: StyleArg,
    },
    /// Check a proof file.
    Check {
        proof: PathBuf,
        /// Check under this logic instead of the one named in the file.
        #[arg(long)]
        logic: Option<String>,
    },
    /// Translate a cut-free KMALL proof file into a MALL proof file.
    Translate {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eliminate the cuts from a KMALL+Cut proof file.
    ElimCut {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the registry of derivability claims.
    Corpus {
        /// Comma-separated terms such as logic=iul,kind=rule-derivable.
        #[arg(long, default_value = "")]
        filter: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Write one proof file per proved entry into this directory.
        #[arg(long)]
        emit_proofs: Option<PathBuf>,
    },
    /// Pretty-print a formula, sequent, hypersequent or proof file.
    Render {
        /// Text to render; ignored with --proof.
        text: Option<String>,
        #[arg(long)]
        proof: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "unicode")]
        style: StyleArg,
    },
    /// Parse text and report its structure.
    Parse { text: String },
}

/// Errors that should exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read_input(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(text.to_string()),
    }
}

fn parse_hs(text: &str) -> Result<Hypersequent> {
    parse_hypersequent(text.trim()).map_err(|e| usage(format!("{e} in '{}'", text.trim())))
}

/// A bare formula F is read as the goal `=> F`.
fn parse_goal(text: &str) -> Result<Hypersequent> {
    match parse_formula(text.trim()) {
        Ok(f) => Ok(Hypersequent::single(Sequent::new([], [f]))),
        Err(_) => parse_hs(text),
    }
}

fn logic_of(name: &str) -> Result<LogicSpec> {
    LogicSpec::parse(name).map_err(|e| usage(e.to_string()))
}

fn load_proof(path: &Path) -> Result<ProofFile> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_derivation(BufReader::new(f)).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn save_proof(file: &ProofFile, dest: Option<&Path>) -> Result<()> {
    match dest {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_derivation(file, f)?;
        }
        None => {
            write_derivation(file, io::stdout().lock())?;
            println!();
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Prove { goal, logic, budget, axiom, expect, emit_proof, print_proof, style } => {
            let spec = logic_of(&logic)?;
            let goal = parse_goal(&read_input(&goal)?)?;
            let axioms = axiom.iter().map(|a| parse_hs(a)).collect::<Result<Vec<_>>>()?;
            let budget = budget.apply(spec.budgets);
            let verdict = prove(&goal, &spec, &budget, &axioms);
            println!("{verdict}");
            if let Verdict::Derivable(d) = &verdict {
                if print_proof {
                    print!("{}", render_derivation(d, style.proof()));
                }
                if let Some(path) = &emit_proof {
                    let file = ProofFile { logic: spec.name.clone(), axioms: axioms.clone(), root: d.clone() };
                    save_proof(&file, Some(path))?;
                }
            }
            let got = match verdict {
                Verdict::Derivable(_) => Expect::Derivable,
                Verdict::NotDerivable(_) => Expect::NotDerivable,
                Verdict::Unknown(_) => Expect::Unknown,
            };
            Ok(match expect {
                Some(e) => u8::from(e != got),
                None => u8::from(got != Expect::Derivable),
            })
        }
        Command::Check { proof, logic } => {
            let file = load_proof(&proof)?;
            let spec = logic_of(logic.as_deref().unwrap_or(&file.logic))?;
            match check_derivation(&file.root, &spec, &file.axioms) {
                Ok(()) => {
                    println!("ok");
                    Ok(0)
                }
                Err(v) => {
                    println!("{v}");
                    Ok(1)
                }
            }
        }
        Command::Translate { proof, output } => {
            let file = load_proof(&proof)?;
            match translate_kmall_to_mall(&file.root) {
                Ok(root) => {
                    save_proof(&ProofFile { logic: "mall".into(), axioms: vec![], root }, output.as_deref())?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::ElimCut { proof, output } => {
            let file = load_proof(&proof)?;
            match eliminate_cuts(&file.root) {
                Ok(root) => {
                    save_proof(&ProofFile { logic: "kmall".into(), axioms: vec![], root }, output.as_deref())?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Corpus { filter, budget, json, emit_proofs } => {
            let filter: Filter = filter.parse().map_err(|e: subkern::corpus::FilterError| usage(e.to_string()))?;
            let entries = corpus_entries(&filter);
            let report = run_corpus(&entries, &budget.apply(SearchBudget::default()));
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json())?);
            } else {
                print!("{}", report.table());
                for r in report.failures() {
                    if !r.detail.is_empty() {
                        println!("{}: {}", r.id, r.detail);
                    }
                }
            }
            if let Some(dir) = emit_proofs {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for r in &report.results {
                    if let Some(d) = &r.proof {
                        let file = ProofFile { logic: r.logic.name().into(), axioms: r.axioms.clone(), root: d.clone() };
                        save_proof(&file, Some(&dir.join(format!("{}.json", r.id))))?;
                    }
                }
            }
            Ok(u8::from(!report.all_passed()))
        }
        Command::Render { text, proof, style } => {
            if let Some(path) = proof {
                let file = load_proof(&path)?;
                print!("{}", render_derivation(&file.root, style.proof()));
                return Ok(0);
            }
            let Some(text) = text else {
                return Err(usage("render needs TEXT or --proof PATH"));
            };
            let text = read_input(&text)?;
            let out = match parse_formula(text.trim()) {
                Ok(f) => f.render(style.formula()),
                Err(_) => parse_hs(&text)?.render(style.formula()),
            };
            println!("{out}");
            Ok(0)
        }
        Command::Parse { text } => {
            let text = read_input(&text)?;
            if let Ok(f) = parse_formula(text.trim()) {
                println!("formula {}", f.render(Style::Ascii));
                println!("size {} depth {}", f.size(), f.depth());
                return Ok(0);
            }
            let h = parse_hs(&text)?;
            match h.as_sequent() {
                Some(s) => println!("sequent {}", s.render(Style::Ascii)),
                None => println!("hypersequent of {} components: {}", h.len(), h.render(Style::Ascii)),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => {
            let _ = io::stdout().flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                eprintln!("\n{GRAMMAR}");
            }
            ExitCode::from(2)
        }
    }
}
