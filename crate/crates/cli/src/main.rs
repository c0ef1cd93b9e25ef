use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ifol_core::gen::GenConfig;
use ifol_core::suite::{self, Semantics, SuiteReport};
use ifol_core::syntax::{free_vars, VirtualPredicate};
use ifol_core::{parse_formula, Error, Formula, HerbrandKB, MergePolicy, World};

const OK: u8 = 0;
const BAD_INPUT: u8 = 2;
const DISAGREE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ifol",
    version,
    about = "Four-valued intensional first-order logic over Herbrand knowledge bases"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Knowledge base file; repeat to merge several
    #[arg(long = "kb", global = true, value_name = "PATH")]
    kbs: Vec<PathBuf>,

    #[arg(long, global = true, value_enum)]
    semantics: Option<Sem>,

    #[arg(long, global = true, default_value_t = 100)]
    count: usize,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// How repeated --kb files combine conflicting facts
    #[arg(long, global = true, value_enum)]
    merge: Option<Merge>,

    /// Include ⊥ rows in extension dumps
    #[arg(long, global = true)]
    complete: bool,

    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Truth value of a sentence, or of every named query
    Eval { formula: Option<String> },
    /// Extension of an open formula, or of every named query
    Ext { formula: Option<String> },
    /// Random differential check of all selected semantics
    Commute,
    /// Kripke satisfaction against the direct valuation
    KripkeCheck { formula: Option<String> },
    /// Knowledge join of all --kb files
    Fuse,
    /// Load, sort-check and summarize
    Validate { formula: Option<String> },
    /// Search for formulas where ~exists~ and forall disagree
    DualSearch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sem {
    Direct,
    Concept,
    Kripke,
    All,
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Direct => Semantics::Direct,
            Sem::Concept => Semantics::Concept,
            Sem::Kripke => Semantics::Kripke,
            Sem::All => Semantics::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Merge {
    Overwrite,
    KJoin,
}

impl From<Merge> for MergePolicy {
    fn from(m: Merge) -> Self {
        match m {
            Merge::Overwrite => MergePolicy::Overwrite,
            Merge::KJoin => MergePolicy::KJoin,
        }
    }
}

/// Failure carrying its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::KripkeInconsistent { .. } => DISAGREE,
            _ => BAD_INPUT,
        };
        Fail(code, e.to_string())
    }
}

type Run = Result<u8, Fail>;

struct Out {
    sink: Box<dyn Write>,
}

impl Out {
    fn open(path: &Option<PathBuf>) -> Result<Self, Fail> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(
                fs::File::create(p)
                    .map_err(|e| Fail(BAD_INPUT, format!("{}: {e}", p.display())))?,
            ),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Out { sink })
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.sink, "{}", s.as_ref());
    }

    fn raw(&mut self, s: &str) {
        let _ = self.sink.write_all(s.as_bytes());
    }
}

fn load(cli: &Cli, default: MergePolicy) -> Result<Option<HerbrandKB>, Fail> {
    let policy = cli.merge.map(MergePolicy::from).unwrap_or(default);
    let mut kb: Option<HerbrandKB> = None;
    for path in &cli.kbs {
        let next = HerbrandKB::load(path)?;
        match &mut kb {
            None => kb = Some(next),
            Some(k) => k.merge(&next, policy)?,
        }
    }
    Ok(kb)
}

fn require(kb: Option<HerbrandKB>) -> Result<HerbrandKB, Fail> {
    kb.ok_or_else(|| Fail(BAD_INPUT, "no knowledge base given (use --kb PATH)".into()))
}

/// The formula given on the command line, or every named query.
fn targets(kb: &HerbrandKB, formula: &Option<String>) -> Result<Vec<(String, Formula)>, Fail> {
    match formula {
        Some(text) => Ok(vec![(String::new(), parse_formula(text, kb.signature())?)]),
        None if kb.queries().is_empty() => Err(Fail(
            BAD_INPUT,
            "no formula given and the knowledge base has no queries".into(),
        )),
        None => Ok(kb
            .queries()
            .iter()
            .map(|(n, f)| (n.to_string(), f.clone()))
            .collect()),
    }
}

fn labelled(name: &str, s: String) -> String {
    if name.is_empty() {
        s
    } else {
        format!("{name}\t{s}")
    }
}

fn eval(cli: &Cli, formula: &Option<String>) -> Run {
    let kb = require(load(cli, MergePolicy::Overwrite)?)?;
    let sem = cli
        .semantics
        .map(Semantics::from)
        .unwrap_or(Semantics::Direct);
    let mut fs = targets(&kb, formula)?;
    if formula.is_none() {
        fs.retain(|(name, f)| {
            if !f.is_sentence() {
                eprintln!("skipping open query {name}");
            }
            f.is_sentence()
        });
    }
    let world = World::new(kb);
    let mut out = Out::open(&cli.out)?;
    let mut code = OK;
    for (name, f) in fs {
        let v = suite::evaluate(&world, &f, sem)?;
        let text = match sem {
            Semantics::All | Semantics::DirectKripke => v.to_string(),
            _ => v
                .values()
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        };
        if !v.agree() {
            code = DISAGREE;
        }
        out.line(labelled(&name, text));
    }
    Ok(code)
}

fn ext(cli: &Cli, formula: &Option<String>) -> Run {
    let kb = require(load(cli, MergePolicy::Overwrite)?)?;
    let sem = cli
        .semantics
        .map(Semantics::from)
        .unwrap_or(Semantics::Direct);
    let fs = targets(&kb, formula)?;
    let world = World::new(kb);
    let mut out = Out::open(&cli.out)?;
    let mut code = OK;
    for (name, f) in fs {
        let v = suite::evaluate_open(&world, &f, sem)?;
        if !v.agree() {
            code = DISAGREE;
            eprintln!("{v}");
        }
        let name = if name.is_empty() { f.to_string() } else { name };
        let vars = VirtualPredicate::new(f).vars;
        let header: Vec<_> = vars
            .iter()
            .map(|x| format!("{}:{}", x.name, x.sort))
            .collect();
        if !header.is_empty() {
            eprintln!("columns {}", header.join(" "));
        }
        out.raw(&v.extensions[0].1.dump(&name, cli.complete));
    }
    Ok(code)
}

fn report(out: &mut Out, r: &SuiteReport, what: &str) -> u8 {
    for l in &r.lines {
        out.line(l);
    }
    eprintln!(
        "{what}: {} lines, {} failures, {} errors",
        r.lines.len(),
        r.failures,
        r.errors
    );
    if r.errors > 0 {
        BAD_INPUT
    } else if r.failures > 0 {
        DISAGREE
    } else {
        OK
    }
}

fn commute(cli: &Cli) -> Run {
    let kb = load(cli, MergePolicy::Overwrite)?;
    let sem = cli.semantics.map(Semantics::from).unwrap_or(Semantics::All);
    let r = suite::run_suite(kb.as_ref(), cli.count, cli.seed, sem, &GenConfig::default());
    Ok(report(&mut Out::open(&cli.out)?, &r, "commute"))
}

fn kripke_check(cli: &Cli, formula: &Option<String>) -> Run {
    let kb = load(cli, MergePolicy::Overwrite)?;
    let sem = Semantics::DirectKripke;
    let Some(f) = formula else {
        let r = suite::run_suite(kb.as_ref(), cli.count, cli.seed, sem, &GenConfig::default());
        return Ok(report(&mut Out::open(&cli.out)?, &r, "kripke-check"));
    };
    let kb = require(kb)?;
    let f = parse_formula(f, kb.signature())?;
    let world = World::new(kb);
    let mut out = Out::open(&cli.out)?;
    if f.is_sentence() {
        let v = suite::evaluate(&world, &f, sem)?;
        out.line(v.to_string());
        Ok(if v.agree() { OK } else { DISAGREE })
    } else {
        let v = suite::evaluate_open(&world, &f, sem)?;
        out.line(v.to_string());
        Ok(if v.agree() { OK } else { DISAGREE })
    }
}

fn fuse(cli: &Cli) -> Run {
    if cli.kbs.len() < 2 {
        return Err(Fail(BAD_INPUT, "fuse needs at least two --kb files".into()));
    }
    let policy = cli
        .merge
        .map(MergePolicy::from)
        .unwrap_or(MergePolicy::KJoin);
    let mut kb = HerbrandKB::load(&cli.kbs[0])?;
    let mut conflicts = vec![];
    for path in &cli.kbs[1..] {
        let next = HerbrandKB::load(path)?;
        match policy {
            MergePolicy::KJoin => {
                let f = kb.fuse(&next)?;
                conflicts.extend(f.conflicts);
                kb = f.kb;
            }
            MergePolicy::Overwrite => kb.merge(&next, policy)?,
        }
    }
    let text = kb.to_text();
    match &cli.out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Fail(BAD_INPUT, format!("{}: {e}", p.display())))?;
            for a in &conflicts {
                println!("conflict\t{a}");
            }
        }
        None => {
            print!("{text}");
            for a in &conflicts {
                eprintln!("conflict\t{a}");
            }
        }
    }
    eprintln!(
        "fuse: {} facts, {} conflicts",
        kb.fact_count(),
        conflicts.len()
    );
    Ok(OK)
}

fn validate(cli: &Cli, formula: &Option<String>) -> Run {
    let kb = require(load(cli, MergePolicy::Overwrite)?)?;
    let mut out = Out::open(&cli.out)?;
    if let Some(text) = formula {
        let f = parse_formula(text, kb.signature())?;
        let vars: Vec<_> = free_vars(&f)
            .iter()
            .map(|x| format!("{}:{}", x.name, x.sort))
            .collect();
        if vars.is_empty() {
            out.line(format!("ok sentence {f}"));
        } else {
            out.line(format!("ok open {} {f}", vars.join(",")));
        }
        return Ok(OK);
    }
    let sig = kb.signature();
    out.line(format!(
        "ok {} sorts, {} constants, {} predicates, {} facts, {} queries",
        sig.sorts().len(),
        sig.constants().len(),
        sig.predicates().len(),
        kb.fact_count(),
        kb.queries().len()
    ));
    Ok(OK)
}

fn dual_search(cli: &Cli) -> Run {
    let kb = load(cli, MergePolicy::Overwrite)?;
    let r = suite::dual_search(kb.as_ref(), cli.count, cli.seed, &GenConfig::default());
    Ok(report(&mut Out::open(&cli.out)?, &r, "dual-search"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { BAD_INPUT } else { OK });
        }
    };
    let run = match &cli.cmd {
        Cmd::Eval { formula } => eval(&cli, formula),
        Cmd::Ext { formula } => ext(&cli, formula),
        Cmd::Commute => commute(&cli),
        Cmd::KripkeCheck { formula } => kripke_check(&cli, formula),
        Cmd::Fuse => fuse(&cli),
        Cmd::Validate { formula } => validate(&cli, formula),
        Cmd::DualSearch => dual_search(&cli),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("ifol: {msg}");
            ExitCode::from(code)
        }
    }
}
