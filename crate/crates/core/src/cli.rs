//! Command-line front end. `run` parses arguments, writes to `out` and
//! returns the exit status: 0 ok, 1 usage, 2 parse, 3 semantic.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::canon::{Calculus, Digestible, StateJson};
use crate::encodings::{self, iota, unfold_package, Allocator, EncodeError};
use crate::equivalence::{self, bounded_bisim, BisimOptions, BisimVerdict, Observable};
use crate::name::{Atom, NameSort};
use crate::pi::PiTerm;
use crate::reduction::{explore, reduce_deterministic, Budgets, Process};
use crate::rho::RhoTerm;
use crate::rhocomb::RcTerm;
use crate::syntax::{self, ParseError};
use crate::yoshida::YoshidaTerm;

#[derive(Parser, Debug)]
#[command(name = "rhocomb", version, about = "Terms, reduction, translations and bisimulation for four process calculi")]
pub struct Cli {
    /// Machine-readable output, errors included.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and pretty-print a term.
    Parse(TermArgs),
    /// Canonical form and digest.
    Canon(TermArgs),
    /// Free names.
    Fn(TermArgs),
    /// Run a term.
    Reduce {
        #[command(flatten)]
        term: TermArgs,
        #[arg(long, value_enum, default_value_t = Strategy::Deterministic)]
        strategy: Strategy,
        #[arg(long, default_value_t = 8)]
        max_steps: usize,
        #[arg(long, default_value_t = 2)]
        max_unfolds: usize,
        /// Also write the trace (or graph) as JSON to this file.
        #[arg(long, value_name = "PATH")]
        trace_json: Option<String>,
    },
    /// Translate a π or Yoshida term.
    Translate {
        #[arg(long, default_value = "pi")]
        from: Calculus,
        #[arg(long, value_enum)]
        to: Target,
        /// Write the generated-name ledger as JSON to this file.
        #[arg(long, value_name = "PATH")]
        ledger_json: Option<String>,
        /// Print quoted names in full instead of abbreviating large ones.
        #[arg(long)]
        full: bool,
        /// Term text; read from stdin when absent or `-`.
        term: Option<String>,
    },
    /// Output barbs on a set of names, optionally closed under reduction.
    Barbs {
        #[command(flatten)]
        term: TermArgs,
        /// Comma-separated observed names.
        #[arg(long)]
        names: String,
        /// Also report weak barbs within this many steps.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Bounded barbed bisimulation between two terms.
    Bisim {
        #[arg(long, short = 'c', default_value = "pi")]
        calculus: Calculus,
        /// Calculus of RIGHT; defaults to that of LEFT.
        #[arg(long)]
        right_calculus: Option<Calculus>,
        /// Compare LEFT with its own translation instead of RIGHT.
        #[arg(long, value_enum, conflicts_with = "right")]
        against: Option<Target>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        max_unfolds: usize,
        /// Comma-separated observed names of LEFT; defaults to its free names.
        #[arg(long)]
        names: Option<String>,
        /// Comma-separated `left=right` name pairs.
        #[arg(long)]
        rename: Option<String>,
        /// One-for-one step matching.
        #[arg(long)]
        strict: bool,
        left: String,
        right: Option<String>,
    },
    /// Replay one unfolding of the reflective replication package.
    ReproReplication {
        /// Body of the replicated process.
        #[arg(long, default_value = "m(u, 0)")]
        body: String,
    },
}

#[derive(clap::Args, Debug)]
pub struct TermArgs {
    #[arg(long, short = 'c', default_value = "pi")]
    pub calculus: Calculus,
    /// Term text; read from stdin when absent or `-`.
    pub term: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Strategy {
    Deterministic,
    EnumerateAll,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Target {
    Yoshida,
    Rho,
    Rhocomb,
}

impl Target {
    fn calculus(self) -> Calculus {
        match self {
            Target::Yoshida => Calculus::Yoshida,
            Target::Rho => Calculus::Rho,
            Target::Rhocomb => Calculus::RhoComb,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(ParseError),
    Semantic(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Semantic(_) => 3,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({"error": {"kind": "usage", "message": m}}),
            Failure::Parse(e) => {
                json!({"error": {"kind": "parse", "message": e.message, "line": e.line, "col": e.col}})
            }
            Failure::Semantic(m) => json!({"error": {"kind": "semantic", "message": m}}),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Parse(e) => write!(f, "parse error at {e}"),
            Failure::Semantic(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        Failure::Semantic(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Semantic(e.to_string())
    }
}

/// Translated terms nest deeply; commands run on a thread with this stack.
const STACK_BYTES: usize = 1 << 28;

/// What a command prints: JSON and text renderings of one result.
struct Report {
    json: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, code: 0 }
    }
}

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let f = Failure::Usage(e.kind().to_string());
            if json {
                let _ = writeln!(out, "{}", f.to_json());
            } else {
                let _ = write!(err, "{e}");
            }
            return 1;
        }
    };
    let command = cli.command;
    let result = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || execute(&command))
        .expect("spawn worker")
        .join()
        .unwrap_or_else(|_| Err(Failure::Semantic("internal error".into())));
    match result {
        Ok(r) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("json"));
            } else {
                let _ = write!(out, "{}", r.text);
            }
            r.code
        }
        Err(f) => {
            if cli.json {
                let _ = writeln!(out, "{}", f.to_json());
            } else {
                let _ = writeln!(err, "{f}");
            }
            f.code()
        }
    }
}

fn read_term(term: &Option<String>) -> Result<String, Failure> {
    match term.as_deref() {
        Some(t) if t != "-" => Ok(t.to_string()),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Operations the front end needs from each calculus.
trait Calc: Observable + fmt::Display {
    fn parse(text: &str) -> Result<Self, ParseError>;
    fn parse_name(text: &str) -> Result<Self::Name, ParseError>;
    fn free(&self) -> BTreeSet<Self::Name>;
}

fn atom_name(text: &str) -> Result<Atom, ParseError> {
    let t = text.trim();
    let ok = !t.is_empty() && t.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    if ok {
        Ok(Atom::new(t))
    } else {
        Err(ParseError { line: 1, col: 1, message: format!("`{t}` is not a name") })
    }
}

impl Calc for PiTerm {
    fn parse(text: &str) -> Result<Self, ParseError> {
        syntax::parse_pi(text)
    }
    fn parse_name(text: &str) -> Result<Atom, ParseError> {
        atom_name(text)
    }
    fn free(&self) -> BTreeSet<Atom> {
        self.free_names()
    }
}

impl Calc for YoshidaTerm {
    fn parse(text: &str) -> Result<Self, ParseError> {
        syntax::parse_yoshida(text)
    }
    fn parse_name(text: &str) -> Result<Atom, ParseError> {
        atom_name(text)
    }
    fn free(&self) -> BTreeSet<Atom> {
        self.free_names()
    }
}

impl Calc for RhoTerm {
    fn parse(text: &str) -> Result<Self, ParseError> {
        syntax::parse_rho(text)
    }
    fn parse_name(text: &str) -> Result<Self::Name, ParseError> {
        syntax::parse_rho_name(text)
    }
    fn free(&self) -> BTreeSet<Self::Name> {
        self.free_names()
    }
}

impl Calc for RcTerm {
    fn parse(text: &str) -> Result<Self, ParseError> {
        syntax::parse_rhocomb(text)
    }
    fn parse_name(text: &str) -> Result<Self::Name, ParseError> {
        syntax::parse_rhocomb_name(text)
    }
    fn free(&self) -> BTreeSet<Self::Name> {
        self.free_names()
    }
}

macro_rules! with_calc {
    ($c:expr, $T:ident => $body:expr) => {
        match $c {
            Calculus::Pi => {
                type $T = PiTerm;
                $body
            }
            Calculus::Yoshida => {
                type $T = YoshidaTerm;
                $body
            }
            Calculus::Rho => {
                type $T = RhoTerm;
                $body
            }
            Calculus::RhoComb => {
                type $T = RcTerm;
                $body
            }
        }
    };
}

/// Splits on commas outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_names<T: Calc>(s: &str) -> Result<BTreeSet<T::Name>, Failure> {
    split_top(s, ',').into_iter().map(|n| T::parse_name(n).map(|n| n.canonical()).map_err(Failure::from)).collect()
}

fn names_json<N: fmt::Display>(ns: impl IntoIterator<Item = N>) -> Vec<String> {
    ns.into_iter().map(|n| n.to_string()).collect()
}

fn lines<N: fmt::Display>(ns: impl IntoIterator<Item = N>) -> String {
    ns.into_iter().map(|n| format!("{n}\n")).collect()
}

fn write_json(path: &str, v: &impl Serialize) -> Result<(), Failure> {
    std::fs::write(path, serde_json::to_string_pretty(v).expect("json") + "\n")?;
    Ok(())
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Parse(a) => {
            let text = read_term(&a.term)?;
            with_calc!(a.calculus, T => {
                let t = T::parse(&text)?;
                Ok(Report::ok(json!({"calculus": a.calculus, "term": t.render()}), format!("{}\n", t.render())))
            })
        }
        Command::Canon(a) => {
            let text = read_term(&a.term)?;
            with_calc!(a.calculus, T => {
                let c = T::parse(&text)?.canonicalize_term();
                let s = StateJson::from(&c);
                Ok(Report::ok(
                    json!({"calculus": a.calculus, "term": s.term, "digest": s.digest}),
                    format!("{}\n{}\n", s.term, s.digest),
                ))
            })
        }
        Command::Fn(a) => {
            let text = read_term(&a.term)?;
            with_calc!(a.calculus, T => {
                let f = T::parse(&text)?.free();
                Ok(Report::ok(json!({"calculus": a.calculus, "names": names_json(&f)}), lines(&f)))
            })
        }
        Command::Reduce { term, strategy, max_steps, max_unfolds, trace_json } => {
            let text = read_term(&term.term)?;
            let budgets = Budgets { max_steps: *max_steps, max_unfolds: *max_unfolds, ..Budgets::default() };
            with_calc!(term.calculus, T => reduce::<T>(&T::parse(&text)?, *strategy, budgets, trace_json.as_deref()))
        }
        Command::Translate { from, to, ledger_json, full, term } => {
            let text = read_term(term)?;
            translate(*from, *to, &text, ledger_json.as_deref(), *full)
        }
        Command::Barbs { term, names, depth } => {
            let text = read_term(&term.term)?;
            with_calc!(term.calculus, T => barbs::<T>(&T::parse(&text)?, names, *depth))
        }
        Command::Bisim { calculus, right_calculus, against, depth, max_unfolds, names, rename, strict, left, right } => {
            let budgets = Budgets { max_steps: *depth, max_unfolds: *max_unfolds, ..Budgets::default() };
            let opts = BisimOptions { depth: *depth, strict: *strict };
            let req = BisimRequest { names: names.as_deref(), rename: rename.as_deref(), budgets, opts };
            match (right, against) {
                (Some(r), None) => {
                    let rc = right_calculus.unwrap_or(*calculus);
                    with_calc!(*calculus, A => {
                        let l = A::parse(left)?;
                        with_calc!(rc, B => bisim::<A, B>(&l, &B::parse(r)?, &req))
                    })
                }
                (None, Some(t)) => {
                    let (target, _) = translate_terms(*calculus, *t, left)?;
                    with_calc!(*calculus, A => {
                        let l = A::parse(left)?;
                        match target {
                            Translated::Yoshida(r) => bisim::<A, YoshidaTerm>(&l, &r, &req),
                            Translated::Rho(r) => bisim::<A, RhoTerm>(&l, &r, &req),
                            Translated::RhoComb(r) => bisim::<A, RcTerm>(&l, &r, &req),
                        }
                    })
                }
                _ => Err(Failure::Usage("give RIGHT or --against".into())),
            }
        }
        Command::ReproReplication { body } => repro(body),
    }
}

fn reduce<T: Calc>(t: &T, strategy: Strategy, budgets: Budgets, path: Option<&str>) -> Result<Report, Failure> {
    match strategy {
        Strategy::Deterministic => {
            let tr = reduce_deterministic(t, budgets);
            let j = tr.to_json();
            if let Some(p) = path {
                write_json(p, &j)?;
            }
            let mut text = String::new();
            for (i, s) in j.steps.iter().enumerate() {
                text += &format!("{:>3}  {:<6} {}\n", i + 1, s.rule.tag(), s.subject);
            }
            text += &format!("final: {}\n", j.final_state.term);
            if j.truncated {
                text += "(stopped by budget)\n";
            }
            Ok(Report::ok(serde_json::to_value(&j).expect("json"), text))
        }
        Strategy::EnumerateAll => {
            let g = explore(t, budgets);
            let j = g.to_json();
            if let Some(p) = path {
                write_json(p, &j)?;
            }
            let mut text = format!("{} states, {} edges{}\n", j.states.len(), j.edges.len(), if j.truncated { ", truncated" } else { "" });
            for s in &j.states {
                text += &format!("{:>4}  depth {}  {}\n", s.id, s.depth, s.term);
            }
            Ok(Report::ok(serde_json::to_value(&j).expect("json"), text))
        }
    }
}

enum Translated {
    Yoshida(YoshidaTerm),
    Rho(RhoTerm),
    RhoComb(RcTerm),
}

fn translate_terms(from: Calculus, to: Target, text: &str) -> Result<(Translated, Value), Failure> {
    match (from, to) {
        (Calculus::Pi, Target::Yoshida) => {
            let r = encodings::pi_to_yoshida(&PiTerm::parse(text)?)?;
            Ok((Translated::Yoshida(r.term), json!({"yoshida": r.fresh})))
        }
        (Calculus::Pi, Target::Rho) => {
            Ok((Translated::Rho(encodings::pi_to_rho(&PiTerm::parse(text)?)), json!({})))
        }
        (Calculus::Pi, Target::Rhocomb) => {
            let r = encodings::pi_to_rhocomb(&PiTerm::parse(text)?)?;
            let fresh: Vec<_> = r.fresh.iter().map(|f| f.to_json()).collect();
            Ok((Translated::RhoComb(r.term), json!({"yoshida": r.fresh_yoshida, "rhocomb": fresh})))
        }
        (Calculus::Yoshida, Target::Rhocomb) => {
            let y = YoshidaTerm::parse(text)?;
            let alloc = Allocator::default_for(&y.free_names());
            let r = encodings::yoshida_to_rhocomb(&encodings::instantiate(&y.narrow_scopes()), &alloc)?;
            let fresh: Vec<_> = r.fresh.iter().map(|f| f.to_json()).collect();
            Ok((Translated::RhoComb(r.term), json!({"rhocomb": fresh})))
        }
        (from, to) => Err(Failure::Semantic(format!("no translation from {from} to {}", to.calculus()))),
    }
}

fn translate(from: Calculus, to: Target, text: &str, ledger: Option<&str>, full: bool) -> Result<Report, Failure> {
    let (t, fresh) = translate_terms(from, to, text)?;
    if let Some(p) = ledger {
        write_json(p, &fresh)?;
    }
    let (printed, digest) = match &t {
        Translated::Yoshida(t) => (t.to_string(), t.canonicalize_term().digest),
        Translated::Rho(t) => (t.to_string(), t.canonicalize_term().digest),
        Translated::RhoComb(t) => (if full { t.to_string() } else { t.render() }, t.canonicalize_term().digest),
    };
    Ok(Report::ok(
        json!({"from": from, "to": to.calculus(), "term": printed, "digest": digest}),
        format!("{printed}\n"),
    ))
}

fn barbs<T: Calc>(t: &T, names: &str, depth: Option<usize>) -> Result<Report, Failure> {
    let n = parse_names::<T>(names)?;
    let b = equivalence::barbs(t, &n);
    let mut j = json!({"calculus": T::CALCULUS, "names": names_json(&n), "barbs": names_json(&b)});
    let mut text = lines(&b);
    if let Some(d) = depth {
        let w = equivalence::weak_barbs(t, &n, d);
        j["weak"] = json!({"depth": d, "barbs": names_json(&w.names), "truncated": w.truncated});
        text += &format!("within {d} steps{}:\n{}", if w.truncated { " (truncated)" } else { "" }, lines(&w.names));
    }
    Ok(Report::ok(j, text))
}

struct BisimRequest<'a> {
    names: Option<&'a str>,
    rename: Option<&'a str>,
    budgets: Budgets,
    opts: BisimOptions,
}

/// Default image of a left name: identity within one calculus, `ι` from
/// atoms into RHO-combinator names, plain injection otherwise.
fn default_image<A: Calc, B: Calc>(a: &A::Name) -> Option<B::Name> {
    if A::CALCULUS == B::CALCULUS {
        return B::parse_name(&a.to_string()).ok().map(|n| n.canonical());
    }
    let atom = a.as_atom_ref()?;
    if B::CALCULUS == Calculus::RhoComb {
        B::parse_name(&iota(atom).to_string()).ok().map(|n| n.canonical())
    } else {
        Some(B::Name::from_atom(atom.clone()))
    }
}

fn bisim<A: Calc, B: Calc>(l: &A, r: &B, req: &BisimRequest) -> Result<Report, Failure> {
    let names = match req.names {
        Some(s) => parse_names::<A>(s)?,
        None => l.free().into_iter().map(|n| n.canonical()).collect(),
    };
    let mut map: BTreeMap<A::Name, B::Name> = BTreeMap::new();
    if let Some(s) = req.rename {
        for pair in split_top(s, ',') {
            let parts = split_top(pair, '=');
            let [x, y] = parts.as_slice() else {
                return Err(Failure::Usage(format!("rename entry `{pair}` is not `left=right`")));
            };
            map.insert(A::parse_name(x)?.canonical(), B::parse_name(y)?.canonical());
        }
    }
    for n in &names {
        if !map.contains_key(n) {
            let img = default_image::<A, B>(n)
                .ok_or_else(|| Failure::Semantic(format!("no image for observed name {n}; give --rename")))?;
            map.insert(n.clone(), img);
        }
    }
    let mut seen = BTreeSet::new();
    for n in &names {
        if !seen.insert(&map[n]) {
            return Err(Failure::Semantic(format!("rename is not injective at {}", map[n])));
        }
    }
    let g1 = explore(l, req.budgets);
    let g2 = explore(r, req.budgets);
    let v = bounded_bisim(&g1, &g2, &names, |n| map[n].clone(), req.opts);
    let text = verdict_text(&v);
    Ok(Report::ok(serde_json::to_value(&v).expect("json"), text))
}

fn verdict_text(v: &BisimVerdict) -> String {
    let mut s = match v.outcome {
        equivalence::Outcome::Related => {
            format!("related up to depth {}{}\n", v.depth, if v.bounded { " (graphs truncated by budget)" } else { "" })
        }
        equivalence::Outcome::Distinguished => "distinguished\n".to_string(),
    };
    s += &format!("states: {} / {}\n", v.states.0, v.states.1);
    for w in &v.witness {
        s += &format!("  {:?} {} -> {} by {}\n", w.side, w.from, w.to, w.rule.tag());
    }
    if let Some(d) = &v.barb_diff {
        s += &format!("  barbs only left: {:?}, only right: {:?}\n", d.left_only, d.right_only);
    }
    s
}

fn repro(body: &str) -> Result<Report, Failure> {
    let p = RcTerm::parse(body)?;
    let names = (RcTerm::parse_name("x")?, RcTerm::parse_name("v")?, RcTerm::parse_name("w")?);
    let u = unfold_package(&p, Some(names));
    let trace = u.trace.to_json();
    let expected = StateJson::from(&u.expected);
    let matches = u.matches();
    let mut text = String::new();
    for (i, s) in trace.steps.iter().enumerate() {
        text += &format!("{}. {:<6} {}\n   -> from {}\n", i + 1, s.rule.tag(), s.subject, s.from.term);
    }
    text += &format!("final:    {}\nexpected: {}\n{}\n", trace.final_state.term, expected.term, if matches { "match" } else { "MISMATCH" });
    let j = json!({"trace": trace, "expected": expected, "matches": matches});
    Ok(Report { json: j, text, code: if matches { 0 } else { 3 } })
}
