//! Command-line front end.
//!
//! Exit codes: 0 when an answer or certificate is produced, 2 when the search
//! is Unknown at the given fuel, 1 on usage or contract errors (including a
//! failed replay or a failing finite-check suite).

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cert::{
    apart_from_json, apart_json, hausdorff_from_json, hausdorff_json, member_from_json, member_json, query_from_json,
    refute_from_json, refute_json, sharp_from_json, sharp_json, strongmax_from_json, strongmax_json, SharpAnswer,
    StrongMaxAnswer,
};
use crate::constructions::{apply, exp_basis_enumerate, serialize_steps};
use crate::domains::expr::{lower_element, parse_expr, real_element, seq_element, Expr};
use crate::domains::finite::FiniteDomain;
use crate::domains::seq::SeqBasis;
use crate::error::{Error, Result};
use crate::finite::{monotone_maps, theorem_suite, FinitePoset};
use crate::ideal::{way_below, ApproxElement};
use crate::order::{BasisDescriptor, Fuel, Semi};
use crate::separation::{hausdorff_separated, intrinsic_apart, sharp_query, strongmax_query};

#[derive(Parser, Debug)]
#[command(name = "apartdomain", version, about = "Certificate-producing queries on computable domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intrinsic apartness `X # Y`.
    Apart {
        #[command(flatten)]
        common: Common,
        x: String,
        y: String,
    },
    /// Whether the basis code CODE is way below X.
    Waybelow {
        #[command(flatten)]
        common: Common,
        x: String,
        code: String,
    },
    /// Disjoint basic neighbourhoods of X and Y.
    Hausdorff {
        #[command(flatten)]
        common: Common,
        x: String,
        y: String,
    },
    /// Ask X's sharpness oracle about the basis pair A ≺ B.
    SharpQuery {
        #[command(flatten)]
        common: Common,
        x: String,
        a: String,
        b: String,
    },
    /// Ask X's strong-maximality oracle about the basis pair U ≺ V.
    StrongmaxQuery {
        #[command(flatten)]
        common: Common,
        x: String,
        u: String,
        v: String,
    },
    /// Locatedness of a lower real: P ∈ L or Q ∈ U, for rationals P < Q.
    Located {
        #[command(flatten)]
        common: Common,
        x: String,
        p: String,
        q: String,
    },
    /// Step-function classes of the exponential of two finite posets.
    ExpBasis {
        /// Domain poset: builtin name or JSON file.
        #[arg(long = "dom", value_name = "POSET")]
        dom: String,
        /// Codomain poset: builtin name or JSON file.
        #[arg(long = "cod", value_name = "POSET")]
        cod: String,
        /// Only codes with enumeration index below this bound are used
        /// (default: the larger poset size).
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the exhaustive theorem suite on a finite poset.
    FiniteCheck {
        /// Builtin name or JSON file.
        #[arg(long, value_name = "POSET")]
        poset: String,
        #[arg(long, default_value_t = crate::finite::DEFAULT_SIZE_CAP)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum)]
    domain: Domain,
    #[arg(long, env = "APARTDOMAIN_DEFAULT_FUEL", default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Check the certificate in FILE (`-` for stdin) instead of searching.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
}

/// Concrete domain the element expressions are read in.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Reals,
    Cantor,
    Baire,
    Lower,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Domain as ValueEnum>::from_str(s, true).map_err(|_| Error::Parse(format!("unknown domain `{s}`")))
    }
}

/// What a command prints, and whether it was an Unknown.
#[derive(Debug, Clone)]
pub struct Reply {
    pub json: Value,
    pub text: String,
    pub unknown: bool,
}

impl Reply {
    fn answer(json: Value, text: String) -> Self {
        Reply { json, text, unknown: false }
    }

    fn unknown(query: &str, fuel: Fuel) -> Self {
        Reply {
            json: json!({ "kind": "unknown", "query": query, "fuel": fuel.get() }),
            text: format!("unknown: {query} not settled at fuel {fuel}"),
            unknown: true,
        }
    }

    fn replayed(kind: &str) -> Self {
        Reply::answer(json!({ "kind": "replay", "certificate": kind, "valid": true }), format!("replay ok: {kind}"))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            // help and version go to stdout
            let _ = e.print();
            return code;
        }
    };
    let format = match &cli.command {
        Command::Apart { common, .. }
        | Command::Waybelow { common, .. }
        | Command::Hausdorff { common, .. }
        | Command::SharpQuery { common, .. }
        | Command::StrongmaxQuery { common, .. }
        | Command::Located { common, .. } => common.format,
        Command::ExpBasis { format, .. } | Command::FiniteCheck { format, .. } => *format,
    };
    match dispatch(cli.command) {
        Ok((reply, failed)) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reply.json).expect("JSON values serialize")),
                Format::Text => println!("{}", reply.text),
            }
            if failed {
                1
            } else if reply.unknown {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read_certificate(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("certificate is not JSON: {e}")))
}

fn parse_all(texts: &[&str]) -> Result<Vec<Expr>> {
    texts.iter().map(|t| parse_expr(t)).collect()
}

/// Builds the elements for `exprs` in the chosen domain and runs `$body`
/// with them bound to `$els`.
macro_rules! with_elements {
    ($domain:expr, $exprs:expr, |$els:ident| $body:expr) => {{
        let exprs = $exprs;
        match $domain {
            Domain::Reals => {
                let $els = exprs.iter().map(real_element).collect::<Result<Vec<_>>>()?;
                $body
            }
            Domain::Cantor | Domain::Baire => {
                let basis = Arc::new(if $domain == Domain::Cantor { SeqBasis::CANTOR } else { SeqBasis::BAIRE });
                let $els = exprs.iter().map(|e| seq_element(&basis, e)).collect::<Result<Vec<_>>>()?;
                $body
            }
            Domain::Lower => {
                let $els = exprs.iter().map(lower_element).collect::<Result<Vec<_>>>()?;
                $body
            }
        }
    }};
}

fn dispatch(command: Command) -> Result<(Reply, bool)> {
    let ok = |r: Reply| Ok((r, false));
    let certificate = |c: &Common| c.replay.as_deref().map(read_certificate).transpose();
    match command {
        Command::Apart { common, x, y } => {
            ok(apart_query(common.domain, &x, &y, Fuel::new(common.fuel as usize), certificate(&common)?)?)
        }
        Command::Hausdorff { common, x, y } => {
            ok(hausdorff_query(common.domain, &x, &y, Fuel::new(common.fuel as usize), certificate(&common)?)?)
        }
        Command::Waybelow { common, x, code } => {
            ok(waybelow_query(common.domain, &x, &code, Fuel::new(common.fuel as usize), certificate(&common)?)?)
        }
        Command::SharpQuery { common, x, a, b } => ok(sharp_oracle_query(common.domain, &x, [&a, &b], certificate(&common)?)?),
        Command::StrongmaxQuery { common, x, u, v } => {
            ok(strongmax_oracle_query(common.domain, &x, [&u, &v], certificate(&common)?)?)
        }
        Command::Located { common, x, p, q } => {
            if common.domain != Domain::Lower {
                return Err(Error::PreconditionViolated("located is only defined for --domain lower".into()));
            }
            ok(located_query(&x, [&p, &q], certificate(&common)?)?)
        }
        Command::ExpBasis { dom, cod, bound, .. } => ok(exp_basis(&dom, &cod, bound)?),
        Command::FiniteCheck { poset, max_size, .. } => finite_check(&poset, max_size),
    }
}

// Library entry points behind the subcommands. Element arguments are
// expressions in `domain`; passing a certificate replays it instead of searching.

/// Builds the element for `expr`, reporting parse and validity errors.
pub fn check_element(domain: Domain, expr: &str) -> Result<()> {
    with_elements!(domain, parse_all(&[expr])?, |_els| Ok(()))
}

pub fn apart_query(domain: Domain, x: &str, y: &str, fuel: Fuel, replay: Option<Value>) -> Result<Reply> {
    with_elements!(domain, parse_all(&[x, y])?, |els| apart(&els[0], &els[1], [x, y], fuel, replay))
}

pub fn hausdorff_query(domain: Domain, x: &str, y: &str, fuel: Fuel, replay: Option<Value>) -> Result<Reply> {
    with_elements!(domain, parse_all(&[x, y])?, |els| hausdorff(&els[0], &els[1], [x, y], fuel, replay))
}

pub fn waybelow_query(domain: Domain, x: &str, code: &str, fuel: Fuel, replay: Option<Value>) -> Result<Reply> {
    with_elements!(domain, parse_all(&[x])?, |els| waybelow(&els[0], x, code, fuel, replay))
}

pub fn sharp_oracle_query(domain: Domain, x: &str, query: [&str; 2], replay: Option<Value>) -> Result<Reply> {
    with_elements!(domain, parse_all(&[x])?, |els| sharp(&els[0], x, query, replay, false))
}

pub fn strongmax_oracle_query(domain: Domain, x: &str, query: [&str; 2], replay: Option<Value>) -> Result<Reply> {
    with_elements!(domain, parse_all(&[x])?, |els| strongmax(&els[0], x, query, replay))
}

/// Lower reals only: which of `p ∈ L`, `q ∈ U` holds.
pub fn located_query(x: &str, pq: [&str; 2], replay: Option<Value>) -> Result<Reply> {
    let l = lower_element(&parse_expr(x)?)?;
    sharp(&l, x, pq, replay, true)
}

fn apart<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    labels: [&str; 2],
    fuel: Fuel,
    replay: Option<Value>,
) -> Result<Reply> {
    let basis = x.descriptor();
    if let Some(v) = replay {
        apart_from_json(basis, &v)?.replay(x, y)?;
        return Ok(Reply::replayed("apart"));
    }
    Ok(match intrinsic_apart(x, y, fuel)? {
        None => Reply::unknown(&format!("{} # {}", labels[0], labels[1]), fuel),
        Some(c) => {
            c.replay(x, y)?;
            let (from, to) = match c.orientation {
                crate::cert::Orientation::Forward => (labels[0], labels[1]),
                crate::cert::Orientation::Backward => (labels[1], labels[0]),
            };
            let text = format!(
                "apart: {from} ⋢̸̸ {to}; witness {} ≪ {from} (chain index {}), probe {} refutes it below {to}; replay fuel {}",
                basis.serialize(&c.inner.member.code),
                c.inner.member.index,
                basis.serialize(&c.inner.refutation.probe),
                c.replay_fuel()
            );
            Reply::answer(apart_json(basis, &c, labels), text)
        }
    })
}

fn hausdorff<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    labels: [&str; 2],
    fuel: Fuel,
    replay: Option<Value>,
) -> Result<Reply> {
    let basis = x.descriptor();
    if let Some(v) = replay {
        hausdorff_from_json(basis, &v)?.replay(x, y)?;
        return Ok(Reply::replayed("hausdorff"));
    }
    Ok(match hausdorff_separated(x, y, fuel)? {
        None => Reply::unknown(&format!("{} and {} Hausdorff separated", labels[0], labels[1]), fuel),
        Some(c) => {
            c.replay(x, y)?;
            let text = format!(
                "hausdorff: {} ≪ {} and {} ≪ {} do not refine; replay fuel {}",
                basis.serialize(&c.left.code),
                labels[0],
                basis.serialize(&c.right.code),
                labels[1],
                c.replay_fuel()
            );
            Reply::answer(hausdorff_json(basis, &c, labels), text)
        }
    })
}

fn waybelow<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    label: &str,
    code: &str,
    fuel: Fuel,
    replay: Option<Value>,
) -> Result<Reply> {
    let basis = x.descriptor();
    let b = basis.parse(code)?;
    basis.validate(&b)?;
    if let Some(v) = replay {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or_default();
        if kind == "member" {
            let m = member_from_json(basis, &v)?;
            if m.code != b {
                return Err(Error::ReplayFailed("membership witness is about a different code".into()));
            }
            m.replay(x)?;
        } else {
            let r = refute_from_json(basis, &v)?;
            if r.target != b {
                return Err(Error::ReplayFailed("refutation targets a different code".into()));
            }
            r.replay(x)?;
        }
        return Ok(Reply::replayed(if kind == "member" { "member" } else { "refute" }));
    }
    let shown = basis.serialize(&b);
    Ok(match way_below(x, &b, fuel)? {
        Semi::Unknown => Reply::unknown(&format!("{shown} ≪ {label}"), fuel),
        Semi::Yes(m) => {
            m.replay(x)?;
            let text = format!("yes: {shown} ≪ {label}, below chain entry {}", m.index);
            Reply::answer(member_json(basis, &m, label), text)
        }
        Semi::No(r) => {
            r.replay(x)?;
            let text = format!("no: probe {} ≺ {shown} is not in {label}", basis.serialize(&r.probe));
            Reply::answer(refute_json(basis, &r, label), text)
        }
    })
}

fn sharp<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    label: &str,
    query: [&str; 2],
    replay: Option<Value>,
    located: bool,
) -> Result<Reply> {
    let basis = x.descriptor();
    let (a, b) = (basis.parse(query[0])?, basis.parse(query[1])?);
    if let Some(v) = replay {
        let answer = sharp_from_json(basis, &v)?;
        if query_from_json(basis, &v)? != (a.clone(), b.clone()) {
            return Err(Error::ReplayFailed("certificate answers a different query".into()));
        }
        answer.replay(x, &a, &b)?;
        return Ok(Reply::replayed("sharp"));
    }
    let answer = sharp_query(x, &a, &b)?;
    let mut out = sharp_json(basis, &answer, [&a, &b], label);
    let (qa, qb) = (basis.serialize(&a), basis.serialize(&b));
    let text = match (&answer, located) {
        (SharpAnswer::Left(m), false) => format!("left: {qa} ≪ {label} (chain index {})", m.index),
        (SharpAnswer::Right(r), false) => {
            format!("right: {qb} ⋢ {label}, probe {} is not in {label}", basis.serialize(&r.probe))
        }
        (SharpAnswer::Left(_), true) => format!("lower: {qa} ∈ L"),
        (SharpAnswer::Right(r), true) => format!("upper: {qb} ∈ U, since {} ∉ L", basis.serialize(&r.probe)),
    };
    if located {
        let side = match &answer {
            SharpAnswer::Left(_) => json!("lower"),
            SharpAnswer::Right(_) => json!("upper"),
        };
        out["located"] = side;
    }
    Ok(Reply::answer(out, text))
}

fn strongmax<B: BasisDescriptor>(x: &ApproxElement<B>, label: &str, query: [&str; 2], replay: Option<Value>) -> Result<Reply> {
    let basis = x.descriptor();
    let (u, v) = (basis.parse(query[0])?, basis.parse(query[1])?);
    if let Some(val) = replay {
        let answer = strongmax_from_json(basis, &val)?;
        if query_from_json(basis, &val)? != (u.clone(), v.clone()) {
            return Err(Error::ReplayFailed("certificate answers a different query".into()));
        }
        answer.replay(x, &u, &v)?;
        return Ok(Reply::replayed("strongmax"));
    }
    let answer = strongmax_query(x, &u, &v)?;
    let (qu, qv) = (basis.serialize(&u), basis.serialize(&v));
    let text = match &answer {
        StrongMaxAnswer::Left(m) => format!("left: {qu} ≪ {label} (chain index {})", m.index),
        StrongMaxAnswer::Right(h) => format!(
            "right: ↓{qv} and {label} separated by {} and {}",
            basis.serialize(&h.left.code),
            basis.serialize(&h.right.code)
        ),
    };
    Ok(Reply::answer(strongmax_json(basis, &answer, [&u, &v], label), text))
}

pub fn exp_basis(dom: &str, cod: &str, bound: Option<usize>) -> Result<Reply> {
    let (d, e) = (FinitePoset::load(dom)?, FinitePoset::load(cod)?);
    let bound = bound.unwrap_or(d.size().max(e.size()));
    let maps = monotone_maps(&d, &e).len();
    let (dd, ed) = (FiniteDomain::new(d.clone()), FiniteDomain::new(e.clone()));
    let classes = exp_basis_enumerate(&dd, &ed, bound)?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for f in &classes {
        let table = (0..d.size())
            .map(|x| Ok((d.label(x).to_string(), Value::from(e.label(apply(&dd, &ed, f, &x)?)))))
            .collect::<Result<serde_json::Map<_, _>>>()?;
        let text = serialize_steps(&dd, &ed, f);
        lines.push(format!("{text}  {}", Value::Object(table.clone())));
        rows.push(json!({ "steps": text, "map": table }));
    }
    lines.push(format!("{} classes, {maps} monotone maps", classes.len()));
    let out = json!({
        "kind": "exp-basis",
        "domain": dom,
        "codomain": cod,
        "bound": bound,
        "classes": rows,
        "class_count": classes.len(),
        "monotone_maps": maps,
    });
    Ok(Reply::answer(out, lines.join("\n")))
}

/// The report, and whether some check failed.
pub fn finite_check(spec: &str, max_size: usize) -> Result<(Reply, bool)> {
    let poset = FinitePoset::load(spec)?;
    let report = theorem_suite(&poset, max_size)?;
    let passed = report.all_passed();
    let mut out = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
    out["kind"] = json!("finite-check");
    out["poset"] = json!(spec);
    out["all_passed"] = json!(passed);
    let mut lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| match &c.counterexample {
            None => format!("[pass] ({}) {}", c.id, c.title),
            Some(cx) => format!("[FAIL] ({}) {}: {cx}", c.id, c.title),
        })
        .collect();
    lines.push(format!(
        "{spec}: {} elements, {} Scott opens, strongly maximal {{{}}}; {}",
        report.size,
        report.scott_opens,
        report.strongly_maximal.join(", "),
        if passed { "all checks pass" } else { "SOME CHECKS FAIL" }
    ));
    Ok((Reply::answer(out, lines.join("\n")), !passed))
}
