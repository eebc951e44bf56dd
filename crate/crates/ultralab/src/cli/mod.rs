//! The `ultralab` command line. Every verb is a pure function of its flags
//! and input files; output is JSON unless `--format` says otherwise.

use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::amalgamation::{
    check_aep, check_ap, check_hap, check_jep, check_strict, check_vvap, default_bound, AepInstance, HapInstance, Span,
    VvapInstance,
};
use crate::cochain::{
    distance, is_strong_at, limit_of_cauchy, rel_value_lower, rel_value_upper, resolve_rel, tree_dot, Branch,
    BranchLiteral, FiniteCochain, LevelSystem,
};
use crate::dynamics::{bf_extend, conjugate_extend, shift_level, skew_hom_check, DiscreteIso, GameSpace, PairLiteral,
    PartialIso, SkewInstance};
use crate::error::{Budget, Error, Result, DEFAULT_BUDGET};
use crate::linorder::{lex_branch, lex_q, order_value, order_value_lower, LexPoint, LexQ};
use crate::rado::{
    least_witness, omega_std, omega_word, pro_rado, realize, section_std, std_edge, witness, word_edge, ExtensionSpec,
    Hf, IsoTable, ProRado, Word,
};
use crate::seqlim::{check_triangle_identities, epsilon_is_iso, eta_check, random_branches, seq_cochain, seq_quotient};
use crate::structure::{Class, FinStructure};

#[derive(Parser, Debug)]
#[command(name = "ultralab", about = "Pro-finite ultrametric Fraïssé structures at finite depth")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Horizon for every metric computation.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Size bound for searches (default depends on the command).
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Step budget; ULTRALAB_BUDGET overrides the default.
    #[arg(long, global = true, env = "ULTRALAB_BUDGET")]
    budget: Option<u64>,
    /// Seed for sample selection in certificate commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Amalgamation property deciders.
    #[command(subcommand)]
    Amalg(AmalgCmd),
    /// Class members.
    #[command(subcommand)]
    Class(ClassCmd),
    /// Metric operations on the limit of a cochain.
    #[command(subcommand)]
    Limit(LimitCmd),
    /// The Seq/Lim adjunction on finite cochains.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// The standard, word and pro-finite Rado graphs.
    #[command(subcommand)]
    Rado(RadoCmd),
    /// Back-and-forth extension of partial isomorphisms.
    #[command(subcommand)]
    Game(GameCmd),
    /// Shift operators and the conjugation procedure.
    #[command(subcommand)]
    Shift(ShiftCmd),
    /// Skew-homogeneity of Ω.
    #[command(subcommand)]
    Skew(SkewCmd),
    /// The lexicographic powers of ℚ.
    #[command(subcommand)]
    Order(OrderCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Ap,
    Jep,
    Aep,
    Hap,
    Vvap,
    Strict,
}

#[derive(Subcommand, Debug)]
enum AmalgCmd {
    Check {
        #[arg(long, value_enum)]
        property: PropertyArg,
        /// `graphs`, `linorders` or `age:<file>`.
        #[arg(long)]
        class: String,
        /// Instance JSON: a span, a JEP pair `{"A","B"}`, or an AEP/HAP/VVAP instance.
        #[arg(long)]
        instance: String,
    },
}

#[derive(Subcommand, Debug)]
enum ClassCmd {
    Generate {
        #[arg(long)]
        class: String,
        #[arg(long = "max-size", default_value_t = 3)]
        max_size: usize,
    },
    Contains {
        #[arg(long)]
        class: String,
        #[arg(long)]
        structure: String,
    },
}

#[derive(Subcommand, Debug)]
enum LimitCmd {
    Dist {
        #[arg(long, default_value = "pro-rado")]
        cochain: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Lower(RelArgs),
    Upper(RelArgs),
    Strong {
        #[arg(long, default_value = "pro-rado")]
        cochain: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    Tree {
        #[arg(long, default_value = "pro-rado")]
        cochain: String,
        #[arg(long)]
        branch: Vec<String>,
    },
    /// Limit of a sequence of branches that is Cauchy within the depth.
    Cauchy {
        #[arg(long, default_value = "pro-rado")]
        cochain: String,
        #[arg(long, required = true)]
        branch: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct RelArgs {
    #[arg(long, default_value = "pro-rado")]
    cochain: String,
    /// Relation name; the first relation of the signature by default.
    #[arg(long)]
    relation: Option<String>,
    /// One branch per tuple position.
    #[arg(long, required = true)]
    tuple: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum SeqCmd {
    /// The structure `Seq(Lim C)_i`.
    Quotient {
        #[arg(long)]
        cochain: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// The cochain `Seq(Lim C)` through the depth.
    Cochain {
        #[arg(long)]
        cochain: String,
    },
    Epsilon {
        #[arg(long)]
        cochain: String,
    },
    Eta {
        #[arg(long)]
        cochain: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    Triangle {
        #[arg(long)]
        cochain: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphArg {
    Words,
    Std,
}

#[derive(Subcommand, Debug)]
enum RadoCmd {
    Edge { n: u64, m: u64 },
    WordEdge { v: String, w: String },
    Omega { w: String },
    OmegaStd { n: u64 },
    Section { c: u64 },
    Psi { n: u64 },
    Witness {
        /// Comma separated vertices the witness must be adjacent to.
        #[arg(long, default_value = "")]
        adj: String,
        #[arg(long, default_value = "")]
        nonadj: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = GraphArg::Words)]
        graph: GraphArg,
    },
    Realize {
        #[arg(long)]
        spec: String,
    },
}

#[derive(Subcommand, Debug)]
enum GameCmd {
    Extend {
        #[arg(long, default_value = "pro-rado")]
        cochain: String,
        #[arg(long)]
        pairs: String,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ShiftCmd {
    Level {
        #[arg(long)]
        pairs: String,
    },
    Conjugate {
        #[arg(long)]
        pairs: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SkewCmd {
    Check {
        #[arg(long)]
        instance: String,
    },
}

#[derive(Subcommand, Debug)]
enum OrderCmd {
    Value {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

/// What a command produced: its JSON payload, optional renderings, and
/// whether a certificate failed.
struct Output {
    json: Value,
    text: Option<String>,
    dot: Option<String>,
    failed: bool,
}

impl Output {
    fn new(json: Value) -> Self {
        Output { json, text: None, dot: None, failed: false }
    }

    fn text(mut self, t: impl Into<String>) -> Self {
        self.text = Some(t.into());
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::input(format!("cannot serialize output: {e}")))
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn read_json<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::input(format!("bad JSON in {arg}: {e}")))
}

fn load_class(name: &str) -> Result<Class> {
    match name {
        "graphs" => Ok(Class::graphs()),
        "linorders" => Ok(Class::linear_orders()),
        _ => match name.strip_prefix("age:") {
            Some(file) => Class::age_of(read_json::<FinStructure>(file)?),
            None => Err(Error::input(format!("unknown class {name}; use graphs, linorders or age:<file>"))),
        },
    }
}

enum AnyCochain {
    Rado(Arc<ProRado>),
    Lex(Arc<LexQ>),
    Finite(Arc<FiniteCochain>),
}

fn load_cochain(name: &str) -> Result<AnyCochain> {
    Ok(match name {
        "pro-rado" => AnyCochain::Rado(pro_rado()),
        "lex-q" => AnyCochain::Lex(lex_q()),
        "k2-example" => AnyCochain::Finite(Arc::new(FiniteCochain::k2_example())),
        file => AnyCochain::Finite(Arc::new(read_json::<FiniteCochain>(file)?)),
    })
}

fn finite_cochain(name: &str) -> Result<Arc<FiniteCochain>> {
    match load_cochain(name)? {
        AnyCochain::Finite(c) => Ok(c),
        _ => Err(Error::input(format!("{name} is not a finite cochain"))),
    }
}

/// Runs `$body` with `$sys` bound to the concrete system.
macro_rules! with_system {
    ($c:expr, $sys:ident => $body:expr) => {
        match $c {
            AnyCochain::Rado($sys) => $body,
            AnyCochain::Lex($sys) => $body,
            AnyCochain::Finite($sys) => $body,
        }
    };
}

macro_rules! with_game_system {
    ($c:expr, $sys:ident => $body:expr) => {
        match $c {
            AnyCochain::Rado($sys) => $body,
            AnyCochain::Lex($sys) => $body,
            AnyCochain::Finite(_) => Err(Error::input("the game runs on pro-rado or lex-q")),
        }
    };
}

fn load_branch<S: LevelSystem>(sys: &Arc<S>, arg: &str) -> Result<Branch<S>> {
    Branch::from_literal(sys.clone(), read_json::<BranchLiteral<S::V>>(arg)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PairsFile<V> {
    List(Vec<PairLiteral<V>>),
    Wrapped { pairs: Vec<PairLiteral<V>> },
}

fn load_pairs<V: DeserializeOwned>(arg: &str) -> Result<Vec<PairLiteral<V>>> {
    Ok(match read_json::<PairsFile<V>>(arg)? {
        PairsFile::List(p) | PairsFile::Wrapped { pairs: p } => p,
    })
}

fn split_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn amalg(g: &Global, cmd: AmalgCmd) -> Result<Output> {
    let AmalgCmd::Check { property, class, instance } = cmd;
    let class = load_class(&class)?;
    let verdict = match property {
        PropertyArg::Ap | PropertyArg::Strict => {
            let span: Span = read_json(&instance)?;
            let bound = g.bound.unwrap_or_else(|| default_bound(&span.b1, &span.b2));
            if matches!(property, PropertyArg::Ap) {
                check_ap(&class, &span, bound)?
            } else {
                check_strict(&class, &span, bound)?
            }
        }
        PropertyArg::Jep => {
            #[derive(Deserialize)]
            struct Pair {
                #[serde(rename = "A")]
                a: FinStructure,
                #[serde(rename = "B")]
                b: FinStructure,
            }
            let p: Pair = read_json(&instance)?;
            let bound = g.bound.unwrap_or_else(|| default_bound(&p.a, &p.b));
            check_jep(&class, &p.a, &p.b, bound)?
        }
        PropertyArg::Aep => {
            let inst: AepInstance = read_json(&instance)?;
            let bound =
                g.bound.unwrap_or_else(|| default_bound(&inst.span.b1, &inst.span.b2).max(inst.t.size()));
            check_aep(&class, &inst, bound)?
        }
        PropertyArg::Hap => {
            let inst: HapInstance = read_json(&instance)?;
            let bound = g.bound.unwrap_or_else(|| default_bound(&inst.span.b1, &inst.span.b2));
            check_hap(&class, &inst, bound)?
        }
        PropertyArg::Vvap => {
            let inst: VvapInstance = read_json(&instance)?;
            let bound = g.bound.unwrap_or_else(|| default_bound(&inst.span.b1, &inst.span.b2));
            check_vvap(&class, &inst, bound)?
        }
    };
    let outcome = to_value(&verdict.outcome)?;
    Ok(Output::new(to_value(&verdict)?).text(outcome.as_str().unwrap_or_default().to_string()))
}

fn class_cmd(cmd: ClassCmd) -> Result<Output> {
    match cmd {
        ClassCmd::Generate { class, max_size } => {
            let class = load_class(&class)?;
            let mut members = Vec::new();
            for n in 1..=max_size {
                members.extend(class.members_of_size(n)?.iter().cloned());
            }
            let count = members.len();
            Ok(Output::new(json!({ "class": class.name(), "max_size": max_size, "members": members }))
                .text(format!("{count} members")))
        }
        ClassCmd::Contains { class, structure } => {
            let class = load_class(&class)?;
            let s: FinStructure = read_json(&structure)?;
            let yes = class.contains(&s)?;
            Ok(Output::new(json!({ "class": class.name(), "contains": yes })).text(yes.to_string()))
        }
    }
}

fn relation_index(sig: &crate::structure::Signature, name: &Option<String>) -> Result<usize> {
    match name {
        Some(n) => resolve_rel(sig, n),
        None if sig.is_empty() => Err(Error::input("the signature has no relations")),
        None => Ok(0),
    }
}

fn limit(g: &Global, cmd: LimitCmd) -> Result<Output> {
    let depth = g.depth;
    match cmd {
        LimitCmd::Dist { cochain, a, b } => with_system!(load_cochain(&cochain)?, sys => {
            let d = distance(&load_branch(&sys, &a)?, &load_branch(&sys, &b)?, depth)?;
            Ok(Output::new(to_value(&d)?).text(d.to_string()))
        }),
        LimitCmd::Lower(r) => with_system!(load_cochain(&r.cochain)?, sys => {
            let rel = relation_index(sys.signature(), &r.relation)?;
            let tuple = r.tuple.iter().map(|t| load_branch(&sys, t)).collect::<Result<Vec<_>>>()?;
            let v = rel_value_lower(rel, &tuple, depth)?;
            Ok(Output::new(json!({ "relation": sys.signature().name(rel), "depth": depth, "value": v }))
                .text(v.to_string()))
        }),
        LimitCmd::Upper(r) => with_system!(load_cochain(&r.cochain)?, sys => {
            let rel = relation_index(sys.signature(), &r.relation)?;
            let tuple = r.tuple.iter().map(|t| load_branch(&sys, t)).collect::<Result<Vec<_>>>()?;
            let v = rel_value_upper(rel, &tuple, depth)?;
            Ok(Output::new(json!({
                "relation": sys.signature().name(rel), "depth": depth, "value": v.value, "exact": v.exact
            }))
            .text(format!("{} exact={}", v.value, v.exact)))
        }),
        LimitCmd::Strong { cochain, level } => with_system!(load_cochain(&cochain)?, sys => {
            let s = is_strong_at(&*sys, level, depth)?;
            Ok(Output::new(to_value(&s)?))
        }),
        LimitCmd::Tree { cochain, branch } => with_system!(load_cochain(&cochain)?, sys => {
            let bs = branch.iter().map(|b| load_branch(&sys, b)).collect::<Result<Vec<_>>>()?;
            let dot = tree_dot(&*sys, &bs, depth)?;
            let mut out = Output::new(json!({ "depth": depth, "dot": dot }));
            out.dot = Some(dot);
            Ok(out)
        }),
        LimitCmd::Cauchy { cochain, branch } => with_system!(load_cochain(&cochain)?, sys => {
            let bs = branch.iter().map(|b| load_branch(&sys, b)).collect::<Result<Vec<_>>>()?;
            let lim = limit_of_cauchy(&bs, depth)?;
            Ok(Output::new(to_value(&lim.literal())?))
        }),
    }
}

fn seq(g: &Global, cmd: SeqCmd) -> Result<Output> {
    let depth = g.depth;
    let mut rng = seeded(g.seed);
    match cmd {
        SeqCmd::Quotient { cochain, level } => {
            let q = seq_quotient(&*finite_cochain(&cochain)?, level, depth)?;
            Ok(Output::new(to_value(&q)?))
        }
        SeqCmd::Cochain { cochain } => {
            let s = seq_cochain(&*finite_cochain(&cochain)?, depth)?;
            Ok(Output::new(s.to_json()))
        }
        SeqCmd::Epsilon { cochain } => {
            let c = finite_cochain(&cochain)?;
            let verdicts = epsilon_is_iso(&c, depth)?;
            let iso = verdicts.iter().all(|v| v.iso);
            Ok(Output::new(json!({ "depth": depth, "iso": iso, "levels": verdicts })).text(iso.to_string()))
        }
        SeqCmd::Eta { cochain, samples } => {
            let c = finite_cochain(&cochain)?;
            let xs = random_branches(&mut rng, &c, depth, samples)?;
            let r = eta_check(&c, &xs, depth)?;
            let pass = r.pass();
            let mut out = Output::new(json!({ "seed": g.seed, "depth": depth, "pass": pass, "report": r }))
                .text(if pass { "pass" } else { "fail" });
            out.failed = !pass;
            Ok(out)
        }
        SeqCmd::Triangle { cochain, samples } => {
            let c = finite_cochain(&cochain)?;
            let xs = random_branches(&mut rng, &c, depth, samples)?;
            let r = check_triangle_identities(&c, &xs, depth)?;
            let pass = r.pass();
            let mut out = Output::new(json!({ "seed": g.seed, "depth": depth, "pass": pass, "report": r }))
                .text(if pass { "pass" } else { "fail" });
            out.failed = !pass;
            Ok(out)
        }
    }
}

fn budget(g: &Global) -> Budget {
    Budget::new(g.budget.unwrap_or(DEFAULT_BUDGET))
}

fn rado(g: &Global, cmd: RadoCmd) -> Result<Output> {
    match cmd {
        RadoCmd::Edge { n, m } => {
            let e = std_edge(n, m);
            Ok(Output::new(json!(e)).text(e.to_string()))
        }
        RadoCmd::WordEdge { v, w } => {
            let e = word_edge(&v.parse()?, &w.parse()?);
            Ok(Output::new(json!(e)).text(e.to_string()))
        }
        RadoCmd::Omega { w } => {
            let c = omega_word(&w.parse()?);
            Ok(Output::new(json!(c)).text(c.to_string()))
        }
        RadoCmd::OmegaStd { n } => {
            let c = omega_std(n);
            Ok(Output::new(json!(c)).text(c.to_string()))
        }
        RadoCmd::Section { c } => {
            let s = section_std(c);
            Ok(Output::new(to_value(&s)?).text(s.to_string()))
        }
        RadoCmd::Psi { n } => {
            let mut table = IsoTable::new(budget(g));
            let w = table.psi(n)?;
            Ok(Output::new(to_value(&w)?).text(w.to_string()))
        }
        RadoCmd::Witness { adj, nonadj, target, graph } => match graph {
            GraphArg::Words => {
                let a: Vec<Word> = split_list(&adj)?;
                let b: Vec<Word> = split_list(&nonadj)?;
                let c: u64 = target.trim().parse().map_err(|_| Error::input(format!("bad target {target:?}")))?;
                let w = least_witness(&a, &b, c, &mut budget(g))?;
                let checks: Vec<Value> = a
                    .iter()
                    .map(|v| json!({ "vertex": v, "adjacent": word_edge(&w, v), "wanted": true }))
                    .chain(b.iter().map(|v| json!({ "vertex": v, "adjacent": word_edge(&w, v), "wanted": false })))
                    .collect();
                let omega = omega_word(&w);
                let ok = omega == c && checks.iter().all(|x| x["adjacent"] == x["wanted"]);
                if !ok {
                    return Err(Error::Search(format!("witness {w} failed re-validation")));
                }
                Ok(Output::new(json!({ "graph": "words", "witness": w, "omega": omega, "checks": checks }))
                    .text(w.to_string()))
            }
            GraphArg::Std => {
                let a: Vec<Hf> = split_list(&adj)?;
                let b: Vec<Hf> = split_list(&nonadj)?;
                let c: Hf = target.parse()?;
                let w = witness(&a, &b, &c, &[])?;
                let checks: Vec<Value> = a
                    .iter()
                    .map(|v| json!({ "vertex": v, "adjacent": w.adjacent(v), "wanted": true }))
                    .chain(b.iter().map(|v| json!({ "vertex": v, "adjacent": w.adjacent(v), "wanted": false })))
                    .collect();
                let omega = crate::rado::omega(&w);
                if omega != c || checks.iter().any(|x| x["adjacent"] != x["wanted"]) {
                    return Err(Error::Search(format!("witness {w} failed re-validation")));
                }
                Ok(Output::new(json!({ "graph": "std", "witness": w, "omega": omega, "checks": checks }))
                    .text(w.to_string()))
            }
        },
        RadoCmd::Realize { spec } => {
            let spec: ExtensionSpec = read_json(&spec)?;
            let r = realize(&spec, g.depth)?;
            Ok(Output::new(to_value(&r)?))
        }
    }
}

fn game_extend<S: GameSpace>(sys: Arc<S>, g: &Global, pairs: &str, rounds: usize) -> Result<Output> {
    let lits = load_pairs::<S::V>(pairs)?;
    let p = PartialIso::from_literals(sys.clone(), sys, lits, g.depth)?;
    let t = bf_extend(p, rounds)?;
    Ok(Output::new(json!({
        "depth": g.depth,
        "rounds": rounds,
        "pairs": t.iso.literals()?,
        "next_forth": t.next_forth,
        "next_back": t.next_back,
        "log": t.log,
    })))
}

fn game(g: &Global, cmd: GameCmd) -> Result<Output> {
    let GameCmd::Extend { cochain, pairs, rounds } = cmd;
    with_game_system!(load_cochain(&cochain)?, sys => game_extend(sys, g, &pairs, rounds))
}

fn shift(g: &Global, cmd: ShiftCmd) -> Result<Output> {
    match cmd {
        ShiftCmd::Level { pairs } => {
            let alpha = DiscreteIso::from_literals(load_pairs::<Hf>(&pairs)?, g.depth)?;
            let s = shift_level(&alpha)?;
            Ok(Output::new(to_value(&s)?).text(s.l.to_string()))
        }
        ShiftCmd::Conjugate { pairs, samples, rounds } => {
            let alpha = DiscreteIso::from_literals(load_pairs::<Hf>(&pairs)?, g.depth)?;
            let c = conjugate_extend(&alpha, g.depth, rounds, samples, &mut seeded(g.seed))?;
            let mut v = to_value(&c)?;
            v["seed"] = json!(g.seed);
            let mut out = Output::new(v).text(if c.pass { "pass" } else { "fail" });
            out.failed = !c.pass;
            Ok(out)
        }
    }
}

/// Vertices searched on each side when `--bound` is absent.
const SKEW_BOUND: u64 = 64;

fn skew(g: &Global, cmd: SkewCmd) -> Result<Output> {
    let SkewCmd::Check { instance } = cmd;
    let inst: SkewInstance = read_json(&instance)?;
    let bound = g.bound.map_or(SKEW_BOUND, |b| b as u64);
    let v = skew_hom_check(&inst, bound, &mut budget(g))?;
    let found = v.found;
    Ok(Output::new(to_value(&v)?).text(found.to_string()))
}

fn order(g: &Global, cmd: OrderCmd) -> Result<Output> {
    let OrderCmd::Value { x, y } = cmd;
    let x = lex_branch(&x.parse::<LexPoint>()?.0)?;
    let y = lex_branch(&y.parse::<LexPoint>()?.0)?;
    let v = order_value(&x, &y, g.depth)?;
    let lower = order_value_lower(&x, &y, g.depth)?;
    Ok(Output::new(json!({ "depth": g.depth, "value": v, "lower": lower })).text(v.to_string()))
}

fn dispatch(cli: Cli) -> Result<Output> {
    let g = &cli.global;
    match cli.verb {
        Verb::Amalg(c) => amalg(g, c),
        Verb::Class(c) => class_cmd(c),
        Verb::Limit(c) => limit(g, c),
        Verb::Seq(c) => seq(g, c),
        Verb::Rado(c) => rado(g, c),
        Verb::Game(c) => game(g, c),
        Verb::Shift(c) => shift(g, c),
        Verb::Skew(c) => skew(g, c),
        Verb::Order(c) => order(g, c),
    }
}

/// Runs the command line and returns the rendered output and exit code.
pub fn run(args: &[String]) -> (String, i32) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                InvalidSubcommand | MissingSubcommand | DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 2,
            };
            return (e.render().to_string(), code);
        }
    };
    let format = cli.global.format;
    match dispatch(cli) {
        Ok(out) => {
            let code = if out.failed { 3 } else { 0 };
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).unwrap_or_default(),
                Format::Text => match (&out.text, &out.json) {
                    (Some(t), _) => t.clone(),
                    (None, Value::String(s)) => s.clone(),
                    (None, v) => serde_json::to_string_pretty(v).unwrap_or_default(),
                },
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => return ("error: this command has no dot rendering\n".into(), 2),
                },
            };
            (format!("{}\n", body.trim_end()), code)
        }
        Err(e) => (format!("error: {e}\n"), e.exit_code()),
    }
}

pub fn main_with_args(args: &[String]) -> i32 {
    use std::io::Write;
    let (out, code) = run(args);
    // a closed pipe is not an error of ours
    if code == 0 || code == 3 && !out.starts_with("error") {
        let _ = std::io::stdout().write_all(out.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.as_bytes());
    }
    code
}
