//! qb: classification, band search, chain verification, skew and Brauer
//! constructions over registry entries, emitted as replayable certificates.
//!
//! Exit status: 0 on success or a witness, 1 when nothing was found or a
//! check failed at the requested depth, 2 on invalid input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use quiverbench::brauer::{brauer_relations, shadow};
use quiverbench::classify::classify;
use quiverbench::json::{
    action_to_json, presentation_to_json, representation_to_json, word_from_json, word_to_json,
};
use quiverbench::lattice::{full_pair_verify, pushdown_pair_verify, wide_sample_verify, PairReport, VerifyOptions};
use quiverbench::quiver::{cyclic_derivative, jacobian_presentation, Presentation};
use quiverbench::registry::{Entry, EntryKind, Registry};
use quiverbench::rep::string_module;
use quiverbench::skew::{g_pair, pushdown, sg_pair, skew_presentation, validate_action, GroupAction, SkewAlgebra};
use quiverbench::words::{nondomestic_witness_search, q_generating_pair, SigmaWord, StringAlgebra};
use quiverbench::Rational;

const REGISTRY_PREFIX: &str = "registry:";

#[derive(Parser)]
#[command(
    name = "qb",
    version,
    about = "Certificates for string and band combinatorics of bound quiver algebras",
    after_help = "INPUT is a JSON entry file or registry:<name>.\n\
                  \nEXAMPLES:\
                  \n  qb classify registry:sphere5-gentle\
                  \n  qb witness registry:a2 --max-len 10\
                  \n  qb verify registry:a1 --depth 3 --pushdown\
                  \n  qb skew registry:sphere5-triple --emit g"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Signed presentation of a skew-gentle triple.
    Sg,
    /// Gentle doubling of a triple with its involution.
    G,
    /// Presentation of the Z2 skew group algebra.
    Skew,
    /// Pushdown of the string module given by --word.
    Pushdown,
}

#[derive(Subcommand)]
enum Command {
    /// Special biserial, string and gentle flags with witnesses
    Classify { input: String },
    /// Search for two commuting bands with a common first letter
    Witness {
        input: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Search the monomial shadow instead of the algebra itself
        #[arg(long)]
        shadow: bool,
    },
    /// Dense, independent, non-symmetric and wide checks for the entry's band pair
    Verify {
        input: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Σ-words "S,T" overriding the first chain
        #[arg(long)]
        chain1: Option<String>,
        #[arg(long)]
        chain2: Option<String>,
        /// Comparable pairs sampled for the wideness check
        #[arg(long, default_value_t = 5)]
        sample: usize,
        /// Also push both chains down to the skew group algebra
        #[arg(long)]
        pushdown: bool,
    },
    /// Skew-gentle doublings, skew group presentations and pushdowns
    Skew {
        input: String,
        #[arg(long, value_enum)]
        emit: Emit,
        /// Degree up to which skew relations are searched
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long)]
        word: Option<String>,
    },
    /// Quiver, tagged relations and shadow of a Brauer graph
    Brauer { input: String },
    /// Cyclic derivatives of a potential and the Jacobian presentation
    Jacobian { input: String },
    /// Names of the registry entries
    List,
}

struct Input {
    source: String,
    entry: Entry,
    digest: String,
}

fn load(spec: &str) -> Result<Input> {
    let entry = match spec.strip_prefix(REGISTRY_PREFIX) {
        Some(name) => Registry::load()?.get(name)?.clone(),
        None => {
            let path = PathBuf::from(spec);
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            Registry::entry_from_str(&text)?
        }
    };
    let canonical = serde_json::to_string(&entry)?;
    let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
    Ok(Input { source: spec.to_string(), entry, digest })
}

/// Outcome of a command: the certificate payload, its text rendering and
/// whether it is an honest negative.
struct Outcome {
    verdict: String,
    negative: bool,
    parameters: Value,
    result: Value,
    text: Vec<String>,
}

fn certificate(command: &str, input: &Input, out: &Outcome) -> Value {
    json!({
        "tool": {"name": "qb", "version": env!("CARGO_PKG_VERSION")},
        "command": command,
        "input": {"source": input.source, "sha256": input.digest},
        "parameters": out.parameters,
        "verdict": out.verdict,
        "result": out.result,
    })
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn presentation_value(p: &Presentation) -> Value {
    serde_json::to_value(presentation_to_json(p)).expect("presentations serialize")
}

fn cmd_classify(input: &Input) -> Result<Outcome> {
    let p = input.entry.presentation()?;
    let c = classify(&p);
    let mut text = Vec::new();
    for (name, flag) in [("special biserial", &c.special_biserial), ("string", &c.string), ("gentle", &c.gentle)] {
        match &flag.witness {
            Some(w) => text.push(format!("{name}: {} ({w})", yes(flag.holds))),
            None => text.push(format!("{name}: {}", yes(flag.holds))),
        }
    }
    let verdict = if c.gentle.holds {
        "gentle"
    } else if c.string.holds {
        "string"
    } else if c.special_biserial.holds {
        "special biserial"
    } else {
        "none"
    };
    Ok(Outcome { verdict: verdict.into(), negative: false, parameters: json!({}), result: serde_json::to_value(&c)?, text })
}

fn cmd_witness(input: &Input, max_len: usize, use_shadow: bool) -> Result<Outcome> {
    let mut p = input.entry.presentation()?;
    if use_shadow {
        p = shadow(&p)?;
    }
    let alg = StringAlgebra::new(&p)?;
    let q = alg.quiver();
    let parameters = json!({"max_len": max_len, "shadow": use_shadow});
    Ok(match nondomestic_witness_search(&alg, max_len) {
        Some(w) => Outcome {
            verdict: "witness".into(),
            negative: false,
            parameters,
            result: json!({
                "alpha": q.arrow(w.alpha).name,
                "u": word_to_json(q, &w.u),
                "v": word_to_json(q, &w.v),
                "u_text": w.u.display(q),
                "v_text": w.v.display(q),
            }),
            text: vec![
                format!("first letter: {}", q.arrow(w.alpha).name),
                format!("U = {}", w.u.display(q)),
                format!("V = {}", w.v.display(q)),
            ],
        },
        None => Outcome {
            verdict: format!("no witness at depth {max_len}"),
            negative: true,
            parameters,
            result: Value::Null,
            text: vec![format!("no witness at depth {max_len}")],
        },
    })
}

fn parse_chain(text: &str) -> Result<(SigmaWord, SigmaWord)> {
    let (s, t) = text.split_once(',').ok_or_else(|| anyhow!("chain must be given as S,T"))?;
    Ok((SigmaWord::parse(s.trim())?, SigmaWord::parse(t.trim())?))
}

fn report_lines(prefix: &str, r: &PairReport, text: &mut Vec<String>) {
    for c in &r.checks {
        let mut line = format!("{prefix}{}: {}", c.id, if c.verdict { "pass" } else { "FAIL" });
        if let Some(w) = &c.witness {
            line.push_str(&format!(" ({w})"));
        }
        text.push(line);
    }
}

fn cmd_verify(
    input: &Input,
    depth: usize,
    seed: u64,
    overrides: [Option<&str>; 2],
    sample: usize,
    with_pushdown: bool,
) -> Result<Outcome> {
    let mut inst = input.entry.pair_instance()?;
    if inst.chains.len() != 2 {
        bail!("{} needs exactly two chains", input.source);
    }
    for (chain, o) in inst.chains.iter_mut().zip(overrides) {
        chain.spec.depth = depth;
        if let Some(o) = o {
            (chain.spec.s, chain.spec.t) = parse_chain(o)?;
        }
    }
    let opts = VerifyOptions { depth, seed, ..VerifyOptions::default() };
    let (c1, c2) = (&inst.chains[0], &inst.chains[1]);
    let q = inst.algebra.quiver();
    let qgen: Vec<Value> = inst
        .chains
        .iter()
        .map(|c| serde_json::to_value(q_generating_pair(&inst.algebra, &c.spec.u, &c.spec.v, c.convention)))
        .collect::<std::result::Result<_, _>>()?;
    let pair = full_pair_verify(&inst.algebra, c1, c2, inst.action.as_ref(), opts);
    let wide = wide_sample_verify(&inst.algebra, c1, c2, sample, opts);
    let down = if with_pushdown {
        let g = inst.action.as_ref().ok_or_else(|| anyhow!("--pushdown needs an action on the entry"))?;
        let sp = skew_presentation(&inst.presentation, g, 4)?;
        let skew = SkewAlgebra::new(&inst.presentation, g, 4)?;
        Some(pushdown_pair_verify(&inst.algebra, c1, c2, &sp, &skew, opts))
    } else {
        None
    };
    let qgen_ok = qgen.iter().all(|r| r["holds"] == Value::Bool(true));
    let passed = qgen_ok && pair.passed() && wide.passed() && down.as_ref().is_none_or(PairReport::passed);
    let mut text = vec![format!("q-generating: {}", if qgen_ok { "pass" } else { "FAIL" })];
    report_lines("", &pair, &mut text);
    report_lines("", &wide, &mut text);
    if let Some(d) = &down {
        report_lines("pushdown.", d, &mut text);
    }
    let chains: Vec<Value> = inst
        .chains
        .iter()
        .map(|c| {
            json!({
                "u": word_to_json(q, &c.spec.u),
                "v": word_to_json(q, &c.spec.v),
                "s": c.spec.s.to_string(),
                "t": c.spec.t.to_string(),
                "convention": c.convention,
            })
        })
        .collect();
    Ok(Outcome {
        verdict: if passed { "pass".into() } else { format!("fails at depth {depth}") },
        negative: !passed,
        parameters: json!({"depth": depth, "seed": seed, "sample": sample, "pushdown": with_pushdown}),
        result: json!({
            "chains": chains,
            "q_generating": qgen,
            "pair": pair,
            "wide": wide,
            "pushdown": down,
        }),
        text,
    })
}

/// The presentation and involution an entry carries: a triple gives its
/// gentle doubling, anything else its own action.
fn with_action(entry: &Entry) -> Result<(Presentation, GroupAction)> {
    if entry.kind == EntryKind::Triple {
        return Ok(g_pair(&entry.triple()?));
    }
    let p = entry.presentation()?;
    let g = entry.action(&p.quiver)?.ok_or_else(|| anyhow!("entry {} carries no action", entry.name))?;
    Ok((p, g))
}

fn cmd_skew(input: &Input, emit: Emit, degree: usize, word: Option<&str>) -> Result<Outcome> {
    let parameters = json!({"degree": degree, "word": word});
    let counts = |p: &Presentation| {
        format!("{} vertices, {} arrows, {} relations", p.quiver.vertex_count(), p.quiver.arrow_count(), p.relations.len())
    };
    match emit {
        Emit::Sg => {
            let p = sg_pair(&input.entry.triple()?);
            Ok(Outcome {
                verdict: "ok".into(),
                negative: false,
                parameters,
                text: vec![counts(&p), p.to_string()],
                result: json!({"presentation": presentation_value(&p)}),
            })
        }
        Emit::G => {
            let (p, g) = g_pair(&input.entry.triple()?);
            let gentle = classify(&p).gentle.holds;
            Ok(Outcome {
                verdict: "ok".into(),
                negative: false,
                parameters,
                text: vec![counts(&p), format!("gentle: {}", yes(gentle)), p.to_string()],
                result: json!({"presentation": presentation_value(&p), "action": action_to_json(&p.quiver, &g), "gentle": gentle}),
            })
        }
        Emit::Skew => {
            let (p, g) = with_action(&input.entry)?;
            let check = validate_action(&p, &g);
            if !check.valid {
                bail!("invalid action: {}", check.issues.join("; "));
            }
            let sp = skew_presentation(&p, &g, degree)?;
            let vertices: Vec<Value> =
                sp.vertices.iter().map(|v| json!({"name": v.name, "over": p.quiver.vertex_name(v.base)})).collect();
            Ok(Outcome {
                verdict: "ok".into(),
                negative: false,
                parameters,
                text: vec![
                    counts(&sp.presentation),
                    format!("searched to degree {}, truncated: {}", sp.degree_bound, yes(sp.truncated)),
                    sp.presentation.to_string(),
                ],
                result: json!({
                    "presentation": presentation_value(&sp.presentation),
                    "vertices": vertices,
                    "degree_bound": sp.degree_bound,
                    "truncated": sp.truncated,
                    "generates": sp.generates,
                }),
            })
        }
        Emit::Pushdown => {
            let (p, g) = with_action(&input.entry)?;
            let text = word.ok_or_else(|| anyhow!("--emit pushdown needs --word"))?;
            let alg = StringAlgebra::new(&p)?;
            let w = word_from_json(alg.quiver(), &Value::String(text.into()))?;
            let m = string_module::<Rational>(&alg, &w)?.rep;
            let sp = skew_presentation(&p, &g, degree)?;
            let skew = SkewAlgebra::new(&p, &g, degree)?;
            let (f, _) = pushdown(&sp, &skew, &m);
            let bq = &sp.presentation.quiver;
            Ok(Outcome {
                verdict: "ok".into(),
                negative: false,
                parameters,
                text: vec![format!("dim M = {}, dim pushdown = {}", m.total_dim(), f.total_dim())],
                result: json!({
                    "presentation": presentation_value(&sp.presentation),
                    "module": representation_to_json(&p.quiver, &m),
                    "pushdown": representation_to_json(bq, &f),
                }),
            })
        }
    }
}

fn cmd_brauer(input: &Input) -> Result<Outcome> {
    let g = input.entry.graph()?;
    let (q, rels) = brauer_relations(&g)?;
    let p = Presentation::new(q, rels.iter().map(|r| r.relation.clone()).collect());
    let c = classify(&p);
    let sh = if c.special_biserial.holds { Some(shadow(&p)?) } else { None };
    let mut text: Vec<String> = rels.iter().map(|r| format!("{:?}: {}", r.kind, r.text)).collect();
    text.push(format!("special biserial: {}, string: {}", yes(c.special_biserial.holds), yes(c.string.holds)));
    Ok(Outcome {
        verdict: "ok".into(),
        negative: false,
        parameters: json!({}),
        result: json!({
            "presentation": presentation_value(&p),
            "relations": rels,
            "classification": c,
            "shadow": sh.as_ref().map(presentation_value),
        }),
        text,
    })
}

fn cmd_jacobian(input: &Input) -> Result<Outcome> {
    let (q, w) = input.entry.potential()?;
    let p = jacobian_presentation(&q, &w)?;
    let derivatives: Vec<Value> = (0..q.arrow_count())
        .map(|a| {
            let terms: Vec<String> = cyclic_derivative(&q, &w, a)
                .iter()
                .map(|(c, path)| format!("{} {}", quiverbench::field::format_rational(c), path.display(&q)))
                .collect();
            json!({"arrow": q.arrow(a).name, "terms": terms})
        })
        .collect();
    Ok(Outcome {
        verdict: "ok".into(),
        negative: false,
        parameters: json!({}),
        text: vec![format!("{} relations", p.relations.len()), p.to_string()],
        result: json!({"presentation": presentation_value(&p), "derivatives": derivatives}),
    })
}

fn run(cli: &Cli) -> Result<(Option<Value>, Outcome)> {
    let (name, input, out) = match &cli.command {
        Command::List => {
            let r = Registry::load()?;
            let text = r.entries.iter().map(|e| format!("{}\t{}", e.name, e.description)).collect();
            let out = Outcome {
                verdict: "ok".into(),
                negative: false,
                parameters: json!({}),
                result: json!(r.names()),
                text,
            };
            return Ok((None, out));
        }
        Command::Classify { input } => {
            let i = load(input)?;
            let o = cmd_classify(&i)?;
            ("classify", i, o)
        }
        Command::Witness { input, max_len, shadow } => {
            let i = load(input)?;
            let o = cmd_witness(&i, *max_len, *shadow)?;
            ("witness", i, o)
        }
        Command::Verify { input, depth, chain1, chain2, sample, pushdown } => {
            let i = load(input)?;
            let o = cmd_verify(&i, *depth, cli.seed, [chain1.as_deref(), chain2.as_deref()], *sample, *pushdown)?;
            ("verify", i, o)
        }
        Command::Skew { input, emit, degree, word } => {
            let i = load(input)?;
            let o = cmd_skew(&i, *emit, *degree, word.as_deref())?;
            ("skew", i, o)
        }
        Command::Brauer { input } => {
            let i = load(input)?;
            let o = cmd_brauer(&i)?;
            ("brauer", i, o)
        }
        Command::Jacobian { input } => {
            let i = load(input)?;
            let o = cmd_jacobian(&i)?;
            ("jacobian", i, o)
        }
    };
    Ok((Some(certificate(name, &input, &out)), out))
}

/// Writes the chosen rendering; a closed pipe downstream is not an error.
fn emit(format: Format, cert: Option<Value>, out: &Outcome) -> std::io::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match format {
        Format::Json => {
            let v = cert.unwrap_or_else(|| out.result.clone());
            writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("certificates serialize"))
        }
        Format::Text => {
            for line in &out.text {
                writeln!(stdout, "{line}")?;
            }
            writeln!(stdout, "verdict: {}", out.verdict)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((cert, out)) => {
            if let Err(e) = emit(cli.format, cert, &out) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("qb: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("qb: {e:#}");
            ExitCode::from(2)
        }
    }
}
