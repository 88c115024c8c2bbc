use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use weightcat::categorio::{check_membership, classify, ThetaSpec};
use weightcat::degonemod::{bracket_fidelity, build, DegOneSpec};
use weightcat::extcoh::{ext_solve_type_a, ext_solve_type_c, window_cohomology_dim, ExtError};
use weightcat::inducemod::{induce, iv_unit, verma_bracket_fidelity, SliceModule};
use weightcat::paperlab::{random_inputs, run_lemma, LabInput, LemmaReport, DEFAULT_DEPTH};
use weightcat::rational::{parse_q, parse_q_list, show_q, Q};
use weightcat::rootsys::{complement, parse_index_set, CartanType, LieAlg};
use weightcat::weylmod::{Constraint, LatticeModule, WeylParams};

const SCHEMA: &str = "weightcat/1";

#[derive(Parser)]
#[command(
    name = "weightcat",
    version,
    about = "Weight-module categories O_{Φ,θ}: classification, verification, Ext certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify O_{Φ,θ} for a Cartan type and θ (1-based indices of simple roots in θ).
    Classify(ClassifyArgs),
    /// Run the bracket-fidelity, highest-weight, degree and membership suites on N(a) or M(a).
    Verify(ModuleArgs),
    /// Solve the Ext¹ constraint system between two degree-1 modules.
    Ext(ModuleArgs),
    /// Reproduce a constant-extraction lemma.
    Lab(LabArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Default)]
struct Common {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Cartan type, e.g. A4 (also accepted as --type).
    #[arg(value_name = "TYPE")]
    ty_pos: Option<String>,
    #[arg(long = "type")]
    ty: Option<String>,
    /// Simple roots in θ, 1-based, comma separated (empty for θ = ∅).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ModuleArgs {
    /// N (type A), M (type C) or sl2 (cuspidal N(a1,a2) of A1, ext only).
    #[arg(long)]
    module: Option<String>,
    /// Parameters of the (first) module, "p/q" rationals.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Parameters of the second module (ext; defaults to --a).
    #[arg(long = "b", allow_hyphen_values = true)]
    b: Option<String>,
    /// Window radius.
    #[arg(long = "B")]
    window: Option<i64>,
    /// Truncation depth.
    #[arg(long = "D")]
    depth: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct LabArgs {
    /// lemA12, A1N, AkAn, AC1, CC or appendix-a3.
    lemma: String,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Branch constant for appendix-a3.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long = "D")]
    depth: Option<usize>,
    /// Run seeded random parameter sets instead of --a.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Mismatch,
    Config(String),
    Certification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch => 1,
            Failure::Config(_) => 2,
            Failure::Certification(_) => 3,
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn cfg_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

struct Config(Value);

impl Config {
    fn load(path: &Option<String>) -> Result<Self, Failure> {
        let Some(p) = path else {
            return Ok(Config(Value::Null));
        };
        let text = std::fs::read_to_string(p).map_err(|e| cfg_err(format!("{p}: {e}")))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| cfg_err(format!("{p}: {e}")))?;
        if !v.is_object() {
            return Err(cfg_err(format!("{p}: expected a JSON object")));
        }
        Ok(Config(v))
    }

    /// Flag value, else the config entry (strings, numbers or arrays joined by commas).
    fn get(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| match self.0.get(key)? {
            Value::String(s) => Some(s.clone()),
            Value::Number(n) => Some(n.to_string()),
            Value::Array(xs) => Some(
                xs.iter()
                    .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            _ => None,
        })
    }

    fn num<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(None, key)
            .map(|s| s.parse::<T>().map_err(|_| cfg_err(format!("bad value for {key}: {s}"))))
            .transpose()
    }

    fn format(&self, flag: Option<Format>) -> Format {
        flag.unwrap_or_else(|| match self.get(None, "format").as_deref() {
            Some("json") => Format::Json,
            _ => Format::Text,
        })
    }
}

fn params(s: &str) -> Result<Vec<Q>, Failure> {
    parse_q_list(s).map_err(cfg_err)
}

fn parse_type(s: &str) -> Result<CartanType, Failure> {
    s.parse::<CartanType>().map_err(cfg_err)
}

fn one_based(set: &BTreeSet<usize>) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

fn cmd_classify(args: ClassifyArgs) -> Outcome {
    let cfg = Config::load(&args.common.config)?;
    let ty_s = cfg
        .get(args.ty_pos.or(args.ty), "type")
        .ok_or_else(|| cfg_err("missing Cartan type"))?;
    let ty = parse_type(&ty_s)?;
    let theta_s = cfg.get(args.theta, "theta").unwrap_or_default();
    let theta = parse_index_set(&theta_s, ty.rank).map_err(cfg_err)?;
    let v = classify(ty, &theta).map_err(cfg_err)?;
    let out = json!({
        "command": "classify",
        "type": ty_s,
        "theta": one_based(&theta),
        "levi": one_based(&complement(ty.rank, &theta)),
        "verdict": serde_json::to_value(&v).unwrap(),
        "family": v.family.as_ref().map(|f| f.display()),
    });
    Ok((out, true))
}

fn module_spec(module: &str, a: Vec<Q>) -> Result<DegOneSpec, Failure> {
    match module {
        "N" => Ok(DegOneSpec::A(a)),
        "M" => Ok(DegOneSpec::C(a)),
        other => Err(cfg_err(format!("unknown module {other:?} (expected N or M)"))),
    }
}

fn cmd_verify(args: ModuleArgs) -> Outcome {
    let cfg = Config::load(&args.common.config)?;
    let module = cfg
        .get(args.module, "module")
        .ok_or_else(|| cfg_err("missing --module"))?;
    let a = params(&cfg.get(args.a, "a").ok_or_else(|| cfg_err("missing --a"))?)?;
    let b = cfg.num(args.window, "B")?.unwrap_or(3);
    let depth = cfg.num(args.depth, "D")?.unwrap_or(DEFAULT_DEPTH);
    if b < 0 || depth < 1 {
        return Err(cfg_err("need B ≥ 0 and D ≥ 1"));
    }
    let spec = module_spec(&module, a)?;
    let m = build(&spec).map_err(cfg_err)?;
    let theta = m.theta();
    let ty = spec.cartan_type().map_err(cfg_err)?;

    let (checked, bad) = bracket_fidelity(&m.module, b);
    let hw = m.enumerate_hw(&theta, b);
    let hw_ok = hw == m.predicted_hw(b);
    let degree = m.degree_on_window(b);
    let ts = ThetaSpec::full(ty, theta.clone()).map_err(cfg_err)?;
    let mem = check_membership(&m.module, &ts, b).map_err(|e| Failure::Certification(e.to_string()))?;

    let levi = m.circled();
    let verma = if levi.is_empty() {
        json!({"skipped": "Levi factor is h: V(C) is a Verma module over a one-dimensional C"})
    } else {
        let base = vec![0i64; m.module.alg.nvars];
        let slice = SliceModule::new(
            m.module.alg.clone(),
            m.module.params.clone(),
            levi.clone(),
            base.clone(),
        );
        let v = induce(Box::new(slice), theta.clone(), depth);
        let mut vecs = vec![iv_unit(base.clone())];
        if let Some(&t) = theta.iter().next() {
            let r = weightcat::rootsys::unit(ty.rank, t);
            vecs.push(v.root_vector(&weightcat::rootsys::neg(&r), &base).map_err(cfg_err)?);
        }
        let (n, bad) = verma_bracket_fidelity(&v, &vecs).map_err(cfg_err)?;
        json!({"checked": n, "failures": bad, "pass": bad.is_empty()})
    };
    let verma_ok = verma.get("pass").and_then(Value::as_bool).unwrap_or(true);
    let pass = bad.is_empty() && hw_ok && degree == 1 && mem.pass && verma_ok;
    let out = json!({
        "command": "verify",
        "module": spec.name(),
        "B": b,
        "D": depth,
        "theta": one_based(&theta),
        "bracket_fidelity": {"checked": checked, "failures": bad, "pass": bad.is_empty()},
        "highest_weight": {"found": hw.len(), "pass": hw_ok},
        "degree": {"value": degree, "pass": degree == 1},
        "membership": serde_json::to_value(&mem).unwrap(),
        "verma_bracket_fidelity": verma,
        "pass": pass,
    });
    Ok((out, pass))
}

fn sl2_module(a: &[Q]) -> Result<LatticeModule, Failure> {
    if a.len() != 2 || a.iter().any(weightcat::rational::is_int) {
        return Err(cfg_err("sl2 needs two non-integral parameters a1,a2"));
    }
    let alg = Arc::new(LieAlg::new(CartanType::a(1)).map_err(cfg_err)?);
    Ok(LatticeModule::new(
        alg,
        WeylParams::new(a.to_vec()),
        Constraint::SumZero,
    ))
}

fn cmd_ext(args: ModuleArgs) -> Outcome {
    let cfg = Config::load(&args.common.config)?;
    let module = cfg
        .get(args.module, "module")
        .ok_or_else(|| cfg_err("missing --module"))?;
    let a_s = cfg.get(args.a, "a").ok_or_else(|| cfg_err("missing --a"))?;
    let b_s = cfg.get(args.b, "b").unwrap_or_else(|| a_s.clone());
    let (a, bp) = (params(&a_s)?, params(&b_s)?);
    let window = cfg.num(args.window, "B")?.unwrap_or(3);
    if window < 0 {
        return Err(cfg_err("need B ≥ 0"));
    }
    let certification = |e: ExtError| match e {
        ExtError::CertificationImpossible(..) => Failure::Certification(e.to_string()),
        other => cfg_err(other),
    };
    if module == "sl2" {
        let (ma, mb) = (sl2_module(&a)?, sl2_module(&bp)?);
        let dim = window_cohomology_dim(&ma, &mb, window);
        let expected = usize::from(ma.params == mb.params);
        let out = json!({
            "command": "ext",
            "module": "sl2",
            "a": a.iter().map(show_q).collect::<Vec<_>>(),
            "b": bp.iter().map(show_q).collect::<Vec<_>>(),
            "B": window,
            "argument": "window cocycles modulo window coboundaries, exact linear algebra",
            "dimension": dim,
            "expected": expected,
            "pass": dim == expected,
        });
        return Ok((out, dim == expected));
    }
    let (sa, sb) = (module_spec(&module, a)?, module_spec(&module, bp)?);
    let (na, nb) = (build(&sa).map_err(cfg_err)?, build(&sb).map_err(cfg_err)?);
    let levi = na.circled();
    let sys = match &sa {
        DegOneSpec::A(_) => {
            if levi.len() != 1 {
                return Err(cfg_err(format!(
                    "type-A solver covers a rank-one Levi factor; {} has {}",
                    sa.name(),
                    levi.len()
                )));
            }
            ext_solve_type_a(&na.module, &nb.module, *levi.iter().next().unwrap(), window).map_err(certification)?
        }
        DegOneSpec::C(_) => {
            let n = na.rank();
            if levi != BTreeSet::from([n - 1]) {
                return Err(cfg_err(format!("type-C solver covers M(-1,…,-1,a); got {}", sa.name())));
            }
            ext_solve_type_c(&na.module, &nb.module, window).map_err(certification)?
        }
    };
    let pass = sys.dimension == 0;
    let out = json!({
        "command": "ext",
        "module": module,
        "a": sa.name(),
        "b": sb.name(),
        "B": window,
        "system": serde_json::to_value(&sys).unwrap(),
        "dimension": sys.dimension,
        "pass": pass,
    });
    Ok((out, pass))
}

fn cmd_lab(args: LabArgs) -> Outcome {
    let cfg = Config::load(&args.common.config)?;
    let depth = cfg.num(args.depth, "D")?.unwrap_or(DEFAULT_DEPTH);
    if depth < 1 {
        return Err(cfg_err("need D ≥ 1"));
    }
    let seed = cfg.num(args.seed, "seed")?;
    let inputs: Vec<LabInput> = match (cfg.get(args.a, "a"), seed) {
        (Some(a), _) => {
            let c = cfg.get(args.c, "c").map(|s| parse_q(&s)).transpose().map_err(cfg_err)?;
            vec![LabInput { a: params(&a)?, c }]
        }
        (None, Some(seed)) => random_inputs(&args.lemma, args.samples, seed).map_err(cfg_err)?,
        (None, None) => return Err(cfg_err("give --a or --seed")),
    };
    let reports: Vec<LemmaReport> = inputs
        .iter()
        .map(|i| run_lemma(&args.lemma, i, depth))
        .collect::<Result<_, _>>()
        .map_err(cfg_err)?;
    let pass = reports.iter().all(|r| r.matched);
    let out = json!({
        "command": "lab",
        "lemma": args.lemma,
        "reports": serde_json::to_value(&reports).unwrap(),
        "pass": pass,
    });
    Ok((out, pass))
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    Value::Array(xs) if xs.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, x) in xs.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            text(x, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = |c: &Common| {
        Config::load(&c.config)
            .map(|cfg| cfg.format(c.format))
            .unwrap_or_default()
    };
    let (fmt, outcome) = match cli.command {
        Command::Classify(a) => (format(&a.common), cmd_classify(a)),
        Command::Verify(a) => (format(&a.common), cmd_verify(a)),
        Command::Ext(a) => (format(&a.common), cmd_ext(a)),
        Command::Lab(a) => (format(&a.common), cmd_lab(a)),
    };
    match outcome {
        Ok((mut v, pass)) => {
            v["schema"] = json!(SCHEMA);
            match fmt {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).unwrap()),
                Format::Text => {
                    let mut s = String::new();
                    text(&v, 0, &mut s);
                    print!("{s}");
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(Failure::Mismatch.code())
            }
        }
        Err(f) => {
            let msg = match &f {
                Failure::Config(m) => format!("configuration error: {m}"),
                Failure::Certification(m) => format!("certification impossible: {m}"),
                Failure::Mismatch => unreachable!(),
            };
            if fmt == Format::Json {
                println!("{}", json!({"schema": SCHEMA, "error": msg, "exit": f.code()}));
            } else {
                eprintln!("{msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
