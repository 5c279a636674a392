//! `idlat`: command-line front end for multivariate ideal lattices.

use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use ideal_lattice::cyclic::{cyclic_ideal, is_multivariate_cyclic, sigma, Tensor};
use ideal_lattice::groebner::{buchberger_with_budget, groebner_with_budget, GroebnerBasis, Ideal};
use ideal_lattice::hardness::{
    algorithm1_traced, expansion_factor_with, maxcoeff, maxsub, spp_bruteforce_with_budget, variety_cyclotomic,
    Algorithm1Params, ExpansionOptions,
};
use ideal_lattice::hashfam::{
    encode_bytes, find_collision_bruteforce, hash, keygen, validate, BruteForceOracle, HashKey, IdealJson, KeyJson,
    ParamsJson,
};
use ideal_lattice::lattice::{ideal_to_lattice, minima_bruteforce, IntegerLattice, DEFAULT_NODE_BUDGET};
use ideal_lattice::poly::{DecInt, MonomialOrder, OrderKind, Polynomial};
use ideal_lattice::quotient::{build_quotient_with_budget, QuotientRing};
use ideal_lattice::{ErrorKind, HasKind};

#[derive(Parser)]
#[command(name = "idlat", version, about = "Groebner bases, ideal lattices and lattice hash functions")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Groebner basis of an ideal over the integers or Z_p
    Groebner(GroebnerArgs),
    /// Standard monomials and coordinates of the quotient ring
    Quotient(QuotientArgs),
    /// Lattices of ideals and their successive minima
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Cyclic tensors and shifts
    #[command(subcommand)]
    Cyclic(CyclicCmd),
    /// Norms, expansion factor and shortest-polynomial oracles
    #[command(subcommand)]
    Hardness(HardnessCmd),
    /// The lattice hash family
    #[command(subcommand)]
    Hash(HashCmd),
}

#[derive(Args)]
struct IdealArgs {
    /// Ideal JSON file (`-` for stdin)
    #[arg(long)]
    ideal: PathBuf,
    /// lex, grlex or grevlex
    #[arg(long, default_value = "lex")]
    order: String,
    /// Variable priority, 1-based, most significant first (e.g. 2,1)
    #[arg(long, value_delimiter = ',')]
    priority: Option<Vec<usize>>,
    /// Cap on S- and G-polynomial reductions
    #[arg(long, value_parser = parse_budget, default_value = "1000000")]
    pair_budget: u64,
}

#[derive(Args)]
struct GroebnerArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    /// Return the short reduced basis
    #[arg(long)]
    short: bool,
}

#[derive(Args)]
struct QuotientArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    /// Coordinates of this element
    #[arg(long, conflicts_with = "phi_inv")]
    phi: Option<String>,
    /// Element with these coordinates
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    phi_inv: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Hermite and Smith forms of the lattice of an ideal of the quotient
    Extract {
        #[command(flatten)]
        ideal: IdealArgs,
        /// Generator of the ideal inside the quotient (repeatable)
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Successive minima in the infinity norm by enumeration
    Minima {
        /// JSON file with a list of integer rows
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        radius: Option<String>,
        #[arg(long, value_parser = parse_budget, default_value = "10000000")]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum CyclicCmd {
    /// Whether a lattice is closed under every cyclic shift
    Check {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        /// JSON file with a list of integer rows
        #[arg(long, conflicts_with = "gens")]
        basis: Option<PathBuf>,
        /// Generators of an ideal of Z[x]/<x_i^r_i - 1> instead of a basis
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Apply the shift along one axis (1-based)
    Shift {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[arg(long)]
        axis: usize,
        /// Tensor entries, row-major with the last axis fastest
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "poly")]
        data: Option<Vec<String>>,
        /// Element of Z[x]/<x_i^r_i - 1> instead of raw data
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
}

#[derive(Subcommand)]
enum HardnessCmd {
    /// Estimate the expansion factor
    Expansion {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, value_parser = parse_budget, default_value = "10000")]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        coeff_bound: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Shortest polynomial of an ideal of the quotient
    Spp {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, value_parser = parse_budget, default_value = "10000000")]
        budget: u64,
    },
    /// Largest modulus over the cyclotomic variety
    Maxsub {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// One run of the collision-to-IncSPP reduction
    Algo1 {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum HashCmd {
    /// Generate a key from a parameter file
    Keygen {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Also write the key to this file
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Hash a file's bytes
    Digest {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustive collision search
    Collide {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, value_parser = parse_budget, default_value = "1000000")]
        budget: u64,
    },
}

struct CliError {
    code: u8,
    msg: String,
}

fn err<E: HasKind + Display>(e: E) -> CliError {
    CliError {
        code: match e.kind() {
            ErrorKind::Domain => 2,
            ErrorKind::Resource => 3,
        },
        msg: e.to_string(),
    }
}

fn domain(msg: impl Into<String>) -> CliError {
    CliError { code: 2, msg: msg.into() }
}

type Res<T> = Result<T, CliError>;

/// Positive integer, also in the form `1e6`.
fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return if v > 0 { Ok(v) } else { Err("must be positive".into()) };
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if f >= 1.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(format!("`{s}` is not a positive integer"))
    }
}

fn real(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn read_input(path: &Path) -> Res<Vec<u8>> {
    let mut buf = Vec::new();
    let r = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut buf)).map(|_| ())
    };
    r.map_err(|e| domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(buf)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Res<T> {
    serde_json::from_slice(&read_input(path)?).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn parse_ints(v: &[String]) -> Res<Vec<BigInt>> {
    v.iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| domain(format!("`{s}` is not an integer"))))
        .collect()
}

fn read_rows(path: &Path) -> Res<Vec<Vec<BigInt>>> {
    let rows: Vec<Vec<DecInt>> = read_json(path)?;
    Ok(rows.into_iter().map(|r| r.into_iter().map(|d| d.0).collect()).collect())
}

fn order_of(args: &IdealArgs, nvars: usize) -> Res<MonomialOrder> {
    let kind: OrderKind = args.order.parse().map_err(err_poly)?;
    match &args.priority {
        None => Ok(MonomialOrder::new(kind, nvars)),
        Some(p) => {
            if p.len() != nvars || p.contains(&0) {
                return Err(domain(format!("priority must list variables 1..{nvars}")));
            }
            MonomialOrder::with_priority(kind, p.iter().map(|i| i - 1).collect()).map_err(err_poly)
        }
    }
}

fn err_poly(e: ideal_lattice::poly::PolyError) -> CliError {
    domain(e.to_string())
}

fn load_ideal(args: &IdealArgs) -> Res<(Ideal, MonomialOrder)> {
    let j: IdealJson = read_json(&args.ideal)?;
    let ideal = j.to_ideal().map_err(domain)?;
    let ord = order_of(args, ideal.nvars())?;
    Ok((ideal, ord))
}

fn load_quotient(args: &IdealArgs) -> Res<QuotientRing> {
    let (ideal, ord) = load_ideal(args)?;
    build_quotient_with_budget(&ideal, &ord, args.pair_budget).map_err(err)
}

fn parse_gens(gens: &[String], q: &QuotientRing) -> Res<Vec<Polynomial>> {
    gens.iter()
        .map(|s| Polynomial::parse_mod(s, Some(q.nvars()), q.modulus().cloned()).map_err(err_poly))
        .collect()
}

fn text(p: &Polynomial, ord: &MonomialOrder) -> Value {
    Value::String(p.to_text(ord))
}

fn basis_json(gb: &GroebnerBasis) -> Value {
    json!({
        "elements": gb.elements().iter().map(|g| text(g, gb.order())).collect::<Vec<_>>(),
        "monic": gb.is_monic(),
    })
}

fn run_groebner(a: &GroebnerArgs) -> Res<Value> {
    let (ideal, ord) = load_ideal(&a.ideal)?;
    let gb = if a.short {
        groebner_with_budget(&ideal, &ord, a.ideal.pair_budget)
    } else {
        buchberger_with_budget(&ideal, &ord, a.ideal.pair_budget)
    }
    .map_err(err)?;
    Ok(basis_json(&gb))
}

fn run_quotient(a: &QuotientArgs) -> Res<Value> {
    let q = load_quotient(&a.ideal)?;
    let ord = q.order().clone();
    if let Some(s) = &a.phi {
        let f = Polynomial::parse_mod(s, Some(q.nvars()), q.modulus().cloned()).map_err(err_poly)?;
        return Ok(json!({ "coords": ints(&q.phi(&f).map_err(err)?) }));
    }
    if let Some(v) = &a.phi_inv {
        let f = q.phi_inv(&parse_ints(v)?).map_err(err)?;
        return Ok(json!({ "poly": text(&f, &ord) }));
    }
    let mut out = json!({
        "N": q.dimension(),
        "free": q.is_free(),
        "monic": q.is_monic(),
        "basis": q.basis().iter().map(|m| Value::String(m.to_string())).collect::<Vec<_>>(),
        "gb": basis_json(q.gb()),
    });
    if let Some((m, k)) = q.torsion_witness() {
        out["torsion"] = json!({ "monomial": m.to_string(), "order": int(&k) });
    }
    Ok(out)
}

fn lattice_json(l: &IntegerLattice) -> Value {
    json!({
        "dim": l.dim(),
        "rank": l.rank(),
        "hnf": l.hnf().iter().map(|r| ints(r)).collect::<Vec<_>>(),
        "snf": ints(l.snf_factors()),
        "determinant": int(&l.determinant()),
        "full_rank": l.is_full_rank(),
        "saturated": l.is_saturated(),
    })
}

fn run_lattice(c: &LatticeCmd) -> Res<Value> {
    match c {
        LatticeCmd::Extract { ideal, gens } => {
            let q = load_quotient(ideal)?;
            let gens = parse_gens(gens, &q)?;
            Ok(lattice_json(&ideal_to_lattice(&q, &gens).map_err(err)?))
        }
        LatticeCmd::Minima { basis, k, radius, budget } => {
            let rows = read_rows(basis)?;
            let dim = rows.first().map(|r| r.len()).unwrap_or(0);
            let l = IntegerLattice::new(dim, rows).map_err(err)?;
            let radius = radius.as_ref().map(|r| parse_ints(std::slice::from_ref(r))).transpose()?;
            let m = minima_bruteforce(&l, *k, radius.as_ref().map(|r| &r[0]), *budget).map_err(err)?;
            Ok(json!({
                "lambdas": ints(&m.lambdas),
                "witnesses": m.witnesses.iter().map(|w| ints(w)).collect::<Vec<_>>(),
                "search_bound": int(&m.search_bound),
            }))
        }
    }
}

fn cyclic_quotient(shape: &[usize]) -> Res<QuotientRing> {
    let ideal = cyclic_ideal(shape).map_err(err)?;
    build_quotient_with_budget(&ideal, &MonomialOrder::lex(shape.len()), DEFAULT_NODE_BUDGET).map_err(err)
}

fn run_cyclic(c: &CyclicCmd) -> Res<Value> {
    match c {
        CyclicCmd::Check { shape, basis, gens } => {
            let l = match basis {
                Some(path) => {
                    let rows = read_rows(path)?;
                    IntegerLattice::new(shape.iter().product(), rows).map_err(err)?
                }
                None => {
                    if gens.is_empty() {
                        return Err(domain("either --basis or --gen is required"));
                    }
                    let q = cyclic_quotient(shape)?;
                    let gens = parse_gens(gens, &q)?;
                    ideal_to_lattice(&q, &gens).map_err(err)?
                }
            };
            Ok(json!({ "cyclic": is_multivariate_cyclic(&l, shape).map_err(err)?, "rank": l.rank() }))
        }
        CyclicCmd::Shift { shape, axis, data, poly } => {
            if *axis == 0 {
                return Err(domain("axes are numbered from 1"));
            }
            let t = match (data, poly) {
                (Some(d), _) => Tensor::new(shape.clone(), parse_ints(d)?).map_err(err)?,
                (None, Some(p)) => {
                    let q = cyclic_quotient(shape)?;
                    let f = q
                        .reduce(&Polynomial::parse(p, Some(shape.len())).map_err(err_poly)?)
                        .map_err(err)?;
                    ideal_lattice::cyclic::tensor_of(&f, shape).map_err(err)?
                }
                (None, None) => return Err(domain("either --data or --poly is required")),
            };
            let s = sigma(&t, axis - 1).map_err(err)?;
            let ord = MonomialOrder::lex(shape.len());
            Ok(json!({
                "shape": shape,
                "data": ints(s.data()),
                "poly": text(&ideal_lattice::cyclic::element_of(&s), &ord),
            }))
        }
    }
}

#[derive(Deserialize)]
struct Algo1File {
    ideal: IdealJson,
    #[serde(default)]
    order: Option<String>,
    /// Generators of the ideal inside the quotient
    gens: Vec<String>,
    g: String,
    p: DecInt,
    m: usize,
    d: u64,
    eta: f64,
    #[serde(default = "default_collision_budget")]
    budget: u64,
}

fn default_collision_budget() -> u64 {
    1_000_000
}

fn run_hardness(c: &HardnessCmd) -> Res<Value> {
    match c {
        HardnessCmd::Expansion { ideal, k, samples, coeff_bound, seed } => {
            let q = load_quotient(ideal)?;
            let opts = ExpansionOptions {
                samples: *samples,
                coeff_bound: *coeff_bound,
                seed: *seed,
            };
            let r = expansion_factor_with(&q, k, &opts).map_err(err)?;
            Ok(json!({
                "k": r.k_tuple,
                "degree_box": r.degree_box,
                "estimate": { "num": int(r.estimate.numer()), "den": int(r.estimate.denom()) },
                "estimate_real": real(ratio_f64(&r.estimate)),
                "witness": text(&r.witness, q.order()),
                "theorem_bound": int(&r.theorem_bound),
                "g_max": int(&r.g_max),
                "max_steps": r.max_steps,
                "samples": r.samples,
                "exhaustive": r.exhaustive,
                "violations": r.violations,
            }))
        }
        HardnessCmd::Spp { ideal, gens, gamma, budget } => {
            let q = load_quotient(ideal)?;
            let gens = parse_gens(gens, &q)?;
            let g = spp_bruteforce_with_budget(&q, &gens, *gamma, *budget).map_err(err)?;
            Ok(json!({
                "element": text(&g, q.order()),
                "coords": ints(&q.phi(&g).map_err(err)?),
                "norm": int(&g.inf_norm()),
            }))
        }
        HardnessCmd::Maxsub { r, poly } => {
            let v = variety_cyclotomic(r).map_err(err)?;
            let f = Polynomial::parse(poly, Some(r.len())).map_err(err_poly)?;
            let reduced = v.quotient().reduce(&f).map_err(err)?;
            Ok(json!({
                "reduced": text(&reduced, v.quotient().order()),
                "maxsub": real(maxsub(&f, &v).map_err(err)?),
                "maxcoeff": int(&maxcoeff(&f, &v).map_err(err)?),
                "N": v.n(),
                "t": real(v.t()),
            }))
        }
        HardnessCmd::Algo1 { params, seed } => {
            let file: Algo1File = read_json(params)?;
            let ideal = file.ideal.to_ideal().map_err(domain)?;
            let kind: OrderKind = file.order.as_deref().unwrap_or("lex").parse().map_err(err_poly)?;
            let ord = MonomialOrder::new(kind, ideal.nvars());
            let q = build_quotient_with_budget(&ideal, &ord, 1_000_000).map_err(err)?;
            let gens = parse_gens(&file.gens, &q)?;
            let g = Polynomial::parse(&file.g, Some(q.nvars())).map_err(err_poly)?;
            let prm = Algorithm1Params {
                p: file.p.0,
                m: file.m,
                d: file.d,
                eta: file.eta,
            };
            let oracle = BruteForceOracle { budget: file.budget };
            let st = algorithm1_traced(&q, &gens, &g, &prm, &oracle, *seed).map_err(err)?;
            let polys = |v: &[Polynomial]| v.iter().map(|p| text(p, &ord)).collect::<Vec<_>>();
            Ok(json!({
                "h": text(&st.h, &ord),
                "h_norm": int(&st.h_norm),
                "g_norm": int(&st.g_norm),
                "halves": st.halves(),
                "member": true,
                "s": real(st.s),
                "a": polys(&st.a),
                "z": polys(&st.z),
                "float_deviation": real(st.float_deviation),
            }))
        }
    }
}

fn ratio_f64(r: &num_rational::BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

fn load_key(path: &Path) -> Res<HashKey> {
    let j: KeyJson = read_json(path)?;
    HashKey::from_json(&j).map_err(err)
}

fn run_hash(c: &HashCmd) -> Res<Value> {
    match c {
        HashCmd::Keygen { params, seed, output } => {
            let pj: ParamsJson = read_json(params)?;
            let prm = pj.to_params().map_err(err)?;
            let ring = validate(&prm, pj.strict).map_err(err)?;
            let key = keygen(&ring, *seed);
            let mut v = serde_json::to_value(key.to_json()).expect("serializable");
            v["insecure"] = Value::Bool(!ring.is_strict());
            if let Some(path) = output {
                let s = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
                std::fs::write(path, s).map_err(|e| domain(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(v)
        }
        HashCmd::Digest { key, input } => {
            let key = load_key(key)?;
            let bytes = read_input(input)?;
            let b = encode_bytes(key.ring(), &bytes).map_err(err)?;
            let h = hash(&key, &b).map_err(err)?;
            let q = key.ring().ring();
            Ok(json!({
                "digest": ints(&q.phi(&h).map_err(err)?),
                "poly": text(&h, q.order()),
            }))
        }
        HashCmd::Collide { key, budget } => {
            let key = load_key(key)?;
            let (a, b) = find_collision_bruteforce(&key, *budget).map_err(err)?;
            let ord = key.ring().ring().order().clone();
            let show = |v: &[Polynomial]| v.iter().map(|p| text(&p.centered(), &ord)).collect::<Vec<_>>();
            Ok(json!({
                "alpha": show(&a),
                "beta": show(&b),
                "digest": ints(&key.ring().ring().phi(&hash(&key, &a).map_err(err)?).map_err(err)?),
            }))
        }
    }
}

fn run(cli: &Cli) -> Res<Value> {
    match &cli.cmd {
        Cmd::Groebner(a) => run_groebner(a),
        Cmd::Quotient(a) => run_quotient(a),
        Cmd::Lattice(c) => run_lattice(c),
        Cmd::Cyclic(c) => run_cyclic(c),
        Cmd::Hardness(c) => run_hardness(c),
        Cmd::Hash(c) => run_hash(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(v) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", serde_json::to_string(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
