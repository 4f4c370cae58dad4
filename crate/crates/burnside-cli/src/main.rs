//! `burnside`: command-line access to monomial Burnside rings, biset
//! operations, restriction kernels and the verification suites.
//!
//! Exit codes: 0 success, 1 failed check or internal error, 2 usage error.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use burnside_core::bisetops::{self, Link};
use burnside_core::chars::character_table_text;
use burnside_core::groups::{named_aut_generators, Elem, FiniteGroup, Subgroup};
use burnside_core::kernels;
use burnside_core::monoburn::{subgroup_label, MonomialBurnside};
use burnside_core::verify::{self, SuiteOptions, SUITES};
use burnside_core::{Cyc, Error, Matrix};

#[derive(Parser, Debug)]
#[command(name = "burnside", version, about = "Exact monomial Burnside rings of small p-groups")]
struct Cli {
    /// Write JSON output to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<String>,
    /// Write a verification report as CSV to this path (`-` for stdout).
    #[arg(long, global = true)]
    csv: Option<String>,
    /// Append floating-point approximations to cyclotomic values in text output.
    #[arg(long, global = true)]
    approx: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group order, generators and subgroup count.
    Describe { group: String },
    /// Standard basis [K,ψ] and the npairs (H,h) indexing species.
    Basis { group: String },
    /// Primitive idempotents in standard coordinates.
    Idempotents { group: String },
    /// The species table s_{H,h}([K,ψ]).
    Species { group: String },
    /// Product of two standard basis elements, given by index.
    Product { group: String, i: usize, j: usize },
    /// An elementary biset operation as a matrix.
    Op {
        #[arg(value_enum)]
        kind: OpArg,
        #[arg(long)]
        group: String,
        /// Subgroup generators (`x,y^2`) or `1`, `G`, `G'`, `Phi`, `Z`; for iso,
        /// an automorphism index or a named generator.
        #[arg(long)]
        datum: String,
        #[arg(long, value_enum, default_value_t = BasisArg::Idempotent)]
        basis: BasisArg,
    },
    /// The deflation number m^N_{G,g}; `all` lists every g.
    DeflationNumber { group: String, g: String, n: String },
    /// φ₁ on the linearization kernel.
    Phi1 { group: String },
    /// Dimensions of the kernel subspaces.
    Spaces { group: String },
    /// The restriction kernel and its automorphism action.
    Kernel {
        #[arg(value_enum)]
        action: KernelArg,
        group: String,
    },
    /// Run a verification suite.
    Verify {
        /// One of the suite names; `all` runs every suite.
        suite: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, default_value_t = 64)]
        max_aut: usize,
        /// Restrict the appendix-c suite to one worked example.
        #[arg(long)]
        case: Option<String>,
        /// Sampled instances for the properties suite.
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Res,
    Ind,
    Inf,
    Def,
    Iso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Standard,
    Idempotent,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelArg {
    Compute,
    Character,
    Decompose,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownGroup(_) | Error::InvalidSpec(_) | Error::BoundExceeded { .. } | Error::NotSubgroup(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

type Out = Result<u8, Failure>;

/// Text output, suppressed when a machine format goes to stdout.
macro_rules! say {
    ($ctx:expr, $($t:tt)*) => {
        if !$ctx.quiet {
            println!($($t)*);
        }
    };
}

struct Ctx {
    quiet: bool,
    json: Option<String>,
    csv: Option<String>,
    approx: bool,
}

impl Ctx {
    fn cyc(&self, c: &Cyc) -> String {
        if self.approx && !c.is_rational() {
            let (re, im) = c.to_complex();
            format!("{c} (~{re:.6}{im:+.6}i)")
        } else {
            c.to_string()
        }
    }

    fn emit_json(&self, v: &Value) -> Result<(), Failure> {
        match &self.json {
            Some(p) => write_out(p, &(serde_json::to_string_pretty(v).expect("json") + "\n")),
            None => Ok(()),
        }
    }
}

fn write_out(path: &str, s: &str) -> Result<(), Failure> {
    if path == "-" {
        print!("{s}");
        Ok(())
    } else {
        std::fs::write(path, s).map_err(|e| Failure {
            code: 1,
            msg: format!("cannot write {path}: {e}"),
        })
    }
}

fn ring(spec: &str) -> Result<Arc<MonomialBurnside>, Failure> {
    Ok(verify::ring(spec)?)
}

/// Splits on commas outside parentheses, so `h(1,0,0)` stays whole.
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn element(g: &FiniteGroup, name: &str) -> Result<Elem, Failure> {
    g.elem_by_name(name.trim())
        .ok_or_else(|| usage(format!("no element `{name}` in {}; elements: {}", g.label(), g.names().join(" "))))
}

fn subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup, Failure> {
    Ok(match spec.trim() {
        "1" => g.trivial(),
        "G" => g.whole(),
        "G'" => g.derived_subgroup(),
        "Phi" => g.frattini()?,
        "Z" => g.center(),
        s => {
            let gens = split_top(s).iter().map(|t| element(g, t)).collect::<Result<Vec<_>, _>>()?;
            g.closure(&gens)
        }
    })
}

fn print_entries(ctx: &Ctx, m: &Matrix<Cyc>, rows: &[String], cols: &[String]) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                say!(ctx, "  {} <- {} : {}", rows[i], cols[j], ctx.cyc(v));
            }
        }
    }
}

fn matrix_json(m: &Matrix<Cyc>, rows: &[String], cols: &[String]) -> Value {
    let mut entries = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                entries.push(json!({ "row": rows[i], "col": cols[j], "value": v }));
            }
        }
    }
    json!({ "rows": rows, "cols": cols, "entries": entries })
}

fn labels(r: &MonomialBurnside, npairs: bool) -> Vec<String> {
    (0..r.rank())
        .map(|i| if npairs { r.npair_label(i) } else { r.pair_label(i) })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        quiet: cli.json.as_deref() == Some("-") || cli.csv.as_deref() == Some("-"),
        json: cli.json.clone(),
        csv: cli.csv.clone(),
        approx: cli.approx,
    };
    match run(&ctx, cli.seed, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(ctx: &Ctx, seed: u64, cmd: Command) -> Out {
    match cmd {
        Command::Describe { group } => {
            let g = verify::group(&group)?;
            let v = g.describe_json()?;
            say!(ctx, "{}: order {}, {} subgroups", g.label(), g.order(), v["subgroup_count"]);
            ctx.emit_json(&v)?;
            Ok(0)
        }
        Command::Basis { group } => {
            let r = ring(&group)?;
            say!(ctx, "{}: rank {}", r.label(), r.rank());
            for i in 0..r.rank() {
                say!(ctx, "  {:>4}  {:<40}  {}", i, r.pair_label(i), r.npair_label(i));
            }
            ctx.emit_json(&r.basis_json())?;
            Ok(0)
        }
        Command::Idempotents { group } => {
            let r = ring(&group)?;
            let pairs = labels(&r, false);
            let mut out = Vec::new();
            for j in 0..r.rank() {
                let terms: Vec<String> = r
                    .idempotent(j)
                    .iter()
                    .map(|(i, c)| format!("({})*{}", ctx.cyc(c), pairs[*i]))
                    .collect();
                say!(ctx, "e{} = {}", r.npair_label(j), terms.join(" + "));
                let js: Vec<Value> = r.idempotent(j).iter().map(|(i, c)| json!({ "pair": pairs[*i], "coeff": c })).collect();
                out.push(json!({ "npair": r.npair_label(j), "terms": js }));
            }
            ctx.emit_json(&json!({ "group": r.label(), "idempotents": out }))?;
            Ok(0)
        }
        Command::Species { group } => {
            let r = ring(&group)?;
            let m = r.species_matrix();
            let (rows, cols) = (labels(&r, true), labels(&r, false));
            say!(ctx, "species of {} (row npair, column pair)", r.label());
            print_entries(ctx, &m, &rows, &cols);
            ctx.emit_json(&json!({ "group": r.label(), "species": matrix_json(&m, &rows, &cols) }))?;
            Ok(0)
        }
        Command::Product { group, i, j } => {
            let r = ring(&group)?;
            if i >= r.rank() || j >= r.rank() {
                return Err(usage(format!("indices must be below the rank {}", r.rank())));
            }
            let pairs = labels(&r, false);
            let prod = r.basis_product(i, j);
            let terms: Vec<String> = prod.iter().map(|(t, c)| format!("{}*{}", ctx.cyc(c), pairs[*t])).collect();
            say!(ctx, "{} . {} = {}", pairs[i], pairs[j], terms.join(" + "));
            let js: Vec<Value> = prod.iter().map(|(t, c)| json!({ "pair": pairs[*t], "coeff": c })).collect();
            ctx.emit_json(&json!({ "group": r.label(), "left": pairs[i], "right": pairs[j], "product": js }))?;
            Ok(0)
        }
        Command::Op { kind, group, datum, basis } => op(ctx, kind, &group, &datum, basis),
        Command::DeflationNumber { group, g, n } => {
            let grp = verify::group(&group)?;
            let nn = subgroup(&grp, &n)?;
            if !grp.is_normal(&nn) {
                return Err(usage(format!("{n} is not normal in {}", grp.label())));
            }
            let elems: Vec<Elem> = if g == "all" { grp.elements().collect() } else { vec![element(&grp, &g)?] };
            let mut rows = Vec::new();
            for e in elems {
                let m = bisetops::deflation_number(&grp, e, &nn)?;
                say!(ctx, "m({}, {}) = {m}", grp.name(e), subgroup_label(&grp, &nn));
                rows.push(json!({ "g": grp.name(e), "value": m.to_string() }));
            }
            ctx.emit_json(&json!({ "group": grp.label(), "N": subgroup_label(&grp, &nn), "values": rows }))?;
            Ok(0)
        }
        Command::Phi1 { group } => {
            let r = ring(&group)?;
            let m = bisetops::phi1(&r)?;
            let sp: Vec<String> = r.sp_indices().iter().map(|&i| r.npair_label(i)).collect();
            let idem = m.mul(&m)? == m;
            say!(ctx, "phi1 on {} ({} kernel coordinates), idempotent: {idem}", r.label(), sp.len());
            print_entries(ctx, &m, &sp, &sp);
            ctx.emit_json(&json!({ "group": r.label(), "idempotent": idem, "phi1": matrix_json(&m, &sp, &sp) }))?;
            Ok(0)
        }
        Command::Spaces { group } => {
            let r = ring(&group)?;
            let sp = r.sp_indices().len();
            let tilde = bisetops::tilde_e_space(&r)?.rows();
            let delta = bisetops::delta_phi_space(&r)?.rows();
            let k = kernels::restriction_kernel(&r)?.dim();
            let img = bisetops::ideal_image(&r)?.rows();
            say!(ctx, "{}: S_p {sp}, tilde_e {tilde}, delta_phi {delta}, K {k}, I_G image {img}", r.label());
            ctx.emit_json(&json!({
                "group": r.label(), "sp": sp, "tilde_e": tilde, "delta_phi": delta,
                "restriction_kernel": k, "ideal_image": img,
            }))?;
            Ok(0)
        }
        Command::Kernel { action, group } => kernel(ctx, action, &group),
        Command::Verify { suite, p, max_order, max_aut, case, instances } => {
            let opts = SuiteOptions { p, max_order, max_aut, seed, instances, case };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(usage(format!("unknown suite `{suite}`; expected one of: all, {}", SUITES.join(", "))));
            };
            let mut code = 0;
            let mut jsons = Vec::new();
            let mut csvs = String::new();
            for name in names {
                let rep = verify::run_suite(name, &opts)?;
                if !ctx.quiet {
                    print!("{}", rep.to_text());
                }
                code = code.max(rep.exit_code() as u8);
                jsons.push(rep.to_json());
                let c = rep.to_csv()?;
                if csvs.is_empty() {
                    csvs = c;
                } else {
                    csvs.extend(c.lines().skip(1).map(|l| format!("{l}\n")));
                }
            }
            if let Some(p) = &ctx.json {
                let body = if jsons.len() == 1 {
                    jsons.remove(0)
                } else {
                    let vals: Vec<Value> = jsons.iter().map(|s| serde_json::from_str(s).expect("own json")).collect();
                    serde_json::to_string_pretty(&vals).expect("json") + "\n"
                };
                write_out(p, &body)?;
            }
            if let Some(p) = &ctx.csv {
                write_out(p, &csvs)?;
            }
            Ok(code)
        }
    }
}

fn op(ctx: &Ctx, kind: OpArg, group: &str, datum: &str, basis: BasisArg) -> Out {
    let r = ring(group)?;
    let g = r.group();
    let link = match kind {
        OpArg::Res | OpArg::Ind => Link::subgroup(&r, &subgroup(g, datum)?)?,
        OpArg::Inf | OpArg::Def => {
            let n = subgroup(g, datum)?;
            if !g.is_normal(&n) {
                return Err(usage(format!("{datum} is not normal in {}", g.label())));
            }
            Link::quotient(&r, &n)?
        }
        OpArg::Iso => {
            let aut = g.automorphisms()?;
            let idx = match datum.parse::<usize>() {
                Ok(i) if i < aut.len() => i,
                Ok(_) => return Err(usage(format!("Aut({}) has {} elements", g.label(), aut.len()))),
                Err(_) => {
                    let named = named_aut_generators(g)?;
                    *named.tokens.get(datum).ok_or_else(|| usage(format!("no named automorphism `{datum}`")))?
                }
            };
            Link::iso(&r, r.clone(), aut.hom(idx))?
        }
    };
    let small = link.small.clone();
    let up = matches!(kind, OpArg::Ind | OpArg::Inf);
    let opm = if up { link.up(&r) } else { link.down(&r) };
    let (src, tgt): (&MonomialBurnside, &MonomialBurnside) = if up { (&small, &r) } else { (&r, &small) };
    let (m, rows, cols) = match basis {
        BasisArg::Standard => (opm.standard_matrix(), labels(tgt, false), labels(src, false)),
        BasisArg::Idempotent => (opm.idempotent_matrix(src, tgt), labels(tgt, true), labels(src, true)),
    };
    let predicted = (basis == BasisArg::Idempotent)
        .then(|| bisetops::predicted_idempotent_matrix(&link, &r, up).map(|p| p == m))
        .flatten();
    say!(ctx, 
        "{:?} {} -> {} ({} basis){}",
        kind,
        src.label(),
        tgt.label(),
        if basis == BasisArg::Standard { "standard" } else { "idempotent" },
        predicted.map_or(String::new(), |ok| format!(", closed formula agrees: {ok}"))
    );
    print_entries(ctx, &m, &rows, &cols);
    ctx.emit_json(&json!({
        "op": format!("{kind:?}").to_lowercase(),
        "source": src.label(),
        "target": tgt.label(),
        "datum": datum,
        "basis": if basis == BasisArg::Standard { "standard" } else { "idempotent" },
        "closed_formula_agrees": predicted,
        "matrix": matrix_json(&m, &rows, &cols),
    }))?;
    Ok(0)
}

fn kernel(ctx: &Ctx, action: KernelArg, group: &str) -> Out {
    let r = ring(group)?;
    match action {
        KernelArg::Compute => {
            let k = kernels::restriction_kernel(&r)?;
            let sp: Vec<String> = k.sp.iter().map(|&i| r.npair_label(i)).collect();
            say!(ctx, "{}: dim K = {} inside S_p of dim {}", r.label(), k.dim(), sp.len());
            let mut rows = Vec::new();
            for i in 0..k.dim() {
                let terms: Vec<String> = k
                    .basis
                    .row(i)
                    .iter()
                    .zip(&sp)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| format!("({})*e{l}", ctx.cyc(c)))
                    .collect();
                say!(ctx, "  v{i} = {}", terms.join(" + "));
                let js: Vec<Value> = k
                    .basis
                    .row(i)
                    .iter()
                    .zip(&sp)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, l)| json!({ "npair": l, "coeff": c }))
                    .collect();
                rows.push(Value::Array(js));
            }
            ctx.emit_json(&json!({ "group": r.label(), "dim_kernel": k.dim(), "basis": rows }))?;
            Ok(0)
        }
        KernelArg::Character => {
            let k = kernels::restriction_kernel(&r)?;
            let dim = k.dim();
            let module = kernels::aut_module(&r, k)?;
            let aut = r.group().automorphisms()?.group();
            say!(ctx, "Aut({}) acting on K (dim {dim})", r.label());
            say!(ctx, "{}", character_table_text(aut, &[("K".into(), module.character.clone())]));
            ctx.emit_json(&burnside_core::chars::character_table_json(aut, &[("K".into(), module.character)]))?;
            Ok(0)
        }
        KernelArg::Decompose => {
            let rep = kernels::decompose(&r)?;
            say!(ctx, "{}: dim K = {}, paper match: {:?}", rep.group, rep.dim_kernel, rep.paper_match);
            for c in &rep.constituents {
                say!(ctx, "  {}: degree {}, multiplicity {}, norm {}", c.name, c.degree, c.multiplicity, c.norm);
            }
            for n in &rep.notes {
                say!(ctx, "  note: {n}");
            }
            ctx.emit_json(&serde_json::to_value(&rep).expect("report"))?;
            Ok(u8::from(rep.paper_match == kernels::PaperMatch::No))
        }
    }
}
