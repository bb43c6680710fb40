use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use transchrome::abelianp::{checked_count_sublattices, enumerate_subgroups, Homocyclic};
use transchrome::acceptance;
use transchrome::charfun::{ClassSpace, GenClassFunction, Induction};
use transchrome::decomp::{decompose, report_json, report_table, verify_triangle};
use transchrome::fgl::{self, FglContext};
use transchrome::permcore::{format_tuple, parse_tuple, Perm, PermGroup};
use transchrome::zpsets::{self, enumerate_hom_classes, lambda, realize};
use transchrome::{limits, Error};

#[derive(Parser, Debug)]
#[command(name = "transchrome", version, about = "Transfer ideals, hom-classes into symmetric groups, and subgroup counts")]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on the size of any enumerated group or list.
    #[arg(long, global = true, value_name = "N")]
    max_elements: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classes of homomorphisms (Z/p^k)^h → Σ_{p^k} with centralizer orders.
    Homs {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
    },
    /// Components of C_t ⊗ Sub_k with dual subgroups and fiber ranks.
    Decompose {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        k: u32,
    },
    /// Orbits of fixed cosets for one class of homomorphisms into Σ_{p^k}.
    Transfer {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
        /// Class id, or images of the generators as `(0 1);(2 3)`.
        #[arg(long)]
        class: String,
        /// `blocks`, `blocks:SIZE`, or generators of the subgroup.
        #[arg(long, default_value = "blocks")]
        sub: String,
        /// Treat p as invertible.
        #[arg(long)]
        t_zero: bool,
    },
    /// Induce a class function given as a JSON file `{class_id: "a/b"}`.
    Induce {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "blocks")]
        sub: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Order-p^m subgroups of (Q_p/Z_p)^h, by formula and by enumeration.
    CountSub {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
    },
    /// Build a formal group law, print [p^k](x) and its Weierstrass degree.
    Fgl {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Coefficients are taken mod p^a.
        #[arg(long, default_value_t = fgl::DEFAULT_PRECISION)]
        a: u32,
        /// Monomials in u_1..u_{n-1} of degree ≥ b are dropped.
        #[arg(long, default_value_t = fgl::DEFAULT_U_TRUNCATION)]
        b: usize,
        /// x-degree truncation D.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t = Law::Ptypical)]
        law: Law,
    },
    /// Run every acceptance check.
    Reproduce {
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Coset,
    Orbit,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Law {
    Ptypical,
    Multiplicative,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(Error::ResourceLimit(_)) => 3,
            Failure::Domain(Error::InternalMismatch(_) | Error::IntegralityFailure(_)) => 4,
            Failure::Domain(_) => 2,
            Failure::Verification(_) => 4,
        }
    }
}

struct Output {
    json: Value,
    text: String,
}

type Outcome = Result<Output, (Option<Output>, Failure)>;

fn fail(f: impl Into<Failure>) -> (Option<Output>, Failure) {
    (None, f.into())
}

fn symmetric_with_sub(p: u32, k: u32, sub: &str) -> Result<(PermGroup, PermGroup), Failure> {
    let n = (p as usize).checked_pow(k).ok_or_else(|| Failure::Usage("p^k is too large".into()))?;
    let g = PermGroup::symmetric(n)?;
    let h = match sub.strip_prefix("blocks") {
        Some("") => PermGroup::block_product(n / p as usize, p as usize)?,
        Some(rest) => {
            let size: usize = rest
                .strip_prefix(':')
                .and_then(|s| s.parse().ok())
                .filter(|&s| s > 0 && n % s == 0)
                .ok_or_else(|| Failure::Usage(format!("bad block size in {sub:?}")))?;
            PermGroup::block_product(size, n / size)?
        }
        None => PermGroup::generate(n, &parse_tuple(n, sub)?)?,
    };
    Ok((g, h))
}

fn homs(p: u32, h: u32, k: u32) -> Outcome {
    let classes = enumerate_hom_classes(p, h, k).map_err(fail)?;
    let records: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "class_id": c.id(),
                "representative": realize(c).perms().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "centralizer_order": zpsets::centralizer_order(c) as u64,
                "isotypic": zpsets::is_isotypic(c),
                "minimal_level": zpsets::minimal_level(c),
            })
        })
        .collect();
    let mut text = format!("{} classes of (Z/{}^{})^{} → Σ_{}\n", classes.len(), p, k, h, (p as u64).pow(k));
    for c in &classes {
        let _ = writeln!(
            text,
            "{:<6} {:<40} {}",
            zpsets::centralizer_order(c),
            format_tuple(realize(c).perms()),
            c.id()
        );
    }
    Ok(Output { json: json!({"p": p, "h": h, "k": k, "classes": records}), text })
}

fn decompose_cmd(p: u32, n: u32, t: u32, k: u32) -> Outcome {
    let report = decompose(p, n, t, k).map_err(fail)?;
    let verdict = verify_triangle(&report);
    let mut json = report_json(&report);
    json["triangle"] = json!({"holds": verdict.holds, "diagnostics": verdict.diagnostics});
    let mut text = report_table(&report);
    let _ = writeln!(text, "non-trivial components: {}", report.nontrivial().count());
    let _ = writeln!(text, "triangle: {}", if verdict.holds { "holds" } else { "FAILS" });
    for d in &verdict.diagnostics {
        let _ = writeln!(text, "  {d}");
    }
    let out = Output { json, text };
    if verdict.holds {
        Ok(out)
    } else {
        Err((Some(out), Failure::Verification("triangle check failed".into())))
    }
}

fn resolve_class(space: &ClassSpace, degree: usize, text: &str) -> Result<Vec<Perm>, Failure> {
    if let Some(i) = space.position(text) {
        return Ok(space.class(i).representative.clone());
    }
    if text.starts_with('p') && text.contains(':') {
        return Err(Error::UnknownClass(text.to_string()).into());
    }
    Ok(parse_tuple(degree, text)?)
}

fn transfer(p: u32, h: u32, k: u32, class: &str, sub: &str, t_zero: bool) -> Outcome {
    let (g, sub_group) = symmetric_with_sub(p, k, sub).map_err(|e| (None, e))?;
    let lam = lambda(p, h, k).map_err(fail)?;
    let g_space = ClassSpace::new(&g, lam).map_err(fail)?;
    let h_space = ClassSpace::new(&sub_group, lam).map_err(fail)?;
    let alpha = resolve_class(&g_space, g.degree(), class).map_err(|e| (None, e))?;
    if alpha.len() != h as usize {
        return Err(fail(Failure::Usage(format!("expected {h} permutations, got {}", alpha.len()))));
    }
    let plan = Induction::new(&h_space, &g_space).map_err(fail)?;
    let datum = plan.datum_for(&alpha).map_err(fail)?;
    let trivial = datum.ideal_trivial(p, t_zero);
    let mut json = serde_json::to_value(&datum).expect("datum serializes");
    json["ideal_trivial"] = json!(trivial);
    json["fixed_cosets"] = json!(datum.fixed_coset_count() as u64);
    let mut text = format!(
        "class {}  |C| = {}  fixed cosets = {}  ideal trivial: {}\n",
        datum.g_class,
        datum.centralizer_order,
        datum.fixed_coset_count(),
        trivial
    );
    for r in &datum.records {
        let _ = writeln!(text, "  gH = {:<24} index {:<4} |stab| = {:<5} {}", r.coset_representative, r.index, r.stabilizer_order, r.h_class);
    }
    Ok(Output { json, text })
}

fn induce(p: u32, h: u32, k: u32, sub: &str, input: &PathBuf, method: Method) -> Outcome {
    let raw = std::fs::read_to_string(input)
        .map_err(|e| fail(Failure::Usage(format!("cannot read {}: {e}", input.display()))))?;
    let value: Value = serde_json::from_str(&raw).map_err(|e| fail(Error::Parse(e.to_string())))?;
    let (g, sub_group) = symmetric_with_sub(p, k, sub).map_err(|e| (None, e))?;
    let lam = lambda(p, h, k).map_err(fail)?;
    let g_space: Arc<ClassSpace> = ClassSpace::new(&g, lam).map_err(fail)?;
    let h_space = ClassSpace::new(&sub_group, lam).map_err(fail)?;
    let chi = GenClassFunction::from_json(&h_space, &value).map_err(fail)?;
    let plan = Induction::new(&h_space, &g_space).map_err(fail)?;
    let coset = matches!(method, Method::Coset | Method::Both).then(|| plan.induce(&chi)).transpose().map_err(fail)?;
    let orbit = matches!(method, Method::Orbit | Method::Both)
        .then(|| plan.induce_grouped(&chi))
        .transpose()
        .map_err(fail)?;
    let mut json = json!({});
    let mut text = String::new();
    for (name, f) in [("coset_sum", &coset), ("orbit_sum", &orbit)] {
        if let Some(f) = f {
            json[name] = f.to_json();
            let _ = writeln!(text, "{name}:");
            for (c, v) in g_space.classes().iter().zip(f.values()) {
                let _ = writeln!(text, "  {:<40} {}", c.id, transchrome::charfun::format_rational(v));
            }
        }
    }
    if let (Some(a), Some(b)) = (&coset, &orbit) {
        let agree = a == b;
        json["agree"] = json!(agree);
        let _ = writeln!(text, "agree: {agree}");
        if !agree {
            return Err((Some(Output { json, text }), Failure::Verification("induction formulas differ".into())));
        }
    }
    Ok(Output { json, text })
}

fn count_sub(h: u32, p: u64, m: u32) -> Outcome {
    transchrome::arith::require_prime(p).map_err(fail)?;
    let count = checked_count_sublattices(h, p, m)
        .and_then(|c| u64::try_from(c).ok())
        .ok_or_else(|| fail(Error::ResourceLimit("count exceeds 64 bits".into())))?;
    let brute = match Homocyclic::new(p as u32, m, h) {
        Ok(g) if g.order() <= 10_000 && p <= u32::MAX as u64 => {
            Some(enumerate_subgroups(g, (p as usize).pow(m)).map_err(fail)?.len() as u64)
        }
        _ => None,
    };
    let json = json!({
        "h": h, "p": p, "m": m,
        "count": count,
        "brute_force": brute,
    });
    let mut text = count.to_string();
    if let Some(b) = brute {
        let _ = write!(text, " (brute force {b})");
    }
    text.push('\n');
    let out = Output { json, text };
    match brute {
        Some(b) if b != count => Err((Some(out), Failure::Verification("formula and enumeration disagree".into()))),
        _ => Ok(out),
    }
}

fn fgl_cmd(p: u32, n: u32, k: u32, a: u32, b: usize, d: Option<usize>, law: Law) -> Outcome {
    let height = match law {
        Law::Ptypical => n,
        Law::Multiplicative => 1,
    };
    let d = match d {
        Some(d) => d,
        None => fgl::default_truncation(p, height, k).map_err(fail)?,
    };
    let ctx = match law {
        Law::Ptypical => FglContext::build_ptypical(p, n, a, b, d),
        Law::Multiplicative => FglContext::multiplicative(p, a, d),
    }
    .map_err(fail)?;
    let axioms = ctx.verify_axioms();
    let honda = ctx.honda_reduction_holds();
    let series = ctx.n_series((p as u64).pow(k));
    let expected = (p as usize).pow(k * height);
    let rank = ctx.torsion_rank(k);
    let law_name = match law {
        Law::Ptypical => "p-typical",
        Law::Multiplicative => "multiplicative",
    };
    let json = json!({
        "law": law_name,
        "p": p, "n": height, "k": k, "a": a, "b": b, "D": d,
        "contract": format!("below x-degree {d}, mod {p}^{a}, mod u-degree {b}"),
        "series": fgl::series_json(&series),
        "expected_degree": expected,
        "torsion_rank": rank.as_ref().ok(),
        "honda_reduction": honda,
        "axioms": axioms.is_ok(),
    });
    let mut text = format!("{law_name} law, height {height}, p = {p}; below x^{d}, mod {p}^{a}, u-degree < {b}\n");
    let _ = writeln!(text, "[{}](x) = {}", (p as u64).pow(k), series.render());
    let _ = writeln!(text, "axioms: {}", if axioms.is_ok() { "hold" } else { "FAIL" });
    let _ = writeln!(text, "Honda reduction: {}", if honda { "holds" } else { "FAILS" });
    match &rank {
        Ok(r) => {
            let _ = writeln!(text, "Weierstrass degree: {r} (expected {expected})");
        }
        Err(e) => {
            let _ = writeln!(text, "Weierstrass preparation failed: {e}");
        }
    }
    let out = Output { json, text };
    match (rank, axioms) {
        (Err(e), _) | (_, Err(e)) => Err((Some(out), Failure::Domain(e))),
        (Ok(r), Ok(())) if r != expected || !honda => {
            Err((Some(out), Failure::Verification("Weierstrass degree or Honda check failed".into())))
        }
        _ => Ok(out),
    }
}

fn reproduce(seed: u64) -> Outcome {
    let outcomes = acceptance::run_all(seed);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
    let _ = writeln!(text, "{passed}/{} passed", outcomes.len());
    let json = json!({"seed": seed, "passed": passed, "total": outcomes.len(), "criteria": outcomes});
    let out = Output { json, text };
    if passed == outcomes.len() {
        Ok(out)
    } else {
        Err((Some(out), Failure::Verification(format!("{} criteria failed", outcomes.len() - passed))))
    }
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Homs { p, h, k } => homs(*p, *h, *k),
        Command::Decompose { p, n, t, k } => decompose_cmd(*p, *n, *t, *k),
        Command::Transfer { p, h, k, class, sub, t_zero } => transfer(*p, *h, *k, class, sub, *t_zero),
        Command::Induce { p, h, k, sub, input, method } => induce(*p, *h, *k, sub, input, *method),
        Command::CountSub { h, p, m } => count_sub(*h, *p, *m),
        Command::Fgl { p, n, k, a, b, d, law } => fgl_cmd(*p, *n, *k, *a, *b, *d, *law),
        Command::Reproduce { seed } => reproduce(*seed),
    }
}

fn print(out: &Output, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON value prints"));
    } else {
        print!("{}", out.text);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(cap) = cli.max_elements {
        limits::set_max_elements(cap);
    }
    match dispatch(&cli.command) {
        Ok(out) => {
            print(&out, cli.json);
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            if let Some(out) = out {
                print(&out, cli.json);
            }
            let message = match &failure {
                Failure::Usage(m) | Failure::Verification(m) => m.clone(),
                Failure::Domain(e) => e.to_string(),
            };
            eprintln!("error: {message}");
            ExitCode::from(failure.exit_code())
        }
    }
}
