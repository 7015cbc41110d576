use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use affine_schur::dual::multiply_schur_oracle;
use affine_schur::hom::{HomDescriptor, HomKind};
use affine_schur::lie::{pi_tilde, Decomposer, GeneratorKind, LoopGenerator};
use affine_schur::schur::{multiply_with, transpose_antiauto, weyl_act, AlgebraElement, BasisIndex, WeylSymmetry};
use affine_schur::semigroup::{det_tilde, evaluate, membership, nonvanishing_witness, Membership, PeriodicMatrix};
use affine_schur::tensor::{act, multiply_via_action, TensorVector};
use affine_schur::{LaurentCoeff, Rational};
use affine_schur_cli::cache::{default_path, ProductCache};
use affine_schur_cli::expr::{element_to_expr, generators_to_expr, parse, ExprError};
use affine_schur_cli::input::{parse_matrix, parse_polynomial};
use affine_schur_cli::verify::{self, Params};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "affine-schur", version, about = "Exact computations in affine Schur algebras")]
struct Cli {
    /// Specialize the parameter `a` to this rational in printed results.
    #[arg(long, global = true, value_name = "RATIONAL", allow_hyphen_values = true)]
    spec_a: Option<String>,

    /// Write the result as JSON to this file, or to stdout for `-`.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<String>,

    /// Cache file for basis products. Defaults to $AFFINE_SCHUR_CACHE.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Ctx {
    /// Period `n`.
    #[arg(long, default_value_t = 2)]
    n: i64,
    /// Rank `r`, when no atom fixes it.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Green,
    Schur,
    Tensor,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    PsiAs,
    PsiA,
    EmbedFinite,
    DetStar,
    DetSharp,
    /// The anti-automorphism J̃.
    Transpose,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Y,
    X,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Gl,
    Sl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate and multiply expressions (`-` reads element JSON from stdin).
    Multiply {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, value_enum, default_value_t = Engine::Green)]
        engine: Engine,
        #[arg(required = true)]
        operands: Vec<String>,
    },
    /// Act on a tensor basis vector `(l1,...,lr)` or a JSON vector.
    Act {
        #[command(flatten)]
        ctx: Ctx,
        element: String,
        vector: String,
    },
    /// Homomorphisms between Schur algebras.
    Hom {
        #[command(subcommand)]
        cmd: HomCmd,
    },
    /// Apply the Weyl symmetry with the given window.
    Weyl {
        #[command(flatten)]
        ctx: Ctx,
        /// Window `(w(1),...,w(n))`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
        element: String,
    },
    /// Image of a periodic matrix `"i,j=v; ..."` in S̃(n,r).
    EvalSemigroup {
        #[command(flatten)]
        ctx: Ctx,
        matrix: String,
    },
    /// det̃ of a periodic matrix, optionally at a value or as a membership test.
    Det {
        #[command(flatten)]
        ctx: Ctx,
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, value_enum)]
        membership: Option<Group>,
    },
    /// The loop algebra.
    Lie {
        #[command(subcommand)]
        cmd: LieCmd,
    },
    /// Write a basis element in generators.
    Decompose {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, alias = "using", value_enum, ignore_case = true, default_value_t = Kind::Y)]
        kind: Kind,
        index: String,
    },
    /// A matrix with det̃ = 1 at `a0` on which a coordinate polynomial is nonzero.
    Witness {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a0: String,
        polynomial: String,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        window: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect or clear the product cache.
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
}

#[derive(Subcommand)]
enum HomCmd {
    Apply {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(value_enum)]
        map: MapKind,
        /// The exponent `s` of `psi-as`.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        s: i64,
        element: String,
    },
}

#[derive(Subcommand)]
enum LieCmd {
    /// π̃(E_{s,t}) in S̃(n,r).
    Pi {
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
    },
}

#[derive(Subcommand)]
enum CacheCmd {
    Stats,
    Clear {
        #[arg(long, requires = "r")]
        n: Option<i64>,
        #[arg(long, requires = "n")]
        r: Option<usize>,
    },
}

enum Fail {
    User(String),
    Verification(String),
}

impl From<ExprError> for Fail {
    fn from(e: ExprError) -> Self {
        Fail::User(e.to_string())
    }
}

impl From<affine_schur::Error> for Fail {
    fn from(e: affine_schur::Error) -> Self {
        match e {
            affine_schur::Error::Verification(m) => Fail::Verification(m),
            other => Fail::User(other.to_string()),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::User(e.to_string())
    }
}

fn user(msg: impl Into<String>) -> Fail {
    Fail::User(msg.into())
}

struct Env {
    spec_a: Option<Rational>,
    output: Option<String>,
    cache: Option<ProductCache>,
    stdin_used: bool,
}

impl Env {
    fn stdin(&mut self) -> Result<String, Fail> {
        if self.stdin_used {
            return Err(user("only one argument can be `-`"));
        }
        self.stdin_used = true;
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self) -> Result<T, Fail> {
        let s = self.stdin()?;
        serde_json::from_str(&s).map_err(|e| user(format!("bad JSON on stdin: {e}")))
    }

    fn multiply(&mut self, engine: Engine, x: &AlgebraElement, y: &AlgebraElement) -> affine_schur::Result<AlgebraElement> {
        match (engine, self.cache.as_mut()) {
            (Engine::Green, Some(c)) => multiply_with(x, y, |a, b| Ok(c.product(a, b))),
            (Engine::Green, None) => x.multiply(y),
            (Engine::Schur, _) => multiply_schur_oracle(x, y),
            (Engine::Tensor, _) => multiply_via_action(x, y),
        }
    }

    fn element(&mut self, arg: &str, ctx: &Ctx, engine: Engine) -> Result<AlgebraElement, Fail> {
        if arg == "-" {
            return self.json();
        }
        let e = parse(arg)?;
        let r = match (e.rank(ctx.n)?, ctx.r) {
            (Some(r), Some(given)) if r != given => {
                return Err(user(format!("expression has rank {r} but --r {given} was given")))
            }
            (Some(r), _) | (None, Some(r)) => r,
            (None, None) => return Err(user("no atom fixes the rank; pass --r")),
        };
        if ctx.n < 1 {
            return Err(user("--n must be positive"));
        }
        let mut mul = |x: &AlgebraElement, y: &AlgebraElement| self.multiply(engine, x, y);
        Ok(e.eval(ctx.n, r, &mut mul)?)
    }

    fn matrix(&mut self, arg: &str, n: i64) -> Result<PeriodicMatrix, Fail> {
        if arg == "-" {
            return self.json();
        }
        parse_matrix(arg, n).map_err(user)
    }

    fn emit<T: Serialize>(&self, value: &T, text: &str) -> Result<(), Fail> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match self.output.as_deref() {
            None => writeln!(out, "{text}")?,
            Some("-") => writeln!(out, "{}", serde_json::to_string(value).expect("serializable"))?,
            Some(path) => fs::write(path, serde_json::to_string_pretty(value).expect("serializable") + "\n")?,
        }
        Ok(())
    }

    fn emit_element(&self, x: &AlgebraElement) -> Result<(), Fail> {
        let x = match &self.spec_a {
            Some(q) => x.specialize(q)?,
            None => x.clone(),
        };
        self.emit(&x, &element_to_expr(&x).to_string())
    }
}

fn rational(s: &str) -> Result<Rational, Fail> {
    s.parse().map_err(|e: affine_schur::Error| user(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Fail> {
    let spec_a = cli.spec_a.as_deref().map(rational).transpose()?;
    if spec_a.as_ref().is_some_and(Rational::is_zero) {
        return Err(user("--spec-a must be nonzero"));
    }
    let cache_path = cli.cache.clone().unwrap_or_else(default_path);
    let uses_cache = matches!(cli.cmd, Cmd::Multiply { .. } | Cmd::Hom { .. } | Cmd::Weyl { .. } | Cmd::Act { .. });
    let cache = if cli.no_cache || !uses_cache {
        None
    } else {
        Some(ProductCache::open(&cache_path)?)
    };
    let mut env = Env {
        spec_a,
        output: cli.output.clone(),
        cache,
        stdin_used: false,
    };
    let result = dispatch(&mut env, cli.cmd, &cache_path);
    if let Some(c) = env.cache.as_mut() {
        // a cached product used in this run is re-derived from scratch
        let seed = c.hits.wrapping_mul(31).wrapping_add(c.misses);
        if let Err((x, y)) = c.spot_check(seed) {
            return Err(Fail::Verification(format!(
                "cached product {x} * {y} differs from a fresh computation; clear the cache"
            )));
        }
        c.flush()?;
    }
    result
}

fn dispatch(env: &mut Env, cmd: Cmd, cache_path: &std::path::Path) -> Result<(), Fail> {
    match cmd {
        Cmd::Multiply { ctx, engine, operands } => {
            let mut acc: Option<AlgebraElement> = None;
            for op in &operands {
                let x = env.element(op, &ctx, engine)?;
                acc = Some(match acc {
                    None => x,
                    Some(a) => env.multiply(engine, &a, &x)?,
                });
            }
            env.emit_element(&acc.expect("at least one operand"))
        }
        Cmd::Act { ctx, element, vector } => {
            let x = env.element(&element, &ctx, Engine::Green)?;
            let v: TensorVector = if vector == "-" {
                env.json()?
            } else {
                let t = affine_schur::schur::parse_tuple(&vector)?;
                TensorVector::basis(x.n(), &t)
            };
            let mut w = act(&x, &v)?;
            if let Some(q) = &env.spec_a {
                let mut s = TensorVector::zero(w.n(), w.r());
                for (t, c) in w.terms() {
                    s.add_term(t.clone(), &LaurentCoeff::constant(c.eval(q)?));
                }
                w = s;
            }
            env.emit(&w, &w.to_string())
        }
        Cmd::Hom {
            cmd: HomCmd::Apply { ctx, map, s, element },
        } => {
            let x = env.element(&element, &ctx, Engine::Green)?;
            if let MapKind::Transpose = map {
                return env.emit_element(&transpose_antiauto(&x));
            }
            let kind = match map {
                MapKind::PsiAs => HomKind::PsiAs { s },
                MapKind::PsiA => HomKind::PsiA,
                MapKind::EmbedFinite => HomKind::EmbedFinite,
                MapKind::DetStar => HomKind::DetStar,
                MapKind::DetSharp => HomKind::DetTildeSharp,
                MapKind::Transpose => unreachable!("handled above"),
            };
            let d = HomDescriptor::new(kind, x.n(), x.r())?;
            env.emit_element(&d.apply(&x)?)
        }
        Cmd::Weyl {
            ctx,
            window,
            power,
            element,
        } => {
            let w = WeylSymmetry::new(affine_schur::schur::parse_tuple(&window)?)?;
            if w.n() != ctx.n {
                return Err(user(format!("window has length {} but --n is {}", w.n(), ctx.n)));
            }
            let x = env.element(&element, &ctx, Engine::Green)?;
            env.emit_element(&weyl_act(&w.pow(power), &x)?)
        }
        Cmd::EvalSemigroup { ctx, matrix } => {
            let g = env.matrix(&matrix, ctx.n)?;
            let r = ctx.r.ok_or_else(|| user("--r is required"))?;
            env.emit_element(&evaluate(&g, r))
        }
        Cmd::Det { ctx, matrix, at, membership: m } => {
            let g = env.matrix(&matrix, ctx.n)?;
            let d = det_tilde(&g);
            match (at, m) {
                (_, Some(Group::Gl)) => {
                    let ok = membership(&g, &Membership::GlGeneric)?;
                    env.emit(&ok, &ok.to_string())
                }
                (at, Some(Group::Sl)) => {
                    let a0 = rational(at.as_deref().unwrap_or("1"))?;
                    let ok = membership(&g, &Membership::SlAt { a0 })?;
                    env.emit(&ok, &ok.to_string())
                }
                (Some(q), None) => {
                    let v = d.eval(&rational(&q)?)?;
                    env.emit(&v, &v.to_string())
                }
                (None, None) => match &env.spec_a {
                    Some(q) => {
                        let v = d.eval(q)?;
                        env.emit(&v, &v.to_string())
                    }
                    None => env.emit(&d, &d.to_string()),
                },
            }
        }
        Cmd::Lie {
            cmd: LieCmd::Pi { n, r, s, t },
        } => {
            if n < 1 {
                return Err(user("--n must be positive"));
            }
            env.emit_element(&pi_tilde(n, LoopGenerator::new(n, s, t), r)?)
        }
        Cmd::Decompose { ctx, kind, index } => {
            let x = BasisIndex::parse_text(&index, ctx.n)?;
            let kind = match kind {
                Kind::Y => GeneratorKind::Y,
                Kind::X => GeneratorKind::X,
            };
            let e = Decomposer::new().decompose(&x, kind)?;
            env.emit(&e, &generators_to_expr(&e).to_string())
        }
        Cmd::Witness { ctx, a0, polynomial } => {
            let p = parse_polynomial(&polynomial, ctx.n).map_err(user)?;
            let w = nonvanishing_witness(&p, &rational(&a0)?)?;
            let text = format!("{}\nvalue: {}", w.matrix, w.value);
            env.emit(&w, &text)
        }
        Cmd::Verify {
            suite,
            n,
            r,
            window,
            samples,
            seed,
        } => {
            let p = Params {
                n,
                r,
                window,
                samples,
                seed,
            };
            let rep = verify::run(&suite, &p).map_err(user)?;
            let text = serde_json::to_string_pretty(&rep).expect("report serializes");
            env.emit(&rep, &text)?;
            if rep.passed {
                Ok(())
            } else {
                Err(Fail::Verification(format!("suite {suite} failed")))
            }
        }
        Cmd::Cache { cmd } => {
            let mut c = ProductCache::open(cache_path)?;
            match cmd {
                CacheCmd::Stats => {
                    let s = c.stats();
                    let text = serde_json::to_string_pretty(&s).expect("stats serialize");
                    env.emit(&s, &text)
                }
                CacheCmd::Clear { n, r } => {
                    let removed = c.clear(n.zip(r))?;
                    env.emit(&removed, &format!("removed {removed} records"))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::User(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
    }
}
