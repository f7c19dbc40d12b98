//! Command-line front end. `dispatch` parses argv, runs one library
//! operation and writes a JSON report (or CSV for trajectories and point
//! clouds).
//!
//! Exit codes: 0 for success, CertifiedYes or Unknown; 1 for CertifiedNo
//! (the witness is in the report); 2 for usage or input errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::certificate::Certificate;
use crate::cones::{inner_approximation, ContainsMode, GeneratedCone, Intersection};
use crate::error::{Error, Result};
use crate::gibbs::{rayleigh_measure_check, GibbsModel};
use crate::levi::{self, LeviSystem};
use crate::linalg::{Matrix, SymMatrix};
use crate::lorentz::{self, ConeTower, MembershipClass};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::realroots::{count_real_roots, is_real_rooted};
use crate::semipositive;
use crate::UniPoly;
use crate::TOOL_VERSION;

/// Largest point cloud `cone region-cloud` will emit.
pub const MAX_CLOUD_POINTS: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "klorentz", version, about = "Cone-Lorentzian certificates, tower cones and LEVI dynamics")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output path; `-` (the default) is standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polynomial utilities.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Lorentzian, hyperbolicity and log-concavity certificates.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Generated cones and derivative-tower cones.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Rayleigh differences.
    #[command(subcommand)]
    Rayleigh(RayleighCmd),
    /// Semipositive matrices and their cones.
    #[command(subcommand)]
    Semipositive(SemipositiveCmd),
    /// Gibbs measures of nonnegative polynomials.
    #[command(subcommand)]
    Gibbs(GibbsCmd),
    /// Cone-constrained LEVI dynamics.
    #[command(subcommand)]
    Levi(LeviCmd),
}

#[derive(Args, Debug, Clone)]
pub struct PolyArg {
    /// Polynomial JSON file.
    #[arg(long)]
    pub poly: String,
}

#[derive(Args, Debug, Clone)]
pub struct TowerArgs {
    #[command(flatten)]
    pub poly: PolyArg,
    /// Direction v as a JSON array.
    #[arg(long)]
    pub dir: String,
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Evaluate at a point.
    Eval {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        x: String,
    },
    /// Coefficients of t ↦ f(x + t v), lowest degree first, and their real-rootedness.
    Taylor {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        x: String,
    },
    /// Directional derivative tower.
    Tower {
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Hessian and its inertia at a point.
    Hessian {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CertifyCmd {
    /// Ultra log-concavity of a bivariate form.
    Ulc {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Hyperbolicity with respect to a direction.
    Hyperbolic {
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// K-Lorentzian check.
    Lorentzian {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        cone: String,
    },
    /// Complete log-concavity on a cone.
    Clc {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        cone: String,
    },
    /// K-Lorentzian check for a quadratic form given by its matrix.
    Quadratic {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        cone: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConeCmd {
    /// Membership in a generated cone.
    Contains {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        x: String,
        /// Exact rational membership instead of the tolerance test.
        #[arg(long)]
        exact: bool,
    },
    /// Euclidean projection onto a generated cone.
    Project {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        z: String,
    },
    /// Pointedness and full-dimensionality.
    Properness {
        #[arg(long)]
        cone: String,
    },
    /// Acuteness of a generated cone with respect to a quadratic form.
    Acute {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        matrix: String,
    },
    /// Membership class in the tower cone K(f, v).
    Membership {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        x: String,
    },
    /// Boundary classification of a point of K(f, v).
    Boundary {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        x: String,
    },
    /// Midpoint search for nonconvexity of K(f, v).
    Convexity {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Whether a generated cone lies inside K(f, v).
    Inclusion {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        cone: String,
    },
    /// Polyhedral inner approximation of K(f, v), optionally intersected with the orthant.
    InnerApprox {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 200)]
        rays: usize,
        #[arg(long)]
        orthant: bool,
    },
    /// Grid of membership classes as CSV `x1,…,xn,class`.
    RegionCloud {
        #[command(flatten)]
        tower: TowerArgs,
        /// Box `[lo, hi]` applied to every coordinate.
        #[arg(long = "box", default_value = "[-2,2]")]
        bounds: String,
        #[arg(long, default_value_t = 200)]
        resolution: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RayleighCmd {
    /// Rayleigh matrix ∇f∇fᵀ − f∇²f at a point.
    Matrix {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        x: String,
    },
    /// The polynomial Δ_{v,w} f.
    Cross {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// Exact check of M_f(x) + f(x)² ∇² log f(x) = 0.
    Identity {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SemipositiveCmd {
    /// Generating polynomial f_A and its hyperbolic direction.
    Poly {
        #[arg(long)]
        matrix: String,
    },
    /// Semipositivity with respect to a cone (default: the orthant).
    Check {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        cone: Option<String>,
    },
    /// Whether A maps a cone into (and onto) itself.
    Preserves {
        #[arg(long)]
        matrix: String,
        /// Defaults to the hyperbolicity cone {x : A x >= 0}.
        #[arg(long)]
        cone: Option<String>,
    },
    /// Generators of {x : A x >= 0} and of the semipositive cone.
    Cones {
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GibbsCmd {
    /// Partition function, mean and covariance at x.
    Stats {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        x: String,
    },
    /// Rayleigh (negative dependence) check on a cone.
    Rayleigh {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        cone: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LeviCmd {
    /// Projected Euler trajectory as CSV `t,x1,…,xn`.
    Simulate {
        #[arg(long)]
        system: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long = "T", default_value_t = 20.0)]
        t_end: f64,
    },
    /// Copositivity of a symmetric matrix on a cone.
    Copositivity {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        cone: String,
    },
    /// Lorentzian ⇒ copositive ⇒ stable chain for a quadratic form.
    Chain {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        cone: String,
    },
    /// Copositivity, Lyapunov and simulation evidence combined.
    Stability {
        #[arg(long)]
        system: String,
        /// Start points as a JSON array of arrays; defaults to the standard starts.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        #[arg(long = "T", default_value_t = 20.0)]
        t_end: f64,
    },
    /// Lyapunov semi-stability with matrix P and sampled Lyapunov conditions.
    Lyapunov {
        #[arg(long)]
        system: String,
        /// Symmetric matrix JSON; defaults to I/2.
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
    },
}

enum Output {
    Json(Value, i32),
    Text(String, i32),
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let (text, code) = match out {
                Output::Json(v, code) => (serde_json::to_string_pretty(&v).expect("reports serialize") + "\n", code),
                Output::Text(s, code) => (s, code),
            };
            match write_out(&cli.config.out, &text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn write_out(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(|e| Error::InvalidInput(format!("stdout: {e}")))
    } else {
        std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

fn load_poly(p: &PolyArg) -> Result<Polynomial> {
    Polynomial::from_json_str(&read(&p.poly)?).map_err(|e| prefix("--poly", e))
}

fn load_matrix(path: &str) -> Result<Matrix> {
    crate::error::parse_json("--matrix", &read(path)?)
}

fn load_sym(flag: &str, path: &str) -> Result<SymMatrix> {
    crate::error::parse_json(flag, &read(path)?)
}

/// A cone JSON file, or `orthant:N`.
fn load_cone(arg: &str) -> Result<GeneratedCone> {
    if let Some(n) = arg.strip_prefix("orthant:") {
        let n: usize = n.parse().map_err(|_| Error::InvalidInput(format!("--cone: bad orthant dimension {n:?}")))?;
        if n == 0 {
            return Err(Error::InvalidInput("--cone: orthant dimension must be positive".into()));
        }
        return Ok(GeneratedCone::orthant(n));
    }
    GeneratedCone::from_json_str(&read(arg)?).map_err(|e| prefix("--cone", e))
}

fn load_system(path: &str) -> Result<LeviSystem> {
    LeviSystem::from_json_str(&read(path)?).map_err(|e| prefix("--system", e))
}

fn prefix(flag: &str, e: Error) -> Error {
    Error::InvalidInput(format!("{flag}: {}", crate::error::bare_message(e)))
}

fn json_array(flag: &str, s: &str) -> Result<Vec<Value>> {
    match serde_json::from_str::<Value>(s) {
        Ok(Value::Array(a)) => Ok(a),
        Ok(_) => Err(Error::InvalidInput(format!("{flag} must be a JSON array"))),
        Err(e) => Err(Error::InvalidInput(format!("{flag}: {e}"))),
    }
}

fn rational_vec(flag: &str, s: &str) -> Result<Vec<Rational>> {
    json_array(flag, s)?
        .iter()
        .enumerate()
        .map(|(i, v)| rational::from_json(v).map_err(|e| Error::InvalidInput(format!("{flag}[{i}]: {e}"))))
        .collect()
}

fn float_vec(flag: &str, v: &[Value]) -> Result<Vec<f64>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::InvalidInput(format!("{flag}[{i}] is not a number"))),
            other => rational::from_json(other)
                .map(|r| rational::to_f64(&r))
                .map_err(|e| Error::InvalidInput(format!("{flag}[{i}]: {e}"))),
        })
        .collect()
}

fn floats(flag: &str, s: &str) -> Result<Vec<f64>> {
    float_vec(flag, &json_array(flag, s)?)
}

fn tower(t: &TowerArgs) -> Result<ConeTower> {
    ConeTower::new(load_poly(&t.poly)?, rational_vec("--dir", &t.dir)?)
}

fn strs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(rational::format(x))).collect())
}

fn rows(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| strs(r)).collect())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn poly_value(p: &Polynomial) -> Value {
    serde_json::from_str(&p.to_json_string()).expect("polynomial JSON round-trips")
}

fn report(cfg: &RunConfig, command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("samples".into(), json!(cfg.samples));
    m.insert("tol".into(), json!(cfg.tol));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn certificate(cfg: &RunConfig, command: &str, c: &Certificate, extra: Value) -> Output {
    let mut body = Map::new();
    body.insert("certificate".into(), to_value(c));
    if let Value::Object(e) = extra {
        body.extend(e);
    }
    Output::Json(report(cfg, command, Value::Object(body)), i32::from(c.is_no()))
}

fn run(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    let ok = |command: &str, body: Value| Ok(Output::Json(report(cfg, command, body), 0));
    match &cli.command {
        Command::Poly(cmd) => match cmd {
            PolyCmd::Eval { poly, x } => {
                let f = load_poly(poly)?;
                let v = f.eval(&rational_vec("--x", x)?)?;
                ok("poly eval", json!({ "value": rational::format(&v) }))
            }
            PolyCmd::Taylor { tower, x } => {
                let f = load_poly(&tower.poly)?;
                let c = f.restriction_taylor(&rational_vec("--x", x)?, &rational_vec("--dir", &tower.dir)?)?;
                let u = UniPoly::new(c.clone());
                let (rooted, roots) = if u.is_zero() { (true, 0) } else { (is_real_rooted(&u)?, count_real_roots(&u)?) };
                ok("poly taylor", json!({ "coefficients": strs(&c), "real_rooted": rooted, "distinct_real_roots": roots }))
            }
            PolyCmd::Tower { tower: t } => {
                let t = tower(t)?;
                ok("poly tower", json!({ "levels": t.levels().iter().map(poly_value).collect::<Vec<_>>() }))
            }
            PolyCmd::Hessian { poly, x } => {
                let h = load_poly(poly)?.hessian(&rational_vec("--x", x)?)?;
                ok("poly hessian", json!({ "hessian": rows(h.as_matrix()), "inertia": to_value(&h.inertia()) }))
            }
        },
        Command::Certify(cmd) => match cmd {
            CertifyCmd::Ulc { poly } => {
                let u = lorentz::ulc_bivariate(&load_poly(poly)?)?;
                Ok(Output::Json(report(cfg, "certify ulc", json!({ "ulc": u })), i32::from(!u)))
            }
            CertifyCmd::Hyperbolic { tower } => {
                let f = load_poly(&tower.poly)?;
                let e = rational_vec("--dir", &tower.dir)?;
                let c = lorentz::hyperbolicity_check(&f, &e, cfg.samples, cfg.seed)?;
                Ok(certificate(cfg, "certify hyperbolic", &c, json!({})))
            }
            CertifyCmd::Lorentzian { poly, cone } => {
                let c = lorentz::k_lorentzian_check(&load_poly(poly)?, &load_cone(cone)?, cfg.samples, cfg.seed)?;
                Ok(certificate(cfg, "certify lorentzian", &c, json!({})))
            }
            CertifyCmd::Clc { poly, cone } => {
                let c = lorentz::clc_check(&load_poly(poly)?, &load_cone(cone)?, cfg.samples, cfg.seed)?;
                Ok(certificate(cfg, "certify clc", &c, json!({})))
            }
            CertifyCmd::Quadratic { matrix, cone } => {
                let c = lorentz::quadratic_lorentzian(&load_sym("--matrix", matrix)?, &load_cone(cone)?, cfg.seed)?;
                Ok(certificate(cfg, "certify quadratic", &c, json!({})))
            }
        },
        Command::Cone(cmd) => run_cone(cfg, cmd),
        Command::Rayleigh(cmd) => match cmd {
            RayleighCmd::Matrix { poly, x } => {
                let m = lorentz::rayleigh_matrix(&load_poly(poly)?, &rational_vec("--x", x)?)?;
                ok("rayleigh matrix", json!({ "matrix": rows(m.as_matrix()), "inertia": to_value(&m.inertia()) }))
            }
            RayleighCmd::Cross { poly, v, w } => {
                let p = lorentz::rayleigh_cross_poly(&load_poly(poly)?, &rational_vec("--v", v)?, &rational_vec("--w", w)?)?;
                ok("rayleigh cross", json!({ "polynomial": poly_value(&p) }))
            }
            RayleighCmd::Identity { poly, x } => {
                let r = lorentz::log_hessian_identity_check(&load_poly(poly)?, &rational_vec("--x", x)?)?;
                ok("rayleigh identity", json!({ "max_residual": rational::format(&r), "holds": num_traits::Zero::is_zero(&r) }))
            }
        },
        Command::Semipositive(cmd) => run_semipositive(cfg, cmd),
        Command::Gibbs(cmd) => match cmd {
            GibbsCmd::Stats { poly, x } => {
                let m = GibbsModel::new(load_poly(poly)?)?;
                let x = rational_vec("--x", x)?;
                let z = m.partition(&x)?;
                let mean = m.mean(&x)?;
                let cov = m.covariance(&x)?;
                ok(
                    "gibbs stats",
                    json!({
                        "partition": rational::format(&z),
                        "mean": strs(&mean),
                        "covariance": rows(cov.as_matrix()),
                        "multi_affine": m.is_multi_affine(),
                    }),
                )
            }
            GibbsCmd::Rayleigh { poly, cone } => {
                let m = GibbsModel::new(load_poly(poly)?)?;
                let c = rayleigh_measure_check(&m, &load_cone(cone)?, cfg.samples, cfg.seed)?;
                Ok(certificate(cfg, "gibbs rayleigh", &c, json!({})))
            }
        },
        Command::Levi(cmd) => run_levi(cfg, cmd),
    }
}

fn run_cone(cfg: &RunConfig, cmd: &ConeCmd) -> Result<Output> {
    let ok = |command: &str, body: Value| Ok(Output::Json(report(cfg, command, body), 0));
    match cmd {
        ConeCmd::Contains { cone, x, exact } => {
            let k = load_cone(cone)?;
            let inside = if *exact {
                k.contains(&rational_vec("--x", x)?, ContainsMode::Exact)?
            } else {
                k.contains_f64(&floats("--x", x)?, cfg.tol)?
            };
            ok("cone contains", json!({ "contains": inside, "exact": exact }))
        }
        ConeCmd::Project { cone, z } => {
            let p = load_cone(cone)?.project(&floats("--z", z)?)?;
            ok("cone project", json!({ "projection": p }))
        }
        ConeCmd::Properness { cone } => {
            let f = load_cone(cone)?.properness();
            ok("cone properness", json!({ "pointed": f.pointed, "full_dimensional": f.full_dimensional, "proper": f.proper() }))
        }
        ConeCmd::Acute { cone, matrix } => {
            let c = load_cone(cone)?.acute_wrt(&load_sym("--matrix", matrix)?, cfg.seed)?;
            Ok(certificate(cfg, "cone acute", &c, json!({})))
        }
        ConeCmd::Membership { tower: t, x } => {
            let t = tower(t)?;
            let x = rational_vec("--x", x)?;
            let class = lorentz::tower_membership(&t, &x)?;
            ok("cone membership", json!({ "class": to_value(&class), "values": strs(&t.values(&x)?) }))
        }
        ConeCmd::Boundary { tower: t, x } => {
            let entries = lorentz::boundary_classify(&tower(t)?, &rational_vec("--x", x)?)?;
            ok("cone boundary", json!({ "levels": to_value(&entries) }))
        }
        ConeCmd::Convexity { tower: t, trials } => {
            let c = lorentz::convexity_falsifier(&tower(t)?, *trials, cfg.seed);
            Ok(certificate(cfg, "cone convexity", &c, json!({ "trials": trials })))
        }
        ConeCmd::Inclusion { tower: t, cone } => {
            let t = tower(t)?;
            let k = load_cone(cone)?;
            let w = lorentz::inclusion_witness(&k, &t)?;
            let body = json!({ "included": w.is_none(), "witness": w.as_deref().map(strs) });
            Ok(Output::Json(report(cfg, "cone inclusion", body), i32::from(w.is_some())))
        }
        ConeCmd::InnerApprox { tower: t, rays, orthant } => {
            let t = tower(t)?;
            let approx = if *orthant {
                let o = GeneratedCone::orthant(t.nvars());
                inner_approximation(&Intersection(&t, &o), *rays, cfg.seed)?
            } else {
                inner_approximation(&t, *rays, cfg.seed)?
            };
            ok(
                "cone inner-approx",
                json!({
                    "cone": to_value(&approx.cone),
                    "rays_requested": rays,
                    "rays_kept": approx.rays_kept,
                    "attempts": approx.attempts,
                }),
            )
        }
        ConeCmd::RegionCloud { tower: t, bounds, resolution } => {
            let t = tower(t)?;
            let b = rational_vec("--box", bounds)?;
            if b.len() != 2 {
                return Err(Error::InvalidInput("--box must be [lo, hi]".into()));
            }
            let csv = region_cloud(&t, &b[0], &b[1], *resolution)?;
            Ok(Output::Text(csv, 0))
        }
    }
}

/// Grid points of `[lo, hi]^n` with `resolution` points per axis, labelled
/// by membership class. A box with `lo >= hi` is empty.
pub fn region_cloud(t: &ConeTower, lo: &Rational, hi: &Rational, resolution: u64) -> Result<String> {
    let n = t.nvars();
    let mut out = (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",") + ",class\n";
    if resolution < 2 {
        return Err(Error::Precondition("resolution must be at least 2".into()));
    }
    let total = u32::try_from(n).ok().and_then(|n| resolution.checked_pow(n));
    if total.is_none_or(|p| p > MAX_CLOUD_POINTS) {
        return Err(Error::InvalidInput(format!("grid of {resolution}^{n} points exceeds {MAX_CLOUD_POINTS}")));
    }
    if lo >= hi {
        return Ok(out);
    }
    let step = (hi - lo) / rational::int(resolution as i64 - 1);
    let axis: Vec<Rational> = (0..resolution).map(|i| lo + &step * rational::int(i as i64)).collect();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<Rational> = idx.iter().map(|&i| axis[i].clone()).collect();
        let class = match t.membership(&x)? {
            MembershipClass::InteriorOpen => "InteriorOpen",
            MembershipClass::ClosedOnly => "ClosedOnly",
            MembershipClass::Outside => "Outside",
        };
        for v in &x {
            out.push_str(&rational::to_f64(v).to_string());
            out.push(',');
        }
        out.push_str(class);
        out.push('\n');
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn run_semipositive(cfg: &RunConfig, cmd: &SemipositiveCmd) -> Result<Output> {
    let ok = |command: &str, body: Value| Ok(Output::Json(report(cfg, command, body), 0));
    match cmd {
        SemipositiveCmd::Poly { matrix } => {
            let m = semipositive::SemipositiveModel::new(load_matrix(matrix)?)?;
            ok(
                "semipositive poly",
                json!({ "polynomial": poly_value(m.generating_polynomial()), "direction": strs(m.direction()) }),
            )
        }
        SemipositiveCmd::Check { matrix, cone } => {
            let a = load_matrix(matrix)?;
            let k = match cone {
                Some(c) => load_cone(c)?,
                None => GeneratedCone::orthant(a.cols()),
            };
            let c = semipositive::is_semipositive(&a, &k, cfg.samples, cfg.seed)?;
            Ok(certificate(cfg, "semipositive check", &c, json!({})))
        }
        SemipositiveCmd::Preserves { matrix, cone } => {
            let a = load_matrix(matrix)?;
            let k = match cone {
                Some(c) => load_cone(c)?,
                None => semipositive::hyperbolicity_cone(&a)?,
            };
            let p = semipositive::preserves_cone(&a, &k)?;
            if !p.equality {
                eprintln!(
                    "note: A(K) = K does not hold for this matrix and cone (A(K) ⊆ K: {}); reporting the computed result",
                    p.forward
                );
            }
            ok("semipositive preserves", json!({ "forward": p.forward, "equality": p.equality, "cone": to_value(&k) }))
        }
        SemipositiveCmd::Cones { matrix } => {
            let a = load_matrix(matrix)?;
            ok(
                "semipositive cones",
                json!({
                    "hyperbolicity_cone": to_value(&semipositive::hyperbolicity_cone(&a)?),
                    "semipositive_cone": to_value(&semipositive::semipositive_cone(&a)?),
                }),
            )
        }
    }
}

fn run_levi(cfg: &RunConfig, cmd: &LeviCmd) -> Result<Output> {
    match cmd {
        LeviCmd::Simulate { system, x0, h, t_end } => {
            let sys = load_system(system)?;
            let traj = levi::simulate(&sys, &floats("--x0", x0)?, *h, *t_end)?;
            if cfg.out != "-" {
                let last = traj.final_state();
                println!(
                    "{}",
                    json!({
                        "tool_version": TOOL_VERSION,
                        "steps": traj.states.len() - 1,
                        "final_state": last,
                        "final_norm": crate::linalg::norm(last),
                        "seed": cfg.seed,
                        "samples": cfg.samples,
                        "tol": cfg.tol,
                    })
                );
            }
            Ok(Output::Text(traj.to_csv(), 0))
        }
        LeviCmd::Copositivity { matrix, cone } => {
            let c = levi::copositivity(&load_sym("--matrix", matrix)?, &load_cone(cone)?, cfg.samples, cfg.seed)?;
            Ok(certificate(cfg, "levi copositivity", &c, json!({})))
        }
        LeviCmd::Chain { matrix, cone } => {
            let r = levi::quadratic_lorentzian_implies_stable(&load_sym("--matrix", matrix)?, &load_cone(cone)?, cfg.seed)?;
            Ok(Output::Json(report(cfg, "levi chain", to_value(&r)), 0))
        }
        LeviCmd::Stability { system, x0, h, t_end } => {
            let sys = load_system(system)?;
            let starts = match x0 {
                Some(s) => json_array("--x0", s)?
                    .iter()
                    .enumerate()
                    .map(|(i, v)| match v {
                        Value::Array(a) => float_vec(&format!("--x0[{i}]"), a),
                        _ => Err(Error::InvalidInput(format!("--x0[{i}] must be an array"))),
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => levi::standard_starts(sys.cone()),
            };
            let r = levi::stability_experiment(&sys, &starts, *h, *t_end, cfg.samples, cfg.seed)?;
            let code = i32::from(r.verdict == levi::Verdict::UnstableWitness);
            Ok(Output::Json(report(cfg, "levi stability", to_value(&r)), code))
        }
        LeviCmd::Lyapunov { system, p, sigma, lambda } => {
            let sys = load_system(system)?;
            let p = match p {
                Some(path) => load_sym("--p", path)?,
                None => SymMatrix::identity(sys.dim()).scale(&rational::frac(1, 2)),
            };
            let semi = levi::lyapunov_semistability_check(sys.matrix(), &p, sys.cone(), cfg.samples, cfg.seed)?;
            let cond = levi::lyapunov_condition_check(&sys, &p, *sigma, *lambda, cfg.samples, cfg.seed)?;
            let code = i32::from(semi.is_no() || cond.is_no());
            let body = json!({ "semistability": to_value(&semi), "conditions": to_value(&cond) });
            Ok(Output::Json(report(cfg, "levi lyapunov", body), code))
        }
    }
}
