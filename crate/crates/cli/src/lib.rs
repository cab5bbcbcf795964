//! Command-line front end: argument parsing, report rendering and exit codes.
//!
//! [`run`] does all the work and returns what would be written, so tests can
//! drive the CLI without spawning a process.

pub mod render;
pub mod report;

use std::f64::consts::PI;
use std::fmt::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use fuchsian::curves::{curve_from_degree, CurveSpec, Sign};
use fuchsian::embed::genus_range;
use fuchsian::fode::{named_equation, paper_curve_equation, NamedEquation};
use fuchsian::hyperbolic::{regular_polygon_area, tessellation_topology, Tessellation};
use fuchsian::moebius::{ExtComplex, TransformClass};
use fuchsian::uniformize::{fixed_point_radius, uniformize_from, UniformizationResult};

use report::{to_canonical_json, OdeDocument, ReportDocument, TessellationDocument, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What a CLI invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fuchsian", version, about = "Fuchsian uniformization of y^2 = z^n -+ 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Side transformations, generators and verification report for one curve
    Uniformize(UniformizeArgs),
    /// Genus bounds of 2-cell embeddings of K_{m,n}
    GenusRange { m: u32, n: u32 },
    /// Area and topology of a regular {p,q} tessellation
    Tessellation(TessellationArgs),
    /// Fuchsian differential equations
    #[command(subcommand)]
    Ode(OdeCommand),
    /// Run the consistency checks for one curve
    Verify {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
    Svg,
}

#[derive(Debug, Args)]
struct UniformizeArgs {
    #[arg(long)]
    degree: u32,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    sign: SignArg,
    /// 1-based index of the side multiplied into the others
    #[arg(long, default_value_t = 1)]
    base: usize,
    /// Divide generators by a^2 - 1 so they have determinant 1
    #[arg(long)]
    normalize: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal places in JSON and table output
    #[arg(long, default_value_t = 7)]
    precision: usize,
    /// Projective tolerance for identity and duplicate detection
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Also report the genus range of K_{M,N}
    #[arg(long, value_name = "M,N", value_parser = parse_pair)]
    channel: Option<(u32, u32)>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct TessellationArgs {
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, value_name = "P,Q", value_parser = parse_pair)]
    pq: Option<(u32, u32)>,
}

#[derive(Debug, Subcommand)]
enum OdeCommand {
    /// The tabulated equation attached to y^2 = z^n - 1 (degrees 5 to 8)
    Build {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_complex, default_value = "0,0")]
        k1: Complex64,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_complex, default_value = "0,0")]
        k2: Complex64,
        #[arg(long, default_value_t = 7)]
        precision: usize,
    },
    /// Classify the singular points of a classical equation
    Classify {
        #[arg(long)]
        named: String,
        /// Parameters in order, each RE or RE,IM
        #[arg(long, num_args = 0.., allow_hyphen_values = true, value_parser = parse_complex)]
        params: Vec<Complex64>,
        #[arg(long, default_value_t = 7)]
        precision: usize,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two integers as A,B, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(p(re)?, p(im)?)),
        None => Ok(Complex64::new(p(s)?, 0.0)),
    }
}

/// Parses `args` (without the program name) and executes the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("fuchsian")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.command {
        Command::Uniformize(a) => cmd_uniformize(a),
        Command::GenusRange { m, n } => match genus_range(m, n) {
            Ok(g) => Outcome::ok(format!("{g}\n")),
            Err(e) => Outcome::usage(e),
        },
        Command::Tessellation(a) => cmd_tessellation(a),
        Command::Ode(c) => cmd_ode(c),
        Command::Verify { degree, sign, tolerance } => cmd_verify(degree, sign.into(), tolerance),
    }
}

fn curve_and_result(
    degree: u32,
    sign: Sign,
    base: usize,
    normalize: bool,
    tol: f64,
) -> Result<(CurveSpec, UniformizationResult), Outcome> {
    let c = curve_from_degree(degree, sign).map_err(Outcome::usage)?;
    let r = uniformize_from(&c, base, normalize, tol).map_err(Outcome::usage)?;
    Ok((c, r))
}

fn cmd_uniformize(a: UniformizeArgs) -> Outcome {
    let (_, r) = match curve_and_result(a.degree, a.sign.into(), a.base, a.normalize, a.tolerance) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let channel = match a.channel {
        Some((m, n)) => match genus_range(m, n) {
            Ok(g) => Some((m, n, g)),
            Err(e) => return Outcome::usage(e),
        },
        None => None,
    };
    Outcome::ok(match a.format {
        Format::Json => to_canonical_json(&ReportDocument::new(&r, channel), a.precision),
        Format::Table => render::table(&r, a.precision),
        Format::Svg => render::svg(&r),
    })
}

fn cmd_tessellation(a: TessellationArgs) -> Outcome {
    let t = match (a.degree, a.pq) {
        (Some(n), _) => match curve_from_degree(n, Sign::Minus) {
            Ok(c) => fuchsian::curves::tessellation_for_curve(&c),
            Err(e) => return Outcome::usage(e),
        },
        (None, Some((p, q))) => match Tessellation::new(p, q) {
            Ok(t) => t,
            Err(e) => return Outcome::usage(e),
        },
        (None, None) => return Outcome::usage("one of --degree or --pq is required"),
    };
    let area = match regular_polygon_area(&t) {
        Ok(a) => a,
        Err(e) => return Outcome::usage(e),
    };
    let doc = TessellationDocument {
        schema_version: SCHEMA_VERSION,
        tessellation: (&t).into(),
        hyperbolic: fuchsian::hyperbolic::tessellation_valid(&t),
        area: area.value,
        euclidean_limit: area.euclidean_limit,
        topology: tessellation_topology(&t).ok().as_ref().map(Into::into),
    };
    Outcome::ok(to_canonical_json(&doc, 7))
}

fn cmd_ode(c: OdeCommand) -> Outcome {
    match c {
        OdeCommand::Build { degree, k1, k2, precision } => {
            let curve = match curve_from_degree(degree, Sign::Minus) {
                Ok(c) => c,
                Err(e) => return Outcome::usage(e),
            };
            match paper_curve_equation(&curve, k1, k2) {
                Ok(ode) => Outcome::ok(to_canonical_json(&OdeDocument::new(curve.to_string(), &ode), precision)),
                Err(e) => Outcome::usage(e),
            }
        }
        OdeCommand::Classify { named, params, precision } => {
            let name: NamedEquation = match named.parse() {
                Ok(n) => n,
                Err(e) => return Outcome::usage(e),
            };
            match named_equation(name, &params) {
                Ok(ode) => Outcome::ok(to_canonical_json(&OdeDocument::new(name.to_string(), &ode), precision)),
                Err(e) => Outcome::usage(e),
            }
        }
    }
}

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn cmd_verify(degree: u32, sign: Sign, tol: f64) -> Outcome {
    let (c, r) = match curve_and_result(degree, sign, 1, true, tol) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let v = &r.verification;
    let mut checks = Vec::new();

    let worst = v.involution_residuals.iter().copied().fold(0.0, f64::max);
    checks.push(Check { name: "involutions", ok: v.all_sides_involutive, detail: format!("max residual {worst:.1e}") });

    // flagged generators are reported below, not counted against hyperbolicity
    let mut min_t2 = f64::INFINITY;
    let mut hyperbolic = true;
    for (g, (class, &t2)) in r.generators.iter().zip(v.classes.iter().zip(&v.trace_squared)) {
        let flagged = v.identity_indices.contains(&g.partner) || v.duplicate_pairs.iter().any(|&(_, b)| b == g.partner);
        if flagged {
            continue;
        }
        hyperbolic &= *class == TransformClass::Hyperbolic && t2 > 4.0 + 1e-6;
        min_t2 = min_t2.min(t2);
    }
    checks.push(Check { name: "hyperbolicity", ok: hyperbolic, detail: format!("min tr^2 {min_t2:.7}") });

    let rho = fixed_point_radius(&r.params);
    let step = 2.0 * PI * r.params.alpha.value();
    let mut spread: f64 = 0.0;
    let mut spacing: f64 = 0.0;
    let mut fixed_ok = true;
    let mut interior = Vec::new();
    for s in &r.side_transforms {
        let z =
            s.fixed_points().ok().and_then(|f| f.into_iter().filter_map(ExtComplex::finite).find(|z| z.norm() < 1.0));
        match z {
            Some(z) => {
                spread = spread.max((z.norm() - rho).abs());
                interior.push(z);
            }
            None => fixed_ok = false,
        }
    }
    for w in interior.windows(2) {
        let diff = ((w[1] / w[0]).arg() - step).rem_euclid(2.0 * PI);
        spacing = spacing.max(diff.min(2.0 * PI - diff));
    }
    fixed_ok &= spread < 1e-9 && spacing < 1e-9;
    checks.push(Check {
        name: "fixed points",
        ok: fixed_ok,
        detail: format!("radius {rho:.7}, spread {spread:.1e}, spacing error {spacing:.1e}"),
    });

    let topo = r.topology;
    checks.push(Check {
        name: "topology",
        ok: topo.genus == c.genus as i64 && topo.euler_characteristic == 2 - 2 * c.genus as i64,
        detail: format!(
            "{} gives V={} E={} F={} chi={} genus {}",
            r.tessellation, topo.vertices, topo.edges, topo.faces, topo.euler_characteristic, topo.genus
        ),
    });

    let want_area = 4.0 * PI * (c.genus as f64 - 1.0);
    checks.push(Check {
        name: "area",
        ok: (r.area - want_area).abs() < 1e-9,
        detail: format!("{:.7} = 4pi(g-1)", r.area),
    });

    let mut out = String::new();
    let _ = writeln!(out, "verify {c}");
    for ch in &checks {
        let _ = writeln!(out, "{} {:<14} {}", if ch.ok { "PASS" } else { "FAIL" }, ch.name, ch.detail);
    }
    for (name, res) in &v.relation_residuals {
        let _ = writeln!(out, "info relation {name} residual {res:.3e}");
    }
    if v.is_degenerate() {
        let _ = writeln!(out, "WARNING degenerate generator set");
        for i in &v.identity_indices {
            let _ = writeln!(out, "  S{}S{i} is the identity", r.base_index);
        }
        for (a, b) in &v.duplicate_pairs {
            let _ = writeln!(out, "  S{0}S{a} and S{0}S{b} coincide", r.base_index);
        }
        let distinct = r.generators.len() - v.identity_indices.len() - v.duplicate_pairs.len();
        let _ = writeln!(out, "  {distinct} distinct non-trivial generators out of {}", r.generators.len());
    }
    let failed = checks.iter().any(|c| !c.ok);
    Outcome { code: if failed { EXIT_VERIFY_FAILED } else { EXIT_OK }, stdout: out, stderr: String::new() }
}
