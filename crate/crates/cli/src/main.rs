//! Command-line interface: exact circle combinatorics, censuses, monodromy,
//! quadratic-tower continuation, the link-condition checker, polynomial
//! dynamics, and SVG rendering.
//!
//! Exit codes: 0 success, 1 usage error, 2 mathematically degenerate input
//! or domain error, 3 internal assertion failure (always a bug or a
//! falsified structural claim).

use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use shiftlab::angle::{Angle, Height};
use shiftlab::dynlam::{generate, validate_critical_set, CriticalSet};
use shiftlab::leaf::{validate_elamination, Leaf};
use shiftlab::monodromy::{report_to_json, rotation_data, track};
use shiftlab::render::{render_elamination, render_pinched_disk, RenderSpec};
use shiftlab::sausage::{continue_loop, marked_lengths, orbit_sizes, tower_build, Selection};
use shiftlab::taut::{companion, taut_census, taut_leaves, t_invariance_check, Side};
use shiftlab::Error;

#[derive(Parser)]
#[command(name = "shiftlab", version, about = "exact laboratory for circle laminations and the cubic shift locus", disable_help_subcommand = true)]
struct Cli {
    /// Worker threads for the parallel lanes (env: BLAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a leaf system as an elamination
    Validate(ValidateArgs),
    /// Dynamical elamination generator
    #[command(subcommand)]
    Dynlam(DynlamCmd),
    /// Tautological elamination: leaves, censuses, invariance
    #[command(subcommand)]
    Taut(TautCmd),
    /// Fiber monodromy: track components over one parameter loop
    Monodromy(MonodromyArgs),
    /// Quadratic towers and loop continuation
    #[command(subcommand)]
    Sausage(SausageCmd),
    /// Link-condition (girth) checks for the regular-value complexes
    #[command(subcommand)]
    Cat0(Cat0Cmd),
    /// Numeric polynomial dynamics
    #[command(subcommand)]
    Poly(PolyCmd),
    /// SVG rendering of laminations and pinched disks
    Render(RenderArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Leaf as "angles=a1,a2,...;height=h" (repeatable)
    #[arg(long = "leaf", required = true)]
    leaves: Vec<String>,
    /// Also validate as a degree-d critical set
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum DynlamCmd {
    /// Generate the dynamical elamination of a critical set
    Gen(DynlamGenArgs),
}

#[derive(Args)]
struct DynlamGenArgs {
    #[arg(long)]
    degree: u32,
    /// Leaf as "angles=a1,a2,...;height=h" (repeatable)
    #[arg(long = "leaf", required = true)]
    leaves: Vec<String>,
    #[arg(long)]
    depth: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum TautCmd {
    /// Leaves of the tautological elamination
    Leaves(TautLeavesArgs),
    /// Component-length censuses per depth (CSV n,ell,count)
    Census(TautCensusArgs),
    /// Census invariance across base parameters
    Invariance(TautInvarianceArgs),
    /// Companion collision parameter of s0 at depth n
    Companion(TautCompanionArgs),
}

#[derive(Args)]
struct TautLeavesArgs {
    #[arg(long)]
    t: String,
    #[arg(long)]
    depth: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TautCensusArgs {
    #[arg(long)]
    t: String,
    #[arg(long)]
    depth: u32,
    /// CSV output path ("-" for stdout)
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Args)]
struct TautInvarianceArgs {
    /// Base parameters (repeatable)
    #[arg(long = "t", required = true)]
    ts: Vec<String>,
    #[arg(long)]
    depth: u32,
}

#[derive(Args)]
struct TautCompanionArgs {
    #[arg(long)]
    t: String,
    #[arg(long)]
    s0: String,
    #[arg(long)]
    depth: u32,
    /// Approach side: below or above
    #[arg(long, default_value = "below")]
    side: String,
}

#[derive(Args)]
struct MonodromyArgs {
    #[arg(long)]
    t: String,
    #[arg(long)]
    depth: u32,
    /// Output format for the report (json)
    #[arg(long, default_value = "json")]
    report: String,
    /// Also compute depth+1 tracking and per-orbit rotation numbers
    #[arg(long)]
    cables: bool,
}

#[derive(Subcommand)]
enum SausageCmd {
    /// Continue every tower point around the base loop, report orbits
    Orbits(SausageOrbitsArgs),
}

#[derive(Args)]
struct SausageOrbitsArgs {
    /// Chain selections, comma separated: c, -2c, 0 or point ids
    #[arg(long)]
    chain: Option<String>,
    /// Base point, e.g. 0.7+0.1i
    #[arg(long, default_value = "0.7+0.1i")]
    c0: String,
    #[arg(long)]
    depth: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cat0Cmd {
    /// Girth of the link of the presentation complex for n marked values
    Check(Cat0CheckArgs),
}

#[derive(Args)]
struct Cat0CheckArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Normalize, classify and extract critical data of a polynomial
    Analyze(PolyAnalyzeArgs),
}

#[derive(Args)]
struct PolyAnalyzeArgs {
    /// Coefficients from the leading term, comma separated (complex "a+bi" allowed)
    #[arg(long)]
    coeffs: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    t: String,
    #[arg(long)]
    depth: u32,
    /// lamination | disk
    #[arg(long, default_value = "lamination")]
    kind: String,
    /// Output path ("-" for stdout)
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, default_value_t = 800)]
    size: u32,
}

fn parse_leaf(s: &str) -> Result<Leaf, Error> {
    let mut angles: Option<Vec<Angle>> = None;
    let mut height: Option<Height> = None;
    for part in s.split(';') {
        match part.trim().split_once('=') {
            Some(("angles", v)) => {
                angles = Some(
                    v.split(',')
                        .map(|a| Angle::from_str(a.trim()))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            Some(("height", v)) => height = Some(Height::from_str(v.trim())?),
            _ => {
                return Err(Error::DegenerateParameter(format!(
                    "bad leaf spec '{s}': expected angles=..;height=.."
                )))
            }
        }
    }
    match (angles, height) {
        (Some(a), Some(h)) => Leaf::new(a, h),
        _ => Err(Error::DegenerateParameter(format!(
            "leaf spec '{s}' needs both angles= and height="
        ))),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let s = s.trim().replace(' ', "");
    let bad = || Error::DegenerateParameter(format!("cannot parse complex number '{s}'"));
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    let body = s.strip_suffix('i').ok_or_else(bad)?;
    // split at the sign of the imaginary part, skipping a leading sign
    let split = body[1..]
        .rfind(['+', '-'])
        .map(|i| i + 1)
        .ok_or_else(bad)?;
    let (re, im) = body.split_at(split);
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = match im {
        "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn emit(path: &str, data: &str) -> std::io::Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(data.as_bytes())?;
        if !data.ends_with('\n') {
            out.write_all(b"\n")?;
        }
    } else {
        std::fs::write(path, data)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Validate(a) => {
            let leaves =
                a.leaves.iter().map(|s| parse_leaf(s)).collect::<Result<Vec<_>, _>>()?;
            let violations = validate_elamination(&leaves);
            let crit = a.degree.map(|d| validate_critical_set(&leaves, d));
            if a.json {
                let v = serde_json::json!({
                    "leaves": leaves.len(),
                    "violations": violations.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "critical_violations": crit
                        .as_ref()
                        .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else if violations.is_empty() && crit.as_ref().map_or(true, |c| c.is_empty()) {
                println!("ok");
            } else {
                for v in &violations {
                    println!("violation: {v}");
                }
                for v in crit.iter().flatten() {
                    println!("critical-set violation: {v}");
                }
            }
            Ok(0)
        }
        Cmd::Dynlam(DynlamCmd::Gen(a)) => {
            let leaves =
                a.leaves.iter().map(|s| parse_leaf(s)).collect::<Result<Vec<_>, _>>()?;
            let cset = CriticalSet::new(leaves, a.degree)?;
            let built = generate(&cset, a.depth)?;
            let all = built.all_leaves();
            if a.json {
                let v = serde_json::Value::Array(all.iter().map(|l| l.to_json()).collect());
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                for l in &all {
                    println!("{l:?}");
                }
            }
            Ok(0)
        }
        Cmd::Taut(TautCmd::Leaves(a)) => {
            let t = Angle::from_str(&a.t)?;
            let tl = taut_leaves(&t, a.depth)?;
            if a.json {
                let v = serde_json::Value::Array(
                    tl.leaves.iter().map(|l| l.to_leaf().to_json()).collect(),
                );
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                for l in &tl.leaves {
                    println!(
                        "depth {} chord {{{}, {}}} params ({}, {})",
                        l.depth, l.a_tip, l.b_tip, l.params.0, l.params.1
                    );
                }
            }
            Ok(0)
        }
        Cmd::Taut(TautCmd::Census(a)) => {
            let t = Angle::from_str(&a.t)?;
            let censuses = taut_census(&t, a.depth)?;
            let mut csv = String::from("n,ell,count\n");
            for c in &censuses {
                for row in c.csv_rows() {
                    csv.push_str(&row);
                    csv.push('\n');
                }
            }
            emit(a.csv.as_deref().unwrap_or("-"), &csv)
                .map_err(|e| Error::InternalAssertion(e.to_string()))?;
            Ok(0)
        }
        Cmd::Taut(TautCmd::Invariance(a)) => {
            let ts = a
                .ts
                .iter()
                .map(|s| Angle::from_str(s))
                .collect::<Result<Vec<_>, _>>()?;
            let rep = t_invariance_check(&ts, a.depth)?;
            if rep.ok {
                println!("censuses identical for all {} parameters", ts.len());
                Ok(0)
            } else {
                for m in &rep.mismatches {
                    println!("mismatch: {m}");
                }
                Err(Error::StructureViolation("census invariance failed".into()))
            }
        }
        Cmd::Taut(TautCmd::Companion(a)) => {
            let t = Angle::from_str(&a.t)?;
            let s0 = Angle::from_str(&a.s0)?;
            let side = match a.side.as_str() {
                "below" => Side::Below,
                "above" => Side::Above,
                other => {
                    return Err(Error::DegenerateParameter(format!(
                        "side must be below or above, got '{other}'"
                    )))
                }
            };
            let c = companion(&t, &s0, a.depth, side)?;
            println!("{c}");
            Ok(0)
        }
        Cmd::Monodromy(a) => {
            let t = Angle::from_str(&a.t)?;
            if a.report != "json" {
                return Err(Error::DegenerateParameter(format!(
                    "unknown report format '{}'",
                    a.report
                )));
            }
            let rep = track(&t, a.depth)?;
            let rot = if a.cables {
                let child = track(&t, a.depth + 1)?;
                Some(rotation_data(&rep, &child)?)
            } else {
                None
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report_to_json(&rep, rot.as_deref())).unwrap()
            );
            Ok(0)
        }
        Cmd::Sausage(SausageCmd::Orbits(a)) => {
            let chain: Vec<Selection> = match a.chain.as_deref() {
                None | Some("") => vec![],
                Some(s) => s
                    .split(',')
                    .map(Selection::parse)
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let c0 = parse_complex(&a.c0)?;
            let tower = tower_build(&chain, c0, a.depth)?;
            let perm = continue_loop(&tower)?;
            let sizes = orbit_sizes(&perm);
            let lens = marked_lengths(&tower);
            if a.json {
                let v = serde_json::json!({
                    "depth": a.depth,
                    "points": tower.points.len(),
                    "orbit_sizes": sizes,
                    "powers_of_two": sizes.iter().all(|s| s.is_power_of_two()),
                    "lengths": lens.iter()
                        .map(|l| format!("{}/{}", l.numer(), l.denom()))
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("points {} orbit sizes {:?}", tower.points.len(), sizes);
            }
            Ok(0)
        }
        Cmd::Cat0(Cat0Cmd::Check(a)) => {
            let (complex, girth) = shiftlab::cat0::check(a.n)?;
            let cat0 = girth >= 8;
            if a.json {
                let v = serde_json::json!({
                    "n": a.n,
                    "generators": complex.generators.len(),
                    "squares": complex.squares,
                    "girth_units_pi4": girth,
                    "cat0": cat0,
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("n = {}: girth {girth} * pi/4, cat0 = {cat0}", a.n);
            }
            if cat0 {
                Ok(0)
            } else {
                Err(Error::StructureViolation(format!("girth {girth} < 2 pi at n = {}", a.n)))
            }
        }
        Cmd::Poly(PolyCmd::Analyze(a)) => {
            let raw = a
                .coeffs
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            let (p, alpha, beta) = shiftlab::poly::normalize_poly(&raw)?;
            let membership = shiftlab::poly::shift_member(&p, None, None)?;
            let crit = if membership.is_member {
                Some(shiftlab::poly::critical_data(&p)?)
            } else {
                None
            };
            let v = serde_json::json!({
                "degree": p.degree(),
                "normalized_tail": p.coeffs[2..]
                    .iter()
                    .map(|c| format!("{c}"))
                    .collect::<Vec<_>>(),
                "alpha": format!("{alpha}"),
                "beta": format!("{beta}"),
                "shift_member": membership.is_member,
                "undecided": membership.undecided,
                "critical": crit.map(|c| c.per_critical.iter().map(|d| serde_json::json!({
                    "point": format!("{}", d.point),
                    "multiplicity": d.multiplicity,
                    "height": d.height,
                    "angles": d.angles,
                    "escape_time": d.escape_time,
                })).collect::<Vec<_>>()),
            });
            if a.json {
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("{v}");
            }
            Ok(0)
        }
        Cmd::Render(a) => {
            let t = Angle::from_str(&a.t)?;
            let tl = taut_leaves(&t, a.depth)?;
            let leaves = tl.leaves_up_to(a.depth);
            let spec = RenderSpec { size_px: a.size, ..RenderSpec::default() };
            let svg = match a.kind.as_str() {
                "lamination" => render_elamination(&leaves, &spec),
                "disk" => render_pinched_disk(&leaves, &spec)?,
                other => {
                    return Err(Error::DegenerateParameter(format!(
                        "kind must be lamination or disk, got '{other}'"
                    )))
                }
            };
            emit(&a.out, &svg).map_err(|e| Error::InternalAssertion(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("BLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
