use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use residue_sieve_core::error::Error;
use residue_sieve_core::fit::{
    fit_polynomial, oracle_min_degree, verify_certificate, FitStatus,
};
use residue_sieve_core::io;
use residue_sieve_core::params::FitParams;
use residue_sieve_core::primes::{
    enumerate_primes, window_from_params, PrimeWindow, WindowCaps,
};
use residue_sieve_core::probe::{
    conjecture_probe, exp_graph_sample, multiplicative_order_profile,
};
use residue_sieve_core::residue::{profile, PointSet};
use residue_sieve_core::siegel::{small_kernel, LinearSystem};

/// Exact residue-class profiling and vanishing-polynomial recovery for
/// point sets of bounded height over Q and F_q(T).
#[derive(Parser)]
#[command(name = "residue-sieve", version, disable_help_subcommand = true)]
struct Cli {
    /// Worker threads (overrides RESIDUE_SIEVE_THREADS; default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the primes of a norm window
    Primes(PrimesArgs),
    /// Count residue classes of a point set per prime
    Profile(ProfileArgs),
    /// Fit a low-height vanishing certificate to a point set
    Fit(FitArgs),
    /// Re-verify a certificate against a point set exactly
    Verify(VerifyArgs),
    /// Brute-force the least vanishing degree (desk scale)
    Oracle(OracleArgs),
    /// Solve one homogeneous system for a small-height kernel vector
    Siegel(SiegelArgs),
    /// Check residue-class counts against a power-law budget
    Probe(ProbeArgs),
}

#[derive(Args)]
struct PrimesArgs {
    /// Lower edge of a rational norm interval
    #[arg(long, conflicts_with_all = ["q", "degree"])]
    lower: Option<String>,
    /// Upper edge of a rational norm interval
    #[arg(long, requires = "lower", conflicts_with_all = ["q", "degree"])]
    upper: Option<String>,
    /// Finite-field size for a degree-target window
    #[arg(long, requires = "degree")]
    q: Option<u64>,
    /// Irreducible degree for a degree-target window
    #[arg(long, requires = "q")]
    degree: Option<u32>,
    /// Write the listing as a JSON report
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Point-set file (JSON Lines)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "1")]
    kappa: String,
    #[arg(long, default_value = "1")]
    tau: String,
    /// Explicit rational window lower edge (overrides the derived window)
    #[arg(long, requires = "upper")]
    lower: Option<String>,
    /// Explicit rational window upper edge
    #[arg(long, requires = "lower")]
    upper: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Point-set file (JSON Lines)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "1")]
    kappa: String,
    #[arg(long, default_value = "1")]
    tau: String,
    #[arg(long, default_value = "1")]
    eta: String,
    #[arg(long, default_value = "1/10")]
    epsilon: String,
    /// Dense-tuple size override (otherwise derived from the height bound)
    #[arg(long)]
    r: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    candidates: u32,
    #[arg(long, default_value = "1/4")]
    theta: String,
    #[arg(long, default_value_t = 8)]
    max_iter: u32,
    /// Certificate output path (JSON)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Point-set file (JSON Lines)
    #[arg(long)]
    input: PathBuf,
    /// Certificate to re-check
    #[arg(long)]
    certificate: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Point-set file (JSON Lines)
    #[arg(long)]
    input: PathBuf,
    /// Largest degree to try
    #[arg(long, default_value_t = 4)]
    dmax: u32,
}

#[derive(Args)]
struct SiegelArgs {
    /// System file: {"field": .., "rows": [[coeff, ..], ..]}
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Point-set file (JSON Lines); or use --exp-graph
    #[arg(long, conflicts_with = "exp_graph")]
    input: Option<PathBuf>,
    /// Sample the graph of base^x up to this height bound instead
    #[arg(long, requires = "base")]
    exp_graph: Option<u64>,
    /// Base of the sampled exponential
    #[arg(long)]
    base: Option<u64>,
    #[arg(long, default_value = "1")]
    alpha: String,
    #[arg(long, default_value = "1")]
    kappa: String,
    #[arg(long, default_value = "1")]
    tau: String,
    /// Norm cap for probed primes (default: 10x the window lower edge)
    #[arg(long)]
    cap: Option<String>,
    /// Also profile multiplicative orders at these primes (comma-separated)
    #[arg(long, value_delimiter = ',')]
    order_primes: Vec<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Integrity(_) => 3,
        _ => 1,
    }
}

fn read_set(path: &PathBuf) -> Result<PointSet, Error> {
    let (set, dups) = io::read_pointset(path)?;
    if dups > 0 {
        eprintln!("warning: {dups} duplicate points dropped");
    }
    Ok(set)
}

fn params_from(
    n: u32,
    kappa: &str,
    tau: &str,
    eta: &str,
    epsilon: &str,
    theta: &str,
    r: Option<u64>,
    seed: u64,
    candidates: u32,
    max_iter: u32,
) -> Result<FitParams, Error> {
    let mut p = FitParams::new(n, io::parse_rational(kappa)?);
    p.tau = io::parse_rational(tau)?;
    p.eta = io::parse_rational(eta)?;
    p.epsilon = io::parse_rational(epsilon)?;
    p.theta = io::parse_rational(theta)?;
    p.r_override = r;
    p.seed = seed;
    p.num_candidates = candidates;
    p.max_iterations = max_iter;
    p.validate()?;
    Ok(p)
}

fn cmd_primes(args: &PrimesArgs) -> Result<u8, Error> {
    let window = match (&args.lower, &args.upper, args.q, args.degree) {
        (Some(lo), Some(hi), None, None) => PrimeWindow::rational_interval(
            io::parse_rational(lo)?,
            io::parse_rational(hi)?,
        )?,
        (None, None, Some(q), Some(h)) => PrimeWindow::degree_target(q, h)?,
        _ => {
            return Err(Error::invalid(
                "give either --lower/--upper or --q/--degree",
            ))
        }
    };
    let primes = enumerate_primes(&window, &WindowCaps::default())?;
    for p in &primes {
        println!("{p}");
    }
    println!("{} primes", primes.len());
    if let Some(out) = &args.output {
        io::write_report(out, "primes", io::primes_value(&primes))?;
    }
    Ok(0)
}

fn cmd_profile(args: &ProfileArgs) -> Result<u8, Error> {
    let set = read_set(&args.input)?;
    let window = match (&args.lower, &args.upper) {
        (Some(lo), Some(hi)) => PrimeWindow::rational_interval(
            io::parse_rational(lo)?,
            io::parse_rational(hi)?,
        )?,
        _ => {
            let params = params_from(
                set.n,
                &args.kappa,
                &args.tau,
                "1",
                "1/10",
                "1/4",
                None,
                0,
                32,
                8,
            )?;
            window_from_params(&params, &set.bound)?
        }
    };
    let primes = enumerate_primes(&window, &WindowCaps::default())?;
    let prof = profile(&set, &primes)?;
    for (p, st) in &prof.per_prime {
        println!(
            "prime {p}: {} classes of norm {} (kappa {:.3})",
            st.class_count, st.norm, st.kappa
        );
    }
    println!("kappa_max {:.3}", prof.kappa_max);
    if let Some(out) = &args.output {
        io::write_report(out, "residue_profile", io::residue_profile_value(&prof))?;
    }
    Ok(0)
}

fn cmd_fit(args: &FitArgs) -> Result<u8, Error> {
    let set = read_set(&args.input)?;
    let params = params_from(
        set.n,
        &args.kappa,
        &args.tau,
        &args.eta,
        &args.epsilon,
        &args.theta,
        args.r,
        args.seed,
        args.candidates,
        args.max_iter,
    )?;
    let cert = fit_polynomial(&set, &params)?;
    for rec in &cert.records {
        println!(
            "iteration {}: dense {} of {}, kernel degree {} ({}), covered {} (total {}/{})",
            rec.index,
            rec.dense_size,
            rec.remaining_before,
            rec.kernel_degree,
            rec.strategy,
            rec.newly_covered,
            rec.covered_total,
            cert.total
        );
    }
    println!(
        "status {}: covered {}/{} with {} factor(s), total degree {}, max coefficient height {}",
        cert.status,
        cert.covered,
        cert.total,
        cert.factors.len(),
        cert.total_degree,
        io::height_string(&cert.max_coeff_height)
    );
    if let Some(out) = &args.output {
        io::write_certificate(out, &set.field, set.n as usize + 1, &params, &cert)?;
    }
    Ok(if cert.status == FitStatus::Success { 0 } else { 2 })
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let set = read_set(&args.input)?;
    let (field, nvars, _params, cert) = io::read_certificate(&args.certificate)?;
    if field != set.field {
        return Err(Error::invalid("certificate and point set fields differ"));
    }
    if nvars != set.n as usize + 1 {
        return Err(Error::invalid(
            "certificate and point set dimensions differ",
        ));
    }
    let (covered, per_factor) = verify_certificate(&set, &cert)?;
    for (i, c) in per_factor.iter().enumerate() {
        println!("factor {i}: vanishes on {c} points");
    }
    println!("verified: covered {covered}/{} as recorded", cert.total);
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8, Error> {
    let set = read_set(&args.input)?;
    let (dmin, poly) = oracle_min_degree(&set, args.dmax)?;
    match (dmin, poly) {
        (Some(d), Some(p)) => {
            println!("least vanishing degree {d}");
            println!("{p}");
        }
        _ => println!("no form of degree <= {} vanishes on the set", args.dmax),
    }
    Ok(0)
}

fn cmd_siegel(args: &SiegelArgs) -> Result<u8, Error> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Error::invalid(format!("cannot open {}: {e}", args.input.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("bad system file: {e}")))?;
    let field = io::parse_field(
        doc.get("field")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::invalid("system file needs a \"field\" string"))?,
    )?;
    let rows_v = doc
        .get("rows")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::invalid("system file needs a \"rows\" array"))?;
    if let Some(extra) = doc.as_object().and_then(|o| {
        o.keys().find(|k| k.as_str() != "field" && k.as_str() != "rows")
    }) {
        return Err(Error::invalid(format!("unknown key {extra:?} in system file")));
    }
    let mut rows = Vec::with_capacity(rows_v.len());
    for row in rows_v {
        let row = row
            .as_array()
            .ok_or_else(|| Error::invalid("each row must be an array"))?;
        let mut parsed = Vec::with_capacity(row.len());
        for entry in row {
            let s = entry
                .as_str()
                .ok_or_else(|| Error::invalid("coefficients must be strings"))?;
            parsed.push(io::parse_ring(&field, s)?);
        }
        rows.push(parsed);
    }
    let system = LinearSystem::new(field, rows)?;
    let sol = small_kernel(&system)?;
    let coords: Vec<String> = sol.c.iter().map(io::ring_string).collect();
    println!("solution ({})", coords.join(", "));
    println!(
        "height {} via {}",
        io::height_string(&sol.height),
        sol.strategy_used
    );
    if let Some(out) = &args.output {
        io::write_report(
            out,
            "siegel_solution",
            serde_json::json!({
                "solution": coords,
                "height": io::height_string(&sol.height),
                "strategy": sol.strategy_used.as_str(),
            }),
        )?;
    }
    Ok(0)
}

fn cmd_probe(args: &ProbeArgs) -> Result<u8, Error> {
    let set = match (&args.input, args.exp_graph) {
        (Some(path), None) => read_set(path)?,
        (None, Some(n)) => exp_graph_sample(n, args.base.expect("clap enforces --base"))?,
        _ => return Err(Error::invalid("give exactly one of --input or --exp-graph")),
    };
    let alpha = io::parse_rational(&args.alpha)?;
    let kappa = io::parse_rational(&args.kappa)?;
    let tau = io::parse_rational(&args.tau)?;
    let cap = args.cap.as_deref().map(io::parse_rational).transpose()?;
    let report = conjecture_probe(&set, &alpha, &kappa, &tau, cap.as_ref())?;
    println!(
        "{} primes checked, {} violation(s): {}",
        report.primes_checked,
        report.violations.len(),
        if report.pass { "pass" } else { "fail" }
    );
    for v in &report.violations {
        println!(
            "prime {}: {} classes over budget {:.2}",
            v.prime, v.class_count, v.budget
        );
    }
    let mut payload = io::probe_report_value(&report);
    if !args.order_primes.is_empty() {
        let base = args
            .base
            .ok_or_else(|| Error::invalid("--order-primes needs --base"))?;
        let orders = multiplicative_order_profile(&set, base, &args.order_primes)?;
        for e in &orders.entries {
            println!(
                "p {}: order {}, classes {}/{} predicted, values {}/{} predicted",
                e.p,
                e.u_p,
                e.full_classes,
                e.full_predicted,
                e.value_classes,
                e.value_predicted
            );
        }
        for p in &orders.skipped {
            println!("p {p}: skipped, divides the base");
        }
        payload["order_profile"] = io::order_profile_value(&orders);
    }
    if let Some(out) = &args.output {
        io::write_report(out, "probe", payload)?;
    }
    Ok(0)
}

fn dispatch(command: &Command) -> Result<u8, Error> {
    match command {
        Command::Primes(a) => cmd_primes(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Siegel(a) => cmd_siegel(a),
        Command::Probe(a) => cmd_probe(a),
    }
}

fn thread_request(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("RESIDUE_SIEVE_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
}

#[cfg(feature = "parallel")]
fn run(cli: &Cli) -> Result<u8, Error> {
    match thread_request(cli) {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| dispatch(&cli.command)),
        _ => dispatch(&cli.command),
    }
}

#[cfg(not(feature = "parallel"))]
fn run(cli: &Cli) -> Result<u8, Error> {
    let _ = thread_request(cli);
    dispatch(&cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
