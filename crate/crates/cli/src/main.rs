use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relspin::protocol::{apply_operator, encode, measure_logical, verify_invariance, verify_operator_commutes};
use relspin::{
    Backend, IntegrationError, IntegratorSpec, LogicalOperator, MomentumDistribution, RadialProfile, RandomStream,
    Rapidity,
};
use relspin_cli::invariance::random_logical_amplitudes;
use relspin_cli::sweep::read_csv;
use relspin_cli::{
    emit_plot_data, run_fig1_sweep, run_invariance_suite, PlotDataError, SuiteOptions, SuiteVariant, SweepConfig,
    SweepError, XValue, XiGrid,
};

#[derive(Parser)]
#[command(name = "relspin", version, about = "Spin entanglement of particle pairs seen from boosted frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concurrence over a (σ/m, x, ξ) grid, written as CSV
    Sweep(SweepArgs),
    /// Check that Bell manifolds and logical qubits are frame invariant
    Invariance(InvarianceArgs),
    /// Encode a logical qubit, boost it, apply gates and measure
    ProtocolDemo(DemoArgs),
    /// Turn a sweep CSV into plot-ready series
    Plotdata(PlotArgs),
}

#[derive(Args)]
struct IntegratorArgs {
    /// quadrature or monte_carlo
    #[arg(long)]
    backend: Option<Backend>,
    /// Quadrature nodes per axis
    #[arg(long)]
    nodes: Option<usize>,
    /// Monte Carlo samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl IntegratorArgs {
    fn apply(&self, spec: &mut IntegratorSpec) {
        if let Some(b) = self.backend {
            spec.backend = b;
        }
        if let Some(n) = self.nodes {
            spec.nodes_per_axis = n;
        }
        if let Some(n) = self.samples {
            spec.samples = n;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
    }

    fn spec(&self) -> Result<IntegratorSpec, Failure> {
        let mut spec = IntegratorSpec::default();
        self.apply(&mut spec);
        spec.validate().map_err(|e| Failure::Config(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sigma_over_m: Vec<f64>,
    /// Correlations in [0, 1) or "delta"
    #[arg(long, value_delimiter = ',')]
    x: Vec<XValue>,
    /// A single rapidity or start:stop:step
    #[arg(long)]
    xi: Option<String>,
    #[command(flatten)]
    integrator: IntegratorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the wall_time_ms column
    #[arg(long)]
    record_timing: bool,
}

#[derive(Args)]
struct InvarianceArgs {
    /// Any of phi+, phi-, psi+, psi-, protocol
    #[arg(long, value_delimiter = ',', default_value = "phi+,phi-,psi+,psi-,protocol")]
    variants: Vec<SuiteVariant>,
    #[arg(long, value_delimiter = ',', default_value = "1,5")]
    xi: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma_over_m: f64,
    /// Beam polar angle of the protocol variant
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    theta: f64,
    /// Seed for the protocol amplitudes
    #[arg(long, default_value_t = 2002)]
    amplitude_seed: u64,
    #[command(flatten)]
    integrator: IntegratorArgs,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 1.0)]
    sigma_over_m: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    xi: f64,
    #[arg(long, default_value_t = 2002)]
    amplitude_seed: u64,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[command(flatten)]
    integrator: IntegratorArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV written by `sweep`
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Suite(String),
    Config(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Suite(_) => 1,
            Failure::Config(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Suite(m) | Failure::Config(m) | Failure::NonConvergence(m) => m,
        }
    }

    fn numeric(e: impl std::fmt::Display, non_converged: bool) -> Self {
        if non_converged {
            Failure::NonConvergence(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn parse_xi(text: &str) -> Result<XiGrid, Failure> {
    let bad = || Failure::Config(format!("--xi must be a number or start:stop:step, got '{text}'"));
    let parts: Vec<f64> = text.split(':').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
    match parts[..] {
        [xi] => Ok(XiGrid::single(xi)),
        [start, stop, step] => Ok(XiGrid { start, stop, step }),
        _ => Err(bad()),
    }
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => SweepConfig::load(path).map_err(|e| Failure::Config(e.to_string()))?,
        None => SweepConfig {
            sigma_over_m: Vec::new(),
            x: Vec::new(),
            xi_grid: XiGrid::default(),
            integrator: IntegratorSpec::default(),
            output_path: PathBuf::new(),
            record_timing: false,
        },
    };
    if !args.sigma_over_m.is_empty() {
        config.sigma_over_m = args.sigma_over_m.clone();
    }
    if !args.x.is_empty() {
        config.x = args.x.clone();
    }
    if let Some(xi) = &args.xi {
        config.xi_grid = parse_xi(xi)?;
    }
    args.integrator.apply(&mut config.integrator);
    if let Some(out) = &args.out {
        config.output_path = out.clone();
    }
    config.record_timing |= args.record_timing;
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(config)
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = sweep_config(&args)?;
    let outcome = run_fig1_sweep(&config).map_err(|e| match e {
        SweepError::Config(e) => Failure::Config(e.to_string()),
        e => Failure::Config(format!("cannot write {}: {e}", config.output_path.display())),
    })?;
    let flagged = outcome.records.iter().filter(|r| r.monotone_violation).count();
    eprintln!(
        "wrote {} rows to {} ({} failed, {} monotonicity flags)",
        outcome.records.len(),
        config.output_path.display(),
        outcome.failed,
        flagged
    );
    if outcome.non_converged > 0 {
        return Err(Failure::NonConvergence(format!("{} grid points did not converge", outcome.non_converged)));
    }
    Ok(())
}

fn invariance(args: InvarianceArgs) -> Result<(), Failure> {
    let spec = args.integrator.spec()?;
    let options = SuiteOptions { sigma_over_m: args.sigma_over_m, theta: args.theta, seed: args.amplitude_seed };
    let report = run_invariance_suite(&args.variants, &args.xi, &spec, &options)
        .map_err(|e| Failure::numeric(&e, e.is_non_convergence()))?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("{:<9} {:>6} {:>12} {:>12}  result", "variant", "xi", "deviation", "tolerance");
        for r in &report.rows {
            let verdict = if r.passed { "pass" } else { "FAIL" };
            println!("{:<9} {:>6} {:>12.3e} {:>12.3e}  {verdict}", r.variant, r.xi, r.max_deviation, r.tolerance);
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Suite("invariance violated".into()))
    }
}

fn protocol_demo(args: DemoArgs) -> Result<(), Failure> {
    let spec = args.integrator.spec()?;
    let config = |e: &dyn std::fmt::Display| Failure::Config(e.to_string());
    let numeric = |e: relspin::ProtocolError| {
        let nc = matches!(
            e,
            relspin::ProtocolError::Boost(relspin::BoostError::Integration(IntegrationError::NonConvergent { .. }))
        );
        Failure::numeric(e, nc)
    };
    let profile = RadialProfile::gaussian(args.sigma_over_m).map_err(|e| config(&e))?;
    let beam = MomentumDistribution::collinear_beam(profile, args.theta)
        .and_then(|b| b.normalize(&spec))
        .map_err(|e| config(&e))?;
    let xi = Rapidity::along_z(args.xi).map_err(|e| config(&e))?;
    let (a, b) = random_logical_amplitudes(&mut RandomStream::new(args.amplitude_seed, 0));
    let q = encode(a, b, beam).map_err(numeric)?;
    println!("logical qubit a = {a:.6}, b = {b:.6}, beam theta = {:.6}, xi = {}", args.theta, args.xi);

    let mut passed = true;
    let mut report = |label: &str, r: relspin::protocol::InvarianceReport| {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        println!("{label:<28} deviation {:.3e}  tolerance {:.3e}  {verdict}", r.max_deviation, r.tolerance);
        passed &= r.passed;
    };
    report("boosted reduced spin state", verify_invariance(&q, xi, &spec).map_err(numeric)?);
    for (name, op) in [("NOT", LogicalOperator::not()), ("Hadamard", LogicalOperator::hadamard())] {
        let r = verify_operator_commutes(&q, &op, xi, &spec).map_err(numeric)?;
        report(&format!("{name} commutes with boost"), r);
        let moved = apply_operator(&q, &op).map_err(numeric)?.qubit;
        println!("{:<28} a = {:.6}, b = {:.6}", format!("after {name}"), moved.a(), moved.b());
    }

    let counts = measure_logical(&q, &mut RandomStream::new(spec.seed, 1), args.shots);
    println!("logical measurement: {} x |0>, {} x |1> (expected p1 = {:.6})", counts.n0, counts.n1, b.norm_sqr());
    if passed {
        Ok(())
    } else {
        Err(Failure::Suite("protocol invariance violated".into()))
    }
}

fn plotdata(args: PlotArgs) -> Result<(), Failure> {
    let records =
        read_csv(&args.input).map_err(|e| Failure::Config(format!("cannot read {}: {e}", args.input.display())))?;
    let series = emit_plot_data(&records, &args.out).map_err(|e| match e {
        PlotDataError::Empty => Failure::Config(format!("{} has no records", args.input.display())),
        e => Failure::Config(format!("cannot write {}: {e}", args.out.display())),
    })?;
    eprintln!("wrote {} series to {}", series.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Invariance(a) => invariance(a),
        Command::ProtocolDemo(a) => protocol_demo(a),
        Command::Plotdata(a) => plotdata(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
