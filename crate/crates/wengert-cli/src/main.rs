//! Command-line front end: parse expressions or programs, evaluate
//! them, differentiate them in either mode, compare against finite
//! differences, export graphs, and run the optimizers.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain error,
//! 4 derivative check failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use wengert::lang::{self, ProgramAst};
use wengert::{
    adjoint_listing, export_dot, fd_gradient, forward_listing, gradient, jacobian_forward,
    jacobian_reverse, newton_cg, tangent_listing, trajectory_csv, FdConfig, FdStep, GdConfig,
    HvpRequest, NewtonCgConfig, SymExpr, Tape,
};

#[derive(Parser)]
#[command(
    name = "wengert",
    version,
    about = "Tape-based automatic differentiation for scalar expressions and small programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at a point
    Eval(EvalArgs),
    /// Gradient by forward- or reverse-mode AD
    Grad(GradArgs),
    /// Full Jacobian (programs may return several values)
    Jacobian(JacobianArgs),
    /// Hessian-vector product at a point along a direction
    Hvp(HvpArgs),
    /// Compare the AD gradient against central finite differences
    Check(CheckArgs),
    /// Export the computational graph as Graphviz DOT
    Graph(GraphArgs),
    /// Measure symbolic expression swell against tape growth
    Swell(SwellArgs),
    /// Minimize an expression with an AD-driven optimizer
    Opt(OptArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Expression or program source text
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// Read the source from a file instead
    #[arg(short = 'f', long = "file", conflicts_with = "expr")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Decimal places for displayed values
    #[arg(long, default_value_t = 4)]
    precision: usize,
    /// Emit machine-readable JSON (full precision)
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Forward,
    Reverse,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Input bindings, e.g. `x1=2,x2=5`
    #[arg(long = "at", default_value = "")]
    at: String,
    /// Print the forward evaluation trace listing
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GradArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "at", default_value = "")]
    at: String,
    /// Which AD mode computes the gradient
    #[arg(long, value_enum, default_value_t = Mode::Reverse)]
    mode: Mode,
    /// Print the trace listing (adjoint trace for reverse mode, one
    /// tangent trace per input for forward mode)
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct JacobianArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "at", default_value = "")]
    at: String,
    #[arg(long, value_enum, default_value_t = Mode::Reverse)]
    mode: Mode,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HvpArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "at", default_value = "")]
    at: String,
    /// Direction vector, e.g. `x1=1,x2=0`
    #[arg(long = "dir", default_value = "")]
    dir: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "at", default_value = "")]
    at: String,
    /// Override the automatic finite-difference step
    #[arg(long = "fd-step", allow_negative_numbers = true)]
    fd_step: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Bindings are only needed when the source contains control flow
    #[arg(long = "at", default_value = "")]
    at: String,
}

#[derive(Args)]
struct SwellArgs {
    /// Largest product-chain length to measure (chains run from k = 2)
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Add a column with sizes after extra simplification rules
    #[arg(long)]
    simplify: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Gd,
    NewtonCg,
}

#[derive(Args)]
struct OptArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Starting point, e.g. `x=0,y=1`
    #[arg(long = "w0", default_value = "")]
    w0: String,
    #[arg(long, value_enum, default_value_t = Method::Gd)]
    method: Method,
    /// Gradient-descent step size
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    eta: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Stop when the gradient max-norm drops below this
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    tol: f64,
}

struct CliError {
    code: u8,
    message: String,
}

impl From<lang::ParseError> for CliError {
    fn from(e: lang::ParseError) -> Self {
        CliError {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<wengert::Error> for CliError {
    fn from(e: wengert::Error) -> Self {
        CliError {
            code: if e.is_domain() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage_error(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

/// Write to stdout, treating a closed pipe (e.g. `wengert ... | head`)
/// as a clean early stop rather than an error.
fn emit(text: impl std::fmt::Display) -> Result<(), CliError> {
    use std::io::Write;
    let mut stdout = std::io::stdout();
    match write!(stdout, "{text}").and_then(|_| stdout.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Err(CliError {
            code: 0,
            message: String::new(),
        }),
        Err(e) => Err(usage_error(format!("cannot write output: {e}"))),
    }
}

fn emitln(text: impl std::fmt::Display) -> Result<(), CliError> {
    emit(format!("{text}\n"))
}

fn load_source(source: &SourceArgs) -> Result<String, CliError> {
    match (&source.expr, &source.file) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| usage_error(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(usage_error("provide a source with -e EXPR or -f FILE")),
    }
}

/// Arrange `name=value` bindings into the program's parameter order.
fn bind_inputs(ast: &ProgramAst, bindings: &str) -> Result<Vec<f64>, CliError> {
    let pairs = lang::parse_bindings(bindings)?;
    let map: HashMap<&str, f64> = pairs.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    for (name, _) in &pairs {
        if !ast.params.contains(name) {
            return Err(usage_error(format!(
                "unknown parameter `{name}`; expected {}",
                ast.params.join(", ")
            )));
        }
    }
    ast.params
        .iter()
        .map(|p| {
            map.get(p.as_str())
                .copied()
                .ok_or_else(|| usage_error(format!("unbound parameter `{p}`")))
        })
        .collect()
}

fn fmt_value(v: f64, precision: usize) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.precision$}")
}

fn named_json(names: &[String], values: &[f64]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (n, v) in names.iter().zip(values) {
        map.insert(n.clone(), json!(v));
    }
    serde_json::Value::Object(map)
}

fn gradient_line(prefix: &str, names: &[String], values: &[f64], precision: usize) -> String {
    names
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{prefix}{n}={}", fmt_value(*v, precision)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn trace_and_sweep(ast: &ProgramAst, inputs: &[f64]) -> Result<(Tape, Vec<f64>), CliError> {
    let mut tape: Tape = lang::trace(ast, inputs)?;
    let outputs = tape.forward_sweep(inputs)?;
    Ok((tape, outputs))
}

fn compute_gradient(ast: &ProgramAst, inputs: &[f64], mode: Mode) -> Result<Vec<f64>, CliError> {
    let mut tape: Tape = lang::trace(ast, inputs)?;
    match mode {
        Mode::Reverse => Ok(gradient(&mut tape, inputs)?),
        Mode::Forward => {
            if tape.num_outputs() != 1 {
                return Err(wengert::Error::MultiOutput {
                    outputs: tape.num_outputs(),
                }
                .into());
            }
            let jac = jacobian_forward(&mut tape, inputs)?;
            Ok(jac.into_iter().next().unwrap())
        }
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let inputs = bind_inputs(&ast, &args.at)?;
    let (tape, outputs) = trace_and_sweep(&ast, &inputs)?;
    if args.trace {
        emit(forward_listing(&tape, &ast.params, args.output.precision)?)?;
    }
    if args.output.json {
        emitln(json!({ "outputs": outputs }))?;
    } else {
        for v in &outputs {
            emitln(fmt_value(*v, args.output.precision))?;
        }
    }
    Ok(())
}

fn cmd_grad(args: &GradArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let inputs = bind_inputs(&ast, &args.at)?;
    let grad = compute_gradient(&ast, &inputs, args.mode)?;
    if args.trace {
        let (tape, _) = trace_and_sweep(&ast, &inputs)?;
        emit(forward_listing(&tape, &ast.params, args.output.precision)?)?;
        match args.mode {
            Mode::Reverse => {
                emit(adjoint_listing(&tape, 0, &ast.params, args.output.precision)?)?;
            }
            Mode::Forward => {
                for i in 0..inputs.len() {
                    let mut seed = vec![0.0; inputs.len()];
                    seed[i] = 1.0;
                    emit(tangent_listing(&tape, &seed, &ast.params, args.output.precision)?)?;
                }
            }
        }
    }
    if args.output.json {
        emitln(json!({ "gradient": named_json(&ast.params, &grad) }))?;
    } else {
        emitln(gradient_line("d", &ast.params, &grad, args.output.precision))?;
    }
    Ok(())
}

fn cmd_jacobian(args: &JacobianArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let inputs = bind_inputs(&ast, &args.at)?;
    let mut tape: Tape = lang::trace(&ast, &inputs)?;
    let jac = match args.mode {
        Mode::Forward => jacobian_forward(&mut tape, &inputs)?,
        Mode::Reverse => jacobian_reverse(&mut tape, &inputs)?,
    };
    if args.output.json {
        emitln(json!({ "jacobian": jac }))?;
    } else {
        for row in &jac {
            let cells: Vec<String> = row
                .iter()
                .map(|v| fmt_value(*v, args.output.precision))
                .collect();
            emitln(cells.join(" "))?;
        }
    }
    Ok(())
}

fn cmd_hvp(args: &HvpArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let inputs = bind_inputs(&ast, &args.at)?;
    let pairs = lang::parse_bindings(&args.dir)?;
    let map: HashMap<&str, f64> = pairs.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    for (name, _) in &pairs {
        if !ast.params.contains(name) {
            return Err(usage_error(format!("unknown parameter `{name}` in --dir")));
        }
    }
    let direction = ast
        .params
        .iter()
        .map(|p| {
            map.get(p.as_str())
                .copied()
                .ok_or_else(|| usage_error(format!("missing direction component for `{p}`")))
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    let hv = wengert::hvp(&ast, &HvpRequest::new(inputs, direction))?;
    if args.output.json {
        emitln(json!({ "hvp": named_json(&ast.params, &hv) }))?;
    } else {
        emitln(gradient_line("h", &ast.params, &hv, args.output.precision))?;
    }
    Ok(())
}

const CHECK_TOLERANCE: f64 = 1e-4;

fn cmd_check(args: &CheckArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let inputs = bind_inputs(&ast, &args.at)?;
    let ad = compute_gradient(&ast, &inputs, Mode::Reverse)?;
    let step = match args.fd_step {
        Some(h) => FdStep::Fixed(h),
        None => FdStep::Auto,
    };
    let fd = fd_gradient(
        |x| wengert::eval_scalar(&ast, x),
        &inputs,
        &FdConfig::central(step),
    )?;
    let max_rel_err = ad
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
        .fold(0.0, f64::max);
    let pass = max_rel_err < CHECK_TOLERANCE;
    if args.output.json {
        emitln(json!({
            "ad": named_json(&ast.params, &ad),
            "fd": named_json(&ast.params, &fd),
            "max_rel_err": max_rel_err,
            "pass": pass,
        }))?;
    } else {
        let p = args.output.precision;
        emitln(format!("AD: {}", gradient_line("d", &ast.params, &ad, p)))?;
        emitln(format!("FD: {}", gradient_line("d", &ast.params, &fd, p)))?;
        emitln(format!("max rel err: {max_rel_err:e}"))?;
        emitln(if pass { "PASS" } else { "FAIL" })?;
    }
    if pass {
        Ok(())
    } else {
        Err(CliError {
            code: 4,
            message: format!(
                "AD and FD gradients disagree: max rel err {max_rel_err:e} >= {CHECK_TOLERANCE:e}"
            ),
        })
    }
}

fn cmd_graph(args: &GraphArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    // Tracing needs input values only to resolve control flow; plain
    // expressions accept any placeholder point.
    let inputs: Vec<f64> = if args.at.is_empty() {
        vec![1.0; ast.params.len()]
    } else {
        bind_inputs(&ast, &args.at)?
    };
    let tape: Tape = lang::trace(&ast, &inputs)?;
    emit(export_dot(&tape, Some(&ast.params)))?;
    Ok(())
}

/// Product chain of k distinct factors sin(i*x), the swell benchmark.
fn swell_chain_source(k: usize) -> String {
    let factors: Vec<String> = (1..=k).map(|i| format!("sin({i}*x)")).collect();
    factors.join(" * ")
}

fn cmd_swell(args: &SwellArgs) -> Result<(), CliError> {
    if args.depth < 2 {
        return Err(usage_error("--depth must be at least 2"));
    }
    if args.simplify {
        emitln("k sym_size sym_simplified tape_size")?;
    } else {
        emitln("k sym_size tape_size")?;
    }
    for k in 2..=args.depth {
        let ast = lang::parse(&swell_chain_source(k))?;
        let sym: SymExpr = ast.returns[0].to_symbolic();
        let derivative = sym.diff("x");
        let tape: Tape = lang::trace(&ast, &[0.7])?;
        if args.simplify {
            emitln(format!(
                "{k} {} {} {}",
                derivative.size(),
                derivative.simplify().size(),
                tape.len()
            ))?;
        } else {
            emitln(format!("{k} {} {}", derivative.size(), tape.len()))?;
        }
    }
    Ok(())
}

fn cmd_opt(args: &OptArgs) -> Result<(), CliError> {
    let source = load_source(&args.source)?;
    let ast = lang::parse(&source)?;
    let w0 = bind_inputs(&ast, &args.w0)?;
    let trajectory = match args.method {
        Method::Gd => gradient_descent_run(&ast, &w0, args)?,
        Method::NewtonCg => newton_cg(
            &ast,
            &w0,
            &NewtonCgConfig {
                max_iters: args.iters,
                grad_tol: args.tol,
                ..NewtonCgConfig::default()
            },
        )?,
    };
    emit(trajectory_csv(&trajectory, &ast.params))?;
    Ok(())
}

fn gradient_descent_run(
    ast: &ProgramAst,
    w0: &[f64],
    args: &OptArgs,
) -> Result<wengert::OptTrajectory, CliError> {
    Ok(wengert::gradient_descent(
        ast,
        w0,
        &GdConfig {
            step: args.eta,
            max_iters: args.iters,
            grad_tol: args.tol,
        },
    )?)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Grad(args) => cmd_grad(args),
        Command::Jacobian(args) => cmd_jacobian(args),
        Command::Hvp(args) => cmd_hvp(args),
        Command::Check(args) => cmd_check(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Swell(args) => cmd_swell(args),
        Command::Opt(args) => cmd_opt(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
