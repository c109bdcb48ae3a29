use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hilbert_core::harness::{self, FileConfig, Report, GRID_LEVEL_ENV};
use hilbert_core::operator::{contour_form_derivative, OperatorInstance, COEFF_TAIL_TOL, KERNEL_REL_TOL};
use hilbert_core::spaces::{norm, SpaceFamily, SpaceSpec};
use hilbert_core::{make_function, Complex, Error, GridConfig, RadialMeasure, Result};

#[derive(Parser)]
#[command(name = "hilbert", version, about = "Generalized Hilbert matrix operator: evaluation, norms and verification runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate H_mu(f) or one of its first two derivatives at a point.
    Apply {
        #[arg(long, default_value = "lebesgue")]
        measure: String,
        #[arg(long)]
        function: String,
        /// Point of the open unit disk, e.g. 0.5 or 0.3+0.2i.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        derivative: u32,
        #[arg(long, value_enum, default_value_t = Form::Coeff)]
        form: Form,
    },
    /// Norm of a test function in one of the supported spaces.
    Norm {
        #[arg(long)]
        function: String,
        /// bloch, zygmund1, meanlip:p=..,alpha=.., hardy:q=.., dirichlet:q=.., hl:q=.., bq:q=..
        #[arg(long)]
        space: String,
        /// Grid override, e.g. J=16,nodes=512.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Run a verification experiment and print its report.
    Verify {
        /// thm1.1, thm1.2, thm1.3, thm1.4, thm1.5, lem2.2, rem2.1 or all
        id: String,
        #[arg(long)]
        measure: Vec<String>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        out: Output,
        /// TOML file with j_max, angular_nodes, truncation, rel_tol, measure, q.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Coeff,
    Integral,
    Contour,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

fn grid_from(file: Option<&FileConfig>, descriptor: Option<&str>) -> Result<GridConfig> {
    let env = std::env::var(GRID_LEVEL_ENV).ok();
    harness::resolve_grid(env.as_deref(), file, descriptor)
}

fn parse_point(text: &str) -> Result<Complex> {
    let f = make_function(&format!("const:{text}")).map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse {
            position: position.saturating_sub("const:".len()),
            message,
        },
        other => other,
    })?;
    Ok(f.coeffs()[0])
}

fn apply(measure: &str, function: &str, at: &str, derivative: u32, form: Form) -> Result<serde_json::Value> {
    let mu = RadialMeasure::parse(measure)?;
    let f = make_function(function)?;
    let z = parse_point(at)?;
    let rho = z.norm();
    if rho >= 1.0 {
        return Err(Error::InvalidInput(format!("|z| = {rho} is not inside the unit disk")));
    }
    let op = OperatorInstance::new(mu.clone());
    let (value, error_bound) = match form {
        Form::Coeff => {
            let mut degree = 1024;
            let action = loop {
                let a = op.coeff_action_detailed(&f, degree, COEFF_TAIL_TOL)?;
                let d = a.series.differentiate(derivative as usize);
                if d.is_reliable_at(rho) || 2 * degree > op.max_degree() {
                    break (a, d);
                }
                degree *= 2;
            };
            let (a, d) = action;
            let v = d.eval(z)?;
            // Σ n^k E(n) ε |z|^n ≤ k! ε sup E / (1 − |z|)^{k+1}
            let fact = [1.0, 1.0, 2.0][derivative as usize];
            let inner = a.inner_error * fact / (1.0 - rho).powi(derivative as i32 + 1);
            (v, d.tail_bound(rho) + inner)
        }
        Form::Integral => {
            let v = if derivative == 0 {
                op.integral_action(&f, z)?
            } else {
                op.kernel_derivative(&f, z, derivative)?
            };
            (v, KERNEL_REL_TOL * v.norm())
        }
        Form::Contour => {
            if !matches!(mu.kind(), hilbert_core::measure::MeasureKind::Lebesgue) || derivative != 1 {
                return Err(Error::InvalidInput(
                    "the contour form gives the first derivative for Lebesgue measure only".into(),
                ));
            }
            let v = contour_form_derivative(&f, z)?;
            (v, KERNEL_REL_TOL * v.norm())
        }
    };
    let form_name = match form {
        Form::Coeff => "coeff",
        Form::Integral => "integral",
        Form::Contour => "contour",
    };
    Ok(json!({
        "value": {"re": value.re, "im": value.im},
        "form": form_name,
        "derivative": derivative,
        "error_bound": error_bound,
    }))
}

fn norm_cmd(function: &str, space: &str, grid: Option<&str>) -> Result<serde_json::Value> {
    let f = make_function(function)?;
    let spec = SpaceSpec::new(SpaceFamily::parse(space)?, grid_from(None, grid)?)?;
    let r = norm(&f, &spec)?;
    Ok(json!({
        "value": r.value,
        "attained_at": r.attained_at,
        "converged": r.converged,
        "status": r.status,
        "error_estimate": r.error_estimate,
        "trace": r.trace,
    }))
}

fn verify(
    id: &str,
    measures: &[String],
    q: Option<f64>,
    grid: Option<&str>,
    config: Option<&PathBuf>,
) -> Result<Vec<Report>> {
    let file = config.map(|p| FileConfig::load(p)).transpose()?;
    let grid = grid_from(file.as_ref(), grid)?;
    let mut specs: Vec<String> = measures.to_vec();
    if specs.is_empty() {
        if let Some(m) = file.as_ref().and_then(|f| f.measure.clone()) {
            specs.push(m);
        }
    }
    let mus = specs.iter().map(|s| RadialMeasure::parse(s)).collect::<Result<Vec<_>>>()?;
    let q = q.or(file.as_ref().and_then(|f| f.q));
    harness::run_experiment(id, &mus, q, &grid)
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Apply {
            measure,
            function,
            at,
            derivative,
            form,
        } => match apply(&measure, &function, &at, derivative, form) {
            Ok(v) => {
                println!("{v}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Norm { function, space, grid } => match norm_cmd(&function, &space, grid.as_deref()) {
            Ok(v) => {
                println!("{v}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Verify {
            id,
            measure,
            q,
            grid,
            out,
            config,
        } => match verify(&id, &measure, q, grid.as_deref(), config.as_ref()) {
            Ok(reports) => {
                match out {
                    Output::Json => {
                        let text = if reports.len() == 1 {
                            serde_json::to_string_pretty(&reports[0])
                        } else {
                            serde_json::to_string_pretty(&reports)
                        };
                        println!("{}", text.expect("reports serialize"));
                    }
                    Output::Csv => print!("{}", harness::to_csv(&reports)),
                }
                if reports.iter().all(Report::all_pass) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => fail(e),
        },
    }
}
