use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use coherent_id::coherent::{build_ui2_circuit, simulate_ui2, ui2_identification_probabilities, Ui2Truth};
use coherent_id::database::{database_report, DatabaseSpec};
use coherent_id::stats::FrequencyCheck;
use coherent_id::strategies::{critical_point_residual, curve, linspace, optimize_t1, p_bs, p_bs_closure, verify_ordering, Priors, Strategy};
use coherent_id::verify::{run_verify, VerifyConfig};

mod args;
mod output;

use args::{CurvesArgs, DatabaseArgs, Format, OptimizeArgs, SimulateArgs, VerifyArgs};
use output::{sig9, sink, write_json, Envelope};

#[derive(Parser)]
#[command(name = "cohid", version, about = "Unambiguous identification of coherent and qudit states", long_about = None)]
struct Cli {
    /// Read the whole run from a JSON file, e.g. `{"subcommand": "curves", "steps": 11}`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Success probability of every strategy against |α₁ − α₂|.
    Curves(CurvesArgs),
    /// Shot-by-shot run of the three-splitter identification circuit.
    Simulate(SimulateArgs),
    /// Certification batteries for the qudit POVMs and the Fock-space comparator.
    Verify(VerifyArgs),
    /// Identification among N references.
    Database(DatabaseArgs),
    /// Best cloning-splitter transmittivity for a given pair.
    #[command(name = "optimize-t1")]
    #[serde(rename = "optimize-t1")]
    OptimizeT1(OptimizeArgs),
}

/// Bad arguments; maps to exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Library rejections of user-supplied values are usage errors.
fn input<T>(r: coherent_id::Result<T>) -> Result<T> {
    r.map_err(|e| usage(e.to_string()))
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("missing required --{flag}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let command = match (cli.config, cli.command) {
        (Some(_), Some(_)) => return Err(usage("--config replaces the subcommand; give one or the other")),
        (None, None) => return Err(usage("no subcommand given; see --help")),
        (None, Some(c)) => c,
        (Some(path), None) => {
            let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
    };
    match command {
        Command::Curves(a) => curves(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Verify(a) => verify(&a),
        Command::Database(a) => database(&a),
        Command::OptimizeT1(a) => optimize(&a),
    }
}

#[derive(Serialize)]
struct CurveRow {
    strategy: Strategy,
    delta_abs: f64,
    probability: f64,
}

fn curves(a: &CurvesArgs) -> Result<bool> {
    if a.steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    if !(a.min >= 0.0) || !(a.max > a.min) || !a.max.is_finite() {
        return Err(usage("need 0 <= --min < --max"));
    }
    let grid = input(linspace(a.min, a.max, a.steps))?;
    let ordering = input(verify_ordering(&grid))?;
    match a.format {
        Format::Csv => {
            let mut out = sink(a.output.as_deref())?;
            writeln!(out, "strategy,delta_abs,probability")?;
            for s in Strategy::ALL {
                for p in curve(s, &grid) {
                    writeln!(out, "{},{},{}", s, sig9(p.delta_abs), sig9(p.probability))?;
                }
            }
            out.flush()?;
        }
        Format::Json => {
            let rows: Vec<CurveRow> = Strategy::ALL
                .into_iter()
                .flat_map(|s| curve(s, &grid))
                .map(|p| CurveRow { strategy: p.strategy, delta_abs: p.delta_abs, probability: p.probability })
                .collect();
            write_json(a.output.as_deref(), &Envelope::new("curves", a, (&rows, &ordering), ordering.holds()))?;
        }
    }
    if !ordering.holds() {
        eprintln!("ordering violated at {} grid points", ordering.violations);
    }
    Ok(ordering.holds())
}

#[derive(Serialize)]
struct SimulateSummary {
    identified_1: u64,
    identified_2: u64,
    inconclusive: u64,
    impossible: u64,
    error: u64,
    shots: u64,
    expected_p1: f64,
    expected_p2: f64,
    /// Frequency of the correct identification against its exact probability.
    success: Option<FrequencyCheck>,
}

fn simulate(a: &SimulateArgs) -> Result<bool> {
    let alpha1 = required(a.alpha1, "alpha1")?.0;
    let alpha2 = required(a.alpha2, "alpha2")?.0;
    let truth = match required(a.truth, "truth")? {
        1 => Ui2Truth::First,
        2 => Ui2Truth::Second,
        k => return Err(usage(format!("--truth must be 1 or 2, got {k}"))),
    };
    let seed = required(a.seed, "seed")?;
    let (p1, p2) = input(ui2_identification_probabilities(alpha1, alpha2, a.t1))?;
    let (counts, shots) = input(simulate_ui2(alpha1, alpha2, truth, a.t1, a.shots, seed))?;

    if let Some(path) = &a.shots_csv {
        let circuit = input(build_ui2_circuit(a.t1))?;
        let mut out = sink(Some(path))?;
        let labels: Vec<String> = circuit.monitored.iter().map(|d| format!("click_{}", d.label.to_lowercase())).collect();
        writeln!(out, "seed,shot,{},outcome", labels.join(","))?;
        for s in &shots {
            let clicks: Vec<&str> = s.clicks.clicks.iter().map(|&c| if c { "1" } else { "0" }).collect();
            writeln!(out, "{},{},{},{}", s.seed, s.shot, clicks.join(","), s.outcome_label())?;
        }
        out.flush()?;
    }

    let (hits, expected) = match truth {
        Ui2Truth::First => (counts.identified_1, p1),
        Ui2Truth::Second => (counts.identified_2, p2),
    };
    let summary = SimulateSummary {
        identified_1: counts.identified_1,
        identified_2: counts.identified_2,
        inconclusive: counts.inconclusive,
        impossible: counts.impossible,
        error: counts.error,
        shots: counts.shots,
        expected_p1: p1,
        expected_p2: p2,
        success: (a.shots > 0).then(|| FrequencyCheck::new(hits, a.shots, expected)),
    };
    let pass = counts.error == 0;
    write_json(a.output.as_deref(), &Envelope::new("simulate", a, summary, pass))?;
    Ok(pass)
}

fn verify(a: &VerifyArgs) -> Result<bool> {
    let both = !a.fock && !a.qudit;
    let config = VerifyConfig {
        qudit: a.qudit || both,
        fock: a.fock || both,
        d: a.d,
        n_max: a.n_max,
        seed: a.seed,
        samples: a.samples,
        quadrature: !a.no_quadrature,
    };
    let report = input(run_verify(&config))?;
    write_json(a.output.as_deref(), &report)?;
    Ok(report.pass)
}

fn database(a: &DatabaseArgs) -> Result<bool> {
    let seed = required(a.seed, "seed")?;
    let references = match (&a.refs, a.ring_alpha) {
        (Some(_), Some(_)) => return Err(usage("give --refs or --ring-alpha, not both")),
        (None, None) => return Err(usage("missing --refs or --ring-alpha")),
        (Some(refs), None) => {
            let refs: Vec<_> = refs.0.iter().map(|r| r.0).collect();
            if let Some(n) = a.n {
                if n != refs.len() {
                    return Err(usage(format!("--n {n} but {} references given", refs.len())));
                }
            }
            refs
        }
        (None, Some(modulus)) => {
            let n = required(a.n, "n")?;
            input(DatabaseSpec::ring(modulus, n))?.references
        }
    };
    let spec = match &a.priors {
        Some(p) => input(DatabaseSpec::new(references, p.0.clone(), 0))?,
        None => input(DatabaseSpec::uniform(references, 0))?,
    };
    let report = input(database_report(&spec, a.shots, seed))?;
    let pass = report.misidentified == 0;
    write_json(a.output.as_deref(), &Envelope::new("database", a, report, pass))?;
    Ok(pass)
}

#[derive(Serialize)]
struct OptimizeSummary {
    t1_star: f64,
    p_bs_at_optimum: f64,
    p_bs_balanced: f64,
    /// Equal priors only.
    critical_point_residual: Option<f64>,
}

fn optimize(a: &OptimizeArgs) -> Result<bool> {
    let alpha1 = required(a.alpha1, "alpha1")?.0;
    let alpha2 = required(a.alpha2, "alpha2")?.0;
    let priors = match a.eta1 {
        Some(e) => input(Priors::new(e))?,
        None => Priors::equal(),
    };
    let t1_star = input(optimize_t1(alpha1, alpha2, priors))?;
    let delta_sq = (alpha1 - alpha2).norm_sqr();
    let summary = OptimizeSummary {
        t1_star,
        p_bs_at_optimum: input(p_bs_closure(delta_sq, t1_star, priors))?,
        p_bs_balanced: input(p_bs(alpha1, alpha2, 0.5, priors))?,
        critical_point_residual: (priors.eta1 == priors.eta2).then(|| critical_point_residual(delta_sq, t1_star)),
    };
    write_json(a.output.as_deref(), &Envelope::new("optimize-t1", a, summary, true))?;
    Ok(true)
}
