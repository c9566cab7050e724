use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ambipref::axioms::{self, AxiomKind, Battery};
use ambipref::format::{instance_to_json, parse_instance};
use ambipref::generate::{generate_instance, GenParams};
use ambipref::margins::{evaluate, ModelKind};
use ambipref::model::{utility_vector, Act, Instance, UtilityVector};
use ambipref::rational::{self, Rational};
use ambipref::slices::{export_slice, slice_profile, SlicePlane};
use ambipref::verify::{parse_suites, verify, SeedRange, VerifyParams};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ambipref", version, about = "Exact checks for preferences over ambiguous acts")]
struct Cli {
    /// write the result here instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two acts under one model
    Evaluate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        model: String,
        /// act name, or comma-separated utilities
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Audit axioms on a utility grid
    Audit {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        model: String,
        /// comma-separated axiom names, or "all"
        #[arg(long, default_value = "all")]
        axioms: String,
        #[arg(long, default_value_t = 2)]
        resolution: u32,
        #[arg(long, default_value = "1")]
        radius: String,
    },
    /// Decide completeness and CBT from the belief sets
    Analyze {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 2)]
        resolution: u32,
        #[arg(long, default_value = "1")]
        radius: String,
    },
    /// Sample the margins on a plane through the constants
    Slice {
        #[arg(long)]
        instance: PathBuf,
        /// comma-separated utilities, not constant
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Generate a seeded instance
    Gen {
        #[arg(long, required_unless_present = "builtin")]
        seed: Option<u64>,
        /// emit a hand-built instance instead: disjoint-pair,
        /// touching-intervals or cutting-intervals
        #[arg(long, conflicts_with_all = ["seed", "params"])]
        builtin: Option<String>,
        /// JSON object with any of num_states, num_sets, vertices_per_set,
        /// denominator_bound, family
        #[arg(long)]
        params: Option<String>,
    },
    /// Run verification suites over a seed range
    Verify {
        #[arg(long, default_value = "all")]
        suites: String,
        /// inclusive, as A..B
        #[arg(long, default_value = "0..99")]
        seeds: String,
        /// state counts cycled by seed
        #[arg(long, default_value = "2,3", value_delimiter = ',')]
        states: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        sets: usize,
        #[arg(long, default_value_t = 3)]
        vertices: usize,
        #[arg(long, default_value_t = 20)]
        denominator: u32,
        #[arg(long, default_value_t = 2)]
        resolution: u32,
        #[arg(long, default_value = "1")]
        radius: String,
        /// skip the hand-built instances
        #[arg(long)]
        no_builtins: bool,
    },
}

/// Bad input: exit 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(path: &Path) -> Result<Instance, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_vector(text: &str) -> Result<UtilityVector, InputError> {
    let entries = text
        .split(',')
        .map(|t| rational::parse(t.trim()))
        .collect::<Result<Vec<Rational>, _>>()
        .map_err(|e| InputError(format!("bad vector {text:?}: {e}")))?;
    Ok(UtilityVector::new(entries))
}

fn resolve_act(inst: &Instance, text: &str) -> Result<Act, InputError> {
    if let Some(a) = inst.act(text) {
        return Ok(a.clone());
    }
    let v = parse_vector(text).map_err(|_| InputError(format!("no act named {text:?}")))?;
    if v.dim() != inst.num_states() {
        return Err(InputError(format!("{text:?} has {} entries, expected {}", v.dim(), inst.num_states())));
    }
    Ok(inst.act_with_utility(&v)?)
}

fn parse_axioms(text: &str) -> Result<Vec<AxiomKind>, InputError> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(AxiomKind::ALL.to_vec());
    }
    Ok(text.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?)
}

fn grid(inst: &Instance, resolution: u32, radius: &str) -> Result<Battery, InputError> {
    let radius = rational::parse(radius)?;
    Ok(axioms::generate_act_grid(inst, resolution, &radius)?)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<(String, bool), InputError> {
    let out = match cli.command {
        Command::Evaluate {
            instance,
            model,
            left,
            right,
        } => {
            let inst = load(&instance)?;
            let kind: ModelKind = model.parse()?;
            let (f, g) = (resolve_act(&inst, &left)?, resolve_act(&inst, &right)?);
            (json(&evaluate(&kind, &inst, &f, &g)?), true)
        }
        Command::Audit {
            instance,
            model,
            axioms: list,
            resolution,
            radius,
        } => {
            let inst = load(&instance)?;
            let kind: ModelKind = model.parse()?;
            let list = parse_axioms(&list)?;
            let battery = grid(&inst, resolution, &radius)?;
            let has_constants = battery.acts.iter().any(Act::is_constant);
            let ctx = axioms::AuditContext::new(&kind, &inst, &battery)?;
            let reports = list
                .into_iter()
                .filter(|a| has_constants || !a.needs_constants())
                .map(|a| ctx.audit(a))
                .collect::<Result<Vec<_>, _>>()?;
            (json(&reports), true)
        }
        Command::Analyze {
            instance,
            resolution,
            radius,
        } => {
            let inst = load(&instance)?;
            let battery = grid(&inst, resolution, &radius)?;
            let vectors: Vec<UtilityVector> =
                battery.acts.iter().map(|a| utility_vector(inst.utility(), a)).collect();
            (json(&ambipref::analysis::analyze(&inst, &vectors)?), true)
        }
        Command::Slice {
            instance,
            direction,
            samples,
            alpha,
            format,
        } => {
            let inst = load(&instance)?;
            let plane = SlicePlane::new(parse_vector(&direction)?)?;
            let alpha = alpha.map(|a| rational::parse(&a)).transpose()?;
            let profile = slice_profile(inst.collection(), &plane, samples, alpha.as_ref())?;
            (export_slice(&profile, &format)?, true)
        }
        Command::Gen { builtin: Some(name), .. } => {
            let (_, inst) = ambipref::builtin::all()
                .into_iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| InputError(format!("no built-in instance {name:?}")))?;
            (instance_to_json(&inst) + "\n", true)
        }
        Command::Gen { seed, params, .. } => {
            let seed = seed.expect("clap requires a seed");
            let params: GenParams = match params {
                Some(p) => serde_json::from_str(&p).map_err(|e| InputError(format!("bad --params: {e}")))?,
                None => GenParams::default(),
            };
            (instance_to_json(&generate_instance(seed, &params)?) + "\n", true)
        }
        Command::Verify {
            suites,
            seeds,
            states,
            sets,
            vertices,
            denominator,
            resolution,
            radius,
            no_builtins,
        } => {
            let suites = parse_suites(&suites)?;
            let seeds: SeedRange = seeds.parse()?;
            let params = VerifyParams {
                states,
                num_sets: sets,
                vertices_per_set: vertices,
                denominator_bound: denominator,
                resolution,
                radius: rational::parse(&radius)?,
                include_builtins: !no_builtins,
            };
            let report = verify(&suites, seeds, &params)?;
            (json(&report), report.passed)
        }
    };
    if let Some(path) = &cli.output {
        fs::write(path, &out.0).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    } else {
        print!("{}", out.0);
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((_, true)) => ExitCode::SUCCESS,
        Ok((_, false)) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("ambipref: {msg}");
            ExitCode::from(2)
        }
    }
}
