//! `twodesign`: batch analyses of Weyl-Heisenberg and Clifford groups.
//!
//! Reports go to stdout (or `--output`); diagnostics go to stderr. Exit
//! status: 0 success, 1 internal invariant violation, 2 invalid input,
//! 3 resource limit.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use twodesign::clifford::{closure_enumerate, named_spec, DEFAULT_CLOSURE_LIMIT};
use twodesign::design::{
    self, cyclic_square_demo, frame_potential_double_sum, frame_potential_single_sum, order_class_partition,
    AnalysisOptions,
};
use twodesign::matrix::{TOL_EQUALITY, TOL_RANK};
use twodesign::random::{random_kraus, rng};
use twodesign::twirl::{average_fidelity, channel_twirl, depolarizing_fit, max_matrix_unit_deviation};
use twodesign::{par, ChoiMatrix, Error, GroupSpec, Result};

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "twodesign", version, about = "Unitary 2-design tests for Weyl-Heisenberg and Clifford groups")]
struct Cli {
    /// Named group (`clifford:d`, `clifford:d1xd2x…`, `wh:d`) or a JSON group file.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Tolerance for the depolarizing test in `twirl-demo`.
    #[arg(long, global = true, default_value_t = TOL_EQUALITY)]
    tol_equality: f64,

    /// Relative rank threshold for commutant dimensions.
    #[arg(long, global = true, default_value_t = TOL_RANK)]
    tol_rank: f64,

    /// Abort closures that grow past this many elements.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_LIMIT)]
    closure_limit: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for library loops (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Also write the group's generators in matrix dump format to this file.
    #[arg(long, global = true)]
    dump: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the group without enumerating it.
    Info,
    /// Enumerate the closure and report its size.
    Enumerate,
    /// Frame potential of the enumerated closure.
    FramePotential {
        /// Use the pairwise double sum instead of the single sum.
        #[arg(long)]
        double: bool,
    },
    /// Dimension of the commutant of `g ⊗ ḡ` over the generators.
    CommutantDim,
    /// Displacement operators grouped by projective order.
    OrderClasses,
    /// Full 2-design verdict.
    Verdict {
        /// Skip closure enumeration and decide from generators.
        #[arg(long)]
        no_enumerate: bool,
        /// Skip the commutant computation.
        #[arg(long)]
        no_commutant: bool,
    },
    /// Twirl a channel over the enumerated group and fit the depolarizing family.
    TwirlDemo {
        /// Seed for the random channel.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of Kraus operators of the random channel.
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Read the channel from a Choi file instead.
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Write the twirled Choi matrix here.
        #[arg(long)]
        channel_out: Option<PathBuf>,
        /// Also report the largest matrix-unit deviation from the Haar twirl.
        #[arg(long)]
        unit_deviation: bool,
    },
    /// Character multiplicities of the two squares of a Z4 representation.
    Z4Demo,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GroupTooLarge { .. } | Error::ResourceLimit(_) => 3,
        Error::Invariant(_) => 1,
        _ => 2,
    }
}

fn load_group(cli: &Cli) -> Result<GroupSpec> {
    let name = cli.group.as_deref().ok_or_else(|| Error::InvalidInput("this command needs --group".into()))?;
    let path = Path::new(name);
    if path.exists() {
        return GroupSpec::from_json(&fs::read_to_string(path)?);
    }
    if !name.contains(':') {
        return Err(Error::InvalidInput(format!("{name:?} is neither a named group nor an existing file")));
    }
    named_spec(name)
}

fn header(report: &mut Report, spec: &GroupSpec) {
    report.push("label", spec.label.as_str()).push("dims", Value::from(spec.dims.clone()));
}

fn check_tolerances(cli: &Cli) -> Result<()> {
    for (name, v) in [("--tol-equality", cli.tol_equality), ("--tol-rank", cli.tol_rank)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report> {
    check_tolerances(cli)?;
    let mut report = Report::new();
    if let Command::Z4Demo = cli.command {
        let demo = cyclic_square_demo()?;
        report
            .push("tensor_square", Value::from(demo.tensor_square.to_vec()))
            .push("conjugate_square", Value::from(demo.conjugate_square.to_vec()))
            .push("components_differ", demo.components_differ)
            .push("note", demo.note);
        return Ok(report);
    }

    // resolve the group before any computation
    let spec = load_group(cli)?;
    if let Some(path) = &cli.dump {
        fs::write(path, spec.dump_generators())?;
    }
    header(&mut report, &spec);
    match &cli.command {
        Command::Info => {
            let partition = order_class_partition(&spec.dims)?;
            report
                .push("kind", spec.kind.to_string())
                .push("total_dim", spec.total_dim())
                .push("generator_count", spec.generators.len())
                .push("order_class_count", partition.class_count())
                .push("parallel", par::is_parallel());
        }
        Command::Enumerate => {
            let group = closure_enumerate(&spec, cli.closure_limit)?;
            report.push("group_size", group.len());
        }
        Command::FramePotential { double } => {
            let group = closure_enumerate(&spec, cli.closure_limit)?;
            let fp = if *double { frame_potential_double_sum(&group)? } else { frame_potential_single_sum(&group)? };
            report
                .push("group_size", group.len())
                .push("method", if *double { "double-sum" } else { "single-sum" })
                .push("frame_potential", fp);
        }
        Command::CommutantDim => {
            report.push("commutant_dimension", design::commutant_dimension(&spec, cli.tol_rank)?);
        }
        Command::OrderClasses => {
            let partition = order_class_partition(&spec.dims)?;
            report.push("order_class_count", partition.class_count()).classes("order_classes", partition.counts());
        }
        Command::Verdict { no_enumerate, no_commutant } => {
            let opts = AnalysisOptions {
                closure_limit: cli.closure_limit,
                tol_rank: cli.tol_rank,
                enumerate: !no_enumerate,
                commutant: !no_commutant,
            };
            let r = design::is_two_design(&spec, &opts)?;
            let mut out = Report::new();
            out.push("label", r.label)
                .push("group_size", r.group_size)
                .push("frame_potential", r.frame_potential)
                .push("commutant_dimension", r.commutant_dimension)
                .push("order_class_count", r.order_class_count)
                .classes("order_classes", r.order_classes)
                .push("verdict", r.verdict.as_str());
            return Ok(out);
        }
        Command::TwirlDemo { seed, rank, channel, channel_out, unit_deviation } => {
            let group = closure_enumerate(&spec, cli.closure_limit)?;
            let d = spec.total_dim();
            let (choi, source) = match channel {
                Some(path) => (ChoiMatrix::from_text(&fs::read_to_string(path)?)?, path.display().to_string()),
                None => {
                    if *rank == 0 {
                        return Err(Error::InvalidInput("--rank must be at least 1".into()));
                    }
                    let kraus = random_kraus(d, *rank, &mut rng(*seed));
                    (ChoiMatrix::from_kraus(&kraus)?, format!("random(seed={seed},rank={rank})"))
                }
            };
            if choi.d() != d {
                return Err(Error::DimensionMismatch(format!("channel on d = {} for a group on d = {d}", choi.d())));
            }
            let twirled = channel_twirl(&group, &choi)?;
            let (p, residual) = depolarizing_fit(&twirled);
            report
                .push("group_size", group.len())
                .push("channel", source)
                .push("depolarizing_p", p)
                .push("depolarizing_residual", residual)
                .push("depolarizing", residual <= cli.tol_equality)
                .push("average_fidelity_before", average_fidelity(&choi))
                .push("average_fidelity_after", average_fidelity(&twirled));
            if *unit_deviation {
                let (dev, unit) = max_matrix_unit_deviation(&group)?;
                report.push("max_matrix_unit_deviation", dev).push("max_deviation_unit", Value::from(unit.to_vec()));
            }
            if let Some(path) = channel_out {
                fs::write(path, twirled.to_text())?;
            }
        }
        Command::Z4Demo => unreachable!("handled above"),
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = par::with_threads(cli.threads, || run(&cli)).and_then(|report| {
        let text = report.render(cli.format);
        match &cli.output {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twodesign: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Invariant("x".into())), 1);
        assert_eq!(exit_code(&Error::InvalidInput("x".into())), 2);
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::GroupTooLarge { partial: 1, limit: 1 }), 3);
        assert_eq!(exit_code(&Error::ResourceLimit("x".into())), 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
