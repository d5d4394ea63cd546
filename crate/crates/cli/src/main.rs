use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdm_core::gr::Stabilisation;
use hdm_core::hdm::{assemble_hessian_scheme, BTensor};
use hdm_core::mesh::io::mesh_to_string;
use hdm_core::mesh::{CenterRule, ElementKind, MeshFamily};
use hdm_core::problems::{problem_by_id, PROBLEM_IDS};
use hdm_core::study::{build_ops, run_diagnostics, run_study, SchemeId, StudyConfig};
use hdm_core::HdmError;

#[derive(Parser)]
#[command(name = "hdm", version, about = "Hessian discretisations of the clamped biharmonic problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study: solve on successive levels and report errors and orders.
    Run(StudyArgs),
    /// Sweep the consistency, limit-conformity and coercivity measures over levels.
    Diagnostics(StudyArgs),
    /// Print the mesh a scheme would use at one level.
    Mesh(MeshArgs),
    /// Print the reduced Hessian-scheme matrix in coordinate format.
    Matrix(MatrixArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Element {
    /// Criss-cross triangles.
    Triangles,
    /// One-diagonal triangles.
    Diagonal,
    Rectangles,
}

impl From<Element> for ElementKind {
    fn from(e: Element) -> Self {
        match e {
            Element::Triangles => ElementKind::Triangle,
            Element::Diagonal => ElementKind::DiagonalTriangle,
            Element::Rectangles => ElementKind::Rectangle,
        }
    }
}

#[derive(Args, Clone)]
struct StudyArgs {
    /// morley, adini, fvm, mfvm or gr.
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeId,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PROBLEM_IDS))]
    problem: String,
    /// Number of refinement levels.
    #[arg(long, default_value_t = 5)]
    levels: u32,
    /// Coarsest refinement level.
    #[arg(long, default_value_t = 2)]
    first_level: u32,
    /// Gradient-recovery stabilisation factor.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Hessian twist; defaults to identity, or laplacian for the finite-volume schemes.
    #[arg(long, value_parser = parse_btensor)]
    b: Option<BTensor>,
    /// Override the scheme's default element shape.
    #[arg(long, value_enum)]
    mesh: Option<Element>,
    #[arg(long, default_value = "orthogonal", value_parser = parse_stabilisation)]
    stabilisation: Stabilisation,
    /// Relative CG tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Write CSV (and plot data for `run`) to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print an aligned table instead of CSV.
    #[arg(long)]
    pretty: bool,
    /// Accepted for interface compatibility; the studies are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

impl StudyArgs {
    fn config(&self) -> StudyConfig {
        let mut c = StudyConfig::new(self.scheme, &self.problem, self.levels);
        c.first_level = self.first_level;
        c.rho = self.rho;
        c.b = self.b;
        c.element = self.mesh.map(Into::into);
        c.stabilisation = self.stabilisation;
        c.tol = self.tol;
        c
    }
}

#[derive(Args)]
struct MeshArgs {
    /// morley, adini, fvm, mfvm or gr.
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeId,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PROBLEM_IDS))]
    problem: String,
    #[arg(long, default_value_t = 2)]
    level: u32,
    #[arg(long, value_enum)]
    mesh: Option<Element>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    mesh: MeshArgs,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, value_parser = parse_btensor)]
    b: Option<BTensor>,
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    s.parse()
}

fn parse_btensor(s: &str) -> Result<BTensor, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_stabilisation(s: &str) -> Result<Stabilisation, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn exit_code(err: &HdmError) -> u8 {
    match err {
        HdmError::IncompatibleSchemeMesh { .. }
        | HdmError::InvalidRho(_)
        | HdmError::NotAdmissible { .. }
        | HdmError::DegenerateFace { .. }
        | HdmError::NotTriangular(_)
        | HdmError::NotRectangular(_)
        | HdmError::EmptyConstrainedSpace
        | HdmError::UnsupportedDegree(_) => 2,
        HdmError::Io(_) => 1,
        _ => 3,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), HdmError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn mesh_config(args: &MeshArgs) -> StudyConfig {
    let mut c = StudyConfig::new(args.scheme, &args.problem, 1);
    c.first_level = args.level;
    c.element = args.mesh.map(Into::into);
    c
}

fn family(config: &StudyConfig) -> MeshFamily {
    let domain = problem_by_id::<f64>(&config.problem).expect("validated by clap").domain();
    let element = config.element.unwrap_or(config.scheme.default_element());
    MeshFamily::new(domain, element, CenterRule::MassCenter)
}

fn execute(command: Command) -> Result<(), HdmError> {
    match command {
        Command::Run(args) => {
            let report = run_study::<f64>(&args.config())?;
            let text = if args.pretty { report.to_pretty() } else { report.to_csv() };
            emit(args.out.as_deref(), &text)?;
            if let Some(out) = &args.out {
                for (suffix, data) in report.plot_data() {
                    fs::write(out.with_extension(format!("{suffix}.dat")), data)?;
                }
            }
        }
        Command::Diagnostics(args) => {
            let report = run_diagnostics::<f64>(&args.config())?;
            let text = if args.pretty { report.to_pretty() } else { report.to_csv() };
            emit(args.out.as_deref(), &text)?;
        }
        Command::Mesh(args) => {
            let config = mesh_config(&args);
            config.validate()?;
            let mesh = family(&config).build::<f64>(args.level)?;
            emit(None, &mesh_to_string(&mesh))?;
        }
        Command::Matrix(args) => {
            let mut config = mesh_config(&args.mesh);
            config.rho = args.rho;
            config.b = args.b;
            config.validate()?;
            let mesh = family(&config).build::<f64>(args.mesh.level)?;
            let ops = build_ops(&config, &mesh)?;
            let (system, _) = assemble_hessian_scheme(ops.as_ref(), |_| Ok(0.0))?;
            let mut buf = Vec::new();
            system.matrix.write_coordinate(&mut buf)?;
            io::stdout().lock().write_all(&buf)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&HdmError::InvalidRho(0.0)), 2);
        assert_eq!(exit_code(&HdmError::EmptyConstrainedSpace), 2);
        assert_eq!(exit_code(&HdmError::Io(io::Error::other("disk"))), 1);
    }

    #[test]
    fn element_names_follow_mesh_kinds() {
        assert_eq!(ElementKind::from(Element::Diagonal), ElementKind::DiagonalTriangle);
        assert_eq!(ElementKind::from(Element::Rectangles), ElementKind::Rectangle);
    }
}
