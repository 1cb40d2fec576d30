use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use conefan::complex::{set_morphism_cap, ComplexPoint};
use conefan::contact::{component, contact_components, degree_l, lift_contact};
use conefan::io::{
    ray_entries, to_dot, AssignmentFile, CoefficientEntry, ComponentsReport, ContactFile, FanFile, LoadedFan,
    ResolveReport, SCHEMA_VERSION,
};
use conefan::subdivision::{
    ample_coefficients, barycentric, is_subdivision, multiplicity_trace, resolve_with, star_subdivide,
    BarycentricPass, ResolveOptions,
};
use conefan::{Error, LatticeVector};
use serde_json::json;

const CAP_ENV: &str = "CONEFAN_MAX_MORPHISMS";

#[derive(Parser)]
#[command(name = "conefan", version, about = "Cone complexes, subdivisions and contact orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a fan file describes a valid complex.
    Validate { fan: PathBuf },
    /// Resolve to a smooth complex with a boundary labeling.
    Resolve {
        fan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run the barycentric pass even on monodromy-free input.
        #[arg(long)]
        force_barycentric: bool,
    },
    /// One star or barycentric subdivision.
    Subdivide(SubdivideArgs),
    /// Test whether an assignment of source cones is a subdivision.
    CheckSubdivision {
        source: PathBuf,
        target: PathBuf,
        assignment: PathBuf,
        /// Max-norm of the lattice points compared.
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
    /// Contact components with their bands.
    Contacts {
        fan: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Degree of the lifted line bundle on a resolution.
    Degree {
        fan: PathBuf,
        contacts: PathBuf,
        /// Report written by `resolve`.
        #[arg(long)]
        subdivision: PathBuf,
    },
    /// Face lattice in DOT format.
    EmitDot { fan: PathBuf },
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["star", "barycentric"])))]
struct SubdivideArgs {
    fan: PathBuf,
    /// Center as `x=<coords>@<cone id>`, e.g. `x=1,1@0`.
    #[arg(long)]
    star: Option<String>,
    #[arg(long)]
    barycentric: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Rejected,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_fan(path: &Path) -> Result<LoadedFan, Failure> {
    Ok(FanFile::parse(&read(path)?)?.load()?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn validate(path: &Path) -> Outcome {
    let fan = load_fan(path)?;
    let x = &fan.complex;
    let report = x.validate();
    for d in &report.diagnostics {
        eprintln!("{:?}: {}", d.kind, d.message);
    }
    if !report.is_valid() {
        return Err(Failure::Rejected);
    }
    print!(
        "{}",
        pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "valid": true,
            "cones": x.len(),
            "dim": x.dim(),
            "embedded": x.is_embedded(),
            "faithful": x.is_faithful(),
            "monodromy_free": x.is_monodromy_free(),
        }))
    );
    Ok(())
}

fn resolve(path: &Path, out: Option<&Path>, report_path: Option<&Path>, force: bool) -> Outcome {
    let fan = load_fan(path)?;
    let opts = ResolveOptions {
        barycentric: if force { BarycentricPass::Always } else { BarycentricPass::Auto },
        ..ResolveOptions::default()
    };
    let f = resolve_with(&fan.complex, &opts)?;
    let y = f.source();
    let m = ample_coefficients(&f)?;
    let labeling = y.boundary_map()?;
    let report = ResolveReport {
        schema_version: SCHEMA_VERSION,
        history: f.history().into_iter().cloned().collect(),
        rays: ray_entries(y)?,
        exceptional_rays: f.exceptional_rays()?,
        multiplicity_trace: multiplicity_trace(&f),
        ample_coefficients: m.coefficients.iter().map(|(&ray, &m)| CoefficientEntry { ray, m }).collect(),
        boundary_labeling: labeling.labels,
        source: FanFile::diagram_of(y),
        assignment: AssignmentFile::from_map(&f),
    };
    if let Some(out) = out {
        write_or_print(Some(out), &FanFile::from_complex(y).to_json())?;
    }
    write_or_print(report_path, &report.to_json())
}

fn parse_star(spec: &str, fan: &LoadedFan) -> Result<ComplexPoint, Failure> {
    let bad = || Failure::Usage(format!("expected x=<coords>@<cone>, got {spec:?}"));
    let body = spec.strip_prefix("x=").unwrap_or(spec);
    let (coords, cone) = body.split_once('@').ok_or_else(bad)?;
    let coords = coords
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    let cone: u64 = cone.trim().parse().map_err(|_| bad())?;
    let id = fan.cone_id(cone)?;
    let point = LatticeVector::new(coords);
    if !fan.complex.cone(id)?.contains(&point)? {
        return Err(Error::NotContained(point.into_coords()).into());
    }
    Ok(ComplexPoint { cone: id, point })
}

fn subdivide(args: &SubdivideArgs) -> Outcome {
    let fan = load_fan(&args.fan)?;
    let f = match &args.star {
        Some(spec) => star_subdivide(&fan.complex, &parse_star(spec, &fan)?)?,
        None => barycentric(&fan.complex)?,
    };
    write_or_print(args.out.as_deref(), &FanFile::from_complex(f.source()).to_json())
}

fn check_subdivision(source: &Path, target: &Path, assignment: &Path, bound: u64) -> Outcome {
    let source = load_fan(source)?;
    let target = load_fan(target)?;
    let f = AssignmentFile::parse(&read(assignment)?)?.build(source, target)?;
    let check = conefan::subdivision::is_subdivision_up_to(&f, bound)?;
    let mut v = serde_json::to_value(&check).expect("checks serialize");
    v["schema_version"] = json!(SCHEMA_VERSION);
    print!("{}", pretty(&v));
    if check.ok {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}

fn contacts(path: &Path, bound: u64) -> Outcome {
    let fan = load_fan(path)?;
    let report = ComponentsReport { schema_version: SCHEMA_VERSION, bound, components: contact_components(&fan.complex, bound)? };
    print!("{}", pretty(&serde_json::to_value(&report).expect("reports serialize")));
    Ok(())
}

fn degree(fan_path: &Path, contacts_path: &Path, report_path: &Path) -> Outcome {
    let fan = load_fan(fan_path)?;
    let contact_file = ContactFile::parse(&read(contacts_path)?)?;
    let points = contact_file.points(&fan)?;
    let report = ResolveReport::parse(&read(report_path)?)?;
    let f = report.subdivision(fan.complex.clone())?;
    let check = is_subdivision(&f)?;
    if !check.ok {
        return Err(Error::NotASubdivision(check.message).into());
    }
    let m = report.divisor();
    let mut lifted = Vec::with_capacity(points.len());
    for p in &points {
        lifted.push(lift_contact(&f, &component(f.target(), p)?)?);
    }
    let reps: Vec<ComplexPoint> = lifted.iter().map(|c| c.representative.clone()).collect();
    let dl = degree_l(&f, &m, &reps)?;
    let total = contact_file.base_degree.checked_add(dl).ok_or(Error::Overflow)?;
    print!(
        "{}",
        pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "genus": contact_file.genus,
            "base_degree": contact_file.base_degree,
            "lifted_markings": lifted,
            "degree_l": dl,
            "degree_total": total,
        }))
    );
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Ok(v) = std::env::var(CAP_ENV) {
        let cap = v.parse().map_err(|_| Failure::Usage(format!("{CAP_ENV} must be a positive integer")))?;
        set_morphism_cap(cap);
    }
    match cli.command {
        Command::Validate { fan } => validate(&fan),
        Command::Resolve { fan, out, report, force_barycentric } => {
            resolve(&fan, out.as_deref(), report.as_deref(), force_barycentric)
        }
        Command::Subdivide(args) => subdivide(&args),
        Command::CheckSubdivision { source, target, assignment, bound } => {
            check_subdivision(&source, &target, &assignment, bound)
        }
        Command::Contacts { fan, bound } => contacts(&fan, bound),
        Command::Degree { fan, contacts, subdivision } => degree(&fan, &contacts, &subdivision),
        Command::EmitDot { fan } => {
            let fan = load_fan(&fan)?;
            print!("{}", to_dot(&fan.complex));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(if e.is_resource() { 3 } else { 1 })
        }
    }
}
