//! Command implementations behind the `bt-orbits` binary.

use std::path::PathBuf;

use bt_orbits::config::RunConfig;
use bt_orbits::orbits::{
    circle_limit_census, classify_orbit, project_subtree, rf_membership, thickness_sample, Census, Circle, OrbitReport,
    Projection, RfMembership, ThicknessWitness,
};
use bt_orbits::padic::{density_check, parse_scalar, DensityWitness};
use bt_orbits::pgl2::ProjMatrix;
use bt_orbits::schottky::{high_branched_check, BranchingReport, CoreGraph, SchottkyGroup};
use bt_orbits::tree::Vertex;
use bt_orbits::{fixtures, Error};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bt-orbits", version, about = "Schottky groups and circle orbits on the Bruhat-Tits tree")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the Schottky property and high branching.
    Verify,
    /// Compute the core graph.
    Core,
    /// Census and orbit classification of a circle.
    Probe,
    /// Thickness of recurrence sets along frames.
    Thick,
    /// Project the hull of a circle into the quotient.
    Project,
    /// Density of unit rotations.
    Density,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Core => "core",
            Command::Probe => "probe",
            Command::Thick => "thick",
            Command::Project => "project",
            Command::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// TOML run configuration.
    #[arg(long, global = true, conflicts_with = "fixture")]
    pub config: Option<PathBuf>,
    /// Built-in configuration name.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Census depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Word length for the core graph.
    #[arg(long, global = true)]
    pub wordlen: Option<usize>,
    /// Ball radius for `project`.
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    /// Working precision in p-adic digits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Circle representative, overriding the configured probe.
    #[arg(long, global = true)]
    pub circle: Option<String>,
    /// Unit literal for `density`; repeatable.
    #[arg(long = "unit", global = true)]
    pub units: Vec<String>,
    /// Directory for the report and graph files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also emit Graphviz files.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Skip the high-branching check before other commands.
    #[arg(long, global = true)]
    pub skip_verify: bool,
    /// Print the JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
}

/// Everything a command produces.
pub struct Outcome {
    pub code: i32,
    pub report: serde_json::Value,
    pub summary: String,
    /// `(file name, contents)`.
    pub dots: Vec<(String, String)>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::InvalidContext(_) => EXIT_CONFIG,
        _ => EXIT_COMPUTATION,
    }
}

/// The configuration with command-line overrides applied.
pub fn resolve_config(opts: &Options) -> Result<RunConfig, Error> {
    let mut cfg = match (&opts.config, &opts.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        (None, Some(name)) => fixtures::fixture(name)?,
        (None, None) => return Err(Error::Config("one of --config or --fixture is required".into())),
    };
    if let Some(d) = opts.depth {
        cfg.budgets.depth = d;
    }
    if let Some(l) = opts.wordlen {
        cfg.budgets.word_length = l;
    }
    if let Some(r) = opts.radius {
        cfg.budgets.radius = r;
    }
    if let Some(p) = opts.precision {
        cfg.precision = p;
    }
    if let Some(c) = &opts.circle {
        cfg.probe = Some(bt_orbits::config::ProbeSpec { circle: c.clone() });
    }
    if !opts.units.is_empty() {
        cfg.density.units = opts.units.clone();
    }
    cfg.validate()?;
    cfg.context()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct GeneratorInfo {
    index: usize,
    matrix: String,
    length: u32,
    attracting: String,
    repelling: String,
    offset: i32,
}

#[derive(Serialize)]
struct Verification {
    schottky: bool,
    /// Set when no labeling was found.
    failure: Option<String>,
    offsets: Vec<i32>,
    generators: Vec<GeneratorInfo>,
    /// Omitted with `--skip-verify`.
    branching: Option<BranchingReport>,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    config: &'a RunConfig,
    verification: &'a Verification,
    result: Option<T>,
}

fn group_of(cfg: &RunConfig) -> Result<Result<SchottkyGroup, Error>, Error> {
    let mats = cfg.generator_matrices()?;
    match SchottkyGroup::verify(&mats, cfg.budgets.window, cfg.offsets.as_deref()) {
        Ok(g) => Ok(Ok(g)),
        Err(e @ (Error::NoValidLabeling { .. } | Error::NonHyperbolicGenerator(_))) => Ok(Err(e)),
        Err(e) => Err(e),
    }
}

fn generator_info(g: &SchottkyGroup) -> Vec<GeneratorInfo> {
    g.generators()
        .iter()
        .enumerate()
        .map(|(i, gen)| GeneratorInfo {
            index: i + 1,
            matrix: gen.matrix.to_string(),
            length: gen.hyperbolic.length,
            attracting: format!("{:.6}", gen.hyperbolic.fixed_plus),
            repelling: format!("{:.6}", gen.hyperbolic.fixed_minus),
            offset: gen.offset,
        })
        .collect()
}

fn circle_of(cfg: &RunConfig) -> Result<Circle, Error> {
    let rep = cfg.probe_circle()?.ok_or_else(|| Error::Config("no circle: set [probe] or pass --circle".into()))?;
    Circle::new(rep)
}

fn finish<T: Serialize>(
    command: Command,
    cfg: &RunConfig,
    verification: &Verification,
    result: Option<T>,
    code: i32,
    summary: String,
    dots: Vec<(String, String)>,
) -> Result<Outcome, Error> {
    let report = Report { command: command.name(), config: cfg, verification, result };
    let report = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Outcome { code, report, summary, dots })
}

#[derive(Serialize)]
struct CoreResult {
    vertices: Vec<Vertex>,
    degrees: Vec<usize>,
    diameter: u32,
    connected: bool,
    graph: CoreGraph,
}

#[derive(Serialize)]
struct ProbeResult {
    circle: Circle,
    census: Census,
    orbit: OrbitReport,
}

#[derive(Serialize)]
struct ThickFrame {
    frame: String,
    membership: RfMembership,
    witness: ThicknessWitness,
}

#[derive(Serialize)]
struct ThickResult {
    k: u32,
    core_diameter: u32,
    frames: Vec<ThickFrame>,
    misses: usize,
}

#[derive(Serialize)]
struct DensityEntry {
    unit: String,
    check: DensityWitness,
}

#[derive(Serialize)]
struct DensityResult {
    units: Vec<DensityEntry>,
    all_dense: bool,
}

/// Run one command against a resolved configuration.
pub fn run(command: Command, cfg: &RunConfig, opts: &Options) -> Result<Outcome, Error> {
    if command == Command::Density && !cfg.density.units.is_empty() {
        return density(cfg);
    }
    let group = group_of(cfg)?;
    let g = match group {
        Ok(g) => g,
        Err(e) => {
            let v = Verification {
                schottky: false,
                failure: Some(e.to_string()),
                offsets: Vec::new(),
                generators: Vec::new(),
                branching: None,
            };
            let summary = format!("not a Schottky group: {e}");
            return finish::<()>(command, cfg, &v, None, EXIT_NEGATIVE, summary, Vec::new());
        }
    };
    let core = CoreGraph::compute(&g, cfg.budgets.word_length)?;
    let branching = if opts.skip_verify && command != Command::Verify {
        None
    } else {
        Some(high_branched_check(&g, &core, cfg.budgets.density_words)?)
    };
    let verification = Verification {
        schottky: true,
        failure: None,
        offsets: g.offsets(),
        generators: generator_info(&g),
        branching,
    };
    let b = cfg.budgets.clone();
    match command {
        Command::Verify => {
            let br = verification.branching.as_ref().expect("verify always checks branching");
            let code = if br.highly_branched { EXIT_PASS } else { EXIT_NEGATIVE };
            let mut summary = format!(
                "Schottky: yes (offsets {:?})\ncore: {} vertices, degrees {:?}\ndegree condition: {}\ndensity condition: {}",
                verification.offsets, core.len(), core.degrees, br.degrees.holds, br.density.holds
            );
            for (v, d) in &br.degrees.low_degree {
                summary.push_str(&format!("\n  degree {d} at {v} (need {})", br.degrees.min_degree));
            }
            if let Some(w) = &br.density.witness {
                summary.push_str(&format!("\n  density witness {}", w.word));
            }
            summary.push_str(&format!("\nhighly branched: {}", br.highly_branched));
            finish::<()>(command, cfg, &verification, None, code, summary, Vec::new())
        }
        Command::Core => {
            let summary = format!(
                "core: {} vertices {:?}, degrees {:?}, diameter {}",
                core.len(),
                core.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                core.degrees,
                core.diameter()
            );
            let dots = vec![("core.dot".to_string(), core.to_dot())];
            let r = CoreResult {
                vertices: core.vertices.clone(),
                degrees: core.degrees.clone(),
                diameter: core.diameter(),
                connected: core.is_connected(),
                graph: core,
            };
            finish(command, cfg, &verification, Some(r), EXIT_PASS, summary, dots)
        }
        Command::Probe => {
            let c = circle_of(cfg)?;
            let census = circle_limit_census(&c, &g, b.depth)?;
            let orbit = classify_orbit(&c, &g, b.depth, b.stabilizer_length)?;
            let code = if orbit.case_tag.is_some() { EXIT_PASS } else { EXIT_NEGATIVE };
            let summary = format!(
                "circle {c}\ndepth {}: {:?}, {} persistent rays\nstabilizer words: {}\ncase {:?} ({})",
                b.depth,
                census.verdict,
                census.ray_count,
                orbit.stabilizer_words.len(),
                orbit.case,
                orbit.evidence
            );
            finish(command, cfg, &verification, Some(ProbeResult { circle: c, census, orbit }), code, summary, Vec::new())
        }
        Command::Thick => {
            let diameter = core.diameter();
            let frames: Vec<ProjMatrix> = if cfg.thick.frames.is_empty() {
                g.generators().iter().take(3).map(|gen| gen.hyperbolic.conjugator).collect()
            } else {
                let ctx = cfg.context()?;
                cfg.thick
                    .frames
                    .iter()
                    .map(|s| ProjMatrix::parse(ctx, s).map_err(|e| Error::Config(format!("frame: {e}"))))
                    .collect::<Result<_, _>>()?
            };
            let mut out = Vec::new();
            for f in frames {
                let membership = rf_membership(&f, &g, b.depth)?;
                let witness = thickness_sample(&f, &g, cfg.thick.k, cfg.thick.shell_min..=cfg.thick.shell_max, b.depth, diameter)?;
                out.push(ThickFrame { frame: f.to_string(), membership, witness });
            }
            let misses: usize = out.iter().map(|f| f.witness.misses.len()).sum();
            let code = if misses == 0 { EXIT_PASS } else { EXIT_NEGATIVE };
            let summary = format!(
                "K = {}, shells {}..={}, depth {}: {} frames, {} shell misses",
                cfg.thick.k,
                cfg.thick.shell_min,
                cfg.thick.shell_max,
                b.depth,
                out.len(),
                misses
            );
            let r = ThickResult { k: cfg.thick.k, core_diameter: diameter, frames: out, misses };
            finish(command, cfg, &verification, Some(r), code, summary, Vec::new())
        }
        Command::Project => {
            let c = circle_of(cfg)?;
            let pr: Projection = project_subtree(&c, &g, b.radius, b.depth, b.stabilizer_length, b.frontier_cap)?;
            let summary = format!(
                "circle {c}\nradius {}: growth {:?}, core vertices met {}\nshape: {}",
                b.radius,
                pr.growth,
                pr.core_hit.len(),
                pr.shape
            );
            let dots = vec![("projection.dot".to_string(), pr.to_dot())];
            finish(command, cfg, &verification, Some(pr), EXIT_PASS, summary, dots)
        }
        Command::Density => {
            let dc = verification.branching.as_ref().map(|b| b.density.clone());
            let dc = match dc {
                Some(d) => d,
                None => bt_orbits::schottky::density_condition(&g, b.density_words)?,
            };
            let code = if dc.holds { EXIT_PASS } else { EXIT_NEGATIVE };
            let summary = match &dc.witness {
                Some(w) => format!("dense rotation from {}", w.word),
                None => format!("no dense rotation among {} words", dc.examined),
            };
            finish(command, cfg, &verification, Some(dc), code, summary, Vec::new())
        }
    }
}

fn density(cfg: &RunConfig) -> Result<Outcome, Error> {
    let ctx = cfg.context()?;
    let mut units = Vec::new();
    for u in &cfg.density.units {
        let a = parse_scalar(ctx, u).map_err(|e| Error::Config(format!("unit {u}: {e}")))?;
        units.push(DensityEntry { unit: u.clone(), check: density_check(&a)? });
    }
    let all_dense = units.iter().all(|u| u.check.dense);
    let summary = units
        .iter()
        .map(|u| format!("{}: dense {} (zeta order {}, angle valuation {:?})", u.unit, u.check.dense, u.check.zeta_order, u.check.theta_valuation))
        .collect::<Vec<_>>()
        .join("\n");
    let v = Verification { schottky: false, failure: None, offsets: Vec::new(), generators: Vec::new(), branching: None };
    let code = if all_dense { EXIT_PASS } else { EXIT_NEGATIVE };
    finish(Command::Density, cfg, &v, Some(DensityResult { units, all_dense }), code, summary, Vec::new())
}

/// Write or print the outcome as requested; returns the exit code.
pub fn emit(command: Command, opts: &Options, outcome: &Outcome) -> i32 {
    let json = serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n";
    if let Some(dir) = &opts.out {
        let write = |name: &str, body: &str| std::fs::write(dir.join(name), body);
        let res = std::fs::create_dir_all(dir).and_then(|_| write(&format!("{}.json", command.name()), &json)).and_then(|_| {
            if opts.dot {
                for (name, body) in &outcome.dots {
                    write(name, body)?;
                }
            }
            Ok(())
        });
        if let Err(e) = res {
            eprintln!("error: cannot write to {}: {e}", dir.display());
            return EXIT_CONFIG;
        }
    }
    if opts.json {
        print!("{json}");
    } else {
        println!("{}", outcome.summary);
    }
    if opts.dot && opts.out.is_none() {
        for (_, body) in &outcome.dots {
            print!("{body}");
        }
    }
    outcome.code
}

/// Parse-free entry point used by the binary.
pub fn main_with(cli: &Cli) -> i32 {
    let cfg = match resolve_config(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    match run(cli.command, &cfg, &cli.opts) {
        Ok(outcome) => emit(cli.command, &cli.opts, &outcome),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
