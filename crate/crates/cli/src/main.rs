//! Command-line surface: batch optimization of task recordings, bandwidth
//! analysis, actuator sizing and report generation, wired for reproducible
//! runs (single seed, atomic output writes, deterministic file contents).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use fingerspec_core::actuator::{
    collision_torque, gear_strength, load_gear_spec, load_motor_spec, load_sea_spec, motor_torque,
    natural_frequency, sea_window,
};
use fingerspec_core::bandwidth::{min_bandwidth, JointTorqueTrajectory, JointType, Sweep};
use fingerspec_core::model::{ContactPoint, FingerGeometry};
use fingerspec_core::optim::{
    sensitivity_friction, sensitivity_touchpoints, solve_trajectory, GraspConfig, SolverOptions,
    TorqueRequirements,
};
use fingerspec_core::report::{
    compare, everyday_profile, load_profile, suite_csv, summarize_tasks, TaskResult,
};
use fingerspec_core::wrench_io::{
    load_grasp_library, load_task_suite, load_torque_csv, load_trajectory, load_measurements,
    GraspLibrary, TaskConfig,
};

const OUTPUT_DIR_ENV: &str = "FINGERSPEC_OUTPUT_DIR";
const PASS_FRACTION: f64 = 0.98;
const BAND_FRACTION: f64 = 0.05;

#[derive(Parser)]
#[command(
    name = "fingerspec",
    version,
    about = "Joint-level requirement extraction and actuator sizing for a robotic finger"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distribute one task's wrench trajectory over the grasp contacts and
    /// write per-joint torque trajectories plus a peaks summary
    OptimizeTask(OptimizeTaskArgs),
    /// Minimum tracking bandwidth of a torque trajectory CSV
    Bandwidth(BandwidthArgs),
    /// Maximum motor torque from the electromagnetic shear-stress model
    SizeMotor(SpecArgs),
    /// Gear bending strength from the Lewis factor equation
    GearStrength(SpecArgs),
    /// Feasible series-elastic stiffness window and collision behavior
    SeaRange(SeaRangeArgs),
    /// Peak-torque sensitivity to touch-point, handle-radius and friction
    /// perturbations
    Sensitivity(SensitivityArgs),
    /// Compare achieved measurements against a requirements profile and/or
    /// summarize suite results
    Report(ReportArgs),
    /// Execute a full manifest: all tasks, bandwidth analysis, suite summary
    Run(RunArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Multi-start restarts per timestep
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Seed for the position-perturbation restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep contact locations at their nominal values
    #[arg(long)]
    freeze_positions: bool,
    /// Inner iteration budget per solve
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

impl SolverArgs {
    fn to_options(&self) -> SolverOptions {
        SolverOptions {
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.max_iters,
            freeze_positions: self.freeze_positions,
            ..SolverOptions::default()
        }
    }
}

#[derive(Args)]
struct OptimizeTaskArgs {
    /// Task file (same TOML schema as a suite file)
    #[arg(long)]
    task: PathBuf,
    /// Task name to select when the file holds several
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    grasp_library: PathBuf,
    /// Output directory (default: $FINGERSPEC_OUTPUT_DIR or .)
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BandwidthArgs {
    /// Torque trajectory CSV (t,torque)
    #[arg(long)]
    input: PathBuf,
    /// Sweep start (Hz)
    #[arg(long, default_value_t = 0.2)]
    start: f64,
    /// Sweep stop (Hz)
    #[arg(long, default_value_t = 100.0)]
    stop: f64,
    /// Sweep step (Hz)
    #[arg(long, default_value_t = 0.2)]
    step: f64,
    /// Required fraction of samples inside the tolerance band
    #[arg(long, default_value_t = PASS_FRACTION)]
    pass_fraction: f64,
    /// Band width as a fraction of the reference peak
    #[arg(long, default_value_t = BAND_FRACTION)]
    band_fraction: f64,
    /// Output CSV (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpecArgs {
    /// Spec file (TOML)
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct SeaRangeArgs {
    /// Motor spec file (TOML)
    #[arg(long)]
    motor: PathBuf,
    /// Series-elastic element spec file (TOML)
    #[arg(long)]
    sea: PathBuf,
}

#[derive(Args)]
struct SensitivityArgs {
    /// Task file (same TOML schema as a suite file)
    #[arg(long)]
    task: PathBuf,
    /// Task name to select when the file holds several
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    grasp_library: PathBuf,
    /// Touch-point perturbation trials
    #[arg(long, default_value_t = 5)]
    trials: usize,
    /// Touch-point perturbation radius on the handle surface (m)
    #[arg(long, default_value_t = 0.005)]
    pos_radius: f64,
    /// Handle-radius perturbation magnitude (m)
    #[arg(long, default_value_t = 0.005)]
    radius_delta: f64,
    /// Friction coefficients for the friction study (comma-separated)
    #[arg(long, value_delimiter = ',')]
    mu: Vec<f64>,
    /// Output CSV (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Requirements profile TOML (default: the built-in everyday profile)
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Achieved measurements TOML for the desired-vs-achieved comparison
    #[arg(long)]
    achieved: Option<PathBuf>,
    /// Suite results CSV (as written by `run`) for the suite summary
    #[arg(long)]
    results: Option<PathBuf>,
    /// Output CSV for the comparison (default: stdout table only)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Run manifest (TOML)
    #[arg(long)]
    manifest: PathBuf,
    /// Parallel tasks (default: manifest value, then all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the manifest output directory
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct ManifestSolver {
    restarts: Option<usize>,
    max_iters: Option<usize>,
    freeze_positions: Option<bool>,
}

#[derive(Debug, Deserialize)]
struct ManifestSweep {
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
}

/// Batch run description: inputs, solver/sweep settings, output tree, seed.
#[derive(Debug, Deserialize)]
struct RunManifest {
    suite: PathBuf,
    grasp_library: PathBuf,
    output_dir: PathBuf,
    #[serde(default)]
    seed: u64,
    jobs: Option<usize>,
    solver: Option<ManifestSolver>,
    sweep: Option<ManifestSweep>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::OptimizeTask(args) => cmd_optimize_task(args),
        Command::Bandwidth(args) => cmd_bandwidth(args).map(|_| ExitCode::SUCCESS),
        Command::SizeMotor(args) => cmd_size_motor(args).map(|_| ExitCode::SUCCESS),
        Command::GearStrength(args) => cmd_gear_strength(args).map(|_| ExitCode::SUCCESS),
        Command::SeaRange(args) => cmd_sea_range(args).map(|_| ExitCode::SUCCESS),
        Command::Sensitivity(args) => cmd_sensitivity(args).map(|_| ExitCode::SUCCESS),
        Command::Report(args) => cmd_report(args).map(|_| ExitCode::SUCCESS),
        Command::Run(args) => cmd_run(args),
    }
}

/// Atomic write: temp file in the target directory, then rename.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(content.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn default_output_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn file_slug(name: &str) -> String {
    name.to_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn joint_slug(joint: JointType) -> &'static str {
    match joint {
        JointType::Pip => "pip",
        JointType::McpX => "mcp_x",
        JointType::McpZ => "mcp_z",
    }
}

fn select_task(path: &Path, name: Option<&str>) -> Result<TaskConfig> {
    let mut tasks = load_task_suite(path)?;
    match name {
        Some(n) => tasks
            .into_iter()
            .find(|t| t.name == n)
            .ok_or_else(|| anyhow!("no task named '{n}' in {}", path.display())),
        None if tasks.len() == 1 => Ok(tasks.remove(0)),
        None => bail!(
            "{} holds {} tasks; select one with --name",
            path.display(),
            tasks.len()
        ),
    }
}

fn build_grasp_config(task: &TaskConfig, library: &GraspLibrary) -> Result<GraspConfig> {
    let entry = library
        .get(&task.grasp_name)
        .ok_or_else(|| anyhow!("grasp '{}' not in the library", task.grasp_name))?;
    let contacts: Vec<ContactPoint> = entry
        .contacts
        .iter()
        .filter(|c| task.palm || !c.palm)
        .map(|c| ContactPoint {
            nominal_z: c.z,
            nominal_theta: c.theta,
            pressure_radius: c.pressure_radius,
            is_palm: c.palm,
        })
        .collect();
    if task.palm && !contacts.iter().any(|c| c.is_palm) {
        bail!(
            "task '{}' uses the palm but grasp '{}' has no palm contact",
            task.name,
            task.grasp_name
        );
    }
    GraspConfig::new(
        task.radius,
        contacts,
        task.friction_mu,
        FingerGeometry::default(),
    )
    .with_context(|| format!("building grasp for task '{}'", task.name))
}

/// Per joint type: (peak torque N·m, required bandwidth Hz = worst finger).
fn joint_requirements(
    req: &TorqueRequirements,
    sweep: &Sweep,
) -> Result<BTreeMap<JointType, (f64, f64)>> {
    let mut out = BTreeMap::new();
    for joint in JointType::ALL {
        let mut bw = sweep.start;
        for traj in req.trajectories.iter().filter(|t| t.joint == joint) {
            bw = bw.max(min_bandwidth(traj, sweep, PASS_FRACTION, BAND_FRACTION)?.bandwidth);
        }
        out.insert(joint, (req.peak(joint), bw));
    }
    Ok(out)
}

fn torque_csv(seed: u64, traj: &JointTorqueTrajectory) -> String {
    let dt = 1.0 / traj.sample_rate;
    let mut out = format!("# seed = {seed}\nt,torque\n");
    for (k, v) in traj.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", k as f64 * dt, v));
    }
    out
}

fn peaks_csv(seed: u64, per_joint: &BTreeMap<JointType, (f64, f64)>, infeasible: usize) -> String {
    let mut out = format!("# seed = {seed}\njoint,peak_torque_Nm,bandwidth_Hz,infeasible_steps\n");
    for (joint, &(peak, bw)) in per_joint {
        out.push_str(&format!("{},{},{},{}\n", joint.label(), peak, bw, infeasible));
    }
    out
}

struct TaskOutcome {
    task: TaskConfig,
    requirements: TorqueRequirements,
    per_joint: BTreeMap<JointType, (f64, f64)>,
}

fn run_task(
    task: &TaskConfig,
    library: &GraspLibrary,
    options: &SolverOptions,
    sweep: &Sweep,
) -> Result<TaskOutcome> {
    let config = build_grasp_config(task, library)?;
    let traj = load_trajectory(&task.trajectory_path)?;
    let requirements = solve_trajectory(&traj, &config, options);
    if requirements.infeasible_warning {
        log::warn!(
            "task '{}': {} of {} timesteps infeasible",
            task.name,
            requirements.infeasible_steps.len(),
            traj.samples.len()
        );
    }
    let per_joint = joint_requirements(&requirements, sweep)?;
    Ok(TaskOutcome {
        task: task.clone(),
        requirements,
        per_joint,
    })
}

fn write_task_outputs(dir: &Path, seed: u64, outcome: &TaskOutcome) -> Result<()> {
    for traj in &outcome.requirements.trajectories {
        let file = dir.join(format!("f{}_{}.csv", traj.finger_index, joint_slug(traj.joint)));
        write_atomic(&file, &torque_csv(seed, traj))?;
    }
    write_atomic(
        &dir.join("peaks.csv"),
        &peaks_csv(
            seed,
            &outcome.per_joint,
            outcome.requirements.infeasible_steps.len(),
        ),
    )
}

fn cmd_optimize_task(args: OptimizeTaskArgs) -> Result<ExitCode> {
    let task = select_task(&args.task, args.name.as_deref())?;
    let library = load_grasp_library(&args.grasp_library)?;
    let options = args.solver.to_options();
    let outcome = run_task(&task, &library, &options, &Sweep::default())?;
    let dir = default_output_dir(args.output_dir).join(file_slug(&task.name));
    write_task_outputs(&dir, options.seed, &outcome)?;
    println!("wrote {} trajectory files to {}", outcome.requirements.trajectories.len(), dir.display());
    for (joint, &(peak, bw)) in &outcome.per_joint {
        println!("{}: peak {:.4} Nm, bandwidth {:.1} Hz", joint.label(), peak, bw);
    }
    if outcome.requirements.infeasible_warning {
        eprintln!(
            "warning: {} infeasible timesteps (> 10%)",
            outcome.requirements.infeasible_steps.len()
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bandwidth(args: BandwidthArgs) -> Result<()> {
    let (sample_rate, values) = load_torque_csv(&args.input)?;
    let traj = JointTorqueTrajectory {
        sample_rate,
        joint: JointType::Pip, // label only; the analysis is joint-agnostic
        finger_index: 0,
        values,
    };
    let sweep = Sweep {
        start: args.start,
        stop: args.stop,
        step: args.step,
    };
    let result = min_bandwidth(&traj, &sweep, args.pass_fraction, args.band_fraction)?;
    let csv = format!(
        "bandwidth_Hz,pass_fraction,tolerance_band_Nm,passed\n{},{},{},{}\n",
        result.bandwidth, result.pass_fraction, result.tolerance_band, result.passed
    );
    emit(args.output.as_deref(), &csv)
}

fn cmd_size_motor(args: SpecArgs) -> Result<()> {
    let spec = load_motor_spec(&args.spec)?;
    println!("metric,value");
    println!("motor_torque_Nm,{}", motor_torque(&spec));
    Ok(())
}

fn cmd_gear_strength(args: SpecArgs) -> Result<()> {
    let spec = load_gear_spec(&args.spec)?;
    println!("metric,value");
    println!("gear_strength_Nm,{}", gear_strength(&spec));
    Ok(())
}

fn cmd_sea_range(args: SeaRangeArgs) -> Result<()> {
    let motor = load_motor_spec(&args.motor)?;
    let sea = load_sea_spec(&args.sea)?;
    let window = sea_window(&motor, sea.strength, sea.bandwidth_target);
    let (tau, deflection) = collision_torque(&motor, sea.stiffness);
    println!("metric,value");
    println!("k_min_Nm_per_rad,{}", window.k_min);
    println!("k_max_Nm_per_rad,{}", window.k_max);
    println!("feasible,{}", window.feasible);
    println!("collision_torque_Nm,{}", tau);
    println!("max_deflection_rad,{}", deflection);
    println!("natural_frequency_rad_s,{}", natural_frequency(&motor, sea.stiffness));
    if !window.feasible {
        eprintln!(
            "warning: no stiffness satisfies both requirements (k_min {} > k_max {})",
            window.k_min, window.k_max
        );
    }
    Ok(())
}

fn cmd_sensitivity(args: SensitivityArgs) -> Result<()> {
    let task = select_task(&args.task, args.name.as_deref())?;
    let library = load_grasp_library(&args.grasp_library)?;
    let options = args.solver.to_options();
    let config = build_grasp_config(&task, &library)?;
    let traj = load_trajectory(&task.trajectory_path)?;
    let geometry = FingerGeometry::default();

    let mut csv = String::from("study,mean_Nm,std_Nm,trials,resamples\n");
    let touch = sensitivity_touchpoints(
        &traj,
        &config,
        geometry,
        args.trials,
        args.pos_radius,
        args.radius_delta,
        options.seed,
        &options,
    )?;
    csv.push_str(&format!(
        "touchpoints,{},{},{},{}\n",
        touch.mean, touch.std, touch.trials, touch.resamples
    ));
    if !args.mu.is_empty() {
        let friction = sensitivity_friction(&traj, &config, geometry, &args.mu, &options)?;
        csv.push_str(&format!(
            "friction,{},{},{},{}\n",
            friction.mean, friction.std, friction.trials, friction.resamples
        ));
    }
    emit(args.output.as_deref(), &csv)
}

/// Parse a suite results CSV (as written by `run`) back into task results.
fn parse_suite_results(path: &Path) -> Result<Vec<TaskResult>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut tasks: BTreeMap<String, TaskResult> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.is_empty() || i == 0 && line.starts_with("task,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!("{}:{}: expected 7 fields, got {}", path.display(), i + 1, fields.len());
        }
        let joint = JointType::ALL
            .into_iter()
            .find(|j| j.label() == fields[1])
            .ok_or_else(|| anyhow!("{}:{}: unknown joint '{}'", path.display(), i + 1, fields[1]))?;
        let parse = |k: usize| -> Result<f64> {
            fields[k]
                .parse()
                .map_err(|_| anyhow!("{}:{}: bad number '{}'", path.display(), i + 1, fields[k]))
        };
        let entry = tasks.entry(fields[0].to_string()).or_insert_with(|| {
            order.push(fields[0].to_string());
            TaskResult {
                task: fields[0].to_string(),
                handle_size: fields[4].to_string(),
                palm: fields[5] == "true",
                infeasible_steps: fields[6].parse().unwrap_or(0),
                per_joint: BTreeMap::new(),
            }
        });
        entry.per_joint.insert(joint, (parse(2)?, parse(3)?));
    }
    Ok(order.into_iter().map(|name| tasks.remove(&name).unwrap()).collect())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    if args.achieved.is_none() && args.results.is_none() {
        bail!("nothing to report: pass --achieved and/or --results");
    }
    let profile = match &args.profile {
        Some(path) => load_profile(path)?,
        None => everyday_profile(),
    };
    if let Some(results) = &args.results {
        let summary = summarize_tasks(&parse_suite_results(results)?)?;
        println!("suite requirements (max over tasks):");
        for (joint, &(peak, bw)) in &summary.per_joint {
            println!("  {}: peak {:.4} Nm, bandwidth {:.1} Hz", joint.label(), peak, bw);
        }
        for ((size, palm), names) in &summary.groups {
            println!(
                "  {} handle, {}: {} tasks",
                size,
                if *palm { "with palm" } else { "fingers only" },
                names.len()
            );
        }
    }
    if let Some(achieved_path) = &args.achieved {
        let achieved = load_measurements(achieved_path)?;
        let report = compare(&profile, &achieved)?;
        print!("{}", report.to_table());
        println!("{} of {} requirements met", report.passes(), report.rows.len());
        if let Some(output) = &args.output {
            write_atomic(output, &report.to_csv())?;
        }
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let manifest: RunManifest = toml::from_str(&text)
        .with_context(|| format!("parsing {}", args.manifest.display()))?;
    let base = args.manifest.parent().unwrap_or(Path::new("."));

    let suite = load_task_suite(&base.join(&manifest.suite))?;
    if suite.is_empty() {
        bail!("suite {} is empty", manifest.suite.display());
    }
    let library = load_grasp_library(&base.join(&manifest.grasp_library))?;
    let output_dir = args.output_dir.unwrap_or_else(|| base.join(&manifest.output_dir));

    let solver = manifest.solver.as_ref();
    let base_options = SolverOptions {
        restarts: solver.and_then(|s| s.restarts).unwrap_or(5),
        max_iters: solver.and_then(|s| s.max_iters).unwrap_or(500),
        freeze_positions: solver.and_then(|s| s.freeze_positions).unwrap_or(false),
        seed: manifest.seed,
        ..SolverOptions::default()
    };
    let sweep = Sweep {
        start: manifest.sweep.as_ref().and_then(|s| s.start).unwrap_or(0.2),
        stop: manifest.sweep.as_ref().and_then(|s| s.stop).unwrap_or(100.0),
        step: manifest.sweep.as_ref().and_then(|s| s.step).unwrap_or(0.2),
    };

    let jobs = args.jobs.or(manifest.jobs);
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(jobs) = jobs {
            builder = builder.num_threads(jobs.max(1));
        }
        builder.build().context("building thread pool")?
    };

    // counter-based per-task seed derivation from the single manifest seed
    let outcomes: Vec<Result<TaskOutcome>> = pool.install(|| {
        use rayon::prelude::*;
        suite
            .par_iter()
            .enumerate()
            .map(|(i, task)| {
                let options = SolverOptions {
                    seed: manifest.seed.wrapping_add(i as u64),
                    ..base_options.clone()
                };
                run_task(task, &library, &options, &sweep)
                    .with_context(|| format!("task '{}'", task.name))
            })
            .collect()
    });

    let mut results = Vec::with_capacity(suite.len());
    let mut partial = false;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        let task_seed = manifest.seed.wrapping_add(i as u64);
        let dir = output_dir.join("tasks").join(file_slug(&outcome.task.name));
        write_task_outputs(&dir, task_seed, &outcome)?;
        partial |= outcome.requirements.infeasible_warning;
        results.push(TaskResult {
            task: outcome.task.name.clone(),
            handle_size: outcome
                .task
                .handle_size
                .map(|s| s.label().to_string())
                .unwrap_or_else(|| format!("r={}", outcome.task.radius)),
            palm: outcome.task.palm,
            infeasible_steps: outcome.requirements.infeasible_steps.len(),
            per_joint: outcome.per_joint.clone(),
        });
    }

    let summary = summarize_tasks(&results)?;
    let mut suite_out = format!("# seed = {}\n", manifest.seed);
    suite_out.push_str(&suite_csv(&summary));
    write_atomic(&output_dir.join("suite_results.csv"), &suite_out)?;

    let mut req_out = format!("# seed = {}\njoint,peak_torque_Nm,bandwidth_Hz\n", manifest.seed);
    for (joint, &(peak, bw)) in &summary.per_joint {
        req_out.push_str(&format!("{},{},{}\n", joint.label(), peak, bw));
    }
    write_atomic(&output_dir.join("requirements.csv"), &req_out)?;

    println!("{} tasks -> {}", results.len(), output_dir.display());
    for (joint, &(peak, bw)) in &summary.per_joint {
        println!("{}: peak {:.4} Nm, bandwidth {:.1} Hz", joint.label(), peak, bw);
    }
    if partial {
        eprintln!("warning: at least one task exceeded the 10% infeasible-timestep threshold");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}
