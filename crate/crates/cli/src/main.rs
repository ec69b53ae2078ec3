use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ledid_core::analysis::DEFAULT_THRESHOLD_BER;
use ledid_core::export::{write_csv, write_pgm};
use ledid_core::oracle::{verify_agreement, DEFAULT_SEED, DEFAULT_TRIALS};
use ledid_core::{
    builtin_g1, builtin_l1, coverage, evaluate_grid, evaluate_link, load_scenario_with_defaults, resolvability,
    BerGrid, CoverageOptions, GridSpec, Reach, Scenario, Vec3,
};

/// LED-ID link simulator: BER fields, coverage and resolvability for
/// Lambertian luminaire layouts.
#[derive(Parser)]
#[command(name = "ledid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and print a normalized summary.
    Validate {
        /// Scenario TOML file, or builtin:l1 / builtin:g1.
        scenario: String,
    },
    /// Evaluate one tag over a receiver plane and export the field.
    Grid {
        scenario: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Receiver plane distance below the luminaires, cm.
        #[arg(long)]
        plane_cm: f64,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional plain PGM heatmap of log10(BER).
        #[arg(long)]
        heatmap: Option<PathBuf>,
    },
    /// Evaluate one tag at several plane distances, one CSV per plane.
    Sweep {
        scenario: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Comma-separated plane distances, cm.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        planes_cm: Vec<f64>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximum reliable distance and off-axis angle for one tag.
    Coverage {
        scenario: String,
        #[arg(long)]
        tag: String,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_BER)]
        threshold: f64,
        /// Give up the distance search beyond this range, m.
        #[arg(long)]
        max_distance_m: Option<f64>,
    },
    /// Per-tag BER under the lamps at one plane, against a threshold.
    Resolve {
        scenario: String,
        #[arg(long)]
        plane_cm: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_BER)]
        threshold: f64,
    },
    /// Compare Monte Carlo BFSK error rates with the closed form.
    McVerify {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0,1,2,4,8,12,16")]
        snr_list: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Tag to read; luminaires carrying other tags interfere.
    #[arg(long)]
    tag: String,
    /// Cells per side.
    #[arg(long, default_value_t = 64)]
    res: usize,
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    /// Bad invocation: exit 2.
    Usage(String),
    /// Parse, validation or I/O failure on valid arguments: exit 1.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<ledid_core::Error> for Failure {
    fn from(e: ledid_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Domain(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Validate { scenario } => validate(&scenario),
        Command::Grid {
            scenario,
            grid,
            plane_cm,
            out,
            heatmap,
        } => {
            check_grid_args(&grid)?;
            let plane = plane_m(plane_cm)?;
            let (scenario, _) = read_scenario(&scenario)?;
            let grid = compute_grid(&scenario, &grid, plane)?;
            write_file(&out, |w| write_csv(&grid, w))?;
            if let Some(path) = heatmap {
                write_file(&path, |w| write_pgm(&grid, w))?;
            }
            let best = grid.min_ber_cell();
            println!(
                "tag={} plane_cm={} cells={} min_ber={:e} at x_m={} y_m={}",
                grid.tag,
                plane_cm,
                grid.cells.len(),
                best.ber,
                best.x,
                best.y
            );
            Ok(true)
        }
        Command::Sweep {
            scenario,
            grid,
            planes_cm,
            out,
        } => sweep(&scenario, &grid, &planes_cm, &out),
        Command::Coverage {
            scenario,
            tag,
            threshold,
            max_distance_m,
        } => {
            let mut options = CoverageOptions::default();
            if let Some(max) = max_distance_m {
                if !(max > 0.0 && max.is_finite()) {
                    return Err(Failure::Usage("--max-distance-m must be positive".into()));
                }
                options.max_distance_m = max;
            }
            let (scenario, _) = read_scenario(&scenario)?;
            let report = coverage(&scenario, &tag, threshold, &options)?;
            println!("tag={}", report.tag);
            println!("threshold_ber={:e}", report.threshold_ber);
            match report.max_reliable_distance {
                Reach::Bounded(d) => println!("max_reliable_distance_m={d:.3}"),
                Reach::Unbounded => println!("max_reliable_distance_m=unbounded"),
            }
            match report.max_reliable_angle_deg {
                Some(a) => println!("max_reliable_angle_deg={a:.1}"),
                None => println!("max_reliable_angle_deg=n/a"),
            }
            Ok(true)
        }
        Command::Resolve {
            scenario,
            plane_cm,
            threshold,
        } => {
            let plane = plane_m(plane_cm)?;
            let (scenario, _) = read_scenario(&scenario)?;
            let report = resolvability(&scenario, plane, threshold)?;
            println!("plane_cm={plane_cm} threshold={:e}", report.threshold);
            println!("{:<16} {:>24} resolvable", "tag", "min_ber_under_lamp");
            for t in &report.tags {
                let verdict = if t.resolvable { "yes" } else { "no" };
                println!("{:<16} {:>24e} {verdict}", t.tag, t.min_ber_under_lamp);
            }
            match report.critical_distance_m {
                Some(d) => println!("critical_overlap_distance_m={d:.4}"),
                None => println!("critical_overlap_distance_m=n/a"),
            }
            Ok(true)
        }
        Command::McVerify { snr_list, trials, seed } => {
            if trials == 0 {
                return Err(Failure::Usage("--trials must be at least 1".into()));
            }
            if snr_list.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
                return Err(Failure::Usage(
                    "--snr-list values must be finite and non-negative".into(),
                ));
            }
            let report = verify_agreement(&snr_list, trials, seed)?;
            println!("trials={trials} seed={seed}");
            for r in &report.rows {
                println!(
                    "snr={} analytic={:e} estimate={:e} std_error={:e} {}",
                    r.snr,
                    r.analytic,
                    r.mc.estimate,
                    r.mc.std_error,
                    if r.pass { "pass" } else { "fail" }
                );
            }
            let holds = report.holds();
            println!(
                "agreement={}/{} required={} {}",
                report.passed(),
                report.rows.len(),
                report.required,
                if holds { "holds" } else { "fails" }
            );
            Ok(holds)
        }
    }
}

fn validate(path: &str) -> CmdResult {
    let (scenario, defaults) = read_scenario(path)?;
    let name = if scenario.name().is_empty() {
        path
    } else {
        scenario.name()
    };
    println!("scenario: {name}");
    if !scenario.description().is_empty() {
        println!("description: {}", scenario.description());
    }
    let room = scenario.room();
    println!(
        "room: x {:?} m, y {:?} m, height {} m",
        room.x_range(),
        room.y_range(),
        room.height_m()
    );
    println!("luminaires: {}", scenario.luminaires().len());
    for (i, l) in scenario.luminaires().iter().enumerate() {
        let p = l.pose.position();
        println!(
            "  [{i}] tag={} at ({}, {}, {}) power_w={} semi_angle_deg={} m ≈ {:.2}",
            l.tag,
            p.x,
            p.y,
            p.z,
            l.emitter.power_w(),
            l.emitter.semi_angle_deg(),
            l.emitter.lambertian_order()
        );
    }
    println!("tags: {}", scenario.tags().join(", "));
    let d = scenario.detector();
    println!(
        "detector: area_m2={} fov_deg={} gain={} responsivity_a_per_w={} bandwidth_hz={}",
        d.area_m2(),
        d.fov_deg(),
        d.gain(),
        d.responsivity(),
        d.bandwidth_hz()
    );
    let n = scenario.noise();
    println!(
        "noise: background_current_a={} i2={} thermal_a2={} isi_a2={}",
        n.background_current_a, n.bandwidth_factor, n.thermal_variance, n.isi_variance
    );
    if defaults.is_empty() {
        println!("defaults applied: none");
    } else {
        println!("defaults applied: {}", defaults.join(", "));
    }
    Ok(true)
}

fn sweep(path: &str, args: &GridArgs, planes_cm: &[f64], out: &Path) -> CmdResult {
    check_grid_args(args)?;
    if planes_cm.is_empty() {
        return Err(Failure::Usage("--planes-cm needs at least one distance".into()));
    }
    let planes = planes_cm.iter().map(|&cm| plane_m(cm)).collect::<Result<Vec<_>, _>>()?;
    let (scenario, _) = read_scenario(path)?;
    let lamps = scenario.luminaires_for(&args.tag)?;
    fs::create_dir_all(out).map_err(|e| Failure::Domain(format!("{}: {e}", out.display())))?;
    for (&cm, &plane) in planes_cm.iter().zip(&planes) {
        let grid = compute_grid(&scenario, args, plane)?;
        let file = out.join(format!("{}_{}cm.csv", args.tag, cm));
        write_file(&file, |w| write_csv(&grid, w))?;

        let z = scenario.room().height_m() - plane;
        let mut under = Vec::with_capacity(lamps.len());
        for lamp in &lamps {
            let p = lamp.pose.position();
            under.push(evaluate_link(&scenario, Vec3::new(p.x, p.y, z), &args.tag)?.ber);
        }
        under.sort_by(f64::total_cmp);
        let mid = under.len() / 2;
        let median = if under.len() % 2 == 1 {
            under[mid]
        } else {
            0.5 * (under[mid - 1] + under[mid])
        };
        println!(
            "plane_cm={cm} min_ber={:e} median_ber={:e} grid_min_ber={:e} csv={}",
            under[0],
            median,
            grid.min_ber_cell().ber,
            file.display()
        );
    }
    Ok(true)
}

fn check_grid_args(args: &GridArgs) -> Result<(), Failure> {
    if args.res < 2 {
        return Err(Failure::Usage("--res must be at least 2".into()));
    }
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    Ok(())
}

fn plane_m(cm: f64) -> Result<f64, Failure> {
    if cm > 0.0 && cm.is_finite() {
        Ok(cm / 100.0)
    } else {
        Err(Failure::Usage(format!("plane distance must be positive, got {cm} cm")))
    }
}

fn compute_grid(scenario: &Scenario, args: &GridArgs, plane: f64) -> Result<BerGrid, Failure> {
    let spec = GridSpec::covering_room(scenario.room(), plane, args.res)?;
    let grid = match args.threads {
        None => evaluate_grid(scenario, &spec, &args.tag)?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Domain(format!("thread pool: {e}")))?
            .install(|| evaluate_grid(scenario, &spec, &args.tag))?,
    };
    Ok(grid)
}

fn read_scenario(path: &str) -> Result<(Scenario, Vec<String>), Failure> {
    match path {
        "builtin:l1" => return Ok((builtin_l1(), Vec::new())),
        "builtin:g1" => return Ok((builtin_g1(), Vec::new())),
        _ => {}
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    Ok(load_scenario_with_defaults(&text)?)
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure::Domain(format!("cannot write {}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(fail)?);
    body(&mut w).map_err(fail)?;
    w.flush().map_err(fail)
}
