mod render;

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use turnfold::compile::{
    scaled_fold_states, spiral_states, states_from_path, validate_states, zigzag_states, BulletReading, StateProgram,
};
use turnfold::explore::{decide_folds_capped, Verdict, DEFAULT_CAP};
use turnfold::io::{
    from_json, parse_machine, parse_shape, read_events, to_json, write_events, MachineFile, PathFile, ShapeFile,
};
use turnfold::machine::reconstruct_positions;
use turnfold::shapes::{
    analyze, cross, folding_error, monotone_traversal, scaled_partition, scaled_traversal, spiral, spiral_traversal,
    square, yw_separator, Path, Shape, SpiralDirection,
};
use turnfold::sim::{map_trials, sample_trajectory_with, scaling_experiment, trial_stats, Outcome, Scheduler};
use turnfold::{Configuration, TurningMachine};

use render::{render_frames, render_svg, RenderSpec};

#[derive(Parser)]
#[command(name = "turnfold", version, about = "Simulate, compile and verify Turning Machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample trajectories of a machine.
    Simulate(SimulateArgs),
    /// Decide whether every trajectory ends in the all-zero state.
    Check(CheckArgs),
    /// Generate or inspect shapes.
    #[command(subcommand)]
    Shape(ShapeCommand),
    /// Compile a target into initial states.
    #[command(subcommand)]
    Compile(CompileCommand),
    /// Compile a shape, decide the machine and sample its folding error.
    Fold(FoldArgs),
    /// Mean completion time of rotation lines over a range of lengths.
    Timing(TimingArgs),
    /// Draw a configuration or trajectory as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct SimulateArgs {
    machine: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Write the events of a single trajectory as JSON lines.
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SchedulerArg::Uniformized)]
    scheduler: SchedulerArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedulerArg {
    Uniformized,
    Direct,
}

impl From<SchedulerArg> for Scheduler {
    fn from(s: SchedulerArg) -> Scheduler {
        match s {
            SchedulerArg::Uniformized => Scheduler::Uniformized,
            SchedulerArg::Direct => Scheduler::Direct,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    machine: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum ShapeCommand {
    /// Print a generated shape, or with --traversal its canonical path.
    Gen {
        #[arg(value_enum)]
        kind: ShapeKind,
        param: usize,
        #[arg(long)]
        traversal: bool,
        /// Spiral traversal direction.
        #[arg(long, value_enum, default_value_t = DirArg::InToOut)]
        dir: DirArg,
    },
    /// Print connectivity, monotonicity and perimeter of a shape file.
    Analyze { shape: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeKind {
    Square,
    Cross,
    Spiral,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirArg {
    InToOut,
    OutToIn,
}

impl From<DirArg> for SpiralDirection {
    fn from(d: DirArg) -> SpiralDirection {
        match d {
            DirArg::InToOut => SpiralDirection::InToOut,
            DirArg::OutToIn => SpiralDirection::OutToIn,
        }
    }
}

#[derive(Subcommand)]
enum CompileCommand {
    /// Zig-zag states of a path file, or of the row-by-row traversal of a shape file.
    Zigzag { input: PathBuf },
    /// Turning numbers of a path file.
    Path {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<i32>,
    },
    /// Turning-number sequence of a k-turn spiral.
    Spiral {
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<i32>,
        #[arg(long, value_enum, default_value_t = DirArg::InToOut)]
        dir: DirArg,
    },
    /// States for the scale-2 traversal of a shape file.
    Scaled {
        input: PathBuf,
        /// Use -3 instead of +3 on interior upper-row points of the right part.
        #[arg(long)]
        as_printed: bool,
    },
}

#[derive(Args)]
struct FoldArgs {
    shape: PathBuf,
    #[arg(long)]
    scale2: bool,
    #[arg(long)]
    as_printed: bool,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
}

#[derive(Args)]
struct TimingArgs {
    #[arg(long, allow_hyphen_values = true)]
    s: i32,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RenderArgs {
    /// Machine file, or a JSON-lines trajectory together with --machine.
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    machine: Option<PathBuf>,
    /// Moves applied to the machine before drawing.
    #[arg(long, value_delimiter = ',')]
    moves: Vec<usize>,
    #[arg(long, default_value_t = 40.0)]
    scale: f64,
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long)]
    no_states: bool,
    #[arg(long)]
    no_highlight: bool,
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_machine(path: &FsPath) -> Result<Arc<TurningMachine>> {
    let tm = parse_machine(&read(path)?).with_context(|| format!("invalid machine file {}", path.display()))?;
    Ok(Arc::new(tm))
}

fn load_shape(path: &FsPath) -> Result<Shape> {
    parse_shape(&read(path)?).with_context(|| format!("invalid shape file {}", path.display()))
}

/// A path file if it is marked ordered, otherwise a shape file.
fn load_target(path: &FsPath) -> Result<(Option<Path>, Shape)> {
    let text = read(path)?;
    let pf: PathFile = from_json(&text).with_context(|| format!("invalid file {}", path.display()))?;
    if pf.ordered {
        let p = pf.to_path()?;
        let s = p.to_shape();
        Ok((Some(p), s))
    } else {
        Ok((None, ShapeFile { points: pf.points }.to_shape()?))
    }
}

fn print_json<T: Serialize>(value: &T) {
    print!("{}", to_json(value));
}

fn report_validation(sp: &StateProgram, target: &Path) {
    eprint!("{}", to_json(&validate_states(sp, target)));
}

/// Verdict 1 for `check` on an unfoldable machine; everything else 0.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Check(a) => {
            let tm = load_machine(&a.machine)?;
            let v = decide_folds_capped(&tm, a.cap);
            print_json(&v);
            Ok(u8::from(matches!(v, Verdict::Unfoldable { .. })))
        }
        Command::Shape(c) => shape(c),
        Command::Compile(c) => compile(c),
        Command::Fold(a) => fold(a),
        Command::Timing(a) => timing(a),
        Command::Render(a) => render(a),
    }
}

#[derive(Serialize)]
struct SingleRun {
    outcome: Outcome,
    total_time: f64,
    step_count: u64,
    seed: u64,
    final_states: Vec<i32>,
}

fn simulate(a: SimulateArgs) -> Result<u8> {
    let tm = load_machine(&a.machine)?;
    if a.trials == 0 {
        bail!("--trials must be positive");
    }
    if a.trials == 1 || a.events.is_some() {
        if a.trials != 1 {
            bail!("--events needs --trials 1");
        }
        let log = sample_trajectory_with(&tm, a.seed, a.scheduler.into());
        if let Some(path) = &a.events {
            let f = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = std::io::BufWriter::new(f);
            write_events(&mut w, &log.events)?;
            w.flush()?;
        }
        let mut states = tm.initial_states().to_vec();
        for e in &log.events {
            states[e.i] = e.s;
        }
        print_json(&SingleRun {
            outcome: log.outcome,
            total_time: log.total_time,
            step_count: log.step_count,
            seed: log.seed,
            final_states: states,
        });
    } else {
        print_json(&trial_stats(&tm, a.trials, a.seed));
    }
    Ok(0)
}

fn shape(c: ShapeCommand) -> Result<u8> {
    match c {
        ShapeCommand::Gen {
            kind,
            param,
            traversal,
            dir,
        } => {
            let s = match kind {
                ShapeKind::Square => square(param)?,
                ShapeKind::Cross => cross(param)?,
                ShapeKind::Spiral => spiral(param)?,
            };
            if traversal {
                let p = match kind {
                    ShapeKind::Spiral => spiral_traversal(param, dir.into())?,
                    _ => monotone_traversal(&s)?,
                };
                print_json(&PathFile::from(&p));
            } else {
                print_json(&ShapeFile::from(&s));
            }
        }
        ShapeCommand::Analyze { shape } => print_json(&analyze(&load_shape(&shape)?)),
    }
    Ok(0)
}

fn scaled_program(s: &Shape, reading: BulletReading) -> Result<(StateProgram, Path)> {
    let sep = yw_separator(s).ok_or_else(|| anyhow!("shape has no yw-separator"))?;
    let part = scaled_partition(s, &sep)?;
    let t = scaled_traversal(&part)?;
    Ok((scaled_fold_states(&part, reading)?, t))
}

fn reading(as_printed: bool) -> BulletReading {
    if as_printed {
        BulletReading::AsPrinted
    } else {
        BulletReading::Corrected
    }
}

fn compile(c: CompileCommand) -> Result<u8> {
    let (sp, target) = match c {
        CompileCommand::Zigzag { input } => {
            let (p, s) = load_target(&input)?;
            let p = match p {
                Some(p) => p,
                None => monotone_traversal(&s)?,
            };
            (zigzag_states(&p)?, p)
        }
        CompileCommand::Path { input, anchor } => {
            let (Some(p), _) = load_target(&input)? else {
                bail!("{} is not an ordered path file", input.display());
            };
            let anchor = anchor.unwrap_or_else(|| p.directions().first().map_or(0, |d| d.index() as i32));
            (states_from_path(&p, anchor)?, p)
        }
        CompileCommand::Spiral { k, t0, dir } => {
            let t0 = t0.unwrap_or(if dir == DirArg::InToOut { 0 } else { 3 });
            (spiral_states(k, t0, dir.into())?, spiral_traversal(k, dir.into())?)
        }
        CompileCommand::Scaled { input, as_printed } => scaled_program(&load_shape(&input)?, reading(as_printed))?,
    };
    report_validation(&sp, &target);
    print_json(&sp);
    Ok(0)
}

#[derive(Serialize)]
struct FoldReport {
    n: usize,
    scale: usize,
    states: Vec<i32>,
    verdict: Verdict,
    trials: u64,
    final_count: u64,
    blocked_count: u64,
    max_error: Option<usize>,
    perimeter_length: usize,
}

fn fold(a: FoldArgs) -> Result<u8> {
    let s = load_shape(&a.shape)?;
    let (sp, target) = if a.scale2 {
        let (sp, t) = scaled_program(&s, reading(a.as_printed))?;
        (sp, t)
    } else {
        let p = monotone_traversal(&s)?;
        (zigzag_states(&p)?, p)
    };
    report_validation(&sp, &target);
    let target_shape = target.anchored().to_shape();
    let tm = Arc::new(sp.machine()?);
    let verdict = decide_folds_capped(&tm, a.cap);
    let results = map_trials(&tm, a.trials, a.seed, |sim| {
        (sim.outcome(), folding_error(&target_shape, sim.positions()))
    });
    let final_count = results.iter().filter(|r| r.0 == Some(Outcome::Final)).count() as u64;
    let max_error = results
        .iter()
        .filter(|r| r.0 == Some(Outcome::Final))
        .map(|r| r.1)
        .max();
    print_json(&FoldReport {
        n: tm.len(),
        scale: if a.scale2 { 2 } else { 1 },
        states: sp.states,
        verdict,
        trials: a.trials,
        final_count,
        blocked_count: a.trials - final_count,
        max_error,
        perimeter_length: analyze(&s).perimeter_length,
    });
    Ok(0)
}

fn timing(a: TimingArgs) -> Result<u8> {
    if a.trials == 0 {
        bail!("--trials must be positive");
    }
    if let Some(&n) = a.sizes.iter().find(|&&n| n < 2) {
        bail!("size {n} is below 2");
    }
    let report = scaling_experiment(a.s, &a.sizes, a.trials, a.seed);
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    match report.fit {
        Some(f) => eprintln!("fit: mean_time = {:.6} + {:.6} ln n, r2 = {:.6}", f.a, f.b, f.r2),
        None => eprintln!("fit: needs at least two distinct sizes"),
    }
    Ok(0)
}

fn replay_states(tm: &Arc<TurningMachine>, moves: &[usize]) -> Result<Configuration> {
    turnfold::explore::replay(tm, moves).map_err(|e| anyhow!("{e}"))
}

fn render(a: RenderArgs) -> Result<u8> {
    if a.scale <= 0.0 || !a.scale.is_finite() {
        bail!("--scale must be positive");
    }
    if a.stride == 0 {
        bail!("--stride must be positive");
    }
    let spec = RenderSpec {
        scale: a.scale,
        show_states: !a.no_states,
        highlight_blocked: !a.no_highlight,
        frame_stride: a.stride,
    };
    let text = read(&a.input)?;
    let svg = match from_json::<MachineFile>(&text) {
        Ok(mf) => {
            let tm = Arc::new(mf.to_machine()?);
            render_svg(&replay_states(&tm, &a.moves)?, &spec)
        }
        Err(_) => {
            let machine = a
                .machine
                .as_deref()
                .ok_or_else(|| anyhow!("rendering a trajectory needs --machine"))?;
            let tm = load_machine(machine)?;
            let events = read_events(BufReader::new(text.as_bytes()))
                .with_context(|| format!("invalid trajectory {}", a.input.display()))?;
            let mut states = tm.initial_states().to_vec();
            let mut frames = vec![tm.initial_configuration()];
            for (k, e) in events.iter().enumerate() {
                if e.i >= states.len() {
                    bail!("event {} names monomer {} of {}", k + 1, e.i, states.len());
                }
                states[e.i] = e.s;
                if (k + 1) % spec.frame_stride == 0 || k + 1 == events.len() {
                    let c = reconstruct_positions(&tm, &states).map_err(|err| anyhow!("event {}: {err}", k + 1))?;
                    frames.push(c);
                }
            }
            render_frames(&frames, &spec)
        }
    };
    fs::write(&a.output, svg).with_context(|| format!("cannot write {}", a.output.display()))?;
    Ok(0)
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("TURNFOLD_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("TURNFOLD_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match init_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
