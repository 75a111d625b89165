use std::fs::OpenOptions;
use std::io::{self, BufWriter, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use cubelift::corpus::{
    corpus_text, load_corpus_text, parse_corpus, reference_table, verify_corpus, CORPUS_CROSSING_LIMIT,
};
use cubelift::cube::{emit_cube_text, parse_cube_text, CubeDiagram, CubeError, Plane, VertexRule};
use cubelift::grid::GridDiagram;
use cubelift::invariants::identify::identify_with_limit;
use cubelift::lifting::{all_lifts_with_limit, find_lift, grid_to_cube, DEFAULT_ALL_LIFTS_LIMIT};
use cubelift::search::{
    count_formula, raw_grid_count, run, CountConvention, LiftSink, ResourceBudget, SearchConfig, SearchError,
};

/// Sizes at which a search needs --long-running.
const LONG_RUNNING_SIZE: usize = 8;

#[derive(Parser)]
#[command(name = "cubelift", version, about = "Grid diagrams, cube diagrams and grid-to-cube lifting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneArg {
    Xy,
    Yz,
    Zx,
}

impl From<PlaneArg> for Plane {
    fn from(p: PlaneArg) -> Plane {
        match p {
            PlaneArg::Xy => Plane::XY,
            PlaneArg::Yz => Plane::YZ,
            PlaneArg::Zx => Plane::ZX,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Either,
    Text,
    Transposed,
}

impl From<RuleArg> for VertexRule {
    fn from(r: RuleArg) -> VertexRule {
        match r {
            RuleArg::Either => VertexRule::Either,
            RuleArg::Text => VertexRule::Text,
            RuleArg::Transposed => VertexRule::Transposed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a grid file (`-` for stdin).
    ValidateGrid { file: String },
    /// Check a cube file and list every violation.
    ValidateCube {
        file: String,
        #[arg(long, value_enum, default_value = "either")]
        vertex_rule: RuleArg,
    },
    /// Print a cube's projection as a grid.
    Project {
        file: String,
        #[arg(long, value_enum)]
        plane: PlaneArg,
    },
    /// Same-size lift of a grid, or "none".
    Lift {
        file: String,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_ALL_LIFTS_LIMIT)]
        limit: usize,
    },
    /// Constructive grid-to-cube with a size report.
    Build { file: String },
    /// Name the knot of a grid or of a cube's XY projection.
    Identify {
        file: String,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Exhaustive search over grids of one size.
    Search {
        #[arg(long)]
        size: usize,
        /// Shard as i/k with 0 <= i < k.
        #[arg(long, value_parser = parse_shard)]
        shard: Option<(usize, usize)>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        checkpoint_every: u64,
        /// Write each lifted cube to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Required for sizes 8 and up.
        #[arg(long)]
        long_running: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Count every (X, O) pair instead of X/O-exchange classes.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        no_link_exclusion: bool,
        #[arg(long)]
        no_determinant_filter: bool,
        #[arg(long)]
        no_transition_reuse: bool,
        #[arg(long)]
        no_xo_prefilters: bool,
        /// Count determinant-1 knots with a nontrivial bracket as nontrivial.
        #[arg(long)]
        det1_identification: bool,
        /// Tally nontrivial grids and lifts per knot label.
        #[arg(long)]
        identify: bool,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        max_outer: Option<u64>,
        #[arg(long)]
        max_seconds: Option<u64>,
    },
    /// Closed-form grid count and raw pair count.
    Count {
        #[arg(long)]
        size: u32,
    },
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// ASCII picture of a grid, or of each projection of a cube.
    Render { file: String },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Validate every entry and identify each knot against the corpus itself.
    Verify {
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

fn parse_shard(s: &str) -> Result<(usize, usize), String> {
    let (i, k) = s.split_once('/').ok_or("expected i/k")?;
    let i: usize = i.trim().parse().map_err(|_| "bad shard index")?;
    let k: usize = k.trim().parse().map_err(|_| "bad shard count")?;
    if k == 0 || i >= k {
        return Err(format!("shard {i}/{k} needs 0 <= i < k"));
    }
    Ok((i, k))
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        Ok(s)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

enum Diagram {
    Grid(GridDiagram),
    Cube(CubeDiagram),
}

fn read_grid(file: &str) -> Result<GridDiagram, String> {
    read_input(file)?.trim().parse::<GridDiagram>().map_err(|e| e.to_string())
}

fn read_cube(file: &str, rule: VertexRule) -> Result<CubeDiagram, String> {
    let (_, m) = parse_cube_text(read_input(file)?.trim()).map_err(|e| e.to_string())?;
    CubeDiagram::from_markings(m, rule).map_err(|e| e.to_string())
}

/// Grid files start with `X=`; anything else is read as a cube.
fn read_diagram(file: &str) -> Result<Diagram, String> {
    let text = read_input(file)?;
    let t = text.trim();
    if t.starts_with("X=") || t.starts_with("X =") {
        t.parse::<GridDiagram>().map(Diagram::Grid).map_err(|e| e.to_string())
    } else {
        let (_, m) = parse_cube_text(t).map_err(|e| e.to_string())?;
        CubeDiagram::from_markings(m, VertexRule::Either).map(Diagram::Cube).map_err(|e| e.to_string())
    }
}

fn corpus_table(path: Option<&Path>) -> Result<cubelift::invariants::ReferenceTable, String> {
    let text = corpus_text(path).map_err(|e| e.to_string())?;
    let entries = load_corpus_text(&text).map_err(|e| e.to_string())?;
    reference_table(&entries).map_err(|e| e.to_string())
}

fn execute(cmd: Command) -> Result<bool, String> {
    match cmd {
        Command::ValidateGrid { file } => match read_input(&file)?.trim().parse::<GridDiagram>() {
            Ok(g) => {
                println!("valid n={} crossings={} components={}", g.n(), g.crossing_count(), g.component_count());
                Ok(true)
            }
            Err(e) => {
                println!("invalid: {e}");
                Ok(false)
            }
        },
        Command::ValidateCube { file, vertex_rule } => {
            let (_, m) = match parse_cube_text(read_input(&file)?.trim()) {
                Ok(v) => v,
                Err(e) => {
                    println!("invalid: {e}");
                    return Ok(false);
                }
            };
            match CubeDiagram::from_markings(m, vertex_rule.into()) {
                Ok(c) => {
                    println!("valid n={} components={} convention={:?}", c.n(), c.component_count(), c.convention());
                    Ok(true)
                }
                Err(CubeError::Invalid(vs)) => {
                    println!("invalid: {} violation(s)", vs.len());
                    for v in vs {
                        println!("{v}");
                    }
                    Ok(false)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(false)
                }
            }
        }
        Command::Project { file, plane } => {
            let c = read_cube(&file, VertexRule::Either)?;
            println!("{}", c.project(plane.into()));
            Ok(true)
        }
        Command::Lift { file, all, limit } => {
            let g = read_grid(&file)?;
            if all {
                let cubes = all_lifts_with_limit(&g, limit).map_err(|e| e.to_string())?;
                if cubes.is_empty() {
                    println!("none");
                }
                for c in cubes {
                    println!("{}", emit_cube_text(None, &c));
                }
            } else {
                match find_lift(&g) {
                    Some(c) => println!("{}", emit_cube_text(None, &c)),
                    None => println!("none"),
                }
            }
            Ok(true)
        }
        Command::Build { file } => {
            let g = read_grid(&file)?;
            let (cube, report) = grid_to_cube(&g).map_err(|e| e.to_string())?;
            println!("{}", emit_cube_text(None, &cube));
            println!("{report}");
            Ok(true)
        }
        Command::Identify { file, corpus } => {
            let table = corpus_table(corpus.as_deref())?;
            let g = match read_diagram(&file)? {
                Diagram::Grid(g) => g,
                Diagram::Cube(c) => c.project(Plane::XY),
            };
            let id = identify_with_limit(&g, &table, CORPUS_CROSSING_LIMIT).map_err(|e| e.to_string())?;
            println!("{id}");
            Ok(true)
        }
        Command::Search {
            size,
            shard,
            checkpoint,
            checkpoint_every,
            emit,
            long_running,
            workers,
            raw,
            no_link_exclusion,
            no_determinant_filter,
            no_transition_reuse,
            no_xo_prefilters,
            det1_identification,
            identify,
            corpus,
            max_outer,
            max_seconds,
        } => {
            if size >= LONG_RUNNING_SIZE && !long_running {
                return Err(format!("size {size} needs --long-running"));
            }
            if long_running && checkpoint.is_none() {
                return Err("--long-running needs --checkpoint".into());
            }
            let mut config = SearchConfig::new(size);
            config.shard = shard;
            config.checkpoint_path = checkpoint;
            config.checkpoint_every = checkpoint_every;
            config.workers = workers;
            if raw {
                config.convention = CountConvention::Raw;
            }
            config.filters.link_exclusion = !no_link_exclusion;
            config.filters.determinant_filter = !no_determinant_filter;
            config.filters.transition_reuse = !no_transition_reuse;
            config.filters.xo_prefilters = !no_xo_prefilters;
            config.det1_identification = det1_identification;
            if identify {
                config.identify = true;
                config.reference = Some(Arc::new(corpus_table(corpus.as_deref())?));
            }
            config.budget = ResourceBudget { max_outer, max_time: max_seconds.map(Duration::from_secs) };
            if let Some(path) = &emit {
                let resuming = config.checkpoint_path.as_deref().is_some_and(Path::exists);
                let f = OpenOptions::new()
                    .create(true)
                    .write(true)
                    .append(resuming)
                    .truncate(!resuming)
                    .open(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                config.emit = Some(LiftSink::new(BufWriter::new(f)));
            }
            let started = Instant::now();
            let result = run(&config);
            if let Some(sink) = &config.emit {
                sink.flush().map_err(|e| e.to_string())?;
            }
            match result {
                Ok(stats) => {
                    for line in stats.to_lines(&config.filters) {
                        println!("{line}");
                    }
                    eprintln!("elapsed={:.3}s", started.elapsed().as_secs_f64());
                    Ok(true)
                }
                Err(e @ SearchError::ResourceLimit { .. }) => {
                    println!("stopped: {e}");
                    Ok(false)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Count { size } => {
            if size == 0 {
                return Err("size must be at least 1".into());
            }
            println!("n={size} formula={} raw={}", count_formula(size), raw_grid_count(size));
            Ok(true)
        }
        Command::Corpus { action: CorpusAction::Verify { corpus } } => {
            let text = corpus_text(corpus.as_deref()).map_err(|e| e.to_string())?;
            let records = parse_corpus(&text).map_err(|e| e.to_string())?;
            let report = verify_corpus(&records);
            println!("{report}");
            Ok(report.all_passed())
        }
        Command::Render { file } => {
            match read_diagram(&file)? {
                Diagram::Grid(g) => print!("{}", g.render_ascii()),
                Diagram::Cube(c) => {
                    for p in Plane::ALL {
                        println!("{p}:");
                        print!("{}", c.project(p).render_ascii());
                    }
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
