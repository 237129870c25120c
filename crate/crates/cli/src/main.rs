//! `bistable`: build, classify and export bistable constraint systems, and
//! run the flux game service.

use std::fmt::Write as _;
use std::fs;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use bistable::builders::{build_system, SystemSpec, CATALOG};
use bistable::cohomology::{cohomology, cup_product};
use bistable::constraint::{
    boundary_holonomy, classify, classify_region, extend_coupling, holonomy, solve_sections, total_curvature,
    FreeEdgeValues, SectionResult, Witness,
};
use bistable::export::{cover_dot, system_dot};
use bistable::flux::{
    classify_reachability, find_potential, reachable, sector_in, BoundaryMode, GameSession, PotentialResult,
    Reachability,
};
use bistable::torsor::{build_cover, circuit_from, cover_triviality, dual_config_on, Triviality};
use bistable::{BitVector, CellComplex, Classification, CouplingSystem, Level, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "bistable", version, about = "Z2 cohomology of bistable constraint systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the builder catalog.
    Catalog,
    /// Build a catalog system and write it as JSON.
    Build(BuildArgs),
    /// Report the obstruction level of a system.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Faces of a region whose boundary holonomy is checked first.
        #[arg(long, value_delimiter = ',')]
        region: Option<Vec<usize>>,
    },
    /// Holonomy around a closed cycle given by its vertices.
    Holonomy {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<usize>,
    },
    /// Find global sections or a certificate that none exist.
    Solve {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Describe the double cover presented by the coupling.
    Cover {
        file: PathBuf,
        /// Write the cover as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Slide an aperture around a ring system.
    Moma(MomaArgs),
    /// Cup pairing of two H1 basis classes on a closed surface.
    Cup {
        file: PathBuf,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
    /// Extend the coupling over free edges and report curvature on a region.
    Curvature {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        region: Vec<usize>,
        /// `zero` or `seed:N`.
        #[arg(long, default_value = "zero", value_parser = parse_extension)]
        extension: FreeEdgeValues,
    },
    /// Face fluxes and their sectors.
    #[command(subcommand)]
    Flux(FluxCommand),
    /// The edge-toggle game.
    #[command(subcommand)]
    Game(GameCommand),
    /// Graphviz DOT of a system or its cover.
    Dot {
        file: PathBuf,
        #[arg(long)]
        cover: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BuildArgs {
    kind: String,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    rows: Option<i64>,
    #[arg(long)]
    cols: Option<i64>,
    #[arg(long)]
    w: Option<i64>,
    #[arg(long)]
    h: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    /// Pin a vertex: `v=0` or `v=1`.
    #[arg(long, value_parser = parse_pair)]
    pin: Vec<(usize, i64)>,
    /// Put a frame reversal on an edge.
    #[arg(long)]
    twist: Vec<usize>,
    /// Any other builder parameter: `key=value`.
    #[arg(long, value_parser = parse_param)]
    param: Vec<(String, i64)>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MomaArgs {
    file: PathBuf,
    #[arg(long)]
    window: usize,
    #[arg(long, default_value_t = 1)]
    laps: usize,
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Analyse the configuration space of two disjoint windows instead.
    #[arg(long)]
    dual: bool,
    /// Write every display snapshot as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Board {
    /// System or complex JSON file.
    file: Option<PathBuf>,
    /// Catalog board instead of a file.
    #[arg(long, conflicts_with = "file")]
    board: Option<String>,
    #[arg(long, default_value = "free")]
    mode: BoundaryMode,
}

#[derive(Debug, Subcommand)]
enum FluxCommand {
    /// Sector of a flux given by its frustrated faces.
    Sector {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_delimiter = ',')]
        faces: Vec<usize>,
    },
    /// Potential for a flux, or the class obstructing one.
    Potential {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_delimiter = ',')]
        faces: Vec<usize>,
    },
    /// Whether one flux can be toggled into another.
    Reach {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_delimiter = ',')]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum GameCommand {
    /// Serve the game over HTTP until interrupted.
    Serve {
        #[arg(long, env = "BISTABLE_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Board used when a session names none.
        #[arg(long, default_value = "icosahedron")]
        board: String,
    },
    /// Solve a game offline and replay the solution.
    Solve {
        #[command(flatten)]
        board: Board,
        #[arg(long, value_delimiter = ',')]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
    },
}

fn parse_pair(s: &str) -> Result<(usize, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected v=b, got {s}"))?;
    Ok((k.parse().map_err(|_| format!("bad vertex {k}"))?, v.parse().map_err(|_| format!("bad value {v}"))?))
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s}"))?;
    Ok((k.to_string(), v.parse().map_err(|_| format!("bad value {v}"))?))
}

fn parse_extension(s: &str) -> Result<FreeEdgeValues, String> {
    match s.split_once(':') {
        None if s == "zero" => Ok(FreeEdgeValues::Zero),
        Some(("seed", n)) => n.parse().map(FreeEdgeValues::Seed).map_err(|_| format!("bad seed {n}")),
        _ => Err(format!("expected zero or seed:N, got {s}")),
    }
}

/// Usage errors exit 2, I/O failures 1. Verdicts are output, not failures.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl From<bistable::Error> for Failure {
    fn from(e: bistable::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<CouplingSystem, Failure> {
    serde_json::from_value(read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Accepts a system file or a bare complex file.
fn load_complex(path: &Path) -> Result<CellComplex, Failure> {
    let v = read(path)?;
    let parsed = if v.get("complex").is_some() {
        serde_json::from_value::<CouplingSystem>(v).map(|s| s.complex().clone())
    } else {
        serde_json::from_value::<CellComplex>(v)
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn board_complex(b: &Board) -> Result<CellComplex, Failure> {
    match (&b.file, &b.board) {
        (Some(f), _) => load_complex(f),
        (None, Some(kind)) => Ok(build_system(&SystemSpec::new(kind.clone()))?.complex().clone()),
        (None, None) => Err(Failure::Usage("give a file or --board".into())),
    }
}

fn flux(x: &CellComplex, faces: &[usize]) -> Result<BitVector, Failure> {
    if let Some(&f) = faces.iter().find(|&&f| f >= x.n_faces()) {
        return Err(Failure::Usage(format!("face {f} out of range ({} faces)", x.n_faces())));
    }
    let mut v = BitVector::zeros(x.n_faces());
    for &f in faces {
        v.flip(f);
    }
    Ok(v)
}

/// Pretty JSON with the schema version as an extra top-level field.
fn versioned<T: Serialize>(body: &T) -> Outcome {
    let mut v = serde_json::to_value(body).map_err(|e| Failure::Usage(e.to_string()))?;
    match &mut v {
        Value::Object(map) => {
            map.insert("schema_version".into(), SCHEMA_VERSION.into());
        }
        _ => v = serde_json::json!({ "schema_version": SCHEMA_VERSION, "value": v }),
    }
    Ok(serde_json::to_string_pretty(&v).expect("json value serializes") + "\n")
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn describe(w: &Witness) -> String {
    match w {
        Witness::Cycle { edges, .. } => format!("witness cycle of length {}", edges.len()),
        Witness::PinnedPath { from, to, edges, .. } => {
            format!("pinned vertices {from} and {to} clash along a path of length {}", edges.len())
        }
        Witness::Sections { log2_count, .. } => format!("2^{log2_count} sections"),
        Witness::Region { faces, .. } => format!("region of {} faces", faces.len()),
        Witness::Sectors { from, to } => format!("sectors {from} and {to} differ"),
    }
}

fn verdict(c: &Classification) -> String {
    let mut out = match (&c.level, &c.witness) {
        (Level::Impossibility, w) => format!("Impossibility; {}", describe(w)),
        (Level::Conflict, w) => format!("Conflict; relative H1 class nonzero\n{}", describe(w)),
        (Level::Ambiguity, Witness::Sections { log2_count, .. }) => match 1u128.checked_shl(*log2_count as u32) {
            Some(n) => format!("Ambiguity; {n} sections"),
            None => format!("Ambiguity; 2^{log2_count} sections"),
        },
        (Level::Curvature, w) => format!("Curvature; boundary holonomy 1 around a {}", describe(w)),
        (level, w) => format!("{level:?}; {}", describe(w)),
    };
    if let Some(s) = &c.secondary {
        write!(out, "\nalso: {}", describe(s)).expect("write to string");
    }
    out + "\n"
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Catalog => {
            let mut out = String::new();
            for e in CATALOG {
                let params = e.params.join(" ");
                writeln!(
                    out,
                    "{:<30}{}{}",
                    e.kind,
                    e.description,
                    if params.is_empty() { String::new() } else { format!(" [{params}]") }
                )
                .expect("write to string");
            }
            Ok(out)
        }
        Command::Build(a) => {
            let mut spec = SystemSpec::new(a.kind);
            let named =
                [("n", a.n), ("rows", a.rows), ("cols", a.cols), ("w", a.w), ("h", a.h), ("r", a.r), ("k", a.k)];
            for (key, v) in named {
                if let Some(v) = v {
                    spec = spec.with(key, v);
                }
            }
            for (v, b) in a.pin {
                spec = spec.with(format!("pin.{v}"), b);
            }
            for e in a.twist {
                spec = spec.with(format!("twist.{e}"), 1);
            }
            for (k, v) in a.param {
                spec = spec.with(k, v);
            }
            let sys = build_system(&spec)?;
            let text = serde_json::to_string_pretty(&sys).expect("system serializes") + "\n";
            match a.output {
                Some(p) => {
                    write(&p, &text)?;
                    let x = sys.complex();
                    Ok(format!(
                        "wrote {} ({} vertices, {} edges, {} faces)\n",
                        p.display(),
                        x.n_vertices(),
                        x.n_edges(),
                        x.n_faces()
                    ))
                }
                None => Ok(text),
            }
        }
        Command::Classify { file, json, region } => {
            let sys = load_system(&file)?;
            let c = match region {
                Some(faces) => classify_region(&sys, &faces)?,
                None => classify(&sys),
            };
            if json {
                versioned(&c)
            } else {
                Ok(verdict(&c))
            }
        }
        Command::Holonomy { file, cycle } => {
            let sys = load_system(&file)?;
            let walk = sys.walk_from_vertices(&cycle)?;
            Ok(format!("holonomy = {} along {} edges\n", holonomy(&sys, &walk)? as u8, walk.len()))
        }
        Command::Solve { file, json } => {
            let sys = load_system(&file)?;
            let result = solve_sections(&sys);
            if json {
                #[derive(Serialize)]
                struct Solution<'a> {
                    feasible: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    section: Option<&'a BitVector>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    log2_count: Option<usize>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    witness: Option<&'a Witness>,
                }
                let body = match &result {
                    SectionResult::Feasible(s) => Solution {
                        feasible: true,
                        section: Some(s.particular()),
                        log2_count: Some(s.log2_count()),
                        witness: None,
                    },
                    SectionResult::Infeasible(w) => {
                        Solution { feasible: false, section: None, log2_count: None, witness: Some(w) }
                    }
                };
                return versioned(&body);
            }
            Ok(match result {
                SectionResult::Feasible(s) => {
                    let count = s.count().map_or(format!("2^{}", s.log2_count()), |n| n.to_string());
                    format!("feasible; {count} sections\nsection {}\n", s.particular())
                }
                SectionResult::Infeasible(w) => format!("infeasible; {}\n", describe(&w)),
            })
        }
        Command::Cover { file, dot } => {
            let sys = load_system(&file)?;
            let cover = build_cover(&sys)?;
            let mut out = format!(
                "double cover: {} vertices, {} edges, components: {}\n",
                cover.n_vertices(),
                cover.lifted_edges().len(),
                cover.components().len()
            );
            for comp in cover_triviality(&cover) {
                let kind = match comp.triviality {
                    Triviality::Trivial { .. } => "trivial (two sheets)",
                    Triviality::Nontrivial => "nontrivial (connected)",
                };
                writeln!(out, "base component {}: {kind}", list(&comp.base_vertices)).expect("write to string");
            }
            if let Some(p) = dot {
                write(&p, &cover_dot(&cover))?;
            }
            Ok(out)
        }
        Command::Moma(a) => moma(a),
        Command::Cup { file, alpha, beta } => {
            let x = load_complex(&file)?;
            let h1 = cohomology(&x, 1)?;
            let reps = h1.representatives();
            if let Some(&i) = [alpha, beta].iter().find(|&&i| i >= reps.len()) {
                return Err(Failure::Usage(format!("class {i} out of range: H1 has dimension {}", reps.len())));
            }
            let t = x.triangulate()?;
            let cup = cup_product(&t, &t.pullback1(&reps[alpha])?, &t.pullback1(&reps[beta])?)?;
            Ok(format!("pairing = {}\n", cup.pairing as u8))
        }
        Command::Curvature { file, region, extension } => {
            let sys = load_system(&file)?;
            let ext = extend_coupling(&sys, extension)?;
            let hol = boundary_holonomy(&sys, &region)?;
            let total = total_curvature(&ext, &region)?;
            Ok(format!(
                "boundary holonomy = {}\ntotal curvature = {}\nfrustrated faces: [{}]\n",
                hol as u8,
                total as u8,
                list(&ext.frustrated_faces())
            ))
        }
        Command::Flux(f) => flux_command(f),
        Command::Game(g) => game(g),
        Command::Dot { file, cover, output } => {
            let sys = load_system(&file)?;
            let text = if cover { cover_dot(&build_cover(&sys)?) } else { system_dot(&sys) };
            match output {
                Some(p) => write(&p, &text).map(|_| String::new()),
                None => Ok(text),
            }
        }
    }
}

fn moma(a: MomaArgs) -> Outcome {
    let sys = load_system(&a.file)?;
    if a.dual {
        let d = dual_config_on(&sys, a.window)?;
        let lp = d.exchange_loop()?;
        let mut out = format!(
            "configurations {}, moves {}, H1 dimension {}\n",
            d.configs().len(),
            d.graph().n_edges(),
            d.h1().dim()
        );
        writeln!(out, "exchange loop of {} moves, monodromy {}", lp.len(), d.monodromy(&lp)? as u8)
            .expect("write to string");
        if let Some(p) = a.trace {
            let mut body = serde_json::json!({ "configs": d.configs(), "cocycle": d.cocycle(), "exchange_loop": lp });
            body["schema_version"] = SCHEMA_VERSION.into();
            write(&p, &(serde_json::to_string_pretty(&body).expect("json value serializes") + "\n"))?;
        }
        return Ok(out);
    }
    let trace = circuit_from(&sys, a.window, a.laps, a.start, false)?;
    if let Some(p) = a.trace {
        write(&p, &versioned(&trace)?)?;
    }
    Ok(format!("flip = {} after {} lap(s) with window {}\n", trace.flip, a.laps, a.window))
}

fn flux_command(f: FluxCommand) -> Outcome {
    match f {
        FluxCommand::Sector { board, faces } => {
            let x = board_complex(&board)?;
            let s = sector_in(&x, &flux(&x, &faces)?, board.mode)?;
            Ok(format!("sector = {s}\n"))
        }
        FluxCommand::Potential { board, faces } => {
            let x = board_complex(&board)?;
            Ok(match find_potential(&x, &flux(&x, &faces)?)? {
                PotentialResult::Potential(a) => format!("potential on edges [{}]\n", list(&a.support())),
                PotentialResult::Obstructed(c) => format!("no potential; class {c}\n"),
            })
        }
        FluxCommand::Reach { board, from, to } => {
            let x = board_complex(&board)?;
            let (a, b) = (flux(&x, &from)?, flux(&x, &to)?);
            if let Some(c) = classify_reachability(&x, &a, &b, board.mode)? {
                return Ok(verdict(&c));
            }
            let Reachability::Reachable { moves } = reachable(&x, &a, &b, board.mode)? else {
                unreachable!("classified as reachable");
            };
            Ok(format!("reachable; toggle edges [{}]\n", list(&moves)))
        }
    }
}

fn game(g: GameCommand) -> Outcome {
    match g {
        GameCommand::Serve { port, host, board } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
            rt.block_on(bistable_server::serve(SocketAddr::new(host, port), Some(board)))
                .map_err(|e| Failure::Io(e.to_string()))?;
            Ok(String::new())
        }
        GameCommand::Solve { board, from, to } => {
            let x = Arc::new(board_complex(&board)?);
            let (a, b) = (flux(&x, &from)?, flux(&x, &to)?);
            let session = GameSession::new(x.clone(), board.mode, a.clone(), b.clone())?;
            match session.solve()? {
                Reachability::Reachable { moves } => {
                    let done = GameSession::replay(x, board.mode, a, b, &moves)?;
                    Ok(format!(
                        "solution: [{}]\nreplayed {} moves: {}\n",
                        list(&moves),
                        done.log().len(),
                        if done.won() { "won" } else { "not won" }
                    ))
                }
                Reachability::Unreachable { from, to } => Ok(format!("unsolvable; sectors {from} and {to} differ\n")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
