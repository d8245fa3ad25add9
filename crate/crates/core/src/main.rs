use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cremona::classify::commands::{self, resolve_map, Output};
use cremona::classify::families::DEFAULT_FAMILY_SIZE;
use cremona::classify::Config;
use cremona::Error;

#[derive(Parser)]
#[command(name = "cremona", version, about = "Finite-order birational maps of the plane")]
struct Cli {
    /// JSON config with order_cap, degree_bound, root_degree_bound, conductor_cap.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct MapArgs {
    /// `(x:y:z) -> (..)`, `((x1:x2),(y1:y2)) -> (..)` or `(x,y) -> (.., ..)`.
    #[arg(long)]
    map: Option<String>,
    /// SF, S15, DP1(F4, F6) or CUBIC(F).
    #[arg(long)]
    surface: Option<String>,
    /// `(w:x:y:z) -> (..)` on the surface.
    #[arg(long)]
    aut: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy classes of elements of a given order.
    Classify {
        #[arg(long)]
        order: u64,
        #[arg(long, default_value_t = DEFAULT_FAMILY_SIZE)]
        family_size: usize,
    },
    /// Order and fixed non-rational curves of the powers.
    Invariants(MapArgs),
    /// `f o g`.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        surface: Option<String>,
    },
    Order(MapArgs),
    FixedCurve(MapArgs),
    /// Search a root of the involution `(x, g/y)` twisted by `x -> zeta_n x`.
    Root {
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        degree_bound: Option<usize>,
    },
    /// The `n`-th power of `((nu g; 1 nu), x -> zeta_n x)`.
    Power {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u64,
    },
    /// Orbits of an isometry group on exceptional classes.
    Picard {
        #[arg(long)]
        r: usize,
        /// JSON matrix (or list of matrices), or Weyl words like `s1 s2 s0`.
        #[arg(long)]
        isometry: PathBuf,
    },
}

fn run(cli: &Cli) -> cremona::Result<Output> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let map = |a: &MapArgs| resolve_map(a.map.as_deref(), a.surface.as_deref(), a.aut.as_deref(), &cfg);
    match &cli.cmd {
        Cmd::Classify { order, family_size } => commands::classify(*order, *family_size, &cfg),
        Cmd::Invariants(a) => commands::invariants(&map(a)?, &cfg),
        Cmd::Compose { f, g, surface } => {
            let (f, g) = match surface {
                Some(s) => (resolve_map(Some(f), Some(s), None, &cfg)?, resolve_map(Some(g), Some(s), None, &cfg)?),
                None => (resolve_map(Some(f), None, None, &cfg)?, resolve_map(Some(g), None, None, &cfg)?),
            };
            commands::compose(&f, &g)
        }
        Cmd::Order(a) => commands::order(&map(a)?, &cfg),
        Cmd::FixedCurve(a) => commands::fixed_curve(&map(a)?),
        Cmd::Root { g, n, degree_bound } => commands::root(g, *n, *degree_bound, &cfg),
        Cmd::Power { nu, g, n } => commands::power(nu, g, *n),
        Cmd::Picard { r, isometry } => {
            let text = std::fs::read_to_string(isometry)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", isometry.display())))?;
            commands::picard(*r, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&out.json).unwrap())
            } else {
                out.text
            };
            // a closed pipe is not an error
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::CapExceeded(_) => 3,
                _ => 1,
            })
        }
    }
}
