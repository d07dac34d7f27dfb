//! `mospace`: batch verifier for block-structure files.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 model validation, 4 limit
//! exceeded.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use mospace::contexts::{
    contexts_from_blocks_limited, gelfand_site, spectral_presheaf, ContextPoset,
};
use mospace::dot::to_dot;
use mospace::frame::{booleanize, frame_of, FiniteFrame};
use mospace::io::parse_block_file;
use mospace::ks::{global_sections, ks_search};
use mospace::negation::{dense_site, mo_points, mo_site};
use mospace::order::Direction;
use mospace::pairs::{pair_id, pmo_points, pmo_site};
use mospace::{BlockStructure, Error, SiteOnPoset};

const USAGE: u8 = 1;
const PARSE: u8 = 2;
const MODEL: u8 = 3;
const LIMIT: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "mospace",
    version,
    about = "Measurement-outcome spaces of finite context posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Block structure file.
    #[arg(long)]
    input: std::path::PathBuf,
    /// Abort once an enumeration exceeds this many results.
    #[arg(long, default_value_t = 100_000)]
    limit: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse the file and build its context poset.
    Validate(Common),
    /// List the contexts.
    Contexts(Common),
    /// List the points of the partial measurement outcome site.
    Pmo(Common),
    /// List the measurement outcomes.
    Mo(Common),
    /// List the global sections of the spectral presheaf.
    Sections(Common),
    /// List the Kochen–Specker colorings of the blocks.
    Colorings(Common),
    /// List the opens of a site's frame.
    Frame {
        #[command(flatten)]
        common: Common,
        /// pmo, mo, dense, or gelfand:<context>
        #[arg(long)]
        site: String,
    },
    /// List the regular opens of a site's frame.
    Booleanize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        site: String,
    },
    /// Print a Hasse diagram in DOT.
    Dot {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        what: Diagram,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Diagram {
    Contexts,
    Pmo,
    Mo,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded(n) => {
                Failure::new(LIMIT, format!("limit of {n} results exceeded"))
            }
            other => Failure::new(MODEL, other.to_string()),
        }
    }
}

/// Result lines (sorted on output) and the closing count line.
struct Output {
    notes: Vec<String>,
    lines: Vec<String>,
    count: String,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli, &argv[1..]) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("mospace: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Validate(c)
        | Command::Contexts(c)
        | Command::Pmo(c)
        | Command::Mo(c)
        | Command::Sections(c)
        | Command::Colorings(c) => c,
        Command::Frame { common, .. }
        | Command::Booleanize { common, .. }
        | Command::Dot { common, .. } => common,
    }
}

fn run(cli: &Cli, args: &[String]) -> Result<String, Failure> {
    let opts = common(&cli.command);
    let bytes = std::fs::read(&opts.input)
        .map_err(|e| Failure::new(PARSE, format!("{}: {e}", opts.input.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::new(PARSE, format!("{}: not UTF-8", opts.input.display())))?;
    let blocks = parse_block_file(&text)
        .map_err(|e| Failure::new(PARSE, format!("{}: {e}", opts.input.display())))?;
    let out = execute(&cli.command, &blocks, opts.limit)?;

    let mut report = String::new();
    writeln!(report, "# mospace {}", args.join(" ")).unwrap();
    writeln!(
        report,
        "# input sha256:{}",
        hex::encode(Sha256::digest(&bytes))
    )
    .unwrap();
    for note in &out.notes {
        writeln!(report, "# {note}").unwrap();
    }
    let mut lines = out.lines;
    if !matches!(cli.command, Command::Dot { .. }) {
        lines.sort();
    }
    for line in lines {
        writeln!(report, "{line}").unwrap();
    }
    if !out.count.is_empty() {
        writeln!(report, "{}", out.count).unwrap();
    }
    Ok(report)
}

fn check_limit(n: usize, limit: usize) -> Result<(), Failure> {
    if n > limit {
        Err(Error::LimitExceeded(limit).into())
    } else {
        Ok(())
    }
}

fn plural(n: usize, noun: &str) -> String {
    format!("{n} {noun}{}", if n == 1 { "" } else { "s" })
}

fn execute(cmd: &Command, b: &BlockStructure, limit: usize) -> Result<Output, Failure> {
    if let Command::Colorings(_) = cmd {
        let (all, nodes) = ks_search(b, Some(limit))?;
        let lines = all
            .iter()
            .map(|c| {
                c.ones
                    .iter()
                    .map(|&a| b.atom(a))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        return Ok(Output {
            notes: vec![format!(
                "colorable {}; search nodes {}",
                if all.is_empty() { "no" } else { "yes" },
                nodes
            )],
            lines,
            count: plural(all.len(), "coloring"),
        });
    }

    let cp = contexts_from_blocks_limited(b, Some(limit))?;
    let out = match cmd {
        Command::Validate(_) => Output {
            notes: Vec::new(),
            lines: vec![
                format!("atoms {}", b.universe().len()),
                format!("blocks {}", b.blocks().len()),
                format!("contexts {}", cp.len()),
                format!("maximal {}", cp.maximal().len()),
            ],
            count: "valid".into(),
        },
        Command::Contexts(_) => Output {
            notes: Vec::new(),
            lines: (0..cp.len())
                .map(|c| format!("{}\tatoms={}", cp.id(c), cp.atom_count(c)))
                .collect(),
            count: plural(cp.len(), "context"),
        },
        Command::Pmo(_) => {
            let points = pmo_points(&cp);
            check_limit(points.len(), limit)?;
            let lines = points
                .iter()
                .map(|pt| {
                    let m = pt.maximum(&cp);
                    let label = |c: usize, a: usize| pair_id(&cp, c, cp.algebra(c).atom(a));
                    let ideal: Vec<String> =
                        pt.outcomes.iter().map(|&(c, a)| label(c, a)).collect();
                    format!("{}\t{}", label(m, pt.outcome(m).unwrap()), ideal.join(" "))
                })
                .collect();
            Output {
                notes: Vec::new(),
                lines,
                count: plural(points.len(), "point"),
            }
        }
        Command::Mo(_) => {
            let outcomes = mo_points(&cp);
            check_limit(outcomes.len(), limit)?;
            let lines = outcomes
                .iter()
                .map(|o| pair_id(&cp, o.context, cp.algebra(o.context).atom(o.atom)))
                .collect();
            Output {
                notes: Vec::new(),
                lines,
                count: plural(outcomes.len(), "outcome"),
            }
        }
        Command::Sections(_) => {
            let sigma = spectral_presheaf(&cp);
            let sections = global_sections(&sigma, Some(limit))?;
            let lines = sections
                .iter()
                .map(|s| {
                    (0..cp.len())
                        .map(|c| format!("{}@{}", cp.id(c), sigma.values(c)[s[c]]))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            Output {
                notes: Vec::new(),
                lines,
                count: plural(sections.len(), "section"),
            }
        }
        Command::Frame { site, .. } | Command::Booleanize { site, .. } => {
            let s = site_named(&cp, site)?;
            let mut f = frame_of(&s, Some(limit))?;
            if let Command::Booleanize { .. } = cmd {
                f = booleanize(&f);
            }
            frame_output(&s, &f)
        }
        Command::Dot { what, .. } => {
            let (poset, name) = match what {
                Diagram::Contexts => (cp.poset().clone(), "contexts"),
                Diagram::Pmo => (pmo_site(&cp).poset().clone(), "pmo"),
                Diagram::Mo => (mo_site(&cp).poset().clone(), "mo"),
            };
            let edges = poset.hasse_edges().len();
            Output {
                notes: vec![format!(
                    "{}, {}",
                    plural(poset.len(), "node"),
                    plural(edges, "edge")
                )],
                lines: to_dot(&poset, name).lines().map(str::to_owned).collect(),
                count: String::new(),
            }
        }
        Command::Colorings(_) => unreachable!(),
    };
    Ok(out)
}

fn site_named(cp: &ContextPoset, name: &str) -> Result<SiteOnPoset, Failure> {
    Ok(match name {
        "pmo" => pmo_site(cp).site().clone(),
        "mo" => mo_site(cp).site().clone(),
        "dense" => dense_site(cp.poset(), Direction::Refinement),
        other => {
            let ctx = other.strip_prefix("gelfand:").ok_or_else(|| {
                Failure::new(
                    USAGE,
                    format!("unknown site `{other}`; expected pmo, mo, dense or gelfand:<context>"),
                )
            })?;
            let c = cp
                .poset()
                .index_of(ctx)
                .ok_or_else(|| Failure::new(USAGE, format!("unknown context `{ctx}`")))?;
            gelfand_site(cp.algebra(c))
        }
    })
}

/// One line per open, listing its maximal elements.
fn frame_output(site: &SiteOnPoset, f: &FiniteFrame) -> Output {
    let p = site.base();
    let lines = f
        .opens()
        .iter()
        .map(|u| {
            let mut top = u.clone();
            for x in u.ones() {
                if u.ones().any(|y| p.lt(x, y)) {
                    top.set(x, false);
                }
            }
            format!("{{{}}}", p.ids_of(&top).join(" "))
        })
        .collect();
    Output {
        notes: vec![format!(
            "boolean {}",
            if f.is_boolean() { "yes" } else { "no" }
        )],
        lines,
        count: plural(f.len(), "open"),
    }
}
