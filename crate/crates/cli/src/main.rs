use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsub::algsearch::{
    configure_threads_from_env, index_obstruction, scan_ring, ScanError, Scanner,
    SearchOptions, SearchReport,
};
use qsub::fusionring::{ring_save, validate, FusionRing, ObjectVec, RingError};
use qsub::izumi::{conjecture_check, guess_kind, izumi_identities, saturated_analysis, IzumiKind};
use qsub::lattice::{
    divisor_lattice_dot, format_pairs, galois_orbit_report, intermediate_candidates, AdmissibleIndexSet,
};
use qsub::pgraph::export_dot;
use qsub::qfield::QuadExt;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;

#[derive(Parser)]
#[command(name = "qsub", version, about = "Enumerate algebra objects and principal graphs in fusion rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, validate or save a fusion ring.
    Ring {
        #[arg(value_enum)]
        action: RingAction,
        /// Builtin name (h4, h6, i2:<n>) or ring file.
        #[arg(long)]
        ring: String,
        /// Destination for `save`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify candidate algebra objects and their principal graphs.
    Scan(ScanArgs),
    /// Analyse the saturated object of an Izumi-type ring.
    Saturated {
        #[arg(long)]
        ring: String,
        /// i1 or i2; guessed from the invertible objects when omitted.
        #[arg(long)]
        kind: Option<IzumiKind>,
        #[arg(long)]
        json: bool,
    },
    /// Check the exact index identities for odd n.
    Identities {
        #[arg(long)]
        n: u32,
    },
    /// Factor an index over admissible index sets, or count Galois orbits.
    Lattice(LatticeArgs),
    /// Run the conjectured algebra object of an I1-shaped ring through the pipeline.
    Conjecture {
        #[arg(long)]
        ring: String,
        #[command(flatten)]
        filters: FilterArgs,
    },
    /// Decide whether no candidate of the given index admits a graph.
    Obstruction {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        index: String,
        #[command(flatten)]
        filters: FilterArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RingAction {
    Show,
    Validate,
    Save,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct FilterArgs {
    /// Also enumerate candidates that are not self-dual.
    #[arg(long)]
    no_self_dual: bool,
    /// Keep every member of each conjugation orbit.
    #[arg(long)]
    no_orbit_dedup: bool,
    #[arg(long, default_value_t = 1)]
    depth: u32,
    /// Skip candidates whose index exceeds this exact value.
    #[arg(long)]
    max_index: Option<String>,
    #[arg(long)]
    no_jones: bool,
    #[arg(long)]
    no_expressibility: bool,
}

impl FilterArgs {
    fn options(&self) -> Result<SearchOptions, String> {
        let max_index = match &self.max_index {
            Some(s) => Some(parse_value(s)?),
            None => None,
        };
        Ok(SearchOptions {
            self_dual_filter: !self.no_self_dual,
            inner_orbit_dedup: !self.no_orbit_dedup,
            recursion_depth: self.depth,
            max_index,
            jones_filter: !self.no_jones,
            expressibility_filter: !self.no_expressibility,
        })
    }
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    ring: String,
    #[command(flatten)]
    filters: FilterArgs,
    /// File with one candidate per line as comma-separated coefficients.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one DOT file per surviving graph into this directory.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct LatticeArgs {
    /// Index to factor, in exact syntax such as `33/2+9/2*sqrt(13)`.
    #[arg(long)]
    index: Option<String>,
    /// Comma-separated rings whose surviving indices form the upper set.
    #[arg(long, default_value = "h4,h6")]
    upper: String,
    #[arg(long, default_value = "h4,h6")]
    lower: String,
    /// Write the candidate divisor lattice as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    gal: Option<u64>,
    #[arg(long)]
    dual_gal: Option<u64>,
    #[arg(long)]
    classes: Option<u64>,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::Axiom { .. } => Failure::Invalid(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

fn parse_value(s: &str) -> Result<QuadExt, String> {
    s.parse::<QuadExt>().map_err(|e| format!("cannot parse {s:?}: {e}"))
}

fn load_ring(selector: &str) -> Result<FusionRing, Failure> {
    Ok(FusionRing::resolve(selector)?)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Ring { action, ring, out } => cmd_ring(action, &ring, out),
        Command::Scan(args) => cmd_scan(args),
        Command::Saturated { ring, kind, json } => {
            let ring = load_ring(&ring)?;
            let kind = kind.unwrap_or_else(|| guess_kind(&ring));
            let a = saturated_analysis(&ring, kind).map_err(|e| Failure::Usage(e.to_string()))?;
            if json {
                print!("{}", a.to_json());
            } else {
                print!("{a}");
            }
            Ok(0)
        }
        Command::Identities { n } => {
            let rec = izumi_identities(n).map_err(|e| Failure::Usage(e.to_string()))?;
            print!("{rec}");
            Ok(if rec.all_hold() { 0 } else { EXIT_INVALID })
        }
        Command::Lattice(args) => cmd_lattice(args),
        Command::Conjecture { ring, filters } => {
            let ring = load_ring(&ring)?;
            let rec = conjecture_check(&ring, &filters.options()?).map_err(|e| Failure::Usage(e.to_string()))?;
            print!("{rec}");
            Ok(0)
        }
        Command::Obstruction { ring, index, filters } => {
            let ring = load_ring(&ring)?;
            let delta = parse_value(&index)?.with_radicand(ring.radicand());
            let blocked = index_obstruction(&ring, &delta, &filters.options()?)?;
            println!(
                "{}: index {} {}",
                ring.name(),
                delta.pretty(),
                if blocked { "is obstructed (no candidate admits a graph)" } else { "is not obstructed" }
            );
            Ok(0)
        }
    }
}

fn cmd_ring(action: RingAction, selector: &str, out: Option<PathBuf>) -> Result<u8, Failure> {
    let ring = load_ring(selector)?;
    match action {
        RingAction::Show => {
            println!("ring {} (rank {}, field Q(sqrt({})))", ring.name(), ring.rank(), ring.radicand());
            print!("{}", ring.table());
            println!("dimensions:");
            for i in 0..ring.rank() {
                println!("  {:<6} {}", ring.label(i), ring.dim(i).pretty());
            }
            Ok(0)
        }
        RingAction::Validate => {
            let report = validate(&ring);
            print!("{report}");
            Ok(if report.passed() { 0 } else { EXIT_INVALID })
        }
        RingAction::Save => {
            let out = out.ok_or_else(|| Failure::Usage("ring save needs --out".into()))?;
            ring_save(&ring, &out)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
    }
}

fn read_candidates(ring: &FusionRing, path: &PathBuf) -> Result<Vec<ObjectVec>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            ObjectVec::parse_compact(l)
                .filter(|v| v.rank() == ring.rank())
                .ok_or_else(|| Failure::Usage(format!("bad candidate line {l:?}")))
        })
        .collect()
}

fn cmd_scan(args: ScanArgs) -> Result<u8, Failure> {
    let ring = load_ring(&args.ring)?;
    let opts = args.filters.options()?;
    let report = match &args.candidates {
        Some(path) => {
            let list = read_candidates(&ring, path)?;
            Scanner::new(&ring, opts.clone())?.scan_candidates(&list)?
        }
        None => scan_ring(&ring, &opts)?,
    };
    if let Some(out) = &args.out {
        write_file(out, &report.to_json())?;
    }
    if let Some(dir) = &args.dot {
        write_dots(&ring, &opts, &report, dir)?;
    }
    match args.format {
        Format::Table => print!("{}", report.summary_table()),
        Format::Json => print!("{}", report.to_json()),
    }
    Ok(if report.unresolved.is_empty() { 0 } else { EXIT_UNRESOLVED })
}

fn write_dots(ring: &FusionRing, opts: &SearchOptions, report: &SearchReport, dir: &PathBuf) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let scanner = Scanner::new(ring, opts.clone())?;
    let stem = ring.name().replace([':', '/'], "_");
    let mut k = 0;
    for e in report.entries.iter().filter(|e| !e.surviving.is_empty()) {
        let outcome = scanner.evaluate(&e.object(), opts.recursion_depth);
        for (g, _) in &outcome.surviving {
            k += 1;
            let path = dir.join(format!("{stem}_{k:02}.dot"));
            export_dot(ring, g, &path).map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn index_set(list: &str) -> Result<AdmissibleIndexSet, Failure> {
    let mut acc: Option<AdmissibleIndexSet> = None;
    for sel in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let ring = load_ring(sel)?;
        let report = scan_ring(&ring, &SearchOptions::default())?;
        let set = AdmissibleIndexSet::from_report(&report);
        acc = Some(match acc {
            Some(a) => a.union(&set),
            None => set,
        });
    }
    acc.ok_or_else(|| Failure::Usage("empty ring list".into()))
}

fn cmd_lattice(args: LatticeArgs) -> Result<u8, Failure> {
    let mut did = false;
    if let Some(index) = &args.index {
        did = true;
        let delta = parse_value(index)?;
        let upper = index_set(&args.upper)?;
        let lower = index_set(&args.lower)?;
        let pairs = intermediate_candidates(&delta, &upper, &lower).map_err(|e| Failure::Usage(e.to_string()))?;
        print!("{}", format_pairs(&delta, &pairs));
        if let Some(path) = &args.dot {
            write_file(path, &divisor_lattice_dot(&delta, &pairs))?;
        }
    }
    if args.gal.is_some() || args.dual_gal.is_some() || args.classes.is_some() {
        did = true;
        let gal = args.gal.unwrap_or(1);
        let dual = args.dual_gal.unwrap_or(gal);
        let classes = args.classes.unwrap_or(dual);
        let count = galois_orbit_report(gal, dual, classes).map_err(|e| Failure::Usage(e.to_string()))?;
        println!("{count}");
    }
    if !did {
        return Err(Failure::Usage("lattice needs --index or --gal/--dual-gal/--classes".into()));
    }
    Ok(0)
}

