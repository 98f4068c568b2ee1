//! Command line front end: root tables, half-plane points, Atkin-Lehner
//! tests, Ford domains with SVG output, catalog verification reports,
//! numerical mutation, mutation-path search, and Hurwitz orbits.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mukai::arith::{al_class, atkin_lehner_divisor, atkin_lehner_local_test, in_fricke};
use mukai::catalog::{
    builtin_catalog, find_entry, find_mutation_path, load_catalog, mutate, parse_collection_file,
    verify_entry, CatalogEntry, Report,
};
use mukai::domain::domain_membership;
use mukai::hurwitz::{hurwitz_orbit, BraidWord};
use mukai::lattice::{enumerate_roots, MukaiForm, MukaiVector};
use mukai::moebius::{h_point_of_vector, MoebiusMap};
use mukai::svg::{render_svg, Window};
use mukai::words::FreeProduct;
use mukai::{Error, Int};

#[derive(Parser)]
#[command(name = "mukai", version, about = "Exact reflection-group computations on Mukai lattices")]
struct Cli {
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List positive roots with bounded rank and degree.
    Roots(RootsArgs),
    /// Print the half-plane point of a vector of negative square.
    Point(PointArgs),
    /// Atkin-Lehner and Fricke membership of a matrix.
    AlTest(AlArgs),
    /// Truncated Ford domain of a catalog entry.
    Ford(FordArgs),
    /// Verify catalog entries and report per-check results.
    Verify(VerifyArgs),
    /// Apply a braid word to an entry's collection.
    Mutate(MutateArgs),
    /// Shortest braid word between two collections.
    Path(PathArgs),
    /// Hurwitz orbit of a tuple of free-group words.
    HurwitzOrbit(OrbitArgs),
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long)]
    delta: u64,
    #[arg(long)]
    rmax: u32,
    #[arg(long)]
    lmax: u32,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    delta: u64,
    /// Vector as "r,l,s".
    #[arg(long, allow_hyphen_values = true)]
    vector: String,
}

#[derive(Args)]
struct AlArgs {
    #[arg(long)]
    level: u64,
    /// Matrix as "a,b,c,d".
    #[arg(long, allow_hyphen_values = true)]
    matrix: String,
}

#[derive(Args)]
struct FordArgs {
    /// Entry name (P3, Q3, V5, V22, DoubleCoverP2, Deg8CI).
    #[arg(long)]
    entry: String,
    /// Word-length truncation.
    #[arg(long, default_value_t = 4)]
    wordlen: u32,
    /// Write an SVG rendering to this file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify a single entry.
    #[arg(long, conflicts_with = "all")]
    entry: Option<String>,
    /// Verify every entry.
    #[arg(long)]
    all: bool,
    /// Emit JSON reports instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MutateArgs {
    #[arg(long)]
    entry: String,
    /// Braid word as comma-separated letters, e.g. "1,2,-3";
    /// the rightmost letter acts first.
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
}

#[derive(Args)]
struct PathArgs {
    /// Collection file: `delta = D` and `vectors = ["r,l,s", ..]`.
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
    /// Maximum braid length to search.
    #[arg(long, default_value_t = 6)]
    max: u32,
}

#[derive(Args)]
struct OrbitArgs {
    /// Rank of the free group.
    #[arg(long)]
    rank: usize,
    /// Tuple entries as space-separated words; each word is a
    /// comma-separated list of signed generator indices, e.g. "1,2,-1 2".
    #[arg(long, allow_hyphen_values = true)]
    tuple: String,
    /// Cap on the reduced length of tuple entries.
    #[arg(long, default_value_t = 6)]
    cap: usize,
    /// Cap on the number of orbit tuples.
    #[arg(long, default_value_t = 10_000)]
    orbit_cap: usize,
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| Error::Schema(format!("{p:?}: {e}"))))
        .collect()
}

fn parse_vector(s: &str) -> Result<MukaiVector, Error> {
    let parts = parse_i64_list(s)?;
    if parts.len() != 3 {
        return Err(Error::Schema(format!("expected \"r,l,s\", got {s:?}")));
    }
    Ok(MukaiVector::new(Int::from(parts[0]), Int::from(parts[1]), Int::from(parts[2])))
}

fn parse_matrix(s: &str) -> Result<MoebiusMap, Error> {
    let parts = parse_i64_list(s)?;
    if parts.len() != 4 {
        return Err(Error::Schema(format!("expected \"a,b,c,d\", got {s:?}")));
    }
    MoebiusMap::from_i64(parts[0], parts[1], parts[2], parts[3])
}

fn load_entries(cli_catalog: &Option<PathBuf>) -> Result<Vec<CatalogEntry>, Error> {
    match cli_catalog {
        None => Ok(builtin_catalog()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
            load_catalog(&text)
        }
    }
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        println!("entry {} ({} ms)", report.entry, report.elapsed_ms);
        for c in &report.checks {
            let mark = if c.pass { "pass" } else { "FAIL" };
            println!("  [{mark}] {:<20} {}", c.name, c.detail);
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Roots(args) => {
            let form = MukaiForm::new(args.delta)?;
            for v in enumerate_roots(form, args.rmax, args.lmax) {
                let p = h_point_of_vector(form, &v)?;
                println!("{v}  point {p}");
            }
            Ok(true)
        }
        Command::Point(args) => {
            let form = MukaiForm::new(args.delta)?;
            let v = parse_vector(&args.vector)?;
            let p = h_point_of_vector(form, &v)?;
            println!("{p}");
            Ok(true)
        }
        Command::AlTest(args) => {
            let m = parse_matrix(&args.matrix)?;
            let direct = atkin_lehner_divisor(args.level, &m);
            let local = atkin_lehner_local_test(args.level, &m);
            match direct {
                Some(e) => println!("atkin-lehner divisor e = {e}"),
                None => println!("not an atkin-lehner element of level {}", args.level),
            }
            println!("local test agrees: {}", direct == local);
            println!("in Gamma_0({}): {}", args.level, direct == Some(1));
            println!("in Fricke group F({}): {}", args.level, in_fricke(args.level, &m));
            if direct.is_some() {
                let class = al_class(args.level, &m)?;
                let bits: Vec<String> = class.bits.iter().map(|p| p.to_string()).collect();
                println!("class in (Z/2)^c: {{{}}}", bits.join(", "));
            }
            Ok(true)
        }
        Command::Ford(args) => {
            let entries = load_entries(&cli.catalog)?;
            let entry = find_entry(&entries, &args.entry)?;
            let dom = entry.domain(args.wordlen)?;
            println!(
                "domain of {} at word length {}: {} circles{}",
                entry.name,
                args.wordlen,
                dom.circles.len(),
                match &dom.strip {
                    Some(s) => format!(", strip left {} width {}", s.left, s.width),
                    None => ", infinite width".into(),
                }
            );
            for c in &dom.circles {
                println!("  circle center {} radius^2 {}", c.center, c.radius_sq);
            }
            for (v, p) in entry.generator_roots.iter().zip(&entry.expected_points) {
                println!("  root {v} at {p}: {}", domain_membership(&dom, p));
            }
            if let Some(path) = &args.svg {
                let window = Window::around(&entry.expected_points, entry.strip.as_ref());
                let svg = render_svg(&dom, &entry.expected_points, window)?;
                std::fs::write(path, svg)
                    .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let entries = load_entries(&cli.catalog)?;
            let selected: Vec<&CatalogEntry> = match (&args.entry, args.all) {
                (Some(name), _) => vec![find_entry(&entries, name)?],
                (None, _) => entries.iter().collect(),
            };
            let mut all_pass = true;
            let mut reports = Vec::new();
            for entry in selected {
                let report = verify_entry(entry);
                all_pass &= report.all_pass();
                reports.push(report);
            }
            if args.json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            } else {
                for report in &reports {
                    print_report(report, false);
                }
                println!("{}", if all_pass { "all checks passed" } else { "FAILURES present" });
            }
            Ok(all_pass)
        }
        Command::Mutate(args) => {
            let entries = load_entries(&cli.catalog)?;
            let entry = find_entry(&entries, &args.entry)?;
            let letters: Vec<i32> = parse_i64_list(&args.braid)?.iter().map(|&x| x as i32).collect();
            let braid = BraidWord::new(entry.collection.len(), &letters)?;
            let out = mutate(&entry.collection, &braid)?;
            for v in &out.vectors {
                println!("{v}");
            }
            Ok(true)
        }
        Command::Path(args) => {
            let read = |p: &PathBuf| {
                std::fs::read_to_string(p)
                    .map_err(|e| Error::Schema(format!("{}: {e}", p.display())))
            };
            let from = parse_collection_file(&read(&args.from)?)?;
            let to = parse_collection_file(&read(&args.to)?)?;
            match find_mutation_path(&from, &to, args.max)? {
                Some(braid) => {
                    println!("braid: {braid}");
                    Ok(true)
                }
                None => {
                    println!("no braid of length <= {} found", args.max);
                    Ok(false)
                }
            }
        }
        Command::HurwitzOrbit(args) => {
            let fp = FreeProduct::free(args.rank);
            let mut tuple = Vec::new();
            for part in args.tuple.split_whitespace() {
                let letters = parse_i64_list(part)?;
                let pairs: Result<Vec<(usize, i64)>, Error> = letters
                    .iter()
                    .map(|&l| {
                        if l == 0 || l.unsigned_abs() as usize > args.rank {
                            Err(Error::Schema(format!("letter {l} out of range")))
                        } else {
                            Ok((l.unsigned_abs() as usize - 1, l.signum()))
                        }
                    })
                    .collect();
                tuple.push(fp.word(&pairs?)?);
            }
            let orbit = hurwitz_orbit(&fp, &tuple, args.cap, args.orbit_cap);
            println!(
                "{} tuple(s), {}",
                orbit.tuples.len(),
                if orbit.complete { "complete" } else { "truncated" }
            );
            for t in &orbit.tuples {
                let words: Vec<String> = t.iter().map(|w| w.to_string()).collect();
                println!("({})", words.join(", "));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. `mukai roots | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
