//! `trigen`: command-line front end for the construction and its checks.
//!
//! Exit status: 0 on success, 1 when a verification fails or is
//! indeterminate, 2 on bad input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trigen_core::gadgets::{companion_letter, mutation_sweep};
use trigen_core::represent::{represent, FiniteLattice, MAX_M};
use trigen_core::verify::{recheck, CertificateFile};
use trigen_core::{
    bell, check_embedding, closure, parse_partition_list, reorder_for_lemma, search_quadruple,
    synth_gadget, verify_quadruple, Error, GadgetSet, GeneratorQuadruple, Letter, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(name = "trigen", version, about = "Three-generated partition lattices from gadget blow-ups")]
struct Cli {
    /// Print extra detail
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check or search for gadget templates
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Build the blow-up of a quadruple and certify the embedding
    ThreeGen(ThreeGenArgs),
    /// Size of the sublattice generated by a list of partitions
    Closure(ClosureArgs),
    /// Re-check a certificate file
    Check(CheckArgs),
    /// Check or search for generating quadruples
    #[command(subcommand)]
    Quad(QuadCmd),
    /// Represent a small lattice inside some Equ(m)
    Represent(RepresentArgs),
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Check the templates against their block lists
    Verify(GadgetDir),
    /// Search for a template meeting the block lists of one gadget
    Synth(SynthArgs),
}

#[derive(Args)]
struct GadgetDir {
    /// Directory with alpha..delta.gadget and *.spec files (default: shipped set)
    #[arg(long)]
    gadgets: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    dir: GadgetDir,
    /// alpha, beta, gamma or delta
    #[arg(long)]
    name: String,
    /// Node budget
    #[arg(long, default_value_t = 10_000_000)]
    budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThreeGenArgs {
    /// Quadruple file
    #[arg(long, conflicts_with = "equ", required_unless_present = "equ")]
    input: Option<PathBuf>,
    /// Use the shipped generators of Equ(n); even n is padded by one point
    #[arg(long)]
    equ: Option<usize>,
    #[command(flatten)]
    dir: GadgetDir,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct ClosureArgs {
    /// Partition list: `n=<int>` then one partition per line
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Write the elements here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Certificate file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum QuadCmd {
    /// Check that a quadruple generates Equ(n)
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Random search for a generating quadruple
    Search {
        /// Ground set size (odd, 3 to 7)
        #[arg(long = "n", visible_alias = "equ")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of candidates drawn
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RepresentArgs {
    /// Lattice file: `elements <names>` then `cover <lower> <upper>` lines
    #[arg(long)]
    input: PathBuf,
    /// Largest m to try
    #[arg(long, default_value_t = MAX_M)]
    max_m: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command did not succeed.
enum Failure {
    /// Exit 1.
    Verify(String),
    /// Exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::JoinConditions | Error::Capped(_) | Error::Exhausted | Error::Unverified => {
                Failure::Verify(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes to `out` if given, else to stdout.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_gadgets(dir: &GadgetDir) -> Result<GadgetSet, Failure> {
    match &dir.gadgets {
        None => Ok(GadgetSet::builtin().clone()),
        Some(d) => GadgetSet::load_dir(d)
            .map_err(|e| Failure::Input(format!("{}: {e}", d.display())))?
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

/// A loaded set is only used by the construction after it passes its lists.
fn verified_gadgets(dir: &GadgetDir) -> Result<GadgetSet, Failure> {
    let set = load_gadgets(dir)?;
    if set.is_verified() {
        return Ok(set);
    }
    let (set, _) = set.verify()?;
    if !set.is_verified() {
        return Err(Failure::Verify("gadget templates fail their block lists; run `gadget verify`".into()));
    }
    Ok(set)
}

fn gadget_verify(dir: &GadgetDir, verbose: bool) -> Outcome {
    let set = load_gadgets(dir)?;
    let reports = set.reports()?;
    let mut failed = 0;
    for r in &reports {
        for o in &r.outcomes {
            println!("{} {} {}", r.letter, o.term, if o.passed { "pass" } else { "FAIL" });
            if !o.passed {
                failed += 1;
                println!("  {}", o.detail);
            }
        }
    }
    if verbose {
        for l in Letter::ALL {
            let specs: Vec<_> = set.specs_for(l).cloned().collect();
            let companion = companion_letter(l).map(|c| set.template(c));
            let sweep = mutation_sweep(set.template(l), &specs, companion)?;
            let missed: Vec<String> = sweep
                .iter()
                .filter(|(_, _, caught)| !caught)
                .map(|(k, c, _)| {
                    let e = set.template(l).edges[*k];
                    format!("{}-{} {}->{c}", e.a, e.b, e.color)
                })
                .collect();
            println!(
                "mutations {l}: {} of {} caught{}",
                sweep.len() - missed.len(),
                sweep.len(),
                if missed.is_empty() { String::new() } else { format!("; missed {}", missed.join(", ")) }
            );
        }
    }
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} block lists failed")));
    }
    Ok(())
}

fn gadget_synth(a: &SynthArgs) -> Outcome {
    let letter: Letter = a.name.parse()?;
    let set = load_gadgets(&a.dir)?;
    let specs: Vec<_> = set.specs_for(letter).cloned().collect();
    let companion = companion_letter(letter).map(|c| set.template(c));
    let t = synth_gadget(letter, &specs, a.budget, companion)?;
    emit(a.out.as_deref(), &t.to_text())
}

fn three_gen(a: &ThreeGenArgs, verbose: bool) -> Outcome {
    let quad = match (&a.input, a.equ) {
        (Some(p), _) => GeneratorQuadruple::parse(&read(p)?)?,
        (None, Some(n)) => {
            let base = if n % 2 == 0 { n + 1 } else { n };
            let q = GeneratorQuadruple::builtin(base)
                .map_err(|_| Failure::Input(format!("no shipped generators for Equ({n}); try 2 to 7")))?;
            let q = reorder_for_lemma(q)?;
            if verbose && base != n {
                eprintln!("Equ({n}) embeds in Equ({base}); using its generators");
            }
            q
        }
        (None, None) => unreachable!("clap requires one of --input and --equ"),
    };
    let gadgets = verified_gadgets(&a.dir)?;
    let cert = check_embedding(&quad, &gadgets, a.cap)?;
    let summary = format!(
        "A0 {} B {} L0 {} L2 {} verdict {}",
        cert.a0_size,
        cert.b_size,
        cert.l0.len(),
        cert.l2.len(),
        if cert.passed() { "pass" } else { "fail" }
    );
    match &a.out {
        Some(p) => {
            emit(Some(p), &cert.to_text())?;
            println!("{summary}");
        }
        None => print!("{}", cert.to_text()),
    }
    if verbose {
        for d in &cert.verdicts.theta.detail {
            eprintln!("{d}");
        }
    }
    if !cert.passed() {
        return Err(Failure::Verify(summary));
    }
    Ok(())
}

fn closure_cmd(a: &ClosureArgs, verbose: bool) -> Outcome {
    let (_, parts) = parse_partition_list(&read(&a.input)?)?;
    let l = closure(&parts, a.cap)?;
    if l.capped {
        println!("capped at {} elements", a.cap);
        return Err(Failure::Verify("closure capped".into()));
    }
    println!("size {}", l.len());
    if verbose || a.out.is_some() {
        let mut text = format!("n={}\n", parts[0].len());
        for e in &l.elements {
            writeln!(text, "{e}").unwrap();
        }
        emit(a.out.as_deref(), &text)?;
    }
    Ok(())
}

fn check_cmd(a: &CheckArgs) -> Outcome {
    let file = CertificateFile::parse(&read(&a.input)?)?;
    let r = recheck(&file, a.cap)?;
    for m in &r.mismatches {
        println!("mismatch: {m}");
    }
    let ok = r.passed();
    println!(
        "L0 {} L2 {} verdict {}",
        r.certificate.l0.len(),
        r.certificate.l2.len(),
        if ok { "pass" } else { "fail" }
    );
    if !ok {
        return Err(Failure::Verify("certificate does not check".into()));
    }
    Ok(())
}

fn quad_cmd(c: &QuadCmd) -> Outcome {
    match c {
        QuadCmd::Verify { input } => {
            let q = GeneratorQuadruple::parse(&read(input)?)?;
            let ok = verify_quadruple(&q)?;
            println!(
                "n {} bell {} generates {}",
                q.n(),
                bell(q.n()),
                if ok { "yes" } else { "no" }
            );
            if !ok {
                return Err(Failure::Verify("quadruple does not generate".into()));
            }
            Ok(())
        }
        QuadCmd::Search { n, seed, budget, out } => {
            let q = search_quadruple(*n, *budget, *seed)?;
            emit(out.as_deref(), &q.to_text())
        }
    }
}

fn represent_cmd(a: &RepresentArgs) -> Outcome {
    let l = FiniteLattice::parse(&read(&a.input)?)?;
    match represent(&l, a.max_m, a.budget) {
        Ok(r) => emit(a.out.as_deref(), &r.to_text(&l)),
        Err(Error::Exhausted) => Err(Failure::Verify(format!(
            "no representation found up to m = {} within the budget (not a proof that none exists)",
            a.max_m
        ))),
        Err(e) => Err(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let v = cli.verbose;
    let outcome = match &cli.command {
        Command::Gadget(GadgetCmd::Verify(d)) => gadget_verify(d, v),
        Command::Gadget(GadgetCmd::Synth(a)) => gadget_synth(a),
        Command::ThreeGen(a) => three_gen(a, v),
        Command::Closure(a) => closure_cmd(a, v),
        Command::Check(a) => check_cmd(a),
        Command::Quad(c) => quad_cmd(c),
        Command::Represent(a) => represent_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(m)) => {
            eprintln!("trigen: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("trigen: {m}");
            ExitCode::from(2)
        }
    }
}
