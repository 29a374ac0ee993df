//! The `stabset` command line: file-based access to witness verification,
//! exact maximum orders, constructions, compression and rank certificates.
//!
//! Exit codes: 0 on success or a valid witness, 1 for an invalid witness,
//! 2 for usage, parse and precondition errors.

mod experiment;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stabset::clp::{rank_certificate, DegreeMode, CERTIFICATE_CSV_HEADER};
use stabset::constructions::{
    ap_witness, dyadic_construction, dyadic_for_size, pad_to_size, ConstructedInstance,
    ConstructionMeta,
};
use stabset::formats::{parse_set, parse_witness, write_set, write_witness, SetFile, WitnessFile};
use stabset::modelling::compress;
use stabset::orderprop::{export_cnf, max_order_exact, verify_witness, SolveOptions};
use stabset::{BitVector, FiniteSet, GroupElement, Witness};

pub use experiment::{run_experiment, ExperimentRow, Generator, Sweep, CSV_HEADER};

#[derive(Parser, Debug)]
#[command(name = "stabset", version, about = "Order-property tools for finite sets in F2^n and Z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a witness realizes the order property for a set.
    Verify { set: PathBuf, witness: PathBuf },
    /// Exact maximum order of a set in F2^n.
    MaxOrder {
        set: PathBuf,
        /// Stop after this many seconds and report the best order found.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Write an optimal witness here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        /// Write a DIMACS CNF for the order given by --cnf-k.
        #[arg(long)]
        cnf_out: Option<PathBuf>,
        /// Order encoded in the CNF; defaults to one more than the maximum.
        #[arg(long)]
        cnf_k: Option<usize>,
    },
    /// Build an explicit set together with a witness.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Compress a witness into a small F2^n, losing 2l - 1 from its order.
    Compress {
        set: PathBuf,
        witness: PathBuf,
        #[arg(long)]
        l: usize,
        /// Output prefix; writes <prefix>.set and <prefix>.wit.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank certificate from a maximal-support vanishing polynomial.
    Clp {
        set: PathBuf,
        witness: PathBuf,
        /// Threshold p in (1/2, 1] with pn an integer, e.g. 3/5 or 0.6.
        #[arg(long)]
        p: String,
        /// Allow p n - 1 to be odd.
        #[arg(long)]
        relaxed: bool,
        /// Print a CSV header and row instead of the text report.
        #[arg(long)]
        csv: bool,
    },
    /// Sweep a family of sets and tabulate their maximum orders as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Arithmetic progression {start, start+diff, ...} in Z.
    Ap {
        #[arg(long, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, allow_hyphen_values = true)]
        diff: i64,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dyadic construction, by parameter l or by target size.
    Dyadic {
        #[arg(long, conflicts_with = "size")]
        l: Option<usize>,
        /// Largest instance with at most this many elements, padded to it.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        pad_to: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// random, subspace, dyadic or ap-encoded.
    #[arg(long)]
    generator: String,
    /// Inclusive range `a..b` (or a single value) of the generator
    /// parameter: size for random and ap-encoded, dimension for subspace,
    /// l for dyadic.
    #[arg(long)]
    range: String,
    /// Ambient dimension for random and subspace sets.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Instances per parameter value.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-instance solver time limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    time_limit: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Verify { set, witness } => cmd_verify(&set, &witness, out),
        Command::MaxOrder {
            set,
            time_limit,
            witness_out,
            cnf_out,
            cnf_k,
        } => cmd_max_order(&set, time_limit, witness_out, cnf_out, cnf_k, out),
        Command::Construct { kind } => cmd_construct(kind, out),
        Command::Compress {
            set,
            witness,
            l,
            out: prefix,
        } => cmd_compress(&set, &witness, l, &prefix, out),
        Command::Clp {
            set,
            witness,
            p,
            relaxed,
            csv,
        } => cmd_clp(&set, &witness, &p, relaxed, csv, out),
        Command::Experiment(args) => cmd_experiment(args, out),
    }
}

fn read_set(path: &Path) -> Result<SetFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_set(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_witness(path: &Path) -> Result<WitnessFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_witness(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_f2_pair(set: &Path, witness: &Path) -> Result<(FiniteSet<BitVector>, Witness<BitVector>)> {
    match (read_set(set)?, read_witness(witness)?) {
        (SetFile::F2(a), WitnessFile::F2(w)) if a.ambient() == w.ambient() => Ok((a, w)),
        (a, w) => bail!(
            "expected a set and witness in the same F2^n, got {} and {}",
            a.ambient(),
            w.ambient()
        ),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn report_verdict<E: GroupElement>(
    a: &FiniteSet<E>,
    w: &Witness<E>,
    out: &mut dyn Write,
) -> Result<i32> {
    let verdict = verify_witness(a, w)?;
    writeln!(out, "{verdict}")?;
    Ok(if verdict.is_valid() { 0 } else { 1 })
}

fn cmd_verify(set: &Path, witness: &Path, out: &mut dyn Write) -> Result<i32> {
    match (read_set(set)?, read_witness(witness)?) {
        (SetFile::F2(a), WitnessFile::F2(w)) => report_verdict(&a, &w, out),
        (SetFile::Z(a), WitnessFile::Z(w)) => report_verdict(&a, &w, out),
        (a, w) => bail!("set lives in {} but witness in {}", a.ambient(), w.ambient()),
    }
}

fn duration(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).context("time limit must be a nonnegative number of seconds")
}

fn cmd_max_order(
    set: &Path,
    time_limit: Option<f64>,
    witness_out: Option<PathBuf>,
    cnf_out: Option<PathBuf>,
    cnf_k: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let a = match read_set(set)? {
        SetFile::F2(a) => a,
        SetFile::Z(_) => bail!(
            "max-order searches F2^n only: there the witness entries can be confined to \
             A+A and A+A+A, which has no finite analogue in Z. A progression of length N \
             in Z already has order N = |A|, the largest possible"
        ),
    };
    let opts = SolveOptions {
        time_limit: time_limit.map(duration).transpose()?,
        incumbent: None,
    };
    let report = max_order_exact(&a, &opts)?;
    writeln!(out, "|A| = {}", a.len())?;
    writeln!(out, "kmax = {}", report.kmax)?;
    writeln!(out, "status = {}", report.status)?;
    writeln!(out, "nodes = {}", report.nodes_explored)?;
    writeln!(out, "runtime = {:.6}", report.elapsed.as_secs_f64())?;
    if let Some(path) = witness_out {
        write_file(&path, &write_witness(&report.witness))?;
        writeln!(out, "witness written to {}", path.display())?;
    }
    if let Some(path) = cnf_out {
        let k = cnf_k.unwrap_or(report.kmax + 1);
        let cnf = export_cnf(&a, k)?;
        write_file(&path, &cnf.text)?;
        writeln!(
            out,
            "cnf for k = {k} ({} vars, {} clauses) written to {}",
            cnf.layout.num_vars,
            cnf.num_clauses,
            path.display()
        )?;
    }
    Ok(0)
}

fn save_instance<E: GroupElement>(
    inst: &ConstructedInstance<E>,
    prefix: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let (set_path, wit_path) = (with_ext(prefix, "set"), with_ext(prefix, "wit"));
    write_file(&set_path, &write_set(&inst.set))?;
    write_file(&wit_path, &write_witness(&inst.witness))?;
    writeln!(out, "|A| = {}", inst.set.len())?;
    writeln!(out, "k = {}", inst.order())?;
    writeln!(out, "group = {}", inst.set.ambient())?;
    match &inst.meta {
        ConstructionMeta::Ap { .. } => writeln!(out, "upper bound k <= |A| = {}", inst.set.len())?,
        ConstructionMeta::Dyadic {
            l,
            r,
            size_formula,
            size_bound,
            ..
        } => {
            writeln!(out, "l = {l}, R = {r}")?;
            writeln!(out, "|A| by formula = {size_formula}")?;
            writeln!(out, "size bound 2^(4l)(1+1/sqrt2)^(2l) = {size_bound:.3}")?;
            if let Some(from) = inst.padded_from {
                writeln!(out, "padded from {from}")?;
            }
            writeln!(out, "log k / log |A| = {:.6}", inst.order_exponent())?;
        }
    }
    writeln!(out, "wrote {} and {}", set_path.display(), wit_path.display())?;
    Ok(())
}

fn cmd_construct(kind: ConstructKind, out: &mut dyn Write) -> Result<i32> {
    match kind {
        ConstructKind::Ap {
            start,
            diff,
            length,
            out: prefix,
        } => save_instance(&ap_witness(start, diff, length)?, &prefix, out)?,
        ConstructKind::Dyadic {
            l,
            size,
            pad_to,
            out: prefix,
        } => {
            let inst = match (l, size) {
                (Some(l), None) => dyadic_construction(l)?,
                (None, Some(n)) => dyadic_for_size(n)?,
                _ => bail!("give exactly one of --l and --size"),
            };
            let inst = match pad_to {
                Some(n) => pad_to_size(&inst, n)?,
                None => inst,
            };
            save_instance(&inst, &prefix, out)?;
        }
    }
    Ok(0)
}

fn cmd_compress(
    set: &Path,
    witness: &Path,
    l: usize,
    prefix: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let (a, w) = read_f2_pair(set, witness)?;
    let m = compress(&a, &w, l)?;
    let (set_path, wit_path) = (with_ext(prefix, "set"), with_ext(prefix, "wit"));
    write_file(&set_path, &write_set(&m.a_prime))?;
    write_file(&wit_path, &write_witness(&m.witness_prime))?;
    writeln!(out, "k = {}, l = {}", m.k, m.l)?;
    writeln!(out, "eta = {}, K = {}", m.eta, m.big_k)?;
    writeln!(out, "n = {}", m.n)?;
    writeln!(out, "|D| = {} = 2^{}", m.d_size, m.n)?;
    writeln!(out, "quotient steps = {}", m.trace.len())?;
    writeln!(out, "|A'| = {}", m.a_prime.len())?;
    writeln!(out, "order = {}", m.witness_prime.k())?;
    writeln!(out, "2^n <= 16 eta^-10 K^15 k: {}", m.bound_ok)?;
    writeln!(out, "bound slack (log2) = {:.3}", m.bound_slack_log2)?;
    writeln!(out, "wrote {} and {}", set_path.display(), wit_path.display())?;
    Ok(0)
}

/// Accepts `a/b` or a decimal.
fn parse_p(text: &str) -> Result<f64> {
    let p = match text.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse()?, b.trim().parse()?);
            a / b
        }
        None => text.trim().parse()?,
    };
    if !(p > 0.5 && p <= 1.0) {
        bail!("p = {text} must lie in (1/2, 1]");
    }
    Ok(p)
}

fn cmd_clp(
    set: &Path,
    witness: &Path,
    p: &str,
    relaxed: bool,
    csv: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let p = parse_p(p).with_context(|| format!("bad --p {p:?}"))?;
    let (a, w) = read_f2_pair(set, witness)?;
    let mode = if relaxed {
        DegreeMode::Relaxed
    } else {
        DegreeMode::Strict
    };
    let cert = rank_certificate(&a, &w, p, mode)?;
    if csv {
        writeln!(out, "{CERTIFICATE_CSV_HEADER}")?;
        writeln!(out, "{}", cert.csv_row())?;
    } else {
        writeln!(out, "{cert}")?;
    }
    Ok(0)
}

fn cmd_experiment(args: ExperimentArgs, out: &mut dyn Write) -> Result<i32> {
    let sweep = Sweep {
        generator: args.generator.parse()?,
        range: experiment::parse_range(&args.range)?,
        n: args.n,
        reps: args.reps,
        seed: args.seed,
        time_limit: duration(args.time_limit)?,
    };
    let rows = run_experiment(&sweep)?;
    let mut text = format!("{CSV_HEADER}\n");
    for row in &rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    match args.out {
        Some(path) => {
            write_file(&path, &text)?;
            writeln!(out, "{} rows written to {}", rows.len(), path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}
