mod textio;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use torfill::exactlinalg::det_exact;
use torfill::filling::io::{CertificateFile, CycleFile};
use torfill::filling::{fill_by_solve, fv_upper_experiment, reduce_parallelogram};
use torfill::psl2z::{decompose, delta_bounds, family_matrix, Psl2Word};
use torfill::selftest::{self, Level};
use torfill::spectral::{analyze, basic_inequalities, entropy, fv_lower_bound, gelfand_sequence, torsion_growth_table};
use torfill::IntMatrix;

#[derive(Parser)]
#[command(name = "torfill", version, about = "Filling certificates and spectral bounds for linear torus maps")]
struct Cli {
    /// Print row data as an aligned table instead of key=value lines.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct MatrixSource {
    /// Inline matrix, rows separated by ';' and entries by ','.
    #[arg(long, short = 'm', allow_hyphen_values = true)]
    matrix: Option<String>,
    /// File with one matrix row per line.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
}

impl MatrixSource {
    fn load(&self) -> Result<IntMatrix, CliError> {
        match (&self.matrix, &self.matrix_file) {
            (Some(s), _) => textio::parse_inline(s),
            (None, Some(p)) => textio::parse_file(p),
            (None, None) => Err("no matrix given".into()),
        }
        .map_err(CliError::Input)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spectral radius, entropy, lower bound for the filling volume and the basic inequalities.
    Bounds {
        #[command(flatten)]
        src: MatrixSource,
    },
    /// Reduce the parallelogram cycle of the columns to a unit rectangle.
    Reduce {
        #[command(flatten)]
        src: MatrixSource,
        /// Write the certificate container here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate costs for the powers A^1..A^j_max.
    Fvupper {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long, default_value_t = 8)]
        j_max: u64,
    },
    /// Torsion of the first homology of the cyclic covers' mapping tori.
    Torsion {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long, default_value_t = 10)]
        k_max: u64,
    },
    /// The sequence ||A^j||^(1/j) against the spectral radius.
    Gelfand {
        #[command(flatten)]
        src: MatrixSource,
        #[arg(long, default_value_t = 64)]
        j_max: usize,
    },
    /// Word decomposition in PSL(2,Z) and triangulation-complexity brackets.
    Psl2z(Psl2Args),
    /// Solve for a filling of a serialized cycle, or re-verify a certificate file.
    Fill(FillArgs),
    /// Run the acceptance property suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Args)]
struct Psl2Args {
    #[arg(long, short = 'm', allow_hyphen_values = true, conflicts_with_all = ["family", "word"])]
    matrix: Option<String>,
    /// Family index i of A_i = [[i+1, i], [1, 1]].
    #[arg(long, requires = "power", conflicts_with = "word")]
    family: Option<u32>,
    #[arg(long, default_value_t = 1)]
    power: u32,
    /// Word such as "U2·S·U·S", optionally prefixed by '-'.
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "fill_input")]
struct FillInput {
    /// Cycle container to fill.
    #[arg(long)]
    cycle: Option<PathBuf>,
    /// Certificate container to re-verify.
    #[arg(long)]
    verify: Option<PathBuf>,
}

#[derive(Args)]
struct FillArgs {
    #[command(flatten)]
    input: FillInput,
    #[arg(long = "box", default_value_t = 1)]
    box_size: u32,
    #[arg(long, default_value_t = 3)]
    max_expand: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

enum CliError {
    Input(String),
    Verification(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

struct Out {
    table: bool,
}

impl Out {
    fn kv(&self, key: &str, value: impl std::fmt::Display) {
        println!("{key}={value}");
    }

    fn rows(&self, header: &[&str], rows: &[Vec<String>]) {
        if !self.table {
            for r in rows {
                let line: Vec<String> = header.iter().zip(r).map(|(h, v)| format!("{h}={v}")).collect();
                println!("row {}", line.join(" "));
            }
            return;
        }
        let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for r in rows {
            for (w, v) in widths.iter_mut().zip(r) {
                *w = (*w).max(v.len());
            }
        }
        let fmt = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        println!("{}", fmt(header.to_vec()));
        for r in rows {
            println!("{}", fmt(r.iter().map(String::as_str).collect()));
        }
    }
}

fn square(m: &IntMatrix) -> Result<(), CliError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(CliError::Input("matrix must be square".into()))
    }
}

fn bounds(out: &Out, a: &IntMatrix) -> Result<(), CliError> {
    let n = a.rows();
    let s = analyze(a).map_err(|e| anyhow!(e))?;
    let b = basic_inequalities(a, n).map_err(|e| anyhow!(e))?;
    out.kv("matrix", textio::format_inline(a));
    out.kv("dim", n);
    out.kv(
        "charpoly",
        s.charpoly.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    out.kv("rho", format!("{:.12}", s.rho));
    out.kv("ln_rho", format!("{:.12}", s.rho.ln()));
    out.kv("log2_rho", format!("{:.12}", s.rho.log2()));
    out.kv("entropy_ln", format!("{:.12}", entropy(a).map_err(|e| anyhow!(e))?));
    out.kv("fv_lower_bound_ln", format!("{:.12}", fv_lower_bound(a, n).map_err(|e| anyhow!(e))?));
    out.kv("n_ln_rho", format!("{:.12}", b.n_ln_rho));
    out.kv("basic_left_holds", b.left_holds);
    out.kv("basic_right_holds", b.right_holds);
    out.kv("unit_root_flag", s.unit_root_flag);
    Ok(())
}

fn reduce(out: &Out, a: &IntMatrix, path: Option<&PathBuf>) -> Result<(), CliError> {
    square(a)?;
    let r = reduce_parallelogram(a).map_err(|e| anyhow!(e))?;
    let v = r.certificate.verify();
    out.kv("matrix", textio::format_inline(a));
    out.kv("det", &r.final_size);
    out.kv("log2_norm", format!("{:.6}", r.log2_norm));
    out.kv("cost", &r.cost);
    out.kv("move_cost_sum", &r.move_cost_sum);
    out.kv("moves", r.fill.pieces.len());
    out.kv("rects", r.rects.len());
    out.kv("witness_terms", r.certificate.witness.len());
    out.kv("verified", v.ok);
    if let Some(p) = path {
        CertificateFile::from_certificate(&r.certificate, &r.records())
            .write(p)
            .map_err(|e| anyhow!(e))?;
        out.kv("certificate", p.display());
    }
    if v.ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} face mismatches", v.mismatch_count)))
    }
}

fn fvupper(out: &Out, a: &IntMatrix, j_max: u64) -> Result<(), CliError> {
    square(a)?;
    if det_exact(a).map_err(|e| anyhow!(e))? != BigInt::from(1) {
        return Err(CliError::Input("fvupper needs det A = 1".into()));
    }
    let rep = fv_upper_experiment(a, j_max).map_err(|e| anyhow!(e))?;
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.j.to_string(),
                r.cost.to_string(),
                format!("{:.3}", r.cost_over_j),
                format!("{:.4}", r.log2_norm),
                r.verified.to_string(),
            ]
        })
        .collect();
    out.rows(&["j", "cost", "cost_over_j", "log2_norm", "verified"], &rows);
    out.kv("slope_per_log2_norm", format!("{:.4}", rep.slope));
    out.kv("intercept", format!("{:.4}", rep.intercept));
    if let Ok(s) = analyze(a) {
        if s.rho > 1.0 {
            let k = rep.rows.iter().map(|r| r.cost_over_j).fold(0.0, f64::max) / s.rho.log2();
            out.kv("k_hat_per_log2_rho", format!("{k:.4}"));
        }
    }
    if rep.rows.iter().all(|r| r.verified) {
        Ok(())
    } else {
        Err(CliError::Verification("a certificate failed to verify".into()))
    }
}

fn torsion(out: &Out, a: &IntMatrix, k_max: u64) -> Result<(), CliError> {
    square(a)?;
    let rows = torsion_growth_table(a, k_max).map_err(|e| anyhow!(e))?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.torsion_order.to_string(),
                r.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                r.free_rank.to_string(),
                format!("{:.6}", r.log_tors_over_k),
            ]
        })
        .collect();
    out.rows(&["k", "torsion_order", "invariant_factors", "free_rank", "log_tors_over_k_ln"], &table);
    if let Some(r) = rows.first() {
        out.kv("entropy_ln", format!("{:.6}", r.target));
    }
    Ok(())
}

fn gelfand(out: &Out, a: &IntMatrix, j_max: usize) -> Result<(), CliError> {
    square(a)?;
    let rho = analyze(a).map_err(|e| anyhow!(e))?.rho;
    let seq = gelfand_sequence(a, j_max).map_err(|e| anyhow!(e))?;
    let rows: Vec<Vec<String>> = seq
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let rel = if rho > 0.0 { (g - rho).abs() / rho } else { f64::NAN };
            vec![(i + 1).to_string(), format!("{g:.9}"), format!("{rel:.3e}")]
        })
        .collect();
    out.rows(&["j", "norm_root", "rel_err"], &rows);
    out.kv("rho", format!("{rho:.12}"));
    Ok(())
}

fn psl2z(out: &Out, args: &Psl2Args) -> Result<(), CliError> {
    let word = if let Some(w) = &args.word {
        w.parse::<Psl2Word>().map_err(|e| CliError::Input(e.to_string()))?
    } else {
        let a = match (&args.matrix, args.family) {
            (Some(s), _) => textio::parse_inline(s).map_err(CliError::Input)?,
            (None, Some(i)) => torfill::exactlinalg::mat_pow(&family_matrix(i), args.power as u64)
                .map_err(|e| anyhow!(e))?,
            (None, None) => return Err(CliError::Input("give --matrix, --family or --word".into())),
        };
        out.kv("matrix", textio::format_inline(&a));
        decompose(&a).map_err(|e| CliError::Input(e.to_string()))?.word
    };
    let reduced = word.cyclically_reduced();
    let d = delta_bounds(&word);
    out.kv("word", &word);
    out.kv("length", word.len());
    out.kv("cyclically_reduced", &reduced);
    out.kv("cyclically_reduced_length", reduced.len());
    out.kv("delta_lower", format!("kappa*{}", d.lower_kappa_coeff));
    match d.family_upper {
        Some(u) => out.kv("delta_upper", u),
        None => out.kv("delta_upper", "n/a"),
    }
    out.kv("product", textio::format_inline(&word.reconstruct()));
    Ok(())
}

fn fill(out: &Out, args: &FillArgs) -> Result<(), CliError> {
    if let Some(p) = &args.input.verify {
        let file = CertificateFile::read(p).map_err(|e| CliError::Input(e.to_string()))?;
        let cert = file.certificate().map_err(|e| CliError::Input(e.to_string()))?;
        let v = cert.verify();
        out.kv("ambient_dim", file.ambient_dim);
        out.kv("degree", file.degree);
        out.kv("cost", &cert.cost);
        out.kv("trace_moves", file.trace.len());
        out.kv("boundary_ok", v.boundary_ok);
        out.kv("cost_ok", v.cost_ok);
        out.kv("mismatch_count", v.mismatch_count);
        for m in &v.mismatches {
            let verts: Vec<String> = m
                .face
                .vertices()
                .map(|x| format!("({})", x.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            println!("mismatch face={} expected={} found={}", verts.join(""), m.expected, m.found);
        }
        out.kv("verified", v.ok);
        return if v.ok { Ok(()) } else { Err(CliError::Verification("certificate does not verify".into())) };
    }
    let path = args.input.cycle.as_ref().expect("clap group");
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let z = serde_json::from_str::<CycleFile>(&text)
        .map_err(|e| CliError::Input(e.to_string()))?
        .chain()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let cert = match fill_by_solve(&z, args.box_size, args.max_expand) {
        Ok(c) => c,
        Err(torfill::filling::FillError::NotACycle) => return Err(CliError::Input("input is not a cycle".into())),
        Err(e) => return Err(anyhow!(e).into()),
    };
    let v = cert.verify();
    out.kv("cost", &cert.cost);
    out.kv("witness_terms", cert.witness.len());
    out.kv("verified", v.ok);
    if let Some(o) = &args.out {
        CertificateFile::from_certificate(&cert, &[]).write(o).map_err(|e| anyhow!(e))?;
        out.kv("certificate", o.display());
    }
    if v.ok {
        Ok(())
    } else {
        Err(CliError::Verification("solver output does not verify".into()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = Out { table: cli.table };
    match &cli.command {
        Command::Bounds { src } => {
            let a = src.load()?;
            square(&a)?;
            bounds(&out, &a)
        }
        Command::Reduce { src, out: path } => reduce(&out, &src.load()?, path.as_ref()),
        Command::Fvupper { src, j_max } => fvupper(&out, &src.load()?, *j_max),
        Command::Torsion { src, k_max } => torsion(&out, &src.load()?, *k_max),
        Command::Gelfand { src, j_max } => gelfand(&out, &src.load()?, *j_max),
        Command::Psl2z(args) => psl2z(&out, args),
        Command::Fill(args) => fill(&out, args),
        Command::Selftest { level, seed } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let results = selftest::run(level, *seed, |r| {
                println!("{}", r.line());
                for d in &r.details {
                    println!("    {d}");
                }
            });
            let passed = results.iter().filter(|r| r.pass).count();
            out.kv("criteria_passed", format!("{passed}/{}", results.len()));
            if selftest::all_pass(&results) {
                Ok(())
            } else {
                Err(CliError::Verification("some criteria failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(m) => eprintln!("input error: {m}"),
                CliError::Verification(m) => eprintln!("verification failed: {m}"),
                CliError::Other(err) => eprintln!("error: {err:#}"),
            }
            ExitCode::from(e.code())
        }
    }
}
