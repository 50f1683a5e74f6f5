use std::fs;
use std::io::Write;
use std::path::Path;

use qcasc_cascade::generate::{control_cascade, mn_cascade};
use qcasc_cascade::json::CascadeFile;
use qcasc_cascade::{ControlCascade, MnCascade};
use qcasc_ir::json::basis_to_text;
use qcasc_ir::{circuit_from_json, circuit_to_json, Circuit};
use qcasc_parallel::{
    compile_exact_diagonal, compile_load_approx, compile_mn_log_depth, compile_select_exact, Compilation, Pass,
};
use qcasc_verify::{check_exact, check_sampled, EquivalenceResult, Mode};

use crate::config::{BenchArgs, Command, CompileArgs, GenArgs, Kind, OutputFormat, RunConfig, SourceArgs, VerifyArgs};
use crate::CliError;

/// Widest block body the generator produces.
const MAX_GEN_K: usize = qcasc_precompute::MAX_BLOCK_QUBITS;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

/// Writes through a temporary file in the same directory and renames it into
/// place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(contents.as_bytes()).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Prints to stdout; a closed pipe is not an error.
fn print_stdout(contents: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{contents}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_err(Path::new("<stdout>"))(e)),
        _ => Ok(()),
    }
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => print_stdout(contents.trim_end()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// The input program named by `src`.
fn source(src: &SourceArgs) -> Result<CascadeFile, CliError> {
    if let Some(path) = &src.input {
        return Ok(CascadeFile::from_json(&read(path)?)?);
    }
    let (Some(kind), Some(m)) = (src.kind, src.m) else {
        return Err(CliError::Validation("give either --in or both --kind and --m".into()));
    };
    if m == 0 {
        return Err(CliError::Validation("--m must be at least 1".into()));
    }
    match kind {
        Kind::Mn => Ok(CascadeFile::Mn(mn_cascade(m, src.family, src.seed))),
        Kind::Cascade => {
            if src.k == 0 || src.k > MAX_GEN_K {
                return Err(CliError::Validation(format!("--k must lie in 1..={MAX_GEN_K}, got {}", src.k)));
            }
            Ok(CascadeFile::Cascade(control_cascade(src.k, m, src.family, src.seed)))
        }
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<CascadeFile, CliError> {
    let c = source(&args.source)?;
    emit(args.out.as_deref(), &c.to_json())?;
    Ok(c)
}

fn naive(c: &CascadeFile) -> Circuit {
    match c {
        CascadeFile::Mn(m) => m.lower_naive(),
        CascadeFile::Cascade(c) => c.lower_naive(),
    }
}

fn as_cascade(c: &CascadeFile) -> ControlCascade {
    match c {
        CascadeFile::Mn(m) => m.as_control_cascade(),
        CascadeFile::Cascade(c) => c.clone(),
    }
}

fn as_staircase(c: &CascadeFile) -> Result<&MnCascade, CliError> {
    match c {
        CascadeFile::Mn(m) => Ok(m),
        CascadeFile::Cascade(_) => Err(CliError::Validation("this pass needs a staircase (kind mn)".into())),
    }
}

fn check_epsilon(pass: Pass, epsilon: Option<f64>) -> Result<(), CliError> {
    match (pass, epsilon) {
        (Pass::Load, None) => Err(CliError::Validation("the load pass needs --epsilon".into())),
        (Pass::Load, Some(_)) | (_, None) => Ok(()),
        (other, Some(_)) => Err(CliError::Validation(format!("--epsilon only applies to the load pass, not {other}"))),
    }
}

fn compile_with(
    c: &CascadeFile,
    pass: Pass,
    block_size: usize,
    epsilon: Option<f64>,
    grid: bool,
) -> Result<Compilation, CliError> {
    check_epsilon(pass, epsilon)?;
    if grid {
        if pass != Pass::MnLog || block_size != 2 {
            return Err(CliError::Validation("--grid needs --pass mn-log with --block-size 2".into()));
        }
        return Ok(qcasc_grid2d::compile_mn_2d(as_staircase(c)?)?);
    }
    Ok(match pass {
        Pass::MnLog => compile_mn_log_depth(as_staircase(c)?, block_size)?,
        Pass::ExactDiagonal => compile_exact_diagonal(&as_cascade(c))?,
        Pass::Select => compile_select_exact(&as_cascade(c))?,
        Pass::Load => compile_load_approx(&as_cascade(c), epsilon.expect("checked above"))?,
    })
}

fn compare(a: &Circuit, b: &Circuit, mode: Mode, trials: usize, seed: u64) -> Result<EquivalenceResult, CliError> {
    Ok(match mode {
        Mode::Exact => check_exact(a, b)?,
        Mode::Sampled => check_sampled(a, b, trials, seed)?,
    })
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Compiles, writes the requested artifacts and prints the report. With
/// `--mode`, the output is checked against the naive lowering and the
/// distance is recorded; exceeding the tolerance is an error after all
/// artifacts are written.
pub fn cmd_compile(args: &CompileArgs) -> Result<Compilation, CliError> {
    let input = source(&args.source)?;
    let mut out = compile_with(&input, args.pass, args.block_size, args.epsilon, args.grid)?;
    let mut failure = None;
    if let Some(mode) = args.mode {
        let r = compare(&naive(&input), &out.circuit, mode, args.trials, args.source.seed)?;
        let tol = args.tolerance.unwrap_or(match args.pass {
            Pass::Load => args.epsilon.expect("checked"),
            _ => 1e-7,
        });
        out.report.measured_error = Some(r.distance);
        if !r.within(tol) {
            failure = Some(format!("distance {:.3e}, ancilla residual {:.3e}, tolerance {tol:.1e}", r.distance, r.ancilla_residual));
        }
    }
    if let Some(path) = &args.out {
        let body = match args.format {
            OutputFormat::Json => circuit_to_json(&out.circuit),
            OutputFormat::Text => basis_to_text(&out.circuit)?,
        };
        write_atomic(path, &body)?;
    }
    if let Some(path) = &args.dump_parts {
        write_atomic(path, &circuit_to_json(&out.structured))?;
    }
    let report = pretty(&out.report);
    if let Some(path) = &args.report {
        write_atomic(path, &report)?;
    }
    print_stdout(&report)?;
    match failure {
        Some(msg) => Err(CliError::Tolerance(msg)),
        None => Ok(out),
    }
}

/// A circuit file, or a cascade file taken as its naive lowering.
pub fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = read(path)?;
    match circuit_from_json(&text) {
        Ok(c) => Ok(c),
        Err(circuit_err) => match CascadeFile::from_json(&text) {
            Ok(c) => Ok(naive(&c)),
            Err(_) => Err(CliError::Validation(format!("{}: {circuit_err}", path.display()))),
        },
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<EquivalenceResult, CliError> {
    if args.inputs.len() != 2 {
        return Err(CliError::Validation(format!("verify needs two inputs, got {}", args.inputs.len())));
    }
    let a = load_circuit(&args.inputs[0])?;
    let b = load_circuit(&args.inputs[1])?;
    let r = compare(&a, &b, args.mode, args.trials, args.seed)?;
    emit(args.out.as_deref(), &pretty(&r))?;
    if !r.within(args.tolerance) {
        return Err(CliError::Tolerance(format!(
            "distance {:.3e}, ancilla residual {:.3e}, tolerance {:.1e}",
            r.distance, r.ancilla_residual, args.tolerance
        )));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub k: usize,
    pub pass: String,
    pub depth_basis: usize,
    pub gate_count: usize,
    pub ancilla_count: usize,
}

impl BenchRow {
    const HEADER: &'static str = "m,k,pass,depth_basis,gate_count,ancilla_count";

    fn csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.m, self.k, self.pass, self.depth_basis, self.gate_count, self.ancilla_count)
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let ks: &[usize] = if args.pass == Pass::MnLog { &[1] } else { &args.k };
    let label = if args.grid { format!("{}-2d", args.pass) } else { args.pass.to_string() };
    let mut rows = Vec::new();
    for &k in ks {
        if k == 0 || k > MAX_GEN_K {
            return Err(CliError::Validation(format!("k must lie in 1..={MAX_GEN_K}, got {k}")));
        }
        for &m in &args.m {
            if m == 0 {
                return Err(CliError::Validation("m must be at least 1".into()));
            }
            let input = if args.pass == Pass::MnLog {
                CascadeFile::Mn(mn_cascade(m, args.family, args.seed))
            } else {
                CascadeFile::Cascade(control_cascade(k, m, args.family, args.seed))
            };
            let out = compile_with(&input, args.pass, args.block_size, args.epsilon, args.grid)?;
            rows.push(BenchRow {
                m,
                k,
                pass: label.clone(),
                depth_basis: out.report.depth_basis,
                gate_count: out.report.gate_count,
                ancilla_count: out.report.ancilla_count,
            });
        }
    }
    let mut csv = String::from(BenchRow::HEADER);
    for r in &rows {
        csv.push('\n');
        csv.push_str(&r.csv());
    }
    csv.push('\n');
    emit(args.out.as_deref(), &csv)?;
    Ok(rows)
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match &config.command {
        Command::Gen(a) => cmd_gen(a).map(drop),
        Command::Compile(a) => cmd_compile(a).map(drop),
        Command::Verify(a) => cmd_verify(a).map(drop),
        Command::Bench(a) => cmd_bench(a).map(drop),
    }
}
