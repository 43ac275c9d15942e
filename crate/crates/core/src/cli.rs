//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 non-conserving, 4 numerical
//! or tolerance failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use num::rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{commutator, ConservedCharge};
use crate::catalog::{parse_model_file, ModelFile};
use crate::error::Error;
use crate::linalg::max_sorted_deviation;
use crate::oracle::{block_spectrum_with, enumerate_block, SolveOptions, SpectrumReport};
use crate::poly::{characteristic_polynomial, Poly};
use crate::qes::{energy_polynomial_table, literal_shift, qes_spectrum_in_mode, reduced_block_matrix, EnergyMode};
use crate::rational::{complex, parse_rational, rational_to_f64, to_complex64, Coeff, DisplayCoeff};
use crate::sextic::{
    compare_with_fd, gauge_identity_residual, gauge_superpotential, sextic_potential, GaugeReport, ShgParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NON_CONSERVING: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qesboson", version, about = "Exact block spectra of two-mode boson Hamiltonians")]
pub struct Cli {
    #[arg(long, value_enum, global = true)]
    pub output: Option<Output>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Reduced,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Corrected,
    PaperLiteral,
}

impl From<ModeArg> for EnergyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Corrected => EnergyMode::Corrected,
            ModeArg::PaperLiteral => EnergyMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Conservation and hermiticity report.
    Check { model: PathBuf },
    /// Spectrum of one block.
    Spectrum {
        model: PathBuf,
        #[arg(long)]
        kappa: u64,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        #[arg(long, value_enum, default_value = "corrected")]
        mode: ModeArg,
    },
    /// Oracle against reduced spectra for every block up to a charge.
    Scan {
        model: PathBuf,
        #[arg(long)]
        kappa_max: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tol: f64,
        #[arg(long, value_enum, default_value = "corrected")]
        mode: ModeArg,
    },
    /// Energy polynomials of one block.
    Polys {
        model: PathBuf,
        #[arg(long)]
        kappa: u64,
        #[arg(long, value_enum, default_value = "corrected")]
        mode: ModeArg,
    },
    /// Superpotential, sextic potential and gauge checks.
    Sextic {
        #[arg(long, value_parser = exact)]
        w1: BigRational,
        #[arg(long, value_parser = exact)]
        w2: BigRational,
        #[arg(long, value_parser = exact)]
        kre: BigRational,
        #[arg(long, value_parser = exact, default_value = "0")]
        kim: BigRational,
        #[arg(long, value_parser = exact)]
        kbre: BigRational,
        #[arg(long, value_parser = exact, default_value = "0")]
        kbim: BigRational,
        #[arg(long)]
        k: u64,
        /// Compare algebraic levels with a finite-difference spectrum.
        #[arg(long)]
        fd: bool,
        #[arg(long, default_value_t = 6.0, value_parser = positive)]
        half_width: f64,
        #[arg(long, default_value_t = 4000)]
        grid: usize,
    },
}

fn exact(text: &str) -> Result<BigRational, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a number"))
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{text}` is not a positive number")),
    }
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::NonConservingHamiltonian { .. } => EXIT_NON_CONSERVING,
            Error::InvalidParameter(_) | Error::InvalidGrid(_) | Error::InvalidOrder(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut text = String::new();
    let result = execute(&cli, &mut text);
    let _ = out.write_all(text.as_bytes());
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { model } => check(&load(model)?, cli.output.unwrap_or(Output::Text), out),
        Command::Spectrum {
            model,
            kappa,
            method,
            tol,
            mode,
        } => spectrum(
            &load(model)?,
            *kappa,
            *method,
            *tol,
            (*mode).into(),
            cli.output.unwrap_or(Output::Json),
            out,
        ),
        Command::Scan {
            model,
            kappa_max,
            tol,
            mode,
        } => {
            require_output(cli.output, &[Output::Csv])?;
            scan(&load(model)?, *kappa_max, *tol, (*mode).into(), out)
        }
        Command::Polys { model, kappa, mode } => {
            polys(&load(model)?, *kappa, (*mode).into(), cli.output.unwrap_or(Output::Text), out)
        }
        Command::Sextic {
            w1,
            w2,
            kre,
            kim,
            kbre,
            kbim,
            k,
            fd,
            half_width,
            grid,
        } => {
            let params = ShgParams::new(
                complex(w1.clone(), BigRational::from_integer(0.into())),
                complex(w2.clone(), BigRational::from_integer(0.into())),
                complex(kre.clone(), kim.clone()),
                complex(kbre.clone(), kbim.clone()),
            );
            let fd = fd.then_some((*half_width, *grid));
            sextic(&params, *k, fd, cli.output.unwrap_or(Output::Text), out)
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn require_output(requested: Option<Output>, allowed: &[Output]) -> Result<(), Failure> {
    match requested {
        Some(o) if !allowed.contains(&o) => Err(usage(format!("output format {o:?} is not available here"))),
        _ => Ok(()),
    }
}

fn load(path: &PathBuf) -> Result<ModelFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_model_file(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

/// Negative zero prints as `0`.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn pairs(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| json!([clean(z.re), clean(z.im)])).collect())
}

fn exact_json(c: &Coeff) -> Value {
    json!({
        "exact": DisplayCoeff(c).to_string(),
        "value": [clean(rational_to_f64(&c.re)), clean(rational_to_f64(&c.im))],
    })
}

fn write_json(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
    out.push('\n');
}

fn check(model: &ModelFile, output: Output, out: &mut String) -> Result<(), Failure> {
    require_output(Some(output), &[Output::Text, Output::Json])?;
    let h = &model.hamiltonian;
    let charge = model.charge;
    let bracket = commutator(&charge.operator(), h);
    let conserves = bracket.is_zero();
    let hermitian = h.is_hermitian();
    let all = ConservedCharge::all_conserving(h, 12);
    let yes = |b: bool| if b { "yes" } else { "no" };
    match output {
        Output::Json => write_json(
            out,
            &json!({
                "name": model.name,
                "charge": [charge.s(), charge.p()],
                "conserves": conserves,
                "hermitian": hermitian,
                "terms": h.len(),
                "conserving_charges": all.iter().map(|c| [c.s(), c.p()]).collect::<Vec<_>>(),
                "commutator": (!conserves).then(|| bracket.to_string()),
            }),
        ),
        _ => {
            writeln!(
                out,
                "conserves: {} ({},{}); hermitian: {}",
                yes(conserves),
                charge.s(),
                charge.p(),
                yes(hermitian)
            )
            .unwrap();
            let list: Vec<String> = all.iter().map(|c| format!("({},{})", c.s(), c.p())).collect();
            writeln!(out, "conserving charges (s,p <= 12): {}", list.join(" ")).unwrap();
            if !conserves {
                writeln!(out, "[K,H] = {bracket}").unwrap();
            }
        }
    }
    if conserves {
        Ok(())
    } else {
        Err(Error::NonConservingHamiltonian {
            s: charge.s(),
            p: charge.p(),
        }
        .into())
    }
}

struct BlockComparison {
    kappa: u64,
    oracle: Option<SpectrumReport>,
    reduced: Option<SpectrumReport>,
}

impl BlockComparison {
    fn deviation(&self) -> Option<f64> {
        match (&self.oracle, &self.reduced) {
            (Some(o), Some(r)) => Some(max_sorted_deviation(&o.eigenvalues, &r.eigenvalues)),
            _ => None,
        }
    }

    fn values(&self) -> &[Complex64] {
        self.oracle.as_ref().or(self.reduced.as_ref()).map(|r| r.eigenvalues.as_slice()).unwrap_or(&[])
    }
}

fn compare_block(
    model: &ModelFile,
    kappa: u64,
    method: Method,
    tol: f64,
    mode: EnergyMode,
) -> Result<BlockComparison, Failure> {
    let options = SolveOptions { residual_tol: tol };
    let h = &model.hamiltonian;
    let oracle = match method {
        Method::Reduced => None,
        _ => Some(block_spectrum_with(h, model.charge, kappa, &options)?),
    };
    let reduced = match method {
        Method::Oracle => None,
        _ => Some(qes_spectrum_in_mode(h, model.charge, kappa, mode, &options)?),
    };
    Ok(BlockComparison { kappa, oracle, reduced })
}

fn tolerance_failure(kappa: u64, deviation: f64, tol: f64) -> Failure {
    Failure {
        code: EXIT_NUMERICAL,
        message: format!("block {kappa}: oracle and reduced spectra differ by {deviation:e} (> {tol:e})"),
    }
}

fn spectrum(
    model: &ModelFile,
    kappa: u64,
    method: Method,
    tol: f64,
    mode: EnergyMode,
    output: Output,
    out: &mut String,
) -> Result<(), Failure> {
    let cmp = compare_block(model, kappa, method, tol, mode)?;
    let deviation = cmp.deviation();
    let basis = enumerate_block(model.charge, kappa);
    match output {
        Output::Json => write_json(
            out,
            &json!({
                "kappa": kappa,
                "dimension": basis.len(),
                "basis": basis.iter().map(|b| [b.n1, b.n2]).collect::<Vec<_>>(),
                "mode": mode,
                "oracle": cmp.oracle.as_ref().map(|r| pairs(&r.eigenvalues)),
                "reduced": cmp.reduced.as_ref().map(|r| pairs(&r.eigenvalues)),
                "max_deviation": deviation,
                "residuals": {
                    "oracle": cmp.oracle.as_ref().map(|r| r.max_residual),
                    "reduced": cmp.reduced.as_ref().map(|r| r.max_residual),
                },
            }),
        ),
        Output::Csv => write_rows(out, std::slice::from_ref(&cmp)),
        Output::Text => {
            writeln!(out, "kappa {kappa}, dimension {}", basis.len()).unwrap();
            for (label, report) in [("oracle", &cmp.oracle), ("reduced", &cmp.reduced)] {
                if let Some(r) = report {
                    let list: Vec<String> = r.eigenvalues.iter().map(format_complex).collect();
                    writeln!(out, "{label}: {}", list.join(", ")).unwrap();
                }
            }
            if let Some(d) = deviation {
                writeln!(out, "max deviation: {d:e}").unwrap();
            }
        }
    }
    match deviation {
        Some(d) if d > tol => Err(tolerance_failure(kappa, d, tol)),
        _ => Ok(()),
    }
}

fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", clean(z.re))
    } else {
        format!("{}{:+}i", clean(z.re), z.im)
    }
}

fn write_rows(out: &mut String, blocks: &[BlockComparison]) {
    out.push_str("kappa,dim,index,eig_re,eig_im,deviation\n");
    for b in blocks {
        let values = b.values();
        let other = b.reduced.as_ref().filter(|_| b.oracle.is_some()).map(|r| &r.eigenvalues);
        for (i, z) in values.iter().enumerate() {
            let dev = other.and_then(|r| r.get(i)).map(|w| (z - w).norm());
            let dev = dev.map(|d| format!("{:e}", clean(d))).unwrap_or_default();
            writeln!(out, "{},{},{},{},{},{}", b.kappa, values.len(), i, clean(z.re), clean(z.im), dev).unwrap();
        }
    }
}

fn scan(model: &ModelFile, kappa_max: u64, tol: f64, mode: EnergyMode, out: &mut String) -> Result<(), Failure> {
    let blocks: Vec<BlockComparison> = (0..=kappa_max)
        .into_par_iter()
        .map(|kappa| compare_block(model, kappa, Method::Both, tol, mode))
        .collect::<Result<_, _>>()?;
    write_rows(out, &blocks);
    for b in &blocks {
        if let Some(d) = b.deviation().filter(|d| *d > tol) {
            return Err(tolerance_failure(b.kappa, d, tol));
        }
    }
    Ok(())
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(DisplayCoeff(c).to_string())).collect())
}

fn polys(model: &ModelFile, kappa: u64, mode: EnergyMode, output: Output, out: &mut String) -> Result<(), Failure> {
    require_output(Some(output), &[Output::Text, Output::Json])?;
    let h = &model.hamiltonian;
    let (source, table_polys, termination, degree) = match energy_polynomial_table(h, model.charge, kappa, mode) {
        Ok(t) => ("recurrence", t.polys, t.termination, t.termination_degree),
        Err(Error::BandStructureUnsupported(_)) => {
            let block = reduced_block_matrix(h, model.charge, kappa)?;
            let shift = literal_shift(h, mode);
            let mut m = block.exact.clone();
            for i in 0..m.nrows() {
                m[(i, i)] = &m[(i, i)] + &shift;
            }
            ("characteristic-polynomial", Vec::new(), characteristic_polynomial(&m), block.dimension())
        }
        Err(e) => return Err(e.into()),
    };
    let roots = termination.roots()?;
    match output {
        Output::Json => write_json(
            out,
            &json!({
                "kappa": kappa,
                "mode": mode,
                "source": source,
                "termination_degree": degree,
                "polys": table_polys.iter().map(poly_json).collect::<Vec<_>>(),
                "termination": poly_json(&termination),
                "roots": pairs(&roots),
            }),
        ),
        _ => {
            writeln!(out, "kappa {kappa}, mode {mode}, termination degree {degree} ({source})").unwrap();
            for (m, p) in table_polys.iter().enumerate() {
                writeln!(out, "P_{m}(E) = {p}").unwrap();
            }
            writeln!(out, "termination: {termination} = 0").unwrap();
            let list: Vec<String> = roots.iter().map(format_complex).collect();
            writeln!(out, "roots: {}", list.join(", ")).unwrap();
        }
    }
    Ok(())
}

fn gauge_test_polys() -> Vec<Poly> {
    let r = |n: i64, d: i64| complex(BigRational::new(n.into(), d.into()), BigRational::from_integer(0.into()));
    vec![
        Poly::one(),
        Poly::x(),
        Poly::new(vec![r(1, 1), r(-2, 3), r(1, 5)]),
        Poly::new(vec![r(-1, 2), r(0, 1), r(3, 4), r(1, 7)]),
    ]
}

fn gauge_points() -> Vec<f64> {
    (0..16).map(|i| 0.5 + 1.5 * i as f64 / 15.0).collect()
}

fn sextic(params: &ShgParams, k: u64, fd: Option<(f64, usize)>, output: Output, out: &mut String) -> Result<(), Failure> {
    require_output(Some(output), &[Output::Text, Output::Json])?;
    let w = gauge_superpotential(params, k);
    let v = sextic_potential(params, k);
    let gauge = gauge_identity_residual(params, k, &gauge_test_polys(), &gauge_points());
    let mismatch = match &gauge {
        Err(Error::ConventionMismatch { .. }) => Some(gauge.clone().unwrap_err()),
        _ => None,
    };
    let comparison = fd.map(|(half_width, n)| compare_with_fd(params, k, half_width, n)).transpose()?;
    match output {
        Output::Json => {
            let gauge_json = match &gauge {
                Ok(r) => gauge_report_json(r),
                Err(Error::ConventionMismatch { best, tried }) => json!({
                    "status": "mismatch",
                    "best_residual": best,
                    "tried": tried.iter().map(|(c, r)| json!({"convention": c, "residual": r})).collect::<Vec<_>>(),
                }),
                Err(e) => json!({"status": "skipped", "reason": e.to_string()}),
            };
            write_json(
                out,
                &json!({
                    "k": k,
                    "superpotential": {
                        "inverse": exact_json(&w.inverse),
                        "linear": exact_json(&w.linear),
                        "cubic": exact_json(&w.cubic),
                    },
                    "potential": {
                        "c0": exact_json(&v.c0),
                        "c2": exact_json(&v.c2),
                        "c4": exact_json(&v.c4),
                        "c6": exact_json(&v.c6),
                    },
                    "gauge": gauge_json,
                    "fd": comparison,
                }),
            );
        }
        _ => {
            writeln!(
                out,
                "W(y) = {}/y + {}·y + {}·y^3",
                DisplayCoeff(&w.inverse),
                DisplayCoeff(&w.linear),
                DisplayCoeff(&w.cubic)
            )
            .unwrap();
            let floats: Vec<String> = v.coefficients().iter().map(|c| format_complex(&to_complex64(c))).collect();
            writeln!(
                out,
                "V(y) = {} + {}·y^2 + {}·y^4 + {}·y^6",
                DisplayCoeff(&v.c0),
                DisplayCoeff(&v.c2),
                DisplayCoeff(&v.c4),
                DisplayCoeff(&v.c6)
            )
            .unwrap();
            writeln!(out, "c = ({})", floats.join(", ")).unwrap();
            match &gauge {
                Ok(r) => writeln!(
                    out,
                    "gauge identity: residual {:e} with {}; constant shift {}",
                    r.residual,
                    r.convention,
                    format_complex(&r.shift)
                )
                .unwrap(),
                Err(Error::ConventionMismatch { best, tried }) => {
                    writeln!(out, "gauge identity: no convention fits; best residual {best:e}").unwrap();
                    for (c, r) in tried {
                        writeln!(out, "  {c}: {r:e}").unwrap();
                    }
                }
                Err(e) => writeln!(out, "gauge identity: skipped ({e})").unwrap(),
            }
            if let Some(c) = &comparison {
                let join = |xs: &[f64]| xs.iter().map(|x| format!("{x:.7}")).collect::<Vec<_>>().join(", ");
                writeln!(out, "qes levels: {}", join(&c.qes)).unwrap();
                writeln!(out, "fd levels: {}", join(&c.fd)).unwrap();
                writeln!(out, "matched fd levels: {}", join(&c.fd_match)).unwrap();
                writeln!(out, "constant shift: {:.7} (spread {:e})", c.shift, c.spread).unwrap();
            }
        }
    }
    match mismatch {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn gauge_report_json(r: &GaugeReport) -> Value {
    json!({
        "status": "ok",
        "residual": r.residual,
        "convention": r.convention,
        "convention_text": r.convention.to_string(),
        "shift": [clean(r.shift.re), clean(r.shift.im)],
        "tried": r.tried.iter().map(|(c, res)| json!({"convention": c.to_string(), "residual": res})).collect::<Vec<_>>(),
    })
}
