//! Physical Hamiltonians and the `qesb` model-file format.
//!
//! ```text
//! # qesb v1
//! name shg
//! charge 1 2
//! term 1 0 1 1 0 0
//! term 2 0 0 0 1 1
//! term 1/2 0 2 0 0 1
//! term 1/2 0 0 2 1 0
//! ```
//!
//! `term <re> <im> <m1> <m2> <m3> <m4>` adds `(re + i·im)(a1†)^m1 (a1)^m2 (a2†)^m3 (a2)^m4`.
//! Coefficients are integer, decimal or `n/d` literals and are read exactly.

use std::fmt::Write as _;

use crate::algebra::{BosonMonomial, ConservedCharge, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::rational::{complex, format_rational, parse_rational, Coeff};

/// `ω1 a1†a1 + ω2 a2†a2 + κ (a1†)^n a2 + κ̄ a2† (a1)^n`.
pub fn build_nth_harmonic(
    omega1: Coeff,
    omega2: Coeff,
    kappa: Coeff,
    kappa_bar: Coeff,
    n: u32,
) -> Result<OperatorPolynomial> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(OperatorPolynomial::from_terms([
        BosonMonomial::new(omega1, 1, 1, 0, 0),
        BosonMonomial::new(omega2, 0, 0, 1, 1),
        BosonMonomial::new(kappa, n, 0, 0, 1),
        BosonMonomial::new(kappa_bar, 0, n, 1, 0),
    ]))
}

/// Second-harmonic generation: the `n = 2` member of [`build_nth_harmonic`].
pub fn build_shg(omega1: Coeff, omega2: Coeff, kappa: Coeff, kappa_bar: Coeff) -> OperatorPolynomial {
    build_nth_harmonic(omega1, omega2, kappa, kappa_bar, 2).expect("order 2 is valid")
}

/// The charge conserved by the `n`-th harmonic model.
pub fn nth_harmonic_charge(n: u32) -> Result<ConservedCharge> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    ConservedCharge::new(1, n as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub name: Option<String>,
    pub charge: ConservedCharge,
    pub hamiltonian: OperatorPolynomial,
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let mut name = None;
    let mut charge = None;
    let mut hamiltonian = OperatorPolynomial::zero();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let fields: Vec<&str> = rest.split_whitespace().collect();
        match directive {
            "name" => {
                if rest.trim().is_empty() {
                    return Err(parse_error(line_no, "name directive needs text"));
                }
                name = Some(rest.trim().to_string());
            }
            "charge" => {
                if charge.is_some() {
                    return Err(parse_error(line_no, "duplicate charge line"));
                }
                if fields.len() != 2 {
                    return Err(parse_error(
                        line_no,
                        format!("charge expects 2 fields, found {}", fields.len()),
                    ));
                }
                let parse = |f: &str| {
                    f.parse::<i64>()
                        .map_err(|_| parse_error(line_no, format!("charge weight `{f}` is not an integer")))
                };
                let (s, p) = (parse(fields[0])?, parse(fields[1])?);
                charge = Some(
                    ConservedCharge::new(s, p)
                        .map_err(|_| parse_error(line_no, "charge weights must be positive"))?,
                );
            }
            "term" => {
                if fields.len() != 6 {
                    return Err(parse_error(
                        line_no,
                        format!("term expects 6 fields, found {}", fields.len()),
                    ));
                }
                let number = |f: &str| {
                    parse_rational(f)
                        .ok_or_else(|| parse_error(line_no, format!("coefficient `{f}` is not numeric")))
                };
                let coeff = complex(number(fields[0])?, number(fields[1])?);
                let mut exps = [0u32; 4];
                for (slot, f) in exps.iter_mut().zip(&fields[2..]) {
                    *slot = match f.parse::<i64>() {
                        Ok(v) if v < 0 => {
                            return Err(parse_error(line_no, format!("negative exponent {v}")))
                        }
                        Ok(v) => u32::try_from(v)
                            .map_err(|_| parse_error(line_no, format!("exponent {v} too large")))?,
                        Err(_) => {
                            return Err(parse_error(line_no, format!("exponent `{f}` is not an integer")))
                        }
                    };
                }
                hamiltonian.add_term(exps.into(), coeff);
            }
            other => return Err(parse_error(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let charge = charge.ok_or_else(|| parse_error(last_line.max(1), "missing charge line"))?;
    Ok(ModelFile {
        name,
        charge,
        hamiltonian,
    })
}

/// Canonical serialization: header, optional name, charge, then non-zero
/// terms in ascending `(m1, m2, m3, m4)` order.
pub fn write_model_file(model: &ModelFile) -> String {
    let mut out = String::from("# qesb v1\n");
    if let Some(name) = &model.name {
        writeln!(out, "name {name}").unwrap();
    }
    writeln!(out, "charge {} {}", model.charge.s(), model.charge.p()).unwrap();
    for (e, c) in model.hamiltonian.terms() {
        writeln!(
            out,
            "term {} {} {} {} {} {}",
            format_rational(&c.re),
            format_rational(&c.im),
            e.m1,
            e.m2,
            e.m3,
            e.m4
        )
        .unwrap();
    }
    out
}
