//! Command dispatch and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Map, Value as Json};
use valbasis_core::kahler::{analyze_kahler, KahlerAnalysis};
use valbasis_core::stdbasis::{analyze_ideal, analyze_ring, BasisSet, IdealAnalysis, RingAnalysis, RingOptions};
use valbasis_core::values::{certificate_value, CertificateTerm};
use valbasis_core::{CurveModel, Membership, Value, ValueVector};

use crate::diagram::Diagram;
use crate::error::CliError;
use crate::format::CurveFile;

/// Which value set `member` queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// The value semiring of the local ring.
    Ring,
    /// The value semimodule of the fractional ideal in the file.
    Ideal,
    /// The value semimodule of the Kähler differentials.
    Kahler,
}

#[derive(Clone, Debug)]
pub enum Command {
    RingBasis,
    IdealBasis,
    Kahler,
    Member { gamma: ValueVector, target: Target },
    Diagram { corner: Option<(i64, i64)> },
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub json: bool,
    pub precision: Option<i64>,
    pub rho: Option<ValueVector>,
    pub svg: Option<PathBuf>,
}

pub fn value_json(v: &ValueVector) -> Json {
    Json::Array(
        v.iter()
            .map(|x| match x {
                Value::Finite(k) => json!(k),
                Value::Infinite => json!("inf"),
            })
            .collect(),
    )
}

fn values_json(vs: &[ValueVector]) -> Json {
    Json::Array(vs.iter().map(value_json).collect())
}

fn basis_json(b: &BasisSet) -> Json {
    Json::Array(
        b.iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "value": value_json(e.element.value()),
                    "expression": e.element.provenance().to_string(),
                })
            })
            .collect(),
    )
}

fn basis_text(out: &mut String, title: &str, b: &BasisSet) {
    writeln!(out, "{} ({} elements):", title, b.len()).unwrap();
    let width = b.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in b.iter() {
        writeln!(out, "  {:width$}  {}", e.name, e.element.value(), width = width).unwrap();
    }
}

fn values_text(out: &mut String, title: &str, vs: &[ValueVector]) {
    writeln!(out, "{} ({}):", title, vs.len()).unwrap();
    for v in vs {
        writeln!(out, "  {}", v).unwrap();
    }
}

fn list(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn ring_options(file: &CurveFile, opts: &Options, with_rho: bool) -> Result<RingOptions, CliError> {
    let rho = if with_rho {
        opts.rho.clone().or_else(|| file.rho.clone())
    } else {
        None
    };
    if let Some(rho) = &rho {
        if rho.len() != file.branches.len() {
            return Err(CliError::Semantic(format!(
                "rho has {} entries, expected {}",
                rho.len(),
                file.branches.len()
            )));
        }
    }
    Ok(RingOptions {
        precision: opts.precision.or(file.precision),
        rho,
        ..RingOptions::default()
    })
}

fn ring(curve: &CurveModel, file: &CurveFile, opts: &Options, with_rho: bool) -> Result<RingAnalysis, CliError> {
    Ok(analyze_ring(curve, &ring_options(file, opts, with_rho)?)?)
}

fn ideal(curve: &CurveModel, file: &CurveFile, opts: &Options) -> Result<(RingAnalysis, IdealAnalysis), CliError> {
    if file.ideal.is_empty() {
        return Err(CliError::Semantic("the file declares no `ideal` generators".into()));
    }
    let ra = ring(curve, file, opts, false)?;
    let ia = analyze_ideal(curve, &ra, &file.ideal_series()?, &ring_options(file, opts, true)?)?;
    Ok((ra, ia))
}

fn kahler(curve: &CurveModel, file: &CurveFile, opts: &Options) -> Result<(RingAnalysis, KahlerAnalysis), CliError> {
    if curve.equations().is_none() {
        return Err(CliError::Semantic("`kahler` needs one `equation` per branch".into()));
    }
    let ra = ring(curve, file, opts, false)?;
    let ka = analyze_kahler(curve, &ra)?;
    Ok((ra, ka))
}

/// Runs `command` on `file`, returning the report.
pub fn run(command: &Command, file: &CurveFile, opts: &Options) -> Result<String, CliError> {
    let curve = file.model()?;
    match command {
        Command::RingBasis => Ok(ring_report(&ring(&curve, file, opts, true)?, opts.json)),
        Command::IdealBasis => {
            let (_, ia) = ideal(&curve, file, opts)?;
            Ok(ideal_report(&ia, opts.json))
        }
        Command::Kahler => {
            let (_, ka) = kahler(&curve, file, opts)?;
            Ok(kahler_report(&ka, opts.json))
        }
        Command::Member { gamma, target } => {
            if gamma.len() != curve.branch_count() {
                return Err(CliError::Semantic(format!(
                    "{} has {} entries, the curve has {} branches",
                    gamma,
                    gamma.len(),
                    curve.branch_count()
                )));
            }
            let (membership, generators, module) = match target {
                Target::Ring => {
                    let ra = ring(&curve, file, opts, false)?;
                    (ra.semiring.member(gamma), ra.generators.clone(), Vec::new())
                }
                Target::Ideal => {
                    let (ra, ia) = ideal(&curve, file, opts)?;
                    (ia.presentation.member(gamma), ra.generators.clone(), ia.generators.clone())
                }
                Target::Kahler => {
                    let (ra, ka) = kahler(&curve, file, opts)?;
                    (ka.presentation.member(gamma), ra.generators.clone(), ka.generators.clone())
                }
            };
            if let Membership::Member(terms) = &membership {
                let value = certificate_value(gamma.len(), terms);
                if value != *gamma {
                    return Err(CliError::Core(valbasis_core::Error::HypothesisViolation(format!(
                        "certificate evaluates to {} instead of {}",
                        value, gamma
                    ))));
                }
            }
            Ok(member_report(gamma, &membership, &generators, &module, opts.json))
        }
        Command::Diagram { corner } => {
            if curve.branch_count() != 2 {
                return Err(valbasis_core::Error::UnsupportedRank(curve.branch_count()).into());
            }
            let ra = ring(&curve, file, opts, false)?;
            let corner = match corner {
                Some(c) => *c,
                None => (
                    ra.conductor.get(0).finite().unwrap_or(0),
                    ra.conductor.get(1).finite().unwrap_or(0),
                ),
            };
            let d = Diagram::new(&ra.semiring, corner)?;
            if let Some(path) = &opts.svg {
                std::fs::write(path, d.svg()).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            Ok(if opts.json { pretty(d.json()) } else { d.text() })
        }
    }
}

fn pretty(v: Json) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json serialization");
    s.push('\n');
    s
}

pub fn ring_report(ra: &RingAnalysis, as_json: bool) -> String {
    if as_json {
        let branches: Vec<Json> = ra
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| {
                json!({
                    "index": i + 1,
                    "semigroup": b.semigroup.minimal_generators(),
                    "semigroup_conductor": b.semigroup.conductor(),
                    "vanishing_values": b.vanishing_values,
                    "vanishing_conductor": b.delta,
                })
            })
            .collect();
        return pretty(json!({
            "command": "ring-basis",
            "cut": ra.cut.as_slice(),
            "branches": branches,
            "sigma": value_json(&ra.sigma),
            "basis": basis_json(&ra.basis),
            "generators": values_json(&ra.generators),
            "conductor": value_json(&ra.conductor),
        }));
    }
    let mut out = String::new();
    writeln!(out, "working precision: {}", list(ra.cut.as_slice())).unwrap();
    for (i, b) in ra.branches.iter().enumerate() {
        writeln!(
            out,
            "branch {}: semigroup <{}> with conductor {}; vanishing values <{}> with conductor {}",
            i + 1,
            list(&b.semigroup.minimal_generators()),
            b.semigroup.conductor(),
            list(&b.vanishing_values),
            b.delta
        )
        .unwrap();
    }
    writeln!(out, "sigma: {}", ra.sigma).unwrap();
    basis_text(&mut out, "minimal standard basis", &ra.basis);
    values_text(&mut out, "minimal generators of the value semiring", &ra.generators);
    writeln!(out, "conductor: {}", ra.conductor).unwrap();
    out
}

pub fn ideal_report(ia: &IdealAnalysis, as_json: bool) -> String {
    if as_json {
        return pretty(json!({
            "command": "ideal-basis",
            "cut": ia.cut.as_slice(),
            "kappa": value_json(&ia.kappa),
            "rho": value_json(&ia.rho),
            "basis": basis_json(&ia.basis),
            "generators": values_json(&ia.generators),
            "conductor": value_json(&ia.conductor),
        }));
    }
    let mut out = String::new();
    writeln!(out, "working precision: {}", list(ia.cut.as_slice())).unwrap();
    writeln!(out, "kappa: {}", ia.kappa).unwrap();
    writeln!(out, "bound: {}", ia.rho).unwrap();
    basis_text(&mut out, "minimal standard basis", &ia.basis);
    values_text(&mut out, "minimal generators of the value semimodule", &ia.generators);
    writeln!(out, "conductor: {}", ia.conductor).unwrap();
    out
}

pub fn kahler_report(ka: &KahlerAnalysis, as_json: bool) -> String {
    if as_json {
        return pretty(json!({
            "command": "kahler",
            "basis": basis_json(&ka.basis),
            "generators": values_json(&ka.generators),
            "conductor": value_json(&ka.conductor),
        }));
    }
    let mut out = String::new();
    basis_text(&mut out, "minimal standard basis of the differentials", &ka.basis);
    values_text(&mut out, "minimal generators of the differential values", &ka.generators);
    writeln!(out, "conductor: {}", ka.conductor).unwrap();
    out
}

fn term_text(t: &CertificateTerm, generators: &[ValueVector], module: &[ValueVector]) -> String {
    let mut factors: Vec<String> = Vec::new();
    if let Some(j) = t.module_generator {
        factors.push(module[j].to_string());
    }
    for (g, &a) in generators.iter().zip(&t.exponents) {
        match a {
            0 => {}
            1 => factors.push(g.to_string()),
            _ => factors.push(format!("{}^{}", g, a)),
        }
    }
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join(" * ")
    }
}

pub fn member_report(
    gamma: &ValueVector,
    membership: &Membership,
    generators: &[ValueVector],
    module: &[ValueVector],
    as_json: bool,
) -> String {
    if as_json {
        let mut m = Map::new();
        m.insert("command".into(), json!("member"));
        m.insert("query".into(), value_json(gamma));
        m.insert("member".into(), json!(membership.is_member()));
        match membership {
            Membership::Member(terms) => {
                let cert: Vec<Json> = terms
                    .iter()
                    .map(|t| {
                        json!({
                            "module_generator": t.module_generator,
                            "exponents": t.exponents,
                            "value": value_json(&t.value),
                        })
                    })
                    .collect();
                m.insert("certificate".into(), Json::Array(cert));
            }
            Membership::NotMember { coordinate } => {
                m.insert("coordinate".into(), json!(coordinate + 1));
            }
        }
        m.insert("generators".into(), values_json(generators));
        if !module.is_empty() {
            m.insert("module_generators".into(), values_json(module));
        }
        return pretty(Json::Object(m));
    }
    let mut out = String::new();
    match membership {
        Membership::Member(terms) => {
            writeln!(out, "{} is a member", gamma).unwrap();
            writeln!(out, "certificate: {} is the minimum of", gamma).unwrap();
            for t in terms {
                writeln!(out, "  {} = {}", t.value, term_text(t, generators, module)).unwrap();
            }
        }
        Membership::NotMember { coordinate } => {
            writeln!(
                out,
                "{} is not a member: no element dominating it attains coordinate {}",
                gamma,
                coordinate + 1
            )
            .unwrap();
        }
    }
    out
}
