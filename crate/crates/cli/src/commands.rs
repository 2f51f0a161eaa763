use std::path::{Path, PathBuf};

use doc_ergodic::brickwork::{correlations, ChainConfig};
use doc_ergodic::doc::{is_cptp, ldoi_matrix, DocChannel, TripleABC};
use doc_ergodic::gates::{assemble, family_instance, is_dual_unitary_ldoi, is_unitary_ldoi, shift_gate, Family};
use doc_ergodic::lambda::{classify_circuit, cycle_eigenvalue_products, CircuitVerdict};
use doc_ergodic::linalg::{BipartiteMatrix, ComplexMatrix, Tolerances, C64};
use doc_ergodic::sampling;
use doc_ergodic::stochastic::{classify_stochastic, StochasticMatrix};
use doc_ergodic::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::manifest::Inputs;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Core(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Core(e) => match e {
                Error::Parse(_) | Error::InvalidMatrix(_) => 1,
                Error::Precondition(_) | Error::NotStochastic(_) | Error::Dimension(_) => 2,
                Error::Size(_) => 3,
                Error::NoConvergence(_) => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(s) => f.write_str(s),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Rendered command output.
pub enum Output {
    Json(String),
    Csv(String),
}

impl Output {
    fn json<T: Serialize>(v: &T) -> Self {
        let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
        s.push('\n');
        Output::Json(s)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(inputs: &mut Inputs, path: &Path) -> Outcome<T> {
    let bytes = inputs.read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn classify_stochastic_cmd(inputs: &mut Inputs, path: &Path, tol: &Tolerances) -> Outcome<Output> {
    let m: ComplexMatrix = read_json(inputs, path)?;
    let a = StochasticMatrix::new(m, tol.zero)?;
    Ok(Output::json(&classify_stochastic(&a, tol)?))
}

pub fn classify_doc_cmd(inputs: &mut Inputs, path: &Path, allow_map: bool, tol: &Tolerances) -> Outcome<Output> {
    let t: TripleABC = read_json(inputs, path)?;
    let report = match DocChannel::channel(t.clone()) {
        Ok(ch) => ch.classify(tol)?,
        Err(e) if allow_map => {
            eprintln!("note: {e}; classifying the map from its spectrum");
            DocChannel::map(t).classify_map(tol)?
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output::json(&report))
}

#[derive(Serialize)]
struct GateCheck {
    #[serde(flatten)]
    gate: doc_ergodic::gates::LdoiGate,
    structural: Structural,
    cptp_choi: bool,
}

/// Division-free LDOI conditions, reported next to the direct certificates.
#[derive(Serialize)]
struct Structural {
    unitary: bool,
    dual_unitary: bool,
}

pub fn check_gate_cmd(inputs: &mut Inputs, path: &Path) -> Outcome<Output> {
    let t: TripleABC = read_json(inputs, path)?;
    let structural = Structural { unitary: is_unitary_ldoi(&t), dual_unitary: is_dual_unitary_ldoi(&t) };
    let cptp_choi = is_cptp(&t).cptp;
    Ok(Output::json(&GateCheck { gate: assemble(&t), structural, cptp_choi }))
}

#[derive(Serialize)]
struct LambdaOut {
    shifted: bool,
    verdict: CircuitVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle_products: Option<Vec<C64>>,
}

pub fn lambda_cmd(inputs: &mut Inputs, path: &Path, shift: bool, tol: &Tolerances) -> Outcome<Output> {
    let t: TripleABC = read_json(inputs, path)?;
    let u = if shift { shift_gate(&t)? } else { ldoi_matrix(&t) };
    let verdict = classify_circuit(&u, tol)?;
    let cycle_products = shift.then(|| cycle_eigenvalue_products(&t));
    Ok(Output::json(&LambdaOut { shifted: shift, verdict, cycle_products }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GateSpec {
    Triple(TripleABC),
    Matrix(BipartiteMatrix),
}

/// Chain configuration with the gate given inline, as a triple, or by file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    d: usize,
    half_length: usize,
    t_max: usize,
    #[serde(default)]
    gate: Option<GateSpec>,
    #[serde(default)]
    gate_file: Option<PathBuf>,
    #[serde(default)]
    shift: bool,
    #[serde(default)]
    a: Option<ComplexMatrix>,
    #[serde(default)]
    b: Option<ComplexMatrix>,
    #[serde(default)]
    origin: i64,
}

/// Hermitian traceless observable drawn from `seed`.
fn random_traceless(seed: u64, d: usize) -> ComplexMatrix {
    let mut r = sampling::rng(seed);
    let g = sampling::random_matrix(&mut r, d);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    let shift = ComplexMatrix::identity(d).scale(h.trace() / d as f64);
    &h - &shift
}

pub fn simulate_cmd(inputs: &mut Inputs, path: &Path, seed: u64, csv: bool) -> Outcome<Output> {
    let cfg: SimulateConfig = read_json(inputs, path)?;
    let spec = match (cfg.gate, &cfg.gate_file) {
        (Some(g), None) => g,
        (None, Some(f)) => {
            let f = path.parent().map(|p| p.join(f)).unwrap_or_else(|| f.clone());
            read_json(inputs, &f)?
        }
        _ => return Err(Failure::Input("config needs exactly one of \"gate\" and \"gate_file\"".into())),
    };
    let gate = match (spec, cfg.shift) {
        (GateSpec::Triple(t), true) => shift_gate(&t)?,
        (GateSpec::Triple(t), false) => ldoi_matrix(&t),
        (GateSpec::Matrix(_), true) => return Err(Failure::Input("\"shift\" needs the gate as a triple".into())),
        (GateSpec::Matrix(m), false) => m,
    };
    let chain = ChainConfig { d: cfg.d, half_length: cfg.half_length, t_max: cfg.t_max, gate };
    chain.validate()?;
    let a = cfg.a.unwrap_or_else(|| random_traceless(seed, cfg.d));
    let b = cfg.b.unwrap_or_else(|| random_traceless(seed.wrapping_add(1), cfg.d));
    let table = correlations(&chain, &a, &b, cfg.origin)?;
    Ok(if csv { Output::Csv(table.to_csv()) } else { Output::json(&table) })
}

#[derive(Debug, Clone, Serialize)]
struct SeedRow {
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdicts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Verdicts {
    non_interacting: bool,
    ergodic: bool,
    mixing: bool,
    irreducible: bool,
    primitive: bool,
    bernoulli: bool,
    constant_modes: usize,
    nondecaying_modes: usize,
}

impl Verdicts {
    const NAMES: [&'static str; 6] = ["non_interacting", "ergodic", "mixing", "irreducible", "primitive", "bernoulli"];

    fn flags(&self) -> [bool; 6] {
        [self.non_interacting, self.ergodic, self.mixing, self.irreducible, self.primitive, self.bernoulli]
    }
}

#[derive(Serialize)]
struct SweepReport {
    family: Family,
    d: usize,
    first_seed: u64,
    seeds: u64,
    counts: std::collections::BTreeMap<&'static str, u64>,
    /// Seeds where the verdict was false, per verdict.
    misses: std::collections::BTreeMap<&'static str, Vec<u64>>,
    errors: Vec<SeedRow>,
}

fn sweep_one(family: Family, d: usize, seed: u64, tol: &Tolerances) -> SeedRow {
    let t = family_instance(family, d, seed);
    let verdict = match family {
        Family::ShiftedLdui => shift_gate(&t).and_then(|u| classify_circuit(&u, tol)),
        _ => classify_circuit(&ldoi_matrix(&t), tol),
    };
    match verdict {
        Ok(v) => SeedRow {
            seed,
            verdict: Some(Verdicts {
                non_interacting: v.non_interacting,
                ergodic: v.ergodic,
                mixing: v.mixing,
                irreducible: v.channel_report.irreducible,
                primitive: v.channel_report.primitive,
                bernoulli: v.bernoulli,
                constant_modes: v.constant_modes,
                nondecaying_modes: v.nondecaying_modes,
            }),
            error: None,
        },
        Err(e) => SeedRow { seed, verdict: None, error: Some(e.to_string()) },
    }
}

pub fn sweep_cmd(family: Family, d: usize, count: u64, first_seed: u64, tol: &Tolerances, csv: bool) -> Outcome<Output> {
    if d < 2 {
        return Err(Failure::Core(Error::Precondition("sweeps need d >= 2".into())));
    }
    let seeds: Vec<u64> = (0..count).map(|k| first_seed.wrapping_add(k)).collect();
    // Collected in seed order, so the report does not depend on scheduling.
    let rows: Vec<SeedRow> = seeds.par_iter().map(|&s| sweep_one(family, d, s, tol)).collect();

    if csv {
        let mut s = String::from("seed,");
        s.push_str(&Verdicts::NAMES.join(","));
        s.push_str(",constant_modes,nondecaying_modes,error\n");
        for r in &rows {
            match (&r.verdict, &r.error) {
                (Some(v), _) => {
                    let flags: Vec<String> = v.flags().iter().map(|b| b.to_string()).collect();
                    s.push_str(&format!("{},{},{},{},\n", r.seed, flags.join(","), v.constant_modes, v.nondecaying_modes));
                }
                (None, e) => {
                    let msg = e.as_deref().unwrap_or("").replace(['"', ','], " ");
                    s.push_str(&format!("{},,,,,,,,,{msg}\n", r.seed));
                }
            }
        }
        return Ok(Output::Csv(s));
    }

    let mut counts = std::collections::BTreeMap::new();
    let mut misses = std::collections::BTreeMap::new();
    for name in Verdicts::NAMES {
        counts.insert(name, 0u64);
        misses.insert(name, Vec::new());
    }
    let mut errors = Vec::new();
    for r in &rows {
        match &r.verdict {
            Some(v) => {
                for (name, flag) in Verdicts::NAMES.iter().zip(v.flags()) {
                    if flag {
                        *counts.get_mut(name).unwrap() += 1;
                    } else {
                        misses.get_mut(name).unwrap().push(r.seed);
                    }
                }
            }
            None => errors.push(r.clone()),
        }
    }
    for r in &errors {
        eprintln!("seed {}: {}", r.seed, r.error.as_deref().unwrap_or(""));
    }
    if !misses["primitive"].is_empty() {
        eprintln!("not primitive at seeds {:?}", misses["primitive"]);
    }
    Ok(Output::json(&SweepReport { family, d, first_seed, seeds: count, counts, misses, errors }))
}
