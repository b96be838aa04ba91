//! One protocol execution with a full machine-readable report.

use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;
use symqcc_core::bits::BitString;
use symqcc_core::composed::{compute_composed, compute_sym_and, RandomnessMode};
use symqcc_core::error::{Error, Result};
use symqcc_core::inner::InnerFunction;
use symqcc_core::instance::{eval_composed, Instance};
use symqcc_core::meter::{CostLedger, Meter};
use symqcc_core::qsim::ceil_log2;
use symqcc_core::search::{find_exact, find_more, find_one, FindResult};
use symqcc_core::sparse::{sparse_intersect, IntersectResult, SparseConfig};
use symqcc_core::symmetric::SymmetricSpec;
use symqcc_core::tape::ProtocolRng;
use symqcc_core::{analysis, ExecMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    FindOne,
    FindExact,
    FindMore,
    Composed,
    SymAnd,
    SparseIntersect,
}

impl ProtocolKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "find-one" => Ok(Self::FindOne),
            "find-exact" => Ok(Self::FindExact),
            "find-more" => Ok(Self::FindMore),
            "composed" => Ok(Self::Composed),
            "sym-and" => Ok(Self::SymAnd),
            "sparse-intersect" => Ok(Self::SparseIntersect),
            _ => Err(Error::input(format!(
                "unknown protocol \"{s}\" (expected find-one | find-exact | find-more | composed | sym-and | sparse-intersect)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FindOne => "find-one",
            Self::FindExact => "find-exact",
            Self::FindMore => "find-more",
            Self::Composed => "composed",
            Self::SymAnd => "sym-and",
            Self::SparseIntersect => "sparse-intersect",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub protocol: ProtocolKind,
    pub mode: ExecMode,
    pub seed: u64,
    pub f: Option<String>,
    pub g: Option<String>,
    pub x: String,
    pub y: String,
    pub k: Option<usize>,
    pub gamma: Option<usize>,
    pub randomness: RandomnessMode,
}

/// Report of one run. `matched` compares the outcome against the reference
/// oracle whenever one is computable. Replay with the same spec reproduces
/// every field except `wallclock_ms`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub protocol: &'static str,
    pub mode: String,
    pub n: usize,
    pub seed: u64,
    pub inputs: Value,
    pub outcome: Value,
    pub oracle: Value,
    pub matched: Option<bool>,
    pub ledger: CostLedger,
    pub budgets: Option<Value>,
    pub wallclock_ms: f64,
}

fn chunk_bits(raw: &str, width: usize, side: &str) -> Result<Vec<BitString>> {
    let all = BitString::parse(raw)?;
    if width == 0 || all.len() % width != 0 {
        return Err(Error::input(format!(
            "--{side} has {} bits, not a multiple of the entry width {width}",
            all.len()
        )));
    }
    Ok((0..all.len() / width)
        .map(|i| BitString::from_bits((0..width).map(|b| all.get(i * width + b)).collect()))
        .collect())
}

fn find_value(r: &FindResult) -> Value {
    match r {
        FindResult::Found(i) => json!({ "found": i }),
        FindResult::NoCoordinate => json!({ "found": null }),
    }
}

/// Correctness of a search answer against the reference marked set.
fn find_matches(inst: &Instance, r: &FindResult) -> bool {
    match r {
        FindResult::Found(i) => inst.is_marked(*i),
        FindResult::NoCoordinate => inst.marked_count() == 0,
    }
}

pub fn execute(spec: &RunSpec) -> Result<RunReport> {
    let started = Instant::now();
    let mut rng = ProtocolRng::from_seed(spec.seed);
    let mut meter = Meter::recording();

    let g_desc = spec.g.clone().unwrap_or_else(|| "and2".to_string());
    let g = InnerFunction::from_descriptor(&g_desc)?;

    let (n, inputs, outcome, oracle, matched, budgets) = match spec.protocol {
        ProtocolKind::FindOne | ProtocolKind::FindExact | ProtocolKind::FindMore => {
            let xs = chunk_bits(&spec.x, g.j(), "x")?;
            let ys = chunk_bits(&spec.y, g.k(), "y")?;
            let inst = Instance::new(g.clone(), xs, ys)?;
            let n = inst.n();
            let r = match spec.protocol {
                ProtocolKind::FindOne => find_one(&inst, spec.mode, &mut rng, &mut meter)?,
                ProtocolKind::FindExact => {
                    let gamma = spec.gamma.ok_or_else(|| Error::input("find-exact needs --gamma"))?;
                    find_exact(&inst, gamma, spec.mode, &mut rng, &mut meter)?
                }
                ProtocolKind::FindMore => {
                    let k = spec.k.ok_or_else(|| Error::input("find-more needs --k"))?;
                    find_more(&inst, k, spec.mode, &mut rng, &mut meter)?
                }
                _ => unreachable!(),
            };
            let matched = find_matches(&inst, &r);
            (
                n,
                json!({ "g": g_desc, "x": spec.x, "y": spec.y, "k": spec.k, "gamma": spec.gamma }),
                find_value(&r),
                json!({ "marked": inst.marked_coords() }),
                Some(matched),
                None,
            )
        }
        ProtocolKind::Composed => {
            let xs = chunk_bits(&spec.x, g.j(), "x")?;
            let ys = chunk_bits(&spec.y, g.k(), "y")?;
            let inst = Instance::new(g.clone(), xs, ys)?;
            let n = inst.n();
            let f_desc = spec.f.clone().ok_or_else(|| Error::input("composed needs --f"))?;
            let f = SymmetricSpec::from_descriptor(&f_desc, n)?;
            let got = compute_composed(&f, &inst, spec.mode, &mut rng, &mut meter)?;
            let truth = eval_composed(&f, &inst)?;
            let budgets = json!({ "shared_random_log_n": ceil_log2(n as u64) });
            (
                n,
                json!({ "f": f_desc, "g": g_desc, "x": spec.x, "y": spec.y }),
                json!(got as u8),
                json!(truth as u8),
                Some(got == truth),
                Some(budgets),
            )
        }
        ProtocolKind::SymAnd => {
            let x = BitString::parse(&spec.x)?;
            let y = BitString::parse(&spec.y)?;
            let n = x.len();
            let f_desc = spec.f.clone().ok_or_else(|| Error::input("sym-and needs --f"))?;
            let f = SymmetricSpec::from_descriptor(&f_desc, n)?;
            let got = compute_sym_and(&f, &x, &y, spec.mode, spec.randomness, &mut rng, &mut meter)?;
            let inst = Instance::from_single_bits(InnerFunction::and2(), &x, &y)?;
            let truth = eval_composed(&f, &inst)?;
            let budgets = json!({
                "newman_bits": analysis::newman_budget(n, f.l1()),
                "shared_random_log_n": ceil_log2(n as u64),
            });
            (
                n,
                json!({ "f": f_desc, "x": spec.x, "y": spec.y, "randomness": match spec.randomness {
                    RandomnessMode::SharedRandomness => "shared",
                    RandomnessMode::PrivateOnly => "private",
                }}),
                json!(got as u8),
                json!(truth as u8),
                Some(got == truth),
                Some(budgets),
            )
        }
        ProtocolKind::SparseIntersect => {
            let x = BitString::parse(&spec.x)?;
            let y = BitString::parse(&spec.y)?;
            let n = x.len();
            let k = spec.k.ok_or_else(|| Error::input("sparse-intersect needs --k"))?;
            let r = sparse_intersect(&x, &y, k, &mut rng.shared, &mut meter)?;
            let truth: Vec<usize> = (0..n).filter(|&i| x.get(i) && y.get(i)).collect();
            let cfg = SparseConfig::wrap(k);
            let (outcome, matched) = match &r {
                IntersectResult::Computed(out) => (json!({ "set": out.alice }), out.alice == truth),
                IntersectResult::Aborted => (json!({ "aborted": true }), false),
            };
            (
                n,
                json!({ "x": spec.x, "y": spec.y, "k": k, "threshold_bits": cfg.threshold() }),
                outcome,
                json!({ "set": truth }),
                Some(matched),
                None,
            )
        }
    };

    Ok(RunReport {
        protocol: spec.protocol.name(),
        mode: spec.mode.to_string(),
        n,
        seed: spec.seed,
        inputs,
        outcome,
        oracle,
        matched,
        ledger: meter.ledger,
        budgets,
        wallclock_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}
