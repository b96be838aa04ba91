//! The three search subprotocols.
//!
//! * `find_one` — distributed Grover search with the standard schedule for an
//!   unknown number of marked coordinates.
//! * `find_exact` — block sampling: split the coordinates into blocks of
//!   `gamma`, pick one representative per block from the shared tape, and run
//!   `find_one` on the sampled sub-instance; repeated `AMPLIFY_ROUNDS` times.
//! * `find_more` — geometric sweep of `find_exact` over block sizes
//!   `gamma_j = 2^j * k`, then a burst of uniformly random verified checks.
//!
//! All three are one-sided: when no marked coordinate exists they answer
//! `NoCoordinate` with probability 1, because `Found` is only ever emitted
//! after a classical verification succeeds.
//!
//! Execution modes: `Sim` drives the distributed statevector engine and
//! meters every transferred qubit; `Ledger` samples measurement outcomes from
//! the closed-form Grover distribution (identical statistics, no state
//! vector) and meters only the claimed-cost column, which makes it usable to
//! n = 2^14 and beyond.

use crate::error::{Error, Result};
use crate::inner::{apply_oracle_og, classical_eval_g};
use crate::instance::Instance;
use crate::meter::{Meter, Phase};
use crate::party::Party;
use crate::qsim::{ceil_log2, DistState, Gate, RegisterId, MAX_SIM_QUBITS};
use crate::tape::ProtocolRng;
use crate::ExecMode;

/// Result of a search: a verified marked coordinate, or the claim that none
/// exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindResult {
    Found(usize),
    NoCoordinate,
}

impl FindResult {
    pub fn found(&self) -> Option<usize> {
        match self {
            FindResult::Found(i) => Some(*i),
            FindResult::NoCoordinate => None,
        }
    }
}

/// One representative per block, drawn from the shared tape.
#[derive(Debug, Clone)]
pub struct SampleMap {
    pub gamma: usize,
    pub chosen: Vec<usize>,
}

impl SampleMap {
    /// Blocks are `[b*gamma, min((b+1)*gamma, n))`; the last may be shorter.
    /// Sampling uniformly inside each block keeps every coordinate's pick
    /// probability at least `1/gamma`.
    pub fn draw(n: usize, gamma: usize, rng: &mut ProtocolRng, meter: &mut Meter) -> SampleMap {
        let mut chosen = Vec::with_capacity(n.div_ceil(gamma));
        let mut start = 0;
        while start < n {
            let len = gamma.min(n - start);
            let off = rng.shared_below(meter, Phase::Sampling, len as u64) as usize;
            chosen.push(start + off);
            start += gamma;
        }
        SampleMap { gamma, chosen }
    }
}

/// Repetition count amplifying the 2/9 single-shot bound of `find_exact`
/// past 99/100.
pub const AMPLIFY_ROUNDS: usize = 40;

/// Random verified checks in `find_more`'s fallback step.
pub const FALLBACK_CHECKS: usize = 12;

/// Grover oracle-call budget: `ceil(9 * sqrt(n))`.
fn oracle_budget(n: usize) -> u64 {
    (9.0 * (n as f64).sqrt()).ceil() as u64
}

/// Verified candidate check; excluded coordinates always fail.
pub fn verify_candidate(inst: &Instance, i: usize, meter: &mut Meter) -> Result<bool> {
    classical_eval_g(inst, i, meter)
}

trait GroverBackend {
    /// Run one Grover episode with `t` oracle queries and return the measured
    /// candidate coordinate.
    fn episode(&mut self, t: u64, rng: &mut ProtocolRng, meter: &mut Meter) -> Result<usize>;
}

/// Honest distributed execution on the dense statevector.
struct SimBackend<'a> {
    inst: &'a Instance,
    state: DistState,
    index: RegisterId,
    target: RegisterId,
    /// Basis value the index register collapsed to in the previous episode.
    last_outcome: u64,
}

impl<'a> SimBackend<'a> {
    fn new(inst: &'a Instance) -> Result<Self> {
        let n = inst.n() as u64;
        let w = ceil_log2(n).max(1);
        let msg = match inst.g().exact() {
            crate::inner::ExactProtocol::DerivedBit => 1,
            crate::inner::ExactProtocol::Generic { j } => j as u32 + 1,
        };
        let needed = w + 1 + w + msg;
        if needed > MAX_SIM_QUBITS {
            return Err(Error::Capacity(format!(
                "simulating n={n} with this inner function needs {needed} qubits \
                 (ceiling {MAX_SIM_QUBITS}); use ledger mode"
            )));
        }
        let mut state = DistState::new();
        let index = state.alloc_register(Party::Alice, w, 0)?;
        let target = state.alloc_register(Party::Alice, 1, 1)?;
        // |1> -> |-> so the XOR oracle acts as a phase flip
        state.apply_local(Party::Alice, &Gate::Hadamard, &[target])?;
        Ok(SimBackend { inst, state, index, target, last_outcome: 0 })
    }
}

impl GroverBackend for SimBackend<'_> {
    fn episode(&mut self, t: u64, rng: &mut ProtocolRng, meter: &mut Meter) -> Result<usize> {
        let n = self.inst.n() as u64;
        // classical feed-forward reset of the collapsed index register
        if self.last_outcome != 0 {
            self.state.apply_local(Party::Alice, &Gate::XorConst(self.last_outcome), &[self.index])?;
        }
        self.state.apply_local(Party::Alice, &Gate::PrepareUniform(n), &[self.index])?;
        for _ in 0..t {
            apply_oracle_og(&mut self.state, self.inst, self.index, self.target, meter)?;
            self.state.apply_local(Party::Alice, &Gate::ReflectUniform(n), &[self.index])?;
        }
        let v = self.state.measure(self.index, &mut rng.measurement)?;
        self.last_outcome = v;
        Ok(v as usize)
    }
}

/// Closed-form emulation: the post-measurement distribution of Grover search
/// from the uniform state is marked with probability `sin^2((2t+1) asin(sqrt(M/N)))`
/// and uniform within each class, which is exactly what the engine produces.
struct LedgerBackend {
    n: usize,
    marked: Vec<usize>,
    unmarked: Vec<usize>,
    claimed_per_query: u64,
}

impl LedgerBackend {
    fn new(inst: &Instance) -> Self {
        let marked = inst.marked_coords();
        let unmarked: Vec<usize> = (0..inst.n()).filter(|&i| !inst.is_marked(i)).collect();
        LedgerBackend {
            n: inst.n(),
            marked,
            unmarked,
            claimed_per_query: 2 * inst.g().qcc_e(),
        }
    }
}

impl GroverBackend for LedgerBackend {
    fn episode(&mut self, t: u64, rng: &mut ProtocolRng, meter: &mut Meter) -> Result<usize> {
        for _ in 0..t {
            meter.claim_qubits_msg(Party::Alice, self.claimed_per_query / 2 + self.claimed_per_query % 2, Phase::GSubprotocol);
            meter.claim_qubits_msg(Party::Bob, self.claimed_per_query / 2, Phase::GSubprotocol);
        }
        let m = self.marked.len();
        let p_marked = if m == 0 {
            0.0
        } else if self.unmarked.is_empty() {
            1.0
        } else {
            let theta = ((m as f64 / self.n as f64).sqrt()).asin();
            ((2 * t + 1) as f64 * theta).sin().powi(2)
        };
        let hit = rng.measurement.draw_f64() < p_marked;
        let v = if hit || self.unmarked.is_empty() {
            self.marked[rng.measurement.draw_below(m as u64) as usize]
        } else {
            self.unmarked[rng.measurement.draw_below(self.unmarked.len() as u64) as usize]
        };
        Ok(v)
    }
}

/// Shared schedule: episode lengths drawn uniformly from `[0, m)` with
/// `m <- min(ceil(9m/8), ceil(sqrt(n)))`, every candidate verified, and a
/// total budget of `ceil(9 sqrt(n))` units where an episode consumes `t + 1`
/// (its oracle calls plus the verification query). The `+1` guarantees
/// termination through the `t = 0` draws.
fn grover_schedule<B: GroverBackend>(
    inst: &Instance,
    backend: &mut B,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<FindResult> {
    let n = inst.n();
    let budget = oracle_budget(n);
    let m_cap = (n as f64).sqrt().ceil() as u64;
    let mut m: u64 = 1;
    let mut used: u64 = 0;
    loop {
        let t = rng.shared_below(meter, Phase::Schedule, m);
        let t = t.min(budget.saturating_sub(used)); // never overshoot the budget
        let candidate = backend.episode(t, rng, meter)?;
        meter.claim_qubits(t, Phase::GroverOverhead);
        used += t + 1;
        if candidate < n && verify_candidate(inst, candidate, meter)? {
            return Ok(FindResult::Found(candidate));
        }
        if used >= budget {
            return Ok(FindResult::NoCoordinate);
        }
        m = (9 * m).div_ceil(8).min(m_cap.max(1));
    }
}

/// Search for any marked coordinate.
///
/// When the marked set is nonempty this succeeds with probability well above
/// 99/100; when it is empty it answers `NoCoordinate` always. Claimed cost
/// grows as `O(sqrt(n) * qcc_e(G))`.
pub fn find_one(inst: &Instance, mode: ExecMode, rng: &mut ProtocolRng, meter: &mut Meter) -> Result<FindResult> {
    if inst.n() == 0 {
        return Err(Error::input("find_one needs n >= 1"));
    }
    match mode {
        ExecMode::Sim => {
            let mut backend = SimBackend::new(inst)?;
            grover_schedule(inst, &mut backend, rng, meter)
        }
        ExecMode::Ledger => {
            let mut backend = LedgerBackend::new(inst);
            grover_schedule(inst, &mut backend, rng, meter)
        }
    }
}

/// Block-sampled search tuned for instances with close to `gamma * 2/3`
/// marked coordinates: when the marked count `k` satisfies
/// `3k/2 < gamma < 3k`, at least one round samples exactly one marked
/// coordinate with probability >= 2/9, and `find_one` then locates it.
pub fn find_exact(
    inst: &Instance,
    gamma: usize,
    mode: ExecMode,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<FindResult> {
    let n = inst.n();
    if gamma < 1 || gamma > n {
        return Err(Error::input(format!("gamma = {gamma} out of range for n = {n}")));
    }
    for _ in 0..AMPLIFY_ROUNDS {
        let map = SampleMap::draw(n, gamma, rng, meter);
        let sub = inst.subsample(&map.chosen);
        if let FindResult::Found(si) = find_one(&sub, mode, rng, meter)? {
            // the sub-instance verification already evaluated this coordinate
            return Ok(FindResult::Found(map.chosen[si]));
        }
    }
    Ok(FindResult::NoCoordinate)
}

/// Search guaranteed for instances with at least `k` marked coordinates;
/// claimed cost follows the geometric sum `sum_j sqrt(n / (2^j k)) = O(sqrt(n/k))`.
pub fn find_more(
    inst: &Instance,
    k: usize,
    mode: ExecMode,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<FindResult> {
    let n = inst.n();
    if k < 1 || k > n {
        return Err(Error::input(format!("k = {k} out of range for n = {n}")));
    }
    let mut gamma = k;
    loop {
        if let FindResult::Found(i) = find_exact(inst, gamma, mode, rng, meter)? {
            return Ok(FindResult::Found(i));
        }
        if gamma > n / 2 {
            break;
        }
        gamma *= 2;
    }
    for _ in 0..FALLBACK_CHECKS {
        let i = rng.shared_below(meter, Phase::SweepCheck, n as u64) as usize;
        if verify_candidate(inst, i, meter)? {
            return Ok(FindResult::Found(i));
        }
    }
    Ok(FindResult::NoCoordinate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::inner::InnerFunction;

    fn and_instance(x: &str, y: &str) -> Instance {
        Instance::from_single_bits(
            InnerFunction::and2(),
            &BitString::parse(x).unwrap(),
            &BitString::parse(y).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sim_finds_single_marked_quickly() {
        let inst = and_instance("0001", "1011");
        assert_eq!(inst.marked_coords(), vec![3]);
        let mut hits = 0;
        for seed in 0..300 {
            let mut rng = ProtocolRng::from_seed(seed);
            let mut meter = Meter::new();
            if find_one(&inst, ExecMode::Sim, &mut rng, &mut meter).unwrap() == FindResult::Found(3) {
                hits += 1;
            }
            assert_eq!(meter.ledger.epr_pairs, 0);
        }
        assert!(hits >= 295, "hits = {hits}");
    }

    #[test]
    fn one_sided_on_empty_instances() {
        for n in [4usize, 8] {
            let inst = and_instance(&"0".repeat(n), &"1".repeat(n));
            for seed in 0..100 {
                let mut rng = ProtocolRng::from_seed(seed);
                let mut meter = Meter::new();
                assert_eq!(
                    find_one(&inst, ExecMode::Sim, &mut rng, &mut meter).unwrap(),
                    FindResult::NoCoordinate
                );
                let mut rng = ProtocolRng::from_seed(seed ^ 0x55);
                assert_eq!(
                    find_more(&inst, 2, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap(),
                    FindResult::NoCoordinate
                );
            }
        }
    }

    #[test]
    fn found_implies_marked_even_when_all_marked() {
        let inst = and_instance("11111111", "11111111");
        for seed in 0..50 {
            let mut rng = ProtocolRng::from_seed(seed);
            let r = find_one(&inst, ExecMode::Sim, &mut rng, &mut Meter::new()).unwrap();
            let i = r.found().expect("marked set is full");
            assert!(inst.eval_g(i));
        }
    }

    #[test]
    fn ledger_and_sim_agree_on_contract() {
        let inst = and_instance("00100100", "01100110");
        assert_eq!(inst.marked_count(), 2);
        for mode in [ExecMode::Sim, ExecMode::Ledger] {
            let mut ok = 0;
            for seed in 0..200 {
                let mut rng = ProtocolRng::from_seed(seed);
                let mut meter = Meter::new();
                if let FindResult::Found(i) = find_more(&inst, 2, mode, &mut rng, &mut meter).unwrap() {
                    assert!(inst.eval_g(i));
                    ok += 1;
                }
            }
            assert!(ok >= 198, "mode {mode:?} ok = {ok}");
        }
    }

    #[test]
    fn find_exact_rejects_bad_gamma() {
        let inst = and_instance("0101", "0101");
        let mut rng = ProtocolRng::from_seed(0);
        assert!(find_exact(&inst, 0, ExecMode::Ledger, &mut rng, &mut Meter::new()).is_err());
        assert!(find_exact(&inst, 5, ExecMode::Ledger, &mut rng, &mut Meter::new()).is_err());
        assert!(find_more(&inst, 0, ExecMode::Ledger, &mut rng, &mut Meter::new()).is_err());
        assert!(find_more(&inst, 5, ExecMode::Ledger, &mut rng, &mut Meter::new()).is_err());
    }

    #[test]
    fn excluded_coordinates_stay_invisible() {
        let inst = and_instance("0001", "0001").exclude([3]);
        for seed in 0..100 {
            let mut rng = ProtocolRng::from_seed(seed);
            assert_eq!(
                find_one(&inst, ExecMode::Sim, &mut rng, &mut Meter::new()).unwrap(),
                FindResult::NoCoordinate
            );
        }
    }

    #[test]
    fn exact_sampling_probability_example() {
        // n = 8, gamma = 4, marked {1, 5}: over the 16 sample maps, exactly
        // one marked coordinate is chosen in 2 * 1 * 3 + 3 * 1 * 2 = wrong;
        // enumerate literally.
        let marked = [1usize, 5];
        let mut exactly_one = 0u32;
        for a in 0..4usize {
            for b in 0..4usize {
                let chosen = [a, 4 + b];
                let hits = chosen.iter().filter(|c| marked.contains(c)).count();
                if hits == 1 {
                    exactly_one += 1;
                }
            }
        }
        assert_eq!(exactly_one, 6); // 6/16 = 3/8 >= 2/9
        assert!(6.0 / 16.0 >= 2.0 / 9.0);
        // bound value at k/gamma = 1/2
        assert!(0.5 - 0.25 >= 2.0 / 9.0);
    }

    #[test]
    fn geometric_sum_bound() {
        // sum_{j=0}^{6} sqrt(64 / 2^j) stays under sqrt(64) / (1 - 2^{-1/2})
        let sum: f64 = (0..=6).map(|j| (64.0 / 2f64.powi(j)).sqrt()).sum();
        assert!((sum - 24.8995).abs() < 1e-3, "sum = {sum}");
        let bound = 8.0 / (1.0 - 2f64.powf(-0.5));
        assert!((bound - 27.3137).abs() < 1e-3);
        assert!(sum <= bound);
    }

    #[test]
    fn fallback_hits_dense_instances() {
        // 7 of 8 marked: step (2) alone succeeds with overwhelming probability
        let inst = and_instance("11111110", "11111111");
        let miss_all = (1.0f64 / 8.0).powi(12);
        assert!(miss_all < 1e-10);
        let mut ok = 0;
        for seed in 0..100 {
            let mut rng = ProtocolRng::from_seed(seed);
            if find_more(&inst, 7, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap().found().is_some() {
                ok += 1;
            }
        }
        assert_eq!(ok, 100);
    }

    #[test]
    fn claimed_cost_uses_inner_cost_scale() {
        let inst = and_instance(&"0".repeat(16), &"0".repeat(16));
        let mut rng = ProtocolRng::from_seed(9);
        let mut meter = Meter::new();
        find_one(&inst, ExecMode::Ledger, &mut rng, &mut meter).unwrap();
        // empty instance exhausts the budget: claimed ~ 2 * qcc_e * calls + iterations
        assert!(meter.ledger.qubits_claimed > 0);
        assert_eq!(meter.ledger.qubits_sim, 0, "ledger mode moves no simulated qubits");
        assert_eq!(meter.ledger.epr_pairs, 0);
    }
}
