//! Protocols for composed functions `f o G` with symmetric `f`.
//!
//! `compute_composed` resolves `D(|z|)` by counting marked coordinates up to
//! `l0 + 1` and unmarked coordinates up to `l1 + 1`; between the outermost
//! change points the spectrum is constant, so those two counts decide the
//! value. `compute_sym_and` specializes to `G = AND2` and splits the spectrum
//! into a low part (handled by the counting protocol) and a high part
//! (handled by a classical sparse-intersection path), which brings the cost
//! down to `O(sqrt(n*l0) + l1)` plus the randomness budget.

use crate::analysis::{covering_run_bounds, newman_budget};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::inner::InnerFunction;
use crate::meter::{Meter, Phase};
use crate::party::Party;
use crate::qsim::ceil_log2;
use crate::search::{find_more, find_one, FindResult};
use crate::sparse::{sparse_intersect, IntersectResult};
use crate::symmetric::SymmetricSpec;
use crate::tape::{derive_seed, ProtocolRng, RandomTape};
use crate::ExecMode;

/// Result of a bounded count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountResult {
    /// The exact number of coordinates with the requested polarity; only
    /// returned after a confirmed-empty search of the remainder.
    Exact(usize),
    /// At least `cap` coordinates were found and individually verified.
    AtLeast(usize),
}

/// Which coordinates to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Ones,
    Zeros,
}

/// Count marked coordinates up to `cap` by find-and-exclude.
///
/// The promise parameter of the sweep starts at `cap` and halves on every
/// miss; once it reaches zero, a burst of `ceil(log2(cap+1))` plain searches
/// must all come back empty before the count is declared exact. Every counted
/// coordinate is individually verified, so `Exact(c)` never overcounts, and
/// an empty instance terminates with `Exact(0)` with probability 1.
/// Claimed cost is `O(sqrt(n * max(cap,1)) * qcc_e(G))`.
pub fn count_up_to(
    inst: &Instance,
    cap: usize,
    polarity: Polarity,
    mode: ExecMode,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<CountResult> {
    if cap > inst.n() {
        return Err(Error::input(format!("cap = {cap} exceeds n = {}", inst.n())));
    }
    if cap == 0 {
        return Ok(CountResult::AtLeast(0));
    }
    let work = match polarity {
        Polarity::Ones => inst.clone(),
        Polarity::Zeros => inst.with_negated_g(),
    };
    let mut found: Vec<usize> = Vec::new();
    let mut khat = cap;
    let confirm_reps = ceil_log2(cap as u64 + 1).max(1);
    loop {
        if found.len() == cap {
            return Ok(CountResult::AtLeast(cap));
        }
        let view = work.exclude(found.iter().copied());
        if khat >= 1 {
            match find_more(&view, khat, mode, rng, meter)? {
                FindResult::Found(i) => found.push(i),
                FindResult::NoCoordinate => khat /= 2,
            }
        } else {
            let mut hit = None;
            for _ in 0..confirm_reps {
                if let FindResult::Found(i) = find_one(&view, mode, rng, meter)? {
                    hit = Some(i);
                    break;
                }
            }
            match hit {
                Some(i) => {
                    found.push(i);
                    khat = 1;
                }
                None => return Ok(CountResult::Exact(found.len())),
            }
        }
    }
}

/// Compute `f o G` on an instance. Success probability at least 97/100; a
/// constant `f` short-circuits at zero cost.
pub fn compute_composed(
    f: &SymmetricSpec,
    inst: &Instance,
    mode: ExecMode,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<bool> {
    let n = inst.n();
    if f.n() != n {
        return Err(Error::input(format!("outer arity {} vs instance size {n}", f.n())));
    }
    if f.is_constant() {
        return Ok(f.value_at(0));
    }
    if n == 1 {
        // the change point of a 1-bit spectrum sits in neither scan window,
        // so no constant middle region exists; evaluate the single
        // coordinate directly
        let z = crate::inner::classical_eval_g(inst, 0, meter)?;
        return Ok(f.value_at(z as usize));
    }
    // boundary distances of the constant middle run; equal to (l0, l1)
    // whenever the scan windows cover every change point
    let (low, high) = covering_run_bounds(f.table());
    if low > 0 {
        if let CountResult::Exact(c) = count_up_to(inst, low + 1, Polarity::Ones, mode, rng, meter)? {
            if c <= low {
                return Ok(f.value_at(c));
            }
        }
    }
    if high > 0 {
        if let CountResult::Exact(c) = count_up_to(inst, high + 1, Polarity::Zeros, mode, rng, meter)? {
            if c <= high {
                return Ok(f.value_at(n - c));
            }
        }
    }
    // both counts overflowed their caps: the weight lies in [low, n - high],
    // where the spectrum is constant
    Ok(f.value_at(low))
}

/// Spectrum split into its boundary parts after normalizing the constant
/// middle region to 0. `d0` keeps the entries at weights `<= l0`, `d1` the
/// entries at weights `> n - l1`; `negated` records whether the input was
/// negated to normalize, in which case callers must invert the final answer.
#[derive(Debug, Clone)]
pub struct SplitD {
    pub d0: SymmetricSpec,
    pub d1: SymmetricSpec,
    pub negated: bool,
    /// Split boundaries actually used: `d0` lives on weights `<= low`,
    /// `d1` on weights `> n - high`. Equal to `(l0, l1)` except on odd-n
    /// spectra whose center change escapes the scan windows.
    pub low: usize,
    pub high: usize,
}

impl SplitD {
    pub fn d1_is_zero(&self) -> bool {
        self.d1.is_constant() && !self.d1.value_at(0)
    }
}

/// Split a non-constant spectrum; pointwise `D = D0 or D1` holds after the
/// normalization.
pub fn split_d(f: &SymmetricSpec) -> Result<SplitD> {
    if f.is_constant() {
        return Err(Error::DegenerateSplit(
            "constant spectrum has no boundary split; short-circuit instead".into(),
        ));
    }
    if f.n() == 1 {
        return Err(Error::DegenerateSplit(
            "1-bit spectra have no boundary split; evaluate the coordinate directly".into(),
        ));
    }
    let n = f.n();
    let (low, high) = covering_run_bounds(f.table());
    let negated = f.value_at(low);
    let base = if negated { f.negated() } else { f.clone() };
    let d0: Vec<bool> = (0..=n).map(|m| m <= low && base.value_at(m)).collect();
    let d1: Vec<bool> = (0..=n).map(|m| m > n - high && base.value_at(m)).collect();
    Ok(SplitD {
        d0: SymmetricSpec::from_table(d0)?,
        d1: SymmetricSpec::from_table(d1)?,
        negated,
        low,
        high,
    })
}

/// The classical high-weight path: decide whether `|x and y| > n - l1` and if
/// so compute it exactly.
///
/// Bob opens with one bit (`|not y| <= l1`); if it and Alice's own check both
/// pass, the parties intersect the complements with sparsity bound `l1`,
/// exchange `|not x|` and `|not y|`, and return
/// `Exact(n + |Z00| - |not x| - |not y|)` via the counting identity over the
/// partition of coordinates. Any early exit returns `AtLeast(0)`, meaning
/// "the weight is at most `n - l1`, so the high part contributes 0".
pub fn compute_f1_path(
    x: &BitString,
    y: &BitString,
    l1: usize,
    shared: &mut RandomTape,
    meter: &mut Meter,
) -> Result<CountResult> {
    if x.len() != y.len() {
        return Err(Error::input("x and y must have equal length"));
    }
    let n = x.len();
    let ny = y.negated();
    meter.send_classical(Party::Bob, 1, Phase::F1Check);
    if ny.weight() > l1 {
        return Ok(CountResult::AtLeast(0));
    }
    let nx = x.negated();
    meter.send_classical(Party::Alice, 1, Phase::F1Check);
    if nx.weight() > l1 {
        return Ok(CountResult::AtLeast(0));
    }
    let z00 = match sparse_intersect(&nx, &ny, l1, shared, meter)? {
        IntersectResult::Computed(out) => out.alice,
        IntersectResult::Aborted => return Ok(CountResult::AtLeast(0)),
    };
    let width = ceil_log2(l1 as u64 + 1).max(1) as u64;
    meter.send_classical(Party::Alice, width, Phase::WeightExchange);
    meter.send_classical(Party::Bob, width, Phase::WeightExchange);
    Ok(CountResult::Exact(n + z00.len() - nx.weight() - ny.weight()))
}

/// Randomness regime for the high-weight path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomnessMode {
    /// The sparse path reads the pre-shared tape.
    SharedRandomness,
    /// Alice draws a seed privately and sends it: the budget
    /// `ceil(log2(l1+1)) + ceil(log2 log2 (n+1)) + 16` bits is charged as
    /// classical communication and no shared randomness is consumed.
    PrivateOnly,
}

/// Compute `f o AND2(x, y)` through the boundary split. Success probability
/// at least 97/100.
pub fn compute_sym_and(
    f: &SymmetricSpec,
    x: &BitString,
    y: &BitString,
    mode: ExecMode,
    randomness: RandomnessMode,
    rng: &mut ProtocolRng,
    meter: &mut Meter,
) -> Result<bool> {
    let n = f.n();
    if x.len() != n || y.len() != n {
        return Err(Error::input(format!(
            "inputs of length {} and {} for arity {n}",
            x.len(),
            y.len()
        )));
    }
    if f.is_constant() {
        return Ok(f.value_at(0));
    }
    let inst = Instance::from_single_bits(InnerFunction::and2(), x, y)?;
    if n == 1 {
        return compute_composed(f, &inst, mode, rng, meter);
    }
    let split = split_d(f)?;
    let b0 = compute_composed(&split.d0, &inst, mode, rng, meter)?;
    let b1 = if split.d1_is_zero() {
        false
    } else {
        let l1 = split.high;
        let mut private_tape;
        let shared_tape: &mut RandomTape = match randomness {
            RandomnessMode::SharedRandomness => &mut rng.shared,
            RandomnessMode::PrivateOnly => {
                let budget = newman_budget(n, l1) as usize + 16;
                let bits = rng.alice_private.draw_bits(budget);
                meter.send_classical(Party::Alice, budget as u64, Phase::SeedBroadcast);
                let seed = bits
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, b)| acc ^ ((b as u64) << (i % 64)));
                private_tape = RandomTape::private(Party::Alice, derive_seed(seed, 0x4e57));
                &mut private_tape
            }
        };
        match compute_f1_path(x, y, l1, shared_tape, meter)? {
            CountResult::Exact(w) => split.d1.value_at(w),
            CountResult::AtLeast(_) => false,
        }
    };
    let b = b0 || b1;
    Ok(if split.negated { !b } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::eval_composed;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn and_instance(x: &str, y: &str) -> Instance {
        Instance::from_single_bits(InnerFunction::and2(), &bs(x), &bs(y)).unwrap()
    }

    #[test]
    fn count_small_marked_set_exactly() {
        let inst = and_instance("00010000", "11111111");
        let mut exact = 0;
        for seed in 0..200 {
            let mut rng = ProtocolRng::from_seed(seed);
            let r = count_up_to(&inst, 3, Polarity::Ones, ExecMode::Sim, &mut rng, &mut Meter::new()).unwrap();
            if r == CountResult::Exact(1) {
                exact += 1;
            }
        }
        assert!(exact >= 198, "exact = {exact}");
    }

    #[test]
    fn cap_hits_return_at_least() {
        let inst = and_instance("11111010", "11111110");
        assert_eq!(inst.marked_count(), 6);
        let mut ok = 0;
        for seed in 0..100 {
            let mut rng = ProtocolRng::from_seed(seed);
            let r = count_up_to(&inst, 3, Polarity::Ones, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap();
            if r == CountResult::AtLeast(3) {
                ok += 1;
            }
        }
        assert!(ok >= 99, "ok = {ok}");
    }

    #[test]
    fn empty_instance_counts_zero_always() {
        let inst = and_instance("00000000", "11111111");
        for seed in 0..150 {
            let mut rng = ProtocolRng::from_seed(seed);
            let r = count_up_to(&inst, 4, Polarity::Ones, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap();
            assert_eq!(r, CountResult::Exact(0));
        }
    }

    #[test]
    fn zero_cap_is_free() {
        let inst = and_instance("0101", "0101");
        let mut rng = ProtocolRng::from_seed(1);
        let mut meter = Meter::new();
        assert_eq!(
            count_up_to(&inst, 0, Polarity::Ones, ExecMode::Sim, &mut rng, &mut meter).unwrap(),
            CountResult::AtLeast(0)
        );
        assert_eq!(meter.ledger, Default::default());
    }

    #[test]
    fn zeros_polarity_counts_complement() {
        let inst = and_instance("11101111", "11111111");
        let mut rng = ProtocolRng::from_seed(5);
        let r = count_up_to(&inst, 3, Polarity::Zeros, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap();
        assert_eq!(r, CountResult::Exact(1));
    }

    #[test]
    fn composed_or8_and_thresholds() {
        let or8 = SymmetricSpec::or(8);
        let inst = and_instance("00010000", "11111111");
        let mut right = 0;
        for seed in 0..100 {
            let mut rng = ProtocolRng::from_seed(seed);
            let got = compute_composed(&or8, &inst, ExecMode::Sim, &mut rng, &mut Meter::new()).unwrap();
            if got == eval_composed(&or8, &inst).unwrap() {
                right += 1;
            }
        }
        assert!(right >= 97, "right = {right}");

        let thr2 = SymmetricSpec::from_descriptor("thr:2", 8).unwrap();
        for (x, want) in [("00010000", false), ("10010100", true)] {
            let inst = and_instance(x, "11111111");
            let mut rng = ProtocolRng::from_seed(77);
            let got = compute_composed(&thr2, &inst, ExecMode::Sim, &mut rng, &mut Meter::new()).unwrap();
            assert_eq!(got, want);
            assert_eq!(got, eval_composed(&thr2, &inst).unwrap());
        }
    }

    #[test]
    fn constant_outer_short_circuits() {
        let inst = and_instance("0101", "0011");
        let f = SymmetricSpec::constant(4, true);
        let mut rng = ProtocolRng::from_seed(3);
        let mut meter = Meter::new();
        assert!(compute_composed(&f, &inst, ExecMode::Sim, &mut rng, &mut meter).unwrap());
        assert_eq!(meter.ledger, Default::default());
    }

    #[test]
    fn zeros_phase_resolves_high_weights() {
        // thr:7 on n=8 has l0 = 0, l1 = 2: only the zeros count runs
        let f = SymmetricSpec::from_descriptor("thr:7", 8).unwrap();
        assert_eq!((f.l0(), f.l1()), (0, 2));
        for (x, y) in [("11111111", "11111111"), ("11111110", "11111111"), ("10111110", "11111011")] {
            let inst = and_instance(x, y);
            let mut rng = ProtocolRng::from_seed(11);
            let got = compute_composed(&f, &inst, ExecMode::Ledger, &mut rng, &mut Meter::new()).unwrap();
            assert_eq!(got, eval_composed(&f, &inst).unwrap(), "x={x} y={y}");
        }
    }

    #[test]
    fn split_normalizes_or_spectrum() {
        // OR's middle value is 1, so the split negates first
        let split = split_d(&SymmetricSpec::or(8)).unwrap();
        assert!(split.negated);
        let want_d0: Vec<bool> = (0..=8).map(|m| m == 0).collect();
        assert_eq!(split.d0.table(), &want_d0[..]);
        assert!(split.d1_is_zero());
    }

    #[test]
    fn split_of_and_keeps_top_entry() {
        let split = split_d(&SymmetricSpec::and(8)).unwrap();
        assert!(!split.negated);
        assert!(split.d0.is_constant() && !split.d0.value_at(0));
        let want_d1: Vec<bool> = (0..=8).map(|m| m == 8).collect();
        assert_eq!(split.d1.table(), &want_d1[..]);
    }

    #[test]
    fn one_bit_arity_evaluates_directly() {
        let identity = SymmetricSpec::from_table(vec![false, true]).unwrap();
        let negated = SymmetricSpec::from_table(vec![true, false]).unwrap();
        for (xv, yv) in [(0u64, 0u64), (0, 1), (1, 0), (1, 1)] {
            let x = BitString::from_value(xv, 1);
            let y = BitString::from_value(yv, 1);
            for f in [&identity, &negated] {
                let mut rng = ProtocolRng::from_seed(xv << 1 | yv);
                let got = compute_sym_and(
                    f, &x, &y, ExecMode::Ledger, RandomnessMode::SharedRandomness, &mut rng, &mut Meter::new(),
                )
                .unwrap();
                assert_eq!(got, f.value_at((xv & yv) as usize));
            }
        }
        assert!(matches!(split_d(&identity), Err(Error::DegenerateSplit(_))));
    }

    #[test]
    fn split_reconstructs_pointwise() {
        for n in 2..=10usize {
            for t in 1..(1u32 << (n + 1)) - 1 {
                let table: Vec<bool> = (0..=n).map(|m| (t >> m) & 1 == 1).collect();
                let f = match SymmetricSpec::from_table(table) {
                    Ok(f) if !f.is_constant() => f,
                    _ => continue,
                };
                let split = split_d(&f).unwrap();
                let base = if split.negated { f.negated() } else { f.clone() };
                for m in 0..=n {
                    assert_eq!(
                        base.value_at(m),
                        split.d0.value_at(m) || split.d1.value_at(m),
                        "n={n} t={t:b} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_rejects_constant() {
        assert!(matches!(
            split_d(&SymmetricSpec::constant(4, false)),
            Err(Error::DegenerateSplit(_))
        ));
    }

    #[test]
    fn f1_path_counting_identity_example() {
        let mut tape = RandomTape::shared(4);
        let mut meter = Meter::new();
        let r = compute_f1_path(&bs("1101"), &bs("1011"), 2, &mut tape, &mut meter).unwrap();
        assert_eq!(r, CountResult::Exact(2));
        assert_eq!(bs("1101").and(&bs("1011")).weight(), 2);
    }

    #[test]
    fn f1_path_all_ones() {
        let mut tape = RandomTape::shared(4);
        let r = compute_f1_path(&bs("11111111"), &bs("11111111"), 1, &mut tape, &mut Meter::new()).unwrap();
        assert_eq!(r, CountResult::Exact(8));
    }

    #[test]
    fn f1_path_early_exit_costs_one_bit() {
        let mut tape = RandomTape::shared(4);
        let mut meter = Meter::new();
        let r = compute_f1_path(&bs("1111"), &bs("0001"), 1, &mut tape, &mut meter).unwrap();
        assert_eq!(r, CountResult::AtLeast(0));
        assert_eq!(meter.ledger.classical_bits, 1);
        assert_eq!(meter.ledger.shared_random_bits, 0);
    }

    #[test]
    fn sym_and_matches_oracle_on_high_threshold() {
        // D(m) = 1 iff m >= 7 on n = 8: l0 = 0, l1 = 2
        let f = SymmetricSpec::from_descriptor("thr:7", 8).unwrap();
        for (x, y, want) in [
            ("11111110", "11111101", false), // |x and y| = 6
            ("11111110", "11111110", true),  // 7
        ] {
            let (x, y) = (bs(x), bs(y));
            let mut rng = ProtocolRng::from_seed(21);
            let got = compute_sym_and(
                &f, &x, &y, ExecMode::Ledger, RandomnessMode::SharedRandomness, &mut rng, &mut Meter::new(),
            )
            .unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn sym_and_degenerate_high_part_exhaustive() {
        // OR has l1 = 0: the answer comes from the counting path alone
        let f = SymmetricSpec::or(4);
        for xv in 0..16u64 {
            for yv in 0..16u64 {
                let x = BitString::from_value(xv, 4);
                let y = BitString::from_value(yv, 4);
                let mut rng = ProtocolRng::from_seed(xv << 4 | yv);
                let got = compute_sym_and(
                    &f, &x, &y, ExecMode::Ledger, RandomnessMode::SharedRandomness, &mut rng, &mut Meter::new(),
                )
                .unwrap();
                assert_eq!(got, x.and(&y).weight() >= 1, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn private_randomness_charges_seed_bits() {
        let f = SymmetricSpec::from_descriptor("thr:7", 8).unwrap();
        let x = bs("11111110");
        let y = bs("11111110");
        let mut rng = ProtocolRng::from_seed(8);
        let mut meter = Meter::new();
        let got = compute_sym_and(
            &f, &x, &y, ExecMode::Ledger, RandomnessMode::PrivateOnly, &mut rng, &mut meter,
        )
        .unwrap();
        assert!(got);
        assert_eq!(meter.ledger.shared_random_bits, 0);
        let budget = newman_budget(8, 2) as u64 + 16;
        assert!(meter.ledger.classical_bits >= budget);
    }

    #[test]
    fn counting_identity_exhaustive_small() {
        for n in 1..=8usize {
            for xv in 0..1u64 << n {
                for yv in 0..1u64 << n {
                    let x = BitString::from_value(xv, n);
                    let y = BitString::from_value(yv, n);
                    let z00 = (0..n).filter(|&i| !x.get(i) && !y.get(i)).count();
                    assert_eq!(
                        x.and(&y).weight() as i64,
                        n as i64 + z00 as i64 - x.negated().weight() as i64 - y.negated().weight() as i64
                    );
                }
            }
        }
    }
}
