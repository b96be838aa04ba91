//! Public-coin sparse set intersection.
//!
//! Both parties hold an n-bit string of weight at most `k` and want the set
//! of common 1-coordinates. The protocol runs `T` rounds of mutual bucket
//! filtering: each round draws a fresh hash `h_t: [n] -> [B]` from the shared
//! tape, and each party in turn sends the `B`-bit occupancy bitmap of its
//! surviving candidates while the other keeps only candidates whose bucket is
//! occupied. True intersection elements occupy the same bucket on both sides
//! in every round, so completeness is deterministic; a spurious candidate
//! survives one filtering pass with probability at most `k'/B = 1/64`.
//!
//! The wrapper clamps the sparsity at a floor `k0`, meters every message
//! against the hard budget `200 * C * k'`, and aborts rather than exceed it.
//! With the default `C` the worst-case bitmap traffic fits under the budget,
//! so an abort indicates a misconfiguration rather than an expected event.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::meter::{Meter, Phase};
use crate::party::Party;
use crate::tape::{metered_word, RandomTape};

/// Parameters of the wrapped protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseConfig {
    /// Requested sparsity bound.
    pub k: usize,
    /// Floor constant; the effective bound is `max(k, k0)`.
    pub k0: usize,
    /// Budget constant in `200 * C * k'`.
    pub c: usize,
    /// Filtering rounds.
    pub rounds: usize,
    /// Buckets per hash.
    pub buckets: usize,
}

/// Default floor: the smallest power of two that keeps the round formula
/// well behaved.
pub const DEFAULT_K0: usize = 8;

impl SparseConfig {
    /// Wrap a sparsity bound: clamp at the floor, derive rounds and buckets,
    /// and pick the smallest budget constant that clears the deterministic
    /// worst case (two bitmaps per round).
    pub fn wrap(k: usize) -> SparseConfig {
        Self::wrap_with_floor(k, DEFAULT_K0)
    }

    pub fn wrap_with_floor(k: usize, k0: usize) -> SparseConfig {
        let k_eff = k.max(k0).max(1);
        // expected spurious survivors <= 2k' * 64^{-T} <= 1/200
        let rounds = ((400.0 * k_eff as f64).log2() / 6.0).ceil() as usize;
        let buckets = 64 * k_eff;
        let c = (2 * rounds * 64).div_ceil(200) + 1;
        SparseConfig { k, k0, c, rounds, buckets }
    }

    pub fn effective_k(&self) -> usize {
        self.k.max(self.k0).max(1)
    }

    /// Hard communication budget in classical bits.
    pub fn threshold(&self) -> u64 {
        (200 * self.c * self.effective_k()) as u64
    }
}

/// Final candidate sets of the two parties. They agree whenever no spurious
/// candidate survived; Alice's set is taken as the protocol output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectOutcome {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectResult {
    Computed(IntersectOutcome),
    /// The budget gate tripped; counted as a failure by callers.
    Aborted,
}

fn bucket(a: u64, b: u64, i: usize, buckets: usize) -> usize {
    let z = a.wrapping_mul(i as u64 ^ 0x9E37_79B9_7F4A_7C15).wrapping_add(b);
    ((z as u128 * buckets as u128) >> 64) as usize
}

/// Intersect the supports of `x` and `y` under the promise
/// `max(|x|, |y|) <= k`.
pub fn sparse_intersect(
    x: &BitString,
    y: &BitString,
    k: usize,
    tape: &mut RandomTape,
    meter: &mut Meter,
) -> Result<IntersectResult> {
    sparse_intersect_with(x, y, SparseConfig::wrap(k), tape, meter)
}

pub fn sparse_intersect_with(
    x: &BitString,
    y: &BitString,
    cfg: SparseConfig,
    tape: &mut RandomTape,
    meter: &mut Meter,
) -> Result<IntersectResult> {
    if x.len() != y.len() {
        return Err(Error::input("inputs must have equal length"));
    }
    // each party checks its own side against the promised bound
    if x.weight() > cfg.k || y.weight() > cfg.k {
        return Err(Error::input(format!(
            "sparsity violation: weights {} and {} exceed the bound {}",
            x.weight(),
            y.weight(),
            cfg.k
        )));
    }
    let threshold = cfg.threshold();
    let buckets = cfg.buckets;
    let mut spent: u64 = 0;
    let mut alice: Vec<usize> = x.support();
    let mut bob: Vec<usize> = y.support();
    let mut bitmap = vec![false; buckets];

    for round in 0..cfg.rounds {
        let a = metered_word(tape, meter, Phase::SparseFilter) | 1;
        let b = metered_word(tape, meter, Phase::SparseFilter);
        let order = if round % 2 == 0 { [Party::Alice, Party::Bob] } else { [Party::Bob, Party::Alice] };
        for sender in order {
            // budget gate sits in front of every message
            if spent + buckets as u64 > threshold {
                return Ok(IntersectResult::Aborted);
            }
            let (own, other) = match sender {
                Party::Alice => (&alice, &mut bob),
                Party::Bob => (&bob, &mut alice),
            };
            bitmap.iter_mut().for_each(|s| *s = false);
            for &i in own {
                bitmap[bucket(a, b, i, buckets)] = true;
            }
            meter.send_classical(sender, buckets as u64, Phase::SparseFilter);
            spent += buckets as u64;
            other.retain(|&i| bitmap[bucket(a, b, i, buckets)]);
        }
    }
    Ok(IntersectResult::Computed(IntersectOutcome { alice, bob }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn run(x: &BitString, y: &BitString, k: usize, seed: u64) -> (IntersectResult, Meter) {
        let mut tape = RandomTape::shared(seed);
        let mut meter = Meter::new();
        let r = sparse_intersect(x, y, k, &mut tape, &mut meter).unwrap();
        (r, meter)
    }

    #[test]
    fn floor_applies_to_small_k() {
        let cfg = SparseConfig::wrap(1);
        assert_eq!(cfg.effective_k(), 8);
        assert_eq!(cfg.buckets, 512);
        assert_eq!(cfg.rounds, 2);
        // worst case 2 * T * B = 2048 fits under the budget
        assert!(2 * cfg.rounds * cfg.buckets <= cfg.threshold() as usize);
    }

    #[test]
    fn worst_case_fits_budget_over_k_range() {
        for k in 1..=4096 {
            let cfg = SparseConfig::wrap(k);
            assert!(
                (2 * cfg.rounds * cfg.buckets) as u64 <= cfg.threshold(),
                "k = {k}: worst case {} vs threshold {}",
                2 * cfg.rounds * cfg.buckets,
                cfg.threshold()
            );
        }
    }

    #[test]
    fn finds_the_overlap() {
        // supports {2,3} and {3,6} (0-indexed) intersect in {3}
        let x = bs("00110000");
        let y = bs("00010010");
        let mut ok = 0;
        for seed in 0..1000 {
            let (r, m) = run(&x, &y, 2, seed);
            assert!(m.ledger.classical_bits <= SparseConfig::wrap(2).threshold());
            if let IntersectResult::Computed(out) = r {
                if out.alice == vec![3] && out.bob == vec![3] {
                    ok += 1;
                }
            }
        }
        assert!(ok >= 990, "ok = {ok}");
    }

    #[test]
    fn empty_side_yields_empty_always() {
        let x = bs("00000000");
        let y = bs("01010101");
        for seed in 0..200 {
            let (r, _) = run(&x, &y, 4, seed);
            match r {
                IntersectResult::Computed(out) => {
                    assert!(out.alice.is_empty());
                    assert!(out.bob.is_empty(), "Alice's empty bitmap clears Bob in round 1");
                }
                IntersectResult::Aborted => panic!("unexpected abort"),
            }
        }
    }

    #[test]
    fn equal_supports_survive_fully() {
        let x = bs("1010100010000000");
        for seed in 0..200 {
            let (r, _) = run(&x, &x, 4, seed);
            match r {
                IntersectResult::Computed(out) => {
                    assert_eq!(out.alice, x.support());
                    assert_eq!(out.bob, x.support());
                }
                IntersectResult::Aborted => panic!("unexpected abort"),
            }
        }
    }

    #[test]
    fn completeness_is_deterministic_exhaustive() {
        // all supports of size <= 3 over n = 10: the true intersection is
        // always contained in both outputs
        let n = 10usize;
        let masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() <= 3).collect();
        let mut seed = 0u64;
        for &mx in &masks {
            for &my in masks.iter().step_by(7) {
                let x = BitString::from_bits((0..n).map(|i| (mx >> i) & 1 == 1).collect());
                let y = BitString::from_bits((0..n).map(|i| (my >> i) & 1 == 1).collect());
                seed += 1;
                let (r, _) = run(&x, &y, 3, seed);
                let truth: Vec<usize> = (0..n).filter(|&i| x.get(i) && y.get(i)).collect();
                match r {
                    IntersectResult::Computed(out) => {
                        for t in &truth {
                            assert!(out.alice.contains(t), "lost true element {t}");
                            assert!(out.bob.contains(t), "lost true element {t}");
                        }
                    }
                    IntersectResult::Aborted => panic!("unexpected abort"),
                }
            }
        }
    }

    #[test]
    fn sparsity_violation_is_input_error() {
        let x = bs("1111");
        let y = bs("0001");
        let mut tape = RandomTape::shared(0);
        assert!(sparse_intersect(&x, &y, 2, &mut tape, &mut Meter::new()).is_err());
    }

    #[test]
    fn shared_bits_metered_per_round() {
        let x = bs("00110000");
        let y = bs("00010010");
        let (_, m) = run(&x, &y, 2, 9);
        let cfg = SparseConfig::wrap(2);
        assert_eq!(m.ledger.shared_random_bits, 128 * cfg.rounds as u64);
    }
}
