//! Seeded random tapes.
//!
//! A tape is a counter-based bit stream: block `i` of 64 bits is the
//! splitmix64 finalizer applied to `seed + (i+1)*GOLDEN`. Bits are addressed
//! purely by position, so two tapes constructed from the same seed return
//! identical bits for identical draw positions regardless of which party
//! reads them. Derived seeds (`derive_seed`) give statistically independent
//! child streams for parallel trials.

use crate::bits::BitString;
use crate::meter::{Meter, Phase};
use crate::party::Party;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Stable child-seed derivation; `label` distinguishes streams under one master seed.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    mix(seed ^ mix(label.wrapping_mul(GOLDEN) ^ 0xA076_1D64_78BD_642F))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TapeKind {
    /// Visible to both parties; consumption is metered as shared randomness.
    Shared,
    /// Local to one party.
    Private(Party),
}

#[derive(Debug, Clone)]
pub struct RandomTape {
    seed: u64,
    kind: TapeKind,
    bits_drawn: u64,
    pos: u64,
}

impl RandomTape {
    pub fn shared(seed: u64) -> Self {
        RandomTape { seed, kind: TapeKind::Shared, bits_drawn: 0, pos: 0 }
    }

    pub fn private(party: Party, seed: u64) -> Self {
        RandomTape { seed, kind: TapeKind::Private(party), bits_drawn: 0, pos: 0 }
    }

    pub fn kind(&self) -> TapeKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total bits consumed so far.
    pub fn bits_drawn(&self) -> u64 {
        self.bits_drawn
    }

    fn block(&self, index: u64) -> u64 {
        mix(self.seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    pub fn draw_bit(&mut self) -> bool {
        let b = (self.block(self.pos / 64) >> (self.pos % 64)) & 1 == 1;
        self.pos += 1;
        self.bits_drawn += 1;
        b
    }

    pub fn draw_bits(&mut self, m: usize) -> BitString {
        BitString::from_bits((0..m).map(|_| self.draw_bit()).collect())
    }

    /// Draw `width <= 64` bits as an unsigned value (low bit drawn first).
    pub fn draw_value(&mut self, width: u32) -> u64 {
        debug_assert!(width <= 64);
        let mut v = 0u64;
        for i in 0..width {
            v |= (self.draw_bit() as u64) << i;
        }
        v
    }

    /// Uniform draw in `[0, bound)` by rejection sampling; `bound >= 1`.
    /// `bound == 1` consumes no bits.
    pub fn draw_below(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1, "draw_below requires a positive bound");
        if bound == 1 {
            return 0;
        }
        let width = 64 - (bound - 1).leading_zeros();
        loop {
            let v = self.draw_value(width);
            if v < bound {
                return v;
            }
        }
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn draw_f64(&mut self) -> f64 {
        self.draw_value(53) as f64 / (1u64 << 53) as f64
    }
}

/// The randomness bundle a protocol run owns: the public tape both parties
/// read, the tape that resolves measurement outcomes, and Alice's private
/// tape (used when shared randomness is replaced by sent seed bits).
#[derive(Debug, Clone)]
pub struct ProtocolRng {
    pub shared: RandomTape,
    pub measurement: RandomTape,
    pub alice_private: RandomTape,
}

impl ProtocolRng {
    pub fn from_seed(seed: u64) -> Self {
        ProtocolRng {
            shared: RandomTape::shared(derive_seed(seed, 1)),
            measurement: RandomTape::private(Party::Alice, derive_seed(seed, 2)),
            alice_private: RandomTape::private(Party::Alice, derive_seed(seed, 3)),
        }
    }

    /// Shared-tape draw in `[0, bound)` with its bit cost metered.
    pub fn shared_below(&mut self, meter: &mut Meter, phase: Phase, bound: u64) -> u64 {
        metered_below(&mut self.shared, meter, phase, bound)
    }
}

/// Draw from a tape and meter the consumed bits (counted as shared randomness
/// only when the tape is a shared one).
pub fn metered_below(tape: &mut RandomTape, meter: &mut Meter, phase: Phase, bound: u64) -> u64 {
    let before = tape.bits_drawn();
    let v = tape.draw_below(bound);
    meter.consume_tape(tape.kind() == TapeKind::Shared, tape.bits_drawn() - before, phase);
    v
}

/// Draw a full word from a tape with metering.
pub fn metered_word(tape: &mut RandomTape, meter: &mut Meter, phase: Phase) -> u64 {
    let before = tape.bits_drawn();
    let v = tape.draw_value(64);
    meter.consume_tape(tape.kind() == TapeKind::Shared, tape.bits_drawn() - before, phase);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_draw_leaves_counter() {
        let mut t = RandomTape::shared(7);
        let s = t.draw_bits(0);
        assert_eq!(s.len(), 0);
        assert_eq!(t.bits_drawn(), 0);
    }

    #[test]
    fn same_seed_same_position_same_bits() {
        let mut a = RandomTape::shared(42);
        let mut b = RandomTape::shared(42);
        assert_eq!(a.draw_bits(200), b.draw_bits(200));
    }

    #[test]
    fn counter_tracks_two_word_draws() {
        let mut t = RandomTape::shared(3);
        let x = t.draw_value(64);
        let y = t.draw_value(64);
        assert_ne!(x, y);
        assert_eq!(t.bits_drawn(), 128);
    }

    #[test]
    fn draw_below_in_range() {
        let mut t = RandomTape::shared(11);
        for bound in 1..40u64 {
            for _ in 0..50 {
                assert!(t.draw_below(bound) < bound);
            }
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let s = 99;
        assert_ne!(derive_seed(s, 0), derive_seed(s, 1));
        assert_ne!(derive_seed(s, 1), derive_seed(s, 2));
    }

    #[test]
    fn f64_is_unit_interval() {
        let mut t = RandomTape::shared(5);
        for _ in 0..100 {
            let v = t.draw_f64();
            assert!((0.0..1.0).contains(&v));
        }
    }
}
