//! Communication metering.
//!
//! Every protocol charges a [`Meter`]. Two qubit columns are kept side by
//! side: `qubits_sim` counts every register transfer the distributed
//! simulator actually performs (index round trips included), while
//! `qubits_claimed` is the accounting column used for scaling checks
//! (2 * qcc_e per coherent query plus one qubit per search iteration for the
//! sqrt(n)-sized overhead bucket). `epr_pairs` exists so that the zero can be
//! asserted; nothing in this crate ever increments it.

use crate::party::Party;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub qubits_sim: u64,
    pub qubits_claimed: u64,
    pub classical_bits: u64,
    pub shared_random_bits: u64,
    pub epr_pairs: u64,
    pub rounds: u64,
}

impl CostLedger {
    /// Field-wise addition; associative and commutative.
    pub fn merge(self, other: CostLedger) -> CostLedger {
        CostLedger {
            qubits_sim: self.qubits_sim + other.qubits_sim,
            qubits_claimed: self.qubits_claimed + other.qubits_claimed,
            classical_bits: self.classical_bits + other.classical_bits,
            shared_random_bits: self.shared_random_bits + other.shared_random_bits,
            epr_pairs: self.epr_pairs + other.epr_pairs,
            rounds: self.rounds + other.rounds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CostKind {
    QubitsSim,
    QubitsClaimed,
    ClassicalBits,
    SharedRandomBits,
}

/// Protocol-phase label carried by every transcript entry, so ledger
/// assertions can be made per phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// Coherent copy of the search index register, both directions.
    IndexSync,
    /// The inner-function subprotocol, coherent or classical.
    GSubprotocol,
    /// Per-iteration overhead bucket of the search walk.
    GroverOverhead,
    /// Iteration-count draws of the search schedule.
    Schedule,
    /// Block-sampling draws.
    Sampling,
    /// Candidate verification (index announcement plus classical evaluation).
    Verify,
    /// Uniform random coordinate checks in the sweep fallback.
    SweepCheck,
    /// The one/two bit threshold checks opening the sparse path.
    F1Check,
    /// Bucket-occupancy bitmaps and hash draws of the sparse protocol.
    SparseFilter,
    /// Weight exchange closing the sparse path.
    WeightExchange,
    /// Seed bits sent in place of shared randomness.
    SeedBroadcast,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::IndexSync => "index-sync",
            Phase::GSubprotocol => "g-subprotocol",
            Phase::GroverOverhead => "grover-overhead",
            Phase::Schedule => "schedule",
            Phase::Sampling => "sampling",
            Phase::Verify => "verify",
            Phase::SweepCheck => "sweep-check",
            Phase::F1Check => "f1-check",
            Phase::SparseFilter => "sparse-filter",
            Phase::WeightExchange => "weight-exchange",
            Phase::SeedBroadcast => "seed-broadcast",
        };
        write!(f, "{s}")
    }
}

/// One metered event. `speaker` is `Some` exactly when the event is a
/// transported message (those drive the round counter); accounting-only
/// entries and shared-tape consumption carry `None`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TranscriptEntry {
    pub speaker: Option<Party>,
    pub kind: CostKind,
    pub width: u64,
    pub phase: Phase,
}

#[derive(Debug, Default)]
pub struct Meter {
    pub ledger: CostLedger,
    transcript: Option<Vec<TranscriptEntry>>,
    last_speaker: Option<Party>,
}

impl Meter {
    pub fn new() -> Self {
        Meter::default()
    }

    /// A meter that also records the message transcript.
    pub fn recording() -> Self {
        Meter { transcript: Some(Vec::new()), ..Meter::default() }
    }

    pub fn transcript(&self) -> Option<&[TranscriptEntry]> {
        self.transcript.as_deref()
    }

    fn push(&mut self, entry: TranscriptEntry) {
        if let Some(t) = self.transcript.as_mut() {
            t.push(entry);
        }
    }

    /// Rounds count speaker alternations across transported messages.
    fn transport(&mut self, from: Party) {
        if let Some(last) = self.last_speaker {
            if last != from {
                self.ledger.rounds += 1;
            }
        }
        self.last_speaker = Some(from);
    }

    /// A register of `width` qubits moves from `from` to the other party.
    pub fn send_qubits(&mut self, from: Party, width: u64, phase: Phase) {
        self.ledger.qubits_sim += width;
        self.transport(from);
        self.push(TranscriptEntry { speaker: Some(from), kind: CostKind::QubitsSim, width, phase });
    }

    /// `width` classical bits sent by `from`.
    pub fn send_classical(&mut self, from: Party, width: u64, phase: Phase) {
        self.ledger.classical_bits += width;
        self.transport(from);
        self.push(TranscriptEntry { speaker: Some(from), kind: CostKind::ClassicalBits, width, phase });
    }

    /// Accounting-only claimed qubits (no transport, no round change).
    pub fn claim_qubits(&mut self, width: u64, phase: Phase) {
        self.ledger.qubits_claimed += width;
        self.push(TranscriptEntry { speaker: None, kind: CostKind::QubitsClaimed, width, phase });
    }

    /// Claimed qubits that stand for a real message in ledger mode.
    pub fn claim_qubits_msg(&mut self, from: Party, width: u64, phase: Phase) {
        self.ledger.qubits_claimed += width;
        self.transport(from);
        self.push(TranscriptEntry { speaker: Some(from), kind: CostKind::QubitsClaimed, width, phase });
    }

    /// Tape consumption; only shared tapes contribute to the ledger column.
    pub fn consume_tape(&mut self, shared: bool, bits: u64, phase: Phase) {
        if shared && bits > 0 {
            self.ledger.shared_random_bits += bits;
            self.push(TranscriptEntry {
                speaker: None,
                kind: CostKind::SharedRandomBits,
                width: bits,
                phase,
            });
        }
    }

    pub fn into_outcome<T>(self, value: T) -> ProtocolOutcome<T> {
        ProtocolOutcome { value, ledger: self.ledger, transcript: self.transcript.unwrap_or_default() }
    }
}

/// Result payload of a protocol run together with its costs.
#[derive(Debug)]
pub struct ProtocolOutcome<T> {
    pub value: T,
    pub ledger: CostLedger,
    pub transcript: Vec<TranscriptEntry>,
}

impl<T> ProtocolOutcome<T> {
    /// Ledger totals recomputed from the transcript; equality with the stored
    /// ledger is an invariant whenever the transcript was recorded.
    pub fn totals_from_transcript(&self) -> CostLedger {
        let mut l = CostLedger::default();
        let mut last: Option<Party> = None;
        for e in &self.transcript {
            match e.kind {
                CostKind::QubitsSim => l.qubits_sim += e.width,
                CostKind::QubitsClaimed => l.qubits_claimed += e.width,
                CostKind::ClassicalBits => l.classical_bits += e.width,
                CostKind::SharedRandomBits => l.shared_random_bits += e.width,
            }
            if let Some(s) = e.speaker {
                if let Some(prev) = last {
                    if prev != s {
                        l.rounds += 1;
                    }
                }
                last = Some(s);
            }
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rounds_count_alternations() {
        let mut m = Meter::new();
        m.send_qubits(Party::Alice, 3, Phase::IndexSync);
        m.send_qubits(Party::Alice, 1, Phase::GSubprotocol);
        m.send_qubits(Party::Bob, 1, Phase::GSubprotocol);
        m.send_classical(Party::Alice, 2, Phase::Verify);
        assert_eq!(m.ledger.rounds, 2);
        assert_eq!(m.ledger.qubits_sim, 5);
        assert_eq!(m.ledger.classical_bits, 2);
    }

    #[test]
    fn transcript_totals_match_ledger() {
        let mut m = Meter::recording();
        m.send_qubits(Party::Alice, 4, Phase::IndexSync);
        m.claim_qubits(2, Phase::GSubprotocol);
        m.send_classical(Party::Bob, 7, Phase::Verify);
        m.consume_tape(true, 13, Phase::Schedule);
        m.consume_tape(false, 999, Phase::Schedule);
        let out = m.into_outcome(());
        assert_eq!(out.totals_from_transcript(), out.ledger);
        assert_eq!(out.ledger.shared_random_bits, 13);
        assert_eq!(out.ledger.epr_pairs, 0);
    }

    fn ledger_strategy() -> impl Strategy<Value = CostLedger> {
        (0u64..1000, 0u64..1000, 0u64..1000, 0u64..1000, 0u64..10)
            .prop_map(|(a, b, c, d, r)| CostLedger {
                qubits_sim: a,
                qubits_claimed: b,
                classical_bits: c,
                shared_random_bits: d,
                epr_pairs: 0,
                rounds: r,
            })
    }

    proptest! {
        #[test]
        fn merge_is_commutative(a in ledger_strategy(), b in ledger_strategy()) {
            prop_assert_eq!(a.merge(b), b.merge(a));
        }

        #[test]
        fn merge_is_associative(a in ledger_strategy(), b in ledger_strategy(), c in ledger_strategy()) {
            prop_assert_eq!(a.merge(b).merge(c), a.merge(b.merge(c)));
        }
    }
}
