//! Inner two-party functions `G: {0,1}^j x {0,1}^k -> {0,1}` and their exact
//! protocols, both replayed classically and executed coherently as the
//! bit-oracle `|i, z> -> |i, z xor G(X_i, Y_i)>`.
//!
//! Cost conventions:
//! * `qcc_e` is the one-way compute cost of the exact protocol. A coherent
//!   query costs `2 * qcc_e` claimed qubits (compute, then uncompute).
//! * `classical_cost` is the bits needed for a classical evaluation after
//!   which *both* parties know the value (the generic protocol already ends
//!   with Bob announcing the result; the derived-bit protocol needs Alice to
//!   echo one bit back).

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::meter::{Meter, Phase};
use crate::party::Party;
use crate::qsim::{ceil_log2, DistState, Gate, RegisterId};

/// Exact evaluation protocol for an inner function.
///
/// `Generic` is "Alice sends her j input bits; Bob computes G and sends the
/// one-bit result". `DerivedBit` is the one-message specialization available
/// for the 1x1-bit AND/XOR family (and their negations): Bob sends his input
/// bit and Alice finishes locally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactProtocol {
    Generic { j: usize },
    DerivedBit,
}

impl ExactProtocol {
    /// One-way compute cost in qubits.
    pub fn qcc_e(&self) -> u64 {
        match self {
            ExactProtocol::Generic { j } => *j as u64 + 1,
            ExactProtocol::DerivedBit => 1,
        }
    }

    /// Classical bits until both parties know the value.
    pub fn classical_cost(&self) -> u64 {
        match self {
            ExactProtocol::Generic { j } => *j as u64 + 1,
            ExactProtocol::DerivedBit => 2,
        }
    }

    /// Compute-direction messages as (speaker, width) pairs.
    pub fn compute_rounds(&self, _k: usize) -> Vec<(Party, u64)> {
        match self {
            ExactProtocol::Generic { j } => vec![(Party::Alice, *j as u64), (Party::Bob, 1)],
            ExactProtocol::DerivedBit => vec![(Party::Bob, 1)],
        }
    }
}

/// An inner function with its truth table and exact protocol.
///
/// The table is indexed by `(a << k) | b` where `a` and `b` are the
/// big-endian values of Alice's and Bob's inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerFunction {
    j: usize,
    k: usize,
    table: Vec<bool>,
    exact: ExactProtocol,
}

/// Truth tables over j = k = 1 whose value Alice can finish from Bob's raw
/// bit: AND, XOR and their negations (table values 8, 6, 7, 9).
fn derived_bit_table(table: &[bool]) -> bool {
    if table.len() != 4 {
        return false;
    }
    let v = table.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i));
    // XOR = 6, NAND = 7, AND = 8, XNOR = 9
    matches!(v, 6..=9)
}

impl InnerFunction {
    pub fn from_table(j: usize, k: usize, table: Vec<bool>) -> Result<Self> {
        if j == 0 || k == 0 || j + k > 16 {
            return Err(Error::input(format!("unsupported input widths j={j}, k={k}")));
        }
        if table.len() != 1 << (j + k) {
            return Err(Error::input(format!(
                "truth table has {} entries, expected {}",
                table.len(),
                1 << (j + k)
            )));
        }
        let exact = if j == 1 && k == 1 && derived_bit_table(&table) {
            ExactProtocol::DerivedBit
        } else {
            ExactProtocol::Generic { j }
        };
        Ok(InnerFunction { j, k, table, exact })
    }

    pub fn and2() -> Self {
        Self::from_table(1, 1, vec![false, false, false, true]).expect("valid")
    }

    pub fn xor2() -> Self {
        Self::from_table(1, 1, vec![false, true, true, false]).expect("valid")
    }

    /// Parse `and2 | xor2 | tt:<j>:<k>:<hex>` where the hex digits encode the
    /// table as an integer whose bit `(a << k) | b` is `G(a, b)`.
    pub fn from_descriptor(desc: &str) -> Result<Self> {
        match desc {
            "and2" => Ok(Self::and2()),
            "xor2" => Ok(Self::xor2()),
            _ => {
                let rest = desc
                    .strip_prefix("tt:")
                    .ok_or_else(|| Error::input(format!("unknown inner-function descriptor \"{desc}\"")))?;
                let parts: Vec<&str> = rest.splitn(3, ':').collect();
                if parts.len() != 3 {
                    return Err(Error::input(format!("expected tt:<j>:<k>:<hex>, got \"{desc}\"")));
                }
                let j: usize = parts[0].parse().map_err(|_| Error::input("bad j in tt descriptor"))?;
                let k: usize = parts[1].parse().map_err(|_| Error::input("bad k in tt descriptor"))?;
                if j == 0 || k == 0 || j + k > 16 {
                    return Err(Error::input(format!("unsupported input widths j={j}, k={k}")));
                }
                let bits = 1usize << (j + k);
                let hex = parts[2];
                let expect_digits = bits.div_ceil(4);
                if hex.len() != expect_digits {
                    return Err(Error::input(format!(
                        "tt descriptor needs {expect_digits} hex digits for j={j}, k={k}"
                    )));
                }
                let mut table = vec![false; bits];
                for (pos, c) in hex.chars().rev().enumerate() {
                    let nib = c
                        .to_digit(16)
                        .ok_or_else(|| Error::input(format!("bad hex digit '{c}'")))?;
                    for b in 0..4 {
                        let idx = pos * 4 + b;
                        if idx < bits {
                            table[idx] = (nib >> b) & 1 == 1;
                        }
                    }
                }
                Self::from_table(j, k, table)
            }
        }
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn exact(&self) -> ExactProtocol {
        self.exact
    }

    /// Total message width of the exact protocol, one way.
    pub fn qcc_e(&self) -> u64 {
        self.exact.qcc_e()
    }

    pub fn eval_values(&self, a: u64, b: u64) -> bool {
        self.table[((a << self.k) | b) as usize]
    }

    pub fn eval(&self, a: &BitString, b: &BitString) -> bool {
        debug_assert_eq!(a.len(), self.j);
        debug_assert_eq!(b.len(), self.k);
        self.eval_values(a.value(), b.value())
    }

    /// `not G`: same protocol shape with the output negated in the final
    /// round, so the exact cost is unchanged.
    pub fn negated(&self) -> InnerFunction {
        InnerFunction {
            j: self.j,
            k: self.k,
            table: self.table.iter().map(|b| !b).collect(),
            exact: self.exact,
        }
    }

    /// Input pairs (a, b) with the given output value.
    pub fn preimages(&self, value: bool) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for a in 0..1u64 << self.j {
            for b in 0..1u64 << self.k {
                if self.eval_values(a, b) == value {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Classical replay of the exact protocol on one input pair: returns the
    /// output together with the compute-direction transcript widths. In the
    /// generic shape the first message carries `a` and Bob announces the
    /// result; in the derived-bit shape the single message carries `b` and
    /// Alice finishes from her own input.
    pub fn replay(&self, a: &BitString, b: &BitString) -> (bool, Vec<(Party, u64)>) {
        let rounds = self.exact.compute_rounds(self.k);
        let value = self.eval_values(a.value(), b.value());
        (value, rounds)
    }
}

/// Classical evaluation of `G(X_i, Y_i)` inside a run: the candidate index is
/// announced (`ceil(log2 n)` bits), then the exact protocol runs classically
/// so that both parties learn the value. Excluded coordinates are rejected
/// right after the announcement, at no further cost.
pub fn classical_eval_g(inst: &Instance, i: usize, meter: &mut Meter) -> Result<bool> {
    let n = inst.n();
    if i >= n {
        return Err(Error::input(format!("coordinate {i} out of range for n={n}")));
    }
    meter.send_classical(Party::Alice, ceil_log2(n as u64) as u64, Phase::Verify);
    if inst.is_excluded(i) {
        return Ok(false);
    }
    let g = inst.g();
    match g.exact() {
        ExactProtocol::Generic { j } => {
            meter.send_classical(Party::Alice, j as u64, Phase::Verify);
            meter.send_classical(Party::Bob, 1, Phase::Verify);
        }
        ExactProtocol::DerivedBit => {
            meter.send_classical(Party::Bob, 1, Phase::Verify);
            meter.send_classical(Party::Alice, 1, Phase::Verify);
        }
    }
    Ok(g.eval(inst.x(i), inst.y(i)))
}

/// Coherent oracle query: on every basis state `|i, z>` of the index and
/// target registers, the target becomes `z xor G(X_i, Y_i)`; excluded and
/// out-of-range indices act as unmarked. All ancilla registers are allocated,
/// used, uncomputed and released inside the call.
///
/// Metering: `2*ceil(log2 n)` simulated qubits for the index round trip plus
/// two times the protocol's message widths, and `2*qcc_e(G)` claimed qubits.
pub fn apply_oracle_og(
    state: &mut DistState,
    inst: &Instance,
    index_reg: RegisterId,
    target_reg: RegisterId,
    meter: &mut Meter,
) -> Result<()> {
    let n = inst.n() as u64;
    let w = state.width_of(index_reg)?;
    if state.owner_of(index_reg)? != Party::Alice || state.owner_of(target_reg)? != Party::Alice {
        return Err(Error::Usage("oracle registers must start at Alice".into()));
    }
    if state.width_of(target_reg)? != 1 {
        return Err(Error::input("oracle target register must be one qubit"));
    }
    if w < ceil_log2(n).max(1) {
        return Err(Error::input("index register too narrow for the instance"));
    }
    let g = inst.g();

    // Alice mirrors her index register and parks the copy at Bob for the
    // duration of the query.
    let m_idx = state.alloc_register(Party::Alice, w, 0)?;
    let copy_table: Vec<u64> = (0..1u64 << w).collect();
    state.apply_local(Party::Alice, &Gate::ControlledXor { table: copy_table.clone() }, &[index_reg, m_idx])?;
    state.send_register(m_idx, Party::Bob, meter, Phase::IndexSync)?;

    let alive = |i: u64| i < n && !inst.is_excluded(i as usize);

    match g.exact() {
        ExactProtocol::DerivedBit => {
            // Bob writes his raw bit, Alice finishes against her own input.
            let r = state.alloc_register(Party::Bob, 1, 0)?;
            let write: Vec<u64> = (0..1u64 << w)
                .map(|i| if i < n { inst.y(i as usize).value() } else { 0 })
                .collect();
            state.apply_local(Party::Bob, &Gate::ControlledXor { table: write.clone() }, &[m_idx, r])?;
            state.send_register(r, Party::Alice, meter, Phase::GSubprotocol)?;

            let finish: Vec<u64> = (0..1u64 << (w + 1))
                .map(|c| {
                    let i = c & ((1 << w) - 1);
                    let rb = c >> w;
                    (alive(i) && g.eval_values(inst.x(i as usize).value(), rb)) as u64
                })
                .collect();
            state.apply_local(Party::Alice, &Gate::ControlledXor { table: finish }, &[index_reg, r, target_reg])?;

            state.send_register(r, Party::Bob, meter, Phase::GSubprotocol)?;
            state.apply_local(Party::Bob, &Gate::ControlledXor { table: write }, &[m_idx, r])?;
            state.free_register(r)?;
        }
        ExactProtocol::Generic { j } => {
            // Alice forwards her input word, Bob computes the masked result,
            // one bit travels back, and everything is uncomputed in reverse.
            let m_a = state.alloc_register(Party::Alice, j as u32, 0)?;
            let write_x: Vec<u64> = (0..1u64 << w)
                .map(|i| if i < n { inst.x(i as usize).value() } else { 0 })
                .collect();
            state.apply_local(Party::Alice, &Gate::ControlledXor { table: write_x.clone() }, &[index_reg, m_a])?;
            state.send_register(m_a, Party::Bob, meter, Phase::GSubprotocol)?;

            let r = state.alloc_register(Party::Bob, 1, 0)?;
            let result: Vec<u64> = (0..1u64 << (w + j as u32))
                .map(|c| {
                    let i = c & ((1 << w) - 1);
                    let a = c >> w;
                    (alive(i) && g.eval_values(a, inst.y(i as usize).value())) as u64
                })
                .collect();
            state.apply_local(Party::Bob, &Gate::ControlledXor { table: result.clone() }, &[m_idx, m_a, r])?;
            state.send_register(r, Party::Alice, meter, Phase::GSubprotocol)?;

            state.apply_local(Party::Alice, &Gate::ControlledXor { table: vec![0, 1] }, &[r, target_reg])?;

            state.send_register(r, Party::Bob, meter, Phase::GSubprotocol)?;
            state.apply_local(Party::Bob, &Gate::ControlledXor { table: result }, &[m_idx, m_a, r])?;
            state.free_register(r)?;
            state.send_register(m_a, Party::Alice, meter, Phase::GSubprotocol)?;
            state.apply_local(Party::Alice, &Gate::ControlledXor { table: write_x }, &[index_reg, m_a])?;
            state.free_register(m_a)?;
        }
    }

    state.send_register(m_idx, Party::Alice, meter, Phase::IndexSync)?;
    state.apply_local(Party::Alice, &Gate::ControlledXor { table: copy_table }, &[index_reg, m_idx])?;
    state.free_register(m_idx)?;

    meter.claim_qubits(2 * g.qcc_e(), Phase::GSubprotocol);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and2_uses_derived_bit() {
        let g = InnerFunction::and2();
        assert_eq!(g.exact(), ExactProtocol::DerivedBit);
        assert_eq!(g.qcc_e(), 1);
        // a full coherent query costs 2 claimed qubits
        assert_eq!(2 * g.qcc_e(), 2);
        assert_eq!(g.exact().classical_cost(), 2);
    }

    #[test]
    fn negations_of_special_tables_keep_cost() {
        for g in [InnerFunction::and2(), InnerFunction::xor2()] {
            assert_eq!(g.negated().qcc_e(), g.qcc_e());
            assert_eq!(g.negated().exact(), ExactProtocol::DerivedBit);
        }
        let proj = InnerFunction::from_table(1, 1, vec![false, true, false, true]).unwrap();
        assert_eq!(proj.exact(), ExactProtocol::Generic { j: 1 });
        assert_eq!(proj.negated().qcc_e(), proj.qcc_e());
    }

    #[test]
    fn generic_protocol_cost_is_j_plus_one() {
        let g = InnerFunction::from_table(3, 2, vec![false; 32]).unwrap();
        assert_eq!(g.qcc_e(), 4);
        assert_eq!(g.exact().classical_cost(), 4);
    }

    #[test]
    fn replay_matches_table_exhaustively() {
        // every protocol shape, all inputs, j + k <= 8
        let mut state = 0xabcdu64;
        for (j, k) in [(1, 1), (2, 2), (3, 2), (1, 3), (4, 4)] {
            for _ in 0..20 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(99);
                let table: Vec<bool> = (0..1usize << (j + k)).map(|t| (state >> (t % 61)) & 1 == 1).collect();
                let g = InnerFunction::from_table(j, k, table).unwrap();
                for a in 0..1u64 << j {
                    for b in 0..1u64 << k {
                        let (out, rounds) = g.replay(&BitString::from_value(a, j), &BitString::from_value(b, k));
                        assert_eq!(out, g.eval_values(a, b));
                        let total: u64 = rounds.iter().map(|(_, w)| w).sum();
                        assert_eq!(total, g.qcc_e());
                    }
                }
            }
        }
    }

    #[test]
    fn descriptor_roundtrip() {
        assert_eq!(InnerFunction::from_descriptor("tt:1:1:8").unwrap(), InnerFunction::and2());
        assert_eq!(InnerFunction::from_descriptor("tt:1:1:6").unwrap(), InnerFunction::xor2());
        let g = InnerFunction::from_descriptor("tt:2:1:a5").unwrap();
        assert_eq!(g.j(), 2);
        assert_eq!(g.k(), 1);
        // 0xa5 = 1010_0101: bit (a<<1)|b
        assert!(g.eval_values(0, 0));
        assert!(!g.eval_values(0, 1));
        assert!(g.eval_values(1, 0));
        assert!(!g.eval_values(1, 1));
        assert!(InnerFunction::from_descriptor("tt:1:1:zz").is_err());
        assert!(InnerFunction::from_descriptor("tt:1:1:123").is_err());
    }

    #[test]
    fn preimages_partition_inputs() {
        let g = InnerFunction::xor2();
        assert_eq!(g.preimages(true).len(), 2);
        assert_eq!(g.preimages(false).len(), 2);
    }
}
