//! Distributed statevector simulator.
//!
//! One global pure state over named registers, each owned by Alice or Bob.
//! Local gates check ownership of every register they touch; moving a
//! register between parties is the only communication primitive and is
//! metered by width. Ownership is metadata: a send never changes amplitudes.
//!
//! The representation is a dense complex vector, practical to roughly 20
//! qubits ([`MAX_SIM_QUBITS`]); that is enough for composed instances with
//! n <= 16 (index register plus target plus the inner-protocol message
//! registers). Gates are classical-input-parametrized block-diagonal
//! families (`ControlledXor`) plus the handful of fixed gates the search
//! walk needs; there is no general gate-synthesis layer.

use crate::error::{Error, Result};
use crate::meter::{Meter, Phase};
use crate::party::Party;
use crate::tape::RandomTape;
use num_complex::Complex64;

/// Dense-simulation ceiling in total qubits.
pub const MAX_SIM_QUBITS: u32 = 22;

const NORM_TOL: f64 = 1e-9;
/// Residual squared-mass tolerated when releasing a register that should be |0>.
const FREE_TOL: f64 = 1e-14;

/// Smallest `w` with `2^w >= x`, for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    64 - (x - 1).leading_zeros().min(64)
}

/// Opaque register handle, stable across frees of other registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterId(usize);

#[derive(Debug, Clone, Copy)]
struct RegEntry {
    offset: u32,
    width: u32,
    owner: Party,
}

/// Gate descriptors for local operations.
#[derive(Debug, Clone)]
pub enum Gate {
    /// Bit flip on a one-qubit register.
    PauliX,
    /// Hadamard on a one-qubit register.
    Hadamard,
    /// XOR a constant into a register (classical feed-forward reset).
    XorConst(u64),
    /// Reflection exchanging |0> with the uniform superposition over the
    /// first `m` basis values of the register.
    PrepareUniform(u64),
    /// `2|u><u| - I` where `u` is uniform over the first `m` basis values.
    ReflectUniform(u64),
    /// Block-diagonal controlled family on `[controls..., target]`: the
    /// combined control value `c` (first listed control in the low bits)
    /// XORs `table[c]` into the target register.
    ControlledXor { table: Vec<u64> },
}

#[derive(Debug, Clone)]
pub struct DistState {
    amps: Vec<Complex64>,
    regs: Vec<Option<RegEntry>>,
    total_width: u32,
}

impl Default for DistState {
    fn default() -> Self {
        Self::new()
    }
}

impl DistState {
    /// Empty state (zero qubits, amplitude 1 on the empty configuration).
    pub fn new() -> Self {
        DistState { amps: vec![Complex64::new(1.0, 0.0)], regs: Vec::new(), total_width: 0 }
    }

    pub fn total_width(&self) -> u32 {
        self.total_width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn entry(&self, reg: RegisterId) -> Result<RegEntry> {
        self.regs
            .get(reg.0)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Usage(format!("register {:?} does not exist", reg)))
    }

    pub fn owner_of(&self, reg: RegisterId) -> Result<Party> {
        Ok(self.entry(reg)?.owner)
    }

    pub fn width_of(&self, reg: RegisterId) -> Result<u32> {
        Ok(self.entry(reg)?.width)
    }

    fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn assert_normalized(&self) {
        let n = self.norm_sq();
        assert!((n - 1.0).abs() <= NORM_TOL, "state norm drifted: |amps|^2 = {n}");
    }

    /// Extend the state with a fresh register in basis state `init`.
    /// Allocation is free; the new register occupies the top qubit positions.
    pub fn alloc_register(&mut self, owner: Party, width: u32, init: u64) -> Result<RegisterId> {
        if width == 0 {
            return Err(Error::input("register width must be >= 1"));
        }
        if self.total_width + width > MAX_SIM_QUBITS {
            return Err(Error::Capacity(format!(
                "{} qubits requested but the dense simulator holds at most {MAX_SIM_QUBITS}; \
                 use ledger mode for larger instances",
                self.total_width + width
            )));
        }
        if init >= 1u64 << width {
            return Err(Error::input("initial basis value wider than the register"));
        }
        let old_len = self.amps.len();
        let mut amps = vec![Complex64::default(); old_len << width];
        let base = (init as usize) << self.total_width;
        amps[base..base + old_len].copy_from_slice(&self.amps);
        self.amps = amps;
        let entry = RegEntry { offset: self.total_width, width, owner };
        self.total_width += width;
        self.regs.push(Some(entry));
        self.assert_normalized();
        Ok(RegisterId(self.regs.len() - 1))
    }

    /// Parse a basis string ("010") and allocate a register holding it.
    pub fn alloc_register_str(&mut self, owner: Party, init: &str) -> Result<RegisterId> {
        let width = init.len() as u32;
        let mut v = 0u64;
        for c in init.chars() {
            v = (v << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::input(format!("bad basis character '{c}'"))),
                };
        }
        self.alloc_register(owner, width, v)
    }

    /// Release a register that has been returned to |0>; errors if any
    /// amplitude mass remains on nonzero values (failed uncomputation).
    pub fn free_register(&mut self, reg: RegisterId) -> Result<()> {
        let e = self.entry(reg)?;
        let mask = ((1usize << e.width) - 1) << e.offset;
        let residual: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if residual > FREE_TOL {
            return Err(Error::Usage(format!(
                "register {:?} is not |0> (residual mass {residual:.3e}); uncompute before freeing",
                reg
            )));
        }
        let new_width = self.total_width - e.width;
        let low_mask = (1usize << e.offset) - 1;
        let mut amps = vec![Complex64::default(); 1usize << new_width];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let old_idx = (new_idx & low_mask) | ((new_idx & !low_mask) << e.width);
            *slot = self.amps[old_idx];
        }
        self.amps = amps;
        self.total_width = new_width;
        self.regs[reg.0] = None;
        for entry in self.regs.iter_mut().flatten() {
            if entry.offset > e.offset {
                entry.offset -= e.width;
            }
        }
        // renormalize away the discarded residual
        let n = self.norm_sq().sqrt();
        for a in &mut self.amps {
            *a /= n;
        }
        self.assert_normalized();
        Ok(())
    }

    /// Apply a local gate as `party`; every register in `regs` must belong
    /// to `party`.
    pub fn apply_local(&mut self, party: Party, gate: &Gate, regs: &[RegisterId]) -> Result<()> {
        let entries: Vec<RegEntry> = regs.iter().map(|&r| self.entry(r)).collect::<Result<_>>()?;
        for (reg, e) in regs.iter().zip(&entries) {
            if e.owner != party {
                return Err(Error::Locality(format!(
                    "{party} applied a gate on register {:?} owned by {}",
                    reg, e.owner
                )));
            }
        }
        match gate {
            Gate::PauliX => {
                let e = single_qubit(&entries, "PauliX")?;
                let bit = 1usize << e.offset;
                for idx in 0..self.amps.len() {
                    if idx & bit == 0 {
                        self.amps.swap(idx, idx | bit);
                    }
                }
            }
            Gate::Hadamard => {
                let e = single_qubit(&entries, "Hadamard")?;
                let bit = 1usize << e.offset;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for idx in 0..self.amps.len() {
                    if idx & bit == 0 {
                        let a = self.amps[idx];
                        let b = self.amps[idx | bit];
                        self.amps[idx] = s * (a + b);
                        self.amps[idx | bit] = s * (a - b);
                    }
                }
            }
            Gate::XorConst(c) => {
                let e = one_register(&entries, "XorConst")?;
                if *c >= 1u64 << e.width {
                    return Err(Error::input("XorConst value wider than the register"));
                }
                let shifted = (*c as usize) << e.offset;
                if shifted != 0 {
                    for idx in 0..self.amps.len() {
                        if idx < idx ^ shifted {
                            self.amps.swap(idx, idx ^ shifted);
                        }
                    }
                }
            }
            Gate::PrepareUniform(m) => {
                let e = one_register(&entries, "PrepareUniform")?;
                self.householder_uniform(e, *m)?;
            }
            Gate::ReflectUniform(m) => {
                let e = one_register(&entries, "ReflectUniform")?;
                self.reflect_uniform(e, *m)?;
            }
            Gate::ControlledXor { table } => {
                if entries.len() < 2 {
                    return Err(Error::input("ControlledXor needs [controls..., target]"));
                }
                let target = *entries.last().unwrap();
                let controls = &entries[..entries.len() - 1];
                let ctrl_width: u32 = controls.iter().map(|e| e.width).sum();
                if table.len() != 1usize << ctrl_width {
                    return Err(Error::input(format!(
                        "ControlledXor table has {} entries for {} control bits",
                        table.len(),
                        ctrl_width
                    )));
                }
                if table.iter().any(|&v| v >= 1u64 << target.width) {
                    return Err(Error::input("ControlledXor table value wider than the target"));
                }
                for idx in 0..self.amps.len() {
                    let mut c: u64 = 0;
                    let mut pos = 0u32;
                    for e in controls {
                        let v = (idx >> e.offset) as u64 & ((1u64 << e.width) - 1);
                        c |= v << pos;
                        pos += e.width;
                    }
                    let mask = (table[c as usize] as usize) << target.offset;
                    let other = idx ^ mask;
                    if mask != 0 && idx < other {
                        self.amps.swap(idx, other);
                    }
                }
            }
        }
        self.assert_normalized();
        Ok(())
    }

    /// Reflection mapping |0> to the uniform superposition over `[0, m)` and
    /// back (a Householder reflection through |0> + |u>).
    fn householder_uniform(&mut self, e: RegEntry, m: u64) -> Result<()> {
        let dim = 1u64 << e.width;
        if m < 1 || m > dim {
            return Err(Error::input(format!("PrepareUniform over {m} values in a {dim}-dim register")));
        }
        let amp = 1.0 / (m as f64).sqrt();
        // v = |0> - |u|, U = I - 2 v v^T / |v|^2: swaps |0> and |u>, fixes the complement.
        let v0 = 1.0 - amp;
        let vsq = v0 * v0 + (m - 1) as f64 * amp * amp;
        if vsq < 1e-15 {
            return Ok(()); // m = 1: |u> = |0>
        }
        self.for_register_groups(e, |amps| {
            // <v|psi> with v = |0> - |u>, supported on the first m entries
            let mut dot = v0 * amps[0];
            for slot in amps.iter().take(m as usize).skip(1) {
                dot += -amp * *slot;
            }
            let scale = 2.0 * dot / vsq;
            amps[0] -= scale * v0;
            for slot in amps.iter_mut().take(m as usize).skip(1) {
                *slot += scale * amp;
            }
        });
        Ok(())
    }

    fn reflect_uniform(&mut self, e: RegEntry, m: u64) -> Result<()> {
        let dim = 1u64 << e.width;
        if m < 1 || m > dim {
            return Err(Error::input(format!("ReflectUniform over {m} values in a {dim}-dim register")));
        }
        self.for_register_groups(e, |amps| {
            let mut sum = Complex64::default();
            for slot in amps.iter().take(m as usize) {
                sum += *slot;
            }
            let mean2 = 2.0 * sum / m as f64;
            for slot in amps.iter_mut() {
                *slot = -*slot;
            }
            for slot in amps.iter_mut().take(m as usize) {
                *slot += mean2;
            }
        });
        Ok(())
    }

    /// Run `f` over the 2^width amplitudes of one register for every
    /// configuration of the remaining qubits.
    fn for_register_groups<F: FnMut(&mut [Complex64])>(&mut self, e: RegEntry, mut f: F) {
        let dim = 1usize << e.width;
        let low_mask = (1usize << e.offset) - 1;
        let groups = self.amps.len() >> e.width;
        let mut scratch = vec![Complex64::default(); dim];
        for outer in 0..groups {
            let base = (outer & low_mask) | ((outer & !low_mask) << e.width);
            for v in 0..dim {
                scratch[v] = self.amps[base | (v << e.offset)];
            }
            f(&mut scratch);
            for v in 0..dim {
                self.amps[base | (v << e.offset)] = scratch[v];
            }
        }
    }

    /// Move ownership of `reg` to `to`, metering its width as transferred
    /// qubits. Amplitudes are untouched.
    pub fn send_register(&mut self, reg: RegisterId, to: Party, meter: &mut Meter, phase: Phase) -> Result<()> {
        let e = self.entry(reg)?;
        if e.owner == to {
            return Err(Error::Usage(format!("register {:?} already belongs to {to}", reg)));
        }
        meter.send_qubits(e.owner, e.width as u64, phase);
        self.regs[reg.0].as_mut().unwrap().owner = to;
        Ok(())
    }

    /// Measure a register in the computational basis via the Born rule,
    /// collapsing and renormalizing the state.
    pub fn measure(&mut self, reg: RegisterId, tape: &mut RandomTape) -> Result<u64> {
        let e = self.entry(reg)?;
        let dim = 1usize << e.width;
        let mut probs = vec![0.0f64; dim];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[(idx >> e.offset) & (dim - 1)] += a.norm_sqr();
        }
        let r = tape.draw_f64();
        let mut acc = 0.0;
        let mut outcome = None;
        let mut last_positive = 0;
        for (v, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                last_positive = v;
            }
            acc += p;
            if r < acc {
                outcome = Some(v);
                break;
            }
        }
        // guard against accumulated rounding at r ~ 1
        let outcome = outcome.unwrap_or(last_positive);
        let keep_mass = probs[outcome].max(f64::MIN_POSITIVE);
        let scale = 1.0 / keep_mass.sqrt();
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if (idx >> e.offset) & (dim - 1) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::default();
            }
        }
        self.assert_normalized();
        Ok(outcome as u64)
    }

    /// Probability mass on each basis value of a register (diagnostic).
    pub fn register_distribution(&self, reg: RegisterId) -> Result<Vec<f64>> {
        let e = self.entry(reg)?;
        let dim = 1usize << e.width;
        let mut probs = vec![0.0f64; dim];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[(idx >> e.offset) & (dim - 1)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Largest amplitude difference against another state (diagnostic for
    /// uncomputation and involution checks).
    pub fn max_amplitude_diff(&self, other: &DistState) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn single_qubit(entries: &[RegEntry], gate: &str) -> Result<RegEntry> {
    let e = one_register(entries, gate)?;
    if e.width != 1 {
        return Err(Error::input(format!("{gate} acts on a single qubit")));
    }
    Ok(e)
}

fn one_register(entries: &[RegEntry], gate: &str) -> Result<RegEntry> {
    if entries.len() != 1 {
        return Err(Error::input(format!("{gate} takes exactly one register")));
    }
    Ok(entries[0])
}
