//! Composed-problem instances: an inner function `G` together with Alice's
//! private list `X` and Bob's private list `Y`, plus the set of coordinates
//! currently excluded from play.
//!
//! The input data is shared behind an `Arc`, so views that only change the
//! exclusion set (or flip to `not G`) are cheap.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::symmetric::SymmetricSpec;
use crate::tape::RandomTape;
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug)]
struct InstanceCore {
    g: InnerFunction,
    x: Vec<BitString>,
    y: Vec<BitString>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    core: Arc<InstanceCore>,
    excluded: BTreeSet<usize>,
}

impl Instance {
    pub fn new(g: InnerFunction, x: Vec<BitString>, y: Vec<BitString>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::input(format!("|X| = {} but |Y| = {}", x.len(), y.len())));
        }
        if let Some(bad) = x.iter().find(|e| e.len() != g.j()) {
            return Err(Error::input(format!("X entry \"{bad}\" is not {} bits wide", g.j())));
        }
        if let Some(bad) = y.iter().find(|e| e.len() != g.k()) {
            return Err(Error::input(format!("Y entry \"{bad}\" is not {} bits wide", g.k())));
        }
        Ok(Instance { core: Arc::new(InstanceCore { g, x, y }), excluded: BTreeSet::new() })
    }

    /// Instance over single-bit coordinates: `X_i = x_i`, `Y_i = y_i`.
    pub fn from_single_bits(g: InnerFunction, x: &BitString, y: &BitString) -> Result<Self> {
        if g.j() != 1 || g.k() != 1 {
            return Err(Error::input("single-bit construction needs j = k = 1"));
        }
        let xs = x.iter().map(|b| BitString::from_bits(vec![b])).collect();
        let ys = y.iter().map(|b| BitString::from_bits(vec![b])).collect();
        Self::new(g, xs, ys)
    }

    /// Draw an instance whose per-coordinate values of `G` equal `profile`,
    /// picking uniformly among the matching input pairs.
    pub fn with_profile(g: InnerFunction, profile: &[bool], tape: &mut RandomTape) -> Result<Self> {
        let ones = g.preimages(true);
        let zeros = g.preimages(false);
        if profile.iter().any(|&v| v) && ones.is_empty() {
            return Err(Error::input("G is constant 0 but the profile needs a marked coordinate"));
        }
        if profile.iter().any(|&v| !v) && zeros.is_empty() {
            return Err(Error::input("G is constant 1 but the profile needs an unmarked coordinate"));
        }
        let mut x = Vec::with_capacity(profile.len());
        let mut y = Vec::with_capacity(profile.len());
        for &v in profile {
            let pool = if v { &ones } else { &zeros };
            let (a, b) = pool[tape.draw_below(pool.len() as u64) as usize];
            x.push(BitString::from_value(a, g.j()));
            y.push(BitString::from_value(b, g.k()));
        }
        Self::new(g, x, y)
    }

    pub fn n(&self) -> usize {
        self.core.x.len()
    }

    pub fn g(&self) -> &InnerFunction {
        &self.core.g
    }

    pub fn x(&self, i: usize) -> &BitString {
        &self.core.x[i]
    }

    pub fn y(&self, i: usize) -> &BitString {
        &self.core.y[i]
    }

    pub fn excluded(&self) -> &BTreeSet<usize> {
        &self.excluded
    }

    pub fn is_excluded(&self, i: usize) -> bool {
        self.excluded.contains(&i)
    }

    /// Raw `G(X_i, Y_i)`, ignoring exclusion.
    pub fn eval_g(&self, i: usize) -> bool {
        self.core.g.eval(&self.core.x[i], &self.core.y[i])
    }

    /// Marked means in play and satisfying `G`.
    pub fn is_marked(&self, i: usize) -> bool {
        !self.is_excluded(i) && self.eval_g(i)
    }

    /// The reference marked set `M = {i not excluded : G(X_i, Y_i) = 1}`.
    pub fn marked_coords(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_marked(i)).collect()
    }

    pub fn marked_count(&self) -> usize {
        (0..self.n()).filter(|&i| self.is_marked(i)).count()
    }

    /// Same data with more coordinates excluded.
    pub fn exclude<I: IntoIterator<Item = usize>>(&self, extra: I) -> Instance {
        let mut excluded = self.excluded.clone();
        excluded.extend(extra);
        Instance { core: Arc::clone(&self.core), excluded }
    }

    /// Same data with `G` replaced by its negation.
    pub fn with_negated_g(&self) -> Instance {
        let core = InstanceCore {
            g: self.core.g.negated(),
            x: self.core.x.clone(),
            y: self.core.y.clone(),
        };
        Instance { core: Arc::new(core), excluded: self.excluded.clone() }
    }

    /// Materialize the sub-instance on the listed coordinates (in order);
    /// exclusions carry over through the index map.
    pub fn subsample(&self, chosen: &[usize]) -> Instance {
        let core = InstanceCore {
            g: self.core.g.clone(),
            x: chosen.iter().map(|&i| self.core.x[i].clone()).collect(),
            y: chosen.iter().map(|&i| self.core.y[i].clone()).collect(),
        };
        let excluded = chosen
            .iter()
            .enumerate()
            .filter_map(|(si, &i)| self.excluded.contains(&i).then_some(si))
            .collect();
        Instance { core: Arc::new(core), excluded }
    }
}

/// Ground-truth oracle for the composed function: `D(|z|)` with
/// `z_i = G(X_i, Y_i)` over all coordinates (exclusions do not apply here).
pub fn eval_composed(f: &SymmetricSpec, inst: &Instance) -> Result<bool> {
    if f.n() != inst.n() {
        return Err(Error::input(format!(
            "outer arity {} does not match instance size {}",
            f.n(),
            inst.n()
        )));
    }
    let weight = (0..inst.n()).filter(|&i| inst.eval_g(i)).count();
    Ok(f.value_at(weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn and_instance(x: &str, y: &str) -> Instance {
        Instance::from_single_bits(InnerFunction::and2(), &bs(x), &bs(y)).unwrap()
    }

    #[test]
    fn eval_composed_examples() {
        let or4 = SymmetricSpec::or(4);
        let inst = and_instance("0101", "0011");
        assert!(eval_composed(&or4, &inst).unwrap());

        let const0 = SymmetricSpec::constant(4, false);
        assert!(!eval_composed(&const0, &inst).unwrap());

        let parity4 = SymmetricSpec::parity(4);
        let inst = Instance::from_single_bits(InnerFunction::xor2(), &bs("1100"), &bs("1010")).unwrap();
        // z = (0, 1, 1, 0)
        assert!(!eval_composed(&parity4, &inst).unwrap());
    }

    #[test]
    fn arity_mismatch_is_input_error() {
        let or8 = SymmetricSpec::or(8);
        let inst = and_instance("0101", "0011");
        assert!(eval_composed(&or8, &inst).is_err());
        assert!(Instance::from_single_bits(InnerFunction::and2(), &bs("01"), &bs("011")).is_err());
    }

    #[test]
    fn symmetric_under_coordinate_permutation() {
        // exhaustive over z-profiles for n <= 6, a few rotations each
        for n in 1..=6usize {
            let f = SymmetricSpec::parity(n);
            for z in 0..1u32 << n {
                let profile: Vec<bool> = (0..n).map(|i| (z >> i) & 1 == 1).collect();
                let mut tape = RandomTape::shared(z as u64);
                let inst = Instance::with_profile(InnerFunction::and2(), &profile, &mut tape).unwrap();
                let base = eval_composed(&f, &inst).unwrap();
                for shift in 1..n {
                    let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
                    let px: Vec<BitString> = perm.iter().map(|&i| inst.x(i).clone()).collect();
                    let py: Vec<BitString> = perm.iter().map(|&i| inst.y(i).clone()).collect();
                    let permuted = Instance::new(InnerFunction::and2(), px, py).unwrap();
                    assert_eq!(eval_composed(&f, &permuted).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn marked_set_respects_exclusion() {
        let inst = and_instance("1101", "1011");
        assert_eq!(inst.marked_coords(), vec![0, 3]);
        let view = inst.exclude([0]);
        assert_eq!(view.marked_coords(), vec![3]);
        assert!(view.eval_g(0), "raw evaluation ignores exclusion");
        assert_eq!(inst.marked_coords(), vec![0, 3], "original unchanged");
    }

    #[test]
    fn subsample_remaps_exclusions() {
        let inst = and_instance("1111", "1111").exclude([2]);
        let sub = inst.subsample(&[2, 0]);
        assert_eq!(sub.n(), 2);
        assert!(sub.is_excluded(0));
        assert!(!sub.is_excluded(1));
        assert_eq!(sub.marked_coords(), vec![1]);
    }

    #[test]
    fn profile_instances_match_request() {
        let mut tape = RandomTape::shared(7);
        for g in [InnerFunction::and2(), InnerFunction::xor2()] {
            let profile = [true, false, true, false, false];
            let inst = Instance::with_profile(g, &profile, &mut tape).unwrap();
            for (i, &want) in profile.iter().enumerate() {
                assert_eq!(inst.eval_g(i), want);
            }
        }
    }
}
