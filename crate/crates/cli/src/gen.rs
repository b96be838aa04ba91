//! Seeded instance generators shared by sweeps and the verifier.

use symqcc_core::bits::BitString;
use symqcc_core::inner::InnerFunction;
use symqcc_core::instance::Instance;
use symqcc_core::tape::RandomTape;

/// Instance with exactly `marked` marked coordinates at tape-chosen
/// positions, unmarked elsewhere.
pub fn instance_with_marked_count(g: &InnerFunction, n: usize, marked: usize, tape: &mut RandomTape) -> Instance {
    assert!(marked <= n);
    let mut profile = vec![false; n];
    let mut left = marked;
    let mut pool: Vec<usize> = (0..n).collect();
    while left > 0 {
        let pick = tape.draw_below(pool.len() as u64) as usize;
        profile[pool.swap_remove(pick)] = true;
        left -= 1;
    }
    Instance::with_profile(g.clone(), &profile, tape).expect("profile is realizable")
}

/// Instance whose marked set is exactly `positions`.
pub fn instance_with_marked_at(g: &InnerFunction, n: usize, positions: &[usize], tape: &mut RandomTape) -> Instance {
    let mut profile = vec![false; n];
    for &p in positions {
        profile[p] = true;
    }
    Instance::with_profile(g.clone(), &profile, tape).expect("profile is realizable")
}

/// Pair of weight-`k` supports overlapping in a tape-chosen number of
/// coordinates (uniform in `0..=k`).
pub fn sparse_pair(n: usize, k: usize, tape: &mut RandomTape) -> (BitString, BitString) {
    assert!(2 * k <= n);
    let overlap = tape.draw_below(k as u64 + 1) as usize;
    let mut pool: Vec<usize> = (0..n).collect();
    let pick = |tape: &mut RandomTape, pool: &mut Vec<usize>| {
        let i = tape.draw_below(pool.len() as u64) as usize;
        pool.swap_remove(i)
    };
    let mut x = BitString::zeros(n);
    let mut y = BitString::zeros(n);
    for _ in 0..overlap {
        let i = pick(tape, &mut pool);
        x.set(i, true);
        y.set(i, true);
    }
    for _ in 0..k - overlap {
        x.set(pick(tape, &mut pool), true);
    }
    for _ in 0..k - overlap {
        y.set(pick(tape, &mut pool), true);
    }
    (x, y)
}

/// Uniform random bit string of length `n`.
pub fn random_bits(n: usize, tape: &mut RandomTape) -> BitString {
    tape.draw_bits(n)
}

/// Bit string of length `n` with exactly `zeros` tape-chosen zero positions.
pub fn bits_with_zero_count(n: usize, zeros: usize, tape: &mut RandomTape) -> BitString {
    let mut s = BitString::ones(n);
    let mut pool: Vec<usize> = (0..n).collect();
    for _ in 0..zeros {
        let i = tape.draw_below(pool.len() as u64) as usize;
        s.set(pool.swap_remove(i), false);
    }
    s
}
