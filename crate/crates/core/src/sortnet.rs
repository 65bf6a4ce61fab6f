//! Comparator networks: Batcher odd-even mergesort construction, the zero-one
//! sorting oracle, and permutation tracing.
//!
//! Register indices are 0-based throughout; a comparator `(lo, hi)` with
//! `lo < hi` compare-exchanges so the larger value lands in the higher
//! register.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Compare-exchange between two registers, serialized as `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparator(pub usize, pub usize);

impl Comparator {
    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }
}

/// Ordered comparator list over `k` registers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparatorNetwork {
    pub k: usize,
    pub comparators: Vec<Comparator>,
}

impl ComparatorNetwork {
    pub fn len(&self) -> usize {
        self.comparators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comparators.is_empty()
    }

    /// Every comparator within range and strictly increasing.
    pub fn is_well_formed(&self) -> bool {
        self.comparators
            .iter()
            .all(|c| c.lo() < c.hi() && c.hi() < self.k)
    }
}

fn pad_to_power_of_two(k: usize) -> usize {
    k.next_power_of_two()
}

// Classic odd-even merge over the padded register file; comparators touching
// virtual registers (index >= k) compare against +inf and are dropped.
fn emit_merge(lo: usize, n: usize, r: usize, k: usize, out: &mut impl FnMut(usize, usize)) {
    let m = r * 2;
    if m < n {
        emit_merge(lo, n, m, k, out);
        emit_merge(lo + r, n, m, k, out);
        let mut i = lo + r;
        while i + r < lo + n {
            if i + r < k {
                out(i, i + r);
            }
            i += m;
        }
    } else if lo + r < k {
        out(lo, lo + r);
    }
}

fn emit_sort(lo: usize, n: usize, k: usize, out: &mut impl FnMut(usize, usize)) {
    if n > 1 {
        let m = n / 2;
        emit_sort(lo, m, k, out);
        emit_sort(lo + m, m, k, out);
        emit_merge(lo, n, 1, k, out);
    }
}

/// Batcher odd-even mergesort network on `k >= 2` registers. Non-powers of
/// two are padded with virtual top registers whose comparators are dropped.
/// Uses at most `2 k log^2 k` comparators for `k >= 3`.
pub fn batcher_network(k: usize) -> Result<ComparatorNetwork> {
    if k < 2 {
        return Err(Error::TooFewRegisters { need: 2, got: k });
    }
    let padded = pad_to_power_of_two(k);
    let mut comparators = Vec::new();
    emit_sort(0, padded, k, &mut |a, b| comparators.push(Comparator(a, b)));
    Ok(ComparatorNetwork { k, comparators })
}

/// Number of comparators `batcher_network(k)` would produce, without
/// materializing the network.
pub fn batcher_comparator_count(k: usize) -> usize {
    if k < 2 {
        return 0;
    }
    let padded = pad_to_power_of_two(k);
    let mut count = 0usize;
    emit_sort(0, padded, k, &mut |_, _| count += 1);
    count
}

/// Zero-one principle oracle: the network sorts every input iff it sorts all
/// `2^k` boolean vectors. Exhaustive, guarded to `k <= 24`. Vectors are run
/// 64 per word lane.
pub fn verify_zero_one(net: &ComparatorNetwork) -> Result<bool> {
    let k = net.k;
    if k > 24 {
        return Err(Error::GuardExceeded {
            what: "verify_zero_one registers",
            got: k,
            limit: 24,
        });
    }
    if !net.is_well_formed() {
        return Ok(false);
    }
    let total: u64 = 1u64 << k;
    let mut regs = vec![0u64; k];
    let mut base = 0u64;
    while base < total {
        let lanes = 64.min(total - base);
        for (i, reg) in regs.iter_mut().enumerate() {
            let mut word = 0u64;
            for t in 0..lanes {
                word |= ((base + t) >> i & 1) << t;
            }
            *reg = word;
        }
        for c in &net.comparators {
            let (lo, hi) = (c.lo(), c.hi());
            let a = regs[lo];
            let b = regs[hi];
            regs[lo] = a & b;
            regs[hi] = a | b;
        }
        let lane_mask = if lanes == 64 { !0u64 } else { (1u64 << lanes) - 1 };
        for w in regs.windows(2) {
            if w[0] & !w[1] & lane_mask != 0 {
                return Ok(false);
            }
        }
        base += lanes;
    }
    Ok(true)
}

/// Assignment of `k` distinct values to `k` registers: `perm[value] = register`.
pub fn validate_permutation(perm: &[usize]) -> Result<()> {
    let k = perm.len();
    let mut seen = vec![false; k];
    for &r in perm {
        if r >= k || seen[r] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[r] = true;
    }
    Ok(())
}

pub fn identity_permutation(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Register assignments after each comparator, plus a per-step swap flag.
#[derive(Clone, Debug)]
pub struct PermutationTrace {
    /// `states[q][value] = register` after the first `q` comparators.
    pub states: Vec<Vec<usize>>,
    /// `swaps[q]` is true when comparator `q` exchanged its registers.
    pub swaps: Vec<bool>,
}

impl PermutationTrace {
    pub fn final_state(&self) -> &[usize] {
        self.states.last().expect("trace has an initial state")
    }

    pub fn sorted(&self) -> bool {
        self.final_state()
            .iter()
            .enumerate()
            .all(|(value, &reg)| value == reg)
    }
}

/// Run `perm` through the network register by register.
pub fn trace_permutation(net: &ComparatorNetwork, perm: &[usize]) -> Result<PermutationTrace> {
    if perm.len() != net.k {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    validate_permutation(perm)?;
    let k = net.k;
    let mut value_at = vec![0usize; k]; // register -> value
    for (value, &reg) in perm.iter().enumerate() {
        value_at[reg] = value;
    }
    let mut state: Vec<usize> = perm.to_vec();
    let mut states = Vec::with_capacity(net.len() + 1);
    states.push(state.clone());
    let mut swaps = Vec::with_capacity(net.len());
    for c in &net.comparators {
        let (lo, hi) = (c.lo(), c.hi());
        let a = value_at[lo];
        let b = value_at[hi];
        let swap = a > b;
        if swap {
            value_at[lo] = b;
            value_at[hi] = a;
            state[a] = hi;
            state[b] = lo;
        }
        swaps.push(swap);
        states.push(state.clone());
    }
    Ok(PermutationTrace { states, swaps })
}
