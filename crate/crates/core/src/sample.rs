//! Seeded random inputs: step functions, eventually periodic points and
//! words in the swap generators.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;

use crate::group::TableHomeo;
use crate::sft::{EpPoint, Sft, Word};
use crate::step::StepFunction;

/// Uniform depth in `0..=max_depth`, values in `-range..=range`.
pub fn random_function(rng: &mut impl Rng, sft: &Arc<Sft>, max_depth: usize, range: i64) -> StepFunction {
    let depth = rng.gen_range(0..=max_depth);
    let entries = sft
        .enumerate_words(depth)
        .into_iter()
        .map(|w| (w, rng.gen_range(-range..=range)))
        .collect();
    StepFunction::new(sft, depth, entries).expect("enumerated words are exactly the cylinders")
}

fn random_walk(rng: &mut impl Rng, sft: &Sft, start: Option<u8>, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    let mut last = start;
    for _ in 0..len {
        let succ: Vec<u8> = sft.successors(last).collect();
        let s = succ[rng.gen_range(0..succ.len())];
        out.push(s);
        last = Some(s);
    }
    out
}

/// Intermediate symbols of a shortest path `from → … → to` (empty when
/// the transition is allowed directly).
fn bridge(sft: &Sft, from: u8, to: u8) -> Vec<u8> {
    let n = sft.size();
    let mut prev = vec![0u8; n + 1];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; n + 1];
    seen[from as usize] = true;
    while let Some(a) = queue.pop_front() {
        for b in sft.successors(Some(a)) {
            if b == to {
                let mut path = Vec::new();
                let mut cur = a;
                while cur != from {
                    path.push(cur);
                    cur = prev[cur as usize];
                }
                path.reverse();
                return path;
            }
            if !seen[b as usize] {
                seen[b as usize] = true;
                prev[b as usize] = a;
                queue.push_back(b);
            }
        }
    }
    unreachable!("irreducible shifts connect every pair of symbols")
}

/// A point `u|v` with `|u| ≤ 4` and a random cycle, closed up through a
/// shortest return path.
pub fn random_point(rng: &mut impl Rng, sft: &Sft) -> EpPoint {
    let ulen = rng.gen_range(0..=4);
    let vlen = rng.gen_range(1..=4);
    let w = random_walk(rng, sft, None, ulen + vlen);
    let (u, v) = w.split_at(ulen);
    let mut v = v.to_vec();
    v.extend(bridge(sft, *v.last().unwrap(), v[0]));
    EpPoint::new(sft, u.to_vec(), v).expect("walk and bridge are admissible")
}

/// A random admissible word of length `len`.
pub fn random_word(rng: &mut impl Rng, sft: &Sft, len: usize) -> Word {
    Word::from(random_walk(rng, sft, None, len))
}

/// All valid `gen_swap(a, b, m)` with `m ≤ 2`, ordered by `(a, b, m)`.
pub fn generators(sft: &Arc<Sft>) -> Vec<TableHomeo> {
    let n = sft.size() as u8;
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=2 {
                if let Ok(t) = TableHomeo::gen_swap(sft, a, b, m) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A product of `1..=max_len` generators drawn uniformly.
pub fn random_element(rng: &mut impl Rng, gens: &[TableHomeo], max_len: usize) -> TableHomeo {
    let len = rng.gen_range(1..=max_len);
    let mut t = gens[rng.gen_range(0..gens.len())].clone();
    for _ in 1..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        t = g.compose(&t).expect("generators share a space");
    }
    t
}
