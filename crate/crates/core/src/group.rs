//! Elements of the continuous full group `Γ_A` as prefix-exchange tables.
//!
//! A table `{(μ_i, ν_i)}` acts by `μ_i·x ↦ ν_i·x`. When both word lists are
//! cylinder partitions and each `μ_i`, `ν_i` end in symbols with the same
//! follower set, this is a homeomorphism with `k = |ν_i|`, `l = |μ_i|` on
//! `U_{μ_i}`. Tables are kept in their coarsest form, which is unique, so
//! group elements compare by structural equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sft::{complement_partition, locate_prefix, CylinderPartition, EpPoint, Sft, Word};
use crate::step::{explore, StepFunction};

#[derive(Clone, PartialEq, Eq)]
pub struct TableHomeo {
    sft: Arc<Sft>,
    pairs: Vec<(Word, Word)>,
}

/// `l`, `k` and `d = l − k` of a table presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KldData {
    pub l: StepFunction,
    pub k: StepFunction,
    pub d: StepFunction,
}

impl KldData {
    /// Data read off a (possibly non-canonical) valid presentation.
    pub fn from_presentation(sft: &Arc<Sft>, pairs: &[(Word, Word)]) -> Result<KldData> {
        check_pairs(sft, pairs)?;
        let l = StepFunction::from_leaves(sft, pairs.iter().map(|(s, _)| (s.clone(), s.len() as i64)).collect());
        let k = StepFunction::from_leaves(sft, pairs.iter().map(|(s, d)| (s.clone(), d.len() as i64)).collect());
        let d = l.sub(&k)?;
        Ok(KldData { l, k, d })
    }
}

fn check_pairs(sft: &Sft, pairs: &[(Word, Word)]) -> Result<()> {
    for (s, d) in pairs {
        sft.check_word(s)?;
        sft.check_word(d)?;
    }
    let srcs = pairs.iter().map(|(s, _)| s.clone()).collect();
    CylinderPartition::new(sft, srcs).map_err(|e| Error::SrcNotPartition(e.to_string()))?;
    let dsts = pairs.iter().map(|(_, d)| d.clone()).collect();
    CylinderPartition::new(sft, dsts).map_err(|e| Error::DstNotPartition(e.to_string()))?;
    for (s, d) in pairs {
        if !sft.same_follower(s.last().copied(), d.last().copied()) {
            return Err(Error::FollowerMismatch { src: sft.format_word(s), dst: sft.format_word(d) });
        }
    }
    Ok(())
}

impl TableHomeo {
    pub fn new(sft: &Arc<Sft>, pairs: Vec<(Word, Word)>) -> Result<TableHomeo> {
        check_pairs(sft, &pairs)?;
        Ok(TableHomeo::from_valid(sft, pairs))
    }

    fn from_valid(sft: &Arc<Sft>, pairs: Vec<(Word, Word)>) -> TableHomeo {
        let map: BTreeMap<Word, Word> = pairs.into_iter().collect();
        TableHomeo { sft: Arc::clone(sft), pairs: coarsen(sft, map) }
    }

    pub fn identity(sft: &Arc<Sft>) -> TableHomeo {
        TableHomeo { sft: Arc::clone(sft), pairs: vec![(Word::empty(), Word::empty())] }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].0.is_empty() && self.pairs[0].1.is_empty()
    }

    pub fn sft(&self) -> &Arc<Sft> {
        &self.sft
    }

    /// Canonical pairs, sorted by source word.
    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    /// `τ` on the cylinder `U_w`: the word `J` with `τ(w·x) = J·x`, once
    /// `w` contains a full source word.
    pub fn rewrite(&self, w: &[u8]) -> Option<Word> {
        let i = locate_prefix(&self.pairs, |p| p.0.as_slice(), w)?;
        let (src, dst) = &self.pairs[i];
        Some(dst.concat(&w[src.len()..]))
    }

    fn max_src_len(&self) -> usize {
        self.pairs.iter().map(|p| p.0.len()).max().unwrap_or(0)
    }

    pub fn apply(&self, x: &EpPoint) -> EpPoint {
        let head = x.prefix(self.max_src_len());
        let i = locate_prefix(&self.pairs, |p| p.0.as_slice(), &head).expect("sources partition the space");
        let (src, dst) = &self.pairs[i];
        x.shift(src.len()).prepend(dst)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TableHomeo) -> Result<TableHomeo> {
        if self.sft != first.sft {
            return Err(Error::SpecMismatch);
        }
        let cap = self.max_src_len() + first.max_src_len() + 1;
        let leaves = explore(&self.sft, 0, cap, |w| Ok(first.rewrite(w).and_then(|j| self.rewrite(&j))))?;
        Ok(TableHomeo::from_valid(&self.sft, leaves))
    }

    /// Composition data `(l_{τ2}∘τ1 + l_{τ1}, k_{τ2}∘τ1 + k_{τ1})` for `self ∘ first`,
    /// with `d` from the canonical composite.
    pub fn compose_kld(&self, first: &TableHomeo) -> Result<KldData> {
        let (a, b) = (first.cocycle_data()?, self.cocycle_data()?);
        let l = a.l.add(&first.pull_back(&b.l)?)?;
        let k = a.k.add(&first.pull_back(&b.k)?)?;
        let d = self.compose(first)?.cocycle_data()?.d;
        Ok(KldData { l, k, d })
    }

    pub fn invert(&self) -> TableHomeo {
        let pairs = self.pairs.iter().map(|(s, d)| (d.clone(), s.clone())).collect();
        TableHomeo::from_valid(&self.sft, pairs)
    }

    pub fn cocycle_data(&self) -> Result<KldData> {
        KldData::from_presentation(&self.sft, &self.pairs)
    }

    /// `f∘τ`.
    pub fn pull_back(&self, f: &StepFunction) -> Result<StepFunction> {
        if **f.sft() != *self.sft {
            return Err(Error::SpecMismatch);
        }
        let cap = self.max_src_len() + f.depth();
        StepFunction::tabulate(&self.sft, 0, cap, |w| {
            Ok(self.rewrite(w).and_then(|j| f.value_on(&j)))
        })
    }

    /// Checks `σ^{k(x)}(τ(x)) = σ^{l(x)}(x)` on every point, cylinder by
    /// cylinder. On `U_w` with `τ(w·x) = J·x`, `|w| ≥ l` and `|J| ≥ k`, the
    /// relation holds for all `x` exactly when `J[k..] = w[l..]`.
    pub fn satisfies_orbit_relation(&self, l: &StepFunction, k: &StepFunction) -> Result<bool> {
        let cap = self.max_src_len() + l.depth() + k.depth() + (l.max_value().max(k.max_value()).max(0) as usize) + 1;
        let verdicts = explore(&self.sft, 0, cap, |w| {
            let (Some(lv), Some(kv), Some(j)) = (l.value_on(w), k.value_on(w), self.rewrite(w)) else {
                return Ok(None);
            };
            if lv < 0 || kv < 0 {
                return Ok(Some(false));
            }
            let (lv, kv) = (lv as usize, kv as usize);
            if w.len() < lv || j.len() < kv {
                return Ok(None);
            }
            Ok(Some(j[kv..] == w[lv..]))
        })?;
        Ok(verdicts.into_iter().all(|(_, ok)| ok))
    }

    /// The involution exchanging `U_{a^m b}` and `U_{a^{m−1} b}`, identity
    /// elsewhere. On `U_{a^m b}` it acts as `σ` with `(k, l) = (0, 1)`.
    pub fn gen_swap(sft: &Arc<Sft>, a: u8, b: u8, m: usize) -> Result<TableHomeo> {
        let bad = |why: &str| Error::BadSymbols(format!("gen_swap({a},{b},{m}): {why}"));
        if !sft.is_symbol(a) || !sft.is_symbol(b) {
            return Err(bad("symbol out of range"));
        }
        if a == b {
            return Err(bad("a equals b"));
        }
        if m == 0 {
            return Err(bad("run length must be positive"));
        }
        if !sft.allows(a, b) {
            return Err(bad("transition a→b is not allowed"));
        }
        if m >= 2 && !sft.allows(a, a) {
            return Err(bad("transition a→a is not allowed"));
        }
        let mut long = vec![a; m];
        long.push(b);
        let short = Word::from(&long[1..]);
        let long = Word::from(long);
        let mut pairs = vec![(long.clone(), short.clone()), (short.clone(), long.clone())];
        for w in complement_partition(sft, &[long, short]) {
            pairs.push((w.clone(), w));
        }
        TableHomeo::new(sft, pairs)
    }

    /// One line per pair, `<src> <dst>`, `-` naming the empty word.
    pub fn render(&self) -> String {
        let word = |w: &Word| if w.is_empty() { "-".to_string() } else { self.sft.format_word(w) };
        self.pairs.iter().map(|(s, d)| format!("{} {}\n", word(s), word(d))).collect()
    }
}

impl fmt::Debug for TableHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.pairs.iter().map(|(s, d)| format!("{s}→{d}")).collect();
        write!(f, "TableHomeo{{{}}}", body.join(", "))
    }
}

/// Merges complete sibling families `(p·s, v·s)` into `(p, v)` until none
/// remain. A pair survives exactly when no shorter pair describes the same
/// action on its cylinder, so the result does not depend on merge order.
fn coarsen(sft: &Sft, mut map: BTreeMap<Word, Word>) -> Vec<(Word, Word)> {
    loop {
        let mut merged = false;
        let parents: Vec<Word> = {
            let mut ps: Vec<Word> = map.keys().filter(|s| !s.is_empty()).map(|s| Word::from(&s[..s.len() - 1])).collect();
            ps.sort();
            ps.dedup();
            ps
        };
        for p in parents {
            let children: Vec<u8> = sft.successors(p.last().copied()).collect();
            let mut v: Option<Word> = None;
            let ok = children.iter().all(|&s| {
                let Some(dst) = map.get(&p.concat(&[s])) else { return false };
                if dst.last() != Some(&s) {
                    return false;
                }
                let head = Word::from(&dst[..dst.len() - 1]);
                match &v {
                    None => {
                        v = Some(head);
                        true
                    }
                    Some(prev) => *prev == head,
                }
            });
            let Some(v) = v.filter(|_| ok) else { continue };
            if !sft.same_follower(p.last().copied(), v.last().copied()) {
                continue;
            }
            for &s in &children {
                map.remove(&p.concat(&[s]));
            }
            map.insert(p, v);
            merged = true;
        }
        if !merged {
            return map.into_iter().collect();
        }
    }
}
