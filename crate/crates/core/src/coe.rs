//! Orbit-equivalence witnesses `h: X_A → X_B` and what can be computed
//! from them: cocycle functions, `Ψ_h`, `ξ_h`, `Φ_h`, the SCOE and Γ-SCOE
//! conditions, and eventual conjugacies.
//!
//! A witness is a chain of stages. A coder stage reads its input as a
//! sequence of blocks from a prefix code and writes one output word per
//! block; a table stage is a full-group element.
//!
//! Pushing a finite word `w` through a stage returns the determined output
//! and the undetermined remainder: `S(w·z) = P·S(r·z)` for a coder, and
//! `S(w·z) = P·z` for a table. If two words leave the same remainders at
//! every stage, their images share one tail map `T`, so `h(w·z) = P·T(z)`
//! and `h(w′·z) = Q·T(z)`. Comparing `P` and `Q` then decides relations like
//! `σ^k(h(σx)) = σ^l(h(x))` on a whole cylinder at once.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{checked_sub, Error, Result};
use crate::group::TableHomeo;
use crate::sft::{locate_prefix, CylinderPartition, EpPoint, Sft, Word};
use crate::step::{explore, is_sigma_coboundary, CoboundaryCertificate, StepFunction};
use crate::DEFAULT_DEPTH_CAP;

/// A block code `in_j·x ↦ out_j·h(x)` between two shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coder {
    source: Arc<Sft>,
    target: Arc<Sft>,
    pairs: Vec<(Word, Word)>,
}

impl Coder {
    /// Validates the coder and its inverse.
    pub fn new(source: &Arc<Sft>, target: &Arc<Sft>, pairs: Vec<(Word, Word)>) -> Result<Coder> {
        let coder = Coder::one_way(source, target, pairs)?;
        let swapped = coder.pairs.iter().map(|(i, o)| (o.clone(), i.clone())).collect();
        Coder::one_way(target, source, swapped).map_err(|e| Error::InverseInvalid(e.to_string()))?;
        Ok(coder)
    }

    fn one_way(source: &Arc<Sft>, target: &Arc<Sft>, mut pairs: Vec<(Word, Word)>) -> Result<Coder> {
        for (i, o) in &pairs {
            if i.is_empty() {
                return Err(Error::NotPartition("empty input word".into()));
            }
            if o.is_empty() {
                return Err(Error::NotPartition(format!("empty output for input {}", source.format_word(i))));
            }
            source.check_word(i)?;
            target.check_word(o)?;
        }
        let inputs = pairs.iter().map(|(i, _)| i.clone()).collect();
        CylinderPartition::new(source, inputs).map_err(|e| Error::NotPartition(e.to_string()))?;
        for (i1, o1) in &pairs {
            for (i2, o2) in &pairs {
                let a = source.allows(*i1.last().unwrap(), i2[0]);
                if a && !target.allows(*o1.last().unwrap(), o2[0]) {
                    return Err(Error::JunctionInadmissible {
                        first: source.format_word(i1),
                        second: source.format_word(i2),
                    });
                }
            }
        }
        pairs.sort();
        Ok(Coder { source: Arc::clone(source), target: Arc::clone(target), pairs })
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn source(&self) -> &Arc<Sft> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Sft> {
        &self.target
    }

    pub fn inverse(&self) -> Coder {
        let mut pairs: Vec<(Word, Word)> = self.pairs.iter().map(|(i, o)| (o.clone(), i.clone())).collect();
        pairs.sort();
        Coder { source: Arc::clone(&self.target), target: Arc::clone(&self.source), pairs }
    }

    fn block_at(&self, w: &[u8]) -> Option<&(Word, Word)> {
        locate_prefix(&self.pairs, |p| p.0.as_slice(), w).map(|i| &self.pairs[i])
    }

    /// Greedy block parse: `(P, r)` with `S(w·z) = P·S(r·z)`.
    pub fn push(&self, w: &[u8]) -> (Word, Word) {
        let mut out = Word::empty();
        let mut pos = 0;
        while let Some((i, o)) = self.block_at(&w[pos..]) {
            out = out.concat(o);
            pos += i.len();
        }
        (out, Word::from(&w[pos..]))
    }

    /// Parses `u·v^∞` block by block until the block boundary returns to a
    /// position already seen modulo `|v|`.
    pub fn apply(&self, x: &EpPoint) -> EpPoint {
        let (ulen, vlen) = (x.preperiod().len(), x.cycle().len());
        let max_in = self.pairs.iter().map(|p| p.0.len()).max().unwrap_or(1);
        let mut outputs: Vec<&Word> = Vec::new();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut pos = 0;
        loop {
            if pos >= ulen {
                let state = (pos - ulen) % vlen;
                if let Some(&start) = seen.get(&state) {
                    let head: Vec<u8> = outputs[..start].iter().flat_map(|w| w.iter().copied()).collect();
                    let cycle: Vec<u8> = outputs[start..].iter().flat_map(|w| w.iter().copied()).collect();
                    return EpPoint::canonical(head, cycle);
                }
                seen.insert(state, outputs.len());
            }
            let window = x.shift(pos).prefix(max_in);
            let (i, o) = self.block_at(&window).expect("inputs partition the space");
            outputs.push(o);
            pos += i.len();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    Coder(Coder),
    Table(TableHomeo),
}

impl Stage {
    pub fn source(&self) -> &Arc<Sft> {
        match self {
            Stage::Coder(c) => c.source(),
            Stage::Table(t) => t.sft(),
        }
    }

    pub fn target(&self) -> &Arc<Sft> {
        match self {
            Stage::Coder(c) => c.target(),
            Stage::Table(t) => t.sft(),
        }
    }

    pub fn inverse(&self) -> Stage {
        match self {
            Stage::Coder(c) => Stage::Coder(c.inverse()),
            Stage::Table(t) => Stage::Table(t.invert()),
        }
    }

    /// `(P, r)`: the stage maps `w·z` to `P` followed by the image of `r·z`
    /// under the stage's tail map (itself for coders, the identity for tables).
    fn push(&self, w: &[u8]) -> Option<(Word, Word)> {
        match self {
            Stage::Coder(c) => Some(c.push(w)),
            Stage::Table(t) => t.rewrite(w).map(|j| (j, Word::empty())),
        }
    }

    pub fn apply(&self, x: &EpPoint) -> EpPoint {
        match self {
            Stage::Coder(c) => c.apply(x),
            Stage::Table(t) => t.apply(x),
        }
    }
}

/// A validated homeomorphism `h: X_A → X_B` with its inverse chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeWitness {
    source: Arc<Sft>,
    target: Arc<Sft>,
    stages: Vec<Stage>,
    inverse_stages: Vec<Stage>,
}

/// Output of a chain push: the determined image and the per-stage remainders.
type Pushed = (Word, Vec<Word>);

fn push_chain(stages: &[Stage], w: &[u8]) -> Option<Pushed> {
    let mut cur = Word::from(w);
    let mut pending = Vec::with_capacity(stages.len());
    for st in stages {
        let (out, r) = st.push(&cur)?;
        pending.push(r);
        cur = out;
    }
    Some((cur, pending))
}

impl CoeWitness {
    pub fn new(source: &Arc<Sft>, target: &Arc<Sft>, stages: Vec<Stage>) -> Result<CoeWitness> {
        if stages.is_empty() {
            return Err(Error::StageMismatch(0));
        }
        let mut space = source;
        for (i, st) in stages.iter().enumerate() {
            if **st.source() != **space {
                return Err(Error::StageMismatch(i + 1));
            }
            space = st.target();
        }
        if **space != **target {
            return Err(Error::StageMismatch(stages.len()));
        }
        let inverse_stages = stages.iter().rev().map(Stage::inverse).collect();
        Ok(CoeWitness { source: Arc::clone(source), target: Arc::clone(target), stages, inverse_stages })
    }

    pub fn identity(sft: &Arc<Sft>) -> CoeWitness {
        CoeWitness::from_table(TableHomeo::identity(sft))
    }

    pub fn from_table(tau: TableHomeo) -> CoeWitness {
        let sft = Arc::clone(tau.sft());
        CoeWitness::new(&sft, &sft, vec![Stage::Table(tau)]).expect("a table maps its space to itself")
    }

    pub fn source(&self) -> &Arc<Sft> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Sft> {
        &self.target
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn inverse(&self) -> CoeWitness {
        CoeWitness {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            stages: self.inverse_stages.clone(),
            inverse_stages: self.stages.clone(),
        }
    }

    /// `h` followed by `next`.
    pub fn then(&self, next: Stage) -> Result<CoeWitness> {
        let mut stages = self.stages.clone();
        let target = Arc::clone(next.target());
        stages.push(next);
        CoeWitness::new(&self.source, &target, stages)
    }

    /// Adjacent tables merged, identity tables dropped.
    pub fn simplified(&self) -> CoeWitness {
        let mut out: Vec<Stage> = Vec::new();
        for st in &self.stages {
            match (out.last_mut(), st) {
                (Some(Stage::Table(prev)), Stage::Table(t)) => {
                    *prev = t.compose(prev).expect("consecutive stages share a space");
                }
                _ => out.push(st.clone()),
            }
        }
        out.retain(|st| !matches!(st, Stage::Table(t) if t.is_identity()));
        if out.is_empty() {
            return CoeWitness::identity(&self.source);
        }
        CoeWitness::new(&self.source, &self.target, out).expect("simplification keeps stage spaces")
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.simplified().stages.as_slice(), [Stage::Table(t)] if t.is_identity())
    }

    pub fn apply(&self, x: &EpPoint) -> EpPoint {
        self.stages.iter().fold(x.clone(), |p, st| st.apply(&p))
    }

    pub fn apply_inverse(&self, x: &EpPoint) -> EpPoint {
        self.inverse_stages.iter().fold(x.clone(), |p, st| st.apply(&p))
    }

    /// `(P, Q)` with `h(w·z) = P·T(z)` and `h(w[1..]·z) = Q·T(z)` for one tail
    /// map `T`, or `None` if `w` is too short to tell.
    fn shift_pair(&self, w: &[u8]) -> Option<(Word, Word)> {
        if w.is_empty() {
            return None;
        }
        let (p, rp) = push_chain(&self.stages, w)?;
        let (q, rq) = push_chain(&self.stages, &w[1..])?;
        (rp == rq).then_some((p, q))
    }

    /// Least `(k + l, k)` with `σ^k(h(σx)) = σ^l(h(x))` on `U_w`, if decided.
    fn cocycle_on(&self, w: &[u8], bound: usize) -> Result<Option<(usize, usize)>> {
        let Some((p, q)) = self.shift_pair(w) else { return Ok(None) };
        let c = p.len() as i64 - q.len() as i64;
        let kmin = (-c).max(0) as usize;
        let k = (kmin..=q.len())
            .find(|&k| q[k..] == p[(k as i64 + c) as usize..])
            .expect("k = |Q| always works");
        let l = (k as i64 + c) as usize;
        if k > bound || l > bound {
            return Err(Error::BoundExceeded { word: self.source.format_word(w), bound });
        }
        Ok(Some((k, l)))
    }

    fn check_representatives(&self, w: &[u8], k: usize, l: usize) -> Result<()> {
        for x in self.source.representatives(w) {
            if self.apply(&x.shift(1)).shift(k) != self.apply(&x).shift(l) {
                return Err(Error::RepresentativeMismatch(format!("{} at {x}", self.source.format_word(w))));
            }
        }
        Ok(())
    }

    fn one_direction(&self, params: &DeriveParams) -> Result<(StepFunction, StepFunction)> {
        let leaves = explore(&self.source, params.depth, params.cap, |w| {
            let Some((k, l)) = self.cocycle_on(w, params.bound)? else { return Ok(None) };
            self.check_representatives(w, k, l)?;
            Ok(Some((k, l)))
        })?;
        let k = leaves.iter().map(|(w, (k, _))| (w.clone(), *k as i64)).collect();
        let l = leaves.into_iter().map(|(w, (_, l))| (w, l as i64)).collect();
        Ok((StepFunction::from_leaves(&self.source, k), StepFunction::from_leaves(&self.source, l)))
    }

    /// `k1, l1` on `X_A` and `k2, l2` on `X_B`, minimal in `(k + l, k)` on
    /// each cylinder, with `c = l − k`.
    pub fn derive_cocycles(&self, params: &DeriveParams) -> Result<CocycleTables> {
        params.check()?;
        let (k1, l1) = self.one_direction(params)?;
        let (k2, l2) = self.inverse().one_direction(params)?;
        let c1 = l1.sub(&k1)?;
        let c2 = l2.sub(&k2)?;
        Ok(CocycleTables { k1, l1, c1, k2, l2, c2 })
    }

    /// The witness-file text for this chain.
    pub fn render(&self) -> String {
        crate::io::render_witness(self)
    }

    /// `f∘h` for `f` on `X_B`.
    pub fn pull_back(&self, f: &StepFunction) -> Result<StepFunction> {
        if **f.sft() != *self.target {
            return Err(Error::SpecMismatch);
        }
        StepFunction::tabulate(&self.source, 0, DEFAULT_DEPTH_CAP, |w| {
            Ok(push_chain(&self.stages, w).and_then(|(p, _)| f.value_on(&p)))
        })
    }

    /// `f∘h^{-1}` for `f` on `X_A`.
    pub fn push_forward(&self, f: &StepFunction) -> Result<StepFunction> {
        self.inverse().pull_back(f)
    }

    /// `Ψ_h(f)(z) = Σ_{i=0}^{l1(z)} f(σ^i h(z)) − Σ_{j=0}^{k1(z)} f(σ^j h(σz))`.
    pub fn psi(&self, f: &StepFunction, params: &DeriveParams) -> Result<StepFunction> {
        if **f.sft() != *self.target {
            return Err(Error::SpecMismatch);
        }
        params.check()?;
        StepFunction::tabulate(&self.source, 1, params.cap, |w| {
            let Some((k, l)) = self.cocycle_on(w, params.bound)? else { return Ok(None) };
            let (p, q) = self.shift_pair(w).expect("decided above");
            let (Some(a), Some(b)) = (f.sum_over(&p, 0..l + 1)?, f.sum_over(&q, 0..k + 1)?) else {
                return Ok(None);
            };
            checked_sub(a, b).map(Some)
        })
    }

    /// `ξ_h(τ) = h∘τ∘h^{-1}` as a table on `X_B`.
    pub fn xi(&self, tau: &TableHomeo, cap: usize) -> Result<TableHomeo> {
        if **tau.sft() != *self.source {
            return Err(Error::SpecMismatch);
        }
        let m = self.stages.len();
        let leaves = explore(&self.target, 0, cap, |w| {
            let Some((back, pending)) = push_chain(&self.inverse_stages, w) else { return Ok(None) };
            let Some(mut cur) = tau.rewrite(&back) else { return Ok(None) };
            for (i, st) in self.stages.iter().enumerate() {
                let Some((out, rest)) = st.push(&cur) else { return Ok(None) };
                if !rest.is_empty() {
                    return Ok(None);
                }
                cur = out.concat(&pending[m - 1 - i]);
            }
            if !self.target.same_follower(w.last().copied(), cur.last().copied()) {
                return Ok(None);
            }
            Ok(Some(cur))
        })?;
        TableHomeo::new(&self.target, leaves)
    }
}

/// Refinement parameters for cylinder-wise derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeriveParams {
    /// Every cylinder of this length is examined (refined further as needed).
    pub depth: usize,
    /// Largest admissible `k` or `l`.
    pub bound: usize,
    pub cap: usize,
}

impl Default for DeriveParams {
    fn default() -> Self {
        DeriveParams { depth: 8, bound: 16, cap: DEFAULT_DEPTH_CAP }
    }
}

impl DeriveParams {
    fn check(&self) -> Result<()> {
        if self.depth < 1 || self.bound < 1 {
            return Err(Error::InvalidArgument("depth and bound must be at least 1".into()));
        }
        if self.cap < self.depth {
            return Err(Error::InvalidArgument("depth cap is below the starting depth".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTables {
    pub k1: StepFunction,
    pub l1: StepFunction,
    pub c1: StepFunction,
    pub k2: StepFunction,
    pub l2: StepFunction,
    pub c2: StepFunction,
}

/// Outcome of [`scoe_solve`], in the orientation `c1 = 1 + b1 − b1∘σ_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScoeCertificate {
    Sat {
        b1: StepFunction,
        /// `c2 = 1 + b2 − b2∘σ_B`, when found within the bounds.
        b2: Option<StepFunction>,
        /// The constant value of `b1 + b2∘h`, if `b2` was found and the sum is constant.
        consistency: Option<i64>,
    },
    /// `c1` sums to `c1_sum ≠ |cycle|` over the orbit of `cycle`.
    Unsat { cycle: Word, c1_sum: i64 },
    Inconclusive,
}

impl ScoeCertificate {
    /// `b1` in the orientation `c1 = 1 − b1 + b1∘σ_A`.
    pub fn b1_negated(&self) -> Option<Result<StepFunction>> {
        match self {
            ScoeCertificate::Sat { b1, .. } => Some(b1.neg()),
            _ => None,
        }
    }
}

pub fn scoe_solve(h: &CoeWitness, tables: &CocycleTables, search_depth: usize, cycle_bound: usize) -> Result<ScoeCertificate> {
    let f1 = tables.c1.add_constant(-1)?;
    match is_sigma_coboundary(&f1, search_depth.max(f1.depth()), cycle_bound)? {
        CoboundaryCertificate::Sat { g: b1 } => {
            let f2 = tables.c2.add_constant(-1)?;
            let b2 = match is_sigma_coboundary(&f2, search_depth.max(f2.depth()), cycle_bound)? {
                CoboundaryCertificate::Sat { g } => Some(g),
                _ => None,
            };
            let consistency = match &b2 {
                Some(b2) => b1.add(&h.pull_back(b2)?)?.constant_value(),
                None => None,
            };
            Ok(ScoeCertificate::Sat { b1, b2, consistency })
        }
        CoboundaryCertificate::Unsat { cycle, sum } => {
            let c1_sum = sum + cycle.len() as i64;
            Ok(ScoeCertificate::Unsat { cycle, c1_sum })
        }
        CoboundaryCertificate::Inconclusive { .. } => Ok(ScoeCertificate::Inconclusive),
    }
}

/// `c1 − (1 − d_τ + d_τ∘σ_A)`; zero exactly when `h` is Γ-SCOE via `τ`.
pub fn gamma_scoe_residual(tables: &CocycleTables, tau: &TableHomeo) -> Result<StepFunction> {
    if **tau.sft() != **tables.c1.sft() {
        return Err(Error::SpecMismatch);
    }
    let d = tau.cocycle_data()?.d;
    let expected = d.compose_shift(1)?.sub(&d)?.add_constant(1)?;
    tables.c1.sub(&expected)
}

/// Checks `σ_B^K(h(σ_A x)) = σ_B^{K+1}(h(x))` on every cylinder. Returns the
/// first failing cylinder, if any.
pub fn verify_eventual_conjugacy(h: &CoeWitness, big_k: usize, params: &DeriveParams) -> Result<Option<Word>> {
    params.check()?;
    let leaves = explore(&h.source, params.depth, params.cap, |w| {
        let Some((p, q)) = h.shift_pair(w) else { return Ok(None) };
        let ok = p.len() == q.len() + 1 && (big_k >= q.len() || q[big_k..] == p[big_k + 1..]);
        if ok {
            h.check_representatives(w, big_k, big_k + 1)?;
        }
        Ok(Some(ok))
    })?;
    Ok(leaves.into_iter().find(|(_, ok)| !ok).map(|(w, _)| w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualConjugacy {
    /// `ξ_h(τ^{-1})`.
    pub tau2: TableHomeo,
    /// `τ2∘h`.
    pub witness: CoeWitness,
    pub k: usize,
}

/// Builds `h′ = ξ_h(τ^{-1})∘h` and `K = max{k1(x), −d_{τ2}(h(x))}` from a
/// Γ-SCOE witness, and checks the eventual conjugacy.
pub fn construct_eventual_conjugacy(h: &CoeWitness, tau: &TableHomeo, params: &DeriveParams) -> Result<EventualConjugacy> {
    let tables = h.derive_cocycles(params)?;
    if !gamma_scoe_residual(&tables, tau)?.is_zero() {
        return Err(Error::NotGammaScoe);
    }
    let tau2 = h.xi(&tau.invert(), params.cap)?;
    let witness = h.then(Stage::Table(tau2.clone()))?.simplified();
    let d2 = tau2.cocycle_data()?.d;
    let k = tables.k1.max_value().max(-d2.min_value()).max(0) as usize;
    if let Some(w) = verify_eventual_conjugacy(&witness, k, params)? {
        return Err(Error::RepresentativeMismatch(format!(
            "constructed conjugacy fails on {}",
            h.source.format_word(&w)
        )));
    }
    Ok(EventualConjugacy { tau2, witness, k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonCommuting {
    Found { generator: usize, x: EpPoint, h_tau_x: EpPoint, tau_h_x: EpPoint },
    CommutesOnSample,
}

/// Every point `u|v` with `|u| ≤ 3`, `|v| ≤ 3`, in normal form and sorted.
pub fn sample_points(sft: &Sft) -> Vec<EpPoint> {
    let mut out = Vec::new();
    for ul in 0..=3 {
        for vl in 1..=3 {
            for w in sft.enumerate_words(ul + vl) {
                if let Ok(x) = EpPoint::new(sft, w[..ul].to_vec(), w[ul..].to_vec()) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// First generator (in list order) and sample point with `h(τ(x)) ≠ τ(h(x))`.
pub fn noncommuting_witness(h: &TableHomeo, generators: &[TableHomeo]) -> Result<NonCommuting> {
    if h.is_identity() {
        return Err(Error::IdentityElement);
    }
    let points = sample_points(h.sft());
    for (i, tau) in generators.iter().enumerate() {
        if tau.sft() != h.sft() {
            return Err(Error::SpecMismatch);
        }
        for x in &points {
            let a = h.apply(&tau.apply(x));
            let b = tau.apply(&h.apply(x));
            if a != b {
                return Ok(NonCommuting::Found { generator: i, x: x.clone(), h_tau_x: a, tau_h_x: b });
            }
        }
    }
    Ok(NonCommuting::CommutesOnSample)
}

/// `y ↦ ρ^f(h^{-1}(y), ξ_{h^{-1}}(φ))` on `X_B`.
pub fn phi_h_rho(h: &CoeWitness, f: &StepFunction, phi: &TableHomeo, cap: usize) -> Result<StepFunction> {
    if **f.sft() != *h.source || **phi.sft() != *h.target {
        return Err(Error::SpecMismatch);
    }
    let pulled = h.inverse().xi(phi, cap)?;
    let table = crate::cocycle::rho(f, &pulled)?.table;
    h.push_forward(&table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{membership, rho, MembershipMode};
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::from(s.bytes().map(|b| b - b'0').collect::<Vec<_>>())
    }

    fn f(sft: &Arc<Sft>, depth: usize, pairs: &[(&str, i64)]) -> StepFunction {
        StepFunction::new(sft, depth, pairs.iter().map(|&(k, v)| (w(k), v)).collect()).unwrap()
    }

    fn pt(sft: &Sft, s: &str) -> EpPoint {
        EpPoint::parse(sft, s).unwrap()
    }

    fn spaces() -> (Arc<Sft>, Arc<Sft>) {
        (Arc::new(Sft::golden_mean()), Arc::new(Sft::full_shift(2)))
    }

    fn golden_to_full() -> CoeWitness {
        let (g, full) = spaces();
        let coder = Coder::new(&g, &full, vec![(w("1"), w("1")), (w("21"), w("2"))]).unwrap();
        CoeWitness::new(&g, &full, vec![Stage::Coder(coder)]).unwrap()
    }

    fn params() -> DeriveParams {
        DeriveParams { depth: 3, ..DeriveParams::default() }
    }

    #[test]
    fn validate_examples() {
        let h = golden_to_full();
        assert_eq!(h.inverse().stages()[0], Stage::Coder(Coder::new(&spaces().1, &spaces().0, vec![(w("1"), w("1")), (w("2"), w("21"))]).unwrap()));
        let full = spaces().1;
        let t = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        assert!(CoeWitness::new(&full, &full, vec![Stage::Table(t)]).is_ok());
        let (g, _) = spaces();
        let bad = Coder::new(&full, &g, vec![(w("1"), w("2")), (w("2"), w("1"))]);
        assert!(matches!(bad, Err(Error::JunctionInadmissible { .. })));
        let not_inv = Coder::new(&full, &full, vec![(w("1"), w("1")), (w("2"), w("11"))]);
        assert!(matches!(not_inv, Err(Error::InverseInvalid(_))));
        let gap = Coder::new(&full, &full, vec![(w("1"), w("1"))]);
        assert!(matches!(gap, Err(Error::NotPartition(_))));
        let c = Coder::new(&g, &full, vec![(w("1"), w("1")), (w("21"), w("2"))]).unwrap();
        assert_eq!(CoeWitness::new(&full, &full, vec![Stage::Coder(c)]), Err(Error::StageMismatch(1)));
    }

    #[test]
    fn apply_examples() {
        let h = golden_to_full();
        let (g, full) = spaces();
        assert_eq!(h.apply(&pt(&g, "|1")), pt(&full, "|1"));
        assert_eq!(h.apply(&pt(&g, "|21")), pt(&full, "|2"));
        assert_eq!(h.apply(&pt(&g, "2|1")), pt(&full, "2|1"));
        assert_eq!(h.apply_inverse(&pt(&full, "1|2")), pt(&g, "1|21"));
    }

    #[test]
    fn derived_cocycles_of_the_worked_pair() {
        let h = golden_to_full();
        let (g, full) = spaces();
        let t = h.derive_cocycles(&params()).unwrap();
        assert_eq!(t.c1, f(&g, 1, &[("1", 1), ("2", 0)]));
        assert_eq!(t.c2, f(&full, 1, &[("1", 1), ("2", 2)]));
        let id = CoeWitness::identity(&full).derive_cocycles(&params()).unwrap();
        assert_eq!(id.c1.constant_value(), Some(1));
        assert_eq!(id.c2.constant_value(), Some(1));
        assert!(id.k1.is_zero() && id.k2.is_zero());
    }

    #[test]
    fn self_witness_cocycle() {
        let full = spaces().1;
        let tau = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let h = CoeWitness::from_table(tau.clone());
        let t = h.derive_cocycles(&params()).unwrap();
        assert_eq!(t.c1.value_on(&w("112")), Some(2));
        assert_eq!(t.c1.value_on(&w("121")), Some(-1));
        assert_eq!(t.c1.value_on(&w("122")), Some(-1));
        assert_eq!(t.c1.value_on(&w("212")), Some(3));
        assert!(gamma_scoe_residual(&t, &tau).unwrap().is_zero());
    }

    #[test]
    fn psi_examples() {
        let h = golden_to_full();
        let (_, full) = spaces();
        let t = h.derive_cocycles(&params()).unwrap();
        assert_eq!(h.psi(&StepFunction::constant(&full, 1), &params()).unwrap(), t.c1);
        let id = CoeWitness::identity(&full);
        let g = f(&full, 2, &[("11", 1), ("12", -3), ("21", 4), ("22", 0)]);
        assert_eq!(id.psi(&g, &params()).unwrap(), g);
        assert_eq!(h.psi(&StepFunction::constant(&spaces().0, 1), &params()), Err(Error::SpecMismatch));
    }

    #[test]
    fn xi_examples() {
        let full = spaces().1;
        let tau = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let h = CoeWitness::from_table(tau.clone());
        assert_eq!(h.xi(&tau, 24).unwrap(), tau);
        let (g, _) = spaces();
        let tg = TableHomeo::gen_swap(&g, 1, 2, 1).unwrap();
        assert_eq!(golden_to_full().xi(&tg, 24).unwrap(), tau);
    }

    #[test]
    fn scoe_examples() {
        let h = golden_to_full();
        let t = h.derive_cocycles(&params()).unwrap();
        assert_eq!(scoe_solve(&h, &t, 4, 12).unwrap(), ScoeCertificate::Unsat { cycle: w("12"), c1_sum: 1 });
        let full = spaces().1;
        let id = CoeWitness::identity(&full);
        let ti = id.derive_cocycles(&params()).unwrap();
        match scoe_solve(&id, &ti, 4, 12).unwrap() {
            ScoeCertificate::Sat { b1, consistency, .. } => {
                assert!(b1.is_zero());
                assert_eq!(consistency, Some(0));
            }
            other => panic!("{other:?}"),
        }
        let tau = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let h = CoeWitness::from_table(tau.clone());
        let th = h.derive_cocycles(&params()).unwrap();
        match scoe_solve(&h, &th, 4, 12).unwrap() {
            ScoeCertificate::Sat { b1, b2, consistency } => {
                let d = tau.cocycle_data().unwrap().d;
                assert!(b1.add(&d).unwrap().constant_value().is_some());
                assert!(b2.is_some());
                assert!(consistency.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gamma_and_eventual_examples() {
        let full = spaces().1;
        let id = CoeWitness::identity(&full);
        let ti = id.derive_cocycles(&params()).unwrap();
        assert!(gamma_scoe_residual(&ti, &TableHomeo::identity(&full)).unwrap().is_zero());
        assert_eq!(verify_eventual_conjugacy(&id, 0, &params()).unwrap(), None);

        let h = golden_to_full();
        let (g, _) = spaces();
        let t = h.derive_cocycles(&params()).unwrap();
        let r = gamma_scoe_residual(&t, &TableHomeo::identity(&g)).unwrap();
        assert_eq!(r, f(&g, 1, &[("1", 0), ("2", -1)]));
        for k in 0..=8 {
            assert!(verify_eventual_conjugacy(&h, k, &params()).unwrap().is_some());
        }
        assert_eq!(construct_eventual_conjugacy(&h, &TableHomeo::identity(&g), &params()), Err(Error::NotGammaScoe));

        let tau = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let hs = CoeWitness::from_table(tau.clone());
        let built = construct_eventual_conjugacy(&hs, &tau, &params()).unwrap();
        assert_eq!(built.tau2, tau.invert());
        assert!(built.witness.is_identity());
    }

    #[test]
    fn noncommuting_examples() {
        let full = spaces().1;
        let gens = sample::generators(&full);
        let tau = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        match noncommuting_witness(&tau, &gens).unwrap() {
            NonCommuting::Found { generator, x, h_tau_x, tau_h_x } => {
                let (g, h) = (&gens[generator], &tau);
                assert_eq!(h_tau_x, h.apply(&g.apply(&x)));
                assert_eq!(tau_h_x, g.apply(&h.apply(&x)));
                assert_ne!(h_tau_x, tau_h_x);
            }
            other => panic!("{other:?}"),
        }
        let swap = TableHomeo::new(&full, vec![(w("12"), w("21")), (w("21"), w("12")), (w("11"), w("11")), (w("22"), w("22"))]).unwrap();
        assert!(matches!(noncommuting_witness(&swap, &gens).unwrap(), NonCommuting::Found { .. }));
        assert_eq!(noncommuting_witness(&TableHomeo::identity(&full), &gens), Err(Error::IdentityElement));
    }

    #[test]
    fn relabelling_has_unit_cocycles() {
        let full = spaces().1;
        let flip = Coder::new(&full, &full, vec![(w("1"), w("2")), (w("2"), w("1"))]).unwrap();
        let h = CoeWitness::new(&full, &full, vec![Stage::Coder(flip)]).unwrap();
        let t = h.derive_cocycles(&params()).unwrap();
        assert_eq!(t.c1.constant_value(), Some(1));
        assert_eq!(t.c2.constant_value(), Some(1));
        assert_eq!(verify_eventual_conjugacy(&h, 0, &params()).unwrap(), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn witness_soundness_and_inverse(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = golden_to_full();
            let (g, full) = spaces();
            let t = h.derive_cocycles(&params()).unwrap();
            for _ in 0..20 {
                let x = sample::random_point(&mut rng, &g);
                let (k, l) = (t.k1.evaluate(&x) as usize, t.l1.evaluate(&x) as usize);
                prop_assert_eq!(h.apply(&x.shift(1)).shift(k), h.apply(&x).shift(l));
                prop_assert_eq!(h.apply_inverse(&h.apply(&x)), x);
                let y = sample::random_point(&mut rng, &full);
                let (k, l) = (t.k2.evaluate(&y) as usize, t.l2.evaluate(&y) as usize);
                prop_assert_eq!(h.apply_inverse(&y.shift(1)).shift(k), h.apply_inverse(&y).shift(l));
                prop_assert_eq!(h.apply(&h.apply_inverse(&y)), y);
            }
        }

        #[test]
        fn psi_is_invertible_homomorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = golden_to_full();
            let (g, full) = spaces();
            let a = sample::random_function(&mut rng, &full, 3, 4);
            let b = sample::random_function(&mut rng, &full, 3, 4);
            let pa = h.psi(&a, &params()).unwrap();
            let pb = h.psi(&b, &params()).unwrap();
            prop_assert_eq!(h.psi(&a.add(&b).unwrap(), &params()).unwrap(), pa.add(&pb).unwrap());
            prop_assert_eq!(h.inverse().psi(&pa, &params()).unwrap(), a);
            let c = sample::random_function(&mut rng, &g, 3, 4);
            prop_assert_eq!(h.psi(&h.inverse().psi(&c, &params()).unwrap(), &params()).unwrap(), c);
        }

        #[test]
        fn xi_is_a_homomorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = golden_to_full();
            let (g, _) = spaces();
            let gens = sample::generators(&g);
            let t1 = sample::random_element(&mut rng, &gens, 3);
            let t2 = sample::random_element(&mut rng, &gens, 3);
            let x1 = h.xi(&t1, 24).unwrap();
            let x2 = h.xi(&t2, 24).unwrap();
            prop_assert_eq!(h.xi(&t2.compose(&t1).unwrap(), 24).unwrap(), x2.compose(&x1).unwrap());
            prop_assert_eq!(h.xi(&t1.invert(), 24).unwrap(), x1.invert());
            prop_assert_eq!(h.inverse().xi(&x1, 24).unwrap(), t1.clone());
            // d_{ξ_h(τ)}(h(x)) = c1^n(x) − c1^m(τ(x)) with n = l_τ(x), m = k_τ(x)
            let t = h.derive_cocycles(&params()).unwrap();
            let data = t1.cocycle_data().unwrap();
            let dxi = x1.cocycle_data().unwrap().d;
            for _ in 0..20 {
                let x = sample::random_point(&mut rng, &g);
                let (n, m) = (data.l.evaluate(&x) as usize, data.k.evaluate(&x) as usize);
                let c1n: i64 = (0..n).map(|i| t.c1.evaluate(&x.shift(i))).sum();
                let tx = t1.apply(&x);
                let c1m: i64 = (0..m).map(|i| t.c1.evaluate(&tx.shift(i))).sum();
                prop_assert_eq!(dxi.evaluate(&h.apply(&x)), c1n - c1m);
                prop_assert_eq!(x1.apply(&h.apply(&x)), h.apply(&t1.apply(&x)));
            }
        }

        #[test]
        fn phi_matches_transported_function(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = golden_to_full();
            let (g, full) = spaces();
            let fa = sample::random_function(&mut rng, &g, 2, 3);
            let phi = sample::random_element(&mut rng, &sample::generators(&full), 3);
            let lhs = phi_h_rho(&h, &fa, &phi, 24).unwrap();
            let rhs = rho(&h.inverse().psi(&fa, &params()).unwrap(), &phi).unwrap().table;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scoe_self_witnesses(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let full = spaces().1;
            let gens = sample::generators(&full);
            let tau = sample::random_element(&mut rng, &gens, 3);
            let h = CoeWitness::from_table(tau.clone());
            let t = h.derive_cocycles(&params()).unwrap();
            prop_assert!(gamma_scoe_residual(&t, &tau).unwrap().is_zero());
            let built = construct_eventual_conjugacy(&h, &tau, &params()).unwrap();
            prop_assert!(built.witness.is_identity());
            let tau2 = h.xi(&tau.invert(), 24).unwrap();
            let d = tau.cocycle_data().unwrap().d;
            prop_assert_eq!(h.push_forward(&d).unwrap(), tau2.cocycle_data().unwrap().d.neg().unwrap());
            let d2 = tau2.cocycle_data().unwrap().d;
            prop_assert_eq!(t.c2.clone(), d2.compose_shift(1).unwrap().sub(&d2).unwrap().add_constant(1).unwrap());

            let ScoeCertificate::Sat { b1, b2: Some(b2), consistency: Some(_) } = scoe_solve(&h, &t, 6, 12).unwrap() else {
                return Err(TestCaseError::fail("self-witness should be SCOE"));
            };
            let n1 = t.c1.sub(&b1.sub(&b1.compose_shift(1).unwrap()).unwrap()).unwrap().constant_value();
            let n2 = t.c2.sub(&b2.sub(&b2.compose_shift(1).unwrap()).unwrap()).unwrap().constant_value();
            prop_assert_eq!((n1, n2), (Some(1), Some(1)));
            // transport of coboundary subgroups
            for g in &gens {
                let a = g.pairs().iter().find(|(s, d)| s.len() > d.len()).unwrap().0.clone();
                let b = StepFunction::tabulate(&full, 0, 8, |w| {
                    if w.len() < a.len() { Ok(None) } else { Ok(Some((w[..a.len()] == a[..]) as i64)) }
                }).unwrap();
                prop_assert!(membership(g, &MembershipMode::Coboundary(b.clone())).unwrap().holds);
                let target = h.push_forward(&b.add(&b1).unwrap()).unwrap();
                let image = h.xi(g, 24).unwrap();
                prop_assert!(membership(&image, &MembershipMode::Coboundary(target)).unwrap().holds);
            }
        }
    }
}
