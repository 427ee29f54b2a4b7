//! The cocycles `ρ^f(x, τ)`, the operator `Ψ_τ`, coboundaries `δ_g` and the
//! subgroups of `Γ_A` they cut out.
//!
//! Orbit sums run from `0` to `l_τ(x)` and `0` to `k_τ(x)` inclusive. The
//! two extra terms are `f(σ^l x)` and `f(σ^k τx)`, which agree because
//! `σ^k τx = σ^l x`, so `ρ^1 = d_τ` and the exclusive reading gives the
//! same function.

use std::sync::Arc;

use crate::error::{checked_sub, Error, Result};
use crate::group::TableHomeo;
use crate::sft::{locate_prefix, Sft, Word};
use crate::step::StepFunction;

/// `x ↦ ρ^f(x, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoTable {
    pub tau: TableHomeo,
    pub f: StepFunction,
    pub table: StepFunction,
}

/// Reads `(l, k, J)` with `τ(w·x) = J·x` off a presentation sorted by source.
struct Presentation<'a> {
    pairs: &'a [(Word, Word)],
}

impl Presentation<'_> {
    fn step(&self, w: &[u8]) -> Option<(usize, usize, Word)> {
        let i = locate_prefix(self.pairs, |p| p.0.as_slice(), w)?;
        let (src, dst) = &self.pairs[i];
        Some((src.len(), dst.len(), dst.concat(&w[src.len()..])))
    }

    fn max_src(&self) -> usize {
        self.pairs.iter().map(|p| p.0.len()).max().unwrap_or(0)
    }
}

fn same_space(f: &StepFunction, sft: &Arc<Sft>) -> Result<()> {
    if **f.sft() == **sft {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

fn rho_on(f: &StepFunction, sft: &Arc<Sft>, pairs: &[(Word, Word)]) -> Result<StepFunction> {
    same_space(f, sft)?;
    let p = Presentation { pairs };
    let cap = p.max_src() + f.depth() + 2;
    StepFunction::tabulate(sft, 0, cap, |w| {
        let Some((l, k, j)) = p.step(w) else { return Ok(None) };
        let (Some(a), Some(b)) = (f.sum_over(w, 0..l + 1)?, f.sum_over(&j, 0..k + 1)?) else {
            return Ok(None);
        };
        checked_sub(a, b).map(Some)
    })
}

pub fn rho(f: &StepFunction, tau: &TableHomeo) -> Result<RhoTable> {
    let table = rho_on(f, tau.sft(), tau.pairs())?;
    Ok(RhoTable { tau: tau.clone(), f: f.clone(), table })
}

/// `ρ^f(·, τ)` computed from an arbitrary valid presentation of `τ`.
pub fn rho_for_presentation(f: &StepFunction, pairs: &[(Word, Word)]) -> Result<StepFunction> {
    let sft = f.sft().clone();
    TableHomeo::new(&sft, pairs.to_vec())?;
    let mut sorted = pairs.to_vec();
    sorted.sort();
    rho_on(f, &sft, &sorted)
}

/// `Ψ_τ(f)(x) = Σ_{i=0}^{l_{τ,1}(x)} f(σ^i τx) − Σ_{j=0}^{k_{τ,1}(x)} f(σ^j τσx)`
/// with `l_{τ,1}(x) = l_τ(σx) + k_τ(x) + 1` and `k_{τ,1}(x) = k_τ(σx) + l_τ(x)`.
pub fn psi_tau(tau: &TableHomeo, f: &StepFunction) -> Result<StepFunction> {
    let sft = tau.sft();
    same_space(f, sft)?;
    let p = Presentation { pairs: tau.pairs() };
    let cap = 2 * p.max_src() + f.depth() + 3;
    StepFunction::tabulate(sft, 1, cap, |w| {
        let Some((l0, k0, j0)) = p.step(w) else { return Ok(None) };
        let Some((l1, k1, j1)) = p.step(&w[1..]) else { return Ok(None) };
        let upper = l1 + k0 + 1;
        let lower = k1 + l0;
        let (Some(a), Some(b)) = (f.sum_over(&j0, 0..upper + 1)?, f.sum_over(&j1, 0..lower + 1)?) else {
            return Ok(None);
        };
        checked_sub(a, b).map(Some)
    })
}

/// `δ_g(x, τ) = g(x) − g(τ(x))`.
pub fn delta(g: &StepFunction, tau: &TableHomeo) -> Result<StepFunction> {
    same_space(g, tau.sft())?;
    g.sub(&tau.pull_back(g)?)
}

/// `1_b = 1 − b + b∘σ`.
pub fn one_b(b: &StepFunction) -> Result<StepFunction> {
    b.compose_shift(1)?.sub(b)?.add_constant(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipMode {
    /// `d_τ ≡ 0`.
    Af,
    /// `ρ^f(·, τ) ≡ 0`.
    Cocycle(StepFunction),
    /// `d_τ = b − b∘τ`.
    Coboundary(StepFunction),
}

/// Verdict with, on failure, the first cylinder where the identity fails
/// and the value of the defect there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub holds: bool,
    pub witness: Option<(Word, i64)>,
}

pub fn membership(tau: &TableHomeo, mode: &MembershipMode) -> Result<Membership> {
    let defect = match mode {
        MembershipMode::Af => tau.cocycle_data()?.d,
        MembershipMode::Cocycle(f) => rho(f, tau)?.table,
        MembershipMode::Coboundary(b) => tau.cocycle_data()?.d.sub(&delta(b, tau)?)?,
    };
    let witness = defect.first_nonzero();
    Ok(Membership { holds: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroProbe {
    Zero,
    Counterexample {
        tau: TableHomeo,
        generator: (u8, u8, usize),
        cylinder: Word,
        value: i64,
    },
}

/// Scans `gen_swap(a, b, m)` with `a`, then `b`, then `m ≤ max(depth f, 1)`
/// ascending and returns the first nonzero entry of a `ρ^f`-table. On
/// `U_{a^m b}` the generator acts as `σ` with `(k, l) = (0, 1)`, so
/// `ρ^f = f` there, and every cylinder on which `f ≠ 0` meets such a piece
/// with `m` in range.
pub fn zero_probe(f: &StepFunction) -> Result<ZeroProbe> {
    if f.is_zero() {
        return Ok(ZeroProbe::Zero);
    }
    let sft = f.sft();
    let n = sft.size() as u8;
    let max_m = f.depth().max(1);
    for a in 1..=n {
        for b in 1..=n {
            for m in 1..=max_m {
                let Ok(tau) = TableHomeo::gen_swap(sft, a, b, m) else { continue };
                if let Some((cylinder, value)) = rho(f, &tau)?.table.first_nonzero() {
                    return Ok(ZeroProbe::Counterexample { tau, generator: (a, b, m), cylinder, value });
                }
            }
        }
    }
    Err(Error::InvalidArgument("no generator detects a nonzero function".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn rho_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let t = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let one = StepFunction::constant(&full, 1);
        assert_eq!(rho(&one, &t).unwrap().table, t.cocycle_data().unwrap().d);
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(rho(&g, &t).unwrap().table, f(&full, 2, &[("11", 0), ("12", 3), ("21", -3), ("22", -3)]));
        let golden = Arc::new(Sft::golden_mean());
        let t = TableHomeo::gen_swap(&golden, 1, 2, 2).unwrap();
        let h = f(&golden, 2, &[("11", 4), ("12", -7), ("21", 2)]);
        let r = rho(&h, &t).unwrap().table;
        for x in sft_words(&golden, 6).iter().filter(|x| x.starts_with(&[1, 1, 2])) {
            assert_eq!(r.value_on(x), h.value_on(x));
        }
    }

    fn sft_words(sft: &Sft, len: usize) -> Vec<Word> {
        sft.enumerate_words(len)
    }

    #[test]
    fn psi_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let t = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let one = StepFunction::constant(&full, 1);
        let p = psi_tau(&t, &one).unwrap();
        assert_eq!(p.value_on(&w("112")), Some(2));
        let d = t.cocycle_data().unwrap().d;
        assert_eq!(p, d.compose_shift(1).unwrap().sub(&d).unwrap().add_constant(1).unwrap());
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(psi_tau(&TableHomeo::identity(&full), &g).unwrap(), g);
    }

    #[test]
    fn delta_and_one_b_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let t = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        // l with the minimal presentation (1, 0) on U_12, (0, 1) on U_2
        let b_mu = f(&full, 2, &[("11", 0), ("12", 1), ("21", 0), ("22", 0)]);
        assert_eq!(delta(&b_mu, &t).unwrap(), t.cocycle_data().unwrap().d);
        let table_l = t.cocycle_data().unwrap().l;
        assert_eq!(delta(&table_l, &t).unwrap(), t.cocycle_data().unwrap().d);
        assert!(delta(&StepFunction::constant(&full, 4), &t).unwrap().is_zero());
        assert_eq!(one_b(&StepFunction::zero(&full)).unwrap().constant_value(), Some(1));
        let ob = one_b(&b_mu).unwrap();
        assert_eq!(ob.depth(), 3);
        assert_eq!(ob.value_on(&w("112")), Some(2));
    }

    #[test]
    fn membership_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let t = TableHomeo::gen_swap(&full, 1, 2, 1).unwrap();
        let af = membership(&t, &MembershipMode::Af).unwrap();
        assert_eq!(af, Membership { holds: false, witness: Some((w("12"), 1)) });
        let b_mu = f(&full, 2, &[("11", 0), ("12", 1), ("21", 0), ("22", 0)]);
        assert!(membership(&t, &MembershipMode::Coboundary(b_mu)).unwrap().holds);
        let swap = TableHomeo::new(&full, vec![(w("12"), w("21")), (w("21"), w("12")), (w("11"), w("11")), (w("22"), w("22"))]).unwrap();
        assert!(membership(&swap, &MembershipMode::Af).unwrap().holds);
    }

    #[test]
    fn zero_probe_examples() {
        let full = Arc::new(Sft::full_shift(2));
        assert_eq!(zero_probe(&StepFunction::zero(&full)).unwrap(), ZeroProbe::Zero);
        match zero_probe(&f(&full, 1, &[("1", 3), ("2", 5)])).unwrap() {
            ZeroProbe::Counterexample { generator, cylinder, value, .. } => {
                assert_eq!((generator, cylinder, value), ((1, 2, 1), w("12"), 3));
            }
            other => panic!("{other:?}"),
        }
        let golden = Arc::new(Sft::golden_mean());
        match zero_probe(&f(&golden, 1, &[("1", 0), ("2", -1)])).unwrap() {
            ZeroProbe::Counterexample { tau, cylinder, value, .. } => {
                assert_ne!(value, 0);
                assert_eq!(rho(&f(&golden, 1, &[("1", 0), ("2", -1)]), &tau).unwrap().table.value_on(&cylinder), Some(value));
            }
            other => panic!("{other:?}"),
        }
    }

    fn setup(rng: &mut ChaCha8Rng, sft: &Arc<Sft>) -> (StepFunction, TableHomeo, TableHomeo) {
        let gens = sample::generators(sft);
        let f = sample::random_function(rng, sft, 3, 4);
        (f, sample::random_element(rng, &gens, 3), sample::random_element(rng, &gens, 3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cocycle_identities(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for sft in [Arc::new(Sft::full_shift(2)), Arc::new(Sft::golden_mean())] {
                let (f, t1, t2) = setup(&mut rng, &sft);
                let r1 = rho(&f, &t1).unwrap().table;
                let r2 = rho(&f, &t2).unwrap().table;
                let r21 = rho(&f, &t2.compose(&t1).unwrap()).unwrap().table;
                prop_assert_eq!(&r21, &r1.add(&t1.pull_back(&r2).unwrap()).unwrap());
                let inv = t1.invert();
                prop_assert_eq!(rho(&f, &inv).unwrap().table, inv.pull_back(&r1).unwrap().neg().unwrap());
                let lhs = r1.sub(&r1.compose_shift(1).unwrap()).unwrap();
                prop_assert_eq!(lhs, f.sub(&psi_tau(&t1, &f).unwrap()).unwrap());
                let fs = f.sub(&f.compose_shift(1).unwrap()).unwrap();
                prop_assert_eq!(rho(&fs, &t1).unwrap().table, delta(&f, &t1).unwrap());
                prop_assert_eq!(rho(&StepFunction::constant(&sft, 1), &t1).unwrap().table, t1.cocycle_data().unwrap().d);
            }
        }

        #[test]
        fn rho_matches_pointwise_sums(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sft = Arc::new(Sft::golden_mean());
            let (f, t, _) = setup(&mut rng, &sft);
            let table = rho(&f, &t).unwrap().table;
            let data = t.cocycle_data().unwrap();
            for _ in 0..20 {
                let x = sample::random_point(&mut rng, &sft);
                let (l, k) = (data.l.evaluate(&x) as usize, data.k.evaluate(&x) as usize);
                let tx = t.apply(&x);
                // exclusive sums, as an independent reading
                let a: i64 = (0..l).map(|i| f.evaluate(&x.shift(i))).sum();
                let b: i64 = (0..k).map(|j| f.evaluate(&tx.shift(j))).sum();
                prop_assert_eq!(table.evaluate(&x), a - b);
            }
        }

        #[test]
        fn psi_preserves_cycle_sums(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sft = Arc::new(Sft::golden_mean());
            let (f, t, _) = setup(&mut rng, &sft);
            let p = psi_tau(&t, &f).unwrap();
            for c in sft.primitive_cycles(6) {
                prop_assert_eq!(p.cycle_sum(&c).unwrap(), f.cycle_sum(&c).unwrap());
            }
        }

        #[test]
        fn coboundary_cocycles_are_deltas(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sft = Arc::new(Sft::full_shift(2));
            let (g, t, _) = setup(&mut rng, &sft);
            let cob = g.sub(&g.compose_shift(1).unwrap()).unwrap();
            prop_assert_eq!(rho(&cob, &t).unwrap().table, delta(&g, &t).unwrap());
        }

        #[test]
        fn presentation_independence(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sft = Arc::new(Sft::golden_mean());
            let (f, t, _) = setup(&mut rng, &sft);
            let mut pairs = Vec::new();
            for (s, d) in t.pairs() {
                for c in sft.successors(s.last().copied()) {
                    pairs.push((s.concat(&[c]), d.concat(&[c])));
                }
            }
            prop_assert_eq!(rho_for_presentation(&f, &pairs).unwrap(), rho(&f, &t).unwrap().table);
        }

        #[test]
        fn subgroup_coincidences(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for sft in [Arc::new(Sft::full_shift(2)), Arc::new(Sft::golden_mean())] {
                let (f, t, _) = setup(&mut rng, &sft);
                let b = sample::random_function(&mut rng, &sft, 2, 2);
                let af = membership(&t, &MembershipMode::Af).unwrap().holds;
                prop_assert_eq!(af, membership(&t, &MembershipMode::Cocycle(StepFunction::constant(&sft, 1))).unwrap().holds);
                prop_assert_eq!(af, membership(&t, &MembershipMode::Coboundary(StepFunction::zero(&sft))).unwrap().holds);
                let base = membership(&t, &MembershipMode::Cocycle(f.clone())).unwrap().holds;
                for m in [-2, -1, 2, 3] {
                    prop_assert_eq!(base, membership(&t, &MembershipMode::Cocycle(f.scale(m).unwrap())).unwrap().holds);
                }
                let cb = membership(&t, &MembershipMode::Coboundary(b.clone())).unwrap().holds;
                prop_assert_eq!(cb, membership(&t, &MembershipMode::Coboundary(b.add_constant(5).unwrap())).unwrap().holds);
                prop_assert_eq!(cb, membership(&t, &MembershipMode::Cocycle(one_b(&b).unwrap())).unwrap().holds);
            }
        }
    }
}
