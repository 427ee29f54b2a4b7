//! Seeded property suites over every module, runnable outside the test
//! harness. Each suite draws from its own generator derived from the run
//! seed, so results do not depend on scheduling.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{delta, membership, one_b, psi_tau, rho, zero_probe, MembershipMode, ZeroProbe};
use crate::coe::{
    construct_eventual_conjugacy, gamma_scoe_residual, phi_h_rho, scoe_solve, Coder, CoeWitness, DeriveParams,
    ScoeCertificate, Stage,
};
use crate::error::Error;
use crate::group::{KldData, TableHomeo};
use crate::sample::{generators, random_element, random_function, random_point};
use crate::sft::{EpPoint, Sft, Word};
use crate::step::{default_bounds, is_sigma_coboundary, sigma_coboundary_of, CoboundaryCertificate, StepFunction};

/// A failed check, or a library error raised while checking.
#[derive(Debug)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(format!("{}: {e}", e.name()))
    }
}

type Check = std::result::Result<usize, Failure>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure(format!($($msg)+)));
        }
    };
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    /// Instances checked.
    pub cases: usize,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Suite = fn(&mut ChaCha8Rng) -> Check;

pub const SUITES: &[(&str, Suite)] = &[
    ("sft.words_extend", words_extend),
    ("sft.shift_composition", shift_composition),
    ("sft.example_invariants", example_invariants),
    ("sft.point_normal_form", point_normal_form),
    ("step.orbit_sum_split", orbit_sum_split),
    ("step.coboundary_round_trip", coboundary_round_trip),
    ("step.certificates_exclusive", certificates_exclusive),
    ("step.pointwise_homomorphism", pointwise_homomorphism),
    ("group.axioms", group_axioms),
    ("group.composition_laws", composition_laws),
    ("group.d_refinement", d_refinement),
    ("group.orbit_relation", orbit_relation),
    ("cocycle.identity", cocycle_identity),
    ("cocycle.inverse_law", inverse_law),
    ("cocycle.residual_identities", residual_identities),
    ("cocycle.rho_one_is_d", rho_one_is_d),
    ("cocycle.closure", closure),
    ("cocycle.subgroup_coincidences", subgroup_coincidences),
    ("cocycle.psi_cycle_sums", psi_cycle_sums),
    ("cocycle.coboundary_deltas", coboundary_deltas),
    ("cocycle.zero_probe", zero_probe_suite),
    ("coe.witness_soundness", witness_soundness),
    ("coe.psi_homomorphism", psi_homomorphism),
    ("coe.xi_homomorphism", xi_homomorphism),
    ("coe.rho_transport", rho_transport),
    ("coe.subgroup_transport", subgroup_transport),
    ("coe.scoe_constants", scoe_constants),
    ("coe.gamma_identities", gamma_identities),
    ("coe.unit_cocycles", unit_cocycles),
];

fn suite_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_one(index: usize, seed: u64) -> SuiteOutcome {
    let (name, suite) = SUITES[index];
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(seed, index));
    let start = Instant::now();
    let result = suite(&mut rng);
    let elapsed = start.elapsed();
    match result {
        Ok(cases) => SuiteOutcome { name, cases, failure: None, elapsed },
        Err(Failure(msg)) => SuiteOutcome { name, cases: 0, failure: Some(msg), elapsed },
    }
}

/// Runs the named suites (all when `only` is empty) on worker threads and
/// returns outcomes in suite order.
pub fn run(seed: u64, only: &[String]) -> std::result::Result<Vec<SuiteOutcome>, Error> {
    for name in only {
        if !SUITES.iter().any(|(n, _)| n == name) {
            return Err(Error::InvalidArgument(format!("unknown suite {name:?}")));
        }
    }
    let picked: Vec<usize> = (0..SUITES.len())
        .filter(|&i| only.is_empty() || only.iter().any(|n| n == SUITES[i].0))
        .collect();
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = picked.iter().map(|&i| s.spawn(move || run_one(i, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    Ok(outcomes)
}

fn spaces() -> [Arc<Sft>; 2] {
    [Arc::new(Sft::full_shift(2)), Arc::new(Sft::golden_mean())]
}

fn corpus() -> Vec<Arc<Sft>> {
    let sparse = Sft::validate(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]).expect("irreducible");
    vec![
        Arc::new(Sft::full_shift(2)),
        Arc::new(Sft::golden_mean()),
        Arc::new(Sft::full_shift(3)),
        Arc::new(sparse),
    ]
}

fn orbit_sum_at(f: &StepFunction, x: &EpPoint, n: usize) -> i64 {
    (0..n).map(|i| f.evaluate(&x.shift(i))).sum()
}

// ---- sft ----

fn words_extend(_: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in corpus() {
        for k in 0..6 {
            let mut heads: Vec<Word> = sft.enumerate_words(k + 1).iter().map(|w| Word::from(&w[..k])).collect();
            heads.dedup();
            ensure!(heads == sft.enumerate_words(k), "length-{} words do not restrict onto length-{k}", k + 1);
            cases += 1;
        }
    }
    Ok(cases)
}

fn shift_composition(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in corpus() {
        for _ in 0..25 {
            let x = random_point(rng, &sft);
            for m in 0..=16 {
                ensure!(x.shift(m + 1) == x.shift(m).shift(1), "shift law fails at {x}, m = {m}");
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn example_invariants(_: &mut ChaCha8Rng) -> Check {
    let [full, golden] = spaces();
    let (a, b) = (golden.flow_invariants()?, full.flow_invariants()?);
    ensure!(a.sign == b.sign && a.bf_group == b.bf_group, "invariants differ: {a:?} vs {b:?}");
    ensure!(a.sign == -1 && a.bf_group.is_empty(), "unexpected invariants {a:?}");
    Ok(1)
}

fn point_normal_form(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in corpus() {
        for _ in 0..50 {
            let x = random_point(rng, &sft);
            let (u, v) = (x.preperiod().clone(), x.cycle().clone());
            let unrolled = EpPoint::new(&sft, u.concat(&v[..1]), Word::from([&v[1..], &v[..1]].concat()))?;
            let doubled = EpPoint::new(&sft, u.clone(), v.concat(&v))?;
            ensure!(unrolled == x && doubled == x, "representations of {x} disagree");
            ensure!(EpPoint::new(&sft, u, v)? == x, "normal form of {x} is not stable");
            cases += 1;
        }
    }
    Ok(cases)
}

// ---- step ----

fn orbit_sum_split(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        for _ in 0..10 {
            let f = random_function(rng, &sft, 3, 5);
            let (n, m) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            let (fnm, fm, fn_) = (f.orbit_sum(n + m)?, f.orbit_sum(m)?, f.orbit_sum(n)?);
            for _ in 0..50 {
                let x = random_point(rng, &sft);
                let rhs = fm.evaluate(&x) + fn_.evaluate(&x.shift(m));
                ensure!(fnm.evaluate(&x) == rhs, "f^(n+m) split fails for n={n}, m={m} at {x}");
                ensure!(fm.evaluate(&x) == orbit_sum_at(&f, &x, m), "f^m disagrees with direct sum at {x}");
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn coboundary_round_trip(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in corpus().into_iter().take(3) {
        for _ in 0..20 {
            let g = random_function(rng, &sft, 2, 5);
            let f = sigma_coboundary_of(&g)?;
            let (d, l) = default_bounds(&f);
            match is_sigma_coboundary(&f, d, l)? {
                CoboundaryCertificate::Sat { g: g2 } => {
                    ensure!(sigma_coboundary_of(&g2)? == f, "returned g does not reproduce f");
                }
                other => ensure!(false, "coboundary of {g:?} reported {other:?}"),
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn certificates_exclusive(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        for _ in 0..40 {
            let f = random_function(rng, &sft, 2, 2);
            match is_sigma_coboundary(&f, 4, 6)? {
                CoboundaryCertificate::Unsat { cycle, sum } => {
                    let x = EpPoint::new(&sft, Word::empty(), cycle.clone())?;
                    let direct = orbit_sum_at(&f, &x, cycle.len());
                    ensure!(direct == sum && sum != 0, "UNSAT certificate {cycle} is not an obstruction");
                }
                CoboundaryCertificate::Sat { g } => {
                    ensure!(sigma_coboundary_of(&g)? == f, "SAT certificate fails");
                    for c in sft.primitive_cycles(6) {
                        ensure!(f.cycle_sum(&c)? == 0, "SAT function has nonzero sum on {c}");
                    }
                }
                CoboundaryCertificate::Inconclusive { .. } => {}
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn pointwise_homomorphism(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        for _ in 0..20 {
            let f = random_function(rng, &sft, 3, 5);
            let g = random_function(rng, &sft, 3, 5);
            let (sum, neg, shifted) = (f.add(&g)?, f.neg()?, f.compose_shift(2)?);
            for _ in 0..10 {
                let x = random_point(rng, &sft);
                ensure!(sum.evaluate(&x) == f.evaluate(&x) + g.evaluate(&x), "f+g fails at {x}");
                ensure!(neg.evaluate(&x) == -f.evaluate(&x), "-f fails at {x}");
                ensure!(shifted.evaluate(&x) == f.evaluate(&x.shift(2)), "f∘σ² fails at {x}");
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- group ----

fn group_axioms(_: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        let gens: Vec<TableHomeo> = generators(&sft).into_iter().take(4).collect();
        let mut words = vec![TableHomeo::identity(&sft)];
        let mut frontier = words.clone();
        for _ in 0..3 {
            let mut next = Vec::new();
            for t in &frontier {
                for g in &gens {
                    next.push(g.compose(t)?);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        for a in &words {
            ensure!(a.compose(&a.invert())?.is_identity(), "a∘a⁻¹ ≠ id for {a:?}");
            ensure!(a.invert().compose(a)?.is_identity(), "a⁻¹∘a ≠ id for {a:?}");
            cases += 1;
        }
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    ensure!(a.compose(&b.compose(c)?)? == a.compose(b)?.compose(c)?, "associativity fails");
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

fn composition_laws(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        let gens = generators(&sft);
        for _ in 0..100 {
            let t1 = random_element(rng, &gens, 3);
            let t2 = random_element(rng, &gens, 3);
            let c = t2.compose(&t1)?;
            let lk = t2.compose_kld(&t1)?;
            ensure!(c.satisfies_orbit_relation(&lk.l, &lk.k)?, "l, k laws violate the orbit relation");
            ensure!(lk.l.sub(&lk.k)? == lk.d, "composed l − k differs from d");
            let (d1, d2) = (t1.cocycle_data()?.d, t2.cocycle_data()?.d);
            ensure!(lk.d == d1.add(&t1.pull_back(&d2)?)?, "d law fails");
            cases += 1;
        }
    }
    Ok(cases)
}

fn d_refinement(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        let gens = generators(&sft);
        for _ in 0..30 {
            let t = random_element(rng, &gens, 4);
            let i = rng.gen_range(0..t.pairs().len());
            let mut pairs = Vec::new();
            for (j, (s, d)) in t.pairs().iter().enumerate() {
                if j == i {
                    for c in sft.successors(s.last().copied()) {
                        pairs.push((s.concat(&[c]), d.concat(&[c])));
                    }
                } else {
                    pairs.push((s.clone(), d.clone()));
                }
            }
            ensure!(KldData::from_presentation(&sft, &pairs)?.d == t.cocycle_data()?.d, "d changed under refinement");
            ensure!(TableHomeo::new(&sft, pairs)? == t, "refined table does not coarsen back");
            cases += 1;
        }
    }
    Ok(cases)
}

fn orbit_relation(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in corpus().into_iter().take(3) {
        let gens = generators(&sft);
        for _ in 0..20 {
            let t = random_element(rng, &gens, 4);
            let data = t.cocycle_data()?;
            for _ in 0..10 {
                let x = random_point(rng, &sft);
                let (l, k) = (data.l.evaluate(&x) as usize, data.k.evaluate(&x) as usize);
                ensure!(t.apply(&x).shift(k) == x.shift(l), "σ^k τx ≠ σ^l x at {x}");
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- cocycle ----

fn instances(rng: &mut ChaCha8Rng, count: usize) -> Vec<(StepFunction, TableHomeo, TableHomeo)> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let sft = &spaces()[i % 2];
        let gens = generators(sft);
        let f = random_function(rng, sft, 3, 4);
        out.push((f, random_element(rng, &gens, 3), random_element(rng, &gens, 3)));
    }
    out
}

fn cocycle_identity(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 100);
    for (f, t1, t2) in &cases {
        let r1 = rho(f, t1)?.table;
        let r2 = rho(f, t2)?.table;
        let r21 = rho(f, &t2.compose(t1)?)?.table;
        ensure!(r21 == r1.add(&t1.pull_back(&r2)?)?, "ρ^f(x, τ2∘τ1) ≠ ρ^f(x, τ1) + ρ^f(τ1 x, τ2)");
    }
    Ok(cases.len())
}

fn inverse_law(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 100);
    for (f, t, _) in &cases {
        let inv = t.invert();
        let r = rho(f, t)?.table;
        ensure!(rho(f, &inv)?.table == inv.pull_back(&r)?.neg()?, "ρ^f(x, τ⁻¹) ≠ −ρ^f(τ⁻¹x, τ)");
    }
    Ok(cases.len())
}

fn residual_identities(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 100);
    for (f, t, _) in &cases {
        let r = rho(f, t)?.table;
        let lhs = r.sub(&r.compose_shift(1)?)?;
        ensure!(lhs == f.sub(&psi_tau(t, f)?)?, "ρ^f − ρ^f∘σ ≠ f − Ψ_τ(f)");
        let fs = f.sub(&f.compose_shift(1)?)?;
        ensure!(rho(&fs, t)?.table == delta(f, t)?, "ρ^(f − f∘σ) ≠ δ_f");
    }
    Ok(cases.len())
}

fn rho_one_is_d(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 100);
    for (f, t, _) in &cases {
        let one = StepFunction::constant(f.sft(), 1);
        ensure!(rho(&one, t)?.table == t.cocycle_data()?.d, "ρ^1 ≠ d_τ for {t:?}");
    }
    Ok(cases.len())
}

fn modes(f: &StepFunction, b: &StepFunction) -> [MembershipMode; 3] {
    [MembershipMode::Af, MembershipMode::Cocycle(f.clone()), MembershipMode::Coboundary(b.clone())]
}

fn closure(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        let gens = generators(&sft);
        for _ in 0..10 {
            let f = random_function(rng, &sft, 1, 1);
            let b = random_function(rng, &sft, 1, 1);
            for mode in modes(&f, &b) {
                let members: Vec<TableHomeo> = (0..30)
                    .map(|_| random_element(rng, &gens, 3))
                    .filter(|t| membership(t, &mode).map(|m| m.holds).unwrap_or(false))
                    .take(4)
                    .collect();
                for t1 in &members {
                    ensure!(membership(&t1.invert(), &mode)?.holds, "inverse leaves the subgroup");
                    for t2 in &members {
                        ensure!(membership(&t2.compose(t1)?, &mode)?.holds, "product leaves the subgroup");
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(cases)
}

fn subgroup_coincidences(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for i in 0..200 {
        let sft = &spaces()[i % 2];
        let gens = generators(sft);
        let t = random_element(rng, &gens, 3);
        let f = random_function(rng, sft, 2, 3);
        let b = random_function(rng, sft, 2, 2);
        let holds = |mode: MembershipMode| membership(&t, &mode).map(|m| m.holds);
        let af = holds(MembershipMode::Af)?;
        ensure!(af == holds(MembershipMode::Cocycle(StepFunction::constant(sft, 1)))?, "AF ≠ Γ_(A,1)");
        ensure!(af == holds(MembershipMode::Coboundary(StepFunction::zero(sft)))?, "AF ≠ Γ_A^0");
        let base = holds(MembershipMode::Cocycle(f.clone()))?;
        for m in [-2, -1, 2, 3] {
            ensure!(base == holds(MembershipMode::Cocycle(f.scale(m)?))?, "Γ_(A,{m}f) ≠ Γ_(A,f)");
        }
        let cb = holds(MembershipMode::Coboundary(b.clone()))?;
        ensure!(cb == holds(MembershipMode::Coboundary(b.add_constant(rng.gen_range(-3..=3))?))?, "Γ_A^(m+b) ≠ Γ_A^b");
        ensure!(cb == holds(MembershipMode::Cocycle(one_b(&b)?))?, "Γ_A^b ≠ Γ_(A,1_b)");
        cases += 1;
    }
    Ok(cases)
}

fn psi_cycle_sums(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 40);
    for (f, t, _) in &cases {
        let p = psi_tau(t, f)?;
        for c in f.sft().primitive_cycles(6) {
            ensure!(p.cycle_sum(&c)? == f.cycle_sum(&c)?, "Ψ_τ changes the sum over {c}");
        }
    }
    Ok(cases.len())
}

fn coboundary_deltas(rng: &mut ChaCha8Rng) -> Check {
    let cases = instances(rng, 60);
    for (g, t, _) in &cases {
        let cob = g.sub(&g.compose_shift(1)?)?;
        ensure!(rho(&cob, t)?.table == delta(g, t)?, "ρ^(g − g∘σ) ≠ δ_g");
    }
    Ok(cases.len())
}

fn zero_probe_suite(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for sft in spaces() {
        for _ in 0..30 {
            let f = random_function(rng, &sft, 2, 1);
            match zero_probe(&f)? {
                ZeroProbe::Zero => ensure!(f.is_zero(), "nonzero function probed as zero"),
                ZeroProbe::Counterexample { tau, cylinder, value, .. } => {
                    ensure!(!f.is_zero() && value != 0, "counterexample for the zero function");
                    ensure!(rho(&f, &tau)?.table.value_on(&cylinder) == Some(value), "counterexample value is wrong");
                }
            }
            cases += 1;
        }
    }
    Ok(cases)
}

// ---- coe ----

fn golden_to_full() -> std::result::Result<CoeWitness, Error> {
    let [full, golden] = spaces();
    let pairs = vec![(Word::from(vec![1]), Word::from(vec![1])), (Word::from(vec![2, 1]), Word::from(vec![2]))];
    let coder = Coder::new(&golden, &full, pairs)?;
    CoeWitness::new(&golden, &full, vec![Stage::Coder(coder)])
}

fn params() -> DeriveParams {
    DeriveParams { depth: 3, ..DeriveParams::default() }
}

fn witness_soundness(rng: &mut ChaCha8Rng) -> Check {
    let [full, _] = spaces();
    let gens = generators(&full);
    let mut witnesses = vec![golden_to_full()?];
    witnesses.push(CoeWitness::from_table(random_element(rng, &gens, 3)));
    let mut cases = 0;
    for h in &witnesses {
        let t = h.derive_cocycles(&params())?;
        for _ in 0..100 {
            let x = random_point(rng, h.source());
            let (k, l) = (t.k1.evaluate(&x) as usize, t.l1.evaluate(&x) as usize);
            ensure!(h.apply(&x.shift(1)).shift(k) == h.apply(&x).shift(l), "forward relation fails at {x}");
            ensure!(h.apply_inverse(&h.apply(&x)) == x, "h⁻¹h ≠ id at {x}");
            let y = random_point(rng, h.target());
            let (k, l) = (t.k2.evaluate(&y) as usize, t.l2.evaluate(&y) as usize);
            ensure!(
                h.apply_inverse(&y.shift(1)).shift(k) == h.apply_inverse(&y).shift(l),
                "inverse relation fails at {y}"
            );
            cases += 1;
        }
    }
    Ok(cases)
}

fn psi_homomorphism(rng: &mut ChaCha8Rng) -> Check {
    let h = golden_to_full()?;
    let inv = h.inverse();
    for _ in 0..20 {
        let a = random_function(rng, h.target(), 3, 4);
        let b = random_function(rng, h.target(), 3, 4);
        let (pa, pb) = (h.psi(&a, &params())?, h.psi(&b, &params())?);
        ensure!(h.psi(&a.add(&b)?, &params())? == pa.add(&pb)?, "Ψ_h is not additive");
        ensure!(inv.psi(&pa, &params())? == a, "Ψ_(h⁻¹)∘Ψ_h ≠ id");
    }
    Ok(20)
}

fn xi_homomorphism(rng: &mut ChaCha8Rng) -> Check {
    let h = golden_to_full()?;
    let gens = generators(h.source());
    let cap = crate::DEFAULT_DEPTH_CAP;
    for _ in 0..20 {
        let t1 = random_element(rng, &gens, 3);
        let t2 = random_element(rng, &gens, 3);
        let (x1, x2) = (h.xi(&t1, cap)?, h.xi(&t2, cap)?);
        ensure!(h.xi(&t2.compose(&t1)?, cap)? == x2.compose(&x1)?, "ξ_h(τ2∘τ1) ≠ ξ_h(τ2)∘ξ_h(τ1)");
        ensure!(h.xi(&t1.invert(), cap)? == x1.invert(), "ξ_h(τ⁻¹) ≠ ξ_h(τ)⁻¹");
        for _ in 0..5 {
            let x = random_point(rng, h.source());
            ensure!(x1.apply(&h.apply(&x)) == h.apply(&t1.apply(&x)), "ξ_h(τ)∘h ≠ h∘τ at {x}");
        }
    }
    Ok(20)
}

fn rho_transport(rng: &mut ChaCha8Rng) -> Check {
    let h = golden_to_full()?;
    let gens = generators(h.target());
    for _ in 0..20 {
        let f = random_function(rng, h.source(), 2, 3);
        let phi = random_element(rng, &gens, 3);
        let lhs = phi_h_rho(&h, &f, &phi, crate::DEFAULT_DEPTH_CAP)?;
        let rhs = rho(&h.inverse().psi(&f, &params())?, &phi)?.table;
        ensure!(lhs == rhs, "Φ_h(ρ^f) ≠ ρ^(Ψ_(h⁻¹)(f)) at φ = {phi:?}");
    }
    Ok(20)
}

/// `1` on `U_w`, `0` elsewhere.
fn indicator(sft: &Arc<Sft>, w: &[u8]) -> std::result::Result<StepFunction, Error> {
    StepFunction::tabulate(sft, 0, w.len(), |v| Ok((v.len() >= w.len()).then(|| (v[..w.len()] == *w) as i64)))
}

/// Self-witnesses `h = τ0` with their `b1`, which exist for every `τ0`.
fn scoe_witnesses(rng: &mut ChaCha8Rng, count: usize) -> std::result::Result<Vec<(CoeWitness, StepFunction, Option<StepFunction>)>, Failure> {
    let mut out = Vec::new();
    for i in 0..count {
        let sft = &spaces()[i % 2];
        let h = CoeWitness::from_table(random_element(rng, &generators(sft), 3));
        let t = h.derive_cocycles(&params())?;
        match scoe_solve(&h, &t, 6, 12)? {
            ScoeCertificate::Sat { b1, b2, .. } => out.push((h, b1, b2)),
            other => return Err(Failure(format!("self-witness not SCOE: {other:?}"))),
        }
    }
    Ok(out)
}

fn subgroup_transport(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for (h, b1, _) in scoe_witnesses(rng, 6)? {
        let sft = h.source();
        let gens = generators(sft);
        let mut members: Vec<(StepFunction, TableHomeo)> = Vec::new();
        for g in &gens {
            let piece = g.pairs().iter().find(|(s, d)| s.len() > d.len()).expect("generator shortens a piece");
            members.push((indicator(sft, &piece.0)?, g.clone()));
        }
        for _ in 0..40 {
            let f = random_function(rng, sft, 1, 1);
            let t = random_element(rng, &gens, 2);
            if membership(&t, &MembershipMode::Coboundary(f.clone()))?.holds {
                members.push((f, t));
            }
        }
        for (f, t) in members {
            ensure!(membership(&t, &MembershipMode::Coboundary(f.clone()))?.holds, "sample is not in Γ_A^f");
            let target = h.push_forward(&f.add(&b1)?)?;
            let image = h.xi(&t, crate::DEFAULT_DEPTH_CAP)?;
            ensure!(membership(&image, &MembershipMode::Coboundary(target))?.holds, "ξ_h(τ) leaves Γ_B^((f+b1)∘h⁻¹)");
            cases += 1;
        }
    }
    Ok(cases)
}

fn scoe_constants(rng: &mut ChaCha8Rng) -> Check {
    let witnesses = scoe_witnesses(rng, 10)?;
    for (h, b1, b2) in &witnesses {
        let t = h.derive_cocycles(&params())?;
        let b2 = b2.as_ref().ok_or_else(|| Failure("b2 not found for a self-witness".into()))?;
        let n1 = t.c1.sub(&b1.sub(&b1.compose_shift(1)?)?)?.constant_value();
        let n2 = t.c2.sub(&b2.sub(&b2.compose_shift(1)?)?)?.constant_value();
        ensure!(matches!((n1, n2), (Some(a), Some(b)) if a * b == 1), "constants {n1:?}, {n2:?} do not multiply to 1");
        ensure!(n1 == Some(1) && n2 == Some(1), "constants are not both 1");
        ensure!(b1.add(&h.pull_back(b2)?)?.constant_value().is_some(), "b1 + b2∘h is not constant");
    }
    Ok(witnesses.len())
}

fn gamma_identities(rng: &mut ChaCha8Rng) -> Check {
    let mut cases = 0;
    for i in 0..20 {
        let sft = &spaces()[i % 2];
        let tau = random_element(rng, &generators(sft), 3);
        let h = CoeWitness::from_table(tau.clone());
        let t = h.derive_cocycles(&params())?;
        ensure!(gamma_scoe_residual(&t, &tau)?.is_zero(), "self-witness is not Γ-SCOE via itself");
        let tau2 = h.xi(&tau.invert(), crate::DEFAULT_DEPTH_CAP)?;
        let d2 = tau2.cocycle_data()?.d;
        ensure!(h.push_forward(&tau.cocycle_data()?.d)? == d2.neg()?, "d_τ∘h⁻¹ ≠ −d_(ξ_h(τ⁻¹))");
        ensure!(t.c2 == d2.compose_shift(1)?.sub(&d2)?.add_constant(1)?, "c2 ≠ 1 − d2 + d2∘σ");
        let built = construct_eventual_conjugacy(&h, &tau, &params())?;
        ensure!(built.witness.is_identity(), "constructed h′ is not the identity");
        cases += 1;
    }
    Ok(cases)
}

fn unit_cocycles(rng: &mut ChaCha8Rng) -> Check {
    let full = Arc::new(Sft::full_shift(2));
    let flip = Coder::new(&full, &full, vec![(Word::from(vec![1]), Word::from(vec![2])), (Word::from(vec![2]), Word::from(vec![1]))])?;
    let flip_h = CoeWitness::new(&full, &full, vec![Stage::Coder(flip.clone())])?;
    let gens = generators(&full);
    let mut cases = 0;
    for _ in 0..10 {
        // τ, then flip, then flip∘τ⁻¹∘flip⁻¹: the chain equals flip.
        let tau = random_element(rng, &gens, 3);
        let back = flip_h.xi(&tau.invert(), crate::DEFAULT_DEPTH_CAP)?;
        let h = CoeWitness::new(&full, &full, vec![Stage::Table(tau.clone()), Stage::Coder(flip.clone()), Stage::Table(back)])?;
        for x in crate::coe::sample_points(&full).iter().take(40) {
            ensure!(h.apply(x) == flip_h.apply(x), "chain differs from the relabelling at {x}");
        }
        let t = h.derive_cocycles(&params())?;
        ensure!(t.c1.constant_value() == Some(1), "c1 of a relabelling chain is not 1");
        ensure!(t.c2.constant_value() == Some(1), "c1 ≡ 1 but c2 ≢ 1");
        let self_h = CoeWitness::from_table(tau);
        let ts = self_h.derive_cocycles(&params())?;
        if ts.c1.constant_value() == Some(1) {
            ensure!(ts.c2.constant_value() == Some(1), "c1 ≡ 1 but c2 ≢ 1 for a self-witness");
        }
        cases += 1;
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_and_is_deterministic() {
        let a = run(7, &[]).unwrap();
        for o in &a {
            assert!(o.passed(), "{}: {:?}", o.name, o.failure);
            assert!(o.cases > 0, "{} checked nothing", o.name);
        }
        let b = run(7, &["cocycle.identity".to_string(), "coe.xi_homomorphism".to_string()]).unwrap();
        let pick = |name: &str| a.iter().find(|o| o.name == name).unwrap().cases;
        assert_eq!(b[0].cases, pick("cocycle.identity"));
        assert_eq!(b.len(), 2);
        assert!(run(7, &["nope".to_string()]).is_err());
    }
}
