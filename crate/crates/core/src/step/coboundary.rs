//! Deciding `f = g − g∘σ_A` for a step function `f`.
//!
//! Any σ-coboundary sums to zero over every periodic orbit, so a periodic
//! orbit with nonzero `f`-sum is an exact obstruction; those are checked
//! first. Otherwise the unknown values of `g` on depth-`d` cylinders are
//! found from one linear equation per depth-`(d+1)` cylinder, solved over ℤ
//! in column Hermite form, for `d` increasing up to the search depth.

use super::StepFunction;
use crate::error::{checked_sub, Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::sft::Word;

/// Outcome of [`is_sigma_coboundary`]. Bounds exhausted without either
/// certificate is reported as `Inconclusive`, never folded into `Unsat`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryCertificate {
    /// `f = g − g∘σ` exactly; `g` vanishes on the lexicographically first cylinder.
    Sat { g: StepFunction },
    /// `cycle` is a Lyndon word whose periodic orbit has `f`-sum `sum ≠ 0`.
    Unsat { cycle: Word, sum: i64 },
    Inconclusive { search_depth: usize, cycle_bound: usize },
}

impl CoboundaryCertificate {
    pub fn is_sat(&self) -> bool {
        matches!(self, CoboundaryCertificate::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, CoboundaryCertificate::Unsat { .. })
    }
}

/// Default search depth `depth(f)+2` and cycle bound `2n + depth(f)`.
pub fn default_bounds(f: &StepFunction) -> (usize, usize) {
    (f.depth() + 2, 2 * f.sft().size() + f.depth())
}

pub fn is_sigma_coboundary(f: &StepFunction, search_depth: usize, cycle_bound: usize) -> Result<CoboundaryCertificate> {
    if search_depth < f.depth() {
        return Err(Error::InvalidArgument(format!(
            "search depth {search_depth} is below the function depth {}",
            f.depth()
        )));
    }
    if cycle_bound < 1 {
        return Err(Error::InvalidArgument("cycle bound must be at least 1".into()));
    }
    let sft = f.sft();
    for cycle in sft.primitive_cycles(cycle_bound) {
        let sum = f.cycle_sum(&cycle)?;
        if sum != 0 {
            return Ok(CoboundaryCertificate::Unsat { cycle, sum });
        }
    }
    let start = f.depth().max(1) - 1;
    for d in start..=search_depth {
        if let Some(g) = solve_at_depth(f, d)? {
            return Ok(CoboundaryCertificate::Sat { g });
        }
    }
    Ok(CoboundaryCertificate::Inconclusive { search_depth, cycle_bound })
}

/// Unknowns `g(v)`, `v ∈ B_d`; for each `w ∈ B_{d+1}`:
/// `g(w[..d]) − g(w[1..]) = f(w)`.
fn solve_at_depth(f: &StepFunction, d: usize) -> Result<Option<StepFunction>> {
    let sft = f.sft();
    let unknowns = sft.enumerate_words(d);
    let equations = sft.enumerate_words(d + 1);
    let index = |w: &[u8]| unknowns.binary_search_by(|u| u.as_slice().cmp(w)).expect("admissible subword");
    let mut a = IntMatrix::zeros(equations.len(), unknowns.len());
    let mut b = Vec::with_capacity(equations.len());
    for (row, w) in equations.iter().enumerate() {
        let (head, tail) = (index(&w[..d]), index(&w[1..]));
        a.set(row, head, a.get(row, head) + 1);
        a.set(row, tail, a.get(row, tail) - 1);
        b.push(f.value_on(w).expect("equations cover the depth of f"));
    }
    let Some(x) = linalg::solve_integer(&a, &b)? else {
        return Ok(None);
    };
    let base = x[0];
    let entries = unknowns
        .into_iter()
        .zip(x)
        .map(|(w, v)| Ok((w, checked_sub(v, base)?)))
        .collect::<Result<Vec<_>>>()?;
    let g = StepFunction::new(sft, d, entries)?;
    let check = g.sub(&g.compose_shift(1)?)?;
    debug_assert_eq!(&check, f);
    if &check != f {
        return Err(Error::InvalidArgument("coboundary solution failed verification".into()));
    }
    Ok(Some(g))
}

/// Convenience: the coboundary `g − g∘σ`.
pub fn sigma_coboundary_of(g: &StepFunction) -> Result<StepFunction> {
    g.sub(&g.compose_shift(1)?)
}
