//! `C(X_A, ℤ)` as finite-depth step functions.
//!
//! A continuous integer function on `X_A` is locally constant, and by
//! compactness finitely many cylinders suffice, so it is determined by
//! one integer per admissible word of some fixed length `d`. Functions are
//! stored at the smallest such `d`.

mod coboundary;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use coboundary::{default_bounds, is_sigma_coboundary, sigma_coboundary_of, CoboundaryCertificate};

use crate::error::{checked_add, checked_mul, checked_sub, Error, Result};
use crate::sft::{EpPoint, Sft, Word};

#[derive(Clone, PartialEq, Eq)]
pub struct StepFunction {
    sft: Arc<Sft>,
    depth: usize,
    values: BTreeMap<Word, i64>,
}

/// Walks the cylinder tree of `sft` depth-first in lexicographic order.
/// `eval` returns `None` when a cylinder is too coarse to decide its value;
/// such cylinders are split into their one-symbol extensions. Returns the
/// leaves, which form a cylinder partition.
pub(crate) fn explore<T>(
    sft: &Sft,
    start_depth: usize,
    cap: usize,
    mut eval: impl FnMut(&[u8]) -> Result<Option<T>>,
) -> Result<Vec<(Word, T)>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() >= start_depth {
            if let Some(v) = eval(&w)? {
                out.push((Word::from(w), v));
                continue;
            }
            if w.len() >= cap {
                return Err(Error::DepthCapExceeded(cap));
            }
        }
        let succ: Vec<u8> = sft.successors(w.last().copied()).collect();
        for &s in succ.iter().rev() {
            let mut child = w.clone();
            child.push(s);
            stack.push(child);
        }
    }
    Ok(out)
}

impl StepFunction {
    pub fn constant(sft: &Arc<Sft>, c: i64) -> Self {
        let values = BTreeMap::from([(Word::empty(), c)]);
        StepFunction { sft: Arc::clone(sft), depth: 0, values }
    }

    pub fn zero(sft: &Arc<Sft>) -> Self {
        StepFunction::constant(sft, 0)
    }

    /// Builds a function from one value per admissible depth-`depth` word.
    pub fn new(sft: &Arc<Sft>, depth: usize, entries: Vec<(Word, i64)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (w, v) in entries {
            if w.len() != depth || !sft.is_admissible(&w) {
                return Err(Error::InadmissibleWord(sft.format_word(&w)));
            }
            if values.insert(w.clone(), v).is_some() {
                return Err(Error::DuplicateWord(sft.format_word(&w)));
            }
        }
        for w in sft.enumerate_words(depth) {
            if !values.contains_key(&w) {
                return Err(Error::MissingWord(sft.format_word(&w)));
            }
        }
        Ok(StepFunction { sft: Arc::clone(sft), depth, values }.canonical())
    }

    /// Tabulates a function from a cylinder-level evaluator (see [`explore`]).
    pub fn tabulate(
        sft: &Arc<Sft>,
        start_depth: usize,
        cap: usize,
        eval: impl FnMut(&[u8]) -> Result<Option<i64>>,
    ) -> Result<Self> {
        let leaves = explore(sft, start_depth, cap, eval)?;
        Ok(StepFunction::from_leaves(sft, leaves))
    }

    /// Spreads values given on a cylinder partition to a uniform depth.
    pub(crate) fn from_leaves(sft: &Arc<Sft>, leaves: Vec<(Word, i64)>) -> Self {
        let depth = leaves.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        let mut values = BTreeMap::new();
        for (w, v) in leaves {
            for ext in sft.extensions(&w, depth) {
                values.insert(ext, v);
            }
        }
        StepFunction { sft: Arc::clone(sft), depth, values }.canonical()
    }

    fn canonical(mut self) -> Self {
        while self.depth > 0 {
            let mut reduced = BTreeMap::new();
            let mut ok = true;
            for (w, &v) in &self.values {
                let parent = Word::from(&w[..self.depth - 1]);
                match reduced.get(&parent) {
                    Some(&pv) if pv != v => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        reduced.insert(parent, v);
                    }
                }
            }
            if !ok {
                break;
            }
            self.values = reduced;
            self.depth -= 1;
        }
        self
    }

    pub fn sft(&self) -> &Arc<Sft> {
        &self.sft
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `(word, value)` pairs in lexicographic order of the depth-`d` words.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.values.iter().map(|(w, &v)| (w, v))
    }

    /// The value on the cylinder `U_w`, if `w` is at least `depth` long.
    pub fn value_on(&self, w: &[u8]) -> Option<i64> {
        if w.len() < self.depth {
            return None;
        }
        self.values.get(&w[..self.depth]).copied()
    }

    /// `f(x)`, read from the first `depth` symbols of `x`.
    pub fn evaluate(&self, x: &EpPoint) -> i64 {
        let key = x.prefix(self.depth);
        *self
            .values
            .get(&key)
            .unwrap_or_else(|| panic!("point {x} is not in the space of this function"))
    }

    pub fn same_space(&self, other: &StepFunction) -> Result<()> {
        if Arc::ptr_eq(&self.sft, &other.sft) || self.sft == other.sft {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn constant_value(&self) -> Option<i64> {
        (self.depth == 0).then(|| self.values[&Word::empty()])
    }

    pub fn is_zero(&self) -> bool {
        self.constant_value() == Some(0)
    }

    pub fn max_value(&self) -> i64 {
        *self.values.values().max().expect("step functions are nonempty")
    }

    pub fn min_value(&self) -> i64 {
        *self.values.values().min().expect("step functions are nonempty")
    }

    /// First cylinder (lexicographically) with a nonzero value.
    pub fn first_nonzero(&self) -> Option<(Word, i64)> {
        self.values.iter().find(|(_, &v)| v != 0).map(|(w, &v)| (w.clone(), v))
    }

    fn zip_with(&self, other: &StepFunction, op: impl Fn(i64, i64) -> Result<i64>) -> Result<StepFunction> {
        self.same_space(other)?;
        let depth = self.depth.max(other.depth);
        let mut values = BTreeMap::new();
        for w in self.sft.enumerate_words(depth) {
            let v = op(self.value_on(&w).unwrap(), other.value_on(&w).unwrap())?;
            values.insert(w, v);
        }
        Ok(StepFunction { sft: Arc::clone(&self.sft), depth, values }.canonical())
    }

    fn map_values(&self, op: impl Fn(i64) -> Result<i64>) -> Result<StepFunction> {
        let values = self.values.iter().map(|(w, &v)| Ok((w.clone(), op(v)?))).collect::<Result<_>>()?;
        Ok(StepFunction { sft: Arc::clone(&self.sft), depth: self.depth, values }.canonical())
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, checked_add)
    }

    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, checked_sub)
    }

    pub fn neg(&self) -> Result<StepFunction> {
        self.map_values(|v| v.checked_neg().ok_or(Error::Overflow))
    }

    pub fn scale(&self, k: i64) -> Result<StepFunction> {
        self.map_values(|v| checked_mul(k, v))
    }

    pub fn add_constant(&self, c: i64) -> Result<StepFunction> {
        self.map_values(|v| checked_add(v, c))
    }

    /// `f∘σ^m`.
    pub fn compose_shift(&self, m: usize) -> Result<StepFunction> {
        StepFunction::tabulate(&self.sft, self.depth + m, self.depth + m, |w| Ok(self.value_on(&w[m..])))
    }

    /// `f^m(x) = Σ_{i<m} f(σ^i x)`.
    pub fn orbit_sum(&self, m: usize) -> Result<StepFunction> {
        let start = if m == 0 { 0 } else { self.depth + m - 1 };
        StepFunction::tabulate(&self.sft, start, start, |w| self.orbit_sum_on(w, m))
    }

    /// `x ↦ f^{m(x)}(x)` for a nonnegative step-function exponent.
    pub fn orbit_sum_by(&self, exponent: &StepFunction) -> Result<StepFunction> {
        self.same_space(exponent)?;
        if exponent.min_value() < 0 {
            return Err(Error::NegativeExponent);
        }
        let cap = exponent.depth + exponent.max_value() as usize + self.depth;
        StepFunction::tabulate(&self.sft, exponent.depth, cap, |w| {
            let m = exponent.value_on(w).expect("start depth covers the exponent");
            self.orbit_sum_on(w, m as usize)
        })
    }

    /// `Σ_{i<m} f(σ^i x)` on the cylinder `U_w`, if `w` is long enough.
    pub(crate) fn orbit_sum_on(&self, w: &[u8], m: usize) -> Result<Option<i64>> {
        self.sum_over(w, 0..m)
    }

    /// `Σ_{i ∈ range} f(σ^i x)` on `U_w`, if determined.
    pub(crate) fn sum_over(&self, w: &[u8], range: std::ops::Range<usize>) -> Result<Option<i64>> {
        let mut acc = 0i64;
        for i in range {
            if i > w.len() {
                return Ok(None);
            }
            match self.value_on(&w[i..]) {
                Some(v) => acc = checked_add(acc, v)?,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Sum of `f` over the periodic orbit of `v^∞`.
    pub fn cycle_sum(&self, cycle: &[u8]) -> Result<i64> {
        let p = cycle.len();
        let unrolled: Vec<u8> = cycle.iter().copied().cycle().take(p + self.depth).collect();
        Ok(self.sum_over(&unrolled, 0..p)?.expect("unrolled cycle covers the depth"))
    }

    /// First cylinder on which `self` and `other` differ.
    pub fn first_difference(&self, other: &StepFunction) -> Result<Option<(Word, i64)>> {
        Ok(self.sub(other)?.first_nonzero())
    }

    /// One line per cylinder, `<word> <value>`, `-` naming the empty word.
    pub fn render(&self) -> String {
        let mut s = format!("depth {}\n", self.depth);
        for (w, v) in &self.values {
            let word = if w.is_empty() { "-".to_string() } else { self.sft.format_word(w) };
            s.push_str(&format!("{word} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.values.iter().map(|(w, v)| format!("{w}↦{v}")).collect();
        write!(f, "StepFunction[d={}]{{{}}}", self.depth, body.join(", "))
    }
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

    fn pt(sft: &Sft, s: &str) -> EpPoint {
        EpPoint::parse(sft, s).unwrap()
    }

    #[test]
    fn make_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(g.depth(), 1);
        let c = f(&full, 2, &[("11", 7), ("12", 7), ("21", 7), ("22", 7)]);
        assert_eq!((c.depth(), c.constant_value()), (0, Some(7)));
        let golden = Arc::new(Sft::golden_mean());
        let bad = StepFunction::new(&golden, 2, vec![(w("11"), 0), (w("12"), 0), (w("21"), 0), (w("22"), 0)]);
        assert!(matches!(bad, Err(Error::InadmissibleWord(_))));
        let missing = StepFunction::new(&golden, 2, vec![(w("11"), 0), (w("12"), 0)]);
        assert!(matches!(missing, Err(Error::MissingWord(_))));
        let dup = StepFunction::new(&golden, 1, vec![(w("1"), 0), (w("1"), 1), (w("2"), 0)]);
        assert!(matches!(dup, Err(Error::DuplicateWord(_))));
    }

    #[test]
    fn evaluate_examples() {
        let full = Arc::new(Sft::full_shift(2));
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(g.evaluate(&pt(&full, "|12")), 3);
        assert_eq!(g.evaluate(&pt(&full, "2|1")), 5);
        assert_eq!(StepFunction::constant(&full, 7).evaluate(&pt(&full, "2|1")), 7);
    }

    #[test]
    fn compose_shift_examples() {
        let full = Arc::new(Sft::full_shift(2));
        assert_eq!(StepFunction::constant(&full, 7).compose_shift(1).unwrap().constant_value(), Some(7));
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(g.compose_shift(1).unwrap(), f(&full, 2, &[("11", 3), ("12", 5), ("21", 3), ("22", 5)]));
        let golden = Arc::new(Sft::golden_mean());
        let h = f(&golden, 1, &[("1", 0), ("2", -1)]);
        assert_eq!(h.compose_shift(1).unwrap(), f(&golden, 2, &[("11", 0), ("12", -1), ("21", 0)]));
    }

    #[test]
    fn orbit_sum_examples() {
        let full = Arc::new(Sft::full_shift(2));
        assert_eq!(StepFunction::constant(&full, 1).orbit_sum(5).unwrap().constant_value(), Some(5));
        let g = f(&full, 1, &[("1", 3), ("2", 5)]);
        assert_eq!(g.orbit_sum(3).unwrap().evaluate(&pt(&full, "|12")), 11);
        assert!(g.orbit_sum(0).unwrap().is_zero());
        let neg = f(&full, 1, &[("1", -1), ("2", 1)]);
        assert_eq!(g.orbit_sum_by(&neg), Err(Error::NegativeExponent));
        let expo = f(&full, 1, &[("1", 2), ("2", 0)]);
        let s = g.orbit_sum_by(&expo).unwrap();
        assert_eq!(s.evaluate(&pt(&full, "|12")), 8);
        assert_eq!(s.evaluate(&pt(&full, "|2")), 0);
    }

    #[test]
    fn cycle_sums() {
        let golden = Arc::new(Sft::golden_mean());
        let h = f(&golden, 1, &[("1", 0), ("2", -1)]);
        assert_eq!(h.cycle_sum(&w("12")).unwrap(), -1);
        assert_eq!(h.cycle_sum(&w("1")).unwrap(), 0);
    }

    fn eval_direct_orbit_sum(f: &StepFunction, x: &EpPoint, m: usize) -> i64 {
        (0..m).map(|i| f.evaluate(&x.shift(i))).sum()
    }

    proptest! {
        #[test]
        fn orbit_sum_splits(seed in any::<u64>(), n in 0usize..=6, m in 0usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for sft in [Arc::new(Sft::full_shift(2)), Arc::new(Sft::golden_mean())] {
                let g = sample::random_function(&mut rng, &sft, 3, 3);
                let nm = g.orbit_sum(n + m).unwrap();
                let fm = g.orbit_sum(m).unwrap();
                let fnn = g.orbit_sum(n).unwrap();
                for _ in 0..10 {
                    let x = sample::random_point(&mut rng, &sft);
                    prop_assert_eq!(nm.evaluate(&x), fm.evaluate(&x) + fnn.evaluate(&x.shift(m)));
                    prop_assert_eq!(nm.evaluate(&x), eval_direct_orbit_sum(&g, &x, n + m));
                }
            }
        }

        #[test]
        fn addition_is_pointwise(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sft = Arc::new(Sft::golden_mean());
            let a = sample::random_function(&mut rng, &sft, 3, 4);
            let b = sample::random_function(&mut rng, &sft, 3, 4);
            let s = a.add(&b).unwrap();
            let d = a.sub(&b).unwrap();
            let sh = a.add(&b).unwrap().compose_shift(2).unwrap();
            for _ in 0..10 {
                let x = sample::random_point(&mut rng, &sft);
                prop_assert_eq!(s.evaluate(&x), a.evaluate(&x) + b.evaluate(&x));
                prop_assert_eq!(d.evaluate(&x), a.evaluate(&x) - b.evaluate(&x));
                prop_assert_eq!(sh.evaluate(&x), a.evaluate(&x.shift(2)) + b.evaluate(&x.shift(2)));
            }
            prop_assert!(a.sub(&a).unwrap().is_zero());
            prop_assert_eq!(a.neg().unwrap().add(&a).unwrap(), StepFunction::zero(&sft));
        }
    }
}
