//! Transition matrices, admissible words, cylinder partitions and
//! eventually periodic points of a one-sided Markov shift `X_A`.
//!
//! Symbols are 1-based (`1..=n`). A word is admissible when every pair
//! of consecutive symbols is an allowed transition; the empty word is
//! admissible and names the whole space.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// A finite word over the alphabet `1..=n`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn concat(&self, other: &[u8]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn push(&mut self, s: u8) {
        self.0.push(s);
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl std::borrow::Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Word {
    fn from(v: [u8; N]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_symbols(&self.0, self.0.iter().all(|&s| s <= 9)))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn render_symbols(w: &[u8], digits: bool) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    if digits {
        w.iter().map(|s| char::from(b'0' + s)).collect()
    } else {
        w.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
    }
}

/// A validated transition matrix: square, 0/1, irreducible, not a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sft {
    n: usize,
    entries: Vec<bool>,
    irreducible: bool,
    primitive: bool,
    permutation: bool,
}

impl Sft {
    /// Validates a raw integer grid and computes the structural flags.
    pub fn validate(raw: &[Vec<i64>]) -> Result<Sft> {
        let n = raw.len();
        if n == 0 || raw.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        if n > 255 {
            return Err(Error::InvalidArgument("alphabet larger than 255 symbols".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in raw.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                match value {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    _ => return Err(Error::NotZeroOne { row: i + 1, col: j + 1, value }),
                }
            }
        }
        for i in 0..n {
            let row_empty = (0..n).all(|j| !entries[i * n + j]);
            let col_empty = (0..n).all(|j| !entries[j * n + i]);
            if row_empty || col_empty {
                return Err(Error::EmptyRowOrColumn(i + 1));
            }
        }
        let permutation = (0..n).all(|i| {
            (0..n).filter(|&j| entries[i * n + j]).count() == 1
                && (0..n).filter(|&j| entries[j * n + i]).count() == 1
        });
        let mut sft = Sft { n, entries, irreducible: false, primitive: false, permutation };
        sft.irreducible = sft.strongly_connected();
        sft.primitive = sft.irreducible && sft.period() == 1;
        if permutation {
            return Err(Error::Permutation);
        }
        if !sft.irreducible {
            return Err(Error::Reducible);
        }
        Ok(sft)
    }

    pub fn full_shift(n: usize) -> Sft {
        Sft::validate(&vec![vec![1; n]; n]).expect("full shift on >= 2 symbols is valid")
    }

    /// The golden mean shift `[[1,1],[1,0]]` (no `22`).
    pub fn golden_mean() -> Sft {
        Sft::validate(&[vec![1, 1], vec![1, 0]]).expect("golden mean matrix is valid")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_permutation(&self) -> bool {
        self.permutation
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| i64::from(self.entries[i * self.n + j])).collect())
            .collect()
    }

    /// `A(a, b) = 1` for 1-based symbols.
    pub fn allows(&self, a: u8, b: u8) -> bool {
        let (a, b) = (a as usize, b as usize);
        a >= 1 && b >= 1 && a <= self.n && b <= self.n && self.entries[(a - 1) * self.n + (b - 1)]
    }

    pub fn is_symbol(&self, s: u8) -> bool {
        s >= 1 && (s as usize) <= self.n
    }

    /// Symbols that may follow `last`; `None` stands for the empty word
    /// and admits every symbol.
    pub fn successors(&self, last: Option<u8>) -> impl Iterator<Item = u8> + '_ {
        (1..=self.n as u8).filter(move |&s| last.is_none_or(|a| self.allows(a, s)))
    }

    /// Whether words ending in `a` and in `b` admit the same continuations.
    pub fn same_follower(&self, a: Option<u8>, b: Option<u8>) -> bool {
        (1..=self.n as u8).all(|s| {
            let fa = a.is_none_or(|x| self.allows(x, s));
            let fb = b.is_none_or(|x| self.allows(x, s));
            fa == fb
        })
    }

    pub fn is_admissible(&self, w: &[u8]) -> bool {
        w.iter().all(|&s| self.is_symbol(s)) && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    pub fn check_word(&self, w: &[u8]) -> Result<()> {
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(Error::InadmissibleWord(self.format_word(w)))
        }
    }

    /// All admissible words of length `k` in lexicographic order.
    pub fn enumerate_words(&self, k: usize) -> Vec<Word> {
        self.extensions(&[], k)
    }

    /// All admissible words of length `len` that extend `prefix`.
    pub fn extensions(&self, prefix: &[u8], len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if prefix.len() > len {
            return out;
        }
        let mut buf = prefix.to_vec();
        self.extend_rec(&mut buf, len, &mut out);
        out
    }

    fn extend_rec(&self, buf: &mut Vec<u8>, len: usize, out: &mut Vec<Word>) {
        if buf.len() == len {
            out.push(Word(buf.clone()));
            return;
        }
        let succ: Vec<u8> = self.successors(buf.last().copied()).collect();
        for s in succ {
            buf.push(s);
            self.extend_rec(buf, len, out);
            buf.pop();
        }
    }

    /// Renders a word as digits (n ≤ 9) or comma-separated integers.
    pub fn format_word(&self, w: &[u8]) -> String {
        render_symbols(w, self.n <= 9)
    }

    /// Parses a word; `""`, `"-"` and `"ε"` denote the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        let bad = |msg: String| Error::Parse { line: 0, msg };
        if s.is_empty() || s == "-" || s == "ε" {
            return Ok(Word::empty());
        }
        let symbols: Vec<u8> = if self.n <= 9 {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| bad(format!("bad symbol {c:?} in word {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| bad(format!("bad symbol {t:?} in word {s:?}"))))
                .collect::<Result<_>>()?
        };
        if let Some(&s0) = symbols.iter().find(|&&x| !self.is_symbol(x)) {
            return Err(bad(format!("symbol {s0} outside 1..={}", self.n)));
        }
        Ok(Word(symbols))
    }

    fn strongly_connected(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(i) = queue.pop_front() {
                for j in 0..self.n {
                    let edge = if forward {
                        self.entries[i * self.n + j]
                    } else {
                        self.entries[j * self.n + i]
                    };
                    if edge && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(true) && reach(false)
    }

    /// gcd of cycle lengths, from BFS levels (assumes irreducible).
    fn period(&self) -> u64 {
        let mut level = vec![u64::MAX; self.n];
        level[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        let mut g = 0u64;
        while let Some(i) = queue.pop_front() {
            for j in 0..self.n {
                if !self.entries[i * self.n + j] {
                    continue;
                }
                if level[j] == u64::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                } else {
                    let diff = (level[i] + 1).abs_diff(level[j]);
                    g = gcd(g, diff);
                }
            }
        }
        g
    }

    /// Determinant of `id − A`, its sign, and the Bowen–Franks group
    /// `ℤⁿ/(id − Aᵗ)ℤⁿ` as its non-unit elementary divisors (0 = a free summand).
    pub fn flow_invariants(&self) -> Result<FlowInvariants> {
        let n = self.n;
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let id = i64::from(i == j);
                m.set(i, j, id - i64::from(self.entries[i * n + j]));
            }
        }
        let det = linalg::determinant(&m)?;
        let divisors = linalg::smith_diagonal(&m.transpose())?;
        let bf_group = divisors.into_iter().filter(|&d| d != 1).collect();
        Ok(FlowInvariants { det_id_minus_a: det, sign: det.signum(), bf_group })
    }

    /// Cyclically admissible Lyndon words of length `1..=max_len`, ordered by
    /// length then lexicographically. Each names one periodic orbit.
    pub fn primitive_cycles(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            for w in self.enumerate_words(len) {
                if self.allows(w[len - 1], w[0]) && is_lyndon(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Two eventually periodic points in the cylinder `U_w`: one continues
    /// with the least successor at every step, the other with the largest.
    pub fn representatives(&self, w: &[u8]) -> [EpPoint; 2] {
        [self.greedy_point(w, false), self.greedy_point(w, true)]
    }

    fn greedy_point(&self, w: &[u8], largest: bool) -> EpPoint {
        let pick = |last: Option<u8>| {
            let mut succ = self.successors(last);
            if largest {
                succ.last()
            } else {
                succ.next()
            }
            .expect("every symbol has a successor")
        };
        let mut seq = vec![w.last().copied().unwrap_or_else(|| pick(None))];
        loop {
            let next = pick(seq.last().copied());
            if let Some(i) = seq.iter().position(|&s| s == next) {
                let mut u = w.to_vec();
                if w.is_empty() {
                    u.push(seq[0]);
                }
                u.extend_from_slice(&seq[1..]);
                return EpPoint::canonical(u, seq[i..].to_vec());
            }
            seq.push(next);
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rotated = w[r..].iter().chain(&w[..r]);
        w.iter().cmp(rotated) == std::cmp::Ordering::Less
    })
}

/// Determinant, sign and Bowen–Franks elementary divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowInvariants {
    pub det_id_minus_a: i64,
    pub sign: i64,
    pub bf_group: Vec<i64>,
}

impl FlowInvariants {
    /// `trivial`, or summands such as `Z/2+Z`.
    pub fn bf_label(&self) -> String {
        if self.bf_group.is_empty() {
            return "trivial".into();
        }
        self.bf_group
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Why a word list fails to be a cylinder partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionDefect {
    Inadmissible(Word),
    Duplicate(Word),
    Overlap(Word, Word),
    Uncovered(Word),
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::Inadmissible(w) => write!(f, "word {w} is not admissible"),
            PartitionDefect::Duplicate(w) => write!(f, "word {w} is listed twice"),
            PartitionDefect::Overlap(a, b) => write!(f, "word {a} is a prefix of {b}"),
            PartitionDefect::Uncovered(w) => write!(f, "cylinder {w} is not covered"),
        }
    }
}

/// Admissible words whose cylinders are pairwise disjoint and cover `X_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderPartition {
    words: Vec<Word>,
}

impl CylinderPartition {
    pub fn new(sft: &Sft, mut words: Vec<Word>) -> std::result::Result<Self, PartitionDefect> {
        if let Some(w) = words.iter().find(|w| !sft.is_admissible(w)) {
            return Err(PartitionDefect::Inadmissible(w.clone()));
        }
        words.sort();
        for pair in words.windows(2) {
            if pair[0] == pair[1] {
                return Err(PartitionDefect::Duplicate(pair[0].clone()));
            }
            // in sorted order a prefix sits directly before some extension of it
            if pair[1].starts_with(&pair[0]) {
                return Err(PartitionDefect::Overlap(pair[0].clone(), pair[1].clone()));
            }
        }
        let partition = CylinderPartition { words };
        let max_len = partition.words.iter().map(|w| w.len()).max().unwrap_or(0);
        partition.check_cover(sft, &mut Vec::new(), max_len)?;
        Ok(partition)
    }

    fn check_cover(&self, sft: &Sft, buf: &mut Vec<u8>, max_len: usize) -> std::result::Result<(), PartitionDefect> {
        if self.words.binary_search_by(|w| w.as_slice().cmp(buf)).is_ok() {
            return Ok(());
        }
        if buf.len() >= max_len {
            return Err(PartitionDefect::Uncovered(Word(buf.clone())));
        }
        let succ: Vec<u8> = sft.successors(buf.last().copied()).collect();
        for s in succ {
            buf.push(s);
            let r = self.check_cover(sft, buf, max_len);
            buf.pop();
            r?;
        }
        Ok(())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Index of the partition word that is a prefix of `w`, if `w` is long enough.
    pub fn locate(&self, w: &[u8]) -> Option<usize> {
        locate_prefix(&self.words, |x| x.as_slice(), w)
    }
}

/// In a sorted prefix-free list, the element that is a prefix of `w` is the
/// last element `<= w`.
pub(crate) fn locate_prefix<T>(items: &[T], key: impl Fn(&T) -> &[u8], w: &[u8]) -> Option<usize> {
    let idx = items.partition_point(|it| key(it) <= w);
    if idx == 0 {
        return None;
    }
    let cand = key(&items[idx - 1]);
    w.starts_with(cand).then_some(idx - 1)
}

/// The coarsest cylinder partition of `X_A` minus the cylinders of `taken`
/// (which must be prefix-free).
pub fn complement_partition(sft: &Sft, taken: &[Word]) -> Vec<Word> {
    fn rec(sft: &Sft, taken: &[Word], buf: &mut Vec<u8>, out: &mut Vec<Word>) {
        if taken.iter().any(|t| buf.starts_with(t)) {
            return;
        }
        if !taken.iter().any(|t| t.starts_with(buf)) {
            out.push(Word(buf.clone()));
            return;
        }
        let succ: Vec<u8> = sft.successors(buf.last().copied()).collect();
        for s in succ {
            buf.push(s);
            rec(sft, taken, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    rec(sft, taken, &mut Vec::new(), &mut out);
    out
}

/// An eventually periodic point `u·v·v·v·…` kept in normal form: the
/// preperiod `u` is as short as possible and the cycle `v` is primitive.
/// With both minimal the rotation of `v` is forced, so structural equality
/// is point equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpPoint {
    u: Word,
    v: Word,
}

impl EpPoint {
    /// Validates admissibility of `u·v·v` in `sft` and normalizes.
    pub fn new(sft: &Sft, u: impl Into<Word>, v: impl Into<Word>) -> Result<EpPoint> {
        let (u, v) = (u.into(), v.into());
        if v.is_empty() {
            return Err(Error::InvalidArgument("eventually periodic point needs a nonempty cycle".into()));
        }
        let joined = u.concat(&v).concat(&v);
        sft.check_word(&joined)?;
        Ok(EpPoint::canonical(u.into_vec(), v.into_vec()))
    }

    /// Normal form without an admissibility check.
    pub(crate) fn canonical(mut u: Vec<u8>, mut v: Vec<u8>) -> EpPoint {
        debug_assert!(!v.is_empty());
        let p = primitive_period(&v);
        v.truncate(p);
        while let (Some(&a), Some(&b)) = (u.last(), v.last()) {
            if a != b {
                break;
            }
            u.pop();
            v.rotate_right(1);
        }
        EpPoint { u: Word(u), v: Word(v) }
    }

    /// The point `w·x`.
    pub fn prepend(&self, w: &[u8]) -> EpPoint {
        let mut u = w.to_vec();
        u.extend_from_slice(&self.u);
        EpPoint::canonical(u, self.v.0.clone())
    }

    pub fn preperiod(&self) -> &Word {
        &self.u
    }

    pub fn cycle(&self) -> &Word {
        &self.v
    }

    pub fn symbol_at(&self, i: usize) -> u8 {
        if i < self.u.len() {
            self.u[i]
        } else {
            self.v[(i - self.u.len()) % self.v.len()]
        }
    }

    /// The first `len` symbols.
    pub fn prefix(&self, len: usize) -> Word {
        Word((0..len).map(|i| self.symbol_at(i)).collect())
    }

    pub fn starts_with(&self, w: &[u8]) -> bool {
        w.iter().enumerate().all(|(i, &s)| self.symbol_at(i) == s)
    }

    /// `σ^m(x)`.
    pub fn shift(&self, m: usize) -> EpPoint {
        if m <= self.u.len() {
            return EpPoint::canonical(self.u[m..].to_vec(), self.v.0.clone());
        }
        let r = (m - self.u.len()) % self.v.len();
        let mut v = self.v.0.clone();
        v.rotate_left(r);
        EpPoint { u: Word::empty(), v: Word(v) }
    }

    pub fn is_valid_in(&self, sft: &Sft) -> bool {
        sft.is_admissible(&self.u.concat(&self.v).concat(&self.v))
    }

    /// Parses `"<u>|<v>"`; `u` may be empty or `ε`.
    pub fn parse(sft: &Sft, s: &str) -> Result<EpPoint> {
        let (u, v) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("point {s:?} lacks '|'") })?;
        let (u, v) = (sft.parse_word(u)?, sft.parse_word(v)?);
        EpPoint::new(sft, u, v)
    }

    pub fn render(&self, sft: &Sft) -> String {
        let u = if self.u.is_empty() { String::new() } else { sft.format_word(&self.u) };
        format!("{u}|{}", sft.format_word(&self.v))
    }
}

impl fmt::Display for EpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u.is_empty() {
            write!(f, "|{}", self.v)
        } else {
            write!(f, "{}|{}", self.u, self.v)
        }
    }
}

impl fmt::Debug for EpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpPoint({self})")
    }
}

fn primitive_period(v: &[u8]) -> usize {
    let n = v.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| v[i] == v[i - p]))
        .unwrap_or(n)
}
