//! Shifts of finite type in vertex-shift normal form and word counting at
//! arbitrary index sets.
//!
//! A shift is stored as a 0/1 adjacency matrix on *states*. For adjacency
//! input the states are the symbols that survive pruning; for forbidden-word
//! input with longest forbidden word of length `L` the states are the
//! admissible `(L-1)`-blocks and each state is labelled by its first symbol.
//! Counts are always reported in the original alphabet: when the labelling is
//! not injective, distinct label sequences are counted through a subset
//! construction.
//!
//! `N(S)` is the number of label tuples read at the places of `S` along
//! bi-infinite paths. Because the graph is pruned to its essential part, every
//! finite path extends to a bi-infinite one, so `N(S)` is a path count through
//! the gap-indexed reachability matrices `sign(M^g)`.

use alloc::borrow::Cow;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{perron_root, BoolMatrix};
use crate::numeric::{ln, BigCount, Count};
use crate::subset::SubsetSpec;

/// Gaps `1..=REACH_HORIZON` have memoized reachability matrices.
pub const REACH_HORIZON: usize = 64;
/// Largest state space accepted after recoding.
pub const MAX_STATES: usize = 256;
const PERRON_TOL: f64 = 1e-12;
const PERRON_MAX_ITER: usize = 1_000_000;

/// Exact word count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordCount {
    Small(u128),
    Big(BigCount),
}

impl WordCount {
    pub fn ln(&self) -> f64 {
        match self {
            WordCount::Small(v) => ln(*v as f64),
            WordCount::Big(b) => b.ln(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            WordCount::Small(v) => *v as f64,
            WordCount::Big(b) => b.to_f64(),
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self {
            WordCount::Small(v) => Some(*v),
            WordCount::Big(b) => b.to_u128(),
        }
    }

    fn to_big(&self) -> BigCount {
        match self {
            WordCount::Small(v) => BigCount::from_u128(*v),
            WordCount::Big(b) => b.clone(),
        }
    }
}

impl PartialEq<u128> for WordCount {
    fn eq(&self, other: &u128) -> bool {
        self.to_u128() == Some(*other)
    }
}

impl PartialOrd for WordCount {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.to_big().cmp(&other.to_big()))
    }
}

impl fmt::Display for WordCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordCount::Small(v) => write!(f, "{v}"),
            WordCount::Big(b) => write!(f, "~2^{}", b.bits()),
        }
    }
}

/// A vertex shift of finite type.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    alphabet_size: usize,
    adjacency: BoolMatrix,
    /// state -> original symbol
    labels: Vec<u8>,
    /// state -> block of original symbols it stands for
    blocks: Vec<Vec<u8>>,
    injective: bool,
    /// per symbol, bitset of states carrying it
    label_sets: Vec<Vec<u64>>,
    /// forbidden words over the original alphabet describing the same shift
    forbidden: Vec<Vec<u8>>,
    /// reach[g - 1] = sign(M^g)
    reach: Vec<BoolMatrix>,
}

/// Parse a symbol character: `0-9` then `a-z` for 10..36.
pub fn parse_symbol(c: char) -> Option<u8> {
    c.to_digit(36).map(|d| d as u8)
}

pub fn symbol_char(s: u8) -> char {
    char::from_digit(u32::from(s), 36).unwrap_or('?')
}

/// Parse a word such as `"011"` into symbols.
pub fn parse_word(word: &str) -> Result<Vec<u8>> {
    word.chars()
        .map(|c| parse_symbol(c).ok_or_else(|| Error::invalid(alloc::format!("bad symbol '{c}' in '{word}'"))))
        .collect()
}

pub fn format_word(word: &[u8]) -> String {
    word.iter().map(|&s| symbol_char(s)).collect()
}

impl Sft {
    /// Vertex shift from a square 0/1 matrix over symbols `0..r`.
    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        if r < 2 {
            return Err(Error::MalformedMatrix("alphabet must have at least 2 symbols".into()));
        }
        if r > MAX_STATES {
            return Err(Error::HorizonExceeded { requested: r, cap: MAX_STATES });
        }
        let adjacency = BoolMatrix::from_rows(rows)?;
        let mut forbidden = Vec::new();
        for a in 0..r {
            for b in 0..r {
                if !adjacency.get(a, b) {
                    forbidden.push(vec![a as u8, b as u8]);
                }
            }
        }
        let blocks = (0..r).map(|a| vec![a as u8]).collect();
        Self::assemble(r, adjacency, blocks, forbidden)
    }

    /// Shift of finite type defined by a list of forbidden words.
    pub fn from_forbidden(alphabet_size: usize, words: &[Vec<u8>]) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::invalid("alphabet must have at least 2 symbols"));
        }
        if alphabet_size > 36 {
            return Err(Error::invalid("alphabets larger than 36 symbols need adjacency input"));
        }
        for w in words {
            if w.is_empty() {
                return Err(Error::invalid("forbidden words must be nonempty"));
            }
            if let Some(&s) = w.iter().find(|&&s| usize::from(s) >= alphabet_size) {
                return Err(Error::invalid(alloc::format!("symbol {s} outside alphabet of size {alphabet_size}")));
            }
        }
        let longest = words.iter().map(Vec::len).max().unwrap_or(1);
        let block = longest.saturating_sub(1).max(1);
        let count = (alphabet_size as u128).checked_pow(block as u32).unwrap_or(u128::MAX);
        if count > (1 << 16) {
            return Err(Error::EnumerationCap { requested: count, cap: 1 << 16 });
        }
        let avoids = |w: &[u8]| !words.iter().any(|f| w.windows(f.len()).any(|x| x == f.as_slice()));
        let mut blocks: Vec<Vec<u8>> = Vec::new();
        for idx in 0..count as usize {
            let mut b = vec![0u8; block];
            let mut x = idx;
            for slot in b.iter_mut().rev() {
                *slot = (x % alphabet_size) as u8;
                x /= alphabet_size;
            }
            if avoids(&b) {
                blocks.push(b);
            }
        }
        if blocks.len() > MAX_STATES {
            return Err(Error::HorizonExceeded { requested: blocks.len(), cap: MAX_STATES });
        }
        if blocks.is_empty() {
            return Err(Error::EmptyShift);
        }
        let mut adjacency = BoolMatrix::zeros(blocks.len());
        let mut joined = Vec::with_capacity(block + 1);
        for (i, b) in blocks.iter().enumerate() {
            for (j, c) in blocks.iter().enumerate() {
                if b[1..] != c[..block - 1] {
                    continue;
                }
                joined.clear();
                joined.extend_from_slice(b);
                joined.push(c[block - 1]);
                if avoids(&joined) {
                    adjacency.set(i, j, true);
                }
            }
        }
        Self::assemble(alphabet_size, adjacency, blocks, words.to_vec())
    }

    fn assemble(alphabet_size: usize, adjacency: BoolMatrix, blocks: Vec<Vec<u8>>, forbidden: Vec<Vec<u8>>) -> Result<Self> {
        let keep = essential_states(&adjacency);
        if keep.is_empty() {
            return Err(Error::EmptyShift);
        }
        let mut pruned = BoolMatrix::zeros(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if adjacency.get(a, b) {
                    pruned.set(i, j, true);
                }
            }
        }
        if keep.len() < adjacency.size() {
            log::debug!("pruned {} stranded states", adjacency.size() - keep.len());
        }
        let blocks: Vec<Vec<u8>> = keep.iter().map(|&a| blocks[a].clone()).collect();
        let labels: Vec<u8> = blocks.iter().map(|b| b[0]).collect();
        let mut seen = vec![false; alphabet_size];
        let mut injective = true;
        for &l in &labels {
            injective &= !core::mem::replace(&mut seen[usize::from(l)], true);
        }
        let words = pruned.words_per_row();
        let mut label_sets = vec![vec![0u64; words]; alphabet_size];
        for (s, &l) in labels.iter().enumerate() {
            label_sets[usize::from(l)][s / 64] |= 1 << (s % 64);
        }
        let mut reach = Vec::with_capacity(REACH_HORIZON);
        reach.push(pruned.clone());
        for g in 1..REACH_HORIZON {
            let next = reach[g - 1].mul(&pruned);
            reach.push(next);
        }
        Ok(Sft { alphabet_size, adjacency: pruned, labels, blocks, injective, label_sets, forbidden, reach })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn state_count(&self) -> usize {
        self.adjacency.size()
    }

    pub fn adjacency(&self) -> &BoolMatrix {
        &self.adjacency
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn state_blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    /// True when states and symbols correspond one-to-one.
    pub fn is_label_injective(&self) -> bool {
        self.injective
    }

    pub fn forbidden_words(&self) -> &[Vec<u8>] {
        &self.forbidden
    }

    /// `sign(M^g)` for `g >= 1`.
    pub fn reach(&self, g: usize) -> Cow<'_, BoolMatrix> {
        assert!(g >= 1, "gap must be positive");
        if g <= self.reach.len() {
            return Cow::Borrowed(&self.reach[g - 1]);
        }
        let mut m = self.reach[self.reach.len() - 1].clone();
        for _ in self.reach.len()..g {
            m = m.mul(&self.adjacency);
        }
        Cow::Owned(m)
    }

    pub fn reach_cache(&self) -> &[BoolMatrix] {
        &self.reach
    }

    /// Install a previously persisted reachability cache.
    pub fn install_reach_cache(&mut self, cache: Vec<BoolMatrix>) -> Result<()> {
        if cache.len() != REACH_HORIZON
            || cache.first() != Some(&self.adjacency)
            || cache.iter().any(|m| m.size() != self.state_count())
        {
            return Err(Error::invalid("reachability cache does not match this shift"));
        }
        self.reach = cache;
        Ok(())
    }

    /// True when every entry of `M^2` is positive (on states).
    pub fn square_positive(&self) -> bool {
        self.reach[1].all_ones()
    }

    /// Smallest `g` with `M^g > 0`, if one exists (checked up to the cache).
    pub fn primitivity_exponent(&self) -> Option<usize> {
        self.reach.iter().position(BoolMatrix::all_ones).map(|i| i + 1)
    }

    /// `N(S) = |L_S(X)|`; `N(∅) = 1`.
    pub fn count_words_at(&self, s: &SubsetSpec) -> WordCount {
        let elements: Vec<usize> = s.elements().collect();
        self.count_elements(&elements)
    }

    /// Word count at an increasing list of positions.
    pub fn count_elements(&self, elements: &[usize]) -> WordCount {
        match self.count_generic::<u128>(elements) {
            Some(v) => WordCount::Small(v),
            None => WordCount::Big(self.count_generic::<BigCount>(elements).expect("big counts never overflow")),
        }
    }

    /// `|L_n(X)|`.
    pub fn complexity_count(&self, n: usize) -> WordCount {
        let elements: Vec<usize> = (0..n).collect();
        self.count_elements(&elements)
    }

    fn count_generic<C: Count>(&self, elements: &[usize]) -> Option<C> {
        if elements.is_empty() {
            return Some(C::one());
        }
        if self.injective {
            // backward pass: v = R_{g_0} R_{g_1} ... 1
            let n = self.state_count();
            let mut v = vec![C::one(); n];
            let mut next = vec![C::zero(); n];
            for w in elements.windows(2).rev() {
                let r = self.reach(w[1] - w[0]);
                for (a, slot) in next.iter_mut().enumerate() {
                    let mut acc = C::zero();
                    for b in r.row_ones(a) {
                        if !acc.add_assign_checked(&v[b]) {
                            return None;
                        }
                    }
                    *slot = acc;
                }
                core::mem::swap(&mut v, &mut next);
            }
            let mut total = C::zero();
            for x in &v {
                if !total.add_assign_checked(x) {
                    return None;
                }
            }
            Some(total)
        } else {
            self.count_labelled(elements)
        }
    }

    /// Distinct label sequences via a subset construction: the DP state is
    /// the set of graph states consistent with the labels read so far.
    fn count_labelled<C: Count>(&self, elements: &[usize]) -> Option<C> {
        let words = self.adjacency.words_per_row();
        let mut frontier: BTreeMap<Vec<u64>, C> = BTreeMap::new();
        for set in &self.label_sets {
            if set.iter().any(|w| *w != 0) {
                frontier.insert(set.clone(), C::one());
            }
        }
        let mut image = vec![0u64; words];
        for w in elements.windows(2) {
            let r = self.reach(w[1] - w[0]);
            let mut next: BTreeMap<Vec<u64>, C> = BTreeMap::new();
            for (set, cnt) in &frontier {
                r.image(set, &mut image);
                for lab in &self.label_sets {
                    let inter: Vec<u64> = image.iter().zip(lab).map(|(a, b)| a & b).collect();
                    if inter.iter().all(|x| *x == 0) {
                        continue;
                    }
                    let slot = next.entry(inter).or_insert_with(C::zero);
                    if !slot.add_assign_checked(cnt) {
                        return None;
                    }
                }
            }
            frontier = next;
        }
        let mut total = C::zero();
        for c in frontier.values() {
            if !total.add_assign_checked(c) {
                return None;
            }
        }
        Some(total)
    }

    /// Sum over words `w` readable at `elements` of `prod_i weight[w_i]`.
    pub(crate) fn weighted_paths(&self, elements: &[usize], weight: &[f64]) -> f64 {
        if elements.is_empty() {
            return 1.0;
        }
        if self.injective {
            let n = self.state_count();
            let sw: Vec<f64> = self.labels.iter().map(|&l| weight[usize::from(l)]).collect();
            let mut v = sw.clone();
            let mut next = vec![0.0; n];
            for w in elements.windows(2).rev() {
                let r = self.reach(w[1] - w[0]);
                for (a, slot) in next.iter_mut().enumerate() {
                    *slot = sw[a] * r.row_ones(a).map(|b| v[b]).sum::<f64>();
                }
                core::mem::swap(&mut v, &mut next);
            }
            v.iter().sum()
        } else {
            let words = self.adjacency.words_per_row();
            let mut frontier: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
            for (l, set) in self.label_sets.iter().enumerate() {
                if set.iter().any(|w| *w != 0) {
                    frontier.insert(set.clone(), weight[l]);
                }
            }
            let mut image = vec![0u64; words];
            for w in elements.windows(2) {
                let r = self.reach(w[1] - w[0]);
                let mut next: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
                for (set, val) in &frontier {
                    r.image(set, &mut image);
                    for (l, lab) in self.label_sets.iter().enumerate() {
                        let inter: Vec<u64> = image.iter().zip(lab).map(|(a, b)| a & b).collect();
                        if inter.iter().all(|x| *x == 0) {
                            continue;
                        }
                        *next.entry(inter).or_insert(0.0) += val * weight[l];
                    }
                }
                frontier = next;
            }
            frontier.values().sum()
        }
    }

    /// Whether `word` occurs in some point of the shift.
    pub fn contains_word(&self, word: &[u8]) -> bool {
        let Some((&first, rest)) = word.split_first() else {
            return true;
        };
        let Some(start) = self.label_sets.get(usize::from(first)) else {
            return false;
        };
        let mut set = start.clone();
        let mut image = vec![0u64; set.len()];
        for &sym in rest {
            let Some(lab) = self.label_sets.get(usize::from(sym)) else {
                return false;
            };
            self.adjacency.image(&set, &mut image);
            for ((s, i), l) in set.iter_mut().zip(&image).zip(lab) {
                *s = i & l;
            }
        }
        set.iter().any(|w| *w != 0)
    }

    /// `h_top = log rho(M)` by power iteration.
    pub fn perron_log(&self) -> Result<f64> {
        let rho = perron_root(&self.adjacency.to_dense(), PERRON_TOL, PERRON_MAX_ITER)?;
        Ok(ln(rho))
    }

    /// Topological entropy in nats. Falls back to `log|L_n|/n` at `n = 64`
    /// (with a warning) if power iteration fails to converge.
    pub fn topological_entropy(&self) -> f64 {
        match self.perron_log() {
            Ok(h) => h,
            Err(e) => {
                log::warn!("{e}; falling back to log|L_n|/n extrapolation");
                let n = 64;
                self.complexity_count(n).ln() / n as f64
            }
        }
    }
}

/// Indices of states that lie on a bi-infinite path: iteratively drop
/// states without an incoming or an outgoing edge.
fn essential_states(m: &BoolMatrix) -> Vec<usize> {
    let n = m.size();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let out = (0..n).any(|b| alive[b] && m.get(a, b));
            let inc = (0..n).any(|b| alive[b] && m.get(b, a));
            if !out || !inc {
                alive[a] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&a| alive[a]).collect()
}

/// Named shifts used throughout the tests and tables.
pub mod examples {
    use super::*;

    pub fn full_shift(r: usize) -> Sft {
        Sft::from_adjacency(&vec![vec![1; r]; r]).expect("full shift is valid")
    }

    pub fn golden_mean() -> Sft {
        Sft::from_adjacency(&[vec![1, 1], vec![1, 0]]).expect("golden mean shift is valid")
    }

    fn m(rows: [[u8; 3]; 3]) -> Sft {
        Sft::from_adjacency(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("table shift is valid")
    }

    /// Same entropy and complexity function, different sample complexity.
    pub fn same_complexity_pair() -> [Sft; 2] {
        [m([[1, 1, 0], [0, 0, 1], [1, 1, 0]]), m([[0, 1, 1], [1, 0, 1], [1, 0, 0]])]
    }

    /// Positive-square pair with entropy 0.810.
    pub fn positive_square_pair() -> [Sft; 2] {
        [m([[0, 1, 1], [1, 1, 1], [1, 0, 1]]), m([[1, 1, 1], [1, 1, 0], [1, 0, 0]])]
    }

    /// Seven shifts with entropy log 2.
    pub fn entropy_log2_family() -> [Sft; 7] {
        [
            m([[1, 1, 0], [0, 1, 1], [1, 0, 1]]),
            m([[0, 1, 1], [1, 0, 1], [1, 1, 0]]),
            m([[1, 1, 0], [0, 0, 1], [1, 1, 1]]),
            m([[1, 1, 0], [0, 1, 1], [1, 1, 0]]),
            m([[0, 1, 1], [1, 0, 1], [1, 0, 1]]),
            m([[0, 1, 1], [1, 1, 1], [1, 0, 0]]),
            m([[1, 1, 1], [1, 0, 0], [1, 0, 0]]),
        ]
    }

    /// The two shifts compared under potentials.
    pub fn pressure_pair() -> [Sft; 2] {
        [m([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), m([[1, 1, 0], [0, 0, 1], [1, 1, 1]])]
    }
}
