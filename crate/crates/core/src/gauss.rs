//! Double-occurrence words and their chord diagrams.
//!
//! A [`GaussWord`] lists the crossings met while traversing a closed curve
//! once; every crossing label occurs exactly twice. Read around a circle, the
//! two occurrences of a label are the endpoints of a chord, and two chords
//! cross exactly when their endpoints alternate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Crossing label. Normalized words use the labels `1..=n`.
pub type Label = u16;

/// A double-occurrence word with labels normalized to `1..=n` in order of
/// first appearance.
///
/// The word is cyclic; the stored basepoint is arbitrary and only
/// [`GaussWord::canonical_key`] is meaningful across representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GaussWord {
    letters: Vec<Label>,
}

impl GaussWord {
    /// Parses a whitespace separated list of positive integer labels.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            let value: u32 = token
                .parse()
                .map_err(|_| Error::MalformedWord(format!("`{token}` is not a positive integer")))?;
            if value == 0 {
                return Err(Error::MalformedWord("labels must be positive".into()));
            }
            raw.push(value);
        }
        Self::from_letters(raw)
    }

    /// Validates a raw label sequence and relabels it by first appearance.
    pub fn from_letters<I>(letters: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<u32>,
    {
        let raw: Vec<u32> = letters.into_iter().map(Into::into).collect();
        if raw.is_empty() {
            return Err(Error::MalformedWord("empty word".into()));
        }
        if !raw.len().is_multiple_of(2) {
            return Err(Error::MalformedWord(format!("odd length {}", raw.len())));
        }
        let mut seen: std::collections::HashMap<u32, (Label, u8)> = Default::default();
        let mut out = Vec::with_capacity(raw.len());
        for &value in &raw {
            let next = seen.len() + 1;
            let entry = seen.entry(value).or_insert((next as Label, 0));
            entry.1 += 1;
            if entry.1 > 2 {
                return Err(Error::MalformedWord(format!("label {value} occurs more than twice")));
            }
            out.push(entry.0);
        }
        if seen.len() > Label::MAX as usize {
            return Err(Error::MalformedWord("too many crossings".into()));
        }
        if let Some((value, _)) = seen.iter().filter(|(_, (_, count))| *count != 2).min() {
            return Err(Error::MalformedWord(format!("label {value} occurs once")));
        }
        Ok(GaussWord { letters: out })
    }

    /// Builds a word from letters that are already a normalized double-occurrence word.
    pub(crate) fn from_normalized(letters: Vec<Label>) -> Self {
        debug_assert!(is_normalized(&letters), "not normalized: {letters:?}");
        GaussWord { letters }
    }

    /// Relabels an arbitrary valid double-occurrence sequence by first appearance.
    pub(crate) fn normalize(letters: &[Label]) -> Self {
        let max = letters.iter().copied().max().unwrap_or(0) as usize;
        let mut map = vec![0 as Label; max + 1];
        let mut next: Label = 1;
        let mut out = Vec::with_capacity(letters.len());
        for &c in letters {
            if map[c as usize] == 0 {
                map[c as usize] = next;
                next += 1;
            }
            out.push(map[c as usize]);
        }
        Self::from_normalized(out)
    }

    pub fn letters(&self) -> &[Label] {
        &self.letters
    }

    /// Length of the word, `2n`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of crossings `n`.
    pub fn crossing_count(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        1..=self.crossing_count() as Label
    }

    pub fn contains(&self, label: Label) -> bool {
        label >= 1 && label as usize <= self.crossing_count()
    }

    /// Positions `(first, second)` of every label, indexed by `label - 1`.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let n = self.crossing_count();
        let mut occ = vec![(usize::MAX, usize::MAX); n];
        for (pos, &c) in self.letters.iter().enumerate() {
            let slot = &mut occ[c as usize - 1];
            if slot.0 == usize::MAX {
                slot.0 = pos;
            } else {
                slot.1 = pos;
            }
        }
        occ
    }

    /// Positions of `label`, first occurrence first.
    pub fn positions(&self, label: Label) -> Result<(usize, usize)> {
        if !self.contains(label) {
            return Err(Error::UnknownLabel(label));
        }
        let mut it = self
            .letters
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == label)
            .map(|(p, _)| p);
        let first = it.next().expect("label present");
        let second = it.next().expect("label occurs twice");
        Ok((first, second))
    }

    /// Whether the chords of `a` and `b` cross.
    pub fn interlaced(&self, a: Label, b: Label) -> Result<bool> {
        let (a1, a2) = self.positions(a)?;
        let (b1, b2) = self.positions(b)?;
        if a == b {
            return Ok(false);
        }
        Ok(chords_cross((a1, a2), (b1, b2)))
    }

    /// Labels whose chord crosses no other chord, in increasing order.
    pub fn free_chords(&self) -> Vec<Label> {
        let occ = self.occurrences();
        (1..=occ.len() as Label).filter(|&c| span_is_closed(&self.letters, &occ, c)).collect()
    }

    pub fn has_free_chord(&self) -> bool {
        let occ = self.occurrences();
        (1..=occ.len() as Label).any(|c| span_is_closed(&self.letters, &occ, c))
    }

    pub fn interlacement_graph(&self) -> InterlacementGraph {
        InterlacementGraph::new(self)
    }

    /// Even-interlacement condition: every chord crosses an even number of
    /// chords. Necessary (not sufficient) for realizability on the sphere.
    pub fn satisfies_parity(&self) -> bool {
        let occ = self.occurrences();
        occ.iter().all(|&(i, j)| {
            let mut parity = 0u32;
            for &(x, y) in &occ {
                if (i < x && x < j) != (i < y && y < j) {
                    parity ^= 1;
                }
            }
            parity == 0
        })
    }

    /// The same cyclic word read from position `shift`.
    pub fn rotated(&self, shift: usize) -> GaussWord {
        let m = self.len();
        let letters: Vec<Label> = (0..m).map(|k| self.letters[(k + shift) % m]).collect();
        Self::normalize(&letters)
    }

    /// The word of the curve with reversed orientation.
    pub fn reversed(&self) -> GaussWord {
        let letters: Vec<Label> = self.letters.iter().rev().copied().collect();
        Self::normalize(&letters)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey(canonical_letters(&self.letters, self.crossing_count(), true))
    }

    /// Canonical form up to rotation only (orientation reversal not identified).
    pub fn oriented_key(&self) -> CanonicalKey {
        CanonicalKey(canonical_letters(&self.letters, self.crossing_count(), false))
    }

    /// The canonical representative as a word.
    pub fn canonical(&self) -> GaussWord {
        self.canonical_key().into_word()
    }

    pub(crate) fn into_letters(self) -> Vec<Label> {
        self.letters
    }
}

impl fmt::Display for GaussWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

impl FromStr for GaussWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl TryFrom<Vec<u32>> for GaussWord {
    type Error = Error;
    fn try_from(value: Vec<u32>) -> Result<Self> {
        Self::from_letters(value)
    }
}

impl From<GaussWord> for Vec<u32> {
    fn from(w: GaussWord) -> Self {
        w.letters.into_iter().map(u32::from).collect()
    }
}

pub(crate) fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Label]) -> fmt::Result {
    for (k, c) in letters.iter().enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// A chord is free iff the arc between its endpoints is closed under the pairing.
fn span_is_closed(letters: &[Label], occ: &[(usize, usize)], label: Label) -> bool {
    let (i, j) = occ[label as usize - 1];
    letters[i + 1..j].iter().all(|&c| {
        let (x, y) = occ[c as usize - 1];
        x > i && y < j
    })
}

pub(crate) fn chords_cross((a1, a2): (usize, usize), (b1, b2): (usize, usize)) -> bool {
    (a1 < b1 && b1 < a2) != (a1 < b2 && b2 < a2)
}

fn is_normalized(letters: &[Label]) -> bool {
    let mut counts = vec![0u8; letters.len() / 2 + 2];
    let mut next = 1;
    for &c in letters {
        let c = c as usize;
        if c == 0 || c >= counts.len() {
            return false;
        }
        if counts[c] == 0 {
            if c != next {
                return false;
            }
            next += 1;
        }
        counts[c] += 1;
    }
    letters.len().is_multiple_of(2) && counts[1..next].iter().all(|&k| k == 2) && next - 1 == letters.len() / 2
}

/// Least relabeled reading over all rotations (and reversals when asked).
pub(crate) fn canonical_letters(letters: &[Label], n: usize, reversal: bool) -> Vec<Label> {
    let m = letters.len();
    let mut best: Vec<Label> = Vec::new();
    let mut cand: Vec<Label> = Vec::with_capacity(m);
    let mut map = vec![0 as Label; n + 1];
    let directions: &[bool] = if reversal { &[true, false] } else { &[true] };
    for &forward in directions {
        for r in 0..m {
            map.iter_mut().for_each(|x| *x = 0);
            cand.clear();
            let mut next: Label = 1;
            let mut decided = best.is_empty();
            let mut rejected = false;
            for k in 0..m {
                let idx = if forward { (r + k) % m } else { (r + m - k) % m };
                let c = letters[idx] as usize;
                if map[c] == 0 {
                    map[c] = next;
                    next += 1;
                }
                let v = map[c];
                if !decided {
                    match v.cmp(&best[k]) {
                        std::cmp::Ordering::Less => decided = true,
                        std::cmp::Ordering::Greater => {
                            rejected = true;
                            break;
                        }
                        std::cmp::Ordering::Equal => {}
                    }
                }
                cand.push(v);
            }
            if !rejected && decided {
                std::mem::swap(&mut best, &mut cand);
            }
        }
    }
    best
}

/// Identity of a word up to rotation, reversal and relabeling: the
/// lexicographically least relabeled reading.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CanonicalKey(Vec<Label>);

impl TryFrom<String> for CanonicalKey {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Ok(GaussWord::parse(&s)?.canonical_key())
    }
}

impl From<CanonicalKey> for String {
    fn from(key: CanonicalKey) -> String {
        key.to_string()
    }
}

impl CanonicalKey {
    pub fn letters(&self) -> &[Label] {
        &self.0
    }

    pub fn into_word(self) -> GaussWord {
        GaussWord::from_normalized(self.0)
    }

    pub fn to_word(&self) -> GaussWord {
        GaussWord::from_normalized(self.0.clone())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

/// Chord crossing graph of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacementGraph {
    adjacency: Vec<Vec<Label>>,
}

impl InterlacementGraph {
    pub fn new(word: &GaussWord) -> Self {
        let occ = word.occurrences();
        let n = occ.len();
        let mut adjacency = vec![Vec::new(); n];
        for a in 0..n {
            for b in a + 1..n {
                if chords_cross(occ[a], occ[b]) {
                    adjacency[a].push((b + 1) as Label);
                    adjacency[b].push((a + 1) as Label);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        InterlacementGraph { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, label: Label) -> &[Label] {
        &self.adjacency[label as usize - 1]
    }

    pub fn degree(&self, label: Label) -> usize {
        self.neighbors(label).len()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(k, list)| {
            let a = (k + 1) as Label;
            list.iter().filter(move |&&b| b > a).map(move |&b| (a, b))
        })
    }

    pub fn isolated(&self) -> Vec<Label> {
        (1..=self.node_count() as Label).filter(|&c| self.degree(c) == 0).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                let w = w as usize - 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Reads the line-oriented word format: one word per line, `#` starts a comment.
pub fn read_words(text: &str) -> Result<Vec<GaussWord>> {
    let mut words = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let word = GaussWord::parse(body).map_err(|e| match e {
            Error::MalformedWord(msg) => Error::MalformedWord(format!("line {}: {msg}", lineno + 1)),
            other => other,
        })?;
        words.push(word);
    }
    Ok(words)
}
