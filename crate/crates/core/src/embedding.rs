//! Sphere embeddings of Gauss words.
//!
//! A word fixes the traversal order of crossings; to place the curve on an
//! oriented sphere each crossing additionally needs a chirality: which of the
//! two transverse cyclic orders its four half-edges take. Word plus
//! chiralities give a rotation system on the 4-regular curve graph, and the
//! embedding is spherical exactly when face tracing yields `n + 2` faces.
//!
//! Half-edges are numbered from the word: edge `e` runs from position `e` to
//! position `e + 1`; half-edge `2e` is its tail and `2e + 1` its head. A dart
//! is a half-edge read as "leave the vertex along this edge", so even darts
//! follow the curve orientation and odd darts run against it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::gauss::{write_letters, GaussWord, Label};

/// Which transverse rotation a crossing uses.
///
/// With passages numbered by first occurrence in the word, `Positive` means
/// the half-edges appear counter-clockwise as `in₁, in₂, out₁, out₂`, and
/// `Negative` means `in₁, out₂, out₁, in₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chirality {
    Positive,
    Negative,
}

impl Chirality {
    pub fn flipped(self) -> Self {
        match self {
            Chirality::Positive => Chirality::Negative,
            Chirality::Negative => Chirality::Positive,
        }
    }

    fn flip_if(self, cond: bool) -> Self {
        if cond {
            self.flipped()
        } else {
            self
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Chirality::Positive => '+',
            Chirality::Negative => '-',
        }
    }
}

/// Equivalences applied when deciding whether two curves are the same.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    /// Identify a curve with its mirror image.
    pub identify_mirror: bool,
    /// Identify a curve with the curve traversed backwards.
    pub identify_reversal: bool,
}

impl Default for Convention {
    fn default() -> Self {
        Convention { identify_mirror: true, identify_reversal: true }
    }
}

impl Convention {
    pub fn with_mirror(identify_mirror: bool) -> Self {
        Convention { identify_mirror, ..Default::default() }
    }
}

/// A half-edge read as the directed side of an edge leaving its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart(pub u32);

impl Dart {
    pub fn edge(self) -> usize {
        (self.0 / 2) as usize
    }

    /// True when the dart runs along the curve orientation.
    pub fn is_forward(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn twin(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

/// One region of a spherical curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Number of boundary edges.
    pub size: usize,
    /// Boundary darts in tracing order.
    pub boundary: Vec<Dart>,
    /// Every boundary edge runs with the curve, or every one against it.
    pub coherent: bool,
    /// Corner crossings in tracing order (with multiplicity).
    pub incident_crossings: Vec<Label>,
}

/// Faces of a curve together with dart-to-face lookup.
#[derive(Clone, Debug)]
pub struct FaceMap {
    pub faces: Vec<Face>,
    face_of: Vec<usize>,
    sigma: Vec<u32>,
    sigma_inv: Vec<u32>,
}

impl FaceMap {
    /// Index of the face traced by `dart`.
    pub fn face_of(&self, dart: Dart) -> usize {
        self.face_of[dart.index()]
    }

    /// Face on the other side of the edge carrying `dart`.
    pub fn across_edge(&self, dart: Dart) -> usize {
        self.face_of[dart.twin().index()]
    }

    /// Face diagonally opposite the corner at which `dart` leaves its vertex.
    pub fn across_corner(&self, dart: Dart) -> usize {
        // The corner of a face before dart h sits between σ⁻¹(h) and h; the
        // opposite corner sits between σ(h) and σ²(h), traced by σ²(h).
        let h = self.sigma[self.sigma[dart.index()] as usize];
        self.face_of[h as usize]
    }

    /// The four faces around the vertex of `dart`, in rotation order from its corner.
    pub fn around_vertex(&self, dart: Dart) -> [usize; 4] {
        let mut h = dart.index();
        let mut out = [0; 4];
        for slot in &mut out {
            *slot = self.face_of[h];
            h = self.sigma[h] as usize;
        }
        out
    }

    /// Faces sharing an edge with face `f`, one entry per boundary edge.
    pub fn edge_neighbors(&self, f: usize) -> Vec<usize> {
        self.faces[f].boundary.iter().map(|&d| self.across_edge(d)).collect()
    }

    /// Faces meeting face `f` only at a corner, one entry per corner.
    pub fn corner_neighbors(&self, f: usize) -> Vec<usize> {
        self.faces[f].boundary.iter().map(|&d| self.across_corner(d)).collect()
    }

    /// Counts `C_k` indexed by `k` (index 0 unused).
    pub fn size_census(&self) -> Vec<usize> {
        let max = self.faces.iter().map(|f| f.size).max().unwrap_or(0);
        let mut census = vec![0; max + 1];
        for f in &self.faces {
            census[f.size] += 1;
        }
        census
    }

    pub fn sigma_inverse(&self, dart: Dart) -> Dart {
        Dart(self.sigma_inv[dart.index()])
    }
}

/// A spherical curve: a word with a chirality per crossing whose rotation
/// system is genus zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneCurve {
    word: GaussWord,
    signs: Vec<Chirality>,
}

impl PlaneCurve {
    pub fn new(word: GaussWord, signs: Vec<Chirality>) -> Result<Self> {
        if signs.len() != word.crossing_count() {
            return Err(Error::MalformedWord(format!(
                "{} signs for {} crossings",
                signs.len(),
                word.crossing_count()
            )));
        }
        let sigma = rotation_system(&word, &signs);
        if count_faces(&sigma) != word.crossing_count() + 2 {
            return Err(Error::NotRealizable(format!("{word} with signs {}", sign_string(&signs))));
        }
        Ok(PlaneCurve { word, signs })
    }

    pub fn from_key(key: &EmbeddingKey) -> Result<Self> {
        Self::new(GaussWord::from_letters(key.letters.iter().copied())?, key.signs.clone())
    }

    pub fn word(&self) -> &GaussWord {
        &self.word
    }

    pub fn signs(&self) -> &[Chirality] {
        &self.signs
    }

    pub fn crossing_count(&self) -> usize {
        self.word.crossing_count()
    }

    pub fn sign(&self, label: Label) -> Chirality {
        self.signs[label as usize - 1]
    }

    /// The mirror image: every chirality flipped.
    pub fn mirror(&self) -> PlaneCurve {
        PlaneCurve {
            word: self.word.clone(),
            signs: self.signs.iter().map(|s| s.flipped()).collect(),
        }
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> PlaneCurve {
        let m = self.word.len();
        transformed(&self.word, &self.signs, m - 1, false, false).into_curve()
    }

    /// The same curve read from a different basepoint.
    pub fn rotated(&self, shift: usize) -> PlaneCurve {
        transformed(&self.word, &self.signs, shift % self.word.len(), true, false).into_curve()
    }

    pub fn key(&self, convention: Convention) -> EmbeddingKey {
        canonical_embedding(&self.word, &self.signs, convention)
    }

    /// The canonical representative under `convention`.
    pub fn canonical(&self, convention: Convention) -> PlaneCurve {
        self.key(convention).into_curve()
    }

    pub fn face_map(&self) -> FaceMap {
        let sigma = rotation_system(&self.word, &self.signs);
        trace_faces(&self.word, sigma)
    }

    pub fn faces(&self) -> Vec<Face> {
        self.face_map().faces
    }

    /// True iff no crossing is reducible, i.e. every crossing touches four
    /// distinct regions.
    pub fn is_reduced(&self) -> bool {
        self.reducible_crossings().is_empty()
    }

    /// Crossings with only three distinct regions around them.
    pub fn reducible_crossings(&self) -> Vec<Label> {
        let map = self.face_map();
        let m = self.word.len();
        let mut out = Vec::new();
        for (k, &(i, _)) in self.word.occurrences().iter().enumerate() {
            let faces = map.around_vertex(Dart(2 * i as u32));
            let distinct: BTreeSet<usize> = faces.into_iter().collect();
            debug_assert!(m > 0);
            if distinct.len() < 4 {
                out.push((k + 1) as Label);
            }
        }
        out
    }

    /// The word with chirality suffix, e.g. `1 2 3 1 2 3 [+,+,+]`.
    pub fn to_signed_string(&self) -> String {
        format!("{} {}", self.word, sign_string(&self.signs))
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_signed_string())
    }
}

impl FromStr for PlaneCurve {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: EmbeddingKey = s.parse()?;
        let curve = PlaneCurve::from_key(&key)?;
        Ok(curve)
    }
}

/// Coherence of a face computed from its boundary darts.
pub fn coherence(face: &Face) -> bool {
    let forward = face.boundary.iter().filter(|d| d.is_forward()).count();
    forward == 0 || forward == face.boundary.len()
}

/// Identity of an embedded curve: the least chirality-annotated reading over
/// rotations, reversals (if identified) and mirror images (if identified).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct EmbeddingKey {
    pub letters: Vec<Label>,
    pub signs: Vec<Chirality>,
}

impl EmbeddingKey {
    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn into_curve(self) -> PlaneCurve {
        PlaneCurve { word: GaussWord::from_normalized(self.letters), signs: self.signs }
    }

    pub fn to_curve(&self) -> PlaneCurve {
        self.clone().into_curve()
    }

    pub fn word(&self) -> GaussWord {
        GaussWord::from_normalized(self.letters.clone())
    }
}

impl fmt::Display for EmbeddingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)?;
        write!(f, " {}", sign_string(&self.signs))
    }
}

impl TryFrom<String> for EmbeddingKey {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<EmbeddingKey> for String {
    fn from(key: EmbeddingKey) -> String {
        key.to_string()
    }
}

impl FromStr for EmbeddingKey {
    type Err = Error;

    /// Parses the signed word format `1 2 3 1 2 3 [+,+,+]`.
    fn from_str(s: &str) -> Result<Self> {
        let open = s
            .find('[')
            .ok_or_else(|| ParseError::new(0, "missing `[` before chirality list"))?;
        let close = s
            .rfind(']')
            .filter(|&c| c > open)
            .ok_or_else(|| ParseError::new(s.len(), "missing closing `]`"))?;
        if !s[close + 1..].trim().is_empty() {
            return Err(ParseError::new(close + 1, "trailing characters after `]`").into());
        }
        let word = GaussWord::parse(&s[..open])?;
        // Signs are listed by the labels as written; relabeling permutes them.
        let raw: Vec<usize> = s[..open].split_whitespace().filter_map(|t| t.parse().ok()).collect();
        if raw.iter().any(|&l| l == 0 || l > word.crossing_count()) {
            return Err(ParseError::new(0, "signed words must use the labels 1..n").into());
        }
        let mut relabel = vec![0usize; word.crossing_count() + 1];
        for (&old, &new) in raw.iter().zip(word.letters()) {
            relabel[old] = new as usize;
        }
        let mut signs = Vec::new();
        let mut offset = open + 1;
        for item in s[open + 1..close].split(',') {
            let sign = match item.trim() {
                "+" => Chirality::Positive,
                "-" => Chirality::Negative,
                other => {
                    return Err(ParseError::new(offset, format!("expected `+` or `-`, found `{other}`")).into())
                }
            };
            signs.push(sign);
            offset += item.len() + 1;
        }
        if signs.len() != word.crossing_count() {
            return Err(ParseError::new(
                open,
                format!("{} signs for {} crossings", signs.len(), word.crossing_count()),
            )
            .into());
        }
        let mut permuted = signs.clone();
        for (k, sign) in signs.into_iter().enumerate() {
            permuted[relabel[k + 1] - 1] = sign;
        }
        Ok(EmbeddingKey { letters: word.into_letters(), signs: permuted })
    }
}

pub(crate) fn sign_string(signs: &[Chirality]) -> String {
    let inner: Vec<String> = signs.iter().map(|s| s.symbol().to_string()).collect();
    format!("[{}]", inner.join(","))
}

/// Half-edge arriving at word position `p`.
fn incoming(p: usize, m: usize) -> usize {
    2 * ((p + m - 1) % m) + 1
}

/// Counter-clockwise successor of every half-edge.
pub(crate) fn rotation_system(word: &GaussWord, signs: &[Chirality]) -> Vec<u32> {
    let m = word.len();
    let mut sigma = vec![0u32; 2 * m];
    for (k, &(i, j)) in word.occurrences().iter().enumerate() {
        let (in1, in2, out1, out2) = (incoming(i, m), incoming(j, m), 2 * i, 2 * j);
        let cycle = match signs[k] {
            Chirality::Positive => [in1, in2, out1, out2],
            Chirality::Negative => [in1, out2, out1, in2],
        };
        for t in 0..4 {
            sigma[cycle[t]] = cycle[(t + 1) % 4] as u32;
        }
    }
    sigma
}

/// Number of orbits of `σ ∘ α` (faces of the rotation system).
pub(crate) fn count_faces(sigma: &[u32]) -> usize {
    let mut seen = vec![false; sigma.len()];
    let mut faces = 0;
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            h = sigma[h ^ 1] as usize;
        }
    }
    faces
}

fn trace_faces(word: &GaussWord, sigma: Vec<u32>) -> FaceMap {
    let m = word.len();
    let letters = word.letters();
    let mut face_of = vec![usize::MAX; sigma.len()];
    let mut faces = Vec::new();
    for start in 0..sigma.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut boundary = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = id;
            boundary.push(Dart(h as u32));
            h = sigma[h ^ 1] as usize;
        }
        let incident_crossings = boundary
            .iter()
            .map(|d| {
                let pos = if d.is_forward() { d.edge() } else { (d.edge() + 1) % m };
                letters[pos]
            })
            .collect();
        let mut face = Face { size: boundary.len(), boundary, coherent: false, incident_crossings };
        face.coherent = coherence(&face);
        faces.push(face);
    }
    let mut sigma_inv = vec![0u32; sigma.len()];
    for (h, &s) in sigma.iter().enumerate() {
        sigma_inv[s as usize] = h as u32;
    }
    FaceMap { faces, face_of, sigma, sigma_inv }
}

/// Whether the word with these chiralities is genus zero.
pub fn is_spherical(word: &GaussWord, signs: &[Chirality]) -> bool {
    count_faces(&rotation_system(word, signs)) == word.crossing_count() + 2
}

fn signs_from_mask(n: usize, mask: u64) -> Vec<Chirality> {
    (0..n)
        .map(|k| if mask >> k & 1 == 1 { Chirality::Negative } else { Chirality::Positive })
        .collect()
}

/// All chirality assignments under which `word` is spherical, as raw vectors.
///
/// Exhaustive over the `2ⁿ` candidates. The mirror of a spherical assignment is
/// spherical, so only assignments with crossing 1 positive are traced.
pub fn spherical_sign_vectors(word: &GaussWord) -> Vec<Vec<Chirality>> {
    let n = word.crossing_count();
    assert!(n < 40, "exhaustive chirality search limited to small curves");
    let half: u64 = 1 << (n - 1);
    let mut found: Vec<Vec<Chirality>> = (0..half)
        .map(|mask| mask << 1)
        .filter_map(|mask| {
            let signs = signs_from_mask(n, mask);
            is_spherical(word, &signs).then_some(signs)
        })
        .collect();
    let mirrors: Vec<Vec<Chirality>> =
        found.iter().map(|s| s.iter().map(|c| c.flipped()).collect()).collect();
    found.extend(mirrors);
    found.sort();
    found
}

/// Decides realizability, stopping at the first spherical assignment.
pub fn is_realizable(word: &GaussWord) -> bool {
    if !word.satisfies_parity() {
        return false;
    }
    let n = word.crossing_count();
    let half: u64 = 1 << (n - 1);
    (0..half).any(|mask| is_spherical(word, &signs_from_mask(n, mask << 1)))
}

/// Every distinct sphere embedding of `word`, as canonical representatives in
/// key order. Orientation reversal is always identified; mirror images are
/// identified when asked. Empty iff the word is not realizable.
pub fn realize_all(word: &GaussWord, identify_mirror: bool) -> Vec<PlaneCurve> {
    realize_all_with(word, Convention::with_mirror(identify_mirror))
}

pub fn realize_all_with(word: &GaussWord, convention: Convention) -> Vec<PlaneCurve> {
    embedding_keys(word, convention).into_iter().map(EmbeddingKey::into_curve).collect()
}

pub fn embedding_keys(word: &GaussWord, convention: Convention) -> BTreeSet<EmbeddingKey> {
    spherical_sign_vectors(word)
        .iter()
        .map(|signs| canonical_embedding(word, signs, convention))
        .collect()
}

/// Parallel variant of [`embedding_keys`] for large words.
pub fn embedding_keys_par(word: &GaussWord, convention: Convention) -> BTreeSet<EmbeddingKey> {
    let n = word.crossing_count();
    let half: u64 = 1 << (n - 1);
    (0..half)
        .into_par_iter()
        .filter_map(|mask| {
            let signs = signs_from_mask(n, mask << 1);
            is_spherical(word, &signs).then_some(signs)
        })
        .flat_map_iter(|signs| {
            let mirror: Vec<Chirality> = signs.iter().map(|c| c.flipped()).collect();
            [canonical_embedding(word, &signs, convention), canonical_embedding(word, &mirror, convention)]
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Reads the word from `shift` (forwards or backwards), relabels, and carries
/// the chiralities along, optionally mirrored.
fn transformed(
    word: &GaussWord,
    signs: &[Chirality],
    shift: usize,
    forward: bool,
    mirror: bool,
) -> EmbeddingKey {
    let m = word.len();
    let letters = word.letters();
    let occ = word.occurrences();
    let n = occ.len();
    let new_pos = |p: usize| if forward { (p + m - shift) % m } else { (shift + m - p) % m };
    let mut map = vec![0 as Label; n + 1];
    let mut next: Label = 1;
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let idx = if forward { (shift + k) % m } else { (shift + m - k) % m };
        let c = letters[idx] as usize;
        if map[c] == 0 {
            map[c] = next;
            next += 1;
        }
        out.push(map[c]);
    }
    let mut new_signs = vec![Chirality::Positive; n];
    for (k, &(i, j)) in occ.iter().enumerate() {
        // Swapping which passage is met first swaps the roles of in₁/in₂.
        let swapped = new_pos(i) > new_pos(j);
        new_signs[map[k + 1] as usize - 1] = signs[k].flip_if(swapped ^ mirror);
    }
    EmbeddingKey { letters: out, signs: new_signs }
}

pub(crate) fn canonical_embedding(word: &GaussWord, signs: &[Chirality], convention: Convention) -> EmbeddingKey {
    let m = word.len();
    let mut best: Option<EmbeddingKey> = None;
    let directions: &[bool] = if convention.identify_reversal { &[true, false] } else { &[true] };
    let mirrors: &[bool] = if convention.identify_mirror { &[false, true] } else { &[false] };
    for &forward in directions {
        for shift in 0..m {
            for &mirror in mirrors {
                let cand = transformed(word, signs, shift, forward, mirror);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("non-empty word")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GaussWord {
        GaussWord::parse(s).unwrap()
    }

    fn sizes(c: &PlaneCurve) -> Vec<usize> {
        let mut s: Vec<usize> = c.faces().iter().map(|f| f.size).collect();
        s.sort();
        s
    }

    #[test]
    fn monogon_curve() {
        let curves = realize_all(&w("1 1"), true);
        assert_eq!(curves.len(), 1);
        assert_eq!(sizes(&curves[0]), vec![1, 1, 2]);
        assert!(!curves[0].is_reduced());
        let faces = curves[0].faces();
        let bigon = faces.iter().find(|f| f.size == 2).unwrap();
        assert!(!bigon.coherent);
        assert!(faces.iter().filter(|f| f.size == 1).all(|f| f.coherent));
    }

    #[test]
    fn trefoil_faces() {
        let curves = realize_all(&w("1 2 3 1 2 3"), true);
        assert_eq!(curves.len(), 1);
        assert_eq!(sizes(&curves[0]), vec![2, 2, 2, 3, 3]);
        assert!(curves[0].is_reduced());
    }

    #[test]
    fn unrealizable_words() {
        assert!(realize_all(&w("1 2 3 4 1 2 3 4"), true).is_empty());
        assert!(realize_all(&w("1 2 1 2"), false).is_empty());
        assert!(!is_realizable(&w("1 2 3 4 1 2 3 4")));
    }

    #[test]
    fn signed_format_round_trip() {
        let c: PlaneCurve = "1 2 3 1 2 3 [+,-,+]".parse().unwrap();
        assert_eq!(c.to_signed_string(), "1 2 3 1 2 3 [+,-,+]");
        assert!("1 2 3 1 2 3 [+,+]".parse::<EmbeddingKey>().is_err());
        assert!("1 2 3 1 2 3 [+,x,+]".parse::<EmbeddingKey>().is_err());
        assert!("1 2 3 1 2 3".parse::<EmbeddingKey>().is_err());
        let relabeled: EmbeddingKey = "2 1 2 1 3 3 [+,-,+]".parse().unwrap();
        assert_eq!(relabeled.to_string(), "1 2 1 2 3 3 [-,+,+]");
        assert!(matches!("1 2 3 1 2 3 [+,+,+]".parse::<PlaneCurve>(), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn transforms_preserve_face_structure() {
        let c = realize_all(&w("1 2 3 4 5 3 6 1 2 4 5 6"), false);
        for curve in c {
            let base = sizes(&curve);
            for shift in 0..curve.word().len() {
                assert_eq!(sizes(&curve.rotated(shift)), base);
            }
            assert_eq!(sizes(&curve.reversed()), base);
            assert_eq!(sizes(&curve.mirror()), base);
        }
    }

    #[test]
    fn reducible_crossing_agrees_with_free_chord() {
        for word in ["1 1 2 3 2 3", "1 1 2 2", "1 2 3 1 2 3", "1 2 2 3 3 1"] {
            for c in realize_all(&w(word), false) {
                let mut free = c.word().free_chords();
                free.sort();
                assert_eq!(c.reducible_crossings(), free, "{word}");
            }
        }
    }
}
