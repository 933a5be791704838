//! Exhaustive enumeration of spherical curves by crossing number.
//!
//! Two independent generators produce the same census:
//!
//! - [`enumerate_words`] walks all double-occurrence words in canonical form,
//!   keeps the ones passing the even-interlacement filter and collects every
//!   spherical chirality assignment;
//! - [`enumerate_maps`] glues half-edges of `n` four-valent vertices into
//!   connected rooted maps, keeps the planar ones whose straight-ahead walk is
//!   a single closed curve and reads the signed word off the walk.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{canonical_embedding, count_faces, spherical_sign_vectors, Chirality, Convention, EmbeddingKey, PlaneCurve};
use crate::error::{Error, ParseError, Result};
use crate::gauss::{canonical_letters, GaussWord, Label};

/// Largest crossing number the generators accept.
pub const MAX_CROSSINGS: usize = 10;

/// Identifies the generator in census file headers.
pub const GENERATOR_VERSION: &str = concat!("spherecurve-", env!("CARGO_PKG_VERSION"), "/census-1");

/// All distinct curves with `n` crossings under a convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCensus {
    pub n: usize,
    pub convention: Convention,
    pub curves: BTreeSet<EmbeddingKey>,
}

impl CurveCensus {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EmbeddingKey> {
        self.curves.iter()
    }

    pub fn plane_curves(&self) -> Vec<PlaneCurve> {
        self.curves.iter().map(EmbeddingKey::to_curve).collect()
    }

    pub fn reduced(&self) -> Vec<PlaneCurve> {
        self.curves
            .par_iter()
            .map(EmbeddingKey::to_curve)
            .filter(PlaneCurve::is_reduced)
            .collect()
    }

    /// Distinct underlying words (orientation reversal identified).
    pub fn words(&self) -> BTreeSet<GaussWord> {
        self.curves.iter().map(|k| k.word().canonical()).collect()
    }

    /// Census file text: a header then one signed word per line.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let flag = |b: bool| if b { "identified" } else { "distinct" };
        writeln!(out, "# spherecurve census").unwrap();
        writeln!(
            out,
            "# n={} mirror={} reversal={} generator={} count={}",
            self.n,
            flag(self.convention.identify_mirror),
            flag(self.convention.identify_reversal),
            GENERATOR_VERSION,
            self.curves.len()
        )
        .unwrap();
        for key in &self.curves {
            writeln!(out, "{key}").unwrap();
        }
        out
    }

    /// Parses census file text. Returns the census and the generator string
    /// recorded in its header.
    pub fn from_file_str(text: &str) -> Result<(Self, String)> {
        let mut lines = text.lines().enumerate();
        let mut header = None;
        for (lineno, line) in lines.by_ref() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if rest.contains("n=") {
                    header = Some((lineno, rest.trim().to_string()));
                    break;
                }
            } else if !line.is_empty() {
                return Err(ParseError::new(lineno + 1, "census data before header").into());
            }
        }
        let (hline, header) = header.ok_or_else(|| ParseError::new(0, "missing census header"))?;
        let mut n = None;
        let mut convention = Convention::default();
        let mut generator = String::new();
        let mut count = None;
        for field in header.split_whitespace() {
            let (name, value) =
                field.split_once('=').ok_or_else(|| ParseError::new(hline + 1, format!("bad header field `{field}`")))?;
            let ident = || match value {
                "identified" => Ok(true),
                "distinct" => Ok(false),
                _ => Err(ParseError::new(hline + 1, format!("bad convention value `{value}`"))),
            };
            match name {
                "n" => n = value.parse::<usize>().ok(),
                "mirror" => convention.identify_mirror = ident()?,
                "reversal" => convention.identify_reversal = ident()?,
                "generator" => generator = value.to_string(),
                "count" => count = value.parse::<usize>().ok(),
                _ => {}
            }
        }
        let n = n.ok_or_else(|| ParseError::new(hline + 1, "header lacks n="))?;
        let mut curves = BTreeSet::new();
        for (lineno, line) in lines {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let key: EmbeddingKey = body.parse().map_err(|e: Error| match e {
                Error::Parse(p) => Error::Parse(ParseError::new(lineno + 1, p.message)),
                other => Error::Parse(ParseError::new(lineno + 1, other.to_string())),
            })?;
            if key.crossing_count() != n {
                return Err(ParseError::new(lineno + 1, "curve has the wrong crossing number").into());
            }
            curves.insert(key);
        }
        if count.is_some_and(|c| c != curves.len()) {
            return Err(ParseError::new(hline + 1, "curve count does not match header").into());
        }
        Ok((CurveCensus { n, convention, curves }, generator))
    }
}

fn check_bound(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CROSSINGS {
        return Err(Error::InvariantViolation(format!("crossing number {n} outside 1..={MAX_CROSSINGS}")));
    }
    Ok(())
}

/// Every normalized word of length `2n` passing the parity filter and
/// canonical under rotation (and reversal when `reversal` is set).
pub fn canonical_words(n: usize, reversal: bool) -> Vec<GaussWord> {
    let m = 2 * n;
    // Shard on the partner of position 0.
    let mut words: Vec<GaussWord> = (1..m)
        .into_par_iter()
        .flat_map_iter(|partner| {
            let mut letters = vec![0 as Label; m];
            letters[0] = 1;
            letters[partner] = 1;
            let mut out = Vec::new();
            fill(&mut letters, 2, &mut |word| {
                if parity_ok(word) && canonical_letters(word, n, reversal) == word {
                    out.push(GaussWord::from_normalized(word.to_vec()));
                }
            });
            out
        })
        .collect();
    words.sort();
    words
}

/// Assigns labels to the remaining free positions, first free position first.
fn fill(letters: &mut [Label], next: Label, emit: &mut impl FnMut(&[Label])) {
    let Some(first) = letters.iter().position(|&c| c == 0) else {
        emit(letters);
        return;
    };
    letters[first] = next;
    for partner in first + 1..letters.len() {
        if letters[partner] == 0 {
            letters[partner] = next;
            fill(letters, next + 1, emit);
            letters[partner] = 0;
        }
    }
    letters[first] = 0;
}

fn parity_ok(letters: &[Label]) -> bool {
    // Chord c interlaces an even number of chords iff the span between its
    // occurrences holds an even number of letters.
    let n = letters.len() / 2;
    let mut first = vec![usize::MAX; n + 1];
    for (p, &c) in letters.iter().enumerate() {
        let c = c as usize;
        if first[c] == usize::MAX {
            first[c] = p;
        } else if (p - first[c] - 1) % 2 != 0 {
            return false;
        }
    }
    true
}

/// Word-based census.
pub fn enumerate_words(n: usize, convention: Convention) -> Result<CurveCensus> {
    check_bound(n)?;
    let curves = canonical_words(n, convention.identify_reversal)
        .par_iter()
        .flat_map_iter(|word| {
            spherical_sign_vectors(word)
                .into_iter()
                .map(|signs| canonical_embedding(word, &signs, convention))
                .collect::<BTreeSet<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(CurveCensus { n, convention, curves })
}

/// Partial gluing of half-edges; vertex `v` owns half-edges `4v..4v+4` in
/// counter-clockwise order.
#[derive(Clone)]
struct Gluing {
    n: usize,
    partner: Vec<u32>,
    vertices: usize,
}

const FREE: u32 = u32::MAX;

impl Gluing {
    fn new(n: usize) -> Self {
        Gluing { n, partner: vec![FREE; 4 * n], vertices: 1 }
    }

    fn first_free(&self) -> Option<usize> {
        (0..4 * self.vertices).find(|&h| self.partner[h] == FREE)
    }

    fn join(&mut self, a: usize, b: usize) {
        self.partner[a] = b as u32;
        self.partner[b] = a as u32;
    }

    fn split(&mut self, a: usize, b: usize) {
        self.partner[a] = FREE;
        self.partner[b] = FREE;
    }

    /// Calls `emit` on every completion; each connected rooted map arises once.
    fn complete(&mut self, depth_limit: Option<usize>, emit: &mut impl FnMut(&Gluing)) {
        let Some(h) = self.first_free() else {
            if self.vertices == self.n {
                emit(self);
            }
            return;
        };
        if depth_limit == Some(0) {
            emit(self);
            return;
        }
        let limit = depth_limit.map(|d| d - 1);
        for g in h + 1..4 * self.vertices {
            if self.partner[g] == FREE {
                self.join(h, g);
                self.complete(limit, emit);
                self.split(h, g);
            }
        }
        if self.vertices < self.n {
            let g = 4 * self.vertices;
            self.vertices += 1;
            self.join(h, g);
            self.complete(limit, emit);
            self.split(h, g);
            self.vertices -= 1;
        }
    }

    /// Signed word of the straight-ahead walk from half-edge 0, if the walk
    /// traverses every edge.
    fn curve_key(&self, convention: Convention) -> Option<EmbeddingKey> {
        let n = self.n;
        let m = 2 * n;
        // σ∘α face count must be n + 2 for a sphere.
        let sigma: Vec<u32> = (0..4 * n).map(|h| (4 * (h / 4) + (h + 1) % 4) as u32).collect();
        // Renumber half-edges as 2·edge + side so the generic face counter applies.
        let mut edge_of = vec![0usize; 4 * n];
        let mut edges = 0;
        for h in 0..4 * n {
            let g = self.partner[h] as usize;
            if h < g {
                edge_of[h] = 2 * edges;
                edge_of[g] = 2 * edges + 1;
                edges += 1;
            }
        }
        let mut dart_sigma = vec![0u32; 4 * n];
        for h in 0..4 * n {
            dart_sigma[edge_of[h]] = edge_of[sigma[h] as usize] as u32;
        }
        if count_faces(&dart_sigma) != n + 2 {
            return None;
        }

        let opposite = |h: usize| 4 * (h / 4) + (h + 2) % 4;
        let mut vertex_at = Vec::with_capacity(m);
        let mut out_at = Vec::with_capacity(m);
        let mut cur = 0usize;
        for step in 0..m {
            if step > 0 && cur == 0 {
                return None;
            }
            vertex_at.push(cur / 4);
            out_at.push(cur);
            cur = opposite(self.partner[cur] as usize);
        }
        if cur != 0 {
            return None;
        }
        // Label vertices by first visit.
        let mut label = vec![0 as Label; n];
        let mut next: Label = 1;
        let mut letters = Vec::with_capacity(m);
        let mut first_in = vec![usize::MAX; n];
        let mut signs = vec![Chirality::Positive; n];
        for (p, &v) in vertex_at.iter().enumerate() {
            if label[v] == 0 {
                label[v] = next;
                next += 1;
            }
            letters.push(label[v]);
            let incoming = opposite(out_at[p]);
            if first_in[v] == usize::MAX {
                first_in[v] = incoming;
            } else {
                let positive = sigma[first_in[v]] as usize == incoming;
                signs[label[v] as usize - 1] = if positive { Chirality::Positive } else { Chirality::Negative };
            }
        }
        let word = GaussWord::from_normalized(letters);
        Some(canonical_embedding(&word, &signs, convention))
    }
}

/// Map-based census, independent of the word generator.
pub fn enumerate_maps(n: usize, convention: Convention) -> Result<CurveCensus> {
    check_bound(n)?;
    let mut prefixes = Vec::new();
    Gluing::new(n).complete(Some(3), &mut |g| prefixes.push(g.clone()));
    let curves = prefixes
        .into_par_iter()
        .flat_map_iter(|mut g| {
            let mut found = BTreeSet::new();
            g.complete(None, &mut |full| {
                if let Some(key) = full.curve_key(convention) {
                    found.insert(key);
                }
            });
            found
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(CurveCensus { n, convention, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_censuses() {
        let c1 = enumerate_words(1, Convention::default()).unwrap();
        assert_eq!(c1.len(), 1);
        let c2w = enumerate_words(2, Convention::default()).unwrap();
        let c2m = enumerate_maps(2, Convention::default()).unwrap();
        assert_eq!(c2w, c2m);
        assert!(c2w.len() <= 3);
        let trefoil = crate::realize_all(&GaussWord::parse("1 2 3 1 2 3").unwrap(), true).remove(0);
        let c3 = enumerate_words(3, Convention::default()).unwrap();
        assert!(c3.curves.contains(&trefoil.key(Convention::default())));
    }

    #[test]
    fn bounds() {
        assert!(enumerate_words(0, Convention::default()).is_err());
        assert!(enumerate_maps(MAX_CROSSINGS + 1, Convention::default()).is_err());
    }

    #[test]
    fn file_round_trip() {
        let census = enumerate_words(3, Convention::with_mirror(false)).unwrap();
        let text = census.to_file_string();
        let (back, generator) = CurveCensus::from_file_str(&text).unwrap();
        assert_eq!(back, census);
        assert_eq!(generator, GENERATOR_VERSION);
        let broken = text.replace("count=", "count=9");
        assert!(CurveCensus::from_file_str(&broken).is_err());
    }
}
