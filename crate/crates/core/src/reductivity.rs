//! Reductivity: the least number of inverse half-twisted splices turning a
//! curve into a reducible one.
//!
//! The search runs breadth-first over canonical words. Every splice removes
//! exactly one crossing, so depth `d` holds words with `n - d` crossings and
//! levels never overlap; dedup is per level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{is_realizable, Convention, EmbeddingKey};
use crate::enumerate::{enumerate_words, CurveCensus};
use crate::error::{Error, Result};
use crate::gauss::{GaussWord, Label};
use crate::splice::{inverse_splice, SpliceStep};

/// Search depth cap; no spherical curve needs more splices.
pub const MAX_REDUCTIVITY: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductivityResult {
    pub value: usize,
    /// `value` steps starting at the canonical form of the input and ending
    /// at a word with a free chord.
    pub witness: Vec<SpliceStep>,
}

impl ReductivityResult {
    /// Replays the witness from `word`: each step must reproduce its recorded
    /// result, the chain must start at `word` and end at a reducible word.
    pub fn verify_witness(&self, word: &GaussWord) -> bool {
        if self.witness.len() != self.value {
            return false;
        }
        let mut current = word.canonical_key();
        for step in &self.witness {
            if step.before != current || !step.verify() {
                return false;
            }
            current = step.after.clone();
        }
        current.to_word().has_free_chord()
    }
}

struct Node {
    word: GaussWord,
    /// `(label, index into next level)` for every splice.
    children: Vec<(Label, usize)>,
}

/// Exact reductivity of a realizable word, with a deterministic witness.
pub fn reductivity(word: &GaussWord) -> Result<ReductivityResult> {
    if !is_realizable(word) {
        return Err(Error::NotRealizable(word.to_string()));
    }
    search(word, cfg!(debug_assertions))
}

/// Like [`reductivity`] but skips the realizability check on the input and
/// on expanded nodes.
pub fn reductivity_unchecked(word: &GaussWord) -> Result<ReductivityResult> {
    search(word, false)
}

fn search(word: &GaussWord, check_nodes: bool) -> Result<ReductivityResult> {
    let root = word.canonical();
    if root.has_free_chord() {
        return Ok(ReductivityResult { value: 0, witness: Vec::new() });
    }
    let mut levels: Vec<Vec<Node>> = vec![vec![Node { word: root.clone(), children: Vec::new() }]];
    for depth in 1..=MAX_REDUCTIVITY {
        let parents = levels.last().expect("root level");
        if parents[0].word.crossing_count() < 2 {
            break;
        }
        let expanded: Vec<Vec<(Label, GaussWord)>> = parents
            .par_iter()
            .map(|node| {
                node.word
                    .labels()
                    .map(|p| inverse_splice(&node.word, p).map(|w| (p, w.canonical())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let index: BTreeMap<GaussWord, usize> = expanded
            .iter()
            .flatten()
            .map(|(_, w)| w.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(k, w)| (w, k))
            .collect();
        let level = levels.last_mut().expect("root level");
        for (node, kids) in level.iter_mut().zip(&expanded) {
            node.children = kids.iter().map(|(p, w)| (*p, index[w])).collect();
        }
        let mut next: Vec<Node> = Vec::with_capacity(index.len());
        next.extend(index.into_keys().map(|word| Node { word, children: Vec::new() }));
        if check_nodes {
            if let Some(bad) = next.par_iter().find_any(|n| !is_realizable(&n.word)) {
                return Err(Error::InvariantViolation(format!(
                    "inverse splice produced unrealizable word {}",
                    bad.word
                )));
            }
        }
        let goal: Vec<bool> = next.iter().map(|n| n.word.has_free_chord()).collect();
        levels.push(next);
        if goal.iter().any(|&g| g) {
            return Ok(ReductivityResult { value: depth, witness: witness(&levels, goal)? });
        }
    }
    Err(Error::BoundViolation { key: root.to_string(), depth: MAX_REDUCTIVITY })
}

/// Lexicographically least chain of canonical words from the root to a goal.
fn witness(levels: &[Vec<Node>], goal: Vec<bool>) -> Result<Vec<SpliceStep>> {
    let depth = levels.len() - 1;
    let mut good: Vec<Vec<bool>> = vec![Vec::new(); depth + 1];
    good[depth] = goal;
    for d in (0..depth).rev() {
        good[d] = levels[d]
            .iter()
            .map(|node| node.children.iter().any(|&(_, k)| good[d + 1][k]))
            .collect();
    }
    let mut steps = Vec::with_capacity(depth);
    let mut at = 0usize;
    for d in 0..depth {
        let node = &levels[d][at];
        // Children are indexed in key order, so the least index is the least word.
        let &(label, child) = node
            .children
            .iter()
            .filter(|&&(_, k)| good[d + 1][k])
            .min_by_key(|&&(p, k)| (k, p))
            .expect("good node has a good child");
        steps.push(SpliceStep::inverse(&node.word, label)?);
        at = child;
    }
    Ok(steps)
}

/// A curve with the largest possible reductivity, kept with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlaggedCurve {
    pub key: EmbeddingKey,
    pub result: ReductivityResult,
    pub witness_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub n: usize,
    pub curves: usize,
    /// Number of curves with reductivity `r`, for `r = 0..=4`.
    pub histogram: [usize; MAX_REDUCTIVITY + 1],
    pub max: usize,
    /// Curves reaching reductivity four.
    pub flagged: Vec<FlaggedCurve>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survey {
    pub convention: Convention,
    pub rows: Vec<SurveyRow>,
}

/// Column set of the survey TSV; bump when columns change.
pub const SURVEY_TSV_VERSION: u32 = 1;

impl Survey {
    pub fn max(&self) -> usize {
        self.rows.iter().map(|r| r.max).max().unwrap_or(0)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# survey-tsv v{SURVEY_TSV_VERSION}").unwrap();
        writeln!(out, "n\tcurves\tr0\tr1\tr2\tr3\tr4\tmax").unwrap();
        for row in &self.rows {
            let h: Vec<String> = row.histogram.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}\t{}\t{}\t{}", row.n, row.curves, h.join("\t"), row.max).unwrap();
        }
        out
    }
}

/// Reductivity histogram of one census.
pub fn survey_census(census: &CurveCensus) -> Result<SurveyRow> {
    let words: Vec<GaussWord> = census.words().into_iter().collect();
    let results: BTreeMap<GaussWord, ReductivityResult> = words
        .par_iter()
        .map(|w| reductivity_unchecked(w).map(|r| (w.clone(), r)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    let mut histogram = [0usize; MAX_REDUCTIVITY + 1];
    let mut flagged = Vec::new();
    for key in census.iter() {
        let word = key.word();
        let result = &results[&word.canonical()];
        histogram[result.value] += 1;
        if result.value == MAX_REDUCTIVITY {
            flagged.push(FlaggedCurve {
                key: key.clone(),
                result: result.clone(),
                witness_verified: result.verify_witness(&word),
            });
        }
    }
    let max = (0..=MAX_REDUCTIVITY).rev().find(|&r| histogram[r] > 0).unwrap_or(0);
    Ok(SurveyRow { n: census.n, curves: census.len(), histogram, max, flagged })
}

/// Reductivity histograms for every crossing number up to `n_max`.
pub fn survey(n_max: usize, convention: Convention) -> Result<Survey> {
    let rows = (1..=n_max)
        .map(|n| enumerate_words(n, convention).and_then(|c| survey_census(&c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Survey { convention, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GaussWord {
        GaussWord::parse(s).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(reductivity(&w("1 1 2 3 4 2 3 4")).unwrap().value, 0);
        let trefoil = reductivity(&w("1 2 3 1 2 3")).unwrap();
        assert_eq!(trefoil.value, 1);
        assert!(trefoil.verify_witness(&w("1 2 3 1 2 3")));
        assert!(matches!(reductivity(&w("1 2 3 4 1 2 3 4")), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn witness_is_deterministic() {
        let a = reductivity(&w("1 2 3 1 2 3")).unwrap();
        let b = reductivity(&w("3 1 2 3 1 2")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tampered_witness_fails() {
        let word = w("1 2 3 1 2 3");
        let mut r = reductivity(&word).unwrap();
        r.witness.clear();
        assert!(!r.verify_witness(&word));
    }

    #[test]
    fn survey_first_rows() {
        let s = survey(3, Convention::default()).unwrap();
        assert_eq!(s.rows[0].curves, 1);
        assert_eq!(s.rows[0].histogram, [1, 0, 0, 0, 0]);
        assert!(s.rows[2].histogram[1] >= 1);
        assert!(s.to_tsv().starts_with("# survey-tsv v1\nn\tcurves"));
    }
}
