//! Half-twisted splices and connected sums as word rewrites.
//!
//! On the chord diagram, the inverse half-twisted splice at crossing `p`
//! deletes the chord `p` and flips one of the two arcs it cut off: writing
//! the cyclic word as `p·B·p·A`, the result is `reverse(B)·A`. The forward
//! splice creates a crossing by reversing a segment and bracketing it with a
//! fresh label.

use serde::{Deserialize, Serialize};

use crate::embedding::{Chirality, PlaneCurve};
use crate::error::{Error, Result};
use crate::gauss::{CanonicalKey, GaussWord, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpliceKind {
    InverseHalfTwisted,
    HalfTwisted,
    ConnectedSum,
}

/// Where a rewrite acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpliceSite {
    Crossing(Label),
    Cuts(usize, usize),
}

/// One recorded rewrite between canonical words.
///
/// Sites refer to the labels and positions of `before` read as a word, so a
/// step can be replayed without any other context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceStep {
    pub kind: SpliceKind,
    pub at: SpliceSite,
    pub before: CanonicalKey,
    pub after: CanonicalKey,
}

impl SpliceStep {
    pub fn inverse(before: &GaussWord, label: Label) -> Result<Self> {
        let before_key = before.canonical_key();
        let start = before_key.to_word();
        if start != *before {
            return Err(Error::InvariantViolation(format!("{before} is not in canonical form")));
        }
        let after = inverse_splice(&start, label)?.canonical_key();
        Ok(SpliceStep { kind: SpliceKind::InverseHalfTwisted, at: SpliceSite::Crossing(label), before: before_key, after })
    }

    /// Re-applies the rewrite to `before` and returns the canonical result.
    pub fn replay(&self) -> Result<CanonicalKey> {
        let word = self.before.to_word();
        let result = match (self.kind, self.at) {
            (SpliceKind::InverseHalfTwisted, SpliceSite::Crossing(p)) => inverse_splice(&word, p)?,
            (SpliceKind::HalfTwisted, SpliceSite::Cuts(i, j)) => half_twisted_splice(&word, i, j)?.0,
            _ => return Err(Error::InvariantViolation(format!("{:?} cannot act at {:?}", self.kind, self.at))),
        };
        Ok(result.canonical_key())
    }

    /// Whether replaying reproduces `after` with the expected crossing change.
    pub fn verify(&self) -> bool {
        let delta: isize = match self.kind {
            SpliceKind::InverseHalfTwisted => -1,
            SpliceKind::HalfTwisted => 1,
            SpliceKind::ConnectedSum => return false,
        };
        let before = self.before.letters().len() as isize / 2;
        let after = self.after.letters().len() as isize / 2;
        after - before == delta && self.replay().is_ok_and(|k| k == self.after)
    }
}

/// The inverse half-twisted splice `I` at crossing `p`.
pub fn inverse_splice(word: &GaussWord, p: Label) -> Result<GaussWord> {
    let (i, j) = word.positions(p)?;
    if word.crossing_count() == 1 {
        return Err(Error::DegenerateResult);
    }
    let letters = word.letters();
    let mut out = Vec::with_capacity(letters.len() - 2);
    out.extend(letters[i + 1..j].iter().rev());
    out.extend(&letters[j + 1..]);
    out.extend(&letters[..i]);
    Ok(GaussWord::normalize(&out))
}

/// Result of splicing a curve with chiralities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplicedCurve {
    pub curve: PlaneCurve,
    /// `relabel[x - 1]` is the new label of old crossing `x`; `None` for the spliced one.
    pub relabel: Vec<Option<Label>>,
}

impl SplicedCurve {
    pub fn label_of(&self, old: Label) -> Option<Label> {
        self.relabel.get(old as usize - 1).copied().flatten()
    }
}

/// The inverse half-twisted splice on a curve, keeping the embedding.
///
/// The surgery is local to `p`, so every other crossing keeps its place and
/// tangents, except that passages inside the reversed arc run backwards. A
/// chirality therefore flips once per reversed passage and once more when the
/// order of its two passages changes.
pub fn inverse_splice_curve(curve: &PlaneCurve, p: Label) -> Result<SplicedCurve> {
    let word = curve.word();
    let (i, j) = word.positions(p)?;
    if word.crossing_count() == 1 {
        return Err(Error::DegenerateResult);
    }
    let letters = word.letters();
    let m = letters.len();
    // (old position, reversed) in new reading order.
    let order: Vec<(usize, bool)> = (i + 1..j)
        .rev()
        .map(|k| (k, true))
        .chain((j + 1..m).map(|k| (k, false)))
        .chain((0..i).map(|k| (k, false)))
        .collect();
    let n = word.crossing_count();
    let mut relabel: Vec<Option<Label>> = vec![None; n];
    let mut next: Label = 1;
    let mut first_seen: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut new_signs: Vec<Option<Chirality>> = vec![None; n - 1];
    let mut raw = Vec::with_capacity(m - 2);
    for &(k, reversed) in &order {
        let x = letters[k];
        let slot = x as usize - 1;
        let new = *relabel[slot].get_or_insert_with(|| {
            next += 1;
            next - 1
        });
        raw.push(new);
        match first_seen[slot] {
            None => first_seen[slot] = Some((k, reversed)),
            Some((k0, r0)) => {
                let swapped = k0 > k;
                let flips = r0 as u8 + reversed as u8 + swapped as u8;
                let old = curve.sign(x);
                new_signs[new as usize - 1] = Some(if flips % 2 == 1 { old.flipped() } else { old });
            }
        }
    }
    let signs: Vec<Chirality> = new_signs.into_iter().map(|s| s.expect("every label seen twice")).collect();
    let spliced = PlaneCurve::new(GaussWord::from_normalized(raw), signs).map_err(|e| {
        Error::InvariantViolation(format!("inverse splice of {} at {p} left the sphere: {e}", curve.to_signed_string()))
    })?;
    Ok(SplicedCurve { curve: spliced, relabel })
}

/// Forward half-twisted splice between cut positions `i < j` (gaps between
/// letters, `0..=2n`). Returns the new word and the label of the new crossing.
pub fn half_twisted_splice(word: &GaussWord, i: usize, j: usize) -> Result<(GaussWord, Label)> {
    let m = word.len();
    if j > m {
        return Err(Error::InvalidPosition { position: j, len: m });
    }
    if i >= j {
        return Err(Error::InvalidPosition { position: i, len: m });
    }
    let letters = word.letters();
    let fresh = (word.crossing_count() + 1) as Label;
    let mut out = Vec::with_capacity(m + 2);
    out.push(fresh);
    out.extend(letters[i..j].iter().rev());
    out.push(fresh);
    out.extend(&letters[j..]);
    out.extend(&letters[..i]);
    // The fresh label leads the word, so normalization renames it to 1.
    Ok((GaussWord::normalize(&out), 1))
}

/// Connected sum: `b`, read from its position `arc_b`, is inserted into `a`
/// at its position `arc_a`.
pub fn connected_sum(a: &GaussWord, arc_a: usize, b: &GaussWord, arc_b: usize) -> Result<GaussWord> {
    if arc_a >= a.len() {
        return Err(Error::InvalidPosition { position: arc_a, len: a.len() });
    }
    if arc_b >= b.len() {
        return Err(Error::InvalidPosition { position: arc_b, len: b.len() });
    }
    let shift = a.crossing_count() as Label;
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend(&a.letters()[..arc_a]);
    let bl = b.letters();
    out.extend(bl[arc_b..].iter().chain(&bl[..arc_b]).map(|&c| c + shift));
    out.extend(&a.letters()[arc_a..]);
    Ok(GaussWord::normalize(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GaussWord {
        GaussWord::parse(s).unwrap()
    }

    #[test]
    fn inverse_on_trefoil() {
        let out = inverse_splice(&w("1 2 3 1 2 3"), 1).unwrap();
        // reverse(2 3) then (2 3): 3 2 2 3
        assert_eq!(out, w("3 2 2 3"));
        assert_eq!(out.canonical_key(), w("1 2 2 1").canonical_key());
        assert!(out.has_free_chord());
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(inverse_splice(&w("1 1"), 1), Err(Error::DegenerateResult));
        assert_eq!(inverse_splice(&w("1 1 2 2"), 3), Err(Error::UnknownLabel(3)));
    }

    #[test]
    fn forward_splice() {
        let (out, p) = half_twisted_splice(&w("1 1"), 0, 2).unwrap();
        assert_eq!(out.crossing_count(), 2);
        assert_eq!(inverse_splice(&out, p).unwrap().canonical_key(), w("1 1").canonical_key());
        assert!(matches!(half_twisted_splice(&w("1 1"), 1, 1), Err(Error::InvalidPosition { .. })));
        assert!(matches!(half_twisted_splice(&w("1 1"), 0, 3), Err(Error::InvalidPosition { .. })));
    }

    #[test]
    fn sums() {
        let s = connected_sum(&w("1 1"), 0, &w("1 1"), 0).unwrap();
        assert_eq!(s.canonical_key(), w("1 1 2 2").canonical_key());
        let t = connected_sum(&w("1 2 3 1 2 3"), 2, &w("1 1"), 1).unwrap();
        assert_eq!(t.crossing_count(), 4);
        assert_eq!(t, w("1 2 3 3 4 1 2 4"));
        assert_eq!(t.free_chords(), vec![3]);
        assert!(connected_sum(&w("1 1"), 2, &w("1 1"), 0).is_err());
    }

    #[test]
    fn signed_splice_stays_spherical() {
        for c in crate::embedding::realize_all(&w("1 2 3 1 4 5 2 3 6 7 5 4 7 6"), false) {
            for p in c.word().labels() {
                let s = inverse_splice_curve(&c, p).unwrap();
                assert_eq!(s.curve.word().canonical_key(), inverse_splice(c.word(), p).unwrap().canonical_key());
                assert_eq!(s.label_of(p), None);
            }
        }
    }

    #[test]
    fn steps_replay() {
        let start = w("1 2 3 1 2 3").canonical();
        let step = SpliceStep::inverse(&start, 2).unwrap();
        assert!(step.verify());
        let bad = SpliceStep { after: start.canonical_key(), ..step };
        assert!(!bad.verify());
    }
}
