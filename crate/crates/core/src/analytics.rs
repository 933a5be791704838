//! Local patterns on spherical curves: bigons, typed trigons and face-pattern
//! tangle predicates.
//!
//! A trigon's type is read off its three sides. Each side is an edge of the
//! curve, i.e. a pair of consecutive letters of the word, and in a reduced
//! curve the three sides use each corner label exactly twice. Listing the
//! sides in word order gives a six-letter pattern; up to rotation by whole
//! sides, reversal and relabeling exactly four patterns exist:
//!
//! | pattern  | interlaced pairs | boundary   | letter |
//! |----------|------------------|------------|--------|
//! | `abbcca` | 0                | coherent   | D      |
//! | `abaccb` | 1                | incoherent | B      |
//! | `abacbc` | 2                | incoherent | A      |
//! | `abcabc` | 3                | coherent   | C      |
//!
//! The letters come from [`TRIGON_CALIBRATION`], which is derived
//! behaviorally by [`derive_trigon_calibration`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::{Face, FaceMap, PlaneCurve};
use crate::error::{Error, ParseError, Result};
use crate::gauss::{GaussWord, Label};
use crate::reductivity;
use crate::splice::inverse_splice_curve;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigonReport {
    /// Index into the curve's face list.
    pub face_index: usize,
    pub face: Face,
    pub coherent: bool,
    pub crossings: [Label; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrigonLetter {
    A,
    B,
    C,
    D,
    Unknown,
}

impl TrigonLetter {
    pub const ALL: [TrigonLetter; 4] = [TrigonLetter::A, TrigonLetter::B, TrigonLetter::C, TrigonLetter::D];

    /// Reductivity bound implied by a trigon of this type.
    pub fn reductivity_bound(self) -> Option<usize> {
        match self {
            TrigonLetter::A => Some(2),
            TrigonLetter::B | TrigonLetter::C => Some(3),
            TrigonLetter::D => Some(4),
            TrigonLetter::Unknown => None,
        }
    }
}

impl fmt::Display for TrigonLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrigonLetter::A => "A",
            TrigonLetter::B => "B",
            TrigonLetter::C => "C",
            TrigonLetter::D => "D",
            TrigonLetter::Unknown => "?",
        };
        f.write_str(s)
    }
}

/// Side pattern of a trigon: the six corner letters of its three sides in
/// word order, canonicalized. `Degenerate` covers trigons whose corners
/// repeat a crossing (only possible on reducible curves).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrigonSignature {
    Pattern([u8; 6]),
    Degenerate,
}

impl TrigonSignature {
    pub fn interlace_count(&self) -> Option<usize> {
        match self {
            TrigonSignature::Pattern(p) => {
                let pos = |c: u8| {
                    let mut it = p.iter().enumerate().filter(|(_, &x)| x == c).map(|(i, _)| i);
                    (it.next().unwrap(), it.next().unwrap())
                };
                let occ = [pos(0), pos(1), pos(2)];
                let mut count = 0;
                for a in 0..3 {
                    for b in a + 1..3 {
                        if crate::gauss::chords_cross(occ[a], occ[b]) {
                            count += 1;
                        }
                    }
                }
                Some(count)
            }
            TrigonSignature::Degenerate => None,
        }
    }

    pub fn letter(&self) -> TrigonLetter {
        TRIGON_CALIBRATION
            .iter()
            .find(|(pattern, _)| TrigonSignature::Pattern(*pattern) == *self)
            .map(|&(_, letter)| letter)
            .unwrap_or(TrigonLetter::Unknown)
    }
}

impl fmt::Display for TrigonSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigonSignature::Pattern(p) => {
                for &c in p {
                    write!(f, "{}", (b'a' + c) as char)?;
                }
                Ok(())
            }
            TrigonSignature::Degenerate => f.write_str("degenerate"),
        }
    }
}

/// Signature → letter table. Regenerate with
/// `cargo run --release -p spherecurve --example calibrate_trigons`.
pub const TRIGON_CALIBRATION: [([u8; 6], TrigonLetter); 4] = [
    ([0, 1, 0, 2, 1, 2], TrigonLetter::A),
    ([0, 1, 0, 2, 2, 1], TrigonLetter::B),
    ([0, 1, 2, 0, 1, 2], TrigonLetter::C),
    ([0, 1, 1, 2, 2, 0], TrigonLetter::D),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigonReport {
    pub face_index: usize,
    pub face: Face,
    pub crossings: [Label; 3],
    pub interlace_count: usize,
    pub signature: TrigonSignature,
    pub letter: TrigonLetter,
    pub coherent: bool,
}

pub fn find_bigons(curve: &PlaneCurve) -> Vec<BigonReport> {
    bigons_in(&curve.face_map())
}

pub fn bigons_in(map: &FaceMap) -> Vec<BigonReport> {
    map.faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.size == 2)
        .map(|(face_index, f)| BigonReport {
            face_index,
            face: f.clone(),
            coherent: f.coherent,
            crossings: [f.incident_crossings[0], f.incident_crossings[1]],
        })
        .collect()
}

pub fn find_trigons(curve: &PlaneCurve) -> Vec<TrigonReport> {
    trigons_in(curve.word(), &curve.face_map())
}

pub fn trigons_in(word: &GaussWord, map: &FaceMap) -> Vec<TrigonReport> {
    map.faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.size == 3)
        .map(|(face_index, f)| {
            let signature = trigon_signature(word, f);
            let crossings = [f.incident_crossings[0], f.incident_crossings[1], f.incident_crossings[2]];
            let interlace_count = signature.interlace_count().unwrap_or_else(|| {
                let mut count = 0;
                for a in 0..3 {
                    for b in a + 1..3 {
                        if word.interlaced(crossings[a], crossings[b]).unwrap_or(false) {
                            count += 1;
                        }
                    }
                }
                count
            });
            TrigonReport {
                face_index,
                face: f.clone(),
                crossings,
                interlace_count,
                signature,
                letter: signature.letter(),
                coherent: f.coherent,
            }
        })
        .collect()
}

/// Side pattern of a 3-gon.
pub fn trigon_signature(word: &GaussWord, face: &Face) -> TrigonSignature {
    let m = word.len();
    let letters = word.letters();
    let mut edges: Vec<usize> = face.boundary.iter().map(|d| d.edge()).collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != 3 {
        return TrigonSignature::Degenerate;
    }
    let mut positions: Vec<usize> = edges.iter().flat_map(|&e| [e, (e + 1) % m]).collect();
    positions.sort_unstable();
    positions.dedup();
    if positions.len() != 6 {
        return TrigonSignature::Degenerate;
    }
    let mut seq = [0 as Label; 6];
    for (k, &e) in edges.iter().enumerate() {
        seq[2 * k] = letters[e];
        seq[2 * k + 1] = letters[(e + 1) % m];
    }
    let mut distinct: Vec<Label> = seq.to_vec();
    distinct.sort_unstable();
    if distinct.chunks(2).any(|p| p[0] != p[1]) || distinct[1] == distinct[2] || distinct[3] == distinct[4] {
        return TrigonSignature::Degenerate;
    }
    TrigonSignature::Pattern(canonical_pattern(&seq))
}

/// Least relabeled reading of a side sequence over whole-side rotations and reversal.
fn canonical_pattern<T: Copy + PartialEq>(seq: &[T; 6]) -> [u8; 6] {
    let mut best: Option<[u8; 6]> = None;
    for reverse in [false, true] {
        for shift in [0, 2, 4] {
            let mut map: Vec<T> = Vec::with_capacity(3);
            let mut pat = [0u8; 6];
            for (k, slot) in pat.iter_mut().enumerate() {
                let idx = if reverse { (shift + 6 - 1 - k) % 6 } else { (shift + k) % 6 };
                let c = seq[idx];
                *slot = match map.iter().position(|&l| l == c) {
                    Some(v) => v as u8,
                    None => {
                        map.push(c);
                        map.len() as u8 - 1
                    }
                };
            }
            if best.is_none_or(|b| pat < b) {
                best = Some(pat);
            }
        }
    }
    best.expect("six candidates")
}

// ---------------------------------------------------------------------------
// Tangle predicates

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Neighborhood {
    /// The face itself.
    Size,
    /// Faces sharing a boundary edge.
    Adjacent,
    /// Faces diagonally opposite a corner.
    Corner,
    /// Adjacent and corner faces together (six regions for a trigon).
    Around,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    Any,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl Comparison {
    fn holds(self, lhs: usize, rhs: usize) -> bool {
        match self {
            Comparison::Le => lhs <= rhs,
            Comparison::Lt => lhs < rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Gt => lhs > rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Ne => lhs != rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::Le => "<=",
            Comparison::Lt => "<",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
            Comparison::Eq => "=",
            Comparison::Ne => "!=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SizeConstraint {
    pub scope: Neighborhood,
    pub quantifier: Quantifier,
    pub comparison: Comparison,
    pub value: usize,
}

/// A face-pattern query. Every field is mirror invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TanglePredicate {
    /// Required face size; `None` matches any face.
    pub size: Option<usize>,
    pub coherent: Option<bool>,
    /// Only meaningful for trigons.
    pub letters: Vec<TrigonLetter>,
    pub constraints: Vec<SizeConstraint>,
}

impl TanglePredicate {
    pub fn face(size: usize) -> Self {
        TanglePredicate { size: Some(size), coherent: None, letters: Vec::new(), constraints: Vec::new() }
    }

    pub fn bigon() -> Self {
        Self::face(2)
    }

    pub fn trigon() -> Self {
        Self::face(3)
    }

    pub fn trigon_of(letter: TrigonLetter) -> Self {
        TanglePredicate { letters: vec![letter], ..Self::trigon() }
    }

    pub fn with_constraint(mut self, constraint: SizeConstraint) -> Self {
        self.constraints.push(constraint);
        self
    }

    /// Evaluates the predicate on face `f` of `curve`.
    pub fn matches(&self, ctx: &CurveContext<'_>, f: usize) -> bool {
        let face = &ctx.map.faces[f];
        if self.size.is_some_and(|k| k != face.size) {
            return false;
        }
        if self.coherent.is_some_and(|c| c != face.coherent) {
            return false;
        }
        if !self.letters.is_empty() {
            if face.size != 3 {
                return false;
            }
            let letter = trigon_signature(ctx.word, face).letter();
            if !self.letters.contains(&letter) {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let sizes: Vec<usize> = match c.scope {
                Neighborhood::Size => vec![face.size],
                Neighborhood::Adjacent => ctx.map.edge_neighbors(f),
                Neighborhood::Corner => ctx.map.corner_neighbors(f),
                Neighborhood::Around => {
                    let mut v = ctx.map.edge_neighbors(f);
                    v.extend(ctx.map.corner_neighbors(f));
                    v
                }
            }
            .into_iter()
            .map(|g| if c.scope == Neighborhood::Size { g } else { ctx.map.faces[g].size })
            .collect();
            match c.quantifier {
                Quantifier::Any => sizes.iter().any(|&s| c.comparison.holds(s, c.value)),
                Quantifier::All => sizes.iter().all(|&s| c.comparison.holds(s, c.value)),
            }
        })
    }
}

impl fmt::Display for TanglePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.size {
            None => f.write_str("face")?,
            Some(k) => match KIND_NAMES.iter().find(|(_, s)| *s == k) {
                Some((name, _)) => f.write_str(name)?,
                None => write!(f, "{k}gon")?,
            },
        }
        let mut parts: Vec<String> = Vec::new();
        if let Some(c) = self.coherent {
            parts.push(if c { "coherent".into() } else { "incoherent".into() });
        }
        parts.extend(self.letters.iter().map(|l| l.to_string()));
        for c in &self.constraints {
            let q = match c.quantifier {
                Quantifier::Any => "",
                Quantifier::All => "all-",
            };
            let s = match c.scope {
                Neighborhood::Size => "size",
                Neighborhood::Adjacent => "adj",
                Neighborhood::Corner => "corner",
                Neighborhood::Around => "around",
            };
            parts.push(format!("{q}{s}{}{}", c.comparison.symbol(), c.value));
        }
        if !parts.is_empty() {
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

const KIND_NAMES: [(&str, usize); 6] =
    [("monogon", 1), ("bigon", 2), ("trigon", 3), ("tetragon", 4), ("pentagon", 5), ("hexagon", 6)];

/// A set of alternatives, written `p1|p2|...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TangleSet(pub Vec<TanglePredicate>);

impl TangleSet {
    /// `S₀`: bigons and trigons.
    pub fn bigon_or_trigon() -> Self {
        TangleSet(vec![TanglePredicate::bigon(), TanglePredicate::trigon()])
    }

    pub fn predicates(&self) -> &[TanglePredicate] {
        &self.0
    }
}

impl fmt::Display for TangleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for TangleSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_tangle_set(s)?)
    }
}

impl FromStr for TanglePredicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let set = parse_tangle_set(s)?;
        match <[TanglePredicate; 1]>::try_from(set.0) {
            Ok([p]) => Ok(p),
            Err(_) => Err(ParseError::new(0, "expected a single predicate").into()),
        }
    }
}

/// Parses the predicate mini-language:
///
/// ```text
/// set        := predicate ('|' predicate)*
/// predicate  := kind ('(' condition (',' condition)* ')')?
/// kind       := monogon | bigon | trigon | tetragon | pentagon | hexagon | <k>gon | face
/// condition  := coherent | incoherent | A | B | C | D
///             | ['all-'] (size | adj | corner | around) cmp <int>
/// cmp        := <= | < | >= | > | = | !=
/// ```
pub fn parse_tangle_set(text: &str) -> std::result::Result<TangleSet, ParseError> {
    let mut parser = Parser { text, pos: 0 };
    let mut preds = vec![parser.predicate()?];
    loop {
        parser.skip_ws();
        if parser.eat("|") {
            preds.push(parser.predicate()?);
        } else if parser.pos == text.len() {
            return Ok(TangleSet(preds));
        } else {
            return Err(parser.error("expected `|` or end of input"));
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, msg)
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> std::result::Result<usize, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let value = rest[..len].parse().map_err(|_| self.error("number out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn predicate(&mut self) -> std::result::Result<TanglePredicate, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let kind = self.word();
        let size = if kind == "face" {
            None
        } else if let Some(&(_, k)) = KIND_NAMES.iter().find(|(name, _)| *name == kind) {
            Some(k)
        } else if let Some(k) = kind.strip_suffix("gon").and_then(|d| d.parse::<usize>().ok()) {
            if k == 0 {
                return Err(ParseError::new(start, "face size must be positive"));
            }
            Some(k)
        } else {
            return Err(ParseError::new(start, format!("unknown tangle kind `{kind}`")));
        };
        let mut pred = TanglePredicate { size, coherent: None, letters: Vec::new(), constraints: Vec::new() };
        if self.eat("(") {
            loop {
                self.condition(&mut pred)?;
                if self.eat(",") {
                    continue;
                }
                if self.eat(")") {
                    break;
                }
                return Err(self.error("expected `,` or `)`"));
            }
        }
        Ok(pred)
    }

    fn condition(&mut self, pred: &mut TanglePredicate) -> std::result::Result<(), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let word = self.word();
        match word {
            "coherent" => pred.coherent = Some(true),
            "incoherent" => pred.coherent = Some(false),
            "A" | "B" | "C" | "D" => {
                if pred.size != Some(3) {
                    return Err(ParseError::new(start, "trigon letters only apply to trigons"));
                }
                pred.letters.push(match word {
                    "A" => TrigonLetter::A,
                    "B" => TrigonLetter::B,
                    "C" => TrigonLetter::C,
                    _ => TrigonLetter::D,
                });
            }
            _ => {
                let (quantifier, scope_name) = match word.strip_prefix("all-") {
                    Some(rest) => (Quantifier::All, rest),
                    None => (Quantifier::Any, word.strip_prefix("any-").unwrap_or(word)),
                };
                let scope = match scope_name {
                    "size" => Neighborhood::Size,
                    "adj" => Neighborhood::Adjacent,
                    "corner" => Neighborhood::Corner,
                    "around" => Neighborhood::Around,
                    _ => return Err(ParseError::new(start, format!("unknown condition `{word}`"))),
                };
                self.skip_ws();
                let comparison = [
                    ("<=", Comparison::Le),
                    (">=", Comparison::Ge),
                    ("!=", Comparison::Ne),
                    ("<", Comparison::Lt),
                    (">", Comparison::Gt),
                    ("=", Comparison::Eq),
                ]
                .into_iter()
                .find(|(sym, _)| self.rest().starts_with(sym))
                .map(|(sym, cmp)| {
                    self.pos += sym.len();
                    cmp
                })
                .ok_or_else(|| self.error("expected a comparison"))?;
                let value = self.number()?;
                pred.constraints.push(SizeConstraint { scope, quantifier, comparison, value });
            }
        }
        Ok(())
    }
}

/// Precomputed faces of a curve for repeated predicate evaluation.
pub struct CurveContext<'a> {
    pub word: &'a GaussWord,
    pub map: FaceMap,
}

impl<'a> CurveContext<'a> {
    pub fn new(curve: &'a PlaneCurve) -> Self {
        CurveContext { word: curve.word(), map: curve.face_map() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleMatch {
    /// Index of the first matching predicate in the set.
    pub predicate: usize,
    pub face_index: usize,
    pub face_size: usize,
    pub crossings: Vec<Label>,
}

/// First (predicate, face) match in set order, then face order.
pub fn match_tangles(curve: &PlaneCurve, set: &TangleSet) -> Option<TangleMatch> {
    let ctx = CurveContext::new(curve);
    match_in(&ctx, set)
}

pub fn match_in(ctx: &CurveContext<'_>, set: &TangleSet) -> Option<TangleMatch> {
    set.0.iter().enumerate().find_map(|(k, pred)| {
        (0..ctx.map.faces.len()).find(|&f| pred.matches(ctx, f)).map(|f| TangleMatch {
            predicate: k,
            face_index: f,
            face_size: ctx.map.faces[f].size,
            crossings: ctx.map.faces[f].incident_crossings.clone(),
        })
    })
}

// ---------------------------------------------------------------------------
// Calibration

/// Behavior of one trigon signature class over a census.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureBehavior {
    /// Trigons of this class on reduced curves.
    pub trigons: usize,
    /// ... for which splicing some corner leaves an incoherent bigon on the other two corners.
    pub corner_to_incoherent_bigon: usize,
    /// ... for which splicing some corner leaves a coherent bigon on the other two corners.
    pub corner_to_coherent_bigon: usize,
    /// Largest reductivity of a curve carrying this class.
    pub max_reductivity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub max_n: usize,
    pub behavior: BTreeMap<String, SignatureBehavior>,
    /// Derived assignment, sorted by pattern; `None` when the behavior does
    /// not single out one class per letter.
    pub table: Option<Vec<([u8; 6], TrigonLetter)>>,
    /// D trigons, and those for which one splice somewhere creates a B trigon.
    pub d_trigons: usize,
    pub d_to_b: usize,
}

/// All side patterns a trigon can have.
///
/// Each side joins two different corners and each corner lies on two sides.
pub fn trigon_patterns() -> Vec<[u8; 6]> {
    let mut found = Vec::new();
    for code in 0..729u32 {
        let mut seq = [0u8; 6];
        let mut c = code;
        for slot in &mut seq {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        let balanced = (0..3).all(|l| seq.iter().filter(|&&x| x == l).count() == 2);
        if balanced && seq.chunks(2).all(|side| side[0] != side[1]) {
            found.push(canonical_pattern(&seq));
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

fn pattern_of(t: &TrigonReport) -> Option<[u8; 6]> {
    match t.signature {
        TrigonSignature::Pattern(p) => Some(p),
        TrigonSignature::Degenerate => None,
    }
}

/// `(incoherent, coherent)`: whether splicing some corner of `t` leaves a
/// bigon of that kind on the two remaining corners.
fn corner_bigons(curve: &PlaneCurve, t: &TrigonReport) -> Result<(bool, bool)> {
    let mut out = (false, false);
    for &p in &t.crossings {
        let spliced = inverse_splice_curve(curve, p)?;
        let mut want: Vec<Label> =
            t.crossings.iter().filter(|&&x| x != p).filter_map(|&x| spliced.label_of(x)).collect();
        want.sort_unstable();
        for b in find_bigons(&spliced.curve) {
            let mut got = b.crossings.to_vec();
            got.sort_unstable();
            if got == want {
                if b.coherent {
                    out.1 = true;
                } else {
                    out.0 = true;
                }
            }
        }
    }
    Ok(out)
}

/// Derives the signature → letter table from how each class behaves under
/// one inverse splice, over all reduced curves with at most `max_n` crossings:
///
/// - C is the class of the trefoil's trigons;
/// - A is the other class where splicing a corner always leaves an incoherent bigon;
/// - B is the remaining class where splicing a corner always leaves a coherent bigon;
/// - D is the last pattern, and one splice must turn each D trigon's curve into one with a B trigon.
///
/// Every class must occur, which needs `max_n >= 7`.
pub fn derive_trigon_calibration(curves: &[PlaneCurve], max_n: usize) -> Result<CalibrationReport> {
    use rayon::prelude::*;

    type Row = ([u8; 6], bool, bool, usize, Vec<[u8; 6]>);
    let per_curve: Vec<Result<Vec<Row>>> = curves
        .par_iter()
        .filter(|c| c.crossing_count() <= max_n && c.is_reduced())
        .map(|c| {
            let trigons = find_trigons(c);
            if trigons.is_empty() {
                return Ok(Vec::new());
            }
            let r = reductivity::reductivity(c.word())?.value;
            let mut reachable: Vec<[u8; 6]> = Vec::new();
            for p in c.word().labels() {
                let spliced = inverse_splice_curve(c, p)?;
                reachable.extend(find_trigons(&spliced.curve).iter().filter_map(pattern_of));
            }
            reachable.sort_unstable();
            reachable.dedup();
            trigons
                .iter()
                .filter_map(|t| pattern_of(t).map(|p| (p, t)))
                .map(|(p, t)| {
                    let (inc, coh) = corner_bigons(c, t)?;
                    Ok((p, inc, coh, r, reachable.clone()))
                })
                .collect()
        })
        .collect();

    let mut stats: BTreeMap<[u8; 6], SignatureBehavior> =
        trigon_patterns().into_iter().map(|p| (p, SignatureBehavior::default())).collect();
    let mut reaches: BTreeMap<[u8; 6], Vec<Vec<[u8; 6]>>> = BTreeMap::new();
    for rows in per_curve {
        for (p, inc, coh, r, reachable) in rows? {
            let s = stats.entry(p).or_default();
            s.trigons += 1;
            s.corner_to_incoherent_bigon += inc as usize;
            s.corner_to_coherent_bigon += coh as usize;
            s.max_reductivity = s.max_reductivity.max(r);
            reaches.entry(p).or_default().push(reachable);
        }
    }

    let trefoil = GaussWord::parse("1 2 3 1 2 3")?;
    let trefoil_curve = crate::embedding::realize_all(&trefoil, true)
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvariantViolation("trefoil not realizable".into()))?;
    let c_class = find_trigons(&trefoil_curve)
        .first()
        .and_then(pattern_of)
        .ok_or_else(|| Error::InvariantViolation("trefoil has no trigon".into()))?;

    let always = |s: &SignatureBehavior, k: usize| s.trigons > 0 && k == s.trigons;
    let rest: Vec<[u8; 6]> = stats.keys().copied().filter(|&p| p != c_class).collect();
    let a: Vec<[u8; 6]> =
        rest.iter().copied().filter(|p| always(&stats[p], stats[p].corner_to_incoherent_bigon)).collect();
    let b: Vec<[u8; 6]> = rest
        .iter()
        .copied()
        .filter(|p| !a.contains(p) && always(&stats[p], stats[p].corner_to_coherent_bigon))
        .collect();
    let d: Vec<[u8; 6]> = rest.iter().copied().filter(|p| !a.contains(p) && !b.contains(p)).collect();

    let (mut d_trigons, mut d_to_b) = (0, 0);
    let table = match (a.as_slice(), b.as_slice(), d.as_slice()) {
        ([a], [b], [d]) => {
            let seen = reaches.get(d).map(Vec::as_slice).unwrap_or(&[]);
            d_trigons = seen.len();
            d_to_b = seen.iter().filter(|r| r.contains(b)).count();
            (d_trigons > 0 && d_to_b == d_trigons).then(|| {
                let mut t = vec![
                    (*a, TrigonLetter::A),
                    (*b, TrigonLetter::B),
                    (c_class, TrigonLetter::C),
                    (*d, TrigonLetter::D),
                ];
                t.sort();
                t
            })
        }
        _ => None,
    };

    let behavior = stats.into_iter().map(|(p, s)| (TrigonSignature::Pattern(p).to_string(), s)).collect();
    Ok(CalibrationReport { max_n, behavior, table, d_trigons, d_to_b })
}
