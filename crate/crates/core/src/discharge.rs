//! Charges, discharging rules and unavoidable-set scans.
//!
//! Every `k`-gon of a reduced curve starts with charge `4 - k`; by Euler's
//! formula the total is 8. Rules move charge from matching faces to their
//! neighbors without changing the total. All arithmetic is exact.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{match_in, parse_tangle_set, CurveContext, TanglePredicate, TangleSet};
use crate::embedding::{Convention, EmbeddingKey, FaceMap, PlaneCurve};
use crate::enumerate::{enumerate_words, CurveCensus};
use crate::error::{Error, ParseError, Result};

/// The total charge of every reduced spherical curve.
pub const TOTAL_CHARGE: i64 = 8;

/// Per-face charges of one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeState {
    charges: Vec<Rational64>,
}

impl ChargeState {
    pub fn charges(&self) -> &[Rational64] {
        &self.charges
    }

    pub fn charge(&self, face: usize) -> Rational64 {
        self.charges[face]
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn total(&self) -> Rational64 {
        self.charges.iter().sum()
    }

    /// Faces with strictly positive charge.
    pub fn positive_faces(&self) -> Vec<usize> {
        (0..self.charges.len()).filter(|&f| self.charges[f].is_positive()).collect()
    }
}

impl fmt::Display for ChargeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.charges.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Charge `4 - k` on every `k`-gon of a reduced curve.
pub fn initial_charges(curve: &PlaneCurve) -> Result<ChargeState> {
    if !curve.is_reduced() {
        return Err(Error::NotReduced);
    }
    Ok(charges_of(&curve.face_map()))
}

fn charges_of(map: &FaceMap) -> ChargeState {
    ChargeState { charges: map.faces.iter().map(|f| Rational64::from_integer(4 - f.size as i64)).collect() }
}

/// Which faces around a source face receive charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Receiver {
    /// One slot per boundary edge: the face across it.
    Adjacent,
    /// One slot per corner: the face diagonally opposite it.
    Opposite,
    /// Both of the above.
    Around,
}

impl Receiver {
    fn slots(self, size: usize) -> usize {
        match self {
            Receiver::Adjacent | Receiver::Opposite => size,
            Receiver::Around => 2 * size,
        }
    }

    fn faces(self, map: &FaceMap, f: usize) -> Vec<usize> {
        match self {
            Receiver::Adjacent => map.edge_neighbors(f),
            Receiver::Opposite => map.corner_neighbors(f),
            Receiver::Around => {
                let mut v = map.edge_neighbors(f);
                v.extend(map.corner_neighbors(f));
                v
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Receiver::Adjacent => "adjacent",
            Receiver::Opposite => "opposite",
            Receiver::Around => "around",
        }
    }
}

/// Take `take` from every face matching `source` and send `amount` to each
/// receiver slot. Slots are counted with multiplicity, so a face that is
/// both adjacent and opposite receives twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DischargeRule {
    pub name: String,
    pub source: TanglePredicate,
    pub take: Rational64,
    pub sends: Vec<(Receiver, Rational64)>,
}

impl DischargeRule {
    /// Takes 1 from every trigon and sends 1/6 to each of its six surrounding regions.
    pub fn d1() -> Self {
        DischargeRule {
            name: "D1".into(),
            source: TanglePredicate::trigon(),
            take: Rational64::from_integer(1),
            sends: vec![(Receiver::Around, Rational64::new(1, 6))],
        }
    }

    /// Checks that the amounts sent add up to the amount taken.
    pub fn validate(&self) -> Result<()> {
        let size = self
            .source
            .size
            .ok_or_else(|| Error::PatternMismatch(format!("rule {} needs a fixed source face size", self.name)))?;
        let sent: Rational64 =
            self.sends.iter().map(|&(r, q)| q * Rational64::from_integer(r.slots(size) as i64)).sum();
        if sent != self.take {
            return Err(Error::PatternMismatch(format!(
                "rule {} takes {} but sends {}",
                self.name, self.take, sent
            )));
        }
        Ok(())
    }
}

impl fmt::Display for DischargeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rule {}", self.name)?;
        writeln!(f, "source {}", self.source)?;
        writeln!(f, "take {}", self.take)?;
        for (r, q) in &self.sends {
            writeln!(f, "send {} {}", r.name(), q)?;
        }
        Ok(())
    }
}

/// Parses rule definitions:
///
/// ```text
/// # comment
/// rule D1
/// source trigon
/// take 1
/// send around 1/6
/// ```
///
/// Errors carry the 1-based line number as their position.
pub fn parse_rules(text: &str) -> std::result::Result<Vec<DischargeRule>, ParseError> {
    struct Partial {
        line: usize,
        name: String,
        source: Option<TanglePredicate>,
        take: Option<Rational64>,
        sends: Vec<(Receiver, Rational64)>,
    }

    fn finish(p: Partial) -> std::result::Result<DischargeRule, ParseError> {
        let source = p.source.ok_or_else(|| ParseError::new(p.line, format!("rule {} has no source", p.name)))?;
        let take = p.take.ok_or_else(|| ParseError::new(p.line, format!("rule {} has no take", p.name)))?;
        let rule = DischargeRule { name: p.name, source, take, sends: p.sends };
        rule.validate().map_err(|e| ParseError::new(p.line, e.to_string()))?;
        Ok(rule)
    }

    fn rational(line: usize, s: &str) -> std::result::Result<Rational64, ParseError> {
        let q = Rational64::from_str(s).map_err(|_| ParseError::new(line, format!("bad amount {s:?}")))?;
        if q.is_negative() {
            return Err(ParseError::new(line, format!("negative amount {s}")));
        }
        Ok(q)
    }

    let mut rules = Vec::new();
    let mut current: Option<Partial> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        if head == "rule" {
            if rest.is_empty() {
                return Err(ParseError::new(line, "rule needs a name"));
            }
            if let Some(p) = current.take() {
                rules.push(finish(p)?);
            }
            current = Some(Partial { line, name: rest.to_string(), source: None, take: None, sends: Vec::new() });
            continue;
        }
        let p = current.as_mut().ok_or_else(|| ParseError::new(line, format!("{head} outside a rule")))?;
        match head {
            "source" => {
                let set = parse_tangle_set(rest)
                    .map_err(|e| ParseError::new(line, format!("column {}: {}", e.position + 1, e.message)))?;
                match <[TanglePredicate; 1]>::try_from(set.0) {
                    Ok([pred]) => p.source = Some(pred),
                    Err(_) => return Err(ParseError::new(line, "source must be a single predicate")),
                }
            }
            "take" => p.take = Some(rational(line, rest)?),
            "send" => {
                let (who, amount) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| ParseError::new(line, "expected `send <receiver> <amount>`"))?;
                let receiver = match who {
                    "adjacent" => Receiver::Adjacent,
                    "opposite" => Receiver::Opposite,
                    "around" => Receiver::Around,
                    other => return Err(ParseError::new(line, format!("unknown receiver {other:?}"))),
                };
                p.sends.push((receiver, rational(line, amount.trim())?));
            }
            other => return Err(ParseError::new(line, format!("unknown directive {other:?}"))),
        }
    }
    if let Some(p) = current {
        rules.push(finish(p)?);
    }
    Ok(rules)
}

/// Applies `rule` to every matching face at once; matches are decided on the
/// curve, not on intermediate charges.
pub fn apply_rule(curve: &PlaneCurve, state: &ChargeState, rule: &DischargeRule) -> Result<ChargeState> {
    let ctx = CurveContext::new(curve);
    apply_in(&ctx, state, rule)
}

fn apply_in(ctx: &CurveContext<'_>, state: &ChargeState, rule: &DischargeRule) -> Result<ChargeState> {
    if state.len() != ctx.map.faces.len() {
        return Err(Error::PatternMismatch(format!(
            "charge state has {} faces, curve has {}",
            state.len(),
            ctx.map.faces.len()
        )));
    }
    let mut charges = state.charges.clone();
    for f in (0..ctx.map.faces.len()).filter(|&f| rule.source.matches(ctx, f)) {
        charges[f] -= rule.take;
        for &(receiver, amount) in &rule.sends {
            let slots = receiver.faces(&ctx.map, f);
            if slots.len() != receiver.slots(ctx.map.faces[f].size) {
                return Err(Error::PatternMismatch(format!("face {f} has {} {} slots", slots.len(), receiver.name())));
            }
            for g in slots {
                charges[g] += amount;
            }
        }
    }
    Ok(ChargeState { charges })
}

/// Outcome of discharging one curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DischargeAudit {
    pub key: EmbeddingKey,
    pub initial: Vec<String>,
    pub discharged: Vec<String>,
    pub initial_total: String,
    pub final_total: String,
    pub conserved: bool,
    /// Faces matched by some rule source.
    pub sources: usize,
    /// Faces still positive after discharging.
    pub positive_faces: Vec<usize>,
}

/// Initial charges, then every rule in order.
pub fn audit_curve(curve: &PlaneCurve, rules: &[DischargeRule], convention: Convention) -> Result<DischargeAudit> {
    if !curve.is_reduced() {
        return Err(Error::NotReduced);
    }
    let ctx = CurveContext::new(curve);
    let initial = charges_of(&ctx.map);
    let mut state = initial.clone();
    let mut conserved = initial.total() == Rational64::from_integer(TOTAL_CHARGE);
    let mut sources = 0;
    for rule in rules {
        rule.validate()?;
        sources += (0..ctx.map.faces.len()).filter(|&f| rule.source.matches(&ctx, f)).count();
        let next = apply_in(&ctx, &state, rule)?;
        conserved &= next.total() == state.total();
        state = next;
    }
    let strings = |s: &ChargeState| s.charges.iter().map(|c| c.to_string()).collect();
    Ok(DischargeAudit {
        key: curve.key(convention),
        initial: strings(&initial),
        discharged: strings(&state),
        initial_total: initial.total().to_string(),
        final_total: state.total().to_string(),
        conserved,
        sources,
        positive_faces: state.positive_faces(),
    })
}

/// Conservation summary over the reduced curves of one census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub n: usize,
    pub reduced: usize,
    /// Curves whose initial total is not 8.
    pub bad_initial: usize,
    /// Curves where some rule changed the total.
    pub not_conserved: usize,
    /// Curves left without any positive face.
    pub no_positive: usize,
    pub examples: Vec<EmbeddingKey>,
}

pub fn audit_census(census: &CurveCensus, rules: &[DischargeRule]) -> Result<AuditRow> {
    let audits: Vec<DischargeAudit> = census
        .reduced()
        .par_iter()
        .map(|c| audit_curve(c, rules, census.convention))
        .collect::<Result<Vec<_>>>()?;
    let eight = TOTAL_CHARGE.to_string();
    let failing: Vec<&DischargeAudit> =
        audits.iter().filter(|a| a.initial_total != eight || !a.conserved).collect();
    Ok(AuditRow {
        n: census.n,
        reduced: audits.len(),
        bad_initial: audits.iter().filter(|a| a.initial_total != eight).count(),
        not_conserved: audits.iter().filter(|a| !a.conserved).count(),
        no_positive: audits.iter().filter(|a| a.positive_faces.is_empty()).count(),
        examples: failing.iter().take(EXAMPLES).map(|a| a.key.clone()).collect(),
    })
}

/// Counterexamples kept per row of a report.
const EXAMPLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub reduced: usize,
    pub matched: usize,
    pub avoiding: usize,
    /// The first few reduced curves (in key order) matching no predicate.
    pub examples: Vec<EmbeddingKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every reduced curve up to `n_max` contains a tangle of the set.
    /// Evidence only, not a proof.
    NoCounterexample { n_max: usize },
    Counterexample { key: EmbeddingKey },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoCounterexample { n_max } => write!(f, "no counterexample up to n={n_max}"),
            Verdict::Counterexample { key } => write!(f, "counterexample {key}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub set: String,
    pub n_max: usize,
    pub convention: Convention,
    pub rows: Vec<ScanRow>,
    pub verdict: Verdict,
}

/// Column set of the scan TSV; bump when columns change.
pub const SCAN_TSV_VERSION: u32 = 1;

impl ScanReport {
    pub fn first_counterexample(&self) -> Option<&EmbeddingKey> {
        match &self.verdict {
            Verdict::Counterexample { key } => Some(key),
            Verdict::NoCounterexample { .. } => None,
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# scan-tsv v{SCAN_TSV_VERSION}").unwrap();
        writeln!(out, "# set={} verdict={}", self.set, self.verdict).unwrap();
        writeln!(out, "n\treduced\tmatched\tavoiding\texample").unwrap();
        for row in &self.rows {
            let example = row.examples.first().map(|k| k.to_string()).unwrap_or_default();
            writeln!(out, "{}\t{}\t{}\t{}\t{}", row.n, row.reduced, row.matched, row.avoiding, example).unwrap();
        }
        out
    }
}

/// Matches `set` against every reduced curve of `census`.
pub fn scan_census(set: &TangleSet, census: &CurveCensus) -> ScanRow {
    let curves = census.reduced();
    let avoiding: Vec<bool> = curves.par_iter().map(|c| match_in(&CurveContext::new(c), set).is_none()).collect();
    let examples: Vec<EmbeddingKey> = curves
        .iter()
        .zip(&avoiding)
        .filter(|(_, &a)| a)
        .take(EXAMPLES)
        .map(|(c, _)| c.key(census.convention))
        .collect();
    let count = avoiding.iter().filter(|&&a| a).count();
    ScanRow { n: census.n, reduced: curves.len(), matched: curves.len() - count, avoiding: count, examples }
}

/// Scans the censuses for `n = 1..=n_max`.
pub fn unavoidable_scan(set: &TangleSet, n_max: usize, convention: Convention) -> Result<ScanReport> {
    let censuses = (1..=n_max).map(|n| enumerate_words(n, convention)).collect::<Result<Vec<_>>>()?;
    Ok(scan_report(set, &censuses, convention))
}

/// Builds a report from censuses that are already at hand (for example from a cache).
pub fn scan_report(set: &TangleSet, censuses: &[CurveCensus], convention: Convention) -> ScanReport {
    let rows: Vec<ScanRow> = censuses.iter().map(|c| scan_census(set, c)).collect();
    let n_max = censuses.iter().map(|c| c.n).max().unwrap_or(0);
    let verdict = match rows.iter().find_map(|r| r.examples.first()) {
        Some(key) => Verdict::Counterexample { key: key.clone() },
        None => Verdict::NoCounterexample { n_max },
    };
    ScanReport { set: set.to_string(), n_max, convention, rows, verdict }
}

/// The zero charge, for callers building states by hand.
pub fn zero_state(faces: usize) -> ChargeState {
    ChargeState { charges: vec![Rational64::zero(); faces] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::realize_all;
    use crate::gauss::GaussWord;

    fn curve(s: &str) -> PlaneCurve {
        realize_all(&GaussWord::parse(s).unwrap(), true).remove(0)
    }

    #[test]
    fn trefoil_charges() {
        let c = curve("1 2 3 1 2 3");
        let s = initial_charges(&c).unwrap();
        let mut v: Vec<i64> = s.charges().iter().map(|q| q.to_integer()).collect();
        v.sort();
        assert_eq!(v, vec![1, 1, 2, 2, 2]);
        assert_eq!(s.total(), Rational64::from_integer(8));
        assert_eq!(initial_charges(&curve("1 1")), Err(Error::NotReduced));
    }

    #[test]
    fn d1_conserves() {
        let c = curve("1 2 3 1 2 3");
        let s = initial_charges(&c).unwrap();
        let t = apply_rule(&c, &s, &DischargeRule::d1()).unwrap();
        assert_eq!(t.total(), s.total());
        assert_ne!(t, s);
        assert!(apply_rule(&c, &zero_state(2), &DischargeRule::d1()).is_err());
    }

    #[test]
    fn rule_text_round_trip() {
        let text = DischargeRule::d1().to_string();
        assert_eq!(parse_rules(&text).unwrap(), vec![DischargeRule::d1()]);
        let unbalanced = "rule X\nsource trigon\ntake 1\nsend adjacent 1/6\n";
        assert_eq!(parse_rules(unbalanced).unwrap_err().position, 1);
        let bad = "# rules\nrule Y\nsource trigon\ntake one\n";
        assert_eq!(parse_rules(bad).unwrap_err().position, 4);
        assert_eq!(parse_rules("take 1").unwrap_err().position, 1);
    }

    #[test]
    fn scans() {
        let s0 = unavoidable_scan(&TangleSet::bigon_or_trigon(), 5, Convention::default()).unwrap();
        assert_eq!(s0.verdict, Verdict::NoCounterexample { n_max: 5 });
        assert!(s0.to_tsv().starts_with("# scan-tsv v1\n"));
    }
}
