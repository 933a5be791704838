use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;

use anyhow::{bail, Context};
use serde::Serialize;
use spherecurve::analytics::{bigons_in, parse_tangle_set, trigons_in};
use spherecurve::discharge::{
    audit_census, audit_curve, parse_rules, scan_report, AuditRow, DischargeAudit, ScanReport,
};
use spherecurve::embedding::spherical_sign_vectors;
use spherecurve::enumerate::GENERATOR_VERSION;
use spherecurve::reductivity::survey_census;
use spherecurve::{
    reductivity, Convention, CurveCensus, DischargeRule, EmbeddingKey, GaussWord, Label, PlaneCurve,
    ReductivityResult, SpliceStep, Survey,
};

use crate::input::{read_items, Item};
use crate::{cache, render, Cli, Command, Format, Global, InputError};

/// A check that should never fail did: exit code 3.
#[derive(Debug)]
pub struct InvariantFailure(pub String);

impl std::fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvariantFailure {}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { inputs } => analyze(g, inputs),
        Command::Reductivity { inputs } => reductivity_cmd(g, inputs),
        Command::Survey { n } => survey_cmd(g, *n),
        Command::Enumerate { n } => enumerate_cmd(g, *n),
        Command::Scan { set, n } => scan_cmd(g, set, *n),
        Command::DischargeAudit { inputs, rules } => discharge_cmd(g, inputs, rules.as_deref()),
        Command::Render { input, trigon, output } => render_cmd(input, *trigon, output.as_deref()),
    }
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    InputError(format!("{command} has no {format:?} output")).into()
}

fn censuses(g: &Global, range: std::ops::RangeInclusive<usize>) -> anyhow::Result<Vec<CurveCensus>> {
    range.map(|n| cache::census(g.cache_dir.as_deref(), n, g.convention())).collect()
}

/// Distinct embeddings of `word` under `convention`, each given by its least
/// sign vector on the word's own labels.
fn embeddings_of(word: &GaussWord, convention: Convention) -> Vec<PlaneCurve> {
    let mut seen: BTreeMap<EmbeddingKey, PlaneCurve> = BTreeMap::new();
    for signs in spherical_sign_vectors(word) {
        let curve = PlaneCurve::new(word.clone(), signs).expect("spherical sign vector");
        seen.entry(curve.key(convention)).or_insert(curve);
    }
    let mut curves: Vec<PlaneCurve> = seen.into_values().collect();
    curves.sort_by(|a, b| a.signs().cmp(b.signs()));
    curves
}

fn item_curves(item: &Item, convention: Convention) -> anyhow::Result<Vec<PlaneCurve>> {
    match item {
        Item::Curve(c) => Ok(vec![c.clone()]),
        Item::Word(w) => {
            let curves = embeddings_of(w, convention);
            if curves.is_empty() {
                return Err(spherecurve::Error::NotRealizable(w.to_string()).into());
            }
            Ok(curves)
        }
    }
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct FaceSummary {
    index: usize,
    size: usize,
    coherent: bool,
    crossings: Vec<Label>,
}

#[derive(Serialize)]
struct BigonSummary {
    face: usize,
    crossings: [Label; 2],
    coherent: bool,
}

#[derive(Serialize)]
struct TrigonSummary {
    face: usize,
    crossings: [Label; 3],
    interlace_count: usize,
    signature: String,
    letter: String,
    coherent: bool,
}

#[derive(Serialize)]
struct EmbeddingReport {
    curve: String,
    key: EmbeddingKey,
    /// `C_k` by face size `k`.
    face_census: BTreeMap<usize, usize>,
    faces: Vec<FaceSummary>,
    bigons: Vec<BigonSummary>,
    trigons: Vec<TrigonSummary>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    word: String,
    canonical: String,
    realizable: bool,
    reduced: bool,
    free_chords: Vec<Label>,
    embeddings: Vec<EmbeddingReport>,
    reductivity: ReductivityResult,
}

fn embedding_report(curve: &PlaneCurve, convention: Convention) -> EmbeddingReport {
    let map = curve.face_map();
    let mut face_census = BTreeMap::new();
    for f in &map.faces {
        *face_census.entry(f.size).or_insert(0) += 1;
    }
    EmbeddingReport {
        curve: curve.to_signed_string(),
        key: curve.key(convention),
        face_census,
        faces: map
            .faces
            .iter()
            .enumerate()
            .map(|(index, f)| FaceSummary {
                index,
                size: f.size,
                coherent: f.coherent,
                crossings: f.incident_crossings.clone(),
            })
            .collect(),
        bigons: bigons_in(&map)
            .into_iter()
            .map(|b| BigonSummary { face: b.face_index, crossings: b.crossings, coherent: b.coherent })
            .collect(),
        trigons: trigons_in(curve.word(), &map)
            .into_iter()
            .map(|t| TrigonSummary {
                face: t.face_index,
                crossings: t.crossings,
                interlace_count: t.interlace_count,
                signature: t.signature.to_string(),
                letter: t.letter.to_string(),
                coherent: t.coherent,
            })
            .collect(),
    }
}

fn analyze_item(item: &Item, convention: Convention) -> anyhow::Result<AnalyzeReport> {
    let curves = item_curves(item, convention)?;
    let word = item.word();
    Ok(AnalyzeReport {
        word: word.to_string(),
        canonical: word.canonical_key().to_string(),
        realizable: true,
        reduced: !word.has_free_chord(),
        free_chords: word.free_chords(),
        embeddings: curves.iter().map(|c| embedding_report(c, convention)).collect(),
        reductivity: reductivity(word)?,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn coherence(b: bool) -> &'static str {
    if b {
        "coherent"
    } else {
        "incoherent"
    }
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn witness_text(out: &mut String, result: &ReductivityResult) {
    for SpliceStep { at, before, after, .. } in &result.witness {
        let at = match at {
            spherecurve::SpliceSite::Crossing(p) => p.to_string(),
            spherecurve::SpliceSite::Cuts(i, j) => format!("{i},{j}"),
        };
        writeln!(out, "  I at {at}: {before} -> {after}").unwrap();
    }
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    writeln!(out, "word: {}", r.word).unwrap();
    writeln!(out, "canonical: {}", r.canonical).unwrap();
    writeln!(out, "realizable: {}", yes_no(r.realizable)).unwrap();
    writeln!(out, "reduced: {}", yes_no(r.reduced)).unwrap();
    if !r.free_chords.is_empty() {
        writeln!(out, "free chords: {}", join(&r.free_chords, " ")).unwrap();
    }
    writeln!(out, "embeddings: {}", r.embeddings.len()).unwrap();
    for e in &r.embeddings {
        writeln!(out, "- {}", e.curve).unwrap();
        let census: Vec<String> = e.face_census.iter().map(|(k, c)| format!("C{k}={c}")).collect();
        writeln!(out, "  faces: {}", census.join(", ")).unwrap();
        for b in &e.bigons {
            writeln!(out, "  bigon face {}: crossings {} {}, {}", b.face, b.crossings[0], b.crossings[1], coherence(b.coherent))
                .unwrap();
        }
        for t in &e.trigons {
            writeln!(
                out,
                "  trigon face {}: crossings {}, type {} ({}), {}",
                t.face,
                join(&t.crossings, " "),
                t.letter,
                t.signature,
                coherence(t.coherent)
            )
            .unwrap();
        }
    }
    writeln!(out, "reductivity: {}", r.reductivity.value).unwrap();
    witness_text(&mut out, &r.reductivity);
    out
}

fn analyze(g: &Global, inputs: &[String]) -> anyhow::Result<()> {
    let reports = read_items(inputs)?
        .iter()
        .map(|item| analyze_item(item, g.convention()))
        .collect::<anyhow::Result<Vec<_>>>()?;
    match g.format {
        Format::Text => emit(&join(&reports.iter().map(analyze_text).collect::<Vec<_>>(), "\n")),
        Format::Json => emit_json(&reports),
        other => Err(unsupported(other, "analyze")),
    }
}

// ---------------------------------------------------------------------------
// reductivity

#[derive(Serialize)]
struct ReductivityReport {
    word: String,
    canonical: String,
    value: usize,
    witness: Vec<SpliceStep>,
    witness_verified: bool,
}

fn reductivity_cmd(g: &Global, inputs: &[String]) -> anyhow::Result<()> {
    let mut reports = Vec::new();
    for item in read_items(inputs)? {
        let word = item.word();
        let result = reductivity(word)?;
        let verified = result.verify_witness(word);
        if !verified {
            return Err(InvariantFailure(format!("witness for {word} does not replay")).into());
        }
        reports.push(ReductivityReport {
            word: word.to_string(),
            canonical: word.canonical_key().to_string(),
            value: result.value,
            witness: result.witness,
            witness_verified: verified,
        });
    }
    match g.format {
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{}: reductivity {}", r.word, r.value).unwrap();
                witness_text(
                    &mut out,
                    &ReductivityResult { value: r.value, witness: r.witness.clone() },
                );
            }
            emit(&out)
        }
        Format::Tsv => {
            let mut out = String::from("word\tcanonical\treductivity\n");
            for r in &reports {
                writeln!(out, "{}\t{}\t{}", r.word, r.canonical, r.value).unwrap();
            }
            emit(&out)
        }
        Format::Json => emit_json(&reports),
        Format::Svg => Err(unsupported(g.format, "reductivity")),
    }
}

// ---------------------------------------------------------------------------
// survey

fn survey_cmd(g: &Global, n: Option<usize>) -> anyhow::Result<()> {
    let n_max = g.bound(n, 6)?;
    let rows = censuses(g, 1..=n_max)?
        .iter()
        .map(survey_census)
        .collect::<spherecurve::Result<Vec<_>>>()?;
    let survey = Survey { convention: g.convention(), rows };
    let bad: Vec<String> = survey
        .rows
        .iter()
        .flat_map(|r| &r.flagged)
        .filter(|f| !f.witness_verified)
        .map(|f| f.key.to_string())
        .collect();
    match g.format {
        Format::Text => {
            let mut out = String::from("n\tcurves\tr0\tr1\tr2\tr3\tr4\tmax\n");
            for row in &survey.rows {
                writeln!(out, "{}\t{}\t{}\t{}", row.n, row.curves, join(&row.histogram, "\t"), row.max).unwrap();
            }
            writeln!(out, "max reductivity up to n={n_max}: {}", survey.max()).unwrap();
            for f in survey.rows.iter().flat_map(|r| &r.flagged) {
                writeln!(out, "reductivity {}: {} (witness {})", f.result.value, f.key, if f.witness_verified { "verified" } else { "FAILED" })
                    .unwrap();
                witness_text(&mut out, &f.result);
            }
            emit(&out)?;
        }
        Format::Tsv => emit(&survey.to_tsv())?,
        Format::Json => emit_json(&survey)?,
        Format::Svg => return Err(unsupported(g.format, "survey")),
    }
    if !bad.is_empty() {
        return Err(InvariantFailure(format!("witnesses failed to replay: {}", bad.join(", "))).into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// enumerate

#[derive(Serialize)]
struct CensusReport<'a> {
    n: usize,
    convention: Convention,
    generator: &'a str,
    count: usize,
    curves: Vec<&'a EmbeddingKey>,
}

fn enumerate_cmd(g: &Global, n: Option<usize>) -> anyhow::Result<()> {
    let range = match n {
        Some(_) => {
            let n = g.bound(n, 1)?;
            n..=n
        }
        None => 1..=g.bound(None, 5)?,
    };
    let all = censuses(g, range)?;
    match g.format {
        Format::Text | Format::Tsv => emit(&all.iter().map(CurveCensus::to_file_string).collect::<String>()),
        Format::Json => emit_json(
            &all.iter()
                .map(|c| CensusReport {
                    n: c.n,
                    convention: c.convention,
                    generator: GENERATOR_VERSION,
                    count: c.len(),
                    curves: c.iter().collect(),
                })
                .collect::<Vec<_>>(),
        ),
        Format::Svg => Err(unsupported(g.format, "enumerate")),
    }
}

// ---------------------------------------------------------------------------
// scan

fn parse_error_message(text: &str, position: usize, message: &str) -> String {
    format!("{message} at column {}\n  {text}\n  {}^", position + 1, " ".repeat(position))
}

fn scan_cmd(g: &Global, set_text: &str, n: Option<usize>) -> anyhow::Result<()> {
    let set = parse_tangle_set(set_text)
        .map_err(|e| InputError(parse_error_message(set_text, e.position, &e.message)))?;
    let n_max = g.bound(n, 6)?;
    let report = scan_report(&set, &censuses(g, 1..=n_max)?, g.convention());
    match g.format {
        Format::Text => emit(&scan_text(&report)),
        Format::Tsv => emit(&report.to_tsv()),
        Format::Json => emit_json(&report),
        Format::Svg => Err(unsupported(g.format, "scan")),
    }
}

fn scan_text(r: &ScanReport) -> String {
    let mut out = format!("set: {}\nn\treduced\tmatched\tavoiding\n", r.set);
    for row in &r.rows {
        writeln!(out, "{}\t{}\t{}\t{}", row.n, row.reduced, row.matched, row.avoiding).unwrap();
    }
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    for row in &r.rows {
        for key in &row.examples {
            writeln!(out, "avoiding: {key}").unwrap();
        }
    }
    out
}

// ---------------------------------------------------------------------------
// discharge-audit

#[derive(Serialize)]
#[serde(untagged)]
enum AuditReport {
    Census { rules: Vec<String>, rows: Vec<AuditRow> },
    Curves { rules: Vec<String>, curves: Vec<DischargeAudit> },
}

fn discharge_cmd(g: &Global, inputs: &[String], rules_path: Option<&std::path::Path>) -> anyhow::Result<()> {
    let rules = match rules_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_rules(&text).map_err(|e| InputError(format!("{}:{}: {}", path.display(), e.position, e.message)))?
        }
        None => vec![DischargeRule::d1()],
    };
    let names: Vec<String> = rules.iter().map(|r| r.name.clone()).collect();
    let report = if inputs.is_empty() {
        let n_max = g.bound(None, 6)?;
        let rows = censuses(g, 1..=n_max)?
            .iter()
            .map(|c| audit_census(c, &rules))
            .collect::<spherecurve::Result<Vec<_>>>()?;
        AuditReport::Census { rules: names, rows }
    } else {
        let mut curves = Vec::new();
        for item in read_items(inputs)? {
            for c in item_curves(&item, g.convention())? {
                curves.push(audit_curve(&c, &rules, g.convention())?);
            }
        }
        AuditReport::Curves { rules: names, curves }
    };
    let failure = match &report {
        AuditReport::Census { rows, .. } => rows.iter().any(|r| r.bad_initial + r.not_conserved > 0),
        AuditReport::Curves { curves, .. } => curves.iter().any(|a| !a.conserved),
    };
    match g.format {
        Format::Text | Format::Tsv => emit(&audit_text(&report, g.format == Format::Text))?,
        Format::Json => emit_json(&report)?,
        Format::Svg => return Err(unsupported(g.format, "discharge-audit")),
    }
    if failure {
        bail!(InvariantFailure("discharging changed the total charge".into()));
    }
    Ok(())
}

fn audit_text(report: &AuditReport, prose: bool) -> String {
    let mut out = String::new();
    match report {
        AuditReport::Census { rules, rows } => {
            if prose {
                writeln!(out, "rules: {}", rules.join(", ")).unwrap();
            }
            out.push_str("n\treduced\tbad_initial\tnot_conserved\tno_positive\n");
            for r in rows {
                writeln!(out, "{}\t{}\t{}\t{}\t{}", r.n, r.reduced, r.bad_initial, r.not_conserved, r.no_positive)
                    .unwrap();
            }
            if prose {
                let ok = rows.iter().all(|r| r.bad_initial + r.not_conserved == 0);
                writeln!(out, "conservation: {}", if ok { "exact" } else { "VIOLATED" }).unwrap();
            }
        }
        AuditReport::Curves { rules, curves } => {
            if prose {
                writeln!(out, "rules: {}", rules.join(", ")).unwrap();
            }
            out.push_str("curve\tinitial\tdischarged\ttotal\tconserved\n");
            for a in curves {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    a.key,
                    a.initial.join(","),
                    a.discharged.join(","),
                    a.final_total,
                    yes_no(a.conserved)
                )
                .unwrap();
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// render

fn render_cmd(input: &str, trigon: Option<usize>, output: Option<&std::path::Path>) -> anyhow::Result<()> {
    let items = read_items(&[input.to_string()])?;
    let [item] = items.as_slice() else {
        return Err(InputError("render takes exactly one word".into()).into());
    };
    let word = item.word();
    let highlight = match trigon {
        None => None,
        Some(k) => {
            let curves = item_curves(item, Convention::default())?;
            let trigons = trigons_in(word, &curves[0].face_map());
            let found = trigons.into_iter().find(|t| t.face_index == k);
            Some(found.ok_or_else(|| InputError(format!("face {k} is not a trigon")))?)
        }
    };
    let svg = render::chord_diagram(word, highlight.as_ref());
    match output {
        Some(path) => std::fs::write(path, svg).with_context(|| format!("writing {}", path.display())),
        None => emit(&svg),
    }
}
