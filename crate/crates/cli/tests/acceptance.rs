//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, HashMap};
use std::panic;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{rngs::StdRng, seq::SliceRandom, Rng, SeedableRng};
use spherecurve::analytics::TRIGON_CALIBRATION;
use spherecurve::discharge::audit_curve;
use spherecurve::{
    enumerate_maps, enumerate_words, find_bigons, find_trigons, half_twisted_splice, inverse_splice, is_realizable,
    reductivity, Convention, CurveCensus, DischargeRule, Error, GaussWord, PlaneCurve, Survey,
    TrigonSignature,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn census(n: usize) -> CurveCensus {
    enumerate_words(n, Convention::default()).unwrap()
}

fn curves_up_to(n_max: usize) -> Vec<PlaneCurve> {
    (1..=n_max).flat_map(|n| census(n).plane_curves()).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every normalized double-occurrence word on `n` letters.
fn all_words(n: usize) -> Vec<GaussWord> {
    fn go(slots: &mut Vec<u32>, next: u32, out: &mut Vec<Vec<u32>>) {
        match slots.iter().position(|&c| c == 0) {
            None => out.push(slots.clone()),
            Some(first) => {
                slots[first] = next;
                for k in first + 1..slots.len() {
                    if slots[k] == 0 {
                        slots[k] = next;
                        go(slots, next + 1, out);
                        slots[k] = 0;
                    }
                }
                slots[first] = 0;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![0; 2 * n], 1, &mut out);
    out.into_iter().map(|l| GaussWord::from_letters(l).unwrap()).collect()
}

/// Face count of a signed word by walking the four-valent graph: arrive at a
/// crossing, turn to the next strand end counterclockwise, leave along it.
fn walked_face_count(letters: &[u16], signs: &[bool]) -> usize {
    let m = letters.len();
    let mut pos: HashMap<u16, (usize, usize)> = HashMap::new();
    for (p, &c) in letters.iter().enumerate() {
        pos.entry(c).and_modify(|e| e.1 = p).or_insert((p, p));
    }
    // Strand end `(p, leaving)`; index 2p + leaving.
    let mut next = vec![0usize; 2 * m];
    for (&c, &(i, j)) in &pos {
        let ring = if signs[c as usize - 1] {
            [2 * i, 2 * j, 2 * i + 1, 2 * j + 1]
        } else {
            [2 * i, 2 * j + 1, 2 * i + 1, 2 * j]
        };
        for k in 0..4 {
            next[ring[k]] = ring[(k + 1) % 4];
        }
    }
    let mut seen = vec![false; 2 * m];
    let mut faces = 0;
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let (p, leaving) = (d / 2, d % 2 == 1);
            let arrive = if leaving { 2 * ((p + 1) % m) } else { 2 * ((p + m - 1) % m) + 1 };
            d = next[arrive];
        }
    }
    faces
}

/// Realizable iff some chirality assignment closes up on the sphere.
fn sign_oracle(word: &GaussWord) -> bool {
    let n = word.crossing_count();
    (0u32..1 << n).any(|mask| {
        let signs: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
        walked_face_count(word.letters(), &signs) == n + 2
    })
}

fn reductivities(n_max: usize) -> BTreeMap<GaussWord, usize> {
    (1..=n_max)
        .flat_map(|n| census(n).words())
        .map(|w| {
            let r = reductivity(&w).unwrap().value;
            (w, r)
        })
        .collect()
}

fn face_counts(c: &PlaneCurve) -> Vec<i64> {
    c.face_map().size_census().into_iter().map(|x| x as i64).collect()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let (mut curves, mut words) = (0, 0);
    let mut violations = 0;
    for n in 1..=6 {
        let census = census(n);
        curves += census.len();
        for word in census.words() {
            words += 1;
            match reductivity(&word) {
                Ok(r) => {
                    check(r.value <= 4, || format!("{word}: r={}", r.value))?;
                    check(r.verify_witness(&word), || format!("{word}: witness fails replay"))?;
                }
                Err(Error::BoundViolation { .. }) => violations += 1,
                Err(e) => return Err(format!("{word}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    check(violations == 0, || format!("{violations} bound violations"))?;
    check(elapsed <= Duration::from_secs(600), || format!("took {elapsed:.1?}"))?;
    Ok(format!("{curves} curves ({words} words), r in 0..=4, 0 bound violations, {elapsed:.2?}"))
}

fn ac2() -> Outcome {
    let trefoil = GaussWord::parse("1 2 3 1 2 3").unwrap();
    let r = reductivity(&trefoil).map_err(|e| e.to_string())?;
    check(r.value == 1, || format!("r = {}", r.value))?;
    check(r.verify_witness(&trefoil), || "witness fails replay".into())?;
    Ok("r(1 2 3 1 2 3) = 1".into())
}

fn ac3() -> Outcome {
    let calibration: BTreeMap<_, _> = TRIGON_CALIBRATION.iter().map(|(p, l)| (*p, *l)).collect();
    let r = reductivities(6);
    let (mut bigons, mut trigons) = (0, 0);
    for c in curves_up_to(6) {
        let value = r[&c.word().canonical()];
        for b in find_bigons(&c) {
            bigons += 1;
            let bound = if b.coherent { 2 } else { 1 };
            check(value <= bound, || format!("{c}: bigon coherent={} r={value}", b.coherent))?;
        }
        for t in find_trigons(&c) {
            trigons += 1;
            let TrigonSignature::Pattern(pattern) = t.signature else {
                // Repeated corners only occur on reducible curves.
                check(value == 0, || format!("{c}: degenerate trigon but r={value}"))?;
                continue;
            };
            let letter =
                calibration.get(&pattern).copied().ok_or_else(|| format!("{c}: uncalibrated trigon {pattern:?}"))?;
            let bound = letter.reductivity_bound().ok_or_else(|| format!("{c}: no bound for {letter}"))?;
            check(value <= bound, || format!("{c}: trigon {letter} r={value}"))?;
        }
    }
    Ok(format!("{bigons} bigons and {trigons} trigons within their bounds"))
}

fn ac4() -> Outcome {
    let mut reduced = 0;
    for c in curves_up_to(6).into_iter().filter(|c| c.is_reduced()) {
        reduced += 1;
        let k = face_counts(&c);
        let count = |s: usize| k.get(s).copied().unwrap_or(0);
        check(count(2) + count(3) >= 1, || format!("{c}: no bigon or trigon"))?;
    }
    Ok(format!("{reduced} reduced curves, each with C2 + C3 >= 1"))
}

fn ac5() -> Outcome {
    let mut reduced = 0;
    for c in curves_up_to(6).into_iter().filter(|c| c.is_reduced()) {
        reduced += 1;
        let k = face_counts(&c);
        let count = |s: usize| k.get(s).copied().unwrap_or(0);
        let rhs: i64 = 8 + (5..k.len()).map(|s| (s as i64 - 4) * count(s)).sum::<i64>();
        check(2 * count(2) + count(3) == rhs, || format!("{c}: {k:?}"))?;
    }
    Ok(format!("{reduced} reduced curves satisfy 2C2 + C3 = 8 + sum (k-4)Ck"))
}

fn ac6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xacce);
    let cases = 5000;
    for _ in 0..cases {
        let n = rng.random_range(1..=10u32);
        let mut letters: Vec<u32> = (1..=n).flat_map(|c| [c, c]).collect();
        letters.shuffle(&mut rng);
        let word = GaussWord::from_letters(letters).unwrap();
        let m = word.len();
        let i = rng.random_range(0..m);
        let j = rng.random_range(i + 1..=m);
        let (spliced, p) = half_twisted_splice(&word, i, j).map_err(|e| e.to_string())?;
        let back = inverse_splice(&spliced, p).map_err(|e| e.to_string())?;
        check(back.canonical_key() == word.canonical_key(), || format!("{word} cut {i},{j}: got {back}"))?;
    }
    Ok(format!("{cases} random cases, 0 failures"))
}

fn ac7() -> Outcome {
    for n in 1..=5 {
        for convention in [Convention::default(), Convention::with_mirror(false)] {
            let words = enumerate_words(n, convention).map_err(|e| e.to_string())?;
            let maps = enumerate_maps(n, convention).map_err(|e| e.to_string())?;
            check(words.curves == maps.curves, || format!("n={n} {convention:?}: sets differ"))?;
        }
    }
    let mut splices = 0;
    for n in 2..=6 {
        let below = census(n - 1).words();
        for word in census(n).words() {
            for p in word.labels() {
                splices += 1;
                let out = inverse_splice(&word, p).map_err(|e| e.to_string())?.canonical();
                check(below.contains(&out), || format!("{word} at {p} gives {out}"))?;
            }
        }
    }
    Ok(format!("words = maps for n=1..5, {splices} splices stay in the census"))
}

fn ac8() -> Outcome {
    let bad = GaussWord::parse("1 2 3 4 1 2 3 4").unwrap();
    check(!is_realizable(&bad), || "1 2 3 4 1 2 3 4 accepted".into())?;
    check(matches!(reductivity(&bad), Err(Error::NotRealizable(_))), || "reductivity accepted it".into())?;
    let mut words = 0;
    let mut parity_fail = 0;
    for n in 1..=6 {
        for word in all_words(n) {
            words += 1;
            let oracle = sign_oracle(&word);
            if !word.satisfies_parity() {
                parity_fail += 1;
                check(!oracle, || format!("{word}: parity fails but a sign vector works"))?;
            }
            check(is_realizable(&word) == oracle, || format!("{word}: library disagrees with oracle"))?;
        }
    }
    Ok(format!("{words} words, {parity_fail} parity failures, all rejected by the sign oracle"))
}

fn ac9() -> Outcome {
    let d1 = [DischargeRule::d1()];
    let eight = Rational64::from_integer(8);
    let sum = |v: &[String]| -> Result<Rational64, String> {
        v.iter().map(|s| s.parse::<Rational64>().map_err(|e| e.to_string())).sum()
    };
    let mut reduced = 0;
    for c in curves_up_to(6).into_iter().filter(|c| c.is_reduced()) {
        reduced += 1;
        let audit = audit_curve(&c, &d1, Convention::default()).map_err(|e| e.to_string())?;
        let independent: i64 = c.faces().iter().map(|f| 4 - f.size as i64).sum();
        check(independent == 8, || format!("{c}: sum of 4 - |f| is {independent}"))?;
        check(sum(&audit.initial)? == eight, || format!("{c}: initial total {}", audit.initial_total))?;
        check(sum(&audit.discharged)? == eight, || format!("{c}: final total {}", audit.final_total))?;
        check(audit.conserved, || format!("{c}: not conserved"))?;
    }
    Ok(format!("{reduced} reduced curves, total 8 before and after D1"))
}

fn ac10() -> Outcome {
    let survey = |format: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_spherecurve"))
            .args(["survey", "7", "--format", format])
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        Ok(out.stdout)
    };
    let text = survey("text")?;
    check(text == survey("text")?, || "text output differs between runs".into())?;
    let json = survey("json")?;
    check(json == survey("json")?, || "json output differs between runs".into())?;
    let report: Survey = serde_json::from_slice(&json).map_err(|e| e.to_string())?;
    check(report.rows.len() == 7, || format!("{} rows", report.rows.len()))?;
    let mut flagged = 0;
    for row in &report.rows {
        check(row.histogram.iter().sum::<usize>() == row.curves, || format!("n={}: histogram sum", row.n))?;
        for f in &row.flagged {
            flagged += 1;
            let word = f.key.word();
            check(f.result.value == 4 && f.result.verify_witness(&word), || format!("{}: replay fails", f.key))?;
        }
    }
    let table: Vec<String> = report.rows.iter().map(|r| format!("{}:{}", r.n, r.max)).collect();
    Ok(format!("deterministic, max r per n [{}], {flagged} r=4 curves replayed", table.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 reductivity at most four, n <= 6", ac1),
        ("AC2 trefoil reductivity", ac2),
        ("AC3 bigon and trigon bounds, n <= 6", ac3),
        ("AC4 reduced curves have a bigon or trigon, n <= 6", ac4),
        ("AC5 face census identity, n <= 6", ac5),
        ("AC6 splice inversion", ac6),
        ("AC7 word and map enumerations agree", ac7),
        ("AC8 realizability", ac8),
        ("AC9 discharge conservation, n <= 6", ac9),
        ("AC10 survey 7", ac10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
