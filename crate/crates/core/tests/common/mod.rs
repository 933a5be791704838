#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use spherecurve::{Chirality, Convention, CurveCensus, GaussWord, Label, PlaneCurve};

pub fn w(s: &str) -> GaussWord {
    GaussWord::parse(s).unwrap()
}

/// Every normalized double-occurrence word with `n` letters pairs, by brute force.
pub fn all_words(n: usize) -> Vec<GaussWord> {
    fn go(slots: &mut Vec<u32>, next: u32, out: &mut BTreeSet<Vec<u32>>) {
        match slots.iter().position(|&c| c == 0) {
            None => {
                out.insert(slots.clone());
            }
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
    let mut out = BTreeSet::new();
    go(&mut vec![0; 2 * n], 1, &mut out);
    out.into_iter().map(|l| GaussWord::from_letters(l).unwrap()).collect()
}

/// Planarity of a Gauss word from its interlacement graph alone
/// (Rosenstiehl's characterization):
/// every vertex has even degree, every non-interlaced pair has an even number
/// of common neighbors, and the interlaced pairs with an even number of
/// common neighbors form a cut of the graph.
pub fn rosenstiehl(word: &GaussWord) -> bool {
    let n = word.crossing_count();
    let occ: Vec<(usize, usize)> = {
        let mut first = vec![usize::MAX; n];
        let mut occ = vec![(0, 0); n];
        for (p, &c) in word.letters().iter().enumerate() {
            let c = c as usize - 1;
            if first[c] == usize::MAX {
                first[c] = p;
            } else {
                occ[c] = (first[c], p);
            }
        }
        occ
    };
    let cross = |a: usize, b: usize| {
        let (a0, a1) = occ[a];
        let (b0, b1) = occ[b];
        (a0 < b0 && b0 < a1) != (a0 < b1 && b1 < a1)
    };
    let adj: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && cross(a, b)).collect()).collect();
    for a in 0..n {
        if adj[a].iter().filter(|&&x| x).count() % 2 != 0 {
            return false;
        }
    }
    let common = |a: usize, b: usize| (0..n).filter(|&c| adj[a][c] && adj[b][c]).count();
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] && common(a, b) % 2 != 0 {
                return false;
            }
        }
    }
    // Two-color so that an edge changes color iff it is in the cut.
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if !adj[a][b] {
                    continue;
                }
                let cut = common(a, b) % 2 == 0;
                let want = color[a].unwrap() ^ cut;
                match color[b] {
                    None => {
                        color[b] = Some(want);
                        stack.push(b);
                    }
                    Some(c) if c != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Faces of a signed word by walking: arrive at a crossing, turn to the next
/// strand counterclockwise and leave along it. Returns `(size, coherent)` per face.
///
/// Strand ends at a crossing are named `(position, leaving)`: the curve
/// arrives at `position` when `leaving` is false and leaves it when true.
pub fn walk_faces(word: &GaussWord, signs: &[Chirality]) -> Vec<(usize, bool)> {
    let letters = word.letters();
    let m = letters.len();
    let mut pos: HashMap<Label, Vec<usize>> = HashMap::new();
    for (p, &c) in letters.iter().enumerate() {
        pos.entry(c).or_default().push(p);
    }
    // Counterclockwise order of the four strand ends at each crossing.
    let mut ccw_next: HashMap<(usize, bool), (usize, bool)> = HashMap::new();
    for (&c, ps) in &pos {
        let (i, j) = (ps[0], ps[1]);
        let ring = match signs[c as usize - 1] {
            Chirality::Positive => [(i, false), (j, false), (i, true), (j, true)],
            Chirality::Negative => [(i, false), (j, true), (i, true), (j, false)],
        };
        for k in 0..4 {
            ccw_next.insert(ring[k], ring[(k + 1) % 4]);
        }
    }
    // A dart travels along an edge: forward from `p` (leaving p) or backward
    // into `p` from p+1 (leaving p+1 against the curve).
    // Represent a dart by the strand end it leaves from.
    let mut seen: BTreeSet<(usize, bool)> = BTreeSet::new();
    let mut faces = Vec::new();
    for start_p in 0..m {
        for start in [(start_p, true), (start_p, false)] {
            if seen.contains(&start) {
                continue;
            }
            let mut size = 0;
            let mut forward = 0;
            let mut d = start;
            loop {
                seen.insert(d);
                size += 1;
                // Where the dart arrives.
                let arrive = if d.1 { ((d.0 + 1) % m, false) } else { ((d.0 + m - 1) % m, true) };
                if d.1 {
                    forward += 1;
                }
                d = ccw_next[&arrive];
                if d == start {
                    break;
                }
            }
            faces.push((size, forward == 0 || forward == size));
        }
    }
    faces
}

pub fn sorted_sizes(curve: &PlaneCurve) -> Vec<usize> {
    let mut v: Vec<usize> = curve.faces().iter().map(|f| f.size).collect();
    v.sort();
    v
}

pub fn census(n: usize) -> CurveCensus {
    spherecurve::enumerate_words(n, Convention::default()).unwrap()
}

/// All curves with at most `n_max` crossings under the default convention.
pub fn curves_up_to(n_max: usize) -> Vec<PlaneCurve> {
    (1..=n_max).flat_map(|n| census(n).plane_curves()).collect()
}
