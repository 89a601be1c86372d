use serde::Serialize;

use super::census::{circle_limit_census, Census, ExitEdge, Verdict};
use super::circle::Circle;
use crate::error::Result;
use crate::pgl2::classify_raw;
use crate::schottky::{SchottkyGroup, Word};
use crate::tree::{End, Vertex};

fn by_length(mut ws: Vec<Word>) -> Vec<Word> {
    ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    ws
}

/// Nontrivial reduced words up to `max_len` with `w . C = C`, shortest first.
/// The list is closed under inversion.
pub fn stabilizer_search(c: &Circle, g: &SchottkyGroup, max_len: usize) -> Result<Vec<Word>> {
    let mut found = Vec::new();
    g.visit_words(max_len, |w, m| {
        if c.stabilized_by(m) {
            found.push(w.clone());
        }
        Ok(())
    })?;
    Ok(by_length(found))
}

/// Words `w` up to `max_len` with `v` in the hull of `w . C`, one per distinct
/// circle `w . C`, shortest first. The empty word is listed when `v` is in the
/// hull of `C`.
pub fn gamma_c_v(c: &Circle, v: &Vertex, g: &SchottkyGroup, max_len: usize) -> Result<Vec<Word>> {
    let mut hits = Vec::new();
    if c.hull_contains(v)? {
        hits.push(Word::identity());
    }
    g.visit_words(max_len, |w, m| {
        if c.translate(m)?.hull_contains(v)? {
            hits.push(w.clone());
        }
        Ok(())
    })?;
    let mut classes: Vec<(Word, Circle)> = Vec::new();
    for w in by_length(hits) {
        let cw = c.translate(&g.word_matrix(&w))?;
        if !classes.iter().any(|(_, d)| *d == cw) {
            classes.push((w, cw));
        }
    }
    Ok(classes.into_iter().map(|(w, _)| w).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitCase {
    /// The circle misses the limit set.
    Discrete,
    /// The circle lies in the limit set.
    Saturated,
    /// Persistent rays are accounted for by the stabilizer.
    ClosedWithStabilizer,
    /// Neither of the above at this budget.
    DenseConjecture,
    /// Depths `D` and `D + 1` disagree.
    Inconclusive,
}

impl OrbitCase {
    pub fn tag(self) -> Option<u8> {
        match self {
            OrbitCase::Discrete => Some(1),
            OrbitCase::Saturated => Some(2),
            OrbitCase::ClosedWithStabilizer => Some(3),
            OrbitCase::DenseConjecture => Some(4),
            OrbitCase::Inconclusive => None,
        }
    }
}

pub const EVIDENCE_NOTE: &str = "finite-depth evidence, not proof";

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub circle: Circle,
    pub depth: usize,
    pub verdict: Verdict,
    pub ray_count: u64,
    pub ray_count_next: u64,
    pub stabilizer_words: Vec<Word>,
    /// Persistent rays pointing at a fixed point of a stabilizer word.
    pub rays_covered: u64,
    pub case: OrbitCase,
    pub case_tag: Option<u8>,
    pub evidence: &'static str,
    pub certificates: Vec<ExitEdge>,
}

/// Number of persistent rays of `census` that head to a fixed point of some word.
fn covered_rays(census: &Census, g: &SchottkyGroup, words: &[Word]) -> Result<u64> {
    if census.rays.len() as u64 != census.ray_count {
        return Ok(0);
    }
    let mut ends = Vec::new();
    for w in words {
        if let Some(h) = classify_raw(&g.word_matrix(w))?.hyperbolic() {
            ends.push(End::from_point(&h.fixed_plus)?);
            ends.push(End::from_point(&h.fixed_minus)?);
        }
    }
    let mut heads = Vec::new();
    for e in &ends {
        if let Some(v) = e.ray_from(&census.root, census.depth)?.pop() {
            heads.push(v);
        }
    }
    Ok(census.rays.iter().filter(|r| heads.contains(&r.leaf)).count() as u64)
}

fn case_of(census: &Census, covered: u64, stabilized: bool) -> OrbitCase {
    match census.verdict {
        Verdict::Empty => OrbitCase::Discrete,
        Verdict::SaturatedFull if stabilized => OrbitCase::Saturated,
        Verdict::SaturatedFull => OrbitCase::Inconclusive,
        Verdict::ProperNonempty(n) if stabilized && covered == n => OrbitCase::ClosedWithStabilizer,
        Verdict::ProperNonempty(_) => OrbitCase::DenseConjecture,
    }
}

/// Case evidence from censuses at `depth` and `depth + 1` and the stabilizer
/// up to word length `max_len`.
pub fn classify_orbit(c: &Circle, g: &SchottkyGroup, depth: usize, max_len: usize) -> Result<OrbitReport> {
    let census = circle_limit_census(c, g, depth)?;
    let next = circle_limit_census(c, g, depth + 1)?;
    let stab = stabilizer_search(c, g, max_len)?;
    let stabilized = !stab.is_empty();
    let covered = covered_rays(&census, g, &stab)?;
    let covered_next = covered_rays(&next, g, &stab)?;
    let here = case_of(&census, covered, stabilized);
    let there = case_of(&next, covered_next, stabilized);
    let case = if here == there { here } else { OrbitCase::Inconclusive };
    Ok(OrbitReport {
        circle: *c,
        depth,
        verdict: census.verdict,
        ray_count: census.ray_count,
        ray_count_next: next.ray_count,
        stabilizer_words: stab,
        rays_covered: covered,
        case,
        case_tag: case.tag(),
        evidence: EVIDENCE_NOTE,
        certificates: census.certificates,
    })
}
