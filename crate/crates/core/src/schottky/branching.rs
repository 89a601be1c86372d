use serde::Serialize;

use super::core_graph::CoreGraph;
use super::group::SchottkyGroup;
use super::word::{reduced_words, Word};
use crate::error::Result;
use crate::padic::{density_check, DensityWitness};
use crate::pgl2::classify_raw;
use crate::tree::Vertex;

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness {
    pub u: Vertex,
    pub v: Vertex,
    /// First vertex on `[u, v]` of degree at least `p^2 - p + 3`.
    pub witness: Option<Vertex>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeCondition {
    pub holds: bool,
    pub min_degree: usize,
    pub witness_degree: usize,
    /// Core vertices below `min_degree`.
    pub low_degree: Vec<(Vertex, usize)>,
    /// The set F' of core vertices with a neighbor outside F.
    pub boundary: Vec<Vertex>,
    pub pairs: Vec<PairWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityFinding {
    pub word: Word,
    pub check: DensityWitness,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityCondition {
    pub holds: bool,
    pub witness: Option<DensityFinding>,
    /// Words examined, in order, up to and including the witness.
    pub examined: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchingReport {
    pub highly_branched: bool,
    pub degrees: DegreeCondition,
    pub density: DensityCondition,
}

pub fn degree_condition(g: &SchottkyGroup, core: &CoreGraph) -> DegreeCondition {
    let p = g.p() as usize;
    let min_degree = p * p - p + 2;
    let witness_degree = min_degree + 1;
    let low_degree: Vec<(Vertex, usize)> = core
        .vertices
        .iter()
        .zip(&core.degrees)
        .filter(|(_, &d)| d < min_degree)
        .map(|(v, &d)| (v.clone(), d))
        .collect();
    let boundary: Vec<Vertex> =
        core.vertices.iter().zip(&core.boundary).filter(|(_, &b)| b).map(|(v, _)| v.clone()).collect();
    let mut pairs = Vec::new();
    for (i, u) in boundary.iter().enumerate() {
        for v in &boundary[i..] {
            let witness =
                u.path_to(v).into_iter().find(|w| core.degree_of(w).is_some_and(|d| d >= witness_degree));
            pairs.push(PairWitness { u: u.clone(), v: v.clone(), witness });
        }
    }
    let holds = !core.is_empty() && low_degree.is_empty() && pairs.iter().all(|pw| pw.witness.is_some());
    DegreeCondition { holds, min_degree, witness_degree, low_degree, boundary, pairs }
}

/// Density of the rotation part of `a_w`, over generators and then, when
/// `word_length > 1`, over longer reduced words.
pub fn density_condition(g: &SchottkyGroup, word_length: usize) -> Result<DensityCondition> {
    let mut examined = 0;
    for w in reduced_words(g.rank(), word_length.max(1)) {
        if w.0.iter().any(|l| l.inverse) && w.len() == 1 {
            // a_{g^-1} = a_g^-1 generates the same group
            continue;
        }
        examined += 1;
        let h = match classify_raw(&g.word_matrix(&w))?.hyperbolic() {
            Some(h) => h,
            None => continue,
        };
        let check = density_check(&h.multiplier)?;
        if check.dense {
            return Ok(DensityCondition { holds: true, witness: Some(DensityFinding { word: w, check }), examined });
        }
    }
    Ok(DensityCondition { holds: false, witness: None, examined })
}

/// Both conditions of high branching, read off the quotient graph. Degrees in
/// the limit tree are constant on orbits, so checking F-representatives suffices.
pub fn high_branched_check(g: &SchottkyGroup, core: &CoreGraph, density_words: usize) -> Result<BranchingReport> {
    let degrees = degree_condition(g, core);
    let density = density_condition(g, density_words)?;
    Ok(BranchingReport { highly_branched: degrees.holds && density.holds, degrees, density })
}
