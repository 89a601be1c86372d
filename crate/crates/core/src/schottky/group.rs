use std::collections::HashSet;
use std::sync::OnceLock;

use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::padic::ExtContext;
use crate::pgl2::{classify, HyperbolicData, Mat2, ProjMatrix};
use crate::tree::{median, End, HalfTree, Vertex};

/// Default half-width of the axis offset window.
pub const DEFAULT_WINDOW: i32 = 4;

#[derive(Debug, Clone)]
pub struct Generator {
    pub matrix: ProjMatrix,
    pub inverse: ProjMatrix,
    pub hyperbolic: HyperbolicData,
    /// Projection of the origin onto the axis.
    pub projection: Vertex,
    pub offset: i32,
    /// Half-tree `(w_n -> w_{n+1})` on the attracting side.
    pub plus: HalfTree,
    /// Half-tree `(w_1 -> w_0)` on the repelling side.
    pub minus: HalfTree,
}

/// A verified Schottky group with its labeled half-trees.
#[derive(Debug)]
pub struct SchottkyGroup {
    ctx: &'static ExtContext,
    generators: Vec<Generator>,
    window: i32,
    letter_mats: Vec<Mat2>,
    core: OnceLock<(Vec<Vertex>, HashSet<Vertex>)>,
}

pub struct Reduction {
    /// Representative in the fundamental domain.
    pub f: Vertex,
    /// `v = word . f`.
    pub word: Word,
}

/// Offsets in the search order `0, -1, 1, -2, 2, ...`.
pub fn offset_order(window: i32) -> Vec<i32> {
    let mut out = vec![0];
    for k in 1..=window {
        out.push(-k);
        out.push(k);
    }
    out
}

struct AxisData {
    hyperbolic: HyperbolicData,
    projection: Vertex,
    /// Vertices at signed positions `-(window+1) ..= window + n` from the projection.
    positions: Vec<Vertex>,
    first: i32,
}

impl AxisData {
    fn at(&self, s: i32) -> &Vertex {
        &self.positions[(s - self.first) as usize]
    }

    fn halftrees(&self, offset: i32) -> (HalfTree, HalfTree) {
        let n = self.hyperbolic.length as i32;
        // w_j sits at signed position j - 1 + offset
        let w = |j: i32| self.at(j - 1 + offset).clone();
        (HalfTree::new(w(n), w(n + 1)), HalfTree::new(w(1), w(0)))
    }
}

fn axis_data(g: &ProjMatrix, idx: usize, window: i32) -> Result<AxisData> {
    let h = classify(g)?.hyperbolic().ok_or(Error::NonHyperbolicGenerator(idx + 1))?;
    let plus = End::from_point(&h.fixed_plus)?;
    let minus = End::from_point(&h.fixed_minus)?;
    let p = g.context().p();
    let projection = median(&Vertex::origin(p), &minus, &plus)?;
    let n = h.length as i32;
    let first = -(window + 1);
    let last = window + n;
    let back = minus.ray_from(&projection, (-first) as usize)?;
    let fwd = plus.ray_from(&projection, last as usize)?;
    let mut positions: Vec<Vertex> = back.into_iter().skip(1).rev().collect();
    positions.extend(fwd);
    Ok(AxisData { hyperbolic: h, projection, positions, first })
}

fn describe(tag: &str, idx: usize, h: &HalfTree) -> String {
    format!("O{tag}_{} = ({} -> {})", idx + 1, h.root, h.toward)
}

fn first_violation(trees: &[(HalfTree, HalfTree)]) -> Option<(String, String)> {
    let labeled: Vec<(String, &HalfTree)> = trees
        .iter()
        .enumerate()
        .flat_map(|(i, (p, m))| [(describe("+", i, p), p), (describe("-", i, m), m)])
        .collect();
    for a in 0..labeled.len() {
        for b in a + 1..labeled.len() {
            if !labeled[a].1.disjoint(labeled[b].1) {
                return Some((labeled[a].0.clone(), labeled[b].0.clone()));
            }
        }
    }
    None
}

fn pair_ok(a: &(HalfTree, HalfTree), b: &(HalfTree, HalfTree)) -> bool {
    a.0.disjoint(&b.0) && a.0.disjoint(&b.1) && a.1.disjoint(&b.0) && a.1.disjoint(&b.1)
}

impl SchottkyGroup {
    /// Verify the Schottky property by searching offsets in `[-window, window]`
    /// in the order of [`offset_order`], lexicographically over generators.
    /// With `offsets` given, only that labeling is checked.
    pub fn verify(matrices: &[ProjMatrix], window: i32, offsets: Option<&[i32]>) -> Result<SchottkyGroup> {
        if matrices.is_empty() {
            return Err(Error::Precondition("no generators".into()));
        }
        let ctx = matrices[0].context();
        let window = match offsets {
            Some(o) => window.max(o.iter().map(|x| x.abs()).max().unwrap_or(0)),
            None => window,
        };
        let axes: Vec<AxisData> =
            matrices.iter().enumerate().map(|(i, g)| axis_data(g, i, window)).collect::<Result<_>>()?;
        let order = offset_order(window);
        let chosen: Vec<i32> = match offsets {
            Some(o) => {
                if o.len() != matrices.len() {
                    return Err(Error::Precondition("one offset per generator is required".into()));
                }
                let trees: Vec<_> = axes.iter().zip(o).map(|(a, &k)| a.halftrees(k)).collect();
                if let Some((first, second)) = first_violation(&trees) {
                    return Err(Error::NoValidLabeling { first, second });
                }
                o.to_vec()
            }
            None => {
                let cands: Vec<Vec<(HalfTree, HalfTree)>> =
                    axes.iter().map(|a| order.iter().map(|&k| a.halftrees(k)).collect()).collect();
                match search_offsets(&cands) {
                    Some(idx) => idx.iter().map(|&j| order[j]).collect(),
                    None => {
                        let trees: Vec<_> = axes.iter().map(|a| a.halftrees(0)).collect();
                        let (first, second) = first_violation(&trees).unwrap_or_default();
                        return Err(Error::NoValidLabeling { first, second });
                    }
                }
            }
        };
        let mut generators = Vec::new();
        let mut letter_mats = Vec::new();
        for ((g, a), &o) in matrices.iter().zip(&axes).zip(&chosen) {
            let (plus, minus) = a.halftrees(o);
            let inverse = g.inverse()?;
            letter_mats.push(g.raw().normalized());
            letter_mats.push(inverse.raw().normalized());
            generators.push(Generator {
                matrix: *g,
                inverse,
                hyperbolic: a.hyperbolic,
                projection: a.projection.clone(),
                offset: o,
                plus,
                minus,
            });
        }
        Ok(SchottkyGroup { ctx, generators, window, letter_mats, core: OnceLock::new() })
    }

    pub fn context(&self) -> &'static ExtContext {
        self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn window(&self) -> i32 {
        self.window
    }

    pub fn offsets(&self) -> Vec<i32> {
        self.generators.iter().map(|g| g.offset).collect()
    }

    pub fn letter_matrix(&self, l: Letter) -> &Mat2 {
        &self.letter_mats[l.code()]
    }

    pub fn word_matrix(&self, w: &Word) -> Mat2 {
        let mut m = Mat2::identity(self.ctx);
        for &l in &w.0 {
            m = m.mul(self.letter_matrix(l)).normalized();
        }
        m
    }

    pub fn word_element(&self, w: &Word) -> Result<ProjMatrix> {
        ProjMatrix::canonicalize(self.word_matrix(w))
    }

    /// Depth-first visit of the nontrivial reduced words up to `max_len` with their matrices.
    pub fn visit_words<F>(&self, max_len: usize, mut f: F) -> Result<()>
    where
        F: FnMut(&Word, &Mat2) -> Result<()>,
    {
        fn go<F: FnMut(&Word, &Mat2) -> Result<()>>(
            g: &SchottkyGroup,
            w: &mut Word,
            m: &Mat2,
            left: usize,
            f: &mut F,
        ) -> Result<()> {
            if left == 0 {
                return Ok(());
            }
            for c in 0..2 * g.rank() {
                let l = Letter::from_code(c);
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                let next = m.mul(g.letter_matrix(l)).normalized();
                w.0.push(l);
                f(w, &next)?;
                go(g, w, &next, left - 1, f)?;
                w.0.pop();
            }
            Ok(())
        }
        go(self, &mut Word::identity(), &Mat2::identity(self.ctx), max_len, &mut f)
    }

    /// All `2n` half-trees as `(letter, half-tree)`: `O+_i` for `g_i`, `O-_i` for `g_i^-1`.
    pub fn halftrees(&self) -> Vec<(Letter, &HalfTree)> {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(i, g)| [(Letter::new(i, false), &g.plus), (Letter::new(i, true), &g.minus)])
            .collect()
    }

    /// The letter whose half-tree contains `v`: `g_i` for `O+_i`, `g_i^-1` for `O-_i`.
    pub fn containing(&self, v: &Vertex) -> Option<Letter> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.plus.contains(v) {
                return Some(Letter::new(i, false));
            }
            if g.minus.contains(v) {
                return Some(Letter::new(i, true));
            }
        }
        None
    }

    pub fn in_fundamental_domain(&self, v: &Vertex) -> bool {
        self.containing(v).is_none()
    }

    fn half_tree_of(&self, l: Letter) -> &HalfTree {
        let g = &self.generators[l.gen as usize];
        if l.inverse {
            &g.minus
        } else {
            &g.plus
        }
    }

    /// Write `v = w . f` with `f` in the fundamental domain.
    pub fn reduce(&self, v: &Vertex) -> Result<Reduction> {
        let first = match self.containing(v) {
            None => return Ok(Reduction { f: v.clone(), word: Word::identity() }),
            Some(l) => l,
        };
        let cap = v.distance(&self.half_tree_of(first).root) as usize + 8;
        let mut cur = v.clone();
        let mut word = Word::identity();
        for _ in 0..cap {
            match self.containing(&cur) {
                None => return Ok(Reduction { f: cur, word }),
                Some(l) => {
                    cur = cur.act(self.letter_matrix(l.inv()))?;
                    word.push(l);
                }
            }
        }
        match self.containing(&cur) {
            None => Ok(Reduction { f: cur, word }),
            Some(_) => Err(Error::NonTermination(cap)),
        }
    }

    /// Reduce the lattice of `m`, returning the transformed matrix and its vertex in F.
    pub fn reduce_frame(&self, m: &Mat2) -> Result<(Mat2, Vertex)> {
        let mut mat = m.normalized();
        let mut v = Vertex::from_matrix(&mat)?;
        let first = match self.containing(&v) {
            None => return Ok((mat, v)),
            Some(l) => l,
        };
        let cap = v.distance(&self.half_tree_of(first).root) as usize + 8;
        for _ in 0..cap {
            match self.containing(&v) {
                None => return Ok((mat, v)),
                Some(l) => {
                    mat = self.letter_matrix(l.inv()).mul(&mat).normalized();
                    v = Vertex::from_matrix(&mat)?;
                }
            }
        }
        match self.containing(&v) {
            None => Ok((mat, v)),
            Some(_) => Err(Error::NonTermination(cap)),
        }
    }

    /// Roots of the `2n` half-trees.
    pub fn roots(&self) -> Vec<Vertex> {
        let mut rs: Vec<Vertex> = self.halftrees().into_iter().map(|(_, h)| h.root.clone()).collect();
        rs.sort();
        rs.dedup();
        rs
    }

    fn core_data(&self) -> &(Vec<Vertex>, HashSet<Vertex>) {
        self.core.get_or_init(|| {
            let roots = self.roots();
            let mut set = HashSet::new();
            for a in &roots {
                for b in &roots {
                    set.extend(a.path_to(b));
                }
            }
            let mut vs: Vec<Vertex> = set.iter().cloned().collect();
            vs.sort();
            (vs, set)
        })
    }

    /// `F` intersected with the limit tree, computed as the convex hull of the
    /// half-tree roots.
    pub fn core_vertices(&self) -> &[Vertex] {
        &self.core_data().0
    }

    pub fn core_contains(&self, f: &Vertex) -> bool {
        self.core_data().1.contains(f)
    }

    /// Membership in the limit tree `S`.
    pub fn in_limit_tree(&self, v: &Vertex) -> Result<bool> {
        Ok(self.core_contains(&self.reduce(v)?.f))
    }

    /// The neighbor of `v` toward `S`, or `None` when `v` is in `S`.
    pub fn toward_limit_tree(&self, v: &Vertex) -> Result<Option<Vertex>> {
        let r = self.reduce(v)?;
        if self.core_contains(&r.f) {
            return Ok(None);
        }
        let target = &self.core_vertices()[0];
        let next = r.f.step_toward(target).expect("f is outside the core");
        Ok(Some(next.act(&self.word_matrix(&r.word))?))
    }
}

/// Backtracking over offset choices; candidates are already in search order.
fn search_offsets(cands: &[Vec<(HalfTree, HalfTree)>]) -> Option<Vec<usize>> {
    let n = cands.len();
    let k = cands[0].len();
    let self_ok: Vec<Vec<bool>> = cands.iter().map(|c| c.iter().map(|(p, m)| p.disjoint(m)).collect()).collect();
    // compat[i][a][j][b] for i < j
    let mut compat = vec![vec![vec![vec![false; k]; n]; k]; n];
    for i in 0..n {
        for a in 0..k {
            for j in i + 1..n {
                for b in 0..k {
                    compat[i][a][j][b] = pair_ok(&cands[i][a], &cands[j][b]);
                }
            }
        }
    }
    let mut choice = vec![0usize; n];
    fn go(i: usize, choice: &mut Vec<usize>, k: usize, compat: &[Vec<Vec<Vec<bool>>>], self_ok: &[Vec<bool>]) -> bool {
        if i == choice.len() {
            return true;
        }
        for a in 0..k {
            if !self_ok[i][a] {
                continue;
            }
            if (0..i).all(|j| compat[j][choice[j]][i][a]) {
                choice[i] = a;
                if go(i + 1, choice, k, compat, self_ok) {
                    return true;
                }
            }
        }
        false
    }
    go(0, &mut choice, k, &compat, &self_ok).then_some(choice)
}
