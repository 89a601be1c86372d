use super::group::SchottkyGroup;
use super::word::{reduced_words, Word};
use crate::error::{Error, Result};
use crate::pgl2::{classify_raw, BoundaryPoint};
use crate::tree::{median, End, Vertex};

/// Depth at which two limit points count as the same.
pub const DEDUP_DEPTH: i64 = 24;

const MAX_POWER: i32 = 16;

/// Fixed points of reduced words up to length `max_len`, attracting first.
pub fn limit_points(g: &SchottkyGroup, max_len: usize) -> Result<Vec<(Word, BoundaryPoint)>> {
    let mut out: Vec<(Word, BoundaryPoint)> = Vec::new();
    for w in reduced_words(g.rank(), max_len) {
        let h = classify_raw(&g.word_matrix(&w))?
            .hyperbolic()
            .ok_or_else(|| Error::PrecisionExhausted(format!("word {w} lost hyperbolicity")))?;
        for x in [h.fixed_plus, h.fixed_minus] {
            if !out.iter().any(|(_, y)| y.agrees_to_depth(&x, DEDUP_DEPTH)) {
                out.push((w.clone(), x));
            }
        }
    }
    Ok(out)
}

/// Ends of the axis of `w`, repelling first.
pub fn axis_ends(g: &SchottkyGroup, w: &Word) -> Result<(End, End)> {
    let h = classify_raw(&g.word_matrix(w))?
        .hyperbolic()
        .ok_or_else(|| Error::PrecisionExhausted(format!("word {w} lost hyperbolicity")))?;
    Ok((End::from_point(&h.fixed_minus)?, End::from_point(&h.fixed_plus)?))
}

pub fn on_axis(ends: &(End, End), v: &Vertex) -> Result<bool> {
    Ok(median(v, &ends.0, &ends.1)? == *v)
}

/// The segment of `(alpha, beta)` within distance `radius` of the projection of the origin.
pub fn geodesic_window(alpha: &End, beta: &End, p: u32, radius: usize) -> Result<Vec<Vertex>> {
    let c = median(&Vertex::origin(p), alpha, beta)?;
    let mut back = alpha.ray_from(&c, radius)?;
    back.reverse();
    back.pop();
    back.extend(beta.ray_from(&c, radius)?);
    Ok(back)
}

/// A word whose axis contains the radius-`radius` window of `(alpha, beta)`
/// around the projection of the origin.
///
/// Generators and words of length 2 are tried first. Otherwise the window ends
/// `a, b` are put on axes of conjugates `t1, t2` of short words and
/// `t1^{e n} t2^{f n}` is searched with the smallest `n`.
pub fn axis_approximate(g: &SchottkyGroup, alpha: &BoundaryPoint, beta: &BoundaryPoint, radius: usize) -> Result<Word> {
    if alpha == beta {
        return Err(Error::NotLimitPoints("the two points coincide".into()));
    }
    let (ea, eb) = (End::from_point(alpha)?, End::from_point(beta)?);
    let window = geodesic_window(&ea, &eb, g.p(), radius)?;
    for v in [&window[0], &window[window.len() - 1]] {
        if !g.in_limit_tree(v)? {
            return Err(Error::NotLimitPoints(format!("{v} is outside the limit tree")));
        }
    }
    let contains = |w: &Word| -> Result<bool> {
        let ends = axis_ends(g, w)?;
        Ok(on_axis(&ends, &window[0])? && on_axis(&ends, &window[window.len() - 1])?)
    };
    for w in reduced_words(g.rank(), 2) {
        if contains(&w)? {
            return Ok(w);
        }
    }
    let t1 = conjugate_through(g, &window[0])?;
    let t2 = conjugate_through(g, &window[window.len() - 1])?;
    for n in 1..=MAX_POWER {
        for (e, f) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
            let w = t1.pow(e * n).mul(&t2.pow(f * n));
            if !w.is_empty() && contains(&w)? {
                return Ok(w);
            }
        }
    }
    Err(Error::SearchFailed(format!("no axis through the window up to power {MAX_POWER}")))
}

/// A word `u c u^-1` whose axis passes through `v`, for `v` in the limit tree.
fn conjugate_through(g: &SchottkyGroup, v: &Vertex) -> Result<Word> {
    let r = g.reduce(v)?;
    for c in reduced_words(g.rank(), 3) {
        if on_axis(&axis_ends(g, &c)?, &r.f)? {
            return Ok(r.word.mul(&c).mul(&r.word.inverse()));
        }
    }
    Err(Error::NotLimitPoints(format!("no short axis through {}", r.f)))
}
