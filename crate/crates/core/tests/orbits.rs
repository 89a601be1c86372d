use bt_orbits::fixtures::fixture;
use bt_orbits::orbits::*;
use bt_orbits::padic::{ExtContext, ExtScalar, PadicScalar};
use bt_orbits::pgl2::{Mat2, PNorm, ProjMatrix};
use bt_orbits::schottky::*;
use bt_orbits::tree::Vertex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load(name: &str) -> (SchottkyGroup, Circle) {
    let cfg = fixture(name).unwrap();
    let g = SchottkyGroup::verify(&cfg.generator_matrices().unwrap(), DEFAULT_WINDOW, None).unwrap();
    let c = Circle::new(cfg.probe_circle().unwrap().unwrap()).unwrap();
    (g, c)
}

fn circle(g: &SchottkyGroup, s: &str) -> Circle {
    Circle::new(ProjMatrix::parse(g.context(), s).unwrap()).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
    let mut w = Word::identity();
    while w.len() < len {
        let l = Letter::from_code(rng.gen_range(0..2 * rank));
        if w.0.last() != Some(&l.inv()) {
            w.push(l);
        }
    }
    w
}

/// Persistent path counts by checking every `T_H` vertex around the root directly.
fn census_oracle(c: &Circle, g: &SchottkyGroup, h_root: &Vertex, depth: usize) -> Vec<u64> {
    let mut layer = vec![(h_root.clone(), None::<Vertex>)];
    let mut counts = vec![1];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (x, from) in &layer {
            for y in x.rational_neighbors() {
                if Some(&y) != from.as_ref() && g.in_limit_tree(&y.act(c.rep().raw()).unwrap()).unwrap() {
                    next.push((y, Some(x.clone())));
                }
            }
        }
        counts.push(next.len() as u64);
        layer = next;
    }
    counts
}

#[test]
fn nonexample_has_two_rays() {
    let (g, c) = load("nonexample-2.5");
    for d in 5..=12 {
        let cen = circle_limit_census(&c, &g, d).unwrap();
        assert_eq!(cen.verdict, Verdict::ProperNonempty(2));
        let pts: Vec<&str> = cen.rays.iter().map(|r| r.point.as_str()).collect();
        assert_eq!(pts, ["inf", "0"]);
    }
}

#[test]
fn census_matches_direct_check() {
    let (g, c) = load("example-2.5");
    let cen = circle_limit_census(&c, &g, 7).unwrap();
    assert_eq!(cen.counts, census_oracle(&c, &g, &cen.h_root, 7));
    let (g, c) = load("nonexample-2.5");
    let cen = circle_limit_census(&c, &g, 7).unwrap();
    assert_eq!(cen.counts, census_oracle(&c, &g, &cen.h_root, 7));
}

#[test]
fn example_census_grows_and_refines() {
    let (g, c) = load("example-2.5");
    let mut prev: Option<Census> = None;
    for d in 6..=9 {
        let cen = circle_limit_census(&c, &g, d).unwrap();
        if let Some(p) = prev {
            assert!(cen.ray_count > p.ray_count);
            assert_eq!(cen.counts[..=p.depth], p.counts[..]);
        }
        prev = Some(cen);
    }
}

#[test]
fn empty_hull_is_certified() {
    let (g, _) = load("example-2.5");
    let c = circle(&g, "[[1, w], [0, 3^4]]");
    for d in [4, 6, 9] {
        let cen = circle_limit_census(&c, &g, d).unwrap();
        assert_eq!(cen.verdict, Verdict::Empty);
        let e = &cen.certificates[0];
        assert!(g.in_limit_tree(&e.inside).unwrap());
        assert!(!g.in_limit_tree(&e.outside).unwrap());
        // the hull lies beyond the edge
        assert!(cen.root.distance(&e.outside) < cen.root.distance(&e.inside));
        assert!(c.hull_contains(&cen.root).unwrap());
    }
    let rep = classify_orbit(&c, &g, 6, 2).unwrap();
    assert_eq!(rep.case, OrbitCase::Discrete);
    assert_eq!(rep.case_tag, Some(1));
}

#[test]
fn census_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for name in ["nonexample-2.5", "example-2.5"] {
        let (g, c) = load(name);
        let base = circle_limit_census(&c, &g, 6).unwrap();
        for _ in 0..10 {
            let len = rng.gen_range(1..=3);
            let w = random_word(&mut rng, g.rank(), len);
            let m = g.word_matrix(&w);
            let moved = c.translate(&m).unwrap();
            let plain = circle_limit_census(&moved, &g, 6).unwrap();
            assert_eq!(std::mem::discriminant(&plain.verdict), std::mem::discriminant(&base.verdict));
            let at = circle_limit_census_at(&moved, &g, 6, &base.root.act(&m).unwrap()).unwrap();
            assert_eq!(at.counts, base.counts, "{name} {w}");
        }
    }
}

#[test]
fn conjugator_frames_are_recurrent() {
    let (g, _) = load("example-2.5");
    let ctx = g.context();
    let a = ProjMatrix::parse(ctx, "[[3, 0], [0, 1]]").unwrap();
    for gen in g.generators() {
        let h = gen.hyperbolic.conjugator;
        assert!(rf_membership(&h, &g, 10).unwrap().member);
        assert!(rf_membership(&h.mul(&a).unwrap(), &g, 10).unwrap().member);
    }
    let off = ProjMatrix::parse(ctx, "[[1, w], [0, 3^4]]").unwrap();
    let r = rf_membership(&off, &g, 6).unwrap();
    assert!(!r.member);
    let (_, v) = r.exit.unwrap();
    assert!(!g.in_limit_tree(&v).unwrap());
}

#[test]
fn example_is_thick() {
    let (g, _) = load("example-2.5");
    let core = CoreGraph::compute(&g, 2).unwrap();
    assert_eq!(core.diameter(), 1);
    for gen in g.generators().iter().take(3) {
        let w = thickness_sample(&gen.hyperbolic.conjugator, &g, 2, -8..=8, 10, 1).unwrap();
        assert!(w.misses.is_empty());
        for s in &w.shells {
            assert!(s.verified);
            let v = s.valuation.unwrap();
            assert!((-(2 + s.shell)..-s.shell).contains(&v));
        }
    }
    let h = g.generators()[0].hyperbolic.conjugator;
    assert!(thickness_sample(&h, &g, 1, 0..=0, 10, 1).is_err());
}

#[test]
fn nonexample_is_not_thick() {
    let (g, c) = load("nonexample-2.5");
    let w = thickness_sample(c.rep(), &g, 2, -3..=3, 10, 1).unwrap();
    assert_eq!(w.misses.len(), 7);
    // u_0 fixes g.0
    let ctx = g.context();
    let u0 = unipotent(&PadicScalar::zero(ctx));
    assert_eq!(u0, Mat2::identity(ctx));
}

fn ctx() -> &'static ExtContext {
    ExtContext::new(3, 2, 48).unwrap()
}

fn small_int(rng: &mut ChaCha8Rng) -> ExtScalar {
    let c = ctx();
    ExtScalar::from_i64(c, rng.gen_range(-50..50)) + ExtScalar::omega(c) * ExtScalar::from_i64(c, rng.gen_range(-50..50))
}

#[test]
fn polynomial_bound_holds() {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut done = 0;
    while done < 200 {
        let d = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=3u32);
        let m = rng.gen_range(-2..=6);
        let mut coeffs: Vec<ExtScalar> = (0..=d).map(|_| small_int(&mut rng)).collect();
        if coeffs[d].is_zero() {
            continue;
        }
        // synthetic K-thick set: one element in every shell near the ball
        let sample: Vec<PadicScalar> = (-m - 6..m + 6)
            .map(|l| {
                let v = rng.gen_range(-(k as i32) - l..-l);
                let u = [1, 2, 4, 5, 7, 8][rng.gen_range(0..6)];
                PadicScalar::from_i64(c, u).shift(v)
            })
            .collect();
        let bound = match polybound_property(&coeffs, &sample, k, m) {
            Ok(b) => b,
            Err(_) => continue,
        };
        assert!(bound.holds, "{coeffs:?} k {k} m {m}");
        // brute force sup over B_m on residue representatives of the sphere
        let sup = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .filter(|&(x, y)| (x, y) != (0, 0))
            .map(|(x, y)| {
                let t = (ExtScalar::from_i64(c, x) + ExtScalar::omega(c) * ExtScalar::from_i64(c, y)).shift(-m);
                let mut acc = ExtScalar::zero(c);
                for a in coeffs.iter().rev() {
                    acc = acc * t + *a;
                }
                PNorm::of(&acc)
            })
            .max()
            .unwrap();
        assert_eq!(bound.lhs, PNorm::pow(sup_exp(sup) + (k as i64) * d as i64));
        coeffs.clear();
        done += 1;
    }
}

fn sup_exp(n: PNorm) -> i64 {
    n.neg_exp.unwrap()
}

#[test]
fn polynomial_bound_is_tight() {
    let c = ctx();
    for (d, k, m) in [(1usize, 1u32, 3i32), (2, 2, 5), (4, 2, 6), (3, 3, 4)] {
        let mut coeffs = vec![ExtScalar::zero(c); d + 1];
        coeffs[d] = ExtScalar::one(c);
        let sample = vec![PadicScalar::from_i64(c, 1).shift(-m + k as i32), PadicScalar::from_i64(c, 2).shift(-m + k as i32)];
        let b = polybound_property(&coeffs, &sample, k, m).unwrap();
        assert!(b.holds);
        assert_eq!(b.lhs, b.rhs);
        assert_eq!(b.rhs, PNorm::pow(-(d as i64) * (m - k as i32) as i64));
    }
}

#[test]
fn stabilizers() {
    let (g, c) = load("nonexample-2.5");
    let stab = stabilizer_search(&c, &g, 4).unwrap();
    let gp = Word::letter(Letter::new(g.rank() - 1, false));
    assert_eq!(stab[0], gp);
    for w in &stab {
        assert!(stab.contains(&w.inverse()));
        assert!(w.0.iter().all(|l| l.gen as usize == g.rank() - 1));
    }
    // stabilizer words permute the persistent rays
    let cen = circle_limit_census(&c, &g, 8).unwrap();
    let m = g.word_matrix(&gp);
    for r in &cen.rays {
        let pt = bt_orbits::pgl2::BoundaryPoint::parse(g.context(), &r.point).unwrap();
        let img = format!("{:.6}", m.apply(&pt).unwrap());
        assert!(cen.rays.iter().any(|s| s.point == img));
    }

    // without the rational generator nothing short stabilizes H
    let cfg = fixture("example-2.5").unwrap();
    let mut mats = cfg.generator_matrices().unwrap();
    mats.remove(6);
    let sub = SchottkyGroup::verify(&mats, DEFAULT_WINDOW, None).unwrap();
    assert!(stabilizer_search(&Circle::standard(sub.context()), &sub, 3).unwrap().is_empty());
}

#[test]
fn gamma_c_v_collapses_powers() {
    let (g, c) = load("nonexample-2.5");
    let v = Vertex::origin(3);
    assert!(c.hull_contains(&v).unwrap());
    let mut prev = 0;
    for l in 1..=4 {
        let classes = gamma_c_v(&c, &v, &g, l).unwrap();
        assert_eq!(classes[0], Word::identity());
        assert!(classes.len() >= prev);
        prev = classes.len();
        let gp = g.rank() - 1;
        assert!(classes.iter().skip(1).all(|w| !w.0.iter().all(|x| x.gen as usize == gp)));
    }
}

#[test]
fn classification() {
    let (g, c) = load("nonexample-2.5");
    let a = classify_orbit(&c, &g, 10, 4).unwrap();
    let b = classify_orbit(&c, &g, 11, 5).unwrap();
    assert_eq!(a.case, OrbitCase::ClosedWithStabilizer);
    assert_eq!(a.case_tag, Some(3));
    assert_eq!(a.evidence, EVIDENCE_NOTE);
    assert_eq!(a.case, b.case);

    let (g, c) = load("example-2.5");
    let a = classify_orbit(&c, &g, 6, 2).unwrap();
    let b = classify_orbit(&c, &g, 7, 3).unwrap();
    assert_eq!(a.case, OrbitCase::DenseConjecture);
    assert_eq!(a.case, b.case);
}

#[test]
fn hausdorff() {
    let (g, _) = load("example-2.5");
    let ctx = g.context();
    let h = Circle::standard(ctx);
    assert!(hausdorff_circle_distance(&h, &h, 10, DEFAULT_FRONTIER_CAP).unwrap().value.is_zero());
    for k in 1..=6 {
        let c = circle(&g, &format!("[[1, w*3^{k}], [0, 1]]"));
        let d = hausdorff_circle_distance(&h, &c, 10, DEFAULT_FRONTIER_CAP).unwrap();
        assert!(d.resolved);
        assert_eq!(d.value, PNorm::pow(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let mut one = || {
            let e = [0; 4].map(|_| small_int(&mut rng));
            ProjMatrix::from_entries(e[0], e[1], e[2], e[3]).ok().and_then(|m| Circle::new(m).ok())
        };
        let (Some(a), Some(b)) = (one(), one()) else { continue };
        let x = hausdorff_circle_distance(&a, &b, 8, DEFAULT_FRONTIER_CAP).unwrap();
        let y = hausdorff_circle_distance(&b, &a, 8, DEFAULT_FRONTIER_CAP).unwrap();
        assert_eq!(x.value, y.value);
        assert_eq!(x.value.is_zero(), a == b);
    }
}

#[test]
fn projections() {
    let (g, c) = load("nonexample-2.5");
    let pr = project_subtree(&c, &g, 5, 8, 4, 20000).unwrap();
    let axis = axis_in_domain(&g, &Word::letter(Letter::new(g.rank() - 1, false))).unwrap();
    assert_eq!(pr.core_hit, axis);
    assert_eq!(pr.orbit.case, OrbitCase::ClosedWithStabilizer);

    let (g, h) = load("example-2.5");
    let pr = project_subtree(&h, &g, 6, 6, 2, 20000).unwrap();
    assert!(pr.growth.windows(2).all(|w| w[1] > w[0]));

    let far = circle(&g, "[[1, w], [0, 3^4]]");
    let pr = project_subtree(&far, &g, 4, 6, 2, 20000).unwrap();
    assert_eq!(pr.orbit.case, OrbitCase::Discrete);
    assert!(pr.core_hit.is_empty());
    assert_eq!(pr.max_end_degree, 4);
    assert!(pr.to_dot().starts_with("graph \"projection\" {"));
}
