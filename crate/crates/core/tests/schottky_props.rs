use bt_orbits::error::Error;
use bt_orbits::fixtures::fixture;
use bt_orbits::padic::ExtContext;
use bt_orbits::pgl2::{BoundaryPoint, Mat2, ProjMatrix};
use bt_orbits::schottky::*;
use bt_orbits::tree::{End, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example() -> SchottkyGroup {
    let cfg = fixture("example-2.5").unwrap();
    SchottkyGroup::verify(&cfg.generator_matrices().unwrap(), DEFAULT_WINDOW, None).unwrap()
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

fn random_f(rng: &mut ChaCha8Rng, g: &SchottkyGroup) -> Vertex {
    let mut v = Vertex::origin(g.p());
    for _ in 0..rng.gen_range(0..6) {
        let ns = v.neighbors();
        v = ns[rng.gen_range(0..ns.len())].clone();
    }
    g.reduce(&v).unwrap().f
}

#[test]
fn reduction_inverts_the_tiling() {
    let g = example();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let f = random_f(&mut rng, &g);
        assert!(g.in_fundamental_domain(&f));
        let len = rng.gen_range(1..=4);
        let w = random_word(&mut rng, g.rank(), len);
        let v = f.act(&g.word_matrix(&w)).unwrap();
        let r = g.reduce(&v).unwrap();
        assert_eq!(r.f, f);
        assert_eq!(r.word, w);
    }
}

#[test]
fn generators_play_ping_pong() {
    let g = example();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, gen) in g.generators().iter().enumerate() {
        // gamma.v_0 = v_n
        assert_eq!(gen.minus.toward.act(gen.matrix.raw()).unwrap(), gen.plus.root, "generator {i}");
        for _ in 0..40 {
            let f = random_f(&mut rng, &g);
            let len = rng.gen_range(0..3);
            let mut v = f.act(&g.word_matrix(&random_word(&mut rng, g.rank(), len))).unwrap();
            if gen.minus.contains(&v) {
                v = f;
            }
            assert!(gen.plus.contains(&v.act(gen.matrix.raw()).unwrap()));
        }
    }
}

#[test]
fn limit_points_sit_in_the_halftrees() {
    let g = example();
    let one = limit_points(&g, 1).unwrap();
    assert_eq!(one.len(), 2 * g.rank());
    let two = limit_points(&g, 2).unwrap();
    assert!(two.len() > one.len());
    for (_, x) in &one {
        assert!(two.iter().any(|(_, y)| y.agrees_to_depth(x, DEDUP_DEPTH)));
    }
    let trees = g.halftrees();
    for (w, x) in &two {
        let e = End::from_point(x).unwrap();
        let hits = trees.iter().filter(|(_, h)| h.contains_end(&e).unwrap()).count();
        assert_eq!(hits, 1, "{w}");
    }
    // gamma_i gamma_k^-1: attracting end in dO+_i, repelling end in dO+_k
    for i in 0..g.rank() {
        for k in 0..g.rank() {
            if i == k {
                continue;
            }
            let w = Word(vec![Letter::new(i, false), Letter::new(k, true)]);
            let (minus, plus) = axis_ends(&g, &w).unwrap();
            assert!(g.generators()[i].plus.contains_end(&plus).unwrap());
            assert!(g.generators()[k].plus.contains_end(&minus).unwrap());
        }
    }
}

#[test]
fn axis_approximation_covers_windows() {
    let g = example();
    let pts = limit_points(&g, 2).unwrap();
    let picks = [(0, 5), (3, 17), (8, 30), (1, 40)];
    for (a, b) in picks {
        let (alpha, beta) = (&pts[a].1, &pts[b].1);
        let w = axis_approximate(&g, alpha, beta, 3).unwrap();
        let ends = axis_ends(&g, &w).unwrap();
        let window = geodesic_window(&End::from_point(alpha).unwrap(), &End::from_point(beta).unwrap(), g.p(), 3).unwrap();
        for v in &window {
            assert!(on_axis(&ends, v).unwrap(), "{w} misses {v}");
        }
    }
}

fn ctx() -> &'static ExtContext {
    ExtContext::new(3, 2, 48).unwrap()
}

fn m(s: &str) -> ProjMatrix {
    ProjMatrix::parse(ctx(), s).unwrap()
}

#[test]
fn duplicate_generator_fails() {
    let g = fixture("example-2.5").unwrap().generator_matrices().unwrap();
    let err = SchottkyGroup::verify(&[g[0], g[0]], DEFAULT_WINDOW, None).unwrap_err();
    assert!(matches!(err, Error::NoValidLabeling { .. }));
}

#[test]
fn shared_infinity_fails() {
    let a = m("[[1/3, 0], [0, 1]]");
    let u = m("[[1, 1], [0, 1]]");
    let b = u.mul(&a).unwrap().mul(&u.inverse().unwrap()).unwrap();
    // both axes end at infinity; a half-tree membership oracle sees it
    let ends: Vec<BoundaryPoint> = [a, b].iter().map(|x| bt_orbits::pgl2::classify(x).unwrap().hyperbolic().unwrap().fixed_plus).collect();
    assert!(ends.iter().all(|e| e.is_infinity()));
    for o in offset_order(DEFAULT_WINDOW) {
        for o2 in offset_order(DEFAULT_WINDOW) {
            assert!(SchottkyGroup::verify(&[a, b], DEFAULT_WINDOW, Some(&[o, o2])).is_err());
        }
    }
    assert!(SchottkyGroup::verify(&[a, b], DEFAULT_WINDOW, None).is_err());
}

fn two_generator_group() -> SchottkyGroup {
    let a = m("[[1/3, 0], [0, 1]]");
    let h = m("[[1 + w, 1], [1, 1]]");
    let b = h.mul(&a).unwrap().mul(&h.inverse().unwrap()).unwrap();
    SchottkyGroup::verify(&[a, b], DEFAULT_WINDOW, None).unwrap()
}

#[test]
fn small_group_is_not_highly_branched() {
    let g = two_generator_group();
    let core = CoreGraph::compute(&g, 2).unwrap();
    assert_eq!(core.vertices.len(), CoreGraph::from_root_hull(&g).unwrap().vertices.len());
    let report = high_branched_check(&g, &core, 1).unwrap();
    assert!(!report.degrees.holds);
    assert!(core.degrees.iter().all(|&d| d <= 4));
}

/// Degrees of translated core vertices, counted directly in the tree, agree
/// with the quotient degrees.
#[test]
fn degree_is_invariant_under_the_group() {
    let g = example();
    let core = CoreGraph::compute(&g, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let len = rng.gen_range(0..4);
        let w = random_word(&mut rng, g.rank(), len);
        let mat: Mat2 = g.word_matrix(&w);
        for (v, &d) in core.vertices.iter().zip(&core.degrees) {
            let u = v.act(&mat).unwrap();
            let direct = u.neighbors().iter().filter(|n| g.in_limit_tree(n).unwrap()).count();
            assert_eq!(direct, d, "{w} {v}");
        }
    }
}

#[test]
fn word_core_matches_root_hull() {
    for g in [example(), two_generator_group()] {
        let words = core_vertices_from_words(&g, 2).unwrap();
        let hull: std::collections::BTreeSet<Vertex> = g.core_vertices().iter().cloned().collect();
        assert_eq!(words, hull);
    }
}
