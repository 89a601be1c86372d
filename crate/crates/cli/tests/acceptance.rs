//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use bt_orbits::fixtures::fixture;
use bt_orbits::orbits::{circle_limit_census, classify_orbit, polybound_property, thickness_sample, Circle};
use bt_orbits::padic::{density_check, parse_scalar, ExtContext, ExtScalar, PadicScalar};
use bt_orbits::pgl2::{classify_raw, unit_from_polar, Mat2, PNorm};
use bt_orbits::schottky::{degree_condition, CoreGraph, Letter, SchottkyGroup, Word, DEFAULT_WINDOW};
use bt_orbits::tree::{HalfTree, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bt-orbits")
}

fn ctx() -> &'static ExtContext {
    ExtContext::new(3, 2, 48).unwrap()
}

fn group(name: &str) -> SchottkyGroup {
    let cfg = fixture(name).unwrap();
    SchottkyGroup::verify(&cfg.generator_matrices().unwrap(), DEFAULT_WINDOW, None).unwrap()
}

fn probe_circle(name: &str) -> Circle {
    Circle::new(fixture(name).unwrap().probe_circle().unwrap().unwrap()).unwrap()
}

fn ext(a: i64, b: i64) -> ExtScalar {
    ExtScalar::from_i64(ctx(), a) + ExtScalar::omega(ctx()) * ExtScalar::from_i64(ctx(), b)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["verify", "--fixture", "example-2.5", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(out.status.code() == Some(0), "exit status {:?}", out.status.code());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let ver = &v["verification"];
    ensure!(ver["schottky"] == true, "not verified as Schottky");
    let offsets = ver["offsets"].as_array().ok_or("no offsets")?;
    ensure!(offsets.len() == 8, "{} offsets", offsets.len());
    ensure!(offsets.iter().all(|o| o.as_i64().is_some_and(|o| o.abs() <= 4)), "offset outside window");
    ensure!(ver["branching"]["highly_branched"] == true, "not highly branched");
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("verified in {:.2} s, offsets {}", elapsed.as_secs_f64(), ver["offsets"]))
}

fn criterion_2() -> Outcome {
    let g = group("example-2.5");
    let c = ctx();
    let core = CoreGraph::compute(&g, 2).map_err(|e| e.to_string())?;
    let next = CoreGraph::compute(&g, 3).map_err(|e| e.to_string())?;
    ensure!(core.vertices == next.vertices && core.degrees == next.degrees, "core not stable from L=2 to L=3");
    let expected: BTreeSet<Vertex> = [[[1, 0], [0, 1]], [[3, 1], [0, 1]]]
        .iter()
        .map(|m| Vertex::from_matrix(&Mat2::from_i64(c, *m)).unwrap())
        .collect();
    let got: BTreeSet<Vertex> = core.vertices.iter().cloned().collect();
    ensure!(got == expected, "core vertices {got:?}");
    ensure!(core.degrees == vec![9, 9], "degrees {:?}", core.degrees);
    let dc = degree_condition(&g, &core);
    ensure!(dc.holds && dc.min_degree == 8 && dc.witness_degree == 9, "degree condition {dc:?}");
    ensure!(dc.pairs.iter().all(|p| p.witness.is_some()), "pair without a degree-9 witness");
    let direct = core.vertices[0].distance(&core.vertices[1]);
    ensure!(core.diameter() == 1 && direct == 1, "diameter {} (distance {direct})", core.diameter());
    Ok(format!("{} core vertices, degrees {:?}, diameter 1", core.vertices.len(), core.degrees))
}

const MODULUS: i64 = 81;

fn mul81(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    ((a.0 * b.0 + 2 * a.1 * b.1).rem_euclid(MODULUS), (a.0 * b.1 + a.1 * b.0).rem_euclid(MODULUS))
}

/// Dense iff `a` and `4` generate the whole unit group mod `3^4`.
fn orbit_oracle(a: (i64, i64)) -> bool {
    let mut seen = HashSet::from([(1, 0)]);
    let mut stack = vec![(1, 0)];
    while let Some(x) = stack.pop() {
        for g in [a, (4, 0)] {
            let y = mul81(x, g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == 8 * 729
}

fn criterion_3() -> Outcome {
    let c = ctx();
    let u4 = parse_scalar(c, "phi * (sqrt(1 + 2*3^2) + w*3)").map_err(|e| e.to_string())?;
    ensure!(density_check(&u4).map_err(|e| e.to_string())?.dense, "u4 not dense");
    let slow = unit_from_polar(&PadicScalar::one(c), &c.phi(), &PadicScalar::from_i64(c, 9)).map_err(|e| e.to_string())?;
    ensure!(!density_check(&slow).map_err(|e| e.to_string())?.dense, "zeta exp(i w_p 9) reported dense");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut done, mut dense) = (0, 0);
    while done < 30 {
        let (x, y) = (rng.gen_range(0..MODULUS), rng.gen_range(0..MODULUS));
        if x % 3 == 0 && y % 3 == 0 {
            continue;
        }
        let got = density_check(&ext(x, y)).map_err(|e| e.to_string())?.dense;
        ensure!(got == orbit_oracle((x, y)), "disagreement at {x} + {y}w");
        dense += got as usize;
        done += 1;
    }
    Ok(format!("u4 dense, slow unit not dense, 30/30 agree with the mod 81 oracle ({dense} dense)"))
}

fn criterion_4() -> Outcome {
    let g = group("nonexample-2.5");
    let c = probe_circle("nonexample-2.5");
    for d in 5..=12 {
        let cen = circle_limit_census(&c, &g, d).map_err(|e| e.to_string())?;
        ensure!(cen.ray_count == 2, "depth {d}: {} rays", cen.ray_count);
        let pts: BTreeSet<&str> = cen.rays.iter().map(|r| r.point.as_str()).collect();
        ensure!(pts == BTreeSet::from(["0", "inf"]), "depth {d}: rays {pts:?}");
    }
    let orbit = classify_orbit(&c, &g, 10, 4).map_err(|e| e.to_string())?;
    ensure!(orbit.case_tag == Some(3), "case {:?}", orbit.case);
    let gp = Word::letter(Letter::new(g.rank() - 1, false));
    ensure!(orbit.stabilizer_words.contains(&gp), "stabilizer misses the diagonal generator");
    Ok("2 rays {0, inf} for D = 5..12, case 3 with the diagonal generator".into())
}

fn criterion_5() -> Outcome {
    let g = group("example-2.5");
    let diameter = CoreGraph::compute(&g, 2).map_err(|e| e.to_string())?.diameter();
    let frames: Vec<_> = g.generators().iter().take(3).map(|gen| gen.hyperbolic.conjugator).collect();
    let distinct: BTreeSet<String> = frames.iter().map(|f| f.to_string()).collect();
    ensure!(distinct.len() == 3, "frames are not distinct");
    let mut shells = 0;
    for f in &frames {
        let w = thickness_sample(f, &g, 2, -8..=8, 10, diameter).map_err(|e| e.to_string())?;
        ensure!(w.misses.is_empty(), "{f}: misses {:?}", w.misses);
        ensure!(w.shells.len() == 17, "{f}: {} shells", w.shells.len());
        ensure!(w.shells.iter().all(|s| s.verified), "{f}: unverified witness");
        shells += w.shells.len();
    }
    Ok(format!("{shells} shell witnesses over 3 frames, no misses"))
}

fn criterion_6() -> Outcome {
    let g = group("example-2.5");
    let c = probe_circle("example-2.5");
    let mut counts = Vec::new();
    for d in 6..=12 {
        counts.push(circle_limit_census(&c, &g, d).map_err(|e| e.to_string())?.ray_count);
    }
    ensure!(counts.windows(2).all(|w| w[0] < w[1]), "counts {counts:?}");
    Ok(format!("ray counts {counts:?}"))
}

fn walk(rng: &mut ChaCha8Rng, from: &Vertex, steps: usize) -> Vertex {
    let mut v = from.clone();
    for _ in 0..steps {
        let ns = v.neighbors();
        v = ns[rng.gen_range(0..ns.len())].clone();
    }
    v
}

fn ball(center: &Vertex, r: usize) -> HashSet<Vertex> {
    let mut seen = HashSet::from([center.clone()]);
    let mut layer = vec![center.clone()];
    for _ in 0..r {
        let mut next = Vec::new();
        for u in &layer {
            for w in u.neighbors() {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    seen
}

fn bfs_distance(x: &Vertex, y: &Vertex) -> u32 {
    let (mut rx, mut ry) = (0usize, 0usize);
    loop {
        let (bx, by) = (ball(x, rx), ball(y, ry));
        if bx.iter().any(|v| by.contains(v)) {
            return (rx + ry) as u32;
        }
        if rx <= ry {
            rx += 1;
        } else {
            ry += 1;
        }
    }
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

fn criterion_7() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let o = Vertex::origin(3);

    for _ in 0..500 {
        let (sx, sy) = (rng.gen_range(0..6), rng.gen_range(0..=10));
        let x = walk(&mut rng, &o, sx);
        let y = walk(&mut rng, &x, sy);
        ensure!(x.distance(&y) == bfs_distance(&x, &y), "distance {x} {y}");
    }

    let mut done = 0;
    while done < 100 {
        let h = Mat2::from_i64(c, [[rng.gen_range(-30..30), rng.gen_range(-30..30)], [rng.gen_range(-30..30), rng.gen_range(-30..30)]]);
        let u = ext(rng.gen_range(-40..40), rng.gen_range(-40..40));
        if h.det().is_zero() || !u.is_unit() {
            continue;
        }
        let n = rng.gen_range(1..4);
        let g = h.mul(&Mat2::diag(u.shift(-n), ExtScalar::one(c))).mul(&h.adj());
        let len = classify_raw(&g).map_err(|e| e.to_string())?.hyperbolic().ok_or("not hyperbolic")?.length;
        let disp = |v: &Vertex| v.distance(&v.act(&g).unwrap());
        let mut v = o.clone();
        let mut best = disp(&v);
        loop {
            let (d, w) = v.neighbors().into_iter().map(|w| (disp(&w), w)).min_by_key(|(d, _)| *d).unwrap();
            if d >= best {
                break;
            }
            (best, v) = (d, w);
        }
        ensure!(len == best, "translation length {len}, displacement minimum {best}");
        done += 1;
    }

    let g = group("example-2.5");
    for _ in 0..200 {
        let mut v = o.clone();
        for _ in 0..rng.gen_range(0..6) {
            v = walk(&mut rng, &v, 1);
        }
        let f = g.reduce(&v).map_err(|e| e.to_string())?.f;
        let len = rng.gen_range(1..=4);
        let w = random_word(&mut rng, g.rank(), len);
        let r = g.reduce(&f.act(&g.word_matrix(&w)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(r.f == f && r.word == w, "tiling round trip failed for {w} at {f}");
    }

    let universe = ball(&o, 4);
    let member = |h: &HalfTree, v: &Vertex| v.distance(&h.toward) < v.distance(&h.root);
    for _ in 0..100 {
        let mut edge = || {
            let steps = rng.gen_range(0..=2);
            let r = walk(&mut rng, &o, steps);
            let t = walk(&mut rng, &r, 1);
            HalfTree::new(r, t)
        };
        let (a, b) = (edge(), edge());
        let oracle = !universe.iter().any(|v| member(&a, v) && member(&b, v));
        ensure!(a.disjoint(&b) == oracle, "half-tree disjointness {a:?} {b:?}");
    }
    Ok("500 distances, 100 translation lengths, 200 round trips, 100 half-tree pairs".into())
}

fn criterion_8() -> Outcome {
    const DIGITS: i32 = 46;
    let one = ExtScalar::one(ctx());
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let ideal = |rng: &mut ChaCha8Rng| ext(rng.gen_range(-1_000_000..1_000_000), rng.gen_range(-1_000_000..1_000_000)).shift(rng.gen_range(1..4));
    for _ in 0..50 {
        let x = ideal(&mut rng);
        let (s, co) = (x.sin().map_err(|e| e.to_string())?, x.cos().map_err(|e| e.to_string())?);
        ensure!((s * s + co * co).agrees_to(&one, DIGITS), "cos^2 + sin^2 at {x:?}");
    }
    for _ in 0..50 {
        let (x, y) = (ideal(&mut rng), ideal(&mut rng));
        let lhs = (x + y).exp().map_err(|e| e.to_string())?;
        let rhs = x.exp().map_err(|e| e.to_string())? * y.exp().map_err(|e| e.to_string())?;
        ensure!(lhs.agrees_to(&rhs, DIGITS), "exp additivity at {x:?}, {y:?}");
    }
    for _ in 0..50 {
        let x = ideal(&mut rng);
        let back = x.exp().and_then(|e| e.log()).map_err(|e| e.to_string())?;
        ensure!(back.agrees_to(&x, DIGITS), "log(exp x) at {x:?}");
    }
    Ok(format!("150 identities agree to {DIGITS} digits"))
}

fn horner(coeffs: &[ExtScalar], t: &ExtScalar) -> ExtScalar {
    coeffs.iter().rev().fold(ExtScalar::zero(ctx()), |acc, a| acc * *t + *a)
}

fn criterion_9() -> Outcome {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    let mut done = 0;
    while done < 200 {
        let d = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=3u32);
        let m = rng.gen_range(-2..=6);
        let coeffs: Vec<ExtScalar> = (0..=d).map(|_| ext(rng.gen_range(-50..50), rng.gen_range(-50..50))).collect();
        if coeffs[d].is_zero() {
            continue;
        }
        let sample: Vec<PadicScalar> = (-m - 6..m + 6)
            .map(|l| {
                let v = rng.gen_range(-(k as i32) - l..-l);
                PadicScalar::from_i64(c, [1, 2, 4, 5, 7, 8][rng.gen_range(0..6)]).shift(v)
            })
            .collect();
        let Ok(b) = polybound_property(&coeffs, &sample, k, m) else { continue };
        ensure!(b.holds, "bound fails for degree {d}, K {k}, m {m}");
        // sup over the ball is attained on the sphere residues
        let sup = (0..9)
            .filter(|&r| r != 0)
            .map(|r| PNorm::of(&horner(&coeffs, &ext(r / 3, r % 3).shift(-m))))
            .max()
            .unwrap();
        let want = PNorm::pow(sup.neg_exp.ok_or("zero sup")? + (k as i64) * d as i64);
        ensure!(b.lhs == want, "lhs {:?}, oracle {:?}", b.lhs, want);
        done += 1;
    }
    for (d, k, m) in [(1usize, 1u32, 3i32), (2, 2, 5), (4, 2, 6), (3, 3, 4)] {
        let mut coeffs = vec![ExtScalar::zero(c); d + 1];
        coeffs[d] = ExtScalar::one(c);
        let sample = vec![PadicScalar::from_i64(c, 1).shift(-m + k as i32)];
        let b = polybound_property(&coeffs, &sample, k, m).map_err(|e| e.to_string())?;
        ensure!(b.holds && b.lhs == b.rhs, "t^{d} with K {k}, m {m} is not tight");
    }
    Ok("200 random instances hold, 4 tight instances reach equality".into())
}

fn run_all(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    for fx in ["example-2.5", "nonexample-2.5"] {
        for cmd in ["verify", "core", "probe", "thick", "project", "density"] {
            let out = dir.join(fx);
            let st = Command::new(bin())
                .args([cmd, "--fixture", fx, "--dot", "--out"])
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !matches!(st.status.code(), Some(0 | 1)) {
                return Err(format!("{cmd} {fx}: exit {:?}", st.status.code()));
            }
        }
    }
    Ok(())
}

fn files(dir: &Path) -> BTreeSet<PathBuf> {
    let mut out = BTreeSet::new();
    for fx in std::fs::read_dir(dir).unwrap().flatten() {
        for f in std::fs::read_dir(fx.path()).unwrap().flatten() {
            out.insert(f.path().strip_prefix(dir).unwrap().to_path_buf());
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let base = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("determinism");
    let _ = std::fs::remove_dir_all(&base);
    let (a, b) = (base.join("a"), base.join("b"));
    run_all(&a)?;
    run_all(&b)?;
    let names = files(&a);
    ensure!(names == files(&b), "different file sets");
    ensure!(names.iter().any(|n| n.extension().is_some_and(|e| e == "dot")), "no DOT output");
    for n in &names {
        let (x, y) = (std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap());
        ensure!(x == y, "{} differs", n.display());
    }
    Ok(format!("{} files identical across two runs", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("example group is a highly branched Schottky group", criterion_1),
        ("example core graph", criterion_2),
        ("density criterion", criterion_3),
        ("non-example probe", criterion_4),
        ("K-thickness", criterion_5),
        ("growing census on the example", criterion_6),
        ("tree oracles", criterion_7),
        ("analytic identities", criterion_8),
        ("polynomial bound", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
