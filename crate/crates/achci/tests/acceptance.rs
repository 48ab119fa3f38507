//! End-to-end acceptance checks for the full pipeline. Each test covers one
//! numbered criterion and prints a single `ACCEPTANCE PASS` line when it
//! holds. Shared artifacts (generated instances, cost-matrix caches) live
//! under `target/acceptance` so reruns stay fast.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use achci::bench::{ensure_corpus, generate_instance, RunConfig};
use achci::geometry::{convex_hull, generate_separators, Point, Segment, SeparatorSet, SeparatorSource};
use achci::heuristics::{achci, brute_force_optimal, nearest_neighbor};
use achci::mds::{embed_2d, gram_from_costs};
use achci::shortest_paths::{
    all_pairs_costs, build_visibility_graph, deviation_factor, CostMatrix, PathError,
};
use achci::tsplib::Instance;

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn work_dir() -> PathBuf {
    let dir = workspace_root().join("target/acceptance");
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// The benchmark manifest with all paths redirected into the shared
/// acceptance work directory.
fn acceptance_config() -> RunConfig {
    let mut cfg = RunConfig::load(&workspace_root().join("bench.toml")).unwrap();
    let dir = work_dir();
    cfg.data_dir = dir.join("data");
    cfg.cache_dir = Some(dir.join("cache"));
    cfg.output_dir = dir.join("out");
    cfg.timings = false;
    cfg
}

fn pipeline_costs(inst: &Instance, k: usize, cache: Option<&Path>) -> CostMatrix {
    let seps = generate_separators(inst, k).unwrap();
    achci::bench::cost_matrix_cached(inst, &seps, cache).unwrap()
}

#[test]
fn criterion_1_euclidean_recovery() {
    let t0 = Instant::now();
    let cfg = acceptance_config();
    let mut specs = cfg.instances.clone();
    specs.sort_by_key(|s| (s.n, s.name.clone()));
    for spec in specs.iter().take(20) {
        let inst = generate_instance(&spec.name, spec.n);
        let c = pipeline_costs(&inst, 0, cfg.cache_dir.as_deref());

        let df = deviation_factor(&c, &inst).unwrap();
        assert!((df - 1.0).abs() <= 1e-9, "{}: df = {df}", spec.name);

        let e = embed_2d(&gram_from_costs(&c).unwrap()).unwrap();
        for i in 0..inst.n() {
            for j in (i + 1)..inst.n() {
                let d = e.coords[i].dist(e.coords[j]);
                let target = c.at(i, j);
                assert!(
                    (d - target).abs() <= 1e-6 * target,
                    "{}: pair ({i}, {j}) embedded {d} vs {target}",
                    spec.name
                );
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs:.1} s, budget 60 s");
    println!("ACCEPTANCE PASS criterion 1: Euclidean recovery on 20 instances ({secs:.1} s)");
}

/// True iff the hull vertices appear in `tour` in hull cyclic order, in
/// either direction.
fn hull_order_respected(hull: &[usize], tour: &[usize]) -> bool {
    let on_hull: HashSet<usize> = hull.iter().copied().collect();
    let seq: Vec<usize> = tour.iter().copied().filter(|v| on_hull.contains(v)).collect();
    if hull.len() < 3 {
        return seq.len() == hull.len();
    }
    let mut rev = hull.to_vec();
    rev.reverse();
    let is_rotation = |target: &[usize]| {
        let m = target.len();
        (0..m).any(|shift| (0..m).all(|i| seq[i] == target[(i + shift) % m]))
    };
    seq.len() == hull.len() && (is_rotation(hull) || is_rotation(&rev))
}

#[test]
fn criterion_2_oracle_optimality_gap() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC2);
    for trial in 0..200u32 {
        let n = rng.gen_range(5..=10);
        let k = if trial % 2 == 0 { 0 } else { 2 };
        let coords: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        let inst = Instance::new(&format!("rand{trial}"), coords).unwrap();
        let seps = generate_separators(&inst, k).unwrap();
        let g = build_visibility_graph(&inst, &seps).unwrap();
        let c = all_pairs_costs(&g).unwrap();

        let e = embed_2d(&gram_from_costs(&c).unwrap()).unwrap();
        let heuristic = achci(&c, &e).unwrap();
        let exact = brute_force_optimal(&c).unwrap();
        assert!(
            heuristic.cost >= exact.cost - 1e-9,
            "trial {trial}: achci {} below optimum {}",
            heuristic.cost,
            exact.cost
        );

        if k == 0 {
            let hull = convex_hull(&inst.coords);
            assert!(
                hull_order_respected(&hull, &exact.order),
                "trial {trial}: optimal tour {:?} breaks hull order {:?}",
                exact.order,
                hull
            );
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 300.0, "took {secs:.1} s, budget 300 s");
    println!("ACCEPTANCE PASS criterion 2: 200 instances at or above the exact optimum ({secs:.1} s)");
}

#[test]
fn criterion_3_scaled_benchmark() {
    let t0 = Instant::now();
    let mut cfg = acceptance_config();
    cfg.k_values = vec![0, 2, 4, 8];
    cfg.max_n = Some(300);
    cfg.output_dir = work_dir().join("out3");
    ensure_corpus(&cfg).unwrap();
    let report = achci::bench::run_suite(&cfg).unwrap();

    assert!(report.failures.is_empty(), "failures: {:?}", report.failures);
    assert_eq!(report.rows.len(), cfg.selected_instances().len() * 4);
    let win_rate = report.summary.win_rate;
    let mean = report.summary.mean_reduction_pct;
    assert!(win_rate >= 0.85, "win rate {win_rate}");
    assert!((6.0..=16.0).contains(&mean), "mean reduction {mean}%");

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 1800.0, "took {secs:.1} s, budget 1800 s");
    println!(
        "ACCEPTANCE PASS criterion 3: {} rows, win rate {:.1}%, mean reduction {:.2}% ({secs:.1} s)",
        report.rows.len(),
        100.0 * win_rate,
        mean
    );
}

#[test]
fn criterion_4_spot_check_signs() {
    let cfg = acceptance_config();
    let mut out = Vec::new();
    for name in ["eil51", "berlin52", "kroA100", "pr76"] {
        let spec = cfg.instances.iter().find(|s| s.name == name).unwrap();
        let inst = generate_instance(name, spec.n);
        let c = pipeline_costs(&inst, 0, cfg.cache_dir.as_deref());
        let nn = nearest_neighbor(&c, 0);
        let e = embed_2d(&gram_from_costs(&c).unwrap()).unwrap();
        let tour = achci(&c, &e).unwrap();
        let reduction = 100.0 * (nn.cost - tour.cost) / nn.cost;
        assert!(reduction > 0.0, "{name}: reduction {reduction}%");
        out.push((name, reduction));
    }
    // Frozen regression goldens from the first verified run; the pipeline is
    // fully deterministic, so any drift here means behavior changed.
    let golden = [
        ("eil51", 15.652217827757),
        ("berlin52", 19.409606188896),
        ("kroA100", 17.142202052841),
        ("pr76", 14.328425571608),
    ];
    for ((name, reduction), (gname, gvalue)) in out.iter().zip(golden.iter()) {
        assert_eq!(name, gname);
        assert!(
            (reduction - gvalue).abs() < 1e-9,
            "{name}: reduction {reduction} drifted from golden {gvalue}"
        );
    }
    let line: Vec<String> = out.iter().map(|(n, r)| format!("{n} {r:+.4}%")).collect();
    println!("ACCEPTANCE PASS criterion 4: positive k=0 reductions ({})", line.join(", "));
}

#[test]
fn criterion_5_runtime_exponent() {
    let t0 = Instant::now();
    let mut samples = Vec::new();
    for &n in &[100usize, 200, 400, 800, 1600] {
        // Uniform point clouds; the grid layout of the benchmark corpus is
        // irrelevant to runtime and uniform keeps the timing comparable
        // across sizes.
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let coords: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
            .collect();
        let inst = Instance::new_unchecked(&format!("scale{n}"), coords);
        let c = CostMatrix::euclidean(&inst);
        // Best of two runs per size to damp scheduler noise.
        let mut secs = f64::INFINITY;
        for _ in 0..2 {
            let t1 = Instant::now();
            let e = embed_2d(&gram_from_costs(&c).unwrap()).unwrap();
            let tour = achci(&c, &e).unwrap();
            secs = secs.min(t1.elapsed().as_secs_f64());
            assert_eq!(tour.order.len(), n);
        }
        samples.push((n as f64, secs));
    }
    let (exponent, _) = achci::bench::fit_power_law(&samples).unwrap();
    assert!(
        (2.3..=3.3).contains(&exponent),
        "fitted exponent {exponent}, samples {samples:?}"
    );
    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 1200.0, "took {secs:.1} s, budget 1200 s");
    println!("ACCEPTANCE PASS criterion 5: runtime exponent {exponent:.2} ({secs:.1} s)");
}

/// Exact i128 test: does the closed path p–q meet the open interior of the
/// separator s–t? All coordinates integral.
fn oracle_blocks(p: (i64, i64), q: (i64, i64), s: (i64, i64), t: (i64, i64)) -> bool {
    fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
        (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
    }
    if p == q {
        return false;
    }
    let o1 = cross(s, t, p).signum();
    let o2 = cross(s, t, q).signum();
    let o3 = cross(p, q, s).signum();
    let o4 = cross(p, q, t).signum();
    if o1 != 0 && o2 != 0 && o1 != o2 && o3 != 0 && o4 != 0 && o3 != o4 {
        return true;
    }
    if o1 == 0 && o2 == 0 {
        let key = |v: (i64, i64)| if (t.0 - s.0).abs() >= (t.1 - s.1).abs() { v.0 } else { v.1 };
        let (pl, ph) = (key(p).min(key(q)), key(p).max(key(q)));
        let (sl, sh) = (key(s).min(key(t)), key(s).max(key(t)));
        return ph.min(sh) > pl.max(sl);
    }
    let on_interior = |v: (i64, i64)| {
        cross(s, t, v) == 0
            && v != s
            && v != t
            && v.0 >= s.0.min(t.0)
            && v.0 <= s.0.max(t.0)
            && v.1 >= s.1.min(t.1)
            && v.1 <= s.1.max(t.1)
    };
    (o1 == 0 && on_interior(p)) || (o2 == 0 && on_interior(q))
}

#[test]
fn criterion_6_geometry_and_paths_vs_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC6);
    let mut scenes = 0usize;
    let mut disconnected = 0usize;
    while scenes < 500 {
        // Distinct integer instance points on a small grid.
        let n = rng.gen_range(3..=10usize);
        let mut pts: Vec<(i64, i64)> = Vec::new();
        while pts.len() < n {
            let p = (rng.gen_range(0..=12i64), rng.gen_range(0..=12i64));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let m = rng.gen_range(0..=4usize);
        let segs: Vec<((i64, i64), (i64, i64))> = (0..m)
            .map(|_| loop {
                let a = (rng.gen_range(0..=12i64), rng.gen_range(0..=12i64));
                let b = (rng.gen_range(0..=12i64), rng.gen_range(0..=12i64));
                if a != b {
                    return (a, b);
                }
            })
            .collect();
        // A point resting on a separator interior is rejected by the
        // builder; skip those scenes (exact check, degenerate paths only).
        let on_interior = |v: (i64, i64), (s, t): ((i64, i64), (i64, i64))| {
            let c = (t.0 - s.0) as i128 * (v.1 - s.1) as i128
                - (t.1 - s.1) as i128 * (v.0 - s.0) as i128;
            c == 0
                && v != s
                && v != t
                && v.0 >= s.0.min(t.0)
                && v.0 <= s.0.max(t.0)
                && v.1 >= s.1.min(t.1)
                && v.1 <= s.1.max(t.1)
        };
        if pts.iter().any(|&p| segs.iter().any(|&s| on_interior(p, s))) {
            continue;
        }
        scenes += 1;

        let inst = Instance::new(
            "scene",
            pts.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect(),
        )
        .unwrap();
        let seps = SeparatorSet {
            k: m,
            segments: segs
                .iter()
                .map(|&((ax, ay), (bx, by))| {
                    Segment::new(
                        Point::new(ax as f64, ay as f64),
                        Point::new(bx as f64, by as f64),
                    )
                    .unwrap()
                })
                .collect(),
            source: SeparatorSource { instance: "scene".into(), k: m },
        };
        let g = build_visibility_graph(&inst, &seps).unwrap();

        // Oracle vertex list mirrors the builder: instance points, then the
        // endpoint pair of each separator.
        let mut verts = pts.clone();
        for &(a, b) in &segs {
            verts.push(a);
            verts.push(b);
        }
        let v = verts.len();
        let mut oracle_adj: Vec<Vec<usize>> = vec![Vec::new(); v];
        let mut dist = vec![f64::INFINITY; v * v];
        for i in 0..v {
            dist[i * v + i] = 0.0;
            for j in (i + 1)..v {
                let blocked = verts[i] != verts[j]
                    && segs.iter().any(|&(s, t)| oracle_blocks(verts[i], verts[j], s, t));
                if !blocked {
                    oracle_adj[i].push(j);
                    oracle_adj[j].push(i);
                    let dx = (verts[i].0 - verts[j].0) as f64;
                    let dy = (verts[i].1 - verts[j].1) as f64;
                    let w = (dx * dx + dy * dy).sqrt();
                    dist[i * v + j] = w;
                    dist[j * v + i] = w;
                }
            }
        }
        // Edge sets must agree exactly.
        for i in 0..v {
            let mut got: Vec<usize> = g.adj[i].iter().map(|&(j, _)| j as usize).collect();
            got.sort_unstable();
            assert_eq!(got, oracle_adj[i], "scene {scenes}: adjacency of vertex {i}");
        }
        // Floyd–Warshall as the distance oracle.
        for mid in 0..v {
            for i in 0..v {
                let dim = dist[i * v + mid];
                if !dim.is_finite() {
                    continue;
                }
                for j in 0..v {
                    let alt = dim + dist[mid * v + j];
                    if alt < dist[i * v + j] {
                        dist[i * v + j] = alt;
                    }
                }
            }
        }
        let expect_connected =
            (0..n).all(|i| (0..n).all(|j| dist[i * v + j].is_finite()));
        match all_pairs_costs(&g) {
            Ok(c) => {
                assert!(expect_connected, "scene {scenes}: oracle sees a disconnected pair");
                for i in 0..n {
                    for j in 0..n {
                        assert!(
                            (c.at(i, j) - dist[i * v + j]).abs() <= 1e-9,
                            "scene {scenes}: distance ({i}, {j}) {} vs oracle {}",
                            c.at(i, j),
                            dist[i * v + j]
                        );
                    }
                }
            }
            Err(PathError::Disconnected { .. }) => {
                assert!(!expect_connected, "scene {scenes}: spurious disconnection");
                disconnected += 1;
            }
            Err(other) => panic!("scene {scenes}: {other}"),
        }
    }
    println!(
        "ACCEPTANCE PASS criterion 6: 500 scenes match exact oracles ({disconnected} disconnected)"
    );
}

#[test]
fn criterion_7_suite_determinism() {
    let mut cfg = acceptance_config();
    cfg.k_values = vec![0, 2, 4, 8];
    cfg.max_n = Some(300);
    cfg.timings = false;
    ensure_corpus(&cfg).unwrap();

    let mut csvs = Vec::new();
    for pass in ["out7a", "out7b"] {
        cfg.output_dir = work_dir().join(pass);
        let report = achci::bench::run_suite(&cfg).unwrap();
        assert!(report.failures.is_empty());
        csvs.push(fs::read(cfg.output_dir.join("rows.csv")).unwrap());
    }
    assert!(csvs[0] == csvs[1], "row CSVs differ between identical runs");
    assert!(!csvs[0].is_empty());
    println!(
        "ACCEPTANCE PASS criterion 7: suite rows.csv byte-identical across runs ({} bytes)",
        csvs[0].len()
    );
}
