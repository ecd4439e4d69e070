//! Acceptance suite. One line per criterion; the process fails if any does.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syzlab_core::arith::FieldCtx;
use syzlab_core::fixtures::{lookup, registry, CONSENSUS_PRIMES};
use syzlab_core::harness::{
    canonical_plus_collinear, case_table, certify_gonality, collinear_triples, glue_inclusion_check, hrv_consistency, mu_f, pluricanonical_check,
    points_in_pencil_fiber, propagation_instance, stability_audit, Case, SheafProfile, Status,
};
use syzlab_core::koszul::{betti_table, differential_nnz, duality_mismatches, koszul_dim, koszul_dim_of, multi_prime, KoszulOptions, KoszulSetup};
use syzlab_core::linalg::{dense_rank, inverse, sparse_rank, DenseMat, SparseMat, Strategy};
use syzlab_core::plane::{canonical_bundle, section_space, PlaneCurve, TargetBasis};
use syzlab_core::Result;

type Outcome = Result<(bool, String)>;

struct Suite {
    failed: Vec<usize>,
}

impl Suite {
    fn run(&mut self, n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        println!("{} [{n}] {name}: {detail} ({:.2}s{limit})", if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
        if !ok {
            self.failed.push(n);
        }
    }
}

fn curve(name: &str) -> Result<PlaneCurve> {
    lookup(name)?.curve()
}

fn riemann_roch() -> Outcome {
    let mut bad = Vec::new();
    for r in registry() {
        let c = r.curve()?;
        let g = c.genus();
        let k = canonical_bundle(&c, &[])?;
        let h = |q: u32| -> Result<usize> { Ok(section_space(&c, &k.power(q))?.h0()) };
        let got = [h(1)?, h(2)?, h(3)?];
        let want = [g, 3 * (g - 1), 5 * (g - 1)];
        if got != want {
            bad.push(format!("{} h0(K, 2K, 3K) = {got:?}, expected {want:?}", r.name));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{} fixtures", registry().len()) } else { bad.join("; ") }))
}

fn quadric_count(opts: &KoszulOptions) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["F2", "F3", "F4", "F5", "F6"] {
        let c = curve(name)?;
        let g = c.genus() as u64;
        let dim = koszul_dim_of(&c, &canonical_bundle(&c, &[])?, 1, 1, opts)?.dim;
        ok &= dim == (g - 2) * (g - 3) / 2;
        parts.push(format!("{name} (g={g}) {dim}"));
    }
    Ok((ok, parts.join(", ")))
}

fn duality(opts: &KoszulOptions) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["F2", "F3", "F5"] {
        let c = curve(name)?;
        let g = c.genus();
        let setup = KoszulSetup::new(&c, &canonical_bundle(&c, &[])?, 2, TargetBasis::Adapted)?;
        let ps: Vec<usize> = (0..=g - 2).collect();
        let table = betti_table(&setup, &ps, &[1, 2], opts)?;
        let mism = duality_mismatches(&table, g);
        let k = (g - 1) / 2;
        let (a, b) = (table.get(k, 1).unwrap(), table.get(k - 1, 2).unwrap());
        ok &= mism.is_empty() && a == b;
        parts.push(format!("{name} row1 {:?}, K_{{{k},1}} = K_{{{},2}} = {a}/{b}", table.grid[0], k - 1));
    }
    Ok((ok, parts.join("; ")))
}

fn green_suite(opts: &KoszulOptions) -> Outcome {
    let cell = |name: &str, p: usize| -> Result<u64> {
        let c = curve(name)?;
        Ok(koszul_dim_of(&c, &canonical_bundle(&c, &[])?, p, 1, opts)?.dim)
    };
    let f2 = (cell("F2", 2)?, cell("F2", 3)?);
    let f3 = cell("F3", 2)?;
    let f4 = (cell("F4", 3)?, cell("F4", 4)?);
    let c5 = curve("F5")?;
    let cert = certify_gonality(&c5, 2000, opts)?;
    let v = hrv_consistency(&c5, &cert, opts)?;
    let f5 = v.computed[0].dim;
    // a nonzero middle cell forces a pencil of degree k + 1 = 4
    let f5_ok = v.status == Status::Pass && f5 != 0 && cert.hi <= 4;
    let ok = f2.0 != 0 && f2.1 == 0 && f3 == 0 && f4.0 != 0 && f4.1 == 0 && f5_ok;
    Ok((ok, format!("F2 K21={} K31={}; F3 K21={f3}; F4 K31={} K41={}; F5 K31={f5} with {}", f2.0, f2.1, f4.0, f4.1, cert.summary())))
}

fn collinear_instances(opts: &KoszulOptions) -> Outcome {
    let c = curve("F3")?;
    let cert = certify_gonality(&c, 2000, opts)?;
    let pencils: Vec<_> = cert.pencils.iter().filter(|w| w.degree == 4).cloned().collect();
    let mut valid = 0;
    let mut bad = Vec::new();
    let mut seed = 0;
    while valid < 20 && seed < 10 {
        for (line, xyz) in collinear_triples(&c, 20, seed) {
            if valid == 20 {
                break;
            }
            let m = canonical_plus_collinear(&c, &line, xyz)?;
            if points_in_pencil_fiber(&m.curve, &pencils, &m.indices)? {
                continue;
            }
            valid += 1;
            let setup = KoszulSetup::new(&m.curve, &m.bundle, 1, opts.target)?;
            let k3 = koszul_dim(&setup, 3, 1, opts)?.dim;
            let k2 = koszul_dim(&setup, 2, 1, opts)?.dim;
            if k3 != 0 || k2 == 0 {
                bad.push(format!("{:?}: K31={k3} K21={k2}", m.indices));
            }
        }
        seed += 1;
    }
    Ok((valid == 20 && bad.is_empty(), if bad.is_empty() { format!("{valid} triples, K31 = 0 and K21 ≠ 0") } else { bad.join("; ") }))
}

fn pluricanonical(opts: &KoszulOptions) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, want_zero) in [("F3", true), ("F2", false)] {
        let c = curve(name)?;
        let cert = certify_gonality(&c, 2000, opts)?;
        let v = pluricanonical_check(&c, 2, &cert, opts)?;
        let dim = v.computed[0].dim;
        ok &= v.status == Status::Pass && (dim == 0) == want_zero;
        parts.push(format!("{name} {} = {dim}", v.computed[0].cell));
    }
    Ok((ok, parts.join(", ")))
}

fn propagation(opts: &KoszulOptions) -> Outcome {
    let (f2, f3) = (curve("F2")?, curve("F3")?);
    let mut bad = Vec::new();
    for i in 0..20u64 {
        let c = if i % 2 == 0 { &f2 } else { &f3 };
        let v = propagation_instance(c, 1000 + i, opts)?;
        if v.status != Status::Pass {
            bad.push(format!("seed {}: {:?}", 1000 + i, v.computed));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "20 instances vanish".into() } else { bad.join("; ") }))
}

fn gluing(opts: &KoszulOptions) -> Outcome {
    let f8 = glue_inclusion_check(&curve("F8")?, 0, None, 0, opts)?;
    let f9 = glue_inclusion_check(&curve("F9")?, 0, None, 0, opts)?;
    let ok = f8.monotone() && (f8.a, f8.b, f8.c) == (0, 0, 0) && f9.monotone() && f9.c >= 1;
    Ok((ok, format!("F8 ({}, {}, {}); F9 ({}, {}, {})", f8.a, f8.b, f8.c, f9.a, f9.b, f9.c)))
}

fn stability() -> Outcome {
    let mut bad = Vec::new();
    for k in 2..=50i64 {
        for row in case_table(k)? {
            let want = match row.case {
                Case::I => Some(1),
                Case::Ii => Some(0),
                Case::Iii => Some(-1),
                Case::Iv => None,
            };
            let max_fe = row.admissible.iter().map(|a| a.0).max();
            if row.fe_bound != want || (want.is_some() && max_fe != want) || (want.is_none() && !row.admissible.is_empty()) {
                bad.push(format!("k={k} case {}", row.case));
            }
        }
    }
    let mu = mu_f(3);
    let spot = stability_audit(&SheafProfile { k: 3, case: Case::I, deg_fe: 1, deg_fx: None })?;
    let ok = bad.is_empty() && mu == num_rational::Ratio::new(-1, 6) && spot.mu_f == "-1/6" && spot.g_x == 5;
    Ok((ok, if bad.is_empty() { format!("k = 2..50 bounds 1/0/-1/empty; μ(F) = {} at g_X = {}", spot.mu_f, spot.g_x) } else { bad.join(", ") }))
}

fn linalg_oracle() -> Outcome {
    let f = FieldCtx::new(10007)?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut mismatches = 0;
    for _ in 0..400 {
        let (rows, cols) = (rng.gen_range(1..=400), rng.gen_range(1..=400));
        let density = rng.gen_range(0.0..0.05);
        let mut trips = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    trips.push((r, c, rng.gen_range(1..f.p())));
                }
            }
        }
        let m = SparseMat::from_triplets(f, rows, cols, trips);
        if sparse_rank(&m, Strategy::Markowitz) != dense_rank(f, rows, cols, m.to_dense().data().to_vec()) {
            mismatches += 1;
        }
    }
    let mut planted_bad = 0;
    for _ in 0..50 {
        let (n, m) = (rng.gen_range(2..=60), rng.gen_range(2..=60));
        let r = rng.gen_range(0..=n.min(m));
        let inv = |rng: &mut ChaCha8Rng, n: usize| loop {
            let a = DenseMat::from_vec(f, n, n, (0..n * n).map(|_| rng.gen_range(0..f.p())).collect());
            if inverse(&a).is_some() {
                break a;
            }
        };
        let (u, v) = (inv(&mut rng, n), inv(&mut rng, m));
        let mut d = DenseMat::zeros(f, n, m);
        for i in 0..r {
            d.set(i, i, 1);
        }
        if sparse_rank(&SparseMat::from_dense(&u.mul(&d).mul(&v)), Strategy::Markowitz) != r {
            planted_bad += 1;
        }
    }
    Ok((mismatches == 0 && planted_bad == 0, format!("{mismatches}/400 sparse-dense mismatches, {planted_bad}/50 planted ranks missed")))
}

fn multi_prime_stability(opts: &KoszulOptions) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["F2", "F3", "F4", "F5"] {
        let r = lookup(name)?;
        let g = r.declared.genus;
        let cells: Vec<(usize, u32)> = [1u32, 2].iter().flat_map(|&q| (0..=g - 2).map(move |p| (p, q))).collect();
        let rep = multi_prime(r, |c| canonical_bundle(c, &[]), &cells, &CONSENSUS_PRIMES, opts)?;
        let stable = rep.skipped.is_empty() && rep.cells.iter().all(|c| c.stable);
        ok &= stable;
        parts.push(format!("{name} {} cells {}", rep.cells.len(), if stable { "stable" } else { "UNSTABLE" }));
    }
    Ok((ok, parts.join(", ")))
}

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse::<u64>().ok().map(|kb| kb * 1024)
}

fn performance(opts: &KoszulOptions) -> Outcome {
    let c = curve("F7")?;
    let setup = KoszulSetup::new(&c, &canonical_bundle(&c, &[])?, 1, TargetBasis::Adapted)?;
    let mut reports = Vec::new();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        let r = pool.install(|| koszul_dim(&setup, 5, 1, opts))?;
        reports.push(r);
    }
    let same = |a: &syzlab_core::koszul::KoszulReport, b: &syzlab_core::koszul::KoszulReport| {
        (a.dims, a.rank_in, a.rank_out, a.dim) == (b.dims, b.rank_in, b.rank_out, b.dim)
    };
    let r = &reports[0];
    let shapes = r.rows == 9900 && r.cols == 5082 && r.dims[0] == 462;
    // sparse columns at 8 bytes per entry, plus a fully densified remainder
    let nnz = differential_nnz(setup.tensor(1), 5) + differential_nnz(setup.tensor(0), 6);
    let estimate = nnz * 8 + 4 * (r.rows * r.cols + r.cols * r.dims[0]);
    let rss = peak_rss_bytes();
    let cap = 4u64 << 30;
    let ok = shapes && same(&reports[0], &reports[1]) && estimate < cap && rss.is_none_or(|b| b < cap);
    Ok((
        ok,
        format!(
            "K_{{5,1}} = {} on {}x{} and {}x{}, identical at 1 and 4 threads: {}, {} and {} ms; memory estimate {} MiB, peak RSS {}",
            r.dim,
            r.rows,
            r.cols,
            r.cols,
            r.dims[0],
            same(&reports[0], &reports[1]),
            reports[0].ms,
            reports[1].ms,
            estimate >> 20,
            rss.map_or("unavailable".into(), |b| format!("{} MiB", b >> 20))
        ),
    ))
}

fn main() {
    // `cargo test -- --list` and filters from the default harness are not supported
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let opts = KoszulOptions::default();
    let secs = |s: u64| Some(Duration::from_secs(s));
    let mut suite = Suite { failed: Vec::new() };
    suite.run(1, "Riemann-Roch audit", secs(5), riemann_roch);
    suite.run(2, "quadric count", None, || quadric_count(&opts));
    suite.run(3, "canonical duality", secs(120), || duality(&opts));
    suite.run(4, "Green and HRV fixtures", secs(300), || green_suite(&opts));
    suite.run(5, "collinear triples on F3", secs(600), || collinear_instances(&opts));
    suite.run(6, "pluricanonical vanishing", secs(600), || pluricanonical(&opts));
    suite.run(7, "propagation", None, || propagation(&opts));
    suite.run(8, "gluing chain", None, || gluing(&opts));
    suite.run(9, "stability audit", None, stability);
    suite.run(10, "linear algebra oracle", None, linalg_oracle);
    suite.run(11, "multi-prime stability", None, || multi_prime_stability(&opts));
    suite.run(12, "F7 middle cell", secs(1800), || performance(&opts));
    if suite.failed.is_empty() {
        println!("acceptance: 12/12 criteria pass");
    } else {
        println!("acceptance: failed {:?}", suite.failed);
        std::process::exit(1);
    }
}
