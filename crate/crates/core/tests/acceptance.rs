//! Acceptance suite: one line per criterion, run with
//! `cargo test -p lipcount --test acceptance`.
//!
//! Each criterion is a list of named checks. A criterion passes when every
//! check passes and it finishes inside its time limit. Checks listed in
//! `KNOWN_FALSE` assert claims that exact arithmetic refutes; they are run
//! and reported as FAIL, but do not fail the process. If one of them starts
//! passing the process fails, so the list cannot go stale.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lipcount::continuum::{
    grid_bound_report, nystrom_top, psi_lower_bound, solve_alpha, solve_beta, solve_psi, solve_zeta, Kernel1D, Mesh,
};
use lipcount::exact::{
    count, count_bruteforce, count_closed_form, count_pinned, ehrhart_fit, pinned_profile, ClosedForm, CountOptions,
    LipCount, PinSpec,
};
use lipcount::graph::{components, make_family, make_grid, make_random_tree, sample_er, FamilyKind, Graph, RngSeed};
use lipcount::random_lab::{
    bound_report, giant_fraction_prediction, lemma321_margin, lll_sampler, triple_sum_success, LllConfig,
};
use lipcount::strip::{
    extrapolate_limit, rayleigh_lower_bound, strip_count_exact, top_eigenvalue, OperatorKind, TransferOperator,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

const KNOWN_FALSE: &[&str] = &["9c"];

struct Check {
    id: &'static str,
    ok: bool,
    detail: String,
}

fn check(id: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check { id, ok, detail: detail.into() }
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Vec<Check>,
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria = [
        Criterion { number: 1, name: "closed-form oracles", limit: secs(10), run: c1 },
        Criterion { number: 2, name: "Ehrhart interpolation", limit: secs(600), run: c2 },
        Criterion { number: 3, name: "strip DP vs brute force", limit: secs(60), run: c3 },
        Criterion { number: 4, name: "band constant", limit: secs(30), run: c4 },
        Criterion { number: 5, name: "two-row constant", limit: secs(600), run: c5 },
        Criterion { number: 6, name: "zeta and psi", limit: secs(600), run: c6 },
        Criterion { number: 7, name: "Rayleigh lower bound", limit: secs(600), run: c7 },
        Criterion { number: 8, name: "random-graph bounds", limit: secs(600), run: c8 },
        Criterion { number: 9, name: "triple-sum kernel", limit: secs(600), run: c9 },
        Criterion { number: 10, name: "property suites", limit: secs(6 * 60), run: c10 },
    ];
    let mut unexpected = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || *f == c.number.to_string()) {
            continue;
        }
        let start = Instant::now();
        let checks = (c.run)();
        let elapsed = start.elapsed();
        let timely = elapsed <= c.limit;
        let pass = timely && checks.iter().all(|k| k.ok);
        println!(
            "criterion {:>2} {:<24} {}  ({:.2}s, limit {}s)",
            c.number,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        for k in &checks {
            let known = KNOWN_FALSE.contains(&k.id);
            let tag = match (k.ok, known) {
                (true, false) => "ok  ",
                (false, false) => "FAIL",
                (false, true) => "FAIL (known false claim)",
                (true, true) => "PASS (expected to fail: update KNOWN_FALSE)",
            };
            println!("    [{}] {tag} {}", k.id, k.detail);
            if k.ok == known {
                unexpected += 1;
            }
        }
        if !timely {
            println!("    time limit exceeded");
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn close(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn opts() -> CountOptions {
    CountOptions::default()
}

fn c1() -> Vec<Check> {
    let mut trees_ok = true;
    let mut cases = 0;
    for seed in 0..20 {
        for n in 1..=7 {
            let t = make_random_tree(n, RngSeed(seed)).unwrap();
            for h in 0..=5u32 {
                let brute = count_bruteforce(&t, h, opts()).unwrap().count;
                trees_ok &= brute == count_closed_form(ClosedForm::Tree, n, h).unwrap();
                trees_ok &= brute.0 == BigUint::from(2 * h + 1).pow(n as u32 - 1);
                cases += 1;
            }
        }
    }
    let mut complete_ok = true;
    for n in 1..=5 {
        let g = make_family(FamilyKind::Complete, n).unwrap();
        for h in 0..=5u32 {
            let brute = count_bruteforce(&g, h, opts()).unwrap().count;
            let formula = BigUint::from(h + 1).pow(n as u32) - BigUint::from(h).pow(n as u32);
            complete_ok &= brute.0 == formula && brute == count_closed_form(ClosedForm::Complete, n, h).unwrap();
        }
    }
    vec![
        check("1a", trees_ok, format!("trees n <= 7, 20 seeds, h <= 5: {cases} cases equal (2h+1)^(n-1)")),
        check("1b", complete_ok, "K_n, n <= 5, h <= 5 equal (h+1)^n - h^n"),
    ]
}

fn fixture_graphs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=7 {
        for (name, kind) in [("path", FamilyKind::Path), ("star", FamilyKind::Star), ("complete", FamilyKind::Complete)] {
            out.push((format!("{name}{n}"), make_family(kind, n).unwrap()));
        }
        if n >= 3 {
            out.push((format!("cycle{n}"), make_family(FamilyKind::Cycle, n).unwrap()));
        }
    }
    for (r, c) in [(2, 2), (2, 3)] {
        out.push((format!("grid{r}x{c}"), make_grid(r, c).unwrap()));
    }
    let mut seed = 0;
    let mut random = 0;
    while random < 6 {
        let n = 5 + random % 3;
        let g = sample_er(n, 3.0, RngSeed(seed)).unwrap();
        seed += 1;
        if g.component_count() == 1 {
            out.push((format!("er{n}-seed{}", seed - 1), g));
            random += 1;
        }
    }
    out
}

fn c2() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let fixtures = fixture_graphs();
    for (name, g) in &fixtures {
        let n = g.n() as u32;
        let data: Vec<(u32, LipCount)> = (0..n).map(|h| (h, LipCount(count(g, h).unwrap()))).collect();
        let poly = ehrhart_fit(g, &data).unwrap();
        let held_out = BigRational::from_integer(BigInt::from(count(g, n).unwrap()));
        if poly.evaluate(n as i64) != held_out || !poly.within_growth_bounds() {
            failures.push(name.clone());
        }
    }
    checks.push(check(
        "2a",
        failures.is_empty(),
        format!("{} connected fixtures, n <= 7: interpolant predicts h = n exactly; failures {failures:?}", fixtures.len()),
    ));
    checks
}

fn c3() -> Vec<Check> {
    let mut bad = Vec::new();
    let mut cases = 0;
    for m in 1..=12usize {
        for n in 1..=12 / m {
            let g = make_grid(m, n).unwrap();
            for h in 0..=2 {
                cases += 1;
                if strip_count_exact(m, n, h).unwrap() != count_bruteforce(&g, h, opts()).unwrap().count {
                    bad.push((m, n, h));
                }
            }
        }
    }
    vec![check("3a", bad.is_empty(), format!("{cases} (m, n, h) cases with m*n <= 12, h <= 2; mismatches {bad:?}"))]
}

fn normalized(kind: OperatorKind, h: u32) -> f64 {
    top_eigenvalue(&TransferOperator::new(kind, h).unwrap(), 1e-12).unwrap().normalized
}

fn extrapolated(kind: OperatorKind, hs: &[u32]) -> (f64, bool) {
    let pts: Vec<(f64, f64)> = hs.iter().map(|&h| (h as f64, normalized(kind, h))).collect();
    let e = extrapolate_limit(&pts).unwrap();
    (e.limit, e.stable())
}

fn c4() -> Vec<Check> {
    let beta = solve_beta();
    let (limit, stable) = extrapolated(OperatorKind::Band, &[50, 100, 200, 400]);
    let nys = nystrom_top(Kernel1D::BandIndicator, &Mesh::midpoint(2000).unwrap()).unwrap().lambda;
    vec![
        check(
            "4a",
            close(limit, beta, 2e-3) && close(limit, 1.5542, 2e-3),
            format!("band extrapolation {limit:.6} (stable fit: {stable}) vs 1/arctan(3/4) = {beta:.6}, quoted 1.5542, tol 2e-3"),
        ),
        check(
            "4b",
            close(nys, beta, 5e-4) && close(nys, 1.5542, 5e-4),
            format!("Nystrom band N = 2000: {nys:.6}, tol 5e-4"),
        ),
    ]
}

fn c5() -> Vec<Check> {
    let (limit, stable) = extrapolated(OperatorKind::FreeStrip(2), &[50, 100, 200]);
    let alpha = solve_alpha();
    let residual = ((1.0 / alpha).tan() - alpha).abs();
    let nys = nystrom_top(Kernel1D::Tent, &Mesh::midpoint(2000).unwrap()).unwrap().lambda;
    vec![
        check(
            "5a",
            close(limit, 1.6438, 2e-3),
            format!("free-strip(2) extrapolation {limit:.6} (stable fit: {stable}) vs 1.6438, tol 2e-3; alpha*sqrt2 = {:.6}", alpha * 2f64.sqrt()),
        ),
        check("5b", residual < 1e-9, format!("alpha = {alpha:.10}, |tan(1/alpha) - alpha| = {residual:.1e}")),
        check(
            "5c",
            close(nys, 2.0 * alpha * alpha, 5e-4),
            format!("Nystrom tent N = 2000: {nys:.6} vs 2 alpha^2 = {:.6}, tol 5e-4", 2.0 * alpha * alpha),
        ),
    ]
}

fn c6() -> Vec<Check> {
    let zeta = solve_zeta(64).unwrap().value;
    let psi = solve_psi(32).unwrap().value;
    let (pinned, _) = extrapolated(OperatorKind::PinnedStrip(2), &[10, 15, 20]);
    let (free3, _) = extrapolated(OperatorKind::FreeStrip(3), &[10, 15, 20]);
    let report = grid_bound_report(64, 32).unwrap();
    vec![
        check("6a", close(zeta, 1.4895, 0.02), format!("zeta(N = 64) = {zeta:.6} vs 1.4895, tol 0.02")),
        check("6b", close(psi, 1.553, 0.02), format!("psi(N = 32) = {psi:.6} vs 1.553, tol 0.02")),
        check("6c", close(pinned, zeta, 0.02), format!("pinned-strip(2) extrapolation {pinned:.6} vs zeta, tol 0.02")),
        check("6d", close(free3, psi, 0.02), format!("free-strip(3) extrapolation {free3:.6} vs psi, tol 0.02")),
        check(
            "6e",
            close(report.improved.lower, 1.3685, 0.02)
                && close(report.improved.upper, 1.4895, 0.02)
                && close(report.improved.lower, psi_lower_bound(psi), 1e-12),
            format!("improved grid bounds ({:.6}, {:.6}) vs (1.3685, 1.4895), tol 0.02", report.improved.lower, report.improved.upper),
        ),
    ]
}

fn c7() -> Vec<Check> {
    let r = rayleigh_lower_bound(2, 200).unwrap();
    let v = r.normalized();
    vec![check("7a", v >= 1.351 - 0.01, format!("free-strip(2), h = 200: bound^(1/2)/h = {v:.6} >= 1.341"))]
}

fn c8() -> Vec<Check> {
    let mut checks = Vec::new();
    // independent recomputation in log space
    let mut worst: f64 = 0.0;
    for d in [5.0f64, 10.0, 100.0] {
        let r = bound_report(d);
        let c = (1.0 - 4.0 / d).sqrt() / d;
        let t = (-d / 4.0).exp();
        let lower = ((1.0 + c).ln() + 5.0 * t * (1.0 - c).ln() + 0.5 * (1.0 - 1.0 / (d - 1.0)).ln()).exp();
        let a = 2.0 * d.ln() / d;
        let upper = (t * 2f64.ln() + d * a * a / (1.0 - t)).exp();
        worst = worst.max((r.lower_exact.unwrap() - lower).abs());
        if d >= 9.0 {
            worst = worst.max((r.upper_exact.unwrap() - upper).abs());
        } else if r.upper_exact.is_some() {
            worst = f64::INFINITY;
        }
        worst = worst.max((r.lower_asymptotic - (1.0 + 0.5 / d)).abs());
        worst = worst.max((r.upper_asymptotic - (1.0 + 4.0 * d.ln() * d.ln() / d)).abs());
    }
    checks.push(check("8a", worst <= 1e-10, format!("bound_report at d in {{5, 10, 100}}: max deviation {worst:.1e}")));

    let grid: Vec<f64> = (0..=60).map(|i| 9.0 * (1e6f64 / 9.0).powf(i as f64 / 60.0)).collect();
    let min_margin = grid.iter().map(|&d| lemma321_margin(d).unwrap().margin).fold(f64::INFINITY, f64::min);
    checks.push(check("8b", min_margin > 0.0, format!("margin on 61-point log grid over [9, 1e6]: min {min_margin:.3e}")));

    for (id, d) in [("8c", 1.5f64), ("8d", 2.0), ("8e", 4.0)] {
        let predicted = giant_fraction_prediction(d).unwrap();
        let fractions: Vec<f64> = (0..10)
            .map(|s| {
                let g = sample_er(20_000, d, RngSeed(1000 + s)).unwrap();
                components(&g).giant_size() as f64 / 20_000.0
            })
            .collect();
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        let lo = fractions.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = fractions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        checks.push(check(
            id,
            close(mean, predicted, 0.02),
            format!(
                "giant fraction d = {d}: predicted {predicted:.4}, simulated mean {mean:.4} over 10 seeds \
                 (range {lo:.4}..{hi:.4}, n = 20000), tol 0.02"
            ),
        ));
    }
    checks
}

fn c9() -> Vec<Check> {
    let r1 = triple_sum_success(1);
    let limit = BigRational::new(23.into(), 24.into());
    let big = triple_sum_success(10_000);
    let gap = (&big - &limit).abs();
    let tol = BigRational::new(1.into(), 1000.into());
    let values: Vec<BigRational> = (0..=100).map(triple_sum_success).collect();
    let first_rise = values.windows(2).position(|w| w[1] > w[0]);
    let from_one_nondecreasing = values[1..].windows(2).all(|w| w[1] >= w[0]);
    let below_limit = values[1..].iter().all(|v| *v < limit);
    vec![
        check("9a", r1 == BigRational::new(25.into(), 27.into()), format!("h = 1: {r1}")),
        check("9b", gap <= tol, format!("h = 10^4: |p - 23/24| = {:.2e}", to_f64(&gap))),
        check(
            "9c",
            first_rise.is_none(),
            match first_rise {
                None => "nonincreasing over h in 0..100".to_string(),
                Some(h) => format!(
                    "nonincreasing over h in 0..100: p({}) = {} < p({}) = {}",
                    h,
                    values[h],
                    h + 1,
                    values[h + 1]
                ),
            },
        ),
        check(
            "9d",
            from_one_nondecreasing && below_limit && values[0] == BigRational::from_integer(1.into()),
            "observed shape: p(0) = 1, then nondecreasing for h >= 1 and strictly below 23/24",
        ),
    ]
}

fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
            Graph::new(n, edges).unwrap()
        })
        .filter(|g| g.component_count() == 1)
        .collect()
}

fn c10() -> Vec<Check> {
    let mut checks = Vec::new();

    let t = Instant::now();
    let mut ok = true;
    let mut graphs = 0;
    for n in 2..=5 {
        for g in connected_graphs(n) {
            graphs += 1;
            for h in 0..=3 {
                let base = count(&g, h).unwrap();
                ok &= (0..n).all(|r| count(&g.with_roots(&[r]).unwrap(), h).unwrap() == base);
            }
        }
    }
    for seed in 0..40 {
        let g = sample_er(6, 2.5, RngSeed(seed)).unwrap();
        if g.component_count() == 1 {
            graphs += 1;
            for h in 0..=3 {
                let base = count(&g, h).unwrap();
                ok &= (0..6).all(|r| count(&g.with_roots(&[r]).unwrap(), h).unwrap() == base);
            }
        }
    }
    checks.push(timed("10a", ok, t, format!("root invariance: {graphs} connected graphs, n <= 6, h <= 3")));

    let t = Instant::now();
    let mut ok = true;
    let mut pairs = 0;
    for seed in 0..60 {
        let g = sample_er(6, 2.0, RngSeed(seed)).unwrap();
        let comps = components(&g);
        for u in 0..6 {
            for v in u + 1..6 {
                if g.has_edge(u, v) || comps.label(u) != comps.label(v) {
                    continue;
                }
                let bigger = g.with_edge(u, v).unwrap();
                for h in 1..=2 {
                    pairs += 1;
                    ok &= count(&bigger, h).unwrap() <= count(&g, h).unwrap();
                }
            }
        }
    }
    checks.push(timed("10b", ok, t, format!("edge monotonicity: {pairs} (graph, edge, h) cases")));

    let t = Instant::now();
    let mut ok = true;
    let mut cases = 0;
    for g in [make_grid(2, 3).unwrap(), make_family(FamilyKind::Cycle, 5).unwrap(), make_family(FamilyKind::Complete, 4).unwrap()] {
        for h in 1..=3 {
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    let pin = PinSpec::new(&[0, 2, 3], &[0, a, b]).unwrap();
                    cases += 1;
                    ok &= count_pinned(&g, h, &pin, opts()).unwrap().count
                        == count_pinned(&g, h, &pin.negated(), opts()).unwrap().count;
                }
            }
        }
    }
    checks.push(timed("10c", ok, t, format!("negation symmetry: {cases} pinned counts")));

    let t = Instant::now();
    let mut ok = true;
    let mut summary = Vec::new();
    for (name, g, pins) in [
        ("P5", make_family(FamilyKind::Path, 5).unwrap(), vec![0, 4]),
        ("L2x3", make_grid(2, 3).unwrap(), vec![0, 5]),
        ("L2x2", make_grid(2, 2).unwrap(), vec![0, 1]),
    ] {
        let ratios: Vec<f64> = [2, 4, 8, 16].iter().map(|&h| pinned_profile(&g, h, &pins, opts()).unwrap().ratio()).collect();
        ok &= ratios.windows(2).all(|w| w[1] >= w[0] - 1e-12) && ratios[3] >= 0.9;
        summary.push(format!("{name}: {:.4}", ratios[3]));
    }
    checks.push(timed("10d", ok, t, format!("pinned dominance, ratio at h = 16: {}", summary.join(", "))));

    let t = Instant::now();
    let mut ok = true;
    let mut pairs = 0u64;
    for m in 1..=3 {
        for h in 0..=2 {
            for kind in [OperatorKind::FreeStrip(m), OperatorKind::PinnedStrip(m)] {
                let op = TransferOperator::new(kind, h).unwrap();
                for u in 0..op.dimension() {
                    for v in 0..op.dimension() {
                        pairs += 1;
                        let w = op.weight(u, v);
                        ok &= w == op.weight(v, u);
                        ok &= w == op.state_weight(&op.state(u).negated(), &op.state(v).negated()).unwrap();
                    }
                }
            }
        }
    }
    checks.push(timed("10e", ok, t, format!("W symmetry: {pairs} state pairs, m <= 3, h <= 2")));

    let t = Instant::now();
    let snapshot = || {
        let g = make_grid(3, 3).unwrap();
        let c = count(&g, 3).unwrap();
        let band = top_eigenvalue(&TransferOperator::new(OperatorKind::FreeStrip(3), 6).unwrap(), 1e-12).unwrap();
        let zeta = solve_zeta(32).unwrap();
        let er = sample_er(200, 3.0, RngSeed(5)).unwrap();
        let lll = lll_sampler(&er, LllConfig::new(40, 6.0).unwrap(), 2000, RngSeed(5)).unwrap();
        (c, band.lambda.to_bits(), zeta.value.to_bits(), er.fingerprint(), lll.success.successes, lll.edge_failures)
    };
    let runs: Vec<_> = [1, 2, 3, 8]
        .iter()
        .map(|&k| rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap().install(snapshot))
        .collect();
    let ok = runs.windows(2).all(|w| w[0] == w[1]);
    checks.push(timed("10f", ok, t, "determinism across 1, 2, 3, 8 threads: counts, spectra, samplers bit-identical"));
    checks
}

fn timed(id: &'static str, ok: bool, start: Instant, detail: impl Into<String>) -> Check {
    let elapsed = start.elapsed();
    let fast = elapsed <= secs(60);
    check(id, ok && fast, format!("{} ({:.2}s, limit 60s)", detail.into(), elapsed.as_secs_f64()))
}
