use lipcount::continuum::{
    grid_bound_report, nystrom_top, psi_lower_bound, solve_alpha, solve_beta, solve_beta_root, solve_psi, solve_zeta,
    Kernel1D, Mesh,
};
use lipcount::exact::{count_bruteforce, count_pinned, ehrhart_fit, CountOptions, LipCount, PinSpec};
use lipcount::graph::{components, make_family, make_grid, make_random_tree, sample_er, FamilyKind, Graph, RngSeed};
use lipcount::random_lab::{
    alpha_flat, bound_report, c_empirical, degree_tail_fraction, epsilon_upper_bound, giant_fraction_prediction,
    independent_pair_search, lemma321_margin, lll_sampler_streams, poisson_tail_bound, triple_sum_success, wilson,
    CEstimate, LllConfig, PairSearch, SearchMode,
};
use lipcount::strip::{
    extrapolate_limit, rayleigh_lower_bound, strip_count_exact_with_budget, top_eigenvalue_with, OperatorKind,
    TransferOperator,
};
use lipcount::power::PowerOptions;
use serde_json::json;

use crate::report::{Cell, Report};
use crate::{
    BoundsArgs, CEmpiricalArgs, CliError, Command, ConstantsArgs, CountArgs, DegreesArgs, EhrhartArgs, Family, Format,
    GiantArgs, Global, GraphSource, KindArg, LabCommand, LllArgs, ModeArg, PairsArgs, RayleighArgs, ReproduceArgs,
    SpectrumArgs, StripCommand, StripCountArgs, TripleArgs,
};

pub enum Output {
    Raw(String),
    Report(Report),
}

type Res = Result<Output, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

pub fn dispatch(cmd: &Command, g: &Global) -> Res {
    let seed = RngSeed(g.seed);
    match cmd {
        Command::Generate(src) => generate(src, g),
        Command::Count(a) => count(a, seed),
        Command::Ehrhart(a) => ehrhart(a, seed),
        Command::Strip(StripCommand::Spectrum(a)) => spectrum(a),
        Command::Strip(StripCommand::Count(a)) => strip_count(a),
        Command::Strip(StripCommand::Rayleigh(a)) => rayleigh(a),
        Command::Constants(a) => constants(a),
        Command::Bounds(a) => bounds(a),
        Command::RandomLab(lab) => match lab {
            LabCommand::Lll(a) => lab_lll(a, seed),
            LabCommand::Pairs(a) => lab_pairs(a, g.seed),
            LabCommand::Giant(a) => lab_giant(a, g.seed),
            LabCommand::Triple(a) => lab_triple(a),
            LabCommand::CEmpirical(a) => lab_c_empirical(a, seed),
            LabCommand::Degrees(a) => lab_degrees(a, g.seed),
        },
        Command::ReproduceAbstract(a) => reproduce(a),
    }
}

fn load_graph(src: &GraphSource, seed: RngSeed) -> Result<(Graph, serde_json::Value), CliError> {
    if let Some(path) = &src.input {
        let text = std::fs::read_to_string(path)?;
        let g = Graph::from_edge_list(&text)?;
        return Ok((g, json!({ "input": path.display().to_string() })));
    }
    if let Some((r, c)) = src.grid {
        return Ok((make_grid(r, c)?, json!({ "grid": format!("{r}x{c}") })));
    }
    let family = src.family.expect("clap enforces one graph source");
    let n = src.n.expect("clap enforces --n with --family");
    let fixed = |k| make_family(k, n);
    let g = match family {
        Family::Path => fixed(FamilyKind::Path)?,
        Family::Cycle => fixed(FamilyKind::Cycle)?,
        Family::Complete => fixed(FamilyKind::Complete)?,
        Family::Star => fixed(FamilyKind::Star)?,
        Family::Tree => make_random_tree(n, seed)?,
        Family::Er => {
            let Some(d) = src.d else {
                return usage("--family er needs --d");
            };
            sample_er(n, d, seed)?
        }
    };
    let name = format!("{family:?}").to_lowercase();
    let mut params = json!({ "family": name, "n": n });
    if matches!(family, Family::Tree | Family::Er) {
        params["seed"] = json!(seed.0);
    }
    if let (Family::Er, Some(d)) = (family, src.d) {
        params["d"] = json!(d);
    }
    Ok((g, params))
}

fn graph_summary(r: &mut Report, g: &Graph) {
    r.summary("n", g.n());
    r.summary("edges", g.edge_count());
    r.summary("components", g.component_count());
    r.summary("roots", g.roots());
    r.summary("fingerprint", g.fingerprint());
}

fn generate(src: &GraphSource, glob: &Global) -> Res {
    let (g, params) = load_graph(src, RngSeed(glob.seed))?;
    if glob.format == Format::Table {
        return Ok(Output::Raw(g.to_edge_list()));
    }
    let mut r = Report::new("generate", params, vec!["u", "v"]);
    for &(u, v) in g.edges() {
        r.row(vec![Cell::int(u), Cell::int(v)]);
    }
    graph_summary(&mut r, &g);
    r.summary("edge_list", g.to_edge_list());
    Ok(Output::Report(r))
}

fn count(a: &CountArgs, seed: RngSeed) -> Res {
    let (g, mut params) = load_graph(&a.graph, seed)?;
    params["h"] = json!(a.h);
    params["budget"] = json!(a.budget);
    let opts = CountOptions { budget: a.budget };
    let pin = if a.pin.is_empty() {
        None
    } else {
        let mut pins: Vec<(usize, i64)> = g
            .roots()
            .iter()
            .filter(|r| !a.pin.iter().any(|p| p.0 == **r))
            .map(|&r| (r, 0))
            .collect();
        pins.extend(a.pin.iter().copied());
        let (vs, ws): (Vec<usize>, Vec<i64>) = pins.into_iter().unzip();
        params["pins"] = json!(vs.iter().zip(&ws).map(|(v, w)| format!("{v}={w}")).collect::<Vec<_>>());
        Some(PinSpec::new(&vs, &ws)?)
    };
    let mut r = Report::new("count", params, vec!["h", "count", "node_expansions"]);
    for &h in &a.h {
        let rep = match &pin {
            Some(p) => count_pinned(&g, h, p, opts)?,
            None => count_bruteforce(&g, h, opts)?,
        };
        r.row(vec![Cell::int(h), Cell::int(&rep.count), Cell::int(rep.node_expansions)]);
    }
    graph_summary(&mut r, &g);
    Ok(Output::Report(r))
}

fn ehrhart(a: &EhrhartArgs, seed: RngSeed) -> Res {
    let (g, params) = load_graph(&a.graph, seed)?;
    let opts = CountOptions { budget: a.budget };
    let dim = g.free_dimension() as u32;
    let counts = (0..=dim)
        .map(|h| Ok((h, count_bruteforce(&g, h, opts)?.count)))
        .collect::<Result<Vec<(u32, LipCount)>, CliError>>()?;
    let poly = ehrhart_fit(&g, &counts)?;
    let mut r = Report::new("ehrhart", params, vec!["power", "coefficient", "approx"]);
    for (k, c) in poly.coefficients().iter().enumerate() {
        let approx = c.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
            / c.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        r.row(vec![Cell::int(k), Cell::text(c.to_string()), Cell::Float(approx, 6)]);
    }
    graph_summary(&mut r, &g);
    r.summary("degree", poly.degree());
    r.summary("leading", poly.leading().to_string());
    r.summary("c", poly.c_estimate());
    r.summary("within_growth_bounds", poly.within_growth_bounds());
    r.summary("counts", counts.iter().map(|(h, c)| (h, c.to_string())).collect::<Vec<_>>());
    if let Some(c) = poly.c_estimate() {
        r.notes.push(format!("c(G) = {c:.6} (degree {})", poly.degree()));
    }
    Ok(Output::Report(r))
}

fn operator_kind(kind: KindArg, m: usize) -> Result<OperatorKind, CliError> {
    Ok(match kind {
        KindArg::Band => OperatorKind::Band,
        KindArg::Tent => OperatorKind::Tent,
        KindArg::FreeStrip if m >= 1 => OperatorKind::FreeStrip(m),
        KindArg::PinnedStrip if m >= 1 => OperatorKind::PinnedStrip(m),
        _ => return usage("--m must be at least 1"),
    })
}

fn spectrum(a: &SpectrumArgs) -> Res {
    let kind = operator_kind(a.kind, a.m)?;
    if !(a.tol > 0.0) {
        return usage("--tol must be positive");
    }
    let params = json!({ "kind": kind.label(), "m": kind.rows(), "h": a.h, "tol": a.tol, "max_iter": a.max_iter });
    let mut rows = Vec::new();
    for &h in &a.h {
        let op = TransferOperator::with_budget(kind, h, a.budget)?;
        let est = top_eigenvalue_with(&op, PowerOptions { tol: a.tol, max_iter: a.max_iter })?;
        rows.push((h, op.dimension(), est));
    }
    let extrapolation = if rows.len() >= 3 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|(h, _, e)| (*h as f64, e.normalized)).collect();
        Some(extrapolate_limit(&pts)?)
    } else {
        None
    };
    let mut r = Report::new(
        "strip",
        params,
        vec!["kind", "m", "h", "dimension", "lambda", "normalized", "extrapolated", "residual", "iterations"],
    );
    for (h, dim, e) in &rows {
        r.row(vec![
            Cell::text(kind.label()),
            Cell::int(kind.rows()),
            Cell::int(h),
            Cell::int(dim),
            Cell::Float(e.lambda, 6),
            Cell::float(e.normalized),
            Cell::opt(extrapolation.as_ref().map(|x| x.limit)),
            Cell::Float(e.residual, 3),
            Cell::int(e.iterations),
        ]);
    }
    if let Some(x) = &extrapolation {
        if !x.stable() {
            r.notes.push(format!(
                "warning: window slopes {:?} disagree with the global slope {:.4}; read the raw sequence",
                x.window_slopes, x.slope
            ));
        }
        r.summary("extrapolation", x);
        r.summary("stable", x.stable());
    }
    Ok(Output::Report(r))
}

fn strip_count(a: &StripCountArgs) -> Res {
    let (rows, cols) = a.grid;
    let params = json!({ "grid": format!("{rows}x{cols}"), "h": a.h, "budget": a.budget });
    let mut r = Report::new("strip-count", params, vec!["rows", "cols", "h", "count"]);
    for &h in &a.h {
        let c = strip_count_exact_with_budget(rows, cols, h, a.budget)?;
        r.row(vec![Cell::int(rows), Cell::int(cols), Cell::int(h), Cell::int(c)]);
    }
    Ok(Output::Report(r))
}

fn rayleigh(a: &RayleighArgs) -> Res {
    let params = json!({ "m": a.m, "h": a.h });
    let mut r = Report::new("rayleigh", params, vec!["m", "h", "numerator", "denominator", "value", "normalized"]);
    for &h in &a.h {
        let b = rayleigh_lower_bound(a.m, h)?;
        r.row(vec![
            Cell::int(a.m),
            Cell::int(h),
            Cell::Int(b.numerator.clone()),
            Cell::Int(b.denominator.clone()),
            Cell::float(b.value),
            Cell::float(b.normalized()),
        ]);
    }
    Ok(Output::Report(r))
}

fn constant_row(r: &mut Report, name: &str, value: f64, definition: &str, method: String) {
    r.row(vec![
        Cell::text(name),
        Cell::Float(value, 6),
        Cell::Float(value, 4),
        Cell::text(definition),
        Cell::text(method),
    ]);
}

fn constants(a: &ConstantsArgs) -> Res {
    let params = if a.all {
        json!({ "all": true, "nystrom_mesh": a.nystrom_mesh, "zeta_mesh": a.zeta_mesh, "psi_mesh": a.psi_mesh })
    } else {
        json!({ "all": false })
    };
    let mut r = Report::new("constants", params, vec!["name", "value", "rounded", "definition", "method"]);
    let alpha = solve_alpha();
    let root = solve_beta_root();
    let beta = solve_beta();
    constant_row(&mut r, "alpha", alpha, "largest root of tan(1/x) = x", "bisection on [1, 1.5]".into());
    constant_row(&mut r, "alpha^2", alpha * alpha, "square grid lower bound", "from alpha".into());
    constant_row(&mut r, "alpha*sqrt(2)", alpha * 2f64.sqrt(), "two-row strip growth constant", "from alpha".into());
    constant_row(&mut r, "2*alpha^2", 2.0 * alpha * alpha, "top eigenvalue of the tent operator", "from alpha".into());
    constant_row(&mut r, "arctan(3/4)", root, "smallest positive root of cos x + 2 sin x = 2", "bisection".into());
    constant_row(&mut r, "beta", beta, "1/arctan(3/4), square grid upper bound", "from root".into());
    if a.all {
        let mesh = Mesh::midpoint(a.nystrom_mesh)?;
        let band = nystrom_top(Kernel1D::BandIndicator, &mesh)?;
        constant_row(
            &mut r,
            "band eigenvalue",
            band.lambda,
            "top eigenvalue of the band indicator operator",
            format!("Nystrom N={} ({} iterations)", a.nystrom_mesh, band.iterations),
        );
        let tent = nystrom_top(Kernel1D::Tent, &mesh)?;
        constant_row(
            &mut r,
            "tent eigenvalue",
            tent.lambda,
            "top eigenvalue of the tent operator",
            format!("Nystrom N={} ({} iterations)", a.nystrom_mesh, tent.iterations),
        );
        let zeta = solve_zeta(a.zeta_mesh)?;
        constant_row(
            &mut r,
            "zeta",
            zeta.value,
            "sqrt of top eigenvalue, two rows under a zero row",
            format!("Nystrom {0}x{0} ({1} iterations)", a.zeta_mesh, zeta.iterations),
        );
        let psi = solve_psi(a.psi_mesh)?;
        constant_row(
            &mut r,
            "psi",
            psi.value,
            "cube root of top eigenvalue, free three-row strip",
            format!("Nystrom {0}x{0} ({1} iterations)", a.psi_mesh, psi.iterations),
        );
        constant_row(
            &mut r,
            "psi^(3/2)/sqrt(2)",
            psi_lower_bound(psi.value),
            "improved square grid lower bound",
            "from psi".into(),
        );
    }
    Ok(Output::Report(r))
}

fn bounds(a: &BoundsArgs) -> Res {
    let params = json!({ "d": a.d, "epsilon": a.epsilon });
    let mut r = Report::new(
        "bounds",
        params,
        vec![
            "d",
            "lower_exact",
            "lower_asymptotic",
            "upper_exact",
            "upper_asymptotic",
            "lower_valid",
            "upper_valid",
            "upper_informative",
            "margin",
            "giant_fraction",
        ],
    );
    for &d in &a.d {
        if !(d > 0.0) || !d.is_finite() {
            return usage(format!("d must be positive, got {d}"));
        }
        let b = bound_report(d);
        r.row(vec![
            Cell::Float(d, 2),
            Cell::opt(b.lower_exact),
            Cell::float(b.lower_asymptotic),
            Cell::opt(b.upper_exact),
            Cell::float(b.upper_asymptotic),
            Cell::Bool(b.lower_valid),
            Cell::Bool(b.upper_valid),
            Cell::Bool(b.upper_informative),
            Cell::opt(lemma321_margin(d).ok().map(|m| m.margin)),
            Cell::opt(giant_fraction_prediction(d).ok()),
        ]);
    }
    if let Some(eps) = a.epsilon {
        let v = epsilon_upper_bound(eps)?;
        r.summary("epsilon_upper_bound", json!({ "epsilon": eps, "value": v }));
        r.notes.push(format!("2 - 2^-18 eps^5 at eps = {eps}: {v:.12}"));
    }
    Ok(Output::Report(r))
}

fn lab_lll(a: &LllArgs, seed: RngSeed) -> Res {
    if a.trials == 0 || a.batches == 0 || a.batches > a.trials {
        return usage("need 1 <= batches <= trials");
    }
    let cfg = LllConfig::new(a.h, a.d)?;
    let g = sample_er(a.n, a.d, seed)?;
    let params = json!({ "n": a.n, "d": a.d, "h": a.h, "trials": a.trials, "batches": a.batches, "seed": seed.0 });
    let mut r = Report::new(
        "random-lab lll",
        params,
        vec!["batch", "first_stream", "trials", "successes", "edge_samples", "edge_failures"],
    );
    let (mut succ, mut samples, mut fails, mut high) = (0u64, 0u64, 0u64, 0u64);
    let per = a.trials / a.batches;
    let mut first = 0;
    for b in 0..a.batches {
        let t = if b + 1 == a.batches { a.trials - first } else { per };
        let rep = lll_sampler_streams(&g, cfg, first, t, seed)?;
        r.row(vec![
            Cell::int(b),
            Cell::int(first),
            Cell::int(t),
            Cell::int(rep.success.successes),
            Cell::int(rep.edge_samples),
            Cell::int(rep.edge_failures),
        ]);
        succ += rep.success.successes;
        samples += rep.edge_samples;
        fails += rep.edge_failures;
        high += rep.high_edge_failures;
        first += t;
    }
    let (p, ci) = wilson(succ, a.trials);
    let (q, qci) = wilson(fails, samples.max(1));
    graph_summary(&mut r, &g);
    r.summary("stretch", cfg.stretch());
    r.summary("degree_threshold", cfg.degree_threshold());
    r.summary("low_range", cfg.low_range());
    r.summary("high_range", cfg.high_range());
    r.summary("success", json!({ "trials": a.trials, "successes": succ, "estimate": p, "interval": ci }));
    r.summary(
        "edge_failure",
        json!({
            "samples": samples,
            "failures": fails,
            "rate": q,
            "interval": qci,
            "predicted_discrete": cfg.low_pair_failure(),
            "predicted_continuum": cfg.continuum_pair_failure(),
            "high_degree_failures": high,
        }),
    );
    r.notes.push(format!(
        "success {p:.6} [{:.6}, {:.6}]; low-low edge failure {q:.6} vs predicted {:.6} (continuum {:.6})",
        ci.0,
        ci.1,
        cfg.low_pair_failure(),
        cfg.continuum_pair_failure()
    ));
    Ok(Output::Report(r))
}

fn lab_pairs(a: &PairsArgs, seed: u64) -> Res {
    let s = a.s.unwrap_or_else(|| (alpha_flat(a.d) * a.n as f64).ceil() as usize);
    let mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Heuristic => SearchMode::Heuristic,
    };
    let params = json!({ "n": a.n, "d": a.d, "s": s, "mode": mode, "seeds": a.seeds, "seed": seed });
    let mut r = Report::new("random-lab pairs", params, vec!["seed", "edges", "outcome", "a", "b"]);
    let mut found = 0;
    for k in 0..a.seeds {
        let sd = seed.wrapping_add(k);
        let g = sample_er(a.n, a.d, RngSeed(sd))?;
        let res = independent_pair_search(&g, s, mode)?;
        let (outcome, sa, sb) = match &res {
            PairSearch::Found { a, b } => ("found", join(a), join(b)),
            PairSearch::NoneExists => ("none", String::new(), String::new()),
            PairSearch::Inconclusive => ("inconclusive", String::new(), String::new()),
        };
        found += usize::from(res.found());
        r.row(vec![Cell::int(sd), Cell::int(g.edge_count()), Cell::text(outcome), Cell::text(sa), Cell::text(sb)]);
    }
    r.summary("found", found);
    r.summary("frequency", found as f64 / a.seeds.max(1) as f64);
    r.notes.push(format!("found in {found} of {} graphs (s = {s})", a.seeds));
    Ok(Output::Report(r))
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn lab_giant(a: &GiantArgs, seed: u64) -> Res {
    let predicted = giant_fraction_prediction(a.d)?;
    let params = json!({ "n": a.n, "d": a.d, "seeds": a.seeds, "seed": seed });
    let mut r = Report::new("random-lab giant", params, vec!["seed", "giant_size", "fraction"]);
    let mut total = 0.0;
    for k in 0..a.seeds {
        let sd = seed.wrapping_add(k);
        let g = sample_er(a.n, a.d, RngSeed(sd))?;
        let size = components(&g).giant_size();
        let f = size as f64 / a.n as f64;
        total += f;
        r.row(vec![Cell::int(sd), Cell::int(size), Cell::float(f)]);
    }
    let mean = total / a.seeds.max(1) as f64;
    r.summary("predicted", predicted);
    r.summary("mean", mean);
    r.notes.push(format!("predicted {predicted:.6}, simulated mean {mean:.6}"));
    Ok(Output::Report(r))
}

fn lab_triple(a: &TripleArgs) -> Res {
    let params = json!({ "h": a.h });
    let mut r = Report::new("random-lab triple", params, vec!["h", "success", "value", "gap_to_limit"]);
    for &h in &a.h {
        let p = triple_sum_success(h);
        let v = p.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
            / p.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        r.row(vec![Cell::int(h), Cell::text(p.to_string()), Cell::Float(v, 9), Cell::Float(v - 23.0 / 24.0, 9)]);
    }
    Ok(Output::Report(r))
}

fn lab_c_empirical(a: &CEmpiricalArgs, seed: RngSeed) -> Res {
    let g = sample_er(a.n, a.d, seed)?;
    let params = json!({ "n": a.n, "d": a.d, "h": a.h, "seed": seed.0 });
    let est = c_empirical(&g, &a.h)?;
    let mut r = Report::new("random-lab c-empirical", params, vec!["h", "count", "normalized"]);
    let dim = g.free_dimension() as f64;
    for &h in &a.h {
        let c = count_bruteforce(&g, h, CountOptions::default())?.count;
        let norm = if h == 0 {
            None
        } else {
            Some(c.to_string().parse::<f64>().unwrap_or(f64::NAN).powf(1.0 / dim) / h as f64)
        };
        r.row(vec![Cell::int(h), Cell::int(&c), Cell::opt(norm)]);
    }
    graph_summary(&mut r, &g);
    r.summary("estimate", &est);
    if let CEstimate::Ehrhart { c } = est {
        r.notes.push(format!("c(G) = {c:.6} from the interpolated leading coefficient"));
    }
    Ok(Output::Report(r))
}

fn lab_degrees(a: &DegreesArgs, seed: u64) -> Res {
    let threshold = (2.0 * a.d).ceil() as usize;
    let bound = poisson_tail_bound(a.d, a.d)?;
    let params = json!({ "n": a.n, "d": a.d, "seeds": a.seeds, "seed": seed });
    let mut r = Report::new("random-lab degrees", params, vec!["seed", "threshold", "fraction", "tail_bound"]);
    for k in 0..a.seeds {
        let sd = seed.wrapping_add(k);
        let g = sample_er(a.n, a.d, RngSeed(sd))?;
        r.row(vec![Cell::int(sd), Cell::int(threshold), Cell::float(degree_tail_fraction(&g, threshold)), Cell::float(bound)]);
    }
    Ok(Output::Report(r))
}

fn extrapolated(kind: OperatorKind, hs: &[u32]) -> Result<f64, CliError> {
    let pts = hs
        .iter()
        .map(|&h| {
            let op = TransferOperator::new(kind, h)?;
            Ok((h as f64, top_eigenvalue_with(&op, PowerOptions::default())?.normalized))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(extrapolate_limit(&pts)?.limit)
}

fn reproduce(a: &ReproduceArgs) -> Res {
    let params = json!({ "zeta_mesh": a.zeta_mesh, "psi_mesh": a.psi_mesh });
    let mut r = Report::new("reproduce-abstract", params, vec!["quantity", "value", "rounded", "cross_check", "method"]);
    let mut add = |name: &str, v: f64, check: Option<f64>, method: &str| {
        r.row(vec![Cell::text(name), Cell::Float(v, 6), Cell::Float(v, 4), Cell::opt(check), Cell::text(method)]);
    };
    let alpha = solve_alpha();
    let beta = solve_beta();
    let tent = nystrom_top(Kernel1D::Tent, &Mesh::midpoint(2000)?)?.lambda;
    let band = nystrom_top(Kernel1D::BandIndicator, &Mesh::midpoint(2000)?)?.lambda;
    add("alpha", alpha, None, "bisection; cross-check none");
    add("alpha^2", alpha * alpha, Some(tent / 2.0), "cross-check: tent Nystrom eigenvalue / 2");
    add(
        "alpha*sqrt(2)",
        alpha * 2f64.sqrt(),
        Some(extrapolated(OperatorKind::FreeStrip(2), &[50, 100, 200])?),
        "cross-check: two-row strip, h = 50, 100, 200 extrapolated",
    );
    add(
        "1/arctan(3/4)",
        beta,
        Some(extrapolated(OperatorKind::Band, &[50, 100, 200, 400])?),
        "cross-check: band matrix, h = 50..400 extrapolated",
    );
    add("band eigenvalue", band, Some(beta), "Nystrom N = 2000; cross-check 1/arctan(3/4)");
    let report = grid_bound_report(a.zeta_mesh, a.psi_mesh)?;
    add(
        "zeta",
        report.zeta,
        Some(extrapolated(OperatorKind::PinnedStrip(2), &[10, 15, 20])?),
        "2D Nystrom; cross-check: pinned two-row strip extrapolated",
    );
    add(
        "psi",
        report.psi,
        Some(extrapolated(OperatorKind::FreeStrip(3), &[10, 15, 20])?),
        "2D Nystrom; cross-check: free three-row strip extrapolated",
    );
    add("psi^(3/2)/sqrt(2)", report.improved.lower, None, "improved grid lower bound");
    let b = bound_report(100.0);
    add("lower bound at d = 100", b.lower_exact.unwrap_or(f64::NAN), Some(b.lower_asymptotic), "cross-check 1 + 1/(2d)");
    add("upper bound at d = 100", b.upper_exact.unwrap_or(f64::NAN), Some(b.upper_asymptotic), "cross-check 1 + 4 ln^2 d / d");
    let t = triple_sum_success(10_000);
    let tv = t.numer().to_string().parse::<f64>().unwrap_or(f64::NAN) / t.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    add("triple-sum success at h = 10^4", tv, Some(23.0 / 24.0), "exact count; cross-check 23/24");
    add("2 - 2^-18", epsilon_upper_bound(1.0)?, None, "random-graph upper bound at eps = 1");
    r.summary("grid_bounds", &report);
    Ok(Output::Report(r))
}
