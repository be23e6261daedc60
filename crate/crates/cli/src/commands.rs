//! One function per subcommand. Each validates its inputs up front and
//! returns the pieces of a [`Report`](crate::output::Report).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use tracelab_core::arith::{shapes, SieveTables};
use tracelab_core::correlation::{
    complete_correlation, completion_identity_check, correlation_profile, incomplete_correlation,
    scan_exceptional,
};
use tracelab_core::modular::is_prime;
use tracelab_core::sums::decompose::DecompositionReport;
use tracelab_core::sums::{
    binary_entropy, choose_parameters, decompose_divisor, decompose_mobius, digit_restricted_sum,
    divisor_twisted_sum, mobius_twisted_sum, rho0, ParameterChoice, SumReport, Weight,
};
use tracelab_core::trace::{kloosterman_direct_table, verify_weil, TraceKind};

use crate::args::*;
use crate::error::{config, Result};
use crate::inputs;
use crate::output::{cell, opt, Stopwatch, Table};
use crate::sweep::{self, SweepPlan};

/// Everything a command produces apart from the envelope.
pub struct Outcome {
    /// Values derived from the arguments (N, clamped parameters, ...).
    pub resolved: Value,
    pub results: Value,
    pub derived_bounds: Value,
    pub table: Table,
}

pub fn dispatch(cmd: &Command, watch: &mut Stopwatch) -> Result<Outcome> {
    match cmd {
        Command::Tables(a) => tables(a, watch),
        Command::Kloosterman(a) => kloosterman(a, watch),
        Command::WeilCheck(a) => weil_check(a, watch),
        Command::Twisted(a) => twisted(a, watch),
        Command::Decompose(a) => decompose(a, watch),
        Command::Correlate(a) => correlate(a, watch),
        Command::Digits(a) => digits(a, watch),
        Command::Sweep(a) => sweep_cmd(a, watch),
        Command::Entropy(a) => entropy(a, watch),
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn weight_nu(w: &WeightArgs) -> Option<u32> {
    (w.weight == WeightChoice::Tau).then_some(w.nu)
}

fn core_weight(w: &WeightArgs) -> Weight {
    match w.weight {
        WeightChoice::Mobius => Weight::Mobius,
        WeightChoice::Tau => Weight::Tau { nu: w.nu },
    }
}

fn tables(a: &TablesArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    if let (Some(x), Some(y)) = (a.x, a.y) {
        if !(x >= 2.0 && y >= x && a.n as f64 >= y) {
            return Err(config(format!(
                "need N >= y >= x >= 2, got N = {}, x = {x}, y = {y}",
                a.n
            )));
        }
    }
    let (t, cache) = inputs::sieve_tables(a.n, a.nu, a.sieve.sieve_cache.as_deref())?;
    watch.lap("sieve");
    let n = a.n;
    let primes = (2..=n).filter(|&m| t.is_prime(m)).count() as u64;
    let mut rows: Vec<(&'static str, String)> = vec![
        ("n", cell(n)),
        ("prime_count", cell(primes)),
        ("mertens", cell(t.mertens(n)?)),
    ];
    let mut results = json!({
        "n": n,
        "table_bound": t.bound(),
        "nu": t.nu(),
        "prime_count": primes,
        "mertens": t.mertens(n)?,
    });
    let mut derived = json!({});
    if let Some(nu) = a.nu {
        let m1 = t.tau_moment(n, 1)?;
        let m2 = t.tau_moment(n, 2)?;
        rows.push(("tau_moment_1", cell(m1)));
        rows.push(("tau_moment_2", cell(m2)));
        results["tau_moment_1"] = json!(m1 as u64);
        results["tau_moment_2"] = json!(m2 as u64);
        derived["tau_moment_1_shape"] = json!(shapes::tau_moment(n, nu, 1));
        derived["tau_moment_2_shape"] = json!(shapes::tau_moment(n, nu, 2));
    }
    if let (Some(x), Some(y)) = (a.x, a.y) {
        let part = t.partition(n, x, y)?;
        let summary = part.summary();
        for (r, c) in summary.counts.iter().enumerate() {
            rows.push((class_label(r), cell(*c)));
        }
        let smooth = t.count_smooth(n, x)?;
        let rough = t.enumerate_rough(n, y)?.len() as u64;
        rows.push(("smooth_count_x", cell(smooth)));
        rows.push(("rough_count_y", cell(rough)));
        results["partition"] = to_value(&summary)?;
        results["smooth_count_x"] = json!(smooth);
        results["rough_count_y"] = json!(rough);
        derived["smooth_count_shape"] = json!(shapes::smooth_count(n, x));
        if let Some(nu) = a.nu {
            let s = t.s_nu(n, y, nu)?;
            rows.push(("rough_divisor_sum_y", cell(s)));
            results["rough_divisor_sum_y"] = json!(s);
            derived["rough_divisor_sum_shape"] = json!(shapes::rough_divisor_sum(n, y, nu));
        }
    }
    watch.lap("queries");
    let mut table = Table::new(&["quantity", "value"]);
    for (k, v) in rows {
        table.push(vec![k.to_string(), v]);
    }
    Ok(Outcome {
        resolved: json!({ "sieve_cache": cache }),
        results,
        derived_bounds: derived,
        table,
    })
}

fn class_label(r: usize) -> &'static str {
    const LABELS: [&str; 8] = [
        "class_count_0",
        "class_count_1",
        "class_count_2",
        "class_count_3",
        "class_count_4",
        "class_count_5",
        "class_count_6",
        "class_count_7",
    ];
    LABELS.get(r).copied().unwrap_or("class_count_8_plus")
}

fn kloosterman(a: &KloostermanArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    let spec = inputs::parse_trace(&a.trace.trace)?;
    let ctx = inputs::prime_context(a.p)?;
    watch.lap("context");
    let k = inputs::trace_table(&ctx, &spec)?;
    watch.lap("table");
    let mut derived = json!({ "sup_bound": k.sup_bound() });
    if a.compare_direct {
        let TraceKind::Kloosterman { s, normalized } = spec.kind else {
            return Err(config("--compare-direct needs a kloosterman trace"));
        };
        let direct = kloosterman_direct_table(&ctx, s)?;
        let scale = if normalized {
            (a.p as f64).powf((s as f64 - 1.0) / 2.0)
        } else {
            1.0
        };
        let dev = k
            .values()
            .iter()
            .zip(&direct)
            .map(|(v, d)| (*v - d / scale).norm())
            .fold(0.0, f64::max);
        derived["direct_max_deviation"] = json!(dev);
        watch.lap("direct");
    }
    let mut table = Table::new(&["n", "re", "im", "magnitude"]);
    let mut values = Vec::with_capacity(k.values().len());
    for (n, v) in k.values().iter().enumerate() {
        table.push(vec![cell(n), cell(v.re), cell(v.im), cell(v.norm())]);
        values.push([v.re, v.im]);
    }
    Ok(Outcome {
        resolved: json!({ "trace": spec.to_string() }),
        results: json!({ "p": a.p, "trace": spec.to_string(), "values": values }),
        derived_bounds: derived,
        table,
    })
}

fn weil_check(a: &WeilCheckArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    let spec = inputs::parse_trace(&a.trace.trace)?;
    if !matches!(spec.kind, TraceKind::Kloosterman { .. }) {
        return Err(config("weil-check needs a kloosterman trace"));
    }
    let mut primes = inputs::prime_list(&a.list)?;
    primes.extend(a.p);
    if let Some(max) = a.max_p {
        primes.extend((3..=max).filter(|&q| is_prime(q)));
    }
    if primes.is_empty() {
        return Err(config("give --p, --primes, --primes-file or --max-p"));
    }
    let rows: Vec<(u64, Result<tracelab_core::trace::WeilReport>)> = primes
        .par_iter()
        .map(|&p| {
            let r = inputs::prime_context(p)
                .and_then(|ctx| inputs::trace_table(&ctx, &spec))
                .and_then(|t| Ok(verify_weil(&t)?));
            (p, r)
        })
        .collect();
    watch.lap("check");
    let mut table = Table::new(&[
        "p",
        "s",
        "normalized",
        "bound",
        "max_abs",
        "argmax",
        "max_ratio",
        "violations",
        "error_kind",
        "error_message",
    ]);
    let mut results = Vec::new();
    let mut failures = 0usize;
    for (p, r) in rows {
        match r {
            Ok(w) => {
                failures += usize::from(!w.passed());
                table.push(vec![
                    cell(w.p),
                    cell(w.s),
                    cell(w.normalized),
                    cell(w.bound),
                    cell(w.max_abs),
                    cell(w.argmax),
                    cell(w.max_ratio),
                    cell(w.violations.len()),
                    String::new(),
                    String::new(),
                ]);
                results.push(json!({ "p": p, "report": w }));
            }
            Err(e) => {
                failures += 1;
                let rec = e.record();
                let mut row = vec![cell(p)];
                row.extend(std::iter::repeat_n(String::new(), 7));
                row.push(rec.kind.clone());
                row.push(rec.message.clone());
                table.push(row);
                results.push(json!({ "p": p, "error": rec }));
            }
        }
    }
    Ok(Outcome {
        resolved: json!({ "primes": primes, "trace": spec.to_string() }),
        results: json!({ "checks": results, "failures": failures }),
        derived_bounds: json!({}),
        table,
    })
}

const SUM_COLUMNS: &[&str] = &[
    "p",
    "n",
    "weight",
    "trace",
    "terms",
    "re",
    "im",
    "magnitude",
    "sup_bound",
    "trivial_bound",
    "trivial_ratio",
    "theorem_denominator",
    "theorem_ratio",
];

fn sum_table(r: &SumReport) -> Table {
    let mut t = Table::new(SUM_COLUMNS);
    t.push(vec![
        cell(r.p),
        cell(r.n),
        r.weight.to_string(),
        r.trace.clone(),
        cell(r.terms),
        cell(r.value.re),
        cell(r.value.im),
        cell(r.value.magnitude),
        cell(r.sup_bound),
        cell(r.trivial_bound),
        cell(r.trivial_ratio),
        opt(r.theorem_denominator),
        opt(r.theorem_ratio),
    ]);
    t
}

/// Parameter record for the report; `None` when `N` is too small for one.
fn auto_parameters(p: u64, n: u64, eps: f64, weight: Weight) -> Option<ParameterChoice> {
    choose_parameters(p, n, eps, weight).ok()
}

fn twisted(a: &TwistedArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    inputs::check_weight(&a.weight)?;
    inputs::check_epsilon(a.epsilon)?;
    let spec = inputs::parse_trace(&a.trace.trace)?;
    let n = inputs::resolve_length(a.p, &a.length)?;
    let ctx = inputs::prime_context(a.p)?;
    if n == 0 || n >= a.p {
        return Err(config(format!("need 1 <= N < p, got N = {n}, p = {}", a.p)));
    }
    let k = inputs::trace_table(&ctx, &spec)?;
    watch.lap("table");
    let (tables, cache) =
        inputs::sieve_tables(n, weight_nu(&a.weight), a.sieve.sieve_cache.as_deref())?;
    watch.lap("sieve");
    let report = match a.weight.weight {
        WeightChoice::Mobius => mobius_twisted_sum(&k, &tables, n)?,
        WeightChoice::Tau => divisor_twisted_sum(&k, &tables, n, a.weight.nu)?,
    };
    watch.lap("sum");
    let params = auto_parameters(a.p, n, a.epsilon, core_weight(&a.weight));
    Ok(Outcome {
        resolved: json!({
            "n": n,
            "trace": spec.to_string(),
            "epsilon": a.epsilon,
            "sieve_cache": cache,
        }),
        table: sum_table(&report),
        derived_bounds: json!({
            "trivial_bound": report.trivial_bound,
            "pointwise_times_trivial": report.sup_bound * report.trivial_bound,
            "theorem_denominator": report.theorem_denominator,
            "parameters": params,
        }),
        results: to_value(&report)?,
    })
}

fn decompose(a: &DecomposeArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    inputs::check_weight(&a.weight)?;
    inputs::check_epsilon(a.epsilon)?;
    let spec = inputs::parse_trace(&a.trace.trace)?;
    let n = inputs::resolve_length(a.p, &a.length)?;
    let weight = core_weight(&a.weight);
    let (x, y, params) = match (a.params.auto_params, a.params.x, a.params.y) {
        (true, _, _) => {
            let c = choose_parameters(a.p, n, a.epsilon, weight)?;
            (c.x, c.y, Some(c))
        }
        (false, Some(x), Some(y)) => (x, y, None),
        _ => return Err(config("give --x and --y, or --auto-params")),
    };
    let ctx = inputs::prime_context(a.p)?;
    let k = inputs::trace_table(&ctx, &spec)?;
    watch.lap("table");
    let (tables, cache) =
        inputs::sieve_tables(n, weight_nu(&a.weight), a.sieve.sieve_cache.as_deref())?;
    watch.lap("sieve");
    let mut report = match a.weight.weight {
        WeightChoice::Mobius => decompose_mobius(&k, &tables, n, x, y)?,
        WeightChoice::Tau => decompose_divisor(&k, &tables, n, x, y, a.weight.nu)?,
    };
    watch.lap("decompose");
    if let Some(c) = params.clone() {
        report = report.with_parameters(c);
    }
    Ok(Outcome {
        resolved: json!({
            "n": n,
            "x": x,
            "y": y,
            "trace": spec.to_string(),
            "epsilon": a.epsilon,
            "parameters": params,
            "sieve_cache": cache,
        }),
        table: decomposition_table(&report),
        derived_bounds: decomposition_bounds(&report, &tables)?,
        results: to_value(&report)?,
    })
}

fn decomposition_bounds(r: &DecompositionReport, tables: &SieveTables) -> Result<Value> {
    let weight_sum = match r.weight {
        Weight::Tau { .. } => tables.tau_moment(r.n, 1)? as f64,
        _ => r.n as f64,
    };
    Ok(json!({
        "decomposition_residual": r.decomposition_residual,
        "max_representation_residual": r.max_representation_residual(),
        "max_refinement_residual": r.max_refinement_residual(),
        "max_e": r.max_e(),
        "e_majorant": r.divisor.as_ref().map(|d| d.e_majorant),
        "max_class": r.max_class,
        "max_class_bound": r.max_class_bound,
        "sifted_shape": r.sifted_shape,
        "pointwise_times_trivial": r.sup_bound * weight_sum,
    }))
}

const DECOMPOSITION_COLUMNS: &[&str] = &[
    "row",
    "r",
    "k",
    "count",
    "u_re",
    "u_im",
    "v_re",
    "v_im",
    "representation_residual",
    "e_re",
    "e_im",
    "refinement_residual",
    "v_bound_shape",
    "scale",
    "m_count",
    "vk_re",
    "vk_im",
    "vk_no_coprimality_re",
    "vk_no_coprimality_im",
    "coprimality_slack",
    "coprimality_majorant",
    "w",
    "cauchy_rhs",
    "w_bound_shape",
];

fn decomposition_table(r: &DecompositionReport) -> Table {
    let mut t = Table::new(DECOMPOSITION_COLUMNS);
    let blank = || String::new();
    for row in &r.rows {
        let mut cells = vec![
            "class".to_string(),
            cell(row.r),
            blank(),
            cell(row.count),
            cell(row.u.re),
            cell(row.u.im),
            opt(row.v.map(|v| v.re)),
            opt(row.v.map(|v| v.im)),
            opt(row.representation_residual),
            opt(row.e.map(|e| e.re)),
            opt(row.e.map(|e| e.im)),
            opt(row.refinement_residual),
            opt(row.v_bound_shape),
        ];
        cells.extend(std::iter::repeat_n(blank(), 11));
        t.push(cells);
        for piece in &row.pieces {
            let mut cells = vec!["piece".to_string(), cell(row.r), cell(piece.k)];
            cells.extend(std::iter::repeat_n(blank(), 10));
            cells.extend([
                cell(piece.scale),
                cell(piece.m_count),
                cell(piece.v.re),
                cell(piece.v.im),
                cell(piece.v_without_coprimality.re),
                cell(piece.v_without_coprimality.im),
                cell(piece.coprimality_slack),
                cell(piece.coprimality_majorant),
                cell(piece.w),
                cell(piece.cauchy_rhs),
                cell(piece.w_bound_shape),
            ]);
            t.push(cells);
        }
    }
    t
}

const CORRELATION_COLUMNS: &[&str] = &[
    "kind",
    "p",
    "a",
    "b",
    "h",
    "length",
    "re",
    "im",
    "magnitude",
    "reference_scale",
    "ratio",
    "flagged",
];

fn correlate(a: &CorrelateArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    if !(a.threshold > 0.0) {
        return Err(config(format!("--threshold must be positive, got {}", a.threshold)));
    }
    let spec = inputs::parse_trace(&a.trace.trace)?;
    let ctx = inputs::prime_context(a.p)?;
    let k = inputs::trace_table(&ctx, &spec)?;
    watch.lap("table");
    let mut table = Table::new(CORRELATION_COLUMNS);
    let mut results = serde_json::Map::new();
    let mut derived = serde_json::Map::new();

    let push = |t: &mut Table, kind: &str, c: &tracelab_core::correlation::CorrelationResult, flagged: String| {
        t.push(vec![
            kind.to_string(),
            cell(c.p),
            cell(c.a),
            opt(c.b),
            cell(c.h),
            opt(c.length),
            cell(c.value.re),
            cell(c.value.im),
            cell(c.value.magnitude),
            cell(c.reference_scale),
            cell(c.ratio),
            flagged,
        ]);
    };

    let complete = complete_correlation(&k, a.a, a.h)?;
    push(&mut table, "complete", &complete, String::new());
    results.insert("complete".into(), to_value(&complete)?);
    derived.insert("sqrt_p".into(), json!((a.p as f64).sqrt()));

    if let Some(n) = a.n {
        let b = a.b.unwrap_or(a.a);
        let inc = incomplete_correlation(&k, a.a, b, n)?;
        push(&mut table, "incomplete", &inc, String::new());
        let check = completion_identity_check(&k, a.a, b, n)?;
        results.insert("incomplete".into(), to_value(&inc)?);
        results.insert("completion".into(), to_value(&check)?);
        derived.insert("completion_tolerance".into(), json!(1e-6 * a.p as f64));
        derived.insert(
            "sqrt_p_log_p".into(),
            json!((a.p as f64).sqrt() * (a.p as f64).ln()),
        );
    }
    watch.lap("correlations");

    if a.scan_exceptional {
        let scan = scan_exceptional(&k, &ctx, a.h, a.threshold)?;
        let profile = correlation_profile(&k, &ctx, a.h)?;
        watch.lap("scan");
        let sqrt_p = (a.p as f64).sqrt();
        for (dil, v) in profile.iter().enumerate().skip(1) {
            let z: Complex64 = *v;
            table.push(vec![
                "profile".to_string(),
                cell(a.p),
                cell(dil),
                String::new(),
                cell(a.h),
                String::new(),
                cell(z.re),
                cell(z.im),
                cell(z.norm()),
                cell(sqrt_p),
                cell(z.norm() / sqrt_p),
                cell(scan.flagged.binary_search(&(dil as u64)).is_ok()),
            ]);
        }
        derived.insert("scan_cutoff".into(), json!(scan.cutoff));
        results.insert("scan".into(), to_value(&scan)?);
    }
    Ok(Outcome {
        resolved: json!({ "trace": spec.to_string() }),
        results: Value::Object(results),
        derived_bounds: Value::Object(derived),
        table,
    })
}

fn digits(a: &DigitsArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    let spec = inputs::parse_trace(&a.trace.trace)?;
    let ctx = inputs::prime_context(a.p)?;
    let k = inputs::trace_table(&ctx, &spec)?;
    watch.lap("table");
    let report = digit_restricted_sum(&k, a.r, a.s)?;
    watch.lap("sum");
    let rho = rho0();
    let gamma = a.s as f64 / a.r.max(1) as f64;
    Ok(Outcome {
        resolved: json!({ "trace": spec.to_string() }),
        table: sum_table(&report),
        derived_bounds: json!({
            "set_size": report.terms,
            "sqrt_set_size": (report.terms as f64).sqrt(),
            "digit_density": gamma,
            "rho0": rho,
        }),
        results: to_value(&report)?,
    })
}

fn sweep_cmd(a: &SweepArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    let plan = SweepPlan {
        primes: inputs::prime_list(&a.list)?,
        thetas: a.thetas.clone(),
        weights: a.weight.clone(),
        nu: a.nu,
        trace: inputs::parse_trace(&a.trace.trace)?,
    };
    let rows = sweep::run_sweep(&plan)?;
    watch.lap("sweep");
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    Ok(Outcome {
        resolved: json!({ "primes": plan.primes, "trace": plan.trace.to_string() }),
        table: sweep::table(&rows, &plan),
        results: json!({ "rows": rows, "error_rows": errors }),
        derived_bounds: json!({}),
    })
}

fn entropy(a: &EntropyArgs, watch: &mut Stopwatch) -> Result<Outcome> {
    let mut table = Table::new(&["quantity", "gamma", "value"]);
    let rho = rho0();
    table.push(vec!["rho0".into(), cell(rho), cell(0.5)]);
    let mut values = Vec::new();
    for &g in &a.gamma {
        let h = binary_entropy(g)?;
        table.push(vec!["entropy".into(), cell(g), cell(h)]);
        values.push(json!({ "gamma": g, "entropy": h }));
    }
    watch.lap("entropy");
    Ok(Outcome {
        resolved: json!({}),
        results: json!({ "rho0": rho, "values": values }),
        derived_bounds: json!({ "entropy_at_rho0": binary_entropy(rho)? }),
        table,
    })
}
