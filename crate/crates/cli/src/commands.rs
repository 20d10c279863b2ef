use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use levelcs::certify::{
    check_recovery_condition, error_bounds, kernel_exact_recovery_check, nsp_falsify, recovery_threshold,
    rip_exact, ripl_deflation_analytic, ripl_exact, ripl_exact_with_cap, ripl_lower_bound, NspConstants,
};
use levelcs::counterexamples::{verify_with, Claim};
use levelcs::fliptest::{
    generalized_flip_test, make_permutation, permutation_sweep, run_flip_test, sweep_csv, FlipReport, Permutation,
    PermutationKind, SolveDiagnostics,
};
use levelcs::io::{vector_matrix, write_matrix_binary, write_matrix_csv};
use levelcs::linalg::{dist2, norm2, CMatrix};
use levelcs::rng::{complex_gaussian_vec, rng_from_seed};
use levelcs::solver::{solve_bp, solve_bpdn, solve_weighted_l1};
use levelcs::sparsity::weighted_norms;
use levelcs::{SparsityPattern, Weights, C64};
use serde_json::{json, Value};

use crate::config::{
    load, sha256_hex, Boundaries, CertifyConfig, CheckSpec, CounterexampleConfig, CounterexampleParams, Ctx, FlipMode,
    FliptestConfig, MeasurementSpec, PatternConfig, PermutationSpec, ProblemSpec, RecoverConfig, SkepsConfig,
};
use crate::ingest;
use crate::output::{Outputs, Provenance};

/// Flags shared by every verb.
pub struct Common {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

impl Common {
    fn config_path(&self, verb: &str) -> Result<&Path> {
        self.config
            .as_deref()
            .ok_or_else(|| anyhow!("{verb} needs --config PATH"))
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Passed,
    ClaimFailed(Vec<String>),
}

impl Status {
    fn from_failures(failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Status::Passed
        } else {
            Status::ClaimFailed(failures)
        }
    }
}

fn provenance(command: &str, sha: String, ctx: &Ctx) -> Provenance {
    let mut p = Provenance::new(command, sha, ctx.seed);
    p.seeds = ctx.seeds.clone();
    p.inputs = ctx.inputs.clone();
    p
}

fn finish(out: Outputs, dir: &Path) -> Result<()> {
    let names: Vec<String> = out.names().map(str::to_string).collect();
    out.commit(dir)?;
    for n in names {
        println!("wrote {}", dir.join(n).display());
    }
    Ok(())
}

fn csv_bytes(x: &[C64]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_matrix_csv(&vector_matrix(x), &mut buf)?;
    Ok(buf)
}

pub fn certify(common: &Common) -> Result<Status> {
    let loaded = load::<CertifyConfig>(common.config_path("certify")?)?;
    let cfg = loaded.config;
    let mut ctx = Ctx::new(loaded.base, common.seed.unwrap_or(cfg.seed));
    let built = cfg.operator.build(&mut ctx)?;
    let op = built.op;
    let inst = built.instance;
    let n = op.n_in();
    let pattern = match (&cfg.pattern, &inst) {
        (Some(p), _) => p.build(n)?,
        (None, Some(i)) => i.pattern.clone(),
        (None, None) => bail!("certify needs a \"pattern\""),
    };
    let default_scale = inst.as_ref().and_then(|i| i.params.a).unwrap_or(1);
    let mut dense: Option<CMatrix> = None;
    let mut matrix = |op: &levelcs::SensingOperator| -> Result<CMatrix> {
        if dense.is_none() {
            dense = Some(op.materialize()?);
        }
        Ok(dense.clone().unwrap())
    };

    let mut results = Vec::new();
    let mut summary = String::new();
    let mut delta_upper: Option<f64> = None;
    let mut delta_lower: Option<f64> = None;
    let mut recovery_holds = None;
    let mut nsp_holds: Option<Option<bool>> = None;
    let mut note_delta = |lower: f64, upper: Option<f64>| {
        delta_lower = Some(delta_lower.map_or(lower, |d: f64| d.max(lower)));
        if let Some(u) = upper {
            delta_upper = Some(delta_upper.map_or(u, |d: f64| d.max(u)));
        }
    };
    for (i, check) in cfg.checks.iter().enumerate() {
        let result = match check {
            CheckSpec::RiplExact { scale, cap } => {
                let p = pattern.scaled(scale.unwrap_or(default_scale));
                let a = matrix(&op)?;
                let r = match cap {
                    Some(c) => ripl_exact_with_cap(&a, &p, *c as u128)?,
                    None => ripl_exact(&a, &p)?,
                };
                note_delta(r.value.lower(), Some(r.value.upper()));
                writeln!(summary, "ripl-exact (s = {:?}): delta = {:e}", p.budgets(), r.value.upper())?;
                serde_json::to_value(&r)?
            }
            CheckSpec::RiplAnalytic { scale } => {
                let i = inst
                    .as_ref()
                    .filter(|i| i.kernel.is_some())
                    .ok_or_else(|| anyhow!("ripl-analytic needs a counterexample operator with a kernel"))?;
                let p = pattern.scaled(scale.unwrap_or(default_scale));
                let r = ripl_deflation_analytic(i.kernel.as_deref().unwrap(), i.scale, &p)?;
                note_delta(r.value.lower(), Some(r.value.upper()));
                writeln!(summary, "ripl-analytic (s = {:?}): delta = {:e}", p.budgets(), r.value.upper())?;
                serde_json::to_value(&r)?
            }
            CheckSpec::RiplLowerBound { scale, budget, seed } => {
                let p = pattern.scaled(scale.unwrap_or(default_scale));
                let seed = ctx.seed_for(&format!("checks[{i}].seed"), *seed);
                let r = ripl_lower_bound(&op, &p, *budget, seed)?;
                note_delta(r.value.lower(), None);
                writeln!(summary, "ripl-lower-bound (s = {:?}): delta >= {:e}", p.budgets(), r.value.lower())?;
                serde_json::to_value(&r)?
            }
            CheckSpec::RipExact { s } => {
                let r = rip_exact(&matrix(&op)?, *s)?;
                writeln!(summary, "rip-exact (s = {s}): delta = {:e}", r.value.upper())?;
                serde_json::to_value(&r)?
            }
            CheckSpec::Threshold {} => {
                let t = recovery_threshold(&pattern)?;
                writeln!(summary, "recovery threshold: {t:e}")?;
                json!({ "threshold": t })
            }
            CheckSpec::RecoveryCondition {} => {
                let r = check_recovery_condition(&matrix(&op)?, &pattern)?;
                recovery_holds = Some(r.holds);
                writeln!(summary, "recovery condition: {}", if r.holds { "holds" } else { "fails" })?;
                serde_json::to_value(&r)?
            }
            CheckSpec::KernelCheck {} => {
                let r = kernel_exact_recovery_check(&matrix(&op)?, &pattern)?;
                writeln!(summary, "kernel exact-recovery check: {:?}", r.holds)?;
                serde_json::to_value(&r)?
            }
            CheckSpec::NspFalsify { rho, tau, trials, seed } => {
                let seed = ctx.seed_for(&format!("checks[{i}].seed"), *seed);
                let hint = inst.as_ref().and_then(|i| i.kernel.clone()).map(|k| vec![k]);
                let r = nsp_falsify(&op, &pattern, *rho, *tau, *trials, seed, hint.as_deref())?;
                nsp_holds = Some(r.holds);
                writeln!(
                    summary,
                    "nsp search (rho = {rho}, tau = {tau}, {trials} trials): {}, worst ratio {:e}",
                    if r.holds == Some(false) { "violated" } else { "no violation found" },
                    r.value.upper()
                )?;
                serde_json::to_value(&r)?
            }
            CheckSpec::ErrorBounds { rho, tau, sigma, eps } => {
                let b = error_bounds(&NspConstants::new(*rho, *tau)?, &pattern, *sigma, *eps)?;
                writeln!(summary, "error bounds: l1 {:e}, l2 {:e}", b.bound_l1, b.bound_l2)?;
                serde_json::to_value(b)?
            }
        };
        results.push(json!({ "spec": check, "result": result }));
    }

    let e = &cfg.expect;
    let mut expectations = Vec::new();
    let mut failures = Vec::new();
    let mut expect = |name: &str, value: Value, passed: bool| {
        if !passed {
            failures.push(format!("{name} (observed {value})"));
        }
        expectations.push(json!({ "expectation": name, "observed": value, "passed": passed }));
    };
    if let Some(bound) = e.delta_at_most {
        let passed = delta_upper.is_some_and(|d| d <= bound);
        expect(&format!("delta <= {bound}"), json!(delta_upper), passed);
    }
    if let Some(bound) = e.delta_at_least {
        let passed = delta_lower.is_some_and(|d| d >= bound);
        expect(&format!("delta >= {bound}"), json!(delta_lower), passed);
    }
    if let Some(want) = e.recovery_holds {
        expect(&format!("recovery holds = {want}"), json!(recovery_holds), recovery_holds == Some(want));
    }
    if let Some(want) = e.nsp_holds {
        let observed = nsp_holds.flatten();
        let passed = nsp_holds.is_some() && (observed == Some(false)) != want;
        expect(&format!("nsp holds = {want}"), json!(observed), passed);
    }

    let delta_bound = inst.as_ref().and_then(|i| {
        i.claims.iter().find_map(|c| match c {
            Claim::RipLBound { a, bound } => Some(json!({ "a": a, "bound": bound })),
            _ => None,
        })
    });
    let status = Status::from_failures(failures);
    writeln!(
        summary,
        "verdict: {}",
        if status == Status::Passed { "pass" } else { "FAIL" }
    )?;
    let report = json!({
        "provenance": provenance("certify", loaded.sha256, &ctx),
        "operator": op.descriptor(),
        "pattern": pattern,
        "delta": delta_upper,
        "delta_bound": delta_bound,
        "checks": results,
        "expectations": expectations,
        "passed": status == Status::Passed,
    });
    let mut out = Outputs::default();
    out.add_json("certificate.json", &report)?;
    out.add("summary.txt", summary.clone().into_bytes());
    finish(out, &common.out)?;
    print!("{summary}");
    Ok(status)
}

const FLIP_HEADER: &str = "perm_index,seed,err_orig_l2,err_flip_l2,err_orig_l1,err_flip_l1,iterations\n";

fn flip_row(seed: Option<u64>, r: &FlipReport) -> String {
    format!(
        "0,{},{:e},{:e},{:e},{:e},{}\n",
        seed.map(|s| s.to_string()).unwrap_or_default(),
        r.err_original_l2,
        r.err_flipped_l2,
        r.err_original_l1,
        r.err_flipped_l1,
        r.flipped.iterations
    )
}

pub fn fliptest(common: &Common) -> Result<Status> {
    let loaded = load::<FliptestConfig>(common.config_path("fliptest")?)?;
    let cfg = loaded.config;
    let mut ctx = Ctx::new(loaded.base, common.seed.unwrap_or(cfg.seed));
    let op = cfg.operator.build(&mut ctx)?.op;
    let x = cfg.signal.build(&mut ctx, "signal")?;
    let n = op.n_in();
    if x.len() != n {
        bail!("signal has length {}, operator expects {n}", x.len());
    }
    let pattern = cfg.pattern.as_ref().map(|p| p.build(n)).transpose()?;
    let need_pattern = || pattern.as_ref().ok_or_else(|| anyhow!("this flip test needs a \"pattern\""));

    let (csv, body, orig, flipped) = match &cfg.test {
        FlipMode::Single { permutation } => {
            let (perm, seed) = match permutation {
                PermutationSpec::Identity {} => (Permutation::identity(n), None),
                PermutationSpec::GlobalReverse {} => (make_permutation(PermutationKind::GlobalReverse, n, None)?, None),
                PermutationSpec::LevelReverse {} => {
                    (make_permutation(PermutationKind::LevelReverse, n, Some(need_pattern()?))?, None)
                }
                PermutationSpec::LevelRandom { seed } => {
                    let s = ctx.seed_for("test.permutation.seed", *seed);
                    let kind = PermutationKind::LevelRandom { seed: s };
                    (make_permutation(kind, n, Some(need_pattern()?))?, Some(s))
                }
                PermutationSpec::Custom { map } => (Permutation::custom(map.clone())?, None),
            };
            let r = run_flip_test(&op, &x, &perm, &cfg.solver, cfg.eps)?;
            let csv = format!("{FLIP_HEADER}{}", flip_row(seed, &r));
            let (o, f) = (r.err_original_l2, r.err_flipped_l2);
            (csv, json!({ "mode": "single", "report": r }), o, f)
        }
        FlipMode::Sweep { count, seed } => {
            let p = need_pattern()?;
            let s = ctx.seed_for("test.seed", *seed);
            let sweep = permutation_sweep(&op, &x, p, *count, s, &cfg.solver, cfg.eps)?;
            let o = sweep.reports.first().map_or(0.0, |r| r.err_original_l2);
            let f = sweep.summary.mean;
            let body = json!({
                "mode": "sweep",
                "summary": sweep.summary,
                "original": sweep.reports.first().map(|r| r.original.clone()),
                "seeds": sweep.seeds,
                "reports": sweep.reports,
            });
            (sweep_csv(&sweep), body, o, f)
        }
        FlipMode::Generalized { weights, options } => {
            let p = need_pattern()?;
            let w = match weights {
                Some(spec) => spec.build(n, Some(p))?,
                None => Weights::ones(n),
            };
            ctx.seeds.insert("test.options.mover.seed".into(), options.mover.seed);
            let r = generalized_flip_test(&op, &x, &w, p, options, &cfg.solver)?;
            let csv = format!("{FLIP_HEADER}{}", flip_row(Some(options.mover.seed), &r.report));
            let (o, f) = (r.report.err_original_l2, r.report.err_flipped_l2);
            (csv, json!({ "mode": "generalized", "report": r }), o, f)
        }
    };

    let mut failures = Vec::new();
    if let Some(ratio) = cfg.expect.flip_ratio_at_least {
        if !(flipped >= ratio * orig) {
            failures.push(format!("flipped error {flipped:e} < {ratio} x original {orig:e}"));
        }
    }
    if let Some(bound) = cfg.expect.original_error_at_most {
        if !(orig <= bound) {
            failures.push(format!("original error {orig:e} > {bound:e}"));
        }
    }
    let status = Status::from_failures(failures);
    let mut report = json!({
        "provenance": provenance("fliptest", loaded.sha256, &ctx),
        "operator": op.descriptor(),
        "passed": status == Status::Passed,
    });
    if let (Value::Object(r), Value::Object(b)) = (&mut report, body) {
        r.extend(b);
    }
    let mut out = Outputs::default();
    out.add("fliptest.csv", csv.into_bytes());
    out.add_json("fliptest.json", &report)?;
    finish(out, &common.out)?;
    println!("original error {orig:e}, flipped error {flipped:e}");
    Ok(status)
}

pub fn recover(common: &Common) -> Result<Status> {
    let loaded = load::<RecoverConfig>(common.config_path("recover")?)?;
    let cfg = loaded.config;
    let mut ctx = Ctx::new(loaded.base, common.seed.unwrap_or(cfg.seed));
    let op = cfg.operator.build(&mut ctx)?.op;
    let n = op.n_in();
    let (y, truth) = match &cfg.measurements {
        MeasurementSpec::File { path } => {
            let bytes = ctx.read(path)?;
            (ingest::vector_from_bytes(path, &bytes)?, None)
        }
        MeasurementSpec::Simulate { signal, noise, seed } => {
            let x = signal.build(&mut ctx, "measurements.signal")?;
            if x.len() != n {
                bail!("signal has length {}, operator expects {n}", x.len());
            }
            let mut y = op.apply(&x);
            if *noise > 0.0 {
                let mut rng = rng_from_seed(ctx.seed_for("measurements.seed", *seed));
                let e = complex_gaussian_vec(&mut rng, y.len());
                let scale = noise / norm2(&e);
                y.iter_mut().zip(&e).for_each(|(v, e)| *v += e * scale);
            }
            (y, Some(x))
        }
    };
    if y.len() != op.n_out() {
        bail!("{} measurements for an operator with {} rows", y.len(), op.n_out());
    }
    let result = match &cfg.problem {
        ProblemSpec::Bp {} => solve_bp(&op, &y, &cfg.solver)?,
        ProblemSpec::Bpdn { eps } => solve_bpdn(&op, &y, *eps, &cfg.solver)?,
        ProblemSpec::Weighted { eps, weights, pattern } => {
            let p = pattern.as_ref().map(|p| p.build(n)).transpose()?;
            let w = weights.build(n, p.as_ref())?;
            solve_weighted_l1(&op, &y, &w, *eps, &cfg.solver)?
        }
    };
    let rel_err = truth
        .as_ref()
        .map(|x| dist2(&result.x, x) / norm2(x).max(f64::MIN_POSITIVE));

    let mut out = Outputs::default();
    out.add("x_hat.csv", csv_bytes(&result.x)?);
    if let Some(render) = &cfg.render {
        let img = match &render.synthesis {
            Some(s) => s.build(&mut ctx)?.op.try_apply(&result.x)?,
            None => result.x.clone(),
        };
        let px: Vec<f64> = img.iter().map(|v| v.re).collect();
        out.add("x_hat.pgm", ingest::encode_pgm(render.cols, render.rows, &px)?);
    }
    let report = json!({
        "provenance": provenance("recover", loaded.sha256, &ctx),
        "operator": op.descriptor(),
        "problem": cfg.problem,
        "diagnostics": SolveDiagnostics::from(&result),
        "primal_residual": result.primal_residual,
        "dual_residual": result.dual_residual,
        "relative_error_l2": rel_err,
    });
    out.add_json("recover.json", &report)?;
    finish(out, &common.out)?;
    println!(
        "objective {:e}, {} iterations, converged {}",
        result.objective, result.iterations, result.converged
    );
    Ok(Status::Passed)
}

pub fn skeps(common: &Common) -> Result<Status> {
    let loaded = load::<SkepsConfig>(common.config_path("skeps")?)?;
    let cfg = loaded.config;
    let mut ctx = Ctx::new(loaded.base, common.seed.unwrap_or(cfg.seed));
    let w = cfg.signal.build(&mut ctx, "signal")?;
    let p = SparsityPattern::full(cfg.boundaries.resolve(w.len())?)?;
    let mut csv = String::from("eps,s");
    for k in 0..p.levels() {
        write!(csv, ",s_{k}")?;
    }
    csv.push('\n');
    let mut rows = Vec::new();
    for &eps in &cfg.eps {
        let sk = p.relative_sparsity(&w, eps)?;
        let total: usize = sk.iter().sum();
        write!(csv, "{eps:e},{total}")?;
        for v in &sk {
            write!(csv, ",{v}")?;
        }
        csv.push('\n');
        rows.push(json!({ "eps": eps, "s": total, "s_k": sk }));
    }
    let report = json!({
        "provenance": provenance("skeps", loaded.sha256, &ctx),
        "boundaries": p.boundaries(),
        "rows": rows,
    });
    let mut out = Outputs::default();
    out.add("skeps.csv", csv.into_bytes());
    out.add_json("skeps.json", &report)?;
    finish(out, &common.out)?;
    Ok(Status::Passed)
}

pub fn pattern(common: &Common) -> Result<Status> {
    let loaded = load::<PatternConfig>(common.config_path("pattern")?)?;
    let cfg = loaded.config;
    let mut ctx = Ctx::new(loaded.base, common.seed.unwrap_or(cfg.seed));
    let n = match (cfg.n, &cfg.pattern.m) {
        (Some(n), _) => n,
        (None, Boundaries::Explicit(m)) => *m.last().ok_or_else(|| anyhow!("empty boundary list"))?,
        (None, Boundaries::Wavelet { .. }) => bail!("wavelet boundaries need \"n\""),
    };
    let p = cfg.pattern.build(n)?;
    let ratio = p.ratio_constant();
    let mut props = json!({
        "pattern": p,
        "n": n,
        "levels": p.levels(),
        "widths": (0..p.levels()).map(|l| p.width(l)).collect::<Vec<_>>(),
        "s_tilde": p.num_elements(),
        "ratio_constant": ratio,
        "ratio_constant_value": if ratio.is_finite() { Some(ratio.value()) } else { None },
        "covers": p.covers(n),
        "recovery_threshold": recovery_threshold(&p).ok(),
        "scaled": cfg.scale.iter().map(|&a| json!({ "a": a, "pattern": p.scaled(a) })).collect::<Vec<_>>(),
    });
    let weights = cfg.weights.as_ref().map(|w| w.build(n, Some(&p))).transpose()?;
    if let Some(w) = &weights {
        props["max_weighted_l0"] = json!(p.max_weighted_l0(w)?);
    }
    if let Some(spec) = &cfg.signal {
        let x = spec.build(&mut ctx, "signal")?;
        if x.len() != n {
            bail!("signal has length {}, expected {n}", x.len());
        }
        let (support, sigma) = p.best_approximation(&x)?;
        let mut sig = json!({
            "sigma": sigma,
            "is_sparse": p.is_sparse(&x),
            "best_support": support.indices(),
        });
        if let Some(w) = &weights {
            let (l0, l1) = weighted_norms(&x, w)?;
            sig["weighted_l0"] = json!(l0);
            sig["weighted_l1"] = json!(l1);
        }
        props["signal"] = sig;
    }
    props["provenance"] = serde_json::to_value(provenance("pattern", loaded.sha256, &ctx))?;
    let mut out = Outputs::default();
    out.add_json("pattern.json", &props)?;
    finish(out, &common.out)?;
    Ok(Status::Passed)
}

/// Command-line overrides for `counterexample`.
#[derive(Debug, Clone, Default)]
pub struct CounterexampleArgs {
    pub name: Option<String>,
    pub a: Option<usize>,
    pub c: Option<usize>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub variant: Option<levelcs::counterexamples::SharpnessVariant>,
    pub nsp_trials: Option<usize>,
    pub halved_trials: Option<usize>,
}

pub fn counterexample(common: &Common, args: &CounterexampleArgs) -> Result<Status> {
    let (cfg, sha, base) = match &common.config {
        Some(path) => {
            let l = load::<CounterexampleConfig>(path)?;
            (l.config, Some(l.sha256), l.base)
        }
        None => (CounterexampleConfig::default(), None, PathBuf::new()),
    };
    let params = CounterexampleParams {
        name: args
            .name
            .clone()
            .or(cfg.name.clone())
            .ok_or_else(|| anyhow!("counterexample needs a NAME"))?,
        a: args.a.or(cfg.a),
        c: args.c.or(cfg.c),
        rho: args.rho.or(cfg.rho),
        tau: args.tau.or(cfg.tau),
        variant: args.variant.or(cfg.variant),
    };
    let mut opts = cfg.verify.clone().unwrap_or_default();
    opts.seed = common.seed.unwrap_or(cfg.seed);
    if let Some(t) = args.nsp_trials {
        opts.nsp_trials = t;
    }
    if let Some(t) = args.halved_trials {
        opts.halved_trials = t;
    }
    let instances = params.instances()?;
    let effective = json!({ "params": params, "verify": opts });
    let sha = sha.unwrap_or_else(|| sha256_hex(effective.to_string().as_bytes()));
    let mut ctx = Ctx::new(base, opts.seed);
    ctx.seeds.insert("verify.seed".into(), opts.seed);

    let mut out = Outputs::default();
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for inst in &instances {
        let report = verify_with(inst, &opts);
        for f in report.failures() {
            failures.push(format!("{}: {:?} {}", inst.name, f.claim, f.note.clone().unwrap_or_default()));
        }
        println!(
            "{}: {} ({} claims)",
            inst.name,
            if report.passed { "pass" } else { "FAIL" },
            report.outcomes.len()
        );
        let mut bin = Vec::new();
        write_matrix_binary(&inst.u, &mut bin)?;
        let file = format!("{}.U.bin", inst.name);
        out.add(file.clone(), bin);
        entries.push(json!({ "instance": inst, "matrix": file, "verification": report }));
    }
    let status = Status::from_failures(failures);
    let manifest = json!({
        "provenance": provenance("counterexample", sha, &ctx),
        "request": effective,
        "instances": entries,
        "passed": status == Status::Passed,
    });
    out.add_json("counterexample.json", &manifest)?;
    finish(out, &common.out)?;
    Ok(status)
}
