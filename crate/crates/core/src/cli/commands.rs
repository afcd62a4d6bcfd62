use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use super::files::{read_config, read_law, read_tree};
use super::scan::{scan_rows, SCAN_HEADER};
use super::{CliError, Outcome, Period, TemperatureArgs, EXIT_VERIFICATION};
use crate::ggm::{
    configuration_probability, marginal_table, marginal_weight, partition_function, GradientSampler,
};
use crate::identify;
use crate::model::{normalisability_check, Normalisability, PeriodicBoundaryLaw};
use crate::solver::{
    check_u_constant, side_series, solution_catalog, solve_periodic_generic, verify_fixed_point,
    verify_fixed_point_truncated, SolutionLabel, USequenceWindow,
};
use crate::tolerance;
use crate::tree::{n_vector, FiniteSubtree};

type CmdResult = Result<Outcome, CliError>;

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub(super) fn solve(
    period: Period,
    temperature: &TemperatureArgs,
    k: usize,
    q: Option<usize>,
    seeds: &[f64],
    json: bool,
) -> CmdResult {
    let temp = temperature.resolve()?;
    let tau = temp.tau();
    let mut found: Vec<(String, PeriodicBoundaryLaw)> = Vec::new();
    match period {
        Period::Generic => {
            let q = q.ok_or_else(|| CliError::usage("--period generic needs --q"))?;
            let law = solve_periodic_generic(q, tau, k, seeds).ok_or_else(|| {
                CliError::verification(format!("no period-{q} solution reached from the seeds"))
            })?;
            found.push((SolutionLabel::Generic.to_string(), law));
        }
        _ => {
            if k != 2 && period != Period::Three {
                return Err(CliError::usage("periods 2 and 4 are solved for k = 2 only"));
            }
            let catalog = solution_catalog(tau, k)?;
            for e in catalog.entries {
                let keep = match period {
                    Period::Two => matches!(
                        e.label,
                        SolutionLabel::Trivial
                            | SolutionLabel::TwoPeriodicA1
                            | SolutionLabel::TwoPeriodicA2
                    ),
                    Period::Four => e.label.in_four_periodic_family(),
                    _ => e.label == SolutionLabel::Trivial || e.label.in_three_periodic_family(),
                };
                if keep {
                    found.push((e.label.to_string(), e.law));
                }
            }
        }
    }

    let rows: Vec<(String, PeriodicBoundaryLaw, f64)> = found
        .into_iter()
        .map(|(l, law)| {
            let r = verify_fixed_point(&law, temp);
            (l, law, r)
        })
        .collect();
    let failed = rows.iter().any(|r| r.2 > tolerance::FIXED_POINT);
    let nontrivial = rows.iter().filter(|r| r.1.period() > 1).count();
    let stdout = if json {
        pretty(json!({
            "tau": tau,
            "k": k,
            "solutions": rows.iter().map(|(l, law, r)| json!({
                "label": l, "u": law.u(), "z": law.z(), "residual": r,
            })).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = format!(
            "# tau = {tau}, theta = {}, k = {k}\nlabel\tu\tz\tresidual\n",
            temp.theta()
        );
        for (l, law, r) in &rows {
            let _ = writeln!(s, "{l}\t{}\t{}\t{r:e}", list(&law.u()), list(law.z()));
        }
        let _ = writeln!(s, "# solutions: {} (nontrivial: {nontrivial})", rows.len());
        s
    };
    Ok(Outcome {
        stdout,
        code: if failed { EXIT_VERIFICATION } else { 0 },
    })
}

pub(super) fn scan(tau_min: f64, tau_max: f64, step: f64, k: usize) -> CmdResult {
    let rows = scan_rows(tau_min, tau_max, step, k)?;
    let mut s = String::from(SCAN_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    Ok(Outcome::ok(s))
}

pub(super) fn verify(path: &Path, temperature: &TemperatureArgs, json: bool) -> CmdResult {
    let law = read_law(path).map_err(CliError::usage)?;
    let temp = temperature.resolve()?;
    let residual = verify_fixed_point(&law, temp);
    let truncated = verify_fixed_point_truncated(&law, temp, 400);
    let constant = USequenceWindow::from_law(&law, temp.tau(), 2 * law.period() + 2)
        .and_then(|w| check_u_constant(&w));
    let norm = normalisability_check(&law);
    let sides = side_series(&law, temp);
    let ok = residual <= tolerance::FIXED_POINT;

    let stdout = if json {
        pretty(json!({
            "residual": residual,
            "residual_truncated": truncated.residual,
            "truncation_bound": truncated.tail_bound,
            "u_constant": constant.as_ref().ok().map(|c| json!({"c": c.0, "spread": c.1})),
            "normalisable": matches!(norm, Normalisability::Normalisable),
            "side_series": sides.as_ref().ok().map(|s| json!({
                "l0": s.l0, "r0": s.r0, "identity_gap": s.identity_gap,
            })),
            "ok": ok,
        }))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "residual = {residual:e}");
        let _ = writeln!(
            s,
            "residual (window 400) = {:e}, truncation bound = {:e}",
            truncated.residual, truncated.tail_bound
        );
        match &constant {
            Ok((c, spread)) => {
                let _ = writeln!(s, "u-system constant = {c}, spread = {spread:e}");
            }
            Err(e) => {
                let _ = writeln!(s, "u-system constant unavailable: {e}");
            }
        }
        match norm {
            Normalisability::Normalisable => s.push_str("normalisable\n"),
            Normalisability::NonNormalisable { per_period_sum } => {
                let _ = writeln!(s, "not normalisable (per-period sum {per_period_sum})");
            }
        }
        match &sides {
            Ok(side) => {
                let _ = writeln!(
                    s,
                    "side series l0 = {}, r0 = {}, identity gap = {:e}",
                    side.l0, side.r0, side.identity_gap
                );
            }
            Err(e) => {
                let _ = writeln!(s, "side series unavailable: {e}");
            }
        }
        s.push_str(if ok { "status: ok\n" } else { "status: fail\n" });
        s
    };
    Ok(Outcome {
        stdout,
        code: if ok { 0 } else { EXIT_VERIFICATION },
    })
}

fn load_tree(path: Option<&Path>, law: &PeriodicBoundaryLaw) -> Result<FiniteSubtree, CliError> {
    let tree = match path {
        Some(p) => read_tree(p).map_err(CliError::usage)?,
        None => FiniteSubtree::single_bond(law.k())?,
    };
    if tree.k() != law.k() {
        return Err(CliError::usage(format!(
            "tree has k = {} but the law has k = {}",
            tree.k(),
            law.k()
        )));
    }
    Ok(tree)
}

pub(super) fn marginal(
    law_path: &Path,
    tree_path: Option<&Path>,
    temperature: &TemperatureArgs,
    config: Option<&Path>,
    bond: Option<usize>,
    window: u32,
    json: bool,
) -> CmdResult {
    let law = read_law(law_path).map_err(CliError::usage)?;
    let tree = load_tree(tree_path, &law)?;
    let theta = temperature.resolve()?.theta();

    if let Some(cfg) = config {
        let zeta = read_config(cfg, &tree).map_err(CliError::usage)?;
        let weight = marginal_weight(&law, &tree, &zeta, theta)?;
        let normalizer = partition_function(&law, &tree, theta)?;
        let p = configuration_probability(&law, &tree, &zeta, theta)?;
        let stdout = if json {
            pretty(json!({"probability": p, "weight": weight, "normalizer": normalizer}))
        } else {
            format!("probability = {p}\nweight = {weight}\nnormalizer = {normalizer}\n")
        };
        return Ok(Outcome::ok(stdout));
    }

    if let Some(b) = bond {
        if b >= tree.bonds().len() {
            return Err(CliError::usage(format!(
                "bond {b} out of range (tree has {} bonds)",
                tree.bonds().len()
            )));
        }
    }
    let table = marginal_table(&law, &tree, theta, window)?;
    let selected: Vec<usize> = match bond {
        Some(b) => vec![b],
        None => (0..table.bonds.len()).collect(),
    };
    let m = window as i64;
    let stdout = if json {
        pretty(json!({
            "normalizer": table.normalizer,
            "tail_bound": table.tail_bound,
            "window": window,
            "bonds": selected.iter().map(|&b| json!({
                "index": b,
                "from": table.bonds[b].from,
                "to": table.bonds[b].to,
                "probabilities": table.probabilities[b],
            })).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = format!(
            "# normalizer = {}\n# tail_bound = {:e}\nbond,from,to,zeta,probability\n",
            table.normalizer, table.tail_bound
        );
        for &b in &selected {
            let bd = table.bonds[b];
            for zeta in -m..=m {
                let p = table.probabilities[b][(zeta + m) as usize];
                let _ = writeln!(s, "{b},{},{},{zeta},{p:.16e}", bd.from, bd.to);
            }
        }
        s
    };
    Ok(Outcome::ok(stdout))
}

pub(super) fn classify(temperature: &TemperatureArgs, k: usize, json: bool) -> CmdResult {
    let tau = temperature.resolve()?.tau();
    let cat = identify::classify(tau, k)?;
    let stdout = if json {
        pretty(json!({
            "tau": tau,
            "k": k,
            "count": cat.count(),
            "four_periodic": cat.four_periodic_count(),
            "three_periodic": cat.three_periodic_count(),
            "classes": cat.classes,
            "decisions": cat.decisions,
        }))
    } else {
        let mut s = format!(
            "# tau = {tau}, k = {k}\n# GGMs: {} (four-periodic family: {}, three-periodic family: {})\n",
            cat.count(),
            cat.four_periodic_count(),
            cat.three_periodic_count()
        );
        for (i, c) in cat.classes.iter().enumerate() {
            let members: Vec<&str> = c.members.iter().map(|m| m.as_str()).collect();
            let _ = writeln!(
                s,
                "class {}: {} z = {}",
                i + 1,
                members.join(" ~ "),
                list(c.law.z())
            );
        }
        for d in &cat.decisions {
            let _ = writeln!(
                s,
                "{} {} {}: {} [{:?}; criterion {:?}, marginals {:?}]",
                if d.merged { "merge" } else { "split" },
                d.left,
                d.right,
                d.criterion,
                d.basis,
                d.analytic.verdict,
                d.numeric.verdict
            );
        }
        s
    };
    Ok(Outcome::ok(stdout))
}

pub(super) fn sample(
    law_path: &Path,
    tree_path: Option<&Path>,
    temperature: &TemperatureArgs,
    seed: u64,
    n: usize,
    window: u32,
) -> CmdResult {
    let law = read_law(law_path).map_err(CliError::usage)?;
    let tree = load_tree(tree_path, &law)?;
    let theta = temperature.resolve()?.theta();
    let sampler = GradientSampler::new(&law, &tree, theta, window)?;
    let samples = sampler.sample_many(seed, n);

    let mut s = format!("# tail_bound = {:e}\nsample", sampler.tail_bound());
    for b in tree.bonds() {
        let _ = write!(s, ",{}->{}", b.from, b.to);
    }
    s.push('\n');
    let mut histogram: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, cfg) in samples.iter().enumerate() {
        let _ = write!(s, "{i}");
        for v in cfg.values() {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
        *histogram
            .entry(n_vector(&tree, cfg, law.period())?)
            .or_default() += 1;
    }
    s.push_str("\nn_vector,count,frequency\n");
    for (nv, count) in histogram {
        let key: Vec<String> = nv.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            s,
            "{},{count},{:.16e}",
            key.join(";"),
            count as f64 / n as f64
        );
    }
    Ok(Outcome::ok(s))
}
