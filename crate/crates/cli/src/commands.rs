//! The four subcommands, each producing a [`ResultTable`].

use serde_json::json;
use sha2::{Digest, Sha256};
use vilenkin::counterexample::{ATOM_IDENTITY_TOLERANCE, SPECTRUM_TOLERANCE};
use vilenkin::hardy::ATOM_TOLERANCE;
use vilenkin::identities::{
    check_kernel_identities, ExactKernel, IdentityReport, IDENTITY_TOLERANCE,
};
use vilenkin::{
    character_on, decomposition_check, dirichlet, divergence_experiment, gat_sums, lebesgue_scan,
    partial_sum_norms, rademacher, spectrum_check, validate_atom, AtomicDecomposition, Complex64,
    Counterexample, CounterexampleConfig, CylinderFunction, RadixSystem,
};

use crate::config::{ExperimentConfig, FunctionSpec};
use crate::error::CliError;
use crate::table::{ResultTable, Value};

/// Blocks with `M_alpha` up to this size have their decomposition checked at every `j`.
pub const EXHAUSTIVE_BLOCK_LIMIT: usize = 64;
const BLOCK_SAMPLES: usize = 32;

/// Hex SHA-256 of the effective configuration.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}

fn table(config: &ExperimentConfig, command: &str, columns: &[&str]) -> ResultTable {
    let mut t = ResultTable::new(columns);
    t.set_meta("command", command);
    t.set_meta("config_sha256", config_hash(config));
    t.set_meta("tool_version", env!("CARGO_PKG_VERSION"));
    t
}

fn describe_radix(t: &mut ResultTable, rs: &RadixSystem) {
    t.set_meta("radices", json!(rs.radices()));
    t.set_meta("size", rs.size());
}

/// `L_n`, the averaged constant `A_n`, and both log ratios on a grid of `n`.
pub fn cmd_lebesgue(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let rs = config.radix_system()?;
    let n_max = config.lebesgue_n_max(&rs)?;
    let grid = config.lebesgue_grid(n_max)?;
    let scan = lebesgue_scan(&rs, rs.depth(), n_max)?;
    let mut t = table(
        config,
        "lebesgue",
        &["n", "L_n", "A_n", "A_n/ln n", "L_n/ln n"],
    );
    describe_radix(&mut t, &rs);
    t.set_meta("n_max", n_max);
    for n in grid {
        let (l, a) = (scan.lebesgue(n), scan.average(n));
        let (ra, rl) = if n >= 2 {
            let ln = (n as f64).ln();
            (Value::Float(a / ln), Value::Float(l / ln))
        } else {
            (Value::Missing, Value::Missing)
        };
        t.push(vec![n.into(), l.into(), a.into(), ra, rl]);
    }
    Ok(t)
}

pub fn counterexample_config(config: &ExperimentConfig) -> Result<CounterexampleConfig, CliError> {
    let rs = config.radix_system()?;
    let mut cx = CounterexampleConfig::new(
        rs,
        config.diverge.alphas.clone(),
        config.diverge.phi.clone(),
    );
    cx.growth_threshold = config.diverge.growth_threshold;
    cx.validate()?;
    Ok(cx)
}

/// The divergence ledger at every checkpoint.
pub fn cmd_diverge(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let cx = Counterexample::build(counterexample_config(config)?)?;
    let ledger = divergence_experiment(&cx)?;
    let mut t = table(
        config,
        "diverge",
        &[
            "k",
            "alpha",
            "M",
            "n",
            "lambda",
            "phi_n",
            "strong_sum",
            "Q",
            "block_sum",
            "block_mean",
            "B",
            "head_norm",
            "envelope_excess",
            "lambda_sum",
            "proxy_norm",
        ],
    );
    describe_radix(&mut t, &cx.config().radix);
    t.set_meta(
        "phi",
        serde_json::to_value(&cx.config().phi).expect("phi serializes"),
    );
    t.set_meta("h1_upper", ledger.h1_upper);
    t.set_meta("proxy_norm", ledger.proxy_norm);
    if ledger.rows.len() >= 2 {
        t.set_meta("q_strictly_increasing", ledger.strictly_increasing);
    }
    for r in &ledger.rows {
        t.push(vec![
            r.k.into(),
            r.alpha.into(),
            r.block_start.into(),
            r.n.into(),
            r.lambda.into(),
            r.phi_n.into(),
            r.strong_sum.into(),
            r.q.into(),
            r.block_sum.into(),
            r.block_mean.into(),
            r.lower_bound.into(),
            r.head_norm.into(),
            r.envelope_excess.into(),
            ledger.h1_upper.into(),
            ledger.proxy_norm.into(),
        ]);
    }
    Ok(t)
}

/// The test function and an atomic upper bound for its `H_1` norm.
pub fn build_function(config: &ExperimentConfig) -> Result<(CylinderFunction, f64), CliError> {
    let rs = config.radix_system()?;
    let d = rs.depth();
    let f = match &config.strong.function {
        FunctionSpec::Zero => CylinderFunction::zeros(&rs, d)?,
        FunctionSpec::Constant { value } => {
            CylinderFunction::constant(&rs, d, Complex64::new(*value, 0.0))?
        }
        FunctionSpec::Character { n } => character_on(&rs, *n, d)?,
        FunctionSpec::Polynomial { coeffs } => {
            let mut f = CylinderFunction::zeros(&rs, d)?;
            for entry in coeffs {
                let (k, c) = match entry.as_slice() {
                    [k, re] => (*k, Complex64::new(*re, 0.0)),
                    [k, re, im] => (*k, Complex64::new(*re, *im)),
                    _ => {
                        return Err(CliError::Config(format!(
                            "polynomial entry {entry:?} is not [k, re] or [k, re, im]"
                        )))
                    }
                };
                if k < 0.0 || k.fract() != 0.0 {
                    return Err(CliError::Config(format!(
                        "polynomial index {k} is not a natural number"
                    )));
                }
                f = &f + &character_on(&rs, k as usize, d)?.scale(c);
            }
            f
        }
        FunctionSpec::Counterexample => {
            let cx = Counterexample::build(counterexample_config(config)?)?;
            let upper = cx.lambda_sum();
            return Ok((cx.function().clone(), upper));
        }
    };
    let upper = AtomicDecomposition::trivial(&f)?.h1_upper_bound()?;
    Ok((f, upper))
}

/// Strong sums, the Gát mean and the log-normalized ratio on a grid of `n`.
pub fn cmd_strong(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let rs = config.radix_system()?;
    let grid = config.strong_grid(&rs)?;
    let (f, upper) = build_function(config)?;
    let n_max = grid.last().copied().unwrap_or(2);
    let norms = partial_sum_norms(&f, n_max);
    let gat = gat_sums(&f, n_max);
    let mut t = table(
        config,
        "strong",
        &[
            "n",
            "strong_sum",
            "gat_sum",
            "G",
            "T_log",
            "T_unif",
            "h1_upper",
            "R",
        ],
    );
    describe_radix(&mut t, &rs);
    let mut running = 0.0;
    let mut next = 1;
    for n in grid {
        while next <= n {
            running += norms[next];
            next += 1;
        }
        let nf = n as f64;
        let ln = nf.ln();
        let t_log = running / (nf * ln);
        let r = if t_log == 0.0 { 0.0 } else { t_log / upper };
        t.push(vec![
            n.into(),
            running.into(),
            gat[n].into(),
            (gat[n] / ln).into(),
            t_log.into(),
            (running / nf).into(),
            upper.into(),
            r.into(),
        ]);
    }
    Ok(t)
}

/// Options for [`cmd_validate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Perturb `D_n` by `1e-6` at the origin cell for `n >= 2`.
    pub corrupt_kernel: bool,
}

fn corrupted(rs: &RadixSystem, n: usize, d: usize) -> vilenkin::Result<CylinderFunction> {
    let mut k = dirichlet(rs, n, d)?;
    if n >= 2 {
        k.values_mut()[0] += Complex64::new(1e-6, 0.0);
    }
    Ok(k)
}

fn row(
    name: &str,
    cases: usize,
    residual: f64,
    tolerance: f64,
    exhaustive: bool,
) -> IdentityReport {
    IdentityReport {
        name: name.to_string(),
        cases,
        max_residual: residual,
        tolerance,
        exhaustive,
    }
}

/// Runs every exact identity; fails with exit code 3 if any is violated.
pub fn validation_reports(
    config: &ExperimentConfig,
    options: ValidateOptions,
) -> Result<Vec<IdentityReport>, CliError> {
    let rs = config.radix_system()?;
    let d = rs.depth();
    let mut reports = if options.corrupt_kernel {
        check_kernel_identities(&rs, d, &corrupted)?
    } else {
        check_kernel_identities(&rs, d, &ExactKernel)?
    };

    // r_alpha D_{M_alpha} = D_{2 M_alpha} - D_{M_alpha} for every level below the depth
    let mut worst = 0.0f64;
    for alpha in 0..d {
        let grid = alpha + 1;
        let m = rs.modulus(alpha);
        let product = &rademacher(&rs, alpha)? * &dirichlet(&rs, m, grid)?;
        let difference = &dirichlet(&rs, 2 * m, grid)? - &dirichlet(&rs, m, grid)?;
        worst = worst.max(product.max_abs_diff(&difference)?);
    }
    reports.push(row(
        "atom_identity",
        d,
        worst,
        ATOM_IDENTITY_TOLERANCE,
        true,
    ));

    let cx = Counterexample::build(counterexample_config(config)?)?;
    let cfg = cx.config();

    // atom certificates: a violation is reported as an infinite residual
    let mut worst = 0.0f64;
    for (_, atom) in cx.decomposition().terms() {
        let f = atom.to_function(&rs, cx.decomposition().depth())?;
        let residual = match validate_atom(&f, atom.interval()) {
            Ok(cert) => cert
                .integral
                .abs()
                .max(cert.sup * cert.measure - 1.0)
                .max(0.0),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(residual);
    }
    reports.push(row(
        "atom_certificates",
        cfg.alphas.len(),
        worst,
        ATOM_TOLERANCE,
        true,
    ));

    let residual = spectrum_check(cx.function(), cfg).unwrap_or(f64::INFINITY);
    reports.push(row(
        "spectrum",
        rs.size(),
        residual,
        SPECTRUM_TOLERANCE,
        true,
    ));

    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut exhaustive = true;
    for k in 0..cfg.alphas.len() {
        let m = cfg.block_start(k);
        let js: Vec<usize> = if m <= EXHAUSTIVE_BLOCK_LIMIT {
            (m..=2 * m).collect()
        } else {
            exhaustive = false;
            let mut js: Vec<usize> = (0..BLOCK_SAMPLES)
                .map(|i| m + i * m / BLOCK_SAMPLES)
                .collect();
            js.extend([m + 1, 2 * m - 1, 2 * m]);
            js.sort_unstable();
            js.dedup();
            js
        };
        for j in js {
            worst = worst.max(decomposition_check(cx.function(), cfg, j, k)?);
            cases += 1;
        }
    }
    reports.push(row(
        "block_decomposition",
        cases,
        worst,
        IDENTITY_TOLERANCE,
        exhaustive,
    ));
    Ok(reports)
}

pub fn cmd_validate(
    config: &ExperimentConfig,
    options: ValidateOptions,
) -> Result<ResultTable, CliError> {
    let reports = validation_reports(config, options)?;
    let mut t = table(
        config,
        "validate",
        &[
            "identity",
            "cases",
            "max_residual",
            "tolerance",
            "exhaustive",
            "passed",
        ],
    );
    let rs = config.radix_system()?;
    describe_radix(&mut t, &rs);
    for r in &reports {
        t.push(vec![
            r.name.as_str().into(),
            r.cases.into(),
            r.max_residual.into(),
            r.tolerance.into(),
            r.exhaustive.into(),
            r.passed().into(),
        ]);
    }
    Ok(t)
}

/// Names of the failed identities in a validate table.
pub fn failed_identities(t: &ResultTable) -> Vec<String> {
    let name = t.column("identity").expect("validate table");
    let passed = t.column("passed").expect("validate table");
    t.rows
        .iter()
        .filter(|r| r[passed] != Value::Bool(true))
        .map(|r| match &r[name] {
            Value::Text(s) => s.clone(),
            other => format!("{other:?}"),
        })
        .collect()
}
