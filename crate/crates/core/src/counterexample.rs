//! The divergent strong-mean construction.
//!
//! For checkpoints `alpha_1 < ... < alpha_K` and a weight `phi`, the function
//! `f = sum_k lambda_k a_k` with `a_k = r_{alpha_k} D_{M_{alpha_k}}` and
//! `lambda_k = phi(2 M_{alpha_k})^{1/2} / ln^{1/2} M_{alpha_k}` has spectrum
//! equal to `lambda_k` on `[M_{alpha_k}, 2 M_{alpha_k})` and zero elsewhere.
//! Its strong sums `(1 / (n phi_n)) sum_{l <= n} ||S_l f||_1` are evaluated at
//! `n_k = 2 M_{alpha_k}` and recorded in a [`DivergenceLedger`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{CylinderFunction, Norm};
use crate::hardy::{h1_proxy_norm, validate_atom, Atom, AtomicDecomposition, Interval};
use crate::operators::{dirichlet, partial_sum, partial_sum_norms};
use crate::radix::RadixSystem;
use crate::transform::{character_on, character_values_into, forward, rademacher};

/// Tolerance for the exact spectral block structure and the block decomposition.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;
/// Tolerance for comparing the two formulas of `a_k`.
pub const ATOM_IDENTITY_TOLERANCE: f64 = 1e-12;

/// Nondecreasing weight `phi: {1, 2, ...} -> [1, inf)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiFunction {
    /// `phi_n = value`
    Const { value: f64 },
    /// `phi_n = max(1, sqrt(ln n))`
    #[default]
    SqrtLog,
    /// `phi_n = max(1, t / (ln t)^2)` with `t = max(ln n, e^2)`
    LogOverLoglog2,
    /// Step function: `phi_n` is the value of the last breakpoint `<= n`.
    Table { points: Vec<(u64, f64)> },
}

impl PhiFunction {
    pub fn one() -> Self {
        PhiFunction::Const { value: 1.0 }
    }

    pub fn eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("phi is defined for n >= 1".into()));
        }
        let ln = (n as f64).ln();
        Ok(match self {
            PhiFunction::Const { value } => *value,
            PhiFunction::SqrtLog => ln.sqrt().max(1.0),
            PhiFunction::LogOverLoglog2 => {
                // below t = e^2 the ratio t / (ln t)^2 is decreasing; freeze it there
                let t = ln.max(std::f64::consts::E.powi(2));
                (t / t.ln().powi(2)).max(1.0)
            }
            PhiFunction::Table { points } => points
                .iter()
                .take_while(|(k, _)| *k <= n)
                .last()
                .map(|(_, v)| *v)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("phi table has no breakpoint at or below {n}"))
                })?,
        })
    }

    /// Checks `phi >= 1` and monotonicity on the given arguments.
    pub fn check_on(&self, ns: &[u64]) -> Result<()> {
        let mut sorted = ns.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut prev = f64::NEG_INFINITY;
        for n in sorted {
            let v = self.eval(n)?;
            if !(v >= 1.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "phi({n}) = {v} is not in [1, inf)"
                )));
            }
            if v < prev {
                return Err(Error::InvalidConfig(format!("phi decreases at n = {n}")));
            }
            prev = v;
        }
        Ok(())
    }

    /// `max ln(n) / phi_n` over the given arguments.
    pub fn growth_surrogate(&self, ns: &[u64]) -> Result<f64> {
        ns.iter()
            .map(|&n| Ok((n as f64).ln() / self.eval(n)?))
            .try_fold(f64::NEG_INFINITY, |acc, r: Result<f64>| Ok(acc.max(r?)))
    }
}

/// A checkpoint sequence and weight on a fixed radix system.
#[derive(Debug, Clone)]
pub struct CounterexampleConfig {
    pub radix: RadixSystem,
    pub alphas: Vec<usize>,
    pub phi: PhiFunction,
    /// Lower bound that `max_k ln(n_k) / phi(n_k)` must exceed.
    pub growth_threshold: f64,
}

impl CounterexampleConfig {
    pub fn new(radix: RadixSystem, alphas: Vec<usize>, phi: PhiFunction) -> Self {
        Self {
            radix,
            alphas,
            phi,
            growth_threshold: 1.0,
        }
    }

    /// Walsh-Paley, depth 14, checkpoints (3, 7, 12), `phi = sqrt_log`.
    pub fn default_walsh() -> Self {
        Self::new(RadixSystem::walsh(14), vec![3, 7, 12], PhiFunction::SqrtLog)
    }

    pub fn depth(&self) -> usize {
        self.radix.depth()
    }

    /// `M_{alpha_k}`.
    pub fn block_start(&self, k: usize) -> usize {
        self.radix.modulus(self.alphas[k])
    }

    /// Checkpoint arguments `n_k = 2 M_{alpha_k}`.
    pub fn checkpoints(&self) -> Vec<u64> {
        (0..self.alphas.len())
            .map(|k| 2 * self.block_start(k) as u64)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.depth();
        for w in self.alphas.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidConfig(format!(
                    "checkpoints must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &a in &self.alphas {
            if a == 0 {
                return Err(Error::InvalidCheckpoint(a));
            }
            if a >= n {
                return Err(Error::InvalidConfig(format!(
                    "checkpoint {a} needs depth > {a}, radix depth is {n}"
                )));
            }
        }
        let ns = self.checkpoints();
        self.phi.check_on(&ns)?;
        for &a in &self.alphas {
            let l = lambda_k(&self.phi, &self.radix, a)?;
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "lambda for checkpoint {a} is {l}"
                )));
            }
        }
        if !ns.is_empty() {
            let g = self.phi.growth_surrogate(&ns)?;
            if !(g > self.growth_threshold) {
                return Err(Error::InvalidConfig(format!(
                    "max ln(n)/phi(n) over checkpoints is {g}, threshold {}",
                    self.growth_threshold
                )));
            }
        }
        Ok(())
    }
}

/// `lambda = phi(2 M_alpha)^{1/2} / (ln M_alpha)^{1/2}`.
pub fn lambda_k(phi: &PhiFunction, rs: &RadixSystem, alpha: usize) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidCheckpoint(alpha));
    }
    if alpha >= rs.depth() {
        return Err(Error::DepthExceeded {
            requested: alpha,
            available: rs.depth(),
        });
    }
    let m = rs.modulus(alpha);
    Ok(phi.eval(2 * m as u64)?.sqrt() / (m as f64).ln().sqrt())
}

/// `a = r_alpha D_{M_alpha}` on the depth-`depth` grid, cross-checked against
/// `D_{2 M_alpha} - D_{M_alpha}` and certified on `I_alpha(0)`.
pub fn atom_k(rs: &RadixSystem, alpha: usize, depth: usize) -> Result<Atom> {
    if alpha >= rs.depth() {
        return Err(Error::DepthExceeded {
            requested: alpha,
            available: rs.depth(),
        });
    }
    let depth = depth.max(alpha + 1);
    let m = rs.modulus(alpha);
    let product = &rademacher(rs, alpha)?.refine(depth)? * &dirichlet(rs, m, depth)?;
    let difference = &dirichlet(rs, 2 * m, depth)? - &dirichlet(rs, m, depth)?;
    let residual = product.max_abs_diff(&difference)?;
    if residual > ATOM_IDENTITY_TOLERANCE {
        return Err(Error::IdentityViolated {
            name: format!("r_{alpha} D_M = D_2M - D_M"),
            residual,
        });
    }
    let interval = Interval::cylinder(rs, rs.zero(), alpha)?;
    validate_atom(&product, Some(&interval)).map_err(|v| Error::InvalidAtom {
        index: alpha,
        reason: format!("{v:?}"),
    })?;
    Ok(Atom::Supported {
        function: product,
        interval,
    })
}

/// `f = sum_k lambda_k a_k` on the full depth, with its decomposition.
pub fn assemble_f(
    config: &CounterexampleConfig,
) -> Result<(CylinderFunction, AtomicDecomposition)> {
    config.validate()?;
    let rs = &config.radix;
    let depth = config.depth();
    let mut dec = AtomicDecomposition::new(rs, depth)?;
    for &alpha in &config.alphas {
        let lambda = lambda_k(&config.phi, rs, alpha)?;
        let atom = atom_k(rs, alpha, alpha + 1)?;
        dec.push(Complex64::new(lambda, 0.0), atom)?;
    }
    Ok((dec.function().clone(), dec))
}

/// A built instance: configuration, coefficients and the assembled function.
#[derive(Debug, Clone)]
pub struct Counterexample {
    config: CounterexampleConfig,
    lambdas: Vec<f64>,
    decomposition: AtomicDecomposition,
}

impl Counterexample {
    pub fn build(config: CounterexampleConfig) -> Result<Self> {
        let (_, decomposition) = assemble_f(&config)?;
        let lambdas = config
            .alphas
            .iter()
            .map(|&a| lambda_k(&config.phi, &config.radix, a))
            .collect::<Result<_>>()?;
        Ok(Self {
            config,
            lambdas,
            decomposition,
        })
    }

    pub fn config(&self) -> &CounterexampleConfig {
        &self.config
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn function(&self) -> &CylinderFunction {
        self.decomposition.function()
    }

    pub fn decomposition(&self) -> &AtomicDecomposition {
        &self.decomposition
    }

    /// Finite stand-in for the summability of the coefficients: `sum_k lambda_k`.
    pub fn lambda_sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

/// First Fourier coefficient that breaks the block structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumViolation {
    pub index: usize,
    pub expected: f64,
    pub found_re: f64,
    pub found_im: f64,
}

/// Verifies `f^(j) = lambda_k` on `[M_{alpha_k}, 2 M_{alpha_k})` and zero
/// elsewhere; returns the largest deviation on success.
pub fn spectrum_check(
    f: &CylinderFunction,
    config: &CounterexampleConfig,
) -> std::result::Result<f64, SpectrumViolation> {
    let coeffs = forward(f).into_coeffs();
    let mut expected = vec![0.0; coeffs.len()];
    for (k, &alpha) in config.alphas.iter().enumerate() {
        let lambda = lambda_k(&config.phi, &config.radix, alpha).unwrap_or(f64::NAN);
        let m = config.block_start(k);
        for e in expected.iter_mut().take((2 * m).min(coeffs.len())).skip(m) {
            *e = lambda;
        }
    }
    let mut worst = 0.0f64;
    for (index, (c, &e)) in coeffs.iter().zip(&expected).enumerate() {
        let dev = (c - Complex64::new(e, 0.0)).norm();
        if !(dev <= SPECTRUM_TOLERANCE) {
            return Err(SpectrumViolation {
                index,
                expected: e,
                found_re: c.re,
                found_im: c.im,
            });
        }
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// `||S_j f - (S_M f + lambda_k psi_M D_{j-M})||_inf` for `M = M_{alpha_k}`,
/// `M <= j <= 2M`. `k` is zero-based.
pub fn decomposition_check(
    f: &CylinderFunction,
    config: &CounterexampleConfig,
    j: usize,
    k: usize,
) -> Result<f64> {
    let alpha = *config
        .alphas
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("no checkpoint with index {k}")))?;
    let rs = &config.radix;
    let m = rs.modulus(alpha);
    if j < m || j > 2 * m {
        return Err(Error::InvalidArgument(format!(
            "j = {j} outside block [{m}, {}]",
            2 * m
        )));
    }
    let d = f.depth();
    let lambda = lambda_k(&config.phi, rs, alpha)?;
    let lhs = partial_sum(f, j)?;
    let kernel = &character_on(rs, m, d)? * &dirichlet(rs, j - m, d)?;
    let rhs = &partial_sum(f, m)? + &kernel.scale(Complex64::new(lambda, 0.0));
    lhs.max_abs_diff(&rhs)
}

/// One checkpoint of the divergence ledger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceRow {
    /// One-based checkpoint number.
    pub k: usize,
    pub alpha: usize,
    /// `M_{alpha_k}`.
    pub block_start: usize,
    /// `n_k = 2 M_{alpha_k}`.
    pub n: usize,
    pub lambda: f64,
    pub phi_n: f64,
    /// `sum_{l=1}^{n_k} ||S_l f||_1`.
    pub strong_sum: f64,
    /// `strong_sum / (n_k phi_n)`.
    pub q: f64,
    /// `sum_{M <= l <= 2M} ||S_l f||_1`.
    pub block_sum: f64,
    /// `block_sum / (n_k phi_n)`.
    pub block_mean: f64,
    /// `ln^{1/2}(M) / phi_n^{1/2}`.
    pub lower_bound: f64,
    /// `||S_M f||_1`.
    pub head_norm: f64,
    /// `max_l (| ||S_l f||_1 - lambda L(l - M) | - ||S_M f||_1)` over the block;
    /// nonpositive when the triangle envelope holds.
    pub envelope_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceLedger {
    pub rows: Vec<DivergenceRow>,
    /// `sum_k lambda_k`, the atomic upper bound for `||f||_{H_1}`.
    pub h1_upper: f64,
    /// `||f*||_1`.
    pub proxy_norm: f64,
    /// `Q(n_1) < Q(n_2) < ...`
    pub strictly_increasing: bool,
}

/// Strong sums at every checkpoint, evaluated block by block.
///
/// Gaps between blocks carry zero coefficients, so `S_l f` is frozen there and
/// contributes `count * norm`. Inside block `k`, `S_l f = S_M f + lambda_k psi_M
/// D_{l-M}` is constant on depth-`(alpha_k + 1)` cells, and `D_{l-M}` is
/// streamed on that grid.
pub fn divergence_experiment(cx: &Counterexample) -> Result<DivergenceLedger> {
    let config = cx.config();
    let rs = &config.radix;
    let mut rows = Vec::with_capacity(config.alphas.len());
    let mut head = CylinderFunction::zeros(rs, 1)?;
    let mut prev_end = 0usize;
    let mut running = 0.0;
    let mut psi = Vec::new();
    for (k, &alpha) in config.alphas.iter().enumerate() {
        let lambda = Complex64::new(cx.lambdas()[k], 0.0);
        let m = rs.modulus(alpha);
        let d = alpha + 1;
        let size = rs.modulus(d);
        let head_norm = head.norm(Norm::L1);
        running += (m - prev_end) as f64 * head_norm;

        let base = head.refine(d)?.into_values();
        let shift = rademacher(rs, alpha)?.into_values();
        let mut kernel = vec![Complex64::new(0.0, 0.0); size];
        let mut block_sum = head_norm;
        let mut excess = 0.0f64;
        for i in 0..m {
            character_values_into(rs, i, d, &mut psi)?;
            let mut norm_s = 0.0;
            let mut norm_d = 0.0;
            for c in 0..size {
                kernel[c] += psi[c];
                norm_d += kernel[c].norm();
                norm_s += (base[c] + lambda * shift[c] * kernel[c]).norm();
            }
            let norm_s = norm_s / size as f64;
            let lebesgue = norm_d / size as f64;
            excess = excess.max((norm_s - lambda.re * lebesgue).abs() - head_norm);
            running += norm_s;
            block_sum += norm_s;
        }
        let n = 2 * m;
        let phi_n = config.phi.eval(n as u64)?;
        let denom = n as f64 * phi_n;
        rows.push(DivergenceRow {
            k: k + 1,
            alpha,
            block_start: m,
            n,
            lambda: lambda.re,
            phi_n,
            strong_sum: running,
            q: running / denom,
            block_sum,
            block_mean: block_sum / denom,
            lower_bound: (m as f64).ln().sqrt() / phi_n.sqrt(),
            head_norm,
            envelope_excess: excess,
        });
        let values = (0..size)
            .map(|c| base[c] + lambda * shift[c] * kernel[c])
            .collect();
        head = CylinderFunction::new(rs, d, values)?;
        prev_end = n;
    }
    let strictly_increasing = rows.windows(2).all(|w| w[0].q < w[1].q);
    Ok(DivergenceLedger {
        rows,
        h1_upper: cx.decomposition().h1_upper_bound()?,
        proxy_norm: h1_proxy_norm(cx.function()),
        strictly_increasing,
    })
}

/// Log-normalized strong sums against an atomic upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartARow {
    pub function: usize,
    pub n: usize,
    pub strong_sum: f64,
    /// `strong_sum / (n ln n)`.
    pub t_log: f64,
    pub h1_upper: f64,
    /// `t_log / h1_upper`, 0 for the zero function.
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartACheck {
    pub rows: Vec<PartARow>,
    /// Per function: `(min R, max R)` over the grid.
    pub ranges: Vec<(f64, f64)>,
    pub max_r: f64,
}

impl PartACheck {
    /// `max R / min R` for one function; 1 if `R` vanishes identically.
    pub fn spread(&self, function: usize) -> f64 {
        let (lo, hi) = self.ranges[function];
        if hi == 0.0 {
            1.0
        } else if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }
}

/// For each `(f, ||f||_{H_1} upper bound)` and each `n`, the ratio
/// `[(1 / (n ln n)) sum_{k=1}^n ||S_k f||_1] / upper`.
pub fn part_a_check(pairs: &[(CylinderFunction, f64)], ns: &[usize]) -> Result<PartACheck> {
    if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("n = {bad} below 2")));
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();
    let mut ranges = Vec::new();
    for (i, (f, upper)) in pairs.iter().enumerate() {
        let norms = partial_sum_norms(f, n_max);
        let mut prefix = vec![0.0; norms.len()];
        for k in 1..norms.len() {
            prefix[k] = prefix[k - 1] + norms[k];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &n in ns {
            let t_log = prefix[n] / (n as f64 * (n as f64).ln());
            let r = if t_log == 0.0 { 0.0 } else { t_log / upper };
            lo = lo.min(r);
            hi = hi.max(r);
            rows.push(PartARow {
                function: i,
                n,
                strong_sum: prefix[n],
                t_log,
                h1_upper: *upper,
                r,
            });
        }
        ranges.push((lo, hi));
    }
    let max_r = rows.iter().map(|r| r.r).fold(0.0, f64::max);
    Ok(PartACheck {
        rows,
        ranges,
        max_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::strong_sum;

    fn small_config(phi: PhiFunction) -> CounterexampleConfig {
        CounterexampleConfig::new(RadixSystem::walsh(6), vec![1, 3], phi)
    }

    #[test]
    fn lambda_examples() {
        let rs = RadixSystem::walsh(10);
        let one = PhiFunction::one();
        assert!((lambda_k(&one, &rs, 3).unwrap() - 1.0 / 8f64.ln().sqrt()).abs() < 1e-15);
        assert!((lambda_k(&one, &rs, 3).unwrap() - 0.693468).abs() < 1e-6);
        let l7 = lambda_k(&PhiFunction::SqrtLog, &rs, 7).unwrap();
        assert!((l7 - 256f64.ln().powf(0.25) / 128f64.ln().sqrt()).abs() < 1e-15);
        assert!((l7 - 0.696654).abs() < 1e-6);
        for a in 1..9 {
            assert!(lambda_k(&one, &rs, a + 1).unwrap() < lambda_k(&one, &rs, a).unwrap());
        }
        assert_eq!(lambda_k(&one, &rs, 0), Err(Error::InvalidCheckpoint(0)));
    }

    #[test]
    fn phi_variants() {
        let s = PhiFunction::SqrtLog;
        assert_eq!(s.eval(2).unwrap(), 1.0);
        assert!((s.eval(8192).unwrap() - 8192f64.ln().sqrt()).abs() < 1e-15);
        let ll = PhiFunction::LogOverLoglog2;
        let ns: Vec<u64> = (1..200).map(|i| i * 97).collect();
        ll.check_on(&ns).unwrap();
        s.check_on(&ns).unwrap();
        let table = PhiFunction::Table {
            points: vec![(2, 1.0), (16, 1.5), (1024, 2.0)],
        };
        assert_eq!(table.eval(15).unwrap(), 1.0);
        assert_eq!(table.eval(16).unwrap(), 1.5);
        assert_eq!(table.eval(5000).unwrap(), 2.0);
        assert!(table.eval(1).is_err());
        let bad = PhiFunction::Table {
            points: vec![(2, 2.0), (16, 1.5)],
        };
        assert!(bad.check_on(&[4, 32]).is_err());
        assert!(PhiFunction::Const { value: 0.5 }.check_on(&[4]).is_err());
    }

    #[test]
    fn atom_on_two_cells() {
        let rs = RadixSystem::walsh(4);
        let atom = atom_k(&rs, 1, 2).unwrap();
        let f = atom.to_function(&rs, 2).unwrap();
        let re: Vec<f64> = f.values().iter().map(|v| v.re).collect();
        // cells 00, 10, 01, 11
        assert_eq!(re, vec![2.0, 0.0, -2.0, 0.0]);
        assert!(atom_k(&rs, 4, 4).is_err());
    }

    #[test]
    fn atoms_valid_on_mixed_radix() {
        let rs = RadixSystem::new(vec![3, 2, 5, 2, 4]).unwrap();
        for alpha in 0..rs.depth() {
            let atom = atom_k(&rs, alpha, rs.depth()).unwrap();
            assert!(atom.validate(&rs).is_ok());
        }
    }

    #[test]
    fn config_validation() {
        let rs = RadixSystem::walsh(6);
        let ok = CounterexampleConfig::new(rs.clone(), vec![1, 3], PhiFunction::one());
        ok.validate().unwrap();
        let unsorted = CounterexampleConfig::new(rs.clone(), vec![3, 1], PhiFunction::one());
        assert!(matches!(unsorted.validate(), Err(Error::InvalidConfig(_))));
        let zero = CounterexampleConfig::new(rs.clone(), vec![0, 2], PhiFunction::one());
        assert_eq!(zero.validate(), Err(Error::InvalidCheckpoint(0)));
        let deep = CounterexampleConfig::new(rs.clone(), vec![2, 6], PhiFunction::one());
        assert!(deep.validate().is_err());
        let mut strict = CounterexampleConfig::new(rs, vec![1], PhiFunction::one());
        strict.growth_threshold = 5.0;
        assert!(strict.validate().is_err());
    }

    #[test]
    fn single_term_assembly() {
        let config = CounterexampleConfig::new(RadixSystem::walsh(3), vec![1], PhiFunction::one());
        let (f, dec) = assemble_f(&config).unwrap();
        let lambda = 1.0 / 2f64.ln().sqrt();
        let a = atom_k(&config.radix, 1, 3)
            .unwrap()
            .to_function(&config.radix, 3)
            .unwrap();
        assert!(
            f.max_abs_diff(&a.scale(Complex64::new(lambda, 0.0)))
                .unwrap()
                < 1e-15
        );
        assert!((dec.h1_upper_bound().unwrap() - lambda).abs() < 1e-15);
    }

    #[test]
    fn spectrum_blocks() {
        let config = small_config(PhiFunction::one());
        let (f, dec) = assemble_f(&config).unwrap();
        assert!(spectrum_check(&f, &config).is_ok());
        let s = forward(&f);
        let l1 = lambda_k(&config.phi, &config.radix, 1).unwrap();
        let l2 = lambda_k(&config.phi, &config.radix, 3).unwrap();
        assert!((s.coeffs()[2].re - l1).abs() < 1e-12 && (s.coeffs()[3].re - l1).abs() < 1e-12);
        for j in 8..16 {
            assert!((s.coeffs()[j].re - l2).abs() < 1e-12);
        }
        for j in [0, 1, 4, 5, 6, 7, 16, 40, 63] {
            assert!(s.coeffs()[j].norm() < 1e-12);
        }
        let upper = dec.h1_upper_bound().unwrap();
        assert!(f.norm(Norm::L1) <= upper + 1e-12);

        let mut broken = f.clone();
        broken.values_mut()[0] += Complex64::new(1e-3, 0.0);
        assert_eq!(spectrum_check(&broken, &config).unwrap_err().index, 0);
    }

    #[test]
    fn decomposition_residuals() {
        let config = small_config(PhiFunction::SqrtLog);
        let (f, _) = assemble_f(&config).unwrap();
        for (k, &alpha) in config.alphas.iter().enumerate() {
            let m = config.radix.modulus(alpha);
            for j in m..=2 * m {
                assert!(decomposition_check(&f, &config, j, k).unwrap() <= 1e-12);
            }
            assert!(decomposition_check(&f, &config, m - 1, k).is_err());
            assert!(decomposition_check(&f, &config, 2 * m + 1, k).is_err());
        }
    }

    #[test]
    fn block_ledger_matches_naive_sums() {
        for phi in [PhiFunction::one(), PhiFunction::SqrtLog] {
            let config = CounterexampleConfig::new(RadixSystem::walsh(8), vec![1, 3, 6], phi);
            let cx = Counterexample::build(config.clone()).unwrap();
            let ledger = divergence_experiment(&cx).unwrap();
            for row in &ledger.rows {
                let naive = strong_sum(cx.function(), row.n);
                assert!(
                    (row.strong_sum - naive).abs() < 1e-9 * naive.max(1.0),
                    "{row:?}"
                );
                assert!(row.envelope_excess <= 1e-12);
                let norms = partial_sum_norms(cx.function(), row.n);
                let block: f64 = norms[row.block_start..=row.n].iter().sum();
                assert!((row.block_sum - block).abs() < 1e-9 * block);
            }
        }
    }

    #[test]
    fn empty_configuration() {
        let config = CounterexampleConfig::new(RadixSystem::walsh(4), vec![], PhiFunction::SqrtLog);
        let cx = Counterexample::build(config).unwrap();
        assert_eq!(cx.function().norm(Norm::Sup), 0.0);
        let ledger = divergence_experiment(&cx).unwrap();
        assert!(ledger.rows.is_empty());
        assert_eq!(ledger.h1_upper, 0.0);
    }

    #[test]
    fn part_a_examples() {
        let rs = RadixSystem::walsh(6);
        let one = CylinderFunction::constant(&rs, 6, Complex64::new(1.0, 0.0)).unwrap();
        let zero = CylinderFunction::zeros(&rs, 6).unwrap();
        let check = part_a_check(&[(one, 1.0), (zero, 0.0)], &[4, 16, 64, 256]).unwrap();
        for row in check.rows.iter().filter(|r| r.function == 0) {
            let n = row.n as f64;
            assert!((row.r - 1.0 / n.ln()).abs() < 1e-14);
        }
        assert!(check
            .rows
            .iter()
            .filter(|r| r.function == 1)
            .all(|r| r.r == 0.0));
        assert!(part_a_check(&[], &[1]).is_err());
    }
}
