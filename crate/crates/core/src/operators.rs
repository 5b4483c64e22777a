//! Dirichlet kernels, partial sums, Fejer means, Lebesgue constants, maximal
//! operators and strong means.
//!
//! All logarithms are natural. Partial sums beyond the truncation (`n > M_d`)
//! reproduce `f` itself, which is how the strong means extend past `M_d`.

use num_complex::Complex64;

use crate::counterexample::PhiFunction;
use crate::error::{Error, Result};
use crate::function::{CylinderFunction, Norm};
use crate::radix::RadixSystem;
use crate::transform::{character_values_into, forward, inverse, Spectrum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `D_n = sum_{k<n} psi_k` on the depth-`d` grid.
pub fn dirichlet(rs: &RadixSystem, n: usize, d: usize) -> Result<CylinderFunction> {
    rs.check_depth(d)?;
    let size = rs.modulus(d);
    if n > size {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: size,
        });
    }
    let mut coeffs = vec![ZERO; size];
    coeffs[..n].fill(ONE);
    Ok(inverse(&Spectrum::new(rs, d, coeffs)?))
}

/// `S_n f = sum_{k<n} f^(k) psi_k`.
pub fn partial_sum(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    if n > f.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: f.len(),
        });
    }
    let mut s = forward(f);
    s.coeffs_mut()[n..].fill(ZERO);
    Ok(inverse(&s))
}

/// `sigma_n f = (1/n) sum_{k<n} S_k f`, computed with the triangular weights
/// `(n - 1 - k) / n` on the spectrum.
pub fn fejer(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("Fejer mean needs n >= 1".into()));
    }
    if n > f.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: f.len(),
        });
    }
    let mut s = forward(f);
    let nf = n as f64;
    for (k, c) in s.coeffs_mut().iter_mut().enumerate() {
        if k < n {
            *c *= (n - 1 - k) as f64 / nf;
        } else {
            *c = ZERO;
        }
    }
    Ok(inverse(&s))
}

/// `S_{M_n} f`: the average of `f` over each depth-`n` cylinder, on `f`'s grid.
pub fn cylinder_average(f: &CylinderFunction, n: usize) -> Result<CylinderFunction> {
    let rs = f.radix();
    if n > f.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            available: f.depth(),
        });
    }
    // cells of depth n are residues c mod M_n
    let cells = rs.modulus(n);
    let reps = f.len() / cells;
    let mut sums = vec![ZERO; cells];
    for (c, v) in f.values().iter().enumerate() {
        sums[c % cells] += v;
    }
    sums.iter_mut().for_each(|s| *s /= reps as f64);
    let values = (0..f.len()).map(|c| sums[c % cells]).collect();
    CylinderFunction::new(rs, f.depth(), values)
}

/// Lebesgue constants `L_n = ||D_n||_1` for `1 <= n <= n_max` on one grid,
/// with their running averages.
#[derive(Debug, Clone)]
pub struct KernelScan {
    radix: RadixSystem,
    depth: usize,
    lebesgue: Vec<f64>,
    averages: Vec<f64>,
}

impl KernelScan {
    pub fn radix(&self) -> &RadixSystem {
        &self.radix
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n_max(&self) -> usize {
        self.lebesgue.len() - 1
    }

    /// `L_n`; `L_0 = 0`. Panics above `n_max`.
    pub fn lebesgue(&self, n: usize) -> f64 {
        self.lebesgue[n]
    }

    /// `A_n = (1/n) sum_{k=1}^n L_k`. Panics for `n = 0` or above `n_max`.
    pub fn average(&self, n: usize) -> f64 {
        assert!(n >= 1, "average needs n >= 1");
        self.averages[n]
    }

    /// `L_0, L_1, ..., L_{n_max}`.
    pub fn lebesgue_constants(&self) -> &[f64] {
        &self.lebesgue
    }

    /// `max_{2 <= n <= upto} L_n / ln n`.
    pub fn max_log_ratio(&self, upto: usize) -> f64 {
        (2..=upto.min(self.n_max()))
            .map(|n| self.lebesgue[n] / (n as f64).ln())
            .fold(0.0, f64::max)
    }
}

/// Streams `D_{n+1} = D_n + psi_n` on the depth-`d` grid and records `||D_n||_1`.
pub fn lebesgue_scan(rs: &RadixSystem, d: usize, n_max: usize) -> Result<KernelScan> {
    rs.check_depth(d)?;
    let size = rs.modulus(d);
    if n_max > size {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            limit: size,
        });
    }
    let mut kernel = vec![ZERO; size];
    let mut psi = Vec::with_capacity(size);
    let mut lebesgue = Vec::with_capacity(n_max + 1);
    lebesgue.push(0.0);
    for n in 0..n_max {
        character_values_into(rs, n, d, &mut psi)?;
        let mut acc = 0.0;
        for (k, p) in kernel.iter_mut().zip(&psi) {
            *k += p;
            acc += k.norm();
        }
        lebesgue.push(acc / size as f64);
    }
    let mut averages = Vec::with_capacity(n_max + 1);
    averages.push(0.0);
    let mut running = 0.0;
    for (n, l) in lebesgue.iter().enumerate().skip(1) {
        running += l;
        averages.push(running / n as f64);
    }
    Ok(KernelScan {
        radix: rs.clone(),
        depth: d,
        lebesgue,
        averages,
    })
}

/// `A_n / ln n`.
pub fn lebesgue_average_ratio(scan: &KernelScan, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "average ratio needs n >= 2 (ln 1 = 0)".into(),
        ));
    }
    if n > scan.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: scan.n_max(),
        });
    }
    Ok(scan.average(n) / (n as f64).ln())
}

/// `f* = max_{0 <= n <= d} |S_{M_n} f|`, pointwise.
pub fn maximal_partial(f: &CylinderFunction) -> CylinderFunction {
    let mut sup = vec![0.0f64; f.len()];
    for n in 0..=f.depth() {
        let s = cylinder_average(f, n).expect("level within depth");
        for (m, v) in sup.iter_mut().zip(s.values()) {
            *m = m.max(v.norm());
        }
    }
    CylinderFunction::from_real(f.radix(), f.depth(), &sup).expect("same grid")
}

/// `sup_{1 <= n <= M_d} |sigma_n f|`, pointwise, by streaming partial sums.
pub fn maximal_fejer(f: &CylinderFunction) -> CylinderFunction {
    let rs = f.radix();
    let d = f.depth();
    let size = f.len();
    let coeffs = forward(f).into_coeffs();
    let mut partial = vec![ZERO; size];
    let mut cumulative = vec![ZERO; size];
    let mut sup = vec![0.0f64; size];
    let mut psi = Vec::with_capacity(size);
    // sigma_1 = S_0 = 0 leaves sup at 0
    for n in 1..size {
        // S_n = S_{n-1} + c_{n-1} psi_{n-1}; C_{n+1} = C_n + S_n
        let c = coeffs[n - 1];
        if c != ZERO {
            character_values_into(rs, n - 1, d, &mut psi).expect("index below M_d");
            for (s, p) in partial.iter_mut().zip(&psi) {
                *s += c * p;
            }
        }
        let inv = 1.0 / (n + 1) as f64;
        for ((acc, s), m) in cumulative.iter_mut().zip(&partial).zip(sup.iter_mut()) {
            *acc += s;
            *m = m.max((*acc * inv).norm());
        }
    }
    CylinderFunction::from_real(rs, d, &sup).expect("same grid")
}

/// `||S_k f||_1` for `k = 0..=n`. Indices past `M_d` repeat `||f||_1`.
pub fn partial_sum_norms(f: &CylinderFunction, n: usize) -> Vec<f64> {
    let rs = f.radix();
    let d = f.depth();
    let size = f.len();
    let coeffs = forward(f).into_coeffs();
    let mut norms = Vec::with_capacity(n + 1);
    norms.push(0.0);
    let mut partial = vec![ZERO; size];
    let mut psi = Vec::with_capacity(size);
    let mut current = 0.0;
    for k in 0..n {
        if k >= size {
            current = f.norm(Norm::L1);
        } else if coeffs[k] != ZERO {
            character_values_into(rs, k, d, &mut psi).expect("index below M_d");
            let c = coeffs[k];
            let mut acc = 0.0;
            for (s, p) in partial.iter_mut().zip(&psi) {
                *s += c * p;
                acc += s.norm();
            }
            current = acc / size as f64;
        }
        norms.push(current);
    }
    norms
}

/// `||S_k f - f||_1` for `k = 0..=n`. Indices from `M_d` on are zero.
pub fn residual_norms(f: &CylinderFunction, n: usize) -> Vec<f64> {
    let rs = f.radix();
    let d = f.depth();
    let size = f.len();
    let coeffs = forward(f).into_coeffs();
    let mut residual = f.values().to_vec();
    let mut psi = Vec::with_capacity(size);
    let mut current = f.norm(Norm::L1);
    let mut norms = Vec::with_capacity(n + 1);
    norms.push(current);
    for k in 0..n {
        if k + 1 >= size {
            current = 0.0;
        } else if coeffs[k] != ZERO {
            character_values_into(rs, k, d, &mut psi).expect("index below M_d");
            let c = coeffs[k];
            let mut acc = 0.0;
            for (r, p) in residual.iter_mut().zip(&psi) {
                *r -= c * p;
                acc += r.norm();
            }
            current = acc / size as f64;
        }
        norms.push(current);
    }
    norms
}

/// `sum_{k=1}^n ||S_k f - f||_1 / k` for every `n` in `0..=n_max`.
pub fn gat_sums(f: &CylinderFunction, n_max: usize) -> Vec<f64> {
    let norms = residual_norms(f, n_max);
    let mut sums = Vec::with_capacity(n_max + 1);
    let mut total = 0.0;
    sums.push(0.0);
    for (k, v) in norms.iter().enumerate().skip(1) {
        total += v / k as f64;
        sums.push(total);
    }
    sums
}

/// `G(n) = (1/ln n) sum_{k=1}^n ||S_k f - f||_1 / k`.
pub fn strong_mean_gat(f: &CylinderFunction, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("strong mean needs n >= 2".into()));
    }
    Ok(gat_sums(f, n)[n] / (n as f64).ln())
}

/// Normalization of `sum_{k=1}^n ||S_k f||_1`.
#[derive(Debug, Clone, Copy)]
pub enum StrongWeight<'a> {
    /// `1 / n`
    Uniform,
    /// `1 / (n ln n)`
    Log,
    /// `1 / (n phi_n)`
    Phi(&'a PhiFunction),
}

impl StrongWeight<'_> {
    pub fn denominator(&self, n: usize) -> Result<f64> {
        let nf = n as f64;
        Ok(match self {
            StrongWeight::Uniform => nf,
            StrongWeight::Log => nf * nf.ln(),
            StrongWeight::Phi(phi) => nf * phi.eval(n as u64)?,
        })
    }
}

/// `sum_{k=1}^n ||S_k f||_1`.
pub fn strong_sum(f: &CylinderFunction, n: usize) -> f64 {
    partial_sum_norms(f, n).iter().skip(1).sum()
}

pub fn strong_sum_normalized(f: &CylinderFunction, n: usize, weight: StrongWeight) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("strong sum needs n >= 2".into()));
    }
    Ok(strong_sum(f, n) / weight.denominator(n)?)
}
