//! Exact kernel identities, checked against an injectable kernel source.
//!
//! * cylinder: `D_{M_n} = M_n 1_{I_n(0)}` for `n <= d`
//! * digit: `D_{s M_n} = D_{M_n} sum_{k<s} r_n^k` for `n < d`, `1 <= s < m_n`
//! * shift: `D_{j + M_n} = D_{M_n} + psi_{M_n} D_j` for `j <= M_n`, `n < d`
//!
//! Kernels are evaluated on the smallest grid that resolves them (`n + 1`).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::function::CylinderFunction;
use crate::operators::dirichlet;
use crate::radix::RadixSystem;
use crate::transform::{character_on, rademacher};

pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Above this many shift indices per level, `j` is sampled instead of enumerated.
pub const EXHAUSTIVE_SHIFT_LIMIT: usize = 1024;
const SHIFT_SAMPLES: usize = 64;

/// Computes `D_n` on the depth-`d` grid.
pub trait KernelSource {
    fn kernel(&self, rs: &RadixSystem, n: usize, d: usize) -> Result<CylinderFunction>;
}

/// The library's own [`dirichlet`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactKernel;

impl KernelSource for ExactKernel {
    fn kernel(&self, rs: &RadixSystem, n: usize, d: usize) -> Result<CylinderFunction> {
        dirichlet(rs, n, d)
    }
}

impl<F> KernelSource for F
where
    F: Fn(&RadixSystem, usize, usize) -> Result<CylinderFunction>,
{
    fn kernel(&self, rs: &RadixSystem, n: usize, d: usize) -> Result<CylinderFunction> {
        self(rs, n, d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub exhaustive: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

fn report(name: &str, cases: usize, max_residual: f64, exhaustive: bool) -> IdentityReport {
    IdentityReport {
        name: name.to_string(),
        cases,
        max_residual,
        tolerance: IDENTITY_TOLERANCE,
        exhaustive,
    }
}

/// `D_{M_n}` against `M_n` times the indicator of `I_n(0)`, for `n <= d`.
pub fn check_cylinder<K: KernelSource>(
    rs: &RadixSystem,
    d: usize,
    source: &K,
) -> Result<IdentityReport> {
    rs.check_depth(d)?;
    let mut worst = 0.0f64;
    for n in 0..=d {
        let grid = (n + 1).min(rs.depth());
        let mn = rs.modulus(n);
        let kernel = source.kernel(rs, mn, grid)?;
        for (c, v) in kernel.values().iter().enumerate() {
            let expected = if c % mn == 0 { mn as f64 } else { 0.0 };
            worst = worst.max((v - Complex64::new(expected, 0.0)).norm());
        }
    }
    Ok(report("cylinder", d + 1, worst, true))
}

/// `D_{s M_n} = D_{M_n} sum_{k<s} r_n^k`.
pub fn check_digit<K: KernelSource>(
    rs: &RadixSystem,
    d: usize,
    source: &K,
) -> Result<IdentityReport> {
    rs.check_depth(d)?;
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 0..d {
        let grid = n + 1;
        let mn = rs.modulus(n);
        let base = source.kernel(rs, mn, grid)?;
        let r = rademacher(rs, n)?;
        let mut power = CylinderFunction::constant(rs, grid, Complex64::new(1.0, 0.0))?;
        let mut geometric = CylinderFunction::zeros(rs, grid)?;
        for s in 1..rs.radix(n) {
            geometric = &geometric + &power;
            power = &power * &r;
            let lhs = source.kernel(rs, s * mn, grid)?;
            worst = worst.max(lhs.max_abs_diff(&(&base * &geometric))?);
            cases += 1;
        }
    }
    Ok(report("digit", cases, worst, true))
}

/// `D_{j + M_n} = D_{M_n} + psi_{M_n} D_j`.
pub fn check_shift<K: KernelSource>(
    rs: &RadixSystem,
    d: usize,
    source: &K,
) -> Result<IdentityReport> {
    rs.check_depth(d)?;
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut exhaustive = true;
    for n in 0..d {
        let grid = n + 1;
        let mn = rs.modulus(n);
        let base = source.kernel(rs, mn, grid)?;
        let psi = character_on(rs, mn, grid)?;
        let js: Vec<usize> = if mn < EXHAUSTIVE_SHIFT_LIMIT {
            (0..=mn).collect()
        } else {
            exhaustive = false;
            // endpoints plus an even spread
            let mut js: Vec<usize> = (0..SHIFT_SAMPLES).map(|i| i * mn / SHIFT_SAMPLES).collect();
            js.extend([1, mn - 1, mn]);
            js.sort_unstable();
            js.dedup();
            js
        };
        for j in js {
            let lhs = source.kernel(rs, j + mn, grid)?;
            let rhs = &base + &(&psi * &source.kernel(rs, j, grid)?);
            worst = worst.max(lhs.max_abs_diff(&rhs)?);
            cases += 1;
        }
    }
    Ok(report("shift", cases, worst, exhaustive))
}

/// All three kernel identities on the depth-`d` grid.
pub fn check_kernel_identities<K: KernelSource>(
    rs: &RadixSystem,
    d: usize,
    source: &K,
) -> Result<Vec<IdentityReport>> {
    Ok(vec![
        check_cylinder(rs, d, source)?,
        check_digit(rs, d, source)?,
        check_shift(rs, d, source)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_kernel_passes() {
        for rs in [
            RadixSystem::walsh(6),
            RadixSystem::new(vec![2, 3, 4, 5]).unwrap(),
        ] {
            let reports = check_kernel_identities(&rs, rs.depth(), &ExactKernel).unwrap();
            assert!(
                reports.iter().all(|r| r.passed() && r.exhaustive),
                "{reports:?}"
            );
        }
    }

    #[test]
    fn perturbed_kernel_fails() {
        let rs = RadixSystem::walsh(5);
        let corrupt = |rs: &RadixSystem, n: usize, d: usize| {
            let mut k = dirichlet(rs, n, d)?;
            if n >= 2 {
                k.values_mut()[0] += Complex64::new(1e-6, 0.0);
            }
            Ok(k)
        };
        let reports = check_kernel_identities(&rs, 5, &corrupt).unwrap();
        assert!(!reports[0].passed());
        assert_eq!(reports[0].name, "cylinder");
    }

    #[test]
    fn large_levels_are_sampled() {
        let rs = RadixSystem::walsh(12);
        let shift = check_shift(&rs, 12, &ExactKernel).unwrap();
        assert!(shift.passed());
        assert!(!shift.exhaustive);
    }
}
