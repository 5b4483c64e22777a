//! Rademacher functions, Vilenkin characters and the fast Vilenkin-Fourier
//! transform.
//!
//! The transform is separable: the character `psi_k` factors over coordinates,
//! so the full transform on a depth-`d` grid is an `m_j`-point character
//! transform applied along each axis `j` in turn. Axes with `m_j = 2` use an
//! in-place `(a + b, a - b)` butterfly, which keeps the dyadic case exact on
//! integer data.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::CylinderFunction;
use crate::radix::{roots_table, RadixSystem};

/// Vilenkin-Fourier coefficients `f^(k)` for `k < M_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    radix: RadixSystem,
    depth: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(radix: &RadixSystem, depth: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        radix.check_depth(depth)?;
        let expected = radix.modulus(depth);
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            radix: radix.clone(),
            depth,
            coeffs,
        })
    }

    pub fn radix(&self) -> &RadixSystem {
        &self.radix
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `sum |f^(k)|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Generalized Rademacher function `r_k(x) = exp(2 pi i x_k / m_k)` on depth `k + 1`.
pub fn rademacher(rs: &RadixSystem, k: usize) -> Result<CylinderFunction> {
    if k >= rs.depth() {
        return Err(Error::DepthExceeded {
            requested: k,
            available: rs.depth(),
        });
    }
    let roots = roots_table(rs.radix(k));
    let stride = rs.modulus(k);
    let values = (0..rs.modulus(k + 1)).map(|c| roots[c / stride]).collect();
    CylinderFunction::new(rs, k + 1, values)
}

/// Vilenkin character `psi_n = prod_k r_k^{n_k}` on its natural depth `|n| + 1`.
pub fn character(rs: &RadixSystem, n: usize) -> Result<CylinderFunction> {
    let order = rs.order(n)?;
    character_on(rs, n, order + 1)
}

/// `psi_n` written on the depth-`d` grid; requires `n < M_d`.
pub fn character_on(rs: &RadixSystem, n: usize, d: usize) -> Result<CylinderFunction> {
    rs.check_depth(d)?;
    let mut values = Vec::new();
    character_values_into(rs, n, d, &mut values)?;
    CylinderFunction::new(rs, d, values)
}

/// Fills `out` with the values of `psi_n` on the depth-`d` grid.
///
/// Built as a tensor product over coordinates, so the cost is `O(M_d)`.
pub(crate) fn character_values_into(
    rs: &RadixSystem,
    n: usize,
    d: usize,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    if n >= rs.modulus(d) {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: rs.modulus(d),
        });
    }
    out.clear();
    out.reserve(rs.modulus(d));
    out.push(Complex64::new(1.0, 0.0));
    let mut rest = n;
    for j in 0..d {
        let m = rs.radix(j);
        let digit = rest % m;
        rest /= m;
        let len = out.len();
        if digit == 0 {
            for _ in 1..m {
                out.extend_from_within(..len);
            }
            continue;
        }
        for x in 1..m {
            let w = crate::radix::root_of_unity(digit * x, m);
            for i in 0..len {
                let v = out[i] * w;
                out.push(v);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

/// In-place axis-by-axis character transform without normalization.
fn transform_in_place(rs: &RadixSystem, depth: usize, data: &mut [Complex64], dir: Direction) {
    let total = data.len();
    let mut scratch = Vec::new();
    for j in 0..depth {
        let m = rs.radix(j);
        let stride = rs.modulus(j);
        let block = stride * m;
        if m == 2 {
            for base in (0..total).step_by(block) {
                for i in base..base + stride {
                    let a = data[i];
                    let b = data[i + stride];
                    data[i] = a + b;
                    data[i + stride] = a - b;
                }
            }
            continue;
        }
        let mut roots = roots_table(m);
        if dir == Direction::Forward {
            roots.iter_mut().for_each(|w| *w = w.conj());
        }
        scratch.resize(m, Complex64::new(0.0, 0.0));
        for base in (0..total).step_by(block) {
            for i in base..base + stride {
                for (k, out) in scratch.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..m {
                        acc += data[i + x * stride] * roots[(k * x) % m];
                    }
                    *out = acc;
                }
                for (k, v) in scratch.iter().enumerate() {
                    data[i + k * stride] = *v;
                }
            }
        }
    }
}

/// Fourier coefficients `f^(k) = integral of f * conj(psi_k)` for every `k < M_d`.
pub fn forward(f: &CylinderFunction) -> Spectrum {
    let rs = f.radix();
    let mut data = f.values().to_vec();
    transform_in_place(rs, f.depth(), &mut data, Direction::Forward);
    let scale = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    Spectrum {
        radix: rs.clone(),
        depth: f.depth(),
        coeffs: data,
    }
}

/// `sum_k s[k] psi_k`, evaluated on the spectrum's depth.
pub fn inverse(s: &Spectrum) -> CylinderFunction {
    let mut data = s.coeffs.clone();
    transform_in_place(&s.radix, s.depth, &mut data, Direction::Inverse);
    CylinderFunction::new(&s.radix, s.depth, data).expect("length preserved")
}
