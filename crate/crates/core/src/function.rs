//! Step functions on depth-`d` cylinders.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::radix::{GroupPoint, RadixSystem};

/// Supported `L_p` exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Sup,
}

impl Norm {
    pub fn from_exponent(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Norm::L1)
        } else if p == 2.0 {
            Ok(Norm::L2)
        } else if p == f64::INFINITY {
            Ok(Norm::Sup)
        } else {
            Err(Error::UnsupportedNorm(p))
        }
    }
}

/// Complex function constant on each depth-`d` cylinder `I_d(x)`.
///
/// `values[c]` is the value on the cell whose coordinates are the mixed-radix
/// digits of `c`, `x_0` least significant. Refining to a deeper grid therefore
/// repeats the whole vector, which keeps coarse grids a prefix of fine ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderFunction {
    radix: RadixSystem,
    depth: usize,
    values: Vec<Complex64>,
}

impl CylinderFunction {
    pub fn new(radix: &RadixSystem, depth: usize, values: Vec<Complex64>) -> Result<Self> {
        radix.check_depth(depth)?;
        let expected = radix.modulus(depth);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self {
            radix: radix.clone(),
            depth,
            values,
        })
    }

    pub fn from_real(radix: &RadixSystem, depth: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            radix,
            depth,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn constant(radix: &RadixSystem, depth: usize, c: Complex64) -> Result<Self> {
        radix.check_depth(depth)?;
        Self::new(radix, depth, vec![c; radix.modulus(depth)])
    }

    pub fn zeros(radix: &RadixSystem, depth: usize) -> Result<Self> {
        Self::constant(radix, depth, Complex64::new(0.0, 0.0))
    }

    /// Samples `g` at the canonical point of every depth-`d` cell.
    pub fn from_fn<F>(radix: &RadixSystem, depth: usize, mut g: F) -> Result<Self>
    where
        F: FnMut(&GroupPoint) -> Complex64,
    {
        radix.check_depth(depth)?;
        let values = (0..radix.modulus(depth))
            .map(|c| {
                let x = radix.point_of_cell(c, depth).expect("cell in range");
                g(&x)
            })
            .collect();
        Self::new(radix, depth, values)
    }

    pub fn radix(&self) -> &RadixSystem {
        &self.radix
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, x: &GroupPoint) -> Result<Complex64> {
        let c = self.radix.cell_index(x, self.depth)?;
        Ok(self.values[c])
    }

    /// Haar integral: the exact mean of the cell values.
    pub fn haar_integrate(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum / self.values.len() as f64
    }

    pub fn norm(&self, p: Norm) -> f64 {
        let n = self.values.len() as f64;
        match p {
            Norm::L1 => self.values.iter().map(|v| v.norm()).sum::<f64>() / n,
            Norm::L2 => (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / n).sqrt(),
            Norm::Sup => self.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Same function written on the finer depth-`target` grid.
    pub fn refine(&self, target: usize) -> Result<Self> {
        if target < self.depth {
            return Err(Error::CannotCoarsen {
                from: self.depth,
                to: target,
            });
        }
        self.radix.check_depth(target)?;
        let reps = self.radix.modulus(target) / self.values.len();
        let mut values = Vec::with_capacity(self.radix.modulus(target));
        for _ in 0..reps {
            values.extend_from_slice(&self.values);
        }
        Ok(Self {
            radix: self.radix.clone(),
            depth: target,
            values,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            radix: self.radix.clone(),
            depth: self.depth,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            radix: self.radix.clone(),
            depth: self.depth,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            radix: self.radix.clone(),
            depth: self.depth,
            values: self
                .values
                .iter()
                .map(|v| Complex64::new(v.norm(), 0.0))
                .collect(),
        }
    }

    /// Pointwise combination after lifting both operands to the deeper grid.
    pub fn zip_with<F>(&self, other: &Self, mut op: F) -> Result<Self>
    where
        F: FnMut(Complex64, Complex64) -> Complex64,
    {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch);
        }
        let depth = self.depth.max(other.depth);
        let n = self.radix.modulus(depth);
        let (a, b) = (&self.values, &other.values);
        let values = (0..n).map(|c| op(a[c % a.len()], b[c % b.len()])).collect();
        Ok(Self {
            radix: self.radix.clone(),
            depth,
            values,
        })
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.zip_with(other, |a, b| a - b)?.norm(Norm::Sup))
    }
}

impl Add for &CylinderFunction {
    type Output = CylinderFunction;

    fn add(self, rhs: Self) -> CylinderFunction {
        self.zip_with(rhs, |a, b| a + b)
            .expect("operands share a radix system")
    }
}

impl Sub for &CylinderFunction {
    type Output = CylinderFunction;

    fn sub(self, rhs: Self) -> CylinderFunction {
        self.zip_with(rhs, |a, b| a - b)
            .expect("operands share a radix system")
    }
}

impl Mul for &CylinderFunction {
    type Output = CylinderFunction;

    fn mul(self, rhs: Self) -> CylinderFunction {
        self.zip_with(rhs, |a, b| a * b)
            .expect("operands share a radix system")
    }
}
