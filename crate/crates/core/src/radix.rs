//! Mixed-radix number system and the truncated group it addresses.
//!
//! A [`RadixSystem`] fixes the generating sequence `m_0, ..., m_{N-1}` and the
//! cumulative moduli `M_0 = 1`, `M_{k+1} = m_k M_k`. Integers below `M_N` are
//! written in this system with the lowest digit first, and group points of the
//! depth-`N` truncation are coordinate vectors with `x_j` in `Z_{m_j}`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest radix accepted at construction.
pub const MAX_RADIX: usize = 16;

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    radices: Vec<usize>,
    moduli: Vec<usize>,
}

/// Generating sequence and cumulative moduli. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct RadixSystem(Arc<Inner>);

impl RadixSystem {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::InvalidRadix("empty radix sequence".into()));
        }
        let mut moduli = Vec::with_capacity(radices.len() + 1);
        moduli.push(1usize);
        for (j, &m) in radices.iter().enumerate() {
            if !(2..=MAX_RADIX).contains(&m) {
                return Err(Error::InvalidRadix(format!(
                    "m_{j} = {m} outside [2, {MAX_RADIX}]"
                )));
            }
            let next = moduli[j]
                .checked_mul(m)
                .ok_or_else(|| Error::InvalidRadix("cumulative modulus overflows".into()))?;
            moduli.push(next);
        }
        Ok(Self(Arc::new(Inner { radices, moduli })))
    }

    /// Constant radix `q` repeated `depth` times; `q = 2` is the Walsh-Paley case.
    pub fn constant(q: usize, depth: usize) -> Result<Self> {
        Self::new(vec![q; depth])
    }

    pub fn walsh(depth: usize) -> Self {
        Self::constant(2, depth).expect("dyadic system of reasonable depth")
    }

    /// Truncation depth `N`.
    pub fn depth(&self) -> usize {
        self.0.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.0.radices
    }

    /// `m_j`.
    pub fn radix(&self, j: usize) -> usize {
        self.0.radices[j]
    }

    /// `M_k` for `0 <= k <= N`.
    pub fn modulus(&self, k: usize) -> usize {
        self.0.moduli[k]
    }

    pub fn moduli(&self) -> &[usize] {
        &self.0.moduli
    }

    /// `M_N`, the number of frequencies representable at full depth.
    pub fn size(&self) -> usize {
        self.0.moduli[self.depth()]
    }

    pub fn max_radix(&self) -> usize {
        self.0.radices.iter().copied().max().unwrap_or(0)
    }

    pub fn is_dyadic(&self) -> bool {
        self.0.radices.iter().all(|&m| m == 2)
    }

    pub(crate) fn check_depth(&self, d: usize) -> Result<()> {
        if d > self.depth() {
            Err(Error::DepthExceeded {
                requested: d,
                available: self.depth(),
            })
        } else {
            Ok(())
        }
    }

    /// Digits of `n` in the generalized number system.
    pub fn expand(&self, n: usize) -> Result<DigitExpansion> {
        if n >= self.size() {
            return Err(Error::IndexOutOfRange {
                index: n,
                limit: self.size(),
            });
        }
        let mut rest = n;
        let digits: Vec<usize> = self
            .radices()
            .iter()
            .map(|&m| {
                let d = rest % m;
                rest /= m;
                d
            })
            .collect();
        let order = digits.iter().rposition(|&d| d != 0).unwrap_or(0);
        Ok(DigitExpansion {
            value: n,
            digits,
            order,
        })
    }

    /// Inverse of [`expand`](Self::expand). Missing high digits are zero.
    pub fn compose(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() > self.depth() {
            return Err(Error::DepthExceeded {
                requested: digits.len(),
                available: self.depth(),
            });
        }
        let mut n = 0;
        for (j, &d) in digits.iter().enumerate() {
            if d >= self.radix(j) {
                return Err(Error::InvalidDigit {
                    position: j,
                    digit: d,
                    radix: self.radix(j),
                });
            }
            n += d * self.modulus(j);
        }
        Ok(n)
    }

    /// `|n|`: index of the highest nonzero digit, 0 for `n = 0`.
    pub fn order(&self, n: usize) -> Result<usize> {
        Ok(self.expand(n)?.order)
    }

    fn check_point(&self, x: &GroupPoint) -> Result<()> {
        if x.coords.len() != self.depth() {
            return Err(Error::LengthMismatch {
                expected: self.depth(),
                actual: x.coords.len(),
            });
        }
        for (j, &c) in x.coords.iter().enumerate() {
            if c >= self.radix(j) {
                return Err(Error::InvalidDigit {
                    position: j,
                    digit: c,
                    radix: self.radix(j),
                });
            }
        }
        Ok(())
    }

    pub fn point(&self, coords: Vec<usize>) -> Result<GroupPoint> {
        let x = GroupPoint { coords };
        self.check_point(&x)?;
        Ok(x)
    }

    pub fn zero(&self) -> GroupPoint {
        GroupPoint {
            coords: vec![0; self.depth()],
        }
    }

    /// Index of the depth-`d` cylinder containing `x`, with `x_0` least significant.
    pub fn cell_index(&self, x: &GroupPoint, d: usize) -> Result<usize> {
        self.check_depth(d)?;
        self.check_point(x)?;
        Ok(x.coords[..d]
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.modulus(j))
            .sum())
    }

    /// Canonical representative of depth-`d` cell `c`: coordinates past `d` are zero.
    pub fn point_of_cell(&self, c: usize, d: usize) -> Result<GroupPoint> {
        self.check_depth(d)?;
        if c >= self.modulus(d) {
            return Err(Error::IndexOutOfRange {
                index: c,
                limit: self.modulus(d),
            });
        }
        let mut coords = vec![0; self.depth()];
        let mut rest = c;
        for (j, slot) in coords.iter_mut().take(d).enumerate() {
            *slot = rest % self.radix(j);
            rest /= self.radix(j);
        }
        Ok(GroupPoint { coords })
    }

    pub fn group_add(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(x)?;
        self.check_point(y)?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(self.radices())
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupPoint { coords })
    }

    /// Group inverse `-x`.
    pub fn group_neg(&self, x: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(x)?;
        let coords = x
            .coords
            .iter()
            .zip(self.radices())
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Ok(GroupPoint { coords })
    }

    /// `e_n`: the point with a single 1 in coordinate `n`.
    pub fn basis_element(&self, n: usize) -> Result<GroupPoint> {
        if n >= self.depth() {
            return Err(Error::DepthExceeded {
                requested: n,
                available: self.depth(),
            });
        }
        let mut coords = vec![0; self.depth()];
        coords[n] = 1;
        Ok(GroupPoint { coords })
    }
}

impl fmt::Debug for RadixSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadixSystem")
            .field("m", &self.0.radices)
            .finish()
    }
}

/// Mixed-radix digits of an integer together with its order `|n|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitExpansion {
    pub value: usize,
    pub digits: Vec<usize>,
    pub order: usize,
}

/// Element of the truncated group, one coordinate per factor `Z_{m_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPoint {
    pub coords: Vec<usize>,
}

/// `exp(2 pi i j / m)`, exact at multiples of a quarter turn.
pub fn root_of_unity(j: usize, m: usize) -> Complex64 {
    let j = j % m;
    if (4 * j) % m == 0 {
        return match 4 * j / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64)
}

/// Table of `exp(2 pi i j / m)` for `j` in `0..m`.
pub(crate) fn roots_table(m: usize) -> Vec<Complex64> {
    (0..m).map(|j| root_of_unity(j, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let rs = RadixSystem::walsh(3);
        let e = rs.expand(5).unwrap();
        assert_eq!(e.digits, vec![1, 0, 1]);
        assert_eq!(e.order, 2);

        let z = rs.expand(0).unwrap();
        assert_eq!(z.digits, vec![0, 0, 0]);
        assert_eq!(z.order, 0);

        let mixed = RadixSystem::new(vec![2, 3, 2]).unwrap();
        let e = mixed.expand(mixed.modulus(2)).unwrap();
        assert_eq!(e.digits, vec![0, 0, 1]);
        assert_eq!(e.order, 2);

        assert_eq!(
            rs.expand(8),
            Err(Error::IndexOutOfRange { index: 8, limit: 8 })
        );
    }

    #[test]
    fn compose_examples() {
        let rs = RadixSystem::walsh(3);
        assert_eq!(rs.compose(&[1, 0, 1]).unwrap(), 5);
        assert_eq!(rs.compose(&[0, 0, 0]).unwrap(), 0);
        let r33 = RadixSystem::new(vec![3, 3]).unwrap();
        assert_eq!(r33.compose(&[2, 2]).unwrap(), 8);
        assert!(matches!(
            r33.compose(&[3, 0]),
            Err(Error::InvalidDigit { position: 0, .. })
        ));
    }

    #[test]
    fn cell_addressing() {
        let rs = RadixSystem::walsh(3);
        let x = rs.point(vec![1, 1, 0]).unwrap();
        assert_eq!(rs.cell_index(&x, 2).unwrap(), 3);
        assert_eq!(rs.point_of_cell(0, 3).unwrap(), rs.zero());

        let r23 = RadixSystem::new(vec![2, 3]).unwrap();
        let x = r23.point(vec![1, 2]).unwrap();
        assert_eq!(r23.cell_index(&x, 2).unwrap(), 5);
        assert!(matches!(
            r23.cell_index(&x, 3),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn group_law_examples() {
        let rs = RadixSystem::walsh(2);
        let a = rs.point(vec![1, 0]).unwrap();
        let b = rs.point(vec![1, 1]).unwrap();
        assert_eq!(rs.group_add(&a, &b).unwrap().coords, vec![0, 1]);
        assert_eq!(rs.group_add(&a, &rs.zero()).unwrap(), a);

        let r3 = RadixSystem::new(vec![3]).unwrap();
        let two = r3.point(vec![2]).unwrap();
        assert_eq!(r3.group_add(&two, &two).unwrap().coords, vec![1]);
    }

    #[test]
    fn basis_elements() {
        let rs = RadixSystem::new(vec![2, 3, 5]).unwrap();
        assert_eq!(rs.basis_element(0).unwrap().coords, vec![1, 0, 0]);
        let s = rs
            .group_add(&rs.basis_element(0).unwrap(), &rs.basis_element(1).unwrap())
            .unwrap();
        assert_eq!(s.coords.iter().filter(|&&c| c != 0).count(), 2);
        for n in 0..rs.depth() {
            let e = rs.basis_element(n).unwrap();
            let mut acc = rs.zero();
            for _ in 0..rs.radix(n) {
                acc = rs.group_add(&acc, &e).unwrap();
            }
            assert_eq!(acc, rs.zero());
        }
        assert!(rs.basis_element(3).is_err());
    }

    #[test]
    fn rejects_bad_radices() {
        assert!(RadixSystem::new(vec![]).is_err());
        assert!(RadixSystem::new(vec![2, 1]).is_err());
        assert!(RadixSystem::new(vec![17]).is_err());
    }

    #[test]
    fn roots_exact_on_quarter_turns() {
        assert_eq!(root_of_unity(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(3, 4), Complex64::new(0.0, -1.0));
        let w = root_of_unity(1, 3);
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }
}
