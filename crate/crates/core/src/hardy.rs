//! Intervals, atoms and atomic decompositions for the dyadic Hardy space.
//!
//! The true `H_1` norm is an infimum over all decompositions and is not
//! computed. Two computable surrogates are exposed instead: the upper bound
//! `sum |lambda_i|` of an explicit decomposition, and `||f*||_1` where `f*` is
//! the maximal function of the cylinder averages.

use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{CylinderFunction, Norm};
use crate::operators::maximal_partial;
use crate::radix::{GroupPoint, RadixSystem};

/// Absolute tolerance for support and vanishing-integral checks.
pub const ATOM_TOLERANCE: f64 = 1e-12;

/// Largest grid on which [`maximal_interval`] enumerates intervals.
pub const MAX_INTERVAL_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionNode {
    pub range: Range<usize>,
    pub children: Option<(usize, usize)>,
}

/// Recursive halving of `{0, ..., m - 1}`; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTree {
    nodes: Vec<PartitionNode>,
}

impl PartitionTree {
    pub fn nodes(&self) -> &[PartitionNode] {
        &self.nodes
    }

    pub fn root(&self) -> &PartitionNode {
        &self.nodes[0]
    }

    pub fn children(&self, idx: usize) -> Option<(&PartitionNode, &PartitionNode)> {
        self.nodes[idx]
            .children
            .map(|(a, b)| (&self.nodes[a], &self.nodes[b]))
    }

    pub fn contains(&self, range: &Range<usize>) -> bool {
        self.nodes.iter().any(|n| &n.range == range)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &PartitionNode> {
        self.nodes.iter().filter(|n| n.children.is_none())
    }
}

/// Dyadic partition of `Z_m`: `{a..b}` splits at `a + floor(len / 2)`, so the
/// root's children are `{0..[m/2]-1}` and `{[m/2]..m-1}`.
pub fn dyadic_partition_tree(m: usize) -> Result<PartitionTree> {
    if m < 2 {
        return Err(Error::InvalidRadix(format!("cannot partition Z_{m}")));
    }
    let mut nodes = vec![PartitionNode {
        range: 0..m,
        children: None,
    }];
    let mut i = 0;
    while i < nodes.len() {
        let r = nodes[i].range.clone();
        if r.len() > 1 {
            let mid = r.start + r.len() / 2;
            let left = nodes.len();
            nodes.push(PartitionNode {
                range: r.start..mid,
                children: None,
            });
            nodes.push(PartitionNode {
                range: mid..r.end,
                children: None,
            });
            nodes[i].children = Some((left, left + 1));
        }
        i += 1;
    }
    Ok(PartitionTree { nodes })
}

/// `I = union_{k in U} I_{n+1}(x_0, ..., x_{n-1}, k)` for a partition node `U`
/// of `Z_{m_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    base: GroupPoint,
    level: usize,
    indices: Range<usize>,
}

impl Interval {
    pub fn new(
        rs: &RadixSystem,
        base: GroupPoint,
        level: usize,
        indices: Range<usize>,
    ) -> Result<Self> {
        if level >= rs.depth() {
            return Err(Error::DepthExceeded {
                requested: level,
                available: rs.depth(),
            });
        }
        let base = rs.point(base.coords)?;
        let tree = dyadic_partition_tree(rs.radix(level))?;
        if !tree.contains(&indices) {
            return Err(Error::InvalidArgument(format!(
                "{indices:?} is not a dyadic partition node of Z_{}",
                rs.radix(level)
            )));
        }
        Ok(Self {
            base,
            level,
            indices,
        })
    }

    /// The full cylinder `I_n(x)`, i.e. the root node at level `n`.
    pub fn cylinder(rs: &RadixSystem, base: GroupPoint, n: usize) -> Result<Self> {
        if n >= rs.depth() {
            return Err(Error::DepthExceeded {
                requested: n,
                available: rs.depth(),
            });
        }
        let m = rs.radix(n);
        Self::new(rs, base, n, 0..m)
    }

    pub fn base(&self) -> &GroupPoint {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn indices(&self) -> &Range<usize> {
        &self.indices
    }

    /// Haar measure `|U| / M_{n+1}`.
    pub fn measure(&self, rs: &RadixSystem) -> f64 {
        self.indices.len() as f64 / rs.modulus(self.level + 1) as f64
    }

    /// Grid depth on which the interval is a union of cells.
    pub fn min_depth(&self) -> usize {
        self.level + 1
    }

    /// Whether depth-`d` cell `c` lies in the interval; needs `d > level`.
    pub fn contains_cell(&self, rs: &RadixSystem, c: usize, d: usize) -> bool {
        debug_assert!(d > self.level);
        let n = self.level;
        let prefix: usize = (0..n).map(|j| self.base.coords[j] * rs.modulus(j)).sum();
        c % rs.modulus(n) == prefix && self.indices.contains(&((c / rs.modulus(n)) % rs.radix(n)))
    }

    pub fn contains(&self, x: &GroupPoint) -> bool {
        (0..self.level).all(|j| x.coords[j] == self.base.coords[j])
            && self.indices.contains(&x.coords[self.level])
    }
}

/// An atom: either the constant 1 or a bounded mean-zero function carried by
/// an interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Unit,
    Supported {
        function: CylinderFunction,
        interval: Interval,
    },
}

impl Atom {
    pub fn interval(&self) -> Option<&Interval> {
        match self {
            Atom::Unit => None,
            Atom::Supported { interval, .. } => Some(interval),
        }
    }

    /// The atom as a function on the depth-`d` grid.
    pub fn to_function(&self, rs: &RadixSystem, d: usize) -> Result<CylinderFunction> {
        match self {
            Atom::Unit => CylinderFunction::constant(rs, d, Complex64::new(1.0, 0.0)),
            Atom::Supported { function, .. } => function.refine(d),
        }
    }

    pub fn validate(
        &self,
        rs: &RadixSystem,
    ) -> std::result::Result<AtomCertificate, AtomViolation> {
        match self {
            Atom::Unit => Ok(AtomCertificate {
                kind: AtomKind::Unit,
                measure: 1.0,
                sup: 1.0,
                integral: 1.0,
            }),
            Atom::Supported { function, interval } => {
                if function.radix() != rs {
                    return Err(AtomViolation::RadixMismatch);
                }
                validate_atom(function, Some(interval))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    Unit,
    Supported,
}

/// Measured quantities of an accepted atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomCertificate {
    pub kind: AtomKind,
    pub measure: f64,
    pub sup: f64,
    /// `|integral over I of a|` for supported atoms, 1 for the unit atom.
    pub integral: f64,
}

/// First atom condition that failed, with where it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum AtomViolation {
    RadixMismatch,
    NotUnit { cell: usize, value: f64 },
    SupportOutsideInterval { cell: usize, value: f64 },
    SupNormExceeded { cell: usize, value: f64, bound: f64 },
    NonzeroIntegral { integral: f64 },
}

/// Checks `supp a in I`, `|a| <= 1/|I|` and `integral_I a = 0`; with no
/// interval, checks `a = 1`.
pub fn validate_atom(
    a: &CylinderFunction,
    interval: Option<&Interval>,
) -> std::result::Result<AtomCertificate, AtomViolation> {
    let rs = a.radix();
    let Some(interval) = interval else {
        for (cell, v) in a.values().iter().enumerate() {
            if (v - Complex64::new(1.0, 0.0)).norm() > ATOM_TOLERANCE {
                return Err(AtomViolation::NotUnit {
                    cell,
                    value: v.norm(),
                });
            }
        }
        return Ok(AtomCertificate {
            kind: AtomKind::Unit,
            measure: 1.0,
            sup: 1.0,
            integral: 1.0,
        });
    };

    let d = a.depth().max(interval.min_depth());
    let lifted;
    let f = if d == a.depth() {
        a
    } else {
        lifted = a.refine(d).map_err(|_| AtomViolation::RadixMismatch)?;
        &lifted
    };
    let measure = interval.measure(rs);
    let bound = 1.0 / measure;
    let mut sup = 0.0f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for (cell, v) in f.values().iter().enumerate() {
        let inside = interval.contains_cell(rs, cell, d);
        if !inside {
            if v.norm() > ATOM_TOLERANCE {
                return Err(AtomViolation::SupportOutsideInterval {
                    cell,
                    value: v.norm(),
                });
            }
            continue;
        }
        if v.norm() > bound * (1.0 + ATOM_TOLERANCE) {
            return Err(AtomViolation::SupNormExceeded {
                cell,
                value: v.norm(),
                bound,
            });
        }
        sup = sup.max(v.norm());
        sum += v;
    }
    let integral = (sum / f.len() as f64).norm();
    if integral > ATOM_TOLERANCE {
        return Err(AtomViolation::NonzeroIntegral { integral });
    }
    Ok(AtomCertificate {
        kind: AtomKind::Supported,
        measure,
        sup,
        integral,
    })
}

/// `f = sum lambda_i a_i`, kept assembled on a fixed grid.
#[derive(Debug, Clone)]
pub struct AtomicDecomposition {
    radix: RadixSystem,
    depth: usize,
    terms: Vec<(Complex64, Atom)>,
    function: CylinderFunction,
}

impl AtomicDecomposition {
    pub fn new(rs: &RadixSystem, depth: usize) -> Result<Self> {
        Ok(Self {
            radix: rs.clone(),
            depth,
            terms: Vec::new(),
            function: CylinderFunction::zeros(rs, depth)?,
        })
    }

    /// Mean as a unit atom plus the mean-zero remainder as one atom on the
    /// whole group, scaled by its sup norm. Always valid, rarely tight.
    pub fn trivial(f: &CylinderFunction) -> Result<Self> {
        let rs = f.radix();
        let mut dec = Self::new(rs, f.depth())?;
        let mean = f.haar_integrate();
        if mean.norm() > 0.0 {
            dec.push(mean, Atom::Unit)?;
        }
        let shift = CylinderFunction::constant(rs, f.depth(), mean)?;
        let rest = f - &shift;
        let sup = rest.norm(Norm::Sup);
        if sup > 0.0 {
            let interval = Interval::cylinder(rs, rs.zero(), 0)?;
            let atom = Atom::Supported {
                function: rest.scale(Complex64::new(1.0 / sup, 0.0)),
                interval,
            };
            dec.push(Complex64::new(sup, 0.0), atom)?;
        }
        Ok(dec)
    }

    pub fn push(&mut self, lambda: Complex64, atom: Atom) -> Result<()> {
        let term = atom.to_function(&self.radix, self.depth)?;
        self.function = &self.function + &term.scale(lambda);
        self.terms.push((lambda, atom));
        Ok(())
    }

    pub fn terms(&self) -> &[(Complex64, Atom)] {
        &self.terms
    }

    pub fn function(&self) -> &CylinderFunction {
        &self.function
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `sum |lambda_i|` after checking every atom.
    pub fn h1_upper_bound(&self) -> Result<f64> {
        for (index, (_, atom)) in self.terms.iter().enumerate() {
            atom.validate(&self.radix).map_err(|v| Error::InvalidAtom {
                index,
                reason: format!("{v:?}"),
            })?;
        }
        Ok(self.terms.iter().map(|(l, _)| l.norm()).sum())
    }

    /// Sup distance between the stored function and a fresh re-assembly.
    pub fn assembly_residual(&self) -> Result<f64> {
        let mut acc = CylinderFunction::zeros(&self.radix, self.depth)?;
        for (lambda, atom) in &self.terms {
            acc = &acc + &atom.to_function(&self.radix, self.depth)?.scale(*lambda);
        }
        acc.max_abs_diff(&self.function)
    }
}

/// `||f*||_1`.
pub fn h1_proxy_norm(f: &CylinderFunction) -> f64 {
    maximal_partial(f).norm(Norm::L1)
}

/// `f**(x) = sup_{I containing x} |I|^{-1} |integral_I f|`, by enumerating every
/// interval of the grid. Limited to grids of at most [`MAX_INTERVAL_GRID`] cells.
pub fn maximal_interval(f: &CylinderFunction) -> Result<CylinderFunction> {
    let rs = f.radix();
    let d = f.depth();
    let size = f.len();
    if size > MAX_INTERVAL_GRID {
        return Err(Error::InvalidArgument(format!(
            "interval enumeration limited to {MAX_INTERVAL_GRID} cells, grid has {size}"
        )));
    }
    let mut sup: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    for n in 0..d {
        let m = rs.radix(n);
        let fine = rs.modulus(n + 1);
        let reps = size / fine;
        let mut blocks = vec![Complex64::new(0.0, 0.0); fine];
        for (c, v) in f.values().iter().enumerate() {
            blocks[c % fine] += v;
        }
        let tree = dyadic_partition_tree(m)?;
        for prefix in 0..rs.modulus(n) {
            for node in tree.nodes() {
                let total: Complex64 = node
                    .range
                    .clone()
                    .map(|k| blocks[prefix + k * rs.modulus(n)])
                    .sum();
                let avg = total.norm() / (node.range.len() * reps) as f64;
                for k in node.range.clone() {
                    for q in 0..reps {
                        let c = prefix + k * rs.modulus(n) + q * fine;
                        sup[c] = sup[c].max(avg);
                    }
                }
            }
        }
    }
    CylinderFunction::from_real(rs, d, &sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dirichlet;
    use crate::transform::rademacher;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn partition_examples() {
        let t2 = dyadic_partition_tree(2).unwrap();
        let (a, b) = t2.children(0).unwrap();
        assert_eq!((a.range.clone(), b.range.clone()), (0..1, 1..2));

        let t4 = dyadic_partition_tree(4).unwrap();
        let (a, b) = t4.children(0).unwrap();
        assert_eq!((a.range.clone(), b.range.clone()), (0..2, 2..4));
        assert_eq!(t4.leaves().count(), 4);
        assert!(t4.leaves().all(|l| l.range.len() == 1));

        let t3 = dyadic_partition_tree(3).unwrap();
        let (a, b) = t3.children(0).unwrap();
        assert_eq!((a.range.clone(), b.range.clone()), (0..1, 1..3));

        assert!(matches!(
            dyadic_partition_tree(1),
            Err(Error::InvalidRadix(_))
        ));
    }

    #[test]
    fn partition_children_tile_parent() {
        for m in 2..=16 {
            let t = dyadic_partition_tree(m).unwrap();
            for (i, node) in t.nodes().iter().enumerate() {
                if let Some((a, b)) = t.children(i) {
                    assert_eq!(a.range.start, node.range.start);
                    assert_eq!(a.range.end, b.range.start);
                    assert_eq!(b.range.end, node.range.end);
                    assert!(!a.range.is_empty() && !b.range.is_empty());
                }
            }
            assert_eq!(t.leaves().count(), m);
        }
    }

    #[test]
    fn interval_measure_and_membership() {
        let rs = RadixSystem::new(vec![2, 4, 3]).unwrap();
        let base = rs.point(vec![1, 0, 0]).unwrap();
        let full = Interval::cylinder(&rs, base.clone(), 1).unwrap();
        assert!((full.measure(&rs) - 0.5).abs() < 1e-15);
        let half = Interval::new(&rs, base, 1, 2..4).unwrap();
        assert!((half.measure(&rs) - 0.25).abs() < 1e-15);
        let x = rs.point(vec![1, 3, 2]).unwrap();
        let y = rs.point(vec![1, 1, 2]).unwrap();
        assert!(half.contains(&x) && !half.contains(&y));
        let cx = rs.cell_index(&x, 3).unwrap();
        let cy = rs.cell_index(&y, 3).unwrap();
        assert!(half.contains_cell(&rs, cx, 3) && !half.contains_cell(&rs, cy, 3));
        assert!(Interval::new(&rs, rs.zero(), 1, 1..3).is_err());
        assert!(Interval::cylinder(&rs, rs.zero(), 3).is_err());
    }

    #[test]
    fn validate_atom_examples() {
        let rs = RadixSystem::new(vec![2, 3, 2, 2]).unwrap();
        let one = CylinderFunction::constant(&rs, 2, c(1.0)).unwrap();
        assert!(validate_atom(&one, None).is_ok());

        for n in 0..rs.depth() {
            let a = &rademacher(&rs, n).unwrap() * &dirichlet(&rs, rs.modulus(n), n + 1).unwrap();
            let i = Interval::cylinder(&rs, rs.zero(), n).unwrap();
            let cert = validate_atom(&a, Some(&i)).unwrap();
            assert!((cert.sup - rs.modulus(n) as f64).abs() < 1e-12);

            let d = dirichlet(&rs, rs.modulus(n), n + 1).unwrap();
            assert!(matches!(
                validate_atom(&d, Some(&i)),
                Err(AtomViolation::NonzeroIntegral { .. })
            ));
        }
    }

    #[test]
    fn validate_atom_reports_support_and_bound() {
        let rs = RadixSystem::walsh(3);
        let i = Interval::cylinder(&rs, rs.zero(), 1).unwrap();
        // value outside I_1(0)
        let f = CylinderFunction::from_real(&rs, 2, &[1.0, 0.5, -1.0, 0.0]).unwrap();
        assert!(matches!(
            validate_atom(&f, Some(&i)),
            Err(AtomViolation::SupportOutsideInterval { cell: 1, .. })
        ));
        let g = CylinderFunction::from_real(&rs, 2, &[3.0, 0.0, -3.0, 0.0]).unwrap();
        assert!(matches!(
            validate_atom(&g, Some(&i)),
            Err(AtomViolation::SupNormExceeded { cell: 0, .. })
        ));
    }

    #[test]
    fn decomposition_bounds() {
        let rs = RadixSystem::walsh(4);
        let mut dec = AtomicDecomposition::new(&rs, 4).unwrap();
        assert_eq!(dec.h1_upper_bound().unwrap(), 0.0);
        dec.push(c(1.0), Atom::Unit).unwrap();
        assert_eq!(dec.h1_upper_bound().unwrap(), 1.0);

        let bad = Atom::Supported {
            function: dirichlet(&rs, 2, 1).unwrap(),
            interval: Interval::cylinder(&rs, rs.zero(), 1).unwrap(),
        };
        dec.push(c(0.5), bad).unwrap();
        assert!(matches!(
            dec.h1_upper_bound(),
            Err(Error::InvalidAtom { index: 1, .. })
        ));
        assert!(dec.assembly_residual().unwrap() < 1e-12);
    }

    #[test]
    fn trivial_decomposition_reassembles() {
        let rs = RadixSystem::new(vec![3, 2, 2]).unwrap();
        let f = CylinderFunction::from_real(
            &rs,
            3,
            &[2.0, -1.0, 0.0, 4.0, 1.0, 1.0, 0.0, 0.0, -3.0, 2.0, 0.5, 0.5],
        )
        .unwrap();
        let dec = AtomicDecomposition::trivial(&f).unwrap();
        assert!(dec.function().max_abs_diff(&f).unwrap() < 1e-12);
        // every atom has L1 norm at most 1
        assert!(dec.h1_upper_bound().unwrap() >= f.norm(Norm::L1) - 1e-12);
        let zero = CylinderFunction::zeros(&rs, 3).unwrap();
        assert!(AtomicDecomposition::trivial(&zero)
            .unwrap()
            .terms()
            .is_empty());
    }

    #[test]
    fn proxy_norm_examples() {
        let rs = RadixSystem::walsh(4);
        let one = CylinderFunction::constant(&rs, 4, c(1.0)).unwrap();
        assert_eq!(h1_proxy_norm(&one), 1.0);
        let r1 = crate::transform::character_on(&rs, 2, 4).unwrap();
        assert_eq!(h1_proxy_norm(&r1), 1.0);
        let f = CylinderFunction::from_real(&rs, 2, &[1.0, -2.0, 0.25, 3.0]).unwrap();
        assert!(h1_proxy_norm(&f) >= f.norm(Norm::L1));
        let scaled = f.scale(Complex64::new(0.0, -3.0));
        assert!((h1_proxy_norm(&scaled) - 3.0 * h1_proxy_norm(&f)).abs() < 1e-12);
    }

    #[test]
    fn interval_maximal_dominates_cylinder_maximal() {
        let rs = RadixSystem::new(vec![3, 4, 2]).unwrap();
        let vals: Vec<f64> = (0..24).map(|i| ((i * 11) % 7) as f64 - 3.0).collect();
        let f = CylinderFunction::from_real(&rs, 3, &vals).unwrap();
        let star = maximal_partial(&f);
        let star2 = maximal_interval(&f).unwrap();
        for (a, b) in star.values().iter().zip(star2.values()) {
            assert!(a.re <= b.re + 1e-12);
        }
        let big = CylinderFunction::zeros(&RadixSystem::walsh(13), 13).unwrap();
        assert!(maximal_interval(&big).is_err());
    }
}
