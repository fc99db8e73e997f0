//! Finitely described integral configurations `c: Z^d -> Z`, pattern
//! extraction and pattern-complexity counting.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{IntVector, Lattice};
use crate::quadratic::QuadraticReal;
use crate::window::{box_strides, linear_offset, Pattern, Window};

/// Fundamental domains up to this many cells are scanned exhaustively when a
/// configuration is known to be lattice-periodic.
pub const EXACT_DOMAIN_LIMIT: u64 = 1 << 22;

/// What a [`ValueMapping`] does with values missing from its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueDefault {
    Identity,
    Constant(i64),
}

/// A total map `Z -> Z`: a finite table plus a default.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueMapping {
    pub table: BTreeMap<i64, i64>,
    pub default: ValueDefault,
}

impl ValueMapping {
    pub fn new(table: impl IntoIterator<Item = (i64, i64)>, default: ValueDefault) -> Self {
        ValueMapping {
            table: table.into_iter().collect(),
            default,
        }
    }

    pub fn identity() -> Self {
        ValueMapping::new([], ValueDefault::Identity)
    }

    pub fn apply(&self, x: i64) -> i64 {
        match self.table.get(&x) {
            Some(&y) => y,
            None => match self.default {
                ValueDefault::Identity => x,
                ValueDefault::Constant(y) => y,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Finitary {
    Yes,
    No,
    Unknown,
}

/// A configuration described by a finite expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// Values on the canonical residues of a full-rank lattice; missing residues are 0.
    Periodic {
        lattice: Lattice,
        values: BTreeMap<IntVector, i64>,
    },
    /// `value` on `offset + lattice`, 0 elsewhere.
    CosetIndicator {
        offset: IntVector,
        lattice: Lattice,
        value: i64,
    },
    /// `floor(<weights, v> * alpha)`.
    Mechanical {
        weights: IntVector,
        alpha: QuadraticReal,
    },
    FiniteSupport {
        dim: usize,
        values: BTreeMap<IntVector, i64>,
    },
    /// `sum_i k_i * c_i`.
    Sum {
        dim: usize,
        terms: Vec<(i64, Configuration)>,
    },
    ValueMap {
        inner: Box<Configuration>,
        map: ValueMapping,
    },
    /// `v -> inner(v + offset)`.
    Shift {
        inner: Box<Configuration>,
        offset: IntVector,
    },
}

impl Configuration {
    pub fn periodic(
        lattice: Lattice,
        values: impl IntoIterator<Item = (IntVector, i64)>,
    ) -> Result<Self> {
        if !lattice.is_full_rank() {
            return Err(Error::RankDeficient);
        }
        let mut table = BTreeMap::new();
        for (k, v) in values {
            Error::check_dim(lattice.dim(), k.dim())?;
            let r = lattice.reduce(&k.0);
            if let Some(&old) = table.get(&r) {
                if old != v {
                    return Err(Error::InvalidConfiguration(format!(
                        "conflicting values for residue {r}"
                    )));
                }
            }
            table.insert(r, v);
        }
        table.retain(|_, v| *v != 0);
        Ok(Configuration::Periodic {
            lattice,
            values: table,
        })
    }

    pub fn constant(dim: usize, value: i64) -> Self {
        let mut values = BTreeMap::new();
        if value != 0 {
            values.insert(IntVector::zero(dim), value);
        }
        Configuration::Periodic {
            lattice: Lattice::integer(dim),
            values,
        }
    }

    pub fn coset(offset: IntVector, lattice: Lattice, value: i64) -> Result<Self> {
        Error::check_dim(lattice.dim(), offset.dim())?;
        Ok(Configuration::CosetIndicator {
            offset,
            lattice,
            value,
        })
    }

    pub fn mechanical(weights: IntVector, alpha: QuadraticReal) -> Self {
        Configuration::Mechanical { weights, alpha }
    }

    pub fn finite(dim: usize, values: impl IntoIterator<Item = (IntVector, i64)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (k, v) in values {
            Error::check_dim(dim, k.dim())?;
            if v != 0 {
                table.insert(k, v);
            }
        }
        Ok(Configuration::FiniteSupport { dim, values: table })
    }

    pub fn sum(dim: usize, terms: Vec<(i64, Configuration)>) -> Result<Self> {
        for (_, t) in &terms {
            Error::check_dim(dim, t.dim())?;
        }
        Ok(Configuration::Sum { dim, terms })
    }

    pub fn value_map(inner: Configuration, map: ValueMapping) -> Self {
        Configuration::ValueMap {
            inner: Box::new(inner),
            map,
        }
    }

    pub fn shift(inner: Configuration, offset: IntVector) -> Result<Self> {
        Error::check_dim(inner.dim(), offset.dim())?;
        Ok(Configuration::Shift {
            inner: Box::new(inner),
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Configuration::Periodic { lattice, .. } => lattice.dim(),
            Configuration::CosetIndicator { offset, .. } => offset.dim(),
            Configuration::Mechanical { weights, .. } => weights.dim(),
            Configuration::FiniteSupport { dim, .. } | Configuration::Sum { dim, .. } => *dim,
            Configuration::ValueMap { inner, .. } => inner.dim(),
            Configuration::Shift { offset, .. } => offset.dim(),
        }
    }

    /// Coefficient at `v`, without a dimension check.
    pub(crate) fn value_at(&self, v: &[i64]) -> Result<i64> {
        match self {
            Configuration::Periodic { lattice, values } => {
                let r = lattice.reduce(v);
                Ok(values.get(&r).copied().unwrap_or(0))
            }
            Configuration::CosetIndicator {
                offset,
                lattice,
                value,
            } => {
                let d = IntVector(v.iter().zip(&offset.0).map(|(a, b)| a - b).collect());
                Ok(if lattice.contains(&d) { *value } else { 0 })
            }
            Configuration::Mechanical { weights, alpha } => {
                let k: i128 = v.iter().zip(&weights.0).map(|(&a, &b)| a as i128 * b as i128).sum();
                let k = i64::try_from(k)
                    .map_err(|_| Error::Overflow("evaluating a mechanical configuration"))?;
                alpha.floor_mul(k)
            }
            Configuration::FiniteSupport { values, .. } => {
                Ok(values.get(&IntVector(v.to_vec())).copied().unwrap_or(0))
            }
            Configuration::Sum { terms, .. } => {
                let mut acc = 0i64;
                for (k, t) in terms {
                    let x = t.value_at(v)?;
                    acc = k
                        .checked_mul(x)
                        .and_then(|kx| acc.checked_add(kx))
                        .ok_or(Error::Overflow("evaluating a sum configuration"))?;
                }
                Ok(acc)
            }
            Configuration::ValueMap { inner, map } => Ok(map.apply(inner.value_at(v)?)),
            Configuration::Shift { inner, offset } => {
                let w: Vec<i64> = v.iter().zip(&offset.0).map(|(a, b)| a + b).collect();
                inner.value_at(&w)
            }
        }
    }

    pub fn finitary(&self) -> Finitary {
        match self {
            Configuration::Periodic { .. }
            | Configuration::CosetIndicator { .. }
            | Configuration::FiniteSupport { .. } => Finitary::Yes,
            Configuration::Mechanical { weights, alpha } => {
                if weights.is_zero() || alpha.is_zero() {
                    Finitary::Yes
                } else {
                    Finitary::No
                }
            }
            Configuration::Sum { terms, .. } => {
                if terms.iter().all(|(_, t)| t.finitary() == Finitary::Yes) {
                    Finitary::Yes
                } else {
                    Finitary::Unknown
                }
            }
            Configuration::ValueMap { inner, map } => match map.default {
                ValueDefault::Constant(_) => Finitary::Yes,
                ValueDefault::Identity => match inner.finitary() {
                    Finitary::Yes => Finitary::Yes,
                    _ => Finitary::Unknown,
                },
            },
            Configuration::Shift { inner, .. } => inner.finitary(),
        }
    }

    /// A full-rank lattice of periods, when one is evident from the description.
    pub fn period_lattice(&self) -> Option<Lattice> {
        match self {
            Configuration::Periodic { lattice, .. } => Some(lattice.clone()),
            Configuration::CosetIndicator { lattice, .. } if lattice.is_full_rank() => {
                Some(lattice.clone())
            }
            Configuration::CosetIndicator { .. } => None,
            Configuration::Mechanical { weights, alpha } => {
                (weights.is_zero() || alpha.is_zero()).then(|| Lattice::integer(weights.dim()))
            }
            Configuration::FiniteSupport { dim, values } => {
                values.is_empty().then(|| Lattice::integer(*dim))
            }
            Configuration::Sum { dim, terms } => {
                let mut acc = Lattice::integer(*dim);
                for (k, t) in terms {
                    if *k == 0 {
                        continue;
                    }
                    let l = t.period_lattice()?;
                    acc = if acc == Lattice::integer(*dim) {
                        l
                    } else if l == acc || l == Lattice::integer(*dim) {
                        acc
                    } else {
                        acc.common_scaled_sublattice(&l).ok()?
                    };
                }
                Some(acc)
            }
            Configuration::ValueMap { inner, .. } | Configuration::Shift { inner, .. } => {
                inner.period_lattice()
            }
        }
    }

    /// Canonical residues of a period lattice, if the configuration is evidently
    /// periodic with a fundamental domain small enough to scan.
    pub fn exact_domain(&self) -> Option<Vec<IntVector>> {
        let l = self.period_lattice()?;
        match l.index_u64() {
            Ok(n) if n <= EXACT_DOMAIN_LIMIT => l.residues().ok(),
            _ => None,
        }
    }

    /// Values of `c` on every point of `window`.
    pub fn materialize(&self, window: &Window) -> Result<Pattern<i64>> {
        Error::check_dim(self.dim(), window.dim())?;
        Pattern::try_from_fn(window.clone(), |p| self.value_at(&p.0))
    }

    /// Values as an owned `i64` sequence per cell; alias for use in scans.
    pub(crate) fn grid(&self, lo: &IntVector, hi: &IntVector) -> Result<Grid> {
        let window = Window::new_box(lo.clone(), hi.clone())?;
        let values = if window.len() > 4096 {
            let pts: Vec<IntVector> = window.points().collect();
            pts.par_iter()
                .map(|p| self.value_at(&p.0))
                .collect::<Result<Vec<_>>>()?
        } else {
            window
                .points()
                .map(|p| self.value_at(&p.0))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Grid {
            strides: box_strides(lo, hi),
            lo: lo.clone(),
            values,
        })
    }
}

/// Dense values of a configuration over a box.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    pub lo: IntVector,
    pub strides: Vec<usize>,
    pub values: Vec<i64>,
}

impl Grid {
    /// Grid covering every cell `a + u` for anchors `a` and shape points `u`.
    pub fn covering(c: &Configuration, anchors: &Window, shape: &Window) -> Result<Grid> {
        let (alo, ahi) = anchors.bounds().ok_or(Error::EmptySample)?;
        let (slo, shi) = shape.bounds().ok_or(Error::EmptyShape)?;
        c.grid(&(&alo + &slo), &(&ahi + &shi))
    }

    pub fn offset(&self, v: &[i64]) -> isize {
        linear_offset(v, &self.lo, &self.strides)
    }

    /// Relative offsets of shape points.
    pub fn shape_offsets(&self, shape: &Window) -> Vec<isize> {
        shape
            .points()
            .map(|u| {
                u.0.iter()
                    .zip(&self.strides)
                    .map(|(x, s)| *x as isize * *s as isize)
                    .sum()
            })
            .collect()
    }

    pub fn pattern_at(&self, anchor: &[i64], offsets: &[isize], out: &mut Vec<i64>) {
        let base = self.offset(anchor);
        out.clear();
        out.extend(offsets.iter().map(|o| self.values[(base + o) as usize]));
    }

}

/// Number of distinct `shape`-patterns anchored at the points of `anchors`.
///
/// With `limit = Some(k)` the scan stops as soon as more than `k` patterns have
/// been seen and reports `k + 1`.
pub fn count_patterns(
    c: &Configuration,
    shape: &Window,
    anchors: &Window,
    limit: Option<usize>,
) -> Result<usize> {
    Error::check_dim(c.dim(), shape.dim())?;
    Error::check_dim(c.dim(), anchors.dim())?;
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    if anchors.is_empty() {
        return Err(Error::EmptySample);
    }
    let grid = Grid::covering(c, anchors, shape)?;
    Ok(count_on_grid(&grid, shape, anchors, limit))
}

pub(crate) fn count_on_grid(
    grid: &Grid,
    shape: &Window,
    anchors: &Window,
    limit: Option<usize>,
) -> usize {
    let offsets = grid.shape_offsets(shape);
    match limit {
        Some(k) => {
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            let mut buf = Vec::with_capacity(offsets.len());
            for a in anchors.points() {
                grid.pattern_at(&a.0, &offsets, &mut buf);
                if !seen.contains(&buf) {
                    seen.insert(buf.clone());
                    if seen.len() > k {
                        return k + 1;
                    }
                }
            }
            seen.len()
        }
        None => {
            let pts: Vec<IntVector> = anchors.points().collect();
            let sets: Vec<HashSet<Vec<i64>>> = pts
                .par_chunks(8192)
                .map(|chunk| {
                    let mut seen = HashSet::new();
                    let mut buf = Vec::with_capacity(offsets.len());
                    for a in chunk {
                        grid.pattern_at(&a.0, &offsets, &mut buf);
                        if !seen.contains(&buf) {
                            seen.insert(buf.clone());
                        }
                    }
                    seen
                })
                .collect();
            let mut all: HashSet<Vec<i64>> = HashSet::new();
            for s in sets {
                all.extend(s);
            }
            all.len()
        }
    }
}

/// Distinct patterns (as value vectors in shape order) in first-seen order.
pub(crate) fn distinct_patterns(
    c: &Configuration,
    shape: &Window,
    anchors: &Window,
) -> Result<Vec<Vec<i64>>> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    if anchors.is_empty() {
        return Err(Error::EmptySample);
    }
    let grid = Grid::covering(c, anchors, shape)?;
    let offsets = grid.shape_offsets(shape);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for a in anchors.points() {
        grid.pattern_at(&a.0, &offsets, &mut buf);
        if seen.insert(buf.clone()) {
            out.push(buf.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityResult {
    pub count: usize,
    /// `count` equals the true complexity; otherwise it is a lower bound.
    pub exact: bool,
    pub sample_window: Window,
}

pub fn evaluate(c: &Configuration, v: &IntVector) -> Result<i64> {
    Error::check_dim(c.dim(), v.dim())?;
    c.value_at(&v.0)
}

/// The pattern `u -> c(anchor + u)` on `shape`.
pub fn extract_pattern(c: &Configuration, anchor: &IntVector, shape: &Window) -> Result<Pattern> {
    Error::check_dim(c.dim(), anchor.dim())?;
    Error::check_dim(c.dim(), shape.dim())?;
    Pattern::try_from_fn(shape.clone(), |u| c.value_at(&(anchor + u).0))
}

/// Counts the distinct `shape`-patterns of `c` anchored in `sample`.
///
/// For evidently periodic configurations the sample is replaced by a
/// fundamental domain and the count is exact.
pub fn pattern_complexity(
    c: &Configuration,
    shape: &Window,
    sample: &Window,
) -> Result<ComplexityResult> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    Error::check_dim(c.dim(), shape.dim())?;
    Error::check_dim(c.dim(), sample.dim())?;
    if let Some(residues) = c.exact_domain() {
        let domain = Window::set(c.dim(), residues)?;
        let count = count_patterns(c, shape, &domain, None)?;
        return Ok(ComplexityResult {
            count,
            exact: true,
            sample_window: domain,
        });
    }
    let count = count_patterns(c, shape, sample, None)?;
    Ok(ComplexityResult {
        count,
        exact: false,
        sample_window: sample.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Periodicity {
    Periodic,
    NotPeriodic { witness: IntVector },
    /// Consistent with periodicity on the whole sample.
    Unknown,
}

/// Tests `c(u) = c(u + v)`: exactly for evidently periodic `c`, otherwise on `sample`.
pub fn periodicity_test(c: &Configuration, v: &IntVector, sample: &Window) -> Result<Periodicity> {
    Error::check_dim(c.dim(), v.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (points, exact): (Vec<IntVector>, bool) = match c.exact_domain() {
        Some(r) => (r, true),
        None => {
            Error::check_dim(c.dim(), sample.dim())?;
            (sample.points().collect(), false)
        }
    };
    for u in &points {
        if c.value_at(&u.0)? != c.value_at(&(u + v).0)? {
            return Ok(Periodicity::NotPeriodic { witness: u.clone() });
        }
    }
    Ok(if exact {
        Periodicity::Periodic
    } else {
        Periodicity::Unknown
    })
}

/// Relabels the values of `c` through `map`.
pub fn merge_letters(c: &Configuration, map: ValueMapping) -> Configuration {
    Configuration::value_map(c.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: &[i64]) -> IntVector {
        IntVector(x.to_vec())
    }

    pub(crate) fn checkerboard() -> Configuration {
        let l = Lattice::new(2, vec![iv(&[2, 0]), iv(&[0, 2])]).unwrap();
        Configuration::periodic(
            l,
            [
                (iv(&[0, 0]), 0),
                (iv(&[1, 0]), 1),
                (iv(&[0, 1]), 1),
                (iv(&[1, 1]), 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&checkerboard(), &iv(&[3, 4])).unwrap(), 1);
        let m = Configuration::mechanical(iv(&[1, 1]), QuadraticReal::sqrt(2).unwrap());
        assert_eq!(evaluate(&m, &iv(&[1, 1])).unwrap(), 2);
        let f = Configuration::finite(2, [(iv(&[0, 0]), 5)]).unwrap();
        assert_eq!(evaluate(&f, &iv(&[1, 0])).unwrap(), 0);
        assert_eq!(
            evaluate(&f, &iv(&[1, 0, 0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn extract_examples() {
        let p = extract_pattern(&checkerboard(), &iv(&[0, 0]), &Window::rect(&[2, 2]).unwrap())
            .unwrap();
        assert_eq!(p.values, vec![0, 1, 1, 0]);
        let p = extract_pattern(&checkerboard(), &iv(&[5, 5]), &Window::empty(2)).unwrap();
        assert!(p.is_empty());
        let z = Configuration::constant(2, 0);
        let p = extract_pattern(&z, &iv(&[-7, 3]), &Window::rect(&[3, 3]).unwrap()).unwrap();
        assert!(p.is_constant(&0));
    }

    #[test]
    fn checkerboard_complexity_is_exact_two() {
        let r = pattern_complexity(
            &checkerboard(),
            &Window::rect(&[2, 2]).unwrap(),
            &Window::rect(&[10, 10]).unwrap(),
        )
        .unwrap();
        assert_eq!(r.count, 2);
        assert!(r.exact);
    }

    #[test]
    fn constant_complexity_is_one() {
        let c = Configuration::constant(3, 7);
        let r = pattern_complexity(
            &c,
            &Window::rect(&[4, 2, 3]).unwrap(),
            &Window::rect(&[2, 2, 2]).unwrap(),
        )
        .unwrap();
        assert_eq!((r.count, r.exact), (1, true));
    }

    #[test]
    fn complexity_errors() {
        let c = checkerboard();
        let s = Window::rect(&[2, 2]).unwrap();
        assert_eq!(
            pattern_complexity(&c, &Window::empty(2), &s),
            Err(Error::EmptyShape)
        );
        assert_eq!(
            pattern_complexity(&c, &s, &Window::empty(2)),
            Err(Error::EmptySample)
        );
    }

    #[test]
    fn periodicity_examples() {
        let c = checkerboard();
        let s = Window::rect(&[5, 5]).unwrap();
        assert_eq!(
            periodicity_test(&c, &iv(&[1, 1]), &s).unwrap(),
            Periodicity::Periodic
        );
        assert_eq!(
            periodicity_test(&c, &iv(&[1, 0]), &s).unwrap(),
            Periodicity::NotPeriodic {
                witness: iv(&[0, 0])
            }
        );
        assert_eq!(
            periodicity_test(&c, &iv(&[0, 0]), &s),
            Err(Error::ZeroVector)
        );
        let m = Configuration::mechanical(iv(&[1, 0]), QuadraticReal::sqrt(2).unwrap());
        let r = periodicity_test(&m, &iv(&[5, 0]), &Window::rect(&[100, 100]).unwrap()).unwrap();
        assert!(matches!(r, Periodicity::NotPeriodic { .. } | Periodicity::Unknown));
    }

    #[test]
    fn merge_letters_examples() {
        let l = Lattice::new(1, vec![iv(&[3])]).unwrap();
        let tern = Configuration::periodic(l, [(iv(&[1]), 1), (iv(&[2]), 2)]).unwrap();
        let bin = merge_letters(
            &tern,
            ValueMapping::new([(0, 0), (1, 1), (2, 1)], ValueDefault::Identity),
        );
        let vals: Vec<i64> = (0..6).map(|i| evaluate(&bin, &iv(&[i])).unwrap()).collect();
        assert_eq!(vals, vec![0, 1, 1, 0, 1, 1]);

        let shape = Window::rect(&[3]).unwrap();
        let sample = Window::rect(&[30]).unwrap();
        let id = merge_letters(&tern, ValueMapping::identity());
        assert_eq!(
            pattern_complexity(&id, &shape, &sample).unwrap().count,
            pattern_complexity(&tern, &shape, &sample).unwrap().count
        );
        let collapsed = merge_letters(&tern, ValueMapping::new([], ValueDefault::Constant(0)));
        assert_eq!(pattern_complexity(&collapsed, &shape, &sample).unwrap().count, 1);
    }

    #[test]
    fn sum_of_periodic_is_exact() {
        let a = Configuration::coset(
            iv(&[0, 0]),
            Lattice::new(2, vec![iv(&[2, 0]), iv(&[0, 1])]).unwrap(),
            1,
        )
        .unwrap();
        let b = Configuration::coset(
            iv(&[0, 1]),
            Lattice::new(2, vec![iv(&[1, 0]), iv(&[0, 3])]).unwrap(),
            2,
        )
        .unwrap();
        let s = Configuration::sum(2, vec![(1, a), (1, b)]).unwrap();
        let l = s.period_lattice().unwrap();
        assert!(l.contains(&iv(&[6, 0])) && l.contains(&iv(&[0, 6])));
        let r = pattern_complexity(
            &s,
            &Window::rect(&[1, 1]).unwrap(),
            &Window::rect(&[2, 2]).unwrap(),
        )
        .unwrap();
        assert!(r.exact);
        assert_eq!(r.count, 4);
    }

    #[test]
    fn early_exit_reports_limit_plus_one() {
        let m = Configuration::mechanical(iv(&[1, 1]), QuadraticReal::sqrt(2).unwrap());
        let shape = Window::rect(&[3, 3]).unwrap();
        let sample = Window::rect(&[50, 50]).unwrap();
        let full = count_patterns(&m, &shape, &sample, None).unwrap();
        assert!(full > 5);
        assert_eq!(count_patterns(&m, &shape, &sample, Some(5)).unwrap(), 6);
        assert_eq!(count_patterns(&m, &shape, &sample, Some(full)).unwrap(), full);
    }
}
