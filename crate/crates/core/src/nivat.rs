//! Lower bounds on rectangular pattern complexity, sampled scans of
//! `P_c(M,N) > MN`, per-line pattern census and periodicity classification.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::config::{count_on_grid, Configuration, Grid};
use crate::decomposition::line_id;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPolynomial, LineFactorization};
use crate::lattice::{det2, IntVector};
use crate::window::Window;

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `Mn + mN + mn`: disjoint lines of `(M+m) x (N+n)` blocks in a one-periodic
/// configuration whose annihilator is a line polynomial with box `(m, n)`.
pub fn bound_disjoint_lines(m: u64, n: u64, big_m: u64, big_n: u64) -> Result<BigInt> {
    if m == 0 && n == 0 {
        return Err(Error::DegenerateDirection);
    }
    Ok(big(big_m) * n + big(m) * big_n + big(m) * n)
}

/// `(Mn + mN) / S`, a strict lower bound on the size of a transversal line.
pub fn bound_line_size(m: u64, n: u64, big_m: u64, big_n: u64, area: u64) -> Result<BigRational> {
    if area == 0 {
        return Err(Error::ZeroArea);
    }
    Ok(BigRational::new(big(big_m) * n + big(m) * big_n, big(area)))
}

fn check_direction(v: &IntVector) -> Result<()> {
    if v.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(Error::NonPrimitive(v.clone()));
    }
    Ok(())
}

/// `(M n1 + m1 N)(M n2 + m2 N) / (m1 n2 + m2 n1)` with `(m_i, n_i) = box(v_i)`.
pub fn bound_two_directions(v1: &IntVector, v2: &IntVector, big_m: u64, big_n: u64) -> Result<BigRational> {
    check_direction(v1)?;
    check_direction(v2)?;
    if det2(v1, v2) == 0 {
        return Err(Error::ParallelDirections);
    }
    let (m1, n1) = (v1[0].unsigned_abs(), v1[1].unsigned_abs());
    let (m2, n2) = (v2[0].unsigned_abs(), v2[1].unsigned_abs());
    let den = big(m1) * n2 + big(m2) * n1;
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let a = big(big_m) * n1 + big(m1) * big_n;
    let b = big(big_m) * n2 + big(m2) * big_n;
    Ok(BigRational::new(a * b, den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundLabel {
    CorA,
    CorBPair,
    CorC,
}

impl fmt::Display for BoundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundLabel::CorA => "cor-a",
            BoundLabel::CorBPair => "cor-b-pair",
            BoundLabel::CorC => "cor-c",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub label: BoundLabel,
    /// `P_c(M, N) > value`.
    pub value: BigRational,
    /// Direction pair used by a `cor-b-pair` bound.
    pub pair: Option<(IntVector, IntVector)>,
    /// `value / ((M - m)(N - n))` when the denominator is positive.
    pub ratio: Option<BigRational>,
    /// Holds only if the line-direction count equals the true number of line
    /// factors of the annihilator ideal.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub big_m: u64,
    pub big_n: u64,
    pub bbox_f: (u64, u64),
    pub directions: Vec<IntVector>,
    pub bounds: Vec<Bound>,
}

impl BoundReport {
    pub fn get(&self, label: BoundLabel) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.label == label)
    }

    /// Largest bound; unconditional ones only unless `include_conditional`.
    pub fn best(&self, include_conditional: bool) -> Option<&Bound> {
        self.bounds
            .iter()
            .filter(|b| include_conditional || !b.conditional)
            .max_by(|a, b| a.value.cmp(&b.value))
    }
}

/// The complexity bounds that apply to `M x N` blocks of a non-periodic
/// configuration annihilated by `f`, whose line factors are `lf`.
pub fn corollary_report(
    f: &LaurentPolynomial,
    lf: &LineFactorization,
    big_m: u64,
    big_n: u64,
) -> Result<BoundReport> {
    if f.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    let b = f.bbox()?;
    let (m, n) = (b[0] as u64, b[1] as u64);
    if big_m < m || big_n < n {
        return Err(Error::BlockTooSmall {
            block_m: big_m,
            block_n: big_n,
            m,
            n,
        });
    }
    let base = big(big_m - m) * (big_n - n);
    let ratio = |v: &BigRational| {
        (!base.is_zero()).then(|| v / BigRational::from_integer(base.clone()))
    };
    let mut bounds = vec![Bound {
        label: BoundLabel::CorA,
        value: BigRational::from_integer(base.clone()),
        pair: None,
        ratio: ratio(&BigRational::from_integer(base.clone())),
        conditional: false,
    }];
    let directions = lf.directions();
    let oblique: Vec<&IntVector> = directions
        .iter()
        .filter(|v| v[0] != 0 && v[1] != 0)
        .collect();
    for (i, v1) in oblique.iter().enumerate() {
        for v2 in &oblique[i + 1..] {
            let (m1, n1) = (v1[0].unsigned_abs(), v1[1].unsigned_abs());
            let (m2, n2) = (v2[0].unsigned_abs(), v2[1].unsigned_abs());
            let (Some(mm), Some(nn)) = (
                big_m.checked_sub(m1 + m2),
                big_n.checked_sub(n1 + n2),
            ) else {
                continue;
            };
            let value = bound_two_directions(v1, v2, mm, nn)?;
            bounds.push(Bound {
                label: BoundLabel::CorBPair,
                ratio: ratio(&value),
                value,
                pair: Some(((*v1).clone(), (*v2).clone())),
                conditional: false,
            });
        }
    }
    if lf.line_direction_count() >= 3 {
        let value = BigRational::from_integer(&base * 2);
        bounds.push(Bound {
            label: BoundLabel::CorC,
            ratio: ratio(&value),
            value,
            pair: None,
            conditional: true,
        });
    }
    Ok(BoundReport {
        big_m,
        big_n,
        bbox_f: (m, n),
        directions,
        bounds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ExceedsMN,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ExceedsMN => "ExceedsMN",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub big_m: u64,
    pub big_n: u64,
    /// Distinct `M x N` patterns seen, capped at `MN + 1`.
    pub count: u64,
    pub threshold: u64,
    pub verdict: Verdict,
}

/// Sampled lower bounds on `P_c(M, N)` against `MN` for every cell of the
/// ranges. Evidently periodic configurations are scanned on a fundamental
/// domain instead of `sample`.
pub fn nivat_scan(
    c: &Configuration,
    m_range: RangeInclusive<u64>,
    n_range: RangeInclusive<u64>,
    sample: &Window,
) -> Result<Vec<ScanRow>> {
    if c.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    Error::check_dim(2, sample.dim())?;
    if m_range.is_empty() || n_range.is_empty() || *m_range.start() == 0 || *n_range.start() == 0 {
        return Err(Error::InvalidWindow("block ranges must be nonempty and positive".into()));
    }
    let anchors = match c.exact_domain() {
        Some(r) => Window::set(2, r)?,
        None => sample.clone(),
    };
    if anchors.is_empty() {
        return Err(Error::EmptySample);
    }
    let largest = Window::rect(&[*m_range.end(), *n_range.end()])?;
    let grid = Grid::covering(c, &anchors, &largest)?;
    let cells: Vec<(u64, u64)> = m_range
        .flat_map(|m| n_range.clone().map(move |n| (m, n)))
        .collect();
    cells
        .par_iter()
        .map(|&(m, n)| {
            let threshold = m
                .checked_mul(n)
                .ok_or(Error::Overflow("computing MN"))?;
            let shape = Window::rect(&[m, n])?;
            let count = count_on_grid(&grid, &shape, &anchors, Some(threshold as usize)) as u64;
            Ok(ScanRow {
                big_m: m,
                big_n: n,
                count,
                threshold,
                verdict: if count > threshold {
                    Verdict::ExceedsMN
                } else {
                    Verdict::Inconclusive
                },
            })
        })
        .collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("M,N,count,threshold,verdict\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.big_m, r.big_n, r.count, r.threshold, r.verdict
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCensus {
    /// Line representative and the number of distinct patterns along it.
    pub lines: Vec<(IntVector, usize)>,
    /// Lines whose pattern sets are pairwise disjoint, chosen greedily in line order.
    pub disjoint_pattern_lines: usize,
}

impl LineCensus {
    pub fn anchor_lines(&self) -> usize {
        self.lines.len()
    }
}

/// Groups the anchors of `sample` into lines `w + Zv` and counts the distinct
/// `shape`-patterns on each.
pub fn line_pattern_census(
    c: &Configuration,
    shape: &Window,
    v: &IntVector,
    sample: &Window,
) -> Result<LineCensus> {
    Error::check_dim(c.dim(), v.dim())?;
    Error::check_dim(c.dim(), shape.dim())?;
    Error::check_dim(c.dim(), sample.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let grid = Grid::covering(c, sample, shape)?;
    let offsets = grid.shape_offsets(shape);
    let mut per_line: BTreeMap<IntVector, HashSet<Vec<i64>>> = BTreeMap::new();
    let mut buf = Vec::with_capacity(offsets.len());
    for a in sample.points() {
        grid.pattern_at(&a.0, &offsets, &mut buf);
        per_line
            .entry(line_id(&a, v))
            .or_default()
            .insert(buf.clone());
    }
    let mut used: HashSet<&Vec<i64>> = HashSet::new();
    let mut disjoint = 0;
    for set in per_line.values() {
        if set.iter().all(|p| !used.contains(p)) {
            disjoint += 1;
            used.extend(set.iter());
        }
    }
    Ok(LineCensus {
        lines: per_line.iter().map(|(k, s)| (k.clone(), s.len())).collect(),
        disjoint_pattern_lines: disjoint,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodicityClass {
    DoublyPeriodicCandidate,
    OnePeriodicCandidate,
    NonPeriodicCandidate,
    Unknown,
}

impl fmt::Display for PeriodicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeriodicityClass::DoublyPeriodicCandidate => "DoublyPeriodicCandidate",
            PeriodicityClass::OnePeriodicCandidate => "OnePeriodicCandidate",
            PeriodicityClass::NonPeriodicCandidate => "NonPeriodicCandidate",
            PeriodicityClass::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicityReport {
    pub class: PeriodicityClass,
    /// Backed by exactly verified periods rather than the direction count.
    pub certain: bool,
    /// Number of distinct line directions, an upper bound for the number of
    /// line factors of the annihilator ideal.
    pub direction_count: Option<usize>,
}

/// Classifies from a difference-product certificate and/or a line
/// factorization; `periods` must be exactly verified periods.
pub fn periodicity_class(
    search_result: Option<&[IntVector]>,
    lf: Option<&LineFactorization>,
    periods: &[IntVector],
) -> PeriodicityReport {
    let independent = periods
        .iter()
        .enumerate()
        .any(|(i, a)| periods[i + 1..].iter().any(|b| a.dim() == 2 && det2(a, b) != 0));
    let direction_count = match (lf, search_result) {
        (Some(lf), _) => Some(lf.line_direction_count()),
        (None, Some(vs)) => {
            let dirs: HashSet<IntVector> = vs
                .iter()
                .filter(|v| !v.is_zero())
                .map(|v| v.primitive_part().canonical_sign())
                .collect();
            Some(dirs.len())
        }
        (None, None) => None,
    };
    if independent {
        return PeriodicityReport {
            class: PeriodicityClass::DoublyPeriodicCandidate,
            certain: true,
            direction_count,
        };
    }
    let class = match (direction_count, periods.is_empty()) {
        (Some(0), _) => PeriodicityClass::DoublyPeriodicCandidate,
        (Some(_), false) | (None, false) => PeriodicityClass::OnePeriodicCandidate,
        (Some(1), true) => PeriodicityClass::OnePeriodicCandidate,
        (Some(_), true) => PeriodicityClass::NonPeriodicCandidate,
        (None, true) => PeriodicityClass::Unknown,
    };
    PeriodicityReport {
        class,
        certain: false,
        direction_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::line_factorization;
    use crate::lattice::Lattice;

    fn iv(x: &[i64]) -> IntVector {
        IntVector(x.to_vec())
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn checkerboard() -> Configuration {
        let l = Lattice::new(2, vec![iv(&[2, 0]), iv(&[0, 2])]).unwrap();
        Configuration::periodic(l, [(iv(&[1, 0]), 1), (iv(&[0, 1]), 1)]).unwrap()
    }

    fn row_indicator() -> Configuration {
        let l = Lattice::span(2, vec![iv(&[1, 0])]).unwrap();
        Configuration::coset(iv(&[0, 0]), l, 1).unwrap()
    }

    #[test]
    fn disjoint_line_formula() {
        assert_eq!(bound_disjoint_lines(1, 1, 2, 2).unwrap(), BigInt::from(5));
        assert_eq!(bound_disjoint_lines(1, 0, 3, 2).unwrap(), BigInt::from(2));
        assert_eq!(bound_disjoint_lines(0, 0, 3, 2), Err(Error::DegenerateDirection));
    }

    #[test]
    fn line_size_formula() {
        assert_eq!(bound_line_size(1, 0, 4, 4, 1).unwrap(), rat(4));
        assert_eq!(bound_line_size(1, 0, 4, 4, 0), Err(Error::ZeroArea));
        assert_eq!(
            bound_line_size(1, 1, 2, 3, 2).unwrap(),
            BigRational::new(5.into(), 2.into())
        );
    }

    #[test]
    fn two_direction_formula() {
        assert_eq!(bound_two_directions(&iv(&[1, 0]), &iv(&[0, 1]), 4, 7).unwrap(), rat(28));
        assert_eq!(bound_two_directions(&iv(&[1, 0]), &iv(&[1, -1]), 3, 3).unwrap(), rat(18));
        assert_eq!(
            bound_two_directions(&iv(&[1, 2]), &iv(&[1, 2]), 3, 3),
            Err(Error::ParallelDirections)
        );
        assert_eq!(
            bound_two_directions(&iv(&[1, 2]), &iv(&[-1, -2]), 3, 3),
            Err(Error::ParallelDirections)
        );
    }

    #[test]
    fn corollary_bounds() {
        let f = crate::annihilator::difference_product(
            2,
            &[iv(&[1, 0]), iv(&[0, 1]), iv(&[1, -1])],
        );
        assert_eq!(f.bbox().unwrap(), iv(&[2, 2]));
        let lf = line_factorization(&f).unwrap();
        let rep = corollary_report(&f, &lf, 5, 5).unwrap();
        assert_eq!(rep.get(BoundLabel::CorA).unwrap().value, rat(9));
        let c = rep.get(BoundLabel::CorC).unwrap();
        assert_eq!(c.value, rat(18));
        assert!(c.conditional);
        assert!(rep.get(BoundLabel::CorBPair).is_none());
        assert_eq!(rep.best(false).unwrap().value, rat(9));
        assert_eq!(
            corollary_report(&f, &lf, 1, 5),
            Err(Error::BlockTooSmall {
                block_m: 1,
                block_n: 5,
                m: 2,
                n: 2
            })
        );
    }

    #[test]
    fn oblique_pair_bound() {
        let f = crate::annihilator::difference_product(2, &[iv(&[1, 1]), iv(&[1, -1])]);
        let lf = line_factorization(&f).unwrap();
        let rep = corollary_report(&f, &lf, 6, 6).unwrap();
        let b = rep.get(BoundLabel::CorBPair).unwrap();
        // M' = N' = 4, boxes (1,1): (4+4)(4+4)/2 = 32
        assert_eq!(b.value, rat(32));
        assert_eq!(b.ratio, Some(BigRational::new(32.into(), 16.into())));
    }

    #[test]
    fn scans() {
        let rows = nivat_scan(&checkerboard(), 2..=2, 2..=2, &Window::rect(&[10, 10]).unwrap()).unwrap();
        assert_eq!(rows[0].count, 2);
        assert_eq!(rows[0].verdict, Verdict::Inconclusive);
        let rows = nivat_scan(
            &Configuration::constant(2, 3),
            1..=3,
            1..=3,
            &Window::rect(&[10, 10]).unwrap(),
        )
        .unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.count == 1 && r.verdict == Verdict::Inconclusive));
        let csv = scan_csv(&rows);
        assert!(csv.starts_with("M,N,count,threshold,verdict\n1,1,1,1,Inconclusive\n"));
    }

    #[test]
    fn census_examples() {
        let sample = Window::new_box(iv(&[-5, -5]), iv(&[5, 5])).unwrap();
        let shape = Window::rect(&[2, 2]).unwrap();
        let census = line_pattern_census(&row_indicator(), &shape, &iv(&[1, 0]), &sample).unwrap();
        assert!(census.lines.iter().all(|(_, k)| *k == 1));
        assert_eq!(census.anchor_lines(), 11);
        assert_eq!(census.disjoint_pattern_lines, 3);

        let row = Window::rect(&[10, 1]).unwrap();
        let one = Window::rect(&[1, 1]).unwrap();
        let census = line_pattern_census(&checkerboard(), &one, &iv(&[1, 0]), &row).unwrap();
        assert_eq!(census.lines.len(), 1);
        assert_eq!(census.lines[0].1, 2);

        let census =
            line_pattern_census(&Configuration::constant(2, 1), &shape, &iv(&[1, 1]), &sample).unwrap();
        assert!(census.lines.iter().all(|(_, k)| *k == 1));
        assert_eq!(
            line_pattern_census(&checkerboard(), &one, &iv(&[0, 0]), &row),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn classes() {
        let rep = periodicity_class(Some(&[iv(&[1, 1])]), None, &[iv(&[2, 0]), iv(&[0, 2])]);
        assert_eq!(rep.class, PeriodicityClass::DoublyPeriodicCandidate);
        assert!(rep.certain);
        let three = [iv(&[0, 1]), iv(&[1, 0]), iv(&[1, -1])];
        let rep = periodicity_class(Some(&three), None, &[]);
        assert_eq!(rep.class, PeriodicityClass::NonPeriodicCandidate);
        assert_eq!(rep.direction_count, Some(3));
        assert_eq!(periodicity_class(None, None, &[]).class, PeriodicityClass::Unknown);
        assert_eq!(
            periodicity_class(Some(&[iv(&[2, 0])]), None, &[]).class,
            PeriodicityClass::OnePeriodicCandidate
        );
    }
}
