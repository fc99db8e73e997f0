//! Exact sparse Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type SparseRow = BTreeMap<usize, BigRational>;

/// Rows kept in echelon form, one per pivot column, each with pivot entry 1.
/// Rows may carry an augmented right-hand side.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    columns: usize,
    rows: BTreeMap<usize, (SparseRow, BigRational)>,
}

/// Outcome of inserting an equation.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Insert {
    NewPivot(usize),
    Redundant,
    Inconsistent,
}

fn axpy(target: &mut SparseRow, k: &BigRational, src: &SparseRow) {
    for (&j, x) in src {
        let e = target.entry(j).or_insert_with(BigRational::zero);
        *e -= k * x;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

impl Echelon {
    pub fn new(columns: usize) -> Self {
        Echelon {
            columns,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert_dense(&mut self, row: &[BigRational], rhs: BigRational) -> Insert {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        self.insert(sparse, rhs)
    }

    /// Reduces `row · x = rhs` against the current pivots and keeps it if new.
    pub fn insert(&mut self, mut row: SparseRow, mut rhs: BigRational) -> Insert {
        while let Some((&j, _)) = row.iter().find(|(j, _)| self.rows.contains_key(j)) {
            let k = row.remove(&j).expect("present");
            let (prow, prhs) = &self.rows[&j];
            axpy(&mut row, &k, prow);
            row.remove(&j);
            rhs -= &k * prhs;
        }
        match row.iter().next() {
            None if rhs.is_zero() => Insert::Redundant,
            None => Insert::Inconsistent,
            Some((&p, lead)) => {
                let inv = lead.recip();
                for x in row.values_mut() {
                    *x *= &inv;
                }
                rhs *= &inv;
                self.rows.insert(p, (row, rhs));
                Insert::NewPivot(p)
            }
        }
    }

    /// Back-substitutes into reduced row echelon form.
    fn reduce(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &p in &pivots {
            let (prow, prhs) = self.rows[&p].clone();
            for (_, (row, rhs)) in self.rows.range_mut(..p) {
                if let Some(k) = row.remove(&p) {
                    axpy(row, &k, &prow);
                    row.remove(&p);
                    *rhs -= &k * &prhs;
                }
            }
        }
    }

    /// Kernel basis of the homogeneous system, one vector per free column in
    /// increasing column order.
    pub fn kernel(mut self) -> Vec<Vec<BigRational>> {
        self.reduce();
        let mut out = Vec::new();
        for free in (0..self.columns).filter(|j| !self.rows.contains_key(j)) {
            let mut v = vec![BigRational::zero(); self.columns];
            v[free] = BigRational::one();
            for (&p, (row, _)) in &self.rows {
                if let Some(x) = row.get(&free) {
                    v[p] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }

    /// The solution with all free variables set to zero.
    pub fn solution(mut self) -> Vec<BigRational> {
        self.reduce();
        let mut x = vec![BigRational::zero(); self.columns];
        for (&p, (_, rhs)) in &self.rows {
            x[p] = rhs.clone();
        }
        x
    }
}

/// Scales a rational vector to coprime integers with first nonzero entry positive.
pub(crate) fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| if neg { -(x / &g) } else { x / &g })
        .collect()
}
