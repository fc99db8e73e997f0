//! Integer vectors and lattices in `Z^d`.
//!
//! Lattices are stored in column Hermite normal form: generators are columns,
//! each column has a positive pivot and zeros below it, and the entries to the
//! right of a pivot in its row are reduced into `[0, pivot)`. For a full-rank
//! lattice this is an upper-triangular matrix and the canonical coset
//! representatives are the points of the box `0 <= x_i < h_ii`.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        IntVector(coords.into())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![0; dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Non-negative gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divides out the content. The zero vector is returned unchanged.
    pub fn primitive_part(&self) -> IntVector {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        IntVector(self.0.iter().map(|&x| x / g as i64).collect())
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn canonical_sign(&self) -> IntVector {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => -self,
            _ => self.clone(),
        }
    }

    pub fn scale(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn dot(&self, other: &IntVector) -> i128 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    /// `Box(v)`: componentwise absolute values.
    pub fn abs_box(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| x.abs()).collect())
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for IntVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(v: [i64; N]) -> Self {
        IntVector(v.to_vec())
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

/// A lattice in `Z^d` given by independent generators, stored in column HNF.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    /// Basis columns sorted by pivot row.
    basis: Vec<IntVector>,
    /// Pivot row of each basis column.
    pivots: Vec<usize>,
}

impl Lattice {
    /// Builds the lattice generated by `generators`, which must be independent.
    pub fn new(dim: usize, generators: Vec<IntVector>) -> Result<Self> {
        let count = generators.len();
        let lattice = Self::span(dim, generators)?;
        if lattice.rank() != count {
            return Err(Error::RankDeficient);
        }
        Ok(lattice)
    }

    /// Builds the lattice spanned by arbitrary (possibly dependent) vectors.
    pub fn span(dim: usize, generators: Vec<IntVector>) -> Result<Self> {
        for g in &generators {
            Error::check_dim(dim, g.dim())?;
        }
        let mut cols: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| g.0.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut active: Vec<usize> = (0..cols.len()).collect();
        let mut pivot_of: Vec<(usize, usize)> = Vec::new();

        for row in (0..dim).rev() {
            loop {
                let nonzero: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|&c| !cols[c][row].is_zero())
                    .collect();
                if nonzero.len() <= 1 {
                    if let Some(&c) = nonzero.first() {
                        if cols[c][row].is_negative() {
                            for x in cols[c].iter_mut() {
                                *x = -x.clone();
                            }
                        }
                        pivot_of.push((row, c));
                        active.retain(|&a| a != c);
                    }
                    break;
                }
                let best = *nonzero
                    .iter()
                    .min_by(|&&a, &&b| cols[a][row].abs().cmp(&cols[b][row].abs()))
                    .expect("nonempty");
                for &c in &nonzero {
                    if c == best {
                        continue;
                    }
                    let q = cols[c][row].div_floor(&cols[best][row]);
                    let pivot_col = cols[best].clone();
                    for (x, p) in cols[c].iter_mut().zip(&pivot_col) {
                        *x -= &q * p;
                    }
                }
            }
        }

        // Reduce entries to the right of each pivot, bottom pivot first.
        pivot_of.sort();
        for k in (0..pivot_of.len()).rev() {
            let (prow, pcol) = pivot_of[k];
            let pivot_col = cols[pcol].clone();
            let h = pivot_col[prow].clone();
            for &(_, other) in &pivot_of[k + 1..] {
                let q = cols[other][prow].div_floor(&h);
                if !q.is_zero() {
                    for (x, p) in cols[other].iter_mut().zip(&pivot_col) {
                        *x -= &q * p;
                    }
                }
            }
        }

        let mut basis = Vec::with_capacity(pivot_of.len());
        let mut pivots = Vec::with_capacity(pivot_of.len());
        for &(row, c) in &pivot_of {
            let col = cols[c]
                .iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("computing a Hermite normal form")))
                .collect::<Result<Vec<_>>>()?;
            basis.push(IntVector(col));
            pivots.push(row);
        }
        Ok(Lattice { dim, basis, pivots })
    }

    /// The whole of `Z^d`.
    pub fn integer(dim: usize) -> Self {
        Lattice {
            dim,
            basis: (0..dim).map(|i| IntVector::unit(dim, i)).collect(),
            pivots: (0..dim).collect(),
        }
    }

    /// `k Z^d`.
    pub fn scaled_integer(dim: usize, k: i64) -> Self {
        assert!(k > 0);
        Lattice {
            dim,
            basis: (0..dim).map(|i| IntVector::unit(dim, i).scale(k)).collect(),
            pivots: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// HNF basis columns, ordered by pivot row.
    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    fn diagonal(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.iter().zip(&self.pivots).map(|(b, &p)| b[p])
    }

    /// Index `|Z^d / L|`, i.e. `|det|` of a basis.
    pub fn index(&self) -> Result<BigInt> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient);
        }
        Ok(self.diagonal().map(BigInt::from).product())
    }

    /// Index as a machine integer, when it fits.
    pub fn index_u64(&self) -> Result<u64> {
        self.index()?
            .to_u64()
            .ok_or(Error::Overflow("computing a lattice index"))
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        if v.dim() != self.dim {
            return false;
        }
        let mut r: Vec<i128> = v.0.iter().map(|&x| x as i128).collect();
        let mut next = self.basis.len();
        for row in (0..self.dim).rev() {
            if next > 0 && self.pivots[next - 1] == row {
                next -= 1;
                let col = &self.basis[next];
                let h = col[row] as i128;
                if r[row] % h != 0 {
                    return false;
                }
                let q = r[row] / h;
                for (x, &c) in r.iter_mut().zip(&col.0) {
                    *x -= q * c as i128;
                }
            } else if r[row] != 0 {
                return false;
            }
        }
        true
    }

    /// Canonical representative of `v + L`. For rank-deficient lattices only the
    /// pivot coordinates are reduced.
    pub fn reduce(&self, v: &[i64]) -> IntVector {
        let mut r: Vec<i64> = v.to_vec();
        self.reduce_in_place(&mut r);
        IntVector(r)
    }

    pub(crate) fn reduce_in_place(&self, r: &mut [i64]) {
        for (col, &row) in self.basis.iter().zip(&self.pivots).rev() {
            let q = r[row].div_euclid(col[row]);
            if q != 0 {
                for (x, &c) in r.iter_mut().zip(&col.0) {
                    *x -= q * c;
                }
            }
        }
    }

    /// Canonical coset representatives, first coordinate varying fastest.
    pub fn residues(&self) -> Result<Vec<IntVector>> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient);
        }
        let diag: Vec<i64> = self.diagonal().collect();
        let total = self.index_u64()?;
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0i64; self.dim];
        for _ in 0..total {
            out.push(IntVector(cur.clone()));
            for (c, &h) in cur.iter_mut().zip(&diag) {
                *c += 1;
                if *c < h {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// A full-rank sublattice of `self ∩ other` of the form `k Z^d`.
    pub(crate) fn common_scaled_sublattice(&self, other: &Lattice) -> Result<Lattice> {
        let a = self.index()?;
        let b = other.index()?;
        let k = a
            .lcm(&b)
            .to_i64()
            .ok_or(Error::Overflow("intersecting period lattices"))?;
        Ok(Lattice::scaled_integer(self.dim, k))
    }
}

/// Basis, canonical residues and index of a full-rank lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub basis: Vec<IntVector>,
    pub residues: Vec<IntVector>,
    pub index: u64,
}

pub fn hnf_fundamental_domain(lattice: &Lattice) -> Result<FundamentalDomain> {
    if !lattice.is_full_rank() {
        return Err(Error::RankDeficient);
    }
    Ok(FundamentalDomain {
        basis: lattice.basis().to_vec(),
        residues: lattice.residues()?,
        index: lattice.index_u64()?,
    })
}

/// For primitive `v` in `Z^2`, a `w` with `|det(v, w)| = 1`.
///
/// Among all such `w` the one of least L1 norm is returned; ties go to the
/// lexicographically largest candidate (so a nonnegative first coordinate wins).
pub fn unimodular_complement(v: &IntVector) -> Result<IntVector> {
    if v.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(Error::NonPrimitive(v.clone()));
    }
    let (a, b) = (v[0] as i128, v[1] as i128);
    // a*x + b*y = 1  =>  w = (-y, x) has det(v, w) = a*x + b*y = 1.
    let e = a.extended_gcd(&b);
    let (x, y) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    let w0 = [-y, x];

    let mut best: Option<(u128, [i128; 2])> = None;
    let mut consider = |w: [i128; 2]| {
        let norm = w[0].unsigned_abs() + w[1].unsigned_abs();
        let better = match best {
            None => true,
            Some((n, bw)) => norm < n || (norm == n && w > bw),
        };
        if better {
            best = Some((norm, w));
        }
    };
    let vv = [a, b];
    for i in 0..2 {
        if vv[i] == 0 {
            continue;
        }
        let k = Integer::div_floor(&-w0[i], &vv[i]);
        for kk in k - 1..=k + 2 {
            let w = [w0[0] + kk * a, w0[1] + kk * b];
            consider(w);
            consider([-w[0], -w[1]]);
        }
    }
    let (_, w) = best.expect("at least one candidate");
    let w = [
        i64::try_from(w[0]).map_err(|_| Error::Overflow("computing a complement"))?,
        i64::try_from(w[1]).map_err(|_| Error::Overflow("computing a complement"))?,
    ];
    Ok(IntVector(w.to_vec()))
}

/// `|u_1 v_2 - u_2 v_1|`; zero for collinear vectors.
pub fn parallelogram_area(u: &IntVector, v: &IntVector) -> Result<i128> {
    if u.dim() != 2 || v.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    Ok(det2(u, v).abs())
}

pub(crate) fn det2(u: &IntVector, v: &IntVector) -> i128 {
    u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128
}
