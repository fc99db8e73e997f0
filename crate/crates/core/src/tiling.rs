//! Cluster tiles, lattice-periodic co-tilers and the prime-size periodicity check.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::annihilator::{frobenius_mod_check, ModCheck};
use crate::config::{Configuration, EXACT_DOMAIN_LIMIT};
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::lattice::{IntVector, Lattice};
use crate::window::Window;

/// A finite set of cells, translated so that the componentwise minimum is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterTile {
    cells: Vec<IntVector>,
}

impl ClusterTile {
    pub fn new(cells: Vec<IntVector>) -> Result<Self> {
        let first = cells.first().ok_or(Error::EmptyTile)?;
        let dim = first.dim();
        let mut lo = first.clone();
        for c in &cells {
            Error::check_dim(dim, c.dim())?;
            for i in 0..dim {
                lo.0[i] = lo.0[i].min(c[i]);
            }
        }
        let mut cells: Vec<IntVector> = cells.iter().map(|c| c - &lo).collect();
        cells.sort();
        cells.dedup();
        Ok(ClusterTile { cells })
    }

    pub fn cells(&self) -> &[IntVector] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.cells[0].dim()
    }

    /// `-D`, translated back to the canonical position.
    pub fn reflected(&self) -> ClusterTile {
        ClusterTile::new(self.cells.iter().map(|c| -c).collect()).expect("nonempty")
    }
}

impl fmt::Display for ClusterTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tile {{")?;
        for c in &self.cells {
            write!(f, " {c}")?;
        }
        write!(f, " }}")
    }
}

/// `C = residues + lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCoTiler {
    pub lattice: Lattice,
    pub residues: Vec<IntVector>,
}

impl PeriodicCoTiler {
    pub fn new(lattice: Lattice, residues: Vec<IntVector>) -> Result<Self> {
        if !lattice.is_full_rank() {
            return Err(Error::RankDeficient);
        }
        let mut seen = HashSet::new();
        for r in &residues {
            Error::check_dim(lattice.dim(), r.dim())?;
            if !seen.insert(lattice.reduce(&r.0)) {
                return Err(Error::InvalidConfiguration(format!(
                    "co-tiler residue {r} repeats a class"
                )));
            }
        }
        Ok(PeriodicCoTiler { lattice, residues })
    }

    /// The indicator configuration of `C`.
    pub fn configuration(&self) -> Configuration {
        Configuration::periodic(self.lattice.clone(), self.residues.iter().map(|r| (r.clone(), 1)))
            .expect("validated co-tiler")
    }
}

/// `sum_{v in D} X^v`.
pub fn tile_polynomial(d: &ClusterTile) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        d.dim(),
        d.cells.iter().map(|c| (c.clone(), BigRational::one())),
    )
    .expect("cells share the tile dimension")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CotilerCheck {
    Valid,
    Overlap { witness: IntVector },
    Gap { witness: IntVector },
}

impl fmt::Display for CotilerCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CotilerCheck::Valid => write!(f, "Valid"),
            CotilerCheck::Overlap { witness } => write!(f, "Overlap at {witness}"),
            CotilerCheck::Gap { witness } => write!(f, "Gap at {witness}"),
        }
    }
}

/// Decides `D ⊕ C = Z^d` on one fundamental domain of the co-tiler lattice.
pub fn verify_cotiler(d: &ClusterTile, c: &PeriodicCoTiler) -> Result<CotilerCheck> {
    let l = &c.lattice;
    if !l.is_full_rank() {
        return Err(Error::RankDeficient);
    }
    Error::check_dim(l.dim(), d.dim())?;
    let mut hit = HashSet::new();
    for r in &c.residues {
        for cell in &d.cells {
            let class = l.reduce(&(cell + r).0);
            if !hit.insert(class.clone()) {
                return Ok(CotilerCheck::Overlap { witness: class });
            }
        }
    }
    let index = l.index_u64()?;
    if hit.len() as u64 == index {
        return Ok(CotilerCheck::Valid);
    }
    if index > EXACT_DOMAIN_LIMIT {
        return Err(Error::Unsupported("co-tiler lattice index too large to enumerate"));
    }
    let witness = l
        .residues()?
        .into_iter()
        .find(|r| !hit.contains(r))
        .expect("fewer classes hit than the index");
    Ok(CotilerCheck::Gap { witness })
}

/// Column-HNF bases of every sublattice of `Z^d` with the given index,
/// ordered lexicographically by the row-major entries of the HNF matrix.
fn hnf_lattices(dim: usize, index: u64) -> Vec<Lattice> {
    let mut out: Vec<(Vec<i64>, Lattice)> = Vec::new();
    let mut diag = vec![0i64; dim];
    fn diagonals(rest: u64, i: usize, diag: &mut Vec<i64>, acc: &mut Vec<Vec<i64>>) {
        if i + 1 == diag.len() {
            diag[i] = rest as i64;
            acc.push(diag.clone());
            return;
        }
        for a in 1..=rest {
            if rest.is_multiple_of(a) {
                diag[i] = a as i64;
                diagonals(rest / a, i + 1, diag, acc);
            }
        }
    }
    let mut diags = Vec::new();
    diagonals(index, 0, &mut diag, &mut diags);
    for dg in diags {
        // Free entries h[i][j] for i < j, each in [0, h[i][i]).
        let slots: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .collect();
        let mut vals = vec![0i64; slots.len()];
        loop {
            let mut h = vec![vec![0i64; dim]; dim];
            for i in 0..dim {
                h[i][i] = dg[i];
            }
            for (k, &(i, j)) in slots.iter().enumerate() {
                h[i][j] = vals[k];
            }
            let columns: Vec<IntVector> = (0..dim)
                .map(|j| IntVector((0..dim).map(|i| h[i][j]).collect()))
                .collect();
            let key: Vec<i64> = h.iter().flatten().copied().collect();
            out.push((key, Lattice::new(dim, columns).expect("triangular with positive diagonal")));
            let mut k = 0;
            loop {
                if k == slots.len() {
                    break;
                }
                vals[k] += 1;
                if vals[k] < dg[slots[k].0] {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == slots.len() {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, l)| l).collect()
}

/// Exact cover of the classes of `Z^d / L` by translates `D + r`.
fn cover_classes(d: &ClusterTile, lattice: &Lattice) -> Option<Vec<IntVector>> {
    let classes = lattice.residues().ok()?;
    let pos: HashMap<IntVector, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let mut covered = vec![false; classes.len()];
    let mut chosen = Vec::new();

    fn go(
        d: &ClusterTile,
        lattice: &Lattice,
        classes: &[IntVector],
        pos: &HashMap<IntVector, usize>,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<IntVector>,
    ) -> bool {
        let Some(x) = covered.iter().position(|c| !c) else {
            return true;
        };
        for cell in &d.cells {
            let r = lattice.reduce(&(&classes[x] - cell).0);
            let idx: Vec<usize> = d
                .cells
                .iter()
                .map(|e| pos[&lattice.reduce(&(&r + e).0)])
                .collect();
            let distinct: HashSet<usize> = idx.iter().copied().collect();
            if distinct.len() != idx.len() || idx.iter().any(|&i| covered[i]) {
                continue;
            }
            for &i in &idx {
                covered[i] = true;
            }
            chosen.push(r);
            if go(d, lattice, classes, pos, covered, chosen) {
                return true;
            }
            chosen.pop();
            for &i in &idx {
                covered[i] = false;
            }
        }
        false
    }

    go(d, lattice, &classes, &pos, &mut covered, &mut chosen).then_some(chosen)
}

/// First lattice-periodic co-tiler with index `|D| k <= max_index`, in order
/// of increasing index, then HNF order.
pub fn search_periodic_cotiler(d: &ClusterTile, max_index: u64) -> Result<Option<PeriodicCoTiler>> {
    let dim = d.dim();
    if dim > 3 {
        return Err(Error::Unsupported("co-tiler search supports dimension <= 3"));
    }
    let size = d.len() as u64;
    let mut index = size;
    while index <= max_index {
        let candidates = hnf_lattices(dim, index);
        let found = candidates
            .par_iter()
            .find_map_first(|l| cover_classes(d, l).map(|r| (l.clone(), r)));
        if let Some((lattice, residues)) = found {
            let c = PeriodicCoTiler::new(lattice, residues)?;
            debug_assert_eq!(verify_cotiler(d, &c), Ok(CotilerCheck::Valid));
            return Ok(Some(c));
        }
        index += size;
    }
    Ok(None)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub p: usize,
    /// `p(v - u)` for cells `u < v` of the tile, and whether it is a period of `C`.
    pub periods: Vec<(IntVector, bool)>,
    /// `f(X^p) c ≡ 0 (mod p)` on the window.
    pub congruence: ModCheck,
}

impl PrimeCheck {
    pub fn all_verified(&self) -> bool {
        self.periods.iter().all(|(_, ok)| *ok) && self.congruence == ModCheck::Holds
    }
}

/// For a tile of prime size `p`, checks that every `p(v - u)` is a period of
/// the co-tiler, and the congruence `f(X^p) c ≡ 0 (mod p)` on `window`.
pub fn prime_periodicity_check(
    d: &ClusterTile,
    c: &PeriodicCoTiler,
    window: &Window,
) -> Result<PrimeCheck> {
    let p = d.len();
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Error::check_dim(c.lattice.dim(), d.dim())?;
    let classes: HashSet<IntVector> = c.residues.iter().map(|r| c.lattice.reduce(&r.0)).collect();
    let mut periods = Vec::new();
    for (i, u) in d.cells.iter().enumerate() {
        for v in &d.cells[i + 1..] {
            let w = (v - u).scale(p as i64);
            let shifted: HashSet<IntVector> = classes
                .iter()
                .map(|r| c.lattice.reduce(&(r + &w).0))
                .collect();
            periods.push((w, shifted == classes));
        }
    }
    let congruence = frobenius_mod_check(&tile_polynomial(d), &c.configuration(), p as u64, window)?;
    Ok(PrimeCheck {
        p,
        periods,
        congruence,
    })
}
