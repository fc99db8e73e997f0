//! Difference and integration operators on patterns, and splitting a
//! configuration on a window into one-periodic components.

use std::collections::BTreeMap;
use std::ops::Sub;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::annihilator::difference_product;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::laurent::{annihilates, Annihilation};
use crate::lattice::IntVector;
use crate::linalg::{Echelon, Insert};
use crate::window::{Pattern, Window};

/// `u -> p(u - v) - p(u)` on `shape ∩ (shape + v)`.
pub fn difference<T>(p: &Pattern<T>, v: &IntVector) -> Result<Pattern<T>>
where
    T: Clone + Sub<Output = T>,
{
    Error::check_dim(p.shape.dim(), v.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let domain = p.shape.shrink_by(v);
    if domain.is_empty() {
        return Err(Error::EmptyResult);
    }
    Ok(Pattern::from_fn(domain, |u| {
        let back = p.get(&(u - v).0).expect("u - v lies in the shape").clone();
        back - p.get(&u.0).expect("u lies in the shape").clone()
    }))
}

/// An antiderivative of `d` along `v` on the same box: zero at the first
/// cell of every line in direction `v`, then `o_u = o_{u-v} - d_u`.
pub fn integrate<T>(d: &Pattern<T>, v: &IntVector) -> Result<Pattern<T>>
where
    T: Clone + Zero + Sub<Output = T>,
{
    Error::check_dim(d.shape.dim(), v.dim())?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !d.shape.is_box() {
        return Err(Error::InvalidWindow("integration needs a box".into()));
    }
    let shape = &d.shape;
    let mut out: Vec<Option<T>> = vec![None; shape.len()];
    for start in shape.points() {
        if shape.contains(&(&start - v).0) {
            continue;
        }
        let mut u = start;
        let mut prev = T::zero();
        let mut first = true;
        while let Some(i) = shape.index_of(&u.0) {
            let val = if first {
                first = false;
                T::zero()
            } else {
                prev.clone() - d.values[i].clone()
            };
            out[i] = Some(val.clone());
            prev = val;
            u = &u + v;
        }
    }
    Ok(Pattern::new(
        shape.clone(),
        out.into_iter()
            .map(|x| x.expect("every cell lies on a line"))
            .collect(),
    ))
}

/// Canonical representative of `u + Zv`.
pub(crate) fn line_id(u: &IntVector, v: &IntVector) -> IntVector {
    let k = v.0.iter().position(|&x| x != 0).expect("nonzero vector");
    let m = Integer::div_floor(&u[k], &v[k]);
    u - &v.scale(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowDecomposition {
    pub vectors: Vec<IntVector>,
    /// Component `i` is `vectors[i]`-periodic on `core`.
    pub components: Vec<Pattern<BigRational>>,
    pub core: Window,
    /// Components sum to `c` on `core` and each is periodic in its vector.
    pub residual_check: bool,
    /// Every component value is an integer.
    pub integral: bool,
}

impl WindowDecomposition {
    /// Largest absolute component value.
    pub fn max_abs(&self) -> BigRational {
        self.components
            .iter()
            .flat_map(|p| p.values.iter())
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

fn is_periodic_on(p: &Pattern<BigRational>, v: &IntVector) -> bool {
    p.iter().all(|(u, x)| match p.get(&(&u + v).0) {
        Some(y) => x == y,
        None => true,
    })
}

/// Writes `c` on `core` as a sum of components, the `i`-th constant along
/// lines in direction `vectors[i]`.
///
/// Unknowns are the component values on each line through `core`, ordered by
/// component then line representative; free unknowns are set to zero.
pub fn decompose(
    c: &Configuration,
    vectors: &[IntVector],
    core: &Window,
    halo: &Window,
) -> Result<WindowDecomposition> {
    let dim = c.dim();
    if vectors.is_empty() {
        return Err(Error::Unsupported("decomposition needs at least one vector"));
    }
    for v in vectors {
        Error::check_dim(dim, v.dim())?;
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
    }
    Error::check_dim(dim, core.dim())?;
    Error::check_dim(dim, halo.dim())?;
    let core_box = core.bounding_box().ok_or(Error::EmptySample)?;
    let reach = vectors
        .iter()
        .fold(IntVector::zero(dim), |acc, v| &acc + &v.abs_box());
    if !core_box.expand(&reach, &reach)?.is_subset_of(halo) {
        return Err(Error::HaloTooSmall);
    }
    let f = difference_product(dim, vectors);
    if let Annihilation::No { witness, .. } = annihilates(&f, c, halo)? {
        return Err(Error::NotAnnihilated { witness });
    }

    let mut columns: Vec<BTreeMap<IntVector, usize>> = Vec::with_capacity(vectors.len());
    let mut total = 0usize;
    for v in vectors {
        let mut ids: BTreeMap<IntVector, usize> =
            core.points().map(|u| (line_id(&u, v), 0)).collect();
        for slot in ids.values_mut() {
            *slot = total;
            total += 1;
        }
        columns.push(ids);
    }

    let values = c.materialize(core)?;
    let mut ech = Echelon::new(total);
    for (u, &cu) in values.iter() {
        let mut row = BTreeMap::new();
        for (v, ids) in vectors.iter().zip(&columns) {
            let j = ids[&line_id(&u, v)];
            *row.entry(j).or_insert_with(BigRational::zero) += BigRational::from_integer(1.into());
        }
        row.retain(|_, x: &mut BigRational| !x.is_zero());
        if ech.insert(row, BigRational::from_integer(cu.into())) == Insert::Inconsistent {
            return Err(Error::Infeasible { cell: u });
        }
    }
    let x = ech.solution();

    let components: Vec<Pattern<BigRational>> = vectors
        .iter()
        .zip(&columns)
        .map(|(v, ids)| Pattern::from_fn(core.clone(), |u| x[ids[&line_id(u, v)]].clone()))
        .collect();
    let sums_match = values.iter().enumerate().all(|(k, (_, &cu))| {
        let s: BigRational = components.iter().map(|p| p.values[k].clone()).sum();
        s == BigRational::from_integer(cu.into())
    });
    let periodic = components
        .iter()
        .zip(vectors)
        .all(|(p, v)| is_periodic_on(p, v));
    let integral = components
        .iter()
        .all(|p| p.values.iter().all(|x| x.is_integer()));
    Ok(WindowDecomposition {
        vectors: vectors.to_vec(),
        components,
        core: core.clone(),
        residual_check: sums_match && periodic,
        integral,
    })
}

/// `core` expanded on both sides by `sum box(v_i)`.
pub fn default_halo(core: &Window, vectors: &[IntVector]) -> Result<Window> {
    let dim = core.dim();
    let reach = vectors
        .iter()
        .fold(IntVector::zero(dim), |acc, v| &acc + &v.abs_box());
    core.bounding_box()
        .ok_or(Error::EmptySample)?
        .expand(&reach, &reach)
}
