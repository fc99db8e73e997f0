//! Finite windows of `Z^d` and patterns (value assignments) on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::IntVector;

/// A finite subset of `Z^d`: an inclusive box, or an explicit set of points.
///
/// Boxes iterate with the first coordinate varying fastest; explicit sets
/// iterate in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Box { lo: IntVector, hi: IntVector },
    Set { dim: usize, points: Vec<IntVector> },
}

impl Window {
    pub fn new_box(lo: IntVector, hi: IntVector) -> Result<Self> {
        Error::check_dim(lo.dim(), hi.dim())?;
        if lo.dim() == 0 {
            return Err(Error::InvalidWindow("zero-dimensional box".into()));
        }
        if lo.0.iter().zip(&hi.0).any(|(a, b)| a > b) {
            return Err(Error::InvalidWindow(format!("lo {lo} exceeds hi {hi}")));
        }
        Ok(Window::Box { lo, hi })
    }

    /// The box `[0, sizes_0 - 1] x ... x [0, sizes_{d-1} - 1]`.
    pub fn rect(sizes: &[u64]) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidWindow("box side of length zero".into()));
        }
        Window::new_box(
            IntVector::zero(sizes.len()),
            IntVector(sizes.iter().map(|&s| s as i64 - 1).collect()),
        )
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        Window::new_box(IntVector(vec![lo; dim]), IntVector(vec![hi; dim]))
    }

    /// Sorted, deduplicated explicit set.
    pub fn set(dim: usize, mut points: Vec<IntVector>) -> Result<Self> {
        for p in &points {
            Error::check_dim(dim, p.dim())?;
        }
        points.sort();
        points.dedup();
        Ok(Window::Set { dim, points })
    }

    pub fn empty(dim: usize) -> Self {
        Window::Set {
            dim,
            points: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Box { lo, .. } => lo.dim(),
            Window::Set { dim, .. } => *dim,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Window::Box { lo, hi } => lo
                .0
                .iter()
                .zip(&hi.0)
                .map(|(a, b)| (b - a + 1) as usize)
                .product(),
            Window::Set { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Window::Box { .. })
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        match self {
            Window::Box { lo, hi } => {
                v.len() == lo.dim()
                    && v.iter()
                        .zip(lo.0.iter().zip(&hi.0))
                        .all(|(x, (a, b))| a <= x && x <= b)
            }
            Window::Set { points, .. } => points
                .binary_search_by(|p| p.0.as_slice().cmp(v))
                .is_ok(),
        }
    }

    /// Position of `v` in iteration order.
    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        match self {
            Window::Box { lo, hi } => {
                if !self.contains(v) {
                    return None;
                }
                let mut idx = 0usize;
                let mut stride = 1usize;
                for i in 0..lo.dim() {
                    idx += (v[i] - lo[i]) as usize * stride;
                    stride *= (hi[i] - lo[i] + 1) as usize;
                }
                Some(idx)
            }
            Window::Set { points, .. } => points
                .binary_search_by(|p| p.0.as_slice().cmp(v))
                .ok(),
        }
    }

    pub fn points(&self) -> Points<'_> {
        match self {
            Window::Box { lo, .. } => Points::Box {
                window: self,
                cur: lo.0.clone(),
                remaining: self.len(),
            },
            Window::Set { points, .. } => Points::Set(points.iter()),
        }
    }

    /// Inclusive bounding box, or `None` for an empty set.
    pub fn bounds(&self) -> Option<(IntVector, IntVector)> {
        match self {
            Window::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            Window::Set { dim, points } => {
                let first = points.first()?;
                let mut lo = first.clone();
                let mut hi = first.clone();
                for p in points {
                    for i in 0..*dim {
                        lo.0[i] = lo.0[i].min(p[i]);
                        hi.0[i] = hi.0[i].max(p[i]);
                    }
                }
                Some((lo, hi))
            }
        }
    }

    pub fn bounding_box(&self) -> Option<Window> {
        self.bounds().map(|(lo, hi)| Window::Box { lo, hi })
    }

    pub fn translate(&self, by: &IntVector) -> Window {
        match self {
            Window::Box { lo, hi } => Window::Box {
                lo: lo + by,
                hi: hi + by,
            },
            Window::Set { dim, points } => Window::Set {
                dim: *dim,
                points: points.iter().map(|p| p + by).collect(),
            },
        }
    }

    /// Grows a box by `below` on the low side and `above` on the high side.
    pub fn expand(&self, below: &IntVector, above: &IntVector) -> Result<Window> {
        let (lo, hi) = self.bounds().ok_or(Error::EmptyShape)?;
        Window::new_box(&lo - below, &hi + above)
    }

    /// `self ∩ (self + v)`: the points `u` with `u - v` also in the window.
    pub fn shrink_by(&self, v: &IntVector) -> Window {
        match self {
            Window::Box { lo, hi } => {
                let mut nlo = lo.clone();
                let mut nhi = hi.clone();
                for i in 0..lo.dim() {
                    if v[i] > 0 {
                        nlo.0[i] += v[i];
                    } else {
                        nhi.0[i] += v[i];
                    }
                }
                if nlo.0.iter().zip(&nhi.0).any(|(a, b)| a > b) {
                    Window::empty(lo.dim())
                } else {
                    Window::Box { lo: nlo, hi: nhi }
                }
            }
            Window::Set { dim, points } => Window::Set {
                dim: *dim,
                points: points
                    .iter()
                    .filter(|p| self.contains(&(*p - v).0))
                    .cloned()
                    .collect(),
            },
        }
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        match (self, other) {
            (Window::Box { lo, hi }, Window::Box { .. }) => {
                other.contains(&lo.0) && other.contains(&hi.0)
            }
            _ => self.points().all(|p| other.contains(&p.0)),
        }
    }

    /// Side lengths of a box window.
    pub fn extents(&self) -> Option<Vec<u64>> {
        let (lo, hi) = self.bounds()?;
        Some(
            lo.0.iter()
                .zip(&hi.0)
                .map(|(a, b)| (b - a + 1) as u64)
                .collect(),
        )
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Box { lo, hi } => write!(f, "{lo}..{hi}"),
            Window::Set { points, .. } => {
                write!(f, "{{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

pub enum Points<'a> {
    Box {
        window: &'a Window,
        cur: Vec<i64>,
        remaining: usize,
    },
    Set(std::slice::Iter<'a, IntVector>),
}

impl Iterator for Points<'_> {
    type Item = IntVector;

    fn next(&mut self) -> Option<IntVector> {
        match self {
            Points::Set(it) => it.next().cloned(),
            Points::Box {
                window,
                cur,
                remaining,
            } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let out = IntVector(cur.clone());
                if let Window::Box { lo, hi } = window {
                    for i in 0..cur.len() {
                        cur[i] += 1;
                        if cur[i] <= hi[i] {
                            break;
                        }
                        cur[i] = lo[i];
                    }
                }
                Some(out)
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = match self {
            Points::Set(it) => it.len(),
            Points::Box { remaining, .. } => *remaining,
        };
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points<'_> {}

/// Values on a window, stored in the window's iteration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern<T = i64> {
    pub shape: Window,
    pub values: Vec<T>,
}

impl<T> Pattern<T> {
    pub fn new(shape: Window, values: Vec<T>) -> Self {
        assert_eq!(shape.len(), values.len(), "pattern must be total on its shape");
        Pattern { shape, values }
    }

    pub fn from_fn(shape: Window, mut f: impl FnMut(&IntVector) -> T) -> Self {
        let values = shape.points().map(|p| f(&p)).collect();
        Pattern { shape, values }
    }

    pub fn try_from_fn<E>(
        shape: Window,
        mut f: impl FnMut(&IntVector) -> std::result::Result<T, E>,
    ) -> std::result::Result<Self, E> {
        let values = shape
            .points()
            .map(|p| f(&p))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Pattern { shape, values })
    }

    pub fn get(&self, v: &[i64]) -> Option<&T> {
        self.shape.index_of(v).map(|i| &self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (IntVector, &T)> {
        self.shape.points().zip(self.values.iter())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Pattern<U> {
        Pattern {
            shape: self.shape.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Restriction to a sub-window.
    pub fn restrict(&self, sub: &Window) -> Option<Pattern<T>>
    where
        T: Clone,
    {
        let values = sub
            .points()
            .map(|p| self.get(&p.0).cloned())
            .collect::<Option<Vec<_>>>()?;
        Some(Pattern {
            shape: sub.clone(),
            values,
        })
    }
}

impl<T: PartialEq> Pattern<T> {
    /// All values equal to `value`? Vacuously true on an empty shape.
    pub fn is_constant(&self, value: &T) -> bool {
        self.values.iter().all(|v| v == value)
    }

    /// First position (in iteration order) whose value differs from `value`.
    pub fn first_mismatch(&self, value: &T) -> Option<(IntVector, &T)> {
        self.iter().find(|(_, v)| *v != value)
    }
}

/// Strides of a box, for fast linear indexing.
pub(crate) fn box_strides(lo: &IntVector, hi: &IntVector) -> Vec<usize> {
    let mut strides = Vec::with_capacity(lo.dim());
    let mut s = 1usize;
    for i in 0..lo.dim() {
        strides.push(s);
        s *= (hi[i] - lo[i] + 1) as usize;
    }
    strides
}

/// Linear offset of `v - lo` in a box with the given strides.
pub(crate) fn linear_offset(v: &[i64], lo: &IntVector, strides: &[usize]) -> isize {
    v.iter()
        .zip(&lo.0)
        .zip(strides)
        .map(|((x, l), s)| (x - l) as isize * *s as isize)
        .sum()
}
