//! Multivariate Laurent polynomials with exact rational coefficients, their
//! action on configurations, Newton polygons and line-polynomial factors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::lattice::{det2, unimodular_complement, IntVector};
use crate::window::{Pattern, Window};

/// Finite sum `sum a_v X^v` with `v ∈ Z^d` and rational `a_v != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<IntVector, BigRational>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Graded lexicographic comparison of exponents.
pub fn grlex_cmp(a: &IntVector, b: &IntVector) -> Ordering {
    let da: i128 = a.0.iter().map(|&x| x as i128).sum();
    let db: i128 = b.0.iter().map(|&x| x as i128).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        LaurentPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(IntVector::zero(dim), BigRational::one())
    }

    pub fn monomial(exponent: IntVector, coefficient: BigRational) -> Self {
        let dim = exponent.dim();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponent, coefficient);
        }
        LaurentPolynomial { dim, terms }
    }

    /// `X^v - 1`.
    pub fn difference(v: &IntVector) -> Self {
        let mut p = Self::monomial(v.clone(), BigRational::one());
        p.add_term(IntVector::zero(v.dim()), -BigRational::one());
        p
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (IntVector, BigRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            Error::check_dim(dim, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn from_int_terms(dim: usize, terms: impl IntoIterator<Item = (IntVector, i64)>) -> Result<Self> {
        Self::from_terms(dim, terms.into_iter().map(|(e, c)| (e, rat(c))))
    }

    pub(crate) fn add_term(&mut self, e: IntVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.is_zero() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &IntVector) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<IntVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Integer coefficients, or `NonIntegerCoefficients`.
    pub fn integer_terms(&self) -> Result<Vec<(IntVector, BigInt)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                if c.is_integer() {
                    Ok((e.clone(), c.to_integer()))
                } else {
                    Err(Error::NonIntegerCoefficients)
                }
            })
            .collect()
    }

    /// A line polynomial: at least two support points, all collinear.
    pub fn is_line(&self) -> bool {
        self.line_direction().is_some()
    }

    /// Primitive direction (canonical sign) of a line polynomial.
    pub fn line_direction(&self) -> Option<IntVector> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut dir: Option<IntVector> = None;
        for e in it {
            let d = (e - first).primitive_part().canonical_sign();
            match &dir {
                None => dir = Some(d),
                Some(d0) if *d0 == d => {}
                Some(_) => return None,
            }
        }
        dir
    }

    pub fn min_exponents(&self) -> Option<IntVector> {
        let mut it = self.terms.keys();
        let mut lo = it.next()?.clone();
        for e in it {
            for i in 0..self.dim {
                lo.0[i] = lo.0[i].min(e[i]);
            }
        }
        Some(lo)
    }

    pub fn max_exponents(&self) -> Option<IntVector> {
        let mut it = self.terms.keys();
        let mut hi = it.next()?.clone();
        for e in it {
            for i in 0..self.dim {
                hi.0[i] = hi.0[i].max(e[i]);
            }
        }
        Some(hi)
    }

    /// Componentwise extents `max - min` of the support.
    pub fn bbox(&self) -> Result<IntVector> {
        let lo = self.min_exponents().ok_or(Error::ZeroPolynomial)?;
        let hi = self.max_exponents().expect("nonzero");
        Ok(&hi - &lo)
    }

    /// Multiplies by `X^by`.
    pub fn shift(&self, by: &IntVector) -> Self {
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// `f(X^n)`.
    pub fn substitute_power(&self, n: u64) -> Self {
        let n = i64::try_from(n).expect("power fits i64");
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.scale(n), c.clone())).collect(),
        }
    }

    /// Splits off `X^m` with `m` the componentwise minimum exponent.
    pub fn strip_monomial(&self) -> (IntVector, Self) {
        match self.min_exponents() {
            None => (IntVector::zero(self.dim), self.clone()),
            Some(m) => (m.clone(), self.shift(&-&m)),
        }
    }

    pub fn leading_term(&self) -> Option<(&IntVector, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    /// Monomial-free, integer coefficients with content 1, positive grlex-leading
    /// coefficient. Zero stays zero.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (_, p) = self.strip_monomial();
        let den = p
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = p
            .terms
            .values()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut factor = BigRational::new(den, g);
        let lead = p.leading_term().expect("nonzero").1;
        if lead.is_negative() {
            factor = -factor;
        }
        p.scale(&factor)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.dim);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients reduced into `[0, m)`; requires integer coefficients.
    pub fn reduce_mod(&self, m: u64) -> Result<Self> {
        let m = BigInt::from(m);
        let mut out = Self::zero(self.dim);
        for (e, c) in self.integer_terms()? {
            out.add_term(e, BigRational::from_integer(c.mod_floor(&m)));
        }
        Ok(out)
    }

    /// `self^e mod m`, reducing after every product.
    pub fn pow_mod(&self, e: u32, m: u64) -> Result<Self> {
        let mut result = Self::one(self.dim).reduce_mod(m)?;
        let mut base = self.reduce_mod(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).reduce_mod(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).reduce_mod(m)?;
            }
        }
        Ok(result)
    }

    /// Exact quotient `self / g`, if `g` divides `self` in the Laurent ring.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        assert_eq!(self.dim, g.dim, "dimension mismatch");
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.dim));
        }
        let (glead_e, glead_c) = g.terms.iter().next_back().expect("nonzero");
        let qlo = &self.min_exponents()? - &g.min_exponents()?;
        let qhi = &self.max_exponents()? - &g.max_exponents()?;
        if qlo.0.iter().zip(&qhi.0).any(|(a, b)| a > b) {
            return None;
        }
        let mut r = self.clone();
        let mut q = Self::zero(self.dim);
        while let Some((re, rc)) = r.terms.iter().next_back() {
            let e = re - glead_e;
            if e.0.iter().zip(qlo.0.iter().zip(&qhi.0)).any(|(x, (a, b))| x < a || x > b) {
                return None;
            }
            let c = rc / glead_c;
            for (ge, gc) in &g.terms {
                r.add_term(&e + ge, -(&c * gc));
            }
            q.add_term(e, c);
        }
        Some(q)
    }

    fn int_coeffs_i64(&self) -> Option<Vec<(&IntVector, i64)>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                if c.is_integer() {
                    c.to_integer().to_i64().map(|x| (e, x))
                } else {
                    None
                }
            })
            .collect()
    }

    fn mul_dense(&self, other: &Self) -> Option<Self> {
        const DENSE_LIMIT: u128 = 1 << 22;
        let a = self.int_coeffs_i64()?;
        let b = other.int_coeffs_i64()?;
        let lo = &self.min_exponents()? + &other.min_exponents()?;
        let hi = &self.max_exponents()? + &other.max_exponents()?;
        let mut volume: u128 = 1;
        for i in 0..self.dim {
            volume = volume.checked_mul((hi[i] - lo[i] + 1) as u128)?;
        }
        if volume > DENSE_LIMIT {
            return None;
        }
        let amax = a.iter().map(|(_, x)| x.unsigned_abs() as u128).max()?;
        let bmax = b.iter().map(|(_, x)| x.unsigned_abs() as u128).max()?;
        let n = a.len().min(b.len()) as u128;
        if amax.checked_mul(bmax)?.checked_mul(n)? >= (1u128 << 126) {
            return None;
        }
        let strides = crate::window::box_strides(&lo, &hi);
        let zero = IntVector::zero(self.dim);
        let index = |e: &IntVector, base: &IntVector| {
            crate::window::linear_offset(&(e - base).0, &zero, &strides) as usize
        };
        let alo = self.min_exponents()?;
        let blo = other.min_exponents()?;
        let mut acc = vec![0i128; volume as usize];
        let a_idx: Vec<(usize, i64)> = a.iter().map(|(e, x)| (index(e, &alo), *x)).collect();
        let b_idx: Vec<(usize, i64)> = b.iter().map(|(e, x)| (index(e, &blo), *x)).collect();
        for &(ia, xa) in &a_idx {
            for &(ib, xb) in &b_idx {
                acc[ia + ib] += xa as i128 * xb as i128;
            }
        }
        let window = Window::Box { lo, hi };
        let mut out = Self::zero(self.dim);
        for (p, v) in window.points().zip(acc) {
            if v != 0 {
                out.terms
                    .insert(p, BigRational::from_integer(BigInt::from(v)));
            }
        }
        Some(out)
    }

    fn mul_sparse(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

pub fn multiply(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    Error::check_dim(f.dim, g.dim)?;
    Ok(f * g)
}

pub fn add(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    Error::check_dim(f.dim, g.dim)?;
    Ok(f + g)
}

pub fn substitute_power(f: &LaurentPolynomial, n: u64) -> Result<LaurentPolynomial> {
    if n == 0 {
        return Err(Error::Unsupported("power substitution needs n >= 1"));
    }
    Ok(f.substitute_power(n))
}

/// Componentwise extents of the support of `f`.
pub fn bbox(f: &LaurentPolynomial) -> Result<IntVector> {
    f.bbox()
}

/// `Box(v) = (|v_1|, ..., |v_d|)`.
pub fn vector_box(v: &IntVector) -> IntVector {
    v.abs_box()
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        if self.is_zero() || rhs.is_zero() {
            return LaurentPolynomial::zero(self.dim);
        }
        self.mul_dense(rhs).unwrap_or_else(|| self.mul_sparse(rhs))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Terms in decreasing grlex order, in the CLI polynomial syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "X^{e}")?;
            } else {
                write!(f, "{mag}*X^{e}")?;
            }
        }
        Ok(())
    }
}

/// Result of applying a polynomial to a configuration: scaled integer values
/// `(D f) c` on the window and the common denominator `D`.
pub(crate) struct ScaledApplication {
    pub values: Pattern<i128>,
    pub denominator: BigInt,
}

pub(crate) fn apply_scaled(
    f: &LaurentPolynomial,
    c: &Configuration,
    window: &Window,
) -> Result<ScaledApplication> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Error::check_dim(c.dim(), f.dim)?;
    Error::check_dim(c.dim(), window.dim())?;
    let den = f.terms.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let coeffs: Vec<(IntVector, i128)> = f
        .terms
        .iter()
        .map(|(e, x)| {
            (x * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .map(|k| (e.clone(), k))
                .ok_or(Error::Overflow("scaling polynomial coefficients"))
        })
        .collect::<Result<_>>()?;
    if window.is_empty() {
        return Ok(ScaledApplication {
            values: Pattern::new(window.clone(), Vec::new()),
            denominator: den,
        });
    }
    let (lo, hi) = window.bounds().expect("nonempty");
    let emin = f.min_exponents().expect("nonzero");
    let emax = f.max_exponents().expect("nonzero");
    let grid = c.grid(&(&lo - &emax), &(&hi - &emin))?;
    let offsets: Vec<(isize, i128)> = coeffs
        .iter()
        .map(|(e, k)| {
            let off: isize = e
                .0
                .iter()
                .zip(&grid.strides)
                .map(|(x, s)| -(*x as isize) * *s as isize)
                .sum();
            (off, *k)
        })
        .collect();
    let values = Pattern::try_from_fn(window.clone(), |u| {
        let base = grid.offset(&u.0);
        let mut acc: i128 = 0;
        for &(off, k) in &offsets {
            let x = grid.values[(base + off) as usize] as i128;
            acc = k
                .checked_mul(x)
                .and_then(|kx| acc.checked_add(kx))
                .ok_or(Error::Overflow("applying a polynomial"))?;
        }
        Ok(acc)
    })?;
    Ok(ScaledApplication {
        values,
        denominator: den,
    })
}

/// `(fc)_u = sum_v a_v c_{u - v}` on `window`.
pub fn apply(
    f: &LaurentPolynomial,
    c: &Configuration,
    window: &Window,
) -> Result<Pattern<BigRational>> {
    let s = apply_scaled(f, c, window)?;
    let den = s.denominator;
    Ok(s
        .values
        .map(|&x| BigRational::new(BigInt::from(x), den.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annihilation {
    /// `fc = 0` everywhere (checked on a fundamental domain).
    Exact,
    /// `fc = 0` on every cell of the window.
    OnWindow,
    No {
        witness: IntVector,
        value: BigRational,
    },
}

impl Annihilation {
    pub fn holds(&self) -> bool {
        !matches!(self, Annihilation::No { .. })
    }
}

impl fmt::Display for Annihilation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Annihilation::Exact => write!(f, "yes (exact)"),
            Annihilation::OnWindow => write!(f, "yes (on window)"),
            Annihilation::No { witness, value } => write!(f, "no (fc{witness} = {value})"),
        }
    }
}

/// Decides whether `fc` vanishes: exactly for evidently periodic `c`, otherwise on `window`.
pub fn annihilates(f: &LaurentPolynomial, c: &Configuration, window: &Window) -> Result<Annihilation> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (domain, exact) = match c.exact_domain() {
        Some(r) => (Window::set(c.dim(), r)?, true),
        None => (window.clone(), false),
    };
    let s = apply_scaled(f, c, &domain)?;
    if let Some((w, &v)) = s.values.iter().find(|(_, v)| **v != 0) {
        return Ok(Annihilation::No {
            witness: w,
            value: BigRational::new(BigInt::from(v), s.denominator),
        });
    }
    Ok(if exact {
        Annihilation::Exact
    } else {
        Annihilation::OnWindow
    })
}

/// Sorts canonical directions by angle in `(-90°, 90°]`.
fn direction_order(a: &IntVector, b: &IntVector) -> Ordering {
    0.cmp(&det2(a, b))
}

/// Primitive edge directions of the Newton polygon of `f`, deduplicated up to
/// sign, first nonzero coordinate positive, ordered by angle.
pub fn newton_polygon_directions(f: &LaurentPolynomial) -> Result<Vec<IntVector>> {
    if f.dim != 2 {
        return Err(Error::NotTwoDimensional);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<(i64, i64)> = f.terms.keys().map(|e| (e[0], e[1])).collect();
    let hull = convex_hull(&pts);
    let mut dirs: Vec<IntVector> = Vec::new();
    if hull.len() >= 2 {
        for i in 0..hull.len() {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            if a == b {
                continue;
            }
            let d = IntVector(vec![b.0 - a.0, b.1 - a.1])
                .primitive_part()
                .canonical_sign();
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
    }
    dirs.sort_by(direction_order);
    Ok(dirs)
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i128 {
        (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
    };
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Univariate polynomials over Q, coefficients from degree 0 upward.
mod upoly {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub type UPoly = Vec<BigRational>;

    pub fn trim(p: &mut UPoly) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }

    fn make_monic(p: &mut UPoly) {
        if let Some(lead) = p.last().cloned() {
            for c in p.iter_mut() {
                *c /= &lead;
            }
        }
    }

    pub fn rem(a: &UPoly, b: &UPoly) -> UPoly {
        let mut r = a.clone();
        trim(&mut r);
        let db = b.len() - 1;
        let lead = b.last().expect("nonzero divisor").clone();
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let q = r.last().expect("nonempty").clone() / &lead;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            trim(&mut r);
        }
        r
    }

    /// Monic gcd by Euclid's algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            make_monic(&mut y);
            let r = rem(&x, &y);
            x = y;
            y = r;
        }
        make_monic(&mut x);
        x
    }

}

/// Coordinates `(s, t)` of `e = s v + t w`, where `det(v, w) = ±1`.
fn unimodular_coords(e: &IntVector, v: &IntVector, w: &IntVector) -> (i64, i64) {
    let det = det2(v, w);
    let s = (e[0] as i128 * w[1] as i128 - e[1] as i128 * w[0] as i128) / det;
    let t = (v[0] as i128 * e[1] as i128 - v[1] as i128 * e[0] as i128) / det;
    (s as i64, t as i64)
}

/// The product of all line factors of `f` in direction `v`, canonically
/// normalized; `1` when there is none.
pub fn line_content(f: &LaurentPolynomial, v: &IntVector) -> Result<LaurentPolynomial> {
    if f.dim != 2 || v.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(Error::NonPrimitive(v.clone()));
    }
    let w = unimodular_complement(v)?;
    // f = sum_t T^t p_t(S) with S = X^v, T = X^w.
    let mut groups: BTreeMap<i64, BTreeMap<i64, BigRational>> = BTreeMap::new();
    for (e, c) in &f.terms {
        let (s, t) = unimodular_coords(e, v, &w);
        groups.entry(t).or_default().insert(s, c.clone());
    }
    let mut g: upoly::UPoly = Vec::new();
    for coeffs in groups.values() {
        let smin = *coeffs.keys().next().expect("nonempty group");
        let smax = *coeffs.keys().next_back().expect("nonempty group");
        let mut p: upoly::UPoly = vec![BigRational::zero(); (smax - smin + 1) as usize];
        for (s, c) in coeffs {
            p[(s - smin) as usize] = c.clone();
        }
        g = upoly::gcd(&g, &p);
        if g.len() == 1 {
            break;
        }
    }
    if g.len() <= 1 {
        return Ok(LaurentPolynomial::one(2));
    }
    let mut out = LaurentPolynomial::zero(2);
    for (k, c) in g.into_iter().enumerate() {
        out.add_term(v.scale(k as i64), c);
    }
    Ok(out.canonical())
}

/// `f = X^monomial * prod(factors) * remainder`, with one factor per direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFactorization {
    pub monomial: IntVector,
    pub factors: Vec<(IntVector, LaurentPolynomial)>,
    pub remainder: LaurentPolynomial,
}

impl LineFactorization {
    pub fn line_direction_count(&self) -> usize {
        self.factors.len()
    }

    pub fn directions(&self) -> Vec<IntVector> {
        self.factors.iter().map(|(d, _)| d.clone()).collect()
    }

    /// Multiplies everything back together.
    pub fn product(&self) -> LaurentPolynomial {
        let mut p = self.remainder.shift(&self.monomial);
        for (_, phi) in &self.factors {
            p = &p * phi;
        }
        p
    }
}

/// Extracts the line content of `f` in every Newton-polygon edge direction.
pub fn line_factorization(f: &LaurentPolynomial) -> Result<LineFactorization> {
    if f.dim != 2 {
        return Err(Error::NotTwoDimensional);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (monomial, mut rem) = f.strip_monomial();
    let mut factors = Vec::new();
    for v in newton_polygon_directions(f)? {
        let phi = line_content(&rem, &v)?;
        if phi.is_one() {
            continue;
        }
        rem = rem
            .div_exact(&phi)
            .expect("line content divides the polynomial");
        factors.push((v, phi));
    }
    Ok(LineFactorization {
        monomial,
        factors,
        remainder: rem,
    })
}
