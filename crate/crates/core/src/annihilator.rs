//! Finding annihilating polynomials: the nullspace construction on sampled
//! patterns, power expansion, radical witnesses and a bounded search for
//! products of difference operators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::config::{distinct_patterns, Configuration};
use crate::error::{Error, Result};
use crate::laurent::{annihilates, apply, apply_scaled, Annihilation, LaurentPolynomial};
use crate::lattice::IntVector;
use crate::linalg::{primitive_integer_vector, Echelon};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorReport {
    /// `gc` is the constant configuration `constant`.
    pub g: LaurentPolynomial,
    pub constant: BigRational,
    /// `(X^{e_1} - 1) g`.
    pub f: LaurentPolynomial,
    pub shape: Window,
    pub sample: Window,
    pub verified_on: Window,
    pub distinct_patterns: usize,
}

/// Looks for `g = sum a_i X^{-u_i}` over `shape = {u_i}` with `gc` constant on
/// `sample`, then certifies `f = (X^{e_1} - 1) g` on `verify`.
///
/// `Ok(None)` means the augmented pattern vectors have full rank, i.e. more
/// than `|shape|` patterns occur in the sample.
pub fn find_annihilator(
    c: &Configuration,
    shape: &Window,
    sample: &Window,
    verify: &Window,
) -> Result<Option<AnnihilatorReport>> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    Error::check_dim(c.dim(), shape.dim())?;
    Error::check_dim(c.dim(), sample.dim())?;
    Error::check_dim(c.dim(), verify.dim())?;
    let n = shape.len();
    let patterns = distinct_patterns(c, shape, sample)?;
    let mut ech = Echelon::new(n + 1);
    for p in &patterns {
        let row: Vec<BigRational> = p
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .chain(std::iter::once(BigRational::one()))
            .collect();
        ech.insert_dense(&row, BigRational::zero());
        if ech.rank() == n + 1 {
            break;
        }
    }
    let kernel = ech.kernel();
    assert!(
        patterns.len() > n || !kernel.is_empty(),
        "at most |shape| distinct rows leave a nontrivial kernel"
    );
    let Some(first) = kernel.first() else {
        return Ok(None);
    };
    let a = primitive_integer_vector(first);
    let dim = c.dim();
    let mut g = LaurentPolynomial::zero(dim);
    for (u, ai) in shape.points().zip(&a) {
        g.add_term(-&u, BigRational::from_integer(ai.clone()));
    }
    let constant = BigRational::from_integer(-a[n].clone());
    debug_assert!(!g.is_zero());
    let f = &LaurentPolynomial::difference(&IntVector::unit(dim, 0)) * &g;

    let gc = apply(&g, c, verify)?;
    if let Some((w, _)) = gc.first_mismatch(&constant) {
        return Err(Error::VerificationFailed { witness: w });
    }
    if let Annihilation::No { witness, .. } = annihilates(&f, c, verify)? {
        return Err(Error::VerificationFailed { witness });
    }
    Ok(Some(AnnihilatorReport {
        g,
        constant,
        f,
        shape: shape.clone(),
        sample: sample.clone(),
        verified_on: verify.clone(),
        distinct_patterns: patterns.len(),
    }))
}

/// `s = c_max * sum |a_v|` and `r = s!`.
pub fn expansion_bound(f: &LaurentPolynomial, c_max: u64) -> Result<(u64, BigInt)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut sum = BigInt::zero();
    for (_, a) in f.integer_terms()? {
        sum += a.abs();
    }
    let s = (sum * c_max)
        .to_u64()
        .ok_or(Error::Overflow("computing the expansion bound"))?;
    if s > 1 << 16 {
        return Err(Error::Overflow("computing s! for the expansion bound"));
    }
    let r = (2..=s).fold(BigInt::one(), |acc, k| acc * k);
    Ok((s, r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModCheck {
    Holds,
    Fails { witness: IntVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCheck {
    pub p: u64,
    /// `p > s`, so the power-expansion bound applies.
    pub above_bound: bool,
    /// Full annihilation check of `f(X^p)`, only when `above_bound`.
    pub exact: Option<Annihilation>,
    /// `f(X^p) c ≡ 0 (mod p)` on the window.
    pub mod_p: ModCheck,
}

/// `f(X^p) c ≡ 0 (mod p)` on `window`, for integer `f`.
pub fn frobenius_mod_check(
    f: &LaurentPolynomial,
    c: &Configuration,
    p: u64,
    window: &Window,
) -> Result<ModCheck> {
    if !f.is_integral() {
        return Err(Error::NonIntegerCoefficients);
    }
    let fp = f.substitute_power(p);
    let s = apply_scaled(&fp, c, window)?;
    let m = p as i128;
    let bad = s.values.iter().find(|(_, v)| *v % m != 0).map(|(w, _)| w);
    Ok(match bad {
        Some(witness) => ModCheck::Fails { witness },
        None => ModCheck::Holds,
    })
}

/// Checks the power-expansion claim for each prime, after confirming `f`
/// annihilates `c` on `window`. `c_max` is taken over `window`.
pub fn verify_expansion(
    f: &LaurentPolynomial,
    c: &Configuration,
    primes: &[u64],
    window: &Window,
) -> Result<Vec<ExpansionCheck>> {
    if let Annihilation::No { witness, .. } = annihilates(f, c, window)? {
        return Err(Error::NotAnnihilated { witness });
    }
    let c_max = c
        .materialize(window)?
        .values
        .iter()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0);
    let mut sum = BigInt::zero();
    for (_, a) in f.integer_terms()? {
        sum += a.abs();
    }
    let s = sum * c_max;
    primes
        .iter()
        .map(|&p| {
            let above_bound = BigInt::from(p) > s;
            let exact = if above_bound {
                Some(annihilates(&f.substitute_power(p), c, window)?)
            } else {
                None
            };
            Ok(ExpansionCheck {
                p,
                above_bound,
                exact,
                mod_p: frobenius_mod_check(f, c, p, window)?,
            })
        })
        .collect()
}

/// `x_1 ... x_d * prod_{v != v0} (X^{rv} - X^{r v0})`, together with the
/// equivalent form `sign * X^monomial * prod (X^{w_i} - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalWitness {
    pub polynomial: LaurentPolynomial,
    pub vectors: Vec<IntVector>,
    pub monomial: IntVector,
    pub sign: i64,
}

impl RadicalWitness {
    pub fn difference_product(&self) -> LaurentPolynomial {
        difference_product(self.monomial.dim(), &self.vectors)
    }
}

/// `prod (X^{v_i} - 1)`.
pub fn difference_product(dim: usize, vectors: &[IntVector]) -> LaurentPolynomial {
    vectors.iter().fold(LaurentPolynomial::one(dim), |acc, v| {
        &acc * &LaurentPolynomial::difference(v)
    })
}

pub fn build_radical_witness(f: &LaurentPolynomial, r: u64, v0: &IntVector) -> Result<RadicalWitness> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Error::check_dim(f.dim(), v0.dim())?;
    if r == 0 {
        return Err(Error::Unsupported("the radical witness needs r >= 1"));
    }
    if f.coefficient(v0).is_zero() {
        return Err(Error::V0NotInSupport(v0.clone()));
    }
    let r = i64::try_from(r).map_err(|_| Error::Overflow("scaling by r"))?;
    let d = f.dim();
    let rv0 = v0.scale(r);
    let ones = IntVector(vec![1; d]);
    let mut polynomial = LaurentPolynomial::monomial(ones.clone(), BigRational::one());
    let mut monomial = ones;
    let mut sign = 1;
    let mut vectors = Vec::new();
    for v in f.support() {
        if &v == v0 {
            continue;
        }
        let rv = v.scale(r);
        let mut factor = LaurentPolynomial::monomial(rv.clone(), BigRational::one());
        factor.add_term(rv0.clone(), -BigRational::one());
        polynomial = &polynomial * &factor;
        monomial = &monomial + &rv0;
        let w = &rv - &rv0;
        let canon = w.canonical_sign();
        if canon != w {
            monomial = &monomial + &w;
            sign = -sign;
        }
        vectors.push(canon);
    }
    Ok(RadicalWitness {
        polynomial,
        vectors,
        monomial,
        sign,
    })
}

/// Values on a box, stored with the first coordinate fastest.
#[derive(Clone)]
struct DenseBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    values: Vec<i128>,
}

impl DenseBox {
    fn strides(lo: &[i64], hi: &[i64]) -> Vec<usize> {
        let mut s = Vec::with_capacity(lo.len());
        let mut acc = 1usize;
        for (a, b) in lo.iter().zip(hi) {
            s.push(acc);
            acc *= (b - a + 1) as usize;
        }
        s
    }

    /// `u -> p(u - v) - p(u)` on `box ∩ (box + v)`; `None` if that is empty.
    fn difference(&self, v: &IntVector) -> Option<DenseBox> {
        let d = self.lo.len();
        let lo: Vec<i64> = (0..d).map(|i| self.lo[i].max(self.lo[i] + v[i])).collect();
        let hi: Vec<i64> = (0..d).map(|i| self.hi[i].min(self.hi[i] + v[i])).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return None;
        }
        let src = Self::strides(&self.lo, &self.hi);
        let shift: isize = (0..d).map(|i| v[i] as isize * src[i] as isize).sum();
        let n: usize = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).product();
        let mut values = Vec::with_capacity(n);
        let mut u = lo.clone();
        for _ in 0..n {
            let off: isize = (0..d)
                .map(|i| (u[i] - self.lo[i]) as isize * src[i] as isize)
                .sum();
            values.push(self.values[(off - shift) as usize] - self.values[off as usize]);
            for i in 0..d {
                if u[i] < hi[i] {
                    u[i] += 1;
                    break;
                }
                u[i] = lo[i];
            }
        }
        Some(DenseBox { lo, hi, values })
    }

    fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }
}

/// Nonzero vectors of `[-b, b]^d` with first nonzero coordinate positive,
/// ordered lexicographically by `(|x_i|, x_i < 0)`.
fn candidate_vectors(dim: usize, b: i64) -> Vec<IntVector> {
    let w = Window::cube(dim, -b, b).expect("b >= 0");
    let mut out: Vec<IntVector> = w
        .points()
        .filter(|v| !v.is_zero() && v.canonical_sign() == *v)
        .collect();
    out.sort_by_key(|v| {
        v.0.iter()
            .map(|&x| (x.unsigned_abs(), x < 0))
            .collect::<Vec<_>>()
    });
    out
}

fn search_from(
    p: &DenseBox,
    candidates: &[IntVector],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<IntVector>,
) -> bool {
    for (i, v) in candidates.iter().enumerate().skip(start) {
        let Some(q) = p.difference(v) else { continue };
        chosen.push(v.clone());
        if remaining == 1 {
            if q.is_zero() {
                return true;
            }
        } else if search_from(&q, candidates, i, remaining - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Shortest, then least in candidate order, nondecreasing list of canonical
/// vectors `v_i ∈ [-coord_bound, coord_bound]^d` with `prod (X^{v_i} - 1) c = 0`
/// on the part of `window` where it is defined.
pub fn search_difference_annihilator(
    c: &Configuration,
    max_factors: usize,
    coord_bound: i64,
    window: &Window,
) -> Result<Option<Vec<IntVector>>> {
    if max_factors == 0 || coord_bound < 1 {
        return Err(Error::Unsupported(
            "search needs max_factors >= 1 and coord_bound >= 1",
        ));
    }
    Error::check_dim(c.dim(), window.dim())?;
    let bbox = window.bounding_box().ok_or(Error::EmptySample)?;
    let extents = bbox.extents().expect("nonempty");
    let need = (max_factors as u64).saturating_mul(coord_bound as u64);
    if extents.iter().any(|&e| e <= need) {
        return Err(Error::WindowTooSmall);
    }
    let (lo, hi) = bbox.bounds().expect("nonempty");
    let values = c
        .materialize(&bbox)?
        .values
        .into_iter()
        .map(i128::from)
        .collect();
    let base = DenseBox {
        lo: lo.0,
        hi: hi.0,
        values,
    };
    let candidates = candidate_vectors(c.dim(), coord_bound);
    for depth in 1..=max_factors {
        let found = candidates
            .par_iter()
            .enumerate()
            .find_map_first(|(i, v)| {
                let q = base.difference(v)?;
                let mut chosen = vec![v.clone()];
                let ok = if depth == 1 {
                    q.is_zero()
                } else {
                    search_from(&q, &candidates, i, depth - 1, &mut chosen)
                };
                ok.then_some(chosen)
            });
        if let Some(vs) = found {
            let f = difference_product(c.dim(), &vs);
            let domain = vs.iter().fold(bbox.clone(), |w, v| w.shrink_by(v));
            if let Annihilation::No { witness, .. } = annihilates(&f, c, &domain)? {
                return Err(Error::VerificationFailed { witness });
            }
            return Ok(Some(vs));
        }
    }
    Ok(None)
}
