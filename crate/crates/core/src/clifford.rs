//! Clifford algebra `C_k` over ℝ^k with the negative-definite form, so every
//! unit vector squares to `-1`, together with its complexification.
//!
//! Elements are stored densely: one coefficient per basis blade, indexed by
//! a bitmask whose bit `i - 1` stands for the generator `e_i`. Blades are
//! always written with ascending generator indices. The coefficient type is
//! generic so the same arithmetic runs over `i64`, exact rationals, `f64`
//! and `Complex<f64>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, Zero};

use crate::error::{Error, Result};

/// Largest supported algebra dimension (dense storage holds `2^k` entries).
pub const MAX_DIM: usize = 12;

/// Coefficient ring for multivectors.
pub trait Scalar: Num + Neg<Output = Self> + Clone + fmt::Debug + Send + Sync {}

impl<T> Scalar for T where T: Num + Neg<Output = T> + Clone + fmt::Debug + Send + Sync {}

/// A canonical basis blade `e_{i1} e_{i2} ⋯ e_{il}` with `i1 < i2 < ⋯ < il`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BladeIndex(u32);

impl BladeIndex {
    /// The empty blade, i.e. the unit `1`.
    pub const UNIT: BladeIndex = BladeIndex(0);

    pub const fn from_mask(mask: u32) -> Self {
        BladeIndex(mask)
    }

    /// Builds the blade from 1-based generator indices. Order is irrelevant,
    /// but each generator may appear at most once.
    pub fn from_generators(generators: &[usize], dim: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in generators {
            if i == 0 || i > dim || dim > MAX_DIM {
                return Err(Error::Dimension { index: i, dim });
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::Unsupported(format!(
                    "generator e{i} repeated in a canonical blade"
                )));
            }
            mask |= bit;
        }
        Ok(BladeIndex(mask))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based generator indices in ascending order.
    pub fn generators(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    /// Highest generator index used, 0 for the unit blade.
    pub fn top(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    fn check(self, dim: usize) -> Result<()> {
        if self.top() > dim {
            return Err(Error::Dimension {
                index: self.top(),
                dim,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for g in self.generators() {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Sign of the product of two canonical blades, without bounds checks.
///
/// Every generator of `b` is moved left past the generators of `a` with a
/// larger index (one transposition each); every generator shared by both
/// blades then collapses as `e_i e_i = -1`.
fn product_sign(a: u32, b: u32) -> i8 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> (j + 1)).count_ones();
    }
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Product of two basis blades in `C_k`: `e_a e_b = sign · e_{a △ b}`.
pub fn blade_mul(a: BladeIndex, b: BladeIndex, dim: usize) -> Result<(i8, BladeIndex)> {
    if dim > MAX_DIM {
        return Err(Error::Dimension {
            index: dim,
            dim: MAX_DIM,
        });
    }
    a.check(dim)?;
    b.check(dim)?;
    Ok((product_sign(a.0, b.0), BladeIndex(a.0 ^ b.0)))
}

/// An element of `C_k` (or of `C_k ⊗ ℂ` when `S` is complex).
#[derive(Clone, PartialEq)]
pub struct Multivector<S> {
    dim: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "Clifford dimension {dim} exceeds {MAX_DIM}");
        Multivector {
            dim,
            coeffs: vec![S::zero(); 1 << dim],
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = value;
        m
    }

    pub fn blade(dim: usize, blade: BladeIndex, value: S) -> Result<Self> {
        blade.check(dim)?;
        let mut m = Self::zero(dim);
        m.coeffs[blade.0 as usize] = value;
        Ok(m)
    }

    /// Basis vector `e_i` (1-based).
    pub fn basis_vector(dim: usize, i: usize) -> Result<Self> {
        let b = BladeIndex::from_generators(&[i], dim)?;
        Self::blade(dim, b, S::one())
    }

    /// The grade-1 element `Σ v_i e_i`.
    pub fn from_vector(v: &[S]) -> Self {
        let mut m = Self::zero(v.len());
        for (i, c) in v.iter().enumerate() {
            m.coeffs[1 << i] = c.clone();
        }
        m
    }

    /// Builds a multivector from `(blade, coefficient)` terms; repeated blades add up.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BladeIndex, S)>,
    {
        let mut m = Self::zero(dim);
        for (b, c) in terms {
            b.check(dim)?;
            let slot = &mut m.coeffs[b.0 as usize];
            *slot = slot.clone() + c;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, blade: BladeIndex) -> &S {
        &self.coeffs[blade.0 as usize]
    }

    pub fn set_coeff(&mut self, blade: BladeIndex, value: S) -> Result<()> {
        blade.check(self.dim)?;
        self.coeffs[blade.0 as usize] = value;
        Ok(())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Nonzero terms in blade-mask order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, &S)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BladeIndex(i as u32), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Clifford product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let sign = product_sign(a.0, b.0);
                let idx = (a.0 ^ b.0) as usize;
                let term = ca.clone() * cb.clone();
                let slot = &mut out.coeffs[idx];
                *slot = if sign > 0 {
                    slot.clone() + term
                } else {
                    slot.clone() - term
                };
            }
        }
        Ok(out)
    }

    /// The anti-automorphism `x ↦ x^t` fixed by `(v_1⋯v_l)^t = v_l⋯v_1`;
    /// a grade-`l` blade picks up `(-1)^{l(l-1)/2}`.
    pub fn transpose(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let l = (i as u32).count_ones();
                if (l * l.saturating_sub(1) / 2).is_multiple_of(2) {
                    c.clone()
                } else {
                    -c.clone()
                }
            })
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    /// Keeps only the blades of grade `l`.
    pub fn grade_part(&self, l: usize) -> Self {
        self.filter_blades(|b| b.grade() == l)
    }

    /// Sum of the even-grade or odd-grade parts.
    pub fn parity_part(&self, odd: bool) -> Self {
        self.filter_blades(|b| (b.grade() % 2 == 1) == odd)
    }

    fn filter_blades(&self, keep: impl Fn(BladeIndex) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if keep(BladeIndex(i as u32)) {
                    c.clone()
                } else {
                    S::zero()
                }
            })
            .collect();
        Multivector {
            dim: self.dim,
            coeffs,
        }
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Re-embeds into a larger algebra, sending `e_i` to `e_{i + shift}`.
    pub fn shifted(&self, shift: usize, new_dim: usize) -> Result<Self> {
        if self.dim + shift > new_dim {
            return Err(Error::Dimension {
                index: self.dim + shift,
                dim: new_dim,
            });
        }
        let mut out = Self::zero(new_dim);
        for (b, c) in self.terms() {
            out.coeffs[(b.0 << shift) as usize] = c.clone();
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(
            self.dim, other.dim,
            "multivector dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Multivector<f64> {
    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Grade-1 coefficients `(v_1, …, v_k)`.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }
}

impl<S: Scalar> Add for &Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Sub for &Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Neg for &Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        self.map(|c| -c.clone())
    }
}

/// Clifford product; panics on a dimension mismatch (use [`Multivector::mul`]
/// for the fallible form).
impl<S: Scalar> Mul for &Multivector<S> {
    type Output = Multivector<S>;
    fn mul(self, rhs: Self) -> Multivector<S> {
        Multivector::mul(self, rhs).expect("multivector dimension mismatch")
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector<{}>[", self.dim)?;
        let mut first = true;
        for (b, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}·{b}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}
