//! `Spin(k)`, `Spin^c(k) = (Spin(k) × U(1)) / {±(1, 1)}`, the double cover
//! `λ: Spin(k) → SO(k)`, the determinant `[x, z] ↦ z²` and its derivative.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::u1::Imag;

/// Tolerance for `‖v‖ = 1` and for `x x^t = 1`.
pub const UNIT_TOL: f64 = 1e-10;
/// Non-vector mass of `x e_j x^t` above this is an error; below it is dropped.
pub const LAMBDA_TOL: f64 = 1e-8;
/// Orthogonality and determinant tolerance for [`SoMatrix`].
pub const SO_TOL: f64 = 1e-10;
/// Coefficients below this are treated as zero when picking a representative.
const REPR_EPS: f64 = 1e-12;

/// An even product of unit vectors.
#[derive(Clone, PartialEq)]
pub struct SpinElement {
    value: Multivector<f64>,
}

impl SpinElement {
    pub fn identity(dim: usize) -> Self {
        SpinElement {
            value: Multivector::one(dim),
        }
    }

    /// Checks evenness and `x x^t = 1`.
    pub fn new(value: Multivector<f64>) -> Result<Self> {
        let odd = value.parity_part(true).norm();
        if odd > UNIT_TOL {
            return Err(Error::InvalidElement(format!("odd part has norm {odd:e}")));
        }
        let dim = value.dim();
        let defect = (&value * &value.transpose()).max_abs_diff(&Multivector::one(dim));
        if defect > UNIT_TOL.max(1e-9) {
            return Err(Error::InvalidElement(format!(
                "x·x^t differs from 1 by {defect:e}"
            )));
        }
        Ok(SpinElement { value })
    }

    /// `cos φ + sin φ · e_i e_j`, the rotor written `x_φ` for the plane `(i, j)`.
    pub fn planar(dim: usize, i: usize, j: usize, angle: f64) -> Result<Self> {
        let b = BladeIndex::from_generators(&[i, j], dim)?;
        // e_i e_j with i > j is -e_j e_i
        let sign = if i < j { 1.0 } else { -1.0 };
        let mut value = Multivector::scalar(dim, angle.cos());
        value.set_coeff(b, sign * angle.sin())?;
        Ok(SpinElement { value })
    }

    pub fn value(&self) -> &Multivector<f64> {
        &self.value
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(SpinElement {
            value: self.value.mul(&other.value)?,
        })
    }

    pub fn neg(&self) -> Self {
        SpinElement {
            value: -&self.value,
        }
    }

    pub fn inverse(&self) -> Self {
        SpinElement {
            value: self.value.transpose(),
        }
    }
}

impl fmt::Debug for SpinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spin({:?})", self.value)
    }
}

/// Product `v_1 v_2 ⋯ v_l` of an even number of unit vectors in ℝ^k.
pub fn spin_from_vectors(dim: usize, vectors: &[Vec<f64>]) -> Result<SpinElement> {
    if !vectors.len().is_multiple_of(2) {
        return Err(Error::OddLength(vectors.len()));
    }
    let mut acc = Multivector::one(dim);
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.len(),
            });
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { index, norm });
        }
        acc = acc.mul(&Multivector::from_vector(v))?;
    }
    Ok(SpinElement { value: acc })
}

/// A matrix in `SO(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoMatrix(DMatrix<f64>);

impl SoMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let r = orthogonality_residual(&m);
        if r > SO_TOL {
            return Err(Error::InvalidElement(format!(
                "not orthogonal (residual {r:e})"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > SO_TOL.max(1e-9) {
            return Err(Error::InvalidElement(format!("determinant {det}")));
        }
        Ok(SoMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        SoMatrix(DMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn max_abs_diff(&self, other: &DMatrix<f64>) -> f64 {
        (&self.0 - other).amax()
    }
}

/// `max |MᵀM − I|` entrywise.
pub fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    (m.transpose() * m - DMatrix::<f64>::identity(n, n)).amax()
}

/// The double cover: column `j` of `λ(x)` is the vector `x e_j x^t`.
pub fn lambda(x: &SpinElement) -> Result<SoMatrix> {
    let dim = x.dim();
    let xt = x.value.transpose();
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let ej = Multivector::basis_vector(dim, j + 1)?;
        let image = &(&x.value * &ej) * &xt;
        let vector = image.grade_part(1);
        let stray = (&image - &vector).norm();
        if stray > LAMBDA_TOL {
            return Err(Error::InvalidElement(format!(
                "x e_{} x^t has non-vector mass {stray:e}",
                j + 1
            )));
        }
        for (i, c) in vector.vector_part().into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    SoMatrix::new(m)
}

/// A class `[x, z]` in `Spin^c(k)`.
///
/// The stored pair is normalized: the first non-negligible coefficient of the
/// spin part (in blade-mask order) is positive.
#[derive(Clone)]
pub struct SpinCElement {
    spin: SpinElement,
    phase: Complex64,
}

impl SpinCElement {
    pub fn new(spin: SpinElement, phase: Complex64) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidElement(format!(
                "phase {phase} is not unimodular"
            )));
        }
        Ok(Self::normalized(spin, phase))
    }

    pub fn identity(dim: usize) -> Self {
        SpinCElement {
            spin: SpinElement::identity(dim),
            phase: Complex64::new(1.0, 0.0),
        }
    }

    fn normalized(spin: SpinElement, phase: Complex64) -> Self {
        let leading = spin
            .value
            .coeffs()
            .iter()
            .copied()
            .find(|c| c.abs() > REPR_EPS)
            .unwrap_or(1.0);
        if leading < 0.0 {
            SpinCElement {
                spin: spin.neg(),
                phase: -phase,
            }
        } else {
            SpinCElement { spin, phase }
        }
    }

    pub fn spin(&self) -> &SpinElement {
        &self.spin
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// Equality of classes: `(x, z) = ±(x', z')` up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let same = self.spin.value.max_abs_diff(&other.spin.value) <= tol
            && (self.phase - other.phase).norm() <= tol;
        let flipped = self.spin.value.max_abs_diff(&(-&other.spin.value)) <= tol
            && (self.phase + other.phase).norm() <= tol;
        same || flipped
    }
}

impl fmt::Debug for SpinCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {}]", self.spin.value, self.phase)
    }
}

/// `λ^c[x, z] = λ(x)`.
pub fn lambda_c(g: &SpinCElement) -> Result<SoMatrix> {
    lambda(&g.spin)
}

/// `det[x, z] = z²`.
pub fn det_map(g: &SpinCElement) -> Complex64 {
    g.phase * g.phase
}

pub fn spinc_mul(g: &SpinCElement, h: &SpinCElement) -> Result<SpinCElement> {
    let spin = g.spin.mul(&h.spin)?;
    Ok(SpinCElement::normalized(spin, g.phase * h.phase))
}

/// Image of `(g, h)` under `Spin^c(m) × Spin^c(n) → Spin^c(m + n)`; the
/// generators of the second factor are renumbered `e_i ↦ e_{m+i}`.
pub fn embed_product(g: &SpinCElement, h: &SpinCElement) -> Result<SpinCElement> {
    let (m, n) = (g.dim(), h.dim());
    let left = SpinElement {
        value: g.spin.value.shifted(0, m + n)?,
    };
    let right = SpinElement {
        value: h.spin.value.shifted(m, m + n)?,
    };
    Ok(SpinCElement::normalized(
        left.mul(&right)?,
        g.phase * h.phase,
    ))
}

/// An element `(ζ, b)` of `𝔰𝔭𝔦𝔫^c(k) = 𝔰𝔭𝔦𝔫(k) ⊕ 𝔲(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinCAlgebraElement {
    bivector: Multivector<f64>,
    u1: Imag,
}

impl SpinCAlgebraElement {
    pub fn new(bivector: Multivector<f64>, u1: Imag) -> Result<Self> {
        let stray = (&bivector - &bivector.grade_part(2)).norm();
        if stray > UNIT_TOL {
            return Err(Error::InvalidElement(format!(
                "bivector has non-grade-2 mass {stray:e}"
            )));
        }
        Ok(SpinCAlgebraElement { bivector, u1 })
    }

    pub fn zero(dim: usize) -> Self {
        SpinCAlgebraElement {
            bivector: Multivector::zero(dim),
            u1: Imag::ZERO,
        }
    }

    /// `c · e_i e_j + i b`.
    pub fn planar(dim: usize, i: usize, j: usize, c: f64, u1: Imag) -> Result<Self> {
        let blade = BladeIndex::from_generators(&[i, j], dim)?;
        let sign = if i < j { 1.0 } else { -1.0 };
        Ok(SpinCAlgebraElement {
            bivector: Multivector::blade(dim, blade, sign * c)?,
            u1,
        })
    }

    pub fn bivector(&self) -> &Multivector<f64> {
        &self.bivector
    }

    pub fn u1(&self) -> Imag {
        self.u1
    }

    pub fn dim(&self) -> usize {
        self.bivector.dim()
    }
}

/// `det_*(ζ, z) = 2z`; half of it is the projection onto `𝔲(1)`.
pub fn det_star(eta: &SpinCAlgebraElement) -> Imag {
    eta.u1 * 2.0
}

/// `exp(t η)` for a simple bivector part (one that squares to a negative
/// scalar, which covers every single coordinate plane).
pub fn spin_exp(eta: &SpinCAlgebraElement, t: f64) -> Result<SpinCElement> {
    let dim = eta.dim();
    let b = &eta.bivector;
    let norm = b.norm();
    let phase = Complex64::from_polar(1.0, t * eta.u1.0);
    if norm < REPR_EPS {
        return SpinCElement::new(SpinElement::identity(dim), phase);
    }
    let square = b * b;
    let scalar = *square.coeff(BladeIndex::UNIT);
    let rest = (&square - &Multivector::scalar(dim, scalar)).norm();
    if rest > 1e-9 * norm * norm || (scalar + norm * norm).abs() > 1e-9 * norm * norm {
        return Err(Error::Unsupported(
            "bivector is not simple; decompose it into commuting planes".into(),
        ));
    }
    let (s, c) = (t * norm).sin_cos();
    let value = &Multivector::scalar(dim, c) + &b.scale(s / norm);
    SpinCElement::new(SpinElement { value }, phase)
}
