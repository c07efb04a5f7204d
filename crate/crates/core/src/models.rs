//! The explicit prequantizations: the plane `P_ℂ^ℓ`, the sphere family
//! `P_{k,n}` and `ℂPⁿ`, with moment maps and prequantizability tests.
//!
//! Plane and sphere models live on coordinate charts of their total spaces.
//!
//! | model      | coordinates                                   |
//! |------------|-----------------------------------------------|
//! | `P_ℂ^ℓ`    | `x, y` (z = x + iy), `a` (spin angle), `psi` (phase) |
//! | `P_{k,n}`  | `x1, y1, x2, y2` on S³, `s12, s13, s23` (𝔰𝔭𝔦𝔫(3)), `beta` (Spin^c(3) phase), `chi` (U(L) fiber) |
//!
//! Moment values use `Φ = −i · θ(∂/∂φ)`, so the plane has
//! `Φ = −(|z|² + ℓ/2)` and the sphere `Φ = (n/2)(|z|²−|w|²+1) + k + ½`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::clifford::{Multivector, MAX_DIM};
use crate::error::{Error, Result};
use crate::forms::{
    directional_derivative, kernel_basis, numeric_d, Chart, ChartOneForm, ChartTwoForm, VectorField,
};
use crate::spin::{SpinCAlgebraElement, SpinCElement, SpinElement};
use crate::u1::Imag;

/// Tolerance for `|z|² + |w|² = 1`.
pub const SPHERE_TOL: f64 = 1e-10;
/// Tolerance for unitarity and membership in `𝔰𝔲(n+1)`.
pub const MATRIX_TOL: f64 = 1e-10;
/// Step of the inner derivative of the `ℂPⁿ` local section.
const SECTION_STEP: f64 = 1e-3;

pub fn check_odd(ell: i64) -> Result<()> {
    if ell.rem_euclid(2) == 0 {
        return Err(Error::EvenParameter(ell));
    }
    Ok(())
}

/// Which model a prequantization lives on, with its two-form label.
#[derive(Clone, Debug, PartialEq)]
pub enum PrequantDescriptor {
    ComplexPlane {
        ell: i64,
    },
    /// Plane factor of the negative cut: two-form `i dz∧dz̄`.
    NegativePlane {
        ell: i64,
    },
    Sphere {
        k: i64,
        n: i64,
    },
    ProjectiveSpace {
        n: u32,
    },
    Product {
        left: Box<Self>,
        right: Box<Self>,
    },
    LevelSet {
        base: Box<Self>,
        alpha: f64,
    },
}

impl PrequantDescriptor {
    pub fn complex_plane(ell: i64) -> Result<Self> {
        check_odd(ell)?;
        Ok(PrequantDescriptor::ComplexPlane { ell })
    }

    pub fn negative_plane(ell: i64) -> Result<Self> {
        check_odd(ell)?;
        Ok(PrequantDescriptor::NegativePlane { ell })
    }

    pub fn sphere(k: i64, n: i64) -> Self {
        PrequantDescriptor::Sphere { k, n }
    }

    pub fn projective_space(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("ℂP^n needs n ≥ 1".into()));
        }
        Ok(PrequantDescriptor::ProjectiveSpace { n })
    }

    pub fn product(left: Self, right: Self) -> Self {
        PrequantDescriptor::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            PrequantDescriptor::ComplexPlane { .. } => "ComplexPlane",
            PrequantDescriptor::NegativePlane { .. } => "NegativePlane",
            PrequantDescriptor::Sphere { .. } => "Sphere",
            PrequantDescriptor::ProjectiveSpace { .. } => "ProjectiveSpace",
            PrequantDescriptor::Product { .. } => "Product",
            PrequantDescriptor::LevelSet { .. } => "LevelSet",
        }
    }

    pub fn two_form_label(&self) -> String {
        match self {
            PrequantDescriptor::ComplexPlane { .. } => "ω_ℂ = -i dz∧dz̄".into(),
            PrequantDescriptor::NegativePlane { .. } => "i dz∧dz̄".into(),
            PrequantDescriptor::Sphere { n, .. } => format!("ω_{n} = ({n}/2)A"),
            PrequantDescriptor::ProjectiveSpace { n } => format!("-({}/2)·2π·ω_FS", n + 1),
            PrequantDescriptor::Product { left, right } => {
                format!("{} ⊕ {}", left.two_form_label(), right.two_form_label())
            }
            PrequantDescriptor::LevelSet { base, .. } => {
                format!("({})|_Z", base.two_form_label())
            }
        }
    }

    fn params(&self) -> Value {
        match self {
            PrequantDescriptor::ComplexPlane { ell }
            | PrequantDescriptor::NegativePlane { ell } => {
                json!({ "ell": ell })
            }
            PrequantDescriptor::Sphere { k, n } => json!({ "k": k, "n": n }),
            PrequantDescriptor::ProjectiveSpace { n } => json!({ "n": n }),
            PrequantDescriptor::Product { left, right } => {
                json!({ "left": left.to_json(), "right": right.to_json() })
            }
            PrequantDescriptor::LevelSet { base, alpha } => {
                json!({ "base": base.to_json(), "alpha": alpha })
            }
        }
    }

    /// `{model, params, two_form_label}`.
    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model_name(),
            "params": self.params(),
            "two_form_label": self.two_form_label(),
        })
    }
}

impl Serialize for PrequantDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl fmt::Display for PrequantDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrequantDescriptor::ComplexPlane { ell } => write!(f, "P_C^{ell}"),
            PrequantDescriptor::NegativePlane { ell } => write!(f, "P_C^{ell}(-)"),
            PrequantDescriptor::Sphere { k, n } => write!(f, "P_{{{k},{n}}}"),
            PrequantDescriptor::ProjectiveSpace { n } => write!(f, "CP^{n}"),
            PrequantDescriptor::Product { left, right } => write!(f, "{left}×{right}"),
            PrequantDescriptor::LevelSet { base, alpha } => write!(f, "Z({base}, {alpha})"),
        }
    }
}

/// A point of `S³ ⊂ ℂ²` over `[z:w] ∈ S²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    z: Complex64,
    w: Complex64,
}

impl SpherePoint {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        let defect = (z.norm_sqr() + w.norm_sqr() - 1.0).abs();
        if defect > SPHERE_TOL {
            return Err(Error::InvalidPoint(format!(
                "|z|²+|w|² differs from 1 by {defect:e}"
            )));
        }
        Ok(SpherePoint { z, w })
    }

    /// The point with `|z|² − |w|² = h` and the given phases.
    pub fn from_height(h: f64, phase_z: f64, phase_w: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&h) {
            return Err(Error::InvalidPoint(format!("height {h} outside [-1, 1]")));
        }
        Ok(SpherePoint {
            z: Complex64::from_polar(((1.0 + h) / 2.0).sqrt(), phase_z),
            w: Complex64::from_polar(((1.0 - h) / 2.0).sqrt(), phase_w),
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    /// `|z|² − |w|²`.
    pub fn height(&self) -> f64 {
        self.z.norm_sqr() - self.w.norm_sqr()
    }

    /// `(x1, y1, x2, y2)`.
    pub fn coords(&self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    /// `(e^{it} z, e^{it} w)`, another point of the same Hopf fiber.
    pub fn rephased(&self, t: f64) -> SpherePoint {
        let u = Complex64::from_polar(1.0, t);
        SpherePoint {
            z: u * self.z,
            w: u * self.w,
        }
    }
}

/// A base point of a plane or sphere model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelPoint {
    Plane(Complex64),
    Sphere(SpherePoint),
}

/// A value of the moment map in `𝔲(1)* ≅ ℝ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentValue {
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type SamplerFn = dyn Fn(&mut ChaCha8Rng, f64, f64) -> Option<Vec<f64>> + Send + Sync;

/// A prequantization realized on a chart of its total space.
///
/// `moment` is the closed-form `Φ` as a function of chart coordinates and
/// `generator` is the fundamental field of the circle action.
#[derive(Clone)]
pub struct Prequant {
    pub(crate) descriptor: PrequantDescriptor,
    pub(crate) chart: Arc<Chart>,
    pub(crate) theta: ChartOneForm,
    pub(crate) omega: ChartTwoForm,
    pub(crate) generator: VectorField,
    pub(crate) moment: Arc<ScalarFn>,
    pub(crate) image: Interval,
    pub(crate) sampler: Arc<SamplerFn>,
    pub(crate) manifold_dim: usize,
    pub(crate) spin_coords: Vec<usize>,
    pub(crate) det_coord: Option<usize>,
    pub(crate) fiber_coords: Vec<usize>,
}

impl fmt::Debug for Prequant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prequant({}, {:?})", self.descriptor, self.chart)
    }
}

impl Prequant {
    pub fn from_descriptor(d: &PrequantDescriptor) -> Result<Prequant> {
        match d {
            PrequantDescriptor::ComplexPlane { ell } => plane(*ell, 1.0),
            PrequantDescriptor::NegativePlane { ell } => plane(*ell, -1.0),
            PrequantDescriptor::Sphere { k, n } => Ok(sphere(*k, *n)),
            PrequantDescriptor::Product { left, right } => {
                Ok(crate::cutting::product_prequant(left, right)?.into_prequant())
            }
            other => Err(Error::MissingConnection(other.to_string())),
        }
    }

    pub fn descriptor(&self) -> &PrequantDescriptor {
        &self.descriptor
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn theta(&self) -> &ChartOneForm {
        &self.theta
    }

    /// The symplectic form, pulled back to the total-space chart.
    pub fn omega(&self) -> &ChartTwoForm {
        &self.omega
    }

    pub fn generator(&self) -> &VectorField {
        &self.generator
    }

    pub fn moment(&self, p: &[f64]) -> f64 {
        (self.moment)(p)
    }

    pub fn moment_image(&self) -> Interval {
        self.image
    }

    /// Real dimension of the base manifold.
    pub fn manifold_dim(&self) -> usize {
        self.manifold_dim
    }

    /// Replaces the connection; used to probe the checks with wrong data.
    pub fn with_theta(mut self, theta: ChartOneForm) -> Result<Prequant> {
        self.theta = theta.on_chart(self.chart.clone())?;
        Ok(self)
    }

    /// A random chart point with `lo < Φ < hi`, if the model reaches that range.
    pub fn sample_in(&self, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Option<Vec<f64>> {
        (self.sampler)(rng, lo, hi)
    }

    pub fn samples(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.sample_in(&mut rng, f64::NEG_INFINITY, f64::INFINITY)
                    .expect("the full moment image is never empty")
            })
            .collect()
    }
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

/// `sign = 1` is `P_ℂ^ℓ` with `ω_ℂ = −i dz∧dz̄`, `sign = −1` its negative-cut
/// counterpart with `i dz∧dz̄`.
fn plane(ell: i64, sign: f64) -> Result<Prequant> {
    check_odd(ell)?;
    let half_ell = ell as f64 / 2.0;
    let (descriptor, name) = if sign > 0.0 {
        (
            PrequantDescriptor::ComplexPlane { ell },
            format!("P_C^{ell}"),
        )
    } else {
        (
            PrequantDescriptor::NegativePlane { ell },
            format!("P_C^{ell}(-)"),
        )
    };
    let chart = Arc::new(Chart::new(name, &["x", "y", "a", "psi"]));
    let theta = ChartOneForm::new(chart.clone(), move |p, v| {
        Imag(v[3] + sign * (p[0] * v[1] - p[1] * v[0]))
    });
    let omega = ChartTwoForm::constant(chart.clone(), &[(0, 1, -2.0 * sign)]);
    let generator = VectorField::new(chart.clone(), move |p| {
        vec![p[1], -p[0], -sign / 2.0, -half_ell]
    });
    let moment = Arc::new(move |p: &[f64]| -sign * (p[0] * p[0] + p[1] * p[1]) - half_ell);
    let image = if sign > 0.0 {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: -half_ell,
        }
    } else {
        Interval {
            lo: -half_ell,
            hi: f64::INFINITY,
        }
    };
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        // Φ = -sign·r² - ℓ/2
        let (r2_lo, r2_hi) = if sign > 0.0 {
            (-hi - half_ell, -lo - half_ell)
        } else {
            (lo + half_ell, hi + half_ell)
        };
        let a = r2_lo.max(0.0);
        let b = r2_hi.min(a + 4.0);
        if b <= a {
            return None;
        }
        let r = rng.random_range(a..b).sqrt();
        let t = angle(rng);
        Some(vec![r * t.cos(), r * t.sin(), angle(rng), angle(rng)])
    });
    Ok(Prequant {
        descriptor,
        chart,
        theta,
        omega,
        generator,
        moment,
        image,
        sampler,
        manifold_dim: 2,
        spin_coords: vec![2],
        det_coord: Some(3),
        fiber_coords: vec![2, 3],
    })
}

/// `θ̃_ℂ = i(dψ + x dy − y dx)` on `P_ℂ^ℓ`; the same for every odd `ℓ`.
pub fn theta_c(ell: i64) -> Result<ChartOneForm> {
    Ok(plane(ell, 1.0)?.theta)
}

/// `ż = −iz`, `ȧ = −½`, `ψ̇ = −ℓ/2`.
pub fn generator_field_c(ell: i64) -> Result<VectorField> {
    Ok(plane(ell, 1.0)?.generator)
}

/// `e^{iφ}·(z, [x_a, e^{iψ}]) = (e^{−iφ}z, [x_{a−φ/2}, e^{i(ψ−ℓφ/2)}])` in chart coordinates.
pub fn plane_action(ell: i64, phi: f64, p: &[f64]) -> Vec<f64> {
    let (s, c) = phi.sin_cos();
    vec![
        c * p[0] + s * p[1],
        -s * p[0] + c * p[1],
        p[2] - phi / 2.0,
        p[3] - ell as f64 * phi / 2.0,
    ]
}

/// Largest change of `θ̃_ℂ` under pullback by the circle action, over the
/// coordinate directions at each sample and each angle.
pub fn plane_invariance_residual(ell: i64, samples: &[Vec<f64>], angles: &[f64]) -> Result<f64> {
    let theta = theta_c(ell)?;
    let mut worst = 0.0f64;
    for p in samples {
        theta.chart().check_point(p)?;
        for &phi in angles {
            let q = plane_action(ell, phi, p);
            for v in theta.chart().tangent_basis(p) {
                let (s, c) = phi.sin_cos();
                let pushed = [c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2], v[3]];
                let d = theta.eval(&q, &pushed) - theta.eval(p, &v);
                worst = worst.max(d.abs());
            }
        }
    }
    Ok(worst)
}

fn sphere(k: i64, n: i64) -> Prequant {
    let nf = n as f64;
    let chart = Arc::new(
        Chart::new(
            format!("P_{{{k},{n}}}"),
            &["x1", "y1", "x2", "y2", "s12", "s13", "s23", "beta", "chi"],
        )
        .with_constraint(|p| {
            let defect = (p[..4].iter().map(|x| x * x).sum::<f64>() - 1.0).abs();
            (defect > SPHERE_TOL).then(|| format!("|z|²+|w|² differs from 1 by {defect:e}"))
        })
        .with_tangent_basis(|p| {
            let coordinate: Vec<Vec<f64>> = (0..9)
                .map(|i| {
                    let mut e = vec![0.0; 9];
                    e[i] = 1.0;
                    e
                })
                .collect();
            let mut normal = vec![0.0; 9];
            normal[..4].copy_from_slice(&p[..4]);
            kernel_basis(&coordinate, &normal)
        }),
    );
    let theta = ChartOneForm::new(chart.clone(), move |p, v| {
        let twist = p[0] * v[1] - p[1] * v[0] + p[2] * v[3] - p[3] * v[2];
        Imag(v[7] + v[8] - nf * twist)
    });
    let omega = ChartTwoForm::constant(chart.clone(), &[(0, 1, 2.0 * nf), (2, 3, 2.0 * nf)]);
    // the P_0 generator (½e1e2, i/2) drives the Spin^c(3) coordinates
    let eta = SpinCAlgebraElement::planar(3, 1, 2, 0.5, Imag(0.5)).expect("valid plane");
    let spin_rate: Vec<f64> = [0b011u32, 0b101, 0b110]
        .iter()
        .map(|&m| {
            *eta.bivector()
                .coeff(crate::clifford::BladeIndex::from_mask(m))
        })
        .collect();
    let beta_rate = eta.u1().0;
    let chi_rate = (n + 2 * k) as f64 / 2.0;
    let generator = VectorField::new(chart.clone(), move |p| {
        vec![
            p[1] / 2.0,
            -p[0] / 2.0,
            -p[3] / 2.0,
            p[2] / 2.0,
            spin_rate[0],
            spin_rate[1],
            spin_rate[2],
            beta_rate,
            chi_rate,
        ]
    });
    let kf = k as f64;
    let moment = Arc::new(move |p: &[f64]| {
        let h = p[0] * p[0] + p[1] * p[1] - p[2] * p[2] - p[3] * p[3];
        nf / 2.0 * (h + 1.0) + kf + 0.5
    });
    let image = moment_image_sphere(k, n);
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        let (h_lo, h_hi) = if n == 0 {
            let phi = kf + 0.5;
            if !(lo <= phi && phi <= hi) {
                return None;
            }
            (-1.0, 1.0)
        } else {
            let to_h = |phi: f64| 2.0 * (phi - kf - 0.5) / nf - 1.0;
            let (a, b) = (to_h(lo), to_h(hi));
            (a.min(b).max(-1.0), a.max(b).min(1.0))
        };
        if h_hi < h_lo {
            return None;
        }
        let h = if h_hi > h_lo {
            rng.random_range(h_lo..=h_hi)
        } else {
            h_lo
        };
        let point = SpherePoint::from_height(h, angle(rng), angle(rng)).ok()?;
        let mut p = point.coords().to_vec();
        for _ in 0..3 {
            p.push(rng.random_range(-1.0..1.0));
        }
        p.push(angle(rng));
        p.push(angle(rng));
        Some(p)
    });
    Prequant {
        descriptor: PrequantDescriptor::Sphere { k, n },
        chart,
        theta,
        omega,
        generator,
        moment,
        image,
        sampler,
        manifold_dim: 2,
        spin_coords: vec![4, 5, 6],
        det_coord: Some(7),
        fiber_coords: vec![4, 5, 6, 7, 8],
    }
}

/// The prequantization `(P_{k,n}, θ_n)` with its chart data.
pub fn sphere_prequant(k: i64, n: i64) -> Prequant {
    sphere(k, n)
}

pub fn plane_prequant(ell: i64) -> Result<Prequant> {
    plane(ell, 1.0)
}

/// `θ_n = i dβ − i n (x1 dy1 − y1 dx1 + x2 dy2 − y2 dx2) + i dχ`; independent of `k`.
pub fn theta_sphere(k: i64, n: i64) -> ChartOneForm {
    sphere(k, n).theta
}

pub fn generator_field_sphere(k: i64, n: i64) -> VectorField {
    sphere(k, n).generator
}

/// `Φ([z,w]) = (n/2)(|z|² − |w|² + 1) + k + ½`.
pub fn sphere_moment(k: i64, n: i64, p: &SpherePoint) -> f64 {
    n as f64 / 2.0 * (p.height() + 1.0) + k as f64 + 0.5
}

/// `[k+½, n+k+½]`, reordered when `n < 0`.
pub fn moment_image_sphere(k: i64, n: i64) -> Interval {
    let a = k as f64 + 0.5;
    let b = (n + k) as f64 + 0.5;
    Interval {
        lo: a.min(b),
        hi: a.max(b),
    }
}

/// `Φ = −i·θ(generator)` at two different lifts of the point; the lifts
/// must agree.
pub fn moment_map(d: &PrequantDescriptor, point: &ModelPoint) -> Result<MomentValue> {
    let pq = match d {
        PrequantDescriptor::ComplexPlane { .. }
        | PrequantDescriptor::NegativePlane { .. }
        | PrequantDescriptor::Sphere { .. } => Prequant::from_descriptor(d)?,
        other => {
            return Err(Error::Unsupported(format!(
                "moment map of {}",
                other.model_name()
            )))
        }
    };
    let lifts: [Vec<f64>; 2] = match (d, point) {
        (PrequantDescriptor::Sphere { .. }, ModelPoint::Sphere(s)) => {
            let mut a = s.coords().to_vec();
            a.extend([0.0; 5]);
            let mut b = s.rephased(0.9).coords().to_vec();
            b.extend([0.2, -0.1, 0.3, 1.1, -2.0]);
            [a, b]
        }
        (PrequantDescriptor::Sphere { .. }, _) => {
            return Err(Error::InvalidPoint(
                "sphere model needs a sphere point".into(),
            ))
        }
        (_, ModelPoint::Plane(z)) => [vec![z.re, z.im, 0.0, 0.0], vec![z.re, z.im, 1.3, -0.7]],
        (_, _) => {
            return Err(Error::InvalidPoint(
                "plane model needs a plane point".into(),
            ))
        }
    };
    let values = lifts
        .iter()
        .map(|p| Ok(crate::forms::pair(&pq.theta, &pq.generator, p)?.times_minus_i()))
        .collect::<Result<Vec<_>>>()?;
    if (values[0] - values[1]).abs() > 1e-9 {
        return Err(Error::NotDescendable(format!(
            "moment depends on the lift: {} vs {}",
            values[0], values[1]
        )));
    }
    Ok(MomentValue { alpha: values[0] })
}

/// `max |dΦ(v) − ω(ξ, v)|` over samples and tangent-basis vectors.
pub fn moment_identity_residual(pq: &Prequant, samples: &[Vec<f64>]) -> f64 {
    samples
        .par_iter()
        .map(|p| {
            let xi = pq.generator.eval(p);
            pq.chart
                .tangent_basis(p)
                .iter()
                .map(|v| {
                    let d_phi = directional_derivative(|q| pq.moment(q), p, v, 1e-5);
                    (d_phi - pq.omega.eval(p, &xi, v)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// `max |−i·θ(generator) − Φ|` over samples: the connection reproduces the
/// closed-form moment map.
pub fn moment_pairing_residual(pq: &Prequant, samples: &[Vec<f64>]) -> f64 {
    samples
        .par_iter()
        .map(|p| {
            let pairing = pq.theta.eval(p, &pq.generator.eval(p)).times_minus_i();
            (pairing - pq.moment(p)).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// `true` iff `2c ∈ ℤ` (to `1e-9`).
pub fn is_prequantizable_sphere(c: f64) -> bool {
    let twice = 2.0 * c;
    (twice - twice.round()).abs() < 1e-9
}

/// Whether `[ω/2π] = t·[ω_FS]` on `ℂPⁿ` admits a spin^c prequantization:
/// `t ∈ ℤ` for odd `n`, `t ∈ ℤ + ½` for even `n`.
pub fn classify_cpn(n: u32, t: Rational64) -> bool {
    if n == 0 {
        return false;
    }
    if n % 2 == 1 {
        t.is_integer()
    } else {
        (t - Rational64::new(1, 2)).is_integer()
    }
}

/// `(Re z1, Im z1, Re z2, …)`.
pub fn realify_vector<'a>(v: impl IntoIterator<Item = &'a Complex64>) -> Vec<f64> {
    v.into_iter().flat_map(|c| [c.re, c.im]).collect()
}

/// The real `2n×2n` matrix of a complex `n×n` matrix, blocks `[[Re, −Im], [Im, Re]]`.
pub fn realify_matrix(a: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = a.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = a[(i / 2, j / 2)];
        match (i % 2, j % 2) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    })
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn unitarity_residual(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    max_entry(&(a.adjoint() * a - DMatrix::identity(n, n)))
}

/// The lift `F: U(n) → Spin^c(2n)` of `A ↦ (A_ℝ, det A)`.
///
/// Each eigenpair `(e^{iθ}, u)` contributes `cos(θ/2) + sin(θ/2)·ab` with
/// `a, b` the realifications of `u` and `iu`; the phase is `e^{iΣθ/2}`.
pub fn lift_f(a: &DMatrix<Complex64>) -> Result<SpinCElement> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: a.ncols(),
        });
    }
    if n == 0 || 2 * n > MAX_DIM {
        return Err(Error::Unsupported(format!("lift of U({n})")));
    }
    let residual = unitarity_residual(a);
    if residual > MATRIX_TOL {
        return Err(Error::NotUnitary(residual));
    }
    let (q, t) = a
        .clone()
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Unsupported("Schur decomposition did not converge".into()))?
        .unpack();
    let dim = 2 * n;
    let mut rotor = Multivector::one(dim);
    let mut half_sum = 0.0;
    for j in 0..n {
        let mut theta = t[(j, j)].arg();
        if theta <= -PI + 1e-12 {
            theta = PI;
        }
        let u: Vec<Complex64> = q.column(j).iter().copied().collect();
        let iu: Vec<Complex64> = u.iter().map(|z| z * Complex64::i()).collect();
        let plane = &Multivector::from_vector(&realify_vector(&u))
            * &Multivector::from_vector(&realify_vector(&iu));
        let (s, c) = (theta / 2.0).sin_cos();
        let factor = &Multivector::scalar(dim, c) + &plane.scale(s);
        rotor = &rotor * &factor;
        half_sum += theta / 2.0;
    }
    SpinCElement::new(
        SpinElement::new(rotor)?,
        Complex64::from_polar(1.0, half_sum),
    )
}

fn check_su(n: usize, xi: &DMatrix<Complex64>) -> Result<()> {
    if xi.shape() != (n + 1, n + 1) {
        return Err(Error::NotSu(format!(
            "expected {0}×{0}, got {1}×{2}",
            n + 1,
            xi.nrows(),
            xi.ncols()
        )));
    }
    let skew = max_entry(&(xi + xi.adjoint()));
    if skew > MATRIX_TOL {
        return Err(Error::NotSu(format!("not anti-Hermitian ({skew:e})")));
    }
    let trace = xi.trace().norm();
    if trace > MATRIX_TOL {
        return Err(Error::NotSu(format!("trace {trace:e}")));
    }
    Ok(())
}

fn upper_trace(n: usize, m: &DMatrix<Complex64>) -> Complex64 {
    (0..n).map(|i| m[(i, i)]).sum()
}

/// `θ(q_*(ξ^R + ζ^L)) = ((n+1)/2)·tr(A) + ½det_*(ζ)` with `A` the upper-left
/// `n×n` block of `ξ`.
pub fn theta_cpn(n: usize, xi: &DMatrix<Complex64>, zeta: &SpinCAlgebraElement) -> Result<Imag> {
    check_su(n, xi)?;
    if zeta.dim() != 2 * n {
        return Err(Error::DimensionMismatch {
            left: 2 * n,
            right: zeta.dim(),
        });
    }
    let c = (n + 1) as f64 / 2.0;
    Ok(Imag(c * upper_trace(n, xi).im) + zeta.u1())
}

/// `−((n+1)/2)·tr(X)` with `X` the upper-left block of `[ξ1, ξ2]`.
pub fn curvature_cpn(n: usize, xi1: &DMatrix<Complex64>, xi2: &DMatrix<Complex64>) -> Result<Imag> {
    check_su(n, xi1)?;
    check_su(n, xi2)?;
    let bracket = xi1 * xi2 - xi2 * xi1;
    Ok(Imag(-((n + 1) as f64) / 2.0 * upper_trace(n, &bracket).im))
}

fn section(n: usize, b: &[f64]) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(n + 1, n + 1);
    for i in 0..n {
        let bi = Complex64::new(b[2 * i], b[2 * i + 1]);
        m[(i, n)] = bi;
        m[(n, i)] = -bi.conj();
    }
    m.exp()
}

/// `θ` pulled back through the local section `s(b) = exp([[0, b], [−b*, 0]])`
/// of `SU(n+1) → ℂPⁿ`, on the chart of real coordinates of `b ∈ ℂⁿ`.
///
/// Uses the left Maurer–Cartan form `s⁻¹ds`, the connection for the right
/// action of the isotropy group.
pub fn cpn_local_connection(n: usize) -> ChartOneForm {
    let names: Vec<String> = (1..=n)
        .flat_map(|i| [format!("re b{i}"), format!("im b{i}")])
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let chart = Arc::new(Chart::new(format!("CP^{n} section"), &refs));
    let c = (n + 1) as f64 / 2.0;
    ChartOneForm::new(chart, move |b, v| {
        let h = SECTION_STEP;
        let at = |t: f64| section(n, &crate::forms::offset(b, v, t));
        let ds = (at(-2.0 * h) - at(2.0 * h) + (at(h) - at(-h)) * Complex64::new(8.0, 0.0))
            / Complex64::new(12.0 * h, 0.0);
        let mc = section(n, b).adjoint() * ds;
        Imag(c * upper_trace(n, &mc).im)
    })
}

/// `dθ(ξ1, ξ2)` by finite differences through the local section at `b = 0`.
pub fn curvature_cpn_numeric(
    n: usize,
    xi1: &DMatrix<Complex64>,
    xi2: &DMatrix<Complex64>,
) -> Result<Imag> {
    check_su(n, xi1)?;
    check_su(n, xi2)?;
    let off =
        |xi: &DMatrix<Complex64>| realify_vector((0..n).map(|i| &xi[(i, n)]).collect::<Vec<_>>());
    let theta = cpn_local_connection(n);
    numeric_d(&theta, &vec![0.0; 2 * n], &off(xi1), &off(xi2))
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal divided out.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::one()
        }
    });
    q * DMatrix::from_diagonal(&phases)
}

/// A random element of `𝔰𝔲(dim)`.
pub fn random_su(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let skew = (&g - g.adjoint()) * Complex64::new(0.5, 0.0);
    let shift = skew.trace() / Complex64::new(dim as f64, 0.0);
    skew - DMatrix::identity(dim, dim) * shift
}

/// The connection `θ̄` on `P_det = P / Spin(m)` with `θ = ½ q*θ̄`.
///
/// `q` drops the spin coordinates and doubles the `Spin^c` phase coordinate.
#[derive(Clone, Debug)]
pub struct DetBundle {
    connection: ChartOneForm,
    theta: ChartOneForm,
    spin_coords: Vec<usize>,
    det_coord: usize,
}

impl DetBundle {
    pub fn connection(&self) -> &ChartOneForm {
        &self.connection
    }

    fn keep(&self, i: usize) -> bool {
        !self.spin_coords.contains(&i)
    }

    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        (0..p.len())
            .filter(|&i| self.keep(i))
            .map(|i| {
                if i == self.det_coord {
                    2.0 * p[i]
                } else {
                    p[i]
                }
            })
            .collect()
    }

    /// `q_*` is linear and equal to `q` on chart vectors.
    pub fn push(&self, v: &[f64]) -> Vec<f64> {
        self.project(v)
    }

    /// `max |½θ̄(q_* v) − θ(v)|` over tangent-basis vectors at the samples.
    pub fn identity_residual(&self, samples: &[Vec<f64>]) -> f64 {
        samples
            .par_iter()
            .map(|p| {
                let q = self.project(p);
                self.theta
                    .chart()
                    .tangent_basis(p)
                    .iter()
                    .map(|v| {
                        (self.connection.eval(&q, &self.push(v)) * 0.5 - self.theta.eval(p, v))
                            .abs()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Builds `θ̄` after checking that `θ` kills spin directions and does not
/// depend on the fiber coordinates.
pub fn det_bundle_connection(d: &PrequantDescriptor) -> Result<DetBundle> {
    match d {
        PrequantDescriptor::ComplexPlane { .. }
        | PrequantDescriptor::NegativePlane { .. }
        | PrequantDescriptor::Sphere { .. } => det_bundle_for(&Prequant::from_descriptor(d)?),
        other => Err(Error::Unsupported(format!(
            "determinant bundle of {}",
            other.model_name()
        ))),
    }
}

pub fn det_bundle_for(pq: &Prequant) -> Result<DetBundle> {
    let det_coord = pq
        .det_coord
        .ok_or_else(|| Error::Unsupported("no Spin^c phase coordinate".into()))?;
    let dim = pq.chart.dim();
    for p in pq.samples(8, 17) {
        for &s in &pq.spin_coords {
            let mut e = vec![0.0; dim];
            e[s] = 1.0;
            let value = pq.theta.eval(&p, &e);
            if value.abs() > 1e-9 {
                return Err(Error::NotDescendable(format!(
                    "θ(ζ) = {value} along `{}`",
                    pq.chart.coords()[s]
                )));
            }
        }
        let mut shifted = p.clone();
        for (j, &f) in pq.fiber_coords.iter().enumerate() {
            shifted[f] += 0.37 + 0.11 * j as f64;
        }
        for v in pq.chart.tangent_basis(&p) {
            let change = (pq.theta.eval(&shifted, &v) - pq.theta.eval(&p, &v)).abs();
            if change > 1e-9 {
                return Err(Error::NotDescendable(format!(
                    "θ is not Spin^c-invariant (change {change:e})"
                )));
            }
        }
    }
    let spin_coords = pq.spin_coords.clone();
    let kept: Vec<usize> = (0..dim).filter(|i| !spin_coords.contains(i)).collect();
    let names: Vec<&str> = kept
        .iter()
        .map(|&i| {
            if i == det_coord {
                "rho"
            } else {
                pq.chart.coords()[i].as_str()
            }
        })
        .collect();
    let chart = Arc::new(Chart::new(format!("{}/Spin", pq.chart.name()), &names));
    let theta = pq.theta.clone();
    let (kept_c, spin_c) = (kept.clone(), spin_coords.clone());
    // lift (q, w) to (p, v) with zero spin components and halved phase
    let lift = move |x: &[f64]| {
        let mut out = vec![0.0; dim];
        for (slot, &i) in kept_c.iter().enumerate() {
            out[i] = if i == det_coord {
                x[slot] / 2.0
            } else {
                x[slot]
            };
        }
        for &s in &spin_c {
            out[s] = 0.0;
        }
        out
    };
    let connection = ChartOneForm::new(chart, move |q, w| theta.eval(&lift(q), &lift(w)) * 2.0);
    Ok(DetBundle {
        connection,
        theta: pq.theta.clone(),
        spin_coords,
        det_coord,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{pair, verify_curvature};
    use num_traits::Zero;

    #[test]
    fn parity_errors() {
        assert_eq!(theta_c(2).unwrap_err(), Error::EvenParameter(2));
        assert!(PrequantDescriptor::complex_plane(-4).is_err());
        assert!(PrequantDescriptor::complex_plane(-3).is_ok());
    }

    #[test]
    fn plane_theta_examples() {
        let theta = theta_c(1).unwrap();
        let p = [0.8, -0.3, 0.4, 1.2];
        assert_eq!(theta.eval(&p, &[0.0, 0.0, 1.0, 0.0]), Imag(0.0));
        assert_eq!(theta.eval(&p, &[0.0, 0.0, 0.0, 0.7]), Imag(0.7));
        // ½(z̄v − z v̄) = i Im(z̄ v)
        let (z, v) = (Complex64::new(p[0], p[1]), Complex64::new(0.25, -1.5));
        let expected = (z.conj() * v).im;
        assert!((theta.eval(&p, &[v.re, v.im, 0.0, 0.0]).0 - expected).abs() < 1e-15);
    }

    #[test]
    fn plane_generator_pairing() {
        for (ell, x, expected) in [(1, 1.0, -1.5), (-1, 2.0, -3.5)] {
            let theta = theta_c(ell).unwrap();
            let field = generator_field_c(ell).unwrap();
            let value = pair(&theta, &field, &[x, 0.0, 0.3, -0.2]).unwrap();
            assert!((value.0 - expected).abs() < 1e-12);
        }
        let field = generator_field_c(3).unwrap();
        assert_eq!(
            field.eval(&[0.0, 0.0, 0.0, 0.0]),
            vec![0.0, 0.0, -0.5, -1.5]
        );
    }

    #[test]
    fn plane_action_differentiates_to_the_generator() {
        let ell = 5;
        let p = [0.3, -1.1, 0.2, 0.9];
        let field = generator_field_c(ell).unwrap().eval(&p);
        let h = 1e-6;
        for i in 0..4 {
            let d = (plane_action(ell, h, &p)[i] - plane_action(ell, -h, &p)[i]) / (2.0 * h);
            assert!((d - field[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn plane_curvature_and_invariance() {
        let pq = plane_prequant(3).unwrap();
        let samples = pq.samples(20, 1);
        let r = verify_curvature(&pq.theta, &pq.omega, &samples, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        let angles: Vec<f64> = (0..8).map(|j| j as f64 * 0.7 - 2.0).collect();
        assert!(plane_invariance_residual(3, &samples, &angles).unwrap() < 1e-9);
        assert!(moment_identity_residual(&pq, &samples) < 1e-6);
    }

    #[test]
    fn sphere_pairing_examples() {
        let (k, n) = (1, 3);
        let theta = theta_sphere(k, n);
        let field = generator_field_sphere(k, n);
        let north = [1.0, 0.0, 0.0, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
        let south = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!((pair(&theta, &field, &north).unwrap().0 - 4.5).abs() < 1e-12);
        assert!((pair(&theta, &field, &south).unwrap().0 - 1.5).abs() < 1e-12);
        let v = field.eval(&north);
        assert_eq!(&v[2..4], &[0.0, 0.0]);
        let mut fiber = [0.0; 9];
        fiber[8] = 0.6;
        assert_eq!(theta.eval(&north, &fiber), Imag(0.6));
        for s in 4..7 {
            let mut e = [0.0; 9];
            e[s] = 1.0;
            assert_eq!(theta.eval(&north, &e), Imag(0.0));
        }
    }

    #[test]
    fn sphere_rejects_off_sphere_points() {
        let theta = theta_sphere(0, 2);
        let field = generator_field_sphere(0, 2);
        let p = [1.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(
            pair(&theta, &field, &p),
            Err(Error::InvalidPoint(_))
        ));
        assert!(SpherePoint::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn sphere_moment_and_image() {
        let d = PrequantDescriptor::sphere(2, 3);
        let north = SpherePoint::new(Complex64::new(0.0, 1.0), Complex64::zero()).unwrap();
        let south = SpherePoint::new(Complex64::zero(), Complex64::new(-1.0, 0.0)).unwrap();
        let at = |p| moment_map(&d, &ModelPoint::Sphere(p)).unwrap().alpha;
        assert!((at(north) - 5.5).abs() < 1e-12);
        assert!((at(south) - 2.5).abs() < 1e-12);
        assert_eq!(moment_image_sphere(0, 2), Interval { lo: 0.5, hi: 2.5 });
        assert_eq!(moment_image_sphere(0, 0), Interval { lo: 0.5, hi: 0.5 });
        assert_eq!(moment_image_sphere(1, -2), Interval { lo: -0.5, hi: 1.5 });
        let plane = PrequantDescriptor::complex_plane(3).unwrap();
        let phi = moment_map(&plane, &ModelPoint::Plane(Complex64::new(1.0, 1.0))).unwrap();
        assert!((phi.alpha + 3.5).abs() < 1e-12);
        assert!(moment_map(
            &PrequantDescriptor::projective_space(2).unwrap(),
            &ModelPoint::Plane(Complex64::zero())
        )
        .is_err());
    }

    #[test]
    fn sphere_identities() {
        for (k, n) in [(0, 2), (-1, 3), (2, -1)] {
            let pq = sphere_prequant(k, n);
            let samples = pq.samples(10, 7);
            assert!(moment_pairing_residual(&pq, &samples) < 1e-12);
            assert!(moment_identity_residual(&pq, &samples) < 1e-6);
            let r = verify_curvature(&pq.theta, &pq.omega, &samples, 1e-6).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn classifiers() {
        assert!(is_prequantizable_sphere(1.0));
        assert!(is_prequantizable_sphere(0.5));
        assert!(!is_prequantizable_sphere(0.3));
        assert!(classify_cpn(1, Rational64::from_integer(2)));
        assert!(!classify_cpn(2, Rational64::from_integer(2)));
        assert!(classify_cpn(2, Rational64::new(-3, 2)));
    }

    #[test]
    fn realification_blocks() {
        let a = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, 1.0)]);
        assert_eq!(
            realify_matrix(&a),
            DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
        );
    }

    #[test]
    fn lift_examples() {
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert!(lift_f(&id)
            .unwrap()
            .approx_eq(&SpinCElement::identity(4), 1e-12));

        let t: f64 = 1.1;
        let a = DMatrix::from_row_slice(1, 1, &[Complex64::from_polar(1.0, t)]);
        let expected = SpinCElement::new(
            SpinElement::planar(2, 1, 2, t / 2.0).unwrap(),
            Complex64::from_polar(1.0, t / 2.0),
        )
        .unwrap();
        assert!(lift_f(&a).unwrap().approx_eq(&expected, 1e-12));

        let minus = -DMatrix::<Complex64>::identity(2, 2);
        let f = lift_f(&minus).unwrap();
        assert!((crate::spin::det_map(&f) - Complex64::one()).norm() < 1e-12);
        let rot = crate::spin::lambda_c(&f).unwrap();
        assert!(rot.max_abs_diff(&(-DMatrix::<f64>::identity(4, 4))) < 1e-12);

        let bad = DMatrix::from_row_slice(1, 1, &[Complex64::new(2.0, 0.0)]);
        assert!(matches!(lift_f(&bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn cpn_examples() {
        let zeta = SpinCAlgebraElement::zero(4);
        let i = Complex64::i();
        let z = Complex64::zero();
        let xi = DMatrix::from_row_slice(3, 3, &[i, z, z, z, -i, z, z, z, z]);
        assert_eq!(theta_cpn(2, &xi, &zeta).unwrap(), Imag(0.0));
        let xi = DMatrix::from_row_slice(3, 3, &[i, z, z, z, i, z, z, z, -i * 2.0]);
        assert!((theta_cpn(2, &xi, &zeta).unwrap().0 - 3.0).abs() < 1e-15);
        let zeta = SpinCAlgebraElement::new(Multivector::zero(4), Imag(0.4)).unwrap();
        assert_eq!(
            theta_cpn(2, &DMatrix::zeros(3, 3), &zeta).unwrap(),
            Imag(0.4)
        );

        let one = Complex64::one();
        let x1 = DMatrix::from_row_slice(2, 2, &[z, one, -one, z]);
        let x2 = DMatrix::from_row_slice(2, 2, &[z, i, i, z]);
        assert!((curvature_cpn(1, &x1, &x2).unwrap().0 + 2.0).abs() < 1e-15);
        assert_eq!(curvature_cpn(1, &x1, &x1).unwrap(), Imag(0.0));
        let numeric = curvature_cpn_numeric(1, &x1, &x2).unwrap();
        assert!((numeric.0 + 2.0).abs() < 1e-5, "{numeric}");

        let not_su = DMatrix::from_row_slice(2, 2, &[one, z, z, -one]);
        assert!(matches!(
            curvature_cpn(1, &not_su, &x1),
            Err(Error::NotSu(_))
        ));
    }

    #[test]
    fn det_bundle() {
        let d = PrequantDescriptor::complex_plane(3).unwrap();
        let det = det_bundle_connection(&d).unwrap();
        let pq = plane_prequant(3).unwrap();
        let samples = pq.samples(10, 3);
        assert!(det.identity_residual(&samples) < 1e-14);
        // θ̄ = i(dρ + 2(x dy − y dx))
        let q = [0.5, -0.25, 1.0];
        let w = [0.3, 0.7, -0.2];
        let expected = w[2] + 2.0 * (q[0] * w[1] - q[1] * w[0]);
        assert!((det.connection().eval(&q, &w).0 - expected).abs() < 1e-15);
        assert_eq!(det.connection().eval(&q, &[0.0, 0.0, 0.9]), Imag(0.9));

        let sphere = det_bundle_connection(&PrequantDescriptor::sphere(0, 2)).unwrap();
        let sp = sphere_prequant(0, 2);
        assert!(sphere.identity_residual(&sp.samples(10, 3)) < 1e-14);

        let twisted = pq
            .clone()
            .with_theta(ChartOneForm::new(pq.chart().clone(), |_, v| {
                Imag(v[2] + v[3])
            }))
            .unwrap();
        assert!(matches!(
            det_bundle_for(&twisted),
            Err(Error::NotDescendable(_))
        ));
    }

    #[test]
    fn descriptor_json() {
        let d = PrequantDescriptor::sphere(0, 2);
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["model"], "Sphere");
        assert_eq!(v["params"]["n"], 2);
        assert_eq!(v["two_form_label"], "ω_2 = (2/2)A");
    }
}
