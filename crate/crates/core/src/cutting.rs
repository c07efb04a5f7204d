//! Symplectic cutting of prequantizations.
//!
//! The pipeline: form `M × ℂ` with the product connection, restrict to the
//! level set `Z̃ = {Φ(m) ∓ |u|² = α}`, and test whether the restricted
//! connection kills the generator of the circle action. The test passes
//! exactly at `α = ℓ/2`.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{
    dot, kernel_basis, verify_curvature, Chart, ChartOneForm, ChartTwoForm, CurvatureReport,
    VectorField,
};
use crate::models::{check_odd, moment_image_sphere, Interval, Prequant, PrequantDescriptor};
use crate::u1::Imag;

/// Tolerance for `|α − ℓ/2|` and for a vanishing descent residual.
pub const ADMISSIBLE_TOL: f64 = 1e-9;
/// Samples closer than this to the level-set boundary are discarded.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

/// Sample count and RNG seed for level-set sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 50,
            seed: 0x5eed,
        }
    }
}

/// `(M × N × Spin^c(m+n)) / ~` with `θ = θ_M + θ_N + ½det_*∘θ^L`.
///
/// Chart: the coordinates of `M`, then of `N`, then the bivector
/// coordinates of `𝔰𝔭𝔦𝔫(m+n)` and a phase `gamma`.
#[derive(Clone, Debug)]
pub struct ProductPrequant {
    prequant: Prequant,
    left: Prequant,
    right: Prequant,
    m_action: VectorField,
}

impl ProductPrequant {
    pub fn prequant(&self) -> &Prequant {
        &self.prequant
    }

    pub fn into_prequant(self) -> Prequant {
        self.prequant
    }

    pub fn left(&self) -> &Prequant {
        &self.left
    }

    pub fn right(&self) -> &Prequant {
        &self.right
    }

    /// `ξ_M ⊕ ξ_N`: the action whose quotient cuts.
    pub fn anti_diagonal(&self) -> &VectorField {
        self.prequant.generator()
    }

    /// `ξ_M ⊕ 0`.
    pub fn m_action(&self) -> &VectorField {
        &self.m_action
    }

    /// Offsets of the `N` block and of the `Spin^c(m+n)` block.
    pub fn offsets(&self) -> (usize, usize) {
        let dm = self.left.chart().dim();
        (dm, dm + self.right.chart().dim())
    }
}

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

fn padded(v: &[f64], at: usize, dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    out[at..at + v.len()].copy_from_slice(v);
    out
}

pub fn product_prequant(
    dm: &PrequantDescriptor,
    dn: &PrequantDescriptor,
) -> Result<ProductPrequant> {
    let left = Prequant::from_descriptor(dm)?;
    let right = Prequant::from_descriptor(dn)?;
    let (m, n) = (left.manifold_dim(), right.manifold_dim());
    let (dl, dr) = (left.chart().dim(), right.chart().dim());
    let spin_dim = m + n;
    let mut coords: Vec<String> = left
        .chart()
        .coords()
        .iter()
        .map(|c| format!("M.{c}"))
        .collect();
    coords.extend(right.chart().coords().iter().map(|c| format!("N.{c}")));
    for i in 1..=spin_dim {
        for j in (i + 1)..=spin_dim {
            coords.push(format!("b{i}{j}"));
        }
    }
    coords.push("gamma".into());
    let dim = coords.len();
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let (lc, rc) = (left.chart().clone(), right.chart().clone());
    let (lb, rb) = (lc.clone(), rc.clone());
    let chart = Arc::new(
        Chart::new(format!("{}×{}", lc.name(), rc.name()), &refs)
            .with_constraint(move |p| {
                lc.check_point(&p[..dl])
                    .and_then(|_| rc.check_point(&p[dl..dl + dr]))
                    .err()
                    .map(|e| e.to_string())
            })
            .with_tangent_basis(move |p| {
                let mut basis: Vec<Vec<f64>> = lb
                    .tangent_basis(&p[..dl])
                    .iter()
                    .map(|v| padded(v, 0, dim))
                    .collect();
                basis.extend(
                    rb.tangent_basis(&p[dl..dl + dr])
                        .iter()
                        .map(|v| padded(v, dl, dim)),
                );
                basis.extend((dl + dr..dim).map(|i| unit(dim, i)));
                basis
            }),
    );

    let (tl, tr) = (left.theta().clone(), right.theta().clone());
    let gamma = dim - 1;
    let theta = ChartOneForm::new(chart.clone(), move |p, v| {
        tl.eval(&p[..dl], &v[..dl]) + tr.eval(&p[dl..dl + dr], &v[dl..dl + dr]) + Imag(v[gamma])
    });
    let (ol, or) = (left.omega().clone(), right.omega().clone());
    let omega = ChartTwoForm::new(chart.clone(), move |p, v, w| {
        ol.eval(&p[..dl], &v[..dl], &w[..dl])
            + or.eval(&p[dl..dl + dr], &v[dl..dl + dr], &w[dl..dl + dr])
    });
    let (gl, gr) = (left.generator().clone(), right.generator().clone());
    let generator = VectorField::new(chart.clone(), move |p| {
        let mut out = gl.eval(&p[..dl]);
        out.extend(gr.eval(&p[dl..dl + dr]));
        out.resize(dim, 0.0);
        out
    });
    let gl = left.generator().clone();
    let m_action = VectorField::new(chart.clone(), move |p| {
        let mut out = gl.eval(&p[..dl]);
        out.resize(dim, 0.0);
        out
    });
    let (ml, mr) = (left.clone(), right.clone());
    let moment = Arc::new(move |p: &[f64]| ml.moment(&p[..dl]) + mr.moment(&p[dl..dl + dr]));
    let (il, ir) = (left.moment_image(), right.moment_image());
    let image = Interval {
        lo: il.lo + ir.lo,
        hi: il.hi + ir.hi,
    };
    let (sl, sr) = (left.clone(), right.clone());
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        for _ in 0..1000 {
            let mut p = sl.sample_in(rng, f64::NEG_INFINITY, f64::INFINITY)?;
            p.extend(sr.sample_in(rng, f64::NEG_INFINITY, f64::INFINITY)?);
            while p.len() < gamma {
                p.push(rng.random_range(-1.0..1.0));
            }
            p.push(rng.random_range(-PI..PI));
            let phi = sl.moment(&p[..dl]) + sr.moment(&p[dl..dl + dr]);
            if lo < phi && phi < hi {
                return Some(p);
            }
        }
        None
    });
    let mut spin_coords: Vec<usize> = left.spin_coords.clone();
    spin_coords.extend(right.spin_coords.iter().map(|i| i + dl));
    spin_coords.extend(dl + dr..gamma);
    let mut fiber_coords: Vec<usize> = left.fiber_coords.clone();
    fiber_coords.extend(right.fiber_coords.iter().map(|i| i + dl));
    fiber_coords.extend(dl + dr..dim);
    let prequant = Prequant {
        descriptor: PrequantDescriptor::product(dm.clone(), dn.clone()),
        chart,
        theta,
        omega,
        generator,
        moment,
        image,
        sampler,
        manifold_dim: m + n,
        spin_coords,
        det_coord: None,
        fiber_coords,
    };
    Ok(ProductPrequant {
        prequant,
        left,
        right,
        m_action,
    })
}

/// Which cut: `Positive` is `Φ − |u|² = α` with `P_ℂ^ℓ`, `Negative` is
/// `Φ + |u|² = α` with the negative plane factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// The level set `Z̃` inside a product `M × ℂ`, with the restricted
/// connection and a fixed set of samples.
#[derive(Clone, Debug)]
pub struct LevelSet {
    descriptor: PrequantDescriptor,
    alpha: f64,
    ell: i64,
    side: Side,
    chart: Arc<Chart>,
    theta: ChartOneForm,
    omega: ChartTwoForm,
    generator: VectorField,
    samples: Vec<Vec<f64>>,
}

impl LevelSet {
    pub fn descriptor(&self) -> &PrequantDescriptor {
        &self.descriptor
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn theta(&self) -> &ChartOneForm {
        &self.theta
    }

    pub fn omega(&self) -> &ChartTwoForm {
        &self.omega
    }

    /// The generator of the cutting action, tangent to `Z̃`.
    pub fn generator(&self) -> &VectorField {
        &self.generator
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// `dθ_Z = −i·ω|_Z` on pairs of `Z̃`-tangent vectors.
    pub fn curvature(&self, tol: f64) -> Result<CurvatureReport> {
        verify_curvature(&self.theta, &self.omega, &self.samples, tol)
    }
}

/// Restricts `M × ℂ` to `Z̃` at level `α` with the default sampling.
pub fn restrict_to_levelset(d: &PrequantDescriptor, alpha: f64) -> Result<LevelSet> {
    restrict_to_levelset_with(d, alpha, &SampleConfig::default())
}

pub fn restrict_to_levelset_with(
    d: &PrequantDescriptor,
    alpha: f64,
    cfg: &SampleConfig,
) -> Result<LevelSet> {
    let PrequantDescriptor::Product { left, right } = d else {
        return Err(Error::Unsupported(format!(
            "level set of {}",
            d.model_name()
        )));
    };
    let (ell, side) = match **right {
        PrequantDescriptor::ComplexPlane { ell } => (ell, Side::Positive),
        PrequantDescriptor::NegativePlane { ell } => (ell, Side::Negative),
        _ => {
            return Err(Error::Unsupported(
                "the second factor of a cut must be a plane".into(),
            ))
        }
    };
    let product = product_prequant(left, right)?;
    let m = product.left().clone();
    let image = m.moment_image();
    if !image.contains(alpha) {
        return Err(Error::EmptyLevelSet {
            alpha,
            lo: image.lo,
            hi: image.hi,
        });
    }
    let s = side.sign();
    let (u0, spin0) = product.offsets();
    let pq = product.prequant();
    let dim = pq.chart().dim();

    // F = Φ_M − s|u|² − α
    let (mf, pc) = (m.clone(), pq.chart().clone());
    let gradient = move |p: &[f64]| {
        let dm = mf.chart().dim();
        let mut g = vec![0.0; p.len()];
        let h = 1e-6;
        for i in 0..dm {
            let mut a = p[..dm].to_vec();
            let mut b = a.clone();
            a[i] += h;
            b[i] -= h;
            g[i] = (mf.moment(&a) - mf.moment(&b)) / (2.0 * h);
        }
        g[u0] = -2.0 * s * p[u0];
        g[u0 + 1] = -2.0 * s * p[u0 + 1];
        g
    };
    let mc = m.clone();
    let chart = Arc::new(
        pq.chart()
            .renamed(format!("Z({alpha})⊂{}", pq.chart().name()))
            .with_constraint(move |p| {
                if let Err(e) = pc.check_point(p) {
                    return Some(e.to_string());
                }
                let dm = mc.chart().dim();
                let f = mc.moment(&p[..dm]) - s * (p[u0].powi(2) + p[u0 + 1].powi(2)) - alpha;
                (f.abs() > 1e-8).then(|| format!("off the level set by {f:e}"))
            })
            .with_tangent_basis({
                let pc = pq.chart().clone();
                move |p| kernel_basis(&pc.tangent_basis(p), &gradient(p))
            }),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = match side {
        Side::Positive => (alpha + BOUNDARY_MARGIN, f64::INFINITY),
        Side::Negative => (f64::NEG_INFINITY, alpha - BOUNDARY_MARGIN),
    };
    let right_pq = product.right().clone();
    let mut samples = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let mut p = m.sample_in(&mut rng, lo, hi).ok_or(Error::EmptyLevelSet {
            alpha,
            lo: image.lo,
            hi: image.hi,
        })?;
        let r = (s * (m.moment(&p) - alpha)).max(0.0).sqrt();
        let t = rng.random_range(-PI..PI);
        let mut fiber = right_pq
            .sample_in(&mut rng, f64::NEG_INFINITY, f64::INFINITY)
            .expect("plane samples exist");
        fiber[0] = r * t.cos();
        fiber[1] = r * t.sin();
        p.extend(fiber);
        while p.len() < dim - 1 {
            p.push(rng.random_range(-1.0..1.0));
        }
        p.push(rng.random_range(-PI..PI));
        debug_assert_eq!(p.len(), dim);
        debug_assert!(p.len() > spin0);
        samples.push(p);
    }

    Ok(LevelSet {
        descriptor: PrequantDescriptor::LevelSet {
            base: Box::new(d.clone()),
            alpha,
        },
        alpha,
        ell,
        side,
        theta: pq.theta().on_chart(chart.clone())?,
        omega: pq.omega().on_chart(chart.clone())?,
        generator: pq.generator().on_chart(chart.clone())?,
        chart,
        samples,
    })
}

/// `max |θ_Z(ξ)|` over the samples of `Z̃`; zero exactly when the connection
/// descends to the cut space.
pub fn descend_check(z: &LevelSet) -> f64 {
    z.samples
        .par_iter()
        .map(|p| z.theta.eval(p, &z.generator.eval(p)).abs())
        .reduce(|| 0.0, f64::max)
}

/// `|α − ℓ/2| < 1e-9`.
pub fn cutting_admissible(alpha: f64, ell: i64) -> Result<bool> {
    check_odd(ell)?;
    Ok((alpha - ell as f64 / 2.0).abs() < ADMISSIBLE_TOL)
}

/// A cut piece `P_{k,n}` carrying `ω_omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutPiece {
    pub k: i64,
    pub n: i64,
    pub omega: i64,
}

impl CutPiece {
    pub fn descriptor(&self) -> PrequantDescriptor {
        PrequantDescriptor::sphere(self.k, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutReport {
    pub admissible: bool,
    pub residual: f64,
    pub validity: bool,
    pub cut_plus: Option<CutPiece>,
    pub cut_minus: Option<CutPiece>,
}

/// Strict interior condition `k+½ < ℓ/2 < n+k+½` (endpoints swapped for `n < 0`).
pub fn check_cut_validity(k: i64, n: i64, ell: i64) -> Result<()> {
    check_odd(ell)?;
    let Interval { lo, hi } = moment_image_sphere(k, n);
    let half_ell = ell as f64 / 2.0;
    if !(lo < half_ell && half_ell < hi) {
        return Err(Error::BoundaryCut { half_ell, lo, hi });
    }
    Ok(())
}

/// `P_{(ℓ−1)/2, k+n−(ℓ−1)/2}` with `ω_{k+n+(1−ℓ)/2}` and `P_{k, −k+(ℓ−1)/2}`
/// with `ω_{−k+(ℓ−1)/2}`.
pub fn cut_parameters(k: i64, n: i64, ell: i64) -> Result<(CutPiece, CutPiece)> {
    check_odd(ell)?;
    let j = (ell - 1) / 2;
    Ok((
        CutPiece {
            k: j,
            n: k + n - j,
            omega: k + n - j,
        },
        CutPiece {
            k,
            n: -k + j,
            omega: -k + j,
        },
    ))
}

/// Cuts `P_{k,n}` at `α = ℓ/2`.
pub fn cut_sphere(k: i64, n: i64, ell: i64) -> Result<CutReport> {
    cut_sphere_with(k, n, ell, None, &SampleConfig::default())
}

/// Cuts at `alpha` (default `ℓ/2`); the pieces are reported only when the
/// level is admissible.
pub fn cut_sphere_with(
    k: i64,
    n: i64,
    ell: i64,
    alpha: Option<f64>,
    cfg: &SampleConfig,
) -> Result<CutReport> {
    check_cut_validity(k, n, ell)?;
    let alpha = alpha.unwrap_or(ell as f64 / 2.0);
    let d = PrequantDescriptor::product(
        PrequantDescriptor::sphere(k, n),
        PrequantDescriptor::complex_plane(ell)?,
    );
    let z = restrict_to_levelset_with(&d, alpha, cfg)?;
    let residual = descend_check(&z);
    let admissible = cutting_admissible(alpha, ell)? && residual < ADMISSIBLE_TOL;
    let (plus, minus) = cut_parameters(k, n, ell)?;
    Ok(CutReport {
        admissible,
        residual,
        validity: true,
        cut_plus: admissible.then_some(plus),
        cut_minus: admissible.then_some(minus),
    })
}

/// Scale factor used in the cut chart map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartMapScale {
    /// `2n / (2n + 2k + 1 − ℓ)`.
    Stated,
    /// `2n / (2n + 2k + 1 + ℓ)`; a control that must fail.
    FlippedEll,
}

/// Checks `p*ω_{k+n+(1−ℓ)/2} = ω_n + ω_ℂ` on `Z̃ ⊂ S² × ℂ` for
/// `p((φ,h), u) = (φ + arg u, s(h−1) + 1)`.
pub fn verify_cut_chart_map(k: i64, n: i64, ell: i64) -> Result<f64> {
    verify_cut_chart_map_with(k, n, ell, &SampleConfig::default(), ChartMapScale::Stated)
}

pub fn verify_cut_chart_map_with(
    k: i64,
    n: i64,
    ell: i64,
    cfg: &SampleConfig,
    scale: ChartMapScale,
) -> Result<f64> {
    check_cut_validity(k, n, ell)?;
    let (nf, kf, lf) = (n as f64, k as f64, ell as f64);
    let m = cut_parameters(k, n, ell)?.0.omega as f64;
    let s = match scale {
        ChartMapScale::Stated => 2.0 * nf / (2.0 * nf + 2.0 * kf + 1.0 - lf),
        ChartMapScale::FlippedEll => 2.0 * nf / (2.0 * nf + 2.0 * kf + 1.0 + lf),
    };
    let alpha = lf / 2.0;
    let phi = |h: f64| nf / 2.0 * (h + 1.0) + kf + 0.5;
    // Φ(h) = α at h_star; Z̃ lies on the side where Φ > α
    let h_star = 2.0 * (alpha - kf - 0.5) / nf - 1.0;
    let margin = 2.0 * BOUNDARY_MARGIN / nf.abs();
    let (h_lo, h_hi) = if n > 0 {
        (h_star.max(-1.0) + margin, 1.0 - BOUNDARY_MARGIN)
    } else {
        (-1.0 + BOUNDARY_MARGIN, h_star.min(1.0) - margin)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<[f64; 4]> = (0..cfg.samples)
        .map(|_| {
            let h = rng.random_range(h_lo..h_hi);
            let r = (phi(h) - alpha).sqrt();
            let t: f64 = rng.random_range(-PI..PI);
            [rng.random_range(-PI..PI), h, r * t.cos(), r * t.sin()]
        })
        .collect();
    let residual = samples
        .par_iter()
        .map(|p| {
            let normal = [0.0, nf / 2.0, -2.0 * p[2], -2.0 * p[3]];
            let coordinate: Vec<Vec<f64>> = (0..4).map(|i| unit(4, i)).collect();
            let basis = kernel_basis(&coordinate, &normal);
            let r2 = p[2] * p[2] + p[3] * p[3];
            let push = |v: &[f64]| [v[0] + (p[2] * v[3] - p[3] * v[2]) / r2, s * v[1]];
            let mut worst = 0.0f64;
            for (i, v) in basis.iter().enumerate() {
                debug_assert!(dot(v, &normal).abs() < 1e-9);
                for w in &basis[i + 1..] {
                    let (pv, pw) = (push(v), push(w));
                    let lhs = m / 2.0 * (pv[0] * pw[1] - pv[1] * pw[0]);
                    let rhs =
                        nf / 2.0 * (v[0] * w[1] - v[1] * w[0]) - 2.0 * (v[2] * w[3] - v[3] * w[2]);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(residual)
}

/// The plane factor of the negative cut: `θ = i(dψ − (x dy − y dx))` with
/// two-form `i dz∧dz̄`.
pub fn negative_cut_variant(ell: i64) -> Result<PrequantDescriptor> {
    PrequantDescriptor::negative_plane(ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::pair;

    fn sphere_plane(k: i64, n: i64, ell: i64) -> PrequantDescriptor {
        PrequantDescriptor::product(
            PrequantDescriptor::sphere(k, n),
            PrequantDescriptor::complex_plane(ell).unwrap(),
        )
    }

    #[test]
    fn product_connection_is_additive() {
        let d = sphere_plane(0, 2, 3);
        let pp = product_prequant(
            &PrequantDescriptor::sphere(0, 2),
            &PrequantDescriptor::complex_plane(3).unwrap(),
        )
        .unwrap();
        let pq = pp.prequant();
        assert_eq!(pq.descriptor(), &d);
        let (u0, spin0) = pp.offsets();
        let dim = pq.chart().dim();
        assert_eq!(dim, 9 + 4 + 6 + 1);
        let p = &pq.samples(1, 3)[0];
        for b in spin0..dim - 1 {
            assert_eq!(pq.theta().eval(p, &unit(dim, b)), Imag(0.0));
        }
        let u: Vec<f64> = (0..9).map(|i| 0.1 * i as f64).collect();
        let v = padded(&u, 0, dim);
        assert_eq!(pq.theta().eval(p, &v), pp.left().theta().eval(&p[..u0], &u));

        let pairing = pair(pq.theta(), pp.anti_diagonal(), p).unwrap().0;
        let phi_m = pp.left().moment(&p[..u0]);
        let z2 = p[u0].powi(2) + p[u0 + 1].powi(2);
        assert!((pairing - (phi_m - z2 - 1.5)).abs() < 1e-12);
        let m_only = pair(pq.theta(), pp.m_action(), p).unwrap().0;
        assert!((m_only - phi_m).abs() < 1e-12);
    }

    #[test]
    fn projective_factor_has_no_chart_connection() {
        let cp = PrequantDescriptor::projective_space(2).unwrap();
        assert!(matches!(
            product_prequant(&cp, &PrequantDescriptor::complex_plane(1).unwrap()),
            Err(Error::MissingConnection(_))
        ));
    }

    #[test]
    fn level_set_samples_and_curvature() {
        let z = restrict_to_levelset(&sphere_plane(0, 2, 3), 1.5).unwrap();
        for p in z.samples() {
            z.chart().check_point(p).unwrap();
            let phi = 1.0 * (p[0] * p[0] + p[1] * p[1] - p[2] * p[2] - p[3] * p[3] + 1.0) + 0.5;
            let u2 = p[9] * p[9] + p[10] * p[10];
            assert!(u2 > 0.0 && (phi - u2 - 1.5).abs() < 1e-12);
        }
        assert!(z.curvature(1e-6).unwrap().pass);
        assert!(descend_check(&z) < 1e-9);
    }

    #[test]
    fn level_set_errors() {
        assert!(matches!(
            restrict_to_levelset(&sphere_plane(0, 2, 3), 3.0),
            Err(Error::EmptyLevelSet { .. })
        ));
        assert!(matches!(
            restrict_to_levelset(&PrequantDescriptor::sphere(0, 2), 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn descent_residual_is_distance_to_half_ell() {
        let d = sphere_plane(0, 2, 3);
        for (alpha, expected) in [(1.5, 0.0), (1.75, 0.25), (0.5, 1.0)] {
            let z = restrict_to_levelset(&d, alpha).unwrap();
            assert!((descend_check(&z) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn admissibility() {
        assert!(cutting_admissible(1.5, 3).unwrap());
        assert!(!cutting_admissible(1.0, 3).unwrap());
        assert!(cutting_admissible(0.5, 1).unwrap());
        assert_eq!(cutting_admissible(1.0, 2), Err(Error::EvenParameter(2)));
    }

    #[test]
    fn sphere_cut_examples() {
        let r = cut_sphere(0, 2, 3).unwrap();
        assert!(r.admissible && r.validity);
        assert_eq!(
            r.cut_plus,
            Some(CutPiece {
                k: 1,
                n: 1,
                omega: 1
            })
        );
        assert_eq!(
            r.cut_minus,
            Some(CutPiece {
                k: 0,
                n: 1,
                omega: 1
            })
        );
        let r = cut_sphere(-1, 2, 1).unwrap();
        assert_eq!(
            r.cut_plus,
            Some(CutPiece {
                k: 0,
                n: 1,
                omega: 1
            })
        );
        assert_eq!(
            r.cut_minus,
            Some(CutPiece {
                k: -1,
                n: 1,
                omega: 1
            })
        );
        assert!(matches!(
            cut_sphere(0, 2, 1),
            Err(Error::BoundaryCut { .. })
        ));
        let off = cut_sphere_with(0, 2, 3, Some(1.0), &SampleConfig::default()).unwrap();
        assert!(!off.admissible && off.cut_plus.is_none());
        assert!((off.residual - 0.5).abs() < 1e-9);
    }

    #[test]
    fn cut_report_json() {
        let v = serde_json::to_value(cut_sphere(0, 2, 3).unwrap()).unwrap();
        assert_eq!(
            v["cut_plus"],
            serde_json::json!({"k": 1, "n": 1, "omega": 1})
        );
        assert_eq!(v["validity"], true);
    }

    #[test]
    fn chart_map_and_control() {
        assert!(verify_cut_chart_map(0, 2, 3).unwrap() < 1e-5);
        let wrong =
            verify_cut_chart_map_with(0, 2, 3, &SampleConfig::default(), ChartMapScale::FlippedEll)
                .unwrap();
        assert!(wrong > 0.1, "{wrong}");
    }

    #[test]
    fn negative_cut() {
        let d = PrequantDescriptor::product(
            PrequantDescriptor::sphere(0, 2),
            negative_cut_variant(3).unwrap(),
        );
        for (alpha, expected) in [(1.5, 0.0), (2.0, 0.5)] {
            let z = restrict_to_levelset(&d, alpha).unwrap();
            assert_eq!(z.side(), Side::Negative);
            assert!((descend_check(&z) - expected).abs() < 1e-9);
            assert!(z.curvature(1e-6).unwrap().pass);
        }
        assert!(negative_cut_variant(4).is_err());
    }
}
