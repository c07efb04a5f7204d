//! Acceptance criteria, one line each. Exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle_blade_product;
use spinc::clifford::{blade_mul, BladeIndex};
use spinc::cutting::{
    cut_parameters, cut_sphere, descend_check, restrict_to_levelset, verify_cut_chart_map,
};
use spinc::forms::{pair, verify_curvature};
use spinc::models::{
    classify_cpn, curvature_cpn, curvature_cpn_numeric, generator_field_c,
    is_prequantizable_sphere, lift_f, moment_identity_residual, moment_image_sphere, moment_map,
    plane_prequant, random_su, random_unitary, realify_matrix, sphere_prequant, theta_c,
    ModelPoint, PrequantDescriptor, SpherePoint,
};
use spinc::spin::{det_map, lambda, lambda_c, orthogonality_residual, SpinElement};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let mut mismatches = 0;
    let mut pairs = 0;
    for dim in 0..=5usize {
        for a in 0..1u32 << dim {
            for b in 0..1u32 << dim {
                let (s, m) =
                    blade_mul(BladeIndex::from_mask(a), BladeIndex::from_mask(b), dim).unwrap();
                if (s, m.mask()) != oracle_blade_product(a, b) {
                    mismatches += 1;
                }
                pairs += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{pairs} blade pairs, {mismatches} mismatches"),
    )
}

fn random_rotor(dim: usize, rng: &mut ChaCha8Rng) -> SpinElement {
    (0..4).fold(SpinElement::identity(dim), |x, _| {
        let i = rng.random_range(1..=dim);
        let j = (i % dim) + 1;
        x.mul(&SpinElement::planar(dim, i, j, rng.random_range(-PI..PI)).unwrap())
            .unwrap()
    })
}

fn criterion_2() -> Outcome {
    let golden: serde_json::Value =
        serde_json::from_str(include_str!("golden/lambda_convention.json")).unwrap();
    let phi = golden["phi"].as_f64().unwrap();
    let expected: Vec<Vec<f64>> = serde_json::from_value(golden["matrix"].clone()).unwrap();
    let l = lambda(&SpinElement::planar(3, 1, 2, phi).unwrap()).unwrap();
    let mut golden_err = 0.0f64;
    for (i, row) in expected.iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            golden_err = golden_err.max((l.matrix()[(i, j)] - value).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut hom, mut sign, mut ortho) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (x, y) = (random_rotor(4, &mut rng), random_rotor(4, &mut rng));
        let (lx, ly) = (lambda(&x).unwrap(), lambda(&y).unwrap());
        hom = hom.max(
            lambda(&x.mul(&y).unwrap())
                .unwrap()
                .max_abs_diff(&(lx.matrix() * ly.matrix())),
        );
        sign = sign.max(lambda(&x.neg()).unwrap().max_abs_diff(lx.matrix()));
        ortho = ortho.max(orthogonality_residual(lx.matrix()));
    }
    outcome(
        golden_err < 1e-12 && hom < 1e-10 && sign < 1e-10 && ortho < 1e-10,
        format!("golden {golden_err:.1e}, homomorphism {hom:.1e}, ±x {sign:.1e}, orthogonality {ortho:.1e}"),
    )
}

fn criterion_3() -> Outcome {
    let pq = plane_prequant(1).unwrap();
    let samples = pq.samples(20, 3);
    let curvature = verify_curvature(pq.theta(), pq.omega(), &samples, 1e-6).unwrap();
    let mut pairing = 0.0f64;
    for ell in [-3, -1, 1, 3, 5] {
        let (theta, field) = (theta_c(ell).unwrap(), generator_field_c(ell).unwrap());
        for p in plane_prequant(ell).unwrap().samples(20, 4) {
            let z2 = p[0] * p[0] + p[1] * p[1];
            let value = pair(&theta, &field, &p).unwrap().0;
            pairing = pairing.max((value + z2 + ell as f64 / 2.0).abs());
        }
    }
    outcome(
        curvature.pass && pairing < 1e-9,
        format!(
            "curvature {:.1e} at 20 points, pairing {pairing:.1e}",
            curvature.max_residual
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut closed, mut identity, mut endpoints) = (0.0f64, 0.0f64, true);
    for (k, n) in [(0, 2), (-1, 2), (1, 3), (2, -3)] {
        let d = PrequantDescriptor::sphere(k, n);
        for _ in 0..50 {
            let p = SpherePoint::from_height(
                rng.random_range(-1.0..=1.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            )
            .unwrap();
            let phi = moment_map(&d, &ModelPoint::Sphere(p)).unwrap().alpha;
            let hand = n as f64 / 2.0 * (p.height() + 1.0) + k as f64 + 0.5;
            closed = closed.max((phi - hand).abs());
        }
        let image = moment_image_sphere(k, n);
        let (a, b) = (k as f64 + 0.5, (n + k) as f64 + 0.5);
        endpoints &= image.lo == a.min(b) && image.hi == a.max(b);
        let pole = |z: f64, w: f64| {
            let p = SpherePoint::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0)).unwrap();
            moment_map(&d, &ModelPoint::Sphere(p)).unwrap().alpha
        };
        endpoints &= pole(1.0, 0.0) == b && pole(0.0, 1.0) == a;
        let pq = sphere_prequant(k, n);
        identity = identity.max(moment_identity_residual(&pq, &pq.samples(20, 5)));
    }
    outcome(
        closed < 1e-9 && endpoints && identity < 1e-6,
        format!("closed form {closed:.1e}, endpoints exact: {endpoints}, dΦ = ι ω {identity:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut at_half = 0.0f64;
    let mut off = f64::INFINITY;
    for (k, n, ell) in [(0, 2, 3), (-1, 2, 1), (1, 3, 5)] {
        let d = PrequantDescriptor::product(
            PrequantDescriptor::sphere(k, n),
            PrequantDescriptor::complex_plane(ell).unwrap(),
        );
        let half = ell as f64 / 2.0;
        at_half = at_half.max(descend_check(&restrict_to_levelset(&d, half).unwrap()));
        for shift in [-0.25, 0.25] {
            off = off.min(descend_check(
                &restrict_to_levelset(&d, half + shift).unwrap(),
            ));
        }
    }
    outcome(
        at_half < 1e-9 && off >= 0.24,
        format!("residual at ℓ/2 {at_half:.1e}, min at ℓ/2 ± 0.25 {off:.4}"),
    )
}

fn criterion_6() -> Outcome {
    let mut grid = true;
    for k in -2..=2 {
        for n in 1..=5 {
            let (p, m) = cut_parameters(k, n, 1).unwrap();
            grid &= (p.k, p.n, m.k, m.n) == (0, k + n, k, -k);
            grid &= p.omega + m.omega == n;
        }
    }
    let table = [
        ((0, 2, 3), (1, 1), (0, 1)),
        ((-1, 2, 1), (0, 1), (-1, 1)),
        ((1, 3, 5), (2, 2), (1, 1)),
    ];
    let mut general = true;
    let mut chart = 0.0f64;
    for ((k, n, ell), plus, minus) in table {
        let r = cut_sphere(k, n, ell).unwrap();
        let (p, m) = (r.cut_plus.unwrap(), r.cut_minus.unwrap());
        general &=
            r.admissible && (p.k, p.n) == plus && (m.k, m.n) == minus && p.omega + m.omega == n;
        chart = chart.max(verify_cut_chart_map(k, n, ell).unwrap());
    }
    outcome(
        grid && general && chart < 1e-5,
        format!("ℓ=1 grid: {grid}, general table: {general}, chart map {chart:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut sphere_ok = 0;
    let mut total = 0;
    for j in -20i64..20 {
        let c = Rational64::new(j, 4);
        let expected = (c * 2).is_integer();
        total += 1;
        if is_prequantizable_sphere(j as f64 / 4.0) == expected {
            sphere_ok += 1;
        }
    }
    let mut cpn = true;
    for n in 1..=4u32 {
        for j in -4..=4 {
            let t = Rational64::new(j, 2);
            let expected = if n % 2 == 1 {
                t.is_integer()
            } else {
                !t.is_integer()
            };
            cpn &= classify_cpn(n, t) == expected;
        }
        cpn &= classify_cpn(n, Rational64::new(-(n as i64 + 1), 2));
    }
    outcome(
        sphere_ok == total && cpn,
        format!("sphere {sphere_ok}/{total} rationals, ℂPⁿ parity grid: {cpn}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut curvature = 0.0f64;
    for n in 1..=2usize {
        for _ in 0..20 {
            let (a, b) = (random_su(n + 1, &mut rng), random_su(n + 1, &mut rng));
            let exact = curvature_cpn(n, &a, &b).unwrap();
            curvature = curvature.max((exact - curvature_cpn_numeric(n, &a, &b).unwrap()).abs());
        }
    }
    let (mut real, mut det) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let a = random_unitary(1 + i % 3, &mut rng);
        let f = lift_f(&a).unwrap();
        real = real.max(lambda_c(&f).unwrap().max_abs_diff(&realify_matrix(&a)));
        det = det.max((det_map(&f) - a.determinant()).norm());
    }
    outcome(
        curvature < 1e-5 && real < 1e-8 && det < 1e-8,
        format!("curvature {curvature:.1e}, λ_c∘F {real:.1e}, det∘F {det:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("Clifford oracle equivalence", criterion_1),
        ("double cover", criterion_2),
        ("plane prequantization", criterion_3),
        ("sphere moment map", criterion_4),
        ("main theorem α = ℓ/2", criterion_5),
        ("cut formulas", criterion_6),
        ("prequantizability classifiers", criterion_7),
        ("ℂPⁿ curvature and lift", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        println!(
            "[{}] {} {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
