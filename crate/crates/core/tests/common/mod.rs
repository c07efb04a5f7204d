//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own product code.

#![allow(dead_code)]

/// Product of two basis blades by writing both as generator words,
/// bubble-sorting the concatenation and cancelling equal neighbours with
/// `e_i e_i = −1`. Returns `(sign, mask)`.
pub fn oracle_blade_product(a: u32, b: u32) -> (i8, u32) {
    let word = |m: u32| {
        (0..32)
            .filter(move |i| m >> i & 1 == 1)
            .collect::<Vec<u32>>()
    };
    let mut w: Vec<u32> = word(a).into_iter().chain(word(b)).collect();
    let mut sign = 1i8;
    // bubble sort; each adjacent swap of distinct generators anticommutes
    for end in (1..w.len()).rev() {
        for i in 0..end {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
            }
        }
    }
    let mut out: Vec<u32> = Vec::new();
    for g in w {
        if out.last() == Some(&g) {
            out.pop();
            sign = -sign;
        } else {
            out.push(g);
        }
    }
    (sign, out.iter().fold(0, |m, g| m | 1 << g))
}

/// Dense product of two coefficient vectors over the oracle.
pub fn oracle_product(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for (a, xa) in x.iter().enumerate() {
        if *xa == 0.0 {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            let (s, m) = oracle_blade_product(a as u32, b as u32);
            out[m as usize] += s as f64 * xa * yb;
        }
    }
    out
}

/// `(−1)^{g(g−1)/2}` on each grade-`g` blade.
pub fn oracle_transpose(x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(m, c)| {
            let g = (m as u32).count_ones();
            if (g * g.wrapping_sub(1) / 2).is_multiple_of(2) {
                *c
            } else {
                -*c
            }
        })
        .collect()
}

/// Rotation matrix of `y ↦ x y xᵗ` computed with the oracle product.
pub fn oracle_lambda(dim: usize, x: &[f64]) -> Vec<Vec<f64>> {
    let xt = oracle_transpose(x);
    let mut cols = Vec::new();
    for j in 0..dim {
        let mut e = vec![0.0; 1 << dim];
        e[1 << j] = 1.0;
        let img = oracle_product(&oracle_product(x, &e), &xt);
        cols.push((0..dim).map(|i| img[1 << i]).collect::<Vec<f64>>());
    }
    // row-major
    (0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i]).collect())
        .collect()
}
