//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `J_n(x)` by the ascending series summed in exact rational arithmetic.
pub fn bessel_j_oracle(x: f64, order: u32) -> f64 {
    bessel_series_oracle(x, order, true)
}

/// `I_n(x)` by the same series without alternating signs.
pub fn bessel_i_oracle(x: f64, order: u32) -> f64 {
    bessel_series_oracle(x, order, false)
}

fn bessel_series_oracle(x: f64, order: u32, alternating: bool) -> f64 {
    let half = BigRational::from_float(x).expect("finite argument") / BigRational::from_integer(BigInt::from(2));
    let q = &half * &half;
    let mut term = if order == 0 { BigRational::one() } else { half.clone() };
    let mut sum = term.clone();
    let cutoff = BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
    let mut k: u64 = 1;
    loop {
        let denom = BigInt::from(k) * BigInt::from(k + u64::from(order));
        term = term * &q / BigRational::from_integer(denom);
        if alternating {
            term = -term;
        }
        sum += &term;
        if (k as f64) > x && term.abs() < cutoff {
            break;
        }
        k += 1;
    }
    if sum.is_zero() {
        0.0
    } else {
        sum.to_f64().expect("representable")
    }
}

/// Deterministic pseudo-random stream in `[-0.5, 0.5)` for test data.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let d = m[c][c];
        assert!(d != 0.0, "singular oracle matrix");
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for k in 0..2 * n {
                        m[r][k] -= f * m[c][k];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(p, row)| p * row[j]).sum()).collect())
        .collect()
}

/// Five-point Laplacian of `f` at `(x, y)`.
pub fn fd_laplacian(f: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h)
}
