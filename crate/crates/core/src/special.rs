//! Small numerical helpers shared across modules: factorial logarithms,
//! Laguerre polynomials, exact-ish phase reduction.

use std::f64::consts::TAU;

/// High part of 2π as a double.
const TWO_PI_HI: f64 = TAU;
/// 2π − `TWO_PI_HI`.
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Table of ln(k!) for k = 0..=max.
#[derive(Debug, Clone)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for k in 1..=max {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LnFactorial { table }
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// ln C(n, k).
    #[inline]
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Laguerre polynomial L_m(x) by the three-term recurrence.
///
/// For x ≤ 0 every coefficient of the explicit sum is positive, so the
/// recurrence is stable there.
pub fn laguerre(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Kerr phase χt·n(n−1) reduced to [0, 2π).
///
/// n(n−1) is exact as a double up to 2^53; the product with χt is carried as
/// a two-term (hi, lo) expansion and reduced against a two-term 2π so the
/// residual phase error stays near one ulp of 2π even at n ≈ 512.
pub fn kerr_phase(n: usize, chi_t: f64) -> f64 {
    let count = (n * n.saturating_sub(1)) as f64;
    reduce_product(chi_t, count)
}

/// (a·b) mod 2π with `b` an exactly representable integer.
fn reduce_product(a: f64, b: f64) -> f64 {
    let hi = a * b;
    if hi == 0.0 {
        return 0.0;
    }
    let lo = a.mul_add(b, -hi);
    let k = (hi / TWO_PI_HI).floor();
    let r = (-k).mul_add(TWO_PI_HI, hi) + lo - k * TWO_PI_LO;
    let r = r.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Uniform table of e^{−2πik/T}, k = 0..T, with the second half set to the
/// exact negation of the first half when T is even.
pub fn roots_of_unity_conj(count: usize) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64;
    let mut roots = vec![Complex64::new(0.0, 0.0); count];
    if count.is_multiple_of(2) {
        let half = count / 2;
        for k in 0..half {
            let angle = TAU * k as f64 / count as f64;
            let z = Complex64::new(angle.cos(), -angle.sin());
            roots[k] = z;
            roots[k + half] = -z;
        }
    } else {
        for (k, slot) in roots.iter_mut().enumerate() {
            let angle = TAU * k as f64 / count as f64;
            *slot = Complex64::new(angle.cos(), -angle.sin());
        }
    }
    roots
}
