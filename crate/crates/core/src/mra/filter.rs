//! Two-channel filter banks (lowpass h, highpass h1).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

/// A finitely supported integer-indexed real sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub start: i32,
    pub coeffs: Vec<f64>,
}

impl Sequence {
    pub fn new(start: i32, coeffs: Vec<f64>) -> Self {
        Sequence { start, coeffs }
    }

    pub fn get(&self, n: i32) -> f64 {
        let j = n - self.start;
        if j < 0 || j as usize >= self.coeffs.len() {
            0.0
        } else {
            self.coeffs[j as usize]
        }
    }

    /// Inclusive index range [n_min, n_max]; empty sequences report (start, start-1).
    pub fn support(&self) -> (i32, i32) {
        (self.start, self.start + self.coeffs.len() as i32 - 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, &c)| (self.start + j as i32, c))
    }

    /// Symbol (1/√2) Σ_n c(n) e^{-inξ}.
    pub fn symbol(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.iter() {
            acc += c * Complex64::from_polar(1.0, -(n as f64) * xi);
        }
        acc * FRAC_1_SQRT_2
    }
}

/// h1(n) = (−1)^n h(1−n) over the reflected support.
pub fn derive_highpass(h: &Sequence) -> Sequence {
    let (lo, hi) = h.support();
    let start = 1 - hi;
    let coeffs = (start..=1 - lo)
        .map(|n| {
            let v = h.get(1 - n);
            if n.rem_euclid(2) == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Sequence::new(start, coeffs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    pub h: Sequence,
    pub h1: Sequence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterReport {
    pub even_sum_err: f64,
    pub odd_sum_err: f64,
    pub max_orthogonality_err: f64,
}

impl FilterReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.even_sum_err < tol && self.odd_sum_err < tol && self.max_orthogonality_err < tol
    }
}

impl FilterBank {
    pub fn from_lowpass(h: Sequence) -> Self {
        let h1 = derive_highpass(&h);
        FilterBank { h, h1 }
    }

    pub fn support(&self) -> (i32, i32) {
        self.h.support()
    }

    pub fn check(&self) -> FilterReport {
        check_filter_conditions(&self.h)
    }
}

pub fn check_filter_conditions(h: &Sequence) -> FilterReport {
    let mut even = 0.0;
    let mut odd = 0.0;
    for (n, c) in h.iter() {
        if n.rem_euclid(2) == 0 {
            even += c;
        } else {
            odd += c;
        }
    }
    let len = h.coeffs.len() as i32;
    let mut max_orth: f64 = 0.0;
    for k in -(len / 2 + 1)..=(len / 2 + 1) {
        let mut acc = 0.0;
        for (n, c) in h.iter() {
            acc += c * h.get(n - 2 * k);
        }
        let target = if k == 0 { 1.0 } else { 0.0 };
        max_orth = max_orth.max((acc - target).abs());
    }
    FilterReport {
        even_sum_err: (even - FRAC_1_SQRT_2).abs(),
        odd_sum_err: (odd - FRAC_1_SQRT_2).abs(),
        max_orthogonality_err: max_orth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn haar() -> Sequence {
        Sequence::new(0, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2])
    }

    #[test]
    fn haar_highpass() {
        let h1 = derive_highpass(&haar());
        assert_eq!(h1.get(0), FRAC_1_SQRT_2);
        assert_eq!(h1.get(1), -FRAC_1_SQRT_2);
        assert_eq!(h1.support(), (0, 1));
    }

    #[test]
    fn haar_residuals_zero() {
        let r = check_filter_conditions(&haar());
        assert_eq!(r.even_sum_err, 0.0);
        assert_eq!(r.odd_sum_err, 0.0);
        assert!(r.max_orthogonality_err < 1e-15);
    }

    #[test]
    fn zero_filter_zero_highpass() {
        let h1 = derive_highpass(&Sequence::new(0, vec![0.0; 6]));
        assert!(h1.coeffs.iter().all(|&c| c == 0.0));
    }
}
