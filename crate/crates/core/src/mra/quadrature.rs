//! Composite Newton–Cotes rules on uniform grids.

/// Composite Simpson weights for `n` equally spaced samples of spacing `h`.
///
/// An even sample count closes the last four points with the 3/8 rule, so
/// every n ≥ 2 is accepted (n = 2 degrades to the trapezoid).
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    match n {
        0 | 1 => return w,
        2 => {
            w[0] = h / 2.0;
            w[1] = h / 2.0;
            return w;
        }
        3 => {
            w[0] = h / 3.0;
            w[1] = 4.0 * h / 3.0;
            w[2] = h / 3.0;
            return w;
        }
        _ => {}
    }
    let simpson_len = if n % 2 == 1 { n } else { n - 3 };
    for i in 0..simpson_len * usize::from(simpson_len >= 3) {
        let c = if i == 0 || i == simpson_len - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        w[i] += c * h / 3.0;
    }
    if simpson_len < n {
        let b = simpson_len - 1;
        let c = 3.0 * h / 8.0;
        w[b] += c;
        w[b + 1] += 3.0 * c;
        w[b + 2] += 3.0 * c;
        w[b + 3] += c;
    }
    w
}

pub fn simpson(values: &[f64], h: f64) -> f64 {
    simpson_weights(values.len(), h)
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// Simpson integral of `f` over [a, b] with at least `n` intervals.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let vals: Vec<f64> = (0..=n).map(|j| f(a + j as f64 * h)).collect();
    simpson(&vals, h)
}
