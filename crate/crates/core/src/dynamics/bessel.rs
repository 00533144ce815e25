//! Bessel functions J_n(x) of integer order for the Chebyshev propagator.

/// J_0(x), …, J_{n_max}(x) by Miller's backward recurrence, normalized with
/// J_0 + 2 Σ_k J_{2k} = 1. Valid for x ≥ 0.
pub fn bessel_j_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = (n_max.max(x as usize) + 30 + (2.0 * x.sqrt()) as usize * 4) | 1;
    let mut next = 0.0f64; // J_{n+1}
    let mut cur = 1e-300f64; // J_n
    let mut norm = 0.0;
    for n in (1..=start).rev() {
        let prev = 2.0 * n as f64 / x * cur - next; // J_{n-1}
        next = cur;
        cur = prev;
        let m = n - 1;
        if m <= n_max {
            out[m] = cur;
        }
        if m % 2 == 0 && m > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            // rescale to avoid overflow
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
