//! Dense least squares via Householder QR.
//!
//! Both fitting paths in this crate (the Mellin tail model and the residue
//! polynomial) are small and ill-conditioned enough that normal equations
//! would lose half the available digits; orthogonal factorization keeps the
//! conditioning of the design matrix itself.

/// Solution of `min ||A c - y||_2` together with the attained residual norm.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coeffs: Vec<f64>,
    /// Euclidean norm of the residual `A c - y`.
    pub residual: f64,
}

/// Solves the overdetermined system whose rows are `rows` and right-hand side
/// is `rhs`. Requires `rows.len() >= rows[0].len()` and uniform row length.
///
/// Rank-deficient columns get coefficient zero rather than a failure; the
/// residual norm still reports the true misfit, which is what callers gate on.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> LeastSquares {
    let m = rows.len();
    assert!(m > 0, "empty design matrix");
    let n = rows[0].len();
    assert!(m >= n, "underdetermined system: {m} rows, {n} columns");
    assert_eq!(rhs.len(), m, "rhs length mismatch");
    assert!(
        rows.iter().all(|r| r.len() == n),
        "ragged design matrix"
    );

    let mut a: Vec<f64> = Vec::with_capacity(m * n);
    for row in rows {
        a.extend_from_slice(row);
    }
    let mut b = rhs.to_vec();
    let mut rdiag = vec![0.0f64; n];

    for k in 0..n {
        let mut norm = 0.0f64;
        for i in k..m {
            norm = norm.hypot(a[i * n + k]);
        }
        if norm == 0.0 {
            rdiag[k] = 0.0;
            continue;
        }
        let alpha = if a[k * n + k] > 0.0 { -norm } else { norm };
        a[k * n + k] -= alpha;
        let vnorm2: f64 = (k..m).map(|i| a[i * n + k] * a[i * n + k]).sum();
        for j in (k + 1)..n {
            let dot: f64 = (k..m).map(|i| a[i * n + k] * a[i * n + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                a[i * n + j] -= f * a[i * n + k];
            }
        }
        let dot: f64 = (k..m).map(|i| a[i * n + k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            b[i] -= f * a[i * n + k];
        }
        rdiag[k] = alpha;
    }

    let mut coeffs = vec![0.0f64; n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc -= a[k * n + j] * coeffs[j];
        }
        coeffs[k] = if rdiag[k] != 0.0 { acc / rdiag[k] } else { 0.0 };
    }

    let residual = b[n..m].iter().map(|v| v * v).sum::<f64>().sqrt();
    LeastSquares { coeffs, residual }
}
