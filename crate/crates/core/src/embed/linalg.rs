//! Small dense helpers; matrices are row-major `Vec<f64>`.

/// Solves `A x = b` for symmetric positive definite `A` (n × n) by Cholesky.
/// Returns `None` if `A` is not numerically positive definite.
pub fn solve_spd(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    Some(x)
}

/// Numerical rank by Gaussian elimination with full pivoting; pivots below
/// `rel_tol` times the first (largest) pivot count as zero.
pub fn rank(m: &[f64], rows: usize, cols: usize, rel_tol: f64) -> usize {
    let mut a = m.to_vec();
    let mut r = 0;
    let mut first = 0.0;
    while r < rows.min(cols) {
        let (mut pi, mut pj, mut best) = (r, r, 0.0f64);
        for i in r..rows {
            for j in r..cols {
                let v = a[i * cols + j].abs();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if r == 0 {
            first = best;
        }
        if best == 0.0 || best <= rel_tol * first {
            break;
        }
        for j in 0..cols {
            a.swap(r * cols + j, pi * cols + j);
        }
        for i in 0..rows {
            a.swap(i * cols + r, i * cols + pj);
        }
        let p = a[r * cols + r];
        for i in r + 1..rows {
            let f = a[i * cols + r] / p;
            if f != 0.0 {
                for j in r..cols {
                    a[i * cols + j] -= f * a[r * cols + j];
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_solve() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let x = solve_spd(&a, 2, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(solve_spd(&[0.0], 1, &[1.0]).is_none());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[1.0, 2.0, 2.0, 4.0], 2, 2, 1e-8), 1);
        assert_eq!(rank(&[1.0, 0.0, 0.0, 1.0, 1.0, 1.0], 3, 2, 1e-8), 2);
        assert_eq!(rank(&[0.0; 6], 2, 3, 1e-8), 0);
    }
}
