//! Dense symmetric eigensolvers: cyclic Jacobi sweeps for small matrices and
//! Householder tridiagonalization with implicit-shift QL for larger ones.
//! Eigenvalues only; callers at desk scale never need the vectors.

use crate::error::{Error, Result};

/// Size at which the solver switches from Jacobi sweeps to tridiagonal QL.
const JACOBI_CUTOFF: usize = 128;
/// Off-diagonal Frobenius tolerance, relative to the matrix norm.
pub const JACOBI_TOL: f64 = 1e-13;

fn check_square(mat: &[f64], n: usize) -> Result<()> {
    if mat.len() != n * n {
        return Err(Error::Dimension {
            expected: n * n,
            got: mat.len(),
        });
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(mat: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if n <= JACOBI_CUTOFF {
        jacobi_eigenvalues(mat, n, JACOBI_TOL)
    } else {
        tridiagonal_ql_eigenvalues(mat, n)
    }
}

/// Cyclic Jacobi rotations on the upper triangle until the off-diagonal
/// Frobenius norm falls below tol * ||A||_F.
pub fn jacobi_eigenvalues(mut mat: Vec<f64>, n: usize, tol: f64) -> Result<Vec<f64>> {
    check_square(&mat, n)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let fro: f64 = mat.iter().map(|v| v * v).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let idx = |i: usize, j: usize| i * n + j;
    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[idx(i, j)] * m[idx(i, j)];
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0usize;
    while off(&mat) > tol * fro {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Degenerate(
                "Jacobi sweeps failed to converge".into(),
            ));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = mat[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = mat[idx(p, p)];
                let aqq = mat[idx(q, q)];
                // Negligible relative to the diagonal: flush to zero.
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    mat[idx(p, q)] = 0.0;
                    mat[idx(q, p)] = 0.0;
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for j in 0..n {
                    let ajp = mat[idx(j, p)];
                    let ajq = mat[idx(j, q)];
                    mat[idx(j, p)] = c * ajp - s * ajq;
                    mat[idx(j, q)] = s * ajp + c * ajq;
                }
                for j in 0..n {
                    let apj = mat[idx(p, j)];
                    let aqj = mat[idx(q, j)];
                    mat[idx(p, j)] = c * apj - s * aqj;
                    mat[idx(q, j)] = s * apj + c * aqj;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| mat[idx(i, i)]).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

fn pythag(a: f64, b: f64) -> f64 {
    let (aa, ab) = (a.abs(), b.abs());
    if aa > ab {
        let r = ab / aa;
        aa * (1.0 + r * r).sqrt()
    } else if ab > 0.0 {
        let r = aa / ab;
        ab * (1.0 + r * r).sqrt()
    } else {
        0.0
    }
}

/// Householder reduction to tridiagonal form followed by implicit-shift QL.
pub fn tridiagonal_ql_eigenvalues(mut mat: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    check_square(&mat, n)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tridiagonalize(&mut mat, n, &mut e);
    for i in 0..n {
        d[i] = mat[i * n + i];
    }
    ql_implicit(&mut d, &mut e, n)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

fn tridiagonalize(a: &mut [f64], n: usize, e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0f64;
        if l > 0 {
            let mut scale = 0.0f64;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    let mut g2 = 0.0f64;
                    for k in 0..=j {
                        g2 += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g2 += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g2 / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let fj = a[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        a[j * n + k] -= fj * e[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    e[0] = 0.0;
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Degenerate("QL iteration failed to converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            let sign_r = if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym_from(rows: &[&[f64]]) -> (Vec<f64>, usize) {
        let n = rows.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = rows[i][j];
            }
        }
        (m, n)
    }

    #[test]
    fn diagonal_matrix() {
        let (m, n) = sym_from(&[&[3.0, 0.0], &[0.0, -1.0]]);
        let v = jacobi_eigenvalues(m.clone(), n, JACOBI_TOL).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        let w = tridiagonal_ql_eigenvalues(m, n).unwrap();
        assert!((w[0] + 1.0).abs() < 1e-13 && (w[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn two_by_two_analytic() {
        // [[2/3, x],[x, 0]] with x = 1/sqrt(3): eigenvalues 1 and -1/3.
        let x = 1.0 / 3.0_f64.sqrt();
        let (m, n) = sym_from(&[&[2.0 / 3.0, x], &[x, 0.0]]);
        let v = jacobi_eigenvalues(m, n, JACOBI_TOL).unwrap();
        assert!((v[0] + 1.0 / 3.0).abs() < 1e-13);
        assert!((v[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_and_ql_agree_on_random() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 24;
        let mut m = vec![0.0f64; n * n];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in i..n {
                let v = next();
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        let a = jacobi_eigenvalues(m.clone(), n, JACOBI_TOL).unwrap();
        let b = tridiagonal_ql_eigenvalues(m.clone(), n).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-11, "jacobi {x} vs ql {y}");
        }
        // Trace preserved.
        let tr: f64 = (0..n).map(|i| m[i * n + i]).sum();
        let sum: f64 = a.iter().sum();
        assert!((tr - sum).abs() < 1e-10);
    }

    #[test]
    fn walk_matrix_of_k4() {
        // K_4 normalized adjacency: spectrum {1, -1/3, -1/3, -1/3}.
        let n = 4;
        let mut m = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i * n + j] = 1.0 / 3.0;
                }
            }
        }
        for vals in [
            jacobi_eigenvalues(m.clone(), n, JACOBI_TOL).unwrap(),
            tridiagonal_ql_eigenvalues(m, n).unwrap(),
        ] {
            assert!((vals[3] - 1.0).abs() < 1e-13);
            for v in &vals[..3] {
                assert!((v + 1.0 / 3.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn dimension_check() {
        assert!(jacobi_eigenvalues(vec![1.0, 2.0], 2, JACOBI_TOL).is_err());
    }
}
