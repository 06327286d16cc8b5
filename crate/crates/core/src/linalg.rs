//! Complex least squares by Householder QR with column pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `A P = Q R` for a tall complex matrix stored column-major.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// Upper triangle holds R; the reflectors are kept separately.
    r: Vec<Complex64>,
    reflectors: Vec<Vec<Complex64>>,
    betas: Vec<f64>,
    perm: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl PivotedQr {
    pub fn factor(a: &[Complex64], rows: usize, cols: usize) -> Self {
        assert_eq!(a.len(), rows * cols);
        assert!(rows >= cols);
        let mut r = a.to_vec();
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut norms: Vec<f64> = (0..cols)
            .map(|j| r[j * rows..(j + 1) * rows].iter().map(|v| v.norm_sqr()).sum())
            .collect();
        let mut reference = norms.clone();
        let mut reflectors = Vec::with_capacity(cols);
        let mut betas = Vec::with_capacity(cols);

        for k in 0..cols {
            let pivot = (k..cols)
                .max_by(|&x, &y| norms[x].total_cmp(&norms[y]))
                .unwrap_or(k);
            if pivot != k {
                for i in 0..rows {
                    r.swap(k * rows + i, pivot * rows + i);
                }
                perm.swap(k, pivot);
                norms.swap(k, pivot);
                reference.swap(k, pivot);
            }

            let col = &r[k * rows + k..(k + 1) * rows];
            let xnorm = col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let mut v = col.to_vec();
            let beta;
            if xnorm == 0.0 {
                beta = 0.0;
            } else {
                let phase = if v[0].norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    v[0] / v[0].norm()
                };
                let alpha = -phase * xnorm;
                v[0] -= alpha;
                let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
                beta = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };
                r[k * rows + k] = alpha;
                for i in k + 1..rows {
                    r[k * rows + i] = ZERO;
                }
            }

            for j in k + 1..cols {
                let cj = &mut r[j * rows + k..(j + 1) * rows];
                if beta != 0.0 {
                    let s: Complex64 = v.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
                    let s = s * beta;
                    for (c, &vi) in cj.iter_mut().zip(&v) {
                        *c -= vi * s;
                    }
                }
                norms[j] -= cj[0].norm_sqr();
                if norms[j] <= 1e-8 * reference[j] {
                    norms[j] = cj[1..].iter().map(|x| x.norm_sqr()).sum();
                    reference[j] = norms[j];
                }
            }
            reflectors.push(v);
            betas.push(beta);
        }

        Self {
            r,
            reflectors,
            betas,
            perm,
            rows,
            cols,
        }
    }

    /// `|R_kk|` in pivot order.
    pub fn diagonal_magnitudes(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|k| self.r[k * self.rows + k].norm())
            .collect()
    }

    /// Smallest over largest pivot magnitude.
    pub fn pivot_ratio(&self) -> f64 {
        let d = self.diagonal_magnitudes();
        match (d.first(), d.last()) {
            (Some(&first), Some(&last)) if first > 0.0 => last / first,
            (Some(_), Some(_)) => 0.0,
            _ => 1.0,
        }
    }

    /// `Qᴴ b`.
    pub fn apply_qh(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.rows);
        let mut y = b.to_vec();
        for (k, (v, &beta)) in self.reflectors.iter().zip(&self.betas).enumerate() {
            if beta == 0.0 {
                continue;
            }
            let tail = &mut y[k..];
            let s: Complex64 = v.iter().zip(tail.iter()).map(|(a, b)| a.conj() * b).sum();
            let s = s * beta;
            for (t, &vi) in tail.iter_mut().zip(v) {
                *t -= vi * s;
            }
        }
        y
    }

    /// Minimizer of `‖A x - b‖₂`. Fails when the pivot ratio drops below
    /// `rank_tol`.
    pub fn solve_least_squares(&self, b: &[Complex64], rank_tol: f64) -> Result<Vec<Complex64>> {
        let ratio = self.pivot_ratio();
        if !(ratio >= rank_tol) {
            return Err(Error::RankDeficient(ratio));
        }
        let y = self.apply_qh(b);
        let n = self.cols;
        let mut z = vec![ZERO; n];
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..n {
                s -= self.r[j * self.rows + k] * z[j];
            }
            z[k] = s / self.r[k * self.rows + k];
        }
        let mut x = vec![ZERO; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_square_system() {
        // column-major 2x2: [[1, 2i], [3, 4]]
        let a = vec![c(1.0, 0.0), c(3.0, 0.0), c(0.0, 2.0), c(4.0, 0.0)];
        let x_true = vec![c(0.5, -1.0), c(2.0, 0.25)];
        let b = vec![
            a[0] * x_true[0] + a[2] * x_true[1],
            a[1] * x_true[0] + a[3] * x_true[1],
        ];
        let qr = PivotedQr::factor(&a, 2, 2);
        let x = qr.solve_least_squares(&b, 1e-10).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn overdetermined_line_fit() {
        // fit y = p + q t in least squares; exact data
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let mut a = vec![c(1.0, 0.0); 10];
        a.extend(t.iter().map(|&v| c(v, 0.0)));
        let b: Vec<Complex64> = t.iter().map(|&v| c(2.0 - 0.5 * v, v)).collect();
        let qr = PivotedQr::factor(&a, 10, 2);
        let x = qr.solve_least_squares(&b, 1e-10).unwrap();
        assert!((x[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(-0.5, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn detects_rank_deficiency() {
        let col = vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)];
        let mut a = col.clone();
        a.extend(col.iter().map(|v| v * 3.0));
        let qr = PivotedQr::factor(&a, 3, 2);
        assert!(matches!(
            qr.solve_least_squares(&[c(1.0, 0.0); 3], 1e-10),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn pivoting_orders_diagonal() {
        let a = vec![
            c(0.1, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(5.0, 0.0),
            c(1.0, 0.0),
        ];
        let qr = PivotedQr::factor(&a, 3, 2);
        let d = qr.diagonal_magnitudes();
        assert!(d[0] >= d[1]);
    }
}
