//! Small dense symmetric solvers: Cholesky, partial-pivot LU log-determinant
//! and a two-sided spectral condition estimate.

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_diagonal(&self, shift: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += shift;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }
}

/// Lower factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// `None` when a pivot is not strictly positive.
    pub fn factor(a: &Matrix) -> Option<Self> {
        let n = a.dim();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l.set(j, j, djj);
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / djj);
            }
        }
        Some(Cholesky { l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.l.get(i, k) * y[k];
            }
            y[i] /= self.l.get(i, i);
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.l.get(k, i) * y[k];
            }
            y[i] /= self.l.get(i, i);
        }
        y
    }

    pub fn log_det(&self) -> f64 {
        (0..self.l.dim()).map(|i| 2.0 * self.l.get(i, i).ln()).sum()
    }
}

/// `(sign, ln |det A|)` by Gaussian elimination with partial pivoting.
/// Sign is 0 for an exactly singular matrix.
pub fn lu_log_det(a: &Matrix) -> (f64, f64) {
    let n = a.dim();
    let mut m = a.clone();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m.get(x, col).abs().total_cmp(&m.get(y, col).abs()))
            .unwrap_or(col);
        let p = m.get(pivot, col);
        if p == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if pivot != col {
            for j in 0..n {
                let t = m.get(col, j);
                m.set(col, j, m.get(pivot, j));
                m.set(pivot, j, t);
            }
            sign = -sign;
        }
        if p < 0.0 {
            sign = -sign;
        }
        log_abs += p.abs().ln();
        for i in col + 1..n {
            let factor = m.get(i, col) / p;
            if factor != 0.0 {
                for j in col..n {
                    m.set(i, j, m.get(i, j) - factor * m.get(col, j));
                }
            }
        }
    }
    (sign, log_abs)
}

const SPECTRAL_ITERATIONS: usize = 200;

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// `lambda_max / lambda_min` estimated by power iteration on `A` and on
/// `A^{-1}` (through the Cholesky factor). Deterministic start vector.
pub fn condition_estimate(a: &Matrix, chol: &Cholesky) -> f64 {
    let n = a.dim();
    if n == 0 {
        return 1.0;
    }
    let start: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.618_033_988_749_895).fract()).collect();

    let mut v = start.clone();
    normalize(&mut v);
    let mut lambda_max = 0.0;
    for _ in 0..SPECTRAL_ITERATIONS {
        let mut w = a.mul_vec(&v);
        lambda_max = normalize(&mut w);
        v = w;
    }

    let mut v = start;
    normalize(&mut v);
    let mut inv_min = 0.0;
    for _ in 0..SPECTRAL_ITERATIONS {
        let mut w = chol.solve(&v);
        inv_min = normalize(&mut w);
        v = w;
    }
    lambda_max * inv_min
}
