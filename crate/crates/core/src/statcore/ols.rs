//! Ordinary least squares with an implicit intercept, solved by Householder
//! QR on norm-equilibrated columns.

use crate::error::{Error, Result};

/// Relative tolerance below which a column counts as linearly dependent on
/// the columns before it.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Named regressor columns of equal length. The intercept is not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    rows: usize,
}

impl DesignMatrix {
    pub fn new(rows: usize) -> Self {
        DesignMatrix {
            names: Vec::new(),
            columns: Vec::new(),
            rows,
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let mut m = DesignMatrix::new(rows);
        for (name, col) in columns {
            m.push(name, col)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) -> Result<()> {
        if column.len() != self.rows {
            return Err(Error::LengthMismatch {
                left: self.rows,
                right: column.len(),
            });
        }
        if let Some(v) = column.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("design column", format!("non-finite value {v}")));
        }
        self.names.push(name.into());
        self.columns.push(column);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    pub coefficients: Vec<(String, f64)>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// 1 − SSE/SST; 0 when the target has no spread (see `degenerate_target`).
    pub r_squared: f64,
    pub degenerate_target: bool,
    pub n: usize,
    /// Rank of the design including the intercept column.
    pub rank: usize,
}

impl OlsFit {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.coefficients
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept
            + self
                .coefficients
                .iter()
                .zip(row)
                .map(|((_, b), x)| b * x)
                .sum::<f64>()
    }
}

pub const INTERCEPT: &str = "intercept";

/// Least-squares fit of `y` on the columns of `x` plus an intercept.
pub fn ols(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    let n = x.rows();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid("response", format!("non-finite value {v}")));
    }
    let p = x.columns().len() + 1;
    if n <= p {
        return Err(Error::InsufficientData(format!(
            "{n} rows for {} regressors plus intercept",
            p - 1
        )));
    }

    let names: Vec<&str> = std::iter::once(INTERCEPT)
        .chain(x.names().iter().map(String::as_str))
        .collect();

    // Column-major working copy, each column scaled to unit norm.
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(p);
    a.push(vec![1.0; n]);
    a.extend(x.columns().iter().cloned());
    let mut scale = vec![0.0; p];
    for (j, col) in a.iter_mut().enumerate() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::RankDeficient {
                columns: vec![names[j].to_owned()],
            });
        }
        col.iter_mut().for_each(|v| *v /= norm);
        scale[j] = norm;
    }

    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for j in 0..p {
        let tail_norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if tail_norm <= RANK_TOLERANCE {
            return Err(Error::RankDeficient {
                columns: collinear_group(&r, &a, j, &names),
            });
        }
        // Householder reflector v with H·a[j][j..] = alpha·e1.
        let alpha = if a[j][j] > 0.0 { -tail_norm } else { tail_norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let v_norm2 = v.iter().map(|x| x * x).sum::<f64>();
        let reflect = |col: &mut [f64]| {
            let dot = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>();
            let f = 2.0 * dot / v_norm2;
            col.iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        };
        for col in a.iter_mut().skip(j) {
            reflect(&mut col[j..]);
        }
        reflect(&mut qty[j..]);
        for (k, col) in a.iter().enumerate().skip(j) {
            r[j][k] = col[j];
        }
    }

    // Back substitution R·b = Qᵀy on the scaled problem.
    let mut b = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|k| r[i][k] * b[k]).sum();
        b[i] = (qty[i] - s) / r[i][i];
    }
    let beta: Vec<f64> = b.iter().zip(&scale).map(|(bi, s)| bi / s).collect();

    let intercept = beta[0];
    let coefficients: Vec<(String, f64)> = x
        .names()
        .iter()
        .cloned()
        .zip(beta[1..].iter().copied())
        .collect();
    let fitted: Vec<f64> = (0..n)
        .map(|i| {
            intercept
                + x.columns()
                    .iter()
                    .zip(&beta[1..])
                    .map(|(col, bj)| bj * col[i])
                    .sum::<f64>()
        })
        .collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();

    let mean_y = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let degenerate_target = y.iter().all(|v| *v == y[0]);
    let r_squared = if degenerate_target || sst == 0.0 {
        0.0
    } else {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    };

    Ok(OlsFit {
        intercept,
        coefficients,
        fitted,
        residuals,
        r_squared,
        degenerate_target,
        n,
        rank: p,
    })
}

// Column j lies in the span of columns 0..j. Recover its expansion in those
// columns from the partial factorization and name every column involved.
fn collinear_group(r: &[Vec<f64>], a: &[Vec<f64>], j: usize, names: &[&str]) -> Vec<String> {
    // a[j][..j] holds R[..j, j] after the first j reflections.
    let mut c = vec![0.0; j];
    for i in (0..j).rev() {
        let s: f64 = (i + 1..j).map(|k| r[i][k] * c[k]).sum();
        c[i] = (a[j][i] - s) / r[i][i];
    }
    let mut group: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, ci)| ci.abs() > 1e-8)
        .map(|(i, _)| names[i].to_owned())
        .collect();
    group.push(names[j].to_owned());
    group
}
