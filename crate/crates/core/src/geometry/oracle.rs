//! Finite-difference curvature built only from numeric metric values.
//!
//! Nothing here touches symbolic differentiation, which makes it an
//! independent check on [`super::christoffel`] and [`super::riemann`].

use super::metric::{inverse, Metric};
use super::GeometryError;
use crate::symcore::{central_difference, fd_step, Binding, Expr};

/// Outer step for derivatives of the finite-difference connection. Larger
/// than the inner step so that inner roundoff (about 1e-12) is not
/// amplified past the comparison tolerance.
pub const OUTER_STEP: f64 = 5e-4;

/// Metric with realized entries, evaluated by plain arithmetic.
pub struct NumericMetric {
    entries: [[Expr; 3]; 3],
    base: Binding<f64>,
    coords: [String; 3],
}

impl NumericMetric {
    pub fn new(g: &Metric) -> NumericMetric {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| g.realized(i, j)));
        NumericMetric {
            entries,
            base: g.binding_at(&[0.0, 0.0, 0.0]),
            coords: g.chart().coords().clone(),
        }
    }

    fn binding(&self, p: &[f64; 3]) -> Binding<f64> {
        let mut b = self.base.clone();
        for (c, v) in self.coords.iter().zip(p) {
            b.set(c, *v);
        }
        b
    }

    pub fn value(&self, i: usize, j: usize, p: &[f64; 3]) -> Result<f64, GeometryError> {
        Ok(self.entries[i][j].evaluate(&self.binding(p))?)
    }

    pub fn matrix(&self, p: &[f64; 3]) -> Result<[[f64; 3]; 3], GeometryError> {
        let b = self.binding(p);
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.entries[i][j].evaluate(&b)?;
            }
        }
        Ok(out)
    }

    /// ∂_n g_ij by the five-point stencil.
    pub fn derivative(&self, i: usize, j: usize, n: usize, p: &[f64; 3]) -> Result<f64, GeometryError> {
        let mut q = *p;
        central_difference(
            |x| {
                q[n] = x;
                self.value(i, j, &q)
            },
            p[n],
            fd_step(p[n]),
        )
    }

    /// Γ^i_jk at `p`, index order `[i][j][k]`.
    pub fn christoffel(&self, p: &[f64; 3]) -> Result<[[[f64; 3]; 3]; 3], GeometryError> {
        let g = self.matrix(p)?;
        let inv = inverse(&g).ok_or(GeometryError::Singular)?;
        let mut dg = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                for n in 0..3 {
                    let d = self.derivative(i, j, n, p)?;
                    dg[i][j][n] = d;
                    dg[j][i][n] = d;
                }
            }
        }
        let mut out = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j][k] = 0.5
                        * (0..3)
                            .map(|l| inv[i][l] * (dg[l][k][j] + dg[j][l][k] - dg[j][k][l]))
                            .sum::<f64>();
                }
            }
        }
        Ok(out)
    }

    /// Fully covariant R_ijkl at `p`, flattened as `27i + 9j + 3k + l`.
    pub fn riemann(&self, p: &[f64; 3]) -> Result<Vec<f64>, GeometryError> {
        let gamma = self.christoffel(p)?;
        // dgamma[n] = ∂_n Γ
        let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
        for n in 0..3 {
            let h = OUTER_STEP * p[n].abs().max(1.0);
            let mut stencil = Vec::with_capacity(4);
            for off in [2.0, 1.0, -1.0, -2.0] {
                let mut q = *p;
                q[n] += off * h;
                stencil.push(self.christoffel(&q)?);
            }
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        dgamma[n][i][j][k] = (-stencil[0][i][j][k] + 8.0 * stencil[1][i][j][k]
                            - 8.0 * stencil[2][i][j][k]
                            + stencil[3][i][j][k])
                            / (12.0 * h);
                    }
                }
            }
        }
        let g = self.matrix(p)?;
        let mut upper = vec![0.0; 81];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut v = dgamma[k][i][j][l] - dgamma[l][i][j][k];
                        for m in 0..3 {
                            v += gamma[i][k][m] * gamma[m][j][l] - gamma[i][l][m] * gamma[m][j][k];
                        }
                        upper[27 * i + 9 * j + 3 * k + l] = v;
                    }
                }
            }
        }
        let mut lowered = vec![0.0; 81];
        for i in 0..3 {
            for rest in 0..27 {
                lowered[27 * i + rest] = (0..3).map(|m| g[i][m] * upper[27 * m + rest]).sum();
            }
        }
        Ok(lowered)
    }
}
