use serde::Serialize;

use super::metric::{Chart, Metric};
use super::GeometryError;
use crate::scalar::Scalar;
use crate::symcore::Expr;

/// Symbolic Γ^i_jk. Stored in full; symmetry in (j, k) holds because
/// only `j <= k` is computed and mirrored.
#[derive(Debug, Clone)]
pub struct Christoffel {
    gamma: Vec<Expr>,
}

fn idx3(i: usize, j: usize, k: usize) -> usize {
    9 * i + 3 * j + k
}

fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    27 * i + 9 * j + 3 * k + l
}

impl Christoffel {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.gamma[idx3(i, j, k)]
    }

    /// Components that do not simplify to zero, labelled like `G^r_th th`.
    pub fn nonzero(&self) -> Vec<(String, &Expr)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for k in j..3 {
                    let g = self.get(i, j, k);
                    if !g.is_zero() {
                        out.push((
                            format!("G^{}_{}{}", Chart::label(i), Chart::label(j), Chart::label(k)),
                            g,
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Symbolic inverse metric. Diagonal metrics invert entrywise; otherwise the
/// adjugate over the symbolic determinant is used.
fn inverse_metric(g: &Metric) -> Result<[[Expr; 3]; 3], GeometryError> {
    let zero = Expr::zero;
    if g.is_diagonal() {
        let mut inv = [
            [zero(), zero(), zero()],
            [zero(), zero(), zero()],
            [zero(), zero(), zero()],
        ];
        for (i, row) in inv.iter_mut().enumerate() {
            let d = g.g(i, i).simplify();
            if d.is_zero() {
                return Err(GeometryError::ZeroDiagonal(i));
            }
            row[i] = Expr::div(Expr::one(), d).simplify();
        }
        return Ok(inv);
    }
    let e = |i: usize, j: usize| g.g(i, j).clone();
    let det = (e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)))
    .simplify();
    if det.is_zero() || det.expand().is_zero() {
        return Err(GeometryError::Singular);
    }
    let mut inv = [
        [zero(), zero(), zero()],
        [zero(), zero(), zero()],
        [zero(), zero(), zero()],
    ];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            let cof = e(a, c) * e(b, d) - e(a, d) * e(b, c);
            *cell = Expr::div(cof, det.clone()).simplify();
        }
    }
    Ok(inv)
}

/// Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_jl − ∂_l g_jk).
pub fn christoffel(g: &Metric) -> Result<Christoffel, GeometryError> {
    let inv = inverse_metric(g)?;
    let coords = g.chart().coords().clone();
    // dg[l][m][n] = ∂_n g_lm
    let dg: Vec<Vec<Vec<Expr>>> = (0..3)
        .map(|l| {
            (0..3)
                .map(|m| coords.iter().map(|c| g.g(l, m).differentiate(c)).collect())
                .collect()
        })
        .collect();
    let mut gamma = vec![Expr::zero(); 27];
    for i in 0..3 {
        for j in 0..3 {
            for k in j..3 {
                let mut terms = Vec::new();
                for l in 0..3 {
                    if inv[i][l].is_zero() {
                        continue;
                    }
                    let bracket = &dg[l][k][j] + &dg[j][l][k] - &dg[j][k][l];
                    terms.push(Expr::ratio(1, 2) * &inv[i][l] * bracket);
                }
                let value = Expr::add(terms).simplify();
                gamma[idx3(i, j, k)] = value.clone();
                gamma[idx3(i, k, j)] = value;
            }
        }
    }
    Ok(Christoffel { gamma })
}

/// Index pairs `(i, j, k, l)` with i < j, k < l, (i, j) <= (k, l): the six
/// algebraically independent components in three dimensions.
pub const INDEPENDENT_PAIRS: [[usize; 4]; 6] = [
    [0, 1, 0, 1],
    [0, 1, 0, 2],
    [0, 1, 1, 2],
    [0, 2, 0, 2],
    [0, 2, 1, 2],
    [1, 2, 1, 2],
];

/// Fully covariant R_ijkl. All 81 components are computed independently
/// from the defining formula, so the algebraic symmetries are genuine
/// checks rather than consequences of storage.
#[derive(Debug, Clone)]
pub struct RiemannTensor {
    pub metric: Metric,
    components: Vec<Expr>,
    realized: Vec<Expr>,
}

impl RiemannTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Expr {
        &self.components[idx4(i, j, k, l)]
    }

    /// Component with opaque functions replaced by the metric's stand-ins.
    pub fn realized(&self, i: usize, j: usize, k: usize, l: usize) -> &Expr {
        &self.realized[idx4(i, j, k, l)]
    }

    /// Label such as `R_rsrs`.
    pub fn label(ijkl: [usize; 4]) -> String {
        let mut s = String::from("R_");
        for i in ijkl {
            s.push_str(Chart::label(i));
        }
        s
    }

    /// Parse a label like `rsrs` or `R_thsths` into indices.
    pub fn parse_label(label: &str) -> Option<[usize; 4]> {
        let mut rest = label.strip_prefix("R_").unwrap_or(label);
        let mut out = [0; 4];
        for slot in &mut out {
            let (i, len) = if rest.starts_with("th") {
                (1, 2)
            } else if rest.starts_with('r') {
                (0, 1)
            } else if rest.starts_with('s') {
                (2, 1)
            } else {
                return None;
            };
            *slot = i;
            rest = &rest[len..];
        }
        rest.is_empty().then_some(out)
    }

    pub fn evaluate<T: Scalar>(&self, ijkl: [usize; 4], point: &[T; 3]) -> Result<T, GeometryError> {
        let [i, j, k, l] = ijkl;
        Ok(self.realized(i, j, k, l).evaluate(&self.metric.binding_at(point))?)
    }

    /// All 81 components at a point.
    pub fn evaluate_all<T: Scalar>(&self, point: &[T; 3]) -> Result<Vec<T>, GeometryError> {
        let b = self.metric.binding_at(point);
        self.realized.iter().map(|e| Ok(e.evaluate(&b)?)).collect()
    }

    /// Largest violation of the four algebraic identities at a point.
    pub fn symmetry_violations(&self, point: &[f64; 3]) -> Result<SymmetryViolations, GeometryError> {
        let v = self.evaluate_all(point)?;
        let at = |i, j, k, l| v[idx4(i, j, k, l)];
        let mut out = SymmetryViolations::default();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let r = at(i, j, k, l);
                        out.first_pair = out.first_pair.max((r + at(j, i, k, l)).abs());
                        out.last_pair = out.last_pair.max((r + at(i, j, l, k)).abs());
                        out.interchange = out.interchange.max((r - at(k, l, i, j)).abs());
                        let cyc = r + at(i, k, l, j) + at(i, l, j, k);
                        out.bianchi = out.bianchi.max(cyc.abs());
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SymmetryViolations {
    pub first_pair: f64,
    pub last_pair: f64,
    pub interchange: f64,
    pub bianchi: f64,
}

impl SymmetryViolations {
    pub fn max(&self) -> f64 {
        self.first_pair
            .max(self.last_pair)
            .max(self.interchange)
            .max(self.bianchi)
    }
}

/// R^i_jkl = ∂_k Γ^i_jl − ∂_l Γ^i_jk + Γ^i_km Γ^m_jl − Γ^i_lm Γ^m_jk,
/// lowered as R_ijkl = g_im R^m_jkl.
pub fn riemann(g: &Metric) -> Result<RiemannTensor, GeometryError> {
    let gamma = christoffel(g)?;
    let coords = g.chart().coords().clone();
    // dgamma[i][j][k][n] = ∂_n Γ^i_jk
    let mut dgamma = vec![Expr::zero(); 81];
    for i in 0..3 {
        for j in 0..3 {
            for k in j..3 {
                for (n, c) in coords.iter().enumerate() {
                    let d = gamma.get(i, j, k).differentiate(c);
                    dgamma[idx4(i, j, k, n)] = d.clone();
                    dgamma[idx4(i, k, j, n)] = d;
                }
            }
        }
    }
    let mut upper = vec![Expr::zero(); 81];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut terms = vec![dgamma[idx4(i, j, l, k)].clone(), -&dgamma[idx4(i, j, k, l)]];
                    for m in 0..3 {
                        terms.push(gamma.get(i, k, m) * gamma.get(m, j, l));
                        terms.push(-(gamma.get(i, l, m) * gamma.get(m, j, k)));
                    }
                    upper[idx4(i, j, k, l)] = Expr::add(terms).simplify();
                }
            }
        }
    }
    let mut components = vec![Expr::zero(); 81];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let terms = (0..3)
                        .filter(|&m| !g.g(i, m).is_zero())
                        .map(|m| g.g(i, m) * &upper[idx4(m, j, k, l)])
                        .collect();
                    components[idx4(i, j, k, l)] = Expr::add(terms).simplify();
                }
            }
        }
    }
    let realized = components.iter().map(|c| g.realize(c).simplify()).collect();
    Ok(RiemannTensor {
        metric: g.clone(),
        components,
        realized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse_expr;

    fn e(t: &str) -> Expr {
        parse_expr(t).unwrap()
    }

    #[test]
    fn cylindrical_christoffel() {
        let g = Metric::diagonal("flat-tube", [e("1"), e("r^2"), e("1")]);
        let c = christoffel(&g).unwrap();
        assert_eq!(c.get(0, 1, 1), &e("-r").simplify());
        assert_eq!(c.get(1, 0, 1), &e("1/r").simplify());
        assert_eq!(c.get(1, 1, 0), &e("1/r").simplify());
        assert_eq!(c.nonzero().len(), 2);
    }

    #[test]
    fn cartesian_is_trivial() {
        let g = Metric::diagonal("cart", [e("1"), e("1"), e("1")]);
        assert!(christoffel(&g).unwrap().nonzero().is_empty());
    }

    #[test]
    fn zero_diagonal_is_rejected() {
        let g = Metric::diagonal("bad", [e("1"), e("r - r"), e("1")]);
        assert_eq!(christoffel(&g).unwrap_err(), GeometryError::ZeroDiagonal(1));
    }

    #[test]
    fn round_sphere_has_positive_curvature() {
        // dr^2 + sin(r)^2 dtheta^2 + ds^2: R_rthrth = sin(r)^2.
        let g = Metric::diagonal("sphere", [e("1"), e("sin(r)^2"), e("1")]);
        let rt = riemann(&g).unwrap();
        let v: f64 = rt.evaluate([0, 1, 0, 1], &[0.7, 0.3, 0.1]).unwrap();
        assert!((v - 0.7f64.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn off_diagonal_metric_inverts() {
        let mut g = Metric::diagonal("skew", [e("2"), e("r^2"), e("1")]);
        g.set(0, 2, e("r/2"));
        let c = christoffel(&g).unwrap();
        assert!(!c.nonzero().is_empty());
    }

    #[test]
    fn labels_round_trip() {
        for p in INDEPENDENT_PAIRS {
            assert_eq!(RiemannTensor::parse_label(&RiemannTensor::label(p)), Some(p));
        }
        assert_eq!(RiemannTensor::parse_label("rsrs"), Some([0, 2, 0, 2]));
        assert_eq!(RiemannTensor::parse_label("rxrs"), None);
    }
}
