//! Ordinary least squares with classical standard errors.
//!
//! Fits are computed from a Householder QR decomposition with column pivoting.
//! A column is treated as dependent when its remaining norm falls below
//! `n * eps * max_column_norm`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INTERCEPT: &str = "intercept";
pub const TREND: &str = "trend";

/// Named regressor columns of equal length. The intercept is an ordinary column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl DesignMatrix {
    pub fn new(rows: usize) -> Self {
        DesignMatrix {
            rows,
            names: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "column `{name}` has {} rows, design has {}",
                values.len(),
                self.rows
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if self.names.contains(&name) {
            return Err(Error::InvalidSpec(format!("duplicate column name `{name}`")));
        }
        self.names.push(name);
        self.columns.push(values);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        self.push(name, values)?;
        Ok(self)
    }

    pub fn push_intercept(&mut self) -> Result<()> {
        self.push(INTERCEPT, vec![1.0; self.rows])
    }

    /// Linear trend `first, first + 1, ...`.
    pub fn push_trend(&mut self, first: f64) -> Result<()> {
        let values = (0..self.rows).map(|i| first + i as f64).collect();
        self.push(TREND, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }
}

/// One estimated coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub terms: Vec<Term>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub rss: f64,
    pub sigma2: f64,
    pub n: usize,
    pub dof: usize,
}

impl OlsFit {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.term(name).map(|t| t.estimate)
    }

    pub fn t_stat(&self, name: &str) -> Option<f64> {
        self.term(name).map(|t| t.t_stat)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.terms.iter().map(|t| t.name.as_str()).collect()
    }
}

struct PivotedQr {
    /// Column-major; R occupies the upper triangle.
    a: Vec<Vec<f64>>,
    perm: Vec<usize>,
    rank: usize,
    qty: Vec<f64>,
}

fn pivoted_qr(columns: &[Vec<f64>], rows: usize, y: Option<&[f64]>) -> PivotedQr {
    let k = columns.len();
    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut qty: Vec<f64> = y.map(<[f64]>::to_vec).unwrap_or_default();

    let max_norm = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let tol = rows as f64 * f64::EPSILON * max_norm;

    let mut rank = 0;
    for j in 0..k.min(rows) {
        let (best, best_norm) = (j..k)
            .map(|c| (c, a[c][j..].iter().map(|v| v * v).sum::<f64>().sqrt()))
            .fold((j, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_norm <= tol {
            break;
        }
        a.swap(j, best);
        perm.swap(j, best);

        let alpha = if a[j][j] > 0.0 { -best_norm } else { best_norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv > 0.0 {
            let reflect = |col: &mut [f64]| {
                let s: f64 = v.iter().zip(col.iter()).map(|(p, q)| p * q).sum();
                let f = 2.0 * s / vtv;
                for (c, vi) in col.iter_mut().zip(&v) {
                    *c -= f * vi;
                }
            };
            for col in a.iter_mut().skip(j + 1) {
                reflect(&mut col[j..]);
            }
            if !qty.is_empty() {
                reflect(&mut qty[j..]);
            }
        }
        a[j][j] = alpha;
        for x in a[j][j + 1..].iter_mut() {
            *x = 0.0;
        }
        rank += 1;
    }
    PivotedQr {
        a,
        perm,
        rank,
        qty,
    }
}

fn first_dependent_column(design: &DesignMatrix) -> String {
    for c in 1..design.cols() {
        let qr = pivoted_qr(&design.columns()[..=c], design.rows(), None);
        if qr.rank <= c {
            return design.names()[c].clone();
        }
    }
    design.names()[0].clone()
}

/// Least-squares fit of `y` on the columns of `design`.
pub fn ols_fit(y: &[f64], design: &DesignMatrix) -> Result<OlsFit> {
    let n = design.rows();
    let k = design.cols();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "response has {} rows, design has {n}",
            y.len()
        )));
    }
    if k == 0 {
        return Err(Error::DimensionMismatch("design has no columns".into()));
    }
    if n <= k {
        return Err(Error::DimensionMismatch(format!(
            "{n} observations for {k} regressors leaves no residual degrees of freedom"
        )));
    }
    if let Some(index) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }

    let qr = pivoted_qr(design.columns(), n, Some(y));
    if qr.rank < k {
        return Err(Error::RankDeficient {
            column: first_dependent_column(design),
        });
    }
    let r = |row: usize, col: usize| qr.a[col][row];

    let mut beta_perm = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qr.qty[i];
        for j in i + 1..k {
            s -= r(i, j) * beta_perm[j];
        }
        beta_perm[i] = s / r(i, i);
    }

    // R^{-1}, upper triangular; (X'X)^{-1} = R^{-1} R^{-T} in pivoted order.
    let mut rinv = vec![vec![0.0; k]; k];
    for j in 0..k {
        rinv[j][j] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|m| r(i, m) * rinv[m][j]).sum();
            rinv[i][j] = -s / r(i, i);
        }
    }

    let mut beta = vec![0.0; k];
    for (p, &orig) in qr.perm.iter().enumerate() {
        beta[orig] = beta_perm[p];
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = design
                .columns()
                .iter()
                .zip(&beta)
                .map(|(col, b)| col[i] * b)
                .sum();
            y[i] - fitted
        })
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = n - k;
    let sigma2 = rss / dof as f64;

    let mut terms: Vec<Term> = design
        .names()
        .iter()
        .map(|name| Term {
            name: name.clone(),
            estimate: 0.0,
            std_error: 0.0,
            t_stat: 0.0,
        })
        .collect();
    for (p, &orig) in qr.perm.iter().enumerate() {
        let diag: f64 = rinv[p][p..].iter().map(|v| v * v).sum();
        let se = (sigma2 * diag).sqrt();
        terms[orig].estimate = beta[orig];
        terms[orig].std_error = se;
        terms[orig].t_stat = beta[orig] / se;
    }

    let has_constant = design
        .columns()
        .iter()
        .any(|c| c[0] != 0.0 && c.iter().all(|v| *v == c[0]));
    let tss: f64 = if has_constant {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean).powi(2)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    let r_squared = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else if rss == 0.0 {
        1.0
    } else {
        0.0
    };

    Ok(OlsFit {
        terms,
        residuals,
        r_squared,
        rss,
        sigma2,
        n,
        dof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fit_through_origin() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let d = DesignMatrix::new(4).with("x", x).unwrap();
        let fit = ols_fit(&y, &d).unwrap();
        assert!((fit.coefficient("x").unwrap() - 2.0).abs() < 1e-14);
        assert!(fit.residuals.iter().all(|e| e.abs() < 1e-14));
        assert_eq!(fit.r_squared, 1.0);
        assert_eq!(fit.dof, 3);
    }

    #[test]
    fn hand_solved_normal_equations() {
        // X'X = [[3, 6], [6, 14]], X'y = [5, 11] => intercept 2/3, slope 1/2.
        let mut d = DesignMatrix::new(3);
        d.push_intercept().unwrap();
        d.push("x", vec![1.0, 2.0, 3.0]).unwrap();
        let fit = ols_fit(&[1.0, 2.0, 2.0], &d).unwrap();
        assert!((fit.coefficient("x").unwrap() - 0.5).abs() < 1e-14);
        assert!((fit.coefficient(INTERCEPT).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        // residuals [1/6, -1/3, 1/6], sigma2 = (1/6) / 1, se(slope) = sqrt(sigma2 / 2)
        assert!((fit.sigma2 - 1.0 / 6.0).abs() < 1e-14);
        let se = fit.term("x").unwrap().std_error;
        assert!((se - (1.0_f64 / 12.0).sqrt()).abs() < 1e-14);
        assert!((fit.r_squared - 0.75).abs() < 1e-14);
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let x = vec![1.0, 2.0, 4.0, 8.0, 3.0];
        let d = DesignMatrix::new(5)
            .with("x", x.clone())
            .unwrap()
            .with("x_again", x)
            .unwrap();
        let err = ols_fit(&[1.0, 2.0, 3.0, 4.0, 5.0], &d).unwrap_err();
        assert_eq!(
            err,
            Error::RankDeficient {
                column: "x_again".into()
            }
        );
    }

    #[test]
    fn names_the_later_collinear_column() {
        let mut d = DesignMatrix::new(6);
        d.push_intercept().unwrap();
        d.push("t", (0..6).map(f64::from).collect()).unwrap();
        d.push("z", vec![1.0, 0.0, 3.0, 2.0, 5.0, 4.0]).unwrap();
        d.push("t_shift", (0..6).map(|v| f64::from(v) - 1.0).collect())
            .unwrap();
        let err = ols_fit(&[0.0, 1.0, 0.0, 1.0, 0.0, 2.0], &d).unwrap_err();
        assert_eq!(
            err,
            Error::RankDeficient {
                column: "t_shift".into()
            }
        );
    }

    #[test]
    fn dimension_errors() {
        let d = DesignMatrix::new(3).with("x", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            ols_fit(&[1.0, 2.0], &d),
            Err(Error::DimensionMismatch(_))
        ));
        let mut d = DesignMatrix::new(3);
        assert!(d.push("x", vec![1.0]).is_err());
        d.push("x", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            d.push("x", vec![1.0, 2.0, 3.0]),
            Err(Error::InvalidSpec(_))
        ));
        let d = DesignMatrix::new(1).with("x", vec![1.0]).unwrap();
        assert!(matches!(ols_fit(&[1.0], &d), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn self_regression_with_intercept() {
        let y = vec![0.3, -1.2, 2.5, 0.7, 4.1, -0.4];
        let mut d = DesignMatrix::new(6);
        d.push_intercept().unwrap();
        d.push("y", y.clone()).unwrap();
        let fit = ols_fit(&y, &d).unwrap();
        assert!((fit.coefficient("y").unwrap() - 1.0).abs() < 1e-10);
        assert!(fit.coefficient(INTERCEPT).unwrap().abs() < 1e-10);
    }
}
