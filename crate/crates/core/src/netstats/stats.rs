use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_stat: f64,
    pub p_value: f64,
    pub dof: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Welch's two-sided t-test for a difference in means.
pub fn mean_diff_ttest(group_a: &[f64], group_b: &[f64]) -> Result<TTestResult> {
    if group_a.len() < 2 || group_b.len() < 2 {
        return Err(Error::Statistics("each group needs at least two values".into()));
    }
    let (ma, va) = mean_var(group_a);
    let (mb, vb) = mean_var(group_b);
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::Statistics("a group has zero variance".into()));
    }
    let (na, nb) = (group_a.len() as f64, group_b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let t = (ma - mb) / (sa + sb).sqrt();
    let dof = (sa + sb).powi(2) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Statistics(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TTestResult {
        t_stat: t,
        p_value: p,
        dof,
    })
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Statistics(format!(
            "pearson needs two equal-length samples of size >= 2 (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::Statistics("pearson undefined for a constant sample".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-sided p-value by Simpson integration of the t density over [|t|, |t| + 60].
    fn p_by_quadrature(t: f64, dof: f64) -> f64 {
        use statrs::function::gamma::ln_gamma;
        let c = (ln_gamma((dof + 1.0) / 2.0) - ln_gamma(dof / 2.0)).exp() / (dof * std::f64::consts::PI).sqrt();
        let pdf = |x: f64| c * (1.0 + x * x / dof).powf(-(dof + 1.0) / 2.0);
        let (a, b, steps) = (t.abs(), t.abs() + 60.0, 200_000);
        let h = (b - a) / steps as f64;
        let mut sum = pdf(a) + pdf(b);
        for k in 1..steps {
            let x = a + k as f64 * h;
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * pdf(x);
        }
        2.0 * sum * h / 3.0
    }

    #[test]
    fn identical_groups() {
        let g = [1.0, 2.0, 4.0];
        let r = mean_diff_ttest(&g, &g).unwrap();
        assert_eq!(r.t_stat, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separated_groups() {
        let a = [0.0, 1e-6, -1e-6, 2e-6];
        let b = [1.0, 1.0 + 1e-6, 1.0 - 1e-6, 1.0 + 2e-6];
        assert!(mean_diff_ttest(&a, &b).unwrap().p_value < 1e-6);
    }

    #[test]
    fn textbook_welch_against_quadrature() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0, 3.0, 4.0, 5.0, 6.0];
        let r = mean_diff_ttest(&a, &b).unwrap();
        // Equal variances 2.5, n = 5 each: t = -1 / sqrt(1), dof = 8.
        assert!((r.t_stat + 1.0).abs() < 1e-12);
        assert!((r.dof - 8.0).abs() < 1e-12);
        assert!((r.p_value - p_by_quadrature(r.t_stat, r.dof)).abs() < 1e-6);
    }

    #[test]
    fn degenerate_variance_is_an_error() {
        assert!(mean_diff_ttest(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(mean_diff_ttest(&[1.0], &[2.0, 3.0]).is_err());
    }

    #[test]
    fn pearson_cases() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| -2.0 * v + 3.0).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
