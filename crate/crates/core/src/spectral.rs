//! Dense symmetric eigendecomposition and the leading singular structure of directed
//! adjacency matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedMatrix;

const MAX_SWEEPS: usize = 100;

/// Complete eigendecomposition of a symmetric matrix, eigenvalues in descending order.
///
/// Eigenvector signs are fixed so that the largest-magnitude component is positive (the
/// lowest index wins among equal magnitudes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn leading(&self) -> Option<(f64, &[f64])> {
        self.eigenvalues.first().map(|&l| (l, self.eigenvectors[0].as_slice()))
    }

    /// Number of eigenvalues above `positive_threshold`.
    pub fn positive_count(&self) -> usize {
        let tol = self.positive_threshold();
        self.eigenvalues.iter().filter(|&&l| l > tol).count()
    }

    /// Eigenvalues at or below this are not treated as positive (round-off guard).
    pub fn positive_threshold(&self) -> f64 {
        let scale = self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        1e-10 * scale.max(1.0)
    }

    /// Component `x_{k,i}` of the `k`-th eigenvector (0-based `k`).
    pub fn component(&self, k: usize, i: usize) -> f64 {
        self.eigenvectors[k][i]
    }
}

/// Leading singular value of `A` and the leading unit eigenvector of `M = A·Aᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularTriplet {
    pub s: f64,
    pub x_m: Vec<f64>,
    /// `A·Aᵀ`, kept because the directed importance formula reads it.
    #[serde(skip)]
    pub gram: Option<WeightedMatrix>,
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn eig_sym(a: &WeightedMatrix) -> Result<Spectrum> {
    if !a.is_symmetric() {
        return Err(Error::Contract("eig_sym requires a symmetric matrix".into()));
    }
    let n = a.dim();
    if n == 0 {
        return Ok(Spectrum {
            n,
            eigenvalues: vec![],
            eigenvectors: vec![],
        });
    }
    let mut m = a.to_rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let norm = a.frobenius_norm();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[p][q] * m[p][q])
            .sum();
        if off.sqrt() <= 1e-15 * norm || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (m[p][k], m[q][k]);
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical {
            message: "Jacobi sweeps did not annihilate the off-diagonal".into(),
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    let eigenvalues = order.iter().map(|&k| m[k][k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut x: Vec<f64> = v.iter().map(|row| row[k]).collect();
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            x.iter_mut().for_each(|c| *c /= norm);
            orient(&mut x);
            x
        })
        .collect();
    Ok(Spectrum {
        n,
        eigenvalues,
        eigenvectors,
    })
}

/// Flips `x` so that its largest-magnitude component is positive.
fn orient(x: &mut [f64]) {
    let mut best = 0;
    for (i, c) in x.iter().enumerate() {
        if c.abs() > x[best].abs() * (1.0 + 1e-9) {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&c| c < 0.0) {
        x.iter_mut().for_each(|c| *c = -*c);
    }
}

/// Leading singular value `s` of a square matrix and the leading eigenvector of `A·Aᵀ`.
///
/// An all-zero matrix yields `s = 0` and the first basis vector.
pub fn leading_singular(a: &WeightedMatrix) -> Result<SingularTriplet> {
    let n = a.dim();
    let gram = a.gram();
    if a.as_slice().iter().all(|&v| v == 0.0) {
        let mut x_m = vec![0.0; n];
        if n > 0 {
            x_m[0] = 1.0;
        }
        return Ok(SingularTriplet {
            s: 0.0,
            x_m,
            gram: Some(gram),
        });
    }
    let spec = eig_sym(&gram)?;
    let (lambda, x) = spec.leading().expect("non-empty matrix");
    Ok(SingularTriplet {
        s: lambda.max(0.0).sqrt(),
        x_m: x.to_vec(),
        gram: Some(gram),
    })
}

/// Eigenvectors eligible for per-node component selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentSet {
    /// Only eigenvectors whose eigenvalue is positive.
    #[default]
    Positive,
    All,
}

impl std::str::FromStr for ComponentSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "positive-only" => Ok(ComponentSet::Positive),
            "all" => Ok(ComponentSet::All),
            other => Err(Error::Argument(format!("unknown component set `{other}`"))),
        }
    }
}

impl ComponentSet {
    pub(crate) fn limit(self, spec: &Spectrum) -> usize {
        match self {
            ComponentSet::Positive => spec.positive_count(),
            ComponentSet::All => spec.eigenvalues.len(),
        }
    }
}

/// 1-based rank of the eigenvector holding node `i`'s largest-magnitude component.
///
/// Candidates are restricted by `set`; ties go to the larger eigenvalue. Under the
/// default [`ComponentSet::Positive`] the degenerate negative eigenspaces of cliques are
/// never selected, which is what makes the selected rank track community membership.
pub fn select_eigencomponent(spec: &Spectrum, i: usize, set: ComponentSet) -> Result<usize> {
    if i >= spec.n {
        return Err(Error::Lookup(format!(
            "node index {i} outside spectrum of dimension {}",
            spec.n
        )));
    }
    let limit = set.limit(spec);
    if limit == 0 {
        return Err(Error::Degenerate(
            "no eigenvectors available for component selection".into(),
        ));
    }
    let mut best = 0;
    let mut best_mag = spec.eigenvectors[0][i].abs();
    for k in 1..limit {
        let mag = spec.eigenvectors[k][i].abs();
        if mag > best_mag * (1.0 + 1e-9) + 1e-15 {
            best = k;
            best_mag = mag;
        }
    }
    Ok(best + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_barbell;
    use crate::graph::adjacency;

    fn clique(n: usize) -> WeightedMatrix {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        WeightedMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_cycle() {
        let a = WeightedMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eig_sym(&a).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = 1.0 / 2f64.sqrt();
        assert!((s.eigenvectors[0][0] - h).abs() < 1e-14);
        assert!((s.eigenvectors[0][1] - h).abs() < 1e-14);
    }

    #[test]
    fn triangle() {
        let s = eig_sym(&clique(3)).unwrap();
        let expected = [2.0, -1.0, -1.0];
        for (l, e) in s.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-12);
        }
        for c in &s.eigenvectors[0] {
            assert!((c - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let a = WeightedMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(eig_sym(&a), Err(Error::Contract(_))));
    }

    #[test]
    fn sign_convention_makes_largest_component_positive() {
        let a = adjacency(&gen_barbell(4, 2, 5).unwrap());
        let s = eig_sym(&a).unwrap();
        for x in &s.eigenvectors {
            let max = x.iter().cloned().fold(0.0_f64, |m, c| m.max(c.abs()));
            let first = x.iter().find(|c| c.abs() >= max * (1.0 - 1e-9)).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn singular_of_directed_pair() {
        let a = WeightedMatrix::from_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let t = leading_singular(&a).unwrap();
        assert!((t.s - 2.0).abs() < 1e-14);
        assert!((t.x_m[0] - 1.0).abs() < 1e-14 && t.x_m[1].abs() < 1e-14);
    }

    #[test]
    fn singular_of_zero_matrix() {
        let t = leading_singular(&WeightedMatrix::zeros(3)).unwrap();
        assert_eq!(t.s, 0.0);
        assert_eq!(t.x_m, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn singular_of_symmetric_matches_spectral_radius() {
        let a = adjacency(&gen_barbell(4, 2, 5).unwrap());
        let spec = eig_sym(&a).unwrap();
        let radius = spec.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        let t = leading_singular(&a).unwrap();
        assert!((t.s - radius).abs() < 1e-10);
        let dot: f64 = t.x_m.iter().zip(&spec.eigenvectors[0]).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn barbell_selection() {
        let spec = eig_sym(&adjacency(&gen_barbell(4, 2, 5).unwrap())).unwrap();
        let ranks: Vec<usize> = (0..11)
            .map(|i| select_eigencomponent(&spec, i, ComponentSet::Positive).unwrap())
            .collect();
        assert_eq!(ranks, vec![2, 2, 2, 2, 3, 3, 1, 1, 1, 1, 1]);
        assert!(select_eigencomponent(&spec, 11, ComponentSet::Positive).is_err());
    }

    #[test]
    fn clique_selects_leading() {
        for n in 3..=12 {
            let spec = eig_sym(&clique(n)).unwrap();
            for i in 0..n {
                assert_eq!(select_eigencomponent(&spec, i, ComponentSet::Positive).unwrap(), 1);
            }
        }
    }
}
