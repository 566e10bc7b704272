use crate::error::{Error, Result};
use crate::graph::{adjacency, Snapshot};
use crate::spectral::eig_sym;

/// Absolute leading eigenvector of the adjacency matrix, unit 2-norm.
///
/// On disconnected graphs the vector localizes on the component with the largest
/// eigenvalue and is zero elsewhere.
pub fn eigenvector_centrality(s: &Snapshot) -> Result<Vec<f64>> {
    if s.is_directed() {
        return Err(Error::Contract(
            "eigenvector centrality needs an undirected snapshot".into(),
        ));
    }
    if s.node_count() == 0 {
        return Err(Error::Degenerate("empty snapshot".into()));
    }
    let spec = eig_sym(&adjacency(s))?;
    Ok(spec.eigenvectors[0].iter().map(|c| c.abs()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        PageRankOptions {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

/// Weighted PageRank by power iteration. Dangling nodes spread their mass uniformly.
pub fn pagerank(s: &Snapshot, opts: PageRankOptions) -> Result<Vec<f64>> {
    let d = opts.damping;
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::Argument(format!("damping must lie in (0, 1), got {d}")));
    }
    let n = s.node_count();
    if n == 0 {
        return Err(Error::Degenerate("empty snapshot".into()));
    }
    let a = adjacency(s);
    let out = a.row_sums();
    let nf = n as f64;
    let mut p = vec![1.0 / nf; n];
    for iter in 0..opts.max_iter {
        let dangling: f64 = (0..n).filter(|&i| out[i] == 0.0).map(|i| p[i]).sum();
        let mut next = vec![(1.0 - d) / nf + d * dangling / nf; n];
        for i in 0..n {
            if out[i] == 0.0 {
                continue;
            }
            let share = d * p[i] / out[i];
            for (j, &w) in a.row(i).iter().enumerate() {
                if w != 0.0 {
                    next[j] += share * w;
                }
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let change: f64 = next.iter().zip(&p).map(|(x, y)| (x - y).abs()).sum();
        p = next;
        if change <= opts.tol {
            log::trace!("pagerank converged after {} iterations", iter + 1);
            return Ok(p);
        }
    }
    Err(Error::Numerical {
        message: "pagerank did not converge".into(),
        iterations: opts.max_iter,
    })
}
