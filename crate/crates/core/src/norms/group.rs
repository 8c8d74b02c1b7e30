//! Norms of group functions under the averaging measure.

use crate::cayley::cayley_matrix;
use crate::error::{Error, Result};
use crate::group::{function_norm, ComplexGroupFunction, GroupFunction};
use crate::matrix::DenseMatrix;
use crate::norms::grothendieck::{grothendieck_bounds, BmConfig, GrothendieckBracket, VectorAssignment};
use crate::norms::spectral::{spectral_norm, spectral_norm_complex, top_singular_triple};

/// Slack allowed on `||x||_2 <= 1` for translate witnesses.
pub const WITNESS_NORM_SLACK: f64 = 1e-9;

/// `||f|| = ||A(f)|| / |G|`.
pub fn group_spectral(f: &GroupFunction) -> f64 {
    spectral_norm(&cayley_matrix(f).matrix) / f.group().order() as f64
}

pub fn group_spectral_complex(f: &ComplexGroupFunction) -> f64 {
    let g = f.group();
    let n = g.order();
    let a = DenseMatrix::from_fn(n, n, |x, y| f.at(g.mul(x, g.inv(y))));
    spectral_norm_complex(&a) / n as f64
}

/// Optimal `x, y` for `sup E f(gh^{-1}) x(g) y(h)` over the averaging-measure unit ball,
/// scaled from the top singular pair of `A(f)`.
pub fn group_spectral_witness(f: &GroupFunction) -> (GroupFunction, GroupFunction, f64) {
    let n = f.group().order();
    let t = top_singular_triple(&cayley_matrix(f).matrix);
    let s = (n as f64).sqrt();
    let x = GroupFunction::from_fn(f.group().clone(), |g| t.left[g] * s);
    let y = GroupFunction::from_fn(f.group().clone(), |g| t.right[g] * s);
    (x, y, t.value / n as f64)
}

/// `E_{g,h} f(gh^{-1}) x(g) y(h)`.
pub fn bilinear_average(f: &GroupFunction, x: &GroupFunction, y: &GroupFunction) -> f64 {
    let g = f.group();
    let n = g.order();
    let mut total = 0.0;
    for a in 0..n {
        let xa = x.at(a);
        for b in 0..n {
            total += f.at(g.mul(a, g.inv(b))) * xa * y.at(b);
        }
    }
    total / (n * n) as f64
}

#[derive(Clone, Debug)]
pub struct TranslateWitness {
    /// `x_g / sqrt(n)` and `y_h / sqrt(n)` as Euclidean vectors, so inner products match `L^2(G)`.
    pub assignment: VectorAssignment,
    /// `E_{g,h} f(gh^{-1}) <x_g, y_h>`.
    pub objective: f64,
    /// `E_{g,h} f(gh^{-1}) x(g) y(h)`.
    pub direct: f64,
}

/// Vectors `x_g(a) = x(ga)`, `y_h(a) = y(ha)` in the unit ball of `L^2(G)`.
pub fn translate_witness(f: &GroupFunction, x: &GroupFunction, y: &GroupFunction) -> Result<TranslateWitness> {
    if !f.same_group(x) || !f.same_group(y) {
        return Err(Error::GroupMismatch(
            "witness functions live on a different group".into(),
        ));
    }
    for v in [x, y] {
        let norm = function_norm(v, 2.0);
        if norm > 1.0 + WITNESS_NORM_SLACK {
            return Err(Error::UnitBall { norm });
        }
    }
    let g = f.group();
    let n = g.order();
    let scale = 1.0 / (n as f64).sqrt();
    let translates = |v: &GroupFunction| -> Vec<Vec<f64>> {
        (0..n)
            .map(|a| (0..n).map(|b| v.at(g.mul(a, b)) * scale).collect())
            .collect()
    };
    let mut assignment = VectorAssignment {
        left: translates(x),
        right: translates(y),
        objective: 0.0,
    };
    let a = cayley_matrix(f).matrix;
    let objective = assignment.evaluate(&a) / (n * n) as f64;
    assignment.objective = objective * (n * n) as f64;
    Ok(TranslateWitness {
        assignment,
        objective,
        direct: bilinear_average(f, x, y),
    })
}

/// Bracket on `||f||_G = ||A(f)||_G / |G|^2`.
pub fn group_grothendieck_bounds(f: &GroupFunction, cfg: &BmConfig, exact_limit: usize) -> Result<(f64, f64)> {
    let n2 = (f.group().order() as f64).powi(2);
    let GrothendieckBracket { lower, upper, .. } = grothendieck_bounds(&cayley_matrix(f).matrix, cfg, exact_limit)?;
    Ok((lower / n2, upper / n2))
}
