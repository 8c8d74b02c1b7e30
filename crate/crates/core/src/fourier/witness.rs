//! Vector witnesses for `||f||_G >= ||f||` built from the top singular pair of one Fourier block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fourier::irrep::IrrepTable;
use crate::fourier::transform::fourier_transform;
use crate::group::ComplexGroupFunction;
use crate::matrix::{ComplexMatrix, DenseMatrix};
use crate::norms::grothendieck::VectorAssignment;
use crate::norms::spectral::jacobi_eigen;

/// `M v = value u`, `M* u = value v`, with `u`, `v` unit vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSingularTriple {
    pub value: f64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

fn normalize(z: &mut [Complex64]) -> f64 {
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        z.iter_mut().for_each(|c| *c /= norm);
    }
    norm
}

fn unit(k: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); k];
    e[0] = Complex64::new(1.0, 0.0);
    e
}

/// Top singular triple from the eigen-decomposition of the real form of `[[0, M], [M*, 0]]`.
pub fn top_complex_singular_triple(m: &ComplexMatrix) -> ComplexSingularTriple {
    let (p, q) = (m.rows(), m.cols());
    let zero = Complex64::new(0.0, 0.0);
    let h = ComplexMatrix::from_fn(p + q, p + q, |i, j| match (i < p, j < p) {
        (true, false) => m.get(i, j - p),
        (false, true) => m.get(j, i - p).conj(),
        _ => zero,
    });
    let eig = jacobi_eigen(&h.real_embedding());
    // The spectrum is symmetric, so sorting by magnitude may put `-value` first.
    let top = (0..eig.values.len())
        .max_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]).then(b.cmp(&a)))
        .expect("nonempty");
    let value = eig.values[top].max(0.0);
    if value == 0.0 {
        return ComplexSingularTriple {
            value,
            u: unit(p),
            v: unit(q),
        };
    }
    let w = &eig.vectors[top];
    let n = p + q;
    let z: Vec<Complex64> = (0..n).map(|i| Complex64::new(w[i], w[n + i])).collect();
    let mut u = z[..p].to_vec();
    let mut v = z[p..].to_vec();
    normalize(&mut u);
    normalize(&mut v);
    ComplexSingularTriple { value, u, v }
}

/// `conj(a)^T b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdWitness {
    /// Irrep whose block attains the largest top singular value (first one on ties).
    pub irrep: usize,
    pub dim: usize,
    /// Top singular value of that block, which is `||f||`.
    pub value: f64,
    /// `x(g) = sigma(g^{-1}) u`.
    pub x: Vec<Vec<Complex64>>,
    /// `y(h) = sigma(h^{-1}) v`.
    pub y: Vec<Vec<Complex64>>,
    /// `E_{g,h} f(gh^{-1}) <x(g), y(h)>` with `<a, b> = conj(a)^T b`.
    pub objective: Complex64,
}

impl SvdWitness {
    /// The same vectors in `R^{2d}` via `z -> (Re z, Im z)`; real inner products equal
    /// `Re <x(g), y(h)>`, so for real `f` the assignment is feasible for `A(f)` with
    /// objective `|G|^2 Re(objective)`.
    pub fn real_assignment(&self, a: &DenseMatrix) -> VectorAssignment {
        let split = |z: &Vec<Complex64>| -> Vec<f64> { z.iter().map(|c| c.re).chain(z.iter().map(|c| c.im)).collect() };
        let mut w = VectorAssignment {
            left: self.x.iter().map(split).collect(),
            right: self.y.iter().map(split).collect(),
            objective: 0.0,
        };
        w.objective = w.evaluate(a);
        w
    }
}

pub fn svd_witness(f: &ComplexGroupFunction, table: &IrrepTable) -> Result<SvdWitness> {
    let coeffs = fourier_transform(f, table)?;
    let mut best: Option<(usize, ComplexSingularTriple)> = None;
    for (i, b) in coeffs.blocks.iter().enumerate() {
        let t = top_complex_singular_triple(b);
        if best.as_ref().is_none_or(|(_, bt)| t.value > bt.value) {
            best = Some((i, t));
        }
    }
    let (irrep, top) = best.expect("a table has at least the trivial irrep");
    let sigma = &table.irreps[irrep];
    let g = &table.group;
    let n = g.order();
    let apply = |e: usize, w: &[Complex64]| -> Vec<Complex64> { sigma.matrices[g.inv(e)].matvec(w) };
    let x: Vec<Vec<Complex64>> = (0..n).map(|e| apply(e, &top.u)).collect();
    let y: Vec<Vec<Complex64>> = (0..n).map(|e| apply(e, &top.v)).collect();
    let mut objective = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            objective += f.at(g.mul(a, g.inv(b))) * inner(&x[a], &y[b]);
        }
    }
    objective /= (n * n) as f64;
    Ok(SvdWitness {
        irrep,
        dim: sigma.dim,
        value: top.value,
        x,
        y,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::irrep::build_irrep_table;
    use crate::group::{build_standard_group, GroupFamily};
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_triple_of_small_matrices() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, 3.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let t = top_complex_singular_triple(&m);
        assert!((t.value - 3.0).abs() < 1e-12);
        let mv = m.matvec(&t.v);
        for (a, b) in mv.iter().zip(&t.u) {
            assert!((a - b * t.value).norm() < 1e-10);
        }
        let one = top_complex_singular_triple(&ComplexMatrix::from_vec(1, 1, vec![c(0.0, 2.0)]).unwrap());
        assert!((one.value - 2.0).abs() < 1e-12);
        assert!((one.u[0] * 2.0 - c(0.0, 2.0) * one.v[0]).norm() < 1e-12);
        let z = top_complex_singular_triple(&ComplexMatrix::zeros(3, 3));
        assert_eq!(z.value, 0.0);
        assert_eq!(z.u[0], c(1.0, 0.0));
    }

    #[test]
    fn witness_examples() {
        let z2 = build_irrep_table(Arc::new(build_standard_group(&GroupFamily::Cyclic(2)).unwrap())).unwrap();
        let f = ComplexGroupFunction::new(z2.group.clone(), vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let w = svd_witness(&f, &z2).unwrap();
        assert_eq!(w.irrep, 1);
        assert!((w.objective - c(1.0, 0.0)).norm() < 1e-12);

        let d3 = build_irrep_table(Arc::new(build_standard_group(&GroupFamily::Dihedral(3)).unwrap())).unwrap();
        let one = ComplexGroupFunction::constant(d3.group.clone(), c(1.0, 0.0));
        let w = svd_witness(&one, &d3).unwrap();
        assert_eq!(w.irrep, 0);
        assert!(w.x.iter().chain(&w.y).all(|v| (v[0] - c(1.0, 0.0)).norm() < 1e-12));
        assert!((w.objective.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn witness_vectors_are_unit() {
        let d4 = build_irrep_table(Arc::new(build_standard_group(&GroupFamily::Dihedral(4)).unwrap())).unwrap();
        let f = ComplexGroupFunction::from_fn(d4.group.clone(), |g| c((g as f64 * 1.7).sin(), (g as f64 * 0.3).cos()));
        let w = svd_witness(&f, &d4).unwrap();
        for v in w.x.iter().chain(&w.y) {
            assert!((inner(v, v).re - 1.0).abs() < 1e-12);
        }
        assert!((w.objective - c(w.value, 0.0)).norm() < 1e-8 * w.value);
    }
}
