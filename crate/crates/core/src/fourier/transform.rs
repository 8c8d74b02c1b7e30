//! Fourier transform on a finite group: `f^(rho) = E_g f(g) rho(g)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::irrep::{Irrep, IrrepTable};
use crate::group::{ComplexGroupFunction, GroupTable};
use crate::matrix::ComplexMatrix;
use crate::norms::spectral::spectral_norm_complex;

/// One `d_rho x d_rho` block per irrep, in table order.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    pub blocks: Vec<ComplexMatrix>,
}

impl FourierCoefficients {
    /// `sum_rho d_rho ||f^(rho)||_HS^2`.
    pub fn plancherel_sum(&self) -> f64 {
        self.blocks.iter().map(|b| b.rows() as f64 * b.hs_norm().powi(2)).sum()
    }
}

fn check_group(f: &ComplexGroupFunction, table: &IrrepTable) -> Result<()> {
    let (a, b) = (f.group(), &table.group);
    let same = std::sync::Arc::ptr_eq(a, b) || (a.order() == b.order() && (0..a.order()).all(|g| a.row(g) == b.row(g)));
    if same {
        Ok(())
    } else {
        Err(Error::GroupMismatch(format!(
            "function on {} but representations of {}",
            f.group().label(),
            table.group.label()
        )))
    }
}

pub fn fourier_transform(f: &ComplexGroupFunction, table: &IrrepTable) -> Result<FourierCoefficients> {
    check_group(f, table)?;
    let n = f.group().order() as f64;
    let blocks = table
        .irreps
        .par_iter()
        .map(|r| {
            let mut acc = ComplexMatrix::zeros(r.dim, r.dim);
            for (g, &v) in f.values().iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    acc = acc.add(&r.matrices[g].map(|z| z * v)).expect("same shape");
                }
            }
            acc.map(|z| z / n)
        })
        .collect();
    Ok(FourierCoefficients { blocks })
}

/// `f(g) = sum_rho d_rho <f^(rho), rho(g)>_HS`.
pub fn fourier_inverse(coeffs: &FourierCoefficients, table: &IrrepTable) -> Result<ComplexGroupFunction> {
    if coeffs.blocks.len() != table.len() {
        return Err(Error::Dimension {
            expected: format!("{} blocks", table.len()),
            got: format!("{} blocks", coeffs.blocks.len()),
        });
    }
    for (b, r) in coeffs.blocks.iter().zip(&table.irreps) {
        if b.rows() != r.dim || b.cols() != r.dim {
            return Err(Error::Dimension {
                expected: format!("{0}x{0} block", r.dim),
                got: format!("{}x{}", b.rows(), b.cols()),
            });
        }
    }
    let n = table.group.order();
    let values = (0..n)
        .into_par_iter()
        .map(|g| {
            coeffs
                .blocks
                .iter()
                .zip(&table.irreps)
                .map(|(b, r)| b.hs_inner(&r.matrices[g]) * r.dim as f64)
                .sum()
        })
        .collect();
    ComplexGroupFunction::new(table.group.clone(), values)
}

/// `||f|| = max_rho ||f^(rho)||`.
pub fn spectral_via_irreps(f: &ComplexGroupFunction, table: &IrrepTable) -> Result<f64> {
    let c = fourier_transform(f, table)?;
    Ok(c.blocks.par_iter().map(spectral_norm_complex).reduce(|| 0.0, f64::max))
}

/// `E_g rho(g) M sigma(g^{-1})`.
pub fn schur_average(group: &GroupTable, rho: &Irrep, sigma: &Irrep, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != rho.dim || m.cols() != sigma.dim {
        return Err(Error::Dimension {
            expected: format!("{}x{}", rho.dim, sigma.dim),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let n = group.order();
    let mut acc = ComplexMatrix::zeros(rho.dim, sigma.dim);
    for g in 0..n {
        let term = rho.matrices[g].matmul(m)?.matmul(&sigma.matrices[group.inv(g)])?;
        acc = acc.add(&term)?;
    }
    Ok(acc.map(|z| z / n as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterNorm {
    pub value: f64,
    /// Index of the maximizing character in the table.
    pub character: usize,
    pub values: Vec<Complex64>,
}

/// `max_chi |E_g f(g) conj(chi(g))|` over the characters of an abelian group.
pub fn abelian_character_norm(f: &ComplexGroupFunction, table: &IrrepTable) -> Result<CharacterNorm> {
    check_group(f, table)?;
    if !table.group.is_abelian() {
        return Err(Error::InvalidParameter(format!(
            "{} is not abelian",
            table.group.label()
        )));
    }
    let n = f.group().order() as f64;
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, r) in table.irreps.iter().enumerate() {
        let s: Complex64 = f
            .values()
            .iter()
            .zip(&r.matrices)
            .map(|(v, m)| v * m.get(0, 0).conj())
            .sum();
        let v = s.norm() / n;
        if v > best.0 {
            best = (v, k);
        }
    }
    let values = table.irreps[best.1].matrices.iter().map(|m| m.get(0, 0)).collect();
    Ok(CharacterNorm {
        value: best.0,
        character: best.1,
        values,
    })
}
