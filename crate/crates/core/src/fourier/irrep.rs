//! Unitary irreducible representations and their validation.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupFamily, GroupTable};
use crate::matrix::ComplexMatrix;

/// Tolerance for every representation identity.
pub const IRREP_TOLERANCE: f64 = 1e-10;
/// Orders up to which the homomorphism property is checked on all pairs.
pub const EXHAUSTIVE_HOMOMORPHISM_ORDER: usize = 256;
const SAMPLED_PAIRS: usize = 20_000;
/// Above this many `(irrep pair, element)` terms, inequivalence is checked on rounded characters.
const PAIRWISE_BUDGET: usize = 1 << 28;

#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    pub dim: usize,
    /// `rho(g)` for every element index `g`.
    pub matrices: Vec<ComplexMatrix>,
}

impl Irrep {
    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    pub fn at(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }
}

#[derive(Clone, Debug)]
pub struct IrrepTable {
    pub group: Arc<GroupTable>,
    pub irreps: Vec<Irrep>,
}

impl IrrepTable {
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.irreps.iter().map(|r| r.dim).max().unwrap_or(0)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }
}

/// Everything that can be wrong with a candidate table.
#[derive(Clone, Debug, PartialEq)]
pub enum IrrepIssue {
    WrongCount {
        irrep: usize,
        got: usize,
        expected: usize,
    },
    WrongShape {
        irrep: usize,
        element: usize,
    },
    NotIdentity {
        irrep: usize,
        error: f64,
    },
    NotUnitary {
        irrep: usize,
        element: usize,
        error: f64,
    },
    NotHomomorphism {
        irrep: usize,
        g: usize,
        h: usize,
        error: f64,
    },
    Reducible {
        irrep: usize,
        character_norm: f64,
    },
    Equivalent {
        first: usize,
        second: usize,
        overlap: f64,
    },
    Incomplete {
        sum_of_squares: usize,
        order: usize,
    },
}

impl fmt::Display for IrrepIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepIssue::WrongCount { irrep, got, expected } => {
                write!(f, "irrep {irrep}: {got} matrices for a group of order {expected}")
            }
            IrrepIssue::WrongShape { irrep, element } => {
                write!(f, "irrep {irrep}: matrix for element {element} has the wrong shape")
            }
            IrrepIssue::NotIdentity { irrep, error } => {
                write!(
                    f,
                    "irrep {irrep}: identity maps to a non-identity matrix (error {error:.3e})"
                )
            }
            IrrepIssue::NotUnitary { irrep, element, error } => {
                write!(
                    f,
                    "irrep {irrep}: matrix for element {element} is not unitary (error {error:.3e})"
                )
            }
            IrrepIssue::NotHomomorphism { irrep, g, h, error } => {
                write!(
                    f,
                    "irrep {irrep}: rho({g}*{h}) != rho({g}) rho({h}) (error {error:.3e})"
                )
            }
            IrrepIssue::Reducible { irrep, character_norm } => {
                write!(f, "irrep {irrep}: E|Tr rho(g)|^2 = {character_norm} != 1")
            }
            IrrepIssue::Equivalent { first, second, overlap } => {
                write!(f, "irreps {first} and {second} share a character (overlap {overlap})")
            }
            IrrepIssue::Incomplete { sum_of_squares, order } => {
                write!(
                    f,
                    "sum of squared dimensions is {sum_of_squares}, group order is {order}"
                )
            }
        }
    }
}

fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks shapes, unitarity, `rho(e) = I`, the homomorphism property, irreducibility,
/// pairwise inequivalence and completeness. An empty result means the table is valid.
pub fn validate_irrep_table(table: &IrrepTable) -> Vec<IrrepIssue> {
    let g = &table.group;
    let n = g.order();
    let mut issues = Vec::new();

    for (i, r) in table.irreps.iter().enumerate() {
        if r.matrices.len() != n {
            issues.push(IrrepIssue::WrongCount {
                irrep: i,
                got: r.matrices.len(),
                expected: n,
            });
            continue;
        }
        if let Some(e) = r.matrices.iter().position(|m| m.rows() != r.dim || m.cols() != r.dim) {
            issues.push(IrrepIssue::WrongShape { irrep: i, element: e });
            continue;
        }
        let id = ComplexMatrix::identity(r.dim);
        let err = max_entry_diff(&r.matrices[0], &id);
        if err > IRREP_TOLERANCE {
            issues.push(IrrepIssue::NotIdentity { irrep: i, error: err });
        }
        for (e, m) in r.matrices.iter().enumerate() {
            let err = max_entry_diff(&m.matmul(&m.adjoint()).expect("square"), &id);
            if err > IRREP_TOLERANCE {
                issues.push(IrrepIssue::NotUnitary {
                    irrep: i,
                    element: e,
                    error: err,
                });
                break;
            }
        }
        if let Some(issue) = homomorphism_issue(g, r, i) {
            issues.push(issue);
        }
        let norm = r.character().iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        if (norm - 1.0).abs() > IRREP_TOLERANCE {
            issues.push(IrrepIssue::Reducible {
                irrep: i,
                character_norm: norm,
            });
        }
    }
    if !issues.is_empty() {
        return issues;
    }

    issues.extend(equivalence_issues(table));
    let sum_of_squares: usize = table.irreps.iter().map(|r| r.dim * r.dim).sum();
    if sum_of_squares != n {
        issues.push(IrrepIssue::Incomplete {
            sum_of_squares,
            order: n,
        });
    }
    issues
}

fn homomorphism_issue(g: &GroupTable, r: &Irrep, i: usize) -> Option<IrrepIssue> {
    let n = g.order();
    let check = |a: usize, b: usize| -> Option<IrrepIssue> {
        let prod = r.matrices[a].matmul(&r.matrices[b]).expect("square");
        let err = max_entry_diff(&prod, &r.matrices[g.mul(a, b)]);
        (err > IRREP_TOLERANCE).then_some(IrrepIssue::NotHomomorphism {
            irrep: i,
            g: a,
            h: b,
            error: err,
        })
    };
    if n <= EXHAUSTIVE_HOMOMORPHISM_ORDER {
        (0..n).find_map(|a| (0..n).find_map(|b| check(a, b)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..SAMPLED_PAIRS).find_map(|_| {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            check(a, b)
        })
    }
}

fn equivalence_issues(table: &IrrepTable) -> Vec<IrrepIssue> {
    let n = table.group.order();
    let r = table.irreps.len();
    let chars: Vec<Vec<Complex64>> = table.irreps.iter().map(Irrep::character).collect();
    if r * r * n <= PAIRWISE_BUDGET {
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
        pairs
            .into_par_iter()
            .filter_map(|(i, j)| {
                let overlap = chars[i]
                    .iter()
                    .zip(&chars[j])
                    .map(|(a, b)| a * b.conj())
                    .sum::<Complex64>()
                    .norm()
                    / n as f64;
                (overlap > IRREP_TOLERANCE).then_some(IrrepIssue::Equivalent {
                    first: i,
                    second: j,
                    overlap,
                })
            })
            .collect()
    } else {
        // irreducible characters are orthonormal or equal; equal ones collide after rounding
        let key = |c: &[Complex64]| -> Vec<(i64, i64)> {
            c.iter()
                .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                .collect()
        };
        let mut seen = std::collections::HashMap::new();
        let mut out = Vec::new();
        for (j, c) in chars.iter().enumerate() {
            if let Some(&i) = seen.get(&key(c)) {
                out.push(IrrepIssue::Equivalent {
                    first: i,
                    second: j,
                    overlap: 1.0,
                });
            } else {
                seen.insert(key(c), j);
            }
        }
        out
    }
}

fn characters_cyclic(n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|k| Irrep {
            dim: 1,
            matrices: (0..n)
                .map(|g| {
                    let z = Complex64::from_polar(1.0, 2.0 * PI * ((k * g) % n) as f64 / n as f64);
                    ComplexMatrix::from_vec(1, 1, vec![z]).expect("1x1")
                })
                .collect(),
        })
        .collect()
}

fn dihedral_irreps(m: usize) -> Vec<Irrep> {
    let n = 2 * m;
    let split = |i: usize| (i % m, i / m);
    let mut out = Vec::new();
    let rot_signs: &[f64] = if m % 2 == 0 { &[1.0, -1.0] } else { &[1.0] };
    for &a in rot_signs {
        for b in [1.0f64, -1.0] {
            let matrices = (0..n)
                .map(|i| {
                    let (k, x) = split(i);
                    let v = a.powi(k as i32) * b.powi(x as i32);
                    ComplexMatrix::from_vec(1, 1, vec![Complex64::new(v, 0.0)]).expect("1x1")
                })
                .collect();
            out.push(Irrep { dim: 1, matrices });
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    for j in (1..m).take_while(|&j| 2 * j < m) {
        let matrices = (0..n)
            .map(|i| {
                let (k, x) = split(i);
                let w = Complex64::from_polar(1.0, 2.0 * PI * ((j * k) % m) as f64 / m as f64);
                let rot = [w, zero, zero, w.conj()];
                // r^k s = diag(w, w^-1) [[0,1],[1,0]]
                let data = if x == 0 {
                    rot.to_vec()
                } else {
                    vec![zero, w, w.conj(), zero]
                };
                ComplexMatrix::from_vec(2, 2, data).expect("2x2")
            })
            .collect();
        out.push(Irrep { dim: 2, matrices });
    }
    out
}

fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * p, a.cols() * q, |i, j| {
        a.get(i / p, j / q) * b.get(i % p, j % q)
    })
}

fn family_irreps(family: &GroupFamily) -> Result<Vec<Irrep>> {
    match family {
        GroupFamily::Cyclic(n) => Ok(characters_cyclic(*n)),
        GroupFamily::Dihedral(m) => Ok(dihedral_irreps(*m)),
        GroupFamily::Symmetric(m) if *m <= 2 => Ok(characters_cyclic(if *m == 2 { 2 } else { 1 })),
        GroupFamily::Symmetric(m) => Err(Error::UnsupportedFamily(format!(
            "no built-in representations for S{m}; supply a table with parse_irreps"
        ))),
        GroupFamily::Product(g, h) => {
            let a = family_irreps(g)?;
            let b = family_irreps(h)?;
            let nh = h.order().expect("bounded order");
            let ng = g.order().expect("bounded order");
            let mut out = Vec::with_capacity(a.len() * b.len());
            for ra in &a {
                for rb in &b {
                    let matrices = (0..ng * nh)
                        .map(|i| kronecker(&ra.matrices[i / nh], &rb.matrices[i % nh]))
                        .collect();
                    out.push(Irrep {
                        dim: ra.dim * rb.dim,
                        matrices,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Built-in irreducible representations for cyclic, dihedral and product groups
/// (and the abelian `S1`, `S2`). Other groups need a table from [`parse_irreps`].
pub fn build_irrep_table(group: Arc<GroupTable>) -> Result<IrrepTable> {
    let family = group.family().cloned().ok_or_else(|| {
        Error::UnsupportedFamily(format!(
            "group {} has no built-in representations; supply a table with parse_irreps",
            group.label()
        ))
    })?;
    let table = IrrepTable {
        irreps: family_irreps(&family)?,
        group,
    };
    let issues = validate_irrep_table(&table);
    if !issues.is_empty() {
        return Err(invalid(&issues));
    }
    Ok(table)
}

fn invalid(issues: &[IrrepIssue]) -> Error {
    Error::InvalidIrreps(issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))
}

#[derive(Serialize, Deserialize)]
struct IrrepDoc {
    dim: usize,
    matrices: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    group: String,
    irreps: Vec<IrrepDoc>,
}

/// Reads `{group, irreps: [{dim, matrices}]}`, where each matrix is a row-major list of
/// `[re, im]` pairs, one matrix per element index, and validates it against `group`.
pub fn parse_irreps(text: &str, group: Arc<GroupTable>) -> Result<IrrepTable> {
    let doc: TableDoc = serde_json::from_str(text)?;
    let mut irreps = Vec::with_capacity(doc.irreps.len());
    for (i, r) in doc.irreps.into_iter().enumerate() {
        let matrices = r
            .matrices
            .into_iter()
            .enumerate()
            .map(|(e, m)| {
                let data = m.into_iter().map(|[re, im]| Complex64::new(re, im)).collect::<Vec<_>>();
                if data.len() != r.dim * r.dim {
                    return Err(invalid(&[IrrepIssue::WrongShape { irrep: i, element: e }]));
                }
                ComplexMatrix::from_vec(r.dim, r.dim, data)
            })
            .collect::<Result<Vec<_>>>()?;
        irreps.push(Irrep { dim: r.dim, matrices });
    }
    let table = IrrepTable { group, irreps };
    let issues = validate_irrep_table(&table);
    if !issues.is_empty() {
        return Err(invalid(&issues));
    }
    Ok(table)
}

pub fn serialize_irreps(table: &IrrepTable) -> String {
    let doc = TableDoc {
        group: table.group.label().to_string(),
        irreps: table
            .irreps
            .iter()
            .map(|r| IrrepDoc {
                dim: r.dim,
                matrices: r
                    .matrices
                    .iter()
                    .map(|m| m.data().iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data")
}

/// Distinct dimensions, for reporting.
pub fn dimension_profile(table: &IrrepTable) -> Vec<(usize, usize)> {
    let dims: HashSet<usize> = table.irreps.iter().map(|r| r.dim).collect();
    let mut dims: Vec<usize> = dims.into_iter().collect();
    dims.sort_unstable();
    dims.into_iter()
        .map(|d| (d, table.irreps.iter().filter(|r| r.dim == d).count()))
        .collect()
}
