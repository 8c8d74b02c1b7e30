//! Graph families: Paley, cycles, complete graphs, Petersen, Cayley graphs of small groups,
//! a regular graph with a large negative eigenvalue, random regular graphs, and bipartite
//! Cayley matrices.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cayley::{cayley_from_set, cayley_matrix, CayleyMatrix};
use crate::error::{Error, Result};
use crate::group::{build_standard_group, GroupFamily, GroupFunction, GroupTable};
use crate::matrix::DenseMatrix;
use crate::norms::grothendieck::{grothendieck_bounds, BmConfig};
use crate::norms::spectral::spectral_norm;

/// Restarts allowed to the degree-sequence sampler.
pub const SAMPLER_ATTEMPTS: usize = 10_000;

/// Where a graph came from: family name, integer parameters and optional seed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(family: &str, params: &[(&str, u64)], seed: Option<u64>) -> Self {
        Provenance {
            family: family.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            seed,
        }
    }
}

/// Symmetric 0/1 adjacency with zero diagonal and constant row sums.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularGraph {
    pub n: usize,
    pub degree: usize,
    pub matrix: DenseMatrix,
    pub provenance: Provenance,
}

impl RegularGraph {
    pub fn from_matrix(matrix: DenseMatrix, provenance: Provenance) -> Result<Self> {
        validate_adjacency(&matrix)?;
        let n = matrix.rows();
        let sums = matrix.row_sums();
        let degree = sums[0];
        if let Some(row) = sums.iter().position(|&s| s != degree) {
            return Err(Error::NotRegular {
                row,
                sum: sums[row],
                expected: degree,
            });
        }
        Ok(RegularGraph {
            n,
            degree: degree as usize,
            matrix,
            provenance,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], provenance: Provenance) -> Result<Self> {
        RegularGraph::from_matrix(adjacency_from_edges(n, edges)?, provenance)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|s| (s + 1..self.n).map(move |t| (s, t)))
            .filter(|&(s, t)| self.matrix.get(s, t) == 1.0)
            .collect()
    }
}

/// Square, symmetric, 0/1, zero diagonal.
pub fn validate_adjacency(a: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if let Some((row, col)) = a.first_asymmetry(0.0) {
        return Err(Error::NotSymmetric { row, col });
    }
    for i in 0..a.rows() {
        if a.get(i, i) != 0.0 {
            return Err(Error::InvalidParameter(format!("loop at vertex {i}")));
        }
        if let Some(j) = a.row(i).iter().position(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidParameter(format!("entry ({i},{j}) is not 0 or 1")));
        }
    }
    Ok(())
}

/// Symmetric 0/1 matrix of a simple undirected edge list.
pub fn adjacency_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
    }
    let mut a = DenseMatrix::zeros(n, n);
    for &(s, t) in edges {
        if s >= n || t >= n {
            return Err(Error::InvalidParameter(format!("edge ({s},{t}) leaves 0..{n}")));
        }
        if s == t {
            return Err(Error::InvalidParameter(format!("loop at vertex {s}")));
        }
        if a.get(s, t) != 0.0 {
            return Err(Error::InvalidParameter(format!("repeated edge ({s},{t})")));
        }
        a.set(s, t, 1.0);
        a.set(t, s, 1.0);
    }
    Ok(a)
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn quadratic_residues(p: usize) -> Vec<usize> {
    let set: HashSet<usize> = (1..p).map(|x| x * x % p).collect();
    let mut v: Vec<usize> = set.into_iter().collect();
    v.sort_unstable();
    v
}

fn paley_check(p: usize) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if p % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "{p} is not 1 mod 4, so -1 is a non-residue and the graph is directed"
        )));
    }
    Ok(())
}

/// `Cay(Z_p, quadratic residues)`.
pub fn paley_cayley(p: usize) -> Result<CayleyMatrix> {
    paley_check(p)?;
    let z = Arc::new(build_standard_group(&GroupFamily::Cyclic(p))?);
    cayley_from_set(z, &quadratic_residues(p))
}

pub fn paley_graph(p: usize) -> Result<RegularGraph> {
    let c = paley_cayley(p)?;
    RegularGraph::from_matrix(c.matrix, Provenance::new("paley", &[("p", p as u64)], None))
}

pub fn cycle_graph(n: usize) -> Result<RegularGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    RegularGraph::from_edges(n, &edges, Provenance::new("cycle", &[("n", n as u64)], None))
}

pub fn complete_graph(n: usize) -> Result<RegularGraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("complete graph needs a vertex".into()));
    }
    let a = DenseMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
    RegularGraph::from_matrix(a, Provenance::new("complete", &[("n", n as u64)], None))
}

/// Outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram on `5..10`.
pub fn petersen_graph() -> RegularGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    RegularGraph::from_edges(10, &edges, Provenance::new("petersen", &[], None)).expect("valid edge list")
}

/// Undirected Cayley graph; `set` must be inverse-closed and avoid the identity.
pub fn cayley_graph(group: Arc<GroupTable>, set: &[usize]) -> Result<RegularGraph> {
    if set.contains(&0) {
        return Err(Error::InvalidParameter("generating set contains the identity".into()));
    }
    let c = cayley_from_set(group.clone(), set)?;
    if !c.symmetric {
        return Err(Error::InvalidParameter(
            "generating set is not closed under inverses".into(),
        ));
    }
    let mut prov = Provenance::new("cayley", &[("order", group.order() as u64)], None);
    prov.family = format!("cayley:{}", group.label());
    RegularGraph::from_matrix(c.matrix, prov)
}

/// Whether a degree sequence is realized by a simple graph.
pub fn erdos_gallai(degrees: &[usize]) -> bool {
    let mut d: Vec<usize> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len();
    if d.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut prefix = 0;
    for k in 1..=n {
        prefix += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Simple graph with the given degrees: stubs are paired at random, pairs that would
/// create a loop or repeated edge are redrawn, and the attempt restarts when no valid
/// pair remains.
pub fn sample_degree_sequence(degrees: &[usize], rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    if !erdos_gallai(degrees) {
        return Err(Error::InvalidParameter(format!(
            "degree sequence {degrees:?} is not graphical"
        )));
    }
    let all: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    'attempt: for _ in 0..SAMPLER_ATTEMPTS {
        let mut stubs = all.clone();
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        let mut out = Vec::with_capacity(stubs.len() / 2);
        while !stubs.is_empty() {
            let mut misses = 0;
            loop {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (a, b) = (stubs[i], stubs[j]);
                let key = (a.min(b), a.max(b));
                if i != j && a != b && !edges.contains(&key) {
                    let (hi, lo) = (i.max(j), i.min(j));
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    edges.insert(key);
                    out.push(key);
                    break;
                }
                misses += 1;
                if misses % 64 == 0 && !has_valid_pair(&stubs, &edges) {
                    continue 'attempt;
                }
            }
        }
        out.sort_unstable();
        return Ok(out);
    }
    Err(Error::SamplerExhausted(SAMPLER_ATTEMPTS))
}

fn has_valid_pair(stubs: &[usize], edges: &HashSet<(usize, usize)>) -> bool {
    let mut vs: Vec<usize> = stubs.to_vec();
    vs.sort_unstable();
    vs.dedup();
    vs.iter()
        .enumerate()
        .any(|(k, &a)| vs[k + 1..].iter().any(|&b| !edges.contains(&(a, b))))
}

pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<RegularGraph> {
    if d >= n || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "no {d}-regular simple graph on {n} vertices (need d < n and nd even)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = sample_degree_sequence(&vec![d; n], &mut rng)?;
    RegularGraph::from_edges(
        n,
        &edges,
        Provenance::new("random_regular", &[("n", n as u64), ("d", d as u64)], Some(seed)),
    )
}

/// A `d`-regular graph with eigenvalue `-d/2` on the vector `1_U - 1_V`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedGraph {
    pub graph: RegularGraph,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    /// Vertices attached to one edge between `U` and `V`.
    pub w1: Vec<usize>,
    pub w0: Vec<usize>,
}

impl PlantedGraph {
    pub fn eigenvector(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.graph.n];
        self.u.iter().for_each(|&i| x[i] = 1.0);
        self.v.iter().for_each(|&i| x[i] = -1.0);
        x
    }

    pub fn eigenvalue(&self) -> f64 {
        -(self.graph.degree as f64) / 2.0
    }

    /// `max_i |(A x)_i - lambda x_i|` for `x = 1_U - 1_V`.
    pub fn residual(&self) -> f64 {
        let x = self.eigenvector();
        let ax = self.graph.matrix.matvec(&x);
        ax.iter()
            .zip(&x)
            .map(|(a, b)| (a - self.eigenvalue() * b).abs())
            .fold(0.0, f64::max)
    }
}

/// `U = 0..t`, `V = t..2t` with `t = d/2` joined completely; the `t^2` edges between them,
/// in lexicographic order, are matched with `W1 = 2t..2t+t^2`, each `W1` vertex joined to both
/// ends of its edge; the remaining vertices form `W0`. Inside `W` a random graph gives `W1`
/// degree `d - 2` and `W0` degree `d`.
pub fn planted_eigenvalue_graph(d: usize, n: usize, seed: u64) -> Result<PlantedGraph> {
    if d == 0 || d % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "degree must be even and positive, got {d}"
        )));
    }
    let t = d / 2;
    let w1_size = t * t;
    let need = 2 * t + w1_size;
    if n < need {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is below 2(d/2) + d^2/4 = {need} for d = {d}"
        )));
    }
    let w_size = n - 2 * t;
    let w_degrees: Vec<usize> = (0..w_size).map(|i| if i < w1_size { d - 2 } else { d }).collect();
    if !erdos_gallai(&w_degrees) {
        return Err(Error::InvalidParameter(format!(
            "no simple graph on the {w_size} remaining vertices with {w1_size} of degree {} and {} of degree {d}",
            d - 2,
            w_size - w1_size
        )));
    }
    let u: Vec<usize> = (0..t).collect();
    let v: Vec<usize> = (t..2 * t).collect();
    let w1: Vec<usize> = (2 * t..2 * t + w1_size).collect();
    let w0: Vec<usize> = (2 * t + w1_size..n).collect();

    let mut edges = Vec::new();
    let mut next = w1.iter();
    for &a in &u {
        for &b in &v {
            edges.push((a, b));
            let w = *next.next().expect("t^2 attached vertices");
            edges.push((a, w));
            edges.push((b, w));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (a, b) in sample_degree_sequence(&w_degrees, &mut rng)? {
        edges.push((a + 2 * t, b + 2 * t));
    }
    let graph = RegularGraph::from_edges(
        n,
        &edges,
        Provenance::new("planted", &[("d", d as u64), ("n", n as u64)], Some(seed)),
    )?;
    Ok(PlantedGraph { graph, u, v, w1, w0 })
}

/// `B` with `b_{g,h} = f(gh^{-1})`, rows and columns read as two copies of `G`.
#[derive(Clone, Debug)]
pub struct BipartiteCayley {
    pub group: Arc<GroupTable>,
    pub f: GroupFunction,
    pub matrix: DenseMatrix,
    /// Fraction of ones, when `f` is 0/1-valued.
    pub density: Option<f64>,
}

pub fn bipartite_cayley(f: &GroupFunction) -> BipartiteCayley {
    let c = cayley_matrix(f);
    let binary = f.values().iter().all(|&v| v == 0.0 || v == 1.0);
    let density = binary.then(|| f.values().iter().sum::<f64>() / f.values().len() as f64);
    BipartiteCayley {
        group: c.group,
        f: c.f,
        matrix: c.matrix,
        density,
    }
}

/// `sigma_max(B - pJ)`.
pub fn bipartite_deviation(b: &DenseMatrix, p: f64) -> f64 {
    spectral_norm(&DenseMatrix::from_fn(b.rows(), b.cols(), |i, j| b.get(i, j) - p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteReport {
    pub sigma: f64,
    pub groth_lower: f64,
    pub groth_upper: f64,
    /// `n sigma_max(B - pJ)`.
    pub target: f64,
    /// `|groth_lower - target| <= 1e-6 target`.
    pub tight: bool,
}

/// `sigma_max(B - pJ)` with the Grothendieck bracket of `B - pJ`, which should close at `n sigma`.
pub fn bipartite_cayley_deviation(
    b: &BipartiteCayley,
    p: f64,
    cfg: &BmConfig,
    exact_limit: usize,
) -> Result<BipartiteReport> {
    let shifted = b.f.map(|v| v - p);
    let m = cayley_matrix(&shifted).matrix;
    let sigma = spectral_norm(&m);
    let bracket = grothendieck_bounds(&m, cfg, exact_limit)?;
    let target = b.group.order() as f64 * sigma;
    Ok(BipartiteReport {
        sigma,
        groth_lower: bracket.lower,
        groth_upper: bracket.upper,
        target,
        tight: (bracket.lower - target).abs() <= 1e-6 * target.max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::spectral::symmetric_spectrum;
    use proptest::prelude::*;

    #[test]
    fn paley_examples() {
        let g = paley_graph(13).unwrap();
        assert_eq!((g.n, g.degree), (13, 6));
        let l2 = symmetric_spectrum(&g.matrix).unwrap().lambda2();
        assert!((l2 - (1.0 + 13f64.sqrt()) / 2.0).abs() < 1e-9);
        assert_eq!(paley_graph(5).unwrap().matrix, cycle_graph(5).unwrap().matrix);
        assert!(paley_graph(7).is_err());
        assert!(paley_graph(9).is_err());
    }

    #[test]
    fn small_families() {
        let c = cycle_graph(12).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.edges().len(), 12);
        assert_eq!(complete_graph(6).unwrap().degree, 5);
        let p = petersen_graph();
        assert_eq!((p.n, p.degree), (10, 3));
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn dihedral_cayley_graph() {
        let d4 = Arc::new(build_standard_group(&GroupFamily::Dihedral(4)).unwrap());
        let g = cayley_graph(d4.clone(), &[1, 3, 4]).unwrap();
        assert_eq!(g.degree, 3);
        assert!(cayley_graph(d4.clone(), &[1]).is_err());
        assert!(cayley_graph(d4, &[0, 4]).is_err());
    }

    #[test]
    fn graphical_sequences() {
        assert!(erdos_gallai(&[2, 2, 2]));
        assert!(erdos_gallai(&[0, 0]));
        assert!(!erdos_gallai(&[3, 1, 1]));
        assert!(!erdos_gallai(&[1, 1, 1]));
        assert!(!erdos_gallai(&[3, 3, 3, 1]));
        assert!(erdos_gallai(&[3, 3, 3, 3]));
    }

    #[test]
    fn random_regular_examples() {
        let m = random_regular(4, 1, 0).unwrap();
        assert_eq!(m.edges().len(), 2);
        let k = random_regular(6, 5, 3).unwrap();
        assert_eq!(k.matrix, complete_graph(6).unwrap().matrix);
        let g = random_regular(16, 3, 7).unwrap();
        assert!(g.matrix.row_sums().iter().all(|&s| s == 3.0));
        assert_eq!(g, random_regular(16, 3, 7).unwrap());
        assert!(random_regular(5, 3, 0).is_err());
        assert!(random_regular(4, 4, 0).is_err());
    }

    #[test]
    fn dense_random_regular_is_fast() {
        let g = random_regular(16, 6, 1).unwrap();
        assert_eq!(g.degree, 6);
        let g = random_regular(41, 13, 2).unwrap_err();
        assert!(matches!(g, Error::InvalidParameter(_)));
        let g = random_regular(40, 12, 2).unwrap();
        assert_eq!(g.degree, 12);
    }

    #[test]
    fn planted_small() {
        let e = planted_eigenvalue_graph(4, 12, 0).unwrap();
        assert_eq!((e.u.len(), e.v.len(), e.w1.len(), e.w0.len()), (2, 2, 4, 4));
        assert!(e.graph.matrix.row_sums().iter().all(|&s| s == 4.0));
        assert_eq!(e.residual(), 0.0);
    }

    #[test]
    fn planted_eight() {
        for seed in 0..5 {
            let e = planted_eigenvalue_graph(8, 24, seed).unwrap();
            assert_eq!((e.u.len(), e.w1.len(), e.w0.len()), (4, 16, 0));
            assert_eq!(e.graph.degree, 8);
            assert!(e.residual() <= 1e-12);
            let spec = symmetric_spectrum(&e.graph.matrix).unwrap();
            assert!(spec.values.iter().any(|&l| (l + 4.0).abs() < 1e-9));
        }
    }

    #[test]
    fn planted_infeasible() {
        assert!(planted_eigenvalue_graph(8, 23, 0).is_err());
        assert!(planted_eigenvalue_graph(3, 30, 0).is_err());
        assert!(planted_eigenvalue_graph(0, 30, 0).is_err());
        // the single W0 vertex would need degree 2 with one possible neighbour
        assert!(planted_eigenvalue_graph(2, 4, 0).is_err());
        assert!(planted_eigenvalue_graph(2, 5, 0).is_err());
        assert!(planted_eigenvalue_graph(2, 6, 0).is_ok());
    }

    #[test]
    fn bipartite_examples() {
        assert_eq!(bipartite_deviation(&DenseMatrix::ones(3, 5), 1.0), 0.0);
        let z4 = Arc::new(build_standard_group(&GroupFamily::Cyclic(4)).unwrap());
        let b = bipartite_cayley(&GroupFunction::indicator(z4, &[1]));
        assert_eq!(b.density, Some(0.25));
        let r = bipartite_cayley_deviation(&b, 0.25, &BmConfig::with_rank(8), 26).unwrap();
        assert!((r.sigma - 1.0).abs() < 1e-12);
        assert!((bipartite_deviation(&b.matrix, 0.25) - 1.0).abs() < 1e-12);
        assert!(r.tight, "{r:?}");
        assert!((r.groth_upper - 4.0).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn sampled_graphs_are_regular(n in 2usize..30, d in 1usize..8, seed in any::<u64>()) {
            prop_assume!(d < n && n * d % 2 == 0);
            let g = random_regular(n, d, seed).unwrap();
            prop_assert!(g.matrix.row_sums().iter().all(|&s| s == d as f64));
            prop_assert!(validate_adjacency(&g.matrix).is_ok());
        }

        #[test]
        fn deviation_invariant_under_translation(mask in 1u32..(1 << 10), h in 0usize..10) {
            let d5 = Arc::new(build_standard_group(&GroupFamily::Dihedral(5)).unwrap());
            let set: Vec<usize> = (0..10).filter(|&g| mask >> g & 1 == 1).collect();
            let b = bipartite_cayley(&GroupFunction::indicator(d5.clone(), &set));
            let p = b.density.unwrap();
            let perm: Vec<usize> = (0..10).map(|g| d5.mul(g, h)).collect();
            let moved = b.matrix.permuted(&perm);
            prop_assert_eq!(&moved, &b.matrix);
            prop_assert_eq!(bipartite_deviation(&moved, p), bipartite_deviation(&b.matrix, p));
        }
    }
}
