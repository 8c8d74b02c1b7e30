//! Cayley-graph matrices, vertex-transitivity certificates, and the lift of a
//! vertex-transitive matrix to a function on a transitive automorphism group.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{group_closure_capped, GroupFunction, GroupTable, PermGroup, Permutation};
use crate::matrix::DenseMatrix;

/// Largest matrix order accepted by the automorphism search.
pub const MAX_AUTOMORPHISM_ORDER: usize = 64;

/// `A(f)` with `a_{g,h} = f(g h^{-1})`.
#[derive(Clone, Debug)]
pub struct CayleyMatrix {
    pub group: Arc<GroupTable>,
    pub f: GroupFunction,
    pub matrix: DenseMatrix,
    /// `f(g) = f(g^{-1})` for all `g`, so the matrix is symmetric.
    pub symmetric: bool,
}

impl CayleyMatrix {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Common row sum `sum_g f(g)`.
    pub fn degree(&self) -> f64 {
        self.f.values().iter().sum()
    }
}

pub fn cayley_matrix(f: &GroupFunction) -> CayleyMatrix {
    let g = f.group().clone();
    let n = g.order();
    let matrix = DenseMatrix::from_fn(n, n, |a, b| f.at(g.mul(a, g.inv(b))));
    CayleyMatrix {
        symmetric: f.is_symmetric(),
        group: g,
        f: f.clone(),
        matrix,
    }
}

/// Adjacency matrix of `Cay(G, S)`: `a_{g,h} = 1` iff `g h^{-1} in S`.
pub fn cayley_from_set(group: Arc<GroupTable>, set: &[usize]) -> Result<CayleyMatrix> {
    if let Some(&s) = set.iter().find(|&&s| s >= group.order()) {
        return Err(Error::InvalidParameter(format!(
            "element {s} is outside a group of order {}",
            group.order()
        )));
    }
    Ok(cayley_matrix(&GroupFunction::indicator(group, set)))
}

/// `A - (d/n) J`.
pub fn center_regular(a: &DenseMatrix, d: f64) -> DenseMatrix {
    let shift = d / a.cols() as f64;
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) - shift)
}

/// One automorphism per vertex, each mapping the base vertex 0 to that vertex.
#[derive(Clone, Debug)]
pub struct TransitiveCertificate {
    pub base: usize,
    pub maps: Vec<Permutation>,
}

impl TransitiveCertificate {
    /// The group generated by the per-vertex automorphisms (transitive by construction).
    pub fn subgroup(&self, cap: usize) -> Result<PermGroup> {
        let degree = self.maps.len();
        let gens: Vec<Permutation> = self.maps.iter().filter(|p| !p.is_identity()).cloned().collect();
        group_closure_capped(degree, &gens, cap)
    }
}

pub fn is_automorphism(a: &DenseMatrix, p: &Permutation) -> bool {
    let n = a.rows();
    (0..n).all(|s| (0..n).all(|t| a.get(p.apply(s), p.apply(t)) == a.get(s, t)))
}

/// Bit pattern for exact entry comparison; `-0.0` and `0.0` coincide.
fn key(x: f64) -> u64 {
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

struct Search<'a> {
    a: &'a DenseMatrix,
    n: usize,
    sig: Vec<(u64, Vec<u64>, Vec<u64>)>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn compatible(&self, v: usize, w: usize) -> bool {
        self.sig[v] == self.sig[w]
    }

    fn consistent(&self, v: usize, w: usize) -> bool {
        (0..v).all(|u| {
            let iu = self.image[u];
            key(self.a.get(w, iu)) == key(self.a.get(v, u)) && key(self.a.get(iu, w)) == key(self.a.get(u, v))
        })
    }

    fn extend(&mut self, v: usize) -> bool {
        if v == self.n {
            return true;
        }
        for w in 0..self.n {
            if self.used[w] || !self.compatible(v, w) || !self.consistent(v, w) {
                continue;
            }
            self.image[v] = w;
            self.used[w] = true;
            if self.extend(v + 1) {
                return true;
            }
            self.used[w] = false;
        }
        false
    }
}

/// Searches, for each vertex `t`, the lexicographically first automorphism with `0 -> t`.
///
/// Returns `Ok(None)` when some vertex is unreachable (the matrix is not vertex-transitive).
/// Candidate images are pruned by equality of the diagonal entry and of the sorted
/// row and column value multisets.
pub fn find_transitive_automorphisms(a: &DenseMatrix) -> Result<Option<TransitiveCertificate>> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    if n > MAX_AUTOMORPHISM_ORDER {
        return Err(Error::Capacity {
            what: "automorphism search order",
            size: n,
            limit: MAX_AUTOMORPHISM_ORDER,
        });
    }
    let sig = (0..n)
        .map(|v| {
            let mut row: Vec<u64> = (0..n).map(|t| key(a.get(v, t))).collect();
            let mut col: Vec<u64> = (0..n).map(|s| key(a.get(s, v))).collect();
            row.sort_unstable();
            col.sort_unstable();
            (key(a.get(v, v)), row, col)
        })
        .collect();
    let mut search = Search {
        a,
        n,
        sig,
        image: vec![0; n],
        used: vec![false; n],
    };
    let mut maps = Vec::with_capacity(n);
    for t in 0..n {
        if !search.compatible(0, t) {
            return Ok(None);
        }
        search.used.iter_mut().for_each(|u| *u = false);
        search.image[0] = t;
        search.used[t] = true;
        if !search.extend(1) {
            return Ok(None);
        }
        maps.push(Permutation::new(search.image.clone())?);
    }
    Ok(Some(TransitiveCertificate { base: 0, maps }))
}

/// `f(g) = a_{g(0), 0}` on a transitive group of automorphisms of `A`.
///
/// The returned function lives on the multiplication table of `group`, elements
/// indexed in enumeration order.
pub fn lift_to_group(a: &DenseMatrix, group: &PermGroup) -> Result<GroupFunction> {
    let n = a.rows();
    if !a.is_square() || group.degree() != n {
        return Err(Error::Dimension {
            expected: format!("square matrix of order {}", group.degree()),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    for (gi, g) in group.elements().iter().enumerate() {
        for s in 0..n {
            for t in 0..n {
                if a.get(g.apply(s), g.apply(t)) != a.get(s, t) {
                    return Err(Error::NotAutomorphism { s, t, g: gi });
                }
            }
        }
    }
    let mut reached = vec![false; n];
    for g in group.elements() {
        reached[g.apply(0)] = true;
    }
    if let Some(v) = reached.iter().position(|&r| !r) {
        return Err(Error::NotTransitive(v));
    }
    let table = Arc::new(group.to_group_table()?);
    let values = group.elements().iter().map(|g| a.get(g.apply(0), 0)).collect();
    GroupFunction::new(table, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_standard_group, lex_permutations, GroupFamily, DEFAULT_CLOSURE_CAP};
    use proptest::prelude::*;

    fn group(f: GroupFamily) -> Arc<GroupTable> {
        Arc::new(build_standard_group(&f).unwrap())
    }

    fn petersen() -> DenseMatrix {
        let mut a = DenseMatrix::zeros(10, 10);
        let mut edge = |s: usize, t: usize| {
            a.set(s, t, 1.0);
            a.set(t, s, 1.0);
        };
        for i in 0..5 {
            edge(i, (i + 1) % 5);
            edge(i, i + 5);
            edge(i + 5, (i + 2) % 5 + 5);
        }
        a
    }

    #[test]
    fn cayley_matrix_examples() {
        let z2 = group(GroupFamily::Cyclic(2));
        let c = cayley_matrix(&GroupFunction::new(z2, vec![1.0, -1.0]).unwrap());
        assert_eq!(c.matrix.data(), &[1.0, -1.0, -1.0, 1.0]);
        assert!(c.symmetric);

        let z7 = group(GroupFamily::Cyclic(7));
        let cyc = cayley_from_set(z7, &[1, 6]).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let adj = (i + 1) % 7 == j || (j + 1) % 7 == i;
                assert_eq!(cyc.matrix.get(i, j), if adj { 1.0 } else { 0.0 });
            }
        }

        let z5 = group(GroupFamily::Cyclic(5));
        let dir = cayley_from_set(z5, &[1]).unwrap();
        assert!(!dir.symmetric);
        assert!(dir.matrix.row_sums().iter().all(|&r| r == 1.0));
    }

    #[test]
    fn paley_13_from_residues() {
        let z13 = group(GroupFamily::Cyclic(13));
        let residues: Vec<usize> = {
            let mut r: Vec<usize> = (1..13).map(|x| x * x % 13).collect();
            r.sort();
            r.dedup();
            r
        };
        assert_eq!(residues, vec![1, 3, 4, 9, 10, 12]);
        let p = cayley_from_set(z13, &residues).unwrap();
        assert!(p.symmetric);
        assert!(p.matrix.row_sums().iter().all(|&r| r == 6.0));
        let centered = center_regular(&p.matrix, 6.0);
        assert!(centered.row_sums().iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn empty_and_full_sets() {
        let g = group(GroupFamily::Dihedral(3));
        assert_eq!(
            cayley_from_set(g.clone(), &[]).unwrap().matrix,
            DenseMatrix::zeros(6, 6)
        );
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(
            cayley_from_set(g.clone(), &all).unwrap().matrix,
            DenseMatrix::ones(6, 6)
        );
        assert!(cayley_from_set(g, &[6]).is_err());
    }

    #[test]
    fn center_examples() {
        let j = DenseMatrix::ones(4, 4);
        assert_eq!(center_regular(&j, 4.0), DenseMatrix::zeros(4, 4));
        let k = DenseMatrix::from_fn(5, 5, |i, j| if i == j { 0.0 } else { 1.0 });
        let c = center_regular(&k, 4.0);
        let expect = DenseMatrix::from_fn(5, 5, |i, j| 0.2 - if i == j { 1.0 } else { 0.0 });
        for (x, y) in c.data().iter().zip(expect.data()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn petersen_is_vertex_transitive() {
        let a = petersen();
        let cert = find_transitive_automorphisms(&a).unwrap().expect("transitive");
        for (t, p) in cert.maps.iter().enumerate() {
            assert_eq!(p.apply(0), t);
            assert!(is_automorphism(&a, p));
        }
        let g = cert.subgroup(DEFAULT_CLOSURE_CAP).unwrap();
        assert!(g.is_transitive());
        assert_eq!(120 % g.order(), 0);
        let f = lift_to_group(&a, &g).unwrap();
        let ones = f.values().iter().filter(|&&v| v == 1.0).count();
        assert_eq!(ones * 10, 3 * g.order());
    }

    #[test]
    fn star_is_not_transitive() {
        let a = DenseMatrix::from_fn(4, 4, |i, j| if (i == 0) != (j == 0) { 1.0 } else { 0.0 });
        assert!(find_transitive_automorphisms(&a).unwrap().is_none());
    }

    #[test]
    fn search_limits() {
        assert!(find_transitive_automorphisms(&DenseMatrix::zeros(2, 3)).is_err());
        assert!(matches!(
            find_transitive_automorphisms(&DenseMatrix::zeros(65, 65)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn lift_of_cycle_over_rotations() {
        let n = 8;
        let z = group(GroupFamily::Cyclic(n));
        let cyc = cayley_from_set(z.clone(), &[1, n - 1]).unwrap();
        let rot = Permutation::from_cycles(n, &[&(0..n).collect::<Vec<_>>()]).unwrap();
        let g = crate::group::group_closure(n, &[rot]).unwrap();
        let f = lift_to_group(&cyc.matrix, &g).unwrap();
        // element k of the closure is the k-th power of the rotation, mapping 0 to k
        for (k, e) in g.elements().iter().enumerate() {
            let expect = cyc.matrix.get(e.apply(0), 0);
            assert_eq!(f.at(k), expect);
        }
        assert_eq!(f.values().iter().sum::<f64>(), 2.0);
        assert_eq!(f.at(1), 1.0);
        assert_eq!(f.at(n - 1), 1.0);
    }

    #[test]
    fn lift_of_all_ones_is_constant() {
        let j = DenseMatrix::ones(6, 6);
        let g = PermGroup::right_regular(&build_standard_group(&GroupFamily::Dihedral(3)).unwrap());
        let f = lift_to_group(&j, &g).unwrap();
        assert!(f.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn lift_rejects_non_automorphism() {
        let z = group(GroupFamily::Cyclic(5));
        let dir = cayley_from_set(z, &[1]).unwrap();
        let refl = Permutation::from_cycles(5, &[&[1, 4], &[2, 3]]).unwrap();
        let g = crate::group::group_closure(5, &[refl]).unwrap();
        assert!(matches!(
            lift_to_group(&dir.matrix, &g),
            Err(Error::NotAutomorphism { .. })
        ));
    }

    #[test]
    fn lift_rejects_intransitive_group() {
        let a = DenseMatrix::ones(4, 4);
        let g = crate::group::group_closure(4, &[Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert!(matches!(lift_to_group(&a, &g), Err(Error::NotTransitive(2))));
    }

    /// Brute force over all permutations: is there, for each vertex, an automorphism reaching it?
    fn brute_transitive(a: &DenseMatrix) -> bool {
        let n = a.rows();
        let mut reached = vec![false; n];
        for images in lex_permutations(n) {
            let p = Permutation::new(images.into_iter().map(|x| x as usize).collect()).unwrap();
            if is_automorphism(a, &p) {
                reached[p.apply(0)] = true;
            }
        }
        reached.into_iter().all(|r| r)
    }

    #[test]
    fn cayley_right_translations_are_automorphisms() {
        for fam in [
            GroupFamily::Cyclic(12),
            GroupFamily::Dihedral(5),
            GroupFamily::Symmetric(4),
            GroupFamily::Product(Box::new(GroupFamily::Dihedral(4)), Box::new(GroupFamily::Cyclic(3))),
        ] {
            let g = group(fam);
            let f = GroupFunction::from_fn(g.clone(), |x| ((x * 7 + 3) % 5) as f64 - 1.5);
            let c = cayley_matrix(&f);
            for p in PermGroup::right_regular(&g).elements() {
                assert!(is_automorphism(&c.matrix, p));
            }
        }
    }

    #[test]
    fn regular_lift_roundtrip_is_exact() {
        for fam in [
            GroupFamily::Cyclic(9),
            GroupFamily::Dihedral(4),
            GroupFamily::Symmetric(3),
        ] {
            let g = group(fam);
            let f = GroupFunction::from_fn(g.clone(), |x| (x as f64).sin());
            let c = cayley_matrix(&f);
            let reg = PermGroup::right_regular(&g);
            let lifted = lift_to_group(&c.matrix, &reg).unwrap();
            assert_eq!(lifted.values(), f.values());
            let again = cayley_matrix(&lifted);
            assert_eq!(again.matrix, c.matrix);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn search_agrees_with_brute_force(n in 2usize..=6, bits in any::<u32>(), weighted in any::<bool>()) {
            // random symmetric matrix from the bits; sometimes vertex-transitive by construction
            let mut a = DenseMatrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let on = bits >> (k % 32) & 1 == 1;
                    let v = if weighted { ((bits >> ((k + 3) % 32)) & 3) as f64 } else if on { 1.0 } else { 0.0 };
                    a.set(i, j, v);
                    a.set(j, i, v);
                    k += 1;
                }
            }
            let found = find_transitive_automorphisms(&a).unwrap();
            prop_assert_eq!(found.is_some(), brute_transitive(&a));
            if let Some(cert) = found {
                for p in &cert.maps {
                    prop_assert!(is_automorphism(&a, p));
                }
            }
        }

        #[test]
        fn circulants_are_found_transitive(n in 3usize..=7, mask in any::<u8>()) {
            let z = group(GroupFamily::Cyclic(n));
            let set: Vec<usize> = (1..n).filter(|&s| mask >> (s.min(n - s)) & 1 == 1).collect();
            let c = cayley_from_set(z, &set).unwrap();
            prop_assert!(brute_transitive(&c.matrix));
            prop_assert!(find_transitive_automorphisms(&c.matrix).unwrap().is_some());
        }
    }
}
