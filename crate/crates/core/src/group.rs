//! Finite groups given by multiplication tables, permutation groups, and
//! functions on groups with averaging-measure norms and convolution.
//!
//! Elements of a [`GroupTable`] are indices `0..order`; the identity is always
//! index `0`. Permutations compose left to right: `(g * h)(s) = h(g(s))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest group order for which a full multiplication table is materialized.
pub const MAX_TABLE_ORDER: usize = 4096;

/// Default cap on the number of elements enumerated by [`group_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Associativity is checked on every triple up to this order and sampled above it.
const EXHAUSTIVE_ASSOC_ORDER: usize = 256;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;

/// Built-in group families. Element indexing for each family is fixed:
///
/// * `Cyclic(n)`: `k` is `k mod n`.
/// * `Dihedral(m)`: index `k + m*x` is `r^k s^x`, with `s r s = r^{-1}`.
/// * `Symmetric(m)`: permutations of `0..m` in lexicographic order of their image arrays.
/// * `Product(g, h)`: index `i*|h| + j` is the pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupFamily {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupFamily>, Box<GroupFamily>),
}

impl GroupFamily {
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupFamily::Cyclic(n) => Some(*n),
            GroupFamily::Dihedral(m) => m.checked_mul(2),
            GroupFamily::Symmetric(m) => (1..=*m).try_fold(1usize, |acc, k| acc.checked_mul(k)),
            GroupFamily::Product(g, h) => g.order()?.checked_mul(h.order()?),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupFamily::Cyclic(n) => format!("Z{n}"),
            GroupFamily::Dihedral(m) => format!("D{m}"),
            GroupFamily::Symmetric(m) => format!("S{m}"),
            GroupFamily::Product(g, h) => format!("{}x{}", g.label(), h.label()),
        }
    }
}

/// A finite group as a validated multiplication table with identity at index 0.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    label: String,
    family: Option<GroupFamily>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Option<&GroupFamily> {
        self.family.as_ref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Row `a` of the multiplication table.
    pub fn row(&self, a: usize) -> &[u32] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    /// Builds a table from a flat row-major product array, checking every group axiom.
    ///
    /// The identity must already sit at index 0; see [`build_from_table`] for raw input.
    pub fn from_parts(
        label: impl Into<String>,
        order: usize,
        mul: Vec<u32>,
        family: Option<GroupFamily>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::GroupAxiom("order must be positive".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(Error::Capacity {
                what: "group table order",
                size: order,
                limit: MAX_TABLE_ORDER,
            });
        }
        if mul.len() != order * order {
            return Err(Error::Dimension {
                expected: format!("{} table entries", order * order),
                got: format!("{}", mul.len()),
            });
        }
        let inv = check_axioms(order, &mul)?;
        Ok(GroupTable {
            order,
            mul,
            inv,
            label: label.into(),
            family,
        })
    }

    /// Checks that a stored inverse array matches the table.
    fn check_inverses(&self, inv: &[u32]) -> Result<()> {
        if inv.len() != self.order {
            return Err(Error::Dimension {
                expected: format!("{} inverses", self.order),
                got: format!("{}", inv.len()),
            });
        }
        for (g, &i) in inv.iter().enumerate() {
            if i as usize != self.inv(g) {
                return Err(Error::GroupAxiom(format!(
                    "inv[{g}] = {i} but the table gives {}",
                    self.inv(g)
                )));
            }
        }
        Ok(())
    }
}

/// Validates closure, identity at 0, inverses and associativity; returns the inverse array.
fn check_axioms(n: usize, mul: &[u32]) -> Result<Vec<u32>> {
    if let Some(pos) = mul.iter().position(|&v| v as usize >= n) {
        return Err(Error::GroupAxiom(format!(
            "closure: mul[{}][{}] = {} is out of range",
            pos / n,
            pos % n,
            mul[pos]
        )));
    }
    let m = |a: usize, b: usize| mul[a * n + b] as usize;
    for g in 0..n {
        if m(0, g) != g || m(g, 0) != g {
            return Err(Error::GroupAxiom(format!(
                "identity: element 0 does not act trivially on {g}"
            )));
        }
    }
    let mut inv = vec![0u32; n];
    for g in 0..n {
        let h = (0..n)
            .find(|&h| m(g, h) == 0 && m(h, g) == 0)
            .ok_or_else(|| Error::GroupAxiom(format!("inverse: element {g} has no two-sided inverse")))?;
        inv[g] = h as u32;
    }
    let assoc = |a: usize, b: usize, c: usize| -> Result<()> {
        if m(m(a, b), c) != m(a, m(b, c)) {
            Err(Error::GroupAxiom(format!(
                "associativity fails on the triple ({a}, {b}, {c})"
            )))
        } else {
            Ok(())
        }
    };
    if n <= EXHAUSTIVE_ASSOC_ORDER {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assoc(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_ASSOC_TRIPLES {
            assoc(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
        }
    }
    Ok(inv)
}

/// Builds one of the built-in groups.
pub fn build_standard_group(family: &GroupFamily) -> Result<GroupTable> {
    let order = family.order().ok_or(Error::Capacity {
        what: "group order",
        size: usize::MAX,
        limit: MAX_TABLE_ORDER,
    })?;
    if order == 0 {
        return Err(Error::InvalidParameter(format!("{} has no elements", family.label())));
    }
    if order > MAX_TABLE_ORDER {
        return Err(Error::Capacity {
            what: "group table order",
            size: order,
            limit: MAX_TABLE_ORDER,
        });
    }
    let mul = standard_table(family);
    GroupTable::from_parts(family.label(), order, mul, Some(family.clone()))
}

fn standard_table(family: &GroupFamily) -> Vec<u32> {
    match family {
        GroupFamily::Cyclic(n) => {
            let n = *n;
            (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect()
        }
        GroupFamily::Dihedral(m) => {
            let m = *m;
            let n = 2 * m;
            let mut mul = vec![0u32; n * n];
            for i in 0..n {
                let (a, x) = (i % m, i / m);
                for j in 0..n {
                    let (b, y) = (j % m, j / m);
                    // r^a s^x r^b s^y = r^{a + (-1)^x b} s^{x+y}
                    let k = if x == 0 { (a + b) % m } else { (a + m - b) % m };
                    mul[i * n + j] = (k + m * ((x + y) % 2)) as u32;
                }
            }
            mul
        }
        GroupFamily::Symmetric(m) => {
            let perms = lex_permutations(*m);
            let index: HashMap<&[u32], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
            let n = perms.len();
            let mut mul = vec![0u32; n * n];
            let mut buf = vec![0u32; *m];
            for (i, g) in perms.iter().enumerate() {
                for (j, h) in perms.iter().enumerate() {
                    for s in 0..*m {
                        buf[s] = h[g[s] as usize];
                    }
                    mul[i * n + j] = index[buf.as_slice()] as u32;
                }
            }
            mul
        }
        GroupFamily::Product(g, h) => {
            let a = standard_table(g);
            let b = standard_table(h);
            let na = g.order().unwrap();
            let nb = h.order().unwrap();
            let n = na * nb;
            let mut mul = vec![0u32; n * n];
            for i in 0..n {
                let (i1, i2) = (i / nb, i % nb);
                for j in 0..n {
                    let (j1, j2) = (j / nb, j % nb);
                    let k1 = a[i1 * na + j1] as usize;
                    let k2 = b[i2 * nb + j2] as usize;
                    mul[i * n + j] = (k1 * nb + k2) as u32;
                }
            }
            mul
        }
    }
}

/// All permutations of `0..m` in lexicographic order; the identity comes first.
pub fn lex_permutations(m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..m as u32).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Validates a raw square table and relabels its identity to index 0.
///
/// The identity and the element at index 0 swap labels when they differ.
pub fn build_from_table(raw: &[Vec<usize>]) -> Result<GroupTable> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::GroupAxiom("empty table".into()));
    }
    if let Some((r, row)) = raw.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::Dimension {
            expected: format!("{n} columns in row {r}"),
            got: format!("{}", row.len()),
        });
    }
    for (a, row) in raw.iter().enumerate() {
        if let Some((b, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::GroupAxiom(format!(
                "closure: mul[{a}][{b}] = {v} is out of range"
            )));
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|g| raw[e][g] == g && raw[g][e] == g))
        .ok_or_else(|| Error::GroupAxiom("identity: no two-sided identity element".into()))?;
    let relabel = |x: usize| -> usize {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[relabel(a) * n + relabel(b)] = relabel(raw[a][b]) as u32;
        }
    }
    GroupTable::from_parts("custom", n, mul, None)
}

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (s, &t) in images.iter().enumerate() {
            if t >= n {
                return Err(Error::Permutation(format!("image {t} of {s} is outside 0..{n}")));
            }
            if seen[t] {
                return Err(Error::Permutation(format!("{t} is hit twice")));
            }
            seen[t] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|t| t as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &s) in cycle.iter().enumerate() {
                if s >= degree {
                    return Err(Error::Permutation(format!("cycle entry {s} is outside 0..{degree}")));
                }
                images[s] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.images[s] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&t| t as usize).collect()
    }

    /// The product `self * other`, acting as `other(self(s))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&s| other.images[s as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (s, &t) in self.images.iter().enumerate() {
            images[t as usize] = s as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(s, &t)| s == t as usize)
    }
}

/// A permutation group given by generators and its enumerated elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// True when every point of `0..degree` is the image of 0 under some element.
    pub fn is_transitive(&self) -> bool {
        let mut hit = vec![false; self.degree];
        for g in &self.elements {
            if self.degree > 0 {
                hit[g.apply(0)] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    /// The right-regular action of a table group on its own elements: element `h`
    /// of the result is the permutation `g -> g h`, listed in index order.
    pub fn right_regular(table: &GroupTable) -> PermGroup {
        let n = table.order();
        let elements: Vec<Permutation> = (0..n)
            .map(|h| Permutation {
                images: (0..n).map(|g| table.mul(g, h) as u32).collect(),
            })
            .collect();
        PermGroup {
            degree: n,
            generators: elements[1.min(n)..].to_vec(),
            elements,
        }
    }

    /// Multiplication table of this group, elements indexed in enumeration order.
    pub fn to_group_table(&self) -> Result<GroupTable> {
        let n = self.order();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Capacity {
                what: "group table order",
                size: n,
                limit: MAX_TABLE_ORDER,
            });
        }
        if !self.elements[0].is_identity() {
            return Err(Error::GroupAxiom("first enumerated element is not the identity".into()));
        }
        let index: HashMap<&Permutation, usize> = self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mul = vec![0u32; n * n];
        for (i, g) in self.elements.iter().enumerate() {
            for (j, h) in self.elements.iter().enumerate() {
                let gh = g.then(h);
                let k = *index
                    .get(&gh)
                    .ok_or_else(|| Error::GroupAxiom(format!("product of elements {i} and {j} is not enumerated")))?;
                mul[i * n + j] = k as u32;
            }
        }
        GroupTable::from_parts(format!("perm-group(degree {})", self.degree), n, mul, None)
    }
}

/// Enumerates the group generated by `gens` with the default element cap.
pub fn group_closure(degree: usize, gens: &[Permutation]) -> Result<PermGroup> {
    group_closure_capped(degree, gens, DEFAULT_CLOSURE_CAP)
}

/// Breadth-first closure from the identity, generators applied on the right in list order.
pub fn group_closure_capped(degree: usize, gens: &[Permutation], cap: usize) -> Result<PermGroup> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::Permutation(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    seen.insert(id, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = elements[i].then(g);
            if seen.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Capacity {
                    what: "permutation group closure",
                    size: elements.len() + 1,
                    limit: cap,
                });
            }
            seen.insert(next.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
    })
}

/// A scalar-valued function on the elements of a group.
#[derive(Clone, Debug)]
pub struct GroupFunction<T: Scalar = f64> {
    group: Arc<GroupTable>,
    values: Vec<T>,
}

pub type ComplexGroupFunction = GroupFunction<num_complex::Complex64>;

impl<T: Scalar> GroupFunction<T> {
    pub fn new(group: Arc<GroupTable>, values: Vec<T>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Dimension {
                expected: format!("{} values", group.order()),
                got: format!("{}", values.len()),
            });
        }
        Ok(GroupFunction { group, values })
    }

    pub fn from_fn(group: Arc<GroupTable>, f: impl FnMut(usize) -> T) -> Self {
        let values = (0..group.order()).map(f).collect();
        GroupFunction { group, values }
    }

    pub fn constant(group: Arc<GroupTable>, c: T) -> Self {
        let values = vec![c; group.order()];
        GroupFunction { group, values }
    }

    /// Indicator of a set of elements. Indices outside the group are ignored.
    pub fn indicator(group: Arc<GroupTable>, set: &[usize]) -> Self {
        let mut values = vec![T::zero(); group.order()];
        for &s in set {
            if s < values.len() {
                values[s] = T::one();
            }
        }
        GroupFunction { group, values }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn at(&self, g: usize) -> T {
        self.values[g]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> GroupFunction<U> {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// True when `f(g) = f(g^{-1})` for every element.
    pub fn is_symmetric(&self) -> bool {
        self.group
            .elements()
            .all(|g| self.values[g] == self.values[self.group.inv(g)])
    }

    pub fn same_group(&self, other: &GroupFunction<impl Scalar>) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }
}

impl GroupFunction<f64> {
    pub fn to_complex(&self) -> ComplexGroupFunction {
        self.map(|v| num_complex::Complex64::new(v, 0.0))
    }
}

/// `(f1 * f2)(g) = E_h f1(g h^{-1}) f2(h)` under the averaging measure.
pub fn convolve<T: Scalar>(f1: &GroupFunction<T>, f2: &GroupFunction<T>) -> Result<GroupFunction<T>> {
    if !f1.same_group(f2) {
        return Err(Error::GroupMismatch(format!(
            "{} vs {}",
            f1.group.label(),
            f2.group.label()
        )));
    }
    let g_tab = &f1.group;
    let n = g_tab.order();
    let scale = 1.0 / n as f64;
    let values = (0..n)
        .map(|g| {
            let mut acc = T::zero();
            for h in 0..n {
                acc += f1.values[g_tab.mul(g, g_tab.inv(h))] * f2.values[h];
            }
            acc.scale(scale)
        })
        .collect();
    Ok(GroupFunction {
        group: g_tab.clone(),
        values,
    })
}

/// `||f||_p = (E_g |f(g)|^p)^{1/p}`; `p = f64::INFINITY` gives `max |f(g)|`.
///
/// Panics if `p < 1` or `p` is NaN.
pub fn function_norm<T: Scalar>(f: &GroupFunction<T>, p: f64) -> f64 {
    assert!(p >= 1.0, "function_norm requires p >= 1, got {p}");
    if p.is_infinite() {
        return f.values.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    }
    let n = f.values.len() as f64;
    let mean = f.values.iter().map(|v| v.modulus().powf(p)).sum::<f64>() / n;
    mean.powf(1.0 / p)
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    label: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<GroupFamily>,
}

impl Serialize for GroupTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupDoc {
            label: self.label.clone(),
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            family: self.family.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GroupDoc::deserialize(d)?;
        let table =
            GroupTable::from_parts(doc.label, doc.order, doc.mul, doc.family).map_err(serde::de::Error::custom)?;
        table.check_inverses(&doc.inv).map_err(serde::de::Error::custom)?;
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct PermGroupDoc {
    degree: usize,
    generators: Vec<Vec<usize>>,
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermGroupDoc {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.images()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PermGroupDoc::deserialize(d)?;
        let gens = doc
            .generators
            .into_iter()
            .map(Permutation::new)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        group_closure(doc.degree, &gens).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn table(f: GroupFamily) -> Arc<GroupTable> {
        Arc::new(build_standard_group(&f).unwrap())
    }

    #[test]
    fn cyclic_four_arithmetic() {
        let z4 = table(GroupFamily::Cyclic(4));
        assert_eq!(z4.mul(1, 3), 0);
        assert_eq!(z4.inv(1), 3);
        assert!(z4.is_abelian());
    }

    #[test]
    fn dihedral_four_is_nonabelian() {
        let d4 = table(GroupFamily::Dihedral(4));
        assert_eq!(d4.order(), 8);
        assert_ne!(d4.mul(1, 4), d4.mul(4, 1));
        let commuting = (0..8)
            .flat_map(|a| (0..8).map(move |b| (a, b)))
            .filter(|&(a, b)| d4.mul(a, b) == d4.mul(b, a))
            .count();
        assert!(commuting < 64);
    }

    #[test]
    fn klein_four_is_self_inverse() {
        let v4 = table(GroupFamily::Product(
            Box::new(GroupFamily::Cyclic(2)),
            Box::new(GroupFamily::Cyclic(2)),
        ));
        assert_eq!(v4.order(), 4);
        assert!(v4.elements().all(|g| v4.inv(g) == g));
    }

    #[test]
    fn symmetric_three_matches_lex_order() {
        let s3 = table(GroupFamily::Symmetric(3));
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let perms = lex_permutations(3);
        for i in 0..6 {
            for j in 0..6 {
                let g = Permutation::new(perms[i].iter().map(|&x| x as usize).collect()).unwrap();
                let h = Permutation::new(perms[j].iter().map(|&x| x as usize).collect()).unwrap();
                let k = s3.mul(i, j);
                assert_eq!(
                    g.then(&h).images(),
                    perms[k].iter().map(|&x| x as usize).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn oversized_symmetric_is_capacity_error() {
        let err = build_standard_group(&GroupFamily::Symmetric(8)).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
        assert!(matches!(
            build_standard_group(&GroupFamily::Symmetric(30)).unwrap_err(),
            Error::Capacity { .. }
        ));
    }

    #[test]
    fn raw_table_z2_and_failures() {
        let z2 = build_from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.inv(1), 1);

        let err = build_from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        match err {
            Error::GroupAxiom(msg) => assert!(msg.contains("element 1"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn raw_table_identity_relabeled() {
        // Z3 with identity stored at index 2
        let raw = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = build_from_table(&raw).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.elements().all(|x| g.mul(0, x) == x));
    }

    #[test]
    fn raw_table_associativity_failure_names_triple() {
        // a Latin square with identity that is not associative
        let raw = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match build_from_table(&raw).unwrap_err() {
            Error::GroupAxiom(msg) => assert!(msg.contains("associativity"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn d4_serialization_is_byte_stable() {
        let d4 = build_standard_group(&GroupFamily::Dihedral(4)).unwrap();
        let text = serde_json::to_string(&d4).unwrap();
        let back: GroupTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d4);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn corrupted_inverse_rejected() {
        let z3 = build_standard_group(&GroupFamily::Cyclic(3)).unwrap();
        let mut v: serde_json::Value = serde_json::to_value(&z3).unwrap();
        v["inv"] = serde_json::json!([0, 1, 2]);
        assert!(serde_json::from_value::<GroupTable>(v).is_err());
    }

    #[test]
    fn closure_examples() {
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let c = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let s3 = group_closure(3, &[t, c]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(s3.is_transitive());

        let trivial = group_closure(5, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert!(trivial.elements()[0].is_identity());

        let cyc = Permutation::from_cycles(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]]).unwrap();
        let z8 = group_closure(8, &[cyc.clone()]).unwrap();
        assert_eq!(z8.order(), 8);
        let mut p = Permutation::identity(8);
        for e in z8.elements() {
            assert_eq!(*e, p);
            p = p.then(&cyc);
        }
    }

    #[test]
    fn closure_cap_is_enforced() {
        let t = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
        let c = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
        let err = group_closure_capped(6, &[t, c], 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { limit: 100, .. }));
    }

    /// Fixpoint of pairwise products, independent of the breadth-first closure.
    fn brute_force_order(degree: usize, gens: &[Permutation]) -> usize {
        let mut set: std::collections::BTreeSet<Permutation> = gens.iter().cloned().collect();
        set.insert(Permutation::identity(degree));
        loop {
            let items: Vec<_> = set.iter().cloned().collect();
            let before = set.len();
            for a in &items {
                for b in &items {
                    set.insert(a.then(b));
                }
            }
            if set.len() == before {
                return before;
            }
        }
    }

    #[test]
    fn perm_group_table_matches_composition() {
        let gens = vec![
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            Permutation::from_cycles(5, &[&[1, 4], &[2, 3]]).unwrap(),
        ];
        let g = group_closure(5, &gens).unwrap();
        assert_eq!(g.order(), 10);
        let tab = g.to_group_table().unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(g.elements()[tab.mul(i, j)], g.elements()[i].then(&g.elements()[j]));
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let z4 = table(GroupFamily::Cyclic(4));
        let f1 = GroupFunction::new(z4.clone(), vec![0.5, -1.0, 2.0, 3.0]).unwrap();
        let mut delta = vec![0.0; 4];
        delta[0] = 4.0;
        let point = GroupFunction::new(z4.clone(), delta).unwrap();
        assert_eq!(convolve(&f1, &point).unwrap().values(), f1.values());

        let c1 = GroupFunction::constant(z4.clone(), 3.0);
        let c2 = GroupFunction::constant(z4.clone(), -2.0);
        let c = convolve(&c1, &c2).unwrap();
        assert!(c.values().iter().all(|&v| v == -6.0));

        let ind: GroupFunction = GroupFunction::indicator(z4.clone(), &[1, 3]);
        let sq = convolve(&ind, &ind).unwrap();
        // direct summation: E_h 1[-h in {1,3}] 1[h in {1,3}]
        let mut direct = 0.0;
        for h in 0..4usize {
            let a = if [1, 3].contains(&((4 - h) % 4)) { 1.0 } else { 0.0 };
            let b = if [1, 3].contains(&h) { 1.0 } else { 0.0 };
            direct += a * b;
        }
        assert_eq!(sq.at(0), direct / 4.0);
        assert_eq!(sq.at(0), 0.5);
    }

    #[test]
    fn convolution_group_mismatch() {
        let a = GroupFunction::constant(table(GroupFamily::Cyclic(4)), 1.0);
        let b = GroupFunction::constant(table(GroupFamily::Cyclic(2)), 1.0);
        assert!(matches!(convolve(&a, &b), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn norm_examples() {
        let z2 = table(GroupFamily::Cyclic(2));
        let one = GroupFunction::constant(z2.clone(), 1.0);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_relative_eq!(function_norm(&one, p), 1.0, epsilon = 1e-15);
        }
        let f = GroupFunction::new(z2, vec![3.0, -4.0]).unwrap();
        assert_relative_eq!(function_norm(&f, 2.0), (25.0f64 / 2.0).sqrt(), epsilon = 1e-14);
        assert_eq!(function_norm(&f, f64::INFINITY), 4.0);
        assert_relative_eq!(function_norm(&f, 1.0), 3.5, epsilon = 1e-15);
    }

    fn small_family() -> impl Strategy<Value = GroupFamily> {
        prop_oneof![
            (1usize..=24).prop_map(GroupFamily::Cyclic),
            (1usize..=12).prop_map(GroupFamily::Dihedral),
            (1usize..=4).prop_map(GroupFamily::Symmetric),
            ((1usize..=4), (1usize..=3)).prop_map(|(a, b)| GroupFamily::Product(
                Box::new(GroupFamily::Dihedral(a)),
                Box::new(GroupFamily::Cyclic(b))
            )),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn convolution_is_associative(family in small_family(), seed in any::<u64>()) {
            let g = table(family);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rand_fn = || GroupFunction::from_fn(g.clone(), |_| rng.random_range(-1.0..1.0));
            let (a, b, c) = (rand_fn(), rand_fn(), rand_fn());
            let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
            let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
            for (x, y) in left.values().iter().zip(right.values()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn norms_monotone_in_p(values in proptest::collection::vec(-10.0f64..10.0, 1..30)) {
            let g = table(GroupFamily::Cyclic(values.len()));
            let f = GroupFunction::new(g, values).unwrap();
            let ps = [1.0, 2.0, 4.0, f64::INFINITY];
            for w in ps.windows(2) {
                prop_assert!(function_norm(&f, w[0]) <= function_norm(&f, w[1]) * (1.0 + 1e-12) + 1e-300);
            }
        }

        #[test]
        fn closure_matches_pairwise_fixpoint(seed in any::<u64>(), ngen in 0usize..3) {
            let degree = 5;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens: Vec<_> = (0..ngen).map(|_| {
                let mut imgs: Vec<usize> = (0..degree).collect();
                for i in (1..degree).rev() {
                    let j = rng.random_range(0..=i);
                    imgs.swap(i, j);
                }
                Permutation::new(imgs).unwrap()
            }).collect();
            let g = group_closure(degree, &gens).unwrap();
            prop_assert_eq!(g.order(), brute_force_order(degree, &gens));
            prop_assert_eq!(120 % g.order(), 0);
        }
    }
}
