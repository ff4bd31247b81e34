//! Outer automorphisms acting on class labels and on the pair table, and
//! the orbit count `beta`.
//!
//! Inner automorphisms fix every class, so the action on labels factors
//! through Out = <diagonal> x <Frobenius> of order `d f`. Both generators
//! act symbolically: the diagonal automorphism swaps the two unipotent
//! classes for odd `q`, and the Frobenius map sends trace `t` to `t^p`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::psl2::{ClassInventory, ClassLabel, Psl2};
use crate::structure::Psi2Table;

/// Disjoint sets with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Dense block ids in order of first appearance.
    pub fn blocks(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out.push(id[r]);
        }
        (out, count)
    }
}

/// Generators of the induced action on inventory indices.
#[derive(Clone, Debug)]
pub struct AutAction {
    diagonal: Option<Vec<usize>>,
    frobenius: Vec<usize>,
    out_order: u64,
}

impl AutAction {
    pub fn new(group: &Psl2, inventory: &ClassInventory) -> Self {
        let k = group.field();
        let image = |label: ClassLabel, f: &dyn Fn(ClassLabel) -> ClassLabel| {
            inventory.find(&f(label)).expect("action preserves the label set")
        };
        let diagonal = (group.d() == 2).then(|| {
            inventory
                .labels()
                .map(|l| {
                    image(l, &|l| match l {
                        ClassLabel::Unipotent(Some(sq)) => ClassLabel::Unipotent(Some(sq.other())),
                        other => other,
                    })
                })
                .collect()
        });
        let frobenius = inventory
            .labels()
            .map(|l| {
                image(l, &|l| match l {
                    ClassLabel::Split(t) => ClassLabel::Split(k.sign_key(k.frobenius(t))),
                    ClassLabel::Nonsplit(t) => ClassLabel::Nonsplit(k.sign_key(k.frobenius(t))),
                    other => other,
                })
            })
            .collect();
        AutAction { diagonal, frobenius, out_order: group.out_order() }
    }

    pub fn diagonal(&self) -> Option<&[usize]> {
        self.diagonal.as_deref()
    }

    pub fn frobenius(&self) -> &[usize] {
        &self.frobenius
    }

    pub fn generators(&self) -> impl Iterator<Item = &[usize]> {
        self.diagonal.as_deref().into_iter().chain(std::iter::once(self.frobenius.as_slice()))
    }

    /// `|Out(S)| = d f`.
    pub fn out_order(&self) -> u64 {
        self.out_order
    }

    pub fn is_permutation(&self) -> bool {
        self.generators().all(|g| {
            let mut seen = vec![false; g.len()];
            g.iter().all(|&i| i < g.len() && !std::mem::replace(&mut seen[i], true))
        })
    }
}

/// Orbits of the action on the pairs of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Orbit id of each pair, aligned with `Psi2Table::pairs`.
    pub orbit_of: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Orbit partition of the table. Fails if a generator moves a pair out of
/// the table.
pub fn orbit_partition(psi2: &Psi2Table, action: &AutAction) -> Result<OrbitPartition> {
    let mut uf = UnionFind::new(psi2.len());
    for g in action.generators() {
        for (n, &(i, j)) in psi2.pairs().iter().enumerate() {
            let m = psi2.pair_index(g[i], g[j]).ok_or_else(|| {
                Error::NotInvariant(format!(
                    "automorphism maps ({}, {}) outside the pair table",
                    psi2.labels()[i],
                    psi2.labels()[j]
                ))
            })?;
            uf.union(n, m);
        }
    }
    let (orbit_of, count) = uf.blocks();
    let mut sizes = vec![0; count];
    for &o in &orbit_of {
        sizes[o] += 1;
    }
    Ok(OrbitPartition { orbit_of, sizes })
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaReport {
    pub q: u32,
    pub psi2: usize,
    pub out_order: u64,
    pub beta: usize,
    /// `|Psi2| / (d f) <= beta <= |Psi2|`.
    pub within_bounds: bool,
    pub even: bool,
    /// No orbit holds both `(C, D)` and `(D, C)`.
    pub swap_free: bool,
    /// Every orbit size divides `d f`.
    pub sizes_divide_out: bool,
    #[serde(skip)]
    pub partition: OrbitPartition,
}

impl BetaReport {
    pub fn consistent(&self) -> bool {
        self.within_bounds && self.even && self.swap_free && self.sizes_divide_out
    }

    /// The report with the orbit id of every pair.
    pub fn to_json(&self, psi2: &Psi2Table) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        let orbits: Vec<_> = psi2
            .pairs()
            .iter()
            .zip(&self.partition.orbit_of)
            .map(|(&(i, j), o)| serde_json::json!({ "pair": [psi2.labels()[i], psi2.labels()[j]], "orbit": o }))
            .collect();
        v["orbits"] = serde_json::Value::Array(orbits);
        v
    }
}

/// Number of Aut-orbits on the pair table, with the sanity checks it must
/// satisfy.
pub fn beta(psi2: &Psi2Table, action: &AutAction) -> Result<BetaReport> {
    if psi2.is_empty() {
        return Err(Error::EmptyPsi2);
    }
    let partition = orbit_partition(psi2, action)?;
    let beta = partition.count();
    let n = psi2.len();
    let out = action.out_order();
    let swap_free = psi2.pairs().iter().enumerate().all(|(a, &(i, j))| {
        let b = psi2.pair_index(j, i).expect("symmetric table");
        partition.orbit_of[a] != partition.orbit_of[b]
    });
    Ok(BetaReport {
        q: psi2.q(),
        psi2: n,
        out_order: out,
        beta,
        within_bounds: (beta as u64) * out >= n as u64 && beta <= n,
        even: beta % 2 == 0,
        swap_free,
        sizes_divide_out: partition.sizes.iter().all(|&s| out % s as u64 == 0),
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{psi2_structural, StructuralModel};

    fn setup(q: u64) -> (StructuralModel, Psi2Table, AutAction) {
        let m = StructuralModel::new(q).unwrap();
        let t = psi2_structural(&m);
        let a = AutAction::new(m.group(), m.inventory());
        (m, t, a)
    }

    fn moved(m: &StructuralModel, g: &[usize]) -> Vec<(String, String)> {
        (0..g.len())
            .filter(|&i| g[i] != i)
            .map(|i| (m.inventory().label(i).to_string(), m.inventory().label(g[i]).to_string()))
            .collect()
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 3));
        assert!(uf.union(3, 4));
        assert!(!uf.union(0, 4));
        assert_eq!(uf.blocks(), (vec![0, 1, 2, 0, 0], 3));
    }

    #[test]
    fn action_examples() {
        let (m, _, a) = setup(7);
        assert_eq!(moved(&m, a.diagonal().unwrap()), [("unip:sq".into(), "unip:nsq".into()), ("unip:nsq".into(), "unip:sq".into())]);
        assert!(moved(&m, a.frobenius()).is_empty());

        let (m, _, a) = setup(9);
        let f = moved(&m, a.frobenius());
        assert_eq!(f.len(), 2);
        let five = m.inventory().of_order(5);
        assert_eq!(a.frobenius()[five[0]], five[1]);
        assert_eq!(moved(&m, a.diagonal().unwrap()).len(), 2);

        let (m, _, a) = setup(4);
        assert!(a.diagonal().is_none());
        let five = m.inventory().of_order(5);
        assert_eq!(a.frobenius()[five[0]], five[1]);
    }

    #[test]
    fn beta_examples() {
        for (q, b) in [(5, 2), (7, 4), (9, 2), (4, 2)] {
            let (_, t, a) = setup(q);
            let r = beta(&t, &a).unwrap();
            assert_eq!(r.beta, b, "q = {q}");
            assert!(r.consistent());
        }
    }

    #[test]
    fn empty_table_is_rejected() {
        let (m, _, a) = setup(5);
        let empty = Psi2Table::new(5, crate::structure::Method::Structural, m.inventory().labels().collect(), vec![]);
        assert_eq!(beta(&empty, &a).err(), Some(Error::EmptyPsi2));
    }

    #[test]
    fn action_invariants_up_to_1024() {
        for q in crate::arith::prime_powers_in(4, 1024) {
            let (m, t, a) = setup(q);
            assert!(a.is_permutation());
            for g in a.generators() {
                for (i, info) in m.inventory().entries().iter().enumerate() {
                    let img = m.inventory().get(g[i]);
                    assert_eq!((info.order, info.size), (img.order, img.size));
                }
            }
            let r = beta(&t, &a).unwrap();
            assert!(r.consistent(), "q = {q}: {r:?}");
        }
    }

    #[test]
    fn frobenius_action_matches_matrices() {
        // applying the field automorphism to a representative lands in the image label
        for q in [8u64, 9, 16, 25, 27, 32, 49, 64, 81] {
            let (m, _, a) = setup(q);
            let g = m.group();
            for (i, label) in m.inventory().labels().enumerate() {
                let x = g.representative(&label).unwrap();
                let y = g.frobenius(&x).unwrap();
                assert_eq!(g.class_of(&y).unwrap(), m.inventory().label(a.frobenius()[i]));
            }
        }
    }

    #[test]
    fn diagonal_action_matches_matrices() {
        for q in [5u64, 7, 9, 25, 27, 49] {
            let (m, _, a) = setup(q);
            let g = m.group();
            let k = g.field();
            let conj = [k.primitive_element(), k.zero(), k.zero(), k.one()];
            for (i, label) in m.inventory().labels().enumerate() {
                let x = g.representative(&label).unwrap();
                let y = g.conjugate_by_gl(&x, conj).unwrap();
                assert_eq!(g.class_of(&y).unwrap(), m.inventory().label(a.diagonal().unwrap()[i]));
            }
        }
    }
}
