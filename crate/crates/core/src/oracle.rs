//! Brute-force ground truth for small `q`.
//!
//! Every element of PSL(2, q) gets a dense index; products go through
//! precomputed field tables and a `q^4` lookup, so a subgroup closure is a
//! breadth-first search over indices. Used to certify the symbolic classes,
//! the subgroup profiles and the structural pair table.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::GfElem;
use crate::psl2::{ClassInventory, ClassLabel, Mat, Psl2, Psl2Element, DEFAULT_ENUMERATION_CAP};
use crate::structure::{Method, Psi2Table, StructuralModel, SubgroupKind};

pub const DEFAULT_ORACLE_CAP: u32 = DEFAULT_ENUMERATION_CAP;

/// Environment variable overriding the oracle cap.
pub const ORACLE_CAP_ENV: &str = "INVGEN_ORACLE_CAP";

/// The oracle cap from [`ORACLE_CAP_ENV`], or the default.
pub fn oracle_cap() -> u32 {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub cap: u32,
    /// Stop a closure once it exceeds `|S| / 5`. A proper subgroup of a
    /// simple group with no subgroup of index below 5 cannot get that far.
    pub early_exit: bool,
    /// Test one `y` per orbit of the centraliser of the fixed `x`.
    pub centraliser_reduction: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cap: oracle_cap(), early_exit: true, centraliser_reduction: true }
    }
}

const NONE: u32 = u32::MAX;

struct Scratch {
    seen: Vec<u32>,
    stamp: u32,
    queue: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { seen: vec![0; n], stamp: 0, queue: Vec::with_capacity(n) }
    }

    fn reset(&mut self) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        self.queue.clear();
    }
}

pub struct Oracle {
    group: Psl2,
    inventory: ClassInventory,
    options: OracleOptions,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    elems: Vec<[u16; 4]>,
    index: Vec<u32>,
    inverse: Vec<u32>,
    class: Vec<u16>,
    identity: u32,
}

/// Labels met by one subgroup representative, next to the profile's claim.
#[derive(Clone, Debug, Serialize)]
pub struct FusionRecord {
    pub kind: SubgroupKind,
    pub expected_order: u64,
    pub order: u64,
    pub labels: Vec<ClassLabel>,
    pub profile: Vec<ClassLabel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub q: u32,
    pub records: Vec<FusionRecord>,
    /// Orders match and, per kind, the label sets agree as a multiset
    /// (variant numbering is a convention, so it is not compared).
    pub consistent: bool,
}

impl Oracle {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_options(Psl2::from_order(q)?, OracleOptions::default())
    }

    pub fn with_options(group: Psl2, options: OracleOptions) -> Result<Self> {
        if group.q() > options.cap {
            return Err(Error::OracleCap { q: group.q(), cap: options.cap });
        }
        let inventory = group.inventory()?;
        let k = group.field();
        let q = k.q() as usize;
        let el = |i: usize| GfElem::from_index(i as u32);
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = k.add(el(a), el(b)).index() as u16;
                mul[a * q + b] = k.mul(el(a), el(b)).index() as u16;
            }
        }
        let neg: Vec<u16> = (0..q).map(|a| k.neg(el(a)).index() as u16).collect();
        let mut oracle = Oracle {
            group,
            inventory,
            options,
            q,
            add,
            mul,
            neg,
            elems: Vec::new(),
            index: vec![NONE; q * q * q * q],
            inverse: Vec::new(),
            class: Vec::new(),
            identity: 0,
        };
        let elems: Vec<[u16; 4]> = oracle
            .group
            .enumerate(options.cap)?
            .map(|x| x.entries().map(|e| e.index() as u16))
            .collect();
        for (i, m) in elems.iter().enumerate() {
            let minus = m.map(|e| oracle.neg[e as usize]);
            let (k1, k2) = (oracle.key(m), oracle.key(&minus));
            oracle.index[k1] = i as u32;
            oracle.index[k2] = i as u32;
        }
        oracle.elems = elems;
        oracle.identity = oracle.lookup(&[1, 0, 0, 1]);
        oracle.inverse = (0..oracle.elems.len())
            .map(|i| {
                let [a, b, c, d] = oracle.elems[i];
                oracle.lookup(&[d, oracle.neg[b as usize], oracle.neg[c as usize], a])
            })
            .collect();
        oracle.class = (0..oracle.elems.len())
            .map(|i| {
                let label = oracle.group.class_of_mat(&oracle.mat(i as u32));
                oracle.inventory.find(&label).expect("inventory is complete") as u16
            })
            .collect();
        Ok(oracle)
    }

    pub fn group(&self) -> &Psl2 {
        &self.group
    }

    pub fn inventory(&self) -> &ClassInventory {
        &self.inventory
    }

    pub fn options(&self) -> OracleOptions {
        self.options
    }

    /// Number of enumerated elements, `|S|`.
    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn element(&self, i: u32) -> Psl2Element {
        self.group.wrap(self.mat(i))
    }

    pub fn index_of(&self, x: &Psl2Element) -> Result<u32> {
        if x.q() != self.group.q() {
            return Err(Error::MixedContexts(x.q(), self.group.q()));
        }
        Ok(self.lookup(&x.entries().map(|e| e.index() as u16)))
    }

    /// Inventory index of the class of element `i`.
    pub fn class_index(&self, i: u32) -> usize {
        self.class[i as usize] as usize
    }

    fn mat(&self, i: u32) -> Mat {
        self.elems[i as usize].map(|e| GfElem::from_index(e as u32))
    }

    #[inline]
    fn key(&self, m: &[u16; 4]) -> usize {
        let q = self.q;
        ((m[0] as usize * q + m[1] as usize) * q + m[2] as usize) * q + m[3] as usize
    }

    #[inline]
    fn lookup(&self, m: &[u16; 4]) -> u32 {
        let i = self.index[self.key(m)];
        debug_assert_ne!(i, NONE, "not a determinant-one matrix");
        i
    }

    fn lookup_elems(&self, m: [GfElem; 4]) -> Result<u32> {
        let i = self.index[self.key(&m.map(|e| e.index() as u16))];
        if i == NONE {
            return Err(Error::DeterminantNotOne);
        }
        Ok(i)
    }

    #[inline]
    fn mul_idx(&self, x: u32, y: u32) -> u32 {
        let q = self.q;
        let a = &self.elems[x as usize];
        let b = &self.elems[y as usize];
        let m = |i: u16, j: u16| self.mul[i as usize * q + j as usize] as usize;
        let s = |i: usize, j: usize| self.add[i * q + j];
        self.lookup(&[
            s(m(a[0], b[0]), m(a[1], b[2])),
            s(m(a[0], b[1]), m(a[1], b[3])),
            s(m(a[2], b[0]), m(a[3], b[2])),
            s(m(a[2], b[1]), m(a[3], b[3])),
        ])
    }

    #[inline]
    fn conj(&self, g: u32, y: u32) -> u32 {
        self.mul_idx(self.mul_idx(g, y), self.inverse[g as usize])
    }

    fn order_of(&self, x: u32) -> u64 {
        let mut n = 1;
        let mut acc = x;
        while acc != self.identity {
            acc = self.mul_idx(acc, x);
            n += 1;
        }
        n
    }

    /// Breadth-first closure from the identity by right multiplication.
    /// Returns `true` early once `limit` is exceeded.
    fn close(&self, gens: &[u32], scratch: &mut Scratch, limit: Option<usize>) -> bool {
        scratch.reset();
        scratch.seen[self.identity as usize] = scratch.stamp;
        scratch.queue.push(self.identity);
        let mut head = 0;
        while head < scratch.queue.len() {
            let e = scratch.queue[head];
            head += 1;
            for &g in gens {
                let p = self.mul_idx(e, g);
                if scratch.seen[p as usize] != scratch.stamp {
                    scratch.seen[p as usize] = scratch.stamp;
                    scratch.queue.push(p);
                    if limit.is_some_and(|l| scratch.queue.len() > l) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn generates_idx(&self, x: u32, y: u32, scratch: &mut Scratch) -> bool {
        let n = self.size();
        if self.options.early_exit {
            self.close(&[x, y], scratch, Some(n / 5))
        } else {
            self.close(&[x, y], scratch, None);
            scratch.queue.len() == n
        }
    }

    /// Whether `<x, y>` is the whole group.
    pub fn generates(&self, x: &Psl2Element, y: &Psl2Element) -> Result<bool> {
        let (x, y) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self.generates_idx(x, y, &mut Scratch::new(self.size())))
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Psl2Element]) -> Result<Vec<Psl2Element>> {
        let idx = gens.iter().map(|g| self.index_of(g)).collect::<Result<Vec<_>>>()?;
        let mut scratch = Scratch::new(self.size());
        self.close(&idx, &mut scratch, None);
        Ok(scratch.queue.iter().map(|&i| self.element(i)).collect())
    }

    fn centraliser(&self, x: u32) -> Vec<u32> {
        (0..self.size() as u32).filter(|&g| self.mul_idx(g, x) == self.mul_idx(x, g)).collect()
    }

    /// For the fixed `x`, the classes `D` with `<x, y> = S` for every `y` in `D`.
    fn generating_classes(&self, x: u32, scratch: &mut Scratch) -> Vec<bool> {
        let k = self.inventory.len();
        let mut ok = vec![true; k];
        for (d, flag) in ok.iter_mut().enumerate() {
            *flag = !self.inventory.label(d).is_identity();
        }
        let cent = if self.options.centraliser_reduction { self.centraliser(x) } else { vec![] };
        let mut covered = vec![false; self.size()];
        for y in 0..self.size() as u32 {
            let d = self.class_index(y);
            if !ok[d] || covered[y as usize] {
                continue;
            }
            for &g in &cent {
                covered[self.conj(g, y) as usize] = true;
            }
            if !self.generates_idx(x, y, scratch) {
                ok[d] = false;
            }
        }
        ok
    }

    /// Whether `x` together with every element of class `d` generates.
    /// Any `x` of a class gives the same answer.
    pub fn generates_with_class(&self, x: &Psl2Element, d: usize) -> Result<bool> {
        let x = self.index_of(x)?;
        Ok(self.generating_classes(x, &mut Scratch::new(self.size()))[d])
    }

    /// The pair table by exhaustion: one representative `x` per class,
    /// every `y` of the other class (up to centraliser orbits).
    pub fn psi2(&self) -> Psi2Table {
        let k = self.inventory.len();
        let rows: Vec<Vec<(usize, usize)>> = (0..k)
            .into_par_iter()
            .map_init(
                || Scratch::new(self.size()),
                |scratch, c| {
                    let label = self.inventory.label(c);
                    if label.is_identity() {
                        return vec![];
                    }
                    let x = self.group.representative(&label).expect("inventory label");
                    let x = self.index_of(&x).expect("same group");
                    let ok = self.generating_classes(x, scratch);
                    (0..k).filter(|&d| ok[d]).map(|d| (c, d)).collect()
                },
            )
            .collect();
        Psi2Table::new(
            self.group.q(),
            Method::Oracle,
            self.inventory.labels().collect(),
            rows.into_iter().flatten().collect(),
        )
    }

    /// Non-identity labels in no generating pair.
    pub fn isolated_vertices(&self) -> Vec<ClassLabel> {
        let t = self.psi2();
        t.isolated().into_iter().map(|i| t.labels()[i]).collect()
    }

    fn elementary_generators(&self) -> Vec<u32> {
        let k = self.group.field();
        let w = k.primitive_element();
        let (z, o) = (k.zero(), k.one());
        (0..k.f())
            .flat_map(|i| {
                let a = k.pow(w, i as u64);
                [[o, a, z, o], [o, z, a, o]]
            })
            .map(|m| self.lookup_elems(m).expect("unitriangular"))
            .collect()
    }

    /// True conjugacy classes as orbits under conjugation by a generating
    /// set; returns the class id of every element and the class count.
    pub fn conjugacy_classes(&self) -> (Vec<u32>, usize) {
        let gens = self.elementary_generators();
        let mut id = vec![NONE; self.size()];
        let mut count = 0u32;
        let mut queue = Vec::new();
        for start in 0..self.size() {
            if id[start] != NONE {
                continue;
            }
            id[start] = count;
            queue.clear();
            queue.push(start as u32);
            while let Some(y) = queue.pop() {
                for &g in &gens {
                    let z = self.conj(g, y) as usize;
                    if id[z] == NONE {
                        id[z] = count;
                        queue.push(z as u32);
                    }
                }
            }
            count += 1;
        }
        (id, count as usize)
    }

    /// Symbolic labels agree with true conjugacy: one label per class, one
    /// class per label, and label sizes equal class sizes.
    pub fn certify_labels(&self) -> bool {
        let (id, count) = self.conjugacy_classes();
        if count != self.inventory.len() {
            return false;
        }
        let mut label_of = vec![None; count];
        let mut sizes = vec![0u64; count];
        for (e, &c) in id.iter().enumerate() {
            let l = self.class_index(e as u32);
            match label_of[c as usize] {
                None => label_of[c as usize] = Some(l),
                Some(prev) if prev != l => return false,
                _ => {}
            }
            sizes[c as usize] += 1;
        }
        let distinct: BTreeSet<usize> = label_of.iter().flatten().copied().collect();
        distinct.len() == count
            && label_of
                .iter()
                .zip(&sizes)
                .all(|(l, &s)| self.inventory.get(l.expect("nonempty class")).size == s)
    }

    /// For every semisimple class of order at least 3, the powers of a
    /// representative conjugate to it are exactly `x` and `x^-1`.
    pub fn check_power_conjugacy(&self) -> bool {
        let (id, _) = self.conjugacy_classes();
        let p = self.group.field().p() as u64;
        self.inventory.entries().iter().all(|info| {
            if info.order < 3 || info.order % p == 0 {
                return true;
            }
            let x = self.index_of(&self.group.representative(&info.label).expect("label")).expect("same group");
            let mut hits = BTreeSet::new();
            let mut acc = x;
            for _ in 1..info.order {
                if id[acc as usize] == id[x as usize] {
                    hits.insert(acc);
                }
                acc = self.mul_idx(acc, x);
            }
            hits == BTreeSet::from([x, self.inverse[x as usize]])
        })
    }

    /// Elements of order exactly 2.
    pub fn involution_count(&self) -> u64 {
        (0..self.size() as u32)
            .filter(|&y| y != self.identity && self.mul_idx(y, y) == self.identity)
            .count() as u64
    }

    fn diag(&self, a: GfElem) -> Result<u32> {
        let k = self.group.field();
        self.lookup_elems([a, k.zero(), k.zero(), k.inv(a)?])
    }

    /// Elementary generators of SL(2, q0) inside SL(2, q).
    fn subfield_generators(&self, q0: u32) -> Result<(Vec<u32>, GfElem)> {
        let k = self.group.field();
        let (q, e) = (k.q() as u64, q0.ilog(k.p()));
        let w0 = k.pow(k.primitive_element(), (q - 1) / (q0 as u64 - 1));
        let (z, o) = (k.zero(), k.one());
        let mut gens = Vec::new();
        for i in 0..e {
            let a = k.pow(w0, i as u64);
            gens.push(self.lookup_elems([o, a, z, o])?);
            gens.push(self.lookup_elems([o, z, a, o])?);
        }
        Ok((gens, w0))
    }

    /// A `(2, 3, m)` generating pair: a fixed element of order 3 and the
    /// first involution in index order whose product has order `m` and
    /// whose closure has the target order.
    fn triangle_generators(&self, m: u64, target: usize) -> Result<Vec<u32>> {
        let mut scratch = Scratch::new(self.size());
        let b = (0..self.size() as u32)
            .find(|&x| self.order_of(x) == 3)
            .ok_or_else(|| Error::SubgroupConstruction("no element of order 3".into()))?;
        for a in 0..self.size() as u32 {
            if a == self.identity || self.mul_idx(a, a) != self.identity {
                continue;
            }
            if self.order_of(self.mul_idx(a, b)) != m {
                continue;
            }
            self.close(&[a, b], &mut scratch, None);
            if scratch.queue.len() == target {
                return Ok(vec![a, b]);
            }
        }
        Err(Error::SubgroupConstruction(format!("no (2,3,{m}) subgroup of order {target}")))
    }

    fn subgroup_generators(&self, kind: SubgroupKind) -> Result<Vec<u32>> {
        let k = self.group.field();
        let (z, o) = (k.zero(), k.one());
        let w = k.primitive_element();
        let q = k.q() as u64;
        let d = self.group.d() as u64;
        let gens = match kind {
            SubgroupKind::Borel => {
                let mut g: Vec<u32> = (0..k.f())
                    .map(|i| self.lookup_elems([o, k.pow(w, i as u64), z, o]))
                    .collect::<Result<_>>()?;
                g.push(self.diag(w)?);
                g
            }
            SubgroupKind::DihedralSplit => vec![self.diag(w)?, self.lookup_elems([z, o, k.neg(o), z])?],
            SubgroupKind::DihedralNonsplit => {
                let n = self.size() as u32;
                let x = (0..n)
                    .find(|&x| self.order_of(x) == (q + 1) / d)
                    .ok_or_else(|| Error::SubgroupConstruction("no nonsplit torus generator".into()))?;
                let x_inv = self.inverse[x as usize];
                let t = (0..n)
                    .find(|&t| {
                        t != self.identity && self.mul_idx(t, t) == self.identity && self.conj(t, x) == x_inv
                    })
                    .ok_or_else(|| Error::SubgroupConstruction("no inverting involution".into()))?;
                vec![x, t]
            }
            SubgroupKind::SubfieldPsl { q0, .. } => self.subfield_generators(q0)?.0,
            SubgroupKind::SubfieldPgl { q0, .. } => {
                let (mut g, _) = self.subfield_generators(q0)?;
                if d == 2 {
                    // diag(mu, 1/mu) with mu^2 primitive in GF(q0): the image of diag(mu^2, 1)
                    let mu = k.pow(w, (q - 1) / (2 * (q0 as u64 - 1)));
                    g.push(self.diag(mu)?);
                }
                g
            }
            SubgroupKind::ExcA4 => self.triangle_generators(3, 12)?,
            SubgroupKind::ExcS4 { .. } => self.triangle_generators(4, 24)?,
            SubgroupKind::ExcA5 { .. } => self.triangle_generators(5, 60)?,
        };
        if kind.variant() == Some(2) {
            // the other class: conjugate by diag(w, 1), an outer diagonal automorphism
            return gens
                .into_iter()
                .map(|g| {
                    let x = self.group.conjugate_by_gl(&self.element(g), [w, z, z, o])?;
                    self.index_of(&x)
                })
                .collect();
        }
        Ok(gens)
    }

    /// Closes one representative of every subgroup class of the model and
    /// compares the labels it meets with the structural profile.
    pub fn class_fusion(&self, model: &StructuralModel) -> Result<FusionReport> {
        let profile = model.profile();
        let mut scratch = Scratch::new(self.size());
        let mut records = Vec::new();
        for (s, class) in model.subgroups().iter().enumerate() {
            let gens = self.subgroup_generators(class.kind)?;
            self.close(&gens, &mut scratch, None);
            let met: BTreeSet<usize> = scratch.queue.iter().map(|&e| self.class_index(e)).collect();
            records.push(FusionRecord {
                kind: class.kind,
                expected_order: class.order,
                order: scratch.queue.len() as u64,
                labels: met.iter().map(|&l| self.inventory.label(l)).collect(),
                profile: profile.labels_meeting(s).iter().map(|&l| self.inventory.label(l)).collect(),
            });
        }
        let orders_ok = records.iter().all(|r| r.order == r.expected_order);
        let family = |k: SubgroupKind| match k {
            SubgroupKind::SubfieldPgl { q0, variant: Some(_) } => SubgroupKind::SubfieldPgl { q0, variant: Some(0) },
            SubgroupKind::ExcS4 { .. } => SubgroupKind::ExcS4 { variant: 0 },
            SubgroupKind::ExcA5 { .. } => SubgroupKind::ExcA5 { variant: 0 },
            other => other,
        };
        let fams: BTreeSet<SubgroupKind> = records.iter().map(|r| family(r.kind)).collect();
        let labels_ok = fams.iter().all(|&fam| {
            let mut seen: Vec<&Vec<ClassLabel>> =
                records.iter().filter(|r| family(r.kind) == fam).map(|r| &r.labels).collect();
            let mut claimed: Vec<&Vec<ClassLabel>> =
                records.iter().filter(|r| family(r.kind) == fam).map(|r| &r.profile).collect();
            seen.sort();
            claimed.sort();
            seen == claimed
        });
        Ok(FusionReport { q: self.group.q(), records, consistent: orders_ok && labels_ok })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::psi2_structural;

    fn oracle(q: u64) -> Oracle {
        Oracle::new(q).unwrap()
    }

    #[test]
    fn cap_is_enforced() {
        let g = Psl2::from_order(37).unwrap();
        let opts = OracleOptions { cap: 31, ..OracleOptions::default() };
        assert_eq!(Oracle::with_options(g, opts).err(), Some(Error::OracleCap { q: 37, cap: 31 }));
    }

    #[test]
    fn generation_examples() {
        let o = oracle(5);
        let g = o.group();
        let id = g.identity();
        assert!(!o.generates(&id, &id).unwrap());
        let x = g.from_ints(0, -1, 1, 1).unwrap();
        assert_eq!(g.element_order(&x).unwrap(), 3);
        let y = g.from_ints(1, 1, 0, 1).unwrap();
        assert_eq!(g.element_order(&y).unwrap(), 5);
        assert!(o.generates(&x, &y).unwrap());
        // both upper triangular
        let t = g.from_ints(2, 0, 0, 3).unwrap();
        assert!(!o.generates(&t, &y).unwrap());
        assert_eq!(o.size(), 60);
    }

    #[test]
    fn oracle_matches_structural_on_validation_set() {
        for q in [4, 5, 7, 8, 9, 11, 13] {
            let o = oracle(q);
            let t = o.psi2();
            assert!(t.is_symmetric());
            let s = psi2_structural(&StructuralModel::new(q).unwrap());
            assert!(t.same_pairs(&s), "q = {q}: oracle {:?} structural {:?}", t.pairs(), s.pairs());
        }
    }

    #[test]
    fn psi2_counts() {
        assert_eq!(oracle(5).psi2().len(), 4);
        assert_eq!(oracle(7).psi2().len(), 8);
    }

    #[test]
    fn isolated_examples() {
        assert_eq!(oracle(7).isolated_vertices().len(), 1);
        let iso9: Vec<String> = oracle(9).isolated_vertices().iter().map(|l| l.to_string()).collect();
        assert_eq!(iso9, ["inv", "unip:sq", "unip:nsq"]);
        assert!(oracle(11).isolated_vertices().is_empty());
    }

    #[test]
    fn early_exit_and_reduction_do_not_change_verdicts() {
        for q in [4, 5, 7, 8, 9] {
            let g = Psl2::from_order(q).unwrap();
            let base = Oracle::new(q).unwrap().psi2();
            for (early_exit, centraliser_reduction) in [(false, true), (true, false), (false, false)] {
                let opts = OracleOptions { cap: 31, early_exit, centraliser_reduction };
                let t = Oracle::with_options(g.clone(), opts).unwrap().psi2();
                assert!(t.same_pairs(&base), "q = {q}");
            }
        }
    }

    #[test]
    fn representative_choice_does_not_matter() {
        use proptest::prelude::*;
        use proptest::test_runner::{Config, TestRunner};
        for q in [5u64, 7, 8, 9, 11] {
            let o = oracle(q);
            let t = o.psi2();
            let mut runner = TestRunner::new(Config { cases: 10, ..Config::default() });
            let n = o.size() as u32;
            let k = o.inventory().len();
            runner
                .run(&(1..n, 0..k), |(xi, d)| {
                    let x = o.element(xi);
                    let c = o.class_index(xi);
                    prop_assert_eq!(o.generates_with_class(&x, d).unwrap(), t.contains(c, d));
                    Ok(())
                })
                .unwrap();
        }
    }

    #[test]
    fn labels_are_true_classes() {
        for q in [4, 5, 7, 8, 9, 11, 13, 16] {
            assert!(oracle(q).certify_labels(), "q = {q}");
        }
    }

    #[test]
    fn power_conjugacy_and_involutions() {
        for q in [4, 5, 7, 8, 9, 11, 13] {
            assert!(oracle(q).check_power_conjugacy(), "q = {q}");
        }
        for q in [5u64, 7, 9, 11, 13] {
            let eps: i64 = if q % 4 == 1 { 1 } else { -1 };
            assert_eq!(oracle(q).involution_count() as i64, q as i64 * (q as i64 + eps) / 2);
        }
    }

    #[test]
    fn fusion_certifies_profiles() {
        for q in [4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 25] {
            let model = StructuralModel::new(q).unwrap();
            let report = oracle(q).class_fusion(&model).unwrap();
            assert!(report.consistent, "q = {q}: {:#?}", report.records);
        }
    }

    #[test]
    fn fusion_examples() {
        let model = StructuralModel::new(7).unwrap();
        let r = oracle(7).class_fusion(&model).unwrap();
        let borel: Vec<String> = r.records[0].labels.iter().map(|l| l.to_string()).collect();
        assert_eq!(borel.len(), 4);
        assert!(borel.iter().any(|l| l.starts_with("split")));
        assert!(borel.contains(&"unip:sq".to_string()) && borel.contains(&"unip:nsq".to_string()));

        let model = StructuralModel::new(9).unwrap();
        let r = oracle(9).class_fusion(&model).unwrap();
        for rec in r.records.iter().filter(|r| matches!(r.kind, SubgroupKind::ExcA5 { .. })) {
            assert_eq!(rec.labels.iter().filter(|l| matches!(l, ClassLabel::Unipotent(_))).count(), 1);
        }
    }
}
