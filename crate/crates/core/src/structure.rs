//! Maximal subgroups of PSL(2, q) as data, the classes each of them meets,
//! and the structural computation of the invariably generating pairs.
//!
//! Two classes `C`, `D` invariably generate iff no maximal subgroup class
//! meets both: a non-generating pair `x in C`, `y in D` lies in some maximal
//! subgroup, and conversely two elements of one maximal subgroup never
//! generate. Classes are conjugation closed, so "meets" is a property of the
//! subgroup class, and the whole test reduces to disjointness of bitmasks.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::gf::GfContext;
use crate::psl2::{ClassInventory, ClassLabel, Psl2, SquareClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupKind {
    /// Stabiliser of a 1-space, order `q(q-1)/d`.
    Borel,
    /// Normaliser of the split torus, order `2(q-1)/d`.
    DihedralSplit,
    /// Normaliser of the nonsplit torus, order `2(q+1)/d`.
    DihedralNonsplit,
    /// PSL(2, q0) with `q = q0^r`, `r` an odd prime.
    SubfieldPsl { q0: u32, r: u32 },
    /// PGL(2, q0) with `q = q0^2`; two classes (variants 1, 2) for odd `q`.
    SubfieldPgl { q0: u32, variant: Option<u8> },
    ExcA4,
    ExcS4 { variant: u8 },
    ExcA5 { variant: u8 },
}

impl SubgroupKind {
    /// Element orders above 1 of the exceptional subgroups.
    pub fn exceptional_orders(&self) -> Option<&'static [u64]> {
        match self {
            SubgroupKind::ExcA4 => Some(&[2, 3]),
            SubgroupKind::ExcS4 { .. } => Some(&[2, 3, 4]),
            SubgroupKind::ExcA5 { .. } => Some(&[2, 3, 5]),
            _ => None,
        }
    }

    pub fn variant(&self) -> Option<u8> {
        match self {
            SubgroupKind::SubfieldPgl { variant, .. } => *variant,
            SubgroupKind::ExcS4 { variant } | SubgroupKind::ExcA5 { variant } => Some(*variant),
            _ => None,
        }
    }
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupKind::Borel => write!(f, "borel"),
            SubgroupKind::DihedralSplit => write!(f, "dihedral-split"),
            SubgroupKind::DihedralNonsplit => write!(f, "dihedral-nonsplit"),
            SubgroupKind::SubfieldPsl { q0, .. } => write!(f, "psl2({q0})"),
            SubgroupKind::SubfieldPgl { q0, variant: None } => write!(f, "pgl2({q0})"),
            SubgroupKind::SubfieldPgl { q0, variant: Some(v) } => write!(f, "pgl2({q0})#{v}"),
            SubgroupKind::ExcA4 => write!(f, "A4"),
            SubgroupKind::ExcS4 { variant } => write!(f, "S4#{variant}"),
            SubgroupKind::ExcA5 { variant } => write!(f, "A5#{variant}"),
        }
    }
}

impl Serialize for SubgroupKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupClass {
    pub kind: SubgroupKind,
    pub order: u64,
    pub maximal: bool,
}

/// Dickson's list of maximal subgroup classes, together with both dihedral
/// torus normalisers even where they are not maximal (`q = 7, 9` and small
/// odd `q`), since the 2-covering uses the nonsplit one regardless.
pub fn maximal_subgroup_classes(gf: &GfContext) -> Result<Vec<SubgroupClass>> {
    let (p, f, q) = (gf.p() as u64, gf.f(), gf.q() as u64);
    if q < 4 {
        return Err(crate::Error::FieldTooSmall(gf.q()));
    }
    let d = if p == 2 { 1 } else { 2 };
    let even = p == 2;
    let mut out = vec![
        SubgroupClass { kind: SubgroupKind::Borel, order: q * (q - 1) / d, maximal: true },
        SubgroupClass {
            kind: SubgroupKind::DihedralSplit,
            order: 2 * (q - 1) / d,
            maximal: even || q >= 13,
        },
        SubgroupClass {
            kind: SubgroupKind::DihedralNonsplit,
            order: 2 * (q + 1) / d,
            maximal: even || (q != 7 && q != 9),
        },
    ];
    for r in crate::arith::prime_factors(f as u64).into_iter().filter(|&r| r % 2 == 1) {
        let q0 = p.pow(f / r as u32);
        if q0 != 2 {
            let d0 = if p == 2 { 1 } else { 2 };
            out.push(SubgroupClass {
                kind: SubgroupKind::SubfieldPsl { q0: q0 as u32, r: r as u32 },
                order: q0 * (q0 * q0 - 1) / d0,
                maximal: true,
            });
        }
    }
    if f % 2 == 0 {
        let q0 = p.pow(f / 2);
        if q0 != 2 {
            let variants: &[Option<u8>] = if even { &[None] } else { &[Some(1), Some(2)] };
            for &variant in variants {
                out.push(SubgroupClass {
                    kind: SubgroupKind::SubfieldPgl { q0: q0 as u32, variant },
                    order: q0 * (q0 * q0 - 1),
                    maximal: true,
                });
            }
        }
    }
    if f == 1 && [3, 5, 13, 27, 37].contains(&(p % 40)) {
        out.push(SubgroupClass { kind: SubgroupKind::ExcA4, order: 12, maximal: true });
    }
    if f == 1 && [1, 7].contains(&(p % 8)) {
        for variant in [1, 2] {
            out.push(SubgroupClass { kind: SubgroupKind::ExcS4 { variant }, order: 24, maximal: true });
        }
    }
    if (f == 1 && [1, 9].contains(&(p % 10))) || (f == 2 && [3, 7].contains(&(p % 10))) {
        for variant in [1, 2] {
            out.push(SubgroupClass { kind: SubgroupKind::ExcA5 { variant }, order: 60, maximal: true });
        }
    }
    Ok(out)
}

/// For each class label, the set of subgroup classes it meets, as a bitmask
/// over the subgroup list.
#[derive(Clone, Debug)]
pub struct Profile {
    subgroups: Vec<SubgroupClass>,
    masks: Vec<u64>,
}

impl Profile {
    pub fn subgroups(&self) -> &[SubgroupClass] {
        &self.subgroups
    }

    pub fn mask(&self, label: usize) -> u64 {
        self.masks[label]
    }

    pub fn meets(&self, label: usize, subgroup: usize) -> bool {
        self.masks[label] >> subgroup & 1 == 1
    }

    /// Indices of the subgroup classes met by a label.
    pub fn subgroups_meeting(&self, label: usize) -> Vec<usize> {
        (0..self.subgroups.len()).filter(|&s| self.meets(label, s)).collect()
    }

    /// Indices of the labels meeting a subgroup class.
    pub fn labels_meeting(&self, subgroup: usize) -> Vec<usize> {
        (0..self.masks.len()).filter(|&l| self.meets(l, subgroup)).collect()
    }

    pub fn maximal_mask(&self) -> u64 {
        self.subgroups
            .iter()
            .enumerate()
            .filter(|(_, s)| s.maximal)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn find(&self, kind: SubgroupKind) -> Option<usize> {
        self.subgroups.iter().position(|s| s.kind == kind)
    }

    pub fn to_json(&self, inventory: &ClassInventory) -> serde_json::Value {
        let rows: Vec<_> = (0..self.masks.len())
            .map(|l| {
                let names: Vec<String> =
                    self.subgroups_meeting(l).iter().map(|&s| self.subgroups[s].kind.to_string()).collect();
                serde_json::json!({ "label": inventory.label(l), "subgroups": names })
            })
            .collect();
        serde_json::json!({ "subgroups": self.subgroups, "profile": rows })
    }
}

/// Whether a class label meets a subgroup class, by the structural rules.
fn meets(group: &Psl2, inventory: &ClassInventory, label_idx: usize, kind: SubgroupKind) -> bool {
    let k = group.field();
    let (p, f, q) = (k.p(), k.f(), k.q());
    let info = inventory.get(label_idx);
    let label = info.label;
    if label.is_identity() {
        return true;
    }
    // for even q the unipotent class is the involution class
    let involution = matches!(label, ClassLabel::Involution | ClassLabel::Unipotent(None));
    match kind {
        SubgroupKind::Borel => match label {
            ClassLabel::Unipotent(_) | ClassLabel::Split(_) => true,
            ClassLabel::Involution => q % 4 == 1,
            _ => false,
        },
        SubgroupKind::DihedralSplit => involution || matches!(label, ClassLabel::Split(_)),
        SubgroupKind::DihedralNonsplit => involution || matches!(label, ClassLabel::Nonsplit(_)),
        SubgroupKind::SubfieldPsl { q0, .. } => {
            let e = q0.ilog(p);
            match label {
                ClassLabel::Split(t) | ClassLabel::Nonsplit(t) => k.in_subfield(t, e).expect("e | f"),
                _ => true,
            }
        }
        SubgroupKind::SubfieldPgl { q0, variant } => {
            let e = q0.ilog(p);
            match label {
                ClassLabel::Split(t) | ClassLabel::Nonsplit(t) => {
                    k.in_subfield(k.mul(t, t), e).expect("e | f")
                }
                ClassLabel::Unipotent(Some(SquareClass::Square)) => variant == Some(1),
                ClassLabel::Unipotent(Some(SquareClass::NonSquare)) => variant == Some(2),
                _ => true,
            }
        }
        SubgroupKind::ExcA4 | SubgroupKind::ExcS4 { .. } | SubgroupKind::ExcA5 { .. } => {
            let orders = kind.exceptional_orders().expect("exceptional");
            match label {
                _ if involution => orders.contains(&2),
                ClassLabel::Unipotent(Some(sq)) => {
                    // <y> for y of order p meets both square classes iff GF(p)*
                    // holds non-squares of GF(q), i.e. iff f is odd
                    orders.contains(&(p as u64))
                        && (f % 2 == 1
                            || match kind.variant() {
                                None => true,
                                Some(1) => sq == SquareClass::Square,
                                Some(_) => sq == SquareClass::NonSquare,
                            })
                }
                _ => orders.contains(&info.order),
            }
        }
    }
}

pub fn build_profiles(group: &Psl2, inventory: &ClassInventory, subgroups: &[SubgroupClass]) -> Profile {
    assert!(subgroups.len() <= 64, "profile masks hold at most 64 subgroup classes");
    let masks = (0..inventory.len())
        .map(|l| {
            subgroups
                .iter()
                .enumerate()
                .filter(|(_, s)| meets(group, inventory, l, s.kind))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    Profile { subgroups: subgroups.to_vec(), masks }
}

/// Group, class inventory, subgroup classes and profile for one `q`.
#[derive(Clone, Debug)]
pub struct StructuralModel {
    group: Psl2,
    inventory: ClassInventory,
    profile: Profile,
}

impl StructuralModel {
    pub fn new(q: u64) -> Result<Self> {
        Self::from_group(Psl2::from_order(q)?)
    }

    pub fn from_group(group: Psl2) -> Result<Self> {
        let inventory = group.inventory()?;
        let subgroups = maximal_subgroup_classes(group.field())?;
        let profile = build_profiles(&group, &inventory, &subgroups);
        Ok(StructuralModel { group, inventory, profile })
    }

    pub fn group(&self) -> &Psl2 {
        &self.group
    }

    pub fn q(&self) -> u32 {
        self.group.q()
    }

    pub fn inventory(&self) -> &ClassInventory {
        &self.inventory
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn subgroups(&self) -> &[SubgroupClass] {
        self.profile.subgroups()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Structural,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Structural => "structural",
            Method::Oracle => "oracle",
        })
    }
}

/// Ordered pairs of inventory indices `(C, D)` with `<C, D>_I = S`.
#[derive(Clone, Debug)]
pub struct Psi2Table {
    q: u32,
    method: Method,
    labels: Vec<ClassLabel>,
    pairs: Vec<(usize, usize)>,
    /// Dense `k x k` pair index, `u32::MAX` for absent pairs.
    index: Vec<u32>,
}

impl Psi2Table {
    pub fn new(q: u32, method: Method, labels: Vec<ClassLabel>, mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let k = labels.len();
        let mut index = vec![u32::MAX; k * k];
        for (n, &(i, j)) in pairs.iter().enumerate() {
            index[i * k + j] = n as u32;
        }
        Psi2Table { q, method, labels, pairs, index }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pair_index(i, j).is_some()
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.labels.len();
        match self.index[i * k + j] {
            u32::MAX => None,
            n => Some(n as usize),
        }
    }

    /// Unordered edges `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().filter(|&(i, j)| i < j).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(i, j)| self.contains(j, i))
    }

    /// Labels that occur in no pair.
    pub fn isolated(&self) -> Vec<usize> {
        let mut seen = vec![false; self.labels.len()];
        for &(i, j) in &self.pairs {
            seen[i] = true;
            seen[j] = true;
        }
        (0..self.labels.len()).filter(|&i| !seen[i] && !self.labels[i].is_identity()).collect()
    }

    /// Same label set and the same pairs, regardless of method.
    pub fn same_pairs(&self, other: &Psi2Table) -> bool {
        self.labels == other.labels && self.pairs == other.pairs
    }

    /// `|Psi2| / k^2` with `k` the number of classes, identity included.
    pub fn probability(&self) -> f64 {
        let k = self.labels.len() as f64;
        self.len() as f64 / (k * k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self.pairs.iter().map(|&(i, j)| [self.labels[i], self.labels[j]]).collect();
        serde_json::json!({
            "q": self.q,
            "method": self.method,
            "count": self.len(),
            "classes": self.labels.len(),
            "probability": self.probability(),
            "pairs": rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label1", "label2"]).expect("in-memory write");
        for &(i, j) in &self.pairs {
            w.write_record([self.labels[i].to_string(), self.labels[j].to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }
}

pub fn psi2_structural(model: &StructuralModel) -> Psi2Table {
    let inv = model.inventory();
    let profile = model.profile();
    let maximal = profile.maximal_mask();
    let k = inv.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .into_par_iter()
        .filter(|&i| !inv.label(i).is_identity())
        .flat_map_iter(|i| {
            let mi = profile.mask(i) & maximal;
            (0..k)
                .filter(move |&j| !inv.label(j).is_identity() && mi & profile.mask(j) == 0)
                .map(move |j| (i, j))
        })
        .collect();
    Psi2Table::new(model.q(), Method::Structural, inv.labels().collect(), pairs)
}

/// Outcome of the Borel / nonsplit-dihedral covering check, with the
/// three-way split of the non-identity labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub covers: bool,
    pub only_borel: Vec<usize>,
    pub only_dihedral: Vec<usize>,
    pub both: Vec<usize>,
    pub uncovered: Vec<usize>,
}

pub fn verify_2covering(model: &StructuralModel) -> CoveringReport {
    let profile = model.profile();
    let borel = profile.find(SubgroupKind::Borel).expect("Borel is always listed");
    let dihedral = profile.find(SubgroupKind::DihedralNonsplit).expect("always listed");
    let mut report = CoveringReport {
        covers: true,
        only_borel: vec![],
        only_dihedral: vec![],
        both: vec![],
        uncovered: vec![],
    };
    for l in 0..model.inventory().len() {
        if model.inventory().label(l).is_identity() {
            continue;
        }
        match (profile.meets(l, borel), profile.meets(l, dihedral)) {
            (true, true) => report.both.push(l),
            (true, false) => report.only_borel.push(l),
            (false, true) => report.only_dihedral.push(l),
            (false, false) => report.uncovered.push(l),
        }
    }
    report.covers = report.uncovered.is_empty();
    report
}
