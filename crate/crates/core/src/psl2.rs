//! Elements and conjugacy classes of PSL(2, q).
//!
//! An element is stored as the canonical member of `{M, -M}`: for odd `q`
//! the first nonzero entry in `(a, b, c, d)` order is positive in the sense
//! of [`GfContext::is_positive`]. Equality is therefore structural.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::prime_factors;
use crate::error::{Error, Result};
use crate::gf::{GfContext, GfElem};

/// Largest `q` for which element enumeration is allowed by default.
pub const DEFAULT_ENUMERATION_CAP: u32 = 31;

pub(crate) type Mat = [GfElem; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Psl2Element {
    q: u32,
    m: Mat,
}

impl Psl2Element {
    /// Canonical entries `[a, b, c, d]` of `[[a, b], [c, d]]`.
    pub fn entries(&self) -> [GfElem; 4] {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    pub fn other(self) -> Self {
        match self {
            SquareClass::Square => SquareClass::NonSquare,
            SquareClass::NonSquare => SquareClass::Square,
        }
    }
}

/// Symbolic conjugacy class of PSL(2, q).
///
/// Semisimple classes carry the sign key of their trace pair `{t, -t}`. For
/// even `q` the single unipotent class is also the class of involutions and
/// has no square-class flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Identity,
    Involution,
    Unipotent(Option<SquareClass>),
    Split(GfElem),
    Nonsplit(GfElem),
}

impl ClassLabel {
    pub fn is_identity(&self) -> bool {
        matches!(self, ClassLabel::Identity)
    }

    pub fn trace_key(&self) -> Option<GfElem> {
        match self {
            ClassLabel::Split(t) | ClassLabel::Nonsplit(t) => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Identity => write!(f, "id"),
            ClassLabel::Involution => write!(f, "inv"),
            ClassLabel::Unipotent(None) => write!(f, "unip"),
            ClassLabel::Unipotent(Some(SquareClass::Square)) => write!(f, "unip:sq"),
            ClassLabel::Unipotent(Some(SquareClass::NonSquare)) => write!(f, "unip:nsq"),
            ClassLabel::Split(t) => write!(f, "split:t={}", t.index()),
            ClassLabel::Nonsplit(t) => write!(f, "nonsplit:t={}", t.index()),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseLabel(s.to_string());
        let trace = |rest: &str| -> Result<GfElem> {
            let idx: u32 = rest.strip_prefix("t=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            // validated against a concrete field by the consumer
            Ok(GfElem::from_index(idx))
        };
        Ok(match s {
            "id" => ClassLabel::Identity,
            "inv" => ClassLabel::Involution,
            "unip" => ClassLabel::Unipotent(None),
            "unip:sq" => ClassLabel::Unipotent(Some(SquareClass::Square)),
            "unip:nsq" => ClassLabel::Unipotent(Some(SquareClass::NonSquare)),
            _ => {
                if let Some(rest) = s.strip_prefix("split:") {
                    ClassLabel::Split(trace(rest)?)
                } else if let Some(rest) = s.strip_prefix("nonsplit:") {
                    ClassLabel::Nonsplit(trace(rest)?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub label: ClassLabel,
    pub order: u64,
    pub size: u64,
}

/// All conjugacy classes of PSL(2, q), sorted by label.
#[derive(Clone, Debug)]
pub struct ClassInventory {
    q: u32,
    entries: Vec<ClassInfo>,
    index: HashMap<ClassLabel, usize>,
}

impl ClassInventory {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ClassInfo] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &ClassInfo {
        &self.entries[i]
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.entries[i].label
    }

    pub fn labels(&self) -> impl Iterator<Item = ClassLabel> + '_ {
        self.entries.iter().map(|e| e.label)
    }

    pub fn find(&self, label: &ClassLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Indices of labels whose elements have order `order`.
    pub fn of_order(&self, order: u64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i].order == order).collect()
    }

    pub fn total_size(&self) -> u64 {
        self.entries.iter().map(|e| e.size).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.entries).expect("inventory serializes")
    }
}

/// The group PSL(2, q) over a shared field context.
#[derive(Clone, Debug)]
pub struct Psl2 {
    gf: Arc<GfContext>,
    d: u32,
}

impl Psl2 {
    pub fn new(gf: GfContext) -> Self {
        Self::from_shared(Arc::new(gf))
    }

    pub fn from_shared(gf: Arc<GfContext>) -> Self {
        let d = if gf.p() == 2 { 1 } else { 2 };
        Psl2 { gf, d }
    }

    pub fn from_order(q: u64) -> Result<Self> {
        Ok(Self::new(GfContext::from_order(q)?))
    }

    pub fn field(&self) -> &GfContext {
        &self.gf
    }

    pub fn shared_field(&self) -> Arc<GfContext> {
        Arc::clone(&self.gf)
    }

    pub fn q(&self) -> u32 {
        self.gf.q()
    }

    /// `d = gcd(2, q - 1)`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `|PSL(2, q)| = q (q^2 - 1) / d`.
    pub fn order(&self) -> u64 {
        let q = self.q() as u64;
        q * (q * q - 1) / self.d as u64
    }

    /// `|Out(PSL(2, q))| = d f`.
    pub fn out_order(&self) -> u64 {
        (self.d * self.gf.f()) as u64
    }

    pub fn identity(&self) -> Psl2Element {
        let k = &self.gf;
        self.wrap([k.one(), k.zero(), k.zero(), k.one()])
    }

    /// The element `[[a, b], [c, d]]`; the determinant must be 1.
    pub fn element(&self, a: GfElem, b: GfElem, c: GfElem, d: GfElem) -> Result<Psl2Element> {
        for x in [a, b, c, d] {
            self.gf.elem(x.index())?;
        }
        let m = [a, b, c, d];
        if self.det(&m) != self.gf.one() {
            return Err(Error::DeterminantNotOne);
        }
        Ok(self.wrap(m))
    }

    /// Convenience constructor over the prime field.
    pub fn from_ints(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Psl2Element> {
        let k = &self.gf;
        self.element(k.from_int(a), k.from_int(b), k.from_int(c), k.from_int(d))
    }

    fn check(&self, x: &Psl2Element) -> Result<()> {
        if x.q != self.q() {
            return Err(Error::MixedContexts(self.q(), x.q));
        }
        Ok(())
    }

    pub fn mul(&self, x: &Psl2Element, y: &Psl2Element) -> Result<Psl2Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mat_mul(&x.m, &y.m)))
    }

    pub fn inv(&self, x: &Psl2Element) -> Result<Psl2Element> {
        self.check(x)?;
        Ok(self.wrap(self.mat_inv(&x.m)))
    }

    pub fn pow(&self, x: &Psl2Element, n: u64) -> Result<Psl2Element> {
        self.check(x)?;
        Ok(self.wrap(self.mat_pow(&x.m, n)))
    }

    /// Least `n >= 1` with `x^n = 1`.
    pub fn element_order(&self, x: &Psl2Element) -> Result<u64> {
        self.check(x)?;
        if x.m == self.identity().m {
            return Ok(1);
        }
        let k = &self.gf;
        let t = self.trace(&x.m);
        let two = k.from_int(2);
        if self.d == 2 && t.is_zero() {
            return Ok(2);
        }
        if t == two || t == k.neg(two) {
            return Ok(k.p() as u64);
        }
        let q = self.q() as u64;
        let d = self.d as u64;
        let bound = if self.split_trace(t) { (q - 1) / d } else { (q + 1) / d };
        Ok(self.order_dividing(&x.m, bound))
    }

    /// Order of a semisimple element known to satisfy `x^bound = 1`.
    fn order_dividing(&self, m: &Mat, bound: u64) -> u64 {
        let mut n = bound;
        for r in prime_factors(bound) {
            while n % r == 0 && self.is_central(&self.mat_pow(m, n / r)) {
                n /= r;
            }
        }
        debug_assert!(self.is_central(&self.mat_pow(m, n)));
        n
    }

    /// Trace of the canonical representative; only `{t, -t}` is an invariant.
    pub fn trace(&self, m: &Mat) -> GfElem {
        self.gf.add(m[0], m[3])
    }

    /// Canonical trace pair representative of an element.
    pub fn trace_key(&self, x: &Psl2Element) -> GfElem {
        self.gf.sign_key(self.trace(&x.m))
    }

    /// Whether `X^2 - tX + 1` splits over GF(q), for `t != +-2`.
    pub fn split_trace(&self, t: GfElem) -> bool {
        let k = &self.gf;
        if k.p() == 2 {
            // X = tY turns the polynomial into Y^2 + Y + 1/t^2
            let inv_t2 = k.inv(k.mul(t, t)).expect("t != 0 for semisimple classes");
            k.absolute_trace(inv_t2).is_zero()
        } else {
            k.is_square(k.sub(k.mul(t, t), k.from_int(4)))
        }
    }

    /// Symbolic conjugacy class of `x`.
    pub fn class_of(&self, x: &Psl2Element) -> Result<ClassLabel> {
        self.check(x)?;
        Ok(self.class_of_mat(&x.m))
    }

    pub(crate) fn class_of_mat(&self, m: &Mat) -> ClassLabel {
        let k = &self.gf;
        if *m == self.identity().m {
            return ClassLabel::Identity;
        }
        let t = self.trace(m);
        if k.p() == 2 {
            if t.is_zero() {
                return ClassLabel::Unipotent(None);
            }
        } else {
            if t.is_zero() {
                return ClassLabel::Involution;
            }
            let two = k.from_int(2);
            if t == two || t == k.neg(two) {
                // move to the trace-2 lift; N = M - I is then [[-ag, a a^2], [-a g^2, ag]]
                // for the normal form parameter a, so b and -c carry its square class
                let (b, c) = if t == two { (m[1], m[2]) } else { (k.neg(m[1]), k.neg(m[2])) };
                let witness = if b.is_zero() { k.neg(c) } else { b };
                let sq = if k.is_square(witness) { SquareClass::Square } else { SquareClass::NonSquare };
                return ClassLabel::Unipotent(Some(sq));
            }
        }
        let key = k.sign_key(t);
        if self.split_trace(t) {
            ClassLabel::Split(key)
        } else {
            ClassLabel::Nonsplit(key)
        }
    }

    /// A representative of a class label.
    pub fn representative(&self, label: &ClassLabel) -> Result<Psl2Element> {
        let k = &self.gf;
        let (z, o) = (k.zero(), k.one());
        let m = match label {
            ClassLabel::Identity => [o, z, z, o],
            ClassLabel::Involution => {
                if self.d == 1 {
                    return Err(Error::ParseLabel(label.to_string()));
                }
                [z, o, k.neg(o), z]
            }
            ClassLabel::Unipotent(None) => {
                if self.d == 2 {
                    return Err(Error::ParseLabel(label.to_string()));
                }
                [o, o, z, o]
            }
            ClassLabel::Unipotent(Some(sq)) => {
                if self.d == 1 {
                    return Err(Error::ParseLabel(label.to_string()));
                }
                let a = match sq {
                    SquareClass::Square => o,
                    SquareClass::NonSquare => k.primitive_element(),
                };
                [o, a, z, o]
            }
            ClassLabel::Split(t) | ClassLabel::Nonsplit(t) => {
                k.elem(t.index())?;
                [z, k.neg(o), o, *t]
            }
        };
        let x = self.wrap(m);
        if self.class_of_mat(&x.m) != *label {
            return Err(Error::ParseLabel(label.to_string()));
        }
        Ok(x)
    }

    /// Symbolic class inventory. Class sizes come from centraliser orders.
    pub fn inventory(&self) -> Result<ClassInventory> {
        let k = &self.gf;
        let q = self.q() as u64;
        if q < 4 {
            return Err(Error::FieldTooSmall(self.q()));
        }
        let mut entries = vec![ClassInfo { label: ClassLabel::Identity, order: 1, size: 1 }];
        if self.d == 2 {
            let eps: i64 = if q % 4 == 1 { 1 } else { -1 };
            let inv_size = (q as i64 * (q as i64 + eps) / 2) as u64;
            entries.push(ClassInfo { label: ClassLabel::Involution, order: 2, size: inv_size });
            for sq in [SquareClass::Square, SquareClass::NonSquare] {
                entries.push(ClassInfo {
                    label: ClassLabel::Unipotent(Some(sq)),
                    order: k.p() as u64,
                    size: (q * q - 1) / 2,
                });
            }
        } else {
            entries.push(ClassInfo { label: ClassLabel::Unipotent(None), order: 2, size: q * q - 1 });
        }
        let two = k.from_int(2);
        for t in k.elements() {
            if t == two || t == k.neg(two) || (self.d == 2 && t.is_zero()) || k.sign_key(t) != t {
                continue;
            }
            let rep = [k.zero(), k.neg(k.one()), k.one(), t];
            let split = self.split_trace(t);
            let bound = if split { (q - 1) / self.d as u64 } else { (q + 1) / self.d as u64 };
            let order = self.order_dividing(&rep, bound);
            let (label, size) = if split {
                (ClassLabel::Split(t), q * (q + 1))
            } else {
                (ClassLabel::Nonsplit(t), q * (q - 1))
            };
            entries.push(ClassInfo { label, order, size });
        }
        entries.sort_by_key(|e| e.label);
        let index = entries.iter().enumerate().map(|(i, e)| (e.label, i)).collect();
        Ok(ClassInventory { q: self.q(), entries, index })
    }

    /// Every element exactly once, in canonical form. Refuses `q > cap`.
    pub fn enumerate(&self, cap: u32) -> Result<impl Iterator<Item = Psl2Element> + '_> {
        if self.q() > cap {
            return Err(Error::OracleCap { q: self.q(), cap });
        }
        let k: &GfContext = &self.gf;
        let q = self.q();
        let raw = (0..q).flat_map(move |a| {
            (0..q).flat_map(move |b| -> Box<dyn Iterator<Item = Mat>> {
                let (a, b) = (GfElem::from_index(a), GfElem::from_index(b));
                if !a.is_zero() {
                    // d = (1 + bc) / a
                    Box::new((0..q).map(move |c| {
                        let c = GfElem::from_index(c);
                        let d = k.div(k.add(k.one(), k.mul(b, c)), a).expect("a != 0");
                        [a, b, c, d]
                    }))
                } else if !b.is_zero() {
                    let c = k.neg(k.inv(b).expect("b != 0"));
                    Box::new((0..q).map(move |d| [a, b, c, GfElem::from_index(d)]))
                } else {
                    Box::new(std::iter::empty())
                }
            })
        });
        Ok(raw.filter(move |m| self.canonical(*m) == *m).map(move |m| Psl2Element { q, m }))
    }

    /// Conjugation `x -> g x g^-1` by an invertible matrix `g` of GL(2, q).
    pub fn conjugate_by_gl(&self, x: &Psl2Element, g: [GfElem; 4]) -> Result<Psl2Element> {
        self.check(x)?;
        let k = &self.gf;
        let det = self.det(&g);
        let det_inv = k.inv(det).map_err(|_| Error::Singular)?;
        let ginv = [
            k.mul(g[3], det_inv),
            k.neg(k.mul(g[1], det_inv)),
            k.neg(k.mul(g[2], det_inv)),
            k.mul(g[0], det_inv),
        ];
        Ok(self.wrap(self.mat_mul(&self.mat_mul(&g, &x.m), &ginv)))
    }

    /// Applies the field automorphism `a -> a^p` entrywise.
    pub fn frobenius(&self, x: &Psl2Element) -> Result<Psl2Element> {
        self.check(x)?;
        let k = &self.gf;
        Ok(self.wrap(x.m.map(|e| k.frobenius(e))))
    }

    // matrix layer, shared with the oracle

    pub(crate) fn wrap(&self, m: Mat) -> Psl2Element {
        Psl2Element { q: self.q(), m: self.canonical(m) }
    }

    #[inline]
    pub(crate) fn canonical(&self, m: Mat) -> Mat {
        if self.d == 1 {
            return m;
        }
        let k = &self.gf;
        let first = m.iter().copied().find(|e| !e.is_zero()).expect("invertible matrix");
        if k.is_positive(first) {
            m
        } else {
            m.map(|e| k.neg(e))
        }
    }

    #[inline]
    pub(crate) fn mat_mul(&self, x: &Mat, y: &Mat) -> Mat {
        let k = &self.gf;
        [
            k.add(k.mul(x[0], y[0]), k.mul(x[1], y[2])),
            k.add(k.mul(x[0], y[1]), k.mul(x[1], y[3])),
            k.add(k.mul(x[2], y[0]), k.mul(x[3], y[2])),
            k.add(k.mul(x[2], y[1]), k.mul(x[3], y[3])),
        ]
    }

    pub(crate) fn mat_inv(&self, m: &Mat) -> Mat {
        let k = &self.gf;
        [m[3], k.neg(m[1]), k.neg(m[2]), m[0]]
    }

    pub(crate) fn mat_pow(&self, m: &Mat, mut n: u64) -> Mat {
        let k = &self.gf;
        let mut acc = [k.one(), k.zero(), k.zero(), k.one()];
        let mut base = *m;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn det(&self, m: &Mat) -> GfElem {
        let k = &self.gf;
        k.sub(k.mul(m[0], m[3]), k.mul(m[1], m[2]))
    }

    /// `m = +-I`.
    fn is_central(&self, m: &Mat) -> bool {
        m[1].is_zero() && m[2].is_zero() && m[0] == m[3] && self.gf.mul(m[0], m[0]) == self.gf.one()
    }
}
