//! Exact arithmetic in GF(p^f).
//!
//! An element is a coefficient vector `(c_0, .., c_{f-1})` over GF(p), packed
//! into its base-`p` index `c_0 + c_1 p + .. + c_{f-1} p^{f-1}`. The packing is
//! a bijection, so equality and hashing are structural and the index doubles as
//! the fixed total order used for sign canonicalisation elsewhere in the crate.
//!
//! Exp/log tables over a primitive element accelerate multiplication for fields
//! up to a configurable size; above it the context falls back to schoolbook
//! polynomial multiplication modulo the defining polynomial.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors, prime_power};
use crate::error::{Error, Result};

/// Largest field order a context accepts.
pub const MAX_FIELD_ORDER: u32 = 1 << 20;

/// Fields up to this order get exp/log tables by default.
pub const DEFAULT_TABLE_CAP: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GfElem(u32);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    /// Base-`p` packed coefficient index.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// Unchecked; callers validate against a context when it matters.
    #[inline]
    pub(crate) const fn from_index(i: u32) -> GfElem {
        GfElem(i)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled so products skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct GfContext {
    p: u32,
    f: u32,
    q: u32,
    /// Monic defining polynomial, coefficients low-to-high, length `f + 1`.
    modulus: Vec<u32>,
    primitive: GfElem,
    tables: Option<Tables>,
}

impl PartialEq for GfContext {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for GfContext {}

impl GfContext {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        Self::with_table_cap(p, f, DEFAULT_TABLE_CAP)
    }

    /// Builds GF(q) from its order, rejecting non prime powers.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, f)
    }

    pub fn with_table_cap(p: u64, f: u32, table_cap: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64)
            .ok_or(Error::FieldTooLarge { p, f, cap: MAX_FIELD_ORDER })? as u32;
        let p = p as u32;
        let modulus = least_irreducible(p, f);
        let mut ctx = GfContext { p, f, q, modulus, primitive: GfElem::ONE, tables: None };
        ctx.primitive = ctx.find_primitive();
        if q <= table_cap {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn f(&self) -> u32 {
        self.f
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, coefficients low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The least (by index) generator of the multiplicative group.
    pub fn primitive_element(&self) -> GfElem {
        self.primitive
    }

    #[inline]
    pub fn zero(&self) -> GfElem {
        GfElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> GfElem {
        GfElem::ONE
    }

    pub fn elem(&self, index: u32) -> Result<GfElem> {
        if index < self.q {
            Ok(GfElem(index))
        } else {
            Err(Error::InvalidElement(format!("index {index} out of range for GF({})", self.q)))
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<GfElem> {
        if coeffs.len() > self.f as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidElement(format!("{coeffs:?} over GF({})", self.q)));
        }
        Ok(GfElem(self.pack(coeffs)))
    }

    /// Coefficient vector of length `f`, low-to-high.
    pub fn coeffs(&self, a: GfElem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.f)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = GfElem> {
        (0..self.q).map(GfElem)
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        if self.f == 1 {
            let s = a.0 + b.0;
            return GfElem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return GfElem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        GfElem(out)
    }

    #[inline]
    pub fn neg(&self, a: GfElem) -> GfElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.f == 1 {
            return GfElem(self.p - a.0);
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        GfElem(out)
    }

    #[inline]
    pub fn sub(&self, a: GfElem, b: GfElem) -> GfElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem::ZERO;
        }
        match &self.tables {
            Some(t) => GfElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_poly(a, b),
        }
    }

    pub fn inv(&self, a: GfElem) -> Result<GfElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                GfElem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: GfElem, b: GfElem) -> Result<GfElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: GfElem, mut e: u64) -> GfElem {
        if a.is_zero() {
            return if e == 0 { GfElem::ONE } else { GfElem::ZERO };
        }
        if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as u64 * (e % (self.q as u64 - 1));
            return GfElem(t.exp[(l % (self.q as u64 - 1)) as usize]);
        }
        let (mut base, mut acc) = (a, GfElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a = b^2` for some `b`. Zero counts as a square; every element is a
    /// square when `q` is even.
    pub fn is_square(&self, a: GfElem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        match &self.tables {
            Some(t) => t.log[a.0 as usize] % 2 == 0,
            None => self.pow(a, ((self.q - 1) / 2) as u64) == GfElem::ONE,
        }
    }

    /// The Frobenius automorphism `a -> a^p`.
    pub fn frobenius(&self, a: GfElem) -> GfElem {
        self.pow(a, self.p as u64)
    }

    /// Membership in the subfield GF(p^e), i.e. `a^(p^e) = a`.
    pub fn in_subfield(&self, a: GfElem, e: u32) -> Result<bool> {
        if e == 0 || self.f % e != 0 {
            return Err(Error::NotASubfield { e, f: self.f });
        }
        Ok(self.pow(a, (self.p as u64).pow(e)) == a)
    }

    /// Absolute trace `a + a^p + .. + a^(p^(f-1))`, an element of the prime field.
    pub fn absolute_trace(&self, a: GfElem) -> GfElem {
        let mut acc = GfElem::ZERO;
        let mut x = a;
        for _ in 0..self.f {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// The representative of `{a, -a}` with the smaller index.
    #[inline]
    pub fn sign_key(&self, a: GfElem) -> GfElem {
        let n = self.neg(a);
        if n.0 < a.0 {
            n
        } else {
            a
        }
    }

    /// Nonzero and the smaller-index member of `{a, -a}`.
    #[inline]
    pub fn is_positive(&self, a: GfElem) -> bool {
        !a.is_zero() && self.sign_key(a) == a
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: GfElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q));
        }
        let mut n = (self.q - 1) as u64;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow(a, n / r) == GfElem::ONE {
                n /= r;
            }
        }
        Ok(n)
    }

    fn mul_poly(&self, a: GfElem, b: GfElem) -> GfElem {
        let p = self.p as u64;
        let f = self.f as usize;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for k in (f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            // x^f = -(m_0 + .. + m_{f-1} x^{f-1})
            for i in 0..f {
                let m = self.modulus[i] as u64;
                prod[k - f + i] = (prod[k - f + i] + (p - m) % p * c) % p;
            }
            prod[k] = 0;
        }
        let coeffs: Vec<u32> = prod[..f].iter().map(|&c| c as u32).collect();
        GfElem(self.pack(&coeffs))
    }

    fn find_primitive(&self) -> GfElem {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        (1..self.q)
            .map(GfElem)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != GfElem::ONE))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_slow(&self, a: GfElem, mut e: u64) -> GfElem {
        let (mut base, mut acc) = (a, GfElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = GfElem::ONE;
        for i in 0..n {
            exp[i] = x.0;
            exp[i + n] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, self.primitive);
        }
        Tables { exp, log }
    }
}

/// Lexicographically least monic irreducible of degree `f` over GF(p), where
/// the coefficient tuple `(c_0, .., c_{f-1})` is compared from `c_0` upward.
fn least_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    for n in 0..count {
        // c_0 is the most significant digit of n.
        let mut coeffs = vec![0u32; f as usize + 1];
        let mut r = n;
        for i in (0..f as usize).rev() {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[f as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut r = n;
            for c in div.iter_mut().take(d) {
                *c = (r % p as u64) as u32;
                r /= p as u64;
            }
            div[d] = 1;
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

/// Whether a monic `div` divides `poly` over GF(p).
fn poly_rem_is_zero(poly: &[u32], div: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let dd = div.len() - 1;
    let p = p as u64;
    for k in (dd..r.len()).rev() {
        let c = r[k] % p;
        if c == 0 {
            continue;
        }
        for i in 0..=dd {
            r[k - dd + i] = (r[k - dd + i] + (p - div[i] as u64) * c) % p;
        }
    }
    r[..dd].iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Evaluates a polynomial over GF(p) at a prime-field point.
    fn eval_mod(poly: &[u32], x: u32, p: u32) -> u32 {
        poly.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
    }

    #[test]
    fn construction_examples() {
        let gf4 = GfContext::new(2, 2).unwrap();
        assert_eq!(gf4.q(), 4);
        assert_eq!(gf4.modulus(), &[1, 1, 1]);
        let gf5 = GfContext::new(5, 1).unwrap();
        assert_eq!(gf5.q(), 5);
        let gf27 = GfContext::new(3, 3).unwrap();
        assert_eq!(gf27.modulus().len(), 4);
        // exhaustive root check over GF(3)
        assert!((0..3).all(|x| eval_mod(gf27.modulus(), x, 3) != 0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(GfContext::new(6, 1), Err(Error::NotPrime(6)));
        assert_eq!(GfContext::new(5, 0), Err(Error::ZeroDegree));
        assert!(matches!(GfContext::new(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(GfContext::new(2, 20).is_ok());
        assert_eq!(GfContext::from_order(12), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn modulus_is_least_in_order() {
        // GF(9): candidates (c0, c1) in lex order; x^2 + 1 is the first irreducible
        assert_eq!(GfContext::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // GF(8): (c0, c1, c2) = (1, 0, 1) comes before (1, 1, 0)
        assert_eq!(GfContext::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn arithmetic_examples() {
        let gf5 = GfContext::new(5, 1).unwrap();
        assert_eq!(gf5.mul(gf5.from_int(2), gf5.from_int(3)), gf5.one());
        let gf4 = GfContext::new(2, 2).unwrap();
        let x = gf4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(gf4.mul(x, x), gf4.from_coeffs(&[1, 1]).unwrap());
        for ctx in [gf5, gf4, GfContext::new(3, 3).unwrap()] {
            for a in ctx.elements().skip(1) {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            }
            assert_eq!(ctx.inv(ctx.zero()), Err(Error::DivisionByZero(ctx.q())));
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        for (p, f) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let fast = GfContext::new(p, f).unwrap();
            let slow = GfContext::with_table_cap(p, f, 0).unwrap();
            assert!(fast.has_tables() && !slow.has_tables());
            for a in fast.elements() {
                for b in fast.elements() {
                    assert_eq!(fast.mul(a, b), slow.mul(a, b));
                }
                if !a.is_zero() {
                    assert_eq!(fast.inv(a), slow.inv(a));
                }
                assert_eq!(fast.is_square(a), slow.is_square(a));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, f) in [(2, 2), (3, 2), (2, 3), (5, 1)] {
            let k = GfContext::new(p, f).unwrap();
            for a in k.elements() {
                assert_eq!(k.add(a, k.neg(a)), k.zero());
                assert_eq!(k.sub(a, a), k.zero());
                for b in k.elements() {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in k.elements() {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn squares_examples() {
        let gf7 = GfContext::new(7, 1).unwrap();
        let squares: Vec<u32> = (1..7).map(|b| b * b % 7).collect();
        assert!(squares.contains(&2) && !squares.contains(&3));
        assert!(gf7.is_square(gf7.from_int(2)));
        assert!(!gf7.is_square(gf7.from_int(3)));
        let gf4 = GfContext::new(2, 2).unwrap();
        assert!(gf4.elements().all(|a| gf4.is_square(a)));
    }

    #[test]
    fn frobenius_examples() {
        let gf7 = GfContext::new(7, 1).unwrap();
        assert!(gf7.elements().all(|a| gf7.frobenius(a) == a));
        let gf9 = GfContext::new(3, 2).unwrap();
        let g = gf9.primitive_element();
        assert_eq!(gf9.frobenius(g), gf9.mul(g, gf9.mul(g, g)));
        for a in gf9.elements() {
            assert_eq!(gf9.frobenius(gf9.frobenius(a)), a);
        }
    }

    #[test]
    fn subfield_examples() {
        let gf27 = GfContext::new(3, 3).unwrap();
        assert_eq!(gf27.in_subfield(gf27.from_int(2), 1), Ok(true));
        let g = gf27.primitive_element();
        assert_eq!(gf27.in_subfield(g, 1), Ok(false));
        assert!(gf27.elements().all(|a| gf27.in_subfield(a, 3) == Ok(true)));
        assert_eq!(gf27.in_subfield(g, 2), Err(Error::NotASubfield { e: 2, f: 3 }));
    }

    #[test]
    fn exhaustive_field_properties_up_to_128() {
        for q in 2..=128u64 {
            let Some((p, f)) = prime_power(q) else { continue };
            let k = GfContext::new(p, f).unwrap();
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
                }
            }
            let d = if q % 2 == 1 { 2 } else { 1 };
            let nonzero_squares = k.elements().skip(1).filter(|&a| k.is_square(a)).count();
            assert_eq!(nonzero_squares as u64, (q - 1) / d, "q = {q}");
            for e in (1..=f).filter(|e| f % e == 0) {
                let members = k.elements().filter(|&a| k.in_subfield(a, e).unwrap()).count();
                assert_eq!(members as u64, p.pow(e), "q = {q}, e = {e}");
            }
            // sign key is an involution-invariant representative
            for a in k.elements() {
                assert_eq!(k.sign_key(a), k.sign_key(k.neg(a)));
            }
        }
    }

    #[test]
    fn irreducibility_check() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }
}
