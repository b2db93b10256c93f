//! Arithmetic in `F_q`, `q = p^m` with `p` an odd prime.
//!
//! Elements are stored by their canonical encoding `c_0 + c_1 p + ... +
//! c_{m-1} p^{m-1}`, where `c_0 + c_1 X + ...` is the reduced representative
//! modulo the field's modulus polynomial. For `m = 1` this is plain modular
//! arithmetic and the encoding is the residue itself.
//!
//! The modulus is the lexicographically least monic irreducible polynomial of
//! degree `m`, comparing the tuples `(c_0, ..., c_{m-1})`, so the same `(p, m)`
//! always produces the same field and the same element encodings.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Largest supported field order. Encodings are stored in a `u32`.
pub const MAX_ORDER: u64 = u32::MAX as u64;

/// `3^20 < 2^32 < 3^21`, so no supported field has a larger degree.
const MAX_DEGREE: usize = 20;

/// One element of `F_q` in canonical integer encoding.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn encoding(self) -> u64 {
        self.0 as u64
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_index(i: usize) -> FieldElement {
        FieldElement(i as u32)
    }

    #[inline]
    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_{p^m}` together with its modulus polynomial.
///
/// Cloning is cheap; lazily built lookup tables are shared between clones.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    m: u32,
    q: u64,
    /// `m + 1` coefficients, constant term first, monic.
    modulus: Vec<u64>,
    primitive: OnceLock<FieldElement>,
    inverses: OnceLock<Vec<FieldElement>>,
    characters: OnceLock<Vec<i8>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.inner.p)
            .field("m", &self.inner.m)
            .field("q", &self.inner.q)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl Field {
    /// Builds `F_{p^m}`.
    pub fn new(p: u64, m: u32) -> Result<Field> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        if p % 2 == 0 {
            return Err(if p == 2 {
                Error::EvenCharacteristic(p)
            } else {
                Error::NotPrime(p)
            });
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (0..m)
            .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&v| v <= MAX_ORDER))
            .ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, m as usize)
        };
        Ok(Field {
            inner: Arc::new(Inner {
                p,
                m,
                q,
                modulus,
                primitive: OnceLock::new(),
                inverses: OnceLock::new(),
                characters: OnceLock::new(),
            }),
        })
    }

    /// Builds the field of order `q`, factoring `q` into `p^m`.
    pub fn with_order(q: u64) -> Result<Field> {
        match arith::prime_power(q) {
            Some((p, m)) if p != 2 => Field::new(p, m),
            _ => Err(Error::NotPrimePower(q)),
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Validates an encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < self.inner.q {
            Ok(FieldElement(value as u32))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                q: self.inner.q,
            })
        }
    }

    /// Checks that `x` is a valid encoding for this field.
    pub fn check(&self, x: FieldElement) -> Result<FieldElement> {
        self.element(x.encoding())
    }

    /// The image of the integer `n` under `Z -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.inner.p as i64;
        FieldElement(n.rem_euclid(p) as u32)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    #[inline]
    pub fn minus_one(&self) -> FieldElement {
        FieldElement((self.inner.p - 1) as u32)
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q as u32).map(FieldElement)
    }

    /// `F_q^*` in ascending encoding order.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.inner.q as u32).map(FieldElement)
    }

    /// Binds `x` to this field for checked arithmetic.
    pub fn bind(&self, x: FieldElement) -> Result<Gf<'_>> {
        Ok(Gf {
            field: self,
            value: self.check(x)?,
        })
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.m == 1 {
            let s = a.encoding() + b.encoding();
            return FieldElement(if s >= p { s - p } else { s } as u32);
        }
        let (mut x, mut y) = (a.encoding(), b.encoding());
        let (mut out, mut scale) = (0u64, 1u64);
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { (p - a.encoding()) as u32 });
        }
        let mut x = a.encoding();
        let (mut out, mut scale) = (0u64, 1u64);
        while x != 0 {
            let d = (p - x % p) % p;
            out += d * scale;
            scale *= p;
            x /= p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.inner.m == 1 {
            let p = self.inner.p;
            let (x, y) = (a.encoding(), b.encoding());
            return FieldElement(if x >= y { x - y } else { x + p - y } as u32);
        }
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return FieldElement((a.encoding() * b.encoding() % p) as u32);
        }
        let m = self.inner.m as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let modulus = &self.inner.modulus;
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // X^m = -(c_0 + ... + c_{m-1} X^{m-1})
            for (j, &mj) in modulus[..m].iter().enumerate() {
                let idx = top - m + j;
                prod[idx] = (prod[idx] + (p - mj) * c) % p;
            }
            prod[top] = 0;
        }
        self.encode(&prod[..m])
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let p = self.inner.p;
        if self.inner.m == 1 {
            let (mut r0, mut r1) = (p as i64, a.encoding() as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let quot = r0 / r1;
                (r0, r1) = (r1, r0 - quot * r1);
                (s0, s1) = (s1, s0 - quot * s1);
            }
            debug_assert_eq!(r0, 1);
            return Ok(FieldElement(s0.rem_euclid(p as i64) as u32));
        }
        let da = self.digits(a);
        let mut poly_a = da[..self.inner.m as usize].to_vec();
        poly::trim(&mut poly_a);
        let inv = poly::inverse_mod(&poly_a, &self.inner.modulus, p)
            .expect("nonzero element is invertible modulo an irreducible polynomial");
        let mut coeffs = [0u64; MAX_DEGREE];
        coeffs[..inv.len()].copy_from_slice(&inv);
        Ok(self.encode(&coeffs[..self.inner.m as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut order = self.inner.q - 1;
        for (r, e) in arith::factorize(order) {
            for _ in 0..e {
                if self.pow(a, order / r) == FieldElement::ONE {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// The primitive element of smallest encoding.
    pub fn least_primitive_element(&self) -> FieldElement {
        *self.inner.primitive.get_or_init(|| {
            let n = self.inner.q - 1;
            let cofactors: Vec<u64> = arith::factorize(n).into_iter().map(|(r, _)| n / r).collect();
            self.nonzero()
                .find(|&g| cofactors.iter().all(|&c| self.pow(g, c) != FieldElement::ONE))
                .expect("the multiplicative group of a finite field is cyclic")
        })
    }

    /// Euler's criterion: `x^((q-1)/2) == 1`.
    pub fn is_quadratic_residue(&self, x: FieldElement) -> Result<bool> {
        if self.check(x)?.is_zero() {
            return Err(Error::ZeroResiduosity);
        }
        let e = self.pow(x, (self.inner.q - 1) / 2);
        if e == FieldElement::ONE {
            Ok(true)
        } else {
            debug_assert_eq!(e, self.minus_one());
            Ok(false)
        }
    }

    /// `(QR(q), NQR(q))`, each sorted by encoding.
    pub fn residue_sets(&self) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let chi = self.characters();
        self.nonzero().partition(|x| chi[x.idx()] == 1)
    }

    /// Cached quadratic character: 0 at zero, 1 on residues, -1 otherwise.
    #[inline]
    pub fn quadratic_character(&self, x: FieldElement) -> i8 {
        self.characters()[x.idx()]
    }

    fn characters(&self) -> &[i8] {
        self.inner.characters.get_or_init(|| {
            self.elements()
                .map(|x| match self.is_quadratic_residue(x) {
                    Err(_) => 0,
                    Ok(true) => 1,
                    Ok(false) => -1,
                })
                .collect()
        })
    }

    /// Cached inverse lookup; `x` must be nonzero.
    #[inline]
    pub fn inverse_of(&self, x: FieldElement) -> FieldElement {
        debug_assert!(!x.is_zero());
        self.inverse_table()[x.idx()]
    }

    /// Inverse of every element, indexed by encoding (entry 0 is 0).
    pub fn inverse_table(&self) -> &[FieldElement] {
        self.inner.inverses.get_or_init(|| {
            let q = self.inner.q as usize;
            let mut table = vec![FieldElement::ZERO; q];
            if self.inner.m == 1 {
                // inv(i) = -(p / i) * inv(p mod i)
                let p = self.inner.p;
                table[1] = FieldElement::ONE;
                for i in 2..q {
                    let prev = table[(p % i as u64) as usize].encoding();
                    let v = (p - (p / i as u64) * prev % p) % p;
                    table[i] = FieldElement(v as u32);
                }
            } else {
                for x in self.nonzero() {
                    if table[x.idx()].is_zero() {
                        let y = self.inv(x).expect("nonzero");
                        table[x.idx()] = y;
                        table[y.idx()] = x;
                    }
                }
            }
            table
        })
    }

    fn digits(&self, a: FieldElement) -> [u64; MAX_DEGREE] {
        let p = self.inner.p;
        let mut out = [0u64; MAX_DEGREE];
        let mut x = a.encoding();
        let mut i = 0;
        while x != 0 {
            out[i] = x % p;
            x /= p;
            i += 1;
        }
        out
    }

    fn encode(&self, coeffs: &[u64]) -> FieldElement {
        let p = self.inner.p;
        let v = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c);
        FieldElement(v as u32)
    }

    /// Coefficients `(c_0, ..., c_{m-1})` of the representative of `a`.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        self.digits(a)[..self.inner.m as usize].to_vec()
    }
}

/// An element bound to its field; arithmetic between different fields is an
/// error rather than silent garbage.
#[derive(Clone, Copy, Debug)]
pub struct Gf<'f> {
    field: &'f Field,
    value: FieldElement,
}

impl<'f> Gf<'f> {
    pub fn value(self) -> FieldElement {
        self.value
    }

    pub fn field(self) -> &'f Field {
        self.field
    }

    fn same(self, rhs: Gf<'_>) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(self, value: FieldElement) -> Gf<'f> {
        Gf {
            field: self.field,
            value,
        }
    }

    pub fn add(self, rhs: Gf<'_>) -> Result<Gf<'f>> {
        self.same(rhs)?;
        Ok(self.wrap(self.field.add(self.value, rhs.value)))
    }

    pub fn sub(self, rhs: Gf<'_>) -> Result<Gf<'f>> {
        self.same(rhs)?;
        Ok(self.wrap(self.field.sub(self.value, rhs.value)))
    }

    pub fn mul(self, rhs: Gf<'_>) -> Result<Gf<'f>> {
        self.same(rhs)?;
        Ok(self.wrap(self.field.mul(self.value, rhs.value)))
    }

    pub fn div(self, rhs: Gf<'_>) -> Result<Gf<'f>> {
        self.same(rhs)?;
        Ok(self.wrap(self.field.div(self.value, rhs.value)?))
    }

    pub fn neg(self) -> Gf<'f> {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(self) -> Result<Gf<'f>> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    /// Negative exponents go through the inverse.
    pub fn pow(self, e: i64) -> Result<Gf<'f>> {
        let base = if e < 0 { self.field.inv(self.value)? } else { self.value };
        Ok(self.wrap(self.field.pow(base, e.unsigned_abs())))
    }
}

impl PartialEq for Gf<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

/// Lexicographically least monic irreducible of degree `m >= 2` over `F_p`.
fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    // c0 = 0 means x divides f
    let mut low = vec![0u64; m];
    low[0] = 1;
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
        // odometer, last coefficient fastest
        let mut i = m;
        loop {
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
        }
    }
}

/// Dense polynomials over `F_p`, constant term first, no trailing zeros
/// (the zero polynomial is empty).
pub(crate) mod poly {
    use crate::arith;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn scalar_inv(c: u64, p: u64) -> u64 {
        arith::pow_mod(c, p - 2, p)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder of `a / b`, `b` nonzero.
    pub fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut rem = a.to_vec();
        trim(&mut rem);
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = scalar_inv(*b.last().unwrap(), p);
        let mut quot = vec![0u64; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = rem.last().unwrap() * lead_inv % p;
            quot[shift] = c;
            for (j, &bj) in b.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + (p - bj) * c) % p;
            }
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = div_rem(&x, &y, p);
            x = std::mem::replace(&mut y, r);
        }
        if let Some(&lead) = x.last() {
            let li = scalar_inv(lead, p);
            for c in &mut x {
                *c = *c * li % p;
            }
        }
        x
    }

    /// `X^e mod f`.
    pub fn x_pow_mod(mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = div_rem(&[0, 1], f, p).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = div_rem(&mul(&acc, &base, p), f, p).1;
            }
            base = div_rem(&mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    }

    /// Rabin's test: `X^(p^m) = X mod f` and `gcd(X^(p^(m/r)) - X, f) = 1`
    /// for every prime `r | m`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = div_rem(&[0, 1], f, p).1;
        if x_pow_mod(p.pow(m as u32), f, p) != x {
            return false;
        }
        arith::factorize(m as u64).into_iter().all(|(r, _)| {
            let h = x_pow_mod(p.pow((m as u64 / r) as u32), f, p);
            gcd(&sub(&h, &x, p), f, p) == vec![1]
        })
    }

    /// Inverse of `a` modulo `f` by extended Euclid.
    pub fn inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (f.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = div_rem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return None;
        }
        let li = scalar_inv(r0[0], p);
        let mut out: Vec<u64> = s0.iter().map(|c| c * li % p).collect();
        let (_, red) = div_rem(&out, f, p);
        out = red;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u32) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn make_field_rejects_bad_parameters() {
        assert!(matches!(Field::new(2, 1), Err(Error::EvenCharacteristic(2))));
        assert!(matches!(Field::new(9, 1), Err(Error::NotPrime(9))));
        assert!(matches!(Field::new(15, 2), Err(Error::NotPrime(15))));
        assert!(matches!(Field::new(5, 0), Err(Error::ZeroDegree)));
        assert!(matches!(Field::new(3, 21), Err(Error::FieldTooLarge { .. })));
        assert!(Field::new(3, 20).is_ok());
        assert!(matches!(Field::with_order(45), Err(Error::NotPrimePower(45))));
        assert!(matches!(Field::with_order(8), Err(Error::NotPrimePower(8))));
    }

    #[test]
    fn prime_field_basics() {
        let f = Field::new(29, 1).unwrap();
        assert_eq!(f.order(), 29);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.mul(fe(4), fe(4)), fe(16));
        assert_eq!(f.pow(fe(4), 7), fe(28));
        assert_eq!(f.inv(fe(2)).unwrap(), fe(15));
        assert!(matches!(f.inv(fe(0)), Err(Error::ZeroInverse)));
        assert_eq!(f.neg(fe(3)), fe(26));
        assert_eq!(f.sub(fe(3), fe(5)), fe(27));
        assert_eq!(Field::new(3, 1).unwrap().order(), 3);
    }

    #[test]
    fn least_primitive_elements() {
        assert_eq!(Field::new(29, 1).unwrap().least_primitive_element(), fe(2));
        assert_eq!(Field::new(41, 1).unwrap().least_primitive_element(), fe(6));
        assert_eq!(Field::new(7, 1).unwrap().least_primitive_element(), fe(3));
        assert_eq!(Field::new(3, 1).unwrap().least_primitive_element(), fe(2));
    }

    #[test]
    fn residuosity_examples() {
        let f = Field::new(29, 1).unwrap();
        assert!(f.is_quadratic_residue(fe(5)).unwrap());
        assert!(!f.is_quadratic_residue(fe(2)).unwrap());
        assert!(matches!(f.is_quadratic_residue(fe(0)), Err(Error::ZeroResiduosity)));
        assert!(matches!(
            f.is_quadratic_residue(fe(29)),
            Err(Error::ElementOutOfRange { .. })
        ));
        let (qr, nqr) = f.residue_sets();
        let want: Vec<_> = [1, 4, 5, 6, 7, 9, 13, 16, 20, 22, 23, 24, 25, 28]
            .into_iter()
            .map(fe)
            .collect();
        assert_eq!(qr, want);
        assert_eq!(nqr.len(), 14);

        let f41 = Field::new(41, 1).unwrap();
        let (_, nqr) = f41.residue_sets();
        let want: Vec<_> = [
            3, 6, 7, 11, 12, 13, 14, 15, 17, 19, 22, 24, 26, 27, 28, 29, 30, 34, 35, 38,
        ]
        .into_iter()
        .map(fe)
        .collect();
        assert_eq!(nqr, want);

        let f13 = Field::new(13, 1).unwrap();
        let (qr, nqr) = f13.residue_sets();
        assert_eq!((qr.len(), nqr.len()), (6, 6));
    }

    #[test]
    fn residues_are_even_powers_of_primitive_element() {
        for q in [9u64, 13, 25, 27, 29, 41, 49, 81, 125] {
            let f = Field::with_order(q).unwrap();
            let g = f.least_primitive_element();
            let mut even: Vec<_> = (0..(q - 1) / 2).map(|i| f.pow(g, 2 * i)).collect();
            even.sort();
            assert_eq!(f.residue_sets().0, even, "q = {q}");
        }
    }

    #[test]
    fn quadratic_extension_of_f5() {
        // X^2 + 1 splits (2^2 = -1); X^2 + X + 1 has discriminant -3 = 2, a non-square.
        let f = Field::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // X * X = X^2 = -X - 1 = 4X + 4 -> 4 + 4*5
        assert_eq!(f.mul(fe(5), fe(5)), fe(24));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Field::new(29, 1).unwrap();
        let b = Field::new(31, 1).unwrap();
        let x = a.bind(fe(3)).unwrap();
        let y = b.bind(fe(3)).unwrap();
        assert!(matches!(x.add(y), Err(Error::FieldMismatch)));
        assert!(matches!(x.mul(y), Err(Error::FieldMismatch)));
        let same = a.clone();
        let z = same.bind(fe(5)).unwrap();
        assert_eq!(x.mul(z).unwrap().value(), fe(15));
        assert_eq!(x.pow(-1).unwrap().value(), a.inv(fe(3)).unwrap());
        assert!(matches!(b.bind(fe(40)), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn inverse_table_matches_euclid() {
        for q in [3u64, 29, 41, 25, 27, 49, 343] {
            let f = Field::with_order(q).unwrap();
            for x in f.nonzero() {
                assert_eq!(f.inverse_of(x), f.inv(x).unwrap());
                assert_eq!(f.mul(x, f.inverse_of(x)), FieldElement::ONE);
            }
        }
    }

    #[test]
    fn polynomial_inverse_round_trip() {
        let f = [1u64, 1, 1];
        let inv = poly::inverse_mod(&[2, 3], &f, 5).unwrap();
        let prod = poly::div_rem(&poly::mul(&[2, 3], &inv, 5), &f, 5).1;
        assert_eq!(prod, vec![1]);
    }
}
