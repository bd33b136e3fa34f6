//! Arithmetic in GF(p^k) for small prime powers.
//!
//! Elements are dense coefficient vectors (low degree first) reduced modulo a
//! monic irreducible polynomial. The modulus is always the lexicographically
//! smallest monic irreducible of degree `k`, so two fields built from the same
//! `(p, k)` agree bit for bit.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime and `k >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // no factor up to sqrt(q): q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem {
    coeffs: Vec<u32>,
}

impl FieldElem {
    /// Coefficients of the polynomial representative, lowest degree first.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    /// Monic modulus of degree `k`, lowest degree first (length `k + 1`).
    modulus: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadArgs("extension degree must be at least 1".into()));
        }
        let order = p.checked_pow(k).filter(|&o| o <= MAX_ORDER);
        if order.is_none() {
            return Err(Error::TooLarge { what: format!("field order {p}^{k}") });
        }
        let p = p as u32;
        let modulus = smallest_irreducible(p, k);
        Ok(FiniteField { p, k, modulus })
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.k as usize] }
    }

    pub fn one(&self) -> FieldElem {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    pub fn elem(&self, index: u64) -> FieldElem {
        assert!(index < self.order(), "index {index} out of range");
        let mut rest = index;
        let coeffs = (0..self.k)
            .map(|_| {
                let c = (rest % self.p as u64) as u32;
                rest /= self.p as u64;
                c
            })
            .collect();
        FieldElem { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::ForeignElement);
        }
        Ok(FieldElem { coeffs: coeffs.to_vec() })
    }

    pub fn index_of(&self, e: &FieldElem) -> u64 {
        e.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |i| self.elem(i))
    }

    pub fn contains(&self, e: &FieldElem) -> bool {
        e.coeffs.len() == self.k as usize && e.coeffs.iter().all(|&c| c < self.p)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let k = self.k as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // eliminate degrees >= k using the monic modulus
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + c * (p - m as u64)) % p;
            }
        }
        FieldElem { coeffs: prod[..k].iter().map(|&c| c as u32).collect() }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a^(q-2) = a^-1 in the multiplicative group of order q-1
        Ok(self.pow(a, self.order() - 2))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(p).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    let p = p as u64;
    while r.len() > dd {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dd;
        for (i, &c) in den[..dd].iter().enumerate() {
            r[shift + i] = (r[shift + i] + lead * (p - c as u64)) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`p` digits of `code`, with the constant term as the most significant digit.
/// Iterating `code` upward therefore visits polynomials in lexicographic order
/// of their low-to-high coefficient vectors.
fn monic_from_code(code: u64, p: u32, deg: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize + 1];
    coeffs[deg as usize] = 1;
    let mut rest = code;
    for i in (0..deg as usize).rev() {
        coeffs[i] = (rest % p as u64) as u32;
        rest /= p as u64;
    }
    coeffs
}

/// Exhaustive trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d) {
            let f = monic_from_code(code, p, d);
            if poly_rem(poly, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..(p as u64).pow(k))
        .map(|code| monic_from_code(code, p, k))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root test over GF(p): valid irreducibility oracle for degree 2 and 3.
    fn has_root(poly: &[u32], p: u32) -> bool {
        (0..p as u64).any(|x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p as u64) == 0)
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn gf2_has_modulus_x() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 2);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        // the four monic quadratics over GF(2); only x^2+x+1 has no root
        let irreducible: Vec<u64> = (0..4).filter(|&c| !has_root(&monic_from_code(c, 2, 2), 2)).collect();
        assert_eq!(irreducible, vec![3]);
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_smallest_rootless_quadratic() {
        let expected = (0..9).map(|c| monic_from_code(c, 3, 2)).find(|f| !has_root(f, 3)).unwrap();
        assert_eq!(expected, vec![1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), expected.as_slice());
    }

    #[test]
    fn trial_division_matches_root_test_for_small_degrees() {
        for p in [2u32, 3, 5] {
            for deg in [2u32, 3] {
                for code in 0..(p as u64).pow(deg) {
                    let f = monic_from_code(code, p, deg);
                    assert_eq!(is_irreducible(&f, p), !has_root(&f, p), "{f:?} over GF({p})");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(4, 1), Err(Error::NotPrime(4)));
        assert!(matches!(FiniteField::new(2, 17), Err(Error::TooLarge { .. })));
        assert!(FiniteField::new(2, 16).is_ok());
        assert_eq!(FiniteField::of_order(6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn small_examples() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(f3.mul(&f3.elem(2), &f3.elem(2)), f3.elem(1));
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(f2.add(&f2.elem(1), &f2.elem(1)), f2.zero());
        let f4 = FiniteField::new(2, 2).unwrap();
        for i in 1..4 {
            let a = f4.elem(i);
            assert_eq!(f4.mul(&a, &f4.inv(&a).unwrap()), f4.one());
        }
        assert_eq!(f4.inv(&f4.zero()), Err(Error::DivisionByZero));
    }

    fn check_axioms(f: &FiniteField) {
        let els: Vec<_> = f.elements().collect();
        let (zero, one) = (f.zero(), f.one());
        for a in &els {
            assert_eq!(f.add(a, &zero), *a);
            assert_eq!(f.mul(a, &one), *a);
            assert!(f.add(a, &f.neg(a)).is_zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, &f.inv(a).unwrap()), one);
                assert_eq!(f.pow(a, f.order() - 1), one);
            }
            for b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in &els {
                    assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                    assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_hold_exhaustively_up_to_order_64() {
        for q in 2..=64u64 {
            if let Some((p, k)) = prime_power(q) {
                let f = FiniteField::new(p, k).unwrap();
                assert_eq!(f.elements().count() as u64, q);
                check_axioms(&f);
            }
        }
    }

    #[test]
    fn index_round_trip() {
        let f = FiniteField::new(3, 3).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index_of(&f.elem(i)), i);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn axioms_hold_on_random_samples(
                (p, k) in prop::sample::select(vec![(2u64, 7u32), (2, 8), (3, 4), (5, 3), (7, 2), (11, 2), (251, 1)]),
                a in any::<u64>(), b in any::<u64>(), c in any::<u64>(),
            ) {
                let f = FiniteField::new(p, k).unwrap();
                let q = f.order();
                let (a, b, c) = (f.elem(a % q), f.elem(b % q), f.elem(c % q));
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                if !a.is_zero() {
                    prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                    prop_assert_eq!(f.pow(&a, q - 1), f.one());
                }
            }
        }
    }
}
