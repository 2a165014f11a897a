//! Arithmetic in Hecke eigenvalue fields `Q_f` presented by a monic
//! integer defining polynomial: exact element arithmetic in the power
//! basis and absolute norms via resultants. No embeddings, no floating
//! point; downstream uses are divisibility tests.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{self, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    NotMonic,
    ZeroDegree,
    Reducible(String),
    NotCertifiedIrreducible,
}

impl fmt::Display for NumFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumFieldError::NotMonic => write!(f, "defining polynomial must be monic"),
            NumFieldError::ZeroDegree => write!(f, "defining polynomial must have degree >= 1"),
            NumFieldError::Reducible(why) => write!(f, "defining polynomial is reducible: {why}"),
            NumFieldError::NotCertifiedIrreducible => {
                write!(f, "could not certify irreducibility of the defining polynomial")
            }
        }
    }
}

impl core::error::Error for NumFieldError {}

/// `Q_f = Q[x]/(g)` for a monic irreducible `g` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueField {
    /// Monic defining polynomial, low-to-high coefficients.
    defining_poly: IntPoly,
    degree: usize,
}

impl EigenvalueField {
    /// The rationals, presented by `x`.
    pub fn rational() -> Self {
        EigenvalueField {
            defining_poly: poly::from_coeffs(&[0, 1]),
            degree: 1,
        }
    }

    /// Builds the field, certifying irreducibility (squarefreeness plus a
    /// distinct-degree-factorization certificate modulo small primes with
    /// a factor-degree-pattern sieve). Uncertifiable inputs are rejected.
    pub fn new(defining_poly: IntPoly) -> Result<Self, NumFieldError> {
        let n = poly::degree(&defining_poly).ok_or(NumFieldError::ZeroDegree)?;
        if n == 0 {
            return Err(NumFieldError::ZeroDegree);
        }
        if !defining_poly[n].is_one() {
            return Err(NumFieldError::NotMonic);
        }
        if n > 1 {
            certify_irreducible(&defining_poly)?;
        }
        Ok(EigenvalueField {
            defining_poly,
            degree: n,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn defining_poly(&self) -> &IntPoly {
        &self.defining_poly
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coords: vec![] }
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        let mut coords = vec![r];
        trim_q(&mut coords);
        FieldElement { coords }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The class of `x` (a root of the defining polynomial).
    pub fn generator(&self) -> FieldElement {
        assert!(self.degree >= 2, "the rationals have no generator");
        FieldElement {
            coords: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> FieldElement {
        assert!(coords.len() <= self.degree);
        let mut coords = coords;
        trim_q(&mut coords);
        FieldElement { coords }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = a.coords.len().max(b.coords.len());
        let mut coords = vec![BigRational::zero(); n];
        for (i, c) in a.coords.iter().enumerate() {
            coords[i] += c;
        }
        for (i, c) in b.coords.iter().enumerate() {
            coords[i] += c;
        }
        trim_q(&mut coords);
        FieldElement { coords }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Exact subtraction of a rational integer (the elimination engine's
    /// `a - a_q(f)` terms).
    pub fn subtract_int(&self, a: &FieldElement, n: i64) -> FieldElement {
        self.sub(a, &self.from_int(n))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if a.coords.is_empty() || b.coords.is_empty() {
            return self.zero();
        }
        let mut prod = vec![BigRational::zero(); a.coords.len() + b.coords.len() - 1];
        for (i, ca) in a.coords.iter().enumerate() {
            for (j, cb) in b.coords.iter().enumerate() {
                prod[i + j] += ca * cb;
            }
        }
        // reduce modulo the monic defining polynomial
        while prod.len() > self.degree {
            let top = prod.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let deg = prod.len(); // degree of the popped term
            for (i, g) in self.defining_poly.iter().take(self.degree).enumerate() {
                let idx = deg - self.degree + i;
                let sub = &top * BigRational::from_integer(g.clone());
                prod[idx] -= sub;
            }
        }
        trim_q(&mut prod);
        FieldElement { coords: prod }
    }

    /// Absolute norm `N(Q_f/Q)(e)`, computed as `Res(g, D e) / D^deg` for
    /// a common denominator `D` of the coordinates.
    pub fn element_norm(&self, e: &FieldElement) -> BigRational {
        if e.coords.is_empty() {
            return BigRational::zero();
        }
        if e.coords.len() == 1 {
            // rational r: norm = r^degree
            let mut acc = BigRational::one();
            for _ in 0..self.degree {
                acc *= &e.coords[0];
            }
            return acc;
        }
        let mut denom = BigInt::one();
        for c in &e.coords {
            denom = num_integer::lcm(denom, c.denom().clone());
        }
        let mut int_poly: IntPoly = e
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
            .collect();
        poly::trim(&mut int_poly);
        let res = poly::resultant_sylvester(&self.defining_poly, &int_poly);
        let dpow = denom.pow(self.degree as u32);
        BigRational::new(res, dpow)
    }

    /// Integer norm when the element has integral coordinates.
    pub fn element_norm_int(&self, e: &FieldElement) -> BigInt {
        let n = self.element_norm(e);
        debug_assert!(n.is_integer());
        n.to_integer()
    }
}

/// An element of `Q_f` in the power basis; coordinates low-to-high, no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coords.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coords[0].clone()),
            _ => None,
        }
    }
}

fn trim_q(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

// ----- irreducibility certification -----

fn certify_irreducible(g: &IntPoly) -> Result<(), NumFieldError> {
    let n = poly::degree(g).unwrap();
    // squarefree over Q: gcd(g, g') must be constant; detected via the
    // resultant with the derivative (discriminant-like) being nonzero
    let disc = poly::resultant_sylvester(g, &poly::derivative(g));
    if disc.is_zero() {
        return Err(NumFieldError::Reducible(String::from(
            "repeated factor (vanishing discriminant)",
        )));
    }
    // rational root test at 0, +-1 catches the common small factors early
    for r in [-1i64, 0, 1] {
        if poly::eval(g, &BigInt::from(r)).is_zero() {
            return Err(NumFieldError::Reducible(String::from("rational root")));
        }
    }
    // degree patterns of factorizations modulo small primes
    let mut pattern: Vec<bool> = vec![true; n + 1]; // possible factor degrees
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let Some(degrees) = factor_degrees_mod_p(g, p) else {
            continue;
        };
        if degrees.len() == 1 && degrees[0] == n {
            return Ok(()); // irreducible modulo p certifies irreducibility
        }
        // subset sums of the modular factor degrees
        let mut reachable = vec![false; n + 1];
        reachable[0] = true;
        for d in &degrees {
            for i in (0..=n - d).rev() {
                if reachable[i] {
                    reachable[i + d] = true;
                }
            }
        }
        for (i, keep) in pattern.iter_mut().enumerate() {
            *keep = *keep && reachable[i];
        }
        if pattern
            .iter()
            .enumerate()
            .all(|(i, &ok)| !ok || i == 0 || i == n)
        {
            return Ok(()); // only trivial factor degrees survive
        }
    }
    Err(NumFieldError::NotCertifiedIrreducible)
}

/// Degrees of the irreducible factors of `g` mod p (with multiplicity),
/// or None when `g` mod p is not squarefree or drops degree.
fn factor_degrees_mod_p(g: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let n = poly::degree(g)?;
    let gp: Vec<u64> = g
        .iter()
        .map(|c| {
            use num_integer::Integer;
            let r = c.mod_floor(&BigInt::from(p));
            (&r).try_into().unwrap()
        })
        .collect();
    let gp = ModPoly::new(gp, p);
    if gp.degree() != n {
        return None;
    }
    let deriv = gp.derivative();
    if deriv.is_zero() || gp.gcd(&deriv).degree() > 0 {
        return None; // not squarefree mod p
    }
    // distinct-degree factorization
    let mut degrees = Vec::new();
    let mut f = gp.clone();
    let mut h = ModPoly::x(p); // x^(p^d) mod f, iterated
    let mut d = 0usize;
    while f.degree() >= 1 {
        d += 1;
        if 2 * d > f.degree() {
            degrees.push(f.degree());
            break;
        }
        h = h.pow_mod(p, &f);
        let mut diff = h.clone();
        diff.sub_x();
        let g_d = f.gcd(&diff);
        if g_d.degree() > 0 {
            // product of the degree-d irreducible factors
            for _ in 0..g_d.degree() / d {
                degrees.push(d);
            }
            f = f.div_exact(&g_d);
            h = h.rem(&f);
        }
    }
    Some(degrees)
}

/// Dense polynomial over F_p, for the modular certificates only.
#[derive(Clone, Debug)]
struct ModPoly {
    c: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in &mut c {
            *x %= p;
        }
        let mut out = ModPoly { c, p };
        out.trim();
        out
    }

    fn x(p: u64) -> Self {
        ModPoly { c: vec![0, 1], p }
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| (i as u64 % self.p) * x % self.p)
            .collect();
        ModPoly::new(c, self.p)
    }

    fn sub_x(&mut self) {
        if self.c.len() < 2 {
            self.c.resize(2, 0);
        }
        self.c[1] = (self.c[1] + self.p - 1) % self.p;
        self.trim();
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ModPoly { c: vec![], p: self.p };
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + (a as u128 * b as u128 % self.p as u128) as u64) % self.p;
            }
        }
        ModPoly::new(c, self.p)
    }

    fn rem(&self, modulus: &Self) -> Self {
        let mut r = self.clone();
        let dm = modulus.degree();
        let lead_inv = mod_inv(*modulus.c.last().unwrap(), self.p);
        while !r.is_zero() && r.degree() >= dm {
            let shift = r.degree() - dm;
            let factor = (*r.c.last().unwrap() as u128 * lead_inv as u128 % self.p as u128) as u64;
            for (i, &mc) in modulus.c.iter().enumerate() {
                let idx = i + shift;
                let sub = (factor as u128 * mc as u128 % self.p as u128) as u64;
                r.c[idx] = (r.c[idx] + self.p - sub) % self.p;
            }
            r.trim();
        }
        r
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn div_exact(&self, divisor: &Self) -> Self {
        // monicize divisor, schoolbook division
        let dd = divisor.degree();
        let lead_inv = mod_inv(*divisor.c.last().unwrap(), self.p);
        let mut r = self.clone();
        let mut q = vec![0u64; self.degree() - dd + 1];
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let factor = (*r.c.last().unwrap() as u128 * lead_inv as u128 % self.p as u128) as u64;
            q[shift] = factor;
            for (i, &mc) in divisor.c.iter().enumerate() {
                let idx = i + shift;
                let sub = (factor as u128 * mc as u128 % self.p as u128) as u64;
                r.c[idx] = (r.c[idx] + self.p - sub) % self.p;
            }
            r.trim();
        }
        debug_assert!(r.is_zero());
        ModPoly::new(q, self.p)
    }

    fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = ModPoly::new(vec![1], self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}
