//! Quadratic fields `Q(sqrt(d))` of class number one: exact element
//! arithmetic in the ring of integers, prime splitting, ideal lattices,
//! valuations and fundamental units.
//!
//! Elements are written `x + y*w` where `w = sqrt(d)` for `d = 2, 3 mod 4`
//! and `w = (1 + sqrt(d))/2` for `d = 1 mod 4`, so `{1, w}` is always an
//! integral basis.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::tables;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotSquarefree(i64),
    ClassNumberNotOne(i64),
    ImaginaryField,
    ZeroElement,
    UnitSearchExhausted,
    NonPrincipalPrime,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotSquarefree(d) => write!(f, "d = {d} is not squarefree"),
            FieldError::ClassNumberNotOne(d) => {
                write!(f, "Q(sqrt({d})) does not have class number one")
            }
            FieldError::ImaginaryField => write!(f, "operation requires a real field"),
            FieldError::ZeroElement => write!(f, "zero element has no valuation"),
            FieldError::UnitSearchExhausted => {
                write!(f, "continued-fraction unit search exceeded iteration cap")
            }
            FieldError::NonPrincipalPrime => write!(f, "no small generator found for prime"),
        }
    }
}

impl core::error::Error for FieldError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// `w = sqrt(d)`, for `d = 2, 3 mod 4`.
    SqrtD,
    /// `w = (1 + sqrt(d))/2`, for `d = 1 mod 4`.
    HalfInteger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Real,
    Imaginary,
}

/// A quadratic field of class number one, acting as the ring object for
/// element and ideal arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    d: i64,
    discriminant: i64,
    basis_mode: BasisMode,
    signature: Signature,
    class_number_one: bool,
    /// trace and norm of `w`: `w^2 = s*w - m`.
    s: i64,
    m: i64,
}

fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i * i) {
            return false;
        }
        i += 1;
    }
    true
}

impl FieldSpec {
    /// Builds `Q(sqrt(d))`, checking squarefreeness and the compiled-in
    /// class-number-one table.
    ///
    /// ```
    /// use quadfermat_core::quadfield::{AlgebraicInteger, FieldSpec};
    /// use num_bigint::BigInt;
    ///
    /// let k = FieldSpec::new(5).unwrap();
    /// let golden = AlgebraicInteger::from_coords(0, 1); // (1 + sqrt5)/2
    /// assert_eq!(k.norm(&golden), BigInt::from(-1));
    /// assert_eq!(k.fundamental_unit().unwrap(), golden);
    /// assert!(FieldSpec::new(10).is_err()); // class number two
    /// ```
    pub fn new(d: i64) -> Result<Self, FieldError> {
        Self::with_extra_fields(d, &[])
    }

    /// Like [`FieldSpec::new`] but accepting extra class-number-one `d`
    /// values supplied by configuration (for fields outside the built-in
    /// |d| <= 200 table).
    pub fn with_extra_fields(d: i64, extra: &[i64]) -> Result<Self, FieldError> {
        if d == 0 || d == 1 {
            return Err(FieldError::NotSquarefree(d));
        }
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        if !tables::has_class_number_one(d) && !extra.contains(&d) {
            return Err(FieldError::ClassNumberNotOne(d));
        }
        let half = d.rem_euclid(4) == 1;
        let (s, m) = if half { (1, (1 - d) / 4) } else { (0, -d) };
        Ok(FieldSpec {
            d,
            discriminant: if half { d } else { 4 * d },
            basis_mode: if half {
                BasisMode::HalfInteger
            } else {
                BasisMode::SqrtD
            },
            signature: if d > 0 {
                Signature::Real
            } else {
                Signature::Imaginary
            },
            class_number_one: true,
            s,
            m,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn basis_mode(&self) -> BasisMode {
        self.basis_mode
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_real(&self) -> bool {
        self.signature == Signature::Real
    }

    pub fn class_number_one(&self) -> bool {
        self.class_number_one
    }

    /// LMFDB-style field label `2.2.D.1` / `2.0.|D|.1`.
    pub fn label(&self) -> String {
        use alloc::format;
        if self.is_real() {
            format!("2.2.{}.1", self.discriminant)
        } else {
            format!("2.0.{}.1", -self.discriminant)
        }
    }

    // ----- element arithmetic -----

    pub fn zero(&self) -> AlgebraicInteger {
        AlgebraicInteger::from_coords(0, 0)
    }

    pub fn one(&self) -> AlgebraicInteger {
        AlgebraicInteger::from_coords(1, 0)
    }

    pub fn add(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger {
            x: &a.x + &b.x,
            y: &a.y + &b.y,
        }
    }

    pub fn sub(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger {
            x: &a.x - &b.x,
            y: &a.y - &b.y,
        }
    }

    pub fn neg(&self, a: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger {
            x: -&a.x,
            y: -&a.y,
        }
    }

    pub fn mul(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        // (x1 + y1 w)(x2 + y2 w) with w^2 = s w - m
        let s = BigInt::from(self.s);
        let m = BigInt::from(self.m);
        let x = &a.x * &b.x - &m * &a.y * &b.y;
        let y = &a.x * &b.y + &a.y * &b.x + s * &a.y * &b.y;
        AlgebraicInteger { x, y }
    }

    pub fn mul_int(&self, a: &AlgebraicInteger, k: &BigInt) -> AlgebraicInteger {
        AlgebraicInteger {
            x: &a.x * k,
            y: &a.y * k,
        }
    }

    pub fn conj(&self, a: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger {
            x: &a.x + BigInt::from(self.s) * &a.y,
            y: -&a.y,
        }
    }

    pub fn norm(&self, a: &AlgebraicInteger) -> BigInt {
        &a.x * &a.x + BigInt::from(self.s) * &a.x * &a.y + BigInt::from(self.m) * &a.y * &a.y
    }

    pub fn trace(&self, a: &AlgebraicInteger) -> BigInt {
        BigInt::from(2) * &a.x + BigInt::from(self.s) * &a.y
    }

    pub fn pow(&self, a: &AlgebraicInteger, mut k: u64) -> AlgebraicInteger {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Builds `u + v*sqrt(d)` in the integral basis (exact for any field;
    /// in half-integer mode `sqrt(d) = 2w - 1`).
    pub fn from_sqrt_coords(&self, u: i64, v: i64) -> AlgebraicInteger {
        match self.basis_mode {
            BasisMode::SqrtD => AlgebraicInteger::from_coords(u, v),
            BasisMode::HalfInteger => AlgebraicInteger::from_coords(u - v, 2 * v),
        }
    }

    /// Renders an element as `u + v*sqrt(d)` when the sqrt-coordinates are
    /// integral, else with the halved form.
    pub fn display_sqrt(&self, a: &AlgebraicInteger) -> String {
        use alloc::format;
        let join = |u: &BigInt, v: &BigInt, halved: bool| -> String {
            let base = if v.is_zero() {
                format!("{u}")
            } else if u.is_zero() {
                format!("{v}*sqrt({})", self.d)
            } else if v.is_negative() {
                format!("{u}{v}*sqrt({})", self.d)
            } else {
                format!("{u}+{v}*sqrt({})", self.d)
            };
            if halved {
                format!("({base})/2")
            } else {
                base
            }
        };
        match self.basis_mode {
            BasisMode::SqrtD => join(&a.x, &a.y, false),
            BasisMode::HalfInteger => {
                // x + y w = (2x + y)/2 + (y/2) sqrt(d)
                if a.y.is_even() {
                    let v = &a.y / 2;
                    let u = &a.x + &v;
                    join(&u, &v, false)
                } else {
                    join(&(BigInt::from(2) * &a.x + &a.y), &a.y, true)
                }
            }
        }
    }

    /// Exact signs `(sign(s1(a)), sign(s2(a)))` of the two real embeddings.
    /// Panics on the zero element or imaginary fields.
    pub fn embed_signs(&self, a: &AlgebraicInteger) -> (i8, i8) {
        assert!(self.is_real());
        assert!(!a.is_zero());
        // s_i(a) = (A +- y sqrt(t)) / 2 with A = 2x + s y, t = disc
        let big_a = BigInt::from(2) * &a.x + BigInt::from(self.s) * &a.y;
        let t = BigInt::from(self.discriminant);
        let sign = |big_a: &BigInt, y: &BigInt| -> i8 {
            if y.is_zero() {
                return if big_a.is_positive() { 1 } else { -1 };
            }
            if y.is_positive() {
                if !big_a.is_negative() || y * y * &t > big_a * big_a {
                    1
                } else {
                    -1
                }
            } else if !big_a.is_positive() {
                -1
            } else if big_a * big_a > y * y * &t {
                1
            } else {
                -1
            }
        };
        (sign(&big_a, &a.y), sign(&big_a, &(-&a.y)))
    }

    // ----- prime splitting -----

    /// Splits a rational prime `q` into the primes of `O_K` above it.
    pub fn split_rational_prime(&self, q: u64) -> Vec<PrimeIdeal> {
        assert!(is_prime_u64(q), "q must be a rational prime");
        let d = self.d;
        if q == 2 {
            return match self.basis_mode {
                BasisMode::HalfInteger => {
                    // minimal polynomial of w mod 2: x^2 - x + (1-d)/4
                    if ((1 - d) / 4).rem_euclid(2) == 0 {
                        vec![
                            PrimeIdeal::new(self, 2, SplitType::Split, Some(0)),
                            PrimeIdeal::new(self, 2, SplitType::Split, Some(1)),
                        ]
                    } else {
                        vec![PrimeIdeal::new(self, 2, SplitType::Inert, None)]
                    }
                }
                BasisMode::SqrtD => {
                    let t = d.unsigned_abs() % 2;
                    vec![PrimeIdeal::new(self, 2, SplitType::Ramified, Some(t))]
                }
            };
        }
        if d.unsigned_abs().is_multiple_of(q) {
            let t = match self.basis_mode {
                BasisMode::SqrtD => 0,
                BasisMode::HalfInteger => q.div_ceil(2) % q,
            };
            return vec![PrimeIdeal::new(self, q, SplitType::Ramified, Some(t))];
        }
        match legendre(d, q) {
            -1 => vec![PrimeIdeal::new(self, q, SplitType::Inert, None)],
            1 => {
                let mut roots = Vec::new();
                for t in 0..q {
                    let ti = t as i128;
                    let val = ti * ti - self.s as i128 * ti + self.m as i128;
                    if val.rem_euclid(q as i128) == 0 {
                        roots.push(t);
                    }
                }
                debug_assert_eq!(roots.len(), 2);
                roots
                    .into_iter()
                    .map(|t| PrimeIdeal::new(self, q, SplitType::Split, Some(t)))
                    .collect()
            }
            _ => unreachable!("ramified case already handled"),
        }
    }

    /// Exact `P`-adic valuation of a nonzero element, via contents and
    /// norms in the two-element representation (never floating point).
    pub fn valuation(&self, a: &AlgebraicInteger, p: &PrimeIdeal) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let q = BigInt::from(p.residue_char);
        match p.split_type {
            SplitType::Inert => Ok(coord_content_val(a, &q)),
            SplitType::Ramified => Ok(int_valuation(&self.norm(a), &q)),
            SplitType::Split => {
                let mc = coord_content_val(a, &q);
                let qk = q.pow(mc as u32);
                let reduced = AlgebraicInteger {
                    x: &a.x / &qk,
                    y: &a.y / &qk,
                };
                let t = BigInt::from(p.omega_residue.expect("split prime has residue"));
                let in_p = (&reduced.x + t * &reduced.y).mod_floor(&q).is_zero();
                if !in_p {
                    Ok(mc)
                } else {
                    Ok(mc + int_valuation(&self.norm(&reduced), &q))
                }
            }
        }
    }

    /// Fundamental unit of a real field via the continued fraction of
    /// `sqrt(d)`, descending to the half-integer unit when `d = 1 mod 4`.
    pub fn fundamental_unit(&self) -> Result<AlgebraicInteger, FieldError> {
        if !self.is_real() {
            return Err(FieldError::ImaginaryField);
        }
        let (x, y, n) = pell_fundamental(self.d as u64)?;
        if self.basis_mode == BasisMode::HalfInteger {
            // look for e with e^3 = x + y sqrt(d), e = (X + Y sqrt d)/2,
            // X^2 - d Y^2 = 4 n_e where n_e^3 = n, i.e. n_e = n.
            let t = BigInt::from(2) * &x;
            let x0 = t.cbrt();
            for dx in -2i64..=2 {
                let cand = &x0 + BigInt::from(dx);
                if cand <= BigInt::zero() {
                    continue;
                }
                let lhs = &cand * &cand * &cand - BigInt::from(3 * n) * &cand;
                if lhs == t {
                    let y2 = (&cand * &cand - BigInt::from(4 * n)) / BigInt::from(self.d);
                    if y2 >= BigInt::zero() {
                        let ysq = y2.sqrt();
                        if &ysq * &ysq == y2 && (&cand - &ysq).is_even() {
                            // (X + Y sqrt d)/2 = (X - Y)/2 + Y w
                            let eps = AlgebraicInteger {
                                x: (&cand - &ysq) / 2,
                                y: ysq,
                            };
                            debug_assert!(self.norm(&eps).abs().is_one());
                            return Ok(eps);
                        }
                    }
                }
            }
        }
        // integer-coordinate unit x + y sqrt(d)
        let eps = match self.basis_mode {
            BasisMode::SqrtD => AlgebraicInteger { x, y },
            BasisMode::HalfInteger => AlgebraicInteger {
                x: &x - &y,
                y: BigInt::from(2) * y,
            },
        };
        debug_assert!(self.norm(&eps).abs().is_one());
        Ok(eps)
    }

    /// Generators of the unit group modulo nothing: `[-1, eps]` for real
    /// fields, the torsion generator for imaginary fields.
    pub fn unit_generators(&self) -> Result<Vec<AlgebraicInteger>, FieldError> {
        if self.is_real() {
            Ok(vec![
                AlgebraicInteger::from_coords(-1, 0),
                self.fundamental_unit()?,
            ])
        } else if self.d == -1 || self.d == -3 {
            // i, resp. a primitive sixth root of unity: both equal w here
            Ok(vec![AlgebraicInteger::from_coords(0, 1)])
        } else {
            Ok(vec![AlgebraicInteger::from_coords(-1, 0)])
        }
    }

    /// A generator of the prime above 2 (class number one makes every
    /// prime principal): `2` itself when inert, an element of norm +-2
    /// otherwise, found on the continued-fraction expansion of `sqrt(d)`
    /// or by a small definite search.
    pub fn generator_over_two(&self, p: &PrimeIdeal) -> Result<AlgebraicInteger, FieldError> {
        assert_eq!(p.residue_char, 2);
        match p.split_type {
            SplitType::Inert => Ok(AlgebraicInteger::from_coords(2, 0)),
            SplitType::Ramified if self.is_real() => {
                // convergents p_k/q_k of sqrt(d) satisfy
                // p_k^2 - d q_k^2 = (-1)^(k+1) Q_(k+1); watch for |..| = 2
                let d = self.d as u64;
                let a0 = isqrt_u64(d);
                let (mut pp, mut qq, mut a) = (0i64, 1i64, a0 as i64);
                let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
                let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
                for _ in 0..tables::UNIT_SEARCH_CAP {
                    let cand = AlgebraicInteger {
                        x: h1.clone(),
                        y: k1.clone(),
                    };
                    let cand = match self.basis_mode {
                        BasisMode::SqrtD => cand,
                        BasisMode::HalfInteger => AlgebraicInteger {
                            x: &cand.x - &cand.y,
                            y: BigInt::from(2) * &cand.y,
                        },
                    };
                    if self.norm(&cand).abs() == BigInt::from(2) {
                        return Ok(cand);
                    }
                    pp = a * qq - pp;
                    qq = (d as i64 - pp * pp) / qq;
                    a = (a0 as i64 + pp) / qq;
                    let h2 = BigInt::from(a) * &h1 + &h0;
                    let k2 = BigInt::from(a) * &k1 + &k0;
                    h0 = core::mem::replace(&mut h1, h2);
                    k0 = core::mem::replace(&mut k1, k2);
                    if qq == 1 && pp == a0 as i64 {
                        // one full period scanned
                        break;
                    }
                }
                Err(FieldError::NonPrincipalPrime)
            }
            SplitType::Ramified => {
                // imaginary: definite norm form, tiny search
                for x in -3i64..=3 {
                    for y in -3i64..=3 {
                        let cand = AlgebraicInteger::from_coords(x, y);
                        if self.norm(&cand).abs() == BigInt::from(2) {
                            return Ok(cand);
                        }
                    }
                }
                Err(FieldError::NonPrincipalPrime)
            }
            SplitType::Split => {
                // search small elements of norm +-2
                for x in -50i64..=50 {
                    for y in -50i64..=50 {
                        let cand = AlgebraicInteger::from_coords(x, y);
                        if self.norm(&cand).abs() == BigInt::from(2)
                            && self.valuation(&cand, p).unwrap_or(0) == 1
                        {
                            return Ok(cand);
                        }
                    }
                }
                Err(FieldError::NonPrincipalPrime)
            }
        }
    }
}

/// `x + y*w` in the integral basis of the field it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraicInteger {
    pub x: BigInt,
    pub y: BigInt,
}

impl AlgebraicInteger {
    pub fn new(x: BigInt, y: BigInt) -> Self {
        AlgebraicInteger { x, y }
    }

    pub fn from_coords(x: i64, y: i64) -> Self {
        AlgebraicInteger {
            x: BigInt::from(x),
            y: BigInt::from(y),
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_coords(x, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else if self.x.is_zero() {
            write!(f, "{}w", self.y)
        } else if self.y.is_negative() {
            write!(f, "{}{}w", self.x, self.y)
        } else {
            write!(f, "{}+{}w", self.x, self.y)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of `O_K` in two-element description `(q, w - t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub residue_char: u64,
    pub split_type: SplitType,
    pub norm: u64,
    pub ramification_index: u32,
    pub residue_degree: u32,
    /// residue of `w` modulo the prime, when the residue degree is 1.
    pub omega_residue: Option<u64>,
    pub lattice: IdealLattice,
    generators: Vec<AlgebraicInteger>,
}

impl PrimeIdeal {
    fn new(field: &FieldSpec, q: u64, split_type: SplitType, t: Option<u64>) -> Self {
        let (e, f) = match split_type {
            SplitType::Split => (1, 1),
            SplitType::Inert => (1, 2),
            SplitType::Ramified => (2, 1),
        };
        let mut generators = vec![AlgebraicInteger::new(BigInt::from(q), BigInt::zero())];
        if let Some(t) = t {
            generators.push(AlgebraicInteger::new(-BigInt::from(t), BigInt::one()));
        }
        let lattice = IdealLattice::from_generators(field, &generators);
        debug_assert_eq!(lattice.norm(), BigInt::from(q.pow(f)));
        PrimeIdeal {
            residue_char: q,
            split_type,
            norm: q.pow(f),
            ramification_index: e,
            residue_degree: f,
            omega_residue: t,
            lattice,
            generators,
        }
    }

    pub fn generators(&self) -> &[AlgebraicInteger] {
        &self.generators
    }

    pub fn contains(&self, a: &AlgebraicInteger) -> bool {
        self.lattice.contains(a)
    }

    /// Canonical label `q<char>n<norm>[r<t>]`, stable across runs and
    /// independent of external labeling schemes.
    pub fn label(&self) -> String {
        use alloc::format;
        match self.omega_residue {
            Some(t) => format!("q{}n{}r{}", self.residue_char, self.norm, t),
            None => format!("q{}n{}", self.residue_char, self.norm),
        }
    }
}

/// A full-rank ideal of `O_K` as a Z-lattice in HNF: columns `(a, 0)` and
/// `(b, c)` with `0 <= b < a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl IdealLattice {
    pub fn whole_ring() -> Self {
        IdealLattice {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// HNF of the Z-module spanned by `g` and `g*w` for each generator.
    pub fn from_generators(field: &FieldSpec, gens: &[AlgebraicInteger]) -> Self {
        let mut cols: Vec<(BigInt, BigInt)> = Vec::new();
        let w = AlgebraicInteger::from_coords(0, 1);
        for g in gens {
            cols.push((g.x.clone(), g.y.clone()));
            let gw = field.mul(g, &w);
            cols.push((gw.x, gw.y));
        }
        Self::from_columns(cols)
    }

    fn from_columns(cols: Vec<(BigInt, BigInt)>) -> Self {
        let cols: Vec<(BigInt, BigInt)> = cols
            .into_iter()
            .filter(|(x, y)| !x.is_zero() || !y.is_zero())
            .collect();
        // combine to a single column with y = gcd of all y's
        let mut combo: Option<(BigInt, BigInt)> = None;
        let mut xs: Vec<BigInt> = Vec::new();
        for (x, y) in cols {
            if y.is_zero() {
                xs.push(x);
                continue;
            }
            combo = Some(match combo {
                None => (x, y),
                Some((cx, cy)) => {
                    let ext = cy.extended_gcd(&y);
                    let g = ext.gcd;
                    xs.push(&cx * (&y / &g) - &x * (&cy / &g));
                    (ext.x * cx + ext.y * x, g)
                }
            });
        }
        let (bx, c) = combo.expect("rank-2 lattice");
        let mut a = BigInt::zero();
        for x in xs {
            a = a.gcd(&x);
        }
        assert!(!a.is_zero(), "lattice not of full rank");
        let c = c.abs();
        let b = bx.mod_floor(&a);
        IdealLattice { a, b, c }
    }

    pub fn norm(&self) -> BigInt {
        (&self.a * &self.c).abs()
    }

    pub fn contains(&self, z: &AlgebraicInteger) -> bool {
        if !z.y.mod_floor(&self.c).is_zero() {
            return false;
        }
        let k = z.y.div_floor(&self.c);
        (&z.x - &self.b * k).mod_floor(&self.a).is_zero()
    }

    /// Canonical residue of `z` modulo the lattice, inside the box
    /// `[0, a) x [0, c)`.
    pub fn reduce(&self, z: &AlgebraicInteger) -> AlgebraicInteger {
        let k = z.y.div_floor(&self.c);
        let y = &z.y - &self.c * &k;
        let x = (&z.x - &self.b * &k).mod_floor(&self.a);
        AlgebraicInteger { x, y }
    }

    /// All residues modulo the lattice (norm() many).
    pub fn residues(&self) -> Vec<AlgebraicInteger> {
        let a: u64 = (&self.a).try_into().expect("modulus fits u64");
        let c: u64 = (&self.c).try_into().expect("modulus fits u64");
        let mut out = Vec::with_capacity((a * c) as usize);
        for y in 0..c {
            for x in 0..a {
                out.push(AlgebraicInteger::from_coords(x as i64, y as i64));
            }
        }
        out
    }

    /// The four small lifts `z - i*(a,0) - j*(b,c)` of a residue.
    pub fn small_lifts(&self, z: &AlgebraicInteger) -> Vec<AlgebraicInteger> {
        let mut out = Vec::with_capacity(4);
        for j in 0..2 {
            let x0 = &z.x - BigInt::from(j) * &self.b;
            let y0 = &z.y - BigInt::from(j) * &self.c;
            let xm = x0.mod_floor(&self.a);
            out.push(AlgebraicInteger {
                x: xm.clone(),
                y: y0.clone(),
            });
            out.push(AlgebraicInteger {
                x: xm - &self.a,
                y: y0,
            });
        }
        out
    }

    pub fn mul(&self, field: &FieldSpec, other: &IdealLattice) -> IdealLattice {
        let v = [
            AlgebraicInteger::new(self.a.clone(), BigInt::zero()),
            AlgebraicInteger::new(self.b.clone(), self.c.clone()),
        ];
        let w = [
            AlgebraicInteger::new(other.a.clone(), BigInt::zero()),
            AlgebraicInteger::new(other.b.clone(), other.c.clone()),
        ];
        let mut gens = Vec::with_capacity(4);
        for p in &v {
            for q in &w {
                gens.push(field.mul(p, q));
            }
        }
        IdealLattice::from_generators(field, &gens)
    }

    pub fn pow(&self, field: &FieldSpec, k: u32) -> IdealLattice {
        let mut acc = IdealLattice::whole_ring();
        for _ in 0..k {
            acc = acc.mul(field, self);
        }
        acc
    }
}

// ----- helpers -----

fn coord_content_val(a: &AlgebraicInteger, q: &BigInt) -> u64 {
    let vx = if a.x.is_zero() {
        u64::MAX
    } else {
        int_valuation(&a.x, q)
    };
    let vy = if a.y.is_zero() {
        u64::MAX
    } else {
        int_valuation(&a.y, q)
    };
    vx.min(vy)
}

/// q-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, q: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (quot, rem) = n.div_rem(q);
        if !rem.is_zero() {
            return v;
        }
        v += 1;
        n = quot;
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a as u128, d as u128, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..r {
            x = x * x % n as u128;
            if x == (n - 1) as u128 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u128(mut base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut acc = 1u128;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

pub fn legendre(a: i64, p: u64) -> i32 {
    let a = BigInt::from(a).mod_floor(&BigInt::from(p));
    if a.is_zero() {
        return 0;
    }
    let a: u64 = (&a).try_into().unwrap();
    let r = pow_mod_u128(a as u128, ((p - 1) / 2) as u128, p as u128);
    if r == 1 {
        1
    } else {
        -1
    }
}

fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Newton iteration, integer-only
    let mut x = 1u64 << (u64::BITS - n.leading_zeros()).div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    x
}

/// Minimal `(x, y, n)` with `x^2 - d y^2 = n`, `|n| = 1`, `y > 0`, from the
/// continued fraction of `sqrt(d)`.
fn pell_fundamental(d: u64) -> Result<(BigInt, BigInt, i64), FieldError> {
    let a0 = isqrt_u64(d);
    assert!(a0 * a0 != d);
    let (mut pp, mut qq, mut a) = (0i64, 1i64, a0 as i64);
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    for _ in 0..tables::UNIT_SEARCH_CAP {
        pp = a * qq - pp;
        qq = (d as i64 - pp * pp) / qq;
        a = (a0 as i64 + pp) / qq;
        if qq == 1 {
            let n = &h1 * &h1 - BigInt::from(d) * &k1 * &k1;
            let n: i64 = (&n).try_into().expect("pell norm is +-1");
            debug_assert!(n == 1 || n == -1);
            return Ok((h1, k1, n));
        }
        let h2 = BigInt::from(a) * &h1 + &h0;
        let k2 = BigInt::from(a) * &k1 + &k0;
        h0 = core::mem::replace(&mut h1, h2);
        k0 = core::mem::replace(&mut k1, k2);
    }
    Err(FieldError::UnitSearchExhausted)
}
