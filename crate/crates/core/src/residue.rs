//! Finite quotients `O_K/b`, unit groups and square classes, the cokernel
//! of the unit map into `(O_K/b)^x / squares`, and ray class groups with
//! sign conditions at the infinite places.
//!
//! Everything here is exhaustive enumeration over residue systems, with a
//! hard modulus ceiling; every modulus arising from the conductor analysis
//! has norm at most 2^10.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::quadfield::{AlgebraicInteger, FieldError, FieldSpec, IdealLattice, PrimeIdeal};

pub const MODULUS_CEILING: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueError {
    ModulusTooLarge(u64),
    Field(FieldError),
}

impl fmt::Display for ResidueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueError::ModulusTooLarge(n) => {
                write!(f, "modulus norm {n} exceeds enumeration ceiling")
            }
            ResidueError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ResidueError {}

impl From<FieldError> for ResidueError {
    fn from(e: FieldError) -> Self {
        ResidueError::Field(e)
    }
}

/// `O_K / b` with `b` given by its prime-power factorization.
pub struct QuotientRing<'k> {
    pub field: &'k FieldSpec,
    pub modulus: IdealLattice,
    pub factors: Vec<(PrimeIdeal, u32)>,
    pub size: u64,
}

impl<'k> QuotientRing<'k> {
    pub fn new(
        field: &'k FieldSpec,
        mut factors: Vec<(PrimeIdeal, u32)>,
    ) -> Result<Self, ResidueError> {
        factors.retain(|(_, k)| *k > 0);
        let mut lat = IdealLattice::whole_ring();
        for (p, k) in &factors {
            lat = lat.mul(field, &p.lattice.pow(field, *k));
        }
        let size: u64 = (&lat.norm())
            .try_into()
            .map_err(|_| ResidueError::ModulusTooLarge(u64::MAX))?;
        if size > MODULUS_CEILING {
            return Err(ResidueError::ModulusTooLarge(size));
        }
        Ok(QuotientRing {
            field,
            modulus: lat,
            factors,
            size,
        })
    }

    pub fn reduce(&self, z: &AlgebraicInteger) -> AlgebraicInteger {
        self.modulus.reduce(z)
    }

    pub fn mul(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        self.reduce(&self.field.mul(a, b))
    }

    pub fn is_unit(&self, z: &AlgebraicInteger) -> bool {
        self.factors.iter().all(|(p, _)| !p.contains(z))
    }

    /// All residues that are units in the quotient.
    pub fn units(&self) -> Vec<AlgebraicInteger> {
        self.modulus
            .residues()
            .into_iter()
            .filter(|z| self.is_unit(z))
            .collect()
    }

    /// Euler-style unit count `size * prod (1 - 1/N(p))`.
    pub fn unit_count(&self) -> u64 {
        let mut n = self.size;
        for (p, _) in &self.factors {
            n = n / p.norm * (p.norm - 1);
        }
        n
    }
}

/// The cokernel of `O_K^x -> (O_K/b)^x / squares`, with canonical
/// representatives and the local data attached to each class.
#[derive(Debug, Clone)]
pub struct CokernelPhi {
    /// Elementary divisors; the group is elementary 2-abelian.
    pub group_invariants: Vec<u64>,
    /// One canonical representative per cokernel class: the minimal-norm
    /// small lift inside the square class of minimal conductor exponent.
    pub representatives: Vec<AlgebraicInteger>,
    /// Per-class sets of square-class conductor-exponent data, keyed by
    /// prime-over-2 label order of `b`.
    pub class_exponents: Vec<Vec<Vec<u32>>>,
}

/// `b = prod over p | 2 of p^(2 v_p(2) + 1)`.
pub fn build_b_ideal(field: &FieldSpec) -> Vec<(PrimeIdeal, u32)> {
    let mut parts = Vec::new();
    for p in field.split_rational_prime(2) {
        let v = field
            .valuation(&AlgebraicInteger::from_int(2), &p)
            .expect("2 is nonzero");
        parts.push((p, (2 * v + 1) as u32));
    }
    parts
}

struct CokernelMachine<'k> {
    quotient: QuotientRing<'k>,
    squares: BTreeSet<AlgebraicInteger>,
    orbits: Vec<BTreeSet<AlgebraicInteger>>,
}

fn cokernel_machine<'k>(
    field: &'k FieldSpec,
    factors: Vec<(PrimeIdeal, u32)>,
) -> Result<CokernelMachine<'k>, ResidueError> {
    let quotient = QuotientRing::new(field, factors)?;
    let units = quotient.units();
    let unit_set: BTreeSet<_> = units.iter().cloned().collect();
    let squares: BTreeSet<_> = units.iter().map(|u| quotient.mul(u, u)).collect();
    let mut subgroup = squares.clone();
    for g in field.unit_generators()? {
        let gi = quotient.reduce(&g);
        debug_assert!(unit_set.contains(&gi));
        loop {
            let new: Vec<_> = subgroup
                .iter()
                .map(|h| quotient.mul(&gi, h))
                .filter(|x| !subgroup.contains(x))
                .collect();
            if new.is_empty() {
                break;
            }
            subgroup.extend(new);
        }
    }
    let mut orbits: Vec<BTreeSet<AlgebraicInteger>> = Vec::new();
    let mut seen: BTreeSet<AlgebraicInteger> = BTreeSet::new();
    for u in &units {
        if seen.contains(u) {
            continue;
        }
        let orbit: BTreeSet<_> = subgroup.iter().map(|h| quotient.mul(u, h)).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    // the class of 1 first, the rest in canonical order
    let one = quotient.reduce(&field.one());
    orbits.sort_by_key(|orb| (!orb.contains(&one), orb.first().cloned()));
    let _ = subgroup;
    Ok(CokernelMachine {
        quotient,
        squares,
        orbits,
    })
}

/// Square classes (as sets of residues) inside one cokernel orbit.
fn square_classes(
    q: &QuotientRing<'_>,
    squares: &BTreeSet<AlgebraicInteger>,
    orbit: &BTreeSet<AlgebraicInteger>,
) -> Vec<BTreeSet<AlgebraicInteger>> {
    let mut classes = Vec::new();
    let mut seen: BTreeSet<AlgebraicInteger> = BTreeSet::new();
    for u in orbit {
        if seen.contains(u) {
            continue;
        }
        let class: BTreeSet<_> = squares.iter().map(|s| q.mul(u, s)).collect();
        seen.extend(class.iter().cloned());
        classes.push(class);
    }
    classes
}

fn min_norm_lift(field: &FieldSpec, lat: &IdealLattice, class: &BTreeSet<AlgebraicInteger>) -> AlgebraicInteger {
    let mut best: Option<(
        (BigInt, BigInt, BigInt, BigInt),
        AlgebraicInteger,
    )> = None;
    for z in class {
        for cand in lat.small_lifts(z) {
            let key = (
                field.norm(&cand).abs(),
                cand.x.abs() + cand.y.abs(),
                -cand.y.clone(),
                cand.x.clone(),
            );
            if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                best = Some((key, cand));
            }
        }
    }
    best.expect("nonempty class").1
}

/// Computes the cokernel of the unit map for the modulus `b` (supported on
/// primes above 2): elementary divisors, canonical representatives, and
/// the per-class local conductor-exponent data at every prime above 2.
pub fn unit_square_cokernel(
    field: &FieldSpec,
    factors: Vec<(PrimeIdeal, u32)>,
) -> Result<CokernelPhi, ResidueError> {
    debug_assert!(factors.iter().all(|(p, _)| p.residue_char == 2));
    let m = cokernel_machine(field, factors)?;
    let lat = &m.quotient.modulus;
    let primes: Vec<&PrimeIdeal> = m.quotient.factors.iter().map(|(p, _)| p).collect();

    let order = m.orbits.len() as u64;
    debug_assert!(order.is_power_of_two());
    let rank = order.trailing_zeros() as usize;
    let group_invariants = vec![2u64; rank];

    let mut representatives = Vec::new();
    let mut class_exponents = Vec::new();
    let one = m.quotient.reduce(&field.one());
    for orbit in &m.orbits {
        let classes = square_classes(&m.quotient, &m.squares, orbit);
        // per square class, the exponent vector over the primes above 2
        let mut exps: Vec<(Vec<u32>, AlgebraicInteger)> = Vec::new();
        for class in &classes {
            let lam = min_norm_lift(field, lat, class);
            let vec_e: Vec<u32> = primes
                .iter()
                .map(|p| {
                    let n = crate::local2::sqrt_ext_disc_valuation(field, p, &lam)
                        .expect("unit class lambda");
                    crate::local2::conductor_exponent_potmult(n)
                })
                .collect();
            exps.push((vec_e, lam));
        }
        exps.sort();
        // canonical representative: 1 for the trivial class, else the
        // minimal-norm lift within the minimal-exponent square class
        let rep = if orbit.contains(&one) {
            field.one()
        } else {
            exps[0].1.clone()
        };
        representatives.push(rep);
        class_exponents.push(exps.into_iter().map(|(e, _)| e).collect());
    }
    Ok(CokernelPhi {
        group_invariants,
        representatives,
        class_exponents,
    })
}

impl CokernelPhi {
    pub fn order(&self) -> u64 {
        self.representatives.len() as u64
    }

    /// The sharp achievable conductor-exponent set at the single prime
    /// above 2 (per-orbit minimum over square classes).
    pub fn sharp_exponents(&self) -> BTreeSet<u32> {
        self.class_exponents
            .iter()
            .map(|orbit| {
                orbit
                    .iter()
                    .map(|v| v[0])
                    .min()
                    .expect("nonempty orbit")
            })
            .collect()
    }

    /// Per-orbit minimal exponent vectors (all primes above 2).
    pub fn sharp_exponent_vectors(&self) -> Vec<Vec<u32>> {
        self.class_exponents
            .iter()
            .map(|orbit| orbit.iter().min().cloned().expect("nonempty orbit"))
            .collect()
    }
}

/// Tests whether `lam` and `mu` define the same cokernel class. Elements
/// of even valuation at every prime above 2 are reduced to their unit
/// part first; odd valuations are stripped for inert primes (divide by 2).
pub fn same_cokernel_class(
    field: &FieldSpec,
    factors: &[(PrimeIdeal, u32)],
    lam: &AlgebraicInteger,
    mu: &AlgebraicInteger,
) -> Result<bool, ResidueError> {
    let m = cokernel_machine(field, factors.to_vec())?;
    let lam = strip_two_part(field, factors, lam)?;
    let mu = strip_two_part(field, factors, mu)?;
    let rl = m.quotient.reduce(&lam);
    let rm = m.quotient.reduce(&mu);
    let orbit_of = |z: &AlgebraicInteger| m.orbits.iter().position(|o| o.contains(z));
    Ok(orbit_of(&rl) == orbit_of(&rm))
}

/// Which cokernel orbit a (possibly non-unit) element belongs to after
/// stripping its 2-part.
pub fn cokernel_orbit_index(
    field: &FieldSpec,
    factors: &[(PrimeIdeal, u32)],
    lam: &AlgebraicInteger,
) -> Result<usize, ResidueError> {
    let m = cokernel_machine(field, factors.to_vec())?;
    let lam = strip_two_part(field, factors, lam)?;
    let r = m.quotient.reduce(&lam);
    Ok(m.orbits
        .iter()
        .position(|o| o.contains(&r))
        .expect("unit lands in some orbit"))
}

fn strip_two_part(
    field: &FieldSpec,
    factors: &[(PrimeIdeal, u32)],
    z: &AlgebraicInteger,
) -> Result<AlgebraicInteger, ResidueError> {
    let mut z = z.clone();
    for (p, _) in factors {
        let v = field.valuation(&z, p)?;
        if v == 0 {
            continue;
        }
        // divide out the full power of 2 under the element; exact for the
        // unique-prime-above-2 fields used here
        let k = v / u64::from(p.ramification_index);
        if k > 0 {
            let q = BigInt::from(2).pow(k as u32);
            z = AlgebraicInteger::new(&z.x / &q, &z.y / &q);
        }
    }
    Ok(z)
}

/// A ray class group presented by its elementary divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayClassGroup {
    pub modulus_norm: u64,
    pub infinite_places: u32,
    /// Elementary divisors (prime-power cyclic orders), ascending; empty
    /// for the trivial group.
    pub invariants: Vec<u64>,
}

impl RayClassGroup {
    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }
}

/// Ray class group of a class-number-one field for modulus `m * inf`,
/// computed as `(O_K/m)^x x {+-1}^inf` modulo global units.
pub fn ray_class_group(
    field: &FieldSpec,
    factors: Vec<(PrimeIdeal, u32)>,
    infinite_places: u32,
) -> Result<RayClassGroup, ResidueError> {
    assert!(infinite_places <= if field.is_real() { 2 } else { 0 });
    let trivial = factors.is_empty();
    let quotient = QuotientRing::new(field, factors)?;
    let units = if trivial {
        vec![quotient.reduce(&field.one())]
    } else {
        quotient.units()
    };
    let nplaces = infinite_places as usize;
    type Elt = (AlgebraicInteger, u8);
    let mut elements: Vec<Elt> = Vec::new();
    for u in &units {
        for signs in 0..(1u8 << nplaces) {
            elements.push((u.clone(), signs));
        }
    }
    let gmul = |a: &Elt, b: &Elt| -> Elt { (quotient.mul(&a.0, &b.0), a.1 ^ b.1) };
    // images of the global unit generators
    let mut images: Vec<Elt> = Vec::new();
    for g in field.unit_generators()? {
        let res = quotient.reduce(&g);
        let mut signs = 0u8;
        if nplaces > 0 {
            let (s1, s2) = field.embed_signs(&g);
            if s1 < 0 {
                signs |= 1;
            }
            if nplaces > 1 && s2 < 0 {
                signs |= 2;
            }
        }
        images.push((res, signs));
    }
    let ident: Elt = (quotient.reduce(&field.one()), 0);
    let mut sub: BTreeSet<Elt> = BTreeSet::new();
    sub.insert(ident.clone());
    loop {
        let mut grown = false;
        let snapshot: Vec<Elt> = sub.iter().cloned().collect();
        for h in &snapshot {
            for im in &images {
                let x = gmul(h, im);
                if sub.insert(x) {
                    grown = true;
                }
            }
        }
        if !grown {
            break;
        }
    }
    // cosets and their multiplication
    let coset_key = |g: &Elt| -> Elt {
        sub.iter()
            .map(|h| gmul(g, h))
            .min()
            .expect("nonempty subgroup")
    };
    let mut reps: Vec<Elt> = Vec::new();
    let mut index: BTreeMap<Elt, usize> = BTreeMap::new();
    for g in &elements {
        let key = coset_key(g);
        if let alloc::collections::btree_map::Entry::Vacant(e) = index.entry(key) {
            e.insert(reps.len());
            reps.push(g.clone());
        }
    }
    let order = reps.len() as u64;
    let id_idx = index[&coset_key(&ident)];
    let cmul = |i: usize, j: usize| -> usize { index[&coset_key(&gmul(&reps[i], &reps[j]))] };
    // element orders -> abelian invariants per prime
    let mut elt_orders = Vec::with_capacity(reps.len());
    for i in 0..reps.len() {
        let mut k = 1u64;
        let mut x = i;
        while x != id_idx {
            x = cmul(x, i);
            k += 1;
        }
        elt_orders.push(k);
    }
    let invariants = invariants_from_orders(order, &elt_orders);
    Ok(RayClassGroup {
        modulus_norm: quotient.size,
        infinite_places,
        invariants,
    })
}

/// Recovers the elementary divisors of a finite abelian group from the
/// multiset of element orders: for each prime p, the counts
/// `N_k = #{g : ord(g) | p^k}` determine the partition of the p-group
/// (conjugate-partition construction).
fn invariants_from_orders(order: u64, elt_orders: &[u64]) -> Vec<u64> {
    if order == 1 {
        return Vec::new();
    }
    let mut invariants = Vec::new();
    let mut rem = order;
    let mut p = 2u64;
    while rem > 1 {
        if rem.is_multiple_of(p) {
            // lambda_conj[k-1] = log_p(N_k / N_(k-1)) = #{i : lambda_i >= k}
            let mut lambda_conj: Vec<u32> = Vec::new();
            let mut prev = elt_orders.iter().filter(|&&o| o == 1).count() as u64;
            let mut k = 1u32;
            loop {
                let pk = p.pow(k);
                let cnt = elt_orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
                if cnt == prev {
                    break;
                }
                lambda_conj.push(log_exact(cnt / prev, p));
                prev = cnt;
                k += 1;
            }
            let nparts = lambda_conj.first().copied().unwrap_or(0) as usize;
            for idx in 0..nparts {
                let lam = lambda_conj.iter().filter(|&&s| s as usize > idx).count() as u32;
                invariants.push(p.pow(lam));
            }
            while rem.is_multiple_of(p) {
                rem /= p;
            }
        }
        p += 1;
    }
    invariants.sort();
    invariants
}

fn log_exact(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> FieldSpec {
        FieldSpec::new(d).unwrap()
    }

    #[test]
    fn b_ideal_exponents() {
        for (d, e) in [(3i64, 5u32), (5, 3), (7, 5), (13, 3), (-3, 3), (-19, 3), (6, 5)] {
            let k = f(d);
            let parts = build_b_ideal(&k);
            assert_eq!(parts.len(), 1, "d={d}");
            assert_eq!(parts[0].1, e, "d={d}");
        }
        let k17 = f(17);
        let parts = build_b_ideal(&k17);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|(_, k)| *k == 3));
    }

    #[test]
    fn quotient_unit_counts() {
        let k = f(3);
        let parts = build_b_ideal(&k);
        let q = QuotientRing::new(&k, parts).unwrap();
        assert_eq!(q.size, 32);
        assert_eq!(q.unit_count(), 16);
        assert_eq!(q.units().len(), 16);
    }

    #[test]
    fn cokernel_orders_match_table() {
        for (d, n) in [
            (3i64, 2u64),
            (5, 2),
            (7, 4),
            (11, 2),
            (13, 2),
            (19, 2),
            (23, 4),
            (-3, 4),
            (-11, 4),
            (-19, 4),
            (-43, 4),
        ] {
            let k = f(d);
            let coker = unit_square_cokernel(&k, build_b_ideal(&k)).unwrap();
            assert_eq!(coker.order(), n, "d={d}");
            assert_eq!(coker.representatives.len() as u64, n);
        }
    }

    #[test]
    fn trivial_modulus_cokernel() {
        // modulus O_K: trivial group, single representative 1
        let k = f(3);
        let coker = unit_square_cokernel(&k, vec![]).unwrap();
        assert_eq!(coker.order(), 1);
        assert_eq!(coker.representatives, vec![k.one()]);
    }

    #[test]
    fn ray_class_groups_small() {
        // trivial modulus, no signs: trivial for every supported field
        for d in [3i64, 5, 7, 11, 13, 19, 23, -3, -11, -19, -43] {
            let k = f(d);
            let rcg = ray_class_group(&k, vec![], 0).unwrap();
            assert_eq!(rcg.order(), 1, "d={d}");
        }
        // d=5, both infinite places: trivial (norm -1 unit)
        let k5 = f(5);
        assert_eq!(ray_class_group(&k5, vec![], 2).unwrap().order(), 1);
        // d=3, both infinite places: Z/2 (narrow class group)
        let k3 = f(3);
        let rcg = ray_class_group(&k3, vec![], 2).unwrap();
        assert_eq!(rcg.invariants, vec![2]);
        // d=3, p^2 and both places: Z/2
        let p2 = k3.split_rational_prime(2).remove(0);
        let rcg = ray_class_group(&k3, vec![(p2, 2)], 2).unwrap();
        assert_eq!(rcg.invariants, vec![2]);
        // d=5, p^2 and both places: (Z/2)^2
        let p2 = k5.split_rational_prime(2).remove(0);
        let rcg = ray_class_group(&k5, vec![(p2, 2)], 2).unwrap();
        assert_eq!(rcg.invariants, vec![2, 2]);
        // d=6, p^4 and both places: Z/2 x Z/4 (order-4 character case)
        let k6 = f(6);
        let p2 = k6.split_rational_prime(2).remove(0);
        let rcg = ray_class_group(&k6, vec![(p2, 4)], 2).unwrap();
        assert_eq!(rcg.invariants, vec![2, 4]);
    }

    #[test]
    fn modulus_ceiling() {
        let k = f(3);
        let p3 = k.split_rational_prime(3).remove(0);
        assert!(matches!(
            ray_class_group(&k, vec![(p3, 20)], 0),
            Err(ResidueError::ModulusTooLarge(_))
        ));
    }
}
