//! Finite commutative local rings and their `k`-th power connection sets.
//!
//! Four families are modelled: finite fields `F_q`, `Z/p^α`, Galois rings
//! `GR(p^α, r)` and truncated polynomial rings `F_q[t]/(t^n)`. Elements are
//! dense integer codes `0..|R|` and arithmetic is computed on the fly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::ff::{poly_mul_mod, FieldTable};

/// Largest ring that is materialized.
pub const MAX_RING_SIZE: u64 = 1_000_000;

/// Rings up to this size get exhaustive ideal-closure checks.
const EXHAUSTIVE_CHECK_SIZE: u64 = 10_000;

/// Parsed form of the descriptor strings `fq:p,r`, `zpk:p,alpha`,
/// `gr:p,alpha,r` and `fqt:p,r,n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Field { p: u64, r: u32 },
    IntegersModPrimePower { p: u64, alpha: u32 },
    Galois { p: u64, alpha: u32, r: u32 },
    Truncated { p: u64, r: u32, n: u32 },
}

impl RingDescriptor {
    pub fn p(&self) -> u64 {
        match *self {
            RingDescriptor::Field { p, .. }
            | RingDescriptor::IntegersModPrimePower { p, .. }
            | RingDescriptor::Galois { p, .. }
            | RingDescriptor::Truncated { p, .. } => p,
        }
    }

    /// Degree of the residue field over `F_p`.
    pub fn r(&self) -> u32 {
        match *self {
            RingDescriptor::Field { r, .. } | RingDescriptor::Galois { r, .. } | RingDescriptor::Truncated { r, .. } => r,
            RingDescriptor::IntegersModPrimePower { .. } => 1,
        }
    }

    /// `β` with `|𝔪| = q^β`.
    pub fn beta(&self) -> u32 {
        match *self {
            RingDescriptor::Field { .. } => 0,
            RingDescriptor::IntegersModPrimePower { alpha, .. } | RingDescriptor::Galois { alpha, .. } => alpha - 1,
            RingDescriptor::Truncated { n, .. } => n - 1,
        }
    }

    /// Residue field size `q = p^r`, if it fits in a `u64`.
    pub fn q(&self) -> Option<u64> {
        self.p().checked_pow(self.r())
    }

    /// `|R| = q^(β+1)`.
    pub fn size(&self) -> Option<u128> {
        (self.p() as u128).checked_pow(self.r().checked_mul(self.beta() + 1)?)
    }

    /// `|𝔪| = q^β`.
    pub fn ideal_size(&self) -> Option<u128> {
        (self.p() as u128).checked_pow(self.r().checked_mul(self.beta())?)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RingDescriptor::Field { p, r } => write!(f, "fq:{p},{r}"),
            RingDescriptor::IntegersModPrimePower { p, alpha } => write!(f, "zpk:{p},{alpha}"),
            RingDescriptor::Galois { p, alpha, r } => write!(f, "gr:{p},{alpha},{r}"),
            RingDescriptor::Truncated { p, r, n } => write!(f, "fqt:{p},{r},{n}"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadDescriptor(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = args
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let small = |x: u64| u32::try_from(x).ok().filter(|&v| v >= 1).ok_or_else(bad);
        let desc = match (kind.trim(), nums.as_slice()) {
            ("fq", &[p, r]) => RingDescriptor::Field { p, r: small(r)? },
            ("zpk", &[p, alpha]) => RingDescriptor::IntegersModPrimePower { p, alpha: small(alpha)? },
            ("gr", &[p, alpha, r]) => RingDescriptor::Galois { p, alpha: small(alpha)?, r: small(r)? },
            ("fqt", &[p, r, n]) => RingDescriptor::Truncated { p, r: small(r)?, n: small(n)? },
            _ => return Err(bad()),
        };
        if !is_prime(desc.p()) {
            return Err(Error::BadDescriptor(format!("{s}: {} is not prime", desc.p())));
        }
        if desc.size().is_none() {
            return Err(Error::BadDescriptor(format!("{s}: ring size overflows")));
        }
        Ok(desc)
    }
}

#[derive(Debug, Clone)]
enum Arithmetic {
    Field,
    /// `Z/modulus`.
    Cyclic { modulus: u64 },
    /// `Z/p^α[x]/(f)`, digits base `p^α`.
    Galois { pa: u64, modulus: Vec<u64> },
    /// `F_q[t]/(t^n)`, digits base `q`.
    Truncated { n: u32 },
}

/// A finite commutative local ring with its residue field.
#[derive(Debug, Clone)]
pub struct LocalRing {
    descriptor: RingDescriptor,
    size: u64,
    q: u64,
    ideal_size: u64,
    residue_field: Arc<FieldTable>,
    arithmetic: Arithmetic,
}

impl LocalRing {
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        let size = descriptor.size().unwrap_or(u128::MAX);
        if size > MAX_RING_SIZE as u128 {
            return Err(Error::SizeCap { what: "ring", size, cap: MAX_RING_SIZE as u128 });
        }
        let size = size as u64;
        let p = descriptor.p();
        let residue_field = Arc::new(FieldTable::new(p, descriptor.r(), None)?);
        let q = residue_field.q();
        let arithmetic = match descriptor {
            RingDescriptor::Field { .. } => Arithmetic::Field,
            RingDescriptor::IntegersModPrimePower { .. } => Arithmetic::Cyclic { modulus: size },
            RingDescriptor::Galois { alpha, .. } => {
                Arithmetic::Galois { pa: p.pow(alpha), modulus: residue_field.modulus().to_vec() }
            }
            RingDescriptor::Truncated { n, .. } => Arithmetic::Truncated { n },
        };
        let ring = LocalRing {
            descriptor,
            size,
            q,
            ideal_size: ideal_size(size, q, descriptor.beta()),
            residue_field,
            arithmetic,
        };
        ring.verify()?;
        Ok(ring)
    }

    pub fn parse(descriptor: &str) -> Result<Self> {
        Self::new(descriptor.parse()?)
    }

    pub fn descriptor(&self) -> RingDescriptor {
        self.descriptor
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.descriptor.p()
    }

    pub fn r(&self) -> u32 {
        self.descriptor.r()
    }

    pub fn beta(&self) -> u32 {
        self.descriptor.beta()
    }

    /// `m = |𝔪|`.
    pub fn ideal_size(&self) -> u64 {
        self.ideal_size
    }

    pub fn residue_field(&self) -> &FieldTable {
        &self.residue_field
    }

    pub fn shared_residue_field(&self) -> Arc<FieldTable> {
        Arc::clone(&self.residue_field)
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.arithmetic {
            Arithmetic::Field => self.residue_field.add(a, b),
            Arithmetic::Cyclic { modulus } => ((a as u64 + b as u64) % modulus) as u32,
            Arithmetic::Galois { pa, .. } => digitwise(a, b, *pa, self.r(), |x, y| (x + y) % pa),
            Arithmetic::Truncated { n } => {
                let f = &self.residue_field;
                digitwise(a, b, self.q, *n, |x, y| f.add(x as u32, y as u32) as u64)
            }
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match &self.arithmetic {
            Arithmetic::Field => self.residue_field.neg(a),
            Arithmetic::Cyclic { modulus } => ((modulus - a as u64) % modulus) as u32,
            Arithmetic::Galois { pa, .. } => digitwise(a, 0, *pa, self.r(), |x, _| (pa - x) % pa),
            Arithmetic::Truncated { n } => {
                let f = &self.residue_field;
                digitwise(a, 0, self.q, *n, |x, _| f.neg(x as u32) as u64)
            }
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.arithmetic {
            Arithmetic::Field => self.residue_field.mul(a, b),
            Arithmetic::Cyclic { modulus } => (a as u64 * b as u64 % modulus) as u32,
            Arithmetic::Galois { pa, modulus } => {
                let r = self.r();
                let x = to_digits(a, *pa, r);
                let y = to_digits(b, *pa, r);
                from_digits(&poly_mul_mod(&x, &y, modulus, *pa), *pa)
            }
            Arithmetic::Truncated { n } => {
                let f = &self.residue_field;
                let n = *n as usize;
                let x = to_digits(a, self.q, n as u32);
                let y = to_digits(b, self.q, n as u32);
                let mut z = vec![0u64; n];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().take(n - i).enumerate() {
                        let t = f.mul(xi as u32, yj as u32);
                        z[i + j] = f.add(z[i + j] as u32, t) as u64;
                    }
                }
                from_digits(&z, self.q)
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image in the residue field `R/𝔪`, encoded as in [`FieldTable`].
    pub fn residue(&self, a: u32) -> u32 {
        match &self.arithmetic {
            Arithmetic::Field => a,
            Arithmetic::Cyclic { .. } => (a as u64 % self.p()) as u32,
            Arithmetic::Galois { pa, .. } => {
                let p = self.p();
                let digits: Vec<u64> = to_digits(a, *pa, self.r()).into_iter().map(|d| d % p).collect();
                from_digits(&digits, p)
            }
            Arithmetic::Truncated { .. } => (a as u64 % self.q) as u32,
        }
    }

    pub fn is_unit(&self, a: u32) -> bool {
        self.residue(a) != 0
    }

    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.size as u32).filter(move |&a| self.is_unit(a))
    }

    /// Elements of the maximal ideal (the non-units).
    pub fn ideal(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.size as u32).filter(move |&a| !self.is_unit(a))
    }

    fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Invariant(format!("{}: {what}", self.descriptor)));
        let ideal: Vec<u32> = self.ideal().collect();
        if ideal.len() as u64 != self.ideal_size {
            return fail("non-units do not have size q^beta");
        }
        let f = &self.residue_field;
        let mut hit = vec![0u64; self.q as usize];
        for a in 0..self.size as u32 {
            hit[self.residue(a) as usize] += 1;
        }
        if hit.iter().any(|&c| c != self.ideal_size) {
            return fail("residue map is not surjective with fibres of size m");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let samples = 2000;
        let size = self.size as u32;
        for _ in 0..samples {
            let a = rng.gen_range(0..size);
            let b = rng.gen_range(0..size);
            if self.residue(self.add(a, b)) != f.add(self.residue(a), self.residue(b))
                || self.residue(self.mul(a, b)) != f.mul(self.residue(a), self.residue(b))
            {
                return fail("residue map is not a ring homomorphism");
            }
            if self.add(a, self.neg(a)) != 0 || self.mul(self.one(), a) != a {
                return fail("additive inverse or identity broken");
            }
        }
        let closed = |a: u32, b: u32| !self.is_unit(self.add(a, b));
        let absorbs = |a: u32, x: u32| !self.is_unit(self.mul(a, x));
        if self.size <= EXHAUSTIVE_CHECK_SIZE {
            for &a in &ideal {
                if !ideal.iter().all(|&b| closed(a, b)) || !(0..size).all(|x| absorbs(a, x)) {
                    return fail("maximal ideal is not closed");
                }
            }
        } else {
            for _ in 0..samples {
                let a = ideal[rng.gen_range(0..ideal.len())];
                let b = ideal[rng.gen_range(0..ideal.len())];
                let x = rng.gen_range(0..size);
                if !closed(a, b) || !absorbs(a, x) {
                    return fail("maximal ideal is not closed");
                }
            }
        }
        Ok(())
    }
}

fn ideal_size(size: u64, q: u64, beta: u32) -> u64 {
    let m = q.pow(beta);
    debug_assert_eq!(m * q, size);
    m
}

fn to_digits(code: u32, base: u64, len: u32) -> Vec<u64> {
    let mut c = code as u64;
    (0..len)
        .map(|_| {
            let d = c % base;
            c /= base;
            d
        })
        .collect()
}

fn from_digits(digits: &[u64], base: u64) -> u32 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * base + d) as u32
}

fn digitwise(a: u32, b: u32, base: u64, len: u32, op: impl Fn(u64, u64) -> u64) -> u32 {
    let (mut a, mut b) = (a as u64, b as u64);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..len {
        out += op(a % base, b % base) * place;
        a /= base;
        b /= base;
        place *= base;
    }
    out as u32
}

/// `U_R(k) = {x^k : x ∈ R*}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    pub k: u64,
    pub elements: Vec<u32>,
    pub symmetric: bool,
}

impl ConnectionSet {
    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Enumerates the `k`-th powers of the units. Refuses `gcd(k, |R|) ≠ 1`.
pub fn kth_power_set(ring: &LocalRing, k: u64) -> Result<ConnectionSet> {
    if k == 0 || gcd(k, ring.size()) != 1 {
        return Err(Error::NotCoprime { a: k, n: ring.size() });
    }
    let mut member = vec![false; ring.size() as usize];
    for x in ring.units() {
        member[ring.pow(x, k) as usize] = true;
    }
    let elements: Vec<u32> = (0..ring.size() as u32).filter(|&x| member[x as usize]).collect();

    let q = ring.q();
    let k_prime = gcd(k, q - 1);
    let expected = ring.ideal_size() * (q - 1) / k_prime;
    if elements.len() as u64 != expected {
        return Err(Error::Invariant(format!(
            "|U_R({k})| = {} but m(q-1)/gcd(k,q-1) = {expected}",
            elements.len()
        )));
    }
    let has_minus_one = member[ring.neg(1) as usize];
    let closed_under_negation = elements.iter().all(|&x| member[ring.neg(x) as usize]);
    if has_minus_one != closed_under_negation {
        return Err(Error::Invariant(format!("-1 ∈ U_R({k}) disagrees with symmetry of U_R({k})")));
    }
    Ok(ConnectionSet { k, elements, symmetric: closed_under_negation })
}

/// The cosets `a + 𝔪`, indexed by residue-field element.
pub fn ideal_cosets(ring: &LocalRing) -> Vec<Vec<u32>> {
    let mut cosets = vec![Vec::with_capacity(ring.ideal_size() as usize); ring.q() as usize];
    for a in 0..ring.size() as u32 {
        cosets[ring.residue(a) as usize].push(a);
    }
    cosets
}

/// `q` even, or `gcd(k, q-1) | (q-1)/2` with `q` odd.
pub fn undirected_criterion(q: u64, k: u64) -> bool {
    q.is_multiple_of(2) || ((q - 1) / 2).is_multiple_of(gcd(k, q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> LocalRing {
        LocalRing::parse(s).unwrap()
    }

    #[test]
    fn descriptor_grammar() {
        assert_eq!("zpk:5,2".parse::<RingDescriptor>().unwrap(), RingDescriptor::IntegersModPrimePower { p: 5, alpha: 2 });
        assert_eq!("gr:5,2,2".parse::<RingDescriptor>().unwrap(), RingDescriptor::Galois { p: 5, alpha: 2, r: 2 });
        assert_eq!("fqt:5,1,2".parse::<RingDescriptor>().unwrap().to_string(), "fqt:5,1,2");
        for bad in ["", "zpk:5", "zp:5,2", "fq:6,1", "fq:5,0", "gr:5,2", "fq:a,1", "fq:5,1,1"] {
            assert!(matches!(bad.parse::<RingDescriptor>(), Err(Error::BadDescriptor(_))), "{bad}");
        }
    }

    #[test]
    fn ring_sizes() {
        let z25 = ring("zpk:5,2");
        assert_eq!((z25.size(), z25.q(), z25.ideal_size()), (25, 5, 5));
        assert_eq!(z25.units().count(), 20);

        let gr = ring("gr:5,2,2");
        assert_eq!((gr.size(), gr.q(), gr.ideal_size(), gr.beta()), (625, 25, 25, 1));
        assert_eq!(gr.units().count(), 600);

        let trunc = ring("fqt:5,1,2");
        assert_eq!((trunc.size(), trunc.q(), trunc.ideal_size()), (25, 5, 5));

        let f = ring("fq:13,1");
        assert_eq!(f.ideal_size(), 1);
        assert!(matches!(LocalRing::parse("zpk:7,8"), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn galois_ring_is_a_ring() {
        let gr = ring("gr:3,2,2");
        for a in 0..gr.size() as u32 {
            for b in 0..gr.size() as u32 {
                assert_eq!(gr.mul(a, b), gr.mul(b, a));
                for c in [0u32, 1, 7, 80] {
                    assert_eq!(gr.mul(a, gr.add(b, c)), gr.add(gr.mul(a, b), gr.mul(a, c)));
                    assert_eq!(gr.mul(gr.mul(a, b), c), gr.mul(a, gr.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn truncated_ring_has_nilpotent_t() {
        let r = ring("fqt:3,2,3");
        let t = 9; // digit 1 in position 1
        assert_ne!(r.mul(t, t), 0);
        assert_eq!(r.mul(r.mul(t, t), t), 0);
        assert!(!r.is_unit(t));
    }

    #[test]
    fn power_sets() {
        let z25 = ring("zpk:5,2");
        let s = kth_power_set(&z25, 2).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.symmetric);

        let z49 = ring("zpk:7,2");
        let s = kth_power_set(&z49, 3).unwrap();
        assert_eq!(s.len(), 14);
        assert!(s.symmetric);

        let f7 = ring("fq:7,1");
        let s = kth_power_set(&f7, 2).unwrap();
        assert_eq!(s.elements, vec![1, 2, 4]);
        assert!(!s.symmetric);

        assert_eq!(kth_power_set(&z25, 5).unwrap_err(), Error::NotCoprime { a: 5, n: 25 });
        assert_eq!(kth_power_set(&z25, 10).unwrap_err(), Error::NotCoprime { a: 10, n: 25 });
    }

    #[test]
    fn cosets() {
        let z25 = ring("zpk:5,2");
        let c = ideal_cosets(&z25);
        assert_eq!(c.len(), 5);
        assert!(c.iter().all(|class| class.len() == 5));
        assert_eq!(c[0], vec![0, 5, 10, 15, 20]);

        let f13 = ring("fq:13,1");
        assert!(ideal_cosets(&f13).iter().all(|class| class.len() == 1));

        let gr = ring("gr:5,2,2");
        let c = ideal_cosets(&gr);
        assert_eq!(c.len(), 25);
        assert!(c.iter().all(|class| class.len() == 25));
    }

    #[test]
    fn undirected_examples() {
        assert!(undirected_criterion(5, 2));
        assert!(!undirected_criterion(7, 2));
        assert!(undirected_criterion(4, 3));
    }

    #[test]
    fn symmetry_matches_criterion_and_residue_image() {
        for desc in ["zpk:5,2", "zpk:7,2", "zpk:3,3", "gr:3,2,2", "fqt:5,1,2", "fqt:2,2,2", "fq:3,2", "fq:3,2"] {
            let Ok(ring) = LocalRing::parse(desc) else { continue };
            for k in 1..=8u64 {
                let Ok(s) = kth_power_set(&ring, k) else { continue };
                assert_eq!(s.symmetric, undirected_criterion(ring.q(), k), "{desc} k={k}");
                // residue image of U_R(k) is U_k in the residue field
                let f = ring.residue_field();
                let mut image: Vec<u32> = s.elements.iter().map(|&x| ring.residue(x)).collect();
                image.sort();
                image.dedup();
                let mut field_powers: Vec<u32> = (1..f.q() as u32).map(|x| f.pow(x, k)).collect();
                field_powers.sort();
                field_powers.dedup();
                assert_eq!(image, field_powers, "{desc} k={k}");
                // U_R(k) is a union of full cosets of 𝔪
                for &x in &s.elements {
                    for m in ring.ideal() {
                        assert!(s.contains(ring.add(x, m)));
                    }
                }
            }
        }
    }
}
