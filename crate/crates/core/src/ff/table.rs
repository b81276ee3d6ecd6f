//! Finite fields `F_{p^r}` backed by discrete-log tables.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial of degree `< r` (constant term least
//! significant). Multiplication goes through `exp`/`log` tables built from the
//! smallest generator in that encoding order.

use crate::arith::{is_prime, pow_mod, prime_factors};
use crate::error::{Error, Result};

/// Largest field whose `exp`/`log` tables are materialized.
pub const MAX_TABLE_SIZE: u64 = 1_000_000;

/// Largest field the crate reasons about at all.
pub const MAX_FIELD_SIZE: u64 = 1 << 31;

#[derive(Debug, Clone)]
pub struct FieldTable {
    p: u64,
    r: u32,
    q: u64,
    /// `c_0..c_{r-1}` of the monic modulus `x^r + c_{r-1} x^{r-1} + ... + c_0`.
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `Tr(t^i)` for the power basis, used to evaluate the absolute trace.
    basis_trace: Vec<u64>,
}

impl FieldTable {
    /// Builds `F_{p^r}`. Without a modulus, the smallest monic irreducible of
    /// degree `r` (ordered by its encoding `c_0 + c_1 p + ...`) is used.
    pub fn new(p: u64, r: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if r == 0 {
            return Err(Error::BadModulus { degree: 0, coeffs: Vec::new() });
        }
        let q = field_size(p, r)?;
        if q > MAX_TABLE_SIZE {
            return Err(Error::SizeCap { what: "field table", size: q as u128, cap: MAX_TABLE_SIZE as u128 });
        }
        let modulus = match modulus {
            Some(coeffs) => {
                let coeffs = normalize_modulus(coeffs, p, r)?;
                if !is_irreducible(&coeffs, p) {
                    return Err(Error::ReducibleModulus(coeffs));
                }
                coeffs
            }
            None => smallest_irreducible(p, r),
        };
        let mut field = FieldTable {
            p,
            r,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            basis_trace: Vec::new(),
        };
        field.build_tables()?;
        Ok(field)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn build_tables(&mut self) -> Result<()> {
        let n = self.q - 1;
        let factors = prime_factors(n);
        let generator = (1..self.q)
            .find(|&g| {
                let poly = self.decode(g as u32);
                factors.iter().all(|&f| {
                    let power = poly_pow_mod(&poly, n / f, &self.modulus, self.p);
                    !is_one(&power)
                })
            })
            .ok_or_else(|| Error::Invariant(format!("no generator of F_{}", self.q)))?;
        self.generator = generator as u32;

        let g = self.decode(self.generator);
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut current = vec![0u64; self.r as usize];
        current[0] = 1;
        for a in 0..n {
            let code = self.encode(&current);
            if log[code as usize] != u32::MAX {
                return Err(Error::Invariant(format!("exp table of F_{} is not a bijection", self.q)));
            }
            log[code as usize] = a as u32;
            exp.push(code);
            current = poly_mul_mod(&current, &g, &self.modulus, self.p);
        }
        if !is_one(&current) {
            return Err(Error::Invariant(format!("generator of F_{} does not have order q-1", self.q)));
        }
        self.exp = exp;
        self.log = log;

        self.basis_trace = (0..self.r)
            .map(|i| {
                let mut basis = vec![0u64; self.r as usize];
                basis[i as usize] = 1;
                self.trace_slow(self.encode(&basis))
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    /// `g^a` for any integer exponent.
    pub fn exp(&self, a: u64) -> u32 {
        self.exp[(a % (self.q - 1)) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: u32) -> Option<u32> {
        match self.log.get(x as usize) {
            Some(&l) if l != u32::MAX => Some(l),
            _ => None,
        }
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// `-1`, which is `g^((q-1)/2)` in odd characteristic.
    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 + self.p - b as u64) % self.p) as u32;
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.exp[((la + lb) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        let l = self.log(a)? as u64;
        let n = self.q - 1;
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        match self.log(a) {
            None => 0,
            Some(l) => {
                let n = self.q - 1;
                self.exp[((l as u128 * e as u128) % n as u128) as usize]
            }
        }
    }

    /// Absolute trace `x + x^p + ... + x^(p^(r-1))`, as an element of `0..p`.
    pub fn trace(&self, x: u32) -> u64 {
        let mut code = x as u64;
        let mut acc = 0u64;
        for &t in &self.basis_trace {
            acc = (acc + (code % self.p) * t) % self.p;
            code /= self.p;
        }
        acc
    }

    fn trace_slow(&self, x: u32) -> Result<u64> {
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..self.r {
            acc = self.add(acc, y);
            y = self.pow(y, self.p);
        }
        if acc as u64 >= self.p {
            return Err(Error::Invariant(format!("trace of {x} left the prime field")));
        }
        Ok(acc as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: u32) -> Option<u64> {
        let l = self.log(x)? as u64;
        let n = self.q - 1;
        Some(n / num_integer::gcd(l, n))
    }

    pub fn decode(&self, code: u32) -> Vec<u64> {
        let mut code = code as u64;
        (0..self.r)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    pub fn encode(&self, coeffs: &[u64]) -> u32 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u64, u64, u64) -> u64) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += op(a % self.p, b % self.p, self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }
}

fn field_size(p: u64, r: u32) -> Result<u64> {
    match p.checked_pow(r) {
        Some(q) if q <= MAX_FIELD_SIZE => Ok(q),
        _ => Err(Error::SizeCap {
            what: "field",
            size: (p as u128).checked_pow(r).unwrap_or(u128::MAX),
            cap: MAX_FIELD_SIZE as u128,
        }),
    }
}

/// Accepts either `r` low coefficients or `r + 1` coefficients ending in 1.
fn normalize_modulus(coeffs: &[u64], p: u64, r: u32) -> Result<Vec<u64>> {
    let r = r as usize;
    let bad = || Error::BadModulus { degree: r as u32, coeffs: coeffs.to_vec() };
    let low = match coeffs.len() {
        n if n == r => coeffs,
        n if n == r + 1 && coeffs[r] % p == 1 => &coeffs[..r],
        _ => return Err(bad()),
    };
    if low.iter().any(|&c| c >= p) {
        return Err(bad());
    }
    Ok(low.to_vec())
}

fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    if r == 1 {
        return vec![0];
    }
    let count = p.pow(r);
    (0..count)
        .map(|code| {
            let mut c = code;
            (0..r)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect::<Vec<_>>()
        })
        .find(|coeffs| is_irreducible(coeffs, p))
        .expect("an irreducible polynomial of every degree exists")
}

/// Rabin's irreducibility test for the monic polynomial with low
/// coefficients `coeffs`.
pub fn is_irreducible(coeffs: &[u64], p: u64) -> bool {
    let r = coeffs.len() as u64;
    if r == 1 {
        return true;
    }
    let x = {
        let mut v = vec![0u64; r as usize];
        v[1 % r as usize] = 1;
        v
    };
    // x^(p^i) mod f, for i = 0..=r
    let mut frob = vec![x.clone()];
    for i in 0..r as usize {
        frob.push(poly_pow_mod(&frob[i], p, coeffs, p));
    }
    if frob[r as usize] != x {
        return false;
    }
    let mut full = coeffs.to_vec();
    full.push(1);
    for d in prime_factors(r) {
        let h = &frob[(r / d) as usize];
        let diff = poly_sub(h, &x, p);
        let g = poly_gcd(full.clone(), trim(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn is_one(v: &[u64]) -> bool {
    v.first() == Some(&1) && v[1..].iter().all(|&c| c == 0)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

/// Product of two residues modulo the monic polynomial `x^r + low`.
pub(crate) fn poly_mul_mod(a: &[u64], b: &[u64], low: &[u64], p: u64) -> Vec<u64> {
    let r = low.len();
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (r..2 * r).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in low.iter().enumerate() {
            let k = deg - r + i;
            prod[k] = (prod[k] + (p - m) % p * c) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn poly_pow_mod(base: &[u64], mut e: u64, low: &[u64], p: u64) -> Vec<u64> {
    let r = low.len();
    let mut acc = vec![0u64; r];
    acc[0] = 1;
    let mut b = base.to_vec();
    b.resize(r, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, low, p);
        }
        b = poly_mul_mod(&b, &b, low, p);
        e >>= 1;
    }
    acc
}

/// Remainder of `a` by `b` (both trimmed, `b` nonzero) over `F_p`.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                let k = da - db + i;
                a[k] = (a[k] + (p - bi) * c) % p;
            }
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by exhaustive search for monic factors of degree <= r/2.
    fn irreducible_by_factor_search(low: &[u64], p: u64) -> bool {
        let r = low.len();
        let mut full = low.to_vec();
        full.push(1);
        for d in 1..=r / 2 {
            for code in 0..p.pow(d as u32) {
                let mut c = code;
                let mut factor: Vec<u64> = (0..d)
                    .map(|_| {
                        let x = c % p;
                        c /= p;
                        x
                    })
                    .collect();
                factor.push(1);
                if poly_rem(full.clone(), &factor, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_factor_search() {
        for (p, r) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            for code in 0..p.pow(r) {
                let mut c = code;
                let low: Vec<u64> = (0..r)
                    .map(|_| {
                        let x = c % p;
                        c /= p;
                        x
                    })
                    .collect();
                assert_eq!(
                    is_irreducible(&low, p),
                    irreducible_by_factor_search(&low, p),
                    "p={p} low={low:?}"
                );
            }
        }
    }

    #[test]
    fn prime_field_of_five() {
        let f = FieldTable::prime_field(5).unwrap();
        let mut seen: Vec<u32> = f.exp_table().to_vec();
        seen.sort();
        assert_eq!(seen, vec![1, 2, 3, 4]);
        assert_eq!(f.generator(), 2);
        assert_eq!(f.exp(0), 1);
    }

    #[test]
    fn four_element_field() {
        let f = FieldTable::new(2, 2, Some(&[1, 1, 1])).unwrap();
        for x in 1..4 {
            assert_eq!(f.pow(x, 3), 1);
        }
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.minus_one(), 1);
    }

    #[test]
    fn generator_of_f25_has_order_24() {
        let f = FieldTable::new(5, 2, None).unwrap();
        // exhaustive powering of every candidate, independent of the tables
        let order_by_powering = |x: u32| {
            let mut y = x;
            let mut k = 1u64;
            while y != 1 {
                let a = f.decode(y);
                let b = f.decode(x);
                y = f.encode(&poly_mul_mod(&a, &b, f.modulus(), 5));
                k += 1;
            }
            k
        };
        assert_eq!(order_by_powering(f.generator()), 24);
        let smaller: Vec<u32> = (1..f.generator()).filter(|&x| order_by_powering(x) == 24).collect();
        assert!(smaller.is_empty());
        assert_eq!(f.modulus(), &[2, 0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldTable::new(6, 1, None).unwrap_err(), Error::NonPrime(6));
        assert!(matches!(FieldTable::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus(_))));
        assert!(matches!(FieldTable::new(5, 2, Some(&[1, 1, 2])), Err(Error::BadModulus { .. })));
        assert!(matches!(FieldTable::new(1009, 2, None), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn exp_table_is_a_homomorphism() {
        for (p, r) in [(2, 6), (3, 3), (5, 2), (7, 2), (13, 1)] {
            let f = FieldTable::new(p, r, None).unwrap();
            let n = f.q() - 1;
            for a in 0..n {
                for b in (0..n).step_by(3) {
                    let lhs = f.mul(f.exp(a), f.exp(b));
                    assert_eq!(lhs, f.exp((a + b) % n));
                }
            }
        }
    }

    #[test]
    fn field_axioms_on_f27() {
        let f = FieldTable::new(3, 3, None).unwrap();
        for a in 0..27u32 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..27u32 {
                for c in [0u32, 1, 5, 26] {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_lands_in_prime_field() {
        let f = FieldTable::new(5, 2, None).unwrap();
        for a in 0..25u32 {
            assert_eq!(f.trace(a), f.trace_slow(a).unwrap());
            for b in 0..25u32 {
                assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 5);
            }
        }
    }
}
