//! Dirichlet characters modulo an odd prime power and their Jacobi sums.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{is_prime, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

pub const MAX_DIRICHLET_MODULUS: u64 = 1_000_000;

/// Discrete logs on the cyclic unit group of `Z/p^alpha`.
#[derive(Debug, Clone)]
pub struct DirichletTable {
    p: u64,
    alpha: u32,
    modulus: u64,
    group_order: u64,
    generator: u64,
    log: Vec<u32>,
}

impl DirichletTable {
    pub fn new(p: u64, alpha: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::NonPrime(p));
        }
        if alpha == 0 {
            return Err(Error::HypothesisViolated("alpha must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(alpha)
            .filter(|&m| m <= MAX_DIRICHLET_MODULUS)
            .ok_or(Error::SizeCap {
                what: "Dirichlet modulus",
                size: (p as u128).saturating_pow(alpha),
                cap: MAX_DIRICHLET_MODULUS as u128,
            })?;
        let group_order = modulus / p * (p - 1);
        let generator = (2..modulus)
            .find(|&g| g % p != 0 && multiplicative_order(g, modulus, group_order) == group_order)
            .unwrap_or(1);
        if multiplicative_order(generator, modulus, group_order) != group_order {
            return Err(Error::Invariant(format!("unit group of Z/{modulus} has no generator")));
        }
        let mut log = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for a in 0..group_order {
            log[x as usize] = a as u32;
            x = x * generator % modulus;
        }
        Ok(DirichletTable { p, alpha, modulus, group_order, generator, log })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn log(&self, a: u64) -> Option<u32> {
        match self.log[(a % self.modulus) as usize] {
            u32::MAX => None,
            l => Some(l),
        }
    }

    /// The character of order `order` sending the generator to `exp(2 pi i / order)`.
    pub fn character(&self, order: u64, a: u64) -> Result<Complex64> {
        self.check_order(order)?;
        Ok(match self.log(a) {
            None => Complex64::new(0.0, 0.0),
            Some(l) => {
                let (s, c) = (TAU * (l as u64 % order) as f64 / order as f64).sin_cos();
                Complex64::new(c, s)
            }
        })
    }

    fn check_order(&self, order: u64) -> Result<()> {
        if order == 0 || !self.group_order.is_multiple_of(order) {
            return Err(Error::NoCharacterOfOrder { order, modulus: self.modulus });
        }
        Ok(())
    }
}

/// `J(psi, phi) = sum_{a in Z/p^alpha} psi(a) phi(1 - a)` with `psi`, `phi`
/// the canonical characters of the given orders (zero off the units).
pub fn dirichlet_jacobi(table: &DirichletTable, order1: u64, order2: u64) -> Result<Complex64> {
    table.check_order(order1)?;
    table.check_order(order2)?;
    let m = table.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..m {
        let b = (1 + m - a) % m;
        if let (Some(la), Some(lb)) = (table.log(a), table.log(b)) {
            let (o1, o2) = (order1 as f64, order2 as f64);
            let angle = TAU * ((la as u64 % order1) as f64 / o1 + (lb as u64 % order2) as f64 / o2);
            let (s, c) = angle.sin_cos();
            acc += Complex64::new(c, s);
        }
    }
    Ok(acc)
}

/// Euler's criterion for cubic residues: `a^((p-1)/gcd(3, p-1)) == 1 (mod p)`.
pub fn cubic_residue(a: i64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Err(Error::NotCoprime { a, n: p });
    }
    let d = num_integer::gcd(3, p - 1);
    Ok(pow_mod(a, (p - 1) / d, p) == 1)
}
