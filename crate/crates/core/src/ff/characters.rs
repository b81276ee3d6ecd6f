//! Multiplicative characters of `F_q`, Gauss and Jacobi sums, binomial
//! symbols and the finite-field `3F2`.
//!
//! Characters are indexed by `j mod (q-1)`: `chi_j(g^a) = exp(2 pi i j a / (q-1))`
//! for the table generator `g`, and every character (the trivial one included)
//! vanishes at 0. Character indices are plain `i64` values reduced mod `q-1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::FieldTable;
use crate::error::{Error, Result};

/// Which of the two binomial-symbol conventions to use.
///
/// `Greene` is `binom(A, B) = B(-1)/q * J(A, conj B)`; `Literal` swaps
/// the roles of the two characters: `binom(A, B) = A(-1)/q * J(B, conj A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinomialConvention {
    Greene,
    Literal,
}

impl BinomialConvention {
    pub const ALL: [BinomialConvention; 2] = [BinomialConvention::Greene, BinomialConvention::Literal];

    pub fn name(self) -> &'static str {
        match self {
            BinomialConvention::Greene => "greene",
            BinomialConvention::Literal => "literal",
        }
    }
}

/// Convention used when none is requested explicitly. Both conventions
/// reproduce the brute-force 4-clique counts of Γ(3,109) and Γ(4,113); see
/// `formulas::calibrate_convention` and the test guarding this constant.
pub const DEFAULT_CONVENTION: BinomialConvention = BinomialConvention::Literal;

fn root(t: u64, n: u64) -> Complex64 {
    let (s, c) = (TAU * (t % n) as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

fn reduce(j: i64, n: u64) -> u64 {
    j.rem_euclid(n as i64) as u64
}

/// `chi_j(x)` with `chi_j(0) = 0`.
pub fn character(field: &FieldTable, j: i64, x: u32) -> Complex64 {
    let n = field.q() - 1;
    match field.log(x) {
        None => Complex64::new(0.0, 0.0),
        Some(l) => root((reduce(j, n) as u128 * l as u128 % n as u128) as u64, n),
    }
}

/// Order of `chi_j`.
pub fn character_order(field: &FieldTable, j: i64) -> u64 {
    let n = field.q() - 1;
    n / num_integer::gcd(reduce(j, n), n)
}

/// Index of the order-`k` character with the smallest positive index.
pub fn order_k_index(field: &FieldTable, k: u64) -> Result<i64> {
    let n = field.q() - 1;
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::OrderUnavailable { order: k, q: field.q() });
    }
    Ok((n / k) as i64)
}

/// `chi_j(-1)`, which is `(-1)^j` in odd characteristic and 1 otherwise.
pub fn sign_at_minus_one(field: &FieldTable, j: i64) -> f64 {
    if field.p() == 2 || reduce(j, field.q() - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `J(chi_j1, chi_j2) = sum_a chi_j1(a) chi_j2(1 - a)`, by direct summation.
pub fn jacobi_sum(field: &FieldTable, j1: i64, j2: i64) -> Complex64 {
    let n = field.q() - 1;
    let (j1, j2) = (reduce(j1, n) as u128, reduce(j2, n) as u128);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 2..field.q() as u32 {
        let b = field.sub(1, a);
        if b == 0 {
            continue;
        }
        let la = field.log(a).expect("nonzero") as u128;
        let lb = field.log(b).expect("nonzero") as u128;
        acc += root(((j1 * la + j2 * lb) % n as u128) as u64, n);
    }
    acc
}

/// `g(chi_j) = sum_{x != 0} chi_j(x) zeta_p^{Tr x}`, by direct summation.
pub fn gauss_sum(field: &FieldTable, j: i64) -> Complex64 {
    let n = field.q() - 1;
    let j = reduce(j, n) as u128;
    (0..n)
        .map(|a| {
            let x = field.exp(a);
            root((j * a as u128 % n as u128) as u64, n) * root(field.trace(x), field.p())
        })
        .sum()
}

/// Gauss sums of every character, plus the field, for repeated evaluation of
/// Jacobi sums, binomial symbols and `3F2` values.
#[derive(Debug, Clone)]
pub struct CharacterTable<'a> {
    field: &'a FieldTable,
    gauss: Vec<Complex64>,
}

impl<'a> CharacterTable<'a> {
    /// Computes all `q - 1` Gauss sums at once: as functions of `j` they are
    /// the unnormalized inverse DFT of `a -> zeta_p^{Tr g^a}`.
    pub fn new(field: &'a FieldTable) -> Self {
        let n = (field.q() - 1) as usize;
        let p = field.p();
        let mut buf: Vec<Complex64> = (0..n as u64).map(|a| root(field.trace(field.exp(a)), p)).collect();
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        CharacterTable { field, gauss: buf }
    }

    pub fn field(&self) -> &FieldTable {
        self.field
    }

    pub fn gauss_sum(&self, j: i64) -> Complex64 {
        self.gauss[reduce(j, self.field.q() - 1) as usize]
    }

    /// `J(chi_j1, chi_j2)` from `g(a) g(b) / g(a + b)` when all three
    /// characters are nontrivial, by direct summation otherwise.
    pub fn jacobi_sum(&self, j1: i64, j2: i64) -> Complex64 {
        let n = self.field.q() - 1;
        let (a, b) = (reduce(j1, n), reduce(j2, n));
        let ab = (a + b) % n;
        if a == 0 || b == 0 || ab == 0 {
            return jacobi_sum(self.field, j1, j2);
        }
        self.gauss[a as usize] * self.gauss[b as usize] / self.gauss[ab as usize]
    }

    pub fn binom_symbol(&self, top: i64, bot: i64, convention: BinomialConvention) -> Complex64 {
        let q = self.field.q() as f64;
        match convention {
            BinomialConvention::Greene => self.jacobi_sum(top, -bot) * (sign_at_minus_one(self.field, bot) / q),
            BinomialConvention::Literal => self.jacobi_sum(bot, -top) * (sign_at_minus_one(self.field, top) / q),
        }
    }

    /// `3F2(chi_k^t1, chi_k^t2, chi_k^t3; chi_k^t4, chi_k^t5 | 1)`:
    /// `q/(q-1) * sum_chi binom(A chi, chi) binom(B chi, D chi) binom(C chi, E chi)`.
    pub fn hyp3f2(&self, k: u64, t: [i64; 5], convention: BinomialConvention) -> Result<Complex64> {
        let base = order_k_index(self.field, k)?;
        let [a, b, c, d, e] = t.map(|ti| ti * base);
        let n = self.field.q() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n as i64 {
            acc += self.binom_symbol(a + j, j, convention)
                * self.binom_symbol(b + j, d + j, convention)
                * self.binom_symbol(c + j, e + j, convention);
        }
        Ok(acc * (self.field.q() as f64 / n as f64))
    }
}

/// Free-standing binomial symbol, for one-off evaluations.
pub fn binom_symbol(field: &FieldTable, top: i64, bot: i64, convention: BinomialConvention) -> Complex64 {
    let q = field.q() as f64;
    match convention {
        BinomialConvention::Greene => jacobi_sum(field, top, -bot) * (sign_at_minus_one(field, bot) / q),
        BinomialConvention::Literal => jacobi_sum(field, bot, -top) * (sign_at_minus_one(field, top) / q),
    }
}

/// Free-standing `3F2` evaluation; builds a [`CharacterTable`] internally.
pub fn hyp3f2(field: &FieldTable, k: u64, t: [i64; 5], convention: BinomialConvention) -> Result<Complex64> {
    CharacterTable::new(field).hyp3f2(k, t, convention)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn trivial_jacobi_sums() {
        let f = FieldTable::prime_field(13).unwrap();
        assert!(close(jacobi_sum(&f, 0, 0), Complex64::new(11.0, 0.0), 1e-9));
        for j in 1..12 {
            assert!(close(jacobi_sum(&f, j, 0), Complex64::new(-1.0, 0.0), 1e-9));
        }
        let chi4 = order_k_index(&f, 4).unwrap();
        assert_eq!(chi4, 3);
        let j = jacobi_sum(&f, chi4, chi4);
        assert!((j.norm() - 13f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn gauss_sums() {
        let f5 = FieldTable::prime_field(5).unwrap();
        assert!(close(gauss_sum(&f5, 0), Complex64::new(-1.0, 0.0), 1e-9));
        assert!(close(gauss_sum(&f5, 2), Complex64::new(5f64.sqrt(), 0.0), 1e-9));

        let f25 = FieldTable::new(5, 2, None).unwrap();
        let table = CharacterTable::new(&f25);
        for j in 1..24 {
            let direct = gauss_sum(&f25, j);
            assert!((direct.norm_sqr() - 25.0).abs() < 1e-9);
            assert!(close(direct, table.gauss_sum(j), 1e-9));
        }
        assert!(close(table.gauss_sum(0), Complex64::new(-1.0, 0.0), 1e-9));
    }

    #[test]
    fn jacobi_from_gauss_matches_direct() {
        for (p, r) in [(7u64, 1u32), (2, 4), (3, 3), (17, 1)] {
            let f = FieldTable::new(p, r, None).unwrap();
            let table = CharacterTable::new(&f);
            let n = (f.q() - 1) as i64;
            for a in 0..n {
                for b in 0..n {
                    assert!(close(table.jacobi_sum(a, b), jacobi_sum(&f, a, b), 1e-8), "q={} a={a} b={b}", f.q());
                }
            }
        }
    }

    #[test]
    fn binomial_symbol_examples() {
        let f7 = FieldTable::prime_field(7).unwrap();
        for conv in BinomialConvention::ALL {
            assert!(close(binom_symbol(&f7, 0, 0, conv), Complex64::new(5.0 / 7.0, 0.0), 1e-12));
        }
        let f13 = FieldTable::prime_field(13).unwrap();
        let chi4 = order_k_index(&f13, 4).unwrap();
        for conv in BinomialConvention::ALL {
            assert!(binom_symbol(&f13, chi4, 0, conv).norm() <= 13f64.sqrt() / 13.0 + 1e-12);
        }
    }

    /// Straight double sum over characters and field elements, no Gauss sums.
    fn hyp3f2_by_double_sum(f: &FieldTable, k: u64, t: [i64; 5], conv: BinomialConvention) -> Complex64 {
        let base = order_k_index(f, k).unwrap();
        let n = (f.q() - 1) as i64;
        let [a, b, c, d, e] = t.map(|x| x * base);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += binom_symbol(f, a + j, j, conv) * binom_symbol(f, b + j, d + j, conv) * binom_symbol(f, c + j, e + j, conv);
        }
        acc * (f.q() as f64 / n as f64)
    }

    #[test]
    fn hyp3f2_on_f7_is_five_over_49() {
        let f7 = FieldTable::prime_field(7).unwrap();
        for conv in BinomialConvention::ALL {
            let fast = hyp3f2(&f7, 3, [1, 1, 2, 0, 0], conv).unwrap();
            let slow = hyp3f2_by_double_sum(&f7, 3, [1, 1, 2, 0, 0], conv);
            assert!(close(fast, Complex64::new(5.0 / 49.0, 0.0), 1e-9));
            assert!(close(slow, fast, 1e-9));
        }
    }

    #[test]
    fn hyp3f2_fast_path_matches_double_sum() {
        let cases: [(u64, u32, u64, [i64; 5]); 4] =
            [(13, 1, 3, [1, 1, 2, 0, 0]), (17, 1, 4, [1, 1, 3, 0, 0]), (17, 1, 4, [1, 2, 2, 0, 0]), (5, 2, 4, [1, 2, 3, 1, 2])];
        for (p, r, k, t) in cases {
            let f = FieldTable::new(p, r, None).unwrap();
            for conv in BinomialConvention::ALL {
                let fast = hyp3f2(&f, k, t, conv).unwrap();
                let slow = hyp3f2_by_double_sum(&f, k, t, conv);
                assert!(close(fast, slow, 1e-9), "q={} t={t:?} {conv:?}", f.q());
            }
        }
    }

    #[test]
    fn hyp3f2_k4_pair_on_f17() {
        // K4(Γ(4,17)) = 0 forces 12 q^2 A + 30 q^2 B = 660 with e = 1, u = 3.
        let f = FieldTable::prime_field(17).unwrap();
        let table = CharacterTable::new(&f);
        for conv in BinomialConvention::ALL {
            let a = table.hyp3f2(4, [1, 1, 3, 0, 0], conv).unwrap();
            let b = table.hyp3f2(4, [1, 2, 2, 0, 0], conv).unwrap();
            let lhs = (a * 12.0 + b * 30.0) * 289.0;
            assert!(close(lhs, Complex64::new(660.0, 0.0), 1e-9), "{conv:?}: {lhs}");
        }
    }

    #[test]
    fn missing_order_is_an_error() {
        let f = FieldTable::prime_field(7).unwrap();
        assert_eq!(
            hyp3f2(&f, 4, [1, 1, 2, 0, 0], DEFAULT_CONVENTION).unwrap_err(),
            Error::OrderUnavailable { order: 4, q: 7 }
        );
        assert_eq!(character_order(&f, 2), 3);
        assert_eq!(character_order(&f, 0), 1);
    }
}
