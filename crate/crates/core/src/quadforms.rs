//! Representations of integers by the binary quadratic forms that parameterize
//! the clique formulas: `X^2 + 4Y^2`, `X^2 + 27Y^2`, `X^2 + 2Y^2`, and
//! `4q = C^2 + 27D^2`.
//!
//! All solvers are exhaustive searches over the second coordinate, smallest
//! first, in arbitrary precision. The second coordinate is always returned
//! non-negative; the sign of the first is fixed by the congruence the form
//! carries, or made positive when there is none.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::is_prime;
use crate::ff::cubic_residue;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadForm {
    /// `X^2 + 4Y^2`
    SumFourSquare,
    /// `X^2 + 27Y^2`
    SumTwentySevenSquare,
    /// `X^2 + 2Y^2`
    SumTwoSquare,
    /// `C^2 + 27D^2 = 4q`; `target` holds `4q`.
    ScaledTwentySeven,
}

impl QuadForm {
    pub fn coefficient(self) -> u64 {
        match self {
            QuadForm::SumFourSquare => 4,
            QuadForm::SumTwentySevenSquare | QuadForm::ScaledTwentySeven => 27,
            QuadForm::SumTwoSquare => 2,
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            QuadForm::SumFourSquare => "X^2 + 4Y^2",
            QuadForm::SumTwentySevenSquare => "X^2 + 27Y^2",
            QuadForm::SumTwoSquare => "X^2 + 2Y^2",
            QuadForm::ScaledTwentySeven => "C^2 + 27D^2 (= 4q)",
        }
    }
}

/// Normalization conditions a representation satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormTag {
    OneModFour,
    ThreeModFour,
    OneModThree,
    CoprimeToP,
}

impl NormTag {
    fn holds(self, a: &BigInt, p: u64) -> bool {
        match self {
            NormTag::OneModFour => residue(a, 4) == 1,
            NormTag::ThreeModFour => residue(a, 4) == 3,
            NormTag::OneModThree => residue(a, 3) == 1,
            NormTag::CoprimeToP => residue(a, p) != 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFRep {
    pub form: QuadForm,
    pub a: BigInt,
    pub b: BigInt,
    pub target: BigInt,
    pub p: u64,
    pub tags: Vec<NormTag>,
}

impl QFRep {
    /// Re-checks the equation and every tag in exact arithmetic.
    pub fn is_valid(&self) -> bool {
        let d = BigInt::from(self.form.coefficient());
        &self.a * &self.a + d * &self.b * &self.b == self.target
            && !self.b.is_negative()
            && self.tags.iter().all(|t| t.holds(&self.a, self.p))
    }
}

impl fmt::Display for QFRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.form.coefficient();
        write!(f, "{} = ({})^2 + {}*({})^2", self.target, self.a, d, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumFourSquareMode {
    /// Only `p ∤ x` (when `p ≡ 1 mod 4`); `x > 0`.
    CoprimeOnly,
    /// Additionally `x ≡ 1 mod 4` (the `e` of `q = e^2 + 4f^2`).
    ENormalized,
}

fn residue(a: &BigInt, m: u64) -> u64 {
    let m = BigInt::from(m);
    let r = ((a % &m) + &m) % &m;
    u64::try_from(r).expect("residue fits")
}

/// Every `(a, b)` with `a, b >= 0` and `a^2 + d b^2 = target`, by increasing `b`.
pub fn all_representations(target: &BigInt, d: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    if target.is_negative() {
        return out;
    }
    let d = BigInt::from(d);
    let mut b = BigInt::zero();
    loop {
        let rest = target - &d * &b * &b;
        if rest.is_negative() {
            break;
        }
        let a = rest.sqrt();
        if &a * &a == rest {
            out.push((a, b.clone()));
        }
        b += 1;
    }
    out
}

/// First representation (smallest `b`) for which `choose` accepts `|a|` by
/// returning the signed first coordinate.
fn search(target: &BigInt, d: u64, mut choose: impl FnMut(&BigInt) -> Option<BigInt>) -> Option<(BigInt, BigInt)> {
    let dd = BigInt::from(d);
    let mut b = BigInt::zero();
    loop {
        let rest = target - &dd * &b * &b;
        if rest.is_negative() {
            return None;
        }
        let a = rest.sqrt();
        if &a * &a == rest {
            if let Some(signed) = choose(&a) {
                return Some((signed, b));
            }
        }
        b += 1;
    }
}

/// Picks the sign of `a` satisfying `a ≡ want (mod m)`, if either does.
fn signed_with_residue(a: &BigInt, m: u64, want: u64) -> Option<BigInt> {
    if residue(a, m) == want {
        Some(a.clone())
    } else if residue(&-a, m) == want {
        Some(-a)
    } else {
        None
    }
}

fn no_rep(form: QuadForm, target: &BigInt) -> Error {
    Error::NoRepresentation { form: form.display(), target: target.to_string() }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NonPrime(p))
    }
}

/// `q = x^2 + 4y^2` with `p ∤ x` when `p ≡ 1 mod 4`.
pub fn rep_x2_4y2(q: &BigInt, p: u64, mode: SumFourSquareMode) -> Result<QFRep> {
    check_prime(p)?;
    let form = QuadForm::SumFourSquare;
    if residue(q, 4) != 1 {
        return Err(no_rep(form, q));
    }
    let need_coprime = p % 4 == 1;
    let pb = BigInt::from(p);
    let (a, b) = search(q, 4, |a| {
        if need_coprime && (a % &pb).is_zero() {
            return None;
        }
        match mode {
            SumFourSquareMode::CoprimeOnly => Some(a.clone()),
            SumFourSquareMode::ENormalized => signed_with_residue(a, 4, 1),
        }
    })
    .ok_or_else(|| no_rep(form, q))?;
    let mut tags = Vec::new();
    if need_coprime {
        tags.push(NormTag::CoprimeToP);
    }
    if mode == SumFourSquareMode::ENormalized {
        tags.push(NormTag::OneModFour);
    }
    Ok(QFRep { form, a, b, target: q.clone(), p, tags })
}

/// `4q = c^2 + 27d^2` for `q = p^r`, with `c ≡ 1 mod 3` and `p ∤ c` when
/// `p ≡ 1 mod 3`, and `c = -2(-p)^(r/2)` when `p ≡ 2 mod 3`.
pub fn rep_4q_c2_27d2(p: u64, r: u32) -> Result<QFRep> {
    check_prime(p)?;
    let form = QuadForm::ScaledTwentySeven;
    let q = BigInt::from(p).pow(r);
    let target = &q * 4;
    match p % 3 {
        1 => {
            let pb = BigInt::from(p);
            let (a, b) = search(&target, 27, |c| {
                if (c % &pb).is_zero() {
                    None
                } else {
                    signed_with_residue(c, 3, 1)
                }
            })
            .ok_or_else(|| no_rep(form, &target))?;
            Ok(QFRep { form, a, b, target, p, tags: vec![NormTag::OneModThree, NormTag::CoprimeToP] })
        }
        2 => {
            if r % 2 == 1 {
                return Err(Error::OddExtensionForInertPrime { p, r });
            }
            let c = BigInt::from(-2) * (-BigInt::from(p)).pow(r / 2);
            let rest = &target - &c * &c;
            let d_sq: BigInt = &rest / 27;
            let d = d_sq.sqrt();
            if rest.is_negative() || &d_sq * 27 != rest || &d * &d != d_sq {
                return Err(no_rep(form, &target));
            }
            Ok(QFRep { form, a: c, b: d, target, p, tags: Vec::new() })
        }
        _ => Err(no_rep(form, &target)),
    }
}

/// `N = x^2 + 27y^2` with `x ≡ 1 mod 3` and `p ∤ x`.
pub fn rep_x2_27y2(n: &BigInt, p: u64) -> Result<QFRep> {
    check_prime(p)?;
    let form = QuadForm::SumTwentySevenSquare;
    let pb = BigInt::from(p);
    let (a, b) = search(n, 27, |x| {
        if (x % &pb).is_zero() {
            None
        } else {
            signed_with_residue(x, 3, 1)
        }
    })
    .ok_or_else(|| no_rep(form, n))?;
    Ok(QFRep { form, a, b, target: n.clone(), p, tags: vec![NormTag::OneModThree, NormTag::CoprimeToP] })
}

/// `q = u^2 + 2v^2` with `u ≡ 3 mod 4` and `p ∤ u` when `p ≡ 1, 3 mod 8`.
pub fn rep_u2_2v2(q: &BigInt, p: u64) -> Result<QFRep> {
    check_prime(p)?;
    let form = QuadForm::SumTwoSquare;
    if residue(q, 8) != 1 {
        return Err(no_rep(form, q));
    }
    let need_coprime = matches!(p % 8, 1 | 3);
    let pb = BigInt::from(p);
    let (a, b) = search(q, 2, |u| {
        if need_coprime && (u % &pb).is_zero() {
            None
        } else {
            signed_with_residue(u, 4, 3)
        }
    })
    .ok_or_else(|| no_rep(form, q))?;
    let mut tags = vec![NormTag::ThreeModFour];
    if need_coprime {
        tags.push(NormTag::CoprimeToP);
    }
    Ok(QFRep { form, a, b, target: q.clone(), p, tags })
}

/// For `p ≡ 1 mod 3`: whether `p = x^2 + 27y^2` is solvable, and whether 2 is
/// a cubic residue mod `p`. The two always agree.
pub fn gauss_euler_equivalence(p: u64) -> Result<(bool, bool)> {
    check_prime(p)?;
    if p % 3 != 1 {
        return Err(Error::HypothesisViolated(format!("p = {p} is not 1 mod 3")));
    }
    let pb = BigInt::from(p);
    let representable = !all_representations(&pb, 27).is_empty();
    Ok((representable, cubic_residue(2, p)?))
}

/// `p^t` as a `BigInt`.
pub fn big_pow(p: u64, t: u32) -> BigInt {
    BigInt::from(p).pow(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn pair(rep: &QFRep) -> (i64, i64) {
        (i64::try_from(&rep.a).unwrap(), i64::try_from(&rep.b).unwrap())
    }

    #[test]
    fn sum_four_square_examples() {
        let e17 = rep_x2_4y2(&big(17), 17, SumFourSquareMode::ENormalized).unwrap();
        assert_eq!(pair(&e17), (1, 2));
        let e5 = rep_x2_4y2(&big(5), 5, SumFourSquareMode::ENormalized).unwrap();
        assert_eq!(pair(&e5), (1, 1));
        let c625 = rep_x2_4y2(&big(625), 5, SumFourSquareMode::CoprimeOnly).unwrap();
        assert_eq!(pair(&c625), (7, 12));
        let e13 = rep_x2_4y2(&big(13), 13, SumFourSquareMode::ENormalized).unwrap();
        assert_eq!(pair(&e13), (-3, 1));
        let e9 = rep_x2_4y2(&big(9), 3, SumFourSquareMode::ENormalized).unwrap();
        assert_eq!(pair(&e9), (-3, 0));
        assert!(matches!(
            rep_x2_4y2(&big(7), 7, SumFourSquareMode::CoprimeOnly),
            Err(Error::NoRepresentation { .. })
        ));
        for rep in [e17, e5, c625, e13, e9] {
            assert!(rep.is_valid());
        }
    }

    #[test]
    fn scaled_twenty_seven_examples() {
        assert_eq!(pair(&rep_4q_c2_27d2(31, 1).unwrap()), (4, 2));
        assert_eq!(pair(&rep_4q_c2_27d2(13, 1).unwrap()), (-5, 1));
        assert_eq!(pair(&rep_4q_c2_27d2(2, 2).unwrap()), (4, 0));
        assert_eq!(pair(&rep_4q_c2_27d2(2, 4).unwrap()), (-8, 0));
        assert_eq!(pair(&rep_4q_c2_27d2(7, 1).unwrap()), (1, 1));
        assert_eq!(rep_4q_c2_27d2(5, 3).unwrap_err(), Error::OddExtensionForInertPrime { p: 5, r: 3 });
        assert!(matches!(rep_4q_c2_27d2(3, 2), Err(Error::NoRepresentation { .. })));
        assert!(rep_4q_c2_27d2(19, 1).unwrap().is_valid());
    }

    #[test]
    fn twenty_seven_examples() {
        assert_eq!(pair(&rep_x2_27y2(&big(31), 31).unwrap()), (-2, 1));
        assert_eq!(pair(&rep_x2_27y2(&big(43), 43).unwrap()), (4, 1));
        assert!(matches!(rep_x2_27y2(&big(7), 7), Err(Error::NoRepresentation { .. })));
        assert_eq!(pair(&rep_x2_27y2(&big(343), 7).unwrap()), (10, 3));
    }

    #[test]
    fn sum_two_square_examples() {
        assert_eq!(pair(&rep_u2_2v2(&big(17), 17).unwrap()), (3, 2));
        assert_eq!(pair(&rep_u2_2v2(&big(41), 41).unwrap()), (3, 4));
        assert_eq!(pair(&rep_u2_2v2(&big(73), 73).unwrap()), (-1, 6));
        assert_eq!(pair(&rep_u2_2v2(&big(25), 5).unwrap()), (-5, 0));
        assert_eq!(pair(&rep_u2_2v2(&big(81), 3).unwrap()), (7, 4));
        assert!(matches!(rep_u2_2v2(&big(13), 13), Err(Error::NoRepresentation { .. })));
    }

    #[test]
    fn gauss_euler_examples() {
        assert_eq!(gauss_euler_equivalence(31).unwrap(), (true, true));
        assert_eq!(gauss_euler_equivalence(7).unwrap(), (false, false));
        assert_eq!(gauss_euler_equivalence(43).unwrap(), (true, true));
        assert!(gauss_euler_equivalence(11).is_err());
    }

    #[test]
    fn gauss_criterion_below_500() {
        for p in (7..500u64).filter(|&p| is_prime(p) && p % 3 == 1) {
            let (rep, cubic) = gauss_euler_equivalence(p).unwrap();
            assert_eq!(rep, cubic, "p = {p}");
            assert_eq!(rep_x2_27y2(&big(p as i64), p).is_ok(), cubic, "p = {p}");
        }
    }

    #[test]
    fn e_normalized_is_unique_up_to_sign_of_b() {
        for p in (5..400u64).filter(|&p| is_prime(p) && p % 4 == 1) {
            for r in 1..=3u32 {
                let q = big_pow(p, r);
                if q > big(2_000_000) {
                    continue;
                }
                let admissible: Vec<_> = all_representations(&q, 4)
                    .into_iter()
                    .filter(|(a, _)| !(a % BigInt::from(p)).is_zero())
                    .collect();
                assert_eq!(admissible.len(), 1, "q = {q}: {admissible:?}");
                let rep = rep_x2_4y2(&q, p, SumFourSquareMode::ENormalized).unwrap();
                assert_eq!(rep.a.abs(), admissible[0].0);
                assert_eq!(rep.b, admissible[0].1);
            }
        }
    }

    #[test]
    fn scaled_form_doubles_the_twenty_seven_form() {
        for p in (7..500u64).filter(|&p| is_prime(p) && p % 3 == 1) {
            if let Ok(base) = rep_x2_27y2(&big(p as i64), p) {
                let scaled = rep_4q_c2_27d2(p, 1).unwrap();
                assert_eq!(scaled.a, &base.a * -2, "p = {p}");
                assert_eq!(scaled.b, &base.b * 2, "p = {p}");
            }
        }
    }
}
