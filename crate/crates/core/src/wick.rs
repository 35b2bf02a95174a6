//! Single-mode bosonic operator algebra.
//!
//! Polynomials in `b` and `b†` are stored as maps from words to complex
//! coefficients. Normal ordering applies `b b† = b† b + 1` until every
//! creation operator stands left of every annihilation operator; the vacuum
//! expectation value is then the coefficient of the empty word.
//! [`substitute_affine`] rewrites a polynomial in the `a` frame into the frame
//! of `b = u₊a + u₋a† − iu₀`, and [`fock_oracle`] evaluates matrix elements
//! in a truncated number basis as an independent check.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perturbation::BogoliubovCoeffs;

/// Default bound on the number of terms any intermediate result may hold.
pub const DEFAULT_TERM_CAP: usize = 1 << 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ladder {
    /// Creation operator `b†`.
    Raise,
    /// Annihilation operator `b`.
    Lower,
}

impl Ladder {
    pub fn adjoint(self) -> Self {
        match self {
            Ladder::Raise => Ladder::Lower,
            Ladder::Lower => Ladder::Raise,
        }
    }
}

/// Ordered product of ladder operators; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LadderWord(Vec<Ladder>);

impl LadderWord {
    pub fn identity() -> Self {
        LadderWord(Vec::new())
    }

    pub fn new(symbols: Vec<Ladder>) -> Self {
        LadderWord(symbols)
    }

    /// `b†^m b^n`.
    pub fn normal(m: usize, n: usize) -> Self {
        let mut s = vec![Ladder::Raise; m];
        s.extend(std::iter::repeat_n(Ladder::Lower, n));
        LadderWord(s)
    }

    pub fn symbols(&self) -> &[Ladder] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when no `Lower` precedes a `Raise`.
    pub fn is_normal_ordered(&self) -> bool {
        !self.0.windows(2).any(|w| w == [Ladder::Lower, Ladder::Raise])
    }

    pub fn adjoint(&self) -> Self {
        LadderWord(self.0.iter().rev().map(|s| s.adjoint()).collect())
    }

    fn concat(&self, other: &LadderWord) -> Self {
        let mut s = Vec::with_capacity(self.len() + other.len());
        s.extend_from_slice(&self.0);
        s.extend_from_slice(&other.0);
        LadderWord(s)
    }
}

impl fmt::Display for LadderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut rest = &self.0[..];
        while let Some(&sym) = rest.first() {
            let run = rest.iter().take_while(|&&s| s == sym).count();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = match sym {
                Ladder::Raise => "b†",
                Ladder::Lower => "b",
            };
            if run == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{run}")?;
            }
            rest = &rest[run..];
        }
        Ok(())
    }
}

/// Normal-ordered polynomial keyed by `(m, n)` for `b†^m b^n`.
#[derive(Debug, Clone, Default)]
struct NormalForm(BTreeMap<(u32, u32), Complex64>);

impl NormalForm {
    fn identity() -> Self {
        NormalForm(BTreeMap::from([((0, 0), ONE)]))
    }

    /// `self · b`.
    fn times_lower(&self) -> Self {
        NormalForm(self.0.iter().map(|(&(m, n), &c)| ((m, n + 1), c)).collect())
    }

    /// `self · b†`, using `b^n b† = b† b^n + n b^(n−1)`.
    fn times_raise(&self) -> Self {
        let mut out = NormalForm::default();
        for (&(m, n), &c) in &self.0 {
            out.accumulate((m + 1, n), c);
            if n > 0 {
                out.accumulate((m, n - 1), c * n as f64);
            }
        }
        out
    }

    fn accumulate(&mut self, key: (u32, u32), c: Complex64) {
        *self.0.entry(key).or_insert(ZERO) += c;
    }

    fn add_scaled(&mut self, other: &NormalForm, scale: Complex64) {
        if scale == ZERO {
            return;
        }
        for (&k, &c) in &other.0 {
            self.accumulate(k, c * scale);
        }
    }

    fn check(&self, cap: usize) -> Result<()> {
        if self.0.len() > cap {
            Err(Error::TermOverflow { cap })
        } else {
            Ok(())
        }
    }

    fn into_poly(self) -> OperatorPoly {
        let mut p = OperatorPoly::zero();
        for ((m, n), c) in self.0 {
            p.add_term(LadderWord::normal(m as usize, n as usize), c);
        }
        p
    }
}

/// Sum of complex-weighted ladder words. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorPoly {
    terms: BTreeMap<LadderWord, Complex64>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        OperatorPoly::default()
    }

    pub fn identity() -> Self {
        Self::scalar(ONE)
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::from_word(LadderWord::identity(), c)
    }

    pub fn from_word(word: LadderWord, c: Complex64) -> Self {
        let mut p = OperatorPoly::zero();
        p.add_term(word, c);
        p
    }

    /// `b`.
    pub fn lower() -> Self {
        Self::from_word(LadderWord(vec![Ladder::Lower]), ONE)
    }

    /// `b†`.
    pub fn raise() -> Self {
        Self::from_word(LadderWord(vec![Ladder::Raise]), ONE)
    }

    /// Position quadrature `(b + b†)/√2`.
    pub fn position() -> Self {
        (Self::lower() + Self::raise()) * Complex64::from(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// Momentum quadrature `i(b† − b)/√2`.
    pub fn momentum() -> Self {
        (Self::raise() - Self::lower()) * (I * std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn add_term(&mut self, word: LadderWord, c: Complex64) {
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LadderWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &LadderWord) -> Complex64 {
        self.terms.get(word).copied().unwrap_or(ZERO)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Length of the longest word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(LadderWord::len).max().unwrap_or(0)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(LadderWord::is_normal_ordered)
    }

    /// Hermitian adjoint: words reversed with `b ↔ b†`, coefficients conjugated.
    pub fn adjoint(&self) -> Self {
        let mut p = OperatorPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.adjoint(), c.conj());
        }
        p
    }

    /// Integer power.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(OperatorPoly::identity(), |acc, _| &acc * self)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &OperatorPoly) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn normal_order(&self) -> Result<OperatorPoly> {
        self.normal_order_with_cap(DEFAULT_TERM_CAP)
    }

    pub fn normal_order_with_cap(&self, cap: usize) -> Result<OperatorPoly> {
        let mut total = NormalForm::default();
        for (word, &c) in &self.terms {
            let mut acc = NormalForm::identity();
            for sym in word.symbols() {
                acc = match sym {
                    Ladder::Lower => acc.times_lower(),
                    Ladder::Raise => acc.times_raise(),
                };
                acc.check(cap)?;
            }
            total.add_scaled(&acc, c);
            total.check(cap)?;
        }
        Ok(total.into_poly())
    }

    /// `⟨0|p|0⟩`: the identity coefficient after normal ordering.
    pub fn vacuum_expectation(&self) -> Result<Complex64> {
        Ok(self.normal_order()?.coefficient(&LadderWord::identity()))
    }

    /// Normal-ordered text dump, one `coeff * b†^m b^n` term per summand.
    pub fn to_text(&self) -> Result<String> {
        Ok(self.normal_order()?.to_string())
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i) * {}", c.re, c.im, w)?;
        }
        Ok(())
    }
}

impl AddAssign<&OperatorPoly> for OperatorPoly {
    fn add_assign(&mut self, rhs: &OperatorPoly) {
        for (w, &c) in &rhs.terms {
            self.add_term(w.clone(), c);
        }
    }
}

impl Add for OperatorPoly {
    type Output = OperatorPoly;
    fn add(mut self, rhs: OperatorPoly) -> OperatorPoly {
        self += &rhs;
        self
    }
}

impl Add<&OperatorPoly> for &OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        self * Complex64::from(-1.0)
    }
}

impl Sub for OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: OperatorPoly) -> OperatorPoly {
        self + (-rhs)
    }
}

impl Sub<&OperatorPoly> for &OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul<Complex64> for OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: Complex64) -> OperatorPoly {
        let mut p = OperatorPoly::zero();
        for (w, c) in self.terms {
            p.add_term(w, c * rhs);
        }
        p
    }
}

impl Mul<f64> for OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: f64) -> OperatorPoly {
        self * Complex64::from(rhs)
    }
}

impl Mul<&OperatorPoly> for &OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        let mut p = OperatorPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                p.add_term(wa.concat(wb), ca * cb);
            }
        }
        p
    }
}

impl Mul for OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: OperatorPoly) -> OperatorPoly {
        &self * &rhs
    }
}

/// Rewrites a polynomial in `a, a†` as a normal-ordered polynomial in the
/// quasiparticle operators `b = u₊a + u₋a† − iu₀`.
///
/// The inverse map is `a = u₊b − u₋b† + iu₀(u₊ + u₋)`, valid when
/// `u₊² − u₋² = 1`.
pub fn substitute_affine(p: &OperatorPoly, c: &BogoliubovCoeffs) -> Result<OperatorPoly> {
    substitute_affine_with_cap(p, c, DEFAULT_TERM_CAP)
}

pub fn substitute_affine_with_cap(p: &OperatorPoly, c: &BogoliubovCoeffs, cap: usize) -> Result<OperatorPoly> {
    let norm = c.u_plus * c.u_plus - c.u_minus * c.u_minus;
    // u₊² and u₋² can each be ~10⁷ for large islands; compare at their scale
    let scale = (c.u_plus * c.u_plus + c.u_minus * c.u_minus).max(1.0);
    if !((norm - 1.0).abs() <= 1e-10 * scale) {
        return Err(Error::NonSymplectic { norm });
    }
    let shift = I * (c.u_0 * (c.u_plus + c.u_minus));
    let up = Complex64::from(c.u_plus);
    let um = Complex64::from(c.u_minus);
    let mut total = NormalForm::default();
    for (word, &coeff) in &p.terms {
        let mut acc = NormalForm::identity();
        for sym in word.symbols() {
            let lowered = acc.times_lower();
            let raised = acc.times_raise();
            let mut next = NormalForm::default();
            match sym {
                // a → u₊b − u₋b† + iu₀(u₊+u₋)
                Ladder::Lower => {
                    next.add_scaled(&lowered, up);
                    next.add_scaled(&raised, -um);
                    next.add_scaled(&acc, shift);
                }
                // a† → u₊b† − u₋b − iu₀(u₊+u₋)
                Ladder::Raise => {
                    next.add_scaled(&raised, up);
                    next.add_scaled(&lowered, -um);
                    next.add_scaled(&acc, -shift);
                }
            }
            next.check(cap)?;
            acc = next;
        }
        total.add_scaled(&acc, coeff);
        total.check(cap)?;
    }
    Ok(total.into_poly())
}

fn apply_word(word: &LadderWord, v: &mut Vec<Complex64>) {
    let dim = v.len();
    for sym in word.symbols().iter().rev() {
        let mut out = vec![ZERO; dim];
        match sym {
            Ladder::Lower => {
                for n in 1..dim {
                    out[n - 1] = v[n] * (n as f64).sqrt();
                }
            }
            Ladder::Raise => {
                for n in 0..dim - 1 {
                    out[n + 1] = v[n] * ((n + 1) as f64).sqrt();
                }
            }
        }
        *v = out;
    }
}

/// Dense matrix of `p` with `b` truncated to the lowest `dim` number states.
pub fn fock_matrix(p: &OperatorPoly, dim: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        for (word, &c) in p.terms() {
            let mut v = vec![ZERO; dim];
            v[col] = ONE;
            apply_word(word, &mut v);
            for row in 0..dim {
                m[(row, col)] += c * v[row];
            }
        }
    }
    m
}

/// Expectation value of `p` in the state `psi` (given in the number basis),
/// with operators truncated to `psi.len()` levels.
pub fn fock_expectation(p: &OperatorPoly, psi: &[Complex64]) -> Complex64 {
    let mut total = ZERO;
    for (word, &c) in p.terms() {
        let mut v = psi.to_vec();
        apply_word(word, &mut v);
        total += c * psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<Complex64>();
    }
    total
}

/// `⟨0|p|0⟩` from truncated Fock matrices, doubling `dim` until two successive
/// truncations agree to 1e-10.
pub fn fock_oracle(p: &OperatorPoly, dim: usize) -> Result<Complex64> {
    let vacuum = |d: usize| {
        let mut psi = vec![ZERO; d];
        psi[0] = ONE;
        fock_expectation(p, &psi)
    };
    let mut d = dim.max(2);
    let mut current = vacuum(d);
    for _ in 0..12 {
        let next = vacuum(2 * d);
        let change = (next - current).norm();
        if change <= 1e-10 * next.norm().max(1.0) {
            return Ok(next);
        }
        d *= 2;
        current = next;
    }
    Err(Error::OracleUnstable {
        dim: d / 2,
        next: d,
        change: (vacuum(d) - vacuum(d / 2)).norm(),
    })
}

/// Random polynomial with up to `max_terms` words of length at most
/// `max_degree` and coefficients in the unit square.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, max_terms: usize) -> OperatorPoly {
    let mut p = OperatorPoly::zero();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let len = rng.gen_range(0..=max_degree);
        let word = LadderWord::new(
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Ladder::Raise
                    } else {
                        Ladder::Lower
                    }
                })
                .collect(),
        );
        p.add_term(word, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b() -> OperatorPoly {
        OperatorPoly::lower()
    }
    fn bd() -> OperatorPoly {
        OperatorPoly::raise()
    }
    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn canonical_commutator() {
        let p = (&b() * &bd()).normal_order().unwrap();
        let expected = &(&bd() * &b()) + &OperatorPoly::identity();
        assert_eq!(p, expected);
    }

    #[test]
    fn square_of_position_like_sum() {
        let x = &b() + &bd();
        let p = (&x * &x).normal_order().unwrap();
        assert_eq!(p.coefficient(&LadderWord::normal(2, 0)), c(1.0));
        assert_eq!(p.coefficient(&LadderWord::normal(1, 1)), c(2.0));
        assert_eq!(p.coefficient(&LadderWord::normal(0, 2)), c(1.0));
        assert_eq!(p.coefficient(&LadderWord::identity()), c(1.0));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn simple_vacuum_values() {
        assert_eq!((&b() * &bd()).vacuum_expectation().unwrap(), c(1.0));
        assert_eq!((&bd() * &b()).vacuum_expectation().unwrap(), c(0.0));
        let x = &b() + &bd();
        assert_eq!(x.pow(4).vacuum_expectation().unwrap(), c(3.0));
        // (2k−1)!! pairings
        assert_eq!(x.pow(6).vacuum_expectation().unwrap(), c(15.0));
    }

    #[test]
    fn fock_oracle_trivial_cases() {
        assert_eq!(fock_oracle(&OperatorPoly::identity(), 4).unwrap(), c(1.0));
        assert_eq!(fock_oracle(&bd(), 4).unwrap(), c(0.0));
        assert!((fock_oracle(&(&b() + &bd()).pow(4), 4).unwrap() - c(3.0)).norm() < 1e-12);
    }

    #[test]
    fn term_cap_is_enforced() {
        let x = &b() + &bd();
        assert!(matches!(
            x.pow(8).normal_order_with_cap(5),
            Err(Error::TermOverflow { cap: 5 })
        ));
    }

    #[test]
    fn normal_order_preserves_fock_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let dim = 64;
        for _ in 0..50 {
            let p = random_polynomial(&mut rng, 6, 6);
            let q = p.normal_order().unwrap();
            assert!(q.is_normal_ordered());
            let (mp, mq) = (fock_matrix(&p, dim), fock_matrix(&q, dim));
            // rows/cols beyond dim − degree feel the truncation
            let safe = dim - p.degree();
            for r in 0..safe {
                for col in 0..safe {
                    assert!((mp[(r, col)] - mq[(r, col)]).norm() < 1e-12 * (1.0 + mp[(r, col)].norm()));
                }
            }
        }
    }

    #[test]
    fn vev_matches_oracle_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let p = random_polynomial(&mut rng, 6, 8);
            let fast = p.vacuum_expectation().unwrap();
            let slow = fock_oracle(&p, 8).unwrap();
            assert!((fast - slow).norm() < 1e-9);
        }
    }

    #[test]
    fn text_dump() {
        let x = &b() + &bd();
        let text = (&x * &x).to_text().unwrap();
        assert_eq!(text, "(1+0i) * 1 + (1+0i) * b†^2 + (2+0i) * b† b + (1+0i) * b^2");
        assert_eq!(OperatorPoly::zero().to_string(), "0");
    }

    fn squeeze(u_plus: f64, u_0: f64) -> BogoliubovCoeffs {
        BogoliubovCoeffs {
            u_plus,
            u_minus: -(u_plus * u_plus - 1.0).sqrt(),
            u_0,
            epsilon: 1.0,
        }
    }

    #[test]
    fn displacement_only_frame() {
        let coeffs = BogoliubovCoeffs {
            u_plus: 1.0,
            u_minus: 0.0,
            u_0: 0.7,
            epsilon: 1.0,
        };
        let a = substitute_affine(&b(), &coeffs).unwrap();
        assert_eq!(a.vacuum_expectation().unwrap(), Complex64::new(0.0, 0.7));
    }

    #[test]
    fn squeezed_vacuum_occupation() {
        let coeffs = squeeze(1.3, 0.0);
        let n = substitute_affine(&(&bd() * &b()), &coeffs).unwrap();
        let expected = coeffs.u_minus * coeffs.u_minus;
        assert!((n.vacuum_expectation().unwrap() - c(expected)).norm() < 1e-14);
    }

    #[test]
    fn substitution_preserves_commutator() {
        for coeffs in [squeeze(1.0, 0.0), squeeze(2.5, 0.3), squeeze(7.0, -1.1)] {
            let comm = b().commutator(&bd());
            let out = substitute_affine(&comm, &coeffs).unwrap();
            assert!(out.len() == 1);
            assert!((out.coefficient(&LadderWord::identity()) - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_symplectic() {
        let coeffs = BogoliubovCoeffs {
            u_plus: 1.0,
            u_minus: 0.5,
            u_0: 0.0,
            epsilon: 1.0,
        };
        assert!(matches!(
            substitute_affine(&b(), &coeffs),
            Err(Error::NonSymplectic { .. })
        ));
    }

    /// Vacuum of `b = u₊a + u₋a† − iu₀` in the `a` number basis from the
    /// recursion `u₊√(n+1)ψ_{n+1} = iu₀ψ_n − u₋√n ψ_{n−1}`.
    pub(crate) fn quasiparticle_vacuum(coeffs: &BogoliubovCoeffs, dim: usize) -> Vec<Complex64> {
        let mut psi = vec![ZERO; dim];
        psi[0] = ONE;
        for n in 0..dim - 1 {
            let prev = if n > 0 {
                psi[n - 1] * (coeffs.u_minus * (n as f64).sqrt())
            } else {
                ZERO
            };
            psi[n + 1] = (I * coeffs.u_0 * psi[n] - prev) / (coeffs.u_plus * ((n + 1) as f64).sqrt());
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        psi.iter().map(|z| z / norm).collect()
    }

    #[test]
    fn substitution_matches_numerical_vacuum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for coeffs in [
            squeeze(1.0, 0.4),
            squeeze(1.2, 0.0),
            squeeze(1.5, -0.6),
            squeeze(2.0, 0.8),
        ] {
            let psi = quasiparticle_vacuum(&coeffs, 1000);
            for _ in 0..20 {
                let p = random_polynomial(&mut rng, 6, 6);
                let symbolic = substitute_affine(&p, &coeffs).unwrap().vacuum_expectation().unwrap();
                let numeric = fock_expectation(&p, &psi);
                assert!((symbolic - numeric).norm() < 1e-9, "{symbolic} vs {numeric}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normal_order_is_idempotent(seed in any::<u64>()) {
            let p = random_polynomial(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
            let once = p.normal_order().unwrap();
            prop_assert_eq!(once.normal_order().unwrap(), once);
        }

        #[test]
        fn vev_is_linear(seed in any::<u64>(), ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, q) = (random_polynomial(&mut rng, 5, 5), random_polynomial(&mut rng, 5, 5));
            let (alpha, beta) = (Complex64::new(ar, ai), Complex64::new(br, 0.0));
            let lhs = (p.clone() * alpha + q.clone() * beta).vacuum_expectation().unwrap();
            let rhs = alpha * p.vacuum_expectation().unwrap() + beta * q.vacuum_expectation().unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn vev_of_adjoint_is_conjugate(seed in any::<u64>()) {
            let p = random_polynomial(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
            let a = p.adjoint().vacuum_expectation().unwrap();
            let b = p.vacuum_expectation().unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }
}
