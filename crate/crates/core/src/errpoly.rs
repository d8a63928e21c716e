//! Truncated polynomials in the three Pauli error probabilities `px`, `py`, `pz`.
//!
//! Every perturbative quantity in the crate (branch weights, acceptance
//! probabilities, fidelities, process-matrix entries) is an [`ErrorPoly`]: a
//! sparse map from exponent triples to real coefficients, truncated at a fixed
//! total degree. Products drop every monomial above the truncation order and
//! quotients are formal power series, so `(1 - 3px) / (1 - px)` at order 1 is
//! `1 - 2px`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficients smaller than this are dropped.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Highest truncation order a polynomial may carry.
pub const MAX_ORDER: u8 = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(u8, u8),
    #[error("series division by a polynomial with vanishing constant term")]
    VanishingSeries,
    #[error("truncation order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u8),
}

/// Exponents of `(px, py, pz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub [u8; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);
    pub const PX: Monomial = Monomial([1, 0, 0]);
    pub const PY: Monomial = Monomial([0, 1, 0]);
    pub const PZ: Monomial = Monomial([0, 0, 1]);

    pub fn degree(self) -> u8 {
        self.0.iter().sum()
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn eval(self, px: f64, py: f64, pz: f64) -> f64 {
        px.powi(self.0[0] as i32) * py.powi(self.0[1] as i32) * pz.powi(self.0[2] as i32)
    }

    /// All monomials of total degree at most `order`, sorted.
    pub fn up_to(order: u8) -> Vec<Monomial> {
        let mut out = Vec::new();
        for ex in 0..=order {
            for ey in 0..=order - ex {
                for ez in 0..=order - ex - ey {
                    out.push(Monomial([ex, ey, ez]));
                }
            }
        }
        out.sort();
        out
    }
}

/// A real polynomial in `px, py, pz` truncated at total degree `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorPoly {
    order: u8,
    terms: BTreeMap<Monomial, f64>,
}

impl ErrorPoly {
    pub fn zero(order: u8) -> Self {
        assert!(order <= MAX_ORDER, "truncation order {order} too large");
        ErrorPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(order: u8, value: f64) -> Self {
        let mut p = Self::zero(order);
        p.add_term(Monomial::ONE, value);
        p
    }

    pub fn one(order: u8) -> Self {
        Self::constant(order, 1.0)
    }

    pub fn px(order: u8) -> Self {
        Self::monomial(order, Monomial::PX, 1.0)
    }

    pub fn py(order: u8) -> Self {
        Self::monomial(order, Monomial::PY, 1.0)
    }

    pub fn pz(order: u8) -> Self {
        Self::monomial(order, Monomial::PZ, 1.0)
    }

    pub fn monomial(order: u8, m: Monomial, coeff: f64) -> Self {
        let mut p = Self::zero(order);
        p.add_term(m, coeff);
        p
    }

    /// `p0 = 1 - px - py - pz`, the no-error probability of one qubit slot.
    pub fn no_error(order: u8) -> Self {
        let mut p = Self::one(order);
        p.add_term(Monomial::PX, -1.0);
        p.add_term(Monomial::PY, -1.0);
        p.add_term(Monomial::PZ, -1.0);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, truncating
    /// and pruning as usual.
    pub fn from_terms<I>(order: u8, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        let mut p = Self::zero(order);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// Adds `coeff · m`, silently discarding monomials above the truncation order.
    pub fn add_term(&mut self, m: Monomial, coeff: f64) {
        if m.degree() > self.order || coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < DEFAULT_EPSILON {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: Monomial) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(Monomial::ONE)
    }

    /// First-order coefficients `[c_px, c_py, c_pz]`.
    pub fn linear(&self) -> [f64; 3] {
        [
            self.coeff(Monomial::PX),
            self.coeff(Monomial::PY),
            self.coeff(Monomial::PZ),
        ]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, f64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-truncates at a lower order.
    pub fn truncate(&self, order: u8) -> Self {
        Self::from_terms(order.min(self.order), self.terms())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_terms(self.order, self.terms().map(|(m, c)| (m, c * factor)))
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &ErrorPoly, factor: f64) {
        assert_eq!(self.order, other.order, "truncation order mismatch");
        for (m, c) in other.terms() {
            self.add_term(m, c * factor);
        }
    }

    /// Drops coefficients below `eps` in magnitude.
    pub fn pruned(&self, eps: f64) -> Self {
        ErrorPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() >= eps)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &ErrorPoly) -> Result<ErrorPoly, PolyError> {
        self.same_order(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ErrorPoly) -> Result<ErrorPoly, PolyError> {
        self.checked_add(&other.scale(-1.0))
    }

    pub fn checked_mul(&self, other: &ErrorPoly) -> Result<ErrorPoly, PolyError> {
        self.same_order(other)?;
        let mut out = ErrorPoly::zero(self.order);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Formal power-series quotient `self / den`, truncated at the shared order.
    pub fn div_series(&self, den: &ErrorPoly) -> Result<ErrorPoly, PolyError> {
        self.same_order(den)?;
        let d0 = den.constant_term();
        if d0.abs() < DEFAULT_EPSILON {
            return Err(PolyError::VanishingSeries);
        }
        // Solve q·den = num degree by degree.
        let mut q = ErrorPoly::zero(self.order);
        for m in Monomial::up_to(self.order) {
            let mut acc = self.coeff(m);
            for (dm, dc) in den.terms() {
                if dm == Monomial::ONE {
                    continue;
                }
                if let Some(rest) = monomial_quotient(m, dm) {
                    acc -= dc * q.coeff(rest);
                }
            }
            q.add_term(m, acc / d0);
        }
        Ok(q)
    }

    /// `self^n`, truncated.
    pub fn powi(&self, n: u32) -> ErrorPoly {
        let mut out = ErrorPoly::one(self.order);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn eval(&self, px: f64, py: f64, pz: f64) -> f64 {
        self.terms().map(|(m, c)| c * m.eval(px, py, pz)).sum()
    }

    /// Largest coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &ErrorPoly) -> f64 {
        let order = self.order.max(other.order);
        Monomial::up_to(order)
            .into_iter()
            .map(|m| (self.coeff(m) - other.coeff(m)).abs())
            .fold(0.0, f64::max)
    }

    fn same_order(&self, other: &ErrorPoly) -> Result<(), PolyError> {
        if self.order != other.order {
            Err(PolyError::OrderMismatch(self.order, other.order))
        } else {
            Ok(())
        }
    }

    /// Renders coefficients as small fractions where possible, e.g.
    /// `1 - 167/2 px - 71/2 py - 19 pz`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(m, _)| (m.degree(), std::cmp::Reverse(m.0)));
        for (m, c) in terms {
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            let vars = monomial_label(m);
            let coeff = match rational_approx(mag, 64, 1e-6) {
                Some((1, 1)) if !vars.is_empty() => String::new(),
                Some((n, 1)) => format!("{n}"),
                Some((n, d)) => format!("{n}/{d}"),
                None => format!("{mag:.6}"),
            };
            let body = match (coeff.is_empty(), vars.is_empty()) {
                (true, _) => vars,
                (false, true) => coeff,
                (false, false) => format!("{coeff} {vars}"),
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(&format!(" {sign} {body}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for ErrorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

fn monomial_label(m: Monomial) -> String {
    let names = ["px", "py", "pz"];
    let mut parts = Vec::new();
    for (name, &e) in names.iter().zip(m.0.iter()) {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join(" ")
}

fn monomial_quotient(m: Monomial, d: Monomial) -> Option<Monomial> {
    let mut out = [0u8; 3];
    for i in 0..3 {
        out[i] = m.0[i].checked_sub(d.0[i])?;
    }
    Some(Monomial(out))
}

/// Best rational approximation `n/d` with `d <= max_den` that is within `tol`
/// of `x`, found from the continued-fraction convergents of `x`.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..32 {
        let a = rest.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        if (h2 as f64 / k2 as f64 - x).abs() <= tol {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

impl Add for &ErrorPoly {
    type Output = ErrorPoly;
    fn add(self, rhs: &ErrorPoly) -> ErrorPoly {
        self.checked_add(rhs).expect("truncation order mismatch")
    }
}

impl Sub for &ErrorPoly {
    type Output = ErrorPoly;
    fn sub(self, rhs: &ErrorPoly) -> ErrorPoly {
        self.checked_sub(rhs).expect("truncation order mismatch")
    }
}

impl Mul for &ErrorPoly {
    type Output = ErrorPoly;
    fn mul(self, rhs: &ErrorPoly) -> ErrorPoly {
        self.checked_mul(rhs).expect("truncation order mismatch")
    }
}

impl Neg for &ErrorPoly {
    type Output = ErrorPoly;
    fn neg(self) -> ErrorPoly {
        self.scale(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: [u8; 3],
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRecord {
    order: u8,
    terms: Vec<TermRecord>,
}

impl Serialize for ErrorPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRecord {
            order: self.order,
            terms: self
                .terms()
                .map(|(m, coeff)| TermRecord {
                    exponents: m.0,
                    coeff,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ErrorPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = PolyRecord::deserialize(d)?;
        if rec.order > MAX_ORDER {
            return Err(serde::de::Error::custom(PolyError::OrderTooLarge(rec.order)));
        }
        Ok(ErrorPoly::from_terms(
            rec.order,
            rec.terms.into_iter().map(|t| (Monomial(t.exponents), t.coeff)),
        ))
    }
}

/// A complex-valued truncated polynomial, stored as real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoly {
    pub re: ErrorPoly,
    pub im: ErrorPoly,
}

impl ComplexPoly {
    pub fn zero(order: u8) -> Self {
        ComplexPoly {
            re: ErrorPoly::zero(order),
            im: ErrorPoly::zero(order),
        }
    }

    pub fn constant(order: u8, value: num_complex::Complex64) -> Self {
        ComplexPoly {
            re: ErrorPoly::constant(order, value.re),
            im: ErrorPoly::constant(order, value.im),
        }
    }

    pub fn order(&self) -> u8 {
        self.re.order()
    }

    pub fn conj(&self) -> Self {
        ComplexPoly {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `self += c · other` for a complex scalar `c`.
    pub fn add_scaled(&mut self, other: &ComplexPoly, c: num_complex::Complex64) {
        self.re.add_scaled(&other.re, c.re);
        self.re.add_scaled(&other.im, -c.im);
        self.im.add_scaled(&other.re, c.im);
        self.im.add_scaled(&other.im, c.re);
    }

    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        ComplexPoly {
            re: &(&self.re * &other.re) - &(&self.im * &other.im),
            im: &(&self.re * &other.im) + &(&self.im * &other.re),
        }
    }

    /// Series division by a real polynomial.
    pub fn div_real(&self, den: &ErrorPoly) -> Result<ComplexPoly, PolyError> {
        Ok(ComplexPoly {
            re: self.re.div_series(den)?,
            im: self.im.div_series(den)?,
        })
    }

    pub fn eval(&self, px: f64, py: f64, pz: f64) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.eval(px, py, pz), self.im.eval(px, py, pz))
    }

    pub fn constant_term(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.constant_term(), self.im.constant_term())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(order: u8, terms: &[([u8; 3], f64)]) -> ErrorPoly {
        ErrorPoly::from_terms(order, terms.iter().map(|(e, c)| (Monomial(*e), *c)))
    }

    #[test]
    fn addition_cancels() {
        let a = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -1.0)]);
        let b = ErrorPoly::px(1);
        assert_eq!(&a + &b, ErrorPoly::one(1));

        let z = poly(1, &[([0, 0, 0], 1.0), ([0, 0, 1], -2.0)]);
        assert_eq!(&ErrorPoly::zero(1) + &z, z);

        let c = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -1.0), ([0, 1, 0], -1.0)]);
        let d = poly(1, &[([1, 0, 0], 1.0), ([0, 1, 0], 1.0)]);
        assert_eq!(&c + &d, ErrorPoly::one(1));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = ErrorPoly::one(1);
        let b = ErrorPoly::one(2);
        assert_eq!(a.checked_add(&b), Err(PolyError::OrderMismatch(1, 2)));
        assert_eq!(a.checked_mul(&b), Err(PolyError::OrderMismatch(1, 2)));
        assert!(a.div_series(&b).is_err());
    }

    #[test]
    fn multiplication_truncates() {
        let a = poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], -1.0)]);
        assert_eq!(
            &a * &a,
            poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], -2.0), ([2, 0, 0], 1.0)])
        );
        let yz = poly(2, &[([0, 1, 1], 1.0)]);
        assert!((&ErrorPoly::px(2) * &yz).is_zero());
        let p0 = ErrorPoly::no_error(1);
        assert_eq!(
            &p0 * &p0,
            poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -2.0), ([0, 1, 0], -2.0), ([0, 0, 1], -2.0)])
        );
    }

    #[test]
    fn series_division() {
        let d = poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], -1.0)]);
        assert_eq!(d.div_series(&d).unwrap(), ErrorPoly::one(2));
        assert_eq!(
            ErrorPoly::one(2).div_series(&d).unwrap(),
            poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], 1.0), ([2, 0, 0], 1.0)])
        );

        // (1 - 3px)(1 + px + ...) truncated at order 1, and a numeric check.
        let n = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -3.0)]);
        let d1 = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -1.0)]);
        let q = n.div_series(&d1).unwrap();
        assert_eq!(q, poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -2.0)]));
        let p = 1e-4;
        let exact = (1.0 - 3.0 * p) / (1.0 - p);
        assert!((q.eval(p, 0.0, 0.0) - exact).abs() < 3.0 * p * p);
    }

    #[test]
    fn vanishing_denominator_is_an_error() {
        let d = ErrorPoly::px(1);
        assert_eq!(
            ErrorPoly::one(1).div_series(&d),
            Err(PolyError::VanishingSeries)
        );
    }

    #[test]
    fn evaluation() {
        let a = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -19.0), ([0, 1, 0], -5.0), ([0, 0, 1], -3.0)]);
        assert_eq!(a.eval(0.0, 0.0, 0.0), 1.0);
        let b = poly(1, &[([1, 0, 0], 1.0), ([0, 1, 0], 1.0)]);
        assert!((b.eval(0.01, 0.02, 0.5) - 0.03).abs() < 1e-15);
        let c = poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], -2.0), ([2, 0, 0], 1.0)]);
        assert!((c.eval(0.1, 0.0, 0.0) - 0.81).abs() < 1e-15);
    }

    #[test]
    fn tiny_coefficients_are_pruned() {
        let mut a = ErrorPoly::px(1);
        a.add_term(Monomial::PX, -1.0 + 1e-14);
        assert!(a.is_zero());
    }

    #[test]
    fn pretty_prints_fractions() {
        let p = poly(1, &[([0, 0, 0], 1.0), ([1, 0, 0], -83.5), ([0, 1, 0], -35.5), ([0, 0, 1], -19.0)]);
        assert_eq!(p.pretty(), "1 - 167/2 px - 71/2 py - 19 pz");
        let q = poly(2, &[([1, 1, 0], 0.25), ([2, 0, 0], -1.0)]);
        assert_eq!(q.pretty(), "-px^2 + 1/4 px py");
        assert_eq!(ErrorPoly::zero(1).pretty(), "0");
    }

    #[test]
    fn rational_reconstruction() {
        assert_eq!(rational_approx(149.0 / 4.0, 64, 1e-6), Some((149, 4)));
        assert_eq!(rational_approx(0.5, 64, 1e-6), Some((1, 2)));
        assert_eq!(rational_approx(std::f64::consts::PI, 64, 1e-9), None);
    }

    #[test]
    fn json_round_trip() {
        let p = poly(2, &[([0, 0, 0], 1.0), ([1, 0, 0], -2.5), ([0, 1, 1], 0.75)]);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"exponents\":[1,0,0]"));
        let back: ErrorPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly(order: u8) -> impl Strategy<Value = ErrorPoly> {
        let n = Monomial::up_to(order).len();
        prop::collection::vec(-3.0f64..3.0, n).prop_map(move |cs| {
            ErrorPoly::from_terms(order, Monomial::up_to(order).into_iter().zip(cs))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert!((&a * &b).max_abs_diff(&(&b * &a)) < 1e-12);
            prop_assert!((&(&a * &b) * &c).max_abs_diff(&(&a * &(&b * &c))) < 1e-10);
            prop_assert!((&a * &(&b + &c)).max_abs_diff(&(&(&a * &b) + &(&a * &c))) < 1e-12);
            prop_assert!((&(&a + &b) + &c).max_abs_diff(&(&a + &(&b + &c))) < 1e-12);
        }

        #[test]
        fn division_inverts_multiplication(n in arb_poly(2), mut d in arb_poly(2), d0 in 0.5f64..2.0) {
            d.add_term(Monomial::ONE, d0 - d.constant_term());
            let q = n.div_series(&d).unwrap();
            prop_assert!((&q * &d).max_abs_diff(&n) < 1e-9);
        }

        #[test]
        fn evaluation_is_multiplicative(a in arb_poly(1), b in arb_poly(1),
                                        px in 0.0f64..1e-4, py in 0.0f64..1e-4, pz in 0.0f64..1e-4) {
            let rhs = a.eval(px, py, pz) * b.eval(px, py, pz);
            let lift = |p: &ErrorPoly| ErrorPoly::from_terms(2, p.terms());
            let full = (&lift(&a) * &lift(&b)).eval(px, py, pz);
            prop_assert!((full - rhs).abs() < 1e-12);
            let truncated = (&a * &b).eval(px, py, pz);
            let p = px.max(py).max(pz);
            prop_assert!((truncated - rhs).abs() <= 100.0 * p * p + 1e-15);
        }
    }
}
