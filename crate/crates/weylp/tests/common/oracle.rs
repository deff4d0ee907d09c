//! Independent char-0 oracle for univariate operator identities.
//!
//! Operators are never multiplied here. A word of generators acts on integer
//! Laurent polynomials by plain composition (differentiate, multiply), and a
//! normal form is recovered from the action alone by solving the triangular
//! falling-factorial system
//!
//!   F(x^m) = sum_k fall(m, k) c_k(x) x^{m-k},    m = 0, 1, 2, ...
//!
//! Over the integers the action is faithful, so a normal form solved this
//! way is the ground truth; reducing its coefficients mod p^e gives the
//! expected value of the corresponding char-p computation. None of this
//! shares a code path with the crate's Leibniz-rule multiplication.

use std::collections::BTreeMap;

use weylp::chart::Chart;
use weylp::diffop::DiffOperator;
use weylp::localized::LocalizedFunction;
use weylp::poly::{Multidegree, Polynomial};

/// Integer Laurent polynomial in one variable.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZPoly {
    terms: BTreeMap<i64, i128>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly::default()
    }

    pub fn constant(c: i128) -> Self {
        let mut p = ZPoly::zero();
        p.add_term(0, c);
        p
    }

    pub fn monomial(exp: i64, c: i128) -> Self {
        let mut p = ZPoly::zero();
        p.add_term(exp, c);
        p
    }

    pub fn var() -> Self {
        ZPoly::monomial(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    fn add_term(&mut self, exp: i64, c: i128) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ZPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                out.add_term(ea + eb, ca.checked_mul(cb).expect("oracle overflow"));
            }
        }
        out
    }

    pub fn scale(&self, c: i128) -> Self {
        let mut out = ZPoly::zero();
        for (e, cc) in self.terms() {
            out.add_term(e, cc.checked_mul(c).expect("oracle overflow"));
        }
        out
    }

    /// d/dx, valid on Laurent exponents.
    pub fn diff(&self) -> Self {
        let mut out = ZPoly::zero();
        for (e, c) in self.terms() {
            if e != 0 {
                out.add_term(e - 1, c.checked_mul(e as i128).expect("oracle overflow"));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = ZPoly::constant(1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact division by an integer; panics if not exact (the solver relies
    /// on exactness of the triangular system).
    fn div_exact(&self, d: i128) -> Self {
        let mut out = ZPoly::zero();
        for (e, c) in self.terms() {
            assert_eq!(c % d, 0, "inexact division in oracle solve");
            out.add_term(e, c / d);
        }
        out
    }
}

/// One generator in a word; the word acts by composition, leftmost last.
#[derive(Clone, Debug)]
pub enum Gen {
    Diff,
    Mul(ZPoly),
}

pub fn mul_x() -> Gen {
    Gen::Mul(ZPoly::var())
}

pub fn mul_poly(p: ZPoly) -> Gen {
    Gen::Mul(p)
}

/// Apply the word to a polynomial: word[last] acts first.
pub fn act_word(word: &[Gen], input: &ZPoly) -> ZPoly {
    let mut value = input.clone();
    for generator in word.iter().rev() {
        value = match generator {
            Gen::Diff => value.diff(),
            Gen::Mul(p) => p.mul(&value),
        };
    }
    value
}

/// Repeat a subword k times.
pub fn repeat(word: &[Gen], k: u32) -> Vec<Gen> {
    let mut out = Vec::new();
    for _ in 0..k {
        out.extend(word.iter().cloned());
    }
    out
}

/// Normal form sum_k c_k(x) d^k with integer Laurent coefficients.
/// Equality ignores trailing zero coefficients.
#[derive(Clone, Debug, Eq)]
pub struct ZOp {
    /// coefficient of d^k at index k
    pub coeffs: Vec<ZPoly>,
}

impl PartialEq for ZOp {
    fn eq(&self, other: &Self) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl ZOp {
    pub fn act(&self, input: &ZPoly) -> ZPoly {
        let mut value = ZPoly::zero();
        let mut derivative = input.clone();
        for c in &self.coeffs {
            value = value.add(&c.mul(&derivative));
            derivative = derivative.diff();
        }
        value
    }

    pub fn coeff(&self, k: usize) -> ZPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(ZPoly::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).sub(&other.coeff(k)))
            .collect();
        ZOp { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Reduce coefficients mod p^e into a crate operator over a univariate
    /// chart. Negative exponents turn into denominator powers, so the chart
    /// must be localized at x1 when they occur.
    pub fn reduce(&self, chart: &Chart) -> DiffOperator {
        assert_eq!(chart.num_vars(), 1);
        let ring = chart.ring();
        let modulus = ring.modulus() as i128;
        let mut acc = DiffOperator::zero(chart);
        for (k, c) in self.coeffs.iter().enumerate() {
            for (e, v) in c.terms() {
                let residue = (((v % modulus) + modulus) % modulus) as u64;
                if residue == 0 {
                    continue;
                }
                let coeff = if e >= 0 {
                    let num =
                        Polynomial::monomial(ring, 1, Multidegree::new(vec![e as u32]), residue);
                    LocalizedFunction::new(chart.clone(), num, 0).unwrap()
                } else {
                    assert!(
                        !chart.is_affine(),
                        "negative exponent needs a localized chart"
                    );
                    let num = Polynomial::constant(ring, 1, residue);
                    LocalizedFunction::new(chart.clone(), num, (-e) as u32).unwrap()
                };
                let term = DiffOperator::monomial(coeff, Multidegree::new(vec![k as u32]));
                acc = acc.add(&term).unwrap();
            }
        }
        acc
    }
}

/// Falling factorial m (m-1) ... (m-k+1) on integer (possibly negative) m.
pub fn falling(m: i64, k: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..k as i64 {
        acc = acc.checked_mul((m - j) as i128).expect("oracle overflow");
    }
    acc
}

pub fn factorial(k: u32) -> i128 {
    falling(k as i64, k)
}

/// Binomial coefficient by the factorial formula (exact integer division),
/// deliberately not the Pascal recurrence the crate uses.
pub fn binomial(n: u32, k: u32) -> i128 {
    assert!(k <= n);
    let num = falling(n as i64, k);
    let den = factorial(k);
    assert_eq!(num % den, 0);
    num / den
}

/// Recover the normal form of a linear action of order <= `order_bound` by
/// the triangular solve, then verify the result against the action on extra
/// monomials. Panics if the action is not an operator of that order - the
/// point of the oracle is to fail loudly.
pub fn normal_form_from_action(apply: impl Fn(&ZPoly) -> ZPoly, order_bound: u32) -> ZOp {
    let mut coeffs: Vec<ZPoly> = Vec::with_capacity(order_bound as usize + 1);
    for m in 0..=order_bound {
        let image = apply(&ZPoly::monomial(m as i64, 1));
        // subtract the contributions of lower-order coefficients
        let mut rest = image;
        for (k, c) in coeffs.iter().enumerate() {
            let factor = falling(m as i64, k as u32);
            let shifted = c.mul(&ZPoly::monomial(m as i64 - k as i64, factor));
            rest = rest.sub(&shifted);
        }
        coeffs.push(rest.div_exact(factorial(m)));
    }
    let op = ZOp { coeffs };
    for m in 0..=(order_bound as i64 + 4) {
        let probe = ZPoly::monomial(m, 1);
        assert_eq!(
            op.act(&probe),
            apply(&probe),
            "action disagrees at x^{m}: not an operator of order <= {order_bound}"
        );
    }
    op
}

/// Normal form of a word, solved from its action.
pub fn normal_form_of_word(word: &[Gen], order_bound: u32) -> ZOp {
    normal_form_from_action(|h| act_word(word, h), order_bound)
}
