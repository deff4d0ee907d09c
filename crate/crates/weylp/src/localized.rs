//! Functions on a localized chart: fractions g/f^m with a fixed denominator f.
//!
//! Over e = 1 every value is kept minimal (f never exactly divides the
//! numerator while the denominator power is positive). Over e = 2 no
//! minimization is attempted; equality is by cross-multiplication, which is
//! sound because f has a unit leading coefficient and is therefore a
//! nonzerodivisor at both levels.

use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::{Multidegree, Polynomial};

#[derive(Clone, Debug)]
pub struct LocalizedFunction {
    chart: Chart,
    num: Polynomial,
    denom_pow: u32,
}

impl LocalizedFunction {
    /// numerator / f^denom_pow, normalized.
    pub fn new(chart: Chart, num: Polynomial, denom_pow: u32) -> Result<Self> {
        if num.ring() != chart.ring() || num.num_vars() != chart.num_vars() {
            return Err(Error::ChartMismatch);
        }
        let mut v = LocalizedFunction {
            chart,
            num,
            denom_pow,
        };
        v.normalize();
        Ok(v)
    }

    fn raw(chart: &Chart, num: Polynomial, denom_pow: u32) -> Self {
        let mut v = LocalizedFunction {
            chart: chart.clone(),
            num,
            denom_pow,
        };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.num.is_zero() || self.chart.is_affine() {
            self.denom_pow = 0;
            return;
        }
        if self.chart.e() != 1 {
            // no minimization over Z/p^2: divisibility testing by a
            // non-unit-coefficient quotient is not meaningful there
            return;
        }
        let f = self.chart.denominator();
        while self.denom_pow > 0 {
            match self.num.exact_div(f) {
                Ok(q) => {
                    self.num = q;
                    self.denom_pow -= 1;
                }
                Err(_) => break,
            }
        }
    }

    pub fn zero(chart: &Chart) -> Self {
        LocalizedFunction {
            chart: chart.clone(),
            num: Polynomial::zero(chart.ring(), chart.num_vars()),
            denom_pow: 0,
        }
    }

    pub fn one(chart: &Chart) -> Self {
        LocalizedFunction::constant(chart, 1)
    }

    pub fn constant(chart: &Chart, c: u64) -> Self {
        LocalizedFunction {
            chart: chart.clone(),
            num: Polynomial::constant(chart.ring(), chart.num_vars(), c),
            denom_pow: 0,
        }
    }

    pub fn constant_i64(chart: &Chart, c: i64) -> Self {
        LocalizedFunction::constant(chart, chart.ring().from_i64(c))
    }

    /// The coordinate function x_i (0-based).
    pub fn var(chart: &Chart, i: usize) -> Self {
        LocalizedFunction {
            chart: chart.clone(),
            num: Polynomial::var(chart.ring(), chart.num_vars(), i),
            denom_pow: 0,
        }
    }

    pub fn from_polynomial(chart: &Chart, num: Polynomial) -> Result<Self> {
        LocalizedFunction::new(chart.clone(), num, 0)
    }

    /// 1/f^m (normalizes to 1 on affine charts).
    pub fn finv_pow(chart: &Chart, m: u32) -> Self {
        LocalizedFunction::raw(chart, Polynomial::one(chart.ring(), chart.num_vars()), m)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom_pow(&self) -> u32 {
        self.denom_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.denom_pow == 0 && self.num.is_one()
    }

    /// Constant term if the value is a polynomial constant.
    pub fn as_constant(&self) -> Option<u64> {
        if self.denom_pow == 0 && self.num.num_terms() <= 1 {
            if self.num.is_zero() {
                Some(0)
            } else {
                self.num
                    .terms()
                    .next()
                    .filter(|(m, _)| m.is_zero())
                    .map(|(_, c)| c)
            }
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.add_raw(other))
    }

    pub(crate) fn add_raw(&self, other: &Self) -> Self {
        let m = self.denom_pow.max(other.denom_pow);
        let f = self.chart.denominator();
        let a = self.num.mul_raw(&f.pow(m - self.denom_pow));
        let b = other.num.mul_raw(&f.pow(m - other.denom_pow));
        LocalizedFunction::raw(&self.chart, a.add_raw(&b), m)
    }

    pub fn neg(&self) -> Self {
        LocalizedFunction {
            chart: self.chart.clone(),
            num: self.num.neg(),
            denom_pow: self.denom_pow,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.sub_raw(other))
    }

    pub(crate) fn sub_raw(&self, other: &Self) -> Self {
        self.add_raw(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        LocalizedFunction::raw(
            &self.chart,
            self.num.mul_raw(&other.num),
            self.denom_pow + other.denom_pow,
        )
    }

    pub fn scale(&self, c: u64) -> Self {
        LocalizedFunction::raw(&self.chart, self.num.scale(c), self.denom_pow)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LocalizedFunction::one(&self.chart);
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    /// Derivation d/dx_i by the quotient rule, minimized afterwards.
    pub fn partial(&self, i: usize) -> Self {
        if self.denom_pow == 0 {
            return LocalizedFunction::raw(&self.chart, self.num.partial(i), 0);
        }
        let f = self.chart.denominator();
        let m = self.denom_pow;
        // (g' f - m g f') / f^{m+1}
        let lead = self.num.partial(i).mul_raw(f);
        let correction = self
            .num
            .mul_raw(&f.partial(i))
            .scale((m as u64) % self.chart.ring().modulus());
        LocalizedFunction::raw(&self.chart, lead.sub_raw(&correction), m + 1)
    }

    /// Iterated partials along a multidegree.
    pub fn partial_multi(&self, t: &Multidegree) -> Self {
        let mut out = self.clone();
        for i in 0..t.len() {
            for _ in 0..t.get(i) {
                if out.is_zero() {
                    return out;
                }
                out = out.partial(i);
            }
        }
        out
    }

    /// Canonical digit lift to the e = 2 version of the chart.
    pub fn lift_canonical(&self, target: &Chart) -> Result<Self> {
        if target.e() != 2 || self.chart.e() != 1 || target.p() != self.chart.p() {
            return Err(Error::ChartMismatch);
        }
        Ok(LocalizedFunction {
            chart: target.clone(),
            num: self.num.lift_canonical(target.ring()),
            denom_pow: self.denom_pow,
        })
    }

    /// Reduce an e = 2 value mod p (minimizing the result).
    pub fn reduce_mod_p(&self, target: &Chart) -> Result<Self> {
        if target.e() != 1 || self.chart.e() != 2 || target.p() != self.chart.p() {
            return Err(Error::ChartMismatch);
        }
        Ok(LocalizedFunction::raw(
            target,
            self.num.reduce_mod_p(target.ring()),
            self.denom_pow,
        ))
    }

    /// Divide an e = 2 value whose numerator lies in p*Z/p^2 by p.
    pub fn divide_by_p(&self, target: &Chart) -> Result<Self> {
        if target.e() != 1 || self.chart.e() != 2 || target.p() != self.chart.p() {
            return Err(Error::ChartMismatch);
        }
        Ok(LocalizedFunction::raw(
            target,
            self.num.divide_by_p(target.ring())?,
            self.denom_pow,
        ))
    }
}

/// Equality by cross-multiplication against the common denominator power.
impl PartialEq for LocalizedFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.chart != other.chart {
            return false;
        }
        if self.denom_pow == other.denom_pow {
            return self.num == other.num;
        }
        let m = self.denom_pow.max(other.denom_pow);
        let f = self.chart.denominator();
        self.num.mul_raw(&f.pow(m - self.denom_pow))
            == other.num.mul_raw(&f.pow(m - other.denom_pow))
    }
}

impl Eq for LocalizedFunction {}

/// Canonical form: `<numerator>*finv^m`, with parentheses around multi-term
/// numerators and `finv^1` shortened to `finv`.
impl fmt::Display for LocalizedFunction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_pow == 0 {
            return write!(out, "{}", self.num);
        }
        let finv = if self.denom_pow == 1 {
            "finv".to_string()
        } else {
            format!("finv^{}", self.denom_pow)
        };
        if self.num.is_one() {
            write!(out, "{finv}")
        } else if self.num.num_terms() == 1 {
            write!(out, "{}*{}", self.num, finv)
        } else {
            write!(out, "({})*{}", self.num, finv)
        }
    }
}
