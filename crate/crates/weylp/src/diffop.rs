//! Differential operators in normal form, and vector fields.
//!
//! An operator is a sparse map from partial-derivative multidegrees b to
//! function coefficients, meaning sum_b c_b * d^b with every coefficient
//! standing to the left. Multiplication moves d^a past a coefficient with the
//! generalized Leibniz rule
//!
//!   d^a (c . ) = sum_{t <= a} C(a, t) (d^t c) d^{a-t}
//!
//! where the multidegree binomials C(a, t) are built by the Pascal recurrence
//! mod p^e, so no division ever happens.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::{Chart, CoeffRing};
use crate::error::{Error, Result};
use crate::localized::LocalizedFunction;
use crate::poly::Multidegree;

/// Pascal triangle rows mod p^e, one allocation per multiplication.
struct Pascal {
    ring: CoeffRing,
    rows: Vec<Vec<u64>>,
}

impl Pascal {
    fn new(ring: CoeffRing, max_n: u32) -> Self {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_n as usize + 1);
        rows.push(vec![1]);
        for n in 1..=max_n as usize {
            let prev = &rows[n - 1];
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = ring.add(prev[k - 1], prev[k]);
            }
            rows.push(row);
        }
        Pascal { ring, rows }
    }

    fn choose(&self, n: u32, k: u32) -> u64 {
        self.rows[n as usize][k as usize]
    }

    /// Product of componentwise binomials C(a_i, t_i).
    fn multi(&self, a: &Multidegree, t: &Multidegree) -> u64 {
        let mut acc = 1u64;
        for i in 0..a.len() {
            if acc == 0 {
                break;
            }
            acc = self.ring.mul(acc, self.choose(a.get(i), t.get(i)));
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    chart: Chart,
    terms: BTreeMap<Multidegree, LocalizedFunction>,
}

impl DiffOperator {
    pub fn zero(chart: &Chart) -> Self {
        DiffOperator {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        DiffOperator::scalar(LocalizedFunction::one(chart))
    }

    /// Embed a function as the order-zero operator.
    pub fn scalar(g: LocalizedFunction) -> Self {
        let chart = g.chart().clone();
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(Multidegree::zero(chart.num_vars()), g);
        }
        DiffOperator { chart, terms }
    }

    pub fn constant(chart: &Chart, c: i64) -> Self {
        DiffOperator::scalar(LocalizedFunction::constant_i64(chart, c))
    }

    /// The coordinate x_i as an operator (0-based).
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        DiffOperator::scalar(LocalizedFunction::var(chart, i))
    }

    /// The partial derivative d_i as an operator (0-based).
    pub fn partial_op(chart: &Chart, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            Multidegree::unit(chart.num_vars(), i),
            LocalizedFunction::one(chart),
        );
        DiffOperator {
            chart: chart.clone(),
            terms,
        }
    }

    /// coefficient * d^deg as a single-term operator.
    pub fn monomial(coeff: LocalizedFunction, deg: Multidegree) -> Self {
        let chart = coeff.chart().clone();
        assert_eq!(deg.len(), chart.num_vars());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(deg, coeff);
        }
        DiffOperator { chart, terms }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &LocalizedFunction)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, deg: &Multidegree) -> Option<&LocalizedFunction> {
        self.terms.get(deg)
    }

    /// Total order in the d's.
    pub fn order(&self) -> u32 {
        self.terms
            .last_key_value()
            .map(|(b, _)| b.total())
            .unwrap_or(0)
    }

    /// The order-zero part as a function, if the operator is one.
    pub fn as_scalar(&self) -> Option<&LocalizedFunction> {
        if self.terms.len() == 1 {
            self.terms
                .iter()
                .next()
                .filter(|(b, _)| b.is_zero())
                .map(|(_, c)| c)
        } else {
            None
        }
    }

    fn insert_term(&mut self, deg: Multidegree, c: LocalizedFunction) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(deg) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let s = slot.get().add_raw(&c);
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.add_raw(other))
    }

    pub(crate) fn add_raw(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.insert_term(b.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = DiffOperator::zero(&self.chart);
        for (b, c) in &self.terms {
            out.terms.insert(b.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.sub_raw(other))
    }

    pub(crate) fn sub_raw(&self, other: &Self) -> Self {
        self.add_raw(&other.neg())
    }

    /// Normal-form product - the relations force this shape and the Leibniz
    /// rule computes it.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        let ring = self.chart.ring();
        let mut out = DiffOperator::zero(&self.chart);
        if self.terms.is_empty() || other.terms.is_empty() {
            return out;
        }

        let max_exp = self
            .terms
            .keys()
            .flat_map(|b| b.exponents().iter().copied())
            .max()
            .unwrap_or(0);
        let pascal = Pascal::new(ring, max_exp);
        // componentwise max of the left multidegrees bounds every t we need
        let n = self.chart.num_vars();
        let mut bound = vec![0u32; n];
        for a in self.terms.keys() {
            for i in 0..n {
                bound[i] = bound[i].max(a.get(i));
            }
        }
        let bound = Multidegree::new(bound);

        for (b, cb) in &other.terms {
            // nonzero iterated partials of cb for every t <= bound; counting
            // order guarantees the one-step-smaller multidegree is already in
            let mut derivs: BTreeMap<Multidegree, LocalizedFunction> = BTreeMap::new();
            for t in bound.sub_degrees() {
                if t.is_zero() {
                    derivs.insert(t, cb.clone());
                    continue;
                }
                let i = (0..n).find(|&i| t.get(i) > 0).unwrap();
                let mut prev = t.exponents().to_vec();
                prev[i] -= 1;
                let prev = Multidegree::new(prev);
                if let Some(d) = derivs.get(&prev) {
                    let next = d.partial(i);
                    if !next.is_zero() {
                        derivs.insert(t, next);
                    }
                }
            }

            for (a, ca) in &self.terms {
                for t in a.sub_degrees() {
                    let Some(dt) = derivs.get(&t) else { continue };
                    let binom = pascal.multi(a, &t);
                    if binom == 0 {
                        continue;
                    }
                    let coeff = ca.mul_raw(dt).scale(binom);
                    if coeff.is_zero() {
                        continue;
                    }
                    let key = a.checked_sub(&t).unwrap().add(b);
                    out.insert_term(key, coeff);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.commutator_raw(other))
    }

    pub(crate) fn commutator_raw(&self, other: &Self) -> Self {
        self.mul_raw(other).sub_raw(&other.mul_raw(self))
    }

    /// Plain iterated power; exponents stay small at the scales this crate
    /// targets and noncommutativity makes cleverer schemes easy to get wrong.
    pub fn power(&self, k: u32) -> Self {
        let mut out = DiffOperator::one(&self.chart);
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    /// Tautological action on a function.
    pub fn apply(&self, h: &LocalizedFunction) -> Result<LocalizedFunction> {
        self.chart.ensure_same(h.chart())?;
        let mut acc = LocalizedFunction::zero(&self.chart);
        for (b, c) in &self.terms {
            let d = h.partial_multi(b);
            if d.is_zero() {
                continue;
            }
            acc = acc.add_raw(&c.mul_raw(&d));
        }
        Ok(acc)
    }

    /// Total degree in x and d jointly. Defined on affine charts only; the
    /// zero operator reports 0.
    pub fn bernstein_degree(&self) -> Result<u32> {
        if !self.chart.is_affine() {
            return Err(Error::UndefinedDegree(
                "the chart is localized (f != 1)".into(),
            ));
        }
        let mut deg = 0u32;
        for (b, c) in &self.terms {
            if c.denom_pow() != 0 {
                return Err(Error::UndefinedDegree(
                    "coefficient carries a denominator power".into(),
                ));
            }
            deg = deg.max(b.total() + c.numerator().total_degree());
        }
        Ok(deg)
    }

    /// Centrality test over the prime field: commuting with every x_i and
    /// every d_i is enough, since those generate D(X) together with 1/f, and
    /// commuting with f forces commuting with 1/f.
    pub fn is_central(&self) -> Result<bool> {
        if self.chart.e() != 1 {
            return Err(Error::PrimeFieldOnly(self.chart.e()));
        }
        for i in 0..self.chart.num_vars() {
            let xi = DiffOperator::coordinate(&self.chart, i);
            if !self.commutator_raw(&xi).is_zero() {
                return Ok(false);
            }
            let di = DiffOperator::partial_op(&self.chart, i);
            if !self.commutator_raw(&di).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficient-wise canonical lift to the e = 2 chart.
    pub fn lift_canonical(&self) -> Result<DiffOperator> {
        let target = self.chart.with_e(2)?;
        let mut terms = BTreeMap::new();
        for (b, c) in &self.terms {
            terms.insert(b.clone(), c.lift_canonical(&target)?);
        }
        Ok(DiffOperator {
            chart: target,
            terms,
        })
    }

    /// Coefficient-wise reduction mod p of an e = 2 operator.
    pub fn reduce_mod_p(&self) -> Result<DiffOperator> {
        let target = self.chart.with_e(1)?;
        let mut out = DiffOperator::zero(&target);
        for (b, c) in &self.terms {
            out.insert_term(b.clone(), c.reduce_mod_p(&target)?);
        }
        Ok(out)
    }

    /// Coefficient-wise division by p of an e = 2 operator, landing at e = 1.
    pub fn divide_by_p(&self) -> Result<DiffOperator> {
        let target = self.chart.with_e(1)?;
        let mut out = DiffOperator::zero(&target);
        for (b, c) in &self.terms {
            out.insert_term(b.clone(), c.divide_by_p(&target)?);
        }
        Ok(out)
    }
}

/// Canonical form: descending degree-lex in the d-multidegree, coefficient to
/// the left of its d-monomial, multi-term coefficients parenthesized.
impl fmt::Display for DiffOperator {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (b, c) in self.terms.iter().rev() {
            parts.push(render_term(c, b, 'd'));
        }
        write!(out, "{}", parts.join(" + "))
    }
}

/// Shared by operator and symbol rendering.
pub(crate) fn render_term(coeff: &LocalizedFunction, deg: &Multidegree, letter: char) -> String {
    match deg.monomial_text(letter) {
        None => coeff.to_string(),
        Some(mono) => {
            if coeff.is_one() {
                mono
            } else if coeff.denom_pow() == 0 && coeff.numerator().num_terms() > 1 {
                format!("({})*{}", coeff, mono)
            } else {
                format!("{}*{}", coeff, mono)
            }
        }
    }
}

/// A derivation theta = sum_i g_i d_i, stored by its coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    coeffs: Vec<LocalizedFunction>,
}

impl VectorField {
    pub fn new(chart: &Chart, coeffs: Vec<LocalizedFunction>) -> Result<Self> {
        if coeffs.len() != chart.num_vars() {
            return Err(Error::NotVectorField(format!(
                "expected {} coefficients, got {}",
                chart.num_vars(),
                coeffs.len()
            )));
        }
        for c in &coeffs {
            chart.ensure_same(c.chart())?;
        }
        Ok(VectorField {
            chart: chart.clone(),
            coeffs,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField {
            chart: chart.clone(),
            coeffs: vec![LocalizedFunction::zero(chart); chart.num_vars()],
        }
    }

    /// The basis derivation d_i (0-based).
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.coeffs[i] = LocalizedFunction::one(chart);
        v
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coeffs(&self) -> &[LocalizedFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add_raw(b))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs,
        })
    }

    /// g * theta.
    pub fn scale(&self, g: &LocalizedFunction) -> Result<Self> {
        self.chart.ensure_same(g.chart())?;
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul_raw(g)).collect(),
        })
    }

    /// Apply as a derivation of the function ring.
    pub fn apply(&self, h: &LocalizedFunction) -> Result<LocalizedFunction> {
        self.chart.ensure_same(h.chart())?;
        let mut acc = LocalizedFunction::zero(&self.chart);
        for (i, g) in self.coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            acc = acc.add_raw(&g.mul_raw(&h.partial(i)));
        }
        Ok(acc)
    }

    /// Embed as a first-order operator.
    pub fn embed(&self) -> DiffOperator {
        let mut out = DiffOperator::zero(&self.chart);
        for (i, g) in self.coeffs.iter().enumerate() {
            out.insert_term(Multidegree::unit(self.chart.num_vars(), i), g.clone());
        }
        out
    }

    /// Read a purely first-order operator back as a vector field.
    pub fn from_operator(op: &DiffOperator) -> Result<Self> {
        let chart = op.chart().clone();
        let mut coeffs = vec![LocalizedFunction::zero(&chart); chart.num_vars()];
        for (b, c) in op.terms() {
            if b.total() != 1 {
                return Err(Error::NotVectorField(format!(
                    "term with d-multidegree {:?} is not first-order",
                    b.exponents()
                )));
            }
            let i = (0..chart.num_vars()).find(|&i| b.get(i) == 1).unwrap();
            coeffs[i] = c.clone();
        }
        VectorField::new(&chart, coeffs)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.embed())
    }
}
