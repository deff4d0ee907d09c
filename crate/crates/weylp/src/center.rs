//! The characteristic-p center of the operator ring and its identification
//! with functions on the cotangent bundle.
//!
//! Over the prime field the identification sends a function g to g^p and a
//! vector field theta to theta^p - theta^[p], where theta^[p] is the p-th
//! power derivation. Monomial-wise:
//!
//!   (g/f^m) * y^b   |->   (g^p / f^{pm}) * d^{pb}
//!
//! extended additively. The inverse reads the rigid exponent pattern back
//! off: d-multidegrees and denominator powers divisible by p, numerators
//! p-th powers.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::diffop::{render_term, DiffOperator, VectorField};
use crate::error::{Error, Result};
use crate::localized::LocalizedFunction;
use crate::poly::Multidegree;

/// An operator validated to commute with every x_i and d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    op: DiffOperator,
}

impl CentralElement {
    /// Validates centrality; fails with `NotCentral` otherwise.
    pub fn new(op: DiffOperator) -> Result<Self> {
        if !op.is_central()? {
            return Err(Error::NotCentral(op.to_string()));
        }
        Ok(CentralElement { op })
    }

    pub fn op(&self) -> &DiffOperator {
        &self.op
    }

    pub fn into_op(self) -> DiffOperator {
        self.op
    }

    pub fn chart(&self) -> &Chart {
        self.op.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.op.is_zero()
    }

    pub fn zero(chart: &Chart) -> Self {
        CentralElement {
            op: DiffOperator::zero(chart),
        }
    }

    // The center is closed under ring operations, so these skip revalidation.

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(CentralElement {
            op: self.op.add(&other.op)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(CentralElement {
            op: self.op.sub(&other.op)?,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(CentralElement {
            op: self.op.mul(&other.op)?,
        })
    }

    pub fn neg(&self) -> Self {
        CentralElement { op: self.op.neg() }
    }
}

impl fmt::Display for CentralElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.op)
    }
}

/// An element of the function ring of the cotangent bundle: a sparse map
/// from fiber multidegrees (in the y_i dual to d_i) to function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPolynomial {
    chart: Chart,
    terms: BTreeMap<Multidegree, LocalizedFunction>,
}

impl SymbolPolynomial {
    pub fn zero(chart: &Chart) -> Self {
        SymbolPolynomial {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        SymbolPolynomial::scalar(LocalizedFunction::one(chart))
    }

    pub fn scalar(g: LocalizedFunction) -> Self {
        let chart = g.chart().clone();
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(Multidegree::zero(chart.num_vars()), g);
        }
        SymbolPolynomial { chart, terms }
    }

    pub fn constant(chart: &Chart, c: i64) -> Self {
        SymbolPolynomial::scalar(LocalizedFunction::constant_i64(chart, c))
    }

    /// The base coordinate x_i as a symbol (0-based).
    pub fn var_x(chart: &Chart, i: usize) -> Self {
        SymbolPolynomial::scalar(LocalizedFunction::var(chart, i))
    }

    /// The fiber coordinate y_i dual to d_i (0-based).
    pub fn var_y(chart: &Chart, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            Multidegree::unit(chart.num_vars(), i),
            LocalizedFunction::one(chart),
        );
        SymbolPolynomial {
            chart: chart.clone(),
            terms,
        }
    }

    /// coefficient * y^deg.
    pub fn monomial(coeff: LocalizedFunction, deg: Multidegree) -> Self {
        let chart = coeff.chart().clone();
        assert_eq!(deg.len(), chart.num_vars());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(deg, coeff);
        }
        SymbolPolynomial { chart, terms }
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

    /// Total degree in the fiber variables.
    pub fn y_degree(&self) -> u32 {
        self.terms
            .last_key_value()
            .map(|(b, _)| b.total())
            .unwrap_or(0)
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
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (b, c) in &self.terms {
            out.terms.insert(b.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.add_raw(&other.neg()))
    }

    /// Commutative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                out.insert_term(ba.add(bb), ca.mul_raw(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = SymbolPolynomial::one(&self.chart);
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    pub fn scale(&self, g: &LocalizedFunction) -> Result<Self> {
        self.chart.ensure_same(g.chart())?;
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (b, c) in &self.terms {
            out.insert_term(b.clone(), c.mul_raw(g));
        }
        Ok(out)
    }

    pub fn scale_const(&self, c: i64) -> Self {
        let c = self.chart.ring().from_i64(c);
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (b, coeff) in &self.terms {
            out.insert_term(b.clone(), coeff.scale(c));
        }
        out
    }

    /// Derivative along the base coordinate x_i, acting on coefficients.
    pub fn partial_x(&self, i: usize) -> Self {
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (b, c) in &self.terms {
            out.insert_term(b.clone(), c.partial(i));
        }
        out
    }

    /// Formal derivative along the fiber coordinate y_i.
    pub fn partial_y(&self, i: usize) -> Self {
        let ring = self.chart.ring();
        let mut out = SymbolPolynomial::zero(&self.chart);
        for (b, c) in &self.terms {
            let e = b.get(i);
            if e == 0 {
                continue;
            }
            let mut v = b.exponents().to_vec();
            v[i] -= 1;
            out.insert_term(Multidegree::new(v), c.scale((e as u64) % ring.modulus()));
        }
        out
    }
}

/// Canonical form: descending degree-lex in the y-multidegree.
impl fmt::Display for SymbolPolynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (b, c) in self.terms.iter().rev() {
            parts.push(render_term(c, b, 'y'));
        }
        write!(out, "{}", parts.join(" + "))
    }
}

/// The p-th power derivation theta^[p]: a derivation is determined by its
/// values on the coordinates, and theta^[p](x_j) = theta^p(x_j), computed by
/// p-fold application.
pub fn restricted_power(theta: &VectorField) -> Result<VectorField> {
    let chart = theta.chart();
    if chart.e() != 1 {
        return Err(Error::PrimeFieldOnly(chart.e()));
    }
    let p = chart.p() as u32;
    let mut coeffs = Vec::with_capacity(chart.num_vars());
    for j in 0..chart.num_vars() {
        let mut v = LocalizedFunction::var(chart, j);
        for _ in 0..p {
            v = theta.apply(&v)?;
        }
        coeffs.push(v);
    }
    VectorField::new(chart, coeffs)
}

/// theta^p - theta^[p], the central element attached to a vector field.
/// Centrality is revalidated; a failure indicates an arithmetic bug.
pub fn frob_center(theta: &VectorField) -> Result<CentralElement> {
    let chart = theta.chart();
    if chart.e() != 1 {
        return Err(Error::PrimeFieldOnly(chart.e()));
    }
    let p = chart.p() as u32;
    let power = theta.embed().power(p);
    let correction = restricted_power(theta)?.embed();
    CentralElement::new(power.sub(&correction)?)
}

/// The center identification, monomial-wise: (g/f^m) y^b maps to
/// (g^p/f^{pm}) d^{pb}. Coefficients are Frobenius-fixed over the prime
/// field, so nothing twists.
pub fn iso_i(s: &SymbolPolynomial) -> Result<CentralElement> {
    let chart = s.chart();
    if chart.e() != 1 {
        return Err(Error::PrimeFieldOnly(chart.e()));
    }
    let p = chart.p() as u32;
    let mut out = DiffOperator::zero(chart);
    for (b, c) in s.terms() {
        let image = DiffOperator::monomial(c.pow(p), b.scaled(p));
        out = out.add_raw(&image);
    }
    CentralElement::new(out)
}

/// Pattern inverse of [`iso_i`] on a bare operator; used both for the real
/// inverse and for rejecting forged inputs. For each term the d-multidegree
/// must be divisible by p and the coefficient must be a p-th power after its
/// denominator power is topped up to the next multiple of p.
pub fn symbol_preimage(op: &DiffOperator) -> Result<SymbolPolynomial> {
    let chart = op.chart();
    if chart.e() != 1 {
        return Err(Error::PrimeFieldOnly(chart.e()));
    }
    let p = chart.p() as u32;
    let f = chart.denominator();
    let mut out = SymbolPolynomial::zero(chart);
    for (b, c) in op.terms() {
        let root_deg = b.div_exact(p).ok_or_else(|| {
            Error::NotInImage(format!(
                "term {} has d-multidegree not divisible by p = {p}",
                render_term(c, b, 'd')
            ))
        })?;
        // top the denominator power up to a multiple of p; over the prime
        // field minimization may have stripped factors of f from g^p/f^{pm}
        let pad = (p - c.denom_pow() % p) % p;
        let padded = c.numerator().mul_raw(&f.pow(pad));
        let root_num = padded.pth_root().map_err(|_| {
            Error::NotInImage(format!(
                "coefficient {} is not a p-th power",
                render_term(c, b, 'd')
            ))
        })?;
        let coeff = LocalizedFunction::new(chart.clone(), root_num, (c.denom_pow() + pad) / p)?;
        out.insert_term(root_deg, coeff);
    }
    Ok(out)
}

/// Inverse of the center identification.
pub fn iso_i_inverse(z: &CentralElement) -> Result<SymbolPolynomial> {
    symbol_preimage(z.op())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::CoeffRing;
    use crate::poly::Polynomial;

    fn affine(p: u64, n: usize) -> Chart {
        Chart::affine(p, 1, n).unwrap()
    }

    fn chart_x1(p: u64) -> Chart {
        let ring = CoeffRing::new(p, 1).unwrap();
        Chart::localized(p, 1, 1, Polynomial::var(ring, 1, 0)).unwrap()
    }

    #[test]
    fn restricted_power_of_constant_field_vanishes() {
        let c = affine(3, 1);
        let theta = VectorField::basis(&c, 0);
        assert!(restricted_power(&theta).unwrap().is_zero());
    }

    #[test]
    fn restricted_power_of_euler_field_is_itself() {
        // theta = x d/dx: theta^p(x) = x by Fermat, so theta^[p] = theta
        for p in [3u64, 5] {
            let c = affine(p, 1);
            let theta = VectorField::basis(&c, 0)
                .scale(&LocalizedFunction::var(&c, 0))
                .unwrap();
            assert_eq!(restricted_power(&theta).unwrap(), theta, "p = {p}");
        }
    }

    #[test]
    fn restricted_power_quadratic_p3() {
        // theta = x^2 d/dx at p = 3: three applications to x give 6 x^4 = 0
        let c = affine(3, 1);
        let theta = VectorField::basis(&c, 0)
            .scale(&LocalizedFunction::var(&c, 0).pow(2))
            .unwrap();
        assert!(restricted_power(&theta).unwrap().is_zero());
    }

    #[test]
    fn frob_center_of_basis_field() {
        let c = affine(3, 1);
        let theta = VectorField::basis(&c, 0);
        let z = frob_center(&theta).unwrap();
        assert_eq!(z.to_string(), "d1^3");
    }

    #[test]
    fn frob_center_of_euler_field() {
        // (x d)^p - (x d) = x^p d^p, verified for p = 3 and 5; the char-0
        // route is in the integration suite
        for p in [3u64, 5] {
            let c = affine(p, 1);
            let theta = VectorField::basis(&c, 0)
                .scale(&LocalizedFunction::var(&c, 0))
                .unwrap();
            let z = frob_center(&theta).unwrap();
            let expected = DiffOperator::coordinate(&c, 0)
                .power(p as u32)
                .mul(&DiffOperator::partial_op(&c, 0).power(p as u32))
                .unwrap();
            assert_eq!(z.op(), &expected, "p = {p}");
        }
    }

    #[test]
    fn frob_center_scales_by_fermat() {
        // 2 d/dx maps to 2 d^p since 2^p = 2
        let c = affine(5, 1);
        let theta = VectorField::basis(&c, 0)
            .scale(&LocalizedFunction::constant(&c, 2))
            .unwrap();
        assert_eq!(frob_center(&theta).unwrap().to_string(), "2*d1^5");
    }

    #[test]
    fn iso_on_generators() {
        let c = affine(3, 1);
        let x = SymbolPolynomial::var_x(&c, 0);
        assert_eq!(iso_i(&x).unwrap().to_string(), "x1^3");
        let y = SymbolPolynomial::var_y(&c, 0);
        assert_eq!(iso_i(&y).unwrap().to_string(), "d1^3");
        // x*y agrees with the vector-field route
        let xy = x.mul(&y).unwrap();
        let theta = VectorField::basis(&c, 0)
            .scale(&LocalizedFunction::var(&c, 0))
            .unwrap();
        assert_eq!(iso_i(&xy).unwrap(), frob_center(&theta).unwrap());
    }

    #[test]
    fn inverse_on_generators() {
        let c = affine(3, 1);
        let xp = CentralElement::new(DiffOperator::coordinate(&c, 0).power(3)).unwrap();
        assert_eq!(iso_i_inverse(&xp).unwrap().to_string(), "x1");
        let dp = CentralElement::new(DiffOperator::partial_op(&c, 0).power(3)).unwrap();
        assert_eq!(iso_i_inverse(&dp).unwrap().to_string(), "y1");
    }

    #[test]
    fn forged_input_is_rejected() {
        let c = affine(3, 1);
        let euler = DiffOperator::coordinate(&c, 0)
            .mul(&DiffOperator::partial_op(&c, 0))
            .unwrap();
        // the constructor already rejects it...
        assert!(matches!(
            CentralElement::new(euler.clone()),
            Err(Error::NotCentral(_))
        ));
        // ...and the pattern inverse rejects the bare operator
        assert!(matches!(symbol_preimage(&euler), Err(Error::NotInImage(_))));
    }

    #[test]
    fn localized_round_trip() {
        let p = 3u64;
        let c = chart_x1(p);
        // s = (x/f^2) y^2 on the chart localized at f = x1... note x/x^2
        // minimizes to 1/x, so build from the minimized form directly
        let coeff = LocalizedFunction::finv_pow(&c, 1);
        let s = SymbolPolynomial::monomial(coeff, Multidegree::new(vec![2]));
        let z = iso_i(&s).unwrap();
        assert_eq!(iso_i_inverse(&z).unwrap(), s);
        // the image scales denominator power and degrees by exactly p
        for (b, cc) in z.op().terms() {
            assert_eq!(b.total(), 2 * p as u32);
            assert_eq!(cc.denom_pow(), p as u32);
        }
    }

    #[test]
    fn symbol_partials() {
        let c = affine(5, 2);
        let s = SymbolPolynomial::var_y(&c, 0)
            .pow(2)
            .scale(&LocalizedFunction::var(&c, 1))
            .unwrap();
        assert_eq!(s.partial_y(0).to_string(), "2*x2*y1");
        assert_eq!(s.partial_x(1).to_string(), "y1^2");
        assert!(s.partial_x(0).is_zero());
    }
}
