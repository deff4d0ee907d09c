//! Sparse multivariate polynomials over Z/p^e with degree-lex term order.

use std::collections::BTreeMap;
use std::fmt;

use crate::chart::CoeffRing;
use crate::error::{Error, Result};

/// Exponent vector of a monomial (also used for partial-derivative and fiber
/// multidegrees elsewhere in the crate). Ordered by total degree first, then
/// lexicographically, so BTreeMap iteration is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exps: Vec<u32>) -> Self {
        Multidegree(exps)
    }

    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    /// The i-th standard basis vector (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Multidegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, None if any entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Multidegree)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, k: u32) -> Self {
        Multidegree(self.0.iter().map(|e| e * k).collect())
    }

    /// Divide every exponent by k exactly, None if any entry is not a multiple.
    pub fn div_exact(&self, k: u32) -> Option<Self> {
        self.0
            .iter()
            .map(|e| if e % k == 0 { Some(e / k) } else { None })
            .collect::<Option<Vec<u32>>>()
            .map(Multidegree)
    }

    /// All multidegrees t with 0 <= t <= self componentwise, in mixed-radix
    /// counting order starting from 0.
    pub fn sub_degrees(&self) -> SubDegrees {
        SubDegrees {
            bound: self.0.clone(),
            next: Some(vec![0; self.0.len()]),
        }
    }

    /// Canonical text with the given variable letter, e.g. `x1^2*x3`.
    /// None for the empty multidegree.
    pub(crate) fn monomial_text(&self, letter: char) -> Option<String> {
        if self.is_zero() {
            return None;
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{letter}{}", i + 1)),
                _ => parts.push(format!("{letter}{}^{e}", i + 1)),
            }
        }
        Some(parts.join("*"))
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub struct SubDegrees {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for SubDegrees {
    type Item = Multidegree;

    fn next(&mut self) -> Option<Multidegree> {
        let cur = self.next.take()?;
        let out = Multidegree(cur.clone());
        let mut cur = cur;
        for i in (0..cur.len()).rev() {
            if cur[i] < self.bound[i] {
                cur[i] += 1;
                self.next = Some(cur);
                return Some(out);
            }
            cur[i] = 0;
        }
        // bound itself was just produced (or bound is empty)
        self.next = None;
        Some(out)
    }
}

/// Sparse polynomial in n variables over Z/p^e. Zero coefficients are never
/// stored; term iteration is ascending degree-lex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    ring: CoeffRing,
    n: usize,
    terms: BTreeMap<Multidegree, u64>,
}

impl Polynomial {
    pub fn zero(ring: CoeffRing, n: usize) -> Self {
        Polynomial {
            ring,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoeffRing, n: usize) -> Self {
        Polynomial::constant(ring, n, 1)
    }

    pub fn constant(ring: CoeffRing, n: usize, c: u64) -> Self {
        let mut p = Polynomial::zero(ring, n);
        p.add_term(Multidegree::zero(n), c % ring.modulus());
        p
    }

    pub fn constant_i64(ring: CoeffRing, n: usize, c: i64) -> Self {
        Polynomial::constant(ring, n, ring.from_i64(c))
    }

    /// The coordinate x_i (0-based).
    pub fn var(ring: CoeffRing, n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut p = Polynomial::zero(ring, n);
        p.add_term(Multidegree::unit(n, i), 1);
        p
    }

    pub fn monomial(ring: CoeffRing, n: usize, deg: Multidegree, c: u64) -> Self {
        assert_eq!(deg.len(), n);
        let mut p = Polynomial::zero(ring, n);
        p.add_term(deg, c % ring.modulus());
        p
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, &c)| m.is_zero() && c == 1)
                .unwrap_or(false)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .last_key_value()
            .map(|(m, _)| m.total())
            .unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.values().copied()
    }

    pub fn coeff_of(&self, deg: &Multidegree) -> u64 {
        self.terms.get(deg).copied().unwrap_or(0)
    }

    /// Leading (maximal degree-lex) term.
    pub fn leading(&self) -> Option<(&Multidegree, u64)> {
        self.terms.last_key_value().map(|(m, &c)| (m, c))
    }

    fn add_term(&mut self, deg: Multidegree, c: u64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(deg) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let s = self.ring.add(*slot.get(), c);
                if s == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring && self.n == other.n {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.add_raw(other))
    }

    pub(crate) fn add_raw(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Polynomial::zero(self.ring, self.n);
        for (m, &c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.sub_raw(other))
    }

    pub(crate) fn sub_raw(&self, other: &Self) -> Self {
        self.add_raw(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &Self) -> Self {
        let mut out = Polynomial::zero(self.ring, self.n);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.add(mb), self.ring.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.ring.modulus();
        let mut out = Polynomial::zero(self.ring, self.n);
        for (m, &cc) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(cc, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Polynomial::one(self.ring, self.n);
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    /// Formal partial derivative with respect to x_i (0-based).
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.n, "variable index out of range");
        let mut out = Polynomial::zero(self.ring, self.n);
        for (m, &c) in &self.terms {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            let factor = (e as u64) % self.ring.modulus();
            let mut v = m.exponents().to_vec();
            v[i] -= 1;
            out.add_term(Multidegree::new(v), self.ring.mul(c, factor));
        }
        out
    }

    /// Exact quotient by a divisor whose degree-lex leading coefficient is a
    /// unit. Runs the one-divisor division algorithm; any nonzero remainder
    /// means the division is not exact.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_compat(divisor)?;
        let (lead_deg, lead_coeff) = divisor
            .leading()
            .ok_or_else(|| Error::NotDivisible("division by zero polynomial".into()))?;
        let lead_inv = self.ring.inverse(lead_coeff).ok_or_else(|| {
            Error::NotDivisible("divisor leading coefficient is not a unit".into())
        })?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.ring, self.n);
        while let Some((rdeg, rcoeff)) = rem.leading() {
            let qdeg = match rdeg.checked_sub(lead_deg) {
                Some(d) => d,
                None => {
                    return Err(Error::NotDivisible(format!(
                        "remainder term of degree {:?} not divisible by the leading monomial",
                        rdeg.exponents()
                    )))
                }
            };
            let qcoeff = self.ring.mul(rcoeff, lead_inv);
            let piece = Polynomial::monomial(self.ring, self.n, qdeg, qcoeff);
            rem = rem.sub_raw(&piece.mul_raw(divisor));
            quot = quot.add_raw(&piece);
        }
        Ok(quot)
    }

    pub fn divides_exactly(&self, divisor: &Self) -> bool {
        self.exact_div(divisor).is_ok()
    }

    /// p-th root over the prime field: defined exactly when every exponent is
    /// a multiple of p (coefficients are Frobenius-fixed in F_p).
    pub fn pth_root(&self) -> Result<Self> {
        if self.ring.e() != 1 {
            return Err(Error::PrimeFieldOnly(self.ring.e()));
        }
        let p = self.ring.p() as u32;
        let mut out = Polynomial::zero(self.ring, self.n);
        for (m, &c) in &self.terms {
            let root = m.div_exact(p).ok_or_else(|| {
                Error::NotPthPower(format!(
                    "exponent vector {:?} is not divisible by p = {p}",
                    m.exponents()
                ))
            })?;
            out.terms.insert(root, c);
        }
        Ok(out)
    }

    /// Reinterpret the stored coefficients over another ring without
    /// normalization. Caller guarantees they are valid residues there.
    pub(crate) fn with_ring(&self, ring: CoeffRing) -> Self {
        debug_assert!(self.coeffs().all(|c| c < ring.modulus()));
        Polynomial {
            ring,
            n: self.n,
            terms: self.terms.clone(),
        }
    }

    /// Reduce an e = 2 polynomial mod p.
    pub fn reduce_mod_p(&self, target: CoeffRing) -> Self {
        debug_assert_eq!(target.p(), self.ring.p());
        debug_assert_eq!(target.e(), 1);
        let p = self.ring.p();
        let mut out = Polynomial::zero(target, self.n);
        for (m, &c) in &self.terms {
            let r = c % p;
            if r != 0 {
                out.terms.insert(m.clone(), r);
            }
        }
        out
    }

    /// Canonical lift of an e = 1 polynomial to e = 2: representatives in
    /// {0..p-1} are reused verbatim.
    pub fn lift_canonical(&self, target: CoeffRing) -> Self {
        debug_assert_eq!(target.p(), self.ring.p());
        debug_assert_eq!(self.ring.e(), 1);
        debug_assert_eq!(target.e(), 2);
        self.with_ring(target)
    }

    /// Divide an e = 2 polynomial with all coefficients in pZ/p^2 by p,
    /// landing in e = 1.
    pub fn divide_by_p(&self, target: CoeffRing) -> Result<Self> {
        debug_assert_eq!(target.p(), self.ring.p());
        debug_assert_eq!(self.ring.e(), 2);
        debug_assert_eq!(target.e(), 1);
        let p = self.ring.p();
        let mut out = Polynomial::zero(target, self.n);
        for (m, &c) in &self.terms {
            if c % p != 0 {
                return Err(Error::NotDivisibleByP(c));
            }
            let r = c / p;
            if r != 0 {
                out.terms.insert(m.clone(), r);
            }
        }
        Ok(out)
    }

    pub(crate) fn same_terms(&self, other: &Self) -> bool {
        self.terms == other.terms
    }

    /// Canonical text for one term. `None` coefficient text means "1".
    fn term_text(&self, m: &Multidegree, c: u64) -> String {
        match (m.monomial_text('x'), c) {
            (None, c) => c.to_string(),
            (Some(mono), 1) => mono,
            (Some(mono), c) => format!("{c}*{mono}"),
        }
    }
}

/// Canonical form: descending degree-lex, least nonnegative residues,
/// explicit `*`, ` + ` separators. Re-parses to the same value.
impl fmt::Display for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| self.term_text(m, c))
            .collect();
        write!(out, "{}", rendered.join(" + "))
    }
}
