//! Shared helpers for the integration suites: seeded random value
//! generators and chart builders.

#![allow(dead_code)]

pub mod golden;
pub mod oracle;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weylp::chart::{Chart, CoeffRing};
use weylp::diffop::{DiffOperator, VectorField};
use weylp::localized::LocalizedFunction;
use weylp::poly::{Multidegree, Polynomial};
use weylp::SymbolPolynomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn affine(p: u64, e: u8, n: usize) -> Chart {
    Chart::affine(p, e, n).unwrap()
}

/// Chart localized at f = x1.
pub fn chart_x1(p: u64, e: u8, n: usize) -> Chart {
    let ring = CoeffRing::new(p, e).unwrap();
    Chart::localized(p, e, n, Polynomial::var(ring, n, 0)).unwrap()
}

/// Chart localized at f = x1*x2 + 1 (two variables).
pub fn chart_x1x2p1(p: u64, e: u8) -> Chart {
    let ring = CoeffRing::new(p, e).unwrap();
    let f = Polynomial::var(ring, 2, 0)
        .mul(&Polynomial::var(ring, 2, 1))
        .unwrap()
        .add(&Polynomial::one(ring, 2))
        .unwrap();
    Chart::localized(p, e, 2, f).unwrap()
}

/// The chart family used by the relations and round-trip suites:
/// f = 1 for n = 1, 2, 3, then f = x1 and f = x1*x2 + 1.
pub fn standard_charts(p: u64, e: u8) -> Vec<Chart> {
    vec![
        affine(p, e, 1),
        affine(p, e, 2),
        affine(p, e, 3),
        chart_x1(p, e, 1),
        chart_x1x2p1(p, e),
    ]
}

pub fn random_multidegree(rng: &mut ChaCha8Rng, n: usize, max_total: u32) -> Multidegree {
    let mut v = vec![0u32; n];
    let total = rng.gen_range(0..=max_total);
    for _ in 0..total {
        let i = rng.gen_range(0..n);
        v[i] += 1;
    }
    Multidegree::new(v)
}

pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    ring: CoeffRing,
    n: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let mut acc = Polynomial::zero(ring, n);
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let deg = random_multidegree(rng, n, max_deg);
        let coeff = rng.gen_range(0..ring.modulus());
        acc = acc.add(&Polynomial::monomial(ring, n, deg, coeff)).unwrap();
    }
    acc
}

pub fn random_localized(
    rng: &mut ChaCha8Rng,
    chart: &Chart,
    max_deg: u32,
    max_denom: u32,
) -> LocalizedFunction {
    let num = random_polynomial(rng, chart.ring(), chart.num_vars(), max_deg, 4);
    let denom = if chart.is_affine() {
        0
    } else {
        rng.gen_range(0..=max_denom)
    };
    LocalizedFunction::new(chart.clone(), num, denom).unwrap()
}

pub fn random_operator(
    rng: &mut ChaCha8Rng,
    chart: &Chart,
    max_order: u32,
    max_coeff_deg: u32,
    max_terms: usize,
) -> DiffOperator {
    let mut acc = DiffOperator::zero(chart);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let deg = random_multidegree(rng, chart.num_vars(), max_order);
        let coeff = random_localized(rng, chart, max_coeff_deg, 1);
        acc = acc.add(&DiffOperator::monomial(coeff, deg)).unwrap();
    }
    acc
}

pub fn random_vector_field(rng: &mut ChaCha8Rng, chart: &Chart, max_coeff_deg: u32) -> VectorField {
    let coeffs = (0..chart.num_vars())
        .map(|_| random_localized(rng, chart, max_coeff_deg, 1))
        .collect();
    VectorField::new(chart, coeffs).unwrap()
}

pub fn random_symbol(
    rng: &mut ChaCha8Rng,
    chart: &Chart,
    max_ydeg: u32,
    max_xdeg: u32,
    max_denom: u32,
    max_terms: usize,
) -> SymbolPolynomial {
    let mut acc = SymbolPolynomial::zero(chart);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let ydeg = random_multidegree(rng, chart.num_vars(), max_ydeg);
        let coeff = random_localized(rng, chart, max_xdeg, max_denom);
        acc = acc.add(&SymbolPolynomial::monomial(coeff, ydeg)).unwrap();
    }
    acc
}

/// Every multidegree of length n with total degree <= max_total.
pub fn multidegrees_up_to(n: usize, max_total: u32) -> Vec<Multidegree> {
    let mut out = Vec::new();
    let mut stack = vec![(vec![], 0u32)];
    while let Some((prefix, used)) = stack.pop() {
        if prefix.len() == n {
            out.push(Multidegree::new(prefix));
            continue;
        }
        for e in 0..=(max_total - used) {
            let mut next = prefix.clone();
            next.push(e);
            stack.push((next, used + e));
        }
    }
    out.sort();
    out
}

/// All symbol monomials c * x^a / f^m * y^b within the given bounds, with
/// coefficient 1, skipping non-minimal representations.
pub fn symbol_monomials(
    chart: &Chart,
    max_ydeg: u32,
    max_xdeg: u32,
    max_denom: u32,
) -> Vec<SymbolPolynomial> {
    let mut out = Vec::new();
    let denoms = if chart.is_affine() {
        0..=0u32
    } else {
        0..=max_denom
    };
    for ydeg in multidegrees_up_to(chart.num_vars(), max_ydeg) {
        for xdeg in multidegrees_up_to(chart.num_vars(), max_xdeg) {
            for m in denoms.clone() {
                let num = Polynomial::monomial(chart.ring(), chart.num_vars(), xdeg.clone(), 1);
                let coeff = LocalizedFunction::new(chart.clone(), num, m).unwrap();
                // keep only monomials whose stored representation matches the
                // requested one (minimization may strip the denominator)
                if coeff.denom_pow() != m {
                    continue;
                }
                out.push(SymbolPolynomial::monomial(coeff, ydeg.clone()));
            }
        }
    }
    out
}
