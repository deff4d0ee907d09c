//! Algebra maps D(Y) -> M_N(D(X)) given by generator images, and what they
//! induce: transport of centers and maps of cotangent bundles.
//!
//! Only free-module equivalences are supported: maps that are isomorphisms
//! onto the full matrix ring (including N = 1 automorphisms). A map is
//! described by the images of the generators x_i, d_i and, on a localized
//! source chart, 1/f. `validate` checks the defining relations of the source
//! presentation and reports per-relation residuals; everything downstream
//! assumes a validated map.

use std::fmt;

use crate::center::{iso_i, iso_i_inverse, CentralElement, SymbolPolynomial};
use crate::chart::Chart;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::localized::LocalizedFunction;
use crate::poisson::canonical_bracket;
use crate::poly::Polynomial;

/// An N x N matrix of operators over one chart, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOperator {
    chart: Chart,
    size: usize,
    entries: Vec<DiffOperator>,
}

impl MatrixOperator {
    pub fn zero(chart: &Chart, size: usize) -> Self {
        MatrixOperator {
            chart: chart.clone(),
            size,
            entries: vec![DiffOperator::zero(chart); size * size],
        }
    }

    pub fn identity(chart: &Chart, size: usize) -> Self {
        MatrixOperator::scalar(DiffOperator::one(chart), size)
    }

    /// op * I.
    pub fn scalar(op: DiffOperator, size: usize) -> Self {
        let chart = op.chart().clone();
        let mut m = MatrixOperator::zero(&chart, size);
        for i in 0..size {
            m.entries[i * size + i] = op.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<DiffOperator>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMap("matrix must be square".into()));
        }
        let chart = rows[0][0].chart().clone();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            for e in row {
                chart.ensure_same(e.chart())?;
                entries.push(e);
            }
        }
        Ok(MatrixOperator {
            chart,
            size,
            entries,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &DiffOperator {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        self.chart.ensure_same(&other.chart)?;
        if self.size != other.size {
            return Err(Error::InvalidMap(format!(
                "matrix sizes differ: {} vs {}",
                self.size, other.size
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_raw(b))
            .collect();
        Ok(MatrixOperator {
            chart: self.chart.clone(),
            size: self.size,
            entries,
        })
    }

    pub fn neg(&self) -> Self {
        MatrixOperator {
            chart: self.chart.clone(),
            size: self.size,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = DiffOperator::zero(&self.chart);
                for k in 0..n {
                    let prod = self.entry(i, k).mul_raw(other.entry(k, j));
                    acc = acc.add_raw(&prod);
                }
                entries.push(acc);
            }
        }
        Ok(MatrixOperator {
            chart: self.chart.clone(),
            size: n,
            entries,
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = MatrixOperator::identity(&self.chart, self.size);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The diagonal entry of a scalar matrix (all off-diagonal entries zero,
    /// all diagonal entries equal); `NotScalarCentral` otherwise.
    pub fn as_scalar(&self) -> Result<&DiffOperator> {
        for i in 0..self.size {
            for j in 0..self.size {
                if i != j && !self.entry(i, j).is_zero() {
                    return Err(Error::NotScalarCentral(format!(
                        "off-diagonal entry ({},{}) is {}",
                        i + 1,
                        j + 1,
                        self.entry(i, j)
                    )));
                }
            }
        }
        let first = self.entry(0, 0);
        for i in 1..self.size {
            if self.entry(i, i) != first {
                return Err(Error::NotScalarCentral(format!(
                    "diagonal entries differ: {} vs {}",
                    first,
                    self.entry(i, i)
                )));
            }
        }
        Ok(first)
    }
}

impl fmt::Display for MatrixOperator {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size == 1 {
            return write!(out, "{}", self.entries[0]);
        }
        let rows: Vec<String> = (0..self.size)
            .map(|i| {
                let cols: Vec<String> = (0..self.size)
                    .map(|j| self.entry(i, j).to_string())
                    .collect();
                format!("[{}]", cols.join(", "))
            })
            .collect();
        write!(out, "[{}]", rows.join(", "))
    }
}

/// One defining relation of the source presentation together with the
/// residual its images leave.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub residual: MatrixOperator,
}

impl RelationCheck {
    pub fn ok(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Report of `GeneratorImagesMap::validate`.
#[derive(Clone, Debug)]
pub struct MapValidation {
    pub checks: Vec<RelationCheck>,
}

impl MapValidation {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.ok())
    }
}

/// A map D(Y) -> M_N(D(X)) described by generator images.
#[derive(Clone, Debug)]
pub struct GeneratorImagesMap {
    source: Chart,
    target: Chart,
    size: usize,
    x_images: Vec<MatrixOperator>,
    d_images: Vec<MatrixOperator>,
    finv_image: Option<MatrixOperator>,
}

impl GeneratorImagesMap {
    pub fn new(
        source: Chart,
        target: Chart,
        size: usize,
        x_images: Vec<MatrixOperator>,
        d_images: Vec<MatrixOperator>,
        finv_image: Option<MatrixOperator>,
    ) -> Result<Self> {
        if source.e() != 1 || target.e() != 1 {
            return Err(Error::InvalidMap(
                "maps are defined over the prime field (e = 1)".into(),
            ));
        }
        if source.p() != target.p() {
            return Err(Error::InvalidMap(
                "source and target charts have different p".into(),
            ));
        }
        if size == 0 {
            return Err(Error::InvalidMap("matrix size must be at least 1".into()));
        }
        let n = source.num_vars();
        if x_images.len() != n || d_images.len() != n {
            return Err(Error::InvalidMap(format!(
                "expected {n} x-images and {n} d-images, got {} and {}",
                x_images.len(),
                d_images.len()
            )));
        }
        if source.is_affine() {
            if finv_image.is_some() {
                return Err(Error::InvalidMap(
                    "finv image given but the source chart is affine".into(),
                ));
            }
        } else if finv_image.is_none() {
            return Err(Error::InvalidMap(
                "localized source chart needs an image for finv".into(),
            ));
        }
        for m in x_images
            .iter()
            .chain(d_images.iter())
            .chain(finv_image.iter())
        {
            if m.size() != size {
                return Err(Error::InvalidMap(format!(
                    "image matrix has size {}, expected {size}",
                    m.size()
                )));
            }
            if m.chart() != &target {
                return Err(Error::InvalidMap(
                    "image matrix lives over a different chart than the target".into(),
                ));
            }
        }
        Ok(GeneratorImagesMap {
            source,
            target,
            size,
            x_images,
            d_images,
            finv_image,
        })
    }

    /// The identity automorphism of D(X) as a 1 x 1 map.
    pub fn identity(chart: &Chart) -> Result<Self> {
        let n = chart.num_vars();
        let x_images = (0..n)
            .map(|i| MatrixOperator::scalar(DiffOperator::coordinate(chart, i), 1))
            .collect();
        let d_images = (0..n)
            .map(|i| MatrixOperator::scalar(DiffOperator::partial_op(chart, i), 1))
            .collect();
        let finv_image = if chart.is_affine() {
            None
        } else {
            Some(MatrixOperator::scalar(
                DiffOperator::scalar(LocalizedFunction::finv_pow(chart, 1)),
                1,
            ))
        };
        GeneratorImagesMap::new(
            chart.clone(),
            chart.clone(),
            1,
            x_images,
            d_images,
            finv_image,
        )
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn x_image(&self, i: usize) -> &MatrixOperator {
        &self.x_images[i]
    }

    pub fn d_image(&self, i: usize) -> &MatrixOperator {
        &self.d_images[i]
    }

    pub fn finv_image(&self) -> Option<&MatrixOperator> {
        self.finv_image.as_ref()
    }

    /// Check every defining relation of the source presentation and report
    /// the residuals. (Commutation of finv-images with x-images follows from
    /// the two-sided inverse relations and is not re-checked.)
    pub fn validate(&self) -> MapValidation {
        let n = self.source.num_vars();
        let identity = MatrixOperator::identity(&self.target, self.size);
        let mut checks = Vec::new();

        for i in 0..n {
            for j in (i + 1)..n {
                checks.push(RelationCheck {
                    name: format!("[im(x{}), im(x{})]", i + 1, j + 1),
                    residual: self.x_images[i]
                        .commutator(&self.x_images[j])
                        .expect("validated shapes"),
                });
                checks.push(RelationCheck {
                    name: format!("[im(d{}), im(d{})]", i + 1, j + 1),
                    residual: self.d_images[i]
                        .commutator(&self.d_images[j])
                        .expect("validated shapes"),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let comm = self.d_images[i]
                    .commutator(&self.x_images[j])
                    .expect("validated shapes");
                let expected = if i == j {
                    identity.clone()
                } else {
                    MatrixOperator::zero(&self.target, self.size)
                };
                checks.push(RelationCheck {
                    name: format!("[im(d{}), im(x{})] - delta", i + 1, j + 1),
                    residual: comm.sub(&expected).expect("validated shapes"),
                });
            }
        }
        if let Some(finv) = &self.finv_image {
            let f_at_images = self
                .eval_poly_at_x_images(self.source.denominator())
                .expect("validated shapes");
            checks.push(RelationCheck {
                name: "im(f)*im(finv) - 1".into(),
                residual: f_at_images
                    .mul(finv)
                    .and_then(|m| m.sub(&identity))
                    .expect("validated shapes"),
            });
            checks.push(RelationCheck {
                name: "im(finv)*im(f) - 1".into(),
                residual: finv
                    .mul(&f_at_images)
                    .and_then(|m| m.sub(&identity))
                    .expect("validated shapes"),
            });
            let finv_sq = finv.mul(finv).expect("validated shapes");
            for i in 0..n {
                let df = self.source.denominator().partial(i);
                let df_at_images = self.eval_poly_at_x_images(&df).expect("validated shapes");
                // [im(d_i), im(finv)] + im(d_i f) im(finv)^2 = 0
                let comm = self.d_images[i].commutator(finv).expect("validated shapes");
                let correction = df_at_images.mul(&finv_sq).expect("validated shapes");
                checks.push(RelationCheck {
                    name: format!("[im(d{}), im(finv)] + im(d{} f)*im(finv)^2", i + 1, i + 1),
                    residual: comm.add(&correction).expect("validated shapes"),
                });
            }
        }
        MapValidation { checks }
    }

    fn eval_poly_at_x_images(&self, g: &Polynomial) -> Result<MatrixOperator> {
        let mut evaluator = MapEvaluator::new(self);
        evaluator.eval_numerator(g)
    }

    /// Substitute generator images into the normal form of an operator.
    pub fn apply(&self, op: &DiffOperator) -> Result<MatrixOperator> {
        MapEvaluator::new(self).apply(op)
    }

    /// Transport a central element through the map: its image must be a
    /// central scalar matrix c * I, and c is returned.
    pub fn transport(&self, z: &CentralElement) -> Result<CentralElement> {
        MapEvaluator::new(self).transport(z)
    }

    /// The induced map of cotangent bundles: each symbol generator s over the
    /// source goes through iso_i, transport, and iso_i^-1 on the target side.
    pub fn induced_symplectic(&self) -> Result<InducedMap> {
        let mut evaluator = MapEvaluator::new(self);
        let n = self.source.num_vars();
        let mut x_images = Vec::with_capacity(n);
        let mut y_images = Vec::with_capacity(n);
        for i in 0..n {
            let s = SymbolPolynomial::var_x(&self.source, i);
            x_images.push(iso_i_inverse(&evaluator.transport(&iso_i(&s)?)?)?);
            let s = SymbolPolynomial::var_y(&self.source, i);
            y_images.push(iso_i_inverse(&evaluator.transport(&iso_i(&s)?)?)?);
        }
        let finv_image = if self.source.is_affine() {
            None
        } else {
            let s = SymbolPolynomial::scalar(LocalizedFunction::finv_pow(&self.source, 1));
            Some(iso_i_inverse(&evaluator.transport(&iso_i(&s)?)?)?)
        };
        Ok(InducedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            x_images,
            y_images,
            finv_image,
        })
    }

    /// Composite map: apply `outer` entry-wise to the images of `inner`.
    /// Sizes multiply.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if inner.target != outer.source {
            return Err(Error::InvalidMap(
                "inner target chart does not match outer source chart".into(),
            ));
        }
        let mut evaluator = MapEvaluator::new(outer);
        let size = inner.size * outer.size;
        let lift = |evaluator: &mut MapEvaluator, m: &MatrixOperator| -> Result<MatrixOperator> {
            let mut out = MatrixOperator::zero(&outer.target, size);
            for a in 0..inner.size {
                for c in 0..inner.size {
                    let block = evaluator.apply(m.entry(a, c))?;
                    for b in 0..outer.size {
                        for d in 0..outer.size {
                            let row = a * outer.size + b;
                            let col = c * outer.size + d;
                            out.entries[row * size + col] = block.entry(b, d).clone();
                        }
                    }
                }
            }
            Ok(out)
        };
        let x_images = inner
            .x_images
            .iter()
            .map(|m| lift(&mut evaluator, m))
            .collect::<Result<Vec<_>>>()?;
        let d_images = inner
            .d_images
            .iter()
            .map(|m| lift(&mut evaluator, m))
            .collect::<Result<Vec<_>>>()?;
        let finv_image = match &inner.finv_image {
            Some(m) => Some(lift(&mut evaluator, m)?),
            None => None,
        };
        GeneratorImagesMap::new(
            inner.source.clone(),
            outer.target.clone(),
            size,
            x_images,
            d_images,
            finv_image,
        )
    }
}

/// Evaluates operators through a map, memoizing generator powers. One
/// evaluator per sweep keeps repeated transports cheap.
pub struct MapEvaluator<'a> {
    map: &'a GeneratorImagesMap,
    x_pows: Vec<Vec<MatrixOperator>>,
    d_pows: Vec<Vec<MatrixOperator>>,
    finv_pows: Vec<MatrixOperator>,
}

impl<'a> MapEvaluator<'a> {
    pub fn new(map: &'a GeneratorImagesMap) -> Self {
        let identity = MatrixOperator::identity(&map.target, map.size);
        let n = map.source.num_vars();
        MapEvaluator {
            map,
            x_pows: vec![vec![identity.clone()]; n],
            d_pows: vec![vec![identity.clone()]; n],
            finv_pows: vec![identity],
        }
    }

    fn x_pow(&mut self, i: usize, k: u32) -> Result<MatrixOperator> {
        while self.x_pows[i].len() <= k as usize {
            let next = self.x_pows[i].last().unwrap().mul(&self.map.x_images[i])?;
            self.x_pows[i].push(next);
        }
        Ok(self.x_pows[i][k as usize].clone())
    }

    fn d_pow(&mut self, i: usize, k: u32) -> Result<MatrixOperator> {
        while self.d_pows[i].len() <= k as usize {
            let next = self.d_pows[i].last().unwrap().mul(&self.map.d_images[i])?;
            self.d_pows[i].push(next);
        }
        Ok(self.d_pows[i][k as usize].clone())
    }

    fn finv_pow(&mut self, k: u32) -> Result<MatrixOperator> {
        let finv = self
            .map
            .finv_image
            .as_ref()
            .ok_or_else(|| Error::InvalidMap("map has no finv image".into()))?;
        while self.finv_pows.len() <= k as usize {
            let next = self.finv_pows.last().unwrap().mul(finv)?;
            self.finv_pows.push(next);
        }
        Ok(self.finv_pows[k as usize].clone())
    }

    fn eval_numerator(&mut self, g: &Polynomial) -> Result<MatrixOperator> {
        let mut acc = MatrixOperator::zero(&self.map.target, self.map.size);
        let terms: Vec<_> = g.terms().map(|(m, c)| (m.clone(), c)).collect();
        for (m, c) in terms {
            let mut prod = MatrixOperator::scalar(
                DiffOperator::constant(&self.map.target, c as i64),
                self.map.size,
            );
            for i in 0..m.len() {
                if m.get(i) > 0 {
                    prod = prod.mul(&self.x_pow(i, m.get(i))?)?;
                }
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    /// Substitute generator images into the normal form of `op`.
    pub fn apply(&mut self, op: &DiffOperator) -> Result<MatrixOperator> {
        self.map.source.ensure_same(op.chart())?;
        let mut acc = MatrixOperator::zero(&self.map.target, self.map.size);
        let terms: Vec<_> = op.terms().map(|(b, c)| (b.clone(), c.clone())).collect();
        for (b, c) in terms {
            let mut prod = self.eval_numerator(c.numerator())?;
            if c.denom_pow() > 0 {
                prod = prod.mul(&self.finv_pow(c.denom_pow())?)?;
            }
            for i in 0..b.len() {
                if b.get(i) > 0 {
                    prod = prod.mul(&self.d_pow(i, b.get(i))?)?;
                }
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    pub fn transport(&mut self, z: &CentralElement) -> Result<CentralElement> {
        let image = self.apply(z.op())?;
        let scalar = image.as_scalar()?.clone();
        CentralElement::new(scalar).map_err(|e| match e {
            Error::NotCentral(msg) => {
                Error::NotScalarCentral(format!("diagonal entry is not central: {msg}"))
            }
            other => other,
        })
    }
}

/// Check of one canonical-bracket relation between generator images.
#[derive(Clone, Debug)]
pub struct BracketCheck {
    pub name: String,
    pub expected: SymbolPolynomial,
    pub actual: SymbolPolynomial,
}

impl BracketCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

/// Generator-image table of the induced map of cotangent bundles (source
/// generators to target symbols), with a bracket-preservation hook.
#[derive(Clone, Debug)]
pub struct InducedMap {
    source: Chart,
    target: Chart,
    x_images: Vec<SymbolPolynomial>,
    y_images: Vec<SymbolPolynomial>,
    finv_image: Option<SymbolPolynomial>,
}

impl InducedMap {
    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn x_image(&self, i: usize) -> &SymbolPolynomial {
        &self.x_images[i]
    }

    pub fn y_image(&self, i: usize) -> &SymbolPolynomial {
        &self.y_images[i]
    }

    pub fn finv_image(&self) -> Option<&SymbolPolynomial> {
        self.finv_image.as_ref()
    }

    /// Named generator images in a fixed order, for rendering.
    pub fn table(&self) -> Vec<(String, &SymbolPolynomial)> {
        let mut rows = Vec::new();
        for (i, s) in self.x_images.iter().enumerate() {
            rows.push((format!("x{}", i + 1), s));
        }
        for (i, s) in self.y_images.iter().enumerate() {
            rows.push((format!("y{}", i + 1), s));
        }
        if let Some(s) = &self.finv_image {
            rows.push(("finv".to_string(), s));
        }
        rows
    }

    /// Substitute the generator images into a symbol over the source chart.
    pub fn apply(&self, s: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.source.ensure_same(s.chart())?;
        let mut acc = SymbolPolynomial::zero(&self.target);
        for (b, c) in s.terms() {
            let mut prod = self.eval_coefficient(c)?;
            for i in 0..b.len() {
                for _ in 0..b.get(i) {
                    prod = prod.mul(&self.y_images[i])?;
                }
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    fn eval_coefficient(&self, c: &LocalizedFunction) -> Result<SymbolPolynomial> {
        let mut acc = SymbolPolynomial::zero(&self.target);
        for (m, coeff) in c.numerator().terms() {
            let mut prod = SymbolPolynomial::constant(&self.target, coeff as i64);
            for i in 0..m.len() {
                for _ in 0..m.get(i) {
                    prod = prod.mul(&self.x_images[i])?;
                }
            }
            acc = acc.add(&prod)?;
        }
        if c.denom_pow() > 0 {
            let finv = self
                .finv_image
                .as_ref()
                .ok_or_else(|| Error::InvalidMap("induced map has no finv image".into()))?;
            acc = acc.mul(&finv.pow(c.denom_pow()))?;
        }
        Ok(acc)
    }

    /// Canonical-bracket relations between generator images: the sign in the
    /// reduction bracket cancels on both sides, so the induced map must
    /// preserve the canonical bracket on the nose. On localized sources the
    /// inverse relation im(finv) * f(im(x)) = 1 is checked as well.
    pub fn bracket_checks(&self) -> Result<Vec<BracketCheck>> {
        let n = self.source.num_vars();
        let mut checks = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let actual = canonical_bracket(&self.y_images[i], &self.x_images[j])?;
                let expected = if i == j {
                    SymbolPolynomial::one(&self.target)
                } else {
                    SymbolPolynomial::zero(&self.target)
                };
                checks.push(BracketCheck {
                    name: format!("{{im(y{}), im(x{})}}", i + 1, j + 1),
                    expected,
                    actual,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                checks.push(BracketCheck {
                    name: format!("{{im(x{}), im(x{})}}", i + 1, j + 1),
                    expected: SymbolPolynomial::zero(&self.target),
                    actual: canonical_bracket(&self.x_images[i], &self.x_images[j])?,
                });
                checks.push(BracketCheck {
                    name: format!("{{im(y{}), im(y{})}}", i + 1, j + 1),
                    expected: SymbolPolynomial::zero(&self.target),
                    actual: canonical_bracket(&self.y_images[i], &self.y_images[j])?,
                });
            }
        }
        if let Some(finv) = &self.finv_image {
            let mut f_image = SymbolPolynomial::zero(&self.target);
            for (m, coeff) in self.source.denominator().terms() {
                let mut prod = SymbolPolynomial::constant(&self.target, coeff as i64);
                for i in 0..m.len() {
                    for _ in 0..m.get(i) {
                        prod = prod.mul(&self.x_images[i])?;
                    }
                }
                f_image = f_image.add(&prod)?;
            }
            checks.push(BracketCheck {
                name: "im(finv)*f(im(x))".to_string(),
                expected: SymbolPolynomial::one(&self.target),
                actual: finv.mul(&f_image)?,
            });
        }
        Ok(checks)
    }

    pub fn preserves_brackets(&self) -> Result<bool> {
        Ok(self.bracket_checks()?.iter().all(|c| c.ok()))
    }
}

/// Convenience constructors for the automorphisms used throughout the tests
/// and examples: translations x -> x + c and shears d -> d + g(x).
pub mod automorphisms {
    use super::*;

    /// x_i -> x_i + c_i, d_i -> d_i on an affine chart.
    pub fn translation(chart: &Chart, offsets: &[i64]) -> Result<GeneratorImagesMap> {
        if !chart.is_affine() {
            return Err(Error::InvalidMap(
                "translations are defined on affine charts".into(),
            ));
        }
        let n = chart.num_vars();
        if offsets.len() != n {
            return Err(Error::InvalidMap("one offset per coordinate".into()));
        }
        let x_images = (0..n)
            .map(|i| {
                let shifted = DiffOperator::coordinate(chart, i)
                    .add_raw(&DiffOperator::constant(chart, offsets[i]));
                MatrixOperator::scalar(shifted, 1)
            })
            .collect();
        let d_images = (0..n)
            .map(|i| MatrixOperator::scalar(DiffOperator::partial_op(chart, i), 1))
            .collect();
        GeneratorImagesMap::new(chart.clone(), chart.clone(), 1, x_images, d_images, None)
    }

    /// x -> x, d_1 -> d_1 + g on an affine chart; valid whenever g depends
    /// only on x_1 (one-variable charts are the interesting case).
    pub fn shear(chart: &Chart, g: &LocalizedFunction) -> Result<GeneratorImagesMap> {
        if !chart.is_affine() {
            return Err(Error::InvalidMap(
                "shears are defined on affine charts".into(),
            ));
        }
        chart.ensure_same(g.chart())?;
        let n = chart.num_vars();
        let x_images = (0..n)
            .map(|i| MatrixOperator::scalar(DiffOperator::coordinate(chart, i), 1))
            .collect();
        let mut d_images: Vec<MatrixOperator> = (0..n)
            .map(|i| MatrixOperator::scalar(DiffOperator::partial_op(chart, i), 1))
            .collect();
        d_images[0] = MatrixOperator::scalar(
            DiffOperator::partial_op(chart, 0).add_raw(&DiffOperator::scalar(g.clone())),
            1,
        );
        GeneratorImagesMap::new(chart.clone(), chart.clone(), 1, x_images, d_images, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center::iso_i;
    use crate::poisson::modp_bracket;

    fn affine(p: u64, n: usize) -> Chart {
        Chart::affine(p, 1, n).unwrap()
    }

    #[test]
    fn matrix_unit_identity() {
        let c = affine(3, 1);
        let mut e12 = MatrixOperator::zero(&c, 2);
        e12.entries[1] = DiffOperator::one(&c);
        let mut e21 = MatrixOperator::zero(&c, 2);
        e21.entries[2] = DiffOperator::one(&c);
        let comm = e12.commutator(&e21).unwrap();
        // [E12, E21] = E11 - E22
        assert_eq!(comm.entry(0, 0), &DiffOperator::one(&c));
        assert_eq!(comm.entry(1, 1), &DiffOperator::one(&c).neg());
        assert!(comm.entry(0, 1).is_zero());

        let a = MatrixOperator::scalar(DiffOperator::coordinate(&c, 0), 2);
        assert_eq!(MatrixOperator::identity(&c, 2).mul(&a).unwrap(), a);
        assert!(a.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn identity_map_validates_and_transports() {
        let c = affine(3, 1);
        let id = GeneratorImagesMap::identity(&c).unwrap();
        let report = id.validate();
        assert!(report.is_valid());
        let z = CentralElement::new(DiffOperator::coordinate(&c, 0).power(3)).unwrap();
        assert_eq!(id.transport(&z).unwrap(), z);
        // induced map is the identity table
        let induced = id.induced_symplectic().unwrap();
        assert_eq!(induced.x_image(0), &SymbolPolynomial::var_x(&c, 0));
        assert_eq!(induced.y_image(0), &SymbolPolynomial::var_y(&c, 0));
    }

    #[test]
    fn shear_validates_for_any_polynomial() {
        let c = affine(3, 1);
        let g = LocalizedFunction::var(&c, 0).pow(2);
        let shear = automorphisms::shear(&c, &g).unwrap();
        assert!(shear.validate().is_valid());
        // generator lookup: im(d1) = d1 + g
        assert_eq!(shear.d_image(0).entry(0, 0).to_string(), "d1 + x1^2");
        // substitution: im(x1 d1) = x1 d1 + x1 g
        let euler = DiffOperator::coordinate(&c, 0)
            .mul(&DiffOperator::partial_op(&c, 0))
            .unwrap();
        assert_eq!(
            shear.apply(&euler).unwrap().entry(0, 0).to_string(),
            "x1*d1 + x1^3"
        );
    }

    #[test]
    fn scaled_derivative_fails_validation() {
        let c = affine(3, 1);
        let id = GeneratorImagesMap::identity(&c).unwrap();
        let doubled = GeneratorImagesMap::new(
            c.clone(),
            c.clone(),
            1,
            vec![id.x_image(0).clone()],
            vec![MatrixOperator::scalar(
                DiffOperator::partial_op(&c, 0).add_raw(&DiffOperator::partial_op(&c, 0)),
                1,
            )],
            None,
        )
        .unwrap();
        let report = doubled.validate();
        assert!(!report.is_valid());
        let failure = report.failures().next().unwrap();
        assert_eq!(failure.name, "[im(d1), im(x1)] - delta");
        assert_eq!(failure.residual.to_string(), "1");
    }

    #[test]
    fn shear_transports_center() {
        let p = 3u64;
        let c = affine(p, 1);
        let g = LocalizedFunction::var(&c, 0).pow(2);
        let shear = automorphisms::shear(&c, &g).unwrap();

        // x^p is fixed
        let xp = CentralElement::new(DiffOperator::coordinate(&c, 0).power(p as u32)).unwrap();
        assert_eq!(shear.transport(&xp).unwrap(), xp);

        // d^p transports to (d + g)^p, still central
        let dp = CentralElement::new(DiffOperator::partial_op(&c, 0).power(p as u32)).unwrap();
        let image = shear.transport(&dp).unwrap();
        let direct = DiffOperator::partial_op(&c, 0)
            .add_raw(&DiffOperator::scalar(g))
            .power(p as u32);
        assert_eq!(image.op(), &direct);
    }

    #[test]
    fn translation_induces_translation_of_symbols() {
        let c = affine(3, 1);
        let t = automorphisms::translation(&c, &[1]).unwrap();
        assert!(t.validate().is_valid());
        let induced = t.induced_symplectic().unwrap();
        assert_eq!(induced.x_image(0).to_string(), "x1 + 1");
        assert_eq!(induced.y_image(0).to_string(), "y1");
        assert!(induced.preserves_brackets().unwrap());
    }

    #[test]
    fn shear_induces_fiber_shear() {
        let p = 3u64;
        let c = affine(p, 1);
        let g = LocalizedFunction::var(&c, 0).pow(2);
        let shear = automorphisms::shear(&c, &g).unwrap();
        let induced = shear.induced_symplectic().unwrap();
        assert_eq!(induced.x_image(0).to_string(), "x1");
        // y goes to y + h(x) for a polynomial h read off from the pipeline
        let y_img = induced.y_image(0);
        assert!(induced.preserves_brackets().unwrap());
        let h = y_img.sub(&SymbolPolynomial::var_y(&c, 0)).unwrap();
        assert_eq!(h.y_degree(), 0, "difference must be fiber-constant");
        assert!(!h.is_zero());
    }

    #[test]
    fn transport_is_poisson_on_samples() {
        let p = 3u64;
        let c = affine(p, 1);
        let g = LocalizedFunction::var(&c, 0).pow(2);
        let shear = automorphisms::shear(&c, &g).unwrap();
        let mut evaluator = MapEvaluator::new(&shear);

        let a = iso_i(&SymbolPolynomial::var_y(&c, 0)).unwrap();
        let b = iso_i(
            &SymbolPolynomial::var_x(&c, 0)
                .mul(&SymbolPolynomial::var_y(&c, 0))
                .unwrap(),
        )
        .unwrap();
        // ring map
        let prod = evaluator.transport(&a.mul(&b).unwrap()).unwrap();
        let prod_images = evaluator
            .transport(&a)
            .unwrap()
            .mul(&evaluator.transport(&b).unwrap())
            .unwrap();
        assert_eq!(prod, prod_images);
        // Poisson compatibility
        let lhs = evaluator.transport(&modp_bracket(&a, &b).unwrap()).unwrap();
        let rhs = modp_bracket(
            &evaluator.transport(&a).unwrap(),
            &evaluator.transport(&b).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_scalar_image_is_rejected() {
        // diag(x, x+1), diag(d, d) is a valid direct sum but transports x^p
        // to a non-scalar matrix
        let p = 3u64;
        let c = affine(p, 1);
        let x = DiffOperator::coordinate(&c, 0);
        let shifted = x.add_raw(&DiffOperator::one(&c));
        let d = DiffOperator::partial_op(&c, 0);
        let x_img = MatrixOperator::from_rows(vec![
            vec![x.clone(), DiffOperator::zero(&c)],
            vec![DiffOperator::zero(&c), shifted],
        ])
        .unwrap();
        let d_img = MatrixOperator::scalar(d, 2);
        let map = GeneratorImagesMap::new(c.clone(), c.clone(), 2, vec![x_img], vec![d_img], None)
            .unwrap();
        assert!(map.validate().is_valid());
        let xp = CentralElement::new(DiffOperator::coordinate(&c, 0).power(p as u32)).unwrap();
        assert!(matches!(
            map.transport(&xp),
            Err(Error::NotScalarCentral(_))
        ));
    }

    #[test]
    fn composition_of_automorphisms() {
        let c = affine(3, 1);
        let g = LocalizedFunction::var(&c, 0).pow(2);
        let shear = automorphisms::shear(&c, &g).unwrap();
        let translation = automorphisms::translation(&c, &[1]).unwrap();
        let composite = GeneratorImagesMap::compose(&translation, &shear).unwrap();
        assert!(composite.validate().is_valid());

        // induced map of the composite equals the composite of induced maps
        let ind_composite = composite.induced_symplectic().unwrap();
        let ind_translation = translation.induced_symplectic().unwrap();
        let ind_shear = shear.induced_symplectic().unwrap();
        for (name, image) in ind_composite.table() {
            let via_parts = ind_translation
                .apply(match name.as_str() {
                    "x1" => ind_shear.x_image(0),
                    "y1" => ind_shear.y_image(0),
                    other => panic!("unexpected generator {other}"),
                })
                .unwrap();
            assert_eq!(image, &via_parts, "generator {name}");
        }
    }
}
