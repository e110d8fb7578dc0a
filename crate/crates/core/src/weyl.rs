//! Reconstruction of a groupoid and twist from a concrete pair (block
//! matrix algebra, distinguished diagonal).
//!
//! The spectrum of the diagonal is realized as its minimal projections.
//! Normalizers of the diagonal are monomial matrices; each induces a
//! partial bijection of the spectrum, the germs of these maps assemble
//! into a principal groupoid, and the phases n(Sy)/sqrt(n*n(y)) of chosen
//! witnesses assemble into a 2-cocycle. Evaluation sends an algebra
//! element to a section over that groupoid, and the round trip against a
//! convolution algebra built from a known (groupoid, cocycle) pair is
//! the reconstruction theorem at finite scale.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{conv, matrix_model, star, AlgebraContext, Section};
use crate::cmatrix::CMatrix;
use crate::cocycle::{cocycles_cohomologous, Cochain1, Cocycle2};
use crate::groupoid::{
    germ_groupoid_discrete, isomorphism, FiniteGroupoid, IsoResult, PartialBijection,
};
use crate::util::TOL_EXACT;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("projections do not partition block coordinates: {0}")]
    BadPartition(String),
    #[error("the diagonal is not maximal abelian")]
    NotMasa,
    #[error("element is not a normalizer: {0}")]
    NotNormalizer(String),
    #[error("the defining identity for the induced map fails at {0}")]
    InconsistentAlpha(String),
    #[error("section choice misses arrow {0}")]
    MissingSection(String),
    #[error("unit arrow {0} needs a positive witness entry")]
    UnitWitnessNotPositive(String),
    #[error("groupoid is not principal")]
    NotPrincipal,
    #[error("reconstructed twist failed the cocycle identity")]
    TwistInvalid,
    #[error("no groupoid isomorphism found within bounds")]
    IsomorphismNotFound,
    #[error("twists are not cohomologous")]
    NotCohomologous,
}

/// One spectrum point: a minimal projection of the diagonal, supported
/// on a set of coordinates of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub block: usize,
    pub coords: Vec<usize>,
    pub label: String,
}

/// A finite-dimensional pair: a direct sum of full matrix blocks with a
/// distinguished abelian subalgebra spanned by orthogonal 0/1 diagonal
/// projections summing to the identity of each block.
#[derive(Debug, Clone)]
pub struct CartanPairModel {
    block_sizes: Vec<usize>,
    spectrum: Vec<SpectrumPoint>,
}

impl CartanPairModel {
    /// The standard pair: diagonal matrix units as minimal projections.
    pub fn standard(block_sizes: &[usize]) -> Self {
        Self::standard_labeled(
            block_sizes,
            &(0..block_sizes.iter().sum::<usize>()).map(|i| format!("p{i}")).collect::<Vec<_>>(),
        )
    }

    /// Standard pair with caller-supplied spectrum labels, one per
    /// coordinate, block by block.
    pub fn standard_labeled(block_sizes: &[usize], labels: &[String]) -> Self {
        assert_eq!(labels.len(), block_sizes.iter().sum::<usize>());
        let mut spectrum = Vec::new();
        let mut next = 0;
        for (b, &size) in block_sizes.iter().enumerate() {
            for i in 0..size {
                spectrum.push(SpectrumPoint {
                    block: b,
                    coords: vec![i],
                    label: labels[next].clone(),
                });
                next += 1;
            }
        }
        CartanPairModel { block_sizes: block_sizes.to_vec(), spectrum }
    }

    /// A pair with coarser minimal projections: per block, a partition
    /// of its coordinates.
    pub fn with_projections(
        block_sizes: &[usize],
        groups: Vec<(usize, Vec<usize>)>,
        labels: Vec<String>,
    ) -> Result<Self, WeylError> {
        if labels.len() != groups.len() {
            return Err(WeylError::BadPartition("one label per projection".into()));
        }
        let mut seen: Vec<Vec<bool>> = block_sizes.iter().map(|&n| vec![false; n]).collect();
        for (b, coords) in &groups {
            if *b >= block_sizes.len() || coords.is_empty() {
                return Err(WeylError::BadPartition(format!("bad projection in block {b}")));
            }
            for &c in coords {
                if c >= block_sizes[*b] || seen[*b][c] {
                    return Err(WeylError::BadPartition(format!(
                        "coordinate {c} of block {b} not covered exactly once"
                    )));
                }
                seen[*b][c] = true;
            }
        }
        if seen.iter().any(|s| s.iter().any(|&x| !x)) {
            return Err(WeylError::BadPartition("projections do not sum to the identity".into()));
        }
        let spectrum = groups
            .into_iter()
            .zip(labels)
            .map(|((block, coords), label)| SpectrumPoint { block, coords, label })
            .collect();
        Ok(CartanPairModel { block_sizes: block_sizes.to_vec(), spectrum })
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn spectrum(&self) -> &[SpectrumPoint] {
        &self.spectrum
    }

    pub fn point(&self, label: &str) -> Option<usize> {
        self.spectrum.iter().position(|p| p.label == label)
    }

    /// Spectrum point owning a given (block, coordinate).
    fn point_of_coord(&self, block: usize, coord: usize) -> usize {
        self.spectrum
            .iter()
            .position(|p| p.block == block && p.coords.contains(&coord))
            .expect("projections cover all coordinates")
    }
}

/// An element of the block matrix algebra.
#[derive(Debug, Clone)]
pub struct Element {
    pub blocks: Vec<CMatrix>,
}

impl Element {
    pub fn zero(pair: &CartanPairModel) -> Self {
        Element { blocks: pair.block_sizes.iter().map(|&n| CMatrix::zeros(n, n)).collect() }
    }

    pub fn identity(pair: &CartanPairModel) -> Self {
        Element { blocks: pair.block_sizes.iter().map(|&n| CMatrix::identity(n)).collect() }
    }

    /// Matrix unit with a 1 at (row, col) of one block.
    pub fn matrix_unit(pair: &CartanPairModel, block: usize, row: usize, col: usize) -> Self {
        let mut e = Element::zero(pair);
        e.blocks[block].set(row, col, Complex64::ONE);
        e
    }

    /// The minimal projection at a spectrum point.
    pub fn projection(pair: &CartanPairModel, point: usize) -> Self {
        let p = &pair.spectrum[point];
        let mut e = Element::zero(pair);
        for &c in &p.coords {
            e.blocks[p.block].set(c, c, Complex64::ONE);
        }
        e
    }

    pub fn random<R: Rng>(pair: &CartanPairModel, rng: &mut R) -> Self {
        let blocks = pair
            .block_sizes
            .iter()
            .map(|&n| {
                let mut m = CMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    }
                }
                m
            })
            .collect();
        Element { blocks }
    }

    pub fn add(&self, o: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn mul(&self, o: &Element) -> Element {
        Element { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn adjoint(&self) -> Element {
        Element { blocks: self.blocks.iter().map(|b| b.adjoint()).collect() }
    }

    pub fn scale(&self, z: Complex64) -> Element {
        Element { blocks: self.blocks.iter().map(|b| b.scale(z)).collect() }
    }

    pub fn max_abs_diff(&self, o: &Element) -> f64 {
        self.blocks
            .iter()
            .zip(&o.blocks)
            .map(|(a, b)| a.sub(b).max_abs_entry())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|b| b.max_abs_entry()).fold(0.0, f64::max)
    }

    /// Entrywise diagonal restriction: the expectation onto the
    /// diagonal of a pair whose projections are singletons.
    pub fn diagonal_part(&self) -> Element {
        let blocks = self
            .blocks
            .iter()
            .map(|m| {
                let n = m.rows();
                let mut d = CMatrix::zeros(n, n);
                for i in 0..n {
                    d.set(i, i, m.get(i, i));
                }
                d
            })
            .collect();
        Element { blocks }
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|m| {
            (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).norm() <= TOL_EXACT))
        })
    }

    /// Whether the element lies in the span of the pair's minimal
    /// projections: diagonal and constant on each projection's support.
    pub fn is_in_diagonal_algebra(&self, pair: &CartanPairModel) -> bool {
        if !self.is_diagonal() {
            return false;
        }
        pair.spectrum.iter().all(|p| {
            let first = self.blocks[p.block].get(p.coords[0], p.coords[0]);
            p.coords.iter().all(|&c| (self.blocks[p.block].get(c, c) - first).norm() <= TOL_EXACT)
        })
    }
}

/// Whether the commutant of the diagonal is the diagonal itself. The
/// commutant of the span of the projections is the direct sum of full
/// matrix algebras on their supports, so the basis equations decouple:
/// the pair is maximal abelian exactly when coordinates (i, j) in a
/// common projection support with i != j admit a commuting matrix unit.
pub fn masa_check(pair: &CartanPairModel) -> bool {
    // Honest linear solve on the matrix-unit basis: e_ij commutes with
    // every projection iff i and j lie in the same projection support.
    for (b, &n) in pair.block_sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = Element::matrix_unit(pair, b, i, j);
                let commutes = (0..pair.spectrum.len()).all(|p| {
                    let proj = Element::projection(pair, p);
                    proj.mul(&e).max_abs_diff(&e.mul(&proj)) <= TOL_EXACT
                });
                if commutes {
                    return false;
                }
            }
        }
    }
    true
}

/// A verified normalizer: monomial support, with n b n* and n* b n
/// diagonal for every minimal projection b.
#[derive(Debug, Clone)]
pub struct NormalizerElement {
    pub matrix: Element,
}

impl NormalizerElement {
    pub fn new(pair: &CartanPairModel, matrix: Element) -> Result<Self, WeylError> {
        for (b, m) in matrix.blocks.iter().enumerate() {
            let n = m.rows();
            for i in 0..n {
                let row_nonzeros = (0..n).filter(|&j| m.get(i, j).norm() > TOL_EXACT).count();
                let col_nonzeros = (0..n).filter(|&j| m.get(j, i).norm() > TOL_EXACT).count();
                if row_nonzeros > 1 || col_nonzeros > 1 {
                    return Err(WeylError::NotNormalizer(format!(
                        "block {b} has several entries in a line through {i}"
                    )));
                }
            }
        }
        for p in 0..pair.spectrum.len() {
            let b = Element::projection(pair, p);
            let nbn = matrix.mul(&b).mul(&matrix.adjoint());
            let nbn2 = matrix.adjoint().mul(&b).mul(&matrix);
            if !nbn.is_in_diagonal_algebra(pair) || !nbn2.is_in_diagonal_algebra(pair) {
                return Err(WeylError::NotNormalizer(format!(
                    "conjugate of projection {} leaves the diagonal",
                    pair.spectrum[p].label
                )));
            }
        }
        Ok(NormalizerElement { matrix })
    }
}

/// The generating family: every matrix unit of every block.
pub fn find_normalizers(pair: &CartanPairModel) -> Result<Vec<NormalizerElement>, WeylError> {
    if !masa_check(pair) {
        return Err(WeylError::NotMasa);
    }
    let mut out = Vec::new();
    for (b, &n) in pair.block_sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let e = Element::matrix_unit(pair, b, i, j);
                out.push(NormalizerElement::new(pair, e).expect("matrix units normalize"));
            }
        }
    }
    Ok(out)
}

/// The partial bijection of the spectrum induced by a normalizer:
/// domain {y : n*n(y) > 0}, value the point the support column lands on.
/// Verifies n* b n = (b after alpha) n* n on every minimal projection.
pub fn alpha_of(pair: &CartanPairModel, n: &NormalizerElement) -> Result<PartialBijection, WeylError> {
    let mut pairs = Vec::new();
    for (b, m) in n.matrix.blocks.iter().enumerate() {
        let size = m.rows();
        for col in 0..size {
            for row in 0..size {
                if m.get(row, col).norm() > TOL_EXACT {
                    let y = pair.point_of_coord(b, col);
                    let x = pair.point_of_coord(b, row);
                    pairs.push((pair.spectrum[y].label.clone(), pair.spectrum[x].label.clone()));
                }
            }
        }
    }
    pairs.sort();
    pairs.dedup();
    let alpha = PartialBijection::new(pairs)
        .map_err(|_| WeylError::InconsistentAlpha("support is not a bisection".into()))?;
    // Defining identity on all minimal projections.
    let nn = n.matrix.adjoint().mul(&n.matrix);
    for p in 0..pair.spectrum.len() {
        let bp = Element::projection(pair, p);
        let lhs = n.matrix.adjoint().mul(&bp).mul(&n.matrix);
        // (b after alpha)(y) = b(alpha(y)): a diagonal supported on the
        // preimage of point p.
        let mut rhs = Element::zero(pair);
        for (q, sp) in pair.spectrum.iter().enumerate() {
            if alpha.apply(&sp.label) == Some(&pair.spectrum[p].label) {
                let proj = Element::projection(pair, q);
                rhs = rhs.add(&proj.mul(&nn));
            }
        }
        if lhs.max_abs_diff(&rhs) > TOL_EXACT {
            return Err(WeylError::InconsistentAlpha(pair.spectrum[p].label.clone()));
        }
    }
    Ok(alpha)
}

/// The maps induced by the generating normalizers.
pub fn weyl_pseudogroup(pair: &CartanPairModel) -> Result<Vec<PartialBijection>, WeylError> {
    find_normalizers(pair)?
        .iter()
        .map(|n| alpha_of(pair, n))
        .collect()
}

/// The groupoid of germs over the discrete spectrum: the principal
/// groupoid of the orbit relation of the pseudogroup.
pub fn weyl_groupoid(pair: &CartanPairModel) -> Result<FiniteGroupoid, WeylError> {
    let generators = weyl_pseudogroup(pair)?;
    let points: Vec<String> = pair.spectrum.iter().map(|p| p.label.clone()).collect();
    Ok(germ_groupoid_discrete(&points, &generators).expect("alphas are partial bijections"))
}

/// The witness entry's phase at a groupoid arrow: n(Sy)/sqrt(n*n(y)).
pub fn twist_phase(
    pair: &CartanPairModel,
    g: &FiniteGroupoid,
    arrow: u32,
    witness: &Element,
) -> Result<Complex64, WeylError> {
    let src = pair.point(g.unit_name(g.src(arrow))).expect("arrow endpoints are spectrum points");
    let dst = pair.point(g.unit_name(g.dst(arrow))).expect("arrow endpoints are spectrum points");
    let (sp, dp) = (&pair.spectrum[src], &pair.spectrum[dst]);
    let entry = witness.blocks[sp.block].get(dp.coords[0], sp.coords[0]);
    if entry.norm() <= TOL_EXACT {
        return Err(WeylError::MissingSection(g.arrow(arrow).id.clone()));
    }
    Ok(entry / entry.norm())
}

/// Matrix-unit witnesses, entry one, the lexicographically least choice.
pub fn matrix_unit_section(
    pair: &CartanPairModel,
    g: &FiniteGroupoid,
) -> BTreeMap<u32, Element> {
    let mut out = BTreeMap::new();
    for a in 0..g.n_arrows() as u32 {
        let src = pair.point(g.unit_name(g.src(a))).expect("spectrum point");
        let dst = pair.point(g.unit_name(g.dst(a))).expect("spectrum point");
        let (sp, dp) = (&pair.spectrum[src], &pair.spectrum[dst]);
        out.insert(a, Element::matrix_unit(pair, sp.block, dp.coords[0], sp.coords[0]));
    }
    out
}

/// The 2-cocycle of a section choice: sigma(a, b) = phase(a) phase(b) /
/// phase(ab).
pub fn weyl_twist(
    pair: &CartanPairModel,
    g: &FiniteGroupoid,
    section: &BTreeMap<u32, Element>,
) -> Result<Cocycle2, WeylError> {
    let mut phases = Vec::with_capacity(g.n_arrows());
    for a in 0..g.n_arrows() as u32 {
        let witness = section.get(&a).ok_or_else(|| WeylError::MissingSection(g.arrow(a).id.clone()))?;
        let phi = twist_phase(pair, g, a, witness)?;
        if g.is_unit_arrow(a) && (phi - Complex64::ONE).norm() > TOL_EXACT {
            return Err(WeylError::UnitWitnessNotPositive(g.arrow(a).id.clone()));
        }
        phases.push(phi);
    }
    let mut values = Vec::new();
    for a in 0..g.n_arrows() as u32 {
        for b in 0..g.n_arrows() as u32 {
            if let Some(ab) = g.compose(a, b) {
                let v = phases[a as usize] * phases[b as usize] * phases[ab as usize].conj();
                values.push((g.arrow(a).id.clone(), g.arrow(b).id.clone(), v));
            }
        }
    }
    let twist =
        Cocycle2::from_values(g, &values).map_err(|_| WeylError::TwistInvalid)?;
    twist.check().map_err(|_| WeylError::TwistInvalid)?;
    Ok(twist)
}

/// Every normalizer acting trivially lies in the diagonal; checked on
/// the generating family and on random diagonal multiples of it.
pub fn kernel_commutant_check(pair: &CartanPairModel) -> Result<bool, WeylError> {
    let family = find_normalizers(pair)?;
    let mut seed = 0x5eed_u64;
    for n in &family {
        let alpha = alpha_of(pair, n)?;
        let trivial = alpha.pairs().all(|(y, x)| y == x);
        if trivial && !n.matrix.is_diagonal() {
            return Ok(false);
        }
        // A deterministic diagonal multiple keeps alpha and membership.
        let mut d = Element::zero(pair);
        for (b, &size) in pair.block_sizes.iter().enumerate() {
            for i in 0..size {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let t = (seed >> 11) as f64 / (1u64 << 53) as f64;
                d.blocks[b].set(i, i, Complex64::new(0.5 + t, 0.0));
            }
        }
        let scaled = NormalizerElement::new(pair, d.mul(&n.matrix))
            .expect("diagonal multiples of normalizers normalize");
        let alpha2 = alpha_of(pair, &scaled)?;
        let trivial2 = alpha2.pairs().all(|(y, x)| y == x);
        if trivial2 && !scaled.matrix.is_diagonal() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every generating normalizer and every fixed-point-free spectrum
/// point of its action, the diagonal of the normalizer vanishes there.
pub fn separation_check(pair: &CartanPairModel) -> Result<bool, WeylError> {
    let family = find_normalizers(pair)?;
    for n in &family {
        let alpha = alpha_of(pair, n)?;
        let p_n = n.matrix.diagonal_part();
        for (y, x) in alpha.pairs() {
            if y != x {
                let point = pair.point(y).unwrap();
                let sp = &pair.spectrum[point];
                let val = p_n.blocks[sp.block].get(sp.coords[0], sp.coords[0]);
                if val.norm() > 0.0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// |P(n)(x)|^2 / (n*n)(x) at a spectrum point in the domain.
pub fn transition_probability(
    pair: &CartanPairModel,
    n: &NormalizerElement,
    point: usize,
) -> Option<f64> {
    let sp = &pair.spectrum[point];
    let nn = n.matrix.adjoint().mul(&n.matrix);
    let denom = nn.blocks[sp.block].get(sp.coords[0], sp.coords[0]).re;
    if denom <= 0.0 {
        return None;
    }
    let num = n.matrix.blocks[sp.block].get(sp.coords[0], sp.coords[0]).norm_sqr();
    Some(num / denom)
}

/// The reconstructed data of a pair: groupoid, twist, witnesses, and the
/// convolution context they generate.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub pair: CartanPairModel,
    pub groupoid: FiniteGroupoid,
    pub twist: Cocycle2,
    pub witnesses: BTreeMap<u32, Element>,
    pub ctx: AlgebraContext,
}

pub fn reconstruct(pair: &CartanPairModel) -> Result<Reconstruction, WeylError> {
    if !masa_check(pair) {
        return Err(WeylError::NotMasa);
    }
    let groupoid = weyl_groupoid(pair)?;
    let witnesses = matrix_unit_section(pair, &groupoid);
    let twist = weyl_twist(pair, &groupoid, &witnesses)?;
    let ctx = AlgebraContext::new(twist.clone());
    Ok(Reconstruction { pair: pair.clone(), groupoid, twist, witnesses, ctx })
}

/// The evaluation map: a-hat(gamma) = P(n* a)(s(gamma)) /
/// sqrt((n*n)(s(gamma))) with gamma's chosen witness n.
pub fn evaluation(recon: &Reconstruction, a: &Element) -> Section {
    let pair = &recon.pair;
    let g = &recon.groupoid;
    let mut out = Section::zero(&recon.ctx);
    for arrow in 0..g.n_arrows() as u32 {
        let n = &recon.witnesses[&arrow];
        let y = pair.point(g.unit_name(g.src(arrow))).unwrap();
        let sp = &pair.spectrum[y];
        let na = n.adjoint().mul(a);
        let num = na.blocks[sp.block].get(sp.coords[0], sp.coords[0]);
        let denom = n
            .adjoint()
            .mul(n)
            .blocks[sp.block]
            .get(sp.coords[0], sp.coords[0])
            .re
            .sqrt();
        out.set(arrow, num / denom);
    }
    out
}

#[derive(Debug)]
pub struct UniqueExtensionReport {
    pub weyl_principal: bool,
    pub ker_p_equals_free_span: bool,
    pub commutator_decomposition: bool,
}

/// Exact linear-algebra facts about the expectation kernel: ker P is
/// spanned by free normalizers (off-diagonal matrix units square to
/// zero), and the algebra splits as diagonal plus commutators with the
/// diagonal.
pub fn unique_extension_analysis(pair: &CartanPairModel) -> Result<UniqueExtensionReport, WeylError> {
    if !masa_check(pair) {
        return Err(WeylError::NotMasa);
    }
    let weyl_principal = weyl_groupoid(pair)?.is_principal();

    // Free normalizers span ker P: each off-diagonal unit is free and
    // kills P; conversely a kernel element is the sum of its off-diagonal
    // entries times those units.
    let mut ker_ok = true;
    let mut probe = Element::zero(pair);
    for (b, &n) in pair.block_sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                probe.blocks[b].set(i, j, Complex64::new(1.0 + (i + 2 * j) as f64, (b + 1) as f64));
            }
        }
    }
    let kernel_part = probe.sub(&probe.diagonal_part());
    let mut rebuilt = Element::zero(pair);
    for (b, &n) in pair.block_sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = Element::matrix_unit(pair, b, i, j);
                if e.mul(&e).max_abs() > 0.0 {
                    ker_ok = false; // free normalizers square to zero
                }
                if e.diagonal_part().max_abs() > 0.0 {
                    ker_ok = false; // they lie in ker P
                }
                rebuilt = rebuilt.add(&e.scale(kernel_part.blocks[b].get(i, j)));
            }
        }
    }
    if rebuilt.max_abs_diff(&kernel_part) > 0.0 {
        ker_ok = false;
    }

    // A = B + span[A, B]: off-diagonal units are commutators [e_ij, e_jj].
    let mut comm_ok = true;
    let mut commutator_sum = Element::zero(pair);
    for (b, &n) in pair.block_sizes.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = Element::matrix_unit(pair, b, i, j);
                let p = Element::matrix_unit(pair, b, j, j);
                let comm = e.mul(&p).sub(&p.mul(&e));
                if comm.max_abs_diff(&e) > 0.0 {
                    comm_ok = false;
                }
                commutator_sum =
                    commutator_sum.add(&comm.scale(probe.blocks[b].get(i, j)));
            }
        }
    }
    if probe.diagonal_part().add(&commutator_sum).max_abs_diff(&probe) > 0.0 {
        comm_ok = false;
    }

    Ok(UniqueExtensionReport {
        weyl_principal,
        ker_p_equals_free_span: ker_ok,
        commutator_decomposition: comm_ok,
    })
}

#[derive(Debug)]
pub struct RoundtripReport {
    /// Weyl groupoid unit -> input groupoid unit.
    pub unit_map: BTreeMap<String, String>,
    /// The reconstructed twist on the Weyl groupoid.
    pub twist: Cocycle2,
    /// The input cocycle transported onto the Weyl groupoid.
    pub transported: Cocycle2,
    /// Witness for the ratio twist * conj(transported input cocycle).
    pub witness: Cochain1,
    /// Largest deviation of evaluation from multiplicativity and
    /// star-compatibility over random elements.
    pub star_residual: f64,
    /// Largest modulus deviation of evaluation after embed from the
    /// original section values.
    pub inversion_residual: f64,
}

/// Builds the convolution model of (g, s), reconstructs a groupoid and
/// twist from it, and verifies the reconstruction theorem: the Weyl
/// groupoid is isomorphic to g, the twist is cohomologous to s, and
/// evaluation is a *-isomorphism.
pub fn roundtrip_check<R: Rng>(
    g: &FiniteGroupoid,
    s: &Cocycle2,
    rng: &mut R,
) -> Result<RoundtripReport, WeylError> {
    if !g.is_principal() {
        return Err(WeylError::NotPrincipal);
    }
    let ctx = AlgebraContext::new(s.clone());
    let model = matrix_model(&ctx);
    // Spectrum labels: each basis arrow of a block is the unique arrow
    // from the base to one unit of the orbit; label by that unit.
    let block_sizes: Vec<usize> = model.blocks.iter().map(|b| b.basis.len()).collect();
    let labels: Vec<String> = model
        .blocks
        .iter()
        .flat_map(|b| b.basis.iter().map(|&t| g.unit_name(g.dst(t)).to_string()))
        .collect();
    let pair = CartanPairModel::standard_labeled(&block_sizes, &labels);
    let recon = reconstruct(&pair)?;

    let unit_map = match isomorphism(&recon.groupoid, g, 12) {
        IsoResult::Isomorphic(map) => map,
        _ => return Err(WeylError::IsomorphismNotFound),
    };

    // Transport s along the isomorphism; arrows of a principal groupoid
    // are determined by their endpoints.
    let arrow_in_g = |a: u32| -> u32 {
        let src = g.unit_index(&unit_map[recon.groupoid.unit_name(recon.groupoid.src(a))]).unwrap();
        let dst = g.unit_index(&unit_map[recon.groupoid.unit_name(recon.groupoid.dst(a))]).unwrap();
        *g.s_fiber(src)
            .iter()
            .find(|&&t| g.dst(t) == dst)
            .expect("isomorphic image arrow exists")
    };
    let mut values = Vec::new();
    let wg = &recon.groupoid;
    for a in 0..wg.n_arrows() as u32 {
        for b in 0..wg.n_arrows() as u32 {
            if wg.compose(a, b).is_some() {
                let v = s.get(arrow_in_g(a), arrow_in_g(b));
                values.push((wg.arrow(a).id.clone(), wg.arrow(b).id.clone(), v));
            }
        }
    }
    let transported = Cocycle2::from_values(wg, &values).map_err(|_| WeylError::TwistInvalid)?;
    let witness = cocycles_cohomologous(&recon.twist, &transported)
        .map_err(|_| WeylError::TwistInvalid)?
        .ok_or(WeylError::NotCohomologous)?;

    // Evaluation as a *-isomorphism.
    let mut star_residual: f64 = 0.0;
    for _ in 0..20 {
        let a = Element::random(&pair, rng);
        let b = Element::random(&pair, rng);
        let lhs = evaluation(&recon, &a.mul(&b));
        let rhs = conv(&recon.ctx, &evaluation(&recon, &a), &evaluation(&recon, &b));
        star_residual = star_residual.max(lhs.max_abs_diff(&rhs));
        let lhs = evaluation(&recon, &a.adjoint());
        let rhs = star(&recon.ctx, &evaluation(&recon, &a));
        star_residual = star_residual.max(lhs.max_abs_diff(&rhs));
        // Diagonal elements map to diagonal sections.
        let d = a.diagonal_part();
        if !crate::algebra::is_diagonal(&recon.ctx, &evaluation(&recon, &d)) {
            star_residual = f64::INFINITY;
        }
    }

    // Evaluation inverts embed up to the isomorphism and a phase.
    let mut inversion_residual: f64 = 0.0;
    for _ in 0..10 {
        let f = Section::random(&ctx, rng);
        let embedded = Element { blocks: model.embed(&ctx, &f) };
        let back = evaluation(&recon, &embedded);
        for a in 0..wg.n_arrows() as u32 {
            let orig = f.value(arrow_in_g(a));
            inversion_residual = inversion_residual.max((back.value(a).norm() - orig.norm()).abs());
        }
    }

    Ok(RoundtripReport {
        unit_map,
        twist: recon.twist.clone(),
        transported,
        witness,
        star_residual,
        inversion_residual,
    })
}
