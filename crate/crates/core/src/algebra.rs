//! The twisted convolution *-algebra of a finite groupoid.
//!
//! A section is a complex function on arrows. The product twists matrix
//! multiplication by a 2-cocycle, (f*g)(gamma) = sum over tau with
//! s(tau) = s(gamma) of f(gamma tau^-1) g(tau) sigma(gamma tau^-1, tau),
//! and the involution carries the compensating phase conj(sigma(gamma,
//! gamma^-1)) that makes star twice the identity. The regular
//! representation at a unit x acts on the source fiber at x; one such
//! block per orbit is a faithful matrix model, and the reduced norm is
//! the largest singular value over all blocks.

use num_complex::Complex64;
use rand::Rng;

use crate::cmatrix::CMatrix;
use crate::cocycle::Cocycle2;
use crate::groupoid::{Bisection, FiniteGroupoid, PartialBijection};
use crate::util::TOL_EXACT;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown arrow id {0:?}")]
    UnknownArrow(String),
}

/// A groupoid together with the 2-cocycle twisting its convolution.
#[derive(Debug, Clone)]
pub struct AlgebraContext {
    sigma: Cocycle2,
}

impl AlgebraContext {
    pub fn new(sigma: Cocycle2) -> Self {
        AlgebraContext { sigma }
    }

    pub fn untwisted(g: FiniteGroupoid) -> Self {
        AlgebraContext { sigma: Cocycle2::trivial(&g) }
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        self.sigma.groupoid()
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.sigma
    }

    fn n(&self) -> usize {
        self.groupoid().n_arrows()
    }
}

/// A finitely supported complex function on arrows, stored densely in
/// arrow order.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    values: Vec<Complex64>,
}

impl Section {
    pub fn zero(ctx: &AlgebraContext) -> Self {
        Section { values: vec![Complex64::ZERO; ctx.n()] }
    }

    pub fn indicator(ctx: &AlgebraContext, arrow: u32) -> Self {
        let mut s = Section::zero(ctx);
        s.values[arrow as usize] = Complex64::ONE;
        s
    }

    /// Indicator of all unit arrows: the multiplicative identity.
    pub fn units_indicator(ctx: &AlgebraContext) -> Self {
        let g = ctx.groupoid();
        let mut s = Section::zero(ctx);
        for a in 0..g.n_arrows() as u32 {
            if g.is_unit_arrow(a) {
                s.values[a as usize] = Complex64::ONE;
            }
        }
        s
    }

    pub fn from_values(
        ctx: &AlgebraContext,
        pairs: &[(&str, Complex64)],
    ) -> Result<Self, AlgebraError> {
        let g = ctx.groupoid();
        let mut s = Section::zero(ctx);
        for (id, z) in pairs {
            let a = g.arrow_index(id).ok_or_else(|| AlgebraError::UnknownArrow(id.to_string()))?;
            s.values[a as usize] = *z;
        }
        Ok(s)
    }

    /// Dense section with coordinates uniform in the unit square.
    pub fn random<R: Rng>(ctx: &AlgebraContext, rng: &mut R) -> Self {
        let values = (0..ctx.n())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Section { values }
    }

    pub fn value(&self, arrow: u32) -> Complex64 {
        self.values[arrow as usize]
    }

    pub fn set(&mut self, arrow: u32, z: Complex64) {
        self.values[arrow as usize] = z;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// supp'(f): arrows with nonzero value.
    pub fn support(&self) -> Vec<u32> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn add(&self, other: &Section) -> Section {
        Section {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> Section {
        Section { values: self.values.iter().map(|a| a * z).collect() }
    }

    pub fn max_abs_diff(&self, other: &Section) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Twisted convolution: sum over tau in the source fiber of s(gamma).
pub fn conv(ctx: &AlgebraContext, f: &Section, g: &Section) -> Section {
    let gr = ctx.groupoid();
    let mut out = Section::zero(ctx);
    for a in 0..gr.n_arrows() as u32 {
        let fa = f.value(a);
        if fa.norm() == 0.0 {
            continue;
        }
        // a plays gamma tau^-1; tau runs over the fiber at s(a).
        for &t in gr.r_fiber(gr.src(a)) {
            let gt = g.value(t);
            if gt.norm() == 0.0 {
                continue;
            }
            let at = gr.compose(a, t).expect("fiber arrows compose");
            let w = out.value(at) + fa * gt * ctx.sigma.get(a, t);
            out.set(at, w);
        }
    }
    out
}

/// Twisted involution f*(gamma) = conj(sigma(gamma, gamma^-1)) *
/// conj(f(gamma^-1)).
pub fn star(ctx: &AlgebraContext, f: &Section) -> Section {
    let g = ctx.groupoid();
    let mut out = Section::zero(ctx);
    for a in 0..g.n_arrows() as u32 {
        let ai = g.inv(a).expect("valid groupoid has total inverse");
        out.set(a, ctx.sigma.get(a, ai).conj() * f.value(ai).conj());
    }
    out
}

/// The regular representation at unit x on the source fiber basis,
/// entry (gamma, tau) = f(gamma tau^-1) sigma(gamma tau^-1, tau).
pub fn regular_rep(ctx: &AlgebraContext, x: u32, f: &Section) -> CMatrix {
    let g = ctx.groupoid();
    let basis = g.s_fiber(x);
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for (row, &gamma) in basis.iter().enumerate() {
        for (col, &tau) in basis.iter().enumerate() {
            let ti = g.inv(tau).expect("total inverse");
            let a = g.compose(gamma, ti).expect("same source fiber");
            let v = f.value(a);
            if v.norm() != 0.0 {
                m.set(row, col, v * ctx.sigma.get(a, tau));
            }
        }
    }
    m
}

/// max over units y of the larger of the absolute row sums of f and f*
/// along source fibers.
pub fn i_norm(ctx: &AlgebraContext, f: &Section) -> f64 {
    let g = ctx.groupoid();
    let fs = star(ctx, f);
    let mut best: f64 = 0.0;
    for y in 0..g.n_units() as u32 {
        let a: f64 = g.s_fiber(y).iter().map(|&t| f.value(t).norm()).sum();
        let b: f64 = g.s_fiber(y).iter().map(|&t| fs.value(t).norm()).sum();
        best = best.max(a).max(b);
    }
    best
}

/// Largest singular value of the regular representation over all units.
pub fn reduced_norm(ctx: &AlgebraContext, f: &Section) -> f64 {
    let g = ctx.groupoid();
    (0..g.n_units() as u32)
        .map(|x| regular_rep(ctx, x, f).operator_norm())
        .fold(0.0, f64::max)
}

/// The conditional expectation onto the diagonal: restriction to unit
/// arrows.
pub fn restriction_p(ctx: &AlgebraContext, f: &Section) -> Section {
    let g = ctx.groupoid();
    let mut out = Section::zero(ctx);
    for a in 0..g.n_arrows() as u32 {
        if g.is_unit_arrow(a) {
            out.set(a, f.value(a));
        }
    }
    out
}

/// Whether a section is supported on unit arrows (within exact
/// tolerance).
pub fn is_diagonal(ctx: &AlgebraContext, f: &Section) -> bool {
    let g = ctx.groupoid();
    (0..g.n_arrows() as u32).all(|a| g.is_unit_arrow(a) || f.value(a).norm() <= TOL_EXACT)
}

/// Whether conv(h, f) = conv(f, h) for every diagonal h; coincides with
/// the open support lying in the isotropy bundle.
pub fn commutes_with_diagonal(ctx: &AlgebraContext, f: &Section) -> bool {
    let g = ctx.groupoid();
    for x in 0..g.n_units() as u32 {
        let ua = g.unit_arrow(x).expect("valid groupoid has unit arrows");
        let h = Section::indicator(ctx, ua);
        let left = conv(ctx, &h, f);
        let right = conv(ctx, f, &h);
        if left.max_abs_diff(&right) > TOL_EXACT {
            return false;
        }
    }
    true
}

/// Arrows whose indicator sections commute with every diagonal section.
/// Commutation equations decouple arrow by arrow, so the commutant of
/// the diagonal is spanned by these indicators.
pub fn diagonal_commutant_arrows(ctx: &AlgebraContext) -> Vec<u32> {
    let g = ctx.groupoid();
    (0..g.n_arrows() as u32)
        .filter(|&a| commutes_with_diagonal(ctx, &Section::indicator(ctx, a)))
        .collect()
}

/// Whether the diagonal is a maximal abelian subalgebra: its commutant,
/// computed from the decoupled basis equations, is no bigger than the
/// diagonal itself.
pub fn is_masa(ctx: &AlgebraContext) -> bool {
    let g = ctx.groupoid();
    diagonal_commutant_arrows(ctx).into_iter().all(|a| g.is_unit_arrow(a))
}

/// Whether n B n* and n* B n land in the diagonal B, checked on the
/// diagonal basis.
pub fn normalizer_membership(ctx: &AlgebraContext, n: &Section) -> bool {
    let g = ctx.groupoid();
    let ns = star(ctx, n);
    for x in 0..g.n_units() as u32 {
        let ua = g.unit_arrow(x).expect("valid groupoid has unit arrows");
        let h = Section::indicator(ctx, ua);
        if !is_diagonal(ctx, &conv(ctx, &conv(ctx, n, &h), &ns)) {
            return false;
        }
        if !is_diagonal(ctx, &conv(ctx, &conv(ctx, &ns, &h), n)) {
            return false;
        }
    }
    true
}

/// The open support as a bisection, when it is one.
pub fn open_support_bisection(ctx: &AlgebraContext, n: &Section) -> Option<Bisection> {
    Bisection::new(ctx.groupoid(), n.support()).ok()
}

pub fn open_support_is_bisection(ctx: &AlgebraContext, n: &Section) -> bool {
    open_support_bisection(ctx, n).is_some()
}

/// The partial homeomorphism of the unit space induced by a
/// bisection-supported normalizer.
pub fn normalizer_action(ctx: &AlgebraContext, n: &Section) -> Option<PartialBijection> {
    open_support_bisection(ctx, n).map(|b| crate::groupoid::canonical_action(ctx.groupoid(), &b))
}

/// Splits a section into singleton-supported pieces, each a
/// bisection-supported section.
pub fn bisection_decomposition(ctx: &AlgebraContext, f: &Section) -> Vec<Section> {
    f.support()
        .into_iter()
        .map(|a| Section::indicator(ctx, a).scale(f.value(a)))
        .collect()
}

/// Bisection-supported sections span everything: verified constructively
/// by decomposing a generic dense section and re-summing.
pub fn regularity_check(ctx: &AlgebraContext) -> bool {
    let mut generic = Section::zero(ctx);
    for a in 0..ctx.n() as u32 {
        generic.set(a, Complex64::new(1.0 + a as f64, 0.5 - a as f64));
    }
    let pieces = bisection_decomposition(ctx, &generic);
    if !pieces.iter().all(|p| open_support_is_bisection(ctx, p)) {
        return false;
    }
    let mut sum = Section::zero(ctx);
    for p in &pieces {
        sum = sum.add(p);
    }
    sum.max_abs_diff(&generic) == 0.0
}

/// One matrix block per orbit: the regular representation at the least
/// unit of the orbit. Faithful because every orbit is represented.
#[derive(Debug, Clone)]
pub struct ModelBlock {
    pub base: u32,
    pub units: Vec<u32>,
    pub basis: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct MatrixModel {
    pub blocks: Vec<ModelBlock>,
    /// arrow -> (block, row, col, phase): the first nonzero entry of the
    /// embedded indicator of that arrow.
    pub labels: BTreeMap<u32, (usize, usize, usize, Complex64)>,
}

impl MatrixModel {
    pub fn embed(&self, ctx: &AlgebraContext, f: &Section) -> Vec<CMatrix> {
        self.blocks.iter().map(|b| regular_rep(ctx, b.base, f)).collect()
    }

    pub fn norm(&self, ctx: &AlgebraContext, f: &Section) -> f64 {
        self.blocks
            .iter()
            .map(|b| regular_rep(ctx, b.base, f).operator_norm())
            .fold(0.0, f64::max)
    }
}

pub fn matrix_model(ctx: &AlgebraContext) -> MatrixModel {
    let g = ctx.groupoid();
    let mut blocks = Vec::new();
    for orbit in g.orbits() {
        let base = orbit[0];
        blocks.push(ModelBlock { base, units: orbit, basis: g.s_fiber(base).to_vec() });
    }
    let mut labels = BTreeMap::new();
    for a in 0..g.n_arrows() as u32 {
        let (bi, block) = blocks
            .iter()
            .enumerate()
            .find(|(_, b)| b.units.contains(&g.src(a)))
            .expect("orbits cover all units");
        // tau: least basis arrow whose range meets the source of a; then
        // the indicator of a hits (a tau, tau).
        let &tau = block
            .basis
            .iter()
            .find(|&&t| g.dst(t) == g.src(a))
            .expect("orbit units are connected to the base");
        let gamma = g.compose(a, tau).expect("range of tau is source of a");
        let row = block.basis.iter().position(|&t| t == gamma).unwrap();
        let col = block.basis.iter().position(|&t| t == tau).unwrap();
        labels.insert(a, (bi, row, col, ctx.sigma.get(a, tau)));
    }
    MatrixModel { blocks, labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cyclic_group, transitive_groupoid};
    use crate::groupoid::pair_groupoid;
    use crate::util::TOL_NORM;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn points(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn pair_ctx(n: usize) -> AlgebraContext {
        let pts: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        AlgebraContext::untwisted(pair_groupoid(&pts).unwrap())
    }

    fn z2_bundle_ctx() -> AlgebraContext {
        AlgebraContext::untwisted(transitive_groupoid(&points(&["x"]), &cyclic_group(2)))
    }

    #[test]
    fn units_indicator_is_neutral() {
        let ctx = pair_ctx(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = Section::random(&ctx, &mut rng);
        let one = Section::units_indicator(&ctx);
        assert_eq!(conv(&ctx, &one, &f).max_abs_diff(&f), 0.0);
        assert_eq!(conv(&ctx, &f, &one).max_abs_diff(&f), 0.0);
    }

    #[test]
    fn matrix_units_multiply() {
        let ctx = pair_ctx(2);
        let g = ctx.groupoid();
        // e12 corresponds to the arrow with range 1, source 2: "2>1".
        let e12 = Section::indicator(&ctx, g.arrow_index("2>1").unwrap());
        let e21 = Section::indicator(&ctx, g.arrow_index("1>2").unwrap());
        let e11 = Section::indicator(&ctx, g.arrow_index("1>1").unwrap());
        assert_eq!(conv(&ctx, &e12, &e21).max_abs_diff(&e11), 0.0);
        // And the other order gives e22.
        let e22 = Section::indicator(&ctx, g.arrow_index("2>2").unwrap());
        assert_eq!(conv(&ctx, &e21, &e12).max_abs_diff(&e22), 0.0);
    }

    #[test]
    fn conv_matches_matrix_product_under_embed() {
        let pts = points(&["1", "2", "3"]);
        let g = pair_groupoid(&pts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sigma = Cocycle2::random(&g, &mut rng);
        let ctx = AlgebraContext::new(sigma);
        let model = matrix_model(&ctx);
        for _ in 0..25 {
            let f = Section::random(&ctx, &mut rng);
            let h = Section::random(&ctx, &mut rng);
            let fh = conv(&ctx, &f, &h);
            let left = model.embed(&ctx, &fh);
            let fm = model.embed(&ctx, &f);
            let hm = model.embed(&ctx, &h);
            for (l, (a, b)) in left.iter().zip(fm.iter().zip(hm.iter())) {
                assert!(l.sub(&a.mul(b)).max_abs_entry() < TOL_EXACT);
            }
        }
    }

    #[test]
    fn star_is_conjugate_transpose_untwisted() {
        let ctx = pair_ctx(2);
        let g = ctx.groupoid();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Section::random(&ctx, &mut rng);
        let fs = star(&ctx, &f);
        for a in 0..g.n_arrows() as u32 {
            assert_eq!(fs.value(a), f.value(g.inv(a).unwrap()).conj());
        }
    }

    #[test]
    fn star_involutive_and_antimultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (_, g) in crate::corpus::exhaustive_groupoids_up_to(6).into_iter().step_by(7) {
            let sigma = Cocycle2::random(&g, &mut rng);
            let ctx = AlgebraContext::new(sigma);
            let f = Section::random(&ctx, &mut rng);
            let h = Section::random(&ctx, &mut rng);
            assert!(star(&ctx, &star(&ctx, &f)).max_abs_diff(&f) < TOL_EXACT);
            let lhs = star(&ctx, &conv(&ctx, &f, &h));
            let rhs = conv(&ctx, &star(&ctx, &h), &star(&ctx, &f));
            assert!(lhs.max_abs_diff(&rhs) < TOL_EXACT);
        }
    }

    #[test]
    fn regular_rep_shapes() {
        let ctx = pair_ctx(2);
        let g = ctx.groupoid();
        let one = Section::units_indicator(&ctx);
        let x = 0u32;
        let id = regular_rep(&ctx, x, &one);
        assert!(id.sub(&CMatrix::identity(2)).max_abs_entry() == 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Section::random(&ctx, &mut rng);
        let m = regular_rep(&ctx, x, &f);
        // Basis at unit "1" is its source fiber; entry (gamma, tau) =
        // f(gamma tau^-1), so every arrow value appears once.
        let basis = g.s_fiber(x);
        for (row, &gamma) in basis.iter().enumerate() {
            for (col, &tau) in basis.iter().enumerate() {
                let a = g.compose(gamma, g.inv(tau).unwrap()).unwrap();
                assert_eq!(m.get(row, col), f.value(a));
            }
        }
    }

    #[test]
    fn reproducing_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for ctx in [pair_ctx(3), z2_bundle_ctx()] {
            let sigma = Cocycle2::random(ctx.groupoid(), &mut rng);
            let ctx = AlgebraContext::new(sigma);
            let g = ctx.groupoid();
            let f = Section::random(&ctx, &mut rng);
            for a in 0..g.n_arrows() as u32 {
                let x = g.src(a);
                let m = regular_rep(&ctx, x, &f);
                let basis = g.s_fiber(x);
                let row = basis.iter().position(|&t| t == a).unwrap();
                let col = basis.iter().position(|&t| t == g.unit_arrow(x).unwrap()).unwrap();
                assert!((m.get(row, col) - f.value(a)).norm() < TOL_EXACT);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let ctx = pair_ctx(3);
        let g = ctx.groupoid();
        let e = Section::indicator(&ctx, g.arrow_index("2>1").unwrap());
        assert!((i_norm(&ctx, &e) - 1.0).abs() < TOL_EXACT);
        assert!((reduced_norm(&ctx, &e) - 1.0).abs() < TOL_NORM);

        let mut ones = Section::zero(&ctx);
        for a in 0..g.n_arrows() as u32 {
            ones.set(a, Complex64::ONE);
        }
        assert!((i_norm(&ctx, &ones) - 3.0).abs() < TOL_EXACT);
        assert!((reduced_norm(&ctx, &ones) - 3.0).abs() < TOL_NORM);
    }

    #[test]
    fn norm_inequalities_on_random_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ctx in [pair_ctx(3), z2_bundle_ctx()] {
            let sigma = Cocycle2::random(ctx.groupoid(), &mut rng);
            let ctx = AlgebraContext::new(sigma);
            for _ in 0..20 {
                let f = Section::random(&ctx, &mut rng);
                let rn = reduced_norm(&ctx, &f);
                assert!(f.max_abs() <= rn + TOL_NORM);
                assert!(rn <= i_norm(&ctx, &f) + TOL_NORM);
                let sf = conv(&ctx, &star(&ctx, &f), &f);
                assert!((reduced_norm(&ctx, &sf) - rn * rn).abs() < TOL_NORM);
            }
        }
    }

    #[test]
    fn restriction_is_expectation() {
        let ctx = pair_ctx(3);
        let g = ctx.groupoid();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = Section::random(&ctx, &mut rng);
        let p = restriction_p(&ctx, &f);
        assert!(is_diagonal(&ctx, &p));
        assert_eq!(restriction_p(&ctx, &p).max_abs_diff(&p), 0.0);
        let off = Section::indicator(&ctx, g.arrow_index("2>1").unwrap());
        assert!(restriction_p(&ctx, &off).max_abs() == 0.0);
        // Faithfulness formula.
        let sf = conv(&ctx, &star(&ctx, &f), &f);
        let d = restriction_p(&ctx, &sf);
        for x in 0..g.n_units() as u32 {
            let expect: f64 = g.s_fiber(x).iter().map(|&t| f.value(t).norm_sqr()).sum();
            let got = d.value(g.unit_arrow(x).unwrap());
            assert!((got.re - expect).abs() < TOL_EXACT && got.im.abs() < TOL_EXACT);
        }
    }

    #[test]
    fn diagonal_commutation_matches_isotropy_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ctx in [pair_ctx(2), z2_bundle_ctx()] {
            let g = ctx.groupoid().clone();
            let sigma = Cocycle2::random(&g, &mut rng);
            let ctx = AlgebraContext::new(sigma);
            for a in 0..g.n_arrows() as u32 {
                let f = Section::indicator(&ctx, a);
                let expected = g.src(a) == g.dst(a);
                assert_eq!(commutes_with_diagonal(&ctx, &f), expected);
            }
        }
    }

    #[test]
    fn masa_examples() {
        assert!(is_masa(&pair_ctx(2)));
        assert!(!is_masa(&z2_bundle_ctx()));
    }

    #[test]
    fn normalizer_examples() {
        let ctx = pair_ctx(2);
        let g = ctx.groupoid();
        // A permutation-supported section: the off-diagonal swap.
        let mut n = Section::zero(&ctx);
        n.set(g.arrow_index("2>1").unwrap(), Complex64::new(0.0, 1.0));
        n.set(g.arrow_index("1>2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(open_support_is_bisection(&ctx, &n));
        assert!(normalizer_membership(&ctx, &n));

        // Two arrows sharing a source: not a bisection, not a normalizer.
        let mut bad = Section::zero(&ctx);
        bad.set(g.arrow_index("1>1").unwrap(), Complex64::ONE);
        bad.set(g.arrow_index("1>2").unwrap(), Complex64::ONE);
        assert!(!open_support_is_bisection(&ctx, &bad));
        assert!(!normalizer_membership(&ctx, &bad));

        // Isotropy indicator on the Z/2 bundle: a normalizer whose
        // action on the single unit is trivial.
        let ctx = z2_bundle_ctx();
        let g = ctx.groupoid();
        let u = Section::indicator(&ctx, g.arrow_index("x>x:a").unwrap());
        assert!(normalizer_membership(&ctx, &u));
        assert!(open_support_is_bisection(&ctx, &u));
        let act = normalizer_action(&ctx, &u).unwrap();
        assert_eq!(act.apply("x"), Some("x"));
    }

    #[test]
    fn regularity_holds_with_exact_reassembly() {
        assert!(regularity_check(&pair_ctx(3)));
        assert!(regularity_check(&z2_bundle_ctx()));
    }

    #[test]
    fn matrix_model_shapes() {
        let ctx = pair_ctx(3);
        let model = matrix_model(&ctx);
        assert_eq!(model.blocks.len(), 1);
        assert_eq!(model.blocks[0].basis.len(), 3);

        let ctx = z2_bundle_ctx();
        let g = ctx.groupoid();
        let model = matrix_model(&ctx);
        assert_eq!(model.blocks.len(), 1);
        assert_eq!(model.blocks[0].basis.len(), 2);
        // The nontrivial element acts as the flip in the regular
        // representation.
        let a = Section::indicator(&ctx, g.arrow_index("x>x:a").unwrap());
        let m = &model.embed(&ctx, &a)[0];
        assert_eq!(m.get(0, 0), Complex64::ZERO);
        assert_eq!(m.get(0, 1), Complex64::ONE);
        assert_eq!(m.get(1, 0), Complex64::ONE);
        assert_eq!(m.get(1, 1), Complex64::ZERO);
    }

    #[test]
    fn coboundary_model_is_diagonally_equivalent_to_untwisted() {
        let pts = points(&["1", "2", "3"]);
        let g = pair_groupoid(&pts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let c = crate::cocycle::Cochain1::random(&g, &mut rng);
        let sigma = crate::cocycle::coboundary(&c);
        let twisted = AlgebraContext::new(sigma);
        let flat = AlgebraContext::untwisted(g.clone());
        let model_t = matrix_model(&twisted);
        let model_f = matrix_model(&flat);
        let f = Section::random(&twisted, &mut rng);
        // pi^sigma(f) = D* pi^0(f c) D with D = diag(c(tau)).
        let mut fc = Section::zero(&flat);
        for a in 0..g.n_arrows() as u32 {
            fc.set(a, f.value(a) * c.value(a));
        }
        let mt = &model_t.embed(&twisted, &f)[0];
        let mf = &model_f.embed(&flat, &fc)[0];
        let basis = &model_t.blocks[0].basis;
        assert_eq!(basis, &model_f.blocks[0].basis);
        for (row, &gamma) in basis.iter().enumerate() {
            for (col, &tau) in basis.iter().enumerate() {
                let want = c.value(gamma).conj() * mf.get(row, col) * c.value(tau);
                assert!((mt.get(row, col) - want).norm() < TOL_EXACT);
            }
        }
        // And the model norm agrees with the reduced norm.
        assert!((model_t.norm(&twisted, &f) - reduced_norm(&twisted, &f)).abs() < TOL_NORM);
    }

    #[test]
    fn uniqueness_witness_for_off_diagonal_indicators() {
        let ctx = pair_ctx(3);
        let g = ctx.groupoid();
        for a in 0..g.n_arrows() as u32 {
            if g.src(a) == g.dst(a) {
                continue;
            }
            let f = Section::indicator(&ctx, a);
            // h = 1 at s(a), 0 at r(a).
            let mut h = Section::zero(&ctx);
            h.set(g.unit_arrow(g.src(a)).unwrap(), Complex64::ONE);
            // h after the bisection action of {a}: supported at the
            // preimage of s(a), which does not exist, so it vanishes at
            // s(a); it is h(alpha(y)) at each unit y in the domain.
            let bis = Bisection::new(g, [a]).unwrap();
            let act = crate::groupoid::canonical_action(g, &bis);
            let mut h_alpha = Section::zero(&ctx);
            for y in 0..g.n_units() as u32 {
                if let Some(img) = act.apply(g.unit_name(y)) {
                    let img_idx = g.unit_index(img).unwrap();
                    h_alpha.set(
                        g.unit_arrow(y).unwrap(),
                        h.value(g.unit_arrow(img_idx).unwrap()),
                    );
                }
            }
            let lhs = conv(&ctx, &h, &f);
            let rhs = conv(&ctx, &f, &h_alpha);
            assert_eq!(lhs.max_abs_diff(&rhs), 0.0);
            // Any diagonal-bimodular idempotent onto the diagonal must
            // send f to h P(f) h-ish terms; here both sides vanish.
            assert_eq!(lhs.max_abs(), 0.0);
        }
    }
}
