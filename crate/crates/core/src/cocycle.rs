//! Unit-modulus 2-cocycles on finite groupoids, coboundaries, and the
//! cohomology solver.
//!
//! Two representations are supported: the groupoid form, a value on every
//! composable pair of arrows, and the relation form, a value on triples of
//! related units with the twisted-matrix-multiplication identity. The
//! conversion between them renormalizes so that unit pairs carry the value
//! 1 exactly; that exactness is what lets downstream diagonal checks work
//! without tolerances.
//!
//! The coboundary solver gauges a witness to 1 on a star of arrows out of
//! each orbit's least unit, which reduces the system to the isotropy group
//! there, and then solves the group system by constraint propagation plus
//! branching over the finitely many admissible root values. A cocycle is
//! reported as a coboundary only after the witness has been re-verified
//! against the input on every composable pair.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::groupoid::FiniteGroupoid;
use crate::util::{renormalize_unit, TOL_EXACT};

/// Equality tolerance used while searching for a witness; the final
/// verification is stricter ([`TOL_EXACT`]).
pub const TOL_SOLVE: f64 = 1e-9;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("value at ({0}, {1}) is off the unit circle")]
    OffModulus(String, String),
    #[error("pair ({0}, {1}) is not composable")]
    NotComposable(String, String),
    #[error("unit pair ({0}, {1}) must carry the value 1")]
    NotNormalized(String, String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("unknown unit {0:?}")]
    UnknownUnit(String),
    #[error("cochain value on {0} is off the unit circle")]
    CochainOffModulus(String),
    #[error("cochain value on unit arrow {0} must be 1")]
    CochainNotNormalized(String),
    #[error("the two cocycles live on different groupoids")]
    GroupoidMismatch,
    #[error("relation groupoid is not principal")]
    NotPrincipal,
    #[error("relation groupoid fails validation")]
    InvalidRelation,
    #[error("units ({0}, {1}, {2}) are not pairwise related")]
    NotRelated(String, String, String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
}

/// First counterexample found by [`Cocycle2::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleViolation {
    OffModulus { left: String, right: String },
    NotNormalized { left: String, right: String },
    Identity { first: String, second: String, third: String },
}

impl std::fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CocycleViolation::OffModulus { left, right } => {
                write!(f, "value at ({left}, {right}) is off the unit circle")
            }
            CocycleViolation::NotNormalized { left, right } => {
                write!(f, "unit pair ({left}, {right}) does not carry 1")
            }
            CocycleViolation::Identity { first, second, third } => {
                write!(f, "cocycle identity fails on ({first}, {second}, {third})")
            }
        }
    }
}

/// A normalized unit-modulus 2-cocycle on the composable pairs of a
/// groupoid. Values on pairs involving a unit arrow are exactly 1.
#[derive(Debug, Clone)]
pub struct Cocycle2 {
    g: FiniteGroupoid,
    sigma: Vec<Complex64>,
}

impl Cocycle2 {
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        let n = g.n_arrows();
        Cocycle2 { g: g.clone(), sigma: vec![ONE; n * n] }
    }

    /// Builds a cocycle from explicit values on composable pairs; omitted
    /// pairs default to 1. Values are renormalized onto the unit circle
    /// when within 1e-9 of it, rejected otherwise. Unit pairs must carry 1.
    pub fn from_values(
        g: &FiniteGroupoid,
        values: &[(String, String, Complex64)],
    ) -> Result<Self, CocycleError> {
        let mut c = Cocycle2::trivial(g);
        let n = g.n_arrows();
        for (a, b, v) in values {
            let ia = g.arrow_index(a).ok_or_else(|| CocycleError::UnknownArrow(a.clone()))?;
            let ib = g.arrow_index(b).ok_or_else(|| CocycleError::UnknownArrow(b.clone()))?;
            if g.compose(ia, ib).is_none() {
                return Err(CocycleError::NotComposable(a.clone(), b.clone()));
            }
            let v = renormalize_unit(*v).ok_or_else(|| CocycleError::OffModulus(a.clone(), b.clone()))?;
            if g.is_unit_arrow(ia) || g.is_unit_arrow(ib) {
                if (v - ONE).norm() > TOL_SOLVE {
                    return Err(CocycleError::NotNormalized(a.clone(), b.clone()));
                }
                continue; // keep the exact 1 already in place
            }
            c.sigma[ia as usize * n + ib as usize] = v;
        }
        Ok(c)
    }

    /// Internal constructor from a dense table; entries on non-composable
    /// pairs are ignored, unit pairs are forced to exactly 1.
    fn from_dense(g: &FiniteGroupoid, dense: Vec<Complex64>) -> Result<Self, CocycleError> {
        let n = g.n_arrows();
        assert_eq!(dense.len(), n * n);
        let mut sigma = vec![ONE; n * n];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if g.compose(a, b).is_none() {
                    continue;
                }
                if g.is_unit_arrow(a) || g.is_unit_arrow(b) {
                    continue;
                }
                let v = dense[a as usize * n + b as usize];
                let v = renormalize_unit(v).ok_or_else(|| {
                    CocycleError::OffModulus(g.arrow(a).id.clone(), g.arrow(b).id.clone())
                })?;
                sigma[a as usize * n + b as usize] = v;
            }
        }
        Ok(Cocycle2 { g: g.clone(), sigma })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.g
    }

    /// Value on a composable pair of arrow indices.
    pub fn get(&self, a: u32, b: u32) -> Complex64 {
        debug_assert!(self.g.compose(a, b).is_some(), "cocycle queried off G(2)");
        self.sigma[a as usize * self.g.n_arrows() + b as usize]
    }

    /// Entries that differ from 1, in canonical pair order.
    pub fn nontrivial_values(&self) -> Vec<(String, String, Complex64)> {
        let n = self.g.n_arrows();
        let mut out = Vec::new();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if self.g.compose(a, b).is_none() {
                    continue;
                }
                let v = self.sigma[a as usize * n + b as usize];
                if (v - ONE).norm() > 0.0 {
                    out.push((self.g.arrow(a).id.clone(), self.g.arrow(b).id.clone(), v));
                }
            }
        }
        out
    }

    /// Normalization and associativity identity over all composable
    /// triples; returns the first counterexample.
    pub fn check(&self) -> Result<(), CocycleViolation> {
        let n = self.g.n_arrows() as u32;
        for a in 0..n {
            for b in 0..n {
                if self.g.compose(a, b).is_none() {
                    continue;
                }
                let v = self.get(a, b);
                if (v.norm() - 1.0).abs() > TOL_SOLVE {
                    return Err(CocycleViolation::OffModulus {
                        left: self.g.arrow(a).id.clone(),
                        right: self.g.arrow(b).id.clone(),
                    });
                }
                if (self.g.is_unit_arrow(a) || self.g.is_unit_arrow(b)) && v != ONE {
                    return Err(CocycleViolation::NotNormalized {
                        left: self.g.arrow(a).id.clone(),
                        right: self.g.arrow(b).id.clone(),
                    });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.g.compose(a, b) else { continue };
                for c in 0..n {
                    let Some(bc) = self.g.compose(b, c) else { continue };
                    let lhs = self.get(a, b) * self.get(ab, c);
                    let rhs = self.get(b, c) * self.get(a, bc);
                    if (lhs - rhs).norm() > TOL_SOLVE {
                        return Err(CocycleViolation::Identity {
                            first: self.g.arrow(a).id.clone(),
                            second: self.g.arrow(b).id.clone(),
                            third: self.g.arrow(c).id.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Seeded random cocycle: the coboundary of a random 1-cochain. On a
    /// principal groupoid every cocycle is of this form.
    pub fn random<R: Rng>(g: &FiniteGroupoid, rng: &mut R) -> Self {
        coboundary(&Cochain1::random(g, rng))
    }
}

/// A unit-modulus function on arrows, equal to 1 on unit arrows; the
/// parameter of a coboundary.
#[derive(Debug, Clone)]
pub struct Cochain1 {
    g: FiniteGroupoid,
    values: Vec<Complex64>,
}

impl Cochain1 {
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        Cochain1 { g: g.clone(), values: vec![ONE; g.n_arrows()] }
    }

    pub fn from_values(
        g: &FiniteGroupoid,
        values: &[(String, Complex64)],
    ) -> Result<Self, CocycleError> {
        let mut c = Cochain1::trivial(g);
        for (id, v) in values {
            let a = g.arrow_index(id).ok_or_else(|| CocycleError::UnknownArrow(id.clone()))?;
            let v = renormalize_unit(*v).ok_or_else(|| CocycleError::CochainOffModulus(id.clone()))?;
            if g.is_unit_arrow(a) {
                if (v - ONE).norm() > TOL_SOLVE {
                    return Err(CocycleError::CochainNotNormalized(id.clone()));
                }
                continue;
            }
            c.values[a as usize] = v;
        }
        Ok(c)
    }

    fn from_vec(g: &FiniteGroupoid, values: Vec<Complex64>) -> Self {
        Cochain1 { g: g.clone(), values }
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.g
    }

    pub fn value(&self, a: u32) -> Complex64 {
        self.values[a as usize]
    }

    pub fn values(&self) -> impl Iterator<Item = (&str, Complex64)> {
        self.g.arrows().iter().zip(&self.values).map(|(a, v)| (a.id.as_str(), *v))
    }

    pub fn random<R: Rng>(g: &FiniteGroupoid, rng: &mut R) -> Self {
        let values = (0..g.n_arrows() as u32)
            .map(|a| {
                if g.is_unit_arrow(a) {
                    ONE
                } else {
                    Complex64::from_polar(1.0, rng.gen::<f64>() * TAU)
                }
            })
            .collect();
        Cochain1 { g: g.clone(), values }
    }
}

/// The coboundary of a 1-cochain: sigma(a, b) = c(a) c(b) / c(ab).
pub fn coboundary(c: &Cochain1) -> Cocycle2 {
    let g = &c.g;
    let n = g.n_arrows();
    let mut dense = vec![ONE; n * n];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if let Some(ab) = g.compose(a, b) {
                dense[a as usize * n + b as usize] = c.value(a) * c.value(b) * c.value(ab).conj();
            }
        }
    }
    Cocycle2::from_dense(g, dense).expect("coboundary of a unit-modulus cochain is unit-modulus")
}

/// Decides whether a cocycle is a coboundary and produces a witness.
///
/// Per orbit, the witness is gauged to 1 on a star of arrows from the
/// orbit's least unit, which pins every arrow's value to a known phase
/// times the value at one isotropy arrow there. The remaining group system
/// is solved by propagation and branching over root values: a solution
/// must satisfy c(h)^n = prod_j rhs(h, h^j) with n the order of h, leaving
/// at most n candidates per isotropy arrow. The search is exhaustive, so
/// absence of a witness means the class is nontrivial.
pub fn is_coboundary(sigma: &Cocycle2) -> Result<Option<Cochain1>, CocycleError> {
    sigma.check().map_err(|v| CocycleError::NotACocycle(v.to_string()))?;
    let g = sigma.groupoid();
    let mut witness = vec![ONE; g.n_arrows()];

    for orbit in g.orbits() {
        let base = orbit[0];
        // Star of tree arrows: for each unit of the orbit the least arrow
        // from the base; the base itself gets its unit arrow.
        let mut tree: BTreeMap<u32, u32> = BTreeMap::new();
        for &y in &orbit {
            let t = if y == base {
                g.unit_arrow(base).expect("valid groupoid has unit arrows")
            } else {
                (0..g.n_arrows() as u32)
                    .find(|&a| g.src(a) == base && g.dst(a) == y)
                    .expect("orbit units are connected by arrows")
            };
            tree.insert(y, t);
        }
        let tree_inv_phase: BTreeMap<u32, Complex64> = orbit
            .iter()
            .map(|&y| {
                let t = tree[&y];
                (y, sigma.get(t, g.inv(t).expect("valid groupoid")))
            })
            .collect();

        // Isotropy group at the base.
        let iso: Vec<u32> = (0..g.n_arrows() as u32)
            .filter(|&a| g.src(a) == base && g.dst(a) == base)
            .collect();
        let iso_local: BTreeMap<u32, usize> = iso.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let unit_local = iso_local[&g.unit_arrow(base).unwrap()];

        // Decompose each arrow of the orbit as (phase, isotropy arrow).
        let orbit_arrows: Vec<u32> = (0..g.n_arrows() as u32)
            .filter(|&a| orbit.contains(&g.src(a)))
            .collect();
        let mut decomp: BTreeMap<u32, (Complex64, usize)> = BTreeMap::new();
        for &a in &orbit_arrows {
            let ty = tree[&g.src(a)];
            let tz = tree[&g.dst(a)];
            let tz_inv = g.inv(tz).unwrap();
            let at = g.compose(a, ty).expect("tree arrow composes");
            let h = g.compose(tz_inv, at).expect("conjugation lands in isotropy");
            let p = sigma.get(a, ty) * sigma.get(tz_inv, at) * tree_inv_phase[&g.dst(a)].conj();
            decomp.insert(a, (p, iso_local[&h]));
        }

        // Reduced equations c(h1) c(h2) = rhs * c(h1 h2), one per isotropy
        // pair; conflicting reductions already rule out a witness.
        let k = iso.len();
        let mut mul = vec![0usize; k * k];
        for i in 0..k {
            for j in 0..k {
                mul[i * k + j] = iso_local[&g.compose(iso[i], iso[j]).unwrap()];
            }
        }
        let mut rhs: Vec<Option<Complex64>> = vec![None; k * k];
        for &a in &orbit_arrows {
            for &b in &orbit_arrows {
                let Some(ab) = g.compose(a, b) else { continue };
                let (pa, ha) = decomp[&a];
                let (pb, hb) = decomp[&b];
                let (pab, hab) = decomp[&ab];
                debug_assert_eq!(mul[ha * k + hb], hab);
                let r = sigma.get(a, b) * pab * (pa * pb).conj();
                match &rhs[ha * k + hb] {
                    Some(prev) => {
                        if (prev - r).norm() > TOL_SOLVE {
                            return Ok(None);
                        }
                    }
                    None => rhs[ha * k + hb] = Some(r),
                }
            }
        }
        let rhs: Vec<Complex64> = rhs
            .into_iter()
            .map(|o| o.expect("all isotropy pairs are composable, hence constrained"))
            .collect();

        let mut vals: Vec<Option<Complex64>> = vec![None; k];
        vals[unit_local] = Some(ONE);
        let Some(solution) = solve_group_system(k, &mul, &rhs, vals) else {
            return Ok(None);
        };

        for &a in &orbit_arrows {
            let (p, h) = decomp[&a];
            witness[a as usize] = p * solution[h];
        }
    }

    // Gauge choices force exact 1 on units; snap residual drift anyway.
    for x in 0..g.n_units() as u32 {
        if let Some(u) = g.unit_arrow(x) {
            witness[u as usize] = ONE;
        }
    }
    let candidate = Cochain1::from_vec(g, witness);
    let back = coboundary(&candidate);
    for a in 0..g.n_arrows() as u32 {
        for b in 0..g.n_arrows() as u32 {
            if g.compose(a, b).is_some() && (back.get(a, b) - sigma.get(a, b)).norm() > TOL_EXACT {
                return Ok(None);
            }
        }
    }
    Ok(Some(candidate))
}

/// Backtracking solver for c(i) c(j) = rhs(i, j) c(ij) over unit-modulus
/// unknowns. Propagation fills values forced by equations with two known
/// entries; branching enumerates the admissible roots for the least
/// remaining unknown.
fn solve_group_system(
    k: usize,
    mul: &[usize],
    rhs: &[Complex64],
    mut vals: Vec<Option<Complex64>>,
) -> Option<Vec<Complex64>> {
    loop {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                let target = mul[i * k + j];
                let r = rhs[i * k + j];
                match (vals[i], vals[j], vals[target]) {
                    (Some(ci), Some(cj), Some(ct)) => {
                        if (ci * cj - r * ct).norm() > TOL_SOLVE {
                            return None;
                        }
                    }
                    (Some(ci), Some(cj), None) => {
                        vals[target] = Some(ci * cj * r.conj());
                        changed = true;
                    }
                    (Some(ci), None, Some(ct)) => {
                        vals[j] = Some(r * ct * ci.conj());
                        changed = true;
                    }
                    (None, Some(cj), Some(ct)) => {
                        vals[i] = Some(r * ct * cj.conj());
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    let Some(pick) = (0..k).find(|&i| vals[i].is_none()) else {
        return Some(vals.into_iter().map(|v| v.unwrap()).collect());
    };
    // Walk the powers of the element until a known value: the equations
    // telescope to c(pick)^n = (accumulated rhs) * c(pick^n).
    let mut power = pick;
    let mut kk = ONE;
    let mut n = 1usize;
    let target = loop {
        kk *= rhs[pick * k + power];
        power = mul[pick * k + power];
        n += 1;
        if let Some(v) = vals[power] {
            break kk * v;
        }
        if n > k + 1 {
            // A group walk reaches the unit within the group order; only a
            // malformed table gets here.
            return None;
        }
    };
    let base_arg = target.arg() / n as f64;
    for m in 0..n {
        let cand = Complex64::from_polar(1.0, base_arg + TAU * m as f64 / n as f64);
        let mut next = vals.clone();
        next[pick] = Some(cand);
        if let Some(sol) = solve_group_system(k, mul, rhs, next) {
            return Some(sol);
        }
    }
    None
}

/// Solves s1 = s2 * coboundary(c) for c; the witness relates the two
/// cohomology classes.
pub fn cocycles_cohomologous(s1: &Cocycle2, s2: &Cocycle2) -> Result<Option<Cochain1>, CocycleError> {
    if s1.groupoid() != s2.groupoid() {
        return Err(CocycleError::GroupoidMismatch);
    }
    let g = s1.groupoid();
    let n = g.n_arrows();
    let mut dense = vec![ONE; n * n];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if g.compose(a, b).is_some() {
                dense[a as usize * n + b as usize] = s1.get(a, b) * s2.get(a, b).conj();
            }
        }
    }
    let ratio = Cocycle2::from_dense(g, dense)?;
    is_coboundary(&ratio)
}

/// First counterexample found by [`FMCocycle::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMViolation {
    pub x: String,
    pub y: String,
    pub z: String,
    pub t: String,
}

impl std::fmt::Display for FMViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "twisted-multiplication identity fails on ({}, {}, {}, {})",
            self.x, self.y, self.z, self.t
        )
    }
}

/// A unit-modulus cocycle on triples of related units of a principal
/// groupoid, the coefficient system of twisted matrix multiplication
/// f*g(x, z) = sum_y f(x, y) g(y, z) sigma(x, y, z).
#[derive(Debug, Clone)]
pub struct FMCocycle {
    relation: FiniteGroupoid,
    values: BTreeMap<(u32, u32, u32), Complex64>,
}

impl FMCocycle {
    /// `relation` must be a valid principal groupoid; omitted triples
    /// default to 1. Triples must lie within one orbit.
    pub fn from_values(
        relation: &FiniteGroupoid,
        values: &[(String, String, String, Complex64)],
    ) -> Result<Self, CocycleError> {
        if !relation.validate().is_empty() {
            return Err(CocycleError::InvalidRelation);
        }
        if !relation.is_principal() {
            return Err(CocycleError::NotPrincipal);
        }
        let mut fm = FMCocycle { relation: relation.clone(), values: BTreeMap::new() };
        for (x, y, z, v) in values {
            let ix = relation.unit_index(x).ok_or_else(|| CocycleError::UnknownUnit(x.clone()))?;
            let iy = relation.unit_index(y).ok_or_else(|| CocycleError::UnknownUnit(y.clone()))?;
            let iz = relation.unit_index(z).ok_or_else(|| CocycleError::UnknownUnit(z.clone()))?;
            if !fm.related(ix, iy) || !fm.related(iy, iz) {
                return Err(CocycleError::NotRelated(x.clone(), y.clone(), z.clone()));
            }
            let v = renormalize_unit(*v)
                .ok_or_else(|| CocycleError::OffModulus(format!("{x},{y}"), z.clone()))?;
            fm.values.insert((ix, iy, iz), v);
        }
        Ok(fm)
    }

    pub fn trivial(relation: &FiniteGroupoid) -> Result<Self, CocycleError> {
        FMCocycle::from_values(relation, &[])
    }

    pub fn relation(&self) -> &FiniteGroupoid {
        &self.relation
    }

    fn related(&self, x: u32, y: u32) -> bool {
        self.arrow_between(x, y).is_some()
    }

    /// In a principal groupoid there is at most one arrow between two
    /// units; its presence is the relation.
    fn arrow_between(&self, x: u32, y: u32) -> Option<u32> {
        (0..self.relation.n_arrows() as u32).find(|&a| self.relation.src(a) == x && self.relation.dst(a) == y)
    }

    pub fn get(&self, x: u32, y: u32, z: u32) -> Complex64 {
        *self.values.get(&(x, y, z)).unwrap_or(&ONE)
    }

    /// The identity sigma(x,y,z) sigma(x,z,t) = sigma(x,y,t) sigma(y,z,t)
    /// over all quadruples of pairwise related units; first counterexample.
    pub fn check(&self) -> Result<(), FMViolation> {
        for orbit in self.relation.orbits() {
            for &x in &orbit {
                for &y in &orbit {
                    for &z in &orbit {
                        for &t in &orbit {
                            let lhs = self.get(x, y, z) * self.get(x, z, t);
                            let rhs = self.get(x, y, t) * self.get(y, z, t);
                            if (lhs - rhs).norm() > TOL_SOLVE {
                                let name = |u: u32| self.relation.unit_name(u).to_string();
                                return Err(FMViolation { x: name(x), y: name(y), z: name(z), t: name(t) });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Seeded random relation cocycle through the twisted-product form of a
    /// random coboundary.
    pub fn random<R: Rng>(relation: &FiniteGroupoid, rng: &mut R) -> Result<Self, CocycleError> {
        if !relation.validate().is_empty() {
            return Err(CocycleError::InvalidRelation);
        }
        if !relation.is_principal() {
            return Err(CocycleError::NotPrincipal);
        }
        // A random unit-modulus value per related pair induces
        // sigma(x,y,z) = b(x,y) b(y,z) / b(x,z), which satisfies the
        // identity by telescoping.
        let n = relation.n_units() as u32;
        let mut b: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        let fm_probe = FMCocycle { relation: relation.clone(), values: BTreeMap::new() };
        for x in 0..n {
            for y in 0..n {
                if fm_probe.related(x, y) {
                    b.insert((x, y), Complex64::from_polar(1.0, rng.gen::<f64>() * TAU));
                }
            }
        }
        let mut values = BTreeMap::new();
        for (&(x, y), &bxy) in &b {
            for z in 0..n {
                if let (Some(&byz), Some(&bxz)) = (b.get(&(y, z)), b.get(&(x, z))) {
                    values.insert((x, y, z), bxy * byz * bxz.conj());
                }
            }
        }
        Ok(FMCocycle { relation: relation.clone(), values })
    }
}

/// Transports a relation cocycle to the groupoid form: for composable
/// arrows with matrix-unit endpoints (x,y) and (y,z) the raw value is
/// sigma(x,y,z), then a coboundary renormalizes unit pairs to 1. The
/// twisted-multiplication identity must hold first.
pub fn fm_to_groupoid(fm: &FMCocycle) -> Result<Cocycle2, CocycleError> {
    fm.check().map_err(|v| CocycleError::NotACocycle(v.to_string()))?;
    let g = fm.relation();
    let n = g.n_arrows();
    let mut dense = vec![ONE; n * n];
    // k(x) = sigma(x,x,x); dividing by k(s(first)) normalizes unit pairs.
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if g.compose(a, b).is_none() {
                continue;
            }
            let x = g.dst(a);
            let y = g.src(a);
            let z = g.src(b);
            debug_assert_eq!(g.dst(b), y);
            let raw = fm.get(x, y, z);
            let ky = fm.get(y, y, y);
            dense[a as usize * n + b as usize] = raw * ky.conj();
        }
    }
    Cocycle2::from_dense(g, dense)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{pair_groupoid, transformation_groupoid, GroupTable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn bundle(elements: &[&str], rows: &[&[&str]]) -> FiniteGroupoid {
        let table = GroupTable::new(
            names(elements),
            rows.iter().map(|r| names(r)).collect(),
        )
        .unwrap();
        let mut fix = BTreeMap::new();
        fix.insert("x".to_string(), "x".to_string());
        let action: BTreeMap<_, _> =
            elements.iter().map(|e| (e.to_string(), fix.clone())).collect();
        transformation_groupoid(&table, &names(&["x"]), &action).unwrap()
    }

    fn z2_bundle() -> FiniteGroupoid {
        bundle(&["e", "a"], &[&["e", "a"], &["a", "e"]])
    }

    fn v4_bundle() -> FiniteGroupoid {
        bundle(
            &["e", "a", "b", "c"],
            &[
                &["e", "a", "b", "c"],
                &["a", "e", "c", "b"],
                &["b", "c", "e", "a"],
                &["c", "b", "a", "e"],
            ],
        )
    }

    #[test]
    fn trivial_cocycle_checks_and_is_coboundary() {
        let g = pair_groupoid(&names(&["1", "2", "3"])).unwrap();
        let s = Cocycle2::trivial(&g);
        assert!(s.check().is_ok());
        let w = is_coboundary(&s).unwrap().expect("trivial class");
        for (_, v) in w.values() {
            assert!((v - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn coboundary_roundtrip_on_mixed_groupoids() {
        let gs = vec![
            pair_groupoid(&names(&["1", "2", "3", "4"])).unwrap(),
            z2_bundle(),
            v4_bundle(),
            bundle(
                &["e", "a", "b"],
                &[&["e", "a", "b"], &["a", "b", "e"], &["b", "e", "a"]],
            ),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in &gs {
            for _ in 0..4 {
                let c = Cochain1::random(g, &mut rng);
                let s = coboundary(&c);
                assert!(s.check().is_ok());
                let w = is_coboundary(&s).unwrap().expect("coboundaries are trivial classes");
                let back = coboundary(&w);
                for a in 0..g.n_arrows() as u32 {
                    for b in 0..g.n_arrows() as u32 {
                        if g.compose(a, b).is_some() {
                            assert!((back.get(a, b) - s.get(a, b)).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_two_isotropy_square_root_witness() {
        let g = z2_bundle();
        let a = g.arrow_index("a@x").unwrap();
        let s = Cocycle2::from_values(&g, &[("a@x".into(), "a@x".into(), -ONE)]).unwrap();
        assert!(s.check().is_ok());
        let w = is_coboundary(&s).unwrap().expect("square root exists on the circle");
        // The principal branch: c(a) = i.
        assert!((w.value(a) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let back = coboundary(&w);
        assert!((back.get(a, a) - (-ONE)).norm() < 1e-12);
    }

    #[test]
    fn bilinear_flip_class_on_klein_bundle_is_not_a_coboundary() {
        let g = v4_bundle();
        // Identify a=(1,0), b=(0,1), c=(1,1) over F_2^2 and set
        // sigma(g1,g2) = (-1)^(j1 k2) with g=(k,j); antisymmetric in the
        // flip, so no symmetric coboundary can produce it.
        let second = |id: &str| match id {
            "a@x" => (1, 0),
            "b@x" => (0, 1),
            "c@x" => (1, 1),
            _ => (0, 0),
        };
        let ids = ["a@x", "b@x", "c@x"];
        let mut vals = Vec::new();
        for l in ids {
            for r in ids {
                let (_, j) = second(l);
                let (k, _) = second(r);
                if j * k % 2 == 1 {
                    vals.push((l.to_string(), r.to_string(), -ONE));
                }
            }
        }
        let s = Cocycle2::from_values(&g, &vals).unwrap();
        assert!(s.check().is_ok());
        assert!(is_coboundary(&s).unwrap().is_none());
    }

    #[test]
    fn cohomologous_after_coboundary_twist() {
        let g = z2_bundle();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s1 = Cocycle2::from_values(&g, &[("a@x".into(), "a@x".into(), -ONE)]).unwrap();
        let c = Cochain1::random(&g, &mut rng);
        let d = coboundary(&c);
        let n = g.n_arrows();
        let mut dense = vec![ONE; n * n];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if g.compose(a, b).is_some() {
                    dense[a as usize * n + b as usize] = s1.get(a, b) * d.get(a, b);
                }
            }
        }
        let s2 = Cocycle2::from_dense(&g, dense).unwrap();
        let w = cocycles_cohomologous(&s2, &s1).unwrap().expect("differ by a coboundary");
        let back = coboundary(&w);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if g.compose(a, b).is_some() {
                    assert!((s2.get(a, b) - s1.get(a, b) * back.get(a, b)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fm_identity_catches_single_flip() {
        let g = pair_groupoid(&names(&["1", "2", "3", "4"])).unwrap();
        let fm = FMCocycle::from_values(
            &g,
            &[("1".into(), "2".into(), "3".into(), -ONE)],
        )
        .unwrap();
        let err = fm.check().unwrap_err();
        // The violated quadruple involves the flipped triple.
        let quad = [err.x.as_str(), err.y.as_str(), err.z.as_str(), err.t.as_str()];
        assert!(quad.contains(&"1") || quad.contains(&"2") || quad.contains(&"3"));
    }

    #[test]
    fn fm_conversion_is_normalized_and_passes_check() {
        let g = pair_groupoid(&names(&["1", "2"])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let fm = FMCocycle::random(&g, &mut rng).unwrap();
            assert!(fm.check().is_ok());
            let s = fm_to_groupoid(&fm).unwrap();
            assert!(s.check().is_ok());
        }
        let fm = FMCocycle::trivial(&g).unwrap();
        let s = fm_to_groupoid(&fm).unwrap();
        assert!(s.nontrivial_values().is_empty());
    }

    #[test]
    fn random_cocycles_on_principal_relations_are_always_trivial_classes() {
        let g = pair_groupoid(&names(&["1", "2", "3"])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..8 {
            let s = Cocycle2::random(&g, &mut rng);
            assert!(is_coboundary(&s).unwrap().is_some());
        }
    }
}
