//! Finite discrete groupoids with explicit product and inverse tables.
//!
//! A groupoid here is the full arrow-level data: named units, named arrows
//! with source and range, a partial product defined exactly on composable
//! pairs, and a total inverse. On a finite discrete space every subset is
//! open, so the topological refinements collapse: essential principality
//! coincides with principality, and a germ of a partial bijection at a
//! point is determined by the point and its image.
//!
//! Canonical order everywhere: units sorted lexicographically by name,
//! arrows sorted lexicographically by id. All derived enumerations follow
//! that order, which keeps every downstream report deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("duplicate unit name {0:?}")]
    DuplicateUnit(String),
    #[error("duplicate arrow id {0:?}")]
    DuplicateArrow(String),
    #[error("arrow {arrow:?} references unknown unit {unit:?}")]
    UnknownUnit { arrow: String, unit: String },
    #[error("table references unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("product table defines ({0:?}, {1:?}) twice")]
    DuplicateProductEntry(String, String),
    #[error("inverse table defines {0:?} twice")]
    DuplicateInverseEntry(String),
    #[error("partition classes overlap at {0:?}")]
    OverlappingClasses(String),
    #[error("relation pair references unknown unit {0:?}")]
    UnknownRelationUnit(String),
    #[error("malformed group table: {0}")]
    MalformedGroupTable(String),
    #[error("malformed action: {0}")]
    MalformedAction(String),
    #[error("partial bijection is not injective: {0:?} and {1:?} share image {2:?}")]
    NotInjective(String, String, String),
    #[error("generator touches point {0:?} outside the ambient set")]
    PointOutsideAmbient(String),
    #[error("bisection is not range-injective: arrows {0:?} and {1:?} share range")]
    NotRangeInjective(String, String),
    #[error("bisection is not source-injective: arrows {0:?} and {1:?} share source")]
    NotSourceInjective(String, String),
}

/// One arrow; `src` is the source unit index, `dst` the range unit index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: u32,
    pub dst: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    units: Vec<String>,
    arrows: Vec<Arrow>,
    product: Vec<Option<u32>>,
    inverse: Vec<Option<u32>>,
    unit_arrows: Vec<Option<u32>>,
    s_fibers: Vec<Vec<u32>>,
    r_fibers: Vec<Vec<u32>>,
}

/// A single groupoid axiom failure, naming the witnessing arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ProductOffComposable { left: String, right: String },
    ProductMissing { left: String, right: String },
    ProductEndpoints { left: String, right: String, result: String },
    NotAssociative { a: String, b: String, c: String },
    InverseMissing { arrow: String },
    InverseEndpoints { arrow: String },
    InverseNotInvolutive { arrow: String },
    InverseLawRange { arrow: String },
    InverseLawSource { arrow: String },
    UnitMissing { unit: String },
    UnitNotUnique { unit: String },
    UnitNotNeutralLeft { unit: String, arrow: String },
    UnitNotNeutralRight { unit: String, arrow: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProductOffComposable { left, right } => {
                write!(f, "product defined on non-composable pair ({left}, {right})")
            }
            Violation::ProductMissing { left, right } => {
                write!(f, "product missing on composable pair ({left}, {right})")
            }
            Violation::ProductEndpoints { left, right, result } => {
                write!(f, "product ({left}, {right}) = {result} has wrong endpoints")
            }
            Violation::NotAssociative { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            Violation::InverseMissing { arrow } => write!(f, "inverse missing for {arrow}"),
            Violation::InverseEndpoints { arrow } => {
                write!(f, "inverse of {arrow} does not swap source and range")
            }
            Violation::InverseNotInvolutive { arrow } => {
                write!(f, "inverse law fails: inverse(inverse({arrow})) != {arrow}")
            }
            Violation::InverseLawRange { arrow } => {
                write!(f, "inverse law fails: {arrow} * inverse({arrow}) is not the unit at its range")
            }
            Violation::InverseLawSource { arrow } => {
                write!(f, "inverse law fails: inverse({arrow}) * {arrow} is not the unit at its source")
            }
            Violation::UnitMissing { unit } => write!(f, "no unit arrow at {unit}"),
            Violation::UnitNotUnique { unit } => write!(f, "several idempotent arrows at {unit}"),
            Violation::UnitNotNeutralLeft { unit, arrow } => {
                write!(f, "unit arrow at {unit} is not left-neutral on {arrow}")
            }
            Violation::UnitNotNeutralRight { unit, arrow } => {
                write!(f, "unit arrow at {unit} is not right-neutral on {arrow}")
            }
        }
    }
}

impl FiniteGroupoid {
    /// Builds a groupoid from raw parts. Only structural problems (unknown
    /// names, duplicate table entries) are errors here; axiom failures are
    /// representable and reported by [`FiniteGroupoid::validate`].
    pub fn from_parts(
        units: Vec<String>,
        arrows: Vec<(String, String, String)>,
        product: Vec<(String, String, String)>,
        inverse: Vec<(String, String)>,
    ) -> Result<Self, GroupoidError> {
        let mut sorted_units = units;
        sorted_units.sort();
        for w in sorted_units.windows(2) {
            if w[0] == w[1] {
                return Err(GroupoidError::DuplicateUnit(w[0].clone()));
            }
        }
        let unit_index: BTreeMap<&str, u32> =
            sorted_units.iter().enumerate().map(|(i, u)| (u.as_str(), i as u32)).collect();

        let mut sorted_arrows = Vec::with_capacity(arrows.len());
        for (id, src, dst) in arrows {
            let s = *unit_index
                .get(src.as_str())
                .ok_or_else(|| GroupoidError::UnknownUnit { arrow: id.clone(), unit: src.clone() })?;
            let d = *unit_index
                .get(dst.as_str())
                .ok_or_else(|| GroupoidError::UnknownUnit { arrow: id.clone(), unit: dst.clone() })?;
            sorted_arrows.push(Arrow { id, src: s, dst: d });
        }
        sorted_arrows.sort_by(|a, b| a.id.cmp(&b.id));
        for w in sorted_arrows.windows(2) {
            if w[0].id == w[1].id {
                return Err(GroupoidError::DuplicateArrow(w[0].id.clone()));
            }
        }
        let arrow_index: BTreeMap<&str, u32> =
            sorted_arrows.iter().enumerate().map(|(i, a)| (a.id.as_str(), i as u32)).collect();
        let n = sorted_arrows.len();

        let mut table = vec![None; n * n];
        for (a, b, c) in &product {
            let ia = *arrow_index.get(a.as_str()).ok_or_else(|| GroupoidError::UnknownArrow(a.clone()))?;
            let ib = *arrow_index.get(b.as_str()).ok_or_else(|| GroupoidError::UnknownArrow(b.clone()))?;
            let ic = *arrow_index.get(c.as_str()).ok_or_else(|| GroupoidError::UnknownArrow(c.clone()))?;
            let slot = &mut table[ia as usize * n + ib as usize];
            if slot.is_some() {
                return Err(GroupoidError::DuplicateProductEntry(a.clone(), b.clone()));
            }
            *slot = Some(ic);
        }

        let mut inv = vec![None; n];
        for (a, b) in &inverse {
            let ia = *arrow_index.get(a.as_str()).ok_or_else(|| GroupoidError::UnknownArrow(a.clone()))?;
            let ib = *arrow_index.get(b.as_str()).ok_or_else(|| GroupoidError::UnknownArrow(b.clone()))?;
            if inv[ia as usize].is_some() {
                return Err(GroupoidError::DuplicateInverseEntry(a.clone()));
            }
            inv[ia as usize] = Some(ib);
        }

        let mut g = FiniteGroupoid {
            units: sorted_units,
            arrows: sorted_arrows,
            product: table,
            inverse: inv,
            unit_arrows: Vec::new(),
            s_fibers: Vec::new(),
            r_fibers: Vec::new(),
        };
        g.rebuild_derived();
        Ok(g)
    }

    fn rebuild_derived(&mut self) {
        let nu = self.units.len();
        let mut s_fibers = vec![Vec::new(); nu];
        let mut r_fibers = vec![Vec::new(); nu];
        for (i, a) in self.arrows.iter().enumerate() {
            s_fibers[a.src as usize].push(i as u32);
            r_fibers[a.dst as usize].push(i as u32);
        }
        // The unit arrow at x is the unique idempotent there; validation
        // reports units where that characterization fails.
        let mut unit_arrows = vec![None; nu];
        for x in 0..nu {
            let mut found = None;
            let mut unique = true;
            for &a in &s_fibers[x] {
                let arr = &self.arrows[a as usize];
                if arr.dst as usize == x && self.compose(a, a) == Some(a) {
                    if found.is_some() {
                        unique = false;
                    } else {
                        found = Some(a);
                    }
                }
            }
            unit_arrows[x] = if unique { found } else { None };
        }
        self.s_fibers = s_fibers;
        self.r_fibers = r_fibers;
        self.unit_arrows = unit_arrows;
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn unit_names(&self) -> &[String] {
        &self.units
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: u32) -> &Arrow {
        &self.arrows[a as usize]
    }

    pub fn unit_name(&self, u: u32) -> &str {
        &self.units[u as usize]
    }

    pub fn unit_index(&self, name: &str) -> Option<u32> {
        self.units.binary_search_by(|u| u.as_str().cmp(name)).ok().map(|i| i as u32)
    }

    pub fn arrow_index(&self, id: &str) -> Option<u32> {
        self.arrows.binary_search_by(|a| a.id.as_str().cmp(id)).ok().map(|i| i as u32)
    }

    pub fn src(&self, a: u32) -> u32 {
        self.arrows[a as usize].src
    }

    pub fn dst(&self, a: u32) -> u32 {
        self.arrows[a as usize].dst
    }

    /// Product of two arrows, `None` when undefined in the table.
    pub fn compose(&self, a: u32, b: u32) -> Option<u32> {
        self.product[a as usize * self.arrows.len() + b as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        self.inverse[a as usize]
    }

    /// The unit arrow at `x`, when a unique idempotent exists there.
    pub fn unit_arrow(&self, x: u32) -> Option<u32> {
        self.unit_arrows[x as usize]
    }

    pub fn s_fiber(&self, x: u32) -> &[u32] {
        &self.s_fibers[x as usize]
    }

    pub fn r_fiber(&self, x: u32) -> &[u32] {
        &self.r_fibers[x as usize]
    }

    pub fn is_unit_arrow(&self, a: u32) -> bool {
        let arr = &self.arrows[a as usize];
        arr.src == arr.dst && self.unit_arrows[arr.src as usize] == Some(a)
    }

    /// Full axiom check. Returns an empty report exactly when the data is a
    /// groupoid: product defined precisely on composable pairs, associative,
    /// inverses total and involutive, and a neutral unit arrow per unit.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.arrows.len();

        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let composable = self.src(a) == self.dst(b);
                match self.compose(a, b) {
                    Some(_) if !composable => out.push(Violation::ProductOffComposable {
                        left: self.arrows[a as usize].id.clone(),
                        right: self.arrows[b as usize].id.clone(),
                    }),
                    Some(c) => {
                        if self.src(c) != self.src(b) || self.dst(c) != self.dst(a) {
                            out.push(Violation::ProductEndpoints {
                                left: self.arrows[a as usize].id.clone(),
                                right: self.arrows[b as usize].id.clone(),
                                result: self.arrows[c as usize].id.clone(),
                            });
                        }
                    }
                    None if composable => out.push(Violation::ProductMissing {
                        left: self.arrows[a as usize].id.clone(),
                        right: self.arrows[b as usize].id.clone(),
                    }),
                    None => {}
                }
            }
        }

        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if self.src(a) != self.dst(b) {
                    continue;
                }
                for c in 0..n as u32 {
                    if self.src(b) != self.dst(c) {
                        continue;
                    }
                    let left = self.compose(a, b).and_then(|ab| self.compose(ab, c));
                    let right = self.compose(b, c).and_then(|bc| self.compose(a, bc));
                    if let (Some(l), Some(r)) = (left, right) {
                        if l != r {
                            out.push(Violation::NotAssociative {
                                a: self.arrows[a as usize].id.clone(),
                                b: self.arrows[b as usize].id.clone(),
                                c: self.arrows[c as usize].id.clone(),
                            });
                        }
                    }
                }
            }
        }

        for a in 0..n as u32 {
            let id = self.arrows[a as usize].id.clone();
            match self.inv(a) {
                None => out.push(Violation::InverseMissing { arrow: id }),
                Some(ia) => {
                    if self.src(ia) != self.dst(a) || self.dst(ia) != self.src(a) {
                        out.push(Violation::InverseEndpoints { arrow: id.clone() });
                    }
                    if self.inv(ia) != Some(a) {
                        out.push(Violation::InverseNotInvolutive { arrow: id.clone() });
                    }
                }
            }
        }

        for x in 0..self.units.len() as u32 {
            match self.unit_arrow(x) {
                None => {
                    // Distinguish "no idempotent" from "several".
                    let mut count = 0;
                    for &a in self.s_fiber(x) {
                        if self.dst(a) == x && self.compose(a, a) == Some(a) {
                            count += 1;
                        }
                    }
                    if count == 0 {
                        out.push(Violation::UnitMissing { unit: self.units[x as usize].clone() });
                    } else {
                        out.push(Violation::UnitNotUnique { unit: self.units[x as usize].clone() });
                    }
                }
                Some(u) => {
                    for &a in self.r_fiber(x) {
                        if self.compose(u, a) != Some(a) {
                            out.push(Violation::UnitNotNeutralLeft {
                                unit: self.units[x as usize].clone(),
                                arrow: self.arrows[a as usize].id.clone(),
                            });
                        }
                    }
                    for &a in self.s_fiber(x) {
                        if self.compose(a, u) != Some(a) {
                            out.push(Violation::UnitNotNeutralRight {
                                unit: self.units[x as usize].clone(),
                                arrow: self.arrows[a as usize].id.clone(),
                            });
                        }
                    }
                }
            }
        }

        for a in 0..n as u32 {
            if let Some(ia) = self.inv(a) {
                let range_unit = self.unit_arrow(self.dst(a));
                if range_unit.is_some() && self.compose(a, ia) != range_unit {
                    out.push(Violation::InverseLawRange { arrow: self.arrows[a as usize].id.clone() });
                }
                let source_unit = self.unit_arrow(self.src(a));
                if source_unit.is_some() && self.compose(ia, a) != source_unit {
                    out.push(Violation::InverseLawSource { arrow: self.arrows[a as usize].id.clone() });
                }
            }
        }

        out
    }

    /// Arrow indices of the isotropy bundle: all arrows with equal source
    /// and range (unit arrows included).
    pub fn isotropy_bundle(&self) -> Vec<u32> {
        (0..self.arrows.len() as u32).filter(|&a| self.src(a) == self.dst(a)).collect()
    }

    /// True when the isotropy bundle consists of unit arrows only.
    pub fn is_principal(&self) -> bool {
        self.isotropy_bundle().into_iter().all(|a| self.is_unit_arrow(a))
    }

    /// On a finite discrete space every subset equals its interior, so the
    /// interior of the isotropy bundle is the bundle itself and this
    /// coincides with [`FiniteGroupoid::is_principal`].
    pub fn is_essentially_principal(&self) -> bool {
        self.is_principal()
    }

    /// Effectiveness through the action: no non-unit arrow whose singleton
    /// bisection acts as an identity. The singleton at an arrow acts by
    /// sending its source to its range, so the check scans isotropy.
    pub fn is_effective(&self) -> bool {
        !(0..self.arrows.len() as u32)
            .any(|a| !self.is_unit_arrow(a) && self.src(a) == self.dst(a))
    }

    /// Orbit partition of the unit space, each orbit sorted, orbits ordered
    /// by their least unit.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let n = self.units.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for a in self.arrows.iter() {
            let (x, y) = (find(&mut parent, a.src as usize), find(&mut parent, a.dst as usize));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        let mut buckets: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            buckets.entry(root).or_default().push(i as u32);
        }
        buckets.into_values().collect()
    }
}

/// A set of arrows on which both range and source are injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    arrows: BTreeSet<u32>,
}

impl Bisection {
    pub fn new(g: &FiniteGroupoid, arrows: impl IntoIterator<Item = u32>) -> Result<Self, GroupoidError> {
        let arrows: BTreeSet<u32> = arrows.into_iter().collect();
        let mut by_dst: BTreeMap<u32, u32> = BTreeMap::new();
        let mut by_src: BTreeMap<u32, u32> = BTreeMap::new();
        for &a in &arrows {
            if let Some(prev) = by_dst.insert(g.dst(a), a) {
                return Err(GroupoidError::NotRangeInjective(
                    g.arrow(prev).id.clone(),
                    g.arrow(a).id.clone(),
                ));
            }
            if let Some(prev) = by_src.insert(g.src(a), a) {
                return Err(GroupoidError::NotSourceInjective(
                    g.arrow(prev).id.clone(),
                    g.arrow(a).id.clone(),
                ));
            }
        }
        Ok(Bisection { arrows })
    }

    pub fn arrows(&self) -> impl Iterator<Item = u32> + '_ {
        self.arrows.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, a: u32) -> bool {
        self.arrows.contains(&a)
    }

    /// The bisection of all unit arrows; the neutral element for the product.
    pub fn units(g: &FiniteGroupoid) -> Self {
        let arrows = (0..g.n_units() as u32).filter_map(|x| g.unit_arrow(x)).collect();
        Bisection { arrows }
    }
}

/// Pointwise product `{s t : (s, t) composable}`. Injectivity of range and
/// source survives the product, so the result is again a bisection.
pub fn bisection_product(g: &FiniteGroupoid, s: &Bisection, t: &Bisection) -> Bisection {
    let mut arrows = BTreeSet::new();
    for a in s.arrows() {
        for b in t.arrows() {
            if let Some(c) = g.compose(a, b) {
                arrows.insert(c);
            }
        }
    }
    Bisection::new(g, arrows).expect("product of bisections is a bisection")
}

pub fn bisection_inverse(g: &FiniteGroupoid, s: &Bisection) -> Bisection {
    let arrows = s.arrows().filter_map(|a| g.inv(a)).collect();
    Bisection { arrows }
}

/// The partial bijection on units induced by a bisection: the source of
/// each arrow maps to its range.
pub fn canonical_action(g: &FiniteGroupoid, s: &Bisection) -> PartialBijection {
    let map = s
        .arrows()
        .map(|a| (g.unit_name(g.src(a)).to_string(), g.unit_name(g.dst(a)).to_string()))
        .collect();
    PartialBijection { map }
}

/// Every subset of arrows that is a bisection, in canonical order. Intended
/// for exhaustive law sweeps on small groupoids.
pub fn all_bisections(g: &FiniteGroupoid) -> Vec<Bisection> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn extend(
        g: &FiniteGroupoid,
        start: u32,
        current: &mut Vec<u32>,
        used_src: &mut BTreeSet<u32>,
        used_dst: &mut BTreeSet<u32>,
        out: &mut Vec<Bisection>,
    ) {
        out.push(Bisection { arrows: current.iter().copied().collect() });
        for a in start..g.n_arrows() as u32 {
            if used_src.contains(&g.src(a)) || used_dst.contains(&g.dst(a)) {
                continue;
            }
            current.push(a);
            used_src.insert(g.src(a));
            used_dst.insert(g.dst(a));
            extend(g, a + 1, current, used_src, used_dst, out);
            current.pop();
            used_src.remove(&g.src(a));
            used_dst.remove(&g.dst(a));
        }
    }
    extend(g, 0, &mut current, &mut BTreeSet::new(), &mut BTreeSet::new(), &mut out);
    out
}

/// An injective partial map on named points. The image is always computed
/// from the map, never stored separately.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartialBijection {
    map: BTreeMap<String, String>,
}

impl PartialBijection {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self, GroupoidError> {
        let mut map = BTreeMap::new();
        let mut seen: BTreeMap<String, String> = BTreeMap::new();
        for (k, v) in pairs {
            if let Some(prev) = seen.get(&v) {
                if prev != &k {
                    return Err(GroupoidError::NotInjective(prev.clone(), k, v));
                }
            }
            seen.insert(v.clone(), k.clone());
            map.insert(k, v);
        }
        Ok(PartialBijection { map })
    }

    pub fn identity_on<'a>(points: impl IntoIterator<Item = &'a str>) -> Self {
        PartialBijection {
            map: points.into_iter().map(|p| (p.to_string(), p.to_string())).collect(),
        }
    }

    pub fn empty() -> Self {
        PartialBijection { map: BTreeMap::new() }
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn image(&self) -> BTreeSet<&str> {
        self.map.values().map(|s| s.as_str()).collect()
    }

    pub fn apply(&self, p: &str) -> Option<&str> {
        self.map.get(p).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// `self` after `other`: x -> self(other(x)) where both legs are defined.
    pub fn compose(&self, other: &PartialBijection) -> PartialBijection {
        let map = other
            .map
            .iter()
            .filter_map(|(x, mid)| self.map.get(mid).map(|y| (x.clone(), y.clone())))
            .collect();
        PartialBijection { map }
    }

    pub fn inverse(&self) -> PartialBijection {
        PartialBijection { map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect() }
    }
}

/// The pair groupoid on named points: one arrow `y>x` from `y` to `x` for
/// every ordered pair, with matrix-unit composition.
pub fn pair_groupoid(points: &[String]) -> Result<FiniteGroupoid, GroupoidError> {
    relation_groupoid_from_partition(&[points.to_vec()])
}

fn arrow_name(src: &str, dst: &str) -> String {
    format!("{src}>{dst}")
}

/// The principal groupoid of an equivalence relation given as a partition.
pub fn relation_groupoid_from_partition(classes: &[Vec<String>]) -> Result<FiniteGroupoid, GroupoidError> {
    let mut units = Vec::new();
    let mut seen = BTreeSet::new();
    for class in classes {
        for p in class {
            if !seen.insert(p.clone()) {
                return Err(GroupoidError::OverlappingClasses(p.clone()));
            }
            units.push(p.clone());
        }
    }
    let mut arrows = Vec::new();
    let mut product = Vec::new();
    let mut inverse = Vec::new();
    for class in classes {
        for x in class {
            for y in class {
                arrows.push((arrow_name(x, y), x.clone(), y.clone()));
                inverse.push((arrow_name(x, y), arrow_name(y, x)));
            }
        }
        // (z>w) after (y>z): first apply y>z, then z>w, landing on y>w.
        for x in class {
            for y in class {
                for z in class {
                    product.push((arrow_name(y, z), arrow_name(x, y), arrow_name(x, z)));
                }
            }
        }
    }
    FiniteGroupoid::from_parts(units, arrows, product, inverse)
}

/// The principal groupoid of the equivalence relation generated by a list
/// of unit pairs.
pub fn relation_groupoid_from_pairs(
    units: &[String],
    pairs: &[(String, String)],
) -> Result<FiniteGroupoid, GroupoidError> {
    let index: BTreeMap<&str, usize> = units.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..units.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (a, b) in pairs {
        let ia = *index.get(a.as_str()).ok_or_else(|| GroupoidError::UnknownRelationUnit(a.clone()))?;
        let ib = *index.get(b.as_str()).ok_or_else(|| GroupoidError::UnknownRelationUnit(b.clone()))?;
        let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for i in 0..units.len() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(units[i].clone());
    }
    let classes: Vec<Vec<String>> = classes.into_values().collect();
    relation_groupoid_from_partition(&classes)
}

/// A finite group as an explicit multiplication table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    elements: Vec<String>,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
}

impl GroupTable {
    /// Validates closure, associativity, identity, and inverses.
    pub fn new(elements: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self, GroupoidError> {
        let n = elements.len();
        if n == 0 {
            return Err(GroupoidError::MalformedGroupTable("empty element list".into()));
        }
        let index: BTreeMap<&str, u32> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i as u32)).collect();
        if index.len() != n {
            return Err(GroupoidError::MalformedGroupTable("duplicate element name".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GroupoidError::MalformedGroupTable("table is not n x n".into()));
        }
        let mut table = vec![0u32; n * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, name) in row.iter().enumerate() {
                let k = *index.get(name.as_str()).ok_or_else(|| {
                    GroupoidError::MalformedGroupTable(format!("unknown element {name:?} in table"))
                })?;
                table[i * n + j] = k;
            }
        }
        let mul = |a: u32, b: u32| table[a as usize * n + b as usize];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupoidError::MalformedGroupTable(format!(
                            "not associative at ({}, {}, {})",
                            elements[a as usize], elements[b as usize], elements[c as usize]
                        )));
                    }
                }
            }
        }
        let mut identity = None;
        for e in 0..n as u32 {
            if (0..n as u32).all(|a| mul(e, a) == a && mul(a, e) == a) {
                identity = Some(e);
                break;
            }
        }
        let identity =
            identity.ok_or_else(|| GroupoidError::MalformedGroupTable("no identity element".into()))?;
        let mut inverse = vec![None; n];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if mul(a, b) == identity && mul(b, a) == identity {
                    inverse[a as usize] = Some(b);
                    break;
                }
            }
        }
        let inverse: Option<Vec<u32>> = inverse.into_iter().collect();
        let inverse =
            inverse.ok_or_else(|| GroupoidError::MalformedGroupTable("element without inverse".into()))?;
        Ok(GroupTable { elements, table, identity, inverse })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elements.len() + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
}

/// The action groupoid of a finite group acting on named points. `action`
/// gives, per element, the total map point -> point; it must be an action
/// by bijections with the identity acting trivially.
pub fn transformation_groupoid(
    group: &GroupTable,
    points: &[String],
    action: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<FiniteGroupoid, GroupoidError> {
    let point_index: BTreeMap<&str, u32> = points.iter().enumerate().map(|(i, p)| (p.as_str(), i as u32)).collect();
    if point_index.len() != points.len() {
        return Err(GroupoidError::MalformedAction("duplicate point".into()));
    }
    let n = group.order();
    let mut perms: Vec<Vec<u32>> = Vec::with_capacity(n);
    for e in group.elements() {
        let map = action
            .get(e)
            .ok_or_else(|| GroupoidError::MalformedAction(format!("no action given for element {e:?}")))?;
        let mut perm = vec![u32::MAX; points.len()];
        let mut hit = vec![false; points.len()];
        for p in points {
            let q = map
                .get(p)
                .ok_or_else(|| GroupoidError::MalformedAction(format!("element {e:?} undefined on {p:?}")))?;
            let qi = *point_index
                .get(q.as_str())
                .ok_or_else(|| GroupoidError::MalformedAction(format!("image {q:?} is not a point")))?;
            let pi = point_index[p.as_str()];
            if hit[qi as usize] {
                return Err(GroupoidError::MalformedAction(format!("element {e:?} is not a bijection")));
            }
            hit[qi as usize] = true;
            perm[pi as usize] = qi;
        }
        perms.push(perm);
    }
    let id = group.identity() as usize;
    for (pi, &q) in perms[id].iter().enumerate() {
        if q != pi as u32 {
            return Err(GroupoidError::MalformedAction("identity does not act trivially".into()));
        }
    }
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let ab = group.mul(a, b);
            for p in 0..points.len() {
                let lhs = perms[a as usize][perms[b as usize][p] as usize];
                let rhs = perms[ab as usize][p];
                if lhs != rhs {
                    return Err(GroupoidError::MalformedAction(format!(
                        "not an action: {}*({}*{}) differs from ({}{})*{}",
                        group.elements()[a as usize],
                        group.elements()[b as usize],
                        points[p],
                        group.elements()[a as usize],
                        group.elements()[b as usize],
                        points[p]
                    )));
                }
            }
        }
    }

    let aname = |e: u32, p: u32| format!("{}@{}", group.elements()[e as usize], points[p as usize]);
    let mut arrows = Vec::new();
    let mut product = Vec::new();
    let mut inverse = Vec::new();
    for e in 0..n as u32 {
        for p in 0..points.len() as u32 {
            let img = perms[e as usize][p as usize];
            arrows.push((aname(e, p), points[p as usize].clone(), points[img as usize].clone()));
            inverse.push((aname(e, p), aname(group.inv(e), img)));
        }
    }
    // (g, h.x) (h, x) = (gh, x).
    for g in 0..n as u32 {
        for h in 0..n as u32 {
            for p in 0..points.len() as u32 {
                let hx = perms[h as usize][p as usize];
                product.push((aname(g, hx), aname(h, p), aname(group.mul(g, h), p)));
            }
        }
    }
    FiniteGroupoid::from_parts(points.to_vec(), arrows, product, inverse)
}

/// Germ groupoid of the pseudogroup generated by partial bijections on a
/// discrete finite set. On a discrete space a germ is determined by the
/// point and its image, so the result is the principal groupoid of the
/// orbit relation, with isolated points as singleton orbits.
pub fn germ_groupoid_discrete(
    points: &[String],
    generators: &[PartialBijection],
) -> Result<FiniteGroupoid, GroupoidError> {
    let point_set: BTreeSet<&str> = points.iter().map(|s| s.as_str()).collect();
    let mut pairs = Vec::new();
    for gen in generators {
        for (x, y) in gen.pairs() {
            if !point_set.contains(x) {
                return Err(GroupoidError::PointOutsideAmbient(x.to_string()));
            }
            if !point_set.contains(y) {
                return Err(GroupoidError::PointOutsideAmbient(y.to_string()));
            }
            pairs.push((x.to_string(), y.to_string()));
        }
    }
    relation_groupoid_from_pairs(points, &pairs)
}

/// Outcome of the exhaustive isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoResult {
    Isomorphic(BTreeMap<String, String>),
    NotIsomorphic,
    /// The search is exhaustive only up to the configured unit bound.
    Undecided,
}

/// Exhaustive backtracking search for a groupoid isomorphism, feasible for
/// small unit spaces; above `max_units` the result is [`IsoResult::Undecided`].
pub fn isomorphism(g1: &FiniteGroupoid, g2: &FiniteGroupoid, max_units: usize) -> IsoResult {
    if g1.n_units() != g2.n_units() || g1.n_arrows() != g2.n_arrows() {
        return IsoResult::NotIsomorphic;
    }
    if g1.n_units() > max_units {
        return IsoResult::Undecided;
    }
    let nu = g1.n_units();
    let profile = |g: &FiniteGroupoid, x: u32| {
        let iso = g.s_fiber(x).iter().filter(|&&a| g.dst(a) == x).count();
        (g.s_fiber(x).len(), g.r_fiber(x).len(), iso)
    };
    let mut assignment: Vec<Option<u32>> = vec![None; nu];
    let mut used = vec![false; nu];

    fn assign_units(
        g1: &FiniteGroupoid,
        g2: &FiniteGroupoid,
        profile: &dyn Fn(&FiniteGroupoid, u32) -> (usize, usize, usize),
        pos: usize,
        assignment: &mut Vec<Option<u32>>,
        used: &mut Vec<bool>,
    ) -> Option<BTreeMap<String, String>> {
        let nu = g1.n_units();
        if pos == nu {
            return match_arrows(g1, g2, assignment);
        }
        for cand in 0..nu {
            if used[cand] || profile(g1, pos as u32) != profile(g2, cand as u32) {
                continue;
            }
            assignment[pos] = Some(cand as u32);
            used[cand] = true;
            if let Some(res) = assign_units(g1, g2, profile, pos + 1, assignment, used) {
                return Some(res);
            }
            assignment[pos] = None;
            used[cand] = false;
        }
        None
    }

    /// Given a unit bijection, extend to an arrow bijection fiber by fiber,
    /// verifying products and inverses on the completed map.
    fn match_arrows(
        g1: &FiniteGroupoid,
        g2: &FiniteGroupoid,
        assignment: &[Option<u32>],
    ) -> Option<BTreeMap<String, String>> {
        let unit_map: Vec<u32> = assignment.iter().map(|o| o.unwrap()).collect();
        // Fibers over (src, dst) pairs must match in size.
        let mut fibers: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut fiber_of: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for a in 0..g1.n_arrows() as u32 {
            let key = (g1.src(a), g1.dst(a));
            let idx = *fiber_of.entry(key).or_insert_with(|| {
                fibers.push((Vec::new(), Vec::new()));
                fibers.len() - 1
            });
            fibers[idx].0.push(a);
        }
        for b in 0..g2.n_arrows() as u32 {
            // Pull back along the unit map.
            let src1 = unit_map.iter().position(|&u| u == g2.src(b))? as u32;
            let dst1 = unit_map.iter().position(|&u| u == g2.dst(b))? as u32;
            match fiber_of.get(&(src1, dst1)) {
                Some(&idx) => fibers[idx].1.push(b),
                None => return None,
            }
        }
        if fibers.iter().any(|(f1, f2)| f1.len() != f2.len()) {
            return None;
        }
        let n = g1.n_arrows();
        let mut arrow_map: Vec<Option<u32>> = vec![None; n];
        fn fill(
            g1: &FiniteGroupoid,
            g2: &FiniteGroupoid,
            fibers: &[(Vec<u32>, Vec<u32>)],
            fi: usize,
            pos: usize,
            used: &mut BTreeSet<u32>,
            arrow_map: &mut Vec<Option<u32>>,
        ) -> bool {
            if fi == fibers.len() {
                return verify_arrow_map(g1, g2, arrow_map);
            }
            let (f1, f2) = &fibers[fi];
            if pos == f1.len() {
                return fill(g1, g2, fibers, fi + 1, 0, used, arrow_map);
            }
            let a = f1[pos];
            for &b in f2 {
                if used.contains(&b) {
                    continue;
                }
                arrow_map[a as usize] = Some(b);
                used.insert(b);
                // Early partial product check against already-mapped arrows.
                let consistent = (0..g1.n_arrows() as u32).all(|c| {
                    let Some(mc) = arrow_map[c as usize] else { return true };
                    let ok1 = match g1.compose(a, c) {
                        Some(p) => match arrow_map[p as usize] {
                            Some(mp) => g2.compose(b, mc) == Some(mp),
                            None => g2.compose(b, mc).is_some(),
                        },
                        None => g2.compose(b, mc).is_none(),
                    };
                    let ok2 = match g1.compose(c, a) {
                        Some(p) => match arrow_map[p as usize] {
                            Some(mp) => g2.compose(mc, b) == Some(mp),
                            None => g2.compose(mc, b).is_some(),
                        },
                        None => g2.compose(mc, b).is_none(),
                    };
                    ok1 && ok2
                });
                if consistent && fill(g1, g2, fibers, fi, pos + 1, used, arrow_map) {
                    return true;
                }
                arrow_map[a as usize] = None;
                used.remove(&b);
            }
            false
        }
        fn verify_arrow_map(g1: &FiniteGroupoid, g2: &FiniteGroupoid, arrow_map: &[Option<u32>]) -> bool {
            let m = |a: u32| arrow_map[a as usize].unwrap();
            for a in 0..g1.n_arrows() as u32 {
                if g1.inv(a).map(m) != g2.inv(m(a)) {
                    return false;
                }
                for b in 0..g1.n_arrows() as u32 {
                    let lhs = g1.compose(a, b).map(m);
                    let rhs = g2.compose(m(a), m(b));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            true
        }
        if fill(g1, g2, &fibers, 0, 0, &mut BTreeSet::new(), &mut arrow_map) {
            let map = (0..g1.n_units() as u32)
                .map(|x| (g1.unit_name(x).to_string(), g2.unit_name(unit_map[x as usize]).to_string()))
                .collect();
            Some(map)
        } else {
            None
        }
    }

    match assign_units(g1, g2, &profile, 0, &mut assignment, &mut used) {
        Some(map) => IsoResult::Isomorphic(map),
        None => IsoResult::NotIsomorphic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn z2_table() -> GroupTable {
        GroupTable::new(names(&["e", "a"]), vec![names(&["e", "a"]), names(&["a", "e"])]).unwrap()
    }

    fn swap_action() -> BTreeMap<String, BTreeMap<String, String>> {
        let mut e = BTreeMap::new();
        e.insert("1".to_string(), "1".to_string());
        e.insert("2".to_string(), "2".to_string());
        let mut a = BTreeMap::new();
        a.insert("1".to_string(), "2".to_string());
        a.insert("2".to_string(), "1".to_string());
        let mut action = BTreeMap::new();
        action.insert("e".to_string(), e);
        action.insert("a".to_string(), a);
        action
    }

    #[test]
    fn pair_groupoid_shape() {
        let g = pair_groupoid(&names(&["1", "2", "3"])).unwrap();
        assert_eq!(g.n_units(), 3);
        assert_eq!(g.n_arrows(), 9);
        assert!(g.validate().is_empty());
        assert!(g.is_principal());
        assert_eq!(g.orbits().len(), 1);
    }

    #[test]
    fn swap_transformation_groupoid_is_valid_and_its_axioms_hold_by_brute_force() {
        let g = transformation_groupoid(&z2_table(), &names(&["1", "2"]), &swap_action()).unwrap();
        assert!(g.validate().is_empty());
        // Independent brute force over all triples, straight off the table.
        for a in 0..g.n_arrows() as u32 {
            for b in 0..g.n_arrows() as u32 {
                assert_eq!(g.compose(a, b).is_some(), g.src(a) == g.dst(b));
                for c in 0..g.n_arrows() as u32 {
                    if let (Some(ab), Some(bc)) = (g.compose(a, b), g.compose(b, c)) {
                        assert_eq!(g.compose(ab, c), g.compose(a, bc));
                    }
                }
            }
        }
    }

    #[test]
    fn extra_idempotent_reports_non_unique_unit() {
        // Z/2 bundle over one unit with the product of the order-2 arrow
        // forced inconsistently to itself, making it a second idempotent.
        let g = FiniteGroupoid::from_parts(
            names(&["x"]),
            vec![
                ("u".into(), "x".into(), "x".into()),
                ("a".into(), "x".into(), "x".into()),
            ],
            vec![
                ("u".into(), "u".into(), "u".into()),
                ("u".into(), "a".into(), "a".into()),
                ("a".into(), "u".into(), "a".into()),
                ("a".into(), "a".into(), "a".into()),
            ],
            vec![("u".into(), "u".into()), ("a".into(), "a".into())],
        )
        .unwrap();
        let report = g.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::UnitNotUnique { unit } if unit == "x")));
    }

    #[test]
    fn broken_group_bundle_reports_inverse_law() {
        // Z/3 bundle with inverses misassigned as the identity map.
        let g = FiniteGroupoid::from_parts(
            names(&["x"]),
            vec![
                ("u".into(), "x".into(), "x".into()),
                ("a".into(), "x".into(), "x".into()),
                ("b".into(), "x".into(), "x".into()),
            ],
            vec![
                ("u".into(), "u".into(), "u".into()),
                ("u".into(), "a".into(), "a".into()),
                ("u".into(), "b".into(), "b".into()),
                ("a".into(), "u".into(), "a".into()),
                ("b".into(), "u".into(), "b".into()),
                ("a".into(), "a".into(), "b".into()),
                ("a".into(), "b".into(), "u".into()),
                ("b".into(), "a".into(), "u".into()),
                ("b".into(), "b".into(), "a".into()),
            ],
            vec![
                ("u".into(), "u".into()),
                ("a".into(), "a".into()),
                ("b".into(), "b".into()),
            ],
        )
        .unwrap();
        let report = g.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::InverseLawRange { arrow } if arrow == "a")));
        assert!(!report.iter().any(|v| matches!(v, Violation::UnitNotUnique { .. })));
    }

    #[test]
    fn isotropy_and_principality() {
        let pair = pair_groupoid(&names(&["1", "2"])).unwrap();
        let iso: Vec<_> = pair.isotropy_bundle().into_iter().filter(|&a| !pair.is_unit_arrow(a)).collect();
        assert!(iso.is_empty());
        assert!(pair.is_principal());
        assert!(pair.is_essentially_principal());
        assert!(pair.is_effective());

        let bundle = transformation_groupoid(
            &z2_table(),
            &names(&["x"]),
            &{
                let mut action = BTreeMap::new();
                let mut fix = BTreeMap::new();
                fix.insert("x".to_string(), "x".to_string());
                action.insert("e".to_string(), fix.clone());
                action.insert("a".to_string(), fix);
                action
            },
        )
        .unwrap();
        assert_eq!(bundle.n_arrows(), 2);
        assert!(!bundle.is_principal());
        assert!(!bundle.is_essentially_principal());
        assert!(!bundle.is_effective());
        // The order-2 arrow at x sits in the isotropy bundle.
        let nonunit: Vec<_> =
            bundle.isotropy_bundle().into_iter().filter(|&a| !bundle.is_unit_arrow(a)).collect();
        assert_eq!(nonunit.len(), 1);
    }

    #[test]
    fn bisection_product_and_action_on_pair_groupoid() {
        let g = pair_groupoid(&names(&["1", "2"])).unwrap();
        let s = Bisection::new(&g, [g.arrow_index("1>2").unwrap()]).unwrap();
        let s_inv = bisection_inverse(&g, &s);
        let prod = bisection_product(&g, &s, &s_inv);
        // s sends 1 to 2; s s^{-1} is the unit at 2.
        assert_eq!(prod.len(), 1);
        let a = prod.arrows().next().unwrap();
        assert!(g.is_unit_arrow(a));
        assert_eq!(g.unit_name(g.src(a)), "2");

        let swap = Bisection::new(
            &g,
            [g.arrow_index("1>2").unwrap(), g.arrow_index("2>1").unwrap()],
        )
        .unwrap();
        let alpha = canonical_action(&g, &swap);
        assert_eq!(alpha.apply("1"), Some("2"));
        assert_eq!(alpha.apply("2"), Some("1"));

        let units = Bisection::units(&g);
        for t in all_bisections(&g) {
            assert_eq!(bisection_product(&g, &units, &t), t);
            assert_eq!(bisection_product(&g, &t, &units), t);
        }
    }

    #[test]
    fn action_is_functorial_on_all_bisections() {
        let g = transformation_groupoid(&z2_table(), &names(&["1", "2"]), &swap_action()).unwrap();
        let bis = all_bisections(&g);
        for s in &bis {
            for t in &bis {
                let st = bisection_product(&g, s, t);
                let lhs = canonical_action(&g, &st);
                let rhs = canonical_action(&g, s).compose(&canonical_action(&g, t));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn swap_groupoid_isomorphic_to_pair_groupoid() {
        let t = transformation_groupoid(&z2_table(), &names(&["1", "2"]), &swap_action()).unwrap();
        let p = pair_groupoid(&names(&["p", "q"])).unwrap();
        match isomorphism(&t, &p, 10) {
            IsoResult::Isomorphic(map) => {
                // Verify the witness really is a unit bijection with matching fibers.
                assert_eq!(map.len(), 2);
                let img: BTreeSet<_> = map.values().collect();
                assert_eq!(img.len(), 2);
            }
            other => panic!("expected isomorphism, got {other:?}"),
        }
        // A group bundle is not isomorphic to the pair groupoid even with
        // matching arrow counts.
        let bundle = transformation_groupoid(
            &z2_table(),
            &names(&["1", "2"]),
            &{
                let mut action = BTreeMap::new();
                let mut fix = BTreeMap::new();
                fix.insert("1".to_string(), "1".to_string());
                fix.insert("2".to_string(), "2".to_string());
                action.insert("e".to_string(), fix.clone());
                action.insert("a".to_string(), fix);
                action
            },
        )
        .unwrap();
        assert_eq!(bundle.n_arrows(), 4);
        assert_eq!(isomorphism(&bundle, &p, 10), IsoResult::NotIsomorphic);
    }

    #[test]
    fn trivial_action_of_z2_on_point_is_a_group_bundle() {
        let mut action = BTreeMap::new();
        let mut fix = BTreeMap::new();
        fix.insert("1".to_string(), "1".to_string());
        action.insert("e".to_string(), fix.clone());
        action.insert("a".to_string(), fix);
        let g = transformation_groupoid(&z2_table(), &names(&["1"]), &action).unwrap();
        assert_eq!(g.n_units(), 1);
        assert_eq!(g.n_arrows(), 2);
        assert!(g.validate().is_empty());
        assert!(!g.is_principal());
    }

    #[test]
    fn germ_groupoid_of_restricted_swap() {
        // One generator: the swap of {1,2} restricted to {1}.
        let gen = PartialBijection::new([("1".to_string(), "2".to_string())]).unwrap();
        let g = germ_groupoid_discrete(&names(&["1", "2"]), &[gen]).unwrap();
        assert!(g.validate().is_empty());
        assert!(g.is_principal());
        assert_eq!(g.n_units(), 2);
        assert_eq!(g.n_arrows(), 4); // both units, 1>2, 2>1
        assert!(g.arrow_index("1>2").is_some());
        assert!(g.arrow_index("2>1").is_some());
    }

    #[test]
    fn germ_groupoid_matches_orbit_closure_oracle() {
        // Oracle: close the generator set under composition and inverse,
        // collect all germs (point, image), and compare with the arrows of
        // the constructed groupoid (minus the reflexive germs).
        let points = names(&["1", "2", "3", "4", "5"]);
        let gens = vec![
            PartialBijection::new([
                ("1".to_string(), "2".to_string()),
                ("2".to_string(), "3".to_string()),
            ])
            .unwrap(),
            PartialBijection::new([("4".to_string(), "1".to_string())]).unwrap(),
        ];
        let g = germ_groupoid_discrete(&points, &gens).unwrap();

        let mut closure: BTreeSet<PartialBijection> = BTreeSet::new();
        let mut frontier: Vec<PartialBijection> = Vec::new();
        for gen in &gens {
            frontier.push(gen.clone());
            frontier.push(gen.inverse());
        }
        while let Some(f) = frontier.pop() {
            if !closure.insert(f.clone()) {
                continue;
            }
            let snapshot: Vec<_> = closure.iter().cloned().collect();
            for h in snapshot {
                frontier.push(f.compose(&h));
                frontier.push(h.compose(&f));
            }
        }
        let mut germ_pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for f in &closure {
            for (x, y) in f.pairs() {
                germ_pairs.insert((y.to_string(), x.to_string())); // arrow x -> y, named x>y
            }
        }
        let arrow_pairs: BTreeSet<(String, String)> = g
            .arrows()
            .iter()
            .filter(|a| a.src != a.dst)
            .map(|a| (g.unit_name(a.dst).to_string(), g.unit_name(a.src).to_string()))
            .collect();
        let nontrivial_germs: BTreeSet<_> =
            germ_pairs.iter().filter(|(a, b)| a != b).cloned().collect();
        assert_eq!(arrow_pairs, nontrivial_germs);
        // Isolated point stays its own orbit.
        assert_eq!(g.orbits().len(), 2); // {1,2,3,4} and {5}
    }

    #[test]
    fn relation_groupoid_from_partition_counts() {
        let g = relation_groupoid_from_partition(&[names(&["1", "2"]), names(&["3"])]).unwrap();
        assert_eq!(g.n_units(), 3);
        assert_eq!(g.n_arrows(), 5);
        assert!(g.validate().is_empty());
        assert!(g.is_principal());
    }

    #[test]
    fn partial_bijection_rejects_non_injective() {
        let err = PartialBijection::new([
            ("1".to_string(), "3".to_string()),
            ("2".to_string(), "3".to_string()),
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn bisection_rejects_shared_fibers() {
        let g = pair_groupoid(&names(&["1", "2"])).unwrap();
        let a = g.arrow_index("1>2").unwrap();
        let b = g.arrow_index("2>2").unwrap();
        // Both end at 2: not range-injective.
        assert!(Bisection::new(&g, [a, b]).is_err());
    }
}
