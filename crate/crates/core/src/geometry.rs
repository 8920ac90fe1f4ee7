//! Geometric generators for `H_*(Bπ)` and the curvature status each one
//! carries.
//!
//! A generator is a provenance tree: lens spaces, projective spaces and
//! circles at the leaves, combined by products, Toda brackets (the geometric
//! form of a Tor class) and transfers. [`curvature_class`] evaluates the rule
//! closure bottom-up.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Cyclic, PrimePower};
use crate::error::{Error, Result};
use crate::homology::{homology_of_abelian, AbelianGroupSpec, CoefficientRing, TermKind};
use crate::structure::{atoral_split, SplitLabel, Splitting};

/// Strongest curvature statement derivable from the rule set.
///
/// Ordered `Unknown < NonnegYamabe < Psc`; positive scalar curvature implies a
/// nonnegative Yamabe invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurvatureClass {
    Unknown,
    NonnegYamabe,
    Psc,
}

impl fmt::Display for CurvatureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurvatureClass::Unknown => "unknown",
            CurvatureClass::NonnegYamabe => "Y>=0",
            CurvatureClass::Psc => "psc",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorNode {
    /// The degree-0 class.
    Point,
    Circle,
    /// `S^dim / (Z/p^k)`, `dim` odd.
    Lens {
        prime: u64,
        exp: u32,
        dim: usize,
    },
    RealProj {
        dim: usize,
    },
    Product {
        factors: Vec<GeneratorTerm>,
    },
    /// `⟨left, order, right⟩`, of dimension `dim left + dim right + 1`.
    TodaBracket {
        left: Box<GeneratorTerm>,
        order: PrimePower,
        right: Box<GeneratorTerm>,
    },
    /// Image under the transfer of a finite covering.
    TransferClass {
        base: Box<GeneratorTerm>,
    },
}

/// A generator together with its cached dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTerm", into = "RawTerm")]
pub struct GeneratorTerm {
    node: GeneratorNode,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    #[serde(flatten)]
    node: GeneratorNode,
    dimension: usize,
}

impl TryFrom<RawTerm> for GeneratorTerm {
    type Error = Error;

    fn try_from(raw: RawTerm) -> Result<Self> {
        let term = GeneratorTerm::from_node(raw.node)?;
        if term.dim != raw.dimension {
            return Err(Error::InvalidParameter(format!(
                "stored dimension {} does not match the computed {}",
                raw.dimension, term.dim
            )));
        }
        Ok(term)
    }
}

impl From<GeneratorTerm> for RawTerm {
    fn from(t: GeneratorTerm) -> Self {
        RawTerm { node: t.node, dimension: t.dim }
    }
}

impl GeneratorTerm {
    fn from_node(node: GeneratorNode) -> Result<Self> {
        let dim = match &node {
            GeneratorNode::Point => 0,
            GeneratorNode::Circle => 1,
            GeneratorNode::Lens { prime, exp, dim } => {
                PrimePower::new(*prime, *exp)?;
                if dim % 2 == 0 {
                    return Err(Error::InvalidParameter(format!("lens space dimension {dim} must be odd")));
                }
                *dim
            }
            GeneratorNode::RealProj { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidParameter("projective space dimension must be positive".into()));
                }
                *dim
            }
            GeneratorNode::Product { factors } => factors.iter().map(|f| f.dim).sum(),
            GeneratorNode::TodaBracket { left, right, .. } => left.dim + right.dim + 1,
            GeneratorNode::TransferClass { base } => base.dim,
        };
        Ok(GeneratorTerm { node, dim })
    }

    pub fn point() -> Self {
        GeneratorTerm { node: GeneratorNode::Point, dim: 0 }
    }

    pub fn circle() -> Self {
        GeneratorTerm { node: GeneratorNode::Circle, dim: 1 }
    }

    pub fn lens(prime: u64, exp: u32, dim: usize) -> Result<Self> {
        Self::from_node(GeneratorNode::Lens { prime, exp, dim })
    }

    pub fn real_proj(dim: usize) -> Result<Self> {
        Self::from_node(GeneratorNode::RealProj { dim })
    }

    pub fn product(factors: Vec<GeneratorTerm>) -> Self {
        let dim = factors.iter().map(|f| f.dim).sum();
        GeneratorTerm { node: GeneratorNode::Product { factors }, dim }
    }

    pub fn toda(left: GeneratorTerm, order: PrimePower, right: GeneratorTerm) -> Self {
        let dim = left.dim + right.dim + 1;
        GeneratorTerm { node: GeneratorNode::TodaBracket { left: Box::new(left), order, right: Box::new(right) }, dim }
    }

    pub fn transfer(base: GeneratorTerm) -> Self {
        let dim = base.dim;
        GeneratorTerm { node: GeneratorNode::TransferClass { base: Box::new(base) }, dim }
    }

    /// Product with points dropped and nested products flattened; a single
    /// surviving factor is returned bare.
    pub fn product_of(factors: Vec<GeneratorTerm>) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match f.node {
                GeneratorNode::Point => {}
                GeneratorNode::Product { factors } => flat.extend(factors),
                _ => flat.push(f),
            }
        }
        match flat.len() {
            0 => GeneratorTerm::point(),
            1 => flat.pop().unwrap(),
            _ => GeneratorTerm::product(flat),
        }
    }

    pub fn node(&self) -> &GeneratorNode {
        &self.node
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn is_toda(&self) -> bool {
        matches!(self.node, GeneratorNode::TodaBracket { .. })
    }

    /// Whether a Toda bracket occurs anywhere in the tree.
    pub fn contains_toda(&self) -> bool {
        match &self.node {
            GeneratorNode::TodaBracket { .. } => true,
            GeneratorNode::Product { factors } => factors.iter().any(GeneratorTerm::contains_toda),
            GeneratorNode::TransferClass { base } => base.contains_toda(),
            _ => false,
        }
    }

    /// Order of the homology class the term represents, `None` for classes of
    /// infinite order (circles) and the point.
    pub fn class_order(&self) -> Option<PrimePower> {
        match &self.node {
            GeneratorNode::Point | GeneratorNode::Circle => None,
            GeneratorNode::Lens { prime, exp, .. } => PrimePower::new(*prime, *exp).ok(),
            GeneratorNode::RealProj { .. } => PrimePower::new(2, 1).ok(),
            GeneratorNode::TodaBracket { order, .. } => Some(*order),
            GeneratorNode::TransferClass { base } => base.class_order(),
            GeneratorNode::Product { factors } => {
                let mut acc: Option<PrimePower> = None;
                for o in factors.iter().filter_map(GeneratorTerm::class_order) {
                    acc = match acc {
                        None => Some(o),
                        Some(a) => Some(a.gcd(&o)?),
                    };
                }
                acc
            }
        }
    }
}

impl fmt::Display for GeneratorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            GeneratorNode::Point => f.write_str("pt"),
            GeneratorNode::Circle => f.write_str("S^1"),
            GeneratorNode::Lens { prime, exp, dim } => {
                let q = PrimePower::new(*prime, *exp).map_err(|_| fmt::Error)?;
                write!(f, "L^{dim}(Z/{q})")
            }
            GeneratorNode::RealProj { dim } => write!(f, "RP^{dim}"),
            GeneratorNode::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" x "))
            }
            GeneratorNode::TodaBracket { left, order, right } => write!(f, "<{left}, {order}, {right}>"),
            GeneratorNode::TransferClass { base } => write!(f, "tr({base})"),
        }
    }
}

/// Rule closure for the curvature status of a generator.
///
/// * lens spaces of dimension `>= 3` and `RP^n`, `n >= 2`, carry psc; the
///   circle, `L^1` and `RP^1` are flat;
/// * a product has psc if some factor does, and `Y >= 0` if some factor of
///   positive dimension has `Y >= 0`; points are the identity;
/// * a Toda bracket of two psc pieces has psc; of two `Y >= 0` pieces it has
///   `Y >= 0`, except when one side is known only to have `Y >= 0` and the
///   other side is a 2-dimensional psc piece, where nothing is concluded;
/// * a transfer has the status of its base.
///
/// A bare point is not classified and reports `Unknown`.
pub fn curvature_class(g: &GeneratorTerm) -> CurvatureClass {
    use CurvatureClass::*;
    match &g.node {
        GeneratorNode::Point => Unknown,
        GeneratorNode::Circle => NonnegYamabe,
        GeneratorNode::Lens { dim, .. } | GeneratorNode::RealProj { dim } => {
            if *dim >= 3 || matches!(g.node, GeneratorNode::RealProj { dim: 2 }) {
                Psc
            } else {
                NonnegYamabe
            }
        }
        GeneratorNode::Product { factors } => {
            let statuses: Vec<CurvatureClass> = factors.iter().filter(|f| f.dim > 0).map(curvature_class).collect();
            if statuses.is_empty() {
                Unknown
            } else if statuses.contains(&Psc) {
                Psc
            } else if statuses.contains(&NonnegYamabe) {
                NonnegYamabe
            } else {
                Unknown
            }
        }
        GeneratorNode::TodaBracket { left, right, .. } => {
            let (l, r) = (curvature_class(left), curvature_class(right));
            if l == Psc && r == Psc {
                Psc
            } else if l >= NonnegYamabe && r >= NonnegYamabe {
                let excluded = |flat: CurvatureClass, other: &GeneratorTerm, other_status: CurvatureClass| {
                    flat == NonnegYamabe && other.dim == 2 && other_status == Psc
                };
                if excluded(l, right, r) || excluded(r, left, l) {
                    Unknown
                } else {
                    NonnegYamabe
                }
            } else {
                Unknown
            }
        }
        GeneratorNode::TransferClass { base } => curvature_class(base),
    }
}

/// `⟨M_1 × … × M_j, q, L⟩ = M_1 × … × M_{j-1} × ⟨M_j, q, L⟩`, valid when `q`
/// divides the order of `M_j`. A bracket whose left side is not a product is
/// returned unchanged.
pub fn shuffle_toda(g: &GeneratorTerm) -> Result<GeneratorTerm> {
    let GeneratorNode::TodaBracket { left, order, right } = &g.node else {
        return Err(Error::RewriteNotJustified(format!("{g} is not a Toda bracket")));
    };
    let GeneratorNode::Product { factors } = &left.node else {
        return Ok(g.clone());
    };
    let Some((last, prefix)) = factors.split_last() else {
        return Ok(g.clone());
    };
    match last.class_order() {
        Some(o) if order.divides(&o) => {}
        _ => {
            return Err(Error::RewriteNotJustified(format!(
                "bracket order {order} does not divide the order of {last}"
            )))
        }
    }
    let inner = GeneratorTerm::toda(last.clone(), *order, (**right).clone());
    let mut out = prefix.to_vec();
    out.push(inner);
    Ok(if out.len() == 1 { out.pop().unwrap() } else { GeneratorTerm::product(out) })
}

/// Generator of `H_degree(B Z/q)`.
fn cyclic_generator(
    q: PrimePower,
    coeff: CoefficientRing,
    degree: usize,
    notes: &mut Vec<String>,
) -> Result<GeneratorTerm> {
    if degree == 0 {
        return Ok(GeneratorTerm::point());
    }
    match coeff {
        CoefficientRing::Integers => {
            if degree.is_multiple_of(2) {
                return Err(Error::InvalidParameter(format!("H_{degree}(BZ/{q}; Z) vanishes")));
            }
            GeneratorTerm::lens(q.prime(), q.exp(), degree)
        }
        CoefficientRing::Mod2 => {
            if q.exp() == 1 {
                return GeneratorTerm::real_proj(degree);
            }
            if degree.is_multiple_of(2) {
                notes.push(format!("RP^{degree} -> BZ/2 -> BZ/{q} through the inclusion of Z/2"));
                GeneratorTerm::real_proj(degree)
            } else if degree == 1 {
                Ok(GeneratorTerm::circle())
            } else {
                notes.push(format!("transfer along the diagonal of RP^{} x S^1 -> BZ/{q} x BZ/{q}", degree - 1));
                Ok(GeneratorTerm::transfer(GeneratorTerm::product(vec![
                    GeneratorTerm::real_proj(degree - 1)?,
                    GeneratorTerm::circle(),
                ])))
            }
        }
    }
}

fn generator_for(level: &Splitting, degree: usize, index: usize, notes: &mut Vec<String>) -> Result<GeneratorTerm> {
    let entry = &level.basis(degree)?.entries[index];
    let peeled = level.peeled();
    let (Some(prev), Some(t)) = (level.previous(), entry.trace) else {
        return cyclic_generator(peeled, level.coeff(), degree, notes);
    };
    let left = generator_for(prev, t.left_degree, t.left_index, notes)?;
    let right = cyclic_generator(peeled, level.coeff(), t.right_degree, notes)?;
    Ok(match t.kind {
        TermKind::Tensor => GeneratorTerm::product_of(vec![left, right]),
        TermKind::TorShift => {
            let Cyclic::Torsion(order) = t.value else {
                return Err(Error::InvalidParameter("Tor term with a free value".into()));
            };
            let left_summand = prev.basis(t.left_degree)?.entries[t.left_index].summand;
            if left_summand != Cyclic::Torsion(order) {
                notes.push(format!("left class of order {left_summand} replaced by a multiple of order {order}"));
            }
            GeneratorTerm::toda(left, order, right)
        }
    })
}

/// A generator matched to one entry of the labelled Künneth basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedGenerator {
    pub degree: usize,
    /// Position in the degree's labelled basis.
    pub index: usize,
    pub summand: Cyclic,
    pub label: SplitLabel,
    pub generator: GeneratorTerm,
    pub status: CurvatureClass,
    pub notes: Vec<String>,
}

/// One geometric generator per entry of the labelled basis of
/// `H_degree(Bπ)`: products for tensor entries, Toda brackets for Tor entries.
pub fn enumerate_generators(
    spec: &AbelianGroupSpec,
    coeff: CoefficientRing,
    degree: usize,
) -> Result<Vec<EnumeratedGenerator>> {
    let split = atoral_split(spec, coeff, degree)?;
    enumerate_from_split(&split, degree)
}

pub(crate) fn enumerate_from_split(split: &Splitting, degree: usize) -> Result<Vec<EnumeratedGenerator>> {
    let basis = split.basis(degree)?;
    basis
        .entries
        .iter()
        .enumerate()
        .map(|(index, entry)| {
            let mut notes = Vec::new();
            let generator = generator_for(split, degree, index, &mut notes)?;
            Ok(EnumeratedGenerator {
                degree,
                index,
                summand: entry.summand,
                label: entry.label,
                status: curvature_class(&generator),
                generator,
                notes,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusTally {
    pub psc: usize,
    pub nonneg_yamabe: usize,
    pub unknown: usize,
}

/// Result of matching enumerated generators against the homology engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub degree: usize,
    /// Number of cyclic summands of `H_degree` according to the engine.
    pub homology_summands: usize,
    pub basis_entries: usize,
    pub generators: usize,
    pub bijection: bool,
    /// Generators in degree 0 (the point class), left out of the tally.
    pub point_classes: usize,
    pub tally: StatusTally,
    pub mismatches: Vec<String>,
}

impl SpanReport {
    pub fn is_ok(&self) -> bool {
        self.bijection && self.mismatches.is_empty()
    }
}

/// Checks that the enumerated generators are in bijection with the labelled
/// basis and that the basis reassembles the engine's `H_degree`.
pub fn span_check(spec: &AbelianGroupSpec, coeff: CoefficientRing, degree: usize) -> Result<SpanReport> {
    let split = atoral_split(spec, coeff, degree)?;
    let gens = enumerate_from_split(&split, degree)?;
    let homology = homology_of_abelian(spec, coeff, degree)?;
    let group = homology.get(degree)?;
    let basis = split.basis(degree)?;

    let mut mismatches = Vec::new();
    if basis.group() != *group {
        mismatches.push(format!("basis sums to {} but H_{degree} = {group}", basis.group()));
    }
    let mut seen = vec![false; basis.entries.len()];
    for g in &gens {
        if g.generator.dimension() != degree {
            mismatches.push(format!(
                "entry {} ({}): generator {} has dimension {}",
                g.index,
                g.summand,
                g.generator,
                g.generator.dimension()
            ));
        }
        match seen.get_mut(g.index) {
            Some(s) if !*s => *s = true,
            _ => mismatches.push(format!("entry {} matched more than once", g.index)),
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            mismatches.push(format!("entry {i} ({}) has no generator", basis.entries[i].summand));
        }
    }

    let mut tally = StatusTally::default();
    let mut point_classes = 0;
    for g in &gens {
        if degree == 0 {
            point_classes += 1;
            continue;
        }
        match g.status {
            CurvatureClass::Psc => tally.psc += 1,
            CurvatureClass::NonnegYamabe => tally.nonneg_yamabe += 1,
            CurvatureClass::Unknown => tally.unknown += 1,
        }
    }
    let bijection =
        gens.len() == basis.entries.len() && basis.entries.len() == group.summand_count() && seen.iter().all(|s| *s);
    Ok(SpanReport {
        degree,
        homology_summands: group.summand_count(),
        basis_entries: basis.entries.len(),
        generators: gens.len(),
        bijection,
        point_classes,
        tally,
        mismatches,
    })
}
