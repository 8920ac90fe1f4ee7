//! Homology of classifying spaces of finitely generated abelian groups.
//!
//! Cyclic factors use the closed forms of the periodic resolution; products
//! are assembled by a left fold of the Künneth formula. Every computation is
//! truncated at an explicit `max_degree`, and asking for a degree past it is
//! an error rather than a silent zero.

mod series;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Cyclic, FinAbGroup, PrimePower};
use crate::error::{Error, Result};
use crate::grammar::{self, Factor};

pub use series::{poincare_closed_coefficient, poincare_series_closed, poincare_series_recursive};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Mod2,
}

impl CoefficientRing {
    /// Homology of a point in degree 0.
    pub fn unit_group(self) -> FinAbGroup {
        match self {
            CoefficientRing::Integers => FinAbGroup::free(1),
            CoefficientRing::Mod2 => FinAbGroup::cyclic(two()),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientRing::Integers => "Z",
            CoefficientRing::Mod2 => "Z/2",
        })
    }
}

fn two() -> PrimePower {
    PrimePower::new(2, 1).expect("2 is prime")
}

/// Homology groups in degrees `0..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGroup {
    coeff: CoefficientRing,
    groups: Vec<FinAbGroup>,
}

impl GradedGroup {
    pub fn new(coeff: CoefficientRing, groups: Vec<FinAbGroup>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidParameter("graded group needs degree 0".into()));
        }
        Ok(GradedGroup { coeff, groups })
    }

    /// Homology of a point.
    pub fn point(coeff: CoefficientRing, max_degree: usize) -> Self {
        let mut groups = vec![FinAbGroup::trivial(); max_degree + 1];
        groups[0] = coeff.unit_group();
        GradedGroup { coeff, groups }
    }

    pub fn coeff(&self) -> CoefficientRing {
        self.coeff
    }

    pub fn max_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn groups(&self) -> &[FinAbGroup] {
        &self.groups
    }

    pub fn get(&self, degree: usize) -> Result<&FinAbGroup> {
        self.groups.get(degree).ok_or(Error::DegreeOutOfRange { requested: degree, max_degree: self.max_degree() })
    }

    /// `dim_{Z/p}(H_n ⊗ Z/p)` for every degree.
    pub fn p_ranks(&self, p: u64) -> Result<Vec<usize>> {
        self.groups.iter().map(|g| g.p_rank(p)).collect()
    }

    pub(crate) fn summand_lists(&self) -> Vec<Vec<Cyclic>> {
        self.groups.iter().map(FinAbGroup::summands).collect()
    }
}

/// `π = Z^free_rank × ∏ Z/p^k`, with the factor order kept as given.
///
/// The order of `factors` fixes the association of the Künneth fold, so two
/// specs listing the same factors differently describe the same group but
/// produce different term bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    pub free_rank: usize,
    pub factors: Vec<PrimePower>,
}

impl AbelianGroupSpec {
    pub fn new(free_rank: usize, factors: Vec<PrimePower>) -> Self {
        AbelianGroupSpec { free_rank, factors }
    }

    /// `(Z/p^k)^r`.
    pub fn elementary(p: u64, k: u32, r: usize) -> Result<Self> {
        Ok(AbelianGroupSpec::new(0, vec![PrimePower::new(p, k)?; r]))
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.free_rank + self.factors.len()
    }

    /// Distinct primes among the torsion factors, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(PrimePower::prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// `Some(p)` when the group is a nontrivial finite `p`-group.
    pub fn p_group_prime(&self) -> Option<u64> {
        match self.primes()[..] {
            [p] if self.free_rank == 0 => Some(p),
            _ => None,
        }
    }

    pub fn is_elementary(&self) -> bool {
        self.factors.iter().all(|q| q.exp() == 1)
    }

    /// The Sylow `p`-subgroup, factors kept in their listed order.
    pub fn sylow(&self, p: u64) -> AbelianGroupSpec {
        AbelianGroupSpec::new(0, self.factors.iter().copied().filter(|q| q.prime() == p).collect())
    }

    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::new(self.free_rank, self.factors.clone())
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let parts: Vec<String> = std::iter::repeat_n("Z".to_string(), self.free_rank)
            .chain(self.factors.iter().map(|q| format!("Z/{q}")))
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

impl std::str::FromStr for AbelianGroupSpec {
    type Err = Error;

    /// Free factors move to the front; `Z/m` splits into its primary parts in
    /// ascending prime order at the position where it was written.
    fn from_str(s: &str) -> Result<Self> {
        let mut spec = AbelianGroupSpec::new(0, Vec::new());
        for f in grammar::parse_group(s)? {
            match f {
                Factor::Free => spec.free_rank += 1,
                Factor::Cyclic(m) => spec.factors.extend(crate::algebra::factor_prime_powers(m)),
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermKind {
    /// `H_i(X) ⊗ H_j(Y)` with `i + j = n`.
    Tensor,
    /// `Tor(H_i(X), H_j(Y))` with `i + j = n - 1`.
    TorShift,
}

/// One cyclic summand of a Künneth decomposition, labelled by where it came
/// from: the degrees on each side and the index of the cyclic summand used in
/// each side's summand list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KunnethTerm {
    pub kind: TermKind,
    pub left_degree: usize,
    pub left_index: usize,
    pub right_degree: usize,
    pub right_index: usize,
    pub value: Cyclic,
}

/// Künneth terms for every degree `0..=max_degree`, given each side as a list
/// of cyclic summands per degree.
///
/// Within a degree, tensor terms come first in lexicographic
/// `(left_degree, left_index, right_index)` order, then Tor terms in the same
/// order. Tor terms are omitted over `Z/2`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn kunneth_terms(
    left: &[Vec<Cyclic>],
    right: &[Vec<Cyclic>],
    coeff: CoefficientRing,
) -> Vec<Vec<KunnethTerm>> {
    let max_degree = left.len().min(right.len()) - 1;
    let mut out = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let mut terms = Vec::new();
        for ld in 0..=n {
            let rd = n - ld;
            for (li, a) in left[ld].iter().enumerate() {
                for (ri, b) in right[rd].iter().enumerate() {
                    if let Some(value) = a.tensor(*b) {
                        terms.push(KunnethTerm {
                            kind: TermKind::Tensor,
                            left_degree: ld,
                            left_index: li,
                            right_degree: rd,
                            right_index: ri,
                            value,
                        });
                    }
                }
            }
        }
        if coeff == CoefficientRing::Integers && n >= 1 {
            for ld in 0..n {
                let rd = n - 1 - ld;
                for (li, a) in left[ld].iter().enumerate() {
                    for (ri, b) in right[rd].iter().enumerate() {
                        if let Some(value) = a.tor(*b) {
                            terms.push(KunnethTerm {
                                kind: TermKind::TorShift,
                                left_degree: ld,
                                left_index: li,
                                right_degree: rd,
                                right_index: ri,
                                value,
                            });
                        }
                    }
                }
            }
        }
        out.push(terms);
    }
    out
}

/// `H_*(B Z/p^k)` through `max_degree`.
pub fn cyclic_homology(p: u64, k: u32, coeff: CoefficientRing, max_degree: usize) -> Result<GradedGroup> {
    let q = PrimePower::new(p, k)?;
    let groups = match coeff {
        CoefficientRing::Integers => (0..=max_degree)
            .map(|n| match n {
                0 => FinAbGroup::free(1),
                n if n % 2 == 1 => FinAbGroup::cyclic(q),
                _ => FinAbGroup::trivial(),
            })
            .collect(),
        CoefficientRing::Mod2 => {
            if p != 2 {
                return Err(Error::UnsupportedCoefficients(format!(
                    "Z/2 coefficients with odd prime {p}: reduced homology vanishes"
                )));
            }
            vec![FinAbGroup::cyclic(two()); max_degree + 1]
        }
    };
    GradedGroup::new(coeff, groups)
}

/// `H_*(S^1) = H_*(B Z)`.
pub fn circle_homology(coeff: CoefficientRing, max_degree: usize) -> GradedGroup {
    let groups = (0..=max_degree).map(|n| if n <= 1 { coeff.unit_group() } else { FinAbGroup::trivial() }).collect();
    GradedGroup { coeff, groups }
}

/// Künneth formula for `H_*(X × Y)`, with the per-degree term list recording
/// which summand of which side each piece came from.
pub fn kunneth(a: &GradedGroup, b: &GradedGroup) -> Result<(GradedGroup, Vec<Vec<KunnethTerm>>)> {
    if a.max_degree() != b.max_degree() {
        return Err(Error::TruncationMismatch { left: a.max_degree(), right: b.max_degree() });
    }
    if a.coeff != b.coeff {
        return Err(Error::CoefficientMismatch);
    }
    let terms = kunneth_terms(&a.summand_lists(), &b.summand_lists(), a.coeff);
    let groups = terms.iter().map(|ts| FinAbGroup::from_summands(ts.iter().map(|t| t.value))).collect();
    Ok((GradedGroup { coeff: a.coeff, groups }, terms))
}

/// Rejects `Z/2`-coefficient requests on groups with odd torsion.
pub(crate) fn check_coefficients(spec: &AbelianGroupSpec, coeff: CoefficientRing) -> Result<()> {
    if coeff == CoefficientRing::Mod2 {
        if let Some(q) = spec.factors.iter().find(|q| q.prime() != 2) {
            return Err(Error::UnsupportedCoefficients(format!(
                "Z/2 coefficients are only supported for 2-groups (found Z/{q})"
            )));
        }
    }
    Ok(())
}

/// `H_*(Bπ)` by folding the Künneth formula from the left: circle factors
/// first, then torsion factors in their listed order.
pub fn homology_of_abelian(spec: &AbelianGroupSpec, coeff: CoefficientRing, max_degree: usize) -> Result<GradedGroup> {
    check_coefficients(spec, coeff)?;
    let mut acc = GradedGroup::point(coeff, max_degree);
    for _ in 0..spec.free_rank {
        acc = kunneth(&acc, &circle_homology(coeff, max_degree))?.0;
    }
    for q in &spec.factors {
        acc = kunneth(&acc, &cyclic_homology(q.prime(), q.exp(), coeff, max_degree)?)?.0;
    }
    Ok(acc)
}
