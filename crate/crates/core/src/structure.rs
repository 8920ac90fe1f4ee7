//! Toral subgroups, the inductive toral/atoral splitting of `H_*(Bπ)` for a
//! finite abelian `p`-group, and the closed rank formulas for elementary
//! abelian groups.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Cyclic, FinAbGroup, PrimePower};
use crate::error::{Error, Result};
use crate::homology::{cyclic_homology, kunneth_terms, AbelianGroupSpec, CoefficientRing, KunnethTerm, TermKind};

/// `C(r, n)`: the rank of the toral summand of `H_n(B(Z/p)^r)`.
pub fn toral_rank(r: usize, n: usize) -> BigUint {
    if n > r {
        return BigUint::zero();
    }
    binomial(BigUint::from(r), BigUint::from(n))
}

/// Toral classes come from maps `T^n -> Bπ` and need `n <= rank`.
pub fn toral_classes_exist(r: usize, n: usize) -> bool {
    n <= r
}

/// `dim_{Z/p} H_n(B(Z/p)^r; Z) = Σ_{j=1}^{n} (-1)^{n-j} C(j+r-1, r-1)` for `n >= 1`.
pub fn elementary_rank_z(r: usize, n: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut acc = BigInt::zero();
    for j in 1..=n {
        let c = BigInt::from(binomial(BigUint::from(j + r - 1), BigUint::from(r - 1)));
        if (n - j).is_multiple_of(2) {
            acc += c;
        } else {
            acc -= c;
        }
    }
    Ok(acc.to_biguint().expect("alternating sum is nonnegative"))
}

/// `dim H_n(B(Z/2)^r; Z/2) = C(n+r-1, r-1)`.
pub fn elementary_rank_mod2(r: usize, n: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(binomial(BigUint::from(n + r - 1), BigUint::from(r - 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitTag {
    Toral,
    Atoral,
}

/// Why an entry received its tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitProvenance {
    /// toral ⊗ toral
    TensorToralToral,
    /// anything ⊗ atoral, or atoral ⊗ toral
    TensorWithAtoral,
    /// image of a Tor summand under the fixed Künneth splitting
    TorImage,
    /// a single cyclic factor: toral in degrees `<= 1`
    RankOneBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitLabel {
    pub tag: SplitTag,
    pub provenance: SplitProvenance,
}

impl SplitLabel {
    fn base(degree: usize) -> Self {
        let tag = if degree <= 1 { SplitTag::Toral } else { SplitTag::Atoral };
        SplitLabel { tag, provenance: SplitProvenance::RankOneBase }
    }

    fn from_term(term: &KunnethTerm, left: SplitTag, right: SplitTag) -> Self {
        use SplitProvenance::*;
        match (term.kind, left, right) {
            (TermKind::TorShift, _, _) => SplitLabel { tag: SplitTag::Atoral, provenance: TorImage },
            (TermKind::Tensor, SplitTag::Toral, SplitTag::Toral) => {
                SplitLabel { tag: SplitTag::Toral, provenance: TensorToralToral }
            }
            (TermKind::Tensor, _, _) => SplitLabel { tag: SplitTag::Atoral, provenance: TensorWithAtoral },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub summand: Cyclic,
    pub label: SplitLabel,
    /// The Künneth term of the last peeling step; `None` for a single factor.
    /// `left_index` points into the previous level's entries of `left_degree`.
    pub trace: Option<KunnethTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBasis {
    pub degree: usize,
    pub entries: Vec<SplitEntry>,
}

impl SplitBasis {
    pub fn count(&self, tag: SplitTag) -> usize {
        self.entries.iter().filter(|e| e.label.tag == tag).count()
    }

    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::from_summands(self.entries.iter().map(|e| e.summand))
    }
}

/// The labelled basis of `H_*(B(π' × Z/p^k))`, together with the splitting of
/// `π'` it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    coeff: CoefficientRing,
    /// Factors in fold order; the last one is peeled at this level.
    factors: Vec<PrimePower>,
    bases: Vec<SplitBasis>,
    previous: Option<Box<Splitting>>,
}

impl Splitting {
    pub fn coeff(&self) -> CoefficientRing {
        self.coeff
    }

    /// Factors in the order the Künneth fold consumed them.
    pub fn fold_order(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn peeled(&self) -> PrimePower {
        *self.factors.last().expect("splitting has at least one factor")
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn bases(&self) -> &[SplitBasis] {
        &self.bases
    }

    pub fn basis(&self, degree: usize) -> Result<&SplitBasis> {
        self.bases.get(degree).ok_or(Error::DegreeOutOfRange { requested: degree, max_degree: self.max_degree() })
    }

    /// The splitting of `π'`, absent for a single cyclic factor.
    pub fn previous(&self) -> Option<&Splitting> {
        self.previous.as_deref()
    }

    pub fn toral_counts(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.count(SplitTag::Toral)).collect()
    }

    pub fn atoral_counts(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.count(SplitTag::Atoral)).collect()
    }
}

fn cyclic_summands(q: PrimePower, coeff: CoefficientRing, max_degree: usize) -> Result<Vec<Vec<Cyclic>>> {
    Ok(cyclic_homology(q.prime(), q.exp(), coeff, max_degree)?.groups().iter().map(FinAbGroup::summands).collect())
}

/// Checks that the group is a finite abelian `p`-group with the coefficient
/// ring the splitting is defined for: `Z` when `p` is odd, `Z/2` when `p = 2`.
pub fn split_coefficients(spec: &AbelianGroupSpec) -> Result<CoefficientRing> {
    if spec.free_rank > 0 {
        return Err(Error::UnsupportedGroup(format!("{spec} has free factors; the splitting needs a finite p-group")));
    }
    match spec.primes()[..] {
        [] => Err(Error::UnsupportedGroup("the trivial group has no splitting".into())),
        [2] => Ok(CoefficientRing::Mod2),
        [_] => Ok(CoefficientRing::Integers),
        _ => Err(Error::UnsupportedGroup(format!("{spec} mixes primes; the splitting needs a p-group"))),
    }
}

/// Factor order for the inductive splitting: each step peels a factor of
/// smallest order, the last-listed one among equals. Equivalent to a stable
/// sort by descending order.
pub fn fold_order(spec: &AbelianGroupSpec) -> Vec<PrimePower> {
    let mut f = spec.factors.clone();
    f.sort_by_key(|q| std::cmp::Reverse(q.exp()));
    f
}

/// Inductive toral/atoral splitting of `H_n(Bπ)` for `n <= max_degree`.
pub fn atoral_split(spec: &AbelianGroupSpec, coeff: CoefficientRing, max_degree: usize) -> Result<Splitting> {
    let expected = split_coefficients(spec)?;
    if coeff != expected {
        return Err(Error::UnsupportedCoefficients(format!(
            "the splitting of {spec} is defined with {expected} coefficients, not {coeff}"
        )));
    }
    let order = fold_order(spec);
    let mut level: Option<Splitting> = None;
    for i in 0..order.len() {
        let q = order[i];
        let right = cyclic_summands(q, coeff, max_degree)?;
        let next = match level.take() {
            None => Splitting {
                coeff,
                factors: vec![q],
                bases: right
                    .iter()
                    .enumerate()
                    .map(|(degree, summands)| SplitBasis {
                        degree,
                        entries: summands
                            .iter()
                            .map(|&summand| SplitEntry { summand, label: SplitLabel::base(degree), trace: None })
                            .collect(),
                    })
                    .collect(),
                previous: None,
            },
            Some(prev) => {
                let left: Vec<Vec<Cyclic>> =
                    prev.bases.iter().map(|b| b.entries.iter().map(|e| e.summand).collect()).collect();
                let terms = kunneth_terms(&left, &right, coeff);
                let bases = terms
                    .into_iter()
                    .enumerate()
                    .map(|(degree, ts)| SplitBasis {
                        degree,
                        entries: ts
                            .into_iter()
                            .map(|t| {
                                let lt = prev.bases[t.left_degree].entries[t.left_index].label.tag;
                                let rt = SplitLabel::base(t.right_degree).tag;
                                SplitEntry {
                                    summand: t.value,
                                    label: SplitLabel::from_term(&t, lt, rt),
                                    trace: Some(t),
                                }
                            })
                            .collect(),
                    })
                    .collect();
                Splitting { coeff, factors: order[..=i].to_vec(), bases, previous: Some(Box::new(prev)) }
            }
        };
        level = Some(next);
    }
    level.ok_or_else(|| Error::UnsupportedGroup("the trivial group has no splitting".into()))
}
