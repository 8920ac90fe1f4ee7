//! Rule cascade deciding what curvature statement the cited theorems give for
//! a closed manifold with abelian fundamental group.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::AbelianGroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinStatus {
    Spin,
    UniversalCoverNonSpin,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Toral,
    Atoral,
    #[default]
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldQuery {
    pub group: AbelianGroupSpec,
    pub dimension: usize,
    pub spin: SpinStatus,
    pub orientable: bool,
    #[serde(default)]
    pub class_label: ClassLabel,
}

/// Ordered from weakest to strongest; the verdict for a group is the minimum
/// over its Sylow parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictStatus {
    NotCovered,
    YamabeNonnegGuaranteed,
    /// `Y >= 0` holds; whether psc holds is the open toral question.
    OpenToral,
    PscGuaranteed,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "Thm 1.1")]
    Thm1_1,
    #[serde(rename = "Thm 2.8")]
    Thm2_8,
    #[serde(rename = "Thm 4.1")]
    Thm4_1,
    #[serde(rename = "Cor 4.4")]
    Cor4_4,
    #[serde(rename = "Thm 4.5")]
    Thm4_5,
    #[serde(rename = "Thm 5.8")]
    Thm5_8,
    #[serde(rename = "Problem 5.9")]
    Problem5_9,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Thm1_1 => "Thm 1.1",
            Rule::Thm2_8 => "Thm 2.8",
            Rule::Thm4_1 => "Thm 4.1",
            Rule::Cor4_4 => "Cor 4.4",
            Rule::Thm4_5 => "Thm 4.5",
            Rule::Thm5_8 => "Thm 5.8",
            Rule::Problem5_9 => "Problem 5.9",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub citations: Vec<Rule>,
    pub notes: String,
}

impl Verdict {
    fn new(status: VerdictStatus, citations: Vec<Rule>, notes: impl Into<String>) -> Self {
        Verdict { status, citations, notes: notes.into() }
    }

    fn not_covered(notes: impl Into<String>) -> Self {
        Verdict::new(VerdictStatus::NotCovered, Vec::new(), notes)
    }
}

fn check_consistent(q: &ManifoldQuery) -> Result<()> {
    if q.dimension == 0 {
        return Err(Error::InconsistentQuery("dimension must be at least 1".into()));
    }
    if q.spin == SpinStatus::Spin && !q.orientable {
        return Err(Error::InconsistentQuery("a spin manifold is orientable".into()));
    }
    if !q.orientable && q.group.is_finite() && q.group.factors.iter().all(|f| f.prime() != 2) {
        return Err(Error::InconsistentQuery(
            "a non-orientable manifold has an index-2 subgroup in its fundamental group".into(),
        ));
    }
    Ok(())
}

/// Verdict for one Sylow part.
fn sylow_verdict(part: &AbelianGroupSpec, p: u64, q: &ManifoldQuery) -> Verdict {
    use VerdictStatus::*;
    let group = part.group();
    match q.spin {
        SpinStatus::Spin => {
            if p == 2 {
                Verdict::not_covered(format!("spin with Sylow 2-part {group}: no rule applies"))
            } else {
                Verdict::new(YamabeNonnegGuaranteed, vec![Rule::Thm4_5], format!("odd-order spin, part {group}"))
            }
        }
        SpinStatus::UniversalCoverNonSpin => {
            let eligible = if p == 2 { !q.orientable } else { q.orientable && part.is_elementary() };
            if !eligible {
                return Verdict::new(YamabeNonnegGuaranteed, vec![Rule::Thm4_1], format!("part {group}"));
            }
            let rank = part.factors.len();
            if q.class_label == ClassLabel::Atoral {
                Verdict::new(PscGuaranteed, vec![Rule::Thm5_8], format!("part {group}, atoral class"))
            } else if q.dimension > rank {
                Verdict::new(
                    PscGuaranteed,
                    vec![Rule::Thm5_8],
                    format!("part {group}, n = {} > rank {rank}", q.dimension),
                )
            } else if q.class_label == ClassLabel::Toral {
                Verdict::new(
                    OpenToral,
                    vec![Rule::Problem5_9],
                    format!("part {group}, toral class with n <= rank {rank}; Y >= 0 by Thm 4.1"),
                )
            } else {
                Verdict::new(
                    YamabeNonnegGuaranteed,
                    vec![Rule::Thm4_1],
                    format!("part {group}, n <= rank {rank} and the class is not labelled"),
                )
            }
        }
    }
}

/// Runs the rule cascade:
///
/// 1. `n < 5` is not covered;
/// 2. infinite groups: non-spin universal cover gives `Y >= 0` (Thm 4.1),
///    otherwise not covered;
/// 3. finite groups are split into Sylow parts (Thm 2.8), only the 2-part
///    when the manifold is non-orientable;
/// 4. each part is judged by Thm 4.1, Thm 4.5, Thm 5.8 and Problem 5.9 and
///    the weakest part decides.
pub fn classify_manifold(q: &ManifoldQuery) -> Result<Verdict> {
    check_consistent(q)?;
    if q.dimension < 5 {
        return Ok(Verdict::not_covered(format!("dimension {} < 5", q.dimension)));
    }
    if !q.group.is_finite() {
        return Ok(match q.spin {
            SpinStatus::UniversalCoverNonSpin => Verdict::new(
                VerdictStatus::YamabeNonnegGuaranteed,
                vec![Rule::Thm4_1],
                "infinite abelian group, non-spin universal cover",
            ),
            SpinStatus::Spin => Verdict::not_covered("spin with infinite fundamental group: no rule applies"),
        });
    }
    if q.group.is_trivial() {
        return Ok(Verdict::not_covered("trivial fundamental group"));
    }

    let primes: Vec<u64> = if q.orientable { q.group.primes() } else { vec![2] };
    let parts: Vec<Verdict> = primes.iter().map(|&p| sylow_verdict(&q.group.sylow(p), p, q)).collect();
    if parts.len() == 1 && q.group.primes().len() == 1 {
        return Ok(parts.into_iter().next().unwrap());
    }

    let status = parts.iter().map(|v| v.status).min().unwrap_or(VerdictStatus::NotCovered);
    let mut citations = Vec::new();
    if status != VerdictStatus::NotCovered {
        citations.push(Rule::Thm2_8);
        for r in parts.iter().flat_map(|v| v.citations.iter()) {
            if !citations.contains(r) {
                citations.push(*r);
            }
        }
        if status == VerdictStatus::YamabeNonnegGuaranteed {
            citations.push(match q.spin {
                SpinStatus::UniversalCoverNonSpin => Rule::Cor4_4,
                SpinStatus::Spin => Rule::Thm1_1,
            });
        }
    }
    let mut notes: Vec<String> =
        primes.iter().zip(&parts).map(|(p, v)| format!("p = {p}: {} ({})", v.status, v.notes)).collect();
    if !q.orientable && q.group.primes().len() > 1 {
        notes.push("non-orientable: only the Sylow 2-subgroup matters".into());
    }
    Ok(Verdict::new(status, citations, notes.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use VerdictStatus::*;

    fn query(g: &str, n: usize, spin: SpinStatus, orientable: bool, label: ClassLabel) -> ManifoldQuery {
        ManifoldQuery { group: g.parse().unwrap(), dimension: n, spin, orientable, class_label: label }
    }

    fn classify(g: &str, n: usize, spin: SpinStatus, orientable: bool, label: ClassLabel) -> Verdict {
        classify_manifold(&query(g, n, spin, orientable, label)).unwrap()
    }

    const NS: SpinStatus = SpinStatus::UniversalCoverNonSpin;

    #[test]
    fn regression_examples() {
        let v = classify("(Z/3)^2", 5, NS, true, ClassLabel::Unspecified);
        assert_eq!((v.status, v.citations), (PscGuaranteed, vec![Rule::Thm5_8]));
        let v = classify("(Z/3)^5", 5, NS, true, ClassLabel::Toral);
        assert_eq!((v.status, v.citations), (OpenToral, vec![Rule::Problem5_9]));
        let v = classify("Z/7 x Z/7", 6, SpinStatus::Spin, true, ClassLabel::Unspecified);
        assert_eq!((v.status, v.citations), (YamabeNonnegGuaranteed, vec![Rule::Thm4_5]));
        let v = classify("Z/4 x Z/2", 6, NS, true, ClassLabel::Unspecified);
        assert_eq!((v.status, v.citations), (YamabeNonnegGuaranteed, vec![Rule::Thm4_1]));
    }

    #[test]
    fn low_dimension_not_covered() {
        let v = classify("Z/3", 4, NS, true, ClassLabel::Atoral);
        assert_eq!(v.status, NotCovered);
        assert!(v.citations.is_empty());
    }

    #[test]
    fn non_orientable_two_groups() {
        let v = classify("Z/4 x Z/2", 6, NS, false, ClassLabel::Unspecified);
        assert_eq!(v.status, PscGuaranteed);
        let v = classify("Z/2 x Z/9", 6, NS, false, ClassLabel::Unspecified);
        assert_eq!(v.status, PscGuaranteed);
        assert_eq!(v.citations, vec![Rule::Thm2_8, Rule::Thm5_8]);
    }

    #[test]
    fn inconsistent_queries() {
        let bad = query("Z/3", 5, SpinStatus::Spin, false, ClassLabel::Unspecified);
        assert!(matches!(classify_manifold(&bad), Err(Error::InconsistentQuery(_))));
        let bad = query("Z/3", 5, NS, false, ClassLabel::Unspecified);
        assert!(classify_manifold(&bad).is_err());
        let bad = query("Z/3", 0, NS, true, ClassLabel::Unspecified);
        assert!(classify_manifold(&bad).is_err());
    }

    #[test]
    fn spin_odd_mixed_primes() {
        let v = classify("Z/3 x Z/25", 6, SpinStatus::Spin, true, ClassLabel::Unspecified);
        assert_eq!(v.status, YamabeNonnegGuaranteed);
        assert_eq!(v.citations, vec![Rule::Thm2_8, Rule::Thm4_5, Rule::Thm1_1]);
    }

    #[test]
    fn spin_two_groups_not_covered() {
        let v = classify("Z/2 x Z/3", 7, SpinStatus::Spin, true, ClassLabel::Unspecified);
        assert_eq!(v.status, NotCovered);
        assert!(v.citations.is_empty());
    }

    #[test]
    fn mixed_primes_take_the_minimum() {
        let v = classify("(Z/3)^2 x Z/4", 6, NS, true, ClassLabel::Unspecified);
        assert_eq!(v.status, YamabeNonnegGuaranteed);
        assert_eq!(v.citations, vec![Rule::Thm2_8, Rule::Thm4_1, Rule::Thm5_8, Rule::Cor4_4]);
    }

    #[test]
    fn infinite_and_trivial() {
        assert_eq!(classify("Z x Z/3", 6, NS, true, ClassLabel::Unspecified).status, YamabeNonnegGuaranteed);
        assert_eq!(classify("Z", 6, SpinStatus::Spin, true, ClassLabel::Unspecified).status, NotCovered);
        assert_eq!(classify("0", 6, NS, true, ClassLabel::Unspecified).status, NotCovered);
    }

    #[test]
    fn verdict_json_uses_tags() {
        let v = classify("(Z/3)^2", 5, NS, true, ClassLabel::Unspecified);
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"Thm 5.8\""));
        assert_eq!(serde_json::from_str::<Verdict>(&json).unwrap(), v);
    }
}
