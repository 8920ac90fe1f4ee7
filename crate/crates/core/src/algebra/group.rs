//! Finitely generated abelian groups in elementary-divisor form.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor `n >= 1` into prime powers, ascending by prime.
pub fn factor_prime_powers(mut n: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push(PrimePower { prime: p, exp: k });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(PrimePower { prime: n, exp: 1 });
    }
    out
}

/// The order `p^k` of a cyclic group of prime-power order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    prime: u64,
    exp: u32,
}

impl PrimePower {
    pub fn new(prime: u64, exp: u32) -> Result<Self> {
        if exp == 0 || !is_prime(prime) {
            return Err(Error::InvalidPrimePower { prime, exp });
        }
        Ok(PrimePower { prime, exp })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exp)
    }

    /// `Some(order)` when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.prime.checked_pow(self.exp)
    }

    /// `gcd` of two prime powers, `None` when trivial.
    pub fn gcd(&self, other: &PrimePower) -> Option<PrimePower> {
        (self.prime == other.prime).then(|| PrimePower { prime: self.prime, exp: self.exp.min(other.exp) })
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &PrimePower) -> bool {
        self.prime == other.prime && self.exp <= other.exp
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order_u64() {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "{}^{}", self.prime, self.exp),
        }
    }
}

/// One cyclic summand of a canonical group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cyclic {
    Free,
    Torsion(PrimePower),
}

impl Cyclic {
    pub fn to_group(self) -> FinAbGroup {
        match self {
            Cyclic::Free => FinAbGroup::free(1),
            Cyclic::Torsion(q) => FinAbGroup::cyclic(q),
        }
    }

    pub fn tensor(self, other: Cyclic) -> Option<Cyclic> {
        match (self, other) {
            (Cyclic::Free, c) | (c, Cyclic::Free) => Some(c),
            (Cyclic::Torsion(a), Cyclic::Torsion(b)) => a.gcd(&b).map(Cyclic::Torsion),
        }
    }

    pub fn tor(self, other: Cyclic) -> Option<Cyclic> {
        match (self, other) {
            (Cyclic::Torsion(a), Cyclic::Torsion(b)) => a.gcd(&b).map(Cyclic::Torsion),
            _ => None,
        }
    }
}

impl fmt::Display for Cyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cyclic::Free => f.write_str("Z"),
            Cyclic::Torsion(q) => write!(f, "Z/{q}"),
        }
    }
}

/// A finitely generated abelian group `Z^r ⊕ ⊕ Z/p^k`.
///
/// Torsion is kept sorted ascending by prime and then exponent, so structural
/// equality is group isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<PrimePower>,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    free_rank: usize,
    torsion: Vec<PrimePower>,
}

impl TryFrom<RawGroup> for FinAbGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        for q in &raw.torsion {
            PrimePower::new(q.prime, q.exp)?;
        }
        Ok(FinAbGroup::new(raw.free_rank, raw.torsion))
    }
}

impl From<FinAbGroup> for RawGroup {
    fn from(g: FinAbGroup) -> Self {
        RawGroup { free_rank: g.free_rank, torsion: g.torsion }
    }
}

impl FinAbGroup {
    pub fn new(free_rank: usize, mut torsion: Vec<PrimePower>) -> Self {
        torsion.sort_unstable();
        FinAbGroup { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(q: PrimePower) -> Self {
        FinAbGroup { free_rank: 0, torsion: vec![q] }
    }

    /// `Z/m`, split into its primary parts. `m = 1` gives the trivial group.
    pub fn cyclic_of_order(m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::free(1));
        }
        Ok(FinAbGroup::new(0, factor_prime_powers(m)))
    }

    /// `(Z/p^k)^count`.
    pub fn elementary(q: PrimePower, count: usize) -> Self {
        FinAbGroup { free_rank: 0, torsion: vec![q; count] }
    }

    pub fn from_summands<I: IntoIterator<Item = Cyclic>>(summands: I) -> Self {
        let mut free = 0;
        let mut torsion = Vec::new();
        for c in summands {
            match c {
                Cyclic::Free => free += 1,
                Cyclic::Torsion(q) => torsion.push(q),
            }
        }
        FinAbGroup::new(free, torsion)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[PrimePower] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Cyclic summands in canonical order: free copies first, then torsion.
    pub fn summands(&self) -> Vec<Cyclic> {
        std::iter::repeat_n(Cyclic::Free, self.free_rank)
            .chain(self.torsion.iter().copied().map(Cyclic::Torsion))
            .collect()
    }

    /// Number of cyclic summands in elementary-divisor form.
    pub fn summand_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion.iter().map(PrimePower::order).product())
    }

    /// Re-sorts torsion; a no-op on any value built through this API.
    pub fn canonicalize(&self) -> Self {
        FinAbGroup::new(self.free_rank, self.torsion.clone())
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        FinAbGroup::new(self.free_rank + other.free_rank, torsion)
    }

    pub fn tensor(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut torsion = Vec::new();
        for _ in 0..self.free_rank {
            torsion.extend_from_slice(&other.torsion);
        }
        for _ in 0..other.free_rank {
            torsion.extend_from_slice(&self.torsion);
        }
        for a in &self.torsion {
            torsion.extend(other.torsion.iter().filter_map(|b| a.gcd(b)));
        }
        FinAbGroup::new(self.free_rank * other.free_rank, torsion)
    }

    pub fn tor(&self, other: &FinAbGroup) -> FinAbGroup {
        let torsion = self.torsion.iter().flat_map(|a| other.torsion.iter().filter_map(move |b| a.gcd(b))).collect();
        FinAbGroup::new(0, torsion)
    }

    /// Dimension of `self ⊗ Z/p` over `Z/p`.
    pub fn p_rank(&self, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self.free_rank + self.torsion.iter().filter(|q| q.prime == p).count())
    }

    /// The primes dividing the torsion subgroup's order, ascending.
    pub fn torsion_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.torsion.iter().map(|q| q.prime).collect();
        ps.dedup();
        ps
    }

    /// Exponent of the torsion subgroup (lcm of orders), `1` when torsion-free.
    pub fn torsion_exponent(&self) -> BigUint {
        self.torsion.iter().fold(BigUint::from(1u32), |acc, q| acc.lcm(&q.order()))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let q = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == q).count();
            parts.push(if run == 1 { format!("Z/{q}") } else { format!("(Z/{q})^{run}") });
            i += run;
        }
        f.write_str(&parts.join(" x "))
    }
}

impl std::str::FromStr for FinAbGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = crate::grammar::parse_group(s)?;
        let mut g = FinAbGroup::trivial();
        for f in factors {
            g = g.direct_sum(&match f {
                crate::grammar::Factor::Free => FinAbGroup::free(1),
                crate::grammar::Factor::Cyclic(m) => FinAbGroup::cyclic_of_order(m)?,
            });
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FinAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(g("Z").tensor(&g("Z/5")), g("Z/5"));
        assert_eq!(g("Z/9").tensor(&g("Z/3")), g("Z/3"));
        assert_eq!(g("Z/4 x Z/2").tensor(&g("Z/2")), g("Z/2 x Z/2"));
        assert_eq!(g("Z x Z").tensor(&g("Z x Z x Z")), FinAbGroup::free(6));
        assert_eq!(g("Z/2").tensor(&g("Z/3")), FinAbGroup::trivial());
    }

    #[test]
    fn tor_examples() {
        assert_eq!(g("Z").tor(&g("Z/5")), FinAbGroup::trivial());
        assert_eq!(g("Z/27").tor(&g("Z/9")), g("Z/9"));
        assert_eq!(g("Z/6").tor(&g("Z/4")), g("Z/2"));
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(g("Z").direct_sum(&FinAbGroup::trivial()), g("Z"));
        assert_eq!(g("Z/3").direct_sum(&g("Z/3")).to_string(), "(Z/3)^2");
        assert_eq!(g("Z/2 x Z/4").direct_sum(&g("Z/2")), g("Z/2 x Z/2 x Z/4"));
        assert_eq!(g("Z/2 x Z/4").direct_sum(&g("Z/2")).to_string(), "(Z/2)^2 x Z/4");
    }

    #[test]
    fn p_rank_examples() {
        assert_eq!(g("Z/9 x Z/2").p_rank(3), Ok(1));
        assert_eq!(g("Z x Z/3").p_rank(3), Ok(2));
        assert_eq!(g("(Z/3)^4").p_rank(3), Ok(4));
        assert_eq!(g("Z/4").p_rank(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn canonical_sort_and_display() {
        let a = g("Z/9 x Z x Z/2 x Z/3");
        assert_eq!(a.to_string(), "Z x Z/2 x Z/3 x Z/9");
        assert_eq!(a.canonicalize(), a);
        assert_eq!(g("Z/12"), g("Z/3 x Z/4"));
        assert_eq!(g("Z/12").order(), Some(BigUint::from(12u32)));
    }

    #[test]
    fn prime_powers_reject_composites() {
        assert!(PrimePower::new(6, 1).is_err());
        assert!(PrimePower::new(5, 0).is_err());
        assert_eq!(factor_prime_powers(360).len(), 3);
    }

    #[test]
    fn large_exponents_do_not_overflow() {
        let q = PrimePower::new(3, 60).unwrap();
        assert_eq!(q.order_u64(), None);
        let big = FinAbGroup::cyclic(q);
        assert_eq!(big.tor(&big), big);
        assert_eq!(big.order(), Some(BigUint::from(3u32).pow(60)));
    }

    #[test]
    fn serde_rejects_non_prime_powers() {
        let bad = r#"{"free_rank":0,"torsion":[{"prime":6,"exp":1}]}"#;
        assert!(serde_json::from_str::<FinAbGroup>(bad).is_err());
        let good = serde_json::to_string(&g("Z x Z/9")).unwrap();
        assert_eq!(serde_json::from_str::<FinAbGroup>(&good).unwrap(), g("Z x Z/9"));
    }
}
