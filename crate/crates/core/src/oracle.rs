//! Brute-force homology used to audit the Künneth engine.
//!
//! Everything here works from explicit chain complexes and Smith normal form:
//! the periodic resolution of a cyclic group, the total complex of a tensor
//! product, and kernel counting for Tor. Nothing in this module calls into
//! [`crate::homology`] beyond the shared value types.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{invariant_factors, FinAbGroup, IntMatrix, PrimePower};
use crate::error::{Error, Result};
use crate::homology::{CoefficientRing, GradedGroup};

/// A bounded chain complex of free modules `C_0 .. C_top`.
///
/// `boundaries[n]` is `d_n : C_n -> C_{n-1}` with shape `dim C_{n-1} x dim C_n`;
/// `d_0` has zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    coeff: CoefficientRing,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn new(coeff: CoefficientRing, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::InvalidParameter("a chain complex needs at least C_0".into()));
        }
        if boundaries[0].rows() != 0 {
            return Err(Error::DimensionMismatch(0));
        }
        for n in 1..boundaries.len() {
            if boundaries[n].rows() != boundaries[n - 1].cols() {
                return Err(Error::DimensionMismatch(n));
            }
        }
        let boundaries = match coeff {
            CoefficientRing::Integers => boundaries,
            CoefficientRing::Mod2 => boundaries.iter().map(|d| d.reduce_mod(2)).collect(),
        };
        Ok(ChainComplex { coeff, boundaries })
    }

    /// `Z` (or `Z/2`) in degree 0, zero above, through `top`.
    pub fn point(coeff: CoefficientRing, top: usize) -> Self {
        let mut boundaries = vec![IntMatrix::zeros(0, 1)];
        boundaries.extend((1..=top).map(|n| IntMatrix::zeros(usize::from(n == 1), 0)));
        ChainComplex { coeff, boundaries }
    }

    /// Cellular chains of the circle: `C_0 = C_1 = Z`, `d_1 = 0`.
    pub fn circle(coeff: CoefficientRing, top: usize) -> Self {
        let mut boundaries = vec![IntMatrix::zeros(0, 1)];
        for n in 1..=top {
            let rows = usize::from(n <= 2);
            let cols = usize::from(n == 1);
            boundaries.push(IntMatrix::zeros(rows, cols));
        }
        ChainComplex { coeff, boundaries }
    }

    pub fn coeff(&self) -> CoefficientRing {
        self.coeff
    }

    pub fn top_degree(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.boundaries[n].cols()
    }

    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n]
    }

    /// Checks `d_{n-1} d_n = 0` in the coefficient ring.
    pub fn check_square_zero(&self) -> Result<()> {
        for n in 2..self.boundaries.len() {
            let dd = &self.boundaries[n - 1] * &self.boundaries[n];
            let vanishes = match self.coeff {
                CoefficientRing::Integers => dd.is_zero(),
                CoefficientRing::Mod2 => dd.reduce_mod(2).is_zero(),
            };
            if !vanishes {
                return Err(Error::NonZeroSquare(n));
            }
        }
        Ok(())
    }
}

/// Rank of a boundary map in the coefficient ring, plus its nontrivial
/// integral invariant factors.
fn boundary_data(d: &IntMatrix, coeff: CoefficientRing) -> (usize, Vec<BigInt>) {
    let factors = invariant_factors(d);
    match coeff {
        CoefficientRing::Integers => {
            let rank = factors.iter().filter(|x| !x.is_zero()).count();
            (rank, factors)
        }
        // Unimodular transforms stay invertible mod 2, so the F_2 rank is the
        // number of odd invariant factors.
        CoefficientRing::Mod2 => (factors.iter().filter(|x| x.is_odd()).count(), Vec::new()),
    }
}

/// `H_n = ker d_n / im d_{n+1}` for `n < top_degree`.
pub fn complex_homology(c: &ChainComplex) -> Result<GradedGroup> {
    c.check_square_zero()?;
    let top = c.top_degree();
    if top == 0 {
        return Err(Error::InvalidParameter("need at least one boundary above degree 0".into()));
    }
    let data: Vec<(usize, Vec<BigInt>)> = c.boundaries.iter().map(|d| boundary_data(d, c.coeff)).collect();
    let mut groups = Vec::with_capacity(top);
    for n in 0..top {
        let free = c.dim(n) - data[n].0 - data[n + 1].0;
        let g = match c.coeff {
            CoefficientRing::Integers => {
                let mut g = FinAbGroup::free(free);
                for x in data[n + 1].1.iter().filter(|x| !x.is_zero()) {
                    let m = u64::try_from(x)
                        .map_err(|_| Error::InvalidParameter(format!("torsion coefficient {x} exceeds u64")))?;
                    g = g.direct_sum(&FinAbGroup::cyclic_of_order(m)?);
                }
                g
            }
            CoefficientRing::Mod2 => FinAbGroup::elementary(PrimePower::new(2, 1).expect("2 is prime"), free),
        };
        groups.push(g);
    }
    GradedGroup::new(c.coeff, groups)
}

/// Periodic resolution of `Z/m` with trivial coefficients: the boundary is
/// zero in odd degrees and multiplication by `m` in even degrees `>= 2`.
/// Built through degree `max_degree + 1` so that homology through
/// `max_degree` is determined.
pub fn cyclic_resolution_complex(m: u64, coeff: CoefficientRing, max_degree: usize) -> Result<ChainComplex> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("cyclic order must be at least 2, got {m}")));
    }
    if coeff == CoefficientRing::Mod2 && !m.is_power_of_two() {
        return Err(Error::UnsupportedCoefficients(format!("Z/2 coefficients need a 2-group, got Z/{m}")));
    }
    let mut boundaries = vec![IntMatrix::zeros(0, 1)];
    for n in 1..=max_degree + 1 {
        let entry = if n % 2 == 0 { BigInt::from(m) } else { BigInt::zero() };
        boundaries.push(IntMatrix::from_rows(&[vec![entry]]));
    }
    ChainComplex::new(coeff, boundaries)
}

/// Total complex with `d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy`, through the
/// smaller of the two top degrees.
pub fn tensor_complex(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
    if a.coeff != b.coeff {
        return Err(Error::CoefficientMismatch);
    }
    let top = a.top_degree().min(b.top_degree());
    // offsets[n][i] = position of the (i, n - i) block inside C_n.
    let mut offsets = Vec::with_capacity(top + 1);
    let mut dims = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut off = Vec::with_capacity(n + 1);
        let mut total = 0;
        for i in 0..=n {
            off.push(total);
            total += a.dim(i) * b.dim(n - i);
        }
        offsets.push(off);
        dims.push(total);
    }
    let mut boundaries = vec![IntMatrix::zeros(0, dims[0])];
    for n in 1..=top {
        let mut d = IntMatrix::zeros(dims[n - 1], dims[n]);
        for i in 0..=n {
            let j = n - i;
            let (da, db) = (a.dim(i), b.dim(j));
            for x in 0..da {
                for y in 0..db {
                    let col = offsets[n][i] + x * db + y;
                    // dx ⊗ y lands in block (i - 1, j).
                    if i >= 1 {
                        let ax = a.boundary(i);
                        let db_j = b.dim(j);
                        for x2 in 0..a.dim(i - 1) {
                            let coef = &ax[(x2, x)];
                            if !coef.is_zero() {
                                d[(offsets[n - 1][i - 1] + x2 * db_j + y, col)] += coef;
                            }
                        }
                    }
                    // (-1)^i x ⊗ dy lands in block (i, j - 1).
                    if j >= 1 {
                        let by = b.boundary(j);
                        let db_j1 = b.dim(j - 1);
                        for y2 in 0..db_j1 {
                            let coef = &by[(y2, y)];
                            if !coef.is_zero() {
                                let row = offsets[n - 1][i] + x * db_j1 + y2;
                                if i % 2 == 0 {
                                    d[(row, col)] += coef;
                                } else {
                                    d[(row, col)] -= coef;
                                }
                            }
                        }
                    }
                }
            }
        }
        boundaries.push(d);
    }
    ChainComplex::new(a.coeff, boundaries)
}

/// Tensor product of resolutions for `Z^free_rank × ∏ Z/m_i`, in that order.
pub fn product_complex(
    free_rank: usize,
    orders: &[u64],
    coeff: CoefficientRing,
    max_degree: usize,
) -> Result<ChainComplex> {
    let top = max_degree + 1;
    let mut acc = ChainComplex::point(coeff, top);
    for _ in 0..free_rank {
        acc = tensor_complex(&acc, &ChainComplex::circle(coeff, top))?;
    }
    for &m in orders {
        acc = tensor_complex(&acc, &cyclic_resolution_complex(m, coeff, max_degree)?)?;
    }
    Ok(acc)
}

/// `ker(a · _ : Z/b -> Z/b)` by enumerating residues.
pub fn tor_bruteforce(a: u64, b: u64) -> Result<FinAbGroup> {
    if a < 2 || b < 2 {
        return Err(Error::InvalidParameter(format!("moduli must be at least 2, got ({a}, {b})")));
    }
    let count = (0..b).filter(|&x| (u128::from(a) * u128::from(x)) % u128::from(b) == 0).count();
    // A subgroup of a cyclic group is cyclic of that order.
    FinAbGroup::cyclic_of_order(count as u64)
}
