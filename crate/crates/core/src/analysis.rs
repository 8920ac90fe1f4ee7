//! Curvature integrals bounding the Yamabe functional for the Toda-bracket
//! and product constructions, and a parameter schedule driving the
//! Toda-bracket bound below a target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TodaBoundParams {
    pub n0: usize,
    pub n1: usize,
    pub c0: f64,
    pub c1: f64,
    pub d0: f64,
    pub d1: f64,
    pub t0: f64,
    pub t1: f64,
    pub l: f64,
    pub eps: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be nonnegative and finite, got {x}")))
    }
}

fn scale(name: &str, t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {t}")))
    }
}

fn check_constants(n0: usize, n1: usize, c0: f64, c1: f64, d0: f64, d1: f64) -> Result<()> {
    if n0 == 0 || n1 == 0 {
        return Err(Error::InvalidParameter("n0 and n1 must be positive".into()));
    }
    positive("c0", c0)?;
    positive("c1", c1)?;
    positive("d0", d0)?;
    positive("d1", d1)
}

impl TodaBoundParams {
    /// Checks the range constraints. `d0 = d1 = 0` is accepted here so the
    /// degenerate evaluation can be formed.
    pub fn validate(&self) -> Result<()> {
        if self.n0 == 0 || self.n1 == 0 {
            return Err(Error::InvalidParameter("n0 and n1 must be positive".into()));
        }
        positive("c0", self.c0)?;
        positive("c1", self.c1)?;
        nonnegative("d0", self.d0)?;
        nonnegative("d1", self.d1)?;
        scale("t0", self.t0)?;
        scale("t1", self.t1)?;
        positive("l", self.l)?;
        nonnegative("eps", self.eps)
    }

    /// Dimension `n0 + n1 + 1` of the bracket.
    pub fn total_dimension(&self) -> usize {
        self.n0 + self.n1 + 1
    }

    fn half_power(&self) -> f64 {
        self.total_dimension() as f64 / 2.0
    }

    /// `c0 t1^{n1 - N} ε^{N/2}`.
    pub fn a_term0(&self) -> f64 {
        let n = self.total_dimension() as i32;
        self.c0 * self.t1.powi(self.n1 as i32 - n) * self.eps.powf(self.half_power())
    }

    /// `c1 t0^{n0 - N} ε^{N/2}`.
    pub fn a_term1(&self) -> f64 {
        let n = self.total_dimension() as i32;
        self.c1 * self.t0.powi(self.n0 as i32 - n) * self.eps.powf(self.half_power())
    }

    fn tube(&self, t: f64, d: f64, eps: f64) -> f64 {
        let log = (1.0 / t).ln();
        let inner = eps + eps / (t * t) + d * log * log / (self.l * self.l);
        self.l * inner.abs().powf(self.half_power())
    }

    /// `l |ε + ε/t0² + d0 ln(1/t0)²/l²|^{N/2}`.
    pub fn tube_term0(&self) -> f64 {
        self.tube(self.t0, self.d0, self.eps)
    }

    pub fn tube_term1(&self) -> f64 {
        self.tube(self.t1, self.d1, self.eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductBoundParams {
    pub m: usize,
    pub n: usize,
    pub c: f64,
    pub t: f64,
    pub eps: f64,
}

impl ProductBoundParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        nonnegative("C", self.c)?;
        positive("t", self.t)?;
        nonnegative("eps", self.eps)
    }
}

/// `s_fiber / f² - n (n-1) (f'/f)² - 2 n f''/f`.
pub fn warped_scalar_curvature(f: f64, f_prime: f64, f_double_prime: f64, s_fiber: f64, n_fiber: usize) -> Result<f64> {
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::InvalidParameter(format!("warping function must be positive, got {f}")));
    }
    if n_fiber == 0 {
        return Err(Error::InvalidParameter("fiber dimension must be positive".into()));
    }
    let n = n_fiber as f64;
    let ratio = f_prime / f;
    Ok(s_fiber / (f * f) - n * (n - 1.0) * ratio * ratio - 2.0 * n * f_double_prime / f)
}

/// `t^m |C t^{-2} + ε|^{(n+m)/2}`.
pub fn product_bound(p: &ProductBoundParams) -> f64 {
    let exponent = (p.n + p.m) as f64 / 2.0;
    p.t.powi(p.m as i32) * (p.c / (p.t * p.t) + p.eps).abs().powf(exponent)
}

/// Sum of the two end-piece terms and the two tube terms.
pub fn toda_bound(p: &TodaBoundParams) -> f64 {
    p.a_term0() + p.a_term1() + p.tube_term0() + p.tube_term1()
}

/// Output of [`choose_parameters`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub params: TodaBoundParams,
    /// `toda_bound(params)`, recomputed after the search.
    pub bound: f64,
    /// Tube terms at the chosen `l` with `ε = 0`.
    pub tube_bound_at_zero_eps: f64,
    pub delta: f64,
}

const MAX_STEPS: usize = 4096;

/// Fixes `t0 = t1 = 1/2`, doubles `l` until each tube term at `ε = 0` is below
/// `δ/8`, then halves `ε` until each end-piece term is below `δ/8` and each
/// full tube term below `δ/4`. The result is certified by re-evaluating
/// [`toda_bound`].
pub fn choose_parameters(n0: usize, n1: usize, c0: f64, c1: f64, d0: f64, d1: f64, delta: f64) -> Result<Schedule> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    check_constants(n0, n1, c0, c1, d0, d1)?;
    let mut p = TodaBoundParams { n0, n1, c0, c1, d0, d1, t0: 0.5, t1: 0.5, l: 1.0, eps: 0.0 };

    let mut steps = 0;
    while p.tube_term0() >= delta / 8.0 || p.tube_term1() >= delta / 8.0 {
        p.l *= 2.0;
        steps += 1;
        if steps > MAX_STEPS || !p.l.is_finite() {
            return Err(Error::InvalidParameter(format!("no tube length reaches delta = {delta}")));
        }
    }
    let tube_bound_at_zero_eps = p.tube_term0() + p.tube_term1();

    p.eps = 1.0;
    steps = 0;
    while p.a_term0() >= delta / 8.0
        || p.a_term1() >= delta / 8.0
        || p.tube_term0() >= delta / 4.0
        || p.tube_term1() >= delta / 4.0
    {
        p.eps /= 2.0;
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::InvalidParameter(format!("no eps reaches delta = {delta}")));
        }
    }

    let bound = toda_bound(&p);
    if bound >= delta {
        return Err(Error::InvalidParameter(format!("certification failed: bound {bound} >= delta {delta}")));
    }
    Ok(Schedule { params: p, bound, tube_bound_at_zero_eps, delta })
}
