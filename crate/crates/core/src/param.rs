//! The hypergroup parameter `r` and its derived geometry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The recurrence parameter `r`, kept as an exact rational with a cached float.
///
/// `r = 1` is rejected at construction (the relation degenerates there). The
/// hypergroup property — non-negative structure constants summing to one —
/// holds exactly for `0 <= r <= 1/2` and is exposed as [`Param::is_hypergroup`].
///
/// Float inputs are converted to their exact binary rational value, so the
/// exact and numeric views of one `Param` never disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    rat: BigRational,
    f: f64,
}

impl Param {
    pub fn new(r: BigRational) -> Result<Self> {
        if r.is_one() {
            return Err(Error::domain("r = 1 is excluded"));
        }
        let f = r.to_f64().ok_or_else(|| Error::domain("r out of f64 range"))?;
        Ok(Param { rat: r, f })
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("r denominator is zero"));
        }
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_f64(r: f64) -> Result<Self> {
        let rat = BigRational::from_float(r).ok_or_else(|| Error::domain("r must be finite"))?;
        Self::new(rat)
    }

    /// Parse `"p/q"` or a decimal literal.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad rational numerator {p:?}")))?;
            let den: i64 = q
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad rational denominator {q:?}")))?;
            Self::from_ratio(num, den)
        } else {
            let f: f64 = s
                .parse()
                .map_err(|_| Error::domain(format!("bad parameter {s:?}")))?;
            Self::from_f64(f)
        }
    }

    pub fn rational(&self) -> &BigRational {
        &self.rat
    }

    pub fn as_f64(&self) -> f64 {
        self.f
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    /// True exactly when `0 <= r <= 1/2`.
    pub fn is_hypergroup(&self) -> bool {
        !self.rat.is_negative() && (&self.rat * BigInt::from(2)) <= BigRational::one()
    }

    /// True exactly when `0 < r <= 1/2`, the range on which the spectral
    /// machinery (variable change, Cauchy transforms, closed-form measures)
    /// is set up.
    pub fn is_spectral(&self) -> bool {
        self.rat.is_positive() && (&self.rat * BigInt::from(2)) <= BigRational::one()
    }

    pub fn require_spectral(&self) -> Result<()> {
        if self.is_spectral() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "r = {} outside (0, 1/2]",
                self.rat
            )))
        }
    }

    /// `1 - r`, exact.
    pub fn one_minus(&self) -> BigRational {
        BigRational::one() - &self.rat
    }

    /// Half-width `a = 2 sqrt(r(1-r))` of the cut `I_r = [-a, a]`.
    pub fn cut_halfwidth(&self) -> f64 {
        2.0 * (self.f * (1.0 - self.f)).sqrt()
    }

    /// Critical radius `sqrt((1-r)/r)`: the circle `|z|` equal to it is
    /// collapsed onto the cut by `w = rz + (1-r)/z`. Requires `r > 0`.
    pub fn critical_radius(&self) -> f64 {
        ((1.0 - self.f) / self.f).sqrt()
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rat)
    }
}
