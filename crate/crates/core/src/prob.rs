use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An exact probability, kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProb(BigRational);

impl ExactProb {
    /// `count / total`. Panics if `count > total` or `total == 0`.
    pub fn from_counts(count: &BigUint, total: &BigUint) -> Self {
        assert!(!total.is_zero(), "probability with zero denominator");
        assert!(count <= total, "count exceeds total");
        ExactProb(BigRational::new(BigInt::from(count.clone()), BigInt::from(total.clone())))
    }

    /// Wraps a rational; panics if it lies outside `[0, 1]`.
    pub fn from_ratio(r: BigRational) -> Self {
        assert!(
            r >= BigRational::zero() && r <= BigRational::one(),
            "probability {r} outside [0, 1]"
        );
        ExactProb(r)
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Product of two probabilities.
    pub fn and_independent(&self, other: &ExactProb) -> ExactProb {
        ExactProb(&self.0 * &other.0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ProbJson::from(self)).expect("serializable")
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Wire shape: `{"num": "3", "den": "14"}` with decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbJson {
    pub num: String,
    pub den: String,
}

impl From<&ExactProb> for ProbJson {
    fn from(p: &ExactProb) -> Self {
        ProbJson { num: p.numer().to_string(), den: p.denom().to_string() }
    }
}

impl TryFrom<ProbJson> for ExactProb {
    type Error = crate::Error;

    fn try_from(j: ProbJson) -> crate::Result<Self> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| crate::Error::InvalidInput(format!("not a decimal integer: {s:?}")))
        };
        let (num, den) = (parse(&j.num)?, parse(&j.den)?);
        if den <= BigInt::zero() {
            return Err(crate::Error::InvalidInput("denominator must be positive".into()));
        }
        let r = BigRational::new(num, den);
        if r < BigRational::zero() || r > BigRational::one() {
            return Err(crate::Error::InvalidInput(format!("{r} is not a probability")));
        }
        Ok(ExactProb(r))
    }
}

impl Serialize for ExactProb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProbJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ProbJson::deserialize(d)?;
        ExactProb::try_from(j).map_err(serde::de::Error::custom)
    }
}
