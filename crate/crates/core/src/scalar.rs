//! Exact scalar types the algebraic code is generic over.
//!
//! `Rational` is an ordered field with exact arithmetic (`Ratio<i64>`,
//! `Ratio<i128>`, `BigRational`); `Integer` is a Euclidean ring of exact
//! integers (`i64`, `i128`, `BigInt`). Fixed-width instantiations are
//! convenient for small inputs but overflow like their underlying integers.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer as NumInteger;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Rational:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer fits the rational type")
    }

    fn from_frac(numer: i64, denom: i64) -> Self {
        Self::int(numer) / Self::int(denom)
    }

    /// Parse `p` or `p/q`.
    fn parse(s: &str) -> Option<Self>;

    /// Floor of the value as an `i128`, if representable.
    fn floor_i128(&self) -> Option<i128>;
}

macro_rules! impl_rational_prim {
    ($t:ty) => {
        impl Rational for Ratio<$t> {
            fn parse(s: &str) -> Option<Self> {
                s.trim().parse().ok()
            }

            fn floor_i128(&self) -> Option<i128> {
                Some(self.floor().to_integer() as i128)
            }
        }
    };
}

impl_rational_prim!(i64);
impl_rational_prim!(i128);

impl Rational for Ratio<BigInt> {
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }

    fn floor_i128(&self) -> Option<i128> {
        self.floor().to_integer().to_i128()
    }
}

pub trait Integer:
    Clone + Debug + Display + Ord + NumInteger + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("integer fits the integer type")
    }
}

impl Integer for i64 {}
impl Integer for i128 {}
impl Integer for BigInt {}
