//! Exact arithmetic in `Q(λ)`, λ the real root of `2X³ − X² − X − 1`.
//!
//! Elements are stored as `c0 + c1·λ + c2·λ²` and products are reduced with
//! `2λ³ = λ² + λ + 1`. Signs are decided exactly: a floating-point filter
//! with a generous error bound settles almost every comparison, and the
//! remaining cases are resolved by bisecting a rational isolating interval
//! of λ until interval evaluation has constant sign.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Rational;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("division by zero in Q(λ)")]
    DivisionByZero,
    #[error("cannot parse {0:?} as c0 + c1*L + c2*L^2")]
    Parse(String),
}

/// `c[0] + c[1]·λ + c[2]·λ²` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicNumber<Q> {
    c: [Q; 3],
}

/// f64 approximation of λ, the unique real root of `2x³ − x² − x − 1` in `[1, 2]`.
pub fn lambda_f64() -> f64 {
    static L: OnceLock<f64> = OnceLock::new();
    *L.get_or_init(|| {
        let mut x = 1.25f64;
        for _ in 0..60 {
            let f = ((2.0 * x - 1.0) * x - 1.0) * x - 1.0;
            let df = (6.0 * x - 2.0) * x - 1.0;
            x -= f / df;
        }
        x
    })
}

// Relative slack applied to the float filter. Coefficient conversion and the
// three-term evaluation lose a few ulps; this is many orders larger.
const FILTER_SLACK: f64 = 1e-9;

impl<Q: Rational> CubicNumber<Q> {
    pub fn new(c0: Q, c1: Q, c2: Q) -> Self {
        CubicNumber { c: [c0, c1, c2] }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        Self::new(Q::int(c0), Q::int(c1), Q::int(c2))
    }

    pub fn from_rational(q: Q) -> Self {
        Self::new(q, Q::zero(), Q::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ints(n, 0, 0)
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn lambda() -> Self {
        Self::from_ints(0, 1, 0)
    }

    /// `λ⁻¹ = 2λ² − λ − 1`, since `λ(2λ² − λ − 1) = 2λ³ − λ² − λ = 1`.
    pub fn lambda_inv() -> Self {
        Self::from_ints(-1, -1, 2)
    }

    /// `λ^k` for any integer `k`.
    pub fn lambda_pow(k: i32) -> Self {
        let base = if k >= 0 { Self::lambda() } else { Self::lambda_inv() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn coeffs(&self) -> &[Q; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self::new(self.c[0].clone() * q.clone(), self.c[1].clone() * q.clone(), self.c[2].clone() * q.clone())
    }

    pub fn inverse(&self) -> Result<Self, LambdaError> {
        if self.is_zero() {
            return Err(LambdaError::DivisionByZero);
        }
        // Columns of the multiplication-by-self matrix are self·1, self·λ, self·λ².
        let cols = [self.clone(), self * &Self::lambda(), self * &Self::lambda_pow(2)];
        let mut m: Vec<Vec<Q>> = (0..3)
            .map(|r| {
                let mut row: Vec<Q> = (0..3).map(|c| cols[c].c[r].clone()).collect();
                row.push(if r == 0 { Q::one() } else { Q::zero() });
                row
            })
            .collect();
        // Gauss–Jordan; nonsingular because Q(λ) is a field.
        for col in 0..3 {
            let pivot = (col..3).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = v.clone() / p.clone();
            }
            for r in 0..3 {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in 0..4 {
                        let t = m[col][k].clone() * f.clone();
                        m[r][k] = m[r][k].clone() - t;
                    }
                }
            }
        }
        Ok(Self::new(m[0][3].clone(), m[1][3].clone(), m[2][3].clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, LambdaError> {
        Ok(self * &other.inverse()?)
    }

    /// Float value with an absolute error bound, when coefficients convert.
    pub fn approx(&self) -> Option<(f64, f64)> {
        let l = lambda_f64();
        let c0 = self.c[0].to_f64()?;
        let c1 = self.c[1].to_f64()?;
        let c2 = self.c[2].to_f64()?;
        let value = c0 + l * (c1 + l * c2);
        let magnitude = c0.abs() + l * (c1.abs() + l * c2.abs());
        if !value.is_finite() || !magnitude.is_finite() {
            return None;
        }
        Some((value, FILTER_SLACK * magnitude + f64::MIN_POSITIVE))
    }

    /// Interval evaluation on `[lo, hi]` with `0 < lo ≤ hi`.
    fn eval_interval(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let lows = [Q::one(), lo.clone(), lo.clone() * lo.clone()];
        let highs = [Q::one(), hi.clone(), hi.clone() * hi.clone()];
        let mut min = Q::zero();
        let mut max = Q::zero();
        for i in 0..3 {
            let c = &self.c[i];
            let a = c.clone() * lows[i].clone();
            let b = c.clone() * highs[i].clone();
            if c.is_negative() {
                min = min + b;
                max = max + a;
            } else {
                min = min + a;
                max = max + b;
            }
        }
        (min, max)
    }

    /// Exact sign by interval bisection; never consults floating point.
    pub fn exact_sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut iso = IsolatingInterval::<Q>::new();
        loop {
            let (min, max) = self.eval_interval(&iso.lo, &iso.hi);
            if min.is_positive() {
                return Ordering::Greater;
            }
            if max.is_negative() {
                return Ordering::Less;
            }
            iso.bisect();
        }
    }

    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some((v, err)) = self.approx() {
            if v > err {
                return Ordering::Greater;
            }
            if v < -err {
                return Ordering::Less;
            }
        }
        self.exact_sign()
    }

    /// Exact comparison. Equality is decided on coefficients.
    pub fn compare(&self, other: &Self) -> Ordering {
        if self.c == other.c {
            return Ordering::Equal;
        }
        if let (Some((x, ex)), Some((y, ey))) = (self.approx(), other.approx()) {
            let d = x - y;
            let e = ex + ey;
            if d > e {
                return Ordering::Greater;
            }
            if d < -e {
                return Ordering::Less;
            }
        }
        (self - other).exact_sign()
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Less
    }

    pub fn le(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Greater
    }

    /// Rational enclosure of width below `width`.
    pub fn enclose(&self, width: &Q) -> RationalEnclosure<Q> {
        let mut iso = IsolatingInterval::<Q>::new();
        loop {
            let (min, max) = self.eval_interval(&iso.lo, &iso.hi);
            if max.clone() - min.clone() < *width {
                return RationalEnclosure { lo: min, hi: max };
            }
            iso.bisect();
        }
    }

    /// Decimal enclosure of width below `10^-digits`.
    pub fn approximate(&self, digits: u32) -> RationalEnclosure<Q> {
        let mut ten = Q::one();
        for _ in 0..digits {
            ten = ten * Q::int(10);
        }
        // Leave room for outward rounding at digits+2 places when printed.
        let width = Q::one() / (ten * Q::int(2));
        self.enclose(&width)
    }
}

/// Nested rational intervals `[lo, hi]` containing λ, starting from `[1, 2]`.
#[derive(Clone, Debug)]
pub struct IsolatingInterval<Q> {
    pub lo: Q,
    pub hi: Q,
}

impl<Q: Rational> IsolatingInterval<Q> {
    pub fn new() -> Self {
        IsolatingInterval { lo: Q::one(), hi: Q::int(2) }
    }

    /// `2x³ − x² − x − 1`, increasing on `[1, 2]`.
    pub fn minimal_polynomial(x: &Q) -> Q {
        let two = Q::int(2);
        ((two * x.clone() - Q::one()) * x.clone() - Q::one()) * x.clone() - Q::one()
    }

    pub fn bisect(&mut self) {
        let mid = (self.lo.clone() + self.hi.clone()) / Q::int(2);
        // The root is irrational, so the polynomial never vanishes at `mid`.
        if Self::minimal_polynomial(&mid).is_negative() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(width: &Q) -> Self {
        let mut iso = Self::new();
        while iso.hi.clone() - iso.lo.clone() >= *width {
            iso.bisect();
        }
        iso
    }
}

impl<Q: Rational> Default for IsolatingInterval<Q> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalEnclosure<Q> {
    pub lo: Q,
    pub hi: Q,
}

impl<Q: Rational> RationalEnclosure<Q> {
    pub fn contains(&self, q: &Q) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn width(&self) -> Q {
        self.hi.clone() - self.lo.clone()
    }

    /// `[lo, hi]` printed with `places` decimals, rounded outward.
    pub fn to_decimal(&self, places: u32) -> String {
        format!(
            "[{}, {}]",
            decimal_string(&self.lo, places, false),
            decimal_string(&self.hi, places, true)
        )
    }
}

fn decimal_string<Q: Rational>(q: &Q, places: u32, round_up: bool) -> String {
    let mut scale = Q::one();
    for _ in 0..places {
        scale = scale * Q::int(10);
    }
    let scaled = q.clone() * scale;
    let mut n = scaled.floor_i128().expect("value fits i128 after scaling");
    if round_up && Q::int(0) != scaled.clone() - int_to_q::<Q>(n) {
        n += 1;
    }
    format_fixed(n, places)
}

fn int_to_q<Q: Rational>(n: i128) -> Q {
    let hi = (n >> 62) as i64;
    let lo = (n & ((1i128 << 62) - 1)) as i64;
    Q::int(hi) * Q::int(1i64 << 62) + Q::int(lo)
}

/// Render the integer `n · 10^-places`.
pub fn format_fixed(n: i128, places: u32) -> String {
    let neg = n < 0;
    let digits = n.unsigned_abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places { format!("{}{}", "0".repeat(places + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl<Q: Rational> Add for &CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn add(self, rhs: Self) -> CubicNumber<Q> {
        CubicNumber::new(
            self.c[0].clone() + rhs.c[0].clone(),
            self.c[1].clone() + rhs.c[1].clone(),
            self.c[2].clone() + rhs.c[2].clone(),
        )
    }
}

impl<Q: Rational> Add for CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn add(self, rhs: Self) -> CubicNumber<Q> {
        &self + &rhs
    }
}

impl<Q: Rational> AddAssign<&CubicNumber<Q>> for CubicNumber<Q> {
    fn add_assign(&mut self, rhs: &CubicNumber<Q>) {
        for i in 0..3 {
            self.c[i] = self.c[i].clone() + rhs.c[i].clone();
        }
    }
}

impl<Q: Rational> Sub for &CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn sub(self, rhs: Self) -> CubicNumber<Q> {
        CubicNumber::new(
            self.c[0].clone() - rhs.c[0].clone(),
            self.c[1].clone() - rhs.c[1].clone(),
            self.c[2].clone() - rhs.c[2].clone(),
        )
    }
}

impl<Q: Rational> Sub for CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn sub(self, rhs: Self) -> CubicNumber<Q> {
        &self - &rhs
    }
}

impl<Q: Rational> Neg for CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn neg(self) -> CubicNumber<Q> {
        let [a, b, c] = self.c;
        CubicNumber::new(-a, -b, -c)
    }
}

impl<Q: Rational> Mul for &CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn mul(self, rhs: Self) -> CubicNumber<Q> {
        let x = &self.c;
        let y = &rhs.c;
        let p = |i: usize, j: usize| x[i].clone() * y[j].clone();
        let p0 = p(0, 0);
        let p1 = p(0, 1) + p(1, 0);
        let p2 = p(0, 2) + p(1, 1) + p(2, 0);
        let p3 = p(1, 2) + p(2, 1);
        let p4 = p(2, 2);
        // λ³ = (1 + λ + λ²)/2,  λ⁴ = (1 + 3λ + 3λ²)/4
        let half = Q::from_frac(1, 2);
        let quarter = Q::from_frac(1, 4);
        let three_quarters = Q::from_frac(3, 4);
        let t3 = p3 * half;
        let c0 = p0 + t3.clone() + p4.clone() * quarter;
        let c1 = p1 + t3.clone() + p4.clone() * three_quarters.clone();
        let c2 = p2 + t3 + p4 * three_quarters;
        CubicNumber::new(c0, c1, c2)
    }
}

impl<Q: Rational> Mul for CubicNumber<Q> {
    type Output = CubicNumber<Q>;
    fn mul(self, rhs: Self) -> CubicNumber<Q> {
        &self * &rhs
    }
}

impl<Q: Rational> fmt::Display for CubicNumber<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*L + {}*L^2", self.c[0], self.c[1], self.c[2])
    }
}

impl<Q: Rational> FromStr for CubicNumber<Q> {
    type Err = LambdaError;

    /// Accepts `c0 + c1*L + c2*L^2`, terms in any order, missing terms zero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LambdaError::Parse(s.to_string());
        let mut c = [Q::zero(), Q::zero(), Q::zero()];
        for term in s.split(" + ") {
            let term = term.trim();
            let (coeff, power) = if let Some(q) = term.strip_suffix("*L^2") {
                (q, 2)
            } else if let Some(q) = term.strip_suffix("*L") {
                (q, 1)
            } else {
                (term, 0)
            };
            let q = Q::parse(coeff).ok_or_else(err)?;
            c[power] = c[power].clone() + q;
        }
        let [a, b, d] = c;
        Ok(CubicNumber::new(a, b, d))
    }
}

impl<Q: Rational> Serialize for CubicNumber<Q> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, Q: Rational> Deserialize<'de> for CubicNumber<Q> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Letter weights of the λ-metric.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable<Q> {
    weights: [CubicNumber<Q>; 4],
    // Integer coefficient form, used for fast length sums when available.
    int_form: Option<[[i64; 3]; 4]>,
}

impl<Q: Rational> WeightTable<Q> {
    /// `|a| = 2(λ−1)`, `|b| = 3 − 2λ`, `|c| = 2λ² − 3λ + 1`, `|d| = −2λ² + λ + 2`.
    pub fn standard() -> Self {
        Self::from_weights([
            CubicNumber::from_ints(-2, 2, 0),
            CubicNumber::from_ints(3, -2, 0),
            CubicNumber::from_ints(1, -3, 2),
            CubicNumber::from_ints(2, 1, -2),
        ])
    }

    pub fn from_weights(weights: [CubicNumber<Q>; 4]) -> Self {
        let int_form = weights
            .iter()
            .map(|w| {
                let mut out = [0i64; 3];
                for (o, c) in out.iter_mut().zip(w.c.iter()) {
                    if !c.is_integer_valued() {
                        return None;
                    }
                    *o = c.to_i64()?;
                }
                Some(out)
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| [v[0], v[1], v[2], v[3]]);
        WeightTable { weights, int_form }
    }

    pub fn weight(&self, l: Letter) -> &CubicNumber<Q> {
        &self.weights[l.index()]
    }

    pub fn with_weight(&self, l: Letter, w: CubicNumber<Q>) -> Self {
        let mut weights = self.weights.clone();
        weights[l.index()] = w;
        Self::from_weights(weights)
    }

    /// Sum of letter weights of the normal form; this is the λ-length of the
    /// element because reduced words are geodesic for these weights.
    pub fn lambda_length(&self, w: &Word) -> CubicNumber<Q> {
        self.length_of_counts(&w.letter_counts())
    }

    pub fn length_of_counts(&self, counts: &[u64; 4]) -> CubicNumber<Q> {
        if let Some(int) = &self.int_form {
            let mut acc = [0i128; 3];
            for (k, row) in int.iter().enumerate() {
                for i in 0..3 {
                    acc[i] += counts[k] as i128 * row[i] as i128;
                }
            }
            if acc.iter().all(|&v| i64::try_from(v).is_ok()) {
                return CubicNumber::from_ints(acc[0] as i64, acc[1] as i64, acc[2] as i64);
            }
        }
        let mut acc = CubicNumber::zero();
        for (k, w) in self.weights.iter().enumerate() {
            if counts[k] > 0 {
                acc += &w.scale(&Q::int(counts[k] as i64));
            }
        }
        acc
    }
}

trait IntegerValued {
    fn is_integer_valued(&self) -> bool;
}

impl<Q: Rational> IntegerValued for Q {
    fn is_integer_valued(&self) -> bool {
        self.floor_i128().is_some_and(|f| {
            i64::try_from(f).is_ok_and(|f| Q::int(f) == *self)
        })
    }
}

/// Cached weights over arbitrary-precision rationals.
pub fn standard_weights() -> &'static WeightTable<BigRational> {
    static W: OnceLock<WeightTable<BigRational>> = OnceLock::new();
    W.get_or_init(WeightTable::standard)
}

/// λ-length with the standard weights.
pub fn lambda_length(w: &Word) -> CubicNumber<BigRational> {
    standard_weights().lambda_length(w)
}

const POWER_MIN: i32 = -8;
const POWER_MAX: i32 = 400;

/// `λ^k` over arbitrary-precision rationals, cached for `-8 ≤ k ≤ 400`.
pub fn lambda_power(k: i32) -> CubicNumber<BigRational> {
    static P: OnceLock<Vec<CubicNumber<BigRational>>> = OnceLock::new();
    let table = P.get_or_init(|| {
        let mut v = Vec::with_capacity((POWER_MAX - POWER_MIN + 1) as usize);
        let mut cur = CubicNumber::lambda_pow(POWER_MIN);
        let l = CubicNumber::lambda();
        for _ in POWER_MIN..=POWER_MAX {
            v.push(cur.clone());
            cur = &cur * &l;
        }
        v
    });
    if (POWER_MIN..=POWER_MAX).contains(&k) {
        table[(k - POWER_MIN) as usize].clone()
    } else {
        CubicNumber::lambda_pow(k)
    }
}

/// `λ^lo ≤ n < λ^hi` decided exactly.
pub fn power_brackets(n: u64, lo: i32, hi: i32) -> bool {
    let q = CubicNumber::from_rational(BigRational::from_integer(BigInt::from(n)));
    lambda_power(lo).le(&q) && q.lt(&lambda_power(hi))
}

/// `i(n) = ⌊log_λ(n) − 1⌋`: the unique `m` with `λ^(m+1) ≤ n < λ^(m+2)`.
///
/// The float logarithm only seeds the search; the answer is fixed by exact
/// comparisons of powers of λ with `n`.
pub fn radius_index(n: u64) -> i32 {
    assert!(n >= 1, "radius_index needs n ≥ 1");
    let q = CubicNumber::from_rational(BigRational::from_integer(BigInt::from(n)));
    let mut m = ((n as f64).ln() / lambda_f64().ln() - 1.0).floor() as i32;
    while !lambda_power(m + 1).le(&q) {
        m -= 1;
    }
    while !q.lt(&lambda_power(m + 2)) {
        m += 1;
    }
    m
}

/// Closed float interval with outward-rounded endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatEnclosure {
    pub lo: f64,
    pub hi: f64,
}

// libm `ln` is within one ulp; widen by a few for safety.
fn widen_down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn widen_up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

impl FloatEnclosure {
    pub fn point(x: f64) -> Self {
        FloatEnclosure { lo: x, hi: x }
    }

    /// Natural log of a positive integer, enclosed.
    pub fn ln_of(n: &BigInt) -> Self {
        assert!(n.is_positive(), "ln of a non-positive integer");
        // n = m · 2^shift with m < 2^53 exactly representable or bounded.
        let bits = n.bits();
        let shift = bits.saturating_sub(52);
        let top: BigInt = n >> shift;
        let top = top.to_f64().expect("fits");
        let lo_m = top;
        let hi_m = if shift > 0 { top + 1.0 } else { top };
        let ln2 = std::f64::consts::LN_2;
        let s = shift as f64;
        FloatEnclosure {
            lo: widen_down(lo_m.ln() + s * ln2, 4),
            hi: widen_up(hi_m.ln() + s * ln2, 4),
        }
    }

    /// `ln λ`, enclosed via a rational isolating interval.
    pub fn ln_lambda() -> Self {
        let width = BigRational::new(BigInt::one(), BigInt::from(1u64) << 60);
        let iso = IsolatingInterval::<BigRational>::refine_to(&width);
        let lo = widen_down(iso.lo.to_f64().expect("finite"), 2);
        let hi = widen_up(iso.hi.to_f64().expect("finite"), 2);
        FloatEnclosure { lo: widen_down(lo.ln(), 4), hi: widen_up(hi.ln(), 4) }
    }

    /// Quotient of two positive enclosures.
    pub fn div_positive(&self, rhs: &FloatEnclosure) -> Self {
        assert!(self.lo > 0.0 && rhs.lo > 0.0);
        FloatEnclosure { lo: widen_down(self.lo / rhs.hi, 2), hi: widen_up(self.hi / rhs.lo, 2) }
    }

    pub fn div_int(&self, n: u64) -> Self {
        let d = n as f64;
        FloatEnclosure { lo: widen_down(self.lo / d, 2), hi: widen_up(self.hi / d, 2) }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Whether every point of the enclosure rounds to `target` at `places` decimals.
    pub fn rounds_to(&self, target: f64, places: i32) -> bool {
        let half = 0.5 * 10f64.powi(-places);
        self.lo >= target - half && self.hi < target + half
    }

    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10f64.powi(places as i32);
        format!(
            "[{}, {}]",
            format_fixed((self.lo * scale).floor() as i128, places),
            format_fixed((self.hi * scale).ceil() as i128, places)
        )
    }
}

/// `log_λ(n)` for a positive integer, enclosed.
pub fn log_lambda(n: u64) -> FloatEnclosure {
    FloatEnclosure::ln_of(&BigInt::from(n)).div_positive(&FloatEnclosure::ln_lambda())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cubic;
    use num_rational::Ratio;

    fn weight(l: Letter) -> Cubic {
        standard_weights().weight(l).clone()
    }

    #[test]
    fn lambda_inverse_coefficients() {
        let inv = Cubic::lambda().inverse().unwrap();
        assert_eq!(inv, Cubic::from_ints(-1, -1, 2));
        assert_eq!(&Cubic::lambda() * &inv, Cubic::one());
    }

    #[test]
    fn c_plus_d_is_b() {
        let s = &weight(Letter::C) + &weight(Letter::D);
        assert_eq!(s, Cubic::from_ints(3, -2, 0));
        assert_eq!(s.compare(&weight(Letter::B)), Ordering::Equal);
    }

    #[test]
    fn minimal_polynomial_holds() {
        let l = Cubic::lambda();
        let l2 = &l * &l;
        let l3 = &l2 * &l;
        let lhs = l3.scale(&BigRational::from_integer(2.into()));
        let rhs = &(&l2 + &l) + &Cubic::one();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Cubic::one().checked_div(&Cubic::zero()), Err(LambdaError::DivisionByZero));
    }

    #[test]
    fn paper_identities() {
        let a = weight(Letter::A);
        assert_eq!((&a + &weight(Letter::C)).compare(&lambda_power(-1)), Ordering::Equal);
        assert_eq!((&a + &weight(Letter::D)).compare(&lambda_power(-2)), Ordering::Equal);
        assert_eq!(weight(Letter::B), lambda_power(-3));
        assert_eq!(weight(Letter::B), &Cubic::one() - &a);
    }

    #[test]
    fn weights_positive_and_b_maximal() {
        for l in Letter::ALL {
            assert_eq!(weight(l).sign(), Ordering::Greater);
            assert_eq!(weight(l).exact_sign(), Ordering::Greater);
            assert!(weight(l).le(&weight(Letter::B)));
        }
    }

    #[test]
    fn lengths() {
        assert!(lambda_length(&Word::identity()).is_zero());
        assert_eq!(lambda_length(&"ad".parse().unwrap()), lambda_power(-2));
        let four = BigRational::from_integer(4.into());
        assert_eq!(lambda_length(&"adadadad".parse().unwrap()), lambda_power(-2).scale(&four));
    }

    #[test]
    fn radius_index_examples() {
        assert_eq!(radius_index(2), 2);
        assert_eq!(radius_index(5), 6);
        assert_eq!(radius_index(20), 13);
        assert_eq!(radius_index(1), -1);
    }

    #[test]
    fn approximations() {
        let l = Cubic::lambda().approximate(3);
        assert!(l.to_decimal(5).starts_with("[1.233"));
        let a = weight(Letter::A).approximate(4);
        assert!(a.width() < BigRational::new(1.into(), 100.into()));
        let f = FloatEnclosure { lo: a.lo.to_f64().unwrap(), hi: a.hi.to_f64().unwrap() };
        assert!(f.rounds_to(0.47, 2));
        let k = log_lambda(4);
        assert!(k.width() < 1e-9);
        assert!(k.rounds_to(6.60, 2));
    }

    #[test]
    fn display_roundtrip() {
        let x = Cubic::lambda_pow(5);
        assert_eq!(x.to_string().parse::<Cubic>().unwrap(), x);
        assert_eq!(Cubic::lambda_inv().to_string(), "-1 + -1*L + 2*L^2");
    }

    #[test]
    fn fixed_width_backend_agrees() {
        type Small = CubicNumber<Ratio<i128>>;
        let x = Small::from_ints(3, -2, 0);
        let y = &Small::from_ints(1, -3, 2) + &Small::from_ints(2, 1, -2);
        assert_eq!(x.compare(&y), Ordering::Equal);
        assert_eq!(Small::lambda_pow(-3), x);
        assert_eq!(Small::from_ints(0, 1, 0).exact_sign(), Ordering::Greater);
    }

    #[test]
    fn exact_sign_near_zero() {
        // λ^40 − its own truncated float value: the filter must defer to bisection.
        let p = lambda_power(40);
        let (v, _) = p.approx().unwrap();
        let q = BigRational::from_float(v).unwrap();
        let d = &p - &Cubic::from_rational(q);
        assert_eq!(d.sign(), d.exact_sign());
    }
}
