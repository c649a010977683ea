//! Exact rationals with an `i64` fast path.
//!
//! Values that fit in a reduced `i64 / i64` pair are stored inline; anything
//! larger spills to [`BigRational`]. The representation is canonical: a value
//! is stored as `Small` whenever it fits, so structural equality is value
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`, `num != i64::MIN`.
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small { num: 0, den: 1 });

    pub fn integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// `num / den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = if fits(num) && fits(den) {
            (num.unsigned_abs() as u64).gcd(&(den as u64)) as i128
        } else {
            num.gcd(&den)
        };
        if g > 1 {
            num /= g;
            den /= g;
        }
        if fits(num) && fits(den) {
            Rational(Repr::Small {
                num: num as i64,
                den: den as i64,
            })
        } else {
            Rational(Repr::Big(Box::new(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))))
        }
    }

    /// `num / den` already in lowest terms with `den > 0`.
    fn reduced(num: i128, den: i128) -> Self {
        if fits(num) && fits(den) {
            Rational(Repr::Small {
                num: num as i64,
                den: den as i64,
            })
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))))
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; only the downcast is needed.
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if fits(n) && fits(d) => Rational(Repr::Small {
                num: n as i64,
                den: d as i64,
            }),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    Self::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    // with g = gcd(b, d), only a factor of g can cancel
                    let g = (*b as u64).gcd(&(*d as u64));
                    let (bg, dg) = (*b as i128 / g as i128, *d as i128 / g as i128);
                    let num = *a as i128 * dg + *c as i128 * bg;
                    let h = if fits(num) { (num.unsigned_abs() as u64).gcd(&g) } else { num.gcd(&(g as i128)) as u64 };
                    let (num, den) = (num / h as i128, bg * (*d as i128 / h as i128));
                    Self::reduced(num, den)
                }
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            // num != i64::MIN, so negation cannot overflow
            Repr::Small { num, den } => Rational(Repr::Small {
                num: -num,
                den: *den,
            }),
            Repr::Big(b) => Self::from_big(-(**b).clone()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn half(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Self::from_i128(*num as i128, *den as i128 * 2),
            Repr::Big(b) => Self::from_big((**b).clone() / BigInt::from(2)),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rejected text for a rational in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCanonical(pub String);

fn canonical_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s == "-0" {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn parse_canonical(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        None => canonical_int(s).map(|n| Rational::from_big(BigRational::from_integer(n))),
        Some((p, q)) => {
            let p = canonical_int(p)?;
            if q.starts_with('-') {
                return None;
            }
            let q = canonical_int(q)?;
            if q <= BigInt::one() || !p.gcd(&q).is_one() || p.is_zero() {
                return None;
            }
            debug_assert!(q.is_positive());
            Some(Rational::from_big(BigRational::new_raw(p, q)))
        }
    }
}

impl FromStr for Rational {
    type Err = NonCanonical;

    /// Accepts only the canonical forms produced by `Display`: `p` or `p/q`
    /// with `q > 1` and `gcd(p, q) = 1`, no sign on `q`, no leading zeros.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_canonical(s).ok_or_else(|| NonCanonical(s.to_string()))
    }
}
