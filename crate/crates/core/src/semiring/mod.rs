//! Exact arithmetic in the supported anti-negative semifields.
//!
//! Three concrete instances are provided, all idempotent (`x + x = x`) and
//! hence anti-negative:
//!
//! * the boolean semifield `{0, 1}` with `1 + 1 = 1`;
//! * the max-plus semifield over the rationals, `ℚ ∪ {−∞}`;
//! * the max-plus semifield over the integers, `ℤ ∪ {−∞}`.
//!
//! In the max-plus instances semifield addition is `max`, semifield
//! multiplication is ordinary addition, `0_S = −∞` and `1_S = 0`.

mod rational;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use rational::{NonCanonical, Rational};

use crate::error::{Error, Result};

/// Which semifield a value or matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemifieldId {
    #[serde(rename = "boolean")]
    Boolean,
    #[serde(rename = "tropical")]
    TropicalRational,
    #[serde(rename = "tropical_int")]
    TropicalInteger,
}

impl SemifieldId {
    pub const ALL: [SemifieldId; 3] = [
        SemifieldId::Boolean,
        SemifieldId::TropicalRational,
        SemifieldId::TropicalInteger,
    ];

    /// Name used in the JSON formats and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SemifieldId::Boolean => "boolean",
            SemifieldId::TropicalRational => "tropical",
            SemifieldId::TropicalInteger => "tropical_int",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        SemifieldId::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Parse(format!("unknown semifield {name:?}")))
    }

    pub fn zero(self) -> Value {
        match self {
            SemifieldId::Boolean => Value::Boolean(false),
            SemifieldId::TropicalRational => Value::Tropical(Tropical::NegInf),
            SemifieldId::TropicalInteger => Value::TropicalInt(Tropical::NegInf),
        }
    }

    pub fn one(self) -> Value {
        match self {
            SemifieldId::Boolean => Value::Boolean(true),
            SemifieldId::TropicalRational => Value::Tropical(Tropical::Finite(Rational::ZERO)),
            SemifieldId::TropicalInteger => Value::TropicalInt(Tropical::Finite(Rational::ZERO)),
        }
    }

    pub fn is_boolean(self) -> bool {
        self == SemifieldId::Boolean
    }

    /// Parses the canonical text form of an element: `"0"`/`"1"` over the
    /// boolean semifield, `"-inf"` or a reduced `"p/q"` / `"p"` otherwise.
    pub fn parse_value(self, text: &str) -> Result<Value> {
        let bad = || Error::Parse(format!("{text:?} is not a canonical {} value", self.name()));
        match self {
            SemifieldId::Boolean => match text {
                "0" => Ok(Value::Boolean(false)),
                "1" => Ok(Value::Boolean(true)),
                _ => Err(bad()),
            },
            SemifieldId::TropicalRational | SemifieldId::TropicalInteger => {
                let t = if text == "-inf" {
                    Tropical::NegInf
                } else {
                    let r: Rational = text.parse().map_err(|_| bad())?;
                    if self == SemifieldId::TropicalInteger && !r.is_integer() {
                        return Err(bad());
                    }
                    Tropical::Finite(r)
                };
                Ok(self.wrap(t))
            }
        }
    }

    fn wrap(self, t: Tropical) -> Value {
        match self {
            SemifieldId::TropicalRational => Value::Tropical(t),
            SemifieldId::TropicalInteger => Value::TropicalInt(t),
            SemifieldId::Boolean => unreachable!("boolean values are not tropical"),
        }
    }

    /// An invertible `k` with `k·k ≠ 1_S`; such an element exists in every
    /// anti-negative semifield other than the boolean one.
    pub fn non_unit_square(self) -> Option<Value> {
        match self {
            SemifieldId::Boolean => None,
            _ => Some(self.wrap(Tropical::Finite(Rational::integer(1)))),
        }
    }
}

impl fmt::Display for SemifieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Max-plus payload: `−∞` or an exact rational.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tropical {
    NegInf,
    Finite(Rational),
}

impl Tropical {
    fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a.add(b)),
            _ => Tropical::NegInf,
        }
    }
}

/// An element of one of the supported semifields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Boolean(bool),
    Tropical(Tropical),
    TropicalInt(Tropical),
}

impl Value {
    pub fn boolean(b: bool) -> Self {
        Value::Boolean(b)
    }

    /// A finite max-plus rational `num/den`.
    pub fn tropical(num: i64, den: i64) -> Self {
        Value::Tropical(Tropical::Finite(Rational::new(num, den)))
    }

    pub fn tropical_int(n: i64) -> Self {
        Value::TropicalInt(Tropical::Finite(Rational::integer(n)))
    }

    pub fn from_rational(semifield: SemifieldId, r: Rational) -> Result<Self> {
        match semifield {
            SemifieldId::Boolean => Err(Error::Parse("rational value for boolean semifield".into())),
            SemifieldId::TropicalInteger if !r.is_integer() => {
                Err(Error::Parse(format!("{r} is not an integer")))
            }
            sf => Ok(sf.wrap(Tropical::Finite(r))),
        }
    }

    pub fn semifield(&self) -> SemifieldId {
        match self {
            Value::Boolean(_) => SemifieldId::Boolean,
            Value::Tropical(_) => SemifieldId::TropicalRational,
            Value::TropicalInt(_) => SemifieldId::TropicalInteger,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Boolean(b) => !b,
            Value::Tropical(t) | Value::TropicalInt(t) => *t == Tropical::NegInf,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Boolean(b) => *b,
            Value::Tropical(t) | Value::TropicalInt(t) => {
                matches!(t, Tropical::Finite(r) if r.is_zero())
            }
        }
    }

    /// The finite rational payload of a max-plus value.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Tropical(Tropical::Finite(r)) | Value::TropicalInt(Tropical::Finite(r)) => Some(r),
            _ => None,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.semifield() == other.semifield() {
            Ok(())
        } else {
            Err(Error::MixedSemifields(self.semifield(), other.semifield()))
        }
    }

    /// Semifield addition.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.sum(other))
    }

    /// Semifield multiplication.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.product(other))
    }

    /// Multiplicative inverse of a non-zero element.
    pub fn inv(&self) -> Result<Self> {
        match self {
            _ if self.is_zero() => Err(Error::NotInvertible),
            Value::Boolean(_) => Ok(Value::Boolean(true)),
            Value::Tropical(Tropical::Finite(r)) => Ok(Value::Tropical(Tropical::Finite(r.neg()))),
            Value::TropicalInt(Tropical::Finite(r)) => {
                Ok(Value::TropicalInt(Tropical::Finite(r.neg())))
            }
            _ => unreachable!(),
        }
    }

    /// An `s` with `s·s = self`, if the carrier has one.
    pub fn try_sqrt(&self) -> Result<Option<Self>> {
        match self {
            _ if self.is_zero() => Err(Error::NotInvertible),
            Value::Boolean(_) => Ok(Some(Value::Boolean(true))),
            Value::Tropical(Tropical::Finite(r)) => Ok(Some(Value::Tropical(Tropical::Finite(r.half())))),
            Value::TropicalInt(Tropical::Finite(r)) => {
                let h = r.half();
                Ok(h.is_integer().then_some(Value::TropicalInt(Tropical::Finite(h))))
            }
            _ => unreachable!(),
        }
    }

    /// Addition for operands already known to share a semifield.
    pub(crate) fn sum(&self, other: &Self) -> Self {
        match (self, other) {
            (Value::Boolean(a), Value::Boolean(b)) => Value::Boolean(*a || *b),
            (Value::Tropical(a), Value::Tropical(b)) => Value::Tropical(a.max(b)),
            (Value::TropicalInt(a), Value::TropicalInt(b)) => Value::TropicalInt(a.max(b)),
            _ => panic!("mixed semifields in internal sum"),
        }
    }

    pub(crate) fn product(&self, other: &Self) -> Self {
        match (self, other) {
            (Value::Boolean(a), Value::Boolean(b)) => Value::Boolean(*a && *b),
            (Value::Tropical(a), Value::Tropical(b)) => Value::Tropical(a.plus(b)),
            (Value::TropicalInt(a), Value::TropicalInt(b)) => Value::TropicalInt(a.plus(b)),
            _ => panic!("mixed semifields in internal product"),
        }
    }

    /// The natural order of an idempotent semifield: `x ≤ y` iff `x + y = y`.
    pub fn natural_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Boolean(a), Value::Boolean(b)) => a.cmp(b),
            (Value::Tropical(a), Value::Tropical(b)) | (Value::TropicalInt(a), Value::TropicalInt(b)) => {
                a.cmp(b)
            }
            _ => panic!("mixed semifields in natural order"),
        }
    }

    pub fn natural_le(&self, other: &Self) -> bool {
        self.natural_cmp(other) != Ordering::Greater
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Boolean(b) => f.write_str(if *b { "1" } else { "0" }),
            Value::Tropical(Tropical::NegInf) | Value::TropicalInt(Tropical::NegInf) => f.write_str("-inf"),
            Value::Tropical(Tropical::Finite(r)) | Value::TropicalInt(Tropical::Finite(r)) => {
                write!(f, "{r}")
            }
        }
    }
}

/// Serialized as its canonical text.
impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B: SemifieldId = SemifieldId::Boolean;
    const TQ: SemifieldId = SemifieldId::TropicalRational;
    const TZ: SemifieldId = SemifieldId::TropicalInteger;

    fn q(s: &str) -> Value {
        TQ.parse_value(s).unwrap()
    }

    #[test]
    fn addition() {
        assert_eq!(Value::boolean(true).add(&Value::boolean(true)).unwrap(), Value::boolean(true));
        assert_eq!(q("3").add(&q("-inf")).unwrap(), q("3"));
        assert_eq!(q("1/2").add(&q("2/3")).unwrap(), q("2/3"));
        assert_eq!(
            q("1").add(&Value::tropical_int(1)),
            Err(Error::MixedSemifields(TQ, TZ))
        );
    }

    #[test]
    fn multiplication() {
        assert_eq!(Value::boolean(true).mul(&Value::boolean(true)).unwrap(), Value::boolean(true));
        assert_eq!(q("2").mul(&q("3")).unwrap(), q("5"));
        assert_eq!(q("7").mul(&q("-inf")).unwrap(), TQ.zero());
        assert!(matches!(Value::boolean(true).mul(&q("0")), Err(Error::MixedSemifields(..))));
    }

    #[test]
    fn inverses() {
        assert_eq!(q("3").inv().unwrap(), q("-3"));
        assert_eq!(Value::boolean(true).inv().unwrap(), Value::boolean(true));
        assert_eq!(q("-inf").inv(), Err(Error::NotInvertible));
        assert_eq!(B.zero().inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn square_roots() {
        assert_eq!(q("3").try_sqrt().unwrap(), Some(q("3/2")));
        assert_eq!(Value::tropical_int(3).try_sqrt().unwrap(), None);
        assert_eq!(Value::tropical_int(-4).try_sqrt().unwrap(), Some(Value::tropical_int(-2)));
        assert_eq!(Value::boolean(true).try_sqrt().unwrap(), Some(Value::boolean(true)));
        assert_eq!(TZ.zero().try_sqrt(), Err(Error::NotInvertible));
    }

    #[test]
    fn non_unit_squares() {
        assert_eq!(B.non_unit_square(), None);
        assert_eq!(TQ.non_unit_square(), Some(q("1")));
        assert_eq!(TZ.non_unit_square(), Some(Value::tropical_int(1)));
        for sf in [TQ, TZ] {
            let k = sf.non_unit_square().unwrap();
            assert!(!k.is_zero());
            assert!(!k.mul(&k).unwrap().is_one());
        }
    }

    #[test]
    fn text_forms() {
        assert_eq!(B.parse_value("1").unwrap().to_string(), "1");
        assert!(B.parse_value("2").is_err());
        assert!(B.parse_value("true").is_err());
        assert_eq!(q("-inf"), TQ.zero());
        assert_eq!(q("0"), TQ.one());
        assert!(TQ.parse_value("-Inf").is_err());
        assert!(TQ.parse_value("4/6").is_err());
        assert!(TZ.parse_value("1/2").is_err());
        assert_eq!(TZ.parse_value("-12").unwrap(), Value::tropical_int(-12));
    }

    fn arb_value(sf: SemifieldId) -> BoxedStrategy<Value> {
        match sf {
            SemifieldId::Boolean => any::<bool>().prop_map(Value::Boolean).boxed(),
            SemifieldId::TropicalRational => prop_oneof![
                1 => Just(TQ.zero()),
                6 => (-1000i64..1000, 1i64..50).prop_map(|(p, q)| Value::tropical(p, q)),
            ]
            .boxed(),
            SemifieldId::TropicalInteger => prop_oneof![
                1 => Just(TZ.zero()),
                6 => (-1000i64..1000).prop_map(Value::tropical_int),
            ]
            .boxed(),
        }
    }

    fn arb_triple() -> impl Strategy<Value = (Value, Value, Value)> {
        prop_oneof![Just(B), Just(TQ), Just(TZ)]
            .prop_flat_map(|sf| (arb_value(sf), arb_value(sf), arb_value(sf)))
    }

    proptest! {
        #[test]
        fn semiring_axioms((x, y, z) in arb_triple()) {
            let sf = x.semifield();
            prop_assert_eq!(x.add(&y)?, y.add(&x)?);
            prop_assert_eq!(x.mul(&y)?, y.mul(&x)?);
            prop_assert_eq!(x.add(&y)?.add(&z)?, x.add(&y.add(&z)?)?);
            prop_assert_eq!(x.mul(&y)?.mul(&z)?, x.mul(&y.mul(&z)?)?);
            prop_assert_eq!(x.mul(&y.add(&z)?)?, x.mul(&y)?.add(&x.mul(&z)?)?);
            prop_assert_eq!(y.add(&z)?.mul(&x)?, y.mul(&x)?.add(&z.mul(&x)?)?);
            prop_assert_eq!(x.add(&sf.zero())?, x.clone());
            prop_assert_eq!(x.mul(&sf.one())?, x.clone());
            prop_assert!(x.mul(&sf.zero())?.is_zero());
            prop_assert_eq!(x.add(&x)?, x.clone());
            if x.add(&y)?.is_zero() {
                prop_assert!(x.is_zero() && y.is_zero());
            }
        }

        #[test]
        fn inverse_and_sqrt((x, _, _) in arb_triple()) {
            prop_assume!(!x.is_zero());
            let sf = x.semifield();
            let i = x.inv()?;
            prop_assert_eq!(x.mul(&i)?, sf.one());
            prop_assert_eq!(i.inv()?, x.clone());
            if let Some(s) = x.try_sqrt()? {
                prop_assert_eq!(s.mul(&s)?, x.clone());
            }
            prop_assert_eq!(sf.parse_value(&x.to_string())?, x.clone());
        }
    }
}
