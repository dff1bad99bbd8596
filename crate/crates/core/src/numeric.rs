//! Exact non-negative decimal values.
//!
//! Every surface form the harness deals with (plain digits, localized digits,
//! number words, digit + scale word hybrids) reduces to a [`CanonicalNumber`].
//! The value is stored as a coefficient digit string plus a count of
//! fractional digits, so no binary floating point is ever involved.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Error returned by [`CanonicalNumber::from_plain_string`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlainParseError {
    #[error("empty number string")]
    Empty,
    #[error("unexpected character {found:?} at position {position}")]
    InvalidCharacter { position: usize, found: char },
    #[error("second decimal point at position {position}")]
    MultipleDecimalPoints { position: usize },
    #[error("number string contains no digits")]
    NoDigits,
}

/// An exact non-negative decimal: `digits × 10^(-scale)`.
///
/// The representation is normalized on construction: no leading zeros in
/// `digits` (zero itself is `"0"`), no trailing zeros in the fractional part.
/// Two values are equal exactly when their normalized fields are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalNumber {
    digits: String,
    scale: u32,
}

impl CanonicalNumber {
    pub fn zero() -> Self {
        CanonicalNumber {
            digits: "0".to_string(),
            scale: 0,
        }
    }

    /// Builds a value from a coefficient and a fractional digit count.
    ///
    /// Returns `None` if `digits` is empty or contains a non-ASCII-digit.
    pub fn from_parts(digits: &str, scale: u32) -> Option<Self> {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Some(Self::normalized(digits.to_string(), scale))
    }

    pub fn from_u64(value: u64) -> Self {
        Self::normalized(value.to_string(), 0)
    }

    pub fn from_u128(value: u128) -> Self {
        Self::normalized(value.to_string(), 0)
    }

    fn normalized(mut digits: String, mut scale: u32) -> Self {
        while scale > 0 && digits.ends_with('0') {
            digits.pop();
            scale -= 1;
        }
        let trimmed = digits.trim_start_matches('0');
        let digits = if trimmed.is_empty() {
            scale = 0;
            "0".to_string()
        } else {
            trimmed.to_string()
        };
        CanonicalNumber { digits, scale }
    }

    /// Parses `"123.45"`, `"914"`, `".5"` or `"5."`.
    ///
    /// No signs, grouping separators or exponents are accepted.
    pub fn from_plain_string(s: &str) -> Result<Self, PlainParseError> {
        if s.is_empty() {
            return Err(PlainParseError::Empty);
        }
        let mut digits = String::with_capacity(s.len());
        let mut point: Option<usize> = None;
        let mut scale = 0u32;
        for (position, c) in s.chars().enumerate() {
            match c {
                '0'..='9' => {
                    digits.push(c);
                    if point.is_some() {
                        scale += 1;
                    }
                }
                '.' => {
                    if point.is_some() {
                        return Err(PlainParseError::MultipleDecimalPoints { position });
                    }
                    point = Some(position);
                }
                found => return Err(PlainParseError::InvalidCharacter { position, found }),
            }
        }
        if digits.is_empty() {
            return Err(PlainParseError::NoDigits);
        }
        Ok(Self::normalized(digits, scale))
    }

    /// Coefficient digits, most significant first.
    pub fn digits(&self) -> &str {
        &self.digits
    }

    /// Number of fractional digits in the coefficient.
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.digits == "0"
    }

    pub fn is_integer(&self) -> bool {
        self.scale == 0
    }

    /// Value equality. Equivalent to `==` because the form is normalized.
    pub fn equals_value(&self, other: &CanonicalNumber) -> bool {
        self == other
    }

    /// Multiplies by `10^k` exactly. `k` may be negative.
    pub fn scale_by_power_of_ten(&self, k: i32) -> CanonicalNumber {
        if self.is_zero() {
            return self.clone();
        }
        if k >= 0 {
            let k = k as u32;
            if k <= self.scale {
                Self::normalized(self.digits.clone(), self.scale - k)
            } else {
                let mut digits = self.digits.clone();
                digits.extend(std::iter::repeat_n('0', (k - self.scale) as usize));
                Self::normalized(digits, 0)
            }
        } else {
            Self::normalized(self.digits.clone(), self.scale + k.unsigned_abs())
        }
    }

    /// Integer part digits (`"0"` when the value is below one).
    pub fn integer_part(&self) -> String {
        let len = self.digits.len();
        let scale = self.scale as usize;
        if scale >= len {
            "0".to_string()
        } else {
            self.digits[..len - scale].to_string()
        }
    }

    /// Fractional digits, zero padded on the left; empty for integers.
    pub fn fraction_part(&self) -> String {
        let len = self.digits.len();
        let scale = self.scale as usize;
        if scale == 0 {
            String::new()
        } else if scale >= len {
            let mut out = "0".repeat(scale - len);
            out.push_str(&self.digits);
            out
        } else {
            self.digits[len - scale..].to_string()
        }
    }

    pub fn to_plain_string(&self) -> String {
        let fraction = self.fraction_part();
        if fraction.is_empty() {
            self.integer_part()
        } else {
            format!("{}.{}", self.integer_part(), fraction)
        }
    }

    /// The digits as written in plain form with the decimal point removed
    /// (`3.28` → `"328"`, `0.05` → `"005"`).
    pub fn written_digits(&self) -> String {
        let mut out = self.integer_part();
        out.push_str(&self.fraction_part());
        out
    }

    /// Significant digits with all leading and trailing zeros removed.
    /// `10010000` and `10.01` both give `"1001"`.
    pub fn significant_digits(&self) -> &str {
        self.digits.trim_end_matches('0')
    }

    /// Decimal exponent of the least significant non-zero digit.
    fn trailing_exponent(&self) -> i64 {
        let zeros = self.digits.len() - self.digits.trim_end_matches('0').len();
        zeros as i64 - self.scale as i64
    }

    /// If `self = other × 10^k` for some integer `k`, returns `k`.
    pub fn power_of_ten_ratio(&self, other: &CanonicalNumber) -> Option<i64> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some(0)
            } else {
                None
            };
        }
        if self.significant_digits() != other.significant_digits() {
            return None;
        }
        Some(self.trailing_exponent() - other.trailing_exponent())
    }

    /// Value as `u128` when it is an integer that fits.
    pub fn to_u128(&self) -> Option<u128> {
        if self.scale != 0 {
            return None;
        }
        self.digits.parse().ok()
    }
}

impl Default for CanonicalNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for CanonicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

impl FromStr for CanonicalNumber {
    type Err = PlainParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_plain_string(s)
    }
}

impl Ord for CanonicalNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.integer_part(), other.integer_part());
        a.len()
            .cmp(&b.len())
            .then_with(|| a.cmp(&b))
            .then_with(|| {
                let (fa, fb) = (self.fraction_part(), other.fraction_part());
                let width = fa.len().max(fb.len());
                format!("{fa:0<width$}").cmp(&format!("{fb:0<width$}"))
            })
    }
}

impl PartialOrd for CanonicalNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for CanonicalNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_plain_string())
    }
}

impl<'de> Deserialize<'de> for CanonicalNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::from_plain_string(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(s: &str) -> CanonicalNumber {
        CanonicalNumber::from_plain_string(s).unwrap()
    }

    #[test]
    fn parses_plain_strings() {
        let n = num("914");
        assert_eq!((n.digits(), n.scale()), ("914", 0));
        let n = num("0");
        assert_eq!((n.digits(), n.scale()), ("0", 0));
        let n = num("3.28");
        assert_eq!((n.digits(), n.scale()), ("328", 2));
        let n = num("0.5");
        assert_eq!((n.digits(), n.scale()), ("5", 1));
        assert_eq!(num(".5"), num("0.5"));
        assert_eq!(num("5."), num("5"));
        assert_eq!(num("007"), num("7"));
    }

    #[test]
    fn rejects_malformed_strings() {
        assert_eq!(CanonicalNumber::from_plain_string(""), Err(PlainParseError::Empty));
        assert_eq!(
            CanonicalNumber::from_plain_string("1.2.3"),
            Err(PlainParseError::MultipleDecimalPoints { position: 3 })
        );
        assert_eq!(
            CanonicalNumber::from_plain_string("12a"),
            Err(PlainParseError::InvalidCharacter { position: 2, found: 'a' })
        );
        assert_eq!(
            CanonicalNumber::from_plain_string("-5"),
            Err(PlainParseError::InvalidCharacter { position: 0, found: '-' })
        );
        assert_eq!(CanonicalNumber::from_plain_string("."), Err(PlainParseError::NoDigits));
        assert!(CanonicalNumber::from_plain_string("1,000").is_err());
    }

    #[test]
    fn value_equality_ignores_trailing_zeros() {
        assert!(num("5").equals_value(&CanonicalNumber::from_parts("50", 1).unwrap()));
        assert!(num("5").equals_value(&num("5")));
        assert!(num("5.70").equals_value(&num("5.7")));
        assert!(!num("5.7").equals_value(&num("57")));
        // 100.01 × 1,000,000 worked by hand: 100,010,000
        assert!(num("100.01").scale_by_power_of_ten(6).equals_value(&num("100010000")));
    }

    #[test]
    fn scaling_by_powers_of_ten() {
        assert_eq!(num("10.01").scale_by_power_of_ten(6), num("10010000"));
        assert_eq!(num("7").scale_by_power_of_ten(0), num("7"));
        // 1001 × 10^4 and 10.01 × 10^6 agree as plain integers
        assert_eq!(1001u64 * 10_000, 10_010_000);
        assert_eq!(num("1001").scale_by_power_of_ten(4), num("10010000"));
        assert_eq!(num("1001").scale_by_power_of_ten(-4), num("0.1001"));
        assert_eq!(num("0").scale_by_power_of_ten(-3), num("0"));
        assert_eq!(num("5").scale_by_power_of_ten(-3).to_plain_string(), "0.005");
    }

    #[test]
    fn parts_and_digit_views() {
        let n = num("0.05");
        assert_eq!(n.integer_part(), "0");
        assert_eq!(n.fraction_part(), "05");
        assert_eq!(n.written_digits(), "005");
        assert_eq!(num("10010000").significant_digits(), "1001");
        assert_eq!(num("10010000").power_of_ten_ratio(&num("10.01")), Some(6));
        assert_eq!(num("100100000000").power_of_ten_ratio(&num("10010000")), Some(4));
        assert_eq!(num("123").power_of_ten_ratio(&num("124")), None);
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(num("9") < num("10"));
        assert!(num("1.05") < num("1.5"));
        assert!(num("0.999") < num("1"));
        assert_eq!(num("2.50").cmp(&num("2.5")), Ordering::Equal);
    }

    #[test]
    fn serde_uses_plain_strings() {
        let json = serde_json::to_string(&num("123.45")).unwrap();
        assert_eq!(json, "\"123.45\"");
        let back: CanonicalNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, num("123.45"));
        assert!(serde_json::from_str::<CanonicalNumber>("\"1..2\"").is_err());
    }

    fn plain_string() -> impl Strategy<Value = String> {
        (
            "[1-9][0-9]{0,19}|0",
            proptest::option::of("[0-9]{0,19}[1-9]"),
        )
            .prop_map(|(int, frac)| match frac {
                Some(f) => format!("{int}.{f}"),
                None => int,
            })
    }

    proptest! {
        #[test]
        fn plain_round_trip(s in plain_string()) {
            prop_assert_eq!(num(&s).to_plain_string(), s);
        }

        #[test]
        fn trailing_zero_is_value_neutral(s in plain_string()) {
            let s = if s.contains('.') { s } else { format!("{s}.5") };
            let padded = s.clone() + "0";
            prop_assert!(num(&s).equals_value(&num(&padded)));
        }

        #[test]
        fn scaling_inverts(s in plain_string(), k in -30i32..=30) {
            let x = num(&s);
            prop_assert_eq!(x.scale_by_power_of_ten(k).scale_by_power_of_ten(-k), x);
        }

        #[test]
        fn forty_digit_values_stay_exact(int in "[1-9][0-9]{39}", k in 0i32..=30) {
            let x = num(&int);
            prop_assert_eq!(x.to_plain_string(), int.clone());
            let shifted = x.scale_by_power_of_ten(-k);
            let written = shifted.written_digits();
            // normalization drops fractional trailing zeros
            prop_assert_eq!(written.trim_start_matches('0').trim_end_matches('0'), int.trim_end_matches('0'));
        }
    }
}
