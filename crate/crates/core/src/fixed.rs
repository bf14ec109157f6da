//! Exact fixed-point decimals.
//!
//! Loads and lengths are stored as integers scaled by [`SCALE`] (six
//! fractional digits). Products of a load and a length therefore carry a
//! scale of `SCALE * SCALE`; [`LoadMeters`] wraps such a product so that the
//! whole pipeline stays in exact integer arithmetic.

use std::fmt;

/// Number of integer units per whole unit (six fractional digits).
pub const SCALE: i64 = 1_000_000;

/// Maximum number of fractional digits accepted by [`parse_decimal`].
pub const MAX_FRACTION_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecimalError {
    Empty,
    Negative,
    Invalid,
    TooManyFractionDigits,
    Overflow,
}

/// Parses a nonnegative decimal such as `20`, `0.5` or `12.000125` into
/// units of `1 / SCALE`.
pub fn parse_decimal(text: &str) -> Result<i64, DecimalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(DecimalError::Empty);
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    if let Some(rest) = s.strip_prefix('-') {
        // "-0" is still a zero; anything else with a sign is a negative value.
        return match parse_decimal(rest) {
            Ok(0) => Ok(0),
            Ok(_) => Err(DecimalError::Negative),
            Err(e) => Err(e),
        };
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(DecimalError::Invalid);
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DecimalError::Invalid);
    }
    if frac_part.len() > MAX_FRACTION_DIGITS {
        return Err(DecimalError::TooManyFractionDigits);
    }
    let whole: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| DecimalError::Overflow)?
    };
    let mut frac: i64 = 0;
    for (k, b) in frac_part.bytes().enumerate() {
        frac += i64::from(b - b'0') * 10_i64.pow((MAX_FRACTION_DIGITS - 1 - k) as u32);
    }
    whole
        .checked_mul(SCALE)
        .and_then(|w| w.checked_add(frac))
        .ok_or(DecimalError::Overflow)
}

/// Formats `value / scale` exactly, trimming trailing fractional zeros.
/// `scale` must be a power of ten.
pub fn format_scaled(value: i128, scale: i128) -> String {
    let sign = if value < 0 { "-" } else { "" };
    let abs = value.unsigned_abs();
    let scale_u = scale as u128;
    let whole = abs / scale_u;
    let frac = abs % scale_u;
    if frac == 0 {
        return format!("{sign}{whole}");
    }
    let width = scale_u.ilog10() as usize;
    let digits = format!("{frac:0width$}");
    format!("{sign}{whole}.{}", digits.trim_end_matches('0'))
}

/// A load-distance quantity (unit-loads times meters), exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LoadMeters(pub i128);

impl LoadMeters {
    pub const ZERO: LoadMeters = LoadMeters(0);
    /// Raw units per whole load-meter.
    pub const SCALE: i128 = (SCALE as i128) * (SCALE as i128);

    pub fn from_whole(v: i64) -> Self {
        LoadMeters(i128::from(v) * Self::SCALE)
    }

    /// Product of a scaled load and a scaled length.
    pub fn product(load: i64, length: i64) -> Self {
        LoadMeters(i128::from(load) * i128::from(length))
    }

    pub fn raw(self) -> i128 {
        self.0
    }

    /// The whole number of load-meters, if the value has no fractional part.
    pub fn as_whole(self) -> Option<i128> {
        (self.0 % Self::SCALE == 0).then_some(self.0 / Self::SCALE)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }
}

impl std::ops::Add for LoadMeters {
    type Output = LoadMeters;
    fn add(self, rhs: Self) -> Self {
        LoadMeters(self.0 + rhs.0)
    }
}

impl std::ops::Sub for LoadMeters {
    type Output = LoadMeters;
    fn sub(self, rhs: Self) -> Self {
        LoadMeters(self.0 - rhs.0)
    }
}

impl std::iter::Sum for LoadMeters {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        LoadMeters(iter.map(|v| v.0).sum())
    }
}

impl fmt::Display for LoadMeters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scaled(self.0, Self::SCALE))
    }
}

/// Formats a value carrying a single [`SCALE`] (a load or a length).
pub fn format_decimal(value: i64) -> String {
    format_scaled(i128::from(value), i128::from(SCALE))
}
