// SPDX-License-Identifier: Apache-2.0

//! 256-bit EVM words.
//!
//! Storage slots, hash outputs, and compile-time constant values are all
//! 32-byte big-endian words. This module provides the small amount of
//! arithmetic the analyzer needs (parsing literals, wrapping add/sub for
//! slot derivations like `keccak256(..) - 1`) without pulling in a bignum
//! dependency.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A 256-bit word, big-endian (`0[0]` is the most significant byte).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bytes32(pub [u8; 32]);

impl Bytes32 {
    pub const ZERO: Bytes32 = Bytes32([0u8; 32]);

    pub fn from_u64(v: u64) -> Self {
        let mut out = [0u8; 32];
        out[24..].copy_from_slice(&v.to_be_bytes());
        Bytes32(out)
    }

    /// Parse a hexadecimal literal, with or without `0x` prefix and with
    /// optional `_` digit separators. Values longer than 64 nibbles are
    /// rejected; shorter ones are left-padded with zeros (numeric reading).
    pub fn from_hex_str(text: &str) -> Option<Self> {
        let raw = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
        let digits: String = raw.chars().filter(|c| *c != '_').collect();
        if digits.is_empty() || digits.len() > 64 || !digits.chars().all(|c| c.is_ascii_hexdigit())
        {
            return None;
        }
        let padded = format!("{digits:0>64}");
        let mut out = [0u8; 32];
        hex::decode_to_slice(&padded, &mut out).ok()?;
        Some(Bytes32(out))
    }

    /// Parse a decimal literal with optional `_` separators. Returns `None`
    /// on overflow past 2^256 or on non-digit input.
    pub fn from_dec_str(text: &str) -> Option<Self> {
        let digits: Vec<u8> = text
            .chars()
            .filter(|c| *c != '_')
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()?;
        if digits.is_empty() {
            return None;
        }
        let mut acc = Bytes32::ZERO;
        for d in digits {
            acc = acc.checked_mul_small(10)?.checked_add_small(d as u64)?;
        }
        Some(acc)
    }

    /// Parse either form of numeric literal as it appears in source text.
    pub fn from_literal_text(text: &str) -> Option<Self> {
        let t = text.trim();
        if t.starts_with("0x") || t.starts_with("0X") {
            Bytes32::from_hex_str(t)
        } else {
            Bytes32::from_dec_str(t)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| *b == 0)
    }

    /// The value as `u64` if it fits, else `None`.
    pub fn as_u64(&self) -> Option<u64> {
        if self.0[..24].iter().any(|b| *b != 0) {
            return None;
        }
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&self.0[24..]);
        Some(u64::from_be_bytes(bytes))
    }

    /// Wrapping addition of a small constant (mod 2^256).
    pub fn wrapping_add_small(&self, rhs: u64) -> Self {
        let mut out = self.0;
        let mut carry = rhs as u128;
        for i in (0..32).rev() {
            if carry == 0 {
                break;
            }
            let sum = out[i] as u128 + (carry & 0xff);
            out[i] = (sum & 0xff) as u8;
            carry = (carry >> 8) + (sum >> 8);
        }
        Bytes32(out)
    }

    /// Wrapping subtraction of a small constant (mod 2^256).
    pub fn wrapping_sub_small(&self, rhs: u64) -> Self {
        let mut out = self.0;
        let mut borrow = rhs as u128;
        for i in (0..32).rev() {
            if borrow == 0 {
                break;
            }
            let sub = borrow & 0xff;
            let cur = out[i] as u128;
            if cur >= sub {
                out[i] = (cur - sub) as u8;
                borrow >>= 8;
            } else {
                out[i] = (cur + 0x100 - sub) as u8;
                borrow = (borrow >> 8) + 1;
            }
        }
        Bytes32(out)
    }

    /// Wrapping full-width addition (mod 2^256).
    pub fn wrapping_add(&self, rhs: &Bytes32) -> Self {
        let mut out = [0u8; 32];
        let mut carry = 0u16;
        for i in (0..32).rev() {
            let sum = self.0[i] as u16 + rhs.0[i] as u16 + carry;
            out[i] = (sum & 0xff) as u8;
            carry = sum >> 8;
        }
        Bytes32(out)
    }

    /// Wrapping full-width subtraction (mod 2^256).
    pub fn wrapping_sub(&self, rhs: &Bytes32) -> Self {
        let mut out = [0u8; 32];
        let mut borrow = 0i16;
        for i in (0..32).rev() {
            let diff = self.0[i] as i16 - rhs.0[i] as i16 - borrow;
            if diff < 0 {
                out[i] = (diff + 0x100) as u8;
                borrow = 1;
            } else {
                out[i] = diff as u8;
                borrow = 0;
            }
        }
        Bytes32(out)
    }

    pub(crate) fn checked_mul_small(&self, rhs: u64) -> Option<Self> {
        let mut out = [0u8; 32];
        let mut carry = 0u128;
        for i in (0..32).rev() {
            let prod = self.0[i] as u128 * rhs as u128 + carry;
            out[i] = (prod & 0xff) as u8;
            carry = prod >> 8;
        }
        if carry != 0 {
            return None;
        }
        Some(Bytes32(out))
    }

    pub(crate) fn checked_add_small(&self, rhs: u64) -> Option<Self> {
        let r = self.wrapping_add_small(rhs);
        if r < *self {
            return None;
        }
        Some(r)
    }

    /// Keep only the low `bits` bits, zeroing everything above (used for
    /// narrowing casts like `address(...)` or `uint128(...)`).
    pub fn mask_low_bits(&self, bits: u16) -> Self {
        if bits >= 256 {
            return *self;
        }
        let mut out = self.0;
        let keep_bytes = (bits as usize) / 8;
        let rem_bits = (bits as usize) % 8;
        let boundary = 32 - keep_bytes;
        for b in out.iter_mut().take(boundary) {
            *b = 0;
        }
        if rem_bits > 0 && boundary > 0 {
            out[boundary - 1] = self.0[boundary - 1] & ((1u16 << rem_bits) - 1) as u8;
        }
        Bytes32(out)
    }

    /// Lowercase `0x`-prefixed 64-nibble rendering.
    pub fn to_hex(&self) -> String {
        format!("0x{}", hex::encode(self.0))
    }
}

impl fmt::Display for Bytes32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Bytes32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Bytes32 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Bytes32 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Bytes32::from_hex_str(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid 32-byte hex value: {text}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_parse_pads_left() {
        let v = Bytes32::from_hex_str("0xff").unwrap();
        assert_eq!(v.as_u64(), Some(255));
        assert_eq!(
            v.to_hex(),
            "0x00000000000000000000000000000000000000000000000000000000000000ff"
        );
    }

    #[test]
    fn hex_parse_rejects_oversized_and_junk() {
        assert!(Bytes32::from_hex_str(&"f".repeat(65)).is_none());
        assert!(Bytes32::from_hex_str("0xzz").is_none());
        assert!(Bytes32::from_hex_str("").is_none());
    }

    #[test]
    fn dec_parse_small_and_large() {
        assert_eq!(Bytes32::from_dec_str("0").unwrap(), Bytes32::ZERO);
        assert_eq!(Bytes32::from_dec_str("1_000_000").unwrap().as_u64(), Some(1_000_000));
        // 2^256 - 1 parses; 2^256 overflows.
        let max = "115792089237316195423570985008687907853269984665640564039457584007913129639935";
        assert_eq!(Bytes32::from_dec_str(max).unwrap().0, [0xff; 32]);
        let over = "115792089237316195423570985008687907853269984665640564039457584007913129639936";
        assert!(Bytes32::from_dec_str(over).is_none());
    }

    #[test]
    fn sub_small_borrows_across_bytes() {
        let v = Bytes32::from_hex_str("0x0100").unwrap();
        assert_eq!(v.wrapping_sub_small(1).as_u64(), Some(0xff));
        // 0 - 1 wraps to all-ones.
        assert_eq!(Bytes32::ZERO.wrapping_sub_small(1).0, [0xff; 32]);
    }

    #[test]
    fn add_small_carries_across_bytes() {
        let v = Bytes32::from_hex_str("0xffffffffffffffff").unwrap();
        let r = v.wrapping_add_small(1);
        assert_eq!(r.to_hex(), format!("0x{}{}", "0".repeat(47), "10000000000000000"));
    }

    #[test]
    fn full_width_add_sub_roundtrip() {
        let a = Bytes32::from_hex_str("0xdeadbeefdeadbeefdeadbeef").unwrap();
        let b = Bytes32::from_hex_str("0x0102030405060708").unwrap();
        assert_eq!(a.wrapping_add(&b).wrapping_sub(&b), a);
    }

    #[test]
    fn mask_low_bits_truncates() {
        let v = Bytes32::from_hex_str("0x1234567890abcdef1234").unwrap();
        let m = v.mask_low_bits(32);
        assert_eq!(m.as_u64(), Some(0xcdef1234));
        assert_eq!(v.mask_low_bits(256), v);
    }

    #[test]
    fn literal_text_dispatches_on_prefix() {
        assert_eq!(Bytes32::from_literal_text("0x10").unwrap().as_u64(), Some(16));
        assert_eq!(Bytes32::from_literal_text("10").unwrap().as_u64(), Some(10));
    }
}
