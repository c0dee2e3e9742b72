// SPDX-License-Identifier: Apache-2.0

//! Keccak-256 as used by the EVM.
//!
//! This is the original Keccak submission (pad10*1 with domain byte `0x01`),
//! *not* FIPS-202 SHA3-256 (domain byte `0x06`). Function selectors and the
//! well-known proxy storage slots are all derived from this hash, so the
//! implementation is kept self-contained here and cross-checked in the test
//! suite against an independent implementation and published vectors.

use crate::value::Bytes32;

const ROUNDS: usize = 24;
/// Rate in bytes for a 512-bit capacity (Keccak-256): (1600 - 2*256) / 8.
const RATE: usize = 136;

const ROUND_CONSTANTS: [u64; ROUNDS] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];

/// Rotation offsets in the order visited by the rho-pi walk below.
const RHO: [u32; 24] = [
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
];

/// Lane permutation (pi step) in the same walk order.
const PI: [usize; 24] = [
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
];

fn keccak_f1600(state: &mut [u64; 25]) {
    for &rc in ROUND_CONSTANTS.iter() {
        // Theta.
        let mut parity = [0u64; 5];
        for x in 0..5 {
            parity[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        }
        for x in 0..5 {
            let d = parity[(x + 4) % 5] ^ parity[(x + 1) % 5].rotate_left(1);
            for y in 0..5 {
                state[x + 5 * y] ^= d;
            }
        }
        // Rho and pi, walked as a single cycle starting from lane (1, 0).
        let mut carried = state[1];
        for i in 0..24 {
            let target = PI[i];
            let next = state[target];
            state[target] = carried.rotate_left(RHO[i]);
            carried = next;
        }
        // Chi.
        for y in 0..5 {
            let row = [
                state[5 * y],
                state[5 * y + 1],
                state[5 * y + 2],
                state[5 * y + 3],
                state[5 * y + 4],
            ];
            for x in 0..5 {
                state[5 * y + x] = row[x] ^ (!row[(x + 1) % 5] & row[(x + 2) % 5]);
            }
        }
        // Iota.
        state[0] ^= rc;
    }
}

/// Keccak-256 digest of `data`.
pub fn keccak256(data: &[u8]) -> Bytes32 {
    let mut state = [0u64; 25];

    let mut chunks = data.chunks_exact(RATE);
    for block in chunks.by_ref() {
        absorb(&mut state, block);
        keccak_f1600(&mut state);
    }

    // Final block with multi-rate padding: 0x01 after the message, 0x80 on
    // the last byte of the rate (they coincide when the remainder is 135).
    let remainder = chunks.remainder();
    let mut last = [0u8; RATE];
    last[..remainder.len()].copy_from_slice(remainder);
    last[remainder.len()] ^= 0x01;
    last[RATE - 1] ^= 0x80;
    absorb(&mut state, &last);
    keccak_f1600(&mut state);

    let mut out = [0u8; 32];
    for (i, chunk) in out.chunks_exact_mut(8).enumerate() {
        chunk.copy_from_slice(&state[i].to_le_bytes());
    }
    Bytes32(out)
}

fn absorb(state: &mut [u64; 25], block: &[u8]) {
    debug_assert_eq!(block.len(), RATE);
    for (i, lane) in block.chunks_exact(8).enumerate() {
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(lane);
        state[i] ^= u64::from_le_bytes(bytes);
    }
}
