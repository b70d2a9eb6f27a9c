//! Binary Golay codes.
//!
//! The length-23 code is the cyclic quadratic-residue code with generator
//! polynomial g(x) = x^11 + x^9 + x^7 + x^6 + x^5 + x + 1 (a divisor of
//! x^23 + 1 over GF(2), exponents from the quadratic residues mod 23).
//! The extended code appends an overall parity bit in position 23.
//!
//! Weight distribution of the extended code:
//!
//! | weight | count | name                  |
//! |--------|-------|-----------------------|
//! | 0      | 1     | zero word             |
//! | 8      | 759   | octads                |
//! | 12     | 2576  | dodecads              |
//! | 16     | 759   | complements of octads |
//! | 24     | 1     | all-ones word         |

use crate::error::{Error, Result};

/// g(x) for the (23,12,7) code; bit i is the coefficient of x^i.
const GENERATOR_23: u32 = 0b1010_1110_0011;

/// A binary linear code stored as packed codeword bitmasks (bit i =
/// coordinate i).
#[derive(Debug, Clone)]
pub struct BinaryCode {
    pub length: usize,
    pub codewords: Vec<u32>,
}

impl BinaryCode {
    pub fn weight_count(&self, weight: u32) -> usize {
        self.codewords
            .iter()
            .filter(|w| w.count_ones() == weight)
            .count()
    }

    /// Codewords of the given weight, in enumeration order.
    pub fn words_of_weight(&self, weight: u32) -> Vec<u32> {
        self.codewords
            .iter()
            .copied()
            .filter(|w| w.count_ones() == weight)
            .collect()
    }

    /// Drop the given coordinate from every codeword.
    pub fn puncture(&self, position: usize) -> BinaryCode {
        let low_mask = (1u32 << position) - 1;
        let codewords = self
            .codewords
            .iter()
            .map(|&w| (w & low_mask) | ((w >> (position + 1)) << position))
            .collect();
        BinaryCode {
            length: self.length - 1,
            codewords,
        }
    }
}

/// The extended \[24,12,8\] Golay code: 4096 codewords from the cyclic
/// generator, each completed by a parity bit at position 23. The weight
/// distribution is verified at construction.
pub fn golay_extended() -> Result<BinaryCode> {
    let mut codewords = Vec::with_capacity(4096);
    for msg in 0u32..4096 {
        // Multiply the 12-bit message polynomial by g(x) over GF(2).
        let mut w = 0u32;
        for bit in 0..12 {
            if msg >> bit & 1 == 1 {
                w ^= GENERATOR_23 << bit;
            }
        }
        if w.count_ones() % 2 == 1 {
            w |= 1 << 23;
        }
        codewords.push(w);
    }
    let code = BinaryCode {
        length: 24,
        codewords,
    };
    let expected = [(0u32, 1usize), (8, 759), (12, 2576), (16, 759), (24, 1)];
    for &(wt, count) in &expected {
        let got = code.weight_count(wt);
        if got != count {
            return Err(Error::CodeSelfCheck {
                code: "golay_extended".into(),
                check: format!("{got} words of weight {wt}, expected {count}"),
            });
        }
    }
    Ok(code)
}

/// The (23,12,7) code obtained by puncturing the parity coordinate.
pub fn golay_23() -> Result<BinaryCode> {
    Ok(golay_extended()?.puncture(23))
}
