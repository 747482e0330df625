//! Fixtures shared by the benchmarks.

use pellcf_core::{expand, Poly};

pub const ELLIPTIC: &str = "t^4 + t^2 + t";
pub const GENUS_TWO: &str = "t^6 + t + 1";
pub const OCTIC: &str = "t^8 - t^7 - 3/4 t^6 + 7/2 t^5 - 21/4 t^4 + 7/2 t^3 - 3/4 t^2 - t + 1";

pub fn poly(text: &str) -> Poly {
    Poly::parse(text).expect("fixture parses")
}

/// Deterministic integer polynomial of the given length with coefficients
/// of roughly `bits` bits.
pub fn dense_poly(len: usize, bits: u32) -> Poly {
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    let coeffs: Vec<i64> = (0..len)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let v = (x >> (64 - bits.min(62))) as i64;
            if x & 1 == 0 { v } else { -v }
        })
        .collect();
    Poly::from_ints(&coeffs)
}

/// The norm `R_n` of the expansion of `sqrt(D)`.
pub fn norm_at(radicand: &str, n: usize) -> Poly {
    expand(&poly(radicand), n).expect("expands").norm(n).expect("record exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        assert_eq!(dense_poly(10, 20).degree(), Some(9));
        assert_eq!(norm_at(GENUS_TWO, 12).degree(), Some(2));
        assert_eq!(poly(OCTIC).degree(), Some(8));
    }
}
