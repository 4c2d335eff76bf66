//! Polynomials over GF(2) packed into machine words, bit `i` = coefficient of x^i.

/// Irreducible moduli shipped for GF(2^k), k = 1..=8.
pub const DEFAULT_MODULI: [u32; 8] = [
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10000011,
    0b100011011,
];

pub const MAX_DEGREE: u32 = 16;

pub fn degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product.
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

pub fn rem(mut a: u64, m: u64) -> u64 {
    let dm = degree(m).expect("zero modulus");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    rem(clmul(a, b), m)
}

/// Exhaustive factor search: no polynomial of degree 1..=k/2 divides `m`.
pub fn is_irreducible(m: u64) -> bool {
    let Some(k) = degree(m) else { return false };
    if k == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        for g in (1u64 << d)..(1u64 << (d + 1)) {
            if rem(m, g) == 0 {
                return false;
            }
        }
    }
    true
}
