use num_integer::Roots;

/// Cantor pairing `⟨i, j⟩ = (i+j)(i+j+1)/2 + j`.
pub fn pair(i: u64, j: u64) -> u64 {
    let s = i + j;
    s * (s + 1) / 2 + j
}

/// Inverse of [`pair`].
pub fn unpair(n: u64) -> (u64, u64) {
    // largest s with s(s+1)/2 <= n
    let mut s = ((8 * n as u128 + 1).sqrt() as u64 - 1) / 2;
    while s * (s + 1) / 2 > n {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    let j = n - s * (s + 1) / 2;
    (s - j, j)
}

/// Elias gamma code of `n >= 1`: `⌊log n⌋` zeros followed by the binary
/// digits of `n`.
pub fn gamma_encode(n: u64) -> super::BitString {
    assert!(n >= 1, "gamma code is defined for n >= 1");
    let width = 64 - n.leading_zeros() as usize;
    let mut out = super::BitString::zeros(width - 1);
    out.extend_from(&super::BitString::from_u64(n, width));
    out
}

pub fn gamma_len(n: u64) -> u64 {
    assert!(n >= 1, "gamma code is defined for n >= 1");
    2 * u64::from(63 - n.leading_zeros()) + 1
}

/// Decodes a gamma code at the start of `bits`; returns the value and the
/// number of bits consumed.
pub fn gamma_decode(bits: &[bool]) -> Option<(u64, usize)> {
    let zeros = bits.iter().take_while(|b| !**b).count();
    if zeros >= 64 || bits.len() < 2 * zeros + 1 {
        return None;
    }
    let value = bits[zeros..=2 * zeros]
        .iter()
        .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    Some((value, 2 * zeros + 1))
}

/// `⌊log₂ n⌋` for `n >= 1`.
pub fn floor_log2(n: u64) -> u64 {
    assert!(n >= 1);
    u64::from(63 - n.leading_zeros())
}

/// `⌈log₂ n⌉` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u64 {
    assert!(n >= 1);
    if n.is_power_of_two() {
        floor_log2(n)
    } else {
        floor_log2(n) + 1
    }
}

/// `⌈log₂ log₂ n⌉` for `n >= 2`, computed exactly as the least `k` with
/// `2^(2^k) >= n`.
pub fn ceil_log2_log2(n: u64) -> u64 {
    assert!(n >= 2);
    let mut k = 0u64;
    while k < 6 && (1u128 << (1u32 << k)) < u128::from(n) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::BitString;

    #[test]
    fn pair_examples() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 2), 8);
    }

    #[test]
    fn pair_bijective_scan() {
        // brute force: every n in [0, 10^4] is hit exactly once by small pairs
        let mut hits = vec![0u32; 10_001];
        for i in 0..=200u64 {
            for j in 0..=200u64 {
                let n = pair(i, j);
                if n <= 10_000 {
                    hits[n as usize] += 1;
                }
            }
        }
        assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn unpair_round_trip_small() {
        for i in 0..100 {
            for j in 0..100 {
                assert_eq!(unpair(pair(i, j)), (i, j));
            }
        }
    }

    #[test]
    fn gamma_format() {
        assert_eq!(gamma_encode(1).to_text(), "1");
        assert_eq!(gamma_encode(2).to_text(), "010");
        assert_eq!(gamma_encode(5).to_text(), "00101");
        for n in 1..2000u64 {
            let code = gamma_encode(n);
            assert_eq!(code.len() as u64, gamma_len(n));
            assert_eq!(gamma_decode(code.bits()), Some((n, code.len())));
        }
        assert_eq!(gamma_decode(BitString::zeros(3).bits()), None);
    }

    #[test]
    fn logs() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2_log2(2), 0);
        assert_eq!(ceil_log2_log2(4), 1);
        assert_eq!(ceil_log2_log2(5), 2);
        assert_eq!(ceil_log2_log2(16), 2);
        assert_eq!(ceil_log2_log2(17), 3);
    }
}
