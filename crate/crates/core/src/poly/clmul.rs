//! Word-level carry-less products, truncated to the output length.
//!
//! Bit-exact with the shift-XOR definition; the hardware path is used when
//! the CPU reports PCLMULQDQ.

/// `out ^= a · b` truncated to `out.len()` words. `la`/`lb` are the indices
/// of the lowest nonzero words of `a` and `b`.
pub(super) fn mul_words(out: &mut [u64], a: &[u64], la: usize, b: &[u64], lb: usize) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            unsafe { mul_words_pclmul(out, a, la, b, lb) };
            return;
        }
    }
    mul_words_soft(out, a, la, b, lb);
}

fn mul_words_soft(out: &mut [u64], a: &[u64], la: usize, b: &[u64], lb: usize) {
    let n = out.len();
    for i in la..n {
        let ai = a[i];
        if ai == 0 {
            continue;
        }
        for j in lb..(n - i) {
            let bj = b[j];
            if bj == 0 {
                continue;
            }
            let (lo, hi) = clmul_soft(ai, bj);
            out[i + j] ^= lo;
            if i + j + 1 < n {
                out[i + j + 1] ^= hi;
            }
        }
    }
}

/// 64×64 → 128 carry-less product using a 4-bit window table.
pub(super) fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let mut table = [0u128; 16];
    for j in 1..16usize {
        table[j] = (table[j >> 1] << 1) ^ if j & 1 == 1 { a as u128 } else { 0 };
    }
    let mut r = 0u128;
    for k in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * k)) & 0xf) as usize];
    }
    (r as u64, (r >> 64) as u64)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn mul_words_pclmul(out: &mut [u64], a: &[u64], la: usize, b: &[u64], lb: usize) {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_set_epi64x, _mm_unpackhi_epi64};

    let n = out.len();
    for i in la..n {
        let ai = a[i];
        if ai == 0 {
            continue;
        }
        let va = _mm_set_epi64x(0, ai as i64);
        for j in lb..(n - i) {
            let bj = b[j];
            if bj == 0 {
                continue;
            }
            let prod = _mm_clmulepi64_si128(va, _mm_set_epi64x(0, bj as i64), 0x00);
            let lo = _mm_cvtsi128_si64(prod) as u64;
            let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(prod, prod)) as u64;
            out[i + j] ^= lo;
            if i + j + 1 < n {
                out[i + j + 1] ^= hi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clmul_bitwise(a: u64, b: u64) -> u128 {
        let mut r = 0u128;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                r ^= (a as u128) << i;
            }
        }
        r
    }

    #[test]
    fn soft_clmul_matches_bitwise_definition() {
        let samples = [0u64, 1, 2, 3, u64::MAX, 0x8000_0000_0000_0001, 0xdead_beef_cafe_f00d, 0x0123_4567_89ab_cdef];
        for &a in &samples {
            for &b in &samples {
                let (lo, hi) = clmul_soft(a, b);
                assert_eq!(((hi as u128) << 64) | lo as u128, clmul_bitwise(a, b));
            }
        }
    }

    #[test]
    fn hardware_and_soft_paths_agree() {
        let a = [0xdead_beef_cafe_f00du64, 0, 0x1234, u64::MAX];
        let b = [0x0fu64, 0xffff_0000_ffff_0000, 7, 1 << 63];
        let mut hw = [0u64; 4];
        let mut sw = [0u64; 4];
        mul_words(&mut hw, &a, 0, &b, 0);
        mul_words_soft(&mut sw, &a, 0, &b, 0);
        assert_eq!(hw, sw);
    }
}
