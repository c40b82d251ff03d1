//! Closed forms for the height counting functions, as exact rationals.
//!
//! Every function takes the field size q and returns the value the counting
//! theorems predict; comparisons against measured counts happen elsewhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::DegreePattern;

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// q^e for any integer e.
pub fn qpow(q: u32, e: i64) -> BigRational {
    let base = BigInt::from(q);
    if e >= 0 {
        BigRational::from_integer(num_traits::pow(base, e as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-e) as usize))
    }
}

fn qr(q: u32) -> BigRational {
    int(q as i64)
}

/// q^n − 1.
fn qm1(q: u32, n: i64) -> BigRational {
    qpow(q, n) - BigRational::one()
}

/// 1 + q + q².
fn tri(q: u32) -> BigRational {
    let q = qr(q);
    BigRational::one() + &q + &q * &q
}

/// Number of lines of height k in F^n.
pub fn lines(q: u32, n: u32, k: u32) -> BigRational {
    let (n, k) = (n as i64, k as i64);
    if k == 0 {
        qm1(q, n) / (qr(q) - BigRational::one())
    } else {
        qpow(q, n * k - n + 1) * qm1(q, n) * qm1(q, n - 1) / (qr(q) - BigRational::one())
    }
}

/// Number of planes of height l + k containing a fixed line of height l (k ≥ 1).
pub fn planes_over_line(q: u32, l: u32, k: u32) -> BigRational {
    qpow(q, 2 * k as i64 + l as i64 - 1) * qm1(q, 2)
}

/// Share of a degree pattern among all triples, relative to 1 + q + q².
fn pattern_weight(q: u32, r: DegreePattern) -> BigRational {
    let qm = qr(q) - BigRational::one();
    match r.len() {
        1 => BigRational::one(),
        2 => qm,
        _ => &qm * &qm,
    }
}

/// |S(m)|.
pub fn s_total(q: u32, m: u32) -> BigRational {
    if m == 0 {
        qm1(q, 3)
    } else {
        qpow(q, 3 * m as i64 - 2) * qm1(q, 3) * qm1(q, 2)
    }
}

/// |S_R(m)|.
pub fn s_pattern(q: u32, m: u32, r: DegreePattern) -> BigRational {
    pattern_weight(q, r) * s_total(q, m) / tri(q)
}

/// |S(m, l)| for m > 2l, or m = 2l > 0.
pub fn s_ml(q: u32, m: u32, l: u32) -> BigRational {
    let (mi, li) = (m as i64, l as i64);
    if m > 2 * l {
        if l > 0 {
            qpow(q, 2 * (mi + li) - 3) * qm1(q, 3) * qm1(q, 2) * qm1(q, 2)
        } else {
            qpow(q, 2 * mi - 1) * qm1(q, 3) * qm1(q, 2)
        }
    } else {
        debug_assert!(m == 2 * l && l > 0);
        s_total(q, m) * (qr(q) - BigRational::one()) / qr(q)
    }
}

/// |S_R(m, l)| for m > 2l, or m = 2l > 0.
pub fn s_ml_pattern(q: u32, m: u32, l: u32, r: DegreePattern) -> BigRational {
    if m > 2 * l {
        pattern_weight(q, r) * s_ml(q, m, l) / tri(q)
    } else {
        s_pattern(q, m, r) * (qr(q) - BigRational::one()) / qr(q)
    }
}

/// |T(m, l)| for m > 2l.
pub fn t_total(q: u32, m: u32, l: u32) -> BigRational {
    qr(q) * qr(q) * s_ml(q, m, l) / tri(q)
}

/// |T_R(m, l)| for m > 2l.
pub fn t_pattern(q: u32, m: u32, l: u32, r: DegreePattern) -> BigRational {
    let frac = qr(q) / (qr(q) + BigRational::one());
    let s = |idx: &[usize]| s_ml_pattern(q, m, l, DegreePattern::from_indices(idx).expect("valid pattern"));
    match r.0 {
        0b010 => BigRational::zero(),
        0b001 | 0b100 => &frac * s(&[1]),
        0b011 | 0b110 => &frac * s(&[1, 2]),
        0b111 => &frac * s(&[1, 2, 3]),
        // T_{1,3} = (q − 1)·T_1
        0b101 => (qr(q) - BigRational::one()) * &frac * s(&[1]),
        _ => unreachable!("nonempty pattern"),
    }
}

/// |T′(m, l)| for m > 2l.
pub fn tp_total(q: u32, m: u32, l: u32) -> BigRational {
    s_ml(q, m, l) / tri(q)
}

/// |T′_R(m, l)| for m > 2l.
pub fn tp_pattern(q: u32, m: u32, l: u32, r: DegreePattern) -> BigRational {
    let denom = qr(q) + BigRational::one();
    if r.contains(3) {
        return BigRational::zero();
    }
    match r.0 {
        0b001 | 0b010 => s_ml_pattern(q, m, l, DegreePattern(0b001)) / denom,
        0b011 => s_ml_pattern(q, m, l, DegreePattern(0b011)) / denom,
        _ => unreachable!("patterns containing 3 handled above"),
    }
}

/// N_v(m, l) for v ∈ {1, 2, 3}: m > 2l, or m = 2l > 0.
pub fn n_count(q: u32, variant: u8, m: u32, l: u32) -> BigRational {
    let (mi, li) = (m as i64, l as i64);
    let a = qm1(q, 2);
    if m > 2 * l {
        // exponents for l > 0 and l = 0
        let (e_pos, e_zero) = match variant {
            1 => (2 * (mi + li) - 1, 2 * mi + 1),
            2 => (2 * (mi + li) - 3, 2 * mi - 1),
            _ => (2 * (mi + li) - 2, 2 * mi),
        };
        if l > 0 {
            &a * &a * qpow(q, e_pos)
        } else {
            a * qpow(q, e_zero)
        }
    } else {
        debug_assert!(m == 2 * l && l > 0);
        let e = match variant {
            1 => 3 * mi - 1,
            2 => 3 * mi - 3,
            _ => 3 * mi - 2,
        };
        (qr(q) - BigRational::one()) * a * qpow(q, e)
    }
}

/// N′_v(m, l) = N_v(m, l)/(q + 1) for m > 2l.
pub fn n_primed(q: u32, variant: u8, m: u32, l: u32) -> BigRational {
    n_count(q, variant, m, l) / (qr(q) + BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiated_values() {
        assert_eq!(lines(2, 3, 0), int(7));
        assert_eq!(lines(2, 3, 1), int(42));
        assert_eq!(lines(3, 3, 1), int(312));
        assert_eq!(lines(5, 3, 1), int(3720));
        assert_eq!(planes_over_line(2, 0, 1), int(6));
        assert_eq!(planes_over_line(2, 1, 1), int(12));
        assert_eq!(s_total(2, 1), int(42));
        assert_eq!(s_total(2, 0), int(7));
        assert_eq!(s_ml(2, 3, 1), int(2016));
        assert_eq!(n_count(3, 1, 1, 0), int(216));
        assert_eq!(n_count(3, 2, 1, 0), int(24));
        assert_eq!(n_count(2, 3, 2, 1), int(48));
    }

    #[test]
    fn pattern_shares_add_up() {
        for q in [2, 3, 4, 5] {
            for m in 0..5 {
                let total: BigRational = DegreePattern::ALL.iter().map(|&r| s_pattern(q, m, r)).sum();
                assert_eq!(total, s_total(q, m));
            }
            let t: BigRational = DegreePattern::ALL.iter().map(|&r| t_pattern(q, 3, 1, r)).sum();
            assert_eq!(t, t_total(q, 3, 1));
            let tp: BigRational = DegreePattern::ALL.iter().map(|&r| tp_pattern(q, 3, 1, r)).sum();
            assert_eq!(tp, tp_total(q, 3, 1));
        }
    }

    #[test]
    fn s_ml_sums_to_s_at_even_m() {
        // S(m) = Σ_{k ≤ m/2} S(m, k)
        for q in [2, 3] {
            for m in [2u32, 4] {
                let sum: BigRational = (0..=m / 2).map(|k| s_ml(q, m, k)).sum();
                assert_eq!(sum, s_total(q, m));
            }
        }
    }
}
