//! Exact sizes of the parameterizing sets, measured by grouped enumeration
//! over the cube parts f = c0³ + c1³X + c2³X².
//!
//! Cubefree: gcd(c0, c1, c2) = 1. For each outer pair the number of coprime
//! inner parts depends only on the gcd of the pair, which is memoised.
//!
//! Squarefree: f′ = c1³ − Xc2³ and f ≡ c0³ − X²c2³ mod f′, so f is squarefree
//! iff f′ ≠ 0 and, for every prime π | f′, c0 avoids the single residue
//! ρ_π = (X²c2³)^{1/3} mod π. For each (c1, c2) we factor f′ and count the c0
//! that avoid every ρ_π.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use super::CensusKey;
use crate::error::{Error, Result};
use crate::exec::{pow_sat, Budget, Executor, DEFAULT_CHUNKS};
use crate::gf::{FieldElement, FieldSpec};
use crate::heights::formulas::qpow;
use crate::poly::{chunk_bounds, raw, Odometer, Poly};
use crate::rational::{big_to_rational, rational_string};

/// |𝒫_ε(g)| or |𝒫′_ε(g)| by the closed forms.
pub fn expected_cardinality(q: u32, g: usize, epsilon: u8, squarefree: bool) -> BigRational {
    let d = 2 * g as i64 + epsilon as i64;
    let one = BigRational::one();
    match (squarefree, g) {
        (false, 0) => qpow(q, epsilon as i64) * (&one - qpow(q, -1)),
        (false, _) => qpow(q, d) * (&one - qpow(q, -2)),
        (true, 0) if epsilon == 1 => qpow(q, 1),
        (true, _) => qpow(q, d) * (&one - qpow(q, -1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityReport {
    pub key: CensusKey,
    pub measured: u64,
    pub expected: BigRational,
    /// "census" or "grouped".
    pub method: &'static str,
}

impl CardinalityReport {
    pub fn new(key: CensusKey, measured: u64, method: &'static str) -> Self {
        CardinalityReport {
            expected: expected_cardinality(key.q, key.g, key.epsilon, key.squarefree),
            key,
            measured,
            method,
        }
    }

    pub fn matches(&self) -> bool {
        big_to_rational(&BigUint::from(self.measured)) == self.expected
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.key.q.to_string(),
            "g": self.key.g.to_string(),
            "epsilon": self.key.epsilon.to_string(),
            "squarefree": self.key.squarefree,
            "measured": self.measured.to_string(),
            "expected": rational_string(&self.expected),
            "method": self.method,
            "matches": self.matches(),
        })
    }
}

/// Shape of the cube part c_r for monic f of degree d.
#[derive(Clone, Copy, Debug)]
struct PartShape {
    /// Number of free low coefficients.
    free: usize,
    /// Whether a fixed coefficient 1 sits above them.
    monic: bool,
}

fn part_shape(d: usize, r: usize) -> PartShape {
    let n = if d >= r { (d - r) / 3 + 1 } else { 0 };
    if d % 3 == r {
        PartShape {
            free: n - 1,
            monic: true,
        }
    } else {
        PartShape { free: n, monic: false }
    }
}

fn part_table(f: &FieldSpec, s: PartShape) -> Vec<Vec<FieldElement>> {
    let mut odo = if s.monic {
        Odometer::monic(f, s.free, 0)
    } else {
        Odometer::all_below(f, s.free, 0)
    };
    let mut out = Vec::with_capacity(odo.remaining() as usize);
    loop {
        out.push(odo.current().to_vec());
        if !odo.advance() {
            break;
        }
    }
    out
}

fn check_args(f: &FieldSpec, epsilon: u8, budget: Budget, work: u128) -> Result<()> {
    if f.p() != 3 {
        return Err(Error::CharacteristicThreeRequired("curve census"));
    }
    if epsilon != 1 && epsilon != 2 {
        return Err(Error::InvalidArgument(format!("epsilon must be 1 or 2, got {epsilon}")));
    }
    budget.check(work)
}

/// |𝒫_ε(g)| by grouping over the two smaller cube parts.
pub fn count_cubefree_grouped(f: &FieldSpec, g: usize, epsilon: u8, exec: &Executor, budget: Budget) -> Result<u64> {
    let d = 2 * g + epsilon as usize;
    let shapes = [0, 1, 2].map(|r| part_shape(d, r));
    let sizes = shapes.map(|s| pow_sat(f.q(), s.free as u32));
    let inner = (0..3).max_by_key(|&r| (sizes[r], r)).expect("three parts");
    let outer: Vec<usize> = (0..3).filter(|&r| r != inner).collect();
    check_args(f, epsilon, budget, sizes[outer[0]] * sizes[outer[1]] + sizes[inner])?;

    let inner_t = part_table(f, shapes[inner]);
    let ta = part_table(f, shapes[outer[0]]);
    let tb = part_table(f, shapes[outer[1]]);
    let chunks = DEFAULT_CHUNKS.min(ta.len());
    let parts = exec.map_chunks(chunks, |c| {
        let (lo, hi) = chunk_bounds(ta.len() as u64, chunks as u64, c as u64);
        let mut memo: HashMap<Vec<FieldElement>, u64> = HashMap::new();
        let (mut x, mut y, mut gg) = (Vec::new(), Vec::new(), Vec::new());
        let mut total = 0u64;
        for a in &ta[lo as usize..hi as usize] {
            for b in &tb {
                let key = match raw::gcd_into(a, b, &mut x, &mut y, &mut gg, f) {
                    // both zero: the inner part must be a unit
                    None => Vec::new(),
                    Some(0) => {
                        total += inner_t.len() as u64;
                        continue;
                    }
                    Some(_) => gg.clone(),
                };
                if let Some(&n) = memo.get(&key) {
                    total += n;
                    continue;
                }
                let n = inner_t
                    .iter()
                    .filter(|z| {
                        if key.is_empty() {
                            raw::degree(z) == Some(0)
                        } else {
                            raw::coprime(&key, z, &mut x, &mut y, f)
                        }
                    })
                    .count() as u64;
                memo.insert(key, n);
                total += n;
            }
        }
        total
    });
    Ok(parts.into_iter().sum())
}

/// |𝒫′_ε(g)| by direct enumeration of monic f.
pub fn count_squarefree_direct(f: &FieldSpec, g: usize, epsilon: u8, exec: &Executor, budget: Budget) -> Result<u64> {
    let d = 2 * g + epsilon as usize;
    check_args(f, epsilon, budget, pow_sat(f.q(), d as u32))?;
    let total = (f.q() as u64).pow(d as u32);
    let chunks = (DEFAULT_CHUNKS as u64).min(total);
    let parts = exec.map_chunks(chunks as usize, |c| {
        let (lo, hi) = chunk_bounds(total, chunks, c as u64);
        if lo == hi {
            return 0;
        }
        let (mut dv, mut x, mut y) = (Vec::new(), Vec::new(), Vec::new());
        let mut odo = Odometer::monic(f, d, lo);
        let mut n = 0u64;
        for _ in lo..hi {
            if raw::is_squarefree(odo.current(), &mut dv, &mut x, &mut y, f) {
                n += 1;
            }
            odo.advance();
        }
        n
    });
    Ok(parts.into_iter().sum())
}

/// X^e mod m by square-and-multiply.
fn pow_mod(base: &Poly, mut e: u64, m: &Poly, f: &FieldSpec) -> Poly {
    let mut result = Poly::one().rem(m, f).expect("nonzero modulus");
    let mut b = base.rem(m, f).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&b, f).rem(m, f).expect("nonzero modulus");
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b, f).rem(m, f).expect("nonzero modulus");
        }
    }
    result
}

/// A prime factor π together with X^(q^(deg π − 1)) mod π.
struct PrimeFactor {
    prime: Poly,
    frob_pred: Poly,
}

/// Splits a squarefree product of primes of degree `deg` (Cantor–Zassenhaus
/// with a deterministic sequence of trial polynomials; q odd).
fn equal_degree_split(u: Poly, deg: usize, f: &FieldSpec, out: &mut Vec<Poly>) {
    let n = u.degree().expect("nonzero");
    if n == deg {
        out.push(u);
        return;
    }
    let q = f.q() as u64;
    let e = (q.pow(deg as u32) - 1) / 2;
    let mut idx = q;
    loop {
        // trial polynomials of positive degree below n, in index order
        let digits: Vec<u32> = {
            let mut v = idx;
            let mut ds = Vec::new();
            while v > 0 {
                ds.push((v % q) as u32);
                v /= q;
            }
            ds
        };
        idx += 1;
        if digits.len() > n {
            unreachable!("equal-degree splitting found no separating polynomial");
        }
        let h = Poly::from_indices(f, &digits).expect("valid digits");
        let w = pow_mod(&h, e, &u, f).sub(&Poly::one(), f);
        let d = u.gcd(&w, f);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < n {
            let (co, _) = u.div_rem(&d, f).expect("nonzero");
            equal_degree_split(d, deg, f, out);
            equal_degree_split(co.monic(f), deg, f, out);
            return;
        }
    }
}

/// Distinct monic prime factors of a nonzero polynomial, with the Frobenius
/// data needed for cube roots modulo each. Linear factors come from roots;
/// the rest from distinct-degree then equal-degree splitting.
fn distinct_primes(v: &Poly, f: &FieldSpec) -> Vec<PrimeFactor> {
    let q = f.q() as u64;
    let x = Poly::x();
    let vm = v.monic(f);
    let mut u = vm.clone();
    let mut out = Vec::new();
    for beta in f.elements() {
        if !vm.eval(beta, f).is_zero() {
            continue;
        }
        let lin = Poly::new(vec![f.neg(beta), FieldElement::ONE]);
        loop {
            let (quo, r) = u.div_rem(&lin, f).expect("nonzero");
            if !r.is_zero() {
                break;
            }
            u = quo;
        }
        out.push(PrimeFactor {
            frob_pred: Poly::constant(beta),
            prime: lin,
        });
    }
    // frob = X^(q^i) mod v
    let mut frob = pow_mod(&x, q, &vm, f);
    let mut i = 1;
    while let Some(du) = u.degree() {
        if du == 0 {
            break;
        }
        if du < 2 * (i + 1) {
            // no factor of degree ≤ i: u is prime
            let mut fp = x.clone();
            for _ in 0..du - 1 {
                fp = pow_mod(&fp, q, &u, f);
            }
            out.push(PrimeFactor {
                frob_pred: fp.rem(&u, f).expect("nonzero"),
                prime: u,
            });
            break;
        }
        let prev = frob.clone();
        i += 1;
        frob = pow_mod(&frob, q, &vm, f);
        let prod = u.gcd(&frob.sub(&x, f), f);
        if prod.degree().unwrap_or(0) == 0 {
            continue;
        }
        // strip every power of these primes from u
        loop {
            let h = u.gcd(&prod, f);
            if h.degree().unwrap_or(0) == 0 {
                break;
            }
            u = u.div_rem(&h, f).expect("nonzero").0.monic(f);
        }
        let mut primes = Vec::new();
        equal_degree_split(prod, i, f, &mut primes);
        for p in primes {
            let fp = prev.rem(&p, f).expect("nonzero");
            out.push(PrimeFactor {
                prime: p,
                frob_pred: fp,
            });
        }
    }
    out
}

/// Poly with cube-part coefficients raised to the third power: c(X)³ = Σ c_i³ X^{3i}.
fn cube(c: &[FieldElement], f: &FieldSpec) -> Poly {
    let mut out = vec![FieldElement::ZERO; 3 * c.len()];
    for (i, &a) in c.iter().enumerate() {
        out[3 * i] = f.pow(a, 3);
    }
    Poly::new(out)
}

/// The residue of the cube root of w modulo the prime π.
fn cube_root_mod(w: &Poly, p: &PrimeFactor, f: &FieldSpec) -> Poly {
    // X^(1/3) = (X^(q^(D−1)))^(q/3) in F_q[X]/π, and w = Σ w_i X^i.
    let q3 = (f.q() / 3) as u64;
    let t = pow_mod(&p.frob_pred, q3, &p.prime, f);
    let mut acc = Poly::zero();
    let mut tp = Poly::one();
    for &c in w.coeffs() {
        let root = f.pth_root(c);
        acc = acc.add(&tp.scale(root, f), f);
        tp = tp.mul(&t, f).rem(&p.prime, f).expect("nonzero");
    }
    acc.rem(&p.prime, f).expect("nonzero")
}

fn index_of(c: &[FieldElement], q: u64) -> usize {
    c.iter().rev().fold(0u64, |acc, e| acc * q + e.index() as u64) as usize
}

/// Marks every r of degree < `free` with r ≡ target mod π.
fn mark_residue(
    target: &[FieldElement],
    prime: &[FieldElement],
    free: usize,
    q: u64,
    f: &FieldSpec,
    h: &mut Vec<FieldElement>,
    bad: &mut [bool],
) {
    let dp = prime.len() - 1;
    let span = free - dp;
    h.clear();
    h.resize(span, FieldElement::ZERO);
    let mut r = [FieldElement::ZERO; 32];
    loop {
        r[..free].fill(FieldElement::ZERO);
        r[..target.len()].copy_from_slice(target);
        for (j, &hj) in h.iter().enumerate() {
            if hj.is_zero() {
                continue;
            }
            for (t, &pc) in prime.iter().enumerate() {
                r[j + t] = f.add(r[j + t], f.mul(hj, pc));
            }
        }
        bad[index_of(&r[..free], q)] = true;
        // next h
        let mut k = 0;
        loop {
            if k == span {
                return;
            }
            let next = h[k].index() + 1;
            if next < q as u32 {
                h[k] = f.element(next).expect("in range");
                break;
            }
            h[k] = FieldElement::ZERO;
            k += 1;
        }
    }
}

/// |𝒫′_ε(g)| by grouping over (c1, c2) and sieving c0.
pub fn count_squarefree_grouped(f: &FieldSpec, g: usize, epsilon: u8, exec: &Executor, budget: Budget) -> Result<u64> {
    let d = 2 * g + epsilon as usize;
    let shapes = [0, 1, 2].map(|r| part_shape(d, r));
    let q = f.q() as u64;
    let outer = pow_sat(f.q(), (shapes[1].free + shapes[2].free) as u32);
    check_args(
        f,
        epsilon,
        budget,
        outer.saturating_mul(pow_sat(f.q(), shapes[0].free as u32) / 8 + 1),
    )?;

    let t0 = part_table(f, shapes[0]);
    let t1 = part_table(f, shapes[1]);
    let t2 = part_table(f, shapes[2]);
    let s0 = shapes[0];
    let base = if s0.monic {
        Poly::monomial(FieldElement::ONE, s0.free)
    } else {
        Poly::zero()
    };
    // c0(β) for every c0 in the box, per β
    let evals: Vec<Vec<FieldElement>> = f
        .elements()
        .map(|beta| t0.iter().map(|c| Poly::new(c.clone()).eval(beta, f)).collect())
        .collect();
    let x2 = Poly::monomial(FieldElement::ONE, 2);
    let chunks = DEFAULT_CHUNKS.min(t1.len());
    let parts = exec.map_chunks(chunks, |c| {
        let (lo, hi) = chunk_bounds(t1.len() as u64, chunks as u64, c as u64);
        let mut bad = vec![false; t0.len()];
        let mut h = Vec::new();
        let mut total = 0u64;
        for c1 in &t1[lo as usize..hi as usize] {
            let c1c = cube(c1, f);
            for c2 in &t2 {
                let c2c = cube(c2, f);
                let v = c1c.sub(&c2c.shift(1), f);
                if v.is_zero() {
                    // f = c0³ is squarefree only as a constant, excluded by d ≥ 1
                    continue;
                }
                let w = x2.mul(&c2c, f);
                bad.fill(false);
                for p in distinct_primes(&v, f) {
                    let rho = cube_root_mod(&w, &p, f);
                    let dp = p.prime.degree().expect("prime");
                    if dp == 1 {
                        let beta = p.frob_pred.coeff(0);
                        let target = rho.coeff(0);
                        for (b, &e) in bad.iter_mut().zip(&evals[beta.index() as usize]) {
                            if e == target {
                                *b = true;
                            }
                        }
                        continue;
                    }
                    let target = rho.sub(&base, f).rem(&p.prime, f).expect("nonzero");
                    if dp > s0.free {
                        if target.degree().is_none_or(|t| t < s0.free) {
                            bad[index_of(target.coeffs(), q)] = true;
                        }
                        continue;
                    }
                    mark_residue(target.coeffs(), p.prime.coeffs(), s0.free, q, f, &mut h, &mut bad);
                }
                total += bad.iter().filter(|b| !**b).count() as u64;
            }
        }
        total
    });
    Ok(parts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn factoring_recovers_products() {
        let f = FieldSpec::new(3, 2).unwrap();
        let a = Poly::from_indices(&f, &[1, 1]).unwrap();
        let b = Poly::from_indices(&f, &[3, 0, 1]).unwrap(); // irreducible or not, compare with oracle
        let c = Poly::from_indices(&f, &[5, 2, 0, 1]).unwrap();
        let v = a.mul(&a, &f).mul(&b, &f).mul(&c, &f).scale(f.element(2).unwrap(), &f);
        let ps = distinct_primes(&v, &f);
        // every prime divides v, is irreducible, and their product is the radical
        let mut prod = Poly::one();
        for p in &ps {
            assert!(v.rem(&p.prime, &f).unwrap().is_zero());
            assert!(crate::poly::is_squarefree(&p.prime, &f).unwrap());
            let d = p.prime.degree().unwrap();
            for k in 1..=d / 2 {
                for g in crate::poly::enumerate_monic(&f, k) {
                    assert!(!p.prime.rem(&g, &f).unwrap().is_zero());
                }
            }
            // frob_pred^q = X mod π
            let back = pow_mod(&p.frob_pred, 9, &p.prime, &f);
            assert_eq!(back, Poly::x().rem(&p.prime, &f).unwrap());
            prod = prod.mul(&p.prime, &f);
        }
        let mut rad_candidates = prod.clone();
        for _ in 0..3 {
            rad_candidates = rad_candidates.mul(&prod, &f);
        }
        assert!(rad_candidates.rem(&v.monic(&f), &f).unwrap().is_zero());
    }

    #[test]
    fn grouped_counts_match_direct() {
        let ex = Executor::serial();
        for (p, k, gmax) in [(3, 1, 3), (3, 2, 1)] {
            let f = FieldSpec::new(p, k).unwrap();
            for g in 0..=gmax {
                for eps in [1, 2] {
                    let direct = count_squarefree_direct(&f, g, eps, &ex, Budget::DEFAULT).unwrap();
                    let grouped = count_squarefree_grouped(&f, g, eps, &ex, Budget::DEFAULT).unwrap();
                    assert_eq!(direct, grouped, "q={} g={g} eps={eps}", f.q());
                    let (cf, _) = crate::census::run_census_pair(&f, g, eps, &ex, Budget::DEFAULT).unwrap();
                    let cg = count_cubefree_grouped(&f, g, eps, &ex, Budget::DEFAULT).unwrap();
                    assert_eq!(cf.total, cg);
                }
            }
        }
    }

    #[test]
    fn expected_sizes() {
        assert_eq!(expected_cardinality(3, 1, 1, false), ratio(24, 1));
        assert_eq!(expected_cardinality(3, 1, 1, true), ratio(18, 1));
        assert_eq!(expected_cardinality(3, 0, 1, true), ratio(3, 1));
        assert_eq!(expected_cardinality(3, 0, 2, true), ratio(6, 1));
        assert_eq!(expected_cardinality(3, 0, 2, false), ratio(6, 1));
    }
}
