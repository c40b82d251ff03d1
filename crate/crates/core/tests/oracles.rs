//! Independent re-derivations: polynomial arithmetic over GF(3) and GF(9)
//! written from scratch here, trial-division factor tests, and the classical
//! Cartier–Manin matrix (coefficients of f at x^{3i−j}) as an a-number oracle.

use cartier_core::cartier::{a_number_kernel, genus_epsilon};
use cartier_core::census::{run_census, CensusKey};
use cartier_core::poly::{is_cubefree, is_squarefree};
use cartier_core::{Budget, Executor, FieldSpec, Poly};

/// GF(3) or GF(9) = GF(3)[i]/(i² + 1), elements as (re, im) digits.
#[derive(Clone, Copy)]
struct Small {
    q: u32,
}

type El = (u32, u32);

impl Small {
    fn all(self) -> Vec<El> {
        if self.q == 3 {
            (0..3).map(|a| (a, 0)).collect()
        } else {
            (0..9).map(|v| (v % 3, v / 3)).collect()
        }
    }
    fn add(self, a: El, b: El) -> El {
        ((a.0 + b.0) % 3, (a.1 + b.1) % 3)
    }
    fn neg(self, a: El) -> El {
        ((3 - a.0) % 3, (3 - a.1) % 3)
    }
    fn mul(self, a: El, b: El) -> El {
        ((a.0 * b.0 + 2 * a.1 * b.1) % 3, (a.0 * b.1 + a.1 * b.0) % 3)
    }
    fn inv(self, a: El) -> El {
        self.all()
            .into_iter()
            .find(|&b| self.mul(a, b) == (1, 0))
            .expect("unit")
    }
}

fn trim(mut v: Vec<El>) -> Vec<El> {
    while v.last() == Some(&(0, 0)) {
        v.pop();
    }
    v
}

fn rem(k: Small, a: &[El], b: &[El]) -> Vec<El> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let li = k.inv(b[db]);
    while r.len() > db {
        let s = r.len() - 1 - db;
        let c = k.mul(*r.last().unwrap(), li);
        for (i, &bi) in b.iter().enumerate() {
            r[s + i] = k.add(r[s + i], k.neg(k.mul(c, bi)));
        }
        r = trim(r);
    }
    r
}

fn mul(k: Small, a: &[El], b: &[El]) -> Vec<El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![(0, 0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(out)
}

fn monics(k: Small, d: usize) -> Vec<Vec<El>> {
    let mut out = vec![vec![(1, 0)]];
    for _ in 0..d {
        let mut next = Vec::new();
        for tail in &out {
            for c in k.all() {
                let mut v = vec![c];
                v.extend_from_slice(tail);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// True iff some monic p of positive degree has p^e | f.
fn has_power_factor(k: Small, f: &[El], e: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / e as usize {
        for p in monics(k, d) {
            let mut pe = vec![(1, 0)];
            for _ in 0..e {
                pe = mul(k, &pe, &p);
            }
            if rem(k, f, &pe).is_empty() {
                return true;
            }
        }
    }
    false
}

fn rank(k: Small, mut m: Vec<Vec<El>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != (0, 0)) else {
            continue;
        };
        m.swap(r, piv);
        let inv = k.inv(m[r][c]);
        for i in 0..rows {
            if i != r && m[i][c] != (0, 0) {
                let t = k.mul(m[i][c], inv);
                for j in 0..cols {
                    m[i][j] = k.add(m[i][j], k.neg(k.mul(t, m[r][j])));
                }
            }
        }
        r += 1;
    }
    r
}

/// a-number of y² = f for squarefree f via the Cartier–Manin matrix.
fn a_number_oracle(k: Small, f: &[El], g: usize) -> usize {
    let coef = |n: isize| {
        if n >= 0 && (n as usize) < f.len() {
            f[n as usize]
        } else {
            (0, 0)
        }
    };
    let m: Vec<Vec<El>> = (1..=g)
        .map(|i| (1..=g).map(|j| coef(3 * i as isize - j as isize)).collect())
        .collect();
    g - rank(k, m)
}

fn to_poly(spec: &FieldSpec, f: &[El]) -> Poly {
    Poly::from_indices(spec, &f.iter().map(|&(a, _)| a).collect::<Vec<_>>()).unwrap()
}

#[test]
fn squarefree_and_cubefree_match_trial_division() {
    let k = Small { q: 3 };
    let spec = FieldSpec::new(3, 1).unwrap();
    for d in 1..=6 {
        for f in monics(k, d) {
            let p = to_poly(&spec, &f);
            assert_eq!(
                is_squarefree(&p, &spec).unwrap(),
                !has_power_factor(k, &f, 2),
                "{}",
                p.to_text()
            );
            assert_eq!(
                is_cubefree(&p, &spec).unwrap(),
                !has_power_factor(k, &f, 3),
                "{}",
                p.to_text()
            );
        }
    }
}

#[test]
fn kernel_a_number_matches_cartier_manin_over_gf3() {
    let k = Small { q: 3 };
    let spec = FieldSpec::new(3, 1).unwrap();
    for d in 3..=8 {
        let (g, _) = genus_epsilon(d).unwrap();
        for f in monics(k, d) {
            if has_power_factor(k, &f, 2) {
                continue;
            }
            let p = to_poly(&spec, &f);
            assert_eq!(
                a_number_kernel(&p, g, &spec).unwrap(),
                a_number_oracle(k, &f, g),
                "{}",
                p.to_text()
            );
        }
    }
}

/// Squarefree census distributions recomputed entirely with the local
/// arithmetic. GF(9) elements are compared only through counts, so the two
/// field presentations need not agree.
#[test]
fn squarefree_census_matches_oracle() {
    let ex = Executor::serial();
    for (q, k_ext, g_max) in [(3u32, 1u32, 3usize), (9, 2, 1)] {
        let k = Small { q };
        let spec = FieldSpec::new(3, k_ext).unwrap();
        for g in 0..=g_max {
            for eps in [1u8, 2] {
                let d = 2 * g + eps as usize;
                let mut want = vec![0u64; g + 1];
                for f in monics(k, d) {
                    if !has_power_factor(k, &f, 2) {
                        want[a_number_oracle(k, &f, g)] += 1;
                    }
                }
                let key = CensusKey {
                    q,
                    g,
                    epsilon: eps,
                    squarefree: true,
                };
                let t = run_census(&spec, key, &ex, Budget::DEFAULT).unwrap();
                let got: Vec<u64> = (0..=g).map(|a| t.count(a)).collect();
                assert_eq!(got, want, "{}", key.label());
            }
        }
    }
}

#[test]
fn cubefree_totals_match_trial_division() {
    let ex = Executor::serial();
    let k = Small { q: 3 };
    let spec = FieldSpec::new(3, 1).unwrap();
    for g in 0..=2 {
        for eps in [1u8, 2] {
            let d = 2 * g + eps as usize;
            let want = monics(k, d).iter().filter(|f| !has_power_factor(k, f, 3)).count() as u64;
            let key = CensusKey {
                q: 3,
                g,
                epsilon: eps,
                squarefree: false,
            };
            assert_eq!(
                run_census(&spec, key, &ex, Budget::DEFAULT).unwrap().total,
                want,
                "{}",
                key.label()
            );
        }
    }
}
