use super::lines::poly_table;
use super::{mu1_raw, Mu1Scratch};
use crate::error::Result;
use crate::exec::{pow_sat, Budget, Executor, DEFAULT_CHUNKS};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{chunk_bounds, raw};

/// Solution profile code for a minimal solution that is not projectively unique.
pub const PROFILE_AMBIGUOUS: usize = 8;
const PROFILES: usize = 9;

/// One exhaustive pass over the coprime triples of maximal degree m, recording
/// for each projective class its degree pattern R, first minimum μ₁ and the
/// set of coordinates of the minimal solution that attain μ₁.
///
/// Classes are represented by the triple whose first coordinate of degree m is
/// monic; each class holds q − 1 ordered triples, and exactly one of them has
/// A1 monic when 1 ∈ R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleHistogram {
    q: u32,
    m: usize,
    counts: Vec<u64>,
}

impl TripleHistogram {
    fn slot(m: usize, r: u8, mu1: usize, profile: usize) -> usize {
        ((r as usize) * (m + 1) + mu1) * PROFILES + profile
    }

    pub fn build(f: &FieldSpec, m: usize, exec: &Executor, budget: Budget) -> Result<Self> {
        budget.check(pow_sat(f.q(), 3 * (m as u32 + 1)))?;
        let q = f.q();
        let table = poly_table(f, m);
        let n = table.len();
        let degs: Vec<Option<usize>> = table.iter().map(|c| raw::degree(c)).collect();
        let gcd_table = (n <= 2048).then(|| build_gcd_table(f, &table, q));
        let size = Self::slot(m, 8, 0, 0);

        let chunks = DEFAULT_CHUNKS.min(n);
        let partials = exec.map_chunks(chunks, |c| {
            let (lo, hi) = chunk_bounds(n as u64, chunks as u64, c as u64);
            let mut counts = vec![0u64; size];
            let mut s = Mu1Scratch::default();
            let (mut x, mut y, mut g) = (Vec::new(), Vec::new(), Vec::new());
            for i1 in lo as usize..hi as usize {
                let d1 = degs[i1];
                for i2 in 0..n {
                    let d2 = degs[i2];
                    for i3 in 0..n {
                        let d3 = degs[i3];
                        let ds = [d1, d2, d3];
                        let mut r = 0u8;
                        for (k, d) in ds.iter().enumerate() {
                            if *d == Some(m) {
                                r |= 1 << k;
                            }
                        }
                        if r == 0 {
                            continue;
                        }
                        let idx = [i1, i2, i3];
                        let first = idx[r.trailing_zeros() as usize];
                        if table[first][m] != FieldElement::ONE {
                            continue;
                        }
                        let coprime = match &gcd_table {
                            Some(gt) => gt[gt[i1 * n + i2] as usize * n + i3] == 1,
                            None => triple_coprime(&table[i1], &table[i2], &table[i3], &mut x, &mut y, &mut g, f),
                        };
                        if !coprime {
                            continue;
                        }
                        let res = mu1_raw([&table[i1], &table[i2], &table[i3]], m, f, &mut s, None);
                        let profile = if res.kernel_dim > 1 {
                            PROFILE_AMBIGUOUS
                        } else {
                            res.top_mask as usize
                        };
                        counts[Self::slot(m, r, res.l, profile)] += 1;
                    }
                }
            }
            counts
        });
        let mut counts = vec![0u64; size];
        for p in partials {
            for (a, b) in counts.iter_mut().zip(p) {
                *a += b;
            }
        }
        Ok(TripleHistogram { q, m, counts })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of projective classes whose (R mask, μ₁, profile) satisfy `pred`.
    /// The profile is a mask over solution coordinates or [`PROFILE_AMBIGUOUS`].
    pub fn classes(&self, pred: impl Fn(u8, usize, usize) -> bool) -> u64 {
        let mut total = 0;
        for r in 1..8u8 {
            for mu in 0..=self.m {
                for p in 0..PROFILES {
                    if pred(r, mu, p) {
                        total += self.counts[Self::slot(self.m, r, mu, p)];
                    }
                }
            }
        }
        total
    }
}

fn poly_index(c: &[FieldElement], q: u32) -> u32 {
    c.iter().rev().fold(0, |acc, e| acc * q + e.index())
}

/// gcd of every pair of polynomials in the table, as a table index.
fn build_gcd_table(f: &FieldSpec, table: &[Vec<FieldElement>], q: u32) -> Vec<u16> {
    let n = table.len();
    let mut out = vec![0u16; n * n];
    let (mut x, mut y, mut g) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        for j in i..n {
            raw::gcd_into(&table[i], &table[j], &mut x, &mut y, &mut g, f);
            let v = poly_index(&g, q) as u16;
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}

fn triple_coprime(
    a: &[FieldElement],
    b: &[FieldElement],
    c: &[FieldElement],
    x: &mut Vec<FieldElement>,
    y: &mut Vec<FieldElement>,
    g: &mut Vec<FieldElement>,
    f: &FieldSpec,
) -> bool {
    match raw::gcd_into(a, b, x, y, g, f) {
        None => raw::degree(c) == Some(0),
        Some(0) => true,
        Some(_) => {
            let g2 = std::mem::take(g);
            let r = raw::coprime(&g2, c, x, y, f);
            *g = g2;
            r
        }
    }
}
