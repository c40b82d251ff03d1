//! Heights on F_q(X)³: vectors and planes are represented by coprime
//! polynomial triples, the height being the maximal degree. Valid in any
//! characteristic.

mod counts;
pub mod formulas;
mod histogram;
mod lines;

pub use counts::{
    count_n, count_s, count_t, run_cell, run_grid, CountReport, GridCell, GridSpec, HeightCounter, NVariant,
};
pub use histogram::TripleHistogram;
pub use lines::{count_lines, count_planes_over_line};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{pow_sat, Budget};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::rref_in_place;
use crate::poly::{raw, Poly};

/// A nonzero triple of polynomials with the common factor removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripleVec {
    a: [Poly; 3],
    height: usize,
}

impl TripleVec {
    /// Divides out gcd(a1, a2, a3); fails on the zero triple.
    pub fn new(a: [Poly; 3], f: &FieldSpec) -> Result<Self> {
        let g = a[0].gcd(&a[1], f).gcd(&a[2], f);
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let a = if g.is_one() {
            a
        } else {
            a.map(|p| p.div_rem(&g, f).expect("gcd is nonzero").0)
        };
        Ok(Self::from_coprime(a))
    }

    /// Wraps a triple already known to be coprime and nonzero.
    pub(crate) fn from_coprime(a: [Poly; 3]) -> Self {
        let height = a.iter().filter_map(Poly::degree).max().expect("nonzero triple");
        TripleVec { a, height }
    }

    pub fn coords(&self) -> &[Poly; 3] {
        &self.a
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Scaled so that the first coordinate of maximal degree is monic.
    pub fn normalized(&self, f: &FieldSpec) -> TripleVec {
        let lead = self
            .a
            .iter()
            .find(|p| p.degree() == Some(self.height))
            .and_then(Poly::leading)
            .expect("some coordinate attains the height");
        let inv = f.inv_nonzero(lead);
        TripleVec {
            a: self.a.clone().map(|p| p.scale(inv, f)),
            height: self.height,
        }
    }

    /// Coordinates attaining the height.
    pub fn degree_pattern(&self) -> DegreePattern {
        let mut mask = 0;
        for (i, p) in self.a.iter().enumerate() {
            if p.degree() == Some(self.height) {
                mask |= 1 << i;
            }
        }
        DegreePattern(mask)
    }

    pub fn dot(&self, other: &[Poly; 3], f: &FieldSpec) -> Poly {
        (0..3).fold(Poly::zero(), |acc, i| acc.add(&self.a[i].mul(&other[i], f), f))
    }

    pub fn to_text(&self) -> String {
        format!(
            "({}; {}; {})",
            self.a[0].to_text(),
            self.a[1].to_text(),
            self.a[2].to_text()
        )
    }
}

/// A nonempty subset R of {1, 2, 3}, stored as a bit mask (bit i−1 for i).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreePattern(pub u8);

impl DegreePattern {
    pub const ALL: [DegreePattern; 7] = [
        DegreePattern(0b001),
        DegreePattern(0b010),
        DegreePattern(0b100),
        DegreePattern(0b011),
        DegreePattern(0b101),
        DegreePattern(0b110),
        DegreePattern(0b111),
    ];

    /// From 1-based indices.
    pub fn from_indices(idx: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &i in idx {
            if !(1..=3).contains(&i) {
                return Err(Error::InvalidArgument(format!("{i} is not in {{1,2,3}}")));
            }
            mask |= 1 << (i - 1);
        }
        if mask == 0 {
            return Err(Error::InvalidArgument("degree pattern must be nonempty".into()));
        }
        Ok(DegreePattern(mask))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=3).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for DegreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..=3).filter(|&i| self.contains(i)).map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// First minimum of the plane orthogonal to a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mu1 {
    pub l: usize,
    /// A coprime solution of height l, normalized.
    pub witness: TripleVec,
    /// Dimension of the space of solutions of degree ≤ l; 1 exactly when the
    /// minimal solution is projectively unique.
    pub kernel_dim: usize,
}

/// Reusable buffers for [`mu1_raw`].
#[derive(Default)]
pub(crate) struct Mu1Scratch {
    m: Vec<FieldElement>,
    pivots: Vec<usize>,
}

pub(crate) struct RawMu1 {
    pub l: usize,
    pub kernel_dim: usize,
    /// Bit i set iff coordinate i of the (first) minimal solution has degree l.
    pub top_mask: u8,
}

/// Smallest l for which Σ A_i P_i = 0 has a nonzero solution with all deg P_i ≤ l.
///
/// Such a solution is automatically coprime of height exactly l (dividing out a
/// common factor would lower l). `a` may carry trailing zeros; `h` is the
/// height of the triple. If `witness` is given it receives the solution's
/// coefficients, `l + 1` per coordinate.
pub(crate) fn mu1_raw(
    a: [&[FieldElement]; 3],
    h: usize,
    f: &FieldSpec,
    s: &mut Mu1Scratch,
    mut witness: Option<&mut Vec<FieldElement>>,
) -> RawMu1 {
    let degs = a.map(raw::degree);
    for l in 0..=h {
        let rows = h + l + 1;
        let w = l + 1;
        let cols = 3 * w;
        s.m.clear();
        s.m.resize(rows * cols, FieldElement::ZERO);
        for i in 0..3 {
            let Some(d) = degs[i] else { continue };
            for j in 0..w {
                for (t, &c) in a[i][..=d].iter().enumerate() {
                    s.m[(t + j) * cols + i * w + j] = c;
                }
            }
        }
        let rank = rref_in_place(&mut s.m, rows, cols, f, &mut s.pivots);
        if rank == cols {
            continue;
        }
        // first free column gives a kernel vector
        let mut is_pivot = [false; 64];
        let mut pivot_row = [usize::MAX; 64];
        for (r, &p) in s.pivots.iter().enumerate() {
            is_pivot[p] = true;
            pivot_row[p] = r;
        }
        let free = (0..cols).find(|&c| !is_pivot[c]).expect("rank deficient");
        let value = |c: usize| -> FieldElement {
            if c == free {
                FieldElement::ONE
            } else if is_pivot[c] {
                f.neg(s.m[pivot_row[c] * cols + free])
            } else {
                FieldElement::ZERO
            }
        };
        let mut top_mask = 0u8;
        for i in 0..3 {
            if !value(i * w + l).is_zero() {
                top_mask |= 1 << i;
            }
        }
        if let Some(out) = witness.as_deref_mut() {
            out.clear();
            out.extend((0..cols).map(value));
        }
        return RawMu1 {
            l,
            kernel_dim: cols - rank,
            top_mask,
        };
    }
    unreachable!("(A2, -A1, 0) or a permutation is always a solution of height <= h")
}

/// First successive minimum of the plane A^⊥, with a normalized witness.
pub fn mu1(a: &TripleVec, f: &FieldSpec) -> Mu1 {
    assert!(a.height < 21, "triple height too large for the dense solver");
    let mut s = Mu1Scratch::default();
    let mut w = Vec::new();
    let coeffs = [a.a[0].coeffs(), a.a[1].coeffs(), a.a[2].coeffs()];
    let r = mu1_raw(coeffs, a.height, f, &mut s, Some(&mut w));
    let n = r.l + 1;
    let p = [0, 1, 2].map(|i| Poly::new(w[i * n..(i + 1) * n].to_vec()));
    let witness = TripleVec::from_coprime(p).normalized(f);
    debug_assert!(witness.dot(a.coords(), f).is_zero());
    Mu1 {
        l: r.l,
        witness,
        kernel_dim: r.kernel_dim,
    }
}

/// Both successive minima of A^⊥ by exhaustive search: for l = 0, 1, …, every
/// pair of coordinates of degree ≤ l is tried and the third solved by exact
/// division by a coordinate A_k of maximal degree. μ₁ is the first l with a
/// nonzero solution; μ₂ the first l with a solution not proportional to that
/// first one.
///
/// Divisibility is decided by comparing A_i·y_i mod A_k with −A_j·y_j mod A_k,
/// so each pair costs one integer comparison; the quotient then automatically
/// has degree ≤ l.
pub fn minima_bruteforce(a: &TripleVec, f: &FieldSpec, budget: Budget) -> Result<(usize, usize)> {
    let h = a.height;
    let q = f.q() as u64;
    budget.check(pow_sat(f.q(), 2 * (h as u32 + 1)))?;
    let k = (0..3).find(|&i| a.a[i].degree() == Some(h)).expect("height attained");
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let ak = &a.a[k];
    // residues of A_i·X^t and A_j·X^t modulo A_k, as length-h coefficient arrays
    let residues = |c: &Poly| -> Vec<Vec<FieldElement>> {
        (0..=h)
            .map(|t| {
                let mut r = c.shift(t).rem(ak, f).expect("A_k nonzero").into_coeffs();
                r.resize(h, FieldElement::ZERO);
                r
            })
            .collect()
    };
    let (ri, rj) = (residues(&a.a[i]), residues(&a.a[j]));
    let encode = |digits: &[FieldElement], basis: &[Vec<FieldElement>], negate: bool| -> u64 {
        let mut acc = vec![FieldElement::ZERO; h];
        for (t, &c) in digits.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (s, &b) in basis[t].iter().enumerate() {
                acc[s] = f.add(acc[s], f.mul(c, b));
            }
        }
        acc.iter().rev().fold(0u64, |v, &e| {
            let e = if negate { f.neg(e) } else { e };
            v * q + e.index() as u64
        })
    };

    let mut first: Option<[Poly; 3]> = None;
    let mut mu1 = None;
    for l in 0..=h {
        let mut polys = Vec::new();
        let mut codes_i = Vec::new();
        let mut codes_j = Vec::new();
        let mut odo = crate::poly::Odometer::all_below(f, l + 1, 0);
        loop {
            polys.push(odo.current_poly());
            codes_i.push(encode(odo.current(), &ri, false));
            codes_j.push(encode(odo.current(), &rj, true));
            if !odo.advance() {
                break;
            }
        }
        for (pi, &ci) in codes_i.iter().enumerate() {
            for (pj, &cj) in codes_j.iter().enumerate() {
                if ci != cj || (pi == 0 && pj == 0) {
                    continue;
                }
                let (yi, yj) = (&polys[pi], &polys[pj]);
                let num = a.a[i].mul(yi, f).add(&a.a[j].mul(yj, f), f).neg(f);
                let (yk, r) = num.div_rem(ak, f)?;
                debug_assert!(r.is_zero() && yk.degree().is_none_or(|d| d <= l));
                let mut y: [Poly; 3] = Default::default();
                y[i] = yi.clone();
                y[j] = yj.clone();
                y[k] = yk;
                match &first {
                    None => {
                        mu1 = Some(l);
                        first = Some(y);
                    }
                    Some(w) => {
                        if !cross_is_zero(w, &y, f) {
                            return Ok((mu1.expect("set with first"), l));
                        }
                    }
                }
            }
        }
    }
    unreachable!("two independent solutions of height <= h always exist")
}

/// μ₂ by brute force; see [`minima_bruteforce`].
pub fn mu2_bruteforce(a: &TripleVec, f: &FieldSpec, budget: Budget) -> Result<usize> {
    Ok(minima_bruteforce(a, f, budget)?.1)
}

fn cross_is_zero(u: &[Poly; 3], v: &[Poly; 3], f: &FieldSpec) -> bool {
    (0..3).all(|t| {
        let (x, y) = ((t + 1) % 3, (t + 2) % 3);
        u[x].mul(&v[y], f) == u[y].mul(&v[x], f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(f: &FieldSpec, c: [&[u32]; 3]) -> TripleVec {
        TripleVec::new(c.map(|x| Poly::from_indices(f, x).unwrap()), f).unwrap()
    }

    #[test]
    fn coordinate_hyperplane() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = tv(&f, [&[1], &[], &[]]);
        let m = mu1(&a, &f);
        assert_eq!(m.l, 0);
        assert_eq!(m.kernel_dim, 2);
        assert_eq!(m.witness.coords(), &[Poly::zero(), Poly::one(), Poly::zero()]);
        assert_eq!(mu2_bruteforce(&a, &f, Budget::DEFAULT).unwrap(), 0);
    }

    #[test]
    fn elliptic_normal() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = tv(&f, [&[0, 1], &[2], &[]]);
        let m = mu1(&a, &f);
        assert_eq!(m.l, 0);
        assert_eq!(m.witness.coords(), &[Poly::zero(), Poly::zero(), Poly::one()]);
        assert_eq!(minima_bruteforce(&a, &f, Budget::DEFAULT).unwrap(), (0, 1));
    }

    #[test]
    fn quadratic_moment_curve() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = tv(&f, [&[0, 0, 1], &[0, 1], &[1]]);
        assert_eq!(mu1(&a, &f).l, 1);
        assert_eq!(minima_bruteforce(&a, &f, Budget::DEFAULT).unwrap(), (1, 1));
    }

    #[test]
    fn new_divides_out_gcd_and_rejects_zero() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = tv(&f, [&[0, 1], &[0, 0, 1], &[]]);
        assert_eq!(a.height(), 1);
        assert!(TripleVec::new(Default::default(), &f).is_err());
    }

    #[test]
    fn degree_pattern_roundtrip() {
        let r = DegreePattern::from_indices(&[1, 3]).unwrap();
        assert_eq!(r.to_string(), "1,3");
        assert!(r.contains(3) && !r.contains(2));
        assert!(DegreePattern::from_indices(&[]).is_err());
        assert!(DegreePattern::from_indices(&[4]).is_err());
    }
}
