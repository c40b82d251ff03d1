//! The Cartier operator on y² = f(x) in characteristic 3 and three independent
//! ways of computing the a-number of the curve.
//!
//! For f = c0³ + c1³·X + c2³·X² the operator acts on the basis
//! {ω, Xω, …, X^(g−1)ω} of holomorphic differentials by
//! X^(3t+r)·ω ↦ X^t·c_(2−r)·ω, which is all the linear algebra needs.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::heights::{mu1, TripleVec};
use crate::linalg::Matrix;
use crate::poly::Poly;

/// The triple (c0, c1, c2) with f = c0³ + c1³·X + c2³·X².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeParts {
    pub c: [Poly; 3],
}

impl CubeParts {
    pub fn c0(&self) -> &Poly {
        &self.c[0]
    }

    pub fn c1(&self) -> &Poly {
        &self.c[1]
    }

    pub fn c2(&self) -> &Poly {
        &self.c[2]
    }

    /// Monic gcd of the three parts.
    pub fn gcd(&self, f: &FieldSpec) -> Poly {
        self.c[0].gcd(&self.c[1], f).gcd(&self.c[2], f)
    }

    pub fn recompose(&self, f: &FieldSpec) -> Poly {
        let mut out = Poly::zero();
        for (i, c) in self.c.iter().enumerate() {
            out = out.add(&frobenius(c, f).shift(i), f);
        }
        out
    }
}

/// c ↦ c³ over a field of characteristic 3: cube each coefficient and spread
/// the exponents.
pub fn frobenius(c: &Poly, f: &FieldSpec) -> Poly {
    let p = f.p() as usize;
    let mut coeffs = vec![FieldElement::ZERO; c.coeffs().len().saturating_sub(1) * p + 1];
    for (j, &a) in c.coeffs().iter().enumerate() {
        coeffs[j * p] = f.pow(a, p as u64);
    }
    Poly::new(coeffs)
}

fn require_char3(f: &FieldSpec, what: &'static str) -> Result<()> {
    if f.p() == 3 {
        Ok(())
    } else {
        Err(Error::CharacteristicThreeRequired(what))
    }
}

/// Splits the coefficients of f by index mod 3 and takes cube roots.
pub fn cube_parts(poly: &Poly, f: &FieldSpec) -> Result<CubeParts> {
    require_char3(f, "cube-part decomposition")?;
    let mut parts: [Vec<FieldElement>; 3] = Default::default();
    for (i, &a) in poly.coeffs().iter().enumerate() {
        let v = &mut parts[i % 3];
        v.resize(i / 3, FieldElement::ZERO);
        v.push(f.pth_root(a));
    }
    let [c0, c1, c2] = parts;
    let cp = CubeParts {
        c: [Poly::new(c0), Poly::new(c1), Poly::new(c2)],
    };
    assert_eq!(cp.recompose(f), *poly, "cube parts failed to recompose");
    Ok(cp)
}

/// (g, ε) with deg f = 2g + ε and ε ∈ {1, 2}.
pub fn genus_epsilon(degree: usize) -> Option<(usize, u8)> {
    match degree {
        0 => None,
        d if d % 2 == 1 => Some(((d - 1) / 2, 1)),
        d => Some(((d - 2) / 2, 2)),
    }
}

/// Validates deg f against g and cubefreeness; returns (ε, cube parts).
fn prepare(poly: &Poly, g: usize, f: &FieldSpec) -> Result<(u8, CubeParts)> {
    require_char3(f, "the Cartier operator")?;
    let degree = poly.degree().ok_or(Error::ZeroPolynomial)?;
    let eps = match degree.checked_sub(2 * g) {
        Some(1) => 1,
        Some(2) => 2,
        _ => return Err(Error::DegreeMismatch { degree, genus: g }),
    };
    let parts = cube_parts(poly, f)?;
    if !parts.gcd(f).is_one() {
        return Err(Error::NotCubefree);
    }
    Ok((eps, parts))
}

/// Matrix of the Cartier operator on {ω, Xω, …, X^(g−1)ω}; column j holds the
/// image of X^j·ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierMatrix {
    pub g: usize,
    pub entries: Matrix,
}

impl CartierMatrix {
    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.entries.rank(f)
    }

    /// Image of X^j·ω as a polynomial multiplier of ω.
    pub fn image(&self, j: usize) -> Poly {
        Poly::new(self.entries.column(j))
    }
}

fn build_matrix(parts: &CubeParts, g: usize) -> Matrix {
    let mut m = Matrix::zeros(g, g);
    for j in 0..g {
        let (t, r) = (j / 3, j % 3);
        let img = &parts.c[2 - r];
        for (i, &c) in img.coeffs().iter().enumerate() {
            assert!(
                t + i < g || c.is_zero(),
                "Cartier image of X^{j}ω leaves the space of holomorphic differentials"
            );
            if t + i < g {
                m.set(t + i, j, c);
            }
        }
    }
    m
}

pub fn cartier_matrix(poly: &Poly, g: usize, f: &FieldSpec) -> Result<CartierMatrix> {
    let (_, parts) = prepare(poly, g, f)?;
    Ok(CartierMatrix {
        g,
        entries: build_matrix(&parts, g),
    })
}

/// Kernel dimension of the Cartier operator; 0 for genus 0.
pub fn a_number_kernel(poly: &Poly, g: usize, f: &FieldSpec) -> Result<usize> {
    let (_, parts) = prepare(poly, g, f)?;
    Ok(kernel_from_parts(&parts, g, f))
}

pub(crate) fn kernel_from_parts(parts: &CubeParts, g: usize, f: &FieldSpec) -> usize {
    if g == 0 {
        return 0;
    }
    g - build_matrix(parts, g).rank(f)
}

/// Number of free coefficients of (c2(Q), c1(Q), c0(Q)) when deg Q ≤ g − 1.
fn fundeq_sizes(g: usize) -> [usize; 3] {
    let n = |shift: usize| if g >= shift { (g - shift) / 3 + 1 } else { 0 };
    [n(3), n(2), n(1)]
}

/// Nullity of c2(Q)c0(f) + c1(Q)c1(f) + c0(Q)c2(f) = 0 over deg Q ≤ g − 1.
pub fn a_number_fundeq(poly: &Poly, g: usize, f: &FieldSpec) -> Result<usize> {
    let (_, parts) = prepare(poly, g, f)?;
    if g == 0 {
        return Ok(0);
    }
    // unknown blocks: c2(Q) pairs with c0(f), c1(Q) with c1(f), c0(Q) with c2(f)
    let sizes = fundeq_sizes(g);
    let cols: usize = sizes.iter().sum();
    let rows = (0..3)
        .filter_map(|b| {
            let d = parts.c[b].degree()?;
            (sizes[b] > 0).then(|| d + sizes[b])
        })
        .max()
        .unwrap_or(0);
    let mut m = Matrix::zeros(rows, cols);
    let mut offset = 0;
    for b in 0..3 {
        for k in 0..sizes[b] {
            for (i, &c) in parts.c[b].coeffs().iter().enumerate() {
                m.set(i + k, offset + k, c);
            }
        }
        offset += sizes[b];
    }
    Ok(m.nullity(f))
}

/// The exceptional cases in which the height formula loses one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalCase {
    /// g ≡ 1 (mod 3), ε = 2, deg c2(Q) = μ₁.
    OneModThreeEpsTwo,
    /// g ≡ 1 (mod 3), ε = 1, deg c1(Q) = μ₁.
    OneModThreeEpsOne,
    /// g ≡ 2 (mod 3), ε = 1, deg c2(Q) = μ₁.
    TwoModThreeEpsOne,
}

impl fmt::Display for ExceptionalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExceptionalCase::OneModThreeEpsTwo => "g = 1 mod 3, eps = 2, deg c2(Q) = mu1",
            ExceptionalCase::OneModThreeEpsOne => "g = 1 mod 3, eps = 1, deg c1(Q) = mu1",
            ExceptionalCase::TwoModThreeEpsOne => "g = 2 mod 3, eps = 1, deg c2(Q) = mu1",
        })
    }
}

/// Result of the height route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightANumber {
    pub a: usize,
    /// First minimum of the plane orthogonal to (c0, c1, c2); `None` for genus 0.
    pub mu1: Option<usize>,
    pub case: Option<ExceptionalCase>,
    /// The minimal solution was not projectively unique.
    pub ambiguous: bool,
    /// Minimal solution as (c2(Q), c1(Q), c0(Q)).
    pub witness: Option<TripleVec>,
}

/// a = m − μ₁ + 1 with m = ⌊(g−1)/3⌋, minus one in the exceptional cases,
/// and 0 once μ₁ > m.
pub fn a_number_height(poly: &Poly, g: usize, f: &FieldSpec) -> Result<HeightANumber> {
    let (eps, parts) = prepare(poly, g, f)?;
    if g == 0 {
        return Ok(HeightANumber {
            a: 0,
            mu1: None,
            case: None,
            ambiguous: false,
            witness: None,
        });
    }
    let normal = TripleVec::new(parts.c.clone(), f)?;
    let min = mu1(&normal, f);
    let l = min.l;
    let m = (g - 1) / 3;
    let w = min.witness.coords();
    let top = |i: usize| w[i].degree() == Some(l);
    let case = match (g % 3, eps) {
        (1, 2) if top(0) => Some(ExceptionalCase::OneModThreeEpsTwo),
        (1, 1) if top(1) => Some(ExceptionalCase::OneModThreeEpsOne),
        (2, 1) if top(0) => Some(ExceptionalCase::TwoModThreeEpsOne),
        _ => None,
    };
    let a = if l > m {
        0
    } else {
        m - l + 1 - usize::from(case.is_some())
    };
    Ok(HeightANumber {
        a,
        mu1: Some(l),
        case: if l > m { None } else { case },
        ambiguous: min.kernel_dim > 1,
        witness: Some(min.witness),
    })
}

/// The three a-number oracles side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ANumberReport {
    pub g: usize,
    pub epsilon: u8,
    pub a_kernel: usize,
    pub a_fundeq: usize,
    pub a_height: usize,
    pub mu1: Option<usize>,
    pub exceptional_case: Option<ExceptionalCase>,
    /// Set when several projectively distinct minimal solutions exist; the
    /// kernel value is authoritative in that situation.
    pub ambiguous_minimum: bool,
}

impl ANumberReport {
    pub fn consistent(&self) -> bool {
        self.a_kernel == self.a_fundeq && self.a_kernel == self.a_height
    }
}

/// Runs all three oracles on f with g = ⌊(deg f − 1)/2⌋.
pub fn a_number_report(poly: &Poly, f: &FieldSpec) -> Result<ANumberReport> {
    let degree = poly.degree().ok_or(Error::ZeroPolynomial)?;
    let (g, epsilon) = genus_epsilon(degree).ok_or(Error::DegreeMismatch { degree, genus: 0 })?;
    let a_kernel = a_number_kernel(poly, g, f)?;
    let a_fundeq = a_number_fundeq(poly, g, f)?;
    let h = a_number_height(poly, g, f)?;
    debug_assert!(a_kernel <= g);
    Ok(ANumberReport {
        g,
        epsilon,
        a_kernel,
        a_fundeq,
        a_height: h.a,
        mu1: h.mu1,
        exceptional_case: h.case,
        ambiguous_minimum: h.ambiguous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    fn p(f: &FieldSpec, c: &[u32]) -> Poly {
        Poly::from_indices(f, c).unwrap()
    }

    #[test]
    fn elliptic_example() {
        let f = gf3();
        let x3mx = p(&f, &[0, 2, 0, 1]);
        let cp = cube_parts(&x3mx, &f).unwrap();
        assert_eq!(cp.c, [p(&f, &[0, 1]), p(&f, &[2]), Poly::zero()]);
        let m = cartier_matrix(&x3mx, 1, &f).unwrap();
        assert!(m.entries.get(0, 0).is_zero());
        assert_eq!(a_number_kernel(&x3mx, 1, &f).unwrap(), 1);
        assert_eq!(a_number_fundeq(&x3mx, 1, &f).unwrap(), 1);
        let h = a_number_height(&x3mx, 1, &f).unwrap();
        assert_eq!((h.a, h.mu1, h.case), (1, Some(0), None));
        let w = h.witness.unwrap();
        assert_eq!(w.coords(), &[Poly::zero(), Poly::zero(), Poly::one()]);
    }

    #[test]
    fn genus_three_example() {
        let f = gf3();
        // (X^3 - X)(X^2 + X + 2)^2 = X^7+2X^6+X^5+2X^4+2X^3+2X^2+2X
        let poly = p(&f, &[0, 2, 2, 2, 2, 1, 2, 1]);
        let cp = cube_parts(&poly, &f).unwrap();
        assert_eq!(cp.c, [p(&f, &[0, 2, 2]), p(&f, &[2, 2, 1]), p(&f, &[2, 1])]);
        let m = cartier_matrix(&poly, 3, &f).unwrap();
        assert_eq!(m.image(0), p(&f, &[2, 1]));
        assert_eq!(m.image(1), p(&f, &[2, 2, 1]));
        assert_eq!(m.image(2), p(&f, &[0, 2, 2]));
        assert_eq!(m.rank(&f), 2);
        let r = a_number_report(&poly, &f).unwrap();
        assert_eq!((r.a_kernel, r.a_fundeq, r.a_height), (1, 1, 1));
    }

    #[test]
    fn genus_zero_and_errors() {
        let f = gf3();
        assert_eq!(a_number_kernel(&p(&f, &[1, 1]), 0, &f).unwrap(), 0);
        assert_eq!(a_number_kernel(&p(&f, &[1, 0, 1]), 0, &f).unwrap(), 0);
        assert_eq!(
            a_number_kernel(&p(&f, &[0, 0, 0, 1, 1]), 1, &f),
            Err(Error::NotCubefree)
        );
        assert!(matches!(
            a_number_kernel(&p(&f, &[0, 2, 0, 1]), 2, &f),
            Err(Error::DegreeMismatch { .. })
        ));
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert!(matches!(
            cube_parts(&Poly::one(), &f2),
            Err(Error::CharacteristicThreeRequired(_))
        ));
    }

    #[test]
    fn fundeq_block_sizes_sum_to_genus() {
        for g in 0..20 {
            assert_eq!(fundeq_sizes(g).iter().sum::<usize>(), g);
        }
    }
}
