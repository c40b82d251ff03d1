//! Dense univariate polynomials over a [`FieldSpec`].

use crate::cartier::cube_parts;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Coefficients low-to-high; the last stored coefficient is nonzero. The zero
/// polynomial stores nothing and has degree `None` (standing in for −∞).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FieldElement::ONE)
    }

    pub fn x() -> Self {
        Poly::monomial(FieldElement::ONE, 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: FieldElement, d: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; d + 1];
        coeffs[d] = c;
        Poly::new(coeffs)
    }

    /// Builds a polynomial from low-to-high coefficients, dropping trailing zeros.
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    /// Convenience constructor from packed element indices (see [`FieldSpec::element`]).
    pub fn from_indices(spec: &FieldSpec, idx: &[u32]) -> Result<Self> {
        let coeffs = idx
            .iter()
            .map(|&i| {
                spec.element(i)
                    .ok_or_else(|| Error::InvalidArgument(format!("{i} is not an element of GF({})", spec.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElement::ONE)
    }

    pub fn add(&self, other: &Poly, f: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self, f: &FieldSpec) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly, f: &FieldSpec) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: FieldElement, f: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by X^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Poly, f: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u32, f: &FieldSpec) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder with deg(rem) < deg(b).
    pub fn div_rem(&self, b: &Poly, f: &FieldSpec) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if da < db {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = f.inv_nonzero(b.coeffs[db]);
        let mut q = vec![FieldElement::ZERO; da - db + 1];
        for i in (db..=da).rev() {
            let c = f.mul(r[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[i - db] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                r[i - db + j] = f.sub(r[i - db + j], f.mul(c, bj));
            }
        }
        r.truncate(db);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, b: &Poly, f: &FieldSpec) -> Result<Poly> {
        Ok(self.div_rem(b, f)?.1)
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self, f: &FieldSpec) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(c) => self.scale(f.inv_nonzero(c), f),
        }
    }

    /// Monic generator of (a, b); gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly, f: &FieldSpec) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        a.monic(f)
    }

    /// Formal derivative; exponents divisible by p vanish.
    pub fn derivative(&self, f: &FieldSpec) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| f.mul(c, f.from_int((i + 1) as i64)))
            .collect();
        Poly::new(coeffs)
    }

    /// Evaluation by Horner's rule.
    pub fn eval(&self, x: FieldElement, f: &FieldSpec) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Canonical text form: coefficients low-to-high as packed integers,
    /// comma-separated; the zero polynomial is "0".
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.index().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`Poly::to_text`]. Rejects trailing zeros so the text form is
    /// canonical.
    pub fn parse(text: &str, spec: &FieldSpec) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: text.to_string(),
            reason,
        };
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(Poly::zero());
        }
        if trimmed.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut coeffs = Vec::new();
        for part in trimmed.split(',') {
            let v: u32 = part
                .trim()
                .parse()
                .map_err(|e| err(format!("coefficient {part:?}: {e}")))?;
            let c = spec
                .element(v)
                .ok_or_else(|| err(format!("coefficient {v} is outside GF({})", spec.q())))?;
            coeffs.push(c);
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(err("leading coefficient is zero".into()));
        }
        Ok(Poly { coeffs })
    }

    /// Human-readable rendering such as `X^3 + 2X`, with coefficients as packed integers.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if *c == FieldElement::ONE && i > 0 {
                String::new()
            } else {
                c.index().to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}X"),
                _ => format!("{coef}X^{i}"),
            });
        }
        terms.join(" + ")
    }
}

pub(crate) fn trim(v: &mut Vec<FieldElement>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// True iff f has no repeated irreducible factor.
pub fn is_squarefree(f: &Poly, spec: &FieldSpec) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.derivative(spec);
    if d.is_zero() {
        // a p-th power in a perfect field
        return Ok(f.degree() == Some(0));
    }
    Ok(f.gcd(&d, spec).is_one())
}

/// True iff no irreducible cube divides f, decided by gcd(c0, c1, c2) = 1.
pub fn is_cubefree(f: &Poly, spec: &FieldSpec) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let parts = cube_parts(f, spec)?;
    Ok(parts.gcd(spec).is_one())
}

/// The unique factorization f = f1·f2² with f1, f2 monic, squarefree and coprime.
pub fn squarefree_decompose(f: &Poly, spec: &FieldSpec) -> Result<(Poly, Poly)> {
    if !f.is_monic() {
        return Err(Error::InvalidArgument(
            "squarefree decomposition expects a monic polynomial".into(),
        ));
    }
    if !is_cubefree(f, spec)? {
        return Err(Error::NotCubefree);
    }
    // For cubefree f = f1 f2^2 in characteristic 3, f' = f2 (f1' f2 + 2 f1 f2'),
    // and the second factor shares no prime with f1 f2, so gcd(f, f') = f2.
    let d = f.derivative(spec);
    let f2 = if d.is_zero() { Poly::one() } else { f.gcd(&d, spec) };
    let (f1, r) = f.div_rem(&f2.mul(&f2, spec), spec)?;
    assert!(r.is_zero(), "square part does not divide f");
    assert_eq!(
        f1.mul(&f2, spec).mul(&f2, spec),
        *f,
        "squarefree decomposition failed to recompose"
    );
    Ok((f1, f2))
}

/// Odometer over polynomials of a fixed shape, low-degree coefficients varying
/// fastest. Index i corresponds to the base-q digits of i read as coefficients.
///
/// `monic_degree = Some(d)` walks the q^d monic polynomials of degree d;
/// `None` with `len` walks all q^len polynomials of degree < len (zero first).
#[derive(Clone, Debug)]
pub struct Odometer {
    q: u32,
    free: usize,
    digits: Vec<FieldElement>,
    remaining: u64,
}

impl Odometer {
    /// Monic polynomials of degree d, starting at position `start`.
    pub fn monic(spec: &FieldSpec, d: usize, start: u64) -> Self {
        let mut digits = vec![FieldElement::ZERO; d + 1];
        digits[d] = FieldElement::ONE;
        Self::build(spec.q(), d, digits, start)
    }

    /// All polynomials of degree < len, starting at position `start`.
    pub fn all_below(spec: &FieldSpec, len: usize, start: u64) -> Self {
        Self::build(spec.q(), len, vec![FieldElement::ZERO; len], start)
    }

    fn build(q: u32, free: usize, mut digits: Vec<FieldElement>, start: u64) -> Self {
        let total = (q as u64).pow(free as u32);
        let mut v = start;
        for d in digits.iter_mut().take(free) {
            *d = FieldElement::from_index((v % q as u64) as u32);
            v /= q as u64;
        }
        Odometer {
            q,
            free,
            digits,
            remaining: total.saturating_sub(start),
        }
    }

    /// Number of positions the odometer still has to visit, including the current one.
    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Current coefficients (untrimmed for the non-monic walk).
    #[inline]
    pub fn current(&self) -> &[FieldElement] {
        &self.digits
    }

    pub fn current_poly(&self) -> Poly {
        Poly::new(self.digits.clone())
    }

    /// Moves to the next position; returns false once exhausted.
    #[inline]
    pub fn advance(&mut self) -> bool {
        if self.remaining <= 1 {
            self.remaining = 0;
            return false;
        }
        self.remaining -= 1;
        for d in self.digits.iter_mut().take(self.free) {
            let next = d.index() + 1;
            if next < self.q {
                *d = FieldElement::from_index(next);
                return true;
            }
            *d = FieldElement::ZERO;
        }
        true
    }

    /// Returns true iff no positions remain.
    pub fn is_done(&self) -> bool {
        self.remaining == 0
    }
}

/// Iterator over the monic polynomials of degree d, in odometer order.
pub struct MonicIter {
    odo: Odometer,
    started: bool,
    end: u64,
    pos: u64,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.started {
            if !self.odo.advance() {
                return None;
            }
            self.pos += 1;
        }
        self.started = true;
        if self.pos >= self.end || self.odo.is_done() {
            return None;
        }
        Some(self.odo.current_poly())
    }
}

/// All q^d monic polynomials of degree d.
pub fn enumerate_monic(spec: &FieldSpec, d: usize) -> MonicIter {
    let total = (spec.q() as u64).pow(d as u32);
    enumerate_monic_range(spec, d, 0, total)
}

/// Positions [start, end) of [`enumerate_monic`].
pub fn enumerate_monic_range(spec: &FieldSpec, d: usize, start: u64, end: u64) -> MonicIter {
    MonicIter {
        odo: Odometer::monic(spec, d, start),
        started: false,
        end,
        pos: start,
    }
}

/// Splits [0, total) into `n` contiguous chunks whose sizes differ by at most one.
pub fn chunk_bounds(total: u64, n: u64, idx: u64) -> (u64, u64) {
    let n = n.max(1);
    let base = total / n;
    let extra = total % n;
    let start = idx * base + idx.min(extra);
    let len = base + u64::from(idx < extra);
    (start, start + len)
}

/// Chunk `idx` of `n` from the monic enumeration of degree d.
pub fn enumerate_monic_chunk(spec: &FieldSpec, d: usize, n: u64, idx: u64) -> MonicIter {
    let total = (spec.q() as u64).pow(d as u32);
    let (s, e) = chunk_bounds(total, n, idx);
    enumerate_monic_range(spec, d, s, e)
}

/// Allocation-free helpers on coefficient slices for the enumeration hot paths.
/// Slices may carry trailing zeros; degree is computed on the fly.
pub(crate) mod raw {
    use crate::gf::{FieldElement, FieldSpec};

    #[inline]
    pub fn degree(a: &[FieldElement]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    /// a <- a mod b, in place; returns the degree of the remainder. b must be nonzero.
    #[inline]
    pub fn rem_in_place(
        a: &mut [FieldElement],
        da: Option<usize>,
        b: &[FieldElement],
        db: usize,
        f: &FieldSpec,
    ) -> Option<usize> {
        let mut da = da?;
        if da < db {
            return Some(da);
        }
        let lead_inv = f.inv_nonzero(b[db]);
        loop {
            let c = f.mul(a[da], lead_inv);
            let shift = da - db;
            if !c.is_zero() {
                for j in 0..=db {
                    a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
                }
            }
            // a[da] is now zero
            {
                let nd = (0..da).rev().find(|&i| !a[i].is_zero())?;
                da = nd;
                if da < db {
                    return Some(da);
                }
            }
        }
    }

    /// Monic gcd of a and b written into `out` (cleared first); uses the two
    /// scratch buffers. Returns its degree, None for gcd(0, 0).
    pub fn gcd_into(
        a: &[FieldElement],
        b: &[FieldElement],
        x: &mut Vec<FieldElement>,
        y: &mut Vec<FieldElement>,
        out: &mut Vec<FieldElement>,
        f: &FieldSpec,
    ) -> Option<usize> {
        x.clear();
        x.extend_from_slice(a);
        y.clear();
        y.extend_from_slice(b);
        let mut dx = degree(x);
        let mut dy = degree(y);
        while let Some(d) = dy {
            dx = rem_in_place(x, dx, y, d, f);
            std::mem::swap(x, y);
            std::mem::swap(&mut dx, &mut dy);
        }
        out.clear();
        let d = dx?;
        let inv = f.inv_nonzero(x[d]);
        out.extend(x[..=d].iter().map(|&c| f.mul(c, inv)));
        Some(d)
    }

    /// True iff gcd(a, b) is a nonzero constant.
    #[inline]
    pub fn coprime(
        a: &[FieldElement],
        b: &[FieldElement],
        x: &mut Vec<FieldElement>,
        y: &mut Vec<FieldElement>,
        f: &FieldSpec,
    ) -> bool {
        x.clear();
        x.extend_from_slice(a);
        y.clear();
        y.extend_from_slice(b);
        let mut dx = degree(x);
        let mut dy = degree(y);
        while let Some(d) = dy {
            if d == 0 {
                return true;
            }
            dx = rem_in_place(x, dx, y, d, f);
            std::mem::swap(x, y);
            std::mem::swap(&mut dx, &mut dy);
        }
        dx == Some(0)
    }

    /// Formal derivative into `out`.
    pub fn derivative_into(a: &[FieldElement], out: &mut Vec<FieldElement>, f: &FieldSpec) {
        out.clear();
        let p = f.p() as usize;
        for (i, &c) in a.iter().enumerate().skip(1) {
            let k = i % p;
            out.push(if k == 0 {
                FieldElement::ZERO
            } else {
                f.mul(c, f.from_int(k as i64))
            });
        }
    }

    /// True iff the nonzero polynomial a is squarefree.
    pub fn is_squarefree(
        a: &[FieldElement],
        d: &mut Vec<FieldElement>,
        x: &mut Vec<FieldElement>,
        y: &mut Vec<FieldElement>,
        f: &FieldSpec,
    ) -> bool {
        derivative_into(a, d, f);
        if degree(d).is_none() {
            return degree(a) == Some(0);
        }
        coprime(a, d, x, y, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> FieldSpec {
        FieldSpec::new(3, 1).unwrap()
    }

    fn p(spec: &FieldSpec, c: &[u32]) -> Poly {
        Poly::from_indices(spec, c).unwrap()
    }

    #[test]
    fn char3_product_cancels_middle_term() {
        let f = gf3();
        let a = p(&f, &[1, 0, 1]);
        let b = p(&f, &[2, 0, 1]);
        assert_eq!(a.mul(&b, &f), p(&f, &[2, 0, 0, 0, 1]));
    }

    #[test]
    fn gcd_with_unit_derivative() {
        let f = gf3();
        let a = p(&f, &[0, 2, 0, 1]);
        let d = a.derivative(&f);
        assert_eq!(d, p(&f, &[2]));
        assert!(a.gcd(&d, &f).is_one());
        assert!(Poly::zero().gcd(&Poly::zero(), &f).is_zero());
    }

    #[test]
    fn div_rem_multiplies_back() {
        let f = gf3();
        let a = p(&f, &[0, 1, 0, 0, 0, 1]);
        let b = p(&f, &[1, 0, 1]);
        let (q, r) = a.div_rem(&b, &f).unwrap();
        assert!(r.degree().is_none_or(|d| d < 2));
        assert_eq!(b.mul(&q, &f).add(&r, &f), a);
        assert_eq!(a.div_rem(&Poly::zero(), &f), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        let f = gf3();
        assert!(p(&f, &[0, 0, 0, 1]).derivative(&f).is_zero());
        assert_eq!(p(&f, &[0, 0, 1, 0, 1]).derivative(&f), p(&f, &[0, 2, 0, 1]));
    }

    #[test]
    fn squarefree_and_cubefree_examples() {
        let f = gf3();
        let x3mx = p(&f, &[0, 2, 0, 1]);
        let q = p(&f, &[2, 1, 1]);
        let g = x3mx.mul(&q, &f).mul(&q, &f);
        assert!(is_squarefree(&x3mx, &f).unwrap());
        assert!(!is_squarefree(&g, &f).unwrap());
        assert!(!is_squarefree(&p(&f, &[0, 0, 0, 1]), &f).unwrap());
        assert!(is_cubefree(&g, &f).unwrap());
        assert!(!is_cubefree(&p(&f, &[0, 0, 0, 1, 1]), &f).unwrap());
        assert_eq!(is_squarefree(&Poly::zero(), &f), Err(Error::ZeroPolynomial));
        assert_eq!(squarefree_decompose(&g, &f).unwrap(), (x3mx.clone(), q));
        assert_eq!(squarefree_decompose(&x3mx, &f).unwrap(), (x3mx, Poly::one()));
    }

    #[test]
    fn cubefree_needs_char_three() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert!(matches!(
            is_cubefree(&Poly::x(), &f),
            Err(Error::CharacteristicThreeRequired(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let f = gf3();
        let a = p(&f, &[0, 2, 0, 1]);
        assert_eq!(a.to_text(), "0,2,0,1");
        assert_eq!(Poly::parse("0,2,0,1", &f).unwrap(), a);
        assert_eq!(Poly::parse("0", &f).unwrap(), Poly::zero());
        assert!(Poly::parse("1,0", &f).is_err());
        assert!(Poly::parse("1,3", &f).is_err());
        assert!(Poly::parse("", &f).is_err());
        let f9 = FieldSpec::new(3, 2).unwrap();
        let b = p(&f9, &[8, 0, 5, 1]);
        assert_eq!(Poly::parse(&b.to_text(), &f9).unwrap(), b);
    }

    #[test]
    fn monic_enumeration_counts_and_chunks() {
        let f = gf3();
        assert_eq!(enumerate_monic(&f, 0).collect::<Vec<_>>(), vec![Poly::one()]);
        assert_eq!(enumerate_monic(&f, 3).count(), 27);
        let f9 = FieldSpec::new(3, 2).unwrap();
        let all: Vec<_> = enumerate_monic(&f9, 2).collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 81);
        let chunked: Vec<_> = (0..7).flat_map(|i| enumerate_monic_chunk(&f9, 2, 7, i)).collect();
        assert_eq!(chunked, all);
    }

    #[test]
    fn raw_helpers_match_poly_ops() {
        let f = FieldSpec::new(3, 2).unwrap();
        let (mut x, mut y, mut out, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let polys: Vec<Poly> = (0..3).flat_map(|k| enumerate_monic(&f, k)).take(60).collect();
        for a in &polys {
            for b in polys.iter().step_by(3) {
                let g = a.gcd(b, &f);
                raw::gcd_into(a.coeffs(), b.coeffs(), &mut x, &mut y, &mut out, &f);
                assert_eq!(Poly::new(out.clone()), g);
                assert_eq!(raw::coprime(a.coeffs(), b.coeffs(), &mut x, &mut y, &f), g.is_one());
            }
            assert_eq!(
                raw::is_squarefree(a.coeffs(), &mut d, &mut x, &mut y, &f),
                is_squarefree(a, &f).unwrap()
            );
        }
    }
}
