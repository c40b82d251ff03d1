use num_bigint::BigUint;

use super::formulas;
use super::{CountReport, TripleVec};
use crate::error::{Error, Result};
use crate::exec::{pow_sat, Budget};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::Matrix;
use crate::poly::{raw, Odometer};

/// Coefficient table of every polynomial of degree ≤ k (odometer order).
pub(crate) fn poly_table(f: &FieldSpec, k: usize) -> Vec<Vec<FieldElement>> {
    let mut odo = Odometer::all_below(f, k + 1, 0);
    let mut out = Vec::with_capacity(odo.remaining() as usize);
    loop {
        out.push(odo.current().to_vec());
        if !odo.advance() {
            break;
        }
    }
    out
}

/// True when the first coordinate of degree `k` is monic.
fn normalized_at(tuple: &[&[FieldElement]], k: usize) -> bool {
    tuple
        .iter()
        .find(|c| raw::degree(c) == Some(k))
        .is_some_and(|c| c[k] == FieldElement::ONE)
}

/// Number of lines in F^n of height k, counted as coprime n-tuples of maximal
/// degree k whose first coordinate of degree k is monic.
pub fn count_lines(f: &FieldSpec, n: usize, k: usize, budget: Budget) -> Result<CountReport> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "line counts support n in {{2,3}}, got {n}"
        )));
    }
    budget.check(pow_sat(f.q(), (n * (k + 1)) as u32))?;
    let table = poly_table(f, k);
    let size = table.len();
    let (mut x, mut y, mut g) = (Vec::new(), Vec::new(), Vec::new());
    let mut count: u64 = 0;
    let mut idx = vec![0usize; n];
    'outer: loop {
        let tuple: Vec<&[FieldElement]> = idx.iter().map(|&i| table[i].as_slice()).collect();
        if tuple.iter().any(|c| raw::degree(c) == Some(k)) && normalized_at(&tuple, k) {
            let coprime = if n == 2 {
                raw::coprime(tuple[0], tuple[1], &mut x, &mut y, f)
            } else {
                match raw::gcd_into(tuple[0], tuple[1], &mut x, &mut y, &mut g, f) {
                    None => raw::degree(tuple[2]) == Some(0),
                    Some(0) => true,
                    Some(_) => {
                        let g2 = g.clone();
                        raw::coprime(&g2, tuple[2], &mut x, &mut y, f)
                    }
                }
            };
            if coprime {
                count += 1;
            }
        }
        for d in idx.iter_mut() {
            *d += 1;
            if *d < size {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    Ok(CountReport::new(
        format!("N_F{n}({k})"),
        BigUint::from(count),
        formulas::lines(f.q(), n as u32, k as u32),
    ))
}

/// Number of planes V ⊃ W with h(V) = h(W) + k, counted as normalized coprime
/// normals A with A·W = 0 and h(A) = h(W) + k.
pub fn count_planes_over_line(w: &TripleVec, k: usize, f: &FieldSpec, budget: Budget) -> Result<CountReport> {
    if k == 0 {
        return Err(Error::Regime("plane counts over a line need k >= 1".into()));
    }
    let l = w.height();
    let d = l + k;
    let width = d + 1;
    let rows = d + l + 1;
    // A·W = 0 as a linear system in the coefficients of A (degree ≤ d)
    let mut m = Matrix::zeros(rows, 3 * width);
    for i in 0..3 {
        for (t, &c) in w.coords()[i].coeffs().iter().enumerate() {
            for j in 0..width {
                m.set(t + j, i * width + j, c);
            }
        }
    }
    let basis = m.kernel(f);
    budget.check(pow_sat(f.q(), basis.len() as u32))?;
    let mut odo = Odometer::all_below(f, basis.len(), 0);
    let (mut x, mut y, mut g) = (Vec::new(), Vec::new(), Vec::new());
    let mut v = vec![FieldElement::ZERO; 3 * width];
    let mut count: u64 = 0;
    loop {
        v.iter_mut().for_each(|c| *c = FieldElement::ZERO);
        for (coef, b) in odo.current().iter().zip(&basis) {
            if coef.is_zero() {
                continue;
            }
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = f.add(*vi, f.mul(*coef, bi));
            }
        }
        let tuple = [&v[..width], &v[width..2 * width], &v[2 * width..]];
        if tuple.iter().any(|c| raw::degree(c) == Some(d)) && normalized_at(&tuple, d) {
            let coprime = match raw::gcd_into(tuple[0], tuple[1], &mut x, &mut y, &mut g, f) {
                None => raw::degree(tuple[2]) == Some(0),
                Some(0) => true,
                Some(_) => {
                    let g2 = g.clone();
                    raw::coprime(&g2, tuple[2], &mut x, &mut y, f)
                }
            };
            if coprime {
                count += 1;
            }
        }
        if !odo.advance() {
            break;
        }
    }
    Ok(CountReport::new(
        format!("N_F3/W({k}) for W = {}", w.to_text()),
        BigUint::from(count),
        formulas::planes_over_line(f.q(), l as u32, k as u32),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn lines_small() {
        let f = FieldSpec::new(2, 1).unwrap();
        let r0 = count_lines(&f, 3, 0, Budget::DEFAULT).unwrap();
        assert_eq!(r0.measured, BigUint::from(7u32));
        assert!(r0.matches);
        let r1 = count_lines(&f, 3, 1, Budget::DEFAULT).unwrap();
        assert_eq!(r1.measured, BigUint::from(42u32));
        assert!(r1.matches);
        assert!(count_lines(&f, 4, 1, Budget::DEFAULT).is_err());
    }

    #[test]
    fn planes_over_coordinate_line() {
        let f = FieldSpec::new(2, 1).unwrap();
        let w = TripleVec::new([Poly::one(), Poly::zero(), Poly::zero()], &f).unwrap();
        let r = count_planes_over_line(&w, 1, &f, Budget::DEFAULT).unwrap();
        assert_eq!(r.measured, BigUint::from(6u32));
        assert!(r.matches);
        let w1 = TripleVec::new([Poly::x(), Poly::one(), Poly::zero()], &f).unwrap();
        let r = count_planes_over_line(&w1, 1, &f, Budget::DEFAULT).unwrap();
        assert_eq!(r.measured, BigUint::from(12u32));
    }
}
