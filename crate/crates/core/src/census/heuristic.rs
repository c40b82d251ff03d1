//! The random-subspace model: ν_j(a) = |S(2j, j − a)| / |S(2j)|.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use super::theorem::Verdict;
use crate::error::Result;
use crate::heights::formulas::qpow;
use crate::heights::HeightCounter;
use crate::rational::{big_to_rational, ratio_string};

/// The closed form for ν_j(a).
pub fn nu_closed_form(q: u32, j: usize, a: usize) -> BigRational {
    let base = qpow(q, -2 * a as i64);
    let qr = qpow(q, 1);
    if j == 0 {
        return if a == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
    }
    if a > j {
        BigRational::zero()
    } else if a == j {
        base * qr
    } else if a > 0 {
        base * (&qr - qpow(q, -1))
    } else {
        base * (BigRational::one() - qpow(q, -1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuReport {
    pub q: u32,
    pub j: usize,
    /// a ↦ (measured, closed form, verdict) for 0 ≤ a ≤ j + 1.
    pub values: BTreeMap<usize, (BigRational, BigRational, Verdict)>,
}

impl NuReport {
    pub fn passed(&self) -> bool {
        self.values.values().all(|(_, _, v)| v.passed())
    }

    pub fn to_json(&self) -> Value {
        let mut vals = Map::new();
        for (a, (m, e, v)) in &self.values {
            vals.insert(
                a.to_string(),
                json!({"measured": ratio_string(m), "expected": ratio_string(e), "verdict": v.to_string()}),
            );
        }
        json!({"q": self.q.to_string(), "j": self.j.to_string(), "values": vals})
    }
}

/// Measures ν_j(a) from the class counts of height-2j subspaces. The a = j + 1
/// entry checks that no first minimum falls below zero.
pub fn heuristic_nu(counter: &mut HeightCounter<'_>, j: usize) -> Result<NuReport> {
    let q = counter.field().q();
    let m = 2 * j;
    let hist = counter.histogram(m as u32)?;
    let all = BigUint::from(hist.classes(|_, _, _| true));
    let mut values = BTreeMap::new();
    for a in 0..=j + 1 {
        let hits = if a <= j {
            hist.classes(|_, mu, _| mu == j - a)
        } else {
            0
        };
        let measured = big_to_rational(&BigUint::from(hits)) / big_to_rational(&all);
        let expected = nu_closed_form(q, j, a);
        let verdict = if measured == expected {
            Verdict::Equal
        } else {
            Verdict::Violated
        };
        values.insert(a, (measured, expected, verdict));
    }
    Ok(NuReport { q, j, values })
}
