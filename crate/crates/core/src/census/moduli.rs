//! Intrinsic cardinalities of the a-number strata of the hyperelliptic moduli
//! space, weighted by 1/|Aut|.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use super::theorem::Verdict;
use super::CensusTable;
use crate::cartier::a_number_kernel;
use crate::error::{Error, Result};
use crate::exec::{pow_sat, Budget, Executor, DEFAULT_CHUNKS};
use crate::gf::FieldSpec;
use crate::heights::formulas::{int, qpow};
use crate::poly::{chunk_bounds, is_squarefree, Odometer, Poly};
use crate::rational::{big_to_rational, ratio_string};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcEntry {
    /// From the measured μ′ of both ε.
    pub formula: BigRational,
    /// Weighted count over all (not necessarily monic) squarefree f.
    pub direct: BigRational,
    /// Leading-order window, or vanishing above ⌈g/3⌉.
    pub window: Verdict,
    pub window_text: String,
}

impl IcEntry {
    pub fn passed(&self) -> bool {
        self.formula == self.direct && self.window.passed()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcReport {
    pub q: u32,
    pub g: usize,
    pub entries: BTreeMap<usize, IcEntry>,
}

impl IcReport {
    pub fn passed(&self) -> bool {
        self.entries.values().all(IcEntry::passed)
    }

    pub fn to_json(&self) -> Value {
        let mut e = Map::new();
        for (a, x) in &self.entries {
            e.insert(
                a.to_string(),
                json!({
                    "formula": ratio_string(&x.formula),
                    "direct": ratio_string(&x.direct),
                    "agree": x.formula == x.direct,
                    "window": x.window_text,
                    "window_verdict": x.window.to_string(),
                }),
            );
        }
        json!({"q": self.q.to_string(), "g": self.g.to_string(), "entries": e})
    }
}

/// #{f squarefree of degree 2g + ε, any leading coefficient, a(f) = a} per a.
fn direct_counts(f: &FieldSpec, g: usize, epsilon: u8, exec: &Executor, budget: Budget) -> Result<Vec<u64>> {
    let d = 2 * g + epsilon as usize;
    let per_lead = (f.q() as u64).pow(d as u32);
    budget.check(pow_sat(f.q(), d as u32) * (f.q() as u128 - 1))?;
    let chunks = (DEFAULT_CHUNKS as u64).min(per_lead);
    let units: Vec<_> = f.units().collect();
    let parts = exec.map_chunks(chunks as usize, |c| {
        let (lo, hi) = chunk_bounds(per_lead, chunks, c as u64);
        let mut counts = vec![0u64; g + 1];
        if lo == hi {
            return counts;
        }
        let mut odo = Odometer::monic(f, d, lo);
        for _ in lo..hi {
            let monic = odo.current_poly();
            for &alpha in &units {
                let poly: Poly = monic.scale(alpha, f);
                if is_squarefree(&poly, f).expect("nonzero") {
                    counts[a_number_kernel(&poly, g, f).expect("squarefree is cubefree")] += 1;
                }
            }
            odo.advance();
        }
        counts
    });
    let mut out = vec![0u64; g + 1];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    Ok(out)
}

/// IC per a, computed from the squarefree censuses for ε = 1 and ε = 2 and
/// independently as Σ_ε #{f : a(f) = a} / ((q − 1)(q³ − q)).
pub fn intrinsic_cardinality(
    f: &FieldSpec,
    sq1: &CensusTable,
    sq2: &CensusTable,
    exec: &Executor,
    budget: Budget,
) -> Result<IcReport> {
    let (k1, k2) = (sq1.key, sq2.key);
    if !k1.squarefree
        || !k2.squarefree
        || k1.epsilon != 1
        || k2.epsilon != 2
        || k1.g != k2.g
        || k1.q != f.q()
        || k2.q != f.q()
    {
        return Err(Error::InvalidArgument(
            "intrinsic cardinality needs the squarefree censuses for eps = 1 and 2 at one (q, g)".into(),
        ));
    }
    let g = k1.g;
    if g == 0 {
        return Err(Error::InvalidArgument(
            "intrinsic cardinality is defined for g ≥ 1".into(),
        ));
    }
    let q = f.q();
    let qi = qpow(q, -1);
    let one = BigRational::one();
    let gi = g as i64;
    let d1 = direct_counts(f, g, 1, exec, budget)?;
    let d2 = direct_counts(f, g, 2, exec, budget)?;
    let group = int(q as i64 - 1) * (int(q as i64).pow(3) - int(q as i64));
    let top = g.div_ceil(3);

    let mut entries = BTreeMap::new();
    for a in 0..=g {
        let formula = qpow(q, 2 * gi - 1) / (&one + &qi) * (&qi * sq1.probability(a) + sq2.probability(a));
        let direct = big_to_rational(&BigUint::from(d1[a] + d2[a])) / &group;
        let ai = a as i64;
        let (window, window_text) = if a > top {
            (
                if formula.is_zero() {
                    Verdict::Equal
                } else {
                    Verdict::Violated
                },
                "a > ⌈g/3⌉: IC = 0".to_string(),
            )
        } else {
            let (lo_e, hi_e) = if a == 0 {
                (2 * gi - 2, 2 * gi - 1)
            } else {
                (2 * gi - 2 * ai - 1, 2 * gi - 2 * ai)
            };
            let lo = qpow(q, lo_e);
            let hi = int(2) * qpow(q, hi_e);
            let ok = lo < formula && formula <= hi;
            (
                if ok { Verdict::Holds } else { Verdict::Violated },
                format!("q^{lo_e} < IC ≤ 2q^{hi_e}"),
            )
        };
        entries.insert(
            a,
            IcEntry {
                formula,
                direct,
                window,
                window_text,
            },
        );
    }
    Ok(IcReport { q, g, entries })
}
