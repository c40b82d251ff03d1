//! Exhaustive a-number distributions over monic cubefree and squarefree f of
//! degree 2g + ε, and their comparison with the exact closed forms.

mod cardinality;
mod heuristic;
mod moduli;
mod theorem;

pub use cardinality::{
    count_cubefree_grouped, count_squarefree_direct, count_squarefree_grouped, expected_cardinality, CardinalityReport,
};
pub use heuristic::{heuristic_nu, nu_closed_form, NuReport};
pub use moduli::{intrinsic_cardinality, IcEntry, IcReport};
pub use theorem::{
    conjecture_report, distribution_closed_form, verify_cubefree_distribution, verify_squarefree_consequences,
    ConjectureRow, TheoremComparison, Verdict,
};

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exec::{pow_sat, Budget, Executor, DEFAULT_CHUNKS};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::rref_in_place;
use crate::poly::{chunk_bounds, raw, Odometer, Poly};
use crate::rational::{ratio, ratio_string};

/// Which parameterizing set a census runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CensusKey {
    pub q: u32,
    pub g: usize,
    pub epsilon: u8,
    pub squarefree: bool,
}

impl CensusKey {
    pub fn degree(&self) -> usize {
        2 * self.g + self.epsilon as usize
    }

    pub fn label(&self) -> String {
        format!(
            "q={} g={} eps={} {}",
            self.q,
            self.g,
            self.epsilon,
            if self.squarefree { "squarefree" } else { "cubefree" }
        )
    }
}

/// Exact counts of a-numbers over one parameterizing set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusTable {
    pub key: CensusKey,
    /// a ↦ number of f; every a in 0..=g is present.
    pub counts: BTreeMap<usize, u64>,
    pub total: u64,
    /// First f in enumeration order with each attained a.
    pub witnesses: BTreeMap<usize, Poly>,
}

impl CensusTable {
    pub fn count(&self, a: usize) -> u64 {
        self.counts.get(&a).copied().unwrap_or(0)
    }

    /// count(a)/total as an exact rational (0 for an empty table).
    pub fn probability(&self, a: usize) -> BigRational {
        if self.total == 0 {
            return ratio(0, 1);
        }
        ratio(self.count(a), self.total)
    }

    pub fn probabilities(&self) -> BTreeMap<usize, BigRational> {
        self.counts.keys().map(|&a| (a, self.probability(a))).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut counts = Map::new();
        let mut probs = Map::new();
        for (&a, &c) in &self.counts {
            counts.insert(a.to_string(), Value::String(c.to_string()));
            probs.insert(a.to_string(), Value::String(ratio_string(&self.probability(a))));
        }
        json!({
            "q": self.key.q.to_string(),
            "g": self.key.g.to_string(),
            "epsilon": self.key.epsilon.to_string(),
            "squarefree": self.key.squarefree,
            "counts": counts,
            "total": self.total.to_string(),
            "probabilities": probs,
        })
    }

    pub const CSV_HEADER: &'static str = "q,g,epsilon,squarefree,a,count,total,probability";

    /// Data rows (no header), one per a.
    pub fn csv_rows(&self) -> Vec<String> {
        self.counts
            .iter()
            .map(|(&a, &c)| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    self.key.q,
                    self.key.g,
                    self.key.epsilon,
                    self.key.squarefree,
                    a,
                    c,
                    self.total,
                    ratio_string(&self.probability(a))
                )
            })
            .collect()
    }
}

struct Buffers {
    c: [Vec<FieldElement>; 3],
    x: Vec<FieldElement>,
    y: Vec<FieldElement>,
    g: Vec<FieldElement>,
    d: Vec<FieldElement>,
    m: Vec<FieldElement>,
    pivots: Vec<usize>,
}

impl Buffers {
    fn new() -> Self {
        Buffers {
            c: Default::default(),
            x: Vec::new(),
            y: Vec::new(),
            g: Vec::new(),
            d: Vec::new(),
            m: Vec::new(),
            pivots: Vec::new(),
        }
    }
}

/// For f given by its coefficients: None if f is not cubefree, otherwise
/// (a-number by Cartier kernel dimension, squarefree?).
fn classify(coeffs: &[FieldElement], genus: usize, f: &FieldSpec, b: &mut Buffers) -> Option<(usize, bool)> {
    for c in b.c.iter_mut() {
        c.clear();
    }
    for (i, &a) in coeffs.iter().enumerate() {
        b.c[i % 3].push(f.pth_root(a));
    }
    let cubefree = match raw::gcd_into(&b.c[0], &b.c[1], &mut b.x, &mut b.y, &mut b.g, f) {
        None => raw::degree(&b.c[2]) == Some(0),
        Some(0) => true,
        Some(_) => {
            let g = std::mem::take(&mut b.g);
            let r = raw::coprime(&g, &b.c[2], &mut b.x, &mut b.y, f);
            b.g = g;
            r
        }
    };
    if !cubefree {
        return None;
    }
    let squarefree = raw::is_squarefree(coeffs, &mut b.d, &mut b.x, &mut b.y, f);
    if genus == 0 {
        return Some((0, squarefree));
    }
    b.m.clear();
    b.m.resize(genus * genus, FieldElement::ZERO);
    for j in 0..genus {
        let (t, r) = (j / 3, j % 3);
        let img = &b.c[2 - r];
        for (i, &c) in img.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            assert!(t + i < genus, "Cartier image leaves the holomorphic differentials");
            b.m[(t + i) * genus + j] = c;
        }
    }
    let rank = rref_in_place(&mut b.m, genus, genus, f, &mut b.pivots);
    Some((genus - rank, squarefree))
}

#[derive(Default)]
struct Partial {
    cubefree: Vec<u64>,
    squarefree: Vec<u64>,
    first_cf: Vec<Option<u64>>,
    first_sf: Vec<Option<u64>>,
}

fn require_char3(f: &FieldSpec) -> Result<()> {
    if f.p() != 3 {
        return Err(Error::CharacteristicThreeRequired("curve census"));
    }
    Ok(())
}

fn check_epsilon(epsilon: u8) -> Result<()> {
    if epsilon == 1 || epsilon == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon must be 1 or 2, got {epsilon}")))
    }
}

/// One pass over the monic f of degree 2g + ε producing both the cubefree and
/// the squarefree table.
pub fn run_census_pair(
    f: &FieldSpec,
    g: usize,
    epsilon: u8,
    exec: &Executor,
    budget: Budget,
) -> Result<(CensusTable, CensusTable)> {
    require_char3(f)?;
    check_epsilon(epsilon)?;
    let d = 2 * g + epsilon as usize;
    budget.check(pow_sat(f.q(), d as u32))?;
    let total = (f.q() as u64).pow(d as u32);
    let chunks = (DEFAULT_CHUNKS as u64).min(total);
    let partials = exec.map_chunks(chunks as usize, |c| {
        let (lo, hi) = chunk_bounds(total, chunks, c as u64);
        let mut p = Partial {
            cubefree: vec![0; g + 1],
            squarefree: vec![0; g + 1],
            first_cf: vec![None; g + 1],
            first_sf: vec![None; g + 1],
        };
        if lo == hi {
            return p;
        }
        let mut b = Buffers::new();
        let mut odo = Odometer::monic(f, d, lo);
        for pos in lo..hi {
            if let Some((a, sf)) = classify(odo.current(), g, f, &mut b) {
                p.cubefree[a] += 1;
                p.first_cf[a].get_or_insert(pos);
                if sf {
                    p.squarefree[a] += 1;
                    p.first_sf[a].get_or_insert(pos);
                }
            }
            odo.advance();
        }
        p
    });
    let mut cf = vec![0u64; g + 1];
    let mut sf = vec![0u64; g + 1];
    let mut first_cf: Vec<Option<u64>> = vec![None; g + 1];
    let mut first_sf: Vec<Option<u64>> = vec![None; g + 1];
    for p in partials {
        for a in 0..=g {
            cf[a] += p.cubefree[a];
            sf[a] += p.squarefree[a];
            if first_cf[a].is_none() {
                first_cf[a] = p.first_cf[a];
            }
            if first_sf[a].is_none() {
                first_sf[a] = p.first_sf[a];
            }
        }
    }
    let build = |counts: Vec<u64>, first: Vec<Option<u64>>, squarefree: bool| CensusTable {
        key: CensusKey {
            q: f.q(),
            g,
            epsilon,
            squarefree,
        },
        total: counts.iter().sum(),
        counts: counts.into_iter().enumerate().collect(),
        witnesses: first
            .into_iter()
            .enumerate()
            .filter_map(|(a, pos)| Some((a, Odometer::monic(f, d, pos?).current_poly())))
            .collect(),
    };
    Ok((build(cf, first_cf, false), build(sf, first_sf, true)))
}

/// The census for one key.
pub fn run_census(f: &FieldSpec, key: CensusKey, exec: &Executor, budget: Budget) -> Result<CensusTable> {
    if key.q != f.q() {
        return Err(Error::InvalidArgument(format!(
            "census key is for q = {} but the field has q = {}",
            key.q,
            f.q()
        )));
    }
    let (cf, sf) = run_census_pair(f, key.g, key.epsilon, exec, budget)?;
    Ok(if key.squarefree { sf } else { cf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_over_gf3() {
        let f = FieldSpec::new(3, 1).unwrap();
        let ex = Executor::serial();
        let (cf, sf) = run_census_pair(&f, 1, 1, &ex, Budget::DEFAULT).unwrap();
        assert_eq!(cf.total, 24);
        assert_eq!(cf.probability(0), ratio(3, 4));
        assert_eq!(cf.probability(1), ratio(1, 4));
        assert_eq!(sf.total, 18);
        assert_eq!(sf.count(1), 6);
        let w = &sf.witnesses[&1];
        assert_eq!(crate::cartier::a_number_kernel(w, 1, &f).unwrap(), 1);
    }

    #[test]
    fn genus_zero_single_row() {
        let f = FieldSpec::new(3, 1).unwrap();
        let t = run_census(
            &f,
            CensusKey {
                q: 3,
                g: 0,
                epsilon: 2,
                squarefree: false,
            },
            &Executor::serial(),
            Budget::DEFAULT,
        )
        .unwrap();
        assert_eq!(t.counts.len(), 1);
        assert_eq!(t.probability(0), ratio(1, 1));
        assert_eq!(t.csv_rows(), vec!["3,0,2,false,0,9,9,1/1".to_string()]);
    }

    #[test]
    fn refuses_other_characteristics_and_budget() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(
            run_census_pair(&f, 1, 1, &Executor::serial(), Budget::DEFAULT).unwrap_err(),
            Error::CharacteristicThreeRequired("curve census")
        );
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(matches!(
            run_census_pair(&f3, 3, 1, &Executor::serial(), Budget(100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
