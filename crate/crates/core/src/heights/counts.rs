use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::formulas;
use super::histogram::{TripleHistogram, PROFILE_AMBIGUOUS};
use super::DegreePattern;
use crate::error::{Error, Result};
use crate::exec::{Budget, Executor};
use crate::gf::FieldSpec;
use crate::rational::{big_to_rational, rational_string};

/// A measured count next to its closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub name: String,
    pub measured: BigUint,
    pub formula: BigRational,
    pub matches: bool,
}

impl CountReport {
    pub fn new(name: String, measured: BigUint, formula: BigRational) -> Self {
        let matches = big_to_rational(&measured) == formula;
        CountReport {
            name,
            measured,
            formula,
            matches,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "measured": self.measured.to_string(),
            "formula": rational_string(&self.formula),
            "matches": self.matches,
        })
    }
}

/// One cell of a heights grid: either checked or outside the regimes the
/// closed forms cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridCell {
    Checked(CountReport),
    Rejected { name: String, reason: String },
}

impl GridCell {
    pub fn passed(&self) -> bool {
        match self {
            GridCell::Checked(r) => r.matches,
            GridCell::Rejected { .. } => true,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GridCell::Checked(r) => r.to_json(),
            GridCell::Rejected { name, reason } => json!({
                "name": name,
                "status": "regime rejected",
                "reason": reason,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NVariant {
    /// A1 monic of degree m, others of degree ≤ m.
    One,
    /// A1 monic of degree m, others of degree < m.
    Two,
    /// A1 monic of degree m, deg A2 ≤ m, deg A3 < m.
    Three,
}

impl NVariant {
    pub const ALL: [NVariant; 3] = [NVariant::One, NVariant::Two, NVariant::Three];

    pub fn number(self) -> u8 {
        match self {
            NVariant::One => 1,
            NVariant::Two => 2,
            NVariant::Three => 3,
        }
    }

    pub fn from_number(v: u8) -> Result<Self> {
        match v {
            1 => Ok(NVariant::One),
            2 => Ok(NVariant::Two),
            3 => Ok(NVariant::Three),
            _ => Err(Error::InvalidArgument(format!("N variant must be 1, 2 or 3, got {v}"))),
        }
    }

    fn admits(self, r: u8) -> bool {
        match self {
            NVariant::One => r & 1 != 0,
            NVariant::Two => r == 0b001,
            NVariant::Three => r == 0b001 || r == 0b011,
        }
    }
}

fn pattern_suffix(r: Option<DegreePattern>) -> String {
    r.map(|r| format!("_{{{r}}}")).unwrap_or_default()
}

fn has_solution_coord(profile: usize, i: usize) -> bool {
    profile != PROFILE_AMBIGUOUS && profile & (1 << (i - 1)) != 0
}

fn covers_s(m: u32, l: u32) -> bool {
    m > 2 * l || (m == 2 * l && l > 0)
}

/// Caches one histogram per m so a whole grid costs one pass per m.
pub struct HeightCounter<'a> {
    f: &'a FieldSpec,
    exec: &'a Executor,
    budget: Budget,
    cache: BTreeMap<u32, TripleHistogram>,
}

impl<'a> HeightCounter<'a> {
    pub fn new(f: &'a FieldSpec, exec: &'a Executor, budget: Budget) -> Self {
        HeightCounter {
            f,
            exec,
            budget,
            cache: BTreeMap::new(),
        }
    }

    /// Starts from histograms computed earlier over the same field.
    pub fn with_cache(
        f: &'a FieldSpec,
        exec: &'a Executor,
        budget: Budget,
        cache: BTreeMap<u32, TripleHistogram>,
    ) -> Self {
        assert!(cache.values().all(|h| h.q() == f.q()), "histograms from another field");
        HeightCounter { f, exec, budget, cache }
    }

    pub fn into_cache(self) -> BTreeMap<u32, TripleHistogram> {
        self.cache
    }

    pub fn field(&self) -> &FieldSpec {
        self.f
    }

    pub fn histogram(&mut self, m: u32) -> Result<&TripleHistogram> {
        if !self.cache.contains_key(&m) {
            let h = TripleHistogram::build(self.f, m as usize, self.exec, self.budget)?;
            self.cache.insert(m, h);
        }
        Ok(&self.cache[&m])
    }

    fn raw_count(&mut self, m: u32, pred: impl Fn(u8, usize, usize) -> bool) -> Result<BigUint> {
        let q = self.f.q() as u64;
        let classes = self.histogram(m)?.classes(pred);
        Ok(BigUint::from(classes) * BigUint::from(q - 1))
    }

    /// |S(m)|, |S(m,l)|, |S_R(m)| or |S_R(m,l)|.
    pub fn s(&mut self, m: u32, l: Option<u32>, r: Option<DegreePattern>) -> Result<CountReport> {
        let q = self.f.q();
        let name = match l {
            None => format!("S{}({m})", pattern_suffix(r)),
            Some(l) => format!("S{}({m},{l})", pattern_suffix(r)),
        };
        if let Some(l) = l {
            if !covers_s(m, l) {
                return Err(Error::Regime(format!("{name}: closed form needs m > 2l or m = 2l > 0")));
            }
        }
        let measured = self.raw_count(m, |rr, mu, _| {
            r.is_none_or(|r| r.0 == rr) && l.is_none_or(|l| l as usize == mu)
        })?;
        let formula = match (l, r) {
            (None, None) => formulas::s_total(q, m),
            (None, Some(r)) => formulas::s_pattern(q, m, r),
            (Some(l), None) => formulas::s_ml(q, m, l),
            (Some(l), Some(r)) => formulas::s_ml_pattern(q, m, l, r),
        };
        Ok(CountReport::new(name, measured, formula))
    }

    /// |T(m,l)|, |T′(m,l)| and their R-restrictions, for m > 2l.
    pub fn t(&mut self, m: u32, l: u32, primed: bool, r: Option<DegreePattern>) -> Result<CountReport> {
        let q = self.f.q();
        let name = format!("T{}{}({m},{l})", if primed { "'" } else { "" }, pattern_suffix(r));
        if m <= 2 * l {
            return Err(Error::Regime(format!("{name}: closed form needs m > 2l")));
        }
        let measured = self.raw_count(m, |rr, mu, p| {
            let profile_ok = if primed { p == 0b100 } else { has_solution_coord(p, 2) };
            mu == l as usize && profile_ok && r.is_none_or(|r| r.0 == rr)
        })?;
        let formula = match (primed, r) {
            (false, None) => formulas::t_total(q, m, l),
            (false, Some(r)) => formulas::t_pattern(q, m, l, r),
            (true, None) => formulas::tp_total(q, m, l),
            (true, Some(r)) => formulas::tp_pattern(q, m, l, r),
        };
        Ok(CountReport::new(name, measured, formula))
    }

    /// The complement relation |T′_{1,2}| = |S_{1,2}| − |T_{1,2}| between measured counts.
    pub fn t_complement(&mut self, m: u32, l: u32) -> Result<CountReport> {
        let r12 = DegreePattern(0b011);
        let tp = self.t(m, l, true, Some(r12))?;
        let s = self.s(m, Some(l), Some(r12))?;
        let t = self.t(m, l, false, Some(r12))?;
        let expected = big_to_rational(&s.measured) - big_to_rational(&t.measured);
        Ok(CountReport::new(
            format!("T'_{{1,2}}({m},{l}) = S_{{1,2}} - T_{{1,2}}"),
            tp.measured,
            expected,
        ))
    }

    /// N_v(m,l) (A1 monic), or N′_v(m,l) where the solution has deg P2 < l.
    pub fn n(&mut self, variant: NVariant, m: u32, l: u32, primed: bool) -> Result<CountReport> {
        let q = self.f.q();
        let v = variant.number();
        let name = format!("N{v}{}({m},{l})", if primed { "'" } else { "" });
        if primed && m <= 2 * l {
            return Err(Error::Regime(format!("{name}: closed form needs m > 2l")));
        }
        if !covers_s(m, l) {
            return Err(Error::Regime(format!("{name}: closed form needs m > 2l or m = 2l > 0")));
        }
        // one ordered triple per class has A1 monic
        let classes = self.histogram(m)?.classes(|rr, mu, p| {
            variant.admits(rr) && mu == l as usize && (!primed || (p != PROFILE_AMBIGUOUS && !has_solution_coord(p, 2)))
        });
        let formula = if primed {
            formulas::n_primed(q, v, m, l)
        } else {
            formulas::n_count(q, v, m, l)
        };
        Ok(CountReport::new(name, BigUint::from(classes), formula))
    }
}

/// |S(m)|-family count with a throwaway cache.
pub fn count_s(
    f: &FieldSpec,
    m: u32,
    l: Option<u32>,
    r: Option<DegreePattern>,
    exec: &Executor,
    budget: Budget,
) -> Result<CountReport> {
    HeightCounter::new(f, exec, budget).s(m, l, r)
}

pub fn count_t(
    f: &FieldSpec,
    m: u32,
    l: u32,
    primed: bool,
    r: Option<DegreePattern>,
    exec: &Executor,
    budget: Budget,
) -> Result<CountReport> {
    HeightCounter::new(f, exec, budget).t(m, l, primed, r)
}

pub fn count_n(
    f: &FieldSpec,
    variant: NVariant,
    m: u32,
    l: u32,
    primed: bool,
    exec: &Executor,
    budget: Budget,
) -> Result<CountReport> {
    HeightCounter::new(f, exec, budget).n(variant, m, l, primed)
}

/// Which cells of the (m, l) grid to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub m_max: u32,
    pub l_max: u32,
    /// Smallest m evaluated.
    pub m_min: u32,
    pub include_t: bool,
}

impl GridSpec {
    /// Parses "m<=3,l<=1".
    pub fn parse(text: &str, include_t: bool) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let mut m_max = None;
        let mut l_max = None;
        for part in text.split(',') {
            let part = part.trim();
            let (key, val) = part.split_once("<=").ok_or_else(|| err("expected KEY<=N"))?;
            let v: u32 = val
                .trim()
                .parse()
                .map_err(|_| err("bound is not a nonnegative integer"))?;
            match key.trim() {
                "m" => m_max = Some(v),
                "l" => l_max = Some(v),
                _ => return Err(err("keys must be m and l")),
            }
        }
        Ok(GridSpec {
            m_max: m_max.ok_or_else(|| err("missing m bound"))?,
            l_max: l_max.unwrap_or(0),
            m_min: 0,
            include_t,
        })
    }
}

fn push(cells: &mut Vec<GridCell>, r: Result<CountReport>) -> Result<()> {
    match r {
        Ok(rep) => cells.push(GridCell::Checked(rep)),
        Err(Error::Regime(reason)) => {
            let name = reason.split(':').next().unwrap_or("").to_string();
            cells.push(GridCell::Rejected { name, reason });
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Every S, T, T′ and N count of the grid, in a fixed order.
pub fn run_grid(counter: &mut HeightCounter<'_>, spec: &GridSpec) -> Result<Vec<GridCell>> {
    let mut cells = Vec::new();
    for m in spec.m_min..=spec.m_max {
        push(&mut cells, counter.s(m, None, None))?;
        for r in DegreePattern::ALL {
            push(&mut cells, counter.s(m, None, Some(r)))?;
        }
        for l in 0..=spec.l_max {
            cells.extend(run_cell(counter, m, l, spec.include_t)?);
        }
    }
    Ok(cells)
}

/// The (m, l) counts of a grid: S(m,l), its R-restrictions, T and T′ when
/// requested, and every N variant.
pub fn run_cell(counter: &mut HeightCounter<'_>, m: u32, l: u32, include_t: bool) -> Result<Vec<GridCell>> {
    let mut cells = Vec::new();
    push(&mut cells, counter.s(m, Some(l), None))?;
    if covers_s(m, l) {
        for r in DegreePattern::ALL {
            push(&mut cells, counter.s(m, Some(l), Some(r)))?;
        }
    }
    if include_t {
        for primed in [false, true] {
            push(&mut cells, counter.t(m, l, primed, None))?;
            if m > 2 * l {
                for r in DegreePattern::ALL {
                    push(&mut cells, counter.t(m, l, primed, Some(r)))?;
                }
            }
        }
        if m > 2 * l {
            push(&mut cells, counter.t_complement(m, l))?;
        }
    }
    for v in NVariant::ALL {
        push(&mut cells, counter.n(v, m, l, false))?;
        push(&mut cells, counter.n(v, m, l, true))?;
    }
    Ok(cells)
}
