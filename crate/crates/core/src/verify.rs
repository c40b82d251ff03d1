//! The full verification suite. Each numbered criterion is a list of named
//! checks; the report is deterministic (no timings, no worker counts) so that
//! runs under different worker counts serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::cartier::{a_number_report, genus_epsilon};
use crate::census::{
    conjecture_report, count_cubefree_grouped, count_squarefree_grouped, heuristic_nu, intrinsic_cardinality,
    run_census_pair, verify_cubefree_distribution, verify_squarefree_consequences, CardinalityReport, CensusTable,
    Verdict,
};
use crate::error::Result;
use crate::exec::{Budget, Executor, DEFAULT_CHUNKS};
use crate::gf::FieldSpec;
use crate::heights::{
    count_lines, count_planes_over_line, minima_bruteforce, mu1, run_cell, run_grid, GridCell, GridSpec, HeightCounter,
    TripleHistogram, TripleVec,
};
use crate::poly::{chunk_bounds, is_cubefree, is_squarefree, raw, Odometer, Poly};
use crate::rational::rational_string;

pub const CRITERIA: [(u8, &str); 12] = [
    (
        1,
        "cubefree a-number distribution matches the closed form, q = 3, g <= 5",
    ),
    (
        2,
        "cubefree a-number distribution matches the closed form, q = 9, g <= 2",
    ),
    (
        3,
        "squarefree distribution vanishes above ceil(g/3) and has the stated top values, q = 3, g in {1, 4}",
    ),
    (
        4,
        "squarefree sandwich and deviation bound on every distribution census",
    ),
    (5, "squarefree witnesses with a = 2 in degrees 9 and 10 over F_3"),
    (
        6,
        "kernel, linear-system and height a-numbers agree on small cubefree f",
    ),
    (
        7,
        "sizes of the cubefree and squarefree parameterizing sets, q in {3, 9}, g <= 4",
    ),
    (8, "height counting closed forms"),
    (9, "mu1 + mu2 = h by exhaustive search, h <= 3, q in {2, 3}"),
    (10, "random-subspace model nu_j(a), q in {2, 3}, j <= 2"),
    (
        11,
        "intrinsic cardinality: both routes agree and sit in the leading-order window",
    ),
    (12, "results are independent of the worker count"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Restrict to q = 3 and g ≤ 2 (heights to m ≤ 2).
    pub quick: bool,
    pub budget: Budget,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            quick: false,
            budget: Budget::DEFAULT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub checks: usize,
    /// Names of the failing checks, in evaluation order.
    pub failures: Vec<String>,
    pub details: Vec<Value>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// One matrix line, e.g. "criterion  1 PASS  24/24 checks  cubefree …".
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {:>5}/{:<5} checks  {}",
            self.id,
            self.status,
            self.checks - self.failures.len(),
            self.checks,
            self.title
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id.to_string(),
            "title": self.title,
            "status": self.status.to_string(),
            "checks": self.checks.to_string(),
            "failures": self.failures,
            "details": self.details,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub quick: bool,
    pub criteria: Vec<CriterionResult>,
    /// Observational: measured squarefree distributions against the
    /// conjectured large-genus limit.
    pub conjecture: Value,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "quick": self.quick,
            "passed": self.passed(),
            "criteria": self.criteria.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
            "conjecture": self.conjecture,
        })
    }

    pub fn matrix(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            s.push_str(&c.line());
            s.push('\n');
        }
        s
    }
}

/// Accumulates named checks for one criterion.
struct Checks {
    id: u8,
    count: usize,
    failures: Vec<String>,
    details: Vec<Value>,
}

impl Checks {
    fn new(id: u8) -> Self {
        Checks {
            id,
            count: 0,
            failures: Vec::new(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, name: String, ok: bool, detail: Value) {
        self.count += 1;
        if !ok {
            self.failures.push(name.clone());
        }
        self.details.push(json!({"check": name, "ok": ok, "detail": detail}));
    }

    fn finish(self, skipped: bool) -> CriterionResult {
        let title = CRITERIA[self.id as usize - 1].1;
        let status = if skipped {
            Status::Skipped
        } else if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        CriterionResult {
            id: self.id,
            title,
            status,
            checks: self.count,
            failures: self.failures,
            details: self.details,
        }
    }
}

/// Runs criteria one at a time, sharing censuses and histograms between them.
pub struct Suite<'e> {
    cfg: VerifyConfig,
    exec: &'e Executor,
    fields: BTreeMap<u32, FieldSpec>,
    censuses: BTreeMap<(u32, usize, u8), (CensusTable, CensusTable)>,
    histograms: BTreeMap<u32, BTreeMap<u32, TripleHistogram>>,
}

impl<'e> Suite<'e> {
    pub fn new(cfg: VerifyConfig, exec: &'e Executor) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for (p, k) in [(2, 1), (3, 1), (5, 1), (3, 2)] {
            let f = FieldSpec::new(p, k)?;
            fields.insert(f.q(), f);
        }
        Ok(Suite {
            cfg,
            exec,
            fields,
            censuses: BTreeMap::new(),
            histograms: BTreeMap::new(),
        })
    }

    fn field(&self, q: u32) -> FieldSpec {
        self.fields[&q].clone()
    }

    fn census(&mut self, q: u32, g: usize, eps: u8) -> Result<&(CensusTable, CensusTable)> {
        if !self.censuses.contains_key(&(q, g, eps)) {
            let f = self.field(q);
            let pair = run_census_pair(&f, g, eps, self.exec, self.cfg.budget)?;
            self.censuses.insert((q, g, eps), pair);
        }
        Ok(&self.censuses[&(q, g, eps)])
    }

    /// Runs `job` with a height counter for q whose histograms persist.
    fn with_counter<T>(&mut self, q: u32, job: impl FnOnce(&mut HeightCounter<'_>) -> Result<T>) -> Result<T> {
        let f = self.field(q);
        let cache = self.histograms.remove(&q).unwrap_or_default();
        let mut counter = HeightCounter::with_cache(&f, self.exec, self.cfg.budget, cache);
        let out = job(&mut counter);
        self.histograms.insert(q, counter.into_cache());
        out
    }

    fn distribution_genera(&self) -> Vec<(u32, usize)> {
        let mut v: Vec<(u32, usize)> = (0..=if self.cfg.quick { 2 } else { 5 }).map(|g| (3, g)).collect();
        if !self.cfg.quick {
            v.extend((0..=2).map(|g| (9, g)));
        }
        v
    }

    pub fn criterion(&mut self, id: u8) -> Result<CriterionResult> {
        match id {
            1 => self.distribution(1, 3, if self.cfg.quick { 2 } else { 5 }),
            2 => {
                if self.cfg.quick {
                    return Ok(Checks::new(2).finish(true));
                }
                self.distribution(2, 9, 2)
            }
            3 => self.top_values(),
            4 => self.sandwich_and_bound(),
            5 => self.big_a_numbers(),
            6 => self.cross_oracles(),
            7 => self.cardinalities(),
            8 => self.height_counts(),
            9 => self.minkowski(),
            10 => self.nu(),
            11 => self.moduli(),
            12 => self.determinism(),
            _ => Err(crate::error::Error::InvalidArgument(format!("no criterion {id}"))),
        }
    }

    pub fn run_all(&mut self) -> Result<VerifyReport> {
        let mut criteria = Vec::new();
        for (id, _) in CRITERIA {
            criteria.push(self.criterion(id)?);
        }
        let conjecture = self.conjecture()?;
        Ok(VerifyReport {
            quick: self.cfg.quick,
            criteria,
            conjecture,
        })
    }

    fn distribution(&mut self, id: u8, q: u32, g_max: usize) -> Result<CriterionResult> {
        let mut c = Checks::new(id);
        for g in 0..=g_max {
            for eps in [1, 2] {
                let (cf, _) = self.census(q, g, eps)?;
                for cmp in verify_cubefree_distribution(cf)? {
                    c.check(
                        format!("{} a={} {}", cmp.key.label(), cmp.a, cmp.check),
                        cmp.verdict == Verdict::Equal,
                        cmp.to_json(),
                    );
                }
            }
        }
        Ok(c.finish(false))
    }

    fn consequences(&mut self, q: u32, g: usize, eps: u8, checks: &[&str], c: &mut Checks) -> Result<()> {
        let (cf, sf) = self.census(q, g, eps)?;
        for cmp in verify_squarefree_consequences(cf, sf)? {
            if checks.contains(&cmp.check) {
                c.check(
                    format!("{} a={} {}", cmp.key.label(), cmp.a, cmp.check),
                    cmp.passed(),
                    cmp.to_json(),
                );
            }
        }
        Ok(())
    }

    fn top_values(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(3);
        let gs: &[usize] = if self.cfg.quick { &[1] } else { &[1, 4] };
        for &g in gs {
            for eps in [1, 2] {
                self.consequences(3, g, eps, &["vanishing", "exact value"], &mut c)?;
            }
        }
        Ok(c.finish(false))
    }

    fn sandwich_and_bound(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(4);
        for (q, g) in self.distribution_genera() {
            for eps in [1, 2] {
                self.consequences(q, g, eps, &["sandwich", "bounded"], &mut c)?;
            }
        }
        Ok(c.finish(false))
    }

    fn big_a_numbers(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(5);
        if self.cfg.quick {
            return Ok(c.finish(true));
        }
        let f = self.field(3);
        for eps in [1u8, 2] {
            let (_, sf) = self.census(3, 4, eps)?;
            let name = format!("{} witness with a=2", sf.key.label());
            match sf.witnesses.get(&2).cloned() {
                None => c.check(name, false, json!("no squarefree f with a = 2")),
                Some(w) => {
                    let rep = a_number_report(&w, &f)?;
                    let ok = rep.consistent()
                        && rep.a_kernel == 2
                        && is_squarefree(&w, &f)?
                        && w.degree() == Some(8 + eps as usize);
                    c.check(
                        name,
                        ok,
                        json!({"f": w.to_text(), "count": sf.count(2).to_string(), "a_kernel": rep.a_kernel.to_string(),
                               "a_fundeq": rep.a_fundeq.to_string(), "a_height": rep.a_height.to_string()}),
                    );
                }
            }
        }
        for (q, g) in self.distribution_genera() {
            if q != 3 {
                continue;
            }
            for eps in [1, 2] {
                self.consequences(q, g, eps, &["big a-number"], &mut c)?;
            }
        }
        Ok(c.finish(false))
    }

    fn cross_oracles(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(6);
        let mut plan = vec![(3u32, if self.cfg.quick { 6 } else { 8 })];
        if !self.cfg.quick {
            plan.push((9, 5));
        }
        for (q, d_max) in plan {
            let f = self.field(q);
            for d in 1..=d_max {
                let total = (q as u64).pow(d as u32);
                let chunks = (DEFAULT_CHUNKS as u64).min(total);
                let parts = self.exec.map_chunks(chunks as usize, |i| {
                    let (lo, hi) = chunk_bounds(total, chunks, i as u64);
                    let mut checked = 0u64;
                    let mut bad: Vec<String> = Vec::new();
                    if lo == hi {
                        return (checked, bad);
                    }
                    let mut odo = Odometer::monic(&f, d, lo);
                    for _ in lo..hi {
                        let poly = odo.current_poly();
                        if is_cubefree(&poly, &f).expect("nonzero, char 3") {
                            checked += 1;
                            let rep = a_number_report(&poly, &f).expect("cubefree of positive degree");
                            if !rep.consistent() {
                                bad.push(format!(
                                    "{}: kernel {} linear system {} height {}",
                                    poly.to_text(),
                                    rep.a_kernel,
                                    rep.a_fundeq,
                                    rep.a_height
                                ));
                            }
                        }
                        odo.advance();
                    }
                    (checked, bad)
                });
                let checked: u64 = parts.iter().map(|p| p.0).sum();
                let bad: Vec<String> = parts.into_iter().flat_map(|p| p.1).collect();
                let (g, eps) = genus_epsilon(d).expect("positive degree");
                c.check(
                    format!("q={q} degree {d}"),
                    bad.is_empty() && checked > 0,
                    json!({"g": g.to_string(), "epsilon": eps.to_string(), "cubefree": checked.to_string(),
                           "disagreements": bad.len().to_string(), "first": bad.first()}),
                );
            }
        }
        Ok(c.finish(false))
    }

    fn cardinalities(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(7);
        let mut reports = Vec::new();
        let g3 = if self.cfg.quick { 2 } else { 4 };
        for g in 0..=g3 {
            for eps in [1, 2] {
                let (cf, sf) = self.census(3, g, eps)?;
                reports.push(CardinalityReport::new(cf.key, cf.total, "census"));
                reports.push(CardinalityReport::new(sf.key, sf.total, "census"));
            }
        }
        if !self.cfg.quick {
            let f9 = self.field(9);
            for g in 0..=4 {
                for eps in [1u8, 2] {
                    if g <= 2 {
                        let (cf, sf) = self.census(9, g, eps)?;
                        reports.push(CardinalityReport::new(cf.key, cf.total, "census"));
                        reports.push(CardinalityReport::new(sf.key, sf.total, "census"));
                    } else {
                        let key = |squarefree| crate::census::CensusKey {
                            q: 9,
                            g,
                            epsilon: eps,
                            squarefree,
                        };
                        let cf = count_cubefree_grouped(&f9, g, eps, self.exec, self.cfg.budget)?;
                        let sf = count_squarefree_grouped(&f9, g, eps, self.exec, self.cfg.budget)?;
                        reports.push(CardinalityReport::new(key(false), cf, "grouped"));
                        reports.push(CardinalityReport::new(key(true), sf, "grouped"));
                    }
                }
            }
        }
        for r in reports {
            c.check(format!("{} size", r.key.label()), r.matches(), r.to_json());
        }
        Ok(c.finish(false))
    }

    fn height_counts(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(8);
        let budget = self.cfg.budget;
        let quick = self.cfg.quick;
        let line_qs: &[u32] = if quick { &[3] } else { &[2, 3, 5] };
        for &q in line_qs {
            let f = self.field(q);
            for k in 0..=2 {
                let r = count_lines(&f, 3, k, budget)?;
                c.check(format!("q={q} {}", r.name), r.matches, r.to_json());
            }
        }
        let qs: &[u32] = if quick { &[3] } else { &[2, 3] };
        for &q in qs {
            let f = self.field(q);
            for w in sample_lines(&f)? {
                for k in 1..=2 {
                    let r = count_planes_over_line(&w, k, &f, budget)?;
                    c.check(format!("q={q} W={} {}", w.to_text(), r.name), r.matches, r.to_json());
                }
            }
        }
        let m_max = if quick { 2 } else { 4 };
        for &q in qs {
            let cells = self.with_counter(q, |counter| {
                let mut cells = run_grid(
                    counter,
                    &GridSpec {
                        m_min: 0,
                        m_max,
                        l_max: 1,
                        include_t: true,
                    },
                )?;
                if q == 2 && !quick {
                    cells.extend(run_cell(counter, 4, 2, true)?);
                }
                Ok(cells)
            })?;
            for cell in cells {
                let name = match &cell {
                    GridCell::Checked(r) => format!("q={q} {}", r.name),
                    GridCell::Rejected { name, .. } => format!("q={q} {name} (regime rejected)"),
                };
                c.check(name, cell.passed(), cell.to_json());
            }
        }
        Ok(c.finish(false))
    }

    fn minkowski(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(9);
        let plan: &[(u32, usize)] = if self.cfg.quick { &[(3, 2)] } else { &[(2, 3), (3, 3)] };
        for &(q, h_max) in plan {
            let f = self.field(q);
            for h in 0..=h_max {
                let (triples, bad) = minkowski_at(&f, h, self.exec, self.cfg.budget)?;
                c.check(
                    format!("q={q} h={h}"),
                    bad.is_empty() && triples > 0,
                    json!({"triples": triples.to_string(), "violations": bad.len().to_string(), "first": bad.first()}),
                );
            }
        }
        Ok(c.finish(false))
    }

    fn nu(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(10);
        let plan: &[(u32, usize)] = if self.cfg.quick { &[(3, 1)] } else { &[(2, 2), (3, 2)] };
        for &(q, j_max) in plan {
            let reports = self.with_counter(q, |counter| {
                (0..=j_max)
                    .map(|j| heuristic_nu(counter, j))
                    .collect::<Result<Vec<_>>>()
            })?;
            for r in reports {
                for (a, (m, e, v)) in &r.values {
                    c.check(
                        format!("q={q} nu_{}({a})", r.j),
                        v.passed(),
                        json!({"measured": rational_string(m), "expected": rational_string(e)}),
                    );
                }
            }
        }
        Ok(c.finish(false))
    }

    fn moduli(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(11);
        let f = self.field(3);
        for g in 1..=if self.cfg.quick { 2 } else { 3 } {
            let s1 = self.census(3, g, 1)?.1.clone();
            let s2 = self.census(3, g, 2)?.1.clone();
            let r = intrinsic_cardinality(&f, &s1, &s2, self.exec, self.cfg.budget)?;
            for (a, e) in &r.entries {
                c.check(
                    format!("q=3 g={g} a={a} routes agree"),
                    e.formula == e.direct,
                    json!({"formula": rational_string(&e.formula), "direct": rational_string(&e.direct)}),
                );
                c.check(
                    format!("q=3 g={g} a={a} {}", e.window_text),
                    e.window.passed(),
                    json!({"ic": rational_string(&e.formula), "verdict": e.window.to_string()}),
                );
            }
        }
        Ok(c.finish(false))
    }

    fn determinism(&mut self) -> Result<CriterionResult> {
        let mut c = Checks::new(12);
        let budget = self.cfg.budget;
        let g_max = if self.cfg.quick { 2 } else { 4 };
        let m = if self.cfg.quick { 2 } else { 3 };
        let f3 = self.field(3);
        let reference_tables: Vec<String> = (0..=g_max)
            .flat_map(|g| [1u8, 2].map(|e| (g, e)))
            .map(|(g, e)| {
                let (a, b) = self.census(3, g, e).map(|p| (p.0.to_json(), p.1.to_json()))?;
                Ok(format!("{a}{b}"))
            })
            .collect::<Result<_>>()?;
        let reference_hist = self.with_counter(3, |counter| Ok(counter.histogram(m)?.clone()))?;
        let f9 = self.field(9);
        let reference_grouped = if self.cfg.quick {
            None
        } else {
            Some(count_squarefree_grouped(&f9, 3, 2, self.exec, budget)?)
        };
        for workers in [1, 2, 8] {
            let ex = Executor::new(workers)?;
            let tables: Vec<String> = (0..=g_max)
                .flat_map(|g| [1u8, 2].map(|e| (g, e)))
                .map(|(g, e)| {
                    let (a, b) = run_census_pair(&f3, g, e, &ex, budget)?;
                    Ok(format!("{}{}", a.to_json(), b.to_json()))
                })
                .collect::<Result<_>>()?;
            c.check(
                format!("q=3 censuses g<={g_max} with {workers} workers"),
                tables == reference_tables,
                json!("byte-identical serialized tables"),
            );
            let hist = TripleHistogram::build(&f3, m as usize, &ex, budget)?;
            c.check(
                format!("q=3 height histogram m={m} with {workers} workers"),
                hist == reference_hist,
                json!("identical class counts"),
            );
            if let Some(r) = reference_grouped {
                let n = count_squarefree_grouped(&f9, 3, 2, &ex, budget)?;
                c.check(
                    format!("q=9 grouped squarefree count g=3 with {workers} workers"),
                    n == r,
                    json!(n.to_string()),
                );
            }
        }
        Ok(c.finish(false))
    }

    fn conjecture(&mut self) -> Result<Value> {
        let g_max = if self.cfg.quick { 2 } else { 5 };
        let mut tables = Vec::new();
        for g in 1..=g_max {
            for eps in [1, 2] {
                tables.push(self.census(3, g, eps)?.1.clone());
            }
        }
        Ok(Value::Array(
            conjecture_report(3, &tables).iter().map(|r| r.to_json()).collect(),
        ))
    }
}

/// The full suite with one shared cache.
pub fn run_verify(cfg: VerifyConfig, exec: &Executor) -> Result<VerifyReport> {
    Suite::new(cfg, exec)?.run_all()
}

/// Lines of heights 0, 1 and 2 used for the plane counts.
fn sample_lines(f: &FieldSpec) -> Result<Vec<TripleVec>> {
    let p = |c: &[u32]| Poly::from_indices(f, c);
    let samples = [
        [p(&[1])?, p(&[])?, p(&[])?],
        [p(&[])?, p(&[1])?, p(&[1])?],
        [p(&[0, 1])?, p(&[1])?, p(&[])?],
        [p(&[0, 1])?, p(&[1, 1])?, p(&[1])?],
        [p(&[0, 0, 1])?, p(&[1])?, p(&[0, 1])?],
        [p(&[1, 0, 1])?, p(&[0, 1])?, p(&[1, 1])?],
    ];
    samples.into_iter().map(|a| TripleVec::new(a, f)).collect()
}

/// Checks μ₁ + μ₂ = h and μ₁ against the linear-algebra value for every
/// coprime triple of height h whose first coordinate of degree h is monic
/// (one per projective class). Returns (classes checked, violations).
fn minkowski_at(f: &FieldSpec, h: usize, exec: &Executor, budget: Budget) -> Result<(u64, Vec<String>)> {
    budget.check(crate::exec::pow_sat(f.q(), 3 * (h as u32 + 1)))?;
    let table: Vec<Vec<_>> = {
        let mut odo = Odometer::all_below(f, h + 1, 0);
        let mut v = Vec::new();
        loop {
            v.push(odo.current().to_vec());
            if !odo.advance() {
                break;
            }
        }
        v
    };
    let n = table.len();
    let chunks = DEFAULT_CHUNKS.min(n);
    let parts = exec.map_chunks(chunks, |c| {
        let (lo, hi) = chunk_bounds(n as u64, chunks as u64, c as u64);
        let (mut x, mut y, mut g) = (Vec::new(), Vec::new(), Vec::new());
        let mut checked = 0u64;
        let mut bad = Vec::new();
        for i1 in lo as usize..hi as usize {
            for i2 in 0..n {
                for i3 in 0..n {
                    let t = [&table[i1], &table[i2], &table[i3]];
                    let lead = t.iter().find(|c| raw::degree(c) == Some(h));
                    match lead {
                        Some(c) if c[h] == crate::gf::FieldElement::ONE => {}
                        _ => continue,
                    }
                    let coprime = match raw::gcd_into(t[0], t[1], &mut x, &mut y, &mut g, f) {
                        None => raw::degree(t[2]) == Some(0),
                        Some(0) => true,
                        Some(_) => {
                            let gg = g.clone();
                            raw::coprime(&gg, t[2], &mut x, &mut y, f)
                        }
                    };
                    if !coprime {
                        continue;
                    }
                    checked += 1;
                    let tv = TripleVec::new(t.map(|c| Poly::new(c.clone())), f).expect("nonzero");
                    let (m1, m2) = minima_bruteforce(&tv, f, Budget(u128::MAX)).expect("unbounded");
                    let la = mu1(&tv, f).l;
                    if m1 + m2 != h || la != m1 {
                        bad.push(format!("{}: mu1 {m1} (linear algebra {la}), mu2 {m2}", tv.to_text()));
                    }
                }
            }
        }
        (checked, bad)
    });
    let checked = parts.iter().map(|p| p.0).sum();
    Ok((checked, parts.into_iter().flat_map(|p| p.1).collect()))
}
