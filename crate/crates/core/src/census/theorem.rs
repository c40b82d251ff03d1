//! Closed forms for μ and μ′ and the comparison records built from them.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{CensusKey, CensusTable};
use crate::error::{Error, Result};
use crate::heights::formulas::{int, qpow};
use crate::rational::ratio_string;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Exact equality holds.
    Equal,
    /// An inequality or existence statement holds.
    Holds,
    Violated,
    /// The statement does not apply to this cell.
    OutOfScope,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Violated
    }

    fn from_eq(ok: bool) -> Self {
        if ok {
            Verdict::Equal
        } else {
            Verdict::Violated
        }
    }

    fn from_holds(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::OutOfScope => "out of scope",
        })
    }
}

/// One measured quantity against the statement governing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremComparison {
    pub key: CensusKey,
    pub a: usize,
    /// Which statement: "distribution", "vanishing", "exact value",
    /// "sandwich", "bounded", "big a-number".
    pub check: &'static str,
    /// The governing branch, e.g. "g ≡ 0 mod 3, 0 < a < [(g+1)/3]".
    pub case: String,
    pub expected: String,
    pub measured: String,
    pub verdict: Verdict,
}

impl TheoremComparison {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.key.q.to_string(),
            "g": self.key.g.to_string(),
            "epsilon": self.key.epsilon.to_string(),
            "squarefree": self.key.squarefree,
            "a": self.a.to_string(),
            "check": self.check,
            "case": self.case,
            "expected": self.expected,
            "measured": self.measured,
            "verdict": self.verdict.to_string(),
        })
    }
}

impl fmt::Display for TheoremComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} a={} [{}] {}: expected {}, measured {} -> {}",
            self.key.label(),
            self.a,
            self.check,
            self.case,
            self.expected,
            self.measured,
            self.verdict
        )
    }
}

fn q_inv(q: u32) -> BigRational {
    qpow(q, -1)
}

/// μ_{ε,g}(a) for monic cubefree f, with the label of the branch used.
/// Branches are selected by g mod 3 first.
pub fn distribution_closed_form(q: u32, g: usize, epsilon: u8, a: usize) -> (BigRational, String) {
    let one = BigRational::one();
    let qi = q_inv(q);
    let top = |a: usize| qpow(q, 1 - 2 * a as i64);
    let r = g % 3;
    if g == 0 {
        let v = if a == 0 { one } else { BigRational::zero() };
        return (v, format!("g = 0, a {} 0", if a == 0 { "=" } else { ">" }));
    }
    let branch_a = r == 0 || (r == 2 && epsilon == 2);
    if branch_a {
        let b = (g + 1) / 3;
        let head = if r == 0 {
            "g ≡ 0 mod 3".to_string()
        } else {
            "g ≡ 2 mod 3, eps = 2".to_string()
        };
        return if a == 0 {
            (&one - &qi, format!("{head}, a = 0"))
        } else if a < b {
            (top(a) * (&one - &qi * &qi), format!("{head}, 0 < a < [(g+1)/3]"))
        } else if a == b {
            (top(a), format!("{head}, a = [(g+1)/3]"))
        } else {
            (BigRational::zero(), format!("{head}, a > [(g+1)/3]"))
        };
    }
    let head = if r == 1 {
        format!("g ≡ 1 mod 3, eps = {epsilon}")
    } else {
        "g ≡ 2 mod 3, eps = 1".to_string()
    };
    if g <= 2 {
        let base = (&one - &qi) / (&one - &qi * &qi);
        return match a {
            0 => (base, format!("{head}, g ≤ 2, a = 0")),
            1 => (&qi * base, format!("{head}, g ≤ 2, a = 1")),
            _ => (BigRational::zero(), format!("{head}, g ≤ 2, a > 1")),
        };
    }
    let c = (g - 1) / 3;
    if a == 0 {
        (&one - &qi, format!("{head}, g > 3, a = 0"))
    } else if a < c {
        (top(a) * (&one - &qi * &qi), format!("{head}, g > 3, 0 < a < [(g-1)/3]"))
    } else if a == c {
        let v = top(a) * (&one + &qi - &qi * &qi) / (&one + &qi);
        (v, format!("{head}, g > 3, a = [(g-1)/3]"))
    } else if a == c + 1 {
        (top(a) / (&one + &qi), format!("{head}, g > 3, a = [(g-1)/3]+1"))
    } else {
        (BigRational::zero(), format!("{head}, g > 3, a > [(g-1)/3]+1"))
    }
}

/// Compares every a in 0..=g of a cubefree census with the closed form.
pub fn verify_cubefree_distribution(table: &CensusTable) -> Result<Vec<TheoremComparison>> {
    if table.key.squarefree {
        return Err(Error::InvalidArgument(
            "the distribution closed form applies to cubefree censuses".into(),
        ));
    }
    let k = table.key;
    Ok((0..=k.g)
        .map(|a| {
            let (expected, case) = distribution_closed_form(k.q, k.g, k.epsilon, a);
            let measured = table.probability(a);
            TheoremComparison {
                key: k,
                a,
                check: "distribution",
                case,
                verdict: Verdict::from_eq(expected == measured),
                expected: ratio_string(&expected),
                measured: ratio_string(&measured),
            }
        })
        .collect())
}

fn ceil_third(g: usize) -> usize {
    g.div_ceil(3)
}

/// The consequences for squarefree f: vanishing above ⌈g/3⌉, exact values at
/// the top when g ≡ 1 mod 3, the sandwich between μ and μ′, the bound
/// |μ′ − q^{−2a+1}| < 2q^{−2a}, and which large a-numbers occur.
pub fn verify_squarefree_consequences(
    cubefree: &CensusTable,
    squarefree: &CensusTable,
) -> Result<Vec<TheoremComparison>> {
    let (kc, ks) = (cubefree.key, squarefree.key);
    if kc.squarefree || !ks.squarefree || (kc.q, kc.g, kc.epsilon) != (ks.q, ks.g, ks.epsilon) {
        return Err(Error::InvalidArgument(format!(
            "census keys do not pair up: {} and {}",
            kc.label(),
            ks.label()
        )));
    }
    let (q, g, eps) = (ks.q, ks.g, ks.epsilon);
    let one = BigRational::one();
    let qi = q_inv(q);
    let top_a = ceil_third(g);
    let mut out = Vec::new();
    let mut push = |a: usize, check: &'static str, case: String, expected: String, measured: String, verdict| {
        out.push(TheoremComparison {
            key: ks,
            a,
            check,
            case,
            expected,
            measured,
            verdict,
        })
    };

    for a in 0..=g {
        let mu = cubefree.probability(a);
        let mup = squarefree.probability(a);
        let ms = ratio_string(&mup);

        if a > top_a {
            push(
                a,
                "vanishing",
                "a > ⌈g/3⌉".into(),
                "0/1".into(),
                ms.clone(),
                Verdict::from_eq(mup.is_zero()),
            );
        }

        if g % 3 == 1 && a == top_a {
            let expected = if eps == 1 {
                qpow(q, 1 - 2 * a as i64)
            } else {
                qpow(q, 1 - 2 * a as i64) * (&one + &qi)
            };
            push(
                a,
                "exact value",
                format!("g ≡ 1 mod 3, eps = {eps}, a = ⌈g/3⌉"),
                ratio_string(&expected),
                ms.clone(),
                Verdict::from_eq(expected == mup),
            );
        }

        let upper = &mu * (&one + &qi);
        let lower = &upper - &qi;
        push(
            a,
            "sandwich",
            "μ(1+q⁻¹) − q⁻¹ ≤ μ′ ≤ μ(1+q⁻¹)".into(),
            format!("[{}, {}]", ratio_string(&lower), ratio_string(&upper)),
            ms.clone(),
            Verdict::from_holds(lower <= mup && mup <= upper),
        );

        let centre = qpow(q, 1 - 2 * a as i64);
        let bound = int(2) * qpow(q, -2 * a as i64);
        let in_scope = a > 0 && a <= top_a;
        push(
            a,
            "bounded",
            if in_scope {
                "0 < a ≤ ⌈g/3⌉: |μ′ − q^(−2a+1)| < 2q^(−2a)".into()
            } else {
                "outside 0 < a ≤ ⌈g/3⌉".into()
            },
            format!("|x - {}| < {}", ratio_string(&centre), ratio_string(&bound)),
            ms,
            if in_scope {
                Verdict::from_holds((&mup - &centre).abs() < bound)
            } else {
                Verdict::OutOfScope
            },
        );

        // r = g − a: a-number g − r forces 2g ≤ 3r + 2; for even r and
        // g ≡ 1 mod 3 within that bound it is attained.
        let r = g - a;
        let allowed = 2 * g <= 3 * r + 2;
        let count = squarefree.count(a);
        if count > 0 {
            push(
                a,
                "big a-number",
                format!("r = {r}: occurs only if 2g ≤ 3r + 2"),
                "2g ≤ 3r + 2".into(),
                format!("{count} curves"),
                Verdict::from_holds(allowed),
            );
        } else if r % 2 == 0 && g % 3 == 1 && allowed {
            push(
                a,
                "big a-number",
                format!("r = {r} even, g ≡ 1 mod 3, 2g ≤ 3r + 2: must occur"),
                "at least one curve".into(),
                "0 curves".into(),
                Verdict::Violated,
            );
        }
    }
    Ok(out)
}

/// One column of the observational report: measured μ′ for a fixed a across g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureRow {
    pub a: usize,
    pub limit: BigRational,
    /// (g, ε, μ′_{ε,g}(a)) in table order.
    pub values: Vec<(usize, u8, BigRational)>,
}

impl ConjectureRow {
    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|(g, e, v)| json!({"g": g.to_string(), "epsilon": e.to_string(), "measured": ratio_string(v)}))
            .collect();
        json!({"a": self.a.to_string(), "limit": ratio_string(&self.limit), "values": values})
    }
}

/// Measured μ′ against the conjectured large-genus limit. No verdicts.
pub fn conjecture_report(q: u32, tables: &[CensusTable]) -> Vec<ConjectureRow> {
    let a_max = tables.iter().map(|t| t.key.g).max().unwrap_or(0);
    let one = BigRational::one();
    let qi = q_inv(q);
    (0..=a_max)
        .map(|a| {
            let limit = if a == 0 {
                &one - &qi
            } else {
                qpow(q, 1 - 2 * a as i64) * (&one - &qi * &qi)
            };
            let values = tables
                .iter()
                .filter(|t| t.key.squarefree && t.key.q == q)
                .map(|t| (t.key.g, t.key.epsilon, t.probability(a)))
                .collect();
            ConjectureRow { a, limit, values }
        })
        .collect()
}
