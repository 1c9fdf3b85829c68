//! The functional equation `f(a² + b²) = f(a)f(b)`, `f(a²) = f(a)²` over the
//! positive integers.
//!
//! [`check_table`] tests a finite table against both rules, [`forced_trace`]
//! produces the induction showing `f ≡ 1` is forced, and [`replay_trace`]
//! audits such a derivation step by step.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunceqError {
    #[error("table limit must be at least 1")]
    EmptyTable,
    #[error("f({n}) = 0 is not a positive integer")]
    NonPositive { n: u64 },
    #[error("missing value for n = {n}")]
    Missing { n: u64 },
    #[error("n = {n} is outside [1, {limit}]")]
    OutOfRange { n: u64, limit: u64 },
    #[error("duplicate entry for n = {n}")]
    Duplicate { n: u64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// The values `f(1), …, f(N)` of a candidate function, all `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    values: Vec<u64>,
}

impl FunctionTable {
    pub fn new(values: Vec<u64>) -> Result<Self, FunceqError> {
        if values.is_empty() {
            return Err(FunceqError::EmptyTable);
        }
        if let Some(i) = values.iter().position(|&v| v == 0) {
            return Err(FunceqError::NonPositive { n: i as u64 + 1 });
        }
        Ok(Self { values })
    }

    pub fn constant_one(limit: u64) -> Result<Self, FunceqError> {
        Self::new(vec![1; limit as usize])
    }

    /// Builds a table from explicit `(n, f(n))` pairs covering `[1, N]` exactly once.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, FunceqError> {
        let mut map = BTreeMap::new();
        for (n, v) in pairs {
            if n == 0 {
                return Err(FunceqError::OutOfRange { n, limit: 0 });
            }
            if map.insert(n, v).is_some() {
                return Err(FunceqError::Duplicate { n });
            }
        }
        let limit = map.keys().next_back().copied().ok_or(FunceqError::EmptyTable)?;
        let values = (1..=limit)
            .map(|n| map.get(&n).copied().ok_or(FunceqError::Missing { n }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }

    /// Parses `n value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, FunceqError> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: &str| FunceqError::Parse { line: idx + 1, reason: reason.to_string() };
            let mut fields = line.split_whitespace();
            let n = fields.next().and_then(|s| s.parse::<u64>().ok()).ok_or_else(|| parse_err("expected `n value`"))?;
            let v = fields.next().and_then(|s| s.parse::<u64>().ok()).ok_or_else(|| parse_err("expected `n value`"))?;
            if fields.next().is_some() {
                return Err(parse_err("trailing fields"));
            }
            pairs.push((n, v));
        }
        Self::from_pairs(pairs)
    }

    pub fn to_text(&self) -> String {
        self.values.iter().enumerate().map(|(i, v)| format!("{} {}\n", i + 1, v)).collect()
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64
    }

    /// `f(n)` for `1 <= n <= N`.
    pub fn get(&self, n: u64) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.values.get(i as usize)).copied()
    }

    pub fn set(&mut self, n: u64, value: u64) -> Result<(), FunceqError> {
        let limit = self.limit();
        if value == 0 {
            return Err(FunceqError::NonPositive { n });
        }
        let slot = n
            .checked_sub(1)
            .and_then(|i| self.values.get_mut(i as usize))
            .ok_or(FunceqError::OutOfRange { n, limit })?;
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    SumRule,
    SquareRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Pair { a: u64, b: u64 },
    Single { a: u64 },
}

/// A place where the table breaks one of the two rules; `lhs != rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: RuleKind,
    pub witness: Witness,
    pub lhs: u128,
    pub rhs: u128,
}

/// Every violation reachable inside the table, sum-rule violations first
/// (ordered by `(a, b)`), then square-rule violations (ordered by `a`).
pub fn check_table(table: &FunctionTable) -> Vec<Violation> {
    let limit = table.limit();
    let f = |n: u64| u128::from(table.get(n).expect("index within table"));
    let mut out = Vec::new();
    let mut a = 1u64;
    while a * a < limit {
        let mut b = 1u64;
        while a * a + b * b <= limit {
            let lhs = f(a * a + b * b);
            let rhs = f(a) * f(b);
            if lhs != rhs {
                out.push(Violation { kind: RuleKind::SumRule, witness: Witness::Pair { a, b }, lhs, rhs });
            }
            b += 1;
        }
        a += 1;
    }
    let mut a = 1u64;
    while a * a <= limit {
        let lhs = f(a * a);
        let rhs = f(a) * f(a);
        if lhs != rhs {
            out.push(Violation { kind: RuleKind::SquareRule, witness: Witness::Single { a }, lhs, rhs });
        }
        a += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivationRule {
    /// `f(1) = f(1)²` forces `f(1) = 1`.
    BaseOne,
    /// `f(2) = f(1² + 1²) = f(1)²`.
    BaseTwo,
    /// `n = u² - v²` with `u = v + 1`.
    OddDifference,
    /// `n = 2uv` with `v = 1`.
    EvenDouble,
}

impl fmt::Display for DerivationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BaseOne => "base_one",
            Self::BaseTwo => "base_two",
            Self::OddDifference => "odd_difference",
            Self::EvenDouble => "even_double",
        })
    }
}

/// One step `f(target) = 1` of the induction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub target: u64,
    pub rule: DerivationRule,
    /// The `(u, v)` fed to `f(u² - v²) f(2uv) = (f(u) f(v))²`.
    pub parameters: Option<(u64, u64)>,
}

/// Derivation of `f(n) = 1` for every `n` in `[1, limit]`, in increasing `n`.
pub fn forced_trace(limit: u64) -> Vec<DerivationStep> {
    (1..=limit)
        .map(|n| match n {
            1 => DerivationStep { target: 1, rule: DerivationRule::BaseOne, parameters: None },
            2 => DerivationStep { target: 2, rule: DerivationRule::BaseTwo, parameters: None },
            n if n % 2 == 1 => {
                let k = n / 2;
                DerivationStep { target: n, rule: DerivationRule::OddDifference, parameters: Some((k + 1, k)) }
            }
            n => DerivationStep { target: n, rule: DerivationRule::EvenDouble, parameters: Some((n / 2, 1)) },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ReplayVerdict {
    Pass { derived: u64 },
    Fail { step: usize, reason: String },
}

impl ReplayVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass { .. })
    }
}

/// Audits a derivation: every step's side conditions hold and it only cites
/// values derived by earlier steps. Stops at the first failing step.
pub fn replay_trace(trace: &[DerivationStep]) -> ReplayVerdict {
    if trace.is_empty() {
        return ReplayVerdict::Fail { step: 0, reason: "empty trace".into() };
    }
    let max_target = trace.iter().map(|s| s.target).max().unwrap_or(0);
    let mut derived = vec![false; max_target as usize + 1];
    let is_derived = |derived: &[bool], n: u64| derived.get(n as usize).copied().unwrap_or(false);

    for (idx, step) in trace.iter().enumerate() {
        let fail = |reason: String| ReplayVerdict::Fail { step: idx, reason };
        let n = step.target;
        match (step.rule, step.parameters) {
            (DerivationRule::BaseOne, None) => {
                if n != 1 {
                    return fail(format!("base_one must target 1, got {n}"));
                }
            }
            (DerivationRule::BaseTwo, None) => {
                if n != 2 {
                    return fail(format!("base_two must target 2, got {n}"));
                }
                if !is_derived(&derived, 1) {
                    return fail("base_two cites f(1), which is not derived yet".into());
                }
            }
            (DerivationRule::OddDifference | DerivationRule::EvenDouble, Some((u, v))) => {
                if u <= v {
                    return fail(format!("u > v violated: (u, v) = ({u}, {v})"));
                }
                let expected = match step.rule {
                    DerivationRule::OddDifference if u != v + 1 => {
                        return fail(format!("odd_difference needs u = v + 1, got ({u}, {v})"));
                    }
                    DerivationRule::OddDifference => u.checked_mul(u).zip(v.checked_mul(v)).map(|(uu, vv)| uu - vv),
                    _ if v != 1 => return fail(format!("even_double needs v = 1, got ({u}, {v})")),
                    _ => u.checked_mul(2).and_then(|t| t.checked_mul(v)),
                };
                if expected != Some(n) {
                    return fail(format!("{} with ({u}, {v}) does not produce {n}", step.rule));
                }
                for dep in [u, v] {
                    if !is_derived(&derived, dep) {
                        return fail(format!("cites f({dep}), which is not derived yet"));
                    }
                }
                // f(u²-v²)·f(2uv) = (f(u)f(v))² = 1 and both factors are positive
                // integers, so both equal 1.
            }
            (rule, params) => {
                return fail(format!("{rule} does not take parameters {params:?}"));
            }
        }
        derived[n as usize] = true;
    }
    let count = derived.iter().filter(|&&d| d).count() as u64;
    ReplayVerdict::Pass { derived: count }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mutated(limit: u64, n: u64, value: u64) -> FunctionTable {
        let mut t = FunctionTable::constant_one(limit).unwrap();
        t.set(n, value).unwrap();
        t
    }

    #[test]
    fn constant_table_is_consistent() {
        assert!(check_table(&FunctionTable::constant_one(100).unwrap()).is_empty());
    }

    #[test]
    fn sum_rule_violation_at_five() {
        let v = check_table(&mutated(10, 5, 2));
        assert!(v.contains(&Violation {
            kind: RuleKind::SumRule,
            witness: Witness::Pair { a: 1, b: 2 },
            lhs: 2,
            rhs: 1,
        }));
    }

    #[test]
    fn square_rule_violation_at_four() {
        let v = check_table(&mutated(10, 4, 3));
        assert!(v
            .iter()
            .any(|x| x.kind == RuleKind::SquareRule && x.witness == Witness::Single { a: 2 } && x.lhs == 3 && x.rhs == 1));
    }

    #[test]
    fn table_rejects_zero_and_gaps() {
        assert_eq!(FunctionTable::new(vec![1, 0]), Err(FunceqError::NonPositive { n: 2 }));
        assert_eq!(FunctionTable::new(vec![]), Err(FunceqError::EmptyTable));
        assert_eq!(FunctionTable::from_pairs([(1, 1), (3, 1)]), Err(FunceqError::Missing { n: 2 }));
        assert_eq!(FunctionTable::from_pairs([(1, 1), (1, 2)]), Err(FunceqError::Duplicate { n: 1 }));
        assert!(matches!(FunctionTable::parse("1 1\n2 x\n"), Err(FunceqError::Parse { line: 2, .. })));
    }

    #[test]
    fn text_round_trip() {
        let t = mutated(12, 7, 9);
        assert_eq!(FunctionTable::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn trace_examples() {
        let two = forced_trace(2);
        assert_eq!(two.iter().map(|s| s.rule).collect::<Vec<_>>(), vec![DerivationRule::BaseOne, DerivationRule::BaseTwo]);
        let seven = forced_trace(7);
        assert_eq!(seven[6], DerivationStep { target: 7, rule: DerivationRule::OddDifference, parameters: Some((4, 3)) });
        let eight = forced_trace(8);
        assert_eq!(eight[7], DerivationStep { target: 8, rule: DerivationRule::EvenDouble, parameters: Some((4, 1)) });
    }

    #[test]
    fn replay_accepts_generated_traces() {
        assert_eq!(replay_trace(&forced_trace(100)), ReplayVerdict::Pass { derived: 100 });
        for n in 1..=1000 {
            assert!(replay_trace(&forced_trace(n)).passed(), "N = {n}");
            assert!(check_table(&FunctionTable::constant_one(n).unwrap()).is_empty());
        }
    }

    #[test]
    fn replay_rejects_u_equal_v() {
        let mut trace = forced_trace(3);
        trace[2].parameters = Some((3, 3));
        let verdict = replay_trace(&trace);
        assert!(matches!(verdict, ReplayVerdict::Fail { step: 2, ref reason } if reason.contains("u > v")));
    }

    #[test]
    fn replay_rejects_out_of_order_dependencies() {
        // 9 = 5² - 4² needs f(4) and f(5) before it
        let mut trace = forced_trace(2);
        trace.push(DerivationStep { target: 9, rule: DerivationRule::OddDifference, parameters: Some((5, 4)) });
        trace.push(DerivationStep { target: 4, rule: DerivationRule::EvenDouble, parameters: Some((2, 1)) });
        assert!(matches!(replay_trace(&trace), ReplayVerdict::Fail { step: 2, .. }));
    }

    #[test]
    fn replay_rejects_wrong_formula_and_empty() {
        let mut trace = forced_trace(6);
        trace[5].parameters = Some((4, 1));
        assert!(matches!(replay_trace(&trace), ReplayVerdict::Fail { step: 5, .. }));
        assert!(!replay_trace(&[]).passed());
    }

    #[test]
    fn pythagorean_identity_holds() {
        for u in 1u64..=100 {
            for v in 1..u {
                let lhs = (u * u - v * v).pow(2) + (2 * u * v).pow(2);
                assert_eq!(lhs, (u * u + v * v).pow(2));
            }
        }
    }
}
