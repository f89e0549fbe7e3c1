//! Published values of Ext¹ between the classical functors over `Z`.
//!
//! Every degree-1 functor is the identity, so a problem with a degree-1 side
//! is looked up under all three family names for that side.

use serde::Serialize;

use crate::exactalg::{factorize, FgAbelianGroup};
use crate::extengine::ExtProblem;
use crate::powerfunctors::Family::{self, Divided, Exterior, Symmetric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    PaperVerified,
    Frontier,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::PaperVerified => "paper-verified",
            Status::Frontier => "frontier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownValue {
    pub group: FgAbelianGroup,
    /// Human-readable statement of the rule that fixes the value.
    pub rule: &'static str,
}

fn group(s: &str) -> FgAbelianGroup {
    s.parse().expect("registry literal")
}

fn prime_power_base(n: usize) -> Option<u64> {
    match factorize(&n.into()).as_slice() {
        [(p, _)] => u64::try_from(p.clone()).ok(),
        _ => None,
    }
}

fn rule(f: Family, m: usize, g: Family, n: usize) -> Option<KnownValue> {
    let known = |group: FgAbelianGroup, rule| Some(KnownValue { group, rule });
    let diagonal_z2 = |rule| known(if m == n && m >= 2 { group("Z/2") } else { FgAbelianGroup::trivial() }, rule);
    match (f, g) {
        (Symmetric, Divided) => known(FgAbelianGroup::trivial(), "S^m -> Γ^n vanishes"),
        (Symmetric, Exterior) => diagonal_z2("S^m -> Λ^n is Z/2 exactly when m = n >= 2"),
        (Exterior, Divided) => diagonal_z2("Λ^m -> Γ^n is Z/2 exactly when m = n >= 2"),
        (Exterior, Exterior) => known(FgAbelianGroup::trivial(), "Λ^m -> Λ^n vanishes"),
        (Symmetric, Symmetric) if m >= n => known(FgAbelianGroup::trivial(), "S^m -> S^n vanishes for m >= n"),
        (Symmetric, Symmetric) if m == 1 => {
            let g = match prime_power_base(n) {
                Some(p) => FgAbelianGroup::from_cyclic_orders(0, [p.into()]),
                None => FgAbelianGroup::trivial(),
            };
            known(g, "I -> S^n is Z/p for n = p^k and 0 otherwise")
        }
        (Exterior, Symmetric) if m >= n => known(FgAbelianGroup::trivial(), "Λ^m -> S^n vanishes for m >= n"),
        (Divided, Divided) if m == n => known(FgAbelianGroup::trivial(), "Γ^n -> Γ^n vanishes"),
        (Divided, Exterior) if m <= n => known(FgAbelianGroup::trivial(), "Γ^m -> Λ^n vanishes for m <= n"),
        (Divided, Symmetric) => match (m, n) {
            (2, 2) => known(FgAbelianGroup::trivial(), "quadratic table"),
            (3, 3) => known(group("Z/2"), "Γ^3 -> S^3 worked example"),
            (4, 4) => known(group("Z/2 + Z/3"), "Γ^4 -> S^4 worked example"),
            _ => None,
        },
        _ => None,
    }
}

fn aliases(f: Family, degree: usize) -> Vec<Family> {
    if degree == 1 {
        Family::ALL.to_vec()
    } else {
        vec![f]
    }
}

/// The published value for `problem`, if any. Panics if two rules that
/// apply through degree-1 aliases disagree.
pub fn known_value(problem: &ExtProblem) -> Option<KnownValue> {
    let (m, n) = (problem.source.degree, problem.target.degree);
    let mut found: Option<KnownValue> = None;
    for f in aliases(problem.source.family, m) {
        for g in aliases(problem.target.family, n) {
            if let Some(v) = rule(f, m, g, n) {
                match &found {
                    Some(prev) => assert_eq!(prev.group, v.group, "registry rules disagree on {problem}"),
                    None => found = Some(v),
                }
            }
        }
    }
    found
}

pub fn status(problem: &ExtProblem) -> Status {
    if known_value(problem).is_some() {
        Status::PaperVerified
    } else {
        Status::Frontier
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerfunctors::FunctorSpec;

    fn p(f: Family, m: usize, g: Family, n: usize) -> ExtProblem {
        ExtProblem::new(FunctorSpec::new(f, m).unwrap(), FunctorSpec::new(g, n).unwrap())
    }

    #[test]
    fn quadratic_table_is_complete() {
        for f in Family::ALL {
            for g in Family::ALL {
                let v = known_value(&p(f, 2, g, 2)).expect("every quadratic cell is known");
                let nonzero = matches!((f, g), (Symmetric, Exterior) | (Exterior, Divided));
                assert_eq!(v.group, if nonzero { group("Z/2") } else { group("0") });
            }
        }
    }

    #[test]
    fn degree_one_aliases() {
        // Γ^1 is the identity, so the identity-to-symmetric rule applies.
        assert_eq!(known_value(&p(Divided, 1, Symmetric, 4)).unwrap().group, group("Z/2"));
        assert_eq!(known_value(&p(Exterior, 1, Exterior, 3)).unwrap().group, group("0"));
        assert_eq!(known_value(&p(Symmetric, 1, Symmetric, 6)).unwrap().group, group("0"));
        assert_eq!(status(&p(Divided, 3, Symmetric, 1)), Status::Frontier);
        assert_eq!(status(&p(Divided, 4, Symmetric, 4)), Status::PaperVerified);
    }

    #[test]
    fn all_small_lookups_are_consistent() {
        for f in Family::ALL {
            for g in Family::ALL {
                for m in 1..=8 {
                    for n in 1..=8 {
                        let _ = known_value(&p(f, m, g, n));
                    }
                }
            }
        }
    }
}
