//! Reproduction checks against published values and golden action tables.

use crate::exactalg::{FgAbelianGroup, IntMatrix};
use crate::extengine::{ext1, ext1_i_sn_closed_form, ExtProblem};
use crate::labyrinth::{maze_action_on_domain_part, PureMaze};
use crate::powerfunctors::{Family, FunctorSpec, MonomialVector};
use crate::registry::known_value;

/// A golden action table: a functor and input per column, and for each maze
/// the expected image of every column's input.
pub struct ActionTable {
    pub name: &'static str,
    pub columns: &'static [(&'static str, &'static str)],
    pub rows: &'static [(&'static str, &'static [&'static str])],
}

/// Cubic table. The first column combines the two divided-power generators;
/// each maze acts on the summand supported on its domain.
pub const LABY3: ActionTable = ActionTable {
    name: "cubic maze actions",
    columns: &[("gamma:3", "e1[3] + e1[2]*e2[1]"), ("s:3", "e1*e2^2"), ("s:3", "e1^2*e2")],
    rows: &[
        ("1>1", &["e1[3]", "0", "0"]),
        ("1>1,1>1", &["6*e1[3]", "0", "0"]),
        ("1>1,1>1,1>1", &["6*e1[3]", "0", "0"]),
        ("1>1,1>2", &["e1[2]*e2[1] + e1[1]*e2[2]", "0", "0"]),
        ("1>1,1>1,1>2", &["2*e1[2]*e2[1]", "0", "0"]),
        ("1>1,1>2,1>3", &["e1[1]*e2[1]*e3[1]", "0", "0"]),
        ("1>1,2>1", &["3*e1[3]", "e1^3", "e1^3"]),
        ("1>1,1>1,2>1", &["6*e1[3]", "0", "2*e1^3"]),
        ("1>1,2>1,2>1", &["0", "2*e1^3", "0"]),
        ("1>1,2>2", &["e1[2]*e2[1]", "e1*e2^2", "e1^2*e2"]),
        ("1>1,1>1,2>2", &["2*e1[2]*e2[1]", "0", "2*e1^2*e2"]),
        ("1>1,2>2,2>2", &["0", "2*e1*e2^2", "0"]),
        ("1>1,1>2,2>2", &["2*e1[2]*e2[1]", "0", "2*e1^2*e2"]),
        ("1>1,2>1,2>2", &["0", "2*e1*e2^2", "0"]),
        ("1>1,1>2,2>3", &["e1*e2*e3", "0", "2*e1*e2*e3"]),
        ("1>1,2>2,2>3", &["0", "2*e1*e2*e3", "0"]),
    ],
};

/// Quartic table with the generic indices `i, j, k` set to `1, 2, 3`.
pub const LABY4: ActionTable = ActionTable {
    name: "quartic maze actions",
    columns: &[("gamma:4", "e1[4] + e1[3]*e2[1]"), ("s:4", "e1^2*e2^2"), ("s:4", "e1^3*e2")],
    rows: &[
        ("1>1,1>2", &["e1[3]*e2[1] + e1[2]*e2[2] + e1[1]*e2[3]", "0", "0"]),
        ("1>1,1>2,1>3", &["e1[2]*e2*e3 + e1*e2[2]*e3 + e1*e2*e3[2]", "0", "0"]),
        ("1>1,2>1", &["4*e1[4]", "e1^4", "e1^4"]),
        ("1>1,2>2", &["e1[3]*e2[1]", "e1^2*e2^2", "e1^3*e2"]),
        ("1>1,1>2,2>1", &["2*e1[2]*e2[2] + 3*e1[3]*e2[1]", "2*e1^3*e2", "3*e1^2*e2^2 + 3*e1^3*e2"]),
        ("1>1,1>2,2>3", &["e1[2]*e2*e3 + e1*e2[2]*e3", "2*e1*e2*e3^2", "3*e1^2*e2*e3 + 3*e1*e2^2*e3"]),
    ],
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.got
    }
}

/// Permutations of `0..n` in lexicographic order, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

fn relabel(v: &MonomialVector, perm: &[usize]) -> MonomialVector {
    let n = perm.len();
    let mut m = IntMatrix::zeros(n, n);
    for (from, &to) in perm.iter().enumerate() {
        m.set(to, from, 1.into());
    }
    v.apply(&m).expect("square relabelling")
}

/// Compares every cell of `table` with the computed action. Tables list
/// mazes up to a relabelling of the codomain, so each row may be matched
/// through one permutation of the codomain, the same for all its cells; the
/// identity is tried first and any other choice is named in the check.
pub fn check_action_table(table: &ActionTable) -> Vec<Check> {
    let mut out = Vec::new();
    for (maze_text, cells) in table.rows {
        let computed = (|| -> Result<Vec<(MonomialVector, MonomialVector)>, String> {
            let maze: PureMaze = maze_text.parse().map_err(|e| format!("{e}"))?;
            let mut pairs = Vec::new();
            for ((functor, input), expected) in table.columns.iter().zip(cells.iter()) {
                let spec: FunctorSpec = functor.parse().map_err(|e| format!("{e}"))?;
                let v = MonomialVector::parse(spec, input, 0).map_err(|e| format!("{e}"))?;
                let got = maze_action_on_domain_part(spec, &maze, &v).map_err(|e| format!("{e}"))?;
                let want = MonomialVector::parse(spec, expected, 0).map_err(|e| format!("{e}"))?;
                if want.dimension() > got.dimension() {
                    return Err(format!("expected value {expected} leaves the codomain"));
                }
                let want = MonomialVector::from_terms(spec.family, got.dimension(), want.terms().clone());
                pairs.push((want, got));
            }
            Ok(pairs)
        })();
        let label = |i: usize| {
            let (functor, input) = table.columns[i];
            format!("{}: {} on {} in {}", table.name, maze_text, input, functor)
        };
        match computed {
            Err(e) => out.extend((0..cells.len()).map(|i| Check {
                name: label(i),
                expected: cells[i].to_string(),
                got: format!("error: {e}"),
            })),
            Ok(pairs) => {
                let j = pairs.first().map_or(0, |(_, g)| g.dimension());
                let identity: Vec<usize> = (0..j).collect();
                let perm = permutations(j)
                    .into_iter()
                    .find(|p| pairs.iter().all(|(want, got)| relabel(got, p) == *want))
                    .unwrap_or(identity.clone());
                let suffix = if perm == identity {
                    String::new()
                } else {
                    let names: Vec<String> = perm.iter().map(|x| (x + 1).to_string()).collect();
                    format!(" (codomain relabelled {})", names.join(" "))
                };
                for (i, (want, got)) in pairs.iter().enumerate() {
                    out.push(Check {
                        name: format!("{}{}", label(i), suffix),
                        expected: want.to_string(),
                        got: relabel(got, &perm).to_string(),
                    });
                }
            }
        }
    }
    out
}

fn ext_check(problem: ExtProblem, expected: &FgAbelianGroup) -> Check {
    let got = match ext1(&problem) {
        Ok(r) => r.group.to_string(),
        Err(e) => format!("error: {e}"),
    };
    Check { name: problem.to_string(), expected: expected.to_string(), got }
}

fn spec(f: Family, n: usize) -> FunctorSpec {
    FunctorSpec::new(f, n).expect("positive degree")
}

/// Quick: quadratic table, Ext¹(I, S^n) for n <= 5, cubic action table.
/// Full adds the cubic and quartic divided-to-symmetric examples, every
/// published cell of degree at most 4, and the quartic action table.
pub fn run(level: Level) -> Vec<Check> {
    let mut checks = Vec::new();
    for f in Family::ALL {
        for g in Family::ALL {
            let p = ExtProblem::new(spec(f, 2), spec(g, 2));
            let v = known_value(&p).expect("quadratic cells are published");
            checks.push(ext_check(p, &v.group));
        }
    }
    for n in 1..=5 {
        let p = ExtProblem::new(spec(Family::Symmetric, 1), spec(Family::Symmetric, n));
        checks.push(ext_check(p, &ext1_i_sn_closed_form(n)));
    }
    checks.extend(check_action_table(&LABY3));
    if level == Level::Full {
        checks.extend(check_action_table(&LABY4));
        for f in Family::ALL {
            for g in Family::ALL {
                for m in 1..=4 {
                    for n in 1..=4 {
                        let p = ExtProblem::new(spec(f, m), spec(g, n));
                        if let Some(v) = known_value(&p) {
                            checks.push(ext_check(p, &v.group));
                        }
                    }
                }
            }
        }
    }
    checks
}
