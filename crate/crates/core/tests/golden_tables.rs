use polyext::labyrinth::{maze_action, PureMaze};
use polyext::powerfunctors::{FunctorSpec, MonomialVector};
use polyext::selftest::{check_action_table, LABY3, LABY4};

fn act(functor: &str, maze: &str, input: &str, dimension: usize) -> MonomialVector {
    let spec: FunctorSpec = functor.parse().unwrap();
    let maze: PureMaze = maze.parse().unwrap();
    let v = MonomialVector::parse(spec, input, dimension).unwrap();
    maze_action(spec, &maze, &v).unwrap()
}

fn parsed(functor: &str, text: &str, dimension: usize) -> MonomialVector {
    MonomialVector::parse(functor.parse().unwrap(), text, dimension).unwrap()
}

fn assert_table(table: &polyext::selftest::ActionTable, rows: usize) {
    let checks = check_action_table(table);
    assert_eq!(checks.len(), rows * table.columns.len());
    for c in &checks {
        assert!(c.passed(), "{}: expected {}, got {}", c.name, c.expected, c.got);
    }
}

#[test]
fn cubic_table() {
    assert_table(&LABY3, 16);
    let relabelled: Vec<_> = check_action_table(&LABY3).into_iter().filter(|c| c.name.contains("relabelled")).collect();
    assert_eq!(relabelled.len(), 2 * LABY3.columns.len());
}

#[test]
fn quartic_table() {
    assert_table(&LABY4, 6);
    assert!(check_action_table(&LABY4).iter().all(|c| !c.name.contains("relabelled")));
}

/// The maze that obstructs a retraction onto `S^3` doubles `e1 e2^2` and
/// kills the other cubic monomials, in both symmetric and divided powers.
#[test]
fn doubling_maze_on_rank_two() {
    let maze = "1>1,2>2,2>2";
    for (functor, monomials, survivor) in [
        ("s:3", ["e1^3", "e1^2*e2", "e1*e2^2", "e2^3"], 2),
        ("gamma:3", ["e1[3]", "e1[2]*e2[1]", "e1[1]*e2[2]", "e2[3]"], 2),
    ] {
        for (i, m) in monomials.iter().enumerate() {
            let got = act(functor, maze, m, 2);
            if i == survivor {
                let spec: FunctorSpec = functor.parse().unwrap();
                let mut want = MonomialVector::parse(spec, m, 2).unwrap();
                want.add_scaled(&want.clone(), &1.into());
                assert_eq!(got, want, "{functor} {m}");
            } else {
                assert!(got.is_zero(), "{functor} {m} gave {got}");
            }
        }
    }
}

#[test]
fn quartic_identities() {
    let lhs = {
        let mut v = act("gamma:4", "1>1,1>2", "e1[4]", 1);
        v.add_scaled(&act("gamma:4", "1>1,2>2", "e1[3]*e2[1]", 2), &(-1).into());
        v.add_scaled(&act("gamma:4", "1>2,2>1", "e1[3]*e2[1]", 2), &(-1).into());
        v
    };
    assert_eq!(lhs, parsed("gamma:4", "e1[2]*e2[2]", 2));
    assert_eq!(act("gamma:4", "1>1,2>2,2>3", "e1[2]*e2[2]", 2), parsed("gamma:4", "e1[2]*e2*e3", 3));
    assert_eq!(act("gamma:4", "1>1,1>2,2>3,2>4", "e1[2]*e2[2]", 2), parsed("gamma:4", "e1*e2*e3*e4", 4));
}

#[test]
fn single_passage_examples() {
    assert_eq!(act("gamma:3", "1>1,1>2", "e1[3]", 1), parsed("gamma:3", "e1[2]*e2 + e1*e2[2]", 2));
    assert_eq!(act("s:3", "1>1,2>1,2>1", "e1*e2^2", 2), parsed("s:3", "2*e1^3", 1));
    assert!(act("s:2", "1>1,1>2,1>3", "e1^2", 1).is_zero());
    for functor in ["s:3", "lambda:3", "gamma:3"] {
        let spec: FunctorSpec = functor.parse().unwrap();
        let input = polyext::powerfunctors::cross_effect_basis(spec, 3);
        for m in input {
            let v = MonomialVector::monomial(spec, m).unwrap();
            assert_eq!(maze_action(spec, &PureMaze::identity(3), &v).unwrap(), v);
        }
    }
}
