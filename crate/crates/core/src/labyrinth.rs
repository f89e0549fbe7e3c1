//! Pure mazes between the skeletal objects `[k] = {1, ..., k}` and their
//! action on cross-effect monomials.
//!
//! A pure maze `P: [k] -> [j]` is a multiset of passages `s > t`. It acts on a
//! functor value through the deviation formula
//!
//! ```text
//! P . v = sum over I ⊆ P of (-1)^(|P| - |I|) F(Σ_{p ∈ I} σ_{t(p), s(p)}) v
//! ```
//!
//! where the passages form a labelled list, so a doubled passage contributes
//! four subsets rather than three. Composition of mazes is not modelled.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::IntMatrix;
use crate::multiset::Multiset;
use crate::powerfunctors::{apply_to_monomial, Family, FunctorSpec, MonomialVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabyrinthError {
    #[error("cannot parse maze {0:?}")]
    Parse(String),
    #[error("passage {from}>{to} leaves the maze {domain} -> {codomain}")]
    PassageOutOfRange { from: u32, to: u32, domain: usize, codomain: usize },
    #[error("input lives in rank {found} but the maze domain has size {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("input monomial {monomial} does not belong to {spec}")]
    NotInFunctor { monomial: String, spec: FunctorSpec },
    #[error("input is a {found:?} vector, expected {expected:?}")]
    FamilyMismatch { expected: Family, found: Family },
    #[error("maze {maze} produced monomial {monomial} outside the codomain cross-effect")]
    SupportLeak { maze: String, monomial: String },
}

/// A passage `source > target`; the label is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Passage {
    pub source: u32,
    pub target: u32,
}

impl Passage {
    pub fn new(source: u32, target: u32) -> Self {
        Self { source, target }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureMaze {
    domain_size: usize,
    codomain_size: usize,
    /// Sorted by `(source, target)`; repeats encode multiplicity.
    passages: Vec<Passage>,
}

impl PureMaze {
    pub fn new(domain_size: usize, codomain_size: usize, mut passages: Vec<Passage>) -> Result<Self, LabyrinthError> {
        for p in &passages {
            if p.source == 0 || p.target == 0 || p.source as usize > domain_size || p.target as usize > codomain_size {
                return Err(LabyrinthError::PassageOutOfRange {
                    from: p.source,
                    to: p.target,
                    domain: domain_size,
                    codomain: codomain_size,
                });
            }
        }
        passages.sort_unstable();
        Ok(Self { domain_size, codomain_size, passages })
    }

    /// The identity maze `{i > i}` on `[k]`.
    pub fn identity(k: usize) -> Self {
        let passages = (1..=k as u32).map(|i| Passage::new(i, i)).collect();
        Self { domain_size: k, codomain_size: k, passages }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn cardinality(&self) -> usize {
        self.passages.len()
    }

    /// Every domain element is a source and every codomain element a target.
    pub fn is_covering(&self) -> bool {
        let mut src = vec![false; self.domain_size];
        let mut dst = vec![false; self.codomain_size];
        for p in &self.passages {
            src[p.source as usize - 1] = true;
            dst[p.target as usize - 1] = true;
        }
        src.into_iter().chain(dst).all(|b| b)
    }

    /// Swaps sources and targets.
    pub fn reverse(&self) -> Self {
        let passages = self.passages.iter().map(|p| Passage::new(p.target, p.source)).collect();
        Self::new(self.codomain_size, self.domain_size, passages).expect("reversal stays in range")
    }
}

/// `1>1,1>2`; the empty maze prints as an empty string.
impl fmt::Display for PureMaze {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.passages.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses `s>t` pairs separated by commas. Domain and codomain are taken to
/// be `[max source]` and `[max target]`.
impl FromStr for PureMaze {
    type Err = LabyrinthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabyrinthError::Parse(s.to_string());
        let mut passages = Vec::new();
        for pair in s.split(',') {
            let (a, b) = pair.trim().split_once('>').ok_or_else(bad)?;
            let source: u32 = a.trim().parse().map_err(|_| bad())?;
            let target: u32 = b.trim().parse().map_err(|_| bad())?;
            if source == 0 || target == 0 {
                return Err(bad());
            }
            passages.push(Passage::new(source, target));
        }
        let k = passages.iter().map(|p| p.source).max().unwrap_or(0) as usize;
        let j = passages.iter().map(|p| p.target).max().unwrap_or(0) as usize;
        PureMaze::new(k, j, passages)
    }
}

/// All covering pure mazes `[k] -> [j]` with at most `max_card` passages,
/// ordered by cardinality and then lexicographically by passage list.
pub fn enumerate_pure_mazes(k: usize, j: usize, max_card: usize) -> Vec<PureMaze> {
    let pairs: Vec<Passage> = (1..=k as u32).flat_map(|s| (1..=j as u32).map(move |t| Passage::new(s, t))).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    for card in k.max(j)..=max_card {
        choose_with_repetition(&pairs, 0, card, &mut current, &mut |passages| {
            let maze = PureMaze { domain_size: k, codomain_size: j, passages: passages.to_vec() };
            if maze.is_covering() {
                out.push(maze);
            }
        });
    }
    out
}

fn choose_with_repetition(
    pairs: &[Passage],
    from: usize,
    remaining: usize,
    current: &mut Vec<Passage>,
    emit: &mut dyn FnMut(&[Passage]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for i in from..pairs.len() {
        current.push(pairs[i]);
        choose_with_repetition(pairs, i, remaining - 1, current, emit);
        current.pop();
    }
}

/// `Σ_{p ∈ subset} σ_{t(p), s(p)}` as a `j x k` matrix: entry `(y, x)` counts
/// the selected passages `x > y`. Panics if an index is out of range.
pub fn deviation_matrix_sum(maze: &PureMaze, subset: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(maze.codomain_size, maze.domain_size);
    for &i in subset {
        let p = maze.passages[i];
        *m.get_mut(p.target as usize - 1, p.source as usize - 1) += 1;
    }
    m
}

/// The deviation sum applied to one monomial, before any restriction.
fn deviation_terms(family: Family, maze: &PureMaze, monomial: &Multiset) -> BTreeMap<Multiset, BigInt> {
    let n = maze.passages.len();
    assert!(n < usize::BITS as usize, "maze too large for subset enumeration");
    let mut acc: BTreeMap<Multiset, BigInt> = BTreeMap::new();
    let mut subset = Vec::with_capacity(n);
    for mask in 0usize..(1 << n) {
        subset.clear();
        subset.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let phi = deviation_matrix_sum(maze, &subset);
        let negative = (n - subset.len()) % 2 == 1;
        for (key, c) in apply_to_monomial(family, &phi, monomial) {
            let slot = acc.entry(key).or_insert_with(BigInt::zero);
            if negative {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Action of `maze` on the single monomial `e^monomial` of `family`,
/// restricted to the codomain cross-effect (support exactly `[j]`).
///
/// For a maze covering its codomain, the unrestricted sum already has no
/// other support; a violation is reported as [`LabyrinthError::SupportLeak`].
pub fn maze_action_on_monomial(
    family: Family,
    maze: &PureMaze,
    monomial: &Multiset,
) -> Result<BTreeMap<Multiset, BigInt>, LabyrinthError> {
    let j = maze.codomain_size;
    let mut terms = deviation_terms(family, maze, monomial);
    let covers_codomain = (1..=j as u32).all(|t| maze.passages.iter().any(|p| p.target == t));
    if covers_codomain {
        if let Some(m) = terms.keys().find(|m| !m.has_support_range(j)) {
            return Err(LabyrinthError::SupportLeak { maze: maze.to_string(), monomial: m.to_string() });
        }
    } else {
        terms.retain(|m, _| m.has_support_range(j));
    }
    Ok(terms)
}

/// `P . input` restricted to monomials with support exactly `[codomain]`.
///
/// The input must live in rank `domain_size`. Monomials whose support is a
/// proper subset of the domain are accepted and are sent to zero by any maze
/// that covers its domain.
pub fn maze_action(
    spec: FunctorSpec,
    maze: &PureMaze,
    input: &MonomialVector,
) -> Result<MonomialVector, LabyrinthError> {
    if input.family() != spec.family {
        return Err(LabyrinthError::FamilyMismatch { expected: spec.family, found: input.family() });
    }
    if input.dimension() != maze.domain_size {
        return Err(LabyrinthError::DomainMismatch { expected: maze.domain_size, found: input.dimension() });
    }
    let mut out = MonomialVector::zero(spec.family, maze.codomain_size);
    for (m, c) in input.terms() {
        if !spec.admits(m) || m.max_element() as usize > maze.domain_size {
            return Err(LabyrinthError::NotInFunctor { monomial: m.to_string(), spec });
        }
        for (key, v) in maze_action_on_monomial(spec.family, maze, m)? {
            out.add_term(key, v * c);
        }
    }
    Ok(out)
}

/// Applies `maze` to the part of `input` whose support is exactly the maze
/// domain, discarding the rest. Golden tables list one combined input per
/// column and let each maze act on the summand matching its domain.
pub fn maze_action_on_domain_part(
    spec: FunctorSpec,
    maze: &PureMaze,
    input: &MonomialVector,
) -> Result<MonomialVector, LabyrinthError> {
    maze_action(spec, maze, &input.restrict_to_support(maze.domain_size))
}

/// Action of `maze` on the basis monomial `e^monomial`, as a vector.
pub fn maze_action_basis(
    spec: FunctorSpec,
    maze: &PureMaze,
    monomial: &Multiset,
) -> Result<MonomialVector, LabyrinthError> {
    let input = MonomialVector::from_terms(spec.family, maze.domain_size, [(monomial.clone(), BigInt::one())]);
    maze_action(spec, maze, &input)
}
