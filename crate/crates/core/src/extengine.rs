//! Ext¹(F, G) for F, G among `S^m`, `Λ^m`, `Γ^m`.
//!
//! With `N = max(m, n)` and a generator system `B` of monomials of `F`:
//!
//! 1. the candidates are all covering pure mazes `[|#X|] -> [j]`, `X ∈ B`,
//!    `1 <= j <= n`, of cardinality at most `N`;
//! 2. the annihilator of `Σ_X e^X` is a saturated integer kernel basis of the
//!    evaluation matrix whose column `(X, P)` holds `P . e^X` in `F`;
//! 3. `D` has rows `(X, Y)` with `#Y = #X`, `|Y| = n`, columns `(κ, Z)` for a
//!    relation `κ` and a `G`-monomial `Z`, and entries the coefficient of
//!    `e^Z` in `Σ_{(X, P) ∈ κ} κ_{X,P} P . e^Y` in `G`;
//! 4. Ext¹ is the torsion of `Z^cols / rowspan(D)`.
//!
//! A maze with codomain `[j]` only produces monomials with support exactly
//! `[j]`, so the evaluation matrix is block diagonal by codomain and the
//! kernel is computed block by block. Codomain blocks with `j > m` have no
//! rows at all, which leaves every such maze free to enter relations.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{
    factorize, find_pivot_ordering, invariant_factors, kernel_columns, pivot_reduce, ColumnLattice, FgAbelianGroup,
    IntMatrix, SparseColumn,
};
use crate::labyrinth::{enumerate_pure_mazes, maze_action_on_monomial, LabyrinthError, PureMaze};
use crate::multiset::{enumerate_with_support_and_card, integer_partitions, partition_representatives, Multiset};
use crate::powerfunctors::{binomial, cross_effect_basis, Family, FunctorSpec};

pub const DEFAULT_MAX_MAZES: usize = 1_000_000;
pub const DEFAULT_MAX_D_COLS: usize = 1_000_000;
/// Largest `rows * cols` for which `D` is densified to try a pivotal ordering.
const PIVOT_DENSE_LIMIT: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("{problem}: {count} candidate mazes exceed the ceiling of {limit}")]
    TooManyMazes { problem: String, count: u128, limit: usize },
    #[error("{problem}: D would have {cols} columns, above the ceiling of {limit}")]
    TooWide { problem: String, cols: usize, limit: usize },
    #[error("generator {generator} is not a monomial of {spec}")]
    InvalidGenerator { generator: String, spec: FunctorSpec },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Labyrinth(#[from] LabyrinthError),
}

/// Ext¹(source, target).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtProblem {
    pub source: FunctorSpec,
    pub target: FunctorSpec,
}

impl ExtProblem {
    pub fn new(source: FunctorSpec, target: FunctorSpec) -> Self {
        Self { source, target }
    }

    /// Largest maze cardinality that can act nontrivially on both functors.
    pub fn max_card(&self) -> usize {
        self.source.degree.max(self.target.degree)
    }

    /// Divided source of degree above the target: no general value known.
    pub fn is_frontier(&self) -> bool {
        self.source.family == Family::Divided && self.source.degree > self.target.degree
    }
}

impl fmt::Display for ExtProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext^1({}, {})", self.source, self.target)
    }
}

#[derive(Debug, Clone)]
pub struct ExtConfig {
    /// Overrides `max(m, n)` as the maze cardinality bound.
    pub max_card: Option<usize>,
    /// Overrides the default generator system of the source functor.
    pub generators: Option<Vec<Multiset>>,
    pub max_mazes: usize,
    pub max_d_cols: usize,
    /// Try a pivotal ordering of `D` before the Smith normal form.
    pub try_pivot: bool,
    /// Keep the evaluation matrix and `D` in the result for dumping.
    pub keep_matrices: bool,
}

impl Default for ExtConfig {
    fn default() -> Self {
        Self {
            max_card: None,
            generators: None,
            max_mazes: DEFAULT_MAX_MAZES,
            max_d_cols: DEFAULT_MAX_D_COLS,
            try_pivot: true,
            keep_matrices: false,
        }
    }
}

/// A maze applied to the generator `generators[generator]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub generator: usize,
    pub maze: PureMaze,
}

/// One annihilator element, supported on candidates of a single codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub codomain: usize,
    /// `(candidate index, coefficient)`, nonzero coefficients only.
    pub terms: Vec<(usize, BigInt)>,
}

#[derive(Debug, Clone)]
pub struct RelationBasis {
    pub generators: Vec<Multiset>,
    pub candidates: Vec<Candidate>,
    pub relations: Vec<Relation>,
}

impl RelationBasis {
    /// Dense matrix with one column per relation, rows indexed by candidates.
    pub fn vectors(&self) -> IntMatrix {
        let triples = self
            .relations
            .iter()
            .enumerate()
            .flat_map(|(r, rel)| rel.terms.iter().map(move |(c, v)| (*c, r, v.clone())));
        IntMatrix::from_triples(self.candidates.len(), self.relations.len(), triples).expect("indices in range")
    }
}

#[derive(Debug, Clone)]
pub struct DPresentation {
    /// `(generator index, Y)`.
    pub row_index: Vec<(usize, Multiset)>,
    /// `(relation index, Z)`.
    pub col_index: Vec<(usize, Multiset)>,
    pub matrix: IntMatrix,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub generators: usize,
    pub candidate_mazes: usize,
    pub relation_rank: usize,
    pub d_rows: usize,
    pub d_cols: usize,
    pub millis: u128,
    pub pivot_used: bool,
    pub frontier: bool,
}

#[derive(Debug, Clone)]
pub struct ExtResult {
    pub problem: ExtProblem,
    /// Torsion only.
    pub group: FgAbelianGroup,
    pub diagnostics: Diagnostics,
    pub evaluation: Option<IntMatrix>,
    pub presentation: Option<DPresentation>,
}

/// `[m]` for symmetric and exterior powers, one monomial per partition of
/// `m` for divided powers.
pub fn generator_system(f: FunctorSpec) -> Vec<Multiset> {
    match f.family {
        Family::Symmetric | Family::Exterior => vec![Multiset::range(f.degree as u32)],
        Family::Divided => partition_representatives(f.degree).expect("degree is positive"),
    }
}

/// Number of covering pure mazes `[k] -> [j]` with exactly `card` passages,
/// by inclusion and exclusion over the sources and targets left out.
pub fn count_covering_mazes(k: usize, j: usize, card: usize) -> BigUint {
    let mut total = BigInt::zero();
    for a in 0..=k {
        for b in 0..=j {
            let pairs = (a * b) as u64;
            let multisets = if pairs == 0 {
                BigInt::from(u8::from(card == 0))
            } else {
                binomial(pairs + card as u64 - 1, card as u64)
            };
            let term = binomial(k as u64, a as u64) * binomial(j as u64, b as u64) * multisets;
            if (k - a + j - b).is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total.to_biguint().expect("count is nonnegative")
}

fn count_candidates(generators: &[Multiset], n: usize, max_card: usize) -> u128 {
    let mut total = BigUint::zero();
    for x in generators {
        let k = x.support_len();
        for j in 1..=n {
            for card in k.max(j)..=max_card {
                total += count_covering_mazes(k, j, card);
            }
        }
    }
    u128::try_from(total).unwrap_or(u128::MAX)
}

/// All covering pure mazes out of each generator's support, with codomain
/// `[j]` for `1 <= j <= n` and at most `max_card` passages. Ordered by
/// generator, then codomain, then the maze enumeration order.
pub fn candidate_mazes(generators: &[Multiset], n: usize, max_card: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (g, x) in generators.iter().enumerate() {
        for j in 1..=n {
            for maze in enumerate_pure_mazes(x.support_len(), j, max_card) {
                out.push(Candidate { generator: g, maze });
            }
        }
    }
    out
}

/// Evaluation of every candidate on its generator in `f`: row `Z` over the
/// monomials of support exactly `[j]` for `j = 1, 2, ...` in turn, up to the
/// largest codomain present.
pub fn evaluation_matrix(
    f: FunctorSpec,
    generators: &[Multiset],
    candidates: &[Candidate],
) -> Result<IntMatrix, ExtError> {
    let max_j = candidates.iter().map(|c| c.maze.codomain_size()).max().unwrap_or(0);
    let mut offset = BTreeMap::new();
    let mut rows = 0;
    for j in 1..=max_j {
        for z in cross_effect_basis(f, j) {
            offset.insert(z, rows);
            rows += 1;
        }
    }
    let columns = evaluate_candidates(f, generators, candidates)?;
    let triples = columns.into_iter().enumerate().flat_map(|(c, terms)| {
        let offset = &offset;
        terms.into_iter().map(move |(z, v)| (offset[&z], c, v))
    });
    Ok(IntMatrix::from_triples(rows, candidates.len(), triples).expect("indices in range"))
}

fn evaluate_candidates(
    f: FunctorSpec,
    generators: &[Multiset],
    candidates: &[Candidate],
) -> Result<Vec<BTreeMap<Multiset, BigInt>>, ExtError> {
    candidates
        .par_iter()
        .map(|c| maze_action_on_monomial(f.family, &c.maze, &generators[c.generator]).map_err(ExtError::from))
        .collect()
}

/// A saturated basis of the annihilator of `Σ_X e^X` among the candidates.
pub fn annihilator_basis(
    f: FunctorSpec,
    generators: &[Multiset],
    candidates: Vec<Candidate>,
) -> Result<RelationBasis, ExtError> {
    let columns = evaluate_candidates(f, generators, &candidates)?;
    let mut by_codomain: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in candidates.iter().enumerate() {
        by_codomain.entry(c.maze.codomain_size()).or_default().push(i);
    }
    let blocks: Vec<(usize, Vec<usize>)> = by_codomain.into_iter().collect();
    let relations: Vec<Vec<Relation>> = blocks
        .par_iter()
        .map(|(j, members)| {
            let basis = cross_effect_basis(f, *j);
            let position: BTreeMap<&Multiset, usize> = basis.iter().enumerate().map(|(i, z)| (z, i)).collect();
            let position = &position;
            let triples = members
                .iter()
                .enumerate()
                .flat_map(|(local, &c)| columns[c].iter().map(move |(z, v)| (position[z], local, v.clone())));
            let block = IntMatrix::from_triples(basis.len(), members.len(), triples).expect("indices in range");
            kernel_columns(&block)
                .into_iter()
                .map(|col| Relation {
                    codomain: *j,
                    terms: col.into_iter().map(|(local, v)| (members[local], v)).collect(),
                })
                .collect()
        })
        .collect();
    Ok(RelationBasis {
        generators: generators.to_vec(),
        candidates,
        relations: relations.into_iter().flatten().collect(),
    })
}

/// Rows `(X, Y)` of `D`: for each generator, the `G`-monomials of degree
/// `n` whose support is exactly that of the generator.
fn d_rows(g: FunctorSpec, generators: &[Multiset]) -> Vec<(usize, Multiset)> {
    let mut rows = Vec::new();
    for (i, x) in generators.iter().enumerate() {
        for y in enumerate_with_support_and_card(&x.support(), g.degree) {
            if g.admits(&y) {
                rows.push((i, y));
            }
        }
    }
    rows
}

/// `D` stored by columns; the form the engine reduces.
#[derive(Debug, Clone)]
pub struct SparseD {
    pub row_index: Vec<(usize, Multiset)>,
    pub col_index: Vec<(usize, Multiset)>,
    pub columns: Vec<SparseColumn>,
}

impl SparseD {
    pub fn to_dense(&self) -> DPresentation {
        let triples =
            self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        let matrix =
            IntMatrix::from_triples(self.row_index.len(), self.col_index.len(), triples).expect("indices in range");
        DPresentation { row_index: self.row_index.clone(), col_index: self.col_index.clone(), matrix }
    }

    /// Torsion of `Z^cols / rowspan(D)`. The invariant factors of `D` are
    /// those of any basis of its column lattice, which is accumulated one
    /// column at a time in `rows`-dimensional space.
    pub fn torsion(&self) -> FgAbelianGroup {
        let mut lattice = ColumnLattice::new(self.row_index.len());
        for col in &self.columns {
            lattice.insert_sparse(col);
        }
        FgAbelianGroup::from_invariant_factors(0, &lattice.invariant_factors())
    }
}

/// Assembles `D` for the target functor `problem.target`, column by column.
pub fn build_d_sparse(problem: &ExtProblem, relations: &RelationBasis) -> Result<SparseD, ExtError> {
    let g = problem.target;
    let row_index = d_rows(g, &relations.generators);
    let mut rows_of_generator: Vec<Vec<usize>> = vec![Vec::new(); relations.generators.len()];
    for (r, (x, _)) in row_index.iter().enumerate() {
        rows_of_generator[*x].push(r);
    }

    // Action of every candidate on every G-monomial of its generator's rows.
    let actions: Vec<Vec<BTreeMap<Multiset, BigInt>>> = relations
        .candidates
        .par_iter()
        .map(|c| {
            rows_of_generator[c.generator]
                .iter()
                .map(|&r| maze_action_on_monomial(g.family, &c.maze, &row_index[r].1))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut z_basis: BTreeMap<usize, Vec<Multiset>> = BTreeMap::new();
    let mut col_index = Vec::new();
    for (k, rel) in relations.relations.iter().enumerate() {
        let zs = z_basis.entry(rel.codomain).or_insert_with(|| cross_effect_basis(g, rel.codomain));
        col_index.extend(zs.iter().map(|z| (k, z.clone())));
    }

    // One block of columns per relation, indexed by the codomain basis.
    let blocks: Vec<Vec<SparseColumn>> = relations
        .relations
        .par_iter()
        .map(|rel| {
            let zs = &z_basis[&rel.codomain];
            let position: BTreeMap<&Multiset, usize> = zs.iter().enumerate().map(|(i, z)| (z, i)).collect();
            let mut entries: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); zs.len()];
            for (c, v) in &rel.terms {
                let cand = &relations.candidates[*c];
                for (slot, &r) in rows_of_generator[cand.generator].iter().enumerate() {
                    for (z, a) in &actions[*c][slot] {
                        *entries[position[z]].entry(r).or_insert_with(BigInt::zero) += v * a;
                    }
                }
            }
            entries.into_iter().map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect()
        })
        .collect();
    Ok(SparseD { row_index, col_index, columns: blocks.into_iter().flatten().collect() })
}

/// Assembles `D` for the target functor `problem.target` as a dense matrix.
pub fn build_d(problem: &ExtProblem, relations: &RelationBasis) -> Result<DPresentation, ExtError> {
    Ok(build_d_sparse(problem, relations)?.to_dense())
}

fn pivot_torsion(d: &IntMatrix) -> Option<FgAbelianGroup> {
    let (rows, cols) = find_pivot_ordering(d)?;
    pivot_reduce(d, &rows, &cols).ok().map(|g| g.torsion_part())
}

/// Torsion of the row-span cokernel of `d`, through a pivotal ordering when
/// one exists. Returns the group and whether the pivot path was taken.
pub fn torsion_of_cokernel(d: &IntMatrix, try_pivot: bool) -> (FgAbelianGroup, bool) {
    if let Some(g) = try_pivot.then(|| pivot_torsion(d)).flatten() {
        return (g, true);
    }
    let factors = invariant_factors(d);
    (FgAbelianGroup::from_invariant_factors(0, &factors), false)
}

pub fn ext1(problem: &ExtProblem) -> Result<ExtResult, ExtError> {
    ext1_with(problem, &ExtConfig::default())
}

pub fn ext1_with(problem: &ExtProblem, config: &ExtConfig) -> Result<ExtResult, ExtError> {
    let start = Instant::now();
    let generators = match &config.generators {
        Some(gens) => {
            if let Some(bad) = gens.iter().find(|x| !problem.source.admits(x) || !x.has_support_range(x.support_len()))
            {
                return Err(ExtError::InvalidGenerator { generator: bad.to_string(), spec: problem.source });
            }
            gens.clone()
        }
        None => generator_system(problem.source),
    };
    let max_card = config.max_card.unwrap_or_else(|| problem.max_card());
    let n = problem.target.degree;

    let count = count_candidates(&generators, n, max_card);
    if count > config.max_mazes as u128 {
        return Err(ExtError::TooManyMazes { problem: problem.to_string(), count, limit: config.max_mazes });
    }
    let candidates = candidate_mazes(&generators, n, max_card);
    let evaluation =
        if config.keep_matrices { Some(evaluation_matrix(problem.source, &generators, &candidates)?) } else { None };
    let relations = annihilator_basis(problem.source, &generators, candidates)?;

    let width: usize = relations.relations.iter().map(|r| cross_effect_basis(problem.target, r.codomain).len()).sum();
    if width > config.max_d_cols {
        return Err(ExtError::TooWide { problem: problem.to_string(), cols: width, limit: config.max_d_cols });
    }
    let sparse = build_d_sparse(problem, &relations)?;
    let (rows, cols) = (sparse.row_index.len(), sparse.col_index.len());
    let small = rows.saturating_mul(cols) <= PIVOT_DENSE_LIMIT;
    let dense = (config.keep_matrices || (config.try_pivot && small)).then(|| sparse.to_dense());
    let pivot = dense.as_ref().filter(|_| config.try_pivot && small).and_then(|d| pivot_torsion(&d.matrix));
    let pivot_used = pivot.is_some();
    let group = pivot.unwrap_or_else(|| sparse.torsion());

    let diagnostics = Diagnostics {
        generators: generators.len(),
        candidate_mazes: relations.candidates.len(),
        relation_rank: relations.relations.len(),
        d_rows: rows,
        d_cols: cols,
        millis: start.elapsed().as_millis(),
        pivot_used,
        frontier: problem.is_frontier(),
    };
    Ok(ExtResult {
        problem: *problem,
        group,
        diagnostics,
        evaluation,
        presentation: dense.filter(|_| config.keep_matrices),
    })
}

/// `n! / (m_1! m_2! ...)`.
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u64;
    for &p in parts {
        total += p as u64;
        acc *= binomial(total, p as u64);
    }
    acc
}

/// Greatest common divisor of the multinomials over all ways of writing `n`
/// with at least two positive parts; 0 when there are none.
pub fn multinomial_gcd(n: usize) -> BigInt {
    integer_partitions(n)
        .into_iter()
        .filter(|parts| parts.len() >= 2)
        .fold(BigInt::zero(), |g, parts| g.gcd(&multinomial(&parts)))
}

/// Ext¹(I, S^n), computed from the multinomial GCD and, independently, from
/// the prime factorization of `n`. Panics if the two disagree.
pub fn ext1_i_sn_closed_form(n: usize) -> FgAbelianGroup {
    assert!(n >= 1, "degree must be positive");
    let d = multinomial_gcd(n);
    let by_gcd = if d.is_zero() { FgAbelianGroup::trivial() } else { FgAbelianGroup::from_cyclic_orders(0, [d]) };
    let primes = factorize(&BigUint::from(n));
    let by_primes = match primes.as_slice() {
        [(p, _)] => FgAbelianGroup::from_cyclic_orders(0, [BigInt::from(p.clone())]),
        _ => FgAbelianGroup::trivial(),
    };
    assert_eq!(by_gcd, by_primes, "closed forms disagree for n = {n}");
    by_gcd
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Exponent of the prime `p` in `n!`: `Σ_i floor(n / p^i)`.
pub fn legendre_valuation(p: u64, n: u64) -> Result<u64, ExtError> {
    if !is_prime(p) {
        return Err(ExtError::NotPrime(p));
    }
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    Ok(total)
}
