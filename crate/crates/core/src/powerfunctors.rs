//! Symmetric, exterior and divided powers of free abelian groups.
//!
//! Monomials are indexed by [`Multiset`]s: `{1,1,2}` is `e1^2*e2` in `S^3`
//! and `e1[2]*e2[1]` in `Γ^3`; in `Λ^n` only strict sets occur and
//! `{1,2}` is `e1^e2`. The matrix of `F(φ)` for an integer matrix `φ` is
//! computed monomial by monomial, each family by its own expansion rule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::IntMatrix;
use crate::multiset::{enumerate_with_support_and_card, Multiset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("functor degree must be at least 1")]
    ZeroDegree,
    #[error("vector lives in rank {found}, map expects rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("monomial {monomial} does not have degree {degree}")]
    DegreeMismatch { monomial: String, degree: usize },
    #[error("cannot parse monomial expression {0:?}")]
    Parse(String),
    #[error("cannot parse functor {0:?}; expected family:degree with family s, lambda or gamma")]
    ParseFunctor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Symmetric,
    Exterior,
    Divided,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Symmetric, Family::Exterior, Family::Divided];

    /// Short name used on the command line: `s`, `lambda`, `gamma`.
    pub fn token(self) -> &'static str {
        match self {
            Family::Symmetric => "s",
            Family::Exterior => "lambda",
            Family::Divided => "gamma",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Symmetric => "S",
            Family::Exterior => "Λ",
            Family::Divided => "Γ",
        }
    }
}

/// One of `S^n`, `Λ^n`, `Γ^n` with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FunctorSpec {
    pub family: Family,
    pub degree: usize,
}

impl FunctorSpec {
    pub fn new(family: Family, degree: usize) -> Result<Self, FunctorError> {
        if degree == 0 {
            return Err(FunctorError::ZeroDegree);
        }
        Ok(Self { family, degree })
    }

    pub fn symmetric(degree: usize) -> Self {
        Self::new(Family::Symmetric, degree).expect("degree must be positive")
    }

    pub fn exterior(degree: usize) -> Self {
        Self::new(Family::Exterior, degree).expect("degree must be positive")
    }

    pub fn divided(degree: usize) -> Self {
        Self::new(Family::Divided, degree).expect("degree must be positive")
    }

    /// `s:3`, `lambda:2`, `gamma:4`.
    pub fn token(&self) -> String {
        format!("{}:{}", self.family.token(), self.degree)
    }

    /// Whether `monomial` indexes a basis element of this functor.
    pub fn admits(&self, monomial: &Multiset) -> bool {
        monomial.cardinality() == self.degree && (self.family != Family::Exterior || monomial.is_strict())
    }
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.family.symbol(), self.degree)
    }
}

/// All monomials of `spec` on `Z^l`, in canonical order.
pub fn monomial_basis(spec: FunctorSpec, l: usize) -> Vec<Multiset> {
    fn rec(spec: FunctorSpec, l: u32, start: u32, current: &mut Vec<u32>, out: &mut Vec<Multiset>) {
        if current.len() == spec.degree {
            out.push(Multiset::from_elements(current.iter().copied()).expect("elements are in range"));
            return;
        }
        let first = if spec.family == Family::Exterior { start + 1 } else { start.max(1) };
        for e in first..=l {
            current.push(e);
            rec(spec, l, e, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(spec, l as u32, 0, &mut Vec::with_capacity(spec.degree), &mut out);
    out
}

/// Monomials of `spec` whose support is exactly `{1, ..., k}`: a basis of
/// the rank-`k` cross-effect evaluated on copies of `Z`.
pub fn cross_effect_basis(spec: FunctorSpec, k: usize) -> Vec<Multiset> {
    let supp: Vec<u32> = (1..=k as u32).collect();
    let mut out = enumerate_with_support_and_card(&supp, spec.degree);
    if spec.family == Family::Exterior {
        out.retain(Multiset::is_strict);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `e^[r] * e^[s] = coefficient * e^[r+s]` in the divided power algebra,
/// where the coefficient is the product of `binom(r_i + s_i, r_i)`.
pub fn gamma_multiply(r: &Multiset, s: &Multiset) -> (BigInt, Multiset) {
    let product = r.sum(s);
    let coefficient = product.entries().iter().map(|&(e, d)| binomial(d as u64, r.degree(e) as u64)).product();
    (coefficient, product)
}

type Terms = BTreeMap<Multiset, BigInt>;

fn add_into(terms: &mut Terms, key: Multiset, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Image of basis vector `e_x` under `phi` as `(target, coefficient)` pairs,
/// targets 1-based.
fn column_image(phi: &IntMatrix, x: u32) -> Vec<(u32, BigInt)> {
    let col = x as usize - 1;
    (0..phi.rows()).filter(|&t| !phi.get(t, col).is_zero()).map(|t| (t as u32 + 1, phi.get(t, col).clone())).collect()
}

/// All multisets of size `r` over the given targets, each with the product
/// of the matching coefficients raised to the multiplicities.
fn weighted_multisets(image: &[(u32, BigInt)], r: usize) -> Vec<(Multiset, BigInt)> {
    fn rec(
        image: &[(u32, BigInt)],
        from: usize,
        remaining: usize,
        current: &mut Vec<(u32, u32)>,
        weight: BigInt,
        out: &mut Vec<(Multiset, BigInt)>,
    ) {
        if remaining == 0 {
            out.push((Multiset::from_degrees(current.iter().copied()).expect("in range"), weight));
            return;
        }
        if from == image.len() {
            return;
        }
        let (t, a) = &image[from];
        let mut w = weight.clone();
        for d in 0..=remaining {
            if d > 0 {
                w *= a;
                current.push((*t, d as u32));
            }
            rec(image, from + 1, remaining - d, current, w.clone(), out);
            if d > 0 {
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(image, 0, r, &mut Vec::new(), BigInt::one(), &mut out);
    out
}

/// `F(phi)` applied to the single monomial `e^m`. `phi` is `l x k`, mapping
/// `Z^k` to `Z^l`; `m` must have support inside `{1, ..., k}`.
pub fn apply_to_monomial(family: Family, phi: &IntMatrix, m: &Multiset) -> BTreeMap<Multiset, BigInt> {
    debug_assert!(m.max_element() as usize <= phi.cols());
    let mut acc: Terms = BTreeMap::new();
    acc.insert(Multiset::new(), BigInt::one());
    match family {
        Family::Symmetric => {
            for &(x, d) in m.entries() {
                let image = column_image(phi, x);
                for _ in 0..d {
                    let mut next = Terms::new();
                    for (key, c) in &acc {
                        for (t, a) in &image {
                            let mut k = key.clone();
                            k.insert(*t);
                            add_into(&mut next, k, c * a);
                        }
                    }
                    acc = next;
                }
            }
        }
        Family::Divided => {
            for &(x, d) in m.entries() {
                let power = weighted_multisets(&column_image(phi, x), d as usize);
                let mut next = Terms::new();
                for (key, c) in &acc {
                    for (r, w) in &power {
                        let (binom, prod) = gamma_multiply(key, r);
                        add_into(&mut next, prod, c * w * binom);
                    }
                }
                acc = next;
            }
        }
        Family::Exterior => {
            if !m.is_strict() {
                return Terms::new();
            }
            for &(x, _) in m.entries() {
                let image = column_image(phi, x);
                let mut next = Terms::new();
                for (key, c) in &acc {
                    for (t, a) in &image {
                        if key.degree(*t) > 0 {
                            continue;
                        }
                        // e_S ^ e_t: move e_t left past every element of S above t.
                        let above = key.entries().iter().filter(|&&(e, _)| e > *t).count();
                        let mut k = key.clone();
                        k.insert(*t);
                        let v = c * a;
                        add_into(&mut next, k, if above % 2 == 1 { -v } else { v });
                    }
                }
                acc = next;
            }
        }
    }
    acc
}

/// Matrix of `F(phi)` from `monomial_basis(spec, k)` to
/// `monomial_basis(spec, l)` where `phi` is `l x k`.
pub fn apply_linear(spec: FunctorSpec, phi: &IntMatrix) -> IntMatrix {
    let src = monomial_basis(spec, phi.cols());
    let dst = monomial_basis(spec, phi.rows());
    let position: BTreeMap<&Multiset, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = IntMatrix::zeros(dst.len(), src.len());
    for (j, m) in src.iter().enumerate() {
        for (key, c) in apply_to_monomial(spec.family, phi, m) {
            out.set(position[&key], j, c);
        }
    }
    out
}

/// An integer combination of monomials of one functor on `Z^dimension`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialVector {
    family: Family,
    dimension: usize,
    terms: BTreeMap<Multiset, BigInt>,
}

impl MonomialVector {
    pub fn zero(family: Family, dimension: usize) -> Self {
        Self { family, dimension, terms: BTreeMap::new() }
    }

    /// The basis vector `e^m`; the dimension is the largest element of `m`.
    pub fn monomial(spec: FunctorSpec, m: Multiset) -> Result<Self, FunctorError> {
        if !spec.admits(&m) {
            return Err(FunctorError::DegreeMismatch { monomial: m.to_string(), degree: spec.degree });
        }
        let dimension = m.max_element() as usize;
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        Ok(Self { family: spec.family, dimension, terms })
    }

    pub fn from_terms<I>(family: Family, dimension: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Multiset, BigInt)>,
    {
        let mut v = Self::zero(family, dimension);
        for (m, c) in terms {
            v.add_term(m, c);
        }
        v
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &BTreeMap<Multiset, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Multiset) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Multiset, c: BigInt) {
        add_into(&mut self.terms, m, c);
    }

    pub fn add_scaled(&mut self, other: &MonomialVector, factor: &BigInt) {
        for (m, c) in &other.terms {
            add_into(&mut self.terms, m.clone(), c * factor);
        }
    }

    /// Keeps only the monomials whose support is exactly `{1, ..., k}`; the
    /// result lives in rank `k`.
    pub fn restrict_to_support(&self, k: usize) -> MonomialVector {
        Self {
            family: self.family,
            dimension: k,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.has_support_range(k))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `F(phi)`; `phi` must have `self.dimension()` columns.
    pub fn apply(&self, phi: &IntMatrix) -> Result<MonomialVector, FunctorError> {
        if phi.cols() != self.dimension {
            return Err(FunctorError::DimensionMismatch { expected: phi.cols(), found: self.dimension });
        }
        let mut out = Self::zero(self.family, phi.rows());
        for (m, c) in &self.terms {
            for (key, v) in apply_to_monomial(self.family, phi, m) {
                add_into(&mut out.terms, key, v * c);
            }
        }
        Ok(out)
    }

    /// Parses the printed form for the given family. The dimension is the
    /// largest index that occurs, or `dimension` when that is larger.
    pub fn parse(spec: FunctorSpec, text: &str, dimension: usize) -> Result<Self, FunctorError> {
        let bad = || FunctorError::Parse(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Self::zero(spec.family, dimension);
        if compact == "0" {
            return Ok(out);
        }
        if compact.is_empty() {
            return Err(bad());
        }
        // Split into signed terms at top-level '+' and '-'.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut current = String::new();
        let mut depth = 0;
        for ch in compact.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    current.push(ch);
                }
                ']' => {
                    depth -= 1;
                    current.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if !current.is_empty() {
                        terms.push((negative, std::mem::take(&mut current)));
                    } else if !terms.is_empty() || negative {
                        return Err(bad());
                    }
                    negative = ch == '-';
                }
                _ => current.push(ch),
            }
        }
        if current.is_empty() {
            return Err(bad());
        }
        terms.push((negative, current));

        for (negative, term) in terms {
            let (coeff, body) = split_coefficient(&term).ok_or_else(bad)?;
            let (sign, m) = parse_monomial(spec.family, body).ok_or_else(bad)?;
            if m.cardinality() != spec.degree {
                return Err(FunctorError::DegreeMismatch { monomial: body.to_string(), degree: spec.degree });
            }
            out.dimension = out.dimension.max(m.max_element() as usize);
            let c = if negative { -coeff } else { coeff } * sign;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn split_coefficient(term: &str) -> Option<(BigInt, &str)> {
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return Some((BigInt::one(), term));
    }
    let coeff: BigInt = term[..digits].parse().ok()?;
    let rest = term[digits..].strip_prefix('*')?;
    Some((coeff, rest))
}

fn parse_index(s: &str) -> Option<u32> {
    let idx: u32 = s.strip_prefix('e')?.parse().ok()?;
    (idx > 0).then_some(idx)
}

/// Returns the sign picked up by reordering wedge factors (0 for a repeated
/// factor) together with the monomial.
fn parse_monomial(family: Family, body: &str) -> Option<(i32, Multiset)> {
    match family {
        Family::Symmetric => {
            let mut pairs = Vec::new();
            for factor in body.split('*') {
                let (idx, exp) = match factor.split_once('^') {
                    Some((i, d)) => (parse_index(i)?, d.parse::<u32>().ok()?),
                    None => (parse_index(factor)?, 1),
                };
                pairs.push((idx, exp));
            }
            Some((1, Multiset::from_degrees(pairs).ok()?))
        }
        Family::Divided => {
            let mut pairs = Vec::new();
            for factor in body.split('*') {
                let (idx, exp) = match factor.split_once('[') {
                    Some((i, d)) => (parse_index(i)?, d.strip_suffix(']')?.parse::<u32>().ok()?),
                    None => (parse_index(factor)?, 1),
                };
                pairs.push((idx, exp));
            }
            Some((1, Multiset::from_degrees(pairs).ok()?))
        }
        Family::Exterior => {
            let factors: Vec<u32> = body.split(['^', '∧']).map(parse_index).collect::<Option<_>>()?;
            let mut sign = 1;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    match factors[i].cmp(&factors[j]) {
                        std::cmp::Ordering::Greater => sign = -sign,
                        std::cmp::Ordering::Equal => sign = 0,
                        std::cmp::Ordering::Less => {}
                    }
                }
            }
            Some((sign, Multiset::from_elements(factors).ok()?))
        }
    }
}

fn monomial_text(family: Family, m: &Multiset) -> String {
    let factors: Vec<String> = m
        .entries()
        .iter()
        .map(|&(e, d)| match family {
            Family::Symmetric if d == 1 => format!("e{e}"),
            Family::Symmetric => format!("e{e}^{d}"),
            Family::Divided => format!("e{e}[{d}]"),
            Family::Exterior => format!("e{e}"),
        })
        .collect();
    let sep = if family == Family::Exterior { "^" } else { "*" };
    factors.join(sep)
}

/// `2*e1*e2^2 + e1^3`, `e1[2]*e2[1] - e1[1]*e2[2]`, `e1^e2`; `0` when empty.
impl fmt::Display for MonomialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", monomial_text(self.family, m))?;
        }
        Ok(())
    }
}

impl FromStr for Family {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" | "sym" | "symmetric" => Ok(Family::Symmetric),
            "l" | "lambda" | "exterior" | "λ" => Ok(Family::Exterior),
            "g" | "gamma" | "divided" | "γ" => Ok(Family::Divided),
            _ => Err(FunctorError::ParseFunctor(s.to_string())),
        }
    }
}

/// Parses `s:3`, `lambda:2`, `gamma:4` (case-insensitive, `l` and `g`
/// accepted as abbreviations).
impl FromStr for FunctorSpec {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FunctorError::ParseFunctor(s.to_string());
        let (family, degree) = s.split_once(':').ok_or_else(bad)?;
        let family: Family = family.parse().map_err(|_| bad())?;
        let degree: usize = degree.trim().parse().map_err(|_| bad())?;
        FunctorSpec::new(family, degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    fn v(spec: FunctorSpec, s: &str) -> MonomialVector {
        MonomialVector::parse(spec, s, 0).unwrap()
    }

    #[test]
    fn bases() {
        assert_eq!(monomial_basis(FunctorSpec::symmetric(2), 2), vec![ms("1,1"), ms("1,2"), ms("2,2")]);
        assert_eq!(monomial_basis(FunctorSpec::exterior(2), 2), vec![ms("1,2")]);
        assert_eq!(monomial_basis(FunctorSpec::divided(3), 1), vec![ms("1,1,1")]);
        assert!(monomial_basis(FunctorSpec::exterior(3), 2).is_empty());
        assert_eq!(monomial_basis(FunctorSpec::symmetric(3), 3).len(), 10);
        assert_eq!(cross_effect_basis(FunctorSpec::divided(3), 2), vec![ms("1,1,2"), ms("1,2,2")]);
        assert!(cross_effect_basis(FunctorSpec::exterior(3), 2).is_empty());
    }

    #[test]
    fn symmetric_square_of_a_sum() {
        let phi = IntMatrix::from_i64(&[vec![1], vec![1]]);
        let m = apply_linear(FunctorSpec::symmetric(2), &phi);
        // Source basis [e1^2], target [e1^2, e1e2, e2^2].
        assert_eq!(m, IntMatrix::from_i64(&[vec![1], vec![2], vec![1]]));
    }

    #[test]
    fn divided_square_of_a_sum() {
        let phi = IntMatrix::from_i64(&[vec![1], vec![1]]);
        let m = apply_linear(FunctorSpec::divided(2), &phi);
        assert_eq!(m, IntMatrix::from_i64(&[vec![1], vec![1], vec![1]]));
    }

    #[test]
    fn exterior_identity_and_determinant() {
        for n in 1..=3 {
            let id = apply_linear(FunctorSpec::exterior(n), &IntMatrix::identity(3));
            assert_eq!(id, IntMatrix::identity(id.rows()));
        }
        let phi = IntMatrix::from_i64(&[vec![2, 3], vec![5, 7]]);
        assert_eq!(apply_linear(FunctorSpec::exterior(2), &phi), IntMatrix::from_i64(&[vec![14 - 15]]));
    }

    #[test]
    fn gamma_products() {
        assert_eq!(gamma_multiply(&ms("1"), &ms("1")), (BigInt::from(2), ms("1,1")));
        assert_eq!(gamma_multiply(&ms("1,1"), &ms("2")), (BigInt::from(1), ms("1,1,2")));
        assert_eq!(gamma_multiply(&ms("1,1"), &ms("1")), (BigInt::from(3), ms("1,1,1")));
    }

    #[test]
    fn text_round_trip() {
        let s3 = FunctorSpec::symmetric(3);
        let x = v(s3, "2*e1*e2^2 - e1^3");
        assert_eq!(x.to_string(), "-e1^3 + 2*e1*e2^2");
        assert_eq!(v(s3, &x.to_string()), x);
        let g3 = FunctorSpec::divided(3);
        let y = v(g3, "e1[2]*e2[1] + e1*e2[2]");
        assert_eq!(y.to_string(), "e1[2]*e2[1] + e1[1]*e2[2]");
        let l2 = FunctorSpec::exterior(2);
        assert_eq!(v(l2, "e2∧e1").to_string(), "-e1^e2");
        assert!(v(l2, "e1^e1").is_zero());
        assert_eq!(v(s3, "0").to_string(), "0");
        assert!(MonomialVector::parse(s3, "e1^2", 0).is_err());
        assert!(MonomialVector::parse(s3, "e1^2*", 0).is_err());
        assert!(MonomialVector::parse(s3, "3", 0).is_err());
    }

    #[test]
    fn functor_tokens() {
        assert_eq!("S:3".parse::<FunctorSpec>().unwrap(), FunctorSpec::symmetric(3));
        assert_eq!("l:2".parse::<FunctorSpec>().unwrap(), FunctorSpec::exterior(2));
        assert_eq!("Gamma:4".parse::<FunctorSpec>().unwrap(), FunctorSpec::divided(4));
        assert!("gamma:0".parse::<FunctorSpec>().is_err());
        assert!("t:2".parse::<FunctorSpec>().is_err());
    }

    #[test]
    fn dimension_checked_on_apply() {
        let x = v(FunctorSpec::symmetric(2), "e1*e2");
        assert!(x.apply(&IntMatrix::identity(3)).is_err());
        assert_eq!(x.apply(&IntMatrix::identity(2)).unwrap(), x);
    }
}
