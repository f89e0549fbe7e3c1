use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::MatrixError;

/// A finitely generated abelian group `Z^free_rank + Z/t1 + Z/t2 + ...`
/// with `t1 | t2 | ...` and every `ti >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    /// Direct sum of `free_rank` copies of `Z` and the cyclic groups of the
    /// given orders. Orders are taken up to sign; order 0 stands for `Z` and
    /// order 1 for the trivial group. The result is normalized to invariant
    /// factor form.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(free_rank: usize, orders: I) -> Self {
        let mut free_rank = free_rank;
        let mut by_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        for order in orders {
            let order = order.magnitude().clone();
            if order.is_zero() {
                free_rank += 1;
                continue;
            }
            for (p, e) in factorize(&order) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![BigUint::one(); len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable();
            // Largest exponents go to the last invariant factors.
            for (slot, e) in torsion.iter_mut().rev().zip(exps.into_iter().rev()) {
                *slot *= p.pow(e);
            }
        }
        Self { free_rank, torsion: torsion.into_iter().map(BigInt::from).collect() }
    }

    /// Cokernel-style constructor from a list of invariant factors; entries
    /// equal to 1 are dropped and a zero counts as a free summand.
    pub fn from_invariant_factors(free_rank: usize, factors: &[BigInt]) -> Self {
        Self::from_cyclic_orders(free_rank, factors.iter().cloned())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// The torsion subgroup.
    pub fn torsion_part(&self) -> FgAbelianGroup {
        Self { free_rank: 0, torsion: self.torsion.clone() }
    }

    /// Prime-power orders of the cyclic summands, sorted by prime, then exponent.
    pub fn primary_decomposition(&self) -> Vec<(BigUint, u32)> {
        let mut out: Vec<(BigUint, u32)> = self.torsion.iter().flat_map(|t| factorize(t.magnitude())).collect();
        out.sort();
        out
    }

    /// `Z/2`, `Z/4`, ... one entry per primary summand.
    pub fn primary_strings(&self) -> Vec<String> {
        self.primary_decomposition().into_iter().map(|(p, e)| format!("Z/{}", p.pow(e))).collect()
    }
}

/// `0` for the trivial group, otherwise the free part followed by the
/// primary summands, e.g. `Z^2 + Z/2 + Z/3`.
impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.primary_strings());
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the display form. Summands may be `Z`, `Z^k`, or `Z/n` for any
/// `n`, so both `Z/6` and `Z/2 + Z/3` are accepted; `0` is the trivial group.
impl FromStr for FgAbelianGroup {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MatrixError::Parse(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split(['+', '⊕']) {
            let part = part.trim();
            if part == "Z" {
                free += 1;
            } else if let Some(k) = part.strip_prefix("Z^") {
                free += k.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(n) = part.strip_prefix("Z/").or_else(|| part.strip_prefix("Z_")) {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                if !n.is_positive() {
                    return Err(bad());
                }
                orders.push(n);
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(free, orders))
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FgAbelianGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let factors: Vec<json_number::Num> = self.torsion.iter().map(json_number::Num::from).collect();
        st.serialize_field("invariant_factors", &factors)?;
        st.end()
    }
}

mod json_number {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Serialize, Serializer};

    /// Serializes as a plain number when it fits in `u64`, else as a decimal string.
    pub struct Num(pub BigInt);

    impl From<&BigInt> for Num {
        fn from(v: &BigInt) -> Self {
            Num(v.clone())
        }
    }

    impl Serialize for Num {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            match self.0.to_u64() {
                Some(v) => serializer.serialize_u64(v),
                None => serializer.serialize_str(&self.0.to_string()),
            }
        }
    }
}

/// Prime factorization by trial division. Torsion orders arising here are
/// tiny, so nothing cleverer is needed.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    if let Some(mut m) = n.to_u64() {
        let mut p = 2u64;
        while p <= m / p {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push((BigUint::from(p), e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.push((BigUint::from(m), 1));
        }
        return out;
    }
    let mut m = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            let mut e = 0;
            while m.is_multiple_of(&p) {
                m /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}
