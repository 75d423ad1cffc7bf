use crate::error::{Error, Result};

/// A finite group given by its multiplication table. `mul[g][h] = gh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms exhaustively.
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::invariant("group/elements", "a group is nonempty"));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("multiplication table must be {n}×{n}")));
        }
        for (g, row) in mul.iter().enumerate() {
            if let Some(h) = row.iter().position(|&x| x >= n) {
                return Err(Error::invariant(format!("group/mul/{g}/{h}"), "product is not an element"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::invariant(
                            format!("group/mul/{a}/{b}"),
                            format!("({}·{})·{} ≠ {}·({}·{})", names[a], names[b], names[c], names[a], names[b], names[c]),
                        ));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| Error::invariant("group/mul", "no identity element"))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| mul[g][h] == identity && mul[h][g] == identity) {
                Some(h) => inverse.push(h),
                None => return Err(Error::invariant(format!("group/elements/{g}"), "no inverse")),
            }
        }
        Ok(FiniteGroup {
            names,
            mul,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// `ℤ/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new((0..n).map(|k| k.to_string()).collect(), mul).expect("cyclic group")
    }

    /// The symmetric group on `k` letters, elements ordered lexicographically
    /// as permutations; `gh` acts as `h` first, then `g`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let mul = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index(&h.iter().map(|&i| g[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let names = perms.iter().map(|p| p.iter().map(|i| i.to_string()).collect::<String>()).collect();
        FiniteGroup::new(names, mul).expect("symmetric group")
    }

    /// The dihedral group of order `2n`: element `r^k` is `k`, `s r^k` is `n + k`,
    /// with `s r s = r^{-1}`.
    pub fn dihedral(n: usize) -> Self {
        let decode = |x: usize| (x / n, x % n);
        let encode = |f: usize, k: usize| f * n + k;
        let mul = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (fa, ka) = decode(a);
                        let (fb, kb) = decode(b);
                        // s^fa r^ka s^fb r^kb = s^{fa+fb} r^{±ka + kb}
                        let k = if fb == 0 { ka + kb } else { n - ka + kb };
                        encode((fa + fb) % 2, k % n)
                    })
                    .collect()
            })
            .collect();
        let names = (0..2 * n)
            .map(|x| {
                let (f, k) = decode(x);
                format!("{}r{k}", if f == 1 { "s" } else { "" })
            })
            .collect();
        FiniteGroup::new(names, mul).expect("dihedral group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Number of `p`-tuples, `|G|^p`.
    pub fn tuple_count(&self, p: usize) -> usize {
        self.order().pow(p as u32)
    }

    /// Index of a tuple in base `|G|`, first entry most significant.
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &g| acc * self.order() + g)
    }

    /// Inverse of [`FiniteGroup::tuple_index`].
    pub fn tuple_at(&self, p: usize, mut index: usize) -> Vec<usize> {
        let n = self.order();
        let mut out = vec![0; p];
        for slot in out.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|i| if i >= first { i + 1 } else { i }));
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups() {
        assert_eq!(FiniteGroup::cyclic(3).order(), 3);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        let d3 = FiniteGroup::dihedral(3);
        assert_eq!(d3.order(), 6);
        // Both are nonabelian.
        assert!((0..6).any(|a| (0..6).any(|b| d3.mul(a, b) != d3.mul(b, a))));
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    }

    #[test]
    fn tuple_roundtrip() {
        let g = FiniteGroup::cyclic(3);
        for i in 0..27 {
            assert_eq!(g.tuple_index(&g.tuple_at(3, i)), i);
        }
        assert_eq!(g.tuple_at(2, 5), vec![1, 2]);
    }

    #[test]
    fn detects_nonassociative_table() {
        let mut mul = FiniteGroup::cyclic(3).table().to_vec();
        mul[1][1] = 0;
        mul[1][2] = 2;
        let err = FiniteGroup::new(vec!["0".into(), "1".into(), "2".into()], mul).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }
}
