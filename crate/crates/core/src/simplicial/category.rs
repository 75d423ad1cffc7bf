use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite category with composition written diagrammatically:
/// `comp(i, j)` is "`i` then `j`", defined exactly when `tgt(i) = src(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
    identity: Vec<usize>,
}

impl FiniteCategory {
    /// Validates the category axioms. Identities are found from the
    /// composition table.
    pub fn new(
        objects: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let n_obj = objects.len();
        let n_mor = src.len();
        if n_obj == 0 {
            return Err(Error::invariant("objects", "a category needs at least one object"));
        }
        if tgt.len() != n_mor {
            return Err(Error::DimensionMismatch("src and tgt lists differ in length".into()));
        }
        if let Some(m) = (0..n_mor).find(|&m| src[m] >= n_obj || tgt[m] >= n_obj) {
            return Err(Error::invariant(format!("morphisms/{m}"), "endpoint is not an object"));
        }
        if comp.len() != n_mor || comp.iter().any(|r| r.len() != n_mor) {
            return Err(Error::DimensionMismatch(format!("composition table must be {n_mor}×{n_mor}")));
        }
        for i in 0..n_mor {
            for j in 0..n_mor {
                let loc = || format!("comp/{i}/{j}");
                match comp[i][j] {
                    Some(k) if tgt[i] != src[j] => {
                        return Err(Error::invariant(loc(), format!("defined as {k} but arrows are not composable")))
                    }
                    None if tgt[i] == src[j] => return Err(Error::invariant(loc(), "composable arrows lack a composite")),
                    Some(k) if k >= n_mor => return Err(Error::invariant(loc(), "composite is not a morphism")),
                    Some(k) if src[k] != src[i] || tgt[k] != tgt[j] => {
                        return Err(Error::invariant(loc(), "composite has wrong endpoints"))
                    }
                    _ => {}
                }
            }
        }
        let mut identity = Vec::with_capacity(n_obj);
        for x in 0..n_obj {
            let id = (0..n_mor).find(|&m| {
                src[m] == x
                    && tgt[m] == x
                    && (0..n_mor).all(|j| src[j] != x || comp[m][j] == Some(j))
                    && (0..n_mor).all(|i| tgt[i] != x || comp[i][m] == Some(i))
            });
            match id {
                Some(m) => identity.push(m),
                None => return Err(Error::invariant(format!("objects/{x}"), "no identity morphism")),
            }
        }
        for i in 0..n_mor {
            for j in 0..n_mor {
                let Some(ij) = comp[i][j] else { continue };
                for k in 0..n_mor {
                    let Some(jk) = comp[j][k] else { continue };
                    if comp[ij][k] != comp[i][jk] {
                        return Err(Error::invariant(format!("comp/{i}/{j}/{k}"), "composition is not associative"));
                    }
                }
            }
        }
        Ok(FiniteCategory {
            objects,
            src,
            tgt,
            comp,
            identity,
        })
    }

    /// The category with one object and one morphism.
    pub fn point() -> Self {
        FiniteCategory::discrete(1)
    }

    /// `k` objects and only identities.
    pub fn discrete(k: usize) -> Self {
        let comp = (0..k).map(|i| (0..k).map(|j| (i == j).then_some(i)).collect()).collect();
        FiniteCategory::new((0..k).map(|x| format!("x{x}")).collect(), (0..k).collect(), (0..k).collect(), comp)
            .expect("discrete category is valid")
    }

    /// The category of a finite poset given by its strict order relation
    /// `less(x, y)`, which must be transitive.
    pub fn poset(k: usize, less: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut arrows = Vec::new();
        for x in 0..k {
            for y in 0..k {
                if x == y || less(x, y) {
                    arrows.push((x, y));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = arrows.iter().enumerate().map(|(m, &a)| (a, m)).collect();
        let comp = arrows
            .iter()
            .map(|&(a, b)| arrows.iter().map(|&(c, d)| if b == c { index.get(&(a, d)).copied() } else { None }).collect())
            .collect();
        FiniteCategory::new(
            (0..k).map(|x| format!("x{x}")).collect(),
            arrows.iter().map(|a| a.0).collect(),
            arrows.iter().map(|a| a.1).collect(),
            comp,
        )
    }

    /// The zigzag poset on `2k` objects, `x_{2i} < x_{2i±1}`, whose nerve
    /// is a triangulated circle (`k ≥ 2`).
    pub fn cycle(k: usize) -> Self {
        let n = 2 * k;
        FiniteCategory::poset(n, |x, y| x % 2 == 0 && y % 2 == 1 && (y == (x + 1) % n || x == (y + 1) % n))
            .expect("zigzag order is transitive")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn src(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.tgt[m]
    }

    pub fn compose(&self, i: usize, j: usize) -> Option<usize> {
        self.comp[i][j]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// Morphisms leaving `x`, in index order.
    pub fn out_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_morphisms()).filter(move |&m| self.src[m] == x)
    }

    /// The two-sided inverse of `m`, if one exists.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let (a, b) = (self.src[m], self.tgt[m]);
        (0..self.num_morphisms())
            .find(|&n| self.comp[m][n] == Some(self.identity[a]) && self.comp[n][m] == Some(self.identity[b]))
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.num_morphisms()).all(|m| self.inverse(m).is_some())
    }
}

/// A finite category in which every morphism is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    category: FiniteCategory,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(category: FiniteCategory) -> Result<Self> {
        let mut inverse = Vec::with_capacity(category.num_morphisms());
        for m in 0..category.num_morphisms() {
            match category.inverse(m) {
                Some(n) => inverse.push(n),
                None => return Err(Error::invariant(format!("morphisms/{m}"), "morphism is not invertible")),
            }
        }
        Ok(FiniteGroupoid { category, inverse })
    }

    /// One object, one morphism.
    pub fn point() -> Self {
        FiniteGroupoid::new(FiniteCategory::point()).expect("point is a groupoid")
    }

    /// `k` objects with identities only.
    pub fn discrete(k: usize) -> Self {
        FiniteGroupoid::new(FiniteCategory::discrete(k)).expect("discrete category is a groupoid")
    }

    /// The pair groupoid: exactly one arrow `x → y` for every pair.
    /// Arrow `(x, y)` has index `x·k + y`.
    pub fn pair(k: usize) -> Self {
        let arrows: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();
        let comp = arrows
            .iter()
            .map(|&(a, b)| arrows.iter().map(|&(c, d)| (b == c).then_some(a * k + d)).collect())
            .collect();
        let cat = FiniteCategory::new(
            (0..k).map(|x| format!("x{x}")).collect(),
            arrows.iter().map(|a| a.0).collect(),
            arrows.iter().map(|a| a.1).collect(),
            comp,
        )
        .expect("pair groupoid is a category");
        FiniteGroupoid::new(cat).expect("pair groupoid is a groupoid")
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn inv(&self, m: usize) -> usize {
        self.inverse[m]
    }
}

impl std::ops::Deref for FiniteGroupoid {
    type Target = FiniteCategory;

    fn deref(&self) -> &FiniteCategory {
        &self.category
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_counts() {
        let g = FiniteGroupoid::pair(3);
        assert_eq!(g.num_objects(), 3);
        assert_eq!(g.num_morphisms(), 9);
        assert_eq!(g.inv(1), 3);
    }

    #[test]
    fn cycle_is_not_a_groupoid() {
        let c = FiniteCategory::cycle(2);
        assert_eq!((c.num_objects(), c.num_morphisms()), (4, 8));
        assert!(!c.is_groupoid());
        assert!(FiniteGroupoid::new(c).is_err());
    }

    #[test]
    fn rejects_missing_identity() {
        // Every composite is arrow 0, so neither arrow is a two-sided unit.
        let err = FiniteCategory::new(
            vec!["x".into()],
            vec![0, 0],
            vec![0, 0],
            vec![vec![Some(0), Some(0)], vec![Some(0), Some(0)]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }
}
