use std::collections::HashMap;

use super::category::FiniteCategory;
use super::semi::{Level, SemiSimplicialSet};

/// Composable strings of the nerve, level by level. Level 0 holds objects
/// `[x]`; level `n ≥ 1` holds `[m_1, …, m_n]` with `tgt(m_k) = src(m_{k+1})`,
/// in lexicographic order.
pub fn nerve_strings(cat: &FiniteCategory, top: usize) -> Vec<Vec<Vec<usize>>> {
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..cat.num_objects()).map(|x| vec![x]).collect()];
    if top >= 1 {
        levels.push((0..cat.num_morphisms()).map(|m| vec![m]).collect());
    }
    for _ in 2..=top {
        let prev = levels.last().expect("level 1 exists");
        let mut next = Vec::new();
        for s in prev {
            let end = cat.tgt(*s.last().expect("nonempty string"));
            for m in cat.out_of(end) {
                let mut t = s.clone();
                t.push(m);
                next.push(t);
            }
        }
        levels.push(next);
    }
    levels
}

/// The face `∂_i` of a composable string.
pub fn string_face(cat: &FiniteCategory, s: &[usize], i: usize) -> Vec<usize> {
    let n = s.len();
    if n == 1 {
        return vec![if i == 0 { cat.tgt(s[0]) } else { cat.src(s[0]) }];
    }
    let mut out = Vec::with_capacity(n - 1);
    if i == 0 {
        out.extend_from_slice(&s[1..]);
    } else if i == n {
        out.extend_from_slice(&s[..n - 1]);
    } else {
        out.extend_from_slice(&s[..i - 1]);
        out.push(cat.compose(s[i - 1], s[i]).expect("composable string"));
        out.extend_from_slice(&s[i + 1..]);
    }
    out
}

/// The nerve truncated at level `top`. `∂_0` drops the first arrow, `∂_n`
/// the last, and inner faces compose adjacent arrows.
pub fn nerve(cat: &FiniteCategory, top: usize) -> SemiSimplicialSet {
    let strings = nerve_strings(cat, top);
    let mut levels = Vec::with_capacity(top + 1);
    for (n, ids) in strings.iter().enumerate() {
        let faces = if n == 0 {
            Vec::new()
        } else {
            let index: HashMap<&[usize], usize> =
                strings[n - 1].iter().enumerate().map(|(k, id)| (id.as_slice(), k)).collect();
            (0..=n)
                .map(|i| ids.iter().map(|s| index[string_face(cat, s, i).as_slice()]).collect())
                .collect()
        };
        levels.push(Level {
            ids: ids.clone(),
            faces,
            labels: None,
        });
    }
    SemiSimplicialSet::new(levels, true).expect("nerve faces satisfy the simplicial identities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::simplicial::{Coefficients, FiniteGroupoid};
    use crate::stackact::FiniteGroup;

    fn group_groupoid(g: &FiniteGroup) -> FiniteCategory {
        let n = g.order();
        let comp = (0..n).map(|a| (0..n).map(|b| Some(g.mul(a, b))).collect()).collect();
        FiniteCategory::new(vec!["*".into()], vec![0; n], vec![0; n], comp).unwrap()
    }

    #[test]
    fn level_counts() {
        assert_eq!(nerve(&FiniteCategory::point(), 3).counts(), vec![1, 1, 1, 1]);
        assert_eq!(nerve(&FiniteGroupoid::pair(2), 2).counts(), vec![2, 4, 8]);
        assert_eq!(nerve(&group_groupoid(&FiniteGroup::cyclic(2)), 2).counts(), vec![1, 2, 4]);
    }

    #[test]
    fn pair_groupoid_is_acyclic() {
        let c = nerve(&FiniteGroupoid::pair(3), 4).cochains(&Coefficients::Field(Rationals)).unwrap();
        assert_eq!(c.betti(0..=3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn cycle_poset_is_a_circle() {
        for k in 2..=3 {
            let c = nerve(&FiniteCategory::cycle(k), 4).cochains(&Coefficients::Field(Rationals)).unwrap();
            assert_eq!(c.betti(0..=3).unwrap(), vec![1, 1, 0, 0]);
        }
    }

    #[test]
    fn classifying_space_of_z2() {
        let f2 = PrimeField::new(2).unwrap();
        let c = nerve(&group_groupoid(&FiniteGroup::cyclic(2)), 6).cochains(&Coefficients::Field(f2)).unwrap();
        assert_eq!(c.betti(0..=5).unwrap(), vec![1; 6]);
        let c = nerve(&group_groupoid(&FiniteGroup::cyclic(2)), 6).cochains(&Coefficients::Field(Rationals)).unwrap();
        assert_eq!(c.betti(0..=5).unwrap(), vec![1, 0, 0, 0, 0, 0]);
    }
}
