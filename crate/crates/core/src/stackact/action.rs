use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::simplicial::{nerve, FiniteCategory, FiniteGroupoid, SemiSimplicialSet};

use super::group::FiniteGroup;

/// A strict action of a finite group on a finite category by functors.
/// `act_obj[g][x] = g·x` and `act_mor[g][m] = g·m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidAction {
    group: FiniteGroup,
    atlas: FiniteCategory,
    act_obj: Vec<Vec<usize>>,
    act_mor: Vec<Vec<usize>>,
}

impl GroupoidAction {
    /// Checks that every `g` acts by a functor, that `e` acts trivially and
    /// that `(gh)·x = g·(h·x)` on objects and morphisms.
    pub fn new(
        group: FiniteGroup,
        atlas: FiniteCategory,
        act_obj: Vec<Vec<usize>>,
        act_mor: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (n_g, n_o, n_m) = (group.order(), atlas.num_objects(), atlas.num_morphisms());
        if act_obj.len() != n_g || act_obj.iter().any(|r| r.len() != n_o || r.iter().any(|&y| y >= n_o)) {
            return Err(Error::DimensionMismatch(format!("object action must be {n_g} maps on {n_o} objects")));
        }
        if act_mor.len() != n_g || act_mor.iter().any(|r| r.len() != n_m || r.iter().any(|&y| y >= n_m)) {
            return Err(Error::DimensionMismatch(format!("morphism action must be {n_g} maps on {n_m} morphisms")));
        }
        for g in 0..n_g {
            for m in 0..n_m {
                let gm = act_mor[g][m];
                if atlas.src(gm) != act_obj[g][atlas.src(m)] || atlas.tgt(gm) != act_obj[g][atlas.tgt(m)] {
                    return Err(Error::NotFunctorial(format!(
                        "element {} moves the endpoints of morphism {m} inconsistently",
                        group.names()[g]
                    )));
                }
            }
            for x in 0..n_o {
                if act_mor[g][atlas.identity(x)] != atlas.identity(act_obj[g][x]) {
                    return Err(Error::NotFunctorial(format!(
                        "element {} does not preserve the identity of object {x}",
                        group.names()[g]
                    )));
                }
            }
            for i in 0..n_m {
                for j in 0..n_m {
                    if let Some(k) = atlas.compose(i, j) {
                        if atlas.compose(act_mor[g][i], act_mor[g][j]) != Some(act_mor[g][k]) {
                            return Err(Error::NotFunctorial(format!(
                                "element {} does not preserve the composite of {i} and {j}",
                                group.names()[g]
                            )));
                        }
                    }
                }
            }
        }
        let e = group.identity();
        if act_obj[e].iter().enumerate().any(|(x, &y)| x != y) || act_mor[e].iter().enumerate().any(|(m, &y)| m != y) {
            return Err(Error::invariant(format!("action/{e}"), "identity element acts nontrivially"));
        }
        for g in 0..n_g {
            for h in 0..n_g {
                let gh = group.mul(g, h);
                if (0..n_o).any(|x| act_obj[gh][x] != act_obj[g][act_obj[h][x]])
                    || (0..n_m).any(|m| act_mor[gh][m] != act_mor[g][act_mor[h][m]])
                {
                    return Err(Error::invariant(
                        format!("action/{g}/{h}"),
                        format!("({}·{})·x ≠ {}·({}·x)", group.names()[g], group.names()[h], group.names()[g], group.names()[h]),
                    ));
                }
            }
        }
        Ok(GroupoidAction {
            group,
            atlas,
            act_obj,
            act_mor,
        })
    }

    /// Derives the morphism action from the object action when there is
    /// at most one morphism between any two objects.
    pub fn from_object_action(group: FiniteGroup, atlas: FiniteCategory, act_obj: Vec<Vec<usize>>) -> Result<Self> {
        let mut between: HashMap<(usize, usize), usize> = HashMap::new();
        for m in 0..atlas.num_morphisms() {
            if between.insert((atlas.src(m), atlas.tgt(m)), m).is_some() {
                return Err(Error::invariant(
                    format!("morphisms/{m}"),
                    "parallel morphisms: the morphism action must be given explicitly",
                ));
            }
        }
        let n_o = atlas.num_objects();
        if act_obj.len() != group.order() || act_obj.iter().any(|r| r.len() != n_o || r.iter().any(|&y| y >= n_o)) {
            return Err(Error::DimensionMismatch("object action has the wrong shape".into()));
        }
        let mut act_mor = Vec::with_capacity(group.order());
        for row in &act_obj {
            let mut images = Vec::with_capacity(atlas.num_morphisms());
            for m in 0..atlas.num_morphisms() {
                match between.get(&(row[atlas.src(m)], row[atlas.tgt(m)])) {
                    Some(&gm) => images.push(gm),
                    None => {
                        return Err(Error::NotFunctorial(format!("morphism {m} has no image under the object action")))
                    }
                }
            }
            act_mor.push(images);
        }
        GroupoidAction::new(group, atlas, act_obj, act_mor)
    }

    /// The trivial action of `group` on `atlas`.
    pub fn trivial(group: FiniteGroup, atlas: FiniteCategory) -> Self {
        let act_obj = vec![(0..atlas.num_objects()).collect(); group.order()];
        let act_mor = vec![(0..atlas.num_morphisms()).collect(); group.order()];
        GroupoidAction::new(group, atlas, act_obj, act_mor).expect("trivial action is valid")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn atlas(&self) -> &FiniteCategory {
        &self.atlas
    }

    /// The atlas as a groupoid, if every morphism is invertible.
    pub fn atlas_groupoid(&self) -> Result<FiniteGroupoid> {
        FiniteGroupoid::new(self.atlas.clone())
    }

    pub fn act_obj(&self, g: usize, x: usize) -> usize {
        self.act_obj[g][x]
    }

    pub fn act_mor(&self, g: usize, m: usize) -> usize {
        self.act_mor[g][m]
    }

    pub fn object_table(&self) -> &[Vec<usize>] {
        &self.act_obj
    }

    pub fn morphism_table(&self) -> &[Vec<usize>] {
        &self.act_mor
    }

    /// Whether only the identity fixes any object.
    pub fn is_free(&self) -> bool {
        let e = self.group.identity();
        (0..self.group.order()).all(|g| g == e || (0..self.atlas.num_objects()).all(|x| self.act_obj[g][x] != x))
    }

    /// Whether every element acts as the identity functor.
    pub fn is_trivial(&self) -> bool {
        self.act_obj.iter().all(|r| r.iter().enumerate().all(|(x, &y)| x == y))
            && self.act_mor.iter().all(|r| r.iter().enumerate().all(|(m, &y)| m == y))
    }

    /// The action on a nerve string, `g·(m_1, …, m_n) = (g·m_1, …, g·m_n)`;
    /// level 0 strings are objects.
    pub fn act_string(&self, g: usize, level: usize, s: &[usize]) -> Vec<usize> {
        if level == 0 {
            vec![self.act_obj[g][s[0]]]
        } else {
            s.iter().map(|&m| self.act_mor[g][m]).collect()
        }
    }

    /// The atlas nerve together with `action[n][g][k]`, the index of `g`
    /// applied to cell `k` of level `n`. Commutation with every face map
    /// is verified.
    pub fn induced_nerve_action(&self, top: usize) -> Result<(SemiSimplicialSet, Vec<Vec<Vec<usize>>>)> {
        let x = nerve(&self.atlas, top);
        let mut action = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let index = x.index(n);
            let level = x.level(n);
            let per_g: Vec<Vec<usize>> = (0..self.group.order())
                .map(|g| level.ids.iter().map(|s| index[self.act_string(g, n, s).as_slice()]).collect())
                .collect();
            action.push(per_g);
        }
        for n in 1..=top {
            for g in 0..self.group.order() {
                for k in 0..x.len(n) {
                    for i in 0..=n {
                        if x.face(n, i, action[n][g][k]) != action[n - 1][g][x.face(n, i, k)] {
                            return Err(Error::NotFunctorial(format!(
                                "the action of {} does not commute with ∂_{i} on level {n}",
                                self.group.names()[g]
                            )));
                        }
                    }
                }
            }
        }
        Ok((x, action))
    }

    /// The quotient category of a free action: objects and morphisms are
    /// orbits, composed through representatives.
    pub fn quotient_category(&self) -> Result<FiniteCategory> {
        if !self.is_free() {
            return Err(Error::NotFree("some non-identity element fixes an object".into()));
        }
        let orbit_ids = |table: &[Vec<usize>], count: usize| -> (Vec<usize>, usize) {
            let mut id = vec![usize::MAX; count];
            let mut next = 0;
            for x in 0..count {
                if id[x] == usize::MAX {
                    for row in table {
                        id[row[x]] = next;
                    }
                    next += 1;
                }
            }
            (id, next)
        };
        let (obj_orbit, n_o) = orbit_ids(&self.act_obj, self.atlas.num_objects());
        let (mor_orbit, n_m) = orbit_ids(&self.act_mor, self.atlas.num_morphisms());
        let mut rep = vec![usize::MAX; n_m];
        for m in (0..self.atlas.num_morphisms()).rev() {
            rep[mor_orbit[m]] = m;
        }
        let src: Vec<usize> = rep.iter().map(|&m| obj_orbit[self.atlas.src(m)]).collect();
        let tgt: Vec<usize> = rep.iter().map(|&m| obj_orbit[self.atlas.tgt(m)]).collect();
        let mut comp = vec![vec![None; n_m]; n_m];
        for a in 0..n_m {
            for b in 0..n_m {
                if tgt[a] != src[b] {
                    continue;
                }
                let i = rep[a];
                let end = self.atlas.tgt(i);
                let j = (0..self.group.order())
                    .map(|g| self.act_mor[g][rep[b]])
                    .find(|&j| self.atlas.src(j) == end)
                    .expect("orbits of a free action meet every fibre");
                let k = self.atlas.compose(i, j).expect("composable");
                comp[a][b] = Some(mor_orbit[k]);
            }
        }
        let names = (0..n_o).map(|o| format!("[x{}]", obj_orbit.iter().position(|&q| q == o).unwrap_or(0))).collect();
        FiniteCategory::new(names, src, tgt, comp)
    }
}
