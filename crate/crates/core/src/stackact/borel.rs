use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::simplicial::{
    nerve, BiLevel, BiSemiSimplicialSet, Coefficients, FiniteCategory, FiniteGroupoid, Level, SemiSimplicialSet,
};

use super::action::GroupoidAction;
use super::group::FiniteGroup;

/// The Borel simplicial object `{G^n × X_n}` with cells `[g_1, …, g_n, z]`
/// at index `tuple_index(g)·|X_n| + z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelObject {
    pub set: SemiSimplicialSet,
    /// Level sizes of the atlas nerve `X_•`.
    pub nerve_counts: Vec<usize>,
    pub group_order: usize,
}

impl BorelObject {
    /// Splits a cell index on level `n` into the group tuple and nerve cell.
    pub fn decode(&self, group: &FiniteGroup, n: usize, k: usize) -> (Vec<usize>, usize) {
        let nx = self.nerve_counts[n];
        (group.tuple_at(n, k / nx), k % nx)
    }
}

/// The horizontal face `∂_i` of `(g_1, …, g_p; z)` in `G^p × X_n`, as
/// `(tuple, z, label)`. The last face moves `z` by `g_p` and carries `g_p`.
fn bar_face(group: &FiniteGroup, gs: &[usize], z: usize, i: usize, act: &[Vec<usize>]) -> (Vec<usize>, usize, usize) {
    let p = gs.len();
    let e = group.identity();
    if i == 0 {
        (gs[1..].to_vec(), z, e)
    } else if i == p {
        let g = gs[p - 1];
        (gs[..p - 1].to_vec(), act[g][z], g)
    } else {
        let mut t = Vec::with_capacity(p - 1);
        t.extend_from_slice(&gs[..i - 1]);
        t.push(group.mul(gs[i - 1], gs[i]));
        t.extend_from_slice(&gs[i + 1..]);
        (t, z, e)
    }
}

/// Builds `{G^n × X_n}` up to level `top`. Faces: `∂_0` drops `g_1`, inner
/// faces multiply `g_i g_{i+1}`, and `∂_n` drops `g_n` after translating
/// the nerve cell by it; the nerve face `∂_i` is applied throughout.
pub fn borel_object(a: &GroupoidAction, top: usize) -> Result<BorelObject> {
    let group = a.group();
    let (x, act) = a.induced_nerve_action(top)?;
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let nx = x.len(n);
        let count = group.tuple_count(n) * nx;
        let mut ids = Vec::with_capacity(count);
        let face_count = if n == 0 { 0 } else { n + 1 };
        let mut faces = vec![Vec::with_capacity(count); face_count];
        let mut labels = vec![Vec::with_capacity(count); face_count];
        for t in 0..group.tuple_count(n) {
            let gs = group.tuple_at(n, t);
            for z in 0..nx {
                let mut id = gs.clone();
                id.push(z);
                ids.push(id);
                for i in 0..face_count {
                    let (t2, z2, label) = bar_face(group, &gs, z, i, &act[n]);
                    let zf = x.face(n, i, z2);
                    faces[i].push(group.tuple_index(&t2) * x.len(n - 1) + zf);
                    labels[i].push(label);
                }
            }
        }
        levels.push(Level {
            ids,
            faces,
            labels: (n > 0).then_some(labels),
        });
    }
    let set = SemiSimplicialSet::new(levels, true)?;
    set.check_label_cocycle(|g, h| group.mul(g, h))?;
    Ok(BorelObject {
        set,
        nerve_counts: x.counts(),
        group_order: group.order(),
    })
}

/// The bisimplicial object `Z_{p,n} = G^p × X_n` with `p, n ≤ top`, cut
/// to `p + n ≤ bound` when given. Horizontal faces are the bar faces,
/// vertical faces the nerve faces.
pub fn borel_bisimplicial(a: &GroupoidAction, top: usize, bound: Option<usize>) -> Result<BiSemiSimplicialSet> {
    let group = a.group();
    let (x, act) = a.induced_nerve_action(top)?;
    let mut cells = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let mut row = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let hcount = if p == 0 { 0 } else { p + 1 };
            let vcount = if n == 0 { 0 } else { n + 1 };
            if bound.is_some_and(|m| p + n > m) {
                row.push(BiLevel {
                    hfaces: vec![Vec::new(); hcount],
                    vfaces: vec![Vec::new(); vcount],
                    ..BiLevel::default()
                });
                continue;
            }
            let nx = x.len(n);
            let mut level = BiLevel {
                hfaces: vec![Vec::new(); hcount],
                vfaces: vec![Vec::new(); vcount],
                hlabels: (p > 0).then(|| vec![Vec::new(); hcount]),
                ..BiLevel::default()
            };
            for t in 0..group.tuple_count(p) {
                let gs = group.tuple_at(p, t);
                for z in 0..nx {
                    let mut id = gs.clone();
                    id.push(z);
                    level.ids.push(id);
                    for i in 0..hcount {
                        let (t2, z2, label) = bar_face(group, &gs, z, i, &act[n]);
                        level.hfaces[i].push(group.tuple_index(&t2) * nx + z2);
                        if let Some(l) = level.hlabels.as_mut() {
                            l[i].push(label);
                        }
                    }
                    for j in 0..vcount {
                        level.vfaces[j].push(t * x.len(n - 1) + x.face(n, j, z));
                    }
                }
            }
            row.push(level);
        }
        cells.push(row);
    }
    BiSemiSimplicialSet::new(cells, bound, true)
}

fn check_coefficients<F: Field>(a: &GroupoidAction, coeff: &Coefficients<F>) -> Result<()> {
    match coeff.module() {
        Some(m) if m.group() != a.group() => {
            Err(Error::DimensionMismatch("coefficient module is over a different group".into()))
        }
        _ => Ok(()),
    }
}

/// The truncation level to use for `degrees`: `N = max + 2` unless given.
pub fn default_trunc(degrees: &RangeInclusive<usize>, trunc: Option<usize>) -> Result<usize> {
    let top = *degrees.end();
    let n = trunc.unwrap_or(top + 2);
    if top + 1 > n {
        return Err(Error::TruncationBoundary { degree: top, trunc: n });
    }
    Ok(n)
}

/// `dim H^n_G` for `n` in `degrees`, from the cochains of the Borel object.
pub fn equivariant_cohomology<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    degrees: RangeInclusive<usize>,
    trunc: Option<usize>,
) -> Result<Vec<usize>> {
    check_coefficients(a, coeff)?;
    let n = default_trunc(&degrees, trunc)?;
    let borel = borel_object(a, n)?;
    borel.set.cochains(coeff)?.betti(degrees)
}

/// The same dimensions from the total complex of `Z_{•,•}`.
pub fn equivariant_cohomology_via_tot<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    degrees: RangeInclusive<usize>,
    trunc: Option<usize>,
) -> Result<Vec<usize>> {
    check_coefficients(a, coeff)?;
    let n = default_trunc(&degrees, trunc)?;
    let z = borel_bisimplicial(a, n, Some(n))?;
    z.total_cochains(coeff)?.total_complex()?.betti(degrees)
}

/// Computes both routes and fails unless they agree degree by degree.
pub fn equivariant_cohomology_checked<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    degrees: RangeInclusive<usize>,
    trunc: Option<usize>,
) -> Result<Vec<usize>> {
    let diagonal = equivariant_cohomology(a, coeff, degrees.clone(), trunc)?;
    let total = equivariant_cohomology_via_tot(a, coeff, degrees, trunc)?;
    if diagonal != total {
        return Err(Error::invariant(
            "equivariant cohomology",
            format!("diagonal gives {diagonal:?} but the total complex gives {total:?}"),
        ));
    }
    Ok(diagonal)
}

/// The action groupoid of a set action `act[g][x]`: morphism `(g, x)` has
/// index `g·|X| + x` and goes `x → g·x`.
pub fn transformation_groupoid(group: &FiniteGroup, act: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let k = act.first().map_or(0, Vec::len);
    GroupoidAction::from_object_action(group.clone(), FiniteCategory::discrete(k), act.to_vec())?;
    let n = group.order();
    let src: Vec<usize> = (0..n * k).map(|m| m % k).collect();
    let tgt: Vec<usize> = (0..n * k).map(|m| act[m / k][m % k]).collect();
    let comp = (0..n * k)
        .map(|i| {
            (0..n * k)
                .map(|j| (tgt[i] == src[j]).then(|| group.mul(j / k, i / k) * k + src[i]))
                .collect()
        })
        .collect();
    let names = (0..k).map(|x| format!("x{x}")).collect();
    FiniteGroupoid::new(FiniteCategory::new(names, src, tgt, comp)?)
}

/// Verifies that `(g_1, …, g_n; x) ↦ (m_1, …, m_n)` with
/// `m_k = (g_k^{-1}, (g_k ⋯ g_n)·x)` is an isomorphism from the Borel object
/// of the set action onto the nerve of its transformation groupoid.
pub fn check_transformation_nerve(group: &FiniteGroup, act: &[Vec<usize>], top: usize) -> Result<()> {
    let k = act.first().map_or(0, Vec::len);
    let a = GroupoidAction::from_object_action(group.clone(), FiniteCategory::discrete(k), act.to_vec())?;
    let borel = borel_object(&a, top)?;
    let t = transformation_groupoid(group, act)?;
    let tn = nerve(&t, top);
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let index = tn.index(n);
        let mut map = Vec::with_capacity(borel.set.len(n));
        for c in 0..borel.set.len(n) {
            let (gs, z) = borel.decode(group, n, c);
            let image = if n == 0 {
                vec![z]
            } else {
                let mut s = vec![0; n];
                let mut y = z;
                for j in (0..n).rev() {
                    y = act[gs[j]][y];
                    s[j] = group.inv(gs[j]) * k + y;
                }
                s
            };
            match index.get(image.as_slice()) {
                Some(&i) => map.push(i),
                None => {
                    return Err(Error::invariant(
                        format!("level {n}"),
                        format!("Borel cell {:?} maps to a non-composable string", borel.set.level(n).ids[c]),
                    ))
                }
            }
        }
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != tn.len(n) || map.len() != tn.len(n) {
            return Err(Error::invariant(format!("level {n}"), "cell map is not a bijection"));
        }
        maps.push(map);
    }
    for n in 1..=top {
        for c in 0..borel.set.len(n) {
            for i in 0..=n {
                if maps[n - 1][borel.set.face(n, i, c)] != tn.face(n, i, maps[n][c]) {
                    return Err(Error::invariant(format!("level {n}"), format!("face ∂_{i} is not preserved")));
                }
            }
        }
    }
    Ok(())
}
