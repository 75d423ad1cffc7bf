#![allow(dead_code)]

use eqstack::exactalg::{Field, Mat, PrimeField, Rationals};
use eqstack::groupcoh::GModule;
use eqstack::simplicial::FiniteCategory;
use eqstack::stackact::{FiniteGroup, GroupoidAction};

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

fn on_objects(group: FiniteGroup, atlas: FiniteCategory, act: impl Fn(usize, usize) -> usize) -> GroupoidAction {
    let table = (0..group.order())
        .map(|g| (0..atlas.num_objects()).map(|x| act(g, x)).collect())
        .collect();
    GroupoidAction::from_object_action(group, atlas, table).expect("corpus action")
}

pub fn point(group: FiniteGroup) -> GroupoidAction {
    GroupoidAction::trivial(group, FiniteCategory::point())
}

pub fn swap_s0() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(2), FiniteCategory::discrete(2), |g, x| (g + x) % 2)
}

/// Antipodal map on the four-cell circle.
pub fn rotation_s1() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(2), FiniteCategory::cycle(2), |g, x| (x + 2 * g) % 4)
}

pub fn reflection_s1() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(2), FiniteCategory::cycle(2), |g, x| if g == 0 { x } else { (4 - x) % 4 })
}

pub fn rotation_hexagon() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(3), FiniteCategory::cycle(3), |g, x| (x + 2 * g) % 6)
}

/// The dihedral group of order 6 (that is, S_3) on the six-cell circle.
pub fn dihedral_hexagon() -> GroupoidAction {
    on_objects(FiniteGroup::dihedral(3), FiniteCategory::cycle(3), |g, x| {
        let (flip, k) = (g / 3, g % 3);
        if flip == 0 {
            (x + 2 * k) % 6
        } else {
            (12 - x - 2 * k) % 6
        }
    })
}

pub fn pair_swap() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(2), FiniteCategory::clone(&eqstack::simplicial::FiniteGroupoid::pair(2)), |g, x| {
        (g + x) % 2
    })
}

pub fn pair_symmetric() -> GroupoidAction {
    let perms = permutations(3);
    on_objects(FiniteGroup::symmetric(3), FiniteCategory::clone(&eqstack::simplicial::FiniteGroupoid::pair(3)), move |g, x| {
        perms[g][x]
    })
}

pub fn pair_cyclic() -> GroupoidAction {
    on_objects(FiniteGroup::cyclic(3), FiniteCategory::clone(&eqstack::simplicial::FiniteGroupoid::pair(3)), |g, x| {
        (g + x) % 3
    })
}

/// The test corpus, with a short name for each instance.
pub fn corpus() -> Vec<(&'static str, GroupoidAction)> {
    vec![
        ("Z2 on point", point(FiniteGroup::cyclic(2))),
        ("Z3 on point", point(FiniteGroup::cyclic(3))),
        ("S3 on point", point(FiniteGroup::symmetric(3))),
        ("Z2 swap on S0", swap_s0()),
        ("Z2 trivial on S0", GroupoidAction::trivial(FiniteGroup::cyclic(2), FiniteCategory::discrete(2))),
        ("Z2 antipodal on S1", rotation_s1()),
        ("Z2 reflection on S1", reflection_s1()),
        ("Z3 rotation on S1", rotation_hexagon()),
        ("S3 dihedral on S1", dihedral_hexagon()),
        ("Z2 on pair(2)", pair_swap()),
        ("Z3 on pair(3)", pair_cyclic()),
        ("S3 on pair(3)", pair_symmetric()),
    ]
}

/// The rotation representation of ℤ/3 on ℚ², generator `[[0, −1], [1, −1]]`.
pub fn rotation(q: &Rationals, k: usize) -> Mat<Rationals> {
    let r = Mat::from_i64_rows(q, &[&[0, -1], &[1, -1]]);
    (0..k).fold(Mat::identity(q, 2), |acc, _| acc.mul(&r).unwrap())
}

pub fn block_diag(q: &Rationals, blocks: &[Mat<Rationals>]) -> Mat<Rationals> {
    let n: usize = blocks.iter().map(Mat::nrows).sum();
    let mut t = Vec::new();
    let mut at = 0;
    for b in blocks {
        b.push_block(at, at, &q.one(), &mut t);
        at += b.nrows();
    }
    Mat::from_triplets(q, n, n, t)
}

/// `a` trivial summands and `b` rotation summands, conjugated by a
/// product of elementary matrices `I + c·e_{ij}`.
pub fn z3_module(a: usize, b: usize, ops: &[(usize, usize, i64)]) -> GModule<Rationals> {
    let q = Rationals;
    let n = a + 2 * b;
    let g = FiniteGroup::cyclic(3);
    let elementary = |i: usize, j: usize, c: i64| {
        let mut t: Vec<_> = (0..n).map(|k| (k, k, q.one())).collect();
        t.push((i, j, q.from_i64(c)));
        Mat::from_triplets(&q, n, n, t)
    };
    let mut u = Mat::identity(&q, n);
    let mut u_inv = Mat::identity(&q, n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        u = u.mul(&elementary(i, j, c)).unwrap();
        u_inv = elementary(i, j, -c).mul(&u_inv).unwrap();
    }
    let rho = (0..3)
        .map(|k| {
            let mut blocks = vec![Mat::identity(&q, 1); a];
            blocks.extend((0..b).map(|_| rotation(&q, k)));
            u.mul(&block_diag(&q, &blocks)).unwrap().mul(&u_inv).unwrap()
        })
        .collect();
    GModule::new(&q, &g, rho).unwrap()
}

/// `ℤ/m` acting on `k` points through the powers of `sigma`, where the
/// order of `sigma` divides `m`.
pub fn cyclic_on_points(sigma: &[usize], factor: usize) -> (FiniteGroup, Vec<Vec<usize>>) {
    let k = sigma.len();
    let mut powers = vec![(0..k).collect::<Vec<_>>()];
    loop {
        let next: Vec<usize> = powers.last().unwrap().iter().map(|&x| sigma[x]).collect();
        if next.iter().enumerate().all(|(i, &x)| i == x) {
            break;
        }
        powers.push(next);
    }
    let m = powers.len() * factor;
    let table = (0..m).map(|g| powers[g % powers.len()].clone()).collect();
    (FiniteGroup::cyclic(m), table)
}

/// Every group of order at most 6, up to isomorphism.
pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("1", FiniteGroup::trivial()),
        ("Z2", FiniteGroup::cyclic(2)),
        ("Z3", FiniteGroup::cyclic(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("Z2xZ2", FiniteGroup::dihedral(2)),
        ("Z5", FiniteGroup::cyclic(5)),
        ("Z6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::symmetric(3)),
    ]
}

/// A one-dimensional module over F_7 on which the group acts nontrivially
/// whenever it has a character of order dividing 6.
pub fn twisted_line(f: &PrimeField, name: &str, g: &FiniteGroup) -> GModule<PrimeField> {
    let n = g.order();
    let chi = |x: usize| -> i64 {
        match name {
            "S3" => {
                let p: Vec<char> = g.names()[x].chars().collect();
                let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]);
                if inversions.count() % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            "Z2xZ2" => {
                if x >= 2 {
                    -1
                } else {
                    1
                }
            }
            // 3 generates F_7^×; its power 6/gcd(6, n) has order dividing n.
            _ => {
                let gcd = (1..=6).rev().find(|d| 6 % d == 0 && n.is_multiple_of(*d)).unwrap();
                let omega = (0..6 / gcd).fold(1i64, |acc, _| acc * 3 % 7);
                (0..x).fold(1i64, |acc, _| acc * omega % 7)
            }
        }
    };
    GModule::character(f, g, chi).expect("character")
}

