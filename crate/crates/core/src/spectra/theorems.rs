use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::groupcoh::{action_on_cohomology, bar_complex};
use crate::homalg::{CoefficientComplex, Collapse, DoubleComplex, TripleComplex};
use crate::simplicial::{nerve, Coefficients, FiniteCategory};
use crate::stackact::{
    borel_bisimplicial, borel_object, equivariant_cohomology, transformation_groupoid, GroupoidAction,
};

use super::pages::{convergence_check, pages, ConvergenceReport, Filtration, SpectralSequence};

/// An entry where the computed page disagrees with the independent value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub s: usize,
    pub t: usize,
    pub expected: usize,
    pub found: usize,
}

/// A spectral sequence together with the checks tying one of its pages and
/// its abutment to independently computed values.
#[derive(Clone, Debug)]
pub struct IdentifiedSequence<F: Field> {
    pub sequence: SpectralSequence<F>,
    /// The page compared against `expected`.
    pub identified_page: usize,
    /// Independent values for every reliable entry of `identified_page`.
    pub expected: BTreeMap<(usize, usize), usize>,
    pub mismatches: Vec<Mismatch>,
    pub convergence: ConvergenceReport,
    /// `dim H^n_G` from the Borel object, for `n ≤ N − 1`. Empty when there
    /// is no independent route.
    pub abutment: Vec<usize>,
    /// Degrees where `Σ E_∞` differs from `abutment`.
    pub abutment_mismatches: Vec<usize>,
}

impl<F: Field> IdentifiedSequence<F> {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty() && self.convergence.is_consistent() && self.abutment_mismatches.is_empty()
    }

    fn assemble(
        sequence: SpectralSequence<F>,
        identified_page: usize,
        expected: BTreeMap<(usize, usize), usize>,
        convergence: ConvergenceReport,
        abutment: Vec<usize>,
    ) -> Self {
        let page = &sequence.pages[identified_page];
        let mismatches = expected
            .iter()
            .filter(|(&(s, t), &e)| page.dim(s, t) != e)
            .map(|(&(s, t), &expected)| Mismatch {
                s,
                t,
                expected,
                found: page.dim(s, t),
            })
            .collect();
        let e_inf = sequence.e_infinity();
        let abutment_mismatches = abutment
            .iter()
            .enumerate()
            .filter(|(n, h)| e_inf.total(*n) != **h)
            .map(|(n, _)| n)
            .collect();
        IdentifiedSequence {
            sequence,
            identified_page,
            expected,
            mismatches,
            convergence,
            abutment,
            abutment_mismatches,
        }
    }
}

fn check_trunc(trunc: usize) -> Result<()> {
    if trunc == 0 {
        return Err(Error::TruncationBoundary { degree: 0, trunc });
    }
    Ok(())
}

/// The double complex `C^{p,n} = Map(G^p × X_n, M)` cut to `p + n ≤ N`.
fn borel_double<F: Field>(a: &GroupoidAction, coeff: &Coefficients<F>, trunc: usize) -> Result<DoubleComplex<F>> {
    if let Some(m) = coeff.module() {
        if m.group() != a.group() {
            return Err(Error::DimensionMismatch("coefficient module is over a different group".into()));
        }
    }
    borel_bisimplicial(a, trunc, Some(trunc))?.total_cochains(coeff)
}

/// Filters `Map(G^p × X_n, M)` by the group degree. `E_2^{p,r}` is compared
/// with `H^p(G; H^r(X; M))`, the module structure coming from the induced
/// action on representative cocycles, and `E_∞` with `H^*_G`.
pub fn discrete_borel_ss<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    trunc: usize,
    r_max: usize,
) -> Result<IdentifiedSequence<F>> {
    check_trunc(trunc)?;
    let dc = borel_double(a, coeff, trunc)?;
    let ss = pages(&dc, Filtration::ByColumns, r_max.max(2))?;
    let mut expected = BTreeMap::new();
    for r in 0..trunc {
        let module = action_on_cohomology(a, coeff, r, trunc)?;
        let bar = bar_complex(&module, trunc - r)?;
        for p in 0..trunc - r {
            expected.insert((p, r), bar.cohomology(p)?);
        }
    }
    let convergence = convergence_check(&ss, &dc.total_complex()?)?;
    let abutment = equivariant_cohomology(a, coeff, 0..=trunc - 1, Some(trunc))?;
    Ok(IdentifiedSequence::assemble(ss, 2, expected, convergence, abutment))
}

/// Filters `Map(G^p × X_n, M)` by the nerve degree. `E_1^{n,r}` is compared
/// with `H^r` of the action groupoid of `G` on the cell set `X_n`, and `E_∞`
/// with `H^*_G`.
pub fn atlas_ss<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    trunc: usize,
    r_max: usize,
) -> Result<IdentifiedSequence<F>> {
    check_trunc(trunc)?;
    let dc = borel_double(a, coeff, trunc)?;
    let ss = pages(&dc, Filtration::ByRows, r_max.max(1))?;
    let (_, act) = a.induced_nerve_action(trunc)?;
    let mut expected = BTreeMap::new();
    for n in 0..trunc {
        let top = trunc - n;
        let dims = cell_action_cohomology(a, &act[n], coeff, top)?;
        for (r, d) in dims.into_iter().enumerate() {
            expected.insert((n, r), d);
        }
    }
    let convergence = convergence_check(&ss, &dc.total_complex()?)?;
    let abutment = equivariant_cohomology(a, coeff, 0..=trunc - 1, Some(trunc))?;
    Ok(IdentifiedSequence::assemble(ss, 1, expected, convergence, abutment))
}

/// `H^r([S/G]; M)` for `r < top`, where `G` permutes the finite set `S`.
/// With field coefficients this is the nerve of the action groupoid; a
/// module needs the labelled Borel object to twist by `ρ`.
fn cell_action_cohomology<F: Field>(
    a: &GroupoidAction,
    act: &[Vec<usize>],
    coeff: &Coefficients<F>,
    top: usize,
) -> Result<Vec<usize>> {
    let group = a.group();
    let complex = match coeff {
        Coefficients::Field(_) => nerve(transformation_groupoid(group, act)?.category(), top).cochains(coeff)?,
        Coefficients::Module(_) => {
            let k = act.first().map_or(0, Vec::len);
            let cells = GroupoidAction::from_object_action(group.clone(), FiniteCategory::discrete(k), act.to_vec())?;
            borel_object(&cells, top)?.set.cochains(coeff)?
        }
    };
    complex.betti(0..=top - 1)
}

/// Which theorem a hypercohomology run realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperMode {
    /// Filter by the nerve degree, after totalizing group and coefficient degrees.
    Atlas,
    /// Filter by the group degree, after totalizing nerve and coefficient degrees.
    DiscreteBorel,
}

/// The triple complex `Map(G^p × X_n, M_c)` cut to `p + n + c ≤ N`, collapsed
/// to a double complex according to `mode` and filtered. With a single
/// module the collapsed complex is checked to coincide with the one used by
/// [`atlas_ss`] and [`discrete_borel_ss`].
pub fn hyper_ss<F: Field>(
    a: &GroupoidAction,
    coeffs: &CoefficientComplex<F>,
    mode: HyperMode,
    trunc: usize,
    r_max: usize,
) -> Result<IdentifiedSequence<F>> {
    check_trunc(trunc)?;
    if coeffs.group() != a.group() {
        return Err(Error::DimensionMismatch("coefficient complex is over a different group".into()));
    }
    let f = coeffs.field();
    let z = borel_bisimplicial(a, trunc, Some(trunc))?;
    let m = coeffs.top();
    let module_coeffs: Vec<Coefficients<F>> = coeffs.modules().iter().cloned().map(Coefficients::Module).collect();
    let alive = |p: usize, n: usize, c: usize| p + n + c <= trunc;
    let cells = |p: usize, n: usize| z.cells(p, n).len();
    let dim = |p: usize, n: usize, c: usize| if alive(p, n, c) { cells(p, n) * coeffs.module(c).dim() } else { 0 };
    // `kind`: 0 group, 1 nerve, 2 coefficient.
    let diff = |kind: usize, p: usize, n: usize, c: usize| -> Mat<F> {
        let (tp, tn, tc) = match kind {
            0 => (p + 1, n, c),
            1 => (p, n + 1, c),
            _ => (p, n, c + 1),
        };
        if !alive(tp, tn, tc) {
            return Mat::zeros(f, dim(tp, tn, tc), dim(p, n, c));
        }
        match kind {
            0 => z.horizontal_coboundary(p, n, &module_coeffs[c]),
            1 => z.vertical_coboundary(p, n, &module_coeffs[c]),
            _ => Mat::identity(f, cells(p, n)).kron(coeffs.diff(c)),
        }
    };
    let (axes, collapse, filtration) = match mode {
        HyperMode::Atlas => ([0, 2, 1], Collapse::Leading, Filtration::ByRows),
        HyperMode::DiscreteBorel => ([0, 1, 2], Collapse::Trailing, Filtration::ByColumns),
    };
    let natural = |idx: [usize; 3]| {
        let mut pnc = [0; 3];
        for k in 0..3 {
            pnc[axes[k]] = idx[k];
        }
        pnc
    };
    let full = [trunc, trunc, m];
    let extent = [full[axes[0]], full[axes[1]], full[axes[2]]];
    let tc = TripleComplex::from_fn(
        f,
        extent,
        Some(trunc),
        |idx| {
            let [p, n, c] = natural(idx);
            dim(p, n, c)
        },
        |axis, idx| {
            let [p, n, c] = natural(idx);
            diff(axes[axis], p, n, c)
        },
    )
    .map_err(|e| match e {
        Error::CompositionNonzero(msg) => Error::invariant("hypercohomology triple complex", msg),
        other => other,
    })?;
    let dc = tc.collapse(collapse)?;
    if m == 0 {
        let reference = z.total_cochains(&module_coeffs[0])?;
        if dc != reference {
            return Err(Error::invariant(
                "hypercohomology",
                "a single coefficient module does not reproduce the Borel double complex",
            ));
        }
    }
    let identified_page = match mode {
        HyperMode::Atlas => 1,
        HyperMode::DiscreteBorel => 2,
    };
    let ss = pages(&dc, filtration, r_max.max(identified_page))?;
    let convergence = convergence_check(&ss, &dc.total_complex()?)?;
    let abutment = if m == 0 {
        equivariant_cohomology(a, &module_coeffs[0], 0..=trunc - 1, Some(trunc))?
    } else {
        Vec::new()
    };
    Ok(IdentifiedSequence::assemble(ss, identified_page, BTreeMap::new(), convergence, abutment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::groupcoh::GModule;
    use crate::stackact::FiniteGroup;

    fn point(group: FiniteGroup) -> GroupoidAction {
        GroupoidAction::trivial(group, FiniteCategory::point())
    }

    #[test]
    fn bz2_over_f2_by_columns() {
        let f2 = PrimeField::new(2).unwrap();
        let run = discrete_borel_ss(&point(FiniteGroup::cyclic(2)), &Coefficients::Field(f2), 5, 3).unwrap();
        assert!(run.is_consistent(), "{:?}", run.mismatches);
        let e2 = &run.sequence.pages[2];
        for p in 0..5 {
            assert_eq!(e2.dim(p, 0), 1);
        }
        assert!((1..5).all(|r| e2.dim(0, r) == 0));
        assert_eq!(run.abutment, vec![1; 5]);
    }

    #[test]
    fn z3_on_point_over_q_is_concentrated() {
        let run = discrete_borel_ss(&point(FiniteGroup::cyclic(3)), &Coefficients::Field(Rationals), 4, 2).unwrap();
        assert!(run.is_consistent());
        let e2 = &run.sequence.pages[2];
        assert_eq!(e2.dim(0, 0), 1);
        assert_eq!(e2.entries.iter().filter(|((s, t), d)| s + t < 4 && **d > 0).count(), 1);
    }

    #[test]
    fn swap_on_two_points_atlas() {
        let f2 = PrimeField::new(2).unwrap();
        let a = GroupoidAction::from_object_action(
            FiniteGroup::cyclic(2),
            FiniteCategory::discrete(2),
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let run = atlas_ss(&a, &Coefficients::Field(f2), 4, 2).unwrap();
        assert!(run.is_consistent(), "{:?}", run.mismatches);
        let e1 = &run.sequence.pages[1];
        for n in 0..4 {
            assert_eq!(e1.dim(n, 0), 1);
            assert!((1..4 - n).all(|r| e1.dim(n, r) == 0));
        }
        assert_eq!(run.abutment, vec![1, 0, 0, 0]);
    }

    #[test]
    fn twisted_coefficients() {
        let q = Rationals;
        let z2 = FiniteGroup::cyclic(2);
        let sign = GModule::character(&q, &z2, |g| if g == 0 { 1 } else { -1 }).unwrap();
        let a = GroupoidAction::trivial(z2, FiniteCategory::cycle(2));
        let coeff = Coefficients::Module(sign);
        assert!(discrete_borel_ss(&a, &coeff, 4, 2).unwrap().is_consistent());
        assert!(atlas_ss(&a, &coeff, 4, 2).unwrap().is_consistent());
    }

    #[test]
    fn single_module_hyper_matches() {
        let f2 = PrimeField::new(2).unwrap();
        let a = point(FiniteGroup::cyclic(2));
        let coeffs = CoefficientComplex::single(GModule::trivial(&f2, a.group(), 1));
        let hyper = hyper_ss(&a, &coeffs, HyperMode::DiscreteBorel, 4, 2).unwrap();
        let plain = discrete_borel_ss(&a, &Coefficients::Field(f2), 4, 2).unwrap();
        for (x, y) in hyper.sequence.pages.iter().zip(&plain.sequence.pages) {
            assert_eq!(x.entries, y.entries);
            assert_eq!(x.differentials, y.differentials);
        }
        assert!(hyper.is_consistent());
    }

    #[test]
    fn acyclic_coefficients_vanish() {
        let q = Rationals;
        let a = GroupoidAction::trivial(FiniteGroup::cyclic(2), FiniteCategory::cycle(2));
        let m = GModule::trivial(&q, a.group(), 1);
        let coeffs = CoefficientComplex::new(vec![m.clone(), m], vec![Mat::identity(&q, 1)]).unwrap();
        for mode in [HyperMode::Atlas, HyperMode::DiscreteBorel] {
            let run = hyper_ss(&a, &coeffs, mode, 3, 2).unwrap();
            assert!(run.is_consistent());
            let r = run.identified_page;
            let page = &run.sequence.pages[r];
            // Only entries at the truncation edge may survive.
            assert!(page.entries.iter().all(|((s, t), d)| s + t >= 3 || *d == 0));
        }
    }

    #[test]
    fn zero_differential_doubles() {
        let f2 = PrimeField::new(2).unwrap();
        let a = point(FiniteGroup::cyclic(2));
        let m = GModule::trivial(&f2, a.group(), 1);
        let coeffs = CoefficientComplex::new(vec![m.clone(), m], vec![Mat::zeros(&f2, 1, 1)]).unwrap();
        let run = hyper_ss(&a, &coeffs, HyperMode::DiscreteBorel, 5, 2).unwrap();
        let e = run.sequence.e_infinity();
        // H^n = H^n(BZ/2) ⊕ H^{n-1}(BZ/2) = 1, 2, 2, 2, …
        assert_eq!((0..5).map(|n| e.total(n)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
        assert!(run.is_consistent());
    }
}
