use std::ops::RangeInclusive;

use eqstack::cartan::{cartan_cohomology, cartan_e1, torus_weyl_check, CartanComplex};
use eqstack::exactalg::Field;
use eqstack::getzler::getzler_comparison;
use eqstack::homalg::CoefficientComplex;
use eqstack::simplicial::nerve;
use eqstack::spectra::{atlas_ss, discrete_borel_ss, hyper_ss, HyperMode, IdentifiedSequence};
use eqstack::stackact::{borel_object, default_trunc, equivariant_cohomology, equivariant_cohomology_via_tot};

use crate::error::{CliError, Result};
use crate::input::Input;
use crate::report::{rows, NamedTable, PageRow, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Cohomology,
    Equivariant,
    SpectralAtlas,
    SpectralBorel,
    Hyper,
    Cartan,
    Getzler,
    Check,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Cohomology => "cohomology",
            Kind::Equivariant => "equivariant",
            Kind::SpectralAtlas => "spectral-atlas",
            Kind::SpectralBorel => "spectral-borel",
            Kind::Hyper => "hyper",
            Kind::Cartan => "cartan",
            Kind::Getzler => "getzler",
            Kind::Check => "check",
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub kind: Kind,
    pub trunc: Option<usize>,
    pub poly_trunc: usize,
    pub degrees: Option<RangeInclusive<usize>>,
    pub hyper_mode: HyperMode,
    pub check_only: bool,
}

impl JobSpec {
    /// The degree range and truncation for simplicial jobs: degrees default
    /// to `0..=N−2` when only `N` is given and to `0..=4` otherwise.
    fn range_and_trunc(&self) -> Result<(RangeInclusive<usize>, usize)> {
        let degrees = match (&self.degrees, self.trunc) {
            (Some(d), _) => d.clone(),
            (None, Some(n)) if n >= 2 => 0..=n - 2,
            (None, Some(n)) => return Err(CliError::Usage(format!("--trunc {n} leaves no reliable degree"))),
            (None, None) => 0..=4,
        };
        let n = default_trunc(&degrees, self.trunc).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((degrees, n))
    }
}

/// Validates that the inputs this job needs are present, then runs it.
pub fn run<F: Field>(job: &JobSpec, input: &Input<F>) -> Result<Report> {
    let mut report = Report::new(job.kind.name(), input.field.name());
    report.validated = input.validated.clone();
    match job.kind {
        Kind::Cohomology => {
            input.require_atlas()?;
        }
        Kind::Equivariant | Kind::SpectralAtlas | Kind::SpectralBorel | Kind::Getzler => {
            input.require_action()?;
        }
        Kind::Hyper => {
            input.require_action()?;
        }
        Kind::Cartan => {
            input.require_cartan()?;
        }
        Kind::Check => {}
    }
    if job.check_only || job.kind == Kind::Check {
        for v in &input.validated {
            report.assert(v, true, "");
        }
        return Ok(report);
    }
    let compute = |source| CliError::Compute {
        job: job.kind.name(),
        source,
    };
    match job.kind {
        Kind::Cohomology => {
            let (degrees, n) = job.range_and_trunc()?;
            report.trunc = Some(n);
            let set = nerve(input.require_atlas()?, n);
            let faces = set.check_face_identities();
            report.assert("simplicial identities", faces.is_ok(), faces.err().map(|e| e.to_string()).unwrap_or_default());
            let coeff = eqstack::simplicial::Coefficients::Field(input.field.clone());
            let dims = set.cochains(&coeff).and_then(|c| c.betti(degrees.clone())).map_err(compute)?;
            report.degrees(*degrees.start(), &dims);
        }
        Kind::Equivariant => {
            let (degrees, n) = job.range_and_trunc()?;
            report.trunc = Some(n);
            let a = input.require_action()?;
            let faces = borel_object(a, n).and_then(|b| b.set.check_face_identities());
            report.assert("simplicial identities", faces.is_ok(), faces.err().map(|e| e.to_string()).unwrap_or_default());
            let diagonal = equivariant_cohomology(a, &input.coefficients, degrees.clone(), Some(n)).map_err(compute)?;
            let total = equivariant_cohomology_via_tot(a, &input.coefficients, degrees.clone(), Some(n)).map_err(compute)?;
            report.assert(
                "diagonal = totalization",
                diagonal == total,
                format!("diagonal {diagonal:?}, totalization {total:?}"),
            );
            report.degrees(*degrees.start(), &diagonal);
        }
        Kind::SpectralAtlas | Kind::SpectralBorel => {
            let (_, n) = job.range_and_trunc()?;
            report.trunc = Some(n);
            let a = input.require_action()?;
            let ss = if job.kind == Kind::SpectralAtlas {
                atlas_ss(a, &input.coefficients, n, 0)
            } else {
                discrete_borel_ss(a, &input.coefficients, n, 0)
            }
            .map_err(compute)?;
            sequence_report(&mut report, &ss);
        }
        Kind::Hyper => {
            let (_, n) = job.range_and_trunc()?;
            report.trunc = Some(n);
            let a = input.require_action()?;
            let coeffs = match (&input.coefficient_complex, input.coefficients.module()) {
                (Some(c), _) => c.clone(),
                (None, Some(m)) => CoefficientComplex::single(m.clone()),
                (None, None) => CoefficientComplex::single(eqstack::groupcoh::GModule::trivial(&input.field, a.group(), 1)),
            };
            let ss = hyper_ss(a, &coeffs, job.hyper_mode, n, 0).map_err(compute)?;
            sequence_report(&mut report, &ss);
        }
        Kind::Cartan => {
            let (g, a) = input.require_cartan()?;
            let p = job.poly_trunc;
            report.poly_trunc = Some(p);
            let safe = CartanComplex::new(g, a, p).map_err(compute)?.safe_top();
            let degrees = job.degrees.clone().unwrap_or(0..=safe);
            let dims = cartan_cohomology(g, a, p, degrees.clone()).map_err(compute)?;
            let e1 = cartan_e1(g, a, p).map_err(compute)?;
            report.assert(
                "E_1 = S(g∨)^g ⊗ H(A)",
                e1.mismatches.is_empty(),
                format!("{} mismatched entries", e1.mismatches.len()),
            );
            report.assert(
                "convergence",
                e1.convergence.is_consistent() && e1.abutment_mismatches.is_empty(),
                format!("violations in degrees {:?}", [e1.convergence.violations.clone(), e1.abutment_mismatches.clone()].concat()),
            );
            match &input.weyl {
                Some(w) => {
                    let weyl = torus_weyl_check(g, a, w, p).map_err(compute)?;
                    report.assert(
                        "(H_T)^W = H(C_T^W)",
                        weyl.is_consistent(),
                        format!("mismatched degrees {:?}", weyl.mismatched_degrees()),
                    );
                    let series = weyl.series();
                    let end = (*degrees.end()).min(series.len().saturating_sub(1));
                    report.degrees(*degrees.start(), series.get(*degrees.start()..=end).unwrap_or(&[]));
                    report.extra_tables.push(NamedTable {
                        name: "cartan".into(),
                        rows: rows(*degrees.start(), &dims),
                    });
                }
                None => report.degrees(*degrees.start(), &dims),
            }
        }
        Kind::Getzler => {
            let (degrees, n) = job.range_and_trunc()?;
            report.trunc = Some(n);
            let a = input.require_action()?;
            let c = getzler_comparison(a, &input.coefficients, degrees.clone(), Some(n)).map_err(compute)?;
            report.assert(
                "Getzler = Borel",
                c.agrees(),
                format!("Getzler {:?}, Borel {:?}", c.getzler, c.borel),
            );
            report.degrees(*degrees.start(), &c.getzler);
            report.extra_tables.push(NamedTable {
                name: "borel".into(),
                rows: rows(*degrees.start(), &c.borel),
            });
        }
        Kind::Check => unreachable!("handled above"),
    }
    Ok(report)
}

fn sequence_report<F: Field>(report: &mut Report, ss: &IdentifiedSequence<F>) {
    let pages = ss
        .sequence
        .records()
        .into_iter()
        .map(|e| PageRow {
            p: e.s,
            q: e.t,
            r: e.r,
            dim: e.dim,
            boundary: e.boundary,
        })
        .collect();
    report.pages = Some(pages);
    let page = ss.identified_page;
    report.assert(
        &format!("E_{page} identification"),
        ss.mismatches.is_empty(),
        ss.mismatches
            .iter()
            .map(|m| format!("({},{}) expected {} found {}", m.s, m.t, m.expected, m.found))
            .collect::<Vec<_>>()
            .join("; "),
    );
    report.assert(
        "convergence",
        ss.convergence.is_consistent(),
        format!("violations in degrees {:?}", ss.convergence.violations),
    );
    if !ss.abutment.is_empty() {
        report.assert(
            "abutment = Borel model",
            ss.abutment_mismatches.is_empty(),
            format!("mismatched degrees {:?}", ss.abutment_mismatches),
        );
        report.extra_tables.push(NamedTable {
            name: "abutment".into(),
            rows: rows(0, &ss.abutment),
        });
    }
}
