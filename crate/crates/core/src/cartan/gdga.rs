use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::sparse::{self, SVec};
use crate::exactalg::{Field, Mat};

use super::lie::LieAlgebraData;
use super::SubspaceBasis;

/// A finite-dimensional g-differential graded algebra.
///
/// The underlying space is `A^0 ⊕ … ⊕ A^m` with basis vectors ordered by
/// degree. `d`, `iota[a]` and `lie[a]` act on the whole space; the grading
/// is checked by [`validate_gdga`]. The product, when present, is given on
/// basis pairs: `mul[i][j] = e_i · e_j`.
#[derive(Clone, PartialEq)]
pub struct Gdga<F: Field> {
    field: F,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    d: Mat<F>,
    iota: Vec<Mat<F>>,
    lie: Vec<Mat<F>>,
    mul: Option<Vec<Vec<SVec<F::Elem>>>>,
}

impl<F: Field> fmt::Debug for Gdga<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gdga")
            .field("dims", &self.dims)
            .field("operators", &self.iota.len())
            .field("multiplicative", &self.mul.is_some())
            .finish()
    }
}

impl<F: Field> Gdga<F> {
    /// `lie` defaults to `d ι_a + ι_a d`. Only shapes are checked here.
    pub fn new(
        field: &F,
        dims: Vec<usize>,
        d: Mat<F>,
        iota: Vec<Mat<F>>,
        lie: Option<Vec<Mat<F>>>,
        mul: Option<Vec<Vec<SVec<F::Elem>>>>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("a g-DGA needs at least degree 0".into()));
        }
        let mut offsets = vec![0];
        for m in &dims {
            offsets.push(offsets.last().unwrap() + m);
        }
        let n = *offsets.last().unwrap();
        let square = |name: String, m: &Mat<F>| {
            if m.shape() != (n, n) {
                Err(Error::DimensionMismatch(format!("{name} is {:?}, expected {n}×{n}", m.shape())))
            } else {
                Ok(())
            }
        };
        square("d".into(), &d)?;
        for (a, m) in iota.iter().enumerate() {
            square(format!("iota/{a}"), m)?;
        }
        let lie = match lie {
            Some(l) => {
                if l.len() != iota.len() {
                    return Err(Error::DimensionMismatch(format!("{} Lie derivatives for {} contractions", l.len(), iota.len())));
                }
                for (a, m) in l.iter().enumerate() {
                    square(format!("lie/{a}"), m)?;
                }
                l
            }
            None => iota
                .iter()
                .map(|i| d.mul(i)?.add(&i.mul(&d)?))
                .collect::<Result<Vec<_>>>()?,
        };
        if let Some(m) = &mul {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("multiplication table must be {n}×{n}")));
            }
            if m.iter().flatten().flatten().any(|(k, _)| *k >= n) {
                return Err(Error::DimensionMismatch("product outside the algebra".into()));
            }
        }
        Ok(Gdga {
            field: field.clone(),
            dims,
            offsets,
            d,
            iota,
            lie,
            mul,
        })
    }

    /// The ground field in degree 0 with `k` zero contractions.
    pub fn point(field: &F, k: usize) -> Self {
        let z = Mat::zeros(field, 1, 1);
        Gdga::new(field, vec![1], z.clone(), vec![z; k], None, Some(vec![vec![vec![(0, field.one())]]])).expect("shapes agree")
    }

    /// `Λ(θ_1, …, θ_n)` with `deg θ_j = 1`, `d = 0` and `ι_a θ_j = iota[a][j]`.
    /// The basis is the subsets of generators, by size and then
    /// lexicographically.
    pub fn exterior(field: &F, n: usize, iota: &[Vec<F::Elem>]) -> Result<Self> {
        if let Some(a) = iota.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("iota/{a} must have {n} entries")));
        }
        let mut subsets: Vec<u32> = (0..1u32 << n).collect();
        subsets.sort_by_key(|s| (s.count_ones(), (0..n).filter(|j| s >> j & 1 == 1).collect::<Vec<_>>()));
        let index = |s: u32| subsets.iter().position(|t| *t == s).expect("subset");
        let dims = (0..=n).map(|k| subsets.iter().filter(|s| s.count_ones() as usize == k).count()).collect();
        let total = subsets.len();
        let sign = |k: usize| if k.is_multiple_of(2) { field.one() } else { field.from_i64(-1) };
        let ops = iota
            .iter()
            .map(|row| {
                let mut t = Vec::new();
                for (c, &s) in subsets.iter().enumerate() {
                    for (pos, j) in (0..n).filter(|j| s >> j & 1 == 1).enumerate() {
                        if !field.is_zero(&row[j]) {
                            t.push((index(s & !(1 << j)), c, field.mul(&sign(pos), &row[j])));
                        }
                    }
                }
                Mat::from_triplets(field, total, total, t)
            })
            .collect();
        let mul = subsets
            .iter()
            .map(|&s| {
                subsets
                    .iter()
                    .map(|&t| {
                        if s & t != 0 {
                            return Vec::new();
                        }
                        let swaps: u32 = (0..n).filter(|j| t >> j & 1 == 1).map(|j| (s >> (j + 1)).count_ones()).sum();
                        vec![(index(s | t), sign(swaps as usize))]
                    })
                    .collect()
            })
            .collect();
        Gdga::new(field, dims, Mat::zeros(field, total, total), ops, None, Some(mul))
    }

    /// Replaces the Lie derivatives without recomputing them.
    pub fn with_lie(mut self, lie: Vec<Mat<F>>) -> Result<Self> {
        let n = self.total_dim();
        if lie.len() != self.iota.len() || lie.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::DimensionMismatch("Lie derivatives do not match the contractions".into()));
        }
        self.lie = lie;
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Highest degree `m` with `A^m` present.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn offset(&self, m: usize) -> usize {
        self.offsets[m]
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    pub fn d(&self) -> &Mat<F> {
        &self.d
    }

    pub fn iota(&self, a: usize) -> &Mat<F> {
        &self.iota[a]
    }

    pub fn lie(&self, a: usize) -> &Mat<F> {
        &self.lie[a]
    }

    pub fn operator_count(&self) -> usize {
        self.iota.len()
    }

    pub fn is_multiplicative(&self) -> bool {
        self.mul.is_some()
    }

    /// The block of `op` from `A^m` to `A^{m'}`; empty when either is absent.
    pub fn block(&self, op: &Mat<F>, from: usize, to: usize) -> Mat<F> {
        let range = |m: usize| {
            if m < self.dims.len() {
                self.offsets[m]..self.offsets[m + 1]
            } else {
                0..0
            }
        };
        op.submatrix(range(to), range(from))
    }

    /// `x · y` on sparse vectors, if a product is present.
    pub fn multiply(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> Option<SVec<F::Elem>> {
        let table = self.mul.as_ref()?;
        let f = &self.field;
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                out = sparse::axpy(f, &out, &f.mul(a, b), &table[*i][*j]);
            }
        }
        Some(out)
    }

    /// The cohomology `H^m(A, d)` for every degree.
    pub fn cohomology(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|m| {
                let out = self.block(&self.d, m, m + 1);
                let inc = if m == 0 {
                    Mat::zeros(&self.field, self.dims[0], 0)
                } else {
                    self.block(&self.d, m - 1, m)
                };
                self.dims[m] - out.rank() - inc.rank()
            })
            .collect()
    }
}

/// One failed identity of the Cartan calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusFailure {
    pub identity: String,
    pub location: String,
}

/// Itemized outcome of [`validate_gdga`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GdgaReport {
    pub checked: usize,
    pub failures: Vec<CalculusFailure>,
}

impl GdgaReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, identity: &str, location: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(CalculusFailure {
                identity: identity.into(),
                location: location(),
            });
        }
    }
}

impl fmt::Display for GdgaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} identities checked, {} failed", self.checked, self.failures.len())?;
        for c in &self.failures {
            write!(f, "\n  {} at {}", c.identity, c.location)?;
        }
        Ok(())
    }
}

/// Checks every identity of the Cartan calculus exactly.
pub fn validate_gdga<F: Field>(g: &LieAlgebraData<F>, a: &Gdga<F>) -> GdgaReport {
    let mut report = GdgaReport::default();
    let k = g.dim();
    report.record(a.iota.len() == k, "one contraction per basis vector", || {
        format!("{} operators for dim g = {k}", a.iota.len())
    });
    if a.iota.len() != k || g.field() != a.field() {
        return report;
    }
    let comm = |x: &Mat<F>, y: &Mat<F>| x.mul(y).and_then(|xy| xy.sub(&y.mul(x)?)).expect("square operators");
    let anti = |x: &Mat<F>, y: &Mat<F>| x.mul(y).and_then(|xy| xy.add(&y.mul(x)?)).expect("square operators");

    let degree_ok = |op: &Mat<F>, shift: i64| {
        op.triplets()
            .all(|(r, c, _)| a.degree_of(r) as i64 == a.degree_of(c) as i64 + shift)
    };
    report.record(degree_ok(&a.d, 1), "d has degree +1", || "d".into());
    for i in 0..k {
        report.record(degree_ok(&a.iota[i], -1), "iota has degree −1", || format!("iota/{i}"));
        report.record(degree_ok(&a.lie[i], 0), "L has degree 0", || format!("lie/{i}"));
    }

    report.record(a.d.mul(&a.d).expect("square").is_zero(), "d² = 0", || "d".into());
    for i in 0..k {
        let cartan = anti(&a.d, &a.iota[i]);
        report.record(cartan == a.lie[i], "L = dι + ιd", || format!("lie/{i}"));
        report.record(comm(&a.lie[i], &a.d).is_zero(), "[L, d] = 0", || format!("lie/{i}"));
        for j in 0..k {
            if i <= j {
                report.record(anti(&a.iota[i], &a.iota[j]).is_zero(), "ιι + ιι = 0", || format!("iota/{i}/{j}"));
            }
            let want = g.combine_bracket(i, j, &a.iota).expect("same shapes");
            report.record(comm(&a.lie[i], &a.iota[j]) == want, "[L, ι] = c ι", || format!("lie/{i}/iota/{j}"));
            let want = g.combine_bracket(i, j, &a.lie).expect("same shapes");
            report.record(comm(&a.lie[i], &a.lie[j]) == want, "[L, L] = c L", || format!("lie/{i}/lie/{j}"));
        }
    }

    if let Some(table) = &a.mul {
        let f = &a.field;
        let n = a.total_dim();
        let dcols = a.d.columns();
        for x in 0..n {
            for y in 0..n {
                let xy = &table[x][y];
                let dx = a.degree_of(x);
                let graded = xy.iter().all(|(z, _)| a.degree_of(*z) == dx + a.degree_of(y));
                report.record(graded, "product is graded", || format!("mul/{x}/{y}"));
                let lhs = a.d.apply_sparse(xy);
                let sign = if dx.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
                let left = a.multiply(&dcols[x], &[(y, f.one())]).unwrap_or_default();
                let right = a.multiply(&[(x, f.one())], &dcols[y]).unwrap_or_default();
                let rhs = sparse::axpy(f, &left, &sign, &right);
                report.record(lhs == rhs, "Leibniz rule for d", || format!("mul/{x}/{y}"));
            }
        }
    }
    report
}

/// The subalgebra `∩_a ker L_a` with the induced `d` and `ι_a` (and zero Lie
/// derivatives).
pub fn invariants_subalgebra<F: Field>(g: &LieAlgebraData<F>, a: &Gdga<F>) -> Result<Gdga<F>> {
    if a.operator_count() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} contractions for dim g = {}",
            a.operator_count(),
            g.dim()
        )));
    }
    let f = &a.field;
    let mut bases = Vec::new();
    for m in 0..a.dims.len() {
        let blocks: Vec<Mat<F>> = a.lie.iter().map(|l| a.block(l, m, m)).collect();
        let refs: Vec<&Mat<F>> = blocks.iter().collect();
        let stacked = Mat::vstack(f, a.dims[m], &refs)?;
        let kernel: Vec<SVec<F::Elem>> = stacked
            .kernel_sparse()
            .into_iter()
            .map(|v| sparse::shift(&v, a.offsets[m]))
            .collect();
        bases.push(SubspaceBasis::new(f, a.total_dim(), kernel));
    }
    let dims: Vec<usize> = bases.iter().map(SubspaceBasis::len).collect();
    let mut offsets = vec![0];
    for m in &dims {
        offsets.push(offsets.last().unwrap() + m);
    }
    let total = *offsets.last().unwrap();
    let restrict = |name: &str, op: &Mat<F>, shift: i64| -> Result<Mat<F>> {
        let mut t = Vec::new();
        for (m, basis) in bases.iter().enumerate() {
            for (j, v) in basis.vectors().iter().enumerate() {
                let image = op.apply_sparse(v);
                if image.is_empty() {
                    continue;
                }
                let target = m as i64 + shift;
                let coords = (0..bases.len() as i64)
                    .contains(&target)
                    .then(|| bases[target as usize].coords(&image))
                    .flatten()
                    .ok_or_else(|| Error::NotClosedUnderOperators(format!("{name} on invariant {j} of degree {m}")))?;
                let (r0, c0) = (offsets[target as usize], offsets[m]);
                t.extend(coords.into_iter().map(|(r, x)| (r0 + r, c0 + j, x)));
            }
        }
        Ok(Mat::from_triplets(f, total, total, t))
    };
    let d = restrict("d", &a.d, 1)?;
    let iota = a
        .iota
        .iter()
        .enumerate()
        .map(|(i, op)| restrict(&format!("iota/{i}"), op, -1))
        .collect::<Result<Vec<_>>>()?;
    let mul = match &a.mul {
        None => None,
        Some(_) => {
            let flat: Vec<(usize, &SVec<F::Elem>)> = bases
                .iter()
                .enumerate()
                .flat_map(|(m, b)| b.vectors().iter().map(move |v| (m, v)))
                .collect();
            let mut table = vec![vec![Vec::new(); total]; total];
            for (x, (mx, vx)) in flat.iter().enumerate() {
                for (y, (my, vy)) in flat.iter().enumerate() {
                    let prod = a.multiply(vx, vy).expect("multiplicative");
                    if prod.is_empty() {
                        continue;
                    }
                    let m = mx + my;
                    let coords = bases
                        .get(m)
                        .and_then(|b| b.coords(&prod))
                        .ok_or_else(|| Error::NotClosedUnderOperators(format!("product of invariants {x} and {y}")))?;
                    table[x][y] = sparse::shift(&coords, offsets[m]);
                }
            }
            Some(table)
        }
    };
    let lie = vec![Mat::zeros(f, total, total); a.operator_count()];
    Gdga::new(f, dims, d, iota, Some(lie), mul)
}
