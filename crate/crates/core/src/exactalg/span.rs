//! Incremental echelon bases, with optional bookkeeping of how each basis
//! row was built from the inserted generators. This is what turns "pick a
//! complement of im in ker" and "write this cocycle in the chosen basis"
//! into deterministic operations.

use std::collections::BTreeMap;

use super::field::Field;
use super::sparse::{self, SVec};

#[derive(Clone, Debug)]
pub struct Span<F: Field> {
    field: F,
    dim: usize,
    /// Echelon rows, each with leading coefficient 1 at its pivot column.
    rows: Vec<SVec<F::Elem>>,
    pivot_row: BTreeMap<usize, usize>,
    /// `combos[k]` expresses `rows[k]` in terms of generator ids.
    combos: Vec<SVec<F::Elem>>,
    generators: usize,
}

pub struct Reduction<E> {
    pub residual: SVec<E>,
    /// `v = residual + Σ combo[j] * generator_j`.
    pub combo: SVec<E>,
}

impl<F: Field> Span<F> {
    pub fn new(field: &F, dim: usize) -> Self {
        Span {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
            combos: Vec::new(),
            generators: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> Reduction<F::Elem> {
        let f = &self.field;
        let mut acc: BTreeMap<usize, F::Elem> = v.iter().cloned().collect();
        let mut combo: SVec<F::Elem> = Vec::new();
        let mut cursor = 0;
        loop {
            let next = acc
                .range(cursor..)
                .find(|(c, _)| self.pivot_row.contains_key(c))
                .map(|(c, a)| (*c, a.clone()));
            let Some((c, a)) = next else { break };
            let k = self.pivot_row[&c];
            for (j, x) in &self.rows[k] {
                let cur = acc.remove(j).unwrap_or_else(|| f.zero());
                let nv = f.sub(&cur, &f.mul(&a, x));
                if !f.is_zero(&nv) {
                    acc.insert(*j, nv);
                }
            }
            combo = sparse::axpy(f, &combo, &a, &self.combos[k]);
            cursor = c + 1;
        }
        Reduction {
            residual: acc.into_iter().collect(),
            combo,
        }
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).residual.is_empty()
    }

    /// Registers `v` as the next generator. Returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        let f = self.field.clone();
        let id = self.generators;
        self.generators += 1;
        let Reduction { residual, combo } = self.reduce(v);
        let Some((lead, a)) = residual.first().cloned() else {
            return false;
        };
        let ainv = f.inv(&a).expect("nonzero leading entry");
        let row = sparse::scale(&f, &ainv, &residual);
        // residual = e_id - combo
        let minus_one = f.from_i64(-1);
        let rel = sparse::axpy(&f, &[(id, f.one())], &minus_one, &combo);
        let rel = sparse::scale(&f, &ainv, &rel);
        self.pivot_row.insert(lead, self.rows.len());
        self.rows.push(row);
        self.combos.push(rel);
        true
    }

    /// Coordinates of `v` with respect to the generators, if `v` is in the span.
    pub fn coords(&self, v: &[(usize, F::Elem)]) -> Option<SVec<F::Elem>> {
        let r = self.reduce(v);
        r.residual.is_empty().then_some(r.combo)
    }
}

/// A subquotient `N / D` of an ambient space, with explicitly chosen
/// representatives for a complement of `D` inside `N`.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    field: F,
    span: Span<F>,
    /// Generator ids (inside `span`) of the representatives, in order.
    rep_ids: Vec<usize>,
    reps: Vec<SVec<F::Elem>>,
    denominator_dim: usize,
}

impl<F: Field> Subquotient<F> {
    /// `denominator` spans `D`; `numerator` spans `N`. Representatives are
    /// the numerator vectors that are independent modulo `D` and the earlier
    /// numerator vectors, in the given order.
    pub fn new(field: &F, dim: usize, denominator: &[SVec<F::Elem>], numerator: &[SVec<F::Elem>]) -> Self {
        let mut span = Span::new(field, dim);
        for d in denominator {
            span.insert(d);
        }
        let denominator_dim = span.dim();
        let mut rep_ids = Vec::new();
        let mut reps = Vec::new();
        for n in numerator {
            let id = span.generators;
            if span.insert(n) {
                rep_ids.push(id);
                reps.push(n.clone());
            }
        }
        Subquotient {
            field: field.clone(),
            span,
            rep_ids,
            reps,
            denominator_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn denominator_dim(&self) -> usize {
        self.denominator_dim
    }

    pub fn representatives(&self) -> &[SVec<F::Elem>] {
        &self.reps
    }

    /// Class of `v` in the representative basis; `None` if `v ∉ N`.
    pub fn class_of(&self, v: &[(usize, F::Elem)]) -> Option<Vec<F::Elem>> {
        let combo = self.span.coords(v)?;
        let mut out = vec![self.field.zero(); self.reps.len()];
        for (id, a) in combo {
            if let Ok(k) = self.rep_ids.binary_search(&id) {
                out[k] = a;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    fn v(entries: &[(usize, i64)]) -> SVec<crate::exactalg::Rat> {
        entries.iter().map(|(i, x)| (*i, Rationals.from_i64(*x))).collect()
    }

    #[test]
    fn coords_roundtrip() {
        let q = Rationals;
        let mut s = Span::new(&q, 3);
        assert!(s.insert(&v(&[(0, 1), (1, 1)])));
        assert!(s.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!s.insert(&v(&[(0, 1), (2, -1)])));
        let c = s.coords(&v(&[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(c, v(&[(0, 2), (1, 3)]));
        assert!(s.coords(&v(&[(0, 1)])).is_none());
    }

    #[test]
    fn subquotient_classes() {
        let q = Rationals;
        // N = whole plane, D = line x = y.
        let sq = Subquotient::new(&q, 2, &[v(&[(0, 1), (1, 1)])], &[v(&[(0, 1)]), v(&[(1, 1)])]);
        assert_eq!(sq.dim(), 1);
        assert_eq!(sq.class_of(&v(&[(1, 1)])).unwrap(), vec![q.from_i64(-1)]);
        assert_eq!(sq.class_of(&v(&[(0, 3), (1, 3)])).unwrap(), vec![q.zero()]);
    }
}
