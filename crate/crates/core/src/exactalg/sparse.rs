//! Sorted sparse vectors: `(index, value)` pairs with strictly increasing
//! indices and no stored zeros.

use super::field::Field;

pub type SVec<E> = Vec<(usize, E)>;

/// `y + a * x`, merged.
pub fn axpy<F: Field>(field: &F, y: &[(usize, F::Elem)], a: &F::Elem, x: &[(usize, F::Elem)]) -> SVec<F::Elem> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j >= x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i >= y.len() || x[j].0 < y[i].0 {
            let v = field.mul(a, &x[j].1);
            if !field.is_zero(&v) {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&y[i].1, &field.mul(a, &x[j].1));
            if !field.is_zero(&v) {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(field: &F, a: &F::Elem, x: &[(usize, F::Elem)]) -> SVec<F::Elem> {
    if field.is_zero(a) {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, field.mul(a, v))).collect()
}

pub fn to_dense<F: Field>(field: &F, dim: usize, x: &[(usize, F::Elem)]) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); dim];
    for (i, v) in x {
        out[*i] = v.clone();
    }
    out
}

pub fn from_dense<F: Field>(field: &F, x: &[F::Elem]) -> SVec<F::Elem> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !field.is_zero(v))
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Sorts by index, sums duplicates and drops zeros.
pub fn normalize<F: Field>(field: &F, mut x: Vec<(usize, F::Elem)>) -> SVec<F::Elem> {
    x.sort_by_key(|(i, _)| *i);
    let mut out: SVec<F::Elem> = Vec::with_capacity(x.len());
    for (i, v) in x {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w = field.add(w, &v),
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

pub fn shift<E: Clone>(x: &[(usize, E)], offset: usize) -> SVec<E> {
    x.iter().map(|(i, v)| (i + offset, v.clone())).collect()
}
