//! Composite systems: tensor products of subspaces and reduction to a
//! subsystem.
//!
//! Reduction keeps one factor and returns the smallest subspace `N` of that
//! factor such that the composite state lies in `F^left ⊗ N ⊗ F^right`. For a
//! pure state it is the span of all coefficient slices along the kept
//! factor; for a mixed state it is the join over a basis. Factor indices are
//! zero-based: `keep = 0` is system 1.

use crate::error::{domain, Result};
use crate::field::Fe;
use crate::linalg::{Matrix, Vector};
use crate::subspace::Subspace;

/// Dimensions of the factors of a composite space, left-factor-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorShape {
    dims: Vec<usize>,
}

impl FactorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return domain("a factor shape needs at least one factor");
        }
        if dims.contains(&0) {
            return domain(format!("factor dimensions must be ≥ 1, got {dims:?}"));
        }
        Ok(FactorShape { dims })
    }

    pub fn bipartite(d1: usize, d2: usize) -> Result<Self> {
        Self::new(vec![d1, d2])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// `(left, kept, right)` dimensions when grouping around factor `keep`.
    fn grouping(&self, keep: usize) -> Result<(usize, usize, usize)> {
        if keep >= self.dims.len() {
            return domain(format!("factor {keep} out of range for shape {:?}", self.dims));
        }
        let left = self.dims[..keep].iter().product();
        let right = self.dims[keep + 1..].iter().product();
        Ok((left, self.dims[keep], right))
    }
}

/// `a ⊗ b` inside `F^(n_a * n_b)`.
pub fn tensor_subspace(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    Ok(Subspace::row_space(&a.basis().kron(b.basis())?))
}

fn slices(entries: &[Fe], left: usize, mid: usize, right: usize, out: &mut Vec<Fe>) {
    for l in 0..left {
        for r in 0..right {
            out.extend((0..mid).map(|m| entries[(l * mid + m) * right + r]));
        }
    }
}

/// Subsystem state of the pure state `v` on factor `keep`.
pub fn reduce_pure(v: &Vector, shape: &FactorShape, keep: usize) -> Result<Subspace> {
    if v.dim() != shape.total() {
        return domain(format!(
            "vector of dimension {} does not match shape {:?}",
            v.dim(),
            shape.dims()
        ));
    }
    if v.is_zero() {
        return domain("the zero vector is not a pure state");
    }
    let (left, mid, right) = shape.grouping(keep)?;
    let mut data = Vec::with_capacity(left * right * mid);
    slices(v.entries(), left, mid, right, &mut data);
    Ok(Subspace::row_space(&Matrix::from_parts(
        v.field(),
        left * right,
        mid,
        data,
    )))
}

/// Subsystem state of the mixed state `m` on factor `keep`; `<0>` reduces
/// to `<0>`.
pub fn reduce(m: &Subspace, shape: &FactorShape, keep: usize) -> Result<Subspace> {
    if m.ambient() != shape.total() {
        return domain(format!(
            "subspace of ambient dimension {} does not match shape {:?}",
            m.ambient(),
            shape.dims()
        ));
    }
    let (left, mid, right) = shape.grouping(keep)?;
    let mut data = Vec::with_capacity(m.dim() * left * right * mid);
    for row in m.basis().row_iter() {
        slices(row, left, mid, right, &mut data);
    }
    let rows = data.len() / mid;
    Ok(Subspace::row_space(&Matrix::from_parts(m.field(), rows, mid, data)))
}
