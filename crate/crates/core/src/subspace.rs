//! Subspaces of `F^n` in canonical form, the lattice operations on them, and
//! exhaustive enumeration.
//!
//! A [`Subspace`] is stored as the RREF basis of its row space, so two
//! subspaces are equal exactly when their stored bases are equal. The null
//! subspace has an empty basis.
//!
//! The dual space is modelled as `F^n` itself under the pairing
//! `<e|v> = sum e_i v_i`; [`Subspace::annihilator`] returns a subspace of
//! that same coordinate space.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{dot, format_row, Matrix, Vector};

/// Upper bound on the number of vectors an enumeration may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1 << 20);

    /// Succeeds when `q^dim` vectors fit in the budget.
    pub fn check(self, field: &FieldSpec, dim: usize, what: &str) -> Result<()> {
        let needed = u32::try_from(dim).ok().and_then(|d| field.order().checked_pow(d));
        match needed {
            Some(n) if n <= self.0 => Ok(()),
            _ => Err(Error::Budget {
                what: what.to_string(),
                needed: format!("{}^{}", field.order(), dim),
                budget: self.0,
            }),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The null subspace `<0>` of `F^ambient`.
    pub fn null(field: &FieldSpec, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &FieldSpec, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (basis, pivots) = m.row_basis();
        Subspace { basis, pivots }
    }

    /// Span of `vectors` inside `F^ambient`; the empty span is `<0>`.
    pub fn span(field: &FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        Ok(Self::row_space(&Matrix::from_vectors(field, ambient, vectors)?))
    }

    /// Span of rows given as raw element encodings.
    pub fn from_ints(field: &FieldSpec, ambient: usize, rows: &[&[u64]]) -> Result<Self> {
        Ok(Self::row_space(&Matrix::from_ints(field, ambient, rows)?))
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_null(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }

    /// Canonical basis, one row per basis vector, in RREF.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis.row_vector(i)).collect()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return domain(format!("field mismatch: GF({}) vs GF({})", self.field(), other.field()));
        }
        if self.ambient() != other.ambient() {
            return domain(format!(
                "ambient dimension mismatch: {} vs {}",
                self.ambient(),
                other.ambient()
            ));
        }
        Ok(())
    }

    /// Reduces `v` against the pivot rows; zero iff `v` lies in the span.
    pub(crate) fn residue(&self, v: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = r[p];
            if c.is_zero() {
                continue;
            }
            for (x, &b) in r.iter_mut().zip(self.basis.row(i)).skip(p) {
                if !b.is_zero() {
                    *x = f.sub(*x, f.mul(c, b));
                }
            }
        }
        r
    }

    pub(crate) fn contains_entries(&self, v: &[Fe]) -> bool {
        self.residue(v).iter().all(|e| e.is_zero())
    }

    pub fn contains(&self, v: &Vector) -> Result<bool> {
        if v.field() != self.field() || v.dim() != self.ambient() {
            return domain("vector does not live in this subspace's ambient space");
        }
        Ok(self.contains_entries(v.entries()))
    }

    /// Whether `other ⊆ self`.
    pub fn includes(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.includes_unchecked(other))
    }

    pub(crate) fn includes_unchecked(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.basis.row_iter().all(|r| self.contains_entries(r))
    }

    /// `self ∨ other`: the span of both.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Subspace) -> Subspace {
        if self.includes_unchecked(other) {
            return self.clone();
        }
        if other.includes_unchecked(self) {
            return other.clone();
        }
        let stacked = self.basis.vstack(&other.basis).expect("compatible");
        Subspace::row_space(&stacked)
    }

    /// `self ∧ other`: the intersection. Solves `x·A + y·B = 0` for the
    /// stacked bases; each solution gives `x·A` in both subspaces.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.meet_unchecked(other))
    }

    pub(crate) fn meet_unchecked(&self, other: &Subspace) -> Subspace {
        let f = self.field();
        if self.is_null() || other.is_null() {
            return Subspace::null(f, self.ambient());
        }
        let stacked = self.basis.vstack(&other.basis).expect("compatible");
        let relations = stacked.transpose().right_kernel();
        let da = self.dim();
        let n = self.ambient();
        let mut data = Vec::with_capacity(relations.rows() * n);
        for rel in relations.row_iter() {
            let coeffs = &rel[..da];
            for j in 0..n {
                let col: Vec<Fe> = (0..da).map(|i| self.basis[(i, j)]).collect();
                data.push(dot(f, coeffs, &col));
            }
        }
        Subspace::row_space(&Matrix::from_parts(f, relations.rows(), n, data))
    }

    /// All functionals vanishing on `self`, as a subspace of the dual `F^n`.
    pub fn annihilator(&self) -> Subspace {
        if self.is_null() {
            return Subspace::full(self.field(), self.ambient());
        }
        let kernel = crate::linalg::kernel_from_rref(&self.basis, &self.pivots);
        let pivots = kernel_pivots(&kernel);
        Subspace { basis: kernel, pivots }
    }

    /// Every vector of the subspace, zero first, ordered by the coefficient
    /// tuple over the canonical basis (last coordinate varying fastest).
    pub fn vectors(&self, budget: Budget) -> Result<Vec<Vector>> {
        budget.check(self.field(), self.dim(), "subspace vector enumeration")?;
        let f = self.field();
        let q = f.order();
        let d = self.dim();
        let n = self.ambient();
        let total = q.pow(d as u32);
        let mut out = Vec::with_capacity(total as usize);
        let mut coeffs = vec![0u64; d];
        for _ in 0..total {
            let mut v = vec![Fe::ZERO; n];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x = f.add(*x, f.mul(Fe(c), b));
                }
            }
            out.push(Vector::from_parts(f, v));
            for c in coeffs.iter_mut().rev() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// Image under a linear map `F^n -> F^m` given as an `m x n` matrix.
    pub fn image(&self, map: &Matrix) -> Result<Subspace> {
        if map.field() != self.field() || map.cols() != self.ambient() {
            return domain(format!(
                "cannot apply a {}x{} map to subspaces of F^{}",
                map.rows(),
                map.cols(),
                self.ambient()
            ));
        }
        if self.is_null() {
            return Ok(Subspace::null(self.field(), map.rows()));
        }
        let images = self.basis.mul(&map.transpose())?;
        Ok(Subspace::row_space(&images))
    }

    /// Sort key giving the enumeration order: dimension, pivots, entries.
    pub fn order_key(&self) -> (usize, &[usize], &[Fe]) {
        (self.dim(), &self.pivots, self.basis.data())
    }
}

fn kernel_pivots(m: &Matrix) -> Vec<usize> {
    m.row_iter()
        .map(|r| r.iter().position(|e| !e.is_zero()).expect("basis rows are nonzero"))
        .collect()
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null() {
            return f.write_str("⟨0⟩");
        }
        let rows: Vec<String> = self.basis.row_iter().map(|r| format_row(self.field(), r)).collect();
        write!(f, "⟨{}⟩", rows.join(","))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} ⊆ GF({})^{}", self.field(), self.ambient())
    }
}

/// Free-function form of [`Subspace::vectors`].
pub fn enumerate_vectors(a: &Subspace, budget: Budget) -> Result<Vec<Vector>> {
    a.vectors(budget)
}

/// Every subspace of `F^ambient` exactly once, optionally only those of one
/// dimension. Ordered by dimension, then pivot columns lexicographically,
/// then free entries (last free entry varying fastest).
pub fn enumerate_subspaces(
    field: &FieldSpec,
    ambient: usize,
    dim_filter: Option<usize>,
    budget: Budget,
) -> Result<Vec<Subspace>> {
    budget.check(field, ambient, "subspace enumeration")?;
    let dims: Vec<usize> = match dim_filter {
        Some(d) if d > ambient => return Ok(Vec::new()),
        Some(d) => vec![d],
        None => (0..=ambient).collect(),
    };
    let mut out = Vec::new();
    for d in dims {
        for pivots in combinations(ambient, d) {
            enumerate_rref(field, ambient, &pivots, &mut out);
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn enumerate_rref(field: &FieldSpec, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let d = pivots.len();
    let mut template = Matrix::zeros(field, d, n);
    let mut free = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        template[(i, p)] = Fe::ONE;
        for j in p + 1..n {
            if !pivots.contains(&j) {
                free.push((i, j));
            }
        }
    }
    let q = field.order();
    let mut counter = vec![0u64; free.len()];
    loop {
        let mut m = template.clone();
        for (&(i, j), &c) in free.iter().zip(&counter) {
            m[(i, j)] = Fe(c);
        }
        out.push(Subspace {
            basis: m,
            pivots: pivots.to_vec(),
        });
        let mut carried = true;
        for c in counter.iter_mut().rev() {
            *c += 1;
            if *c < q {
                carried = false;
                break;
            }
            *c = 0;
        }
        if carried {
            break;
        }
    }
}

/// Gaussian binomial coefficient `[n choose k]_q`: the number of
/// `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Three subspaces with a common pairwise join (`top`) and a common pairwise
/// meet (`bottom`): an M3 sublattice of the subspace lattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiamondTriple {
    pub a: Subspace,
    pub b: Subspace,
    pub c: Subspace,
    pub top: Subspace,
    pub bottom: Subspace,
}

impl DiamondTriple {
    pub fn new(a: Subspace, b: Subspace, c: Subspace) -> Result<Self> {
        match is_diamond(&a, &b, &c)? {
            Some((top, bottom)) => Ok(DiamondTriple { a, b, c, top, bottom }),
            None => domain(format!("{a}, {b}, {c} do not form a diamond")),
        }
    }

    /// Common dimension of the three members.
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn ambient(&self) -> usize {
        self.a.ambient()
    }

    pub fn field(&self) -> &FieldSpec {
        self.a.field()
    }

    pub fn has_null_bottom(&self) -> bool {
        self.bottom.is_null()
    }
}

/// `Some((top, bottom))` when `a ∨ b = b ∨ c = a ∨ c` and
/// `a ∧ b = b ∧ c = a ∧ c`, for pairwise distinct inputs.
pub fn is_diamond(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<Option<(Subspace, Subspace)>> {
    a.check_compatible(b)?;
    a.check_compatible(c)?;
    if a == b || b == c || a == c {
        return Ok(None);
    }
    let top = a.join_unchecked(b);
    if b.join_unchecked(c) != top || a.join_unchecked(c) != top {
        return Ok(None);
    }
    let bottom = a.meet_unchecked(b);
    if b.meet_unchecked(c) != bottom || a.meet_unchecked(c) != bottom {
        return Ok(None);
    }
    Ok(Some((top, bottom)))
}

/// All unordered diamond triples among the subspaces of `F^ambient`
/// (restricted to one member dimension when `dim_filter` is set), in
/// enumeration order.
pub fn find_diamonds(
    field: &FieldSpec,
    ambient: usize,
    dim_filter: Option<usize>,
    require_null_bottom: bool,
    budget: Budget,
) -> Result<Vec<DiamondTriple>> {
    let subs = enumerate_subspaces(field, ambient, dim_filter, budget)?;
    let n = subs.len();
    let mut table: Vec<Option<(Subspace, Subspace)>> = vec![None; n * n];
    for i in 0..n {
        for j in i + 1..n {
            table[i * n + j] = Some((subs[i].join_unchecked(&subs[j]), subs[i].meet_unchecked(&subs[j])));
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (top, bottom) = table[i * n + j].as_ref().expect("filled");
            if require_null_bottom && !bottom.is_null() {
                continue;
            }
            for k in j + 1..n {
                let same = |x: usize, y: usize| {
                    let (t, b) = table[x * n + y].as_ref().expect("filled");
                    t == top && b == bottom
                };
                if same(i, k) && same(j, k) {
                    out.push(DiamondTriple {
                        a: subs[i].clone(),
                        b: subs[j].clone(),
                        c: subs[k].clone(),
                        top: top.clone(),
                        bottom: bottom.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Both sides of the distributive law for `c ∨ (a ∧ b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributivity {
    pub a: Subspace,
    pub b: Subspace,
    pub c: Subspace,
    /// `c ∨ (a ∧ b)`
    pub left: Subspace,
    /// `(c ∨ a) ∧ (c ∨ b)`
    pub right: Subspace,
}

impl Distributivity {
    pub fn evaluate(a: Subspace, b: Subspace, c: Subspace) -> Result<Self> {
        let left = c.join(&a.meet(&b)?)?;
        let right = c.join(&a)?.meet(&c.join(&b)?)?;
        Ok(Distributivity { a, b, c, left, right })
    }

    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// `A = ⟨e_0⟩`, `B = ⟨e_1⟩`, `C = ⟨e_0 + e_1⟩` inside `F^ambient`. For
/// ambient 2 the right-hand side is the whole space while the left is `C`.
pub fn distributivity_counterexample(field: &FieldSpec, ambient: usize) -> Result<Distributivity> {
    if ambient < 2 {
        return domain(format!("ambient dimension must be at least 2, got {ambient}"));
    }
    let e = |i| Vector::unit(field, ambient, i);
    let a = Subspace::span(field, ambient, &[e(0)])?;
    let b = Subspace::span(field, ambient, &[e(1)])?;
    let c = Subspace::span(field, ambient, &[e(0).add(&e(1))?])?;
    Distributivity::evaluate(a, b, c)
}
