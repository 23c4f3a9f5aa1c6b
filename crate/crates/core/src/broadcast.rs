//! Cloning and broadcasting of MQT states.
//!
//! A broadcast of the mixed state `X ⊆ F^n` is a composite state `M ⊆ F^n ⊗ F^n`
//! that reduces to `X` on both factors. This module provides
//!
//! * the linear-algebra test for cloning a list of pure states,
//! * the measure-and-prepare broadcaster for any pair of subspaces,
//! * the broadcaster for diamonds whose common meet `R` is nonzero,
//! * the discriminating measurement `E_C = ann((A⊗A) ∨ (B⊗B))`, and
//! * [`verify_no_broadcast`], which enumerates every candidate output triple
//!   `(M_A, M_B, M_C)` for a null-bottom diamond and refutes each one.
//!
//! The verifier cannot quantify over processes. Instead it uses a property
//! every process has: evolution maps joins to joins, and `C ⊆ A ∨ B`, so any
//! process forces `M_C ⊆ M_A ∨ M_B`. Each candidate triple is refuted twice,
//! once by that inclusion failing and once by the discriminator
//! p-distinguishing the three outputs; the two must agree.

use rayon::prelude::*;

use crate::composite::{reduce, tensor_subspace, FactorShape};
use crate::error::{domain, Error, Result};
use crate::field::Fe;
use crate::linalg::{dot, Matrix, Vector};
use crate::measurement::{is_possible, pairs_nonzero, Effect, Measurement};
use crate::subspace::{enumerate_subspaces, Budget, DiamondTriple, Subspace};

/// A composite state offered as the broadcast output for `source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BroadcastCandidate {
    pub state: Subspace,
    pub source: Subspace,
}

impl BroadcastCandidate {
    /// Checks both reduction equalities before accepting the pair.
    pub fn new(state: Subspace, source: Subspace) -> Result<Self> {
        let candidate = BroadcastCandidate { state, source };
        if !candidate.is_valid()? {
            return domain(format!(
                "{} does not reduce to {} on both factors",
                candidate.state, candidate.source
            ));
        }
        Ok(candidate)
    }

    pub fn is_valid(&self) -> Result<bool> {
        reduces_to_both(&self.state, &self.source)
    }
}

fn square_shape(n: usize) -> FactorShape {
    FactorShape::bipartite(n, n).expect("ambient dimension is positive")
}

/// Whether `state ⊆ F^n ⊗ F^n` reduces to `source` on factor 1 and factor 2.
pub fn reduces_to_both(state: &Subspace, source: &Subspace) -> Result<bool> {
    let n = source.ambient();
    if state.ambient() != n * n {
        return domain(format!(
            "composite state has ambient {}, expected {}",
            state.ambient(),
            n * n
        ));
    }
    let shape = square_shape(n);
    Ok(&reduce(state, &shape, 0)? == source && &reduce(state, &shape, 1)? == source)
}

/// Outcome of [`clone_feasibility`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CloneVerdict {
    /// A linear map `T` on `F^d ⊗ F^d` with `T(ψ⊗blank) = ψ⊗ψ` for every
    /// listed state.
    Feasible {
        map: Matrix,
    },
    Infeasible(CloneWitness),
}

impl CloneVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CloneVerdict::Feasible { .. })
    }
}

/// State `index` equals `Σ c_i ψ_i` over earlier states, so linearity forces
/// its output to `Σ c_i ψ_i⊗ψ_i`, which differs from the clone `ψ⊗ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneWitness {
    pub index: usize,
    pub combination: Vec<(usize, Fe)>,
    pub forced: Vector,
    pub desired: Vector,
}

impl CloneWitness {
    /// Re-derives the contradiction from `states` alone.
    pub fn recheck(&self, states: &[Vector]) -> Result<bool> {
        let target = &states[self.index];
        let f = target.field();
        let mut sum = Vector::zero(f, target.dim());
        let mut forced = Vector::zero(f, target.dim() * target.dim());
        for &(i, c) in &self.combination {
            sum = sum.add(&states[i].scale(c))?;
            forced = forced.add(&states[i].kron(&states[i])?.scale(c))?;
        }
        Ok(&sum == target
            && forced == self.forced
            && self.desired == target.kron(target)?
            && self.forced != self.desired)
    }
}

/// Decides whether one linear map clones every state in `states` when the
/// second system starts in `blank`.
///
/// The map's `d^4` matrix entries are the unknowns of a linear system with
/// one equation per output coordinate per state. When the system is
/// inconsistent a witness is extracted from the first state that depends
/// linearly on earlier ones but whose forced output is not its clone.
///
/// No machine factor is modelled. Appending one whose final state may depend
/// on ψ leaves the obstruction intact: the forced output of a dependent
/// state still lacks the cross terms `ψ_i⊗ψ_j⊗m` its clone needs. That
/// argument is documented here, not checked.
pub fn clone_feasibility(states: &[Vector], blank: &Vector) -> Result<CloneVerdict> {
    let d = blank.dim();
    if blank.is_zero() {
        return domain("blank state must be nonzero");
    }
    for (i, s) in states.iter().enumerate() {
        if s.dim() != d || s.field() != blank.field() {
            return domain(format!(
                "state {i} does not live in the blank's space GF({})^{d}",
                blank.field()
            ));
        }
        if s.is_zero() {
            return domain(format!("state {i} is the zero vector"));
        }
    }
    let f = blank.field();
    let dd = d * d;
    let mut system = Matrix::zeros(f, states.len() * dd, dd * dd);
    let mut rhs = Vec::with_capacity(states.len() * dd);
    for (s, psi) in states.iter().enumerate() {
        let input = psi.kron(blank)?;
        let output = psi.kron(psi)?;
        for i in 0..dd {
            for j in 0..dd {
                system[(s * dd + i, i * dd + j)] = input[j];
            }
            rhs.push(output[i]);
        }
    }
    let solution = system.solve(&Vector::from_parts(f, rhs))?;
    let witness = find_clone_witness(states)?;
    match (solution, witness) {
        (Some(x), None) => Ok(CloneVerdict::Feasible {
            map: Matrix::from_parts(f, dd, dd, x.into_entries()),
        }),
        (None, Some(w)) => Ok(CloneVerdict::Infeasible(w)),
        (Some(_), Some(w)) => Err(Error::Invariant(format!(
            "clone system solvable but state {} has a linearity witness",
            w.index
        ))),
        (None, None) => Err(Error::Invariant(
            "clone system inconsistent but no linearity witness found".into(),
        )),
    }
}

fn find_clone_witness(states: &[Vector]) -> Result<Option<CloneWitness>> {
    let Some(first) = states.first() else {
        return Ok(None);
    };
    let f = first.field();
    let d = first.dim();
    let mut independent: Vec<usize> = Vec::new();
    for (idx, psi) in states.iter().enumerate() {
        let coords = if independent.is_empty() {
            None
        } else {
            let cols: Vec<Vector> = independent.iter().map(|&i| states[i].clone()).collect();
            Matrix::from_vectors(f, d, &cols)?.transpose().solve(psi)?
        };
        let Some(coords) = coords else {
            independent.push(idx);
            continue;
        };
        let mut forced = Vector::zero(f, d * d);
        let mut combination = Vec::new();
        for (k, &i) in independent.iter().enumerate() {
            if coords[k].is_zero() {
                continue;
            }
            combination.push((i, coords[k]));
            forced = forced.add(&states[i].kron(&states[i])?.scale(coords[k]))?;
        }
        let desired = psi.kron(psi)?;
        if forced != desired {
            return Ok(Some(CloneWitness {
                index: idx,
                combination,
                forced,
                desired,
            }));
        }
    }
    Ok(None)
}

/// Extends the basis of `base` to a basis of `target` with rows of the
/// canonical basis of `target`. Requires `base ⊆ target`.
fn extension_vectors(base: &Subspace, target: &Subspace) -> Vec<Vector> {
    let mut current = base.clone();
    let mut out = Vec::new();
    for v in target.basis_vectors() {
        if !current.contains_entries(v.entries()) {
            current = Subspace::span(
                target.field(),
                target.ambient(),
                &[current.basis_vectors(), vec![v.clone()]].concat(),
            )
            .expect("same ambient");
            out.push(v);
        }
    }
    out
}

fn diagonal_span(vectors: &[Vector], field: &crate::field::FieldSpec, n: usize) -> Result<Subspace> {
    let diag = vectors.iter().map(|v| v.kron(v)).collect::<Result<Vec<_>>>()?;
    Subspace::span(field, n * n, &diag)
}

/// Measure-and-prepare broadcaster for two inputs: measure in a basis
/// `{r_i} ∪ {a_j} ∪ {b_k}` adapted to `R = a ∧ b`, then prepare two copies of
/// the observed basis vector.
pub fn pairwise_broadcast(a: &Subspace, b: &Subspace) -> Result<(BroadcastCandidate, BroadcastCandidate)> {
    let r = a.meet(b)?;
    let f = a.field();
    let n = a.ambient();
    let r_basis = r.basis_vectors();
    let prepare = |x: &Subspace| -> Result<BroadcastCandidate> {
        let ext = extension_vectors(&r, x);
        let state = diagonal_span(&[r_basis.clone(), ext].concat(), f, n)?;
        BroadcastCandidate::new(state, x.clone())
            .map_err(|e| Error::Invariant(format!("pairwise broadcast output failed its reduction check: {e}")))
    };
    Ok((prepare(a)?, prepare(b)?))
}

/// `(x ⊗ r) ∨ (r ⊗ x)`: hand the input to one output at random and prepare
/// `r` in the other. Since `r ⊆ x`, each output reduces to `x ∨ r = x`.
pub fn overlap_broadcast(x: &Subspace, r: &Subspace) -> Result<BroadcastCandidate> {
    if r.is_null() {
        return domain("overlap broadcasting needs a nonzero common subspace");
    }
    if !x.includes(r)? {
        return domain(format!("{r} is not contained in {x}"));
    }
    let state = tensor_subspace(x, r)?.join(&tensor_subspace(r, x)?)?;
    BroadcastCandidate::new(state, x.clone())
        .map_err(|e| Error::Invariant(format!("overlap broadcast output failed its reduction check: {e}")))
}

/// `ann((X ⊗ X) ∨ (Y ⊗ Y))`.
pub fn discriminator_effect(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    Ok(tensor_subspace(x, x)?.join(&tensor_subspace(y, y)?)?.annihilator())
}

/// The measurement `{E_A, E_B, E_C, E_0}` on the composite space, labelled
/// `"A"`, `"B"`, `"C"`, `"0"`. `E_C` annihilates `A⊗A` and `B⊗B` (cyclically
/// for the others) and `E_0` is the whole dual space.
pub fn broadcast_discriminator(d: &DiamondTriple) -> Result<Measurement> {
    let n = d.ambient();
    Measurement::new(vec![
        Effect::new("A", discriminator_effect(&d.b, &d.c)?),
        Effect::new("B", discriminator_effect(&d.a, &d.c)?),
        Effect::new("C", discriminator_effect(&d.a, &d.b)?),
        Effect::new("0", Subspace::full(d.field(), n * n)),
    ])
}

/// Every subspace of `x ⊗ x` that reduces to `x` on both factors, in the
/// enumeration order of their coordinates over the basis `{x_i ⊗ x_j}`.
pub fn enumerate_broadcast_candidates(x: &Subspace, budget: Budget) -> Result<Vec<BroadcastCandidate>> {
    if x.is_null() {
        return Ok(Vec::new());
    }
    let k = x.dim();
    let f = x.field();
    let product_basis = x.basis().kron(x.basis())?;
    let shape = square_shape(x.ambient());
    let mut out = Vec::new();
    for coords in enumerate_subspaces(f, k * k, None, budget)? {
        if coords.is_null() {
            continue;
        }
        let state = Subspace::row_space(&coords.basis().mul(&product_basis)?);
        if reduce(&state, &shape, 0)? == *x && reduce(&state, &shape, 1)? == *x {
            out.push(BroadcastCandidate {
                state,
                source: x.clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Possible,
    Impossible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Possible => "possible",
            Verdict::Impossible => "impossible",
        }
    }
}

/// `functional ∈ E_C` pairs to `pairing ≠ 0` with `vector ∈ candidate`, so
/// outcome C is possible on this `M_C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionWitness {
    pub candidate: Subspace,
    pub functional: Vector,
    pub vector: Vector,
    pub pairing: Fe,
}

/// Verdict of the broadcast search for one diamond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastCertificate {
    pub verdict: Verdict,
    pub diamond: DiamondTriple,
    /// Number of candidates for A, B and C.
    pub candidate_counts: [usize; 3],
    /// Number of candidate triples examined.
    pub candidates_checked: u64,
    /// The effect `E_C = ann((A⊗A) ∨ (B⊗B))`.
    pub discriminator: Subspace,
    /// One per candidate `M_C` when the verdict is impossible.
    pub witnesses: Vec<DetectionWitness>,
    /// Nonzero vectors of candidates `M_C` whose cross-term component was
    /// checked to be nonzero.
    pub cross_term_vectors_checked: u64,
    /// Broadcast outputs for A, B, C when the verdict is possible.
    pub broadcast_states: Vec<BroadcastCandidate>,
}

impl BroadcastCertificate {
    /// Re-validates every witness with [`is_possible`] and inclusion tests
    /// alone, without rerunning the search.
    pub fn recheck(&self) -> Result<bool> {
        let d = &self.diamond;
        match self.verdict {
            Verdict::Impossible => {
                let expected = discriminator_effect(&d.a, &d.b)?;
                if expected != self.discriminator {
                    return Ok(false);
                }
                let silent_on = tensor_subspace(&d.a, &d.a)?.join(&tensor_subspace(&d.b, &d.b)?)?;
                if !silent_on.annihilator().includes(&self.discriminator)? {
                    return Ok(false);
                }
                for w in &self.witnesses {
                    let effect = Effect::new(
                        "C",
                        Subspace::span(
                            w.functional.field(),
                            w.functional.dim(),
                            std::slice::from_ref(&w.functional),
                        )?,
                    );
                    let ok = self.discriminator.contains(&w.functional)?
                        && w.candidate.contains(&w.vector)?
                        && w.functional.dot(&w.vector)? == w.pairing
                        && !w.pairing.is_zero()
                        && is_possible(&effect, &w.candidate)?
                        && reduces_to_both(&w.candidate, &d.c)?;
                    if !ok {
                        return Ok(false);
                    }
                }
                Ok(self.witnesses.len() == self.candidate_counts[2])
            }
            Verdict::Possible => {
                let sources = [&d.a, &d.b, &d.c];
                Ok(self.broadcast_states.len() == 3
                    && self
                        .broadcast_states
                        .iter()
                        .zip(sources)
                        .map(|(s, src)| Ok(&s.source == src && s.is_valid()?))
                        .collect::<Result<Vec<bool>>>()?
                        .into_iter()
                        .all(|ok| ok))
            }
        }
    }
}

/// Basis data for a diamond: `{r_i}` spans `R`, `c_k = a_k + b_k` extends it
/// to `C`, with `a_k ∈ A` and `b_k ∈ B`.
#[derive(Debug, Clone)]
pub struct DiamondBasis {
    pub r: Vec<Vector>,
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
    pub c: Vec<Vector>,
}

pub fn diamond_basis(d: &DiamondTriple) -> Result<DiamondBasis> {
    let f = d.field();
    let n = d.ambient();
    let c_ext = extension_vectors(&d.bottom, &d.c);
    // columns: basis of A then basis of B
    let system = d.a.basis().vstack(d.b.basis())?.transpose();
    let da = d.a.dim();
    let (mut a_vecs, mut b_vecs) = (Vec::new(), Vec::new());
    for c in &c_ext {
        let x = system
            .solve(c)?
            .ok_or_else(|| Error::Invariant(format!("{c} is not in A ∨ B")))?;
        let combine = |basis: &Matrix, coeffs: &[Fe]| {
            let mut v = vec![Fe::ZERO; n];
            for (row, &k) in basis.row_iter().zip(coeffs) {
                for (acc, &e) in v.iter_mut().zip(row) {
                    *acc = f.add(*acc, f.mul(k, e));
                }
            }
            Vector::from_parts(f, v)
        };
        a_vecs.push(combine(d.a.basis(), &x.entries()[..da]));
        b_vecs.push(combine(d.b.basis(), &x.entries()[da..]));
    }
    Ok(DiamondBasis {
        r: d.bottom.basis_vectors(),
        a: a_vecs,
        b: b_vecs,
        c: c_ext,
    })
}

/// The null-bottom diamond `(span{a_k}, span{b_k}, span{c_k})` sitting
/// inside a diamond with nonzero bottom.
pub fn slice_diamond(d: &DiamondTriple) -> Result<DiamondTriple> {
    if d.bottom.is_null() {
        return domain("diamond already has a null bottom");
    }
    let basis = diamond_basis(d)?;
    let f = d.field();
    let n = d.ambient();
    let sliced = DiamondTriple::new(
        Subspace::span(f, n, &basis.a)?,
        Subspace::span(f, n, &basis.b)?,
        Subspace::span(f, n, &basis.c)?,
    )
    .map_err(|e| Error::Invariant(format!("sliced triple is not a diamond: {e}")))?;
    if !sliced.bottom.is_null() {
        return Err(Error::Invariant("sliced diamond has a nonzero bottom".into()));
    }
    Ok(sliced)
}

/// Broadcast states for all three members of a diamond with nonzero bottom.
pub fn certify_overlap_broadcast(d: &DiamondTriple) -> Result<BroadcastCertificate> {
    if d.bottom.is_null() {
        return domain("diamond has a null bottom; overlap broadcasting does not apply");
    }
    let states = [&d.a, &d.b, &d.c]
        .into_iter()
        .map(|x| overlap_broadcast(x, &d.bottom))
        .collect::<Result<Vec<_>>>()?;
    Ok(BroadcastCertificate {
        verdict: Verdict::Possible,
        diamond: d.clone(),
        candidate_counts: [1, 1, 1],
        candidates_checked: 1,
        discriminator: discriminator_effect(&d.a, &d.b)?,
        witnesses: Vec::new(),
        cross_term_vectors_checked: 0,
        broadcast_states: states,
    })
}

/// First pair of basis rows with nonzero pairing, if any.
fn detect(effect: &Subspace, state: &Subspace) -> Option<(Vector, Vector, Fe)> {
    let f = effect.field();
    for e in effect.basis().row_iter() {
        for v in state.basis().row_iter() {
            let p = dot(f, e, v);
            if !p.is_zero() {
                return Some((Vector::from_parts(f, e.to_vec()), Vector::from_parts(f, v.to_vec()), p));
            }
        }
    }
    None
}

#[derive(Default)]
struct Tally {
    checked: u64,
    survivors: Vec<(usize, usize, usize)>,
    disagreements: Vec<(usize, usize, usize)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.survivors.extend(other.survivors);
        self.disagreements.extend(other.disagreements);
        self
    }
}

/// Counts the nonzero vectors of `m_c` and checks each has a nonzero
/// `a⊗b` or `b⊗a` component in the basis `{a_k, b_k}` of `S`.
fn check_cross_terms(basis: &DiamondBasis, m_c: &Subspace, budget: Budget) -> Result<u64> {
    let f = m_c.field();
    let n = m_c.ambient();
    let d = basis.a.len();
    let span_basis: Vec<Vector> = basis.a.iter().chain(&basis.b).cloned().collect();
    let u = Matrix::from_vectors(f, (n as f64).sqrt() as usize, &span_basis)?;
    let coords_system = u.kron(&u)?.transpose();
    let width = 2 * d;
    let mut checked = 0;
    for v in m_c.vectors(budget)?.into_iter().filter(|v| !v.is_zero()) {
        let coeffs = coords_system
            .solve(&v)?
            .ok_or_else(|| Error::Invariant(format!("{v} is outside S ⊗ S")))?;
        let cross = (0..width).any(|i| (0..width).any(|j| (i < d) != (j < d) && !coeffs[i * width + j].is_zero()));
        if !cross {
            return Err(Error::Invariant(format!("{v} in {m_c} has no cross term")));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Exhaustively refutes every candidate broadcast of a null-bottom diamond.
///
/// For each candidate triple `(M_A, M_B, M_C)` both refutations are
/// evaluated: `M_C ⊄ M_A ∨ M_B`, and the discriminator from
/// [`broadcast_discriminator`] p-distinguishes the triple. Triples are
/// partitioned across the rayon pool by `M_A`. A triple surviving the
/// inclusion test would make the verdict `Possible`.
pub fn verify_no_broadcast(d: &DiamondTriple, budget: Budget) -> Result<BroadcastCertificate> {
    if !d.bottom.is_null() {
        return domain(format!(
            "diamond bottom {} is nonzero: these states can be broadcast (see overlap_broadcast); slice_diamond extracts a null-bottom diamond",
            d.bottom
        ));
    }
    let cand = [
        enumerate_broadcast_candidates(&d.a, budget)?,
        enumerate_broadcast_candidates(&d.b, budget)?,
        enumerate_broadcast_candidates(&d.c, budget)?,
    ];
    let meas = broadcast_discriminator(d)?;
    let effects: Vec<&Subspace> = ["A", "B", "C"]
        .iter()
        .map(|l| meas.effect(l).map(|e| &e.dual))
        .collect::<Result<_>>()?;
    let e_c = effects[2].clone();

    // possible[j][x][i]: outcome j fires on candidate i for input x
    let possible: Vec<Vec<Vec<bool>>> = effects
        .iter()
        .map(|e| {
            cand.iter()
                .map(|cs| cs.iter().map(|m| pairs_nonzero(e, &m.state)).collect())
                .collect()
        })
        .collect();

    for (x, label) in [(0, "A"), (1, "B")] {
        if let Some(i) = possible[2][x].iter().position(|&p| p) {
            return Err(Error::Invariant(format!(
                "E_C fires on candidate {} for {label}",
                cand[x][i].state
            )));
        }
    }

    let basis = diamond_basis(d)?;
    let mut witnesses = Vec::with_capacity(cand[2].len());
    let mut cross_checked = 0;
    for m_c in &cand[2] {
        let (functional, vector, pairing) =
            detect(&e_c, &m_c.state).ok_or_else(|| Error::Invariant(format!("E_C misses candidate {}", m_c.state)))?;
        cross_checked += check_cross_terms(&basis, &m_c.state, budget)?;
        witnesses.push(DetectionWitness {
            candidate: m_c.state.clone(),
            functional,
            vector,
            pairing,
        });
    }

    let distinguishes = |ia: usize, ib: usize, ic: usize| {
        let idx = [ia, ib, ic];
        (0..3).all(|j| (0..3).all(|k| possible[j][k][idx[k]] == (j == k)))
    };
    let tally = (0..cand[0].len())
        .into_par_iter()
        .map(|ia| {
            let mut t = Tally::default();
            for (ib, m_b) in cand[1].iter().enumerate() {
                let joined = cand[0][ia].state.join_unchecked(&m_b.state);
                for (ic, m_c) in cand[2].iter().enumerate() {
                    t.checked += 1;
                    let refuted = !joined.includes_unchecked(&m_c.state);
                    if !refuted {
                        t.survivors.push((ia, ib, ic));
                    }
                    if refuted != distinguishes(ia, ib, ic) {
                        t.disagreements.push((ia, ib, ic));
                    }
                }
            }
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);

    if let Some(&(ia, ib, ic)) = tally.disagreements.first() {
        return Err(Error::Invariant(format!(
            "inclusion and p-distinguishability disagree on ({}, {}, {})",
            cand[0][ia].state, cand[1][ib].state, cand[2][ic].state
        )));
    }

    let counts = [cand[0].len(), cand[1].len(), cand[2].len()];
    if let Some(&(ia, ib, ic)) = tally.survivors.first() {
        return Ok(BroadcastCertificate {
            verdict: Verdict::Possible,
            diamond: d.clone(),
            candidate_counts: counts,
            candidates_checked: tally.checked,
            discriminator: e_c,
            witnesses: Vec::new(),
            cross_term_vectors_checked: cross_checked,
            broadcast_states: vec![cand[0][ia].clone(), cand[1][ib].clone(), cand[2][ic].clone()],
        });
    }
    Ok(BroadcastCertificate {
        verdict: Verdict::Impossible,
        diamond: d.clone(),
        candidate_counts: counts,
        candidates_checked: tally.checked,
        discriminator: e_c,
        witnesses,
        cross_term_vectors_checked: cross_checked,
        broadcast_states: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::measurement::is_p_distinguishing;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::builtin(q).unwrap()
    }

    fn sub(q: u64, n: usize, rows: &[&[u64]]) -> Subspace {
        Subspace::from_ints(&gf(q), n, rows).unwrap()
    }

    fn v(q: u64, e: &[u64]) -> Vector {
        Vector::from_ints(&gf(q), e).unwrap()
    }

    fn eq13(q: u64) -> DiamondTriple {
        DiamondTriple::new(sub(q, 2, &[&[1, 0]]), sub(q, 2, &[&[0, 1]]), sub(q, 2, &[&[1, 1]])).unwrap()
    }

    #[test]
    fn cloning_examples() {
        let blank = v(2, &[1, 0]);
        let verdict = clone_feasibility(&[v(2, &[1, 0]), v(2, &[0, 1])], &blank).unwrap();
        let CloneVerdict::Feasible { map } = verdict else {
            panic!("expected feasible")
        };
        for psi in [v(2, &[1, 0]), v(2, &[0, 1])] {
            assert_eq!(
                map.mul_vec(&psi.kron(&blank).unwrap()).unwrap(),
                psi.kron(&psi).unwrap()
            );
        }

        let states = [v(2, &[1, 0]), v(2, &[0, 1]), v(2, &[1, 1])];
        let CloneVerdict::Infeasible(w) = clone_feasibility(&states, &blank).unwrap() else {
            panic!("expected infeasible")
        };
        assert_eq!(w.index, 2);
        assert_eq!(w.forced, v(2, &[1, 0, 0, 1]));
        assert_eq!(w.desired, v(2, &[1, 1, 1, 1]));
        assert!(w.recheck(&states).unwrap());

        assert!(clone_feasibility(&[v(2, &[1, 0])], &blank).unwrap().is_feasible());
        assert!(clone_feasibility(&[v(2, &[1, 0, 0])], &blank).is_err());
        assert!(clone_feasibility(&[v(2, &[0, 0])], &blank).is_err());
    }

    #[test]
    fn parallel_vectors_are_not_exact_clones() {
        // over GF(3), 2ψ would be sent to 2ψ⊗ψ, not 2ψ⊗2ψ = ψ⊗ψ
        let blank = v(3, &[1, 0]);
        let verdict = clone_feasibility(&[v(3, &[1, 0]), v(3, &[2, 0])], &blank).unwrap();
        assert!(!verdict.is_feasible());
    }

    #[test]
    fn pairwise_examples() {
        let a = sub(2, 2, &[&[1, 0]]);
        let b = sub(2, 2, &[&[1, 1]]);
        let (ma, mb) = pairwise_broadcast(&a, &b).unwrap();
        assert_eq!(ma.state, sub(2, 4, &[&[1, 0, 0, 0]]));
        assert_eq!(mb.state, sub(2, 4, &[&[1, 1, 1, 1]]));

        let (ma, mb) = pairwise_broadcast(&a, &a).unwrap();
        assert_eq!(ma, mb);

        let a = sub(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = sub(2, 3, &[&[0, 1, 0], &[0, 0, 1]]);
        let (ma, _) = pairwise_broadcast(&a, &b).unwrap();
        let e = |i| Vector::unit(&gf(2), 3, i);
        let expected = Subspace::span(&gf(2), 9, &[e(1).kron(&e(1)).unwrap(), e(0).kron(&e(0)).unwrap()]).unwrap();
        assert_eq!(ma.state, expected);
    }

    #[test]
    fn overlap_examples() {
        let x = sub(2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let r = sub(2, 3, &[&[0, 1, 0]]);
        let m = overlap_broadcast(&x, &r).unwrap();
        assert_eq!(m.state.dim(), 3);
        assert!(m.is_valid().unwrap());

        let same = overlap_broadcast(&x, &x).unwrap();
        assert_eq!(same.state, tensor_subspace(&x, &x).unwrap());

        assert!(overlap_broadcast(&x, &Subspace::null(&gf(2), 3)).is_err());
        assert!(overlap_broadcast(&r, &x).is_err());
    }

    #[test]
    fn discriminator_examples() {
        let d = eq13(2);
        let meas = broadcast_discriminator(&d).unwrap();
        let e_c = meas.effect("C").unwrap();
        assert_eq!(e_c.dual, sub(2, 4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]));
        let cc = tensor_subspace(&d.c, &d.c).unwrap();
        assert!(is_possible(e_c, &cc).unwrap());
        assert!(!is_possible(e_c, &tensor_subspace(&d.a, &d.a).unwrap()).unwrap());
        assert!(!is_possible(e_c, &tensor_subspace(&d.b, &d.b).unwrap()).unwrap());

        let d3 = eq13(3);
        let meas = broadcast_discriminator(&d3).unwrap();
        let cc = sub(3, 4, &[&[1, 1, 1, 1]]);
        assert!(is_possible(meas.effect("C").unwrap(), &cc).unwrap());
    }

    #[test]
    fn candidate_enumeration() {
        let x = sub(2, 2, &[&[1, 0]]);
        let c = enumerate_broadcast_candidates(&x, Budget::DEFAULT).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].state, tensor_subspace(&x, &x).unwrap());

        assert!(
            enumerate_broadcast_candidates(&Subspace::null(&gf(2), 2), Budget::DEFAULT)
                .unwrap()
                .is_empty()
        );

        let full = Subspace::full(&gf(2), 2);
        let c = enumerate_broadcast_candidates(&full, Budget::DEFAULT).unwrap();
        let states: Vec<&Subspace> = c.iter().map(|m| &m.state).collect();
        assert!(states.contains(&&sub(2, 4, &[&[1, 0, 0, 0], &[0, 0, 0, 1]])));
        assert!(states.contains(&&sub(2, 4, &[&[1, 0, 0, 1]])));
        assert!(c.iter().all(|m| m.is_valid().unwrap()));

        // oracle: filter all 67 subspaces of GF(2)^4 directly
        let direct: Vec<Subspace> = enumerate_subspaces(&gf(2), 4, None, Budget::DEFAULT)
            .unwrap()
            .into_iter()
            .filter(|m| reduces_to_both(m, &full).unwrap())
            .collect();
        assert_eq!(direct.len(), c.len());
        assert!(direct.iter().all(|m| states.contains(&m)));

        assert!(enumerate_broadcast_candidates(&full, Budget(15)).is_err());
    }

    #[test]
    fn no_broadcast_for_eq13_triples() {
        for q in [2, 3] {
            let d = eq13(q);
            let cert = verify_no_broadcast(&d, Budget::DEFAULT).unwrap();
            assert_eq!(cert.verdict, Verdict::Impossible);
            assert_eq!(cert.candidate_counts, [1, 1, 1]);
            assert_eq!(cert.candidates_checked, 1);
            assert_eq!(cert.witnesses.len(), 1);
            assert!(cert.recheck().unwrap());
            let cc = tensor_subspace(&d.c, &d.c).unwrap();
            let ab = tensor_subspace(&d.a, &d.a)
                .unwrap()
                .join(&tensor_subspace(&d.b, &d.b).unwrap())
                .unwrap();
            assert!(!ab.includes(&cc).unwrap());
        }
    }

    #[test]
    fn verifier_rejects_nonnull_bottoms() {
        let d = DiamondTriple::new(
            sub(2, 3, &[&[1, 0, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[1, 1, 0], &[0, 0, 1]]),
        )
        .unwrap();
        assert!(matches!(
            verify_no_broadcast(&d, Budget::DEFAULT),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn slicing() {
        let d = DiamondTriple::new(
            sub(2, 3, &[&[1, 0, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[1, 1, 0], &[0, 0, 1]]),
        )
        .unwrap();
        let s = slice_diamond(&d).unwrap();
        assert_eq!(s.a, sub(2, 3, &[&[1, 0, 0]]));
        assert_eq!(s.b, sub(2, 3, &[&[0, 1, 0]]));
        assert_eq!(s.c, sub(2, 3, &[&[1, 1, 0]]));
        assert!(s.bottom.is_null());
        let cert = verify_no_broadcast(&s, Budget::DEFAULT).unwrap();
        assert_eq!(cert.verdict, Verdict::Impossible);
        assert!(slice_diamond(&s).is_err());
    }

    #[test]
    fn overlap_outputs_are_not_p_distinguishable() {
        let d = DiamondTriple::new(
            sub(2, 3, &[&[1, 0, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[0, 1, 0], &[0, 0, 1]]),
            sub(2, 3, &[&[1, 1, 0], &[0, 0, 1]]),
        )
        .unwrap();
        let cert = certify_overlap_broadcast(&d).unwrap();
        assert_eq!(cert.verdict, Verdict::Possible);
        assert!(cert.recheck().unwrap());
        let states: Vec<Subspace> = cert.broadcast_states.iter().map(|m| m.state.clone()).collect();
        let meas = broadcast_discriminator(&d).unwrap();
        assert!(!is_p_distinguishing(&meas, &states, &["A", "B", "C"]).unwrap());
    }
}
