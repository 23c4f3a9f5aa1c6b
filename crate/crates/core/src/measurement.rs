//! Generalized measurements: effect subspaces of the dual space, the
//! possibility predicate, and p-distinguishability.
//!
//! An outcome with effect `E` is possible on the state `M` when some
//! functional in `E` pairs nonzero with some vector in `M`. A measurement is
//! complete when its effects join to the whole dual space.

use std::collections::HashSet;

use crate::error::{domain, Error, Result};
use crate::linalg::{dot, Matrix};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Effect {
    pub label: String,
    /// Subspace of the dual space, in the same coordinates as states.
    pub dual: Subspace,
}

impl Effect {
    pub fn new(label: impl Into<String>, dual: Subspace) -> Self {
        Effect {
            label: label.into(),
            dual,
        }
    }
}

/// A complete collection of uniquely labelled effects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    effects: Vec<Effect>,
}

impl Measurement {
    /// Validates labels, ambient spaces and completeness.
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let Some(first) = effects.first() else {
            return domain("a measurement needs at least one effect");
        };
        let field = first.dual.field().clone();
        let ambient = first.dual.ambient();
        let mut labels = HashSet::new();
        let mut join = Subspace::null(&field, ambient);
        for e in &effects {
            if !labels.insert(e.label.as_str()) {
                return domain(format!("duplicate effect label {:?}", e.label));
            }
            join = join.join(&e.dual)?;
        }
        if !join.is_full() {
            return domain(format!(
                "effects are incomplete: their join has dimension {} of {ambient}",
                join.dim()
            ));
        }
        Ok(Measurement { effects })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn ambient(&self) -> usize {
        self.effects[0].dual.ambient()
    }

    pub fn effect(&self, label: &str) -> Result<&Effect> {
        self.effects
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::Domain(format!("unknown effect label {label:?}")))
    }

    /// Labels of effects with a null dual subspace. Such outcomes can never
    /// fire, which usually means the measurement was built by mistake.
    pub fn warnings(&self) -> Vec<&str> {
        self.effects
            .iter()
            .filter(|e| e.dual.is_null())
            .map(|e| e.label.as_str())
            .collect()
    }

    /// Labels of the outcomes possible on `state`, in effect order.
    pub fn possible_outcomes(&self, state: &Subspace) -> Result<Vec<&str>> {
        let mut out = Vec::new();
        for e in &self.effects {
            if is_possible(e, state)? {
                out.push(e.label.as_str());
            }
        }
        Ok(out)
    }
}

/// Measurement in the basis given by the rows of `basis`. Outcome `k` has
/// the dual-basis functional `<k|` with `<k|b_j> = δ_kj` as its effect.
pub fn simple_measurement(basis: &Matrix) -> Result<Measurement> {
    let functionals = basis.inverse()?.transpose();
    let field = basis.field();
    let effects = (0..functionals.rows())
        .map(|k| {
            let dual = Subspace::span(field, basis.cols(), &[functionals.row_vector(k)])?;
            Ok(Effect::new(k.to_string(), dual))
        })
        .collect::<Result<Vec<_>>>()?;
    Measurement::new(effects)
}

/// Whether some functional of `dual` pairs nonzero with some vector of
/// `state`. Both bases span their subspaces, so checking basis pairs
/// suffices.
pub(crate) fn pairs_nonzero(dual: &Subspace, state: &Subspace) -> bool {
    let f = dual.field();
    dual.basis()
        .row_iter()
        .any(|e| state.basis().row_iter().any(|v| !dot(f, e, v).is_zero()))
}

/// The predicate `E(M) ≠ 0`.
pub fn is_possible(effect: &Effect, state: &Subspace) -> Result<bool> {
    if effect.dual.field() != state.field() || effect.dual.ambient() != state.ambient() {
        return domain(format!(
            "effect {:?} lives in GF({})^{}, state in GF({})^{}",
            effect.label,
            effect.dual.field(),
            effect.dual.ambient(),
            state.field(),
            state.ambient()
        ));
    }
    Ok(pairs_nonzero(&effect.dual, state))
}

/// Checks that `measurement` p-distinguishes `states`, where state `k` is
/// meant to be identified by the effect labelled `assignment[k]`: every
/// assigned outcome is possible on its own state and impossible on every
/// other listed state. Unassigned effects act as null outcomes.
pub fn is_p_distinguishing(measurement: &Measurement, states: &[Subspace], assignment: &[&str]) -> Result<bool> {
    if states.len() != assignment.len() {
        return domain(format!(
            "{} states but {} assigned labels",
            states.len(),
            assignment.len()
        ));
    }
    let effects = assignment
        .iter()
        .map(|label| measurement.effect(label))
        .collect::<Result<Vec<_>>>()?;
    for (j, e) in effects.iter().enumerate() {
        for (k, s) in states.iter().enumerate() {
            if is_possible(e, s)? != (j == k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Machine-checkable record that a diamond triple admits no
/// p-distinguishing measurement: every functional silent on `a` and `b` is
/// silent on `c`, because `c ⊆ a ∨ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonDistinguishability {
    pub ann_a: Subspace,
    pub ann_b: Subspace,
    pub ann_c: Subspace,
    /// `ann(a) ∧ ann(b)`: the functionals an effect for `c` could use.
    pub silent_on_ab: Subspace,
}

impl NonDistinguishability {
    /// Re-derives the inclusion from the stored subspaces alone.
    pub fn recheck(&self) -> Result<bool> {
        let silent = self.ann_a.meet(&self.ann_b)?;
        Ok(silent == self.silent_on_ab && self.ann_c.includes(&silent)?)
    }
}

pub fn diamond_not_p_distinguishable(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<NonDistinguishability> {
    if crate::subspace::is_diamond(a, b, c)?.is_none() {
        return domain(format!("{a}, {b}, {c} do not form a diamond"));
    }
    let record = NonDistinguishability {
        ann_a: a.annihilator(),
        ann_b: b.annihilator(),
        ann_c: c.annihilator(),
        silent_on_ab: a.annihilator().meet(&b.annihilator())?,
    };
    if !record.ann_c.includes(&record.silent_on_ab)? {
        return Err(Error::Invariant(format!(
            "ann({a}) ∧ ann({b}) is not inside ann({c}) although c ⊆ a ∨ b"
        )));
    }
    Ok(record)
}

/// A channel induced by a linear map on state vectors; it sends a subspace
/// to its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChannel {
    map: Matrix,
}

impl LinearChannel {
    pub fn new(map: Matrix) -> Self {
        LinearChannel { map }
    }

    pub fn map(&self) -> &Matrix {
        &self.map
    }

    pub fn apply(&self, state: &Subspace) -> Result<Subspace> {
        state.image(&self.map)
    }
}
