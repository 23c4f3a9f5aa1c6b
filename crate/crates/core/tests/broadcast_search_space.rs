//! The broadcast verifier only searches subspaces of `X ⊗ X`. These tests
//! enumerate every subspace of the composite space at small scale and check
//! that nothing outside `X ⊗ X` reduces to `X` on both factors.

use mqt_core::broadcast::reduces_to_both;
use mqt_core::{enumerate_broadcast_candidates, enumerate_subspaces, tensor_subspace, Budget, FieldSpec, Subspace};

fn check(q: u64, n: usize) -> usize {
    let f = FieldSpec::builtin(q).unwrap();
    let composite = enumerate_subspaces(&f, n * n, None, Budget::DEFAULT).unwrap();
    let mut total = 0;
    for x in enumerate_subspaces(&f, n, None, Budget::DEFAULT).unwrap() {
        if x.is_null() {
            continue;
        }
        let xx = tensor_subspace(&x, &x).unwrap();
        let direct: Vec<&Subspace> = composite.iter().filter(|m| reduces_to_both(m, &x).unwrap()).collect();
        for m in &direct {
            assert!(
                xx.includes(m).unwrap(),
                "GF({q}): {m} reduces to {x} but escapes {x}⊗{x}"
            );
        }
        let restricted = enumerate_broadcast_candidates(&x, Budget::DEFAULT).unwrap();
        assert_eq!(restricted.len(), direct.len(), "GF({q}) {x}");
        for c in &restricted {
            assert!(direct.contains(&&c.state));
        }
        total += direct.len();
    }
    total
}

#[test]
fn gf2_square() {
    assert!(check(2, 2) > 0);
}

#[test]
fn gf3_square() {
    assert!(check(3, 2) > 0);
}
