use mqt_core::{
    clone_feasibility, is_p_distinguishing, is_possible, pairwise_broadcast, reduce, simple_measurement,
    tensor_subspace, Effect, FactorShape, FieldSpec, LinearChannel, Matrix, Subspace, Vector,
};
use proptest::prelude::*;

fn field(q: u64) -> FieldSpec {
    FieldSpec::builtin(q).unwrap()
}

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u64, 3, 4, 5]).prop_map(field)
}

fn arb_subspace(f: FieldSpec, n: usize) -> impl Strategy<Value = Subspace> {
    let q = f.order();
    prop::collection::vec(prop::collection::vec(0..q, n), 0..=n).prop_map(move |rows| {
        let vs: Vec<Vector> = rows.iter().map(|r| Vector::from_ints(&f, r).unwrap()).collect();
        Subspace::span(&f, n, &vs).unwrap()
    })
}

fn arb_pair(n: usize) -> impl Strategy<Value = (Subspace, Subspace)> {
    arb_field().prop_flat_map(move |f| (arb_subspace(f.clone(), n), arb_subspace(f, n)))
}

fn arb_matrix(f: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    let q = f.order();
    prop::collection::vec(prop::collection::vec(0..q, cols), rows).prop_map(move |rs| {
        let refs: Vec<&[u64]> = rs.iter().map(Vec::as_slice).collect();
        Matrix::from_ints(&f, cols, &refs).unwrap()
    })
}

proptest! {
    #[test]
    fn shrinking_states_keeps_them_distinguished(
        (f, rows, picks) in arb_field().prop_flat_map(|f| {
            let q = f.order();
            (Just(f), prop::collection::vec(prop::collection::vec(0..q, 3), 3), prop::collection::vec(0..q, 3))
        })
    ) {
        let refs: Vec<&[u64]> = rows.iter().map(Vec::as_slice).collect();
        let basis = Matrix::from_ints(&f, 3, &refs).unwrap();
        prop_assume!(basis.rank() == 3);
        let meas = simple_measurement(&basis).unwrap();
        // state k: span of basis rows {k, k+1}; outcomes k and k+1 are possible
        let states: Vec<Subspace> = (0..2)
            .map(|k| Subspace::span(&f, 3, &[basis.row_vector(k), basis.row_vector(k + 1)]).unwrap())
            .collect();
        let singles: Vec<Subspace> = (0..3)
            .map(|k| Subspace::span(&f, 3, &[basis.row_vector(k)]).unwrap())
            .collect();
        prop_assert!(is_p_distinguishing(&meas, &singles, &["0", "1", "2"]).unwrap());
        // any nonzero substate of a p-distinguished state is still distinguished
        let scalar = f.nonzero_elements().nth((picks[0] % (f.order() - 1)) as usize).unwrap();
        let sub = basis.row_vector(0).scale(scalar);
        let shrunk = vec![Subspace::span(&f, 3, &[sub]).unwrap(), singles[1].clone(), singles[2].clone()];
        prop_assert!(is_p_distinguishing(&meas, &shrunk, &["0", "1", "2"]).unwrap());
        // possibility is monotone under inclusion
        for e in meas.effects() {
            for s in &states {
                for t in &singles {
                    if s.includes(t).unwrap() && is_possible(e, t).unwrap() {
                        prop_assert!(is_possible(e, s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn possibility_is_monotone((small, extra) in arb_pair(3), effect_rows in prop::collection::vec(prop::collection::vec(0u64..2, 3), 1..3)) {
        let f = small.field().clone();
        let vs: Vec<Vector> = effect_rows
            .iter()
            .map(|r| Vector::from_ints(&f, r).unwrap())
            .collect();
        let effect = Effect::new("e", Subspace::span(&f, 3, &vs).unwrap());
        let big = small.join(&extra).unwrap();
        if is_possible(&effect, &small).unwrap() {
            prop_assert!(is_possible(&effect, &big).unwrap());
        }
    }

    #[test]
    fn channels_preserve_joins(
        (f, m, a, b) in arb_field().prop_flat_map(|f| {
            (Just(f.clone()), arb_matrix(f.clone(), 3, 2), arb_subspace(f.clone(), 2), arb_subspace(f, 2))
        })
    ) {
        let ch = LinearChannel::new(m);
        let lhs = ch.apply(&a.join(&b).unwrap()).unwrap();
        let rhs = ch.apply(&a).unwrap().join(&ch.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ch.apply(&Subspace::null(&f, 2)).unwrap().dim(), 0);
    }

    #[test]
    fn reduction_of_products((a, b) in arb_pair(2)) {
        prop_assume!(!a.is_null() && !b.is_null());
        let shape = FactorShape::bipartite(2, 2).unwrap();
        let ab = tensor_subspace(&a, &b).unwrap();
        prop_assert_eq!(reduce(&ab, &shape, 0).unwrap(), a);
        prop_assert_eq!(reduce(&ab, &shape, 1).unwrap(), b);
    }

    #[test]
    fn pairwise_broadcast_is_valid((a, b) in arb_pair(3)) {
        prop_assume!(!a.is_null() && !b.is_null());
        let (ma, mb) = pairwise_broadcast(&a, &b).unwrap();
        prop_assert!(ma.is_valid().unwrap());
        prop_assert!(mb.is_valid().unwrap());
        prop_assert!(tensor_subspace(&a, &a).unwrap().includes(&ma.state).unwrap());
    }

    #[test]
    fn independent_states_clone(
        (f, rows) in arb_field().prop_flat_map(|f| {
            let q = f.order();
            (Just(f), prop::collection::vec(prop::collection::vec(0..q, 3), 1..=3))
        })
    ) {
        let states: Vec<Vector> = rows.iter().map(|r| Vector::from_ints(&f, r).unwrap()).collect();
        prop_assume!(Matrix::from_vectors(&f, 3, &states).unwrap().rank() == states.len());
        let blank = Vector::unit(&f, 3, 2);
        prop_assert!(clone_feasibility(&states, &blank).unwrap().is_feasible());
    }
}
