//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails or overruns its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mqt_core::broadcast::{discriminator_effect, enumerate_broadcast_candidates};
use mqt_core::{
    broadcast_discriminator, clone_feasibility, distributivity_counterexample, enumerate_subspaces, find_diamonds,
    gaussian_binomial, is_p_distinguishing, overlap_broadcast, pairwise_broadcast, reduce, verify_no_broadcast, Budget,
    CloneVerdict, Effect, FactorShape, FieldSpec, LinearChannel, Matrix, Subspace, Vector, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn Fn() -> Check>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gf(q: u64) -> FieldSpec {
    FieldSpec::builtin(q).expect("built-in field")
}

fn all_subspaces(f: &FieldSpec, n: usize) -> Vec<Subspace> {
    enumerate_subspaces(f, n, None, Budget::DEFAULT).expect("within budget")
}

fn nonzero_vectors(f: &FieldSpec, n: usize) -> Vec<Vector> {
    Subspace::full(f, n)
        .vectors(Budget::DEFAULT)
        .expect("within budget")
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect()
}

fn square(n: usize) -> FactorShape {
    FactorShape::bipartite(n, n).unwrap()
}

fn distributivity() -> Check {
    for q in [2, 3] {
        let f = gf(q);
        let r = distributivity_counterexample(&f, 2).map_err(|e| e.to_string())?;
        ensure!(r.left == r.c, "GF({q}): C∨(A∧B) = {} ≠ C", r.left);
        ensure!(
            r.right == Subspace::full(&f, 2),
            "GF({q}): (C∨A)∧(C∨B) = {} ≠ V",
            r.right
        );
        ensure!(r.c != r.right, "GF({q}): C = V");
    }
    Ok("GF(2), GF(3): C∨(A∧B) = C, (C∨A)∧(C∨B) = V".into())
}

fn bell_reduction() -> Check {
    for q in [2, 3] {
        let f = gf(q);
        let bell = Subspace::from_ints(&f, 4, &[&[1, 0, 0, 1]]).unwrap();
        for keep in [0, 1] {
            let r = reduce(&bell, &square(2), keep).map_err(|e| e.to_string())?;
            ensure!(r.is_full(), "GF({q}) factor {}: {r}", keep + 1);
        }
    }
    Ok("both factors full over GF(2), GF(3)".into())
}

fn pairwise() -> Check {
    let mut pairs = 0;
    for (q, n) in [(2, 2), (2, 3), (3, 2)] {
        let f = gf(q);
        let subs: Vec<Subspace> = all_subspaces(&f, n).into_iter().filter(|s| !s.is_null()).collect();
        for a in &subs {
            for b in &subs {
                let (ma, mb) = pairwise_broadcast(a, b).map_err(|e| format!("{a}, {b}: {e}"))?;
                for (m, x) in [(&ma.state, a), (&mb.state, b)] {
                    for keep in [0, 1] {
                        let r = reduce(m, &square(n), keep).unwrap();
                        ensure!(&r == x, "GF({q})^{n} {a}, {b}: factor {} gives {r}", keep + 1);
                    }
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, all reductions equal"))
}

fn no_broadcasting() -> Check {
    let cases: [(u64, usize, Option<usize>); 3] = [(2, 2, None), (3, 2, None), (2, 4, Some(2))];
    let mut summary = Vec::new();
    let mut triples_total = 0;
    for (q, n, dim) in cases {
        let f = gf(q);
        let diamonds = find_diamonds(&f, n, dim, true, Budget::DEFAULT).map_err(|e| e.to_string())?;
        ensure!(!diamonds.is_empty(), "GF({q})^{n}: no diamonds found");
        for d in &diamonds {
            let cert =
                verify_no_broadcast(d, Budget::DEFAULT).map_err(|e| format!("{}, {}, {}: {e}", d.a, d.b, d.c))?;
            ensure!(
                cert.verdict == Verdict::Impossible,
                "{}, {}, {} can be broadcast",
                d.a,
                d.b,
                d.c
            );
            ensure!(
                cert.recheck().unwrap(),
                "certificate for {}, {}, {} fails recheck",
                d.a,
                d.b,
                d.c
            );

            let e_c = Effect::new("C", discriminator_effect(&d.a, &d.b).unwrap());
            let fires = |m: &Subspace| mqt_core::is_possible(&e_c, m).unwrap();
            let [ca, cb, cc] = [&d.a, &d.b, &d.c].map(|x| enumerate_broadcast_candidates(x, Budget::DEFAULT).unwrap());
            ensure!(
                ca.iter().chain(&cb).all(|m| !fires(&m.state)),
                "E_C fires on an A or B candidate"
            );
            ensure!(cc.iter().all(|m| fires(&m.state)), "E_C misses a C candidate");
            let product = (ca.len() * cb.len() * cc.len()) as u64;
            ensure!(
                cert.candidates_checked == product,
                "checked {} of {product} triples",
                cert.candidates_checked
            );
            triples_total += product;
        }
        summary.push(format!("GF({q})^{n}: {} diamonds", diamonds.len()));
    }
    Ok(format!(
        "{}; {triples_total} candidate triples refuted",
        summary.join(", ")
    ))
}

fn overlap() -> Check {
    let f = gf(2);
    let diamonds = find_diamonds(&f, 3, None, false, Budget::DEFAULT).map_err(|e| e.to_string())?;
    let with_bottom: Vec<_> = diamonds.into_iter().filter(|d| !d.bottom.is_null()).collect();
    ensure!(!with_bottom.is_empty(), "no non-null-bottom diamonds in GF(2)^3");
    for d in &with_bottom {
        let mut states = Vec::new();
        for x in [&d.a, &d.b, &d.c] {
            let m = overlap_broadcast(x, &d.bottom).map_err(|e| e.to_string())?;
            for keep in [0, 1] {
                ensure!(&reduce(&m.state, &square(3), keep).unwrap() == x, "{x}: bad reduction");
            }
            states.push(m.state);
        }
        let meas = broadcast_discriminator(d).unwrap();
        ensure!(
            !is_p_distinguishing(&meas, &states, &["A", "B", "C"]).unwrap(),
            "{}, {}, {}: broadcasts are p-distinguishable",
            d.a,
            d.b,
            d.c
        );
    }
    Ok(format!("{} diamonds with R ≠ ⟨0⟩", with_bottom.len()))
}

fn no_cloning() -> Check {
    let f = gf(2);
    let blank = Vector::from_ints(&f, &[1, 0]).unwrap();
    let eq = [[1, 0], [0, 1], [1, 1]].map(|e| Vector::from_ints(&f, &e).unwrap());
    match clone_feasibility(&eq, &blank).map_err(|e| e.to_string())? {
        CloneVerdict::Infeasible(w) => ensure!(w.recheck(&eq).unwrap(), "witness fails recheck"),
        CloneVerdict::Feasible { .. } => return Err("{|0⟩,|1⟩,|0⟩+|1⟩} reported clonable".into()),
    }
    let mut counted = 0;
    for q in [2, 3] {
        let f = gf(q);
        let blank = Vector::unit(&f, 2, 0);
        let all = nonzero_vectors(&f, 2);
        for x in &all {
            for y in all.iter().filter(|y| !x.is_parallel(y)) {
                let v = clone_feasibility(&[x.clone(), y.clone()], &blank).map_err(|e| e.to_string())?;
                ensure!(v.is_feasible(), "GF({q}) pair {x}, {y} infeasible");
            }
        }
        let mut rays: Vec<Vector> = all.iter().map(|v| v.normalized()).collect();
        rays.sort_by(|a, b| a.entries().cmp(b.entries()));
        rays.dedup();
        for x in &rays {
            for y in &rays {
                for z in &rays {
                    let triple = [x.clone(), y.clone(), z.clone()];
                    let rank = Matrix::from_vectors(&f, 2, &triple).unwrap().rank();
                    let distinct = x != y && y != z && x != z;
                    let expect_infeasible = rank < 3 && distinct;
                    let v = clone_feasibility(&triple, &blank).map_err(|e| e.to_string())?;
                    ensure!(v.is_feasible() != expect_infeasible, "GF({q}) triple {x}, {y}, {z}");
                    counted += 1;
                }
            }
        }
    }
    Ok(format!("{counted} state triples classified"))
}

fn random_subspace(rng: &mut ChaCha8Rng, f: &FieldSpec, n: usize) -> Subspace {
    let k = rng.gen_range(0..=n);
    let vs: Vec<Vector> = (0..k)
        .map(|_| Vector::from_ints(f, &(0..n).map(|_| rng.gen_range(0..f.order())).collect::<Vec<_>>()).unwrap())
        .collect();
    Subspace::span(f, n, &vs).unwrap()
}

/// Basis vectors of `x` extending a basis of `base ⊆ x`.
fn extend(base: &Subspace, x: &Subspace) -> Vec<Vector> {
    let mut current = base.clone();
    let mut out = Vec::new();
    for v in x.basis_vectors() {
        if !current.contains(&v).unwrap() {
            current = current
                .join(&Subspace::span(x.field(), x.ambient(), std::slice::from_ref(&v)).unwrap())
                .unwrap();
            out.push(v);
        }
    }
    out
}

fn lattice_laws_hold(a: &Subspace, b: &Subspace, c: &Subspace) -> std::result::Result<(), String> {
    let ab = a.join(b).unwrap();
    let a_meet_b = a.meet(b).unwrap();
    ensure!(
        ab.dim() + a_meet_b.dim() == a.dim() + b.dim(),
        "dimension formula fails on {a}, {b}"
    );
    ensure!(a.annihilator().annihilator() == *a, "ann∘ann ≠ id on {a}");
    ensure!(
        ab.annihilator() == a.annihilator().meet(&b.annihilator()).unwrap(),
        "De Morgan (join) fails on {a}, {b}"
    );
    ensure!(
        a_meet_b.annihilator() == a.annihilator().join(&b.annihilator()).unwrap(),
        "De Morgan (meet) fails on {a}, {b}"
    );
    if c.includes(a).unwrap() {
        let lhs = a.join(&b.meet(c).unwrap()).unwrap();
        let rhs = ab.meet(c).unwrap();
        ensure!(lhs == rhs, "modular law fails on {a}, {b}, {c}");
    }
    if let Some((_, _)) = mqt_core::subspace::is_diamond(a, b, c).unwrap() {
        ensure!(
            a.dim() == b.dim() && b.dim() == c.dim(),
            "diamond {a}, {b}, {c} has unequal dimensions"
        );
    }
    Ok(())
}

fn lattice_laws(seed: u64) -> Check {
    let mut exhaustive = 0u64;
    for q in [2, 3] {
        let f = gf(q);
        for n in 1..=3 {
            let subs = all_subspaces(&f, n);
            for a in &subs {
                for b in &subs {
                    for c in &subs {
                        lattice_laws_hold(a, b, c)?;
                        exhaustive += 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diamonds = 0;
    for i in 0..1000 {
        let f = gf([2, 3][i % 2]);
        let a = random_subspace(&mut rng, &f, 4);
        let (b, c) = match i % 4 {
            // a third subspace built as {r} ∪ {a_k + λ b_k} over a complementary
            // pair, which is a diamond whenever the pieces line up
            0 | 1 => {
                let b = random_subspace(&mut rng, &f, 4);
                let bottom = a.meet(&b).unwrap();
                let a_ext = extend(&bottom, &a);
                let b_ext = extend(&bottom, &b);
                let mut gens = bottom.basis_vectors();
                for (x, y) in a_ext.iter().zip(&b_ext) {
                    gens.push(x.add(&y.scale(f.from_int(rng.gen_range(1..f.order())))).unwrap());
                }
                let c = Subspace::span(&f, 4, &gens).unwrap();
                (b, c)
            }
            // c ⊇ a so the modular law is exercised
            2 => {
                let b = random_subspace(&mut rng, &f, 4);
                let c = a.join(&random_subspace(&mut rng, &f, 4)).unwrap();
                (b, c)
            }
            _ => (random_subspace(&mut rng, &f, 4), random_subspace(&mut rng, &f, 4)),
        };
        lattice_laws_hold(&a, &b, &c)?;
        if mqt_core::subspace::is_diamond(&a, &b, &c).unwrap().is_some() {
            diamonds += 1;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive triples, 1000 random ambient-4 cases (seed {seed}, {diamonds} diamonds)"
    ))
}

fn mixture_law(seed: u64) -> Check {
    let f = gf(2);
    let subs2 = all_subspaces(&f, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let rows: Vec<Vec<u64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(0..2)).collect()).collect();
        let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
        let channel = LinearChannel::new(Matrix::from_ints(&f, 2, &refs).unwrap());
        for a in &subs2 {
            for b in &subs2 {
                let lhs = channel.apply(&a.join(b).unwrap()).unwrap();
                let rhs = channel.apply(a).unwrap().join(&channel.apply(b).unwrap()).unwrap();
                ensure!(lhs == rhs, "channel {:?} breaks the law on {a}, {b}", channel.map());
            }
        }
    }
    let subs4 = all_subspaces(&f, 4);
    for a in &subs4 {
        for b in &subs4 {
            for keep in [0, 1] {
                let lhs = reduce(&a.join(b).unwrap(), &square(2), keep).unwrap();
                let rhs = reduce(a, &square(2), keep)
                    .unwrap()
                    .join(&reduce(b, &square(2), keep).unwrap())
                    .unwrap();
                ensure!(lhs == rhs, "reduction breaks the law on {a}, {b}");
            }
        }
    }
    Ok(format!(
        "500 random maps (seed {seed}) and reduction on {} pairs",
        subs4.len() * subs4.len()
    ))
}

fn census() -> Check {
    for (q, n, k, expected) in [(2u64, 2usize, 1usize, 3u128), (2, 4, 2, 35), (3, 2, 1, 4)] {
        let f = gf(q);
        let counted = enumerate_subspaces(&f, n, Some(k), Budget::DEFAULT)
            .map_err(|e| e.to_string())?
            .len() as u128;
        let formula = gaussian_binomial(n as u32, k as u32, q);
        ensure!(
            counted == expected && formula == expected,
            "({n},{k})_{q}: counted {counted}, formula {formula}"
        );
    }
    Ok("(2,1)_2 = 3, (4,2)_2 = 35, (2,1)_3 = 4".into())
}

fn main() -> ExitCode {
    let seed = std::env::var("MQT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_601);
    let criteria: Vec<Criterion> = vec![
        (
            "distributivity failure",
            Duration::from_secs(1),
            Box::new(distributivity),
        ),
        ("Bell reduction", Duration::from_secs(1), Box::new(bell_reduction)),
        (
            "universal pairwise broadcasting",
            Duration::from_secs(10),
            Box::new(pairwise),
        ),
        (
            "no-broadcasting for null-bottom diamonds",
            Duration::from_secs(300),
            Box::new(no_broadcasting),
        ),
        (
            "overlap broadcasting when R ≠ ⟨0⟩",
            Duration::from_secs(30),
            Box::new(overlap),
        ),
        ("no-cloning", Duration::from_secs(10), Box::new(no_cloning)),
        (
            "lattice laws",
            Duration::from_secs(60),
            Box::new(move || lattice_laws(seed)),
        ),
        (
            "mixture law",
            Duration::from_secs(30),
            Box::new(move || mixture_law(seed)),
        ),
        ("subspace census", Duration::from_secs(10), Box::new(census)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {}: {status} {name} [{:.3}s / {}s] {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
