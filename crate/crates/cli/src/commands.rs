use std::fs;

use anyhow::{Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mqt_core::broadcast::{certify_overlap_broadcast, CloneWitness};
use mqt_core::json::{CertificateJson, DiamondJson, MatrixJson, SubspaceJson};
use mqt_core::subspace::Distributivity;
use mqt_core::{
    clone_feasibility, distributivity_counterexample, enumerate_subspaces, gaussian_binomial, pairwise_broadcast,
    reduce as reduce_subspace, slice_diamond, verify_no_broadcast, BroadcastCertificate, CloneVerdict, DiamondTriple,
    FactorShape, FieldSpec, LinearChannel, Matrix, Subspace, Vector, Verdict,
};

use crate::input::{load_subspace, parse_shape, parse_subspace, parse_vector, parse_vectors, UsageError};
use crate::{Format, RunConfig, EXIT_FALSIFIED, EXIT_OK};

fn sub_json(s: &Subspace) -> Value {
    serde_json::to_value(SubspaceJson::encode(s)).expect("serializable")
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write_out(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {path}")),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit(cfg: &RunConfig, text: String, doc: Value) -> Result<()> {
    match cfg.format {
        Format::Text => write_out(cfg, &text),
        Format::Json => write_out(cfg, &to_pretty(&doc)),
    }
}

fn with_dim(s: &Subspace) -> String {
    format!("{s} (dim {})", s.dim())
}

pub fn demo_distributivity(cfg: &RunConfig) -> Result<u8> {
    let n = cfg.ambient_or(2);
    if n < 2 {
        return Err(UsageError(format!("demo-distributivity needs --ambient ≥ 2, got {n}")).into());
    }
    let Distributivity { a, b, c, left, right } = distributivity_counterexample(&cfg.field, n)?;
    let name = |s: &Subspace| {
        if s == &c {
            format!("C (dim {})", s.dim())
        } else if s.is_full() {
            format!("V (dim {})", s.dim())
        } else {
            with_dim(s)
        }
    };
    let holds = left == right;
    let mut text = format!("field GF({}), V = GF({})^{n}\n", cfg.field, cfg.field);
    text += &format!("A = {a}\nB = {b}\nC = {c}\n");
    text += &format!("A∧B = {}\n", with_dim(&a.meet(&b)?));
    text += &format!("C∨A = {}\nC∨B = {}\n", with_dim(&c.join(&a)?), with_dim(&c.join(&b)?));
    text += &format!(
        "C∨(A∧B) = {}; (C∨A)∧(C∨B) = {}; distributivity {}\n",
        name(&left),
        name(&right),
        if holds { "holds" } else { "FAILS" }
    );
    let doc = json!({
        "field": cfg.field.to_string(),
        "ambient": n,
        "a": sub_json(&a),
        "b": sub_json(&b),
        "c": sub_json(&c),
        "c_join_a_meet_b": sub_json(&left),
        "c_join_a_meet_c_join_b": sub_json(&right),
        "distributive": holds,
    });
    emit(cfg, text, doc)?;
    Ok(EXIT_OK)
}

#[derive(Args, Debug)]
pub struct FindDiamondsArgs {
    /// Only consider members of this dimension
    #[arg(long)]
    pub dim: Option<usize>,
    /// Only report diamonds whose common meet is ⟨0⟩
    #[arg(long)]
    pub null_bottom: bool,
}

pub fn find_diamonds(cfg: &RunConfig, args: &FindDiamondsArgs) -> Result<u8> {
    let n = cfg.ambient_or(2);
    let found = mqt_core::find_diamonds(&cfg.field, n, args.dim, args.null_bottom, cfg.budget)?;
    let mut by_bottom = std::collections::BTreeMap::<usize, usize>::new();
    let mut text = String::new();
    for (i, d) in found.iter().enumerate() {
        *by_bottom.entry(d.bottom.dim()).or_default() += 1;
        text += &format!(
            "#{} A = {}, B = {}, C = {}; S = {}; R = {}\n",
            i + 1,
            d.a,
            d.b,
            d.c,
            with_dim(&d.top),
            with_dim(&d.bottom)
        );
    }
    let counts: Vec<String> = by_bottom.iter().map(|(k, v)| format!("dim R = {k}: {v}")).collect();
    text += &format!(
        "{} diamond triples in GF({})^{n}{}",
        found.len(),
        cfg.field,
        if counts.is_empty() {
            String::new()
        } else {
            format!(" ({})", counts.join(", "))
        }
    );
    text.push('\n');
    let doc = json!({
        "field": cfg.field.to_string(),
        "ambient": n,
        "dim": args.dim,
        "null_bottom_only": args.null_bottom,
        "count": found.len(),
        "by_bottom_dim": by_bottom.iter().map(|(k, v)| json!({"bottom_dim": k, "count": v})).collect::<Vec<_>>(),
        "diamonds": found.iter().map(DiamondJson::encode).collect::<Vec<_>>(),
    });
    emit(cfg, text, doc)?;
    Ok(EXIT_OK)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Member A (compact syntax such as `1,0` or `@file.json`)
    #[arg(long, requires_all = ["b", "c"])]
    pub a: Option<String>,
    #[arg(long, requires_all = ["a", "c"])]
    pub b: Option<String>,
    #[arg(long, requires_all = ["a", "b"])]
    pub c: Option<String>,
    /// Pick the N-th (1-based) diamond as listed by find-diamonds (with
    /// --null-bottom, unless --slice is given)
    #[arg(long, conflicts_with_all = ["a", "all"])]
    pub index: Option<usize>,
    /// Member dimension used with --index and --all
    #[arg(long)]
    pub dim: Option<usize>,
    /// Replace a diamond with nonzero meet by its null-bottom slice
    #[arg(long)]
    pub slice: bool,
    /// Verify every null-bottom diamond of the ambient space
    #[arg(long, conflicts_with = "a")]
    pub all: bool,
}

fn select_diamond(cfg: &RunConfig, args: &VerifyArgs) -> Result<DiamondTriple> {
    let d = if let (Some(a), Some(b), Some(c)) = (&args.a, &args.b, &args.c) {
        let a = parse_subspace(&cfg.field, a, cfg.ambient)?;
        let b = parse_subspace(&cfg.field, b, Some(a.ambient()))?;
        let c = parse_subspace(&cfg.field, c, Some(a.ambient()))?;
        DiamondTriple::new(a, b, c).map_err(|e| UsageError(e.to_string()))?
    } else if let Some(i) = args.index {
        let n = cfg.ambient_or(2);
        let all = mqt_core::find_diamonds(&cfg.field, n, args.dim, !args.slice, cfg.budget)?;
        if i == 0 || i > all.len() {
            return Err(UsageError(format!("--index {i} out of range: {} diamonds", all.len())).into());
        }
        all[i - 1].clone()
    } else {
        let Distributivity { a, b, c, .. } =
            distributivity_counterexample(&cfg.field, cfg.ambient_or(2)).map_err(|e| UsageError(e.to_string()))?;
        DiamondTriple::new(a, b, c)?
    };
    if d.bottom.is_null() {
        return Ok(d);
    }
    if args.slice {
        return Ok(slice_diamond(&d)?);
    }
    Err(UsageError(format!(
        "diamond bottom R = {} is not ⟨0⟩; such states can be broadcast. Pass --slice to verify its null-bottom slice",
        d.bottom
    ))
    .into())
}

fn in_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(f))
}

fn certificate_text(cert: &BroadcastCertificate) -> String {
    let d = &cert.diamond;
    let mut t = format!(
        "diamond over GF({})^{}: A = {}, B = {}, C = {}\n",
        d.field(),
        d.ambient(),
        d.a,
        d.b,
        d.c
    );
    t += &format!("S = A∨B = {}; R = A∧B = {}\n", with_dim(&d.top), d.bottom);
    let [na, nb, nc] = cert.candidate_counts;
    t += &format!(
        "candidates: M_A {na}, M_B {nb}, M_C {nc}; triples checked: {}\n",
        cert.candidates_checked
    );
    t += &format!("E_C = ann((A⊗A)∨(B⊗B)) = {}\n", with_dim(&cert.discriminator));
    match cert.verdict {
        Verdict::Impossible => {
            t += &format!(
                "E_C detects every M_C ({} witnesses); cross-term vectors checked: {}\n",
                cert.witnesses.len(),
                cert.cross_term_vectors_checked
            );
            t += "verdict: impossible\n";
        }
        Verdict::Possible => {
            for (name, m) in ["M_A", "M_B", "M_C"].iter().zip(&cert.broadcast_states) {
                t += &format!("{name} = {}\n", m.state);
            }
            t += "verdict: possible\n";
        }
    }
    t
}

pub fn no_broadcast_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<u8> {
    if args.all {
        return verify_all(cfg, args);
    }
    let d = select_diamond(cfg, args)?;
    let cert = in_pool(cfg, || verify_no_broadcast(&d, cfg.budget))??;
    if !cert.recheck()? {
        anyhow::bail!(mqt_core::Error::Invariant("certificate failed its own recheck".into()));
    }
    let doc = serde_json::to_value(CertificateJson::encode(&cert))?;
    match (&cfg.out, cfg.format) {
        (Some(path), Format::Text) => {
            fs::write(path, to_pretty(&doc)).with_context(|| format!("writing {path}"))?;
            println!("{}certificate written to {path}", certificate_text(&cert));
        }
        _ => emit(cfg, certificate_text(&cert), doc)?,
    }
    Ok(match cert.verdict {
        Verdict::Impossible => EXIT_OK,
        Verdict::Possible => EXIT_FALSIFIED,
    })
}

fn verify_all(cfg: &RunConfig, args: &VerifyArgs) -> Result<u8> {
    let n = cfg.ambient_or(2);
    let diamonds = mqt_core::find_diamonds(&cfg.field, n, args.dim, true, cfg.budget)?;
    let certs = in_pool(cfg, || {
        diamonds
            .iter()
            .map(|d| verify_no_broadcast(d, cfg.budget))
            .collect::<mqt_core::Result<Vec<_>>>()
    })??;
    let mut text = String::new();
    let mut possible = 0;
    let mut triples = 0;
    for (i, c) in certs.iter().enumerate() {
        if !c.recheck()? {
            anyhow::bail!(mqt_core::Error::Invariant(format!(
                "certificate #{} failed its recheck",
                i + 1
            )));
        }
        if c.verdict == Verdict::Possible {
            possible += 1;
        }
        triples += c.candidates_checked;
        text += &format!(
            "#{} A = {}, B = {}, C = {}: {} ({} triples)\n",
            i + 1,
            c.diamond.a,
            c.diamond.b,
            c.diamond.c,
            c.verdict.as_str(),
            c.candidates_checked
        );
    }
    text += &format!(
        "{} null-bottom diamonds in GF({})^{n}: {} impossible, {possible} possible; {triples} candidate triples\n",
        certs.len(),
        cfg.field,
        certs.len() - possible
    );
    let doc = json!({
        "field": cfg.field.to_string(),
        "ambient": n,
        "dim": args.dim,
        "count": certs.len(),
        "candidates_checked": triples,
        "certificates": certs.iter().map(CertificateJson::encode).collect::<Vec<_>>(),
    });
    emit(cfg, text, doc)?;
    Ok(if possible == 0 { EXIT_OK } else { EXIT_FALSIFIED })
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

pub fn broadcast_pair(cfg: &RunConfig, args: &PairArgs) -> Result<u8> {
    let a = parse_subspace(&cfg.field, &args.a, cfg.ambient)?;
    let b = parse_subspace(&cfg.field, &args.b, Some(a.ambient()))?;
    if a.is_null() || b.is_null() {
        return Err(UsageError("states must be nonzero subspaces".into()).into());
    }
    let (ma, mb) = pairwise_broadcast(&a, &b)?;
    let ok_a = ma.is_valid()?;
    let ok_b = mb.is_valid()?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut text = format!("A = {a}, B = {b}, R = A∧B = {}\n", a.meet(&b)?);
    text += &format!("M_A = {}\nM_B = {}\n", with_dim(&ma.state), with_dim(&mb.state));
    text += &format!(
        "reduction check: M_A → A on both factors {}; M_B → B on both factors {}\n",
        verdict(ok_a),
        verdict(ok_b)
    );
    let doc = json!({
        "field": cfg.field.to_string(),
        "a": sub_json(&a),
        "b": sub_json(&b),
        "meet": sub_json(&a.meet(&b)?),
        "m_a": sub_json(&ma.state),
        "m_b": sub_json(&mb.state),
        "reductions_ok": ok_a && ok_b,
    });
    emit(cfg, text, doc)?;
    Ok(if ok_a && ok_b { EXIT_OK } else { EXIT_FALSIFIED })
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Composite subspace JSON file (`-` for stdin)
    #[arg(required_unless_present = "state", conflicts_with = "state")]
    pub input: Option<String>,
    /// Composite subspace in compact syntax instead of a file
    #[arg(long)]
    pub state: Option<String>,
    /// Factor dimensions, e.g. 2x2
    #[arg(long)]
    pub shape: String,
    /// Factor to keep, 1-based
    #[arg(long)]
    pub keep: usize,
}

pub fn reduce(cfg: &RunConfig, args: &ReduceArgs) -> Result<u8> {
    let dims = parse_shape(&args.shape)?;
    if args.keep == 0 || args.keep > dims.len() {
        return Err(UsageError(format!("--keep must be between 1 and {}", dims.len())).into());
    }
    let m = match (&args.input, &args.state) {
        (Some(path), _) => load_subspace(&cfg.field, path)?,
        (None, Some(s)) => parse_subspace(&cfg.field, s, None)?,
        (None, None) => return Err(UsageError("no composite state given".into()).into()),
    };
    let shape = FactorShape::new(dims).map_err(|e| UsageError(e.to_string()))?;
    if shape.total() != m.ambient() {
        return Err(UsageError(format!(
            "shape {} has total dimension {}, but the state lives in dimension {}",
            args.shape,
            shape.total(),
            m.ambient()
        ))
        .into());
    }
    let r = reduce_subspace(&m, &shape, args.keep - 1)?;
    let text = format!("reduction of {m} to factor {}: {}\n", args.keep, with_dim(&r));
    emit(cfg, text, sub_json(&r))?;
    Ok(EXIT_OK)
}

#[derive(Args, Debug)]
pub struct CloneArgs {
    /// States to clone, e.g. `1,0;0,1;1,1`
    #[arg(long)]
    pub states: String,
    /// Initial state of the target system; defaults to the first unit vector
    #[arg(long)]
    pub blank: Option<String>,
}

fn witness_text(f: &FieldSpec, states: &[Vector], w: &CloneWitness) -> String {
    let terms: Vec<String> = w
        .combination
        .iter()
        .map(|&(i, c)| format!("{}·#{}", f.format(c), i + 1))
        .collect();
    format!(
        "state #{} {} = {}; linearity forces {} but the clone is {}",
        w.index + 1,
        states[w.index],
        terms.join(" + "),
        w.forced,
        w.desired
    )
}

pub fn clone_check(cfg: &RunConfig, args: &CloneArgs) -> Result<u8> {
    let f = &cfg.field;
    let states = parse_vectors(f, &args.states)?;
    let d = states[0].dim();
    if let Some(n) = cfg.ambient {
        if n != d {
            return Err(UsageError(format!("states live in dimension {d}, but --ambient is {n}")).into());
        }
    }
    let blank = match &args.blank {
        Some(b) => parse_vector(f, b)?,
        None => Vector::unit(f, d, 0),
    };
    let verdict = clone_feasibility(&states, &blank).map_err(|e| match e {
        mqt_core::Error::Domain(m) => anyhow::Error::new(UsageError(m)),
        other => other.into(),
    })?;
    let listing: Vec<String> = states
        .iter()
        .enumerate()
        .map(|(i, s)| format!("#{} {s}", i + 1))
        .collect();
    let mut text = format!("states: {}; blank {blank}\n", listing.join(", "));
    let doc = match &verdict {
        CloneVerdict::Feasible { map } => {
            text += "feasible: T(ψ⊗blank) = ψ⊗ψ for every listed state\nT =\n";
            for r in 0..map.rows() {
                text += &format!("  {}\n", map.row_vector(r));
            }
            json!({"field": f.to_string(), "verdict": "feasible", "map": MatrixJson::encode(map)})
        }
        CloneVerdict::Infeasible(w) => {
            if !w.recheck(&states)? {
                anyhow::bail!(mqt_core::Error::Invariant("clone witness failed its recheck".into()));
            }
            text += &format!("infeasible: {}\n", witness_text(f, &states, w));
            json!({
                "field": f.to_string(),
                "verdict": "infeasible",
                "witness": {
                    "state": w.index + 1,
                    "combination": w.combination.iter().map(|&(i, c)| json!({
                        "state": i + 1,
                        "coefficient": mqt_core::json::encode_entry(f, c),
                    })).collect::<Vec<_>>(),
                    "forced": w.forced.entries().iter().map(|&e| mqt_core::json::encode_entry(f, e)).collect::<Vec<_>>(),
                    "desired": w.desired.entries().iter().map(|&e| mqt_core::json::encode_entry(f, e)).collect::<Vec<_>>(),
                },
            })
        }
    };
    emit(cfg, text, doc)?;
    Ok(EXIT_OK)
}

struct Battery {
    lines: Vec<String>,
    results: Vec<Value>,
    failed: usize,
}

impl Battery {
    fn record(&mut self, name: &str, outcome: Result<String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(e) => (false, format!("{e:#}")),
        };
        if !ok {
            self.failed += 1;
        }
        self.lines
            .push(format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }));
        self.results.push(json!({"check": name, "pass": ok, "detail": detail}));
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        anyhow::bail!(msg())
    }
}

pub fn selftest(cfg: &RunConfig) -> Result<u8> {
    let mut b = Battery {
        lines: Vec::new(),
        results: Vec::new(),
        failed: 0,
    };
    let fields: Vec<FieldSpec> = [2u64, 3]
        .iter()
        .map(|&q| FieldSpec::builtin(q).expect("built-in"))
        .collect();

    b.record(
        "distributivity",
        (|| {
            for f in &fields {
                let r = distributivity_counterexample(f, 2)?;
                check(r.left == r.c && r.right.is_full(), || format!("GF({f}): law holds"))?;
            }
            Ok("C∨(A∧B) = C ≠ V = (C∨A)∧(C∨B) over GF(2), GF(3)".into())
        })(),
    );

    b.record(
        "bell reduction",
        (|| {
            for f in &fields {
                let bell = Subspace::from_ints(f, 4, &[&[1, 0, 0, 1]])?;
                let shape = FactorShape::bipartite(2, 2)?;
                for keep in 0..2 {
                    check(reduce_subspace(&bell, &shape, keep)?.is_full(), || {
                        format!("GF({f}) factor {}", keep + 1)
                    })?;
                }
            }
            Ok("⟨(1,0,0,1)⟩ reduces to V on both factors".into())
        })(),
    );

    b.record(
        "pairwise broadcasting",
        (|| {
            let mut pairs = 0;
            for f in &fields {
                let subs: Vec<Subspace> = enumerate_subspaces(f, 2, None, cfg.budget)?
                    .into_iter()
                    .filter(|s| !s.is_null())
                    .collect();
                for x in &subs {
                    for y in &subs {
                        let (mx, my) = pairwise_broadcast(x, y)?;
                        check(mx.is_valid()? && my.is_valid()?, || format!("{x}, {y}"))?;
                        pairs += 1;
                    }
                }
            }
            Ok(format!("{pairs} ordered pairs"))
        })(),
    );

    b.record(
        "no-broadcasting",
        (|| {
            let mut n = 0;
            for f in &fields {
                for d in mqt_core::find_diamonds(f, 2, None, true, cfg.budget)? {
                    let cert = verify_no_broadcast(&d, cfg.budget)?;
                    check(cert.verdict == Verdict::Impossible && cert.recheck()?, || {
                        format!("{}, {}, {}", d.a, d.b, d.c)
                    })?;
                    n += 1;
                }
            }
            Ok(format!("{n} null-bottom diamonds refuted"))
        })(),
    );

    b.record(
        "overlap broadcasting",
        (|| {
            let f = &fields[0];
            let mut n = 0;
            for d in mqt_core::find_diamonds(f, 3, None, false, cfg.budget)? {
                if d.bottom.is_null() {
                    continue;
                }
                check(certify_overlap_broadcast(&d)?.recheck()?, || {
                    format!("{}, {}, {}", d.a, d.b, d.c)
                })?;
                n += 1;
            }
            Ok(format!("{n} diamonds with R ≠ ⟨0⟩ broadcast"))
        })(),
    );

    b.record(
        "no-cloning",
        (|| {
            let f = &fields[0];
            let states = parse_vectors(f, "1,0;0,1;1,1")?;
            let blank = Vector::unit(f, 2, 0);
            check(!clone_feasibility(&states, &blank)?.is_feasible(), || {
                "{|0⟩,|1⟩,|0⟩+|1⟩} clonable".into()
            })?;
            check(clone_feasibility(&states[..2], &blank)?.is_feasible(), || {
                "{|0⟩,|1⟩} not clonable".into()
            })?;
            Ok("{|0⟩,|1⟩} clonable, {|0⟩,|1⟩,|0⟩+|1⟩} not".into())
        })(),
    );

    b.record(
        "census",
        (|| {
            for (q, n, k) in [(2u64, 2usize, 1usize), (2, 4, 2), (3, 2, 1)] {
                let f = FieldSpec::builtin(q)?;
                let count = enumerate_subspaces(&f, n, Some(k), cfg.budget)?.len() as u128;
                check(count == gaussian_binomial(n as u32, k as u32, q), || {
                    format!("({n},{k})_{q}")
                })?;
            }
            Ok("(2,1)_2 = 3, (4,2)_2 = 35, (2,1)_3 = 4".into())
        })(),
    );

    b.record(
        "mixture law",
        (|| {
            let f = &fields[0];
            let subs = enumerate_subspaces(f, 2, None, cfg.budget)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..100 {
                let rows: Vec<Vec<u64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(0..2)).collect()).collect();
                let refs: Vec<&[u64]> = rows.iter().map(Vec::as_slice).collect();
                let ch = LinearChannel::new(Matrix::from_ints(f, 2, &refs)?);
                for x in &subs {
                    for y in &subs {
                        let lhs = ch.apply(&x.join(y)?)?;
                        let rhs = ch.apply(x)?.join(&ch.apply(y)?)?;
                        check(lhs == rhs, || format!("{:?} on {x}, {y}", ch.map()))?;
                    }
                }
            }
            Ok(format!("100 random maps (seed {})", cfg.seed))
        })(),
    );

    let total = b.lines.len();
    let summary = format!("selftest: {} of {total} checks passed", total - b.failed);
    let mut text = b.lines.join("\n");
    text += &format!("\n{summary}\n");
    let doc = json!({"seed": cfg.seed, "passed": total - b.failed, "total": total, "checks": b.results});
    emit(cfg, text, doc)?;
    Ok(if b.failed == 0 { EXIT_OK } else { EXIT_FALSIFIED })
}
