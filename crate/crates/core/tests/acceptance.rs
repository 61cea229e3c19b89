//! The acceptance battery. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.
//!
//! Where a value can be computed without the span engine (matrix products,
//! closed forms, characters), it is, and the engine is compared against it.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gpdact::catalog;
use gpdact::format::parse_groupoid;
use gpdact::quantize::sigma_pi::{s3_fixture, sigma_pi_check};
use gpdact::quantize::{
    character_table, check_q_naturality, dense_coding_simulation, q_span, random_natural_span, random_state,
    teleport, Qudit,
};
use gpdact::structures::cells::corrupt;
use gpdact::structures::{
    build_delta, build_lambda, check_dense_coding, check_topological_axioms, topological_axioms, CanonicalCells,
    ControlledSetting, EnumerationMode, Side, DEFAULT_CAP,
};
use gpdact::thermal::{Cipher, Decoherence};
use gpdact::{compose_profunctors, Groupoid, Profunctor, Span2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;
const TOL: f64 = 1e-12;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog() -> Vec<(&'static str, Groupoid)> {
    catalog::NAMES.iter().map(|&n| (n, catalog::group(n).unwrap())).collect()
}

const TWO_BITS: &str = include_str!("../../../fixtures/two_bits.json");

fn two_bits() -> Groupoid {
    parse_groupoid(TWO_BITS).unwrap()
}

/// Dense 0/1/… matrix of a span, rows by source element.
fn dense(s: &Span2) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0; s.tgt().len()]; s.src().len()];
    for (&(a, b), &v) in s.entries() {
        m[a][b] = v;
    }
    m
}

/// `M·Mᵀ = I` and `Mᵀ·M = I`, by plain loops.
fn oracle_unitary(s: &Span2) -> Result<(), String> {
    let m = dense(s);
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    ensure(r == c, || format!("{r}x{c} is not square"))?;
    for i in 0..r {
        for j in 0..r {
            let row: u64 = (0..c).map(|k| m[i][k] * m[j][k]).sum();
            let col: u64 = (0..r).map(|k| m[k][i] * m[k][j]).sum();
            let want = (i == j) as u64;
            ensure(row == want && col == want, || format!("entry ({i}, {j}): {row}, {col}"))?;
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut groupoids: Vec<(String, Groupoid)> = catalog().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    let singles = groupoids.clone();
    for (i, (a, ga)) in singles.iter().enumerate() {
        for (b, gb) in &singles[i..] {
            groupoids.push((format!("{a} ⊔ {b}"), Groupoid::disjoint_union(ga, gb)));
        }
    }
    groupoids.push(("two bits".into(), two_bits()));
    let mut equalities = 0;
    for (name, g) in &groupoids {
        let checks = topological_axioms(g).map_err(|e| format!("{name}: {e}"))?;
        ensure(checks.len() == 6, || format!("{name}: {} equalities", checks.len()))?;
        for c in &checks {
            ensure(c.pass, || format!("{name}: {} fails at {:?}", c.name, c.witness))?;
        }
        equalities += checks.len();
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{equalities} equalities over {} groupoids in {:.2?}", groupoids.len(), elapsed))
}

fn criterion_2() -> Outcome {
    let mut list: Vec<(String, Groupoid, usize)> = Vec::new();
    for (n, g) in catalog() {
        // |Mor| from the group order, not from the library
        let order = match n {
            "Z/2×Z/2" => 4,
            "S3" => 6,
            "D4" | "Q8" => 8,
            z => z[2..].parse().unwrap(),
        };
        list.push((n.into(), g, order));
    }
    // four microstates overall, read off the fixture file itself
    let raw: serde_json::Value = serde_json::from_str(TWO_BITS).unwrap();
    let mentioned = raw["morphisms"].as_array().map_or(0, Vec::len);
    list.push(("two bits".into(), two_bits(), mentioned));
    for (name, g, expect) in &list {
        let s = Arc::new(g.skeletalize().0);
        let l = Arc::new(Profunctor::boundary_left(&s).unwrap());
        let r = Arc::new(Profunctor::boundary_right(&s).unwrap());
        let got = compose_profunctors(&l, &r).map_err(|e| e.to_string())?.0.len();
        ensure(got == *expect, || format!("{name}: {got} classes, expected {expect}"))?;
    }
    ensure(mentioned == 4, || format!("fixture has {mentioned} morphisms"))?;
    Ok(format!("{} groupoids; two bits gives 4", list.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut round_trips = 0;
    for (name, g) in catalog() {
        let setting = ControlledSetting::new(&Arc::new(g.clone()), 2).map_err(|e| e.to_string())?;
        for i in 0..100 {
            let data = setting.random_data(&mut rng, 0.3);
            let sigma = setting.operation(&data).map_err(|e| e.to_string())?;
            let curried = setting.curry(&sigma).map_err(|e| e.to_string())?;
            let back = setting.uncurry(&curried).map_err(|e| e.to_string())?;
            ensure(back.equals(&sigma).unwrap(), || format!("{name}: round trip {i} differs"))?;
            let direct = setting.curried(&data).map_err(|e| e.to_string())?;
            ensure(curried.equals(&direct).unwrap(), || format!("{name}: curried form {i} differs"))?;
            let again = setting.curry(&back).map_err(|e| e.to_string())?;
            ensure(again.equals(&curried).unwrap(), || format!("{name}: curry round trip {i} differs"))?;
            round_trips += 1;
        }
    }
    // exhaustive enumeration, including groupoids with several logical states
    let mut small: Vec<(String, Groupoid)> =
        catalog().into_iter().filter(|(_, g)| g.n_morphisms() <= 6).map(|(n, g)| (n.into(), g)).collect();
    small.push(("two bits".into(), two_bits()));
    small.push(("Z/2 ⊔ Z/3".into(), Groupoid::disjoint_union(&catalog::cyclic(2), &catalog::cyclic(3))));
    let mut enumerated = 0u64;
    for (name, g) in &small {
        let g = Arc::new(g.clone());
        for s_size in 1..=2 {
            let setting = ControlledSetting::new(&g, s_size).map_err(|e| e.to_string())?;
            let mut modes = vec![EnumerationMode::Functions];
            if s_size == 1 {
                modes.push(EnumerationMode::Relations);
            }
            for mode in modes {
                for op in setting.classify(mode, DEFAULT_CAP).map_err(|e| e.to_string())? {
                    let op = op.map_err(|e| e.to_string())?;
                    let v = setting.logical_state_violation(&op.sigma);
                    ensure(v.is_none(), || format!("{name}: logical state changed at {v:?}"))?;
                    enumerated += 1;
                }
            }
        }
    }
    Ok(format!("{round_trips} round trips; {enumerated} enumerated operations, 0 violations"))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for (name, g) in catalog() {
        let cs = build_delta(&g).map_err(|e| e.to_string())?;
        for c in cs.check().map_err(|e| e.to_string())? {
            ensure(c.pass, || format!("{name}: {} at {:?}", c.name, c.witness))?;
        }
        let right = cs.delta_transpose(Side::Right).map_err(|e| e.to_string())?;
        let left = cs.delta_transpose(Side::Left).map_err(|e| e.to_string())?;
        for (what, s) in [("δ", &cs.delta), ("right bend", &right), ("left bend", &left)] {
            oracle_unitary(s).map_err(|e| format!("{name}: {what}: {e}"))?;
        }
        // element chase: (t, δ(g′)) ↦ (g′;t, δ(g′)) and back to (t, δ(g′))
        let cell = right.src().clone();
        let back = right.dagger();
        let n = g.n_morphisms();
        for t in 0..n {
            for gp in 0..n {
                let e = cell.canonical(&[t, gp]);
                let mid = cell.canonical(&[g.compose(gp, t).unwrap(), gp]);
                ensure(right.image(e) == vec![(mid, 1)], || format!("{name}: chase of ({t}, {gp})"))?;
                ensure(back.image(mid) == vec![(e, 1)], || format!("{name}: return of ({t}, {gp})"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("δ and both bends unitary; {pairs} element chases return"))
}

fn criterion_5() -> Outcome {
    let mut steps = 0;
    for (name, g) in catalog() {
        let c = build_lambda(&g).map_err(|e| e.to_string())?;
        for x in c.check() {
            ensure(x.pass, || format!("{name}: {} at {:?}", x.name, x.witness))?;
        }
        oracle_unitary(&c.lambda).map_err(|e| format!("{name}: λ: {e}"))?;
        oracle_unitary(&c.lambda_transpose).map_err(|e| format!("{name}: λ′: {e}"))?;
        let chain = c.unitarity_chain().map_err(|e| e.to_string())?;
        ensure(chain.len() == 4, || format!("{name}: chain has {} steps", chain.len()))?;
        for x in &chain {
            ensure(x.pass, || format!("{name}: {} at {:?}", x.name, x.witness))?;
            steps += 1;
        }
        let n = g.n_morphisms();
        for x in 0..n {
            for k in 0..n {
                let out: Vec<_> = c.lambda.image(c.input(x, k)).iter().map(|&(t, m)| (c.output_pair(t), m)).collect();
                ensure(out == vec![((g.compose(x, k).unwrap(), k), 1)], || format!("{name}: λ({x}, {k}) = {out:?}"))?;
            }
        }
    }
    Ok(format!("λ and λ′ unitary; {steps} chain steps hold"))
}

fn criterion_6() -> Outcome {
    let mut transcripts = 0;
    let mut heat_is_key = 0;
    for (name, g) in catalog() {
        let cipher = Cipher::new(&g).map_err(|e| e.to_string())?;
        let n = g.n_morphisms();
        let cyclic = name.starts_with("Z/") && !name.contains('×');
        for p in 0..n {
            for k in 0..n {
                let t = cipher.encrypt(p, k).map_err(|e| e.to_string())?;
                // for Z/n the product is addition of residues
                let expect = if cyclic { (p + k) % n } else { g.compose(p, k).unwrap() };
                ensure(t.ciphertext == expect, || format!("{name}: {}", t.describe()))?;
                ensure(cipher.decrypt(t.ciphertext, k).map_err(|e| e.to_string())? == p, || {
                    format!("{name}: decrypt of {}", t.describe())
                })?;
                heat_is_key += (t.heat == k) as usize;
                transcripts += 1;
            }
            let counts = cipher.ciphertext_distribution(p).map_err(|e| e.to_string())?;
            ensure(counts == vec![1; n], || format!("{name}: counts {counts:?} for plaintext {p}"))?;
        }
    }
    ensure(heat_is_key == transcripts, || format!("heat equals key in {heat_is_key} of {transcripts}"))?;
    Ok(format!("{transcripts} transcripts; heat equals key in 100%"))
}

fn criterion_7() -> Outcome {
    for (name, g) in catalog() {
        let r = check_dense_coding(&build_lambda(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(r.pass(), || format!("{name}: {:?}", r.equation.witness))?;
    }
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4] {
        let q = Qudit::new(&catalog::cyclic(n)).map_err(|e| e.to_string())?;
        let r = dense_coding_simulation(&q);
        ensure(r.pass && r.decoded_exactly == n * n, || format!("Z/{n}: {r:?}"))?;
        worst = worst.max(r.max_deviation);
    }
    ensure(worst <= TOL, || format!("deviation {worst:e}"))?;
    Ok(format!("span equation for every group; n² messages decode, deviation {worst:.1e}"))
}

/// `(σ;τ)(s, u) = Σ_t σ(s, t) τ(t, u)` by plain loops.
fn oracle_product(a: &Span2, b: &Span2) -> Vec<Vec<u64>> {
    let (ma, mb) = (dense(a), dense(b));
    let (r, k, c) = (ma.len(), mb.len(), mb.first().map_or(0, Vec::len));
    (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| ma[i][t] * mb[t][j]).sum()).collect()).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pairs = 0;
    let fixtures = [catalog::group("S3").unwrap(), catalog::cyclic(4), two_bits()];
    for g in &fixtures {
        let cells = CanonicalCells::new(&Arc::new(g.clone())).map_err(|e| e.to_string())?;
        for cell in [&cells.boundary.rl, &cells.boundary.lr] {
            for _ in 0..100 {
                let a = random_natural_span(cell, cell, &mut rng, 0.5, 3).map_err(|e| e.to_string())?;
                let b = random_natural_span(cell, cell, &mut rng, 0.5, 3).map_err(|e| e.to_string())?;
                let composite = q_span(&a.then(&b).map_err(|e| e.to_string())?);
                let product = q_span(&b).mul(&q_span(&a)).ok_or("dimensions")?;
                ensure(composite == product, || "Q(σ;τ) ≠ Q(τ)Q(σ)".into())?;
                // the matrix is indexed (target, source), the oracle (source, target)
                let oracle = oracle_product(&a, &b);
                for (s, row) in oracle.iter().enumerate() {
                    for (u, &v) in row.iter().enumerate() {
                        ensure(composite.entries[u][s] == v, || format!("entry ({s}, {u})"))?;
                    }
                }
                let nat = check_q_naturality(cell, cell, &q_span(&a));
                ensure(nat.pass, || format!("{:?}", nat.witness))?;
                pairs += 1;
            }
        }
    }
    let (s, t) = s3_fixture().map_err(|e| e.to_string())?;
    let r = sigma_pi_check(&s, &t).map_err(|e| e.to_string())?;
    ensure(r.pass(), || format!("σ/π: {:?}", r.checks.iter().find(|c| !c.pass)))?;
    for order in [2, 3] {
        ensure(r.stabilizer_orders.contains(&order), || format!("no stabilizer of order {order}"))?;
    }
    Ok(format!("{pairs} composable pairs exact; σ/π exact on {} orbit pairs", r.orbit_pairs))
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let table = character_table(&catalog::cyclic(n)).map_err(|e| e.to_string())?;
        for k in 0..n {
            for x in 0..n {
                let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * x) as f64 / n as f64);
                worst = worst.max((table.value(k, x) - want).norm());
            }
        }
        // |⟨b_x, c_k⟩|² with c_k = n^{-1/2} Σ χ_k(y)|y⟩
        for k in 0..n {
            for x in 0..n {
                let overlap = table.value(k, x) / (n as f64).sqrt();
                worst = worst.max((overlap.norm_sqr() - 1.0 / n as f64).abs());
            }
        }
    }
    ensure(worst <= TOL, || format!("MUB deviation {worst:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tele: f64 = 0.0;
    for n in [2, 3, 4] {
        let q = Qudit::new(&catalog::cyclic(n)).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let r = teleport(&q, &random_state(n, &mut rng)).map_err(|e| e.to_string())?;
            for b in &r.branches {
                tele = tele.max(1.0 - b.fidelity).max((b.probability - 1.0 / (n * n) as f64).abs());
            }
        }
    }
    ensure(tele <= TOL, || format!("teleportation deviation {tele:e}"))?;
    // textbook qubit Bell states, with Z^k then X^a correcting outcome (a, k)
    let q = Qudit::new(&catalog::cyclic(2)).map_err(|e| e.to_string())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bells = [((0, 0), [h, 0.0, 0.0, h]), ((1, 0), [0.0, h, h, 0.0]), ((0, 1), [h, 0.0, 0.0, -h]), ((1, 1), [0.0, -h, h, 0.0])];
    for ((a, k), v) in bells {
        let got = q.bell(a, k);
        let dev = got.iter().zip(v).map(|(x, y)| (x - Complex64::new(y, 0.0)).norm()).fold(0.0, f64::max);
        ensure(dev <= TOL, || format!("Bell state ({a}, {k}) deviates by {dev:e}"))?;
    }
    Ok(format!("MUB deviation {worst:.1e}; teleportation deviation {tele:.1e}"))
}

fn criterion_10() -> Outcome {
    for (name, g) in catalog() {
        let d = Decoherence::new(&g).map_err(|e| e.to_string())?;
        let n = g.n_morphisms() as u64;
        for info in 0..g.n_morphisms() {
            let dist = d.retrieve_distribution(info, &[]).map_err(|e| e.to_string())?;
            ensure(dist == BTreeMap::from([(info, 1)]), || format!("{name}: clean retrieval of {info}: {dist:?}"))?;
        }
        let env = d.environment().map_err(|e| e.to_string())?;
        ensure(env.len() as u64 == n, || format!("{name}: {} environment operations", env.len()))?;
        let (ok, total) = d.exact_success().map_err(|e| e.to_string())?;
        ensure(ok * n == total, || format!("{name}: {ok} of {total}"))?;
    }
    Ok("success 1 without environment, exactly 1/|G| with it".into())
}

fn criterion_11() -> Outcome {
    let g = Arc::new(catalog::group("S3").unwrap());
    // 1: one entry of μ
    let mut cells = CanonicalCells::new(&g).map_err(|e| e.to_string())?;
    cells.mu = corrupt(&cells.mu, 0, 0, 0);
    let checks = check_topological_axioms(&cells).map_err(|e| e.to_string())?;
    let caught = checks.iter().find(|c| !c.pass && c.witness.is_some()).ok_or("corrupted μ passed the axioms")?;
    let w1 = caught.witness.clone().unwrap();
    // 4: one entry of δ
    let cs = build_delta(&g).map_err(|e| e.to_string())?;
    let mut bad = cs.clone();
    bad.delta = corrupt(&cs.delta, cs.g_elem(1), cs.d_elem(2), 1);
    let w4 = bad.check().map_err(|e| e.to_string())?.into_iter().find(|c| !c.pass).and_then(|c| c.witness);
    let w4 = w4.ok_or("corrupted δ passed")?;
    // 5: one entry of λ
    let comm = build_lambda(&g).map_err(|e| e.to_string())?;
    let mut bad = comm.clone();
    let (s, t) = *comm.lambda.entries().keys().next().unwrap();
    bad.lambda = corrupt(&comm.lambda, s, t, 0);
    let w5 = bad.check().into_iter().find(|c| !c.pass).and_then(|c| c.witness).ok_or("corrupted λ passed")?;
    // 7: the same corruption through the dense coding equation
    let r = check_dense_coding(&bad).map_err(|e| e.to_string())?;
    ensure(!r.pass(), || "corrupted λ passed dense coding".into())?;
    let w7 = r.equation.witness.ok_or("dense coding failure without witness")?;
    Ok(format!(
        "witnesses at {}/{}, {}/{}, {}/{}, {}/{}",
        w1.s_label, w1.t_label, w4.s_label, w4.t_label, w5.s_label, w5.t_label, w7.s_label, w7.t_label
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("topological axioms", criterion_1),
        ("bubble count equals |Mor(G)|", criterion_2),
        ("controlled operations", criterion_3),
        ("complementary structure", criterion_4),
        ("communication structure", criterion_5),
        ("encryption", criterion_6),
        ("dense coding", criterion_7),
        ("quantization", criterion_8),
        ("mutually unbiased bases and teleportation", criterion_9),
        ("decoherence", criterion_10),
        ("mutation sensitivity", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
