//! One function per subcommand, each filling a report builder. The `*_checks`
//! helpers are shared with `suite`.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use gpdact::catalog;
use gpdact::format::{self, FileKind};
use gpdact::groupoid::{Groupoid, MorId};
use gpdact::profunctor::Profunctor;
use gpdact::quantize::{
    self, check_mub, check_q_naturality, check_q_vertical, character_table, q_span, random_natural_span, Qudit,
};
use gpdact::quantize::sigma_pi::{coset_profunctor, cyclic_subgroup, sigma_pi_check};
use gpdact::structures::{build_delta, build_lambda, check_dense_coding, topological_axioms, Side};
use gpdact::thermal::{landauer_report, Cipher, Decoherence};
use gpdact::{compose_profunctors, Error};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{Builder, Check};

/// Bad input rather than a failed check: reported on stderr with exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const RANDOM_SPAN_PAIRS: usize = 100;
pub const RANDOM_STATES: usize = 100;
pub const MAX_QUDIT: usize = 16;

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

/// A catalog shorthand, or a path to a groupoid file.
pub fn load_group(arg: &str, b: &mut Builder) -> CliResult<(String, Groupoid)> {
    if Path::new(arg).is_file() {
        let text = read(arg)?;
        b.input(&text);
        return Ok((arg.to_string(), format::parse_groupoid(&text)?));
    }
    b.input(arg);
    Ok((catalog::canonical_name(arg)?, catalog::group(arg)?))
}

fn element(g: &Groupoid, arg: &str) -> CliResult<MorId> {
    if let Some(m) = g.find_morphism(arg) {
        return Ok(m);
    }
    match arg.parse::<usize>() {
        Ok(i) if i < g.n_morphisms() => Ok(i),
        _ => Err(Error::InvalidElement(arg.to_string()).into()),
    }
}

fn qudit_size(n: usize) -> CliResult<usize> {
    if (1..=MAX_QUDIT).contains(&n) {
        Ok(n)
    } else {
        Err(CliError::Usage(format!("n must lie in 1..={MAX_QUDIT}, got {n}")))
    }
}

pub fn validate(path: &str, b: &mut Builder) -> CliResult<()> {
    let text = read(path)?;
    b.input(&text);
    let kind = format::sniff(&text)?;
    match kind {
        FileKind::Groupoid => {
            let g = format::parse_groupoid(&text)?;
            b.detail("kind", "groupoid");
            b.detail("objects", g.n_objects());
            b.detail("morphisms", g.n_morphisms());
            b.detail("skeletal", g.is_skeletal());
        }
        FileKind::Profunctor => {
            let p = format::parse_profunctor(&text)?;
            b.detail("kind", "profunctor");
            b.detail("elements", p.len());
            b.detail("stage_counts", p.stage_counts());
        }
        FileKind::Span => {
            let s = format::parse_span(&text)?;
            b.detail("kind", "span");
            b.detail("support", s.support_size());
            b.detail("unitary", s.is_unitary());
        }
    }
    b.check(Check::new("file parses and satisfies its axioms", true, String::new));
    Ok(())
}

/// The six snake equalities and the count `|▷∘◁| = |Mor(G)|`.
pub fn axioms_checks(g: &Groupoid, prefix: &str) -> CliResult<Vec<Check>> {
    let mut out: Vec<Check> = topological_axioms(g)?.iter().map(|c| Check::from_equality(prefix, c)).collect();
    let s = Arc::new(g.skeletalize().0);
    let (l, r) = (Arc::new(Profunctor::boundary_left(&s)?), Arc::new(Profunctor::boundary_right(&s)?));
    let bubbles = compose_profunctors(&l, &r)?.0.len();
    out.push(Check::new(format!("{prefix}|▷∘◁| = |Mor(G)|"), bubbles == g.n_morphisms(), || {
        format!("{bubbles} classes for {} morphisms", g.n_morphisms())
    }));
    Ok(out)
}

pub fn check_axioms(arg: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.detail("groupoid", name);
    b.detail("morphisms", g.n_morphisms());
    b.checks(axioms_checks(&g, "")?);
    Ok(())
}

/// Unitarity of δ and both bends, the bend round trip, and the element chase.
pub fn complementary_checks(g: &Groupoid, prefix: &str) -> CliResult<Vec<Check>> {
    let cs = build_delta(g)?;
    let mut out: Vec<Check> = cs.check()?.iter().map(|c| Check::from_equality(prefix, c)).collect();
    let left = cs.delta_transpose(Side::Left)?;
    out.push(Check::new(format!("{prefix}left partial transpose of δ unitary"), left.is_unitary(), || {
        left.unitarity().map(|d| crate::report::describe_difference(&d)).unwrap_or_default()
    }));
    // (g, δ(g′)) through the bent δ and back through its dagger
    let pt = cs.delta_transpose(Side::Right)?;
    let back = pt.dagger();
    let mut failure = None;
    'chase: for e in 0..pt.src().len() {
        let image = pt.image(e);
        let [(mid, 1)] = image.as_slice() else {
            failure = Some(format!("{} has image {image:?}", pt.src().label(e)));
            break 'chase;
        };
        if back.image(*mid) != vec![(e, 1)] {
            failure = Some(format!("{} does not return to itself", pt.src().label(e)));
            break 'chase;
        }
    }
    out.push(Check::new(format!("{prefix}element chase returns (g, δ(g′)) to itself"), failure.is_none(), || {
        failure.clone().unwrap_or_default()
    }));
    Ok(out)
}

pub fn check_complementary(arg: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.detail("group", name);
    b.checks(complementary_checks(&g, "")?);
    Ok(())
}

pub fn build_lambda_cmd(arg: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    let c = build_lambda(&g)?;
    let mut table = Vec::new();
    let mut closed_form = true;
    for x in 0..c.order() {
        for k in 0..c.order() {
            let image = c.lambda.image(c.input(x, k));
            let outs: Vec<(MorId, MorId)> = image.iter().map(|&(t, _)| c.output_pair(t)).collect();
            closed_form &= image.len() == 1 && outs[0] == (g.compose(x, k).expect("group"), k);
            let shown: Vec<String> = outs.iter().map(|&(p, q)| format!("(δ({}), {})", g.name(p), g.name(q))).collect();
            table.push(format!("({}, δ({})) -> {}", g.name(x), g.name(k), shown.join(" + ")));
        }
    }
    b.detail("group", name);
    b.detail("lambda_support", c.lambda.support_size());
    b.detail("lambda", table);
    b.check(Check::new("λ sends (g, δ(g′)) to (δ(g·g′), g′)", closed_form, || "closed form differs".into()));
    b.checks(c.check().iter().map(|x| Check::from_equality("", x)));
    Ok(())
}

pub fn communication_checks(g: &Groupoid, prefix: &str) -> CliResult<Vec<Check>> {
    let c = build_lambda(g)?;
    let mut out: Vec<Check> = c.check().iter().map(|x| Check::from_equality(prefix, x)).collect();
    out.extend(c.unitarity_chain()?.iter().map(|x| Check::from_equality(prefix, x)));
    Ok(out)
}

pub fn check_communication(arg: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.detail("group", name);
    b.checks(communication_checks(&g, "")?);
    Ok(())
}

pub fn encrypt(arg: &str, plaintext: &str, key: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.input(plaintext);
    b.input(key);
    let (p, k) = (element(&g, plaintext)?, element(&g, key)?);
    let cipher = Cipher::new(&g)?;
    let t = cipher.encrypt(p, k)?;
    let back = cipher.decrypt(t.ciphertext, k)?;
    let landauer = landauer_report(&cipher, &t)?;
    b.detail("group", name);
    b.detail("ciphertext", format!("δ({})", g.name(t.ciphertext)));
    b.detail("heat", g.name(t.heat));
    b.detail("trace", &t.stage_trace);
    b.detail("landauer", &landauer);
    let expect = g.compose(p, k).expect("group");
    b.check(Check::new("ciphertext is δ(g·g′)", t.ciphertext == expect, || {
        format!("got δ({}), expected δ({})", g.name(t.ciphertext), g.name(expect))
    }));
    b.check(Check::new("decryption recovers the plaintext", back == p, || {
        format!("decrypted to {}", g.name(back))
    }));
    b.check(Check::new("heat equals key", t.heat == k, || format!("heat {}", g.name(t.heat))));
    b.check(Check::new("ciphertext uniform for every plaintext", landauer.ciphertext_hiding, || {
        format!("counts {:?}", landauer.ciphertext_counts)
    }));
    Ok(())
}

/// Every plaintext/key pair, plus exact uniformity of the ciphertext.
pub fn encryption_checks(g: &Groupoid, prefix: &str) -> CliResult<Vec<Check>> {
    let cipher = Cipher::new(g)?;
    let n = g.n_morphisms();
    let (mut wrong, mut undecrypted, mut heat) = (None, None, 0usize);
    for p in 0..n {
        for k in 0..n {
            let t = cipher.encrypt(p, k)?;
            if t.ciphertext != g.compose(p, k).expect("group") && wrong.is_none() {
                wrong = Some(t.describe());
            }
            if cipher.decrypt(t.ciphertext, k)? != p && undecrypted.is_none() {
                undecrypted = Some(t.describe());
            }
            heat += (t.heat == k) as usize;
        }
    }
    let mut counts = Vec::new();
    for p in 0..n {
        counts.push(cipher.ciphertext_distribution(p)?);
    }
    let uniform = counts.iter().all(|c| c.iter().all(|&x| x == 1));
    Ok(vec![
        Check::new(format!("{prefix}encryption ends at (δ(g·g′), g′)"), wrong.is_none(), || wrong.clone().unwrap_or_default()),
        Check::new(format!("{prefix}decryption inverts encryption"), undecrypted.is_none(), || {
            undecrypted.clone().unwrap_or_default()
        }),
        Check::new(format!("{prefix}heat equals key in every transcript"), heat == n * n, || {
            format!("{heat} of {}", n * n)
        }),
        Check::new(format!("{prefix}ciphertext exactly uniform under a uniform key"), uniform, || {
            format!("counts {counts:?}")
        }),
    ])
}

pub fn distribution(arg: &str, plaintext: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.input(plaintext);
    let p = element(&g, plaintext)?;
    let counts = Cipher::new(&g)?.ciphertext_distribution(p)?;
    let shown: std::collections::BTreeMap<String, u64> =
        counts.iter().enumerate().map(|(c, &v)| (format!("δ({})", g.name(c)), v)).collect();
    b.detail("group", name);
    b.detail("counts", shown);
    b.check(Check::new("every ciphertext occurs exactly once", counts.iter().all(|&c| c == 1), || {
        format!("counts {counts:?}")
    }));
    Ok(())
}

/// Exact retrieval with and without the environment.
pub fn decoherence_checks(g: &Groupoid, prefix: &str) -> CliResult<(Vec<Check>, Decoherence)> {
    let d = Decoherence::new(g)?;
    let n = g.n_morphisms() as u64;
    let mut clean = true;
    for info in 0..g.n_morphisms() {
        clean &= d.retrieve_distribution(info, &[])? == [(info, 1)].into_iter().collect();
    }
    let (ok, total) = d.exact_success()?;
    Ok((
        vec![
            Check::new(format!("{prefix}retrieval exact without environment"), clean, || {
                "some value was not retrieved".into()
            }),
            Check::new(format!("{prefix}retrieval succeeds in 1/|G| of environment cases"), ok * n == total, || {
                format!("{ok} of {total}")
            }),
        ],
        d,
    ))
}

pub fn decohere(arg: &str, seed: u64, trials: u64, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.seed(seed);
    b.input(trials.to_le_bytes());
    let (checks, d) = decoherence_checks(&g, "")?;
    b.checks(checks);
    let env = d.environment()?;
    let mut sampled = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for info in 0..g.n_morphisms() {
        let op = &env[rand::Rng::gen_range(&mut rng, 0..env.len())];
        let t = d.trial(info, std::slice::from_ref(op), trials, seed.wrapping_add(info as u64))?;
        sampled.push(t);
    }
    let (ok, total) = d.exact_success()?;
    b.detail("group", name);
    b.detail("exact_success", format!("{ok}/{total}"));
    b.detail("sampled_trials", sampled);
    Ok(())
}

pub fn quantize_cmd(path: &str, b: &mut Builder) -> CliResult<()> {
    let text = read(path)?;
    b.input(&text);
    let span = format::parse_span(&text)?;
    let m = q_span(&span);
    b.check(Check::from_q("", &check_q_naturality(span.src(), span.tgt(), &m)));
    b.detail("matrix", m.dump());
    Ok(())
}

/// Subgroups generated by single elements, without repeats.
fn cyclic_subgroups(g: &Groupoid) -> Vec<Vec<MorId>> {
    let set: BTreeSet<Vec<MorId>> = (0..g.n_morphisms()).map(|x| cyclic_subgroup(g, x)).collect();
    set.into_iter().collect()
}

/// Q on random natural spans over `[▷, ◁]` and `[◁, ▷]`, and σ/π on coset profunctors.
pub fn q_checks(g: &Groupoid, seed: u64, prefix: &str) -> CliResult<(Vec<Check>, Vec<usize>)> {
    let cells = gpdact::structures::CanonicalCells::new(&Arc::new(g.skeletalize().0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (label, cell) in [("[▷,◁]", &cells.boundary.rl), ("[◁,▷]", &cells.boundary.lr)] {
        let (mut vertical, mut natural) = (None, None);
        for i in 0..RANDOM_SPAN_PAIRS {
            let a = random_natural_span(cell, cell, &mut rng, 0.5, 3)?;
            let c = random_natural_span(cell, cell, &mut rng, 0.5, 3)?;
            let v = check_q_vertical(&a, &c)?;
            if !v.pass && vertical.is_none() {
                vertical = Some(format!("pair {i}: {:?}", v.witness));
            }
            let n = check_q_naturality(cell, cell, &q_span(&a));
            if !n.pass && natural.is_none() {
                natural = Some(format!("span {i}: {:?}", n.witness));
            }
        }
        out.push(Check::new(format!("{prefix}Q preserves vertical composition on {label}"), vertical.is_none(), || {
            vertical.clone().unwrap_or_default()
        }));
        out.push(Check::new(format!("{prefix}Q(σ) natural on {label}"), natural.is_none(), || {
            natural.clone().unwrap_or_default()
        }));
    }
    let mut orders = Vec::new();
    if g.is_group() {
        let ga = Arc::new(g.clone());
        let subgroups = cyclic_subgroups(g);
        let s = coset_profunctor(&ga, &subgroups, true)?;
        let t = coset_profunctor(&ga, &subgroups, false)?;
        let r = sigma_pi_check(&s, &t)?;
        orders = r.stabilizer_orders.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        out.extend(r.checks.iter().map(|c| Check::from_q(&format!("{prefix}σ/π: "), c)));
    }
    Ok((out, orders))
}

pub fn check_q(arg: &str, seed: u64, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.seed(seed);
    let (checks, orders) = q_checks(&g, seed, "")?;
    b.checks(checks);
    b.detail("group", name);
    b.detail("random_span_pairs", RANDOM_SPAN_PAIRS);
    b.detail("stabilizer_orders", orders);
    Ok(())
}

pub fn mub_check(n: usize, prefix: &str) -> CliResult<(Check, f64)> {
    let r = check_mub(&character_table(&catalog::cyclic(n))?);
    let c = Check::new(format!("{prefix}Z/{n}: |⟨b,c⟩|² = 1/n"), r.pass, || format!("deviation {:e}", r.max_deviation));
    Ok((c, r.max_deviation))
}

pub fn check_mub_cmd(n: usize, b: &mut Builder) -> CliResult<()> {
    let n = qudit_size(n)?;
    b.input(n.to_le_bytes());
    let (c, dev) = mub_check(n, "")?;
    b.check(c);
    b.detail("n", n);
    b.detail("max_deviation", dev);
    b.detail("characters", character_table(&catalog::cyclic(n))?.dump(&catalog::cyclic(n)));
    Ok(())
}

fn parse_state(text: &str) -> CliResult<Vec<Complex64>> {
    text.split(',')
        .map(|c| c.trim().parse::<Complex64>().map_err(|_| CliError::Usage(format!("bad amplitude `{c}`"))))
        .collect()
}

/// `RANDOM_STATES` seeded states through every branch.
pub fn teleport_checks(n: usize, seed: u64, prefix: &str) -> CliResult<(Vec<Check>, f64)> {
    let q = Qudit::new(&catalog::cyclic(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let r = quantize::teleport(&q, &quantize::random_state(n, &mut rng))?;
        worst = worst.max(r.max_deviation);
    }
    let c = Check::new(format!("{prefix}Z/{n}: {RANDOM_STATES} random states teleport on every branch"), worst <= quantize::TOLERANCE, || {
        format!("deviation {worst:e}")
    });
    Ok((vec![c], worst))
}

pub fn teleport(n: usize, state: Option<&str>, seed: u64, b: &mut Builder) -> CliResult<()> {
    let n = qudit_size(n)?;
    b.input(n.to_le_bytes());
    let Some(state) = state else {
        b.seed(seed);
        let (checks, worst) = teleport_checks(n, seed, "")?;
        b.checks(checks);
        b.detail("n", n);
        b.detail("states", RANDOM_STATES);
        b.detail("max_deviation", worst);
        return Ok(());
    };
    b.input(state);
    let q = Qudit::new(&catalog::cyclic(n))?;
    let psi = parse_state(state)?;
    let r = quantize::teleport(&q, &psi)?;
    for br in &r.branches {
        let ok = (1.0 - br.fidelity) <= quantize::TOLERANCE
            && (br.probability - 1.0 / (n * n) as f64).abs() <= quantize::TOLERANCE;
        b.check(Check::new(format!("branch (a={}, k={})", br.a, br.k), ok, || {
            format!("fidelity {}, probability {}", br.fidelity, br.probability)
        }));
    }
    b.detail("n", n);
    b.detail("branches", &r.branches);
    b.detail("max_deviation", r.max_deviation);
    Ok(())
}

pub fn dense_code_check(n: usize, prefix: &str) -> CliResult<Check> {
    let r = quantize::dense_coding_simulation(&Qudit::new(&catalog::cyclic(n))?);
    Ok(Check::new(format!("{prefix}Z/{n}: all {} messages decode exactly", r.messages), r.pass, || {
        format!("{} of {} decoded, deviation {:e}", r.decoded_exactly, r.messages, r.max_deviation)
    }))
}

pub fn dense_code(n: usize, b: &mut Builder) -> CliResult<()> {
    let n = qudit_size(n)?;
    b.input(n.to_le_bytes());
    let r = quantize::dense_coding_simulation(&Qudit::new(&catalog::cyclic(n))?);
    b.check(dense_code_check(n, "")?);
    b.detail("simulation", r);
    Ok(())
}

pub fn dense_code_span_checks(g: &Groupoid, prefix: &str) -> CliResult<Vec<Check>> {
    let r = check_dense_coding(&build_lambda(g)?)?;
    Ok(vec![
        Check::from_equality(prefix, &r.equation),
        Check::new(format!("{prefix}every message decoded faithfully"), r.pass(), || {
            format!("{} agreeing, {} distinct of {}", r.messages_agreeing, r.distinct_images, r.message_count)
        }),
    ])
}

pub fn dense_code_span(arg: &str, b: &mut Builder) -> CliResult<()> {
    let (name, g) = load_group(arg, b)?;
    b.detail("group", name);
    b.checks(dense_code_span_checks(&g, "")?);
    Ok(())
}

/// Every check above over a set of groups. `catalog` selects the full
/// catalog and every two-component disjoint union of a group with itself;
/// otherwise a quick subset.
pub fn suite(catalog_mode: bool, seed: u64, b: &mut Builder) -> CliResult<()> {
    b.seed(seed);
    b.input([catalog_mode as u8]);
    let names: Vec<&str> = if catalog_mode { catalog::NAMES.to_vec() } else { vec!["Z/2", "Z/3", "S3"] };
    let results: Vec<CliResult<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|&name| scope.spawn(move || group_battery(name, catalog_mode, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
    });
    for r in results {
        b.checks(r?);
    }
    let sizes: Vec<usize> = if catalog_mode { (2..=8).collect() } else { vec![2, 3] };
    for n in sizes {
        b.check(mub_check(n, "state vector ")?.0);
    }
    for n in [2, 3, 4] {
        b.checks(teleport_checks(n, seed, "state vector ")?.0);
        b.check(dense_code_check(n, "state vector ")?);
    }
    b.detail("groups", names);
    Ok(())
}

fn group_battery(name: &str, union: bool, seed: u64) -> CliResult<Vec<Check>> {
    let g = catalog::group(name)?;
    let p = format!("{name}: ");
    let mut out = axioms_checks(&g, &p)?;
    if union {
        out.extend(axioms_checks(&Groupoid::disjoint_union(&g, &g), &format!("{name} ⊔ {name}: "))?);
    }
    out.extend(complementary_checks(&g, &p)?);
    out.extend(communication_checks(&g, &p)?);
    out.extend(dense_code_span_checks(&g, &p)?);
    out.extend(encryption_checks(&g, &p)?);
    out.extend(decoherence_checks(&g, &p)?.0);
    out.extend(q_checks(&g, seed, &p)?.0);
    Ok(out)
}
