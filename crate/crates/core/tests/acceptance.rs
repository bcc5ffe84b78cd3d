//! Acceptance suite: one line per criterion, then a summary.
//!
//! Runs without the libtest harness so the criteria execute in order and the
//! timings are not skewed by parallel tests.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chebias::classfn::{
    abelian_characters, class_plus, induce, inner_product, mean_of_square_twist, power_root_count, power_twist,
    square_root_count, ClassFunction,
};
use chebias::counter::{
    mobius_check, psi_cancellation_check, write_series, BiasSeries, Checkpoints,
    FrobeniusTable,
};
use chebias::criteria::{build_standard_example, check_lemma_criterion, check_theorem, search_sn_instances};
use chebias::fieldarith::{
    cyclotomic_field_data, cyclotomic_field_data_with, identify_frobenius, CyclotomicSpec, NumberFieldData,
};
use chebias::transfer::TransferChecker;
use chebias::{GaussianRational, Permutation, PermutationGroup, SubgroupEmbedding};

type Q = GaussianRational;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only failing part is a bound no data can meet.
    unattainable: Option<&'static str>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            unattainable: None,
        }
    }
}

const LOG_DENSITY_BOUND: &str = "the log-density bound 0.99 at X = 10^7 is unattainable: P is empty on [1, 2), so \
     (1/log X)∫_P dx/x ≤ 1 − log 2/log 10^7 ≈ 0.957 for any data";

fn q(n: i64) -> Q {
    Q::new(BigRational::from_integer(n.into()), BigRational::zero())
}

fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse(s, n).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// `#{h : h² = g}` straight from composition.
fn brute_square_roots(g: &PermutationGroup, x: &Permutation) -> i64 {
    g.elements().iter().filter(|h| &h.compose(h).unwrap() == x).count() as i64
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).unwrap()
}

fn random_group(rng: &mut ChaCha8Rng, max_order: usize) -> Arc<PermutationGroup> {
    loop {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(1..=2);
        let gens: Vec<Permutation> = (0..k).map(|_| random_perm(rng, n)).collect();
        if let Ok(g) = PermutationGroup::generate_with_cap(n, &gens, max_order) {
            if g.order() > 1 {
                return Arc::new(g);
            }
        }
    }
}

fn random_class_function(rng: &mut ChaCha8Rng, g: &Arc<PermutationGroup>) -> ClassFunction<Q> {
    let values = (0..g.num_classes())
        .map(|_| {
            Q::new(
                BigRational::from_integer(rng.gen_range(-6i64..=6).into()),
                BigRational::from_integer(rng.gen_range(-3i64..=3).into()),
            )
        })
        .collect();
    ClassFunction::new(g.clone(), values).unwrap()
}

fn criterion_1() -> Outcome {
    let ex = build_standard_example();
    let emb = &ex.embedding;
    let (amb, sub) = (emb.ambient(), emb.sub());
    let gsg = ex.gamma.compose(&ex.sigma.compose(&ex.gamma).unwrap()).unwrap();
    let abelian = sub
        .elements()
        .iter()
        .all(|a| sub.elements().iter().all(|b| a.compose(b).unwrap() == b.compose(a).unwrap()));
    let g1 = perm("(12)(34)", 8);
    let g2 = perm("(57)(68)", 8);
    let fused = class_plus(ex.c1, emb) == class_plus(ex.c2, emb) && amb.are_conjugate(&g1, &g2);
    let r = square_root_count::<Q>(sub);
    let r_lib = (r.eval(sub.index_of(&g1).unwrap()).clone(), r.eval(sub.index_of(&g2).unwrap()).clone());
    let r_brute = (brute_square_roots(sub, &g1), brute_square_roots(sub, &g2));

    let sigma2 = gsg.clone();
    let product = PermutationGroup::generate(8, &[ex.sigma.clone(), sigma2.clone()]).unwrap();
    let mut census = BTreeMap::new();
    for e in product.elements() {
        *census.entry(e.order()).or_insert(0) += 1;
    }
    let product_abelian = product.is_abelian();
    let swaps = ex.sigma.conjugate_by(&ex.gamma) == sigma2 && sigma2.conjugate_by(&ex.gamma) == ex.sigma;

    let pass = amb.order() == 32
        && sub.order() == 8
        && abelian
        && gsg == perm("(1324)", 8)
        && fused
        && r_brute == (0, 4)
        && r_lib == (q(0), q(4))
        && product.order() == 16
        && product_abelian
        && census == BTreeMap::from([(1, 1), (2, 3), (4, 12)])
        && swaps;
    Outcome::new(
        pass,
        format!(
            "|G⁺|={}, |G|={}, γσγ={gsg}, fused={fused}, r=({},{}), |⟨σ,γσγ⟩|={} orders {census:?}",
            amb.order(),
            sub.order(),
            r_brute.0,
            r_brute.1,
            product.order()
        ),
    )
}

fn criterion_2() -> Outcome {
    let ex = build_standard_example();
    let sub = ex.embedding.sub().clone();
    let t = ClassFunction::<Q>::bias_function(sub.clone(), ex.c1, ex.c2);
    let induced_zero = induce(&t, &ex.embedding).unwrap().is_zero();
    let r = square_root_count::<Q>(&sub);
    let ip = inner_product(&t, &r).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut bad = 0;
    for _ in 0..200 {
        let g = random_group(&mut rng, 32);
        let t = random_class_function(&mut rng, &g);
        let n = BigRational::from_integer((g.order() as i64).into());
        let mut lhs = Q::zero();
        let mut rhs = Q::zero();
        for x in g.elements() {
            lhs = lhs + t.eval(g.index_of(&x.compose(x).unwrap()).unwrap()).clone();
            rhs = rhs + t.eval(g.index_of(x).unwrap()).clone() * q(brute_square_roots(&g, x));
        }
        lhs = Q::new(lhs.re / &n, lhs.im / &n);
        rhs = Q::new(rhs.re / &n, rhs.im / &n);
        let lib_lhs = mean_of_square_twist(&t);
        let lib_rhs = inner_product(&t, &square_root_count(&g)).unwrap();
        if !(lhs == rhs && lib_lhs == lhs && lib_rhs == rhs) {
            bad += 1;
        }
    }
    Outcome::new(
        induced_zero && -ip.clone() == q(4) && bad == 0,
        format!("induce(t)≡0: {induced_zero}, -⟨t,r_G⟩ = {}, square-mean identity failures {bad}/200", -ip.re),
    )
}

fn check_transfer_all(emb: &SubgroupEmbedding, t: &ClassFunction<Q>) -> bool {
    let checker = TransferChecker::new(emb, t).unwrap();
    (0..emb.ambient().order()).all(|s| checker.check_levels(s, 1..=32))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let ex = build_standard_example();
    let sub = ex.embedding.sub().clone();
    let mut failures = 0;
    let mut checks = 0;
    let mut run = |emb: &SubgroupEmbedding, t: &ClassFunction<Q>| {
        checks += 1;
        if !check_transfer_all(emb, t) {
            failures += 1;
        }
    };
    run(&ex.embedding, &ClassFunction::bias_function(sub.clone(), ex.c1, ex.c2));
    for _ in 0..20 {
        run(&ex.embedding, &random_class_function(&mut rng, &sub));
    }
    let mut embeddings = 0;
    while embeddings < 100 {
        let amb = random_group(&mut rng, 48);
        let k = rng.gen_range(1..=2);
        let gens: Vec<Permutation> = (0..k)
            .map(|_| amb.element(rng.gen_range(0..amb.order())).clone())
            .collect();
        let sub = Arc::new(PermutationGroup::generate(amb.degree(), &gens).unwrap());
        let emb = SubgroupEmbedding::new(amb, sub.clone()).unwrap();
        let c1 = rng.gen_range(0..sub.num_classes());
        let c2 = rng.gen_range(0..sub.num_classes());
        run(&emb, &ClassFunction::bias_function(sub.clone(), c1, c2));
        for _ in 0..20 {
            run(&emb, &random_class_function(&mut rng, &sub));
        }
        embeddings += 1;
    }
    Outcome::new(
        failures == 0,
        format!("{checks} (embedding, t) pairs, all σ and m ≤ 32; failures {failures}"),
    )
}

fn criterion_4() -> Outcome {
    let primes = chebias::counter::sieve_primes(100_000).unwrap();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for m in [4u64, 5, 8, 12, 15] {
        let fd = cyclotomic_field_data(m).unwrap();
        let units: Vec<u64> = (1..m).filter(|a| num_integer::gcd(*a, m) == 1).collect();
        for &p in &primes {
            if m % p == 0 || p == 2 {
                continue;
            }
            let images = units
                .iter()
                .map(|u| units.iter().position(|&v| v == p % m * u % m).unwrap() as u32)
                .collect();
            let want = Permutation::from_images(images).unwrap();
            checked += 1;
            match identify_frobenius(&fd, p) {
                Ok(got) if got == want => {}
                other => mismatches.push((m, p, format!("{other:?}"))),
            }
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        format!("{checked} (m, p) pairs, mismatches {}", mismatches.len()),
    )
}

fn fixture_field() -> NumberFieldData {
    NumberFieldData::load(&fixture("bias32.json")).unwrap()
}

fn criterion_5(field: &NumberFieldData) -> Outcome {
    let cps = Checkpoints::geometric(100_000, 1.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);

    let cyc = cyclotomic_field_data_with(&CyclotomicSpec {
        m: 15,
        subgroup: Some(vec![2]),
    })
    .unwrap();
    let t_cyc = random_class_function(&mut rng, cyc.embedding.sub());
    let table = FrobeniusTable::build(&cyc, 100_000, 1).unwrap();
    let r_cyc = mobius_check(&table, &cyc.embedding, &t_cyc, &cps).unwrap();

    let t = ClassFunction::<Q>::bias_function(field.embedding.sub().clone(), field.class1, field.class2);
    let table = FrobeniusTable::build(field, 100_000, 1).unwrap();
    let r_field = mobius_check(&table, &field.embedding, &t, &cps).unwrap();

    let ok = |r: &chebias::counter::MobiusReport| r.holds(1e-6) && r.checkpoints == cps.len();
    Outcome::new(
        ok(&r_cyc) && ok(&r_field),
        format!(
            "Q(ζ15) index 2: exact failures {}, max rel {:.1e}; bias32: exact failures {}, max rel {:.1e}; {} checkpoints",
            r_cyc.exact_failures.len(),
            r_cyc.max_relative_mismatch,
            r_field.exact_failures.len(),
            r_field.max_relative_mismatch,
            cps.len()
        ),
    )
}

fn criterion_6(field: &NumberFieldData, table: &FrobeniusTable) -> Outcome {
    let t = ClassFunction::<Q>::bias_function(field.embedding.sub().clone(), field.class1, field.class2);
    let report = psi_cancellation_check(table, &field.embedding, &t, 1_000_000);
    Outcome::new(
        report.holds() && report.primes_checked == table.primes.len(),
        format!(
            "{} primes ≤ 10^6 checked, nonzero weight at {} (first: {:?})",
            report.primes_checked, report.nonzero_count, report.nonzero
        ),
    )
}

fn series_csv(series: &BiasSeries<Q>) -> Vec<u8> {
    let mut buf = Vec::new();
    write_series(series, &mut buf).unwrap();
    buf
}

fn run_count(field: &NumberFieldData, threads: usize) -> (BiasSeries<Q>, Duration) {
    let started = Instant::now();
    let t = ClassFunction::<Q>::bias_function(field.embedding.sub().clone(), field.class1, field.class2);
    let cps = Checkpoints::geometric(10_000_000, 1.05).unwrap();
    let series =
        chebias::counter::accumulate(field, &field.embedding, &t, field.class1, field.class2, &cps, threads).unwrap();
    (series, started.elapsed())
}

fn criterion_7(series: &BiasSeries<Q>, elapsed: Duration) -> Outcome {
    let positive = series.rows.iter().filter(|r| r.x >= 10_000).all(|r| r.d > 0.0);
    let band: Vec<f64> = series
        .rows
        .iter()
        .filter(|r| (1_000_000..=10_000_000).contains(&r.x))
        .map(|r| r.d)
        .collect();
    let in_band = !band.is_empty() && band.iter().all(|d| (0.3..=0.7).contains(d));
    let last = series.rows.last().unwrap();
    let log_ok = last.log_density >= 0.99;
    let (lo, hi) = band.iter().fold((f64::MAX, f64::MIN), |(a, b), &d| (a.min(d), b.max(d)));
    // the same integral restricted to [10^4, X], for context only
    let first = series.rows.iter().find(|r| r.x >= 10_000).unwrap();
    let tail_log = {
        let lx = (last.x as f64).ln();
        let l0 = (first.x as f64).ln();
        (last.log_density * lx - first.log_density * l0) / (lx - l0)
    };
    let fast = elapsed <= Duration::from_secs(15 * 60);
    let ceiling = 1.0 - 2f64.ln() / (last.x as f64).ln();
    let mut o = Outcome::new(
        positive && in_band && log_ok && fast,
        format!(
            "D>0 for x≥10^4: {positive}; D∈[{lo:.3},{hi:.3}] on [10^6,10^7]: {in_band}; \
             log density {:.4} (≥0.99: {log_ok}); log density over [10^4,10^7] {tail_log:.4}; \
             natural density {:.4}; D(10^7)={:.4}; single-threaded run {:.1}s",
            last.log_density,
            last.natural_density,
            last.d,
            elapsed.as_secs_f64()
        ),
    );
    if positive && in_band && fast && !log_ok && last.log_density <= ceiling {
        o.unattainable = Some(LOG_DENSITY_BOUND);
    }
    o
}

fn criterion_8(field: &NumberFieldData, table: &FrobeniusTable) -> Outcome {
    let amb = field.embedding.ambient();
    let counts = table.class_counts(amb.num_classes());
    let total: u64 = counts.iter().sum();
    let mut worst = 0.0f64;
    for (d, &c) in counts.iter().enumerate() {
        let expected = amb.classes()[d].len() as f64 / amb.order() as f64;
        let rel = (c as f64 / total as f64 - expected).abs() / expected;
        worst = worst.max(rel);
    }
    Outcome::new(
        worst <= 0.05,
        format!("{total} primes ≤ 10^6 over {} classes, worst relative deviation {:.2}%", counts.len(), worst * 100.0),
    )
}

fn criterion_9() -> Outcome {
    let started = Instant::now();
    let found = search_sn_instances(8, u64::MAX).unwrap();
    let mut matches = 0;
    let mut failures = 0;
    for inst in &found {
        let rec = inst.record();
        let n = rec.degree;
        let sigma = perm(&rec.sigma, n);
        let tau = perm(&rec.tau, n);
        let swap = perm(&rec.swap, n);
        let h = sigma.pow(2);
        let k = tau.pow(2);
        let amb = Arc::new(PermutationGroup::generate(n, &[sigma.clone(), tau.clone(), swap]).unwrap());
        let hg = PermutationGroup::generate(n, &[h.clone()]).unwrap();
        let kg = PermutationGroup::generate(n, &[tau.clone()]).unwrap();
        let sub = Arc::new(PermutationGroup::generate(n, &[h.clone(), tau]).unwrap());
        let emb = SubgroupEmbedding::new(amb.clone(), sub.clone()).unwrap();
        let cert = check_theorem(&emb, sub.class_of_perm(&h).unwrap(), sub.class_of_perm(&k).unwrap()).unwrap();
        let lemma = check_lemma_criterion(&amb, &hg, &kg, &h, &k).unwrap();
        if !(cert.is_valid() && lemma.holds()) {
            failures += 1;
        }
        if amb.order() == 32 && sub.order() == 8 && cert.r_gap() == 4 {
            matches += 1;
        }
    }
    let elapsed = started.elapsed();
    Outcome::new(
        matches >= 1 && failures == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} instances, {matches} with signature (32, 8, gap 4), re-verification failures {failures}, {:.2}s",
            found.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10() -> Outcome {
    let ex = build_standard_example();
    let sub = ex.embedding.sub().clone();
    let t = ClassFunction::<Q>::indicator(sub.clone(), ex.c1)
        .try_sub(&ClassFunction::indicator(sub.clone(), ex.c2))
        .unwrap();
    let one = ClassFunction::constant(sub.clone(), Q::one());
    let cube_zero = inner_product(&power_twist(&t, 3).unwrap(), &one).unwrap().is_zero();
    let odd_ones = [1u64, 3, 5, 7].iter().all(|&m| {
        let rm = power_root_count::<Q>(&sub, m).unwrap();
        sub.elements().iter().enumerate().all(|(i, x)| {
            let brute = sub.elements().iter().filter(|h| &h.pow(m) == x).count();
            brute == 1 && *rm.eval(i) == Q::one()
        })
    });
    let sq = power_twist(&t, 2).unwrap();
    let chars = abelian_characters::<Q>(&sub).unwrap();
    let four = ["(5678)", "(5678)(12)(34)", "(5876)", "(5876)(12)(34)"];
    let identity_holds = chars.iter().all(|chi| {
        let lhs = inner_product(chi, &sq).unwrap() * q(-8);
        let rhs = four
            .iter()
            .fold(Q::zero(), |acc, s| acc + chi.eval(sub.index_of(&perm(s, 8)).unwrap()).clone());
        lhs == rhs
    });
    Outcome::new(
        cube_zero && odd_ones && chars.len() == 8 && identity_holds,
        format!(
            "⟨t(·³),1⟩=0: {cube_zero}; r_m≡1 for m∈{{1,3,5,7}}: {odd_ones}; four-term identity for {} characters: {identity_holds}",
            chars.len()
        ),
    )
}

fn criterion_11(field: &NumberFieldData, single: &[u8]) -> Outcome {
    let mut identical = true;
    let mut sizes = vec![single.len()];
    for threads in [4, 8] {
        let (s, _) = run_count(field, threads);
        let bytes = series_csv(&s);
        sizes.push(bytes.len());
        identical &= bytes == single;
    }
    Outcome::new(identical, format!("CSV bytes for threads 1/4/8: {sizes:?}, identical: {identical}"))
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut record = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let started = Instant::now();
        let outcome = f();
        let elapsed = started.elapsed();
        let tag = match (outcome.pass, outcome.unattainable.is_some()) {
            (true, _) => "PASS",
            (false, true) => "FAIL (unattainable)",
            (false, false) => "FAIL",
        };
        println!("criterion {n:>2} [{tag}] {name} ({:.2}s): {}", elapsed.as_secs_f64(), outcome.detail);
        results.push((n, name, outcome, elapsed));
    };

    record(1, "exact group facts", &mut || {
        let started = Instant::now();
        let mut o = criterion_1();
        let fast = started.elapsed() < Duration::from_secs(1);
        o.pass &= fast;
        o
    });
    record(2, "induction identities", &mut || {
        let started = Instant::now();
        let mut o = criterion_2();
        o.pass &= started.elapsed() < Duration::from_secs(5);
        o
    });
    record(3, "transfer identity suite", &mut || {
        let started = Instant::now();
        let mut o = criterion_3();
        o.pass &= started.elapsed() < Duration::from_secs(30);
        o
    });
    record(4, "cyclotomic oracle equivalence", &mut || {
        let started = Instant::now();
        let mut o = criterion_4();
        o.pass &= started.elapsed() < Duration::from_secs(10);
        o
    });
    let field = fixture_field();
    record(5, "Möbius identity", &mut || criterion_5(&field));
    let table = FrobeniusTable::build(&field, 1_000_000, 1).unwrap();
    record(6, "per-prime ψ cancellation", &mut || criterion_6(&field, &table));
    let (series, elapsed) = run_count(&field, 1);
    record(7, "bias race at X = 10^7", &mut || criterion_7(&series, elapsed));
    record(8, "Chebotarev sanity", &mut || criterion_8(&field, &table));
    record(9, "search in S_8", &mut criterion_9);
    record(10, "character identities", &mut criterion_10);
    let single = series_csv(&series);
    record(11, "determinism across threads", &mut || criterion_11(&field, &single));

    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("\n{passed}/{} criteria passed", results.len());
    let mut hard_failures = 0;
    for (n, name, o, _) in &results {
        if o.pass {
            continue;
        }
        match o.unattainable {
            Some(why) => println!("criterion {n} ({name}) left red: {why}"),
            None => hard_failures += 1,
        }
    }
    if hard_failures > 0 {
        println!("{hard_failures} criteria failed");
        std::process::exit(1);
    }
}
