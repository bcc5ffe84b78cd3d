//! Accumulation of `π`, `θ` and `ψ` over prime ideals of `K`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::density::PositivityIntegrator;
use super::rnorm::r_norm;
use super::sieve::{sieve_primes_with_cap, DEFAULT_SIEVE_CAP};
use super::CounterError;
use crate::classfn::{power_twist, ClassFunction};
use crate::embedding::SubgroupEmbedding;
use crate::fieldarith::{FrobeniusOracle, OracleError};
use crate::scalar::ClassValue;
use crate::transfer::{ideal_side_weight, PatternTable};

/// Primes per parallel work unit.
pub const BLOCK_PRIMES: usize = 2048;

/// Where the counting functions are sampled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoints {
    xs: Vec<u64>,
}

impl Checkpoints {
    /// Sorted, deduplicated, and restricted to `x ≥ 2`.
    pub fn from_values(mut xs: Vec<u64>) -> Self {
        xs.retain(|&x| x >= 2);
        xs.sort_unstable();
        xs.dedup();
        Checkpoints { xs }
    }

    /// `⌊2·r^j⌋` for `j = 0, 1, …` while `≤ limit`, plus `limit` itself.
    pub fn geometric(limit: u64, ratio: f64) -> Result<Self, CounterError> {
        if limit < 2 {
            return Err(CounterError::Config(format!("limit {limit} is below 2")));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(CounterError::Config(format!("grid ratio {ratio} must exceed 1")));
        }
        let mut xs = Vec::new();
        let mut j = 0i32;
        loop {
            let x = (2.0 * ratio.powi(j)).floor();
            if x > limit as f64 {
                break;
            }
            xs.push(x as u64);
            j += 1;
        }
        xs.push(limit);
        Ok(Self::from_values(xs))
    }

    pub fn values(&self) -> &[u64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.xs.last().copied()
    }
}

/// Ambient Frobenius class of every non-excluded prime up to a limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusTable {
    pub limit: u64,
    pub primes: Vec<u64>,
    /// Ambient class id of `σ_p`, parallel to `primes`.
    pub classes: Vec<u32>,
    /// Primes `≤ limit` the oracle skipped.
    pub excluded: Vec<u64>,
}

impl FrobeniusTable {
    pub fn build<O: FrobeniusOracle + ?Sized>(
        oracle: &O,
        limit: u64,
        threads: usize,
    ) -> Result<Self, CounterError> {
        let all = sieve_primes_with_cap(limit, DEFAULT_SIEVE_CAP)?;
        let amb = oracle.ambient().clone();
        let work = |chunk: &[u64]| -> Result<Vec<Option<u32>>, CounterError> {
            chunk
                .iter()
                .map(|&p| match oracle.frobenius(p) {
                    Ok(e) => Ok(Some(amb.class_of(e) as u32)),
                    Err(OracleError::Excluded(_)) => Ok(None),
                    Err(source) => Err(CounterError::Oracle { p, source }),
                })
                .collect()
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| CounterError::Config(e.to_string()))?;
        let blocks: Vec<Vec<Option<u32>>> = pool.install(|| {
            all.par_chunks(BLOCK_PRIMES)
                .map(work)
                .collect::<Result<Vec<_>, _>>()
        })?;
        let mut table = FrobeniusTable {
            limit,
            primes: Vec::with_capacity(all.len()),
            classes: Vec::with_capacity(all.len()),
            excluded: Vec::new(),
        };
        for (&p, c) in all.iter().zip(blocks.into_iter().flatten()) {
            match c {
                Some(c) => {
                    table.primes.push(p);
                    table.classes.push(c);
                }
                None => table.excluded.push(p),
            }
        }
        Ok(table)
    }

    /// How many primes fell in each ambient class.
    pub fn class_counts(&self, num_classes: usize) -> Vec<u64> {
        let mut out = vec![0u64; num_classes];
        for &c in &self.classes {
            out[c as usize] += 1;
        }
        out
    }

    /// The table restricted to primes `≤ limit`.
    pub fn truncated(&self, limit: u64) -> Self {
        let n = self.primes.partition_point(|&p| p <= limit);
        FrobeniusTable {
            limit,
            primes: self.primes[..n].to_vec(),
            classes: self.classes[..n].to_vec(),
            excluded: self.excluded.iter().copied().filter(|&p| p <= limit).collect(),
        }
    }
}

/// Floating sum with Neumaier compensation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `p^m ≤ limit` as one jump of the counting functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Event {
    norm: u64,
    prime_index: u32,
    level: u8,
}

fn events(table: &FrobeniusTable, limit: u64) -> Vec<Event> {
    let mut out = Vec::with_capacity(table.primes.len() + 1024);
    for (i, &p) in table.primes.iter().enumerate() {
        if p > limit {
            break;
        }
        let mut n = p;
        let mut level = 1u8;
        loop {
            out.push(Event {
                norm: n,
                prime_index: i as u32,
                level,
            });
            match n.checked_mul(p) {
                Some(v) if v <= limit => {
                    n = v;
                    level += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

pub(crate) fn max_level(limit: u64) -> usize {
    (64 - limit.max(1).leading_zeros()) as usize
}

/// Per ambient class and level `m`, what an event `p^m` contributes.
struct LevelTables<S> {
    /// `(class of G, multiplicity)` of the degree-`m` primes above `p`.
    pi: Vec<Vec<Vec<(usize, u64)>>>,
    ideals: Vec<Vec<u64>>,
    theta: Vec<Vec<S>>,
    psi: Vec<Vec<S>>,
    theta_f: Vec<Vec<f64>>,
    psi_f: Vec<Vec<f64>>,
}

impl<S: ClassValue> LevelTables<S> {
    fn new(patterns: &PatternTable, t: &ClassFunction<S>, levels: usize) -> Self {
        let n = patterns.patterns().len();
        let mut lt = LevelTables {
            pi: vec![vec![Vec::new(); levels + 1]; n],
            ideals: vec![vec![0; levels + 1]; n],
            theta: vec![vec![S::zero(); levels + 1]; n],
            psi: vec![vec![S::zero(); levels + 1]; n],
            theta_f: vec![vec![0.0; levels + 1]; n],
            psi_f: vec![vec![0.0; levels + 1]; n],
        };
        for (d, pattern) in patterns.patterns().iter().enumerate() {
            for m in 1..=levels {
                for e in &pattern.entries {
                    if e.residue_degree as usize == m {
                        lt.pi[d][m].push((e.class_id, e.multiplicity as u64));
                        lt.ideals[d][m] += e.multiplicity as u64;
                        let w = t.value_on_class(e.class_id).clone()
                            * S::from_i64(m as i64 * e.multiplicity as i64);
                        lt.theta[d][m] = lt.theta[d][m].clone() + w;
                    }
                }
                lt.psi[d][m] = ideal_side_weight(pattern, t, m as u64);
                lt.theta_f[d][m] = lt.theta[d][m].re_f64();
                lt.psi_f[d][m] = lt.psi[d][m].re_f64();
            }
        }
        lt
    }
}

/// One checkpoint of a [`BiasSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow<S> {
    pub x: u64,
    /// `π(x; L/K, C)` for each class `C` of `G`.
    pub pi: Vec<u64>,
    /// Unramified prime ideals of `K` with norm `≤ x`.
    pub ideals: u64,
    pub theta: f64,
    pub psi: f64,
    /// `θ` and `ψ` with every `log p` replaced by 1, kept exact.
    pub theta_weight: S,
    pub psi_weight: S,
    pub r: f64,
    /// Normalized difference `(|C₂|π₁ − |C₁|π₂)/(|C₁||C₂|)/R(x)`.
    pub d: f64,
    pub log_density: f64,
    pub natural_density: f64,
}

#[derive(Clone, Debug)]
pub struct BiasSeries<S> {
    pub c1: usize,
    pub c2: usize,
    pub class_sizes: Vec<usize>,
    pub rows: Vec<SeriesRow<S>>,
    pub excluded: Vec<u64>,
}

impl<S> BiasSeries<S> {
    pub fn pi_c1(&self, row: &SeriesRow<S>) -> u64 {
        row.pi[self.c1]
    }

    pub fn pi_c2(&self, row: &SeriesRow<S>) -> u64 {
        row.pi[self.c2]
    }
}

/// Log and natural density of `{x : |C₂|π₁ > |C₁|π₂}` up to the last checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub x: u64,
    pub log_density: f64,
    pub natural_density: f64,
}

pub fn density_estimates<S>(series: &BiasSeries<S>) -> Option<DensityEstimate> {
    series.rows.last().map(|r| DensityEstimate {
        x: r.x,
        log_density: r.log_density,
        natural_density: r.natural_density,
    })
}

/// Sieves, asks the oracle for every prime up to the last checkpoint, and
/// accumulates the series.
pub fn accumulate<S: ClassValue, O: FrobeniusOracle + ?Sized>(
    oracle: &O,
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
    c1: usize,
    c2: usize,
    cps: &Checkpoints,
    threads: usize,
) -> Result<BiasSeries<S>, CounterError> {
    check_groups(oracle.ambient(), emb, t)?;
    let limit = cps.max().unwrap_or(1);
    let table = FrobeniusTable::build(oracle, limit, threads)?;
    accumulate_from_table(&table, emb, t, c1, c2, cps)
}

fn check_groups<S: ClassValue>(
    ambient: &Arc<crate::permgroup::PermutationGroup>,
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
) -> Result<(), CounterError> {
    if !Arc::ptr_eq(ambient, emb.ambient()) && ambient.elements() != emb.ambient().elements() {
        return Err(CounterError::Config("oracle and embedding disagree on G⁺".into()));
    }
    if !Arc::ptr_eq(t.group(), emb.sub()) && t.group().elements() != emb.sub().elements() {
        return Err(CounterError::Config("class function is not defined on G".into()));
    }
    Ok(())
}

/// The sequential half of [`accumulate`], given the Frobenius classes.
pub fn accumulate_from_table<S: ClassValue>(
    table: &FrobeniusTable,
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
    c1: usize,
    c2: usize,
    cps: &Checkpoints,
) -> Result<BiasSeries<S>, CounterError> {
    let sub = emb.sub();
    if c1 >= sub.num_classes() || c2 >= sub.num_classes() {
        return Err(CounterError::Config("class id out of range".into()));
    }
    let limit = cps.max().unwrap_or(1);
    if limit > table.limit {
        return Err(CounterError::Config(format!(
            "table covers primes to {} but checkpoints reach {limit}",
            table.limit
        )));
    }
    let levels = max_level(limit);
    let patterns = PatternTable::new(emb);
    let lt = LevelTables::new(&patterns, t, levels);
    let n_amb = patterns.patterns().len();
    let n1 = sub.classes()[c1].len() as u64;
    let n2 = sub.classes()[c2].len() as u64;

    let mut pi = vec![0u64; sub.num_classes()];
    let mut ideals = 0u64;
    // events seen per (ambient class, level), for the exact weights
    let mut hits = vec![vec![0u64; levels + 1]; n_amb];
    let mut theta = CompensatedSum::default();
    let mut psi = CompensatedSum::default();
    let mut positivity = PositivityIntegrator::new();
    let mut rows = Vec::with_capacity(cps.len());
    let mut next_cp = 0usize;

    let exact = |hits: &[Vec<u64>], w: &[Vec<S>]| -> S {
        let mut acc = S::zero();
        for (d, row) in hits.iter().enumerate() {
            for (m, &h) in row.iter().enumerate() {
                if h > 0 {
                    acc = acc + w[d][m].clone() * S::from_i64(h as i64);
                }
            }
        }
        acc
    };

    let mut emit = |x: u64,
                    pi: &[u64],
                    ideals: u64,
                    hits: &[Vec<u64>],
                    theta: f64,
                    psi: f64,
                    positivity: &PositivityIntegrator|
     -> Result<(), CounterError> {
        let r = r_norm(x as f64)?;
        let diff = (n2 * pi[c1]) as f64 - (n1 * pi[c2]) as f64;
        rows.push(SeriesRow {
            x,
            pi: pi.to_vec(),
            ideals,
            theta,
            psi,
            theta_weight: exact(hits, &lt.theta),
            psi_weight: exact(hits, &lt.psi),
            r,
            d: diff / (n1 * n2) as f64 / r,
            log_density: positivity.log_density(x as f64),
            natural_density: positivity.natural_density(x as f64),
        });
        Ok(())
    };

    for ev in events(table, limit) {
        while next_cp < cps.len() && cps.values()[next_cp] < ev.norm {
            emit(cps.values()[next_cp], &pi, ideals, &hits, theta.value(), psi.value(), &positivity)?;
            next_cp += 1;
        }
        let i = ev.prime_index as usize;
        let d = table.classes[i] as usize;
        let m = ev.level as usize;
        debug_assert_eq!(patterns.for_class(d).total_degree() as usize, emb.index());
        for &(c, mult) in &lt.pi[d][m] {
            pi[c] += mult;
        }
        ideals += lt.ideals[d][m];
        hits[d][m] += 1;
        let logp = (table.primes[i] as f64).ln();
        if lt.theta_f[d][m] != 0.0 {
            theta.add(lt.theta_f[d][m] * logp);
        }
        if lt.psi_f[d][m] != 0.0 {
            psi.add(lt.psi_f[d][m] * logp);
        }
        if !lt.pi[d][m].is_empty() {
            positivity.jump(ev.norm as f64, n2 * pi[c1] > n1 * pi[c2]);
        }
    }
    while next_cp < cps.len() {
        emit(cps.values()[next_cp], &pi, ideals, &hits, theta.value(), psi.value(), &positivity)?;
        next_cp += 1;
    }

    Ok(BiasSeries {
        c1,
        c2,
        class_sizes: sub.classes().iter().map(|c| c.len()).collect(),
        rows,
        excluded: table.excluded.clone(),
    })
}

/// Outcome of [`psi_cancellation_check`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct CancellationReport {
    pub primes_checked: usize,
    /// Primes whose exact `ψ` weight is nonzero, at most the first 20.
    pub nonzero: Vec<u64>,
    pub nonzero_count: usize,
}

impl CancellationReport {
    pub fn holds(&self) -> bool {
        self.nonzero_count == 0
    }
}

/// For each prime `p ≤ limit`, the exact total `Σ_{m : p^m ≤ limit}` of its
/// `ψ` weights at level `m` must vanish.
pub fn psi_cancellation_check<S: ClassValue>(
    table: &FrobeniusTable,
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
    limit: u64,
) -> CancellationReport {
    let levels = max_level(limit);
    let patterns = PatternTable::new(emb);
    // cumulative exact weights: prefix[d][M] = Σ_{m ≤ M} W(d, m)
    let prefix: Vec<Vec<S>> = patterns
        .patterns()
        .iter()
        .map(|pat| {
            let mut acc = S::zero();
            let mut v = vec![S::zero()];
            for m in 1..=levels {
                acc = acc + ideal_side_weight(pat, t, m as u64);
                v.push(acc.clone());
            }
            v
        })
        .collect();
    let mut report = CancellationReport::default();
    for (&p, &d) in table.primes.iter().zip(&table.classes) {
        if p > limit {
            break;
        }
        let mut top = 1usize;
        let mut n = p;
        while let Some(v) = n.checked_mul(p).filter(|&v| v <= limit) {
            n = v;
            top += 1;
        }
        report.primes_checked += 1;
        if !prefix[d as usize][top].is_zero() {
            report.nonzero_count += 1;
            if report.nonzero.len() < 20 {
                report.nonzero.push(p);
            }
        }
    }
    report
}

/// Outcome of [`mobius_check`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct MobiusReport {
    pub max_level: usize,
    /// `(ambient class, level)` pairs where the exact weights disagree.
    pub exact_failures: Vec<(usize, usize)>,
    pub checkpoints: usize,
    pub max_relative_mismatch: f64,
}

impl MobiusReport {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.exact_failures.is_empty() && self.max_relative_mismatch <= rel_tol
    }
}

pub fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `⌊y^{1/k}⌋` for integers.
pub fn integer_root(y: u64, k: u32) -> u64 {
    if k == 1 || y < 2 {
        return y;
    }
    let mut r = (y as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |r: u64| r.checked_pow(k).is_some_and(|v| v <= y);
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Checks `θ(x; t) = Σ_{ℓ ≥ 1} μ(ℓ) ψ(x^{1/ℓ}; t(·^ℓ))` at every checkpoint.
///
/// The exact part compares, for each ambient class and level `n`, the `θ`
/// weight against `Σ_{ℓ | n} μ(ℓ)` times the `ψ` weight of `t(·^ℓ)` at level
/// `n/ℓ`. The floating part evaluates both sides as independent sums.
pub fn mobius_check<S: ClassValue>(
    table: &FrobeniusTable,
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
    cps: &Checkpoints,
) -> Result<MobiusReport, CounterError> {
    let limit = cps.max().unwrap_or(2);
    let levels = max_level(limit).max(1);
    let patterns = PatternTable::new(emb);
    let twists: Vec<ClassFunction<S>> = (1..=levels)
        .map(|l| power_twist(t, l as u64))
        .collect::<Result<_, _>>()
        .map_err(|e| CounterError::Config(e.to_string()))?;
    let base = LevelTables::new(&patterns, t, levels);
    let twisted: Vec<LevelTables<S>> = twists.iter().map(|tl| LevelTables::new(&patterns, tl, levels)).collect();

    let mut report = MobiusReport {
        max_level: levels,
        ..Default::default()
    };
    for d in 0..patterns.patterns().len() {
        for n in 1..=levels {
            let mut rhs = S::zero();
            for l in (1..=n).filter(|l| n % l == 0) {
                let mu = mobius(l);
                if mu != 0 {
                    rhs = rhs + twisted[l - 1].psi[d][n / l].clone() * S::from_i64(mu);
                }
            }
            if rhs != base.theta[d][n] {
                report.exact_failures.push((d, n));
            }
        }
    }

    // floating sides: θ along the events, ψ_ℓ as prefix sums queried at x^{1/ℓ}
    let evs = events(table, limit);
    let mut theta_at = Vec::with_capacity(cps.len());
    let mut theta = CompensatedSum::default();
    let mut k = 0usize;
    for ev in &evs {
        while k < cps.len() && cps.values()[k] < ev.norm {
            theta_at.push(theta.value());
            k += 1;
        }
        let d = table.classes[ev.prime_index as usize] as usize;
        let w = base.theta_f[d][ev.level as usize];
        if w != 0.0 {
            theta.add(w * (table.primes[ev.prime_index as usize] as f64).ln());
        }
    }
    while theta_at.len() < cps.len() {
        theta_at.push(theta.value());
    }

    let mut psi_prefix: Vec<(Vec<u64>, Vec<f64>)> = Vec::with_capacity(levels);
    for l in 1..=levels {
        let lim = integer_root(limit, l as u32);
        let mut norms = Vec::new();
        let mut sums = Vec::new();
        let mut acc = CompensatedSum::default();
        for ev in evs.iter().take_while(|e| e.norm <= lim) {
            let d = table.classes[ev.prime_index as usize] as usize;
            acc.add(twisted[l - 1].psi_f[d][ev.level as usize] * (table.primes[ev.prime_index as usize] as f64).ln());
            norms.push(ev.norm);
            sums.push(acc.value());
        }
        psi_prefix.push((norms, sums));
    }
    for (j, &x) in cps.values().iter().enumerate() {
        let mut rhs = CompensatedSum::default();
        let mut scale = theta_at[j].abs();
        for l in 1..=levels {
            let mu = mobius(l);
            if mu == 0 {
                continue;
            }
            let y = integer_root(x, l as u32);
            let (norms, sums) = &psi_prefix[l - 1];
            let n = norms.partition_point(|&v| v <= y);
            let v = if n == 0 { 0.0 } else { sums[n - 1] };
            rhs.add(mu as f64 * v);
            scale += v.abs();
        }
        let mismatch = (theta_at[j] - rhs.value()).abs();
        let rel = if scale > 0.0 { mismatch / scale } else { mismatch };
        report.max_relative_mismatch = report.max_relative_mismatch.max(rel);
        report.checkpoints += 1;
    }
    Ok(report)
}
