//! Bias certificates, the commuting-subgroups criterion, and a search for
//! instances inside symmetric groups.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classfn::{class_plus, square_root_count};
use crate::embedding::{EmbeddingError, SubgroupEmbedding};
use crate::permgroup::{GroupError, Permutation, PermutationGroup};
use crate::scalar::ClassValue;

/// Largest symmetric-group degree the search accepts.
pub const DEFAULT_SEARCH_DEGREE_CAP: usize = 12;
/// Largest ambient group the search will close.
pub const DEFAULT_SEARCH_ORDER_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("class id {0} is not a class of the subgroup")]
    NoSuchClass(usize),
    #[error("{0} is not a subgroup of the ambient group")]
    NotSubgroup(&'static str),
    #[error("{0} is not an element of {1}")]
    NotInSubgroup(String, &'static str),
    #[error("H and K intersect nontrivially")]
    NontrivialIntersection,
    #[error("H does not centralize K")]
    NotCentralizing,
    #[error("search degree {0} exceeds cap {1}")]
    DegreeCap(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// Outcome of checking `C₁⁺ = C₂⁺` and `r_G(g₁) < r_G(g₂)` for a pair of
/// classes of `G ≤ G⁺`.
#[derive(Clone, Debug)]
pub struct BiasCertificate {
    pub embedding: SubgroupEmbedding,
    pub c1: usize,
    pub c2: usize,
    pub c1_rep: Permutation,
    pub c2_rep: Permutation,
    pub c1_size: usize,
    pub c2_size: usize,
    pub r1: u64,
    pub r2: u64,
    pub fused: bool,
    /// Limit of `(π(x;C₁)/|C₁| − π(x;C₂)/|C₂|)/R(x)`, namely `(r₂ − r₁)/|G|`.
    pub predicted_normalized_limit: BigRational,
}

impl BiasCertificate {
    pub fn is_valid(&self) -> bool {
        self.fused && self.r1 < self.r2
    }

    pub fn r_gap(&self) -> i64 {
        self.r2 as i64 - self.r1 as i64
    }

    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            ambient_order: self.embedding.ambient().order(),
            sub_order: self.embedding.sub().order(),
            index: self.embedding.index(),
            c1_rep: self.c1_rep.to_string(),
            c2_rep: self.c2_rep.to_string(),
            c1_size: self.c1_size,
            c2_size: self.c2_size,
            r1: self.r1,
            r2: self.r2,
            fused: self.fused,
            valid: self.is_valid(),
            predicted_normalized_limit: self.predicted_normalized_limit.to_string(),
        }
    }
}

/// Serializable view of a [`BiasCertificate`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CertificateSummary {
    pub ambient_order: usize,
    pub sub_order: usize,
    pub index: usize,
    pub c1_rep: String,
    pub c2_rep: String,
    pub c1_size: usize,
    pub c2_size: usize,
    pub r1: u64,
    pub r2: u64,
    pub fused: bool,
    pub valid: bool,
    pub predicted_normalized_limit: String,
}

fn class_root_count(r: &crate::ExactClassFunction, class: usize) -> u64 {
    r.value_on_class(class).re_f64() as u64
}

pub fn check_theorem(
    emb: &SubgroupEmbedding,
    c1: usize,
    c2: usize,
) -> Result<BiasCertificate, CriteriaError> {
    let sub = emb.sub();
    for c in [c1, c2] {
        if c >= sub.num_classes() {
            return Err(CriteriaError::NoSuchClass(c));
        }
    }
    let r = square_root_count(sub);
    let r1 = class_root_count(&r, c1);
    let r2 = class_root_count(&r, c2);
    let fused = class_plus(c1, emb) == class_plus(c2, emb);
    let gap = BigInt::from(r2 as i64 - r1 as i64);
    Ok(BiasCertificate {
        embedding: emb.clone(),
        c1,
        c2,
        c1_rep: sub.class_representative(c1).clone(),
        c2_rep: sub.class_representative(c2).clone(),
        c1_size: sub.classes()[c1].len(),
        c2_size: sub.classes()[c2].len(),
        r1,
        r2,
        fused,
        predicted_normalized_limit: BigRational::new(gap, BigInt::from(sub.order())),
    })
}

/// Result of checking the criterion for commuting subgroups `H`, `K` of `G⁺`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LemmaReport {
    pub h_nonsquare_in_h: bool,
    pub k_square_in_k: bool,
    pub conjugate_in_ambient: bool,
    pub product_order: usize,
    /// `#{x ∈ G : x² = k}` by brute force over `G = HK`.
    pub roots_of_k_in_g: usize,
    pub roots_of_k_in_k: usize,
    pub involutions_in_h: usize,
    /// `#{x ∈ G : x² = h}`.
    pub roots_of_h_in_g: usize,
    pub roots_of_h_in_h: usize,
    pub involutions_in_k: usize,
    pub k_product_formula: bool,
    pub h_product_formula: bool,
}

impl LemmaReport {
    /// Hypotheses hold and both counting identities check out, with
    /// `#{x²=k} > 0` and `#{x²=h} = 0`.
    pub fn holds(&self) -> bool {
        self.h_nonsquare_in_h
            && self.k_square_in_k
            && self.conjugate_in_ambient
            && self.k_product_formula
            && self.h_product_formula
            && self.roots_of_k_in_g > 0
            && self.roots_of_h_in_g == 0
    }
}

fn count_roots(elements: &[Permutation], target: &Permutation) -> usize {
    elements.iter().filter(|x| &x.compose_unchecked(x) == target).count()
}

pub fn check_lemma_criterion(
    ambient: &PermutationGroup,
    h_group: &PermutationGroup,
    k_group: &PermutationGroup,
    h: &Permutation,
    k: &Permutation,
) -> Result<LemmaReport, CriteriaError> {
    if !ambient.contains_group(h_group) {
        return Err(CriteriaError::NotSubgroup("H"));
    }
    if !ambient.contains_group(k_group) {
        return Err(CriteriaError::NotSubgroup("K"));
    }
    if !h_group.contains(h) {
        return Err(CriteriaError::NotInSubgroup(h.to_string(), "H"));
    }
    if !k_group.contains(k) {
        return Err(CriteriaError::NotInSubgroup(k.to_string(), "K"));
    }
    if h_group.elements().iter().skip(1).any(|x| k_group.contains(x)) {
        return Err(CriteriaError::NontrivialIntersection);
    }
    for a in h_group.elements() {
        for b in k_group.elements() {
            if a.compose_unchecked(b) != b.compose_unchecked(a) {
                return Err(CriteriaError::NotCentralizing);
            }
        }
    }
    // H centralizes K, so HK is a group and every element is uniquely s·t.
    let product: Vec<Permutation> = h_group
        .elements()
        .iter()
        .flat_map(|s| k_group.elements().iter().map(move |t| s.compose_unchecked(t)))
        .collect();
    let id = Permutation::identity(ambient.degree());

    let roots_of_k_in_g = count_roots(&product, k);
    let roots_of_k_in_k = count_roots(k_group.elements(), k);
    let involutions_in_h = count_roots(h_group.elements(), &id);
    let roots_of_h_in_g = count_roots(&product, h);
    let roots_of_h_in_h = count_roots(h_group.elements(), h);
    let involutions_in_k = count_roots(k_group.elements(), &id);

    Ok(LemmaReport {
        h_nonsquare_in_h: roots_of_h_in_h == 0,
        k_square_in_k: roots_of_k_in_k > 0,
        conjugate_in_ambient: ambient.are_conjugate(h, k),
        product_order: product.len(),
        roots_of_k_in_g,
        roots_of_k_in_k,
        involutions_in_h,
        roots_of_h_in_g,
        roots_of_h_in_h,
        involutions_in_k,
        k_product_formula: roots_of_k_in_g == roots_of_k_in_k * involutions_in_h,
        h_product_formula: roots_of_h_in_g == roots_of_h_in_h * involutions_in_k,
    })
}

/// The worked example: `G⁺ = ⟨(12)(34), (5678), (15)(27)(36)(48)⟩` of order 32,
/// `G = ⟨(12)(34), (5678)⟩`, `C₁ = {(12)(34)}`, `C₂ = {(57)(68)}`.
#[derive(Clone, Debug)]
pub struct StandardExample {
    pub embedding: SubgroupEmbedding,
    pub c1: usize,
    pub c2: usize,
    pub tau: Permutation,
    pub sigma: Permutation,
    pub gamma: Permutation,
}

pub fn build_standard_example() -> StandardExample {
    let p = |s: &str| Permutation::parse(s, 8).expect("literal cycle");
    let tau = p("(12)(34)");
    let sigma = p("(5678)");
    let gamma = p("(15)(27)(36)(48)");
    let ambient = Arc::new(
        PermutationGroup::generate(8, &[tau.clone(), sigma.clone(), gamma.clone()]).expect("order 32"),
    );
    let sub = Arc::new(PermutationGroup::generate(8, &[tau.clone(), sigma.clone()]).expect("order 8"));
    let c1 = sub.class_of_perm(&tau).expect("generator");
    let c2 = sub.class_of_perm(&p("(57)(68)")).expect("σ²");
    let embedding = SubgroupEmbedding::new(ambient, sub).expect("G ≤ G⁺");
    StandardExample {
        embedding,
        c1,
        c2,
        tau,
        sigma,
        gamma,
    }
}

/// Dedup key for search results.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InstanceSignature {
    pub ambient_order: usize,
    pub sub_order: usize,
    pub c1_cycle_type: Vec<usize>,
    pub c2_cycle_type: Vec<usize>,
    pub r_gap: i64,
}

/// A bias instance found inside `S_n`.
#[derive(Clone, Debug)]
pub struct SearchInstance {
    pub cycle_shape: Vec<usize>,
    pub sigma: Permutation,
    pub tau: Permutation,
    pub swap: Permutation,
    pub certificate: BiasCertificate,
    pub lemma: LemmaReport,
    pub signature: InstanceSignature,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    pub degree: usize,
    pub cycle_shape: Vec<usize>,
    pub sigma: String,
    pub tau: String,
    pub swap: String,
    pub h: String,
    pub k: String,
    pub certificate: CertificateSummary,
    pub lemma_holds: bool,
    pub realizability: &'static str,
}

impl SearchInstance {
    pub fn record(&self) -> SearchRecord {
        SearchRecord {
            degree: self.sigma.degree(),
            cycle_shape: self.cycle_shape.clone(),
            sigma: self.sigma.to_string(),
            tau: self.tau.to_string(),
            swap: self.swap.to_string(),
            h: self.certificate.c1_rep.to_string(),
            k: self.certificate.c2_rep.to_string(),
            certificate: self.certificate.summary(),
            lemma_holds: self.lemma.holds(),
            realizability: "group-theoretic instance only",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_degree: usize,
    pub max_group_order: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_degree: DEFAULT_SEARCH_DEGREE_CAP,
            max_group_order: DEFAULT_SEARCH_ORDER_CAP,
        }
    }
}

/// Partitions of integers up to `max_sum` into parts ≥ 2, parts descending.
fn cycle_shapes(max_sum: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for part in (2..=max_part.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_sum, max_sum, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn shape_order(shape: &[usize]) -> u64 {
    shape.iter().fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
}

/// Searches `S_n` for pairs `σ, τ` of equal cycle shape, disjoint supports and
/// order divisible by 4, testing `H = ⟨σ²⟩`, `K = ⟨τ⟩`, `h = σ²`, `k = τ²`
/// inside `G⁺ = ⟨σ, τ, swap⟩`, where `swap` exchanges the two supports cycle
/// by cycle so that `swap·σ·swap = τ`.
pub fn search_sn_instances(
    n: usize,
    max_elem_order: u64,
) -> Result<Vec<SearchInstance>, CriteriaError> {
    search_sn_instances_with(n, max_elem_order, SearchConfig::default())
}

pub fn search_sn_instances_with(
    n: usize,
    max_elem_order: u64,
    config: SearchConfig,
) -> Result<Vec<SearchInstance>, CriteriaError> {
    if n > config.max_degree {
        return Err(CriteriaError::DegreeCap(n, config.max_degree));
    }
    let shapes: Vec<Vec<usize>> = cycle_shapes(n / 2)
        .into_iter()
        .filter(|s| {
            let o = shape_order(s);
            o % 4 == 0 && o <= max_elem_order
        })
        .collect();

    let found: Vec<Option<SearchInstance>> = shapes
        .par_iter()
        .map(|shape| build_instance(n, shape, config.max_group_order))
        .collect::<Result<_, _>>()?;

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for inst in found.into_iter().flatten() {
        if seen.insert(inst.signature.clone()) {
            out.push(inst);
        }
    }
    Ok(out)
}

fn build_instance(
    n: usize,
    shape: &[usize],
    order_cap: usize,
) -> Result<Option<SearchInstance>, CriteriaError> {
    let support: usize = shape.iter().sum();
    let mut sigma_cycles = Vec::new();
    let mut tau_cycles = Vec::new();
    let mut swap_cycles = Vec::new();
    let mut start = 0;
    for &len in shape {
        sigma_cycles.push((start..start + len).collect::<Vec<_>>());
        tau_cycles.push((support + start..support + start + len).collect::<Vec<_>>());
        start += len;
    }
    for i in 0..support {
        swap_cycles.push(vec![i, support + i]);
    }
    let sigma = Permutation::from_cycles(n, &sigma_cycles)?;
    let tau = Permutation::from_cycles(n, &tau_cycles)?;
    let swap = Permutation::from_cycles(n, &swap_cycles)?;
    debug_assert_eq!(swap.compose_unchecked(&sigma).compose_unchecked(&swap), tau);

    let ambient = match PermutationGroup::generate_with_cap(
        n,
        &[sigma.clone(), tau.clone(), swap.clone()],
        order_cap,
    ) {
        Ok(g) => Arc::new(g),
        Err(GroupError::CapExceeded(_)) => {
            tracing::debug!(?shape, "ambient group exceeds order cap; skipped");
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let h = sigma.pow(2);
    let k = tau.pow(2);
    let h_group = PermutationGroup::generate(n, &[h.clone()])?;
    let k_group = PermutationGroup::generate(n, std::slice::from_ref(&tau))?;
    let lemma = check_lemma_criterion(&ambient, &h_group, &k_group, &h, &k)?;

    let sub = Arc::new(PermutationGroup::generate(n, &[h.clone(), tau.clone()])?);
    let c1 = sub.class_of_perm(&h).expect("h ∈ G");
    let c2 = sub.class_of_perm(&k).expect("k ∈ G");
    let embedding = SubgroupEmbedding::new(ambient.clone(), sub.clone())?;
    let certificate = check_theorem(&embedding, c1, c2)?;
    let signature = InstanceSignature {
        ambient_order: ambient.order(),
        sub_order: sub.order(),
        c1_cycle_type: h.cycle_type(),
        c2_cycle_type: k.cycle_type(),
        r_gap: certificate.r_gap(),
    };
    Ok(Some(SearchInstance {
        cycle_shape: shape.to_vec(),
        sigma,
        tau,
        swap,
        certificate,
        lemma,
        signature,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_example_certificate() {
        let ex = build_standard_example();
        assert_eq!(ex.embedding.ambient().order(), 32);
        assert_eq!(ex.embedding.index(), 4);
        let cert = check_theorem(&ex.embedding, ex.c1, ex.c2).unwrap();
        assert!(cert.is_valid());
        assert_eq!((cert.r1, cert.r2), (0, 4));
        assert_eq!(cert.predicted_normalized_limit, BigRational::new(1.into(), 2.into()));
        let gsg = ex.gamma.compose(&ex.sigma).unwrap().compose(&ex.gamma).unwrap();
        assert!(ex.embedding.ambient().contains(&gsg));
        assert_eq!(gsg, Permutation::parse("(1324)", 8).unwrap());
    }

    #[test]
    fn same_class_and_swapped_classes_are_invalid() {
        let ex = build_standard_example();
        let same = check_theorem(&ex.embedding, ex.c1, ex.c1).unwrap();
        assert!(!same.is_valid());
        let swapped = check_theorem(&ex.embedding, ex.c2, ex.c1).unwrap();
        assert!(swapped.fused);
        assert!(!swapped.is_valid());
        assert_eq!(swapped.r_gap(), -4);
        assert!(check_theorem(&ex.embedding, 99, 0).is_err());
    }

    #[test]
    fn lemma_criterion_on_wreath_fixture() {
        let p = |s: &str| Permutation::parse(s, 8).unwrap();
        let amb = PermutationGroup::generate(8, &[p("(1234)"), p("(5678)"), p("(15)(26)(37)(48)")]).unwrap();
        let h_group = PermutationGroup::generate(8, &[p("(13)(24)")]).unwrap();
        let k_group = PermutationGroup::generate(8, &[p("(5678)")]).unwrap();
        let rep = check_lemma_criterion(&amb, &h_group, &k_group, &p("(13)(24)"), &p("(57)(68)")).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.product_order, 8);
        // k has two square roots in K, H has two involutions (incl. identity)
        assert_eq!(rep.roots_of_k_in_g, 4);
        assert_eq!(rep.roots_of_h_in_g, 0);

        let id = Permutation::identity(8);
        let rep = check_lemma_criterion(&amb, &h_group, &k_group, &id, &p("(57)(68)")).unwrap();
        assert!(!rep.holds());
        assert!(!rep.h_nonsquare_in_h);

        assert_eq!(
            check_lemma_criterion(&amb, &k_group, &k_group, &p("(57)(68)"), &p("(57)(68)")).unwrap_err(),
            CriteriaError::NontrivialIntersection
        );
    }

    #[test]
    fn lemma_rejects_non_centralizing() {
        let p = |s: &str| Permutation::parse(s, 4).unwrap();
        let s4 = PermutationGroup::generate(4, &[p("(12)"), p("(1234)")]).unwrap();
        let h = PermutationGroup::generate(4, &[p("(12)")]).unwrap();
        let k = PermutationGroup::generate(4, &[p("(23)")]).unwrap();
        assert_eq!(
            check_lemma_criterion(&s4, &h, &k, &p("(12)"), &p("(23)")).unwrap_err(),
            CriteriaError::NotCentralizing
        );
    }

    #[test]
    fn shapes_are_partitions_with_parts_at_least_two() {
        let shapes = cycle_shapes(6);
        assert!(shapes.contains(&vec![4, 2]));
        assert!(shapes.contains(&vec![2, 2, 2]));
        assert!(shapes.iter().all(|s| s.iter().all(|&p| p >= 2) && s.iter().sum::<usize>() <= 6));
    }

    #[test]
    fn search_small_degrees() {
        assert!(search_sn_instances(7, 64).unwrap().is_empty());
        let found = search_sn_instances(8, 64).unwrap();
        assert_eq!(found.len(), 1);
        let sig = &found[0].signature;
        assert_eq!((sig.ambient_order, sig.sub_order, sig.r_gap), (32, 8, 4));
        assert!(matches!(search_sn_instances(13, 64), Err(CriteriaError::DegreeCap(13, 12))));
    }
}
