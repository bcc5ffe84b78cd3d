//! How a rational prime with Frobenius `σ ∈ G⁺` splits in `K = L^G`.
//!
//! Primes of `K` above `p` correspond to orbits of `⟨σ⟩` acting by right
//! multiplication on the right cosets `Gτ`. An orbit of length `f` gives a
//! prime of residue degree `f` whose Frobenius in `G` is the class of
//! `τ σ^f τ⁻¹`.

use thiserror::Error;

use crate::classfn::{induce, ClassFnError, ClassFunction};
use crate::embedding::SubgroupEmbedding;
use crate::permgroup::Permutation;
use crate::scalar::ClassValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("{0} is not an element of the ambient group")]
    NotInAmbient(String),
    #[error(transparent)]
    ClassFn(#[from] ClassFnError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitEntry {
    /// Class id in `G`.
    pub class_id: usize,
    /// Residue degree `f`, so the prime has norm `p^f`.
    pub residue_degree: u32,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SplittingPattern {
    /// Sorted by `(residue_degree, class_id)`.
    pub entries: Vec<SplitEntry>,
}

impl SplittingPattern {
    /// `Σ f · multiplicity`, which equals `[G⁺:G]`.
    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|e| e.residue_degree * e.multiplicity).sum()
    }

    pub fn num_primes(&self) -> u32 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

pub fn split_prime(sigma: usize, emb: &SubgroupEmbedding) -> SplittingPattern {
    let amb = emb.ambient();
    let sub = emb.sub();
    let ncos = emb.index();
    let mut visited = vec![false; ncos];
    let mut raw: Vec<(u32, usize)> = Vec::new();
    for coset in 0..ncos {
        if visited[coset] {
            continue;
        }
        let tau = emb.right_coset_reps()[coset];
        let mut x = tau;
        let mut f = 0u32;
        loop {
            x = amb.mul(x, sigma);
            f += 1;
            let c = emb.right_coset_of(x);
            visited[c] = true;
            if c == coset {
                break;
            }
        }
        // x = τσ^f and Gx = Gτ, so τσ^fτ⁻¹ lies in G
        let y = amb.mul(x, amb.inv(tau));
        let ys = emb.restrict(y).expect("τσ^fτ⁻¹ ∈ G by orbit closure");
        raw.push((f, sub.class_of(ys)));
    }
    raw.sort_unstable();
    let mut entries: Vec<SplitEntry> = Vec::new();
    for (f, class_id) in raw {
        match entries.last_mut() {
            Some(e) if e.residue_degree == f && e.class_id == class_id => e.multiplicity += 1,
            _ => entries.push(SplitEntry {
                class_id,
                residue_degree: f,
                multiplicity: 1,
            }),
        }
    }
    SplittingPattern { entries }
}

pub fn split_prime_perm(
    sigma: &Permutation,
    emb: &SubgroupEmbedding,
) -> Result<SplittingPattern, TransferError> {
    let idx = emb
        .ambient()
        .index_of(sigma)
        .ok_or_else(|| TransferError::NotInAmbient(sigma.to_string()))?;
    Ok(split_prime(idx, emb))
}

/// Splitting patterns for every conjugacy class of `G⁺`, computed once.
#[derive(Clone, Debug)]
pub struct PatternTable {
    patterns: Vec<SplittingPattern>,
}

impl PatternTable {
    pub fn new(emb: &SubgroupEmbedding) -> Self {
        let amb = emb.ambient();
        let patterns = amb
            .classes()
            .iter()
            .map(|c| split_prime(c.representative, emb))
            .collect();
        PatternTable { patterns }
    }

    /// Pattern for an ambient class id.
    pub fn for_class(&self, ambient_class: usize) -> &SplittingPattern {
        &self.patterns[ambient_class]
    }

    pub fn patterns(&self) -> &[SplittingPattern] {
        &self.patterns
    }
}

/// `Σ_{entries, f | m} f · mult · t(c^{m/f})`: the weight a prime with the
/// given pattern contributes to `ψ` at level `p^m`, in units of `log p`.
pub fn ideal_side_weight<S: ClassValue>(
    pattern: &SplittingPattern,
    t: &ClassFunction<S>,
    m: u64,
) -> S {
    let sub = t.group();
    let mut acc = S::zero();
    for e in &pattern.entries {
        let f = e.residue_degree as u64;
        if m % f != 0 {
            continue;
        }
        let rep = sub.classes()[e.class_id].representative;
        let v = t.eval(sub.pow(rep, m / f)).clone();
        acc = acc + v * S::from_i64((f * e.multiplicity as u64) as i64);
    }
    acc
}

/// Exact check of `Σ_{f | m} f · mult · t(c^{m/f}) = t⁺(σ^m)`.
pub fn transfer_identity_check<S: ClassValue>(
    emb: &SubgroupEmbedding,
    t: &ClassFunction<S>,
    sigma: usize,
    m: u64,
) -> Result<bool, TransferError> {
    let t_plus = induce(t, emb)?;
    Ok(TransferChecker { emb, t, t_plus }.check(sigma, m))
}

/// Reuses one induced function across many `(σ, m)` checks.
pub struct TransferChecker<'a, S> {
    pub emb: &'a SubgroupEmbedding,
    pub t: &'a ClassFunction<S>,
    pub t_plus: ClassFunction<S>,
}

impl<'a, S: ClassValue> TransferChecker<'a, S> {
    pub fn new(emb: &'a SubgroupEmbedding, t: &'a ClassFunction<S>) -> Result<Self, TransferError> {
        let t_plus = induce(t, emb)?;
        Ok(TransferChecker { emb, t, t_plus })
    }

    pub fn check(&self, sigma: usize, m: u64) -> bool {
        self.check_levels(sigma, m..=m)
    }

    /// The identity at every level in `levels`, splitting `σ` only once.
    pub fn check_levels(&self, sigma: usize, levels: impl IntoIterator<Item = u64>) -> bool {
        let pattern = split_prime(sigma, self.emb);
        let amb = self.emb.ambient();
        levels.into_iter().all(|m| {
            let lhs = ideal_side_weight(&pattern, self.t, m);
            lhs == *self.t_plus.eval(amb.pow(sigma, m))
        })
    }
}
