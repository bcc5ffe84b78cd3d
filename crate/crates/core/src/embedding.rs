use std::sync::Arc;

use thiserror::Error;

use crate::permgroup::PermutationGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("subgroup of degree {sub} does not match ambient degree {ambient}")]
    DegreeMismatch { ambient: usize, sub: usize },
    #[error("not a subgroup: {0} is not an element of the ambient group")]
    NotASubgroup(String),
}

/// A subgroup `G` of an ambient group `G⁺` together with coset bookkeeping.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    ambient: Arc<PermutationGroup>,
    sub: Arc<PermutationGroup>,
    /// Left coset representatives `a` of `aG`, found by a greedy sweep.
    coset_reps: Vec<usize>,
    /// For every ambient element `x`, the id of its right coset `Gx`.
    right_coset_of: Vec<usize>,
    /// One representative per right coset, indexed by right coset id.
    right_reps: Vec<usize>,
    /// Ambient index of every element of `sub`, in `sub` order.
    sub_in_ambient: Vec<usize>,
    /// For every ambient element, its index in `sub` if it lies there.
    ambient_in_sub: Vec<Option<usize>>,
}

impl SubgroupEmbedding {
    pub fn new(
        ambient: Arc<PermutationGroup>,
        sub: Arc<PermutationGroup>,
    ) -> Result<Self, EmbeddingError> {
        if ambient.degree() != sub.degree() {
            return Err(EmbeddingError::DegreeMismatch {
                ambient: ambient.degree(),
                sub: sub.degree(),
            });
        }
        let mut sub_in_ambient = Vec::with_capacity(sub.order());
        let mut ambient_in_sub = vec![None; ambient.order()];
        for (i, p) in sub.elements().iter().enumerate() {
            let a = ambient
                .index_of(p)
                .ok_or_else(|| EmbeddingError::NotASubgroup(p.to_string()))?;
            sub_in_ambient.push(a);
            ambient_in_sub[a] = Some(i);
        }

        let n = ambient.order();
        let mut left_seen = vec![false; n];
        let mut coset_reps = Vec::new();
        for a in 0..n {
            if left_seen[a] {
                continue;
            }
            coset_reps.push(a);
            for &s in &sub_in_ambient {
                left_seen[ambient.mul(a, s)] = true;
            }
        }

        let mut right_coset_of = vec![usize::MAX; n];
        let mut right_reps = Vec::new();
        for x in 0..n {
            if right_coset_of[x] != usize::MAX {
                continue;
            }
            let id = right_reps.len();
            right_reps.push(x);
            for &s in &sub_in_ambient {
                right_coset_of[ambient.mul(s, x)] = id;
            }
        }

        Ok(SubgroupEmbedding {
            ambient,
            sub,
            coset_reps,
            right_coset_of,
            right_reps,
            sub_in_ambient,
            ambient_in_sub,
        })
    }

    pub fn ambient(&self) -> &Arc<PermutationGroup> {
        &self.ambient
    }

    pub fn sub(&self) -> &Arc<PermutationGroup> {
        &self.sub
    }

    /// Left coset representatives (ambient indices).
    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    pub fn right_coset_reps(&self) -> &[usize] {
        &self.right_reps
    }

    pub fn right_coset_of(&self, x: usize) -> usize {
        self.right_coset_of[x]
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    /// Ambient index of the `i`-th element of the subgroup.
    pub fn lift(&self, sub_element: usize) -> usize {
        self.sub_in_ambient[sub_element]
    }

    /// Subgroup index of an ambient element, if it lies in the subgroup.
    pub fn restrict(&self, ambient_element: usize) -> Option<usize> {
        self.ambient_in_sub[ambient_element]
    }
}
