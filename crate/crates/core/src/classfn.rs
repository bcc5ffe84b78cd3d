//! Class functions, root-counting functions, induction and abelian characters.

use std::sync::Arc;

use thiserror::Error;

use crate::embedding::SubgroupEmbedding;
use crate::permgroup::PermutationGroup;
use crate::scalar::{unit_power, ClassValue, HasImaginaryUnit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFnError {
    #[error("class functions live on different groups")]
    GroupMismatch,
    #[error("expected {expected} class values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group exponent {0} does not divide 4; characters need higher roots of unity")]
    ExponentTooLarge(u64),
    #[error("power must be at least 1")]
    ZeroPower,
}

/// A function on a permutation group that is constant on conjugacy classes,
/// stored as one value per class (in the group's class order).
#[derive(Clone, Debug)]
pub struct ClassFunction<S> {
    group: Arc<PermutationGroup>,
    values: Vec<S>,
}

impl<S: PartialEq> PartialEq for ClassFunction<S> {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

fn same_group(a: &Arc<PermutationGroup>, b: &Arc<PermutationGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<S: ClassValue> ClassFunction<S> {
    pub fn new(group: Arc<PermutationGroup>, values: Vec<S>) -> Result<Self, ClassFnError> {
        if values.len() != group.num_classes() {
            return Err(ClassFnError::WrongLength {
                expected: group.num_classes(),
                got: values.len(),
            });
        }
        Ok(ClassFunction { group, values })
    }

    pub fn constant(group: Arc<PermutationGroup>, v: S) -> Self {
        let values = vec![v; group.num_classes()];
        ClassFunction { group, values }
    }

    pub fn zero(group: Arc<PermutationGroup>) -> Self {
        Self::constant(group, S::zero())
    }

    /// `1_C` for the class with the given id.
    pub fn indicator(group: Arc<PermutationGroup>, class: usize) -> Self {
        let mut values = vec![S::zero(); group.num_classes()];
        values[class] = S::one();
        ClassFunction { group, values }
    }

    /// Builds a class function by evaluating `f` at each class representative.
    pub fn from_representatives(group: Arc<PermutationGroup>, f: impl Fn(usize) -> S) -> Self {
        let values = group.classes().iter().map(|c| f(c.representative)).collect();
        ClassFunction { group, values }
    }

    /// `t_{C₁,C₂} = (|G|/|C₁|)·1_{C₁} − (|G|/|C₂|)·1_{C₂}`.
    pub fn bias_function(group: Arc<PermutationGroup>, c1: usize, c2: usize) -> Self {
        let n = group.order() as i64;
        let w1 = S::from_i64(n).div_int(group.classes()[c1].len() as u64);
        let w2 = S::from_i64(n).div_int(group.classes()[c2].len() as u64);
        let mut values = vec![S::zero(); group.num_classes()];
        values[c1] = values[c1].clone() + w1;
        values[c2] = values[c2].clone() - w2;
        ClassFunction { group, values }
    }

    pub fn group(&self) -> &Arc<PermutationGroup> {
        &self.group
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value_on_class(&self, class: usize) -> &S {
        &self.values[class]
    }

    /// Value at an element, addressed by its index in the group.
    pub fn eval(&self, element: usize) -> &S {
        &self.values[self.group.class_of(element)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| c.clone() * v.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ClassFnError> {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ClassFnError> {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, ClassFnError> {
        if !same_group(&self.group, &other.group) {
            return Err(ClassFnError::GroupMismatch);
        }
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }
}

/// `r_G(g) = #{h ∈ G : h² = g}`.
pub fn square_root_count<S: ClassValue>(group: &Arc<PermutationGroup>) -> ClassFunction<S> {
    power_root_count(group, 2).expect("power 2 is positive")
}

/// `r_m(g) = #{h ∈ G : h^m = g}`.
pub fn power_root_count<S: ClassValue>(
    group: &Arc<PermutationGroup>,
    m: u64,
) -> Result<ClassFunction<S>, ClassFnError> {
    if m == 0 {
        return Err(ClassFnError::ZeroPower);
    }
    let mut counts = vec![0i64; group.order()];
    for h in 0..group.order() {
        counts[group.pow(h, m)] += 1;
    }
    Ok(ClassFunction::from_representatives(group.clone(), |rep| {
        S::from_i64(counts[rep])
    }))
}

/// `g ↦ t(g^m)`.
pub fn power_twist<S: ClassValue>(t: &ClassFunction<S>, m: u64) -> Result<ClassFunction<S>, ClassFnError> {
    if m == 0 {
        return Err(ClassFnError::ZeroPower);
    }
    let g = t.group();
    Ok(ClassFunction::from_representatives(g.clone(), |rep| {
        t.eval(g.pow(rep, m)).clone()
    }))
}

/// `⟨t₁, t₂⟩ = (1/|G|) Σ_g t₁(g)·conj(t₂(g))`, computed class by class.
pub fn inner_product<S: ClassValue>(
    t1: &ClassFunction<S>,
    t2: &ClassFunction<S>,
) -> Result<S, ClassFnError> {
    if !same_group(&t1.group, &t2.group) {
        return Err(ClassFnError::GroupMismatch);
    }
    let g = &t1.group;
    let mut acc = S::zero();
    for (cid, class) in g.classes().iter().enumerate() {
        let term = t1.values[cid].clone() * t2.values[cid].conj();
        acc = acc + term * S::from_i64(class.len() as i64);
    }
    Ok(acc.div_int(g.order() as u64))
}

/// `(1/|G|) Σ_g t(g²)`, summed element by element.
pub fn mean_of_square_twist<S: ClassValue>(t: &ClassFunction<S>) -> S {
    let g = t.group();
    let mut acc = S::zero();
    for x in 0..g.order() {
        acc = acc + t.eval(g.pow(x, 2)).clone();
    }
    acc.div_int(g.order() as u64)
}

/// Induction from `G` to `G⁺`:
/// `t⁺(g) = Σ_{a ∈ G⁺/G, a⁻¹ga ∈ G} t(a⁻¹ga)` over left coset representatives `a`.
pub fn induce<S: ClassValue>(
    t: &ClassFunction<S>,
    emb: &SubgroupEmbedding,
) -> Result<ClassFunction<S>, ClassFnError> {
    if !same_group(t.group(), emb.sub()) {
        return Err(ClassFnError::GroupMismatch);
    }
    let amb = emb.ambient();
    let sub = emb.sub();
    let reps: Vec<usize> = emb.coset_reps().to_vec();
    let inv: Vec<usize> = reps.iter().map(|&a| amb.inv(a)).collect();
    Ok(ClassFunction::from_representatives(amb.clone(), |g| {
        let mut acc = S::zero();
        for &ainv in &inv {
            let y = amb.conj(ainv, g);
            if let Some(ys) = emb.restrict(y) {
                acc = acc + t.values[sub.class_of(ys)].clone();
            }
        }
        acc
    }))
}

/// The class of `G⁺` containing the class `class` of `G`.
pub fn class_plus(class: usize, emb: &SubgroupEmbedding) -> usize {
    let rep = emb.sub().classes()[class].representative;
    emb.ambient().class_of(emb.lift(rep))
}

/// A cyclic decomposition of an abelian group: generator indices and orders.
///
/// Built greedily: at each step take the element of largest order modulo the
/// span so far, then pick a lift in its coset whose order matches.
pub fn cyclic_decomposition(group: &PermutationGroup) -> Result<Vec<(usize, u64)>, ClassFnError> {
    if !group.is_abelian() {
        return Err(ClassFnError::NotAbelian);
    }
    let n = group.order();
    let mut in_span = vec![false; n];
    in_span[group.identity_index()] = true;
    let mut span = vec![group.identity_index()];
    let mut basis = Vec::new();
    while span.len() < n {
        let quotient_order = |x: usize| -> u64 {
            let mut k = 1;
            let mut y = x;
            while !in_span[y] {
                y = group.mul(y, x);
                k += 1;
            }
            k
        };
        let (best, q) = (0..n)
            .filter(|&x| !in_span[x])
            .map(|x| (x, quotient_order(x)))
            .fold((usize::MAX, 0u64), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let lift = span
            .iter()
            .map(|&s| group.mul(best, s))
            .find(|&y| group.pow(y, q) == group.identity_index())
            .expect("a maximal-order cyclic factor always splits off in an abelian group");
        let mut next = span.clone();
        let mut power = lift;
        for _ in 1..q {
            for &s in &span {
                let y = group.mul(power, s);
                if !in_span[y] {
                    in_span[y] = true;
                    next.push(y);
                }
            }
            power = group.mul(power, lift);
        }
        span = next;
        basis.push((lift, q));
    }
    Ok(basis)
}

/// All irreducible characters of an abelian group of exponent dividing 4,
/// with values in `{±1, ±i}`.
pub fn abelian_characters<S: HasImaginaryUnit>(
    group: &Arc<PermutationGroup>,
) -> Result<Vec<ClassFunction<S>>, ClassFnError> {
    if !group.is_abelian() {
        return Err(ClassFnError::NotAbelian);
    }
    let exp = group.exponent();
    if 4 % exp != 0 {
        return Err(ClassFnError::ExponentTooLarge(exp));
    }
    let basis = cyclic_decomposition(group)?;

    // coordinates of every element in the basis
    let mut coords: Vec<Vec<u64>> = vec![Vec::new(); group.order()];
    let mut exps = vec![0u64; basis.len()];
    loop {
        let mut x = group.identity_index();
        for (j, &(b, _)) in basis.iter().enumerate() {
            x = group.mul(x, group.pow(b, exps[j]));
        }
        coords[x] = exps.clone();
        if !advance(&mut exps, &basis) {
            break;
        }
    }

    let mut chars = Vec::new();
    let mut ks = vec![0u64; basis.len()];
    loop {
        let values = group
            .classes()
            .iter()
            .map(|c| {
                let e = &coords[c.representative];
                let k: u64 = basis
                    .iter()
                    .enumerate()
                    .map(|(j, &(_, ord))| (4 / ord) * ks[j] * e[j])
                    .sum();
                unit_power::<S>(k)
            })
            .collect();
        chars.push(ClassFunction {
            group: group.clone(),
            values,
        });
        if !advance(&mut ks, &basis) {
            break;
        }
    }
    Ok(chars)
}

fn advance(digits: &mut [u64], basis: &[(usize, u64)]) -> bool {
    for (d, &(_, ord)) in digits.iter_mut().zip(basis) {
        *d += 1;
        if *d < ord {
            return true;
        }
        *d = 0;
    }
    false
}

/// `⟨χ, t⟩` for every character, paired with its complex conjugate.
pub fn character_coefficients<S: ClassValue>(
    chars: &[ClassFunction<S>],
    t: &ClassFunction<S>,
) -> Result<Vec<(S, S)>, ClassFnError> {
    chars
        .iter()
        .map(|chi| inner_product(chi, t).map(|v| {
            let c = v.conj();
            (v, c)
        }))
        .collect()
}
