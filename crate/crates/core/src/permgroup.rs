//! Finite permutation groups, stored as explicit sorted element lists.
//!
//! Points are 0-based internally. Cycle notation on input and output is
//! 1-based, e.g. `(1 2)(3 4)`; single-digit points may be run together as in
//! `(12)(34)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default cap on the size of a generated group.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("not a permutation: {0}")]
    NotBijective(String),
    #[error("cannot parse cycle notation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("element is not in the group")]
    NotAnElement,
}

/// A bijection of `{0, …, n−1}`. `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(GroupError::NotBijective(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                let b = cyc[(i + 1) % cyc.len()];
                if a >= degree || b >= degree {
                    return Err(GroupError::NotBijective(format!("point out of range in {cycles:?}")));
                }
                if touched[a] {
                    return Err(GroupError::NotBijective(format!("point {} repeated", a + 1)));
                }
                touched[a] = true;
                images[a] = b as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation.
    pub fn parse(s: &str, degree: usize) -> Result<Self, GroupError> {
        let err = |reason: &str| GroupError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(err("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| err("unbalanced parenthesis"))?;
            let body = rest[1..close].trim();
            rest = rest[close + 1..].trim_start();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = if body.contains(|c: char| c.is_whitespace() || c == ',') {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .collect()
            } else {
                body.char_indices().map(|(i, c)| &body[i..i + c.len_utf8()]).collect()
            };
            let mut cyc = Vec::with_capacity(tokens.len());
            for t in tokens {
                let v: usize = t.parse().map_err(|_| err("non-numeric point"))?;
                if v == 0 || v > degree {
                    return Err(err("point outside 1..=degree"));
                }
                cyc.push(v - 1);
            }
            cycles.push(cyc);
        }
        Permutation::from_cycles(degree, &cycles).map_err(|e| err(&e.to_string()))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `(self ∘ other)(x) = self(other(x))`: `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, GroupError> {
        if self.degree() != other.degree() {
            return Err(GroupError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, m: u64) -> Permutation {
        let mut out = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                out = out.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        out
    }

    /// `a ∘ self ∘ a⁻¹`.
    pub fn conjugate_by(&self, a: &Permutation) -> Permutation {
        a.compose_unchecked(self).compose_unchecked(&a.inverse())
    }

    /// Disjoint cycles (0-based), each starting at its smallest point, fixed
    /// points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] || self.apply(i) == i {
                seen[i] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j);
                j = self.apply(j);
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths including fixed points, in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.apply(j);
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) != i).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// A conjugacy class: member element indices (ascending) and the canonical
/// representative, which is the member with the smallest image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A finite permutation group with its full, sorted element list.
///
/// Elements are addressed by their index in the sorted list; index 0 is
/// always the identity.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermutationGroup {}

impl PermutationGroup {
    /// Closure of `gens` under composition, capped at [`DEFAULT_GROUP_CAP`].
    pub fn generate(degree: usize, gens: &[Permutation]) -> Result<Self, GroupError> {
        Self::generate_with_cap(degree, gens, DEFAULT_GROUP_CAP)
    }

    pub fn generate_with_cap(
        degree: usize,
        gens: &[Permutation],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch(degree, g.degree()));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut elements = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.compose_unchecked(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
            elements.push(x);
        }
        Ok(Self::from_elements(degree, gens.to_vec(), elements))
    }

    /// Builds the group from a complete, closed element list.
    fn from_elements(degree: usize, generators: Vec<Permutation>, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut group = PermutationGroup {
            degree,
            generators,
            elements,
            index,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        group
    }

    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        // Conjugating by generators is enough to sweep out a full class.
        let conjugators: Vec<(Permutation, Permutation)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), g.inverse()))
            .collect();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            class_of[start] = cid;
            let mut members = vec![start];
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for (g, ginv) in &conjugators {
                    let y = g.compose_unchecked(&self.elements[x]).compose_unchecked(ginv);
                    let yi = self.index[&y];
                    if class_of[yi] == usize::MAX {
                        class_of[yi] = cid;
                        members.push(yi);
                        frontier.push(yi);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: start,
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_elements(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose_unchecked(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    pub fn pow(&self, a: usize, m: u64) -> usize {
        self.index[&self.elements[a].pow(m)]
    }

    /// Index of `a ∘ x ∘ a⁻¹`.
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.index[&self.elements[x].conjugate_by(&self.elements[a])]
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn class_of_perm(&self, p: &Permutation) -> Option<usize> {
        self.index_of(p).map(|i| self.class_of[i])
    }

    pub fn class_representative(&self, class: usize) -> &Permutation {
        &self.elements[self.classes[class].representative]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.elements.len()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .fold(1u64, |acc, p| num_integer::lcm(acc, p.order()))
    }

    /// Whether every element of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermutationGroup) -> bool {
        other.degree == self.degree && other.elements.iter().all(|p| self.contains(p))
    }

    /// Brute-force conjugacy test inside this group.
    pub fn are_conjugate(&self, x: &Permutation, y: &Permutation) -> bool {
        self.elements.iter().any(|a| &x.conjugate_by(a) == y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s, 8).unwrap()
    }

    #[test]
    fn parse_both_notations() {
        assert_eq!(p("(12)(34)"), p("(1 2)(3 4)"));
        assert_eq!(p("(1,2)(3,4)"), p("( 1 2 ) (3 4)"));
        assert_eq!(p("()"), Permutation::identity(8));
        let q = Permutation::parse("(10 11 12)", 12).unwrap();
        assert_eq!(q.apply(9), 10);
        assert_eq!(q.to_string(), "(10 11 12)");
    }

    #[test]
    fn parse_errors() {
        assert!(Permutation::parse("(19)", 8).is_err());
        assert!(Permutation::parse("(1 2", 8).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", 8).is_err());
        assert!(Permutation::parse("1 2", 8).is_err());
    }

    #[test]
    fn compose_examples() {
        let t = p("(12)");
        assert!(t.compose(&t).unwrap().is_identity());
        let gamma = p("(15)(27)(36)(48)");
        let sigma = p("(5678)");
        assert_eq!(gamma.compose(&sigma).unwrap().compose(&gamma).unwrap(), p("(1324)"));
        let prod = p("(12)(34)").compose(&sigma).unwrap();
        assert_eq!(prod.cycle_type(), vec![4, 2, 2]);
        assert!(Permutation::identity(3).compose(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = p("(12)");
        let b = p("(23)");
        // b sends 1 to 1, then a sends 1 to 2
        assert_eq!(a.compose(&b).unwrap().apply(0), 1);
        // b sends 2 to 3, a fixes 3
        assert_eq!(a.compose(&b).unwrap().apply(1), 2);
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(8).cycle_type(), vec![1; 8]);
        assert_eq!(p("(12)(34)").cycle_type(), vec![2, 2, 1, 1, 1, 1]);
        assert_eq!(p("(5678)").cycle_type(), vec![4, 1, 1, 1, 1]);
    }

    #[test]
    fn generate_examples() {
        let g = PermutationGroup::generate(8, &[p("(12)(34)"), p("(5678)")]).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(g.num_classes(), 8);
        let gp = PermutationGroup::generate(8, &[p("(12)(34)"), p("(5678)"), p("(15)(27)(36)(48)")]).unwrap();
        assert_eq!(gp.order(), 32);
        assert!(gp.are_conjugate(&p("(12)(34)"), &p("(57)(68)")));
        assert_eq!(gp.class_of_perm(&p("(12)(34)")), gp.class_of_perm(&p("(57)(68)")));
        let triv = PermutationGroup::generate(5, &[]).unwrap();
        assert_eq!(triv.order(), 1);
        assert!(PermutationGroup::generate(3, &[p("(12)")]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let s = |x: &str| Permutation::parse(x, 6).unwrap();
        let err = PermutationGroup::generate_with_cap(6, &[s("(12)"), s("(123456)")], 100).unwrap_err();
        assert_eq!(err, GroupError::CapExceeded(100));
    }

    #[test]
    fn s3_classes() {
        let s = |x: &str| Permutation::parse(x, 3).unwrap();
        let g = PermutationGroup::generate(3, &[s("(12)"), s("(123)")]).unwrap();
        let mut sizes: Vec<usize> = g.classes().iter().map(|c| c.len()).collect();
        assert_eq!(g.classes()[0].representative, 0);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        for c in g.classes() {
            let rep = &g.elements()[c.representative];
            assert!(c.members.iter().all(|&m| g.elements()[m] >= *rep));
        }
    }
}
