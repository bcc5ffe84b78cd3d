//! Cyclotomic fields `ℚ(ζ_m)` as self-generated field data, plus the closed
//! form `Frob_p = (x ↦ x^{p mod m})` as an independent oracle.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;

use super::field::NumberFieldData;
use super::poly::{cyclotomic_poly, RatPoly};
use super::{FieldError, FrobeniusOracle, OracleError};
use crate::permgroup::{Permutation, PermutationGroup};

pub const MAX_CYCLOTOMIC_CONDUCTOR: u64 = 10_000;

/// Which cyclotomic field, and which subgroup `G ≤ (ℤ/m)^×` to race over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSpec {
    pub m: u64,
    /// Residues generating `G`; `None` means all of `(ℤ/m)^×`.
    pub subgroup: Option<Vec<u64>>,
}

impl CyclotomicSpec {
    pub fn full(m: u64) -> Self {
        CyclotomicSpec { m, subgroup: None }
    }
}

pub fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|a| a.gcd(&m) == 1).collect()
}

fn unit_perm(a: u64, m: u64, units: &[u64]) -> Permutation {
    let images = units
        .iter()
        .map(|&u| units.binary_search(&(a * u % m)).expect("unit times unit is a unit") as u32)
        .collect();
    Permutation::from_images(images).expect("multiplication by a unit is a bijection")
}

/// Greedy generating set: walk residues upward, keep those outside the span so far.
fn generating_residues(m: u64, pool: &[u64]) -> Vec<u64> {
    let mut span: BTreeSet<u64> = BTreeSet::from([1 % m]);
    let mut gens = Vec::new();
    for &a in pool {
        if span.contains(&a) {
            continue;
        }
        gens.push(a);
        let mut frontier: Vec<u64> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % m;
                if span.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

pub fn cyclotomic_field_data(m: u64) -> Result<NumberFieldData, FieldError> {
    cyclotomic_field_data_with(&CyclotomicSpec::full(m))
}

pub fn cyclotomic_field_data_with(spec: &CyclotomicSpec) -> Result<NumberFieldData, FieldError> {
    let m = spec.m;
    if !(3..=MAX_CYCLOTOMIC_CONDUCTOR).contains(&m) {
        return Err(FieldError::Invalid(format!(
            "conductor {m} outside 3..={MAX_CYCLOTOMIC_CONDUCTOR}"
        )));
    }
    let phi = cyclotomic_poly(m);
    let us = units(m);
    let powers = phi.powers_of_x_mod(m as usize - 1);
    let automorphisms = us.iter().map(|&a| RatPoly::from_int_coeffs(powers[a as usize].clone())).collect();
    let perm_map: Vec<Permutation> = us.iter().map(|&a| unit_perm(a, m, &us)).collect();

    let ambient_gens: Vec<Permutation> =
        generating_residues(m, &us).iter().map(|&a| unit_perm(a, m, &us)).collect();
    let sub_residues: Vec<u64> = match &spec.subgroup {
        None => us.clone(),
        Some(rs) => {
            for &r in rs {
                if r.gcd(&m) != 1 {
                    return Err(FieldError::Invalid(format!("{r} is not a unit mod {m}")));
                }
            }
            rs.iter().map(|r| r % m).collect()
        }
    };
    let sub_gen_residues = generating_residues(m, &sub_residues);
    let sub_gens: Vec<Permutation> = sub_gen_residues.iter().map(|&a| unit_perm(a, m, &us)).collect();
    let identity = Permutation::identity(us.len());
    let c2 = sub_gen_residues
        .first()
        .map(|&a| unit_perm(a, m, &us))
        .unwrap_or_else(|| identity.clone());
    let excluded: BTreeSet<u64> = (2..=m).filter(|&q| m % q == 0 && super::field::is_prime_u64(q)).collect();

    let mut fd = NumberFieldData::new(
        format!("cyclotomic{m}"),
        phi,
        automorphisms,
        perm_map,
        excluded,
        &ambient_gens,
        &sub_gens,
        &identity,
        &c2,
    )?;
    fd.checksum = super::field::poly_checksum(
        &fd.poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    );
    Ok(fd)
}

/// `Frob_p` read off from `p mod m`, sharing the group of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct CyclotomicClosedForm {
    m: u64,
    units: Vec<u64>,
    ambient: Arc<PermutationGroup>,
}

impl CyclotomicClosedForm {
    pub fn new(m: u64, fd: &NumberFieldData) -> Self {
        CyclotomicClosedForm {
            m,
            units: units(m),
            ambient: fd.ambient().clone(),
        }
    }

    pub fn permutation_for(&self, p: u64) -> Permutation {
        unit_perm(p % self.m, self.m, &self.units)
    }
}

impl FrobeniusOracle for CyclotomicClosedForm {
    fn ambient(&self) -> &Arc<PermutationGroup> {
        &self.ambient
    }

    fn is_excluded(&self, p: u64) -> bool {
        p == 2 || self.m % p == 0
    }

    fn excluded_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = (2..=self.m)
            .filter(|&q| self.m % q == 0 && super::field::is_prime_u64(q))
            .collect();
        if !v.contains(&2) {
            v.insert(0, 2);
        }
        v
    }

    fn frobenius(&self, p: u64) -> Result<usize, OracleError> {
        if self.is_excluded(p) {
            return Err(OracleError::Excluded(p));
        }
        Ok(self
            .ambient
            .index_of(&self.permutation_for(p))
            .expect("unit permutations form the ambient group"))
    }
}
