//! Number-field data files and the polynomial Frobenius oracle.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::modpoly::{Modulus, QuotientRing};
use super::poly::{IntPoly, RatPoly};
use super::{FieldError, FrobeniusOracle, OracleError};
use crate::embedding::SubgroupEmbedding;
use crate::permgroup::{Permutation, PermutationGroup};

/// On-disk form of a number field, one JSON document per field.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldFile {
    pub name: String,
    pub degree: usize,
    /// Coefficients of the defining polynomial, ascending, as decimal strings.
    pub poly: Vec<String>,
    pub automorphisms: Vec<AutomorphismEntry>,
    pub group: GroupBlock,
    pub subgroup_generators: Vec<String>,
    pub class1_rep: String,
    pub class2_rep: String,
    pub excluded_primes: Vec<u64>,
    pub poly_checksum: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AutomorphismEntry {
    /// Ascending coefficients as `num/den` strings.
    pub coeffs: Vec<String>,
    /// Image in the permutation representation, 1-based cycle notation.
    pub perm: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupBlock {
    pub degree: usize,
    pub generators: Vec<String>,
}

/// SHA-256 over the comma-joined decimal coefficient strings.
pub fn poly_checksum(coeffs: &[String]) -> String {
    let digest = Sha256::digest(coeffs.join(",").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_int(s: &str) -> Result<BigInt, FieldError> {
    s.trim()
        .parse()
        .map_err(|_| FieldError::Format(format!("bad integer {s:?}")))
}

fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(FieldError::Format(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A Galois number field `L = ℚ[x]/(f)` with its automorphisms written as
/// polynomials `gᵢ` (so `gᵢ(α)` is a root of `f`) and their images in a
/// permutation group `G⁺`, plus the subgroup `G` and two classes to race.
#[derive(Debug)]
pub struct NumberFieldData {
    pub name: String,
    pub poly: IntPoly,
    pub automorphisms: Vec<RatPoly>,
    pub perm_map: Vec<Permutation>,
    pub excluded_primes: BTreeSet<u64>,
    pub embedding: SubgroupEmbedding,
    /// Class ids in `G`.
    pub class1: usize,
    pub class2: usize,
    pub checksum: String,
    /// Ambient index of each automorphism's permutation.
    perm_index: Vec<usize>,
    /// Automorphisms whose permutation is central, tested by exact equality.
    central: Vec<usize>,
    /// One automorphism per non-central ambient class, largest classes first.
    probes: Vec<usize>,
}

impl NumberFieldData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        poly: IntPoly,
        automorphisms: Vec<RatPoly>,
        perm_map: Vec<Permutation>,
        excluded_primes: BTreeSet<u64>,
        ambient_gens: &[Permutation],
        sub_gens: &[Permutation],
        class1_rep: &Permutation,
        class2_rep: &Permutation,
    ) -> Result<Self, FieldError> {
        if !poly.is_monic() || poly.degree() < 1 {
            return Err(FieldError::Invalid("defining polynomial must be monic of degree ≥ 1".into()));
        }
        if automorphisms.len() != poly.degree() || perm_map.len() != poly.degree() {
            return Err(FieldError::Invalid(format!(
                "degree {} but {} automorphisms and {} permutations",
                poly.degree(),
                automorphisms.len(),
                perm_map.len()
            )));
        }
        let degree = ambient_gens
            .first()
            .or(perm_map.first())
            .map(|p| p.degree())
            .unwrap_or(0);
        let ambient = Arc::new(PermutationGroup::generate(degree, ambient_gens)?);
        let sub = Arc::new(PermutationGroup::generate(degree, sub_gens)?);
        if ambient.order() != poly.degree() {
            return Err(FieldError::Invalid(format!(
                "|G⁺| = {} differs from field degree {}",
                ambient.order(),
                poly.degree()
            )));
        }
        let mut perm_index = Vec::with_capacity(perm_map.len());
        for p in &perm_map {
            perm_index.push(
                ambient
                    .index_of(p)
                    .ok_or_else(|| FieldError::Invalid(format!("permutation {p} not in G⁺")))?,
            );
        }
        let distinct: BTreeSet<usize> = perm_index.iter().copied().collect();
        if distinct.len() != perm_index.len() {
            return Err(FieldError::Invalid("permutation map is not injective".into()));
        }
        let embedding = SubgroupEmbedding::new(ambient.clone(), sub.clone())?;
        let class1 = sub
            .class_of_perm(class1_rep)
            .ok_or_else(|| FieldError::Invalid(format!("class1 rep {class1_rep} not in G")))?;
        let class2 = sub
            .class_of_perm(class2_rep)
            .ok_or_else(|| FieldError::Invalid(format!("class2 rep {class2_rep} not in G")))?;

        let mut central = Vec::new();
        let mut by_class: Vec<Option<usize>> = vec![None; ambient.num_classes()];
        for (i, &a) in perm_index.iter().enumerate() {
            let c = ambient.class_of(a);
            if ambient.classes()[c].len() == 1 {
                central.push(i);
            } else if by_class[c].is_none() {
                by_class[c] = Some(i);
            }
        }
        let mut probes: Vec<usize> = by_class.into_iter().flatten().collect();
        probes.sort_by_key(|&i| {
            let c = ambient.class_of(perm_index[i]);
            (std::cmp::Reverse(ambient.classes()[c].len()), c)
        });

        Ok(NumberFieldData {
            name,
            poly,
            automorphisms,
            perm_map,
            excluded_primes,
            embedding,
            class1,
            class2,
            checksum: String::new(),
            perm_index,
            central,
            probes,
        })
    }

    pub fn from_file_struct(file: &FieldFile) -> Result<Self, FieldError> {
        let checksum = poly_checksum(&file.poly);
        if checksum != file.poly_checksum {
            return Err(FieldError::Checksum {
                expected: file.poly_checksum.clone(),
                actual: checksum,
            });
        }
        let coeffs = file.poly.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>, _>>()?;
        let poly = IntPoly::new(coeffs);
        if poly.degree() != file.degree {
            return Err(FieldError::Invalid(format!(
                "declared degree {} but polynomial has degree {}",
                file.degree,
                poly.degree()
            )));
        }
        let gdeg = file.group.degree;
        let parse_perm = |s: &String| Permutation::parse(s, gdeg).map_err(FieldError::from);
        let mut automorphisms = Vec::new();
        let mut perm_map = Vec::new();
        for a in &file.automorphisms {
            let c = a.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            automorphisms.push(RatPoly::new(&c));
            perm_map.push(parse_perm(&a.perm)?);
        }
        let ambient_gens = file.group.generators.iter().map(parse_perm).collect::<Result<Vec<_>, _>>()?;
        let sub_gens = file.subgroup_generators.iter().map(parse_perm).collect::<Result<Vec<_>, _>>()?;
        let mut fd = NumberFieldData::new(
            file.name.clone(),
            poly,
            automorphisms,
            perm_map,
            file.excluded_primes.iter().copied().collect(),
            &ambient_gens,
            &sub_gens,
            &parse_perm(&file.class1_rep)?,
            &parse_perm(&file.class2_rep)?,
        )?;
        fd.checksum = checksum;
        Ok(fd)
    }

    pub fn load(path: &Path) -> Result<Self, FieldError> {
        let text = std::fs::read_to_string(path)?;
        let file: FieldFile = serde_json::from_str(&text)?;
        Self::from_file_struct(&file)
    }

    pub fn to_file_struct(&self) -> FieldFile {
        let poly: Vec<String> = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        let amb = self.embedding.ambient();
        let sub = self.embedding.sub();
        FieldFile {
            name: self.name.clone(),
            degree: self.poly.degree(),
            poly_checksum: poly_checksum(&poly),
            poly,
            automorphisms: self
                .automorphisms
                .iter()
                .zip(&self.perm_map)
                .map(|(a, p)| AutomorphismEntry {
                    coeffs: a.coeffs().iter().map(format_rational).collect(),
                    perm: p.to_string(),
                })
                .collect(),
            group: GroupBlock {
                degree: amb.degree(),
                generators: amb.generators().iter().map(|g| g.to_string()).collect(),
            },
            subgroup_generators: sub.generators().iter().map(|g| g.to_string()).collect(),
            class1_rep: sub.class_representative(self.class1).to_string(),
            class2_rep: sub.class_representative(self.class2).to_string(),
            excluded_primes: self.excluded_primes.iter().copied().collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), FieldError> {
        let text = serde_json::to_string_pretty(&self.to_file_struct())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn ambient(&self) -> &Arc<PermutationGroup> {
        self.embedding.ambient()
    }

    /// Ambient element index of automorphism `i`.
    pub fn automorphism_element(&self, i: usize) -> usize {
        self.perm_index[i]
    }

    /// A copy whose permutation map is conjugated by `a ∈ G⁺`, i.e. the same
    /// field with its roots relabeled. `G`, `C₁`, `C₂` stay as they are.
    pub fn relabeled(&self, a: &Permutation) -> Result<Self, FieldError> {
        let amb = self.embedding.ambient();
        let sub = self.embedding.sub();
        let perm_map = self.perm_map.iter().map(|p| p.conjugate_by(a)).collect();
        let mut fd = NumberFieldData::new(
            self.name.clone(),
            self.poly.clone(),
            self.automorphisms.clone(),
            perm_map,
            self.excluded_primes.clone(),
            amb.generators(),
            sub.generators(),
            sub.class_representative(self.class1),
            sub.class_representative(self.class2),
        )?;
        fd.checksum = self.checksum.clone();
        Ok(fd)
    }

    fn is_excluded(&self, p: u64) -> bool {
        p == 2 || self.excluded_primes.contains(&p)
    }

    fn ring(&self, p: u64) -> Result<QuotientRing, OracleError> {
        if self.is_excluded(p) {
            return Err(OracleError::Excluded(p));
        }
        if p >= 1 << 32 {
            return Err(OracleError::OutOfRange(p));
        }
        let md = Modulus::new(p);
        Ok(QuotientRing::new(md, self.poly.reduce_mod(&md)))
    }

    fn automorphism_mod(&self, i: usize, ring: &QuotientRing, p: u64) -> Result<Vec<u64>, OracleError> {
        let r = self.automorphisms[i]
            .reduce_mod(ring.modulus(), ring.degree())
            .ok_or(OracleError::DenominatorDivisible(p))?;
        Ok(ring.reduce_poly(&r))
    }

    /// Every automorphism `gᵢ` agreeing with `x^p` modulo some prime above
    /// `p`, i.e. with `gcd(f, gᵢ − x^p)` nontrivial mod `p`. For an
    /// unramified `p` this is exactly the Frobenius conjugacy class.
    pub fn frobenius_matches(&self, p: u64) -> Result<Vec<usize>, OracleError> {
        let ring = self.ring(p)?;
        if !ring.modulus_is_squarefree() {
            return Err(OracleError::NotSquarefree(p));
        }
        let xp = ring.pow_x(p);
        let md = *ring.modulus();
        let mut out = Vec::new();
        for i in 0..self.automorphisms.len() {
            let g = self.automorphism_mod(i, &ring, p)?;
            let diff: Vec<u64> = g.iter().zip(&xp).map(|(&a, &b)| md.sub(a, b)).collect();
            if ring.is_zero_divisor(&diff) {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Validates invariants at `samples` random primes in `[10⁶, 10⁷]`.
    pub fn validate(&self, samples: usize, seed: u64) -> ValidationReport {
        let mut report = ValidationReport::default();
        if let Err(msg) = self.validate_static() {
            report.failure = Some(msg);
            return report;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while report.primes.len() < samples {
            let q = rng.gen_range(1_000_000u64..10_000_000);
            if !is_prime_u64(q) || self.is_excluded(q) {
                continue;
            }
            report.primes.push(q);
            if let Err(msg) = self.validate_at(q) {
                report.failure = Some(msg);
                return report;
            }
        }
        report
    }

    fn validate_static(&self) -> Result<(), String> {
        let amb = self.embedding.ambient();
        if amb.order() != self.degree() {
            return Err(format!("|G⁺| = {} but degree is {}", amb.order(), self.degree()));
        }
        if self.degree() <= 64 {
            let mut rest = self.poly.discriminant_abs();
            for a in &self.automorphisms {
                rest *= a.denominator();
            }
            for &q in &self.excluded_primes {
                let qb = BigInt::from(q);
                while !rest.is_zero() && (&rest % &qb).is_zero() {
                    rest /= &qb;
                }
            }
            if !rest.is_one() {
                return Err(format!(
                    "discriminant or denominators have prime factors outside the excluded set (cofactor {rest})"
                ));
            }
        }
        Ok(())
    }

    fn validate_at(&self, q: u64) -> Result<(), String> {
        let ring = self.ring(q).map_err(|e| e.to_string())?;
        if !ring.modulus_is_squarefree() {
            return Err(format!("f is not squarefree mod {q}"));
        }
        let autos: Vec<Vec<u64>> = (0..self.automorphisms.len())
            .map(|i| self.automorphism_mod(i, &ring, q))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let amb = self.embedding.ambient();
        let by_element: std::collections::HashMap<usize, usize> =
            self.perm_index.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        // σᵢ∘σⱼ sends α to σᵢ(gⱼ(α)) = gⱼ(gᵢ(α))
        for i in 0..autos.len() {
            for j in 0..autos.len() {
                let comp = ring.compose(&autos[j], &autos[i]);
                let expected = by_element[&amb.mul(self.perm_index[i], self.perm_index[j])];
                let hits: Vec<usize> = autos
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a == comp)
                    .map(|(k, _)| k)
                    .collect();
                if hits != [expected] {
                    return Err(format!(
                        "composition closure fails mod {q}: σ{i}∘σ{j} matches automorphisms {hits:?}, \
                         permutation map predicts {expected}"
                    ));
                }
            }
        }
        let f = self.poly.reduce_mod(ring.modulus());
        for (i, g) in autos.iter().enumerate() {
            let v = ring.eval_poly_at(&f, g);
            if v.iter().any(|&c| c != 0) {
                return Err(format!("f(g{i}(x)) is not 0 mod (f, {q})"));
            }
        }
        Ok(())
    }
}

impl FrobeniusOracle for NumberFieldData {
    fn ambient(&self) -> &Arc<PermutationGroup> {
        self.embedding.ambient()
    }

    fn is_excluded(&self, p: u64) -> bool {
        NumberFieldData::is_excluded(self, p)
    }

    fn excluded_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.excluded_primes.iter().copied().collect();
        if !v.contains(&2) {
            v.insert(0, 2);
        }
        v
    }

    /// Frobenius at `p` as an ambient element: the matching automorphism found
    /// first among central elements (exact equality with `x^p`), then among
    /// one probe per non-central class (nontrivial gcd with `f`).
    fn frobenius(&self, p: u64) -> Result<usize, OracleError> {
        let ring = self.ring(p)?;
        if !ring.modulus_is_squarefree() {
            return Err(OracleError::NotSquarefree(p));
        }
        let xp = ring.pow_x(p);
        for &i in &self.central {
            if self.automorphism_mod(i, &ring, p)? == xp {
                return Ok(self.perm_index[i]);
            }
        }
        let md = *ring.modulus();
        for &i in &self.probes {
            let g = self.automorphism_mod(i, &ring, p)?;
            let diff: Vec<u64> = g.iter().zip(&xp).map(|(&a, &b)| md.sub(a, b)).collect();
            if ring.is_zero_divisor(&diff) {
                return Ok(self.perm_index[i]);
            }
        }
        Err(OracleError::NoMatch(p))
    }
}

/// Outcome of [`NumberFieldData::validate`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub primes: Vec<u64>,
    pub failure: Option<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
