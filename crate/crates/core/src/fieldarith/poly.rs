//! Exact integer and rational polynomials, and their reductions modulo primes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modpoly::Modulus;

/// An integer kept in a form that reduces quickly modulo word-sized primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residuable {
    negative: bool,
    /// Little-endian base-2^64 digits of the absolute value.
    digits: Vec<u64>,
}

impl Residuable {
    pub fn new(v: &BigInt) -> Self {
        Residuable {
            negative: v.sign() == Sign::Minus,
            digits: v.magnitude().to_u64_digits(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reduce(&self, md: &Modulus) -> u64 {
        // 2^64 mod p
        let base = md.reduce(md.reduce(u64::MAX) + 1);
        let mut acc = 0u64;
        for &d in self.digits.iter().rev() {
            acc = md.add(md.mul(acc, base), md.reduce(d));
        }
        if self.negative {
            md.neg(acc)
        } else {
            acc
        }
    }
}

/// A polynomial with integer coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, One::is_one)
    }

    pub fn reduce_mod(&self, md: &Modulus) -> Vec<u64> {
        self.coeffs.iter().map(|c| Residuable::new(c).reduce(md)).collect()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(divisor.is_monic());
        let dd = divisor.degree();
        if self.degree() < dd {
            return if self.coeffs.iter().all(Zero::is_zero) {
                Some(IntPoly::new(vec![BigInt::zero()]))
            } else {
                None
            };
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone();
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// `x^e mod self` over ℤ for monic `self`, built by repeated shifting.
    pub fn powers_of_x_mod(&self, max_e: usize) -> Vec<Vec<BigInt>> {
        assert!(self.is_monic());
        let d = self.degree();
        let mut cur = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        let mut out = Vec::with_capacity(max_e + 1);
        for _ in 0..=max_e {
            out.push(cur.clone());
            let top = cur[d - 1].clone();
            let mut next = vec![BigInt::zero(); d];
            next[1..d].clone_from_slice(&cur[..d - 1]);
            if !top.is_zero() {
                for j in 0..d {
                    next[j] -= &top * &self.coeffs[j];
                }
            }
            cur = next;
        }
        out
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::new(vec![BigInt::zero()]);
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `|Res(f, f')|`, by fraction-free elimination on the Sylvester matrix.
    /// It differs from the discriminant only by the leading coefficient and a
    /// sign, so the two have the same prime divisors for monic `f`.
    pub fn discriminant_abs(&self) -> BigInt {
        let df = self.derivative();
        let n = self.degree();
        let m = df.degree();
        let size = n + m;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        // rows hold coefficients from the leading term down
        for i in 0..m {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                mat[i][i + k] = c.clone();
            }
        }
        for i in 0..n {
            for (k, c) in df.coeffs.iter().rev().enumerate() {
                mat[m + i][i + k] = c.clone();
            }
        }
        bareiss_det(mat).abs()
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// A polynomial with rational coefficients, stored as integer numerators
/// over one common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    numerators: Vec<BigInt>,
    denominator: BigInt,
    fast: Vec<Residuable>,
    fast_den: Residuable,
}

impl RatPoly {
    pub fn new(coeffs: &[BigRational]) -> Self {
        let denominator = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&denominator / c.denom()))
            .collect();
        let fast = numerators.iter().map(Residuable::new).collect();
        let fast_den = Residuable::new(&denominator);
        RatPoly {
            numerators,
            denominator,
            fast,
            fast_den,
        }
    }

    pub fn from_int_coeffs(coeffs: Vec<BigInt>) -> Self {
        let rats: Vec<BigRational> = coeffs.into_iter().map(BigRational::from_integer).collect();
        Self::new(&rats)
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.numerators
            .iter()
            .map(|n| BigRational::new(n.clone(), self.denominator.clone()))
            .collect()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Residues modulo `p`, or `None` when `p` divides the denominator.
    pub fn reduce_mod(&self, md: &Modulus, len: usize) -> Option<Vec<u64>> {
        let den = self.fast_den.reduce(md);
        let inv = md.inv(den)?;
        let mut out: Vec<u64> = self.fast.iter().map(|c| md.mul(c.reduce(md), inv)).collect();
        out.resize(len.max(out.len()), 0);
        Some(out)
    }
}

/// `Φ_n` for every divisor `n` of `m`, by `Φ_n = (x^n − 1) / Π_{d | n, d < n} Φ_d`.
pub fn cyclotomic_polys(m: u64) -> BTreeMap<u64, IntPoly> {
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut out: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for &n in &divisors {
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        let mut poly = IntPoly::new(num);
        for (&d, phi) in out.iter() {
            if n % d == 0 && d < n {
                poly = poly.div_exact(phi).expect("cyclotomic factor divides x^n - 1");
            }
        }
        out.insert(n, poly);
    }
    out
}

pub fn cyclotomic_poly(m: u64) -> IntPoly {
    cyclotomic_polys(m).remove(&m).expect("m divides m")
}
