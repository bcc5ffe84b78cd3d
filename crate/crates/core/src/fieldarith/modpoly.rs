//! Dense polynomial arithmetic over `F_p`, and in `F_p[x]/(f)` for monic `f`.
//!
//! Coefficients are `u64` residues in `[0, p)`, ascending degree. Primes must
//! stay below `2^32` so that a product of two residues fits in a `u64`.

/// Barrett reduction for a fixed modulus `p < 2^32`.
#[derive(Clone, Copy, Debug)]
pub struct Modulus {
    p: u64,
    inv: u64,
}

impl Modulus {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1u64 << 32), "modulus {p} out of range");
        Modulus {
            p,
            inv: u64::MAX / p,
        }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.p
    }

    /// `x mod p` for any `x < 2^64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.inv as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base = self.reduce(base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.p as i64, self.reduce(a) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return None;
        }
        Some(s0.rem_euclid(self.p as i64) as u64)
    }
}

/// Removes trailing zero coefficients.
pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for zero.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// `a mod b` over `F_p`; `b` must be nonzero.
pub fn rem(md: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let lead_inv = md.inv(b[db]).expect("leading coefficient invertible");
    while r.len() > db {
        let top = r.len() - 1;
        let c = md.mul(r[top], lead_inv);
        if c != 0 {
            let shift = top - db;
            for j in 0..=db {
                r[shift + j] = md.sub(r[shift + j], md.mul(c, b[j]));
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd over `F_p`. The zero polynomial is returned as an empty vector.
pub fn gcd(md: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(md, &x, &y);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = md.inv(lead).expect("nonzero lead");
        for c in x.iter_mut() {
            *c = md.mul(*c, li);
        }
    }
    x
}

pub fn derivative(md: &Modulus, a: &[u64]) -> Vec<u64> {
    let mut d: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| md.mul(md.reduce(i as u64), c))
        .collect();
    trim(&mut d);
    d
}

/// `F_p[x]/(f)` for a monic `f` of degree `d ≥ 1`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    md: Modulus,
    /// Monic modulus, ascending, length `d + 1`.
    modulus: Vec<u64>,
    /// `p − f_j mod p` for `j < d`.
    neg_low: Vec<u64>,
    /// Whether up to `2d` unreduced products can be summed in a `u64`.
    lazy: bool,
}

impl QuotientRing {
    pub fn new(md: Modulus, modulus: Vec<u64>) -> Self {
        let d = modulus.len() - 1;
        assert!(d >= 1 && modulus[d] == 1, "modulus must be monic of degree ≥ 1");
        let neg_low = modulus[..d].iter().map(|&c| md.neg(c)).collect();
        let p1 = md.value() - 1;
        let lazy = (u64::MAX / (p1 * p1).max(1)) >= 2 * d as u64 + 2;
        QuotientRing {
            md,
            modulus,
            neg_low,
            lazy,
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.md
    }

    pub fn defining_poly(&self) -> &[u64] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduces an arbitrary residue vector into canonical length-`d` form.
    pub fn reduce_poly(&self, a: &[u64]) -> Vec<u64> {
        let d = self.degree();
        if a.len() <= d {
            let mut out = a.to_vec();
            out.resize(d, 0);
            return out;
        }
        let mut r = rem(&self.md, a, &self.modulus);
        r.resize(d, 0);
        r
    }

    fn reduce_product(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let d = self.degree();
        let md = &self.md;
        if self.lazy {
            for i in (d..prod.len()).rev() {
                let c = md.reduce(prod[i]);
                if c != 0 {
                    let base = i - d;
                    for (j, &nf) in self.neg_low.iter().enumerate() {
                        prod[base + j] += c * nf;
                    }
                }
            }
            prod.truncate(d);
            for c in prod.iter_mut() {
                *c = md.reduce(*c);
            }
        } else {
            for i in (d..prod.len()).rev() {
                let c = prod[i];
                if c != 0 {
                    let base = i - d;
                    for (j, &nf) in self.neg_low.iter().enumerate() {
                        prod[base + j] = md.add(prod[base + j], md.mul(c, nf));
                    }
                }
            }
            prod.truncate(d);
        }
        prod
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let md = &self.md;
        let mut prod = vec![0u64; 2 * d - 1];
        if self.lazy {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    prod[i + j] += ai * bj;
                }
            }
            for c in prod.iter_mut() {
                *c = md.reduce(*c);
            }
        } else {
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    prod[i + j] = md.add(prod[i + j], md.mul(ai, bj));
                }
            }
        }
        self.reduce_product(prod)
    }

    pub fn sqr(&self, a: &[u64]) -> Vec<u64> {
        if !self.lazy {
            return self.mul(a, a);
        }
        let d = self.degree();
        let md = &self.md;
        let mut prod = vec![0u64; 2 * d - 1];
        for i in 0..d {
            let ai = a[i];
            if ai == 0 {
                continue;
            }
            for j in (i + 1)..d {
                prod[i + j] += ai * a[j];
            }
        }
        for c in prod.iter_mut() {
            *c = md.reduce(*c);
            *c = md.add(*c, *c);
        }
        for i in 0..d {
            prod[2 * i] = md.add(prod[2 * i], md.mul(a[i], a[i]));
        }
        self.reduce_product(prod)
    }

    /// `x · a`.
    pub fn mul_x(&self, a: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let md = &self.md;
        let top = a[d - 1];
        let mut out = vec![0u64; d];
        out[1..d].copy_from_slice(&a[..d - 1]);
        if top != 0 {
            for (j, &nf) in self.neg_low.iter().enumerate() {
                out[j] = md.add(out[j], md.mul(top, nf));
            }
        }
        out
    }

    /// `x^e mod (f, p)`.
    pub fn pow_x(&self, e: u64) -> Vec<u64> {
        let d = self.degree();
        let mut r = vec![0u64; d];
        r[0] = 1 % self.md.value();
        if e == 0 {
            return r;
        }
        r = self.mul_x(&r);
        let bits = 64 - e.leading_zeros();
        for k in (0..bits - 1).rev() {
            r = self.sqr(&r);
            if (e >> k) & 1 == 1 {
                r = self.mul_x(&r);
            }
        }
        r
    }

    /// `g(h(x))` by Horner's rule.
    pub fn compose(&self, g: &[u64], h: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let mut acc = vec![0u64; d];
        for &c in g.iter().rev() {
            acc = self.mul(&acc, h);
            acc[0] = self.md.add(acc[0], c);
        }
        acc
    }

    /// `g(h(x))` for `g` given with arbitrary length (e.g. the modulus itself).
    pub fn eval_poly_at(&self, g: &[u64], h: &[u64]) -> Vec<u64> {
        self.compose(g, h)
    }

    /// Whether `a` shares a nontrivial factor with the modulus.
    pub fn is_zero_divisor(&self, a: &[u64]) -> bool {
        let g = gcd(&self.md, &self.modulus, a);
        g.len() > 1 || g.is_empty()
    }

    pub fn modulus_is_squarefree(&self) -> bool {
        let d = derivative(&self.md, &self.modulus);
        if d.is_empty() {
            return false;
        }
        gcd(&self.md, &self.modulus, &d).len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_pow_x(f: &[u64], p: u64, e: u64) -> Vec<u64> {
        // repeated multiplication by x with full reduction: independent of
        // the lazy squaring path
        let md = Modulus::new(p);
        let mut r = vec![1u64];
        for _ in 0..e {
            let mut s = vec![0u64];
            s.extend_from_slice(&r);
            r = rem(&md, &s, f);
            if r.is_empty() {
                r.push(0);
            }
        }
        let mut r = r;
        r.resize(f.len() - 1, 0);
        r
    }

    #[test]
    fn barrett_matches_hardware_division() {
        for p in [3u64, 65537, 1_000_003, (1 << 31) - 1, 4_294_967_291] {
            let md = Modulus::new(p);
            for x in [0u64, 1, p - 1, p, p + 1, u64::MAX, u64::MAX / 3, 123_456_789_012_345] {
                assert_eq!(md.reduce(x), x % p);
            }
            assert_eq!(md.mul(md.inv(12346).unwrap(), 12346), 1);
        }
    }

    #[test]
    fn pow_x_small_cases() {
        // x^2 + 1
        let ring5 = QuotientRing::new(Modulus::new(5), vec![1, 0, 1]);
        assert_eq!(ring5.pow_x(5), vec![0, 1]);
        let ring3 = QuotientRing::new(Modulus::new(3), vec![1, 0, 1]);
        assert_eq!(ring3.pow_x(3), vec![0, 2]);
        // Φ5 mod 7
        let ring7 = QuotientRing::new(Modulus::new(7), vec![1, 1, 1, 1, 1]);
        assert_eq!(ring7.pow_x(7), vec![0, 0, 1, 0]);
    }

    #[test]
    fn pow_x_matches_naive_oracle() {
        let f = vec![5u64, 3, 0, 7, 1, 2, 1];
        for p in [11u64, 101, 1009, 65521] {
            let fp: Vec<u64> = f.iter().map(|c| c % p).collect();
            let ring = QuotientRing::new(Modulus::new(p), fp.clone());
            for e in [0u64, 1, 2, 5, 6, 7, 31, 64, 1000] {
                assert_eq!(ring.pow_x(e), naive_pow_x(&fp, p, e), "p={p} e={e}");
            }
        }
    }

    #[test]
    fn non_lazy_path_agrees() {
        let p = 4_294_967_291u64;
        let f = vec![3u64, 0, 1, 1];
        let ring = QuotientRing::new(Modulus::new(p), f.clone());
        assert!(!ring.lazy);
        assert_eq!(ring.pow_x(1000), naive_pow_x(&f, p, 1000));
    }

    #[test]
    fn gcd_and_squarefree() {
        let md = Modulus::new(7);
        // (x+1)(x+2) and (x+1)(x+3)
        let a = vec![2, 3, 1];
        let b = vec![3, 4, 1];
        assert_eq!(gcd(&md, &a, &b), vec![1, 1]);
        let ring = QuotientRing::new(md, vec![1, 2, 1]); // (x+1)^2
        assert!(!ring.modulus_is_squarefree());
        let ring = QuotientRing::new(md, vec![2, 3, 1]);
        assert!(ring.modulus_is_squarefree());
    }
}
