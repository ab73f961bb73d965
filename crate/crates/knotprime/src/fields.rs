//! Exact field arithmetic: prime fields F_q, cyclotomic fields Q(zeta_d)
//! as rational polynomials mod Phi_d, primitive roots of unity, and dense
//! rank/nullity over either backend.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::poly::is_prime;

/// A field context: element arithmetic plus the distinguished root of
/// unity used to realize zeta_d.
pub trait FieldCtx {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    // construction depends on the field context, hence &self
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }
    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), x)
    }
    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    /// Human-readable descriptor recorded in certificates.
    fn describe(&self) -> String;
}

/// F_q for prime q < 2^31 (desk scale); elements are canonical residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, Error> {
        if !is_prime(q) {
            return Err(Error::Field(format!("{q} is not prime")));
        }
        if q >= 1 << 31 {
            return Err(Error::Field(format!("modulus {q} too large")));
        }
        Ok(PrimeField { q })
    }
}

impl FieldCtx for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.q
    }
    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        (x + y) % self.q
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        (x + self.q - y) % self.q
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        x * y % self.q
    }
    fn inv(&self, x: &u64) -> u64 {
        assert!(*x != 0, "division by zero in F_q");
        self.pow(x, self.q - 2)
    }
    fn describe(&self) -> String {
        format!("F_{}", self.q)
    }
}

/// Q(zeta_d): rational polynomials of degree < deg Phi_d, reduced mod Phi_d.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicField {
    pub d: u64,
    /// Phi_d as integer coefficients, ascending degree, monic.
    pub modulus: Vec<BigInt>,
}

pub type CycElem = Vec<BigRational>;

impl CyclotomicField {
    pub fn new(d: u64) -> Self {
        CyclotomicField { d, modulus: cyclotomic_polynomial(d) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// zeta_d as an element (the class of x), or 1 when Phi_d is linear
    /// with root 1 (d = 1).
    pub fn zeta(&self) -> CycElem {
        let n = self.degree();
        if n == 1 && self.d == 1 {
            return vec![BigRational::one()];
        }
        let mut v = vec![BigRational::zero(); n];
        if n >= 2 {
            v[1] = BigRational::one();
        } else {
            // degree-1 Phi_d (d = 2): root is -1
            v[0] = -BigRational::one();
        }
        v
    }

    fn reduce(&self, mut poly: Vec<BigRational>) -> CycElem {
        let n = self.degree();
        while poly.len() > n {
            let top = poly.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let deg = poly.len() - n;
            for i in 0..n {
                let c = BigRational::from(self.modulus[i].clone()) * &top;
                poly[deg + i] -= c;
            }
        }
        poly.resize(n, BigRational::zero());
        poly
    }
}

impl FieldCtx for CyclotomicField {
    type Elem = CycElem;
    fn zero(&self) -> CycElem {
        vec![BigRational::zero(); self.degree()]
    }
    fn one(&self) -> CycElem {
        let mut v = self.zero();
        v[0] = BigRational::one();
        v
    }
    fn from_i64(&self, x: i64) -> CycElem {
        let mut v = self.zero();
        v[0] = BigRational::from(BigInt::from(x));
        v
    }
    fn add(&self, x: &CycElem, y: &CycElem) -> CycElem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }
    fn sub(&self, x: &CycElem, y: &CycElem) -> CycElem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }
    fn mul(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let mut prod = vec![BigRational::zero(); 2 * self.degree()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, x: &CycElem) -> CycElem {
        // extended Euclid over Q[x] against Phi_d
        assert!(!self.is_zero(x), "division by zero in cyclotomic field");
        let modulus: Vec<BigRational> =
            self.modulus.iter().map(|c| BigRational::from(c.clone())).collect();
        let (mut r0, mut r1) = (modulus, trim(x.clone()));
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd (a nonzero constant, as Phi_d is irreducible)
        assert_eq!(r0.len(), 1, "inverse of a non-unit in cyclotomic field");
        let c = r0[0].recip();
        let mut out: Vec<BigRational> = s0.iter().map(|a| a * &c).collect();
        out.resize(self.degree().max(out.len()), BigRational::zero());
        self.reduce(out)
    }
    fn describe(&self) -> String {
        format!("Q(zeta_{})", self.d)
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()) == Some(true) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut v = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        v[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        v[i] -= c;
    }
    trim(v)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(v)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while trim(rem.clone()).len() > db {
        let rem_t = trim(rem.clone());
        let dr = rem_t.len() - 1;
        let c = rem_t[dr].clone() / lead;
        quot[dr - db] = c.clone();
        rem = rem_t;
        for i in 0..=db {
            let s = &b[i] * &c;
            rem[dr - db + i] -= s;
        }
    }
    (trim(quot), trim(rem))
}

/// Phi_d by the recursive quotient (x^d - 1) / prod of proper Phi_e.
pub fn cyclotomic_polynomial(d: u64) -> Vec<BigInt> {
    assert!(d >= 1);
    let mut num: Vec<BigInt> = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = int_poly_div_exact(&num, &cyclotomic_polynomial(e));
        }
    }
    num
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let (c, r) = num_integer::div_rem(rem[k + db].clone(), lead.clone());
        assert!(r.is_zero(), "inexact cyclotomic division");
        quot[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let s = bi * &c;
            rem[k + i] -= s;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    quot
}

/// Smallest prime q >= min_q with q = 1 mod d.
pub fn find_prime_with_root(d: u64, min_q: u64) -> u64 {
    let mut q = min_q.max(2);
    loop {
        if is_prime(q) && (q - 1).is_multiple_of(d) {
            return q;
        }
        q += 1;
    }
}

/// A multiplicative generator of F_q*, by exhaustive order testing against
/// the factorization of q - 1.
pub fn multiplicative_generator(q: u64) -> u64 {
    assert!(is_prime(q) && q > 2);
    let f = PrimeField { q };
    let primes: Vec<u64> = crate::abelian::prime_power_parts(q - 1)
        .into_iter()
        .map(|pp| {
            let mut ell = 2;
            while pp % ell != 0 {
                ell += 1;
            }
            ell
        })
        .collect();
    'cand: for g in 2..q {
        for &ell in &primes {
            if f.pow(&g, (q - 1) / ell) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("no generator found for prime {q}")
}

/// An element of exact multiplicative order d in F_q.
pub fn primitive_root_of_unity(q: u64, d: u64) -> Result<u64, Error> {
    if !(q - 1).is_multiple_of(d) {
        return Err(Error::Field(format!("{d} does not divide {q} - 1")));
    }
    let f = PrimeField::new(q)?;
    if d == 1 {
        return Ok(1);
    }
    let g = multiplicative_generator(q);
    let zeta = f.pow(&g, (q - 1) / d);
    debug_assert!(element_order(&f, zeta) == d);
    Ok(zeta)
}

pub fn element_order(f: &PrimeField, x: u64) -> u64 {
    let mut acc = x;
    let mut k = 1;
    while acc != 1 {
        acc = f.mul(&acc, &x);
        k += 1;
    }
    k
}

/// Dense Gaussian elimination: (rank, nullity) over the given field.
pub fn rank_nullity<F: FieldCtx>(f: &F, m: &[Vec<F::Elem>]) -> (usize, usize) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !f.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = f.inv(&a[rank][col]);
        for j in col..cols {
            a[rank][j] = f.mul(&a[rank][j], &inv);
        }
        for r in 0..rows {
            if r != rank && !f.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for j in col..cols {
                    let s = f.mul(&factor, &a[rank][j]);
                    a[r][j] = f.sub(&a[r][j], &s);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (rank, cols - rank)
}

/// Basis of the right null space of m over the field.
pub fn nullspace<F: FieldCtx>(f: &F, m: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !f.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = f.inv(&a[rank][col]);
        for j in col..cols {
            a[rank][j] = f.mul(&a[rank][j], &inv);
        }
        for r in 0..rows {
            if r != rank && !f.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for j in col..cols {
                    let s = f.mul(&factor, &a[rank][j]);
                    a[r][j] = f.sub(&a[r][j], &s);
                }
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let pivot_cols: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = f.neg(&a[r][free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(5), int_poly(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), int_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(91).len() - 1, 72); // phi(91) = 72
    }

    #[test]
    fn prime_selection() {
        assert_eq!(find_prime_with_root(91, 2), 547);
        assert_eq!(find_prime_with_root(1, 2), 2);
        assert_eq!(find_prime_with_root(5, 2), 11);
        assert_eq!(find_prime_with_root(91, 548), 911);
    }

    #[test]
    fn root_of_unity_547() {
        let zeta = primitive_root_of_unity(547, 91).unwrap();
        let f = PrimeField::new(547).unwrap();
        assert_eq!(element_order(&f, zeta), 91);
        // 204 and 64 are both primitive 91st roots in F_547
        assert_eq!(element_order(&f, 204), 91);
        assert_eq!(element_order(&f, 64), 91);
        assert_eq!(f.pow(&64, 6), 204);
    }

    #[test]
    fn root_of_unity_simple() {
        assert_eq!(primitive_root_of_unity(11, 2).unwrap(), 10);
        let z = primitive_root_of_unity(11, 5).unwrap();
        let f = PrimeField::new(11).unwrap();
        assert_eq!(element_order(&f, z), 5);
        assert!(primitive_root_of_unity(11, 3).is_err());
    }

    #[test]
    fn phi_vanishes_at_root() {
        let q = find_prime_with_root(12, 2); // 13
        let z = primitive_root_of_unity(q, 12).unwrap();
        let f = PrimeField::new(q).unwrap();
        let phi = cyclotomic_polynomial(12);
        let mut acc = 0u64;
        for (i, c) in phi.iter().enumerate() {
            let ci: i64 = c.try_into().unwrap();
            acc = f.add(&acc, &f.mul(&f.from_i64(ci), &f.pow(&z, i as u64)));
        }
        assert_eq!(acc, 0);
    }

    #[test]
    fn cyclotomic_arithmetic() {
        let k = CyclotomicField::new(5);
        let z = k.zeta();
        // zeta^5 = 1
        assert_eq!(k.pow(&z, 5), k.one());
        assert_ne!(k.pow(&z, 1), k.one());
        // a * a^-1 = 1 for a = 1 + 2 zeta + zeta^3
        let a = k.add(&k.add(&k.one(), &k.mul(&k.from_i64(2), &z)), &k.pow(&z, 3));
        let ai = k.inv(&a);
        assert_eq!(k.mul(&a, &ai), k.one());
        // associativity spot check
        let b = k.sub(&z, &k.from_i64(7));
        let c = k.pow(&z, 2);
        assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
    }

    #[test]
    fn rank_nullity_examples() {
        let f = PrimeField::new(7).unwrap();
        let id: Vec<Vec<u64>> = (0..3).map(|i| (0..3).map(|j| u64::from(i == j)).collect()).collect();
        assert_eq!(rank_nullity(&f, &id), (3, 0));
        let zero = vec![vec![0u64; 4]; 2];
        assert_eq!(rank_nullity(&f, &zero), (0, 4));

        // second row is zeta_5 times the first
        let k = CyclotomicField::new(5);
        let z = k.zeta();
        let m = vec![
            vec![z.clone(), k.one()],
            vec![k.mul(&z, &z), z.clone()],
        ];
        assert_eq!(rank_nullity(&k, &m), (1, 1));
    }

    #[test]
    fn mod_q_rank_can_only_drop() {
        let f = PrimeField::new(3).unwrap();
        let k = CyclotomicField::new(1); // plain Q
        let ints = [[6i64, 3], [2, 1]];
        let mq: Vec<Vec<u64>> = ints.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let mq_rank = rank_nullity(&f, &mq).0;
        let mr: Vec<Vec<CycElem>> =
            ints.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect();
        assert!(mq_rank <= rank_nullity(&k, &mr).0);
    }
}
