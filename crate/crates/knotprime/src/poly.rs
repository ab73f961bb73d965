//! Exact integer Laurent polynomial arithmetic in one and two variables,
//! the Alexander polynomial from a Fox Jacobian, positive-symmetric
//! factorization search, and Fox's order formula via the circulant
//! determinant.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::FoxJacobian;
use crate::error::Error;

/// Integer Laurent polynomial in one variable `t`.
///
/// Stored as a map exponent -> coefficient with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly1 {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly1 {
    pub fn zero() -> Self {
        LaurentPoly1 { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly1 { coeffs }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// Coefficients as (exponent, coefficient) pairs, ascending exponent.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.coeffs.iter().map(|(&e, &c)| (e, c)).collect()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        *self.coeffs.get(&exp).unwrap_or(&0)
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_unit_monomial(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().map(|c| c.abs()) == Some(1)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.coeffs {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly1 { coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly1 { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// Substitute t -> 1/t.
    pub fn reverse(&self) -> Self {
        LaurentPoly1 { coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    pub fn eval_i64(&self, x: i64) -> i64 {
        // Laurent evaluation only valid at x = +-1.
        assert!(x == 1 || x == -1, "integer evaluation only at t = +-1");
        self.coeffs
            .iter()
            .map(|(&e, &c)| if x == 1 || e.rem_euclid(2) == 0 { c } else { -c })
            .sum()
    }

    /// True iff f(t) = f(1/t) exactly (already centered).
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    /// Normalize to the symmetric representative: center the support so
    /// f(t) = f(1/t), with f(1) > 0 when f(1) != 0 (else positive leading
    /// coefficient). Fails if the exponent span is odd.
    pub fn symmetrized(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        if (hi - lo) % 2 != 0 {
            return Err(Error::Poly("odd exponent span; no symmetric representative".into()));
        }
        let mut p = self.shift(-(lo + hi) / 2);
        if !p.is_palindromic() {
            return Err(Error::Poly("not palindromic after centering".into()));
        }
        let sign = if p.eval_i64(1) != 0 {
            p.eval_i64(1).signum()
        } else {
            p.coeffs.values().next_back().copied().unwrap().signum()
        };
        if sign < 0 {
            p = p.neg();
        }
        Ok(p)
    }

    /// Equality up to a unit +-t^k.
    pub fn equal_up_to_unit(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let a = self.shift(-self.min_exp().unwrap());
        let b = other.shift(-other.min_exp().unwrap());
        a == b || a == b.neg()
    }

    /// Exact division in Z[t, 1/t]: returns q with self = divisor * q, if any.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.shift(-self.min_exp().unwrap());
        let d = divisor.shift(-divisor.min_exp().unwrap());
        let dlead = *d.coeffs.iter().next_back().unwrap().1;
        let dexp = d.max_exp().unwrap();
        let mut q = Self::zero();
        while !rem.is_zero() {
            let rexp = rem.max_exp().unwrap();
            if rexp < dexp {
                return None;
            }
            let rlead = rem.coeff(rexp);
            if rlead % dlead != 0 {
                return None;
            }
            let c = rlead / dlead;
            let e = rexp - dexp;
            q.add_term(e, c);
            rem = rem.sub(&d.mul(&Self::monomial(e, c)));
        }
        // restore the unit shift
        let shift = self.min_exp().unwrap() - divisor.min_exp().unwrap();
        Some(q.shift(shift))
    }
}

impl fmt::Debug for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.coeffs {
            if !first {
                write!(f, " {} ", if c >= 0 { "+" } else { "-" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{}", a)?,
                1 if a == 1 => write!(f, "t")?,
                1 => write!(f, "{}t", a)?,
                _ if a == 1 => write!(f, "t^{}", e)?,
                _ => write!(f, "{}t^{}", a, e)?,
            }
        }
        Ok(())
    }
}

/// Integer Laurent polynomial in `s` and `t`, indexed as sum of
/// c_{i,j} s^j t^i: keys are (i, j) = (t-exponent, s-exponent).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly2 {
    coeffs: BTreeMap<(i64, i64), i64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2 { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    /// c * s^j t^i
    pub fn monomial(i: i64, j: i64, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert((i, j), c);
        }
        LaurentPoly2 { coeffs }
    }

    /// Build from [i, j, c] triples (c * s^j t^i).
    pub fn from_triples(triples: &[(i64, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(i, j, c) in triples {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn triples(&self) -> Vec<(i64, i64, i64)> {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c)).collect()
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry((i, j)).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: i64, j: i64) -> i64 {
        *self.coeffs.get(&(i, j)).unwrap_or(&0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0, 0) == 1
    }

    pub fn is_unit_monomial(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().map(|c| c.abs()) == Some(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), &c1) in &self.coeffs {
            for (&(i2, j2), &c2) in &other.coeffs {
                out.add_term(i1 + i2, j1 + j2, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }

    /// Multiply by the unit s^a t^b.
    pub fn shift(&self, b: i64, a: i64) -> Self {
        LaurentPoly2 {
            coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((i + b, j + a), c)).collect(),
        }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// The HFK symmetry condition c_{i,j} = c_{-i, j-2i}.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(&(i, j), &c)| self.coeff(-i, j - 2 * i) == c)
    }

    pub fn eval_11(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Substitute s = -1 and collect in t.
    pub fn specialize_s_minus1(&self) -> LaurentPoly1 {
        let mut out = LaurentPoly1::zero();
        for (&(i, j), &c) in &self.coeffs {
            out.add_term(i, if j.rem_euclid(2) == 0 { c } else { -c });
        }
        out
    }

    /// Diagonal coordinates (k, v) = (i, j - i): the symmetry condition
    /// becomes plain palindromy c(k, v) = c(-k, v), and units s^a t^b act
    /// by translation. Used by the factor search and normalization.
    fn diag(&self) -> BTreeMap<(i64, i64), i64> {
        self.coeffs.iter().map(|(&(i, j), &c)| ((i, j - i), c)).collect()
    }

    fn from_diag(d: &BTreeMap<(i64, i64), i64>) -> Self {
        let mut p = Self::zero();
        for (&(k, v), &c) in d {
            p.add_term(k, v + k, c);
        }
        p
    }

    /// Canonical representative modulo units s^a t^b: the k-support is
    /// centered at 0 (so the symmetry condition holds when it can) and the
    /// minimal v-exponent is 0. Returns None when no unit shift makes the
    /// polynomial symmetric, or when some coefficient is negative.
    pub fn canonical_positive_symmetric(&self) -> Option<Self> {
        if self.is_zero() || !self.all_nonnegative() {
            return None;
        }
        let d = self.diag();
        let kmin = d.keys().map(|&(k, _)| k).min().unwrap();
        let kmax = d.keys().map(|&(k, _)| k).max().unwrap();
        if (kmin + kmax) % 2 != 0 {
            return None;
        }
        let kshift = -(kmin + kmax) / 2;
        let vmin = d.keys().map(|&(_, v)| v).min().unwrap();
        let shifted: BTreeMap<(i64, i64), i64> =
            d.iter().map(|(&(k, v), &c)| ((k + kshift, v - vmin), c)).collect();
        let cand = Self::from_diag(&shifted);
        if cand.is_symmetric() {
            Some(cand)
        } else {
            None
        }
    }

    /// Exact division in Z[s^+-, t^+-]; treats both as polynomials in the
    /// diagonal coordinates with v as the outer variable.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // monomial order: lexicographic on (v, k) descending
        let key = |&(k, v): &(i64, i64)| (v, k);
        let ddiag = divisor.diag();
        let dlt = ddiag.keys().max_by_key(|kv| key(kv)).copied().unwrap();
        let dlc = ddiag[&dlt];
        let mut rem = self.diag();
        let mut quot: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        loop {
            rem.retain(|_, c| *c != 0);
            if rem.is_empty() {
                break;
            }
            let rlt = rem.keys().max_by_key(|kv| key(kv)).copied().unwrap();
            let rlc = rem[&rlt];
            if rlc % dlc != 0 {
                return None;
            }
            let qk = rlt.0 - dlt.0;
            let qv = rlt.1 - dlt.1;
            // v-exponents below the divisor's top can never be cancelled once
            // the quotient term set is fixed; detect non-divisibility by
            // failure to make progress.
            if qv < rem_min_v(&rem) - dims_min_v(&ddiag) {
                return None;
            }
            let qc = rlc / dlc;
            *quot.entry((qk, qv)).or_insert(0) += qc;
            for (&(k, v), &c) in &ddiag {
                *rem.entry((k + qk, v + qv)).or_insert(0) -= qc * c;
            }
            // divergence guard
            if quot.len() > 4096 {
                return None;
            }
        }
        quot.retain(|_, c| *c != 0);
        Some(Self::from_diag(&quot))
    }
}

fn rem_min_v(m: &BTreeMap<(i64, i64), i64>) -> i64 {
    m.iter().filter(|(_, &c)| c != 0).map(|(&(_, v), _)| v).min().unwrap_or(0)
}

fn dims_min_v(m: &BTreeMap<(i64, i64), i64>) -> i64 {
    m.keys().map(|&(_, v)| v).min().unwrap_or(0)
}

impl fmt::Debug for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in &self.coeffs {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            }
            let a = c.abs();
            if a != 1 || (i == 0 && j == 0) {
                write!(f, "{a}")?;
            }
            match j {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{j}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A factorization of a two-variable polynomial into canonically normalized
/// positive-symmetric factors with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymFactorization {
    /// Sorted factor multiset, each factor canonical.
    pub factors: Vec<LaurentPoly2>,
}

impl SymFactorization {
    /// Product of the factors (canonical form).
    pub fn product(&self) -> LaurentPoly2 {
        let mut p = LaurentPoly2::one();
        for f in &self.factors {
            p = p.mul(f);
        }
        p
    }
}

/// One hypothesized two-summand grouping Omega = Omega_1 * Omega_2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBlockGrouping {
    pub omega1: LaurentPoly2,
    pub omega2: LaurentPoly2,
}

/// The Alexander polynomial by Fox calculus: abelianize the Jacobian to t,
/// delete `drop_col`, take the determinant, and symmetrize with Delta(1) = 1.
pub fn alexander_poly(jac: &FoxJacobian) -> Result<LaurentPoly1, Error> {
    alexander_poly_col(jac, jac.cols - 1)
}

/// Same, with an explicit deleted column (used by the invariance tests).
pub fn alexander_poly_col(jac: &FoxJacobian, drop_col: usize) -> Result<LaurentPoly1, Error> {
    if jac.rows == 0 {
        // unknot
        return Ok(LaurentPoly1::one());
    }
    let m = jac.abelianized();
    let n = jac.rows;
    let mut sub: Vec<Vec<LaurentPoly1>> = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..jac.cols {
            if c != drop_col {
                row.push(m[r][c].clone());
            }
        }
        sub.push(row);
    }
    let det = laurent_det(&sub);
    if det.is_zero() {
        return Err(Error::Poly("zero Alexander determinant: invalid presentation".into()));
    }
    let d = det.symmetrized()?;
    if d.eval_i64(1) != 1 {
        return Err(Error::Poly(format!("Delta(1) = {} != +-1", d.eval_i64(1))));
    }
    Ok(d)
}

/// Fraction-free determinant of a matrix of Laurent polynomials: clear each
/// entry to Z[t] by a global monomial shift, run Bareiss over Z[t] with
/// BigInt coefficients, and restore the shift.
fn laurent_det(m: &[Vec<LaurentPoly1>]) -> LaurentPoly1 {
    let n = m.len();
    if n == 0 {
        return LaurentPoly1::one();
    }
    // global shift per row so all exponents are >= 0
    let mut shift_total: i64 = 0;
    let mut a: Vec<Vec<BigPoly>> = Vec::with_capacity(n);
    for row in m {
        let lo = row.iter().filter_map(|p| p.min_exp()).min().unwrap_or(0).min(0);
        shift_total += -lo;
        a.push(row.iter().map(|p| BigPoly::from_laurent(&p.shift(-lo))).collect());
    }
    let det = bareiss_det(a);
    det.to_laurent().shift(-shift_total)
}

/// Dense polynomial over BigInt, exponents 0..len.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BigPoly(Vec<BigInt>);

impl BigPoly {
    fn zero() -> Self {
        BigPoly(vec![])
    }
    fn one() -> Self {
        BigPoly(vec![BigInt::one()])
    }
    fn from_laurent(p: &LaurentPoly1) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        assert!(p.min_exp().unwrap() >= 0);
        let deg = p.max_exp().unwrap() as usize;
        let mut v = vec![BigInt::zero(); deg + 1];
        for (e, c) in p.pairs() {
            v[e as usize] = BigInt::from(c);
        }
        BigPoly(v)
    }
    fn to_laurent(&self) -> LaurentPoly1 {
        let mut p = LaurentPoly1::zero();
        for (e, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                let small: i64 = c.try_into().expect("Alexander coefficient exceeds i64");
                p.add_term(e as i64, small);
            }
        }
        p
    }
    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()) == Some(true) {
            self.0.pop();
        }
        self
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        BigPoly(v).trim()
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![BigInt::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            v[i] += a;
        }
        for (i, b) in other.0.iter().enumerate() {
            v[i] -= b;
        }
        BigPoly(v).trim()
    }
    /// Exact division; panics if not exact (Bareiss guarantees exactness).
    fn div_exact(&self, d: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.0.clone();
        let dd = &d.0;
        let dl = dd.last().unwrap();
        assert!(rem.len() >= dd.len(), "inexact division in Bareiss");
        let qlen = rem.len() - dd.len() + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dd.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = num_integer::div_rem(top, dl.clone());
            assert!(r.is_zero(), "inexact division in Bareiss");
            q[k] = c.clone();
            for (i, di) in dd.iter().enumerate() {
                let prod = di * &c;
                rem[k + i] -= prod;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact division in Bareiss");
        BigPoly(q).trim()
    }
}

fn bareiss_det(mut a: Vec<Vec<BigPoly>>) -> BigPoly {
    let n = a.len();
    if n == 0 {
        return BigPoly::one();
    }
    let mut sign = 1i64;
    let mut prev = BigPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigPoly::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign < 0 {
        det = BigPoly::zero().sub(&det);
    }
    det
}

/// Omega(-1, t), symmetrize-normalized when possible.
pub fn specialize_s(omega: &LaurentPoly2) -> LaurentPoly1 {
    let p = omega.specialize_s_minus1();
    p.symmetrized().unwrap_or(p)
}

/// Fox's order formula: |H_1 of the p-fold branched cover| as the absolute
/// circulant determinant of Delta mod t^p - 1.
pub fn order_formula(delta: &LaurentPoly1, p: u64) -> Result<BigInt, Error> {
    if !is_prime(p) {
        return Err(Error::Poly(format!("order_formula requires prime p, got {p}")));
    }
    let m = circulant_matrix(delta, p);
    Ok(int_det(m).abs())
}

/// The p x p circulant with (i,j) entry a_{(i-j) mod p}, where
/// sum a_k t^k is Delta reduced mod t^p - 1.
pub fn circulant_matrix(delta: &LaurentPoly1, p: u64) -> Vec<Vec<BigInt>> {
    let p = p as i64;
    let mut a = vec![BigInt::zero(); p as usize];
    for (e, c) in delta.pairs() {
        a[e.rem_euclid(p) as usize] += BigInt::from(c);
    }
    (0..p)
        .map(|i| (0..p).map(|j| a[(i - j).rem_euclid(p) as usize].clone()).collect())
        .collect()
}

/// Exact integer determinant (Bareiss).
pub fn int_det(m: Vec<Vec<BigInt>>) -> BigInt {
    let polys: Vec<Vec<BigPoly>> = m
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| if c.is_zero() { BigPoly::zero() } else { BigPoly(vec![c]) })
                .collect()
        })
        .collect();
    let d = bareiss_det(polys);
    if d.is_zero() {
        BigInt::zero()
    } else {
        d.0[0].clone()
    }
}

/// Exact Laurent divisibility: true iff g = f * h for some h in Z[t, 1/t].
pub fn divides_1var(f: &LaurentPoly1, g: &LaurentPoly1) -> Result<bool, Error> {
    if f.is_zero() {
        return Err(Error::Poly("division by the zero polynomial".into()));
    }
    Ok(g.div_exact(f).is_some())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All nontrivial positive-symmetric divisors g of omega (canonical form)
/// such that omega / g is also positive-symmetric. Completeness: a factor
/// with nonnegative coefficients has diagonal support inside omega's
/// diagonal support box and every coefficient bounded by omega(1,1).
fn positive_symmetric_divisors(omega: &LaurentPoly2) -> Result<Vec<LaurentPoly2>, Error> {
    if !omega.all_nonnegative() {
        return Err(Error::Poly("omega has negative coefficients".into()));
    }
    let canon = omega
        .canonical_positive_symmetric()
        .ok_or_else(|| Error::Poly("omega violates the symmetry condition".into()))?;
    let total = canon.eval_11();
    let diag = canon.diag();
    let kmax = diag.keys().map(|&(k, _)| k).max().unwrap();
    let vmax = diag.keys().map(|&(_, v)| v).max().unwrap();
    let delta = specialize_s(&canon);

    // proper divisors of omega(1,1), excluding 1 and omega(1,1) itself:
    // g(1,1) * h(1,1) = omega(1,1) with both nontrivial positive.
    let mut divisors: Vec<LaurentPoly2> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut esums: Vec<i64> = (2..total).filter(|e| total % e == 0).collect();
    esums.sort();
    for esum in esums {
        // enumerate candidate factors with coefficient sum esum: palindromic
        // support k in [-m..m], v in [0..vmax]
        for m in 0..=kmax {
            for dv in 0..=vmax {
                let positions: Vec<(i64, i64)> = (0..=m)
                    .flat_map(|k| (0..=dv).map(move |v| (k, v)))
                    .collect();
                let mut coeffs = vec![0i64; positions.len()];
                enumerate_palindromic(
                    &positions,
                    &mut coeffs,
                    0,
                    esum,
                    m,
                    dv,
                    &mut |cand: &BTreeMap<(i64, i64), i64>| {
                        let g = LaurentPoly2::from_diag(cand);
                        if !g.is_symmetric() {
                            return;
                        }
                        // must span the full declared box (else it is
                        // enumerated at smaller m/dv)
                        let gd = g.diag();
                        let gk = gd.keys().map(|&(k, _)| k).max().unwrap();
                        let gv = gd.keys().map(|&(_, v)| v).max().unwrap();
                        if gk != m || gv != dv {
                            return;
                        }
                        // s = -1 specialization must divide Delta over Z
                        let gs = specialize_s(&g);
                        if !gs.is_zero() && delta.div_exact(&gs).is_none() {
                            return;
                        }
                        if let Some(q) = canon.div_exact(&g) {
                            if q.all_nonnegative() {
                                if let Some(qc) = q.canonical_positive_symmetric() {
                                    if !qc.is_unit_monomial()
                                        && !g.is_unit_monomial()
                                        && seen.insert(g.triples())
                                    {
                                        divisors.push(g.clone());
                                    }
                                }
                            }
                        }
                    },
                );
            }
        }
    }
    Ok(divisors)
}

/// DFS over palindromic nonnegative coefficient assignments with a fixed
/// total sum. `positions` lists (k, v) with k >= 0; k = 0 positions count
/// once, k > 0 count twice (mirrored).
fn enumerate_palindromic(
    positions: &[(i64, i64)],
    coeffs: &mut [i64],
    idx: usize,
    remaining: i64,
    _m: i64,
    _dv: i64,
    f: &mut impl FnMut(&BTreeMap<(i64, i64), i64>),
) {
    if idx == positions.len() {
        if remaining == 0 {
            let mut map = BTreeMap::new();
            for (i, &(k, v)) in positions.iter().enumerate() {
                if coeffs[i] != 0 {
                    map.insert((k, v), coeffs[i]);
                    if k != 0 {
                        map.insert((-k, v), coeffs[i]);
                    }
                }
            }
            if !map.is_empty() {
                f(&map);
            }
        }
        return;
    }
    let (k, _) = positions[idx];
    let weight = if k == 0 { 1 } else { 2 };
    let maxc = remaining / weight;
    for c in 0..=maxc {
        coeffs[idx] = c;
        enumerate_palindromic(positions, coeffs, idx + 1, remaining - weight * c, _m, _dv, f);
    }
    coeffs[idx] = 0;
}

/// The irreducible positive-symmetric factorization of omega with
/// multiplicity, or None when omega is positive-symmetric irreducible.
pub fn irreducible_factors(omega: &LaurentPoly2) -> Result<Vec<LaurentPoly2>, Error> {
    let canon = omega
        .canonical_positive_symmetric()
        .ok_or_else(|| Error::Poly("omega violates the symmetry condition".into()))?;
    let mut out = Vec::new();
    factor_rec(&canon, &mut out)?;
    out.sort_by_key(|f| f.triples());
    Ok(out)
}

fn factor_rec(f: &LaurentPoly2, out: &mut Vec<LaurentPoly2>) -> Result<(), Error> {
    if f.is_unit_monomial() {
        return Ok(());
    }
    let divs = positive_symmetric_divisors(f)?;
    // smallest nontrivial divisor is irreducible
    match divs.into_iter().min_by_key(|g| (g.eval_11(), g.triples())) {
        None => {
            out.push(f.clone());
            Ok(())
        }
        Some(g) => {
            let q = f
                .div_exact(&g)
                .and_then(|q| q.canonical_positive_symmetric())
                .ok_or_else(|| Error::Poly("internal: divisor does not divide".into()))?;
            out.push(g);
            factor_rec(&q, out)
        }
    }
}

/// All factorizations into >= 2 nontrivial positive-symmetric factors:
/// the irreducible multiset plus every induced two-block grouping
/// Omega = Omega_1 * Omega_2 (up to swapping the blocks).
pub fn positive_symmetric_factorizations(
    omega: &LaurentPoly2,
) -> Result<(Option<SymFactorization>, Vec<TwoBlockGrouping>), Error> {
    let irr = irreducible_factors(omega)?;
    if irr.len() < 2 {
        return Ok((None, Vec::new()));
    }
    let fact = SymFactorization { factors: irr.clone() };
    // sub-multisets up to complementation
    let mut groupings = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let n = irr.len();
    for mask in 1..(1u32 << n) - 1 {
        let mut g1 = LaurentPoly2::one();
        let mut g2 = LaurentPoly2::one();
        for (i, f) in irr.iter().enumerate() {
            if mask & (1 << i) != 0 {
                g1 = g1.mul(f);
            } else {
                g2 = g2.mul(f);
            }
        }
        let c1 = g1.canonical_positive_symmetric().unwrap();
        let c2 = g2.canonical_positive_symmetric().unwrap();
        let mut key = [c1.triples(), c2.triples()];
        key.sort();
        if seen.insert(key.clone()) {
            let (omega1, omega2) = (LaurentPoly2::from_triples(
                &key[0].to_vec(),
            ), LaurentPoly2::from_triples(&key[1].to_vec()));
            groupings.push(TwoBlockGrouping { omega1, omega2 });
        }
    }
    groupings.sort_by_key(|g| (g.omega1.triples(), g.omega2.triples()));
    Ok((Some(fact), groupings))
}
