//! Integer Smith normal form, branched cyclic cover homology as explicit
//! finite abelian groups, and the splitting / doubling tests on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::FoxJacobian;
use crate::error::Error;
use crate::poly::{alexander_poly, order_formula};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Finite abelian group as its Krull-Schmidt multiset of prime-power
/// cyclic orders, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub prime_power_divisors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { prime_power_divisors: vec![] }
    }

    pub fn from_prime_powers(mut pp: Vec<u64>) -> Self {
        assert!(pp.iter().all(|&q| is_prime_power(q)));
        pp.sort_unstable();
        FiniteAbelianGroup { prime_power_divisors: pp }
    }

    /// Build from arbitrary cyclic orders by splitting each into prime powers.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut pp = Vec::new();
        for &d in orders {
            assert!(d > 0, "infinite cyclic factor");
            pp.extend(prime_power_parts(d));
        }
        Self::from_prime_powers(pp)
    }

    pub fn order(&self) -> BigInt {
        self.prime_power_divisors.iter().fold(BigInt::one(), |acc, &q| acc * q)
    }

    pub fn is_trivial(&self) -> bool {
        self.prime_power_divisors.is_empty()
    }
}

fn is_prime_power(q: u64) -> bool {
    q > 1 && prime_power_parts(q).len() == 1
}

/// Factor d > 0 into prime powers ell^e (one per prime).
pub fn prime_power_parts(d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = d;
    let mut ell = 2;
    while ell * ell <= rest {
        if rest.is_multiple_of(ell) {
            let mut q = 1;
            while rest.is_multiple_of(ell) {
                q *= ell;
                rest /= ell;
            }
            out.push(q);
        }
        ell += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}

/// Smith normal form: the divisor chain d1 | d2 | ... (nonnegative, zeros
/// last) and the rank (count of nonzero divisors).
pub fn smith_normal_form(m: &IntMatrix) -> (Vec<BigInt>, usize) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let n = rows.min(cols);
    let mut divisors: Vec<BigInt> = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // smallest nonzero pivot in the remaining submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                divisors.push(BigInt::zero());
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            // clear column t and row t by division with remainder
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = div_round(&a[i][t], &a[t][t]);
                    for j in t..cols {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                    dirty = dirty || !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = div_round(&a[t][j], &a[t][t]);
                    for row in a.iter_mut().take(rows).skip(t) {
                        let sub = &q * &row[t];
                        row[j] -= sub;
                    }
                    dirty = dirty || !a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide every remaining entry; if not, fold the
            // offending row in and restart this pivot
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for jj in t..cols {
                            let add = a[i][jj].clone();
                            a[t][jj] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                divisors.push(a[t][t].abs());
                break;
            }
        }
    }
    // zeros last; divisors of equal rank order are already in chain form
    divisors.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => x.cmp(y),
    });
    let rank = divisors.iter().filter(|d| !d.is_zero()).count();
    (divisors, rank)
}

/// Nearest-integer quotient, so remainders satisfy |r| <= |d|/2.
fn div_round(nu: &BigInt, de: &BigInt) -> BigInt {
    let (q, r) = num_integer::div_rem(nu.clone(), de.clone());
    if r.abs() * 2 > de.abs() {
        if (r.sign() == de.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// H1 of the p-fold branched cyclic cover: abelianize the reduced Fox
/// matrix M(t), substitute the p x p cyclic permutation matrix for t, and
/// take the cokernel torsion. The group order is verified against Fox's
/// order formula; a mismatch is an internal-consistency error.
pub fn branched_cover_homology(jac: &FoxJacobian, p: u64) -> Result<FiniteAbelianGroup, Error> {
    if !crate::poly::is_prime(p) {
        return Err(Error::Poly(format!("branched cover requires prime p, got {p}")));
    }
    if jac.rows == 0 {
        return Ok(FiniteAbelianGroup::trivial()); // unknot
    }
    let big = cover_presentation_matrix(jac, p);
    let dim = big.len();
    let (divisors, rank) = smith_normal_form(&big);
    if rank < dim {
        return Err(Error::Consistency(format!(
            "free rank {} in branched cover cokernel at p = {p}",
            dim - rank
        )));
    }
    let orders: Vec<u64> = divisors
        .iter()
        .filter(|d| **d > BigInt::one())
        .map(|d| d.try_into().map_err(|_| Error::Consistency("cover order exceeds u64".into())))
        .collect::<Result<_, _>>()?;
    let group = FiniteAbelianGroup::from_cyclic_orders(&orders);
    let delta = alexander_poly(jac)?;
    let expect = order_formula(&delta, p)?;
    if group.order() != expect {
        return Err(Error::Consistency(format!(
            "branched cover order {} disagrees with the circulant formula {} at p = {p}",
            group.order(),
            expect
        )));
    }
    Ok(group)
}

/// The p(n-1) x p(n-1) integer presentation matrix of the branched cover
/// module: the reduced abelianized Fox matrix M(t) with the cyclic
/// permutation matrix C_p substituted for t. The deck transformation acts
/// on the cokernel basis (generator r, sheet i) by i -> i + 1 mod p.
pub fn cover_presentation_matrix(jac: &FoxJacobian, p: u64) -> IntMatrix {
    let m = jac.abelianized();
    let n = jac.rows;
    let pu = p as usize;
    let dim = n * pu;
    let mut big = vec![vec![BigInt::zero(); dim]; dim];
    for (r, row) in m.iter().enumerate().take(n) {
        // skip the deleted last column (index n = cols - 1)
        for (c, entry) in row.iter().enumerate().take(n) {
            for (e, coeff) in entry.pairs() {
                // t^e acts as C_p^e: basis vector i maps to i + e mod p
                for i in 0..pu {
                    let ii = (i as i64 + e).rem_euclid(p as i64) as usize;
                    big[r * pu + ii][c * pu + i] += coeff;
                }
            }
        }
    }
    big
}

/// Plans' doubling: every prime power occurs with even multiplicity.
pub fn plans_doubled(g: &FiniteAbelianGroup) -> bool {
    let mut i = 0;
    let pp = &g.prime_power_divisors;
    while i < pp.len() {
        if i + 1 >= pp.len() || pp[i + 1] != pp[i] {
            return false;
        }
        i += 2;
    }
    true
}

/// Whether g splits as a direct sum of subgroups of orders m and n: some
/// sub-multiset of the prime powers has product m (Krull-Schmidt), with
/// both sides individually doubled when required (odd p, Plans).
pub fn splits_with_orders(
    g: &FiniteAbelianGroup,
    m: &BigInt,
    n: &BigInt,
    require_doubled: bool,
) -> Result<bool, Error> {
    if m * n != g.order() {
        return Err(Error::Poly(format!("{m} * {n} != group order {}", g.order())));
    }
    let pp = &g.prime_power_divisors;
    if pp.len() > 24 {
        return Err(Error::Poly("too many prime-power factors for subset search".into()));
    }
    for mask in 0u32..1 << pp.len() {
        let mut prod = BigInt::one();
        for (i, &q) in pp.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod *= q;
            }
        }
        if &prod != m {
            continue;
        }
        if require_doubled {
            let side: Vec<u64> =
                pp.iter().enumerate().filter(|&(i, _)| mask & (1 << i) != 0).map(|(_, &q)| q).collect();
            let rest: Vec<u64> =
                pp.iter().enumerate().filter(|&(i, _)| mask & (1 << i) == 0).map(|(_, &q)| q).collect();
            if !plans_doubled(&FiniteAbelianGroup::from_prime_powers(side))
                || !plans_doubled(&FiniteAbelianGroup::from_prime_powers(rest))
            {
                continue;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fox_jacobian, parse_pd, wirtinger};

    fn snf_of(rows: &[&[i64]]) -> (Vec<BigInt>, usize) {
        let m: IntMatrix =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        smith_normal_form(&m)
    }

    #[test]
    fn snf_examples() {
        let (d, r) = snf_of(&[&[2, 0], &[0, 3]]);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(r, 2);
        let (d, r) = snf_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(d, vec![BigInt::one(); 3]);
        assert_eq!(r, 3);
        let (d, r) = snf_of(&[&[0]]);
        assert_eq!(d, vec![BigInt::zero()]);
        assert_eq!(r, 0);
    }

    #[test]
    fn snf_divisor_chain() {
        let (d, _) = snf_of(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        // chain condition
        for w in d.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        // |det| preserved
        let prod: BigInt = d.iter().product();
        assert_eq!(prod.abs(), BigInt::from(624u32));
    }

    #[test]
    fn group_from_orders() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[6, 4]);
        assert_eq!(g.prime_power_divisors, vec![2, 3, 4]);
        assert_eq!(g.order(), BigInt::from(24));
    }

    #[test]
    fn trefoil_double_cover() {
        let pd = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        let jac = fox_jacobian(&wirtinger(&pd).unwrap());
        let g = branched_cover_homology(&jac, 2).unwrap();
        assert_eq!(g.prime_power_divisors, vec![3]);
        let g3 = branched_cover_homology(&jac, 3).unwrap();
        assert_eq!(g3.prime_power_divisors, vec![2, 2]);
        assert!(plans_doubled(&g3));
    }

    #[test]
    fn plans_examples() {
        assert!(plans_doubled(&FiniteAbelianGroup::from_prime_powers(vec![8, 8, 7, 7])));
        assert!(!plans_doubled(&FiniteAbelianGroup::from_prime_powers(vec![27, 5])));
        assert!(plans_doubled(&FiniteAbelianGroup::trivial()));
    }

    #[test]
    fn splits_examples() {
        let g = FiniteAbelianGroup::from_prime_powers(vec![27, 5]);
        assert!(!splits_with_orders(&g, &3.into(), &45.into(), false).unwrap());
        assert!(!splits_with_orders(&g, &9.into(), &15.into(), false).unwrap());
        assert!(splits_with_orders(&g, &5.into(), &27.into(), false).unwrap());
        assert!(splits_with_orders(&g, &27.into(), &5.into(), false).unwrap());
        assert!(splits_with_orders(&g, &135.into(), &1.into(), false).unwrap());
        assert!(splits_with_orders(&g, &1.into(), &135.into(), false).unwrap());
        assert!(!splits_with_orders(&g, &15.into(), &9.into(), false).unwrap());
        assert!(splits_with_orders(&g, &15.into(), &10.into(), false).is_err());

        let h = FiniteAbelianGroup::from_prime_powers(vec![8, 8, 7, 7]);
        // order 16 needs a sub-multiset of {8,8,7,7} with product 16: none
        assert!(!splits_with_orders(&h, &16.into(), &196.into(), true).unwrap());
        assert!(splits_with_orders(&h, &64.into(), &49.into(), true).unwrap());
        assert!(splits_with_orders(&h, &49.into(), &64.into(), true).unwrap());
    }

    #[test]
    fn splits_matches_brute_force_symmetry() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[4, 6, 6, 35]);
        let total = g.order();
        for m in 1u32..=64 {
            let m = BigInt::from(m);
            if (&total % &m).is_zero() {
                let n = &total / &m;
                assert_eq!(
                    splits_with_orders(&g, &m, &n, false).unwrap(),
                    splits_with_orders(&g, &n, &m, false).unwrap()
                );
            }
        }
    }
}
