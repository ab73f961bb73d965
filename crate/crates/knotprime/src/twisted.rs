//! Twisted chain complexes from the Fox Jacobian and a metacyclic
//! representation; twisted Betti numbers over a chosen field backend.

use serde::{Deserialize, Serialize};

use crate::diagram::{FoxJacobian, WirtingerPresentation};
use crate::error::Error;
use crate::fields::{rank_nullity, FieldCtx};
use crate::metacyclic::{rep_generator_matrices, MetacyclicRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTriple {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
}

/// The pn x p(n-1) twisted second boundary map: the transposed Fox matrix
/// with each group-ring entry evaluated through the representation
/// (1 -> I, x_i -> M_i) and transposed blockwise, so that the chain
/// condition is the transpose of Fox's identity
/// sum_i Phi(dr/dx_i)(M_i - I) = Phi(r) - I = 0.
pub fn boundary2<F: FieldCtx>(
    jac: &FoxJacobian,
    rep: &MetacyclicRep,
    f: &F,
    zeta: &F::Elem,
) -> Vec<Vec<F::Elem>> {
    let p = rep.params.p as usize;
    let n = jac.cols;
    let ms = rep_generator_matrices(rep, f, zeta);
    let mut out = vec![vec![f.zero(); p * jac.rows]; p * n];
    for (r, row) in jac.entries.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            // transposed: Fox entry (r, c) lands at block (c, r)
            for (&key, &coeff) in entry {
                for i in 0..p {
                    for j in 0..p {
                        let m_ij = if key == 0 {
                            if i == j {
                                f.one()
                            } else {
                                f.zero()
                            }
                        } else {
                            ms[key - 1][j][i].clone()
                        };
                        if f.is_zero(&m_ij) {
                            continue;
                        }
                        let scaled = f.mul(&f.from_i64(coeff), &m_ij);
                        let cur = &out[c * p + i][r * p + j];
                        out[c * p + i][r * p + j] = f.add(cur, &scaled);
                    }
                }
            }
        }
    }
    out
}

/// The p x pn twisted first boundary map: block column i is (M_i - I)
/// transposed, matching the blockwise-transposed second boundary.
pub fn boundary1<F: FieldCtx>(
    pres: &WirtingerPresentation,
    rep: &MetacyclicRep,
    f: &F,
    zeta: &F::Elem,
) -> Vec<Vec<F::Elem>> {
    let p = rep.params.p as usize;
    let n = pres.n;
    let ms = rep_generator_matrices(rep, f, zeta);
    let mut out = vec![vec![f.zero(); p * n]; p];
    for (g, m) in ms.iter().enumerate() {
        for i in 0..p {
            for j in 0..p {
                let mut v = m[j][i].clone();
                if i == j {
                    v = f.sub(&v, &f.one());
                }
                out[i][g * p + j] = v;
            }
        }
    }
    out
}

/// Twisted Betti numbers; asserts the chain condition d1 * d2 = 0 first.
pub fn betti<F: FieldCtx>(
    jac: &FoxJacobian,
    pres: &WirtingerPresentation,
    rep: &MetacyclicRep,
    f: &F,
    zeta: &F::Elem,
) -> Result<BettiTriple, Error> {
    let d2 = boundary2(jac, rep, f, zeta);
    let d1 = boundary1(pres, rep, f, zeta);
    for drow in &d1 {
        for c in 0..d2[0].len() {
            let mut acc = f.zero();
            for (k, dk) in drow.iter().enumerate() {
                if !f.is_zero(dk) && !f.is_zero(&d2[k][c]) {
                    acc = f.add(&acc, &f.mul(dk, &d2[k][c]));
                }
            }
            if !f.is_zero(&acc) {
                return Err(Error::Consistency(format!(
                    "chain condition d1 d2 = 0 violated over {}",
                    f.describe()
                )));
            }
        }
    }
    let p = rep.params.p as usize;
    let (rank2, null2) = rank_nullity(f, &d2);
    let (rank1, null1) = rank_nullity(f, &d1);
    Ok(BettiTriple { b0: p - rank1, b1: null1 - rank2, b2: null2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fox_jacobian, parse_pd, wirtinger};
    use crate::fields::{find_prime_with_root, primitive_root_of_unity, CyclotomicField, PrimeField};
    use crate::metacyclic::{enumerate_reps, reduce_to_classes, MetacyclicParams, MetacyclicRep};

    const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    fn trefoil_setup() -> (crate::diagram::PDCode, WirtingerPresentation, FoxJacobian) {
        let pd = parse_pd(TREFOIL).unwrap();
        let pres = wirtinger(&pd).unwrap();
        let jac = fox_jacobian(&pres);
        (pd, pres, jac)
    }

    #[test]
    fn abelian_rep_betti() {
        let (_, pres, jac) = trefoil_setup();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let rep = MetacyclicRep { params, alpha: vec![0, 0, 0] };
        let q = find_prime_with_root(3, 2);
        let f = PrimeField::new(q).unwrap();
        let zeta = primitive_root_of_unity(q, 3).unwrap();
        let b = betti(&jac, &pres, &rep, &f, &zeta).unwrap();
        assert_eq!((b.b0, b.b1, b.b2), (1, 1, 0));
    }

    #[test]
    fn trefoil_dihedral_betti() {
        let (_, pres, jac) = trefoil_setup();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let classes = reduce_to_classes(&sols, &pres, true).unwrap();
        assert_eq!(classes.len(), 1);
        let q = find_prime_with_root(3, 2); // 7
        let f = PrimeField::new(q).unwrap();
        let zeta = primitive_root_of_unity(q, 3).unwrap();
        let d2 = boundary2(&jac, &classes[0].rep, &f, &zeta);
        assert_eq!((d2.len(), d2[0].len()), (6, 4));
        assert_eq!(rank_nullity(&f, &d2).1, 1);
        let b = betti(&jac, &pres, &classes[0].rep, &f, &zeta).unwrap();
        assert_eq!(b.b0, 0);
        assert_eq!(b.b1, b.b2);
        assert!(b.b1 >= 1);
    }

    #[test]
    fn finite_and_cyclotomic_agree_on_trefoil() {
        let (_, pres, jac) = trefoil_setup();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let classes = reduce_to_classes(&sols, &pres, true).unwrap();
        let q = find_prime_with_root(3, 2);
        let fq = PrimeField::new(q).unwrap();
        let zq = primitive_root_of_unity(q, 3).unwrap();
        let bq = betti(&jac, &pres, &classes[0].rep, &fq, &zq).unwrap();
        let kc = CyclotomicField::new(3);
        let zc = kc.zeta();
        let bc = betti(&jac, &pres, &classes[0].rep, &kc, &zc).unwrap();
        assert_eq!(bq, bc);
    }

    #[test]
    fn betti_constant_on_class() {
        // unit-scaled members of a class share Betti numbers
        let (_, pres, jac) = trefoil_setup();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let crate::metacyclic::RepSolutions::Prime(space) = &sols else { panic!() };
        let q = find_prime_with_root(3, 2);
        let f = PrimeField::new(q).unwrap();
        let zeta = primitive_root_of_unity(q, 3).unwrap();
        let mut seen = Vec::new();
        for alpha in space.all_alphas() {
            if alpha.iter().all(|&x| x == 0) {
                continue;
            }
            let rep = MetacyclicRep { params, alpha };
            seen.push(betti(&jac, &pres, &rep, &f, &zeta).unwrap());
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
    }
}
