//! Metacyclic groups M(d,p,a) = <r,t | r^d = t^p = 1, t r t^-1 = r^a>,
//! their canonical p-dimensional matrix representation, and complete
//! enumeration of metacyclic representations of a knot group from its
//! Wirtinger presentation (meridians mapping into the coset t<r>).

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::{FoxJacobian, WirtingerPresentation};
use crate::error::Error;
use crate::fields::{nullspace, FieldCtx, PrimeField};
use crate::poly::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetacyclicParams {
    pub d: u64,
    pub p: u64,
    pub a: u64,
}

impl MetacyclicParams {
    pub fn new(d: u64, p: u64, a: u64) -> Result<Self, Error> {
        if d < 1 {
            return Err(Error::Metacyclic("d must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::Metacyclic(format!("p = {p} is not prime")));
        }
        let a = a % d.max(1);
        if pow_mod(a, p, d) != 1 % d {
            return Err(Error::Metacyclic(format!("a^p != 1: ({a})^{p} mod {d}")));
        }
        Ok(MetacyclicParams { d, p, a })
    }

    pub fn is_abelian(&self) -> bool {
        self.d == 1 || self.a == 1
    }
}

/// Meridian assignment x_i -> t r^{alpha_i}, with alpha_1 = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetacyclicRep {
    pub params: MetacyclicParams,
    pub alpha: Vec<u64>,
}

impl MetacyclicRep {
    /// Relator congruence (1-a) alpha_a + a alpha_b - alpha_c = 0 mod d,
    /// re-verified independently of the solver.
    pub fn satisfies(&self, pres: &WirtingerPresentation) -> bool {
        let d = self.params.d as i128;
        let a = self.params.a as i128;
        self.alpha.len() == pres.n
            && self.alpha[0] == 0
            && pres.relators.iter().all(|&(ra, rb, rc)| {
                let (x, y, z) = (
                    self.alpha[ra - 1] as i128,
                    self.alpha[rb - 1] as i128,
                    self.alpha[rc - 1] as i128,
                );
                ((1 - a) * x + a * y - z).rem_euclid(d) == 0
            })
    }

    /// Surjective onto M(d,p,a): alpha nonzero modulo every prime factor
    /// of d (so both projections are nonabelian when d = d1 d2).
    pub fn is_surjective(&self) -> bool {
        crate::abelian::prime_power_parts(self.params.d).iter().all(|&pp| {
            let ell = smallest_prime_factor(pp);
            self.alpha.iter().any(|&x| x % ell != 0)
        })
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut ell = 2;
    while ell * ell <= n {
        if n.is_multiple_of(ell) {
            return ell;
        }
        ell += 1;
    }
    n
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// All residues a mod d with a^p = 1, optionally excluding a = 1.
pub fn valid_a_values(d: u64, p: u64, require_nonabelian: bool) -> Vec<u64> {
    (0..d.max(1))
        .filter(|&a| pow_mod(a, p, d) == 1 % d)
        .filter(|&a| !(require_nonabelian && (a == 1 % d)))
        .collect()
}

/// CRT-combine (d1, a1) and (d2, a2) into (d1 d2, a).
pub fn crt_a(d1: u64, a1: u64, d2: u64, a2: u64) -> Result<(u64, u64), Error> {
    if num_integer::gcd(d1, d2) != 1 {
        return Err(Error::Metacyclic(format!("moduli {d1}, {d2} not coprime")));
    }
    let d = d1 * d2;
    let a = (0..d)
        .find(|&x| x % d1 == a1 % d1 && x % d2 == a2 % d2)
        .expect("CRT solution exists for coprime moduli");
    Ok((d, a))
}

/// The solution space of meridian-exponent vectors for one prime modulus:
/// a kernel basis of the relator system over F_d, stored as full alpha
/// vectors (alpha_1 = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpace {
    pub d: u64,
    pub a: u64,
    pub p: u64,
    pub n: usize,
    pub basis: Vec<Vec<u64>>,
}

impl RepSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn alpha_from_coords(&self, coords: &[u64]) -> Vec<u64> {
        let mut alpha = vec![0u64; self.n];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (x, &bx) in alpha.iter_mut().zip(b) {
                *x = (*x + c * bx) % self.d;
            }
        }
        alpha
    }

    /// Every solution vector, the zero (cyclic) one included: d^dim total.
    pub fn all_alphas(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut coords = vec![0u64; self.dim()];
        loop {
            out.push(self.alpha_from_coords(&coords));
            let mut i = 0;
            while i < coords.len() {
                coords[i] += 1;
                if coords[i] < self.d {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
            if i == coords.len() {
                break;
            }
        }
        out
    }

    /// One representative per projective class of nonzero solutions:
    /// coordinate vectors with first nonzero entry 1, lexicographic.
    pub fn projective_class_coords(&self) -> Vec<Vec<u64>> {
        let k = self.dim();
        let mut out = Vec::new();
        for lead in 0..k {
            // entries before `lead` are 0, entry at `lead` is 1
            let free = k - lead - 1;
            let mut tail = vec![0u64; free];
            loop {
                let mut coords = vec![0u64; k];
                coords[lead] = 1;
                coords[lead + 1..].copy_from_slice(&tail);
                out.push(coords);
                let mut i = 0;
                while i < free {
                    tail[i] += 1;
                    if tail[i] < self.d {
                        break;
                    }
                    tail[i] = 0;
                    i += 1;
                }
                if i == free {
                    break;
                }
            }
        }
        out
    }
}

/// Solutions for a supported modulus: prime d, or d = d1 d2 with distinct
/// primes combined by CRT.
#[derive(Clone, Debug)]
pub enum RepSolutions {
    Prime(RepSpace),
    Product(RepSpace, RepSpace),
}

/// One representative per orbit of alpha under unit scaling (componentwise
/// in the CRT case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepClass {
    pub rep: MetacyclicRep,
    pub class_size: u64,
}

pub fn enumerate_reps(
    pres: &WirtingerPresentation,
    params: &MetacyclicParams,
) -> Result<RepSolutions, Error> {
    let parts = crate::abelian::prime_power_parts(params.d);
    match parts.len() {
        1 if is_prime(params.d) => Ok(RepSolutions::Prime(solve_prime(pres, params.d, params.p, params.a)?)),
        2 if parts.iter().all(|&q| is_prime(q)) => {
            let (d1, d2) = (parts[0], parts[1]);
            let s1 = solve_prime(pres, d1, params.p, params.a % d1)?;
            let s2 = solve_prime(pres, d2, params.p, params.a % d2)?;
            Ok(RepSolutions::Product(s1, s2))
        }
        _ => Err(Error::Metacyclic(format!(
            "unsupported modulus {}: need a prime or a product of two distinct primes",
            params.d
        ))),
    }
}

/// Kernel of the relator system over F_d with alpha_1 eliminated.
fn solve_prime(pres: &WirtingerPresentation, d: u64, p: u64, a: u64) -> Result<RepSpace, Error> {
    MetacyclicParams::new(d, p, a)?;
    let f = PrimeField::new(d)?;
    let n = pres.n;
    // unknowns alpha_2 .. alpha_n (alpha_1 = 0)
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(pres.relators.len());
    for &(ra, rb, rc) in &pres.relators {
        let mut row = vec![0u64; n - 1];
        let mut add = |gen: usize, coeff: u64| {
            if gen >= 2 {
                row[gen - 2] = f.add(&row[gen - 2], &coeff);
            }
        };
        add(ra, f.sub(&1, &(a % d)));
        add(rb, a % d);
        add(rc, d - 1);
        m.push(row);
    }
    let kernel = nullspace(&f, &m);
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut alpha = vec![0u64];
            alpha.extend(v);
            alpha
        })
        .collect();
    Ok(RepSpace { d, a: a % d, p, n, basis })
}

fn crt_alpha(s1: &RepSpace, a1: &[u64], s2: &RepSpace, a2: &[u64]) -> Vec<u64> {
    let d = s1.d * s2.d;
    a1.iter()
        .zip(a2)
        .map(|(&x1, &x2)| (0..d).find(|&x| x % s1.d == x1 && x % s2.d == x2).unwrap())
        .collect()
}

/// Reduce the solutions to unit-scaling classes. When surjective_only is
/// set, keep only classes surjective onto M(d,p,a): nonzero solutions for
/// prime d, both components nonzero for a product.
pub fn reduce_to_classes(
    sols: &RepSolutions,
    pres: &WirtingerPresentation,
    surjective_only: bool,
) -> Result<Vec<RepClass>, Error> {
    let mut out = Vec::new();
    match sols {
        RepSolutions::Prime(s) => {
            let params = MetacyclicParams::new(s.d, s.p, s.a)?;
            for coords in s.projective_class_coords() {
                let rep = MetacyclicRep { params, alpha: s.alpha_from_coords(&coords) };
                debug_assert!(rep.satisfies(pres));
                out.push(RepClass { rep, class_size: s.d - 1 });
            }
            if !surjective_only {
                let zero = MetacyclicRep { params, alpha: vec![0; s.n] };
                out.push(RepClass { rep: zero, class_size: 1 });
            }
        }
        RepSolutions::Product(s1, s2) => {
            let (d, a) = crt_a(s1.d, s1.a, s2.d, s2.a)?;
            let params = MetacyclicParams::new(d, s1.p, a)?;
            let classes1: Vec<Vec<u64>> =
                s1.projective_class_coords().iter().map(|c| s1.alpha_from_coords(c)).collect();
            let classes2: Vec<Vec<u64>> =
                s2.projective_class_coords().iter().map(|c| s2.alpha_from_coords(c)).collect();
            let zero1 = vec![0u64; s1.n];
            let zero2 = vec![0u64; s2.n];
            let with_zero = |cls: &[Vec<u64>], zero: &Vec<u64>, incl: bool| {
                let mut v: Vec<(Vec<u64>, u64, bool)> =
                    cls.iter().map(|x| (x.clone(), 1, true)).collect();
                if incl {
                    v.push((zero.clone(), 1, false));
                }
                v
            };
            for (a1, _, nz1) in with_zero(&classes1, &zero1, !surjective_only) {
                for (a2, _, nz2) in with_zero(&classes2, &zero2, !surjective_only) {
                    if surjective_only && !(nz1 && nz2) {
                        continue;
                    }
                    if !surjective_only && !nz1 && !nz2 {
                        continue; // the zero rep is added once below
                    }
                    let rep = MetacyclicRep {
                        params,
                        alpha: crt_alpha(s1, &a1, s2, &a2),
                    };
                    debug_assert!(rep.satisfies(pres));
                    let size = if nz1 { s1.d - 1 } else { 1 } * if nz2 { s2.d - 1 } else { 1 };
                    out.push(RepClass { rep, class_size: size });
                }
            }
            if !surjective_only {
                out.push(RepClass {
                    rep: MetacyclicRep { params, alpha: vec![0; s1.n] },
                    class_size: 1,
                });
            }
        }
    }
    Ok(out)
}

/// Reduce a rep mod d1 | d (both alpha and a).
pub fn project_rep(rep: &MetacyclicRep, d1: u64) -> Result<MetacyclicRep, Error> {
    if !rep.params.d.is_multiple_of(d1) {
        return Err(Error::Metacyclic(format!("{d1} does not divide modulus {}", rep.params.d)));
    }
    Ok(MetacyclicRep {
        params: MetacyclicParams::new(d1, rep.params.p, rep.params.a % d1)?,
        alpha: rep.alpha.iter().map(|&x| x % d1).collect(),
    })
}

/// Psi(t) (cyclic permutation, e_j -> e_{j-1}) and Psi(r)
/// (diag(zeta, zeta^a, ..., zeta^{a^{p-1}})), satisfying T R T^-1 = R^a.
pub fn psi_matrices<F: FieldCtx>(
    params: &MetacyclicParams,
    f: &F,
    zeta: &F::Elem,
) -> (Vec<Vec<F::Elem>>, Vec<Vec<F::Elem>>) {
    let p = params.p as usize;
    let mut t = vec![vec![f.zero(); p]; p];
    for j in 0..p {
        t[(j + p - 1) % p][j] = f.one();
    }
    let mut r = vec![vec![f.zero(); p]; p];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = f.pow(zeta, pow_mod(params.a, i as u64, params.d));
    }
    (t, r)
}

/// M_i = Psi(t) Psi(r)^{alpha_i} for each meridian generator.
pub fn rep_generator_matrices<F: FieldCtx>(
    rep: &MetacyclicRep,
    f: &F,
    zeta: &F::Elem,
) -> Vec<Vec<Vec<F::Elem>>> {
    let p = rep.params.p as usize;
    let (t, _) = psi_matrices(&rep.params, f, zeta);
    rep.alpha
        .iter()
        .map(|&k| {
            // T * diag(zeta^{k a^i}): scale column i of T
            let mut m = t.clone();
            for (i, scale) in (0..p)
                .map(|i| {
                    let e = (k as u128 * pow_mod(rep.params.a, i as u64, rep.params.d) as u128
                        % rep.params.d as u128) as u64;
                    f.pow(zeta, e)
                })
                .enumerate()
            {
                for row in m.iter_mut() {
                    row[i] = f.mul(&row[i], &scale);
                }
            }
            m
        })
        .collect()
}

/// Cross-check of the solution count against the eigenvector count on the
/// branched cover: homomorphisms psi: H1(cover) -> Z_d with psi T* = a psi,
/// computed from the integer presentation matrix. Returns (solution count
/// exponent, eigen-hom count exponent) as dimensions over F_d; they must
/// agree or an error is raised.
pub fn rep_dimension_check(
    jac: &FoxJacobian,
    pres: &WirtingerPresentation,
    p: u64,
    d: u64,
    a: u64,
) -> Result<(usize, usize), Error> {
    if !is_prime(d) {
        return Err(Error::Metacyclic(format!("d = {d} must be prime")));
    }
    let space = solve_prime(pres, d, p, a)?;
    let dim1 = space.dim();

    let f = PrimeField::new(d)?;
    let big = crate::abelian::cover_presentation_matrix(jac, p);
    let nn = big.len();
    let pu = p as usize;
    // rows: transpose of the presentation (y^T B = 0) stacked with the
    // deck-eigenvector condition (P^T - a I) y = 0, P = I (x) C_p
    let mut sys: Vec<Vec<u64>> = Vec::with_capacity(2 * nn);
    for j in 0..nn {
        sys.push((0..nn).map(|i| reduce_big(&big[i][j], d)).collect());
    }
    for i in 0..nn {
        let mut row = vec![0u64; nn];
        // P e_{(r,s)} = e_{(r,s+1)}; (P^T y)_i = y_{P(i)}
        let (r, s) = (i / pu, i % pu);
        let pi = r * pu + (s + 1) % pu;
        row[pi] = f.add(&row[pi], &1);
        row[i] = f.sub(&row[i], &(a % d));
        sys.push(row);
    }
    let dim2 = nullspace(&f, &sys).len();
    if dim1 != dim2 {
        return Err(Error::Consistency(format!(
            "rep count d^{dim1} != eigen-hom count d^{dim2} (d = {d}, p = {p}, a = {a})"
        )));
    }
    Ok((dim1, dim2))
}

fn reduce_big(x: &BigInt, d: u64) -> u64 {
    let r = x % d;
    let r: i64 = (&r).try_into().unwrap();
    r.rem_euclid(d as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fox_jacobian, parse_pd, wirtinger};
    use crate::fields::{find_prime_with_root, primitive_root_of_unity};

    const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    #[test]
    fn a_values() {
        assert_eq!(valid_a_values(5, 2, true), vec![4]);
        assert_eq!(valid_a_values(13, 3, true), vec![3, 9]);
        assert_eq!(valid_a_values(7, 2, true), vec![6]);
        assert_eq!(valid_a_values(5, 3, true), Vec::<u64>::new());
        assert!(valid_a_values(7, 2, false).contains(&1));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_a(7, 2, 13, 3).unwrap(), (91, 16));
        assert_eq!(crt_a(5, 4, 7, 6).unwrap(), (35, 34));
        assert_eq!(crt_a(5, 4, 1, 0).unwrap(), (5, 4));
        assert!(crt_a(5, 4, 5, 4).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(MetacyclicParams::new(5, 2, 4).is_ok());
        assert!(MetacyclicParams::new(5, 2, 3).is_err());
        assert!(MetacyclicParams::new(5, 4, 4).is_err());
        assert!(MetacyclicParams::new(1, 2, 0).unwrap().is_abelian());
    }

    #[test]
    fn trefoil_dihedral_reps() {
        let pd = parse_pd(TREFOIL).unwrap();
        let pres = wirtinger(&pd).unwrap();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let RepSolutions::Prime(space) = &sols else { panic!() };
        assert_eq!(space.dim(), 1);
        assert_eq!(space.all_alphas().len(), 3);
        let classes = reduce_to_classes(&sols, &pres, true).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes[0].rep.is_surjective());
        assert!(classes[0].rep.satisfies(&pres));
    }

    #[test]
    fn unknot_has_only_zero() {
        let pres = crate::diagram::WirtingerPresentation::unknot();
        let params = MetacyclicParams::new(5, 2, 4).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let classes = reduce_to_classes(&sols, &pres, true).unwrap();
        assert!(classes.is_empty());
        let all = reduce_to_classes(&sols, &pres, false).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].rep.alpha, vec![0]);
    }

    #[test]
    fn projective_class_counts() {
        // dim-2 space over F_11 has 12 projective classes
        let space = RepSpace {
            d: 11,
            a: 10,
            p: 2,
            n: 3,
            basis: vec![vec![0, 1, 0], vec![0, 0, 1]],
        };
        let classes = space.projective_class_coords();
        assert_eq!(classes.len(), 12);
        assert!(classes.contains(&vec![1, 0]));
        assert!(classes.contains(&vec![0, 1]));
        assert!(classes.contains(&vec![1, 7]));
    }

    #[test]
    fn psi_defining_relations() {
        let q = find_prime_with_root(13, 2);
        let zeta = primitive_root_of_unity(q, 13).unwrap();
        let f = PrimeField::new(q).unwrap();
        let params = MetacyclicParams::new(13, 3, 3).unwrap();
        let (t, r) = psi_matrices(&params, &f, &zeta);
        // T^p = I, R^d = I, T R T^-1 = R^a
        assert_eq!(mat_pow(&f, &t, 3), identity(&f, 3));
        assert_eq!(mat_pow(&f, &r, 13), identity(&f, 3));
        let lhs = mat_mul(&f, &mat_mul(&f, &t, &r), &mat_pow(&f, &t, 2));
        assert_eq!(lhs, mat_pow(&f, &r, 3));
    }

    #[test]
    fn generator_matrices_satisfy_relations() {
        let pd = parse_pd(TREFOIL).unwrap();
        let pres = wirtinger(&pd).unwrap();
        let params = MetacyclicParams::new(3, 2, 2).unwrap();
        let sols = enumerate_reps(&pres, &params).unwrap();
        let q = find_prime_with_root(3, 2); // 7
        let zeta = primitive_root_of_unity(q, 3).unwrap();
        let f = PrimeField::new(q).unwrap();
        for class in reduce_to_classes(&sols, &pres, false).unwrap() {
            let ms = rep_generator_matrices(&class.rep, &f, &zeta);
            for &(ra, rb, rc) in &pres.relators {
                let lhs = mat_mul(&f, &ms[ra - 1], &ms[rb - 1]);
                let rhs = mat_mul(&f, &ms[rc - 1], &ms[ra - 1]);
                assert_eq!(lhs, rhs); // x_a x_b = x_c x_a
            }
        }
    }

    #[test]
    fn dimension_check_trefoil() {
        let pd = parse_pd(TREFOIL).unwrap();
        let pres = wirtinger(&pd).unwrap();
        let jac = fox_jacobian(&pres);
        // H1 of the double cover is Z_3, T* acts as -1
        let (d1, d2) = rep_dimension_check(&jac, &pres, 2, 3, 2).unwrap();
        assert_eq!((d1, d2), (1, 1));
        // d = 5 does not divide |H1| = 3: only the zero solution
        let (d1, d2) = rep_dimension_check(&jac, &pres, 2, 5, 4).unwrap();
        assert_eq!((d1, d2), (0, 0));
    }

    #[test]
    fn projection() {
        let params = MetacyclicParams::new(35, 2, 34).unwrap();
        let rep = MetacyclicRep { params, alpha: vec![0, 12, 29] };
        let r5 = project_rep(&rep, 5).unwrap();
        assert_eq!(r5.params.a, 4);
        assert_eq!(r5.alpha, vec![0, 2, 4]);
        let r7 = project_rep(&rep, 7).unwrap();
        assert_eq!(r7.params.a, 6);
        assert_eq!(r7.alpha, vec![0, 5, 1]);
        assert!(project_rep(&rep, 3).is_err());
    }

    fn identity(f: &PrimeField, n: usize) -> Vec<Vec<u64>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
    }

    fn mat_mul(f: &PrimeField, x: &[Vec<u64>], y: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = x.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&x[i][k], &y[k][j]))))
                    .collect()
            })
            .collect()
    }

    fn mat_pow(f: &PrimeField, x: &[Vec<u64>], e: u64) -> Vec<Vec<u64>> {
        let mut acc = identity(f, x.len());
        for _ in 0..e {
            acc = mat_mul(f, &acc, x);
        }
        acc
    }
}
