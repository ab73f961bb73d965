//! Constructive PD-code generation: rational (2-bridge) knots, Montesinos
//! sums of rational tangles, and braid closures. Diagrams are built as
//! 4-valent shadows and converted to PD codes by traversal; alternating
//! over/under assignment is consistent on any planar shadow (Gauss parity).

use crate::diagram::PDCode;
use crate::error::Error;

/// Crossing slots in counterclockwise order. Opposite slots (s, s+2) carry
/// the same strand through the crossing.
const SW: usize = 0;
const SE: usize = 1;
const NE: usize = 2;
const NW: usize = 3;

/// A 4-valent planar diagram: half-edge `4c + s` is slot `s` of crossing
/// `c`; `mate` pairs half-edges into edges. `under_axis[c]` prescribes the
/// under-strand slot pair {axis, axis+2}, or None for alternating
/// assignment by traversal parity.
#[derive(Clone, Debug, Default)]
pub struct Shadow {
    mate: Vec<Option<usize>>,
    under_axis: Vec<Option<usize>>,
}

impl Shadow {
    pub fn n(&self) -> usize {
        self.under_axis.len()
    }

    fn new_crossing(&mut self, under_axis: Option<usize>) -> usize {
        let c = self.under_axis.len();
        self.under_axis.push(under_axis);
        self.mate.extend([None; 4]);
        c
    }

    fn connect(&mut self, h1: usize, h2: usize) {
        debug_assert!(self.mate[h1].is_none() && self.mate[h2].is_none());
        self.mate[h1] = Some(h2);
        self.mate[h2] = Some(h1);
    }

    /// Traverse the single strand and emit a PD code: edges are labeled
    /// 1..2n along the orientation, each crossing's tuple starts at the
    /// incoming under-strand slot and proceeds counterclockwise.
    pub fn to_pd(&self) -> Result<PDCode, Error> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Pd("empty shadow".into()));
        }
        for m in &self.mate {
            if m.is_none() {
                return Err(Error::Pd("shadow has unconnected half-edges".into()));
            }
        }
        let mut label = vec![0u32; 4 * n];
        let mut passages: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (position, entry slot)
        let mut h = 0usize; // enter crossing 0 at slot SW
        for pos in 1..=2 * n {
            let (c, s) = (h / 4, h % 4);
            passages[c].push((pos, s));
            label[h] = pos as u32;
            let out = 4 * c + (s + 2) % 4;
            label[out] = if pos == 2 * n { 1 } else { pos as u32 + 1 };
            h = self.mate[out].expect("all half-edges connected");
        }
        if h != 0 || passages.iter().any(|p| p.len() != 2) {
            return Err(Error::Pd("shadow is not a single-component knot".into()));
        }
        let mut crossings = Vec::with_capacity(n);
        for (c, pass) in passages.iter().enumerate() {
            let (i, si) = pass[0];
            let (j, sj) = pass[1];
            let under_slot = match self.under_axis[c] {
                Some(axis) => {
                    if si % 2 == axis % 2 {
                        si
                    } else {
                        sj
                    }
                }
                None => {
                    // alternating: planarity guarantees opposite parities
                    debug_assert!((i + j) % 2 == 1);
                    if i % 2 == 1 {
                        si
                    } else {
                        sj
                    }
                }
            };
            let t: Vec<u32> =
                (0..4).map(|k| label[4 * c + (under_slot + k) % 4]).collect();
            crossings.push([t[0], t[1], t[2], t[3]]);
        }
        let pd = PDCode { crossings };
        pd.validate()?;
        Ok(pd)
    }
}

/// An open tangle inside a shadow: its four corner half-edges.
#[derive(Clone, Copy, Debug)]
pub struct Tangle {
    pub nw: usize,
    pub ne: usize,
    pub sw: usize,
    pub se: usize,
}

/// Build a rational tangle from an all-positive twist vector, alternating
/// horizontal twist regions (first) and vertical ones.
pub fn rational_tangle(shadow: &mut Shadow, twists: &[u64]) -> Result<Tangle, Error> {
    if twists.is_empty() || twists[0] == 0 || twists.contains(&0) {
        return Err(Error::Pd(format!("invalid twist vector {twists:?}")));
    }
    let c0 = shadow.new_crossing(None);
    let mut t = Tangle { nw: 4 * c0 + NW, ne: 4 * c0 + NE, sw: 4 * c0 + SW, se: 4 * c0 + SE };
    for (i, &a) in twists.iter().enumerate() {
        let horizontal = i % 2 == 0;
        let count = if i == 0 { a - 1 } else { a };
        for _ in 0..count {
            let c = shadow.new_crossing(None);
            if horizontal {
                shadow.connect(t.ne, 4 * c + NW);
                shadow.connect(t.se, 4 * c + SW);
                t.ne = 4 * c + NE;
                t.se = 4 * c + SE;
            } else {
                shadow.connect(t.sw, 4 * c + NW);
                shadow.connect(t.se, 4 * c + NE);
                t.sw = 4 * c + SW;
                t.se = 4 * c + SE;
            }
        }
    }
    Ok(t)
}

/// Horizontal tangle sum: glue T1's east side to T2's west side.
pub fn tangle_sum(shadow: &mut Shadow, t1: Tangle, t2: Tangle) -> Tangle {
    shadow.connect(t1.ne, t2.nw);
    shadow.connect(t1.se, t2.sw);
    Tangle { nw: t1.nw, ne: t2.ne, sw: t1.sw, se: t2.se }
}

/// Numerator closure: join the two north corners and the two south corners.
pub fn numerator_closure(shadow: &mut Shadow, t: Tangle) -> Result<PDCode, Error> {
    let mut shadow = shadow.clone();
    shadow.connect(t.nw, t.ne);
    shadow.connect(t.sw, t.se);
    shadow.to_pd()
}

/// All-positive continued fraction of p/q (p > q >= 1 coprime).
pub fn continued_fraction(mut p: u64, mut q: u64) -> Result<Vec<u64>, Error> {
    if q == 0 || q >= p || num_integer::gcd(p, q) != 1 {
        return Err(Error::Pd(format!("invalid 2-bridge fraction {p}/{q}")));
    }
    let mut cf = Vec::new();
    while q > 0 {
        cf.push(p / q);
        let r = p % q;
        p = q;
        q = r;
    }
    Ok(cf)
}

/// The 2-bridge knot K(p/q) as an alternating PD code (p odd).
pub fn two_bridge(p: u64, q: u64) -> Result<PDCode, Error> {
    if p.is_multiple_of(2) {
        return Err(Error::Pd(format!("{p}/{q} is a two-component link, not a knot")));
    }
    let mut cf = continued_fraction(p, q)?;
    // the twist vector must end on a horizontal region (odd length);
    // [..., a] = [..., a-1, 1] keeps the fraction's numerator
    if cf.len() % 2 == 0 {
        let last = *cf.last().unwrap();
        if last == 1 {
            cf.pop();
            *cf.last_mut().unwrap() += 1;
        } else {
            *cf.last_mut().unwrap() = last - 1;
            cf.push(1);
        }
    }
    let mut shadow = Shadow::default();
    let t = rational_tangle(&mut shadow, &cf)?;
    numerator_closure(&mut shadow, t)
}

/// An alternating Montesinos-style knot: the numerator closure of a
/// horizontal sum of rational tangles.
pub fn montesinos(twist_vectors: &[Vec<u64>]) -> Result<PDCode, Error> {
    let mut shadow = Shadow::default();
    let mut acc: Option<Tangle> = None;
    for tw in twist_vectors {
        let t = rational_tangle(&mut shadow, tw)?;
        acc = Some(match acc {
            None => t,
            Some(prev) => tangle_sum(&mut shadow, prev, t),
        });
    }
    let t = acc.ok_or_else(|| Error::Pd("montesinos needs at least one tangle".into()))?;
    numerator_closure(&mut shadow, t)
}

/// Closure of a braid word on `strands` strands; letters are ±i for
/// generator sigma_i (1-based). The closure must be a knot.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PDCode, Error> {
    if strands < 2 {
        return Err(Error::Pd("need at least two strands".into()));
    }
    let mut shadow = Shadow::default();
    let mut top: Vec<Option<usize>> = vec![None; strands + 1];
    let mut bottom: Vec<Option<usize>> = vec![None; strands + 1];
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(Error::Pd(format!("letter {letter} out of range for {strands} strands")));
        }
        // positive letter: the SW->NE strand crosses over
        let axis = if letter > 0 { SE } else { SW };
        let c = shadow.new_crossing(Some(axis));
        for (pos, slot) in [(i, SW), (i + 1, SE)] {
            match top[pos] {
                Some(h) => shadow.connect(h, 4 * c + slot),
                None => bottom[pos] = Some(4 * c + slot),
            }
        }
        top[i] = Some(4 * c + NW);
        top[i + 1] = Some(4 * c + NE);
    }
    for pos in 1..=strands {
        match (top[pos], bottom[pos]) {
            (Some(t), Some(b)) => shadow.connect(t, b),
            _ => return Err(Error::Pd(format!("strand {pos} carries no crossing"))),
        }
    }
    shadow.to_pd()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{fox_jacobian, wirtinger};
    use crate::poly::{alexander_poly, LaurentPoly1};

    fn delta_of(pd: &PDCode) -> LaurentPoly1 {
        alexander_poly(&fox_jacobian(&wirtinger(pd).unwrap())).unwrap()
    }

    fn check_two_bridge(p: u64, q: u64, delta: &[(i64, i64)]) {
        let pd = two_bridge(p, q).unwrap();
        let d = delta_of(&pd);
        assert!(
            d.equal_up_to_unit(&LaurentPoly1::from_pairs(delta)),
            "K({p}/{q}): got {d:?}"
        );
        assert_eq!(d.eval_i64(-1).unsigned_abs(), p, "determinant of K({p}/{q})");
    }

    #[test]
    fn cf_expansion() {
        assert_eq!(continued_fraction(35, 13).unwrap(), vec![2, 1, 2, 4]);
        assert_eq!(continued_fraction(5, 3).unwrap(), vec![1, 1, 2]);
        assert!(continued_fraction(6, 4).is_err());
    }

    #[test]
    fn trefoil_from_fraction() {
        check_two_bridge(3, 1, &[(-1, 1), (0, -1), (1, 1)]);
    }

    #[test]
    fn figure_eight_from_fraction() {
        check_two_bridge(5, 3, &[(-1, 1), (0, -3), (1, 1)]);
    }

    #[test]
    fn torus_and_twist_knots() {
        check_two_bridge(5, 1, &[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
        check_two_bridge(7, 3, &[(-1, 2), (0, -3), (1, 2)]);
    }

    #[test]
    fn nine_crossing_example() {
        // K(35/13): Alexander polynomial 2t^2 - 9t + 13 - 9/t + 2/t^2
        check_two_bridge(35, 13, &[(-2, 2), (-1, -9), (0, 13), (1, -9), (2, 2)]);
    }

    #[test]
    fn braid_closure_torus_knot() {
        // sigma_1^3 closes to a trefoil
        let pd = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(pd.n(), 3);
        let d = delta_of(&pd);
        assert!(d.equal_up_to_unit(&LaurentPoly1::from_pairs(&[(-1, 1), (0, -1), (1, 1)])));
    }

    #[test]
    fn braid_closure_ten_crossing_example() {
        // (sigma_1 sigma_2^-1)^5: Alexander polynomial (t^2-3t+1-3/t+1/t^2)^2
        let word: Vec<i32> = (0..5).flat_map(|_| [1, -2]).collect();
        let pd = braid_closure(3, &word).unwrap();
        assert_eq!(pd.n(), 10);
        let d = delta_of(&pd);
        let f = LaurentPoly1::from_pairs(&[(-2, 1), (-1, -3), (0, 3), (1, -3), (2, 1)]);
        assert!(d.equal_up_to_unit(&f.mul(&f)), "got {d:?}");
        assert_eq!(d.eval_i64(-1).unsigned_abs(), 121);
    }

    #[test]
    fn montesinos_pretzel() {
        // a vertical column of k crossings is the 1/k tangle: twists [1, k-1];
        // the (3,3,2)-pretzel has determinant 3*3 + 3*2 + 2*3 = 21
        let pd = montesinos(&[vec![1, 2], vec![1, 2], vec![1, 1]]).unwrap();
        assert_eq!(pd.n(), 8);
        let d = delta_of(&pd);
        assert_eq!(d.eval_i64(-1).unsigned_abs(), 21);
    }

    #[test]
    fn montesinos_rejects_links() {
        // the (2,2,2)-pretzel closes to a three-component link
        assert!(montesinos(&[vec![1, 1], vec![1, 1], vec![1, 1]]).is_err());
    }
}
