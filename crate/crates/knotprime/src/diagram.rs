//! Knot diagrams: PD notation, Wirtinger presentations, the Fox Jacobian,
//! and connected sums.
//!
//! PD convention (fixed throughout): each crossing is a 4-tuple of arc
//! labels listed counterclockwise starting from the incoming under-strand.
//! Arc labels run 1..2n consecutively along the orientation, so the
//! outgoing under-strand at (a, b, c, d) is c = a + 1 (mod 2n) and the
//! over-strand flows d -> b or b -> d, whichever is consecutive.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::LaurentPoly1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDCode {
    pub crossings: Vec<[u32; 4]>,
}

/// Per-crossing orientation data derived from a validated PD code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    pub under_in: u32,
    pub under_out: u32,
    pub over_in: u32,
    pub over_out: u32,
    /// +1 when the over-strand flows d -> b, -1 when b -> d.
    pub sign: i8,
}

impl PDCode {
    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    /// Arc count 2n.
    pub fn arcs(&self) -> u32 {
        2 * self.crossings.len() as u32
    }

    fn succ(&self, a: u32) -> u32 {
        a % self.arcs() + 1
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Pd(
                "empty diagram; the unknot is the reserved name \"unknot\"".into(),
            ));
        }
        let m = self.arcs();
        let mut count = vec![0u32; m as usize + 1];
        for t in &self.crossings {
            for &x in t {
                if x == 0 || x > m {
                    return Err(Error::Pd(format!("arc label {x} out of range 1..{m}")));
                }
                count[x as usize] += 1;
            }
        }
        for x in 1..=m as usize {
            if count[x] != 2 {
                return Err(Error::Pd(format!(
                    "arc label {x} appears {} times, expected 2",
                    count[x]
                )));
            }
        }
        for t in &self.crossings {
            let [a, b, c, d] = *t;
            if c != self.succ(a) {
                return Err(Error::Pd(format!(
                    "crossing {t:?}: under-strand not consecutive ({a} -> {c})"
                )));
            }
            if b != self.succ(d) && d != self.succ(b) {
                return Err(Error::Pd(format!(
                    "crossing {t:?}: over-strand {b},{d} not consecutively labeled"
                )));
            }
        }
        self.planarity_check()
    }

    /// The tuples are read as counterclockwise rotations at each vertex;
    /// a genuine diagram must then satisfy Euler's formula V - E + F = 2
    /// (F counted by face-tracing). Abstract PD codes that fail this are
    /// virtual: Wirtinger calculus would still run but state sums would
    /// silently produce garbage.
    fn planarity_check(&self) -> Result<(), Error> {
        let n = self.n();
        // slot(label) -> the two (crossing, position) occurrences
        let mut occ = vec![[usize::MAX; 2]; self.arcs() as usize + 1];
        for (ci, t) in self.crossings.iter().enumerate() {
            for (s, &x) in t.iter().enumerate() {
                let e = &mut occ[x as usize];
                let slot = if e[0] == usize::MAX { 0 } else { 1 };
                e[slot] = 4 * ci + s;
            }
        }
        let mate = |h: usize| -> usize {
            let x = self.crossings[h / 4][h % 4] as usize;
            if occ[x][0] == h { occ[x][1] } else { occ[x][0] }
        };
        let mut seen = vec![false; 4 * n];
        let mut faces = 0usize;
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            loop {
                seen[h] = true;
                let m = mate(h);
                h = 4 * (m / 4) + (m % 4 + 1) % 4;
                if h == start {
                    break;
                }
            }
        }
        if faces != n + 2 {
            return Err(Error::Pd(format!(
                "PD code is not planar-realizable: {faces} faces for {n} crossings"
            )));
        }
        Ok(())
    }

    pub fn crossing_info(&self, idx: usize) -> CrossingInfo {
        let [a, b, c, d] = self.crossings[idx];
        if b == self.succ(d) {
            CrossingInfo { under_in: a, under_out: c, over_in: d, over_out: b, sign: 1 }
        } else {
            CrossingInfo { under_in: a, under_out: c, over_in: b, over_out: d, sign: -1 }
        }
    }

    pub fn writhe(&self) -> i64 {
        (0..self.n()).map(|i| self.crossing_info(i).sign as i64).sum()
    }
}

/// Parse PD notation: a bracketed list of 4-tuples, whitespace-insensitive.
pub fn parse_pd(text: &str) -> Result<PDCode, Error> {
    let v: Vec<Vec<u32>> = serde_json::from_str(text)
        .map_err(|e| Error::Pd(format!("malformed PD syntax: {e}")))?;
    let mut crossings = Vec::with_capacity(v.len());
    for t in v {
        let arr: [u32; 4] = t
            .try_into()
            .map_err(|t: Vec<u32>| Error::Pd(format!("crossing {t:?} is not a 4-tuple")))?;
        crossings.push(arr);
    }
    let pd = PDCode { crossings };
    pd.validate()?;
    Ok(pd)
}

/// Wirtinger presentation: one generator per overpass arc, one relator per
/// crossing with the last crossing's relation dropped. Relator (a, b, c)
/// encodes the word x_a x_b x_a^-1 x_c^-1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirtingerPresentation {
    pub n: usize,
    pub relators: Vec<(usize, usize, usize)>,
    pub dropped_relator_index: usize,
}

impl WirtingerPresentation {
    /// The unknot: one generator, no relations.
    pub fn unknot() -> Self {
        WirtingerPresentation { n: 1, relators: vec![], dropped_relator_index: 0 }
    }
}

/// Map each PD edge label to its overpass-arc generator (1-based). Edges
/// b and d of every crossing belong to the same overpass.
fn overpass_generators(pd: &PDCode) -> (Vec<usize>, usize) {
    let m = pd.arcs() as usize;
    let mut parent: Vec<usize> = (0..=m).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
            r
        } else {
            x
        }
    }
    for i in 0..pd.n() {
        let info = pd.crossing_info(i);
        let (a, b) = (info.over_in as usize, info.over_out as usize);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[rb] = ra;
        }
    }
    let mut gen_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut gens = vec![0usize; m + 1];
    for e in 1..=m {
        let r = find(&mut parent, e);
        let next = gen_of_root.len() + 1;
        let g = *gen_of_root.entry(r).or_insert(next);
        gens[e] = g;
    }
    (gens, gen_of_root.len())
}

pub fn wirtinger(pd: &PDCode) -> Result<WirtingerPresentation, Error> {
    wirtinger_with_drop(pd, pd.n() - 1)
}

/// Wirtinger presentation dropping the relation of crossing `drop`.
pub fn wirtinger_with_drop(pd: &PDCode, drop: usize) -> Result<WirtingerPresentation, Error> {
    pd.validate()?;
    let (gens, ngen) = overpass_generators(pd);
    if ngen != pd.n() {
        return Err(Error::Pd(format!(
            "expected {} overpass arcs, found {ngen} (not a knot diagram)",
            pd.n()
        )));
    }
    let mut relators = Vec::with_capacity(pd.n() - 1);
    for i in 0..pd.n() {
        if i == drop {
            continue;
        }
        let info = pd.crossing_info(i);
        let o = gens[info.over_in as usize];
        let u = gens[info.under_in as usize];
        let w = gens[info.under_out as usize];
        // positive: x_out = x_o x_in x_o^-1; negative: x_in = x_o x_out x_o^-1
        let rel = if info.sign > 0 { (o, u, w) } else { (o, w, u) };
        relators.push(rel);
    }
    Ok(WirtingerPresentation { n: ngen, relators, dropped_relator_index: drop })
}

/// A formal integer combination of group-ring elements drawn from
/// {1, x_1, ..., x_n}: key 0 is the identity, key g >= 1 is x_g.
pub type GroupRingElem = BTreeMap<usize, i64>;

fn add_to(e: &mut GroupRingElem, key: usize, c: i64) {
    let v = e.entry(key).or_insert(0);
    *v += c;
    if *v == 0 {
        e.remove(&key);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxJacobian {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<GroupRingElem>>,
}

impl FoxJacobian {
    /// Abelianize every generator to t.
    pub fn abelianized(&self) -> Vec<Vec<LaurentPoly1>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let mut p = LaurentPoly1::zero();
                        for (&k, &c) in e {
                            p.add_term(if k == 0 { 0 } else { 1 }, c);
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    }
}

/// Fox derivatives of the Wirtinger relators x_a x_b x_a^-1 x_c^-1, reduced
/// in the knot group: row i has 1 - x_c in column a, x_a in column b, and
/// -1 in column c, merged when indices coincide.
pub fn fox_jacobian(pres: &WirtingerPresentation) -> FoxJacobian {
    let rows = pres.relators.len();
    let cols = pres.n;
    let mut entries = vec![vec![GroupRingElem::new(); cols]; rows];
    for (i, &(a, b, c)) in pres.relators.iter().enumerate() {
        add_to(&mut entries[i][a - 1], 0, 1);
        add_to(&mut entries[i][a - 1], c, -1);
        add_to(&mut entries[i][b - 1], a, 1);
        add_to(&mut entries[i][c - 1], 0, -1);
    }
    FoxJacobian { rows, cols, entries }
}

/// Connected sum by splicing the highest-numbered arc of each diagram.
/// Returns the other summand when either input is empty-as-unknot.
pub fn connected_sum(pd1: &PDCode, pd2: &PDCode) -> Result<PDCode, Error> {
    if pd1.crossings.is_empty() {
        return Ok(pd2.clone());
    }
    if pd2.crossings.is_empty() {
        return Ok(pd1.clone());
    }
    pd1.validate()?;
    pd2.validate()?;
    let m1 = pd1.arcs();
    let m2 = pd2.arcs();
    // K1 keeps labels 1..2n1 except the end occurrence of arc 2n1 (where it
    // flows into arc 1), which becomes 2n1+2n2. K2 labels shift by 2n1,
    // except the end occurrence of its last arc (flowing into its arc 1),
    // which becomes 2n1 (the splice arc).
    let mut crossings = Vec::with_capacity(pd1.n() + pd2.n());
    for (i, t) in pd1.crossings.iter().enumerate() {
        let info = pd1.crossing_info(i);
        let mut t = *t;
        for (pos, x) in t.iter_mut().enumerate() {
            if *x == m1 && is_end_occurrence(&info, pos, *x) {
                *x = m1 + m2;
            }
        }
        crossings.push(t);
    }
    for (i, t) in pd2.crossings.iter().enumerate() {
        let info = pd2.crossing_info(i);
        let mut t = *t;
        for (pos, x) in t.iter_mut().enumerate() {
            if *x == m2 && is_end_occurrence(&info, pos, *x) {
                *x = m1;
            } else {
                *x += m1;
            }
        }
        crossings.push(t);
    }
    let out = PDCode { crossings };
    out.validate()?;
    Ok(out)
}

/// Whether position `pos` of a tuple holds arc `x` as an incoming strand
/// (the arc ends at this crossing).
fn is_end_occurrence(info: &CrossingInfo, pos: usize, x: u32) -> bool {
    if pos == 0 {
        return x == info.under_in;
    }
    x == info.over_in && pos_of_over_in(info, pos)
}

fn pos_of_over_in(info: &CrossingInfo, pos: usize) -> bool {
    // over_in sits at position 3 (d) for positive crossings, 1 (b) for
    // negative ones
    (info.sign > 0 && pos == 3) || (info.sign < 0 && pos == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{alexander_poly, alexander_poly_col, LaurentPoly1};

    pub(crate) const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    #[test]
    fn parse_trefoil() {
        let pd = parse_pd(TREFOIL).unwrap();
        assert_eq!(pd.n(), 3);
    }

    #[test]
    fn empty_rejected() {
        assert!(parse_pd("[]").is_err());
    }

    #[test]
    fn virtual_code_rejected() {
        // arc-consistent but not planar-realizable (a virtual diagram)
        let bad = "[[1,4,2,5],[3,6,4,7],[5,8,6,9],[7,10,8,1],[9,2,10,3]]";
        let err = parse_pd(bad).unwrap_err().to_string();
        assert!(err.contains("planar"), "{err}");
    }

    #[test]
    fn missing_labels_rejected() {
        assert!(parse_pd("[[1,4,2,5],[3,6,4,1]]").is_err());
    }

    #[test]
    fn wirtinger_counts() {
        let pd = parse_pd(TREFOIL).unwrap();
        let pres = wirtinger(&pd).unwrap();
        assert_eq!(pres.n, 3);
        assert_eq!(pres.relators.len(), 2);
    }

    #[test]
    fn unknot_presentation() {
        let pres = WirtingerPresentation::unknot();
        assert_eq!(pres.n, 1);
        assert!(pres.relators.is_empty());
    }

    #[test]
    fn fox_entries_single_relator() {
        let pres = WirtingerPresentation {
            n: 3,
            relators: vec![(1, 2, 3)],
            dropped_relator_index: 0,
        };
        let jac = fox_jacobian(&pres);
        let row = &jac.entries[0];
        assert_eq!(row[0], GroupRingElem::from([(0, 1), (3, -1)])); // 1 - x_3
        assert_eq!(row[1], GroupRingElem::from([(1, 1)])); // x_1
        assert_eq!(row[2], GroupRingElem::from([(0, -1)])); // -1
    }

    #[test]
    fn fox_entries_merged() {
        // relator (1,2,1): col 1 gets (1 - x_1) + (-1) = -x_1
        let pres = WirtingerPresentation {
            n: 2,
            relators: vec![(1, 2, 1)],
            dropped_relator_index: 0,
        };
        let jac = fox_jacobian(&pres);
        assert_eq!(jac.entries[0][0], GroupRingElem::from([(1, -1)]));
        assert_eq!(jac.entries[0][1], GroupRingElem::from([(1, 1)]));
    }

    #[test]
    fn fox_rows_vanish_abelianized_at_1() {
        let pd = parse_pd(TREFOIL).unwrap();
        let jac = fox_jacobian(&wirtinger(&pd).unwrap());
        for row in jac.abelianized() {
            let sum = row.iter().fold(LaurentPoly1::zero(), |acc, p| acc.add(p));
            assert_eq!(sum.eval_i64(1), 0);
        }
    }

    #[test]
    fn trefoil_alexander() {
        let pd = parse_pd(TREFOIL).unwrap();
        let jac = fox_jacobian(&wirtinger(&pd).unwrap());
        let delta = alexander_poly(&jac).unwrap();
        assert_eq!(delta, LaurentPoly1::from_pairs(&[(-1, 1), (0, -1), (1, 1)]));
    }

    #[test]
    fn alexander_independent_of_choices() {
        let pd = parse_pd(TREFOIL).unwrap();
        let d1 = alexander_poly(&fox_jacobian(&wirtinger_with_drop(&pd, 2).unwrap())).unwrap();
        let d2 =
            alexander_poly_col(&fox_jacobian(&wirtinger_with_drop(&pd, 0).unwrap()), 0).unwrap();
        assert!(d1.equal_up_to_unit(&d2));
    }

    #[test]
    fn connected_sum_crossing_count() {
        let pd = parse_pd(TREFOIL).unwrap();
        let sum = connected_sum(&pd, &pd).unwrap();
        assert_eq!(sum.n(), 6);
        let jac = fox_jacobian(&wirtinger(&sum).unwrap());
        let delta = alexander_poly(&jac).unwrap();
        let tref = LaurentPoly1::from_pairs(&[(-1, 1), (0, -1), (1, 1)]);
        assert!(delta.equal_up_to_unit(&tref.mul(&tref)));
    }
}
