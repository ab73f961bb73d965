//! Orchestration: corpus ingestion, factorization scenarios, the test
//! cascade (irreducibility, Jones divisibility, branched covers,
//! metacyclic obstructions), certificates, and batch reporting.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{branched_cover_homology, splits_with_orders, FiniteAbelianGroup};
use crate::diagram::{fox_jacobian, parse_pd, wirtinger, FoxJacobian, PDCode, WirtingerPresentation};
use crate::error::Error;
use crate::fields::{find_prime_with_root, primitive_root_of_unity, CyclotomicField, FieldCtx, PrimeField};
use crate::jones::{jones_bounded, jones_divisibility_test, matches_determined, DeterminedKnot};
use crate::metacyclic::{
    crt_a, enumerate_reps, project_rep, reduce_to_classes, valid_a_values, MetacyclicParams,
    MetacyclicRep, RepSolutions,
};
use crate::poly::{
    is_prime, order_formula, positive_symmetric_factorizations, LaurentPoly1, LaurentPoly2,
    SymFactorization, TwoBlockGrouping,
};
use crate::twisted::betti;

pub const CERTIFICATE_FORMAT: u32 = 1;

/// Which field backend computes Betti numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldPolicy {
    /// Two-prime finite-field screening; cyclotomic only on disagreement.
    Finite,
    /// Exact cyclotomic arithmetic, one finite prime as confirmation.
    Cyclotomic,
    /// Both finite primes plus the cyclotomic value on every elimination.
    Both,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub p_set: Vec<u64>,
    pub d_max: u64,
    pub field: FieldPolicy,
    pub enable_jones: bool,
    pub grouping_cap: usize,
    pub crossing_bound: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p_set: vec![2, 3, 5, 7],
            d_max: 200,
            field: FieldPolicy::Finite,
            enable_jones: true,
            grouping_cap: 64,
            crossing_bound: crate::jones::DEFAULT_CROSSING_BOUND,
        }
    }
}

/// One line of the corpus file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub name: String,
    /// Bracketed PD list, or the reserved string "unknot".
    pub pd: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<(i64, i64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jones: Option<Vec<(i64, i64)>>,
}

/// An ingested knot with its presentation-level invariants cached.
#[derive(Clone, Debug)]
pub struct KnotRecord {
    pub name: String,
    pub pd: Option<PDCode>,
    pub omega: Option<LaurentPoly2>,
    pub pres: WirtingerPresentation,
    pub jac: FoxJacobian,
    pub delta: LaurentPoly1,
}

impl KnotRecord {
    pub fn ingest(rec: &CorpusRecord) -> Result<Self, Error> {
        let pd = if rec.pd.trim() == "unknot" { None } else { Some(parse_pd(&rec.pd)?) };
        let pres = match &pd {
            Some(pd) => wirtinger(pd)?,
            None => WirtingerPresentation::unknot(),
        };
        let jac = fox_jacobian(&pres);
        let delta = crate::poly::alexander_poly(&jac)?;
        let omega = match &rec.omega {
            Some(triples) => {
                let om = LaurentPoly2::from_triples(triples);
                let spec = crate::poly::specialize_s(&om);
                if !spec.equal_up_to_unit(&delta) {
                    return Err(Error::Ingestion(format!(
                        "{}: omega specialized at s = -1 disagrees with the Fox-calculus \
                         Alexander polynomial",
                        rec.name
                    )));
                }
                Some(om)
            }
            None => None,
        };
        Ok(KnotRecord { name: rec.name.clone(), pd, omega, pres, jac, delta })
    }

    pub fn parse_line(line: &str) -> Result<Self, Error> {
        let rec: CorpusRecord = serde_json::from_str(line)?;
        Self::ingest(&rec)
    }
}

/// A hypothesized two-summand scenario surviving the covers test: the
/// factor grouping with the forced homology orders at each active prime.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub omega1: Vec<(i64, i64, i64)>,
    pub omega2: Vec<(i64, i64, i64)>,
    /// Per active p: (p, |H1(side 1)|, |H1(side 2)|) as decimal strings.
    pub orders: Vec<(u64, String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PRIME_PROVEN")]
    PrimeProven,
    #[serde(rename = "TRIVIAL_UNKNOT")]
    TrivialUnknot,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// Betti data for one surjective representation class in the distinct-prime
/// test: chi and its two projections.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BettiTripleRecord {
    pub a: u64,
    pub b2: usize,
    pub b2_1: usize,
    pub b2_2: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Elimination {
    pub test: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<BettiTripleRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multiset: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirm_field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupingOutcome {
    pub omega1: Vec<(i64, i64, i64)>,
    pub omega2: Vec<(i64, i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elimination: Option<Elimination>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surviving: Option<Scenario>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub format: u32,
    pub name: String,
    pub verdict: Verdict,
    /// The deepest stage needed: "omega-irreducible", "jones", "covers",
    /// or "metacyclic" (when the verdict is PRIME_PROVEN).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_test: Option<String>,
    pub groupings: Vec<GroupingOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

/// The bundled determined-knot table; Jones values come from this crate's
/// own state sum on the bundled PD codes.
pub fn determined_table() -> Vec<DeterminedKnot> {
    let data = include_str!("../data/determined.jsonl");
    let mut out = Vec::new();
    for line in data.lines().filter(|l| !l.trim().is_empty()) {
        let rec: CorpusRecord = serde_json::from_str(line).expect("bundled table is well-formed");
        let pd = parse_pd(&rec.pd).expect("bundled table PD is valid");
        let omega = LaurentPoly2::from_triples(&rec.omega.expect("bundled table has omega"));
        let jones = jones_bounded(&pd, 16).expect("bundled table Jones computes");
        out.push(DeterminedKnot { name: rec.name, omega, jones });
    }
    out
}

pub enum OmegaOutcome {
    TrivialUnknot,
    PrimeProven,
    Continue(SymFactorization, Vec<TwoBlockGrouping>),
}

/// The irreducibility test: no nontrivial positive-symmetric factorization
/// proves primality outright; Omega = 1 detects the unknot.
pub fn test_omega_irreducible(omega: &LaurentPoly2) -> Result<OmegaOutcome, Error> {
    if omega.is_one() || omega.is_unit_monomial() {
        return Ok(OmegaOutcome::TrivialUnknot);
    }
    let (fact, groupings) = positive_symmetric_factorizations(omega)?;
    match fact {
        None => Ok(OmegaOutcome::PrimeProven),
        Some(f) => Ok(OmegaOutcome::Continue(f, groupings)),
    }
}

/// Covers test for one grouping: the forced orders (and Plans doubling for
/// odd p) must be realizable by a sub-multiset split of H1 at every active
/// p. Ok(Err(p)) reports the first prime with no admissible split.
pub fn covers_split(
    record: &KnotRecord,
    grouping: &TwoBlockGrouping,
    p_set: &[u64],
    homology: &BTreeMap<u64, FiniteAbelianGroup>,
) -> Result<Result<Scenario, u64>, Error> {
    let delta1 = crate::poly::specialize_s(&grouping.omega1);
    let delta2 = crate::poly::specialize_s(&grouping.omega2);
    let mut orders = Vec::new();
    for &p in p_set {
        let g = &homology[&p];
        let m1 = order_formula(&delta1, p)?;
        let m2 = order_formula(&delta2, p)?;
        if &m1 * &m2 != g.order() {
            return Err(Error::Consistency(format!(
                "{}: order formula of the factors disagrees with |H1(X_{p})|",
                record.name
            )));
        }
        if !splits_with_orders(g, &m1, &m2, p != 2)? {
            return Ok(Err(p));
        }
        orders.push((p, m1.to_string(), m2.to_string()));
    }
    Ok(Ok(Scenario {
        omega1: grouping.omega1.triples(),
        omega2: grouping.omega2.triples(),
        orders,
    }))
}

/// Scenario enumeration over all groupings: each grouping either fails the
/// covers test at some prime (Err(p)) or yields a Scenario.
pub fn build_scenarios(
    record: &KnotRecord,
    groupings: &[TwoBlockGrouping],
    p_set: &[u64],
) -> Result<Vec<Result<Scenario, u64>>, Error> {
    let homology = cover_homology_map(record, p_set)?;
    groupings.iter().map(|g| covers_split(record, g, p_set, &homology)).collect()
}

fn cover_homology_map(
    record: &KnotRecord,
    p_set: &[u64],
) -> Result<BTreeMap<u64, FiniteAbelianGroup>, Error> {
    p_set
        .iter()
        .map(|&p| Ok((p, branched_cover_homology(&record.jac, p)?)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct DistinctOutcome {
    pub eliminated: bool,
    pub triples: Vec<BettiTripleRecord>,
    pub field: String,
    pub confirm_field: String,
}

/// Distinct-prime metacyclic test at (p, d1, d2): iterate all nonabelian
/// CRT-combined a values, enumerate surjective classes, and check the
/// additivity inequality b2(chi) >= b2(chi_1) + b2(chi_2) that a composite
/// would satisfy for some class. Eliminated iff every surjective class
/// violates it, or none exists.
pub fn test_metacyclic_distinct(
    record: &KnotRecord,
    p: u64,
    d1: u64,
    d2: u64,
    policy: FieldPolicy,
) -> Result<DistinctOutcome, Error> {
    if d1 == d2 || !is_prime(d1) || !is_prime(d2) {
        return Err(Error::Metacyclic(format!("(d1, d2) = ({d1}, {d2}) must be distinct primes")));
    }
    let d = d1 * d2;
    let q1 = find_prime_with_root(d, 2);
    let q2 = find_prime_with_root(d, q1 + 1);
    let mut triples = Vec::new();
    let mut any_surjective = false;
    let mut all_violate = true;
    for a1 in valid_a_values(d1, p, true) {
        for a2 in valid_a_values(d2, p, true) {
            let (_, a) = crt_a(d1, a1, d2, a2)?;
            let params = MetacyclicParams::new(d, p, a)?;
            let sols = enumerate_reps(&record.pres, &params)?;
            for class in reduce_to_classes(&sols, &record.pres, true)? {
                any_surjective = true;
                let tri = confirmed_triple(record, &class.rep, d1, d2, q1, q2, policy)?;
                all_violate &= tri.b2 < tri.b2_1 + tri.b2_2;
                triples.push(tri);
            }
        }
    }
    let eliminated = !any_surjective || all_violate;
    Ok(DistinctOutcome {
        eliminated,
        triples,
        field: field_name(policy, q1),
        confirm_field: format!("F_{q2}"),
    })
}

fn field_name(policy: FieldPolicy, q: u64) -> String {
    match policy {
        FieldPolicy::Finite => format!("F_{q}"),
        FieldPolicy::Cyclotomic | FieldPolicy::Both => format!("F_{q}+cyclotomic"),
    }
}

/// b2 of chi and of its projections mod d1 and d2, over two finite fields
/// (and the cyclotomic field under the wider policies). Finite-field
/// disagreement is arbitrated cyclotomically.
fn confirmed_triple(
    record: &KnotRecord,
    rep: &MetacyclicRep,
    d1: u64,
    d2: u64,
    q1: u64,
    q2: u64,
    policy: FieldPolicy,
) -> Result<BettiTripleRecord, Error> {
    let t1 = finite_triple(record, rep, d1, d2, q1)?;
    let t2 = finite_triple(record, rep, d1, d2, q2)?;
    let use_cyclotomic = policy != FieldPolicy::Finite || t1 != t2;
    let best = if use_cyclotomic {
        let tc = cyclotomic_triple(record, rep, d1, d2)?;
        if t1 != t2 {
            tc
        } else if tc != t1 {
            return Err(Error::Consistency(format!(
                "{}: finite-field Betti numbers {t1:?} disagree with cyclotomic {tc:?}",
                record.name
            )));
        } else {
            tc
        }
    } else {
        t1
    };
    Ok(BettiTripleRecord { a: rep.params.a, b2: best.0, b2_1: best.1, b2_2: best.2 })
}

fn finite_triple(
    record: &KnotRecord,
    rep: &MetacyclicRep,
    d1: u64,
    d2: u64,
    q: u64,
) -> Result<(usize, usize, usize), Error> {
    let f = PrimeField::new(q)?;
    let zeta = primitive_root_of_unity(q, rep.params.d)?;
    let b = betti(&record.jac, &record.pres, rep, &f, &zeta)?.b2;
    let rep1 = project_rep(rep, d1)?;
    let rep2 = project_rep(rep, d2)?;
    let b1 = betti(&record.jac, &record.pres, &rep1, &f, &f.pow(&zeta, d2))?.b2;
    let b2 = betti(&record.jac, &record.pres, &rep2, &f, &f.pow(&zeta, d1))?.b2;
    Ok((b, b1, b2))
}

fn cyclotomic_triple(
    record: &KnotRecord,
    rep: &MetacyclicRep,
    d1: u64,
    d2: u64,
) -> Result<(usize, usize, usize), Error> {
    let f = CyclotomicField::new(rep.params.d);
    let b = betti(&record.jac, &record.pres, rep, &f, &f.zeta())?.b2;
    let f1 = CyclotomicField::new(d1);
    let f2 = CyclotomicField::new(d2);
    let b1 = betti(&record.jac, &record.pres, &project_rep(rep, d1)?, &f1, &f1.zeta())?.b2;
    let b2 = betti(&record.jac, &record.pres, &project_rep(rep, d2)?, &f2, &f2.zeta())?.b2;
    Ok((b, b1, b2))
}

#[derive(Clone, Debug)]
pub struct EqualOutcome {
    /// False when no a gives a dimension-2 representation space.
    pub applicable: bool,
    pub eliminated: bool,
    pub a: Option<u64>,
    pub multiset: Vec<usize>,
    pub field: String,
    pub confirm_field: String,
}

/// Equal-prime metacyclic test at (p, r): when the mod-r representation
/// space has dimension exactly 2, a composite's b2 values over the r + 1
/// projective classes form {a, b} plus r - 1 values in {a+b, a+b+1}.
/// Eliminated iff no pair (a, b) is consistent with the computed multiset.
pub fn test_metacyclic_equal(
    record: &KnotRecord,
    p: u64,
    r: u64,
    policy: FieldPolicy,
) -> Result<EqualOutcome, Error> {
    if !is_prime(r) {
        return Err(Error::Metacyclic(format!("r = {r} must be prime")));
    }
    let q1 = find_prime_with_root(r, 2);
    let q2 = find_prime_with_root(r, q1 + 1);
    let mut out = EqualOutcome {
        applicable: false,
        eliminated: false,
        a: None,
        multiset: Vec::new(),
        field: field_name(policy, q1),
        confirm_field: format!("F_{q2}"),
    };
    for a in valid_a_values(r, p, true) {
        let params = MetacyclicParams::new(r, p, a)?;
        let sols = enumerate_reps(&record.pres, &params)?;
        let RepSolutions::Prime(space) = &sols else { unreachable!("prime modulus") };
        if space.dim() != 2 {
            continue;
        }
        out.applicable = true;
        let mut multiset = Vec::new();
        for class in reduce_to_classes(&sols, &record.pres, true)? {
            let tri = confirmed_b2(record, &class.rep, q1, q2, policy)?;
            multiset.push(tri);
        }
        multiset.sort_unstable();
        if multiset_eliminates(&multiset) {
            out.eliminated = true;
            out.a = Some(a);
            out.multiset = multiset;
            return Ok(out);
        }
        if out.multiset.is_empty() {
            out.a = Some(a);
            out.multiset = multiset;
        }
    }
    Ok(out)
}

fn confirmed_b2(
    record: &KnotRecord,
    rep: &MetacyclicRep,
    q1: u64,
    q2: u64,
    policy: FieldPolicy,
) -> Result<usize, Error> {
    let single = |q: u64| -> Result<usize, Error> {
        let f = PrimeField::new(q)?;
        let zeta = primitive_root_of_unity(q, rep.params.d)?;
        Ok(betti(&record.jac, &record.pres, rep, &f, &zeta)?.b2)
    };
    let b1 = single(q1)?;
    let b2 = single(q2)?;
    if policy != FieldPolicy::Finite || b1 != b2 {
        let f = CyclotomicField::new(rep.params.d);
        let bc = betti(&record.jac, &record.pres, rep, &f, &f.zeta())?.b2;
        if b1 == b2 && bc != b1 {
            return Err(Error::Consistency(format!(
                "{}: finite-field b2 = {b1} disagrees with cyclotomic b2 = {bc}",
                record.name
            )));
        }
        return Ok(bc);
    }
    Ok(b1)
}

/// Whether every pair (a, b) taken from the multiset leaves some remaining
/// value outside {a+b, a+b+1}.
pub fn multiset_eliminates(multiset: &[usize]) -> bool {
    let n = multiset.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (multiset[i], multiset[j]);
            if a == 0 || b == 0 {
                continue;
            }
            let rest =
                multiset.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v);
            if rest.clone().all(|v| v == a + b || v == a + b + 1) {
                return false; // consistent pattern: survives
            }
        }
    }
    true
}

fn primes_dividing(m: &BigInt, d_max: u64) -> Vec<u64> {
    (2..=d_max)
        .filter(|&d| is_prime(d) && (m % BigInt::from(d)).is_zero())
        .collect()
}

/// Full analysis cascade for one knot.
pub fn analyze(record: &KnotRecord, config: &Config) -> Result<Certificate, Error> {
    let start = Instant::now();
    let mut cert = Certificate {
        format: CERTIFICATE_FORMAT,
        name: record.name.clone(),
        verdict: Verdict::Inconclusive,
        first_test: None,
        groupings: Vec::new(),
        detail: None,
        elapsed_ms: 0,
    };
    let finish = |mut c: Certificate| {
        c.elapsed_ms = start.elapsed().as_millis() as u64;
        c
    };
    let Some(omega) = &record.omega else {
        cert.detail = Some("no omega supplied: invariants only, no primality verdict".into());
        return Ok(finish(cert));
    };
    let groupings = match test_omega_irreducible(omega)? {
        OmegaOutcome::TrivialUnknot => {
            cert.verdict = Verdict::TrivialUnknot;
            return Ok(finish(cert));
        }
        OmegaOutcome::PrimeProven => {
            cert.verdict = Verdict::PrimeProven;
            cert.first_test = Some("omega-irreducible".into());
            return Ok(finish(cert));
        }
        OmegaOutcome::Continue(_, groupings) => groupings,
    };
    if groupings.len() > config.grouping_cap {
        cert.detail = Some(format!(
            "grouping count {} exceeds the cap {}",
            groupings.len(),
            config.grouping_cap
        ));
        return Ok(finish(cert));
    }
    let jones_k = match (&record.pd, config.enable_jones) {
        (Some(pd), true) => jones_bounded(pd, config.crossing_bound).ok(),
        _ => None,
    };
    let table = determined_table();
    let homology = cover_homology_map(record, &config.p_set)?;
    let mut stage_rank = 0usize; // 1 jones, 2 covers, 3 metacyclic
    let mut all_eliminated = true;
    for grouping in &groupings {
        let mut outcome = GroupingOutcome {
            omega1: grouping.omega1.triples(),
            omega2: grouping.omega2.triples(),
            elimination: None,
            surviving: None,
        };
        let elim = eliminate_grouping(record, grouping, config, &jones_k, &table, &homology)?;
        match elim {
            Ok(e) => {
                stage_rank = stage_rank.max(match e.test.as_str() {
                    "jones" => 1,
                    "covers" => 2,
                    _ => 3,
                });
                outcome.elimination = Some(e);
            }
            Err(scenario) => {
                all_eliminated = false;
                outcome.surviving = Some(scenario);
            }
        }
        cert.groupings.push(outcome);
    }
    if all_eliminated {
        cert.verdict = Verdict::PrimeProven;
        cert.first_test = Some(
            match stage_rank {
                1 => "jones",
                2 => "covers",
                _ => "metacyclic",
            }
            .into(),
        );
    }
    Ok(finish(cert))
}

/// Run the per-grouping cascade; Err(scenario) means the grouping survives.
fn eliminate_grouping(
    record: &KnotRecord,
    grouping: &TwoBlockGrouping,
    config: &Config,
    jones_k: &Option<LaurentPoly1>,
    table: &[DeterminedKnot],
    homology: &BTreeMap<u64, FiniteAbelianGroup>,
) -> Result<Result<Elimination, Scenario>, Error> {
    if let Some(jk) = jones_k {
        for factor in [&grouping.omega1, &grouping.omega2] {
            if !jones_divisibility_test(factor, jk, table)? {
                let matched = table
                    .iter()
                    .find(|e| matches_determined(factor, &e.omega))
                    .map(|e| e.name.clone());
                return Ok(Ok(Elimination {
                    test: "jones".into(),
                    p: None,
                    d1: None,
                    d2: None,
                    a: None,
                    triples: vec![],
                    multiset: vec![],
                    field: None,
                    confirm_field: None,
                    detail: matched.map(|n| format!("factor matches {n}; Jones does not divide")),
                }));
            }
        }
    }
    let scenario = match covers_split(record, grouping, &config.p_set, homology)? {
        Err(p) => {
            return Ok(Ok(Elimination {
                test: "covers".into(),
                p: Some(p),
                d1: None,
                d2: None,
                a: None,
                triples: vec![],
                multiset: vec![],
                field: None,
                confirm_field: None,
                detail: Some(format!("no admissible homology split at p = {p}")),
            }));
        }
        Ok(s) => s,
    };
    for (p, m1s, m2s) in &scenario.orders {
        let p = *p;
        let m1: BigInt = m1s.parse().expect("decimal order");
        let m2: BigInt = m2s.parse().expect("decimal order");
        // distinct-prime test behind the divisibility firewall
        let d1s: Vec<u64> = primes_dividing(&m1, config.d_max)
            .into_iter()
            .filter(|&d| !(&m2 % BigInt::from(d)).is_zero() && !valid_a_values(d, p, true).is_empty())
            .collect();
        let d2s: Vec<u64> = primes_dividing(&m2, config.d_max)
            .into_iter()
            .filter(|&d| !(&m1 % BigInt::from(d)).is_zero() && !valid_a_values(d, p, true).is_empty())
            .collect();
        for &d1 in &d1s {
            for &d2 in &d2s {
                let out = test_metacyclic_distinct(record, p, d1, d2, config.field)?;
                if out.eliminated {
                    return Ok(Ok(Elimination {
                        test: "metacyclic-distinct".into(),
                        p: Some(p),
                        d1: Some(d1),
                        d2: Some(d2),
                        a: out.triples.first().map(|t| t.a),
                        triples: out.triples,
                        multiset: vec![],
                        field: Some(out.field),
                        confirm_field: Some(out.confirm_field),
                        detail: None,
                    }));
                }
            }
        }
        // equal-prime test on shared divisors
        for r in primes_dividing(&m1.clone().gcd(&m2), config.d_max) {
            if valid_a_values(r, p, true).is_empty() {
                continue;
            }
            let out = test_metacyclic_equal(record, p, r, config.field)?;
            if out.applicable && out.eliminated {
                return Ok(Ok(Elimination {
                    test: "metacyclic-equal".into(),
                    p: Some(p),
                    d1: Some(r),
                    d2: Some(r),
                    a: out.a,
                    triples: vec![],
                    multiset: out.multiset,
                    field: Some(out.field),
                    confirm_field: Some(out.confirm_field),
                    detail: None,
                }));
            }
        }
    }
    Ok(Err(scenario))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quarantined {
    pub line: usize,
    pub error: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchReport {
    pub total: usize,
    /// First-successful-test counts: omega-irreducible / jones / covers /
    /// metacyclic / trivial / inconclusive.
    pub counts: BTreeMap<String, usize>,
    pub quarantined: Vec<Quarantined>,
    pub certificates: Vec<Certificate>,
}

/// Analyze every record of a line-delimited corpus; per-record failures are
/// quarantined, not fatal.
pub fn batch(corpus_text: &str, config: &Config) -> BatchReport {
    let lines: Vec<(usize, &str)> = corpus_text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let results: Vec<(usize, Result<Certificate, Error>)> = lines
        .par_iter()
        .map(|&(lineno, line)| {
            let r = KnotRecord::parse_line(line).and_then(|rec| analyze(&rec, config));
            (lineno, r)
        })
        .collect();
    let mut report = BatchReport {
        total: 0,
        counts: BTreeMap::new(),
        quarantined: Vec::new(),
        certificates: Vec::new(),
    };
    for (lineno, res) in results {
        match res {
            Ok(cert) => {
                report.total += 1;
                let key = match cert.verdict {
                    Verdict::TrivialUnknot => "trivial".to_string(),
                    Verdict::Inconclusive => "inconclusive".to_string(),
                    Verdict::PrimeProven => {
                        cert.first_test.clone().unwrap_or_else(|| "metacyclic".into())
                    }
                };
                *report.counts.entry(key).or_insert(0) += 1;
                report.certificates.push(cert);
            }
            Err(e) => report.quarantined.push(Quarantined { line: lineno, error: e.to_string() }),
        }
    }
    report
}
