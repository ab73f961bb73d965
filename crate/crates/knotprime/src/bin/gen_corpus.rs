//! Generates the bundled corpus files:
//!   - corpus.jsonl: every 2-bridge knot up to 9 crossings, alternating
//!     diagrams with thin-knot omega synthesis (|Alexander coefficients|
//!     on the diagonal);
//!   - examples.jsonl: the larger named examples and the unknot.
//!
//! Also cross-checks the bundled determined-knot table.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;

use knotprime::construct::{braid_closure, continued_fraction, montesinos, two_bridge};
use knotprime::diagram::{fox_jacobian, wirtinger, PDCode};
use knotprime::pipeline::{determined_table, CorpusRecord};
use knotprime::poly::{alexander_poly, specialize_s, LaurentPoly1, LaurentPoly2};

#[derive(Parser)]
#[command(about = "generate the bundled knot corpus")]
struct Args {
    /// Directory receiving corpus.jsonl and examples.jsonl
    #[arg(long, default_value = "crates/knotprime/data")]
    out_dir: PathBuf,
}

fn delta_of(pd: &PDCode) -> LaurentPoly1 {
    alexander_poly(&fox_jacobian(&wirtinger(pd).unwrap())).unwrap()
}

/// Thin-knot synthesis: for alternating knots the two-variable polynomial
/// is determined by the Alexander coefficient magnitudes on the diagonal.
fn thin_omega(delta: &LaurentPoly1) -> LaurentPoly2 {
    let triples: Vec<(i64, i64, i64)> =
        delta.pairs().into_iter().map(|(e, c)| (e, e, c.abs())).collect();
    LaurentPoly2::from_triples(&triples)
}

fn record(name: &str, pd: &PDCode, omega: &LaurentPoly2) -> CorpusRecord {
    CorpusRecord {
        name: name.to_string(),
        pd: serde_json::to_string(&pd.crossings).unwrap(),
        omega: Some(omega.triples()),
        jones: None,
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(m as i64) as u64
}

/// The 2-bridge equivalence class of q modulo p: reversal (inverse mod p)
/// and mirroring (negation mod p) give the same knot for this pipeline.
fn fraction_class(p: u64, q: u64) -> Vec<u64> {
    let qi = mod_inverse(q, p);
    let mut class = vec![q, p - q, qi, p - qi];
    class.sort_unstable();
    class.dedup();
    class
}

fn main() {
    let args = Args::parse();
    std::fs::create_dir_all(&args.out_dir).unwrap();

    // rational knots named by their fraction; Rolfsen aliases where the
    // identification is pinned by determinant and Alexander polynomial
    let aliases: BTreeMap<(u64, u64), &str> = [
        ((3, 1), "3_1"),
        ((5, 1), "5_1"),
        ((5, 2), "4_1"),
        ((7, 1), "7_1"),
        ((7, 2), "5_2"),
        ((35, 8), "9_12"),
    ]
    .into();

    let mut corpus: Vec<CorpusRecord> = Vec::new();
    let mut count = 0usize;
    for p in (3..=55u64).step_by(2) {
        for q in 1..p {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let class = fraction_class(p, q);
            if q != class[0] {
                continue; // canonical representative only
            }
            // minimal-crossing representative within the class
            let (crossings, q_best) = class
                .iter()
                .map(|&qq| (continued_fraction(p, qq).unwrap().iter().sum::<u64>(), qq))
                .min()
                .unwrap();
            if crossings > 9 {
                continue;
            }
            let pd = two_bridge(p, q_best).unwrap();
            assert_eq!(pd.n() as u64, crossings);
            let delta = delta_of(&pd);
            assert_eq!(delta.eval_i64(-1).unsigned_abs(), p, "determinant of K({p}/{q})");
            let omega = thin_omega(&delta);
            let name = aliases
                .get(&(p, q))
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("K({p}/{q_best})"));
            corpus.push(record(&name, &pd, &omega));
            count += 1;
        }
    }
    eprintln!("{count} two-bridge knots up to 9 crossings");

    let mut examples: Vec<CorpusRecord> = Vec::new();
    // closure of (sigma_1 sigma_2^-1)^5
    let word: Vec<i32> = (0..5).flat_map(|_| [1, -2]).collect();
    let pd = braid_closure(3, &word).unwrap();
    examples.push(record("10_123", &pd, &thin_omega(&delta_of(&pd))));
    // alternating Montesinos knot with three quadratic factors
    let pd = montesinos(&[vec![1, 1], vec![1, 1, 1, 1], vec![1, 1, 1, 1, 1]]).unwrap();
    examples.push(record("montesinos-2-4-5", &pd, &thin_omega(&delta_of(&pd))));
    // 16-crossing rational knot with |H1(X_3)| = 91^2
    let pd = two_bridge(169, 77).unwrap();
    examples.push(record("K(169/77)", &pd, &thin_omega(&delta_of(&pd))));
    examples.push(CorpusRecord {
        name: "unknot".into(),
        pd: "unknot".into(),
        omega: Some(vec![(0, 0, 1)]),
        jones: None,
    });

    // cross-check the bundled determined-knot table against this corpus
    for entry in determined_table() {
        let rec = corpus
            .iter()
            .find(|r| r.name == entry.name)
            .unwrap_or_else(|| panic!("{} missing from corpus", entry.name));
        let omega = LaurentPoly2::from_triples(rec.omega.as_ref().unwrap());
        assert_eq!(
            omega.canonical_positive_symmetric(),
            entry.omega.canonical_positive_symmetric(),
            "omega mismatch for {}",
            entry.name
        );
        let pd: Vec<[u32; 4]> = serde_json::from_str(&rec.pd).unwrap();
        let delta = delta_of(&PDCode { crossings: pd });
        assert!(specialize_s(&entry.omega).equal_up_to_unit(&delta));
    }

    for (file, records) in [("corpus.jsonl", &corpus), ("examples.jsonl", &examples)] {
        let mut text = String::new();
        for r in records {
            text.push_str(&serde_json::to_string(r).unwrap());
            text.push('\n');
        }
        let path = args.out_dir.join(file);
        std::fs::write(&path, text).unwrap();
        eprintln!("wrote {} records to {}", records.len(), path.display());
    }
}
