//! Elliptic curves over Q of small conductor: loading, validation, queries,
//! and exhaustive point counts of the Weierstrass models over F_p and F_{p^2}.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth;

/// The bundled table, conductors up to 300.
pub const BUNDLED_DATA: &str = include_str!("../../../data/cremona_le300.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveRecord {
    pub label: String,
    pub conductor: u64,
    pub class_id: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub rank: u32,
    pub modular_degree: Option<u64>,
    #[serde(with = "zero_one")]
    pub is_strong: bool,
}

mod zero_one {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(D::Error::custom(format!(
                "is_strong must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl EllipticCurveRecord {
    /// Discriminant of the long Weierstrass model.
    pub fn discriminant(&self) -> i128 {
        let (a1, a2, a3, a4, a6) = (
            self.a1 as i128,
            self.a2 as i128,
            self.a3 as i128,
            self.a4 as i128,
            self.a6 as i128,
        );
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsogenyClassSummary {
    pub class_id: String,
    pub conductor: u64,
    pub rank: u32,
    pub strong_degree: u64,
    /// Label of the strong Weil curve.
    pub strong_label: String,
}

/// Immutable index over a validated curve table.
#[derive(Debug, Clone)]
pub struct EcDb {
    records: Vec<EllipticCurveRecord>,
    by_label: HashMap<String, usize>,
    classes: BTreeMap<(u64, String), IsogenyClassSummary>,
    class_conductor: HashMap<String, u64>,
    max_conductor: u64,
}

fn load_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Load {
        line,
        reason: reason.into(),
    }
}

/// Checks that the primes dividing the discriminant are exactly those of the
/// conductor (the bundled models are minimal).
fn check_bad_primes(rec: &EllipticCurveRecord, line: usize) -> Result<()> {
    let disc = rec.discriminant();
    if disc == 0 {
        return Err(load_error(
            line,
            format!("{} has a singular model", rec.label),
        ));
    }
    let cond = numth::factor(rec.conductor).map_err(|_| load_error(line, "conductor is 0"))?;
    let mut rest = disc.unsigned_abs();
    for p in cond.primes() {
        let p = p as u128;
        if !rest.is_multiple_of(p) {
            return Err(load_error(
                line,
                format!(
                    "{}: conductor prime {p} does not divide the discriminant",
                    rec.label
                ),
            ));
        }
        while rest.is_multiple_of(p) {
            rest /= p;
        }
    }
    if rest != 1 {
        return Err(load_error(
            line,
            format!(
                "{}: discriminant {disc} has a prime factor not dividing the conductor",
                rec.label
            ),
        ));
    }
    Ok(())
}

impl EcDb {
    /// Parses and validates a table in the comma-separated format
    /// `label,conductor,class_id,a1,a2,a3,a4,a6,rank,modular_degree,is_strong`,
    /// with `#` comment lines.
    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::None)
            .from_reader(source);

        let mut records: Vec<EllipticCurveRecord> = Vec::new();
        let mut lines = Vec::new();
        let mut by_label = HashMap::new();
        let mut row = csv::StringRecord::new();
        loop {
            let more = reader.read_record(&mut row).map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                load_error(line, e.to_string())
            })?;
            if !more {
                break;
            }
            let line = row.position().map_or(0, |p| p.line() as usize);
            let rec: EllipticCurveRecord = row
                .deserialize(None)
                .map_err(|e| load_error(line, e.to_string()))?;
            if rec.conductor == 0 {
                return Err(load_error(line, "conductor must be positive"));
            }
            check_bad_primes(&rec, line)?;
            if rec.is_strong && rec.modular_degree.is_none_or(|d| d == 0) {
                return Err(load_error(
                    line,
                    format!("strong curve {} lacks a positive modular degree", rec.label),
                ));
            }
            if by_label.insert(rec.label.clone(), records.len()).is_some() {
                return Err(load_error(line, format!("duplicate label {}", rec.label)));
            }
            records.push(rec);
            lines.push(line);
        }

        let mut class_conductor: HashMap<String, u64> = HashMap::new();
        let mut class_rank: HashMap<String, u32> = HashMap::new();
        let mut strong: HashMap<String, usize> = HashMap::new();
        for (i, rec) in records.iter().enumerate() {
            let line = lines[i];
            let cond = *class_conductor
                .entry(rec.class_id.clone())
                .or_insert(rec.conductor);
            if cond != rec.conductor {
                return Err(load_error(
                    line,
                    format!(
                        "class {} mixes conductors {cond} and {}",
                        rec.class_id, rec.conductor
                    ),
                ));
            }
            let rank = *class_rank.entry(rec.class_id.clone()).or_insert(rec.rank);
            if rank != rec.rank {
                return Err(load_error(
                    line,
                    format!("class {} mixes ranks {rank} and {}", rec.class_id, rec.rank),
                ));
            }
            if rec.is_strong && strong.insert(rec.class_id.clone(), i).is_some() {
                return Err(load_error(
                    line,
                    format!("class {} has more than one strong curve", rec.class_id),
                ));
            }
        }

        let mut classes = BTreeMap::new();
        for (class_id, &cond) in &class_conductor {
            let Some(&s) = strong.get(class_id) else {
                let line = records
                    .iter()
                    .position(|r| &r.class_id == class_id)
                    .map_or(0, |i| lines[i]);
                return Err(load_error(
                    line,
                    format!("class {class_id} has no strong curve"),
                ));
            };
            let rec = &records[s];
            classes.insert(
                (cond, class_id.clone()),
                IsogenyClassSummary {
                    class_id: class_id.clone(),
                    conductor: cond,
                    rank: rec.rank,
                    strong_degree: rec.modular_degree.expect("checked above"),
                    strong_label: rec.label.clone(),
                },
            );
        }

        let max_conductor = records.iter().map(|r| r.conductor).max().unwrap_or(0);
        Ok(EcDb {
            records,
            by_label,
            classes,
            class_conductor,
            max_conductor,
        })
    }

    /// The table shipped with the library.
    pub fn bundled() -> Self {
        Self::load(BUNDLED_DATA.as_bytes()).expect("bundled curve table is valid")
    }

    pub fn records(&self) -> &[EllipticCurveRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Largest conductor in the table. Levels are supported up to this bound.
    pub fn max_conductor(&self) -> u64 {
        self.max_conductor
    }

    pub fn record(&self, label: &str) -> Result<&EllipticCurveRecord> {
        self.by_label
            .get(label)
            .map(|&i| &self.records[i])
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Isogeny classes sorted by (conductor, class id).
    pub fn classes(&self) -> impl Iterator<Item = &IsogenyClassSummary> {
        self.classes.values()
    }

    pub fn class(&self, class_id: &str) -> Result<&IsogenyClassSummary> {
        let cond = self
            .class_conductor
            .get(class_id)
            .ok_or_else(|| Error::UnknownClass(class_id.to_string()))?;
        Ok(&self.classes[&(*cond, class_id.to_string())])
    }

    /// Errors unless every divisor of `level` is within the table's range.
    pub fn check_coverage(&self, level: u64) -> Result<()> {
        if level == 0 {
            return Err(Error::NotPositive(0));
        }
        if level > self.max_conductor {
            let conductor = numth::divisors(level)
                .into_iter()
                .find(|&d| d > self.max_conductor)
                .expect("level itself exceeds the range");
            return Err(Error::MissingConductor {
                conductor,
                covered: self.max_conductor,
            });
        }
        Ok(())
    }

    /// Positive-rank isogeny classes whose conductor divides `level`,
    /// sorted by (conductor, class id).
    pub fn positive_rank_classes_dividing(&self, level: u64) -> Result<Vec<IsogenyClassSummary>> {
        self.check_coverage(level)?;
        Ok(self
            .classes
            .values()
            .filter(|c| c.rank > 0 && level.is_multiple_of(c.conductor))
            .cloned()
            .collect())
    }

    pub fn strong_degree(&self, class_id: &str) -> Result<u64> {
        Ok(self.class(class_id)?.strong_degree)
    }

    /// Number of projective points on the reduction of the curve over
    /// F_{p^n}, by exhaustive enumeration.
    pub fn curve_point_count(&self, label: &str, p: u64, n: u32) -> Result<u64> {
        let rec = self.record(label)?;
        if !numth::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if rec.conductor % p == 0 {
            return Err(Error::BadPrime {
                p,
                modulus: rec.conductor,
            });
        }
        let coeffs = [rec.a1, rec.a2, rec.a3, rec.a4, rec.a6];
        match n {
            1 => Ok(count_points(&PrimeField::new(p), coeffs)),
            2 => Ok(count_points(&QuadraticField::new(p), coeffs)),
            _ => Err(Error::UnsupportedDegree(n)),
        }
    }
}

/// Minimal finite-field interface for point enumeration; elements are
/// indexed `0..order()`.
trait Field {
    type Elem: Copy + PartialEq;
    fn order(&self) -> u64;
    fn element(&self, index: u64) -> Self::Elem;
    fn embed(&self, v: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
}

struct PrimeField {
    p: u64,
}

impl PrimeField {
    fn new(p: u64) -> Self {
        PrimeField { p }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn order(&self) -> u64 {
        self.p
    }
    fn element(&self, index: u64) -> u64 {
        index
    }
    fn embed(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
}

/// F_p[x]/(x^2 + s x + t) for the lexicographically smallest irreducible
/// monic quadratic.
struct QuadraticField {
    base: PrimeField,
    s: u64,
    t: u64,
}

impl QuadraticField {
    fn new(p: u64) -> Self {
        let base = PrimeField::new(p);
        let (s, t) = (0..p)
            .flat_map(|s| (0..p).map(move |t| (s, t)))
            .find(|&(s, t)| (0..p).all(|x| (x * x + s * x + t) % p != 0))
            .expect("an irreducible quadratic exists over every prime field");
        QuadraticField { base, s, t }
    }
}

impl Field for QuadraticField {
    type Elem = (u64, u64);

    fn order(&self) -> u64 {
        self.base.p * self.base.p
    }
    fn element(&self, index: u64) -> (u64, u64) {
        (index % self.base.p, index / self.base.p)
    }
    fn embed(&self, v: i64) -> (u64, u64) {
        (self.base.embed(v), 0)
    }
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.base.add(a.0, b.0), self.base.add(a.1, b.1))
    }
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let f = &self.base;
        let p = f.p;
        // (a0 + a1 x)(b0 + b1 x) with x^2 = -s x - t
        let hi = f.mul(a.1, b.1);
        let c0 = f.add(f.mul(a.0, b.0), f.mul(hi, (p - self.t) % p));
        let c1 = f.add(
            f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)),
            f.mul(hi, (p - self.s) % p),
        );
        (c0, c1)
    }
}

/// Points of `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`, plus infinity.
fn count_points<F: Field>(field: &F, [a1, a2, a3, a4, a6]: [i64; 5]) -> u64 {
    let q = field.order();
    let (a1, a2, a3, a4, a6) = (
        field.embed(a1),
        field.embed(a2),
        field.embed(a3),
        field.embed(a4),
        field.embed(a6),
    );
    let neg_one = field.embed(-1);
    let elems: Vec<F::Elem> = (0..q).map(|i| field.element(i)).collect();
    let mut count = 1;
    for &x in &elems {
        // y^2 + (a1 x + a3) y - rhs(x) = 0
        let lin = field.add(field.mul(a1, x), a3);
        let x2 = field.mul(x, x);
        let rhs = field.add(
            field.add(field.mul(x2, x), field.mul(a2, x2)),
            field.add(field.mul(a4, x), a6),
        );
        let neg_rhs = field.mul(neg_one, rhs);
        let zero = field.embed(0);
        for &y in &elems {
            let v = field.add(field.mul(field.add(y, lin), y), neg_rhs);
            if v == zero {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
11A1,11,11A,0,-1,1,-10,-20,0,1,1
11A2,11,11A,0,-1,1,-7820,-263580,0,,0
11A3,11,11A,0,-1,1,0,0,0,,0
37A1,37,37A,0,0,1,-1,0,1,2,1
43A1,43,43A,0,1,1,0,0,1,2,1
61A1,61,61A,1,0,0,-2,1,1,2,1
14A1,14,14A,1,0,1,4,-6,0,1,1
17A1,17,17A,1,-1,1,-1,-14,0,1,1
";

    #[test]
    fn loads_small_sample() {
        let db = EcDb::load(SAMPLE.as_bytes()).unwrap();
        assert_eq!(db.len(), 8);
        assert_eq!(db.max_conductor(), 61);
        assert_eq!(db.strong_degree("37A"), Ok(2));
        assert_eq!(db.record("11A3").unwrap().modular_degree, None);
    }

    #[test]
    fn rejects_singular_model_with_line() {
        let bad = "# c\n11A1,11,11A,0,-1,1,-10,-20,0,1,1\n11A9,11,11A,0,0,0,0,0,0,,0\n";
        match EcDb::load(bad.as_bytes()) {
            Err(Error::Load { line, reason }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("singular"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_double_strong() {
        let dup = "11A1,11,11A,0,-1,1,-10,-20,0,1,1\n11A1,11,11A,0,-1,1,-10,-20,0,1,1\n";
        assert!(matches!(
            EcDb::load(dup.as_bytes()),
            Err(Error::Load { line: 2, .. })
        ));
        let two = "11A1,11,11A,0,-1,1,-10,-20,0,1,1\n11A3,11,11A,0,-1,1,0,0,0,1,1\n";
        assert!(matches!(
            EcDb::load(two.as_bytes()),
            Err(Error::Load { line: 2, reason }) if reason.contains("more than one strong")
        ));
        let rank = "11A1,11,11A,0,-1,1,-10,-20,0,1,1\n11A3,11,11A,0,-1,1,0,0,1,,0\n";
        assert!(matches!(
            EcDb::load(rank.as_bytes()),
            Err(Error::Load { line: 2, reason }) if reason.contains("ranks")
        ));
    }

    #[test]
    fn rejects_malformed_rows() {
        let short = "11A1,11,11A,0,-1,1\n";
        assert!(matches!(
            EcDb::load(short.as_bytes()),
            Err(Error::Load { line: 1, .. })
        ));
        let strong = "11A1,11,11A,0,-1,1,-10,-20,0,1,2\n";
        assert!(matches!(
            EcDb::load(strong.as_bytes()),
            Err(Error::Load { line: 1, .. })
        ));
        let cond = "11A1,13,11A,0,-1,1,-10,-20,0,1,1\n";
        assert!(matches!(
            EcDb::load(cond.as_bytes()),
            Err(Error::Load { line: 1, .. })
        ));
    }

    #[test]
    fn point_counts_from_the_text() {
        let db = EcDb::bundled();
        assert_eq!(db.curve_point_count("43A1", 2, 2), Ok(5));
        assert_eq!(db.curve_point_count("61A1", 3, 2), Ok(12));
        assert_eq!(db.curve_point_count("11A1", 2, 1), Ok(5));
        assert_eq!(
            db.curve_point_count("43A1", 43, 1),
            Err(Error::BadPrime { p: 43, modulus: 43 })
        );
        assert_eq!(db.curve_point_count("43A1", 4, 1), Err(Error::NotPrime(4)));
        assert_eq!(
            db.curve_point_count("43A1", 2, 3),
            Err(Error::UnsupportedDegree(3))
        );
    }

    #[test]
    fn class_queries() {
        let db = EcDb::bundled();
        let ids = |n| {
            db.positive_rank_classes_dividing(n)
                .unwrap()
                .into_iter()
                .map(|c| c.class_id)
                .collect::<Vec<_>>()
        };
        assert!(ids(38).is_empty());
        assert_eq!(ids(92), ["92B"]);
        assert_eq!(ids(122), ["61A", "122A"]);
        assert_eq!(db.strong_degree("215A"), Ok(8));
        assert_eq!(db.strong_degree("92B"), Ok(6));
        assert_eq!(db.strong_degree("61A"), Ok(2));
        assert_eq!(
            db.strong_degree("999Z"),
            Err(Error::UnknownClass("999Z".into()))
        );
    }

    #[test]
    fn quadratic_field_is_a_field() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = QuadraticField::new(p);
            let one = f.embed(1);
            for i in 1..f.order() {
                let a = f.element(i);
                assert!(
                    (1..f.order()).any(|j| f.mul(a, f.element(j)) == one),
                    "{a:?} not invertible mod {p}"
                );
            }
        }
        let f = QuadraticField::new(2);
        assert_eq!((f.s, f.t), (1, 1));
        let f = QuadraticField::new(3);
        assert_eq!((f.s, f.t), (0, 1));
    }
}
