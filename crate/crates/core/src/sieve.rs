//! Level-by-level classification with evidence chains.
//!
//! Rules are tried in a fixed order; every fired rule records the inputs and
//! the comparison it made so [`crate::replay`] can recheck it.
//!
//! Order: genus <= 2 (R1), trigonal over Q (R2), a positive-rank quotient of
//! strong degree 3 (R3), no positive-rank class at all (R4). Otherwise each
//! positive-rank class whose conductor divides N must be excluded: by its
//! strong degree (R5, R6), then by the curve bound at the primary primes
//! (R7). Castelnuovo (R8) is tried next, then the curve bound at the rest of
//! the pool, then exact counts, and finally the generic inequality (R9).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundEvidence, BoundKind, CastelnuovoEvidence, CountMode};
use crate::curvedata::{self, INFINITELY_MANY_CUBIC_POINTS};
use crate::ecdb::{EcDb, IsogenyClassSummary};
use crate::error::{Error, Result};
use crate::numth;

/// Largest level handled by [`classify`]; above it the generic scan applies.
pub const MAX_LEVEL: u64 = 300;

/// Levels where the degree-2 minimality rule is expected to fire. R6 firing
/// elsewhere is flagged on the certificate for review.
pub const DEGREE_TWO_MINIMALITY_LEVELS: [u64; 8] = [53, 61, 65, 79, 83, 89, 101, 131];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "R1_genus_le2")]
    R1GenusLe2,
    #[serde(rename = "R2_trigonalQ_g3plus")]
    R2TrigonalQ,
    #[serde(rename = "R3_degree3_strongWeil")]
    R3Degree3StrongWeil,
    #[serde(rename = "R4_no_positive_rank")]
    R4NoPositiveRank,
    #[serde(rename = "R5_strong_degree_filter")]
    R5StrongDegree,
    #[serde(rename = "R6_bielliptic_degree2_minimality")]
    R6DegreeTwoMinimality,
    #[serde(rename = "R7_curve_bound")]
    R7CurveBound,
    #[serde(rename = "R8_castelnuovo")]
    R8Castelnuovo,
    #[serde(rename = "R9_generic_inequality")]
    R9GenericInequality,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "YES_infinite_cubic")]
    Yes,
    #[serde(rename = "NO_finitely_many")]
    No,
    #[serde(rename = "UNRESOLVED")]
    Unresolved,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Unresolved => "UNRESOLVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    Genus {
        genus: u64,
    },
    TrigonalOverQ {
        genus: u64,
        gonality3: bool,
    },
    StrongDegree {
        class_id: String,
        conductor: u64,
        rank: u32,
        strong_degree: u64,
    },
    NoPositiveRank {
        /// Every divisor of N, each checked for positive-rank classes.
        conductors_checked: Vec<u64>,
        hyperelliptic: bool,
        genus: u64,
    },
    DegreeTwoMinimality {
        class_id: String,
        conductor: u64,
        rank: u32,
        strong_degree: u64,
        bielliptic: bool,
        /// Positive-rank classes of conductor a proper divisor of N (empty).
        smaller_positive_rank: Vec<String>,
    },
    CurveBound {
        class_id: String,
        psi: u64,
        omega: u32,
        bound: BoundEvidence,
    },
    Castelnuovo(CastelnuovoEvidence),
    GenericBound {
        psi: u64,
        omega: u32,
        bound: BoundEvidence,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub justification: String,
    pub evidence: Evidence,
}

/// The rule that decides a level, with the two modes of R7 kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribution {
    GenusLe2,
    TrigonalOverQ,
    Degree3Quotient,
    NoPositiveRank,
    StrongDegree,
    DegreeTwoMinimality,
    CurveBoundLower,
    CurveBoundExact,
    Castelnuovo,
    GenericInequality,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: u64,
    pub verdict: Verdict,
    pub chain: Vec<RuleInstance>,
    /// Positive-rank class with conductor dividing N -> rule excluding it
    /// (absent for classes left open).
    pub per_class: BTreeMap<String, RuleId>,
    /// Positive-rank classes no rule excluded (UNRESOLVED only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub open_classes: Vec<String>,
    /// Points a human should look at; empty for every level up to 300.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub review: Vec<String>,
}

impl Certificate {
    pub fn attribution(&self) -> Attribution {
        let of = |inst: &RuleInstance| match (inst.rule, &inst.evidence) {
            (RuleId::R1GenusLe2, _) => Attribution::GenusLe2,
            (RuleId::R2TrigonalQ, _) => Attribution::TrigonalOverQ,
            (RuleId::R3Degree3StrongWeil, _) => Attribution::Degree3Quotient,
            (RuleId::R4NoPositiveRank, _) => Attribution::NoPositiveRank,
            (RuleId::R5StrongDegree, _) => Attribution::StrongDegree,
            (RuleId::R6DegreeTwoMinimality, _) => Attribution::DegreeTwoMinimality,
            (RuleId::R7CurveBound, Evidence::CurveBound { bound, .. })
                if matches!(bound.kind, BoundKind::ExactCountVsCurve { .. }) =>
            {
                Attribution::CurveBoundExact
            }
            (RuleId::R7CurveBound, _) => Attribution::CurveBoundLower,
            (RuleId::R8Castelnuovo, _) => Attribution::Castelnuovo,
            (RuleId::R9GenericInequality, _) => Attribution::GenericInequality,
        };
        match self.verdict {
            Verdict::Unresolved => Attribution::Unresolved,
            _ => self
                .chain
                .iter()
                .map(of)
                .max()
                .expect("decided certificates are non-empty"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Primes tried by the bound rules, in order.
    pub prime_pool: Vec<u64>,
    /// Pool primes tried for the curve bound before Castelnuovo.
    pub primary_primes: Vec<u64>,
    /// Upper end of the generic scan in [`verify_theorem`].
    pub scan_max: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            prime_pool: vec![2, 3, 5, 7, 11, 13],
            primary_primes: vec![2, 3],
            scan_max: 3000,
        }
    }
}

impl SieveConfig {
    pub fn validate(&self) -> Result<()> {
        for (i, &p) in self.prime_pool.iter().enumerate() {
            if !numth::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if self.prime_pool[..i].contains(&p) {
                return Err(Error::Inconsistent(format!(
                    "prime {p} repeated in the pool"
                )));
            }
        }
        if self.scan_max < MAX_LEVEL {
            return Err(Error::ScanRange {
                start: MAX_LEVEL,
                end: self.scan_max,
            });
        }
        Ok(())
    }
}

mod why {
    pub const R1: &str = "genus at most 2: trigonal over Q";
    pub const R2: &str = "gonality 3 realised by a map defined over Q";
    pub const R3: &str =
        "positive-rank elliptic quotient of strong Weil degree 3 (Abramovich-Harris, d = 3)";
    pub const R4: &str = "no positive-rank elliptic curve has conductor dividing N";
    pub const R4_HYPERELLIPTIC: &str = "no positive-rank elliptic curve has conductor dividing N; \
         hyperelliptic of genus > 2, reduced to this case by the W_3 argument for hyperelliptic levels";
    pub const R5: &str =
        "a map to the class factors through the strong Weil curve, whose degree exceeds 3";
    pub const R6: &str = "bielliptic with a degree-2 strong Weil map and no positive-rank curve \
         of smaller conductor: W_3 points all come from W_2";
    pub const R7: &str = "three times the curve's F_{p^2}-points is below the F_{p^2}-points of \
         X_0(N) (Ogg bound with psi(N))";
    pub const R7_EXACT: &str = "three times the curve's F_{p^2}-points is below the exact \
         F_{p^2}-point count of X_0(N) from Hecke traces";
    pub const R8: &str =
        "Castelnuovo: a W_Q quotient of degree 2 and a degree-3 elliptic map would generate the function field";
    pub const R9: &str = "Ogg bound with psi(N) exceeds 3(p+1)^2: not trielliptic over Q";
}

fn curve_bound_instance(
    db: &EcDb,
    level: u64,
    class_id: &str,
    p: u64,
    mode: CountMode,
) -> Result<Option<RuleInstance>> {
    let bound = bounds::excludes_vs_curve(db, level, class_id, p, mode)?;
    if !bound.excludes {
        return Ok(None);
    }
    let f = numth::factor(level)?;
    Ok(Some(RuleInstance {
        rule: RuleId::R7CurveBound,
        justification: match mode {
            CountMode::LowerBound => why::R7,
            CountMode::Exact => why::R7_EXACT,
        }
        .to_string(),
        evidence: Evidence::CurveBound {
            class_id: class_id.to_string(),
            psi: f.psi_index(),
            omega: f.omega(),
            bound,
        },
    }))
}

/// Classifies one level `1 <= N <= 300`.
pub fn classify(level: u64, db: &EcDb, config: &SieveConfig) -> Result<Certificate> {
    if level == 0 {
        return Err(Error::NotPositive(0));
    }
    if level > MAX_LEVEL {
        return Err(Error::LevelOutOfRange {
            level,
            max: MAX_LEVEL,
        });
    }
    config.validate()?;
    db.check_coverage(level)?;

    let inv = curvedata::invariants(level)?;
    let flags = curvedata::flags(level)?;
    let yes = |rule, justification: &str, evidence| Certificate {
        level,
        verdict: Verdict::Yes,
        chain: vec![RuleInstance {
            rule,
            justification: justification.to_string(),
            evidence,
        }],
        per_class: BTreeMap::new(),
        open_classes: vec![],
        review: vec![],
    };

    if inv.genus <= 2 {
        return Ok(yes(
            RuleId::R1GenusLe2,
            why::R1,
            Evidence::Genus { genus: inv.genus },
        ));
    }
    if flags.trigonal_over_q {
        return Ok(yes(
            RuleId::R2TrigonalQ,
            why::R2,
            Evidence::TrigonalOverQ {
                genus: inv.genus,
                gonality3: flags.gonality3,
            },
        ));
    }

    let classes = db.positive_rank_classes_dividing(level)?;
    if let Some(c) = classes
        .iter()
        .find(|c| c.conductor == level && c.strong_degree == 3)
    {
        if !INFINITELY_MANY_CUBIC_POINTS.contains(&level) {
            return Err(Error::Contradiction {
                level,
                detail: format!("{} has strong Weil degree 3 and positive rank", c.class_id),
            });
        }
        return Ok(yes(
            RuleId::R3Degree3StrongWeil,
            why::R3,
            Evidence::StrongDegree {
                class_id: c.class_id.clone(),
                conductor: c.conductor,
                rank: c.rank,
                strong_degree: c.strong_degree,
            },
        ));
    }

    let mut cert = Certificate {
        level,
        verdict: Verdict::No,
        chain: vec![],
        per_class: BTreeMap::new(),
        open_classes: vec![],
        review: vec![],
    };

    if classes.is_empty() {
        cert.chain.push(RuleInstance {
            rule: RuleId::R4NoPositiveRank,
            justification: if flags.hyperelliptic {
                why::R4_HYPERELLIPTIC
            } else {
                why::R4
            }
            .to_string(),
            evidence: Evidence::NoPositiveRank {
                conductors_checked: numth::divisors(level),
                hyperelliptic: flags.hyperelliptic,
                genus: inv.genus,
            },
        });
        return Ok(cert);
    }

    let smaller: Vec<String> = classes
        .iter()
        .filter(|c| c.conductor < level)
        .map(|c| c.class_id.clone())
        .collect();
    let mut open: Vec<&IsogenyClassSummary> = Vec::new();
    for c in &classes {
        if c.conductor == level && c.strong_degree > 3 {
            cert.chain.push(RuleInstance {
                rule: RuleId::R5StrongDegree,
                justification: why::R5.to_string(),
                evidence: Evidence::StrongDegree {
                    class_id: c.class_id.clone(),
                    conductor: c.conductor,
                    rank: c.rank,
                    strong_degree: c.strong_degree,
                },
            });
            cert.per_class
                .insert(c.class_id.clone(), RuleId::R5StrongDegree);
        } else if c.conductor == level
            && c.strong_degree == 2
            && flags.bielliptic
            && smaller.is_empty()
        {
            cert.chain.push(RuleInstance {
                rule: RuleId::R6DegreeTwoMinimality,
                justification: why::R6.to_string(),
                evidence: Evidence::DegreeTwoMinimality {
                    class_id: c.class_id.clone(),
                    conductor: c.conductor,
                    rank: c.rank,
                    strong_degree: c.strong_degree,
                    bielliptic: flags.bielliptic,
                    smaller_positive_rank: vec![],
                },
            });
            cert.per_class
                .insert(c.class_id.clone(), RuleId::R6DegreeTwoMinimality);
            if !DEGREE_TWO_MINIMALITY_LEVELS.contains(&level) {
                cert.review.push(format!(
                    "degree-2 minimality rule fired for {} outside its reference levels",
                    c.class_id
                ));
            }
        } else {
            open.push(c);
        }
    }

    let good: Vec<u64> = config
        .prime_pool
        .iter()
        .copied()
        .filter(|&p| !level.is_multiple_of(p))
        .collect();
    let (primary, secondary): (Vec<u64>, Vec<u64>) =
        good.iter().partition(|p| config.primary_primes.contains(p));

    let try_curve_bound = |open: &mut Vec<&IsogenyClassSummary>,
                           cert: &mut Certificate,
                           primes: &[u64],
                           mode: CountMode|
     -> Result<()> {
        let mut still_open = Vec::new();
        for c in open.drain(..) {
            let mut hit = None;
            for &p in primes {
                if let Some(inst) = curve_bound_instance(db, level, &c.class_id, p, mode)? {
                    hit = Some(inst);
                    break;
                }
            }
            match hit {
                Some(inst) => {
                    cert.chain.push(inst);
                    cert.per_class
                        .insert(c.class_id.clone(), RuleId::R7CurveBound);
                }
                None => still_open.push(c),
            }
        }
        *open = still_open;
        Ok(())
    };

    try_curve_bound(&mut open, &mut cert, &primary, CountMode::LowerBound)?;
    if open.is_empty() {
        return Ok(cert);
    }

    let level_wide = |cert: &mut Certificate, open: &[&IsogenyClassSummary], inst: RuleInstance| {
        let rule = inst.rule;
        cert.chain.push(inst);
        for c in open {
            cert.per_class.insert(c.class_id.clone(), rule);
        }
    };

    let unitary = numth::factor(level)?.unitary_divisors();
    for &q in unitary.iter().filter(|&&q| q > 1) {
        let ev = bounds::castelnuovo_evidence(level, q)?;
        if ev.excludes {
            level_wide(
                &mut cert,
                &open,
                RuleInstance {
                    rule: RuleId::R8Castelnuovo,
                    justification: why::R8.to_string(),
                    evidence: Evidence::Castelnuovo(ev),
                },
            );
            return Ok(cert);
        }
    }

    try_curve_bound(&mut open, &mut cert, &secondary, CountMode::LowerBound)?;
    try_curve_bound(&mut open, &mut cert, &good, CountMode::Exact)?;
    if open.is_empty() {
        return Ok(cert);
    }

    for &p in &good {
        let bound = bounds::excludes_generic(level, p)?;
        if bound.excludes {
            let f = numth::factor(level)?;
            level_wide(
                &mut cert,
                &open,
                RuleInstance {
                    rule: RuleId::R9GenericInequality,
                    justification: why::R9.to_string(),
                    evidence: Evidence::GenericBound {
                        psi: f.psi_index(),
                        omega: f.omega(),
                        bound,
                    },
                },
            );
            return Ok(cert);
        }
    }

    cert.verdict = Verdict::Unresolved;
    cert.open_classes = open.iter().map(|c| c.class_id.clone()).collect();
    Ok(cert)
}

/// Certificates for every level `1..=300`, in level order.
pub fn classify_all(db: &EcDb, config: &SieveConfig) -> Result<Vec<Certificate>> {
    config.validate()?;
    if db.max_conductor() < MAX_LEVEL {
        return Err(Error::MissingConductor {
            conductor: db.max_conductor() + 1,
            covered: db.max_conductor(),
        });
    }
    (1..=MAX_LEVEL)
        .into_par_iter()
        .map(|n| classify(n, db, config))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub yes: Vec<u64>,
    pub unresolved: Vec<u64>,
    pub scan_range: (u64, u64),
    pub scan_survivors: Vec<u64>,
    /// Expected YES levels the sieve did not confirm.
    pub missing: Vec<u64>,
    /// YES levels outside the expected list.
    pub unexpected: Vec<u64>,
    pub attribution: BTreeMap<Attribution, Vec<u64>>,
    pub success: bool,
}

pub fn report_from(
    certs: &[Certificate],
    scan_range: (u64, u64),
    scan_survivors: Vec<u64>,
) -> TheoremReport {
    let by = |v: Verdict| -> Vec<u64> {
        certs
            .iter()
            .filter(|c| c.verdict == v)
            .map(|c| c.level)
            .collect()
    };
    let yes = by(Verdict::Yes);
    let unresolved = by(Verdict::Unresolved);
    let missing: Vec<u64> = INFINITELY_MANY_CUBIC_POINTS
        .iter()
        .copied()
        .filter(|n| !yes.contains(n))
        .collect();
    let unexpected: Vec<u64> = yes
        .iter()
        .copied()
        .filter(|n| !INFINITELY_MANY_CUBIC_POINTS.contains(n))
        .collect();
    let mut attribution: BTreeMap<Attribution, Vec<u64>> = BTreeMap::new();
    for c in certs {
        attribution
            .entry(c.attribution())
            .or_default()
            .push(c.level);
    }
    let success = missing.is_empty()
        && unexpected.is_empty()
        && unresolved.is_empty()
        && scan_survivors.is_empty();
    TheoremReport {
        yes,
        unresolved,
        scan_range,
        scan_survivors,
        missing,
        unexpected,
        attribution,
        success,
    }
}

/// Classifies every level up to 300 and scans `[300, scan_max]` with the
/// generic inequality.
pub fn verify_theorem(db: &EcDb, config: &SieveConfig) -> Result<TheoremReport> {
    let certs = classify_all(db, config)?;
    let survivors = bounds::scan_not_trielliptic(MAX_LEVEL, config.scan_max, &config.prime_pool)?;
    Ok(report_from(&certs, (MAX_LEVEL, config.scan_max), survivors))
}
