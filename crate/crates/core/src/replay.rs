//! Independent recheck of certificates.
//!
//! Each rule instance is re-evaluated from its recorded inputs: invariants
//! are recomputed, the curve table is re-queried, and every fired comparison
//! is redone in integer arithmetic. Nothing from the sieve's control flow is
//! reused.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bounds::{BoundEvidence, BoundKind};
use crate::curvedata;
use crate::ecdb::EcDb;
use crate::hecke;
use crate::numth;
use crate::sieve::{Certificate, Evidence, RuleId, RuleInstance, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("level {level}, {}: {reason}", rule.map_or("certificate".to_string(), |r| r.to_string()))]
pub struct ReplayError {
    pub level: u64,
    pub rule: Option<RuleId>,
    pub reason: String,
}

struct Checker<'a> {
    cert: &'a Certificate,
    db: &'a EcDb,
    rule: Option<RuleId>,
}

impl Checker<'_> {
    fn ensure(&self, ok: bool, reason: impl FnOnce() -> String) -> Result<(), ReplayError> {
        if ok {
            Ok(())
        } else {
            Err(ReplayError {
                level: self.cert.level,
                rule: self.rule,
                reason: reason(),
            })
        }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, ReplayError> {
        Err(ReplayError {
            level: self.cert.level,
            rule: self.rule,
            reason: reason.into(),
        })
    }

    fn genus(&self) -> u64 {
        curvedata::genus(self.cert.level)
    }

    /// `(psi(N), omega(N))` from the factorisation, without the sieve's helpers.
    fn psi_omega(&self) -> (u64, u32) {
        let n = self.cert.level;
        let f = numth::factor(n).expect("level is positive");
        let psi = f.primes().fold(n, |acc, p| acc / p * (p + 1));
        (psi, f.factors().len() as u32)
    }

    fn check_class(
        &self,
        class_id: &str,
        conductor: u64,
        rank: u32,
        strong_degree: u64,
    ) -> Result<(), ReplayError> {
        let Ok(c) = self.db.class(class_id) else {
            return self.fail(format!("class {class_id} not in the curve table"));
        };
        self.ensure(
            c.conductor == conductor && c.rank == rank && c.strong_degree == strong_degree,
            || format!("recorded data for {class_id} disagrees with the curve table"),
        )?;
        self.ensure(rank > 0, || format!("{class_id} has rank 0"))
    }

    /// Rechecks an Ogg-bound comparison: `(p-1) psi / 12 + 2^omega > upper`,
    /// cross-multiplied by 12.
    fn check_ogg(&self, psi: u64, omega: u32, b: &BoundEvidence) -> Result<(), ReplayError> {
        let p = b.prime;
        let (rpsi, romega) = self.psi_omega();
        self.ensure(psi == rpsi && omega == romega, || {
            format!("recorded psi/omega {psi}/{omega}, recomputed {rpsi}/{romega}")
        })?;
        let twelve_l = (p - 1) * psi + 12 * (1u64 << omega);
        self.ensure(b.lower == twelve_l.div_ceil(12), || {
            format!("recorded lower {} but 12 L = {twelve_l}", b.lower)
        })?;
        self.ensure(twelve_l > 12 * b.upper, || {
            format!("12 L = {twelve_l} does not exceed 12 * {}", b.upper)
        })
    }

    fn check_bound_common(&self, b: &BoundEvidence) -> Result<(), ReplayError> {
        let p = b.prime;
        self.ensure(b.level == self.cert.level, || {
            "bound recorded for another level".into()
        })?;
        self.ensure(
            numth::is_prime(p) && !self.cert.level.is_multiple_of(p),
            || format!("{p} is not a good prime"),
        )?;
        self.ensure(b.excludes, || "bound recorded as not excluding".into())
    }

    fn check_instance(&mut self, inst: &RuleInstance) -> Result<(), ReplayError> {
        self.rule = Some(inst.rule);
        let level = self.cert.level;
        match (inst.rule, &inst.evidence) {
            (RuleId::R1GenusLe2, Evidence::Genus { genus }) => self
                .ensure(*genus == self.genus() && *genus <= 2, || {
                    format!("genus {genus} recorded, {} recomputed", self.genus())
                }),
            (RuleId::R2TrigonalQ, Evidence::TrigonalOverQ { genus, .. }) => {
                self.ensure(*genus == self.genus(), || "genus mismatch".into())?;
                self.ensure(
                    curvedata::TRIGONAL_OVER_Q_GONALITY_THREE.contains(&level),
                    || "level is not trigonal over Q".into(),
                )
            }
            (
                RuleId::R3Degree3StrongWeil,
                Evidence::StrongDegree {
                    class_id,
                    conductor,
                    rank,
                    strong_degree,
                },
            ) => {
                self.check_class(class_id, *conductor, *rank, *strong_degree)?;
                self.ensure(*conductor == level && *strong_degree == 3, || {
                    "needs conductor N and strong degree 3".into()
                })
            }
            (
                RuleId::R4NoPositiveRank,
                Evidence::NoPositiveRank {
                    conductors_checked,
                    hyperelliptic,
                    genus,
                },
            ) => {
                self.ensure(*genus == self.genus(), || "genus mismatch".into())?;
                self.ensure(
                    *hyperelliptic == curvedata::HYPERELLIPTIC_LEVELS.contains(&level),
                    || "hyperelliptic flag mismatch".into(),
                )?;
                let all: Vec<u64> = (1..=level).filter(|d| level.is_multiple_of(*d)).collect();
                self.ensure(*conductors_checked == all, || {
                    "not every divisor of N was checked".into()
                })?;
                let hit = self
                    .db
                    .classes()
                    .find(|c| c.rank > 0 && level.is_multiple_of(c.conductor));
                self.ensure(hit.is_none(), || {
                    format!("{} has positive rank", hit.unwrap().class_id)
                })
            }
            (
                RuleId::R5StrongDegree,
                Evidence::StrongDegree {
                    class_id,
                    conductor,
                    rank,
                    strong_degree,
                },
            ) => {
                self.check_class(class_id, *conductor, *rank, *strong_degree)?;
                self.ensure(*conductor == level && *strong_degree > 3, || {
                    format!("strong degree {strong_degree} at conductor {conductor}")
                })
            }
            (
                RuleId::R6DegreeTwoMinimality,
                Evidence::DegreeTwoMinimality {
                    class_id,
                    conductor,
                    rank,
                    strong_degree,
                    bielliptic,
                    smaller_positive_rank,
                },
            ) => {
                self.check_class(class_id, *conductor, *rank, *strong_degree)?;
                self.ensure(*conductor == level && *strong_degree == 2, || {
                    "needs conductor N and strong degree 2".into()
                })?;
                self.ensure(
                    *bielliptic && curvedata::BIELLIPTIC_LEVELS.contains(&level),
                    || "level is not bielliptic".into(),
                )?;
                let smaller = self.db.classes().find(|c| {
                    c.rank > 0 && c.conductor < level && level.is_multiple_of(c.conductor)
                });
                self.ensure(
                    smaller_positive_rank.is_empty() && smaller.is_none(),
                    || "a positive-rank class of smaller conductor divides N".into(),
                )
            }
            (
                RuleId::R7CurveBound,
                Evidence::CurveBound {
                    class_id,
                    psi,
                    omega,
                    bound,
                },
            ) => {
                self.check_bound_common(bound)?;
                let Ok(class) = self.db.class(class_id) else {
                    return self.fail(format!("class {class_id} not in the curve table"));
                };
                self.ensure(
                    class.rank > 0 && level.is_multiple_of(class.conductor),
                    || format!("{class_id} is not a positive-rank class dividing N"),
                )?;
                let label = match &bound.kind {
                    BoundKind::SpecificCurve { label } | BoundKind::ExactCountVsCurve { label } => {
                        label
                    }
                    BoundKind::GenericTrielliptic => {
                        return self.fail("generic bound recorded under R7");
                    }
                };
                self.ensure(*label == class.strong_label, || {
                    format!("{label} is not the strong curve of {class_id}")
                })?;
                let count = self
                    .db
                    .curve_point_count(label, bound.prime, 2)
                    .map_err(|e| ReplayError {
                        level,
                        rule: self.rule,
                        reason: e.to_string(),
                    })?;
                self.ensure(bound.upper == 3 * count, || {
                    format!("upper {} but the curve has {count} points", bound.upper)
                })?;
                match bound.kind {
                    BoundKind::ExactCountVsCurve { .. } => {
                        let exact =
                            hecke::point_count(level, bound.prime, 2).map_err(|e| ReplayError {
                                level,
                                rule: self.rule,
                                reason: e.to_string(),
                            })?;
                        self.ensure(exact == bound.lower && exact > bound.upper, || {
                            format!(
                                "exact count {exact} vs recorded {} > {}",
                                bound.lower, bound.upper
                            )
                        })
                    }
                    _ => self.check_ogg(*psi, *omega, bound),
                }
            }
            (RuleId::R8Castelnuovo, Evidence::Castelnuovo(ev)) => {
                self.ensure(ev.level == level, || "evidence for another level".into())?;
                let q = ev.q;
                self.ensure(
                    q > 1 && level.is_multiple_of(q) && num_integer::gcd(q, level / q) == 1,
                    || format!("{q} is not a unitary divisor"),
                )?;
                let g = self.genus();
                let fixed = curvedata::al_fixed_points(level, q).map_err(|e| ReplayError {
                    level,
                    rule: self.rule,
                    reason: e.to_string(),
                })?;
                self.ensure(ev.genus == g && ev.fixed_points == fixed, || {
                    "genus or fixed-point count mismatch".into()
                })?;
                // Riemann-Hurwitz for a degree-2 cover: 2g - 2 = 2(2 g1 - 2) + fixed
                self.ensure(2 * g + 2 == 4 * ev.quotient_genus + fixed, || {
                    "Riemann-Hurwitz fails for the recorded quotient genus".into()
                })?;
                // Castelnuovo with (n1, g1) = (2, g1), (n2, g2) = (3, 1)
                let threshold = 2 * ev.quotient_genus + 3 + 2;
                self.ensure(
                    ev.threshold == threshold && ev.excludes && g > threshold,
                    || format!("genus {g} does not exceed {threshold}"),
                )
            }
            (RuleId::R9GenericInequality, Evidence::GenericBound { psi, omega, bound }) => {
                self.check_bound_common(bound)?;
                self.ensure(bound.kind == BoundKind::GenericTrielliptic, || {
                    "curve bound recorded under R9".into()
                })?;
                let p = bound.prime;
                self.ensure(bound.upper == 3 * (p + 1) * (p + 1), || {
                    "upper is not 3(p+1)^2".into()
                })?;
                self.check_ogg(*psi, *omega, bound)
            }
            (rule, _) => self.fail(format!("evidence does not match rule {rule}")),
        }
    }

    fn class_of(inst: &RuleInstance) -> Option<&str> {
        match &inst.evidence {
            Evidence::StrongDegree { class_id, .. }
            | Evidence::DegreeTwoMinimality { class_id, .. }
            | Evidence::CurveBound { class_id, .. } => Some(class_id),
            _ => None,
        }
    }

    fn run(&mut self) -> Result<(), ReplayError> {
        let cert = self.cert;
        let level = cert.level;
        for inst in &cert.chain {
            self.check_instance(inst)?;
        }
        self.rule = None;

        let rules: Vec<RuleId> = cert.chain.iter().map(|i| i.rule).collect();
        let genus = self.genus();
        match cert.verdict {
            Verdict::Yes => {
                return self.ensure(
                    rules.len() == 1
                        && matches!(
                            rules[0],
                            RuleId::R1GenusLe2 | RuleId::R2TrigonalQ | RuleId::R3Degree3StrongWeil
                        ),
                    || format!("YES needs exactly one of R1, R2, R3; chain is {rules:?}"),
                );
            }
            Verdict::No | Verdict::Unresolved => {
                let trig = genus <= 2 || curvedata::TRIGONAL_OVER_Q_GONALITY_THREE.contains(&level);
                self.ensure(!trig, || "level is trigonal over Q".into())?;
                self.ensure(
                    !rules.iter().any(|r| {
                        matches!(
                            r,
                            RuleId::R1GenusLe2 | RuleId::R2TrigonalQ | RuleId::R3Degree3StrongWeil
                        )
                    }),
                    || "YES rule in a non-YES chain".into(),
                )?;
            }
        }

        let expected: BTreeSet<String> = self
            .db
            .classes()
            .filter(|c| c.rank > 0 && level.is_multiple_of(c.conductor))
            .map(|c| c.class_id.clone())
            .collect();
        if rules == [RuleId::R4NoPositiveRank] {
            return self.ensure(cert.verdict == Verdict::No && expected.is_empty(), || {
                "R4 with positive-rank classes present".into()
            });
        }
        let level_wide = rules
            .iter()
            .any(|r| matches!(r, RuleId::R8Castelnuovo | RuleId::R9GenericInequality));
        let covered: BTreeSet<String> = cert.per_class.keys().cloned().collect();
        let open: BTreeSet<String> = cert.open_classes.iter().cloned().collect();
        let listed: BTreeSet<String> = covered.union(&open).cloned().collect();
        self.ensure(listed == expected && covered.is_disjoint(&open), || {
            format!("certificate lists {listed:?}, curve table has {expected:?}")
        })?;
        for (class_id, rule) in &cert.per_class {
            let backed = cert.chain.iter().any(|i| {
                i.rule == *rule
                    && (Self::class_of(i) == Some(class_id.as_str())
                        || matches!(rule, RuleId::R8Castelnuovo | RuleId::R9GenericInequality))
            });
            self.ensure(backed, || {
                format!("{class_id} mapped to {rule} without an instance")
            })?;
        }
        match cert.verdict {
            Verdict::No => self.ensure(
                open.is_empty() && (level_wide || covered == expected),
                || "NO with classes left open".into(),
            ),
            Verdict::Unresolved => self.ensure(!open.is_empty() && !level_wide, || {
                "UNRESOLVED without open classes".into()
            }),
            Verdict::Yes => unreachable!(),
        }
    }
}

/// Rechecks one certificate against the curve table.
pub fn replay(cert: &Certificate, db: &EcDb) -> Result<(), ReplayError> {
    if cert.level == 0 || cert.level > crate::sieve::MAX_LEVEL {
        return Err(ReplayError {
            level: cert.level,
            rule: None,
            reason: "level outside 1..=300".into(),
        });
    }
    if cert.verdict != Verdict::Unresolved && cert.chain.is_empty() {
        return Err(ReplayError {
            level: cert.level,
            rule: None,
            reason: "empty chain".into(),
        });
    }
    Checker {
        cert,
        db,
        rule: None,
    }
    .run()
}
