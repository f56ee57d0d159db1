//! Plain-text rendering. Every number shown here is a field of the
//! structured output.

use std::fmt::Write;

use x0cubic_core::bounds::BoundKind;
use x0cubic_core::sieve::{Certificate, Evidence, RuleInstance, TheoremReport};

pub fn list(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn polynomial(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let a = c.unsigned_abs();
        match (k, a) {
            (0, _) => {
                let _ = write!(out, "{a}");
            }
            (_, 1) => {}
            _ => {
                let _ = write!(out, "{a}");
            }
        }
        match k {
            0 => {}
            1 => out.push('t'),
            _ => {
                let _ = write!(out, "t^{k}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn evidence(inst: &RuleInstance) -> String {
    match &inst.evidence {
        Evidence::Genus { genus } => format!("genus {genus}"),
        Evidence::TrigonalOverQ { genus, gonality3 } => {
            format!("genus {genus}, gonality 3: {gonality3}")
        }
        Evidence::StrongDegree {
            class_id,
            conductor,
            rank,
            strong_degree,
        } => format!(
            "{class_id}: conductor {conductor}, rank {rank}, strong Weil degree {strong_degree}"
        ),
        Evidence::NoPositiveRank {
            conductors_checked,
            genus,
            ..
        } => format!(
            "genus {genus}; no positive-rank class among conductors {}",
            list(conductors_checked)
        ),
        Evidence::DegreeTwoMinimality {
            class_id,
            conductor,
            rank,
            strong_degree,
            ..
        } => format!(
            "{class_id}: conductor {conductor}, rank {rank}, strong Weil degree {strong_degree}; \
             no smaller positive-rank conductor"
        ),
        Evidence::CurveBound {
            class_id,
            psi,
            omega,
            bound,
        } => {
            let (p, n, q) = (bound.prime, bound.level, bound.prime * bound.prime);
            match &bound.kind {
                BoundKind::ExactCountVsCurve { label } => format!(
                    "{class_id} at p = {p} (exact): |X_0({n})(F_{q})| = {} > {} = 3 |{label}(F_{q})|",
                    bound.lower, bound.upper
                ),
                BoundKind::SpecificCurve { label } => format!(
                    "{class_id} at p = {p}: L_{p} = ({p}-1)/12 * {psi} + 2^{omega} >= {} > {} = 3 |{label}(F_{q})|",
                    bound.lower, bound.upper
                ),
                BoundKind::GenericTrielliptic => String::new(),
            }
        }
        Evidence::Castelnuovo(ev) => format!(
            "W_{}: genus {} > 2 * {} + 5 = {} ({} fixed points)",
            ev.q, ev.genus, ev.quotient_genus, ev.threshold, ev.fixed_points
        ),
        Evidence::GenericBound { psi, omega, bound } => {
            let p = bound.prime;
            format!(
                "p = {p}: L_{p} = ({p}-1)/12 * {psi} + 2^{omega} >= {} > {} = 3({p}+1)^2",
                bound.lower, bound.upper
            )
        }
    }
}

pub fn certificate(cert: &Certificate) -> String {
    let mut out = format!("X_0({}): {}\n", cert.level, cert.verdict);
    for inst in &cert.chain {
        let _ = writeln!(out, "  {}  {}", inst.rule, evidence(inst));
        let _ = writeln!(out, "      {}", inst.justification);
    }
    for (class, rule) in &cert.per_class {
        let _ = writeln!(out, "  class {class}: excluded by {rule}");
    }
    for class in &cert.open_classes {
        let _ = writeln!(out, "  class {class}: not excluded");
    }
    for note in &cert.review {
        let _ = writeln!(out, "  review: {note}");
    }
    out
}

pub fn report(r: &TheoremReport) -> String {
    let mut out = format!("YES ({} levels): {}\n", r.yes.len(), list(&r.yes));
    let _ = writeln!(out, "UNRESOLVED: {}", list(&r.unresolved));
    let _ = writeln!(
        out,
        "scan [{}, {}] survivors: {}",
        r.scan_range.0,
        r.scan_range.1,
        list(&r.scan_survivors)
    );
    if !r.missing.is_empty() {
        let _ = writeln!(out, "expected but not confirmed: {}", list(&r.missing));
    }
    if !r.unexpected.is_empty() {
        let _ = writeln!(out, "confirmed but not expected: {}", list(&r.unexpected));
    }
    for (attr, levels) in &r.attribution {
        let name = serde_json::to_value(attr).expect("unit variant");
        let _ = writeln!(
            out,
            "  {:<22} {:>3}  {}",
            name.as_str().unwrap_or_default(),
            levels.len(),
            list(levels)
        );
    }
    let _ = writeln!(
        out,
        "{}",
        if r.success {
            "verified"
        } else {
            "NOT verified"
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(polynomial(&[1, 2, 2]), "1 + 2t + 2t^2");
        assert_eq!(polynomial(&[1, -1, 5, -3, 9]), "1 - t + 5t^2 - 3t^3 + 9t^4");
        assert_eq!(polynomial(&[1]), "1");
        assert_eq!(polynomial(&[0, 0]), "0");
    }
}
