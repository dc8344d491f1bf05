use std::fmt;

use crate::error::Result;
use crate::numtheory::factor::carmichael_lambda;
use crate::numtheory::order::omega;
use crate::numtheory::primality::is_doubly_safe;
use crate::numtheory::Natural;
use crate::rsa::keys::KeySystem;

/// Thresholds for the key-hygiene rules. All comparisons are strict:
/// the measured quantity has to exceed the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditPolicy {
    pub min_prime: Natural,
    pub min_prime_gap: Natural,
    pub min_lambda_lambda: Natural,
    pub min_order_e: Natural,
}

impl AuditPolicy {
    /// Desk-scale defaults, sized for the key ranges this crate tests.
    pub fn desk() -> Self {
        Self {
            min_prime: Natural::from(1u32) << 16,
            min_prime_gap: Natural::from(1u32) << 8,
            min_lambda_lambda: Natural::from(1u32) << 10,
            min_order_e: Natural::from(1u32) << 10,
        }
    }

    /// Production-grade thresholds: 10^200 for prime sizes and order
    /// quantities, 10^100 for the prime gap.
    pub fn paper_strict() -> Self {
        let ten = Natural::from(10u32);
        Self {
            min_prime: ten.pow(200),
            min_prime_gap: ten.pow(100),
            min_lambda_lambda: ten.pow(200),
            min_order_e: ten.pow(200),
        }
    }
}

/// One audit rule outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule: &'static str,
    pub advisory: bool,
    pub pass: bool,
    pub measured: Option<Natural>,
    pub threshold: Option<Natural>,
    pub note: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.advisory {
            "INFO"
        } else if self.pass {
            "PASS"
        } else {
            "FAIL"
        };
        write!(f, "{} {}", self.rule, status)?;
        if let Some(m) = &self.measured {
            write!(f, " measured={m}")?;
        }
        if let Some(t) = &self.threshold {
            write!(f, " threshold={t}")?;
        }
        if !self.note.is_empty() {
            write!(f, " note={}", self.note)?;
        }
        Ok(())
    }
}

/// Result of auditing one key system against a policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.advisory || f.pass)
    }

    pub fn finding(&self, rule: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.rule == rule)
    }
}

/// Evaluate the key-hygiene rules: prime sizes, prime gap, the iteration
/// hardness quantities lambda(lambda(n)) and ord_{lambda(n)}(e), doubly
/// safe status, plus the usage advisories that do not depend on the key
/// material itself.
pub fn audit_key(ks: &KeySystem, policy: &AuditPolicy) -> Result<AuditReport> {
    let mut findings = Vec::new();

    let smaller = ks.p().min(ks.q()).clone();
    findings.push(Finding {
        rule: "min-prime",
        advisory: false,
        pass: smaller > policy.min_prime,
        measured: Some(smaller),
        threshold: Some(policy.min_prime.clone()),
        note: String::new(),
    });

    let gap = if ks.p() > ks.q() { ks.p() - ks.q() } else { ks.q() - ks.p() };
    findings.push(Finding {
        rule: "prime-gap",
        advisory: false,
        pass: gap > policy.min_prime_gap,
        measured: Some(gap),
        threshold: Some(policy.min_prime_gap.clone()),
        note: String::new(),
    });

    let lambda_lambda = carmichael_lambda(ks.lambda_n())?;
    findings.push(Finding {
        rule: "lambda-lambda",
        advisory: false,
        pass: lambda_lambda > policy.min_lambda_lambda,
        measured: Some(lambda_lambda),
        threshold: Some(policy.min_lambda_lambda.clone()),
        note: String::new(),
    });

    let order_e = omega(ks.e(), ks.lambda_n())?;
    findings.push(Finding {
        rule: "order-e",
        advisory: false,
        pass: order_e > policy.min_order_e,
        measured: Some(order_e),
        threshold: Some(policy.min_order_e.clone()),
        note: String::new(),
    });

    let p_safe = is_doubly_safe(ks.p());
    let q_safe = is_doubly_safe(ks.q());
    findings.push(Finding {
        rule: "doubly-safe",
        advisory: false,
        pass: p_safe && q_safe,
        measured: None,
        threshold: None,
        note: format!("p={} q={}", p_safe, q_safe),
    });

    findings.push(Finding {
        rule: "padding",
        advisory: true,
        pass: true,
        measured: None,
        threshold: None,
        note: "pad messages to the size of the modulus and randomize the encryption".into(),
    });
    findings.push(Finding {
        rule: "blind-signing",
        advisory: true,
        pass: true,
        measured: None,
        threshold: None,
        note: "sign only hashes of documents, never raw values handed in by others".into(),
    });
    findings.push(Finding {
        rule: "common-modulus",
        advisory: true,
        pass: true,
        measured: None,
        threshold: None,
        note: "never send one message under coprime exponents sharing a modulus".into(),
    });

    Ok(AuditReport { findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::Natural;
    use crate::rsa::keys::KeySystem;
    use num_integer::Integer;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn policy(min_prime: u64, min_gap: u64) -> AuditPolicy {
        AuditPolicy {
            min_prime: n(min_prime),
            min_prime_gap: n(min_gap),
            min_lambda_lambda: n(0),
            min_order_e: n(0),
        }
    }

    #[test]
    fn small_primes_fail_min_prime() {
        let ks = KeySystem::new(n(11), n(35), n(13), n(17)).unwrap();
        let report = audit_key(&ks, &policy(1000, 0)).unwrap();
        let f = report.finding("min-prime").unwrap();
        assert!(!f.pass);
        assert_eq!(f.measured, Some(n(13)));
    }

    #[test]
    fn doubly_safe_pair_reports_lambda_lambda() {
        // (p, q) = (23, 47): lambda(lambda(n)) = (p-3)(q-3)/8 = 110.
        let lambda = n(506); // lcm(22, 46)
        let e = n(3);
        let d = crate::numtheory::mod_inv(&e, &lambda, crate::numtheory::InverseStrategy::Euclid)
            .unwrap();
        let ks = KeySystem::new(e, d, n(23), n(47)).unwrap();
        let report = audit_key(&ks, &AuditPolicy::desk()).unwrap();
        let f = report.finding("lambda-lambda").unwrap();
        assert_eq!(f.measured, Some(n(110)));
        let ds = report.finding("doubly-safe").unwrap();
        assert!(ds.pass);
    }

    #[test]
    fn close_primes_fail_gap_rule() {
        let lambda = n(100).lcm(&n(102));
        let e = n(7);
        let d = crate::numtheory::mod_inv(&e, &lambda, crate::numtheory::InverseStrategy::Euclid)
            .unwrap();
        let ks = KeySystem::new(e, d, n(101), n(103)).unwrap();
        let report = audit_key(&ks, &policy(10, 10)).unwrap();
        let f = report.finding("prime-gap").unwrap();
        assert!(!f.pass);
        assert_eq!(f.measured, Some(n(2)));
    }

    #[test]
    fn advisories_always_present() {
        let ks = KeySystem::new(n(11), n(35), n(13), n(17)).unwrap();
        let report = audit_key(&ks, &AuditPolicy::desk()).unwrap();
        for rule in ["padding", "blind-signing", "common-modulus"] {
            assert!(report.finding(rule).unwrap().advisory);
        }
        assert_eq!(report.findings.len(), 8);
    }
}
