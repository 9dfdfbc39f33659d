//! Quotients of generators by sets of their isolated bumps, and detection
//! of extraneous bump sets: isolated bumps living inside an interval that
//! avoids every other generator's feet but still contains a foot of the
//! owning generator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fastness::BumpFamily;
use crate::interval::{complement_of_disjoint, Interval};
use crate::plmap::{Bump, PLMap, Sign};
use crate::system::FastSystem;

/// Replaces `f` by the identity on the orbitals of the given bumps; `f`
/// must actually use each of them.
pub fn quotient_by_bumps(f: &PLMap, excised: &[Bump]) -> Result<PLMap> {
    let signed = f.signed_bumps();
    for (i, e) in excised.iter().enumerate() {
        if !signed.iter().any(|(b, _)| b == e) {
            return Err(Error::BumpNotUsed(i));
        }
    }
    let mut out = PLMap::identity();
    for (b, sign) in &signed {
        if excised.contains(b) {
            continue;
        }
        let factor = match sign {
            Sign::Plus => b.map().clone(),
            Sign::Minus => b.map().invert(),
        };
        out = out.compose(&factor);
    }
    Ok(out)
}

/// A set of bumps of one generator that can be excised without changing
/// the marked isomorphism type, together with the witnessing interval.
#[derive(Clone, Debug, Serialize)]
pub struct ExtraneousCertificate {
    pub generator: usize,
    /// Indices into the system's canonical bump enumeration.
    pub bumps: Vec<usize>,
    pub witness: Interval,
}

/// All maximal certificates: for each generator, the witness intervals
/// range over the maximal gaps between the other generators' feet, and
/// each certificate collects every isolated bump of the generator inside
/// its gap.
pub fn find_extraneous(sys: &FastSystem) -> Vec<ExtraneousCertificate> {
    let family = BumpFamily::new(sys.bumps().to_vec());
    let mut out = Vec::new();
    for g in 0..sys.names().len() {
        let mut other_feet: Vec<Interval> = Vec::new();
        for (h, list) in sys.gen_bumps().iter().enumerate() {
            if h == g {
                continue;
            }
            for &(b, _) in list {
                other_feet.push(sys.feet()[b].src.clone());
                other_feet.push(sys.feet()[b].dest.clone());
            }
        }
        let own: Vec<usize> = sys.gen_bumps()[g].iter().map(|&(b, _)| b).collect();
        for gap in complement_of_disjoint(&other_feet) {
            let excisable: Vec<usize> = own
                .iter()
                .copied()
                .filter(|&b| family.is_isolated(b) && gap.contains(&sys.bumps()[b].support()))
                .collect();
            if excisable.is_empty() {
                continue;
            }
            let witnessed = own.iter().any(|&b| {
                !excisable.contains(&b)
                    && (gap.contains(&sys.feet()[b].src) || gap.contains(&sys.feet()[b].dest))
            });
            if witnessed {
                out.push(ExtraneousCertificate {
                    generator: g,
                    bumps: excisable,
                    witness: gap,
                });
            }
        }
    }
    out
}

/// Validates the certificate against the system and applies it, returning
/// the quotient family in the same enumeration.
pub fn excise(sys: &FastSystem, cert: &ExtraneousCertificate) -> Result<Vec<PLMap>> {
    if cert.generator >= sys.names().len() {
        return Err(Error::BadCertificate(format!(
            "generator {} out of range",
            cert.generator
        )));
    }
    if cert.bumps.is_empty() {
        return Ok(sys.generators().to_vec());
    }
    let family = BumpFamily::new(sys.bumps().to_vec());
    let own: Vec<usize> = sys.gen_bumps()[cert.generator]
        .iter()
        .map(|&(b, _)| b)
        .collect();
    for &b in &cert.bumps {
        if !own.contains(&b) {
            return Err(Error::BadCertificate(format!(
                "bump {b} is not used in generator {}",
                cert.generator
            )));
        }
        if !family.is_isolated(b) {
            return Err(Error::BadCertificate(format!("bump {b} is not isolated")));
        }
        if !cert.witness.contains(&sys.bumps()[b].support()) {
            return Err(Error::BadCertificate(format!(
                "support of bump {b} leaves the witness interval"
            )));
        }
    }
    let witnessed = own.iter().any(|&b| {
        !cert.bumps.contains(&b)
            && (cert.witness.contains(&sys.feet()[b].src)
                || cert.witness.contains(&sys.feet()[b].dest))
    });
    if !witnessed {
        return Err(Error::BadCertificate(
            "no retained bump of the generator has a foot in the witness interval".into(),
        ));
    }
    for (h, list) in sys.gen_bumps().iter().enumerate() {
        if h == cert.generator {
            continue;
        }
        for &(b, _) in list {
            for foot in [&sys.feet()[b].src, &sys.feet()[b].dest] {
                if !cert.witness.disjoint(foot) {
                    return Err(Error::BadCertificate(format!(
                        "witness interval meets a foot of generator {h}"
                    )));
                }
            }
        }
    }
    let excised: Vec<Bump> = cert.bumps.iter().map(|&b| sys.bumps()[b].clone()).collect();
    let mut out = sys.generators().to_vec();
    out[cert.generator] = quotient_by_bumps(&out[cert.generator], &excised)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, XRat};
    use crate::system::default_names;

    fn excision_system() -> FastSystem {
        let (maps, names) = fixtures::excision_family();
        FastSystem::new(maps, names).unwrap()
    }

    #[test]
    fn quotient_trivial_cases() {
        let h0 = fixtures::f_chain(2).remove(0);
        assert_eq!(quotient_by_bumps(&h0, &[]).unwrap(), h0);
        let all: Vec<Bump> = h0.signed_bumps().into_iter().map(|(b, _)| b).collect();
        assert!(quotient_by_bumps(&h0, &all).unwrap().is_identity());
    }

    #[test]
    fn quotient_removes_one_of_two_bumps() {
        let (maps, _) = fixtures::excision_family();
        let f = &maps[1];
        let bumps: Vec<Bump> = f.signed_bumps().into_iter().map(|(b, _)| b).collect();
        assert_eq!(bumps.len(), 3);
        let keep_last = quotient_by_bumps(&f, &bumps[..2].to_vec()).unwrap();
        assert_eq!(keep_last, bumps[2].map().clone());
        // a bump not used in f is rejected
        let alien = Bump::new(PLMap::two_piece_bump(int(100), int(101), int(102), int(103)).unwrap())
            .unwrap();
        assert!(matches!(
            quotient_by_bumps(&f, &[alien]),
            Err(Error::BumpNotUsed(0))
        ));
    }

    #[test]
    fn f2_chain_has_no_certificates() {
        let sys = FastSystem::new(fixtures::f_chain(2), default_names(2)).unwrap();
        assert!(find_extraneous(&sys).is_empty());
    }

    #[test]
    fn all_isolated_single_generator_yields_nothing() {
        // one generator made of two isolated bumps: the witness bullet
        // requires a retained foot in the gap, so no certificate
        let e1 = PLMap::two_piece_bump(int(0), int(1), int(2), int(3)).unwrap();
        let e2 = PLMap::two_piece_bump(int(4), int(5), int(6), int(7)).unwrap();
        let f = e1.compose(&e2);
        let sys = FastSystem::new(vec![f], default_names(1)).unwrap();
        assert!(find_extraneous(&sys).is_empty());
    }

    #[test]
    fn constructed_fixture_has_the_expected_certificate() {
        let sys = excision_system();
        let certs = find_extraneous(&sys);
        assert_eq!(certs.len(), 1);
        let c = &certs[0];
        assert_eq!(c.generator, 1);
        // the two isolated bumps of g1, in canonical enumeration
        assert_eq!(c.bumps.len(), 2);
        for &b in &c.bumps {
            assert!(BumpFamily::new(sys.bumps().to_vec()).is_isolated(b));
        }
        assert_eq!(c.witness.lo, XRat::Fin(int(8)));
        assert_eq!(c.witness.hi, XRat::PlusInf);
    }

    #[test]
    fn excision_preserves_fastness_and_enumeration() {
        let sys = excision_system();
        let cert = find_extraneous(&sys).remove(0);
        let quotient = excise(&sys, &cert).unwrap();
        let qsys = FastSystem::new(quotient, sys.names().to_vec()).unwrap();
        assert_eq!(qsys.bumps().len(), sys.bumps().len() - 2);
        // empty certificate is the identity operation
        let trivial = ExtraneousCertificate {
            generator: 0,
            bumps: vec![],
            witness: cert.witness.clone(),
        };
        assert_eq!(excise(&sys, &trivial).unwrap(), sys.generators().to_vec());
    }
}
