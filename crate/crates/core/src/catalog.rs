//! The fixed library of presentations.
//!
//! Each entry is defined here in code and shipped as a presentation file under
//! `presentations/`; [`verify_files`] checks the two agree.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::cli::parse::{parse_element, parse_word};
use crate::cli::report::Report;
use crate::engine::format::parse_presentation;
use crate::engine::{normal_form, Element, GeneratorSpec, Presentation, RewriteRule, Word};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    Z3Line,
    ExteriorPlane,
    DualPlane,
    Mq2,
    CalcCovariant,
    CalcCovariantAlt,
    CalcNoncov,
    Weyl,
    Heisenberg,
    EnvelopingTarget,
}

pub const ALL: [AlgebraId; 10] = [
    AlgebraId::Z3Line,
    AlgebraId::ExteriorPlane,
    AlgebraId::DualPlane,
    AlgebraId::Mq2,
    AlgebraId::CalcCovariant,
    AlgebraId::CalcCovariantAlt,
    AlgebraId::CalcNoncov,
    AlgebraId::Weyl,
    AlgebraId::Heisenberg,
    AlgebraId::EnvelopingTarget,
];

impl AlgebraId {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::Z3Line => "Z3_LINE",
            AlgebraId::ExteriorPlane => "EXTERIOR_PLANE",
            AlgebraId::DualPlane => "DUAL_PLANE",
            AlgebraId::Mq2 => "MQ2",
            AlgebraId::CalcCovariant => "CALC_COVARIANT",
            AlgebraId::CalcCovariantAlt => "CALC_COVARIANT_ALT",
            AlgebraId::CalcNoncov => "CALC_NONCOV",
            AlgebraId::Weyl => "WEYL",
            AlgebraId::Heisenberg => "HEISENBERG",
            AlgebraId::EnvelopingTarget => "ENVELOPING_TARGET",
        }
    }

    pub fn cli_name(self) -> String {
        self.name().to_lowercase()
    }

    /// Text of the shipped presentation file.
    pub fn file_text(self) -> &'static str {
        match self {
            AlgebraId::Z3Line => include_str!("../presentations/z3_line.toml"),
            AlgebraId::ExteriorPlane => include_str!("../presentations/exterior_plane.toml"),
            AlgebraId::DualPlane => include_str!("../presentations/dual_plane.toml"),
            AlgebraId::Mq2 => include_str!("../presentations/mq2.toml"),
            AlgebraId::CalcCovariant => include_str!("../presentations/calc_covariant.toml"),
            AlgebraId::CalcCovariantAlt => include_str!("../presentations/calc_covariant_alt.toml"),
            AlgebraId::CalcNoncov => include_str!("../presentations/calc_noncov.toml"),
            AlgebraId::Weyl => include_str!("../presentations/weyl.toml"),
            AlgebraId::Heisenberg => include_str!("../presentations/heisenberg.toml"),
            AlgebraId::EnvelopingTarget => include_str!("../presentations/enveloping_target.toml"),
        }
    }

    /// Presentations whose relation set is complete for the generators they declare.
    /// The calculi leave 1-form/2-form pairs free and are excluded.
    pub fn fully_specified(self) -> bool {
        !matches!(
            self,
            AlgebraId::CalcCovariant | AlgebraId::CalcCovariantAlt | AlgebraId::CalcNoncov
        )
    }

    pub fn is_calculus(self) -> bool {
        !self.fully_specified()
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ALL.iter()
            .copied()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown algebra `{s}`"))
    }
}

const Z3_LINE_GENS: &[(&str, i64, u8, Option<u32>)] = &[("theta", 1, 0, Some(3))];

const PLANE_GENS: &[(&str, i64, u8, Option<u32>)] =
    &[("theta", 1, 0, Some(3)), ("phi", 2, 0, Some(3))];
const PLANE_RULES: &[(&str, &str)] = &[("phi*theta", "q*theta*phi")];

const DUAL_GENS: &[(&str, i64, u8, Option<u32>)] = &[("xi", 2, 0, None), ("x", 0, 0, None)];
const DUAL_RULES: &[(&str, &str)] = &[("x*xi", "xi*x")];

const MQ2_GENS: &[(&str, i64, u8, Option<u32>)] = &[
    ("a", 0, 0, None),
    ("beta", 2, 0, None),
    ("gamma", 1, 0, None),
    ("dd", 0, 0, None),
];
const MQ2_RULES: &[(&str, &str)] = &[
    ("beta*a", "a*beta"),
    ("gamma*beta", "beta*gamma"),
    ("dd*beta", "beta*dd"),
    ("gamma*a", "q^2*a*gamma"),
    ("dd*gamma", "q^2*gamma*dd"),
    ("dd*a", "a*dd - (q - 1)*beta*gamma"),
];

// Differentials are declared before coordinates so that coordinate·form pairs are the
// larger words and every bimodule rule moves the differential to the left.
const CALC_GENS: &[(&str, i64, u8, Option<u32>)] = &[
    ("dtheta", 2, 1, None),
    ("dphi", 0, 1, None),
    ("d2theta", 0, 2, None),
    ("d2phi", 1, 2, None),
    ("theta", 1, 0, Some(3)),
    ("phi", 2, 0, Some(3)),
];

const CALC_COVARIANT_RULES: &[(&str, &str)] = &[
    ("phi*theta", "q*theta*phi"),
    ("theta*dtheta", "q*dtheta*theta"),
    ("phi*dtheta", "q^2*dtheta*phi + (1 - q)*dphi*theta"),
    ("theta*dphi", "dphi*theta"),
    ("phi*dphi", "dphi*phi"),
    ("theta*d2theta", "d2theta*theta"),
    ("phi*d2theta", "d2theta*phi + (q - q^2)*d2phi*theta"),
    ("theta*d2phi", "q^2*d2phi*theta"),
    ("phi*d2phi", "q*d2phi*phi"),
    ("dphi*dtheta", "dtheta*dphi"),
    ("d2phi*d2theta", "q^2*d2theta*d2phi"),
];

const CALC_NONCOV_RULES: &[(&str, &str)] = &[
    ("phi*theta", "q*theta*phi"),
    ("theta*dtheta", "q*dtheta*theta"),
    ("phi*dtheta", "q*dtheta*phi"),
    ("theta*dphi", "q*dphi*theta + (q - q^2)*dtheta*phi"),
    ("phi*dphi", "dphi*phi"),
    ("theta*d2theta", "d2theta*theta"),
    ("phi*d2theta", "q^2*d2theta*phi"),
    ("theta*d2phi", "d2phi*theta + (1 - q)*d2theta*phi"),
    ("phi*d2phi", "q*d2phi*phi"),
    ("dphi*dtheta", "dtheta*dphi"),
    ("d2phi*d2theta", "q^2*d2theta*d2phi"),
];

const CALC_COVARIANT_ALT_RULES: &[(&str, &str)] = &[
    ("phi*theta", "q*theta*phi"),
    ("theta*dtheta", "dtheta*theta"),
    ("phi*dtheta", "q*dtheta*phi + (q^2 - 1)*dphi*theta"),
    ("theta*dphi", "q^2*dphi*theta"),
    ("phi*dphi", "q^2*dphi*phi"),
    (
        "theta*d2theta",
        "q^2*d2theta*theta + (q - q^2)*dtheta*dtheta",
    ),
    ("theta*d2phi", "q*d2phi*theta + (q - q^2)*dphi*dtheta"),
    (
        "phi*d2theta",
        "q^2*d2theta*phi + (1 - q)*d2phi*theta + (1 - q)*dtheta*dphi",
    ),
    ("phi*d2phi", "q*d2phi*phi + (1 - q)*dphi*dphi"),
    ("dphi*dtheta", "dtheta*dphi"),
    ("d2phi*d2theta", "q^2*d2theta*d2phi"),
];

const WEYL_GENS: &[(&str, i64, u8, Option<u32>)] = &[
    ("theta", 1, 0, Some(3)),
    ("phi", 2, 0, Some(3)),
    ("ptheta", 2, 0, Some(3)),
    ("pphi", 1, 0, Some(3)),
];
const WEYL_RULES: &[(&str, &str)] = &[
    ("phi*theta", "q*theta*phi"),
    ("ptheta*theta", "1 + q^2*theta*ptheta"),
    ("ptheta*phi", "q*phi*ptheta"),
    ("pphi*theta", "q*theta*pphi"),
    ("pphi*phi", "1 + q^2*phi*pphi + (q^2 - 1)*theta*ptheta"),
    ("pphi*ptheta", "q^2*ptheta*pphi"),
];

const ENVELOPING_GENS: &[(&str, i64, u8, Option<u32>)] = &[
    ("e11", 0, 0, None),
    ("e12", 2, 0, None),
    ("e21", 1, 0, None),
    ("e22", 0, 0, None),
];
const ENVELOPING_RULES: &[(&str, &str)] = &[
    ("e12*e11", "q*e11*e12 - q*e12"),
    ("e21*e11", "q^2*e11*e21 + e21"),
    ("e22*e11", "e11*e22"),
    ("e21*e12", "q^2*e12*e21 + e22 - e11 + (1 - q^2)*e11^2"),
    ("e22*e12", "e12*e22 - e12 - (q^2 - 1)*e12*e11"),
    ("e22*e21", "e21*e22 - q*e21 - (1 - q)*e21*e11"),
];

// Sixth relation with the sign that the Weyl realization actually satisfies.
const ENVELOPING_SIXTH_CORRECTED: (&str, &str) = ("e22*e21", "e21*e22 + q*e21 + (1 - q)*e21*e11");

/// ENVELOPING_TARGET with its sixth relation sign-corrected. Not a catalog entry.
pub fn enveloping_corrected() -> Presentation {
    let mut rules = ENVELOPING_RULES.to_vec();
    rules[5] = ENVELOPING_SIXTH_CORRECTED;
    build("ENVELOPING_CORRECTED", ENVELOPING_GENS, &rules)
}

fn build(
    name: &str,
    gens: &[(&str, i64, u8, Option<u32>)],
    rules: &[(&str, &str)],
) -> Presentation {
    let specs: Vec<GeneratorSpec> = gens
        .iter()
        .map(|&(n, g, f, nil)| GeneratorSpec::new(n, g, f, nil))
        .collect();
    let alphabet =
        Presentation::new(name, specs.clone(), Vec::new()).expect("catalog generators are valid");
    let rules = rules
        .iter()
        .map(|(l, r)| {
            RewriteRule::new(
                parse_word(l, &alphabet).expect("catalog lhs parses"),
                parse_element(r, &alphabet).expect("catalog rhs parses"),
            )
        })
        .collect();
    Presentation::new(name, specs, rules).expect("catalog presentation is valid")
}

/// Scale factors of the hatted Heisenberg generators over the Weyl ones:
/// p̂_θ = i∂_θ, p̂_φ = iq∂_φ, θ̂ = θ, φ̂ = φ.
pub fn heisenberg_scales() -> [Scalar; 4] {
    [
        Scalar::one(),
        Scalar::one(),
        Scalar::i(),
        &Scalar::i() * &Scalar::q(),
    ]
}

/// Rewrite the Weyl rules in the rescaled generators ĝ = s_g·g.
fn heisenberg_from(weyl: &Presentation) -> Presentation {
    let s = heisenberg_scales();
    let word_scale = |w: &Word| {
        w.letters()
            .iter()
            .fold(Scalar::one(), |acc, &g| &acc * &s[g as usize])
    };
    let rules = weyl
        .rules()
        .iter()
        .map(|r| {
            let lhs_scale = word_scale(&r.lhs);
            let rhs = r
                .rhs
                .terms()
                .map(|(w, c)| {
                    let k = (&lhs_scale * c)
                        .checked_div(&word_scale(w))
                        .expect("scales are units");
                    (w.clone(), k)
                })
                .collect();
            RewriteRule::new(r.lhs.clone(), rhs)
        })
        .collect();
    Presentation::new("HEISENBERG", weyl.generators().to_vec(), rules)
        .expect("rescaled rules stay valid")
}

fn construct(id: AlgebraId) -> Presentation {
    let n = id.name();
    match id {
        AlgebraId::Z3Line => build(n, Z3_LINE_GENS, &[]),
        AlgebraId::ExteriorPlane => build(n, PLANE_GENS, PLANE_RULES),
        AlgebraId::DualPlane => build(n, DUAL_GENS, DUAL_RULES),
        AlgebraId::Mq2 => build(n, MQ2_GENS, MQ2_RULES),
        AlgebraId::CalcCovariant => build(n, CALC_GENS, CALC_COVARIANT_RULES),
        AlgebraId::CalcCovariantAlt => build(n, CALC_GENS, CALC_COVARIANT_ALT_RULES),
        AlgebraId::CalcNoncov => build(n, CALC_GENS, CALC_NONCOV_RULES),
        AlgebraId::Weyl => build(n, WEYL_GENS, WEYL_RULES),
        AlgebraId::Heisenberg => heisenberg_from(&get_presentation(AlgebraId::Weyl)),
        AlgebraId::EnvelopingTarget => build(n, ENVELOPING_GENS, ENVELOPING_RULES),
    }
}

pub fn get_presentation(id: AlgebraId) -> Arc<Presentation> {
    static CACHE: [OnceLock<Arc<Presentation>>; 10] = [const { OnceLock::new() }; 10];
    let slot = ALL.iter().position(|&a| a == id).expect("id is listed");
    CACHE[slot].get_or_init(|| Arc::new(construct(id))).clone()
}

/// Compare every shipped file with the in-code catalog.
pub fn verify_files() -> Result<(), String> {
    for id in ALL {
        let parsed = parse_presentation(id.file_text()).map_err(|e| format!("{id}: {e}"))?;
        if parsed != *get_presentation(id) {
            return Err(format!(
                "{id}: presentation file disagrees with the catalog"
            ));
        }
    }
    Ok(())
}

/// ad − qβγ = da − βγ and ad = da + (q−1)βγ in MQ2.
pub fn quantum_determinant_check() -> Report {
    let p = get_presentation(AlgebraId::Mq2);
    let mut r = Report::new("determinant");
    let e = |s: &str| parse_element(s, &p).expect("fixed expression");
    r.run("det.two_forms_agree", || {
        let res = normal_form(&e("a*dd - q*beta*gamma - (dd*a - beta*gamma)"), &p)
            .map_err(|x| x.to_string())?;
        if res.is_zero() {
            Ok(None)
        } else {
            Err(format!("residual {}", p.render(&res)))
        }
    });
    r.run("det.ad_rearrangement", || {
        let res =
            normal_form(&e("a*dd - dd*a - (q - 1)*beta*gamma"), &p).map_err(|x| x.to_string())?;
        if res.is_zero() {
            Ok(None)
        } else {
            Err(format!("residual {}", p.render(&res)))
        }
    });
    r.run("det.commutator_with_beta", || {
        let res = determinant_commutator("beta").map_err(|x| x.to_string())?;
        Ok(Some(format!(
            "[D_q, beta] = {} (informational)",
            p.render(&res)
        )))
    });
    r
}

/// D_q·g − g·D_q in MQ2 with D_q = ad − qβγ.
pub fn determinant_commutator(g: &str) -> Result<Element, crate::engine::EngineError> {
    let p = get_presentation(AlgebraId::Mq2);
    let det = parse_element("a*dd - q*beta*gamma", &p).expect("fixed expression");
    let x = p.gen(g)?;
    normal_form(&(&det.concat(&x) - &x.concat(&det)), &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::check_confluence;

    #[test]
    fn shapes() {
        let p = get_presentation(AlgebraId::ExteriorPlane);
        assert_eq!(p.generators().len(), 2);
        assert_eq!(p.rules().len(), 1);
        let m = get_presentation(AlgebraId::Mq2);
        let grades: Vec<u8> = m.generators().iter().map(|g| g.grade.value()).collect();
        assert_eq!(grades, vec![0, 2, 1, 0]);
        assert_eq!(m.rules().len(), 6);
        let c = get_presentation(AlgebraId::CalcCovariant);
        for (name, g) in [
            ("theta", 1),
            ("phi", 2),
            ("dtheta", 2),
            ("dphi", 0),
            ("d2theta", 0),
            ("d2phi", 1),
        ] {
            assert_eq!(
                c.generator(c.index_of(name).unwrap()).grade.value(),
                g,
                "{name}"
            );
        }
        let w = get_presentation(AlgebraId::Weyl);
        let grades: Vec<u8> = w.generators().iter().map(|g| g.grade.value()).collect();
        assert_eq!(grades, vec![1, 2, 2, 1]);
    }

    #[test]
    fn files_match_catalog() {
        verify_files().unwrap();
    }

    #[test]
    fn determinant_identities() {
        let r = quantum_determinant_check();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn fully_specified_entries_are_confluent() {
        for id in ALL
            .into_iter()
            .filter(|a| a.fully_specified() && *a != AlgebraId::EnvelopingTarget)
        {
            let r = check_confluence(&get_presentation(id), 4);
            assert!(r.passed(), "{id}: {:?}", r.checks()[0].witness());
        }
    }

    #[test]
    fn printed_enveloping_relations_diverge() {
        let r = check_confluence(&get_presentation(AlgebraId::EnvelopingTarget), 3);
        assert!(!r.passed());
        assert!(r.checks()[0].witness().unwrap().starts_with("e22*e21*e12 "));
        assert!(check_confluence(&enveloping_corrected(), 4).passed());
    }

    #[test]
    fn algebra_names_parse() {
        assert_eq!(
            "exterior_plane".parse::<AlgebraId>(),
            Ok(AlgebraId::ExteriorPlane)
        );
        assert!("nope".parse::<AlgebraId>().is_err());
    }
}
