//! Graded noncommutative rewriting kernel.

mod element;
pub mod format;
mod presentation;
mod word;

use std::collections::BTreeMap;

pub use element::Element;
pub use presentation::{render_sum, GeneratorSpec, Presentation, RewriteRule, DEFAULT_STEP_BUDGET};
pub use word::{Grade, Word};

use crate::cli::report::{Check, Report};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown generator index {0}")]
    UnknownGeneratorIndex(u8),
    #[error("rewriting exceeded the step budget of {0} rule applications")]
    StepBudgetExceeded(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

/// Reduce to normal form.
///
/// Terms are processed largest-first. Every rule strictly decreases the length-lex
/// order, so a word never reappears once popped and like terms merge before they
/// are expanded further.
pub fn normal_form(e: &Element, p: &Presentation) -> Result<Element, EngineError> {
    p.check_letters(e)?;
    let mut pending: BTreeMap<Word, Scalar> = e.clone().into_terms();
    let mut out = Element::zero();
    let mut steps = 0usize;
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let Some((pos, k)) = p.first_redex(&w) else {
            out.add_term(w, c);
            continue;
        };
        steps += 1;
        if steps > p.step_budget() {
            return Err(EngineError::StepBudgetExceeded(p.step_budget()));
        }
        for (nw, nc) in p.rewrite_at(&w, pos, k).into_terms() {
            let slot = pending.entry(nw).or_default();
            *slot += &(&nc * &c);
        }
    }
    Ok(out)
}

pub fn mul(a: &Element, b: &Element, p: &Presentation) -> Result<Element, EngineError> {
    normal_form(&a.concat(b), p)
}

/// Normalized product of several factors, left to right.
pub fn product(factors: &[&Element], p: &Presentation) -> Result<Element, EngineError> {
    let mut acc = Element::one();
    for f in factors {
        acc = mul(&acc, f, p)?;
    }
    Ok(acc)
}

pub fn grade_of(w: &Word, p: &Presentation) -> Result<Grade, EngineError> {
    p.grade_of(w)
}

/// All normal words of length at most `max_len`, in term order.
pub fn enumerate_basis(p: &Presentation, max_len: usize) -> Vec<Word> {
    let n = p.generators().len() as u8;
    let mut out = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..n {
                let mut v = w.clone();
                v.push(g);
                // the prefix is normal, so only redexes ending at the new letter matter
                if p.is_normal(&v) {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

/// Every word over the alphabet of length at most `max_len`, in term order.
pub fn all_words(n_generators: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * n_generators);
        for w in &layer {
            for g in 0..n_generators as u8 {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Confluence diagnostic.
///
/// Words are visited in increasing term order. Every one-step reduct of a word is a
/// combination of strictly smaller words, which by induction already have a unique
/// normal form; so a word is resolvable iff all of its one-step reducts share one
/// normal form. With termination this is the diamond lemma up to `max_len`.
pub fn check_confluence(p: &Presentation, max_len: usize) -> Report {
    let mut report = Report::new("confluence");
    let id = format!("{}.max_len_{max_len}", p.name().to_lowercase());
    let start = std::time::Instant::now();
    let words = all_words(p.generators().len(), max_len);
    let mut failure: Option<String> = None;
    'outer: for w in &words {
        let redexes = p.redexes(w);
        if redexes.len() < 2 {
            continue;
        }
        let mut first: Option<(Element, (usize, usize))> = None;
        for &(pos, k) in &redexes {
            let nf = match normal_form(&p.rewrite_at(w, pos, k), p) {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(format!("{}: {e}", p.render_word(w)));
                    break 'outer;
                }
            };
            match &first {
                None => first = Some((nf, (pos, k))),
                Some((f, _)) if *f != nf => {
                    failure = Some(format!(
                        "{} reduces to both {} and {}",
                        p.render_word(w),
                        p.render(f),
                        p.render(&nf)
                    ));
                    break 'outer;
                }
                Some(_) => {}
            }
        }
    }
    let check = match failure {
        None => Check::pass(&id).with_detail(format!("{} words checked", words.len())),
        Some(w) => Check::fail(&id, w),
    };
    report.push(check.with_elapsed(start.elapsed()));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Presentation {
        let q = Scalar::q();
        Presentation::new(
            "PLANE",
            vec![
                GeneratorSpec::new("theta", 1, 0, Some(3)),
                GeneratorSpec::new("phi", 2, 0, Some(3)),
            ],
            vec![RewriteRule::new(
                Word::new(vec![1, 0]),
                Element::term(q, Word::new(vec![0, 1])),
            )],
        )
        .unwrap()
    }

    #[test]
    fn reorders_and_kills_cubes() {
        let p = plane();
        let e = normal_form(&Element::from_word(Word::new(vec![1, 0])), &p).unwrap();
        assert_eq!(e, Element::term(Scalar::q(), Word::new(vec![0, 1])));
        assert!(
            normal_form(&Element::from_word(Word::new(vec![0, 0, 0])), &p)
                .unwrap()
                .is_zero()
        );
        // φθθ → q²θθφ
        let e = normal_form(&Element::from_word(Word::new(vec![1, 0, 0])), &p).unwrap();
        assert_eq!(e, Element::term(Scalar::q2(), Word::new(vec![0, 0, 1])));
    }

    #[test]
    fn basis_of_plane_has_nine_words() {
        let p = plane();
        assert_eq!(enumerate_basis(&p, 4).len(), 9);
        assert_eq!(enumerate_basis(&p, 8).len(), 9);
    }

    #[test]
    fn confluence_detects_contradiction() {
        let q = Scalar::q();
        let p = Presentation::new(
            "BAD",
            vec![
                GeneratorSpec::new("theta", 1, 0, Some(3)),
                GeneratorSpec::new("phi", 2, 0, Some(3)),
            ],
            vec![
                RewriteRule::new(
                    Word::new(vec![1, 0]),
                    Element::term(q, Word::new(vec![0, 1])),
                ),
                RewriteRule::new(
                    Word::new(vec![1, 0]),
                    Element::from_word(Word::new(vec![0, 1])),
                ),
            ],
        )
        .unwrap();
        let r = check_confluence(&p, 3);
        assert!(!r.passed());
        assert!(r.checks()[0].witness().unwrap().starts_with("phi*theta "));
        assert!(check_confluence(&plane(), 4).passed());
    }

    #[test]
    fn step_budget_is_enforced() {
        let p = plane().with_step_budget(1);
        let e = Element::from_word(Word::new(vec![1, 1, 0, 0]));
        assert_eq!(normal_form(&e, &p), Err(EngineError::StepBudgetExceeded(1)));
    }

    #[test]
    fn rejects_increasing_rule() {
        let r = Presentation::new(
            "UP",
            vec![
                GeneratorSpec::new("a", 0, 0, None),
                GeneratorSpec::new("b", 0, 0, None),
            ],
            vec![RewriteRule::new(
                Word::new(vec![0, 1]),
                Element::from_word(Word::new(vec![1, 0])),
            )],
        );
        assert!(matches!(r, Err(EngineError::InvalidPresentation(_))));
    }

    #[test]
    fn rejects_grade_mixing_rule() {
        let r = Presentation::new(
            "MIX",
            vec![
                GeneratorSpec::new("a", 1, 0, None),
                GeneratorSpec::new("b", 0, 0, None),
            ],
            vec![RewriteRule::new(
                Word::new(vec![1, 0]),
                Element::from_word(Word::new(vec![1])),
            )],
        );
        assert!(matches!(r, Err(EngineError::InvalidPresentation(_))));
    }
}
