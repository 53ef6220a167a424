use std::collections::HashSet;

use super::{Element, EngineError, Grade, Word};
use crate::scalar::Scalar;

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub grade: Grade,
    /// 0 for coordinates and derivatives, 1 for first and 2 for second differentials.
    pub form_degree: u8,
    pub nilpotency: Option<u32>,
}

impl GeneratorSpec {
    pub fn new(name: &str, grade: i64, form_degree: u8, nilpotency: Option<u32>) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            grade: Grade::new(grade),
            form_degree,
            nilpotency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Element,
}

impl RewriteRule {
    pub fn new(lhs: Word, rhs: Element) -> Self {
        RewriteRule { lhs, rhs }
    }

    /// lhs − rhs as an element.
    pub fn relation(&self) -> Element {
        &Element::from_word(self.lhs.clone()) - &self.rhs
    }
}

/// A graded generator list with an oriented rule set. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    generators: Vec<GeneratorSpec>,
    rules: Vec<RewriteRule>,
    // declared rules followed by the nilpotency powers
    all_rules: Vec<RewriteRule>,
    by_first: Vec<Vec<usize>>,
    step_budget: usize,
}

impl PartialEq for Presentation {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name && self.generators == o.generators && self.rules == o.rules
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn new(
        name: &str,
        generators: Vec<GeneratorSpec>,
        rules: Vec<RewriteRule>,
    ) -> Result<Self, EngineError> {
        let invalid = |m: String| Err(EngineError::InvalidPresentation(format!("{name}: {m}")));
        if generators.len() > u8::MAX as usize {
            return invalid("too many generators".into());
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.name.is_empty() || !seen.insert(g.name.as_str()) {
                return invalid(format!("generator name `{}` empty or repeated", g.name));
            }
            if g.form_degree > 2 {
                return invalid(format!("form degree of `{}` exceeds 2", g.name));
            }
            if matches!(g.nilpotency, Some(n) if n < 2) {
                return invalid(format!("nilpotency of `{}` must be at least 2", g.name));
            }
        }
        let n = generators.len();
        let mut p = Presentation {
            name: name.to_string(),
            generators,
            rules: Vec::new(),
            all_rules: Vec::new(),
            by_first: vec![Vec::new(); n],
            step_budget: DEFAULT_STEP_BUDGET,
        };
        for r in &rules {
            if r.lhs.len() != 2 {
                return invalid(format!(
                    "rule lhs {} is not a two-letter word",
                    p.render_word(&r.lhs)
                ));
            }
            for w in std::iter::once(&r.lhs).chain(r.rhs.terms().map(|(w, _)| w)) {
                if let Some(&bad) = w.letters().iter().find(|&&g| g as usize >= n) {
                    return Err(EngineError::UnknownGeneratorIndex(bad));
                }
            }
            let (lg, lf) = (p.grade_of(&r.lhs)?, p.form_degree_of(&r.lhs));
            for (w, _) in r.rhs.terms() {
                if w >= &r.lhs {
                    return invalid(format!(
                        "rule {} -> {} does not decrease the term order",
                        p.render_word(&r.lhs),
                        p.render(&r.rhs)
                    ));
                }
                if p.grade_of(w)? != lg || p.form_degree_of(w) != lf {
                    return invalid(format!(
                        "rule {} -> {} mixes grades or form degrees",
                        p.render_word(&r.lhs),
                        p.render(&r.rhs)
                    ));
                }
            }
        }
        p.rules = rules;
        let mut all = p.rules.clone();
        for (g, spec) in p.generators.iter().enumerate() {
            if let Some(k) = spec.nilpotency {
                all.push(RewriteRule::new(
                    Word::new(vec![g as u8; k as usize]),
                    Element::zero(),
                ));
            }
        }
        for (k, r) in all.iter().enumerate() {
            p.by_first[r.lhs.letters()[0] as usize].push(k);
        }
        p.all_rules = all;
        Ok(p)
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn step_budget(&self) -> usize {
        self.step_budget
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn generator(&self, g: u8) -> &GeneratorSpec {
        &self.generators[g as usize]
    }

    /// Declared commutation rules (nilpotency powers excluded).
    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// Every rule the kernel applies, nilpotency powers included.
    pub fn all_rules(&self) -> &[RewriteRule] {
        &self.all_rules
    }

    pub fn index_of(&self, name: &str) -> Result<u8, EngineError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|k| k as u8)
            .ok_or_else(|| EngineError::UnknownGenerator(name.to_string()))
    }

    /// Single-letter element for a generator name.
    pub fn gen(&self, name: &str) -> Result<Element, EngineError> {
        Ok(Element::letter(self.index_of(name)?))
    }

    /// Word from generator names.
    pub fn word(&self, names: &[&str]) -> Result<Word, EngineError> {
        names
            .iter()
            .map(|n| self.index_of(n))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new)
    }

    pub fn check_letters(&self, e: &Element) -> Result<(), EngineError> {
        match e
            .letters_used()
            .find(|&g| g as usize >= self.generators.len())
        {
            Some(bad) => Err(EngineError::UnknownGeneratorIndex(bad)),
            None => Ok(()),
        }
    }

    pub fn grade_of(&self, w: &Word) -> Result<Grade, EngineError> {
        w.letters().iter().try_fold(Grade::ZERO, |acc, &g| {
            self.generators
                .get(g as usize)
                .map(|s| acc + s.grade)
                .ok_or(EngineError::UnknownGeneratorIndex(g))
        })
    }

    pub fn form_degree_of(&self, w: &Word) -> u32 {
        w.letters()
            .iter()
            .map(|&g| self.generators[g as usize].form_degree as u32)
            .sum()
    }

    /// The common grade of all terms, if the element is homogeneous and nonzero.
    pub fn homogeneous_grade(&self, e: &Element) -> Option<Grade> {
        let mut gs = e.terms().map(|(w, _)| self.grade_of(w).ok());
        let first = gs.next()??;
        gs.all(|g| g == Some(first)).then_some(first)
    }

    /// Redexes of a word: (position, rule index into `all_rules`), leftmost first.
    pub fn redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let l = w.letters();
        let mut out = Vec::new();
        for pos in 0..l.len() {
            for &k in &self.by_first[l[pos] as usize] {
                let lhs = self.all_rules[k].lhs.letters();
                if l.len() - pos >= lhs.len() && &l[pos..pos + lhs.len()] == lhs {
                    out.push((pos, k));
                }
            }
        }
        out
    }

    pub fn first_redex(&self, w: &Word) -> Option<(usize, usize)> {
        let l = w.letters();
        for pos in 0..l.len() {
            for &k in &self.by_first[l[pos] as usize] {
                let lhs = self.all_rules[k].lhs.letters();
                if l.len() - pos >= lhs.len() && &l[pos..pos + lhs.len()] == lhs {
                    return Some((pos, k));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.first_redex(w).is_none()
    }

    /// One rewriting step at a given redex.
    pub fn rewrite_at(&self, w: &Word, pos: usize, rule: usize) -> Element {
        let r = &self.all_rules[rule];
        let mut out = Element::zero();
        for (rw, c) in r.rhs.terms() {
            out.add_term(w.splice(pos, r.lhs.len(), rw), c.clone());
        }
        out
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let l = w.letters();
        let mut parts = Vec::new();
        let mut k = 0;
        while k < l.len() {
            let mut run = 1;
            while k + run < l.len() && l[k + run] == l[k] {
                run += 1;
            }
            let name = self
                .generators
                .get(l[k] as usize)
                .map(|g| g.name.clone())
                .unwrap_or_else(|| format!("#{}", l[k]));
            parts.push(if run == 1 {
                name
            } else {
                format!("{name}^{run}")
            });
            k += run;
        }
        parts.join("*")
    }

    pub fn render(&self, e: &Element) -> String {
        render_sum(
            e.terms()
                .map(|(w, c)| (c.clone(), (!w.is_empty()).then(|| self.render_word(w)))),
        )
    }
}

/// Render a sum of coefficient·monomial terms; `None` marks the unit monomial.
pub fn render_sum<I: IntoIterator<Item = (Scalar, Option<String>)>>(terms: I) -> String {
    let mut out = String::new();
    for (k, (c, mono)) in terms.into_iter().enumerate() {
        let parts = c.render_terms();
        let single = parts.len() == 1;
        let negative = single && parts[0].0 < num_rational::BigRational::from_integer(0.into());
        let mag = if negative { -&c } else { c.clone() };
        let coef = mag.to_string();
        let body = match &mono {
            None if single => coef,
            None => format!("({coef})"),
            Some(m) if mag.is_one() => m.clone(),
            Some(m) if single => format!("{coef}*{m}"),
            Some(m) => format!("({coef})*{m}"),
        };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
