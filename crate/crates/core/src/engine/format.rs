//! Presentation files: an `[algebra]` header, `[[generator]]` blocks and
//! `[[relation]]` blocks whose sides use the expression grammar.

use serde::Deserialize;

use super::{GeneratorSpec, Presentation, RewriteRule};
use crate::cli::parse::{parse_element, parse_word};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed presentation file: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("relation {index}: {message}")]
    Relation { index: usize, message: String },
    #[error(transparent)]
    Engine(#[from] super::EngineError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileHeader {
    name: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGenerator {
    symbol: String,
    grade: i64,
    form: u8,
    nilpotency: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRelation {
    lhs: String,
    rhs: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    algebra: FileHeader,
    #[serde(default)]
    generator: Vec<FileGenerator>,
    #[serde(default)]
    relation: Vec<FileRelation>,
}

pub fn parse_presentation(text: &str) -> Result<Presentation, FormatError> {
    let file: File = toml::from_str(text)?;
    let gens: Vec<GeneratorSpec> = file
        .generator
        .iter()
        .map(|g| GeneratorSpec::new(&g.symbol, g.grade, g.form, g.nilpotency))
        .collect();
    // names resolve against the bare generator list
    let alphabet = Presentation::new(&file.algebra.name, gens.clone(), Vec::new())?;
    let mut rules = Vec::new();
    for (index, r) in file.relation.iter().enumerate() {
        let rel_err = |message: String| FormatError::Relation {
            index: index + 1,
            message,
        };
        let lhs = parse_word(&r.lhs, &alphabet).map_err(|e| rel_err(e.to_string()))?;
        let rhs = parse_element(&r.rhs, &alphabet).map_err(|e| rel_err(e.to_string()))?;
        rules.push(RewriteRule::new(lhs, rhs));
    }
    Ok(Presentation::new(&file.algebra.name, gens, rules)?)
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = format!("[algebra]\nname = \"{}\"\n", p.name());
    for g in p.generators() {
        out.push_str(&format!(
            "\n[[generator]]\nsymbol = \"{}\"\ngrade = {}\nform = {}\n",
            g.name, g.grade, g.form_degree
        ));
        if let Some(n) = g.nilpotency {
            out.push_str(&format!("nilpotency = {n}\n"));
        }
    }
    for r in p.rules() {
        out.push_str(&format!(
            "\n[[relation]]\nlhs = \"{}\"\nrhs = \"{}\"\n",
            p.render_word(&r.lhs),
            p.render(&r.rhs)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"
[algebra]
name = "LINE"

[[generator]]
symbol = "theta"
grade = 1
form = 0
nilpotency = 3
"#;

    #[test]
    fn reads_minimal_file() {
        let p = parse_presentation(LINE).unwrap();
        assert_eq!(p.generators().len(), 1);
        assert_eq!(p.all_rules().len(), 1);
    }

    #[test]
    fn write_then_read_is_identity() {
        let text = r#"
[algebra]
name = "P"

[[generator]]
symbol = "theta"
grade = 1
form = 0
nilpotency = 3

[[generator]]
symbol = "phi"
grade = 2
form = 0
nilpotency = 3

[[relation]]
lhs = "phi*theta"
rhs = "q*theta*phi"
"#;
        let p = parse_presentation(text).unwrap();
        let again = parse_presentation(&write_presentation(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn reports_bad_relation() {
        let text = format!("{LINE}\n[[relation]]\nlhs = \"theta*theta\"\nrhs = \"phi\"\n");
        let err = parse_presentation(&text).unwrap_err();
        assert!(matches!(err, FormatError::Relation { index: 1, .. }));
    }
}
