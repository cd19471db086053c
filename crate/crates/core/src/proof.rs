//! Derivation trees, the checker, rendering and the JSON proof file format.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::calculus::{check_step, LogicSpec, RuleId};
use crate::formula::Style;
use crate::sequent::{parse_hypersequent, Hypersequent};

/// A proof tree. The checker recovers the active component and principal
/// formula of each step from the rule and the sequents, so nodes store only
/// these three fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: RuleId,
    pub conclusion: Hypersequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: RuleId, conclusion: impl Into<Hypersequent>) -> Self {
        Derivation { rule, conclusion: conclusion.into(), premises: vec![] }
    }

    pub fn node(rule: RuleId, conclusion: impl Into<Hypersequent>, premises: Vec<Derivation>) -> Self {
        Derivation { rule, conclusion: conclusion.into(), premises }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Nodes on the longest branch.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn count_rule(&self, rule: RuleId) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    pub fn contains_rule(&self, rule: RuleId) -> bool {
        self.count_rule(rule) > 0
    }

    pub fn rules_used(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |d| {
            out.insert(d.rule);
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Derivation)) {
        f(self);
        for p in &self.premises {
            p.walk(f);
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.at_path(rest),
        }
    }
}

/// The first node, in pre-order, that fails the checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub rule: RuleId,
    pub conclusion: Hypersequent,
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(
            f,
            "violation at [{}] ({} on '{}'): {}",
            path.join(", "),
            self.rule.name(),
            self.conclusion,
            self.description
        )
    }
}

impl std::error::Error for Violation {}

/// Checks every node against the schemas of `logic`; leaves must be axioms
/// of the logic or members of `axioms` (closed by [`RuleId::Hyp`]).
pub fn check_derivation(d: &Derivation, logic: &LogicSpec, axioms: &[Hypersequent]) -> Result<(), Violation> {
    let mut path = Vec::new();
    check_at(d, logic, axioms, &mut path)
}

fn check_at(d: &Derivation, logic: &LogicSpec, axioms: &[Hypersequent], path: &mut Vec<usize>) -> Result<(), Violation> {
    let premises: Vec<Hypersequent> = d.premises.iter().map(|p| p.conclusion.clone()).collect();
    check_step(d.rule, &d.conclusion, &premises, logic, axioms).map_err(|description| Violation {
        path: path.clone(),
        rule: d.rule,
        conclusion: d.conclusion.clone(),
        description,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_at(p, logic, axioms, path)?;
        path.pop();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofStyle {
    Text,
    Unicode,
    Latex,
}

impl std::str::FromStr for ProofStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" | "ascii" => Ok(ProofStyle::Text),
            "unicode" => Ok(ProofStyle::Unicode),
            "latex" => Ok(ProofStyle::Latex),
            _ => Err(format!("unknown proof style '{s}' (expected text, unicode or latex)")),
        }
    }
}

/// Text styles print one node per line, conclusion first, children indented
/// by two spaces. The LaTeX style nests `\infer[label]{conclusion}{premisses}`.
pub fn render_derivation(d: &Derivation, style: ProofStyle) -> String {
    let mut out = String::new();
    match style {
        ProofStyle::Text => render_text(d, Style::Ascii, 0, &mut out),
        ProofStyle::Unicode => render_text(d, Style::Unicode, 0, &mut out),
        ProofStyle::Latex => {
            render_latex(d, &mut out);
            out.push('\n');
        }
    }
    out
}

fn render_text(d: &Derivation, style: Style, indent: usize, out: &mut String) {
    out.push_str(&" ".repeat(indent));
    out.push_str(&d.conclusion.render(style));
    out.push_str("   [");
    out.push_str(d.rule.label());
    out.push_str("]\n");
    for p in &d.premises {
        render_text(p, style, indent + 2, out);
    }
}

fn render_latex(d: &Derivation, out: &mut String) {
    out.push_str("\\infer[");
    out.push_str(d.rule.latex_label());
    out.push_str("]{");
    out.push_str(&d.conclusion.render(Style::Latex));
    out.push_str("}{");
    for (i, p) in d.premises.iter().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        render_latex(p, out);
    }
    out.push('}');
}

/// A derivation together with the calculus it is meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofFile {
    /// Logic name as accepted by [`LogicSpec::parse`].
    pub logic: String,
    pub axioms: Vec<Hypersequent>,
    pub root: Derivation,
}

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn node_json(d: &Derivation) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("rule".into(), json!(d.rule.name()));
    m.insert("conclusion".into(), json!(d.conclusion.to_string()));
    m.insert("premises".into(), Value::Array(d.premises.iter().map(|p| Value::Object(node_json(p))).collect()));
    m
}

pub fn proof_to_json(file: &ProofFile) -> Value {
    let mut m = node_json(&file.root);
    m.insert("logic".into(), json!(file.logic));
    if !file.axioms.is_empty() {
        m.insert("axioms".into(), Value::Array(file.axioms.iter().map(|a| json!(a.to_string())).collect()));
    }
    Value::Object(m)
}

pub fn write_derivation(file: &ProofFile, mut dest: impl Write) -> Result<(), ProofFileError> {
    serde_json::to_writer_pretty(&mut dest, &proof_to_json(file))?;
    dest.write_all(b"\n")?;
    Ok(())
}

pub fn read_derivation(mut source: impl Read) -> Result<ProofFile, ProofFileError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let value: Value = serde_json::from_str(&text)?;
    proof_from_json(&value)
}

fn schema(path: &str, message: impl Into<String>) -> ProofFileError {
    ProofFileError::Schema { path: path.to_string(), message: message.into() }
}

pub fn proof_from_json(value: &Value) -> Result<ProofFile, ProofFileError> {
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    let logic = match obj.get("logic") {
        Some(Value::String(s)) => {
            LogicSpec::parse(s).map_err(|e| schema("logic", e.to_string()))?;
            s.clone()
        }
        Some(_) => return Err(schema("logic", "expected a string")),
        None => return Err(schema("logic", "missing field")),
    };
    let axioms = match obj.get("axioms") {
        None => vec![],
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let path = format!("axioms[{i}]");
                let s = v.as_str().ok_or_else(|| schema(&path, "expected a string"))?;
                parse_hypersequent(s).map_err(|e| schema(&path, e.to_string()))
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(schema("axioms", "expected an array")),
    };
    let root = node_from_json(value, "")?;
    Ok(ProofFile { logic, axioms, root })
}

fn field(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

fn node_from_json(value: &Value, prefix: &str) -> Result<Derivation, ProofFileError> {
    let here = if prefix.is_empty() { "$" } else { prefix };
    let obj = value.as_object().ok_or_else(|| schema(here, "expected an object"))?;
    let rule_path = field(prefix, "rule");
    let rule = obj
        .get("rule")
        .ok_or_else(|| schema(&rule_path, "missing field"))?
        .as_str()
        .ok_or_else(|| schema(&rule_path, "expected a string"))?
        .parse::<RuleId>()
        .map_err(|e| schema(&rule_path, e.to_string()))?;
    let concl_path = field(prefix, "conclusion");
    let conclusion = obj
        .get("conclusion")
        .ok_or_else(|| schema(&concl_path, "missing field"))?
        .as_str()
        .ok_or_else(|| schema(&concl_path, "expected a string"))?;
    let conclusion = parse_hypersequent(conclusion).map_err(|e| schema(&concl_path, e.to_string()))?;
    let prem_path = field(prefix, "premises");
    let premises = match obj.get("premises") {
        None => vec![],
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| node_from_json(v, &format!("{prem_path}[{i}]")))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(schema(&prem_path, "expected an array")),
    };
    Ok(Derivation { rule, conclusion, premises })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Preset;

    fn hs(text: &str) -> Hypersequent {
        parse_hypersequent(text).unwrap()
    }

    fn dia_top() -> Derivation {
        Derivation::node(RuleId::RDiaT, hs("=> <.>top"), vec![Derivation::leaf(RuleId::RTop, hs("=> top, top"))])
    }

    #[test]
    fn ax_renders_on_one_line() {
        let d = Derivation::leaf(RuleId::Ax, hs("a => a"));
        assert_eq!(render_derivation(&d, ProofStyle::Text), "a => a   [Ax]\n");
    }

    #[test]
    fn dia_top_tree() {
        let d = dia_top();
        assert_eq!(check_derivation(&d, &Preset::Mall.logic(), &[]), Ok(()));
        let text = render_derivation(&d, ProofStyle::Text);
        assert_eq!(text, "=> <.>top   [R◇\u{307}]\n  => top, top   [R⊤]\n");
        let latex = render_derivation(&d, ProofStyle::Latex);
        assert_eq!(
            latex,
            "\\infer[R\\Diamonddot]{\\seq \\Diamonddot \\top}{\\infer[R\\top]{\\seq \\top, \\top}{}}\n"
        );
    }

    #[test]
    fn violation_path() {
        let kbox = Derivation::node(RuleId::KBox, hs("[]a => []a"), vec![Derivation::leaf(RuleId::Ax, hs("a => a"))]);
        let v = check_derivation(&kbox, &Preset::Mall.logic(), &[]).unwrap_err();
        assert!(v.path.is_empty());
        assert!(v.description.contains("not enabled"));
        assert_eq!(check_derivation(&kbox, &Preset::Kmall.logic(), &[]), Ok(()));

        let bad = Derivation::node(
            RuleId::RWith,
            hs("a => a /\\ a"),
            vec![Derivation::leaf(RuleId::Ax, hs("a => a")), Derivation::leaf(RuleId::Ax, hs("b => a"))],
        );
        let v = check_derivation(&bad, &Preset::Mall.logic(), &[]).unwrap_err();
        assert!(v.path.is_empty());
        let inner = Derivation::node(RuleId::RDiaT, hs("=> <.>top"), vec![Derivation::leaf(RuleId::Ax, hs("=> top, top"))]);
        let v = check_derivation(&inner, &Preset::Mall.logic(), &[]).unwrap_err();
        assert_eq!(v.path, vec![0]);
        assert_eq!(v.rule, RuleId::Ax);
    }

    #[test]
    fn json_round_trip() {
        let file = ProofFile { logic: "mall".into(), axioms: vec![hs("a => b")], root: dia_top() };
        let mut buf = Vec::new();
        write_derivation(&file, &mut buf).unwrap();
        let back = read_derivation(buf.as_slice()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn json_errors_name_fields() {
        let text = r#"{"logic": "mall", "rule": "RDiaT", "conclusion": "=> <.>top",
                       "premises": [{"rule": "Foo", "conclusion": "=> top, top", "premises": []}]}"#;
        let err = read_derivation(text.as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "premises[0].rule: unknown rule name 'Foo'");

        let text = r#"{"logic": "s5", "rule": "Ax", "conclusion": "a => a", "premises": []}"#;
        assert!(read_derivation(text.as_bytes()).unwrap_err().to_string().starts_with("logic:"));

        let text = r#"{"logic": "mall", "rule": "Ax", "conclusion": "a => ", "premises": [3]}"#;
        assert!(read_derivation(text.as_bytes()).unwrap_err().to_string().starts_with("premises[0]:"));

        let text = r#"{"logic": "mall", "rule": "Ax", "conclusion": "a => *"}"#;
        assert!(read_derivation(text.as_bytes()).unwrap_err().to_string().starts_with("conclusion:"));
    }
}
