//! Metric registry and evaluation.
//!
//! Every metric counts matching tokens and divides by the document's token
//! count N. Three counting scopes exist:
//!
//! * `token_predicate`: tokens for which a rule holds;
//! * `sentence_span`: all tokens of sentences for which a rule holds;
//! * `ratio`: one representative token per distinct type (lemma or form).

mod rules;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::conllu::{validate, Document, Sentence, Token};
use crate::lexicon::Lexicons;
use crate::matrix::FeatureMatrix;
use crate::morph::{AnalyzedSentence, DerivedMorph, Morphology};

pub use rules::Rule;

const REGISTRY_TSV: &str = include_str!("../../data/registry.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Lexical,
    Grammar,
    Syntax,
    Pos,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Lexical, Group::Grammar, Group::Syntax, Group::Pos];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Lexical => "lexical",
            Group::Grammar => "grammar",
            Group::Syntax => "syntax",
            Group::Pos => "pos",
        }
    }

    /// Group size as printed in the published metric-count table.
    pub fn declared_size(self) -> usize {
        match self {
            Group::Lexical => 56,
            Group::Grammar => 23,
            Group::Syntax => 14,
            Group::Pos => 12,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| MetricsError::UnknownGroup(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    TokenPredicate,
    SentenceSpan,
    Ratio,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::TokenPredicate => "token_predicate",
            Scope::SentenceSpan => "sentence_span",
            Scope::Ratio => "ratio",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Scope::TokenPredicate, Scope::SentenceSpan, Scope::Ratio].into_iter().find(|sc| sc.as_str() == s)
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct MetricSpec {
    pub id: String,
    pub group: Group,
    pub description: String,
    pub scope: Scope,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub sent_id: String,
    /// 1-based token index within the sentence.
    pub index: usize,
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTrace {
    pub metric_id: String,
    pub doc_id: String,
    pub matched: Vec<Match>,
}

impl MatchTrace {
    pub fn forms(&self) -> Vec<&str> {
        self.matched.iter().map(|m| m.form.as_str()).collect()
    }
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown metric group `{0}` (expected lexical, grammar, syntax or pos)")]
    UnknownGroup(String),
    #[error("no metrics selected")]
    EmptySelection,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("document `{doc_id}`: {reason}")]
    InvalidDocument { doc_id: String, reason: String },
}

/// Read-only context handed to token rules.
pub struct TokenCtx<'a> {
    pub sentence: &'a Sentence,
    pub pos: usize,
    pub token: &'a Token,
    pub morph: &'a DerivedMorph,
    pub lex: &'a Lexicons,
}

/// Read-only context handed to sentence rules.
pub struct SentenceCtx<'a> {
    pub sentence: &'a Sentence,
    pub morph: &'a [DerivedMorph],
    pub lex: &'a Lexicons,
}

/// A document after tag correction and morphological analysis.
#[derive(Debug, Clone)]
pub struct AnalyzedDocument {
    pub doc_id: String,
    pub sentences: Vec<AnalyzedSentence>,
    pub token_count: usize,
}

#[derive(Debug, Clone)]
pub struct MetricRegistry {
    specs: Vec<MetricSpec>,
    morphology: Morphology,
}

/// The full registry, wired to the given lexicons.
pub fn builtin_registry(lexicons: Arc<Lexicons>) -> MetricRegistry {
    MetricRegistry::builtin(lexicons)
}

impl MetricRegistry {
    pub fn builtin(lexicons: Arc<Lexicons>) -> Self {
        let specs = REGISTRY_TSV
            .lines()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let cols: Vec<&str> = line.split('\t').collect();
                let [id, group, scope, description] = cols[..] else {
                    panic!("bundled registry row malformed: {line}");
                };
                let rule = rules::rule_for(id).unwrap_or_else(|| panic!("metric {id} has no rule"));
                MetricSpec {
                    id: id.to_string(),
                    group: group.parse().expect("bundled registry group"),
                    description: description.to_string(),
                    scope: Scope::parse(scope).expect("bundled registry scope"),
                    rule,
                }
            })
            .collect();
        MetricRegistry { specs, morphology: Morphology::new(lexicons) }
    }

    pub fn specs(&self) -> &[MetricSpec] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&MetricSpec> {
        self.specs.iter().find(|s| s.id == id)
    }

    pub fn morphology(&self) -> &Morphology {
        &self.morphology
    }

    pub fn group_size(&self, group: Group) -> usize {
        self.specs.iter().filter(|s| s.group == group).count()
    }

    /// Registry restricted to `groups`, keeping registry order.
    pub fn select_groups(&self, groups: &[Group]) -> Result<Self, MetricsError> {
        let specs: Vec<MetricSpec> = self.specs.iter().filter(|s| groups.contains(&s.group)).cloned().collect();
        if specs.is_empty() {
            return Err(MetricsError::EmptySelection);
        }
        Ok(MetricRegistry { specs, morphology: self.morphology.clone() })
    }

    pub fn analyze(&self, doc: &Document) -> AnalyzedDocument {
        AnalyzedDocument {
            doc_id: doc.doc_id.clone(),
            sentences: doc.sentences.iter().map(|s| self.morphology.analyze_sentence(s)).collect(),
            token_count: doc.token_count(),
        }
    }

    /// Value and matched tokens of one metric on one document.
    pub fn evaluate_metric(&self, doc: &Document, spec: &MetricSpec) -> (f64, MatchTrace) {
        self.evaluate_analyzed(&self.analyze(doc), spec)
    }

    pub fn evaluate_analyzed(&self, doc: &AnalyzedDocument, spec: &MetricSpec) -> (f64, MatchTrace) {
        let lex = self.morphology.lexicons();
        let mut matched = Vec::new();
        let mut push = |s: &Sentence, pos: usize| {
            let t = &s.tokens[pos];
            matched.push(Match { sent_id: s.sent_id.clone(), index: t.index, form: t.form.clone() });
        };

        match &spec.rule {
            Rule::Token(pred) => {
                for a in &doc.sentences {
                    for (pos, token) in a.sentence.tokens.iter().enumerate() {
                        let ctx = TokenCtx { sentence: &a.sentence, pos, token, morph: &a.morph[pos], lex };
                        if pred(&ctx) {
                            push(&a.sentence, pos);
                        }
                    }
                }
            }
            Rule::Sentence(pred) => {
                for a in &doc.sentences {
                    let ctx = SentenceCtx { sentence: &a.sentence, morph: &a.morph, lex };
                    if pred(&ctx) {
                        for pos in 0..a.sentence.len() {
                            push(&a.sentence, pos);
                        }
                    }
                }
            }
            Rule::DistinctTypes { filter, key } => {
                let mut seen = std::collections::HashSet::new();
                for a in &doc.sentences {
                    for (pos, token) in a.sentence.tokens.iter().enumerate() {
                        if filter(token) && seen.insert(key(token)) {
                            push(&a.sentence, pos);
                        }
                    }
                }
            }
        }

        let value = if doc.token_count == 0 { 0.0 } else { matched.len() as f64 / doc.token_count as f64 };
        (value, MatchTrace { metric_id: spec.id.clone(), doc_id: doc.doc_id.clone(), matched })
    }

    /// All tokens matched by `metric_id` in `doc`.
    pub fn explain_matches(&self, doc: &Document, metric_id: &str) -> Result<MatchTrace, MetricsError> {
        let spec = self.get(metric_id).ok_or_else(|| MetricsError::UnknownMetric(metric_id.to_string()))?;
        Ok(self.evaluate_metric(doc, spec).1)
    }

    /// One feature row in registry order.
    pub fn evaluate_document(&self, doc: &Document) -> Result<Vec<f64>, MetricsError> {
        check_document(doc)?;
        let analyzed = self.analyze(doc);
        Ok(self.specs.iter().map(|spec| self.evaluate_analyzed(&analyzed, spec).0).collect())
    }

    /// Tab-separated catalog: `id, group, description, scope` per metric,
    /// followed by `#`-prefixed lines comparing declared and actual group sizes.
    pub fn catalog_tsv(&self) -> String {
        let mut out = String::from("id\tgroup\tdescription\tscope\n");
        for s in &self.specs {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", s.id, s.group, s.description, s.scope));
        }
        out.push_str("# group_counts\tgroup\tdeclared\tactual\n");
        for g in Group::ALL {
            out.push_str(&format!("# group_counts\t{}\t{}\t{}\n", g, g.declared_size(), self.group_size(g)));
        }
        out
    }
}

fn check_document(doc: &Document) -> Result<(), MetricsError> {
    if doc.token_count() == 0 {
        return Err(MetricsError::InvalidDocument {
            doc_id: doc.doc_id.clone(),
            reason: "document contains no tokens".into(),
        });
    }
    for s in &doc.sentences {
        let diagnostics = validate(s);
        if let Some(d) = diagnostics.first() {
            return Err(MetricsError::InvalidDocument {
                doc_id: doc.doc_id.clone(),
                reason: format!("sentence `{}`: {d}", s.sent_id),
            });
        }
    }
    Ok(())
}

/// Documents × metrics matrix, rows in corpus order, columns in registry order.
///
/// Documents are evaluated in parallel on the current rayon pool; the
/// result does not depend on the number of threads.
pub fn compute_matrix(corpus: &[Document], registry: &MetricRegistry) -> Result<FeatureMatrix, MetricsError> {
    if corpus.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let rows = corpus.par_iter().map(|doc| registry.evaluate_document(doc)).collect::<Result<Vec<_>, _>>()?;
    Ok(FeatureMatrix {
        doc_ids: corpus.iter().map(|d| d.doc_id.clone()).collect(),
        metric_ids: registry.ids().into_iter().map(String::from).collect(),
        values: rows,
    })
}
