//! CoNLL-U ingestion: a validated, immutable document model.
//!
//! Only syntactic words are kept. Multiword-token range lines (`3-4`) and
//! empty nodes (`5.1`) are skipped, so every retained token has an integer
//! index and an integer head. FEATS are stored exactly as they appear in the
//! input; corrections are layered on later by [`crate::morph`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

/// Universal POS tags (UD v2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown UPOS tag `{0}`")]
pub struct UnknownUpos(pub String);

impl FromStr for Upos {
    type Err = UnknownUpos;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Upos::ALL.iter().copied().find(|u| u.as_str() == s).ok_or_else(|| UnknownUpos(s.to_string()))
    }
}

/// One syntactic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based position within the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: Upos,
    /// Language-specific tag; carried through, never consulted by metrics.
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    /// Index of the governing token, 0 for the root.
    pub head: usize,
    pub deprel: String,
    pub misc: BTreeMap<String, String>,
}

impl Token {
    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }

    /// True when `key` carries `value`, honouring UD multi-values (`PronType=Int,Rel`).
    pub fn has_feat(&self, key: &str, value: &str) -> bool {
        self.feat(key).is_some_and(|v| v.split(',').any(|part| part == value))
    }

    /// Universal part of a subtyped relation: `nsubj:pass` -> `nsubj`.
    pub fn base_deprel(&self) -> &str {
        self.deprel.split(':').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub sent_id: String,
    pub text: Option<String>,
    /// Comment lines other than `sent_id`, `text` and `newdoc`, without the leading `#`.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token with the given 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// Positions (0-based) of the direct dependents of the token at `pos`.
    pub fn children(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        let index = pos + 1;
        self.tokens.iter().enumerate().filter(move |(_, t)| t.head == index).map(|(i, _)| i)
    }

    /// Position (0-based) of the head of the token at `pos`, `None` for the root.
    pub fn head_of(&self, pos: usize) -> Option<usize> {
        match self.tokens[pos].head {
            0 => None,
            h => Some(h - 1),
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn token_count(&self) -> usize {
        token_count(self)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }
}

/// Total number of syntactic words, punctuation included.
pub fn token_count(doc: &Document) -> usize {
    doc.sentences.iter().map(Sentence::len).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    NonContiguousIndex {
        expected: usize,
        found: usize,
    },
    HeadOutOfRange {
        index: usize,
        head: usize,
    },
    SelfLoop {
        index: usize,
    },
    /// Token indices forming one cycle, smallest first.
    Cycle {
        indices: Vec<usize>,
    },
    NoRoot,
    MultipleRoots {
        indices: Vec<usize>,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NonContiguousIndex { expected, found } => {
                write!(f, "expected token index {expected}, found {found}")
            }
            Diagnostic::HeadOutOfRange { index, head } => {
                write!(f, "token {index} has head {head} outside the sentence")
            }
            Diagnostic::SelfLoop { index } => write!(f, "token {index} is its own head"),
            Diagnostic::Cycle { indices } => {
                let path: Vec<String> = indices.iter().map(usize::to_string).collect();
                write!(f, "head cycle through tokens {}", path.join("->"))
            }
            Diagnostic::NoRoot => f.write_str("no token attached to root"),
            Diagnostic::MultipleRoots { indices } => {
                let ids: Vec<String> = indices.iter().map(usize::to_string).collect();
                write!(f, "multiple roots: {}", ids.join(", "))
            }
        }
    }
}

/// Structural checks: contiguous indices from 1, heads in range, a single
/// root and an acyclic head graph. Diagnostics are data, never errors.
pub fn validate(sentence: &Sentence) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = sentence.tokens.len();

    for (i, tok) in sentence.tokens.iter().enumerate() {
        if tok.index != i + 1 {
            out.push(Diagnostic::NonContiguousIndex { expected: i + 1, found: tok.index });
            // Head references are meaningless once positions disagree with indices.
            return out;
        }
    }

    let mut heads_ok = true;
    for tok in &sentence.tokens {
        if tok.head > n {
            out.push(Diagnostic::HeadOutOfRange { index: tok.index, head: tok.head });
            heads_ok = false;
        } else if tok.head == tok.index {
            out.push(Diagnostic::SelfLoop { index: tok.index });
            heads_ok = false;
        }
    }

    let roots: Vec<usize> = sentence.tokens.iter().filter(|t| t.head == 0).map(|t| t.index).collect();
    match roots.len() {
        0 if n > 0 => out.push(Diagnostic::NoRoot),
        0 | 1 => {}
        _ => out.push(Diagnostic::MultipleRoots { indices: roots }),
    }

    if heads_ok {
        out.extend(find_cycles(sentence));
    }
    out
}

fn find_cycles(sentence: &Sentence) -> Vec<Diagnostic> {
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;

    let n = sentence.tokens.len();
    let mut state = vec![UNSEEN; n + 1];
    let mut cycles = Vec::new();

    for start in 1..=n {
        if state[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while cur != 0 && state[cur] == UNSEEN {
            state[cur] = ON_PATH;
            path.push(cur);
            cur = sentence.tokens[cur - 1].head;
        }
        if cur != 0 && state[cur] == ON_PATH {
            let from = path.iter().position(|&p| p == cur).unwrap_or(0);
            let mut indices = path[from..].to_vec();
            indices.sort_unstable();
            cycles.push(Diagnostic::Cycle { indices });
        }
        for p in path {
            state[p] = DONE;
        }
    }
    cycles
}

#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: sentence `{sent_id}` is invalid: {}", join_diagnostics(.diagnostics))]
    Validation {
        /// First token line of the sentence.
        line: usize,
        sent_id: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("document `{doc_id}` contains no tokens")]
    EmptyDocument { doc_id: String },
    #[error("document id `{doc_id}` occurs more than once")]
    DuplicateDocId { doc_id: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parse a CoNLL-U string. Documents without a `# newdoc id` get `default_doc_id`.
pub fn parse_conllu_str(input: &str, default_doc_id: &str) -> Result<Vec<Document>, ConlluError> {
    parse_conllu(input.as_bytes(), default_doc_id)
}

/// Parse a CoNLL-U stream into validated documents.
///
/// One document is produced per `# newdoc id` block; text before the first
/// such marker (or the whole stream when there is none) belongs to a document
/// named `default_doc_id`. Empty input yields an empty list.
pub fn parse_conllu<R: BufRead>(reader: R, default_doc_id: &str) -> Result<Vec<Document>, ConlluError> {
    let mut parser = Parser::new(default_doc_id);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        parser.line(i + 1, &line)?;
    }
    parser.finish()
}

struct Parser {
    default_doc_id: String,
    docs: Vec<Document>,
    doc: Option<Document>,
    // Pending sentence state.
    sent_id: Option<String>,
    text: Option<String>,
    comments: Vec<String>,
    tokens: Vec<Token>,
    sent_line: usize,
    sent_counter: usize,
}

impl Parser {
    fn new(default_doc_id: &str) -> Self {
        Parser {
            default_doc_id: default_doc_id.to_string(),
            docs: Vec::new(),
            doc: None,
            sent_id: None,
            text: None,
            comments: Vec::new(),
            tokens: Vec::new(),
            sent_line: 0,
            sent_counter: 0,
        }
    }

    fn line(&mut self, lineno: usize, raw: &str) -> Result<(), ConlluError> {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = if lineno == 1 { line.strip_prefix('\u{feff}').unwrap_or(line) } else { line };

        if line.trim().is_empty() {
            return self.end_sentence();
        }
        if let Some(comment) = line.strip_prefix('#') {
            return self.comment(comment);
        }
        self.token_line(lineno, line)
    }

    fn comment(&mut self, comment: &str) -> Result<(), ConlluError> {
        let body = comment.trim();
        if let Some(rest) = body.strip_prefix("newdoc") {
            // A newdoc marker inside a sentence closes it first.
            self.end_sentence()?;
            self.finish_doc()?;
            let id = rest
                .trim()
                .strip_prefix("id")
                .and_then(|r| r.trim_start().strip_prefix('='))
                .map(|r| r.trim().to_string())
                .filter(|id| !id.is_empty())
                .unwrap_or_else(|| format!("{}-{}", self.default_doc_id, self.docs.len() + 1));
            self.doc = Some(Document { doc_id: id, sentences: Vec::new() });
            return Ok(());
        }
        if let Some(v) = key_value(body, "sent_id") {
            self.sent_id = Some(v.to_string());
        } else if let Some(v) = key_value(body, "text") {
            self.text = Some(v.to_string());
        } else {
            self.comments.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
        }
        Ok(())
    }

    fn token_line(&mut self, lineno: usize, line: &str) -> Result<(), ConlluError> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(parse_err(lineno, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            // Multiword range or empty node.
            return Ok(());
        }
        let index: usize = id.parse().map_err(|_| parse_err(lineno, format!("invalid token index `{id}`")))?;
        if index == 0 {
            return Err(parse_err(lineno, "token index must be at least 1".into()));
        }
        let upos: Upos = cols[3].parse().map_err(|e: UnknownUpos| parse_err(lineno, e.to_string()))?;
        let head: usize = cols[6].parse().map_err(|_| parse_err(lineno, format!("invalid head `{}`", cols[6])))?;
        let feats = parse_feats(cols[5]).map_err(|m| parse_err(lineno, m))?;

        if self.tokens.is_empty() {
            self.sent_line = lineno;
        }
        self.tokens.push(Token {
            index,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos,
            xpos: underscore_none(cols[4]),
            feats,
            head,
            deprel: cols[7].to_string(),
            misc: parse_misc(cols[9]),
        });
        Ok(())
    }

    fn end_sentence(&mut self) -> Result<(), ConlluError> {
        if self.tokens.is_empty() {
            // Comments with no tokens (e.g. a stray header) attach to the next sentence.
            return Ok(());
        }
        self.sent_counter += 1;
        let sentence = Sentence {
            sent_id: self.sent_id.take().unwrap_or_else(|| self.sent_counter.to_string()),
            text: self.text.take(),
            comments: std::mem::take(&mut self.comments),
            tokens: std::mem::take(&mut self.tokens),
        };
        let diagnostics = validate(&sentence);
        if !diagnostics.is_empty() {
            return Err(ConlluError::Validation { line: self.sent_line, sent_id: sentence.sent_id, diagnostics });
        }
        let default_id = &self.default_doc_id;
        self.doc
            .get_or_insert_with(|| Document { doc_id: default_id.clone(), sentences: Vec::new() })
            .sentences
            .push(sentence);
        Ok(())
    }

    fn finish_doc(&mut self) -> Result<(), ConlluError> {
        if let Some(doc) = self.doc.take() {
            if doc.token_count() == 0 {
                return Err(ConlluError::EmptyDocument { doc_id: doc.doc_id });
            }
            if self.docs.iter().any(|d| d.doc_id == doc.doc_id) {
                return Err(ConlluError::DuplicateDocId { doc_id: doc.doc_id });
            }
            self.docs.push(doc);
        }
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<Document>, ConlluError> {
        self.end_sentence()?;
        self.finish_doc()?;
        Ok(self.docs)
    }
}

fn parse_err(line: usize, message: String) -> ConlluError {
    ConlluError::Parse { line, message }
}

fn key_value<'a>(body: &'a str, key: &str) -> Option<&'a str> {
    let rest = body.strip_prefix(key)?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

fn underscore_none(s: &str) -> Option<String> {
    (s != "_").then(|| s.to_string())
}

fn parse_feats(col: &str) -> Result<BTreeMap<String, String>, String> {
    let mut feats = BTreeMap::new();
    if col == "_" {
        return Ok(feats);
    }
    for pair in col.split('|') {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("malformed feature `{pair}`"))?;
        feats.insert(k.to_string(), v.to_string());
    }
    Ok(feats)
}

fn parse_misc(col: &str) -> BTreeMap<String, String> {
    if col == "_" {
        return BTreeMap::new();
    }
    col.split('|')
        .map(|pair| match pair.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => (pair.to_string(), String::new()),
        })
        .collect()
}

fn join_map(map: &BTreeMap<String, String>, bare_keys: bool) -> String {
    if map.is_empty() {
        return "_".into();
    }
    map.iter()
        .map(|(k, v)| if bare_keys && v.is_empty() { k.clone() } else { format!("{k}={v}") })
        .collect::<Vec<_>>()
        .join("|")
}

/// Serialize documents back to CoNLL-U. Each document opens with `# newdoc id`.
pub fn write_conllu(docs: &[Document]) -> String {
    let mut out = String::new();
    for doc in docs {
        out.push_str(&format!("# newdoc id = {}\n", doc.doc_id));
        for s in &doc.sentences {
            for c in &s.comments {
                out.push_str(&format!("# {c}\n"));
            }
            out.push_str(&format!("# sent_id = {}\n", s.sent_id));
            if let Some(text) = &s.text {
                out.push_str(&format!("# text = {text}\n"));
            }
            for t in &s.tokens {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t{}\n",
                    t.index,
                    t.form,
                    t.lemma,
                    t.upos,
                    t.xpos.as_deref().unwrap_or("_"),
                    join_map(&t.feats, false),
                    t.head,
                    t.deprel,
                    join_map(&t.misc, true),
                ));
            }
            out.push('\n');
        }
    }
    out
}

/// Doc ids present in `docs` more than once.
pub fn duplicate_doc_ids<'a>(docs: impl IntoIterator<Item = &'a Document>) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for d in docs {
        if !seen.insert(d.doc_id.as_str()) && !dups.contains(&d.doc_id) {
            dups.push(d.doc_id.clone());
        }
    }
    dups
}
