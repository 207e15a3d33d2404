//! Plain-text lexicons backing the morphological rules.
//!
//! Every file uses the same line format: `entry<TAB>key=value`, `#` starts a
//! comment. An entry is matched against a lowercased lemma (or form) in one
//! of four ways depending on its shape:
//!
//! | entry     | matches                                                  |
//! |-----------|----------------------------------------------------------|
//! | `лист`    | the whole word                                           |
//! | `за-`     | words starting with `за`                                 |
//! | `-вати`   | words ending with `вати`                                 |
//! | `+дати`   | `дати` itself or a verbal prefix followed by `дати`      |
//!
//! Verbal prefixes for `+` entries come from `prefixes.tsv`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon file `{}` could not be read: {source}", .path.display())]
    Missing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: expected `entry<TAB>key=value`")]
    Malformed { file: String, line: usize },
}

/// Lowercase and unify apostrophe variants (`’`, `ʼ`, `` ` ``) to `'`.
pub fn normalize(word: &str) -> String {
    word.chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            '\u{2019}' | '\u{02bc}' | '`' => '\'',
            c => c,
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    exact: HashMap<String, Vec<(String, String)>>,
    prefixes: Vec<(String, String, String)>,
    suffixes: Vec<(String, String, String)>,
    roots: Vec<(String, String, String)>,
}

impl Lexicon {
    pub fn parse(name: &str, text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = || LexiconError::Malformed { file: name.to_string(), line: i + 1 };
            let (entry, kv) = line.split_once('\t').ok_or_else(malformed)?;
            let (k, v) = kv.trim().split_once('=').ok_or_else(malformed)?;
            let entry = normalize(entry.trim());
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if entry.is_empty() || k.is_empty() {
                return Err(malformed());
            }
            if let Some(root) = entry.strip_prefix('+') {
                lex.roots.push((root.to_string(), k, v));
            } else if let Some(suffix) = entry.strip_prefix('-') {
                lex.suffixes.push((suffix.to_string(), k, v));
            } else if let Some(prefix) = entry.strip_suffix('-') {
                lex.prefixes.push((prefix.to_string(), k, v));
            } else {
                lex.exact.entry(entry).or_default().push((k, v));
            }
        }
        // Longest affix wins.
        lex.suffixes.sort_by_key(|e| std::cmp::Reverse(e.0.chars().count()));
        lex.prefixes.sort_by_key(|e| std::cmp::Reverse(e.0.chars().count()));
        lex.roots.sort_by_key(|e| std::cmp::Reverse(e.0.chars().count()));
        Ok(lex)
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.prefixes.is_empty() && self.suffixes.is_empty() && self.roots.is_empty()
    }

    /// Value of `key` for a whole-word entry.
    pub fn exact(&self, word: &str, key: &str) -> Option<&str> {
        self.exact.get(&normalize(word))?.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// All whole-word key/value pairs for `word`.
    pub fn entries(&self, word: &str) -> &[(String, String)] {
        self.exact.get(&normalize(word)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Value of `key` for the longest matching suffix entry.
    pub fn suffix(&self, word: &str, key: &str) -> Option<&str> {
        let w = normalize(word);
        self.suffixes
            .iter()
            .find(|(s, k, _)| k == key && w.ends_with(s.as_str()) && w.len() > s.len())
            .map(|(_, _, v)| v.as_str())
    }

    /// The longest matching prefix entry for `key`, with the remainder of the word.
    pub fn prefix(&self, word: &str, key: &str) -> Option<(&str, String)> {
        let w = normalize(word);
        self.prefixes
            .iter()
            .find(|(p, k, _)| k == key && w.starts_with(p.as_str()) && w.len() > p.len())
            .map(|(p, _, v)| (v.as_str(), w[p.len()..].to_string()))
    }

    /// Value of `key` for a `+root` entry, where `word` is the root itself or
    /// one of `prefixes` glued to it.
    pub fn root(&self, word: &str, key: &str, prefixes: &Lexicon) -> Option<&str> {
        let w = normalize(word);
        self.roots
            .iter()
            .filter(|(_, k, _)| k == key)
            .find(|(root, _, _)| match w.strip_suffix(root.as_str()) {
                Some("") => true,
                Some(head) => prefixes.is_prefix_chain(head),
                None => false,
            })
            .map(|(_, _, v)| v.as_str())
    }

    /// True when `s` is one verbal prefix or two stacked ones (`пере`+`за`).
    fn is_prefix_chain(&self, s: &str) -> bool {
        if self.exact.contains_key(s) {
            return true;
        }
        self.exact.keys().any(|p| s.strip_prefix(p.as_str()).is_some_and(|rest| self.exact.contains_key(rest)))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.exact.contains_key(&normalize(word))
    }
}

/// The set of lexicon files loaded once at startup.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub animacy: Lexicon,
    pub aspect: Lexicon,
    pub pos_override: Lexicon,
    pub declension: Lexicon,
    pub conjugation: Lexicon,
    pub prefixes: Lexicon,
    pub transitive: Lexicon,
    pub speech_verbs: Lexicon,
    pub amplifiers: Lexicon,
    pub diminutives: Lexicon,
}

macro_rules! lexicon_files {
    ($($field:ident => $file:literal),* $(,)?) => {
        /// File names expected in a data directory.
        pub const LEXICON_FILES: &[&str] = &[$($file),*];

        impl Lexicons {
            /// Lexicons compiled into the binary.
            pub fn bundled() -> Self {
                Lexicons {
                    $($field: Lexicon::parse($file, include_str!(concat!("../data/lexicon/", $file)))
                        .expect(concat!("bundled lexicon ", $file, " is malformed")),)*
                }
            }

            /// Load every lexicon from `dir`; a missing file is an error naming it.
            pub fn load(dir: &Path) -> Result<Self, LexiconError> {
                Ok(Lexicons {
                    $($field: {
                        let path = dir.join($file);
                        let text = fs::read_to_string(&path)
                            .map_err(|source| LexiconError::Missing { path, source })?;
                        Lexicon::parse($file, &text)?
                    },)*
                })
            }

            /// Write the bundled lexicons into `dir` as a starting point for edits.
            pub fn export_bundled(dir: &Path) -> std::io::Result<()> {
                fs::create_dir_all(dir)?;
                $(fs::write(dir.join($file), include_str!(concat!("../data/lexicon/", $file)))?;)*
                Ok(())
            }
        }
    };
}

lexicon_files! {
    animacy => "animacy.tsv",
    aspect => "aspect.tsv",
    pos_override => "pos_override.tsv",
    declension => "declension.tsv",
    conjugation => "conjugation.tsv",
    prefixes => "prefixes.tsv",
    transitive => "transitive.tsv",
    speech_verbs => "speech_verbs.tsv",
    amplifiers => "amplifiers.tsv",
    diminutives => "diminutives.tsv",
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::bundled()
    }
}
