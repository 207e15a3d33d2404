//! Ukrainian morphology the UD feature set does not carry: noun declension,
//! verb conjugation, the six tense/aspect profiles, transitivity, plus
//! lexicon- and affix-driven repairs of known tagger mistakes.
//!
//! Everything here is a pure function of an immutable [`Sentence`] and the
//! read-only [`Lexicons`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::conllu::{Sentence, Token, Upos};
use crate::lexicon::{normalize, Lexicons};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InflectionClass {
    I,
    II,
    III,
    IV,
}

impl InflectionClass {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "I" => Some(Self::I),
            "II" => Some(Self::II),
            "III" => Some(Self::III),
            "IV" => Some(Self::IV),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
        }
    }
}

impl fmt::Display for InflectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TenseProfile {
    PresentImperfect,
    PastImperfect,
    PastPerfect,
    FuturePerfectSimple,
    FutureImperfectSimple,
    /// Auxiliary `бути` in the future plus an imperfective infinitive.
    FutureComplex,
}

impl TenseProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PresentImperfect => "present_imperfect",
            Self::PastImperfect => "past_imperfect",
            Self::PastPerfect => "past_perfect",
            Self::FuturePerfectSimple => "future_perfect_simple",
            Self::FutureImperfectSimple => "future_imperfect_simple",
            Self::FutureComplex => "future_complex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transitivity {
    Transitive,
    Intransitive,
}

/// Overrides for one token. Only keys the rules change are present.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatOverrides {
    pub upos: Option<Upos>,
    pub feats: BTreeMap<String, String>,
}

impl FeatOverrides {
    pub fn is_empty(&self) -> bool {
        self.upos.is_none() && self.feats.is_empty()
    }

    pub fn apply(&self, token: &Token) -> Token {
        let mut t = token.clone();
        if let Some(u) = self.upos {
            t.upos = u;
        }
        for (k, v) in &self.feats {
            t.feats.insert(k.clone(), v.clone());
        }
        t
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivedMorph {
    pub conj_class: Option<InflectionClass>,
    pub decl_class: Option<InflectionClass>,
    pub tense_profile: Option<TenseProfile>,
    pub transitivity: Option<Transitivity>,
    pub corrected: FeatOverrides,
}

/// A sentence with corrections applied and derived morphology per token.
#[derive(Debug, Clone)]
pub struct AnalyzedSentence {
    /// Tokens after [`FeatOverrides`] have been applied.
    pub sentence: Sentence,
    pub morph: Vec<DerivedMorph>,
}

const VOWELS: &str = "аеєиіїоуюя";

fn is_vowel(c: char) -> bool {
    VOWELS.contains(c)
}

fn is_consonant(c: char) -> bool {
    matches!(c, 'а'..='я' | 'є' | 'і' | 'ї' | 'ґ') && !is_vowel(c) && c != 'ь'
}

/// Strip the reflexive `-ся`/`-сь` from a verb lemma.
fn strip_reflexive(lemma: &str) -> Option<&str> {
    lemma
        .strip_suffix("ся")
        .or_else(|| lemma.strip_suffix("сь"))
        .filter(|s| s.ends_with("ти") || s.ends_with("ть") || s.ends_with("чи"))
}

fn is_reflexive(lemma: &str) -> bool {
    strip_reflexive(&normalize(lemma)).is_some()
}

const SYNTHETIC_FUTURE: [&str; 6] = ["тиму", "тимеш", "тиме", "тимемо", "тимете", "тимуть"];

fn is_synthetic_future(form: &str) -> bool {
    let f = normalize(form);
    let f = f.strip_suffix("ся").or_else(|| f.strip_suffix("сь")).unwrap_or(&f);
    SYNTHETIC_FUTURE.iter().any(|e| f.ends_with(e))
}

#[derive(Debug, Clone)]
pub struct Morphology {
    lex: Arc<Lexicons>,
}

impl Morphology {
    pub fn new(lex: Arc<Lexicons>) -> Self {
        Morphology { lex }
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lex
    }

    /// Declension class of a noun from its lemma and grammatical gender.
    ///
    /// I: feminine/masculine in -а/-я. II: masculine consonant-final and -о,
    /// neuter -о/-е and neuter -я after a doubled consonant or apostrophe
    /// (`завдання`, `подвір'я`). III: feminine consonant-final. IV: the
    /// remaining neuter -а/-я nouns (`курча`, `теля`). Indeclinables give `None`.
    pub fn classify_declension(&self, token: &Token) -> Option<InflectionClass> {
        if token.upos != Upos::Noun || token.lemma.is_empty() {
            return None;
        }
        if let Some(v) = self.lex.declension.exact(&token.lemma, "Decl") {
            return InflectionClass::parse(v);
        }
        if token.has_feat("Abbr", "Yes") || token.has_feat("Uninflect", "Yes") || token.has_feat("Foreign", "Yes") {
            return None;
        }
        let letters: Vec<char> = token.lemma.chars().filter(|c| c.is_alphabetic()).collect();
        if letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
            return None;
        }

        let lemma: Vec<char> = normalize(&token.lemma).chars().collect();
        let last = *lemma.last()?;
        let gender = token.feat("Gender");
        match last {
            'а' | 'я' => {
                if gender == Some("Neut") {
                    let n = lemma.len();
                    let doubled = n >= 3 && lemma[n - 2] == lemma[n - 3] && is_consonant(lemma[n - 2]);
                    let apostrophe = n >= 2 && lemma[n - 2] == '\'';
                    if doubled || apostrophe {
                        Some(InflectionClass::II)
                    } else {
                        Some(InflectionClass::IV)
                    }
                } else {
                    Some(InflectionClass::I)
                }
            }
            'о' | 'е' | 'є' => Some(InflectionClass::II),
            c if is_consonant(c) || c == 'ь' => match gender {
                Some("Masc") => Some(InflectionClass::II),
                Some("Fem") => Some(InflectionClass::III),
                _ => None,
            },
            _ => None,
        }
    }

    /// Conjugation class of a verb from its infinitive lemma.
    pub fn classify_conjugation(&self, token: &Token) -> Option<InflectionClass> {
        if token.upos != Upos::Verb || token.lemma.is_empty() {
            return None;
        }
        let lemma = normalize(&token.lemma);
        let bare = strip_reflexive(&lemma).unwrap_or(&lemma).to_string();
        let lex = &self.lex.conjugation;
        for candidate in [lemma.as_str(), bare.as_str()] {
            let hit = lex.exact(candidate, "Conj").or_else(|| lex.root(candidate, "Conj", &self.lex.prefixes));
            if let Some(v) = hit {
                return InflectionClass::parse(v);
            }
        }
        let stem = bare
            .strip_suffix("ти")
            .or_else(|| bare.strip_suffix("ть"))
            .or_else(|| bare.strip_suffix("чи").map(|_| ""))?;
        if stem.is_empty() {
            // -чи infinitives (пекчи) and bare roots: thematic, first conjugation.
            return Some(InflectionClass::I);
        }
        match stem.chars().last()? {
            // -ити, -іти, -їти take -ать/-ять in the 3rd person plural.
            'и' | 'і' | 'ї' => Some(InflectionClass::II),
            _ => Some(InflectionClass::I),
        }
    }

    /// Tense/aspect profile of the verb or auxiliary at `pos` (0-based).
    ///
    /// Auxiliaries only ever receive `FutureComplex`; other profiles are
    /// reserved for finite indicative lexical verbs.
    pub fn detect_tense(&self, sentence: &Sentence, pos: usize) -> Option<TenseProfile> {
        let tok = sentence.tokens.get(pos)?;
        if !matches!(tok.upos, Upos::Verb | Upos::Aux) {
            return None;
        }
        if in_complex_future(sentence, pos) {
            return Some(TenseProfile::FutureComplex);
        }
        if tok.upos != Upos::Verb {
            return None;
        }
        if matches!(tok.feat("VerbForm"), Some(vf) if vf != "Fin") {
            return None;
        }
        if matches!(tok.feat("Mood"), Some(m) if m != "Ind") {
            return None;
        }
        let imperfective = tok.has_feat("Aspect", "Imp");
        let perfective = tok.has_feat("Aspect", "Perf");
        match tok.feat("Tense") {
            Some("Fut") if imperfective => Some(TenseProfile::FutureImperfectSimple),
            Some("Fut") if perfective => Some(TenseProfile::FuturePerfectSimple),
            Some("Pres") if imperfective && is_synthetic_future(&tok.form) => Some(TenseProfile::FutureImperfectSimple),
            Some("Pres") if imperfective => Some(TenseProfile::PresentImperfect),
            // A perfective non-past form is a simple future.
            Some("Pres") if perfective => Some(TenseProfile::FuturePerfectSimple),
            Some("Past") if imperfective => Some(TenseProfile::PastImperfect),
            Some("Past") if perfective => Some(TenseProfile::PastPerfect),
            None if imperfective && is_synthetic_future(&tok.form) => Some(TenseProfile::FutureImperfectSimple),
            _ => None,
        }
    }

    /// Transitivity of the verb at `pos`; `None` for non-verbs.
    pub fn detect_transitivity(&self, sentence: &Sentence, pos: usize) -> Option<Transitivity> {
        let tok = sentence.tokens.get(pos)?;
        if tok.upos != Upos::Verb {
            return None;
        }
        if is_reflexive(&tok.lemma) {
            return Some(Transitivity::Intransitive);
        }
        let has_object = sentence.children(pos).any(|c| sentence.tokens[c].base_deprel() == "obj");
        if has_object || self.lex.transitive.exact(&tok.lemma, "Transitive") == Some("Yes") {
            Some(Transitivity::Transitive)
        } else {
            Some(Transitivity::Intransitive)
        }
    }

    /// Repairs for the tagger mistakes that can be decided from the
    /// annotation alone:
    ///
    /// * part of speech (and implied features) of forms listed in `pos_override.tsv`;
    /// * animacy of nouns listed in `animacy.tsv`;
    /// * `Aspect=Imp` on verbs with a perfectivising prefix and no
    ///   secondary-imperfective suffix;
    /// * `Case=Acc` on a nominal subject becomes `Case=Nom`.
    ///
    /// Values already equal to the repaired ones are not reported, so the
    /// result on a corrected token is empty.
    pub fn correct_feats(&self, sentence: &Sentence, pos: usize) -> FeatOverrides {
        let mut out = FeatOverrides::default();
        let Some(tok) = sentence.tokens.get(pos) else {
            return out;
        };
        let lex = &self.lex;

        let mut pos_entries = lex.pos_override.entries(&tok.form);
        if pos_entries.is_empty() {
            pos_entries = lex.pos_override.entries(&tok.lemma);
        }
        for (k, v) in pos_entries {
            if k == "UPOS" {
                if let Ok(u) = v.parse::<Upos>() {
                    if u != tok.upos {
                        out.upos = Some(u);
                    }
                }
            } else if tok.feat(k) != Some(v.as_str()) {
                out.feats.insert(k.clone(), v.clone());
            }
        }
        let upos = out.upos.unwrap_or(tok.upos);

        if upos == Upos::Noun {
            if let Some(v) = lex.animacy.exact(&tok.lemma, "Animacy") {
                if tok.feat("Animacy") != Some(v) {
                    out.feats.insert("Animacy".into(), v.into());
                }
            }
        }

        if upos == Upos::Verb && tok.feat("Aspect") == Some("Imp") && self.prefixed_perfective(&tok.lemma) {
            out.feats.insert("Aspect".into(), "Perf".into());
        }

        if matches!(upos, Upos::Noun | Upos::Propn | Upos::Pron)
            && tok.base_deprel() == "nsubj"
            && tok.feat("Case") == Some("Acc")
        {
            out.feats.insert("Case".into(), "Nom".into());
        }
        out
    }

    fn prefixed_perfective(&self, lemma: &str) -> bool {
        let aspect = &self.lex.aspect;
        let lemma = normalize(lemma);
        let bare = strip_reflexive(&lemma).unwrap_or(&lemma).to_string();
        for w in [&lemma, &bare] {
            if let Some(v) = aspect.exact(w, "Aspect") {
                return v == "Perf";
            }
        }
        if aspect.suffix(&lemma, "Aspect") == Some("Imp") || aspect.suffix(&bare, "Aspect") == Some("Imp") {
            return false;
        }
        match aspect.prefix(&bare, "Aspect") {
            // Require a real stem after the prefix: `по` + `ти` is not a prefixed verb.
            Some(("Perf", rest)) => rest.chars().count() >= 4 && rest.chars().any(is_vowel),
            _ => false,
        }
    }

    pub fn analyze_sentence(&self, sentence: &Sentence) -> AnalyzedSentence {
        let overrides: Vec<FeatOverrides> = (0..sentence.len()).map(|i| self.correct_feats(sentence, i)).collect();
        let corrected = Sentence {
            tokens: sentence.tokens.iter().zip(&overrides).map(|(t, o)| o.apply(t)).collect(),
            ..sentence.clone()
        };
        let morph = overrides
            .into_iter()
            .enumerate()
            .map(|(i, corrected_feats)| {
                let tok = &corrected.tokens[i];
                DerivedMorph {
                    conj_class: self.classify_conjugation(tok),
                    decl_class: self.classify_declension(tok),
                    tense_profile: self.detect_tense(&corrected, i),
                    transitivity: self.detect_transitivity(&corrected, i),
                    corrected: corrected_feats,
                }
            })
            .collect();
        AnalyzedSentence { sentence: corrected, morph }
    }
}

fn is_future_aux(t: &Token) -> bool {
    t.upos == Upos::Aux && normalize(&t.lemma) == "бути" && t.has_feat("Tense", "Fut")
}

fn is_imperfective_infinitive(t: &Token) -> bool {
    t.upos == Upos::Verb && t.has_feat("VerbForm", "Inf") && t.has_feat("Aspect", "Imp")
}

fn in_complex_future(sentence: &Sentence, pos: usize) -> bool {
    let tok = &sentence.tokens[pos];
    let linked = |pred: fn(&Token) -> bool| {
        sentence.head_of(pos).is_some_and(|h| pred(&sentence.tokens[h]))
            || sentence.children(pos).any(|c| pred(&sentence.tokens[c]))
    };
    (is_future_aux(tok) && linked(is_imperfective_infinitive))
        || (is_imperfective_infinitive(tok) && linked(is_future_aux))
}
