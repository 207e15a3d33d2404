//! Predicates wired to each metric ID.

use crate::conllu::{Sentence, Token, Upos};
use crate::lexicon::normalize;
use crate::morph::{InflectionClass, TenseProfile, Transitivity};

use super::{SentenceCtx, TokenCtx};

type TokenPred = fn(&TokenCtx) -> bool;
type SentencePred = fn(&SentenceCtx) -> bool;

#[derive(Clone, Copy)]
pub enum Rule {
    /// Count tokens for which the predicate holds.
    Token(TokenPred),
    /// Count every token of sentences for which the predicate holds.
    Sentence(SentencePred),
    /// Count distinct `key`s among tokens passing `filter`.
    DistinctTypes { filter: fn(&Token) -> bool, key: fn(&Token) -> String },
}

impl std::fmt::Debug for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::Token(_) => "Rule::Token",
            Rule::Sentence(_) => "Rule::Sentence",
            Rule::DistinctTypes { .. } => "Rule::DistinctTypes",
        })
    }
}

// ---- shared predicates -------------------------------------------------

fn is_foreign(t: &Token) -> bool {
    t.has_feat("Foreign", "Yes")
}

fn upos_is(t: &Token, u: Upos) -> bool {
    t.upos == u && !is_foreign(t)
}

pub(crate) fn is_content(t: &Token) -> bool {
    matches!(t.upos, Upos::Noun | Upos::Verb | Upos::Adj | Upos::Adv)
}

pub(crate) fn is_function(t: &Token) -> bool {
    !is_content(t) && t.upos != Upos::Punct
}

fn lemma_key(t: &Token) -> String {
    normalize(&t.lemma)
}

fn noun_with(t: &Token, key: &str, val: &str) -> bool {
    t.upos == Upos::Noun && t.has_feat(key, val)
}

fn adj_with(t: &Token, key: &str, val: &str) -> bool {
    t.upos == Upos::Adj && t.has_feat(key, val)
}

fn adv_with(t: &Token, key: &str, val: &str) -> bool {
    t.upos == Upos::Adv && t.has_feat(key, val)
}

fn pronominal(t: &Token) -> bool {
    matches!(t.upos, Upos::Pron | Upos::Det)
}

fn pron_type(t: &Token, val: &str) -> bool {
    pronominal(t) && t.has_feat("PronType", val)
}

fn personal_name(t: &Token) -> bool {
    t.upos == Upos::Propn && ["Giv", "Sur", "Pat"].iter().any(|n| t.has_feat("NameType", n))
}

fn punct_form(t: &Token, forms: &[&str]) -> bool {
    t.upos == Upos::Punct && forms.contains(&t.form.as_str())
}

fn verb(t: &Token) -> bool {
    t.upos == Upos::Verb
}

fn verb_aspect(t: &Token, aspect: &str) -> bool {
    verb(t) && t.has_feat("Aspect", aspect)
}

/// Root of the sentence or a conjunct chained to it.
fn in_root_chain(s: &Sentence, mut pos: usize) -> bool {
    loop {
        let t = &s.tokens[pos];
        match t.base_deprel() {
            "root" => return true,
            "conj" => match s.head_of(pos) {
                Some(h) => pos = h,
                None => return false,
            },
            _ => return false,
        }
    }
}

fn has_child_deprel(s: &Sentence, pos: usize, rels: &[&str]) -> bool {
    s.children(pos).any(|c| rels.contains(&s.tokens[c].deprel.as_str()))
}

fn has_child_base(s: &Sentence, pos: usize, rels: &[&str]) -> bool {
    s.children(pos).any(|c| rels.contains(&s.tokens[c].base_deprel()))
}

/// Finite verb form: explicit `VerbForm=Fin`, or tense/mood marked without a
/// non-finite `VerbForm`.
fn is_finite(t: &Token) -> bool {
    if !matches!(t.upos, Upos::Verb | Upos::Aux) {
        return false;
    }
    match t.feat("VerbForm") {
        Some("Fin") => true,
        Some(_) => false,
        None => t.feat("Tense").is_some() || t.feat("Mood").is_some(),
    }
}

const QUOTES: &[&str] = &["\"", "«", "»", "„", "“", "”", "'", "‘", "’"];
const DASHES: &[&str] = &["-", "–", "—", "―"];

fn is_quote(t: &Token) -> bool {
    t.upos == Upos::Punct && QUOTES.contains(&t.form.as_str())
}

/// Positions of tokens lying strictly between the first and last quote mark.
fn quoted_span(s: &Sentence) -> Option<(usize, usize)> {
    let first = s.tokens.iter().position(is_quote)?;
    let last = s.tokens.iter().rposition(is_quote)?;
    (last > first).then_some((first, last))
}

/// Last punctuation token that is not a closing quote or bracket.
fn terminal_punct(s: &Sentence) -> Option<&str> {
    s.tokens
        .iter()
        .rev()
        .take_while(|t| t.upos == Upos::Punct)
        .find(|t| !is_quote(t) && !matches!(t.form.as_str(), ")" | "]"))
        .map(|t| t.form.as_str())
}

fn part_lemma(t: &Token, lemmas: &[&str]) -> bool {
    t.upos == Upos::Part && lemmas.contains(&normalize(&t.lemma).as_str())
}

const NP_MODIFIERS: &[&str] = &["amod", "det", "nummod", "nmod", "appos", "flat", "compound", "acl"];

// ---- token rules -------------------------------------------------------

macro_rules! tok {
    (|$c:ident| $body:expr) => {
        Rule::Token({
            fn pred($c: &TokenCtx) -> bool {
                $body
            }
            pred
        })
    };
}

macro_rules! sent {
    (|$c:ident| $body:expr) => {
        Rule::Sentence({
            fn pred($c: &SentenceCtx) -> bool {
                $body
            }
            pred
        })
    };
}

fn tense(c: &TokenCtx, p: TenseProfile) -> bool {
    c.morph.tense_profile == Some(p)
}

fn conj(c: &TokenCtx, k: InflectionClass) -> bool {
    c.morph.conj_class == Some(k)
}

fn decl(c: &TokenCtx, k: InflectionClass) -> bool {
    c.morph.decl_class == Some(k)
}

pub(super) fn rule_for(id: &str) -> Option<Rule> {
    use InflectionClass as IC;
    use TenseProfile as TP;
    let r = match id {
        // lexical
        "L_TYPE_TOKEN_RATIO_LEMMAS" => Rule::DistinctTypes { filter: |_| true, key: lemma_key },
        "L_CONT_A" => tok!(|c| is_content(c.token)),
        "L_FUNC_A" => tok!(|c| is_function(c.token)),
        "L_CONT_T" => Rule::DistinctTypes { filter: is_content, key: lemma_key },
        "L_FUNC_T" => Rule::DistinctTypes { filter: is_function, key: lemma_key },
        "L_PLURAL_NOUNS" => tok!(|c| noun_with(c.token, "Number", "Plur")),
        "L_SINGULAR_NOUNS" => tok!(|c| noun_with(c.token, "Number", "Sing")),
        "L_PROPER_NAME" => tok!(|c| c.token.upos == Upos::Propn),
        "L_PERSONAL_NAME" => tok!(|c| personal_name(c.token)),
        "L_GIVEN_NAMES" => tok!(|c| c.token.upos == Upos::Propn && c.token.has_feat("NameType", "Giv")),
        "L_SURNAMES" => tok!(|c| c.token.upos == Upos::Propn && c.token.has_feat("NameType", "Sur")),
        "L_FEMININE_NAMES" => tok!(|c| personal_name(c.token) && c.token.has_feat("Gender", "Fem")),
        "L_MASCULINE_NAMES" => tok!(|c| personal_name(c.token) && c.token.has_feat("Gender", "Masc")),
        "L_NOM_CASE" => tok!(|c| noun_with(c.token, "Case", "Nom")),
        "L_GEN_CASE" => tok!(|c| noun_with(c.token, "Case", "Gen")),
        "L_DAT_CASE" => tok!(|c| noun_with(c.token, "Case", "Dat")),
        "L_ACC_CASE" => tok!(|c| noun_with(c.token, "Case", "Acc")),
        "L_INS_CASE" => tok!(|c| noun_with(c.token, "Case", "Ins")),
        "L_LOC_CASE" => tok!(|c| noun_with(c.token, "Case", "Loc")),
        "L_VOC_CASE" => tok!(|c| noun_with(c.token, "Case", "Voc")),
        "L_DIRECT_ADJ" => tok!(|c| ["Nom", "Voc"].iter().any(|v| adj_with(c.token, "Case", v))),
        "L_INDIRECT_ADJ" => tok!(|c| ["Gen", "Dat", "Acc", "Ins", "Loc"].iter().any(|v| adj_with(c.token, "Case", v))),
        "L_QUALITATIVE_ADJ_SUP" => tok!(|c| adj_with(c.token, "Degree", "Sup")),
        "L_QUALITATIVE_ADJ_CMP" => tok!(|c| adj_with(c.token, "Degree", "Cmp")),
        "L_QULITATIVE_ADJ_P" => tok!(|c| adj_with(c.token, "Degree", "Pos")),
        "L_RELATIVE_ADJ" => tok!(|c| {
            let t = c.token;
            t.upos == Upos::Adj && ["Degree", "Poss", "NumType", "VerbForm"].iter().all(|k| t.feat(k).is_none())
        }),
        "L_ANIM_NOUN" => tok!(|c| noun_with(c.token, "Animacy", "Anim")),
        "L_INANIM_NOUN" => tok!(|c| noun_with(c.token, "Animacy", "Inan")),
        "L_ADV_CMP" => tok!(|c| adv_with(c.token, "Degree", "Cmp")),
        "L_ADV_POS" => tok!(|c| adv_with(c.token, "Degree", "Pos")),
        "L_ADV_SUP" => tok!(|c| adv_with(c.token, "Degree", "Sup")),
        "L_DIMINUTIVES" => tok!(|c| {
            let t = c.token;
            let lex = &c.lex.diminutives;
            t.upos == Upos::Noun
                && match lex.exact(&t.lemma, "Diminutive") {
                    Some(v) => v == "Yes",
                    None => lex.suffix(&t.lemma, "Diminutive") == Some("Yes"),
                }
        }),
        "L_FLAT_MULTIWORD" => tok!(|c| c.token.base_deprel() == "flat" || has_child_base(c.sentence, c.pos, &["flat"])),
        "L_NOUN_MASCULINE" => tok!(|c| noun_with(c.token, "Gender", "Masc")),
        "L_NOUN_FAMININE" => tok!(|c| noun_with(c.token, "Gender", "Fem")),
        "L_NOUN_NEUTRAL" => tok!(|c| noun_with(c.token, "Gender", "Neut")),
        "L_NUM_CARD" => tok!(|c| c.token.upos == Upos::Num && !c.token.has_feat("NumType", "Ord")),
        "L_NUM_ORD" => tok!(|c| c.token.has_feat("NumType", "Ord")),
        "L_PRON_DEM" => tok!(|c| pron_type(c.token, "Dem")),
        "L_PRON_INT" => tok!(|c| pron_type(c.token, "Int")),
        "L_PRON_NEG" => tok!(|c| pron_type(c.token, "Neg")),
        "L_PRON_POS" => tok!(|c| pronominal(c.token) && c.token.has_feat("Poss", "Yes")),
        "L_PRON_PRS" => tok!(|c| pron_type(c.token, "Prs")),
        "L_PRON_REL" => tok!(|c| pron_type(c.token, "Rel")),
        "L_PRON_RELATIVE" => tok!(|c| pron_type(c.token, "Rel") && normalize(&c.token.lemma) == "що"),
        "L_PRON_RFL" => tok!(|c| pronominal(c.token) && c.token.has_feat("Reflex", "Yes")),
        "L_PRON_TOT" => tok!(|c| pron_type(c.token, "Tot")),
        "L_PUNCT" => tok!(|c| c.token.upos == Upos::Punct),
        "L_PUNCT_DOT" => tok!(|c| punct_form(c.token, &[".", "…", "..."])),
        "L_PUNCT_COM" => tok!(|c| punct_form(c.token, &[","])),
        "L_PUNCT_SEMC" => tok!(|c| punct_form(c.token, &[";"])),
        "L_PUNCT_COL" => tok!(|c| punct_form(c.token, &[":"])),
        "L_PUNCT_DASH" => tok!(|c| punct_form(c.token, DASHES)),
        "L_DIRECT_OBJ" => tok!(|c| c.token.base_deprel() == "obj"),
        "L_INDIRECT_OBJ" => tok!(|c| c.token.base_deprel() == "iobj"),

        // grammar
        "VF_ROOT_VERB_IMPERFECT" => tok!(|c| verb_aspect(c.token, "Imp") && in_root_chain(c.sentence, c.pos)),
        "VF_ALL_VERB_IMPERFECT" => tok!(|c| verb_aspect(c.token, "Imp")),
        "VF_ROOT_VERB_PERFECT" => tok!(|c| verb_aspect(c.token, "Perf") && in_root_chain(c.sentence, c.pos)),
        "VF_ALL_VERB_PERFECT" => tok!(|c| verb_aspect(c.token, "Perf")),
        "VF_PRESENT_IND_IMPERFECT" => tok!(|c| tense(c, TP::PresentImperfect)),
        "VF_PAST_IND_IMPERFECT" => tok!(|c| tense(c, TP::PastImperfect)),
        "VF_PAST_IND_PERFECT" => tok!(|c| tense(c, TP::PastPerfect)),
        "VF_FUT_IND_PERFECT" => tok!(|c| tense(c, TP::FuturePerfectSimple)),
        "VF_FUT_IND_IMPERFECT_SIMPLE" => tok!(|c| tense(c, TP::FutureImperfectSimple)),
        "VF_FUT_IND_COMPLEX" => tok!(|c| tense(c, TP::FutureComplex)),
        "VT_FIRST_CONJ" => tok!(|c| conj(c, IC::I)),
        "VT_SECOND_CONJ" => tok!(|c| conj(c, IC::II)),
        "VT_THIRD_CONJ" => tok!(|c| conj(c, IC::III)),
        "VT_FOURTH_CONJ" => tok!(|c| conj(c, IC::IV)),
        "VF_TRANSITIVE" => tok!(|c| c.morph.transitivity == Some(Transitivity::Transitive)),
        "VF_INTRANSITIVE" => tok!(|c| c.morph.transitivity == Some(Transitivity::Intransitive)),
        "VF_PASSIVE" => tok!(|c| verb(c.token)
            && (c.token.has_feat("Voice", "Pass") || has_child_deprel(c.sentence, c.pos, &["aux:pass", "nsubj:pass"]))),
        "VF_PARTICIPLE_PASSIVE" => tok!(|c| c.token.has_feat("VerbForm", "Part") && c.token.has_feat("Voice", "Pass")),
        "VF_PARTICIPLE_ACTIVE" => tok!(|c| c.token.has_feat("VerbForm", "Part") && c.token.has_feat("Voice", "Act")),
        "VF_INFINITIVE" => tok!(|c| verb(c.token) && c.token.has_feat("VerbForm", "Inf")),
        "VF_IMPERSONAL_VERBS" => tok!(|c| {
            let t = c.token;
            verb(t)
                && is_finite(t)
                && !has_child_base(c.sentence, c.pos, &["nsubj", "csubj"])
                && (t.has_feat("Person", "0")
                    || (t.has_feat("Tense", "Past") && t.has_feat("Gender", "Neut") && t.has_feat("Number", "Sing")))
        }),
        "VF_ADV_PRF_PART" => tok!(|c| c.token.has_feat("VerbForm", "Conv") && c.token.has_feat("Aspect", "Perf")),
        "VF_ADV_IMPRF_PART" => tok!(|c| c.token.has_feat("VerbForm", "Conv") && c.token.has_feat("Aspect", "Imp")),
        "VF_FIRST_CONJ" => tok!(|c| decl(c, IC::I)),
        "VF_SECOND_CONJ" => tok!(|c| decl(c, IC::II)),

        // syntax
        "SY_PARATAXIS" => sent!(|c| c.sentence.tokens.iter().any(|t| t.base_deprel() == "parataxis")),
        "SY_DIRECT_SPEECH" => sent!(|c| direct_speech(c)),
        "SY_NEGATIVE" => {
            sent!(|c| c.sentence.tokens.iter().any(|t| part_lemma(t, &["не", "ні"]) || t.has_feat("Polarity", "Neg")))
        }
        "SY_NON_FINITE" => sent!(|c| !c.sentence.tokens.iter().any(is_finite)),
        "SY_QUOTATIONS" => sent!(|c| quoted_span(c.sentence).is_some()),
        "SY_EXCLAMATION" => sent!(|c| terminal_punct(c.sentence).is_some_and(|p| p.contains('!'))),
        "SY_QUESTION" => sent!(|c| terminal_punct(c.sentence).is_some_and(|p| p.contains('?'))),
        "SY_ELLIPSES" => sent!(|c| elliptic(c.sentence)),
        "SY_POSITIONING" => tok!(|c| c.token.base_deprel() == "appos"),
        "SY_CONDITIONAL" => {
            sent!(|c| c.sentence.tokens.iter().any(|t| part_lemma(t, &["би", "б"]) || t.has_feat("Mood", "Cnd")))
        }
        "SY_IMPERATIVE" => sent!(|c| c.sentence.tokens.iter().any(|t| t.has_feat("Mood", "Imp"))),
        "SY_AMPLIFIED_SENT" => {
            sent!(|c| c.sentence.tokens.iter().any(|t| t.upos == Upos::Part && c.lex.amplifiers.contains(&t.lemma)))
        }
        "SY_NOUN_PHRASES" => {
            tok!(|c| matches!(c.token.upos, Upos::Noun | Upos::Propn) && has_child_base(c.sentence, c.pos, NP_MODIFIERS))
        }

        // parts of speech
        "POS_VERB" => tok!(|c| upos_is(c.token, Upos::Verb)),
        "POS_NOUN" => tok!(|c| upos_is(c.token, Upos::Noun)),
        "POS_ADJ" => tok!(|c| upos_is(c.token, Upos::Adj)),
        "POS_ADV" => tok!(|c| upos_is(c.token, Upos::Adv)),
        "POS_DET" => tok!(|c| upos_is(c.token, Upos::Det)),
        "POS_INTJ" => tok!(|c| upos_is(c.token, Upos::Intj)),
        "POS_CONJ" => tok!(|c| upos_is(c.token, Upos::Cconj) || upos_is(c.token, Upos::Sconj)),
        "POS_PART" => tok!(|c| upos_is(c.token, Upos::Part)),
        "POS_NUM" => tok!(|c| upos_is(c.token, Upos::Num)),
        "POS_PREP" => tok!(|c| upos_is(c.token, Upos::Adp)),
        "POS_PRO" => tok!(|c| upos_is(c.token, Upos::Pron)),
        "POS_OTHER" => {
            tok!(|c| c.token.upos != Upos::Punct && (matches!(c.token.upos, Upos::X | Upos::Sym) || is_foreign(c.token)))
        }
        _ => return None,
    };
    Some(r)
}

/// Quotation whose content is governed by (or governs) a speech verb
/// outside it.
fn direct_speech(c: &SentenceCtx) -> bool {
    let Some((open, close)) = quoted_span(c.sentence) else {
        return false;
    };
    let s = c.sentence;
    let inside = |p: usize| p > open && p < close;
    s.tokens.iter().enumerate().any(|(pos, t)| {
        !inside(pos)
            && t.upos == Upos::Verb
            && c.lex.speech_verbs.contains(&t.lemma)
            && (s.children(pos).any(inside) || s.head_of(pos).is_some_and(inside))
    })
}

/// An `orphan` relation, or a dash standing in for a missing predicate:
/// a dash attached to a non-verbal clause head without a copula.
fn elliptic(s: &Sentence) -> bool {
    if s.tokens.iter().any(|t| t.base_deprel() == "orphan") {
        return true;
    }
    s.tokens.iter().enumerate().any(|(pos, t)| {
        if !punct_form(t, DASHES) {
            return false;
        }
        let Some(h) = s.head_of(pos) else {
            return false;
        };
        let head = &s.tokens[h];
        matches!(head.base_deprel(), "conj" | "parataxis")
            && !matches!(head.upos, Upos::Verb | Upos::Aux)
            && !has_child_base(s, h, &["cop"])
    })
}
