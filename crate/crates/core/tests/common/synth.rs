//! Random but structurally valid CoNLL-U documents.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use stylo_core::conllu::{Document, Sentence, Token};
use stylo_core::Upos;

const WORDS: &[(&str, &str)] = &[
    ("крук", "крук"),
    ("листа", "лист"),
    ("веснянки", "веснянки"),
    ("закрапало", "закрапати"),
    ("захищати", "захищати"),
    ("буде", "бути"),
    ("дам", "дати"),
    ("сказав", "сказати"),
    ("мати", "мати"),
    ("курча", "курча"),
    ("подвір'я", "подвір’я"),
    ("сонечко", "сонечко"),
    ("дочка", "дочка"),
    ("ж", "ж"),
    ("не", "не"),
    ("би", "би"),
    ("що", "що"),
    ("Київ", "Київ"),
    ("читати", "читати"),
    ("хата", "хата"),
    ("село", "село"),
    ("ніч", "ніч"),
    ("F-16", "F-16"),
];

const PUNCT: &[&str] = &[".", ",", ";", ":", "—", "-", "«", "»", "\"", "!", "?", "…", "?!"];

const DEPRELS: &[&str] = &[
    "nsubj",
    "obj",
    "iobj",
    "obl",
    "amod",
    "advmod",
    "det",
    "nummod",
    "nmod",
    "appos",
    "flat",
    "flat:name",
    "conj",
    "cc",
    "parataxis",
    "orphan",
    "aux",
    "aux:pass",
    "nsubj:pass",
    "cop",
    "xcomp",
    "ccomp",
    "csubj",
    "mark",
    "case",
    "discourse",
    "punct",
    "acl",
];

const FEATS: &[(&str, &[&str])] = &[
    ("Case", &["Nom", "Gen", "Dat", "Acc", "Ins", "Loc", "Voc"]),
    ("Animacy", &["Anim", "Inan"]),
    ("Gender", &["Masc", "Fem", "Neut"]),
    ("Number", &["Sing", "Plur"]),
    ("Aspect", &["Imp", "Perf"]),
    ("Tense", &["Past", "Pres", "Fut"]),
    ("Mood", &["Ind", "Imp", "Cnd"]),
    ("VerbForm", &["Fin", "Inf", "Conv", "Part"]),
    ("Voice", &["Act", "Pass"]),
    ("Person", &["0", "1", "2", "3"]),
    ("Degree", &["Pos", "Cmp", "Sup"]),
    ("PronType", &["Dem", "Int", "Neg", "Prs", "Rel", "Tot"]),
    ("Poss", &["Yes"]),
    ("Reflex", &["Yes"]),
    ("NameType", &["Giv", "Sur", "Geo"]),
    ("NumType", &["Card", "Ord"]),
    ("Polarity", &["Neg"]),
    ("Foreign", &["Yes"]),
];

fn token<R: Rng>(rng: &mut R, index: usize) -> Token {
    let upos = *Upos::ALL.choose(rng).unwrap();
    let (form, lemma) = if upos == Upos::Punct {
        let p = *PUNCT.choose(rng).unwrap();
        (p.to_string(), p.to_string())
    } else {
        let (f, l) = *WORDS.choose(rng).unwrap();
        (f.to_string(), l.to_string())
    };
    let mut feats = BTreeMap::new();
    if upos != Upos::Punct {
        for (k, vals) in FEATS {
            if rng.random_bool(0.3) {
                feats.insert(k.to_string(), vals.choose(rng).unwrap().to_string());
            }
        }
    }
    Token { index, form, lemma, upos, xpos: None, feats, head: 0, deprel: String::new(), misc: BTreeMap::new() }
}

/// A sentence of `len` tokens forming a tree with a single root.
pub fn sentence<R: Rng>(rng: &mut R, sent_id: String, len: usize) -> Sentence {
    let mut tokens: Vec<Token> = (1..=len).map(|i| token(rng, i)).collect();
    // Attach tokens in a random order, each to one already in the tree.
    let mut order: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for (k, &p) in order.iter().enumerate() {
        if k == 0 {
            tokens[p].head = 0;
            tokens[p].deprel = "root".into();
        } else {
            let parent = order[rng.random_range(0..k)];
            tokens[p].head = parent + 1;
            tokens[p].deprel = if tokens[p].upos == Upos::Punct && rng.random_bool(0.8) {
                "punct".into()
            } else {
                DEPRELS.choose(rng).unwrap().to_string()
            };
        }
    }
    Sentence { sent_id, text: None, comments: Vec::new(), tokens }
}

pub fn document<R: Rng>(rng: &mut R, doc_id: &str) -> Document {
    let n = rng.random_range(1..=6);
    Document {
        doc_id: doc_id.to_string(),
        sentences: (0..n)
            .map(|i| {
                let len = rng.random_range(1..=14);
                sentence(rng, format!("{doc_id}-{i}"), len)
            })
            .collect(),
    }
}
