//! Properties every document and every metric must satisfy.

use stylo_core::conllu::Document;
use stylo_core::lexicon::normalize;
use stylo_core::{MetricRegistry, Scope, Upos};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

/// All violated properties for `doc`, empty when the document is fine.
pub fn violations(reg: &MetricRegistry, doc: &Document) -> Vec<String> {
    let mut out = Vec::new();
    let analyzed = reg.analyze(doc);
    let n = doc.token_count() as f64;
    let mut counts = std::collections::HashMap::new();
    for spec in reg.specs() {
        let (v, trace) = reg.evaluate_analyzed(&analyzed, spec);
        let k = trace.matched.len();
        counts.insert(spec.id.as_str(), k);
        if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
            out.push(format!("{}: value {v} outside [0,1]", spec.id));
        }
        if !close(v * n, k as f64) {
            out.push(format!("{}: value*N = {} but trace has {k}", spec.id, v * n));
        }
        if !close((v * n).round(), v * n) {
            out.push(format!("{}: value*N = {} not integral", spec.id, v * n));
        }
    }

    let pos_sum: usize = reg.specs().iter().filter(|s| s.id.starts_with("POS_")).map(|s| counts[s.id.as_str()]).sum();
    if pos_sum > doc.token_count() {
        out.push(format!("POS_* sum {pos_sum} > N"));
    }

    let tokens: Vec<_> = analyzed.sentences.iter().flat_map(|a| &a.sentence.tokens).collect();
    let nouns = tokens.iter().filter(|t| t.upos == Upos::Noun).count();
    let case_sum: usize =
        ["NOM", "GEN", "DAT", "ACC", "INS", "LOC", "VOC"].iter().map(|c| counts[format!("L_{c}_CASE").as_str()]).sum();
    if case_sum > nouns {
        out.push(format!("case sum {case_sum} > nouns {nouns}"));
    }

    let non_punct = tokens.iter().filter(|t| t.upos != Upos::Punct).count();
    if counts["L_CONT_A"] + counts["L_FUNC_A"] != non_punct {
        out.push(format!("content {} + function {} != non-punct {non_punct}", counts["L_CONT_A"], counts["L_FUNC_A"]));
    }

    let distinct: std::collections::HashSet<String> = tokens.iter().map(|t| normalize(&t.lemma)).collect();
    let ttr = counts["L_TYPE_TOKEN_RATIO_LEMMAS"] as f64 / n;
    if !(ttr > 0.0 && ttr <= 1.0) || (distinct.len() == tokens.len()) != close(ttr, 1.0) {
        out.push(format!("TTR {ttr} inconsistent with {} distinct lemmas", distinct.len()));
    }

    let mut doubled = doc.clone();
    doubled.sentences.extend(doc.sentences.iter().cloned());
    let doubled_analyzed = reg.analyze(&doubled);
    for spec in reg.specs() {
        if spec.scope == Scope::Ratio {
            continue;
        }
        let (a, _) = reg.evaluate_analyzed(&analyzed, spec);
        let (b, _) = reg.evaluate_analyzed(&doubled_analyzed, spec);
        if !close(a, b) {
            out.push(format!("{}: {a} changes to {b} when the document is doubled", spec.id));
        }
    }
    out
}
