//! Collecting and parsing `.conllu` inputs.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use stylo_core::conllu::duplicate_doc_ids;
use stylo_core::{parse_conllu, Document};

/// Files as given, directories expanded to their `.conllu` files
/// (recursively, sorted by path).
pub fn collect_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found = Vec::new();
            walk(p, &mut found)?;
            found.sort();
            if found.is_empty() {
                bail!("{}: no .conllu files", p.display());
            }
            out.extend(found);
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            bail!("{}: no such file or directory", p.display());
        }
    }
    Ok(out)
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            walk(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "conllu") {
            out.push(path);
        }
    }
    Ok(())
}

/// Documents from every file, in file order. A file without `# newdoc id`
/// markers becomes one document named after its stem.
pub fn load_corpus(inputs: &[PathBuf]) -> Result<Vec<Document>> {
    let files = collect_files(inputs)?;
    let parsed: Vec<Result<Vec<Document>>> = files
        .par_iter()
        .map(|f| {
            let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let file = File::open(f).with_context(|| format!("{}: cannot open", f.display()))?;
            parse_conllu(BufReader::new(file), &stem).map_err(|e| anyhow::anyhow!("{}: {e}", f.display()))
        })
        .collect();
    let mut docs = Vec::new();
    for p in parsed {
        docs.extend(p?);
    }
    if docs.is_empty() {
        bail!("no documents in input");
    }
    let dups = duplicate_doc_ids(&docs);
    if !dups.is_empty() {
        bail!("duplicate document ids across inputs: {}", dups.join(", "));
    }
    Ok(docs)
}
