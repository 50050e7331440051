//! Minimal CPLEX-LP reader for the subset the model writer emits: one
//! objective, `name: terms sense rhs` rows that may wrap, `lo <= v <= hi`
//! bounds, and Generals/Binaries lists.

use std::collections::BTreeSet;

#[derive(Debug, Default, PartialEq, Eq)]
pub struct LpFile {
    pub objective: Vec<String>,
    pub constraints: usize,
    pub bounded: usize,
    pub generals: usize,
    pub binaries: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Head,
    Objective,
    Rows,
    Bounds,
    Generals,
    Binaries,
    End,
}

fn is_name(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

/// Reads the terms of one row or the objective; returns the variable names.
fn terms(toks: &[&str]) -> Result<Vec<String>, String> {
    let mut vars = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if toks[i] == "+" || toks[i] == "-" {
            i += 1;
        }
        if i < toks.len() && is_number(toks[i]) {
            i += 1;
        }
        match toks.get(i) {
            Some(v) if is_name(v) => vars.push(v.to_string()),
            other => return Err(format!("expected a variable, found {other:?}")),
        }
        i += 1;
    }
    Ok(vars)
}

pub fn read(text: &str) -> Result<LpFile, String> {
    let mut section = Section::Head;
    let mut obj: Vec<&str> = Vec::new();
    let mut rows: Vec<&str> = Vec::new();
    let mut bounded = BTreeSet::new();
    let mut generals = BTreeSet::new();
    let mut binaries = BTreeSet::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        let next = match line {
            "Minimize" => Some(Section::Objective),
            "Subject To" => Some(Section::Rows),
            "Bounds" => Some(Section::Bounds),
            "Generals" => Some(Section::Generals),
            "Binaries" => Some(Section::Binaries),
            "End" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let toks = line.split_whitespace();
        match section {
            Section::Objective => obj.extend(toks),
            Section::Rows => rows.extend(toks),
            Section::Bounds => {
                let t: Vec<&str> = toks.collect();
                match t.as_slice() {
                    [lo, "<=", v, "<=", hi] if is_number(lo) && is_number(hi) && is_name(v) => {
                        if !bounded.insert(v.to_string()) {
                            return Err(format!("{v} bounded twice"));
                        }
                    }
                    _ => return Err(format!("bad bound: {line}")),
                }
            }
            Section::Generals | Section::Binaries => {
                let set = if section == Section::Generals { &mut generals } else { &mut binaries };
                for v in toks {
                    if !is_name(v) || !set.insert(v.to_string()) {
                        return Err(format!("bad or repeated declaration {v}"));
                    }
                }
            }
            Section::Head | Section::End => return Err(format!("text outside a section: {line}")),
        }
    }
    if section != Section::End {
        return Err("missing End".into());
    }
    if generals.intersection(&binaries).next().is_some() {
        return Err("variable both general and binary".into());
    }
    if !bounded.is_subset(&generals) {
        return Err("bounded variable is not a general integer".into());
    }
    let declared: BTreeSet<String> = generals.union(&binaries).cloned().collect();

    let objective = match obj.split_first() {
        Some((label, rest)) if label.ends_with(':') => terms(rest)?,
        _ => return Err("objective without label".into()),
    };

    // rows: label, terms, sense, rhs
    let mut used = BTreeSet::new();
    let mut labels = BTreeSet::new();
    let mut i = 0;
    while i < rows.len() {
        let label = rows[i];
        if !label.ends_with(':') || !labels.insert(label) {
            return Err(format!("bad or repeated row label {label}"));
        }
        let start = i + 1;
        let sense = rows[start..]
            .iter()
            .position(|t| matches!(*t, "<=" | ">=" | "="))
            .ok_or_else(|| format!("row {label} has no sense"))?
            + start;
        match rows.get(sense + 1) {
            Some(rhs) if is_number(rhs) => {}
            other => return Err(format!("row {label} has rhs {other:?}")),
        }
        used.extend(terms(&rows[start..sense])?);
        i = sense + 2;
    }
    used.extend(objective.iter().cloned());
    if let Some(v) = used.difference(&declared).next() {
        return Err(format!("{v} is used but not declared"));
    }
    Ok(LpFile {
        objective,
        constraints: labels.len(),
        bounded: bounded.len(),
        generals: generals.len(),
        binaries: binaries.len(),
    })
}
