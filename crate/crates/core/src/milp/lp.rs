use alloc::string::String;
use core::fmt::Write;

use super::{Domain, MilpModel};

const TERMS_PER_LINE: usize = 8;

/// Writes the model in LP format. Output depends only on the model.
pub fn emit_lp(m: &MilpModel) -> String {
    let mut out = String::new();
    let _ = write_lp(m, &mut out);
    out
}

fn write_lp(m: &MilpModel, out: &mut String) -> core::fmt::Result {
    writeln!(out, "\\ {} thb {} parts {}", m.name, m.thb, m.parts_mode)?;
    writeln!(out, "Minimize")?;
    write!(out, " obj:")?;
    if m.objective.is_empty() {
        // keeps the objective well formed when there are no periods
        match m.variables.first() {
            Some(v) => write!(out, " 0 {}", v.var)?,
            None => write!(out, " 0")?,
        }
    }
    for (n, &ix) in m.objective.iter().enumerate() {
        wrap(out, n)?;
        let sign = if n == 0 { "" } else { "+ " };
        write!(out, " {sign}{}", m.var(ix))?;
    }
    writeln!(out)?;

    writeln!(out, "Subject To")?;
    for (n, c) in m.constraints.iter().enumerate() {
        writeln!(out, "\\ {} {}", c.family.tag(), c.label)?;
        write!(out, " c{}:", n + 1)?;
        for (t, &(ix, coef)) in c.terms.iter().enumerate() {
            wrap(out, t)?;
            let sign = if coef < 0 { "-" } else if t == 0 { "" } else { "+" };
            let sep = if sign.is_empty() { "" } else { " " };
            match coef.abs() {
                1 => write!(out, " {sign}{sep}{}", m.var(ix))?,
                a => write!(out, " {sign}{sep}{a} {}", m.var(ix))?,
            }
        }
        writeln!(out, " {} {}", c.sense.symbol(), c.rhs)?;
    }

    writeln!(out, "Bounds")?;
    for v in m.variables.iter().filter(|v| v.domain == Domain::Ternary) {
        writeln!(out, " 0 <= {} <= 2", v.var)?;
    }

    section(m, out, "Generals", |d| matches!(d, Domain::Ternary | Domain::Integer))?;
    section(m, out, "Binaries", |d| d == Domain::Binary)?;
    writeln!(out, "End")
}

fn wrap(out: &mut String, n: usize) -> core::fmt::Result {
    if n > 0 && n.is_multiple_of(TERMS_PER_LINE) {
        write!(out, "\n   ")?;
    }
    Ok(())
}

fn section(
    m: &MilpModel,
    out: &mut String,
    title: &str,
    keep: impl Fn(Domain) -> bool,
) -> core::fmt::Result {
    let vars: alloc::vec::Vec<_> = m.variables.iter().filter(|v| keep(v.domain)).collect();
    if vars.is_empty() {
        return Ok(());
    }
    writeln!(out, "{title}")?;
    for chunk in vars.chunks(TERMS_PER_LINE) {
        write!(out, " ")?;
        for v in chunk {
            write!(out, " {}", v.var)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
