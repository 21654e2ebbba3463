//! Plain-text tables. Ratios are shown to 5 decimal places.

use std::fmt::Write;

use pcrank_core::bounds::CopReport;
use pcrank_core::{AnalysisReport, PcMatrix, Ranking};

fn f5(v: f64) -> String {
    format!("{v:.5}")
}

fn matrix_table(out: &mut String, m: &PcMatrix) {
    let width = m
        .labels()
        .iter()
        .map(|l| l.len())
        .max()
        .unwrap_or(0)
        .max(9);
    let _ = write!(out, "{:width$}", "");
    for l in m.labels() {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    for (i, l) in m.labels().iter().enumerate() {
        let _ = write!(out, "{l:width$}");
        for v in m.row(i) {
            let _ = write!(out, " {:>width$}", f5(*v));
        }
        out.push('\n');
    }
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let labels = r.matrix.labels();
    out.push_str("Matrix\n");
    matrix_table(&mut out, &r.matrix);

    out.push_str("\nRanking (principal eigenvector)\n");
    let mut order: Vec<usize> = (0..r.n).collect();
    order.sort_by(|&a, &b| r.ranking.values[b].total_cmp(&r.ranking.values[a]));
    for (place, &i) in order.iter().enumerate() {
        let _ = writeln!(out, "  {:>2}. {:<16} {}", place + 1, labels[i], f5(r.ranking.values[i]));
    }

    out.push_str("\nIndices\n");
    let _ = writeln!(out, "  lambda_max          {}", f5(r.lambda_max));
    let _ = writeln!(out, "  Saaty S             {}", f5(r.saaty));
    match (r.koczkodaj, r.alpha, r.worst_triad) {
        (Some(k), Some(a), Some(t)) => {
            let _ = writeln!(out, "  Koczkodaj K         {}", f5(k));
            let _ = writeln!(out, "  alpha = 1 - K       {}", f5(a));
            let _ = writeln!(
                out,
                "  worst triad         {{{}, {}, {}}} ({})",
                labels[t.i],
                labels[t.j],
                labels[t.k],
                f5(t.local_inconsistency)
            );
        }
        _ => {
            let _ = writeln!(out, "  Koczkodaj K         undefined (n < 3)");
        }
    }
    let (wi, wj) = r.discrepancy.worst_pair;
    let _ = writeln!(
        out,
        "  discrepancy D       {} (worst pair {} / {})",
        f5(r.discrepancy.global),
        labels[wi],
        labels[wj]
    );

    if let Some(b) = &r.bounds {
        out.push_str("\nBounds from K\n");
        let _ = writeln!(out, "  D <= 1/alpha - 1    {}", f5(b.discrepancy_bound));
        let _ = writeln!(out, "  S in                [{}, {}]", f5(b.saaty_lower), f5(b.saaty_upper));
        let _ = writeln!(out, "  lambda_max in       [{}, {}]", f5(b.lambda_lower), f5(b.lambda_upper));
        let _ = writeln!(out, "  kappa               {}", f5(b.kappa));
        let _ = writeln!(out, "  POP threshold       {}", f5(b.pop_threshold));
        let _ = writeln!(out, "  POIP threshold      {}", f5(b.poip_threshold));
    }
    if let Some(c) = &r.cop {
        out.push_str("\nOrder preservation\n");
        let _ = writeln!(
            out,
            "  POP   premises met {:>6}  violations {:>3}  raw violations {:>6}",
            c.pop_premises_met, c.pop_violations, c.raw_pop_violations
        );
        let _ = writeln!(
            out,
            "  POIP  premises met {:>6}  violations {:>3}  raw violations {:>6}",
            c.poip_premises_met, c.poip_violations, c.raw_poip_violations
        );
    }

    out.push_str("\nScale\n");
    let _ = writeln!(
        out,
        "  max entry {} {} Fulop constant {}",
        f5(r.scale.max_entry),
        if r.scale.within_scale { "<" } else { ">=" },
        f5(r.scale.fulop_constant)
    );
    if let Some(g) = r.saaty_criterion_guaranteed {
        let _ = writeln!(out, "  S < 0.1 guaranteed by K <= 1/11: {}", if g { "yes" } else { "no" });
    }
    for note in &r.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

pub fn cop(m: &PcMatrix, mu: &Ranking, k: f64, cop: &CopReport) -> String {
    let labels = m.labels();
    let mut out = String::new();
    let _ = writeln!(out, "K = {}, POP threshold 1/alpha = {}", f5(k), f5(cop.pop.threshold));
    out.push_str("\nPOP (m_ij > threshold => mu_i > mu_j)\n");
    let _ = writeln!(
        out,
        "  {:<12} {:<12} {:>10} {:>10} {:>10}  {:<9} conclusion",
        "i", "j", "m_ij", "mu_i", "mu_j", "premise"
    );
    for r in cop.pop.rows.iter().filter(|r| m.get(r.i, r.j) > 1.0) {
        let _ = writeln!(
            out,
            "  {:<12} {:<12} {:>10} {:>10} {:>10}  {:<9} {}",
            labels[r.i],
            labels[r.j],
            f5(m.get(r.i, r.j)),
            f5(mu.get(r.i)),
            f5(mu.get(r.j)),
            if r.premise_met { "met" } else { "not met" },
            status(r.premise_met, r.conclusion_holds)
        );
    }
    let _ = writeln!(out, "  raw POP violations: {}", cop.pop.raw_violations.len());
    for (i, j) in &cop.pop.raw_violations {
        let _ = writeln!(out, "    {} > {} judged, ranked otherwise", labels[*i], labels[*j]);
    }

    match &cop.poip {
        None => out.push_str("\nPOIP skipped\n"),
        Some(p) => {
            let _ = writeln!(
                out,
                "\nPOIP (m_ij / m_kl > {} => mu_i/mu_j > mu_k/mu_l)",
                f5(p.threshold)
            );
            let met: Vec<_> = p.rows.iter().filter(|r| r.premise_met).collect();
            let _ = writeln!(
                out,
                "  quadruples checked {}, premises met {}, theorem violations {}",
                p.rows.len(),
                met.len(),
                met.iter().filter(|r| !r.conclusion_holds).count()
            );
            for r in met.iter().filter(|r| !r.conclusion_holds) {
                let _ = writeln!(
                    out,
                    "    VIOLATION ({}, {}) vs ({}, {})",
                    labels[r.i], labels[r.j], labels[r.k], labels[r.l]
                );
            }
            let _ = writeln!(out, "  raw POIP violations: {}", p.raw_violations.len());
        }
    }
    out
}

fn status(premise: bool, holds: bool) -> &'static str {
    match (premise, holds) {
        (true, true) => "holds",
        (true, false) => "VIOLATED",
        (false, true) => "holds (premise not met)",
        (false, false) => "fails (premise not met)",
    }
}
