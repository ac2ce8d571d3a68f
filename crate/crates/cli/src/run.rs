//! Executes commands on a validated configuration and writes the artifacts.

use std::fmt::Write as _;
use std::path::PathBuf;

use glt_core::experiment::{
    counterexample, extract_family, figure1, max_l, q_table, table1, table2, table3, weyl_table,
    MatrixFamily,
};
use glt_core::{Discrepancy, Normalization, ProductSymbol, SamplePoint, TestFunctionSet};

use crate::config::{Command, RunConfig};
use crate::output::{format_cell, format_number, CsvTable};
use crate::{ConfigError, RunError};

fn truth(cfg: &RunConfig, command: Command) -> Result<&ProductSymbol, RunError> {
    cfg.truth
        .as_ref()
        .ok_or(RunError::Config(ConfigError::NeedsTruth {
            command: command.name(),
        }))
}

fn largest_m(cfg: &RunConfig) -> usize {
    *cfg.m.iter().max().expect("validated non-empty")
}

fn extract(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let mut t = CsvTable::new("coefficients.csv", &["m", "j", "k", "re", "im"]);
    for &m in &cfg.m {
        let Some(cap) = max_l(m) else { continue };
        let Some(l) = cfg.l.iter().copied().filter(|&l| l <= cap).max() else {
            continue;
        };
        let c = extract_family(&cfg.family, m, l, cfg.options)?;
        for (j, k, v) in c.iter() {
            t.push(vec![
                m.to_string(),
                j.to_string(),
                k.to_string(),
                format_number(v.re),
                format_number(v.im),
            ]);
        }
    }
    Ok(vec![t])
}

fn compare(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let truth = cfg
        .truth
        .as_ref()
        .map(|t| t as &dyn glt_core::BivariateSymbol);
    let f = figure1(
        &cfg.family,
        cfg.figure_n,
        cfg.figure_l,
        largest_m(cfg),
        truth,
        cfg.options,
    )?;
    let mut fig = CsvTable::new("figure1.csv", &["index", "zeta", "eta", "truth"]);
    for i in 0..f.zeta.len() {
        fig.push(vec![
            (i + 1).to_string(),
            format_number(f.zeta[i]),
            format_number(f.eta[i]),
            format_cell(f.truth.as_ref().map(|t| t[i])),
        ]);
    }
    let d = Discrepancy::between(&f.zeta, &f.eta)?;
    let mut summary = CsvTable::new(
        "comparison.csv",
        &["n", "l", "m", "max_abs", "euclidean", "rms"],
    );
    summary.push(vec![
        f.n.to_string(),
        f.l.to_string(),
        f.m.to_string(),
        format_number(d.max_abs),
        format_number(d.euclidean),
        format_number(d.rms),
    ]);
    Ok(vec![fig, summary])
}

fn tables(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let truth = truth(cfg, Command::Tables)?;
    let t1 = table1(&cfg.family, &cfg.m, cfg.table1_n, cfg.table1_l, cfg.options)?;
    let t2 = table2(&cfg.family, &cfg.n, &cfg.l, largest_m(cfg), cfg.options)?;
    let t3 = table3(&cfg.family, &cfg.m, &cfg.l, truth, cfg.options)?;
    let mut norms = CsvTable::new(
        "table2_norms.csv",
        &["l", "n", "max_abs", "euclidean", "rms"],
    );
    for &l in &cfg.l {
        for &n in &cfg.n {
            norms.push(vec![
                l.to_string(),
                n.to_string(),
                format_cell(t2.max_abs.get(l, n)),
                format_cell(t2.euclidean.get(l, n)),
                format_cell(t2.rms.get(l, n)),
            ]);
        }
    }
    Ok(vec![
        CsvTable::from_table("table1.csv", &t1),
        CsvTable::from_table("table2.csv", &t2.max_abs),
        norms,
        CsvTable::from_table("table3.csv", &t3),
    ])
}

fn weyl(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let truth = truth(cfg, Command::Weyl)?;
    let rows = weyl_table(&cfg.family, &cfg.n, truth, &TestFunctionSet::default())?;
    let mut t = CsvTable::new(
        "weyl.csv",
        &["n", "function", "empirical", "integral", "residual"],
    );
    for (n, residuals) in rows {
        for r in residuals {
            t.push(vec![
                n.to_string(),
                r.label,
                format_number(r.empirical),
                format_number(r.integral),
                format_number(r.residual),
            ]);
        }
    }
    Ok(vec![t])
}

fn qcurve(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let truth = truth(cfg, Command::Qcurve)?;
    let rows = q_table(&cfg.family, &cfg.n, truth)?;
    let mut t = CsvTable::new("qcurve.csv", &["n", "rank", "q", "acs_distance"]);
    for (n, curve, dist) in rows {
        for (r, q) in curve.ranks.iter().zip(&curve.values) {
            t.push(vec![
                n.to_string(),
                r.to_string(),
                format_number(*q),
                format_number(dist),
            ]);
        }
    }
    Ok(vec![t])
}

fn counterexample_table(cfg: &RunConfig) -> Result<Vec<CsvTable>, RunError> {
    let mut t = CsvTable::new(
        "counterexample.csv",
        &["n", "gnorm_sq_lt", "gnorm_sq_square"],
    );
    for row in counterexample(&cfg.counterexample_n)? {
        t.push(vec![
            row.n.to_string(),
            format_number(row.lt),
            format_number(row.square),
        ]);
    }
    Ok(vec![t])
}

fn list(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parameters of the run as `key = value` lines.
pub fn manifest(cfg: &RunConfig, commands: &[Command], files: &[String]) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: &str| {
        let _ = writeln!(s, "{k} = {v}");
    };
    line("tool", "glt");
    line("version", glt_core::VERSION);
    line(
        "commands",
        &commands
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>()
            .join(" "),
    );
    line("family", cfg.family.id());
    line("a", cfg.a_text.as_deref().unwrap_or("-"));
    line("f", cfg.f_text.as_deref().unwrap_or("-"));
    if let MatrixFamily::Toeplitz { fhat } | MatrixFamily::Lt { fhat, .. } = &cfg.family {
        line("f_max_index", &fhat.max_index().to_string());
    }
    line("n", &list(&cfg.n));
    line("m", &list(&cfg.m));
    line("l", &list(&cfg.l));
    match &cfg.truth {
        Some(t) => {
            line("truth.a", &t.a.describe());
            line("truth.g", &t.g.describe());
        }
        None => line("truth", "-"),
    }
    line(
        "extraction.normalization",
        match cfg.options.normalization {
            Normalization::Projection => "projection",
            Normalization::Trace => "trace",
        },
    );
    line(
        "extraction.sample",
        match cfg.options.sample {
            SamplePoint::Midpoint => "midpoint",
            SamplePoint::Right => "right",
        },
    );
    line("extraction.m", &largest_m(cfg).to_string());
    line("table1.n", &cfg.table1_n.to_string());
    line("table1.l", &cfg.table1_l.to_string());
    line("figure.n", &cfg.figure_n.to_string());
    line("figure.l", &cfg.figure_l.to_string());
    line("counterexample.n", &list(&cfg.counterexample_n));
    line("files", &files.join(" "));
    s
}

/// Runs `commands` (the configured list when empty) and writes every artifact
/// plus `manifest.txt` into the output directory. Nothing is written unless all
/// computations succeed.
pub fn run(cfg: &RunConfig, commands: &[Command]) -> Result<Vec<PathBuf>, RunError> {
    let commands = if commands.is_empty() {
        &cfg.commands[..]
    } else {
        commands
    };
    let mut artifacts = Vec::new();
    for &c in commands {
        artifacts.extend(match c {
            Command::Extract => extract(cfg)?,
            Command::Compare => compare(cfg)?,
            Command::Tables => tables(cfg)?,
            Command::Weyl => weyl(cfg)?,
            Command::Qcurve => qcurve(cfg)?,
            Command::Counterexample => counterexample_table(cfg)?,
        });
    }
    let io = |path: &std::path::Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(&cfg.output).map_err(io(&cfg.output))?;
    let mut written = Vec::new();
    for t in &artifacts {
        written.push(
            t.write(&cfg.output)
                .map_err(io(&cfg.output.join(&t.name)))?,
        );
    }
    let names: Vec<String> = artifacts.iter().map(|t| t.name.clone()).collect();
    let manifest_path = cfg.output.join("manifest.txt");
    std::fs::write(&manifest_path, manifest(cfg, commands, &names)).map_err(io(&manifest_path))?;
    written.push(manifest_path);
    Ok(written)
}
