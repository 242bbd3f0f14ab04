use std::io::{self, Write};

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use permsphere::{
    Basis, CountPoly, CountReport, ExpandedPoly, Metric, Permutation, Radius, VerifyReport,
};
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Printer {
    format: Format,
}

fn opt(v: &Option<BigUint>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn scale(metric: Metric) -> &'static str {
    match metric {
        Metric::Lp(p) if p > 1 => "p-th power",
        _ => "native",
    }
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Self { format }
    }

    fn json(&self, value: &impl Serialize) -> Result<()> {
        let mut stdout = io::stdout().lock();
        serde_json::to_writer_pretty(&mut stdout, value)?;
        writeln!(stdout)?;
        Ok(())
    }

    fn csv<const N: usize>(
        &self,
        header: [&str; N],
        rows: impl IntoIterator<Item = [String; N]>,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn distance(
        &self,
        metric: Metric,
        u: &Permutation,
        v: Option<&Permutation>,
        d: Radius,
    ) -> Result<()> {
        let v_text = v.map(|p| p.to_string()).unwrap_or_default();
        match self.format {
            Format::Text => match metric {
                Metric::Lp(p) if p > 1 => println!("{d} (sum of |d|^{p})"),
                _ => println!("{d}"),
            },
            Format::Json => self.json(&json!({
                "metric": metric,
                "perm": u.to_string(),
                "perm2": v.map(|p| p.to_string()),
                "distance": d.to_string(),
                "scale": scale(metric),
            }))?,
            Format::Csv => self.csv(
                ["metric", "perm", "perm2", "distance", "scale"],
                [[
                    metric.to_string(),
                    u.to_string(),
                    v_text,
                    d.to_string(),
                    scale(metric).to_string(),
                ]],
            )?,
        }
        Ok(())
    }

    pub fn count(&self, r: &CountReport) -> Result<()> {
        match self.format {
            Format::Text => match (&r.pipeline, &r.oracle) {
                (Some(p), Some(o)) => {
                    let verdict = if p == o { "match" } else { "MISMATCH" };
                    println!("pipeline {p}\noracle   {o}\n{verdict}");
                }
                _ => println!("{}", opt(&r.pipeline.clone().or(r.oracle.clone()))),
            },
            Format::Json => self.json(r)?,
            Format::Csv => self.csv(
                ["metric", "n", "radius", "pipeline", "oracle", "match"],
                [[
                    r.metric.to_string(),
                    r.n.to_string(),
                    r.radius.to_string(),
                    opt(&r.pipeline),
                    opt(&r.oracle),
                    r.matched.map(|b| b.to_string()).unwrap_or_default(),
                ]],
            )?,
        }
        Ok(())
    }

    /// `cell` prints a lone value in text mode, for a fully specified `(m, q)`.
    pub fn beta(&self, radius: Radius, rows: &[(usize, usize, BigUint)], cell: bool) -> Result<()> {
        match self.format {
            Format::Text => {
                if let ([(_, _, b)], true) = (rows, cell) {
                    println!("{b}");
                    return Ok(());
                }
                println!("{:>4} {:>4} {:>4}  beta", "R", "m", "q");
                for (m, q, b) in rows {
                    println!("{:>4} {m:>4} {q:>4}  {b}", radius.0);
                }
            }
            Format::Json => {
                let docs: Vec<_> = rows
                    .iter()
                    .map(|(m, q, b)| json!({"radius": radius.0, "m": m, "q": q, "beta": b.to_string()}))
                    .collect();
                self.json(&docs)?
            }
            Format::Csv => self.csv(
                ["radius", "m", "q", "beta"],
                rows.iter().map(|(m, q, b)| {
                    [
                        radius.0.to_string(),
                        m.to_string(),
                        q.to_string(),
                        b.to_string(),
                    ]
                }),
            )?,
        }
        Ok(())
    }

    pub fn polynomial(&self, poly: &CountPoly, basis: Basis) -> Result<()> {
        match basis {
            Basis::Binomial => match self.format {
                Format::Text => println!("{poly}"),
                Format::Json => self.json(&poly.to_document())?,
                Format::Csv => self.csv(
                    ["coef", "m", "q"],
                    poly.terms()
                        .iter()
                        .map(|t| [t.coef.to_string(), t.m.to_string(), t.q.to_string()]),
                )?,
            },
            Basis::Monomial => {
                let rat: ExpandedPoly = poly.to_rational::<BigInt>();
                match self.format {
                    Format::Text => println!("{rat}"),
                    Format::Json => {
                        let mut doc = rat.to_document();
                        doc.metric = poly.metric;
                        doc.radius = poly.radius;
                        self.json(&doc)?
                    }
                    Format::Csv => {
                        let den = rat.denominator();
                        self.csv(
                            ["degree", "numerator", "denominator"],
                            rat.numerators()
                                .into_iter()
                                .enumerate()
                                .map(|(d, c)| [d.to_string(), c.to_string(), den.to_string()]),
                        )?
                    }
                }
            }
        }
        Ok(())
    }

    pub fn evaluation(
        &self,
        metric: Metric,
        radius: Radius,
        n: u64,
        value: &BigUint,
    ) -> Result<()> {
        match self.format {
            Format::Text => println!("{value}"),
            Format::Json => self.json(&json!({
                "metric": metric,
                "radius": radius,
                "n": n,
                "value": value.to_string(),
            }))?,
            Format::Csv => self.csv(
                ["metric", "radius", "n", "value"],
                [[
                    metric.to_string(),
                    radius.to_string(),
                    n.to_string(),
                    value.to_string(),
                ]],
            )?,
        }
        Ok(())
    }

    pub fn verify(&self, report: &VerifyReport) -> Result<()> {
        match self.format {
            Format::Text => println!("{report}"),
            Format::Json => self.json(report)?,
            Format::Csv => self.csv(
                [
                    "name",
                    "locus",
                    "expected_source",
                    "verdict",
                    "values",
                    "note",
                ],
                report.checks.iter().map(|c| {
                    let values: Vec<String> = c
                        .values
                        .iter()
                        .map(|v| format!("{}={}", v.path, v.value))
                        .collect();
                    [
                        c.name.clone(),
                        c.locus.clone(),
                        c.expected_source.to_string(),
                        c.verdict.to_string(),
                        values.join("; "),
                        c.note.clone().unwrap_or_default(),
                    ]
                }),
            )?,
        }
        Ok(())
    }
}
