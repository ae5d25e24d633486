use std::io::{Read, Write};

use anyhow::{Context, Result};
use m0n_core::keel::KeelDegree;
use m0n_core::standard::{d_forest, exponent_bound};
use m0n_core::{
    canonicalize, enumerate_standard, generate_relations, graded_rank_oracle, keel_dictionary,
    pairing_matrix, parse_polynomial, Budget, Monomial, OrderConvention, PairingReport,
    Polynomial, PolynomialDocument, StandardMonomial,
};
use serde::Serialize;
use serde_json::json;

use crate::cache::TableCache;
use crate::session::Session;
use crate::{CertificationFailed, Command, Format, Options, UsageError};

type Out<'a> = &'a mut dyn Write;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn require_n(opts: &Options) -> Result<usize> {
    opts.n.ok_or_else(|| usage("--n is required"))
}

fn degrees(opts: &Options, n: usize) -> Result<Vec<usize>> {
    let top = n.checked_sub(3).ok_or_else(|| usage(format!("n = {n} is below 3")))?;
    match opts.degree {
        Some(d) if d > top => Err(usage(format!("degree {d} is outside 0..={top}"))),
        Some(d) => Ok(vec![d]),
        None => Ok((0..=top).collect()),
    }
}

fn write_json(out: Out, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn render(p: &Polynomial, conv: OrderConvention) -> String {
    p.render_with(conv)
}

/// The input polynomial and its `n`, from `--expr` or `--input`.
fn read_polynomial(opts: &Options) -> Result<(Polynomial, usize)> {
    match (&opts.expr, &opts.input) {
        (Some(_), Some(_)) => Err(usage("give either --expr or --input, not both")),
        (Some(text), None) => {
            let n = require_n(opts)?;
            Ok((parse_polynomial(text, n)?, n))
        }
        (None, Some(path)) => {
            let mut text = String::new();
            if path.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text)?;
            } else {
                text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            }
            let doc: PolynomialDocument = serde_json::from_str(&text)?;
            if let Some(n) = opts.n {
                if n != doc.n {
                    return Err(usage(format!("--n {n} disagrees with the document's n = {}", doc.n)));
                }
            }
            Ok((doc.to_polynomial()?, doc.n))
        }
        (None, None) => Err(usage("an input is required: --expr or --input")),
    }
}

fn read_monomial(opts: &Options, n: usize) -> Result<Monomial> {
    let text = opts.expr.as_ref().ok_or_else(|| usage("--expr is required"))?;
    let p = parse_polynomial(text, n)?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((m, 1)), None) => Ok(m.clone()),
        _ => Err(usage(format!("`{text}` is not a single monomial"))),
    }
}

pub fn run(command: Command, opts: &Options, cache: TableCache, budget: Budget, out: Out) -> Result<()> {
    let session = |n: usize| Session::new(n, opts.order_convention, cache.clone(), budget);
    match command {
        Command::Basis => basis(opts, out),
        Command::Dual => dual(opts, out),
        Command::Reduce => {
            let (p, n) = read_polynomial(opts)?;
            reduce(&mut session(n)?, &p, opts.format, out)
        }
        Command::Integral => {
            let (p, n) = read_polynomial(opts)?;
            integral(&mut session(n)?, &p, opts.format, out)
        }
        Command::Pair => {
            let n = require_n(opts)?;
            let d = opts.degree.ok_or_else(|| usage("--degree is required"))?;
            degrees(opts, n)?;
            pair(&mut session(n)?, d, opts.format, out)
        }
        Command::Relations => relations(opts, out),
        Command::Rank => rank(opts, out),
        Command::Oracle => oracle(opts, budget, out),
        Command::Verify => {
            let n = require_n(opts)?;
            degrees(opts, n)?;
            verify(&mut session(n)?, opts.format, out)
        }
        Command::Explain => explain(opts, out),
    }
}

fn basis(opts: &Options, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let mut groups = Vec::new();
    for d in degrees(opts, n)? {
        let b = enumerate_standard(n, d, opts.order_convention)?;
        groups.push((d, b.iter().map(|v| v.monomial().render()).collect::<Vec<_>>()));
    }
    match opts.format {
        Format::Json => {
            let degrees: Vec<_> = groups
                .iter()
                .map(|(d, ms)| json!({ "degree": d, "count": ms.len(), "monomials": ms }))
                .collect();
            write_json(out, &json!({ "n": n, "convention": opts.order_convention, "degrees": degrees }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["degree", "index", "monomial"])?;
            for (d, ms) in &groups {
                for (k, m) in ms.iter().enumerate() {
                    w.write_record([d.to_string(), k.to_string(), m.clone()])?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for (d, ms) in &groups {
                if groups.len() > 1 {
                    writeln!(out, "# degree {d}")?;
                }
                for m in ms {
                    writeln!(out, "{m}")?;
                }
            }
            let total: usize = groups.iter().map(|g| g.1.len()).sum();
            writeln!(out, "count: {total}")?;
            Ok(())
        }
    }
}

fn dual(opts: &Options, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let pairs: Vec<StandardMonomial> = if opts.expr.is_some() {
        vec![StandardMonomial::new(read_monomial(opts, n)?, n)?]
    } else {
        let mut all = Vec::new();
        for d in degrees(opts, n)? {
            all.extend(enumerate_standard(n, d, opts.order_convention)?);
        }
        all
    };
    let rows: Vec<(String, String)> =
        pairs.iter().map(|v| (v.monomial().render(), v.dual().monomial().render())).collect();
    match opts.format {
        Format::Json => {
            let items: Vec<_> = pairs
                .iter()
                .zip(&rows)
                .map(|(v, (m, w))| {
                    json!({ "monomial": m, "degree": v.degree(), "dual": w, "dual_degree": n - 3 - v.degree() })
                })
                .collect();
            write_json(out, &json!({ "n": n, "duals": items }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["monomial", "dual"])?;
            for (m, d) in &rows {
                w.write_record([m, d])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for (m, d) in &rows {
                writeln!(out, "({m})* = {d}")?;
            }
            Ok(())
        }
    }
}

fn reduce(s: &mut Session, p: &Polynomial, format: Format, out: Out) -> Result<()> {
    let parts = p.homogeneous_parts();
    let top = s.top();
    s.prepare(parts.keys().copied().filter(|&d| d <= top))?;
    let forms = s.ring.normal_form(p)?;
    let total = forms.iter().fold(Polynomial::zero(), |acc, f| &acc + &f.to_polynomial());
    match format {
        Format::Json => {
            let components: Vec<_> = forms
                .iter()
                .map(|f| {
                    let terms: Vec<_> = f
                        .terms
                        .iter()
                        .map(|(m, c)| json!({ "monomial": m.render(), "coeff": c }))
                        .collect();
                    json!({ "degree": f.degree, "terms": terms })
                })
                .collect();
            write_json(
                out,
                &json!({
                    "n": s.n,
                    "input": render(p, s.conv),
                    "normal_form": PolynomialDocument::from_polynomial(&total, s.n, s.conv),
                    "rendered": render(&total, s.conv),
                    "components": components,
                }),
            )
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["degree", "coeff", "monomial"])?;
            for f in &forms {
                for (m, c) in &f.terms {
                    w.write_record([f.degree.to_string(), c.to_string(), m.render()])?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", render(&total, s.conv))?;
            Ok(())
        }
    }
}

fn integral(s: &mut Session, p: &Polynomial, format: Format, out: Out) -> Result<()> {
    let top = s.top();
    s.prepare([top])?;
    let value = s.ring.integral(p)?;
    match format {
        Format::Json => write_json(out, &json!({ "n": s.n, "input": render(p, s.conv), "integral": value })),
        Format::Csv => {
            writeln!(out, "integral\n{value}")?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{value}")?;
            Ok(())
        }
    }
}

fn pairing(s: &mut Session, d: usize) -> Result<PairingReport> {
    let top = s.top();
    s.prepare([d, top - d, top])?;
    s.budget.check("pairing")?;
    Ok(pairing_matrix(&s.ring, d)?)
}

#[derive(Serialize)]
struct Failure<'a> {
    command: &'a str,
    n: usize,
    failures: Vec<serde_json::Value>,
}

fn pair(s: &mut Session, d: usize, format: Format, out: Out) -> Result<()> {
    let report = pairing(s, d)?;
    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&report.basis)?;
            for row in &report.matrix {
                w.write_record(row.iter().map(|x| x.to_string()))?;
            }
            w.flush()?;
        }
        Format::Text => {
            let (plus, minus) = report.sign_counts();
            writeln!(out, "n = {}, degree {} x {}", s.n, d, s.top() - d)?;
            writeln!(out, "size: {}", report.basis.len())?;
            writeln!(out, "diagonal signs: +{plus} -{minus}")?;
            writeln!(out, "determinant: {}", report.determinant)?;
            writeln!(out, "block lower zero: {}", report.block_lower_zero)?;
            writeln!(out, "diagonal blocks +-identity: {}", report.diag_plus_minus_identity)?;
            writeln!(out, "unimodular: {}", report.unimodular)?;
        }
    }
    if !report.passed() {
        let failure = Failure {
            command: "pair",
            n: s.n,
            failures: vec![json!({
                "degree": d,
                "block_lower_zero": report.block_lower_zero,
                "diag_plus_minus_identity": report.diag_plus_minus_identity,
                "unimodular": report.unimodular,
                "counterexamples": report.counterexamples,
            })],
        };
        if format != Format::Json {
            eprintln!("{}", serde_json::to_string_pretty(&failure)?);
        }
        return Err(CertificationFailed(format!("pairing at degree {d}")).into());
    }
    Ok(())
}

fn relations(opts: &Options, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let top = degrees(opts, n)?.into_iter().max().unwrap_or(0);
    let maxdeg = opts.degree.unwrap_or(top);
    let set = generate_relations(n, maxdeg)?;
    let conv = opts.order_convention;
    match opts.format {
        Format::Json => {
            let items: Vec<_> = set
                .relations
                .iter()
                .map(|r| {
                    json!({
                        "family": r.family.as_str(),
                        "degree": r.degree(),
                        "sets": r.sets.iter().map(|s| s.elems()).collect::<Vec<_>>(),
                        "note": r.note,
                        "polynomial": render(&r.poly, conv),
                        "document": PolynomialDocument::from_polynomial(&r.poly, n, conv),
                    })
                })
                .collect();
            write_json(out, &json!({ "n": n, "max_degree": maxdeg, "count": items.len(), "relations": items }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["family", "degree", "note", "polynomial"])?;
            for r in &set.relations {
                w.write_record([r.family.as_str(), &r.degree().to_string(), &r.note, &render(&r.poly, conv)])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for r in &set.relations {
                writeln!(out, "{} [{}] {}", r.family.as_str(), r.note, render(&r.poly, conv))?;
            }
            writeln!(out, "count: {}", set.len())?;
            Ok(())
        }
    }
}

fn rank(opts: &Options, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let mut ranks = Vec::new();
    for d in degrees(opts, n)? {
        ranks.push((d, m0n_core::rank(n, d)?));
    }
    match opts.format {
        Format::Json => {
            let items: Vec<_> = ranks.iter().map(|(d, r)| json!({ "degree": d, "rank": r })).collect();
            let total: usize = ranks.iter().map(|r| r.1).sum();
            write_json(out, &json!({ "n": n, "ranks": items, "total": total }))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["degree", "rank"])?;
            for (d, r) in &ranks {
                w.write_record([d.to_string(), r.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for (d, r) in &ranks {
                writeln!(out, "A^{d}: {r}")?;
            }
            Ok(())
        }
    }
}

fn oracle(opts: &Options, budget: Budget, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let mut reports = Vec::new();
    let mut bad = Vec::new();
    for d in degrees(opts, n)? {
        budget.check("oracle")?;
        let r = graded_rank_oracle(n, d, &budget)?;
        let expected = m0n_core::rank(n, d)?;
        if r.rank != expected || !r.torsion_free {
            bad.push(json!({ "degree": d, "oracle_rank": r.rank, "standard_count": expected, "torsion_free": r.torsion_free }));
        }
        reports.push(r);
    }
    match opts.format {
        Format::Json => write_json(out, &reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["degree", "monomials", "relation_rows", "rank", "torsion_free"])?;
            for r in &reports {
                w.write_record([
                    r.d.to_string(),
                    r.monomials.to_string(),
                    r.relation_rows.to_string(),
                    r.rank.to_string(),
                    r.torsion_free.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(
                    out,
                    "A^{}: rank {} from {} monomials, torsion-free: {}",
                    r.d, r.rank, r.monomials, r.torsion_free
                )?;
            }
        }
    }
    if !bad.is_empty() {
        let failure = Failure { command: "oracle", n, failures: bad };
        eprintln!("{}", serde_json::to_string_pretty(&failure)?);
        return Err(CertificationFailed("oracle disagrees with the standard basis".into()).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Largest `n` for which `verify` also runs the from-scratch oracle.
const ORACLE_LIMIT: usize = 7;

fn verify(s: &mut Session, format: Format, out: Out) -> Result<()> {
    let n = s.n;
    let top = s.top();
    let mut checks = Vec::new();

    for d in 0..=top {
        match s.table(d) {
            Ok(t) => {
                let st = t.stats();
                checks.push(Check::new(
                    format!("table d={d}"),
                    true,
                    format!("{} columns, {} standard, {} pivots", st.columns, st.standard, st.pivots),
                ));
            }
            Err(e) => {
                if e.downcast_ref::<m0n_core::Error>().is_some_and(|e| matches!(e, m0n_core::Error::BudgetExceeded(_))) {
                    return Err(e);
                }
                checks.push(Check::new(format!("table d={d}"), false, format!("{e:#}")));
            }
        }
    }
    if checks.iter().all(|c| c.passed) {
        let ranks: Vec<usize> = (0..=top).map(|d| s.ring.rank(d)).collect::<m0n_core::Result<_>>()?;
        let symmetric = (0..=top).all(|d| ranks[d] == ranks[top - d]);
        checks.push(Check::new("ranks symmetric", symmetric, format!("{ranks:?}")));

        if n <= ORACLE_LIMIT {
            for (d, &expected) in ranks.iter().enumerate() {
                s.budget.check("oracle")?;
                let r = graded_rank_oracle(n, d, &s.budget)?;
                checks.push(Check::new(
                    format!("oracle d={d}"),
                    r.rank == expected && r.torsion_free,
                    format!("rank {} (expected {expected}), torsion-free {}", r.rank, r.torsion_free),
                ));
            }
        }

        let mut dual_ok = true;
        for d in 0..=top {
            for v in enumerate_standard(n, d, s.conv)? {
                let w = v.dual();
                dual_ok &= w.dual() == v && w.degree() == top - d;
            }
        }
        checks.push(Check::new("dual involution", dual_ok, ""));

        let rels = generate_relations(n, top)?;
        let mut failing = Vec::new();
        for r in &rels.relations {
            s.budget.check("relations")?;
            if !s.ring.reduce(&r.poly)?.is_zero() {
                failing.push(r.poly.render());
            }
        }
        checks.push(Check::new(
            "relations reduce to zero",
            failing.is_empty(),
            failing.first().cloned().unwrap_or_else(|| format!("{} relations", rels.len())),
        ));

        for d in 0..=top {
            s.budget.check("pairing")?;
            let r = pairing_matrix(&s.ring, d)?;
            let (plus, minus) = r.sign_counts();
            let detail = match r.counterexamples.first() {
                Some(c) => c.detail.clone(),
                None => format!("{} x {}, signs +{plus} -{minus}, det {}", r.basis.len(), r.basis.len(), r.determinant),
            };
            checks.push(Check::new(format!("pairing d={d}"), r.passed(), detail));
        }

        if (4..=6).contains(&n) {
            checks.push(boundary_check(s)?);
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    match format {
        Format::Json => write_json(out, &json!({ "n": n, "convention": s.conv, "passed": passed, "checks": checks }))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check", "passed", "detail"])?;
            for c in &checks {
                w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(out, "{status} {}", c.name)?;
                } else {
                    writeln!(out, "{status} {}: {}", c.name, c.detail)?;
                }
            }
        }
    }
    if !passed {
        if format != Format::Json {
            let failures: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| json!(c)).collect();
            eprintln!("{}", serde_json::to_string_pretty(&Failure { command: "verify", n, failures })?);
        }
        return Err(CertificationFailed(format!("verify --n {n}")).into());
    }
    Ok(())
}

fn boundary_check(s: &mut Session) -> Result<Check> {
    let n = s.n;
    let dict = keel_dictionary(n)?;
    let mut problems = Vec::new();
    for rel in &dict.four_point {
        if !s.ring.reduce(&dict.to_presentation(rel))?.is_zero() {
            problems.push(format!("four-point relation {rel} survives"));
        }
    }
    for (&i, sums) in &dict.forward {
        let a = Polynomial::generator(m0n_core::Generator::A(i));
        for sum in sums {
            if !s.ring.reduce(&(&dict.to_presentation(sum) - &a))?.is_zero() {
                problems.push(format!("a{i} != {sum}"));
            }
        }
    }
    for d in 0..=s.top() {
        s.budget.check("boundary ring")?;
        let k = KeelDegree::build(n, d, &s.budget)?;
        if k.rank() != s.ring.rank(d)? {
            problems.push(format!("boundary ring rank {} at degree {d}", k.rank()));
        }
    }
    Ok(Check::new("boundary presentation", problems.is_empty(), problems.join("; ")))
}

fn explain(opts: &Options, out: Out) -> Result<()> {
    let n = require_n(opts)?;
    let m = read_monomial(opts, n)?;
    let canonical = canonicalize(&m, n).map_or_else(|| "0".to_string(), |c| c.render());
    let mut doc = json!({
        "n": n,
        "monomial": m.render(),
        "degree": m.degree(),
        "canonical": canonical,
    });
    if let Some((forest, exps)) = d_forest(&m, n) {
        let bounds: Vec<usize> = (0..forest.len()).map(|i| exponent_bound(&forest, i)).collect();
        doc["forest"] = json!(forest.document());
        doc["exponents"] = json!(exps);
        doc["exponent_bounds"] = json!(bounds);
        doc["support_s"] = json!(forest.support_s().elems());
        doc["epsilon"] = json!(forest.epsilon());
    } else {
        doc["forest"] = serde_json::Value::Null;
    }
    match StandardMonomial::new(m.clone(), n) {
        Ok(v) => {
            doc["standard"] = json!(true);
            doc["a_support"] = json!(v.a_support().elems());
            doc["dual"] = json!(v.dual().monomial().render());
            doc["filtration"] = json!(v.filtration_p());
        }
        Err(e) => {
            doc["standard"] = json!(false);
            doc["reason"] = json!(e.to_string());
        }
    }
    match opts.format {
        Format::Json => write_json(out, &doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["field", "value"])?;
            for (k, v) in doc.as_object().context("object")? {
                w.write_record([k.as_str(), &compact(v)])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for (k, v) in doc.as_object().context("object")? {
                writeln!(out, "{k}: {}", compact(v))?;
            }
            Ok(())
        }
    }
}

fn compact(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
