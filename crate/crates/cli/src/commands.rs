use std::fs;

use anyhow::Context;
use serde_json::{json, Value};

use tropica::chambers::{chamber_decomposition, default_bound, walls};
use tropica::elliptic_covers::{labeled_aggregation_by_graph, simple_hurwitz_tropical, FeynmanGraph};
use tropica::feynman_series::{mirror_check, refined_integral};
use tropica::graph_complex::{basis, differential, differential_matrix, homology_dimension, wheel_class};
use tropica::line_covers::enumerate_line_covers;
use tropica::moduli_space::{build_poset, enumerate_types};
use tropica::rational::to_pq;
use tropica::sym_oracle::{hurwitz_elliptic, hurwitz_line, SizeGuard};
use tropica::{Error, Multigraph, Partition, Rational};

use crate::report::{row, Report};
use crate::{Command, OracleCommand};

fn guard(force: bool, refuse: bool, what: String) -> anyhow::Result<SizeGuard> {
    if force {
        return Ok(SizeGuard::Override);
    }
    if refuse {
        return Err(Error::SizeGuard(what).into());
    }
    Ok(SizeGuard::Enforce)
}

fn partition(s: &str) -> anyhow::Result<Partition> {
    Ok(s.parse::<Partition>()?)
}

fn pq(r: &Rational) -> Value {
    Value::String(to_pq(r))
}

/// Vertices from lowest to highest position, 1-based.
fn order_string(order: &[usize]) -> String {
    let mut by_pos = vec![0; order.len()];
    for (v, &p) in order.iter().enumerate() {
        by_pos[p] = v + 1;
    }
    by_pos.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn parse_order(s: &str, n: usize) -> anyhow::Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("`{s}` is not an ordering of the vertices 1..{n}"));
    let verts: Vec<usize> =
        s.split(',').map(|t| t.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    if verts.len() != n {
        return Err(bad().into());
    }
    let mut order = vec![usize::MAX; n];
    for (pos, &v) in verts.iter().enumerate() {
        if v == 0 || v > n || order[v - 1] != usize::MAX {
            return Err(bad().into());
        }
        order[v - 1] = pos;
    }
    Ok(order)
}

/// One-line graph form: edges, then `label@vertex` legs, then `g(v)=k`.
fn compact(g: &Multigraph) -> String {
    let mut parts: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    parts.extend(g.legs().iter().map(|l| format!("{}@{}", l.label, l.vertex)));
    parts.extend(
        (0..g.num_vertices()).filter(|&v| g.vertex_genus(v) > 0).map(|v| format!("g{v}={}", g.vertex_genus(v))),
    );
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

pub fn dispatch(command: &Command, force: bool) -> anyhow::Result<Report> {
    match command {
        Command::DoubleHurwitz { genus, mu, nu, list_covers } => double_hurwitz(*genus, mu, nu, *list_covers, force),
        Command::Chambers { lmu, lnu, bound } => chambers(*lmu, *lnu, *bound, force),
        Command::Elliptic { degree, genus, per_graph } => elliptic(*degree, *genus, *per_graph, force),
        Command::Feynman { graph, order, dmax } => feynman(graph, order, *dmax, force),
        Command::MirrorCheck { genus, dmax } => mirror(*genus, *dmax, force),
        Command::GraphComplex { genus, edges, dump_matrix } => graph_complex(*genus, *edges, dump_matrix.as_deref()),
        Command::Moduli { genus, marks, poset } => moduli(*genus, *marks, *poset, force),
        Command::Oracle(o) => oracle(o, force),
    }
}

fn double_hurwitz(g: u32, mu: &str, nu: &str, list: bool, force: bool) -> anyhow::Result<Report> {
    let (mu, nu) = (partition(mu)?, partition(nu)?);
    let d = mu.size();
    guard(force, d > 6 || g > 2, format!("double Hurwitz enumeration at d = {d}, g = {g}"))?;
    let covers = enumerate_line_covers(g, &mu, &nu)?;
    let mut total = Rational::from_integer(0.into());
    let mut entries = vec![];
    let mut csv = vec![row(["canonical", "weight_product", "forks", "wieners", "multiplicity"])];
    let mut lines = vec![];
    for c in &covers {
        let m = c.multiplicity()?;
        total += &m.value;
        let canon = c.canonical_string();
        entries.push(json!({
            "canonical": canon,
            "weightProduct": m.weight_product.to_string(),
            "forks": m.forks,
            "wieners": m.wieners,
            "multiplicity": pq(&m.value),
        }));
        csv.push(row([canon.clone(), m.weight_product.to_string(), m.forks.to_string(), m.wieners.to_string(), m.value.to_string()]));
        lines.push(format!("{canon}  {}", m.value));
    }
    let s = tropica::line_covers::num_levels(g, mu.len(), nu.len());
    let mut text = String::new();
    if list {
        for l in &lines {
            text.push_str(l);
            text.push('\n');
        }
    }
    text.push_str(&format!("{total}\n"));
    let json = json!({
        "genus": g,
        "mu": mu.parts(),
        "nu": nu.parts(),
        "s": s,
        "covers": entries,
        "total": pq(&total),
    });
    Ok(Report { text, json, csv, status: 0 })
}

fn chambers(lmu: usize, lnu: usize, bound: Option<u32>, force: bool) -> anyhow::Result<Report> {
    guard(force, lmu + lnu > 5, format!("chamber decomposition with ℓ(μ) + ℓ(ν) = {}", lmu + lnu))?;
    let bound = bound.unwrap_or_else(|| default_bound(lmu, lnu));
    let ws = walls(lmu, lnu);
    let cs = chamber_decomposition(lmu, lnu, bound)?;
    let mut text = format!("walls: {}\n", ws.len());
    for w in &ws {
        text.push_str(&format!("  {w} = 0\n"));
    }
    text.push_str(&format!("chambers: {}\n", cs.len()));
    let mut csv = vec![row(["signs", "witness_mu", "witness_nu", "polynomial"])];
    let mut chambers = vec![];
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    for c in &cs {
        let signs: String = c.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        let poly = c.polynomial.as_ref().map(|p| p.to_string());
        text.push_str(&format!(
            "  [{signs}] at mu=({}) nu=({}): {}\n",
            join(&c.witness_mu),
            join(&c.witness_nu),
            poly.as_deref().unwrap_or("-")
        ));
        csv.push(row([signs.clone(), join(&c.witness_mu), join(&c.witness_nu), poly.clone().unwrap_or_default()]));
        let terms: Vec<Value> = c
            .polynomial
            .as_ref()
            .map(|p| p.terms().iter().map(|(e, x)| json!({ "exponents": e, "coefficient": pq(x) })).collect())
            .unwrap_or_default();
        chambers.push(json!({
            "signs": c.signs,
            "witness": { "mu": c.witness_mu, "nu": c.witness_nu },
            "polynomial": poly,
            "terms": terms,
        }));
    }
    let json = json!({
        "lmu": lmu,
        "lnu": lnu,
        "bound": bound,
        "walls": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "chambers": chambers,
    });
    Ok(Report { text, json, csv, status: 0 })
}

fn elliptic(d: u32, g: u32, per_graph: bool, force: bool) -> anyhow::Result<Report> {
    guard(force, d > 6 || g > 4, format!("elliptic cover enumeration at d = {d}, g = {g}"))?;
    let total = simple_hurwitz_tropical(d, g)?;
    let parts = labeled_aggregation_by_graph(d, g)?;
    let mut text = String::new();
    let mut csv = vec![row(["graph", "automorphisms", "order", "multidegree", "count"])];
    let mut graphs = vec![];
    for (i, p) in parts.iter().enumerate() {
        let shape = compact(p.graph.graph());
        if per_graph {
            text.push_str(&format!("graph {i}: {shape}  |Aut| = {}  contribution {}\n", p.automorphisms, p.total));
        }
        let mut counts = vec![];
        for (order, a, n) in &p.counts {
            let o = order_string(order);
            let a_str = a.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            if per_graph {
                text.push_str(&format!("  order {o}  a = ({a_str})  {n}\n"));
            }
            csv.push(row([shape.clone(), p.automorphisms.to_string(), o.clone(), a_str, n.to_string()]));
            counts.push(json!({ "order": o, "multidegree": a, "count": n.to_string() }));
        }
        graphs.push(json!({
            "graph": p.graph.graph().to_text(),
            "automorphisms": p.automorphisms.to_string(),
            "contribution": pq(&p.total),
            "counts": counts,
        }));
    }
    text.push_str(&format!("{total}\n"));
    let json = json!({ "degree": d, "genus": g, "graphs": graphs, "total": pq(&total) });
    Ok(Report { text, json, csv, status: 0 })
}

fn feynman(path: &std::path::Path, order: &str, dmax: u32, force: bool) -> anyhow::Result<Report> {
    guard(force, dmax > 6, format!("Feynman expansion to d = {dmax}"))?;
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph: Multigraph = src.parse()?;
    let shape = FeynmanGraph::new(graph)?;
    let order = parse_order(order, shape.graph().num_vertices())?;
    let series = refined_integral(&shape, &order, dmax)?;
    let mut text = String::new();
    let mut csv = vec![row(["exponents", "coefficient"])];
    let mut coeffs = vec![];
    for (e, c) in series.sorted_terms() {
        let es = e.iter().map(i32::to_string).collect::<Vec<_>>().join(" ");
        text.push_str(&format!("{es} : {c}\n"));
        csv.push(row([es, c.to_string()]));
        coeffs.push(json!({ "exponents": e, "coefficient": pq(&c) }));
    }
    let json = json!({
        "graph": shape.graph().to_text(),
        "order": order_string(&order),
        "dmax": dmax,
        "coefficients": coeffs,
    });
    Ok(Report { text, json, csv, status: 0 })
}

fn mirror(g: u32, dmax: u32, force: bool) -> anyhow::Result<Report> {
    let report = mirror_check(g, dmax, if force { SizeGuard::Override } else { SizeGuard::Enforce })?;
    let mut text = String::new();
    let mut csv = vec![row(["degree", "tropical", "feynman", "agree"])];
    let mut rows = vec![];
    for r in &report.rows {
        let verdict = if r.agrees() { "ok" } else { "MISMATCH" };
        text.push_str(&format!("q^{}  tropical {}  feynman {}  {verdict}\n", 2 * r.degree, r.tropical, r.feynman));
        csv.push(row([r.degree.to_string(), r.tropical.to_string(), r.feynman.to_string(), r.agrees().to_string()]));
        rows.push(json!({
            "degree": r.degree,
            "tropical": pq(&r.tropical),
            "feynman": pq(&r.feynman),
            "agree": r.agrees(),
        }));
    }
    for (e, c) in &report.stray_coefficients {
        text.push_str(&format!("unexpected coefficient {c} at q^{e}\n"));
    }
    let passed = report.passed();
    text.push_str(if passed { "pass\n" } else { "FAIL\n" });
    let stray: Vec<Value> =
        report.stray_coefficients.iter().map(|(e, c)| json!({ "exponent": e, "coefficient": pq(c) })).collect();
    let json = json!({ "genus": g, "dmax": dmax, "rows": rows, "strayCoefficients": stray, "passed": passed });
    Ok(Report { text, json, csv, status: if passed { 0 } else { 4 } })
}

fn graph_complex(g: u32, edges: Option<usize>, dump: Option<&std::path::Path>) -> anyhow::Result<Report> {
    let range: Vec<usize> = match edges {
        Some(n) => vec![n],
        None => ((g as usize + 1)..=(3 * g as usize).saturating_sub(3)).collect(),
    };
    let mut text = String::new();
    let mut csv = vec![row(["edges", "generators", "rank", "homology"])];
    let mut degrees = vec![];
    for &n in &range {
        let gens = basis(g, n)?.len();
        let m = differential_matrix(g, n)?;
        let h = homology_dimension(g, n)?;
        text.push_str(&format!("n = {n}: {gens} generators, rank ∂ = {}, homology {h}\n", m.rank()));
        csv.push(row([n, gens, m.rank(), h]));
        degrees.push(json!({ "edges": n, "generators": gens, "rank": m.rank(), "homology": h }));
        if let Some(path) = dump {
            fs::write(path, m.to_triplets()).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let w = wheel_class(g)?;
    let wheel_vanishes = w.is_zero();
    let boundary_vanishes = wheel_vanishes || differential(&w)?.is_zero();
    text.push_str(&format!(
        "wheel: {}, boundary {}\n",
        if wheel_vanishes { "zero chain" } else { "nonzero" },
        if boundary_vanishes { "zero" } else { "nonzero" }
    ));
    let json = json!({
        "genus": g,
        "degrees": degrees,
        "wheel": { "vanishes": wheel_vanishes, "boundaryVanishes": boundary_vanishes },
    });
    Ok(Report { text, json, csv, status: 0 })
}

fn moduli(g: u32, n: usize, poset: bool, force: bool) -> anyhow::Result<Report> {
    let dim = (3 * g as usize + n).saturating_sub(3);
    guard(force, dim > 7, format!("moduli types of dimension up to {dim}"))?;
    let p = build_poset(enumerate_types(g, n)?)?;
    let maximal = p.maximal();
    let mut text = format!("types: {}\nmaximal: {}\nmax dimension: {}\n", p.types.len(), maximal.len(), p.max_dimension());
    let mut csv = vec![row(["index", "dimension", "folded", "graph"])];
    let mut types = vec![];
    for (i, t) in p.types.iter().enumerate() {
        let shape = compact(&t.graph);
        text.push_str(&format!("  {i}: dim {} {}{shape}\n", t.dimension, if t.folded { "folded " } else { "" }));
        csv.push(row([i.to_string(), t.dimension.to_string(), t.folded.to_string(), shape]));
        types.push(json!({ "index": i, "graph": t.graph.to_text(), "dimension": t.dimension, "folded": t.folded }));
    }
    let mut json = json!({
        "genus": g,
        "marks": n,
        "maxDimension": p.max_dimension(),
        "maximal": maximal,
        "types": types,
    });
    if poset {
        text.push_str("covers (lower < upper):\n");
        for (a, b) in &p.covers {
            text.push_str(&format!("  {a} < {b}\n"));
        }
        json["covers"] = json!(p.covers);
    }
    Ok(Report { text, json, csv, status: 0 })
}

fn oracle(o: &OracleCommand, force: bool) -> anyhow::Result<Report> {
    let sg = if force { SizeGuard::Override } else { SizeGuard::Enforce };
    let (value, json) = match o {
        OracleCommand::Line { genus, mu, nu } => {
            let (m, n) = (partition(mu)?, partition(nu)?);
            let v = hurwitz_line(*genus, &m, &n, sg)?;
            let j = json!({ "kind": "line", "genus": genus, "mu": m.parts(), "nu": n.parts(), "value": pq(&v) });
            (v, j)
        }
        OracleCommand::Elliptic { degree, genus } => {
            let v = hurwitz_elliptic(*degree, *genus, sg)?;
            (v.clone(), json!({ "kind": "elliptic", "degree": degree, "genus": genus, "value": pq(&v) }))
        }
    };
    Ok(Report { text: format!("{value}\n"), csv: vec![row(["value"]), row([value.to_string()])], json, status: 0 })
}
