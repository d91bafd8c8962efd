use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use impasse_core::classify::{
    ade_type, newton_degeneracy, principal_part, theorem_b_verdict, verify_theorem_c, TheoremBVerdict,
};
use impasse_core::newton::{adjoint_polygon, aux_polygon, aux_support, log_support, NewtonPolygon, Support};
use impasse_core::resolve::{choose_weight, decide_equivalence, resolve, EquivalenceVerdict};
use impasse_core::system::{ConstrainedSystem, Point};
use serde_json::{json, Value};

use crate::{input, CliError, Report, RunConfig};

pub fn run_one(name: &str, file: &Path, cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = input::load(file)?;
    let mut rep = match name {
        "analyze" => analyze(&sys)?,
        "resolve" => resolve_cmd(&sys, cfg)?,
        "ade" => ade(&sys, cfg)?,
        "principal" => principal(&sys, cfg)?,
        "polygon" => polygon_cmd(&sys, cfg)?,
        other => return Err(CliError::Semantic(format!("unknown command {other}"))),
    };
    rep.text = format!("== {}\n{}", file.display(), rep.text);
    if let Value::Object(m) = &mut rep.json {
        m.insert("schema".into(), json!(1));
        m.insert("command".into(), json!(name));
        m.insert("file".into(), json!(file.display().to_string()));
    }
    Ok(rep)
}

fn points(s: &Support) -> String {
    let v: Vec<String> = s.points.iter().map(|(r, c)| format!("({r},{c})")).collect();
    format!("{{{}}}", v.join(", "))
}

fn describe_polygon(p: &NewtonPolygon) -> String {
    let v: Vec<String> = p.vertices.iter().map(|(r, s)| format!("({r},{s})")).collect();
    let weight = p.main_weight().map_or_else(|_| "none".to_string(), |w| w.to_string());
    format!(
        "vertices {}; main vertex ({},{}); main weight {weight}",
        v.join(" "),
        p.main_vertex().0,
        p.main_vertex().1
    )
}

fn system_json(sys: &ConstrainedSystem) -> Value {
    json!({"delta": sys.delta.to_string(), "P": sys.p.to_string(), "Q": sys.q.to_string()})
}

fn analyze(sys: &ConstrainedSystem) -> Result<Report, CliError> {
    let o = Point::origin();
    let verdict = sys.is_singular_at(&o);
    let elementary = sys.is_elementary_at(&o);
    let weight = choose_weight(sys).ok();
    let adj = log_support(&sys.p, &sys.q);
    let aux = aux_support(sys);
    let aux_poly = aux_polygon(sys)?;
    let adj_poly = adjoint_polygon(sys).ok();

    let mut text = String::new();
    let _ = write!(text, "singular: {verdict}");
    if let Some(w) = weight {
        let _ = write!(text, "; weight {w}");
    }
    text.push('\n');
    let _ = writeln!(text, "elementary: {}", elementary.is_some());
    if let Some(c) = elementary {
        let _ = writeln!(text, "elementary case: {c:?}");
    }
    let _ = writeln!(text, "impasse invariant: {}", sys.impasse_invariant_at(&o));
    let _ = writeln!(text, "adjoint support: {}", points(&adj));
    let _ = writeln!(text, "auxiliary support: {}", points(&aux));
    let _ = writeln!(text, "auxiliary polygon: {}", describe_polygon(&aux_poly));
    let _ = writeln!(text, "newton-elementary: {}", aux_poly.is_newton_elementary());
    let json = json!({
        "system": system_json(sys),
        "singular": verdict,
        "weight": weight.map(|w| w.to_string()),
        "elementary": elementary.is_some(),
        "elementary_case": elementary,
        "impasse_invariant": sys.impasse_invariant_at(&o),
        "adjoint_support": adj,
        "auxiliary_support": aux,
        "adjoint_polygon": adj_poly,
        "auxiliary_polygon": aux_poly,
        "newton_elementary": aux_poly.is_newton_elementary(),
    });
    Ok(Report { text, json, code: 0 })
}

fn resolve_cmd(sys: &ConstrainedSystem, cfg: &RunConfig) -> Result<Report, CliError> {
    let tree = resolve(sys, &cfg.resolve)?;
    let mut text = String::new();
    if tree.word.is_empty() {
        let _ = writeln!(text, "word: (empty; the origin is elementary)");
    } else {
        let _ = writeln!(text, "word: {}", tree.word);
    }
    if let Some(l) = &tree.shear {
        let _ = writeln!(text, "shear: y -> y + {l}*x");
    }
    for n in &tree.nodes {
        let parent = n
            .parent
            .as_ref()
            .map_or_else(|| "origin".to_string(), |p| format!("node {} at {}", p.node, p.center));
        let _ = writeln!(
            text,
            "node {} depth {} weight {} center {parent}{}",
            n.id,
            n.depth,
            n.weight,
            if n.interval { " (equilibria)" } else { "" }
        );
        for c in &n.charts {
            let s = c.chart_coordinates();
            let _ = writeln!(
                text,
                "  {}: delta = {}, P = {}, Q = {}, k = {}, e = {}",
                c.direction, s.delta, s.p, s.q, c.k, c.e
            );
        }
        for m in &n.marks {
            let letter = m.letter.map_or_else(
                || m.child.map_or("-".to_string(), |c| format!("-> node {c}")),
                |l| l.to_string(),
            );
            let _ = writeln!(
                text,
                "  mark {} t = {} {:?}: {letter}",
                n.charts[m.chart].direction, m.point.t, m.role
            );
        }
    }
    let json = json!({
        "word": tree.word.to_string(),
        "tree": tree,
        "divisor_graph": tree.divisor_graph(),
    });
    Ok(Report { text, json, code: 0 })
}

pub fn equiv(files: &[PathBuf], cfg: &RunConfig) -> Result<Report, CliError> {
    let [a, b] = files else {
        return Err(CliError::Semantic("equiv takes exactly two files".to_string()));
    };
    let (sa, sb) = (input::load(a)?, input::load(b)?);
    let (verdict, wa, wb) = decide_equivalence(&sa, &sb, &cfg.resolve)?;
    let (line, code, reason) = match &verdict {
        EquivalenceVerdict::Equivalent => ("EQUIVALENT".to_string(), 0, None),
        EquivalenceVerdict::Unknown(r) => (format!("UNKNOWN: {r}"), 1, Some(r.to_string())),
    };
    let show = |w: &Option<impasse_core::resolve::SchemeWord>| w.as_ref().map(|w| w.to_string());
    let mut text = format!("{line}\n");
    for (f, w) in [(a, show(&wa)), (b, show(&wb))] {
        if let Some(w) = w {
            let _ = writeln!(text, "{}: {w}", f.display());
        }
    }
    let json = json!({
        "schema": 1,
        "command": "equiv",
        "files": [a.display().to_string(), b.display().to_string()],
        "verdict": if code == 0 { "EQUIVALENT" } else { "UNKNOWN" },
        "reason": reason,
        "words": [show(&wa), show(&wb)],
    });
    Ok(Report { text, json, code })
}

fn ade(sys: &ConstrainedSystem, cfg: &RunConfig) -> Result<Report, CliError> {
    let t = ade_type(&sys.delta)?;
    let check = verify_theorem_c(sys, &t, &cfg.resolve)?;
    let v = &check.verdict;
    let w = &v.witness;
    let mut text = String::new();
    let _ = writeln!(text, "type: {t}");
    let _ = writeln!(text, "verdict: {}", v.case);
    let _ = writeln!(
        text,
        "a(-1,0) = {}, b(0,-1) = {}, n0 = {}, y | Q: {}",
        impasse_core::exactalg::format_rational(&w.a_m1_0),
        impasse_core::exactalg::format_rational(&w.b_0_m1),
        w.n0.map_or("none".to_string(), |n| n.to_string()),
        w.y_divides_q
    );
    if let Some(n) = &v.note {
        let _ = writeln!(text, "note: {n}");
    }
    let eq = match &check.equivalence {
        EquivalenceVerdict::Equivalent => "EQUIVALENT".to_string(),
        EquivalenceVerdict::Unknown(r) => format!("UNKNOWN: {r}"),
    };
    let _ = writeln!(text, "constant companion: {eq}");
    if check.alarm {
        let _ = writeln!(text, "alarm: matched row but schemes differ");
    }
    let json = json!({
        "system": system_json(sys),
        "type": t.to_string(),
        "verdict": v,
        "check": check,
    });
    Ok(Report { text, json, code: 0 })
}

fn principal(sys: &ConstrainedSystem, cfg: &RunConfig) -> Result<Report, CliError> {
    let pp = principal_part(&sys.p, &sys.q);
    let degeneracy = newton_degeneracy(&sys.p, &sys.q)?;
    let mut text = format!("P: {} | Q: {}\n", pp.p, pp.q);
    match &degeneracy {
        None => text.push_str("newton non-degenerate: true\n"),
        Some(w) => {
            let _ = writeln!(
                text,
                "newton non-degenerate: false (segment {}, x = {}, root t = {})",
                w.segment, w.slice, w.root
            );
        }
    }
    let b = theorem_b_verdict(sys, &cfg.resolve);
    let b_text = match &b {
        Ok(TheoremBVerdict::Determined { word, .. }) => format!("determined by the principal part ({word})"),
        Ok(TheoremBVerdict::NotApplicable(r)) => format!("not applicable: {r}"),
        Ok(TheoremBVerdict::Inconsistent { word, principal_word }) => {
            format!("inconsistent: {word} vs {principal_word}")
        }
        Err(e) => format!("failed: {e}"),
    };
    let _ = writeln!(text, "principal part theorem: {b_text}");
    let json = json!({
        "P": pp.p.to_string(),
        "Q": pp.q.to_string(),
        "components": pp.components,
        "newton_nondegenerate": degeneracy.is_none(),
        "degeneracy_witness": degeneracy,
        "theorem_b": b.as_ref().ok(),
        "theorem_b_error": b.as_ref().err().map(|e| e.to_string()),
    });
    Ok(Report { text, json, code: 0 })
}

fn polygon_cmd(sys: &ConstrainedSystem, cfg: &RunConfig) -> Result<Report, CliError> {
    let support = log_support(&sys.p, &sys.q);
    let adj = adjoint_polygon(sys)?;
    let aux = aux_polygon(sys)?;
    let mut text = String::new();
    let _ = writeln!(text, "adjoint polygon: {}", describe_polygon(&adj));
    let _ = writeln!(text, "auxiliary polygon: {}", describe_polygon(&aux));
    let _ = writeln!(text, "controllable: {}", adj.is_controllable());
    if let Some(path) = &cfg.svg {
        std::fs::write(path, adj.to_svg(&support))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let _ = writeln!(text, "svg: {}", path.display());
    }
    let json = json!({
        "adjoint_polygon": adj,
        "auxiliary_polygon": aux,
        "controllable": adj.is_controllable(),
        "svg": cfg.svg.as_ref().map(|p| p.display().to_string()),
    });
    Ok(Report { text, json, code: 0 })
}
