use std::fs;
use std::path::Path;

use algcomm::certify::{self, AdversaryOutcome};
use algcomm::format::{
    parse_polynomial, polynomial_from_str, polynomial_to_value, set_from_value, set_to_value, tree_to_value,
    FormatError, ProtocolDocument,
};
use algcomm::linalg::determinant;
use algcomm::sampling::{monte_carlo, McSubject};
use algcomm::scalar::{format_rational, parse_complex, parse_rational};
use algcomm::zoo::{self, FamilyMode};
use algcomm::{
    Frame, Polynomial, ProbabilisticProtocol, ProtocolTree, Rational, RankOptions, Scalar, SetDescriptor, SignPoint,
    TermOrder, VarSpace,
};
use serde_json::{json, Value};

use crate::output::Report;
use crate::{
    AdversaryAction, AuditTarget, CertifyAction, Cli, Command, ConfigArgs, Failure, ZooAction,
};

/// A failed command, optionally with a report to print anyway.
pub struct Halt {
    pub report: Option<Report>,
    pub failure: Failure,
}

impl From<Failure> for Halt {
    fn from(failure: Failure) -> Self {
        Halt { report: None, failure }
    }
}

type Outcome = Result<Report, Halt>;

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn violated_with(report: Report, message: impl ToString) -> Halt {
    Halt { report: Some(report), failure: Failure::violated(message) }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::Validate { file } => validate(cfg, file),
        Command::Run { file, input } => run(cfg, file, input),
        Command::RunInf { file, signs, xz } => run_inf(cfg, file, signs, *xz),
        Command::Prob { file, input } => prob(cfg, file, input),
        Command::Mc { file, set, n, n_y, trials } => mc(cfg, file, set, *n, *n_y, *trials),
        Command::Zoo { action: ZooAction::Emit { name, n, n_y, complex, members } } => {
            zoo_emit(cfg, name, *n, *n_y, *complex, *members)
        }
        Command::Certify { action: CertifyAction::Rank { file, poly, n_x, n_y, trials, exact } } => {
            certify_rank(cfg, file.as_deref(), poly.as_deref(), *n_x, *n_y, *trials, *exact)
        }
        Command::Certify { action: CertifyAction::Divisor { n, m, h, trials } } => divisor(cfg, *n, *m, h, *trials),
        Command::Adversary { action: AdversaryAction::Orthant { file } } => adversary(cfg, file),
        Command::Audit { file, target, trials } => audit(cfg, file, *target, *trials),
        Command::DetM { l } => det_m(l),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn check_poly_caps<C: Scalar>(cfg: &ConfigArgs, p: &Polynomial<C>, what: &str) -> Result<(), Failure> {
    let deg = p.total_degree().unwrap_or(0);
    if deg > cfg.max_degree {
        return Err(Failure::usage(format!("{what} has degree {deg}, cap is {} (--max-degree)", cfg.max_degree)));
    }
    Ok(())
}

fn check_space_caps(cfg: &ConfigArgs, space: VarSpace) -> Result<(), Failure> {
    if space.dim() > cfg.max_vars {
        return Err(Failure::usage(format!("{} variables, cap is {} (--max-vars)", space.dim(), cfg.max_vars)));
    }
    Ok(())
}

fn check_tree_caps<C: Scalar>(cfg: &ConfigArgs, t: &ProtocolTree<C>) -> Result<(), Failure> {
    check_space_caps(cfg, t.space())?;
    for node in t.nodes() {
        check_poly_caps(cfg, &node.message, &format!("node {} message", node.id))?;
        for (j, test) in node.tests.iter().enumerate() {
            let deg: u32 = test.factors().iter().map(|f| f.total_degree().unwrap_or(0)).sum();
            if deg > cfg.max_degree {
                return Err(Failure::usage(format!(
                    "node {} test {j} has degree {deg}, cap is {} (--max-degree)",
                    node.id, cfg.max_degree
                )));
            }
        }
    }
    Ok(())
}

fn check_family_caps<C: Scalar>(cfg: &ConfigArgs, pp: &ProbabilisticProtocol<C>) -> Result<(), Failure> {
    pp.members().iter().try_for_each(|m| check_tree_caps(cfg, &m.tree))
}

fn check_doc_caps(cfg: &ConfigArgs, doc: &ProtocolDocument) -> Result<(), Failure> {
    match doc {
        ProtocolDocument::Real(t) => check_tree_caps(cfg, t),
        ProtocolDocument::Complex(t) => check_tree_caps(cfg, t),
        ProtocolDocument::RealFamily(p) => check_family_caps(cfg, p),
        ProtocolDocument::ComplexFamily(p) => check_family_caps(cfg, p),
    }
}

fn load(cfg: &ConfigArgs, path: &Path) -> Result<ProtocolDocument, Failure> {
    let doc = ProtocolDocument::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    check_doc_caps(cfg, &doc)?;
    Ok(doc)
}

fn load_real_tree(cfg: &ConfigArgs, path: &Path) -> Result<ProtocolTree, Failure> {
    match load(cfg, path)? {
        ProtocolDocument::Real(t) => Ok(t),
        _ => Err(Failure::usage(format!("{}: expected a single real protocol tree", path.display()))),
    }
}

fn load_real_family(cfg: &ConfigArgs, path: &Path) -> Result<ProbabilisticProtocol, Failure> {
    match load(cfg, path)? {
        ProtocolDocument::RealFamily(p) => Ok(p),
        ProtocolDocument::Real(t) => ProbabilisticProtocol::uniform(vec![t]).map_err(Failure::usage),
        _ => Err(Failure::usage(format!("{}: expected a real protocol or family", path.display()))),
    }
}

fn order(cfg: &ConfigArgs, nvars: usize) -> Result<TermOrder, Failure> {
    TermOrder::parse(&cfg.order, nvars).map_err(Failure::usage)
}

fn parse_input<C: Scalar>(text: &str, dim: usize, parse: impl Fn(&str) -> Option<C>) -> Result<Vec<C>, Failure> {
    let parts: Vec<&str> = if text.trim().is_empty() { Vec::new() } else { text.split(',').collect() };
    if parts.len() != dim {
        return Err(Failure::usage(format!("input has {} coordinates, protocol expects {dim}", parts.len())));
    }
    parts
        .iter()
        .map(|p| parse(p).ok_or_else(|| Failure::usage(format!("cannot parse coordinate {:?}", p.trim()))))
        .collect()
}

fn space_value(space: VarSpace) -> Value {
    json!({ "n_x": space.n_x(), "n_y": space.n_y(), "frame": space.frame() })
}

fn validate(cfg: &ConfigArgs, path: &Path) -> Outcome {
    let text = read(path)?;
    let doc = match ProtocolDocument::parse(&text) {
        Ok(d) => d,
        Err(FormatError::Protocol(e)) => return Err(Failure::violated(format!("{}: {e}", path.display())).into()),
        Err(e) => return Err(Failure::usage(format!("{}: {e}", path.display())).into()),
    };
    check_doc_caps(cfg, &doc)?;
    let (kind, members, nodes, depth) = match &doc {
        ProtocolDocument::Real(t) => ("real tree", 1, t.len(), t.depth()),
        ProtocolDocument::Complex(t) => ("complex tree", 1, t.len(), t.depth()),
        ProtocolDocument::RealFamily(p) => {
            ("real family", p.members().len(), p.members().iter().map(|m| m.tree.len()).sum(), p.depth())
        }
        ProtocolDocument::ComplexFamily(p) => {
            ("complex family", p.members().len(), p.members().iter().map(|m| m.tree.len()).sum(), p.depth())
        }
    };
    let depth = depth.map_err(Failure::violated)?;
    Ok(Report::with_headline(
        "valid",
        json!({ "kind": kind, "space": space_value(doc.space()), "members": members, "nodes": nodes, "depth": depth }),
    ))
}

fn run(cfg: &ConfigArgs, path: &Path, input: &str) -> Outcome {
    let dim = |t: VarSpace| t.dim();
    let value = match load(cfg, path)? {
        ProtocolDocument::Real(t) => {
            let x = parse_input(input, dim(t.space()), parse_rational)?;
            serde_json::to_value(t.run_rational(&x).map_err(Failure::usage)?)
        }
        ProtocolDocument::Complex(t) => {
            let x = parse_input(input, dim(t.space()), parse_complex)?;
            serde_json::to_value(t.run_rational(&x).map_err(Failure::usage)?)
        }
        _ => return Err(Failure::usage("run takes a single protocol tree; use prob for families").into()),
    }
    .expect("transcripts serialize");
    Ok(Report::new(value))
}

fn run_inf(cfg: &ConfigArgs, path: &Path, signs: &str, xz: bool) -> Outcome {
    let tree = load_real_tree(cfg, path)?;
    let frame = if xz { Frame::XZ } else { Frame::XY };
    let point = SignPoint::parse(signs, frame).map_err(Failure::usage)?;
    if point.dim() != tree.space().dim() {
        return Err(Failure::usage(format!(
            "sign point has {} coordinates, protocol expects {}",
            point.dim(),
            tree.space().dim()
        ))
        .into());
    }
    let order = order(cfg, point.dim())?;
    let t = tree.run_infinitesimal(&point, &order).map_err(Failure::usage)?;
    let composed: Vec<String> = t.composed_tests().map_err(Failure::usage)?.iter().map(ToString::to_string).collect();
    let mut value = serde_json::to_value(&t).expect("transcripts serialize");
    value["point"] = json!(point.to_string());
    value["composed_tests"] = json!(composed);
    Ok(Report::new(value))
}

fn decision(p: &Rational, threshold: &Rational) -> &'static str {
    if p > threshold {
        "accept"
    } else if &(one() - p) > threshold {
        "reject"
    } else {
        "undecided"
    }
}

fn prob(cfg: &ConfigArgs, path: &Path, input: &str) -> Outcome {
    let doc = load(cfg, path)?;
    let dim = doc.space().dim();
    let p = match &doc {
        ProtocolDocument::Real(t) => {
            let x = parse_input(input, dim, parse_rational)?;
            ProbabilisticProtocol::uniform(vec![t.clone()]).and_then(|pp| pp.acceptance_probability(&x))
        }
        ProtocolDocument::RealFamily(pp) => pp.acceptance_probability(&parse_input(input, dim, parse_rational)?),
        ProtocolDocument::Complex(t) => {
            let x = parse_input(input, dim, parse_complex)?;
            ProbabilisticProtocol::uniform(vec![t.clone()]).and_then(|pp| pp.acceptance_probability(&x))
        }
        ProtocolDocument::ComplexFamily(pp) => pp.acceptance_probability(&parse_input(input, dim, parse_complex)?),
    }
    .map_err(Failure::usage)?;
    Ok(Report::new(json!({
        "probability": format_rational(&p),
        "threshold": format_rational(&cfg.threshold),
        "decision": decision(&p, &cfg.threshold),
    })))
}

fn named_set(name: &str, n: usize, n_y: usize) -> Result<SetDescriptor, Failure> {
    Ok(match name {
        "orthant" => SetDescriptor::Orthant { n_x: n, n_y },
        "orthant-closure" => SetDescriptor::OrthantClosure { n_x: n, n_y },
        "polyhedron-s" | "S" => SetDescriptor::PolyhedronS { n },
        "arrangement" | "R" => SetDescriptor::diagonal_arrangement(n),
        "arrangement-full" => SetDescriptor::full_arrangement(n),
        "inner-product" | "U" => SetDescriptor::InnerProductHypersurface { n },
        "emptiness" => SetDescriptor::EmptinessSet { n },
        "knapsack" => SetDescriptor::KnapsackSet { n },
        other => return Err(Failure::usage(format!("unknown set {other:?}"))),
    })
}

fn mc(cfg: &ConfigArgs, path: &Path, set: &str, n: Option<usize>, n_y: Option<usize>, trials: u64) -> Outcome {
    let doc = load(cfg, path)?;
    let space = doc.space();
    let set = if set.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(set).map_err(|e| Failure::usage(format!("--set: {e}")))?;
        set_from_value(&v).map_err(|e| Failure::usage(format!("--set: {e}")))?
    } else {
        let n = n.unwrap_or(space.n_x());
        named_set(set, n, n_y.unwrap_or(if n == space.n_x() { space.n_y() } else { n }))?
    };
    let report = match &doc {
        ProtocolDocument::Real(t) => monte_carlo(McSubject::Tree(t), &set, trials as usize, cfg.seed),
        ProtocolDocument::RealFamily(p) => monte_carlo(McSubject::Family(p), &set, trials as usize, cfg.seed),
        _ => return Err(Failure::usage("mc compares real protocols; realify complex ones first").into()),
    }
    .map_err(Failure::usage)?;
    let mut value = serde_json::to_value(&report).expect("reports serialize");
    value["set"] = set_to_value(&set);
    let out = Report::new(value);
    if report.disagreements > 0 {
        return Err(violated_with(out, format!("{} of {} trials disagree with the oracle", report.disagreements, trials)));
    }
    Ok(out)
}

fn complex_tree<C: Scalar>(name: &str, n: usize, cap: usize) -> Result<ProtocolTree<C>, zoo::ZooError> {
    match name {
        "arrangement" => zoo::build_arrangement_det(n, diagonal_forms(n).as_slice()),
        "arrangement-full" => zoo::build_arrangement_det(n, full_forms(n).as_slice()),
        "emptiness" => zoo::build_emptiness_det(n),
        _ => zoo::build_knapsack_det(n, cap),
    }
}

fn forms_of(set: SetDescriptor) -> Vec<Polynomial> {
    match set {
        SetDescriptor::Arrangement { forms, .. } => forms,
        _ => unreachable!("arrangement constructors return arrangements"),
    }
}

fn diagonal_forms(n: usize) -> Vec<Polynomial> {
    forms_of(SetDescriptor::diagonal_arrangement(n))
}

fn full_forms(n: usize) -> Vec<Polynomial> {
    forms_of(SetDescriptor::full_arrangement(n))
}

fn zoo_emit(cfg: &ConfigArgs, name: &str, n: usize, n_y: Option<usize>, complex: bool, members: Option<usize>) -> Outcome {
    let n_y = n_y.unwrap_or(n);
    let usage = |e: zoo::ZooError| Halt::from(Failure::usage(e));
    let value = match name {
        "arrangement" | "arrangement-full" | "emptiness" | "knapsack" if complex => {
            tree_to_value(&complex_tree::<algcomm::ComplexRational>(name, n, cfg.knapsack_cap).map_err(usage)?)
        }
        "arrangement" | "arrangement-full" | "emptiness" | "knapsack" => {
            tree_to_value(&complex_tree::<Rational>(name, n, cfg.knapsack_cap).map_err(usage)?)
        }
        _ if complex => return Err(Failure::usage(format!("{name} has no complex variant")).into()),
        "orthant" => tree_to_value(&zoo::build_orthant_det(n, n_y).map_err(usage)?),
        "orthant-closure" => tree_to_value(&zoo::build_orthant_closure_det(n, n_y).map_err(usage)?),
        "polyhedron-s" => tree_to_value(&zoo::build_polyhedron_det(n).map_err(usage)?),
        "inner-product" => tree_to_value(&zoo::build_inner_product_det(n).map_err(usage)?),
        "orthant-prob" => {
            let mode = match members {
                Some(members) => FamilyMode::Sampled { members, seed: cfg.seed },
                None => FamilyMode::Exact,
            };
            let pp = zoo::build_orthant_prob(n, n_y, mode).map_err(usage)?;
            serde_json::from_str(&algcomm::format::family_to_string(&pp)).expect("families serialize")
        }
        other => return Err(Failure::usage(format!("unknown zoo protocol {other:?}")).into()),
    };
    // emit only documents that load back under the same caps
    let doc = ProtocolDocument::parse(&value.to_string()).map_err(Failure::usage)?;
    check_doc_caps(cfg, &doc)?;
    Ok(Report::document(value))
}

fn rank_options(cfg: &ConfigArgs, trials: usize, exact: bool) -> RankOptions {
    RankOptions { trials: trials.max(1), exact, ..RankOptions::with_seed(cfg.seed) }
}

fn certify_rank(
    cfg: &ConfigArgs,
    file: Option<&Path>,
    poly: Option<&str>,
    n_x: Option<usize>,
    n_y: Option<usize>,
    trials: usize,
    exact: bool,
) -> Outcome {
    let g = match (file, poly) {
        (Some(path), None) => polynomial_from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        (None, Some(expr)) => {
            let (Some(n_x), Some(n_y)) = (n_x, n_y) else {
                return Err(Failure::usage("--poly needs --n-x and --n-y").into());
            };
            parse_polynomial(expr, VarSpace::xy(n_x, n_y)).map_err(|e| Failure::usage(format!("--poly: {e}")))?
        }
        _ => return Err(Failure::usage("give a polynomial file or --poly").into()),
    };
    check_space_caps(cfg, g.space())?;
    check_poly_caps(cfg, &g, "polynomial")?;
    let cert = certify::cc_lower_bound(&g, &rank_options(cfg, trials, exact)).map_err(Failure::usage)?;
    let h = certify::hessian(&g).map_err(Failure::usage)?;
    let rechecked = cert.recheck(&h);
    let out = Report::new(json!({
        "polynomial": polynomial_to_value(&g),
        "lower_bound": cert.claimed_rank,
        "rechecked": rechecked,
        "certificate": cert,
    }));
    if !rechecked {
        return Err(violated_with(out, "rank certificate failed recheck"));
    }
    Ok(out)
}

fn divisor(cfg: &ConfigArgs, n: usize, m: u32, h: &str, trials: usize) -> Outcome {
    let space = VarSpace::xy(n, n);
    check_space_caps(cfg, space)?;
    let h = parse_polynomial(h, space).map_err(|e| Failure::usage(format!("--h: {e}")))?;
    check_poly_caps(cfg, &h, "h")?;
    let check = certify::check_divisor_lemma(n, m, &h, &rank_options(cfg, trials, false)).map_err(Failure::usage)?;
    let out = Report::new(serde_json::to_value(&check).expect("checks serialize"));
    if !check.holds {
        return Err(violated_with(out, format!("certified rank below the bound {}", check.bound)));
    }
    Ok(out)
}

fn adversary(cfg: &ConfigArgs, path: &Path) -> Outcome {
    let tree = load_real_tree(cfg, path)?;
    let order = order(cfg, tree.space().dim())?;
    let outcome = certify::orthant_adversary(&tree, &order).map_err(|e| match e {
        certify::CertifyError::Verification(_) => Failure::violated(e),
        other => Failure::usage(other),
    })?;
    let headline = match &outcome {
        AdversaryOutcome::DirectMisclassification { .. } => "direct misclassification",
        AdversaryOutcome::Fooling(_) => "fooling pair",
        AdversaryOutcome::None => "none",
    };
    let report = Report::with_headline(headline, serde_json::to_value(&outcome).expect("outcomes serialize"));
    Ok(report)
}

fn audit(cfg: &ConfigArgs, path: &Path, target: AuditTarget, trials: usize) -> Outcome {
    let pp = load_real_family(cfg, path)?;
    let n = pp.space().n_x();
    let set = match target {
        AuditTarget::S => SetDescriptor::PolyhedronS { n },
        AuditTarget::R => SetDescriptor::diagonal_arrangement(n),
    };
    let order = order(cfg, 2 * n)?;
    let report = certify::hyperplane_audit(&pp, &set, &order, &rank_options(cfg, trials, false))
        .map_err(Failure::usage)?;
    let out = Report::new(serde_json::to_value(&report).expect("reports serialize"));
    if !report.premise_violations.is_empty() {
        return Err(violated_with(out, "weighted correctness is at most the threshold on some audit points"));
    }
    match &report.selected {
        Some(s) if s.consistent => Ok(out),
        Some(_) => Err(violated_with(out, "selected member is shallower than its certified rank")),
        None => Err(violated_with(out, "no member is correct on u and on half of the test points")),
    }
}

fn det_m(l: &[u64]) -> Outcome {
    if l.iter().any(|&x| x == 0) {
        return Err(Failure::usage("entries of --l must be positive").into());
    }
    let closed = certify::m_matrix_det(l);
    let eliminated = determinant(&certify::m_matrix(l));
    let out = Report::with_headline(
        format_rational(&closed),
        json!({
            "l": l,
            "det": format_rational(&closed),
            "elimination": format_rational(&eliminated),
            "match": closed == eliminated,
        }),
    );
    if closed != eliminated {
        return Err(violated_with(out, "closed form disagrees with elimination"));
    }
    Ok(out)
}
