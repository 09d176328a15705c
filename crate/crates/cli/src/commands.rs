use serde_json::{json, Map, Value};
use syzygy_core::diagrams::{
    bielliptic, mapping_cone, rational_normal_curve, rf_by_cancellation, rf_diagram,
    scroll_diagram, secant_diagram, BettiDiagram, Orientation,
};
use syzygy_core::ellcurve::{Curve, EmbeddedCurve};
use syzygy_core::exactlin::PrimeField;
use syzygy_core::formulas::{
    binomial, bott_position, det_degree, en_term_dim, family_degree, intersection_number,
    kpe_degree, rf_betti, secant_betti, secant_betti_or_zero, secant_degree, BottPosition,
    SecantSpec,
};
use syzygy_core::idealgen::{
    curve_ideal_piece, jacobian_corank_check, required_prime, secant_ideal_piece,
};
use syzygy_core::koszul::{ideal_pieces, scrollar_span_check, strand_row, Variety};
use syzygy_core::Error;

use crate::report::{Check, Report};
use crate::{cache, DiagramKind, FormulaKind, GlobalOpts, OrientationArg, Params, Suite};

/// Number of random secant points in the Jacobian check.
const JACOBIAN_POINTS: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cache: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2: invalid parameters; 3: prime or resource problem; 1: the computation
    /// contradicted itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                Error::OutOfRange(_)
                | Error::InvalidDivisor(_)
                | Error::DimensionMismatch(_)
                | Error::NotOnCurve => 2,
                Error::InvalidModulus(_)
                | Error::SingularCurve { .. }
                | Error::PrimeTooSmall { .. }
                | Error::SamplingFailed(_)
                | Error::TooLarge { .. } => 3,
                Error::Pole | Error::NoSolution | Error::Inconsistent(_) => 1,
            },
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> Res<T> {
    v.ok_or_else(|| CliError::Usage(format!("{what} needs {flag}")))
}

fn spec(p: &Params, what: &str) -> Res<SecantSpec> {
    let n = need(p.n, "--n", what)?;
    let d = need(p.d, "--d", what)?;
    Ok(SecantSpec::new(n, d)?)
}

fn orientation(g: &GlobalOpts) -> Orientation {
    match g.orientation {
        OrientationArg::Paper => Orientation::Paper,
        OrientationArg::Macaulay => Orientation::Macaulay,
    }
}

fn base_params(g: &GlobalOpts, p: &Params) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("prime".into(), json!(g.prime));
    m.insert("seed".into(), json!(g.seed));
    m.insert("curve".into(), json!([g.curve_a, g.curve_b]));
    m.insert(
        "orientation".into(),
        json!(match g.orientation {
            OrientationArg::Paper => "paper",
            OrientationArg::Macaulay => "macaulay",
        }),
    );
    m.insert("monomial-order".into(), json!("graded-lex, x0 largest"));
    let opt = |m: &mut Map<String, Value>, k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    opt(&mut m, "n", p.n.map(|v| json!(v)));
    opt(&mut m, "d", p.d.map(|v| json!(v)));
    opt(&mut m, "g", p.g.map(|v| json!(v)));
    opt(&mut m, "k", p.k.map(|v| json!(v)));
    opt(&mut m, "l", p.l.map(|v| json!(v)));
    opt(&mut m, "step", p.step.map(|v| json!(v)));
    opt(&mut m, "j", p.j.map(|v| json!(v)));
    m
}

/// Serves the report from the cache when one is configured and holds it;
/// otherwise computes and stores it.
fn cached(
    g: &GlobalOpts,
    command: &str,
    params: Map<String, Value>,
    compute: impl FnOnce(Report) -> Res<Report>,
) -> Res<Report> {
    let dir = cache::resolve_dir(g.cache_dir.as_deref());
    let key = cache::key(command, g.prime, g.seed, &params);
    if let Some(dir) = &dir {
        if let Some(hit) = cache::load(dir, &key) {
            return Ok(hit);
        }
    }
    let report = compute(Report::new(command, params))?;
    if let Some(dir) = &dir {
        cache::store(dir, &key, &report)?;
    }
    Ok(report)
}

fn row_text<T: ToString>(vals: &[T]) -> String {
    vals.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Twists to report: the whole strand d..=n-d, or the one requested.
fn twists(spec: &SecantSpec, p: &Params) -> Res<Vec<usize>> {
    match p.step {
        None => Ok(spec.strand_range().collect()),
        Some(i) if spec.strand_range().contains(&i) => Ok(vec![i]),
        Some(i) => Err(CliError::Usage(format!(
            "--step {i} outside the strand {}..={} for {spec}",
            spec.d,
            spec.n - spec.d
        ))),
    }
}

fn formula_name(what: FormulaKind) -> &'static str {
    match what {
        FormulaKind::Betti => "betti",
        FormulaKind::En => "en",
        FormulaKind::Degree => "degree",
        FormulaKind::Kpe => "kpe",
        FormulaKind::Rf => "rf",
        FormulaKind::Family => "family",
        FormulaKind::Det => "det",
        FormulaKind::Intersection => "intersection",
        FormulaKind::Bott => "bott",
    }
}

pub fn formula(g: &GlobalOpts, what: FormulaKind, p: &Params) -> Res<Report> {
    let command = format!("formula {}", formula_name(what));
    cached(g, &command, base_params(g, p), |mut r| {
        match what {
            FormulaKind::Betti => {
                let s = spec(p, "betti")?;
                let is = twists(&s, p)?;
                let vals: Vec<i64> = is.iter().map(|&i| secant_betti(s.n, s.d, i)).collect();
                r.lines.push(format!(
                    "secant_betti {s}: C(n-d,i)C(i-1,i-d) + C(n-d,n-i)C(n-i-1,n-d-i)"
                ));
                r.lines.push(format!("twists: {}", row_text(&is)));
                r.lines.push(row_text(&vals));
                r.lines.push(format!("endpoints: (0,0):1 ({},{}):1", s.codim(), s.n));
                let cone = mapping_cone(s)?;
                for (&i, &v) in is.iter().zip(&vals) {
                    r.results.push(Check::new(
                        format!("secant_betti({},{},{i})", s.n, s.d),
                        cone.get(i + 1 - s.d, i),
                        v,
                    ));
                }
            }
            FormulaKind::En => {
                let s = spec(p, "en")?;
                let is = twists(&s, p)?;
                let vals: Vec<i64> = is.iter().map(|&i| en_term_dim(s.n, s.d, i)).collect();
                r.lines.push(format!("en_term_dim {s}: C(n-d,i)C(i-1,i-d)"));
                r.lines.push(format!("twists: {}", row_text(&is)));
                r.lines.push(row_text(&vals));
                for (&i, &v) in is.iter().zip(&vals) {
                    let direct = binomial((s.n - s.d) as i64, i as i64)
                        * binomial(i as i64 - 1, (i - s.d) as i64);
                    r.results.push(Check::new(format!("en_term_dim({},{},{i})", s.n, s.d), direct as i64, v));
                }
            }
            FormulaKind::Degree => {
                let s = spec(p, "degree")?;
                let v = secant_degree(s.n, s.d);
                r.lines.push(format!("secant_degree {s}: C(n-d,d-2) + C(n-d+1,d-1)"));
                r.lines.push(v.to_string());
                if 2 * s.d <= s.n {
                    r.results.push(Check::new(
                        format!("secant_degree({},{}) = -kpe_degree", s.n, s.d),
                        -kpe_degree(s.n, s.d),
                        v,
                    ));
                }
            }
            FormulaKind::Kpe => {
                let s = spec(p, "kpe")?;
                if 2 * s.d > s.n {
                    return Err(CliError::Usage(format!("kpe needs d <= n/2, got {s}")));
                }
                let v = kpe_degree(s.n, s.d);
                r.lines.push(format!("kpe_degree {s}: -C(n-d+1,d-1) - C(n-d,d-2)"));
                r.lines.push(v.to_string());
                r.results.push(Check::new(
                    format!("kpe_degree({},{}) = -secant_degree", s.n, s.d),
                    -secant_degree(s.n, s.d),
                    v,
                ));
            }
            FormulaKind::Rf | FormulaKind::Family => {
                let s = spec(p, formula_name(what))?;
                if s.is_hypersurface() {
                    return Err(CliError::Usage(format!("{} needs d <= n/2, got {s}", formula_name(what))));
                }
                let is = twists(&s, p)?;
                let sign = if what == FormulaKind::Rf { 1 } else { -1 };
                let vals = is
                    .iter()
                    .map(|&i| rf_betti(s.n, s.d, i).map(|v| sign * v))
                    .collect::<Result<Vec<_>, _>>()?;
                r.lines.push(if what == FormulaKind::Rf {
                    format!("rf_betti {s}: C(n-d,i)C(i,d) n/(n-d)")
                } else {
                    format!("family_degree {s}: -C(n-d,i)C(i,d) n/(n-d)")
                });
                r.lines.push(format!("twists: {}", row_text(&is)));
                r.lines.push(row_text(&vals));
                for (&i, &v) in is.iter().zip(&vals) {
                    let split = secant_betti(s.n, s.d, i) + secant_betti_or_zero(s.n, s.d + 1, i);
                    r.results.push(Check::new(
                        format!("{}({},{},{i}) = secant(d) + secant(d+1)", formula_name(what), s.n, s.d),
                        sign * split,
                        v,
                    ));
                    if what == FormulaKind::Family {
                        family_degree(s.n, s.d, i)?;
                    }
                }
            }
            FormulaKind::Det => {
                let k = need(p.k, "--k", "det")?;
                let l = need(p.l, "--l", "det")?;
                if l == 0 || k < l {
                    return Err(CliError::Usage(format!("det needs 1 <= l <= k, got k={k} l={l}")));
                }
                let v = det_degree(k, l);
                r.lines.push(format!("det_degree k={k} l={l}: C(k,l-1)"));
                r.lines.push(v.to_string());
                r.results.push(Check::new(format!("det_degree({k},{l})"), binomial(k as i64, l as i64 - 1) as i64, v));
            }
            FormulaKind::Intersection => {
                let s = spec(p, "intersection")?;
                let is: Vec<usize> = match p.step {
                    Some(i) if i < s.d => vec![i],
                    Some(i) => {
                        return Err(CliError::Usage(format!("intersection needs i <= d-1, got i={i}")))
                    }
                    None => (0..s.d).collect(),
                };
                let vals: Vec<i64> = is.iter().map(|&i| intersection_number(s.n, s.d, i)).collect();
                r.lines.push(format!("intersection_number {s}: C(n-d,d-i-1)"));
                r.lines.push(format!("i: {}", row_text(&is)));
                r.lines.push(row_text(&vals));
                if let Some(0) = is.first() {
                    // H^{2d-2} is the degree of the scroll's determinantal locus
                    r.results.push(Check::new(
                        format!("intersection_number({},{},0) = det_degree(n-d,d)", s.n, s.d),
                        det_degree(s.n - s.d, s.d),
                        vals[0],
                    ));
                }
            }
            FormulaKind::Bott => {
                let n = need(p.n, "--n", "bott")?;
                if n == 0 {
                    return Err(CliError::Usage("bott needs n >= 1".into()));
                }
                let is: Vec<usize> = match p.step {
                    Some(i) => vec![i],
                    None => (0..n).collect(),
                };
                let js: Vec<i64> = match p.j {
                    Some(j) => vec![j],
                    None => (-(n as i64) - 2..=1).collect(),
                };
                r.lines.push(format!("cohomology of Ω^i(j) on P^{n}"));
                r.lines.push(format!("j: {}", row_text(&js)));
                for &i in &is {
                    let cells = js
                        .iter()
                        .map(|&j| bott_position(i, j, n))
                        .collect::<Result<Vec<_>, _>>()?;
                    r.lines.push(format!("i={i}: {}", row_text(&cells)));
                    if js.contains(&-(i as i64)) {
                        let pos = bott_position(i, -(i as i64), n)?;
                        r.results.push(Check::new(format!("h^{i}(Ω^{i}) position"), BottPosition::Hi, pos));
                    }
                }
            }
        }
        Ok(r)
    })
}

fn diagram_name(kind: DiagramKind) -> &'static str {
    match kind {
        DiagramKind::Secant => "secant",
        DiagramKind::Scroll => "scroll",
        DiagramKind::Cone => "cone",
        DiagramKind::Bielliptic => "bielliptic",
        DiagramKind::Rf => "rf",
        DiagramKind::Rnc => "rnc",
    }
}

pub fn diagram(g: &GlobalOpts, kind: DiagramKind, p: &Params) -> Res<Report> {
    let command = format!("diagram {}", diagram_name(kind));
    cached(g, &command, base_params(g, p), |mut r| {
        let (diag, check): (BettiDiagram, Option<Check>) = match kind {
            DiagramKind::Secant => {
                let s = spec(p, "diagram secant")?;
                let d = secant_diagram(s);
                let c = Check::new("mapping cone = formula", mapping_cone(s)?.to_json(), d.to_json());
                (d, Some(c))
            }
            DiagramKind::Cone => {
                let s = spec(p, "diagram cone")?;
                let d = mapping_cone(s)?;
                let c = Check::new("mapping cone = formula", secant_diagram(s).to_json(), d.to_json());
                (d, Some(c))
            }
            DiagramKind::Scroll => (scroll_diagram(spec(p, "diagram scroll")?), None),
            DiagramKind::Rf => {
                let s = spec(p, "diagram rf")?;
                let d = rf_diagram(s)?;
                let c = Check::new("cancellation = formula", rf_by_cancellation(s)?.to_json(), d.to_json());
                (d, Some(c))
            }
            DiagramKind::Bielliptic => {
                let genus = need(p.g, "--g", "diagram bielliptic")?;
                let d = bielliptic(genus)?;
                let c = Check::new(
                    "gorenstein symmetry",
                    d.dual(genus - 2, genus + 1)?.to_json(),
                    d.to_json(),
                );
                (d, Some(c))
            }
            DiagramKind::Rnc => {
                let k = need(p.k, "--k", "diagram rnc")?;
                if k < 2 {
                    return Err(CliError::Usage(format!("rational normal curve needs k >= 2, got {k}")));
                }
                (rational_normal_curve(k), None)
            }
        };
        r.lines = diag.render(orientation(g)).lines().map(String::from).collect();
        r.diagram = Some(diag.to_json());
        r.results.extend(check);
        Ok(r)
    })
}

fn field(g: &GlobalOpts) -> Res<PrimeField> {
    Ok(PrimeField::new(g.prime)?)
}

fn embedded(g: &GlobalOpts, n: usize, max_degree: usize) -> Res<EmbeddedCurve> {
    let f = field(g)?;
    let required = required_prime(n, max_degree);
    if g.prime < required {
        return Err(Error::PrimeTooSmall {
            required,
            reason: format!("sampling degree-{max_degree} forms on the degree-{n} curve"),
        }
        .into());
    }
    let curve = Curve::new(f, f.from_i64(g.curve_a), f.from_i64(g.curve_b))?;
    Ok(EmbeddedCurve::new(curve, n, g.seed)?)
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Koszul => "koszul",
        Suite::Span => "span",
        Suite::Smoothness => "smoothness",
        Suite::Identities => "identities",
    }
}

pub fn verify(g: &GlobalOpts, suite: Suite, p: &Params) -> Res<Report> {
    let command = format!("verify {}", suite_name(suite));
    let mut params = base_params(g, p);
    match suite {
        Suite::Koszul => {
            params.insert("divisors".into(), json!(p.divisors));
        }
        Suite::Span => {
            params.insert("max_bundles".into(), json!(p.max_bundles));
        }
        Suite::Smoothness => {
            params.insert("points".into(), json!(JACOBIAN_POINTS));
        }
        Suite::Identities => {
            params.insert("max_n".into(), json!(p.max_n));
        }
    }
    cached(g, &command, params, |mut r| {
        match suite {
            Suite::Koszul => verify_koszul(g, p, &mut r)?,
            Suite::Span => verify_span(g, p, &mut r)?,
            Suite::Smoothness => verify_smoothness(g, p, &mut r)?,
            Suite::Identities => verify_identities(p, &mut r)?,
        }
        Ok(r)
    })
}

fn header(g: &GlobalOpts, what: &str, s: &SecantSpec) -> String {
    format!("verify {what} {s} p={} seed={}", g.prime, g.seed)
}

fn verify_koszul(g: &GlobalOpts, p: &Params, r: &mut Report) -> Res<()> {
    let s = spec(p, "verify koszul")?;
    let ec = embedded(g, s.n, s.d)?;
    let mut rng = ec.rng();
    r.lines.push(header(g, "koszul", &s));
    if s.is_hypersurface() {
        // Sec_{d-1} is a degree-n hypersurface: nothing in degree d
        let (_, piece) = ideal_pieces(&ec, &Variety::Secant(s.d), &mut rng)?;
        r.check(Check::new(format!("secant (I)_{} dimension", s.d), 0, piece.dim()));
    } else {
        let (label, variety) = if s.d == 2 {
            ("curve", Variety::Curve)
        } else {
            ("secant", Variety::Secant(s.d))
        };
        let row = strand_row(&ec, &variety, &mut rng)?;
        let mut entries = vec![((0, 0), 1u64), ((s.codim(), s.n), 1)];
        for &(i, b) in &row {
            r.check(Check::new(format!("{label} strand i={i}"), secant_betti(s.n, s.d, i), b));
            entries.push(((i + 1 - s.d, i), b as u64));
        }
        let computed = BettiDiagram::from_entries(entries);
        let entries = |d: &BettiDiagram| d.entries().collect::<Vec<_>>();
        r.check(Check::new("diagram", entries(&secant_diagram(s)), entries(&computed)));
        r.lines.extend(computed.render(orientation(g)).lines().map(String::from));
        r.diagram = Some(computed.to_json());
        for k in 0..p.divisors {
            let div = ec.random_divisor(s.d, &mut rng)?;
            for (i, b) in strand_row(&ec, &Variety::Scroll(div), &mut rng)? {
                r.check(Check::new(
                    format!("scroll #{k} strand i={i}"),
                    en_term_dim(s.n, s.d, i),
                    b,
                ));
            }
        }
    }
    Ok(())
}

fn verify_span(g: &GlobalOpts, p: &Params, r: &mut Report) -> Res<()> {
    let s = spec(p, "verify span")?;
    if s.is_hypersurface() {
        return Err(CliError::Usage(format!("span check needs d <= n/2, got {s}")));
    }
    let is = twists(&s, p)?;
    let ec = embedded(g, s.n, s.d)?;
    let mut rng = ec.rng();
    r.lines.push(header(g, "span", &s));
    for i in is {
        let rep = scrollar_span_check(&ec, s.d, i, p.max_bundles, &mut rng)?;
        r.check(Check::new(
            format!("target i={i}"),
            secant_betti(s.n, s.d, i),
            rep.target_dim,
        ));
        let mut c = Check::new(format!("span i={i}"), rep.target_dim, rep.span_dim);
        c.bundles_used = Some(rep.bundles_used);
        r.lines.push(format!("{} (bundles_used {})", c.line(), rep.bundles_used));
        r.results.push(c);
    }
    Ok(())
}

fn verify_smoothness(g: &GlobalOpts, p: &Params, r: &mut Report) -> Res<()> {
    let s = spec(p, "verify smoothness")?;
    let ec = embedded(g, s.n, s.d)?;
    let mut rng = ec.rng();
    r.lines.push(header(g, "smoothness", &s));
    let below = secant_ideal_piece(&ec, s.d, s.d - 1, &mut rng)?;
    r.check(Check::new(format!("(I_Sec{})_{} = 0", s.d - 1, s.d - 1), 0, below.dim()));
    if s.d < s.n / 2 + 1 {
        let next = secant_ideal_piece(&ec, s.d + 1, s.d, &mut rng)?;
        r.check(Check::new(format!("(I_Sec{})_{} = 0", s.d, s.d), 0, next.dim()));
    }
    if !s.is_hypersurface() {
        let piece = if s.d == 2 {
            curve_ideal_piece(&ec, 2, &mut rng)?
        } else {
            secant_ideal_piece(&ec, s.d, s.d, &mut rng)?
        };
        let ranks = (0..JACOBIAN_POINTS)
            .map(|_| jacobian_corank_check(&ec, s.d, &piece, &mut rng))
            .collect::<Result<Vec<_>, _>>()?;
        r.check(Check::new(
            "jacobian rank at secant points",
            vec![s.codim(); JACOBIAN_POINTS],
            ranks,
        ));
    }
    Ok(())
}

/// Counts how many cases of an identity hold.
fn tally(name: &str, cases: impl Iterator<Item = bool>) -> Check {
    let (mut total, mut ok) = (0usize, 0usize);
    for c in cases {
        total += 1;
        ok += c as usize;
    }
    Check::new(name, total, ok)
}

fn valid_triples(max_n: usize, hyper: bool) -> impl Iterator<Item = (usize, usize, usize)> {
    (4..=max_n).flat_map(move |n| {
        let top = if hyper { n.div_ceil(2) } else { n / 2 };
        (2..=top).flat_map(move |d| (d..=n.saturating_sub(d)).map(move |i| (n, d, i)))
    })
}

fn verify_identities(p: &Params, r: &mut Report) -> Res<()> {
    let max_n = p.max_n;
    if max_n < 4 {
        return Err(CliError::Usage(format!("--max-n must be at least 4, got {max_n}")));
    }
    r.lines.push(format!("verify identities max_n={max_n}"));
    r.check(tally(
        "gorenstein symmetry",
        (4..=max_n).flat_map(|n| {
            (2..=n.div_ceil(2))
                .flat_map(move |d| (0..=n).map(move |i| secant_betti(n, d, i) == secant_betti(n, d, n - i)))
        }),
    ));
    r.check(tally(
        "rf = secant(d) + secant(d+1)",
        valid_triples(max_n, false).map(|(n, d, i)| {
            rf_betti(n, d, i).ok() == Some(secant_betti(n, d, i) + secant_betti_or_zero(n, d + 1, i))
        }),
    ));
    r.check(tally(
        "-kpe_degree = secant_degree",
        (4..=max_n).flat_map(|n| (2..=n / 2).map(move |d| -kpe_degree(n, d) == secant_degree(n, d))),
    ));
    r.check(tally(
        "family_degree integral",
        valid_triples(max_n, false).map(|(n, d, i)| family_degree(n, d, i).is_ok()),
    ));
    r.check(tally(
        "C(n-d,i)C(i,d) = C(n-d,n-i)C(n-i,d)",
        valid_triples(max_n, false).map(|(n, d, i)| {
            let (n, d, i) = (n as i64, d as i64, i as i64);
            binomial(n - d, i) * binomial(i, d) == binomial(n - d, n - i) * binomial(n - i, d)
        }),
    ));
    let cone_max = max_n.min(14);
    r.check(tally(
        &format!("mapping cone = formula diagram (n <= {cone_max})"),
        (4..=cone_max).flat_map(|n| {
            (2..=n.div_ceil(2)).map(move |d| {
                let s = SecantSpec::new(n, d).expect("valid range");
                mapping_cone(s).ok() == Some(secant_diagram(s))
            })
        }),
    ));
    Ok(())
}
